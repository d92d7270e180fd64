//! Sequential random-measurement detection protocol and Monte-Carlo
//! aggregation.
//!
//! One trial measures an unknown state along uniformly random homodyne
//! directions, one at a time, and refits the witness program after every
//! round; it stops at the first witness value below one or when the setting
//! budget runs out. The Monte-Carlo layer repeats trials over a family of
//! states and histograms how many settings detection needed, column by
//! entanglement.
//!
//! With exact second moments a round's verdict is the witness status itself.
//! With simulated Gaussian data each direction is measured a fixed number of
//! times; the first half of the outcomes fits the coefficients, the second
//! half independently re-estimates the witness value, and detection requires
//! the upper end of its confidence interval to fall below one.

use crate::error::{Error, Result};
use crate::homodyne::{sample_setting, tomographic_count, MeasurementRecord};
use crate::scalar::{to_f64, Scalar};
use crate::states::{
    bound_entangled_4mode, log_negativity, random_covariance_from, squeezed_vacuum,
    RandomStateConfig,
};
use crate::stats::{sample_variance, simulate_homodyne, witness_error};
use crate::symplectic::{CovarianceMatrix, Partition};
use crate::witness::{optimize, WitnessOptions, WitnessStatus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

/// Width of one entanglement histogram column for state families whose
/// entanglement varies continuously, in bits.
pub const E_BIN_WIDTH: f64 = 0.25;

/// How a round's variance is produced from the state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoiseModel {
    /// exact second moments u^T gamma u
    Off,
    /// Gaussian quadrature data, the given number of repetitions per setting
    Gaussian { repetitions: usize },
}

/// Parameters of one detection trial.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DetectionConfig<T> {
    pub partition: Partition,
    /// setting budget before the trial gives up
    pub max_settings: usize,
    /// a witness value below 1 - detect_tol counts as detection
    pub detect_tol: T,
    pub noise: NoiseModel,
    /// master seed; every trial runs on the stream selected by its index
    pub seed: u64,
}

impl<T: Scalar> DetectionConfig<T> {
    /// Defaults: twice the tomographically complete setting count as the
    /// budget, exact variances, the witness module's detection tolerance.
    pub fn new(partition: Partition) -> Self {
        let budget = 2 * tomographic_count(partition.modes());
        DetectionConfig {
            partition,
            max_settings: budget,
            detect_tol: WitnessOptions::default().detect_tol,
            noise: NoiseModel::Off,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_settings < 2 {
            return Err(Error::BadConfig(format!(
                "budget of {} settings can never detect: at least 2 are required",
                self.max_settings
            )));
        }
        if let NoiseModel::Gaussian { repetitions } = self.noise {
            if repetitions < 4 {
                return Err(Error::NotEnoughSamples { expected: 4, got: repetitions });
            }
        }
        Ok(())
    }

    fn witness_options(&self) -> WitnessOptions<T> {
        WitnessOptions { detect_tol: self.detect_tol, ..WitnessOptions::default() }
    }
}

/// Outcome of one sequential trial.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DetectionRecord<T> {
    pub detected: bool,
    /// rounds played; the full budget when the trial never detected
    pub settings_used: usize,
    /// witness value at the stopping round: the fit optimum under exact
    /// variances, the independent second-half estimate under noise
    pub value: Option<T>,
    /// optimum of the fitted program on the recorded variances
    pub fit_value: Option<T>,
    /// one-sigma error of `value` (noisy trials only)
    pub error: Option<T>,
    /// logarithmic negativity of the state, two-mode states only
    #[serde(rename = "E")]
    pub e: Option<T>,
    /// stream index under the master seed that replays this trial
    pub trial: u64,
    /// the final round ended without a usable verdict (solver failure or a
    /// noise-unbounded fit)
    pub trouble: bool,
    /// the variance records the final fit used (sample variances of the
    /// fitting half under noise)
    pub records: Vec<MeasurementRecord<T>>,
}

/// Independent per-trial generator: the master seed picks the generator, the
/// trial index selects its stream.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// Run one sequential detection trial on the stream picked by `trial`.
pub fn detect<T: Scalar>(
    gamma: &CovarianceMatrix<T>,
    config: &DetectionConfig<T>,
    trial: u64,
) -> Result<DetectionRecord<T>> {
    let mut rng = trial_rng(config.seed, trial);
    detect_core(gamma, config, &mut rng, trial)
}

fn detect_core<T: Scalar>(
    gamma: &CovarianceMatrix<T>,
    config: &DetectionConfig<T>,
    rng: &mut impl Rng,
    trial: u64,
) -> Result<DetectionRecord<T>> {
    config.validate()?;
    if gamma.modes() != config.partition.modes() {
        return Err(Error::BadDimension {
            expected: format!("{}-mode state", config.partition.modes()),
            got: format!("{}-mode state", gamma.modes()),
        });
    }
    if !gamma.physical() {
        return Err(Error::BadConfig("covariance matrix is not physical".into()));
    }
    let e = if gamma.modes() == 2 { Some(log_negativity(gamma)?.e) } else { None };

    let options = config.witness_options();
    let mut fit: Vec<MeasurementRecord<T>> = Vec::with_capacity(config.max_settings);
    let mut holdout: Vec<T> = Vec::new();
    let mut holdout_n = 0usize;
    let mut last_value = None;
    let mut last_fit_value = None;
    let mut last_error = None;
    let mut last_trouble = false;
    for round in 1..=config.max_settings {
        let setting = sample_setting(gamma.modes(), rng)?;
        match config.noise {
            NoiseModel::Off => fit.push(MeasurementRecord::exact(gamma, setting)?),
            NoiseModel::Gaussian { repetitions } => {
                let sample = simulate_homodyne(gamma, &setting, repetitions, rng)?;
                let half = repetitions / 2;
                let first = sample_variance(&sample.outcomes[..half])?;
                let second = sample_variance(&sample.outcomes[half..])?;
                holdout_n = repetitions - half;
                fit.push(MeasurementRecord::observed(sample.setting, first.variance));
                holdout.push(second.variance);
            }
        }
        if round < 2 {
            // a single rank-one record never admits a witness
            continue;
        }
        let res = optimize(&fit, &config.partition, &options)?;
        last_trouble = res.status == WitnessStatus::NumericalTrouble;
        last_fit_value = res.value;
        match config.noise {
            NoiseModel::Off => {
                last_value = res.value;
                if res.status == WitnessStatus::Detected {
                    return Ok(DetectionRecord {
                        detected: true,
                        settings_used: round,
                        value: res.value,
                        fit_value: res.value,
                        error: None,
                        e,
                        trial,
                        trouble: false,
                        records: fit,
                    });
                }
            }
            NoiseModel::Gaussian { .. } => {
                if res.value.is_some() {
                    let est = witness_error(&res.c, &holdout, holdout_n)?;
                    last_value = Some(est.value);
                    last_error = Some(est.error);
                    if est.upper_confidence() < T::one() - config.detect_tol {
                        return Ok(DetectionRecord {
                            detected: true,
                            settings_used: round,
                            value: Some(est.value),
                            fit_value: res.value,
                            error: Some(est.error),
                            e,
                            trial,
                            trouble: false,
                            records: fit,
                        });
                    }
                } else {
                    last_value = None;
                    last_error = None;
                }
            }
        }
    }
    Ok(DetectionRecord {
        detected: false,
        settings_used: config.max_settings,
        value: last_value,
        fit_value: last_fit_value,
        error: last_error,
        e,
        trial,
        trouble: last_trouble,
        records: fit,
    })
}

/// State distribution a Monte-Carlo run draws its trials from.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum StateFamily<T> {
    /// two-mode squeezed vacuum; trial i takes the grid value i mod len, and
    /// each grid point is its own histogram column with exactly known
    /// entanglement
    SqueezedGrid { r_values: Vec<T> },
    /// random two-mode covariance matrices; separable draws are rejected and
    /// redrawn, entanglement is binned in fixed-width columns (the config's
    /// own seed is ignored here, draws come from the trial stream)
    Random(RandomStateConfig<T>),
    /// the reference four-mode bound entangled state, a single column
    Bound4,
}

impl<T: Scalar> StateFamily<T> {
    pub fn modes(&self) -> usize {
        match self {
            StateFamily::SqueezedGrid { .. } => 2,
            StateFamily::Random(config) => config.modes,
            StateFamily::Bound4 => 4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            StateFamily::SqueezedGrid { r_values } => {
                if r_values.is_empty() {
                    return Err(Error::Empty("squeezing grid has no points".into()));
                }
                Ok(())
            }
            StateFamily::Random(config) => {
                config.validate()?;
                if config.modes != 2 {
                    return Err(Error::BadConfig(
                        "random-family histograms bin by two-mode log negativity".into(),
                    ));
                }
                Ok(())
            }
            StateFamily::Bound4 => Ok(()),
        }
    }

    /// Draw the trial's state; returns it with its histogram column label.
    fn draw(&self, trial: u64, rng: &mut impl Rng) -> Result<(CovarianceMatrix<T>, f64)> {
        match self {
            StateFamily::SqueezedGrid { r_values } => {
                let r = r_values[(trial % r_values.len() as u64) as usize];
                let gamma = squeezed_vacuum(r);
                let e = to_f64(log_negativity(&gamma)?.e);
                Ok((gamma, e))
            }
            StateFamily::Random(config) => loop {
                let state = random_covariance_from(config, rng)?;
                let e = to_f64(log_negativity(&state.cm)?.e);
                if e > 0.0 {
                    let bin = (e / E_BIN_WIDTH).floor() * E_BIN_WIDTH;
                    return Ok((state.cm, bin));
                }
            },
            StateFamily::Bound4 => Ok((bound_entangled_4mode(), 0.0)),
        }
    }
}

/// One entanglement column of the detection histogram.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HistogramColumn {
    /// column label: exact entanglement (grid families) or bin lower edge
    pub e_bin: f64,
    /// trials that fell in this column
    pub trials: usize,
    /// how many of them detected within the budget
    pub detected: usize,
    /// (settings_used, fraction of the detected trials), sorted by settings
    pub fractions: Vec<(usize, f64)>,
}

impl HistogramColumn {
    /// Smallest settings count at which at least half the detected trials
    /// have finished.
    pub fn median_settings(&self) -> Option<usize> {
        let mut cumulative = 0.0;
        for &(settings, fraction) in &self.fractions {
            cumulative += fraction;
            if cumulative >= 0.5 {
                return Some(settings);
            }
        }
        None
    }
}

/// Detection-fraction histogram: per entanglement column, the distribution
/// of how many settings detection needed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HistogramTable {
    pub columns: Vec<HistogramColumn>,
}

impl HistogramTable {
    /// `E_bin,settings,fraction` rows, columns in ascending entanglement.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("E_bin,settings,fraction\n");
        for col in &self.columns {
            for &(settings, fraction) in &col.fractions {
                out.push_str(&format!("{},{},{}\n", col.e_bin, settings, fraction));
            }
        }
        out
    }
}

/// Repeat detection trials over a state family and histogram the number of
/// settings used, one column per entanglement bin.
pub fn montecarlo<T: Scalar>(
    family: &StateFamily<T>,
    trials: usize,
    config: &DetectionConfig<T>,
) -> Result<HistogramTable> {
    family.validate()?;
    config.validate()?;
    if trials == 0 {
        return Err(Error::BadConfig("a Monte-Carlo run needs at least one trial".into()));
    }
    if family.modes() != config.partition.modes() {
        return Err(Error::BadDimension {
            expected: format!("{}-mode partition", family.modes()),
            got: format!("{}-mode partition", config.partition.modes()),
        });
    }

    struct Accumulator {
        trials: usize,
        detected: usize,
        settings: BTreeMap<usize, usize>,
    }
    let mut bins: HashMap<u64, (f64, Accumulator)> = HashMap::new();
    for trial in 0..trials as u64 {
        let mut rng = trial_rng(config.seed, trial);
        let (gamma, label) = family.draw(trial, &mut rng)?;
        let record = detect_core(&gamma, config, &mut rng, trial)?;
        // non-negative floats order identically as bits, so the raw bit
        // pattern doubles as an exact, sortable bin key
        let acc = &mut bins
            .entry(label.to_bits())
            .or_insert_with(|| {
                (label, Accumulator { trials: 0, detected: 0, settings: BTreeMap::new() })
            })
            .1;
        acc.trials += 1;
        if record.detected {
            acc.detected += 1;
            *acc.settings.entry(record.settings_used).or_insert(0) += 1;
        }
    }

    let mut columns: Vec<HistogramColumn> = bins
        .into_values()
        .map(|(e_bin, acc)| {
            let fractions = acc
                .settings
                .into_iter()
                .map(|(settings, count)| (settings, count as f64 / acc.detected as f64))
                .collect();
            HistogramColumn { e_bin, trials: acc.trials, detected: acc.detected, fractions }
        })
        .collect();
    columns.sort_by(|a, b| a.e_bin.total_cmp(&b.e_bin));
    Ok(HistogramTable { columns })
}

/// Per-column median of the settings needed for detection, as a curve over
/// entanglement; columns where nothing was detected are omitted.
pub fn median_settings_vs_entanglement(table: &HistogramTable) -> Vec<(f64, usize)> {
    table
        .columns
        .iter()
        .filter_map(|col| col.median_settings().map(|m| (col.e_bin, m)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat;
    use crate::symplectic::Ordering;

    fn two_mode_config() -> DetectionConfig<f64> {
        DetectionConfig::new(Partition::bipartite_split(1, 2).unwrap())
    }

    fn vacuum(modes: usize) -> CovarianceMatrix<f64> {
        CovarianceMatrix::new(Mat::identity(2 * modes), Ordering::Interleaved).unwrap()
    }

    #[test]
    fn default_budget_is_twice_the_complete_count() {
        let config = two_mode_config();
        assert_eq!(config.max_settings, 20);
        let four = DetectionConfig::<f64>::new(Partition::bipartite_split(2, 4).unwrap());
        assert_eq!(four.max_settings, 72);
    }

    #[test]
    fn vacuum_exhausts_the_setting_budget() {
        let mut config = two_mode_config();
        config.max_settings = 8;
        let record = detect(&vacuum(2), &config, 0).unwrap();
        assert!(!record.detected);
        assert_eq!(record.settings_used, 8);
        assert_eq!(record.e, Some(0.0));
        if let Some(v) = record.value {
            assert!(v >= 1.0 - 1e-6, "vacuum witness value {v}");
        }
    }

    #[test]
    fn squeezed_vacuum_detected_with_at_least_two_settings() {
        let mut config = two_mode_config();
        config.seed = 3;
        let gamma = squeezed_vacuum(0.5);
        for trial in 0..10 {
            let record = detect(&gamma, &config, trial).unwrap();
            assert!(record.detected, "trial {trial} missed");
            assert!(record.settings_used >= 2);
            assert!(record.settings_used <= config.max_settings);
            let v = record.value.unwrap();
            assert!(v < 1.0, "detected with value {v}");
            assert_eq!(record.records.len(), record.settings_used);
        }
    }

    #[test]
    fn identical_trials_reproduce_bitwise() {
        let mut config = two_mode_config();
        config.seed = 11;
        let gamma = squeezed_vacuum(0.9);
        let a = detect(&gamma, &config, 7).unwrap();
        let b = detect(&gamma, &config, 7).unwrap();
        assert_eq!(a.detected, b.detected);
        assert_eq!(a.settings_used, b.settings_used);
        assert_eq!(a.value.map(f64::to_bits), b.value.map(f64::to_bits));
        let angles = |r: &DetectionRecord<f64>| {
            r.records.iter().map(|m| m.setting.theta.to_bits()).collect::<Vec<_>>()
        };
        assert_eq!(angles(&a), angles(&b));
        // a different stream draws different settings
        let c = detect(&gamma, &config, 8).unwrap();
        assert_ne!(angles(&a), angles(&c));
    }

    #[test]
    fn detected_record_replays_to_the_same_value() {
        let mut config = two_mode_config();
        config.seed = 5;
        let gamma = squeezed_vacuum(0.8);
        let record = detect(&gamma, &config, 1).unwrap();
        assert!(record.detected);
        let refit =
            optimize(&record.records, &config.partition, &WitnessOptions::default()).unwrap();
        assert!(
            (refit.value.unwrap() - record.fit_value.unwrap()).abs() < 1e-7,
            "replay value {:?} vs recorded {:?}",
            refit.value,
            record.fit_value
        );
    }

    #[test]
    fn histogram_columns_are_normalized_and_sorted() {
        let family = StateFamily::SqueezedGrid { r_values: vec![1.2, 0.3] };
        let mut config = two_mode_config();
        config.seed = 2;
        let table = montecarlo(&family, 60, &config).unwrap();
        assert_eq!(table.columns.len(), 2);
        assert!(table.columns[0].e_bin < table.columns[1].e_bin);
        for col in &table.columns {
            assert_eq!(col.trials, 30);
            assert!(col.detected > 0);
            let sum: f64 = col.fractions.iter().map(|f| f.1).sum();
            assert!((sum - 1.0).abs() < 1e-9, "column {} sums to {sum}", col.e_bin);
        }
    }

    #[test]
    fn montecarlo_is_reproducible_and_seed_sensitive() {
        let family = StateFamily::SqueezedGrid { r_values: vec![0.7] };
        let mut config = two_mode_config();
        config.seed = 9;
        let a = montecarlo(&family, 25, &config).unwrap();
        let b = montecarlo(&family, 25, &config).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        config.seed = 10;
        let c = montecarlo(&family, 25, &config).unwrap();
        assert_ne!(a.to_csv(), c.to_csv());
    }

    #[test]
    fn random_family_bins_by_quarter_bit_and_skips_separable() {
        let family = StateFamily::Random(
            RandomStateConfig::new(2, 1.0, 3.0, 1.2, 0).unwrap(),
        );
        let mut config = two_mode_config();
        config.seed = 4;
        let table = montecarlo(&family, 40, &config).unwrap();
        let total: usize = table.columns.iter().map(|c| c.trials).sum();
        assert_eq!(total, 40);
        for col in &table.columns {
            assert!(col.e_bin >= 0.0);
            let scaled = col.e_bin / E_BIN_WIDTH;
            assert!((scaled - scaled.round()).abs() < 1e-12, "label {}", col.e_bin);
        }
    }

    #[test]
    fn median_curve_keeps_only_detecting_columns() {
        let family = StateFamily::SqueezedGrid { r_values: vec![0.2, 1.8] };
        let mut config = two_mode_config();
        config.seed = 6;
        let table = montecarlo(&family, 80, &config).unwrap();
        let curve = median_settings_vs_entanglement(&table);
        assert_eq!(curve.len(), 2);
        // more entanglement needs at least as many settings
        assert!(curve[1].1 >= curve[0].1, "medians {curve:?}");
    }

    #[test]
    fn bound_entangled_state_detects_within_budget() {
        let config = DetectionConfig::<f64>::new(Partition::bipartite_split(2, 4).unwrap());
        let record = detect(&bound_entangled_4mode(), &config, 0).unwrap();
        assert!(record.detected, "needed {} settings", record.settings_used);
        assert!(record.value.unwrap() < 1.0);
        assert!(record.e.is_none());
    }

    #[test]
    fn noisy_vacuum_stays_undetected() {
        let mut config = two_mode_config();
        config.noise = NoiseModel::Gaussian { repetitions: 400 };
        config.max_settings = 12;
        config.seed = 8;
        for trial in 0..5 {
            let record = detect(&vacuum(2), &config, trial).unwrap();
            assert!(!record.detected, "trial {trial} false-detected");
            assert_eq!(record.settings_used, 12);
        }
    }

    #[test]
    fn noisy_squeezed_vacuum_detects_with_confidence() {
        // moderate squeezing on purpose: the state's smallest variance
        // e^{-2r} must stay well above the sample-variance noise, or the
        // fits turn unbounded before an informative family accumulates
        let mut config = two_mode_config();
        config.noise = NoiseModel::Gaussian { repetitions: 8000 };
        config.seed = 12;
        let gamma = squeezed_vacuum(0.5);
        let mut hits = 0;
        for trial in 0..10 {
            let record = detect(&gamma, &config, trial).unwrap();
            if record.detected {
                hits += 1;
                let value = record.value.unwrap();
                let error = record.error.unwrap();
                assert!(value + 3.0 * error < 1.0, "upper {}", value + 3.0 * error);
                assert!(record.fit_value.unwrap() < 1.0);
            }
        }
        assert!(hits >= 8, "only {hits} of 10 noisy trials detected");
    }

    #[test]
    fn rejects_mismatched_partition_and_budget() {
        let config = two_mode_config();
        assert!(detect(&vacuum(3), &config, 0).is_err());
        let mut tiny = two_mode_config();
        tiny.max_settings = 1;
        assert!(detect(&vacuum(2), &tiny, 0).is_err());
    }
}
