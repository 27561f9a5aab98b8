//! Monte-Carlo campaign runner: build a code family from a config, inject
//! qubit and syndrome errors, decode, judge by logical equivalence, report.
//!
//! Determinism contract: everything in a [`TrialReport`] except its
//! `volatile` block is a pure function of the [`TrialConfig`], independent
//! of worker count and scheduling. Each trial draws from its own ChaCha8
//! stream seeded by a splitmix64 mix of the master seed and the trial
//! index, results are keyed by trial index, and aggregation is
//! order-independent. Wall-clock measurements (total time, per-trial decode
//! times and their quantiles) live only in `volatile`; the CSV rendering
//! carries no timing at all, so identical configs give byte-identical CSV
//! at any worker count.

use crate::codes::{
    brute_force_distance, frs_code, rs_code, single_parity_code, BipartiteGraph, ExpanderCode,
    INF_DISTANCE,
};
use crate::descriptor::CodeDescriptor;
use crate::gf::{Field, FieldRef, Gf};
use crate::hgp::{hgp_params, logical_equiv, HgpCode, HgpError, HgpParams, Side};
use crate::matrix::{weight, Mat};
use crate::qdecode::{
    decode_noisy_version, decode_nonnoisy_version, noisy_in_promise, noisy_quantum_code,
    nonnoisy_in_promise, nonnoisy_quantum_code, observed_syndrome, stage_loads, stage_loads_split,
    BruteDecoder, NoisyQuantumCode, NonNoisyQuantumCode, QDecodeError, QuantumNoisyInstance,
    QuantumNonNoisyInstance, SliceDecoder,
};
use crate::syndec::PolyDecoder;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Display;
use std::time::Instant;
use thiserror::Error;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Identifier for the per-trial RNG derivation, recorded in every report.
pub const RNG_ID: &str = "chacha8/splitmix64";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("config {field}: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    fn new(field: &str, message: impl Display) -> ConfigError {
        ConfigError { field: field.to_string(), message: message.to_string() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    ExpanderNoisy,
    RsNonnoisy,
    FrsNonnoisy,
    Generic,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldParams {
    pub r: u32,
    /// Optional cross-check; must equal the canonical modulus for r.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum GraphParams {
    /// The fixed point-line incidence of AG(2,3): certified expansion,
    /// decoding radius 1.
    AffinePlane,
    Random { n_left: usize, n_right: usize, d_left: usize, d_right: usize, seed: u64 },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CodeParams {
    pub n: Option<usize>,
    pub k: Option<usize>,
    /// Folding parameter for the frs-nonnoisy family.
    pub s: Option<usize>,
    pub graph: Option<GraphParams>,
    /// Per-slice promise radius for expander-noisy. Defaults to 1 for the
    /// affine-plane graph (its certificate); required for random graphs,
    /// where it should come from an empirical sweep.
    pub radius: Option<usize>,
    /// Total-weight budget handed to the decoder; derived from the error
    /// model when absent.
    pub weight_budget: Option<usize>,
    /// Constituent code for the generic family.
    pub descriptor: Option<CodeDescriptor>,
}

/// Exactly one of weight/rate per noise source; both absent means none.
/// Fixed weight is the primary model (the guarantees are adversarial in
/// weight); the iid model is kept for random-error experiments.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ErrorModel {
    pub qubit_weight: Option<usize>,
    pub qubit_rate: Option<f64>,
    pub syndrome_weight: Option<usize>,
    pub syndrome_rate: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialConfig {
    pub family: Family,
    pub field: FieldParams,
    #[serde(default)]
    pub code: CodeParams,
    #[serde(default)]
    pub error_model: ErrorModel,
    #[serde(default)]
    pub trials: u64,
    #[serde(default)]
    pub master_seed: u64,
    /// Worker threads; 0 picks the library default. Does not affect any
    /// deterministic output.
    #[serde(default)]
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub qubit_weight: usize,
    pub syndrome_weight: usize,
    /// Largest load any single constituent decode saw, over both stages.
    pub max_slice_load: usize,
    pub in_promise: bool,
    pub success: bool,
    pub failure_stage: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub trials: u64,
    pub successes: u64,
    /// None (JSON null) when there were no trials.
    pub success_rate: Option<f64>,
    pub in_promise_trials: u64,
    pub in_promise_successes: u64,
    /// Success rate over in-promise trials only; None when there were none.
    pub promise_success_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Environment {
    pub version: String,
    pub rng: String,
    pub master_seed: u64,
}

/// Wall-clock data, quarantined from the determinism contract.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolatileBlock {
    pub total_wall_ms: f64,
    /// Per-trial decode time, indexed by trial.
    pub decode_micros: Vec<u64>,
    pub decode_micros_p50: Option<u64>,
    pub decode_micros_p90: Option<u64>,
    pub decode_micros_p99: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialReport {
    pub schema_version: u32,
    pub config: TrialConfig,
    pub records: Vec<TrialRecord>,
    pub aggregates: Aggregates,
    pub environment: Environment,
    pub volatile: VolatileBlock,
}

/// splitmix64 finalizer; the standard constants.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-trial seed: mixes the master seed with the trial index so streams
/// are independent and reproducible in any execution order.
pub fn trial_seed(master_seed: u64, trial: u64) -> u64 {
    splitmix64(master_seed ^ splitmix64(trial.wrapping_add(1)))
}

enum Built {
    Noisy {
        qc: NoisyQuantumCode,
        radius: usize,
    },
    Split {
        qc: NonNoisyQuantumCode,
        dec_c: Box<dyn SliceDecoder + Send + Sync>,
        dec_dual: Box<dyn SliceDecoder + Send + Sync>,
        fold: usize,
        r_base: usize,
        r_dual: usize,
    },
}

/// A validated, fully built campaign: the code, its decoders and the
/// resolved budget, ready to run any number of times.
pub struct Campaign {
    config: TrialConfig,
    built: Built,
    budget: usize,
}

fn build_field(p: &FieldParams) -> Result<FieldRef, ConfigError> {
    if p.r == 0 || p.r > 16 {
        return Err(ConfigError::new("field.r", "r must be in 1..=16"));
    }
    let f = Field::canonical(p.r);
    if let Some(m) = p.modulus {
        if m != f.modulus() {
            return Err(ConfigError::new(
                "field.modulus",
                format!("expected the canonical modulus {:#x} for r = {}", f.modulus(), p.r),
            ));
        }
    }
    Ok(f)
}

fn require<T: Copy>(v: Option<T>, field: &str) -> Result<T, ConfigError> {
    v.ok_or_else(|| ConfigError::new(field, "required for this family"))
}

fn check_model(m: &ErrorModel) -> Result<(), ConfigError> {
    if m.qubit_weight.is_some() && m.qubit_rate.is_some() {
        return Err(ConfigError::new("error_model.qubit_weight", "give a weight or a rate, not both"));
    }
    if m.syndrome_weight.is_some() && m.syndrome_rate.is_some() {
        return Err(ConfigError::new(
            "error_model.syndrome_weight",
            "give a weight or a rate, not both",
        ));
    }
    for (name, rate) in [("qubit_rate", m.qubit_rate), ("syndrome_rate", m.syndrome_rate)] {
        if let Some(p) = rate {
            if !(0.0..=1.0).contains(&p) {
                return Err(ConfigError::new(
                    &format!("error_model.{name}"),
                    "rate must lie in [0, 1]",
                ));
            }
        }
    }
    Ok(())
}

fn default_budget(m: &ErrorModel, nn: usize) -> usize {
    let fixed = m.qubit_weight.unwrap_or(0) + m.syndrome_weight.unwrap_or(0);
    let expected =
        2.0 * nn as f64 * m.qubit_rate.unwrap_or(0.0) + nn as f64 * m.syndrome_rate.unwrap_or(0.0);
    fixed.max((2.0 * expected).ceil() as usize).max(4)
}

fn build_split(
    base: crate::codes::LinearCode,
    dec_c: Box<dyn SliceDecoder + Send + Sync>,
    dec_dual: Box<dyn SliceDecoder + Send + Sync>,
    r_base: usize,
    r_dual: usize,
) -> Result<Built, ConfigError> {
    let fold = base.meta().map_or(1, |m| m.fold);
    let qc = nonnoisy_quantum_code(base).map_err(|e| match e {
        HgpError::HalfRateRejected { k } => ConfigError::new(
            "code.k",
            format!("k = n/2 = {k} leaves the split assembly without a distance guarantee"),
        ),
        other => ConfigError::new("code", other),
    })?;
    Ok(Built::Split { qc, dec_c, dec_dual, fold, r_base, r_dual })
}

impl Campaign {
    pub fn new(config: TrialConfig) -> Result<Campaign, ConfigError> {
        check_model(&config.error_model)?;
        let f = build_field(&config.field)?;
        let built = match config.family {
            Family::ExpanderNoisy => {
                if f.r() != 1 {
                    return Err(ConfigError::new(
                        "field.r",
                        "expander-noisy decodes by bit flipping and needs r = 1",
                    ));
                }
                let graph_params = config
                    .code
                    .graph
                    .as_ref()
                    .ok_or_else(|| ConfigError::new("code.graph", "required for this family"))?;
                let (graph, default_radius) = match graph_params {
                    GraphParams::AffinePlane => (BipartiteGraph::affine_plane(), Some(1)),
                    GraphParams::Random { n_left, n_right, d_left, d_right, seed } => {
                        let g = BipartiteGraph::random_biregular(
                            *n_left, *n_right, *d_left, *d_right, *seed,
                        )
                        .map_err(|e| ConfigError::new("code.graph", e))?;
                        (g, None)
                    }
                };
                let radius = match config.code.radius.or(default_radius) {
                    Some(r) => r,
                    None => {
                        return Err(ConfigError::new(
                            "code.radius",
                            "required for random graphs; measure it with a sweep first",
                        ))
                    }
                };
                let inner = single_parity_code(f.clone(), graph.d_right);
                let ex = ExpanderCode::new(graph, &inner)
                    .map_err(|e| ConfigError::new("code.graph", e))?;
                let qc = noisy_quantum_code(ex).map_err(|e| ConfigError::new("code", e))?;
                Built::Noisy { qc, radius }
            }
            Family::RsNonnoisy => {
                let n = require(config.code.n, "code.n")?;
                let k = require(config.code.k, "code.k")?;
                let gamma = f.root_of_order(n as u64).map_err(|e| ConfigError::new("code.n", e))?;
                let base = rs_code(f, gamma, n, k).map_err(|e| ConfigError::new("code", e))?;
                let dec_c = PolyDecoder::new(&base).map_err(|e| ConfigError::new("code", e))?;
                let dec_dual =
                    PolyDecoder::new(&base.dual()).map_err(|e| ConfigError::new("code", e))?;
                let (rb, rd) = (dec_c.promise_radius(), dec_dual.promise_radius());
                build_split(base, Box::new(dec_c), Box::new(dec_dual), rb, rd)?
            }
            Family::FrsNonnoisy => {
                let n = require(config.code.n, "code.n")?;
                let k = require(config.code.k, "code.k")?;
                let s = require(config.code.s, "code.s")?;
                let gamma = f
                    .root_of_order((s * n) as u64)
                    .map_err(|e| ConfigError::new("code.n", e))?;
                let folded =
                    frs_code(f, gamma, s, n, k).map_err(|e| ConfigError::new("code", e))?;
                let base = folded.base;
                let dec_c = PolyDecoder::new(&base).map_err(|e| ConfigError::new("code", e))?;
                let dec_dual =
                    PolyDecoder::new(&base.dual()).map_err(|e| ConfigError::new("code", e))?;
                let (rb, rd) = (dec_c.promise_radius(), dec_dual.promise_radius());
                build_split(base, Box::new(dec_c), Box::new(dec_dual), rb, rd)?
            }
            Family::Generic => {
                let desc = config
                    .code
                    .descriptor
                    .as_ref()
                    .ok_or_else(|| ConfigError::new("code.descriptor", "required for this family"))?;
                let base =
                    desc.to_code().map_err(|e| ConfigError::new("code.descriptor", e))?;
                if base.field().r() != f.r() {
                    return Err(ConfigError::new(
                        "code.descriptor",
                        format!("descriptor field r = {} disagrees with field.r", base.field().r()),
                    ));
                }
                if base.k() == 0 {
                    return Err(ConfigError::new("code.descriptor", "code carries no information"));
                }
                let budget = crate::codes::DISTANCE_BUDGET;
                let d_base = brute_force_distance(&base, budget)
                    .map_err(|e| ConfigError::new("code.descriptor", e))?;
                let d_dual = brute_force_distance(&base.dual(), budget)
                    .map_err(|e| ConfigError::new("code.descriptor", e))?;
                if d_base == INF_DISTANCE || d_dual == INF_DISTANCE {
                    return Err(ConfigError::new("code.descriptor", "degenerate constituent"));
                }
                let dec_c = BruteDecoder::new(&base, d_base / 2);
                let dec_dual = BruteDecoder::new(&base.dual(), d_dual / 2);
                build_split(
                    base,
                    Box::new(dec_c),
                    Box::new(dec_dual),
                    (d_base - 1) / 2,
                    (d_dual - 1) / 2,
                )?
            }
        };
        let mut campaign = Campaign { config, built, budget: 0 };
        let nn = campaign.n_slices() * campaign.n_slices();
        let model = &campaign.config.error_model;
        if let Some(w) = model.qubit_weight {
            if w > 2 * nn {
                return Err(ConfigError::new(
                    "error_model.qubit_weight",
                    format!("exceeds the {} qubits", 2 * nn),
                ));
            }
        }
        if let Some(w) = model.syndrome_weight {
            if w > nn {
                return Err(ConfigError::new(
                    "error_model.syndrome_weight",
                    format!("exceeds the {nn} syndrome bits"),
                ));
            }
        }
        campaign.budget =
            campaign.config.code.weight_budget.unwrap_or_else(|| default_budget(model, nn));
        Ok(campaign)
    }

    /// The classical constituent the family was built from.
    pub fn base_code(&self) -> &crate::codes::LinearCode {
        match &self.built {
            Built::Noisy { qc, .. } => &qc.expander.code,
            Built::Split { qc, .. } => &qc.base,
        }
    }

    pub fn product(&self) -> &HgpCode {
        match &self.built {
            Built::Noisy { qc, .. } => &qc.code,
            Built::Split { qc, .. } => &qc.code,
        }
    }

    pub fn product_params(&self) -> HgpParams {
        hgp_params(self.product(), crate::codes::DISTANCE_BUDGET)
    }

    fn h_prime(&self) -> &Mat {
        match &self.built {
            Built::Noisy { qc, .. } => &qc.hp.h_prime,
            Built::Split { qc, .. } => &qc.hp.h_prime,
        }
    }

    pub fn n_slices(&self) -> usize {
        self.h_prime().rows()
    }

    fn inject(&self, len: usize, w: Option<usize>, rate: Option<f64>, rng: &mut ChaCha8Rng) -> Vec<Gf> {
        let f = self.h_prime().field();
        let mut v = vec![Gf::ZERO; len];
        if let Some(w) = w {
            let mut left = w;
            while left > 0 {
                let p = rng.random_range(0..len);
                if v[p].is_zero() {
                    v[p] = f.sample_nonzero(rng);
                    left -= 1;
                }
            }
        } else if let Some(p) = rate {
            for slot in v.iter_mut() {
                if rng.random_bool(p) {
                    *slot = f.sample_nonzero(rng);
                }
            }
        }
        v
    }

    /// One trial; pure in (config, trial index) apart from the returned
    /// decode time. RNG draw order is fixed: qubit vector, then syndrome.
    fn run_trial(&self, trial: u64) -> (TrialRecord, u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(self.config.master_seed, trial));
        let n = self.n_slices();
        let nn = n * n;
        let model = &self.config.error_model;
        let qubits = self.inject(2 * nn, model.qubit_weight, model.qubit_rate, &mut rng);
        let e_syn = self.inject(nn, model.syndrome_weight, model.syndrome_rate, &mut rng);
        let (x, y) = qubits.split_at(nn);
        let s_obs = observed_syndrome(self.h_prime(), x, y, &e_syn);

        let (in_promise, max_slice_load) = match &self.built {
            Built::Noisy { qc, radius } => {
                let (s1, s2) = stage_loads(&qc.hp.h_prime, x, y, &e_syn);
                let max = s1.iter().chain(s2.iter()).copied().max().unwrap_or(0);
                (noisy_in_promise(&qc.hp.h_prime, x, y, &e_syn, *radius), max)
            }
            Built::Split { qc, fold, r_base, r_dual, .. } => {
                let (s1, s2) = stage_loads_split(&qc.hp, *fold, 1, x, y, &e_syn);
                let max = s1
                    .iter()
                    .chain(s2.iter())
                    .flat_map(|&(b, d)| [b, d])
                    .max()
                    .unwrap_or(0);
                let ok = nonnoisy_in_promise(&qc.hp, *fold, 1, x, y, &e_syn, *r_base, *r_dual);
                (ok, max)
            }
        };

        let start = Instant::now();
        let outcome = match &self.built {
            Built::Noisy { qc, .. } => decode_noisy_version(&QuantumNoisyInstance {
                code: qc,
                s_obs,
                weight_budget: self.budget,
            }),
            Built::Split { qc, dec_c, dec_dual, .. } => decode_nonnoisy_version(
                &QuantumNonNoisyInstance { code: qc, s_obs, weight_budget: self.budget },
                dec_c.as_ref(),
                dec_dual.as_ref(),
            ),
        };
        let micros = start.elapsed().as_micros() as u64;

        let (success, failure_stage) = match outcome {
            Ok(res) => {
                let guess: Vec<Gf> = res.x_hat.iter().chain(&res.y_hat).copied().collect();
                (logical_equiv(self.product(), &guess, &qubits, Side::One), None)
            }
            Err(QDecodeError::StageFailure { stage, .. }) => (false, Some(stage)),
            Err(QDecodeError::BadLength { .. }) => unreachable!("instance built to size"),
        };
        let record = TrialRecord {
            trial,
            qubit_weight: weight(&qubits),
            syndrome_weight: weight(&e_syn),
            max_slice_load,
            in_promise,
            success,
            failure_stage,
        };
        (record, micros)
    }

    pub fn run(&self) -> TrialReport {
        let t0 = Instant::now();
        // warm the lazy stabilizer row space so the parallel phase only reads
        let zeros = vec![Gf::ZERO; self.product().n_qubits()];
        logical_equiv(self.product(), &zeros, &zeros, Side::One);

        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.config.workers)
            .build()
            .expect("worker pool");
        let results: Vec<(TrialRecord, u64)> = pool.install(|| {
            (0..self.config.trials).into_par_iter().map(|t| self.run_trial(t)).collect()
        });

        let records: Vec<TrialRecord> = results.iter().map(|(r, _)| r.clone()).collect();
        let decode_micros: Vec<u64> = results.iter().map(|(_, us)| *us).collect();
        let successes = records.iter().filter(|r| r.success).count() as u64;
        let in_promise_trials = records.iter().filter(|r| r.in_promise).count() as u64;
        let in_promise_successes =
            records.iter().filter(|r| r.in_promise && r.success).count() as u64;
        let rate = |num: u64, den: u64| (den > 0).then(|| num as f64 / den as f64);
        let aggregates = Aggregates {
            trials: self.config.trials,
            successes,
            success_rate: rate(successes, self.config.trials),
            in_promise_trials,
            in_promise_successes,
            promise_success_rate: rate(in_promise_successes, in_promise_trials),
        };

        let mut sorted = decode_micros.clone();
        sorted.sort_unstable();
        let quantile = |p: f64| -> Option<u64> {
            if sorted.is_empty() {
                return None;
            }
            let rank = ((p * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
            Some(sorted[rank - 1])
        };
        let volatile = VolatileBlock {
            total_wall_ms: t0.elapsed().as_secs_f64() * 1e3,
            decode_micros_p50: quantile(0.50),
            decode_micros_p90: quantile(0.90),
            decode_micros_p99: quantile(0.99),
            decode_micros,
        };

        TrialReport {
            schema_version: REPORT_SCHEMA_VERSION,
            config: self.config.clone(),
            records,
            aggregates,
            environment: Environment {
                version: env!("CARGO_PKG_VERSION").to_string(),
                rng: RNG_ID.to_string(),
                master_seed: self.config.master_seed,
            },
            volatile,
        }
    }
}

pub fn run_campaign(config: TrialConfig) -> Result<TrialReport, ConfigError> {
    Ok(Campaign::new(config)?.run())
}

/// One campaign per value, patching the template at the given JSON pointer
/// (for example `/error_model/syndrome_weight`).
pub fn sweep(
    template: &serde_json::Value,
    pointer: &str,
    values: &[serde_json::Value],
) -> Result<Vec<TrialReport>, ConfigError> {
    let mut out = Vec::with_capacity(values.len());
    for v in values {
        if !v.is_number() {
            return Err(ConfigError::new(pointer, "sweep values must be numeric"));
        }
        let mut patched = template.clone();
        let slot = patched
            .pointer_mut(pointer)
            .ok_or_else(|| ConfigError::new(pointer, "no such config field"))?;
        *slot = v.clone();
        let config: TrialConfig = serde_json::from_value(patched)
            .map_err(|e| ConfigError::new("config", e))?;
        out.push(run_campaign(config)?);
    }
    Ok(out)
}

/// Per-trial CSV: deterministic columns only, no timing.
pub fn to_csv(report: &TrialReport) -> String {
    let mut out = String::from(
        "trial,qubit_weight,syndrome_weight,max_slice_load,in_promise,success,failure_stage\n",
    );
    for r in &report.records {
        let stage = r.failure_stage.map(|s| s.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.trial, r.qubit_weight, r.syndrome_weight, r.max_slice_load, r.in_promise, r.success,
            stage
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs_config(trials: u64) -> TrialConfig {
        TrialConfig {
            family: Family::RsNonnoisy,
            field: FieldParams { r: 3, modulus: None },
            code: CodeParams { n: Some(7), k: Some(3), ..Default::default() },
            error_model: ErrorModel { qubit_weight: Some(1), ..Default::default() },
            trials,
            master_seed: 11,
            workers: 1,
        }
    }

    fn expander_config(trials: u64) -> TrialConfig {
        TrialConfig {
            family: Family::ExpanderNoisy,
            field: FieldParams { r: 1, modulus: None },
            code: CodeParams { graph: Some(GraphParams::AffinePlane), ..Default::default() },
            error_model: ErrorModel {
                qubit_weight: Some(1),
                syndrome_weight: Some(1),
                ..Default::default()
            },
            trials,
            master_seed: 5,
            workers: 1,
        }
    }

    #[test]
    fn trial_seeds_differ_and_are_stable() {
        let a = trial_seed(42, 0);
        let b = trial_seed(42, 1);
        let c = trial_seed(43, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, trial_seed(42, 0));
    }

    fn err_field(c: TrialConfig) -> String {
        match Campaign::new(c) {
            Err(e) => e.field,
            Ok(_) => panic!("expected a config error"),
        }
    }

    #[test]
    fn config_errors_name_the_offending_field() {
        let mut c = rs_config(1);
        c.code.n = None;
        assert_eq!(err_field(c), "code.n");

        let mut c = rs_config(1);
        c.field.r = 19;
        assert_eq!(err_field(c), "field.r");

        let mut c = rs_config(1);
        c.field.modulus = Some(0x13);
        assert_eq!(err_field(c), "field.modulus");

        let mut c = rs_config(1);
        c.code.n = Some(6); // 6 does not divide 2^3 - 1
        assert_eq!(err_field(c), "code.n");

        let mut c = rs_config(1);
        c.error_model.qubit_rate = Some(0.5); // alongside qubit_weight
        assert_eq!(err_field(c), "error_model.qubit_weight");

        let mut c = rs_config(1);
        c.error_model = ErrorModel { syndrome_rate: Some(1.5), ..Default::default() };
        assert_eq!(err_field(c), "error_model.syndrome_rate");

        let mut c = rs_config(1);
        c.error_model = ErrorModel { qubit_weight: Some(1_000_000), ..Default::default() };
        assert_eq!(err_field(c), "error_model.qubit_weight");

        let mut c = expander_config(1);
        c.code.graph = Some(GraphParams::Random {
            n_left: 32,
            n_right: 24,
            d_left: 3,
            d_right: 4,
            seed: 7,
        });
        assert_eq!(err_field(c), "code.radius");

        let mut c = expander_config(1);
        c.field.r = 2;
        assert_eq!(err_field(c), "field.r");
    }

    #[test]
    fn config_round_trips_through_json() {
        let json = r#"{
            "family": "rs-nonnoisy",
            "field": {"r": 3},
            "code": {"n": 7, "k": 3},
            "error_model": {"qubit_weight": 1},
            "trials": 5,
            "master_seed": 9
        }"#;
        let config: TrialConfig = serde_json::from_str(json).unwrap();
        assert_eq!(config.workers, 0);
        let report = run_campaign(config).unwrap();
        assert_eq!(report.records.len(), 5);
        // unknown fields are rejected, with serde naming the field
        let bad = json.replace("\"trials\"", "\"trails\"");
        assert!(serde_json::from_str::<TrialConfig>(&bad).is_err());
    }

    #[test]
    fn rs_weight_one_campaign_succeeds_everywhere() {
        let report = run_campaign(rs_config(60)).unwrap();
        assert_eq!(report.aggregates.trials, 60);
        assert_eq!(report.aggregates.success_rate, Some(1.0));
        // weight-1 errors are always within the per-slice promise
        assert_eq!(report.aggregates.in_promise_trials, 60);
        assert_eq!(report.aggregates.promise_success_rate, Some(1.0));
        for r in &report.records {
            assert_eq!(r.qubit_weight, 1);
            assert_eq!(r.syndrome_weight, 0);
            assert!(r.max_slice_load <= 1);
        }
    }

    #[test]
    fn expander_weight_one_campaign_succeeds_in_promise() {
        // one qubit error plus one syndrome error: usually in promise, but
        // the two can collide in a slice, so only the in-promise guarantee
        // is exact
        let report = run_campaign(expander_config(40)).unwrap();
        assert_eq!(report.aggregates.promise_success_rate, Some(1.0));
        assert!(report.aggregates.in_promise_trials > 0);
        for r in &report.records {
            assert!(!r.in_promise || r.success, "in-promise trial {} failed", r.trial);
        }
    }

    #[test]
    fn zero_trials_reports_null_rates() {
        let report = run_campaign(rs_config(0)).unwrap();
        assert_eq!(report.aggregates.success_rate, None);
        assert_eq!(report.aggregates.promise_success_rate, None);
        assert_eq!(report.volatile.decode_micros_p50, None);
        assert_eq!(to_csv(&report).lines().count(), 1);
        let json = serde_json::to_value(&report).unwrap();
        assert!(json["aggregates"]["success_rate"].is_null());
    }

    #[test]
    fn worker_count_does_not_change_deterministic_output() {
        let mut c1 = expander_config(30);
        c1.error_model.qubit_rate = Some(0.01);
        c1.error_model.qubit_weight = None;
        let mut c8 = c1.clone();
        c1.workers = 1;
        c8.workers = 8;
        let r1 = run_campaign(c1).unwrap();
        let r8 = run_campaign(c8).unwrap();
        assert_eq!(to_csv(&r1), to_csv(&r8));
        assert_eq!(r1.records, r8.records);
        assert_eq!(r1.aggregates, r8.aggregates);
    }

    #[test]
    fn csv_has_the_documented_shape() {
        let report = run_campaign(rs_config(2)).unwrap();
        let csv = to_csv(&report);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "trial,qubit_weight,syndrome_weight,max_slice_load,in_promise,success,failure_stage"
        );
        let row = lines.next().unwrap();
        assert!(row.starts_with("0,1,0,"), "unexpected row {row}");
        assert!(!csv.contains("micros"));
    }

    #[test]
    fn iid_trials_never_fail_inside_the_promise() {
        let mut c = rs_config(80);
        c.error_model = ErrorModel {
            qubit_rate: Some(0.02),
            syndrome_rate: Some(0.02),
            ..Default::default()
        };
        c.master_seed = 77;
        let report = run_campaign(c).unwrap();
        for r in &report.records {
            if r.in_promise {
                assert!(r.success, "in-promise trial {} failed", r.trial);
            }
        }
        // the iid model actually injects varying weights
        let distinct: std::collections::HashSet<usize> =
            report.records.iter().map(|r| r.qubit_weight).collect();
        assert!(distinct.len() > 1);
    }

    #[test]
    fn generic_family_runs_hamming_with_brute_decoders() {
        let f = Field::canonical(1);
        let cols: Vec<Vec<Gf>> = (1..=7u16)
            .map(|c| (0..3).map(|b| Gf((c >> b) & 1)).collect())
            .collect();
        let h = Mat::from_fn(f.clone(), 3, 7, |i, j| cols[j][i]);
        let code = crate::codes::LinearCode::from_parity(h, "hamming[7,4]").unwrap();
        let config = TrialConfig {
            family: Family::Generic,
            field: FieldParams { r: 1, modulus: None },
            code: CodeParams {
                descriptor: Some(CodeDescriptor::from_code(&code)),
                ..Default::default()
            },
            error_model: ErrorModel { qubit_weight: Some(1), ..Default::default() },
            trials: 25,
            master_seed: 3,
            workers: 1,
        };
        let report = run_campaign(config).unwrap();
        assert_eq!(report.aggregates.promise_success_rate, Some(1.0));
        assert_eq!(report.aggregates.success_rate, Some(1.0));
    }

    #[test]
    fn frs_family_counts_promise_in_blocks() {
        let config = TrialConfig {
            family: Family::FrsNonnoisy,
            field: FieldParams { r: 4, modulus: None },
            code: CodeParams {
                n: Some(5),
                k: Some(4),
                s: Some(3),
                ..Default::default()
            },
            error_model: ErrorModel { qubit_weight: Some(1), ..Default::default() },
            trials: 15,
            master_seed: 21,
            workers: 2,
        };
        let report = run_campaign(config).unwrap();
        assert_eq!(report.aggregates.success_rate, Some(1.0));
        assert_eq!(report.aggregates.in_promise_trials, 15);
    }

    #[test]
    fn sweep_patches_one_field_per_value() {
        let mut template = serde_json::to_value(expander_config(10)).unwrap();
        template["error_model"] = serde_json::json!({"qubit_weight": 0, "syndrome_weight": 0});
        let reports = sweep(
            &template,
            "/error_model/syndrome_weight",
            &[serde_json::json!(0), serde_json::json!(1)],
        )
        .unwrap();
        assert_eq!(reports.len(), 2);
        assert_eq!(reports[0].aggregates.success_rate, Some(1.0));
        assert_eq!(reports[1].aggregates.success_rate, Some(1.0));
        assert_eq!(reports[1].records[0].syndrome_weight, 1);

        let err = sweep(&template, "/error_model/typo", &[serde_json::json!(1)]).unwrap_err();
        assert_eq!(err.field, "/error_model/typo");
        let err = sweep(&template, "/error_model/syndrome_weight", &[serde_json::json!("x")])
            .unwrap_err();
        assert!(err.message.contains("numeric"));
    }

    #[test]
    fn reports_embed_schema_and_environment() {
        let report = run_campaign(rs_config(1)).unwrap();
        assert_eq!(report.schema_version, 1);
        assert_eq!(report.environment.rng, RNG_ID);
        assert_eq!(report.environment.master_seed, 11);
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["schema_version"], 1);
        assert!(json["volatile"]["total_wall_ms"].is_number());
    }
}
