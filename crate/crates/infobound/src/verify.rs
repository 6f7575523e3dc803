//! Seeded random-instance generation and the brute-force soundness loop.
//!
//! Every bound evaluator is checked against the exact event probability on
//! streams of seeded random instances. Instances are derived from a base
//! seed by a fixed mixing function, so a suite is order-independent:
//! parallel and serial runs produce bit-identical summaries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{evaluate_all, invert_binary_kl, BoundReport, Method, VIOLATION_TOLERANCE};
use crate::dist::{EventMask, Joint, Pmf};
use crate::error::{Error, Result};
use crate::measures::{kl_divergence, MeasureSet};

/// Retries before a mask that keeps coming out empty or full is reported
/// as degenerate.
pub const MAX_EVENT_RETRIES: usize = 100;

const MIN_SIZE: usize = 2;
const MAX_SIZE: usize = 8;

/// Everything needed to reproduce one random instance bit-for-bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InstanceSpec {
    pub seed: u64,
    pub n_x: usize,
    pub n_y: usize,
    /// Skew of the random joint: cell weights are uniform variates raised
    /// to `1/concentration`, so large values flatten the joint.
    pub concentration: f64,
    /// Per-cell inclusion probability of the event mask.
    pub event_density: f64,
}

impl InstanceSpec {
    fn validate(&self) -> Result<()> {
        if !(MIN_SIZE..=MAX_SIZE).contains(&self.n_x) {
            return Err(Error::domain("n_x must lie in [2, 8]", self.n_x as f64));
        }
        if !(MIN_SIZE..=MAX_SIZE).contains(&self.n_y) {
            return Err(Error::domain("n_y must lie in [2, 8]", self.n_y as f64));
        }
        if !(self.concentration > 0.0 && self.concentration.is_finite()) {
            return Err(Error::domain(
                "concentration must be positive",
                self.concentration,
            ));
        }
        if !(self.event_density > 0.0 && self.event_density < 1.0) {
            return Err(Error::domain(
                "event_density must lie in (0, 1)",
                self.event_density,
            ));
        }
        Ok(())
    }
}

/// Samples the `(joint, event)` pair determined by the spec.
///
/// The joint is built by normalizing independent positive uniform variates
/// raised to `1/concentration`; the mask is sampled cellwise at
/// `event_density` and redrawn (up to [`MAX_EVENT_RETRIES`] times) while it
/// comes out empty or full.
pub fn random_instance(spec: &InstanceSpec) -> Result<(Joint, EventMask)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let cells = spec.n_x * spec.n_y;
    let inv_c = 1.0 / spec.concentration;
    let mut weights: Vec<f64> = (0..cells)
        .map(|_| {
            // 1 - u lies in (0, 1], keeping the variate strictly positive.
            let u: f64 = 1.0 - rng.random::<f64>();
            u.powf(inv_c)
        })
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let joint = Joint::new(weights, spec.n_x, spec.n_y)?;
    for _ in 0..MAX_EVENT_RETRIES {
        let bits: Vec<bool> = (0..cells)
            .map(|_| rng.random::<f64>() < spec.event_density)
            .collect();
        let any = bits.iter().any(|&b| b);
        let all = bits.iter().all(|&b| b);
        if any && !all {
            return Ok((joint, EventMask::new(bits, spec.n_x, spec.n_y)?));
        }
    }
    Err(Error::DegenerateInstance {
        retries: MAX_EVENT_RETRIES,
    })
}

/// Margin of one method on one instance: `value - exact_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodMargin {
    pub method: Method,
    pub margin: f64,
    /// Whether the method participates in violation accounting on this
    /// instance (its preconditions hold).
    pub counted: bool,
}

/// The full comparison record for one instance.
#[derive(Debug, Clone)]
pub struct VerifyRecord {
    pub spec: Option<InstanceSpec>,
    /// Exact `P_XY(E)`.
    pub exact_p: f64,
    /// Exact `P_X P_Y(E)`.
    pub exact_q: f64,
    pub measures: MeasureSet,
    pub reports: Vec<BoundReport>,
    pub margins: Vec<MethodMargin>,
    /// Methods whose counted margin fell below `-1e-9`. Empty for a
    /// correct implementation.
    pub violations: Vec<Method>,
}

/// Compares every bound against the exact event probability.
///
/// Reports flagged inapplicable are excluded from violation accounting.
/// The reverse-divergence bound is additionally excluded when the exact
/// probability exceeds 1/2, because that is the one method whose validity
/// is conditioned on the quantity being bounded; the margin record keeps
/// the flag visible.
pub fn verify_instance(j: &Joint, e: &EventMask) -> Result<VerifyRecord> {
    let exact_p = j.event_probability(e)?;
    let exact_q = j.product_of_marginals().event_probability(e)?;
    let measures = MeasureSet::compute(j);
    let reports = evaluate_all(j, e, None, None)?;
    let margins: Vec<MethodMargin> = reports
        .iter()
        .map(|r| {
            let counted = r.applicable && !(r.method == Method::LautumThm1 && exact_p > 0.5);
            MethodMargin {
                method: r.method,
                margin: r.value - exact_p,
                counted,
            }
        })
        .collect();
    let violations = margins
        .iter()
        .filter(|m| m.counted && m.margin < -VIOLATION_TOLERANCE)
        .map(|m| m.method)
        .collect();
    Ok(VerifyRecord {
        spec: None,
        exact_p,
        exact_q,
        measures,
        reports,
        margins,
        violations,
    })
}

/// The two-point construction meeting the exact inversion with equality:
/// `Q' = Ber(q)`, `P' = Ber(p*)` with `p* = invert_binary_kl(q, d)`, and
/// the event `{1}`.
#[derive(Debug, Clone)]
pub struct TightnessWitness {
    pub p_dist: Pmf,
    pub q_dist: Pmf,
    pub event: EventMask,
    pub achieved_p: f64,
}

/// Builds the witness for `(q, d)` with `d` in `[0, log(1/q)]`. The
/// divergence of the constructed pair equals `d` (to bisection accuracy)
/// while the event probability equals the bound value itself, so no bound
/// depending only on `(q, d)` can improve on the exact inversion.
pub fn tightness_witness(q: f64, d: f64) -> Result<TightnessWitness> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain("q must lie in (0, 1)", q));
    }
    if d.is_nan() || d < 0.0 || d > -q.ln() {
        return Err(Error::domain("d must lie in [0, log(1/q)]", d));
    }
    let achieved_p = invert_binary_kl(q, d)?;
    Ok(TightnessWitness {
        p_dist: Pmf::bernoulli(achieved_p)?,
        q_dist: Pmf::bernoulli(q)?,
        event: EventMask::vector(vec![false, true]),
        achieved_p,
    })
}

impl TightnessWitness {
    /// `D(P' || Q')` of the constructed pair.
    pub fn divergence(&self) -> f64 {
        kl_divergence(&self.p_dist, &self.q_dist).expect("matched alphabets")
    }
}

/// Configuration of a verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub count: usize,
    pub base_seed: u64,
    /// Inclusive range for both alphabet sizes, within `[2, 8]`.
    pub size_range: (usize, usize),
    /// Range of per-instance event densities, within `(0, 1)`.
    pub density_range: (f64, f64),
    /// Evaluate instances on the rayon pool. The summary is identical
    /// either way.
    #[serde(skip)]
    pub parallel: bool,
}

impl SuiteConfig {
    pub fn new(count: usize, base_seed: u64) -> Self {
        SuiteConfig {
            count,
            base_seed,
            size_range: (MIN_SIZE, 6),
            density_range: (0.4, 0.4),
            parallel: true,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::domain("count must be positive", 0.0));
        }
        let (lo, hi) = self.size_range;
        if lo < MIN_SIZE || hi > MAX_SIZE || lo > hi {
            return Err(Error::domain(
                "size range must satisfy 2 <= lo <= hi <= 8",
                hi as f64,
            ));
        }
        let (dlo, dhi) = self.density_range;
        if !(dlo > 0.0 && dhi < 1.0 && dlo <= dhi) {
            return Err(Error::domain(
                "density range must lie in (0, 1)",
                dhi,
            ));
        }
        Ok(())
    }
}

/// Per-method aggregate of a suite run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MethodSummary {
    pub method: Method,
    /// Instances where the method participated in violation accounting.
    pub checked: u64,
    /// Instances where the report was flagged applicable.
    pub applicable: u64,
    pub violations: u64,
    /// Smallest counted margin, `null` when never counted.
    pub min_margin: Option<f64>,
}

/// Aggregate summary of a suite run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub count: usize,
    pub base_seed: u64,
    pub size_range: (usize, usize),
    pub density_range: (f64, f64),
    pub violations_total: u64,
    pub methods: Vec<MethodSummary>,
}

impl SuiteSummary {
    pub fn is_sound(&self) -> bool {
        self.violations_total == 0
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Spec for instance `i` of a suite, a pure function of
/// `(config, index)`.
pub fn spec_for_index(cfg: &SuiteConfig, index: usize) -> InstanceSpec {
    let mut state = cfg
        .base_seed
        .wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let param_seed = splitmix64(&mut state);
    let instance_seed = splitmix64(&mut state);
    let mut rng = ChaCha8Rng::seed_from_u64(param_seed);
    let (lo, hi) = cfg.size_range;
    let n_x = rng.random_range(lo..=hi);
    let n_y = rng.random_range(lo..=hi);
    // Log-uniform skew in [1/2, 4]: from strongly peaked to near-uniform.
    let span = 4.0f64.ln() - 0.5f64.ln();
    let concentration = (0.5f64.ln() + rng.random::<f64>() * span).exp();
    let (dlo, dhi) = cfg.density_range;
    let event_density = if dlo == dhi {
        dlo
    } else {
        rng.random_range(dlo..dhi)
    };
    InstanceSpec {
        seed: instance_seed,
        n_x,
        n_y,
        concentration,
        event_density,
    }
}

fn run_one(cfg: &SuiteConfig, index: usize) -> Result<VerifyRecord> {
    let spec = spec_for_index(cfg, index);
    let (joint, event) = random_instance(&spec)?;
    let mut record = verify_instance(&joint, &event)?;
    record.spec = Some(spec);
    Ok(record)
}

/// Runs `cfg.count` seeded instances and folds the records (in index
/// order) into a summary.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteSummary> {
    cfg.validate()?;
    let records: Vec<VerifyRecord> = if cfg.parallel {
        (0..cfg.count)
            .into_par_iter()
            .map(|i| run_one(cfg, i))
            .collect::<Result<Vec<_>>>()?
    } else {
        (0..cfg.count)
            .map(|i| run_one(cfg, i))
            .collect::<Result<Vec<_>>>()?
    };

    let mut methods: Vec<MethodSummary> = Method::ALL
        .iter()
        .map(|&method| MethodSummary {
            method,
            checked: 0,
            applicable: 0,
            violations: 0,
            min_margin: None,
        })
        .collect();
    let mut violations_total = 0;
    for record in &records {
        for (slot, (report, margin)) in methods
            .iter_mut()
            .zip(record.reports.iter().zip(record.margins.iter()))
        {
            debug_assert_eq!(slot.method, report.method);
            if report.applicable {
                slot.applicable += 1;
            }
            if margin.counted {
                slot.checked += 1;
                slot.min_margin = Some(match slot.min_margin {
                    Some(m) => m.min(margin.margin),
                    None => margin.margin,
                });
                if margin.margin < -VIOLATION_TOLERANCE {
                    slot.violations += 1;
                    violations_total += 1;
                }
            }
        }
    }
    Ok(SuiteSummary {
        count: cfg.count,
        base_seed: cfg.base_seed,
        size_range: cfg.size_range,
        density_range: cfg.density_range,
        violations_total,
        methods,
    })
}
