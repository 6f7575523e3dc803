//! Bounds on an event probability `p` in terms of a reference probability
//! `q` and a dependence measure.
//!
//! The scalar evaluators take `q` (the event probability under a reference
//! distribution, typically the product of marginals) together with a
//! divergence `d` in nats. The joint-level wrappers bind `q = P_X P_Y(E)`
//! and the matching measure, and package every method into a
//! [`BoundReport`] with a clamped value and an applicability flag.
//!
//! Conventions shared by every evaluator:
//! - raw values are kept unclamped in `raw_value`; `value` is clamped to
//!   `[0, 1]`;
//! - a method whose stated precondition fails is reported with
//!   `applicable = false` and the trivial value rather than an error, so
//!   callers comparing bound families always get total functions;
//! - `+inf` measures yield the trivial bound 1.

use std::f64::consts::LN_2;

use crate::dist::{slice_probability, EventMask, Joint};
use crate::error::{Error, Result};
use crate::measures::{
    binary_entropy, binary_kl_unchecked, j_infinity, lautum_information, leakage_channel_sum,
    mutual_information,
};

/// `ln 4`, the constant in the closed-form relaxation of the binary
/// entropy (`h(p) <= ln(4) sqrt(p(1-p))`).
pub const LN_4: f64 = 2.0 * LN_2;

/// Absolute slack below which a bound is considered violated by the
/// verification harness.
pub const VIOLATION_TOLERANCE: f64 = 1e-9;

const BRACKET_TOL: f64 = 1e-12;
const MAX_BISECT_ITERS: usize = 200;

/// Points in the default log-spaced grid used for infima over `beta`.
pub const BETA_GRID_POINTS: usize = 200;
const BETA_GRID_MIN: f64 = 1e-3;

fn log_inv(q: f64) -> f64 {
    -q.ln()
}

/// Identifier for each bound evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Method {
    #[serde(rename = "prop1")]
    Prop1Inverse,
    #[serde(rename = "cor1")]
    Cor1ClosedForm,
    #[serde(rename = "eq7")]
    LiteratureEq7,
    #[serde(rename = "eq9")]
    DvFamilyEq9,
    #[serde(rename = "eq10")]
    EllStarEq10,
    #[serde(rename = "eq11")]
    SubgaussianEq11,
    #[serde(rename = "lautum")]
    LautumThm1,
    #[serde(rename = "lautum_dv")]
    LautumDvEq14,
    #[serde(rename = "leakage")]
    LeakageThm2,
    #[serde(rename = "jinf")]
    JInfThm3,
}

impl Method {
    pub const ALL: [Method; 10] = [
        Method::Prop1Inverse,
        Method::Cor1ClosedForm,
        Method::LiteratureEq7,
        Method::DvFamilyEq9,
        Method::EllStarEq10,
        Method::SubgaussianEq11,
        Method::LautumThm1,
        Method::LautumDvEq14,
        Method::LeakageThm2,
        Method::JInfThm3,
    ];

    /// Short token used on the command line and in serialized output.
    pub fn token(&self) -> &'static str {
        match self {
            Method::Prop1Inverse => "prop1",
            Method::Cor1ClosedForm => "cor1",
            Method::LiteratureEq7 => "eq7",
            Method::DvFamilyEq9 => "eq9",
            Method::EllStarEq10 => "eq10",
            Method::SubgaussianEq11 => "eq11",
            Method::LautumThm1 => "lautum",
            Method::LautumDvEq14 => "lautum_dv",
            Method::LeakageThm2 => "leakage",
            Method::JInfThm3 => "jinf",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.token())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        Method::ALL
            .iter()
            .copied()
            .find(|m| m.token() == s)
            .ok_or_else(|| Error::Parse(format!("unknown method '{s}'")))
    }
}

/// One evaluated bound: raw and clamped values, applicability, and the
/// inputs it was computed from (`extra` carries `beta` or `alpha` where
/// the method takes one).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub method: Method,
    pub raw_value: f64,
    /// `raw_value` clamped to `[0, 1]`.
    pub value: f64,
    pub applicable: bool,
    pub condition_note: String,
    pub q: f64,
    pub measure: f64,
    pub extra: Option<f64>,
}

impl BoundReport {
    fn new(
        method: Method,
        raw_value: f64,
        applicable: bool,
        condition_note: impl Into<String>,
        q: f64,
        measure: f64,
        extra: Option<f64>,
    ) -> Self {
        BoundReport {
            method,
            raw_value,
            value: raw_value.clamp(0.0, 1.0),
            applicable,
            condition_note: condition_note.into(),
            q,
            measure,
            extra,
        }
    }
}

fn check_q_open(q: f64) -> Result<()> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain("q must lie in (0, 1)", q));
    }
    Ok(())
}

fn check_q_closed(q: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::domain("q must lie in [0, 1]", q));
    }
    Ok(())
}

fn check_divergence(d: f64) -> Result<()> {
    if d.is_nan() || d < 0.0 {
        return Err(Error::domain("divergence must be nonnegative", d));
    }
    Ok(())
}

/// Inverts the binary relative entropy: the unique `p` in `[q, 1]` with
/// `D(p || q) = d`, found by bisection (the map is strictly increasing).
///
/// The returned value is the upper endpoint of the final bracket, so the
/// reported bound is never an under-approximation. For `d > log(1/q)`
/// the inversion has no solution and the trivial value 1 is returned.
pub fn invert_binary_kl(q: f64, d: f64) -> Result<f64> {
    check_q_open(q)?;
    check_divergence(d)?;
    if d == 0.0 {
        return Ok(q);
    }
    if d >= log_inv(q) {
        return Ok(1.0);
    }
    let mut lo = q;
    let mut hi = 1.0;
    for _ in 0..MAX_BISECT_ITERS {
        if hi - lo < BRACKET_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if binary_kl_unchecked(mid, q) < d {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Closed-form relaxation of [`invert_binary_kl`]: the larger root of the
/// quadratic obtained by replacing the binary entropy with
/// `ln(4) sqrt(p(1-p))`. Concave and non-decreasing in `y` on
/// `[0, -log q]`, valid for `q <= 1/2`.
///
/// With `q1 = log((1-q)/q)` and `q2 = log(1-q)`, the root is
///
/// ```text
/// (2 ln^2(2) + q1 (q2 + y) + ln(4) sqrt(g_q(y))) / (q1^2 + ln^2(4))
/// g_q(y) = ln^2(2) + (q2 + y)(-log(q) - y)
/// ```
///
/// For `q > 1/2` or `y > -log q` the trivial value 1 is returned.
pub fn cor1_closed_form(q: f64, y: f64) -> Result<f64> {
    check_q_open(q)?;
    check_divergence(y)?;
    if q > 0.5 || y > log_inv(q) {
        return Ok(1.0);
    }
    let q1 = ((1.0 - q) / q).ln();
    let q2 = (-q).ln_1p();
    let g = (LN_2 * LN_2 + (q2 + y) * (log_inv(q) - y)).max(0.0);
    let numerator = 2.0 * LN_2 * LN_2 + q1 * (q2 + y) + LN_4 * g.sqrt();
    Ok(numerator / (q1 * q1 + LN_4 * LN_4))
}

/// The additive log-ratio bound `(d + log 2) / log(1/q)`.
pub fn literature_bound(q: f64, d: f64) -> Result<f64> {
    check_q_open(q)?;
    check_divergence(d)?;
    Ok((d + LN_2) / log_inv(q))
}

/// One member of the variational family indexed by `beta > 0`:
/// `(d + log(1 + (e^beta - 1) q)) / beta`.
///
/// At `beta = log(1/q)` this refines [`literature_bound`] by replacing
/// `log 2` with `log(2 - q)`; the infimum over `beta` recovers
/// [`invert_binary_kl`].
pub fn dv_bound(q: f64, d: f64, beta: f64) -> Result<f64> {
    check_q_open(q)?;
    check_divergence(d)?;
    check_beta(beta)?;
    Ok(dv_formula(q, d, beta))
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::domain("beta must be positive", beta));
    }
    Ok(())
}

fn dv_formula(q: f64, d: f64, beta: f64) -> f64 {
    (d + (beta.exp_m1() * q).ln_1p()) / beta
}

/// Infimum of [`dv_bound`] over the default log-spaced `beta` grid
/// (`BETA_GRID_POINTS` points on `[1e-3, 10 log(1/q)]`). Pass a larger
/// `points` to refine the search.
pub fn dv_bound_infimum(q: f64, d: f64, points: usize) -> Result<f64> {
    check_q_open(q)?;
    check_divergence(d)?;
    if points < 2 {
        return Err(Error::domain("grid needs at least two points", points as f64));
    }
    let lo = BETA_GRID_MIN.ln();
    let hi = (10.0 * log_inv(q)).max(10.0 * BETA_GRID_MIN).ln();
    let mut best = f64::INFINITY;
    for i in 0..points {
        let beta = (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp();
        best = best.min(dv_formula(q, d, beta));
    }
    Ok(best)
}

/// The convex conjugate of `beta -> log(1 + (e^beta - 1) q)`:
///
/// ```text
/// ell*(t) = 0            for 0 <= t < q
///           D(t || q)    for q <= t <= 1
///           +inf         for t > 1
/// ```
pub fn ell_star(t: f64, q: f64) -> Result<f64> {
    check_q_open(q)?;
    if t.is_nan() || t < 0.0 {
        return Err(Error::domain("t must be nonnegative", t));
    }
    Ok(ell_star_unchecked(t, q))
}

fn ell_star_unchecked(t: f64, q: f64) -> f64 {
    if t < q {
        0.0
    } else if t <= 1.0 {
        binary_kl_unchecked(t, q)
    } else {
        f64::INFINITY
    }
}

/// The generalized-inverse bound `inf { t : ell*(t) > d }`, located by
/// bisection on the conjugate itself. Recovers [`invert_binary_kl`]
/// exactly: `q` at `d = 0`, the conjugate root on `(0, log(1/q)]`, and 1
/// beyond.
pub fn ell_star_inverse_bound(q: f64, d: f64) -> Result<f64> {
    check_q_open(q)?;
    check_divergence(d)?;
    if d == 0.0 {
        return Ok(q);
    }
    if d >= log_inv(q) {
        return Ok(1.0);
    }
    let mut lo = 0.0;
    let mut hi = 1.5;
    for _ in 0..MAX_BISECT_ITERS {
        if hi - lo < BRACKET_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if ell_star_unchecked(mid, q) > d {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Additive square-root bound `q + sqrt(d / 2)`. Valid unconditionally;
/// the raw value exceeds 1 whenever `d > 2 (1 - q)^2`.
pub fn subgaussian_bound(q: f64, d: f64) -> Result<f64> {
    check_q_closed(q)?;
    check_divergence(d)?;
    Ok(q + (0.5 * d).sqrt())
}

const LAUTUM_NOTE: &str = "certified only when the exact event probability is <= 1/2";

/// Reverse-divergence bound `1 - exp(-h(q) - l)`, where `l` is the
/// reversed-argument divergence (lautum information at the joint level).
///
/// The derivation assumes the bounded probability itself is at most 1/2;
/// that side condition references the unknown quantity, so it is recorded
/// in the report's `condition_note` rather than checked here.
pub fn lautum_bound(q: f64, l: f64) -> Result<BoundReport> {
    check_q_closed(q)?;
    if l.is_nan() || l < 0.0 {
        return Err(Error::domain("lautum measure must be nonnegative", l));
    }
    let h = binary_entropy(q)?;
    let raw = -(-(h + l)).exp_m1();
    Ok(BoundReport::new(
        Method::LautumThm1,
        raw,
        true,
        LAUTUM_NOTE,
        q,
        l,
        None,
    ))
}

/// Variational family for the reversed divergence, indexed by `beta > 0`:
/// `(1 - exp(-l - beta q)) / (1 - exp(-beta))`.
pub fn lautum_dv_bound(q: f64, l: f64, beta: f64) -> Result<f64> {
    check_q_closed(q)?;
    if l.is_nan() || l < 0.0 {
        return Err(Error::domain("lautum measure must be nonnegative", l));
    }
    check_beta(beta)?;
    let numerator = -(-(l + beta * q)).exp_m1();
    let denominator = -(-beta).exp_m1();
    Ok(numerator / denominator)
}

fn alpha_for_event(j: &Joint, e: &EventMask, alpha_override: Option<f64>) -> Result<f64> {
    let (px, _) = j.marginals();
    let alpha_star = (0..e.ny())
        .map(|y| slice_probability(&px, e, y))
        .fold(0.0f64, f64::max);
    match alpha_override {
        None => Ok(alpha_star),
        Some(a) => {
            if !(0.0..=1.0).contains(&a) {
                return Err(Error::domain("alpha must lie in [0, 1]", a));
            }
            if a < alpha_star {
                return Err(Error::AlphaTooSmall {
                    given: a,
                    required: alpha_star,
                });
            }
            Ok(a)
        }
    }
}

/// Leakage bound `alpha * exp(max_leakage)`, where `alpha` dominates
/// every per-column event probability `P_X(E_y)`. When no override is
/// given, the smallest valid `alpha* = max_y P_X(E_y)` is used.
pub fn leakage_bound(
    j: &Joint,
    e: &EventMask,
    alpha_override: Option<f64>,
) -> Result<BoundReport> {
    j.check_shape(e)?;
    let alpha = alpha_for_event(j, e, alpha_override)?;
    let channel_sum = leakage_channel_sum(&j.conditional_y_given_x());
    let raw = alpha * channel_sum;
    let q = j.product_of_marginals().event_probability(e)?;
    Ok(BoundReport::new(
        Method::LeakageThm2,
        raw,
        true,
        "",
        q,
        channel_sum.ln().max(0.0),
        Some(alpha),
    ))
}

/// Partial-knowledge bound `alpha (2 (1 - alpha) J_inf + 1)`, requiring
/// `alpha <= 1/2`. With a larger `alpha` the report is flagged
/// inapplicable and carries the trivial value 1.
pub fn jinf_bound(j: &Joint, e: &EventMask, alpha_override: Option<f64>) -> Result<BoundReport> {
    j.check_shape(e)?;
    let alpha = alpha_for_event(j, e, alpha_override)?;
    let jinf = j_infinity(j);
    let q = j.product_of_marginals().event_probability(e)?;
    if alpha > 0.5 {
        return Ok(BoundReport::new(
            Method::JInfThm3,
            1.0,
            false,
            format!("alpha = {alpha} exceeds 1/2; trivial bound"),
            q,
            jinf,
            Some(alpha),
        ));
    }
    let raw = alpha * (2.0 * (1.0 - alpha) * jinf + 1.0);
    Ok(BoundReport::new(
        Method::JInfThm3,
        raw,
        true,
        "",
        q,
        jinf,
        Some(alpha),
    ))
}

/// Both sides of the expectation-gap inequality
///
/// ```text
/// |E_PXY[f] - E_PXPY[f]| <= (max_y E_PX[|f(X,y) - mu_y|]) * J_inf
/// ```
///
/// with `mu_y = E_PX[f(X,y)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationGap {
    pub gap_bound: f64,
    pub exact_gap: f64,
    /// `E_PX[|f(X,y) - mu_y|]` per column, before taking the max.
    pub mean_abs_deviations: Vec<f64>,
}

/// Evaluates the expectation-gap inequality for an arbitrary real table
/// `f` (row-major, `nx * ny`). Returns the bound side and the exact gap
/// computed by direct summation.
pub fn expectation_gap_bound(j: &Joint, f: &[f64]) -> Result<ExpectationGap> {
    let (nx, ny) = (j.nx(), j.ny());
    if f.len() != nx * ny {
        return Err(Error::shape(
            format!("{}x{} ({} entries)", nx, ny, nx * ny),
            format!("{} entries", f.len()),
        ));
    }
    let (px, py) = j.marginals();
    let mut mean_abs_deviations = Vec::with_capacity(ny);
    for y in 0..ny {
        let mu: f64 = (0..nx).map(|x| px.probs()[x] * f[x * ny + y]).sum();
        let dev: f64 = (0..nx)
            .map(|x| px.probs()[x] * (f[x * ny + y] - mu).abs())
            .sum();
        mean_abs_deviations.push(dev);
    }
    let max_dev = mean_abs_deviations.iter().copied().fold(0.0f64, f64::max);
    let gap_bound = max_dev * j_infinity(j);
    let mut gap = 0.0;
    for x in 0..nx {
        for y in 0..ny {
            gap += f[x * ny + y] * (j.prob(x, y) - px.probs()[x] * py.probs()[y]);
        }
    }
    Ok(ExpectationGap {
        gap_bound,
        exact_gap: gap.abs(),
        mean_abs_deviations,
    })
}

const ZERO_Q_NOTE: &str =
    "event has zero probability under the reference; absolute continuity forces 0";
const FULL_Q_NOTE: &str = "reference event probability is 1; trivial bound";
const EXCESS_D_NOTE: &str = "divergence exceeds log(1/q); trivial bound";

/// Report for the exact binary-divergence inversion.
pub fn prop1_report(q: f64, d: f64) -> BoundReport {
    let mk = |raw, ok, note: &str| BoundReport::new(Method::Prop1Inverse, raw, ok, note, q, d, None);
    if q <= 0.0 {
        mk(0.0, false, ZERO_Q_NOTE)
    } else if q >= 1.0 {
        mk(1.0, false, FULL_Q_NOTE)
    } else if d > log_inv(q) {
        mk(1.0, false, EXCESS_D_NOTE)
    } else {
        mk(
            invert_binary_kl(q, d).expect("domain already checked"),
            true,
            "",
        )
    }
}

/// Report for the closed-form relaxation.
pub fn cor1_report(q: f64, d: f64) -> BoundReport {
    let mk =
        |raw, ok, note: &str| BoundReport::new(Method::Cor1ClosedForm, raw, ok, note, q, d, None);
    if q <= 0.0 {
        mk(0.0, false, ZERO_Q_NOTE)
    } else if q >= 1.0 {
        mk(1.0, false, FULL_Q_NOTE)
    } else if q > 0.5 {
        mk(1.0, false, "q exceeds 1/2; trivial bound")
    } else if d > log_inv(q) {
        mk(1.0, false, EXCESS_D_NOTE)
    } else {
        mk(
            cor1_closed_form(q, d).expect("domain already checked"),
            true,
            "",
        )
    }
}

/// Report for the additive log-ratio bound.
pub fn eq7_report(q: f64, d: f64) -> BoundReport {
    let mk =
        |raw, ok, note: &str| BoundReport::new(Method::LiteratureEq7, raw, ok, note, q, d, None);
    if q <= 0.0 {
        mk(0.0, false, ZERO_Q_NOTE)
    } else if q >= 1.0 {
        mk(1.0, false, FULL_Q_NOTE)
    } else {
        mk(literature_bound(q, d).expect("domain already checked"), true, "")
    }
}

/// Report for one member of the variational family at the given `beta`.
pub fn eq9_report(q: f64, d: f64, beta: f64) -> BoundReport {
    let mk = |raw, ok, note: &str| {
        BoundReport::new(Method::DvFamilyEq9, raw, ok, note, q, d, Some(beta))
    };
    if q <= 0.0 || q >= 1.0 {
        // The formula itself stays sound at the endpoints.
        mk(
            dv_formula(q.clamp(0.0, 1.0), d, beta),
            false,
            if q <= 0.0 { ZERO_Q_NOTE } else { FULL_Q_NOTE },
        )
    } else {
        mk(dv_formula(q, d, beta), true, "")
    }
}

/// Report for the conjugate-inverse bound.
pub fn eq10_report(q: f64, d: f64) -> BoundReport {
    let mk = |raw, ok, note: &str| BoundReport::new(Method::EllStarEq10, raw, ok, note, q, d, None);
    if q <= 0.0 {
        mk(0.0, false, ZERO_Q_NOTE)
    } else if q >= 1.0 {
        mk(1.0, false, FULL_Q_NOTE)
    } else {
        mk(
            ell_star_inverse_bound(q, d).expect("domain already checked"),
            true,
            "",
        )
    }
}

/// Report for the additive square-root bound.
pub fn eq11_report(q: f64, d: f64) -> BoundReport {
    let raw = subgaussian_bound(q.clamp(0.0, 1.0), d).expect("domain already checked");
    BoundReport::new(Method::SubgaussianEq11, raw, true, "", q, d, None)
}

/// Report for the reverse-divergence bound.
pub fn lautum_report(q: f64, l: f64) -> BoundReport {
    lautum_bound(q.clamp(0.0, 1.0), l).expect("domain already checked")
}

/// Report for the reverse-divergence variational family at `beta`.
pub fn lautum_dv_report(q: f64, l: f64, beta: f64) -> BoundReport {
    let raw = lautum_dv_bound(q.clamp(0.0, 1.0), l, beta).expect("domain already checked");
    BoundReport::new(Method::LautumDvEq14, raw, true, "", q, l, Some(beta))
}

/// Default `beta` for the variational reports: `log(1/q)`, the choice
/// that tightens the additive log-ratio bound.
pub fn default_beta(q: f64) -> f64 {
    if q > 0.0 && q < 1.0 {
        log_inv(q)
    } else {
        1.0
    }
}

/// Evaluates every method on one instance, binding `q = P_X P_Y(E)`, the
/// mutual information for the divergence family, and the lautum
/// information for the reversed family. `beta` overrides the default
/// `log(1/q)` for the two variational reports; `alpha` overrides the
/// computed `max_y P_X(E_y)` for the two joint-level bounds.
pub fn evaluate_all(
    j: &Joint,
    e: &EventMask,
    beta: Option<f64>,
    alpha: Option<f64>,
) -> Result<Vec<BoundReport>> {
    j.check_shape(e)?;
    if let Some(b) = beta {
        check_beta(b)?;
    }
    let q = j.product_of_marginals().event_probability(e)?;
    let d = mutual_information(j);
    let l = lautum_information(j);
    let beta = beta.unwrap_or_else(|| default_beta(q));
    Ok(vec![
        prop1_report(q, d),
        cor1_report(q, d),
        eq7_report(q, d),
        eq9_report(q, d, beta),
        eq10_report(q, d),
        eq11_report(q, d),
        lautum_report(q, l),
        lautum_dv_report(q, l, beta),
        leakage_bound(j, e, alpha)?,
        jinf_bound(j, e, alpha)?,
    ])
}
