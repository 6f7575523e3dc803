//! Exact dependence measures and divergences on finite distributions.
//!
//! All logarithms are natural and all divergences are reported in nats.
//! `+inf` is a first-class value, not an error: `kl_divergence` and
//! `lautum_information` return it on support violations, and the bound
//! evaluators downstream treat it as "trivial bound".

use crate::dist::{Channel, Joint, Pmf};
use crate::error::{Error, Result};

/// The four joint-level dependence measures used by the bounds.
///
/// `mutual_information`, `lautum`, and `max_leakage` are in nats;
/// `j_infinity` is dimensionless. All are zero for an independent joint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureSet {
    pub mutual_information: f64,
    pub lautum: f64,
    pub max_leakage: f64,
    pub j_infinity: f64,
}

impl MeasureSet {
    pub fn compute(j: &Joint) -> MeasureSet {
        MeasureSet {
            mutual_information: mutual_information(j),
            lautum: lautum_information(j),
            max_leakage: max_leakage(j),
            j_infinity: j_infinity(j),
        }
    }
}

/// `D(p || q) = sum_z p(z) log(p(z)/q(z))` with the convention
/// `0 log(0/.) = 0`. Returns `+inf` when `p(z) > 0` while `q(z) = 0`.
pub fn kl_divergence(p: &Pmf, q: &Pmf) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::shape(p.len().to_string(), q.len().to_string()));
    }
    let mut d = 0.0;
    for (&pi, &qi) in p.probs().iter().zip(q.probs()) {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Ok(f64::INFINITY);
        }
        d += pi * (pi / qi).ln();
    }
    Ok(d.max(0.0))
}

/// Binary entropy `h(p) = -p log p - (1-p) log(1-p)` in nats, with
/// `h(0) = h(1) = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain("entropy argument must lie in [0, 1]", p));
    }
    let mut h = 0.0;
    if p > 0.0 {
        h -= p * p.ln();
    }
    if p < 1.0 {
        h -= (1.0 - p) * (1.0 - p).ln();
    }
    Ok(h.max(0.0))
}

/// Binary relative entropy `D(p || q)` between Bernoulli(p) and
/// Bernoulli(q), in nats. `+inf` on support violation.
pub fn binary_kl(p: f64, q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain("p must lie in [0, 1]", p));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::domain("q must lie in [0, 1]", q));
    }
    Ok(binary_kl_unchecked(p, q))
}

pub(crate) fn binary_kl_unchecked(p: f64, q: f64) -> f64 {
    let mut d = 0.0;
    if p > 0.0 {
        if q == 0.0 {
            return f64::INFINITY;
        }
        d += p * (p / q).ln();
    }
    if p < 1.0 {
        if q == 1.0 {
            return f64::INFINITY;
        }
        d += (1.0 - p) * ((1.0 - p) / (1.0 - q)).ln();
    }
    d.max(0.0)
}

/// `I(X;Y) = D(P_XY || P_X P_Y)`. Always finite on a valid joint.
pub fn mutual_information(j: &Joint) -> f64 {
    let product = j.product_of_marginals();
    let mut d = 0.0;
    for (&pi, &qi) in j.probs().iter().zip(product.probs()) {
        if pi > 0.0 {
            d += pi * (pi / qi).ln();
        }
    }
    d.max(0.0)
}

/// Lautum information `L(X;Y) = D(P_X P_Y || P_XY)`: the reversed-argument
/// counterpart of mutual information. `+inf` when the product of
/// marginals puts mass where the joint has none.
pub fn lautum_information(j: &Joint) -> f64 {
    let product = j.product_of_marginals();
    let mut d = 0.0;
    for (&pi, &qi) in product.probs().iter().zip(j.probs()) {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return f64::INFINITY;
        }
        d += pi * (pi / qi).ln();
    }
    d.max(0.0)
}

/// Maximal leakage `log sum_y max_{x: P_X(x) > 0} P_{Y|X}(y|x)` in nats.
pub fn max_leakage(j: &Joint) -> f64 {
    leakage_channel_sum(&j.conditional_y_given_x()).ln().max(0.0)
}

/// `sum_y max_x P_{Y|X}(y|x)` over supported rows, i.e. `exp` of the
/// maximal leakage.
pub(crate) fn leakage_channel_sum(ch: &Channel) -> f64 {
    (0..ch.ny()).map(|y| ch.column_max(y)).sum::<f64>()
}

/// `D_inf(p || q) = log max_{z: p(z) > 0} p(z)/q(z)`: the log of the
/// worst-case likelihood ratio.
pub fn d_infinity(p: &Pmf, q: &Pmf) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::shape(p.len().to_string(), q.len().to_string()));
    }
    let mut max_ratio = 0.0f64;
    for (i, (&pi, &qi)) in p.probs().iter().zip(q.probs()).enumerate() {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Err(Error::SupportViolation { index: i });
        }
        max_ratio = max_ratio.max(pi / qi);
    }
    Ok(max_ratio.ln().max(0.0))
}

/// `J_inf(X;Y) = 1/2 sum_y (max_x P_{Y|X}(y|x) - min_x P_{Y|X}(y|x))`,
/// with both extrema ranging over supported rows only.
pub fn j_infinity(j: &Joint) -> f64 {
    let ch = j.conditional_y_given_x();
    0.5 * (0..ch.ny())
        .map(|y| ch.column_max(y) - ch.column_min(y))
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    fn pmf(v: &[f64]) -> Pmf {
        Pmf::new(v.to_vec()).unwrap()
    }

    #[test]
    fn kl_of_identical_uniform_is_zero() {
        let u = Pmf::uniform(4);
        assert_eq!(kl_divergence(&u, &u).unwrap(), 0.0);
    }

    #[test]
    fn kl_point_mass_vs_uniform() {
        let p = pmf(&[1.0, 0.0]);
        let q = pmf(&[0.5, 0.5]);
        assert!((kl_divergence(&p, &q).unwrap() - LN_2).abs() < 1e-15);
    }

    #[test]
    fn kl_support_violation_is_infinite() {
        let p = pmf(&[0.5, 0.5]);
        let q = pmf(&[1.0, 0.0]);
        assert_eq!(kl_divergence(&p, &q).unwrap(), f64::INFINITY);
    }

    #[test]
    fn kl_checks_shape() {
        let p = Pmf::uniform(2);
        let q = Pmf::uniform(3);
        assert!(matches!(
            kl_divergence(&p, &q),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn binary_entropy_values() {
        assert!((binary_entropy(0.5).unwrap() - LN_2).abs() < 1e-15);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!(matches!(binary_entropy(1.5), Err(Error::Domain { .. })));
    }

    #[test]
    fn binary_entropy_matches_kl_identity() {
        // h(p) = log 2 - D(p || 1/2).
        for &p in &[0.11, 0.3, 0.77] {
            let via_kl = LN_2 - binary_kl(p, 0.5).unwrap();
            assert!((binary_entropy(p).unwrap() - via_kl).abs() < 1e-12);
        }
    }

    #[test]
    fn binary_kl_basics() {
        assert_eq!(binary_kl(0.3, 0.3).unwrap(), 0.0);
        assert!((binary_kl(1.0, 0.25).unwrap() - 4.0f64.ln()).abs() < 1e-15);
        assert_eq!(binary_kl(0.5, 0.0).unwrap(), f64::INFINITY);
        assert_eq!(binary_kl(0.5, 1.0).unwrap(), f64::INFINITY);
        assert!(matches!(binary_kl(-0.1, 0.5), Err(Error::Domain { .. })));
    }

    #[test]
    fn binary_kl_reduces_to_two_point_kl() {
        let mut worst = 0.0f64;
        for i in 1..20 {
            for k in 1..20 {
                let p = i as f64 / 20.0;
                let q = k as f64 / 20.0;
                let two_point =
                    kl_divergence(&pmf(&[p, 1.0 - p]), &pmf(&[q, 1.0 - q])).unwrap();
                worst = worst.max((binary_kl(p, q).unwrap() - two_point).abs());
            }
        }
        assert!(worst < 1e-12, "worst deviation {worst}");
    }

    #[test]
    fn binary_kl_is_strictly_increasing_above_q() {
        let q = 0.2;
        let mut prev = 0.0;
        for i in 1..=40 {
            let p = q + (1.0 - q) * i as f64 / 40.0;
            let d = binary_kl(p, q).unwrap();
            assert!(d > prev, "f_q must increase: p={p}");
            prev = d;
        }
    }

    #[test]
    fn mutual_information_of_independent_is_zero() {
        let j = Joint::independent(&pmf(&[0.3, 0.7]), &pmf(&[0.2, 0.3, 0.5]));
        assert!(mutual_information(&j).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_of_identity_coupling() {
        let j = Joint::diagonal_uniform(4);
        assert!((mutual_information(&j) - 4.0f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn mutual_information_matches_entropy_decomposition() {
        // I(X;Y) = H(X) + H(Y) - H(X,Y) on a full-support 3x3 joint.
        let w = [0.08, 0.12, 0.05, 0.20, 0.07, 0.13, 0.06, 0.19, 0.10];
        let j = Joint::new(w.to_vec(), 3, 3).unwrap();
        let (px, py) = j.marginals();
        let ent = |v: &[f64]| -> f64 {
            v.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum()
        };
        let decomposed = ent(px.probs()) + ent(py.probs()) - ent(j.probs());
        assert!((mutual_information(&j) - decomposed).abs() < 1e-12);
    }

    #[test]
    fn lautum_of_independent_is_zero() {
        let j = Joint::independent(&pmf(&[0.4, 0.6]), &pmf(&[0.25, 0.75]));
        assert!(lautum_information(&j).abs() < 1e-12);
    }

    #[test]
    fn lautum_of_identity_coupling_is_infinite() {
        assert_eq!(lautum_information(&Joint::diagonal_uniform(2)), f64::INFINITY);
    }

    #[test]
    fn lautum_matches_direct_swapped_sum() {
        let w = [0.08, 0.12, 0.05, 0.20, 0.07, 0.13, 0.06, 0.19, 0.10];
        let j = Joint::new(w.to_vec(), 3, 3).unwrap();
        let product = j.product_of_marginals();
        let direct: f64 = product
            .probs()
            .iter()
            .zip(j.probs())
            .map(|(&a, &b)| a * (a / b).ln())
            .sum();
        assert!((lautum_information(&j) - direct).abs() < 1e-12);
    }

    #[test]
    fn leakage_of_independent_is_zero() {
        let j = Joint::independent(&pmf(&[0.3, 0.7]), &pmf(&[0.2, 0.8]));
        assert!(max_leakage(&j).abs() < 1e-12);
    }

    #[test]
    fn leakage_of_identity_coupling() {
        assert_eq!(max_leakage(&Joint::diagonal_uniform(4)), 4.0f64.ln());
    }

    #[test]
    fn leakage_of_binary_symmetric_channel() {
        let j = Joint::new(vec![0.45, 0.05, 0.05, 0.45], 2, 2).unwrap();
        assert!((max_leakage(&j) - 1.8f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn d_infinity_values() {
        let u = Pmf::uniform(2);
        assert_eq!(d_infinity(&u, &u).unwrap(), 0.0);
        assert!((d_infinity(&pmf(&[1.0, 0.0]), &u).unwrap() - LN_2).abs() < 1e-15);
        assert!(
            (d_infinity(&pmf(&[0.6, 0.4]), &pmf(&[0.3, 0.7])).unwrap() - LN_2).abs() < 1e-12
        );
    }

    #[test]
    fn d_infinity_rejects_support_violation() {
        let p = pmf(&[0.5, 0.5]);
        let q = pmf(&[1.0, 0.0]);
        assert!(matches!(
            d_infinity(&p, &q),
            Err(Error::SupportViolation { index: 1 })
        ));
    }

    #[test]
    fn j_infinity_values() {
        let ind = Joint::independent(&pmf(&[0.3, 0.7]), &pmf(&[0.2, 0.8]));
        assert!(j_infinity(&ind).abs() < 1e-12);
        assert_eq!(j_infinity(&Joint::diagonal_uniform(4)), 2.0);
        let bsc = Joint::new(vec![0.45, 0.05, 0.05, 0.45], 2, 2).unwrap();
        assert!((j_infinity(&bsc) - 0.8).abs() < 1e-12);
    }

    #[test]
    fn unsupported_rows_do_not_enter_extrema() {
        // Second input symbol has zero mass; the channel collapses to its
        // first row, so both dependence measures vanish.
        let j = Joint::new(vec![0.5, 0.5, 0.0, 0.0], 2, 2).unwrap();
        assert!(max_leakage(&j).abs() < 1e-15);
        assert!(j_infinity(&j).abs() < 1e-15);
    }

    #[test]
    fn measure_set_of_identity_coupling() {
        let m = MeasureSet::compute(&Joint::diagonal_uniform(4));
        assert!((m.mutual_information - 4.0f64.ln()).abs() < 1e-15);
        assert_eq!(m.lautum, f64::INFINITY);
        assert_eq!(m.max_leakage, 4.0f64.ln());
        assert_eq!(m.j_infinity, 2.0);
    }

    fn arb_pmf(n: usize) -> impl Strategy<Value = Pmf> {
        prop::collection::vec(1e-6f64..1.0, n).prop_map(|mut w| {
            let s: f64 = w.iter().sum();
            for v in &mut w {
                *v /= s;
            }
            Pmf::new(w).unwrap()
        })
    }

    fn arb_full_support_joint(nx: usize, ny: usize) -> impl Strategy<Value = Joint> {
        prop::collection::vec(1e-3f64..1.0, nx * ny).prop_map(move |mut w| {
            let s: f64 = w.iter().sum();
            for v in &mut w {
                *v /= s;
            }
            Joint::new(w, nx, ny).unwrap()
        })
    }

    fn arb_rows(nx: usize, ny: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
        prop::collection::vec(prop::collection::vec(1e-6f64..1.0, ny), nx).prop_map(|rows| {
            rows.into_iter()
                .map(|mut r| {
                    let s: f64 = r.iter().sum();
                    for v in &mut r {
                        *v /= s;
                    }
                    r
                })
                .collect()
        })
    }

    fn joint_from_channel(px: &Pmf, rows: &[Vec<f64>]) -> Joint {
        let ny = rows[0].len();
        let mut w = Vec::with_capacity(px.len() * ny);
        for (x, row) in rows.iter().enumerate() {
            for &v in row {
                w.push(px.probs()[x] * v);
            }
        }
        Joint::new(w, px.len(), ny).unwrap()
    }

    proptest! {
        #[test]
        fn kl_is_nonnegative_and_zero_only_at_equality(
            p in arb_pmf(6),
            q in arb_pmf(6),
        ) {
            let d = kl_divergence(&p, &q).unwrap();
            prop_assert!(d >= 0.0);
            let self_d = kl_divergence(&p, &p).unwrap();
            prop_assert!(self_d.abs() < 1e-12);
            let close = p
                .probs()
                .iter()
                .zip(q.probs())
                .all(|(a, b)| (a - b).abs() < 1e-12);
            if !close {
                prop_assert!(d > 0.0);
            }
        }

        #[test]
        fn independent_joints_have_zero_measures(
            px in arb_pmf(3),
            py in arb_pmf(4),
        ) {
            let j = Joint::independent(&px, &py);
            let m = MeasureSet::compute(&j);
            prop_assert!(m.mutual_information.abs() < 1e-12);
            prop_assert!(m.lautum.abs() < 1e-12);
            prop_assert!(m.max_leakage.abs() < 1e-12);
            prop_assert!(m.j_infinity.abs() < 1e-12);
        }

        #[test]
        fn mutual_information_decomposes_into_entropies(
            j in arb_full_support_joint(3, 3),
        ) {
            let (px, py) = j.marginals();
            let ent = |v: &[f64]| -> f64 {
                v.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum()
            };
            let decomposed = ent(px.probs()) + ent(py.probs()) - ent(j.probs());
            prop_assert!((mutual_information(&j) - decomposed).abs() < 1e-12);
        }

        #[test]
        fn lautum_matches_swapped_direct_sum(j in arb_full_support_joint(3, 3)) {
            let product = j.product_of_marginals();
            let direct: f64 = product
                .probs()
                .iter()
                .zip(j.probs())
                .map(|(&a, &b)| a * (a / b).ln())
                .sum();
            prop_assert!((lautum_information(&j) - direct).abs() < 1e-12);
        }

        #[test]
        fn leakage_and_j_infinity_depend_only_on_the_channel(
            rows in arb_rows(3, 4),
            px1 in arb_pmf(3),
            px2 in arb_pmf(3),
        ) {
            let j1 = joint_from_channel(&px1, &rows);
            let j2 = joint_from_channel(&px2, &rows);
            prop_assert!((max_leakage(&j1) - max_leakage(&j2)).abs() < 1e-12);
            prop_assert!((j_infinity(&j1) - j_infinity(&j2)).abs() < 1e-12);
        }
    }
}
