//! Per-theorem evaluation of the majorant functional (the upper bound over
//! the whole class after the Schwarz–Pick and coefficient-bound reductions)
//! and the extremal functional (the exact left side on the Möbius family at
//! the evaluation point of the sharpness construction).

use thiserror::Error;

use crate::radii::{RadiiError, TheoremId, TheoremParams};
use crate::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FunctionalError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

impl From<RadiiError> for FunctionalError {
    fn from(err: RadiiError) -> Self {
        FunctionalError::InvalidParams(err.to_string())
    }
}

/// Which side of a theorem to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionalKind {
    Majorant,
    Extremal,
}

impl FunctionalKind {
    pub fn label(self) -> &'static str {
        match self {
            FunctionalKind::Majorant => "majorant",
            FunctionalKind::Extremal => "extremal",
        }
    }
}

/// `x^p` for nonnegative bases, with `0^p := 0` for the fractional exponents
/// used here.
fn powp<F: Real>(x: F, p: F) -> F {
    if x == F::zero() {
        F::zero()
    } else {
        x.powf(p)
    }
}

fn schwarz_pick<F: Real>(a: F, r: F) -> F {
    (r + a) / (F::one() + a * r)
}

/// Valid `r` range of a theorem's functionals, and whether extremal
/// evaluation additionally needs `2ar < 1`.
pub fn functional_domain<F: Real>(
    id: TheoremId,
    params: &TheoremParams<F>,
) -> Result<(F, F, bool), FunctionalError> {
    params.validate(id)?;
    match id {
        TheoremId::T31 | TheoremId::T33 => Ok((F::zero(), F::one(), false)),
        TheoremId::T32 | TheoremId::T34 => Ok((F::zero(), F::of(0.5), true)),
        TheoremId::T12 => Err(FunctionalError::InvalidParams(
            "theorem 1.2 has no functional evaluator (radius only)".into(),
        )),
    }
}

fn check_point<F: Real>(
    id: TheoremId,
    a: F,
    r: F,
    params: &TheoremParams<F>,
) -> Result<(), FunctionalError> {
    let (r_min, r_max, _) = functional_domain(id, params)?;
    if !(a >= F::zero() && a <= F::one()) {
        return Err(FunctionalError::Domain(format!("a must lie in [0, 1], got {a}")));
    }
    if !(r >= r_min && r < r_max) {
        return Err(FunctionalError::Domain(format!(
            "r must lie in [{r_min}, {r_max}) for theorem {}, got {r}",
            id.tag()
        )));
    }
    Ok(())
}

/// The proof's upper bound as printed, as a function of `(a, r)` only.
/// Equals 1 at `a = 1` for every theorem.
pub fn majorant_value<F: Real>(
    id: TheoremId,
    a: F,
    r: F,
    params: &TheoremParams<F>,
) -> Result<F, FunctionalError> {
    check_point(id, a, r, params)?;
    let one = F::one();
    let sp = schwarz_pick(a, r);
    let value = match (id, params) {
        // A(a,r) = sp^p + lambda (1 - a^2) r / (1 - r)
        (TheoremId::T31, TheoremParams::PowerWeight { p, lambda }) => {
            powp(sp, *p) + *lambda * (one - a * a) * r / (one - r)
        }
        // F(a,r) = sp^p + lambda r / ((1+r)(1-2r)) * (1 - sp^2)
        (TheoremId::T32, TheoremParams::PowerWeight { p, lambda }) => {
            powp(sp, *p)
                + *lambda * r / ((one + r) * (one - F::of(2.0) * r)) * (one - sp * sp)
        }
        // N(a) = t sp^p + (1-t)(a + (1 - a^2) r / (1 - r))
        (TheoremId::T33, TheoremParams::ConvexPower { t, p }) => {
            *t * powp(sp, *p) + (one - *t) * (a + (one - a * a) * r / (one - r))
        }
        // K(a,r,t) = t sp + (1-t) r / ((1+r)(1-2r)) * (1 - sp^2) + (1-t) a
        (TheoremId::T34, TheoremParams::Convex { t }) => {
            *t * sp
                + (one - *t) * r / ((one + r) * (one - F::of(2.0) * r)) * (one - sp * sp)
                + (one - *t) * a
        }
        _ => unreachable!("validated pairing"),
    };
    Ok(value)
}

/// The exact left side on the Möbius family with `|a_0| = a`, at the
/// evaluation point of each sharpness construction (`z = -r` or `z = r`).
pub fn extremal_value<F: Real>(
    id: TheoremId,
    a: F,
    r: F,
    params: &TheoremParams<F>,
) -> Result<F, FunctionalError> {
    check_point(id, a, r, params)?;
    let (_, _, needs_2ar) = functional_domain(id, params)?;
    if needs_2ar && F::of(2.0) * a * r >= F::one() {
        return Err(FunctionalError::Domain(format!(
            "extremal evaluation needs 2ar < 1, got a={a}, r={r}"
        )));
    }
    let one = F::one();
    let value = match (id, params) {
        // sp^p + lambda (1 - a^2) r / (1 - a r), at z = -r
        (TheoremId::T31, TheoremParams::PowerWeight { p, lambda }) => {
            powp(schwarz_pick(a, r), *p) + *lambda * (one - a * a) * r / (one - a * r)
        }
        // |f(r)|^p + lambda (1 - a^2) r / ((1 - ar)(1 - 2ar)), at z = r
        (TheoremId::T32, TheoremParams::PowerWeight { p, lambda }) => {
            let m = (a - r).abs() / (one - a * r);
            powp(m, *p)
                + *lambda * (one - a * a) * r / ((one - a * r) * (one - F::of(2.0) * a * r))
        }
        // t sp^p + (1-t)(a + (1 - a^2) r / (1 - a r)), at z = -r
        (TheoremId::T33, TheoremParams::ConvexPower { t, p }) => {
            *t * powp(schwarz_pick(a, r), *p)
                + (one - *t) * (a + (one - a * a) * r / (one - a * r))
        }
        // t |f(r)| + (1-t)(1 - a^2) r / ((1 - ar)(1 - 2ar)) + (1-t) a, at z = r.
        // Exploratory: no sharpness claim backs this evaluation point.
        (TheoremId::T34, TheoremParams::Convex { t }) => {
            let m = (a - r).abs() / (one - a * r);
            *t * m
                + (one - *t) * (one - a * a) * r / ((one - a * r) * (one - F::of(2.0) * a * r))
                + (one - *t) * a
        }
        _ => unreachable!("validated pairing"),
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radii::sharp_radius;
    use crate::series::MoebiusFamily;
    use proptest::prelude::*;

    fn pl(p: f64, lambda: f64) -> TheoremParams<f64> {
        TheoremParams::PowerWeight { p, lambda }
    }
    fn tp(t: f64, p: f64) -> TheoremParams<f64> {
        TheoremParams::ConvexPower { t, p }
    }

    const ALL_IDS: [TheoremId; 4] = [TheoremId::T31, TheoremId::T32, TheoremId::T33, TheoremId::T34];

    fn params_for(id: TheoremId) -> TheoremParams<f64> {
        match id {
            TheoremId::T31 | TheoremId::T32 => pl(1.0, 1.0),
            TheoremId::T33 => tp(0.5, 1.0),
            TheoremId::T34 => TheoremParams::Convex { t: 0.5 },
            TheoremId::T12 => TheoremParams::Lacunary { n: 2 },
        }
    }

    #[test]
    fn boundary_normalization_at_a_one() {
        for id in ALL_IDS {
            let params = params_for(id);
            for r in [0.0, 0.1, 0.3, 0.45] {
                let v = majorant_value(id, 1.0, r, &params).unwrap();
                assert!((v - 1.0).abs() < 1e-14, "{id:?} r={r}");
                let e = extremal_value(id, 1.0, r, &params).unwrap();
                assert!((e - 1.0).abs() < 1e-14, "{id:?} r={r}");
            }
        }
    }

    #[test]
    fn t31_reductions() {
        // a = 0: A(0, r) = r^p + lambda r / (1 - r)
        let v = majorant_value(TheoremId::T31, 0.0, 0.3, &pl(0.7, 1.3)).unwrap();
        assert!((v - (0.3_f64.powf(0.7) + 1.3 * 0.3 / 0.7)).abs() < 1e-14);
        // a = 1 exactly 1 even at r = 0.3
        let v = majorant_value(TheoremId::T31, 1.0, 0.3, &pl(1.0, 1.0)).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn t32_extremal_example() {
        let v = extremal_value(TheoremId::T32, 0.5, 0.2, &pl(1.0, 1.0)).unwrap();
        let expected = 0.3 / 0.9 + 0.75 * 0.2 / (0.9 * 0.8);
        assert!((v - expected).abs() < 1e-14);
        assert!((v - 0.541_666_7).abs() < 1e-6);
    }

    #[test]
    fn t32_extremal_matches_displayed_series_oracle() {
        // oracle: |f(r)|^p + lambda * sum_k a^{k-1} (1-a^2) r^k / (1-ar)^{k+1}
        for (a, r) in [(0.5_f64, 0.2_f64), (0.8, 0.4), (0.2, 0.45)] {
            let mut sum = 0.0;
            for k in 1..=200 {
                sum += a.powi(k - 1) * (1.0 - a * a) * r.powi(k) / (1.0 - a * r).powi(k + 1);
            }
            let m: f64 = (a - r).abs() / (1.0 - a * r);
            let oracle = m.powf(1.0) + 1.0 * sum;
            let v = extremal_value(TheoremId::T32, a, r, &pl(1.0, 1.0)).unwrap();
            assert!((v - oracle).abs() < 1e-10, "a={a} r={r}");
        }
    }

    #[test]
    fn t31_witness_exceeds_one_above_radius() {
        // 0.25 > sqrt(5) - 2, so a near 1 gives a value above 1
        let v = extremal_value(TheoremId::T31, 0.99, 0.25, &pl(1.0, 1.0)).unwrap();
        assert!(v > 1.0);
        // below the radius the family stays at or below 1
        for i in 0..=100 {
            let a = i as f64 / 100.0;
            let v = extremal_value(TheoremId::T31, a, 0.2, &pl(1.0, 1.0)).unwrap();
            assert!(v <= 1.0 + 1e-12, "a={a}");
        }
    }

    #[test]
    fn t33_majorant_capped_at_sharp_radius() {
        let params = tp(0.5, 1.0);
        let r = sharp_radius(TheoremId::T33, &params).unwrap().value;
        let v = majorant_value(TheoremId::T33, 0.6, r - 1e-12, &params).unwrap();
        assert!(v <= 1.0 + 1e-12);
        // sup over a dense grid equals 1 (attained at a = 1)
        let mut max = 0.0_f64;
        for i in 0..=4000 {
            let a = i as f64 / 4000.0;
            max = max.max(majorant_value(TheoremId::T33, a, r - 1e-12, &params).unwrap());
        }
        assert!((max - 1.0).abs() < 1e-10);
    }

    #[test]
    fn domination_majorant_over_extremal() {
        for id in [TheoremId::T31, TheoremId::T33] {
            let params = params_for(id);
            for i in 0..20 {
                for j in 1..19 {
                    let a = i as f64 / 20.0;
                    let r = j as f64 / 20.0;
                    let m = majorant_value(id, a, r, &params).unwrap();
                    let e = extremal_value(id, a, r, &params).unwrap();
                    assert!(m >= e - 1e-14, "{id:?} a={a} r={r}");
                }
            }
        }
    }

    #[test]
    fn consistency_with_series_module() {
        for i in 0..10 {
            for j in 0..10 {
                let a = i as f64 / 10.0;
                let r = 0.95 * j as f64 / 10.0;
                let lambda = 1.3;
                let fam = MoebiusFamily::new(a).unwrap();
                let direct = fam.schwarz_pick_majorant(r) + lambda * fam.tail_closed(r);
                let via = extremal_value(TheoremId::T31, a, r, &pl(1.0, lambda)).unwrap();
                assert!((direct - via).abs() < 1e-15, "a={a} r={r}");
            }
        }
    }

    #[test]
    fn functional_domains() {
        assert_eq!(functional_domain(TheoremId::T32, &pl(1.0, 1.0)).unwrap(), (0.0, 0.5, true));
        assert_eq!(functional_domain(TheoremId::T31, &pl(1.0, 1.0)).unwrap(), (0.0, 1.0, false));
        assert_eq!(
            functional_domain(TheoremId::T34, &TheoremParams::Convex { t: 0.5 }).unwrap(),
            (0.0, 0.5, true)
        );
        assert!(functional_domain(TheoremId::T12, &TheoremParams::<f64>::Lacunary { n: 2 }).is_err());
    }

    #[test]
    fn domain_errors() {
        assert!(majorant_value(TheoremId::T32, 0.5, 0.6, &pl(1.0, 1.0)).is_err());
        assert!(majorant_value(TheoremId::T31, 1.5, 0.3, &pl(1.0, 1.0)).is_err());
        assert!(extremal_value(TheoremId::T31, 0.5, 1.0, &pl(1.0, 1.0)).is_err());
    }

    proptest! {
        #[test]
        fn majorant_increasing_in_r(
            a in 0.0_f64..0.999,
            r in 0.01_f64..0.43,
            dr in 1e-5_f64..0.05,
        ) {
            for id in ALL_IDS {
                let params = params_for(id);
                let lo = majorant_value(id, a, r, &params).unwrap();
                let hi = majorant_value(id, a, r + dr, &params).unwrap();
                prop_assert!(hi > lo, "{:?} a={} r={}", id, a, r);
            }
        }
    }
}
