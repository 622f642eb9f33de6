//! Machine-checkable forms of the theorems: supremum-over-`a` verdicts at a
//! fixed radius, sharpness-witness search, empirical radius recovery by
//! bisection, and the lemma property suites.

use thiserror::Error;

use crate::functionals::{
    extremal_value, functional_domain, majorant_value, FunctionalError, FunctionalKind,
};
use crate::numerics::{golden_section_max, maximize_on_interval, ToleranceConfig};
use crate::radii::{
    classify_region, lemma26_branch_radii, sharp_radius, tstar, RadiiError, Region, TheoremId,
    TheoremParams,
};
use crate::series::{derivative_bound, MoebiusFamily};
use crate::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error(transparent)]
    Radii(#[from] RadiiError),
    #[error("violation predicate is not a single false-to-true transition: {transitions} transitions on the scan grid")]
    NonMonotonePredicate { transitions: usize },
    #[error("no violation found on the scan grid; cannot bracket the empirical radius")]
    NoViolationFound,
}

/// Tolerances for verification sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig<F: Real> {
    pub tol: ToleranceConfig<F>,
    /// Excess above 1 that counts as a genuine violation rather than
    /// floating-point noise at the `a = 1` boundary, where the exact
    /// supremum is 1.
    pub violation_eps: F,
}

impl<F: Real> Default for VerifyConfig<F> {
    fn default() -> Self {
        Self { tol: ToleranceConfig::default(), violation_eps: F::of(1e-12) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
    Exploratory,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Exploratory => "exploratory",
        }
    }
}

/// Outcome of a supremum-over-`a` check at a fixed radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerificationReport<F: Real> {
    pub theorem: TheoremId,
    pub params: TheoremParams<F>,
    pub r: F,
    pub sup_value: F,
    pub argmax_a: F,
    pub verdict: Verdict,
    /// `1 - sup_value`; negative when violated.
    pub margin: F,
}

/// Outcome of a sharpness-witness search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessResult<F: Real> {
    pub found: bool,
    pub a: Option<F>,
    pub excess: Option<F>,
}

/// Supremum of the chosen functional over `a in [0, 1]`, with a verdict.
///
/// The verdict is `exploratory` where the underlying statement is unproven:
/// the power/weight inequality outside regions I and II, and the convex
/// derivative family above its radius.
pub fn check_holds<F: Real>(
    id: TheoremId,
    params: &TheoremParams<F>,
    r: F,
    kind: FunctionalKind,
    cfg: &VerifyConfig<F>,
) -> Result<VerificationReport<F>, VerifyError> {
    // evaluates the domain checks too
    let probe = match kind {
        FunctionalKind::Majorant => majorant_value(id, F::zero(), r, params),
        FunctionalKind::Extremal => extremal_value(id, F::zero(), r, params),
    };
    probe?;

    let f = |a: F| match kind {
        FunctionalKind::Majorant => majorant_value(id, a, r, params).expect("domain pre-checked"),
        FunctionalKind::Extremal => extremal_value(id, a, r, params).expect("domain pre-checked"),
    };
    let (argmax_a, sup_value) = maximize_on_interval(f, F::zero(), F::one(), &cfg.tol);

    let exploratory = match (id, params) {
        (TheoremId::T31, TheoremParams::PowerWeight { p, lambda }) => {
            classify_region(*p, *lambda)? == Region::Outside
        }
        (TheoremId::T34, _) => r > sharp_radius(id, params)?.value,
        _ => false,
    };
    let verdict = if exploratory {
        Verdict::Exploratory
    } else if sup_value <= F::one() + cfg.violation_eps {
        Verdict::Holds
    } else {
        Verdict::Violated
    };

    Ok(VerificationReport {
        theorem: id,
        params: *params,
        r,
        sup_value,
        argmax_a,
        verdict,
        margin: F::one() - sup_value,
    })
}

/// Supremum of the extremal functional over `a in [0, 1]`, with the grid
/// densified geometrically near `a = 1` (the witnesses of every sharpness
/// construction arise as `a -> 1`).
fn sup_extremal<F: Real>(
    id: TheoremId,
    params: &TheoremParams<F>,
    r: F,
    cfg: &VerifyConfig<F>,
) -> Result<(F, F), VerifyError> {
    extremal_value(id, F::zero(), r, params)?;
    let f = |a: F| extremal_value(id, a, r, params).expect("domain pre-checked");

    let mut candidates: Vec<F> = Vec::with_capacity(800);
    let uniform = 257_usize;
    for i in 0..uniform {
        candidates.push(F::of(i as f64 / (uniform - 1) as f64));
    }
    // 64 points per decade on 1 - a, from 0.5 down to 1e-8
    let per_decade = 64;
    let decades = (0.5_f64 / 1e-8).log10();
    let steps = (decades * per_decade as f64).ceil() as usize;
    for j in 0..=steps {
        let s = 0.5 * 10f64.powf(-(j as f64) / per_decade as f64);
        candidates.push(F::one() - F::of(s));
    }
    candidates.push(F::one());
    candidates.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    candidates.dedup();

    let mut best_i = 0;
    let mut best_f = f(candidates[0]);
    for (i, &a) in candidates.iter().enumerate().skip(1) {
        let fa = f(a);
        if fa > best_f {
            best_f = fa;
            best_i = i;
        }
    }

    let lo = if best_i == 0 { candidates[0] } else { candidates[best_i - 1] };
    let hi = if best_i + 1 == candidates.len() { candidates[best_i] } else { candidates[best_i + 1] };
    let (rx, rf) = golden_section_max(&f, lo, hi, cfg.tol.refine_iter);
    if rf > best_f {
        Ok((rx, rf))
    } else {
        Ok((candidates[best_i], best_f))
    }
}

/// Search for a parameter `a` at which the extremal functional exceeds 1.
pub fn sharpness_witness<F: Real>(
    id: TheoremId,
    params: &TheoremParams<F>,
    r: F,
    cfg: &VerifyConfig<F>,
) -> Result<WitnessResult<F>, VerifyError> {
    let (a, max) = sup_extremal(id, params, r, cfg)?;
    if max > F::one() + cfg.violation_eps {
        Ok(WitnessResult { found: true, a: Some(a), excess: Some(max - F::one()) })
    } else {
        Ok(WitnessResult { found: false, a: None, excess: None })
    }
}

/// Recover the sharp radius empirically: scan the violation predicate
/// (`sup_a` of the extremal functional exceeds `1 + violation_eps`) over a
/// 256-point grid on the functional domain, demand a single false-to-true
/// transition, and bisect it to width `tol_r`.
pub fn empirical_radius<F: Real>(
    id: TheoremId,
    params: &TheoremParams<F>,
    tol_r: F,
    cfg: &VerifyConfig<F>,
) -> Result<F, VerifyError> {
    if id == TheoremId::T31 {
        if let TheoremParams::PowerWeight { p, lambda } = params {
            if classify_region(*p, *lambda)? == Region::Outside {
                return Err(VerifyError::Radii(RadiiError::InvalidParams(
                    "empirical radius for the power/weight family needs (p, lambda) in region I or II".into(),
                )));
            }
        }
    }
    let (_, r_max, _) = functional_domain(id, params)?;

    let n = 256_usize;
    let lo = r_max * F::of(1e-3);
    let hi = r_max - F::of(1e-3);
    let step = (hi - lo) / F::of((n - 1) as f64);
    let violated = |r: F| -> Result<bool, VerifyError> {
        let (_, sup) = sup_extremal(id, params, r, cfg)?;
        Ok(sup > F::one() + cfg.violation_eps)
    };

    let mut transitions = 0usize;
    let mut bracket: Option<(F, F)> = None;
    let mut prev_r = lo;
    let mut prev_v = violated(lo)?;
    if prev_v {
        // violated already at the smallest radius: no false segment to bracket
        return Err(VerifyError::NonMonotonePredicate { transitions: 0 });
    }
    for i in 1..n {
        let r = if i == n - 1 { hi } else { lo + step * F::of(i as f64) };
        let v = violated(r)?;
        if v != prev_v {
            transitions += 1;
            if bracket.is_none() {
                bracket = Some((prev_r, r));
            }
        }
        prev_r = r;
        prev_v = v;
    }
    if transitions > 1 {
        return Err(VerifyError::NonMonotonePredicate { transitions });
    }
    let (mut flo, mut fhi) = bracket.ok_or(VerifyError::NoViolationFound)?;

    let two = F::of(2.0);
    while fhi - flo > tol_r {
        let mid = (flo + fhi) / two;
        if mid <= flo || mid >= fhi {
            break;
        }
        if violated(mid)? {
            fhi = mid;
        } else {
            flo = mid;
        }
    }
    Ok((flo + fhi) / two)
}

/// One lemma sub-suite outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaSuiteReport {
    pub sub_suites: Vec<LemmaReport>,
}

impl LemmaSuiteReport {
    pub fn passed(&self) -> bool {
        self.sub_suites.iter().all(LemmaReport::passed)
    }
}

struct SuiteAcc {
    name: &'static str,
    checks: usize,
    failures: usize,
    first_failure: Option<String>,
}

impl SuiteAcc {
    fn new(name: &'static str) -> Self {
        Self { name, checks: 0, failures: 0, first_failure: None }
    }

    fn check(&mut self, ok: bool, detail: impl Fn() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    fn finish(self) -> LemmaReport {
        LemmaReport {
            name: self.name,
            checks: self.checks,
            failures: self.failures,
            first_failure: self.first_failure,
        }
    }
}

/// Run the five lemma property suites over uniform grids of `grid_n` points
/// per axis. Failures are report entries, never errors.
pub fn lemma_suite<F: Real>(grid_n: usize) -> LemmaSuiteReport {
    let n = grid_n.max(2);
    let one = F::one();
    let slack = F::of(1e-9);

    // (a) monotonicity of x^p + A(1 - x^2) for p in (0,2], A in (0, p/2].
    // Non-strict comparison: the derivative degenerates to 0 at p = 2, A = 1.
    let mut mono = SuiteAcc::new("lemma-2.3-monotone-phi");
    for i in 0..n {
        let p = F::of(2.0 * (i + 1) as f64 / n as f64);
        for j in 0..n {
            let a_cap = p / F::of(2.0);
            let a = a_cap * F::of((j + 1) as f64 / n as f64);
            let phi = |x: F| x.powf(p) + a * (one - x * x);
            let mut prev = phi(F::zero());
            for k in 1..n {
                let x = F::of(k as f64 / n as f64);
                let cur = phi(x);
                mono.check(cur >= prev - F::of(1e-12), || {
                    format!("phi decreased at p={p}, A={a}, x={x}")
                });
                prev = cur;
            }
        }
    }

    // (b) mean-value inequalities for powers on x >= y > 0 in (0, 10].
    let mut mvt = SuiteAcc::new("lemma-2.5-power-mean-value");
    for i in 0..n {
        for xj in 0..n {
            let x = F::of(10.0 * (xj + 1) as f64 / n as f64);
            for yj in 0..=xj {
                let y = F::of(10.0 * (yj + 1) as f64 / n as f64);
                let alpha_low = F::of((i + 1) as f64 / n as f64);
                let lhs = alpha_low * x.powf(alpha_low - one) * (x - y);
                let rhs = x.powf(alpha_low) - y.powf(alpha_low);
                let tol = slack * (one + rhs.abs());
                mvt.check(lhs <= rhs + tol, || {
                    format!("alpha={alpha_low} x={x} y={y}: {lhs} > {rhs}")
                });

                let alpha_high = one + F::of(3.0 * (i + 1) as f64 / n as f64);
                let lhs = alpha_high * y.powf(alpha_high - one) * (x - y);
                let rhs = x.powf(alpha_high) - y.powf(alpha_high);
                let tol = slack * (one + rhs.abs());
                mvt.check(lhs <= rhs + tol, || {
                    format!("alpha={alpha_high} x={x} y={y}: {lhs} > {rhs}")
                });
            }
        }
    }

    // (c) branch-radius ordering flips exactly at the quartic root.
    let mut order = SuiteAcc::new("lemma-2.6-branch-ordering");
    let ts = tstar::<F>();
    for i in 0..n {
        let t = F::of((i + 1) as f64 / (n + 1) as f64);
        if (t - ts).abs() < F::of(1e-9) {
            continue;
        }
        let (r1, r2) = lemma26_branch_radii(t).expect("t in (0,1)");
        let expected_less = t < ts;
        order.check((r1 < r2) == expected_less, || {
            format!("t={t}: r1={r1}, r2={r2}, t*={ts}")
        });
    }

    // (d) coefficient bound |a_k| <= 1 - a^2 on the Möbius family, with
    // equality at k = 1.
    let mut coeff = SuiteAcc::new("lemma-2.2-coefficient-bound");
    for i in 0..n {
        let a = F::of(i as f64 / n as f64);
        let fam = MoebiusFamily::new(a).expect("a in [0,1)");
        let series = fam.coefficients(20);
        let bound = one - a * a;
        coeff.check(series.moduli[1] == bound, || format!("a={a}: k=1 not saturated"));
        for (k, &m) in series.moduli.iter().enumerate().skip(1) {
            coeff.check(m <= bound, || format!("a={a} k={k}: {m} > {bound}"));
            if k >= 2 && a > F::zero() {
                coeff.check(m < bound, || format!("a={a} k={k}: equality beyond k=1"));
            }
        }
    }

    // (e) factorial derivative bound on the Möbius family for k <= 10,
    // with exact equality at k = 1.
    let mut deriv = SuiteAcc::new("lemma-2.4-derivative-bound");
    for i in 0..n {
        let a = F::of(i as f64 / n as f64);
        for j in 0..n {
            let r = F::of(0.9 * j as f64 / n as f64);
            let m = (a - r).abs() / (one - a * r);
            let mut factorial = F::one();
            for k in 1u32..=10 {
                factorial = factorial * F::of(k as f64);
                // |f^(k)(r)| = k! a^{k-1} (1 - a^2) / (1 - ar)^{k+1}
                let exact = factorial * a.powi(k as i32 - 1) * (one - a * a)
                    / (one - a * r).powi(k as i32 + 1);
                let bound = derivative_bound(k, r, m).expect("domain checked");
                let tol = slack * (one + bound.abs());
                deriv.check(exact <= bound + tol, || {
                    format!("a={a} r={r} k={k}: {exact} > {bound}")
                });
                if k == 1 {
                    let scale = if bound > one { bound } else { one };
                    deriv.check((exact - bound).abs() <= F::of(1e-12) * scale, || {
                        format!("a={a} r={r}: k=1 equality violated")
                    });
                }
            }
        }
    }

    LemmaSuiteReport {
        sub_suites: vec![
            coeff.finish(),
            mono.finish(),
            deriv.finish(),
            mvt.finish(),
            order.finish(),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pl(p: f64, lambda: f64) -> TheoremParams<f64> {
        TheoremParams::PowerWeight { p, lambda }
    }

    fn cfg() -> VerifyConfig<f64> {
        VerifyConfig::default()
    }

    #[test]
    fn check_holds_below_and_above_classical_radius() {
        let params = pl(1.0, 1.0);
        let report =
            check_holds(TheoremId::T31, &params, 0.23, FunctionalKind::Majorant, &cfg()).unwrap();
        assert_eq!(report.verdict, Verdict::Holds);
        assert!((report.sup_value - 1.0).abs() < 1e-12);
        assert!((report.argmax_a - 1.0).abs() < 1e-6);

        let report =
            check_holds(TheoremId::T31, &params, 0.25, FunctionalKind::Extremal, &cfg()).unwrap();
        assert_eq!(report.verdict, Verdict::Violated);
        assert!(report.argmax_a < 1.0 && report.argmax_a > 0.5);
        assert!(report.margin < 0.0);
    }

    #[test]
    fn check_holds_t34_below_radius_and_exploratory_above() {
        let params = TheoremParams::Convex { t: 0.5 };
        let report =
            check_holds(TheoremId::T34, &params, 0.28, FunctionalKind::Majorant, &cfg()).unwrap();
        assert_eq!(report.verdict, Verdict::Holds);

        let report =
            check_holds(TheoremId::T34, &params, 0.30, FunctionalKind::Extremal, &cfg()).unwrap();
        assert_eq!(report.verdict, Verdict::Exploratory);
    }

    #[test]
    fn check_holds_outside_region_is_exploratory() {
        let report =
            check_holds(TheoremId::T31, &pl(2.0, 1.0), 0.1, FunctionalKind::Majorant, &cfg())
                .unwrap();
        assert_eq!(report.verdict, Verdict::Exploratory);
    }

    #[test]
    fn witness_found_only_above_radius() {
        let params = pl(1.0, 1.0);
        let w = sharpness_witness(TheoremId::T31, &params, 0.25, &cfg()).unwrap();
        assert!(w.found);
        assert!(w.excess.unwrap() > 0.0);
        assert!(w.a.unwrap() > 0.5);

        let w = sharpness_witness(TheoremId::T31, &params, 0.20, &cfg()).unwrap();
        assert!(!w.found);
        assert!(w.a.is_none() && w.excess.is_none());
    }

    #[test]
    fn empirical_radius_recovers_closed_form() {
        let params = pl(1.0, 1.0);
        let closed = sharp_radius(TheoremId::T31, &params).unwrap().value;
        let empirical = empirical_radius(TheoremId::T31, &params, 1e-6, &cfg()).unwrap();
        assert!(
            (empirical - closed).abs() < 1e-5,
            "empirical {empirical} vs closed {closed}"
        );
    }

    #[test]
    fn empirical_radius_rejects_outside_region() {
        let err = empirical_radius(TheoremId::T31, &pl(2.0, 1.0), 1e-6, &cfg()).unwrap_err();
        assert!(matches!(err, VerifyError::Radii(_)));
    }

    #[test]
    fn lemma_suite_passes_on_coarse_grid() {
        let report = lemma_suite::<f64>(16);
        for sub in &report.sub_suites {
            assert!(
                sub.passed(),
                "{} failed: {:?}",
                sub.name,
                sub.first_failure
            );
        }
        assert_eq!(report.sub_suites.len(), 5);
        assert!(report.passed());
    }

    #[test]
    fn lemma26_ordering_flips_at_tstar() {
        let ts = tstar::<f64>();
        let (r1, r2) = lemma26_branch_radii(ts - 1e-3).unwrap();
        assert!(r1 < r2);
        let (r1, r2) = lemma26_branch_radii(ts + 1e-3).unwrap();
        assert!(r1 > r2);
    }

    #[test]
    fn reports_are_deterministic() {
        let params = pl(0.7, 1.2);
        let a = check_holds(TheoremId::T31, &params, 0.2, FunctionalKind::Majorant, &cfg()).unwrap();
        let b = check_holds(TheoremId::T31, &params, 0.2, FunctionalKind::Majorant, &cfg()).unwrap();
        assert_eq!(a, b);
        let wa = sharpness_witness(TheoremId::T31, &params, 0.3, &cfg()).unwrap();
        let wb = sharpness_witness(TheoremId::T31, &params, 0.3, &cfg()).unwrap();
        assert_eq!(wa, wb);
    }
}
