//! Tolerance-controlled scalar root finding, interval maximization, and a
//! numerically stable quadratic root, shared by every other module.

use thiserror::Error;

use crate::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("bracket width {width} above tolerance {tol} after {iters} iterations")]
    MaxIterExceeded { iters: usize, width: f64, tol: f64 },
    #[error("invalid quadratic coefficients A={a}, B={b}, C={c}: need B > 0, C < 0, B^2 - 4AC >= 0")]
    InvalidCoefficients { a: f64, b: f64, c: f64 },
    #[error("invalid bracket: lo = {lo} must be below hi = {hi}")]
    EmptyBracket { lo: f64, hi: f64 },
    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),
}

/// Tolerances and budgets for the scalar solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct ToleranceConfig<F: Real> {
    /// Absolute width at which a bisection bracket is accepted.
    pub abs_tol: F,
    /// Iteration cap for bisection.
    pub max_iter: usize,
    /// Uniform grid size for interval maximization (endpoints included).
    pub grid_points: usize,
    /// Golden-section contraction steps after the grid pass.
    pub refine_iter: usize,
}

impl<F: Real> Default for ToleranceConfig<F> {
    fn default() -> Self {
        Self {
            abs_tol: F::of(1e-12),
            max_iter: 200,
            grid_points: 4096,
            refine_iter: 80,
        }
    }
}

impl<F: Real> ToleranceConfig<F> {
    pub fn validate(&self) -> Result<(), NumericsError> {
        if !(self.abs_tol > F::zero()) {
            return Err(NumericsError::InvalidTolerance(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if self.grid_points < 3 {
            return Err(NumericsError::InvalidTolerance(format!(
                "grid_points must be at least 3, got {}",
                self.grid_points
            )));
        }
        if self.max_iter < 1 {
            return Err(NumericsError::InvalidTolerance("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// An interval `[lo, hi]` on which `f` changes sign (or vanishes at an endpoint).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket<F: Real> {
    pub lo: F,
    pub hi: F,
    pub f_lo: F,
    pub f_hi: F,
}

impl<F: Real> Bracket<F> {
    pub fn new(lo: F, hi: F, f_lo: F, f_hi: F) -> Result<Self, NumericsError> {
        if !(lo < hi) {
            return Err(NumericsError::EmptyBracket { lo: lo.as_f64(), hi: hi.as_f64() });
        }
        if f_lo * f_hi > F::zero() {
            return Err(NumericsError::NoSignChange {
                lo: lo.as_f64(),
                hi: hi.as_f64(),
                f_lo: f_lo.as_f64(),
                f_hi: f_hi.as_f64(),
            });
        }
        Ok(Self { lo, hi, f_lo, f_hi })
    }

    /// Evaluate `f` at both endpoints and build the bracket.
    pub fn from_fn(f: impl Fn(F) -> F, lo: F, hi: F) -> Result<Self, NumericsError> {
        let f_lo = f(lo);
        let f_hi = f(hi);
        Self::new(lo, hi, f_lo, f_hi)
    }
}

/// Bisection on a sign-change bracket.
///
/// Terminates when the bracket width drops to `abs_tol` or an exact zero is
/// hit; the result always lies in the initial interval.
pub fn find_root<F: Real>(
    f: impl Fn(F) -> F,
    bracket: &Bracket<F>,
    tol: &ToleranceConfig<F>,
) -> Result<F, NumericsError> {
    tol.validate()?;
    let revalidated = Bracket::new(bracket.lo, bracket.hi, bracket.f_lo, bracket.f_hi)?;
    if revalidated.f_lo == F::zero() {
        return Ok(revalidated.lo);
    }
    if revalidated.f_hi == F::zero() {
        return Ok(revalidated.hi);
    }

    let mut lo = revalidated.lo;
    let mut hi = revalidated.hi;
    let mut f_lo = revalidated.f_lo;
    let two = F::of(2.0);

    for _ in 0..tol.max_iter {
        if hi - lo <= tol.abs_tol {
            return Ok((lo + hi) / two);
        }
        let mid = (lo + hi) / two;
        // Bracket cannot shrink past adjacent floats.
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == F::zero() {
            return Ok(mid);
        }
        if (f_mid > F::zero()) == (f_lo > F::zero()) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }

    if hi - lo <= tol.abs_tol {
        Ok((lo + hi) / two)
    } else {
        Err(NumericsError::MaxIterExceeded {
            iters: tol.max_iter,
            width: (hi - lo).as_f64(),
            tol: tol.abs_tol.as_f64(),
        })
    }
}

/// Grid scan over `[lo, hi]` followed by golden-section refinement around the
/// best grid point. Returns `(argmax, max)`; the max is never below the grid
/// maximum, so in particular never below `f(lo)` or `f(hi)`.
pub fn maximize_on_interval<F: Real>(
    f: impl Fn(F) -> F,
    lo: F,
    hi: F,
    tol: &ToleranceConfig<F>,
) -> (F, F) {
    if !(lo < hi) {
        return (lo, f(lo));
    }
    let n = tol.grid_points.max(3);
    let step = (hi - lo) / F::of((n - 1) as f64);

    let mut best_x = lo;
    let mut best_f = f(lo);
    for i in 1..n {
        let x = if i == n - 1 { hi } else { lo + step * F::of(i as f64) };
        let fx = f(x);
        if fx > best_f {
            best_f = fx;
            best_x = x;
        }
    }

    let a = (best_x - step).max(lo);
    let b = (best_x + step).min(hi);
    let (rx, rf) = golden_section_max(&f, a, b, tol.refine_iter);
    if rf > best_f {
        (rx, rf)
    } else {
        (best_x, best_f)
    }
}

/// Golden-section contraction for a maximum on `[a, b]`.
pub(crate) fn golden_section_max<F: Real>(
    f: &impl Fn(F) -> F,
    mut a: F,
    mut b: F,
    iters: usize,
) -> (F, F) {
    let inv_phi = F::of(0.618_033_988_749_894_9);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
        if b - a <= F::epsilon() * (F::one() + a.abs() + b.abs()) {
            break;
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Unique positive root of `Ax^2 + Bx + C` with `B > 0`, `C < 0`, computed in
/// the conjugate form `-2C / (B + sqrt(B^2 - 4AC))`, which stays finite and
/// accurate as `A -> 0`.
pub fn stable_quadratic_root<F: Real>(a: F, b: F, c: F) -> Result<F, NumericsError> {
    let invalid = || NumericsError::InvalidCoefficients {
        a: a.as_f64(),
        b: b.as_f64(),
        c: c.as_f64(),
    };
    if !(b > F::zero()) || !(c < F::zero()) {
        return Err(invalid());
    }
    let disc = b * b - F::of(4.0) * a * c;
    if disc < F::zero() {
        return Err(invalid());
    }
    Ok(-(c + c) / (b + disc.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tol() -> ToleranceConfig<f64> {
        ToleranceConfig::default()
    }

    /// Lemma 2.6 quartic; its root in (0, 1) doubles as a root-finding fixture.
    fn quartic(t: f64) -> f64 {
        ((t - 8.0) * t + 7.0) * t * t + 4.0 * t - 4.0
    }

    /// Sign-scan oracle: first sign-change interval of `f` on (lo, hi) at `n` steps.
    fn sign_scan(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
        let step = (hi - lo) / n as f64;
        let mut out = Vec::new();
        let mut prev_x = lo + step;
        let mut prev = f(prev_x);
        for i in 2..n {
            let x = lo + step * i as f64;
            let fx = f(x);
            if prev.signum() != fx.signum() {
                out.push((prev_x, x));
            }
            prev_x = x;
            prev = fx;
        }
        out
    }

    #[test]
    fn linear_root_is_exact() {
        let f = |x: f64| x - 0.5;
        let bracket = Bracket::from_fn(f, 0.0, 1.0).unwrap();
        let root = find_root(f, &bracket, &tol()).unwrap();
        assert!((root - 0.5).abs() < 1e-12);
    }

    #[test]
    fn quartic_root_matches_sign_scan_oracle() {
        let changes = sign_scan(quartic, 0.0, 1.0, 1_000_000);
        assert_eq!(changes.len(), 1, "expected a unique sign change in (0,1)");
        let (scan_lo, scan_hi) = changes[0];

        let bracket = Bracket::from_fn(quartic, 0.7, 0.9).unwrap();
        let root = find_root(quartic, &bracket, &tol()).unwrap();
        assert!(root >= scan_lo && root <= scan_hi);
        assert!((root - 0.8036).abs() < 1e-3);
        assert!(quartic(root).abs() < 1e-10);
    }

    #[test]
    fn classical_defining_root_is_sqrt5_minus_2() {
        // 2r(1+r) - (1-r)^2 = 0 has the root sqrt(5) - 2.
        let f = |r: f64| 2.0 * r * (1.0 + r) - (1.0 - r) * (1.0 - r);
        let bracket = Bracket::from_fn(f, 0.0, 1.0).unwrap();
        let root = find_root(f, &bracket, &tol()).unwrap();
        assert!((root - (5.0_f64.sqrt() - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn no_sign_change_is_rejected() {
        let err = Bracket::from_fn(|x: f64| x * x + 1.0, -1.0, 1.0).unwrap_err();
        assert!(matches!(err, NumericsError::NoSignChange { .. }));
    }

    #[test]
    fn maximize_finds_quadratic_peak() {
        let (x, fx) = maximize_on_interval(|x: f64| -(x - 0.25) * (x - 0.25), 0.0, 1.0, &tol());
        assert!((x - 0.25).abs() < 1e-8);
        assert!(fx.abs() < 1e-12);
    }

    #[test]
    fn maximize_handles_boundary_maximum() {
        let (x, fx) = maximize_on_interval(|x: f64| x, 0.0, 1.0, &tol());
        assert_eq!(x, 1.0);
        assert_eq!(fx, 1.0);
    }

    #[test]
    fn stable_quadratic_linear_limit() {
        assert_eq!(stable_quadratic_root(0.0, 2.0, -1.0).unwrap(), 0.5);
    }

    #[test]
    fn stable_quadratic_degenerate_leading_coefficient() {
        // A = 2*lambda - p vanishes at p = 2*lambda; the root is 1/3.
        let (p, lambda) = (1.0_f64, 0.5_f64);
        let root = stable_quadratic_root(2.0 * lambda - p, 2.0 * (lambda + p), -p).unwrap();
        assert!((root - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn stable_quadratic_matches_bisection_oracle() {
        // beta(r) = 2p r^2 + (2*lambda + p) r - p with p = 1, lambda = 1.
        let (p, lambda) = (1.0, 1.0);
        let beta = |r: f64| 2.0 * p * r * r + (2.0 * lambda + p) * r - p;
        let bracket = Bracket::from_fn(beta, 0.0, 0.5).unwrap();
        let oracle = find_root(beta, &bracket, &tol()).unwrap();
        let root = stable_quadratic_root(2.0 * p, 2.0 * lambda + p, -p).unwrap();
        assert!((root - oracle).abs() < 1e-11);
        assert!((root - (-3.0 + 17.0_f64.sqrt()) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn stable_quadratic_rejects_bad_coefficients() {
        assert!(stable_quadratic_root(1.0, -2.0, -1.0).is_err());
        assert!(stable_quadratic_root(1.0, 2.0, 1.0).is_err());
        // negative discriminant: A < 0 with large |A|
        assert!(stable_quadratic_root(-10.0, 0.1, -10.0).is_err());
    }

    proptest! {
        #[test]
        fn quadratic_residual_is_small(
            a in -10.0_f64..10.0,
            b in 0.01_f64..10.0,
            c in -10.0_f64..-0.01,
        ) {
            prop_assume!(b * b - 4.0 * a * c >= 0.0);
            let x = stable_quadratic_root(a, b, c).unwrap();
            let residual = (a * x + b) * x + c;
            prop_assert!(residual.abs() < 1e-10);
        }

        #[test]
        fn quadratic_root_continuous_across_a_zero(
            b in 0.01_f64..10.0,
            c in -10.0_f64..-0.01,
        ) {
            let plus = stable_quadratic_root(1e-9, b, c).unwrap();
            let minus = stable_quadratic_root(-1e-9, b, c).unwrap();
            prop_assert!((plus - minus).abs() < 1e-6);
        }

        #[test]
        fn maximize_dominates_endpoints(c0 in -2.0_f64..2.0, c1 in -2.0_f64..2.0, c2 in -2.0_f64..2.0) {
            let f = |x: f64| c0 + c1 * x + c2 * x * x * (x - 0.7).sin();
            let (_, max) = maximize_on_interval(f, 0.0, 1.0, &tol());
            prop_assert!(max >= f(0.0));
            prop_assert!(max >= f(1.0));
        }

        #[test]
        fn find_root_result_sits_on_sign_change(root in 0.05_f64..0.95, scale in 0.1_f64..5.0) {
            let f = |x: f64| scale * (x - root);
            let bracket = Bracket::from_fn(f, 0.0, 1.0).unwrap();
            let x = find_root(f, &bracket, &tol()).unwrap();
            prop_assert!((x - root).abs() <= 1e-12);
        }
    }
}
