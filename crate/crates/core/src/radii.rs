//! Closed-form sharp radii, their defining scalar equations, region
//! classification, and the special constants they hinge on.
//!
//! Each radius is the positive zero of a cheap scalar function (a quadratic,
//! or a low-degree polynomial for the lacunary case). The closed forms here
//! are conjugate-rationalized so they stay finite across the parameter sets
//! where the textbook formulas degenerate to 0/0.

use std::sync::OnceLock;

use thiserror::Error;

use crate::numerics::{find_root, stable_quadratic_root, Bracket, NumericsError, ToleranceConfig};
use crate::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RadiiError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// The five radius families the crate knows about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremId {
    /// `|f|^p + lambda * sum |a_k| r^k <= 1`, radius `R_{lambda,p}`.
    T31,
    /// `|f|^p + lambda * sum |f^(k)|/k! r^k <= 1`, radius `r_{lambda,p}`.
    T32,
    /// `t |f|^p + (1-t) * sum_{k>=0} |a_k| r^k <= 1`, radius `R_{t,p}`.
    T33,
    /// `t |f| + (1-t) * (derivative sum + a) <= 1`, radius `r_t`.
    T34,
    /// Lacunary series starting at degree N, radius `R_N`.
    T12,
}

impl TheoremId {
    pub fn tag(self) -> &'static str {
        match self {
            TheoremId::T31 => "31",
            TheoremId::T32 => "32",
            TheoremId::T33 => "33",
            TheoremId::T34 => "34",
            TheoremId::T12 => "12",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "31" => Some(TheoremId::T31),
            "32" => Some(TheoremId::T32),
            "33" => Some(TheoremId::T33),
            "34" => Some(TheoremId::T34),
            "12" => Some(TheoremId::T12),
            _ => None,
        }
    }
}

/// Parameter tuple of one theorem instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TheoremParams<F: Real> {
    /// `(p, lambda)` for the power/weight families (T31, T32).
    PowerWeight { p: F, lambda: F },
    /// `(t, p)` for the convex-combination family with exponent (T33).
    ConvexPower { t: F, p: F },
    /// `t` for the convex derivative family (T34).
    Convex { t: F },
    /// Starting degree `N >= 2` of the lacunary series (T12).
    Lacunary { n: u32 },
}

impl<F: Real> TheoremParams<F> {
    /// Check the parameter ranges required by `id` and the variant pairing.
    pub fn validate(&self, id: TheoremId) -> Result<(), RadiiError> {
        let bad = |msg: String| Err(RadiiError::InvalidParams(msg));
        match (id, self) {
            (TheoremId::T31, TheoremParams::PowerWeight { p, lambda }) => {
                if !(*p > F::zero()) || !(*lambda > F::zero()) {
                    return bad(format!("theorem 3.1 needs p > 0 and lambda > 0, got p={p}, lambda={lambda}"));
                }
                Ok(())
            }
            (TheoremId::T32, TheoremParams::PowerWeight { p, lambda }) => {
                if !(*p > F::zero() && *p <= F::one()) || !(*lambda > F::zero()) {
                    return bad(format!("theorem 3.2 needs 0 < p <= 1 and lambda > 0, got p={p}, lambda={lambda}"));
                }
                Ok(())
            }
            (TheoremId::T33, TheoremParams::ConvexPower { t, p }) => {
                if !(*t > F::zero() && *t < F::one()) || !(*p > F::zero() && *p <= F::one()) {
                    return bad(format!("theorem 3.3 needs t in (0,1) and 0 < p <= 1, got t={t}, p={p}"));
                }
                Ok(())
            }
            (TheoremId::T34, TheoremParams::Convex { t }) => {
                if !(*t > F::zero() && *t < F::one()) {
                    return bad(format!("theorem 3.4 needs t in (0,1), got t={t}"));
                }
                Ok(())
            }
            (TheoremId::T12, TheoremParams::Lacunary { n }) => {
                if *n < 2 {
                    return bad(format!("theorem 1.2 needs N >= 2, got N={n}"));
                }
                Ok(())
            }
            _ => bad(format!("parameter shape {self:?} does not match theorem {}", id.tag())),
        }
    }
}

/// Parameter region of the two-parameter power/weight inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    I,
    II,
    Outside,
    NotApplicable,
}

impl Region {
    pub fn label(self) -> &'static str {
        match self {
            Region::I => "I",
            Region::II => "II",
            Region::Outside => "outside",
            Region::NotApplicable => "n/a",
        }
    }
}

/// Formula branch the returned radius came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Generic,
    /// Degenerate quadratic `p = 2*lambda` (radius 1/3).
    PTwiceLambda,
    /// Degenerate quadratic `t = 3/(p+3)` (radius 1/2).
    TCritical,
    BelowTstar,
    AboveTstar,
    AtTstar,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::Generic => "generic",
            Branch::PTwiceLambda => "p=2λ",
            Branch::TCritical => "t=3/(p+3)",
            Branch::BelowTstar => "t<t*",
            Branch::AboveTstar => "t>t*",
            Branch::AtTstar => "t=t*",
        }
    }
}

/// A computed sharp radius plus provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusResult<F: Real> {
    pub value: F,
    pub branch: Branch,
    pub region: Region,
    /// Defining-equation value at `value`; near zero by construction.
    pub residual: F,
}

/// Region membership for the power/weight inequality. Boundary points belong
/// to the named region (the defining inequalities are non-strict).
pub fn classify_region<F: Real>(p: F, lambda: F) -> Result<Region, RadiiError> {
    if !(p > F::zero()) || !(lambda > F::zero()) {
        return Err(RadiiError::InvalidParams(format!(
            "region classification needs p > 0 and lambda > 0, got p={p}, lambda={lambda}"
        )));
    }
    if p <= F::one() {
        Ok(Region::I)
    } else if p <= F::of(1.5) && lambda <= F::of(0.9) * p {
        Ok(Region::II)
    } else {
        Ok(Region::Outside)
    }
}

/// Defining scalar function of each radius, with the printed sign convention:
/// the sharp radius is a zero.
pub fn defining_value<F: Real>(
    id: TheoremId,
    r: F,
    params: &TheoremParams<F>,
) -> Result<F, RadiiError> {
    params.validate(id)?;
    if !(r >= F::zero() && r < F::one()) {
        return Err(RadiiError::InvalidParams(format!("r must lie in [0, 1), got {r}")));
    }
    let one = F::one();
    let two = F::of(2.0);
    let value = match (id, params) {
        // h(r) = 2 r lambda (1+r) - p (1-r)^2
        (TheoremId::T31, TheoremParams::PowerWeight { p, lambda }) => {
            two * r * *lambda * (one + r) - *p * (one - r) * (one - r)
        }
        // beta(r) = 2 p r^2 + (2 lambda + p) r - p
        (TheoremId::T32, TheoremParams::PowerWeight { p, lambda }) => {
            two * *p * r * r + (two * *lambda + *p) * r - *p
        }
        // Q(r) = t p (1-r)^2 + (1-t)(1-3r)(1+r), decreasing in r
        (TheoremId::T33, TheoremParams::ConvexPower { t, p }) => {
            *t * *p * (one - r) * (one - r) + (one - *t) * (one - F::of(3.0) * r) * (one + r)
        }
        // l(r) = 2 t r^2 + (2-t) r - t below the branch point,
        // nu(r) = 2 r^2 + (t-4) r + 1 above it
        (TheoremId::T34, TheoremParams::Convex { t }) => {
            if *t <= tstar::<F>() {
                two * *t * r * r + (two - *t) * r - *t
            } else {
                two * r * r + (*t - F::of(4.0)) * r + one
            }
        }
        // (1+r)(1-2r)(1-r)^{N-1} - 2 r^N
        (TheoremId::T12, TheoremParams::Lacunary { n }) => {
            let n = *n as i32;
            (one + r) * (one - two * r) * (one - r).powi(n - 1) - two * r.powi(n)
        }
        _ => unreachable!("validated pairing"),
    };
    Ok(value)
}

/// Sharp radius of a theorem instance, via the conjugate-rationalized closed
/// forms (root finding only for the lacunary family).
pub fn sharp_radius<F: Real>(
    id: TheoremId,
    params: &TheoremParams<F>,
) -> Result<RadiusResult<F>, RadiiError> {
    params.validate(id)?;
    let one = F::one();
    let two = F::of(2.0);
    let (value, branch, region) = match (id, params) {
        (TheoremId::T31, TheoremParams::PowerWeight { p, lambda }) => {
            // Zero of h: (2*lambda - p) r^2 + 2(lambda + p) r - p = 0.
            let value = stable_quadratic_root(two * *lambda - *p, two * (*lambda + *p), -*p)?;
            let branch = if *p == two * *lambda { Branch::PTwiceLambda } else { Branch::Generic };
            (value, branch, classify_region(*p, *lambda)?)
        }
        (TheoremId::T32, TheoremParams::PowerWeight { p, lambda }) => {
            let value = stable_quadratic_root(two * *p, two * *lambda + *p, -*p)?;
            (value, Branch::Generic, Region::NotApplicable)
        }
        (TheoremId::T33, TheoremParams::ConvexPower { t, p }) => {
            // Zero of Q: R = sqrt(u) / (sqrt(u) + 2 sqrt(1-t)), u = t p + 1 - t.
            let u = *t * *p + one - *t;
            let su = u.sqrt();
            let value = su / (su + two * (one - *t).sqrt());
            let degenerate = (*t * (*p + F::of(3.0)) - F::of(3.0)).abs() < F::of(1e-12);
            let branch = if degenerate { Branch::TCritical } else { Branch::Generic };
            (value, branch, Region::NotApplicable)
        }
        (TheoremId::T34, TheoremParams::Convex { t }) => {
            let ts = tstar::<F>();
            let (r1, r2) = lemma26_branch_radii(*t)?;
            if *t < ts {
                (r1, Branch::BelowTstar, Region::NotApplicable)
            } else if *t > ts {
                (r2, Branch::AboveTstar, Region::NotApplicable)
            } else {
                debug_assert!((r1 - r2).abs() < F::of(1e-6));
                (r1, Branch::AtTstar, Region::NotApplicable)
            }
        }
        (TheoremId::T12, TheoremParams::Lacunary { .. }) => {
            let f = |r: F| defining_value(id, r, params).expect("r in (0, 1/2)");
            let value = first_root_by_scan(f, F::of(0.5), 500)?;
            (value, Branch::Generic, Region::NotApplicable)
        }
        _ => unreachable!("validated pairing"),
    };
    let residual = defining_value(id, value, params)?;
    Ok(RadiusResult { value, branch, region, residual })
}

/// First sign change of `f` on (0, hi) at `steps` uniform steps, bisected.
fn first_root_by_scan<F: Real>(
    f: impl Fn(F) -> F,
    hi: F,
    steps: usize,
) -> Result<F, RadiiError> {
    let step = hi / F::of(steps as f64);
    let mut prev_x = step;
    let mut prev_f = f(prev_x);
    for i in 2..steps {
        let x = step * F::of(i as f64);
        let fx = f(x);
        if prev_f * fx <= F::zero() {
            let bracket = Bracket::new(prev_x, x, prev_f, fx)?;
            return Ok(find_root(&f, &bracket, &ToleranceConfig::default())?);
        }
        prev_x = x;
        prev_f = fx;
    }
    Err(RadiiError::Numerics(NumericsError::NoSignChange {
        lo: 0.0,
        hi: hi.as_f64(),
        f_lo: f(step).as_f64(),
        f_hi: prev_f.as_f64(),
    }))
}

fn tstar_quartic<F: Real>(t: F) -> F {
    ((t - F::of(8.0)) * t + F::of(7.0)) * t * t + F::of(4.0) * t - F::of(4.0)
}

/// Branch point of the convex derivative family: the unique root in (0, 1) of
/// `t^4 - 8 t^3 + 7 t^2 + 4 t - 4`. Computed once, cached.
pub fn tstar<F: Real>() -> F {
    static CACHE: OnceLock<f64> = OnceLock::new();
    let value = *CACHE.get_or_init(|| {
        let f = tstar_quartic::<f64>;
        let bracket = Bracket::from_fn(f, 0.7, 0.9).expect("quartic changes sign on [0.7, 0.9]");
        let tol = ToleranceConfig { abs_tol: 1e-15, ..ToleranceConfig::default() };
        find_root(f, &bracket, &tol).expect("bisection converges")
    });
    F::of(value)
}

/// Both branch radii of the convex derivative family, in conjugate form:
/// `r1 = 2t / (2 - t + sqrt(9t^2 - 4t + 4))`,
/// `r2 = 2 / (4 - t + sqrt(t^2 - 8t + 8))`.
pub fn lemma26_branch_radii<F: Real>(t: F) -> Result<(F, F), RadiiError> {
    if !(t > F::zero() && t < F::one()) {
        return Err(RadiiError::InvalidParams(format!("t must lie in (0,1), got {t}")));
    }
    let two = F::of(2.0);
    let four = F::of(4.0);
    let r1 = two * t / (two - t + (F::of(9.0) * t * t - four * t + four).sqrt());
    let r2 = two / (four - t + (t * t - F::of(8.0) * t + F::of(8.0)).sqrt());
    Ok((r1, r2))
}
