//! The extremal Möbius family `f(z) = (a - z)/(1 - az)`, its coefficient and
//! tail identities, Bohr partial sums for arbitrary coefficient data, and the
//! factorial derivative bounds.

use std::path::Path;

use thiserror::Error;

use crate::Real;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// The Möbius self-map of the disk with `f(0) = a`, `a in [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusFamily<F: Real> {
    a: F,
}

impl<F: Real> MoebiusFamily<F> {
    pub fn new(a: F) -> Result<Self, SeriesError> {
        if !(a >= F::zero() && a < F::one()) {
            return Err(SeriesError::Domain(format!("a must lie in [0, 1), got {a}")));
        }
        Ok(Self { a })
    }

    pub fn a(&self) -> F {
        self.a
    }

    /// Coefficient moduli `|a_0| = a`, `|a_k| = (1 - a^2) a^{k-1}` up to
    /// degree `n`, with the geometric tail ratio `a` recorded.
    pub fn coefficients(&self, n: usize) -> CoefficientSeries<F> {
        let a = self.a;
        let head = F::one() - a * a;
        let mut moduli = Vec::with_capacity(n + 1);
        moduli.push(a);
        let mut power = F::one();
        for _ in 1..=n {
            moduli.push(head * power);
            power = power * a;
        }
        CoefficientSeries { moduli, tail_ratio: Some(a) }
    }

    /// Exact value of `sum_{k>=1} |a_k| r^k`: `(1 - a^2) r / (1 - a r)`.
    pub fn tail_closed(&self, r: F) -> F {
        let a = self.a;
        (F::one() - a * a) * r / (F::one() - a * r)
    }

    /// Schwarz–Pick bound `(r + a)/(1 + a r)` on `|f|` over `|z| = r`,
    /// attained by the family itself at `z = -r`.
    pub fn schwarz_pick_majorant(&self, r: F) -> F {
        (r + self.a) / (F::one() + self.a * r)
    }

    /// Exact value of `sum_{k>=1} |f^(k)(r)| r^k / k!`:
    /// `(1 - a^2) r / ((1 - a r)(1 - 2 a r))`. Diverges as `2ar -> 1`.
    pub fn weighted_derivative_tail(&self, r: F) -> Result<F, SeriesError> {
        let a = self.a;
        let two_ar = F::of(2.0) * a * r;
        if two_ar >= F::one() {
            return Err(SeriesError::Domain(format!(
                "derivative tail needs 2ar < 1, got 2ar = {two_ar}"
            )));
        }
        Ok((F::one() - a * a) * r / ((F::one() - a * r) * (F::one() - two_ar)))
    }
}

/// Nonnegative coefficient moduli with optional geometric tail information.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSeries<F: Real> {
    pub moduli: Vec<F>,
    /// Bound on `|a_{k+1}|/|a_k|` beyond the stored prefix, when known.
    pub tail_ratio: Option<F>,
}

impl<F: Real> CoefficientSeries<F> {
    pub fn new(moduli: Vec<F>, tail_ratio: Option<F>) -> Result<Self, SeriesError> {
        if let Some(k) = moduli.iter().position(|m| !(*m >= F::zero())) {
            return Err(SeriesError::Domain(format!(
                "modulus at index {k} is negative or non-finite"
            )));
        }
        if let Some(q) = tail_ratio {
            if !(q >= F::zero() && q < F::one()) {
                return Err(SeriesError::Domain(format!(
                    "tail_ratio must lie in [0, 1), got {q}"
                )));
            }
        }
        Ok(Self { moduli, tail_ratio })
    }

    /// Indices `k >= 1` where `|a_k|` exceeds the coefficient bound
    /// `1 - |a_0|^2` of a function bounded by 1.
    pub fn coefficient_bound_flags(&self) -> Vec<usize> {
        match self.moduli.first() {
            None => Vec::new(),
            Some(&a0) => {
                let bound = F::one() - a0 * a0;
                self.moduli
                    .iter()
                    .enumerate()
                    .skip(1)
                    .filter(|(_, m)| **m > bound)
                    .map(|(k, _)| k)
                    .collect()
            }
        }
    }
}

/// Bohr partial sum `sum moduli[k] r^k` over the stored prefix (from `k = 1`
/// when `skip_constant`), plus a geometric tail bound when the tail ratio is
/// known.
pub fn bohr_partial_sum<F: Real>(
    series: &CoefficientSeries<F>,
    r: F,
    skip_constant: bool,
) -> Result<(F, Option<F>), SeriesError> {
    if !(r >= F::zero() && r < F::one()) {
        return Err(SeriesError::Domain(format!("r must lie in [0, 1), got {r}")));
    }
    let mut value = F::zero();
    let mut r_pow = F::one();
    for (k, &m) in series.moduli.iter().enumerate() {
        if !(k == 0 && skip_constant) {
            value = value + m * r_pow;
        }
        r_pow = r_pow * r;
    }
    // r_pow is now r^len = r^{n+1}; the bound needs r^n at the last stored index.
    let tail_bound = match (series.tail_ratio, series.moduli.last()) {
        (Some(q), Some(&last)) if !series.moduli.is_empty() => {
            let qr = q * r;
            if qr >= F::one() {
                return Err(SeriesError::Domain(format!(
                    "tail_ratio * r must stay below 1, got {qr}"
                )));
            }
            let n = series.moduli.len() - 1;
            let r_n = if r == F::zero() && n == 0 { F::one() } else { r.powi(n as i32) };
            Some(last * r_n * qr / (F::one() - qr))
        }
        _ => None,
    };
    Ok((value, tail_bound))
}

/// A coefficient series read from disk, with any coefficient-bound
/// violations flagged (not rejected: the data need not come from a
/// function bounded by 1).
#[derive(Debug, Clone)]
pub struct LoadedSeries<F: Real> {
    pub series: CoefficientSeries<F>,
    pub flagged_indices: Vec<usize>,
}

/// Read a coefficient file: one nonnegative decimal per line, or a single
/// comma-separated line, with an optional trailing `tail_ratio=<decimal>`.
pub fn load_series<F: Real>(path: impl AsRef<Path>) -> Result<LoadedSeries<F>, SeriesError> {
    let text = std::fs::read_to_string(path)?;
    parse_series(&text)
}

pub fn parse_series<F: Real>(text: &str) -> Result<LoadedSeries<F>, SeriesError> {
    let mut data_lines: Vec<(usize, &str)> = Vec::new();
    let mut tail_ratio: Option<F> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("tail_ratio=") {
            if tail_ratio.is_some() {
                return Err(SeriesError::Parse { line: line_no, msg: "duplicate tail_ratio line".into() });
            }
            let q: f64 = rest.trim().parse().map_err(|e| SeriesError::Parse {
                line: line_no,
                msg: format!("bad tail_ratio value {rest:?}: {e}"),
            })?;
            tail_ratio = Some(F::of(q));
            continue;
        }
        data_lines.push((line_no, line));
    }
    if data_lines.is_empty() {
        return Err(SeriesError::Parse { line: 1, msg: "no coefficient data".into() });
    }

    let mut moduli: Vec<F> = Vec::new();
    let single_csv = data_lines.len() == 1 && data_lines[0].1.contains(',');
    if single_csv {
        let (line_no, line) = data_lines[0];
        for field in line.split(',') {
            moduli.push(parse_modulus(field.trim(), line_no)?);
        }
    } else {
        for (line_no, line) in data_lines {
            moduli.push(parse_modulus(line, line_no)?);
        }
    }

    let series = CoefficientSeries::new(moduli, tail_ratio)?;
    let flagged_indices = series.coefficient_bound_flags();
    Ok(LoadedSeries { series, flagged_indices })
}

fn parse_modulus<F: Real>(field: &str, line: usize) -> Result<F, SeriesError> {
    let value: f64 = field
        .parse()
        .map_err(|e| SeriesError::Parse { line, msg: format!("bad coefficient {field:?}: {e}") })?;
    if !(value >= 0.0) {
        return Err(SeriesError::Parse {
            line,
            msg: format!("coefficient modulus must be nonnegative, got {value}"),
        });
    }
    Ok(F::of(value))
}

/// Upper bound `(1 - m^2) k! (1 + r)^{k-1} / (1 - r^2)^k` on `|f^(k)(z)|`
/// for a self-map of the disk, with `m` standing in for `|f(z)|`.
pub fn derivative_bound<F: Real>(k: u32, r: F, m: F) -> Result<F, SeriesError> {
    if k < 1 {
        return Err(SeriesError::Domain("derivative order k must be at least 1".into()));
    }
    if !(r >= F::zero() && r < F::one()) {
        return Err(SeriesError::Domain(format!("r must lie in [0, 1), got {r}")));
    }
    if !(m >= F::zero() && m <= F::one()) {
        return Err(SeriesError::Domain(format!("m must lie in [0, 1], got {m}")));
    }
    let mut factorial = F::one();
    for i in 2..=k {
        factorial = factorial * F::of(i as f64);
    }
    let one = F::one();
    Ok((one - m * m) * factorial * (one + r).powi(k as i32 - 1) / (one - r * r).powi(k as i32))
}
