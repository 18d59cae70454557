use super::CoeffTable;
use crate::error::{Error, Result};

/// How to treat the orders beyond the table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailMode {
    /// Partial sum only, error reported as zero.
    Truncate,
    /// At the radius of convergence, bound the remainder with an n^{−7/3}
    /// tail whose prefactor is fitted on the last 20 nonzero coefficients.
    Extrapolate,
}

/// A truncated evaluation of z_{p,q}(ν, t).
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionValue {
    pub value: f64,
    pub truncation_error: f64,
    /// True when the error comes from a fitted tail model rather than a proof.
    pub heuristic: bool,
}

/// The fitted prefactor still drifts upward at desk-scale orders, so the
/// tail estimate is doubled.
const TAIL_SAFETY: f64 = 2.0;

/// Σ_{k ≥ 0} (first + k·step)^{−s}: explicit terms, then the integral remainder.
fn power_tail(first: usize, step: usize, s: f64) -> f64 {
    let mut acc = 0.0;
    let mut n = first as f64;
    let h = step as f64;
    for _ in 0..20_000 {
        acc += n.powf(-s);
        n += h;
    }
    acc + (n - h / 2.0).powf(1.0 - s) / ((s - 1.0) * h)
}

/// Σ_{n ≤ n_max} [tⁿ]z_{p,q}(ν)·tⁿ from a rescaled float table.
pub fn eval_partition(table: &CoeffTable<f64>, p: usize, q: usize, nu: f64, t: f64, tail: TailMode) -> Result<PartitionValue> {
    if (nu - table.nu).abs() > 1e-12 * table.nu.abs().max(1.0) {
        return Err(Error::Invalid(format!("table built at ν = {}, asked for ν = {nu}", table.nu)));
    }
    if t.is_nan() || t < 0.0 {
        return Err(Error::Invalid(format!("negative t = {t}")));
    }
    let (sigma, rho) = table.scale;
    let x = t / sigma;
    let rescale = rho.powi((p + q) as i32);
    let mut value = 0.0;
    let mut pw = 1.0;
    let mut terms = Vec::with_capacity(table.n_max + 1);
    for n in 0..=table.n_max {
        let c = table.coeff(p, q, n)? * pw;
        value += c;
        terms.push(c);
        pw *= x;
    }
    value /= rescale;
    let at_radius = (x - 1.0).abs() < 1e-12;
    if tail == TailMode::Truncate || !at_radius {
        return Ok(PartitionValue { value, truncation_error: 0.0, heuristic: false });
    }
    let nz: Vec<(usize, f64)> = terms.iter().copied().enumerate().filter(|&(n, c)| n > 0 && c != 0.0).collect();
    if nz.is_empty() {
        return Ok(PartitionValue { value, truncation_error: 0.0, heuristic: false });
    }
    let last = &nz[nz.len().saturating_sub(20)..];
    let s = 7.0 / 3.0;
    let fit = last.iter().map(|&(n, c)| c * (n as f64).powf(s)).sum::<f64>() / last.len() as f64;
    // Only one parity class of n carries coefficients.
    let step = if nz.len() > 1 && nz.windows(2).all(|w| w[1].0 - w[0].0 == 2) { 2 } else { 1 };
    let first = nz[nz.len() - 1].0 + step;
    let remainder = TAIL_SAFETY * fit.abs() * power_tail(first, step, s);
    Ok(PartitionValue { value, truncation_error: remainder / rescale, heuristic: true })
}

/// Sequence (n, n^γ·t_refⁿ·[tⁿ]z_{p,q}) over the nonzero orders in [n_lo, n_hi].
pub fn volume_exponent_probe(
    table: &CoeffTable<f64>,
    p: usize,
    q: usize,
    t_ref: f64,
    gamma: f64,
    n_lo: usize,
    n_hi: usize,
) -> Result<Vec<(usize, f64)>> {
    if n_lo > n_hi || n_hi > table.n_max {
        return Err(Error::OutOfRange(format!("range [{n_lo},{n_hi}] invalid for n_max {}", table.n_max)));
    }
    let (sigma, rho) = table.scale;
    let lx = (t_ref / sigma).ln();
    let rescale = rho.powi((p + q) as i32);
    let mut out = Vec::new();
    for n in n_lo..=n_hi {
        let c = table.coeff(p, q, n)?;
        if c != 0.0 {
            let nf = n as f64;
            out.push((n, c * (lx * nf + gamma * nf.ln()).exp() / rescale));
        }
    }
    Ok(out)
}

/// Local exponent estimates γ_n = −log(c_{n+2}c_{n−2}/c_n²)/log(1 − 4/n²),
/// which do not depend on the radius of convergence.
pub fn exponent_estimates(table: &CoeffTable<f64>, p: usize, q: usize, n_lo: usize, n_hi: usize) -> Result<Vec<(usize, f64)>> {
    if n_lo < 3 || n_lo > n_hi || n_hi + 2 > table.n_max {
        return Err(Error::OutOfRange(format!("range [{n_lo},{n_hi}] invalid for n_max {}", table.n_max)));
    }
    let mut out = Vec::new();
    for n in n_lo..=n_hi {
        let (a, b, c) = (table.coeff(p, q, n - 2)?, table.coeff(p, q, n)?, table.coeff(p, q, n + 2)?);
        if a > 0.0 && b > 0.0 && c > 0.0 {
            let nf = n as f64;
            let r = (c / b).ln() + (a / b).ln();
            out.push((n, -r / (-4.0 / (nf * nf)).ln_1p()));
        }
    }
    Ok(out)
}

/// Radius of convergence estimate from c_n/c_{n−2}, corrected for an n^{−γ} factor.
pub fn radius_estimate(table: &CoeffTable<f64>, p: usize, q: usize, n: usize, gamma: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::OutOfRange("order too small".into()));
    }
    let (a, b) = (table.coeff(p, q, n - 2)?, table.coeff(p, q, n)?);
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Invalid(format!("zero coefficient near order {n}")));
    }
    let nf = n as f64;
    let ratio = b / a * (nf / (nf - 2.0)).powf(gamma);
    Ok(table.scale.0 / ratio.sqrt())
}

/// Relative spread (max − min)/mean of the values.
pub fn relative_drift(seq: &[(usize, f64)]) -> f64 {
    if seq.is_empty() {
        return 0.0;
    }
    let (mut lo, mut hi, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
    for &(_, v) in seq {
        lo = lo.min(v);
        hi = hi.max(v);
        sum += v;
    }
    (hi - lo) / (sum / seq.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tutte::{build_critical_table, build_scaled_table};

    #[test]
    fn constant_series() {
        let t = build_scaled_table(10, 2, 2.0, 0.05, 0.3).unwrap();
        let v = eval_partition(&t, 0, 0, 2.0, 0.01, TailMode::Truncate).unwrap();
        assert_eq!(v.value, 1.0);
        assert_eq!(v.truncation_error, 0.0);
        let v = eval_partition(&t, 0, 1, 2.0, 0.0, TailMode::Extrapolate).unwrap();
        assert_eq!(v.value, 0.0);
        assert!(eval_partition(&t, 0, 1, 3.0, 0.0, TailMode::Truncate).is_err());
        assert!(eval_partition(&t, 0, 1, 2.0, -1.0, TailMode::Truncate).is_err());
    }

    #[test]
    fn probe_ranges() {
        let t = build_critical_table(20, 1).unwrap();
        let (sigma, _) = t.scale;
        assert_eq!(volume_exponent_probe(&t, 1, 0, sigma, 7.0 / 3.0, 11, 11).unwrap().len(), 1);
        assert!(volume_exponent_probe(&t, 1, 0, sigma, 7.0 / 3.0, 12, 11).is_err());
        assert!(volume_exponent_probe(&t, 1, 0, sigma, 7.0 / 3.0, 1, 21).is_err());
    }
}
