use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// f_ε(n) = ((n + 2)(log(n + 2))^{1+ε})^{3/4}.
pub fn barrier_f(eps: f64, n: u64) -> Result<f64> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::Invalid(format!("ε = {eps} must be positive")));
    }
    let m = n as f64 + 2.0;
    Ok((m * m.ln().powf(1.0 + eps)).powf(0.75))
}

/// When a perimeter path stops.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum StoppingSpec {
    FixedSteps(u64),
    /// T_m: first n with P_n ≤ m.
    HitLevel(u64),
    /// τ^ε_x: first n with |X_n − μn| ∨ |Y_n − μn| > x f_ε(n).
    Deviation { x: f64, eps: f64 },
    /// θ_r: first step at which the explored map contains the ball of
    /// radius r. Only the map explorer can evaluate it.
    CoverRadius(u32),
    FirstOf(Vec<StoppingSpec>),
}

/// Which rule ended a path.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum StopReason {
    FixedSteps,
    HitLevel(u64),
    Deviation,
    CoverRadius,
    /// The unexplored region is a single edge.
    EdgeMap,
    /// The remaining boundary has no minus edge.
    MonochromaticPlus,
}

impl StopReason {
    pub fn label(&self) -> String {
        match self {
            StopReason::FixedSteps => "fixed_steps".into(),
            StopReason::HitLevel(m) => format!("T_{m}"),
            StopReason::Deviation => "tau_eps".into(),
            StopReason::CoverRadius => "theta_r".into(),
            StopReason::EdgeMap => "edge_map".into(),
            StopReason::MonochromaticPlus => "monochromatic_plus".into(),
        }
    }
}

/// Parses `steps:N`, `tm:M`, `tau:X:EPS`, `theta:R`, or several of these
/// joined by `,` (first one to fire).
pub fn parse_stopping(s: &str) -> Result<StoppingSpec> {
    let parts: Vec<&str> = s.split(',').map(str::trim).filter(|x| !x.is_empty()).collect();
    if parts.len() > 1 {
        return Ok(StoppingSpec::FirstOf(parts.iter().map(|p| parse_stopping(p)).collect::<Result<_>>()?));
    }
    let p = parts.first().ok_or_else(|| Error::Invalid("empty stopping rule".into()))?;
    let f: Vec<&str> = p.split(':').collect();
    let bad = || Error::Invalid(format!("cannot parse stopping rule {p:?}"));
    let num = |i: usize| -> Result<f64> { f.get(i).ok_or_else(bad)?.parse().map_err(|_| bad()) };
    let int = |i: usize| -> Result<u64> { f.get(i).ok_or_else(bad)?.parse().map_err(|_| bad()) };
    let spec = match f[0] {
        "steps" => StoppingSpec::FixedSteps(int(1)?),
        "tm" => StoppingSpec::HitLevel(int(1)?),
        "tau" => StoppingSpec::Deviation { x: num(1)?, eps: num(2)? },
        "theta" => StoppingSpec::CoverRadius(int(1)? as u32),
        _ => return Err(bad()),
    };
    spec.validate()?;
    Ok(spec)
}

impl StoppingSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            StoppingSpec::Deviation { x, eps } if !(*x >= 0.0 && *eps > 0.0) => {
                Err(Error::Invalid(format!("τ needs x ≥ 0 and ε > 0, got x = {x}, ε = {eps}")))
            }
            StoppingSpec::FirstOf(v) if v.is_empty() => Err(Error::Invalid("empty first_of".into())),
            StoppingSpec::FirstOf(v) => v.iter().try_for_each(|s| s.validate()),
            _ => Ok(()),
        }
    }

    pub fn uses_cover_radius(&self) -> bool {
        match self {
            StoppingSpec::CoverRadius(_) => true,
            StoppingSpec::FirstOf(v) => v.iter().any(|s| s.uses_cover_radius()),
            _ => false,
        }
    }

    /// Whether a rule can fire at all when P stays infinite.
    pub(crate) fn finite_without_p(&self) -> bool {
        match self {
            StoppingSpec::HitLevel(_) => false,
            StoppingSpec::FirstOf(v) => v.iter().any(|s| s.finite_without_p()),
            _ => true,
        }
    }

    /// The rule that fires at step n, if any. `p` is None in the full plane.
    pub(crate) fn check(&self, n: u64, p: Option<i64>, x: i64, y: i64, mu: f64) -> Option<StopReason> {
        match self {
            StoppingSpec::FixedSteps(k) => (n >= *k).then_some(StopReason::FixedSteps),
            StoppingSpec::HitLevel(m) => p.filter(|&p| p <= *m as i64).map(|_| StopReason::HitLevel(*m)),
            StoppingSpec::Deviation { x: level, eps } => {
                let dev = (x as f64 - mu * n as f64).abs().max((y as f64 - mu * n as f64).abs());
                let f = barrier_f(*eps, n).unwrap_or(f64::INFINITY);
                (dev > level * f).then_some(StopReason::Deviation)
            }
            StoppingSpec::CoverRadius(_) => None,
            StoppingSpec::FirstOf(v) => v.iter().find_map(|s| s.check(n, p, x, y, mu)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn barrier_values() {
        let two: f64 = 2.0;
        assert!((barrier_f(1.0, 0).unwrap() - (two * two.ln().powi(2)).powf(0.75)).abs() < 1e-14);
        let v = barrier_f(0.5, 100).unwrap();
        assert!((v - (102f64 * 102f64.ln().powf(1.5)).powf(0.75)).abs() < 1e-12);
        assert!((v - 179.6).abs() < 0.5, "{v}");
        assert!((1..1000).all(|n| barrier_f(0.3, n + 1).unwrap() > barrier_f(0.3, n).unwrap()));
        assert!(barrier_f(0.0, 3).is_err());
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_stopping("tm:5").unwrap(), StoppingSpec::HitLevel(5));
        assert_eq!(
            parse_stopping("tm:5,steps:100").unwrap(),
            StoppingSpec::FirstOf(vec![StoppingSpec::HitLevel(5), StoppingSpec::FixedSteps(100)])
        );
        assert!(parse_stopping("tau:1:0").is_err());
        assert!(parse_stopping("bogus:1").is_err());
    }
}
