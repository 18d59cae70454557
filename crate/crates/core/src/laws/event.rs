use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A peeling event: which triangle is revealed and, for the swallowing
/// events, how many boundary edges it encloses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PeelingEvent {
    Cp,
    Cm,
    Lp(u64),
    Lm(u64),
    Rp(u64),
    Rm(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Cp,
    Cm,
    Lp,
    Lm,
    Rp,
    Rm,
}

impl Family {
    pub const ALL: [Family; 6] = [Family::Cp, Family::Cm, Family::Lp, Family::Lm, Family::Rp, Family::Rm];

    pub fn event(self, k: u64) -> PeelingEvent {
        match self {
            Family::Cp => PeelingEvent::Cp,
            Family::Cm => PeelingEvent::Cm,
            Family::Lp => PeelingEvent::Lp(k),
            Family::Lm => PeelingEvent::Lm(k),
            Family::Rp => PeelingEvent::Rp(k),
            Family::Rm => PeelingEvent::Rm(k),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Cp => "Cp",
            Family::Cm => "Cm",
            Family::Lp => "Lp",
            Family::Lm => "Lm",
            Family::Rp => "Rp",
            Family::Rm => "Rm",
        }
    }
}

impl PeelingEvent {
    pub fn family(&self) -> Family {
        match self {
            PeelingEvent::Cp => Family::Cp,
            PeelingEvent::Cm => Family::Cm,
            PeelingEvent::Lp(_) => Family::Lp,
            PeelingEvent::Lm(_) => Family::Lm,
            PeelingEvent::Rp(_) => Family::Rp,
            PeelingEvent::Rm(_) => Family::Rm,
        }
    }

    /// The swallowed edge count (0 for the two C events).
    pub fn k(&self) -> u64 {
        match *self {
            PeelingEvent::Cp | PeelingEvent::Cm => 0,
            PeelingEvent::Lp(k) | PeelingEvent::Lm(k) | PeelingEvent::Rp(k) | PeelingEvent::Rm(k) => k,
        }
    }

    /// Parses the `Display` form, e.g. `Cp` or `Rm(12)`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Invalid(format!("unknown event {s:?}"));
        match s {
            "Cp" => return Ok(PeelingEvent::Cp),
            "Cm" => return Ok(PeelingEvent::Cm),
            _ => {}
        }
        let (head, rest) = s.split_at(s.find('(').ok_or_else(bad)?);
        let k: u64 = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let fam = match head {
            "Lp" => Family::Lp,
            "Lm" => Family::Lm,
            "Rp" => Family::Rp,
            "Rm" => Family::Rm,
            _ => return Err(bad()),
        };
        Ok(fam.event(k))
    }
}

impl fmt::Display for PeelingEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PeelingEvent::Cp | PeelingEvent::Cm => write!(f, "{}", self.family().name()),
            e => write!(f, "{}({})", e.family().name(), e.k()),
        }
    }
}

/// Where the peeling currently stands. In the finite regime (p, q) is the
/// boundary, with q ≥ 1 minus edges one of which is peeled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    Finite { p: u64, q: u64 },
    Halfplane { p: u64 },
    Fullplane,
}

impl Regime {
    pub fn p(&self) -> Option<u64> {
        match *self {
            Regime::Finite { p, .. } | Regime::Halfplane { p } => Some(p),
            Regime::Fullplane => None,
        }
    }

    /// Whether the event can occur as the next step.
    pub fn supports(&self, e: &PeelingEvent) -> bool {
        use PeelingEvent::*;
        match *self {
            Regime::Fullplane => true,
            Regime::Halfplane { .. } => true,
            Regime::Finite { p, q } => {
                if q == 0 {
                    return false;
                }
                let q1 = q - 1;
                match *e {
                    Cp | Cm => true,
                    Lp(k) | Lm(k) => q1 > 0 && 2 * k <= q1,
                    Rp(k) | Rm(k) => k <= p || 2 * (k - p) < q1,
                }
            }
        }
    }
}

/// Increment (X₁, Y₁) of the two perimeters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Displacement {
    pub dx: i64,
    pub dy: i64,
}

pub fn displacement(e: &PeelingEvent, regime: &Regime) -> Result<Displacement> {
    use PeelingEvent::*;
    if !regime.supports(e) {
        return Err(Error::Support(format!("{e} under {regime:?}")));
    }
    let d = |dx: i64, dy: i64| Displacement { dx, dy };
    let k = e.k() as i64;
    Ok(match (*e, regime.p()) {
        (Cp, _) => d(2, -1),
        (Cm, _) => d(0, 1),
        (Lp(_), _) => d(1, -k - 1),
        (Lm(_), _) => d(0, -k),
        (Rp(j), Some(p)) if j > p => d(-(p as i64) + 1, -(k - p as i64) - 1),
        (Rm(j), Some(p)) if j > p => d(-(p as i64), -(k - p as i64)),
        (Rp(_), _) => d(-k + 1, -1),
        (Rm(_), _) => d(-k, 0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows() {
        let full = Regime::Fullplane;
        assert_eq!(displacement(&PeelingEvent::Cp, &full).unwrap(), Displacement { dx: 2, dy: -1 });
        assert_eq!(displacement(&PeelingEvent::Rm(0), &full).unwrap(), Displacement { dx: 0, dy: 0 });
        let half = Regime::Halfplane { p: 7 };
        assert_eq!(displacement(&PeelingEvent::Rm(10), &half).unwrap(), Displacement { dx: -7, dy: -3 });
        assert_eq!(displacement(&PeelingEvent::Rp(10), &half).unwrap(), Displacement { dx: -6, dy: -4 });
        assert_eq!(displacement(&PeelingEvent::Rp(7), &half).unwrap(), Displacement { dx: -6, dy: -1 });
    }

    #[test]
    fn finite_support() {
        // boundary (2, 5): q' = 4, so L up to 2 and jumps p+1 only
        let r = Regime::Finite { p: 2, q: 5 };
        assert!(r.supports(&PeelingEvent::Lp(2)) && !r.supports(&PeelingEvent::Lm(3)));
        assert!(r.supports(&PeelingEvent::Rm(3)) && !r.supports(&PeelingEvent::Rm(4)));
        assert!(displacement(&PeelingEvent::Cp, &Regime::Finite { p: 1, q: 0 }).is_err());
    }

    #[test]
    fn display_round_trip() {
        for e in [PeelingEvent::Cp, PeelingEvent::Cm, PeelingEvent::Lp(3), PeelingEvent::Rm(0), PeelingEvent::Rp(41)] {
            assert_eq!(PeelingEvent::parse(&e.to_string()).unwrap(), e);
        }
        assert!(PeelingEvent::parse("Xp(1)").is_err());
    }
}
