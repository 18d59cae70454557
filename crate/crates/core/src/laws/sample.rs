use super::event::PeelingEvent;
use super::law::EventLaw;
use crate::error::{Error, Result};
use rand::Rng;

/// Uniform draw on (0, 1].
fn open_uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Draws the next event, or `None` when the law stops the peeling (the
/// unexplored map is a single edge).
///
/// The family is chosen from the block masses and k by a sequential scan of
/// the per-k weights against the same uniform. Infinite blocks scanned past
/// their table end continue with a power-law tail carrying the remaining mass.
pub fn sample_event<R: Rng + ?Sized>(law: &EventLaw, rng: &mut R) -> Result<Option<PeelingEvent>> {
    if law.defect.is_nan() || law.defect > law.tolerance {
        return Err(Error::Check(format!("normalization defect {:e} above tolerance {:e}", law.defect, law.tolerance)));
    }
    let mut u = rng.random::<f64>() * law.total_mass();
    if u < law.terminal {
        return Ok(None);
    }
    u -= law.terminal;
    let last = law.blocks.len() - 1;
    for (i, b) in law.blocks.iter().enumerate() {
        if u >= b.mass && i < last {
            u -= b.mass;
            continue;
        }
        let mut acc = 0.0;
        let mut k = b.k_lo;
        loop {
            acc += law.block_weight(i, k);
            if u < acc {
                return Ok(Some(b.family.event(k)));
            }
            if Some(k) == b.k_hi {
                // roundoff between the block mass and its per-k sum
                return Ok(Some(b.family.event(k)));
            }
            if k >= b.scan_limit {
                let x = k as f64 * open_uniform(rng).powf(-1.0 / (b.tail_exponent - 1.0));
                let j = (x.floor() as u64).saturating_add(1).max(k + 1);
                return Ok(Some(b.family.event(j)));
            }
            k += 1;
        }
    }
    unreachable!("a law always has at least one block")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::{law_fullplane, law_halfplane, BoundaryTables, Family};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fullplane_family_frequencies() {
        let t = BoundaryTables::shared().unwrap();
        let law = law_fullplane(&t);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 200_000;
        let mut cm = 0;
        let mut lm = 0;
        for _ in 0..n {
            match sample_event(&law, &mut rng).unwrap().unwrap() {
                PeelingEvent::Cm => cm += 1,
                PeelingEvent::Lm(_) => lm += 1,
                _ => {}
            }
        }
        for (count, p) in [(cm, law.family_mass(Family::Cm)), (lm, law.family_mass(Family::Lm))] {
            let sd = (p * (1.0 - p) / n as f64).sqrt();
            assert!((count as f64 / n as f64 - p).abs() < 4.0 * sd, "{count} vs {p}");
        }
    }

    #[test]
    fn halfplane_draws_stay_in_support() {
        let t = BoundaryTables::shared().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [0usize, 3, 40] {
            let law = law_halfplane(p, &t);
            for _ in 0..20_000 {
                let e = sample_event(&law, &mut rng).unwrap().unwrap();
                assert!(law.weight(&e) > 0.0, "{e} at p = {p}");
            }
        }
    }

    #[test]
    fn refuses_bad_laws() {
        let t = BoundaryTables::shared().unwrap();
        let mut law = law_fullplane(&t);
        law.tolerance = -1.0;
        assert!(sample_event(&law, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
    }
}
