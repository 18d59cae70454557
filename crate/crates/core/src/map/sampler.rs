use std::collections::HashMap;

use rand::Rng;

use super::builder::{Builder, Geo};
use super::planar::{validate_map, ColoredPlanarMap, Expected, Spin};
use crate::algebra::Field;
use crate::error::{Error, Result};
use crate::tutte::{Coef, CoeffTable};

/// A region waiting to be filled: its current (p, q) and face budget.
#[derive(Clone, Debug)]
pub struct SamplerNode {
    pub p: usize,
    pub q: usize,
    pub budget: usize,
    pub(crate) sides: Vec<u32>,
}

/// One decomposition step: where the triangle's third vertex goes, whether
/// the triangle takes the majority role spin ("plus" in the oriented
/// region), and the face budget of the first child region.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Choice {
    pub geo: Geo,
    pub plus: bool,
    pub n1: usize,
}

/// All (choice, weight) pairs for an oriented (p, q) region, q ≥ 1, with n
/// inner faces. Weights are products of table coefficients; they sum to
/// the table entry of (p, q, n) (up to the rescaling of float tables).
pub(crate) fn choices<F: Field + Coef<Nu = F>>(t: &CoeffTable<F>, p: usize, q: usize, n: usize) -> Result<Vec<(Choice, F)>> {
    let nu = t.nu.clone();
    let c = |a: usize, b: usize, m: usize| t.coeff(a, b, m);
    let mut out = Vec::new();
    let mut push = |geo, plus, n1, w: F| {
        if !Field::is_zero(&w) {
            out.push((Choice { geo, plus, n1 }, w));
        }
    };
    if n == 0 {
        // the edge maps, weight 1 or ν (times the table's rescaling)
        if matches!((p, q), (1, 1) | (0, 2)) {
            push(Geo::Glue, p == 1, 0, c(p, q, 0)?);
        }
        return Ok(out);
    }
    let m = n - 1;
    let q1 = q - 1;
    push(Geo::C, true, 0, c(p + 2, q1, m)?);
    push(Geo::C, false, 0, c(p, q + 1, m)?.fmul(&nu));
    for k in 0..=p {
        for n1 in 0..=m {
            let a = c(k + 1, 0, n1)?;
            if !Field::is_zero(&a) {
                push(Geo::R(k), true, n1, a.fmul(&c(p - k + 1, q1, m - n1)?));
            }
            let b = c(k, 1, n1)?;
            if !Field::is_zero(&b) {
                push(Geo::R(k), false, n1, b.fmul(&c(p - k, q, m - n1)?).fmul(&nu));
            }
        }
    }
    // L(q1) is the same triangle as R(p)
    for k in 0..q1 {
        for n1 in 0..=m {
            let a = c(1, k, n1)?;
            if !Field::is_zero(&a) {
                push(Geo::L(k), true, n1, a.fmul(&c(p + 1, q1 - k, m - n1)?));
            }
            let b = c(0, k + 1, n1)?;
            if !Field::is_zero(&b) {
                push(Geo::L(k), false, n1, b.fmul(&c(p, q1 - k + 1, m - n1)?).fmul(&nu));
            }
        }
    }
    Ok(out)
}

/// Orients a region: rotates it to its root and, for an all-plus region,
/// swaps the roles of the spins. Returns (node, flipped).
fn orient(b: &Builder, mut sides: Vec<u32>, budget: usize) -> (SamplerNode, bool) {
    let (np, nm) = b.rotate_to_root(&mut sides);
    if nm == 0 {
        (SamplerNode { p: 0, q: np, budget, sides }, true)
    } else {
        (SamplerNode { p: np, q: nm, budget, sides }, false)
    }
}

/// Applies a choice to an oriented node and returns the child nodes with
/// their budgets.
fn apply(b: &mut Builder, node: &SamplerNode, flipped: bool, ch: Choice) -> Vec<(Vec<u32>, usize)> {
    if ch.geo == Geo::Glue {
        b.glue(&node.sides);
        return vec![];
    }
    let spin = if ch.plus != flipped { Spin::Plus } else { Spin::Minus };
    let mut regions = b.reveal(&node.sides, ch.geo, spin);
    let m = node.budget - 1;
    if ch.geo == Geo::C {
        return vec![(regions.pop().unwrap(), m)];
    }
    let second = regions.pop().unwrap();
    let first = regions.pop().unwrap();
    vec![(first, ch.n1), (second, m - ch.n1)]
}

fn check_total<F: Field + Coef<Nu = F>>(t: &CoeffTable<F>, node: &SamplerNode, total: f64) -> Result<()> {
    let expect = t.coeff(node.p, node.q, node.budget)?.to_f64();
    let (sigma, rho) = t.scale;
    let factor = if node.budget == 0 { 1.0 } else { sigma / rho };
    let got = total * factor;
    if (got - expect).abs() > 1e-9 * expect.abs() {
        return Err(Error::Check(format!(
            "choice weights of ({},{},{}) sum to {got}, table has {expect}",
            node.p, node.q, node.budget
        )));
    }
    Ok(())
}

/// Fills a region of the builder with an exact sample of n faces.
pub(crate) fn fill_region<F, R>(b: &mut Builder, sides: Vec<u32>, n: usize, t: &CoeffTable<F>, rng: &mut R) -> Result<()>
where
    F: Field + Coef<Nu = F>,
    R: Rng + ?Sized,
{
    let mut stack = vec![(sides, n)];
    while let Some((sides, budget)) = stack.pop() {
        let (node, flipped) = orient(b, sides, budget);
        let ch = choices(t, node.p, node.q, budget)?;
        let w: Vec<f64> = ch.iter().map(|(_, w)| w.to_f64()).collect();
        let total: f64 = w.iter().sum();
        if ch.is_empty() || total <= 0.0 {
            return Err(Error::Check(format!("empty support at ({},{},{budget})", node.p, node.q)));
        }
        check_total(t, &node, total)?;
        let mut u = rng.random::<f64>() * total;
        let mut pick = ch.len() - 1;
        for (i, x) in w.iter().enumerate() {
            if u < *x {
                pick = i;
                break;
            }
            u -= x;
        }
        stack.extend(apply(b, &node, flipped, ch[pick].0));
    }
    Ok(())
}

fn check_target<F: Field + Coef<Nu = F>>(p: usize, q: usize, n: usize, t: &CoeffTable<F>) -> Result<()> {
    if p + q == 0 {
        return Err(Error::Invalid("the boundary needs at least one edge".into()));
    }
    if n > t.n_max {
        return Err(Error::OutOfRange(format!("n = {n} beyond table order {}", t.n_max)));
    }
    if Field::is_zero(&t.coeff(p, q, n)?) {
        return Err(Error::Invalid(format!("no triangulation of the ({p},{q})-gon with {n} faces")));
    }
    Ok(())
}

/// Exact sample of the measure ∝ ν^{#monochromatic edges} on triangulations
/// of the (p, q)-gon with n internal faces, ν being the table's ν.
///
/// Every step picks an event and a split of the face budget with
/// probability (product of table coefficients) / (current coefficient);
/// the weights are computed in the table's field and only the final ratio
/// is rounded to a double.
pub fn sample_finite_map<F, R>(p: usize, q: usize, n: usize, table: &CoeffTable<F>, rng: &mut R) -> Result<ColoredPlanarMap>
where
    F: Field + Coef<Nu = F>,
    R: Rng + ?Sized,
{
    check_target(p, q, n, table)?;
    let mut b = Builder::new();
    let (sides, root) = b.polygon(p, q);
    fill_region(&mut b, sides, n, table, rng)?;
    let m = b.finish(root, 0, p, q);
    let rep = validate_map(&m, table.nu.to_f64(), &Expected { p: Some(p), q: Some(q), faces: Some(n), weight: None });
    if !rep.ok() {
        return Err(Error::Check(format!("sampled map fails validation: {rep}")));
    }
    Ok(m)
}

/// A distinct map of an exhaustive enumeration with its weight ν^{#mono}
/// and the number of decomposition sequences that produced it.
#[derive(Clone, Debug)]
pub struct EnumeratedMap<F> {
    pub map: ColoredPlanarMap,
    pub weight: F,
    pub sequences: usize,
}

fn nu_pow<F: Field>(nu: &F, k: usize) -> F {
    (0..k).fold(<F as Field>::one(), |acc, _| acc.fmul(nu))
}

/// Every triangulation of the (p, q)-gon with n faces reachable through the
/// decomposition, grouped by canonical form. Exponential; meant for n ≤ 4.
pub fn enumerate_maps<F: Field + Coef<Nu = F>>(p: usize, q: usize, n: usize, table: &CoeffTable<F>) -> Result<Vec<EnumeratedMap<F>>> {
    if n > 6 {
        return Err(Error::Budget(format!("exhaustive enumeration limited to n ≤ 6, got {n}")));
    }
    check_target(p, q, n, table)?;
    let mut b = Builder::new();
    let (sides, root) = b.polygon(p, q);
    let mut found: HashMap<Vec<u32>, EnumeratedMap<F>> = HashMap::new();
    let mut order = Vec::new();
    let mut work = vec![(b, vec![(sides, n)])];
    while let Some((b, mut stack)) = work.pop() {
        let Some((sides, budget)) = stack.pop() else {
            let m = b.finish(root, 0, p, q);
            let key = m.canonical_form();
            let w = nu_pow(&table.nu, m.n_monochromatic());
            match found.get_mut(&key) {
                Some(e) => e.sequences += 1,
                None => {
                    order.push(key.clone());
                    found.insert(key, EnumeratedMap { map: m, weight: w, sequences: 1 });
                }
            }
            continue;
        };
        let (node, flipped) = orient(&b, sides, budget);
        for (ch, _) in choices(table, node.p, node.q, budget)? {
            let mut b2 = b.clone();
            let mut s2 = stack.clone();
            s2.extend(apply(&mut b2, &node, flipped, ch));
            work.push((b2, s2));
        }
    }
    Ok(order.into_iter().map(|k| found.remove(&k).unwrap()).collect())
}
