use serde::{Deserialize, Serialize};

use super::planar::{ColoredPlanarMap, Spin};
use crate::error::{Error, Result};

/// The leftmost interface from ρ to ρ†, as half-edges with − on their left
/// and + on their right.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interface {
    pub half_edges: Vec<u32>,
    pub length: usize,
    /// ρ†, where the boundary turns from + back to −.
    pub rho_dagger: u32,
}

/// Follows non-monochromatic edges from ρ, always taking the leftmost one,
/// until ρ† is reached. Boundary edges count with the boundary spin on
/// their outer side.
pub fn trace_leftmost_interface(m: &ColoredPlanarMap) -> Result<Interface> {
    let bd = m.boundary();
    let word = m.boundary_word();
    let p = word.chars().take_while(|&c| c == '+').count();
    if p == 0 || p == bd.len() || word.chars().skip(p).any(|c| c != '-') {
        return Err(Error::Invalid(format!("boundary {word} is not a two-spin Dobrushin boundary")));
    }
    // inner side of boundary edge i runs from v_i to v_{i+1}
    let inner = |i: usize| m.twin[bd[i] as usize];
    let rho_dagger = m.origin[inner(p) as usize];
    let crosses = |g: u32| m.left_spin(g) == Some(Spin::Minus) && m.left_spin(m.twin[g as usize]) == Some(Spin::Plus);
    let mut used = vec![false; m.twin.len()];
    let mut path = Vec::new();
    let mut h = inner(bd.len() - 1);
    loop {
        // sweep the edges leaving dest(h) from the left; at ρ the sweep
        // starts along the − boundary
        let back = m.twin[h as usize];
        let first = if path.is_empty() { back } else { m.next[h as usize] };
        let mut g = first;
        let mut found = None;
        for _ in 0..m.twin.len() {
            if crosses(g) && !used[g as usize] {
                found = Some(g);
                break;
            }
            if g == back && !path.is_empty() {
                break;
            }
            g = m.next[m.twin[g as usize] as usize];
            if g == first {
                break;
            }
        }
        let g = found.ok_or_else(|| Error::Check(format!("interface stuck after {} edges", path.len())))?;
        used[g as usize] = true;
        used[m.twin[g as usize] as usize] = true;
        path.push(g);
        if m.dest(g) == rho_dagger {
            break;
        }
        h = g;
    }
    Ok(Interface { length: path.len(), half_edges: path, rho_dagger })
}
