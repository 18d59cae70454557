use super::planar::{ColoredPlanarMap, FaceKind, Spin};

/// Placeholder for an unassigned face or next pointer.
pub(crate) const NONE: u32 = u32::MAX;

/// Where the third vertex of a revealed triangle lies, relative to the
/// peeled side s (the last side of a region rotated to its root).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Geo {
    /// A new vertex inside the region.
    C,
    /// The vertex k sides to the right of ρ (k = 0 is ρ itself).
    R(usize),
    /// The vertex k sides to the left of the origin of s (k = 0 is that origin).
    L(usize),
    /// Glue the two sides of a 2-gon into one edge.
    Glue,
}

/// A map under construction. Half-edges are created in twin pairs; a
/// "side" is a half-edge whose face is not assigned yet, facing into a
/// region that still has to be filled. Sides of a region are listed
/// counterclockwise, so the region lies on their left.
#[derive(Clone, Debug)]
pub(crate) struct Builder {
    pub origin: Vec<u32>,
    pub twin: Vec<u32>,
    pub next: Vec<u32>,
    pub face: Vec<u32>,
    pub side_spin: Vec<Option<Spin>>,
    pub dead: Vec<bool>,
    pub faces: Vec<FaceKind>,
    pub n_vertices: u32,
}

impl Builder {
    pub fn new() -> Self {
        Builder {
            origin: vec![],
            twin: vec![],
            next: vec![],
            face: vec![],
            side_spin: vec![],
            dead: vec![],
            faces: vec![FaceKind::External],
            n_vertices: 0,
        }
    }

    pub fn new_vertex(&mut self) -> u32 {
        self.n_vertices += 1;
        self.n_vertices - 1
    }

    /// A twin pair a: u → v, b: v → u, both unassigned.
    pub fn new_pair(&mut self, u: u32, v: u32) -> (u32, u32) {
        let a = self.origin.len() as u32;
        for (o, t) in [(u, a + 1), (v, a)] {
            self.origin.push(o);
            self.twin.push(t);
            self.next.push(NONE);
            self.face.push(NONE);
            self.side_spin.push(None);
            self.dead.push(false);
        }
        (a, a + 1)
    }

    pub fn dest(&self, h: u32) -> u32 {
        self.origin[self.twin[h as usize] as usize]
    }

    /// Spin on the far side of a side: the neighbouring face spin or the
    /// boundary condition.
    pub fn outside_spin(&self, side: u32) -> Spin {
        let t = self.twin[side as usize] as usize;
        match self.faces[self.face[t] as usize] {
            FaceKind::Internal(s) => s,
            _ => self.side_spin[t].expect("boundary half-edge without a spin"),
        }
    }

    /// Polygon with boundary +^p −^q: returns the region sides b_0..b_{L−1}
    /// (b_0 leaving ρ) and the external half-edge leaving ρ.
    pub fn polygon(&mut self, p: usize, q: usize) -> (Vec<u32>, u32) {
        let l = p + q;
        let vs: Vec<u32> = (0..l).map(|_| self.new_vertex()).collect();
        let mut sides = Vec::with_capacity(l);
        let mut ext = Vec::with_capacity(l);
        for i in 0..l {
            let (b, e) = self.new_pair(vs[i], vs[(i + 1) % l]);
            self.face[e as usize] = 0;
            self.side_spin[e as usize] = Some(if i < p { Spin::Plus } else { Spin::Minus });
            sides.push(b);
            ext.push(e);
        }
        for i in 0..l {
            self.next[ext[i] as usize] = ext[(i + l - 1) % l];
        }
        (sides, ext[l - 1])
    }

    /// Reveals the triangle on the last side s of `sides`, whose first side
    /// leaves ρ. Returns the new regions: `[region]` for C, `[right, rest]`
    /// for R(k), `[left, rest]` for L(k). The region called `rest` is the one
    /// that keeps the remaining old sides next to the new edge through s's
    /// far end.
    pub fn reveal(&mut self, sides: &[u32], geo: Geo, spin: Spin) -> Vec<Vec<u32>> {
        let l = sides.len();
        let s = sides[l - 1];
        let x = self.origin[s as usize];
        let rho = self.dest(s);
        let v = match geo {
            Geo::C => self.new_vertex(),
            Geo::R(k) => {
                if k == 0 {
                    rho
                } else {
                    self.dest(sides[k - 1])
                }
            }
            Geo::L(k) => self.origin[sides[l - 1 - k] as usize],
            Geo::Glue => unreachable!("glue is not a triangle"),
        };
        let f = self.faces.len() as u32;
        self.faces.push(FaceKind::Internal(spin));
        let (t1, a1) = self.new_pair(rho, v); // a1: v → ρ
        let (t2, a2) = self.new_pair(v, x); // a2: x → v
        for (h, n) in [(s, t1), (t1, t2), (t2, s)] {
            self.next[h as usize] = n;
            self.face[h as usize] = f;
        }
        let old = &sides[..l - 1];
        match geo {
            Geo::C => {
                let mut r = old.to_vec();
                r.push(a2);
                r.push(a1);
                vec![r]
            }
            Geo::R(k) => {
                let mut right = old[..k].to_vec();
                right.push(a1);
                let mut rest = old[k..].to_vec();
                rest.push(a2);
                vec![right, rest]
            }
            Geo::L(k) => {
                let mut left = old[l - 1 - k..].to_vec();
                left.push(a2);
                let mut rest = vec![a1];
                rest.extend_from_slice(&old[..l - 1 - k]);
                vec![left, rest]
            }
            Geo::Glue => unreachable!(),
        }
    }

    /// Closes a 2-gon with no inner face: the edges behind its two sides
    /// become one edge.
    pub fn glue(&mut self, sides: &[u32]) {
        let (a, b) = (sides[0], sides[1]);
        let (ta, tb) = (self.twin[a as usize], self.twin[b as usize]);
        self.twin[ta as usize] = tb;
        self.twin[tb as usize] = ta;
        self.dead[a as usize] = true;
        self.dead[b as usize] = true;
    }

    /// Turns a region into a face of the given kind.
    pub fn close(&mut self, sides: &[u32], kind: FaceKind) -> u32 {
        let f = self.faces.len() as u32;
        self.faces.push(kind);
        for (i, &h) in sides.iter().enumerate() {
            self.next[h as usize] = sides[(i + 1) % sides.len()];
            self.face[h as usize] = f;
        }
        f
    }

    /// Counts (plus, minus) outside spins and rotates the region so its
    /// first side leaves the Dobrushin root (the vertex with − on its left
    /// and + on its right). For a monochromatic region the order is kept.
    pub fn rotate_to_root(&self, sides: &mut [u32]) -> (usize, usize) {
        let l = sides.len();
        let spins: Vec<Spin> = sides.iter().map(|&h| self.outside_spin(h)).collect();
        let np = spins.iter().filter(|&&s| s == Spin::Plus).count();
        if np == 0 || np == l {
            return (np, l - np);
        }
        let i = (0..l)
            .find(|&i| spins[i] == Spin::Plus && spins[(i + l - 1) % l] == Spin::Minus)
            .expect("two-spin region has a switch");
        sides.rotate_left(i);
        (np, l - np)
    }

    /// Compacts the half-edges into a finished map rooted at `root`.
    pub fn finish(&self, root: u32, root_vertex: u32, p: usize, q: usize) -> ColoredPlanarMap {
        let n = self.twin.len();
        let mut id = vec![NONE; n];
        let mut kept = Vec::new();
        for (h, slot) in id.iter_mut().enumerate() {
            if !self.dead[h] {
                *slot = kept.len() as u32;
                kept.push(h);
            }
        }
        debug_assert!(kept.iter().all(|&h| self.face[h] != NONE), "unfilled region left");
        ColoredPlanarMap {
            origin: kept.iter().map(|&h| self.origin[h]).collect(),
            twin: kept.iter().map(|&h| id[self.twin[h] as usize]).collect(),
            next: kept.iter().map(|&h| id[self.next[h] as usize]).collect(),
            face: kept.iter().map(|&h| self.face[h]).collect(),
            side_spin: kept.iter().map(|&h| self.side_spin[h]).collect(),
            faces: self.faces.clone(),
            n_vertices: self.n_vertices,
            root: Some(id[root as usize]),
            root_vertex,
            p,
            q,
        }
    }
}
