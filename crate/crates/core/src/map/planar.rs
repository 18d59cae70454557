use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Spin {
    Plus,
    Minus,
}

impl Spin {
    pub fn flip(self) -> Spin {
        match self {
            Spin::Plus => Spin::Minus,
            Spin::Minus => Spin::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Spin::Plus => '+',
            Spin::Minus => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FaceKind {
    Internal(Spin),
    External,
    /// The unexplored region of a peeling exploration.
    Hole,
    /// A swallowed region left unfilled.
    Unexplored,
}

impl FaceKind {
    fn code(self) -> u8 {
        match self {
            FaceKind::Internal(Spin::Plus) => 0,
            FaceKind::Internal(Spin::Minus) => 1,
            FaceKind::External => 2,
            FaceKind::Hole => 3,
            FaceKind::Unexplored => 4,
        }
    }

    fn label(self) -> &'static str {
        match self {
            FaceKind::Internal(Spin::Plus) => "+",
            FaceKind::Internal(Spin::Minus) => "-",
            FaceKind::External => "ext",
            FaceKind::Hole => "hole",
            FaceKind::Unexplored => "unexplored",
        }
    }

    fn parse(s: &str) -> Option<FaceKind> {
        Some(match s {
            "+" => FaceKind::Internal(Spin::Plus),
            "-" => FaceKind::Internal(Spin::Minus),
            "ext" => FaceKind::External,
            "hole" => FaceKind::Hole,
            "unexplored" => FaceKind::Unexplored,
            _ => return None,
        })
    }
}

/// Face-colored planar map stored as half-edges.
///
/// `next[h]` follows the face on the left of `h`; internal faces are
/// traversed counterclockwise, the external face clockwise. Half-edges on
/// the external face of a boundary edge carry the boundary spin in
/// `side_spin`. `root` is the external half-edge leaving the root vertex ρ,
/// so reading the boundary counterclockwise from ρ means walking the
/// external cycle backwards from `root`. A map without half-edges is the
/// single-vertex map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredPlanarMap {
    pub origin: Vec<u32>,
    pub twin: Vec<u32>,
    pub next: Vec<u32>,
    pub face: Vec<u32>,
    pub side_spin: Vec<Option<Spin>>,
    pub faces: Vec<FaceKind>,
    pub n_vertices: u32,
    pub root: Option<u32>,
    pub root_vertex: u32,
    /// Boundary condition (p, q) the map was built for.
    pub p: usize,
    pub q: usize,
}

impl ColoredPlanarMap {
    pub fn vertex_map() -> Self {
        ColoredPlanarMap {
            origin: vec![],
            twin: vec![],
            next: vec![],
            face: vec![],
            side_spin: vec![],
            faces: vec![FaceKind::External],
            n_vertices: 1,
            root: None,
            root_vertex: 0,
            p: 0,
            q: 0,
        }
    }

    pub fn n_half_edges(&self) -> usize {
        self.twin.len()
    }

    pub fn n_edges(&self) -> usize {
        self.twin.len() / 2
    }

    pub fn dest(&self, h: u32) -> u32 {
        self.origin[self.twin[h as usize] as usize]
    }

    pub fn kind_of(&self, h: u32) -> FaceKind {
        self.faces[self.face[h as usize] as usize]
    }

    /// Number of internal (colored) faces.
    pub fn n_internal_faces(&self) -> usize {
        self.faces.iter().filter(|k| matches!(k, FaceKind::Internal(_))).count()
    }

    /// Spin seen on the left of `h`: the face spin, or the boundary spin for
    /// a half-edge on the external face.
    pub fn left_spin(&self, h: u32) -> Option<Spin> {
        match self.kind_of(h) {
            FaceKind::Internal(s) => Some(s),
            _ => self.side_spin[h as usize],
        }
    }

    pub fn is_monochromatic(&self, h: u32) -> bool {
        let t = self.twin[h as usize];
        match (self.left_spin(h), self.left_spin(t)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }

    pub fn n_monochromatic(&self) -> usize {
        (0..self.twin.len() as u32)
            .filter(|&h| h < self.twin[h as usize] && self.is_monochromatic(h))
            .count()
    }

    /// ν^{#monochromatic edges} · face count is the Boltzmann weight.
    pub fn weight(&self, nu: f64) -> f64 {
        nu.powi(self.n_monochromatic() as i32)
    }

    /// The cycle of half-edges starting at h along `next`.
    pub fn face_cycle(&self, h: u32) -> Vec<u32> {
        let mut out = vec![h];
        let mut g = self.next[h as usize];
        while g != h {
            out.push(g);
            g = self.next[g as usize];
            if out.len() > self.twin.len() {
                break;
            }
        }
        out
    }

    /// Boundary half-edges (external side) in counterclockwise order from ρ.
    pub fn boundary(&self) -> Vec<u32> {
        let Some(r) = self.root else { return vec![] };
        let mut c = self.face_cycle(r);
        c.reverse();
        c
    }

    /// Boundary spin word read counterclockwise from ρ.
    pub fn boundary_word(&self) -> String {
        self.boundary()
            .iter()
            .map(|&h| self.side_spin[h as usize].map_or('?', Spin::symbol))
            .collect()
    }

    /// Breadth-first distances from the root vertex over all edges.
    pub fn vertex_distances(&self) -> Vec<u32> {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); self.n_vertices as usize];
        for h in 0..self.twin.len() {
            adj[self.origin[h] as usize].push(self.dest(h as u32));
        }
        let mut dist = vec![u32::MAX; self.n_vertices as usize];
        let mut queue = VecDeque::new();
        dist[self.root_vertex as usize] = 0;
        queue.push_back(self.root_vertex);
        while let Some(v) = queue.pop_front() {
            let d = dist[v as usize];
            for &w in &adj[v as usize] {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = d + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Canonical code of the rooted map: half-edges labeled in breadth-first
    /// order from the root over (next, twin), then listed with their twin and
    /// next labels, face kind and side spin. Equal codes mean a
    /// root-preserving isomorphism of the root component.
    pub fn canonical_form(&self) -> Vec<u32> {
        let Some(r) = self.root else { return vec![] };
        let mut label = vec![u32::MAX; self.twin.len()];
        let mut order = Vec::with_capacity(self.twin.len());
        let mut queue = VecDeque::new();
        label[r as usize] = 0;
        order.push(r);
        queue.push_back(r);
        while let Some(h) = queue.pop_front() {
            for g in [self.next[h as usize], self.twin[h as usize]] {
                if label[g as usize] == u32::MAX {
                    label[g as usize] = order.len() as u32;
                    order.push(g);
                    queue.push_back(g);
                }
            }
        }
        let mut code = Vec::with_capacity(order.len() * 4);
        for &h in &order {
            let h = h as usize;
            code.push(label[self.twin[h] as usize]);
            code.push(label[self.next[h] as usize]);
            code.push(self.faces[self.face[h] as usize].code() as u32);
            code.push(match self.side_spin[h] {
                None => 0,
                Some(Spin::Plus) => 1,
                Some(Spin::Minus) => 2,
            });
        }
        code
    }

    /// The map with the edges selected by `drop` removed. Faces that merge
    /// take the kind given by `merge` over the kinds involved; internal faces
    /// never merge unless they lose an edge. Vertices left without edges
    /// disappear, except the root vertex.
    pub fn without_edges(&self, drop: impl Fn(u32) -> bool, merge: impl Fn(&[FaceKind]) -> FaceKind) -> ColoredPlanarMap {
        let n = self.twin.len();
        let gone: Vec<bool> = (0..n as u32).map(|h| drop(h) || drop(self.twin[h as usize])).collect();
        let mut new_id = vec![u32::MAX; n];
        let mut kept = Vec::new();
        for h in 0..n {
            if !gone[h] {
                new_id[h] = kept.len() as u32;
                kept.push(h as u32);
            }
        }
        let mut next = vec![0u32; kept.len()];
        for (i, &h) in kept.iter().enumerate() {
            let mut g = self.next[h as usize];
            while gone[g as usize] {
                g = self.next[self.twin[g as usize] as usize];
            }
            next[i] = new_id[g as usize];
        }
        // faces as cycles of the new next
        let mut face = vec![u32::MAX; kept.len()];
        let mut faces = Vec::new();
        for start in 0..kept.len() {
            if face[start] != u32::MAX {
                continue;
            }
            let fid = faces.len() as u32;
            let mut kinds = Vec::new();
            let mut g = start;
            let mut old_faces = Vec::new();
            let mut len = 0;
            loop {
                len += 1;
                face[g] = fid;
                let of = self.face[kept[g] as usize];
                if !old_faces.contains(&of) {
                    old_faces.push(of);
                    kinds.push(self.faces[of as usize]);
                }
                g = next[g] as usize;
                if g == start {
                    break;
                }
            }
            let intact = old_faces.len() == 1 && len == self.face_cycle(kept[start]).len();
            faces.push(if intact { kinds[0] } else { merge(&kinds) });
        }
        // vertices: renumber, keeping the root vertex
        let mut vid = vec![u32::MAX; self.n_vertices as usize];
        let mut nv = 0u32;
        vid[self.root_vertex as usize] = 0;
        nv += 1;
        let mut origin = Vec::with_capacity(kept.len());
        for &h in &kept {
            let o = self.origin[h as usize] as usize;
            if vid[o] == u32::MAX {
                vid[o] = nv;
                nv += 1;
            }
            origin.push(vid[o]);
        }
        let root = self.root.and_then(|r| {
            // first surviving half-edge around ρ from the old root
            let mut g = r;
            for _ in 0..n {
                if !gone[g as usize] {
                    return Some(new_id[g as usize]);
                }
                g = self.next[self.twin[g as usize] as usize];
                if g == r {
                    break;
                }
            }
            None
        });
        let root = root.filter(|&r| origin[r as usize] == 0);
        if kept.is_empty() {
            let mut v = ColoredPlanarMap::vertex_map();
            v.p = self.p;
            v.q = self.q;
            return v;
        }
        ColoredPlanarMap {
            twin: kept.iter().map(|&h| new_id[self.twin[h as usize] as usize]).collect(),
            side_spin: kept.iter().map(|&h| self.side_spin[h as usize]).collect(),
            origin,
            next,
            face,
            faces,
            n_vertices: nv,
            root,
            root_vertex: 0,
            p: self.p,
            q: self.q,
        }
    }

    /// Line-based text form, version 1:
    ///
    /// ```text
    /// ising-peel-map 1
    /// p q faces <p> <q> <internal face count>
    /// vertices <V> root <half-edge|none> <root vertex>
    /// halfedges <H>
    /// <id> <origin> <twin> <next> <face> <side spin: + - .>   (H lines)
    /// faces <F>
    /// <id> <kind: + - ext hole unexplored>                  (F lines)
    /// ```
    ///
    /// Blank lines and lines starting with `#` are skipped when parsing.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str("ising-peel-map 1\n");
        s.push_str(&format!("p q faces {} {} {}\n", self.p, self.q, self.n_internal_faces()));
        let root = self.root.map_or("none".to_string(), |r| r.to_string());
        s.push_str(&format!("vertices {} root {} {}\n", self.n_vertices, root, self.root_vertex));
        s.push_str(&format!("halfedges {}\n", self.twin.len()));
        for h in 0..self.twin.len() {
            let sp = self.side_spin[h].map_or('.', Spin::symbol);
            s.push_str(&format!("{} {} {} {} {} {}\n", h, self.origin[h], self.twin[h], self.next[h], self.face[h], sp));
        }
        s.push_str(&format!("faces {}\n", self.faces.len()));
        for (i, k) in self.faces.iter().enumerate() {
            s.push_str(&format!("{} {}\n", i, k.label()));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::Invalid(format!("map text: {m}"));
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let mut line = || lines.next().ok_or_else(|| bad("unexpected end"));
        if line()? != "ising-peel-map 1" {
            return Err(bad("missing or unsupported header"));
        }
        let num = |t: &str| t.parse::<u64>().map_err(|_| bad(&format!("bad number {t:?}")));
        let h1: Vec<&str> = line()?.split_whitespace().collect();
        if h1.len() != 6 || h1[..3] != ["p", "q", "faces"] {
            return Err(bad("bad p q line"));
        }
        let (p, q) = (num(h1[3])? as usize, num(h1[4])? as usize);
        let declared_faces = num(h1[5])? as usize;
        let h2: Vec<&str> = line()?.split_whitespace().collect();
        if h2.len() != 5 || h2[0] != "vertices" || h2[2] != "root" {
            return Err(bad("bad vertices line"));
        }
        let n_vertices = num(h2[1])? as u32;
        let root = if h2[3] == "none" { None } else { Some(num(h2[3])? as u32) };
        let root_vertex = num(h2[4])? as u32;
        let h3: Vec<&str> = line()?.split_whitespace().collect();
        if h3.len() != 2 || h3[0] != "halfedges" {
            return Err(bad("bad halfedges line"));
        }
        let nh = num(h3[1])? as usize;
        let mut m = ColoredPlanarMap {
            origin: Vec::with_capacity(nh),
            twin: Vec::with_capacity(nh),
            next: Vec::with_capacity(nh),
            face: Vec::with_capacity(nh),
            side_spin: Vec::with_capacity(nh),
            faces: Vec::new(),
            n_vertices,
            root,
            root_vertex,
            p,
            q,
        };
        for i in 0..nh {
            let t: Vec<&str> = line()?.split_whitespace().collect();
            if t.len() != 6 || num(t[0])? as usize != i {
                return Err(bad(&format!("bad half-edge line {i}")));
            }
            m.origin.push(num(t[1])? as u32);
            m.twin.push(num(t[2])? as u32);
            m.next.push(num(t[3])? as u32);
            m.face.push(num(t[4])? as u32);
            m.side_spin.push(match t[5] {
                "+" => Some(Spin::Plus),
                "-" => Some(Spin::Minus),
                "." => None,
                o => return Err(bad(&format!("bad side spin {o:?}"))),
            });
        }
        let h4: Vec<&str> = line()?.split_whitespace().collect();
        if h4.len() != 2 || h4[0] != "faces" {
            return Err(bad("bad faces line"));
        }
        let nf = num(h4[1])? as usize;
        for i in 0..nf {
            let t: Vec<&str> = line()?.split_whitespace().collect();
            if t.len() != 2 || num(t[0])? as usize != i {
                return Err(bad(&format!("bad face line {i}")));
            }
            m.faces.push(FaceKind::parse(t[1]).ok_or_else(|| bad(&format!("bad face kind {:?}", t[1])))?);
        }
        let in_range = |v: &[u32], lim: usize| v.iter().all(|&x| (x as usize) < lim);
        if !(in_range(&m.twin, nh) && in_range(&m.next, nh) && in_range(&m.face, nf) && in_range(&m.origin, n_vertices as usize)) {
            return Err(bad("index out of range"));
        }
        if root.is_some_and(|r| r as usize >= nh) || root_vertex >= n_vertices.max(1) {
            return Err(bad("root out of range"));
        }
        if m.n_internal_faces() != declared_faces {
            return Err(bad("face count does not match the header"));
        }
        Ok(m)
    }
}

impl fmt::Display for ColoredPlanarMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "map (p,q)=({},{}) V={} E={} internal faces={} boundary {}",
            self.p,
            self.q,
            self.n_vertices,
            self.n_edges(),
            self.n_internal_faces(),
            self.boundary_word()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub vertices: usize,
    pub edges: usize,
    /// All faces, the external one included.
    pub faces: usize,
    pub internal_faces: usize,
    pub monochromatic_edges: usize,
    pub weight: f64,
    pub euler_ok: bool,
    pub permutation_ok: bool,
    pub triangles_ok: bool,
    pub boundary_simple: bool,
    pub dobrushin_ok: bool,
    pub expected_ok: bool,
    pub problems: Vec<String>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.problems.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "V={} E={} F={} (internal {}), monochromatic edges {}, weight {}",
            self.vertices, self.edges, self.faces, self.internal_faces, self.monochromatic_edges, self.weight
        )?;
        if self.ok() {
            write!(f, "all checks pass")
        } else {
            write!(f, "problems: {}", self.problems.join("; "))
        }
    }
}

/// Expected properties checked by [`validate_map`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Expected {
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub faces: Option<usize>,
    pub weight: Option<f64>,
}

/// Checks a triangulation of a polygon: permutation axioms, Euler's
/// formula, degree-3 internal faces, a simple Dobrushin boundary and the
/// recomputed weight ν^{#monochromatic} against `expected`.
pub fn validate_map(m: &ColoredPlanarMap, nu: f64, expected: &Expected) -> ValidationReport {
    let mut problems = Vec::new();
    let n = m.twin.len();
    let mut permutation_ok = true;
    let mut seen_next = vec![false; n];
    for h in 0..n {
        let t = m.twin[h] as usize;
        if t == h || m.twin[t] as usize != h {
            permutation_ok = false;
        }
        let g = m.next[h] as usize;
        if seen_next[g] {
            permutation_ok = false;
        }
        seen_next[g] = true;
        if m.face[g] != m.face[h] || m.origin[g] != m.dest(h as u32) {
            permutation_ok = false;
        }
    }
    if !permutation_ok {
        problems.push("half-edge permutations are inconsistent".into());
    }
    let faces = m.faces.len();
    let (v, e) = (m.n_vertices as usize, m.n_edges());
    let euler_ok = v as i64 - e as i64 + faces as i64 == 2;
    if !euler_ok {
        problems.push(format!("Euler: V − E + F = {}", v as i64 - e as i64 + faces as i64));
    }
    let mut deg = vec![0usize; faces];
    for h in 0..n {
        deg[m.face[h] as usize] += 1;
    }
    let mut triangles_ok = true;
    let mut externals = 0;
    for (f, k) in m.faces.iter().enumerate() {
        match k {
            FaceKind::Internal(_) => triangles_ok &= deg[f] == 3,
            FaceKind::External => externals += 1,
            _ => {}
        }
    }
    if !triangles_ok {
        problems.push("an internal face is not a triangle".into());
    }
    if externals != 1 {
        problems.push(format!("{externals} external faces"));
    }
    let bd = m.boundary();
    let mut boundary_simple = !bd.is_empty() && m.root.is_some_and(|r| m.kind_of(r) == FaceKind::External);
    let mut vs: Vec<u32> = bd.iter().map(|&h| m.origin[h as usize]).collect();
    vs.sort_unstable();
    vs.dedup();
    boundary_simple &= vs.len() == bd.len();
    boundary_simple &= m.root.is_some_and(|r| m.origin[r as usize] == m.root_vertex);
    if !boundary_simple {
        problems.push("boundary is not a simple cycle through the root".into());
    }
    let word = m.boundary_word();
    let np = word.chars().take_while(|&c| c == '+').count();
    let nq = word.chars().skip(np).take_while(|&c| c == '-').count();
    let mut dobrushin_ok = np + nq == word.len() && np == m.p && nq == m.q;
    if let (Some(p), Some(q)) = (expected.p, expected.q) {
        dobrushin_ok &= np == p && nq == q;
    }
    if !dobrushin_ok {
        problems.push(format!("boundary word {word} is not +^{}-^{}", m.p, m.q));
    }
    let internal = m.n_internal_faces();
    let mono = m.n_monochromatic();
    let weight = nu.powi(mono as i32);
    let mut expected_ok = true;
    if let Some(nf) = expected.faces {
        if nf != internal {
            expected_ok = false;
            problems.push(format!("{internal} internal faces, expected {nf}"));
        }
    }
    if let Some(w) = expected.weight {
        if (w - weight).abs() > 1e-12 * w.abs().max(1.0) {
            expected_ok = false;
            problems.push(format!("weight {weight}, expected {w}"));
        }
    }
    ValidationReport {
        vertices: v,
        edges: e,
        faces,
        internal_faces: internal,
        monochromatic_edges: mono,
        weight,
        euler_ok,
        permutation_ok,
        triangles_ok,
        boundary_simple,
        dobrushin_ok,
        expected_ok,
        problems,
    }
}
