//! Finite Stasheff associahedra `A(P_n)`.
//!
//! Faces of `A(P_n)` are indexed by the sets of pairwise non-crossing interior
//! diagonals of a convex `n`-gon with vertices labelled `1..=n`. A face with
//! diagonal set `α` has dimension `n - 3 - |α|` and is contained in the face
//! `β` whenever `β ⊂ α`. Triangulations are the vertices; the empty set is the
//! top cell.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polygon::{self, Chord};

/// A minimal tessellation of `P_n` given by its diagonals, 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PolygonTessellation {
    n: usize,
    diagonals: BTreeSet<(usize, usize)>,
}

impl PolygonTessellation {
    pub fn new(n: usize, diagonals: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidPolygon(n));
        }
        let mut set = BTreeSet::new();
        for (a, b) in diagonals {
            let (i, j) = polygon::chord(a, b);
            if i == 0 || j > n || !polygon::is_diagonal(n, (i - 1, j - 1)) {
                return Err(Error::InvalidDiagonal { n, i: a, j: b });
            }
            set.insert((i, j));
        }
        let list: Vec<_> = set.iter().copied().collect();
        for (x, &a) in list.iter().enumerate() {
            for &b in &list[x + 1..] {
                if polygon::crosses(a, b) {
                    return Err(Error::CrossingDiagonals(a.0, a.1, b.0, b.1));
                }
            }
        }
        Ok(PolygonTessellation { n, diagonals: set })
    }

    /// The top cell `∅_n`.
    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, [])
    }

    fn from_local(n: usize, local: impl IntoIterator<Item = Chord>) -> Self {
        PolygonTessellation {
            n,
            diagonals: local.into_iter().map(|(i, j)| (i + 1, j + 1)).collect(),
        }
    }

    fn local(&self) -> BTreeSet<Chord> {
        self.diagonals.iter().map(|&(i, j)| (i - 1, j - 1)).collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diagonals(&self) -> &BTreeSet<(usize, usize)> {
        &self.diagonals
    }

    pub fn face_dim(&self) -> usize {
        self.n - 3 - self.diagonals.len()
    }

    pub fn is_triangulation(&self) -> bool {
        self.face_dim() == 0
    }

    /// Side counts of the polygons obtained by cutting along the diagonals,
    /// in increasing order. These are the sizes of the associahedra whose
    /// product is this face.
    pub fn cut_polygons(&self) -> Vec<usize> {
        let local = self.local();
        let mut sizes: Vec<usize> = polygon::regions(self.n, &local).iter().map(Vec::len).collect();
        sizes.sort_unstable();
        sizes
    }

    /// Replaces diagonal `d` of a triangulation by the other diagonal of the
    /// quadrilateral it bisects.
    pub fn flip(&self, d: (usize, usize)) -> Result<Self> {
        if !self.is_triangulation() {
            return Err(Error::NotTriangulation(self.face_dim()));
        }
        let d = polygon::chord(d.0, d.1);
        if !self.diagonals.contains(&d) {
            return Err(Error::MissingDiagonal(d.0, d.1));
        }
        let mut local = self.local();
        let partner = polygon::flip_partner(self.n, &local, (d.0 - 1, d.1 - 1));
        local.remove(&(d.0 - 1, d.1 - 1));
        local.insert(partner);
        Ok(Self::from_local(self.n, local))
    }

    /// Dual binary tree of a triangulation, rooted at side `root_side`, where
    /// side `s` joins vertices `s` and `s + 1` (side `n` joins `n` and `1`).
    pub fn dual_tree(&self, root_side: usize) -> Result<PlanarTree> {
        if !self.is_triangulation() {
            return Err(Error::NotTriangulation(self.face_dim()));
        }
        let n = self.n;
        if root_side == 0 || root_side > n {
            return Err(Error::InvalidSide { n, side: root_side });
        }
        // walk position p sits at vertex label (root_side + p) % n + 1
        let label = |p: usize| (root_side + p) % n + 1;
        let edge = |a: usize, b: usize| {
            let (a, b) = polygon::chord(a, b);
            b == a + 1 || (a == 0 && b == n - 1) || self.diagonals.contains(&polygon::chord(label(a), label(b)))
        };
        fn build(i: usize, j: usize, edge: &dyn Fn(usize, usize) -> bool) -> PlanarTree {
            if j == i + 1 {
                return PlanarTree::Leaf;
            }
            let w = (i + 1..j)
                .find(|&w| edge(i, w) && edge(w, j))
                .expect("triangulated region has an apex");
            PlanarTree::node(build(i, w, edge), build(w, j, edge))
        }
        Ok(build(0, n - 1, &edge))
    }

    /// Inverse of [`PolygonTessellation::dual_tree`].
    pub fn from_dual_tree(tree: &PlanarTree, root_side: usize) -> Result<Self> {
        let n = tree.leaves() + 1;
        if n < 3 {
            return Err(Error::TreeShape {
                leaves: tree.leaves(),
                expected: 2,
            });
        }
        if root_side == 0 || root_side > n {
            return Err(Error::InvalidSide { n, side: root_side });
        }
        fn walk(t: &PlanarTree, start: usize, out: &mut Vec<Chord>) -> usize {
            match t {
                PlanarTree::Leaf => start + 1,
                PlanarTree::Node(l, r) => {
                    let mid = walk(l, start, out);
                    let end = walk(r, mid, out);
                    if mid - start >= 2 {
                        out.push((start, mid));
                    }
                    if end - mid >= 2 {
                        out.push((mid, end));
                    }
                    end
                }
            }
        }
        let mut chords = Vec::new();
        walk(tree, 0, &mut chords);
        let label = |p: usize| (root_side + p) % n + 1;
        Self::new(n, chords.into_iter().map(|(a, b)| (label(a), label(b))))
    }
}

impl fmt::Display for PolygonTessellation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.diagonals.iter().map(|(i, j)| format!("({i},{j})")).collect();
        write!(f, "P{}{{{}}}", self.n, d.join(","))
    }
}

impl fmt::Debug for PolygonTessellation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'de> Deserialize<'de> for PolygonTessellation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            diagonals: Vec<(usize, usize)>,
        }
        let raw = Raw::deserialize(d)?;
        PolygonTessellation::new(raw.n, raw.diagonals).map_err(serde::de::Error::custom)
    }
}

/// Rooted planar binary tree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum PlanarTree {
    Leaf,
    Node(Box<PlanarTree>, Box<PlanarTree>),
}

impl PlanarTree {
    pub fn node(l: PlanarTree, r: PlanarTree) -> Self {
        PlanarTree::Node(Box::new(l), Box::new(r))
    }

    pub fn leaves(&self) -> usize {
        match self {
            PlanarTree::Leaf => 1,
            PlanarTree::Node(l, r) => l.leaves() + r.leaves(),
        }
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanarTree::Leaf => write!(f, "*"),
            PlanarTree::Node(l, r) => write!(f, "({l},{r})"),
        }
    }
}

impl fmt::Debug for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All minimal tessellations of `P_n`, ordered by number of diagonals and
/// then lexicographically. The first entry is the top cell.
pub fn enumerate_tessellations(n: usize) -> Result<Vec<PolygonTessellation>> {
    if n < 3 {
        return Err(Error::InvalidPolygon(n));
    }
    let diags = polygon::all_diagonals(n);
    let mut out = Vec::new();
    let mut chosen: Vec<Chord> = Vec::new();
    fn rec(diags: &[Chord], start: usize, chosen: &mut Vec<Chord>, out: &mut Vec<Vec<Chord>>) {
        out.push(chosen.clone());
        for i in start..diags.len() {
            let d = diags[i];
            if chosen.iter().all(|&c| !polygon::crosses(c, d)) {
                chosen.push(d);
                rec(diags, i + 1, chosen, out);
                chosen.pop();
            }
        }
    }
    let mut sets = Vec::new();
    rec(&diags, 0, &mut chosen, &mut sets);
    out.extend(sets.into_iter().map(|s| PolygonTessellation::from_local(n, s)));
    out.sort_by(|a, b| {
        a.diagonals
            .len()
            .cmp(&b.diagonals.len())
            .then_with(|| a.diagonals.cmp(&b.diagonals))
    });
    Ok(out)
}

/// Face poset of `A(P_n)` with its cover relations.
#[derive(Clone, Debug, Serialize)]
pub struct FaceLattice {
    pub n: usize,
    pub faces: Vec<PolygonTessellation>,
    /// Pairs `(lower, upper)` of face indices where `upper` is obtained from
    /// `lower` by deleting one diagonal.
    pub covers: Vec<(usize, usize)>,
}

pub fn face_lattice(n: usize) -> Result<FaceLattice> {
    let faces = enumerate_tessellations(n)?;
    let index: HashMap<&BTreeSet<(usize, usize)>, usize> =
        faces.iter().enumerate().map(|(i, f)| (&f.diagonals, i)).collect();
    let mut covers = Vec::new();
    for (lo, face) in faces.iter().enumerate() {
        for d in &face.diagonals {
            let mut up = face.diagonals.clone();
            up.remove(d);
            covers.push((lo, index[&up]));
        }
    }
    covers.sort_unstable();
    Ok(FaceLattice { n, faces, covers })
}

impl FaceLattice {
    /// Number of faces of each dimension `0..=n-3`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.n - 2];
        for face in &self.faces {
            f[face.face_dim()] += 1;
        }
        f
    }

    pub fn dim(&self, i: usize) -> usize {
        self.faces[i].face_dim()
    }

    pub fn vertices(&self) -> Vec<usize> {
        (0..self.faces.len()).filter(|&i| self.dim(i) == 0).collect()
    }

    /// Edges of the flip graph as pairs of face indices of triangulations.
    pub fn flip_graph(&self) -> Vec<(usize, usize)> {
        let mut below: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(lo, up) in &self.covers {
            if self.dim(lo) == 0 && self.dim(up) == 1 {
                below.entry(up).or_default().push(lo);
            }
        }
        let mut edges: Vec<(usize, usize)> = below
            .into_values()
            .map(|v| {
                debug_assert_eq!(v.len(), 2);
                (v[0].min(v[1]), v[0].max(v[1]))
            })
            .collect();
        edges.sort_unstable();
        edges
    }

    pub fn flip_graph_dot(&self) -> String {
        let mut s = format!("graph flip_graph_p{} {{\n", self.n);
        for v in self.vertices() {
            s.push_str(&format!("  {v} [label=\"{}\"];\n", self.faces[v]));
        }
        for (a, b) in self.flip_graph() {
            s.push_str(&format!("  {a} -- {b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// Outcome of the combinatorial sphere checks on `∂A(P_n)`.
#[derive(Clone, Debug, Serialize)]
pub struct SphereReport {
    pub n: usize,
    /// f-vector of the boundary complex, dimensions `0..=n-4`.
    pub boundary_f_vector: Vec<usize>,
    pub euler_characteristic: i64,
    pub expected_euler_characteristic: i64,
    pub components: usize,
    pub expected_components: usize,
    pub failures: Vec<String>,
}

impl SphereReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the combinatorial shadow of `∂A(P_n) ≅ S^{n-4}`: connectivity
/// (two points when `n = 4`), every face below the facets lies in at least
/// two faces one dimension up, every ridge lies in exactly two facets, and
/// the Euler characteristic is `1 + (-1)^(n-4)`.
pub fn check_sphere_boundary(n: usize) -> Result<SphereReport> {
    if n < 4 {
        return Err(Error::InvalidPolygon(n));
    }
    let lattice = face_lattice(n)?;
    let top = n - 3;
    let mut failures = Vec::new();

    let mut boundary_f = lattice.f_vector();
    boundary_f.pop();
    let euler: i64 = boundary_f
        .iter()
        .enumerate()
        .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum();
    let expected_euler = if (n - 4).is_multiple_of(2) { 2 } else { 0 };
    if euler != expected_euler {
        failures.push(format!("Euler characteristic {euler}, expected {expected_euler}"));
    }

    let mut up_count = vec![0usize; lattice.faces.len()];
    let mut uf = UnionFind::new(lattice.faces.len());
    for &(lo, up) in &lattice.covers {
        if lattice.dim(up) < top {
            up_count[lo] += 1;
            uf.union(lo, up);
        }
    }
    for (i, face) in lattice.faces.iter().enumerate() {
        let d = face.face_dim();
        if d + 1 < top && up_count[i] < 2 {
            failures.push(format!("{face} lies in {} faces of dimension {}", up_count[i], d + 1));
        }
        if d + 2 == top && up_count[i] != 2 {
            failures.push(format!("ridge {face} lies in {} facets", up_count[i]));
        }
    }

    let roots: BTreeSet<usize> = (0..lattice.faces.len())
        .filter(|&i| lattice.dim(i) < top)
        .map(|i| uf.find(i))
        .collect();
    let components = roots.len();
    let expected_components = if n == 4 { 2 } else { 1 };
    if components != expected_components {
        failures.push(format!("{components} components, expected {expected_components}"));
    }

    Ok(SphereReport {
        n,
        boundary_f_vector: boundary_f,
        euler_characteristic: euler,
        expected_euler_characteristic: expected_euler,
        components,
        expected_components,
        failures,
    })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}
