//! Local navigation in the complex `C`: flip neighbors, window-restricted
//! flip distances, minimal cycles through two consecutive edges, links of
//! rank-2 and rank-3 cells, and translation-length bounds for group
//! elements.
//!
//! `C^1` has infinite vertex degree, so every search runs inside a finite
//! window polygon. Distances found this way are upper bounds on the true
//! graph distance; they are certified exact when they meet the lower bound
//! given by the number of arcs the two triangulations disagree on.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dyadic::{refine_common, Arc, StandardPartition};
use crate::error::{Error, Result};
use crate::ftess::{intersect, union, FTessellation, DEFAULT_RANK_BOUND};
use crate::polygon::{self, Chord};
use crate::thompson::ThompsonElement;

/// Default cap on the number of states a single search may visit.
pub const DEFAULT_STATE_BUDGET: usize = 250_000;

/// Where a search may look: the base window, how many times it may be
/// refined (each refinement splits every side), and a state budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowPolicy {
    pub base: StandardPartition,
    pub max_expansions: usize,
    pub state_budget: usize,
}

impl WindowPolicy {
    pub fn new(base: StandardPartition, max_expansions: usize) -> Self {
        WindowPolicy {
            base,
            max_expansions,
            state_budget: DEFAULT_STATE_BUDGET,
        }
    }

    /// The smallest window holding the supports of all given tessellations.
    pub fn fitting<'a>(
        tessellations: impl IntoIterator<Item = &'a FTessellation>,
        max_expansions: usize,
    ) -> Self {
        let mut w = FTessellation::base().support_polygon();
        for t in tessellations {
            w = refine_common(&w, &t.support_polygon());
        }
        Self::new(w, max_expansions)
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.state_budget = budget;
        self
    }

    fn check(&self, t: &FTessellation) -> Result<()> {
        if t.fits_window(&self.base) {
            Ok(())
        } else {
            Err(Error::OutsideWindow(self.base.to_string()))
        }
    }

    fn widened_for(&self, ts: &[&FTessellation]) -> WindowPolicy {
        let mut w = self.base.clone();
        for t in ts {
            w = refine_common(&w, &t.support_polygon());
        }
        WindowPolicy {
            base: w,
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinkShape {
    SquareCycle,
    PentagonCycle,
    Cube,
    Prism,
    Associahedron,
}

impl LinkShape {
    fn from_sizes(sizes: &[usize]) -> Option<Self> {
        match sizes {
            [4, 4] => Some(LinkShape::SquareCycle),
            [5] => Some(LinkShape::PentagonCycle),
            [4, 4, 4] => Some(LinkShape::Cube),
            [4, 5] => Some(LinkShape::Prism),
            [6] => Some(LinkShape::Associahedron),
            _ => None,
        }
    }
}

/// The vertices of the boundary of a rank-2 or rank-3 cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellLink {
    pub center: FTessellation,
    pub shape: LinkShape,
    pub vertex_count: usize,
    pub component_sizes: Vec<usize>,
    /// For rank 2, the vertices in cyclic order; for rank 3, sorted.
    pub vertices: Vec<FTessellation>,
}

impl CellLink {
    /// Flip graph of the link vertices in DOT format.
    pub fn to_dot(&self) -> String {
        flip_graph_dot(&self.vertices)
    }
}

/// A flip path certifying a distance bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceReport {
    pub query: DistanceQuery,
    pub bound: usize,
    /// Number of arcs of `from` missing from `to`; no flip path is shorter.
    pub lower_bound: usize,
    pub exact: bool,
    pub window: StandardPartition,
    pub expansions: usize,
    pub states_visited: usize,
    pub budget_exhausted: bool,
    pub path: Vec<FTessellation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceQuery {
    pub from: FTessellation,
    pub to: FTessellation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TranslationReport {
    pub query: ThompsonElement,
    pub bound: usize,
    pub witness: FTessellation,
    pub radius: usize,
    pub vertices_examined: usize,
    pub skipped_over_budget: usize,
    pub window: StandardPartition,
    pub expansions: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsometryReport {
    pub element: ThompsonElement,
    pub samples: usize,
    pub seed: u64,
    pub window: StandardPartition,
    pub violations: Vec<String>,
}

impl IsometryReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn require_triangulation(a: &FTessellation) -> Result<()> {
    if a.is_triangulation() {
        Ok(())
    } else {
        Err(Error::NotFTriangulation(a.rank()))
    }
}

fn local_flips(k: usize, diags: &BTreeSet<Chord>) -> Vec<(Chord, Chord, BTreeSet<Chord>)> {
    diags
        .iter()
        .map(|&d| {
            let p = polygon::flip_partner(k, diags, d);
            let mut next = diags.clone();
            next.remove(&d);
            next.insert(p);
            (d, p, next)
        })
        .collect()
}

/// Flips of every arc of `a` that is a diagonal of `window`.
pub fn neighbors(a: &FTessellation, window: &StandardPartition) -> Result<Vec<(Arc, FTessellation)>> {
    require_triangulation(a)?;
    let view = a.local_view(window)?;
    let mut out = local_flips(view.k(), &view.diagonals)
        .into_iter()
        .map(|(d, _, next)| Ok((view.arc(d), FTessellation::from_local(window, &next)?)))
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(out)
}

/// Vertices within `radius` flips of `center` using only flips inside
/// `window`, in BFS order.
pub fn ball(center: &FTessellation, radius: usize, window: &StandardPartition, budget: usize) -> Result<Vec<FTessellation>> {
    require_triangulation(center)?;
    let view = center.local_view(window)?;
    let k = view.k();
    let mut seen: HashMap<BTreeSet<Chord>, ()> = HashMap::new();
    let mut order = vec![view.diagonals.clone()];
    seen.insert(view.diagonals.clone(), ());
    let mut frontier = vec![view.diagonals];
    for _ in 0..radius {
        let mut next = Vec::new();
        for s in &frontier {
            for (_, _, n) in local_flips(k, s) {
                if seen.insert(n.clone(), ()).is_none() {
                    if seen.len() > budget {
                        return Err(Error::BudgetExhausted(seen.len()));
                    }
                    order.push(n.clone());
                    next.push(n);
                }
            }
        }
        frontier = next;
    }
    order.iter().map(|d| FTessellation::from_local(window, d)).collect()
}

/// Shortest flip path between two triangulations of a `k`-gon.
fn local_bfs(
    k: usize,
    from: &BTreeSet<Chord>,
    to: &BTreeSet<Chord>,
    budget: usize,
) -> std::result::Result<(Vec<BTreeSet<Chord>>, usize), usize> {
    let mut index: HashMap<BTreeSet<Chord>, usize> = HashMap::new();
    let mut states = vec![from.clone()];
    let mut parent = vec![usize::MAX];
    index.insert(from.clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    let mut found = (from == to).then_some(0);
    while found.is_none() {
        let Some(cur) = queue.pop_front() else { break };
        for (_, _, next) in local_flips(k, &states[cur]) {
            if index.contains_key(&next) {
                continue;
            }
            let id = states.len();
            index.insert(next.clone(), id);
            let hit = next == *to;
            states.push(next);
            parent.push(cur);
            if hit {
                found = Some(id);
                break;
            }
            if states.len() > budget {
                return Err(states.len());
            }
            queue.push_back(id);
        }
    }
    let mut at = found.expect("flip graph of a polygon is connected");
    let mut path = vec![states[at].clone()];
    while parent[at] != usize::MAX {
        at = parent[at];
        path.push(states[at].clone());
    }
    path.reverse();
    Ok((path, states.len()))
}

/// Number of arcs of `a` that `b` lacks.
pub fn arc_difference(a: &FTessellation, b: &FTessellation) -> usize {
    let w = refine_common(&a.support_polygon(), &b.support_polygon());
    let da = a.local_view(&w).expect("joint support fits").diagonals;
    let db = b.local_view(&w).expect("joint support fits").diagonals;
    da.difference(&db).count()
}

/// Shortest flip path from `a` to `b` inside the policy window, retried in
/// successively refined windows.
pub fn bfs_distance(a: &FTessellation, b: &FTessellation, policy: &WindowPolicy) -> Result<DistanceReport> {
    require_triangulation(a)?;
    require_triangulation(b)?;
    policy.check(a)?;
    policy.check(b)?;
    let lower_bound = arc_difference(a, b);
    let mut window = policy.base.clone();
    let mut best: Option<DistanceReport> = None;
    let mut visited = 0;
    for expansion in 0..=policy.max_expansions {
        if expansion > 0 {
            window = window.split_all();
        }
        let va = a.local_view(&window)?;
        let vb = b.local_view(&window)?;
        match local_bfs(va.k(), &va.diagonals, &vb.diagonals, policy.state_budget) {
            Ok((path, states)) => {
                visited += states;
                let bound = path.len() - 1;
                if best.as_ref().is_none_or(|r| bound < r.bound) {
                    let path = path
                        .iter()
                        .map(|d| FTessellation::from_local(&window, d))
                        .collect::<Result<Vec<_>>>()?;
                    best = Some(DistanceReport {
                        query: DistanceQuery {
                            from: a.clone(),
                            to: b.clone(),
                        },
                        bound,
                        lower_bound,
                        exact: bound == lower_bound,
                        window: window.clone(),
                        expansions: expansion,
                        states_visited: 0,
                        budget_exhausted: false,
                        path,
                    });
                }
                if bound == lower_bound {
                    break;
                }
            }
            Err(states) => {
                visited += states;
                match best.as_mut() {
                    Some(r) => {
                        r.budget_exhausted = true;
                        break;
                    }
                    None => return Err(Error::BudgetExhausted(states)),
                }
            }
        }
    }
    let mut report = best.expect("the base window always yields a path");
    report.states_visited = visited;
    Ok(report)
}

/// Vertices of a rank-2 cell ordered around its boundary cycle, starting at
/// `start` and continuing towards `second` when given.
fn cycle_order(vertices: &[FTessellation], start: &FTessellation, second: Option<&FTessellation>) -> Vec<FTessellation> {
    let adjacent = |x: &FTessellation, y: &FTessellation| intersect(x, y).rank() == 1;
    let mut order = vec![start.clone()];
    let mut used: BTreeSet<&FTessellation> = [start].into();
    while order.len() < vertices.len() {
        let last = order.last().expect("non-empty");
        let next = match (order.len(), second) {
            (1, Some(s)) => s,
            _ => vertices
                .iter()
                .find(|v| !used.contains(v) && adjacent(last, v))
                .expect("cell boundary is a cycle"),
        };
        used.insert(next);
        order.push(next.clone());
    }
    order
}

fn link_of(center: &FTessellation) -> Result<CellLink> {
    let rank = center.rank();
    let cell = center.cell();
    let shape = LinkShape::from_sizes(&cell.factor_sizes).ok_or(Error::WrongRank(rank))?;
    let vertices = center.containing_triangulations(DEFAULT_RANK_BOUND)?;
    Ok(CellLink {
        center: center.clone(),
        shape,
        vertex_count: vertices.len(),
        component_sizes: cell.factor_sizes,
        vertices,
    })
}

/// Shape and vertices of the boundary of the cell of a rank-2 or rank-3
/// tessellation.
pub fn classify_link(b: &FTessellation) -> Result<CellLink> {
    let rank = b.rank();
    if !(2..=3).contains(&rank) {
        return Err(Error::WrongRank(rank));
    }
    let mut link = link_of(b)?;
    if rank == 2 {
        let start = link.vertices[0].clone();
        link.vertices = cycle_order(&link.vertices, &start, None);
    }
    Ok(link)
}

/// The unique shortest closed flip path through two distinct edges sharing
/// an F-triangulation: the boundary of the cell of `e1 ∩ e2`.
pub fn minimal_cycle(e1: &FTessellation, e2: &FTessellation) -> Result<CellLink> {
    for e in [e1, e2] {
        if e.rank() != 1 {
            return Err(Error::WrongRank(e.rank()));
        }
    }
    if e1 == e2 {
        return Err(Error::NotConsecutive("the two edges coincide".into()));
    }
    let shared = match union(e1, e2) {
        Ok(u) if u.is_triangulation() => u,
        _ => {
            return Err(Error::NotConsecutive(format!(
                "{e1} and {e2} have no common endpoint"
            )))
        }
    };
    let center = intersect(e1, e2);
    let mut link = link_of(&center)?;
    let ends = e1.containing_triangulations(1)?;
    let other = ends.iter().find(|v| **v != shared).expect("an edge has two ends");
    link.vertices = cycle_order(&link.vertices, &shared, Some(other));
    Ok(link)
}

/// The action of `t` on cells, `t · f_B = f_{t·B}`.
pub fn induced_cell_action(t: &ThompsonElement, b: &FTessellation) -> FTessellation {
    t.act_tessellation(b)
}

/// Smallest flip distance `d(A, t·A)` over the ball of the given radius
/// around `A_F`, each distance searched in the policy window widened to hold
/// both endpoints.
pub fn translation_length_upper(t: &ThompsonElement, radius: usize, policy: &WindowPolicy) -> Result<TranslationReport> {
    let base = FTessellation::base();
    let candidates = ball(&base, radius, &policy.base, policy.state_budget)?;
    let mut best: Option<TranslationReport> = None;
    let mut skipped = 0;
    let mut examined = 0;
    for a in &candidates {
        examined += 1;
        let ta = t.act_tessellation(a);
        if ta == *a {
            return Ok(TranslationReport {
                query: t.clone(),
                bound: 0,
                witness: a.clone(),
                radius,
                vertices_examined: examined,
                skipped_over_budget: skipped,
                window: policy.base.clone(),
                expansions: 0,
            });
        }
        if best.as_ref().is_some_and(|r| arc_difference(a, &ta) >= r.bound) {
            continue;
        }
        let wide = policy.widened_for(&[a, &ta]);
        match bfs_distance(a, &ta, &wide) {
            Ok(r) => {
                if best.as_ref().is_none_or(|b| r.bound < b.bound) {
                    best = Some(TranslationReport {
                        query: t.clone(),
                        bound: r.bound,
                        witness: a.clone(),
                        radius,
                        vertices_examined: 0,
                        skipped_over_budget: 0,
                        window: r.window,
                        expansions: r.expansions,
                    });
                }
            }
            Err(Error::BudgetExhausted(_)) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    let mut report = best.ok_or(Error::BudgetExhausted(policy.state_budget))?;
    report.vertices_examined = examined;
    report.skipped_over_budget = skipped;
    Ok(report)
}

/// A triangulation of the window reached by a seeded random flip walk from
/// `A_F`.
pub fn random_triangulation<R: Rng + ?Sized>(rng: &mut R, window: &StandardPartition) -> Result<FTessellation> {
    let view = FTessellation::base().local_view(window)?;
    let k = view.k();
    let mut diags = view.diagonals;
    for _ in 0..4 * k {
        let Some(&d) = diags.iter().choose(rng) else { break };
        let p = polygon::flip_partner(k, &diags, d);
        diags.remove(&d);
        diags.insert(p);
    }
    FTessellation::from_local(window, &diags)
}

/// Samples pairs of consecutive edges and checks that `t` carries each
/// minimal cycle onto the minimal cycle of the image edges.
pub fn isometry_consistency_check(
    t: &ThompsonElement,
    samples: usize,
    seed: u64,
    window: &StandardPartition,
) -> Result<IsometryReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut done = 0;
    while done < samples {
        let a = random_triangulation(&mut rng, window)?;
        let arcs: Vec<Arc> = a
            .arcs_in_window(window)?
            .into_iter()
            .filter(|x| window.is_diagonal(x))
            .collect();
        if arcs.len() < 2 {
            return Err(Error::DegeneratePolygon(window.len()));
        }
        let picked: Vec<&Arc> = arcs.iter().choose_multiple(&mut rng, 2);
        done += 1;
        let e1 = a.without_arc(picked[0])?;
        let e2 = a.without_arc(picked[1])?;
        let cycle = minimal_cycle(&e1, &e2)?;
        let image = minimal_cycle(&t.act_tessellation(&e1), &t.act_tessellation(&e2))?;
        if cycle.vertex_count != image.vertex_count {
            violations.push(format!(
                "cycle through {e1} and {e2} has length {} but its image has length {}",
                cycle.vertex_count, image.vertex_count
            ));
            continue;
        }
        let moved: Vec<FTessellation> = cycle.vertices.iter().map(|v| t.act_tessellation(v)).collect();
        if moved != image.vertices {
            violations.push(format!("image of the cycle through {e1} and {e2} is not the image cycle"));
        }
    }
    Ok(IsometryReport {
        element: t.clone(),
        samples,
        seed,
        window: window.clone(),
        violations,
    })
}

/// DOT rendering of the flip graph induced on the given vertices.
pub fn flip_graph_dot(vertices: &[FTessellation]) -> String {
    let mut s = String::from("graph flips {\n");
    for (i, v) in vertices.iter().enumerate() {
        let _ = writeln!(s, "  v{i} [label=\"{v}\"];");
    }
    for (i, x) in vertices.iter().enumerate() {
        for (j, y) in vertices.iter().enumerate().skip(i + 1) {
            if intersect(x, y).rank() == 1 {
                let _ = writeln!(s, "  v{i} -- v{j};");
            }
        }
    }
    s.push_str("}\n");
    s
}
