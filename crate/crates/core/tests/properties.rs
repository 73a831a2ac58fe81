use std::collections::{BTreeSet, VecDeque};

use infassoc::associahedron::face_lattice;
use infassoc::complexnav::{bfs_distance, classify_link, random_triangulation, WindowPolicy};
use infassoc::dyadic::{arcs_cross, in_base_triangulation, refine_common};
use infassoc::ftess::{intersect, leq};
use infassoc::{Arc, Dyadic, FTessellation, StandardPartition, ThompsonElement};
use proptest::prelude::*;
use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn dyadic(max_exp: u32) -> impl Strategy<Value = Dyadic> {
    (0..=max_exp).prop_flat_map(|e| (0i64..(1 << e)).prop_map(move |m| Dyadic::new(m, e)))
}

fn partition(max_exp: u32) -> impl Strategy<Value = StandardPartition> {
    prop::collection::vec(dyadic(max_exp), 0..6).prop_map(|pts| StandardPartition::from_points(&pts))
}

fn element(seed: u64) -> ThompsonElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ThompsonElement::random(&mut rng, 1 + (seed % 7) as usize)
}

fn tessellation(seed: u64, window: &StandardPartition, drop: usize) -> FTessellation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = random_triangulation(&mut rng, window).unwrap();
    let diags: Vec<Arc> = t
        .arcs_in_window(window)
        .unwrap()
        .into_iter()
        .filter(|a| window.is_diagonal(a))
        .collect();
    for a in diags.into_iter().choose_multiple(&mut rng, drop) {
        t = t.without_arc(&a).unwrap();
    }
    t
}

/// Base arcs with endpoints of exponent at most `depth`, generated by
/// repeatedly subdividing the two halves of the circle.
fn base_oracle(depth: u32) -> BTreeSet<Arc> {
    let mut out = BTreeSet::new();
    let mut todo = vec![(0i64, 1u32), (1, 1)];
    while let Some((m, n)) = todo.pop() {
        let arc = Arc::new(Dyadic::new(m, n), Dyadic::new(m + 1, n)).unwrap();
        out.insert(arc);
        if n < depth {
            todo.push((2 * m, n + 1));
            todo.push((2 * m + 1, n + 1));
        }
    }
    out
}

proptest! {
    #[test]
    fn normalize_is_idempotent(m in -1000i64..1000, e in 0u32..12) {
        let x = Dyadic::new(m, e);
        let again = Dyadic::new(x.numerator().clone(), x.exponent());
        prop_assert_eq!(&again, &x);
        prop_assert_eq!(x.to_string().parse::<Dyadic>().unwrap(), x);
    }

    #[test]
    fn crossing_is_symmetric(a in dyadic(6), b in dyadic(6), c in dyadic(6), d in dyadic(6)) {
        prop_assume!(a != b && c != d);
        let x = Arc::new(a, b).unwrap();
        let y = Arc::new(c, d).unwrap();
        prop_assert_eq!(arcs_cross(&x, &y), arcs_cross(&y, &x));
        prop_assert!(!arcs_cross(&x, &x));
    }

    #[test]
    fn refine_common_is_a_join(p in partition(5), q in partition(5), r in partition(5)) {
        let pq = refine_common(&p, &q);
        prop_assert_eq!(&pq, &refine_common(&q, &p));
        prop_assert_eq!(
            refine_common(&pq, &r),
            refine_common(&p, &refine_common(&q, &r))
        );
        prop_assert!(pq.refines(&p) && pq.refines(&q));
    }

    #[test]
    fn group_laws(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (r, s, t) = (element(a), element(b), element(c));
        prop_assert_eq!(r.compose(&s).compose(&t), r.compose(&s.compose(&t)));
        prop_assert!(t.compose(&t.inverse()).is_identity());
        prop_assert_eq!(s.compose(&t).sign(), (s.sign() + t.sign()) % 2);
        prop_assert!(s.compose(&t).has_standard_partitions());
        let json = serde_json::to_string(&t).unwrap();
        prop_assert_eq!(serde_json::from_str::<ThompsonElement>(&json).unwrap(), t);
    }

    #[test]
    fn action_preserves_structure(a in any::<u64>(), b in any::<u64>(), c in any::<u64>(), k in 0usize..4) {
        let w = StandardPartition::uniform(3);
        let t = element(a);
        let x = tessellation(b, &w, k);
        let y = tessellation(c, &w, 1);
        let tx = t.act_tessellation(&x);
        prop_assert_eq!(tx.rank(), x.rank());
        prop_assert_eq!(
            t.act_tessellation(&intersect(&x, &y)),
            intersect(&tx, &t.act_tessellation(&y))
        );
        let m = intersect(&x, &y);
        prop_assert!(leq(&x, &m));
        prop_assert!(leq(&tx, &t.act_tessellation(&m)));
        prop_assert_eq!(t.inverse().act_tessellation(&tx), x);
    }

    #[test]
    fn distance_is_symmetric(a in any::<u64>(), b in any::<u64>()) {
        let w = StandardPartition::uniform(3);
        let x = tessellation(a, &w, 0);
        let y = tessellation(b, &w, 0);
        let policy = WindowPolicy::new(w, 0);
        let xy = bfs_distance(&x, &y, &policy).unwrap();
        let yx = bfs_distance(&y, &x, &policy).unwrap();
        prop_assert_eq!(xy.bound, yx.bound);
        prop_assert!(xy.bound >= xy.lower_bound);
        prop_assert_eq!(xy.path.len(), xy.bound + 1);
    }

    #[test]
    fn link_counts_match_completions(a in any::<u64>(), k in 2usize..4) {
        let w = StandardPartition::uniform(3);
        let b = tessellation(a, &w, k);
        let link = classify_link(&b).unwrap();
        prop_assert_eq!(link.vertex_count, b.containing_triangulations(8).unwrap().len());
    }
}

#[test]
fn base_membership_matches_subdivision() {
    let depth = 6;
    let oracle = base_oracle(depth);
    let pts: Vec<Dyadic> = (0..1i64 << depth).map(|m| Dyadic::new(m, depth)).collect();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let arc = Arc::new(a.clone(), b.clone()).unwrap();
            assert_eq!(in_base_triangulation(&arc), oracle.contains(&arc), "{arc}");
        }
    }
}

#[test]
fn evaluation_is_injective_on_fine_points() {
    let pts: Vec<Dyadic> = (0..256).map(|m| Dyadic::new(m, 8)).collect();
    for seed in 0..40 {
        let t = element(seed);
        let images: BTreeSet<Dyadic> = pts.iter().map(|x| t.evaluate(x)).collect();
        assert_eq!(images.len(), pts.len(), "{t}");
    }
}

#[test]
fn face_totals_follow_schroeder_recurrence() {
    // s(m) for m = 2..: number of faces of A(P_{m+1})
    let totals: Vec<i64> = (3..=9)
        .map(|n| face_lattice(n).unwrap().faces.len() as i64)
        .collect();
    assert_eq!(totals, [1, 3, 11, 45, 197, 903, 4279]);
    let s = |m: usize| if m < 2 { 1 } else { totals[m - 2] };
    for m in 2..8 {
        let m1 = m as i64;
        assert_eq!((m1 + 1) * s(m + 1), 3 * (2 * m1 - 1) * s(m) - (m1 - 2) * s(m - 1));
    }
}

#[test]
fn flip_graphs_are_regular_and_connected() {
    for n in 4..=9 {
        let lattice = face_lattice(n).unwrap();
        let verts = lattice.vertices();
        let edges = lattice.flip_graph();
        let pos = |v: usize| verts.binary_search(&v).unwrap();
        let mut adj = vec![Vec::new(); verts.len()];
        for (a, b) in edges {
            adj[pos(a)].push(pos(b));
            adj[pos(b)].push(pos(a));
        }
        assert!(adj.iter().all(|x| x.len() == n - 3), "n={n}");
        let mut seen = vec![false; verts.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        assert!(seen.iter().all(|&s| s), "n={n}");
    }
}
