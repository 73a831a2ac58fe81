//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use infassoc::associahedron::{check_sphere_boundary, face_lattice};
use infassoc::complexnav::{
    bfs_distance, classify_link, isometry_consistency_check, minimal_cycle, random_triangulation,
    translation_length_upper, LinkShape, WindowPolicy,
};
use infassoc::dyadic::base_arcs_in_window;
use infassoc::ftess::{intersect, leq};
use infassoc::{Arc, Dyadic, FTessellation, StandardPartition, ThompsonElement};
use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn arc(s: &str) -> Arc {
    s.parse().unwrap()
}

fn tess(removed: &[&str]) -> FTessellation {
    FTessellation::validate(removed.iter().map(|s| arc(s)), []).unwrap()
}

// ---- oracles ----

fn catalan(m: usize) -> u128 {
    let mut c = 1u128;
    for i in 0..m as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

/// Little Schröder numbers s(1) = s(2) = 1,
/// (m+1) s(m+1) = 3(2m-1) s(m) - (m-2) s(m-1).
fn schroeder(m: usize) -> u128 {
    let mut s = vec![0i128, 1, 1];
    for k in 2..m {
        let k = k as i128;
        let next = (3 * (2 * k - 1) * s[k as usize] - (k - 2) * s[k as usize - 1]) / (k + 1);
        s.push(next);
    }
    s[m] as u128
}

/// f-vector of the `n`-gon associahedron by scanning every diagonal subset.
fn brute_f_vector(n: usize) -> Vec<usize> {
    let diags: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 2..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !(i == 0 && j == n - 1))
        .collect();
    let m = diags.len();
    let cross = |a: (usize, usize), b: (usize, usize)| {
        (a.0 < b.0 && b.0 < a.1 && a.1 < b.1) || (b.0 < a.0 && a.0 < b.1 && b.1 < a.1)
    };
    let masks: Vec<u32> = (0..m)
        .map(|x| (0..m).filter(|&y| cross(diags[x], diags[y])).fold(0, |acc, y| acc | 1 << y))
        .collect();
    let dim = n - 3;
    let mut f = vec![0usize; dim + 1];
    for set in 0u32..(1 << m) {
        let ok = (0..m).all(|x| set & (1 << x) == 0 || masks[x] & set == 0);
        if ok {
            f[dim - set.count_ones() as usize] += 1;
        }
    }
    f
}

fn window_diagonals(t: &FTessellation, w: &StandardPartition) -> Vec<Arc> {
    t.arcs_in_window(w)
        .unwrap()
        .into_iter()
        .filter(|a| w.is_diagonal(a))
        .collect()
}

fn random_tessellation(rng: &mut ChaCha8Rng, w: &StandardPartition, max_rank: usize) -> FTessellation {
    let mut t = random_triangulation(rng, w).unwrap();
    let r = rng.random_range(0..=max_rank);
    for a in window_diagonals(&t, w).into_iter().choose_multiple(rng, r) {
        t = t.without_arc(&a).unwrap();
    }
    t
}

fn generators() -> Vec<(&'static str, ThompsonElement)> {
    ["rot 1/2", "rot 1/4", "x0", "refl"]
        .into_iter()
        .map(|s| (s, s.parse().unwrap()))
        .collect()
}

// ---- criteria ----

fn c1_counts() -> Outcome {
    let mut timing = Duration::ZERO;
    for n in 3..=8 {
        let start = Instant::now();
        let lattice = face_lattice(n).map_err(|e| e.to_string())?;
        let f = lattice.f_vector();
        if n == 8 {
            timing = start.elapsed();
        }
        let oracle = brute_f_vector(n);
        ensure(f == oracle, || format!("n={n}: f-vector {f:?}, oracle {oracle:?}"))?;
        ensure(f[0] as u128 == catalan(n - 2), || format!("n={n}: {} vertices", f[0]))?;
        let total: usize = f.iter().sum();
        ensure(total as u128 == schroeder(n - 1), || format!("n={n}: {total} faces"))?;
    }
    let f5 = face_lattice(5).unwrap().f_vector();
    ensure(f5 == [5, 5, 1], || format!("pentagon f-vector {f5:?}"))?;
    ensure(timing < Duration::from_secs(5), || format!("n=8 took {timing:?}"))?;
    Ok(format!("f-vectors n=3..8 match brute force; n=8 in {:.0?}", timing))
}

fn c2_dimension() -> Outcome {
    let mut faces = 0;
    for n in 3..=8 {
        for face in face_lattice(n).unwrap().faces {
            faces += 1;
            let want = n - 3 - face.diagonals().len();
            ensure(face.face_dim() == want, || format!("{face:?} has dim {}", face.face_dim()))?;
        }
    }
    Ok(format!("{faces} faces, zero violations"))
}

fn c3_sphere() -> Outcome {
    for n in 4..=8 {
        let r = check_sphere_boundary(n).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("n={n}: {:?}", r.failures))?;
        let chi = 1 + if n % 2 == 0 { 1 } else { -1 };
        ensure(r.euler_characteristic == chi, || format!("n={n}: chi={}", r.euler_characteristic))?;
        // the boundary of a segment is two points, connected from n = 5 on
        let comps = if n == 4 { 2 } else { 1 };
        ensure(r.components == comps, || format!("n={n}: {} components", r.components))?;
    }
    Ok("n=4..8: Euler characteristic of S^(n-4), ridge and cover checks; connected for n>=5, S^0 at n=4".into())
}

fn c4_rank_two() -> Outcome {
    let w = StandardPartition::uniform(3);
    let pts = w.breakpoints();
    let k = pts.len();
    let base: BTreeSet<Arc> = base_arcs_in_window(&w).unwrap();
    let all: Vec<Arc> = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .map(|(i, j)| Arc::new(pts[i].clone(), pts[j].clone()).unwrap())
        .filter(|a| w.is_diagonal(a))
        .collect();
    let (mut squares, mut pentagons) = (0, 0);
    // a triangulation of an 8-gon has 5 diagonals; rank 2 keeps 3 of them
    for combo in all.iter().cloned().combinations3() {
        if combo.iter().enumerate().any(|(i, a)| combo[i + 1..].iter().any(|b| a.crosses(b))) {
            continue;
        }
        let kept: BTreeSet<Arc> = combo.into_iter().collect();
        let base_diags: BTreeSet<Arc> = base.iter().filter(|a| w.is_diagonal(a)).cloned().collect();
        let b = FTessellation::validate(
            base_diags.difference(&kept).cloned(),
            kept.difference(&base_diags).cloned(),
        )
        .map_err(|e| e.to_string())?;
        ensure(b.rank() == 2, || format!("{b} has rank {}", b.rank()))?;
        let completions = all
            .iter()
            .filter(|a| !kept.contains(*a))
            .collect::<Vec<_>>();
        let mut oracle = 0;
        for (i, x) in completions.iter().enumerate() {
            for y in &completions[i + 1..] {
                if !x.crosses(y) && kept.iter().all(|z| !z.crosses(x) && !z.crosses(y)) {
                    oracle += 1;
                }
            }
        }
        let a = b.containing_triangulations(8).unwrap().remove(0);
        let missing: Vec<Arc> = window_diagonals(&a, &w)
            .into_iter()
            .filter(|x| !b.contains_arc(x))
            .collect();
        let e1 = a.without_arc(&missing[0]).unwrap();
        let e2 = a.without_arc(&missing[1]).unwrap();
        let link = minimal_cycle(&e1, &e2).map_err(|e| e.to_string())?;
        let sizes: Vec<usize> = b.nontriangular_components().iter().map(Vec::len).collect();
        let len = link.vertex_count;
        ensure(len == oracle, || format!("{b}: cycle {len}, oracle {oracle}"))?;
        ensure((len == 4) == (sizes == [4, 4]), || format!("{b}: {len} with {sizes:?}"))?;
        ensure((len == 5) == (sizes == [5]), || format!("{b}: {len} with {sizes:?}"))?;
        for (i, v) in link.vertices.iter().enumerate() {
            let next = &link.vertices[(i + 1) % len];
            ensure(v.is_triangulation() && intersect(v, next).rank() == 1, || {
                format!("{b}: broken cycle at {v}")
            })?;
        }
        if len == 4 {
            squares += 1;
        } else {
            pentagons += 1;
        }
    }
    Ok(format!("{squares} two-square cells (length 4), {pentagons} pentagon cells (length 5), zero exceptions"))
}

trait Combinations3<T> {
    fn combinations3(self) -> Vec<Vec<T>>;
}

impl<T: Clone, I: Iterator<Item = T>> Combinations3<T> for I {
    fn combinations3(self) -> Vec<Vec<T>> {
        let v: Vec<T> = self.collect();
        let mut out = Vec::new();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                for k in j + 1..v.len() {
                    out.push(vec![v[i].clone(), v[j].clone(), v[k].clone()]);
                }
            }
        }
        out
    }
}

fn c5_rank_three() -> Outcome {
    let cases = [
        (tess(&["[0,1/4]", "[1/2,3/4]", "[1/4,3/8]"]), LinkShape::Cube, 8),
        (tess(&["[0,1/2]", "[1/2,3/4]", "[0,1/8]"]), LinkShape::Prism, 10),
        (tess(&["[0,1/2]", "[1/2,3/4]", "[0,1/4]"]), LinkShape::Associahedron, 14),
    ];
    for (b, shape, count) in cases {
        let link = classify_link(&b).map_err(|e| e.to_string())?;
        ensure(link.shape == shape && link.vertex_count == count, || {
            format!("{b}: {:?} with {} vertices", link.shape, link.vertex_count)
        })?;
    }
    Ok("cube 8, prism 10, associahedron 14".into())
}

fn c6_group_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let id = ThompsonElement::identity();
    let trials = 250;
    let probes: Vec<Dyadic> = (0..64).map(|m| Dyadic::new(m, 6)).collect();
    for _ in 0..trials {
        let pick = |rng: &mut ChaCha8Rng| {
            let leaves = rng.random_range(1..=8);
            ThompsonElement::random(rng, leaves)
        };
        let (r, s, t) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let lhs = r.compose(&s).compose(&t);
        let rhs = r.compose(&s.compose(&t));
        ensure(lhs == rhs, || format!("associativity fails for {r}, {s}, {t}"))?;
        ensure(t.compose(&id) == t && id.compose(&t) == t, || format!("identity fails for {t}"))?;
        ensure(t.compose(&t.inverse()).is_identity() && t.inverse().compose(&t).is_identity(), || {
            format!("inverse fails for {t}")
        })?;
        ensure(t.reduce_minimal() == t && t.reduce_minimal().reduce_minimal() == t, || {
            format!("reduction not idempotent for {t}")
        })?;
        let st = s.compose(&t);
        ensure(st.sign() == (s.sign() + t.sign()) % 2, || format!("sign of {s} * {t}"))?;
        for e in [&r, &s, &t, &st, &lhs] {
            ensure(e.has_standard_partitions(), || format!("partition condition fails for {e}"))?;
        }
        // composition agrees with pointwise evaluation, and evaluation is injective
        let mut images = BTreeSet::new();
        for x in &probes {
            ensure(st.evaluate(x) == s.evaluate(&t.evaluate(x)), || format!("({s})({t})({x})"))?;
            images.insert(t.evaluate(x));
        }
        ensure(images.len() == probes.len(), || format!("{t} is not injective"))?;
    }
    Ok(format!("{trials} seeded triples: associativity, identity, inverse, idempotent reduction, sign"))
}

fn c7_action() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let w = StandardPartition::uniform(3);
    let id = ThompsonElement::identity();
    let trials = 220;
    for _ in 0..trials {
        let leaves = rng.random_range(1..=6);
        let t = ThompsonElement::random(&mut rng, leaves);
        let a = random_tessellation(&mut rng, &w, 3);
        let b = random_tessellation(&mut rng, &w, 3);
        let (ta, tb) = (t.act_tessellation(&a), t.act_tessellation(&b));
        ensure(ta.rank() == a.rank(), || format!("{t} changes the rank of {a}"))?;
        ensure(t.act_tessellation(&intersect(&a, &b)) == intersect(&ta, &tb), || {
            format!("{t} is not equivariant on {a}, {b}")
        })?;
        ensure(id.act_tessellation(&a) == a, || format!("identity moves {a}"))?;
        // a face pair: drop one more arc of a
        let arcs = window_diagonals(&a, &w);
        if let Some(x) = arcs.iter().choose(&mut rng) {
            let coarser = a.without_arc(x).unwrap();
            ensure(leq(&a, &coarser), || "face relation".into())?;
            let tc = t.act_tessellation(&coarser);
            ensure(leq(&ta, &tc) && tc.rank() == ta.rank() + 1, || {
                format!("{t} breaks the order {a} < {coarser}")
            })?;
        }
        ensure(t.inverse().act_tessellation(&ta) == a, || format!("{t} action not invertible on {a}"))?;
    }
    let base = FTessellation::base();
    let half: ThompsonElement = "rot 1/2".parse().unwrap();
    let quarter: ThompsonElement = "rot 1/4".parse().unwrap();
    ensure(half.act_tessellation(&base) == base, || "rot 1/2 moves A_F".into())?;
    ensure(quarter.act_tessellation(&base) != base, || "rot 1/4 fixes A_F".into())?;
    Ok(format!("{trials} seeded (t, A, B): rank, equivariance, order, identity; rot 1/2 fixes A_F, rot 1/4 moves it"))
}

fn c8_faithfulness() -> Outcome {
    let gens = generators();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut elements: Vec<ThompsonElement> = gens.iter().map(|(_, g)| g.clone()).collect();
    while elements.len() < gens.len() + 50 {
        let len = rng.random_range(2..=6);
        let mut t = ThompsonElement::identity();
        for _ in 0..len {
            let (_, g) = &gens[rng.random_range(0..gens.len())];
            let g = if rng.random_bool(0.5) { g.inverse() } else { g.clone() };
            t = t.compose(&g);
        }
        if !t.is_identity() {
            elements.push(t);
        }
    }
    for t in &elements {
        let w = t
            .faithfulness_witness(6)
            .map_err(|e| format!("{t}: {e}"))?
            .ok_or_else(|| format!("{t}: reported as identity"))?;
        ensure(w.is_triangulation() && t.act_tessellation(&w) != w, || format!("{t}: bad witness {w}"))?;
    }
    Ok(format!("{} generators and 50 random products each move a witness", gens.len()))
}

fn c9_distance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let w = StandardPartition::uniform(3);
    let policy = WindowPolicy::new(w.clone(), 0);
    let d = |x: &FTessellation, y: &FTessellation| bfs_distance(x, y, &policy).map(|r| r.bound);
    for _ in 0..100 {
        let a = random_triangulation(&mut rng, &w).unwrap();
        let b = random_triangulation(&mut rng, &w).unwrap();
        let c = random_triangulation(&mut rng, &w).unwrap();
        let (ab, ba) = (d(&a, &b).unwrap(), d(&b, &a).unwrap());
        let (bc, ac) = (d(&b, &c).unwrap(), d(&a, &c).unwrap());
        ensure(d(&a, &a).unwrap() == 0, || format!("d(A,A) > 0 for {a}"))?;
        ensure(ab == ba, || format!("asymmetric: {a}, {b}"))?;
        ensure(ac <= ab + bc, || format!("triangle inequality: {a}, {b}, {c}"))?;
        let x = window_diagonals(&a, &w).into_iter().choose(&mut rng).unwrap();
        let f = a.flip_arc(&x).unwrap().target;
        ensure(d(&a, &f).unwrap() == 1, || format!("flip of {x} in {a} not at distance 1"))?;
    }
    let tpolicy = WindowPolicy::new(w, 0);
    let id = translation_length_upper(&ThompsonElement::identity(), 1, &tpolicy).map_err(|e| e.to_string())?;
    let half = translation_length_upper(&"rot 1/2".parse().unwrap(), 1, &tpolicy).map_err(|e| e.to_string())?;
    ensure(id.bound == 0 && half.bound == 0, || format!("translation bounds {} {}", id.bound, half.bound))?;
    Ok("100 seeded triples: d(A,A)=0, flips at 1, symmetric, triangle inequality; |id| = |rot 1/2| = 0".into())
}

fn c10_isometry() -> Outcome {
    let w = StandardPartition::uniform(3);
    for (name, t) in generators() {
        let r = isometry_consistency_check(&t, 50, 10, &w).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("{name}: {:?}", r.violations))?;
    }
    Ok("4 generators x 50 consecutive-edge pairs, zero violations".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("1 associahedron counts", c1_counts),
        ("2 dimension formula", c2_dimension),
        ("3 boundary sphere", c3_sphere),
        ("4 rank-2 classification", c4_rank_two),
        ("5 rank-3 links", c5_rank_three),
        ("6 group laws", c6_group_laws),
        ("7 action properties", c7_action),
        ("8 faithfulness", c8_faithfulness),
        ("9 distance sanity", c9_distance),
        ("10 isometry consistency", c10_isometry),
    ];
    let mut failed = Vec::new();
    // written straight to stderr so the lines survive output capture
    let mut err = std::io::stderr();
    for (name, run) in criteria {
        let start = Instant::now();
        let line = match run() {
            Ok(detail) => format!("PASS  {name}: {detail} [{:.2?}]", start.elapsed()),
            Err(why) => {
                failed.push(name);
                format!("FAIL  {name}: {why}")
            }
        };
        writeln!(err, "{line}").unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
