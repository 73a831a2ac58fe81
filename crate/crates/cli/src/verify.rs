//! The `verify-all` suite: every structural check at a fixed seed.

use std::collections::BTreeSet;

use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use infassoc::associahedron::{check_sphere_boundary, face_lattice};
use infassoc::complexnav::{
    ball, bfs_distance, classify_link, isometry_consistency_check, minimal_cycle, random_triangulation,
    translation_length_upper, LinkShape, WindowPolicy, DEFAULT_STATE_BUDGET,
};
use infassoc::ftess::{intersect, leq};
use infassoc::{Arc, FTessellation, StandardPartition, ThompsonElement};

#[derive(Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = Result<String, String>;
type Named = (&'static str, Box<dyn Fn() -> Check>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: infassoc::Error) -> String {
    e.to_string()
}

fn catalan(m: usize) -> usize {
    (0..m).fold(1, |c, i| c * 2 * (2 * i + 1) / (i + 2))
}

fn window_diagonals(t: &FTessellation, w: &StandardPartition) -> Vec<Arc> {
    t.arcs_in_window(w)
        .map(|s| s.into_iter().filter(|a| w.is_diagonal(a)).collect())
        .unwrap_or_default()
}

fn generators() -> Vec<ThompsonElement> {
    ["rot 1/2", "rot 1/4", "x0", "refl"]
        .iter()
        .map(|s| s.parse().expect("generator shorthand"))
        .collect()
}

fn counts() -> Check {
    let mut totals = Vec::new();
    for n in 3..=8 {
        let f = face_lattice(n).map_err(err)?.f_vector();
        ensure(f[0] == catalan(n - 2), || format!("n={n}: {} vertices", f[0]))?;
        ensure(f[n - 3] == 1, || format!("n={n}: top face count {}", f[n - 3]))?;
        totals.push(f.iter().sum::<usize>());
    }
    ensure(totals == [1, 3, 11, 45, 197, 903], || format!("face totals {totals:?}"))?;
    let f5 = face_lattice(5).map_err(err)?.f_vector();
    ensure(f5 == [5, 5, 1], || format!("pentagon {f5:?}"))?;
    Ok("n=3..8: Catalan vertices, Schröder totals, pentagon (5,5,1)".into())
}

fn dimensions() -> Check {
    for n in 3..=8 {
        for face in face_lattice(n).map_err(err)?.faces {
            ensure(face.face_dim() + face.diagonals().len() == n - 3, || format!("{face}"))?;
        }
    }
    Ok("face_dim = n - 3 - |diagonals| for n <= 8".into())
}

fn spheres() -> Check {
    for n in 4..=8 {
        let r = check_sphere_boundary(n).map_err(err)?;
        ensure(r.passed(), || format!("n={n}: {:?}", r.failures))?;
    }
    Ok("n=4..8 boundary checks".into())
}

fn rank_two() -> Check {
    let w = StandardPartition::uniform(3);
    let all = ball(&FTessellation::base(), 64, &w, DEFAULT_STATE_BUDGET).map_err(err)?;
    ensure(all.len() == catalan(6), || format!("{} triangulations of the window", all.len()))?;
    let mut centers = BTreeSet::new();
    for a in &all {
        let diags = window_diagonals(a, &w);
        for (i, x) in diags.iter().enumerate() {
            for y in &diags[i + 1..] {
                let e1 = a.without_arc(x).map_err(err)?;
                let e2 = a.without_arc(y).map_err(err)?;
                let link = minimal_cycle(&e1, &e2).map_err(err)?;
                let sizes = link.component_sizes.clone();
                let ok = match link.vertex_count {
                    4 => sizes == [4, 4],
                    5 => sizes == [5],
                    _ => false,
                };
                ensure(ok, || format!("{}: length {} with {sizes:?}", link.center, link.vertex_count))?;
                centers.insert(link.center);
            }
        }
    }
    Ok(format!("{} rank-2 cells in the 8-gon window", centers.len()))
}

fn rank_three() -> Check {
    let t = |r: &[&str]| FTessellation::validate(r.iter().map(|s| s.parse().expect("arc")), []);
    let cases = [
        (t(&["[0,1/4]", "[1/2,3/4]", "[1/4,3/8]"]), LinkShape::Cube, 8),
        (t(&["[0,1/2]", "[1/2,3/4]", "[0,1/8]"]), LinkShape::Prism, 10),
        (t(&["[0,1/2]", "[1/2,3/4]", "[0,1/4]"]), LinkShape::Associahedron, 14),
    ];
    for (b, shape, count) in cases {
        let link = classify_link(&b.map_err(err)?).map_err(err)?;
        ensure(link.shape == shape && link.vertex_count == count, || {
            format!("{:?} with {}", link.shape, link.vertex_count)
        })?;
    }
    Ok("cube 8, prism 10, associahedron 14".into())
}

fn group_laws(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = ThompsonElement::identity();
    for _ in 0..200 {
        let mut pick = || {
            let k = rng.random_range(1..=8);
            ThompsonElement::random(&mut rng, k)
        };
        let (r, s, t) = (pick(), pick(), pick());
        ensure(r.compose(&s).compose(&t) == r.compose(&s.compose(&t)), || format!("assoc {r} {s} {t}"))?;
        ensure(t.compose(&id) == t && id.compose(&t) == t, || format!("identity {t}"))?;
        ensure(t.compose(&t.inverse()).is_identity(), || format!("inverse {t}"))?;
        ensure(t.reduce_minimal() == t, || format!("reduce {t}"))?;
        ensure(s.compose(&t).sign() == (s.sign() + t.sign()) % 2, || format!("sign {s} {t}"))?;
        ensure(s.compose(&t).has_standard_partitions(), || format!("partition {s} {t}"))?;
    }
    Ok("200 random triples".into())
}

fn random_tess(rng: &mut ChaCha8Rng, w: &StandardPartition) -> Result<FTessellation, String> {
    let mut t = random_triangulation(rng, w).map_err(err)?;
    let r = rng.random_range(0..=3);
    for a in window_diagonals(&t, w).into_iter().choose_multiple(rng, r) {
        t = t.without_arc(&a).map_err(err)?;
    }
    Ok(t)
}

fn action(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let w = StandardPartition::uniform(3);
    for _ in 0..200 {
        let k = rng.random_range(1..=6);
        let t = ThompsonElement::random(&mut rng, k);
        let a = random_tess(&mut rng, &w)?;
        let b = random_tess(&mut rng, &w)?;
        let (ta, tb) = (t.act_tessellation(&a), t.act_tessellation(&b));
        ensure(ta.rank() == a.rank(), || format!("rank {t} {a}"))?;
        ensure(t.act_tessellation(&intersect(&a, &b)) == intersect(&ta, &tb), || format!("equivariance {t}"))?;
        let m = intersect(&a, &b);
        ensure(leq(&ta, &t.act_tessellation(&m)), || format!("order {t} {a} {b}"))?;
    }
    let base = FTessellation::base();
    let half: ThompsonElement = "rot 1/2".parse().map_err(err)?;
    let quarter: ThompsonElement = "rot 1/4".parse().map_err(err)?;
    ensure(half.act_tessellation(&base) == base, || "rot 1/2 moves A_F".into())?;
    ensure(quarter.act_tessellation(&base) != base, || "rot 1/4 fixes A_F".into())?;
    Ok("200 random (t, A, B)".into())
}

fn faithfulness(seed: u64) -> Check {
    let gens = generators();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let mut elements = gens.clone();
    while elements.len() < gens.len() + 50 {
        let mut t = ThompsonElement::identity();
        for _ in 0..rng.random_range(2..=6) {
            let g = &gens[rng.random_range(0..gens.len())];
            t = t.compose(&if rng.random_bool(0.5) { g.inverse() } else { g.clone() });
        }
        if !t.is_identity() {
            elements.push(t);
        }
    }
    for t in &elements {
        let w = t.faithfulness_witness(6).map_err(err)?.ok_or(format!("{t} reported as identity"))?;
        ensure(t.act_tessellation(&w) != w, || format!("{t} fixes its witness"))?;
    }
    Ok(format!("{} elements each move a witness", elements.len()))
}

fn distances(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(3));
    let w = StandardPartition::uniform(3);
    let policy = WindowPolicy::new(w.clone(), 0);
    let d = |x: &FTessellation, y: &FTessellation| bfs_distance(x, y, &policy).map(|r| r.bound).map_err(err);
    for _ in 0..100 {
        let a = random_triangulation(&mut rng, &w).map_err(err)?;
        let b = random_triangulation(&mut rng, &w).map_err(err)?;
        let c = random_triangulation(&mut rng, &w).map_err(err)?;
        ensure(d(&a, &a)? == 0, || "d(A,A)".into())?;
        ensure(d(&a, &b)? == d(&b, &a)?, || "symmetry".into())?;
        ensure(d(&a, &c)? <= d(&a, &b)? + d(&b, &c)?, || "triangle inequality".into())?;
        if let Some(x) = window_diagonals(&a, &w).into_iter().choose(&mut rng) {
            let f = a.flip_arc(&x).map_err(err)?.target;
            ensure(d(&a, &f)? == 1, || "flip distance".into())?;
        }
    }
    for t in ["id", "rot 1/2"] {
        let t: ThompsonElement = t.parse().map_err(err)?;
        let r = translation_length_upper(&t, 1, &policy).map_err(err)?;
        ensure(r.bound == 0, || format!("translation bound {} for {t}", r.bound))?;
    }
    Ok("100 random triples; translation bounds 0".into())
}

fn isometry(seed: u64) -> Check {
    let w = StandardPartition::uniform(3);
    for t in generators() {
        let r = isometry_consistency_check(&t, 50, seed, &w).map_err(err)?;
        ensure(r.passed(), || format!("{t}: {:?}", r.violations))?;
    }
    Ok("generators x 50 samples".into())
}

pub fn run_all(seed: u64) -> Vec<CheckResult> {
    let checks: Vec<Named> = vec![
        ("associahedron counts", Box::new(counts)),
        ("dimension formula", Box::new(dimensions)),
        ("boundary sphere", Box::new(spheres)),
        ("rank-2 cycles", Box::new(rank_two)),
        ("rank-3 links", Box::new(rank_three)),
        ("group laws", Box::new(move || group_laws(seed))),
        ("action", Box::new(move || action(seed))),
        ("faithfulness", Box::new(move || faithfulness(seed))),
        ("distances", Box::new(move || distances(seed))),
        ("isometry consistency", Box::new(move || isometry(seed))),
    ];
    checks
        .into_iter()
        .map(|(name, f)| {
            let (passed, detail) = match f() {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckResult { name, passed, detail }
        })
        .collect()
}
