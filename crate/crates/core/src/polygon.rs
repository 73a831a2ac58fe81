//! Convex polygons with vertices `0..k` in cyclic order and sets of
//! non-crossing diagonals between them.

use std::collections::BTreeSet;

/// A chord `(i, j)` with `i < j`.
pub type Chord = (usize, usize);

pub fn chord(a: usize, b: usize) -> Chord {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

pub fn is_side(k: usize, c: Chord) -> bool {
    c.1 == c.0 + 1 || (c.0 == 0 && c.1 == k - 1)
}

pub fn is_diagonal(k: usize, c: Chord) -> bool {
    c.0 < c.1 && c.1 < k && !is_side(k, c)
}

/// Strict interior crossing; shared endpoints do not count.
pub fn crosses(a: Chord, b: Chord) -> bool {
    (a.0 < b.0 && b.0 < a.1 && a.1 < b.1) || (b.0 < a.0 && a.0 < b.1 && b.1 < a.1)
}

/// All diagonals of a `k`-gon in lexicographic order.
pub fn all_diagonals(k: usize) -> Vec<Chord> {
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 2..k {
            if is_diagonal(k, (i, j)) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Regions cut out of the `k`-gon by a non-crossing diagonal set, each as an
/// increasing (hence cyclically ordered) vertex list.
pub fn regions<'a>(k: usize, diagonals: impl IntoIterator<Item = &'a Chord>) -> Vec<Vec<usize>> {
    let mut regions: Vec<Vec<usize>> = vec![(0..k).collect()];
    for &(i, j) in diagonals {
        let found = regions.iter().enumerate().find_map(|(r, verts)| {
            let p = verts.binary_search(&i).ok()?;
            let q = verts.binary_search(&j).ok()?;
            let inner = q - p >= 2 && !(p == 0 && q == verts.len() - 1);
            inner.then_some((r, p, q))
        });
        let Some((r, p, q)) = found else {
            // a chord that lies on a region boundary is a repeated diagonal
            continue;
        };
        let verts = std::mem::take(&mut regions[r]);
        let left = verts[p..=q].to_vec();
        let mut right = verts[..=p].to_vec();
        right.extend_from_slice(&verts[q..]);
        regions[r] = left;
        regions.push(right);
    }
    regions
}

/// Every triangulation of the convex polygon on `verts` (given in cyclic
/// order), as lists of chords between entries of `verts`.
pub fn triangulations(verts: &[usize]) -> Vec<Vec<Chord>> {
    let n = verts.len();
    if n < 3 {
        return vec![Vec::new()];
    }
    let (first, last) = (verts[0], verts[n - 1]);
    let mut out = Vec::new();
    for apex in 1..n - 1 {
        let left = triangulations(&verts[..=apex]);
        let right = triangulations(&verts[apex..]);
        for l in &left {
            for r in &right {
                let mut t = Vec::with_capacity(n - 3);
                if apex >= 2 {
                    t.push(chord(first, verts[apex]));
                }
                if n - 1 - apex >= 2 {
                    t.push(chord(verts[apex], last));
                }
                t.extend_from_slice(l);
                t.extend_from_slice(r);
                out.push(t);
            }
        }
    }
    out
}

/// In a triangulation of the `k`-gon, the other diagonal of the
/// quadrilateral formed by the two triangles adjacent to `d`.
pub fn flip_partner(k: usize, diagonals: &BTreeSet<Chord>, d: Chord) -> Chord {
    let edge = |a: usize, b: usize| {
        let c = chord(a, b);
        is_side(k, c) || diagonals.contains(&c)
    };
    let (i, j) = d;
    let apex = |w: &usize| edge(i, *w) && edge(*w, j);
    let msg = "a triangulation has a triangle on each side of a diagonal";
    let inner = (i + 1..j).find(apex).expect(msg);
    let outer = (j + 1..k).chain(0..i).find(apex).expect(msg);
    chord(inner, outer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangulation_counts_are_catalan() {
        let counts: Vec<usize> = (3..=8)
            .map(|n| triangulations(&(0..n).collect::<Vec<_>>()).len())
            .collect();
        assert_eq!(counts, [1, 2, 5, 14, 42, 132]);
    }

    #[test]
    fn regions_of_hexagon() {
        let r = regions(6, &[(0, 2), (0, 4)]);
        let mut sizes: Vec<usize> = r.iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, [3, 3, 4]);
    }

    #[test]
    fn flip_in_pentagon() {
        let t: BTreeSet<Chord> = [(0, 2), (0, 3)].into();
        assert_eq!(flip_partner(5, &t, (0, 3)), (2, 4));
        assert_eq!(flip_partner(5, &t, (0, 2)), (1, 3));
    }

    #[test]
    fn crossing_is_strict() {
        assert!(crosses((0, 2), (1, 3)));
        assert!(!crosses((0, 2), (2, 4)));
        assert!(!crosses((0, 3), (1, 2)));
    }
}
