//! Smith normal form over the integers and first homology of the polyhedron.

#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::InvariantError;
use crate::ograph::OGraph;
use crate::tracer::{boundary_word, Tracer};

/// A finitely generated abelian group `Z^rank + Z/t_1 + ... + Z/t_k` with
/// `1 < t_1 | t_2 | ... | t_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

/// Invariant factors of an integer matrix: the nonzero diagonal entries of
/// its Smith normal form, positive and each dividing the next.
pub fn smith_normal_form(matrix: &[Vec<i64>]) -> Vec<BigInt> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<BigInt>> = matrix.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // Smallest nonzero entry of the remaining block as pivot.
        let Some((pi, pj)) = smallest_nonzero(&a, t) else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let sub = &q * &a[t][j];
                    a[i][j] -= sub;
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for i in t..rows {
                    let sub = &q * &a[i][t];
                    a[i][j] -= sub;
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                let (pi, pj) = smallest_in_cross(&a, t);
                a.swap(t, pi);
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                continue;
            }
            // Row and column are clear; enforce divisibility on the block.
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn smallest_nonzero(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smallest nonzero entry in row `t` or column `t`, at or after the diagonal.
fn smallest_in_cross(a: &[Vec<BigInt>], t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut val = a[t][t].abs();
    let mut consider = |i: usize, j: usize, x: &BigInt| {
        if !x.is_zero() && (val.is_zero() || x.abs() < val) {
            val = x.abs();
            best = (i, j);
        }
    };
    for (i, row) in a.iter().enumerate().skip(t) {
        consider(i, t, &row[t]);
    }
    for j in t..a[t].len() {
        consider(t, j, &a[t][j]);
    }
    best
}

/// Cokernel of the relation matrix: `Z^columns / row span`.
pub fn quotient_group(relations: &[Vec<i64>], columns: usize) -> Result<AbelianGroup, InvariantError> {
    let diag = smith_normal_form(relations);
    let torsion = diag
        .iter()
        .filter(|d| !d.is_one())
        .map(|d| d.to_u64().ok_or(InvariantError::TorsionOverflow))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AbelianGroup { rank: columns - diag.len(), torsion })
}

/// `H_1` of the polyhedron of `g` (and of the manifold it is a spine of):
/// generators are the edges outside a spanning tree, one relation per face.
pub fn homology_h1(g: &OGraph) -> Result<AbelianGroup, InvariantError> {
    homology_h1_with(&Tracer::default(), g)
}

pub fn homology_h1_with(tracer: &Tracer, g: &OGraph) -> Result<AbelianGroup, InvariantError> {
    let trace = tracer.trace_faces(g);
    let rel = boundary_word(&trace, g)?;
    quotient_group(&rel.relations, rel.complement_edges.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hand_computed_forms() {
        assert_eq!(smith_normal_form(&[vec![3, 3, 3]]), ints(&[3]));
        assert_eq!(smith_normal_form(&[vec![2, 0], vec![0, 3]]), ints(&[1, 6]));
        assert_eq!(smith_normal_form(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), ints(&[2, 6, 12]));
        assert_eq!(smith_normal_form(&[vec![0, 0], vec![0, 0]]), ints(&[]));
        assert_eq!(smith_normal_form(&[]), ints(&[]));
    }

    #[test]
    fn quotient_examples() {
        assert_eq!(quotient_group(&[vec![3, 3, 3]], 3).unwrap(), AbelianGroup { rank: 2, torsion: vec![3] });
        assert_eq!(quotient_group(&[vec![3, -1, 1, 3]], 4).unwrap(), AbelianGroup { rank: 3, torsion: vec![] });
    }
}
