//! Exterior powers of `Q^n` in the basis `e_I = e_{i_1} ∧ ... ∧ e_{i_p}`,
//! `I` strictly increasing, ordered lexicographically.

use std::collections::HashMap;

use num_traits::Zero;

use super::matrix::det;
use super::rational::{QVec, Rational};
use super::subspace::QSubspace;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WedgeIndex(Vec<usize>);

impl WedgeIndex {
    pub fn new(indices: Vec<usize>, ambient: usize) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("wedge index must be strictly increasing"));
        }
        if indices.iter().any(|&i| i >= ambient) {
            return Err(Error::invalid("wedge index out of range"));
        }
        Ok(WedgeIndex(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All strictly increasing `p`-tuples from `0..n` in lexicographic order.
pub fn combinations(n: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(p);
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < p - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    rec(0, n, p, &mut cur, &mut out);
    out
}

/// Indexing helper for `∧^p Q^n`.
#[derive(Debug, Clone)]
pub struct WedgeBasis {
    ambient: usize,
    degree: usize,
    indices: Vec<WedgeIndex>,
    position: HashMap<Vec<usize>, usize>,
}

impl WedgeBasis {
    pub fn new(ambient: usize, degree: usize) -> Self {
        let combos = combinations(ambient, degree);
        let position = combos.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        WedgeBasis {
            ambient,
            degree,
            indices: combos.into_iter().map(WedgeIndex).collect(),
            position,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[WedgeIndex] {
        &self.indices
    }

    pub fn position(&self, idx: &[usize]) -> Option<usize> {
        self.position.get(idx).copied()
    }
}

/// Coordinates of `v_1 ∧ ... ∧ v_p` (the `p x p` minors).
pub fn wedge_of(vectors: &[QVec], ambient: usize) -> QVec {
    let p = vectors.len();
    combinations(ambient, p)
        .iter()
        .map(|cols| {
            let sub: Vec<QVec> = vectors
                .iter()
                .map(|v| cols.iter().map(|&c| v[c].clone()).collect())
                .collect();
            if p == 0 { Rational::from_integer(1.into()) } else { det(&sub) }
        })
        .collect()
}

/// The `p`-th compound matrix: the matrix of `∧^p A` in the wedge bases.
pub fn compound(a: &[QVec], ncols: usize, p: usize) -> Vec<QVec> {
    let row_sets = combinations(a.len(), p);
    let col_sets = combinations(ncols, p);
    row_sets
        .iter()
        .map(|rs| {
            col_sets
                .iter()
                .map(|cs| {
                    if p == 0 {
                        return Rational::from_integer(1.into());
                    }
                    let sub: Vec<QVec> = rs
                        .iter()
                        .map(|&r| cs.iter().map(|&c| a[r][c].clone()).collect())
                        .collect();
                    det(&sub)
                })
                .collect()
        })
        .collect()
}

/// `∧^p S` as a subspace of `∧^p Q^n`. Its dimension is `C(dim S, p)`.
pub fn wedge_power(s: &QSubspace, p: usize) -> QSubspace {
    let n = s.ambient();
    let len = binomial(n, p);
    let gens: Vec<QVec> = combinations(s.dim(), p)
        .iter()
        .map(|sel| {
            let vs: Vec<QVec> = sel.iter().map(|&i| s.basis()[i].clone()).collect();
            wedge_of(&vs, n)
        })
        .collect();
    QSubspace::span(len, &gens).expect("wedge coordinates have the right length")
}

/// Interior product `ι_u : ∧^q → ∧^{q-1}`, where `u` is a vector of the dual
/// space: `ι_u(m_1 ∧ ... ∧ m_q) = Σ_j (-1)^j m_j(u) m_1 ∧ .. ^m_j .. ∧ m_q`.
pub fn contract(u: &[Rational], omega: &[Rational], ambient: usize, q: usize) -> Result<QVec> {
    if q == 0 {
        return Err(Error::invalid("cannot contract a degree-0 element"));
    }
    let src = WedgeBasis::new(ambient, q);
    if omega.len() != src.len() {
        return Err(Error::DimensionMismatch { expected: src.len(), found: omega.len() });
    }
    let dst = WedgeBasis::new(ambient, q - 1);
    let mut out = vec![Rational::zero(); dst.len()];
    for (idx, coef) in src.indices().iter().zip(omega) {
        if coef.is_zero() {
            continue;
        }
        for (j, &i) in idx.indices().iter().enumerate() {
            if u[i].is_zero() {
                continue;
            }
            let mut rest = idx.indices().to_vec();
            rest.remove(j);
            let pos = dst.position(&rest).expect("sub-index is a basis index");
            let term = coef * &u[i];
            if j % 2 == 0 {
                out[pos] += term;
            } else {
                out[pos] -= term;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{q, to_q};
    use proptest::prelude::*;

    #[test]
    fn top_wedge_of_plane_is_a_line() {
        assert_eq!(wedge_power(&QSubspace::full(2), 2).dim(), 1);
    }

    #[test]
    fn wedge_beyond_dimension_vanishes() {
        let s = QSubspace::span_i(3, &[vec![1, 0, 0]]).unwrap();
        assert!(wedge_power(&s, 2).is_zero());
    }

    #[test]
    fn coordinate_plane_wedge() {
        let s = QSubspace::span_i(3, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let w = wedge_power(&s, 2);
        // basis order: (0,1), (0,2), (1,2)
        assert_eq!(w, QSubspace::span(3, &[to_q(&[1, 0, 0])]).unwrap());
    }

    #[test]
    fn contraction_signs() {
        // ι_{e1}(e1* ∧ e2*) = e2*
        let w = contract(&to_q(&[1, 0]), &to_q(&[1]), 2, 2).unwrap();
        assert_eq!(w, to_q(&[0, 1]));
        // ι_{e2}(e1* ∧ e2*) = -e1*
        let w = contract(&to_q(&[0, 1]), &to_q(&[1]), 2, 2).unwrap();
        assert_eq!(w, to_q(&[-1, 0]));
    }

    #[test]
    fn compound_of_diagonal() {
        let a = vec![to_q(&[2, 0, 0]), to_q(&[0, 3, 0]), to_q(&[0, 0, 5])];
        let c = compound(&a, 3, 2);
        assert_eq!(c[0][0], q(6));
        assert_eq!(c[1][1], q(10));
        assert_eq!(c[2][2], q(15));
    }

    proptest! {
        #[test]
        fn wedge_dimension_is_binomial(rows in prop::collection::vec(prop::collection::vec(-2i64..3, 4), 0..5), p in 0usize..5) {
            let s = QSubspace::span_i(4, &rows).unwrap();
            prop_assert_eq!(wedge_power(&s, p).dim(), binomial(s.dim(), p));
        }

        #[test]
        fn contraction_squares_to_zero(u in prop::collection::vec(-3i64..4, 4), w in prop::collection::vec(-3i64..4, 4)) {
            let uq = to_q(&u);
            let once = contract(&uq, &to_q(&w), 4, 3).unwrap();
            let twice = contract(&uq, &once, 4, 2).unwrap();
            prop_assert!(twice.iter().all(Zero::is_zero));
        }
    }
}
