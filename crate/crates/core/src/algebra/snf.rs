//! Smith normal form over the integers and the lattice utilities built on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::IVec;
use crate::error::{Error, Result};

pub type BigMatrix = Vec<Vec<BigInt>>;

/// `u * a * v = d` with `u`, `v` unimodular and `d` diagonal, `d_i | d_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: BigMatrix,
    pub d: BigMatrix,
    pub v: BigMatrix,
    pub rank: usize,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[i][i].clone()).collect()
    }
}

fn identity(n: usize) -> BigMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn to_big(a: &[IVec], ncols: usize) -> BigMatrix {
    a.iter()
        .map(|r| {
            debug_assert_eq!(r.len(), ncols);
            r.iter().map(|&x| BigInt::from(x)).collect()
        })
        .collect()
}

pub fn smith_normal_form(a: &[IVec], ncols: usize) -> SmithForm {
    smith_normal_form_big(to_big(a, ncols), ncols)
}

pub fn smith_normal_form_big(a: BigMatrix, ncols: usize) -> SmithForm {
    let m = a.len();
    let n = ncols;
    let mut d = a;
    let mut u = identity(m);
    let mut v = identity(n);

    let row_op = |mat: &mut BigMatrix, dst: usize, src: usize, f: &BigInt| {
        let s = mat[src].clone();
        for (x, y) in mat[dst].iter_mut().zip(&s) {
            *x -= f * y;
        }
    };
    let col_op = |mat: &mut BigMatrix, dst: usize, src: usize, f: &BigInt| {
        for row in mat.iter_mut() {
            let y = row[src].clone();
            row[dst] -= f * y;
        }
    };
    let swap_cols = |mat: &mut BigMatrix, i: usize, j: usize| {
        for row in mat.iter_mut() {
            row.swap(i, j);
        }
    };

    let mut t = 0;
    while t < m.min(n) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !d[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);

        loop {
            let mut dirty = false;
            for i in (t + 1)..m {
                if d[i][t].is_zero() {
                    continue;
                }
                let f = d[i][t].div_floor(&d[t][t]);
                row_op(&mut d, i, t, &f);
                row_op(&mut u, i, t, &f);
                if !d[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in (t + 1)..n {
                if d[t][j].is_zero() {
                    continue;
                }
                let f = d[t][j].div_floor(&d[t][t]);
                col_op(&mut d, j, t, &f);
                col_op(&mut v, j, t, &f);
                if !d[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // A smaller remainder appeared in row or column t: re-pivot on it.
                let mut best = (t, t);
                for i in t..m {
                    if !d[i][t].is_zero() && d[i][t].abs() < d[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..n {
                    if !d[t][j].is_zero() && d[t][j].abs() < d[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    d.swap(t, best.0);
                    u.swap(t, best.0);
                }
                if best.1 != t {
                    swap_cols(&mut d, t, best.1);
                    swap_cols(&mut v, t, best.1);
                }
                continue;
            }
            // Divisibility: fold any offending row into row t and redo.
            let offending = ((t + 1)..m).find(|&i| {
                ((t + 1)..n).any(|j| !(&d[i][j] % &d[t][t]).is_zero())
            });
            match offending {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_op(&mut d, t, i, &minus_one);
                    row_op(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
        t += 1;
    }
    SmithForm { u, d, v, rank: t }
}

fn big_to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::invalid("integer overflow in lattice computation"))
}

/// Lattice basis of `{x in Z^n : a x = 0}`.
pub fn integer_kernel(a: &[IVec], ncols: usize) -> Result<Vec<IVec>> {
    let s = smith_normal_form(a, ncols);
    (s.rank..ncols)
        .map(|j| (0..ncols).map(|i| big_to_i64(&s.v[i][j])).collect())
        .collect()
}

/// Some integer solution of `a x = b`, if one exists.
pub fn integer_solve(a: &[IVec], ncols: usize, b: &[i64]) -> Result<Option<IVec>> {
    let s = smith_normal_form(a, ncols);
    let ub: Vec<BigInt> = s
        .u
        .iter()
        .map(|row| row.iter().zip(b).map(|(x, &y)| x * BigInt::from(y)).sum())
        .collect();
    if ub[s.rank..].iter().any(|x| !x.is_zero()) {
        return Ok(None);
    }
    let mut y = vec![BigInt::zero(); ncols];
    for i in 0..s.rank {
        let (quo, rem) = ub[i].div_rem(&s.d[i][i]);
        if !rem.is_zero() {
            return Ok(None);
        }
        y[i] = quo;
    }
    let x: Result<IVec> = s
        .v
        .iter()
        .map(|row| big_to_i64(&row.iter().zip(&y).map(|(p, q)| p * q).sum()))
        .collect();
    x.map(Some)
}

/// Whether `v` lies in the integer span of `gens`.
pub fn lattice_contains(gens: &[IVec], v: &[i64]) -> Result<bool> {
    if gens.is_empty() {
        return Ok(v.iter().all(|&x| x == 0));
    }
    let n = v.len();
    let at: Vec<IVec> = (0..n).map(|i| gens.iter().map(|g| g[i]).collect()).collect();
    Ok(integer_solve(&at, gens.len(), v)?.is_some())
}

/// Index of the lattice spanned by `gens` inside its saturation, i.e. the
/// product of the nonzero invariant factors.
pub fn saturation_index(gens: &[IVec], ncols: usize) -> BigInt {
    let s = smith_normal_form(gens, ncols);
    s.diagonal().iter().product()
}

/// Saturated lattice basis of `span_Q(gens) ∩ Z^n`.
pub fn saturate(gens: &[IVec], ncols: usize) -> Result<Vec<IVec>> {
    let perp = integer_kernel(gens, ncols)?;
    if perp.is_empty() {
        return Ok((0..ncols)
            .map(|i| (0..ncols).map(|j| i64::from(i == j)).collect())
            .collect());
    }
    integer_kernel(&perp, ncols)
}

/// Row Hermite normal form of the lattice spanned by `rows`; zero rows dropped.
pub fn hermite_rows(rows: &[IVec], ncols: usize) -> Result<Vec<IVec>> {
    let mut a = to_big(rows, ncols);
    let mut top = 0;
    for col in 0..ncols {
        loop {
            let piv = (top..a.len()).filter(|&i| !a[i][col].is_zero()).min_by_key(|&i| a[i][col].abs());
            let Some(p) = piv else { break };
            a.swap(top, p);
            let mut done = true;
            for i in top + 1..a.len() {
                if a[i][col].is_zero() {
                    continue;
                }
                let f = a[i][col].div_floor(&a[top][col]);
                let pr = a[top].clone();
                for (x, y) in a[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
                if !a[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if top < a.len() && !a[top][col].is_zero() {
            if a[top][col].is_negative() {
                for x in a[top].iter_mut() {
                    *x = -x.clone();
                }
            }
            let pr = a[top].clone();
            for i in 0..top {
                let f = a[i][col].div_floor(&pr[col]);
                for (x, y) in a[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
            top += 1;
        }
    }
    a.truncate(top);
    a.iter().map(|r| r.iter().map(big_to_i64).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &BigMatrix, b: &BigMatrix) -> BigMatrix {
        let cols = b.first().map_or(0, |r| r.len());
        a.iter()
            .map(|r| (0..cols).map(|j| r.iter().zip(b).map(|(x, br)| x * &br[j]).sum()).collect())
            .collect()
    }

    fn check(a: &[IVec], n: usize) -> SmithForm {
        let s = smith_normal_form(a, n);
        assert_eq!(mul(&mul(&s.u, &to_big(a, n)), &s.v), s.d);
        for (i, row) in s.d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i != j {
                    assert!(x.is_zero());
                }
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        s
    }

    #[test]
    fn hermite() {
        let h = hermite_rows(&[vec![2, 4], vec![3, 5], vec![0, 0]], 2).unwrap();
        assert_eq!(h, vec![vec![1, 1], vec![0, 2]]);
        assert_eq!(hermite_rows(&[vec![0, -1]], 2).unwrap(), vec![vec![0, 1]]);
    }

    #[test]
    fn diag_2_3_becomes_1_6() {
        let s = check(&[vec![2, 0], vec![0, 3]], 2);
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn identity_and_zero() {
        let id = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(check(&id, 3).diagonal(), vec![BigInt::one(); 3]);
        let z = vec![vec![0, 0], vec![0, 0]];
        let s = check(&z, 2);
        assert_eq!(s.rank, 0);
        assert!(s.d.iter().flatten().all(Zero::is_zero));
    }

    #[test]
    fn kernel_and_solve() {
        let k = integer_kernel(&[vec![1, 0]], 2).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0], 0);
        assert_eq!(k[0][1].abs(), 1);
        let x = integer_solve(&[vec![2, 3]], 2, &[1]).unwrap().unwrap();
        assert_eq!(2 * x[0] + 3 * x[1], 1);
        assert!(integer_solve(&[vec![2, 4]], 2, &[1]).unwrap().is_none());
        assert!(lattice_contains(&[vec![2, 0], vec![0, 2]], &[2, 4]).unwrap());
        assert!(!lattice_contains(&[vec![2, 0], vec![0, 2]], &[1, 4]).unwrap());
    }

    /// Independent oracle: the k-th determinantal divisor (gcd of all k x k
    /// minors) equals d_1 * ... * d_k.
    fn determinantal_divisors(a: &[IVec], n: usize) -> Vec<BigInt> {
        use crate::algebra::matrix::det;
        use crate::algebra::rational::to_q;
        use crate::algebra::wedge::combinations;
        let m = a.len();
        let mut out = Vec::new();
        for k in 1..=m.min(n) {
            let mut g = BigInt::zero();
            for rs in combinations(m, k) {
                for cs in combinations(n, k) {
                    let sub: Vec<_> = rs.iter().map(|&r| to_q(&cs.iter().map(|&c| a[r][c]).collect::<Vec<_>>())).collect();
                    g = g.gcd(&det(&sub).to_integer());
                }
            }
            if g.is_zero() {
                break;
            }
            out.push(g);
        }
        out
    }

    proptest::proptest! {
        #[test]
        fn invariants_match_minors(rows in proptest::collection::vec(proptest::collection::vec(-6i64..7, 3), 1..4)) {
            let s = check(&rows, 3);
            let diag = s.diagonal();
            let dd = determinantal_divisors(&rows, 3);
            proptest::prop_assert_eq!(diag.len(), dd.len());
            let mut prod = BigInt::one();
            for (d, expect) in diag.iter().zip(&dd) {
                prod *= d;
                proptest::prop_assert_eq!(&prod, expect);
            }
            let qrows: Vec<_> = rows.iter().map(|r| crate::algebra::rational::to_q(r)).collect();
            proptest::prop_assert_eq!(s.rank, crate::algebra::matrix::rank(&qrows, 3));
        }
    }

    #[test]
    fn saturation() {
        assert_eq!(saturation_index(&[vec![1, 1], vec![1, -1]], 2), BigInt::from(2));
        let s = saturate(&[vec![2, 2]], 2).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1, 1]);
    }
}
