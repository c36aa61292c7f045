//! The torus-invariant part of the Gersten complex of a toric variety, and an
//! independent presentation of its rational Chow groups.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::algebra::matrix::{mat_mul, nullspace, rank};
use crate::algebra::rational::{to_q, IVec, QVec, Rational};
use crate::algebra::wedge::{binomial, combinations};
use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::tropical_k::residue_matrix;

/// `C^i = ⊕_{σ ∈ Σ(i)} ∧^{p−i} (M ∩ σ^⊥)_ℚ` for `0 ≤ i ≤ p`, with residue differentials.
#[derive(Clone, Debug)]
pub struct ToricGerstenComplex {
    fan: Fan,
    p: usize,
    cells: Vec<Vec<usize>>,
    offsets: Vec<Vec<usize>>,
    dims: Vec<usize>,
    differentials: Vec<Vec<QVec>>,
}

impl ToricGerstenComplex {
    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn term_dims(&self) -> &[usize] {
        &self.dims
    }

    /// Indices into the fan of the cones indexing the summands of `C^i`.
    pub fn cells(&self, i: usize) -> &[usize] {
        &self.cells[i]
    }

    /// `d^i : C^i → C^{i+1}`, one row per coordinate of `C^{i+1}`.
    pub fn differential(&self, i: usize) -> &[QVec] {
        &self.differentials[i]
    }

    /// Offset of the summand of cone `fan.cone(c)` inside `C^i`.
    pub fn offset(&self, i: usize, c: usize) -> Option<usize> {
        self.cells[i].iter().position(|&x| x == c).map(|k| self.offsets[i][k])
    }

    fn check_square_zero(&self) -> Result<()> {
        for i in 0..self.differentials.len().saturating_sub(1) {
            let prod = mat_mul(&self.differentials[i + 1], &self.differentials[i], self.dims[i]);
            if prod.iter().flatten().any(|x| !x.is_zero()) {
                return Err(Error::DifferentialNotSquareZero(i, i + 1));
            }
        }
        Ok(())
    }

    /// `h^i = dim C^i − rank d^i − rank d^{i−1}`, after checking `d² = 0`.
    pub fn cohomology_dims(&self) -> Result<Vec<usize>> {
        self.check_square_zero()?;
        let ranks: Vec<usize> =
            self.differentials.iter().enumerate().map(|(i, d)| rank(d, self.dims[i])).collect();
        Ok((0..self.dims.len())
            .map(|i| {
                let out = ranks.get(i).copied().unwrap_or(0);
                let inc = if i == 0 { 0 } else { ranks[i - 1] };
                self.dims[i] - out - inc
            })
            .collect())
    }

    /// `dim C^p / im d^{p−1}`.
    pub fn top_cokernel(&self) -> Result<usize> {
        Ok(*self.cohomology_dims()?.last().expect("C^0 always exists"))
    }
}

pub fn build_complex(fan: &Fan, p: usize) -> Result<ToricGerstenComplex> {
    let n = fan.ambient();
    let top = p.min(n);
    let mut cells = Vec::new();
    let mut offsets = Vec::new();
    let mut dims = Vec::new();
    for i in 0..=top {
        let idx: Vec<usize> = (0..fan.len()).filter(|&c| fan.cone(c).dim() == i).collect();
        let width = binomial(n - i, p - i);
        offsets.push((0..idx.len()).map(|k| k * width).collect::<Vec<_>>());
        dims.push(idx.len() * width);
        cells.push(idx);
    }
    let mut differentials = Vec::new();
    for i in 0..top {
        let mut d = vec![vec![Rational::zero(); dims[i]]; dims[i + 1]];
        for (a, &t) in cells[i].iter().enumerate() {
            let tau = fan.cone(t);
            for (b, &s) in cells[i + 1].iter().enumerate() {
                let sigma = fan.cone(s);
                if !tau.is_face_of(sigma) {
                    continue;
                }
                let block = residue_matrix(fan, tau, sigma, p - i)?;
                for (r, row) in block.into_iter().enumerate() {
                    for (c, x) in row.into_iter().enumerate() {
                        d[offsets[i + 1][b] + r][offsets[i][a] + c] = x;
                    }
                }
            }
        }
        differentials.push(d);
    }
    Ok(ToricGerstenComplex { fan: fan.clone(), p, cells, offsets, dims, differentials })
}

/// How [`chow_oracle`] obtained its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChowMethod {
    /// `CH^0 = ℚ`, and `CH^p = 0` above the dimension.
    Trivial,
    /// Cokernel of `M_ℚ → ℚ^{Σ(1)}`, `m ↦ (⟨m, v_ρ⟩)_ρ`.
    RayClassRank,
    /// The degree map on zero-cycles of a complete variety.
    Degree,
    /// Orbit closures `V(σ)`, `σ ∈ Σ(p)`, modulo divisors of characters on `V(τ)`, `τ ∈ Σ(p−1)`.
    OrbitRelations,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChowOracleResult {
    pub p: usize,
    pub dim: usize,
    pub method: ChowMethod,
}

/// `dim CH^p(X_Σ)_ℚ` for complete `Σ`, computed without residues.
pub fn chow_oracle(fan: &Fan, p: usize) -> Result<ChowOracleResult> {
    if !fan.is_complete() {
        return Err(Error::NotComplete);
    }
    let n = fan.ambient();
    let (dim, method) = if p == 0 || p > n {
        (usize::from(p == 0), ChowMethod::Trivial)
    } else if p == n {
        (1, ChowMethod::Degree)
    } else if p == 1 {
        let rays: Vec<QVec> = fan.rays().iter().map(|r| to_q(r)).collect();
        (rays.len() - rank(&rays, n), ChowMethod::RayClassRank)
    } else {
        (orbit_relation_dim(fan, p), ChowMethod::OrbitRelations)
    };
    Ok(ChowOracleResult { p, dim, method })
}

/// Gcd of the maximal nonvanishing minors: the index of the lattice spanned
/// by `rows` inside its saturation.
fn minor_gcd(rows: &[IVec], n: usize) -> BigInt {
    let qrows: Vec<QVec> = rows.iter().map(|r| to_q(r)).collect();
    let r = rank(&qrows, n);
    let mut g = BigInt::zero();
    for rs in combinations(rows.len(), r) {
        for cs in combinations(n, r) {
            let sub: Vec<QVec> = rs.iter().map(|&i| cs.iter().map(|&j| qrows[i][j].clone()).collect()).collect();
            let d = crate::algebra::matrix::det(&sub);
            g = g.gcd(d.numer());
        }
    }
    g.abs()
}

fn orbit_relation_dim(fan: &Fan, p: usize) -> usize {
    let n = fan.ambient();
    let gens: Vec<&Cone> = fan.cones_of_dim(p).collect();
    let mut relations: Vec<QVec> = Vec::new();
    for tau in fan.cones_of_dim(p - 1) {
        let tau_rays: Vec<QVec> = tau.rays().iter().map(|r| to_q(r)).collect();
        let perp = nullspace(&tau_rays, n);
        let g_tau = minor_gcd(tau.rays(), n);
        // For σ ⊃ τ, the image of σ in N/span τ is generated by v/g.
        let weights: Vec<Option<(IVec, Rational)>> = gens
            .iter()
            .map(|sigma| {
                if !tau.is_face_of(sigma) {
                    return None;
                }
                let v = sigma.rays().iter().find(|r| !tau.contains_point(r)).expect("σ is larger").clone();
                let mut all = tau.rays().to_vec();
                all.push(v.clone());
                let g = Rational::new(minor_gcd(&all, n), g_tau.clone());
                Some((v, g))
            })
            .collect();
        for m in &perp {
            relations.push(
                weights
                    .iter()
                    .map(|w| match w {
                        Some((v, g)) => crate::algebra::rational::dot_q(m, &to_q(v)) / g,
                        None => Rational::zero(),
                    })
                    .collect(),
            );
        }
    }
    gens.len() - rank(&relations, gens.len())
}

/// Cohomology of a complex next to its Chow oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GerstenReport {
    pub p: usize,
    pub term_dims: Vec<usize>,
    pub h: Vec<usize>,
    pub top_cokernel: usize,
    pub chow_oracle: usize,
    pub matches: bool,
}

pub fn report(cx: &ToricGerstenComplex, oracle: &ChowOracleResult) -> Result<GerstenReport> {
    let h = cx.cohomology_dims()?;
    let top = *h.last().expect("C^0 always exists");
    Ok(GerstenReport {
        p: cx.p,
        term_dims: cx.dims.clone(),
        h,
        top_cokernel: top,
        chow_oracle: oracle.dim,
        matches: top == oracle.dim,
    })
}

/// [`report`], failing with [`Error::Mismatch`] when the top cokernel differs from the oracle.
pub fn compare(cx: &ToricGerstenComplex, oracle: &ChowOracleResult) -> Result<GerstenReport> {
    let r = report(cx, oracle)?;
    if !r.matches {
        return Err(Error::Mismatch { gersten: r.top_cokernel, oracle: r.chow_oracle });
    }
    Ok(r)
}
