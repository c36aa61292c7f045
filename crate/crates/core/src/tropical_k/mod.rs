//! Finite-level presentations of tropical K-groups: `F_p(0,Λ) ⊂ ∧^p N_ℚ`,
//! the quotients `F^p(0,Λ)` of `∧^p M_ℚ`, pull-backs, transfers and residues.

mod residue;

pub use residue::{
    residue_contract, residue_matrix, symbol_factor, tame_residue, uniformizer, FactoredFunction, FactoredSymbol, Place,
    ResidueValue, SymbolEntry,
};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::algebra::matrix::{express, nullspace, rank, transpose};
use crate::algebra::rational::{dot_q, to_q, IVec, QVec, Rational};
use crate::algebra::snf::smith_normal_form;
use crate::algebra::subspace::QSubspace;
use crate::algebra::wedge::{binomial, compound, wedge_power};
use crate::error::{Error, Result};
use crate::fan::{support_predicates, Fan};
use crate::tropicalize::{image_support, MonomialMap};

/// `F_p(0,Λ) = Σ_P ∧^p Span(P)` over the maximal cones `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpSpace {
    pub p: usize,
    pub space: QSubspace,
    pub spans: Vec<QSubspace>,
}

/// `F^p(0,Λ) = ∧^p M_ℚ / {f : α(f) = 0 for all α ∈ F_p}`.
///
/// Classes are coordinatized by pairing with the echelon basis of `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpClassGroup {
    pub p: usize,
    pub kernel: QSubspace,
    pairing: Vec<QVec>,
}

impl FpClassGroup {
    pub fn dim(&self) -> usize {
        self.pairing.len()
    }

    /// Ambient dimension `C(n, p)`.
    pub fn ambient(&self) -> usize {
        self.kernel.ambient()
    }

    pub fn class_of(&self, f: &[Rational]) -> QVec {
        self.pairing.iter().map(|b| dot_q(b, f)).collect()
    }

    pub fn is_zero(&self, f: &[Rational]) -> bool {
        self.kernel.contains(f)
    }
}

pub fn f_spaces(fan: &Fan, p: usize) -> (FpSpace, FpClassGroup) {
    let n = fan.ambient();
    let len = binomial(n, p);
    let spans: Vec<QSubspace> = fan.maximal_cones().iter().map(|c| c.span()).collect();
    let mut gens: Vec<QVec> = Vec::new();
    for s in &spans {
        gens.extend(wedge_power(s, p).basis().iter().cloned());
    }
    let space = QSubspace::span(len, &gens).expect("wedge coordinates");
    let kernel = space.annihilator();
    let pairing = space.basis().to_vec();
    (FpSpace { p, space, spans }, FpClassGroup { p, kernel, pairing })
}

/// The map `F^p(target) → F^p(source)` induced by `ψ`, in class coordinates
/// (`dim F^p(source)` rows).
///
/// The target fan must have support `ψ(|source|)`.
pub fn pullback(psi: &MonomialMap, source: &Fan, target: &Fan, p: usize) -> Result<Vec<QVec>> {
    if source.ambient() != psi.source() || target.ambient() != psi.target() {
        return Err(Error::SupportMismatch);
    }
    let image = image_support(psi, source)?;
    if !support_predicates(&image, target)?.equal {
        return Err(Error::SupportMismatch);
    }
    let (fs, _) = f_spaces(source, p);
    let (ft, _) = f_spaces(target, p);
    let push: Vec<QVec> =
        psi.cocharacter_rows().iter().map(|r| to_q(r)).collect();
    let cp = compound(&push, psi.source(), p);
    let tb = ft.space.basis();
    // ∧^p ψ_* b'_j = Σ_i t_ij b_i; the pull-back matrix is the transpose of t.
    let mut rows = Vec::with_capacity(fs.space.dim());
    for b in fs.space.basis() {
        let img: QVec = cp.iter().map(|row| dot_q(row, b)).collect();
        rows.push(express(tb, &img).ok_or(Error::SupportMismatch)?);
    }
    Ok(rows)
}

/// Pull-back of `∧^p M_r` elements to `∧^p M_l`, before passing to classes.
pub fn pullback_element(psi: &MonomialMap, f: &[Rational], p: usize) -> QVec {
    let rows: Vec<QVec> = psi.character_rows().iter().map(|r| to_q(r)).collect();
    let c = compound(&rows, psi.target(), p);
    c.iter().map(|row| dot_q(row, f)).collect()
}

/// The two kernels of the presentation: the annihilator of `F_p`, and the
/// intersection over maximal cones of the kernels of `∧^p` of maximal-height
/// flags supported on each cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagKernelReport {
    pub annihilator: QSubspace,
    pub flag_kernel: QSubspace,
}

impl FlagKernelReport {
    pub fn equal(&self) -> bool {
        self.annihilator == self.flag_kernel
    }
}

/// A maximal-height flag in the relative interior of a cone: the sum of its
/// rays, followed by rays completing a basis of its span.
pub fn interior_flag(c: &crate::fan::Cone) -> Vec<IVec> {
    if c.dim() == 0 {
        return vec![];
    }
    let mut levels = vec![c.interior_point()];
    for r in c.rays() {
        let mut trial: Vec<QVec> = levels.iter().map(|l| to_q(l)).collect();
        trial.push(to_q(r));
        if rank(&trial, c.ambient()) == trial.len() {
            levels.push(r.clone());
        }
    }
    levels
}

pub fn flag_kernel_check(fan: &Fan, p: usize) -> FlagKernelReport {
    let n = fan.ambient();
    let len = binomial(n, p);
    let (_, classes) = f_spaces(fan, p);
    let mut kernel = QSubspace::full(len);
    for c in fan.maximal_cones() {
        let flag: Vec<QVec> = interior_flag(c).iter().map(|l| to_q(l)).collect();
        let cp = compound(&flag, n, p);
        let k = QSubspace::span(len, &nullspace(&cp, len)).expect("wedge coordinates");
        kernel = kernel.intersection(&k).expect("same ambient");
    }
    FlagKernelReport { annihilator: classes.kernel, flag_kernel: kernel }
}

/// `[M : M′]` for the sublattice spanned by the rows of `basis`.
pub fn lattice_index(basis: &[IVec], n: usize) -> Result<BigInt> {
    let s = smith_normal_form(basis, n);
    if s.rank < n {
        return Err(Error::InfiniteIndex);
    }
    Ok(s.diagonal().iter().product::<BigInt>().abs())
}

/// Inclusion `K(M′) ⊂ K(M)` on `∧^p`: coordinates over the basis of `M′` to coordinates over `M`.
pub fn monomial_restriction(basis: &[IVec], c: &[Rational], p: usize) -> QVec {
    let n = basis.first().map_or(0, Vec::len);
    let b: Vec<QVec> = basis.iter().map(|r| to_q(r)).collect();
    let cp = compound(&b, n, p);
    transpose(&cp, binomial(n, p)).iter().map(|row| dot_q(row, c)).collect()
}

/// Norm from `K(M)` down to `K(M′)` on `∧^p` with rational coefficients:
/// `[M:M′]` times the coordinates over the basis of `M′`.
pub fn monomial_transfer(basis: &[IVec], f: &[Rational], p: usize) -> Result<QVec> {
    let n = basis.first().map_or(0, Vec::len);
    if basis.len() != n || basis.iter().any(|r| r.len() != n) {
        return Err(Error::InfiniteIndex);
    }
    let index = lattice_index(basis, n)?;
    let b: Vec<QVec> = basis.iter().map(|r| to_q(r)).collect();
    let cp = compound(&b, n, p);
    let len = binomial(n, p);
    let ct = transpose(&cp, len);
    let c = crate::algebra::matrix::solve(&ct, len, f).ok_or(Error::InfiniteIndex)?;
    let d = Rational::from_integer(index);
    Ok(c.iter().map(|x| x * &d).collect())
}

/// Index as a machine integer, for reporting.
pub fn index_i64(basis: &[IVec], n: usize) -> Result<i64> {
    lattice_index(basis, n)?.to_i64().ok_or(Error::InfiniteIndex)
}

pub(crate) fn nonzero(v: &[Rational]) -> bool {
    v.iter().any(|x| !x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::q;
    use crate::algebra::snf::integer_solve;
    use crate::algebra::wedge::wedge_of;
    use crate::fan::stellar_subdivision;
    use crate::tropicalize::{tropical_hypersurface, ExponentPolynomial};
    use proptest::prelude::*;

    fn line() -> Fan {
        Fan::from_rays(2, &[vec![1, 0], vec![0, 1], vec![-1, -1]], &[vec![0], vec![1], vec![2]]).unwrap()
    }

    fn plane() -> Fan {
        let f = ExponentPolynomial::new(3, vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        tropical_hypersurface(&f).unwrap()
    }

    /// Brute force: rank of all p-fold wedges of rays lying in a common cone.
    fn brute_dim(fan: &Fan, p: usize) -> usize {
        let n = fan.ambient();
        let mut gens = Vec::new();
        for c in fan.cones() {
            for sel in crate::algebra::wedge::combinations(c.rays().len(), p) {
                let vs: Vec<QVec> = sel.iter().map(|&i| to_q(&c.rays()[i])).collect();
                gens.push(wedge_of(&vs, n));
            }
        }
        rank(&gens, binomial(n, p))
    }

    #[test]
    fn line_and_plane_dims() {
        for (fan, p, d) in [(line(), 1, 2), (line(), 2, 0), (plane(), 1, 3), (plane(), 2, 3), (plane(), 3, 0)] {
            let (fp, cg) = f_spaces(&fan, p);
            assert_eq!(cg.dim(), d);
            assert_eq!(fp.space.dim(), d);
            assert_eq!(brute_dim(&fan, p), d);
        }
    }

    #[test]
    fn flag_kernels() {
        for (fan, p) in [(line(), 1), (line(), 2), (plane(), 2), (Fan::projective_space(3), 2)] {
            let r = flag_kernel_check(&fan, p);
            assert!(r.equal(), "{fan:?} p={p}");
        }
        assert_eq!(flag_kernel_check(&line(), 1).annihilator.dim(), 0);
        assert_eq!(flag_kernel_check(&line(), 2).annihilator.dim(), 1);
        assert_eq!(flag_kernel_check(&plane(), 2).annihilator.dim(), 0);
    }

    #[test]
    fn pullbacks() {
        let l = line();
        assert_eq!(pullback(&MonomialMap::identity(2), &l, &l, 1).unwrap(), vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
        let proj = MonomialMap::from_cocharacters(2, vec![vec![1, 0]]).unwrap();
        let real_line = Fan::from_rays(1, &[vec![1], vec![-1]], &[vec![0], vec![1]]).unwrap();
        let m = pullback(&proj, &l, &real_line, 1).unwrap();
        // The generator m = 1 of M_r pulls back to m_1 = (1, 0).
        let gen = [q(1)];
        let class_t: QVec = f_spaces(&real_line, 1).1.class_of(&gen);
        let via_matrix: QVec = m.iter().map(|row| dot_q(row, &class_t)).collect();
        let direct = f_spaces(&l, 1).1.class_of(&pullback_element(&proj, &gen, 1));
        assert_eq!(via_matrix, direct);
        assert_eq!(direct, f_spaces(&l, 1).1.class_of(&[q(1), q(0)]));
        assert_eq!(rank(&m, 1), 1);
        assert_eq!(pullback(&MonomialMap::identity(2), &l, &l, 0).unwrap(), vec![vec![q(1)]]);
        assert_eq!(pullback(&proj, &l, &Fan::new(1, vec![crate::fan::Cone::ray(&[1]).unwrap()]).unwrap(), 1), Err(Error::SupportMismatch));
    }

    #[test]
    fn transfers() {
        let id = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(monomial_transfer(&id, &[q(1), q(2)], 1).unwrap(), vec![q(1), q(2)]);
        assert_eq!(monomial_transfer(&[vec![2]], &[q(1)], 1).unwrap(), vec![q(1)]);
        assert_eq!(monomial_transfer(&[vec![2]], &[q(2)], 1).unwrap(), vec![q(2)]);
        let sub3 = vec![vec![1, 0], vec![0, 3]];
        assert_eq!(index_i64(&sub3, 2).unwrap(), 3);
        assert_eq!(monomial_transfer(&sub3, &[q(1)], 2).unwrap(), vec![q(1)]);
        assert_eq!(monomial_transfer(&sub3, &monomial_restriction(&sub3, &[q(1)], 2), 2).unwrap(), vec![q(3)]);
        assert_eq!(monomial_transfer(&[vec![1, 1], vec![2, 2]], &[q(1)], 2), Err(Error::InfiniteIndex));
    }

    proptest! {
        #[test]
        fn refinement_invariance(v in prop::collection::vec(-3i64..4, 3), p in 0usize..4) {
            prop_assume!(v.iter().any(|&x| x != 0));
            let fan = Fan::projective_space(3);
            let fine = stellar_subdivision(&fan, &v).unwrap();
            prop_assert_eq!(f_spaces(&fan, p).0.space, f_spaces(&fine, p).0.space);
        }

        /// Degree one: the norm of `χ^m` is `χ^{[M:M′] m}`, solved over the sublattice basis.
        #[test]
        fn transfer_degree_one(b in prop::collection::vec(prop::collection::vec(-3i64..4, 3), 3), m in prop::collection::vec(-3i64..4, 3)) {
            let Ok(d) = index_i64(&b, 3) else { return Ok(()); };
            let t = monomial_transfer(&b, &to_q(&m), 1).unwrap();
            let bt: Vec<IVec> = (0..3).map(|i| b.iter().map(|r| r[i]).collect()).collect();
            let dm: IVec = m.iter().map(|x| x * d).collect();
            let c = integer_solve(&bt, 3, &dm).unwrap().expect("index kills the quotient");
            prop_assert_eq!(t, to_q(&c));
        }

        #[test]
        fn transfer_after_restriction(b in prop::collection::vec(prop::collection::vec(-3i64..4, 3), 3), c in prop::collection::vec(-3i64..4, 3), p in 0usize..4) {
            let Ok(d) = index_i64(&b, 3) else { return Ok(()); };
            let len = binomial(3, p);
            let c = to_q(&c[..len.min(3)].iter().copied().chain(std::iter::repeat(0)).take(len).collect::<Vec<_>>());
            let back = monomial_transfer(&b, &monomial_restriction(&b, &c, p), p).unwrap();
            prop_assert_eq!(back, c.iter().map(|x| x * q(d)).collect::<QVec>());
        }
    }
}
