//! Finitely generated subgroups of lexicographically ordered real tuples and
//! monomial valuations on `K(M)` given by flags.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::algebra::formal::{Basis, FormalReal, Sign};
use crate::algebra::matrix::{nullspace, rank};
use crate::algebra::rational::{dot_q, primitive_from_q, to_q, IVec, QVec};
use crate::algebra::snf::{integer_kernel, lattice_contains};
use crate::error::{Error, Result};
use crate::fan::{locate_lex, Cone, Fan, LexPoint};

/// The subgroup of `ℝ^r` (lexicographic order) generated by finitely many tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedValueGroup {
    levels: usize,
    basis: Arc<Basis>,
    generators: Vec<Vec<FormalReal>>,
}

/// The chain `0 = H_0 ⊂ … ⊂ H_h = Γ` of convex subgroups.
///
/// Every convex subgroup is `Γ ∩ V_k` with `V_k` the tuples whose first `k`
/// entries vanish. `active` lists the (0-based) levels at which the chain
/// jumps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexChain {
    levels: usize,
    active: Vec<usize>,
}

impl ConvexChain {
    pub fn height(&self) -> usize {
        self.active.len()
    }

    pub fn active_levels(&self) -> &[usize] {
        &self.active
    }

    /// The level cut `k` with `H_i = Γ ∩ V_k`.
    pub fn cut(&self, i: usize) -> usize {
        let h = self.height();
        assert!(i <= h, "chain has only {h} proper convex subgroups");
        if i == h { 0 } else { self.active[h - i - 1] + 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightReport {
    pub height: usize,
    pub rational_rank: usize,
    pub chain: ConvexChain,
}

fn coefficient_row(g: &[FormalReal], upto: usize) -> QVec {
    g[..upto].iter().flat_map(|x| x.coeffs().iter().cloned()).collect()
}

/// Lexicographic sign of a tuple.
pub fn lex_sign(g: &[FormalReal]) -> Result<Sign> {
    for x in g {
        let s = x.sign()?;
        if s != Sign::Zero {
            return Ok(s);
        }
    }
    Ok(Sign::Zero)
}

fn difference(a: &[FormalReal], b: &[FormalReal]) -> Vec<FormalReal> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

impl OrderedValueGroup {
    pub fn new(levels: usize, basis: Arc<Basis>, generators: Vec<Vec<FormalReal>>) -> Result<Self> {
        for g in &generators {
            if g.len() != levels {
                return Err(Error::DimensionMismatch { expected: levels, found: g.len() });
            }
            if g.iter().any(|x| x.basis() != &basis) {
                return Err(Error::InvalidInput("generator entries use a different basis".into()));
            }
        }
        Ok(OrderedValueGroup { levels, basis, generators })
    }

    /// Values of a flag on the standard basis vectors.
    pub fn from_flag(x: &LexPoint) -> Self {
        let generators = (0..x.ambient()).map(|j| x.levels().iter().map(|l| l[j].clone()).collect()).collect();
        OrderedValueGroup { levels: x.len(), basis: x.basis().clone(), generators }
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn generators(&self) -> &[Vec<FormalReal>] {
        &self.generators
    }

    /// Dimension of the rational space of integer relations making the first `k` levels vanish.
    fn kernel_dim(&self, k: usize) -> usize {
        let width = k * self.basis.len();
        let cols: Vec<QVec> = self.generators.iter().map(|g| coefficient_row(g, k)).collect();
        let rows: Vec<QVec> = (0..width).map(|c| cols.iter().map(|col| col[c].clone()).collect()).collect();
        self.generators.len() - rank(&rows, self.generators.len())
    }

    /// Height by enumerating the distinct subgroups `Γ ∩ V_k`.
    pub fn height(&self) -> HeightReport {
        let dims: Vec<usize> = (0..=self.levels).map(|k| self.kernel_dim(k)).collect();
        let active: Vec<usize> = (0..self.levels).filter(|&k| dims[k + 1] < dims[k]).collect();
        let rows: Vec<QVec> = self.generators.iter().map(|g| coefficient_row(g, self.levels)).collect();
        let rational_rank = rank(&rows, self.levels * self.basis.len());
        HeightReport { height: active.len(), rational_rank, chain: ConvexChain { levels: self.levels, active } }
    }

    pub fn compare(&self, a: &[FormalReal], b: &[FormalReal]) -> Result<Ordering> {
        Ok(match lex_sign(&difference(a, b))? {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        })
    }
}

/// Order-isomorphic copy of `g` using only the levels where its convex chain jumps.
pub fn hahn_reduce(g: &OrderedValueGroup) -> Result<OrderedValueGroup> {
    let active = g.height().chain.active;
    let generators: Vec<Vec<FormalReal>> =
        g.generators.iter().map(|x| active.iter().map(|&k| x[k].clone()).collect()).collect();
    let reduced = OrderedValueGroup { levels: active.len(), basis: g.basis.clone(), generators };
    for i in 0..g.generators.len() {
        for j in 0..g.generators.len() {
            let before = g.compare(&g.generators[i], &g.generators[j])?;
            let after = reduced.compare(&reduced.generators[i], &reduced.generators[j])?;
            if before != after {
                return Err(Error::InvalidInput(format!("order not preserved on generators {i}, {j}")));
            }
        }
    }
    Ok(reduced)
}

/// Height, rational rank and convex chain of a value group.
pub fn height(g: &OrderedValueGroup) -> HeightReport {
    g.height()
}

/// The valuation `χ^m ↦ (l_1(m), …, l_r(m))` on `K(ℤ^n)`, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialValuation {
    flag: LexPoint,
}

/// A convex subgroup of a valuation's value group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupSpec {
    /// `Γ ∩ V_k`: values whose first `k` levels vanish.
    Cut(usize),
    /// The subgroup generated by the values of these characters.
    Generated(Vec<IVec>),
}

/// `v|_H` on a monomial ring `K[S]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    /// Generators of `S` with value outside `H`, sent to `∞`; they generate the (prime) support.
    pub support: Vec<IVec>,
    /// Generators of `S` with value in `H`; they generate the residue monoid.
    pub residue: Vec<IVec>,
    /// The levels that remain on `H`.
    pub residual: LexPoint,
    cut: usize,
    flag: LexPoint,
}

impl Restriction {
    /// `Some(value)` when `v(χ^m) ∈ H`, `None` for `∞`.
    pub fn value(&self, m: &[i64]) -> Option<Vec<FormalReal>> {
        let vals = self.flag.evaluate(&to_q(m));
        vals[..self.cut].iter().all(FormalReal::is_zero).then(|| vals[self.cut..].to_vec())
    }
}

impl MonomialValuation {
    pub fn new(flag: LexPoint) -> Self {
        MonomialValuation { flag }
    }

    pub fn from_integer_flag(n: usize, levels: &[IVec]) -> Result<Self> {
        Ok(MonomialValuation { flag: LexPoint::from_integer_levels(n, levels)? })
    }

    pub fn trivial(n: usize) -> Self {
        MonomialValuation { flag: LexPoint::from_integer_levels(n, &[]).expect("empty flag") }
    }

    /// The valuation of the torus-invariant divisor of a ray: flag `((u_ρ))`.
    pub fn divisorial(ray: &[i64]) -> Result<Self> {
        let u = crate::algebra::rational::primitive_i(ray);
        if u.iter().all(|&x| x == 0) {
            return Err(Error::InvalidInput("zero ray".into()));
        }
        MonomialValuation::from_integer_flag(ray.len(), &[u])
    }

    pub fn flag(&self) -> &LexPoint {
        &self.flag
    }

    pub fn rank(&self) -> usize {
        self.flag.ambient()
    }

    pub fn value(&self, m: &[i64]) -> Vec<FormalReal> {
        self.flag.evaluate(&to_q(m))
    }

    pub fn value_group(&self) -> OrderedValueGroup {
        OrderedValueGroup::from_flag(&self.flag)
    }

    pub fn height(&self) -> usize {
        self.value_group().height().height
    }

    /// Integer rows cutting out the characters whose first `k` values vanish.
    fn vanishing_rows(&self, k: usize) -> Vec<IVec> {
        let n = self.rank();
        let mut rows = Vec::new();
        for l in &self.flag.levels()[..k] {
            for b in 0..self.flag.basis().len() {
                let row: QVec = l.iter().map(|x| x.coeffs()[b].clone()).collect();
                if row.iter().any(|x| !num_traits::Zero::is_zero(x)) {
                    rows.push(primitive_from_q(&row).expect("small entries"));
                }
            }
        }
        debug_assert!(rows.iter().all(|r| r.len() == n));
        rows
    }

    fn vanishing_lattice(&self, k: usize) -> Result<Vec<IVec>> {
        let n = self.rank();
        let rows = self.vanishing_rows(k);
        if rows.is_empty() {
            return Ok((0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect());
        }
        integer_kernel(&rows, n)
    }

    /// Resolves a subgroup to its level cut, rejecting non-convex subgroups.
    pub fn resolve(&self, h: &SubgroupSpec) -> Result<usize> {
        let r = self.flag.len();
        match h {
            SubgroupSpec::Cut(k) if *k <= r => Ok(*k),
            SubgroupSpec::Cut(k) => Err(Error::InvalidInput(format!("cut {k} exceeds {r} levels"))),
            SubgroupSpec::Generated(ms) => {
                let mut k = r;
                for m in ms {
                    if m.len() != self.rank() {
                        return Err(Error::DimensionMismatch { expected: self.rank(), found: m.len() });
                    }
                    if let Some(lead) = self.value(m).iter().position(|x| !x.is_zero()) {
                        k = k.min(lead);
                    }
                }
                let mut gens = ms.clone();
                gens.extend(self.vanishing_lattice(r)?);
                for b in self.vanishing_lattice(k)? {
                    if !lattice_contains(&gens, &b)? {
                        return Err(Error::NotConvex);
                    }
                }
                Ok(k)
            }
        }
    }

    /// `v/H`: the flag truncated to the levels above the cut.
    pub fn quotient_by_convex(&self, h: &SubgroupSpec) -> Result<MonomialValuation> {
        let k = self.resolve(h)?;
        Ok(MonomialValuation { flag: self.flag.prefix(k) })
    }

    /// `v|_H` on the monomial ring generated by `ring`.
    ///
    /// Requires `v/H ≥ 0` on the ring; the characters with `v/H > 0` then
    /// generate a prime ideal, the support of `v|_H`.
    pub fn restrict_to_convex(&self, h: &SubgroupSpec, ring: &[IVec]) -> Result<Restriction> {
        let k = self.resolve(h)?;
        let head = self.flag.prefix(k);
        let mut support = Vec::new();
        let mut residue = Vec::new();
        for g in ring {
            match head.sign_of_i(g)? {
                Sign::Negative => {
                    return Err(Error::ConditionFails(format!("v/H is negative on the generator {g:?}")));
                }
                Sign::Positive => support.push(g.clone()),
                Sign::Zero => residue.push(g.clone()),
            }
        }
        let residual = LexPoint::new(self.rank(), self.flag.basis().clone(), self.flag.levels()[k..].to_vec())?;
        Ok(Restriction { support, residue, residual, cut: k, flag: self.flag.clone() })
    }

    /// Appends levels, each of which must be nonzero on the characters killed by all earlier levels.
    pub fn vertical_specialize(&self, extra: &LexPoint) -> Result<MonomialValuation> {
        if extra.ambient() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: extra.ambient() });
        }
        if extra.basis() != self.flag.basis() {
            return Err(Error::InvalidInput("appended levels use a different basis".into()));
        }
        let n = self.rank();
        let mut levels = self.flag.levels().to_vec();
        for (j, l) in extra.levels().iter().enumerate() {
            let prior = LexPoint::new(n, self.flag.basis().clone(), levels.clone())?;
            let rows: Vec<QVec> = MonomialValuation { flag: prior }.vanishing_rows(levels.len()).iter().map(|r| to_q(r)).collect();
            let kernel = nullspace(&rows, n);
            let nonzero = (0..self.flag.basis().len()).any(|b| {
                let row: QVec = l.iter().map(|x| x.coeffs()[b].clone()).collect();
                kernel.iter().any(|v| !num_traits::Zero::is_zero(&dot_q(&row, v)))
            });
            if !nonzero {
                return Err(Error::LevelsNotOnResidueLattice(j));
            }
            levels.push(l.clone());
        }
        Ok(MonomialValuation { flag: LexPoint::new(n, self.flag.basis().clone(), levels)? })
    }
}

/// The cone of `fan` whose orbit is the center of `v`.
pub fn toric_valuation_center(fan: &Fan, v: &MonomialValuation) -> Result<Cone> {
    match locate_lex(fan, &v.flag) {
        Ok(i) => Ok(fan.cone(i).clone()),
        Err(Error::OutsideSupport) => Err(Error::NoCenter),
        Err(e) => Err(e),
    }
}
