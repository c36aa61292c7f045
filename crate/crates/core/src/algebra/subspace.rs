
use super::matrix::{nullspace, rref};
use super::rational::{QVec, Rational};
use crate::error::{Error, Result};

/// A subspace of `Q^n` stored by its reduced row echelon basis, so equal
/// subspaces compare equal structurally.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QSubspace {
    ambient: usize,
    basis: Vec<QVec>,
}

impl QSubspace {
    pub fn zero(ambient: usize) -> Self {
        QSubspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                (0..ambient)
                    .map(|j| if i == j { Rational::from_integer(1.into()) } else { Rational::from_integer(0.into()) })
                    .collect()
            })
            .collect();
        QSubspace { ambient, basis }
    }

    pub fn span(ambient: usize, vectors: &[QVec]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch { expected: ambient, found: v.len() });
        }
        let (basis, _) = rref(vectors, ambient);
        Ok(QSubspace { ambient, basis })
    }

    pub fn span_i(ambient: usize, vectors: &[Vec<i64>]) -> Result<Self> {
        let qs: Vec<QVec> = vectors.iter().map(|v| super::rational::to_q(v)).collect();
        Self::span(ambient, &qs)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QVec] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Self::span(self.ambient, &all)
    }

    /// Orthogonal complement under the standard pairing of `Q^n` with its dual.
    pub fn annihilator(&self) -> Self {
        let ns = nullspace(&self.basis, self.ambient);
        Self::span(self.ambient, &ns).expect("nullspace has ambient dimension")
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        let mut all = self.basis.clone();
        all.push(v.to_vec());
        rref(&all, self.ambient).1.len() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceOp {
    Sum,
    Intersection,
    Annihilator,
}

/// Fold `op` over `args`. `Annihilator` takes exactly one argument.
pub fn subspace_algebra(op: SubspaceOp, args: &[QSubspace]) -> Result<QSubspace> {
    let first = args.first().ok_or_else(|| Error::invalid("no subspaces given"))?;
    match op {
        SubspaceOp::Annihilator => {
            if args.len() != 1 {
                return Err(Error::invalid("annihilator takes one subspace"));
            }
            Ok(first.annihilator())
        }
        SubspaceOp::Sum => args[1..].iter().try_fold(first.clone(), |acc, s| acc.sum(s)),
        SubspaceOp::Intersection => {
            args[1..].iter().try_fold(first.clone(), |acc, s| acc.intersection(s))
        }
    }
}
