//! Seeded random fans and supports for property tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::rational::IVec;
use crate::fan::{stellar_subdivision, Fan};
use crate::tropicalize::{tropical_hypersurface, ExponentPolynomial};

pub type CorpusRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A positive integer combination of the rays of a random cone, preferring
/// cones of dimension at least 2 so that the subdivision is proper.
pub fn random_interior_vector(rng: &mut CorpusRng, fan: &Fan) -> Option<IVec> {
    let mut cones: Vec<usize> = (0..fan.len()).filter(|&i| fan.cone(i).dim() > 1).collect();
    if cones.is_empty() {
        cones = (0..fan.len()).filter(|&i| fan.cone(i).dim() > 0).collect();
    }
    let c = fan.cone(*cones.choose(rng)?);
    let mut v = vec![0; fan.ambient()];
    for r in c.rays() {
        let k: i64 = rng.gen_range(1..=3);
        for (x, y) in v.iter_mut().zip(r) {
            *x += k * y;
        }
    }
    Some(v)
}

pub fn random_stellar_refinement(rng: &mut CorpusRng, fan: &Fan) -> Fan {
    match random_interior_vector(rng, fan) {
        Some(v) => stellar_subdivision(fan, &v).expect("vector lies in the support"),
        None => fan.clone(),
    }
}

/// A complete simplicial fan: `steps` stellar subdivisions of the fan of `ℙ^n`.
pub fn random_complete_fan(rng: &mut CorpusRng, n: usize, steps: usize) -> Fan {
    let mut fan = Fan::projective_space(n);
    for _ in 0..steps {
        fan = random_stellar_refinement(rng, &fan);
    }
    fan
}

/// The tropical hypersurface of a random polynomial with 2 to 5 terms.
pub fn random_hypersurface(rng: &mut CorpusRng, n: usize) -> Fan {
    let terms = rng.gen_range(2..=5);
    let mut exps: Vec<IVec> = Vec::new();
    while exps.len() < terms {
        let e: IVec = (0..n).map(|_| rng.gen_range(0..=2)).collect();
        if !exps.contains(&e) {
            exps.push(e);
        }
    }
    tropical_hypersurface(&ExponentPolynomial::new(n, exps).expect("distinct exponents")).expect("valid polynomial")
}

/// The closure of a random nonempty set of cones of a random complete fan.
pub fn random_cone_union(rng: &mut CorpusRng, n: usize) -> Fan {
    let steps = rng.gen_range(0..=3);
    let base = random_complete_fan(rng, n, steps);
    let cones: Vec<_> = (0..base.len())
        .filter(|&i| base.cone(i).dim() > 0 && rng.gen_bool(0.3))
        .map(|i| base.cone(i).clone())
        .collect();
    let cones = if cones.is_empty() { vec![base.cone(*base.maximal_indices().first().expect("nonempty")).clone()] } else { cones };
    Fan::closure(n, cones).expect("subsets of a fan form a fan")
}

/// A support of rank 2 or 3, alternating between hypersurfaces and cone unions.
pub fn random_support(rng: &mut CorpusRng) -> Fan {
    let n = rng.gen_range(2..=3);
    if rng.gen_bool(0.5) {
        random_hypersurface(rng, n)
    } else {
        random_cone_union(rng, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = random_complete_fan(&mut seeded(3), 3, 4);
        let b = random_complete_fan(&mut seeded(3), 3, 4);
        assert_eq!(a, b);
        assert!(a.is_complete() && a.is_simplicial());
    }

    #[test]
    fn supports_are_fans() {
        let mut rng = seeded(11);
        for _ in 0..20 {
            let f = random_support(&mut rng);
            assert!(crate::fan::is_fan(f.ambient(), f.cones()).ok);
        }
    }
}
