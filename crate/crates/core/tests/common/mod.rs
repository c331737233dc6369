#![allow(dead_code)]

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use varobs::homology::cohomology_basis;
use varobs::manifolds::{generate, ManifoldName};
use varobs::{IntCochain, RealCochain, SimplicialComplex};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn three_manifolds() -> Vec<(ManifoldName, SimplicialComplex)> {
    [ManifoldName::S3, ManifoldName::T3, ManifoldName::S1xS2, ManifoldName::RP3]
        .into_iter()
        .map(|n| (n, generate(n).unwrap()))
        .collect()
}

pub fn random_int(rng: &mut ChaCha8Rng, degree: usize, len: usize, bound: i64) -> IntCochain {
    IntCochain::new(degree, (0..len).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect())
}

pub fn random_real(rng: &mut ChaCha8Rng, degree: usize, len: usize) -> RealCochain {
    RealCochain::new(degree, (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect())
}

/// `sum a_j g_j + d beta` with random real `a` (zero when `exact`) and `beta`.
pub fn random_closed_real(rng: &mut ChaCha8Rng, k: &SimplicialComplex, degree: usize, exact: bool) -> RealCochain {
    let beta = random_real(rng, degree - 1, k.count(degree - 1));
    let mut omega = k.apply_d(&beta).unwrap();
    if !exact {
        for g in cohomology_basis(k, degree).unwrap().real_representatives() {
            let a: f64 = rng.gen_range(-3.0..3.0);
            for (o, x) in omega.values_mut().iter_mut().zip(g.values()) {
                *o += a * x;
            }
        }
    }
    omega
}

/// `sum n_j eta_j + d m` over the free integer generators, with each `n_j` in
/// `-2..=2`; all `n_j` vanish with probability 1/3. Returns the cocycle and `n`.
pub fn random_int_cocycle(rng: &mut ChaCha8Rng, k: &SimplicialComplex, degree: usize) -> (IntCochain, Vec<i64>) {
    let m = random_int(rng, degree - 1, k.count(degree - 1), 3);
    let mut c = k.apply_d(&m).unwrap();
    let basis = cohomology_basis(k, degree).unwrap();
    let trivial = rng.gen_range(0..3) == 0;
    let mut n = Vec::new();
    for g in basis.representatives() {
        let nj: i64 = if trivial { 0 } else { rng.gen_range(-2..=2) };
        n.push(nj);
        c = c.plus(&g.scaled(&BigInt::from(nj)));
    }
    (c, n)
}
