//! Alexander–Whitney cup product and top-degree pairings.

use nalgebra::DMatrix;
use num_bigint::BigInt;

use crate::cochain::{Coefficient, Cochain};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::homology::cohomology_basis;

/// Relative cutoff on singular values for the nondegeneracy verdict.
pub const PAIRING_RANK_CUTOFF: f64 = 1e-8;

/// `(a ∪ b)(v_0..v_{k+l}) = a(v_0..v_k) * b(v_k..v_{k+l})`.
pub fn cup<R: Coefficient>(k: &SimplicialComplex, a: &Cochain<R>, b: &Cochain<R>) -> Result<Cochain<R>> {
    let p = a.degree() + b.degree();
    if p > k.dim() {
        return Err(Error::DegreeOverflow(p, k.dim()));
    }
    k.check_len(a)?;
    k.check_len(b)?;
    let table = k.front_back(p, a.degree());
    let values = table.iter().map(|&(f, bk)| a.values()[f].clone() * b.values()[bk].clone()).collect();
    Ok(Cochain::new(p, values))
}

/// `<omega, [X]>` for a top-degree cochain on a closed oriented complex.
pub fn pair_with_fundamental<R: Coefficient>(k: &SimplicialComplex, omega: &Cochain<R>) -> Result<R> {
    let z = k.fundamental_cycle()?;
    if omega.degree() != k.dim() {
        return Err(Error::DegreeOutOfRange { degree: omega.degree(), allowed: format!("{} (top degree)", k.dim()) });
    }
    k.check_len(omega)?;
    let mut acc = R::zero();
    for (v, &e) in omega.values().iter().zip(z.coefficients()) {
        acc.add_signed(e as i8, v);
    }
    Ok(acc)
}

/// `P[i][j] = <w_i ∪ h_j, [X]>` over the integer bases of `H^k` and `H^{n-k}`.
#[derive(Debug, Clone)]
pub struct PairingMatrix {
    pub degrees: (usize, usize),
    pub matrix: DMatrix<f64>,
    pub rank: usize,
    pub nondegenerate: bool,
}

pub fn poincare_pairing_matrix(k: &SimplicialComplex, degree: usize) -> Result<PairingMatrix> {
    let n = k.dim();
    if degree > n {
        return Err(Error::DegreeOutOfRange { degree, allowed: format!("0..={n}") });
    }
    k.fundamental_cycle()?;
    let left = cohomology_basis(k, degree)?;
    let right = cohomology_basis(k, n - degree)?;
    let mut matrix = DMatrix::zeros(left.betti(), right.betti());
    for (i, w) in left.representatives().iter().enumerate() {
        for (j, h) in right.representatives().iter().enumerate() {
            let value: BigInt = pair_with_fundamental(k, &cup(k, w, h)?)?;
            matrix[(i, j)] = value.to_f64();
        }
    }
    let rank = numerical_rank(&matrix, PAIRING_RANK_CUTOFF);
    let nondegenerate = rank == left.betti() && rank == right.betti();
    Ok(PairingMatrix { degrees: (degree, n - degree), matrix, rank, nondegenerate })
}

pub(crate) fn numerical_rank(m: &DMatrix<f64>, rel_cutoff: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let s = m.clone().singular_values();
    let largest = s.max();
    if largest == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > rel_cutoff * largest).count()
}
