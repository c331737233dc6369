//! Integer and real cohomology of a complex.
//!
//! Cohomology convention throughout: `H^k = ker d_k / im d_{k-1}`, torsion of
//! `H^k` comes from the elementary divisors of `d_{k-1}`. Real Betti numbers
//! equal the ranks of the free parts, so both rings share one computation.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cochain::{IntCochain, RealCochain, Ring};
use crate::complex::SimplicialComplex;
use crate::error::{degree_check, Error, Result};
use crate::lsq::LeastSquares;
use crate::matrix::IntMatrix;
use crate::snf::{elementary_divisors, smith_normal_form};
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDescriptor {
    pub betti: usize,
    /// Elementary divisors greater than one, each dividing the next.
    pub torsion: Vec<BigInt>,
}

fn coboundary_rank_and_divisors(k: &SimplicialComplex, degree: usize) -> Vec<BigInt> {
    if degree >= k.dim() {
        return Vec::new();
    }
    elementary_divisors(&k.coboundary_ext(degree).to_dense_int())
}

/// Betti number and (for integer coefficients) torsion of `H^degree`.
pub fn homology_groups(k: &SimplicialComplex, degree: usize, ring: Ring) -> Result<GroupDescriptor> {
    degree_check(degree, k.dim())?;
    let rank_out = coboundary_rank_and_divisors(k, degree).len();
    let incoming = if degree == 0 { Vec::new() } else { coboundary_rank_and_divisors(k, degree - 1) };
    let betti = k.count(degree) - rank_out - incoming.len();
    let torsion = match ring {
        Ring::Int => incoming.into_iter().filter(|d| !d.is_one()).collect(),
        Ring::Real => Vec::new(),
    };
    Ok(GroupDescriptor { betti, torsion })
}

/// Betti numbers in every degree.
pub fn betti_numbers(k: &SimplicialComplex) -> Vec<usize> {
    (0..=k.dim())
        .map(|d| homology_groups(k, d, Ring::Real).expect("degree within range").betti)
        .collect()
}

/// Integral class of a cocycle: free coordinates and torsion residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralClass {
    pub free: Vec<BigInt>,
    /// `(order, residue)` per torsion summand, residue in `0..order`.
    pub torsion: Vec<(BigInt, BigInt)>,
}

impl IntegralClass {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.iter().all(|(_, r)| r.is_zero())
    }
}

/// Integer generators of `H^k` and the projector onto class coordinates.
///
/// The projector is an integer matrix: it maps each free generator to the
/// corresponding unit vector and every coboundary to zero. Applied to a real
/// closed cochain it yields the real class coordinates.
#[derive(Debug, Clone)]
pub struct CohomologyBasis {
    degree: usize,
    generators: Vec<IntCochain>,
    torsion_generators: Vec<(BigInt, IntCochain)>,
    free_projector: IntMatrix,
    torsion_projector: IntMatrix,
    projector: DMatrix<f64>,
}

impl CohomologyBasis {
    fn compute(k: &SimplicialComplex, degree: usize) -> Result<Self> {
        degree_check(degree, k.dim())?;
        let n = k.count(degree);
        let d_out = k.coboundary_ext(degree).to_dense_int();
        let out = smith_normal_form(&d_out);
        let r1 = out.rank();
        // kernel basis of d_k: columns r1.. of V^{-1}; kernel coordinates: rows r1.. of V
        let kernel: Vec<usize> = (r1..n).collect();
        let kernel_basis = out.v_inv.select_cols(&kernel);
        let kernel_coords = out.v.select_rows(r1..n);
        let incoming = if degree == 0 {
            IntMatrix::zeros(kernel.len(), 0)
        } else {
            kernel_coords.mul(&k.coboundary_ext(degree - 1).to_dense_int())
        };
        let inc = smith_normal_form(&incoming);
        let r2 = inc.rank();
        let z = kernel.len();

        let lift = |col: Vec<BigInt>| IntCochain::new(degree, kernel_basis.mul_vec(&col));
        let generators: Vec<IntCochain> = (r2..z).map(|j| lift(inc.u.column(j))).collect();
        let torsion_idx: Vec<usize> = (0..r2).filter(|&i| !inc.divisors[i].is_one()).collect();
        let torsion_generators =
            torsion_idx.iter().map(|&i| (inc.divisors[i].clone(), lift(inc.u.column(i)))).collect();

        let free_projector = inc.u_inv.select_rows(r2..z).mul(&kernel_coords);
        let torsion_projector = inc.u_inv.select_rows(torsion_idx.iter().copied()).mul(&kernel_coords);
        let projector = free_projector.to_f64();
        Ok(CohomologyBasis { degree, generators, torsion_generators, free_projector, torsion_projector, projector })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn betti(&self) -> usize {
        self.generators.len()
    }

    /// Integer cocycles whose classes form a basis of the free part.
    pub fn representatives(&self) -> &[IntCochain] {
        &self.generators
    }

    pub fn real_representative(&self, i: usize) -> RealCochain {
        self.generators[i].to_real()
    }

    pub fn real_representatives(&self) -> Vec<RealCochain> {
        self.generators.iter().map(IntCochain::to_real).collect()
    }

    /// `(order, representative)` per torsion summand of `H^k(K; Z)`.
    pub fn torsion_generators(&self) -> &[(BigInt, IntCochain)] {
        &self.torsion_generators
    }

    pub fn projector(&self) -> &IntMatrix {
        &self.free_projector
    }

    /// Real class coordinates of a closed cochain.
    pub fn coordinates(&self, omega: &RealCochain) -> Vec<f64> {
        assert_eq!(omega.len(), self.projector.ncols(), "cochain does not match the basis degree");
        if self.projector.nrows() == 0 {
            return Vec::new();
        }
        (&self.projector * DVector::from_column_slice(omega.values())).iter().copied().collect()
    }

    /// Exact integral class of an integer cocycle.
    pub fn integral_class(&self, c: &IntCochain) -> IntegralClass {
        let free = self.free_projector.mul_vec(c.values());
        let raw = self.torsion_projector.mul_vec(c.values());
        let torsion = raw
            .into_iter()
            .zip(&self.torsion_generators)
            .map(|(v, (order, _))| (order.clone(), v.mod_floor(order)))
            .collect();
        IntegralClass { free, torsion }
    }

    /// Largest absolute projector entry, a conditioning diagnostic.
    pub fn projector_scale(&self) -> BigInt {
        self.free_projector.max_abs_entry()
    }
}

/// Cohomology basis of `H^degree`, computed once per complex and shared.
pub fn cohomology_basis(k: &SimplicialComplex, degree: usize) -> Result<Arc<CohomologyBasis>> {
    degree_check(degree, k.dim())?;
    k.cached_basis(degree, || CohomologyBasis::compute(k, degree).map(Arc::new))
}

/// Real class coordinates of a closed cochain.
pub fn class_coordinates(k: &SimplicialComplex, omega: &RealCochain) -> Result<Vec<f64>> {
    k.check_len(omega)?;
    Ok(cohomology_basis(k, omega.degree())?.coordinates(omega))
}

/// Shared least-squares solver for `d_degree`.
pub(crate) fn coboundary_solver(k: &SimplicialComplex, degree: usize) -> Arc<LeastSquares> {
    k.cached_solver(degree, || Arc::new(LeastSquares::new(k.coboundary_ext(degree))))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Primitive {
    /// `d beta = omega` within tolerance.
    Exact(RealCochain),
    /// The class of `omega` is nonzero; these are its coordinates.
    Obstructed { coordinates: Vec<f64> },
}

impl Primitive {
    pub fn is_exact(&self) -> bool {
        matches!(self, Primitive::Exact(_))
    }
}

/// Checks `|d omega|_inf` against the tolerance scaled by `|omega|_inf`.
pub fn ensure_closed(k: &SimplicialComplex, omega: &RealCochain, tol: Tolerance) -> Result<()> {
    k.check_len(omega)?;
    if omega.degree() >= k.dim() {
        return Ok(());
    }
    let defect = k.apply_d(omega)?.norm_inf();
    let bound = tol.bound(omega.norm_inf());
    if defect > bound || !defect.is_finite() {
        return Err(Error::CochainNotClosed { defect, tol: bound });
    }
    Ok(())
}

/// A cochain `beta` with `d beta = omega` when the class of `omega` vanishes,
/// otherwise the nonzero class coordinates.
pub fn find_primitive(k: &SimplicialComplex, omega: &RealCochain, tol: Tolerance) -> Result<Primitive> {
    let degree = omega.degree();
    if degree == 0 || degree > k.dim() {
        return Err(Error::DegreeOutOfRange { degree, allowed: format!("1..={}", k.dim()) });
    }
    ensure_closed(k, omega, tol)?;
    let coordinates = class_coordinates(k, omega)?;
    let bound = tol.bound(omega.norm_inf());
    if coordinates.iter().any(|c| c.abs() > bound) {
        return Ok(Primitive::Obstructed { coordinates });
    }
    let solver = coboundary_solver(k, degree - 1);
    let beta = RealCochain::new(degree - 1, solver.solve(omega.values()));
    let residual = k.apply_d(&beta)?.max_abs_diff(omega);
    if residual > bound || !residual.is_finite() {
        return Err(Error::SolverFailure(format!(
            "class vanishes but |d beta - omega|_inf = {residual:e} > {bound:e} (condition {:e})",
            solver.condition()
        )));
    }
    Ok(Primitive::Exact(beta))
}
