//! Čech–de Rham descent on the cover of a complex by closed stars.
//!
//! The cover is indexed by vertices; the intersection over a `q`-simplex `σ` is
//! realized as the closed star of `σ`, so the nerve is the complex itself. A
//! closed `k`-cochain is pushed down the double complex: local primitives on
//! vertex stars, differences on edge stars, and so on, until a `k`-cochain of
//! constants on the nerve remains.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cochain::RealCochain;
use crate::complex::{drop_vertex, SimplicialComplex, Star};
use crate::error::{Error, Result};
use crate::homology::{betti_numbers, class_coordinates, coboundary_solver, ensure_closed, find_primitive, Primitive};
use crate::tolerance::Tolerance;

/// Sign relating the constant Čech cocycle produced by descent to simplicial
/// cohomology, indexed by degree. The values were fixed by descending known
/// generators (see the `nerve_signs_match_generators` test) and agree with
/// `(-1)^(k(k+1)/2)`, which is used beyond the table.
const NERVE_SIGN: [f64; 4] = [1.0, -1.0, -1.0, 1.0];

pub fn nerve_sign(degree: usize) -> f64 {
    NERVE_SIGN.get(degree).copied().unwrap_or(if (degree * (degree + 1) / 2) % 2 == 0 { 1.0 } else { -1.0 })
}

#[derive(Debug, Clone)]
pub struct StarCover {
    base: SimplicialComplex,
    /// `stars[q][i]` is the closed star of the `i`-th `q`-simplex.
    stars: Vec<Vec<Star>>,
}

impl StarCover {
    pub fn base(&self) -> &SimplicialComplex {
        &self.base
    }

    /// Per-vertex members of the cover.
    pub fn vertex_stars(&self) -> &[Star] {
        &self.stars[0]
    }

    /// The overlap indexed by the `i`-th `q`-simplex.
    pub fn overlap(&self, q: usize, i: usize) -> &Star {
        &self.stars[q][i]
    }

    pub fn len(&self) -> usize {
        self.stars[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.stars[0].is_empty()
    }
}

fn is_acyclic(k: &SimplicialComplex) -> bool {
    betti_numbers(k).iter().enumerate().all(|(d, &b)| b == usize::from(d == 0))
}

/// Builds the cover and checks that every member and every overlap is acyclic.
pub fn star_cover(k: &SimplicialComplex) -> Result<StarCover> {
    let stars: Vec<Vec<Star>> = (0..=k.dim())
        .map(|q| {
            k.simplices(q)
                .par_iter()
                .map(|s| {
                    let star = k.closed_star(s)?;
                    if !is_acyclic(&star.complex) {
                        return Err(Error::CoverNotGood(format!(
                            "star of {:?} has Betti numbers {:?}",
                            s,
                            betti_numbers(&star.complex)
                        )));
                    }
                    Ok(star)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(StarCover { base: k.clone(), stars })
}

/// Local primitives `ν_v` with `d ν_v = ω|St(v)`.
#[derive(Debug, Clone)]
pub struct LocalFamily {
    pub degree: usize,
    pub primitives: Vec<RealCochain>,
}

/// Least-squares tie-break: `None` keeps the minimum-norm solution, `Some(seed)`
/// adds a seeded random element of the kernel to every local solve.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TieBreak(pub Option<u64>);

fn solve_on_star(star: &Star, x: &RealCochain, tol: Tolerance, tie: TieBreak, salt: u64) -> Result<RealCochain> {
    let m = x.degree();
    debug_assert!(m >= 1);
    let local = &star.complex;
    if m > local.dim() {
        return Ok(RealCochain::zeros(m - 1, local.count(m - 1)));
    }
    let solver = coboundary_solver(local, m - 1);
    let mut nu = solver.solve(x.values());
    if let TieBreak(Some(seed)) = tie {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let r: Vec<f64> = (0..nu.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for (n, k) in nu.iter_mut().zip(solver.kernel_component(&r)) {
            *n += k;
        }
    }
    let nu = RealCochain::new(m - 1, nu);
    let residual = local.apply_d(&nu)?.max_abs_diff(x);
    let bound = tol.bound(x.norm_inf());
    if residual > bound || !residual.is_finite() {
        return Err(Error::StarSolveFailure(format!(
            "star of {:?}: |d nu - omega|_inf = {residual:e} > {bound:e}",
            star.center
        )));
    }
    Ok(nu)
}

fn check_form(cover: &StarCover, omega: &RealCochain, tol: Tolerance) -> Result<()> {
    let k = omega.degree();
    if k == 0 || k > cover.base.dim() {
        return Err(Error::DegreeOutOfRange { degree: k, allowed: format!("1..={}", cover.base.dim()) });
    }
    ensure_closed(&cover.base, omega, tol)
}

pub fn local_primitives(cover: &StarCover, omega: &RealCochain, tol: Tolerance, tie: TieBreak) -> Result<LocalFamily> {
    check_form(cover, omega, tol)?;
    let primitives = level_zero(cover, omega, tol, tie)?;
    Ok(LocalFamily { degree: omega.degree(), primitives })
}

fn level_zero(cover: &StarCover, omega: &RealCochain, tol: Tolerance, tie: TieBreak) -> Result<Vec<RealCochain>> {
    cover.stars[0]
        .par_iter()
        .enumerate()
        .map(|(v, star)| solve_on_star(star, &star.restrict(omega), tol, tie, v as u64))
        .collect()
}

#[derive(Debug, Clone)]
pub struct CechClass {
    /// Čech degree, equal to the degree of the input form.
    pub degree: usize,
    /// Constant value on each overlap, i.e. a simplicial cochain on the nerve.
    pub cocycle: RealCochain,
    /// Largest deviation from a constant seen on any overlap.
    pub constancy_defect: f64,
    /// `|δ cocycle|_inf`
    pub cocycle_defect: f64,
    /// Class coordinates after the nerve identification, in the integer basis.
    pub coordinates: Vec<f64>,
    pub nerve_sign: f64,
}

/// The full descent zig-zag. Level `j` forms the alternating sum of the
/// previous primitives restricted to the star of each `j`-simplex and solves
/// again; at level `k` the result is constant on each star.
pub fn connecting_delta(cover: &StarCover, omega: &RealCochain, tol: Tolerance, tie: TieBreak) -> Result<CechClass> {
    check_form(cover, omega, tol)?;
    let k = omega.degree();
    let base = &cover.base;
    let mut prev = level_zero(cover, omega, tol, tie)?;
    for j in 1..k {
        prev = (0..base.count(j))
            .into_par_iter()
            .map(|i| {
                let x = alternating_restriction(cover, j, i, &prev);
                solve_on_star(&cover.stars[j][i], &x, tol, tie, ((j as u64) << 40) | i as u64)
            })
            .collect::<Result<_>>()?;
    }
    let mut values = Vec::with_capacity(base.count(k));
    let mut constancy_defect = 0.0_f64;
    for i in 0..base.count(k) {
        let x = alternating_restriction(cover, k, i, &prev);
        let vals = x.values();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        constancy_defect = vals.iter().fold(constancy_defect, |m, v| m.max((v - mean).abs()));
        values.push(mean);
    }
    let cocycle = RealCochain::new(k, values);
    let bound = tol.bound(omega.norm_inf());
    if constancy_defect > bound {
        return Err(Error::StarSolveFailure(format!(
            "descent did not end in constants: spread {constancy_defect:e} > {bound:e}"
        )));
    }
    let cocycle_defect = if k < base.dim() { base.apply_d(&cocycle)?.norm_inf() } else { 0.0 };
    let sign = nerve_sign(k);
    let coordinates = class_coordinates(base, &cocycle)?.into_iter().map(|c| sign * c).collect();
    Ok(CechClass { degree: k, cocycle, constancy_defect, cocycle_defect, coordinates, nerve_sign: sign })
}

/// `sum_i (-1)^i ν_{∂_i σ}|St(σ)` as a 0-cochain-or-higher on the star of the
/// `idx`-th `j`-simplex.
fn alternating_restriction(cover: &StarCover, j: usize, idx: usize, prev: &[RealCochain]) -> RealCochain {
    let base = &cover.base;
    let sigma = base.simplex(j, idx);
    let target = &cover.stars[j][idx];
    let degree = prev[0].degree();
    let mut acc = RealCochain::zeros(degree, target.complex.count(degree));
    for i in 0..=j {
        let face = drop_vertex(sigma, i);
        let f = base.index_of(&face).expect("faces of a simplex belong to the complex");
        let piece = target.restrict_from(&cover.stars[j - 1][f], &prev[f]);
        let s = if i % 2 == 0 { 1.0 } else { -1.0 };
        for (a, p) in acc.values_mut().iter_mut().zip(piece.values()) {
            *a += s * p;
        }
    }
    acc
}

#[derive(Debug, Clone)]
pub struct GlobalityReport {
    pub cech: CechClass,
    pub simplicial_coordinates: Vec<f64>,
    /// `max_i |cech_i - simplicial_i|`
    pub discrepancy: f64,
    pub threshold: f64,
    pub cech_vanishes: bool,
    /// A global primitive when one exists: the global conserved current.
    pub global_current: Option<RealCochain>,
}

impl GlobalityReport {
    pub fn globalizable(&self) -> bool {
        self.global_current.is_some()
    }
}

/// Compares the descent verdict with the direct exactness test. Any degree
/// `1..=n` is accepted.
pub fn current_globality(cover: &StarCover, omega: &RealCochain, tol: Tolerance, tie: TieBreak) -> Result<GlobalityReport> {
    let cech = connecting_delta(cover, omega, tol, tie)?;
    let simplicial_coordinates = class_coordinates(&cover.base, omega)?;
    let threshold = tol.bound(omega.norm_inf());
    let discrepancy = cech
        .coordinates
        .iter()
        .zip(&simplicial_coordinates)
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    let cech_vanishes = cech.coordinates.iter().all(|c| c.abs() <= threshold);
    let global_current = match find_primitive(&cover.base, omega, tol)? {
        Primitive::Exact(beta) => Some(beta),
        Primitive::Obstructed { .. } => None,
    };
    if discrepancy > threshold || cech_vanishes != global_current.is_some() {
        return Err(Error::VerdictInconsistent(format!(
            "Čech class {:?} vs simplicial class {:?} (discrepancy {discrepancy:e}, threshold {threshold:e})",
            cech.coordinates, simplicial_coordinates
        )));
    }
    Ok(GlobalityReport { cech, simplicial_coordinates, discrepancy, threshold, cech_vanishes, global_current })
}
