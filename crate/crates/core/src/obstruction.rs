//! The obstruction class `[γ ∪ F]` in top degree and the sharpness verdict.

use rayon::prelude::*;

use crate::bundle::{curvature, curvature_scale, flatten, Connection, FlatResult, U1Bundle};
use crate::cochain::RealCochain;
use crate::complex::SimplicialComplex;
use crate::cup::{cup, pair_with_fundamental, poincare_pairing_matrix};
use crate::error::{Error, Result};
use crate::homology::{cohomology_basis, ensure_closed};
use crate::tolerance::Tolerance;

/// A closed 1-form standing in for a vertical symmetry of the bundle of
/// connections.
#[derive(Debug, Clone, PartialEq)]
pub struct VerticalSymmetry {
    gamma: RealCochain,
    pub provenance: String,
}

impl VerticalSymmetry {
    pub fn gamma(&self) -> &RealCochain {
        &self.gamma
    }
}

pub fn symmetry_from_oneform(k: &SimplicialComplex, gamma: RealCochain, tol: Tolerance) -> Result<VerticalSymmetry> {
    symmetry_with_provenance(k, gamma, tol, "user 1-cochain")
}

pub fn symmetry_with_provenance(
    k: &SimplicialComplex,
    gamma: RealCochain,
    tol: Tolerance,
    provenance: &str,
) -> Result<VerticalSymmetry> {
    if gamma.degree() != 1 {
        return Err(Error::DegreeOutOfRange { degree: gamma.degree(), allowed: "1".into() });
    }
    ensure_closed(k, &gamma, tol)?;
    Ok(VerticalSymmetry { gamma, provenance: provenance.to_string() })
}

fn check_inputs(k: &SimplicialComplex, sym: &VerticalSymmetry, bundle: &U1Bundle) -> Result<()> {
    if !bundle.base().same_as(k) {
        return Err(Error::BaseMismatch("bundle lives on a different complex".into()));
    }
    if k.dim() != 3 {
        return Err(Error::DegreeOutOfRange { degree: k.dim(), allowed: "3 (obstruction needs a 3-manifold)".into() });
    }
    k.fundamental_cycle()?;
    k.check_len(&sym.gamma)
}

/// `2 <γ ∪ F_A, [X]>`
pub fn obstruction_pairing(k: &SimplicialComplex, sym: &VerticalSymmetry, bundle: &U1Bundle, a: &Connection) -> Result<f64> {
    check_inputs(k, sym, bundle)?;
    let f = curvature(bundle, a)?;
    Ok(2.0 * pair_with_fundamental(k, &cup(k, &sym.gamma, &f)?)?)
}

/// Coordinates of `2 γ ∪ F_A` in the integer basis of `H^3`.
pub fn obstruction_class(
    k: &SimplicialComplex,
    sym: &VerticalSymmetry,
    bundle: &U1Bundle,
    a: &Connection,
) -> Result<Vec<f64>> {
    check_inputs(k, sym, bundle)?;
    let f = curvature(bundle, a)?;
    let omega = cup(k, &sym.gamma, &f)?.scaled(&2.0);
    Ok(cohomology_basis(k, 3)?.coordinates(&omega))
}

/// Vanishing threshold for a pairing: roundoff grows with the number of top
/// simplices and with the magnitudes that cancel inside `F`.
pub fn pairing_tolerance(k: &SimplicialComplex, sym: &VerticalSymmetry, bundle: &U1Bundle, a: &Connection, tol: Tolerance) -> Result<f64> {
    let scale = 2.0 * sym.gamma.norm_inf() * curvature_scale(bundle, a)? * k.count(k.dim()) as f64;
    Ok(tol.affine_bound(scale))
}

#[derive(Debug, Clone)]
pub struct Witness {
    pub basis_index: usize,
    pub gamma: RealCochain,
    pub pairing: f64,
}

#[derive(Debug, Clone)]
pub struct SharpnessVerdict {
    pub flat_exists: bool,
    pub witness: Option<Witness>,
    /// Pairing of every `H^1` basis element with `F(A_star)`, in basis order.
    pub all_pairings: Vec<f64>,
    /// The same pairings predicted from the Poincaré pairing matrix and the
    /// real Chern class coordinates.
    pub predicted_pairings: Vec<f64>,
    pub pairing_tolerance: f64,
    pub flat: FlatResult,
}

/// Runs [`flatten`] and sweeps the `H^1` basis; fails with
/// `VERDICT_INCONSISTENT` if flatness and vanishing of all pairings disagree.
pub fn sharpness_check(k: &SimplicialComplex, bundle: &U1Bundle, tol: Tolerance) -> Result<SharpnessVerdict> {
    if !bundle.base().same_as(k) {
        return Err(Error::BaseMismatch("bundle lives on a different complex".into()));
    }
    if k.dim() != 3 {
        return Err(Error::DegreeOutOfRange { degree: k.dim(), allowed: "3".into() });
    }
    k.fundamental_cycle()?;
    let flat = flatten(bundle, tol)?;
    let h1 = cohomology_basis(k, 1)?;
    let gammas = h1.real_representatives();

    let evaluated: Vec<(f64, f64)> = gammas
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let sym = symmetry_with_provenance(k, g.clone(), tol, &format!("H^1 basis element {i}"))?;
            let p = obstruction_pairing(k, &sym, bundle, &flat.a_star)?;
            let t = pairing_tolerance(k, &sym, bundle, &flat.a_star, tol)?;
            Ok((p, t))
        })
        .collect::<Result<_>>()?;
    let all_pairings: Vec<f64> = evaluated.iter().map(|e| e.0).collect();
    let threshold = evaluated.iter().map(|e| e.1).fold(tol.abs, f64::max);

    // <γ_i ∪ F> = sum_j P_ij [F]_j, and [F] is the real Chern class.
    let pm = poincare_pairing_matrix(k, 1)?;
    let predicted_pairings: Vec<f64> = (0..pm.matrix.nrows())
        .map(|i| 2.0 * (0..pm.matrix.ncols()).map(|j| pm.matrix[(i, j)] * flat.obstruction_coords[j]).sum::<f64>())
        .collect();

    for (i, (p, q)) in all_pairings.iter().zip(&predicted_pairings).enumerate() {
        if (p - q).abs() > threshold.max(tol.bound(q.abs())) {
            return Err(Error::VerdictInconsistent(format!(
                "pairing {i}: cup evaluation {p:e} disagrees with duality prediction {q:e}"
            )));
        }
    }

    let witness = predicted_pairings
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .filter(|(i, _)| all_pairings[*i].abs() > threshold)
        .map(|(i, _)| Witness { basis_index: i, gamma: gammas[i].clone(), pairing: all_pairings[i] });

    if flat.flat == witness.is_some() {
        return Err(Error::VerdictInconsistent(format!(
            "flatten reports flat = {} (residual {:e}) but the largest pairing is {:e} against threshold {threshold:e}",
            flat.flat,
            flat.residual,
            all_pairings.iter().fold(0.0_f64, |m, p| m.max(p.abs()))
        )));
    }
    Ok(SharpnessVerdict { flat_exists: flat.flat, witness, all_pairings, predicted_pairings, pairing_tolerance: threshold, flat })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::make_bundle;
    use crate::manifolds::{generate, ManifoldName};

    #[test]
    fn non_closed_gamma_rejected() {
        let k = generate(ManifoldName::S3).unwrap();
        let g = RealCochain::indicator(1, k.count(1), 0);
        assert_eq!(symmetry_from_oneform(&k, g, Tolerance::default()).unwrap_err().code(), "NOT_CLOSED");
    }

    #[test]
    fn trivial_bundle_on_torus_is_flat() {
        let k = generate(ManifoldName::T3).unwrap();
        let b = crate::bundle::U1Bundle::trivial(&k).unwrap();
        let v = sharpness_check(&k, &b, Tolerance::default()).unwrap();
        assert!(v.flat_exists && v.witness.is_none());
        assert_eq!(v.all_pairings.len(), 3);
        assert!(v.all_pairings.iter().all(|p| p.abs() <= 1e-9));
    }

    #[test]
    fn monopole_on_s1xs2() {
        let k = generate(ManifoldName::S1xS2).unwrap();
        let c = cohomology_basis(&k, 2).unwrap().representatives()[0].clone();
        let b = make_bundle(&k, c).unwrap();
        let v = sharpness_check(&k, &b, Tolerance::default()).unwrap();
        assert!(!v.flat_exists);
        let w = v.witness.unwrap();
        assert!((w.pairing.abs() - 4.0 * std::f64::consts::PI).abs() <= 1e-6 * 4.0 * std::f64::consts::PI);
    }
}
