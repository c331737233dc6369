//! Discrete U(1) bundles, connections and the Chern–Simons functional.
//!
//! A bundle is an integer 2-cocycle `c` (its first Chern cocycle). Connections
//! form an affine space over real 1-cochains; the curvature is
//! `F = dA + 2π c`. A connection is stored as `A = a + 2π w` with `a` real and
//! `w` an integer winding 1-cochain, so that large gauge shifts `A -> A + 2π m`
//! act on `w` exactly.

use std::f64::consts::PI;

use num_bigint::BigInt;

use crate::cochain::{IntCochain, RealCochain};
use crate::complex::SimplicialComplex;
use crate::cup::{cup, pair_with_fundamental};
use crate::error::{Error, Result};
use crate::homology::{cohomology_basis, coboundary_solver, IntegralClass};
use crate::tolerance::{norm_inf, Tolerance};

pub const TWO_PI: f64 = 2.0 * PI;

#[derive(Debug, Clone)]
pub struct U1Bundle {
    base: SimplicialComplex,
    c: IntCochain,
}

impl U1Bundle {
    pub fn base(&self) -> &SimplicialComplex {
        &self.base
    }

    pub fn chern_cocycle(&self) -> &IntCochain {
        &self.c
    }

    pub fn trivial(base: &SimplicialComplex) -> Result<U1Bundle> {
        make_bundle(base, IntCochain::zeros(2, base.count(2)))
    }

    /// `2π |c|_inf`
    pub fn curvature_scale(&self) -> f64 {
        TWO_PI * self.c.to_real().norm_inf()
    }
}

/// Validates the cocycle condition `dc = 0` exactly over the integers.
pub fn make_bundle(base: &SimplicialComplex, c: IntCochain) -> Result<U1Bundle> {
    if c.degree() != 2 || base.dim() < 2 {
        return Err(Error::NotACocycle(format!(
            "Chern cocycle must be a 2-cochain on a complex of dimension >= 2 (got degree {} on dimension {})",
            c.degree(),
            base.dim()
        )));
    }
    base.check_len(&c)?;
    if base.dim() > 2 {
        let dc = base.apply_d(&c)?;
        if let Some(pos) = dc.values().iter().position(|v| v != &BigInt::from(0)) {
            return Err(Error::NotACocycle(format!(
                "dc = {} on tetrahedron {:?}",
                dc.values()[pos],
                base.simplex(3, pos)
            )));
        }
    }
    Ok(U1Bundle { base: base.clone(), c })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    real: Vec<f64>,
    winding: Vec<BigInt>,
}

impl Connection {
    pub fn new(a: RealCochain) -> Result<Connection> {
        if a.degree() != 1 {
            return Err(Error::DegreeOutOfRange { degree: a.degree(), allowed: "1".into() });
        }
        let n = a.len();
        Ok(Connection { real: a.into_values(), winding: vec![BigInt::from(0); n] })
    }

    pub fn zero(base: &SimplicialComplex) -> Connection {
        Connection { real: vec![0.0; base.count(1)], winding: vec![BigInt::from(0); base.count(1)] }
    }

    /// The full real 1-cochain `a + 2π w`.
    pub fn values(&self) -> RealCochain {
        let v = self
            .real
            .iter()
            .zip(&self.winding)
            .map(|(a, w)| a + TWO_PI * crate::cochain::Coefficient::to_f64(w))
            .collect();
        RealCochain::new(1, v)
    }

    pub fn real_part(&self) -> RealCochain {
        RealCochain::new(1, self.real.clone())
    }

    pub fn winding(&self) -> IntCochain {
        IntCochain::new(1, self.winding.clone())
    }

    pub fn len(&self) -> usize {
        self.real.len()
    }

    pub fn is_empty(&self) -> bool {
        self.real.is_empty()
    }

    fn check_base(&self, base: &SimplicialComplex) -> Result<()> {
        if self.real.len() != base.count(1) {
            return Err(Error::BaseMismatch(format!(
                "connection has {} entries but the base has {} edges",
                self.real.len(),
                base.count(1)
            )));
        }
        if self.real.iter().any(|v| !v.is_finite()) {
            return Err(Error::BadParameter("connection has non-finite entries".into()));
        }
        Ok(())
    }
}

/// `F = dA + 2π c`; the integer part `dw + c` is formed exactly before scaling.
pub fn curvature(bundle: &U1Bundle, a: &Connection) -> Result<RealCochain> {
    a.check_base(&bundle.base)?;
    let d1 = bundle.base.coboundary(1)?;
    let da = d1.apply(&a.real);
    let dw = d1.apply(&a.winding);
    let values = da
        .iter()
        .zip(dw)
        .zip(bundle.c.values())
        .map(|((x, w), c)| x + TWO_PI * crate::cochain::Coefficient::to_f64(&(w + c)))
        .collect();
    Ok(RealCochain::new(2, values))
}

/// Magnitude of the pieces that cancel in `F`, used to scale tolerances.
pub(crate) fn curvature_scale(bundle: &U1Bundle, a: &Connection) -> Result<f64> {
    let d1 = bundle.base.coboundary(1)?;
    let da = norm_inf(&d1.apply(&a.real));
    let integral: Vec<BigInt> =
        d1.apply(&a.winding).into_iter().zip(bundle.c.values()).map(|(w, c)| w + c).collect();
    let integral = IntCochain::new(2, integral).to_real().norm_inf();
    Ok(da + TWO_PI * integral)
}

/// Coordinates of `[2π c]` in the integer basis of `H^2(X; R)`; equal to `[F]` for every `A`.
pub fn real_chern_class(bundle: &U1Bundle) -> Result<Vec<f64>> {
    let basis = cohomology_basis(&bundle.base, 2)?;
    Ok(basis.coordinates(&bundle.c.to_real()).into_iter().map(|x| TWO_PI * x).collect())
}

/// Exact class of `c` in `H^2(X; Z)`, torsion included.
pub fn integral_chern_class(bundle: &U1Bundle) -> Result<IntegralClass> {
    Ok(cohomology_basis(&bundle.base, 2)?.integral_class(&bundle.c))
}

#[derive(Debug, Clone)]
pub struct FlatResult {
    /// Least-squares minimizer of `|dA + 2π c|_2`.
    pub a_star: Connection,
    /// `|F(a_star)|_inf`
    pub residual: f64,
    pub flat: bool,
    pub obstruction_coords: Vec<f64>,
    /// Threshold the residual was compared against.
    pub threshold: f64,
    pub condition: f64,
}

/// Solves the flatness equation `F_A = 0` in the least-squares sense.
pub fn flatten(bundle: &U1Bundle, tol: Tolerance) -> Result<FlatResult> {
    let base = &bundle.base;
    if base.dim() < 2 {
        return Err(Error::DegreeOutOfRange { degree: 2, allowed: format!("0..={}", base.dim()) });
    }
    let solver = coboundary_solver(base, 1);
    let rhs: Vec<f64> = bundle.c.values().iter().map(|c| -TWO_PI * crate::cochain::Coefficient::to_f64(c)).collect();
    let a_star = Connection::new(RealCochain::new(1, solver.solve(&rhs)))?;
    if a_star.real.iter().any(|v| !v.is_finite()) {
        return Err(Error::SolverFailure(format!("non-finite minimizer (condition {:e})", solver.condition())));
    }
    let f = curvature(bundle, &a_star)?;
    let residual = f.norm_inf();
    let threshold = tol.affine_bound(bundle.curvature_scale());
    let obstruction_coords = real_chern_class(bundle)?;
    Ok(FlatResult {
        a_star,
        residual,
        flat: residual <= threshold,
        obstruction_coords,
        threshold,
        condition: solver.condition(),
    })
}

/// `A' = A + df + 2π m` for a real 0-cochain `f` and an integer 1-cocycle `m`.
pub fn gauge_transform(bundle: &U1Bundle, a: &Connection, f: &RealCochain, m: &IntCochain) -> Result<Connection> {
    let base = &bundle.base;
    a.check_base(base)?;
    if f.degree() != 0 || m.degree() != 1 {
        return Err(Error::BadParameter("gauge parameters must be a 0-cochain and a 1-cochain".into()));
    }
    base.check_len(f)?;
    base.check_len(m)?;
    if !base.apply_d(m)?.is_zero() {
        return Err(Error::MNotCocycle);
    }
    let df = base.apply_d(f)?;
    let real = a.real.iter().zip(df.values()).map(|(x, y)| x + y).collect();
    let winding = a.winding.iter().zip(m.values()).map(|(x, y)| x + y).collect();
    Ok(Connection { real, winding })
}

fn check_cs_base(k: &SimplicialComplex, a: &RealCochain) -> Result<()> {
    if k.dim() != 3 {
        return Err(Error::DegreeOutOfRange { degree: k.dim(), allowed: "3 (Chern–Simons needs a 3-manifold)".into() });
    }
    k.fundamental_cycle()?;
    if a.degree() != 1 {
        return Err(Error::DegreeOutOfRange { degree: a.degree(), allowed: "1".into() });
    }
    k.check_len(a)
}

/// `S(A) = <A ∪ dA, [X]>` on a trivialized bundle.
pub fn cs_action(k: &SimplicialComplex, a: &RealCochain) -> Result<f64> {
    check_cs_base(k, a)?;
    let da = k.apply_d(a)?;
    pair_with_fundamental(k, &cup(k, a, &da)?)
}

/// Exact gradient of [`cs_action`] with respect to the edge values of `A`.
///
/// With `e_s` the fundamental-cycle sign of the tetrahedron `s`, front edge
/// `f(s)` and back triangle `b(s)`:
/// `S = sum_s e_s A(f(s)) dA(b(s))`, so the gradient collects
/// `e_s dA(b(s))` on `f(s)` and `d^T` of `w(b) = sum e_s A(f(s))`.
pub fn cs_gradient(k: &SimplicialComplex, a: &RealCochain) -> Result<RealCochain> {
    check_cs_base(k, a)?;
    let z = k.fundamental_cycle()?;
    let da = k.apply_d(a)?;
    let table = k.front_back(3, 1);
    let mut grad = vec![0.0; k.count(1)];
    let mut w = vec![0.0; k.count(2)];
    for (&(front, back), &e) in table.iter().zip(z.coefficients()) {
        let e = e as f64;
        grad[front] += e * da.values()[back];
        w[back] += e * a.values()[front];
    }
    let back_term = k.coboundary(1)?.apply_transpose(&w);
    for (g, b) in grad.iter_mut().zip(back_term) {
        *g += b;
    }
    Ok(RealCochain::new(1, grad))
}

/// Compares [`cs_gradient`] with central finite differences of [`cs_action`]
/// at step `h`. Returns `|g - g_fd|_inf / max(|g|_inf, |g_fd|_inf)`, or 0 when
/// both vanish.
pub fn cs_gradient_fd_error(k: &SimplicialComplex, a: &RealCochain, h: f64) -> Result<f64> {
    let g = cs_gradient(k, a)?;
    let mut fd = vec![0.0; a.len()];
    let mut probe = a.clone();
    for (e, slot) in fd.iter_mut().enumerate() {
        let orig = probe.values()[e];
        probe.values_mut()[e] = orig + h;
        let up = cs_action(k, &probe)?;
        probe.values_mut()[e] = orig - h;
        let down = cs_action(k, &probe)?;
        probe.values_mut()[e] = orig;
        *slot = (up - down) / (2.0 * h);
    }
    let fd = RealCochain::new(1, fd);
    let scale = g.norm_inf().max(fd.norm_inf());
    Ok(if scale == 0.0 { 0.0 } else { g.max_abs_diff(&fd) / scale })
}
