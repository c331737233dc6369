use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use varobs::bundle::{cs_gradient, cs_gradient_fd_error, flatten, integral_chern_class, make_bundle, real_chern_class, U1Bundle};
use varobs::cech::{connecting_delta, current_globality, star_cover, TieBreak};
use varobs::cup::poincare_pairing_matrix;
use varobs::homology::{cohomology_basis, find_primitive, homology_groups, Primitive};
use varobs::io::{complex_to_json, int_cochain_to_json, load_cochain, load_complex, AnyCochain};
use varobs::manifolds::{generate, ManifoldName};
use varobs::obstruction::{
    obstruction_class, obstruction_pairing, pairing_tolerance, sharpness_check, symmetry_from_oneform,
    symmetry_with_provenance,
};
use varobs::{RealCochain, SimplicialComplex, Tolerance};

use crate::report::{big, bigs, Input, Report};
use crate::{CliError, Command};

/// Seed for the random connections in `cs-grad-check`; fixed so reports are reproducible.
const FD_SEED: u64 = 0x5eed;
const FD_SAMPLES: usize = 5;
const FD_STEP: f64 = 1e-6;

pub fn run(command: &Command, args: &[String], tol: Tolerance) -> Result<String, CliError> {
    match command {
        Command::Generate { name } => {
            let name: ManifoldName = name.parse()?;
            let mut s = complex_to_json(&generate(name)?);
            s.push('\n');
            Ok(s)
        }
        Command::Basis { complex, degree, index } => {
            let (_, k) = read_complex(complex)?;
            let basis = cohomology_basis(&k, *degree)?;
            let g = basis.representatives().get(*index).ok_or_else(|| {
                CliError::new(
                    "BAD_PARAMETER",
                    format!("index {index} out of range: H^{degree} has rank {}", basis.betti()),
                )
            })?;
            let mut s = int_cochain_to_json(g);
            s.push('\n');
            Ok(s)
        }
        Command::Homology { complex, degree, ring } => {
            let (input, k) = read_complex(complex)?;
            let mut r = Report::new("homology", args, tol);
            r.input(&input);
            let degrees: Vec<usize> = match degree {
                Some(d) => vec![*d],
                None => (0..=k.dim()).collect(),
            };
            let mut groups = Vec::new();
            for d in degrees {
                let g = homology_groups(&k, d, *ring)?;
                groups.push(json!({ "degree": d, "betti": g.betti, "torsion": bigs(&g.torsion) }));
            }
            r.verdict("closed_oriented", k.is_closed_oriented());
            r.data("ring", ring.to_string());
            r.data("f_vector", k.f_vector());
            r.data("groups", groups);
            Ok(r.render())
        }
        Command::Primitive { complex, cochain } => {
            let (ci, k) = read_complex(complex)?;
            let (wi, omega) = read_cochain(cochain)?;
            let mut r = Report::new("primitive", args, tol);
            r.input(&ci);
            r.input(&wi);
            match find_primitive(&k, &omega.to_real(), tol)? {
                Primitive::Exact(beta) => {
                    r.verdict("exact", true);
                    r.data("primitive", beta.values());
                }
                Primitive::Obstructed { coordinates } => {
                    r.verdict("exact", false);
                    r.data("class_coordinates", coordinates);
                }
            }
            Ok(r.render())
        }
        Command::Pairing { complex, degree } => {
            let (ci, k) = read_complex(complex)?;
            let pm = poincare_pairing_matrix(&k, *degree)?;
            let mut r = Report::new("pairing", args, tol);
            r.input(&ci);
            r.verdict("nondegenerate", pm.nondegenerate);
            r.data("degrees", vec![pm.degrees.0, pm.degrees.1]);
            r.data("rank", pm.rank);
            let rows: Vec<Vec<f64>> =
                (0..pm.matrix.nrows()).map(|i| (0..pm.matrix.ncols()).map(|j| pm.matrix[(i, j)]).collect()).collect();
            r.data("matrix", rows);
            Ok(r.render())
        }
        Command::Chern { complex, cocycle } => {
            let (ci, k) = read_complex(complex)?;
            let (bi, bundle) = read_bundle(&k, cocycle)?;
            let real = real_chern_class(&bundle)?;
            let integral = integral_chern_class(&bundle)?;
            let bound = tol.bound(bundle.curvature_scale());
            let mut r = Report::new("chern", args, tol);
            r.input(&ci);
            r.input(&bi);
            r.verdict("real_class_vanishes", real.iter().all(|c| c.abs() <= bound));
            r.verdict("integral_class_vanishes", integral.is_zero());
            r.data("real_class", real);
            r.data("integral_free", bigs(&integral.free));
            let torsion: Vec<Value> =
                integral.torsion.iter().map(|(o, v)| json!({ "order": big(o), "residue": big(v) })).collect();
            r.data("integral_torsion", torsion);
            Ok(r.render())
        }
        Command::Flatten { complex, cocycle } => {
            let (ci, k) = read_complex(complex)?;
            let (bi, bundle) = read_bundle(&k, cocycle)?;
            let f = flatten(&bundle, tol)?;
            let mut r = Report::new("flatten", args, tol);
            r.input(&ci);
            r.input(&bi);
            r.verdict("flat", f.flat);
            r.data("residual", f.residual);
            r.data("threshold", f.threshold);
            r.data("condition", f.condition);
            r.data("obstruction_coords", f.obstruction_coords);
            r.data("a_star", f.a_star.values().values());
            Ok(r.render())
        }
        Command::CsGradCheck { complex } => {
            let (ci, k) = read_complex(complex)?;
            let mut rng = ChaCha8Rng::seed_from_u64(FD_SEED);
            let mut errors = Vec::with_capacity(FD_SAMPLES);
            for _ in 0..FD_SAMPLES {
                let a = RealCochain::new(1, (0..k.count(1)).map(|_| rng.gen_range(-1.0..1.0)).collect());
                errors.push(cs_gradient_fd_error(&k, &a, FD_STEP)?);
            }
            let f = RealCochain::new(0, (0..k.count(0)).map(|_| rng.gen_range(-1.0..1.0)).collect());
            let closed = k.apply_d(&f)?;
            let closed_grad = cs_gradient(&k, &closed)?.norm_inf();
            let max_error = errors.iter().fold(0.0_f64, |m, e| m.max(*e));
            let mut r = Report::new("cs-grad-check", args, tol);
            r.input(&ci);
            r.verdict("gradient_matches_fd", max_error <= 1e-6);
            r.verdict("closed_gradient_vanishes", closed_grad <= 1e-10);
            r.data("fd_step", FD_STEP);
            r.data("samples", FD_SAMPLES);
            r.data("max_relative_error", max_error);
            r.data("relative_errors", errors);
            r.data("closed_gradient_norm", closed_grad);
            Ok(r.render())
        }
        Command::Obstruction { complex, cocycle, gamma } => {
            let (ci, k) = read_complex(complex)?;
            let (bi, bundle) = read_bundle(&k, cocycle)?;
            let mut r = Report::new("obstruction", args, tol);
            r.input(&ci);
            r.input(&bi);
            let symmetries = match gamma {
                Some(path) => {
                    let (gi, g) = read_cochain(path)?;
                    r.input(&gi);
                    vec![symmetry_from_oneform(&k, g.to_real(), tol)?]
                }
                None => cohomology_basis(&k, 1)?
                    .real_representatives()
                    .into_iter()
                    .enumerate()
                    .map(|(i, g)| symmetry_with_provenance(&k, g, tol, &format!("H^1 basis element {i}")))
                    .collect::<Result<_, _>>()?,
            };
            let f = flatten(&bundle, tol)?;
            let mut rows = Vec::new();
            let mut obstructed = false;
            for sym in &symmetries {
                let p = obstruction_pairing(&k, sym, &bundle, &f.a_star)?;
                let class = obstruction_class(&k, sym, &bundle, &f.a_star)?;
                let t = pairing_tolerance(&k, sym, &bundle, &f.a_star, tol)?;
                obstructed |= p.abs() > t;
                rows.push(json!({ "gamma": sym.provenance, "pairing": p, "class": class, "threshold": t }));
            }
            r.verdict("obstructed", obstructed);
            r.verdict("flat", f.flat);
            r.data("pairings", rows);
            Ok(r.render())
        }
        Command::Sharpness { complex, cocycle } => {
            let (ci, k) = read_complex(complex)?;
            let (bi, bundle) = read_bundle(&k, cocycle)?;
            let v = sharpness_check(&k, &bundle, tol)?;
            let mut r = Report::new("sharpness", args, tol);
            r.input(&ci);
            r.input(&bi);
            r.verdict("flat_exists", v.flat_exists);
            r.verdict("witness_found", v.witness.is_some());
            r.data("residual", v.flat.residual);
            r.data("pairing_tolerance", v.pairing_tolerance);
            r.data("all_pairings", v.all_pairings);
            r.data("predicted_pairings", v.predicted_pairings);
            r.data("obstruction_coords", v.flat.obstruction_coords);
            let witness = match &v.witness {
                Some(w) => json!({ "basis_index": w.basis_index, "pairing": w.pairing, "gamma": w.gamma.values() }),
                None => Value::Null,
            };
            r.data("witness", witness);
            Ok(r.render())
        }
        Command::CechDelta { complex, cochain } => {
            let (ci, k) = read_complex(complex)?;
            let (wi, omega) = read_cochain(cochain)?;
            let omega = omega.to_real();
            let cover = star_cover(&k)?;
            let c = connecting_delta(&cover, &omega, tol, TieBreak::default())?;
            let simplicial = cohomology_basis(&k, omega.degree())?.coordinates(&omega);
            let discrepancy = c.coordinates.iter().zip(&simplicial).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
            let bound = tol.bound(omega.norm_inf());
            let mut r = Report::new("cech-delta", args, tol);
            r.input(&ci);
            r.input(&wi);
            r.verdict("agrees_with_simplicial", discrepancy <= bound);
            r.verdict("class_vanishes", c.coordinates.iter().all(|x| x.abs() <= bound));
            r.data("cech_degree", c.degree);
            r.data("nerve_sign", c.nerve_sign);
            r.data("cech_coordinates", c.coordinates);
            r.data("simplicial_coordinates", simplicial);
            r.data("discrepancy", discrepancy);
            r.data("cocycle_defect", c.cocycle_defect);
            r.data("constancy_defect", c.constancy_defect);
            r.data("cover_size", cover.len());
            Ok(r.render())
        }
        Command::Current { complex, cochain } => {
            let (ci, k) = read_complex(complex)?;
            let (wi, omega) = read_cochain(cochain)?;
            let cover = star_cover(&k)?;
            let g = current_globality(&cover, &omega.to_real(), tol, TieBreak::default())?;
            let mut r = Report::new("current", args, tol);
            r.input(&ci);
            r.input(&wi);
            r.verdict("globalizable", g.globalizable());
            r.verdict("cech_class_vanishes", g.cech_vanishes);
            r.data("cech_coordinates", g.cech.coordinates.clone());
            r.data("simplicial_coordinates", g.simplicial_coordinates.clone());
            r.data("discrepancy", g.discrepancy);
            r.data("threshold", g.threshold);
            r.data("global_current", g.global_current.as_ref().map(|c| c.values().to_vec()));
            Ok(r.render())
        }
    }
}

fn read_complex(path: &Path) -> Result<(Input, SimplicialComplex), CliError> {
    let input = Input::read(path)?;
    let k = load_complex(&input.text).map_err(|e| name_input(e.into(), path))?;
    Ok((input, k))
}

fn read_cochain(path: &Path) -> Result<(Input, AnyCochain), CliError> {
    let input = Input::read(path)?;
    let c = load_cochain(&input.text).map_err(|e| name_input(e.into(), path))?;
    Ok((input, c))
}

fn read_bundle(k: &SimplicialComplex, path: &Path) -> Result<(Input, U1Bundle), CliError> {
    let (input, c) = read_cochain(path)?;
    let AnyCochain::Int(c) = c else {
        return Err(CliError::new("BAD_PARAMETER", format!("{}: a Chern cocycle must have ring \"int\"", path.display())));
    };
    let bundle = make_bundle(k, c).map_err(|e| name_input(e.into(), path))?;
    Ok((input, bundle))
}

fn name_input(mut e: CliError, path: &Path) -> CliError {
    e.message = format!("{}: {}", path.display(), e.message);
    e
}
