//! Acceptance criteria. Each criterion prints one PASS or FAIL line; the
//! process exits non-zero if any fails.

mod common;

use std::f64::consts::PI;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use varobs::bundle::{
    curvature, cs_gradient, cs_gradient_fd_error, flatten, gauge_transform, integral_chern_class, make_bundle,
    Connection, U1Bundle,
};
use varobs::cech::{connecting_delta, current_globality, star_cover, TieBreak};
use varobs::cup::{cup, poincare_pairing_matrix};
use varobs::error::Error;
use varobs::homology::{betti_numbers, class_coordinates, cohomology_basis, homology_groups};
use varobs::manifolds::{generate, ManifoldName};
use varobs::obstruction::{obstruction_pairing, pairing_tolerance, sharpness_check, symmetry_from_oneform};
use varobs::{IntCochain, RealCochain, Ring, SimplicialComplex, Tolerance};

use common::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("topology baseline", topology_baseline),
        ("structural identities", structural_identities),
        ("flatness iff vanishing pairings", sharpness_biconditional),
        ("flat implies conserved quantities", flat_implies_conserved),
        ("torsion bundle on RP3 is flat", torsion_discrimination),
        ("Cech and simplicial classes agree", cech_agreement),
        ("Chern-Simons gradient", variational_check),
        ("gauge invariance", gauge_invariance),
    ];
    let mut err = std::io::stderr();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        let _ = match outcome {
            Ok(detail) => writeln!(err, "PASS criterion {}: {name} ({detail}; {secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                writeln!(err, "FAIL criterion {}: {name}: {why} ({secs:.1}s)", i + 1)
            }
        };
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

// ---------------------------------------------------------------------------
// 1. Topology baseline

/// Elementary divisors by plain Euclidean row and column reduction over i128.
/// Written independently of the library's elimination.
fn oracle_divisors(k: &SimplicialComplex, degree: usize) -> Vec<i128> {
    let d = k.coboundary(degree).unwrap();
    let (rows, cols) = (d.rows(), d.cols());
    let mut a = vec![vec![0i128; cols]; rows];
    for (r, row) in a.iter_mut().enumerate() {
        for (c, s) in d.row(r) {
            row[c] = i128::from(s);
        }
    }
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, v) in row.iter().enumerate().skip(t) {
                if *v != 0 && best.map_or(true, |(bi, bj)| v.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t] != 0 {
                    let q = a[i][t] / a[t][t];
                    for j in t..cols {
                        a[i][j] = a[i][j].checked_sub(q.checked_mul(a[t][j]).unwrap()).unwrap();
                    }
                    if a[i][t] != 0 {
                        a.swap(i, t);
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if a[t][j] != 0 {
                    let q = a[t][j] / a[t][t];
                    for row in a.iter_mut().skip(t) {
                        row[j] = row[j].checked_sub(q.checked_mul(row[t]).unwrap()).unwrap();
                    }
                    if a[t][j] != 0 {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                        clean = false;
                    }
                }
            }
            if clean {
                let p = a[t][t];
                if let Some(i) = (t + 1..rows).find(|&i| a[i].iter().skip(t + 1).any(|v| v % p != 0)) {
                    for j in t..cols {
                        a[t][j] += a[i][j];
                    }
                    continue;
                }
                break;
            }
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}

fn topology_baseline() -> Outcome {
    let expected = [
        (ManifoldName::S3, vec![1, 0, 0, 1]),
        (ManifoldName::T3, vec![1, 3, 3, 1]),
        (ManifoldName::S1xS2, vec![1, 1, 1, 1]),
        (ManifoldName::RP3, vec![1, 0, 0, 1]),
    ];
    for (name, betti) in expected {
        let k = generate(name).unwrap();
        let divisors: Vec<Vec<i128>> = (0..k.dim()).map(|d| oracle_divisors(&k, d)).collect();
        let rank = |d: usize| divisors.get(d).map_or(0, Vec::len);
        let oracle: Vec<usize> =
            (0..=k.dim()).map(|d| k.count(d) - rank(d) - if d == 0 { 0 } else { rank(d - 1) }).collect();
        ensure(oracle == betti, || format!("{name}: oracle Betti {oracle:?}, expected {betti:?}"))?;
        let lib = betti_numbers(&k);
        ensure(lib == betti, || format!("{name}: library Betti {lib:?}, expected {betti:?}"))?;
        for d in 0..=k.dim() {
            let real = homology_groups(&k, d, Ring::Real).unwrap().betti;
            ensure(real == betti[d], || format!("{name}: real Betti in degree {d} is {real}"))?;
            // torsion of H^d comes from d_{d-1}
            let lib_torsion: Vec<i128> =
                homology_groups(&k, d, Ring::Int).unwrap().torsion.iter().map(|t| t.to_i128().unwrap()).collect();
            let oracle_torsion: Vec<i128> = if d == 0 {
                Vec::new()
            } else {
                divisors[d - 1].iter().copied().filter(|&v| v > 1).collect()
            };
            ensure(lib_torsion == oracle_torsion, || {
                format!("{name}: H^{d} torsion {lib_torsion:?} vs oracle {oracle_torsion:?}")
            })?;
        }
    }
    // RP3: H_1 = Z/2 (divisors of the boundary map C_2 -> C_1, the transpose of
    // d_1) and H^2 = Z/2, with H^1 torsion-free.
    let rp3 = generate(ManifoldName::RP3).unwrap();
    let h1_homology: Vec<i128> = oracle_divisors(&rp3, 1).into_iter().filter(|&v| v > 1).collect();
    ensure(h1_homology == vec![2], || format!("RP3 H_1 torsion {h1_homology:?}"))?;
    let h2 = homology_groups(&rp3, 2, Ring::Int).unwrap().torsion;
    ensure(h2 == vec![BigInt::from(2)], || format!("RP3 H^2 torsion {h2:?}"))?;
    let h1 = homology_groups(&rp3, 1, Ring::Int).unwrap().torsion;
    ensure(h1.is_empty(), || format!("RP3 H^1 torsion {h1:?}"))?;
    Ok("Betti numbers match the oracle on 4 fixtures; RP3 torsion Z/2 in H_1 and H^2".into())
}

// ---------------------------------------------------------------------------
// 2. Structural identities

fn structural_identities() -> Outcome {
    let mut rng = rng(2);
    let pairs = [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)];
    let mut worst = 0.0_f64;
    for (name, k) in three_manifolds() {
        for d in 0..k.dim() - 1 {
            let dd = k.coboundary_matrix(d + 1).unwrap().mul(&k.coboundary_matrix(d).unwrap());
            ensure(dd.max_abs_entry() == BigInt::from(0), || format!("{name}: d_{} d_{d} != 0", d + 1))?;
        }
        for trial in 0..100 {
            let (p, q) = pairs[trial % pairs.len()];
            let a = random_real(&mut rng, p, k.count(p));
            let b = random_real(&mut rng, q, k.count(q));
            let lhs = k.apply_d(&cup(&k, &a, &b).unwrap()).unwrap();
            let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
            let rhs = cup(&k, &k.apply_d(&a).unwrap(), &b)
                .unwrap()
                .plus(&cup(&k, &a, &k.apply_d(&b).unwrap()).unwrap().scaled(&sign));
            let scale = 1.0 + lhs.norm_inf().max(rhs.norm_inf());
            let err = lhs.max_abs_diff(&rhs) / scale;
            worst = worst.max(err);
            ensure(err <= 1e-12, || format!("{name}: Leibniz defect {err:e} for degrees ({p}, {q})"))?;
            let ai = random_int(&mut rng, p, k.count(p), 5);
            let bi = random_int(&mut rng, q, k.count(q), 5);
            let sign = BigInt::from(if p % 2 == 0 { 1 } else { -1 });
            let lhs = k.apply_d(&cup(&k, &ai, &bi).unwrap()).unwrap();
            let rhs = cup(&k, &k.apply_d(&ai).unwrap(), &bi)
                .unwrap()
                .plus(&cup(&k, &ai, &k.apply_d(&bi).unwrap()).unwrap().scaled(&sign));
            ensure(lhs == rhs, || format!("{name}: integer Leibniz fails for degrees ({p}, {q})"))?;
        }
        for d in 0..=k.dim() {
            let pm = poincare_pairing_matrix(&k, d).unwrap();
            ensure(pm.nondegenerate, || format!("{name}: pairing H^{d} x H^{} degenerate", k.dim() - d))?;
        }
    }
    Ok(format!("d∘d = 0 exactly; 400 Leibniz pairs, worst {worst:.1e}; all pairings nondegenerate"))
}

// ---------------------------------------------------------------------------
// 3. Flatness versus pairings

fn sharpness_biconditional() -> Outcome {
    let tol = Tolerance::default();
    let mut rng = rng(3);
    let (mut flat_runs, mut nonflat_runs) = (0, 0);
    let mut weakest_ratio = f64::INFINITY;
    for name in [ManifoldName::T3, ManifoldName::S1xS2] {
        let k = generate(name).unwrap();
        for trial in 0..60 {
            let (c, n) = random_int_cocycle(&mut rng, &k, 2);
            let bundle = make_bundle(&k, c).unwrap();
            let f = flatten(&bundle, tol).unwrap();
            let mut pairings = Vec::new();
            let mut threshold = tol.abs;
            for g in cohomology_basis(&k, 1).unwrap().real_representatives() {
                let sym = symmetry_from_oneform(&k, g, tol).unwrap();
                pairings.push(obstruction_pairing(&k, &sym, &bundle, &f.a_star).unwrap());
                threshold = threshold.max(pairing_tolerance(&k, &sym, &bundle, &f.a_star, tol).unwrap());
            }
            let vanish = pairings.iter().all(|p| p.abs() <= threshold);
            let trivial_class = n.iter().all(|&x| x == 0);
            ensure(f.flat == vanish, || {
                format!("{name} trial {trial}: flat = {} but pairings {pairings:?} (threshold {threshold:e})", f.flat)
            })?;
            ensure(f.flat == trivial_class, || format!("{name} trial {trial}: flat = {} for class {n:?}", f.flat))?;
            let verdict = sharpness_check(&k, &bundle, tol).map_err(|e| format!("{name} trial {trial}: {e}"))?;
            ensure(verdict.flat_exists == f.flat && verdict.witness.is_some() != f.flat, || {
                format!("{name} trial {trial}: sharpness verdict disagrees")
            })?;
            if f.flat {
                flat_runs += 1;
            } else {
                nonflat_runs += 1;
                let w = verdict.witness.unwrap().pairing.abs();
                weakest_ratio = weakest_ratio.min(w / threshold);
                ensure(w >= 1e3 * threshold, || format!("{name} trial {trial}: witness {w:e} vs threshold {threshold:e}"))?;
            }
        }
    }
    let k = generate(ManifoldName::S1xS2).unwrap();
    let monopole = make_bundle(&k, cohomology_basis(&k, 2).unwrap().representatives()[0].clone()).unwrap();
    let w = sharpness_check(&k, &monopole, tol).unwrap().witness.ok_or("monopole has no witness")?.pairing;
    let rel = (w.abs() - 4.0 * PI).abs() / (4.0 * PI);
    ensure(rel <= 1e-6, || format!("monopole witness {w} is not ±4π (rel {rel:e})"))?;
    ensure(flat_runs > 0 && nonflat_runs > 0, || "random sample lacks flat or non-flat cases".into())?;
    Ok(format!(
        "{flat_runs} flat, {nonflat_runs} non-flat; min witness/threshold {weakest_ratio:.1e}; monopole {w:.12}"
    ))
}

// ---------------------------------------------------------------------------
// 4. Flat bundles have vanishing pairings

fn flat_implies_conserved() -> Outcome {
    let tol = Tolerance::default();
    let mut rng = rng(4);
    let mut checked = 0;
    for (name, k) in three_manifolds() {
        let cover = star_cover(&k).unwrap();
        let torsion: Vec<IntCochain> =
            cohomology_basis(&k, 2).unwrap().torsion_generators().iter().map(|(_, g)| g.clone()).collect();
        for trial in 0..15 {
            let (mut c, _) = random_int_cocycle(&mut rng, &k, 2);
            if let Some(t) = torsion.first() {
                if trial % 2 == 0 {
                    c = c.plus(t);
                }
            }
            let bundle = make_bundle(&k, c).unwrap();
            let f = flatten(&bundle, tol).unwrap();
            if !f.flat {
                continue;
            }
            let mut gammas = cohomology_basis(&k, 1).unwrap().real_representatives();
            gammas.push(random_closed_real(&mut rng, &k, 1, false));
            for g in gammas {
                let sym = symmetry_from_oneform(&k, g.clone(), tol).unwrap();
                let p = obstruction_pairing(&k, &sym, &bundle, &f.a_star).unwrap();
                let t = pairing_tolerance(&k, &sym, &bundle, &f.a_star, tol).unwrap();
                ensure(p.abs() <= t, || format!("{name} trial {trial}: flat bundle with pairing {p:e} > {t:e}"))?;
                let omega = cup(&k, &g, &curvature(&bundle, &f.a_star).unwrap()).unwrap();
                let local = Tolerance { rel: tol.rel, abs: t };
                let report = current_globality(&cover, &omega, local, TieBreak::default())
                    .map_err(|e| format!("{name} trial {trial}: {e}"))?;
                ensure(report.globalizable() && report.cech_vanishes, || {
                    format!("{name} trial {trial}: current not globalizable, class {:?}", report.cech.coordinates)
                })?;
                checked += 1;
            }
        }
    }
    ensure(checked > 0, || "no flat runs".into())?;
    Ok(format!("{checked} (flat bundle, γ) runs: pairings vanish and currents globalize"))
}

// ---------------------------------------------------------------------------
// 5. Torsion discrimination

fn torsion_discrimination() -> Outcome {
    let k = generate(ManifoldName::RP3).unwrap();
    let basis = cohomology_basis(&k, 2).unwrap();
    let (order, c) = basis.torsion_generators().first().cloned().ok_or("RP3 has no torsion generator")?;
    ensure(order == BigInt::from(2), || format!("torsion order {order}"))?;
    let bundle = make_bundle(&k, c).unwrap();
    let class = integral_chern_class(&bundle).unwrap();
    ensure(!class.is_zero(), || "integral Chern class vanishes".into())?;
    let f = flatten(&bundle, Tolerance::default()).unwrap();
    ensure(f.flat && f.residual <= 1e-9, || format!("residual {:e}", f.residual))?;
    let v = sharpness_check(&k, &bundle, Tolerance::default()).unwrap();
    ensure(v.flat_exists && v.witness.is_none(), || "sharpness verdict is not flat".into())?;
    Ok(format!("integral class {:?}, residual {:.1e}", class.torsion, f.residual))
}

// ---------------------------------------------------------------------------
// 6. Čech–de Rham agreement

fn cech_agreement() -> Outcome {
    let tol = Tolerance::default();
    let mut rng = rng(6);
    let mut count = 0;
    let mut worst = 0.0_f64;
    for (name, k) in three_manifolds() {
        let cover = star_cover(&k).unwrap();
        for degree in [1, 2] {
            for trial in 0..30 {
                let exact = trial % 3 == 0;
                let omega = random_closed_real(&mut rng, &k, degree, exact);
                let simplicial = class_coordinates(&k, &omega).unwrap();
                let a = connecting_delta(&cover, &omega, tol, TieBreak::default()).unwrap();
                let b = connecting_delta(&cover, &omega, tol, TieBreak(Some(rng.gen()))).unwrap();
                for ((x, y), s) in a.coordinates.iter().zip(&b.coordinates).zip(&simplicial) {
                    let err = (x - s).abs().max((y - s).abs());
                    worst = worst.max(err);
                    ensure(err <= 1e-8, || {
                        format!("{name} degree {degree}: Čech {:?} / {:?} vs {simplicial:?}", a.coordinates, b.coordinates)
                    })?;
                }
                let report = current_globality(&cover, &omega, tol, TieBreak::default());
                let report = match report {
                    Err(Error::VerdictInconsistent(m)) => return Err(format!("{name}: verdicts disagree: {m}")),
                    other => other.unwrap(),
                };
                let expect_global = exact || k.count(degree) == 0 || simplicial.is_empty();
                ensure(report.globalizable() == expect_global, || {
                    format!("{name} degree {degree}: globalizable = {}", report.globalizable())
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} closed cochains, worst coordinate error {worst:.1e}, verdicts always agree"))
}

// ---------------------------------------------------------------------------
// 7. Variational check

fn variational_check() -> Outcome {
    let mut rng = rng(7);
    let mut worst_fd = 0.0_f64;
    let mut worst_closed = 0.0_f64;
    for name in [ManifoldName::S3, ManifoldName::T3] {
        let k = generate(name).unwrap();
        for _ in 0..20 {
            let a = random_real(&mut rng, 1, k.count(1));
            let e = cs_gradient_fd_error(&k, &a, 1e-6).unwrap();
            worst_fd = worst_fd.max(e);
            ensure(e <= 1e-6, || format!("{name}: finite-difference error {e:e}"))?;
            let closed = random_closed_real(&mut rng, &k, 1, false);
            let g = cs_gradient(&k, &closed).unwrap().norm_inf();
            worst_closed = worst_closed.max(g);
            ensure(g <= 1e-10, || format!("{name}: gradient {g:e} at a closed connection"))?;
        }
    }
    Ok(format!("worst relative FD error {worst_fd:.1e}; worst closed-A gradient {worst_closed:.1e}"))
}

// ---------------------------------------------------------------------------
// 8. Gauge invariance

fn random_integer_cocycle_1(rng: &mut rand_chacha::ChaCha8Rng, k: &SimplicialComplex) -> IntCochain {
    random_int_cocycle(rng, k, 1).0
}

fn gauge_invariance() -> Outcome {
    let tol = Tolerance::default();
    let mut rng = rng(8);
    let mut worst_df = 0.0_f64;
    let mut worst_pairing = 0.0_f64;
    for (name, k) in three_manifolds() {
        for trial in 0..20 {
            let (c, _) = random_int_cocycle(&mut rng, &k, 2);
            let bundle: U1Bundle = make_bundle(&k, c).unwrap();
            let zero_f = RealCochain::zeros(0, k.count(0));
            let a = gauge_transform(
                &bundle,
                &Connection::new(random_real(&mut rng, 1, k.count(1))).unwrap(),
                &zero_f,
                &random_integer_cocycle_1(&mut rng, &k),
            )
            .unwrap();
            let base = curvature(&bundle, &a).unwrap();

            let m = random_integer_cocycle_1(&mut rng, &k);
            let shifted = gauge_transform(&bundle, &a, &zero_f, &m).unwrap();
            ensure(curvature(&bundle, &shifted).unwrap() == base, || {
                format!("{name} trial {trial}: 2π m shift changes the curvature")
            })?;

            let f = random_real(&mut rng, 0, k.count(0));
            let moved = gauge_transform(&bundle, &a, &f, &m).unwrap();
            let diff = curvature(&bundle, &moved).unwrap().max_abs_diff(&base);
            worst_df = worst_df.max(diff);
            ensure(diff <= 1e-12, || format!("{name} trial {trial}: df changes the curvature by {diff:e}"))?;

            let g = random_closed_real(&mut rng, &k, 1, false);
            let sym = symmetry_from_oneform(&k, g.clone(), tol).unwrap();
            let p0 = obstruction_pairing(&k, &sym, &bundle, &a).unwrap();
            let h = random_real(&mut rng, 0, k.count(0));
            let sym_h = symmetry_from_oneform(&k, g.plus(&k.apply_d(&h).unwrap()), tol).unwrap();
            let perturbed = Connection::new(a.values().plus(&random_real(&mut rng, 1, k.count(1)))).unwrap();
            let variants = [
                obstruction_pairing(&k, &sym_h, &bundle, &a).unwrap(),
                obstruction_pairing(&k, &sym, &bundle, &moved).unwrap(),
                obstruction_pairing(&k, &sym, &bundle, &perturbed).unwrap(),
                obstruction_pairing(&k, &sym_h, &bundle, &perturbed).unwrap(),
            ];
            for p in variants {
                let rel = (p - p0).abs() / p0.abs().max(1.0);
                worst_pairing = worst_pairing.max(rel);
                ensure(rel <= 1e-8, || format!("{name} trial {trial}: pairing {p} vs {p0}"))?;
            }
        }
    }
    Ok(format!("2πm shift exact; worst df drift {worst_df:.1e}; worst pairing drift {worst_pairing:.1e}"))
}
