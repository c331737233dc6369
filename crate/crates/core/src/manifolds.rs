//! Closed oriented test manifolds: S³, T³, S¹×S², RP³, circles and the 2-sphere.

use std::collections::BTreeSet;
use std::str::FromStr;

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ManifoldName {
    S3,
    T3,
    S1xS2,
    RP3,
    Circle(usize),
    Sphere2,
}

impl FromStr for ManifoldName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let name = match lower.as_str() {
            "s3" => ManifoldName::S3,
            "t3" => ManifoldName::T3,
            "s1xs2" => ManifoldName::S1xS2,
            "rp3" => ManifoldName::RP3,
            "sphere2" | "s2" => ManifoldName::Sphere2,
            other => {
                let Some(rest) = other.strip_prefix("circle") else {
                    return Err(Error::UnknownName(s.to_string()));
                };
                let digits = rest.trim_start_matches([':', '(', '-']).trim_end_matches(')');
                let n: usize =
                    digits.parse().map_err(|_| Error::BadParameter(format!("circle size {digits:?} is not a number")))?;
                ManifoldName::Circle(n)
            }
        };
        Ok(name)
    }
}

impl std::fmt::Display for ManifoldName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ManifoldName::S3 => f.write_str("s3"),
            ManifoldName::T3 => f.write_str("t3"),
            ManifoldName::S1xS2 => f.write_str("s1xs2"),
            ManifoldName::RP3 => f.write_str("rp3"),
            ManifoldName::Circle(n) => write!(f, "circle({n})"),
            ManifoldName::Sphere2 => f.write_str("sphere2"),
        }
    }
}

/// Builds the named manifold with its orientation stored.
pub fn generate(name: ManifoldName) -> Result<SimplicialComplex> {
    let k = match name {
        ManifoldName::Circle(n) => circle(n)?,
        ManifoldName::Sphere2 => simplex_boundary(3),
        ManifoldName::S3 => simplex_boundary(4),
        ManifoldName::T3 => {
            let c = circle(3)?;
            ordered_product(&ordered_product(&c, &c)?, &c)?
        }
        ManifoldName::S1xS2 => ordered_product(&circle(3)?, &simplex_boundary(3))?,
        ManifoldName::RP3 => SimplicialComplex::new(3, RP3_FACETS.iter().map(|t| t.to_vec()).collect())?,
    };
    k.oriented()
}

fn circle(n: usize) -> Result<SimplicialComplex> {
    if n < 3 {
        return Err(Error::BadParameter(format!("circle needs at least 3 vertices, got {n}")));
    }
    let edges = (0..n).map(|i| if i + 1 < n { vec![i, i + 1] } else { vec![0, n - 1] }).collect();
    SimplicialComplex::new(1, edges)
}

/// Boundary of the `n`-simplex on vertices `0..=n`.
fn simplex_boundary(n: usize) -> SimplicialComplex {
    let facets = (0..=n).map(|skip| (0..=n).filter(|&v| v != skip).collect()).collect();
    SimplicialComplex::new(n - 1, facets).expect("simplex boundary is valid")
}

/// Staircase triangulation of `|K| x |L|`.
///
/// Vertex `(a, b)` gets label `a * |V(L)| + b`, so labels increase along every
/// staircase. For maximal simplices `s` of `K` and `t` of `L`, each monotone
/// lattice path through the `s x t` grid is a simplex. When both factors are
/// closed and oriented the product is oriented by `e_s * e_t * sign(shuffle)`.
pub fn ordered_product(k: &SimplicialComplex, l: &SimplicialComplex) -> Result<SimplicialComplex> {
    let width = l.vertex_count();
    let dim = k.dim() + l.dim();
    let k_max = k.maximal_simplices();
    let l_max = l.maximal_simplices();
    let k_signs = factor_signs(k);
    let l_signs = factor_signs(l);
    let oriented = k_signs.is_some() && l_signs.is_some();

    let mut simplices: Vec<Simplex> = Vec::new();
    let mut signs: Vec<i8> = Vec::new();
    let mut seen = BTreeSet::new();
    for s in &k_max {
        for t in &l_max {
            let (p, q) = (s.len() - 1, t.len() - 1);
            for steps in staircases(p, q) {
                let (mut i, mut j) = (0, 0);
                let mut verts = vec![s[0] * width + t[0]];
                // pairs (vertical step, later horizontal step) = shuffle inversions
                let mut inversions = 0;
                let mut vertical_so_far = 0;
                for &horizontal in &steps {
                    if horizontal {
                        i += 1;
                        inversions += vertical_so_far;
                    } else {
                        j += 1;
                        vertical_so_far += 1;
                    }
                    verts.push(s[i] * width + t[j]);
                }
                if !seen.insert(verts.clone()) {
                    continue;
                }
                if oriented {
                    let es = k_signs.as_ref().and_then(|m| sign_of(k, m, s)).unwrap_or(1);
                    let et = l_signs.as_ref().and_then(|m| sign_of(l, m, t)).unwrap_or(1);
                    let shuffle = if inversions % 2 == 0 { 1 } else { -1 };
                    signs.push(es * et * shuffle);
                }
                simplices.push(verts);
            }
        }
    }
    let all_top = simplices.iter().all(|s| s.len() == dim + 1);
    if oriented && all_top {
        SimplicialComplex::with_orientation(dim, simplices, signs)
    } else {
        SimplicialComplex::new(dim, simplices)
    }
}

fn factor_signs(k: &SimplicialComplex) -> Option<Vec<i8>> {
    if k.dim() == 0 {
        return Some(vec![1; k.vertex_count()]);
    }
    k.fundamental_cycle().ok().map(|z| z.coefficients().iter().map(|&c| c as i8).collect())
}

fn sign_of(k: &SimplicialComplex, signs: &[i8], s: &[usize]) -> Option<i8> {
    if s.len() != k.dim() + 1 {
        return None;
    }
    k.index_of(s).map(|i| signs[i])
}

/// All sequences of `p` horizontal (`true`) and `q` vertical steps.
fn staircases(p: usize, q: usize) -> Vec<Vec<bool>> {
    if p == 0 {
        return vec![vec![false; q]];
    }
    if q == 0 {
        return vec![vec![true; p]];
    }
    let mut out = Vec::new();
    for mut rest in staircases(p - 1, q) {
        rest.insert(0, true);
        out.push(rest);
    }
    for mut rest in staircases(p, q - 1) {
        rest.insert(0, false);
        out.push(rest);
    }
    out
}

/// An 11-vertex triangulation of RP³, obtained from the antipodal quotient of
/// the barycentric subdivision of the 16-cell boundary by bistellar moves
/// (which preserve the PL type). Machine-checked in the tests: pseudomanifold,
/// vertex links are 2-spheres, orientable, `H^1 = 0`, `H^2 = Z/2`.
pub const RP3_FACETS: [[usize; 4]; 41] = [
    [0, 1, 2, 5],
    [0, 1, 2, 8],
    [0, 1, 5, 6],
    [0, 1, 6, 7],
    [0, 1, 7, 8],
    [0, 2, 3, 4],
    [0, 2, 3, 5],
    [0, 2, 4, 8],
    [0, 3, 4, 9],
    [0, 3, 5, 6],
    [0, 3, 6, 9],
    [0, 4, 8, 10],
    [0, 4, 9, 10],
    [0, 6, 7, 9],
    [0, 7, 8, 10],
    [0, 7, 9, 10],
    [1, 2, 5, 10],
    [1, 2, 8, 9],
    [1, 2, 9, 10],
    [1, 3, 4, 7],
    [1, 3, 4, 9],
    [1, 3, 7, 8],
    [1, 3, 8, 9],
    [1, 4, 5, 6],
    [1, 4, 5, 10],
    [1, 4, 6, 7],
    [1, 4, 9, 10],
    [2, 3, 4, 7],
    [2, 3, 5, 10],
    [2, 3, 7, 10],
    [2, 4, 6, 7],
    [2, 4, 6, 8],
    [2, 6, 7, 9],
    [2, 6, 8, 9],
    [2, 7, 9, 10],
    [3, 5, 6, 8],
    [3, 5, 8, 10],
    [3, 6, 8, 9],
    [3, 7, 8, 10],
    [4, 5, 6, 8],
    [4, 5, 8, 10],
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{betti_numbers, homology_groups};
    use crate::cochain::Ring;
    use num_bigint::BigInt;

    #[test]
    fn names_parse() {
        assert_eq!("S3".parse::<ManifoldName>().unwrap(), ManifoldName::S3);
        assert_eq!("circle(5)".parse::<ManifoldName>().unwrap(), ManifoldName::Circle(5));
        assert_eq!("circle:4".parse::<ManifoldName>().unwrap(), ManifoldName::Circle(4));
        assert_eq!("klein".parse::<ManifoldName>().unwrap_err().code(), "UNKNOWN_NAME");
        assert_eq!("circle(x)".parse::<ManifoldName>().unwrap_err().code(), "BAD_PARAMETER");
        assert_eq!(generate(ManifoldName::Circle(2)).unwrap_err().code(), "BAD_PARAMETER");
    }

    #[test]
    fn f_vectors() {
        assert_eq!(generate(ManifoldName::S3).unwrap().f_vector(), vec![5, 10, 10, 5]);
        assert_eq!(generate(ManifoldName::Circle(3)).unwrap().f_vector(), vec![3, 3]);
        assert_eq!(generate(ManifoldName::Sphere2).unwrap().f_vector(), vec![4, 6, 4]);
        let t3 = generate(ManifoldName::T3).unwrap();
        assert_eq!(t3.vertex_count(), 27);
        assert_eq!(t3.count(3), 162);
        let s1s2 = generate(ManifoldName::S1xS2).unwrap();
        assert_eq!(s1s2.vertex_count(), 12);
        assert_eq!(s1s2.count(3), 36);
        assert_eq!(generate(ManifoldName::RP3).unwrap().vertex_count(), 11);
    }

    #[test]
    fn torus_from_two_triangles() {
        let c = circle(3).unwrap();
        let t2 = ordered_product(&c, &c).unwrap();
        assert_eq!(t2.vertex_count(), 9);
        assert_eq!(t2.count(2), 18);
        assert!(t2.orientation().is_some());
        assert_eq!(betti_numbers(&t2), vec![1, 2, 1]);
    }

    #[test]
    fn product_with_point_is_identity() {
        let s2 = simplex_boundary(3);
        let pt = SimplicialComplex::new(0, vec![vec![0]]).unwrap();
        let p = ordered_product(&s2, &pt).unwrap();
        assert_eq!(p.simplices(2), s2.simplices(2));
        assert_eq!(p.f_vector(), s2.f_vector());
    }

    #[test]
    fn every_three_manifold_is_closed_and_oriented() {
        for name in [ManifoldName::S3, ManifoldName::T3, ManifoldName::S1xS2, ManifoldName::RP3] {
            let k = generate(name).unwrap();
            let z = k.fundamental_cycle().unwrap();
            assert!(k.boundary(&z).coefficients().iter().all(|&c| c == 0), "{name}");
            assert!(k.boundary(&z.negated()).coefficients().iter().all(|&c| c == 0), "{name}");
        }
    }

    #[test]
    fn rp3_fixture_is_a_manifold() {
        let k = SimplicialComplex::new(3, RP3_FACETS.iter().map(|t| t.to_vec()).collect()).unwrap();
        // every triangle in exactly two tetrahedra
        let d2 = k.coboundary(2).unwrap();
        let mut cofaces = vec![0; k.count(2)];
        for r in 0..d2.rows() {
            for (c, _) in d2.row(r) {
                cofaces[c] += 1;
            }
        }
        assert!(cofaces.iter().all(|&c| c == 2));
        // vertex links are 2-spheres: connected surfaces with Euler characteristic 2
        for v in 0..k.vertex_count() {
            let link: Vec<Vec<usize>> = k
                .simplices(3)
                .iter()
                .filter(|t| t.contains(&v))
                .map(|t| t.iter().copied().filter(|&w| w != v).collect())
                .collect();
            let mut labels: Vec<usize> = link.iter().flatten().copied().collect();
            labels.sort_unstable();
            labels.dedup();
            let relabel = |w: usize| labels.binary_search(&w).unwrap();
            let link = SimplicialComplex::new(2, link.iter().map(|t| t.iter().map(|&w| relabel(w)).collect()).collect())
                .unwrap();
            assert_eq!(link.euler_characteristic(), 2, "link of {v}");
            assert_eq!(betti_numbers(&link), vec![1, 0, 1], "link of {v}");
        }
        assert_eq!(betti_numbers(&k), vec![1, 0, 0, 1]);
        assert_eq!(homology_groups(&k, 2, Ring::Int).unwrap().torsion, vec![BigInt::from(2)]);
    }
}
