//! Finite simplicial complexes with a canonical simplex order.
//!
//! Simplices are strictly increasing vertex tuples. In every degree they are
//! sorted lexicographically; the position in that list is the canonical index
//! that cochains, chains and matrices align with. Face `i` of a simplex (drop
//! vertex `i`) carries the sign `(-1)^i`.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use crate::cochain::{Chain, Coefficient, Cochain};
use crate::error::{Error, Result};
use crate::homology::CohomologyBasis;
use crate::lsq::LeastSquares;
use crate::matrix::{Coboundary, IntMatrix};

pub type Simplex = Vec<usize>;

#[derive(Clone)]
pub struct SimplicialComplex {
    inner: Arc<Inner>,
}

struct Inner {
    dim: usize,
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
    orientation: Option<Vec<i8>>,
    /// `coboundaries[k] = d_k` for `k in 0..=dim`; `d_dim` has no rows.
    coboundaries: Vec<Coboundary>,
    cache: Cache,
}

struct Cache {
    fundamental: OnceLock<Result<Chain>>,
    bases: Vec<OnceLock<Result<Arc<CohomologyBasis>>>>,
    solvers: Vec<OnceLock<Arc<LeastSquares>>>,
    front_back: Vec<Vec<OnceLock<Arc<Vec<(usize, usize)>>>>>,
}

impl std::fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("dim", &self.inner.dim)
            .field("f_vector", &self.f_vector())
            .field("oriented", &self.inner.orientation.is_some())
            .finish()
    }
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.dim == other.inner.dim
                && self.inner.simplices == other.inner.simplices
                && self.inner.orientation == other.inner.orientation)
    }
}

impl SimplicialComplex {
    /// Builds the face closure of `simplices`. The list may contain simplices of
    /// any dimension up to `dim`; at least one must have dimension `dim`.
    pub fn new(dim: usize, simplices: Vec<Simplex>) -> Result<Self> {
        Self::build(dim, simplices, None, None)
    }

    /// Like [`SimplicialComplex::new`] with a sign per listed top simplex. The
    /// signed sum must be a cycle.
    pub fn with_orientation(dim: usize, top_simplices: Vec<Simplex>, orientation: Vec<i8>) -> Result<Self> {
        Self::build(dim, top_simplices, Some(orientation), None)
    }

    pub(crate) fn build(
        dim: usize,
        simplices: Vec<Simplex>,
        orientation: Option<Vec<i8>>,
        vertex_count: Option<usize>,
    ) -> Result<Self> {
        let mut seen = HashSet::with_capacity(simplices.len());
        let mut max_dim = 0;
        for s in &simplices {
            if s.is_empty() {
                return Err(Error::InvalidDocument("empty vertex tuple".into()));
            }
            if s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::NonIncreasingTuple(s.clone()));
            }
            if !seen.insert(s.clone()) {
                return Err(Error::DuplicateSimplex(s.clone()));
            }
            if s.len() > dim + 1 {
                return Err(Error::InvalidDocument(format!("simplex {s:?} exceeds declared dimension {dim}")));
            }
            max_dim = max_dim.max(s.len() - 1);
        }
        if max_dim != dim || simplices.is_empty() {
            return Err(Error::InvalidDocument(format!("declared dimension {dim} but no {dim}-simplex is listed")));
        }

        let used: BTreeSet<usize> = simplices.iter().flatten().copied().collect();
        let n_vertices = vertex_count.unwrap_or_else(|| used.iter().next_back().map_or(0, |m| m + 1));
        if let Some(&v) = used.iter().find(|&&v| v >= n_vertices) {
            return Err(Error::DanglingVertex(format!("vertex {v} exceeds the vertex count {n_vertices}")));
        }
        if used.len() != n_vertices {
            let missing = (0..n_vertices).find(|v| !used.contains(v)).unwrap_or_default();
            return Err(Error::DanglingVertex(format!("label {missing} is not used by any simplex")));
        }

        let mut per_degree: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new(); dim + 1];
        for s in &simplices {
            let n = s.len();
            for mask in 1u32..(1u32 << n) {
                let face: Simplex = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect();
                per_degree[face.len() - 1].insert(face);
            }
        }
        let all: Vec<Vec<Simplex>> = per_degree.into_iter().map(|s| s.into_iter().collect()).collect();

        let oriented = match orientation {
            None => None,
            Some(signs) => {
                if signs.len() != simplices.len() {
                    return Err(Error::InvalidDocument(format!(
                        "orientation has {} entries for {} simplices",
                        signs.len(),
                        simplices.len()
                    )));
                }
                let top_index: HashMap<&Simplex, usize> = all[dim].iter().enumerate().map(|(i, s)| (s, i)).collect();
                let mut per_top = vec![0i8; all[dim].len()];
                for (s, &e) in simplices.iter().zip(&signs) {
                    if e != 1 && e != -1 {
                        return Err(Error::InvalidDocument(format!("orientation entry {e} is not +1 or -1")));
                    }
                    let Some(&i) = top_index.get(s) else {
                        return Err(Error::InvalidDocument(format!("oriented simplex {s:?} is not top-dimensional")));
                    };
                    per_top[i] = e;
                }
                if per_top.contains(&0) {
                    return Err(Error::InvalidDocument("orientation does not cover every top simplex".into()));
                }
                Some(per_top)
            }
        };

        Self::from_sorted(dim, all, oriented).validate_orientation()
    }

    /// `simplices[k]` must already be closed under faces and sorted.
    pub(crate) fn from_sorted(dim: usize, simplices: Vec<Vec<Simplex>>, orientation: Option<Vec<i8>>) -> Self {
        let index: Vec<HashMap<Simplex, usize>> = simplices
            .iter()
            .map(|list| list.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        let mut coboundaries = Vec::with_capacity(dim + 1);
        for k in 0..=dim {
            let rows: Vec<Vec<(usize, i8)>> = if k < dim {
                simplices[k + 1]
                    .iter()
                    .map(|tau| {
                        (0..tau.len())
                            .map(|i| {
                                let face = drop_vertex(tau, i);
                                (index[k][&face], if i % 2 == 0 { 1 } else { -1 })
                            })
                            .collect()
                    })
                    .collect()
            } else {
                Vec::new()
            };
            coboundaries.push(Coboundary::from_rows(simplices[k].len(), rows));
        }
        let cache = Cache {
            fundamental: OnceLock::new(),
            bases: (0..=dim).map(|_| OnceLock::new()).collect(),
            solvers: (0..=dim).map(|_| OnceLock::new()).collect(),
            front_back: (0..=dim).map(|p| (0..=p).map(|_| OnceLock::new()).collect()).collect(),
        };
        SimplicialComplex { inner: Arc::new(Inner { dim, simplices, index, orientation, coboundaries, cache }) }
    }

    pub(crate) fn validate_orientation(self) -> Result<Self> {
        if let Some(signs) = &self.inner.orientation {
            let chain = Chain::new(self.dim(), signs.iter().map(|&s| i64::from(s)).collect());
            let b = self.boundary(&chain);
            if let Some(pos) = b.coefficients().iter().position(|&c| c != 0) {
                let face = &self.inner.simplices[self.dim() - 1][pos];
                return Err(Error::OrientationNotCycle(format!(
                    "boundary coefficient {} on face {face:?}",
                    b.coefficients()[pos]
                )));
            }
        }
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.inner.simplices[0].len()
    }

    pub fn count(&self, k: usize) -> usize {
        self.inner.simplices.get(k).map_or(0, Vec::len)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.inner.simplices.iter().map(Vec::len).collect()
    }

    /// Canonically ordered `k`-simplices.
    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.inner.simplices.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn simplex(&self, k: usize, i: usize) -> &[usize] {
        &self.inner.simplices[k][i]
    }

    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        let k = simplex.len().checked_sub(1)?;
        self.inner.index.get(k)?.get(simplex).copied()
    }

    pub fn orientation(&self) -> Option<&[i8]> {
        self.inner.orientation.as_deref()
    }

    /// Same underlying complex, compared by identity first and then structurally.
    pub fn same_as(&self, other: &SimplicialComplex) -> bool {
        self == other
    }

    /// Euler characteristic from the f-vector.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
    }

    /// Simplices not contained in any larger simplex, in canonical order by
    /// decreasing degree.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let mut out = Vec::new();
        for k in (0..=self.dim()).rev() {
            let hit = self.inner.coboundaries[k].columns_hit();
            out.extend(self.inner.simplices[k].iter().zip(hit).filter(|(_, h)| !h).map(|(s, _)| s.clone()));
        }
        out
    }

    /// Sparse `d_k` for `k < dim`.
    pub fn coboundary(&self, k: usize) -> Result<&Coboundary> {
        if k >= self.dim() {
            return Err(Error::DegreeOutOfRange { degree: k, allowed: format!("0..{}", self.dim()) });
        }
        Ok(&self.inner.coboundaries[k])
    }

    /// `d_k` for `k <= dim`; `d_dim` is the zero map into the empty space.
    pub(crate) fn coboundary_ext(&self, k: usize) -> &Coboundary {
        &self.inner.coboundaries[k]
    }

    /// Dense integer matrix of `d_k`, rows indexed by `(k+1)`-simplices.
    pub fn coboundary_matrix(&self, k: usize) -> Result<IntMatrix> {
        Ok(self.coboundary(k)?.to_dense_int())
    }

    pub fn apply_d<R: Coefficient>(&self, omega: &Cochain<R>) -> Result<Cochain<R>> {
        let k = omega.degree();
        let d = self.coboundary(k)?;
        self.check_len(omega)?;
        Ok(Cochain::new(k + 1, d.apply(omega.values())))
    }

    pub(crate) fn check_len<R: Coefficient>(&self, omega: &Cochain<R>) -> Result<()> {
        let k = omega.degree();
        if k > self.dim() || omega.len() != self.count(k) {
            return Err(Error::BaseMismatch(format!(
                "degree-{k} cochain of length {} does not fit a complex with f-vector {:?}",
                omega.len(),
                self.f_vector()
            )));
        }
        Ok(())
    }

    /// Boundary of an integer chain, exact.
    pub fn boundary(&self, chain: &Chain) -> Chain {
        let k = chain.degree();
        if k == 0 {
            return Chain::new(0, Vec::new());
        }
        let d = &self.inner.coboundaries[k - 1];
        let mut out = vec![0i64; d.cols()];
        for (r, &c) in chain.coefficients().iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (col, s) in d.row(r) {
                out[col] += i64::from(s) * c;
            }
        }
        Chain::new(k - 1, out)
    }

    /// For each `p`-simplex, the canonical indices of its front `k`-face
    /// `(v_0..v_k)` and back `(p-k)`-face `(v_k..v_p)`.
    pub(crate) fn front_back(&self, p: usize, k: usize) -> Arc<Vec<(usize, usize)>> {
        self.inner.cache.front_back[p][k]
            .get_or_init(|| {
                Arc::new(
                    self.inner.simplices[p]
                        .iter()
                        .map(|s| (self.inner.index[k][&s[..=k]], self.inner.index[p - k][&s[k..]]))
                        .collect(),
                )
            })
            .clone()
    }

    pub(crate) fn cached_basis(
        &self,
        k: usize,
        init: impl FnOnce() -> Result<Arc<CohomologyBasis>>,
    ) -> Result<Arc<CohomologyBasis>> {
        self.inner.cache.bases[k].get_or_init(init).clone()
    }

    pub(crate) fn cached_solver(&self, k: usize, init: impl FnOnce() -> Arc<LeastSquares>) -> Arc<LeastSquares> {
        self.inner.cache.solvers[k].get_or_init(init).clone()
    }

    /// Signs `e_s` on the top simplices with `boundary(sum e_s s) = 0`. Uses the
    /// stored orientation when present; otherwise propagates signs across shared
    /// codimension-one faces, fixing `+1` on the first simplex of every component.
    pub fn fundamental_cycle(&self) -> Result<Chain> {
        self.inner.cache.fundamental.get_or_init(|| self.compute_fundamental_cycle()).clone()
    }

    /// A copy with the fundamental cycle stored as the orientation.
    pub fn oriented(&self) -> Result<SimplicialComplex> {
        let z = self.fundamental_cycle()?;
        let signs = z.coefficients().iter().map(|&c| c as i8).collect();
        Ok(Self::from_sorted(self.dim(), self.inner.simplices.clone(), Some(signs)))
    }

    pub fn is_closed_oriented(&self) -> bool {
        self.fundamental_cycle().is_ok()
    }

    fn compute_fundamental_cycle(&self) -> Result<Chain> {
        let n = self.dim();
        if let Some(signs) = &self.inner.orientation {
            return Ok(Chain::new(n, signs.iter().map(|&s| i64::from(s)).collect()));
        }
        if n == 0 {
            return Err(Error::ComplexNotClosed("a 0-dimensional complex has no fundamental cycle".into()));
        }
        let tops = self.count(n);
        // cofaces[f] = (top simplex, incidence sign)
        let mut cofaces: Vec<Vec<(usize, i8)>> = vec![Vec::new(); self.count(n - 1)];
        for t in 0..tops {
            for (f, s) in self.inner.coboundaries[n - 1].row(t) {
                cofaces[f].push((t, s));
            }
        }
        let mut signs = vec![0i8; tops];
        let mut component = vec![usize::MAX; tops];
        let mut n_components = 0;
        for start in 0..tops {
            if signs[start] != 0 {
                continue;
            }
            signs[start] = 1;
            component[start] = n_components;
            let mut queue = VecDeque::from([start]);
            while let Some(t) = queue.pop_front() {
                for (f, s) in self.inner.coboundaries[n - 1].row(t) {
                    if cofaces[f].len() != 2 {
                        continue;
                    }
                    let (other, os) = if cofaces[f][0].0 == t { cofaces[f][1] } else { cofaces[f][0] };
                    // e_t * s + e_other * os = 0
                    let want = -signs[t] * s * os;
                    if signs[other] == 0 {
                        signs[other] = want;
                        component[other] = n_components;
                        queue.push_back(other);
                    } else if signs[other] != want {
                        return Err(Error::NonOrientable(format!(
                            "sign propagation across face {:?} reaches a contradiction",
                            self.inner.simplices[n - 1][f]
                        )));
                    }
                }
            }
            n_components += 1;
        }
        if let Some(f) = cofaces.iter().position(|c| c.len() % 2 == 1) {
            return Err(Error::ComplexNotClosed(format!(
                "face {:?} lies in {} top simplices",
                self.inner.simplices[n - 1][f],
                cofaces[f].len()
            )));
        }
        for k in 0..n {
            if let Some(i) = self.inner.coboundaries[k].columns_hit().iter().position(|h| !h) {
                return Err(Error::ComplexNotClosed(format!(
                    "complex is not pure: {:?} is a maximal simplex",
                    self.inner.simplices[k][i]
                )));
            }
        }
        // Faces shared by four or more top simplices constrain whole components.
        let chain = Chain::new(n, signs.iter().map(|&s| i64::from(s)).collect());
        if self.boundary(&chain).coefficients().iter().all(|&c| c == 0) {
            return Ok(chain);
        }
        if n_components > 20 {
            return Err(Error::ComplexNotClosed("no sign assignment found on a non-manifold complex".into()));
        }
        for flips in 1u64..(1u64 << n_components) {
            let trial: Vec<i64> = signs
                .iter()
                .zip(&component)
                .map(|(&s, &c)| if flips & (1 << c) != 0 { -i64::from(s) } else { i64::from(s) })
                .collect();
            let chain = Chain::new(n, trial);
            if self.boundary(&chain).coefficients().iter().all(|&c| c == 0) {
                return Ok(chain);
            }
        }
        Err(Error::ComplexNotClosed("boundary is nonzero for every sign choice".into()))
    }

    /// Closed star of the vertex `v`.
    pub fn star_subcomplex(&self, v: usize) -> Result<Star> {
        if v >= self.vertex_count() {
            return Err(Error::UnknownVertex(v));
        }
        self.closed_star(&[v])
    }

    /// All simplices `t` with `t ∪ sigma` a simplex of the complex, relabelled
    /// order-preservingly onto `0..m`.
    pub fn closed_star(&self, sigma: &[usize]) -> Result<Star> {
        if self.index_of(sigma).is_none() {
            return Err(Error::UnknownSimplex(sigma.to_vec()));
        }
        let mut members: Vec<Vec<usize>> = Vec::with_capacity(self.dim() + 1);
        let mut union = Vec::with_capacity(self.dim() + 1);
        for k in 0..=self.dim() {
            let mut list = Vec::new();
            for (i, t) in self.inner.simplices[k].iter().enumerate() {
                union.clear();
                union.extend(t.iter().chain(sigma).copied());
                union.sort_unstable();
                union.dedup();
                if self.index_of(&union).is_some() {
                    list.push(i);
                }
            }
            if list.is_empty() {
                break;
            }
            members.push(list);
        }
        let vertex_map: Vec<usize> = members[0].iter().map(|&i| self.inner.simplices[0][i][0]).collect();
        let local_label: HashMap<usize, usize> = vertex_map.iter().enumerate().map(|(l, &g)| (g, l)).collect();
        let local: Vec<Vec<Simplex>> = members
            .iter()
            .enumerate()
            .map(|(k, list)| {
                list.iter().map(|&i| self.inner.simplices[k][i].iter().map(|g| local_label[g]).collect()).collect()
            })
            .collect();
        let dim = local.len() - 1;
        Ok(Star {
            complex: SimplicialComplex::from_sorted(dim, local, None),
            center: sigma.to_vec(),
            vertex_map,
            simplex_maps: members,
        })
    }
}

impl Coboundary {
    /// `hit[c]` is true when column `c` has a nonzero entry, i.e. the simplex has a coface.
    pub(crate) fn columns_hit(&self) -> Vec<bool> {
        let mut hit = vec![false; self.cols()];
        for r in 0..self.rows() {
            for (c, _) in self.row(r) {
                hit[c] = true;
            }
        }
        hit
    }
}

pub(crate) fn drop_vertex(s: &[usize], i: usize) -> Simplex {
    s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect()
}

/// A closed star with the map from local to global canonical indices.
/// Relabelling is order-preserving, so local canonical order agrees with the
/// global one and orientations are inherited.
#[derive(Debug, Clone)]
pub struct Star {
    pub complex: SimplicialComplex,
    pub center: Vec<usize>,
    /// Local vertex label -> global vertex label.
    pub vertex_map: Vec<usize>,
    /// `simplex_maps[k][local] = global` canonical index, increasing.
    pub simplex_maps: Vec<Vec<usize>>,
}

impl Star {
    pub fn global_index(&self, k: usize, local: usize) -> usize {
        self.simplex_maps[k][local]
    }

    pub fn local_index(&self, k: usize, global: usize) -> Option<usize> {
        self.simplex_maps.get(k)?.binary_search(&global).ok()
    }

    /// Restriction of a global cochain to this star.
    pub fn restrict<R: Coefficient>(&self, omega: &Cochain<R>) -> Cochain<R> {
        let k = omega.degree();
        let values = match self.simplex_maps.get(k) {
            Some(map) => map.iter().map(|&g| omega.values()[g].clone()).collect(),
            None => Vec::new(),
        };
        Cochain::new(k, values)
    }

    /// Restriction of a cochain living on a larger star `outer ⊇ self`.
    pub fn restrict_from<R: Coefficient>(&self, outer: &Star, omega: &Cochain<R>) -> Cochain<R> {
        let k = omega.degree();
        let values = match self.simplex_maps.get(k) {
            Some(map) => map
                .iter()
                .map(|&g| {
                    let l = outer.local_index(k, g).expect("restriction target is not contained in the source star");
                    omega.values()[l].clone()
                })
                .collect(),
            None => Vec::new(),
        };
        Cochain::new(k, values)
    }
}
