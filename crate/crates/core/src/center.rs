//! Semisimple decomposition of a tube algebra: the center, its minimal
//! central projections and their twists, dimensions and multiplicities.
//!
//! The center lies in the diagonal subspace `D = sum_xi A_xi`. It is found as
//! the kernel of `M = sum_b C_b^H C_b`, where `C_b(x) = x b - b x` runs over
//! every basis label `b`. Minimal central projections are the spectral
//! projections of left multiplication by a random self-adjoint central
//! element.

use crate::numerics::{
    herm_eig, psd_kernel, snap_root_of_unity, Accumulator, CMatrix, CScalar, NumericsError,
    Precision, RootOfUnity, SNAP_TOL,
};
use crate::tube::{Tube, TubeElement, TubeError};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use thiserror::Error;

/// Default seed for the random probe element.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;
/// Numerical rank threshold used for multiplicities.
pub const RANK_TOL: f64 = 1e-7;
/// Required ratio between kept and discarded eigenvalues of the constraint matrix.
pub const MIN_GAP_RATIO: f64 = 10.0;
const MAX_REDRAWS: u64 = 8;

#[derive(Debug, Error)]
pub enum CenterError {
    #[error(transparent)]
    Tube(#[from] TubeError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("center kernel is ill-conditioned (gap ratio {gap_ratio:.3e} < {MIN_GAP_RATIO}); try a different kernel tolerance")]
    IllConditioned { gap_ratio: f64 },
    #[error("probe element has colliding eigenvalues after {0} draws")]
    EigenvalueCollision(u64),
    #[error("{what} check failed: deviation {deviation:.3e}")]
    Check { what: String, deviation: f64 },
    #[error("multiplicity at {object} is not an integer (rank {rank})")]
    NonIntegerMultiplicity { object: String, rank: usize },
}

/// Tunable parameters for the decomposition.
#[derive(Debug, Clone, Copy)]
pub struct CenterOptions {
    pub seed: u64,
    pub precision: Precision,
    /// Relative eigenvalue threshold for the constraint kernel.
    pub kernel_tol: f64,
}

impl Default for CenterOptions {
    fn default() -> Self {
        CenterOptions {
            seed: DEFAULT_SEED,
            precision: Precision::Standard,
            kernel_tol: 1e-9,
        }
    }
}

/// Linear algebra on the diagonal subspace `D`.
pub struct Diagonal<'a> {
    pub tube: &'a Tube,
    /// Labels spanning `D`, grouped by corner.
    pub labels: Vec<usize>,
    pos: FxHashMap<usize, usize>,
    /// `(start, end)` of each corner in `labels`.
    ranges: Vec<(usize, usize)>,
    /// `phi(a b)` for labels `a, b` of `D`.
    phi_pairs: CMatrix,
    /// Column `b` holds the coordinates of `b^*`.
    adjoint: CMatrix,
    /// Hermitian form `<x, y> = phi(y^* x) = y^H gram x`.
    gram: CMatrix,
}

impl<'a> Diagonal<'a> {
    pub fn new(tube: &'a Tube) -> Result<Self, TubeError> {
        let mut labels = Vec::new();
        let mut ranges = Vec::new();
        for o in 0..tube.objects().len() {
            let start = labels.len();
            labels.extend_from_slice(tube.corner(o));
            ranges.push((start, labels.len()));
        }
        let pos: FxHashMap<usize, usize> =
            labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let n = labels.len();
        let mut phi_pairs = CMatrix::zeros(n, n);
        let mut adjoint = CMatrix::zeros(n, n);
        for &(s, e) in &ranges {
            for i in s..e {
                for j in s..e {
                    let p = tube.product_labels(labels[i], labels[j])?;
                    phi_pairs[(i, j)] = p.iter().map(|&(l, c)| c * tube.phi_label(l)).sum();
                }
                for &(l, c) in tube.adjoint_label(labels[i])?.iter() {
                    adjoint[(pos[&l], i)] = c;
                }
            }
        }
        let gram = adjoint.transpose() * &phi_pairs;
        Ok(Diagonal {
            tube,
            labels,
            pos,
            ranges,
            phi_pairs,
            adjoint,
            gram,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Position of a label in `D`.
    pub fn position(&self, label: usize) -> Option<usize> {
        self.pos.get(&label).copied()
    }

    /// Range of corner `object` within the coordinates.
    pub fn corner_range(&self, object: usize) -> (usize, usize) {
        self.ranges[object]
    }

    pub fn to_element(&self, x: &DVector<CScalar>) -> TubeElement {
        let mut t =
            TubeElement::from_pairs(self.labels.iter().zip(x.iter()).map(|(&l, &c)| (l, c)));
        t.chop();
        t
    }

    /// Coordinates of an element supported on `D`.
    pub fn to_coords(&self, x: &TubeElement) -> Result<DVector<CScalar>, TubeError> {
        let mut v = DVector::zeros(self.len());
        for (&l, &c) in &x.terms {
            let p = self.position(l).ok_or(TubeError::OffDiagonal)?;
            v[p] = c;
        }
        Ok(v)
    }

    /// Product of two elements of `D`.
    pub fn mul(
        &self,
        x: &DVector<CScalar>,
        y: &DVector<CScalar>,
    ) -> Result<DVector<CScalar>, TubeError> {
        let mut out = DVector::zeros(self.len());
        for &(s, e) in &self.ranges {
            for i in s..e {
                if x[i].norm() == 0.0 {
                    continue;
                }
                for j in s..e {
                    let c = x[i] * y[j];
                    if c.norm() == 0.0 {
                        continue;
                    }
                    for &(l, v) in self
                        .tube
                        .product_labels(self.labels[i], self.labels[j])?
                        .iter()
                    {
                        out[self.pos[&l]] += c * v;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self, x: &DVector<CScalar>) -> DVector<CScalar> {
        &self.adjoint * x.map(|c| c.conj())
    }

    /// `phi(x)`.
    pub fn phi(&self, x: &DVector<CScalar>) -> CScalar {
        self.labels
            .iter()
            .zip(x.iter())
            .map(|(&l, &c)| c * self.tube.phi_label(l))
            .sum()
    }

    /// `phi(x y)` without forming the product.
    pub fn phi_product(&self, x: &DVector<CScalar>, y: &DVector<CScalar>) -> CScalar {
        (x.transpose() * &self.phi_pairs * y)[(0, 0)]
    }

    /// `<x, y> = phi(y^* x)`.
    pub fn inner(&self, x: &DVector<CScalar>, y: &DVector<CScalar>) -> CScalar {
        (y.adjoint() * &self.gram * x)[(0, 0)]
    }

    pub fn gram(&self) -> &CMatrix {
        &self.gram
    }

    /// Matrix of `S_0` on `D` (column `b` holds the coordinates of `S_0(b)`).
    pub fn s0_matrix(&self) -> Result<CMatrix, TubeError> {
        let n = self.len();
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            for &(l, c) in self.tube.s0_label(self.labels[i])?.iter() {
                m[(self.pos[&l], i)] = c;
            }
        }
        Ok(m)
    }

    pub fn t_coords(&self) -> Result<DVector<CScalar>, TubeError> {
        self.to_coords(&self.tube.t_element()?)
    }

    pub fn one_coords(&self) -> DVector<CScalar> {
        self.to_coords(&self.tube.one()).expect("unit lies in D")
    }
}

/// Accumulate `M = sum_b C_b^H C_b` over all basis labels `b`.
pub fn constraint_matrix(diag: &Diagonal, precision: Precision) -> Result<CMatrix, TubeError> {
    let tube = diag.tube;
    let n = diag.len();
    let mut acc = MatrixAccumulator::new(n, precision);
    let mut rows: FxHashMap<usize, Vec<(usize, CScalar)>> = FxHashMap::default();
    for b in 0..tube.len() {
        let lb = tube.label(b);
        let (s, t) = (lb.source as usize, lb.target as usize);
        let diagonal_b = s == t;
        rows.clear();
        let (rs, re) = diag.corner_range(s);
        for i in rs..re {
            let x = diag.labels[i];
            let prod = if diagonal_b {
                tube.product_labels(x, b)?.to_vec()
            } else {
                tube.compute_product(x, b)?
            };
            for (l, c) in prod {
                rows.entry(l).or_default().push((i, c));
            }
        }
        let (ts, te) = diag.corner_range(t);
        for i in ts..te {
            let x = diag.labels[i];
            let prod = if diagonal_b {
                tube.product_labels(b, x)?.to_vec()
            } else {
                tube.compute_product(b, x)?
            };
            for (l, c) in prod {
                rows.entry(l).or_default().push((i, -c));
            }
        }
        for entries in rows.values_mut() {
            entries.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, CScalar)> = Vec::with_capacity(entries.len());
            for &(i, c) in entries.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == i => last.1 += c,
                    _ => merged.push((i, c)),
                }
            }
            for &(i, ci) in &merged {
                for &(j, cj) in &merged {
                    acc.add(i, j, ci.conj() * cj);
                }
            }
        }
    }
    Ok(acc.finish())
}

struct MatrixAccumulator {
    n: usize,
    cells: Vec<Accumulator>,
}

impl MatrixAccumulator {
    fn new(n: usize, mode: Precision) -> Self {
        MatrixAccumulator {
            n,
            cells: vec![Accumulator::new(mode); n * n],
        }
    }

    #[inline]
    fn add(&mut self, i: usize, j: usize, x: CScalar) {
        self.cells[i * self.n + j].add(x);
    }

    fn finish(self) -> CMatrix {
        let n = self.n;
        CMatrix::from_fn(n, n, |i, j| self.cells[i * n + j].value())
    }
}

/// Orthonormal (under `phi(y^* x)`) basis of the center.
pub struct Center {
    /// Columns are coordinates over `D`.
    pub basis: CMatrix,
    pub gap_ratio: f64,
    /// The constraint matrix, kept for post hoc centrality checks.
    pub constraints: CMatrix,
}

impl Center {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// `|M x| / (|M| |x|)`: relative failure of `x` to commute with the basis labels.
    pub fn commutator_norm(&self, x: &DVector<CScalar>) -> f64 {
        let scale =
            self.constraints.norm().max(f64::MIN_POSITIVE) * x.norm().max(f64::MIN_POSITIVE);
        (&self.constraints * x).norm() / scale
    }
}

/// The center of the tube algebra.
pub fn compute_center(diag: &Diagonal, opts: &CenterOptions) -> Result<Center, CenterError> {
    let m = constraint_matrix(diag, opts.precision)?;
    center_from_constraints(diag, m, opts)
}

/// The center from a precomputed constraint matrix.
pub fn center_from_constraints(
    diag: &Diagonal,
    m: CMatrix,
    opts: &CenterOptions,
) -> Result<Center, CenterError> {
    let kernel = psd_kernel(&m, opts.kernel_tol)?;
    let gap_ratio = kernel.gap_ratio();
    if gap_ratio < MIN_GAP_RATIO {
        return Err(CenterError::IllConditioned { gap_ratio });
    }
    let k = kernel.basis;
    let g = k.adjoint() * diag.gram() * &k;
    let (vals, vecs) = herm_eig(&g)?;
    if vals.first().is_some_and(|&v| v <= 0.0) {
        return Err(CenterError::Check {
            what: "positivity of phi on the center".into(),
            deviation: vals[0],
        });
    }
    let scale = CMatrix::from_diagonal(&DVector::from_iterator(
        vals.len(),
        vals.iter().map(|v| CScalar::new(1.0 / v.sqrt(), 0.0)),
    ));
    let basis = k * vecs * scale;
    Ok(Center {
        basis,
        gap_ratio,
        constraints: m,
    })
}

/// A minimal central projection with its invariants.
#[derive(Debug, Clone)]
pub struct CentralProjection {
    pub element: TubeElement,
    pub coords: DVector<CScalar>,
    pub t_eigenvalue: CScalar,
    pub t_snap: Option<RootOfUnity>,
    pub qdim: f64,
    /// Multiplicity of each object of the tube basis.
    pub multiplicities: Vec<usize>,
    /// Grade of the supporting objects (graded flavor), else `0`.
    pub grade: usize,
}

/// Maximum deviations found while validating a decomposition.
#[derive(Debug, Clone, Default)]
pub struct DecompositionChecks {
    pub idempotent: f64,
    pub self_adjoint: f64,
    pub orthogonality: f64,
    pub sum_to_one: f64,
    pub centrality: f64,
    pub t_eigen_residual: f64,
    pub qdim_vs_multiplicities: f64,
}

/// Full decomposition result.
pub struct Decomposition {
    pub projections: Vec<CentralProjection>,
    pub center_dim: usize,
    pub gap_ratio: f64,
    pub seed_used: u64,
    pub checks: DecompositionChecks,
    pub global_dimension: f64,
}

/// Default `q_max` for snapping twists: `4 lcm(n^2 + 4, n, 12)`.
pub fn default_q_max(n: usize) -> u64 {
    let n = n as u64;
    4 * crate::numerics::lcm(crate::numerics::lcm(n * n + 4, n), 12)
}

fn random_center_element(center: &Center, rng: &mut ChaCha8Rng) -> DVector<CScalar> {
    let r = center.dim();
    let c = DVector::from_iterator(
        r,
        (0..r).map(|_| CScalar::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))),
    );
    &center.basis * c
}

/// Minimal central projections as spectral projections of a random probe.
pub fn minimal_central_projections(
    diag: &Diagonal,
    center: &Center,
    opts: &CenterOptions,
) -> Result<(Vec<DVector<CScalar>>, u64), CenterError> {
    let r = center.dim();
    for attempt in 0..MAX_REDRAWS {
        let seed = opts.seed.wrapping_add(attempt);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = random_center_element(center, &mut rng);
        let w = random_center_element(center, &mut rng);
        let i = CScalar::new(0.0, 1.0);
        let z0 = &z + diag.adjoint(&z) + (&w - diag.adjoint(&w)) * i;
        let mut l = CMatrix::zeros(r, r);
        let mut images = Vec::with_capacity(r);
        for j in 0..r {
            images.push(diag.mul(&z0, &center.basis.column(j).into_owned())?);
        }
        for a in 0..r {
            let ea = center.basis.column(a).into_owned();
            for (b, img) in images.iter().enumerate() {
                l[(a, b)] = diag.inner(img, &ea);
            }
        }
        let l = (&l + l.adjoint()) * CScalar::new(0.5, 0.0);
        let (vals, vecs) = herm_eig(&l)?;
        let spread = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        let min_gap = vals
            .windows(2)
            .map(|p| p[1] - p[0])
            .fold(f64::INFINITY, f64::min);
        if r > 1 && min_gap < 1e-6 * spread {
            continue;
        }
        let mut out = Vec::with_capacity(r);
        for j in 0..r {
            let p = &center.basis * vecs.column(j);
            let p2 = diag.mul(&p, &p)?;
            let c = diag.inner(&p2, &p) / diag.inner(&p, &p);
            out.push(p / c);
        }
        return Ok((out, seed));
    }
    Err(CenterError::EigenvalueCollision(MAX_REDRAWS))
}

/// Multiplicity of each object in the half-braiding of a minimal central projection.
pub fn multiplicities(diag: &Diagonal, p: &DVector<CScalar>) -> Result<Vec<usize>, CenterError> {
    let tube = diag.tube;
    let mut out = Vec::with_capacity(tube.objects().len());
    for o in 0..tube.objects().len() {
        let (s, e) = diag.corner_range(o);
        let k = e - s;
        if (s..e).all(|i| p[i].norm() < 1e-10) {
            out.push(0);
            continue;
        }
        let mut mat = CMatrix::zeros(k, k);
        for (col, j) in (s..e).enumerate() {
            for i in s..e {
                if p[i].norm() < 1e-14 {
                    continue;
                }
                for &(l, v) in tube.product_labels(diag.labels[i], diag.labels[j])?.iter() {
                    let row = diag.pos[&l] - s;
                    mat[(row, col)] += p[i] * v;
                }
            }
        }
        let sv = mat.singular_values();
        let top = sv.iter().cloned().fold(0.0f64, f64::max);
        let rank = sv.iter().filter(|&&x| x > RANK_TOL * top.max(1.0)).count();
        let root = (rank as f64).sqrt().round() as usize;
        if root * root != rank {
            return Err(CenterError::NonIntegerMultiplicity {
                object: tube.object_name(o),
                rank,
            });
        }
        out.push(root);
    }
    Ok(out)
}

/// Run the whole decomposition and validate it.
pub fn decompose<'a>(
    tube: &'a Tube,
    opts: &CenterOptions,
) -> Result<(Decomposition, Diagonal<'a>), CenterError> {
    let diag = Diagonal::new(tube)?;
    let center = compute_center(&diag, opts)?;
    decompose_with_center(diag, center, opts)
}

/// Decomposition given an already computed center.
pub fn decompose_with_center<'a>(
    diag: Diagonal<'a>,
    center: Center,
    opts: &CenterOptions,
) -> Result<(Decomposition, Diagonal<'a>), CenterError> {
    let tube = diag.tube;
    let (raw, seed_used) = minimal_central_projections(&diag, &center, opts)?;
    let lambda = tube.global_dimension();
    let t = diag.t_coords()?;
    let one = diag.one_coords();
    let q_max = default_q_max(tube.data().n());
    let mut checks = DecompositionChecks::default();
    let mut total = DVector::zeros(diag.len());
    let mut projections = Vec::with_capacity(raw.len());
    for p in &raw {
        let norm = p.iter().map(|c| c.norm()).fold(0.0f64, f64::max).max(1.0);
        let p2 = diag.mul(p, p)?;
        checks.idempotent = checks
            .idempotent
            .max((&p2 - p).iter().map(|c| c.norm()).fold(0.0, f64::max) / norm);
        checks.self_adjoint = checks.self_adjoint.max(
            (diag.adjoint(p) - p)
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max)
                / norm,
        );
        checks.centrality = checks.centrality.max(center.commutator_norm(p));
        total += p;
        let tp = diag.mul(&t, p)?;
        let theta = diag.inner(&tp, p) / diag.inner(p, p);
        let resid = (&tp - p * theta)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
            / norm;
        checks.t_eigen_residual = checks.t_eigen_residual.max(resid);
        let t_snap = snap_root_of_unity(theta / theta.norm(), q_max, SNAP_TOL).ok();
        let phi = diag.phi(p).re;
        let qdim = (lambda * phi).max(0.0).sqrt();
        let mult = multiplicities(&diag, p)?;
        let from_mult: f64 = mult
            .iter()
            .enumerate()
            .map(|(o, &m)| m as f64 * tube.dim(o))
            .sum();
        checks.qdim_vs_multiplicities = checks.qdim_vs_multiplicities.max((from_mult - qdim).abs());
        let grade = mult
            .iter()
            .position(|&m| m > 0)
            .map(|o| tube.grade(o))
            .unwrap_or(0);
        projections.push(CentralProjection {
            element: diag.to_element(p),
            coords: p.clone(),
            t_eigenvalue: theta,
            t_snap,
            qdim,
            multiplicities: mult,
            grade,
        });
    }
    checks.sum_to_one = (&total - &one).iter().map(|c| c.norm()).fold(0.0, f64::max);
    for i in 0..raw.len() {
        for j in (i + 1)..raw.len().min(i + 4) {
            let prod = diag.mul(&raw[i], &raw[j])?;
            checks.orthogonality = checks
                .orthogonality
                .max(prod.iter().map(|c| c.norm()).fold(0.0, f64::max));
        }
    }
    order_projections(&mut projections, diag.corner_range(tube.identity_object()));
    let dec = Decomposition {
        center_dim: center.dim(),
        gap_ratio: center.gap_ratio,
        seed_used,
        checks,
        global_dimension: lambda,
        projections,
    };
    Ok((dec, diag))
}

/// Deterministic order: vacuum first, then by grade, quantum dimension,
/// twist and support. The vacuum is the unit-dimension projection whose
/// identity-corner coordinates sum to one (a trivial half-braiding).
fn order_projections(ps: &mut [CentralProjection], identity_corner: (usize, usize)) {
    let vacuum_weight = |p: &CentralProjection| -> f64 {
        (identity_corner.0..identity_corner.1)
            .map(|i| p.coords[i])
            .sum::<CScalar>()
            .re
    };
    if let Some(v) = (0..ps.len())
        .filter(|&i| (ps[i].qdim - 1.0).abs() < 1e-6)
        .max_by(|&a, &b| vacuum_weight(&ps[a]).total_cmp(&vacuum_weight(&ps[b])))
    {
        ps.swap(0, v);
    }
    let key = |p: &CentralProjection| {
        let twist = p
            .t_snap
            .map(|r| r.p as f64 / r.q as f64)
            .unwrap_or(p.t_eigenvalue.arg());
        (
            p.grade,
            (p.qdim * 1e6).round() as i64,
            (twist * 1e9).round() as i64,
            p.multiplicities.clone(),
        )
    };
    ps[1..].sort_by_key(key);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ghdata::preset;

    #[test]
    fn twod2_has_rank_ten() {
        let p = preset("twod2").unwrap();
        let tube = Tube::new(&p.data, &p.extension).unwrap();
        let (dec, _) = decompose(&tube, &CenterOptions::default()).unwrap();
        assert_eq!(dec.center_dim, 10);
        assert!(dec.checks.idempotent < 1e-8);
        assert!(dec.checks.sum_to_one < 1e-8);
    }
}
