//! Modular data of the Drinfeld center: assembly of `S` and `T` from the
//! minimal central projections, the modular axioms, Verlinde fusion rules and
//! comparison against embedded reference tables.

use crate::center::{Decomposition, Diagonal};
use crate::numerics::{herm_eig, snap_root_of_unity, CMatrix, CScalar, RootOfUnity, SNAP_TOL};
use crate::tube::TubeError;
use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModularError {
    #[error(transparent)]
    Tube(#[from] TubeError),
    #[error("unknown reference table '{0}'")]
    UnknownReference(String),
    #[error("malformed modular data: {0}")]
    Malformed(String),
    #[error("projection {index} has no support at anchor object {anchor}")]
    EmptyAnchor { index: usize, anchor: usize },
    #[error("fusion coefficient N[{i}][{j}][{k}] = {value} is not a nonnegative integer")]
    NonIntegral {
        i: usize,
        j: usize,
        k: usize,
        value: f64,
    },
}

/// Per-object data of a simple object of the center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectRecord {
    pub qdim: f64,
    /// Twist as `p/q`, or `null` if it did not snap.
    pub t_snap: Option<String>,
    /// Underlying object of the original category, as multiplicities.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub multiplicities: BTreeMap<String, usize>,
    #[serde(default)]
    pub grade: usize,
}

/// Serialized modular data. Matrices are row-major `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModularDataFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
    pub rank: usize,
    pub global_dimension: f64,
    #[serde(rename = "T")]
    pub t: Vec<[f64; 2]>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<[f64; 2]>>,
    pub objects: Vec<ObjectRecord>,
    /// Nonzero fusion coefficients `[i, j, k, N^k_ij]`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fusion: Vec<[u32; 4]>,
}

/// Modular data in memory. Index 0 is always the unit object.
#[derive(Debug, Clone)]
pub struct ModularData {
    pub name: String,
    pub global_dimension: f64,
    pub s: CMatrix,
    pub t: Vec<CScalar>,
    pub t_snap: Vec<Option<RootOfUnity>>,
    pub qdims: Vec<f64>,
    pub objects: Vec<ObjectRecord>,
}

impl ModularData {
    pub fn rank(&self) -> usize {
        self.t.len()
    }

    pub fn t_matrix(&self) -> CMatrix {
        CMatrix::from_diagonal(&DVector::from_vec(self.t.clone()))
    }

    /// `(S, T)` with every entry complex conjugated.
    pub fn conjugate(&self) -> ModularData {
        let mut md = self.clone();
        md.s = self.s.map(|c| c.conj());
        md.t = self.t.iter().map(|c| c.conj()).collect();
        md.t_snap = self
            .t_snap
            .iter()
            .map(|r| {
                r.map(|r| RootOfUnity {
                    p: (r.q - r.p) % r.q,
                    q: r.q,
                })
            })
            .collect();
        md
    }

    pub fn to_file(&self, fusion: Option<&Fusion>) -> ModularDataFile {
        ModularDataFile {
            name: Some(self.name.clone()),
            status: None,
            rank: self.rank(),
            global_dimension: self.global_dimension,
            t: self.t.iter().map(|c| [c.re, c.im]).collect(),
            s: (0..self.rank())
                .map(|i| {
                    (0..self.rank())
                        .map(|j| [self.s[(i, j)].re, self.s[(i, j)].im])
                        .collect()
                })
                .collect(),
            objects: self.objects.clone(),
            fusion: fusion.map(|f| f.sparse()).unwrap_or_default(),
        }
    }

    pub fn from_file(f: &ModularDataFile) -> Result<ModularData, ModularError> {
        let r = f.rank;
        if f.t.len() != r
            || f.s.len() != r
            || f.s.iter().any(|row| row.len() != r)
            || f.objects.len() != r
        {
            return Err(ModularError::Malformed(format!(
                "inconsistent dimensions for rank {r}"
            )));
        }
        let s = CMatrix::from_fn(r, r, |i, j| CScalar::new(f.s[i][j][0], f.s[i][j][1]));
        let t: Vec<CScalar> = f.t.iter().map(|p| CScalar::new(p[0], p[1])).collect();
        let t_snap = f
            .objects
            .iter()
            .map(|o| {
                o.t_snap
                    .as_deref()
                    .map(|s| s.parse::<RootOfUnity>().map_err(ModularError::Malformed))
                    .transpose()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ModularData {
            name: f.name.clone().unwrap_or_default(),
            global_dimension: f.global_dimension,
            s,
            t,
            t_snap,
            qdims: f.objects.iter().map(|o| o.qdim).collect(),
            objects: f.objects.clone(),
        })
    }
}

/// Assemble `S` and `T` from a decomposition:
/// `S_ij = Lambda / (d_i d_j) phi(S_0(P_i) P_j)`.
pub fn assemble(
    name: &str,
    diag: &Diagonal,
    dec: &Decomposition,
) -> Result<ModularData, ModularError> {
    let tube = diag.tube;
    let lambda = dec.global_dimension;
    let s0 = diag.s0_matrix()?;
    let ps: Vec<&DVector<CScalar>> = dec.projections.iter().map(|p| &p.coords).collect();
    let images: Vec<DVector<CScalar>> = ps.iter().map(|p| &s0 * *p).collect();
    let r = ps.len();
    let qdims: Vec<f64> = dec.projections.iter().map(|p| p.qdim).collect();
    let s = CMatrix::from_fn(r, r, |i, j| {
        diag.phi_product(&images[i], ps[j]) * (lambda / (qdims[i] * qdims[j]))
    });
    let t: Vec<CScalar> = dec.projections.iter().map(|p| p.t_eigenvalue).collect();
    let objects = dec
        .projections
        .iter()
        .map(|p| ObjectRecord {
            qdim: p.qdim,
            t_snap: p.t_snap.map(|r| r.to_string()),
            multiplicities: p
                .multiplicities
                .iter()
                .enumerate()
                .filter(|(_, &m)| m > 0)
                .map(|(o, &m)| (tube.object_name(o), m))
                .collect(),
            grade: p.grade,
        })
        .collect();
    Ok(ModularData {
        name: name.to_string(),
        global_dimension: lambda,
        s,
        t,
        t_snap: dec.projections.iter().map(|p| p.t_snap).collect(),
        qdims,
        objects,
    })
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Deviations from the modular axioms.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub unitarity: f64,
    pub symmetry: f64,
    pub st_cubed: f64,
    /// Distance of `S^2` from the nearest 0/1 permutation matrix.
    pub charge_conjugation: f64,
    pub conjugation_involution: f64,
    pub conjugation_commutes_with_t: f64,
    pub t_unitary: f64,
    /// Smallest real part in the first row of `S`.
    pub first_row_min: f64,
    pub first_row_imag: f64,
    /// `max |S_0j - d_j / Lambda|`.
    pub first_row_vs_qdims: f64,
    /// `|sum_j d_j^2 - Lambda^2| / Lambda^2`.
    pub dimension_sum: f64,
    pub t_snapped: bool,
}

impl AxiomReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.failures(tol).is_empty()
    }

    /// Names and values of the checks exceeding `tol`.
    pub fn failures(&self, tol: f64) -> Vec<(&'static str, f64)> {
        let mut out = Vec::new();
        for (name, v) in [
            ("unitarity", self.unitarity),
            ("symmetry", self.symmetry),
            ("(ST)^3 = S^2", self.st_cubed),
            ("S^2 permutation", self.charge_conjugation),
            ("C^2 = I", self.conjugation_involution),
            ("CT = TC", self.conjugation_commutes_with_t),
            ("T unitary", self.t_unitary),
            ("first row imaginary part", self.first_row_imag),
            ("first row = qdims / Lambda", self.first_row_vs_qdims),
            ("sum of squared qdims", self.dimension_sum),
        ] {
            if !(v < tol) {
                out.push((name, v));
            }
        }
        if !(self.first_row_min > 0.0) {
            out.push(("first row positivity", self.first_row_min));
        }
        if !self.t_snapped {
            out.push(("T snapping", f64::NAN));
        }
        out
    }
}

/// Check the modular axioms with `alpha = 1`.
pub fn check_axioms(md: &ModularData) -> AxiomReport {
    let r = md.rank();
    let s = &md.s;
    let t = md.t_matrix();
    let id = CMatrix::identity(r, r);
    let c = s * s;
    let st = s * &t;
    let st3 = &st * &st * &st;
    let perm = c.map(|z| CScalar::new(z.re.round().clamp(0.0, 1.0), 0.0));
    let is_perm = (0..r).all(|i| (0..r).map(|j| perm[(i, j)].re).sum::<f64>() == 1.0)
        && (0..r).all(|j| (0..r).map(|i| perm[(i, j)].re).sum::<f64>() == 1.0);
    let lambda = md.global_dimension;
    AxiomReport {
        unitarity: max_abs(&(s * s.adjoint() - &id)),
        symmetry: max_abs(&(s - s.transpose())),
        st_cubed: max_abs(&(st3 - &c)),
        charge_conjugation: if is_perm {
            max_abs(&(&c - &perm))
        } else {
            f64::INFINITY
        },
        conjugation_involution: max_abs(&(&c * &c - &id)),
        conjugation_commutes_with_t: max_abs(&(&c * &t - &t * &c)),
        t_unitary: md
            .t
            .iter()
            .map(|z| (z.norm() - 1.0).abs())
            .fold(0.0, f64::max),
        first_row_min: (0..r).map(|j| s[(0, j)].re).fold(f64::INFINITY, f64::min),
        first_row_imag: (0..r).map(|j| s[(0, j)].im.abs()).fold(0.0, f64::max),
        first_row_vs_qdims: (0..r)
            .map(|j| (s[(0, j)] - md.qdims[j] / lambda).norm())
            .fold(0.0, f64::max),
        dimension_sum: (md.qdims.iter().map(|d| d * d).sum::<f64>() - lambda * lambda).abs()
            / (lambda * lambda),
        t_snapped: md.t_snap.iter().all(|x| x.is_some()),
    }
}

/// Re-snap every `T` entry with the given bound on the order.
pub fn snap_twists(md: &mut ModularData, q_max: u64) {
    md.t_snap =
        md.t.iter()
            .map(|z| snap_root_of_unity(z / z.norm(), q_max, SNAP_TOL).ok())
            .collect();
    for (o, r) in md.objects.iter_mut().zip(&md.t_snap) {
        o.t_snap = r.map(|r| r.to_string());
    }
}

/// Fusion coefficients `N^k_ij` from the Verlinde formula.
#[derive(Debug, Clone)]
pub struct Fusion {
    pub rank: usize,
    n: Vec<u32>,
    /// Largest distance of a raw Verlinde value from its rounded integer.
    pub integrality: f64,
    /// Most negative raw value (0 if none).
    pub most_negative: f64,
}

impl Fusion {
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> u32 {
        self.n[(i * self.rank + j) * self.rank + k]
    }

    pub fn sparse(&self) -> Vec<[u32; 4]> {
        let r = self.rank;
        let mut out = Vec::new();
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let v = self.get(i, j, k);
                    if v > 0 {
                        out.push([i as u32, j as u32, k as u32, v]);
                    }
                }
            }
        }
        out
    }

    pub fn max_coefficient(&self) -> u32 {
        self.n.iter().copied().max().unwrap_or(0)
    }

    /// `max |N^k_0j - delta_jk|`.
    pub fn unit_defect(&self) -> u32 {
        let r = self.rank;
        let mut worst = 0;
        for j in 0..r {
            for k in 0..r {
                worst = worst.max(self.get(0, j, k).abs_diff(u32::from(j == k)));
            }
        }
        worst
    }

    /// Number of index tuples where `(ij)k` and `i(jk)` disagree; checked exhaustively.
    pub fn associativity_failures(&self) -> usize {
        let r = self.rank;
        let mut fails = 0;
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    for l in 0..r {
                        let mut lhs = 0u64;
                        let mut rhs = 0u64;
                        for m in 0..r {
                            lhs += self.get(i, j, m) as u64 * self.get(m, k, l) as u64;
                            rhs += self.get(j, k, m) as u64 * self.get(i, m, l) as u64;
                        }
                        if lhs != rhs {
                            fails += 1;
                        }
                    }
                }
            }
        }
        fails
    }

    /// `max |sum_k N^k_ij d_k - d_i d_j|`.
    pub fn dimension_defect(&self, qdims: &[f64]) -> f64 {
        let r = self.rank;
        let mut worst = 0.0f64;
        for i in 0..r {
            for j in 0..r {
                let lhs: f64 = (0..r).map(|k| self.get(i, j, k) as f64 * qdims[k]).sum();
                worst =
                    worst.max((lhs - qdims[i] * qdims[j]).abs() / (qdims[i] * qdims[j]).max(1.0));
            }
        }
        worst
    }
}

/// Verlinde formula `N^k_ij = sum_m S_im S_jm conj(S_km) / S_0m`.
///
/// Values are rounded to integers; an error is returned if any value is
/// further than `tol` from a nonnegative integer.
pub fn verlinde(md: &ModularData, tol: f64) -> Result<Fusion, ModularError> {
    let r = md.rank();
    let s = &md.s;
    let mut n = vec![0u32; r * r * r];
    let mut integrality = 0.0f64;
    let mut most_negative = 0.0f64;
    let mut worst: Option<(usize, usize, usize, f64)> = None;
    for i in 0..r {
        for j in 0..r {
            let w: Vec<CScalar> = (0..r).map(|m| s[(i, m)] * s[(j, m)] / s[(0, m)]).collect();
            for k in 0..r {
                let v: CScalar = (0..r).map(|m| w[m] * s[(k, m)].conj()).sum();
                let rounded = v.re.round();
                let dev = (v - CScalar::new(rounded, 0.0)).norm();
                integrality = integrality.max(dev);
                most_negative = most_negative.min(v.re);
                if (dev > tol || rounded < 0.0) && worst.is_none_or(|w| dev > w.3) {
                    worst = Some((i, j, k, v.re));
                }
                n[(i * r + j) * r + k] = rounded.max(0.0) as u32;
            }
        }
    }
    if let Some((i, j, k, value)) = worst {
        return Err(ModularError::NonIntegral { i, j, k, value });
    }
    Ok(Fusion {
        rank: r,
        n,
        integrality,
        most_negative,
    })
}

/// `S_ij` from a single minimal subprojection `p` of `P_i` at the anchor
/// object `eta`:
/// `S_ij = Lambda / d_j sum_xi d(xi) phi_xi(X_xi^* Y_xi^*)` where `X_xi` is the
/// `(xi eta|.|eta xi)` component of `P_j`, `Y_xi` the `(eta xi|.|xi eta)`
/// component of `p` and `phi_xi(x) = R_xi^* rho_xibar(x) R_xi`.
pub fn sform2_entry(
    diag: &Diagonal,
    dec: &Decomposition,
    i: usize,
    j: usize,
    anchor: usize,
) -> Result<CScalar, ModularError> {
    let tube = diag.tube;
    let p = minimal_subprojection(diag, &dec.projections[i].coords, anchor)?
        .ok_or(ModularError::EmptyAnchor { index: i, anchor })?;
    let pe = diag.to_element(&p);
    let pj = &dec.projections[j].element;
    let alg = tube.algebra();
    let mut total = CScalar::new(0.0, 0.0);
    for xi in 0..tube.objects().len() {
        let x = tube.component(pj, xi, anchor, xi);
        let y = tube.component(&pe, anchor, xi, anchor);
        if x.is_empty() || y.is_empty() {
            continue;
        }
        let prod = alg.mul(&alg.adjoint(&x), &alg.adjoint(&y));
        let r = tube.duality_isometry(xi);
        let inner = alg.mul(
            &alg.mul(&alg.adjoint(r), &tube.apply_object(tube.dual(xi), &prod)),
            r,
        );
        let (c, _) = tube.as_scalar(&inner);
        total += c * tube.dim(xi);
    }
    Ok(total * (dec.global_dimension / dec.projections[j].qdim))
}

/// A minimal projection below `P 1_anchor`, found as a spectral projection
/// of `P h P` for a fixed self-adjoint `h` of the corner.
pub fn minimal_subprojection(
    diag: &Diagonal,
    p: &DVector<CScalar>,
    anchor: usize,
) -> Result<Option<DVector<CScalar>>, ModularError> {
    let (s, e) = diag.corner_range(anchor);
    let mut q = DVector::zeros(diag.len());
    for i in s..e {
        q[i] = p[i];
    }
    let q_norm = q.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if q_norm < 1e-10 {
        return Ok(None);
    }
    // Deterministic "generic" element of the corner.
    let mut h = DVector::zeros(diag.len());
    for (k, i) in (s..e).enumerate() {
        let a = ((k as f64 + 1.0) * 0.618_033_988_75).fract() - 0.5;
        let b = ((k as f64 + 1.0) * 0.414_213_562_37).fract() - 0.5;
        h[i] = CScalar::new(a, b);
    }
    let h = &h + diag.adjoint(&h);
    let x = diag.mul(&diag.mul(&q, &h)?, &q)?;
    // Left multiplication by x on the corner, in a phi-orthonormal basis.
    let k = e - s;
    let gram = diag.gram().view((s, s), (k, k)).into_owned();
    let (gv, gvec) = herm_eig(&gram).map_err(|err| ModularError::Malformed(err.to_string()))?;
    let w = &gvec
        * CMatrix::from_diagonal(&DVector::from_iterator(
            k,
            gv.iter().map(|v| CScalar::new(1.0 / v.sqrt(), 0.0)),
        ));
    let mut lx = CMatrix::zeros(k, k);
    for c in 0..k {
        let mut basis = DVector::zeros(diag.len());
        for r in 0..k {
            basis[s + r] = w[(r, c)];
        }
        let img = diag.mul(&x, &basis)?;
        let img_c = DVector::from_iterator(k, (s..e).map(|i| img[i]));
        let col = w.adjoint() * &gram * img_c;
        lx.set_column(c, &col);
    }
    let lx = (&lx + lx.adjoint()) * CScalar::new(0.5, 0.0);
    let (vals, _) = herm_eig(&lx).map_err(|err| ModularError::Malformed(err.to_string()))?;
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let mut distinct: Vec<f64> = Vec::new();
    for &v in &vals {
        if v.abs() > 1e-8 * scale
            && distinct
                .last()
                .is_none_or(|&l| (v - l).abs() > 1e-6 * scale)
        {
            distinct.push(v);
        }
    }
    if distinct.is_empty() {
        return Ok(Some(q));
    }
    // Lagrange interpolation picks the spectral projection of distinct[0].
    let target = distinct[0];
    let mut e_proj = q.clone();
    for &mu in &distinct[1..] {
        let shifted = &x - &q * CScalar::new(mu, 0.0);
        e_proj = diag.mul(&shifted, &e_proj)? / CScalar::new(target - mu, 0.0);
    }
    Ok(Some(e_proj))
}

// ---------------------------------------------------------------------------
// Reference tables

/// Names of the embedded reference tables.
pub const REFERENCE_NAMES: [&str; 6] = ["z4", "z2xz2", "fourfourfourtwo", "ah", "twod2", "z8"];

fn reference_source(name: &str) -> Option<&'static str> {
    Some(match name {
        "z4" => include_str!("../data/reference/z4.json"),
        "z2xz2" => include_str!("../data/reference/z2xz2.json"),
        "fourfourfourtwo" => include_str!("../data/reference/fourfourfourtwo.json"),
        "ah" => include_str!("../data/reference/ah.json"),
        "twod2" => include_str!("../data/reference/twod2.json"),
        "z8" => include_str!("../data/reference/z8.json"),
        _ => return None,
    })
}

/// Load an embedded reference table.
pub fn reference(name: &str) -> Result<ModularData, ModularError> {
    let src =
        reference_source(name).ok_or_else(|| ModularError::UnknownReference(name.to_string()))?;
    let file: ModularDataFile =
        serde_json::from_str(src).map_err(|e| ModularError::Malformed(e.to_string()))?;
    ModularData::from_file(&file)
}

/// Result of matching computed data against a reference.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub matched: bool,
    /// `permutation[i]` is the computed index matched to reference object `i`.
    pub permutation: Vec<usize>,
    /// Whether the computed data was complex conjugated before matching.
    pub conjugated: bool,
    pub max_ds: f64,
    pub max_dt: f64,
    /// Number of reference objects placed in the best (possibly partial) assignment.
    pub assigned: usize,
    /// Whether `T` took part in the matching.
    pub used_t: bool,
}

/// Options for [`compare_reference`].
#[derive(Debug, Clone, Copy)]
pub struct MatchOptions {
    pub tol: f64,
    /// Require equal twists; when false only `S` is matched and `max_dt`
    /// reports the twist mismatch under the found permutation.
    pub match_t: bool,
    pub allow_conjugation: bool,
    /// Upper bound on search nodes per conjugation choice.
    pub node_limit: usize,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions {
            tol: 1e-6,
            match_t: true,
            allow_conjugation: true,
            node_limit: 5_000_000,
        }
    }
}

/// Find a permutation (and optional global conjugation) identifying `computed`
/// with `reference`.
pub fn compare_reference(
    computed: &ModularData,
    reference: &ModularData,
    opts: &MatchOptions,
) -> Comparison {
    let mut best: Option<Comparison> = None;
    let choices: &[bool] = if opts.allow_conjugation {
        &[false, true]
    } else {
        &[false]
    };
    for &conj in choices {
        let md = if conj {
            computed.conjugate()
        } else {
            computed.clone()
        };
        let result = match_once(&md, reference, opts);
        let cmp = finish(&md, reference, result, conj, opts);
        if cmp.matched {
            return cmp;
        }
        if best.as_ref().is_none_or(|b| cmp.assigned > b.assigned) {
            best = Some(cmp);
        }
    }
    best.expect("at least one matching attempt")
}

fn finish(
    md: &ModularData,
    reference: &ModularData,
    (perm, complete): (Vec<Option<usize>>, bool),
    conj: bool,
    opts: &MatchOptions,
) -> Comparison {
    let assigned = perm.iter().filter(|p| p.is_some()).count();
    let mut max_ds = 0.0f64;
    let mut max_dt = 0.0f64;
    for (i, pi) in perm.iter().enumerate() {
        let Some(pi) = *pi else { continue };
        max_dt = max_dt.max((md.t[pi] - reference.t[i]).norm());
        for (k, pk) in perm.iter().enumerate() {
            if let Some(pk) = *pk {
                max_ds = max_ds.max((md.s[(pi, pk)] - reference.s[(i, k)]).norm());
            }
        }
    }
    let matched = complete && max_ds < opts.tol && (!opts.match_t || max_dt < opts.tol);
    Comparison {
        matched,
        permutation: perm.iter().map(|p| p.unwrap_or(usize::MAX)).collect(),
        conjugated: conj,
        max_ds,
        max_dt,
        assigned,
        used_t: opts.match_t,
    }
}

fn sorted_abs_row(s: &CMatrix, i: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..s.ncols()).map(|j| s[(i, j)].norm()).collect();
    v.sort_by(f64::total_cmp);
    v
}

fn match_once(
    md: &ModularData,
    reference: &ModularData,
    opts: &MatchOptions,
) -> (Vec<Option<usize>>, bool) {
    let r = reference.rank();
    if md.rank() != r {
        return (vec![None; r], false);
    }
    let key_tol = 1e-5;
    let comp_rows: Vec<Vec<f64>> = (0..r).map(|j| sorted_abs_row(&md.s, j)).collect();
    let ref_rows: Vec<Vec<f64>> = (0..r).map(|i| sorted_abs_row(&reference.s, i)).collect();
    let candidates: Vec<Vec<usize>> = (0..r)
        .map(|i| {
            (0..r)
                .filter(|&j| {
                    (!opts.match_t || (md.t[j] - reference.t[i]).norm() < key_tol)
                        && (md.s[(0, j)] - reference.s[(0, i)]).norm() < key_tol
                        && comp_rows[j]
                            .iter()
                            .zip(&ref_rows[i])
                            .all(|(a, b)| (a - b).abs() < key_tol)
                })
                .collect()
        })
        .collect();
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by_key(|&i| (candidates[i].len(), i));
    let mut search = Search {
        md,
        reference,
        candidates: &candidates,
        order: &order,
        tol: opts.tol,
        perm: vec![None; r],
        used: vec![false; r],
        best: vec![None; r],
        best_depth: 0,
        nodes: 0,
        limit: opts.node_limit,
        match_t: opts.match_t,
    };
    if search.run(0) {
        (search.perm, true)
    } else {
        (search.best, false)
    }
}

struct Search<'a> {
    md: &'a ModularData,
    reference: &'a ModularData,
    candidates: &'a [Vec<usize>],
    order: &'a [usize],
    tol: f64,
    perm: Vec<Option<usize>>,
    used: Vec<bool>,
    best: Vec<Option<usize>>,
    best_depth: usize,
    nodes: usize,
    limit: usize,
    match_t: bool,
}

impl Search<'_> {
    fn consistent(&self, i: usize, j: usize) -> bool {
        if self.match_t && (self.md.t[j] - self.reference.t[i]).norm() >= self.tol {
            return false;
        }
        if (self.md.s[(j, j)] - self.reference.s[(i, i)]).norm() >= self.tol {
            return false;
        }
        self.perm.iter().enumerate().all(|(k, pk)| match pk {
            Some(pk) => (self.md.s[(j, *pk)] - self.reference.s[(i, k)]).norm() < self.tol,
            None => true,
        })
    }

    fn run(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        if depth > self.best_depth {
            self.best_depth = depth;
            self.best = self.perm.clone();
        }
        let i = self.order[depth];
        for idx in 0..self.candidates[i].len() {
            let j = self.candidates[i][idx];
            self.nodes += 1;
            if self.nodes > self.limit {
                return false;
            }
            if self.used[j] || !self.consistent(i, j) {
                continue;
            }
            self.perm[i] = Some(j);
            self.used[j] = true;
            if self.run(depth + 1) {
                return true;
            }
            self.perm[i] = None;
            self.used[j] = false;
        }
        false
    }
}

// ---------------------------------------------------------------------------
// Tensor factorization

#[derive(Deserialize)]
struct FactorPairFile {
    #[serde(rename = "S")]
    s: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "T")]
    t: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
struct FactorsFile {
    factors: Vec<FactorPairFile>,
}

/// One tensor factor `(S_x, T_x)` of a product of modular data.
#[derive(Debug, Clone)]
pub struct Factor {
    pub s: CMatrix,
    pub t: Vec<CScalar>,
}

impl Factor {
    /// Deviation of the factor from being modular data in its own right, up to
    /// the scalar `alpha` in `(ST)^3 = alpha S^2`.
    pub fn axiom_defect(&self) -> f64 {
        let r = self.t.len();
        let t = CMatrix::from_diagonal(&DVector::from_vec(self.t.clone()));
        let st = &self.s * &t;
        let st3 = &st * &st * &st;
        let s2 = &self.s * &self.s;
        let alpha = st3.trace() / s2.trace();
        [
            max_abs(&(&self.s * self.s.adjoint() - CMatrix::identity(r, r))),
            max_abs(&(&self.s - self.s.transpose())),
            max_abs(&(st3 - s2 * alpha)),
            (alpha.norm() - 1.0).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Embedded tensor factors of a reference table, if it is printed as a product.
pub fn reference_factors(name: &str) -> Result<Option<Vec<Factor>>, ModularError> {
    let src = match name {
        "z2xz2" => include_str!("../data/reference/z2xz2_factors.json"),
        _ => return Ok(None),
    };
    let file: FactorsFile =
        serde_json::from_str(src).map_err(|e| ModularError::Malformed(e.to_string()))?;
    let factors = file
        .factors
        .iter()
        .map(|f| {
            let r = f.t.len();
            if f.s.len() != r || f.s.iter().any(|row| row.len() != r) {
                return Err(ModularError::Malformed("factor shape".into()));
            }
            Ok(Factor {
                s: CMatrix::from_fn(r, r, |i, j| CScalar::new(f.s[i][j][0], f.s[i][j][1])),
                t: f.t.iter().map(|p| CScalar::new(p[0], p[1])).collect(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Some(factors))
}

/// `S = S_1 (x) S_2 (x) ...`, `T = T_1 (x) T_2 (x) ...` as modular data.
pub fn tensor_product(name: &str, factors: &[Factor], global_dimension: f64) -> ModularData {
    let mut s = CMatrix::identity(1, 1);
    let mut t = vec![CScalar::new(1.0, 0.0)];
    for f in factors {
        s = s.kronecker(&f.s);
        t = t
            .iter()
            .flat_map(|a| f.t.iter().map(move |b| a * b))
            .collect();
    }
    let r = t.len();
    let s00 = s[(0, 0)].re;
    let qdims: Vec<f64> = (0..r).map(|j| s[(0, j)].re / s00).collect();
    let t_snap: Vec<Option<RootOfUnity>> = t
        .iter()
        .map(|z| snap_root_of_unity(*z, 4096, SNAP_TOL).ok())
        .collect();
    let objects = qdims
        .iter()
        .zip(&t_snap)
        .map(|(&qdim, r)| ObjectRecord {
            qdim,
            t_snap: r.map(|r| r.to_string()),
            multiplicities: BTreeMap::new(),
            grade: 0,
        })
        .collect();
    ModularData {
        name: name.to_string(),
        global_dimension,
        s,
        t,
        t_snap,
        qdims,
        objects,
    }
}

/// Outcome of testing computed data against a printed tensor factorization.
#[derive(Debug, Clone, Serialize)]
pub struct FactorizationReport {
    /// Largest [`Factor::axiom_defect`] over the factors.
    pub factor_defect: f64,
    pub comparison: Comparison,
}

impl FactorizationReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.comparison.matched && self.factor_defect < tol
    }
}

/// Match `computed` against the tensor product of `factors`.
pub fn check_factorization(
    computed: &ModularData,
    factors: &[Factor],
    opts: &MatchOptions,
) -> FactorizationReport {
    let product = tensor_product(&computed.name, factors, computed.global_dimension);
    FactorizationReport {
        factor_defect: factors.iter().map(Factor::axiom_defect).fold(0.0, f64::max),
        comparison: compare_reference(computed, &product, opts),
    }
}

/// Number of simple objects in each grade, indexed by grade.
pub fn grading_counts(md: &ModularData) -> Vec<usize> {
    let top = md.objects.iter().map(|o| o.grade).max().unwrap_or(0);
    let mut counts = vec![0; top + 1];
    for o in &md.objects {
        counts[o.grade] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_references_satisfy_unitarity_and_symmetry() {
        for name in REFERENCE_NAMES {
            let md = reference(name).unwrap();
            let rep = check_axioms(&md);
            assert!(rep.unitarity < 1e-12, "{name}: {}", rep.unitarity);
            assert!(rep.symmetry < 1e-12, "{name}");
        }
    }

    #[test]
    fn reference_matches_itself_under_shuffle() {
        let md = reference("twod2").unwrap();
        let perm = [0usize, 1, 3, 2, 6, 7, 4, 5, 9, 8];
        let mut shuffled = md.clone();
        shuffled.s = CMatrix::from_fn(10, 10, |i, j| md.s[(perm[i], perm[j])]);
        shuffled.t = perm.iter().map(|&i| md.t[i]).collect();
        let cmp = compare_reference(&shuffled, &md, &MatchOptions::default());
        assert!(cmp.matched);
        assert!(cmp.max_ds < 1e-12);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let md = reference("ah").unwrap();
        let file = md.to_file(None);
        let text = serde_json::to_string(&file).unwrap();
        let back: ModularDataFile = serde_json::from_str(&text).unwrap();
        assert_eq!(file, back);
    }

    #[test]
    fn z2xz2_reference_is_the_product_of_its_factors() {
        let md = reference("z2xz2").unwrap();
        let factors = reference_factors("z2xz2").unwrap().unwrap();
        let report = check_factorization(&md, &factors, &MatchOptions::default());
        assert!(report.passes(1e-9), "{report:?}");
        assert!(report.comparison.max_ds < 1e-12);
    }

    #[test]
    fn grading_counts_by_grade() {
        let mut md = reference("twod2").unwrap();
        for (i, o) in md.objects.iter_mut().enumerate() {
            o.grade = i % 3;
        }
        assert_eq!(grading_counts(&md), vec![4, 3, 3]);
    }
}
