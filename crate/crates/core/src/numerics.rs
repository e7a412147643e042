//! Dense complex linear algebra helpers and root-of-unity recognition.
//!
//! Everything downstream works in double precision complex arithmetic. The
//! routines here wrap `nalgebra` with the extra checks the pipeline relies on:
//! Hermiticity guards, eigen-residual verification, numerically stable kernels
//! and exact recognition of roots of unity.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

/// Complex scalar used throughout the crate.
pub type CScalar = Complex64;

/// Dense complex matrix.
pub type CMatrix = DMatrix<Complex64>;

/// Entries smaller than this are treated as exact zeros when sparsifying.
pub const CHOP_TOL: f64 = 1e-12;
/// Residual tolerance for decompositions (eigen, projection, centrality).
pub const DECOMPOSITION_TOL: f64 = 1e-9;
/// Tolerance used when comparing against reference tables.
pub const COMPARISON_TOL: f64 = 1e-6;
/// Default tolerance for root-of-unity snapping.
pub const SNAP_TOL: f64 = 1e-7;

/// Errors raised by the numerical layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("matrix is not Hermitian: max |A - A^H| = {max_asymmetry:e}")]
    NotHermitian { max_asymmetry: f64 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("eigendecomposition residual {residual:e} exceeds {bound:e}")]
    EigenResidual { residual: f64, bound: f64 },
    #[error("{value} is not within {tol:e} of a root of unity of order <= {q_max}")]
    NotRootOfUnity { value: String, q_max: u64, tol: f64 },
    #[error("{value} is ambiguous: matches both {first} and {second} within {tol:e}")]
    AmbiguousRootOfUnity {
        value: String,
        first: RootOfUnity,
        second: RootOfUnity,
        tol: f64,
    },
}

/// Summation mode for long reductions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    /// Plain floating point accumulation.
    #[default]
    Standard,
    /// Neumaier compensated summation.
    Compensated,
}

impl std::str::FromStr for Precision {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(Precision::Standard),
            "compensated" => Ok(Precision::Compensated),
            other => Err(format!("unknown precision mode '{other}'")),
        }
    }
}

/// Complex accumulator honouring a [`Precision`] mode.
#[derive(Debug, Clone, Copy)]
pub struct Accumulator {
    mode: Precision,
    sum: CScalar,
    comp: CScalar,
}

impl Accumulator {
    pub fn new(mode: Precision) -> Self {
        Accumulator {
            mode,
            sum: CScalar::new(0.0, 0.0),
            comp: CScalar::new(0.0, 0.0),
        }
    }

    pub fn add(&mut self, x: CScalar) {
        match self.mode {
            Precision::Standard => self.sum += x,
            Precision::Compensated => {
                let (re, cre) = neumaier_step(self.sum.re, self.comp.re, x.re);
                let (im, cim) = neumaier_step(self.sum.im, self.comp.im, x.im);
                self.sum = CScalar::new(re, im);
                self.comp = CScalar::new(cre, cim);
            }
        }
    }

    pub fn value(&self) -> CScalar {
        self.sum + self.comp
    }
}

fn neumaier_step(sum: f64, comp: f64, x: f64) -> (f64, f64) {
    let t = sum + x;
    let c = if sum.abs() >= x.abs() {
        (sum - t) + x
    } else {
        (x - t) + sum
    };
    (t, comp + c)
}

/// Sum an iterator of complex numbers in the given precision mode.
pub fn csum<I: IntoIterator<Item = CScalar>>(mode: Precision, items: I) -> CScalar {
    let mut acc = Accumulator::new(mode);
    for x in items {
        acc.add(x);
    }
    acc.value()
}

/// `e^{2 pi i p / q}`.
pub fn root_of_unity(p: i64, q: u64) -> CScalar {
    let angle = 2.0 * PI * (p as f64) / (q as f64);
    CScalar::new(angle.cos(), angle.sin())
}

/// Operator 2-norm proxy: the Frobenius norm.
pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entry modulus of `a - a^H`.
pub fn hermitian_defect(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in ascending order together with the matrix whose
/// columns are the corresponding orthonormal eigenvectors. Inputs whose
/// Hermitian defect exceeds `1e-10` (relative to the largest entry, with an
/// absolute floor) are rejected, and the result is checked to satisfy
/// `||A V - V diag(w)|| < 1e-10 ||A||`.
pub fn herm_eig(a: &CMatrix) -> Result<(Vec<f64>, CMatrix), NumericsError> {
    if a.nrows() != a.ncols() {
        return Err(NumericsError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let n = a.nrows();
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let scale = a.iter().map(|z| z.norm()).fold(0.0f64, f64::max).max(1.0);
    let defect = hermitian_defect(a);
    if defect > 1e-10 * scale {
        return Err(NumericsError::NotHermitian {
            max_asymmetry: defect,
        });
    }
    let sym = (a + a.adjoint()) * CScalar::new(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(sym.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    let norm = frobenius(&sym).max(f64::MIN_POSITIVE);
    let mut resid = sym * &vectors;
    for (col, &w) in values.iter().enumerate() {
        let v = vectors.column(col) * CScalar::new(w, 0.0);
        let mut c = resid.column_mut(col);
        c -= v;
    }
    let residual = frobenius(&resid);
    let bound = 1e-10 * norm.max(1.0) * (n as f64).sqrt();
    if residual > bound {
        return Err(NumericsError::EigenResidual { residual, bound });
    }
    Ok((values, vectors))
}

/// Orthonormal basis (as columns) of the kernel of `a`.
///
/// Singular values below `rel_tol * sigma_max` count as zero.
pub fn nullspace(a: &CMatrix, rel_tol: f64) -> CMatrix {
    let cols = a.ncols();
    if cols == 0 {
        return CMatrix::zeros(0, 0);
    }
    // Pad with zero rows so the SVD always yields a full right factor.
    let rows = a.nrows().max(cols);
    let mut padded = CMatrix::zeros(rows, cols);
    padded.view_mut((0, 0), (a.nrows(), cols)).copy_from(a);
    let svd = nalgebra::SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let cutoff = rel_tol * sigma_max.max(f64::MIN_POSITIVE);
    let kernel: Vec<usize> = (0..cols)
        .filter(|&i| sigma_max == 0.0 || svd.singular_values[i] <= cutoff)
        .collect();
    let mut out = CMatrix::zeros(cols, kernel.len());
    for (k, &i) in kernel.iter().enumerate() {
        for j in 0..cols {
            out[(j, k)] = v_t[(i, j)].conj();
        }
    }
    out
}

/// Kernel of a positive semidefinite Hermitian matrix together with its gap.
#[derive(Debug, Clone)]
pub struct PsdKernel {
    /// Orthonormal kernel vectors as columns.
    pub basis: CMatrix,
    /// Largest eigenvalue counted as zero, relative to the largest eigenvalue.
    pub largest_null: f64,
    /// Smallest eigenvalue counted as non-zero, relative to the largest eigenvalue.
    pub smallest_nonnull: f64,
}

impl PsdKernel {
    /// Ratio between the smallest retained and largest discarded relative eigenvalue.
    pub fn gap_ratio(&self) -> f64 {
        if self.largest_null <= 0.0 {
            f64::INFINITY
        } else {
            self.smallest_nonnull / self.largest_null
        }
    }
}

/// Kernel of a PSD Hermitian matrix: eigenvectors with eigenvalue `<= rel_tol * max`.
pub fn psd_kernel(m: &CMatrix, rel_tol: f64) -> Result<PsdKernel, NumericsError> {
    let (values, vectors) = herm_eig(m)?;
    let top = values
        .last()
        .copied()
        .unwrap_or(0.0)
        .abs()
        .max(f64::MIN_POSITIVE);
    let null: Vec<usize> = (0..values.len())
        .filter(|&i| values[i] <= rel_tol * top)
        .collect();
    let largest_null = null
        .iter()
        .map(|&i| values[i].abs() / top)
        .fold(0.0f64, f64::max);
    let smallest_nonnull = (0..values.len())
        .filter(|i| !null.contains(i))
        .map(|i| values[i] / top)
        .fold(f64::INFINITY, f64::min);
    let mut basis = CMatrix::zeros(m.nrows(), null.len());
    for (k, &i) in null.iter().enumerate() {
        basis.set_column(k, &vectors.column(i));
    }
    Ok(PsdKernel {
        basis,
        largest_null,
        smallest_nonnull,
    })
}

/// A root of unity `e^{2 pi i p/q}` with `0 <= p < q` and `gcd(p, q) = 1`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub struct RootOfUnity {
    pub p: u64,
    pub q: u64,
}

impl RootOfUnity {
    pub fn value(&self) -> CScalar {
        root_of_unity(self.p as i64, self.q)
    }
}

impl std::fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl std::str::FromStr for RootOfUnity {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (p, q) = s
            .split_once('/')
            .ok_or_else(|| format!("expected p/q, got '{s}'"))?;
        let p: u64 = p
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in '{s}'"))?;
        let q: u64 = q
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in '{s}'"))?;
        if q == 0 {
            return Err("denominator must be positive".into());
        }
        let g = gcd(p % q, q);
        Ok(RootOfUnity {
            p: (p % q) / g,
            q: q / g,
        })
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Recognise `z` as `e^{2 pi i p/q}` with the smallest admissible `q <= q_max`.
pub fn snap_root_of_unity(z: CScalar, q_max: u64, tol: f64) -> Result<RootOfUnity, NumericsError> {
    let mut found: Option<RootOfUnity> = None;
    for q in 1..=q_max {
        let turns = z.arg() / (2.0 * PI) * q as f64;
        for cand in [turns.floor(), turns.ceil()] {
            let p = (cand as i64).rem_euclid(q as i64) as u64;
            if gcd(p, q) != 1 && !(p == 0 && q == 1) {
                continue;
            }
            let r = RootOfUnity { p, q };
            if (r.value() - z).norm() < tol {
                match found {
                    None => found = Some(r),
                    Some(first) if first != r => {
                        return Err(NumericsError::AmbiguousRootOfUnity {
                            value: format!("{z}"),
                            first,
                            second: r,
                            tol,
                        })
                    }
                    _ => {}
                }
            }
        }
    }
    found.ok_or(NumericsError::NotRootOfUnity {
        value: format!("{z}"),
        q_max,
        tol,
    })
}

/// Set entries below [`CHOP_TOL`] in modulus to zero (componentwise).
pub fn chop(z: CScalar) -> CScalar {
    CScalar::new(
        if z.re.abs() < CHOP_TOL { 0.0 } else { z.re },
        if z.im.abs() < CHOP_TOL { 0.0 } else { z.im },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snaps_small_examples() {
        assert_eq!(
            snap_root_of_unity(CScalar::new(1.0, 0.0), 240, 1e-7).unwrap(),
            RootOfUnity { p: 0, q: 1 }
        );
        assert_eq!(
            snap_root_of_unity(root_of_unity(1, 5), 240, 1e-7).unwrap(),
            RootOfUnity { p: 1, q: 5 }
        );
        assert_eq!(
            snap_root_of_unity(root_of_unity(3, 17), 240, 1e-7).unwrap(),
            RootOfUnity { p: 3, q: 17 }
        );
        assert_eq!(
            snap_root_of_unity(CScalar::new(-1.0, 0.0), 240, 1e-7).unwrap(),
            RootOfUnity { p: 1, q: 2 }
        );
    }

    #[test]
    fn snap_rejects_non_roots() {
        assert!(matches!(
            snap_root_of_unity(CScalar::new(0.5, 0.1), 50, 1e-7),
            Err(NumericsError::NotRootOfUnity { .. })
        ));
    }

    #[test]
    fn snap_reports_ambiguity_for_loose_tolerance() {
        let r = snap_root_of_unity(root_of_unity(1, 7), 60, 0.2);
        assert!(matches!(r, Err(NumericsError::AmbiguousRootOfUnity { .. })));
    }

    #[test]
    fn herm_eig_rejects_asymmetric_input() {
        let a = CMatrix::from_row_slice(
            2,
            2,
            &[
                CScalar::new(1.0, 0.0),
                CScalar::new(1.0, 0.0),
                CScalar::new(0.0, 0.0),
                CScalar::new(1.0, 0.0),
            ],
        );
        match herm_eig(&a) {
            Err(NumericsError::NotHermitian { max_asymmetry }) => {
                assert!((max_asymmetry - 1.0).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn herm_eig_orders_ascending() {
        let i = CScalar::new(0.0, 1.0);
        let a = CMatrix::from_row_slice(
            2,
            2,
            &[CScalar::new(2.0, 0.0), i, -i, CScalar::new(2.0, 0.0)],
        );
        let (w, v) = herm_eig(&a).unwrap();
        assert!((w[0] - 1.0).abs() < 1e-12 && (w[1] - 3.0).abs() < 1e-12);
        let check = &a * &v
            - &v * CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                2,
                w.iter().map(|&x| CScalar::new(x, 0.0)),
            ));
        assert!(frobenius(&check) < 1e-12);
    }

    #[test]
    fn nullspace_is_orthonormal_kernel() {
        let one = CScalar::new(1.0, 0.0);
        let a = CMatrix::from_row_slice(1, 3, &[one, one, one]);
        let k = nullspace(&a, 1e-9);
        assert_eq!(k.ncols(), 2);
        assert!(frobenius(&(&a * &k)) < 1e-12);
        let gram = k.adjoint() * &k;
        assert!(frobenius(&(gram - CMatrix::identity(2, 2))) < 1e-12);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let items = [
            CScalar::new(1e16, 0.0),
            CScalar::new(1.0, 0.0),
            CScalar::new(-1e16, 0.0),
        ];
        assert_eq!(csum(Precision::Compensated, items).re, 1.0);
    }

    #[test]
    fn parses_fraction() {
        let r: RootOfUnity = "6/8".parse().unwrap();
        assert_eq!(r, RootOfUnity { p: 3, q: 4 });
    }
}
