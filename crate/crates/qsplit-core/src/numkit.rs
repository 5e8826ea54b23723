//! Deterministic dense complex-matrix kernels.
//!
//! Everything downstream (morphism blocks, connection matrices, Gram data)
//! is carried by [`CMatrix`]. The spectral routines are deliberately
//! self-contained: a cyclic Jacobi eigensolver for Hermitian matrices,
//! spectral functional calculus driven by a relative cutoff, and
//! Gram-matrix orthonormalization. All operations are pure; identical
//! inputs produce bit-identical outputs, which the verification layers
//! rely on for reproducible certificates.
//!
//! Conventions fixed here and used everywhere:
//! * eigenvalues are returned ascending;
//! * eigenvector phases are normalized so the first nonzero component is
//!   real positive;
//! * the operator norm is computed as sqrt(λ_max(A*A));
//! * the spectral cutoff `tau` separating "zero" from "invertible" is
//!   relative to the largest eigenvalue of the matrix at hand.

use num_complex::Complex64;
use std::fmt;
use thiserror::Error;

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Shorthand constructor for a complex scalar.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Errors from the numerical kernels.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum NumError {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },
    #[error("matrix is not positive semidefinite: min eigenvalue {min_eig:.3e}")]
    NotPositive { min_eig: f64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// Relative tolerances shared by all verification layers.
///
/// `eps_num` is the generic relative tolerance for residual checks.
/// `tau_spec_rel` fixes the spectral cutoff: eigenvalues at or below
/// `tau_spec_rel * lambda_max` are treated as exact zeros, the rest as
/// invertible. The split reflects the dichotomy that a positive element
/// of a finite-dimensional C*-algebra either is invertible or has zero
/// as an isolated spectral point; a warning is emitted when an eigenvalue
/// falls inside the ambiguous band around the cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    pub eps_num: f64,
    pub tau_spec_rel: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            eps_num: 1e-9,
            tau_spec_rel: 1e-8,
        }
    }
}

impl TolerancePolicy {
    pub fn with_eps(eps_num: f64) -> Self {
        assert!(eps_num > 0.0 && eps_num < 1.0, "eps_num must be in (0,1)");
        TolerancePolicy {
            eps_num,
            ..Default::default()
        }
    }

    /// Absolute spectral cutoff for a matrix whose largest eigenvalue is `lambda_max`.
    pub fn tau_spec(&self, lambda_max: f64) -> f64 {
        self.tau_spec_rel * lambda_max.abs()
    }
}

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(8) {
            write!(f, "  ")?;
            for j in 0..self.cols.min(8) {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f, "{}", if self.cols > 8 { "…" } else { "" })?;
        }
        if self.rows > 8 {
            writeln!(f, "  …")?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        CMatrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Real entries given row by row.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = CMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = C64::new(x, 0.0);
            }
        }
        m
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        let v: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        CMatrix::diag(&v)
    }

    /// Scalar multiple of the identity.
    pub fn scalar(n: usize, z: C64) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = z;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(
            self.cols, other.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = CMatrix::zeros(self.rows, other.cols);
        // ikj order: stream over rows of `other` for cache friendliness.
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let src = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d += a * s;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add shape mismatch");
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a + b)
            .collect();
        CMatrix::from_data(self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sub shape mismatch");
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a - b)
            .collect();
        CMatrix::from_data(self.rows, self.cols, data)
    }

    pub fn scale(&self, z: C64) -> CMatrix {
        let data = self.data.iter().map(|a| a * z).collect();
        CMatrix::from_data(self.rows, self.cols, data)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj(&self) -> CMatrix {
        let data = self.data.iter().map(|a| a.conj()).collect();
        CMatrix::from_data(self.rows, self.cols, data)
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square(), "trace of non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry magnitude; cheap bound used in pivoting decisions.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Operator norm as sqrt of the largest eigenvalue of A*A.
    pub fn op_norm(&self) -> f64 {
        if self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
            return 0.0;
        }
        // Work on the smaller Gram matrix of the two.
        let g = if self.rows <= self.cols {
            self.matmul(&self.adjoint())
        } else {
            self.adjoint().matmul(self)
        };
        let eigs = jacobi_eigenvalues_hermitian(&g);
        eigs.last().map(|&l| l.max(0.0)).unwrap_or(0.0).sqrt()
    }

    /// Kronecker product, row-major block semantics: (A⊗B)[(i·p+k),(j·q+l)] = A[i,j]·B[k,l].
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows + other.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, other);
        out
    }

    /// Copy `block` into self with top-left corner at (r0, c0).
    pub fn paste(&mut self, r0: usize, c0: usize, block: &CMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "paste out of range");
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    /// Extract the sub-block with top-left corner (r0, c0) and shape (r, c).
    pub fn block(&self, r0: usize, c0: usize, r: usize, cdim: usize) -> CMatrix {
        assert!(r0 + r <= self.rows && c0 + cdim <= self.cols, "block out of range");
        CMatrix::from_fn(r, cdim, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    /// ‖self − other‖_op, panicking on shape mismatch (internal use).
    pub fn diff_norm(&self, other: &CMatrix) -> f64 {
        self.sub(other).op_norm()
    }

    /// Hermitian part (A + A*)/2; only valid for square matrices.
    pub fn hermitian_part(&self) -> CMatrix {
        assert!(self.is_square());
        self.add(&self.adjoint()).scale(c64(0.5, 0.0))
    }
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// Ascending real eigenvalues.
    pub eigenvalues: Vec<f64>,
    /// Unitary whose columns are the corresponding eigenvectors.
    pub basis: CMatrix,
}

impl SpectralDecomposition {
    /// Rebuild U diag(λ) U*.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.eigenvalues.len();
        let mut ud = self.basis.clone();
        for j in 0..n {
            for i in 0..n {
                ud[(i, j)] *= c64(self.eigenvalues[j], 0.0);
            }
        }
        ud.matmul(&self.basis.adjoint())
    }

    /// Apply a real function to the spectrum: U diag(f(λ)) U*.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.eigenvalues.len();
        let mut ud = self.basis.clone();
        for j in 0..n {
            let fv = f(self.eigenvalues[j]);
            for i in 0..n {
                ud[(i, j)] *= c64(fv, 0.0);
            }
        }
        ud.matmul(&self.basis.adjoint())
    }
}

/// Spectral functions supported by [`apply_spectral_function`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralFn {
    /// 0 ↦ 0, λ ↦ 1/λ above the cutoff.
    PseudoInverse,
    /// 0 ↦ 0, λ ↦ 1 above the cutoff.
    SupportProjection,
    /// λ ↦ λ; useful as a reconstruction sanity check.
    Identity,
}

const MAX_JACOBI_SWEEPS: usize = 128;

/// Off-diagonal Frobenius mass.
fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let mut s = 0.0;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Core cyclic Jacobi iteration on a Hermitian matrix (not re-checked here).
/// Returns (diagonal values unsorted, accumulated unitary).
fn jacobi_core(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = a.rows();
    let mut m = a.clone();
    let mut v = CMatrix::identity(n);
    if n <= 1 {
        let d = (0..n).map(|i| m[(i, i)].re).collect();
        return (d, v);
    }
    let threshold = {
        // eps_num * ‖A‖_F convergence target, with an absolute floor to
        // terminate on exactly-zero inputs.
        let f = m.frobenius_norm();
        (1e-14 * f).max(f64::MIN_POSITIVE)
    };
    for _sweep in 0..MAX_JACOBI_SWEEPS {
        if off_diagonal_norm(&m) <= threshold {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let abs_apq = apq.norm();
                if abs_apq <= threshold / (n as f64) {
                    continue;
                }
                // Phase that makes the (p,q) entry real positive, then a
                // real Jacobi rotation on the 2x2 block.
                let u = apq / c64(abs_apq, 0.0);
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * abs_apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cth = 1.0 / (1.0 + t * t).sqrt();
                let sth = t * cth;
                // Columns transform by G = [[u·c, u·s], [−s, c]] acting on (p,q).
                let gpp = u * c64(cth, 0.0);
                let gpq = u * c64(sth, 0.0);
                let gqp = c64(-sth, 0.0);
                let gqq = c64(cth, 0.0);
                // m ← G* m G : update columns then rows.
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip * gpp + miq * gqp;
                    m[(i, q)] = mip * gpq + miq * gqq;
                }
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = gpp.conj() * mpj + gqp.conj() * mqj;
                    m[(q, j)] = gpq.conj() * mpj + gqq.conj() * mqj;
                }
                // Clean the pair we just rotated away.
                m[(p, q)] = c64(0.0, 0.0);
                m[(q, p)] = c64(0.0, 0.0);
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * gpp + viq * gqp;
                    v[(i, q)] = vip * gpq + viq * gqq;
                }
            }
        }
    }
    let d = (0..n).map(|i| m[(i, i)].re).collect();
    (d, v)
}

/// Eigenvalues only, ascending; assumes Hermitian input (used internally
/// where hermiticity is structural, e.g. for A*A).
pub(crate) fn jacobi_eigenvalues_hermitian(a: &CMatrix) -> Vec<f64> {
    let (mut d, _) = jacobi_core(a);
    d.sort_by(|x, y| x.partial_cmp(y).expect("NaN eigenvalue"));
    d
}

/// Eigendecomposition without the hermiticity precondition check; the input
/// is symmetrized first. Internal entry point for structurally Hermitian data.
pub(crate) fn hermitian_eig_unchecked(a: &CMatrix) -> SpectralDecomposition {
    let sym = a.hermitian_part();
    let (d, v) = jacobi_core(&sym);
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("NaN eigenvalue"));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut basis = CMatrix::zeros(n, n);
    for (newj, &oldj) in order.iter().enumerate() {
        let col = v.column(oldj);
        // Phase convention: first component of significant magnitude made
        // real positive, for reproducible output.
        let maxmag = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let phase = col
            .iter()
            .find(|z| z.norm() > 1e-12 * maxmag.max(f64::MIN_POSITIVE))
            .map(|z| z / c64(z.norm(), 0.0))
            .unwrap_or_else(|| c64(1.0, 0.0));
        let fix = phase.conj();
        for i in 0..n {
            basis[(i, newj)] = col[i] * fix;
        }
    }
    SpectralDecomposition { eigenvalues, basis }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Deterministic: fixed sweep order, fixed phase convention, eigenvalues
/// ascending.
pub fn hermitian_eig(a: &CMatrix, tol: &TolerancePolicy) -> Result<SpectralDecomposition, NumError> {
    if !a.is_square() {
        return Err(NumError::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let herm_residual = a.sub(&a.adjoint()).op_norm();
    let scale = a.op_norm().max(f64::MIN_POSITIVE);
    if herm_residual > tol.eps_num * scale {
        return Err(NumError::NotHermitian {
            residual: herm_residual,
            tol: tol.eps_num * scale,
        });
    }
    Ok(hermitian_eig_unchecked(a))
}

/// Spectral functional calculus on a PSD matrix.
///
/// `PseudoInverse` inverts eigenvalues above the cutoff and zeroes the
/// rest; `SupportProjection` replaces them by 1/0 accordingly. A warning
/// is printed to stderr when an eigenvalue falls in the ambiguous band
/// (tau/10, 10·tau), since the zero/invertible dichotomy is then
/// numerically fragile.
pub fn apply_spectral_function(
    a: &CMatrix,
    f: SpectralFn,
    tol: &TolerancePolicy,
) -> Result<CMatrix, NumError> {
    let dec = hermitian_eig(a, tol)?;
    let lambda_max = dec.eigenvalues.last().copied().unwrap_or(0.0);
    let min_eig = dec.eigenvalues.first().copied().unwrap_or(0.0);
    if min_eig < -tol.eps_num * lambda_max.abs().max(f64::MIN_POSITIVE) {
        return Err(NumError::NotPositive { min_eig });
    }
    let tau = tol.tau_spec(lambda_max);
    for &l in &dec.eigenvalues {
        if l > tau / 10.0 && l < 10.0 * tau {
            eprintln!(
                "warning: eigenvalue {l:.6e} lies in the ambiguous spectral band around cutoff {tau:.6e}"
            );
        }
    }
    let out = match f {
        SpectralFn::PseudoInverse => dec.map_spectrum(|l| if l > tau { 1.0 / l } else { 0.0 }),
        SpectralFn::SupportProjection => dec.map_spectrum(|l| if l > tau { 1.0 } else { 0.0 }),
        SpectralFn::Identity => dec.map_spectrum(|l| l),
    };
    Ok(out)
}

/// Orthonormalization data extracted from a PSD Gram matrix.
///
/// Returns `(v, rank)` where the columns of `v` combine the original
/// spanning family into an orthonormal basis of the quotient by the
/// null space: `v* · gram · v = I_rank`. Columns are ordered by ascending
/// eigenvalue of the Gram matrix among those above the cutoff.
pub fn gram_orthonormal_basis(
    gram: &CMatrix,
    tol: &TolerancePolicy,
) -> Result<(CMatrix, usize), NumError> {
    let dec = hermitian_eig(gram, tol)?;
    let lambda_max = dec.eigenvalues.last().copied().unwrap_or(0.0);
    let min_eig = dec.eigenvalues.first().copied().unwrap_or(0.0);
    if min_eig < -tol.eps_num * lambda_max.abs().max(f64::MIN_POSITIVE) {
        return Err(NumError::NotPositive { min_eig });
    }
    let tau = tol.tau_spec(lambda_max);
    let n = dec.eigenvalues.len();
    let kept: Vec<usize> = (0..n).filter(|&j| dec.eigenvalues[j] > tau).collect();
    let rank = kept.len();
    let mut v = CMatrix::zeros(n, rank);
    for (out_j, &j) in kept.iter().enumerate() {
        let inv_sqrt = 1.0 / dec.eigenvalues[j].sqrt();
        for i in 0..n {
            v[(i, out_j)] = dec.basis[(i, j)] * c64(inv_sqrt, 0.0);
        }
    }
    Ok((v, rank))
}

/// Residual metrics for the named property, in operator norm.
#[derive(Debug, Clone)]
pub enum ResidualKind<'a> {
    /// ‖A*A − I‖_op.
    Unitarity,
    /// max(‖A² − A‖_op, ‖A − A*‖_op).
    Projection,
    /// max(hermiticity defect, magnitude of most negative eigenvalue).
    Positivity,
    /// ‖A − B‖_op.
    Equality(&'a CMatrix),
}

/// Operator-norm residual of the named property; 0 iff the property holds exactly.
pub fn residuals(a: &CMatrix, kind: ResidualKind<'_>) -> Result<f64, NumError> {
    match kind {
        ResidualKind::Unitarity => {
            let g = a.adjoint().matmul(a);
            let i = CMatrix::identity(g.rows());
            Ok(g.sub(&i).op_norm())
        }
        ResidualKind::Projection => {
            if !a.is_square() {
                return Err(NumError::ShapeMismatch(format!(
                    "projection residual requires a square matrix, got {}x{}",
                    a.rows(),
                    a.cols()
                )));
            }
            let idem = a.matmul(a).sub(a).op_norm();
            let herm = a.sub(&a.adjoint()).op_norm();
            Ok(idem.max(herm))
        }
        ResidualKind::Positivity => {
            if !a.is_square() {
                return Err(NumError::ShapeMismatch(format!(
                    "positivity residual requires a square matrix, got {}x{}",
                    a.rows(),
                    a.cols()
                )));
            }
            let herm = a.sub(&a.adjoint()).op_norm();
            let dec = hermitian_eig_unchecked(a);
            let min_eig = dec.eigenvalues.first().copied().unwrap_or(0.0);
            Ok(herm.max((-min_eig).max(0.0)))
        }
        ResidualKind::Equality(b) => {
            if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
                return Err(NumError::ShapeMismatch(format!(
                    "equality residual shapes differ: {}x{} vs {}x{}",
                    a.rows(),
                    a.cols(),
                    b.rows(),
                    b.cols()
                )));
            }
            Ok(a.sub(b).op_norm())
        }
    }
}

/// Deterministic pseudo-random matrix utilities used by generators and tests.
pub mod rng {
    use super::{c64, CMatrix, C64};
    use rand_core::RngCore;

    /// Standard normal via Box–Muller on raw 64-bit draws; avoids any
    /// dependence on distribution-crate implementation details.
    pub fn normal(rng: &mut impl RngCore) -> f64 {
        loop {
            let u1 = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            let u2 = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            if u1 > 0.0 {
                return (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
            }
        }
    }

    pub fn complex_normal(rng: &mut impl RngCore) -> C64 {
        c64(normal(rng), normal(rng))
    }

    pub fn gaussian_matrix(rng: &mut impl RngCore, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
    }

    /// Haar-ish random unitary via Gram–Schmidt on a Gaussian matrix.
    pub fn random_unitary(rng: &mut impl RngCore, n: usize) -> CMatrix {
        loop {
            let g = gaussian_matrix(rng, n, n);
            if let Some(q) = gram_schmidt(&g) {
                return q;
            }
        }
    }

    fn gram_schmidt(m: &CMatrix) -> Option<CMatrix> {
        let n = m.rows();
        let mut cols: Vec<Vec<C64>> = (0..n).map(|j| m.column(j)).collect();
        for j in 0..n {
            for k in 0..j {
                let proj: C64 = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                for i in 0..n {
                    let d = proj * cols[k][i];
                    cols[j][i] -= d;
                }
            }
            let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-6 {
                return None;
            }
            for i in 0..n {
                cols[j][i] /= c64(norm, 0.0);
            }
        }
        let mut q = CMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                q[(i, j)] = cols[j][i];
            }
        }
        Some(q)
    }

    /// Random Hermitian matrix with entries of unit scale.
    pub fn random_hermitian(rng: &mut impl RngCore, n: usize) -> CMatrix {
        let g = gaussian_matrix(rng, n, n);
        g.add(&g.adjoint()).scale(c64(0.5, 0.0))
    }
}
