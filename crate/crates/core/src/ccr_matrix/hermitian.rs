use faer::{c64, Mat, MatRef, Side};

use crate::error::{Error, Result};

/// `‖A − A†‖_max ≤ HERMITIAN_RTOL · ‖A‖_max` for a matrix to count as Hermitian.
pub const HERMITIAN_RTOL: f64 = 1e-12;

/// Eigenvalues with `|λ| ≤ ZERO_EIGENVALUE_RTOL · ‖A‖` are mapped to `sgn = 0`.
pub const ZERO_EIGENVALUE_RTOL: f64 = 1e-13;

/// Dense complex Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianMatrix {
    mat: Mat<c64>,
}

pub fn max_abs(m: MatRef<'_, c64>) -> f64 {
    let mut out: f64 = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            out = out.max(m[(i, j)].norm());
        }
    }
    out
}

/// `‖A − A†‖_max / ‖A‖_max` (zero for the zero matrix).
pub fn hermitian_defect(m: MatRef<'_, c64>) -> f64 {
    let scale = max_abs(m);
    if scale == 0.0 {
        return 0.0;
    }
    let mut defect: f64 = 0.0;
    for j in 0..m.ncols() {
        for i in 0..=j.min(m.nrows() - 1) {
            defect = defect.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    defect / scale
}

impl HermitianMatrix {
    pub fn new(mat: Mat<c64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch {
                expected: mat.nrows(),
                actual: mat.ncols(),
            });
        }
        if mat.nrows() == 0 {
            return Err(crate::error::invalid("N", "empty matrix"));
        }
        let defect = hermitian_defect(mat.as_ref());
        if defect > HERMITIAN_RTOL {
            return Err(Error::NotHermitian { defect });
        }
        Ok(Self { mat })
    }

    /// Averages `A` with `A†`; for results that are Hermitian up to rounding.
    pub(crate) fn symmetrized(mat: Mat<c64>) -> Self {
        let n = mat.nrows();
        let sym = Mat::from_fn(n, n, |i, j| (mat[(i, j)] + mat[(j, i)].conj()) * 0.5);
        Self { mat: sym }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self {
            mat: Mat::from_fn(n, n, |i, j| if i == j { c64::new(diag[i], 0.0) } else { c64::new(0.0, 0.0) }),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn as_mat(&self) -> MatRef<'_, c64> {
        self.mat.as_ref()
    }

    pub fn into_mat(self) -> Mat<c64> {
        self.mat
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let n = self.dim();
        Self {
            mat: Mat::from_fn(n, n, |i, j| self.mat[(i, j)] * factor),
        }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        let n = self.dim();
        Ok(Self {
            mat: Mat::from_fn(n, n, |i, j| self.mat[(i, j)] * a + other.mat[(i, j)] * b),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(1.0, other, 1.0)
    }

    /// Entrywise complex conjugate (the transpose, for a Hermitian matrix).
    pub fn conj(&self) -> Self {
        let n = self.dim();
        Self {
            mat: Mat::from_fn(n, n, |i, j| self.mat[(i, j)].conj()),
        }
    }

    /// `D A D†` for `D = diag(phases)`.
    pub fn conjugate_by_phases(&self, phases: &[c64]) -> Result<Self> {
        if phases.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: phases.len(),
            });
        }
        let n = self.dim();
        Ok(Self {
            mat: Mat::from_fn(n, n, |i, j| phases[i] * self.mat[(i, j)] * phases[j].conj()),
        })
    }

    /// `U A U†` for a unitary `U`.
    pub fn conjugate_by(&self, u: MatRef<'_, c64>) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: u.nrows(),
            });
        }
        let prod = u * self.mat.as_ref() * u.adjoint();
        Ok(Self::symmetrized(prod))
    }

    pub fn is_real(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..n).all(|i| self.mat[(i, j)].im == 0.0))
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..n).all(|i| i == j || self.mat[(i, j)] == c64::new(0.0, 0.0)))
    }

    /// Eigenvalues in nondecreasing order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        if self.is_real() {
            let re = Mat::from_fn(self.dim(), self.dim(), |i, j| self.mat[(i, j)].re);
            return re.self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::Eigen);
        }
        self.mat
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|_| Error::Eigen)
    }

    /// Eigenvalues (nondecreasing) and the unitary whose columns are eigenvectors.
    pub fn eigen(&self) -> Result<(Vec<f64>, Mat<c64>)> {
        let n = self.dim();
        if self.is_real() {
            let re = Mat::from_fn(n, n, |i, j| self.mat[(i, j)].re);
            let evd = re.self_adjoint_eigen(Side::Lower).map_err(|_| Error::Eigen)?;
            let values = (0..n).map(|k| evd.S()[k]).collect();
            let u = evd.U();
            return Ok((values, Mat::from_fn(n, n, |i, j| c64::new(u[(i, j)], 0.0))));
        }
        let evd = self.mat.self_adjoint_eigen(Side::Lower).map_err(|_| Error::Eigen)?;
        let values = (0..n).map(|k| evd.S()[k].re).collect();
        Ok((values, evd.U().to_owned()))
    }

    /// Largest absolute eigenvalue, i.e. the operator norm.
    pub fn spectral_norm(&self) -> Result<f64> {
        let eig = self.eigenvalues()?;
        Ok(eig.iter().fold(0.0_f64, |m, v| m.max(v.abs())))
    }

    /// `⟨A v, v⟩`, real for Hermitian `A`.
    pub fn expectation(&self, v: &[c64]) -> Result<f64> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: v.len(),
            });
        }
        let n = self.dim();
        let mut acc = c64::new(0.0, 0.0);
        for j in 0..n {
            let mut col = c64::new(0.0, 0.0);
            for i in 0..n {
                col += v[i].conj() * self.mat[(i, j)];
            }
            acc += col * v[j];
        }
        Ok(acc.re)
    }
}

/// `AB − BA`.
pub fn commutator(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<Mat<c64>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    let ab = a.as_mat() * b.as_mat();
    let ba = b.as_mat() * a.as_mat();
    Ok(&ab - &ba)
}

/// Spectral sign function `V·sgn(Λ)·V†` with `sgn(0) = 0`.
///
/// Eigenvalues within [`ZERO_EIGENVALUE_RTOL`]`·‖A‖` of zero count as zero.
/// A diagonal input is handled entrywise, so `sgn` of a position grid is
/// exactly diagonal.
pub fn sgn_op(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let n = a.dim();
    if a.is_diagonal() {
        let scale = (0..n).fold(0.0_f64, |m, i| m.max(a.mat[(i, i)].re.abs()));
        let diag: Vec<f64> = (0..n)
            .map(|i| sign_with_floor(a.mat[(i, i)].re, scale * ZERO_EIGENVALUE_RTOL))
            .collect();
        return Ok(HermitianMatrix::from_real_diagonal(&diag));
    }
    let (values, vectors) = a.eigen()?;
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let signs: Vec<f64> = values
        .iter()
        .map(|&v| sign_with_floor(v, scale * ZERO_EIGENVALUE_RTOL))
        .collect();
    let scaled = Mat::from_fn(n, n, |i, j| vectors[(i, j)] * signs[j]);
    let out = &scaled * vectors.adjoint();
    Ok(HermitianMatrix::symmetrized(out))
}

/// [`sgn_op`] for an unchecked matrix; rejects non-Hermitian input.
pub fn sgn_of_matrix(m: Mat<c64>) -> Result<HermitianMatrix> {
    sgn_op(&HermitianMatrix::new(m)?)
}

fn sign_with_floor(v: f64, floor: f64) -> f64 {
    if v.abs() <= floor {
        0.0
    } else {
        v.signum()
    }
}
