//! Independent evaluation of the eight mutual-information terms from dense
//! time-domain covariance matrices.
//!
//! Nothing here goes through the frequency domain: channel operators are
//! dense circulants built from the zero-extended impulse responses, noise
//! covariances come from the folded autocorrelation, and input covariances
//! are synthesized from their eigenvalue profiles by an explicit cosine sum.
//! Each term is `(1/2n) log2 det(I + L^-1 S L^-T)` where `L L^T` is the noise
//! covariance and `S` the relevant signal covariance at that receiver.
//!
//! Dense `O(n^3)` algebra; intended for `n <= 128`.

use std::f64::consts::{LN_2, PI};

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::channel_model::ChannelSpec;
use crate::error::{Error, Result};
use crate::rate_region::{Allocation, RateBounds};
use crate::spectral::{dft, extend_impulse_response, fold_autocorrelation, RealBlock};

/// Eigenvalue floor for the positive-semidefinite test.
pub const PSD_FLOOR: f64 = -1e-9;

/// Smallest admissible noise covariance eigenvalue.
pub const NOISE_FLOOR: f64 = 1e-12;

/// `n x n` circulant matrix with entry `(i, j) = c[(i - j) mod n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantMatrix {
    first_column: Vec<f64>,
}

impl CirculantMatrix {
    pub fn new(first_column: Vec<f64>) -> Self {
        Self { first_column }
    }

    /// Real symmetric circulant whose eigenvalues are the given mirror
    /// symmetric profile: `c_t = (1/n) sum_k lambda_k cos(2 pi k t / n)`.
    pub fn from_symmetric_eigenvalues(eigenvalues: &[f64]) -> Self {
        let n = eigenvalues.len();
        let column = (0..n)
            .map(|t| {
                eigenvalues
                    .iter()
                    .enumerate()
                    .map(|(k, &l)| l * (2.0 * PI * ((k * t) % n) as f64 / n as f64).cos())
                    .sum::<f64>()
                    / n as f64
            })
            .collect();
        Self::new(column)
    }

    pub fn n(&self) -> usize {
        self.first_column.len()
    }

    pub fn first_column(&self) -> &[f64] {
        &self.first_column
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let n = self.n();
        DMatrix::from_fn(n, n, |i, j| self.first_column[(i + n - j) % n])
    }

    /// Eigenvalues in Fourier order: the DFT of the first column.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        dft(&RealBlock::new(self.first_column.clone()))
    }
}

/// Dense channel operators and noise covariances of the n-block channel.
#[derive(Debug, Clone)]
pub struct ChannelMatrices {
    // Order: h11, h12, h21, h22.
    links: [CirculantMatrix; 4],
    noise: [CirculantMatrix; 2],
}

impl ChannelMatrices {
    /// Operator from `sender` into `receiver` (both 1-based).
    pub fn link(&self, sender: usize, receiver: usize) -> &CirculantMatrix {
        &self.links[2 * (sender - 1) + (receiver - 1)]
    }

    pub fn noise(&self, receiver: usize) -> &CirculantMatrix {
        &self.noise[receiver - 1]
    }
}

pub fn build_channel_matrices(spec: &ChannelSpec, n: usize) -> Result<ChannelMatrices> {
    let link = |s, r| -> Result<CirculantMatrix> {
        Ok(CirculantMatrix::new(
            extend_impulse_response(spec.link(s, r), n)?.into_inner(),
        ))
    };
    Ok(ChannelMatrices {
        links: [link(1, 1)?, link(1, 2)?, link(2, 1)?, link(2, 2)?],
        noise: [
            CirculantMatrix::new(fold_autocorrelation(&spec.noise1, n).into_inner()),
            CirculantMatrix::new(fold_autocorrelation(&spec.noise2, n).into_inner()),
        ],
    })
}

/// Second-order structure of the Gaussian inputs
/// `X_q = sqrt(a_q P_q) W0 + sqrt((1 - a_q) P_q) W_q` in every sub-channel.
#[derive(Debug, Clone)]
pub struct JointInputModel {
    n: usize,
    x1: DMatrix<f64>,
    x2: DMatrix<f64>,
    cross: DMatrix<f64>,
    x1_given_u: DMatrix<f64>,
    x2_given_u: DMatrix<f64>,
}

impl JointInputModel {
    pub fn new(alloc: &Allocation) -> Result<Self> {
        let (p1, p2) = (alloc.power(1), alloc.power(2));
        let (a1, a2) = (alloc.fraction(1), alloc.fraction(2));
        let coherent: Vec<f64> = (0..alloc.n())
            .map(|k| (a1[k] * a2[k] * p1[k] * p2[k]).sqrt())
            .collect();
        let private = |p: &[f64], a: &[f64]| -> Vec<f64> {
            p.iter().zip(a).map(|(p, a)| (1.0 - a) * p).collect()
        };
        let circ = |v: &[f64]| CirculantMatrix::from_symmetric_eigenvalues(v).dense();
        let model = Self {
            n: alloc.n(),
            x1: circ(p1),
            x2: circ(p2),
            cross: circ(&coherent),
            x1_given_u: circ(&private(p1, a1)),
            x2_given_u: circ(&private(p2, a2)),
        };
        if !psd_check(&model.stacked()) {
            return Err(Error::InvalidAllocation(
                "joint input covariance is not positive semidefinite".into(),
            ));
        }
        Ok(model)
    }

    /// The `2n x 2n` covariance of `(x1, x2)`.
    pub fn stacked(&self) -> DMatrix<f64> {
        let n = self.n;
        let mut out = DMatrix::zeros(2 * n, 2 * n);
        out.view_mut((0, 0), (n, n)).copy_from(&self.x1);
        out.view_mut((n, n), (n, n)).copy_from(&self.x2);
        out.view_mut((0, n), (n, n)).copy_from(&self.cross);
        out.view_mut((n, 0), (n, n)).copy_from(&self.cross.transpose());
        out
    }
}

/// True iff the smallest eigenvalue of the (symmetric) matrix is at least
/// `-1e-9`.
pub fn psd_check(matrix: &DMatrix<f64>) -> bool {
    if matrix.is_empty() {
        return true;
    }
    let sym = (matrix + matrix.transpose()) * 0.5;
    SymmetricEigen::new(sym).eigenvalues.min() >= PSD_FLOOR
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

/// `log2 det(I + L^-1 S L^-T)` for noise factor `L`.
fn whitened_log2_det(noise: &Cholesky<f64, nalgebra::Dyn>, signal: &DMatrix<f64>) -> f64 {
    let l = noise.l();
    let left = l
        .solve_lower_triangular(signal)
        .expect("noise factor is nonsingular");
    let whitened = l
        .solve_lower_triangular(&left.transpose())
        .expect("noise factor is nonsingular");
    let n = signal.nrows();
    let m = symmetrize(whitened) + DMatrix::identity(n, n);
    let chol = Cholesky::new(m).expect("identity plus PSD is positive definite");
    let diag: DVector<f64> = chol.l_dirty().diagonal();
    2.0 * diag.iter().map(|d| d.ln()).sum::<f64>() / LN_2
}

/// All eight terms, in bits per channel use, from dense log-determinants.
pub fn gaussian_mi_terms(spec: &ChannelSpec, n: usize, alloc: &Allocation) -> Result<RateBounds> {
    if alloc.n() != n {
        return Err(Error::DimensionMismatch {
            what: "allocation",
            expected: n,
            found: alloc.n(),
        });
    }
    let mats = build_channel_matrices(spec, n)?;
    let input = JointInputModel::new(alloc)?;
    let stacked = input.stacked();
    let scale = 1.0 / (2.0 * n as f64);

    let mut terms = [0.0; 8];
    for receiver in 1..=2usize {
        let field = if receiver == 1 { "noise1" } else { "noise2" };
        let noise = symmetrize(mats.noise(receiver).dense());
        let min_eig = SymmetricEigen::new(noise.clone()).eigenvalues.min();
        if min_eig < NOISE_FLOOR {
            return Err(Error::SingularNoise {
                field,
                min_eigenvalue: min_eig,
            });
        }
        let chol = Cholesky::new(noise).ok_or(Error::SingularNoise {
            field,
            min_eigenvalue: min_eig,
        })?;

        let a = mats.link(1, receiver).dense();
        let b = mats.link(2, receiver).dense();
        let own1 = &a * &input.x1_given_u * a.transpose();
        let own2 = &b * &input.x2_given_u * b.transpose();
        let mut g = DMatrix::zeros(n, 2 * n);
        g.view_mut((0, 0), (n, n)).copy_from(&a);
        g.view_mut((0, n), (n, n)).copy_from(&b);
        let full = &g * &stacked * g.transpose();

        let r = receiver - 1;
        terms[r] = scale * whitened_log2_det(&chol, &own1);
        terms[2 + r] = scale * whitened_log2_det(&chol, &own2);
        terms[4 + r] = scale * whitened_log2_det(&chol, &(&own1 + &own2));
        terms[6 + r] = scale * whitened_log2_det(&chol, &full);
    }
    Ok(RateBounds::new(terms))
}
