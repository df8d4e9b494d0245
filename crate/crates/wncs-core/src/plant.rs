//! Discrete-time LTI plant: `x[t+1] = A x[t] + B u[t] + w[t]`, `y[t] = C x[t]`.
//!
//! The quantity this crate cares about is the product of the unstable
//! eigenvalue magnitudes of `A`, written `Pi`. Its base-2 logarithm is the
//! minimum sensor-to-controller rate (bits per symbol) below which no control
//! law can stabilize the loop, so `Pi` is what the reliability expressions in
//! [`crate::reliability`] take as the plant-side input.

use std::path::Path;

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::montecarlo::stream_rng;

/// Classification slack for "unstable": `|lambda| > 1 + tol` counts.
pub const DEFAULT_UNSTABLE_TOL: f64 = 1e-9;

/// Symmetry / positive-semidefiniteness slack for the noise covariance.
const SIGMA_TOL: f64 = 1e-9;

/// Diagonal jitter applied when a semidefinite covariance defeats the plain
/// Cholesky factorization.
const CHOLESKY_JITTER: f64 = 1e-12;

/// Subdiagonal-decay tolerance and iteration cap for the QR eigenvalue
/// iteration.
const EIGEN_EPS: f64 = 1e-12;
const EIGEN_MAX_ITER: usize = 1000;

/// A validated discrete-time LTI plant.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantModel {
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    c: DMatrix<f64>,
    sigma: DMatrix<f64>,
}

/// Eigenvalue magnitudes of `A` (descending), the unstable product `Pi`, and
/// the rate threshold `log2(Pi)` in bits per symbol.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenAnalysis {
    pub magnitudes: Vec<f64>,
    pub unstable_product: f64,
    pub rate_threshold_bits: f64,
}

/// A simulated trajectory: `states` has `horizon + 1` entries, `inputs` has
/// `horizon`, `outputs` has `horizon + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTrajectory {
    pub states: Vec<DVector<f64>>,
    pub inputs: Vec<DVector<f64>>,
    pub outputs: Vec<f64>,
}

/// On-disk plant description: row-major nested arrays, `Sigma` optional
/// (defaults to the zero matrix).
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlantFile {
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    b: Vec<Vec<f64>>,
    #[serde(rename = "C")]
    c: Vec<Vec<f64>>,
    #[serde(rename = "Sigma")]
    sigma: Option<Vec<Vec<f64>>>,
}

fn matrix_from_rows(name: &str, rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    if rows.is_empty() {
        return Err(Error::invalid(format!("matrix {name} has no rows")));
    }
    let ncols = rows[0].len();
    if ncols == 0 {
        return Err(Error::invalid(format!("matrix {name} has empty rows")));
    }
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::invalid(format!("matrix {name} has ragged rows")));
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    Ok(DMatrix::from_row_slice(rows.len(), ncols, &flat))
}

impl PlantModel {
    pub fn new(
        a: DMatrix<f64>,
        b: DMatrix<f64>,
        c: DMatrix<f64>,
        sigma: DMatrix<f64>,
    ) -> Result<Self> {
        let m = a.nrows();
        if m == 0 || a.ncols() != m {
            return Err(Error::invalid(format!(
                "A must be square and non-empty, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if b.nrows() != m || b.ncols() == 0 {
            return Err(Error::invalid(format!(
                "B must be {m}xN with N >= 1, got {}x{}",
                b.nrows(),
                b.ncols()
            )));
        }
        if c.nrows() != 1 || c.ncols() != m {
            return Err(Error::invalid(format!(
                "C must be 1x{m}, got {}x{}",
                c.nrows(),
                c.ncols()
            )));
        }
        if sigma.nrows() != m || sigma.ncols() != m {
            return Err(Error::invalid(format!(
                "Sigma must be {m}x{m}, got {}x{}",
                sigma.nrows(),
                sigma.ncols()
            )));
        }
        for i in 0..m {
            for j in (i + 1)..m {
                if (sigma[(i, j)] - sigma[(j, i)]).abs() > SIGMA_TOL {
                    return Err(Error::invalid(format!(
                        "Sigma is not symmetric at ({i},{j}): {} vs {}",
                        sigma[(i, j)],
                        sigma[(j, i)]
                    )));
                }
            }
        }
        // Symmetrize before the eigenvalue check so the tolerance applies to
        // the PSD property, not to the asymmetry already bounded above.
        let symmetrized = (&sigma + sigma.transpose()) * 0.5;
        let eigenvalues = symmetrized
            .symmetric_eigenvalues();
        if let Some(bad) = eigenvalues.iter().find(|&&ev| ev < -SIGMA_TOL) {
            return Err(Error::invalid(format!(
                "Sigma has a negative eigenvalue {bad}; not a covariance"
            )));
        }
        Ok(PlantModel { a, b, c, sigma })
    }

    pub fn from_json_str(text: &str, origin: &Path) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        let file: PlantFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            Error::Config {
                path: origin.to_path_buf(),
                at: e.path().to_string(),
                detail: e.inner().to_string(),
            }
        })?;
        let a = matrix_from_rows("A", &file.a)?;
        let b = matrix_from_rows("B", &file.b)?;
        let c = matrix_from_rows("C", &file.c)?;
        let m = a.nrows();
        let sigma = match &file.sigma {
            Some(rows) => matrix_from_rows("Sigma", rows)?,
            None => DMatrix::zeros(m, m),
        };
        PlantModel::new(a, b, c, sigma)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text, path)
    }

    pub fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn input_dim(&self) -> usize {
        self.b.ncols()
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn c(&self) -> &DMatrix<f64> {
        &self.c
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    /// Eigenvalue magnitudes, unstable product and rate threshold of `A`.
    ///
    /// Magnitudes exceeding `1 + tol` count as unstable; the empty product is
    /// 1 (rate threshold 0). The spectrum comes from a Hessenberg/QR (Schur)
    /// iteration capped at 1000 sweeps; non-convergence is an error, and the
    /// result is cross-checked against `|det A| = prod |lambda|`.
    pub fn eigen_analyze(&self, tol: f64) -> Result<EigenAnalysis> {
        if !(tol >= 0.0) {
            return Err(Error::invalid(format!("tol must be >= 0, got {tol}")));
        }
        let schur = nalgebra::linalg::Schur::try_new(self.a.clone(), EIGEN_EPS, EIGEN_MAX_ITER)
            .ok_or_else(|| {
                Error::SpectrumNotComputed(format!(
                    "QR iteration did not converge within {EIGEN_MAX_ITER} sweeps"
                ))
            })?;
        let eigenvalues = schur.complex_eigenvalues();
        let mut magnitudes: Vec<f64> = eigenvalues.iter().map(|ev| ev.norm()).collect();

        // Cross-check the computed spectrum against the determinant.
        let det_abs = self.a.determinant().abs();
        let product_all: f64 = magnitudes.iter().product();
        let scale = det_abs.max(product_all).max(1.0);
        if (product_all - det_abs).abs() > 1e-6 * scale {
            return Err(Error::SpectrumNotComputed(format!(
                "determinant cross-check failed: prod |lambda| = {product_all}, |det A| = {det_abs}"
            )));
        }

        magnitudes.sort_by(|x, y| y.partial_cmp(x).expect("magnitudes are finite"));
        let unstable_product: f64 = magnitudes.iter().filter(|&&m| m > 1.0 + tol).product();
        Ok(EigenAnalysis {
            magnitudes,
            unstable_product,
            rate_threshold_bits: unstable_product.log2(),
        })
    }

    /// One step of the plant dynamics: `x_next = A x + B u + w`, `y = C x`.
    pub fn step(
        &self,
        x: &DVector<f64>,
        u: &DVector<f64>,
        w: &DVector<f64>,
    ) -> Result<(DVector<f64>, f64)> {
        let m = self.state_dim();
        let n = self.input_dim();
        if x.len() != m || w.len() != m || u.len() != n {
            return Err(Error::invalid(format!(
                "dimension mismatch: expected x,w of length {m} and u of length {n}, \
                 got {}, {}, {}",
                x.len(),
                w.len(),
                u.len()
            )));
        }
        let x_next = &self.a * x + &self.b * u + w;
        let y = (&self.c * x)[(0, 0)];
        Ok((x_next, y))
    }

    /// Roll the plant forward `horizon` steps from `x0`.
    ///
    /// With `gain` K supplied the input is the state feedback `u = -K x`,
    /// otherwise zero. With `noise_seed` supplied, `w[t] ~ N(0, Sigma)` drawn
    /// from the seeded generator; otherwise `w = 0`.
    pub fn simulate(
        &self,
        x0: &DVector<f64>,
        gain: Option<&DMatrix<f64>>,
        horizon: usize,
        noise_seed: Option<u64>,
    ) -> Result<StateTrajectory> {
        let m = self.state_dim();
        let n = self.input_dim();
        if horizon < 1 {
            return Err(Error::invalid("horizon must be >= 1".to_string()));
        }
        if x0.len() != m {
            return Err(Error::invalid(format!(
                "x0 must have length {m}, got {}",
                x0.len()
            )));
        }
        if let Some(k) = gain {
            if k.nrows() != n || k.ncols() != m {
                return Err(Error::invalid(format!(
                    "gain must be {n}x{m}, got {}x{}",
                    k.nrows(),
                    k.ncols()
                )));
            }
        }

        let mut noise = match noise_seed {
            Some(seed) => Some((self.noise_factor()?, stream_rng(seed, 0))),
            None => None,
        };
        let zero_w = DVector::zeros(m);
        let zero_u = DVector::zeros(n);

        let mut states = Vec::with_capacity(horizon + 1);
        let mut inputs = Vec::with_capacity(horizon);
        let mut outputs = Vec::with_capacity(horizon + 1);
        states.push(x0.clone());
        for _ in 0..horizon {
            let x = states.last().expect("non-empty").clone();
            let u = match gain {
                Some(k) => -(k * &x),
                None => zero_u.clone(),
            };
            let w = match &mut noise {
                Some((factor, rng)) => {
                    let z = DVector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal));
                    &*factor * z
                }
                None => zero_w.clone(),
            };
            let (x_next, y) = self.step(&x, &u, &w)?;
            outputs.push(y);
            inputs.push(u);
            states.push(x_next);
        }
        let y_last = (&self.c * states.last().expect("non-empty"))[(0, 0)];
        outputs.push(y_last);

        Ok(StateTrajectory {
            states,
            inputs,
            outputs,
        })
    }

    /// Cholesky factor of Sigma, retried with diagonal jitter so that
    /// semidefinite covariances (including zero) factor cleanly.
    fn noise_factor(&self) -> Result<DMatrix<f64>> {
        if let Some(chol) = Cholesky::new(self.sigma.clone()) {
            return Ok(chol.l());
        }
        let m = self.state_dim();
        let jittered = &self.sigma + DMatrix::identity(m, m) * CHOLESKY_JITTER;
        Cholesky::new(jittered)
            .map(|chol| chol.l())
            .ok_or_else(|| Error::invalid("Sigma is not positive semidefinite".to_string()))
    }
}

impl EigenAnalysis {
    /// Number of magnitudes strictly above `1 + tol`.
    pub fn unstable_count(&self, tol: f64) -> usize {
        self.magnitudes.iter().filter(|&&m| m > 1.0 + tol).count()
    }
}

impl StateTrajectory {
    pub fn horizon(&self) -> usize {
        self.inputs.len()
    }

    /// Euclidean norms of the states, `||x[t]||_2` for t = 0..=horizon.
    pub fn state_norms(&self) -> Vec<f64> {
        self.states.iter().map(|x| x.norm()).collect()
    }
}
