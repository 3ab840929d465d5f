//! Eigenvalues, primitive idempotents and Krein parameters of the
//! Bose-Mesner algebra.
//!
//! The d+1 eigenvalues come from the tridiagonal intersection matrix rather
//! than the n×n adjacency matrix; the idempotents are then obtained as
//! Lagrange products in `A`, which only needs dense matrix multiplication.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::IntersectionData;
use crate::tolerance::Tolerance;

/// Tridiagonal intersection matrix with rows (c_i, a_i, b_i).
pub fn intersection_matrix(idata: &IntersectionData) -> DMatrix<f64> {
    let m = idata.diameter() + 1;
    let mut t = DMatrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = idata.a(i) as f64;
        if i > 0 {
            t[(i, i - 1)] = idata.c(i) as f64;
        }
        if i + 1 < m {
            t[(i, i + 1)] = idata.b(i) as f64;
        }
    }
    t
}

/// Eigenvalues of the symmetric tridiagonal matrix with the given diagonal
/// and off-diagonal (`off[i]` couples rows `i` and `i + 1`), ascending.
///
/// Sturm-sequence bisection: deterministic, and each eigenvalue is resolved
/// to a few ulps independently of the others.
pub fn symmetric_tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let m = diag.len();
    if m == 0 || off.len() + 1 != m {
        return Err(Error::EigensolverFailure(format!(
            "inconsistent tridiagonal shape: {} diagonal, {} off-diagonal entries",
            m,
            off.len()
        )));
    }
    if diag.iter().chain(off).any(|v| !v.is_finite()) {
        return Err(Error::EigensolverFailure("non-finite matrix entry".into()));
    }

    let radius = |i: usize| {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < m { off[i].abs() } else { 0.0 };
        left + right
    };
    let mut lower = (0..m).map(|i| diag[i] - radius(i)).fold(f64::INFINITY, f64::min);
    let mut upper = (0..m).map(|i| diag[i] + radius(i)).fold(f64::NEG_INFINITY, f64::max);
    let span = (upper - lower).abs().max(1.0);
    lower -= span * 1e-3;
    upper += span * 1e-3;

    let scale = diag.iter().chain(off).fold(1.0f64, |acc, v| acc.max(v.abs()));
    let pivmin = f64::MIN_POSITIVE.max(f64::EPSILON * f64::EPSILON * scale * scale);

    // number of eigenvalues strictly below x
    let count_below = |x: f64| -> usize {
        let mut count = 0;
        let mut q = diag[0] - x;
        for i in 0..m {
            if i > 0 {
                q = diag[i] - x - off[i - 1] * off[i - 1] / q;
            }
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };

    let mut values = Vec::with_capacity(m);
    for k in 0..m {
        let (mut lo, mut hi) = (lower, upper);
        let mut converged = false;
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + pivmin || mid == lo || mid == hi {
                converged = true;
                break;
            }
            if count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        if !converged {
            return Err(Error::EigensolverFailure(format!("bisection for eigenvalue {k} did not converge")));
        }
        values.push(0.5 * (lo + hi));
    }
    Ok(values)
}

/// The d+1 distinct eigenvalues of A: θ_0 = k first, the rest descending.
pub fn eigenvalues(idata: &IntersectionData, tol: Tolerance) -> Result<Vec<f64>> {
    let m = idata.diameter() + 1;
    let diag: Vec<f64> = (0..m).map(|i| idata.a(i) as f64).collect();
    // diagonal similarity makes T symmetric with off-diagonal sqrt(b_{i-1} c_i)
    let off: Vec<f64> = (1..m)
        .map(|i| ((idata.b(i - 1) * idata.c(i)) as f64).sqrt())
        .collect();
    let mut theta = symmetric_tridiagonal_eigenvalues(&diag, &off)?;
    theta.reverse();

    let k = idata.valency() as f64;
    if !tol.accepts(theta[0] - k, k) {
        return Err(Error::EigensolverFailure(format!(
            "largest eigenvalue {} differs from the valency {k}",
            theta[0]
        )));
    }
    theta[0] = k;

    for i in 0..m {
        for j in (i + 1)..m {
            let gap = (theta[i] - theta[j]).abs();
            if tol.accepts(gap, theta[i].abs().max(theta[j].abs())) {
                return Err(Error::DegenerateSpectrum { i, j, gap });
            }
        }
    }
    Ok(theta)
}

/// E_i = Π_{j≠i} (A − θ_j I) / (θ_i − θ_j), checked against
/// E_i E_j = δ_ij E_i.
pub fn primitive_idempotents(a: &DMatrix<f64>, theta: &[f64], tol: Tolerance) -> Result<Vec<DMatrix<f64>>> {
    let n = a.nrows();
    let mut out = Vec::with_capacity(theta.len());
    for (i, &ti) in theta.iter().enumerate() {
        let mut e = DMatrix::<f64>::identity(n, n);
        for (j, &tj) in theta.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut factor = a.clone();
            for x in 0..n {
                factor[(x, x)] -= tj;
            }
            e = (&e * &factor) / (ti - tj);
        }
        let sym = (&e + e.transpose()) * 0.5;
        out.push(sym);
    }

    for i in 0..out.len() {
        for j in i..out.len() {
            let prod = &out[i] * &out[j];
            let residual = if i == j {
                max_abs_diff(&prod, &out[i])
            } else {
                max_abs(&prod)
            };
            if !tol.accepts(residual, 1.0) {
                return Err(Error::IdempotencyViolation { i, j, residual });
            }
        }
    }
    Ok(out)
}

/// Eigenvalues, multiplicities and primitive idempotents, all indexed
/// consistently (`theta[i]` is the eigenvalue of `idempotents[i]`).
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    theta: Vec<f64>,
    mult: Vec<f64>,
    idempotents: Vec<DMatrix<f64>>,
}

impl SpectralDecomposition {
    pub fn compute(a: &DMatrix<f64>, idata: &IntersectionData, tol: Tolerance) -> Result<Self> {
        let theta = eigenvalues(idata, tol)?;
        let idempotents = primitive_idempotents(a, &theta, tol)?;
        let mult: Vec<f64> = idempotents.iter().map(|e| e.trace()).collect();
        for (index, &trace) in mult.iter().enumerate() {
            let nearest = trace.round();
            if nearest < 1.0 || !tol.accepts(trace - nearest, trace) {
                return Err(Error::NonIntegralMultiplicity { index, trace });
            }
        }
        Ok(SpectralDecomposition { theta, mult, idempotents })
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.idempotents[0].nrows()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Multiplicities as traces of the idempotents.
    pub fn multiplicities(&self) -> &[f64] {
        &self.mult
    }

    /// Multiplicities rounded to the nearest integer.
    pub fn integer_multiplicities(&self) -> Vec<u64> {
        self.mult.iter().map(|m| m.round() as u64).collect()
    }

    pub fn idempotents(&self) -> &[DMatrix<f64>] {
        &self.idempotents
    }

    pub fn idempotent(&self, i: usize) -> &DMatrix<f64> {
        &self.idempotents[i]
    }

    pub fn residuals(&self, a: &DMatrix<f64>) -> SpectralResiduals {
        let n = self.vertex_count();
        let e = &self.idempotents;
        let mut sum = DMatrix::<f64>::zeros(n, n);
        let mut recon = DMatrix::<f64>::zeros(n, n);
        for (ei, &ti) in e.iter().zip(&self.theta) {
            sum += ei;
            recon += ei * ti;
        }
        let resolution_of_identity = max_abs_diff(&sum, &DMatrix::identity(n, n));
        let reconstruction = max_abs_diff(&recon, a);

        let mut idempotency = 0.0f64;
        for i in 0..e.len() {
            for j in i..e.len() {
                let prod = &e[i] * &e[j];
                let r = if i == j { max_abs_diff(&prod, &e[i]) } else { max_abs(&prod) };
                idempotency = idempotency.max(r);
            }
        }
        let trivial_idempotent = e[0].iter().map(|v| (v - 1.0 / n as f64).abs()).fold(0.0, f64::max);
        let multiplicity_integrality = self.mult.iter().map(|m| (m - m.round()).abs()).fold(0.0, f64::max);
        let multiplicity_sum = self.mult.iter().sum::<f64>() - n as f64;
        SpectralResiduals {
            resolution_of_identity,
            idempotency,
            reconstruction,
            trivial_idempotent,
            multiplicity_integrality,
            multiplicity_sum: multiplicity_sum.abs(),
        }
    }
}

/// Max-norm residuals of the defining relations of a spectral decomposition.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectralResiduals {
    /// Σ E_i − I
    pub resolution_of_identity: f64,
    /// E_i E_j − δ_ij E_i over all i ≤ j
    pub idempotency: f64,
    /// Σ θ_i E_i − A
    pub reconstruction: f64,
    /// E_0 − J/n
    pub trivial_idempotent: f64,
    pub multiplicity_integrality: f64,
    pub multiplicity_sum: f64,
}

impl SpectralResiduals {
    pub fn max(&self) -> f64 {
        [
            self.resolution_of_identity,
            self.idempotency,
            self.reconstruction,
            self.trivial_idempotent,
            self.multiplicity_integrality,
            self.multiplicity_sum,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Krein parameters q^h_{ij}, 0 ≤ h,i,j ≤ d.
#[derive(Debug, Clone, PartialEq)]
pub struct KreinTensor {
    d: usize,
    q: Vec<f64>,
}

impl KreinTensor {
    /// Wraps raw values laid out as `q[(h * (d+1) + i) * (d+1) + j]`.
    pub fn from_values(d: usize, q: Vec<f64>) -> Result<Self> {
        let m = d + 1;
        if q.len() != m * m * m {
            return Err(Error::InvalidOrdering(format!(
                "Krein tensor of diameter {d} needs {} entries, got {}",
                m * m * m,
                q.len()
            )));
        }
        Ok(KreinTensor { d, q })
    }

    pub fn diameter(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, h: usize, i: usize, j: usize) -> f64 {
        let m = self.d + 1;
        self.q[(h * m + i) * m + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.q
    }

    pub fn max_entry(&self) -> f64 {
        self.q.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_entry(&self) -> f64 {
        self.q.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest |q^h_{ij} − q^h_{ji}|.
    pub fn symmetry_defect(&self) -> f64 {
        let m = self.d + 1;
        let mut worst = 0.0f64;
        for h in 0..m {
            for i in 0..m {
                for j in 0..m {
                    worst = worst.max((self.get(h, i, j) - self.get(h, j, i)).abs());
                }
            }
        }
        worst
    }

    /// Relabels indices: entry `(h, i, j)` of the result is
    /// `q^{order[h]}_{order[i], order[j]}` of `self`.
    pub fn reordered(&self, order: &[usize]) -> KreinTensor {
        let m = self.d + 1;
        debug_assert_eq!(order.len(), m);
        let mut q = vec![0.0; m * m * m];
        for h in 0..m {
            for i in 0..m {
                for j in 0..m {
                    q[(h * m + i) * m + j] = self.get(order[h], order[i], order[j]);
                }
            }
        }
        KreinTensor { d: self.d, q }
    }
}

/// q^h_{ij} = (n / m_h) · trace(E_h (E_i ∘ E_j)).
///
/// The trace of a product of symmetric matrices is the sum of the entrywise
/// product, so each parameter is a triple sum that is symmetric in i and j
/// term by term.
pub fn krein_parameters(idempotents: &[DMatrix<f64>], n: usize) -> KreinTensor {
    let m = idempotents.len();
    let d = m - 1;
    let mult: Vec<f64> = idempotents.iter().map(|e| e.trace().round()).collect();
    let mut q = vec![0.0; m * m * m];
    for i in 0..m {
        for j in i..m {
            let schur = idempotents[i].component_mul(&idempotents[j]);
            for h in 0..m {
                let pairing = idempotents[h].dot(&schur);
                let value = n as f64 / mult[h] * pairing;
                q[(h * m + i) * m + j] = value;
                q[(h * m + j) * m + i] = value;
            }
        }
    }
    KreinTensor { d, q }
}

/// max over i, j of ‖E_i ∘ E_j − n⁻¹ Σ_h q^h_{ij} E_h‖_max.
pub fn krein_reconstruction_residual(idempotents: &[DMatrix<f64>], krein: &KreinTensor) -> f64 {
    let m = idempotents.len();
    let n = idempotents[0].nrows() as f64;
    let mut worst = 0.0f64;
    for i in 0..m {
        for j in i..m {
            let mut rhs = DMatrix::<f64>::zeros(idempotents[0].nrows(), idempotents[0].ncols());
            for (h, eh) in idempotents.iter().enumerate() {
                rhs += eh * (krein.get(h, i, j) / n);
            }
            let lhs = idempotents[i].component_mul(&idempotents[j]);
            worst = worst.max(max_abs_diff(&lhs, &rhs));
        }
    }
    worst
}

/// Checks that E_h (E_i x̂ ∘ E_j ŷ) vanishes whenever q^h_{ij} is zero (below
/// `nz_threshold`), over sampled pairs. Returns the largest max-norm seen.
pub fn span_property_residual(
    idempotents: &[DMatrix<f64>],
    krein: &KreinTensor,
    nz_threshold: f64,
    max_sources: usize,
) -> f64 {
    let m = idempotents.len();
    let n = idempotents[0].nrows();
    let sources = sample_vertices(n, max_sources);
    let mut worst = 0.0f64;
    for i in 0..m {
        for j in i..m {
            for h in 0..m {
                if krein.get(h, i, j).abs() > nz_threshold {
                    continue;
                }
                for &x in &sources {
                    let ex = idempotents[i].column(x);
                    // columns y of E_h · diag(E_i x̂) · E_j are E_h(E_i x̂ ∘ E_j ŷ)
                    let scaled = DMatrix::from_fn(n, n, |r, c| ex[r] * idempotents[j][(r, c)]);
                    let projected = &idempotents[h] * scaled;
                    worst = worst.max(max_abs(&projected));
                }
            }
        }
    }
    worst
}

/// Up to `limit` evenly spaced vertices, always including vertex 0.
pub fn sample_vertices(n: usize, limit: usize) -> Vec<usize> {
    if n <= limit || limit == 0 {
        return (0..n).collect();
    }
    (0..limit).map(|t| t * n / limit).collect()
}

pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

pub(crate) fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
}

pub(crate) fn max_abs_vec(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}
