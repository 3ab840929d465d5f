//! The Norton algebra on the eigenspace EV of a Q-polynomial idempotent E.
//!
//! The product u ⋆ v = E(u ∘ v) is computed three ways: straight from the
//! definition ([`NortonContext::product`], the reference all other routes are
//! tested against), from the local-split closed form
//! ([`NortonContext::product_formula`]) and from the form that is manifestly
//! symmetric in x and y ([`NortonContext::product_symmetric`]).
//!
//! Terms that would involve θ*_{−1} or θ*_{d+1} are skipped; they always come
//! with a zero vector or a zero intersection number.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DistanceMatrix, IntersectionData};
use crate::qpoly::QPolynomialStructure;
use crate::spectral::{max_abs_diff, max_abs_vec, SpectralDecomposition};
use crate::tolerance::Tolerance;

/// Supports of x⁺_y, x⁰_y and x⁻_y: the neighbours z of x with
/// ∂(z, y) = i + 1, i and i − 1 respectively, where i = ∂(x, y).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSplit {
    pub distance: usize,
    pub plus: Vec<usize>,
    pub zero: Vec<usize>,
    pub minus: Vec<usize>,
}

impl LocalSplit {
    /// (x⁺_y, x⁰_y, x⁻_y) as 0/1 coordinate vectors.
    pub fn to_vectors(&self, n: usize) -> [DVector<f64>; 3] {
        let indicator = |support: &[usize]| {
            let mut v = DVector::zeros(n);
            for &z in support {
                v[z] = 1.0;
            }
            v
        };
        [indicator(&self.plus), indicator(&self.zero), indicator(&self.minus)]
    }
}

/// Scalar coefficients of the closed-form product at distance i:
/// Ex̂ ⋆ Eŷ = minus·Ex⁻_y + plus·Ex⁺_y + on_x·Ex̂ + on_y·Eŷ.
/// `minus` is absent at i = 0 and `plus` at i = d.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FormulaCoefficients {
    pub distance: usize,
    pub minus: Option<f64>,
    pub plus: Option<f64>,
    pub on_x: f64,
    pub on_y: f64,
}

/// Everything the product formulas refer to, for one Q-polynomial idempotent.
#[derive(Debug, Clone)]
pub struct NortonContext {
    n: usize,
    e: DMatrix<f64>,
    theta: [f64; 3],
    dual: Vec<f64>,
    dm: DistanceMatrix,
    idata: IntersectionData,
    neighbors: Vec<Vec<usize>>,
    tol: Tolerance,
}

impl NortonContext {
    pub fn new(
        a: &DMatrix<f64>,
        dm: &DistanceMatrix,
        idata: &IntersectionData,
        spectral: &SpectralDecomposition,
        qs: &QPolynomialStructure,
        tol: Tolerance,
    ) -> Result<Self> {
        let e = spectral.idempotent(qs.source_idempotent()).clone();
        let theta = [qs.theta()[0], qs.theta()[1], qs.theta()[2]];
        if tol.accepts(theta[1] - theta[2], 0.0) {
            return Err(Error::DegenerateDenominator("θ_1 − θ_2"));
        }
        let idem = max_abs_diff(&(&e * &e), &e);
        if !tol.accepts(idem, 1.0) {
            return Err(Error::IdempotencyViolation { i: 1, j: 1, residual: idem });
        }
        let eigen = max_abs_diff(&(&e * a), &(&e * theta[1]));
        if !tol.accepts(eigen, theta[1]) {
            return Err(Error::IdempotencyViolation { i: 1, j: 1, residual: eigen });
        }
        let n = dm.vertex_count();
        let neighbors = (0..n).map(|x| dm.sphere(x, 1)).collect();
        Ok(NortonContext {
            n,
            e,
            theta,
            dual: qs.dual_theta().to_vec(),
            dm: dm.clone(),
            idata: idata.clone(),
            neighbors,
            tol,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn diameter(&self) -> usize {
        self.dual.len() - 1
    }

    pub fn idempotent(&self) -> &DMatrix<f64> {
        &self.e
    }

    /// (θ_0, θ_1, θ_2) in Q-polynomial order.
    pub fn theta(&self) -> [f64; 3] {
        self.theta
    }

    pub fn dual_theta(&self) -> &[f64] {
        &self.dual
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    pub fn distance(&self, x: usize, y: usize) -> usize {
        self.dm.get(x, y)
    }

    pub fn check_vertex(&self, x: usize) -> Result<()> {
        if x < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: x, n: self.n })
        }
    }

    /// Ex̂, column x of E.
    pub fn column(&self, x: usize) -> DVector<f64> {
        self.e.column(x).into_owned()
    }

    pub fn project(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.e * v
    }

    /// ‖Eu − u‖_max.
    pub fn eigenspace_residual(&self, u: &DVector<f64>) -> f64 {
        max_abs_vec(&(self.project(u) - u))
    }

    fn require_in_eigenspace(&self, u: &DVector<f64>) -> Result<()> {
        let residual = self.eigenspace_residual(u);
        if self.tol.accepts(residual, max_abs_vec(u)) {
            Ok(())
        } else {
            Err(Error::InputNotInEigenspace { residual })
        }
    }

    /// u ⋆ v = E(u ∘ v) without the eigenspace check.
    pub fn product_unchecked(&self, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        &self.e * u.component_mul(v)
    }

    /// u ⋆ v = E(u ∘ v) for u, v in EV.
    pub fn product(&self, u: &DVector<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
        self.require_in_eigenspace(u)?;
        self.require_in_eigenspace(v)?;
        Ok(self.product_unchecked(u, v))
    }

    /// Ex̂ ⋆ Eŷ by the definition.
    pub fn column_product(&self, x: usize, y: usize) -> DVector<f64> {
        &self.e * self.e.column(x).component_mul(&self.e.column(y))
    }

    pub fn local_split(&self, x: usize, y: usize) -> LocalSplit {
        let i = self.dm.get(x, y);
        let mut split = LocalSplit { distance: i, plus: Vec::new(), zero: Vec::new(), minus: Vec::new() };
        for &z in &self.neighbors[x] {
            let dz = self.dm.get(z, y);
            if dz == i + 1 {
                split.plus.push(z);
            } else if dz == i {
                split.zero.push(z);
            } else {
                split.minus.push(z);
            }
        }
        split
    }

    /// E applied to the indicator vector of `support`.
    fn e_sum(&self, support: &[usize]) -> DVector<f64> {
        let mut out = DVector::zeros(self.n);
        for &z in support {
            out += self.e.column(z);
        }
        out
    }

    fn denominator(&self) -> f64 {
        self.n as f64 * (self.theta[1] - self.theta[2])
    }

    pub fn formula_coefficients(&self, distance: usize) -> FormulaCoefficients {
        let i = distance;
        let d = self.diameter();
        let [t0, t1, t2] = self.theta;
        let s = &self.dual;
        let den = self.denominator();
        FormulaCoefficients {
            distance: i,
            minus: (i > 0).then(|| (s[i - 1] - s[i]) / den),
            plus: (i < d).then(|| (s[i + 1] - s[i]) / den),
            on_x: (t1 - t2) * s[i] / den,
            on_y: (t2 - t0) / den,
        }
    }

    /// Coefficient κ with Ex̂ ⋆ Ex̂ = κ Ex̂.
    pub fn self_product_coefficient(&self) -> f64 {
        let [t0, t1, t2] = self.theta;
        let s = &self.dual;
        (t1 * s[1] - t2 * s[0] + t2 - t0) / self.denominator()
    }

    /// Ex̂ ⋆ Eŷ from the closed form in terms of x⁺_y and x⁻_y.
    pub fn product_formula(&self, x: usize, y: usize) -> DVector<f64> {
        let split = self.local_split(x, y);
        let coef = self.formula_coefficients(split.distance);
        let mut out = self.e.column(x) * coef.on_x + self.e.column(y) * coef.on_y;
        if let Some(c) = coef.minus {
            out += self.e_sum(&split.minus) * c;
        }
        if let Some(c) = coef.plus {
            out += self.e_sum(&split.plus) * c;
        }
        out
    }

    /// c_i (θ*_1 − θ*_{i−1}) / (θ*_0 − θ*_i), zero at i = 0.
    fn balanced_minus(&self, i: usize) -> f64 {
        if i == 0 {
            return 0.0;
        }
        let s = &self.dual;
        self.idata.c(i) as f64 * (s[1] - s[i - 1]) / (s[0] - s[i])
    }

    /// b_i (θ*_1 − θ*_{i+1}) / (θ*_0 − θ*_i), zero at i = d.
    fn balanced_plus(&self, i: usize) -> f64 {
        if i == self.diameter() {
            return 0.0;
        }
        let s = &self.dual;
        self.idata.b(i) as f64 * (s[1] - s[i + 1]) / (s[0] - s[i])
    }

    fn distinct(&self, x: usize, y: usize) -> Result<()> {
        if x == y {
            Err(Error::SameVertex(x))
        } else {
            Ok(())
        }
    }

    /// (C(x, y), B(x, y)); both are symmetric in x and y.
    pub fn cb_vectors(&self, x: usize, y: usize) -> Result<(DVector<f64>, DVector<f64>)> {
        self.distinct(x, y)?;
        let split = self.local_split(x, y);
        let i = split.distance;
        let ex = self.e.column(x);
        let c = self.e_sum(&split.minus) - ex * self.balanced_minus(i);
        let b = self.e_sum(&split.plus) - ex * self.balanced_plus(i);
        Ok((c, b))
    }

    /// Ex̂ ⋆ Eŷ for x ≠ y from the closed form in C(x, y) and B(x, y).
    pub fn product_symmetric(&self, x: usize, y: usize) -> Result<DVector<f64>> {
        let (c, b) = self.cb_vectors(x, y)?;
        let i = self.dm.get(x, y);
        let [t0, _, t2] = self.theta;
        let s = &self.dual;
        let mut out = c * (s[i - 1] - s[i]);
        if i < self.diameter() {
            out += b * (s[i + 1] - s[i]);
        }
        out += (self.e.column(x) + self.e.column(y)) * (t2 - t0);
        Ok(out / self.denominator())
    }

    /// Max-norm residuals of the balanced set identities for x⁻ and x⁺.
    pub fn balanced_set_check(&self, x: usize, y: usize) -> Result<(f64, f64)> {
        self.distinct(x, y)?;
        let xy = self.local_split(x, y);
        let yx = self.local_split(y, x);
        let i = xy.distance;
        let diff = self.e.column(x) - self.e.column(y);
        let minus = self.e_sum(&xy.minus) - self.e_sum(&yx.minus) - &diff * self.balanced_minus(i);
        let plus = self.e_sum(&xy.plus) - self.e_sum(&yx.plus) - &diff * self.balanced_plus(i);
        Ok((max_abs_vec(&minus), max_abs_vec(&plus)))
    }

    /// Residuals of the c_i/b_i identity for i = 1..=d (entry i − 1).
    pub fn cibi_identity_check(&self) -> Result<Vec<f64>> {
        cibi_residuals(&self.idata, self.theta, &self.dual)
    }

    /// q^1_{11} from (θ_1θ*_1 − θ_2θ*_0 + θ_2 − θ_0) / (θ_1 − θ_2).
    pub fn q111_from_formula(&self) -> f64 {
        let [t0, t1, t2] = self.theta;
        let s = &self.dual;
        (t1 * s[1] - t2 * s[0] + t2 - t0) / (t1 - t2)
    }

    /// (u ⋆ v) ⋆ w − u ⋆ (v ⋆ w).
    pub fn associator(&self, u: &DVector<f64>, v: &DVector<f64>, w: &DVector<f64>) -> Result<DVector<f64>> {
        let uv = self.product(u, v)?;
        let vw = self.product(v, w)?;
        Ok(self.product_unchecked(&uv, w) - self.product_unchecked(u, &vw))
    }

    /// (‖x⁺+x⁰+x⁻ − Ax̂‖ exactly, ‖E x⁺ + E x⁰ + E x⁻ − θ_1 Ex̂‖).
    pub fn sum_identity_check(&self, x: usize, y: usize) -> (u64, f64) {
        let split = self.local_split(x, y);
        let mut counts = vec![0i64; self.n];
        for &z in split.plus.iter().chain(&split.zero).chain(&split.minus) {
            counts[z] += 1;
        }
        let exact = (0..self.n)
            .map(|z| (counts[z] - i64::from(self.dm.get(x, z) == 1)).unsigned_abs())
            .max()
            .unwrap_or(0);
        let lhs = self.e_sum(&split.plus) + self.e_sum(&split.zero) + self.e_sum(&split.minus);
        let approx = max_abs_vec(&(lhs - self.e.column(x) * self.theta[1]));
        (exact, approx)
    }
}

/// Residuals |L_i − R_i| for i = 1..=d, where
///
/// ```text
/// L_i = c_i (θ*_1−θ*_{i−1})(θ*_{i−1}−θ*_i)/(θ*_0−θ*_i)
///     + b_i (θ*_1−θ*_{i+1})(θ*_{i+1}−θ*_i)/(θ*_0−θ*_i)
/// R_i = (θ_2−θ_1)θ*_i + θ_2 − θ_0
/// ```
///
/// and the b_d term is absent.
pub fn cibi_residuals(idata: &IntersectionData, theta: [f64; 3], dual: &[f64]) -> Result<Vec<f64>> {
    let d = idata.diameter();
    let [t0, t1, t2] = theta;
    let s = dual;
    (1..=d)
        .map(|i| {
            let den = s[0] - s[i];
            if den == 0.0 {
                return Err(Error::DegenerateDenominator("θ*_0 − θ*_i"));
            }
            let mut lhs = idata.c(i) as f64 * (s[1] - s[i - 1]) * (s[i - 1] - s[i]) / den;
            if i < d {
                lhs += idata.b(i) as f64 * (s[1] - s[i + 1]) * (s[i + 1] - s[i]) / den;
            }
            let rhs = (t2 - t1) * s[i] + t2 - t0;
            Ok((lhs - rhs).abs())
        })
        .collect()
}

/// Maxima of the pairwise identities over every vertex pair.
#[derive(Debug, Clone, Copy, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PairSweep {
    /// ‖formula(x, y) − direct(x, y)‖ over all pairs
    pub oracle_vs_formula: f64,
    /// ‖symmetric(x, y) − direct(x, y)‖ over distinct pairs
    pub oracle_vs_symmetric: f64,
    /// ‖symmetric(x, y) − symmetric(y, x)‖ / max(1, ‖symmetric(x, y)‖)
    pub symmetric_commutativity: f64,
    /// ‖formula(x, y) − formula(y, x)‖
    pub formula_commutativity: f64,
    /// ‖direct(x, y) − direct(y, x)‖
    pub direct_commutativity: f64,
    /// max of both balanced set residuals
    pub balanced_set: f64,
    /// ‖C(x,y) − C(y,x)‖ and ‖B(x,y) − B(y,x)‖
    pub cb_symmetry: f64,
    /// exact part of the local-split sum identity
    pub sum_identity_exact: u64,
    /// projected part of the local-split sum identity
    pub sum_identity: f64,
    /// ‖E r − r‖ over every computed product r
    pub closure: f64,
    /// largest ‖direct(x, y)‖
    pub max_product_norm: f64,
}

impl NortonContext {
    pub fn sweep_pairs(&self) -> Result<PairSweep> {
        let n = self.n;
        let direct: Vec<DVector<f64>> = (0..n * n).map(|k| self.column_product(k / n, k % n)).collect();
        let mut s = PairSweep::default();
        for x in 0..n {
            for y in 0..n {
                let dxy = &direct[x * n + y];
                let formula = self.product_formula(x, y);
                s.oracle_vs_formula = s.oracle_vs_formula.max(max_abs_vec(&(&formula - dxy)));
                s.formula_commutativity = s
                    .formula_commutativity
                    .max(max_abs_vec(&(formula - self.product_formula(y, x))));
                s.direct_commutativity = s.direct_commutativity.max(max_abs_vec(&(dxy - &direct[y * n + x])));
                s.closure = s.closure.max(self.eigenspace_residual(dxy));
                s.max_product_norm = s.max_product_norm.max(max_abs_vec(dxy));
                let (exact, approx) = self.sum_identity_check(x, y);
                s.sum_identity_exact = s.sum_identity_exact.max(exact);
                s.sum_identity = s.sum_identity.max(approx);
                if x == y {
                    continue;
                }
                let sym = self.product_symmetric(x, y)?;
                let sym_rev = self.product_symmetric(y, x)?;
                s.oracle_vs_symmetric = s.oracle_vs_symmetric.max(max_abs_vec(&(&sym - dxy)));
                let scale = max_abs_vec(&sym).max(1.0);
                s.symmetric_commutativity = s.symmetric_commutativity.max(max_abs_vec(&(&sym - sym_rev)) / scale);
                let (r1, r2) = self.balanced_set_check(x, y)?;
                s.balanced_set = s.balanced_set.max(r1).max(r2);
                let (cxy, bxy) = self.cb_vectors(x, y)?;
                let (cyx, byx) = self.cb_vectors(y, x)?;
                s.cb_symmetry = s
                    .cb_symmetry
                    .max(max_abs_vec(&(cxy - cyx)))
                    .max(max_abs_vec(&(bxy - byx)));
            }
        }
        Ok(s)
    }

    /// Largest ‖(Ex̂ ⋆ Eŷ) ⋆ Eẑ − Ex̂ ⋆ (Eŷ ⋆ Eẑ)‖ over all vertex triples.
    pub fn max_associator_norm(&self) -> f64 {
        let n = self.n;
        let direct: Vec<DVector<f64>> = (0..n * n).map(|k| self.column_product(k / n, k % n)).collect();
        let mut worst = 0.0f64;
        for x in 0..n {
            for y in 0..n {
                let xy = &direct[x * n + y];
                for z in 0..n {
                    let left = self.product_unchecked(xy, &self.column(z));
                    let right = self.product_unchecked(&self.column(x), &direct[y * n + z]);
                    worst = worst.max(max_abs_vec(&(left - right)));
                }
            }
        }
        worst
    }
}
