//! Q-polynomial orderings of the nontrivial primitive idempotents and the
//! associated dual eigenvalues.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DistanceMatrix, IntersectionData};
use crate::spectral::{KreinTensor, SpectralDecomposition};
use crate::tolerance::{Tolerance, DEFAULT_NZ_RELATIVE};

/// Absolute "nonzero" threshold for Krein parameters: `relative` times the
/// largest entry of the tensor.
pub fn nz_threshold(q: &KreinTensor, relative: f64) -> f64 {
    relative * q.max_entry().abs()
}

pub fn default_nz_threshold(q: &KreinTensor) -> f64 {
    nz_threshold(q, DEFAULT_NZ_RELATIVE)
}

/// An ordering E_1..E_d of the nontrivial idempotents, stored as indices into
/// the unordered spectral decomposition. E_0 is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QOrdering(Vec<usize>);

impl QOrdering {
    pub fn new(nontrivial: Vec<usize>) -> Result<Self> {
        let d = nontrivial.len();
        let mut seen = vec![false; d + 1];
        for &idx in &nontrivial {
            if idx == 0 || idx > d || seen[idx] {
                return Err(Error::InvalidOrdering(format!(
                    "{nontrivial:?} is not a permutation of 1..={d}"
                )));
            }
            seen[idx] = true;
        }
        Ok(QOrdering(nontrivial))
    }

    pub fn diameter(&self) -> usize {
        self.0.len()
    }

    /// Original indices of E_1..E_d.
    pub fn nontrivial(&self) -> &[usize] {
        &self.0
    }

    /// Original index of E_1.
    pub fn source_idempotent(&self) -> usize {
        self.0[0]
    }

    /// Original indices of E_0..E_d.
    pub fn full(&self) -> Vec<usize> {
        std::iter::once(0).chain(self.0.iter().copied()).collect()
    }
}

/// Greedy chain search. For each candidate E_1 the chain E_1, E_2, ... is
/// extended by the unique unused index h with q^h_{1,i} above the threshold;
/// a candidate is kept if the chain reaches length d and the full tridiagonal
/// zero/nonzero pattern of (q^h_{1,j}) then holds. Results are sorted by
/// source idempotent.
pub fn find_q_polynomial_orderings(q: &KreinTensor, nz_threshold: f64) -> Vec<QOrdering> {
    let d = q.diameter();
    let mut found = Vec::new();
    for first in 1..=d {
        let mut order = vec![0, first];
        let mut used = vec![false; d + 1];
        used[0] = true;
        used[first] = true;
        while order.len() < d + 1 {
            let current = *order.last().unwrap();
            let mut next = (0..=d).filter(|&h| !used[h] && q.get(h, first, current) > nz_threshold);
            match (next.next(), next.next()) {
                (Some(h), None) => {
                    used[h] = true;
                    order.push(h);
                }
                _ => break,
            }
        }
        if order.len() == d + 1 && tridiagonal_pattern_holds(q, &order, nz_threshold) {
            found.push(QOrdering(order[1..].to_vec()));
        }
    }
    found
}

/// Under the ordering `full` (E_0 first): q^h_{1,j} is zero when |h − j| > 1
/// and nonzero when |h − j| = 1.
pub fn tridiagonal_pattern_holds(q: &KreinTensor, full: &[usize], nz_threshold: f64) -> bool {
    let first = full[1];
    for (h, &oh) in full.iter().enumerate() {
        for (j, &oj) in full.iter().enumerate() {
            let v = q.get(oh, first, oj);
            match h.abs_diff(j) {
                0 => {}
                1 if v <= nz_threshold => return false,
                1 => {}
                _ if v > nz_threshold => return false,
                _ => {}
            }
        }
    }
    true
}

/// The complete Q-polynomial condition under `full`: q^h_{ij} vanishes when
/// one index exceeds the sum of the other two and is nonzero when one equals
/// the sum of the other two.
pub fn krein_triangle_pattern_holds(q: &KreinTensor, full: &[usize], nz_threshold: f64) -> bool {
    let m = full.len();
    for h in 0..m {
        for i in 0..m {
            for j in 0..m {
                let v = q.get(full[h], full[i], full[j]);
                let max = h.max(i).max(j);
                let rest = h + i + j - max;
                if max > rest && v > nz_threshold {
                    return false;
                }
                if max == rest && v <= nz_threshold {
                    return false;
                }
            }
        }
    }
    true
}

/// θ*_i = n · E_{xy} for any pair at distance i. Every pair is checked
/// against the class mean; the means are returned.
pub fn dual_eigenvalues(e: &DMatrix<f64>, dm: &DistanceMatrix, tol: Tolerance) -> Result<Vec<f64>> {
    let n = dm.vertex_count();
    let d = dm.diameter();
    let scale = n as f64;
    let mut sums = vec![0.0; d + 1];
    let mut counts = vec![0usize; d + 1];
    for x in 0..n {
        for y in 0..n {
            let i = dm.get(x, y);
            sums[i] += scale * e[(x, y)];
            counts[i] += 1;
        }
    }
    let means: Vec<f64> = sums.iter().zip(&counts).map(|(s, &c)| s / c as f64).collect();
    let mut deviation = vec![0.0f64; d + 1];
    for x in 0..n {
        for y in 0..n {
            let i = dm.get(x, y);
            deviation[i] = deviation[i].max((scale * e[(x, y)] - means[i]).abs());
        }
    }
    for (distance, &dev) in deviation.iter().enumerate() {
        if !tol.accepts(dev, means[distance]) {
            return Err(Error::NotConstantOnDistanceClasses { distance, deviation: dev });
        }
    }
    Ok(means)
}

/// A verified Q-polynomial ordering with eigenvalues relabelled to follow it
/// and the dual eigenvalues of E = E_1.
#[derive(Debug, Clone)]
pub struct QPolynomialStructure {
    ordering: QOrdering,
    theta: Vec<f64>,
    dual_theta: Vec<f64>,
}

impl QPolynomialStructure {
    pub fn new(
        ordering: QOrdering,
        spectral: &SpectralDecomposition,
        dm: &DistanceMatrix,
        tol: Tolerance,
    ) -> Result<Self> {
        let d = dm.diameter();
        if ordering.diameter() != d || spectral.len() != d + 1 {
            return Err(Error::InvalidOrdering(format!(
                "ordering of length {} does not match diameter {d}",
                ordering.diameter()
            )));
        }
        let e = spectral.idempotent(ordering.source_idempotent());
        let dual_theta = dual_eigenvalues(e, dm, tol)?;

        let rank = e.trace();
        if !tol.accepts(dual_theta[0] - rank, rank) {
            return Err(Error::NotConstantOnDistanceClasses {
                distance: 0,
                deviation: (dual_theta[0] - rank).abs(),
            });
        }
        for i in 0..=d {
            for j in (i + 1)..=d {
                let gap = dual_theta[i] - dual_theta[j];
                if tol.accepts(gap, dual_theta[i].abs().max(dual_theta[j].abs())) {
                    return Err(Error::DegenerateDualSpectrum { i, j });
                }
            }
        }
        let theta = ordering.full().iter().map(|&idx| spectral.theta()[idx]).collect();
        Ok(QPolynomialStructure { ordering, theta, dual_theta })
    }

    pub fn ordering(&self) -> &QOrdering {
        &self.ordering
    }

    pub fn source_idempotent(&self) -> usize {
        self.ordering.source_idempotent()
    }

    pub fn diameter(&self) -> usize {
        self.ordering.diameter()
    }

    /// θ_0..θ_d in Q-polynomial order.
    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// θ*_0..θ*_d.
    pub fn dual_theta(&self) -> &[f64] {
        &self.dual_theta
    }

    pub fn recurrence(&self, idata: &IntersectionData) -> RecurrenceReport {
        verify_recurrence(&self.dual_theta, idata, self.theta[1])
    }

    pub fn theta2_identity(&self) -> Result<f64> {
        theta2_identity_check(&self.theta, &self.dual_theta, Tolerance::default())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RecurrenceReport {
    /// Residual of row i, 0 ≤ i ≤ d.
    pub rows: Vec<f64>,
    pub max: f64,
}

/// Residuals of c_i θ*_{i−1} + a_i θ*_i + b_i θ*_{i+1} = θ_1 θ*_i. The
/// θ*_{−1} and θ*_{d+1} terms are dropped (their coefficients c_0, b_d are 0).
pub fn verify_recurrence(dual: &[f64], idata: &IntersectionData, theta1: f64) -> RecurrenceReport {
    let d = idata.diameter();
    let rows: Vec<f64> = (0..=d)
        .map(|i| {
            let mut lhs = idata.a(i) as f64 * dual[i];
            if i > 0 {
                lhs += idata.c(i) as f64 * dual[i - 1];
            }
            if i < d {
                lhs += idata.b(i) as f64 * dual[i + 1];
            }
            (lhs - theta1 * dual[i]).abs()
        })
        .collect();
    let max = rows.iter().copied().fold(0.0, f64::max);
    RecurrenceReport { rows, max }
}

/// |(1+θ_1)/(θ_0−θ_2) − (1+θ*_1)/(θ*_0−θ*_2)|, both lists in Q-polynomial
/// order.
pub fn theta2_identity_check(theta: &[f64], dual: &[f64], tol: Tolerance) -> Result<f64> {
    if theta.len() < 3 || dual.len() < 3 {
        return Err(Error::DegenerateDenominator("diameter below 2"));
    }
    let nonzero = |v: f64| !tol.accepts(v, 0.0);
    if !nonzero(theta[0] - theta[2]) {
        return Err(Error::DegenerateDenominator("θ_0 − θ_2"));
    }
    if !nonzero(dual[0] - dual[2]) {
        return Err(Error::DegenerateDenominator("θ*_0 − θ*_2"));
    }
    if !nonzero(1.0 + theta[1]) {
        return Err(Error::DegenerateDenominator("1 + θ_1"));
    }
    if !nonzero(1.0 + dual[1]) {
        return Err(Error::DegenerateDenominator("1 + θ*_1"));
    }
    let lhs = (1.0 + theta[1]) / (theta[0] - theta[2]);
    let rhs = (1.0 + dual[1]) / (dual[0] - dual[2]);
    Ok((lhs - rhs).abs())
}
