#![allow(dead_code)]

use drg_norton::families::{generate, FamilySpec};
use drg_norton::report::Analysis;
use drg_norton::tolerance::{Tolerance, DEFAULT_NZ_RELATIVE};
use drg_norton::Graph;

/// The eleven-graph corpus every numerical criterion runs over.
pub fn corpus() -> Vec<FamilySpec> {
    vec![
        FamilySpec::Petersen,
        FamilySpec::Cycle { n: 5 },
        FamilySpec::Cycle { n: 6 },
        FamilySpec::Cycle { n: 8 },
        FamilySpec::Cycle { n: 10 },
        FamilySpec::Hamming { d: 2, q: 2 },
        FamilySpec::Hamming { d: 3, q: 2 },
        FamilySpec::Hamming { d: 2, q: 3 },
        FamilySpec::Hamming { d: 3, q: 3 },
        FamilySpec::Johnson { n: 5, k: 2 },
        FamilySpec::Johnson { n: 6, k: 3 },
    ]
}

pub fn graph(spec: &FamilySpec) -> Graph {
    generate(spec).unwrap_or_else(|e| panic!("{spec}: {e}"))
}

pub fn analysis(spec: &FamilySpec) -> Analysis {
    Analysis::run(&graph(spec), Tolerance::default(), DEFAULT_NZ_RELATIVE).unwrap_or_else(|e| panic!("{spec}: {e}"))
}

pub fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Standard sequence u_0(θ), ..., u_d(θ): u_0 = 1, u_1 = θ/k and
/// c_i u_{i−1} + a_i u_i + b_i u_{i+1} = θ u_i.
pub fn standard_sequence(c: &[u64], a: &[u64], b: &[u64], theta: f64) -> Vec<f64> {
    let d = c.len() - 1;
    let mut u = vec![1.0, theta / b[0] as f64];
    for i in 1..d {
        let next = ((theta - a[i] as f64) * u[i] - c[i] as f64 * u[i - 1]) / b[i] as f64;
        u.push(next);
    }
    u
}
