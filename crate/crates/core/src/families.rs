//! Generators for classical distance-regular families.
//!
//! Vertex labels follow a fixed enumeration so generated graphs are identical
//! across runs: Hamming words in lexicographic order (index = base-q value
//! with the first coordinate most significant), Johnson and Petersen vertices
//! as k-subsets in lexicographic order.
//!
//! Grassmann and dual polar graphs are not provided; they would slot in here
//! as further `FamilySpec` variants once finite-field subspace enumeration
//! exists.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_MAX_VERTICES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilySpec {
    /// C_n, n >= 5.
    Cycle { n: usize },
    /// H(d, q): words of length d over q letters, adjacent at Hamming distance 1.
    Hamming { d: usize, q: usize },
    /// J(n, k): k-subsets of an n-set, adjacent when they share k - 1 points.
    Johnson { n: usize, k: usize },
    /// Kneser graph K(5, 2).
    Petersen,
    /// H(d, 2).
    Hypercube { d: usize },
}

impl FamilySpec {
    /// Parses a family name plus its integer parameters, e.g.
    /// `("hamming", [3, 2])`.
    pub fn from_name(name: &str, params: &[usize]) -> Result<Self> {
        let want = |count: usize| -> Result<()> {
            if params.len() == count {
                Ok(())
            } else {
                Err(Error::InvalidFamilyParams(format!(
                    "family `{name}` takes {count} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        let spec = match name.to_ascii_lowercase().as_str() {
            "cycle" => {
                want(1)?;
                FamilySpec::Cycle { n: params[0] }
            }
            "hamming" => {
                want(2)?;
                FamilySpec::Hamming { d: params[0], q: params[1] }
            }
            "johnson" => {
                want(2)?;
                FamilySpec::Johnson { n: params[0], k: params[1] }
            }
            "petersen" => {
                want(0)?;
                FamilySpec::Petersen
            }
            "hypercube" => {
                want(1)?;
                FamilySpec::Hypercube { d: params[0] }
            }
            other => {
                return Err(Error::InvalidFamilyParams(format!(
                    "unknown family `{other}` (expected cycle, hamming, johnson, petersen or hypercube)"
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidFamilyParams(msg));
        match *self {
            FamilySpec::Cycle { n } if n < 5 => bad(format!("cycle needs n >= 5, got {n}")),
            FamilySpec::Hamming { d, q } if d < 2 || q < 2 => {
                bad(format!("hamming needs d >= 2 and q >= 2, got d={d} q={q}"))
            }
            FamilySpec::Johnson { n, k } if k < 2 || n < 2 * k => {
                bad(format!("johnson needs k >= 2 and n >= 2k, got n={n} k={k}"))
            }
            FamilySpec::Hypercube { d } if d < 2 => bad(format!("hypercube needs d >= 2, got {d}")),
            _ => Ok(()),
        }
    }

    /// Number of vertices, or `None` on overflow.
    pub fn vertex_count(&self) -> Option<usize> {
        match *self {
            FamilySpec::Cycle { n } => Some(n),
            FamilySpec::Hamming { d, q } => checked_pow(q, d),
            FamilySpec::Hypercube { d } => checked_pow(2, d),
            FamilySpec::Johnson { n, k } => binomial(n, k),
            FamilySpec::Petersen => Some(10),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilySpec::Cycle { n } => write!(f, "cycle({n})"),
            FamilySpec::Hamming { d, q } => write!(f, "hamming({d},{q})"),
            FamilySpec::Johnson { n, k } => write!(f, "johnson({n},{k})"),
            FamilySpec::Petersen => write!(f, "petersen"),
            FamilySpec::Hypercube { d } => write!(f, "hypercube({d})"),
        }
    }
}

pub fn generate(spec: &FamilySpec) -> Result<Graph> {
    generate_with_limit(spec, DEFAULT_MAX_VERTICES)
}

pub fn generate_with_limit(spec: &FamilySpec, max_vertices: usize) -> Result<Graph> {
    spec.validate()?;
    let vertices = spec.vertex_count().unwrap_or(usize::MAX);
    if vertices > max_vertices {
        return Err(Error::TooManyVertices { vertices, limit: max_vertices });
    }
    match *spec {
        FamilySpec::Cycle { n } => {
            let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            Graph::from_edges(n, &edges)
        }
        FamilySpec::Hamming { d, q } => hamming(d, q, vertices),
        FamilySpec::Hypercube { d } => hamming(d, 2, vertices),
        FamilySpec::Johnson { n, k } => {
            let sets = k_subsets(n, k);
            Graph::from_adjacency_fn(sets.len(), |x, y| intersection_size(&sets[x], &sets[y]) == k - 1)
        }
        FamilySpec::Petersen => {
            let sets = k_subsets(5, 2);
            Graph::from_adjacency_fn(sets.len(), |x, y| intersection_size(&sets[x], &sets[y]) == 0)
        }
    }
}

fn hamming(d: usize, q: usize, n: usize) -> Result<Graph> {
    let mut edges = Vec::with_capacity(n * d * (q - 1) / 2);
    let mut place = 1;
    // positions from the last coordinate (place value 1) to the first
    for _ in 0..d {
        for x in 0..n {
            let letter = (x / place) % q;
            for other in (letter + 1)..q {
                edges.push((x, x + (other - letter) * place));
            }
        }
        place *= q;
    }
    Graph::from_edges(n, &edges)
}

/// k-subsets of {0..n-1} in lexicographic order.
fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(current.clone());
        let Some(pos) = (0..k).rev().find(|&i| current[i] < n - k + i) else {
            return out;
        };
        current[pos] += 1;
        for i in pos + 1..k {
            current[i] = current[i - 1] + 1;
        }
    }
}

fn intersection_size(s: &[usize], t: &[usize]) -> usize {
    s.iter().filter(|v| t.binary_search(v).is_ok()).count()
}

fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    (0..exp).try_fold(1usize, |acc, _| acc.checked_mul(base))
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    (0..k).try_fold(1usize, |acc, i| acc.checked_mul(n - i).map(|v| v / (i + 1)))
}
