//! Analysis of distance-regular graphs: intersection numbers, the
//! Bose-Mesner algebra (eigenvalues, primitive idempotents, Krein
//! parameters), Q-polynomial orderings, and the Norton algebra product on a
//! Q-polynomial eigenspace.
//!
//! The pipeline is `graph` → `spectral` → `qpoly` → `norton`, with `report`
//! tying it together into the JSON report emitted by the `drg-norton` binary.

pub mod edgelist;
pub mod error;
pub mod families;
pub mod graph;
pub mod norton;
pub mod qpoly;
pub mod report;
pub mod spectral;
pub mod tolerance;

pub use error::{Error, ParseError, RegularityWitness, Result};
pub use families::FamilySpec;
pub use graph::{check_distance_regular, distance_matrices, distance_matrix, DistanceMatrix, Graph, IntersectionData};
pub use norton::{LocalSplit, NortonContext};
pub use qpoly::{QOrdering, QPolynomialStructure};
pub use report::{Analysis, AnalysisOptions, NortonReport, Status};
pub use spectral::{KreinTensor, SpectralDecomposition};
pub use tolerance::Tolerance;
