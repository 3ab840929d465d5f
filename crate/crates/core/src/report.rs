//! Full analysis pipeline and the JSON report built from it.

use std::io;

use nalgebra::DMatrix;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Error, RegularityWitness, Result};
use crate::graph::{check_distance_regular, distance_matrix, DistanceMatrix, Graph, IntersectionData};
use crate::norton::{NortonContext, PairSweep};
use crate::qpoly::{
    find_q_polynomial_orderings, krein_triangle_pattern_holds, nz_threshold, QPolynomialStructure,
};
use crate::spectral::{
    krein_parameters, krein_reconstruction_residual, span_property_residual, KreinTensor, SpectralDecomposition,
    SpectralResiduals,
};
use crate::tolerance::{Tolerance, DEFAULT_NZ_RELATIVE};

pub const SCHEMA_VERSION: u32 = 1;

/// Vertices sampled as x in the Krein span-property check.
pub const SPAN_SAMPLE_SOURCES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductDump {
    /// Full coordinate vector of Ex̂ ⋆ Eŷ.
    Full,
    /// Distance plus the scalar coefficients of the closed form.
    Compressed,
}

#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub tolerance: Tolerance,
    /// Krein parameters below `nz_relative * max q` count as zero.
    pub nz_relative: f64,
    pub associators: bool,
    pub dump_products: Option<ProductDump>,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            tolerance: Tolerance::default(),
            nz_relative: DEFAULT_NZ_RELATIVE,
            associators: false,
            dump_products: None,
        }
    }
}

/// Every intermediate object of the pipeline for one distance-regular graph.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub graph: Graph,
    pub distances: DistanceMatrix,
    pub intersection: IntersectionData,
    pub adjacency: DMatrix<f64>,
    pub spectral: SpectralDecomposition,
    pub krein: KreinTensor,
    /// Absolute threshold used for "q^h_{ij} ≠ 0".
    pub nz_threshold: f64,
    pub structures: Vec<QPolynomialStructure>,
    pub contexts: Vec<NortonContext>,
    pub tolerance: Tolerance,
}

impl Analysis {
    pub fn run(graph: &Graph, tolerance: Tolerance, nz_relative: f64) -> Result<Self> {
        let distances = distance_matrix(graph)?;
        let intersection = check_distance_regular(graph, &distances)?;
        let adjacency = graph.adjacency_matrix();
        let spectral = SpectralDecomposition::compute(&adjacency, &intersection, tolerance)?;
        let krein = krein_parameters(spectral.idempotents(), graph.vertex_count());
        let threshold = nz_threshold(&krein, nz_relative);
        let structures = find_q_polynomial_orderings(&krein, threshold)
            .into_iter()
            .map(|ordering| QPolynomialStructure::new(ordering, &spectral, &distances, tolerance))
            .collect::<Result<Vec<_>>>()?;
        let contexts = structures
            .iter()
            .map(|qs| NortonContext::new(&adjacency, &distances, &intersection, &spectral, qs, tolerance))
            .collect::<Result<Vec<_>>>()?;
        Ok(Analysis {
            graph: graph.clone(),
            distances,
            intersection,
            adjacency,
            spectral,
            krein,
            nz_threshold: threshold,
            structures,
            contexts,
            tolerance,
        })
    }

    pub fn spectral_report(&self) -> SpectralReport {
        let e = self.spectral.idempotents();
        SpectralReport {
            decomposition: self.spectral.residuals(&self.adjacency),
            krein_symmetry: self.krein.symmetry_defect(),
            krein_min_entry: self.krein.min_entry(),
            krein_reconstruction: krein_reconstruction_residual(e, &self.krein),
            span_property: span_property_residual(e, &self.krein, self.nz_threshold, SPAN_SAMPLE_SOURCES),
        }
    }

    /// Residuals and diagnostics for the k-th Q-polynomial ordering.
    pub fn ordering_report(&self, k: usize, options: &AnalysisOptions) -> Result<OrderingReport> {
        let qs = &self.structures[k];
        let ctx = &self.contexts[k];
        let full = qs.ordering().full();
        let q111_tensor = self.krein.get(full[1], full[1], full[1]);
        let q111_formula = ctx.q111_from_formula();
        let sweep = ctx.sweep_pairs()?;
        let cibi = ctx.cibi_identity_check()?;
        let residuals = OrderingResiduals {
            recurrence: qs.recurrence(&self.intersection).max,
            theta2_identity: qs.theta2_identity()?,
            cibi: cibi.iter().copied().fold(0.0, f64::max),
            balanced_set: sweep.balanced_set,
            oracle_vs_formula: sweep.oracle_vs_formula,
            oracle_vs_symmetric: sweep.oracle_vs_symmetric,
            sum_identity: sweep.sum_identity.max(sweep.sum_identity_exact as f64),
            q111_delta: (q111_tensor - q111_formula).abs(),
            symmetric_commutativity: sweep.symmetric_commutativity,
            cb_symmetry: sweep.cb_symmetry,
            closure: sweep.closure,
        };
        let products = options.dump_products.map(|mode| product_rows(ctx, mode));
        Ok(OrderingReport {
            ordering: qs.ordering().nontrivial().to_vec(),
            source_idempotent: qs.source_idempotent(),
            eigenvalues: qs.theta().to_vec(),
            dual_eigenvalues: qs.dual_theta().to_vec(),
            krein_pattern: krein_triangle_pattern_holds(&self.krein, &full, self.nz_threshold),
            q111: Q111 { tensor: q111_tensor, formula: q111_formula },
            self_product_coefficient: ctx.self_product_coefficient(),
            max_product_norm: sweep.max_product_norm,
            residuals,
            max_associator_norm: options.associators.then(|| ctx.max_associator_norm()),
            products,
            sweep,
        })
    }

    pub fn report(&self, source: &str, options: &AnalysisOptions) -> Result<NortonReport> {
        let mut report = NortonReport::skeleton(&self.graph, source, options);
        report.graph.diameter = Some(self.intersection.diameter());
        report.nz_threshold = Some(self.nz_threshold);
        report.intersection_array = Some(IntersectionArray {
            k: self.intersection.valency(),
            c: self.intersection.c_array().to_vec(),
            a: self.intersection.a_array().to_vec(),
            b: self.intersection.b_array().to_vec(),
        });
        report.eigenvalues = self
            .spectral
            .theta()
            .iter()
            .zip(self.spectral.multiplicities())
            .enumerate()
            .map(|(index, (&theta, &trace))| EigenEntry {
                index,
                theta,
                multiplicity: trace.round() as u64,
                trace,
            })
            .collect();
        let m = self.intersection.diameter() + 1;
        for h in 0..m {
            for i in 0..m {
                for j in 0..m {
                    report.krein_tensor.push(KreinEntry { h, i, j, value: self.krein.get(h, i, j) });
                }
            }
        }
        let spectral = self.spectral_report();
        let mut ok = spectral.within(options.tolerance);
        report.spectral_residuals = Some(spectral);
        for k in 0..self.structures.len() {
            let ordering = self.ordering_report(k, options)?;
            ok &= ordering.residuals.within(options.tolerance) && ordering.sweep.sum_identity_exact == 0;
            report.q_orderings.push(ordering);
        }
        report.status = if report.q_orderings.is_empty() { Status::NoQOrdering } else { Status::Ok };
        report.within_tolerance = ok;
        Ok(report)
    }
}

/// Runs the pipeline and builds the report. Graphs that are disconnected,
/// not distance-regular or of diameter below 2 yield a report with status
/// `notDistanceRegular`; numerical failures are returned as errors.
pub fn analyze(graph: &Graph, source: &str, options: &AnalysisOptions) -> Result<NortonReport> {
    match Analysis::run(graph, options.tolerance, options.nz_relative) {
        Ok(analysis) => analysis.report(source, options),
        Err(err) => {
            let failure = match &err {
                Error::NotDistanceRegular(w) => Failure::new("notDistanceRegular", &err, Some(w.clone())),
                Error::DiameterTooSmall { .. } => Failure::new("diameterTooSmall", &err, None),
                Error::DisconnectedGraph { .. } => Failure::new("disconnected", &err, None),
                _ => return Err(err),
            };
            let mut report = NortonReport::skeleton(graph, source, options);
            report.status = Status::NotDistanceRegular;
            report.failure = Some(failure);
            Ok(report)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Status {
    Ok,
    NotDistanceRegular,
    NoQOrdering,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NortonReport {
    pub schema_version: u32,
    pub status: Status,
    pub tolerance_used: f64,
    pub nz_threshold: Option<f64>,
    /// Every residual below is within `toleranceUsed`.
    pub within_tolerance: bool,
    pub graph: GraphInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
    pub intersection_array: Option<IntersectionArray>,
    pub eigenvalues: Vec<EigenEntry>,
    pub krein_tensor: Vec<KreinEntry>,
    pub spectral_residuals: Option<SpectralReport>,
    pub q_orderings: Vec<OrderingReport>,
}

impl NortonReport {
    fn skeleton(graph: &Graph, source: &str, options: &AnalysisOptions) -> Self {
        NortonReport {
            schema_version: SCHEMA_VERSION,
            status: Status::NotDistanceRegular,
            tolerance_used: options.tolerance.value(),
            nz_threshold: None,
            within_tolerance: true,
            graph: GraphInfo {
                n: graph.vertex_count(),
                edges: graph.edge_count(),
                source: source.to_string(),
                diameter: None,
            },
            failure: None,
            intersection_array: None,
            eigenvalues: Vec::new(),
            krein_tensor: Vec::new(),
            spectral_residuals: None,
            q_orderings: Vec::new(),
        }
    }

    /// 0 ok, 1 not distance-regular, 2 no Q-polynomial ordering, 4 when an
    /// identity failed to hold within tolerance.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::NotDistanceRegular => 1,
            Status::NoQOrdering if self.within_tolerance => 2,
            Status::Ok if self.within_tolerance => 0,
            _ => 4,
        }
    }

    /// Pretty JSON with sorted keys and every float written with 17
    /// significant digits.
    pub fn to_json(&self) -> String {
        to_deterministic_json(self)
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GraphInfo {
    pub n: usize,
    pub edges: usize,
    pub source: String,
    pub diameter: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Failure {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<RegularityWitness>,
}

impl Failure {
    fn new(kind: &str, err: &Error, witness: Option<RegularityWitness>) -> Self {
        Failure { kind: kind.to_string(), message: err.to_string(), witness }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IntersectionArray {
    pub k: u64,
    pub c: Vec<u64>,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenEntry {
    pub index: usize,
    pub theta: f64,
    pub multiplicity: u64,
    pub trace: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct KreinEntry {
    pub h: usize,
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectralReport {
    #[serde(flatten)]
    pub decomposition: SpectralResiduals,
    pub krein_symmetry: f64,
    pub krein_min_entry: f64,
    pub krein_reconstruction: f64,
    pub span_property: f64,
}

impl SpectralReport {
    pub fn within(&self, tol: Tolerance) -> bool {
        self.decomposition.max() <= tol.value()
            && self.krein_symmetry <= tol.value()
            && self.krein_min_entry >= -tol.value()
            && self.krein_reconstruction <= tol.value()
            && self.span_property <= tol.value()
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OrderingResiduals {
    pub recurrence: f64,
    pub theta2_identity: f64,
    pub cibi: f64,
    pub balanced_set: f64,
    pub oracle_vs_formula: f64,
    pub oracle_vs_symmetric: f64,
    pub sum_identity: f64,
    pub q111_delta: f64,
    pub symmetric_commutativity: f64,
    pub cb_symmetry: f64,
    pub closure: f64,
}

impl OrderingResiduals {
    pub fn max(&self) -> f64 {
        [
            self.recurrence,
            self.theta2_identity,
            self.cibi,
            self.balanced_set,
            self.oracle_vs_formula,
            self.oracle_vs_symmetric,
            self.sum_identity,
            self.q111_delta,
            self.symmetric_commutativity,
            self.cb_symmetry,
            self.closure,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn within(&self, tol: Tolerance) -> bool {
        self.max() <= tol.value()
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Q111 {
    pub tensor: f64,
    pub formula: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OrderingReport {
    /// Indices (into `eigenvalues`) of E_1..E_d.
    pub ordering: Vec<usize>,
    pub source_idempotent: usize,
    /// θ_0..θ_d under the ordering.
    pub eigenvalues: Vec<f64>,
    pub dual_eigenvalues: Vec<f64>,
    /// Full Q-polynomial triangle pattern of the Krein tensor holds.
    pub krein_pattern: bool,
    pub q111: Q111,
    /// κ in Ex̂ ⋆ Ex̂ = κ Ex̂.
    pub self_product_coefficient: f64,
    pub max_product_norm: f64,
    pub residuals: OrderingResiduals,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_associator_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub products: Option<Vec<ProductRow>>,
    #[serde(skip)]
    pub sweep: PairSweep,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProductRow {
    pub x: usize,
    pub y: usize,
    pub distance: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<CompressedCoefficients>,
}

/// Ex̂ ⋆ Eŷ = minus·Ex⁻_y + plus·Ex⁺_y + onX·Ex̂ + onY·Eŷ. At distance 0
/// the product collapses to onX·Ex̂ and only `onX` is present.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CompressedCoefficients {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plus: Option<f64>,
    pub on_x: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub on_y: Option<f64>,
}

/// One row per unordered pair x ≤ y.
pub fn product_rows(ctx: &NortonContext, mode: ProductDump) -> Vec<ProductRow> {
    let n = ctx.vertex_count();
    let mut rows = Vec::with_capacity(n * (n + 1) / 2);
    for x in 0..n {
        for y in x..n {
            let distance = ctx.distance(x, y);
            let row = match mode {
                ProductDump::Full => ProductRow {
                    x,
                    y,
                    distance,
                    vector: Some(ctx.column_product(x, y).iter().copied().collect()),
                    coefficients: None,
                },
                ProductDump::Compressed => {
                    let coefficients = if distance == 0 {
                        CompressedCoefficients {
                            minus: None,
                            plus: None,
                            on_x: ctx.self_product_coefficient(),
                            on_y: None,
                        }
                    } else {
                        let c = ctx.formula_coefficients(distance);
                        CompressedCoefficients { minus: c.minus, plus: c.plus, on_x: c.on_x, on_y: Some(c.on_y) }
                    };
                    ProductRow { x, y, distance, vector: None, coefficients: Some(coefficients) }
                }
            };
            rows.push(row);
        }
    }
    rows
}

/// CSV rendering of a product table; `ordering` tags each row.
pub fn products_csv(report: &NortonReport, mode: ProductDump) -> String {
    let mut out = String::new();
    let n = report.graph.n;
    match mode {
        ProductDump::Full => {
            out.push_str("ordering,x,y,distance");
            for z in 0..n {
                out.push_str(&format!(",v{z}"));
            }
        }
        ProductDump::Compressed => out.push_str("ordering,x,y,distance,minus,plus,onX,onY"),
    }
    out.push('\n');
    let opt = |v: Option<f64>| v.map(format_float).unwrap_or_default();
    for (k, ordering) in report.q_orderings.iter().enumerate() {
        for row in ordering.products.iter().flatten() {
            out.push_str(&format!("{k},{},{},{}", row.x, row.y, row.distance));
            if let Some(v) = &row.vector {
                for value in v {
                    out.push(',');
                    out.push_str(&format_float(*value));
                }
            }
            if let Some(c) = &row.coefficients {
                out.push_str(&format!(
                    ",{},{},{},{}",
                    opt(c.minus),
                    opt(c.plus),
                    format_float(c.on_x),
                    opt(c.on_y)
                ));
            }
            out.push('\n');
        }
    }
    out
}

/// 17 significant digits in scientific notation; -0 prints as 0.
pub fn format_float(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

struct FixedPrecision<'a>(PrettyFormatter<'a>);

impl Formatter for FixedPrecision<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_float(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

/// Serializes through `serde_json::Value`, whose maps are ordered by key.
pub fn to_deterministic_json<T: Serialize>(value: &T) -> String {
    let tree = serde_json::to_value(value).expect("report types serialize infallibly");
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedPrecision(PrettyFormatter::with_indent(b"  ")));
    tree.serialize(&mut ser).expect("writing to a Vec cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}
