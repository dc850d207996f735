//! JSON documents printed by the command-line tool.
//!
//! Integers that may exceed 64 bits (weights, determinants) are emitted as
//! JSON numbers when they fit in `i64` and as decimal strings otherwise.

use graphcode_core::detector::{DetectionOutcome, DetectionVerdict, SweepReport, Witness};
use graphcode_core::singleton::{BadPrimes, DeterminantReport};
use graphcode_core::zmod::IntMatrix;
use graphcode_core::{FiniteAbelianGroup, WeightedGraph};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;

pub fn big_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

pub fn matrix_json(m: &IntMatrix) -> Vec<Vec<Value>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(big_json).collect())
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphInfo {
    pub id: String,
    pub source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<&'static str>,
    pub vertices: usize,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    /// `[u, v, w]` with `u < v`, lexicographic.
    pub edges: Vec<(usize, usize, Value)>,
}

impl GraphInfo {
    pub fn new(
        id: String,
        source: &'static str,
        description: Option<&'static str>,
        g: &WeightedGraph,
    ) -> Self {
        GraphInfo {
            id,
            source,
            description,
            vertices: g.vertex_count(),
            inputs: g.inputs().to_vec(),
            outputs: g.outputs().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|(u, v, w)| (*u, *v, big_json(w)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupInfo {
    pub factors: Vec<u64>,
    pub order: u64,
}

impl From<&FiniteAbelianGroup> for GroupInfo {
    fn from(g: &FiniteAbelianGroup) -> Self {
        GroupInfo {
            factors: g.factors().to_vec(),
            order: g.order(),
        }
    }
}

/// A kernel vector over `Z_factor` on the support `X ∪ E` that violates the
/// detection condition.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessJson {
    pub config: Vec<usize>,
    pub factor: u64,
    pub support: Vec<usize>,
    pub values: Vec<u64>,
    pub failed: &'static str,
}

impl WitnessJson {
    pub fn new(config: &[usize], w: &Witness) -> Self {
        WitnessJson {
            config: config.to_vec(),
            factor: w.factor,
            support: w.support.clone(),
            values: w.values.clone(),
            failed: w.failed.as_str(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateJson {
    pub factor: u64,
    /// Kernel generators over `Z_factor`, indexed like `support`.
    pub generators: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictJson {
    pub graph: GraphInfo,
    pub group: GroupInfo,
    pub config: Vec<usize>,
    pub detected: bool,
    pub support: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificates: Option<Vec<CertificateJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
}

impl VerdictJson {
    pub fn new(
        graph: GraphInfo,
        group: &FiniteAbelianGroup,
        g: &WeightedGraph,
        v: &DetectionVerdict,
    ) -> Self {
        let config = v.config.vertices().to_vec();
        let support = v.config.support_in(g);
        let (certificates, witness) = match &v.outcome {
            DetectionOutcome::Detected(certs) => (
                Some(
                    certs
                        .iter()
                        .map(|c| CertificateJson {
                            factor: c.factor,
                            generators: c.generators.clone(),
                        })
                        .collect(),
                ),
                None,
            ),
            DetectionOutcome::Undetected(w) => (None, Some(WitnessJson::new(&config, w))),
        };
        VerdictJson {
            graph,
            group: group.into(),
            config,
            detected: v.is_detected(),
            support,
            certificates,
            witness,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SizeJson {
    pub size: usize,
    pub total: u64,
    pub checked: u64,
    pub detected: u64,
    pub undetected: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimJson {
    /// `"detect"` or `"correct"`.
    pub kind: &'static str,
    pub errors: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleJson {
    /// `"checked"` or `"skipped"`.
    pub status: &'static str,
    pub compared: u64,
    pub disagreements: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepJson {
    pub graph: GraphInfo,
    pub group: GroupInfo,
    pub claim: ClaimJson,
    pub max_size: usize,
    pub orbit_reduced: bool,
    pub holds: bool,
    pub checked: u64,
    pub detected: u64,
    pub sizes: Vec<SizeJson>,
    pub witnesses: Vec<WitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleJson>,
}

impl SweepJson {
    pub fn new(
        graph: GraphInfo,
        claim: ClaimJson,
        report: &SweepReport,
        group: &FiniteAbelianGroup,
    ) -> Self {
        let witnesses = report
            .undetected()
            .filter_map(|v| {
                v.witness()
                    .map(|w| WitnessJson::new(v.config.vertices(), w))
            })
            .collect();
        SweepJson {
            graph,
            group: group.into(),
            claim,
            max_size: report.max_size,
            orbit_reduced: report.orbit_reduced,
            holds: report.all_detected(),
            checked: report.checked(),
            detected: report.detected(),
            sizes: report
                .sizes
                .iter()
                .map(|s| SizeJson {
                    size: s.size,
                    total: s.total,
                    checked: s.checked,
                    detected: s.detected,
                    undetected: s.undetected.len() as u64,
                })
                .collect(),
            witnesses,
            oracle: None,
        }
    }
}

pub fn primes_json(b: &BadPrimes) -> Value {
    match b {
        BadPrimes::All => Value::from("all"),
        BadPrimes::Finite(ps) => Value::from(ps.clone()),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionJson {
    #[serde(rename = "I")]
    pub block: Vec<usize>,
    pub complement: Vec<usize>,
    pub det: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubdetsJson {
    pub m: usize,
    pub partitions: Vec<PartitionJson>,
    pub det_set: Vec<Value>,
    pub bad_primes: Value,
}

impl From<&DeterminantReport> for SubdetsJson {
    fn from(r: &DeterminantReport) -> Self {
        SubdetsJson {
            m: r.m,
            partitions: r
                .partitions
                .iter()
                .map(|p| PartitionJson {
                    block: p.block.clone(),
                    complement: p.complement.clone(),
                    det: big_json(&p.det),
                })
                .collect(),
            det_set: r.det_set.iter().map(big_json).collect(),
            bad_primes: primes_json(&r.bad_primes),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SubdetsReportJson {
    pub graph: GraphInfo,
    #[serde(flatten)]
    pub report: SubdetsJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restricted: Option<RestrictedJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RestrictedJson {
    pub inputs: Vec<usize>,
    pub bad_primes: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SkeletonJson {
    pub source: String,
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchJson {
    pub skeleton: SkeletonJson,
    pub bound: u32,
    pub seed: u64,
    pub budget: u64,
    /// `"found"`, `"exhausted"` or `"infeasible"`.
    pub status: &'static str,
    pub attempts: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<Vec<Value>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subdets: Option<SubdetsJson>,
    /// Primes up to 50 for which the matrix is strongly error correcting.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub good_primes: Option<Vec<u64>>,
    /// The structurally singular block when the skeleton cannot work.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExportHeader {
    pub group: GroupInfo,
    pub graph: GraphInfo,
    pub rows: usize,
    pub cols: usize,
    pub normalization: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
}
