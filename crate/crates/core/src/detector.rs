//! Error-detection decision procedure for graph codes.
//!
//! The code of `(Γ, X, Y)` over `G` detects `E ⊆ Y` iff every solution `d`
//! over `X∪E` of `Γ[I, X∪E]·d = 0` (with `I = Y∖E`) has `d|_X = 0` and
//! `Γ[X, E]·d|_E = 0`. Integer matrices act componentwise on a product of
//! cyclic groups, so the condition is checked independently for each cyclic
//! factor `Z_d`, and both conclusions are `Z_d`-linear, so checking a
//! generating set of the kernel suffices.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::abelian::FiniteAbelianGroup;
use crate::graph::{ErrorConfiguration, GraphError, WeightedGraph};
use crate::zmod::{kernel_mod, kernel_trivial, LinalgError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetectError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("graph has more than {0} automorphisms; orbit reduction aborted")]
    TooManyAutomorphisms(usize),
}

/// Which conclusion a kernel vector violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FailedCondition {
    /// `d|_X ≠ 0`: the errors can change the encoded input.
    InputNonzero,
    /// `d|_X = 0` but `Γ[X, E]·d|_E ≠ 0`: the errors leak a phase that
    /// depends on the input.
    InputCoupling,
}

impl FailedCondition {
    pub fn as_str(self) -> &'static str {
        match self {
            FailedCondition::InputNonzero => "input_nonzero",
            FailedCondition::InputCoupling => "input_coupling",
        }
    }
}

/// A kernel vector over `Z_factor`, indexed by `support = X∪E`, that breaks
/// detection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub factor: u64,
    pub support: Vec<usize>,
    pub values: Vec<u64>,
    pub failed: FailedCondition,
}

/// Kernel generators over `Z_factor` for a detected configuration; each one
/// satisfies both conclusions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorCertificate {
    pub factor: u64,
    pub support: Vec<usize>,
    pub generators: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DetectionOutcome {
    Detected(Vec<FactorCertificate>),
    Undetected(Witness),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectionVerdict {
    pub config: ErrorConfiguration,
    pub outcome: DetectionOutcome,
}

impl DetectionVerdict {
    pub fn is_detected(&self) -> bool {
        matches!(self.outcome, DetectionOutcome::Detected(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.outcome {
            DetectionOutcome::Undetected(w) => Some(w),
            DetectionOutcome::Detected(_) => None,
        }
    }

    pub fn certificates(&self) -> Option<&[FactorCertificate]> {
        match &self.outcome {
            DetectionOutcome::Detected(c) => Some(c),
            DetectionOutcome::Undetected(_) => None,
        }
    }

    /// Re-checks the witness or every certificate generator by direct
    /// modular arithmetic.
    pub fn verify(&self, graph: &WeightedGraph) -> bool {
        match &self.outcome {
            DetectionOutcome::Undetected(w) => w.verify(graph, &self.config),
            DetectionOutcome::Detected(certs) => certs.iter().all(|c| {
                c.generators
                    .iter()
                    .all(|g| matches!(check_vector(graph, &self.config, c.factor, g), Some(None)))
            }),
        }
    }
}

impl Witness {
    /// True iff the vector lies in the kernel of `Γ[I, X∪E]` mod `factor`
    /// and violates the recorded conclusion.
    pub fn verify(&self, graph: &WeightedGraph, config: &ErrorConfiguration) -> bool {
        if self.support != config.support_in(graph) {
            return false;
        }
        check_vector(graph, config, self.factor, &self.values) == Some(Some(self.failed))
    }
}

/// `None` if `v` is not in the kernel; otherwise `Some(first failed
/// condition)`.
fn check_vector(
    graph: &WeightedGraph,
    config: &ErrorConfiguration,
    d: u64,
    v: &[u64],
) -> Option<Option<FailedCondition>> {
    let support = config.support_in(graph);
    if v.len() != support.len() || d < 2 {
        return None;
    }
    let rest = config.complement_in(graph);
    let a = graph.submatrix(&rest, &support);
    if a.mul_vec_mod(v, d).ok()?.iter().any(|&x| x != 0) {
        return None;
    }
    Some(conclusion_failure(graph, config, &support, d, v))
}

fn conclusion_failure(
    graph: &WeightedGraph,
    config: &ErrorConfiguration,
    support: &[usize],
    d: u64,
    v: &[u64],
) -> Option<FailedCondition> {
    let mut on_inputs = Vec::new();
    let mut on_errors = Vec::new();
    for (&vertex, &x) in support.iter().zip(v) {
        if graph.inputs().binary_search(&vertex).is_ok() {
            on_inputs.push(x);
        } else {
            on_errors.push(x);
        }
    }
    if on_inputs.iter().any(|&x| x != 0) {
        return Some(FailedCondition::InputNonzero);
    }
    let coupling = graph.submatrix(graph.inputs(), config.vertices());
    let image = coupling
        .mul_vec_mod(&on_errors, d)
        .expect("coupling matrix matches error count");
    if image.iter().any(|&x| x != 0) {
        return Some(FailedCondition::InputCoupling);
    }
    None
}

fn revalidate(
    graph: &WeightedGraph,
    config: &ErrorConfiguration,
) -> Result<ErrorConfiguration, DetectError> {
    Ok(ErrorConfiguration::new(graph, config.vertices())?)
}

/// Decides whether the code detects `config`.
pub fn detects(
    graph: &WeightedGraph,
    group: &FiniteAbelianGroup,
    config: &ErrorConfiguration,
) -> Result<DetectionVerdict, DetectError> {
    let config = revalidate(graph, config)?;
    let support = config.support_in(graph);
    let rest = config.complement_in(graph);
    let a = graph.submatrix(&rest, &support);
    let mut certificates = Vec::with_capacity(group.factors().len());
    for &d in group.factors() {
        let kernel = kernel_mod(&a, d)?;
        for g in &kernel.generators {
            if let Some(failed) = conclusion_failure(graph, &config, &support, d, g) {
                return Ok(DetectionVerdict {
                    config,
                    outcome: DetectionOutcome::Undetected(Witness {
                        factor: d,
                        support,
                        values: g.clone(),
                        failed,
                    }),
                });
            }
        }
        certificates.push(FactorCertificate {
            factor: d,
            support: support.clone(),
            generators: kernel.generators,
        });
    }
    Ok(DetectionVerdict {
        config,
        outcome: DetectionOutcome::Detected(certificates),
    })
}

/// The strong condition: `Γ[I, X∪E]·d = 0` forces `d = 0` outright, for every
/// cyclic factor.
pub fn strong_detects(
    graph: &WeightedGraph,
    group: &FiniteAbelianGroup,
    config: &ErrorConfiguration,
) -> Result<bool, DetectError> {
    let config = revalidate(graph, config)?;
    let a = graph.submatrix(&config.complement_in(graph), &config.support_in(graph));
    for &d in group.factors() {
        if !kernel_trivial(&a, d)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the coding operator is an isometry: detection of `E = ∅`.
pub fn is_isometry_condition(graph: &WeightedGraph, group: &FiniteAbelianGroup) -> bool {
    detects(graph, group, &ErrorConfiguration::empty())
        .expect("the empty configuration is always valid")
        .is_detected()
}

/// One linear equation per vertex `y ∈ I`: the nonzero coefficients
/// `Γ(y, x)` for `x ∈ X∪E`.
pub fn integration_equations(
    graph: &WeightedGraph,
    config: &ErrorConfiguration,
) -> Vec<(usize, Vec<(usize, BigInt)>)> {
    let support = config.support_in(graph);
    config
        .complement_in(graph)
        .into_iter()
        .map(|y| {
            let terms = support
                .iter()
                .filter(|&&x| !graph.weight(y, x).is_zero())
                .map(|&x| (x, graph.weight(y, x).clone()))
                .collect();
            (y, terms)
        })
        .collect()
}

/// All `E ⊆ Y` with `|E| = size`, in lexicographic order.
pub fn configurations(graph: &WeightedGraph, size: usize) -> Configurations<'_> {
    let outputs = graph.outputs();
    Configurations {
        outputs,
        idx: (0..size).collect(),
        done: size > outputs.len(),
    }
}

pub struct Configurations<'a> {
    outputs: &'a [usize],
    idx: Vec<usize>,
    done: bool,
}

impl Iterator for Configurations<'_> {
    type Item = ErrorConfiguration;

    fn next(&mut self) -> Option<ErrorConfiguration> {
        if self.done {
            return None;
        }
        let current =
            ErrorConfiguration::from_sorted(self.idx.iter().map(|&i| self.outputs[i]).collect());
        let (k, n) = (self.idx.len(), self.outputs.len());
        match (0..k).rev().find(|&i| self.idx[i] < n - k + i) {
            Some(i) => {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
            }
            None => self.done = true,
        }
        Some(current)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SweepOptions {
    /// Check one representative per orbit of weight-preserving graph
    /// automorphisms that map `X` onto itself.
    pub orbit_reduction: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeSummary {
    pub size: usize,
    /// `C(|Y|, size)`.
    pub total: u64,
    pub checked: u64,
    pub detected: u64,
    pub undetected: Vec<DetectionVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub group: Vec<u64>,
    pub max_size: usize,
    pub orbit_reduced: bool,
    pub sizes: Vec<SizeSummary>,
}

impl SweepReport {
    pub fn all_detected(&self) -> bool {
        self.sizes.iter().all(|s| s.undetected.is_empty())
    }

    pub fn checked(&self) -> u64 {
        self.sizes.iter().map(|s| s.checked).sum()
    }

    pub fn detected(&self) -> u64 {
        self.sizes.iter().map(|s| s.detected).sum()
    }

    pub fn undetected(&self) -> impl Iterator<Item = &DetectionVerdict> {
        self.sizes.iter().flat_map(|s| s.undetected.iter())
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Checks every configuration with `|E| ≤ max_size`.
pub fn sweep(
    graph: &WeightedGraph,
    group: &FiniteAbelianGroup,
    max_size: usize,
    options: SweepOptions,
) -> Result<SweepReport, DetectError> {
    let automorphisms = if options.orbit_reduction {
        Some(automorphisms(graph, AUTOMORPHISM_LIMIT)?)
    } else {
        None
    };
    let mut sizes = Vec::new();
    for size in 0..=max_size.min(graph.outputs().len()) {
        let mut summary = SizeSummary {
            size,
            total: binomial(graph.outputs().len(), size),
            checked: 0,
            detected: 0,
            undetected: Vec::new(),
        };
        for config in configurations(graph, size) {
            if let Some(auts) = &automorphisms {
                if !is_orbit_representative(auts, &config) {
                    continue;
                }
            }
            summary.checked += 1;
            let verdict = detects(graph, group, &config)?;
            if verdict.is_detected() {
                summary.detected += 1;
            } else {
                summary.undetected.push(verdict);
            }
        }
        sizes.push(summary);
    }
    Ok(SweepReport {
        group: group.factors().to_vec(),
        max_size,
        orbit_reduced: options.orbit_reduction,
        sizes,
    })
}

/// Detection of all `|E| ≤ t`.
pub fn detects_errors(
    graph: &WeightedGraph,
    group: &FiniteAbelianGroup,
    t: usize,
) -> Result<SweepReport, DetectError> {
    sweep(graph, group, t, SweepOptions::default())
}

/// Correction of `e` errors, i.e. detection of all `|E| ≤ 2e`.
pub fn corrects_errors(
    graph: &WeightedGraph,
    group: &FiniteAbelianGroup,
    e: usize,
) -> Result<SweepReport, DetectError> {
    sweep(graph, group, 2 * e, SweepOptions::default())
}

/// Re-partitions the graph with `new_inputs` as `X` and checks correction of
/// `e` errors.
pub fn input_exchange_check(
    graph: &WeightedGraph,
    group: &FiniteAbelianGroup,
    new_inputs: &[usize],
    e: usize,
) -> Result<SweepReport, DetectError> {
    let regraph = graph.with_inputs(new_inputs)?;
    corrects_errors(&regraph, group, e)
}

const AUTOMORPHISM_LIMIT: usize = 1 << 16;

/// All weight-preserving permutations of the vertices that map `X` onto
/// `X`, as image tables. Fails once more than `limit` are found.
pub fn automorphisms(graph: &WeightedGraph, limit: usize) -> Result<Vec<Vec<usize>>, DetectError> {
    let n = graph.vertex_count();
    let signature = |v: usize| {
        let mut ws: Vec<BigInt> = (0..n).map(|u| graph.weight(v, u).clone()).collect();
        ws.sort();
        (graph.inputs().binary_search(&v).is_ok(), ws)
    };
    let sigs: Vec<_> = (0..n).map(signature).collect();
    let mut out = Vec::new();
    let mut image = alloc::vec![usize::MAX; n];
    let mut used = alloc::vec![false; n];
    extend_automorphism(graph, &sigs, 0, &mut image, &mut used, &mut out, limit)?;
    Ok(out)
}

fn extend_automorphism<S: PartialEq>(
    graph: &WeightedGraph,
    sigs: &[S],
    v: usize,
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
    limit: usize,
) -> Result<(), DetectError> {
    let n = sigs.len();
    if v == n {
        if out.len() >= limit {
            return Err(DetectError::TooManyAutomorphisms(limit));
        }
        out.push(image.clone());
        return Ok(());
    }
    for w in 0..n {
        if used[w] || sigs[v] != sigs[w] {
            continue;
        }
        if (0..v).any(|u| graph.weight(v, u) != graph.weight(w, image[u])) {
            continue;
        }
        image[v] = w;
        used[w] = true;
        extend_automorphism(graph, sigs, v + 1, image, used, out, limit)?;
        used[w] = false;
        image[v] = usize::MAX;
    }
    Ok(())
}

fn is_orbit_representative(automorphisms: &[Vec<usize>], config: &ErrorConfiguration) -> bool {
    let mut buf = Vec::with_capacity(config.len());
    automorphisms.iter().all(|p| {
        buf.clear();
        buf.extend(config.vertices().iter().map(|&v| p[v]));
        buf.sort_unstable();
        buf.as_slice() >= config.vertices()
    })
}
