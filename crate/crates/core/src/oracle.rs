//! Brute-force ground truth for small instances.
//!
//! The coding operator is materialized as a dense complex matrix with rows
//! indexed by `G^Y` and columns by `G^X` (both in lexicographic order of the
//! group-element tuples, outputs/inputs in vertex order). With the counting
//! measure on `G` the entry at `(g^Y, g^X)` is
//!
//! `|G|^{-|Y|/2} · exp(2πi · Σ_{z<z'} Γ(z,z')·t(g_z, g_{z'}))`
//!
//! where `t` is the exact bicharacter exponent. Detection of `E` is then
//! checked directly: for each matrix unit `F = |g^E⟩⟨h^E| ⊗ 1` the matrix
//! `V†·F·V` must be a multiple of the identity.

use alloc::vec::Vec;

use num_complex::Complex64;
use thiserror::Error;

use crate::abelian::{FiniteAbelianGroup, GroupError};
use crate::graph::{reduce_weight, ErrorConfiguration, GraphError, WeightedGraph};

/// Default bound on `|G|^{|X|+|Y|}`.
pub const DEFAULT_SIZE_CAP: u64 = 1 << 22;
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("|G|^(|X|+|Y|) exceeds the oracle size cap {cap}")]
    CapExceeded { cap: u64 },
    #[error("configuration is not detected; no proportionality table exists")]
    NotDetected,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub size_cap: u64,
    pub tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            size_cap: DEFAULT_SIZE_CAP,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

/// Whether `|G|^{|X|+|Y|}` fits under `cap`.
pub fn within_cap(graph: &WeightedGraph, group: &FiniteAbelianGroup, cap: u64) -> bool {
    let total = (graph.inputs().len() + graph.outputs().len()) as u32;
    group
        .order()
        .checked_pow(total)
        .is_some_and(|size| size <= cap)
}

/// Dense coding operator `L²(G^X) → L²(G^Y)`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeIsometry {
    pub group: Vec<u64>,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub order: u64,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Complex64>,
}

impl CodeIsometry {
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.cols + col]
    }

    /// The modulus every entry should have: `|G|^{-|Y|/2}`.
    pub fn expected_modulus(&self) -> f64 {
        libm::pow(self.order as f64, -(self.outputs.len() as f64) / 2.0)
    }
}

/// Splits a mixed-radix index into per-vertex element indices (first vertex
/// most significant).
fn digits(mut index: usize, base: usize, len: usize, out: &mut [usize]) {
    for slot in out[..len].iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
}

pub fn build_isometry(
    graph: &WeightedGraph,
    group: &FiniteAbelianGroup,
    config: &OracleConfig,
) -> Result<CodeIsometry, OracleError> {
    if !within_cap(graph, group, config.size_cap) {
        return Err(OracleError::CapExceeded {
            cap: config.size_cap,
        });
    }
    let elements = group.enumerate_elements()?;
    let order = group.order() as usize;
    let n = graph.vertex_count();
    let (xs, ys) = (graph.inputs(), graph.outputs());
    let rows = order.pow(ys.len() as u32);
    let cols = order.pow(xs.len() as u32);

    // phase exponents are integers mod N = group exponent
    let modulus = group.exponent();
    let roots: Vec<Complex64> = (0..modulus)
        .map(|k| {
            let angle = 2.0 * core::f64::consts::PI * k as f64 / modulus as f64;
            Complex64::new(libm::cos(angle), libm::sin(angle))
        })
        .collect();
    let edges: Vec<(usize, usize, u64)> = graph
        .edges()
        .into_iter()
        .map(|(u, v, w)| (u, v, reduce_weight(&w, modulus) as u64))
        .filter(|&(_, _, w)| w != 0)
        .collect();
    let scale = libm::pow(order as f64, -(ys.len() as f64) / 2.0);

    let mut assignment = alloc::vec![0usize; n];
    let mut ydig = alloc::vec![0usize; ys.len()];
    let mut xdig = alloc::vec![0usize; xs.len()];
    let mut entries = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        digits(r, order, ys.len(), &mut ydig);
        for (&v, &e) in ys.iter().zip(&ydig) {
            assignment[v] = e;
        }
        for c in 0..cols {
            digits(c, order, xs.len(), &mut xdig);
            for (&v, &e) in xs.iter().zip(&xdig) {
                assignment[v] = e;
            }
            let mut k: u128 = 0;
            for &(u, v, w) in &edges {
                let t = group.chi_scaled(
                    elements[assignment[u]].residues(),
                    elements[assignment[v]].residues(),
                );
                k += w as u128 * t as u128;
            }
            entries.push(roots[(k % modulus as u128) as usize] * scale);
        }
    }
    Ok(CodeIsometry {
        group: group.factors().to_vec(),
        inputs: xs.to_vec(),
        outputs: ys.to_vec(),
        order: group.order(),
        rows,
        cols,
        entries,
    })
}

/// `V†V = 1` entrywise within `tol`.
pub fn check_isometry(v: &CodeIsometry, tol: f64) -> bool {
    for a in 0..v.cols {
        for b in 0..v.cols {
            let s: Complex64 = (0..v.rows)
                .map(|r| v.entry(r, a).conj() * v.entry(r, b))
                .sum();
            let target = if a == b { 1.0 } else { 0.0 };
            if (s - Complex64::new(target, 0.0)).norm_sqr() > tol * tol {
                return false;
            }
        }
    }
    true
}

/// Largest deviation of an entry modulus from `|G|^{-|Y|/2}`.
pub fn hadamard_deviation(v: &CodeIsometry) -> f64 {
    let target = v.expected_modulus();
    v.entries
        .iter()
        .map(|z| libm::fabs(libm::sqrt(z.norm_sqr()) - target))
        .fold(0.0, f64::max)
}

/// Row offsets contributed by the error block and by the remaining outputs.
struct RowLayout {
    error_offsets: Vec<usize>,
    rest_offsets: Vec<usize>,
}

fn row_layout(v: &CodeIsometry, config: &ErrorConfiguration) -> RowLayout {
    let order = v.order as usize;
    let ny = v.outputs.len();
    let weight_of = |pos: usize| order.pow((ny - 1 - pos) as u32);
    let (mut err_pos, mut rest_pos) = (Vec::new(), Vec::new());
    for (pos, y) in v.outputs.iter().enumerate() {
        if config.vertices().binary_search(y).is_ok() {
            err_pos.push(pos);
        } else {
            rest_pos.push(pos);
        }
    }
    let offsets = |positions: &[usize]| -> Vec<usize> {
        let count = order.pow(positions.len() as u32);
        let mut buf = alloc::vec![0usize; positions.len()];
        (0..count)
            .map(|i| {
                digits(i, order, positions.len(), &mut buf);
                positions
                    .iter()
                    .zip(&buf)
                    .map(|(&p, &e)| e * weight_of(p))
                    .sum()
            })
            .collect()
    };
    RowLayout {
        error_offsets: offsets(&err_pos),
        rest_offsets: offsets(&rest_pos),
    }
}

/// `V†·(|g^E⟩⟨h^E| ⊗ 1)·V`, as a `cols × cols` row-major matrix.
fn compressed(v: &CodeIsometry, layout: &RowLayout, g: usize, h: usize) -> Vec<Complex64> {
    let (rg, rh) = (layout.error_offsets[g], layout.error_offsets[h]);
    let mut m = alloc::vec![Complex64::new(0.0, 0.0); v.cols * v.cols];
    for &off in &layout.rest_offsets {
        let (row_g, row_h) = (rg + off, rh + off);
        for a in 0..v.cols {
            let left = v.entry(row_g, a).conj();
            for b in 0..v.cols {
                m[a * v.cols + b] += left * v.entry(row_h, b);
            }
        }
    }
    m
}

/// The scalar `λ` if `m = λ·1` within `tol`.
fn proportionality(m: &[Complex64], cols: usize, tol: f64) -> Option<Complex64> {
    let lambda = m[0];
    for a in 0..cols {
        for b in 0..cols {
            let z = m[a * cols + b];
            let dev = if a == b { z - lambda } else { z };
            if dev.norm_sqr() > tol * tol {
                return None;
            }
        }
    }
    Some(lambda)
}

fn check_config(
    v: &CodeIsometry,
    graph: &WeightedGraph,
    config: &ErrorConfiguration,
) -> Result<(), OracleError> {
    ErrorConfiguration::new(graph, config.vertices())?;
    if v.outputs != graph.outputs() || v.inputs != graph.inputs() {
        return Err(OracleError::Graph(GraphError::InvalidInputs(
            "isometry was built for a different partition",
        )));
    }
    Ok(())
}

/// Knill–Laflamme detection check on a prebuilt isometry.
pub fn kl_detects_with(
    v: &CodeIsometry,
    graph: &WeightedGraph,
    config: &ErrorConfiguration,
    tol: f64,
) -> Result<bool, OracleError> {
    check_config(v, graph, config)?;
    let layout = row_layout(v, config);
    let count = layout.error_offsets.len();
    for g in 0..count {
        for h in 0..count {
            let m = compressed(v, &layout, g, h);
            if proportionality(&m, v.cols, tol).is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn kl_detects(
    graph: &WeightedGraph,
    group: &FiniteAbelianGroup,
    config: &ErrorConfiguration,
    oracle: &OracleConfig,
) -> Result<bool, OracleError> {
    let v = build_isometry(graph, group, oracle)?;
    kl_detects_with(&v, graph, config, oracle.tolerance)
}

/// One entry of the observed proportionality table, `V†FV = λ·1` for
/// `F = |g^E⟩⟨h^E| ⊗ 1`. Indices follow the lexicographic order of `G^E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaEntry {
    pub g: usize,
    pub h: usize,
    pub lambda: Complex64,
}

/// The full `λ(g^E, h^E)` table of a detected configuration.
pub fn omega_table(
    v: &CodeIsometry,
    graph: &WeightedGraph,
    config: &ErrorConfiguration,
    tol: f64,
) -> Result<Vec<OmegaEntry>, OracleError> {
    check_config(v, graph, config)?;
    let layout = row_layout(v, config);
    let count = layout.error_offsets.len();
    let mut out = Vec::with_capacity(count * count);
    for g in 0..count {
        for h in 0..count {
            let m = compressed(v, &layout, g, h);
            let lambda = proportionality(&m, v.cols, tol).ok_or(OracleError::NotDetected)?;
            out.push(OmegaEntry { g, h, lambda });
        }
    }
    Ok(out)
}
