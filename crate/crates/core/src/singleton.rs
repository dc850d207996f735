//! Off-diagonal subdeterminants of symmetric `2m×2m` matrices.
//!
//! If every off-diagonal `m×m` block `Γ[I, I^c]` is invertible mod a prime
//! `d`, then any choice of `k < m` input vertices gives a code that satisfies
//! the strong detection condition for every configuration with
//! `|X∪E| = m`, saturating `n = 2e + k`. This module computes the blocks'
//! determinants exactly, derives the primes for which that fails, searches
//! for such matrices on a given sparsity pattern, and enumerates small 0/1
//! graphs whose blocks are all unimodular.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::WeightedGraph;
use crate::zmod::{det_exact, IntMatrix};

/// Largest vertex count accepted by [`graph_census`].
pub const CENSUS_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SingletonError {
    #[error("matrix must be square with even dimension, got {rows}x{cols}")]
    OddDimension { rows: usize, cols: usize },
    #[error("matrix is not symmetric at ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("nonzero diagonal entry at {0}")]
    NonzeroDiagonal(usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{found} fixed inputs exceed the block size {m}")]
    TooManyInputs { found: usize, m: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("census needs an even vertex count between 2 and {CENSUS_CAP}, got {0}")]
    CensusSize(usize),
    #[error("weight bound must be at least 1")]
    BadWeightBound,
}

/// Primes dividing at least one subdeterminant. A zero determinant makes
/// every prime bad.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BadPrimes {
    All,
    Finite(Vec<u64>),
}

impl BadPrimes {
    pub fn contains(&self, p: u64) -> bool {
        match self {
            BadPrimes::All => true,
            BadPrimes::Finite(ps) => ps.binary_search(&p).is_ok(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionDet {
    /// The block containing vertex 0, sorted.
    pub block: Vec<usize>,
    pub complement: Vec<usize>,
    /// `det Γ[block, complement]`.
    pub det: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterminantReport {
    pub m: usize,
    pub partitions: Vec<PartitionDet>,
    pub det_set: Vec<BigInt>,
    pub bad_primes: BadPrimes,
}

impl DeterminantReport {
    /// Primes `≤ limit` for which every block is invertible.
    pub fn good_primes(&self, limit: u64) -> Vec<u64> {
        primes_up_to(limit)
            .into_iter()
            .filter(|&p| !self.bad_primes.contains(p))
            .collect()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

pub fn primes_up_to(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&p| is_prime(p)).collect()
}

/// Distinct prime factors of `|x|`, ascending. `x` must be nonzero.
pub fn prime_factors(x: &BigInt) -> Vec<u64> {
    let mut n = x.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2u8);
    while &p * &p <= n {
        if n.is_multiple_of(&p) {
            out.push(p.to_u64().expect("trial divisor fits in u64"));
            while n.is_multiple_of(&p) {
                n /= &p;
            }
        }
        p += 1u8;
    }
    if n > BigInt::one() {
        // a residual factor beyond u64 cannot be a group order we care about
        if let Some(q) = n.to_u64() {
            out.push(q);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn validate(gamma: &IntMatrix) -> Result<usize, SingletonError> {
    let (rows, cols) = (gamma.rows(), gamma.cols());
    if rows != cols || rows % 2 == 1 || rows == 0 {
        return Err(SingletonError::OddDimension { rows, cols });
    }
    for i in 0..rows {
        if !gamma[(i, i)].is_zero() {
            return Err(SingletonError::NonzeroDiagonal(i));
        }
        for j in i + 1..rows {
            if gamma[(i, j)] != gamma[(j, i)] {
                return Err(SingletonError::NotSymmetric(i, j));
            }
        }
    }
    Ok(rows / 2)
}

/// Unordered partitions of `0..2m` into two `m`-blocks, as (block with 0,
/// complement), lexicographic on the first block.
pub fn partitions(m: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = 2 * m;
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (1..m).collect();
    loop {
        let mut block = Vec::with_capacity(m);
        block.push(0);
        block.extend(&idx);
        let complement = (0..n).filter(|v| block.binary_search(v).is_err()).collect();
        out.push((block, complement));
        // next (m-1)-subset of 1..n
        let k = idx.len();
        match (0..k).rev().find(|&i| idx[i] < n - k + i) {
            Some(i) => {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
            }
            None => break,
        }
    }
    out
}

fn bad_primes_of<'a>(dets: impl Iterator<Item = &'a BigInt>) -> BadPrimes {
    let mut primes = Vec::new();
    for d in dets {
        if d.is_zero() {
            return BadPrimes::All;
        }
        primes.extend(prime_factors(d));
    }
    primes.sort_unstable();
    primes.dedup();
    BadPrimes::Finite(primes)
}

pub fn offdiag_subdets(gamma: &IntMatrix) -> Result<DeterminantReport, SingletonError> {
    let m = validate(gamma)?;
    let partitions: Vec<PartitionDet> = partitions(m)
        .into_iter()
        .map(|(block, complement)| {
            let det = det_exact(&gamma.select(&block, &complement)).expect("square block");
            PartitionDet {
                block,
                complement,
                det,
            }
        })
        .collect();
    let mut det_set: Vec<BigInt> = partitions.iter().map(|p| p.det.clone()).collect();
    det_set.sort();
    det_set.dedup();
    let bad_primes = bad_primes_of(partitions.iter().map(|p| &p.det));
    Ok(DeterminantReport {
        m,
        partitions,
        det_set,
        bad_primes,
    })
}

/// Every off-diagonal block is invertible over `Z_d`.
pub fn is_strongly_ec(gamma: &IntMatrix, d: u64) -> Result<bool, SingletonError> {
    if !is_prime(d) {
        return Err(SingletonError::NotPrime(d));
    }
    Ok(!offdiag_subdets(gamma)?.bad_primes.contains(d))
}

/// Bad primes over the partitions that keep all `fixed_inputs` in one block
/// (that block then plays the role of `X∪E`).
pub fn restricted_bad_primes(
    gamma: &IntMatrix,
    fixed_inputs: &[usize],
) -> Result<BadPrimes, SingletonError> {
    let report = offdiag_subdets(gamma)?;
    if fixed_inputs.len() > report.m {
        return Err(SingletonError::TooManyInputs {
            found: fixed_inputs.len(),
            m: report.m,
        });
    }
    if let Some(&v) = fixed_inputs.iter().find(|&&v| v >= 2 * report.m) {
        return Err(SingletonError::VertexOutOfRange(v));
    }
    let inside = |block: &[usize]| fixed_inputs.iter().all(|v| block.contains(v));
    Ok(bad_primes_of(
        report
            .partitions
            .iter()
            .filter(|p| inside(&p.block) || inside(&p.complement))
            .map(|p| &p.det),
    ))
}

/// Symmetric 0/1 support pattern with zero diagonal: which entries of `Γ`
/// may be nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    n: usize,
    support: Vec<bool>,
}

impl Skeleton {
    pub fn new(pattern: &[Vec<bool>]) -> Result<Self, SingletonError> {
        let n = pattern.len();
        if n == 0 || n % 2 == 1 || pattern.iter().any(|r| r.len() != n) {
            return Err(SingletonError::OddDimension {
                rows: n,
                cols: pattern.first().map_or(0, Vec::len),
            });
        }
        for (i, row) in pattern.iter().enumerate() {
            if row[i] {
                return Err(SingletonError::NonzeroDiagonal(i));
            }
            for (j, &entry) in row.iter().enumerate().skip(i + 1) {
                if entry != pattern[j][i] {
                    return Err(SingletonError::NotSymmetric(i, j));
                }
            }
        }
        Ok(Skeleton {
            n,
            support: pattern.iter().flatten().copied().collect(),
        })
    }

    /// The nonzero pattern of a matrix.
    pub fn from_matrix(gamma: &IntMatrix) -> Result<Self, SingletonError> {
        validate(gamma)?;
        let pattern: Vec<Vec<bool>> = (0..gamma.rows())
            .map(|i| gamma.row(i).iter().map(|x| !x.is_zero()).collect())
            .collect();
        Self::new(&pattern)
    }

    /// All off-diagonal positions allowed.
    pub fn complete(n: usize) -> Result<Self, SingletonError> {
        let pattern: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i != j).collect()).collect();
        Self::new(&pattern)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn allows(&self, i: usize, j: usize) -> bool {
        self.support[i * self.n + j]
    }

    pub fn row_degree(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| self.allows(i, j)).count()
    }

    /// Allowed positions `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.allows(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// A partition whose off-diagonal block has a row or column with no
    /// allowed entry; such a block is singular for every weight choice.
    pub fn structural_obstruction(&self) -> Option<Vec<usize>> {
        let m = self.n / 2;
        partitions(m).into_iter().find_map(|(block, complement)| {
            let dead_row = block
                .iter()
                .any(|&i| complement.iter().all(|&j| !self.allows(i, j)));
            let dead_col = complement
                .iter()
                .any(|&j| block.iter().all(|&i| !self.allows(i, j)));
            (dead_row || dead_col).then_some(block)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found {
        gamma: IntMatrix,
        attempts: u64,
        report: DeterminantReport,
    },
    Exhausted {
        attempts: u64,
    },
    /// The skeleton cannot work: the listed block is structurally singular.
    Infeasible {
        block: Vec<usize>,
    },
}

/// Randomized search for weights in `[-bound, bound] ∖ {0}` on the skeleton
/// such that every off-diagonal block has nonzero determinant.
///
/// Attempt `i` draws from a ChaCha8 stream `i` keyed by `seed`, so results do
/// not depend on how attempts are scheduled.
pub fn search_weights(
    skeleton: &Skeleton,
    bound: u32,
    seed: u64,
    budget: u64,
) -> Result<SearchOutcome, SingletonError> {
    if bound == 0 {
        return Err(SingletonError::BadWeightBound);
    }
    if let Some(block) = skeleton.structural_obstruction() {
        return Ok(SearchOutcome::Infeasible { block });
    }
    let n = skeleton.size();
    let parts = partitions(n / 2);
    let edges = skeleton.edges();
    for attempt in 0..budget {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt);
        let mut gamma = IntMatrix::zeros(n, n);
        for &(i, j) in &edges {
            let mag = rng.gen_range(1..=bound as i64);
            let w = if rng.gen::<bool>() { mag } else { -mag };
            gamma[(i, j)] = BigInt::from(w);
            gamma[(j, i)] = BigInt::from(w);
        }
        let ok = parts.iter().all(|(block, complement)| {
            !det_exact(&gamma.select(block, complement))
                .expect("square block")
                .is_zero()
        });
        if ok {
            let report = offdiag_subdets(&gamma)?;
            return Ok(SearchOutcome::Found {
                gamma,
                attempts: attempt + 1,
                report,
            });
        }
    }
    Ok(SearchOutcome::Exhausted { attempts: budget })
}

/// Convenience: the report for a graph's full weight matrix.
pub fn graph_subdets(graph: &WeightedGraph) -> Result<DeterminantReport, SingletonError> {
    offdiag_subdets(graph.gamma())
}

/// Predicate applied to every off-diagonal block in [`graph_census`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusPredicate {
    /// Determinant `±1`: invertible modulo every `d ≥ 2`.
    Unimodular,
    /// Determinant nonzero modulo the given prime.
    InvertibleMod(u64),
}

impl CensusPredicate {
    fn accepts(self, det: &BigInt) -> bool {
        match self {
            CensusPredicate::Unimodular => det.abs().is_one(),
            CensusPredicate::InvertibleMod(p) => !det.is_multiple_of(&BigInt::from(p)),
        }
    }
}

/// One isomorphism class of simple graphs, by its canonical labelling.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CensusClass {
    pub n: usize,
    /// Adjacency bits over pairs `(i, j)`, `i < j`, in lexicographic order,
    /// first pair most significant; minimal over all relabellings.
    pub canonical: u64,
    /// Number of labelled graphs in the class that were enumerated.
    pub members: u64,
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

impl CensusClass {
    pub fn bitstring(&self) -> String {
        let count = self.n * (self.n - 1) / 2;
        (0..count)
            .map(|k| {
                if self.canonical >> (count - 1 - k) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let ps = pairs(self.n);
        let count = ps.len();
        ps.into_iter()
            .enumerate()
            .filter(|&(k, _)| self.canonical >> (count - 1 - k) & 1 == 1)
            .map(|(_, p)| p)
            .collect()
    }

    pub fn adjacency(&self) -> IntMatrix {
        let mut a = IntMatrix::zeros(self.n, self.n);
        for (i, j) in self.edges() {
            a[(i, j)] = BigInt::one();
            a[(j, i)] = BigInt::one();
        }
        a
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len())
        .rev()
        .find(|&j| p[j] > p[i - 1])
        .expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Canonical adjacency bits of a simple graph given as a 0/1 matrix
/// (nonzero entries count as edges): the minimum over all relabellings.
pub fn canonical_form(adj: &IntMatrix) -> u64 {
    let n = adj.rows();
    let ps = pairs(n);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    loop {
        let mut bits = 0u64;
        for &(i, j) in &ps {
            bits = (bits << 1) | u64::from(!adj[(perm[i], perm[j])].is_zero());
        }
        best = best.min(bits);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best
}

/// Enumerates all simple graphs on `n` labelled vertices and returns the
/// isomorphism classes whose off-diagonal `(n/2)×(n/2)` blocks all satisfy
/// `predicate`, sorted by canonical form.
pub fn graph_census(
    n: usize,
    predicate: CensusPredicate,
) -> Result<Vec<CensusClass>, SingletonError> {
    if n < 2 || n % 2 == 1 || n > CENSUS_CAP {
        return Err(SingletonError::CensusSize(n));
    }
    let ps = pairs(n);
    let parts = partitions(n / 2);
    let mut classes: Vec<CensusClass> = Vec::new();
    for mask in 0u64..(1u64 << ps.len()) {
        let mut adj = IntMatrix::zeros(n, n);
        for (k, &(i, j)) in ps.iter().enumerate() {
            if mask >> k & 1 == 1 {
                adj[(i, j)] = BigInt::one();
                adj[(j, i)] = BigInt::one();
            }
        }
        let ok = parts.iter().all(|(block, complement)| {
            predicate.accepts(&det_exact(&adj.select(block, complement)).expect("square block"))
        });
        if !ok {
            continue;
        }
        let canonical = canonical_form(&adj);
        match classes.iter_mut().find(|c| c.canonical == canonical) {
            Some(c) => c.members += 1,
            None => classes.push(CensusClass {
                n,
                canonical,
                members: 1,
            }),
        }
    }
    classes.sort();
    Ok(classes)
}
