//! Finite abelian groups `Z_{d_1} × … × Z_{d_r}` and the standard bicharacter.
//!
//! Elements are residue tuples. The bicharacter of `g` and `h` is the root of
//! unity `exp(2πi·t)` with `t = Σ_i g_i·h_i / d_i mod 1`; it is kept as the
//! exact rational `t` (a [`Phase`]) so that the group algebra stays exact.

use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use thiserror::Error;

/// Default upper bound on `|G|` for operations that enumerate every element.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("a group needs at least one cyclic factor")]
    NoFactors,
    #[error("cyclic factor {0} is smaller than 2")]
    FactorTooSmall(u64),
    #[error("group order overflows 64 bits")]
    OrderOverflow,
    #[error("element has {found} residues, group has {expected} factors")]
    LengthMismatch { expected: usize, found: usize },
    #[error("group order {order} exceeds the enumeration cap {cap}")]
    CapExceeded { order: u64, cap: u64 },
    #[error("element index {0} is out of range")]
    IndexOutOfRange(u64),
}

/// A product of cyclic groups, given by an arbitrary (not necessarily
/// divisibility-ordered) list of factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
    order: u64,
    exponent: u64,
    cap: u64,
}

/// A group element as a tuple of reduced residues, one per cyclic factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    residues: Vec<u64>,
}

impl GroupElement {
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn is_zero(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, r) in self.residues.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str(")")
    }
}

/// An exact root of unity `exp(2πi·num/den)` with `0 ≤ num < den` in lowest
/// terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase {
    num: u64,
    den: u64,
}

impl Phase {
    pub const ONE: Phase = Phase { num: 0, den: 1 };

    /// The phase `exp(2πi·num/den)`, reduced mod 1 and to lowest terms.
    ///
    /// # Panics
    ///
    /// If `den == 0`.
    pub fn new(num: i128, den: u64) -> Phase {
        assert!(den > 0, "phase denominator must be positive");
        let n = num.rem_euclid(den as i128) as u64;
        let g = n.gcd(&den);
        Phase {
            num: n / g,
            den: den / g,
        }
    }

    pub fn numerator(self) -> u64 {
        self.num
    }

    pub fn denominator(self) -> u64 {
        self.den
    }

    pub fn is_one(self) -> bool {
        self.num == 0
    }

    /// Complex conjugate (negated exponent).
    pub fn conj(self) -> Phase {
        Phase::new(-(self.num as i128), self.den)
    }

    /// Integer power, which is how graph weights act on the bicharacter.
    pub fn pow(self, k: i64) -> Phase {
        let k = (k as i128).rem_euclid(self.den as i128);
        Phase::new(k * self.num as i128, self.den)
    }

    /// The exponent `t` as a float in `[0, 1)`.
    pub fn turns(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// Product of phases (sum of exponents).
impl core::ops::Mul for Phase {
    type Output = Phase;

    fn mul(self, other: Phase) -> Phase {
        let den = self.den.lcm(&other.den);
        let a = self.num as u128 * (den / self.den) as u128;
        let b = other.num as u128 * (den / other.den) as u128;
        Phase::new(((a + b) % den as u128) as i128, den)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FiniteAbelianGroup {
    pub fn new(factors: &[u64]) -> Result<Self, GroupError> {
        if factors.is_empty() {
            return Err(GroupError::NoFactors);
        }
        let mut order: u64 = 1;
        let mut exponent: u64 = 1;
        for &d in factors {
            if d < 2 {
                return Err(GroupError::FactorTooSmall(d));
            }
            order = order.checked_mul(d).ok_or(GroupError::OrderOverflow)?;
            exponent = exponent.lcm(&d);
        }
        Ok(FiniteAbelianGroup {
            factors: factors.to_vec(),
            order,
            exponent,
            cap: DEFAULT_ENUMERATION_CAP,
        })
    }

    /// Cyclic group `Z_d`.
    pub fn cyclic(d: u64) -> Result<Self, GroupError> {
        Self::new(&[d])
    }

    pub fn with_enumeration_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn enumeration_cap(&self) -> u64 {
        self.cap
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            residues: alloc::vec![0; self.factors.len()],
        }
    }

    /// Builds an element, reducing each integer modulo its factor.
    pub fn element(&self, values: &[i64]) -> Result<GroupElement, GroupError> {
        self.check_len(values.len())?;
        let residues = values
            .iter()
            .zip(&self.factors)
            .map(|(&v, &d)| (v as i128).rem_euclid(d as i128) as u64)
            .collect();
        Ok(GroupElement { residues })
    }

    fn check_len(&self, found: usize) -> Result<(), GroupError> {
        if found != self.factors.len() {
            return Err(GroupError::LengthMismatch {
                expected: self.factors.len(),
                found,
            });
        }
        Ok(())
    }

    fn check_member(&self, g: &GroupElement) -> Result<(), GroupError> {
        self.check_len(g.residues.len())
    }

    pub fn add(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_member(g)?;
        self.check_member(h)?;
        let residues = g
            .residues
            .iter()
            .zip(&h.residues)
            .zip(&self.factors)
            .map(|((&a, &b), &d)| ((a as u128 + b as u128) % d as u128) as u64)
            .collect();
        Ok(GroupElement { residues })
    }

    pub fn neg(&self, g: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_member(g)?;
        let residues = g
            .residues
            .iter()
            .zip(&self.factors)
            .map(|(&a, &d)| (d - a % d) % d)
            .collect();
        Ok(GroupElement { residues })
    }

    /// `k·g` for an integer scalar `k`.
    pub fn scale(&self, k: i64, g: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_member(g)?;
        let residues = g
            .residues
            .iter()
            .zip(&self.factors)
            .map(|(&a, &d)| {
                let k = (k as i128).rem_euclid(d as i128) as u128;
                ((k * a as u128) % d as u128) as u64
            })
            .collect();
        Ok(GroupElement { residues })
    }

    /// The standard bicharacter, `t = Σ_i g_i·h_i / d_i mod 1`.
    pub fn chi(&self, g: &GroupElement, h: &GroupElement) -> Result<Phase, GroupError> {
        self.check_member(g)?;
        self.check_member(h)?;
        Ok(Phase::new(
            self.chi_scaled(&g.residues, &h.residues) as i128,
            self.exponent,
        ))
    }

    /// Bicharacter exponent scaled by the group exponent: an integer in
    /// `[0, exponent)`. Callers must pass residue slices of the right length.
    pub(crate) fn chi_scaled(&self, g: &[u64], h: &[u64]) -> u64 {
        let n = self.exponent as u128;
        let mut acc: u128 = 0;
        for ((&a, &b), &d) in g.iter().zip(h).zip(&self.factors) {
            let prod = (a as u128 * b as u128) % d as u128;
            acc = (acc + prod * (n / d as u128)) % n;
        }
        acc as u64
    }

    fn check_cap(&self) -> Result<(), GroupError> {
        if self.order > self.cap {
            return Err(GroupError::CapExceeded {
                order: self.order,
                cap: self.cap,
            });
        }
        Ok(())
    }

    /// All elements in lexicographic order of residue tuples (first factor
    /// most significant). This order fixes every matrix indexing in
    /// [`crate::oracle`].
    pub fn enumerate_elements(&self) -> Result<Vec<GroupElement>, GroupError> {
        self.check_cap()?;
        (0..self.order).map(|i| self.element_at(i)).collect()
    }

    /// Position of `g` in [`Self::enumerate_elements`].
    pub fn index_of(&self, g: &GroupElement) -> Result<u64, GroupError> {
        self.check_member(g)?;
        Ok(g.residues
            .iter()
            .zip(&self.factors)
            .fold(0u64, |acc, (&r, &d)| acc * d + r))
    }

    /// Inverse of [`Self::index_of`].
    pub fn element_at(&self, mut index: u64) -> Result<GroupElement, GroupError> {
        if index >= self.order {
            return Err(GroupError::IndexOutOfRange(index));
        }
        let mut residues = alloc::vec![0; self.factors.len()];
        for (slot, &d) in residues.iter_mut().zip(&self.factors).rev() {
            *slot = index % d;
            index /= d;
        }
        Ok(GroupElement { residues })
    }

    /// Brute-force non-degeneracy: `Σ_g χ(g, g')` must equal `|G|` for
    /// `g' = 0` and vanish otherwise. The sums are evaluated in floating point
    /// with an absolute tolerance of `1e-9·|G|`.
    pub fn check_nondegenerate(&self) -> Result<bool, GroupError> {
        let elements = self.enumerate_elements()?;
        let n = self.exponent as f64;
        let order = self.order as f64;
        let tol = 1e-9 * order;
        for gp in &elements {
            let (mut re, mut im) = (0.0f64, 0.0f64);
            for g in &elements {
                let t = self.chi_scaled(&g.residues, &gp.residues) as f64 / n;
                let angle = 2.0 * core::f64::consts::PI * t;
                re += libm::cos(angle);
                im += libm::sin(angle);
            }
            let expected = if gp.is_zero() { order } else { 0.0 };
            if libm::fabs(re - expected) > tol || libm::fabs(im) > tol {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn grp(f: &[u64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(f).unwrap()
    }

    #[test]
    fn order_and_exponent() {
        let g = grp(&[2]);
        assert_eq!((g.order(), g.exponent()), (2, 2));
        let g = grp(&[5]);
        assert_eq!((g.order(), g.exponent()), (5, 5));
        let g = grp(&[2, 4]);
        assert_eq!((g.order(), g.exponent()), (8, 4));
    }

    #[test]
    fn rejects_bad_factor_lists() {
        assert_eq!(FiniteAbelianGroup::new(&[]), Err(GroupError::NoFactors));
        assert_eq!(
            FiniteAbelianGroup::new(&[3, 1]),
            Err(GroupError::FactorTooSmall(1))
        );
        assert_eq!(
            FiniteAbelianGroup::new(&[0]),
            Err(GroupError::FactorTooSmall(0))
        );
    }

    #[test]
    fn arithmetic() {
        let g = grp(&[3]);
        let two = g.element(&[2]).unwrap();
        assert_eq!(g.add(&two, &two).unwrap().residues(), &[1]);

        let g = grp(&[2, 3]);
        let x = g.element(&[1, 2]).unwrap();
        assert_eq!(g.neg(&x).unwrap().residues(), &[1, 1]);
        assert!(g.add(&x, &g.neg(&x).unwrap()).unwrap().is_zero());

        let g = grp(&[5]);
        for e in g.enumerate_elements().unwrap() {
            assert_eq!(g.add(&e, &g.zero()).unwrap(), e);
        }
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let g = grp(&[2, 3]);
        let bad = grp(&[2]).element(&[1]).unwrap();
        assert!(matches!(
            g.add(&bad, &g.zero()),
            Err(GroupError::LengthMismatch {
                expected: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn chi_values() {
        let g = grp(&[2]);
        let one = g.element(&[1]).unwrap();
        assert_eq!(g.chi(&one, &one).unwrap(), Phase::new(1, 2));

        let g = grp(&[3]);
        let (a, b) = (g.element(&[1]).unwrap(), g.element(&[2]).unwrap());
        assert_eq!(g.chi(&a, &b).unwrap(), Phase::new(2, 3));

        for d in 2..9 {
            let g = grp(&[d]);
            for h in g.enumerate_elements().unwrap() {
                assert!(g.chi(&g.zero(), &h).unwrap().is_one());
            }
        }
    }

    #[test]
    fn chi_on_products_is_componentwise() {
        let g = grp(&[2, 4]);
        let a = g.element(&[1, 1]).unwrap();
        let b = g.element(&[1, 3]).unwrap();
        // 1/2 + 3/4 = 5/4 = 1/4 mod 1
        assert_eq!(g.chi(&a, &b).unwrap(), Phase::new(1, 4));
    }

    #[test]
    fn nondegenerate() {
        for d in 2..=12 {
            assert!(grp(&[d]).check_nondegenerate().unwrap(), "Z_{d}");
        }
        for f in [[2, 2], [2, 4], [3, 3]] {
            assert!(grp(&f).check_nondegenerate().unwrap());
        }
    }

    #[test]
    fn enumeration_respects_cap() {
        let g = grp(&[4, 4]).with_enumeration_cap(8);
        assert_eq!(
            g.enumerate_elements(),
            Err(GroupError::CapExceeded { order: 16, cap: 8 })
        );
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let g = grp(&[2, 2]);
        let els: Vec<Vec<u64>> = g
            .enumerate_elements()
            .unwrap()
            .iter()
            .map(|e| e.residues().to_vec())
            .collect();
        assert_eq!(els, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        let g = grp(&[3]);
        let els: Vec<u64> = g
            .enumerate_elements()
            .unwrap()
            .iter()
            .map(|e| e.residues()[0])
            .collect();
        assert_eq!(els, vec![0, 1, 2]);
        let g = grp(&[2, 3, 4]);
        for (i, e) in g.enumerate_elements().unwrap().iter().enumerate() {
            assert_eq!(g.index_of(e).unwrap(), i as u64);
        }
    }

    #[test]
    fn phase_algebra() {
        let a = Phase::new(1, 4);
        let b = Phase::new(3, 4);
        assert!((a * b).is_one());
        assert_eq!(a.conj(), b);
        assert_eq!(Phase::new(-1, 3), Phase::new(2, 3));
        assert_eq!(Phase::new(2, 4), Phase::new(1, 2));
        assert_eq!(Phase::new(1, 3).pow(-1), Phase::new(2, 3));
        assert_eq!(Phase::new(1, 6) * Phase::new(1, 3), Phase::new(1, 2));
    }
}
