//! Lens spaces from two-fiber Seifert data, and their oriented classification.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::orbifold::{FiberedOrbifold, Rational, Surface};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LensError {
    #[error("p = 0: the total space is S2 x S1, not spherical")]
    ZeroP,
    #[error("classical fraction {0}/{1} is not reduced with positive denominator")]
    BadFraction(BigInt, BigInt),
    #[error("lens data needs a sphere base with at most two cone points")]
    NotSphereClass,
    #[error("invariants are inconsistent with the Euler class")]
    Inconsistent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EquivalenceMode {
    /// `q' ≡ q^{±1}`: the two cores may be exchanged.
    Oriented,
    /// `q' ≡ q`: each core must go to its counterpart.
    FixedCores,
}

/// Classical Seifert data `(S²; α₁/β₁, α₂/β₂)` with Euler class
/// `−(α₁/β₁ + α₂/β₂)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassicalSeifert {
    pub alpha: [BigInt; 2],
    pub beta: [BigInt; 2],
}

impl ClassicalSeifert {
    pub fn new(a1: BigInt, b1: BigInt, a2: BigInt, b2: BigInt) -> Result<Self, LensError> {
        for (a, b) in [(&a1, &b1), (&a2, &b2)] {
            if !b.is_positive() || !a.gcd(b).is_one() {
                return Err(LensError::BadFraction(a.clone(), b.clone()));
            }
        }
        Ok(ClassicalSeifert { alpha: [a1, a2], beta: [b1, b2] })
    }

    pub fn euler(&self) -> Rational {
        -(Rational::new(self.alpha[0].clone(), self.beta[0].clone())
            + Rational::new(self.alpha[1].clone(), self.beta[1].clone()))
    }

    pub fn swapped(&self) -> Self {
        ClassicalSeifert {
            alpha: [self.alpha[1].clone(), self.alpha[0].clone()],
            beta: [self.beta[1].clone(), self.beta[0].clone()],
        }
    }
}

impl fmt::Display for ClassicalSeifert {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}/{}, {}/{})", self.alpha[0], self.beta[0], self.alpha[1], self.beta[1])
    }
}

/// Oriented lens space `L(p,q)` with `p ≥ 1` and `0 ≤ q < p`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LensSpace {
    p: BigInt,
    q: BigInt,
}

impl LensSpace {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, LensError> {
        let (mut p, mut q) = (p.into(), q.into());
        if p.is_zero() {
            return Err(LensError::ZeroP);
        }
        if p.is_negative() {
            p = -p;
            q = -q;
        }
        let q = q.mod_floor(&p);
        Ok(LensSpace { p, q })
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// Inverse of `q` mod `p`, if it exists.
    pub fn q_inverse(&self) -> Option<BigInt> {
        if self.p.is_one() {
            return Some(BigInt::zero());
        }
        let g = self.q.extended_gcd(&self.p);
        if !g.gcd.abs().is_one() {
            return None;
        }
        Some((g.x * g.gcd.signum()).mod_floor(&self.p))
    }

    /// Representative fixed by the oriented classification: `min(q, q⁻¹)`.
    pub fn oriented_canonical(&self) -> Self {
        match self.q_inverse() {
            Some(inv) if inv < self.q => LensSpace { p: self.p.clone(), q: inv },
            _ => self.clone(),
        }
    }
}

impl fmt::Display for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({},{})", self.p, self.q)
    }
}

/// Cores padded to two and ordered so that `ι₁ ≥ ι₂` (stable on ties).
fn ordered_cores(f: &FiberedOrbifold) -> Result<Vec<(u64, u64)>, LensError> {
    if f.surface() != Surface::Sphere || f.cone_invariants().len() > 2 || !f.corner_invariants().is_empty() {
        return Err(LensError::NotSphereClass);
    }
    let mut cores: Vec<(u64, u64)> = f.cone_invariants().iter().map(|i| (i.a(), i.b())).collect();
    cores.resize(2, (0, 1));
    cores.sort_by_key(|&(a, b)| std::cmp::Reverse(a.gcd(&b)));
    Ok(cores)
}

/// Underlying classical data of a fibration over `S²` with at most two cone
/// points, with the singularity indices `ι₁ ≥ ι₂` of the two cores.
pub fn classical_from_fibration(f: &FiberedOrbifold) -> Result<(ClassicalSeifert, u64, u64), LensError> {
    let cores = ordered_cores(f)?;
    let iota: Vec<u64> = cores.iter().map(|&(a, b)| a.gcd(&b)).collect();
    let a2 = BigInt::from(cores[1].0 / iota[1]);
    let b2 = BigInt::from(cores[1].1 / iota[1]);
    let b1 = BigInt::from(cores[0].1 / iota[0]);
    // the integer part of e is absorbed into the first fraction
    let a1 = (-f.euler().clone() - Rational::new(a2.clone(), b2.clone())) * Rational::from_integer(b1.clone());
    if !a1.is_integer() {
        return Err(LensError::Inconsistent);
    }
    let c = ClassicalSeifert::new(a1.to_integer(), b1, a2, b2)?;
    Ok((c, iota[0], iota[1]))
}

/// `L(p,q)` with `p = −α₁β₂ − β₁α₂`, `q = β₁γ₂ − α₁δ₂` and
/// `α₂δ₂ + β₂γ₂ = 1`.
pub fn lens_from_classical(c: &ClassicalSeifert) -> Result<LensSpace, LensError> {
    let [a1, a2] = &c.alpha;
    let [b1, b2] = &c.beta;
    let p = -(a1 * b2) - b1 * a2;
    if p.is_zero() {
        return Err(LensError::ZeroP);
    }
    let g = a2.extended_gcd(b2);
    let s = g.gcd.signum();
    let (x, y) = (g.x * &s, g.y * &s);
    if !(g.gcd * s).is_one() {
        return Err(LensError::BadFraction(a2.clone(), b2.clone()));
    }
    // smallest non-negative δ₂; γ₂ shifts along with it
    let delta = x.mod_floor(b2);
    let k = (&delta - &x) / b2;
    let gamma = y - k * a2;
    let q = b1 * gamma - a1 * delta;
    LensSpace::new(p, q)
}

pub fn lens_equiv(x: &LensSpace, y: &LensSpace, mode: EquivalenceMode) -> bool {
    if x.p != y.p {
        return false;
    }
    if x.q == y.q {
        return true;
    }
    match mode {
        EquivalenceMode::FixedCores => false,
        EquivalenceMode::Oriented => (&x.q * &y.q - BigInt::one()).mod_floor(&x.p).is_zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbifold::{rat, LocalInvariant};
    use proptest::prelude::*;

    fn cs(a1: i64, b1: i64, a2: i64, b2: i64) -> ClassicalSeifert {
        ClassicalSeifert::new(a1.into(), b1.into(), a2.into(), b2.into()).unwrap()
    }

    fn small(p: i64, q: i64) -> LensSpace {
        LensSpace::new(p, q).unwrap()
    }

    fn sphere(cones: &[(i128, u64)], e: Rational) -> FiberedOrbifold {
        let cones = cones.iter().map(|&(a, b)| LocalInvariant::new(a, b).unwrap()).collect();
        FiberedOrbifold::solved(Surface::Sphere, cones, vec![], e).unwrap()
    }

    #[test]
    fn normalization() {
        assert_eq!(small(-4, -1), small(4, 1));
        assert_eq!(small(5, 7).q(), &BigInt::from(2));
        assert_eq!(small(1, 5).q(), &BigInt::zero());
        assert_eq!(LensSpace::new(0, 1), Err(LensError::ZeroP));
    }

    #[test]
    fn classical_examples() {
        let (c, i1, i2) = classical_from_fibration(&sphere(&[(0, 2), (0, 2)], rat(-1, 1))).unwrap();
        assert_eq!((c, i1, i2), (cs(1, 1, 0, 1), 2, 2));
        let (c, i1, i2) = classical_from_fibration(&sphere(&[(2, 4), (2, 4)], rat(-1, 1))).unwrap();
        assert_eq!((i1, i2), (2, 2));
        assert_eq!(c.euler(), rat(-1, 1));
        assert_eq!(c.beta, [BigInt::from(2), BigInt::from(2)]);
        let (c, i1, i2) = classical_from_fibration(&sphere(&[(1, 3)], rat(-1, 3))).unwrap();
        assert_eq!((c, i1, i2), (cs(1, 3, 0, 1), 1, 1));
    }

    #[test]
    fn lens_examples() {
        assert_eq!(lens_from_classical(&cs(1, 1, 0, 1)).unwrap(), small(1, 0));
        assert_eq!(lens_from_classical(&cs(1, 2, 1, 2)).unwrap(), small(4, 1));
        assert_eq!(lens_from_classical(&cs(-1, 2, 3, 2)).unwrap(), small(4, 1));
        assert_eq!(lens_from_classical(&cs(1, 1, 1, 1)).unwrap(), small(2, 1));
        assert_eq!(lens_from_classical(&cs(1, 1, -1, 1)), Err(LensError::ZeroP));
    }

    #[test]
    fn equivalence_examples() {
        use EquivalenceMode::*;
        assert!(lens_equiv(&small(5, 2), &small(5, 3), Oriented));
        assert!(!lens_equiv(&small(5, 2), &small(5, 3), FixedCores));
        assert!(lens_equiv(&small(7, 3), &small(7, 3), FixedCores));
        assert!(!lens_equiv(&small(5, 1), &small(5, 4), Oriented));
        assert_eq!(small(5, 3).oriented_canonical(), small(5, 2));
    }

    fn coprime_fraction() -> impl Strategy<Value = (i64, i64)> {
        (-40i64..40, 1i64..20).prop_filter("reduced", |(a, b)| a.gcd(b) == 1)
    }

    proptest! {
        #[test]
        fn rerepresentation_invariant((a1, b1) in coprime_fraction(), (a2, b2) in coprime_fraction(), k in -5i64..5) {
            let c = cs(a1, b1, a2, b2);
            prop_assume!(lens_from_classical(&c).is_ok());
            let shifted = cs(a1 + k * b1, b1, a2 - k * b2, b2);
            let (l, m) = (lens_from_classical(&c).unwrap(), lens_from_classical(&shifted).unwrap());
            prop_assert!(lens_equiv(&l, &m, EquivalenceMode::FixedCores));
        }

        #[test]
        fn swap_inverts_q((a1, b1) in coprime_fraction(), (a2, b2) in coprime_fraction()) {
            let c = cs(a1, b1, a2, b2);
            prop_assume!(lens_from_classical(&c).is_ok());
            let (l, m) = (lens_from_classical(&c).unwrap(), lens_from_classical(&c.swapped()).unwrap());
            prop_assert!(lens_equiv(&l, &m, EquivalenceMode::Oriented));
            prop_assert_eq!(Some(m.q().clone()), l.q_inverse());
        }
    }
}
