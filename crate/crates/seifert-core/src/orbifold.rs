//! Closed 2-orbifolds of the relevant types and oriented Seifert fibered
//! 3-orbifolds over them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar used for Euler classes and characteristics.
pub type Rational = BigRational;

/// Builds `n/d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i128, d: i128) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Fractional part in `[0, 1)`.
pub fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

/// Representative of `r mod 1` in `(-1/2, 1/2]`.
pub fn centered_residue(r: &Rational) -> Rational {
    let f = frac(r);
    if f > rat(1, 2) {
        f - Rational::one()
    } else {
        f
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbifoldError {
    #[error("singularity labels must be positive")]
    ZeroLabel,
    #[error("corner reflectors only occur on a disk base")]
    CornersOffDisk,
    #[error("invariant order must be at least 1")]
    ZeroOrder,
    #[error("cone invariants have orders {found:?} but the base has cone labels {expected:?}")]
    ConeMismatch { expected: Vec<u64>, found: Vec<u64> },
    #[error("corner invariants have orders {found:?} but the base has corner labels {expected:?}")]
    CornerMismatch { expected: Vec<u64>, found: Vec<u64> },
    #[error("the boundary bit xi is required exactly when the base is a disk")]
    XiShape,
    #[error("xi must be 0 or 1, got {0}")]
    XiRange(u8),
    #[error("Euler relation fails: residue {0} mod 1")]
    Residue(Rational),
    #[error("no boundary bit satisfies the Euler relation (residue {0} mod 1)")]
    NoXi(Rational),
    #[error("base orbifold has non-positive Euler characteristic {0}")]
    NonPositiveChi(Rational),
    #[error("orbifold is not spherical (chi = {chi}, e = {euler})")]
    NotSpherical { chi: Rational, euler: Rational },
    #[error("gcd({0}, {1}) is not 1")]
    NotCoprime(u64, u64),
    #[error("sign must be +1 or -1")]
    BadSign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Surface {
    Sphere,
    ProjectivePlane,
    Disk,
}

impl Surface {
    pub fn euler_characteristic(self) -> i128 {
        match self {
            Surface::Sphere => 2,
            Surface::ProjectivePlane | Surface::Disk => 1,
        }
    }

    pub fn boundary_components(self) -> usize {
        match self {
            Surface::Disk => 1,
            _ => 0,
        }
    }
}

/// A closed 2-orbifold `X(n_1,..;m_1,..)` with cone labels `n_i` and corner
/// labels `m_j`. Labels equal to 1 are regular points and never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoOrbifold {
    surface: Surface,
    cones: Vec<u64>,
    corners: Vec<u64>,
}

impl TwoOrbifold {
    pub fn new(surface: Surface, cones: Vec<u64>, corners: Vec<u64>) -> Result<Self, OrbifoldError> {
        if cones.iter().chain(&corners).any(|&l| l == 0) {
            return Err(OrbifoldError::ZeroLabel);
        }
        let mut cones: Vec<u64> = cones.into_iter().filter(|&l| l != 1).collect();
        let mut corners: Vec<u64> = corners.into_iter().filter(|&l| l != 1).collect();
        if !corners.is_empty() && surface != Surface::Disk {
            return Err(OrbifoldError::CornersOffDisk);
        }
        cones.sort_unstable();
        corners.sort_unstable();
        Ok(TwoOrbifold { surface, cones, corners })
    }

    pub fn surface(&self) -> Surface {
        self.surface
    }

    pub fn cones(&self) -> &[u64] {
        &self.cones
    }

    pub fn corners(&self) -> &[u64] {
        &self.corners
    }

    pub fn euler_characteristic(&self) -> Rational {
        let mut chi = rat(self.surface.euler_characteristic(), 1);
        for &n in &self.cones {
            chi -= Rational::one() - rat(1, n as i128);
        }
        for &m in &self.corners {
            chi -= (Rational::one() - rat(1, m as i128)) / rat(2, 1);
        }
        chi
    }

    /// Bad orbifolds among those with positive Euler characteristic: the
    /// teardrops and spindles `S²(p)`, `S²(p,q)`, `D²(;p)`, `D²(;p,q)`, `p ≠ q`.
    pub fn is_bad(&self) -> Result<bool, OrbifoldError> {
        let chi = self.euler_characteristic();
        if !chi.is_positive() {
            return Err(OrbifoldError::NonPositiveChi(chi));
        }
        let distinct = |l: &[u64]| match l {
            [_] => true,
            [p, q] => p != q,
            _ => false,
        };
        Ok(match self.surface {
            Surface::Sphere => distinct(&self.cones),
            Surface::Disk => self.cones.is_empty() && distinct(&self.corners),
            Surface::ProjectivePlane => false,
        })
    }

    /// `S²` with at most two cone points.
    pub fn is_sphere_class(&self) -> bool {
        self.surface == Surface::Sphere && self.cones.len() <= 2
    }

    /// `D²` with no cone points and at most two corner points.
    pub fn is_disk_class(&self) -> bool {
        self.surface == Surface::Disk && self.cones.is_empty() && self.corners.len() <= 2
    }
}

/// Local invariant `a/b ∈ Q/Z` of an exceptional fiber over a point of order
/// `b`, stored with `0 <= a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocalInvariant {
    // field order gives the (b, a) sort of the canonical form
    b: u64,
    a: u64,
}

impl LocalInvariant {
    pub fn new(a: i128, b: u64) -> Result<Self, OrbifoldError> {
        if b == 0 {
            return Err(OrbifoldError::ZeroOrder);
        }
        let a = a.rem_euclid(b as i128) as u64;
        Ok(LocalInvariant { b, a })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// Singularity index of the fiber, `gcd(a, b)`.
    pub fn iota(&self) -> u64 {
        self.a.gcd(&self.b)
    }

    pub fn value(&self) -> Rational {
        rat(self.a as i128, self.b as i128)
    }

    pub fn negated(&self) -> Self {
        LocalInvariant { b: self.b, a: (self.b - self.a) % self.b }
    }
}

/// Oriented Seifert fibered 3-orbifold `(X; a_i/b_i; a'_j/b'_j; e; ξ)`.
///
/// Invariant lists are kept in the order given; [`FiberedOrbifold::normalize`]
/// produces the canonical form used for equality in the classifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiberedOrbifold {
    base: TwoOrbifold,
    cones: Vec<LocalInvariant>,
    corners: Vec<LocalInvariant>,
    euler: Rational,
    xi: Option<u8>,
}

fn orders(list: &[LocalInvariant]) -> Vec<u64> {
    let mut o: Vec<u64> = list.iter().map(|i| i.b).filter(|&b| b != 1).collect();
    o.sort_unstable();
    o
}

impl FiberedOrbifold {
    /// Structural constructor; the base labels are read off the invariants.
    /// The Euler relation is not checked here, see [`FiberedOrbifold::validate`].
    pub fn new(
        surface: Surface,
        cones: Vec<LocalInvariant>,
        corners: Vec<LocalInvariant>,
        euler: Rational,
        xi: Option<u8>,
    ) -> Result<Self, OrbifoldError> {
        let base = TwoOrbifold::new(surface, orders(&cones), orders(&corners))?;
        Self::from_parts(base, cones, corners, euler, xi)
    }

    /// Constructor with an explicit base, checking that the label multisets
    /// agree with the invariant orders.
    pub fn from_parts(
        base: TwoOrbifold,
        cones: Vec<LocalInvariant>,
        corners: Vec<LocalInvariant>,
        euler: Rational,
        xi: Option<u8>,
    ) -> Result<Self, OrbifoldError> {
        let found = orders(&cones);
        if found != base.cones {
            return Err(OrbifoldError::ConeMismatch { expected: base.cones.clone(), found });
        }
        let found = orders(&corners);
        if found != base.corners {
            return Err(OrbifoldError::CornerMismatch { expected: base.corners.clone(), found });
        }
        match (base.surface, xi) {
            (Surface::Disk, Some(x)) if x > 1 => return Err(OrbifoldError::XiRange(x)),
            (Surface::Disk, Some(_)) => {}
            (Surface::Disk, None) | (_, Some(_)) => return Err(OrbifoldError::XiShape),
            (_, None) => {}
        }
        Ok(FiberedOrbifold { base, cones, corners, euler, xi })
    }

    /// Builds a normalized fibration, solving the Euler relation for ξ on a disk base and
    /// checking it elsewhere.
    pub fn solved(
        surface: Surface,
        cones: Vec<LocalInvariant>,
        corners: Vec<LocalInvariant>,
        euler: Rational,
    ) -> Result<Self, OrbifoldError> {
        let xi = match surface {
            Surface::Disk => Some(solve_xi(&cones, &corners, &euler)?),
            _ => None,
        };
        let f = Self::new(surface, cones, corners, euler, xi)?.normalize();
        f.validate()?;
        Ok(f)
    }

    pub fn base(&self) -> &TwoOrbifold {
        &self.base
    }

    pub fn surface(&self) -> Surface {
        self.base.surface
    }

    pub fn cone_invariants(&self) -> &[LocalInvariant] {
        &self.cones
    }

    pub fn corner_invariants(&self) -> &[LocalInvariant] {
        &self.corners
    }

    pub fn euler(&self) -> &Rational {
        &self.euler
    }

    pub fn xi(&self) -> Option<u8> {
        self.xi
    }

    /// Left side of the Euler relation reduced into `(-1/2, 1/2]`.
    pub fn residue(&self) -> Rational {
        let mut r = self.euler.clone() + invariant_sum(&self.cones);
        r += invariant_sum(&self.corners) / rat(2, 1);
        if let Some(x) = self.xi {
            r += rat(x as i128, 2);
        }
        centered_residue(&r)
    }

    pub fn validate(&self) -> Result<(), OrbifoldError> {
        let r = self.residue();
        if r.is_zero() {
            Ok(())
        } else {
            Err(OrbifoldError::Residue(r))
        }
    }

    /// Canonical form: order-1 points dropped, lists sorted by `(b, a)`.
    pub fn normalize(&self) -> Self {
        let keep = |l: &[LocalInvariant]| {
            let mut v: Vec<LocalInvariant> = l.iter().copied().filter(|i| i.b != 1).collect();
            v.sort_unstable();
            v
        };
        FiberedOrbifold {
            base: self.base.clone(),
            cones: keep(&self.cones),
            corners: keep(&self.corners),
            euler: self.euler.clone(),
            xi: self.xi,
        }
    }

    /// Opposite orientation: invariants and Euler class change sign. The
    /// boundary bit is re-solved, since negating a nonzero corner invariant
    /// inside `[0,1)` shifts its half-weight by `1/2`.
    pub fn reverse_orientation(&self) -> Self {
        let cones: Vec<LocalInvariant> = self.cones.iter().map(LocalInvariant::negated).collect();
        let corners: Vec<LocalInvariant> = self.corners.iter().map(LocalInvariant::negated).collect();
        let xi = self.xi.map(|x| {
            let flips = self.corners.iter().filter(|i| i.a != 0).count() as u8;
            (x + flips) % 2
        });
        FiberedOrbifold { base: self.base.clone(), cones, corners, euler: -self.euler.clone(), xi }
            .normalize()
    }

    pub fn is_spherical(&self) -> bool {
        self.base.euler_characteristic().is_positive() && !self.euler.is_zero()
    }

    pub fn require_spherical(&self) -> Result<(), OrbifoldError> {
        if self.is_spherical() {
            Ok(())
        } else {
            Err(OrbifoldError::NotSpherical {
                chi: self.base.euler_characteristic(),
                euler: self.euler.clone(),
            })
        }
    }
}

fn invariant_sum(list: &[LocalInvariant]) -> Rational {
    list.iter().fold(Rational::zero(), |acc, i| acc + i.value())
}

/// The unique ξ ∈ {0,1} satisfying the Euler relation over a disk.
pub fn solve_xi(cones: &[LocalInvariant], corners: &[LocalInvariant], euler: &Rational) -> Result<u8, OrbifoldError> {
    let r = frac(&(euler.clone() + invariant_sum(cones) + invariant_sum(corners) / rat(2, 1)));
    if r.is_zero() {
        Ok(0)
    } else if r == rat(1, 2) {
        Ok(1)
    } else {
        Err(OrbifoldError::NoXi(r))
    }
}

/// Seifert data of the fibration of S³ with base `S²(u,v)`; `sign = +1` is
/// the Hopf side (negative Euler class).
pub fn s3_fibration(u: u64, v: u64, sign: i8) -> Result<FiberedOrbifold, OrbifoldError> {
    if sign != 1 && sign != -1 {
        return Err(OrbifoldError::BadSign);
    }
    if u == 0 || v == 0 {
        return Err(OrbifoldError::ZeroLabel);
    }
    if u.gcd(&v) != 1 {
        return Err(OrbifoldError::NotCoprime(u, v));
    }
    let g = (u as i128).extended_gcd(&(v as i128));
    // u*ubar + v*vbar = 1
    let (ubar, vbar) = (g.x, g.y);
    let f = FiberedOrbifold::new(
        Surface::Sphere,
        vec![LocalInvariant::new(vbar, u)?, LocalInvariant::new(ubar, v)?],
        vec![],
        rat(-1, (u as i128) * (v as i128)),
        None,
    )?
    .normalize();
    f.validate()?;
    Ok(if sign == 1 { f } else { f.reverse_orientation() })
}
