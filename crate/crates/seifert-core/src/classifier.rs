//! Counting and enumerating the Seifert fibrations of a spherical orbifold,
//! and deciding orientation-preserving diffeomorphism.
//!
//! Every known relation between two fibrations of the same orbifold is a
//! [`Relation`], usable in both directions and closed under simultaneous
//! orientation reversal. Orbifolds with finitely many fibrations are exactly
//! those whose rewrite closure never meets a base `S²(≤2 cones)` or
//! `D²(≤2 corners)`. The others carry a [`DiffeoKey`] built from lens data.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::lens::{self, EquivalenceMode, LensError, LensSpace};
use crate::orbifold::{rat, FiberedOrbifold, LocalInvariant, OrbifoldError, Rational, Surface};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Orbifold(#[from] OrbifoldError),
    #[error(transparent)]
    Lens(#[from] LensError),
    #[error("integer parameters of a relation leave the supported range")]
    Overflow,
    #[error("rewrite closure grew past {0} fibrations")]
    ClosureLimit(usize),
    #[error("orbifold has infinitely many fibrations")]
    InfiniteClass,
    #[error("orbifold has finitely many fibrations and no lens key")]
    FiniteClass,
    #[error("double cover needs a disk base without cone points")]
    NotDoubleable,
    #[error("finite closure has {0} members")]
    UnexpectedCount(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FibrationCount {
    One,
    Two,
    Three,
    Infinite,
}

impl fmt::Display for FibrationCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FibrationCount::One => "1",
            FibrationCount::Two => "2",
            FibrationCount::Three => "3",
            FibrationCount::Infinite => "infinite",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FibrationClass {
    Finite,
    InfiniteSphereSide,
    InfiniteDiskSide,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KeyClass {
    SphereClass,
    DiskClass,
}

/// The two infinite-class orbifolds that have representatives on both the
/// sphere side and the disk side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CrossClass {
    /// `(S²(2,2); 0/2,0/2; ∓1) ≅ (D²; ; ; ∓1; 0)`
    HopfLink,
    /// `(S²(2,2); 0/2,1/2; ∓1/2) ≅ (D²; ; ; ∓1/2; 1)`
    Unknot,
}

/// Complete invariant of an infinite-class orbifold.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiffeoKey {
    pub class: KeyClass,
    /// Oriented mode stores `min(q, q⁻¹)`; fixed-core mode keeps `q` with
    /// the cores ordered by singularity index.
    pub lens: LensSpace,
    pub iota: (u64, u64),
    pub mode: EquivalenceMode,
    pub cross: Option<CrossClass>,
}

impl fmt::Display for DiffeoKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let class = match self.class {
            KeyClass::SphereClass => "sphere",
            KeyClass::DiskClass => "disk",
        };
        let mode = match self.mode {
            EquivalenceMode::Oriented => "oriented",
            EquivalenceMode::FixedCores => "fixed-cores",
        };
        write!(f, "{class} {} iota=({},{}) {mode}", self.lens, self.iota.0, self.iota.1)?;
        match self.cross {
            Some(CrossClass::HopfLink) => write!(f, " [hopf-link]"),
            Some(CrossClass::Unknot) => write!(f, " [unknot]"),
            None => Ok(()),
        }
    }
}

impl DiffeoKey {
    pub fn equivalent(&self, other: &DiffeoKey) -> bool {
        if self.class != other.class {
            return self.cross.is_some() && self.cross == other.cross;
        }
        self.iota == other.iota && lens::lens_equiv(&self.lens, &other.lens, self.mode)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    /// `(S²(2,2,b); 0/2,0/2,−c/b; c/b) ↔ (D²(|c|;); b/c; ; −b/c)`
    DiskPartner,
    /// `(S²(2,2,b); 1/2,1/2,−c/b; c/b) ↔ (RP²(|c|); b/c; −b/c)`
    ProjectivePartner,
    /// `(S²(2,2,b); 0/2,1/2,·; a/2b) ↔ (D²(|a|;); ((a+b)/2)/a; ; −b/2a)`
    TwistedDisk,
    /// `(D²(;2,2,b); 0/2,0/2,·; c/2b) ↔ (D²(;2,2,|c|); 0/2,0/2,b/c; −b/2c)`
    Mirror,
    /// `(D²(;2,2,b); 1/2,1/2,·; c/2b) ↔ (D²(2;|c|); 0/2; b/c; −b/2c)`
    MirrorCone,
    /// `(D²(;2,2,b); 0/2,1/2,·; a/4b) ↔ (D²(;2,2,|a|); 0/2,1/2,((a+b)/2)/a; −b/4a)`
    MirrorMixed,
    /// `(D²(2;b); 1/2; ·; a/2b) ↔ (D²(2;|a|); 1/2; b/a; −b/2a)`
    ConeCorner,
    /// `(S²(2,3,3); 0/2,2/3,2/3; −1/3) ↔ (D²(3;2); 1/3; 1/2; −1/12)`
    Tetrahedral,
    /// `(S²(2,3,4); 0/2,2/3,2/4; −1/6) ↔ (D²(;2,3,4); 1/2,1/3,1/4; −1/24)`
    Octahedral,
    /// `(S²(2,3,4); 0/2,1/3,3/4; −1/12) ↔ (D²(;2,3,3); 1/2,1/3,1/3; −1/12)`
    OctahedralTwisted,
    /// `(S²(2,3,5); 0/2,2/3,2/5; −1/15) ↔ (D²(;2,3,5); 1/2,1/3,1/5; −1/60)`
    Icosahedral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

/// One application of a relation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rewrite {
    pub relation: Relation,
    pub direction: Direction,
    /// Applied to the reversed input, with the output reversed back.
    pub reversed: bool,
    pub target: FiberedOrbifold,
}

type Pairs = Vec<(i128, i128)>;

fn big_int(r: &Rational) -> Result<Option<i128>, ClassifyError> {
    if !r.is_integer() {
        return Ok(None);
    }
    r.to_integer().to_i128().map(Some).ok_or(ClassifyError::Overflow)
}

fn ratio(n: i128, d: i128) -> Result<Rational, ClassifyError> {
    if d == 0 {
        return Err(ClassifyError::Overflow);
    }
    Ok(rat(n, d))
}

fn mul(a: i128, b: i128) -> Result<i128, ClassifyError> {
    a.checked_mul(b).ok_or(ClassifyError::Overflow)
}

fn sgn(v: i128) -> i128 {
    if v < 0 {
        -1
    } else {
        1
    }
}

fn build(surface: Surface, cones: Pairs, corners: Pairs, e: Rational) -> Result<FiberedOrbifold, ClassifyError> {
    let conv = |l: Pairs| -> Result<Vec<LocalInvariant>, ClassifyError> {
        l.into_iter()
            .map(|(a, b)| {
                let b = u64::try_from(b).map_err(|_| ClassifyError::Overflow)?;
                Ok(LocalInvariant::new(a, b)?)
            })
            .collect()
    };
    Ok(FiberedOrbifold::solved(surface, conv(cones)?, conv(corners)?, e)?)
}

/// Ways of reading a list of invariants as `(2,2,b)`: the order `b` of the
/// distinguished point and the sorted numerators of the two order-2 points.
/// Two order-2 points alone count as `b = 1`.
fn slots(list: &[LocalInvariant]) -> Vec<(i128, [u64; 2])> {
    let mut out = Vec::new();
    match list.len() {
        3 => {
            for i in 0..3 {
                let rest: Vec<&LocalInvariant> = (0..3).filter(|&j| j != i).map(|j| &list[j]).collect();
                if rest.iter().all(|x| x.b() == 2) {
                    let mut a = [rest[0].a(), rest[1].a()];
                    a.sort_unstable();
                    out.push((list[i].b() as i128, a));
                }
            }
        }
        2 if list.iter().all(|x| x.b() == 2) => {
            let mut a = [list[0].a(), list[1].a()];
            a.sort_unstable();
            out.push((1, a));
        }
        _ => {}
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Order of the single point in a list of length at most one (1 if empty).
fn single(list: &[LocalInvariant]) -> Option<i128> {
    match list {
        [] => Some(1),
        [x] => Some(x.b() as i128),
        _ => None,
    }
}

fn sporadic_pair(r: Relation) -> Result<(FiberedOrbifold, FiberedOrbifold), ClassifyError> {
    use Surface::{Disk as D, Sphere as S};
    Ok(match r {
        Relation::Tetrahedral => (
            build(S, vec![(0, 2), (2, 3), (2, 3)], vec![], rat(-1, 3))?,
            build(D, vec![(1, 3)], vec![(1, 2)], rat(-1, 12))?,
        ),
        Relation::Octahedral => (
            build(S, vec![(0, 2), (2, 3), (2, 4)], vec![], rat(-1, 6))?,
            build(D, vec![], vec![(1, 2), (1, 3), (1, 4)], rat(-1, 24))?,
        ),
        Relation::OctahedralTwisted => (
            build(S, vec![(0, 2), (1, 3), (3, 4)], vec![], rat(-1, 12))?,
            build(D, vec![], vec![(1, 2), (1, 3), (1, 3)], rat(-1, 12))?,
        ),
        Relation::Icosahedral => (
            build(S, vec![(0, 2), (2, 3), (2, 5)], vec![], rat(-1, 15))?,
            build(D, vec![], vec![(1, 2), (1, 3), (1, 5)], rat(-1, 60))?,
        ),
        _ => unreachable!("not a sporadic relation"),
    })
}

impl Relation {
    pub const ALL: [Relation; 11] = [
        Relation::DiskPartner,
        Relation::ProjectivePartner,
        Relation::TwistedDisk,
        Relation::Mirror,
        Relation::MirrorCone,
        Relation::MirrorMixed,
        Relation::ConeCorner,
        Relation::Tetrahedral,
        Relation::Octahedral,
        Relation::OctahedralTwisted,
        Relation::Icosahedral,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Relation::DiskPartner => "disk-partner",
            Relation::ProjectivePartner => "projective-partner",
            Relation::TwistedDisk => "twisted-disk",
            Relation::Mirror => "mirror",
            Relation::MirrorCone => "mirror-cone",
            Relation::MirrorMixed => "mirror-mixed",
            Relation::ConeCorner => "cone-corner",
            Relation::Tetrahedral => "sporadic-233",
            Relation::Octahedral => "sporadic-234",
            Relation::OctahedralTwisted => "sporadic-234-233",
            Relation::Icosahedral => "sporadic-235",
        }
    }

    /// Relations whose two sides have the same shape; the backward map is
    /// the forward map.
    pub fn is_self_inverse(self) -> bool {
        matches!(self, Relation::Mirror | Relation::MirrorMixed | Relation::ConeCorner)
    }

    /// Left side to right side. `f` must be normalized.
    pub fn forward(self, f: &FiberedOrbifold) -> Result<Vec<FiberedOrbifold>, ClassifyError> {
        use Surface::{Disk as D, ProjectivePlane as P, Sphere as S};
        let e = f.euler();
        if e.is_zero() {
            return Ok(vec![]);
        }
        let mut out = Vec::new();
        match self {
            Relation::DiskPartner | Relation::ProjectivePartner | Relation::TwistedDisk => {
                if f.surface() != S || !f.corner_invariants().is_empty() {
                    return Ok(out);
                }
                for (b, a) in slots(f.cone_invariants()) {
                    match (self, a) {
                        (Relation::DiskPartner, [0, 0]) | (Relation::ProjectivePartner, [1, 1]) => {
                            let c = big_int(&(e * Rational::from_integer(b.into())))?.ok_or(ClassifyError::Overflow)?;
                            let surface = if a == [0, 0] { D } else { P };
                            out.push(build(surface, vec![(mul(b, sgn(c))?, c.abs())], vec![], ratio(-b, c)?)?);
                        }
                        (Relation::TwistedDisk, [0, 1]) => {
                            let a = big_int(&(e * Rational::from_integer((2 * b).into())))?
                                .ok_or(ClassifyError::Overflow)?;
                            let h = (a + b) / 2;
                            out.push(build(D, vec![(mul(h, sgn(a))?, a.abs())], vec![], ratio(-b, mul(2, a)?)?)?);
                        }
                        _ => {}
                    }
                }
            }
            Relation::Mirror | Relation::MirrorCone | Relation::MirrorMixed => {
                if f.surface() != D || !f.cone_invariants().is_empty() {
                    return Ok(out);
                }
                for (b, a) in slots(f.corner_invariants()) {
                    match (self, a) {
                        (Relation::Mirror, [0, 0]) | (Relation::MirrorCone, [1, 1]) => {
                            let c = big_int(&(e * Rational::from_integer((2 * b).into())))?
                                .ok_or(ClassifyError::Overflow)?;
                            let corner = (mul(b, sgn(c))?, c.abs());
                            let e2 = ratio(-b, mul(2, c)?)?;
                            out.push(if a == [0, 0] {
                                build(D, vec![], vec![(0, 2), (0, 2), corner], e2)?
                            } else {
                                build(D, vec![(0, 2)], vec![corner], e2)?
                            });
                        }
                        (Relation::MirrorMixed, [0, 1]) => {
                            let a = big_int(&(e * Rational::from_integer((4 * b).into())))?
                                .ok_or(ClassifyError::Overflow)?;
                            let h = (a + b) / 2;
                            let corner = (mul(h, sgn(a))?, a.abs());
                            out.push(build(D, vec![], vec![(0, 2), (1, 2), corner], ratio(-b, mul(4, a)?)?)?);
                        }
                        _ => {}
                    }
                }
            }
            Relation::ConeCorner => {
                let cone_is_half = matches!(f.cone_invariants(), [x] if x.b() == 2 && x.a() == 1);
                if f.surface() != D || !cone_is_half {
                    return Ok(out);
                }
                if let Some(b) = single(f.corner_invariants()) {
                    let a = big_int(&(e * Rational::from_integer((2 * b).into())))?.ok_or(ClassifyError::Overflow)?;
                    out.push(build(D, vec![(1, 2)], vec![(mul(b, sgn(a))?, a.abs())], ratio(-b, mul(2, a)?)?)?);
                }
            }
            _ => {
                let (l, r) = sporadic_pair(self)?;
                if *f == l {
                    out.push(r);
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Right side to left side. Candidates are reconstructed from the
    /// numerical data and kept only if the forward map sends them back.
    pub fn backward(self, f: &FiberedOrbifold) -> Result<Vec<FiberedOrbifold>, ClassifyError> {
        use Surface::{Disk as D, ProjectivePlane as P, Sphere as S};
        if self.is_self_inverse() {
            return self.forward(f);
        }
        let e = f.euler();
        if e.is_zero() {
            return Ok(vec![]);
        }
        let s = if e.is_negative() { -1 } else { 1 };
        let mut cands = Vec::new();
        match self {
            Relation::DiskPartner | Relation::ProjectivePartner | Relation::TwistedDisk => {
                let want = if self == Relation::ProjectivePartner { P } else { D };
                if f.surface() != want || !f.corner_invariants().is_empty() {
                    return Ok(vec![]);
                }
                let Some(k) = single(f.cone_invariants()) else { return Ok(vec![]) };
                if self == Relation::TwistedDisk {
                    let a = -s * k;
                    if let Some(b) = big_int(&(-e * Rational::from_integer((2 * a).into())))? {
                        if b >= 1 && (a + b) % 2 == 0 {
                            cands.push(build(S, vec![(0, 2), (1, 2), (-(a + b) / 2, b)], vec![], ratio(a, mul(2, b)?)?)?);
                        }
                    }
                } else {
                    let c = -s * k;
                    if let Some(b) = big_int(&(-e * Rational::from_integer(c.into())))? {
                        if b >= 1 {
                            let h = if want == D { 0 } else { 1 };
                            cands.push(build(S, vec![(h, 2), (h, 2), (-c, b)], vec![], ratio(c, b)?)?);
                        }
                    }
                }
            }
            Relation::MirrorCone => {
                if f.surface() != D || !matches!(f.cone_invariants(), [x] if x.b() == 2) {
                    return Ok(vec![]);
                }
                let Some(k) = single(f.corner_invariants()) else { return Ok(vec![]) };
                let c = -s * k;
                if let Some(b) = big_int(&(-e * Rational::from_integer((2 * c).into())))? {
                    if b >= 1 {
                        cands.push(build(D, vec![], vec![(1, 2), (1, 2), (-c, b)], ratio(c, mul(2, b)?)?)?);
                    }
                }
            }
            _ => {
                let (l, r) = sporadic_pair(self)?;
                if *f == r {
                    cands.push(l);
                }
            }
        }
        let mut out = Vec::new();
        for c in cands {
            if self.forward(&c)?.contains(f) {
                out.push(c);
            }
        }
        Ok(out)
    }
}

/// All single-relation rewrites of a normalized fibration, in both
/// directions and both orientations.
pub fn rewrites(f: &FiberedOrbifold) -> Result<Vec<Rewrite>, ClassifyError> {
    let rev = f.reverse_orientation();
    let mut out = Vec::new();
    for relation in Relation::ALL {
        for direction in [Direction::Forward, Direction::Backward] {
            if direction == Direction::Backward && relation.is_self_inverse() {
                continue;
            }
            for reversed in [false, true] {
                let input = if reversed { &rev } else { f };
                let targets = match direction {
                    Direction::Forward => relation.forward(input)?,
                    Direction::Backward => relation.backward(input)?,
                };
                for t in targets {
                    let target = if reversed { t.reverse_orientation() } else { t };
                    out.push(Rewrite { relation, direction, reversed, target });
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bridge {
    /// `(S²(2,2,b); 0/2,0/2,1/b; −1/b) ≅ (D²(;b,b); 1/b,1/b; −1/b; 0)`
    PrismDisk,
    /// b odd: `(S²(2,2,b); 0/2,1/2,((1+b)/2)/b; −1/2b) ≅ (D²(;b,b); ((1+b)/2)/b ×2; −1/2b; 1)`
    PrismDiskTwisted,
    /// b even: `(D²(b;); 1/b; ; −1/b; 0) ≅ (S²(b,b); 2/b,2/b; −4/b)`
    ConeEven,
    /// b odd: `(D²(b;); 1/b; ; −1/b; 0) ≅ (S²(2b,2b); (1+b)/2b ×2; −1/b)`
    ConeOdd,
    /// b odd: `(RP²(b); 1/b; −1/b) ≅ (S²(b,b); 2/b,2/b; −4/b)`
    ProjectiveOdd,
    /// b even: `(RP²(b); 1/b; −1/b) ≅ (S²(2b,2b); (1+b)/2b ×2; −1/b)`
    ProjectiveEven,
    /// b odd: `(D²(b;); ((1+b)/2)/b; ; −1/2b; 1) ≅ (S²(2b,2b); ((1+b)/2)/2b, ((1+3b)/2)/2b; −1/2b)`
    ConeTwisted,
    /// b odd: `(D²(;2,2,b); 0/2,0/2,1/b; −1/2b) ≅ (D²(;2b,2b); (b+1)/2b ×2; −1/2b)`
    MirrorDouble,
    /// b odd: `(D²(;2,2,b); 0/2,1/2,((b+1)/2)/b; −1/4b) ≅ (D²(;2b,2b); ((3b+1)/2)/2b, ((b+1)/2)/2b; −1/4b)`
    MirrorDoubleTwisted,
    /// b even: `(D²(2;b); 0/2; 1/b; −1/2b) ≅ (D²(;2b,2b); (1+b)/2b ×2; −1/2b)`
    ConeCornerDouble,
    /// `(S²(2,2); 0/2,0/2; −1) ≅ (D²; ; ; −1; 0)`
    HopfLink,
    /// `(S²(2,2); 0/2,1/2; −1/2) ≅ (D²; ; ; −1/2; 1)`
    Unknot,
}

fn bridge_pair(kind: Bridge, b: i128, t: i128) -> Result<Option<(FiberedOrbifold, FiberedOrbifold)>, ClassifyError> {
    use Surface::{Disk as D, ProjectivePlane as P, Sphere as S};
    let odd = b % 2 == 1;
    let h = (1 + b) / 2;
    let pair = match kind {
        Bridge::PrismDisk => Some((
            build(S, vec![(0, 2), (0, 2), (t, b)], vec![], ratio(-t, b)?)?,
            build(D, vec![], vec![(t, b), (t, b)], ratio(-t, b)?)?,
        )),
        Bridge::PrismDiskTwisted if odd => Some((
            build(S, vec![(0, 2), (1, 2), (t * h, b)], vec![], ratio(-t, 2 * b)?)?,
            build(D, vec![], vec![(t * h, b), (t * h, b)], ratio(-t, 2 * b)?)?,
        )),
        Bridge::ConeEven if !odd => Some((
            build(D, vec![(t, b)], vec![], ratio(-t, b)?)?,
            build(S, vec![(2 * t, b), (2 * t, b)], vec![], ratio(-4 * t, b)?)?,
        )),
        Bridge::ConeOdd if odd => Some((
            build(D, vec![(t, b)], vec![], ratio(-t, b)?)?,
            build(S, vec![(t * (1 + b), 2 * b), (t * (1 + b), 2 * b)], vec![], ratio(-t, b)?)?,
        )),
        Bridge::ProjectiveOdd if odd => Some((
            build(P, vec![(t, b)], vec![], ratio(-t, b)?)?,
            build(S, vec![(2 * t, b), (2 * t, b)], vec![], ratio(-4 * t, b)?)?,
        )),
        Bridge::ProjectiveEven if !odd => Some((
            build(P, vec![(t, b)], vec![], ratio(-t, b)?)?,
            build(S, vec![(t * (1 + b), 2 * b), (t * (1 + b), 2 * b)], vec![], ratio(-t, b)?)?,
        )),
        Bridge::ConeTwisted if odd => Some((
            build(D, vec![(t * h, b)], vec![], ratio(-t, 2 * b)?)?,
            build(S, vec![(t * h, 2 * b), (t * (1 + 3 * b) / 2, 2 * b)], vec![], ratio(-t, 2 * b)?)?,
        )),
        Bridge::MirrorDouble if odd => Some((
            build(D, vec![], vec![(0, 2), (0, 2), (t, b)], ratio(-t, 2 * b)?)?,
            build(D, vec![], vec![(t * (b + 1), 2 * b), (t * (b + 1), 2 * b)], ratio(-t, 2 * b)?)?,
        )),
        Bridge::MirrorDoubleTwisted if odd => Some((
            build(D, vec![], vec![(0, 2), (1, 2), (t * h, b)], ratio(-t, 4 * b)?)?,
            build(D, vec![], vec![(t * (3 * b + 1) / 2, 2 * b), (t * h, 2 * b)], ratio(-t, 4 * b)?)?,
        )),
        Bridge::ConeCornerDouble if !odd => Some((
            build(D, vec![(0, 2)], vec![(t, b)], ratio(-t, 2 * b)?)?,
            build(D, vec![], vec![(t * (1 + b), 2 * b), (t * (1 + b), 2 * b)], ratio(-t, 2 * b)?)?,
        )),
        Bridge::HopfLink => Some((
            build(S, vec![(0, 2), (0, 2)], vec![], ratio(-t, 1)?)?,
            build(D, vec![], vec![], ratio(-t, 1)?)?,
        )),
        Bridge::Unknot => Some((
            build(S, vec![(0, 2), (1, 2)], vec![], ratio(-t, 2)?)?,
            build(D, vec![], vec![], ratio(-t, 2)?)?,
        )),
        _ => None,
    };
    Ok(pair)
}

const BRIDGES: [Bridge; 12] = [
    Bridge::PrismDisk,
    Bridge::PrismDiskTwisted,
    Bridge::ConeEven,
    Bridge::ConeOdd,
    Bridge::ProjectiveOdd,
    Bridge::ProjectiveEven,
    Bridge::ConeTwisted,
    Bridge::MirrorDouble,
    Bridge::MirrorDoubleTwisted,
    Bridge::ConeCornerDouble,
    Bridge::HopfLink,
    Bridge::Unknot,
];

/// Result of the rewrite closure of one fibration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    /// Every fibration reached, including the start.
    pub members: BTreeSet<FiberedOrbifold>,
    /// Members over `S²(≤2 cones)` or `D²(≤2 corners)`.
    pub representatives: BTreeSet<FiberedOrbifold>,
}

/// Tunable limits of the decision procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Engine {
    /// Largest `b` for which a bridge pattern is tried.
    pub max_bridge_b: u64,
    /// Largest closure explored before giving up.
    pub closure_limit: usize,
}

impl Default for Engine {
    fn default() -> Self {
        Engine { max_bridge_b: 10_000, closure_limit: 32 }
    }
}

fn is_representative(f: &FiberedOrbifold) -> bool {
    f.base().is_sphere_class() || f.base().is_disk_class()
}

fn prepare(f: &FiberedOrbifold) -> Result<FiberedOrbifold, ClassifyError> {
    let f = f.normalize();
    f.validate()?;
    f.require_spherical()?;
    Ok(f)
}

impl Engine {
    /// Bridges from an exceptional fibration to a sphere-side or disk-side
    /// representative of the same orbifold.
    pub fn bridges(&self, f: &FiberedOrbifold) -> Result<Vec<(Bridge, FiberedOrbifold)>, ClassifyError> {
        let f = f.normalize();
        let mut bs: BTreeSet<i128> = BTreeSet::new();
        for l in f.base().cones().iter().chain(f.base().corners()) {
            if *l >= 2 && *l <= self.max_bridge_b {
                bs.insert(*l as i128);
            }
        }
        let mut out = Vec::new();
        for kind in BRIDGES {
            let both_ways = matches!(kind, Bridge::HopfLink | Bridge::Unknot);
            let candidates: Vec<i128> = if both_ways { vec![1] } else { bs.iter().copied().collect() };
            for b in candidates {
                for t in [1, -1] {
                    if let Some((l, r)) = bridge_pair(kind, b, t)? {
                        if f == l {
                            out.push((kind, r));
                        } else if both_ways && f == r {
                            out.push((kind, l));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn enumerate_bridges(&self, f: &FiberedOrbifold) -> Result<Option<FiberedOrbifold>, ClassifyError> {
        Ok(self.bridges(f)?.into_iter().next().map(|(_, g)| g))
    }

    /// Breadth-first closure under rewrites and bridges. Representatives
    /// other than the start are recorded but not expanded.
    pub fn closure(&self, f: &FiberedOrbifold) -> Result<Closure, ClassifyError> {
        let start = prepare(f)?;
        let mut members = BTreeSet::from([start.clone()]);
        let mut representatives = BTreeSet::new();
        let mut queue = VecDeque::from([start.clone()]);
        while let Some(g) = queue.pop_front() {
            if is_representative(&g) {
                representatives.insert(g.clone());
                if g != start {
                    continue;
                }
            }
            let next = rewrites(&g)?
                .into_iter()
                .map(|r| r.target)
                .chain(self.bridges(&g)?.into_iter().map(|(_, h)| h));
            for h in next {
                if members.insert(h.clone()) {
                    if members.len() > self.closure_limit {
                        return Err(ClassifyError::ClosureLimit(self.closure_limit));
                    }
                    queue.push_back(h);
                }
            }
        }
        Ok(Closure { members, representatives })
    }

    pub fn fibration_class(&self, f: &FiberedOrbifold) -> Result<FibrationClass, ClassifyError> {
        let c = self.closure(f)?;
        Ok(match c.representatives.first() {
            None => FibrationClass::Finite,
            Some(r) if r.surface() == Surface::Sphere => FibrationClass::InfiniteSphereSide,
            Some(_) => FibrationClass::InfiniteDiskSide,
        })
    }

    /// The complete list of inequivalent fibrations, sorted.
    pub fn enumerate_fibrations(&self, f: &FiberedOrbifold) -> Result<Vec<FiberedOrbifold>, ClassifyError> {
        let c = self.closure(f)?;
        if !c.representatives.is_empty() {
            return Err(ClassifyError::InfiniteClass);
        }
        Ok(c.members.into_iter().collect())
    }

    pub fn fibration_count(&self, f: &FiberedOrbifold) -> Result<FibrationCount, ClassifyError> {
        let c = self.closure(f)?;
        if !c.representatives.is_empty() {
            return Ok(FibrationCount::Infinite);
        }
        Ok(match c.members.len() {
            1 => FibrationCount::One,
            2 => FibrationCount::Two,
            3 => FibrationCount::Three,
            n => return Err(ClassifyError::UnexpectedCount(n)),
        })
    }

    pub fn diffeo_key(&self, f: &FiberedOrbifold) -> Result<DiffeoKey, ClassifyError> {
        let c = self.closure(f)?;
        let rep = c.representatives.first().ok_or(ClassifyError::FiniteClass)?;
        key_of_representative(rep)
    }

    pub fn are_diffeomorphic(&self, f: &FiberedOrbifold, g: &FiberedOrbifold) -> Result<bool, ClassifyError> {
        let (cf, cg) = (self.closure(f)?, self.closure(g)?);
        let g = prepare(g)?;
        match (cf.representatives.first(), cg.representatives.first()) {
            (None, None) => Ok(cf.members.contains(&g)),
            (Some(rf), Some(rg)) => Ok(key_of_representative(rf)?.equivalent(&key_of_representative(rg)?)),
            _ => Ok(false),
        }
    }
}

/// Doubles a disk base along its mirror boundary.
pub fn double_cover(f: &FiberedOrbifold) -> Result<FiberedOrbifold, ClassifyError> {
    if f.surface() != Surface::Disk || !f.cone_invariants().is_empty() {
        return Err(ClassifyError::NotDoubleable);
    }
    let e = f.euler() * rat(2, 1);
    let g = FiberedOrbifold::new(Surface::Sphere, f.corner_invariants().to_vec(), vec![], e, None)?.normalize();
    g.validate()?;
    Ok(g)
}

/// Key of a sphere-class or disk-class fibration.
pub fn key_of_representative(rep: &FiberedOrbifold) -> Result<DiffeoKey, ClassifyError> {
    let (class, sphere) = match rep.surface() {
        Surface::Disk => (KeyClass::DiskClass, double_cover(rep)?),
        _ => (KeyClass::SphereClass, rep.clone()),
    };
    let (c, i1, i2) = lens::classical_from_fibration(&sphere)?;
    let raw = lens::lens_from_classical(&c)?;
    let mode = if i1 == i2 { EquivalenceMode::Oriented } else { EquivalenceMode::FixedCores };
    let lens = match mode {
        EquivalenceMode::Oriented => raw.oriented_canonical(),
        EquivalenceMode::FixedCores => raw,
    };
    let is = |p: i64, q: i64| lens.p() == &p.into() && lens.q() == &q.into();
    let cross = match (class, (i1, i2)) {
        (KeyClass::SphereClass, (2, 2)) if is(1, 0) => Some(CrossClass::HopfLink),
        (KeyClass::SphereClass, (2, 1)) if is(1, 0) => Some(CrossClass::Unknot),
        (KeyClass::DiskClass, (1, 1)) if is(2, 1) => Some(CrossClass::HopfLink),
        (KeyClass::DiskClass, (1, 1)) if is(1, 0) => Some(CrossClass::Unknot),
        _ => None,
    };
    Ok(DiffeoKey { class, lens, iota: (i1, i2), mode, cross })
}

pub fn fibration_class(f: &FiberedOrbifold) -> Result<FibrationClass, ClassifyError> {
    Engine::default().fibration_class(f)
}

pub fn enumerate_fibrations(f: &FiberedOrbifold) -> Result<Vec<FiberedOrbifold>, ClassifyError> {
    Engine::default().enumerate_fibrations(f)
}

pub fn enumerate_bridges(f: &FiberedOrbifold) -> Result<Option<FiberedOrbifold>, ClassifyError> {
    Engine::default().enumerate_bridges(f)
}

pub fn fibration_count(f: &FiberedOrbifold) -> Result<FibrationCount, ClassifyError> {
    Engine::default().fibration_count(f)
}

pub fn diffeo_key(f: &FiberedOrbifold) -> Result<DiffeoKey, ClassifyError> {
    Engine::default().diffeo_key(f)
}

pub fn are_diffeomorphic(f: &FiberedOrbifold, g: &FiberedOrbifold) -> Result<bool, ClassifyError> {
    Engine::default().are_diffeomorphic(f, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> FiberedOrbifold {
        s.parse::<FiberedOrbifold>().unwrap().normalize()
    }

    fn set(v: &[&str]) -> Vec<FiberedOrbifold> {
        let mut out: Vec<FiberedOrbifold> = v.iter().map(|s| p(s)).collect();
        out.sort();
        out
    }

    #[test]
    fn class_examples() {
        assert_eq!(fibration_class(&p("S2(2,2); 0/2,0/2; ; -1")), Ok(FibrationClass::InfiniteSphereSide));
        assert_eq!(fibration_class(&p("S2(2,2,3); 0/2,0/2,1/3; ; -1/3")), Ok(FibrationClass::InfiniteDiskSide));
        assert_eq!(fibration_class(&p("S2(2,3,5); 1/2,1/3,1/5; ; -1/30")), Ok(FibrationClass::Finite));
        assert!(fibration_class(&p("S2(2,3,7); 1/2,1/3,1/7; ; -41/42")).is_err());
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(
            enumerate_fibrations(&p("S2(2,2,3); 1/2,1/2,1/3; ; 2/3")).unwrap(),
            set(&["S2(2,2,3); 1/2,1/2,1/3; ; 2/3", "RP2(2); 1/2; -3/2"])
        );
        assert_eq!(
            enumerate_fibrations(&p("S2(2,2,4); 0/2,0/2,2/4; ; -1/2")).unwrap(),
            set(&["S2(2,2,4); 0/2,0/2,2/4; ; -1/2", "D2(2;); 0/2; ; 2; 0", "D2(;2,2,4); ; 1/2,1/2,1/4; -1/8; 1"])
        );
        assert_eq!(
            enumerate_fibrations(&p("S2(2,3,5); 1/2,1/3,1/5; ; -1/30")).unwrap(),
            set(&["S2(2,3,5); 1/2,1/3,1/5; ; -1/30"])
        );
        assert_eq!(
            enumerate_fibrations(&p("S2(2,3,3); 0/2,2/3,2/3; ; -1/3")).unwrap(),
            set(&["S2(2,3,3); 0/2,2/3,2/3; ; -1/3", "D2(3;2); 1/3; 1/2; -1/12; 1"])
        );
        assert_eq!(enumerate_fibrations(&p("S2(2,2); 0/2,0/2; ; -1")), Err(ClassifyError::InfiniteClass));
    }

    #[test]
    fn bridge_examples() {
        assert_eq!(
            enumerate_bridges(&p("S2(2,2,3); 0/2,0/2,1/3; ; -1/3")).unwrap(),
            Some(p("D2(;3,3); ; 1/3,1/3; -1/3; 0"))
        );
        assert_eq!(enumerate_bridges(&p("D2; ; ; -1; 0")).unwrap(), Some(p("S2(2,2); 0/2,0/2; ; -1")));
        assert_eq!(enumerate_bridges(&p("S2(2,3,5); 1/2,1/3,1/5; ; -1/30")).unwrap(), None);
    }

    #[test]
    fn double_cover_examples() {
        assert_eq!(double_cover(&p("D2(;3,3); ; 1/3,1/3; -1/3; 0")).unwrap(), p("S2(3,3); 1/3,1/3; ; -2/3"));
        assert_eq!(double_cover(&p("D2; ; ; -1; 0")).unwrap(), p("S2; ; ; -2"));
        assert_eq!(double_cover(&p("D2(;2,2); ; 0/2,0/2; -1; 0")).unwrap(), p("S2(2,2); 0/2,0/2; ; -2"));
        assert_eq!(double_cover(&p("D2(2;); 1/2; ; -1/2")), Err(ClassifyError::NotDoubleable));
    }

    #[test]
    fn key_examples() {
        let k = diffeo_key(&p("S2(2,2); 0/2,0/2; ; -1")).unwrap();
        assert_eq!(k.to_string(), "sphere L(1,0) iota=(2,2) oriented [hopf-link]");
        // double (S2(3,3); 1/3,1/3; -2/3): classical (1/3, 1/3), p = -6
        let k = diffeo_key(&p("D2(;3,3); ; 1/3,1/3; -1/3; 0")).unwrap();
        assert_eq!(k.to_string(), "disk L(6,1) iota=(1,1) oriented");
        let k = diffeo_key(&p("S2(4,4); 2/4,2/4; ; -1")).unwrap();
        assert_eq!(k.to_string(), "sphere L(4,1) iota=(2,2) oriented");
        let k = diffeo_key(&p("S2(4,2); 2/4,1/2; ; -1")).unwrap();
        assert_eq!((k.iota, k.mode), ((2, 1), EquivalenceMode::FixedCores));
        assert_eq!(diffeo_key(&p("S2(2,3,5); 1/2,1/3,1/5; ; -1/30")), Err(ClassifyError::FiniteClass));
    }

    #[test]
    fn diffeo_examples() {
        let t = |a: &str, b: &str| are_diffeomorphic(&p(a), &p(b)).unwrap();
        assert!(t("S2(2,2); 0/2,0/2; ; -1", "D2; ; ; -1; 0"));
        assert!(t("S2(2,2); 0/2,1/2; ; 1/2", "D2; ; ; 1/2; 1"));
        assert!(!t("S2(2,2); 0/2,0/2; ; -1", "D2; ; ; -1/2; 1"));
        assert!(t("S2(2,2,3); 0/2,0/2,1/3; ; -1/3", "D2(;3,3); ; 1/3,1/3; -1/3; 0"));
        assert!(!t("S2(2,3,5); 1/2,1/3,1/5; ; -1/30", "S2(2,3,5); 1/2,1/3,1/5; ; -31/30"));
        assert!(t("S2(2,3,5); 1/2,1/3,1/5; ; -1/30", "S2(2,3,5); 1/2,1/3,1/5; ; -1/30"));
        assert!(t("S2(5,5); 1/5,2/5; ; -3/5", "S2(5,5); 2/5,1/5; ; -3/5"));
        assert!(!t("S2(2,2,3); 0/2,0/2,1/3; ; -1/3", "S2(2,3,5); 1/2,1/3,1/5; ; -1/30"));
    }

    #[test]
    fn count_examples() {
        assert_eq!(fibration_count(&p("S2(2,2,4); 0/2,0/2,2/4; ; -1/2")), Ok(FibrationCount::Three));
        assert_eq!(fibration_count(&p("S2(2,3,4); 1/2,1/3,1/4; ; -1/12")), Ok(FibrationCount::One));
        assert_eq!(fibration_count(&p("RP2(3); 1/3; 2/3")), Ok(FibrationCount::Two));
    }

    #[test]
    fn backward_undoes_forward() {
        let f = p("S2(2,2,5); 0/2,1/2,2/5; ; -9/10");
        for r in Relation::ALL {
            for g in r.forward(&f).unwrap() {
                assert!(r.backward(&g).unwrap().contains(&f), "{r:?} {g}");
            }
        }
    }
}
