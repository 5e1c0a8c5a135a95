//! Du Val's families of finite subgroups of SO(4) and the Seifert invariants
//! of the quotients of the Hopf and anti-Hopf fibrations.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use thiserror::Error;

use crate::orbifold::{rat, FiberedOrbifold, LocalInvariant, OrbifoldError, Surface};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    F1,
    F1Prime,
    F2,
    F2Bis,
    F3,
    F3Bis,
    F4,
    F4Bis,
    F5,
    F6,
    F7,
    F8,
    F9,
    F10,
    F11,
    F11Prime,
    F12,
    /// Reserved: the left/right swap of family 12 is again family 12.
    F12Bis,
    F13,
    F13Bis,
    F14,
    F15,
    F16,
    F17,
    F18,
    F19,
    F20,
    F21,
    F21Prime,
    F22,
    F23,
    F24,
    F25,
    F26,
    F26Prime,
    F26DoublePrime,
    F27,
    F28,
    F29,
    F30,
    F31,
    F31Prime,
    F32,
    F32Prime,
    F33,
    F33Prime,
    F34,
    F34Bis,
}

use Family::*;

const NAMES: &[(Family, &str)] = &[
    (F1, "F1"),
    (F1Prime, "F1'"),
    (F2, "F2"),
    (F2Bis, "F2bis"),
    (F3, "F3"),
    (F3Bis, "F3bis"),
    (F4, "F4"),
    (F4Bis, "F4bis"),
    (F5, "F5"),
    (F6, "F6"),
    (F7, "F7"),
    (F8, "F8"),
    (F9, "F9"),
    (F10, "F10"),
    (F11, "F11"),
    (F11Prime, "F11'"),
    (F12, "F12"),
    (F12Bis, "F12bis"),
    (F13, "F13"),
    (F13Bis, "F13bis"),
    (F14, "F14"),
    (F15, "F15"),
    (F16, "F16"),
    (F17, "F17"),
    (F18, "F18"),
    (F19, "F19"),
    (F20, "F20"),
    (F21, "F21"),
    (F21Prime, "F21'"),
    (F22, "F22"),
    (F23, "F23"),
    (F24, "F24"),
    (F25, "F25"),
    (F26, "F26"),
    (F26Prime, "F26'"),
    (F26DoublePrime, "F26''"),
    (F27, "F27"),
    (F28, "F28"),
    (F29, "F29"),
    (F30, "F30"),
    (F31, "F31"),
    (F31Prime, "F31'"),
    (F32, "F32"),
    (F32Prime, "F32'"),
    (F33, "F33"),
    (F33Prime, "F33'"),
    (F34, "F34"),
    (F34Bis, "F34bis"),
];

impl Family {
    pub fn all() -> impl Iterator<Item = Family> {
        NAMES.iter().map(|&(f, _)| f)
    }

    pub fn name(self) -> &'static str {
        NAMES.iter().find(|(f, _)| *f == self).map(|(_, n)| *n).unwrap_or("?")
    }

    /// Parameter letters the family takes, in canonical order.
    pub fn params(self) -> &'static [char] {
        match self {
            F1 | F1Prime | F11 | F11Prime => &['m', 'n', 'r', 's'],
            F2 | F2Bis | F3 | F3Bis | F4 | F4Bis | F10 | F12 | F12Bis | F13 | F13Bis | F33 | F33Prime | F34
            | F34Bis => &['m', 'n'],
            F5 | F6 | F7 | F8 | F9 | F14 | F15 | F16 | F17 | F18 | F19 => &['m'],
            _ => &[],
        }
    }

    /// Rows with a tabulated Hopf quotient.
    pub fn has_hopf_row(self) -> bool {
        !matches!(self, F1 | F1Prime | F11 | F11Prime | F12Bis) && !self.is_exceptional()
    }

    /// Families 20 to 32′: both factors are T*, O* or I*.
    pub fn is_exceptional(self) -> bool {
        (F20..=F32Prime).contains(&self)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("cannot parse group `{0}`: {1}")]
    Parse(String, String),
    #[error("{family} needs parameter {param}")]
    MissingParam { family: Family, param: char },
    #[error("{family} does not take parameter {param}")]
    ExtraParam { family: Family, param: char },
    #[error("{family}: {reason}")]
    Constraint { family: Family, reason: String },
    #[error("quotient invariants of {0} are not tabulated in closed form")]
    NotImplemented(Family),
    #[error("{0} is not a separate conjugacy class; use F12")]
    Unsupported(Family),
    #[error("group order overflows")]
    Overflow,
    #[error(transparent)]
    Orbifold(#[from] OrbifoldError),
}

/// A family with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupSpec {
    pub family: Family,
    pub m: Option<u64>,
    pub n: Option<u64>,
    pub r: Option<u64>,
    pub s: Option<u64>,
}

impl GroupSpec {
    pub fn new(family: Family) -> Self {
        GroupSpec { family, m: None, n: None, r: None, s: None }
    }

    pub fn m(mut self, v: u64) -> Self {
        self.m = Some(v);
        self
    }

    pub fn n(mut self, v: u64) -> Self {
        self.n = Some(v);
        self
    }

    pub fn r(mut self, v: u64) -> Self {
        self.r = Some(v);
        self
    }

    pub fn s(mut self, v: u64) -> Self {
        self.s = Some(v);
        self
    }

    fn get(&self, c: char) -> Option<u64> {
        match c {
            'm' => self.m,
            'n' => self.n,
            'r' => self.r,
            's' => self.s,
            _ => None,
        }
    }

    fn need(&self, c: char) -> Result<u64, GroupError> {
        self.get(c).ok_or(GroupError::MissingParam { family: self.family, param: c })
    }

    fn shape(&self) -> Result<(), GroupError> {
        let wanted = self.family.params();
        for c in ['m', 'n', 'r', 's'] {
            match (self.get(c), wanted.contains(&c)) {
                (None, true) => return Err(GroupError::MissingParam { family: self.family, param: c }),
                (Some(_), false) => return Err(GroupError::ExtraParam { family: self.family, param: c }),
                (Some(0), true) => {
                    return Err(self.violation(format!("parameter {c} must be positive")));
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn violation(&self, reason: String) -> GroupError {
        GroupError::Constraint { family: self.family, reason }
    }

    /// Checks the listing constraints. `m = 1` is admitted for families 33
    /// and 33′, where it only occurs in the fibration-aware setting.
    pub fn check(&self) -> Result<(), GroupError> {
        self.shape()?;
        let odd = |c: char| self.get(c).map_or(true, |v| v % 2 == 1);
        match self.family {
            F1 | F11 => {
                if self.need('s')?.gcd(&self.need('r')?) != 1 {
                    return Err(self.violation("gcd(s,r) must be 1".into()));
                }
            }
            F1Prime | F11Prime => {
                if self.need('s')?.gcd(&self.need('r')?) != 1 {
                    return Err(self.violation("gcd(s,r) must be 1".into()));
                }
                if !odd('m') || !odd('n') || odd('r') {
                    return Err(self.violation("m and n must be odd and r even".into()));
                }
            }
            F33 | F33Prime => {
                if self.need('n')? == 1 {
                    return Err(self.violation("n must differ from 1".into()));
                }
                if self.family == F33Prime && (!odd('m') || !odd('n')) {
                    return Err(self.violation("m and n must be odd".into()));
                }
            }
            F34 | F34Bis => {
                if !odd('m') || !odd('n') {
                    return Err(self.violation("m and n must be odd".into()));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// True for the m = 1 members of families 33 and 33′.
    pub fn is_hopf_context_only(&self) -> bool {
        matches!(self.family, F33 | F33Prime) && self.m == Some(1)
    }

    /// The group obtained by exchanging the left and right factors.
    pub fn swap(&self) -> Option<GroupSpec> {
        let partner = match self.family {
            F2 => F2Bis,
            F2Bis => F2,
            F3 => F3Bis,
            F3Bis => F3,
            F4 => F4Bis,
            F4Bis => F4,
            F13 => F13Bis,
            F13Bis => F13,
            F34 => F34Bis,
            F34Bis => F34,
            F10 | F12 | F33 | F33Prime => self.family,
            _ => return None,
        };
        Some(GroupSpec { family: partner, m: self.n, n: self.m, r: None, s: None })
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        let parts: Vec<String> =
            ['m', 'n', 'r', 's'].iter().filter_map(|&c| self.get(c).map(|v| format!("{c}={v}"))).collect();
        if !parts.is_empty() {
            write!(f, "({})", parts.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |msg: &str| GroupError::Parse(text.to_string(), msg.to_string());
        let t = text.trim().replace('′', "'").replace('″', "''");
        let (head, args) = match t.find('(') {
            Some(i) => {
                let rest = t[i + 1..].trim_end();
                let inner = rest.strip_suffix(')').ok_or_else(|| err("missing `)`"))?;
                (t[..i].trim(), Some(inner))
            }
            None => (t.as_str(), None),
        };
        let lower = head.to_ascii_lowercase();
        let family = NAMES
            .iter()
            .map(|&(f, _)| f)
            .find(|f| f.name().to_ascii_lowercase() == lower)
            .ok_or_else(|| err("unknown family"))?;
        let mut g = GroupSpec::new(family);
        for part in args.into_iter().flat_map(|a| a.split(',')).map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| err("expected name=value"))?;
            let v: u64 = v.trim().parse().map_err(|_| err("parameter values must be non-negative integers"))?;
            let slot = match k.trim() {
                "m" => &mut g.m,
                "n" => &mut g.n,
                "r" => &mut g.r,
                "s" => &mut g.s,
                _ => return Err(err("unknown parameter")),
            };
            if slot.replace(v).is_some() {
                return Err(err("repeated parameter"));
            }
        }
        g.shape()?;
        Ok(g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Quotient {
    Fibration(FiberedOrbifold),
    NoInvariantFibration,
}

impl Quotient {
    pub fn fibration(&self) -> Option<&FiberedOrbifold> {
        match self {
            Quotient::Fibration(f) => Some(f),
            Quotient::NoInvariantFibration => None,
        }
    }
}

pub fn group_order(g: &GroupSpec) -> Result<u64, GroupError> {
    g.check()?;
    let p = |cs: &[char]| -> Result<u64, GroupError> {
        cs.iter().try_fold(1u64, |acc, &c| acc.checked_mul(g.need(c)?).ok_or(GroupError::Overflow))
    };
    let scaled = |k: u64, cs: &[char]| p(cs)?.checked_mul(k).ok_or(GroupError::Overflow);
    Ok(match g.family {
        F1 => scaled(2, &['m', 'n', 'r'])?,
        F1Prime => p(&['m', 'n', 'r'])? / 2,
        F2 | F2Bis | F3 | F3Bis => scaled(4, &['m', 'n'])?,
        F4 | F4Bis | F10 | F13 | F13Bis | F33 => scaled(8, &['m', 'n'])?,
        F5 | F6 => scaled(24, &['m'])?,
        F7 | F8 | F14 | F16 | F18 => scaled(48, &['m'])?,
        F9 => scaled(120, &['m'])?,
        F11 => scaled(4, &['m', 'n', 'r'])?,
        F11Prime => p(&['m', 'n', 'r'])?,
        F12 | F12Bis => scaled(16, &['m', 'n'])?,
        F15 | F17 => scaled(96, &['m'])?,
        F19 => scaled(240, &['m'])?,
        F20 => 288,
        F21 => 24,
        F21Prime => 12,
        F22 => 96,
        F23 => 576,
        F24 => 1440,
        F25 => 1152,
        F26 => 48,
        F26Prime | F26DoublePrime => 24,
        F27 => 192,
        F28 => 576,
        F29 => 2880,
        F30 => 7200,
        F31 | F32 => 120,
        F31Prime | F32Prime => 60,
        F33Prime => scaled(4, &['m', 'n'])?,
        F34 | F34Bis => scaled(2, &['m', 'n'])?,
    })
}

/// Seifert invariants of the fibration of `S³/G` induced by the Hopf
/// fibration.
pub fn quotient_hopf(g: &GroupSpec) -> Result<Quotient, GroupError> {
    g.check()?;
    hopf_row(g)
}

/// Seifert invariants induced by the anti-Hopf fibration: the Hopf quotient
/// of the left/right swapped group, with the orientation reversed.
pub fn quotient_antihopf(g: &GroupSpec) -> Result<Quotient, GroupError> {
    g.check()?;
    match g.family {
        F1 | F1Prime | F11 | F11Prime => return Err(GroupError::NotImplemented(g.family)),
        F12Bis => return Err(GroupError::Unsupported(F12Bis)),
        _ => {}
    }
    match g.swap() {
        // the swapped parameters need not satisfy the listing constraints
        Some(sw) => Ok(match hopf_row(&sw)? {
            Quotient::Fibration(f) => Quotient::Fibration(f.reverse_orientation()),
            q => q,
        }),
        None => Ok(Quotient::NoInvariantFibration),
    }
}

fn hopf_row(g: &GroupSpec) -> Result<Quotient, GroupError> {
    let m = g.m.unwrap_or(0) as i128;
    let n = g.n.unwrap_or(0) as i128;
    let lab = |v: i128| -> Result<u64, GroupError> { u64::try_from(v).map_err(|_| GroupError::Overflow) };
    let build = |surface: Surface, cones: &[(i128, i128)], corners: &[(i128, i128)], e: (i128, i128)| {
        let conv = |l: &[(i128, i128)]| -> Result<Vec<LocalInvariant>, GroupError> {
            l.iter().map(|&(a, b)| Ok(LocalInvariant::new(a, lab(b)?)?)).collect()
        };
        let f = FiberedOrbifold::solved(surface, conv(cones)?, conv(corners)?, rat(e.0, e.1))?;
        Ok::<_, GroupError>(Quotient::Fibration(f))
    };
    use Surface::{Disk as D, ProjectivePlane as P, Sphere as S};
    let even = |v: i128| v % 2 == 0;
    match g.family {
        F1 | F1Prime | F11 | F11Prime => Err(GroupError::NotImplemented(g.family)),
        F12Bis => Err(GroupError::Unsupported(F12Bis)),
        f if f.is_exceptional() => Ok(Quotient::NoInvariantFibration),
        F2 => build(S, &[(m, n), (m, 2), (m, 2)], &[], (-m, n)),
        F2Bis => build(if even(n) { D } else { P }, &[(m, n)], &[], (-m, n)),
        F3 => build(S, &[(m, n), (m + 1, 2), (m + 1, 2)], &[], (-m, n)),
        F3Bis => build(if even(n) { P } else { D }, &[(m, n)], &[], (-m, n)),
        F4 => build(S, &[(m + n, 2 * n), (m, 2), (m + 1, 2)], &[], (-m, 2 * n)),
        F4Bis => build(D, &[(m + n, 2 * n)], &[], (-m, 2 * n)),
        F5 => build(S, &[(m, 2), (m, 3), (m, 3)], &[], (-m, 6)),
        F6 => build(S, &[(m, 2), (m + 1, 3), (m + 2, 3)], &[], (-m, 6)),
        F7 => build(S, &[(m, 2), (m, 3), (m, 4)], &[], (-m, 12)),
        F8 => build(S, &[(m + 1, 2), (m, 3), (m + 2, 4)], &[], (-m, 12)),
        F9 => build(S, &[(m, 2), (m, 3), (m, 5)], &[], (-m, 30)),
        F10 if even(n) => build(D, &[], &[(m, n), (m, 2), (m, 2)], (-m, 2 * n)),
        F10 => build(D, &[(m, 2)], &[(m, n)], (-m, 2 * n)),
        F12 => build(D, &[], &[(m + n, 2 * n), (m, 2), (m + 1, 2)], (-m, 4 * n)),
        F13 if even(n) => build(D, &[], &[(m, n), (m + 1, 2), (m + 1, 2)], (-m, 2 * n)),
        F13 => build(D, &[(m + 1, 2)], &[(m, n)], (-m, 2 * n)),
        F13Bis if even(n) => build(D, &[(m, 2)], &[(m, n)], (-m, 2 * n)),
        F13Bis => build(D, &[], &[(m, n), (m, 2), (m, 2)], (-m, 2 * n)),
        F14 => build(D, &[(m, 3)], &[(m, 2)], (-m, 12)),
        F15 => build(D, &[], &[(m, 2), (m, 3), (m, 4)], (-m, 24)),
        F16 => build(D, &[], &[(m, 2), (m, 3), (m, 3)], (-m, 12)),
        F17 => build(D, &[], &[(m + 1, 2), (m, 3), (m + 2, 4)], (-m, 24)),
        F18 => build(D, &[], &[(m, 2), (m + 1, 3), (m + 2, 3)], (-m, 12)),
        F19 => build(D, &[], &[(m, 2), (m, 3), (m, 5)], (-m, 60)),
        F33 if even(n) => build(D, &[(m + 1, 2)], &[(m, n)], (-m, 2 * n)),
        F33 => build(D, &[], &[(m, n), (m + 1, 2), (m + 1, 2)], (-m, 2 * n)),
        F33Prime => build(D, &[], &[((m + n) / 2, n), (m, 2), (m + 1, 2)], (-m, 4 * n)),
        F34 => build(S, &[((m + n) / 2, n), (m, 2), (m + 1, 2)], &[], (-m, 2 * n)),
        F34Bis => build(D, &[((m + n) / 2, n)], &[], (-m, 2 * n)),
        _ => unreachable!("exceptional families handled above"),
    }
}

/// Every instance of a family with a Hopf row whose group order is at most
/// `max_order`, within the listing constraints.
pub fn instances(family: Family, max_order: u64) -> Vec<GroupSpec> {
    let mut out = Vec::new();
    let base = GroupSpec::new(family);
    let mut push = |g: GroupSpec| {
        if group_order(&g).is_ok_and(|o| o <= max_order) {
            out.push(g);
        }
    };
    match family.params() {
        [] => push(base),
        ['m'] => (1..=max_order).for_each(|m| push(base.m(m))),
        ['m', 'n'] => {
            for m in 1..=max_order {
                (1..=max_order / m).for_each(|n| push(base.m(m).n(n)));
            }
        }
        _ => {}
    }
    out
}
