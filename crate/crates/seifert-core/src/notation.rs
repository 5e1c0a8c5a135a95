//! Text form of bases and fibrations, e.g. `(D2(2;3); 1/2; 1/3; -1/6; 0)`.
//!
//! A fibration is `base; cones; corners; e` with an optional trailing `; ξ`
//! on disk bases. Over S2 and RP2 the corner field may be left out. An
//! omitted ξ is solved from the Euler relation.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::orbifold::{solve_xi, FiberedOrbifold, LocalInvariant, Rational, Surface, TwoOrbifold};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at offset {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

fn perr(position: usize, message: impl Into<String>) -> ParseError {
    ParseError { position, message: message.into() }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Surface::Sphere => "S2",
            Surface::ProjectivePlane => "RP2",
            Surface::Disk => "D2",
        })
    }
}

impl fmt::Display for TwoOrbifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.surface())?;
        let (c, k) = (self.cones(), self.corners());
        match self.surface() {
            Surface::Disk if !c.is_empty() || !k.is_empty() => write!(f, "({};{})", join(c), join(k)),
            _ if !c.is_empty() => write!(f, "({})", join(c)),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for LocalInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a(), self.b())
    }
}

impl fmt::Display for FiberedOrbifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {}; ", self.base(), join(self.cone_invariants()))?;
        match self.xi() {
            Some(x) => write!(f, "{}; {}; {})", join(self.corner_invariants()), self.euler(), x),
            None => write!(f, "{})", self.euler()),
        }
    }
}

/// Byte-offset aware slice of the input.
#[derive(Clone, Copy)]
struct Span<'a> {
    text: &'a str,
    at: usize,
}

impl<'a> Span<'a> {
    fn trim(self) -> Self {
        let lead = self.text.len() - self.text.trim_start().len();
        Span { text: self.text.trim(), at: self.at + lead }
    }

    /// Splits on `sep` outside parentheses.
    fn split_top(self, sep: char) -> Result<Vec<Span<'a>>, ParseError> {
        let mut out = Vec::new();
        let (mut depth, mut start) = (0i32, 0usize);
        for (i, ch) in self.text.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth < 0 {
                        return Err(perr(self.at + i, "unbalanced `)`"));
                    }
                }
                c if c == sep && depth == 0 => {
                    out.push(Span { text: &self.text[start..i], at: self.at + start });
                    start = i + c.len_utf8();
                }
                _ => {}
            }
        }
        if depth != 0 {
            return Err(perr(self.at + self.text.len(), "unbalanced `(`"));
        }
        out.push(Span { text: &self.text[start..], at: self.at + start });
        Ok(out)
    }

    /// Removes one pair of parentheses enclosing the whole span.
    fn unwrap_parens(self) -> Self {
        let t = self.text;
        if !(t.starts_with('(') && t.ends_with(')')) {
            return self;
        }
        let mut depth = 0;
        for (i, ch) in t.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 && i + 1 < t.len() {
                        return self;
                    }
                }
                _ => {}
            }
        }
        Span { text: &t[1..t.len() - 1], at: self.at + 1 }.trim()
    }
}

fn clean(text: &str) -> String {
    text.replace('−', "-").replace('²', "2")
}

fn parse_int(s: Span) -> Result<BigInt, ParseError> {
    let s = s.trim();
    s.text.parse::<BigInt>().map_err(|_| perr(s.at, format!("expected an integer, found `{}`", s.text)))
}

fn parse_rational(s: Span) -> Result<Rational, ParseError> {
    let s = s.trim();
    match s.text.split_once('/') {
        Some((n, d)) => {
            let num = parse_int(Span { text: n, at: s.at })?;
            let den = parse_int(Span { text: d, at: s.at + n.len() + 1 })?;
            if den == BigInt::from(0) {
                return Err(perr(s.at, "zero denominator"));
            }
            Ok(Rational::new(num, den))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

fn parse_labels(s: Span) -> Result<Vec<u64>, ParseError> {
    let s = s.trim();
    if s.text.is_empty() {
        return Ok(vec![]);
    }
    s.split_top(',')?
        .into_iter()
        .map(|p| {
            let p = p.trim();
            match p.text.parse::<u64>() {
                Ok(v) if v >= 1 => Ok(v),
                _ => Err(perr(p.at, format!("expected a positive label, found `{}`", p.text))),
            }
        })
        .collect()
}

fn parse_invariants(s: Span) -> Result<Vec<LocalInvariant>, ParseError> {
    let s = s.trim();
    if s.text.is_empty() {
        return Ok(vec![]);
    }
    s.split_top(',')?
        .into_iter()
        .map(|p| {
            let p = p.trim();
            let (a, b) = p.text.split_once('/').ok_or_else(|| perr(p.at, "invariants are written a/b"))?;
            let a: i128 = a.trim().parse().map_err(|_| perr(p.at, format!("bad numerator in `{}`", p.text)))?;
            let b: u64 = match b.trim().parse() {
                Ok(b) if b >= 1 => b,
                _ => return Err(perr(p.at, format!("bad order in `{}`", p.text))),
            };
            LocalInvariant::new(a, b).map_err(|e| perr(p.at, e.to_string()))
        })
        .collect()
}

fn parse_base(s: Span) -> Result<TwoOrbifold, ParseError> {
    let s = s.trim();
    let (name, args) = match s.text.find('(') {
        Some(i) => {
            let inner = s.text[i + 1..]
                .strip_suffix(')')
                .ok_or_else(|| perr(s.at + s.text.len(), "expected `)` after labels"))?;
            (&s.text[..i], Some(Span { text: inner, at: s.at + i + 1 }))
        }
        None => (s.text, None),
    };
    let surface = match name.trim().to_ascii_uppercase().as_str() {
        "S2" => Surface::Sphere,
        "RP2" => Surface::ProjectivePlane,
        "D2" => Surface::Disk,
        other => return Err(perr(s.at, format!("unknown surface `{other}` (expected S2, RP2 or D2)"))),
    };
    let (cones, corners) = match args {
        None => (vec![], vec![]),
        Some(a) => {
            let parts = a.split_top(';')?;
            match parts.as_slice() {
                [c] => (parse_labels(*c)?, vec![]),
                [c, k] => (parse_labels(*c)?, parse_labels(*k)?),
                _ => return Err(perr(a.at, "at most one `;` inside the base")),
            }
        }
    };
    if !corners.is_empty() && surface != Surface::Disk {
        return Err(perr(s.at, "only D2 carries corner points"));
    }
    TwoOrbifold::new(surface, cones, corners).map_err(|e| perr(s.at, e.to_string()))
}

impl FromStr for TwoOrbifold {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let t = clean(text);
        parse_base(Span { text: &t, at: 0 })
    }
}

impl FromStr for FiberedOrbifold {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let t = clean(text);
        let whole = Span { text: &t, at: 0 }.trim().unwrap_parens();
        let fields = whole.split_top(';')?;
        let base = parse_base(fields[0])?;
        let disk = base.surface() == Surface::Disk;
        let (cones, corners, euler, xi) = match (disk, fields.len()) {
            (false, 3) => (fields[1], None, fields[2], None),
            (false, 4) => (fields[1], Some(fields[2]), fields[3], None),
            (true, 4) => (fields[1], Some(fields[2]), fields[3], None),
            (true, 5) => (fields[1], Some(fields[2]), fields[3], Some(fields[4])),
            (false, n) => {
                return Err(perr(whole.at, format!("expected `base; cones; corners; e`, found {n} fields")));
            }
            (true, n) => {
                return Err(perr(whole.at, format!("expected `base; cones; corners; e[; xi]`, found {n} fields")));
            }
        };
        let cones = parse_invariants(cones)?;
        let corners = match corners {
            Some(k) => {
                let parsed = parse_invariants(k)?;
                if !disk && !parsed.is_empty() {
                    return Err(perr(k.at, "only D2 carries corner invariants"));
                }
                parsed
            }
            None => vec![],
        };
        let e = parse_rational(euler)?;
        let xi = match xi {
            Some(x) => {
                let x = x.trim();
                match x.text {
                    "0" => Some(0),
                    "1" => Some(1),
                    _ => return Err(perr(x.at, format!("xi must be 0 or 1, found `{}`", x.text))),
                }
            }
            // unsolvable residues are left for validation to report
            None if disk => Some(solve_xi(&cones, &corners, &e).unwrap_or(0)),
            None => None,
        };
        FiberedOrbifold::from_parts(base, cones, corners, e, xi).map_err(|e| perr(fields[0].at, e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbifold::rat;
    use proptest::prelude::*;

    fn p(s: &str) -> FiberedOrbifold {
        s.parse().unwrap()
    }

    #[test]
    fn base_round_trip() {
        for s in ["S2", "S2(2,3,5)", "RP2(3)", "D2", "D2(3;)", "D2(;2,2,4)", "D2(2;3)"] {
            assert_eq!(s.parse::<TwoOrbifold>().unwrap().to_string(), s);
        }
        assert_eq!("S²(1,3,2)".parse::<TwoOrbifold>().unwrap().to_string(), "S2(2,3)");
        assert!("RP2(;2)".parse::<TwoOrbifold>().is_err());
        assert!("T2".parse::<TwoOrbifold>().is_err());
    }

    #[test]
    fn parse_examples() {
        let f = p("S2(2,2,3); 1/2,1/2,1/3; ; -4/3");
        assert_eq!(f.euler(), &rat(-4, 3));
        assert_eq!(f.normalize().to_string(), "(S2(2,2,3); 1/2,1/2,1/3; -4/3)");
        let g = p("D2(;2,2,4); ; 3/4,1/2,0/2; -1/8; 1");
        assert!(g.validate().is_ok());
        assert_eq!(g.normalize().to_string(), "(D2(;2,2,4); ; 0/2,1/2,3/4; -1/8; 1)");
        let h = p("D2; ; ; -1; 0");
        assert_eq!(h.to_string(), "(D2; ; ; -1; 0)");
        assert_eq!(p("(D2; ; ; −1)").xi(), Some(0));
        assert_eq!(p("D2(3;2); 1/3; 1/2; -1/12").xi(), Some(1));
        assert_eq!(p("S2; ; -1").to_string(), "(S2; ; -1)");
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = "S2(2,2,3); 1/2,1/2,x/3; ; -4/3".parse::<FiberedOrbifold>().unwrap_err();
        assert_eq!(e.position, 19);
        assert!("S2(2,3); 1/2; ; -1".parse::<FiberedOrbifold>().is_err());
        assert!("S2(2); 1/2; 1/2; -1".parse::<FiberedOrbifold>().is_err());
        assert!("S2; ; -1; 0".parse::<FiberedOrbifold>().is_err());
        assert!("D2; ; ; -1; 2".parse::<FiberedOrbifold>().is_err());
        assert!("D2; ; ; -1/0".parse::<FiberedOrbifold>().is_err());
        assert!("S2(2,3; 1/2; ; -1".parse::<FiberedOrbifold>().is_err());
    }

    fn any_fibration() -> impl Strategy<Value = FiberedOrbifold> {
        let inv = (2u64..9).prop_flat_map(|b| (0..b as i128, Just(b)));
        (
            prop_oneof![Just(Surface::Sphere), Just(Surface::ProjectivePlane), Just(Surface::Disk)],
            proptest::collection::vec(inv.clone(), 0..3),
            proptest::collection::vec(inv, 0..3),
            -30i128..30,
            1i128..25,
        )
            .prop_filter_map("valid", |(s, c, k, n, d)| {
                let c = c.into_iter().map(|(a, b)| LocalInvariant::new(a, b).unwrap()).collect();
                let k = if s == Surface::Disk {
                    k.into_iter().map(|(a, b)| LocalInvariant::new(a, b).unwrap()).collect()
                } else {
                    vec![]
                };
                FiberedOrbifold::solved(s, c, k, rat(n, d)).ok()
            })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(f in any_fibration()) {
            let back: FiberedOrbifold = f.to_string().parse().unwrap();
            prop_assert_eq!(back.normalize(), f);
        }
    }
}
