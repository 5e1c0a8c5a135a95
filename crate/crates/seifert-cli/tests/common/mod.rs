#![allow(dead_code)]

use std::collections::BTreeSet;

use seifert_core::orbifold::rat;
use seifert_core::{FiberedOrbifold, LocalInvariant, Surface};

/// Normalized fibration from `(a, b)` pairs, with ξ solved.
pub fn fib(surface: Surface, cones: &[(i128, u64)], corners: &[(i128, u64)], e: (i128, i128)) -> FiberedOrbifold {
    let inv = |l: &[(i128, u64)]| -> Vec<LocalInvariant> {
        l.iter().map(|&(a, b)| LocalInvariant::new(a, b).expect("nonzero order")).collect()
    };
    FiberedOrbifold::solved(surface, inv(cones), inv(corners), rat(e.0, e.1))
        .unwrap_or_else(|err| panic!("bad fixture {surface:?} {cones:?} {corners:?} {e:?}: {err}"))
}

fn numerators(orders: &[u64]) -> Vec<Vec<i128>> {
    let mut out = vec![vec![]];
    for &b in orders {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..b as i128).map(move |a| {
                    let mut v = prefix.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

/// Every valid spherical fibration over the given base whose Euler number is
/// `k - (sum of cone values) - (sum of corner values)/2` with `|k| <= window`
/// (`k/2` in place of `k` on a disk, which sweeps both ξ).
pub fn sweep(surface: Surface, cones: &[u64], corners: &[u64], window: i128) -> Vec<FiberedOrbifold> {
    let mut out = BTreeSet::new();
    let step = if surface == Surface::Disk { 2 } else { 1 };
    for ca in numerators(cones) {
        for ka in numerators(corners) {
            let ci: Vec<LocalInvariant> = ca.iter().zip(cones).map(|(&a, &b)| LocalInvariant::new(a, b).unwrap()).collect();
            let ki: Vec<LocalInvariant> = ka.iter().zip(corners).map(|(&a, &b)| LocalInvariant::new(a, b).unwrap()).collect();
            let sum = ci.iter().map(|i| i.value()).fold(rat(0, 1), |x, y| x + y)
                + ki.iter().map(|i| i.value()).fold(rat(0, 1), |x, y| x + y) / rat(2, 1);
            for k in -window..=window {
                let e = rat(k, step) - sum.clone();
                if let Ok(f) = FiberedOrbifold::solved(surface, ci.clone(), ki.clone(), e) {
                    if f.is_spherical() {
                        out.insert(f);
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}
