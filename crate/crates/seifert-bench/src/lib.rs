//! Inputs shared by the benchmarks.

use seifert_core::FiberedOrbifold;

/// Fibrations covering the finite, three-fibration and infinite cases.
pub fn sample_fibrations() -> Vec<FiberedOrbifold> {
    [
        "S2(2,3,5); 1/2,1/3,1/5; ; -1/30",
        "S2(2,2,4); 0/2,0/2,2/4; ; -1/2",
        "S2(2,2,9); 0/2,0/2,1/9; ; -1/9",
        "D2(;2,2,7); ; 1/2,1/2,3/7; -11/14; 0",
        "D2(3;2); 1/3; 1/2; -1/12; 1",
    ]
    .iter()
    .map(|s| s.parse::<FiberedOrbifold>().expect("sample parses").normalize())
    .collect()
}
