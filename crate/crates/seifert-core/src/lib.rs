//! Seifert fibered spherical 3-orbifolds: exact invariants, quotient data of
//! the finite subgroups of SO(4) that preserve a Hopf fibration, lens space
//! recognition, and a decision procedure for orientation-preserving
//! diffeomorphism.
//!
//! ```
//! use seifert_core::{FiberedOrbifold, classifier};
//!
//! let f: FiberedOrbifold = "S2(2,2,4); 0/2,0/2,2/4; ; -1/2".parse().unwrap();
//! assert_eq!(classifier::fibration_count(&f).unwrap(), classifier::FibrationCount::Three);
//! ```

pub mod atlas;
pub mod classifier;
pub mod duval;
pub mod lens;
pub mod notation;
pub mod orbifold;

pub use classifier::{DiffeoKey, Engine, FibrationClass, FibrationCount};
pub use duval::{Family, GroupSpec, Quotient};
pub use lens::{ClassicalSeifert, EquivalenceMode, LensSpace};
pub use notation::ParseError;
pub use orbifold::{FiberedOrbifold, LocalInvariant, OrbifoldError, Rational, Surface, TwoOrbifold};
