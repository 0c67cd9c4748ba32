//! Exact geometry and dynamics of the square Sierpiński carpet `S_p`, its
//! double `D_p` on the pillow, and the Lattès map `T`.
//!
//! All arithmetic is exact over the rationals. Points live on the pillow
//! (two unit squares glued along their boundary); the carpet is tested by
//! base-`p` digit expansions and cross-checked against tile enumerations.

pub mod carpet;
pub mod error;
pub mod exactnum;
pub mod lattes;
pub mod pillow;
pub mod render;
pub mod sample;
pub mod tiling;
pub mod verify;

pub use carpet::{member, CarpetSpace, PeripheralCircleId};
pub use error::{Error, Result};
pub use exactnum::{Base, DigitExpansion, PRational};
pub use lattes::{InverseBranch, LattesMap, PointClass, RelationWitness};
pub use pillow::{distance, Distance, Face, FixedSetClass, IsometryId, PillowPoint, SquareSymmetry};
pub use render::{render, RenderConfig, Target};
pub use tiling::{TileAddress, TileColor};
pub use verify::{run_suite, Claim, GridOracle, SuiteConfig, Verdict, VerificationReport};
