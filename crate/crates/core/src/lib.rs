//! Exact-arithmetic Hall-Littlewood machinery on the ring of symmetric functions.
//!
//! Everything is computed over big rationals with the HL parameter specialised
//! to a caller-supplied rational number. The crate is organised bottom-up:
//!
//! * [`partitions`]: partition combinatorics, the Young lattice and the
//!   two-box relation used by the even/odd branching graphs.
//! * [`symring`]: `Sym` in the power-sum basis, HL inner products, the
//!   plethysm `p_k -> p_{2k}`, the doubling morphism, the standard and the
//!   `p_2`-twisted coproducts.
//! * [`hlbasis`]: HL functions `P`, `Q` and their sign-modified versions,
//!   basis expansion and the three families of structure constants.
//! * [`functionals`]: linear functionals on `Sym`, dilation, both mixing
//!   constructions, the embeddings into the `p_2`-harmonic cones and the
//!   harmonicity / positivity checks.
//! * [`graphs`]: the HL-deformed Young graph and its even/odd relatives.
//! * [`verify`]: named verification suites with JSON reports.

pub mod bases;
pub mod error;
pub mod functionals;
pub mod graphs;
pub mod hlbasis;
pub mod partitions;
pub mod scalar;
pub mod serial;
pub mod symring;
pub mod verify;

pub use error::{Error, Result};
pub use functionals::{Functional, MixWeights, PlancherelKind};
pub use graphs::{GraphKind, GraphVariant, LevelData};
pub use hlbasis::{HLContext, ModifiedBasis, TwistedStructure};
pub use partitions::Partition;
pub use scalar::Scalar;
pub use symring::{SymElement, TensorElement};
