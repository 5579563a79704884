//! Cactus groups and cactus doodles.
//!
//! Words in the cactus group close up into Gauss diagrams of curves on the sphere. Diagrams
//! are compared up to the elementary moves Φ (creating or annihilating a pair of `n`-fold
//! points) and Ψ (passing a `k`-fold point through an `n`-fold one).

pub mod cactus;
pub mod canonical;
pub mod closure;
pub mod equivalence;
pub mod error;
pub mod export;
pub mod gauss;
pub mod io;
pub mod moves;
pub mod peak;
pub mod realize;

pub use cactus::{perm_image, perm_of_generator, CactusWord, Generator, Permutation};
pub use canonical::{canonical_form, CanonicalKey, ComponentMode};
pub use closure::close;
pub use equivalence::{equivalent, minimize, psi_orbit, MoveSequence, SearchOptions};
pub use error::{DiagramError, MoveError, PeakError, SearchError, WordError};
pub use gauss::{Endpoint, GaussDiagram, Label, OrientedCyclicOrder, PointId, Sign};
pub use moves::MoveDescriptor;
pub use peak::flatten_peak;
pub use realize::is_realizable;
