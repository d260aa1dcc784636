//! Packing arbitrary disk sets of total area at most π/2 into the unit disk.
//!
//! [`engine::pack`] runs the worst-case optimal five-phase algorithm,
//! [`verify::verify`] re-checks any packing from raw coordinates, and
//! [`oracles`] exposes the closed-form densities used to cross-check both.

pub mod engine;
pub mod geom;
pub mod instances;
pub mod io;
pub mod oracles;
pub mod svg;
pub mod verify;

pub use engine::{pack, InstanceSpec, PackingResult, PhaseEvent, RingState};
pub use geom::{ContainerDisk, PlacedDisk, Point, RingShape, Side};
pub use verify::{verify, Placement, VerificationReport};
