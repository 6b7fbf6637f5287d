//! Excitations, string paths and ground-state sectors of the 3d toric code.

pub mod gf2;
pub mod lattice;
pub mod paths;
pub mod sectors;
pub mod stabilizer;
pub mod transforms;

pub use lattice::{Axis, Direction, Edge, Face, LatticeError, Region, Sign, Vertex};
pub use paths::{
    DirSet, DirectionSet, FinitePath, InfinitePathSpec, PathError, SpecParseError, Surface, SurfaceError, Word,
};
pub use sectors::{CaseName, GscMode, SectorError, SectorLabel, SectorVerdict, StringClass, VerdictKind, Witness};
pub use stabilizer::{FiniteLattice, PauliOperator, StabilizerError};
pub use transforms::{Configuration, EnergyReport, TransformError};
