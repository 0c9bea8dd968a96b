//! Three-state grand-canonical density-matrix model of molecular domains
//! with fractional charge.
//!
//! A domain exchanging up to `q` electrons is represented by a mixture of the
//! ground states of its cation, neutral and anion sectors. [`simplex`] holds
//! the weight algebra and region geometry, [`oracle`] builds explicit density
//! matrices for cross-checks, [`descriptors`] derives energies and reactivity
//! descriptors, [`species`] reads and writes domain catalogs, and [`verify`]
//! runs the invariant suite behind the `gcdm verify` command.

pub mod descriptors;
pub mod error;
pub mod exec;
pub mod oracle;
pub mod scan;
pub mod simplex;
pub mod species;
pub mod synthetic;
pub mod verify;

pub use descriptors::{descriptor_set, energy, ConvexityWarning, DescriptorSet};
pub use error::{CatalogError, DomainError, OracleError, SimplexError};
pub use exec::Exec;
pub use simplex::{
    classify, weights_from_omega_n, weights_from_reference, ChargeFraction, DomainSpec,
    ReferenceFraction, Region, SimplexPoint, WeightVector,
};
pub use species::{load_domains, parse_catalog, write_catalog, CatalogFormat, SpeciesRecord};
