//! Cross-checks: the bar complex oracle, the registry of worked examples,
//! random modules and the bound-verification suites.

pub mod oracle;
pub mod random;
pub mod registry;
pub mod suites;

pub use oracle::{oracle_homology, oracle_homology_upto};
pub use random::{random_module, random_orbit_module, Profile, ProfileKind};
pub use registry::{registry, standard_entries, Assertion, Fact, FactCheck, FactOrigin, RegistryEntry, RegistryModule};
pub use suites::{verify, InstanceRecord, VerificationOutcome, SUITES};
