//! Finite p-groups from power-commutator presentations.
//!
//! Groups are built from a [`PcPresentation`] (see [`PcBuilder`]) or from an
//! explicit multiplication table, and then queried through the
//! [`structure`], [`subgroups`], [`predicates`] and [`iso`] modules. The
//! [`catalog`] module names the metahamiltonian families and [`campaign`]
//! verifies them in bulk.

pub mod bitset;
pub mod campaign;
pub mod catalog;
pub mod error;
pub mod group;
pub mod iso;
pub mod numtheory;
pub mod pc;
pub mod predicates;
pub mod structure;
pub mod subgroups;
pub mod words;

pub use bitset::BitSet;
pub use campaign::{run_campaign, CampaignConfig, CheckOptions, Checks, Record, VerificationReport};
pub use catalog::{
    enumerate_specs, mk_abelian, mk_family, mk_family_with, mk_metacyclic, mk_minimal_nonabelian, parse_spec,
    FamilySpec, OrderBound,
};
pub use error::{Error, Result};
pub use group::{build_group, group_from_table, ut_group, Group};
pub use iso::{are_isomorphic, fingerprint, Fingerprint};
pub use numtheory::UnitGroupInfo;
pub use pc::{Element, PcBuilder, PcPresentation, Word};
pub use predicates::RedeiType;
pub use structure::AbelianType;
pub use subgroups::{EnumBudget, Subgroup};
