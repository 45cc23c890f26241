//! Classification and counting of the near-vector spaces `F^m` over a finite
//! field `F = GF(p^n)`.
//!
//! Such a space is determined by a suitable sequence over the group
//! `G = U(p^n - 1)/<p>`. Two spaces are isomorphic exactly when one sequence
//! is a scaling of the other with matching multiplicities. Class counts follow
//! from the subgroup lattice of `G` ([`counting`]). They are cross-checked by
//! orbit enumeration ([`classify`]) and by explicit isomorphisms over the
//! field itself ([`field`]).

pub mod classify;
pub mod counting;
pub mod error;
pub mod field;
pub mod group;
pub mod sequences;
pub mod subgroups;

pub use classify::{
    brute_force_classes, brute_force_counts, build_witness, isomorphic, orbit, BruteForceCounts,
    ClassRecord, ClassificationResult, IsomorphismWitness, DEFAULT_ENUMERATION_BUDGET,
};
pub use counting::{coprime_shortcut, sbar_sizes, t_n, t_n_d, t_of_n, total_count, CountReport};
pub use error::{Error, Result};
pub use field::{
    apply_action, check_axioms, check_field_identity, verify_witness, ActionSpec, AxiomReport,
    FieldElement, FiniteField, VerifyMode, WitnessVerification, DEFAULT_VERIFICATION_BUDGET,
};
pub use group::{GroupElement, GroupParams, QuotientGroup};
pub use sequences::{enumerate_st1, in_st_h, scale, SuitableSequence, SupportProfile};
pub use subgroups::{all_subgroups, Subgroup, SubgroupLattice};
