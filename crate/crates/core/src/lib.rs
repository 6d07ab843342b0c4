//! Executable machinery for well- and better-quasi-order theory at desk
//! scale: iterated set hierarchies over a quasi-order, embeddability of
//! finitely presented transfinite sequences, the correspondence between the
//! two, downset algebra with certified descending chains, and the
//! conversions between bad sequences and bad arrays — all with
//! machine-checkable witnesses.
//!
//! The crate is organized around five carriers:
//!
//! - [`Ordinal`]: Cantor normal form below epsilon-zero, for lengths and
//!   ranks.
//! - [`Qo`] / [`Element`]: registered quasi-orders (finite, omega, Rado,
//!   products, downset levels) with decidable order and fair enumeration.
//! - [`VTerm`]: finite hereditary set terms with the comparisons
//!   [`lesssim`] and their equivalence.
//! - [`SeqTerm`]: regular transfinite sequences with decidable (weak)
//!   embeddability, tails, and decomposition into indecomposables.
//! - [`CoUpset`]: downward-closed sets as complements of finitely
//!   generated upsets.
//!
//! Everything is immutable after construction and all operations are pure,
//! so values can be shared freely across threads.

pub mod barrier;
pub mod bridge;
pub mod downset;
pub mod error;
pub mod hierarchy;
pub mod ordinal;
pub mod qo;
pub mod sequence;

pub use barrier::{
    extract_bad_sequence, is_bad_on, ramsey_homogeneous, triangleleft, BadnessVerdict,
    ExtractVerdict, FrontTemplate, TameArray, Tuple, Valuer,
};
pub use bridge::{cofembeds, eta, iota, roundtrip_check, wind};
pub use downset::{couset_subset, descend_chain, next_level, rado_bad_downset, CoUpset, DescentChain};
pub use error::{Error, Result};
pub use hierarchy::{
    check_bad_prefix, find_good_pair, lesssim, sim_equiv, supp, truncate_downset, unwind, v_rank,
    PartialArray, VTerm,
};
pub use ordinal::Ordinal;
pub use qo::{enum_order, Element, Qo};
pub use sequence::{
    cofembeds_by_tails, decompose, embeds, embeds_bool, enumerate_terms, is_indecomposable,
    seq_len, tail_at, tail_classes, validate_witness, EmbedResult, EmbedWitness, Position, SeqTerm,
};
