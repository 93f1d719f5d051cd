//! Symbolic calculator for the local theta correspondence of classical
//! groups over a p-adic field.
//!
//! Everything is computed at the level of formal Weil–Deligne parameters:
//! multisets of irreducible atoms `χ ⊠ S_k`, component-group characters on
//! the self-dual summands, and root-number signs.  No smooth representation
//! is ever constructed.  The main entry points are
//!
//! * [`theta::tower_report`] — first-occurrence indices, going-up/down
//!   tower selection and the admission-set trace,
//! * [`theta::lift_down`] / [`theta::lift_up`] / [`theta::tabulate`] — the
//!   full lifted parameters on both Witt towers,
//! * [`gp`] — Gross–Prasad distinguished pairs and the (almost) equal rank
//!   branching recipes,
//! * [`epsilon`] — the closed-form root-number calculus with a brute-force
//!   Clebsch–Gordan oracle for cross-validation.

pub mod chars;
pub mod epsilon;
pub mod error;
pub mod gp;
pub mod llc;
pub mod oracle;
pub mod sign;
pub mod theta;
pub mod universe;
pub mod wd;

pub use chars::{AddCharTag, CharId, CharacterRegistry, ConjRestriction, FieldContext, FieldKind, TwistCharacter};
pub use error::Error;
pub use llc::{ComponentGroup, EnhancedParameter, EtaCharacter, GroupContext, GroupKind};
pub use sign::{HalfInt, Sign};
pub use theta::{GlSegment, ThetaLiftResult, ThetaRow, TowerReport};
pub use wd::{Atom, AtomKind, DualityClass, GenericDecl, WdRep};

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Join a violation list into one readable line.
pub fn fmt_violations(v: &[llc::Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}
