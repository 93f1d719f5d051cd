//! Shared fixtures for the criterion benchmarks.

use theta_core::chars::CharacterRegistry;
use theta_core::llc::{EnhancedParameter, EtaCharacter, GroupContext, GroupKind};
use theta_core::sign::Sign;
use theta_core::wd::{Atom, WdRep};

/// The Mp(6) worked example: phi = S2 + S4, eta = (+, -).
pub fn mp6_example(reg: &CharacterRegistry) -> EnhancedParameter {
    let one = reg.trivial();
    let phi = WdRep::from_terms([(Atom::chain(one, 2), 1), (Atom::chain(one, 4), 1)]);
    let ctx = GroupContext::new(
        GroupKind::Mp,
        6,
        theta_core::chars::FieldContext::split(),
        one,
        one,
        Sign::Plus,
        None,
    );
    EnhancedParameter {
        ctx,
        phi,
        eta: EtaCharacter::new(vec![Sign::Plus, Sign::Minus]),
        nu: None,
        tempered: true,
    }
}
