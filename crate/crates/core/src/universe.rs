//! Exhaustive enumeration of small chain-atom parameters, used by the
//! cross-validation suites and the acceptance tests.

use crate::chars::{CharId, CharacterRegistry, FieldContext};
use crate::llc::{validate, EnhancedParameter, EtaCharacter, GroupContext, GroupKind, ZConstraint};
use crate::sign::Sign;
use crate::wd::{Atom, WdRep};

/// Size bounds of the enumeration.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    /// Maximal parameter dimension.
    pub max_dim: u32,
    /// Maximal SL2 size of a chain atom.
    pub max_sl2: u32,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits { max_dim: 12, max_sl2: 8 }
    }
}

/// The split-field registry used by the enumeration: chi_pi(-1) = -1 and the
/// character attached to -1 is the unramified one.
pub fn split_registry() -> CharacterRegistry {
    CharacterRegistry::default_split(false)
}

/// The quadratic-extension registry used by the enumeration, with
/// omega(-1) = -1.
pub fn quadratic_registry() -> CharacterRegistry {
    CharacterRegistry::default_quadratic(Sign::Minus)
}

/// All chain-atom multisets over the registry with total dimension `dim` and
/// SL2 sizes at most `max_sl2`.
pub fn chain_multisets(reg: &CharacterRegistry, dim: u32, max_sl2: u32) -> Vec<WdRep> {
    let mut parts = Vec::new();
    for k in 1..=max_sl2.min(dim.max(1)) {
        for chi in reg.ids() {
            parts.push((chi, k));
        }
    }
    let mut out = Vec::new();
    let mut current: Vec<(CharId, u32, u32)> = Vec::new();
    fn rec(
        parts: &[(CharId, u32)],
        idx: usize,
        remaining: u32,
        current: &mut Vec<(CharId, u32, u32)>,
        out: &mut Vec<WdRep>,
    ) {
        if remaining == 0 {
            out.push(WdRep::from_terms(current.iter().map(|(c, k, m)| (Atom::chain(*c, *k), *m))));
            return;
        }
        if idx == parts.len() {
            return;
        }
        let (chi, k) = parts[idx];
        let max_mult = remaining / k;
        for m in 0..=max_mult {
            if m > 0 {
                current.push((chi, k, m));
            }
            rec(parts, idx + 1, remaining - m * k, current, out);
            if m > 0 {
                current.pop();
            }
        }
    }
    rec(&parts, 0, dim, &mut current, &mut out);
    out
}

/// Multisets that admit the duality sign required by `ctx` and satisfy its
/// determinant constraint.
fn admissible_phis(reg: &CharacterRegistry, ctx: &GroupContext, limits: Limits) -> Vec<WdRep> {
    let sign = ctx.required_duality().sign().unwrap();
    chain_multisets(reg, ctx.param_dim(), limits.max_sl2)
        .into_iter()
        .filter(|phi| phi.admits_sign(sign, reg).unwrap_or(false))
        .filter(|phi| match ctx.required_det(reg) {
            Some(req) => phi.det_char(reg).map(|d| d == req).unwrap_or(false),
            None => true,
        })
        .collect()
}

/// Enumerate every valid tempered parameter for the context family obtained
/// by attaching all admissible eta characters (and nu/tower data) to the
/// admissible multisets.
fn push_params(
    reg: &CharacterRegistry,
    ctx_base: &GroupContext,
    limits: Limits,
    out: &mut Vec<EnhancedParameter>,
) {
    for phi in admissible_phis(reg, ctx_base, limits) {
        let a = match crate::llc::component_group(reg, &phi, ctx_base) {
            Ok(a) => a,
            Err(_) => continue,
        };
        let rank = a.rank();
        for bits in 0..(1u32 << rank) {
            let signs: Vec<Sign> = (0..rank)
                .map(|i| if bits & (1 << i) != 0 { Sign::Minus } else { Sign::Plus })
                .collect();
            let eta = EtaCharacter::new(signs);
            let z = eta.eval(a.z_mask());
            let mut ctx = ctx_base.clone();
            match ctx.z_constraint() {
                ZConstraint::Trivial => {
                    if z != Sign::Plus {
                        continue;
                    }
                }
                ZConstraint::TowerSign => ctx.tower = z,
                ZConstraint::Free => {}
            }
            let nus: &[Option<Sign>] = if ctx.kind == GroupKind::OOdd {
                &[Some(Sign::Plus), Some(Sign::Minus)]
            } else {
                &[None]
            };
            for nu in nus {
                let p = EnhancedParameter {
                    ctx: ctx.clone(),
                    phi: phi.clone(),
                    eta: eta.clone(),
                    nu: *nu,
                    tempered: true,
                };
                debug_assert!(validate(reg, &p).is_empty(), "{:?}", validate(reg, &p));
                out.push(p);
            }
        }
    }
}

/// Enumerate the full universe over the split-field registry: metaplectic,
/// symplectic and both orthogonal sources.
pub fn split_parameters(reg: &CharacterRegistry, limits: Limits) -> Vec<EnhancedParameter> {
    let field = FieldContext::split();
    let one = reg.trivial();
    let mut out = Vec::new();
    // Metaplectic sources: n even, chi_V over the full registry.
    let mut n = 2;
    while n <= limits.max_dim {
        for chi_v in reg.ids() {
            let ctx = GroupContext::new(GroupKind::Mp, n, field, chi_v, one, Sign::Plus, None);
            push_params(reg, &ctx, limits, &mut out);
        }
        n += 2;
    }
    // Symplectic sources: parameter dimension n + 1 <= max_dim.
    let mut n = 2;
    while n + 1 <= limits.max_dim {
        for chi_v in reg.ids() {
            let ctx = GroupContext::new(GroupKind::Sp, n, field, chi_v, one, Sign::Plus, None);
            push_params(reg, &ctx, limits, &mut out);
        }
        n += 2;
    }
    // Odd orthogonal sources: parameter dimension n - 1.
    let mut n = 3;
    while n - 1 <= limits.max_dim {
        for chi_w in reg.ids() {
            let ctx = GroupContext::new(GroupKind::OOdd, n, field, one, chi_w, Sign::Plus, None);
            push_params(reg, &ctx, limits, &mut out);
        }
        n += 2;
    }
    // Even orthogonal sources: chi_W is pinned to det(phi), so enumerate
    // multisets first and split by determinant.
    let mut n = 2;
    while n <= limits.max_dim {
        for chi_w in reg.ids() {
            let ctx = GroupContext::new(GroupKind::OEven, n, field, one, chi_w, Sign::Plus, None);
            push_params(reg, &ctx, limits, &mut out);
        }
        n += 2;
    }
    out
}

/// Enumerate the unitary universe over the quadratic registry: both partner
/// parities and the valid chi_V choices per parity.
pub fn unitary_parameters(reg: &CharacterRegistry, limits: Limits) -> Vec<EnhancedParameter> {
    let field = reg.field;
    let mut out = Vec::new();
    for n in 1..=limits.max_dim {
        for partner_odd in [false, true] {
            let chi_v_options: Vec<CharId> = reg
                .ids()
                .filter(|c| {
                    reg.get(*c).conj_restriction.conj_sign()
                        == Some(if partner_odd { Sign::Minus } else { Sign::Plus })
                })
                .collect();
            let chi_w = reg
                .ids()
                .find(|c| {
                    reg.get(*c).conj_restriction.conj_sign()
                        == Some(if n % 2 == 1 { Sign::Minus } else { Sign::Plus })
                })
                .expect("registry has both restriction classes");
            for chi_v in chi_v_options {
                let ctx = GroupContext::new(
                    GroupKind::U,
                    n,
                    field,
                    chi_v,
                    chi_w,
                    Sign::Plus,
                    Some(partner_odd),
                );
                push_params(reg, &ctx, limits, &mut out);
            }
        }
    }
    out
}

/// Run `f` over the whole universe (split kinds, then unitary).
pub fn for_each_parameter(limits: Limits, mut f: impl FnMut(&CharacterRegistry, &EnhancedParameter)) {
    let reg = split_registry();
    for p in split_parameters(&reg, limits) {
        f(&reg, &p);
    }
    let qreg = quadratic_registry();
    for p in unitary_parameters(&qreg, limits) {
        f(&qreg, &p);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_dimensions() {
        let reg = split_registry();
        for rep in chain_multisets(&reg, 4, 4) {
            assert_eq!(rep.dim(&reg).unwrap(), 4);
        }
        // one empty multiset at dimension zero
        assert_eq!(chain_multisets(&reg, 0, 4).len(), 1);
    }

    #[test]
    fn universe_is_nonempty_per_kind() {
        let limits = Limits { max_dim: 4, max_sl2: 4 };
        let reg = split_registry();
        let params = split_parameters(&reg, limits);
        for kind in [GroupKind::Mp, GroupKind::Sp, GroupKind::OOdd, GroupKind::OEven] {
            assert!(params.iter().any(|p| p.ctx.kind == kind), "missing {kind}");
        }
        let qreg = quadratic_registry();
        assert!(!unitary_parameters(&qreg, limits).is_empty());
    }
}
