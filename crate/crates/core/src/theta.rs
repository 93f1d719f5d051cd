//! First-occurrence analysis and the full lift recipes on both Witt towers.

use crate::chars::{AddCharTag, CharId, CharacterRegistry};
use crate::epsilon::{root_number, twisted_eps, TensorSide};
use crate::error::Error;
use crate::llc::{
    component_group, odd_orthogonal_central_sign, validate, ComponentGroup, EnhancedParameter,
    EtaCharacter, GroupContext, GroupKind, ZConstraint,
};
use crate::sign::{HalfInt, Sign};
use crate::wd::{Atom, AtomKind, WdRep};
use crate::Result;

/// Outcome of the admission-set analysis for one parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerReport {
    pub kappa: u8,
    pub l_pi: i32,
    pub t_set: Vec<i32>,
    pub m_down: u32,
    pub m_up: u32,
    /// Sign of the going-down tower; `None` when both towers coincide.
    pub alpha: Option<Sign>,
    /// For single-space-tower sources: whether the given representation
    /// (rather than its det twist) achieves the first occurrence.
    pub input_heads_down: Option<bool>,
    pub trace: Vec<CandidateTrace>,
}

/// Per-candidate record of the four admission conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateTrace {
    pub l: i32,
    pub chain_ok: bool,
    pub oddness_ok: bool,
    pub initial_ok: Option<bool>,
    pub alternating_ok: bool,
    pub admitted: bool,
}

/// One GL-Steinberg segment of a standard module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlSegment {
    pub chi: CharId,
    pub steinberg: u32,
    pub exponent: HalfInt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftNote {
    /// A genuinely new basis slot was pinned by a central-element constraint.
    NewSlotPinned,
    /// This row lifts the det twist of the given representation.
    DetTwistFamily,
}

impl std::fmt::Display for LiftNote {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LiftNote::NewSlotPinned => "new-slot-pinned-by-central-element",
            LiftNote::DetTwistFamily => "det-twist-family",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaLiftResult {
    pub m: u32,
    /// Tower/family sign of the row; `None` for a single coincident family.
    pub tower: Option<Sign>,
    pub parameter: EnhancedParameter,
    pub tempered: bool,
    pub standard_module: Vec<GlSegment>,
    pub notes: Vec<LiftNote>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThetaRow {
    Zero { tower: Option<Sign>, m: u32 },
    Lift(ThetaLiftResult),
}

fn twist_atom(reg: &CharacterRegistry, atom: &Atom, chi: CharId) -> Atom {
    let kind = match &atom.kind {
        AtomKind::Chain { chi: c, k } => AtomKind::Chain { chi: reg.product(*c, chi), k: *k },
        AtomKind::Generic { label, twist, k } => {
            AtomKind::Generic { label: label.clone(), twist: reg.product(*twist, chi), k: *k }
        }
    };
    Atom { kind, shift: atom.shift }
}

fn require_valid(reg: &CharacterRegistry, p: &EnhancedParameter) -> Result<()> {
    if !p.tempered {
        return Err(Error::InvalidParameter("lift recipes require a tempered source parameter".into()));
    }
    let violations = validate(reg, p);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(
            violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "),
        ))
    }
}

/// The admission set, its maximum, the first-occurrence indices and the
/// going-down tower sign.
pub fn tower_report(reg: &CharacterRegistry, p: &EnhancedParameter) -> Result<TowerReport> {
    require_valid(reg, p)?;
    let ctx = &p.ctx;
    let n = ctx.dim as i32;
    let eps0 = ctx.epsilon0();
    let kappa = ctx.kappa();
    let a = p.component_group(reg)?;
    let chi_v = ctx.chi_v;
    let slot_mask = |r: u32| -> Option<u32> { a.mask_of(&Atom::chain(chi_v, r)) };
    let eta_e = |r: u32| -> Option<Sign> { slot_mask(r).map(|m| p.eta.eval(m)) };

    let mut t_set = vec![kappa as i32 - 2];
    let mut trace = Vec::new();
    let mut chain_ok = true;
    let mut oddness_ok = true;
    let mut alternating_ok = true;
    let mut l = kappa as u32;
    loop {
        chain_ok = chain_ok && p.phi.multiplicity(chi_v, l) >= 1;
        if !chain_ok {
            trace.push(CandidateTrace {
                l: l as i32,
                chain_ok: false,
                oddness_ok,
                initial_ok: None,
                alternating_ok,
                admitted: false,
            });
            break;
        }
        if l >= kappa as u32 + 2 {
            oddness_ok = oddness_ok && p.phi.multiplicity(chi_v, l - 2) % 2 == 1;
            alternating_ok = alternating_ok
                && eta_e(l - 2).zip(eta_e(l)).map(|(a, b)| a == -b).unwrap_or(false);
        }
        let initial_ok = if kappa == 2 {
            let want = if ctx.field.is_quadratic() {
                Sign::Minus
            } else {
                ctx.epsilon * reg.delta(chi_v)
            };
            Some(eta_e(2) == Some(want))
        } else {
            None
        };
        let admitted = chain_ok && oddness_ok && alternating_ok && initial_ok.unwrap_or(true);
        trace.push(CandidateTrace {
            l: l as i32,
            chain_ok,
            oddness_ok,
            initial_ok,
            alternating_ok,
            admitted,
        });
        if admitted {
            t_set.push(l as i32);
        }
        l += 2;
        // The chain condition forces termination well before this bound.
        if l as i32 > n + eps0.abs() + 2 {
            break;
        }
    }
    let l_pi = *t_set.iter().max().unwrap();
    let m_down_i = n + eps0 - l_pi;
    if m_down_i < 0 {
        return Err(Error::Other(format!("first occurrence index {m_down_i} is negative")));
    }
    let m_down = m_down_i as u32;
    let m_up = (n + eps0 + 2 + l_pi) as u32;

    let alpha = if l_pi >= 0 {
        Some(down_tower_sign(reg, p, &a, kappa)?)
    } else {
        None
    };
    let input_heads_down = match (ctx.kind, alpha) {
        (GroupKind::OOdd, Some(al)) => p.nu.map(|nu| nu == al),
        (GroupKind::OEven, Some(al)) => Some(al == Sign::Plus),
        _ => None,
    };
    Ok(TowerReport { kappa, l_pi, t_set, m_down, m_up, alpha, input_heads_down, trace })
}

/// The sign alpha with m_down = m^alpha.
fn down_tower_sign(
    reg: &CharacterRegistry,
    p: &EnhancedParameter,
    a: &ComponentGroup,
    kappa: u8,
) -> Result<Sign> {
    let ctx = &p.ctx;
    let z = a.z_mask();
    if kappa == 1 {
        let e1 = a
            .mask_of(&Atom::chain(ctx.chi_v, 1))
            .ok_or_else(|| Error::Other("kappa = 1 with l >= 0 requires chi_V inside phi".into()))?;
        return Ok(p.eta.eval(z ^ e1));
    }
    let eta_z = p.eta.eval(z);
    match ctx.kind {
        GroupKind::Mp => {
            let tag = AddCharTag::Psi;
            let e = root_number(reg, &p.phi, reg.trivial(), &tag)?;
            let et = root_number(reg, &p.phi, ctx.chi_v, &tag)?;
            Ok(eta_z * e * et * reg.value_at_minus1(ctx.chi_v).pow(ctx.dim / 2))
        }
        GroupKind::OOdd => {
            let e = root_number(reg, &p.phi, reg.trivial(), &AddCharTag::Psi)?;
            Ok(eta_z * e)
        }
        GroupKind::U => {
            let e = root_number(reg, &p.phi, reg.inverse(ctx.chi_v), &AddCharTag::PsiE2)?;
            Ok(eta_z * e)
        }
        _ => unreachable!("kappa = 2 occurs for Mp, odd orthogonal and unitary sources only"),
    }
}

/// eta ratio of a going-down (`Minus`) or going-up (`Plus`) lift on the
/// subrepresentation attached to one basis element.
fn eta_ratio(
    reg: &CharacterRegistry,
    ctx: &GroupContext,
    phi_a: &WdRep,
    l: u32,
    side: TensorSide,
) -> Result<Sign> {
    let te = twisted_eps(reg, phi_a, ctx.chi_v, l, side)?;
    match ctx.kind {
        GroupKind::Mp => {
            let e = root_number(reg, phi_a, reg.trivial(), &AddCharTag::Psi)?;
            let dim = phi_a.dim(reg)?;
            Ok(te * e * reg.value_at_minus1(ctx.chi_v).pow(dim / 2))
        }
        GroupKind::OOdd => {
            let e = root_number(reg, phi_a, ctx.chi_w, &AddCharTag::Psi)?;
            let dim = phi_a.dim(reg)?;
            Ok(te * e * reg.value_at_minus1(ctx.chi_w).pow(dim / 2))
        }
        GroupKind::Sp | GroupKind::OEven => {
            let idx = match side {
                TensorSide::Minus => (l - 1) / 2,
                TensorSide::Plus => (l + 1) / 2,
            };
            let det = phi_a.twist(reg.inverse(ctx.chi_v), reg).det_at_minus1(reg)?;
            Ok(te * det.pow(idx))
        }
        GroupKind::U => Ok(te),
    }
}

/// eta ratio of the boundary lift at m = n + epsilon_0 (kappa = 2).
fn equal_rank_ratio(reg: &CharacterRegistry, ctx: &GroupContext, phi_a: &WdRep) -> Result<Sign> {
    if ctx.field.is_quadratic() {
        root_number(reg, phi_a, reg.inverse(ctx.chi_v), &AddCharTag::PsiE2)
    } else {
        let chi = reg.product(reg.inverse(ctx.chi_v), ctx.chi_w);
        let e = root_number(reg, phi_a, reg.trivial(), &AddCharTag::Psi)?;
        let et = root_number(reg, phi_a, chi, &AddCharTag::Psi)?;
        let dim = phi_a.dim(reg)?;
        Ok(e * et * reg.value_at_minus1(chi).pow(dim / 2))
    }
}

/// Required value of eta(z) on the lifted parameter, used to pin a genuinely
/// new basis slot.
fn required_z_value(
    reg: &CharacterRegistry,
    src: &EnhancedParameter,
    target_ctx: &GroupContext,
    theta_phi: &WdRep,
    family: Sign,
) -> Result<Sign> {
    match target_ctx.z_constraint() {
        ZConstraint::Trivial => Ok(Sign::Plus),
        ZConstraint::TowerSign => Ok(family),
        ZConstraint::Free => {
            // Metaplectic target: pin through the central-element comparison
            // with the lifted parameter viewed as the source of an
            // equal-rank-plus-two correspondence back to the original space.
            let a_src = src.component_group(reg)?;
            let eta_z = src.eta.eval(a_src.z_mask());
            let tag = AddCharTag::Psi;
            let e = root_number(reg, theta_phi, reg.trivial(), &tag)?;
            let et = root_number(reg, theta_phi, src.ctx.chi_w, &tag)?;
            Ok(eta_z * e * et * reg.value_at_minus1(src.ctx.chi_w).pow((src.ctx.dim + 1) / 2))
        }
    }
}

struct Assembly {
    theta_phi: WdRep,
    eta: EtaCharacter,
    notes: Vec<LiftNote>,
}

/// Fill the lifted eta: every slot of the lifted component group is matched
/// to a source slot by untwisting, except at most one genuinely new slot,
/// whose value comes from `new_value`.
fn assemble_eta(
    reg: &CharacterRegistry,
    src: &EnhancedParameter,
    a_src: &ComponentGroup,
    theta_phi: &WdRep,
    target_ctx: &GroupContext,
    untwist: CharId,
    mut value_of_source_slot: impl FnMut(usize) -> Result<Sign>,
    mut new_value: impl FnMut(&ComponentGroup, usize, &[Option<Sign>]) -> Result<Sign>,
) -> Result<(ComponentGroup, EtaCharacter, bool)> {
    let a_theta = component_group(reg, theta_phi, target_ctx)?;
    let mut values: Vec<Option<Sign>> = vec![None; a_theta.rank()];
    let mut new_idx: Option<usize> = None;
    for (i, slot) in a_theta.slots.iter().enumerate() {
        let src_atom = twist_atom(reg, &slot.atom, untwist);
        match a_src.slot_of(&src_atom) {
            Some(j) => values[i] = Some(value_of_source_slot(j)?),
            None => {
                if new_idx.is_some() {
                    return Err(Error::Other("more than one new basis slot in a lift".into()));
                }
                new_idx = Some(i);
            }
        }
    }
    let _ = src;
    let mut pinned = false;
    if let Some(i) = new_idx {
        let v = new_value(&a_theta, i, &values)?;
        values[i] = Some(v);
        pinned = true;
    }
    let signs = values.into_iter().map(|v| v.expect("all slots assigned")).collect();
    Ok((a_theta, EtaCharacter::new(signs), pinned))
}

/// Solve for the new slot value from a required eta(z) on the lifted group.
fn pin_by_z(a: &ComponentGroup, idx: usize, values: &[Option<Sign>], required: Sign) -> Result<Sign> {
    let z = a.z_mask();
    if z & (1 << idx) == 0 {
        return Err(Error::Other("new slot does not enter the central element; cannot pin".into()));
    }
    let mut acc = Sign::Plus;
    for (i, v) in values.iter().enumerate() {
        if i != idx && z & (1 << i) != 0 {
            acc *= v.ok_or_else(|| Error::Other("unassigned slot during pinning".into()))?;
        }
    }
    Ok(required * acc)
}

fn finish(
    reg: &CharacterRegistry,
    src: &EnhancedParameter,
    m: u32,
    family: Option<Sign>,
    asm: Assembly,
    tempered: bool,
    standard_module: Vec<GlSegment>,
) -> Result<ThetaLiftResult> {
    let target_kind_z = src.ctx.target_context(m, Sign::Plus).z_constraint();
    let ctx_tower = match (target_kind_z, family) {
        (ZConstraint::TowerSign, Some(f)) => f,
        _ => Sign::Plus,
    };
    let ctx = src.ctx.target_context(m, ctx_tower);
    let nu = if ctx.kind == GroupKind::OOdd {
        Some(odd_orthogonal_central_sign(reg, src)?)
    } else {
        None
    };
    let parameter = EnhancedParameter { ctx, phi: asm.theta_phi, eta: asm.eta, nu, tempered };
    Ok(ThetaLiftResult { m, tower: family, parameter, tempered, standard_module, notes: asm.notes })
}

/// Going-down lift at target dimension `m`; the tower is the alpha tower of
/// the report.  Errors with [`Error::AmbiguousTower`] when both towers
/// coincide (use [`lift_down_on`]).
pub fn lift_down(reg: &CharacterRegistry, p: &EnhancedParameter, m: u32) -> Result<ThetaLiftResult> {
    let report = tower_report(reg, p)?;
    match report.alpha {
        Some(alpha) => lift_down_on(reg, p, m, alpha, &report),
        None => Err(Error::AmbiguousTower),
    }
}

/// Going-down lift on an explicit tower (needed when both towers coincide).
pub fn lift_down_on(
    reg: &CharacterRegistry,
    p: &EnhancedParameter,
    m: u32,
    tower: Sign,
    report: &TowerReport,
) -> Result<ThetaLiftResult> {
    let ctx = &p.ctx;
    let n = ctx.dim as i32;
    let eps0 = ctx.epsilon0();
    let kappa = report.kappa as i32;
    if m % 2 != report.m_down % 2 {
        return Err(Error::ParityMismatch { m, expected: report.m_down % 2 });
    }
    if let Some(alpha) = report.alpha {
        if tower != alpha {
            return Err(Error::NotOnDownTower { m, first: report.m_down });
        }
    }
    if m < report.m_down {
        return Err(Error::BelowFirstOccurrence { m, first: report.m_down });
    }
    let m1 = (n + eps0 + 2 - kappa) as u32;
    let family = single_family_sign(ctx, tower, report);
    let chi = reg.product(reg.inverse(ctx.chi_v), ctx.chi_w);
    let a_src = p.component_group(reg)?;

    if m < m1 {
        let l = (n - m as i32 + eps0) as u32;
        // Even/even constant: the alternating identity pins it to +1.
        if kappa == 1 && l >= 3 {
            let e1 = a_src.mask_of(&Atom::chain(ctx.chi_v, 1));
            let el = a_src.mask_of(&Atom::chain(ctx.chi_v, l));
            if let (Some(e1), Some(el)) = (e1, el) {
                if p.eta.eval(e1 ^ el) != Sign::from_parity((l as i64 - 1) / 2) {
                    return Err(Error::AlternatingIdentity { l });
                }
            }
        }
        let mut theta_phi = p.phi.twist(chi, reg);
        theta_phi.remove(&Atom::chain(ctx.chi_w, l), 1, reg)?;
        let target_ctx = src_target_ctx(p, m, family);
        let (_, eta, _) = assemble_eta(
            reg,
            p,
            &a_src,
            &theta_phi,
            &target_ctx,
            reg.inverse(chi),
            |j| {
                if l == 1 {
                    Ok(p.eta.signs[j])
                } else {
                    let sub = a_src.sub_rep(1 << j);
                    Ok(p.eta.signs[j] * eta_ratio(reg, ctx, &sub, l, TensorSide::Minus)?)
                }
            },
            |_, _, _| Err(Error::Other("going-down lift below the boundary cannot create slots".into())),
        )?;
        return finish(reg, p, m, family, Assembly { theta_phi, eta, notes: vec![] }, true, vec![]);
    }

    if m == m1 {
        if kappa == 1 {
            let mut theta_phi = p.phi.twist(chi, reg);
            theta_phi.add(Atom::chain(ctx.chi_w, 1), 1);
            let target_ctx = src_target_ctx(p, m, family);
            let required = required_z_value(reg, p, &target_ctx, &theta_phi, tower)?;
            let mut pinned_note = false;
            let (_, eta, pinned) = assemble_eta(
                reg,
                p,
                &a_src,
                &theta_phi,
                &target_ctx,
                reg.inverse(chi),
                |j| Ok(p.eta.signs[j]),
                |a, i, values| pin_by_z(a, i, values, required),
            )?;
            pinned_note = pinned_note || pinned;
            let notes = if pinned_note { vec![LiftNote::NewSlotPinned] } else { vec![] };
            return finish(reg, p, m, family, Assembly { theta_phi, eta, notes }, true, vec![]);
        } else {
            let theta_phi = p.phi.twist(chi, reg);
            let target_ctx = src_target_ctx(p, m, family);
            let (_, eta, _) = assemble_eta(
                reg,
                p,
                &a_src,
                &theta_phi,
                &target_ctx,
                reg.inverse(chi),
                |j| {
                    let sub = a_src.sub_rep(1 << j);
                    Ok(p.eta.signs[j] * equal_rank_ratio(reg, ctx, &sub)?)
                },
                |_, _, _| Err(Error::Other("boundary twist lift cannot create slots".into())),
            )?;
            return finish(reg, p, m, family, Assembly { theta_phi, eta, notes: vec![] }, true, vec![]);
        }
    }

    // m > m1: adjoin shifted pairs to the boundary lift.
    let base = lift_down_on(reg, p, m1, tower, report)?;
    adjoin_pairs(reg, p, base, m, family)
}

fn src_target_ctx(p: &EnhancedParameter, m: u32, family: Option<Sign>) -> GroupContext {
    let tower = match (p.ctx.target_context(m, Sign::Plus).z_constraint(), family) {
        (ZConstraint::TowerSign, Some(f)) => f,
        _ => Sign::Plus,
    };
    p.ctx.target_context(m, tower)
}

/// Family sign reported on a row: `None` for a coincident single family.
fn single_family_sign(ctx: &GroupContext, tower: Sign, report: &TowerReport) -> Option<Sign> {
    if report.alpha.is_none() && ctx.target_context(0, Sign::Plus).z_constraint() != ZConstraint::TowerSign {
        None
    } else {
        Some(tower)
    }
}

/// Shared tail for dimensions above the boundary: adjoin the shifted pairs
/// and keep eta; the lift is the Langlands quotient of the listed segments.
fn adjoin_pairs(
    reg: &CharacterRegistry,
    p: &EnhancedParameter,
    base: ThetaLiftResult,
    m: u32,
    family: Option<Sign>,
) -> Result<ThetaLiftResult> {
    let n = p.ctx.dim as i32;
    let eps0 = p.ctx.epsilon0();
    let m1 = base.m;
    let mut theta_phi = base.parameter.phi.clone();
    let mut segments = Vec::new();
    for i in 1..=((m - m1) / 2) {
        let num = (m as i32 - n - eps0 + 1) - 2 * i as i32;
        let e = HalfInt::new(num);
        theta_phi.add(Atom::chain_shifted(p.ctx.chi_w, 1, e), 1);
        theta_phi.add(Atom::chain_shifted(p.ctx.chi_w, 1, -e), 1);
        segments.push(GlSegment { chi: p.ctx.chi_w, steinberg: 1, exponent: e });
    }
    segments.extend(base.standard_module.iter().cloned());
    let asm = Assembly { theta_phi, eta: base.parameter.eta.clone(), notes: base.notes.clone() };
    finish(reg, p, m, family, asm, false, segments)
}

/// Going-up lift at target dimension `m` (requires l(pi) >= 0; for
/// coincident towers use [`lift_down_on`] on each tower).
pub fn lift_up(reg: &CharacterRegistry, p: &EnhancedParameter, m: u32) -> Result<ThetaLiftResult> {
    let report = tower_report(reg, p)?;
    lift_up_with(reg, p, m, &report)
}

fn lift_up_with(
    reg: &CharacterRegistry,
    p: &EnhancedParameter,
    m: u32,
    report: &TowerReport,
) -> Result<ThetaLiftResult> {
    let ctx = &p.ctx;
    if report.l_pi < 0 {
        return Err(Error::AmbiguousTower);
    }
    if m % 2 != report.m_up % 2 {
        return Err(Error::ParityMismatch { m, expected: report.m_up % 2 });
    }
    if m < report.m_up {
        return Err(Error::BelowFirstOccurrence { m, first: report.m_up });
    }
    let alpha = report.alpha.expect("l_pi >= 0 has a tower sign");
    let tower = -alpha;
    let family = single_family_sign(ctx, tower, report).or(Some(tower));
    let l = report.l_pi as u32;
    let chi = reg.product(reg.inverse(ctx.chi_v), ctx.chi_w);
    let a_src = p.component_group(reg)?;

    if m > report.m_up {
        let base = lift_up_with(reg, p, report.m_up, report)?;
        return adjoin_pairs(reg, p, base, m, family);
    }

    let mult_l = if l > 0 { p.phi.multiplicity(ctx.chi_v, l) } else { 0 };
    if l == 0 || mult_l % 2 == 1 {
        // Tempered branch.
        let mut theta_phi = p.phi.twist(chi, reg);
        theta_phi.add(Atom::chain(ctx.chi_w, l + 2), 1);
        let target_ctx = src_target_ctx(p, m, family);
        let mut notes = Vec::new();
        let theta_phi_for_pin = theta_phi.clone();
        let (a_theta, eta, pinned) = assemble_eta(
            reg,
            p,
            &a_src,
            &theta_phi,
            &target_ctx,
            reg.inverse(chi),
            |j| {
                let sub = a_src.sub_rep(1 << j);
                Ok(p.eta.signs[j] * eta_ratio(reg, ctx, &sub, l, TensorSide::Plus)?)
            },
            |a, i, values| {
                if l > 0 {
                    // New top slot: opposite of the value one step below.
                    let below = a
                        .slot_of(&Atom::chain(ctx.chi_w, l))
                        .ok_or_else(|| Error::Other("slot below the new one is missing".into()))?;
                    let v = values[below]
                        .ok_or_else(|| Error::Other("slot below the new one is unassigned".into()))?;
                    Ok(-v)
                } else {
                    let required = required_z_value(reg, p, &target_ctx, &theta_phi_for_pin, tower)?;
                    pin_by_z(a, i, values, required)
                }
            },
        )?;
        let _ = a_theta;
        if pinned && l == 0 {
            notes.push(LiftNote::NewSlotPinned);
        }
        return finish(reg, p, m, family, Assembly { theta_phi, eta, notes }, true, vec![]);
    }

    // Non-tempered first lift: strip the even-multiplicity chain block and
    // recurse on the smaller parameter.
    let h = mult_l / 2;
    let l_atom = Atom::chain(ctx.chi_v, l);
    let mut phi0 = p.phi.clone();
    phi0.remove(&l_atom, 2 * h, reg)?;
    let dropped = a_src.slot_of(&l_atom).expect("even multiplicity slot present");
    let eta0 = EtaCharacter::new(
        p.eta
            .signs
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != dropped)
            .map(|(_, s)| *s)
            .collect(),
    );
    let mut ctx0 = ctx.clone();
    ctx0.dim = ctx.dim - 2 * l * h;
    let p0 = EnhancedParameter { ctx: ctx0, phi: phi0, eta: eta0, nu: p.nu, tempered: true };
    let report0 = tower_report(reg, &p0)?;
    debug_assert_eq!(report0.l_pi, l as i32 - 2);
    let m0 = m - 2 * l * h - 2;
    debug_assert_eq!(report0.m_up, m0);
    // At l = 1 the stripped parameter has coincident towers and its lift is
    // the boundary recipe on our tower.
    let rec = if report0.l_pi >= 0 {
        lift_up_with(reg, &p0, m0, &report0)?
    } else {
        lift_down_on(reg, &p0, m0, tower, &report0)?
    };

    let mut theta_phi = rec.parameter.phi.clone();
    theta_phi.add(Atom::chain(ctx.chi_w, l), 2 * (h - 1));
    theta_phi.add(Atom::chain_shifted(ctx.chi_w, l + 1, HalfInt::new(1)), 1);
    theta_phi.add(Atom::chain_shifted(ctx.chi_w, l + 1, HalfInt::new(-1)), 1);
    // The tempered supports share their basis atoms; eta transports verbatim.
    let eta = rec.parameter.eta.clone();
    let mut segments = vec![GlSegment { chi: ctx.chi_w, steinberg: l + 1, exponent: HalfInt::new(1) }];
    for _ in 1..h {
        segments.push(GlSegment { chi: ctx.chi_w, steinberg: l, exponent: HalfInt::ZERO });
    }
    let mut notes = rec.notes.clone();
    notes.retain(|n| *n == LiftNote::NewSlotPinned);
    finish(reg, p, m, family, Assembly { theta_phi, eta, notes }, false, segments)
}

/// Drive both towers up to `m_max`, emitting a zero row below each first
/// occurrence and the full lift above it.
pub fn tabulate(
    reg: &CharacterRegistry,
    p: &EnhancedParameter,
    m_max: u32,
) -> Result<(TowerReport, Vec<ThetaRow>)> {
    let report = tower_report(reg, p)?;
    let mut rows = Vec::new();
    let parity = report.m_down % 2;
    let start = parity;
    if let Some(alpha) = report.alpha {
        // For an even orthogonal source the two families are the lift
        // towers of the representation and of its det twist; each family's
        // rows must be computed from its own first name.
        let (down_src, up_src): (EnhancedParameter, EnhancedParameter) = match p.ctx.kind {
            GroupKind::OEven => {
                let twin = crate::llc::det_twist(reg, p)?;
                if alpha == Sign::Plus {
                    (p.clone(), twin)
                } else {
                    (twin, p.clone())
                }
            }
            _ => (p.clone(), p.clone()),
        };
        let down_is_input = report.input_heads_down.unwrap_or(true);
        let down_report = tower_report(reg, &down_src)?;
        let down_alpha = down_report.alpha.expect("l >= 0 on the down family");
        let mut m = start;
        while m <= m_max {
            if m < report.m_down {
                rows.push(ThetaRow::Zero { tower: Some(alpha), m });
            } else {
                let mut lift = lift_down_on(reg, &down_src, m, down_alpha, &down_report)?;
                lift.tower = Some(alpha);
                if !down_is_input {
                    lift.notes.push(LiftNote::DetTwistFamily);
                }
                rows.push(ThetaRow::Lift(lift));
            }
            m += 2;
        }
        let up_report = tower_report(reg, &up_src)?;
        let mut m = start;
        while m <= m_max {
            if m < report.m_up {
                rows.push(ThetaRow::Zero { tower: Some(-alpha), m });
            } else {
                let mut lift = lift_up_with(reg, &up_src, m, &up_report)?;
                lift.tower = Some(-alpha);
                if report.input_heads_down == Some(true) {
                    lift.notes.push(LiftNote::DetTwistFamily);
                }
                rows.push(ThetaRow::Lift(lift));
            }
            m += 2;
        }
    } else {
        // Coincident towers: both first occurrences sit at m1 = n + eps0 + 1.
        let two_spaces =
            p.ctx.target_context(0, Sign::Plus).z_constraint() == ZConstraint::TowerSign;
        let towers: &[Sign] = if two_spaces { &[Sign::Plus, Sign::Minus] } else { &[Sign::Plus] };
        for &t in towers {
            let label = if two_spaces { Some(t) } else { None };
            let mut m = start;
            while m <= m_max {
                if m < report.m_down {
                    rows.push(ThetaRow::Zero { tower: label, m });
                } else {
                    rows.push(ThetaRow::Lift(lift_down_on(reg, p, m, t, &report)?));
                }
                m += 2;
            }
        }
    }
    Ok((report, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::FieldContext;
    use crate::llc::validate;

    fn reg() -> CharacterRegistry {
        CharacterRegistry::default_split(false)
    }

    fn mp_param(r: &CharacterRegistry, n: u32, chi_v: CharId, terms: &[(CharId, u32, u32)], eta: &[Sign]) -> EnhancedParameter {
        let phi = WdRep::from_terms(terms.iter().map(|(c, k, m)| (Atom::chain(*c, *k), *m)));
        let ctx = GroupContext::new(GroupKind::Mp, n, FieldContext::split(), chi_v, r.trivial(), Sign::Plus, None);
        EnhancedParameter { ctx, phi, eta: EtaCharacter::new(eta.to_vec()), nu: None, tempered: true }
    }

    /// The Mp(6) parameter phi = S2 + S4 with eta(e2) = +, eta(e4) = -.
    fn running(r: &CharacterRegistry) -> EnhancedParameter {
        let one = r.trivial();
        mp_param(r, 6, one, &[(one, 2, 1), (one, 4, 1)], &[Sign::Plus, Sign::Minus])
    }

    #[test]
    fn t_set_running_example() {
        let r = reg();
        let p = running(&r);
        let rep = tower_report(&r, &p).unwrap();
        assert_eq!(rep.kappa, 2);
        assert_eq!(rep.t_set, vec![0, 2, 4]);
        assert_eq!(rep.l_pi, 4);
        assert_eq!(rep.m_down, 3);
        assert_eq!(rep.m_up, 13);
        assert_eq!(rep.m_down + rep.m_up, 2 * 6 + 2 + 2);
        assert_eq!(rep.alpha, Some(Sign::Minus));
    }

    #[test]
    fn t_set_initial_condition_failure() {
        let r = reg();
        let one = r.trivial();
        let p = mp_param(&r, 6, one, &[(one, 2, 1), (one, 4, 1)], &[Sign::Minus, Sign::Plus]);
        let rep = tower_report(&r, &p).unwrap();
        assert_eq!(rep.t_set, vec![0]);
        assert_eq!(rep.l_pi, 0);
        assert_eq!(rep.m_down, 7);
        assert_eq!(rep.m_up, 9);
    }

    #[test]
    fn t_set_without_chi_v() {
        // kappa = 1 source whose parameter misses chi_V: both towers meet.
        let r = reg();
        let one = r.trivial();
        let u = r.by_name("u").unwrap();
        let pi = r.by_name("pi").unwrap();
        let upi = r.by_name("upi").unwrap();
        let phi = WdRep::from_terms([
            (Atom::chain(u, 1), 1),
            (Atom::chain(pi, 1), 1),
            (Atom::chain(upi, 1), 1),
        ]);
        let ctx = GroupContext::new(GroupKind::Sp, 2, FieldContext::split(), one, one, Sign::Plus, None);
        let p = EnhancedParameter {
            ctx,
            phi,
            eta: EtaCharacter::new(vec![Sign::Plus, Sign::Plus, Sign::Plus]),
            nu: None,
            tempered: true,
        };
        let rep = tower_report(&r, &p).unwrap();
        assert_eq!(rep.l_pi, -1);
        assert_eq!(rep.m_down, 2 + 1 + 1);
        assert_eq!(rep.m_down, rep.m_up);
        assert_eq!(rep.alpha, None);
        // both coincident lifts exist and carry an index-two extension
        let (_, rows) = tabulate(&r, &p, rep.m_down).unwrap();
        let lifts: Vec<_> = rows
            .iter()
            .filter_map(|r| match r {
                ThetaRow::Lift(l) => Some(l),
                _ => None,
            })
            .collect();
        assert_eq!(lifts.len(), 2);
        for l in &lifts {
            assert_eq!(l.parameter.phi.dim(&r).unwrap(), 4);
            assert!(validate(&r, &l.parameter).is_empty(), "{:?}", validate(&r, &l.parameter));
        }
    }

    #[test]
    fn alpha_special_cases() {
        let r = reg();
        // Mp with trivial chi_V: alpha = eta(z).
        let p = running(&r);
        let rep = tower_report(&r, &p).unwrap();
        assert_eq!(rep.alpha, Some(Sign::Minus)); // eta(e2+e4) = -1
        // kappa = 1 with chi_V inside phi: alpha = eta(z + e1).
        let one = r.trivial();
        let pi = r.by_name("pi").unwrap();
        let phi = WdRep::from_terms([(Atom::chain(one, 1), 1), (Atom::chain(pi, 1), 1), (Atom::chain(pi, 3), 1)]);
        let ctx = GroupContext::new(GroupKind::Sp, 4, FieldContext::split(), one, one, Sign::Plus, None);
        let p = EnhancedParameter {
            ctx,
            phi,
            eta: EtaCharacter::new(vec![Sign::Plus, Sign::Minus, Sign::Minus]),
            nu: None,
            tempered: true,
        };
        let rep = tower_report(&r, &p).unwrap();
        // z = e(1) + e(pi,1) + e(pi,3); z + e1 drops the first slot
        assert_eq!(rep.alpha, Some(Sign::Plus));
    }

    #[test]
    fn golden_down_lift_at_5() {
        let r = reg();
        let one = r.trivial();
        let p = running(&r);
        let lift = lift_down(&r, &p, 5).unwrap();
        assert!(lift.tempered);
        assert_eq!(lift.parameter.ctx.kind, GroupKind::OOdd);
        let expect = WdRep::from_terms([(Atom::chain(one, 4), 1)]);
        assert_eq!(lift.parameter.phi, expect);
        assert_eq!(lift.parameter.eta.signs, vec![Sign::Minus]);
        assert_eq!(lift.parameter.nu, Some(Sign::Minus));
        assert!(validate(&r, &lift.parameter).is_empty(), "{:?}", validate(&r, &lift.parameter));
    }

    #[test]
    fn golden_up_lift_at_13() {
        let r = reg();
        let one = r.trivial();
        let p = running(&r);
        let lift = lift_up(&r, &p, 13).unwrap();
        assert!(lift.tempered);
        let expect = WdRep::from_terms([(Atom::chain(one, 2), 1), (Atom::chain(one, 4), 1), (Atom::chain(one, 6), 1)]);
        assert_eq!(lift.parameter.phi, expect);
        assert_eq!(lift.parameter.eta.signs, vec![Sign::Minus, Sign::Plus, Sign::Minus]);
        assert_eq!(lift.parameter.nu, Some(Sign::Minus));
        assert!(validate(&r, &lift.parameter).is_empty(), "{:?}", validate(&r, &lift.parameter));
    }

    #[test]
    fn equal_rank_down_lift_matches_transfer() {
        let r = reg();
        let u = r.by_name("u").unwrap();
        let one = r.trivial();
        // chi_V = u so the boundary lift is a genuine twist.
        let p = mp_param(&r, 6, u, &[(one, 2, 1), (one, 4, 1)], &[Sign::Plus, Sign::Minus]);
        let lift = lift_down(&r, &p, 7).unwrap();
        let transfer = crate::llc::mp_o_transfer(&r, &p, u).unwrap();
        assert_eq!(lift.parameter.phi, transfer.phi);
        assert_eq!(lift.parameter.eta, transfer.eta);
        assert_eq!(lift.parameter.nu, transfer.nu);
    }

    #[test]
    fn higher_down_lift_has_pairs() {
        let r = reg();
        let p = running(&r);
        let lift = lift_down(&r, &p, 9).unwrap();
        assert!(!lift.tempered);
        // pairs at exponent +-1/2 beyond m1 = 7
        assert_eq!(lift.standard_module.len(), 1);
        assert_eq!(lift.standard_module[0].exponent, HalfInt::new(1));
        assert_eq!(lift.parameter.phi.dim(&r).unwrap(), 8);
        assert!(validate(&r, &lift.parameter).is_empty(), "{:?}", validate(&r, &lift.parameter));
        // eta restricted to the boundary group is unchanged
        let base = lift_down(&r, &p, 7).unwrap();
        assert_eq!(lift.parameter.eta, base.parameter.eta);
    }

    #[test]
    fn non_tempered_first_up_lift() {
        // Mp(8), phi = 2*S2 + S4: l(pi) = 2 with even multiplicity at the top.
        let r = reg();
        let one = r.trivial();
        let p = mp_param(&r, 8, one, &[(one, 2, 2), (one, 4, 1)], &[Sign::Plus, Sign::Plus]);
        let rep = tower_report(&r, &p).unwrap();
        assert_eq!(rep.l_pi, 2);
        assert_eq!(rep.m_up, 13);
        let lift = lift_up(&r, &p, 13).unwrap();
        assert!(!lift.tempered);
        let mut expect = WdRep::from_terms([(Atom::chain(one, 2), 1), (Atom::chain(one, 4), 1)]);
        expect.add(Atom::chain_shifted(one, 3, HalfInt::new(1)), 1);
        expect.add(Atom::chain_shifted(one, 3, HalfInt::new(-1)), 1);
        assert_eq!(lift.parameter.phi, expect);
        // theta-eta: new S2 slot pinned by the tower constraint at l = 0,
        // S4 slot via the plus-side ratio: computed -1 and +1.
        assert_eq!(lift.parameter.eta.signs, vec![Sign::Minus, Sign::Plus]);
        assert_eq!(lift.standard_module.len(), 1);
        assert_eq!(lift.standard_module[0].steinberg, 3);
        assert_eq!(lift.standard_module[0].exponent, HalfInt::new(1));
        assert!(validate(&r, &lift.parameter).is_empty(), "{:?}", validate(&r, &lift.parameter));
    }

    #[test]
    fn tabulate_running_example() {
        let r = reg();
        let p = running(&r);
        let (rep, rows) = tabulate(&r, &p, 13).unwrap();
        assert_eq!(rep.m_down, 3);
        let mut down_nonzero = Vec::new();
        let mut up_nonzero = Vec::new();
        for row in &rows {
            match row {
                ThetaRow::Lift(l) => {
                    if l.tower == Some(Sign::Minus) {
                        down_nonzero.push(l.m);
                    } else {
                        up_nonzero.push(l.m);
                    }
                }
                ThetaRow::Zero { .. } => {}
            }
        }
        assert_eq!(down_nonzero, vec![3, 5, 7, 9, 11, 13]);
        assert_eq!(up_nonzero, vec![13]);
    }

    #[test]
    fn wrong_dimension_requests_error() {
        let r = reg();
        let p = running(&r);
        assert!(matches!(lift_down(&r, &p, 4), Err(Error::ParityMismatch { .. })));
        assert!(matches!(lift_down(&r, &p, 1), Err(Error::BelowFirstOccurrence { .. })));
        assert!(matches!(lift_up(&r, &p, 11), Err(Error::BelowFirstOccurrence { .. })));
    }
}
