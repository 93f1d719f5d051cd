//! Group contexts, parameter spaces, component groups with their characters,
//! parameter validation, contragredients and the metaplectic/odd-orthogonal
//! transfer.

use std::fmt;

use crate::chars::{AddCharTag, CharId, CharacterRegistry, FieldContext};
use crate::epsilon::{recipe_tag, root_number};
use crate::error::Error;
use crate::sign::Sign;
use crate::wd::{Atom, DualityClass, WdRep};
use crate::Result;

/// The isometry-group families handled by the calculator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Sp,
    OOdd,
    OEven,
    Mp,
    U,
}

impl GroupKind {
    pub fn parse(s: &str) -> Option<GroupKind> {
        match s {
            "Sp" => Some(GroupKind::Sp),
            "Oodd" => Some(GroupKind::OOdd),
            "Oeven" => Some(GroupKind::OEven),
            "Mp" => Some(GroupKind::Mp),
            "U" => Some(GroupKind::U),
            _ => None,
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::Sp => "Sp",
            GroupKind::OOdd => "Oodd",
            GroupKind::OEven => "Oeven",
            GroupKind::Mp => "Mp",
            GroupKind::U => "U",
        })
    }
}

/// A group in a fixed dual-pair orientation: the group lives on its own
/// space of dimension `dim`, with `chi_w` the character attached to that
/// space and `chi_v` the character attached to the partner tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupContext {
    pub kind: GroupKind,
    pub dim: u32,
    pub field: FieldContext,
    /// Hermitian sign of the partner space family.
    pub epsilon: Sign,
    pub chi_v: CharId,
    pub chi_w: CharId,
    /// Witt-tower sign of the group's own space; for families without a
    /// second space it records the representation-vs-det-twist choice and is
    /// `+` when no choice exists.
    pub tower: Sign,
    /// Parity of the partner dimension; needed over a quadratic field only.
    pub partner_parity_odd: Option<bool>,
}

impl GroupContext {
    pub fn new(
        kind: GroupKind,
        dim: u32,
        field: FieldContext,
        chi_v: CharId,
        chi_w: CharId,
        tower: Sign,
        partner_parity_odd: Option<bool>,
    ) -> GroupContext {
        let epsilon = match kind {
            GroupKind::Mp | GroupKind::Sp => Sign::Plus,
            GroupKind::OOdd | GroupKind::OEven => Sign::Minus,
            GroupKind::U => {
                // Symbolic: the hermitian sign never enters a formula over a
                // quadratic field; record + by convention.
                Sign::Plus
            }
        };
        GroupContext { kind, dim, field, epsilon, chi_v, chi_w, tower, partner_parity_odd }
    }

    pub fn epsilon0(&self) -> i32 {
        if self.field.is_quadratic() {
            0
        } else {
            self.epsilon.as_i8() as i32
        }
    }

    /// Parity (mod 2) of the partner-space dimensions in this dual pair.
    pub fn partner_parity(&self) -> u32 {
        match self.kind {
            GroupKind::Mp => 1,
            GroupKind::Sp => 0,
            GroupKind::OOdd | GroupKind::OEven => 0,
            GroupKind::U => {
                if self.partner_parity_odd.unwrap_or(self.dim % 2 == 1) {
                    1
                } else {
                    0
                }
            }
        }
    }

    /// kappa = 1 when l = n - m + epsilon_0 is odd, 2 when even.
    pub fn kappa(&self) -> u8 {
        let l_parity =
            (self.dim as i64 - self.partner_parity() as i64 + self.epsilon0() as i64).rem_euclid(2);
        if l_parity == 1 {
            1
        } else {
            2
        }
    }

    /// Expected dimension of a parameter for this group.
    pub fn param_dim(&self) -> u32 {
        match self.kind {
            GroupKind::Sp => self.dim + 1,
            GroupKind::OOdd => self.dim - 1,
            GroupKind::OEven | GroupKind::Mp | GroupKind::U => self.dim,
        }
    }

    /// (Conjugate) self-duality class required of a parameter.
    pub fn required_duality(&self) -> DualityClass {
        match self.kind {
            GroupKind::Sp | GroupKind::OEven => DualityClass::Orthogonal,
            GroupKind::OOdd | GroupKind::Mp => DualityClass::Symplectic,
            GroupKind::U => DualityClass::from_sign(Sign::from_parity(self.dim as i64 + 1), true),
        }
    }

    /// Required determinant character, when the parameter space pins one.
    pub fn required_det(&self, reg: &CharacterRegistry) -> Option<CharId> {
        match self.kind {
            GroupKind::Sp | GroupKind::OOdd | GroupKind::Mp => Some(reg.trivial()),
            GroupKind::OEven => Some(self.chi_w),
            GroupKind::U => None,
        }
    }

    /// Kind of the partner group receiving the theta lifts.
    pub fn target_kind(&self) -> GroupKind {
        match self.kind {
            GroupKind::Mp => GroupKind::OOdd,
            GroupKind::Sp => GroupKind::OEven,
            GroupKind::OOdd => GroupKind::Mp,
            GroupKind::OEven => GroupKind::Sp,
            GroupKind::U => GroupKind::U,
        }
    }

    /// Context of the partner group on a space of dimension `m`, lying on
    /// the tower named by `tower`.
    pub fn target_context(&self, m: u32, tower: Sign) -> GroupContext {
        GroupContext::new(
            self.target_kind(),
            m,
            self.field,
            self.chi_w,
            self.chi_v,
            tower,
            if self.field.is_quadratic() { Some(self.dim % 2 == 1) } else { None },
        )
    }

    /// Whether the source family has two Witt towers whose membership is
    /// read off eta(z); metaplectic groups have no such constraint and the
    /// symplectic group's constraint is eta(z) = +1.
    pub fn z_constraint(&self) -> ZConstraint {
        match self.kind {
            GroupKind::Mp => ZConstraint::Free,
            GroupKind::Sp => ZConstraint::Trivial,
            GroupKind::OOdd | GroupKind::OEven | GroupKind::U => ZConstraint::TowerSign,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZConstraint {
    Free,
    Trivial,
    TowerSign,
}

/// One basis slot of a component group: a distinct matching-type self-dual
/// atom with its multiplicity and dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub atom: Atom,
    pub mult: u32,
    pub dim: u32,
}

/// Free Z/2-module on the distinct self-dual-of-matching-type summands, in
/// canonical atom order.  Elements are bitmasks over the slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentGroup {
    pub slots: Vec<Slot>,
}

impl ComponentGroup {
    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    /// The central element: sum of the slots with odd multiplicity.
    pub fn z_mask(&self) -> u32 {
        let mut z = 0u32;
        for (i, s) in self.slots.iter().enumerate() {
            if s.mult % 2 == 1 {
                z |= 1 << i;
            }
        }
        z
    }

    /// det: A -> Z/2, sum of slot dimensions mod 2 over the mask.
    pub fn det_parity(&self, mask: u32) -> u32 {
        let mut d = 0;
        for (i, s) in self.slots.iter().enumerate() {
            if mask & (1 << i) != 0 {
                d += s.dim;
            }
        }
        d % 2
    }

    pub fn dim_of(&self, mask: u32) -> u32 {
        let mut d = 0;
        for (i, s) in self.slots.iter().enumerate() {
            if mask & (1 << i) != 0 {
                d += s.dim;
            }
        }
        d
    }

    /// The subrepresentation phi^a attached to a mask (one copy per slot).
    pub fn sub_rep(&self, mask: u32) -> WdRep {
        let mut rep = WdRep::empty();
        for (i, s) in self.slots.iter().enumerate() {
            if mask & (1 << i) != 0 {
                rep.add(s.atom.clone(), 1);
            }
        }
        rep
    }

    pub fn slot_of(&self, atom: &Atom) -> Option<usize> {
        self.slots.iter().position(|s| &s.atom == atom)
    }

    pub fn mask_of(&self, atom: &Atom) -> Option<u32> {
        self.slot_of(atom).map(|i| 1 << i)
    }
}

/// Compute the component group of `phi` in the context `ctx`: the basis
/// consists of the distinct tempered atoms that are (conjugate) self-dual of
/// the same type as the parameter space; everything else is excluded.
pub fn component_group(reg: &CharacterRegistry, phi: &WdRep, ctx: &GroupContext) -> Result<ComponentGroup> {
    component_group_of(reg, phi, ctx.required_duality())
}

/// Component group over an explicit duality type.
pub fn component_group_of(reg: &CharacterRegistry, phi: &WdRep, required: DualityClass) -> Result<ComponentGroup> {
    let mut slots = Vec::new();
    for (atom, m) in phi.terms() {
        if !atom.is_tempered() {
            continue;
        }
        if atom.duality(reg)? == required {
            slots.push(Slot { atom: atom.clone(), mult: m, dim: atom.dim(reg)? });
        }
    }
    if slots.len() > 32 {
        return Err(Error::Other("component group rank exceeds 32".into()));
    }
    Ok(ComponentGroup { slots })
}

/// A character of a component group: one sign per basis slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaCharacter {
    pub signs: Vec<Sign>,
}

impl EtaCharacter {
    pub fn new(signs: Vec<Sign>) -> EtaCharacter {
        EtaCharacter { signs }
    }

    pub fn rank(&self) -> usize {
        self.signs.len()
    }

    /// Evaluate on a subset-sum element.
    pub fn eval(&self, mask: u32) -> Sign {
        let mut s = Sign::Plus;
        for (i, v) in self.signs.iter().enumerate() {
            if mask & (1 << i) != 0 {
                s *= *v;
            }
        }
        s
    }
}

/// A complete parameter for one group of the menagerie.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnhancedParameter {
    pub ctx: GroupContext,
    pub phi: WdRep,
    pub eta: EtaCharacter,
    /// Central sign; present exactly for odd orthogonal groups.
    pub nu: Option<Sign>,
    pub tempered: bool,
}

impl EnhancedParameter {
    pub fn component_group(&self, reg: &CharacterRegistry) -> Result<ComponentGroup> {
        component_group(reg, &self.phi, &self.ctx)
    }

    pub fn eta_z(&self, reg: &CharacterRegistry) -> Result<Sign> {
        let a = self.component_group(reg)?;
        Ok(self.eta.eval(a.z_mask()))
    }
}

/// A single validation failure; `validate` returns all of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    WrongDimension { expected: u32, found: u32 },
    WrongDuality { required: DualityClass },
    WrongDeterminant { required: String, found: String },
    EtaRankMismatch { expected: usize, found: usize },
    SpImageConstraint,
    TowerMismatch { expected: Sign, found: Sign },
    NuPresence { expected: bool },
    TemperedFlag { has_shifts: bool },
    FieldMismatch(String),
    CharConstraint(String),
    DualityData(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongDimension { expected, found } => {
                write!(f, "parameter dimension {found} differs from the required {expected}")
            }
            Violation::WrongDuality { required } => {
                write!(f, "parameter does not carry a {required} structure")
            }
            Violation::WrongDeterminant { required, found } => {
                write!(f, "determinant character is {found}, required {required}")
            }
            Violation::EtaRankMismatch { expected, found } => {
                write!(f, "eta assigns {found} signs but the component group has rank {expected}")
            }
            Violation::SpImageConstraint => f.write_str("Sp image constraint: eta(z) must be +1"),
            Violation::TowerMismatch { expected, found } => {
                write!(f, "eta(z) = {found} does not match the declared tower sign {expected}")
            }
            Violation::NuPresence { expected } => {
                if *expected {
                    f.write_str("odd orthogonal parameters need a central sign nu")
                } else {
                    f.write_str("nu is only meaningful for odd orthogonal groups")
                }
            }
            Violation::TemperedFlag { has_shifts } => {
                if *has_shifts {
                    f.write_str("tempered flag set but the parameter has nonzero exponents")
                } else {
                    f.write_str("tempered flag unset but all exponents vanish")
                }
            }
            Violation::FieldMismatch(s) | Violation::CharConstraint(s) | Violation::DualityData(s) => {
                f.write_str(s)
            }
        }
    }
}

/// Check the full parameter-space membership conditions; returns every
/// violation rather than failing fast.
pub fn validate(reg: &CharacterRegistry, p: &EnhancedParameter) -> Vec<Violation> {
    let mut out = Vec::new();
    let ctx = &p.ctx;
    // Field / kind coherence.
    match ctx.kind {
        GroupKind::U => {
            if !ctx.field.is_quadratic() {
                out.push(Violation::FieldMismatch("unitary groups need a quadratic extension".into()));
            }
        }
        _ => {
            if ctx.field.is_quadratic() {
                out.push(Violation::FieldMismatch(format!("{} groups live over E = F", ctx.kind)));
            }
        }
    }
    match ctx.kind {
        GroupKind::Mp => {
            if ctx.dim % 2 != 0 {
                out.push(Violation::FieldMismatch("metaplectic groups have even dimension".into()));
            }
            if !reg.is_trivial(ctx.chi_w) {
                out.push(Violation::CharConstraint("chi_W is trivial for a symplectic space".into()));
            }
        }
        GroupKind::Sp => {
            if ctx.dim % 2 != 0 {
                out.push(Violation::FieldMismatch("symplectic groups have even dimension".into()));
            }
            if !reg.is_trivial(ctx.chi_w) {
                out.push(Violation::CharConstraint("chi_W is trivial for a symplectic space".into()));
            }
        }
        GroupKind::OOdd => {
            if ctx.dim % 2 != 1 {
                out.push(Violation::FieldMismatch("odd orthogonal groups have odd dimension".into()));
            }
            if !reg.is_trivial(ctx.chi_v) {
                out.push(Violation::CharConstraint("chi_V is trivial for a symplectic partner".into()));
            }
        }
        GroupKind::OEven => {
            if ctx.dim % 2 != 0 {
                out.push(Violation::FieldMismatch("even orthogonal groups have even dimension".into()));
            }
            if !reg.is_trivial(ctx.chi_v) {
                out.push(Violation::CharConstraint("chi_V is trivial for a symplectic partner".into()));
            }
        }
        GroupKind::U => {
            // chi_V and chi_W must restrict per the partner/own parities.
            let own_odd = ctx.dim % 2 == 1;
            let partner_odd = ctx.partner_parity() == 1;
            for (chi, odd, name) in [(ctx.chi_v, partner_odd, "chi_V"), (ctx.chi_w, own_odd, "chi_W")] {
                match reg.get(chi).conj_restriction.conj_sign() {
                    Some(s) => {
                        let want = if odd { Sign::Minus } else { Sign::Plus };
                        if s != want {
                            out.push(Violation::CharConstraint(format!(
                                "{name} must restrict to omega^{} on F^x",
                                if odd { 1 } else { 0 }
                            )));
                        }
                    }
                    None => out.push(Violation::CharConstraint(format!(
                        "{name} needs a declared restriction class"
                    ))),
                }
            }
        }
    }
    // Dimension.
    match p.phi.dim(reg) {
        Ok(d) => {
            if d != ctx.param_dim() {
                out.push(Violation::WrongDimension { expected: ctx.param_dim(), found: d });
            }
        }
        Err(e) => out.push(Violation::DualityData(e.to_string())),
    }
    // Duality type.
    let required = ctx.required_duality();
    match p.phi.admits_sign(required.sign().unwrap(), reg) {
        Ok(true) => {}
        Ok(false) => out.push(Violation::WrongDuality { required }),
        Err(e) => out.push(Violation::DualityData(e.to_string())),
    }
    // Determinant.
    if let Some(req) = ctx.required_det(reg) {
        match p.phi.det_char(reg) {
            Ok(found) => {
                if found != req {
                    out.push(Violation::WrongDeterminant {
                        required: reg.name(req).to_string(),
                        found: reg.name(found).to_string(),
                    });
                }
            }
            Err(e) => out.push(Violation::DualityData(e.to_string())),
        }
    }
    // Component group and eta.
    match component_group(reg, &p.phi, ctx) {
        Ok(a) => {
            if p.eta.rank() != a.rank() {
                out.push(Violation::EtaRankMismatch { expected: a.rank(), found: p.eta.rank() });
            } else {
                let z = p.eta.eval(a.z_mask());
                match ctx.z_constraint() {
                    ZConstraint::Free => {}
                    ZConstraint::Trivial => {
                        if z != Sign::Plus {
                            out.push(Violation::SpImageConstraint);
                        }
                    }
                    ZConstraint::TowerSign => {
                        if z != ctx.tower {
                            out.push(Violation::TowerMismatch { expected: ctx.tower, found: z });
                        }
                    }
                }
            }
        }
        Err(e) => out.push(Violation::DualityData(e.to_string())),
    }
    // nu presence.
    let needs_nu = ctx.kind == GroupKind::OOdd;
    if p.nu.is_some() != needs_nu {
        out.push(Violation::NuPresence { expected: needs_nu });
    }
    // tempered flag coherence.
    let has_shifts = !p.phi.is_tempered();
    if p.tempered == has_shifts {
        out.push(Violation::TemperedFlag { has_shifts });
    }
    out
}

/// eta twist picked up by the contragredient, per group family.
fn contragredient_eta_factor(
    reg: &CharacterRegistry,
    ctx: &GroupContext,
    a: &ComponentGroup,
    mask: u32,
) -> Result<Sign> {
    match ctx.kind {
        // Symplectic own form: det(phi^a)(-1).
        GroupKind::Sp => a.sub_rep(mask).det_at_minus1(reg),
        GroupKind::U if ctx.dim % 2 == 0 => {
            let omega = ctx.field.omega_at_minus1().expect("quadratic field");
            Ok(omega.pow(a.dim_of(mask)))
        }
        _ => Ok(Sign::Plus),
    }
}

/// The parameter of the contragredient representation.
pub fn contragredient(reg: &CharacterRegistry, p: &EnhancedParameter) -> Result<EnhancedParameter> {
    let a = p.component_group(reg)?;
    if p.ctx.kind == GroupKind::Mp {
        // phi goes to phi (x) chi_{-1}; eta picks up the transfer ratio.
        let chi = reg.chi_minus1()?;
        return twist_transfer(reg, p, chi, p.ctx.clone());
    }
    let phi = if reg.field.is_quadratic() { p.phi.conj_dual(reg)? } else { p.phi.dual(reg)? };
    // The dual of a matching-type atom is itself, so the basis is canonically
    // identified slot by slot.
    let mut signs = Vec::with_capacity(a.rank());
    for i in 0..a.rank() {
        let f = contragredient_eta_factor(reg, &p.ctx, &a, 1 << i)?;
        signs.push(p.eta.signs[i] * f);
    }
    let mut ctx = p.ctx.clone();
    // Tower membership follows eta(z).
    let eta = EtaCharacter::new(signs);
    if ctx.z_constraint() == ZConstraint::TowerSign {
        ctx.tower = eta.eval(a.z_mask());
    }
    Ok(EnhancedParameter { ctx, phi, eta, nu: p.nu, tempered: p.tempered })
}

/// Shared engine for the quadratic-twist transfers: phi goes to
/// phi (x) chi, and eta multiplies by
/// eps(phi^a) eps(phi^a (x) chi) chi(-1)^{dim(phi^a)/2} slot by slot.
fn twist_transfer(
    reg: &CharacterRegistry,
    p: &EnhancedParameter,
    chi: CharId,
    target_ctx: GroupContext,
) -> Result<EnhancedParameter> {
    let a = p.component_group(reg)?;
    let tag = recipe_tag(reg);
    let triv = reg.trivial();
    let mut source_signs = Vec::with_capacity(a.rank());
    for i in 0..a.rank() {
        let sub = a.sub_rep(1 << i);
        let e1 = root_number(reg, &sub, triv, &tag)?;
        let e2 = root_number(reg, &sub, chi, &tag)?;
        let dim = a.slots[i].dim;
        debug_assert_eq!(dim % 2, 0, "symplectic atoms have even dimension");
        let ratio = e1 * e2 * reg.value_at_minus1(chi).pow(dim / 2);
        source_signs.push(p.eta.signs[i] * ratio);
    }
    let phi = p.phi.twist(chi, reg);
    let mut ctx = target_ctx;
    // Reorder the signs into the twisted parameter's canonical basis order.
    let a_new = component_group(reg, &phi, &ctx)?;
    let inv = reg.inverse(chi);
    let mut signs = Vec::with_capacity(a_new.rank());
    for slot in &a_new.slots {
        let back = match &slot.atom.kind {
            crate::wd::AtomKind::Chain { chi: c, k } => Atom::chain(reg.product(*c, inv), *k),
            crate::wd::AtomKind::Generic { label, twist, k } => {
                Atom::generic(label, reg.product(*twist, inv), *k)
            }
        };
        let j = a
            .slot_of(&back)
            .ok_or_else(|| Error::Other("slot mismatch under the twist transfer".into()))?;
        signs.push(source_signs[j]);
    }
    let eta = EtaCharacter::new(signs);
    if ctx.z_constraint() == ZConstraint::TowerSign {
        ctx.tower = eta.eval(a_new.z_mask());
    }
    let nu = match ctx.kind {
        GroupKind::OOdd => Some(odd_orthogonal_central_sign_with(reg, p, chi)?),
        _ => None,
    };
    Ok(EnhancedParameter { ctx, phi, eta, nu, tempered: p.tempered })
}

/// The equal-rank transfer between metaplectic parameters and odd orthogonal
/// parameters of discriminant class `c` (in either direction): phi twists by
/// chi_c and eta multiplies by the displayed epsilon ratio.
pub fn mp_o_transfer(reg: &CharacterRegistry, p: &EnhancedParameter, chi_c: CharId) -> Result<EnhancedParameter> {
    match p.ctx.kind {
        GroupKind::Mp => {
            let target = GroupContext::new(
                GroupKind::OOdd,
                p.ctx.dim + 1,
                p.ctx.field,
                reg.trivial(),
                chi_c,
                Sign::Plus,
                None,
            );
            twist_transfer(reg, p, chi_c, target)
        }
        GroupKind::OOdd => {
            if p.ctx.chi_w != chi_c {
                return Err(Error::ConfigMismatch(format!(
                    "transfer class {} differs from the declared discriminant character {}",
                    reg.name(chi_c),
                    reg.name(p.ctx.chi_w)
                )));
            }
            let target = GroupContext::new(
                GroupKind::Mp,
                p.ctx.dim - 1,
                p.ctx.field,
                chi_c,
                reg.trivial(),
                Sign::Plus,
                None,
            );
            twist_transfer(reg, p, chi_c, target)
        }
        _ => Err(Error::ConfigMismatch("transfer applies to Mp and odd orthogonal parameters".into())),
    }
}

/// The parameter of the det twist of an orthogonal-group representation.
/// For odd orthogonal groups the first name is shared and only the central
/// sign flips; for even orthogonal groups the first name multiplies by the
/// det map of the component group, which matches the criterion that the
/// twist acts freely exactly when some basis atom has odd dimension.
pub fn det_twist(reg: &CharacterRegistry, p: &EnhancedParameter) -> Result<EnhancedParameter> {
    match p.ctx.kind {
        GroupKind::OOdd => {
            let nu = p.nu.ok_or_else(|| Error::InvalidParameter("odd orthogonal parameter lacks nu".into()))?;
            Ok(EnhancedParameter { nu: Some(-nu), ..p.clone() })
        }
        GroupKind::OEven => {
            let a = p.component_group(reg)?;
            let signs = p
                .eta
                .signs
                .iter()
                .zip(a.slots.iter())
                .map(|(s, slot)| *s * Sign::from_parity(slot.dim as i64))
                .collect();
            let eta = EtaCharacter::new(signs);
            let mut ctx = p.ctx.clone();
            ctx.tower = eta.eval(a.z_mask());
            Ok(EnhancedParameter { ctx, eta, ..p.clone() })
        }
        _ => Err(Error::ConfigMismatch("det twist applies to orthogonal-group parameters".into())),
    }
}

/// Central sign of every odd orthogonal theta lift of a metaplectic
/// parameter: eta(z) * eps(phi) * chi_V(-1)^{n/2}, independent of the target
/// dimension.
pub fn odd_orthogonal_central_sign(reg: &CharacterRegistry, p: &EnhancedParameter) -> Result<Sign> {
    if p.ctx.kind != GroupKind::Mp {
        return Err(Error::ConfigMismatch("central sign formula applies to metaplectic sources".into()));
    }
    odd_orthogonal_central_sign_with(reg, p, p.ctx.chi_v)
}

fn odd_orthogonal_central_sign_with(
    reg: &CharacterRegistry,
    p: &EnhancedParameter,
    chi_v: CharId,
) -> Result<Sign> {
    let a = p.component_group(reg)?;
    let eps = root_number(reg, &p.phi, reg.trivial(), &AddCharTag::Psi)?;
    Ok(p.eta.eval(a.z_mask()) * eps * reg.value_at_minus1(chi_v).pow(p.ctx.dim / 2))
}

/// Which member of {sigma, sigma (x) det} heads the going-down tower of an
/// odd orthogonal parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DownTowerChoice {
    SelfFirst,
    DetTwistFirst,
}

/// For an odd orthogonal parameter (phi, eta, nu): the given representation
/// heads the going-down tower exactly when nu = eta(z) * eps(phi).
pub fn odd_orthogonal_down_tower(reg: &CharacterRegistry, p: &EnhancedParameter) -> Result<DownTowerChoice> {
    if p.ctx.kind != GroupKind::OOdd {
        return Err(Error::ConfigMismatch("down-tower test applies to odd orthogonal parameters".into()));
    }
    let nu = p.nu.ok_or_else(|| Error::InvalidParameter("odd orthogonal parameter lacks nu".into()))?;
    let a = p.component_group(reg)?;
    let eps = root_number(reg, &p.phi, reg.trivial(), &AddCharTag::Psi)?;
    if nu == p.eta.eval(a.z_mask()) * eps {
        Ok(DownTowerChoice::SelfFirst)
    } else {
        Ok(DownTowerChoice::DetTwistFirst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sign::HalfInt;

    fn reg() -> CharacterRegistry {
        CharacterRegistry::default_split(false)
    }

    fn mp_ctx(r: &CharacterRegistry, n: u32, chi_v: CharId) -> GroupContext {
        GroupContext::new(GroupKind::Mp, n, FieldContext::split(), chi_v, r.trivial(), Sign::Plus, None)
    }

    fn mp24(r: &CharacterRegistry, e2: Sign, e4: Sign) -> EnhancedParameter {
        let one = r.trivial();
        let phi = WdRep::from_terms([(Atom::chain(one, 2), 1), (Atom::chain(one, 4), 1)]);
        EnhancedParameter {
            ctx: mp_ctx(r, 6, one),
            phi,
            eta: EtaCharacter::new(vec![e2, e4]),
            nu: None,
            tempered: true,
        }
    }

    #[test]
    fn component_group_examples() {
        let r = reg();
        let one = r.trivial();
        let p = mp24(&r, Sign::Plus, Sign::Minus);
        let a = p.component_group(&r).unwrap();
        assert_eq!(a.rank(), 2);
        assert_eq!(a.z_mask(), 0b11);
        // doubled atom: rank 1, z = 0
        let phi2 = WdRep::from_terms([(Atom::chain(one, 2), 2)]);
        let ctx = mp_ctx(&r, 4, one);
        let a2 = component_group(&r, &phi2, &ctx).unwrap();
        assert_eq!(a2.rank(), 1);
        assert_eq!(a2.z_mask(), 0);
        // shifted pairs contribute no slot
        let u = r.by_name("u").unwrap();
        let phi3 = WdRep::from_terms([
            (Atom::chain(one, 2), 1),
            (Atom::chain_shifted(u, 1, HalfInt::new(1)), 1),
            (Atom::chain_shifted(u, 1, HalfInt::new(-1)), 1),
        ]);
        let ctx3 = mp_ctx(&r, 4, one);
        let a3 = component_group(&r, &phi3, &ctx3).unwrap();
        assert_eq!(a3.rank(), 1);
    }

    #[test]
    fn det_map_is_additive() {
        let r = reg();
        let one = r.trivial();
        let pi = r.by_name("pi").unwrap();
        let phi = WdRep::from_terms([
            (Atom::chain(one, 1), 1),
            (Atom::chain(pi, 1), 1),
            (Atom::chain(one, 3), 1),
        ]);
        let ctx = GroupContext::new(GroupKind::Sp, 4, FieldContext::split(), one, one, Sign::Plus, None);
        let a = component_group(&r, &phi, &ctx).unwrap();
        for m1 in 0..(1u32 << a.rank()) {
            for m2 in 0..(1u32 << a.rank()) {
                assert_eq!(
                    a.det_parity(m1 ^ m2),
                    (a.det_parity(m1) + a.det_parity(m2)) % 2
                );
            }
        }
    }

    #[test]
    fn validate_examples() {
        let r = reg();
        let one = r.trivial();
        let ok = mp24(&r, Sign::Plus, Sign::Minus);
        assert!(validate(&r, &ok).is_empty(), "{:?}", validate(&r, &ok));
        // Sp with eta(z) = -1 violates the image constraint
        let phi = WdRep::from_terms([(Atom::chain(one, 1), 1), (Atom::chain(one, 3), 1), (Atom::chain(one, 5), 1)]);
        let ctx = GroupContext::new(GroupKind::Sp, 8, FieldContext::split(), one, one, Sign::Plus, None);
        let bad = EnhancedParameter {
            ctx,
            phi,
            eta: EtaCharacter::new(vec![Sign::Plus, Sign::Plus, Sign::Minus]),
            nu: None,
            tempered: true,
        };
        assert!(validate(&r, &bad).contains(&Violation::SpImageConstraint));
        // even orthogonal with det(phi) != chi_W
        let pi = r.by_name("pi").unwrap();
        let phi = WdRep::from_terms([(Atom::chain(one, 1), 1), (Atom::chain(pi, 1), 1)]);
        let ctx = GroupContext::new(GroupKind::OEven, 2, FieldContext::split(), one, one, Sign::Plus, None);
        let p = EnhancedParameter {
            ctx,
            phi,
            eta: EtaCharacter::new(vec![Sign::Plus, Sign::Plus]),
            nu: None,
            tempered: true,
        };
        assert!(validate(&r, &p).iter().any(|v| matches!(v, Violation::WrongDeterminant { .. })));
    }

    #[test]
    fn contragredient_examples() {
        let r = reg();
        // split, epsilon = +1 source (Sp partner sign +1): unchanged
        let one = r.trivial();
        let pi = r.by_name("pi").unwrap();
        let phi = WdRep::from_terms([(Atom::chain(one, 1), 1), (Atom::chain(pi, 1), 1), (Atom::chain(pi, 3), 1)]);
        let ctx = GroupContext::new(GroupKind::OEven, 6, FieldContext::split(), one, phi.det_char(&r).unwrap(), Sign::Plus, None);
        let p = EnhancedParameter {
            ctx,
            phi,
            eta: EtaCharacter::new(vec![Sign::Plus, Sign::Minus, Sign::Plus]),
            nu: None,
            tempered: true,
        };
        let q = contragredient(&r, &p).unwrap();
        assert_eq!(q.eta, p.eta);
        // symplectic group: eta flips where det(phi^a)(-1) = -1
        let phi = WdRep::from_terms([(Atom::chain(one, 1), 1), (Atom::chain(pi, 1), 1), (Atom::chain(one, 3), 1)]);
        let ctx = GroupContext::new(GroupKind::Sp, 4, FieldContext::split(), one, one, Sign::Plus, None);
        let p = EnhancedParameter {
            ctx,
            phi: phi.clone(),
            eta: EtaCharacter::new(vec![Sign::Plus, Sign::Plus, Sign::Plus]),
            nu: None,
            tempered: true,
        };
        let q = contragredient(&r, &p).unwrap();
        // pi(-1) = -1 in this registry, so the pi-slot flips
        let a = p.component_group(&r).unwrap();
        let slot = a.slot_of(&Atom::chain(pi, 1)).unwrap();
        assert_eq!(q.eta.signs[slot], Sign::Minus);
        // involution
        let qq = contragredient(&r, &q).unwrap();
        assert_eq!(qq.eta, p.eta);
        assert_eq!(qq.phi, p.phi);
    }

    #[test]
    fn mp_o_transfer_examples() {
        let r = reg();
        let one = r.trivial();
        let u = r.by_name("u").unwrap();
        let p = mp24(&r, Sign::Plus, Sign::Minus);
        // trivial class: eta unchanged
        let t = mp_o_transfer(&r, &p, one).unwrap();
        assert_eq!(t.eta, p.eta);
        assert_eq!(t.ctx.kind, GroupKind::OOdd);
        assert_eq!(t.ctx.dim, 7);
        // nontrivial class with chi(-1) = +1: the S2 slot ratio is
        // eps(S2) eps(u.S2) = (-1)(+1) = -1
        let t = mp_o_transfer(&r, &p, u).unwrap();
        let a = p.component_group(&r).unwrap();
        let s2 = a.slot_of(&Atom::chain(one, 2)).unwrap();
        assert_eq!(t.eta.signs[s2], -p.eta.signs[s2]);
        // round trip
        let back = mp_o_transfer(&r, &t, u).unwrap();
        assert_eq!(back.phi, p.phi);
        assert_eq!(back.eta, p.eta);
        assert_eq!(back.ctx.kind, GroupKind::Mp);
    }

    #[test]
    fn central_sign_examples() {
        let r = reg();
        let p = mp24(&r, Sign::Plus, Sign::Minus);
        // eps(S2)eps(S4) = +1, eta(z) = -1, chi_V trivial
        assert_eq!(odd_orthogonal_central_sign(&r, &p).unwrap(), Sign::Minus);
        let p2 = mp24(&r, Sign::Plus, Sign::Plus);
        assert_eq!(odd_orthogonal_central_sign(&r, &p2).unwrap(), Sign::Plus);
    }

    #[test]
    fn down_tower_choice() {
        let r = reg();
        let one = r.trivial();
        // O(5) parameter phi = S2 + S2' is not allowed (distinct atoms needed);
        // use phi = S4 with eta = +.
        let phi = WdRep::from_terms([(Atom::chain(one, 4), 1)]);
        let ctx = GroupContext::new(GroupKind::OOdd, 5, FieldContext::split(), one, one, Sign::Plus, None);
        let eps = root_number(&r, &phi, one, &AddCharTag::Psi).unwrap();
        let p = EnhancedParameter {
            ctx,
            phi,
            eta: EtaCharacter::new(vec![Sign::Plus]),
            nu: Some(eps),
            tempered: true,
        };
        assert_eq!(odd_orthogonal_down_tower(&r, &p).unwrap(), DownTowerChoice::SelfFirst);
        let mut q = p.clone();
        q.nu = Some(-eps);
        assert_eq!(odd_orthogonal_down_tower(&r, &q).unwrap(), DownTowerChoice::DetTwistFirst);
    }
}
