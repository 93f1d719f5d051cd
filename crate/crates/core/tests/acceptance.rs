//! Acceptance suite: one test per stated criterion, each printing a
//! pass/fail line.  Every sweep runs at the full advertised size
//! (four-character registries, SL2 sizes up to 8, parameter dimension up
//! to 12, all eta characters).

use theta_core::chars::CharacterRegistry;
use theta_core::epsilon::{recipe_tag, root_number};
use theta_core::fmt_violations;
use theta_core::gp::prasad_almost_equal_rank;
use theta_core::llc::{validate, EnhancedParameter, EtaCharacter, GroupKind};
use theta_core::oracle::{check_conservation, check_roundtrip, check_twisted_eps, check_validity};
use theta_core::sign::Sign;
use theta_core::theta::{lift_down_on, lift_up, tabulate, tower_report, ThetaRow};
use theta_core::universe::{for_each_parameter, Limits};
use theta_core::wd::{Atom, AtomKind};

const FULL: Limits = Limits { max_dim: 12, max_sl2: 8 };

fn report(criterion: &str, checked: u64, failures: &[String]) {
    if failures.is_empty() {
        println!("criterion {criterion}: PASS ({checked} checked)");
    } else {
        println!("criterion {criterion}: FAIL ({} failures of {checked})", failures.len());
        for f in failures.iter().take(10) {
            println!("  {f}");
        }
    }
    assert!(failures.is_empty(), "criterion {criterion} failed: {:?}", &failures[..failures.len().min(5)]);
}

#[test]
fn criterion_1_conservation_relation() {
    let out = check_conservation(FULL);
    report("1 (conservation relation)", out.checked, &out.failures);
}

#[test]
fn criterion_2_twisted_epsilon_oracle() {
    let out = check_twisted_eps(FULL, 8);
    report("2 (twisted-epsilon oracle)", out.checked, &out.failures);
}

#[test]
fn criterion_3_intro_specialization() {
    // Metaplectic-orthogonal pairs with trivial chi_V and multiplicity-free
    // parameters: the going-down tower is eta(z), and the lift ratios are -1
    // exactly on the trivial-character even slots inside the stated range.
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for_each_parameter(FULL, |reg, p| {
        if p.ctx.kind != GroupKind::Mp || !reg.is_trivial(p.ctx.chi_v) {
            return;
        }
        let a = p.component_group(reg).unwrap();
        let discrete = p.phi.terms().all(|(_, m)| m == 1)
            && p.phi.dim(reg).unwrap() == a.slots.iter().map(|s| s.dim).sum::<u32>();
        if !discrete {
            return;
        }
        checked += 1;
        let rep = tower_report(reg, p).unwrap();
        let eta_z = p.eta.eval(a.z_mask());
        if rep.alpha != Some(eta_z) {
            failures.push(format!(
                "Mp({}) {}: alpha {:?} != eta(z) {}",
                p.ctx.dim,
                p.phi.display(reg),
                rep.alpha,
                eta_z
            ));
            return;
        }
        let alpha = rep.alpha.unwrap();
        // Down-tower ratios for l >= 2.
        let n = p.ctx.dim as i32;
        let mut m = rep.m_down;
        while (n - m as i32 + 1) >= 2 {
            let l = (n - m as i32 + 1) as u32;
            let lift = lift_down_on(reg, p, m, alpha, &rep).unwrap();
            let a_theta = lift.parameter.component_group(reg).unwrap();
            for (i, slot) in a_theta.slots.iter().enumerate() {
                let j = a.slot_of(&slot.atom).unwrap();
                let ratio = lift.parameter.eta.signs[i] * p.eta.signs[j];
                let expected = match &slot.atom.kind {
                    AtomKind::Chain { chi, k } if reg.is_trivial(*chi) && k % 2 == 0 && *k <= l - 2 => {
                        Sign::Minus
                    }
                    _ => Sign::Plus,
                };
                if ratio != expected {
                    failures.push(format!(
                        "Mp({}) {} down m={m}: slot {} ratio {} expected {}",
                        p.ctx.dim,
                        p.phi.display(reg),
                        slot.atom.canonical_key(reg),
                        ratio,
                        expected
                    ));
                }
            }
            m += 2;
        }
        // Up-tower ratios at the first occurrence.
        let l = rep.l_pi as u32;
        let lift = lift_up(reg, p, rep.m_up).unwrap();
        let a_theta = lift.parameter.component_group(reg).unwrap();
        for (i, slot) in a_theta.slots.iter().enumerate() {
            let Some(j) = a.slot_of(&slot.atom) else { continue };
            let ratio = lift.parameter.eta.signs[i] * p.eta.signs[j];
            let expected = match &slot.atom.kind {
                AtomKind::Chain { chi, k } if reg.is_trivial(*chi) && k % 2 == 0 && *k <= l => Sign::Minus,
                _ => Sign::Plus,
            };
            if ratio != expected {
                failures.push(format!(
                    "Mp({}) {} up m={}: slot {} ratio {} expected {}",
                    p.ctx.dim,
                    p.phi.display(reg),
                    rep.m_up,
                    slot.atom.canonical_key(reg),
                    ratio,
                    expected
                ));
            }
        }
    });
    report("3 (intro-theorem specialization)", checked, &failures);
}

#[test]
fn criterion_4_validity_of_all_lifts() {
    let out = check_validity(FULL, 4);
    report("4 (validity of all lifts)", out.checked, &out.failures);
}

#[test]
fn criterion_5_round_trips() {
    let out = check_roundtrip(FULL);
    report("5 (round trips)", out.checked, &out.failures);
}

#[test]
fn criterion_6_up_tower_temperedness() {
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for_each_parameter(FULL, |reg, p| {
        let rep = tower_report(reg, p).unwrap();
        if rep.l_pi < 0 {
            return;
        }
        checked += 1;
        let l = rep.l_pi as u32;
        let lift = match lift_up(reg, p, rep.m_up) {
            Ok(l) => l,
            Err(e) => {
                failures.push(format!("{} dim {}: up lift failed: {e}", p.ctx.kind, p.ctx.dim));
                return;
            }
        };
        let mult = if l > 0 { p.phi.multiplicity(p.ctx.chi_v, l) } else { 0 };
        let expect_tempered = l == 0 || mult % 2 == 1;
        if lift.tempered != expect_tempered {
            failures.push(format!(
                "{} dim {} {}: tempered flag {} but multiplicity rule says {}",
                p.ctx.kind,
                p.ctx.dim,
                p.phi.display(reg),
                lift.tempered,
                expect_tempered
            ));
            return;
        }
        if expect_tempered {
            return;
        }
        // Non-tempered branch: the recursive first name must agree with the
        // direct transport from the stripped parameter, slot by slot.
        let h = mult / 2;
        let l_atom = Atom::chain(p.ctx.chi_v, l);
        let mut phi0 = p.phi.clone();
        phi0.remove(&l_atom, 2 * h, reg).unwrap();
        let a = p.component_group(reg).unwrap();
        let dropped = a.slot_of(&l_atom).unwrap();
        let eta0 = EtaCharacter::new(
            p.eta
                .signs
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != dropped)
                .map(|(_, s)| *s)
                .collect(),
        );
        let mut ctx0 = p.ctx.clone();
        ctx0.dim -= 2 * l * h;
        let p0 = EnhancedParameter { ctx: ctx0, phi: phi0, eta: eta0, nu: p.nu, tempered: true };
        let m0 = rep.m_up - 2 * l * h - 2;
        let rep0 = tower_report(reg, &p0).unwrap();
        let rec = if rep0.l_pi >= 0 {
            lift_up(reg, &p0, m0)
        } else {
            rep0.alpha
                .map(|al| lift_down_on(reg, &p0, m0, al, &rep0))
                .unwrap_or_else(|| lift_down_on(reg, &p0, m0, -rep.alpha.unwrap(), &rep0))
        };
        let rec = match rec {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("{} dim {}: stripped lift failed: {e}", p.ctx.kind, p.ctx.dim));
                return;
            }
        };
        let a_lift = lift.parameter.component_group(reg).unwrap();
        let a_rec = rec.parameter.component_group(reg).unwrap();
        for (i, slot) in a_rec.slots.iter().enumerate() {
            match a_lift.slot_of(&slot.atom) {
                Some(j) => {
                    if rec.parameter.eta.signs[i] != lift.parameter.eta.signs[j] {
                        failures.push(format!(
                            "{} dim {} {}: recursive eta disagrees on {}",
                            p.ctx.kind,
                            p.ctx.dim,
                            p.phi.display(reg),
                            slot.atom.canonical_key(reg)
                        ));
                    }
                }
                None => failures.push(format!(
                    "{} dim {}: slot {} missing after transport",
                    p.ctx.kind,
                    p.ctx.dim,
                    slot.atom.canonical_key(reg)
                )),
            }
        }
    });
    report("6 (up-tower temperedness and recursion)", checked, &failures);
}

#[test]
fn criterion_7_cross_recipe_coherence() {
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for_each_parameter(FULL, |reg, p| {
        if p.ctx.kappa() != 1 {
            return;
        }
        let out = match prasad_almost_equal_rank(reg, p) {
            Ok(o) => o,
            Err(e) => {
                failures.push(format!("{} dim {}: recipe failed: {e}", p.ctx.kind, p.ctx.dim));
                return;
            }
        };
        let rep = tower_report(reg, p).unwrap();
        let (_, rows) = tabulate(reg, p, out.m).unwrap();
        for lift in &out.lifts {
            checked += 1;
            let matching: Vec<_> = rows
                .iter()
                .filter_map(|r| match r {
                    ThetaRow::Lift(l) if l.m == out.m => Some(l),
                    _ => None,
                })
                .filter(|l| match (lift.form, rep.alpha) {
                    (Some(f), _) => l.tower == Some(f),
                    (None, _) => true,
                })
                .collect();
            let Some(row) = matching.first() else {
                failures.push(format!(
                    "{} dim {} {}: no tabulated row matches form {:?} at m = {}",
                    p.ctx.kind,
                    p.ctx.dim,
                    p.phi.display(reg),
                    lift.form,
                    out.m
                ));
                continue;
            };
            if row.parameter.phi != lift.parameter.phi || row.parameter.eta != lift.parameter.eta {
                failures.push(format!(
                    "{} dim {} {}: slot mismatch at m = {} (form {:?}): {} {:?} vs {} {:?}",
                    p.ctx.kind,
                    p.ctx.dim,
                    p.phi.display(reg),
                    out.m,
                    lift.form,
                    row.parameter.phi.display(reg),
                    row.parameter.eta.signs,
                    lift.parameter.phi.display(reg),
                    lift.parameter.eta.signs
                ));
            }
        }
    });
    report("7 (cross-recipe coherence)", checked, &failures);
}

#[test]
fn criterion_8_alternating_identity() {
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for_each_parameter(FULL, |reg, p| {
        let rep = tower_report(reg, p).unwrap();
        if rep.kappa != 1 || rep.l_pi <= 1 {
            return;
        }
        let a = p.component_group(reg).unwrap();
        let e1 = a.mask_of(&Atom::chain(p.ctx.chi_v, 1)).unwrap();
        let mut l = 3;
        while l <= rep.l_pi as u32 {
            checked += 1;
            let el = a.mask_of(&Atom::chain(p.ctx.chi_v, l)).unwrap();
            if p.eta.eval(e1 ^ el) != Sign::from_parity((l as i64 - 1) / 2) {
                failures.push(format!(
                    "{} dim {} {}: eta(e_1+e_{l}) != (-1)^((l-1)/2)",
                    p.ctx.kind,
                    p.ctx.dim,
                    p.phi.display(reg)
                ));
            }
            // the identity is also asserted inside the lift itself
            let m = (p.ctx.dim as i32 + p.ctx.epsilon0() - l as i32) as u32;
            if let Err(e) = lift_down_on(reg, p, m, rep.alpha.unwrap(), &rep) {
                failures.push(format!(
                    "{} dim {} {}: down lift at m={m} failed: {e}",
                    p.ctx.kind,
                    p.ctx.dim,
                    p.phi.display(reg)
                ));
            }
            l += 2;
        }
    });
    report("8 (alternating identity)", checked, &failures);
}

/// The worked example behind criterion 9 at the library level; the
/// command-line golden test lives with the CLI crate.
#[test]
fn criterion_9_worked_example_values() {
    let reg = CharacterRegistry::default_split(false);
    let one = reg.trivial();
    let phi = theta_core::wd::WdRep::from_terms([(Atom::chain(one, 2), 1), (Atom::chain(one, 4), 1)]);
    let ctx = theta_core::llc::GroupContext::new(
        GroupKind::Mp,
        6,
        theta_core::chars::FieldContext::split(),
        one,
        one,
        Sign::Plus,
        None,
    );
    let p = EnhancedParameter {
        ctx,
        phi,
        eta: EtaCharacter::new(vec![Sign::Plus, Sign::Minus]),
        nu: None,
        tempered: true,
    };
    let mut failures: Vec<String> = Vec::new();
    let rep = tower_report(&reg, &p).unwrap();
    if (rep.m_down, rep.m_up, rep.alpha) != (3, 13, Some(Sign::Minus)) {
        failures.push(format!("first occurrence: ({}, {}, {:?})", rep.m_down, rep.m_up, rep.alpha));
    }
    let down = lift_down_on(&reg, &p, 5, Sign::Minus, &rep).unwrap();
    if down.parameter.phi.dim(&reg).unwrap() != 4
        || down.parameter.eta.signs != vec![Sign::Minus]
        || down.parameter.nu != Some(Sign::Minus)
    {
        failures.push("down lift at m = 5".into());
    }
    let up = lift_up(&reg, &p, 13).unwrap();
    if up.parameter.eta.signs != vec![Sign::Minus, Sign::Plus, Sign::Minus] || up.parameter.nu != Some(Sign::Minus) {
        failures.push("up lift at m = 13".into());
    }
    for lift in [&down, &up] {
        let violations = validate(&reg, &lift.parameter);
        if !violations.is_empty() {
            failures.push(fmt_violations(&violations));
        }
    }
    report("9 (worked example, library level)", 3, &failures);
}

#[test]
fn emitted_parameters_revalidate() {
    // Companion sweep to criterion 4 at a reduced size: every lifted
    // parameter revalidates through the public validator.
    let limits = Limits { max_dim: 6, max_sl2: 6 };
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for_each_parameter(limits, |reg, p| {
        let rep = tower_report(reg, p).unwrap();
        let (_, rows) = tabulate(reg, p, rep.m_up + 2).unwrap();
        for row in rows {
            if let ThetaRow::Lift(l) = row {
                checked += 1;
                let v = validate(reg, &l.parameter);
                if !v.is_empty() {
                    failures.push(fmt_violations(&v));
                }
                // root numbers of lifted tempered parameters stay computable
                if l.tempered {
                    let tag = recipe_tag(reg);
                    let _ = root_number(reg, &l.parameter.phi, reg.trivial(), &tag);
                }
            }
        }
    });
    report("supplement (revalidation)", checked, &failures);
}
