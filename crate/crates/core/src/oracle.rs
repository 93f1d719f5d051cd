//! Exhaustive cross-validation suites: each check sweeps a finite universe
//! and reports how many instances were verified and which ones failed.

use crate::chars::CharacterRegistry;
use crate::epsilon::{oracle_twisted_eps, twisted_eps, TensorSide};
use crate::error::Error;
use crate::llc::{contragredient, mp_o_transfer, validate, GroupKind};
use crate::sign::Sign;
use crate::theta::{tabulate, tower_report, ThetaRow};
use crate::universe::{chain_multisets, for_each_parameter, quadratic_registry, split_registry, Limits};
use crate::wd::cg_decompose;

const MAX_REPORTED_FAILURES: usize = 20;

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: String,
    pub checked: u64,
    pub failed: u64,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    fn new(name: &str) -> SuiteOutcome {
        SuiteOutcome { name: name.to_string(), checked: 0, failed: 0, failures: Vec::new() }
    }

    fn fail(&mut self, msg: String) {
        self.failed += 1;
        if self.failures.len() < MAX_REPORTED_FAILURES {
            self.failures.push(msg);
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

impl std::fmt::Display for SuiteOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {} checked, {} failed{}",
            self.name,
            self.checked,
            self.failed,
            if self.passed() { " [ok]" } else { "" }
        )
    }
}

/// Clebsch–Gordan against an independent weight-multiset oracle.
pub fn check_cg(max: u32) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("cg");
    for a in 1..=max {
        for b in 1..=max {
            out.checked += 1;
            // Doubled weights of S_k are k-1, k-3, ..., -(k-1).
            let weights = |k: u32| -> Vec<i64> {
                (0..k).map(|i| k as i64 - 1 - 2 * i as i64).collect()
            };
            let mut tensor: Vec<i64> = Vec::new();
            for wa in weights(a) {
                for wb in weights(b) {
                    tensor.push(wa + wb);
                }
            }
            tensor.sort_unstable();
            let mut expanded: Vec<i64> = Vec::new();
            for c in cg_decompose(a, b) {
                expanded.extend(weights(c));
            }
            expanded.sort_unstable();
            if tensor != expanded {
                out.fail(format!("S{a} (x) S{b}: weight multisets differ"));
            }
        }
    }
    out
}

fn twisted_eps_sweep(reg: &CharacterRegistry, limits: Limits, max_l: u32, out: &mut SuiteOutcome) {
    for l in 1..=max_l {
        for dim in 0..=limits.max_dim {
            for rep in chain_multisets(reg, dim, limits.max_sl2) {
                // Oracle domain: all SL2 sizes share the parity of l.
                if rep.terms().any(|(a, _)| a.sl2_dim() % 2 != l % 2) {
                    continue;
                }
                for chi_v in reg.ids() {
                    for side in [TensorSide::Minus, TensorSide::Plus] {
                        let twisted = rep.twist(reg.inverse(chi_v), reg);
                        let lm = match side {
                            TensorSide::Minus => l,
                            TensorSide::Plus => l + 2,
                        };
                        let sign_ok = twisted
                            .admits_sign(Sign::from_parity(lm as i64 + 1), reg)
                            .unwrap_or(false);
                        if !sign_ok {
                            continue;
                        }
                        out.checked += 1;
                        let closed = twisted_eps(reg, &rep, chi_v, l, side);
                        let brute = oracle_twisted_eps(reg, &rep, chi_v, l, side);
                        match (closed, brute) {
                            (Ok(c), Ok(b)) => {
                                if c != b {
                                    out.fail(format!(
                                        "rep {} chiV {} l {} {:?}: closed {} vs oracle {}",
                                        rep.display(reg),
                                        reg.name(chi_v),
                                        l,
                                        side,
                                        c,
                                        b
                                    ));
                                }
                            }
                            (Err(Error::OracleInapplicable(_)), _) | (_, Err(Error::OracleInapplicable(_))) => {}
                            (Err(e), _) => out.fail(format!(
                                "rep {} chiV {} l {}: closed form failed: {e}",
                                rep.display(reg),
                                reg.name(chi_v),
                                l
                            )),
                            (_, Err(e)) => out.fail(format!(
                                "rep {} chiV {} l {}: oracle failed: {e}",
                                rep.display(reg),
                                reg.name(chi_v),
                                l
                            )),
                        }
                    }
                }
            }
        }
    }
}

/// Closed-form twisted epsilon against the brute-force expansion, over both
/// registries.
pub fn check_twisted_eps(limits: Limits, max_l: u32) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("twisted-eps");
    twisted_eps_sweep(&split_registry(), limits, max_l, &mut out);
    twisted_eps_sweep(&quadratic_registry(), limits, max_l, &mut out);
    out
}

/// First-occurrence bookkeeping: the conservation relation, parity and
/// downward closure of the admission set.
pub fn check_conservation(limits: Limits) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("conservation");
    for_each_parameter(limits, |reg, p| {
        out.checked += 1;
        match tower_report(reg, p) {
            Ok(rep) => {
                let n = p.ctx.dim as i64;
                let eps0 = p.ctx.epsilon0() as i64;
                if rep.m_down as i64 + rep.m_up as i64 != 2 * n + 2 + 2 * eps0 {
                    out.fail(format!(
                        "{} dim {}: m_down {} + m_up {} != {}",
                        p.ctx.kind,
                        p.ctx.dim,
                        rep.m_down,
                        rep.m_up,
                        2 * n + 2 + 2 * eps0
                    ));
                }
                let kappa = rep.kappa as i32;
                if rep.l_pi != kappa - 2 && (rep.l_pi - kappa).rem_euclid(2) != 0 {
                    out.fail(format!("{}: l = {} has the wrong parity", p.ctx.kind, rep.l_pi));
                }
                for &l in &rep.t_set {
                    if l - 2 >= kappa && !rep.t_set.contains(&(l - 2)) {
                        out.fail(format!("{}: admission set not downward closed at {l}", p.ctx.kind));
                    }
                }
            }
            Err(e) => out.fail(format!("{} dim {}: report failed: {e}", p.ctx.kind, p.ctx.dim)),
        }
    });
    out
}

/// Contragredient and transfer round trips.
pub fn check_roundtrip(limits: Limits) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("roundtrip");
    for_each_parameter(limits, |reg, p| {
        out.checked += 1;
        match contragredient(reg, p).and_then(|q| contragredient(reg, &q)) {
            Ok(back) => {
                if back.phi != p.phi || back.eta != p.eta || back.nu != p.nu {
                    out.fail(format!("contragredient^2 != id for {} dim {}", p.ctx.kind, p.ctx.dim));
                }
            }
            Err(e) => out.fail(format!("contragredient failed for {} dim {}: {e}", p.ctx.kind, p.ctx.dim)),
        }
        if p.ctx.kind == GroupKind::Mp {
            for c in reg.ids() {
                out.checked += 1;
                match mp_o_transfer(reg, p, c).and_then(|q| mp_o_transfer(reg, &q, c)) {
                    Ok(back) => {
                        if back.phi != p.phi || back.eta != p.eta {
                            out.fail(format!(
                                "transfer^2 != id for Mp dim {} class {}",
                                p.ctx.dim,
                                reg.name(c)
                            ));
                        }
                    }
                    Err(e) => out.fail(format!(
                        "transfer failed for Mp dim {} class {}: {e}",
                        p.ctx.dim,
                        reg.name(c)
                    )),
                }
            }
        }
    });
    out
}

/// Every lift emitted by the tabulation validates as a parameter of its
/// target group, and metaplectic sources see a constant central sign.
pub fn check_validity(limits: Limits, extra_m: u32) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("validity");
    for_each_parameter(limits, |reg, p| {
        out.checked += 1;
        let report = match tower_report(reg, p) {
            Ok(r) => r,
            Err(e) => {
                out.fail(format!("{} dim {}: report failed: {e}", p.ctx.kind, p.ctx.dim));
                return;
            }
        };
        let m_max = report.m_up + extra_m;
        match tabulate(reg, p, m_max) {
            Ok((_, rows)) => {
                let mut nus = Vec::new();
                for row in rows {
                    if let ThetaRow::Lift(lift) = row {
                        let violations = validate(reg, &lift.parameter);
                        if !violations.is_empty() {
                            out.fail(format!(
                                "{} dim {} -> m {}: {}",
                                p.ctx.kind,
                                p.ctx.dim,
                                lift.m,
                                violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
                            ));
                        }
                        if let Some(nu) = lift.parameter.nu {
                            nus.push(nu);
                        }
                    }
                }
                if p.ctx.kind == GroupKind::Mp && !nus.is_empty() && nus.iter().any(|s| *s != nus[0]) {
                    out.fail(format!("Mp dim {}: central sign varies across lifts", p.ctx.dim));
                }
            }
            Err(e) => out.fail(format!("{} dim {}: tabulation failed: {e}", p.ctx.kind, p.ctx.dim)),
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cg_small() {
        let out = check_cg(6);
        assert!(out.passed(), "{out}");
    }

    #[test]
    fn twisted_eps_small() {
        let out = check_twisted_eps(Limits { max_dim: 6, max_sl2: 4 }, 4);
        assert!(out.passed(), "{out} {:?}", out.failures);
        assert!(out.checked > 100);
    }

    #[test]
    fn conservation_small() {
        let out = check_conservation(Limits { max_dim: 5, max_sl2: 4 });
        assert!(out.passed(), "{out} {:?}", out.failures);
    }

    #[test]
    fn roundtrip_small() {
        let out = check_roundtrip(Limits { max_dim: 4, max_sl2: 4 });
        assert!(out.passed(), "{out} {:?}", out.failures);
    }

    #[test]
    fn validity_small() {
        let out = check_validity(Limits { max_dim: 4, max_sl2: 4 }, 4);
        assert!(out.passed(), "{out} {:?}", out.failures);
    }
}
