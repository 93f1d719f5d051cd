//! Table and JSON emitters for reports and lift rows.

use serde_json::{json, Value};
use theta_core::chars::CharacterRegistry;
use theta_core::llc::{EnhancedParameter, GroupKind};
use theta_core::theta::{ThetaLiftResult, ThetaRow, TowerReport};
use theta_core::wd::{AtomKind, WdRep};

/// Fixed normalization note carried by every JSON document.
pub const NORMALIZATION_NOTE: &str =
    "first names are reported against the Whittaker datum of the quasi-split form fixed by the standard additive character";

pub fn sign_str(s: theta_core::sign::Sign) -> &'static str {
    if s.is_plus() {
        "+"
    } else {
        "-"
    }
}

pub fn phi_json(reg: &CharacterRegistry, phi: &WdRep) -> Value {
    let terms: Vec<Value> = phi
        .terms()
        .map(|(atom, mult)| {
            let (kind, chr, label, k) = match &atom.kind {
                AtomKind::Chain { chi, k } => ("chain", reg.name(*chi).to_string(), Value::Null, *k),
                AtomKind::Generic { label, twist, k } => {
                    ("generic", reg.name(*twist).to_string(), json!(label), *k)
                }
            };
            json!({
                "kind": kind,
                "char": chr,
                "label": label,
                "k": k,
                "shift": atom.shift.to_string(),
                "mult": mult,
            })
        })
        .collect();
    Value::Array(terms)
}

pub fn eta_json(reg: &CharacterRegistry, p: &EnhancedParameter) -> Value {
    let a = p.component_group(reg).expect("valid parameter");
    let mut map = serde_json::Map::new();
    for (slot, sign) in a.slots.iter().zip(&p.eta.signs) {
        map.insert(slot.atom.canonical_key(reg), json!(sign_str(*sign)));
    }
    Value::Object(map)
}

pub fn group_str(reg: &CharacterRegistry, p: &EnhancedParameter) -> String {
    match p.ctx.kind {
        GroupKind::OOdd | GroupKind::OEven => {
            format!("{}({}, disc={})", p.ctx.kind, p.ctx.dim, reg.name(p.ctx.chi_w))
        }
        GroupKind::U => format!(
            "U({}, parity={}, tower={})",
            p.ctx.dim,
            if p.ctx.partner_parity() == 1 { "odd" } else { "even" },
            p.ctx.tower
        ),
        _ => format!("{}({})", p.ctx.kind, p.ctx.dim),
    }
}

pub fn report_json(report: &TowerReport) -> Value {
    json!({
        "m_down": report.m_down,
        "m_up": report.m_up,
        "alpha": report.alpha.map(sign_str),
        "l_pi": report.l_pi,
        "kappa": report.kappa,
        "T_set": report.t_set,
        "input_heads_down": report.input_heads_down,
        "trace": report.trace.iter().map(|t| json!({
            "l": t.l,
            "chain": t.chain_ok,
            "oddness": t.oddness_ok,
            "initial": t.initial_ok,
            "alternating": t.alternating_ok,
            "admitted": t.admitted,
        })).collect::<Vec<_>>(),
    })
}

pub fn lift_json(reg: &CharacterRegistry, lift: &ThetaLiftResult) -> Value {
    json!({
        "m": lift.m,
        "tower": lift.tower.map(sign_str),
        "zero": false,
        "group": group_str(reg, &lift.parameter),
        "phi": phi_json(reg, &lift.parameter.phi),
        "eta": eta_json(reg, &lift.parameter),
        "nu": lift.parameter.nu.map(sign_str),
        "tempered": lift.tempered,
        "standard_module": lift.standard_module.iter().map(|s| json!({
            "chi": reg.name(s.chi),
            "steinberg": s.steinberg,
            "exponent": s.exponent.to_string(),
        })).collect::<Vec<_>>(),
        "notes": lift.notes.iter().map(|n| n.to_string()).collect::<Vec<_>>(),
    })
}

pub fn rows_json(reg: &CharacterRegistry, rows: &[ThetaRow]) -> Value {
    let out: Vec<Value> = rows
        .iter()
        .map(|r| match r {
            ThetaRow::Zero { tower, m } => json!({"tower": tower.map(sign_str), "m": m, "zero": true}),
            ThetaRow::Lift(l) => lift_json(reg, l),
        })
        .collect();
    Value::Array(out)
}

pub fn compute_json(
    reg: &CharacterRegistry,
    p: &EnhancedParameter,
    report: &TowerReport,
    rows: &[ThetaRow],
) -> Value {
    json!({
        "schema": 1,
        "normalization": NORMALIZATION_NOTE,
        "group": group_str(reg, p),
        "chi_V": reg.name(p.ctx.chi_v),
        "chi_W": reg.name(p.ctx.chi_w),
        "phi": phi_json(reg, &p.phi),
        "eta": eta_json(reg, p),
        "nu": p.nu.map(sign_str),
        "first_occurrence": report_json(report),
        "rows": rows_json(reg, rows),
    })
}

fn eta_text(reg: &CharacterRegistry, p: &EnhancedParameter) -> String {
    let a = p.component_group(reg).expect("valid parameter");
    a.slots
        .iter()
        .zip(&p.eta.signs)
        .map(|(s, v)| format!("{}:{}", s.atom.canonical_key(reg), v))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Aligned fixed-width table, one row per target dimension.
pub fn rows_table(reg: &CharacterRegistry, rows: &[ThetaRow]) -> String {
    let mut cells: Vec<[String; 7]> = vec![[
        "tower".into(),
        "m".into(),
        "theta(phi)".into(),
        "theta(eta)".into(),
        "nu".into(),
        "tempered".into(),
        "standard module".into(),
    ]];
    for row in rows {
        match row {
            ThetaRow::Zero { tower, m } => cells.push([
                tower.map(|s| s.to_string()).unwrap_or_else(|| "both".into()),
                m.to_string(),
                "0".into(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ]),
            ThetaRow::Lift(l) => {
                let std_mod = l
                    .standard_module
                    .iter()
                    .map(|s| {
                        let name = if reg.is_trivial(s.chi) {
                            format!("St{}", s.steinberg)
                        } else {
                            format!("{}.St{}", reg.name(s.chi), s.steinberg)
                        };
                        format!("{}@{}", name, s.exponent)
                    })
                    .collect::<Vec<_>>()
                    .join(" x ");
                let mut phi = l.parameter.phi.display(reg).to_string();
                if !l.notes.is_empty() {
                    phi.push_str(&format!(
                        "  [{}]",
                        l.notes.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(", ")
                    ));
                }
                cells.push([
                    l.tower.map(|s| s.to_string()).unwrap_or_else(|| "both".into()),
                    l.m.to_string(),
                    phi,
                    eta_text(reg, &l.parameter),
                    l.parameter.nu.map(|s| s.to_string()).unwrap_or_default(),
                    if l.tempered { "yes".into() } else { "no".into() },
                    std_mod,
                ]);
            }
        }
    }
    let mut widths = [0usize; 7];
    for row in &cells {
        for (i, c) in row.iter().enumerate() {
            widths[i] = widths[i].max(c.len());
        }
    }
    let mut out = String::new();
    for row in &cells {
        let line: Vec<String> = row.iter().enumerate().map(|(i, c)| format!("{:<w$}", c, w = widths[i])).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn report_table(report: &TowerReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "l(pi) = {}   kappa = {}   m_down = {}   m_up = {}   alpha = {}\n",
        report.l_pi,
        report.kappa,
        report.m_down,
        report.m_up,
        report.alpha.map(|s| s.to_string()).unwrap_or_else(|| "both".into())
    ));
    out.push_str(&format!(
        "T = {{{}}}\n",
        report.t_set.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", ")
    ));
    if let Some(heads) = report.input_heads_down {
        out.push_str(&format!(
            "the given representation heads the going-{} family\n",
            if heads { "down" } else { "up" }
        ));
    }
    out.push_str("candidate trace (l: chain oddness initial alternating -> admitted)\n");
    for t in &report.trace {
        out.push_str(&format!(
            "  {:>3}: {} {} {} {} -> {}\n",
            t.l,
            mark(t.chain_ok),
            mark(t.oddness_ok),
            t.initial_ok.map(mark).unwrap_or("-"),
            mark(t.alternating_ok),
            if t.admitted { "admitted" } else { "rejected" }
        ));
    }
    out
}

fn mark(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "no"
    }
}
