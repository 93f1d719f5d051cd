//! Line-oriented session-file parser.
//!
//! A session file is a sequence of parameter blocks separated by `---`
//! lines, optionally preceded by one `registry { ... }` block.  The grammar
//! is deliberately flat: one declaration per line, with `{ ... }` blocks
//! whose contents are again line-oriented.  See the README for the full
//! format.

use std::fmt;

use theta_core::chars::{AddCharTag, CharId, CharacterRegistry, ConjRestriction, FieldContext};
use theta_core::llc::{EnhancedParameter, EtaCharacter, GroupContext, GroupKind};
use theta_core::sign::{HalfInt, Sign};
use theta_core::wd::{Atom, DualityClass, GenericDecl, WdRep};

#[derive(Debug, Clone)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, col {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, col, msg: msg.into() })
}

/// A parsed session: the registry plus one or more parameters.
#[derive(Debug)]
pub struct Session {
    pub registry: CharacterRegistry,
    pub parameters: Vec<EnhancedParameter>,
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

fn logical_lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .map(|(i, raw)| {
            let without_comment = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            Line { no: i + 1, text: without_comment.trim_end() }
        })
        .filter(|l| !l.text.trim().is_empty())
        .collect()
}

fn parse_sign(s: &str, line: usize, col: usize) -> Result<Sign, ParseError> {
    Sign::parse(s).ok_or_else(|| ParseError { line, col, msg: format!("expected a sign, found `{s}`") })
}

fn column_of(line: &str, needle: &str) -> usize {
    line.find(needle).map(|p| p + 1).unwrap_or(1)
}

/// chars/eps declarations gathered while scanning a registry block.
#[derive(Default)]
struct RegistrySpec {
    field: Option<FieldContext>,
    minus_one_square: bool,
    chars: Vec<CharSpec>,
    products: Vec<(String, String, String)>,
    char_eps: Vec<(String, AddCharTag, Sign)>,
    atom_eps: Vec<(String, AddCharTag, Sign)>,
    pair_eps: Vec<(String, String, AddCharTag, Sign)>,
    atoms: Vec<AtomSpec>,
    chi_minus1: Option<String>,
}

struct CharSpec {
    name: String,
    minus1: Sign,
    quadratic: bool,
    conj: ConjRestriction,
    values: Vec<(String, Sign)>,
}

struct AtomSpec {
    label: String,
    dim: u32,
    k: u32,
    duality: DualityClass,
    det: String,
    dual: Option<String>,
    eps: Vec<(String, AddCharTag, Sign)>,
    pairs: Vec<(String, AddCharTag, Sign)>,
    line: usize,
}

fn parse_tag(s: &str, line: usize) -> Result<AddCharTag, ParseError> {
    AddCharTag::parse(s).ok_or_else(|| ParseError {
        line,
        col: 1,
        msg: format!("unknown additive character tag `{s}` (expected psi, psi_c(...), psiE, psiE2 or psiEtrace)"),
    })
}

fn split_eq(text: &str, line: usize) -> Result<(&str, &str), ParseError> {
    match text.split_once('=') {
        Some((a, b)) => Ok((a.trim(), b.trim())),
        None => err(line, 1, format!("expected `key = value`, found `{text}`")),
    }
}

fn parse_registry_block(lines: &[Line<'_>], idx: &mut usize) -> Result<RegistrySpec, ParseError> {
    let mut spec = RegistrySpec::default();
    *idx += 1; // past `registry {`
    while *idx < lines.len() {
        let l = &lines[*idx];
        let t = l.text.trim();
        if t == "}" {
            *idx += 1;
            return Ok(spec);
        }
        if let Some(rest) = t.strip_prefix("field") {
            let owned = format!("field{rest}");
            let (_, v) = split_eq(&owned, l.no)?;
            spec.field = Some(match v {
                "split" => {
                    spec.minus_one_square = false;
                    FieldContext::split()
                }
                _ => {
                    if let Some(inner) = v.strip_prefix("split(").and_then(|x| x.strip_suffix(')')) {
                        let (k, b) = split_eq(inner, l.no)?;
                        if k != "minus_one_square" {
                            return err(l.no, 1, format!("unknown split-field option `{k}`"));
                        }
                        spec.minus_one_square = b == "true";
                        FieldContext::split()
                    } else if let Some(inner) = v.strip_prefix("quadratic(").and_then(|x| x.strip_suffix(')')) {
                        let (k, s) = split_eq(inner, l.no)?;
                        if k != "omega_minus1" {
                            return err(l.no, 1, format!("unknown quadratic-field option `{k}`"));
                        }
                        FieldContext::quadratic(parse_sign(s, l.no, 1)?)
                    } else {
                        return err(l.no, 1, format!("unknown field declaration `{v}`"));
                    }
                }
            });
            *idx += 1;
        } else if let Some(rest) = t.strip_prefix("char ") {
            let (name, brace) = match rest.split_once('{') {
                Some((n, _)) => (n.trim().to_string(), true),
                None => (rest.trim().to_string(), false),
            };
            if !brace {
                return err(l.no, 1, "character declarations need a `{ ... }` block");
            }
            let mut c = CharSpec {
                name,
                minus1: Sign::Plus,
                quadratic: true,
                conj: ConjRestriction::NotApplicable,
                values: Vec::new(),
            };
            *idx += 1;
            loop {
                if *idx >= lines.len() {
                    return err(l.no, 1, "unterminated char block");
                }
                let inner = &lines[*idx];
                let it = inner.text.trim();
                if it == "}" {
                    *idx += 1;
                    break;
                }
                if let Some(v) = it.strip_prefix("value ") {
                    let (sym, s) = split_eq(v, inner.no)?;
                    c.values.push((sym.to_string(), parse_sign(s, inner.no, 1)?));
                } else if let Some(v) = it.strip_prefix("eps ") {
                    let (tag, s) = split_eq(v, inner.no)?;
                    spec.char_eps.push((c.name.clone(), parse_tag(tag, inner.no)?, parse_sign(s, inner.no, 1)?));
                } else {
                    let (k, v) = split_eq(it, inner.no)?;
                    match k {
                        "minus1" => c.minus1 = parse_sign(v, inner.no, 1)?,
                        "quadratic" => c.quadratic = v == "true",
                        "conj" => {
                            c.conj = match v {
                                "trivial" => ConjRestriction::TrivialOnF,
                                "omega" => ConjRestriction::EqualsOmegaOnF,
                                "none" => ConjRestriction::NotApplicable,
                                _ => return err(inner.no, 1, format!("unknown conj class `{v}`")),
                            }
                        }
                        _ => return err(inner.no, 1, format!("unknown char field `{k}`")),
                    }
                }
                *idx += 1;
            }
            spec.chars.push(c);
        } else if let Some(rest) = t.strip_prefix("product ") {
            let (lhs, rhs) = split_eq(rest, l.no)?;
            let parts: Vec<&str> = lhs.split_whitespace().collect();
            if parts.len() != 2 {
                return err(l.no, 1, "expected `product A B = C`");
            }
            spec.products.push((parts[0].to_string(), parts[1].to_string(), rhs.to_string()));
            *idx += 1;
        } else if let Some(rest) = t.strip_prefix("atom ") {
            let (label, brace) = match rest.split_once('{') {
                Some((n, _)) => (n.trim().to_string(), true),
                None => (rest.trim().to_string(), false),
            };
            if !brace {
                return err(l.no, 1, "atom declarations need a `{ ... }` block");
            }
            let mut a = AtomSpec {
                label,
                dim: 1,
                k: 1,
                duality: DualityClass::None,
                det: "1".to_string(),
                dual: None,
                eps: Vec::new(),
                pairs: Vec::new(),
                line: l.no,
            };
            *idx += 1;
            loop {
                if *idx >= lines.len() {
                    return err(l.no, 1, "unterminated atom block");
                }
                let inner = &lines[*idx];
                let it = inner.text.trim();
                if it == "}" {
                    *idx += 1;
                    break;
                }
                if let Some(v) = it.strip_prefix("eps ") {
                    let (lhs, s) = split_eq(v, inner.no)?;
                    let parts: Vec<&str> = lhs.split_whitespace().collect();
                    if parts.len() != 2 {
                        return err(inner.no, 1, "expected `eps TWIST TAG = sign`");
                    }
                    a.eps.push((
                        parts[0].to_string(),
                        parse_tag(parts[1], inner.no)?,
                        parse_sign(s, inner.no, 1)?,
                    ));
                } else if let Some(v) = it.strip_prefix("pair ") {
                    let (lhs, s) = split_eq(v, inner.no)?;
                    let parts: Vec<&str> = lhs.split_whitespace().collect();
                    if parts.len() != 2 {
                        return err(inner.no, 1, "expected `pair KEY TAG = sign`");
                    }
                    a.pairs.push((
                        parts[0].to_string(),
                        parse_tag(parts[1], inner.no)?,
                        parse_sign(s, inner.no, 1)?,
                    ));
                } else {
                    let (k, v) = split_eq(it, inner.no)?;
                    match k {
                        "dim" => {
                            a.dim = v.parse().map_err(|_| ParseError {
                                line: inner.no,
                                col: 1,
                                msg: format!("bad dimension `{v}`"),
                            })?
                        }
                        "k" => {
                            a.k = v.parse().map_err(|_| ParseError {
                                line: inner.no,
                                col: 1,
                                msg: format!("bad SL2 size `{v}`"),
                            })?
                        }
                        "duality" => {
                            a.duality = DualityClass::parse(v).ok_or_else(|| ParseError {
                                line: inner.no,
                                col: 1,
                                msg: format!("unknown duality class `{v}`"),
                            })?
                        }
                        "det" => a.det = v.to_string(),
                        "dual" => a.dual = Some(v.to_string()),
                        _ => return err(inner.no, 1, format!("unknown atom field `{k}`")),
                    }
                }
                *idx += 1;
            }
            spec.atoms.push(a);
        } else if let Some(rest) = t.strip_prefix("eps ") {
            let (lhs, s) = split_eq(rest, l.no)?;
            let parts: Vec<&str> = lhs.split_whitespace().collect();
            if parts.len() != 2 {
                return err(l.no, 1, "expected `eps ATOMKEY TAG = sign`");
            }
            spec.atom_eps.push((parts[0].to_string(), parse_tag(parts[1], l.no)?, parse_sign(s, l.no, 1)?));
            *idx += 1;
        } else if let Some(rest) = t.strip_prefix("paireps ") {
            let (lhs, s) = split_eq(rest, l.no)?;
            let parts: Vec<&str> = lhs.split_whitespace().collect();
            if parts.len() != 3 {
                return err(l.no, 1, "expected `paireps KEY KEY TAG = sign`");
            }
            spec.pair_eps.push((
                parts[0].to_string(),
                parts[1].to_string(),
                parse_tag(parts[2], l.no)?,
                parse_sign(s, l.no, 1)?,
            ));
            *idx += 1;
        } else if let Some(rest) = t.strip_prefix("chi_minus1") {
            let owned = format!("chi_minus1{rest}");
            let (_, v) = split_eq(&owned, l.no)?;
            spec.chi_minus1 = Some(v.to_string());
            *idx += 1;
        } else {
            return err(l.no, 1, format!("unknown registry declaration `{t}`"));
        }
    }
    err(lines.last().map(|l| l.no).unwrap_or(1), 1, "unterminated registry block")
}

fn build_registry(spec: RegistrySpec, quadratic_needed: bool) -> Result<CharacterRegistry, ParseError> {
    let field = spec.field.unwrap_or(if quadratic_needed {
        FieldContext::quadratic(Sign::Minus)
    } else {
        FieldContext::split()
    });
    if spec.chars.is_empty() && spec.atoms.is_empty() && spec.char_eps.is_empty() && spec.atom_eps.is_empty()
        && spec.pair_eps.is_empty()
    {
        // Pure default registry.
        return Ok(if field.is_quadratic() {
            CharacterRegistry::default_quadratic(field.omega_at_minus1().unwrap())
        } else {
            CharacterRegistry::default_split(spec.minus_one_square)
        });
    }
    let mut builder = if spec.chars.is_empty() {
        // Default characters plus extra declared data.
        let base = if field.is_quadratic() {
            CharacterRegistry::default_quadratic(field.omega_at_minus1().unwrap())
        } else {
            CharacterRegistry::default_split(spec.minus_one_square)
        };
        let mut b = CharacterRegistry::builder(field);
        for id in base.ids() {
            b.push_char_full(base.get(id).clone());
        }
        for a in base.ids() {
            for c in base.ids() {
                let p = base.product(a, c);
                b.set_product(base.name(a), base.name(c), base.name(p));
            }
        }
        if let Ok(cm) = base.chi_minus1() {
            b.set_chi_minus1(base.name(cm));
        }
        // carry the default eps data over
        for id in base.ids() {
            for tag in [AddCharTag::Psi, AddCharTag::PsiE, AddCharTag::PsiE2] {
                if tag.valid_for(&field) && !base.is_trivial(id) {
                    if let Some(v) = base.char_eps(id, &tag) {
                        b.declare_char_eps(base.name(id), tag.clone(), v);
                    }
                }
            }
        }
        b
    } else {
        let mut b = CharacterRegistry::builder(field);
        let mut has_trivial = false;
        for c in &spec.chars {
            if c.name == "1" {
                has_trivial = true;
            }
            let values: Vec<(&str, Sign)> = c.values.iter().map(|(s, v)| (s.as_str(), *v)).collect();
            b.push_char(&c.name, c.name == "1", c.quadratic, c.minus1, &values, resolve_conj(c, field));
        }
        if !has_trivial {
            b.push_char(
                "1",
                true,
                true,
                Sign::Plus,
                &[],
                if field.is_quadratic() { ConjRestriction::TrivialOnF } else { ConjRestriction::NotApplicable },
            );
        }
        for (a, c, p) in &spec.products {
            b.set_product(a, c, p);
        }
        b
    };
    if let Some(cm) = &spec.chi_minus1 {
        builder.set_chi_minus1(cm);
    }
    for (name, tag, v) in &spec.char_eps {
        builder.declare_char_eps(name, tag.clone(), *v);
    }
    for (key, tag, v) in &spec.atom_eps {
        builder.declare_atom_eps(key, tag.clone(), *v);
    }
    for (k1, k2, tag, v) in &spec.pair_eps {
        builder.declare_pair_eps(k1, k2, tag.clone(), *v);
    }
    // Generic atoms may reference characters, so register them after a
    // first build to resolve ids.
    let atoms = spec.atoms;
    let interim = builder.finish().map_err(|e| ParseError { line: 1, col: 1, msg: e.to_string() })?;
    if atoms.is_empty() {
        return Ok(interim);
    }
    let mut builder = CharacterRegistry::builder(interim.field);
    for id in interim.ids() {
        builder.push_char_full(interim.get(id).clone());
    }
    for a in interim.ids() {
        for c in interim.ids() {
            let p = interim.product(a, c);
            builder.set_product(interim.name(a), interim.name(c), interim.name(p));
        }
    }
    if let Ok(cm) = interim.chi_minus1() {
        builder.set_chi_minus1(interim.name(cm));
    }
    for (name, tag, v) in &spec.char_eps {
        builder.declare_char_eps(name, tag.clone(), *v);
    }
    for (key, tag, v) in &spec.atom_eps {
        builder.declare_atom_eps(key, tag.clone(), *v);
    }
    for (k1, k2, tag, v) in &spec.pair_eps {
        builder.declare_pair_eps(k1, k2, tag.clone(), *v);
    }
    for a in atoms {
        let lookup = |name: &str| -> Result<CharId, ParseError> {
            interim.by_name(name).map_err(|e| ParseError { line: a.line, col: 1, msg: e.to_string() })
        };
        let mut root_table = std::collections::BTreeMap::new();
        for (twist, tag, v) in &a.eps {
            root_table.insert((lookup(twist)?, tag.clone()), *v);
        }
        let pair_table = a
            .pairs
            .iter()
            .map(|(k, tag, v)| ((k.clone(), tag.clone()), *v))
            .collect();
        builder.declare_generic(GenericDecl {
            label: a.label.clone(),
            weil_dim: a.dim,
            k: a.k,
            duality: a.duality,
            det_weil: lookup(&a.det)?,
            dual_label: a.dual.clone(),
            root_table,
            pair_table,
        });
    }
    builder.finish().map_err(|e| ParseError { line: 1, col: 1, msg: e.to_string() })
}

fn resolve_conj(c: &CharSpec, field: FieldContext) -> ConjRestriction {
    if field.is_quadratic() && c.conj == ConjRestriction::NotApplicable && c.name == "1" {
        ConjRestriction::TrivialOnF
    } else {
        c.conj
    }
}

/// One parsed phi term.
pub fn parse_term(reg: &CharacterRegistry, term: &str, line: usize) -> Result<(Atom, u32), ParseError> {
    let term = term.trim();
    let (mult, rest) = match term.split_once('*') {
        Some((m, r)) if m.chars().all(|c| c.is_ascii_digit()) && !m.is_empty() => {
            (m.parse::<u32>().map_err(|_| ParseError { line, col: 1, msg: format!("bad multiplicity `{m}`") })?, r.trim())
        }
        _ => (1, term),
    };
    let (body, shift) = match rest.split_once('@') {
        Some((b, s)) => {
            let s = s.trim();
            let num = if let Some((n, d)) = s.split_once('/') {
                if d.trim() != "2" {
                    return err(line, column_of(rest, "@"), "exponents use halves: write k/2 or an integer");
                }
                n.trim().parse::<i32>().map_err(|_| ParseError { line, col: 1, msg: format!("bad exponent `{s}`") })?
            } else {
                2 * s.parse::<i32>().map_err(|_| ParseError { line, col: 1, msg: format!("bad exponent `{s}`") })?
            };
            (b.trim(), HalfInt::new(num))
        }
        None => (rest, HalfInt::ZERO),
    };
    let (chi, core) = match body.split_once('.') {
        Some((c, r)) => (
            reg.by_name(c.trim()).map_err(|e| ParseError { line, col: column_of(body, "."), msg: e.to_string() })?,
            r.trim(),
        ),
        None => (reg.trivial(), body),
    };
    if let Some(label) = core.strip_prefix("atom(").and_then(|x| x.strip_suffix(')')) {
        let decl = reg
            .generic(label)
            .map_err(|e| ParseError { line, col: 1, msg: e.to_string() })?;
        let mut atom = Atom::generic(label, chi, decl.k);
        atom.shift = shift;
        return Ok((atom, mult));
    }
    if let Some(kstr) = core.strip_prefix('S') {
        let k: u32 = kstr
            .parse()
            .map_err(|_| ParseError { line, col: 1, msg: format!("bad SL2 size in `{core}`") })?;
        if k == 0 {
            return err(line, 1, "SL2 sizes start at 1");
        }
        let mut atom = Atom::chain(chi, k);
        atom.shift = shift;
        return Ok((atom, mult));
    }
    err(line, 1, format!("cannot parse term `{term}`"))
}

fn parse_phi(reg: &CharacterRegistry, text: &str, line: usize) -> Result<WdRep, ParseError> {
    let mut rep = WdRep::empty();
    if text.trim() == "0" {
        return Ok(rep);
    }
    for term in text.split('+') {
        let (atom, mult) = parse_term(reg, term, line)?;
        rep.add(atom, mult);
    }
    Ok(rep)
}

struct BlockData {
    group: Option<(GroupKind, u32, Option<String>, Option<bool>, Option<Sign>, usize)>,
    chi_v: Option<(String, usize)>,
    chi_w: Option<(String, usize)>,
    phi: Option<(String, usize)>,
    eta: Option<(String, usize)>,
    nu: Option<(Sign, usize)>,
}

fn parse_group_line(v: &str, line: usize) -> Result<(GroupKind, u32, Option<String>, Option<bool>, Option<Sign>), ParseError> {
    let open = v.find('(').ok_or_else(|| ParseError { line, col: 1, msg: "expected `Kind(dim, ...)`".into() })?;
    let kind_str = &v[..open];
    let kind = GroupKind::parse(kind_str)
        .ok_or_else(|| ParseError { line, col: 1, msg: format!("unknown group kind `{kind_str}`") })?;
    let inner = v[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| ParseError { line, col: 1, msg: "missing closing parenthesis".into() })?;
    let mut parts = inner.split(',').map(|s| s.trim());
    let dim: u32 = parts
        .next()
        .unwrap_or("")
        .parse()
        .map_err(|_| ParseError { line, col: 1, msg: "bad group dimension".into() })?;
    let mut disc = None;
    let mut parity = None;
    let mut tower = None;
    for p in parts {
        let (k, val) = split_eq(p, line)?;
        match k {
            "disc" => disc = Some(val.to_string()),
            "parity" => {
                parity = Some(match val {
                    "even" => false,
                    "odd" => true,
                    _ => return err(line, 1, "parity is even or odd"),
                })
            }
            "tower" => tower = Some(parse_sign(val, line, 1)?),
            _ => return err(line, 1, format!("unknown group option `{k}`")),
        }
    }
    Ok((kind, dim, disc, parity, tower))
}

fn build_parameter(reg: &CharacterRegistry, b: BlockData) -> Result<EnhancedParameter, ParseError> {
    let (kind, dim, disc, parity, tower, gline) = b
        .group
        .ok_or_else(|| ParseError { line: 1, col: 1, msg: "missing `group = ...` line".into() })?;
    let lookup = |name: &str, line: usize| -> Result<CharId, ParseError> {
        reg.by_name(name).map_err(|e| ParseError { line, col: 1, msg: e.to_string() })
    };
    let trivial = reg.trivial();
    let mut chi_v = match &b.chi_v {
        Some((n, l)) => lookup(n, *l)?,
        None => trivial,
    };
    let mut chi_w = match &b.chi_w {
        Some((n, l)) => lookup(n, *l)?,
        None => trivial,
    };
    match kind {
        GroupKind::OOdd | GroupKind::OEven => {
            if let Some(d) = &disc {
                chi_w = lookup(d, gline)?;
            }
            chi_v = trivial;
        }
        GroupKind::Mp | GroupKind::Sp => {
            chi_w = trivial;
        }
        GroupKind::U => {}
    }
    let (phi_text, phi_line) =
        b.phi.ok_or_else(|| ParseError { line: gline, col: 1, msg: "missing `phi = ...` line".into() })?;
    let phi = parse_phi(reg, &phi_text, phi_line)?;
    let ctx = GroupContext::new(kind, dim, reg.field, chi_v, chi_w, tower.unwrap_or(Sign::Plus), parity);
    let a = theta_core::llc::component_group(reg, &phi, &ctx)
        .map_err(|e| ParseError { line: phi_line, col: 1, msg: e.to_string() })?;
    let (eta_text, eta_line) =
        b.eta.ok_or_else(|| ParseError { line: gline, col: 1, msg: "missing `eta = ...` line".into() })?;
    let inner = eta_text
        .trim()
        .strip_prefix('{')
        .and_then(|x| x.strip_suffix('}'))
        .ok_or_else(|| ParseError { line: eta_line, col: 1, msg: "eta uses `{ slot:sign, ... }`".into() })?;
    let mut signs: Vec<Option<Sign>> = vec![None; a.rank()];
    if !inner.trim().is_empty() {
        for part in inner.split(',') {
            let (key, val) = part
                .rsplit_once(':')
                .ok_or_else(|| ParseError { line: eta_line, col: 1, msg: format!("bad eta entry `{part}`") })?;
            let (atom, _) = parse_term(reg, key.trim(), eta_line)?;
            let idx = a.slot_of(&atom).ok_or_else(|| ParseError {
                line: eta_line,
                col: column_of(&eta_text, key.trim()),
                msg: format!("unknown basis slot {}", key.trim()),
            })?;
            if signs[idx].is_some() {
                return err(eta_line, 1, format!("slot {} assigned twice", key.trim()));
            }
            signs[idx] = Some(parse_sign(val, eta_line, 1)?);
        }
    }
    let mut eta = Vec::with_capacity(a.rank());
    for (i, s) in signs.into_iter().enumerate() {
        match s {
            Some(v) => eta.push(v),
            None => {
                return err(
                    eta_line,
                    1,
                    format!("slot {} has no sign", a.slots[i].atom.canonical_key(reg)),
                )
            }
        }
    }
    let mut ctx = ctx;
    // For families whose tower membership is read off eta(z), an omitted
    // tower option defaults to the coherent one.
    let eta = EtaCharacter::new(eta);
    if tower.is_none() && ctx.z_constraint() == theta_core::llc::ZConstraint::TowerSign {
        ctx.tower = eta.eval(a.z_mask());
    }
    let nu = b.nu.map(|(s, _)| s);
    let tempered = phi.is_tempered();
    Ok(EnhancedParameter { ctx, phi, eta, nu, tempered })
}

/// Parse a whole session file.
pub fn parse_session(text: &str) -> Result<Session, ParseError> {
    let lines = logical_lines(text);
    let mut idx = 0;
    // Peek for a registry block and whether any group is unitary.
    let quadratic_needed = lines.iter().any(|l| {
        let t = l.text.trim();
        t.starts_with("group") && t.contains("U(")
    });
    let spec = if idx < lines.len() && lines[idx].text.trim().starts_with("registry") {
        parse_registry_block(&lines, &mut idx)?
    } else {
        RegistrySpec::default()
    };
    let registry = build_registry(spec, quadratic_needed)?;
    let mut parameters = Vec::new();
    let mut block = BlockData { group: None, chi_v: None, chi_w: None, phi: None, eta: None, nu: None };
    let mut block_used = false;
    while idx < lines.len() {
        let l = &lines[idx];
        let t = l.text.trim();
        if t == "---" {
            if block_used {
                parameters.push(build_parameter(&registry, block)?);
            }
            block = BlockData { group: None, chi_v: None, chi_w: None, phi: None, eta: None, nu: None };
            block_used = false;
            idx += 1;
            continue;
        }
        let (key, value) = split_eq(t, l.no)?;
        block_used = true;
        match key {
            "group" => {
                let (kind, dim, disc, parity, tower) = parse_group_line(value, l.no)?;
                block.group = Some((kind, dim, disc, parity, tower, l.no));
            }
            "chi_V" => block.chi_v = Some((value.to_string(), l.no)),
            "chi_W" => block.chi_w = Some((value.to_string(), l.no)),
            "phi" => block.phi = Some((value.to_string(), l.no)),
            "eta" => block.eta = Some((value.to_string(), l.no)),
            "nu" => block.nu = Some((parse_sign(value, l.no, column_of(t, value))?, l.no)),
            _ => return err(l.no, 1, format!("unknown declaration `{key}`")),
        }
        idx += 1;
    }
    if block_used {
        parameters.push(build_parameter(&registry, block)?);
    }
    if parameters.is_empty() {
        return err(1, 1, "session contains no parameter block");
    }
    Ok(Session { registry, parameters })
}

/// Canonical session text for a parameter (used for round-trip checks).
pub fn emit_session(reg: &CharacterRegistry, p: &EnhancedParameter) -> String {
    let mut out = String::new();
    let kind = p.ctx.kind;
    let dim = p.ctx.dim;
    match kind {
        GroupKind::OOdd | GroupKind::OEven => {
            out.push_str(&format!("group = {kind}({dim}, disc={})\n", reg.name(p.ctx.chi_w)));
        }
        GroupKind::U => {
            out.push_str(&format!(
                "group = U({dim}, parity={}, tower={})\n",
                if p.ctx.partner_parity() == 1 { "odd" } else { "even" },
                p.ctx.tower
            ));
            out.push_str(&format!("chi_V = {}\n", reg.name(p.ctx.chi_v)));
            out.push_str(&format!("chi_W = {}\n", reg.name(p.ctx.chi_w)));
        }
        _ => {
            out.push_str(&format!("group = {kind}({dim})\n"));
            out.push_str(&format!("chi_V = {}\n", reg.name(p.ctx.chi_v)));
        }
    }
    out.push_str(&format!("phi = {}\n", p.phi.display(reg)));
    let a = p.component_group(reg).expect("valid parameter");
    let eta: Vec<String> = a
        .slots
        .iter()
        .zip(&p.eta.signs)
        .map(|(s, v)| format!("{}:{}", s.atom.canonical_key(reg), v))
        .collect();
    out.push_str(&format!("eta = {{ {} }}\n", eta.join(", ")));
    if let Some(nu) = p.nu {
        out.push_str(&format!("nu = {nu}\n"));
    }
    out
}
