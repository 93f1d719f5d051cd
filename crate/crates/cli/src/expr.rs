//! A small expression language for root-number queries:
//!
//! * `eps(S4 x S3)` — tensor of two atoms (Clebsch–Gordan closed form or
//!   declared pair tables);
//! * `eps(S2 + S4)` / `eps(u.S2 + S4; psi)` — root number of a formal sum;
//! * `alpha_l(S2 + S2; l=2)` — the multiplicity sign;
//! * `twisted(S2 + S4; chiV=1; l=4; side=minus)` — the reduced twisted
//!   epsilon.

use theta_core::chars::{AddCharTag, CharacterRegistry};
use theta_core::epsilon::{alpha_l, recipe_tag, root_number, twisted_eps, TensorSide};
use theta_core::gp::atom_pair_epsilon;
use theta_core::sign::Sign;

use crate::parser::{parse_term, ParseError};

fn perr(msg: impl Into<String>) -> ParseError {
    ParseError { line: 1, col: 1, msg: msg.into() }
}

fn parse_phi(reg: &CharacterRegistry, text: &str) -> Result<theta_core::wd::WdRep, ParseError> {
    let mut rep = theta_core::wd::WdRep::empty();
    for term in text.split('+') {
        let (atom, mult) = parse_term(reg, term, 1)?;
        rep.add(atom, mult);
    }
    Ok(rep)
}

/// Evaluate an epsilon expression to a sign.
pub fn eval(reg: &CharacterRegistry, expr: &str) -> Result<Sign, Box<dyn std::error::Error>> {
    let expr = expr.trim();
    let (head, inner) = expr
        .split_once('(')
        .ok_or_else(|| perr("expected eps(...), alpha_l(...) or twisted(...)"))?;
    let inner = inner.strip_suffix(')').ok_or_else(|| perr("missing closing parenthesis"))?;
    let mut parts = inner.split(';').map(|s| s.trim());
    let body = parts.next().unwrap_or("");
    let opts: Vec<(String, String)> = parts
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| perr(format!("bad option `{p}` (expected key=value)")))
        })
        .collect::<Result<_, _>>()?;
    let opt = |key: &str| opts.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
    let tag = match opt("tag") {
        Some(t) => AddCharTag::parse(t).ok_or_else(|| perr(format!("unknown tag `{t}`")))?,
        None => recipe_tag(reg),
    };
    match head.trim() {
        "eps" => {
            if let Some((left, right)) = body.split_once(" x ") {
                let (a, ma) = parse_term(reg, left, 1)?;
                let (b, mb) = parse_term(reg, right, 1)?;
                if ma != 1 || mb != 1 {
                    return Err(perr("tensor factors carry no multiplicities").into());
                }
                Ok(atom_pair_epsilon(reg, &a, &b, reg.trivial(), &tag)?)
            } else {
                let rep = parse_phi(reg, body)?;
                let twist = match opt("twist") {
                    Some(name) => reg.by_name(name)?,
                    None => reg.trivial(),
                };
                Ok(root_number(reg, &rep, twist, &tag)?)
            }
        }
        "alpha_l" => {
            let rep = parse_phi(reg, body)?;
            let l: u32 = opt("l").ok_or_else(|| perr("alpha_l needs l=<int>"))?.parse()?;
            Ok(alpha_l(reg, &rep, l)?)
        }
        "twisted" => {
            let rep = parse_phi(reg, body)?;
            let chi_v = match opt("chiV") {
                Some(name) => reg.by_name(name)?,
                None => reg.trivial(),
            };
            let l: u32 = opt("l").ok_or_else(|| perr("twisted needs l=<int>"))?.parse()?;
            let side = match opt("side").unwrap_or("minus") {
                "minus" => TensorSide::Minus,
                "plus" => TensorSide::Plus,
                other => return Err(perr(format!("side is minus or plus, not `{other}`")).into()),
            };
            Ok(twisted_eps(reg, &rep, chi_v, l, side)?)
        }
        other => Err(perr(format!("unknown expression head `{other}`")).into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_expression() {
        let reg = CharacterRegistry::default_split(false);
        assert_eq!(eval(&reg, "eps(S4 x S3)").unwrap(), Sign::Minus);
        assert_eq!(eval(&reg, "eps(S2 x S3)").unwrap(), Sign::Plus);
    }

    #[test]
    fn sum_and_alpha() {
        let reg = CharacterRegistry::default_split(false);
        assert_eq!(eval(&reg, "eps(S2 + S4)").unwrap(), Sign::Plus);
        assert_eq!(eval(&reg, "alpha_l(S2; l=2)").unwrap(), Sign::Minus);
        assert_eq!(eval(&reg, "twisted(S2 + S4; chiV=1; l=4; side=minus)").unwrap(), Sign::Minus);
    }
}
