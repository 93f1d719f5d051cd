//! Library surface of the command-line tool, exposed for integration tests.

pub mod emit;
pub mod expr;
pub mod parser;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use theta_core::gp::{gp_pair, prasad_almost_equal_rank, prasad_equal_rank, GpCase};
use theta_core::llc::{component_group_of, validate};
use theta_core::oracle;
use theta_core::sign::Sign;
use theta_core::theta::{tabulate, tower_report};
use theta_core::universe::Limits;
use theta_core::wd::DualityClass;

use parser::{parse_session, Session};

#[derive(Parser)]
#[command(
    name = "thetalift",
    about = "Symbolic local theta correspondence on enhanced L-parameters",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Args)]
pub struct InputArgs {
    /// Session file with a registry block and parameter block(s).
    #[arg(long)]
    pub input: std::path::PathBuf,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
}

#[derive(Subcommand)]
pub enum Command {
    /// Tabulate the theta lifts on both Witt towers.
    Compute {
        #[command(flatten)]
        input: InputArgs,
        /// Largest target dimension (default: first occurrence of the
        /// going-up tower plus 4).
        #[arg(long)]
        max_m: Option<u32>,
    },
    /// First-occurrence indices, tower selection and the admission trace.
    FirstOccurrence {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Evaluate a root-number expression, e.g. "eps(S4 x S3)".
    Epsilon {
        expr: String,
        /// Optional session file whose registry supplies characters/tables.
        #[arg(long)]
        input: Option<std::path::PathBuf>,
    },
    /// Distinguished pair of a restriction problem (two parameter blocks).
    Gp {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum)]
        case: GpCaseArg,
        /// Central sign for the orthogonal case.
        #[arg(long)]
        nu: Option<String>,
        /// Class symbol c for the symplectic-metaplectic case.
        #[arg(long)]
        c: Option<String>,
        /// Character with chi|F = omega for the skew-hermitian cases.
        #[arg(long)]
        chi: Option<String>,
    },
    /// Equal or almost-equal rank correspondence.
    Prasad {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum)]
        rank: RankArg,
    },
    /// Run an exhaustive cross-validation suite.
    Oracle {
        #[arg(long, value_enum)]
        check: OracleCheck,
        #[arg(long, default_value_t = 12)]
        max_dim: u32,
        #[arg(long, default_value_t = 8)]
        max_sl2: u32,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GpCaseArg {
    Orthogonal,
    Hermitian,
    SymplecticMetaplectic,
    SkewHermitian,
    SkewHermitianConjugate,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RankArg {
    Equal,
    Almost,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleCheck {
    TwistedEps,
    Cg,
    Conservation,
    Roundtrip,
    Validity,
}

fn load(path: &std::path::Path) -> Result<Session> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let session = parse_session(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    for p in &session.parameters {
        let violations = validate(&session.registry, p);
        if !violations.is_empty() {
            bail!(
                "{}: invalid parameter for {}: {}",
                path.display(),
                emit::group_str(&session.registry, p),
                theta_core::fmt_violations(&violations)
            );
        }
    }
    Ok(session)
}

/// Run a parsed command, returning the text that should go to stdout.
pub fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Compute { input, max_m } => {
            let session = load(&input.input)?;
            let reg = &session.registry;
            let mut out = String::new();
            let mut docs = Vec::new();
            for p in &session.parameters {
                let report = tower_report(reg, p)?;
                let m_max = max_m.unwrap_or(report.m_up + 4);
                let (report, rows) = tabulate(reg, p, m_max)?;
                match input.format {
                    Format::Json => docs.push(emit::compute_json(reg, p, &report, &rows)),
                    Format::Table => {
                        out.push_str(&format!("{}  phi = {}\n", emit::group_str(reg, p), p.phi.display(reg)));
                        out.push_str(&emit::report_table(&report));
                        out.push_str(&emit::rows_table(reg, &rows));
                        out.push('\n');
                    }
                }
            }
            if input.format == Format::Json {
                let v = if docs.len() == 1 { docs.pop().unwrap() } else { json!(docs) };
                out = serde_json::to_string_pretty(&v)?;
                out.push('\n');
            }
            Ok(out)
        }
        Command::FirstOccurrence { input } => {
            let session = load(&input.input)?;
            let reg = &session.registry;
            let mut out = String::new();
            let mut docs = Vec::new();
            for p in &session.parameters {
                let report = tower_report(reg, p)?;
                match input.format {
                    Format::Json => docs.push(json!({
                        "schema": 1,
                        "normalization": emit::NORMALIZATION_NOTE,
                        "group": emit::group_str(reg, p),
                        "first_occurrence": emit::report_json(&report),
                    })),
                    Format::Table => {
                        out.push_str(&format!("{}  phi = {}\n", emit::group_str(reg, p), p.phi.display(reg)));
                        out.push_str(&emit::report_table(&report));
                        out.push('\n');
                    }
                }
            }
            if input.format == Format::Json {
                let v = if docs.len() == 1 { docs.pop().unwrap() } else { json!(docs) };
                out = serde_json::to_string_pretty(&v)?;
                out.push('\n');
            }
            Ok(out)
        }
        Command::Epsilon { expr, input } => {
            let reg = match input {
                Some(path) => load(&path)?.registry,
                None => theta_core::chars::CharacterRegistry::default_split(false),
            };
            let v = expr::eval(&reg, &expr).map_err(|e| anyhow!("{e}"))?;
            Ok(format!("{v}1\n"))
        }
        Command::Gp { input, case, nu, c, chi } => {
            let session = load(&input.input)?;
            let reg = &session.registry;
            if session.parameters.len() < 2 {
                bail!("the gp subcommand needs two parameter blocks (separated by ---)");
            }
            let phi = &session.parameters[0].phi;
            let phi_prime = &session.parameters[1].phi;
            let case = match case {
                GpCaseArg::Orthogonal => {
                    let nu = nu.as_deref().and_then(Sign::parse).unwrap_or(Sign::Plus);
                    GpCase::Orthogonal { nu }
                }
                GpCaseArg::Hermitian => GpCase::Hermitian,
                GpCaseArg::SymplecticMetaplectic => {
                    let c_symbol = c.unwrap_or_else(|| "1".to_string());
                    let chi_c = if c_symbol == "1" { reg.trivial() } else { reg.by_name(&c_symbol)? };
                    GpCase::SymplecticMetaplectic { c_symbol, chi_c }
                }
                GpCaseArg::SkewHermitian => GpCase::SkewHermitian {
                    chi: reg.by_name(chi.as_deref().ok_or_else(|| anyhow!("--chi is required"))?)?,
                },
                GpCaseArg::SkewHermitianConjugate => GpCase::SkewHermitianConjugate {
                    chi: reg.by_name(chi.as_deref().ok_or_else(|| anyhow!("--chi is required"))?)?,
                },
            };
            let (left, right) = gp_pair(reg, phi, phi_prime, &case)?;
            let classes: [(DualityClass, &theta_core::wd::WdRep, &theta_core::llc::EtaCharacter); 2] = match &case
            {
                GpCase::Orthogonal { .. } | GpCase::SymplecticMetaplectic { .. } => [
                    (DualityClass::Orthogonal, phi, &left),
                    (DualityClass::Symplectic, phi_prime, &right),
                ],
                GpCase::Hermitian => {
                    let m = phi.dim(reg)? as i64;
                    [
                        (DualityClass::from_sign(Sign::from_parity(m + 1), true), phi, &left),
                        (DualityClass::from_sign(Sign::from_parity(m), true), phi_prime, &right),
                    ]
                }
                GpCase::SkewHermitian { .. } | GpCase::SkewHermitianConjugate { .. } => {
                    let n = phi.dim(reg)? as i64;
                    let cls = DualityClass::from_sign(Sign::from_parity(n + 1), true);
                    [(cls, phi, &left), (cls, phi_prime, &right)]
                }
            };
            match input.format {
                Format::Json => {
                    let mut sides = Vec::new();
                    for (class, rep, eta) in classes {
                        let a = component_group_of(reg, rep, class)?;
                        let mut map = serde_json::Map::new();
                        for (slot, sign) in a.slots.iter().zip(&eta.signs) {
                            map.insert(slot.atom.canonical_key(reg), json!(emit::sign_str(*sign)));
                        }
                        sides.push(json!({
                            "phi": emit::phi_json(reg, rep),
                            "iota": map,
                            "eta_z": emit::sign_str(eta.eval(a.z_mask())),
                        }));
                    }
                    Ok(format!(
                        "{}\n",
                        serde_json::to_string_pretty(&json!({
                            "schema": 1,
                            "normalization": emit::NORMALIZATION_NOTE,
                            "pair": sides,
                        }))?
                    ))
                }
                Format::Table => {
                    let mut out = String::new();
                    for (idx, (class, rep, eta)) in classes.into_iter().enumerate() {
                        let a = component_group_of(reg, rep, class)?;
                        let vals = a
                            .slots
                            .iter()
                            .zip(&eta.signs)
                            .map(|(s, v)| format!("{}:{}", s.atom.canonical_key(reg), v))
                            .collect::<Vec<_>>()
                            .join(" ");
                        out.push_str(&format!(
                            "side {}: phi = {}  iota = {{ {} }}  eta(z) = {}\n",
                            idx + 1,
                            rep.display(reg),
                            vals,
                            eta.eval(a.z_mask())
                        ));
                    }
                    Ok(out)
                }
            }
        }
        Command::Prasad { input, rank } => {
            let session = load(&input.input)?;
            let reg = &session.registry;
            let p = &session.parameters[0];
            match rank {
                RankArg::Equal => {
                    let out = prasad_equal_rank(reg, p)?;
                    match input.format {
                        Format::Json => Ok(format!(
                            "{}\n",
                            serde_json::to_string_pretty(&json!({
                                "schema": 1,
                                "normalization": emit::NORMALIZATION_NOTE,
                                "nonvanishing_tower": emit::sign_str(out.tower),
                                "epsilon_criterion": emit::sign_str(out.epsilon_criterion),
                                "lifted": {
                                    "group": emit::group_str(reg, &out.lifted),
                                    "phi": emit::phi_json(reg, &out.lifted.phi),
                                    "eta": emit::eta_json(reg, &out.lifted),
                                },
                            }))?
                        )),
                        Format::Table => Ok(format!(
                            "nonvanishing tower: {}\nepsilon criterion: {}1\nlift: {} with phi = {}\n",
                            out.tower,
                            out.epsilon_criterion,
                            emit::group_str(reg, &out.lifted),
                            out.lifted.phi.display(reg)
                        )),
                    }
                }
                RankArg::Almost => {
                    let out = prasad_almost_equal_rank(reg, p)?;
                    match input.format {
                        Format::Json => {
                            let lifts: Vec<_> = out
                                .lifts
                                .iter()
                                .map(|l| {
                                    json!({
                                        "form": l.form.map(emit::sign_str),
                                        "group": emit::group_str(reg, &l.parameter),
                                        "phi": emit::phi_json(reg, &l.parameter.phi),
                                        "eta": emit::eta_json(reg, &l.parameter),
                                        "notes": l.notes.iter().map(|n| n.to_string()).collect::<Vec<_>>(),
                                    })
                                })
                                .collect();
                            Ok(format!(
                                "{}\n",
                                serde_json::to_string_pretty(&json!({
                                    "schema": 1,
                                    "normalization": emit::NORMALIZATION_NOTE,
                                    "m": out.m,
                                    "phi_contains_chi_V": out.phi_contains_chi_v,
                                    "stated_form": out.stated_form.map(emit::sign_str),
                                    "lifts": lifts,
                                }))?
                            ))
                        }
                        Format::Table => {
                            let mut s = format!(
                                "m = {}   phi {} chi_V   stated form: {}\n",
                                out.m,
                                if out.phi_contains_chi_v { "contains" } else { "does not contain" },
                                out.stated_form.map(|x| x.to_string()).unwrap_or_else(|| "n/a".into())
                            );
                            for l in &out.lifts {
                                s.push_str(&format!(
                                    "form {}: {} with phi = {}\n",
                                    l.form.map(|x| x.to_string()).unwrap_or_else(|| "unique".into()),
                                    emit::group_str(reg, &l.parameter),
                                    l.parameter.phi.display(reg)
                                ));
                            }
                            Ok(s)
                        }
                    }
                }
            }
        }
        Command::Oracle { check, max_dim, max_sl2 } => {
            let limits = Limits { max_dim, max_sl2 };
            let outcome = match check {
                OracleCheck::TwistedEps => oracle::check_twisted_eps(limits, max_sl2),
                OracleCheck::Cg => oracle::check_cg(max_sl2.max(6)),
                OracleCheck::Conservation => oracle::check_conservation(limits),
                OracleCheck::Roundtrip => oracle::check_roundtrip(limits),
                OracleCheck::Validity => oracle::check_validity(limits, 4),
            };
            let mut out = format!("{outcome}\n");
            for f in &outcome.failures {
                out.push_str(&format!("  {f}\n"));
            }
            if outcome.passed() {
                Ok(out)
            } else {
                bail!("{out}");
            }
        }
    }
}
