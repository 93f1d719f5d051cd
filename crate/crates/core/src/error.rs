use thiserror::Error;

/// Errors raised by the symbolic calculus.
///
/// Missing table data is always reported with the exact entry that must be
/// supplied; nothing is ever silently defaulted.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown character `{0}` in this registry")]
    UnknownCharacter(String),
    #[error("character `{chi}` has no declared value at `{symbol}`")]
    UnknownCharacterValue { chi: String, symbol: String },
    #[error("unknown generic atom label `{0}`")]
    UnknownAtom(String),
    #[error("registry is not a valid character group: {0}")]
    BadRegistry(String),
    #[error("additive character tag `{tag}` is not valid over this field")]
    BadTag { tag: String },
    #[error("SL2 dimensions {0} and {1} have equal parity; no sign-valued tensor epsilon")]
    ParityError(u32, u32),
    #[error("character `{0}` is not quadratic")]
    NotQuadratic(String),
    #[error("missing root-number data: eps({atom}, {tag}) with twist `{twist}` must be declared")]
    MissingRootData { atom: String, twist: String, tag: String },
    #[error("missing pair root-number data: eps({left} x {right}, {tag}) must be declared")]
    MissingPairRootData { left: String, right: String, tag: String },
    #[error("duality data incomplete for atom `{0}`")]
    IncompleteDualityData(String),
    #[error("representation does not carry (conjugate) self-duality of sign {expected:+} required here")]
    SignMismatch { expected: i8 },
    #[error("oracle inapplicable: {0}")]
    OracleInapplicable(String),
    #[error("dimension {m} is below the first occurrence index {first} on this tower")]
    BelowFirstOccurrence { m: u32, first: u32 },
    #[error("dimension {m} does not lie on the going-down tower (first occurrence {first}, parity mismatch)")]
    NotOnDownTower { m: u32, first: u32 },
    #[error("dimension {m} does not lie on the going-up tower (first occurrence {first}, parity mismatch)")]
    NotOnUpTower { m: u32, first: u32 },
    #[error("target dimension {m} has the wrong parity for this tower (expected {expected} mod 2)")]
    ParityMismatch { m: u32, expected: u32 },
    #[error("both towers coincide (l = -1); use the tower-explicit lift")]
    AmbiguousTower,
    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),
    #[error("case mismatch: {0}")]
    CaseMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("alternating identity violated: eta(e_1+e_{l}) != (-1)^((l-1)/2) on a going-down lift")]
    AlternatingIdentity { l: u32 },
    #[error("{0}")]
    Other(String),
}
