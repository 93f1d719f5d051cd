//! Field and character bookkeeping.
//!
//! Characters are purely symbolic: a registry is a finite abelian group of
//! labels, each carrying its value at -1, a triviality flag and whatever
//! other values (at declared symbols of E^x) the recipes consume.  No field
//! element is ever materialized.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;
use crate::sign::Sign;
use crate::wd::GenericDecl;
use crate::Result;

/// Base field data: E = F or a quadratic extension E/F.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Split,
    Quadratic { omega_at_minus1: Sign },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldContext {
    pub kind: FieldKind,
    /// Documentation-only flag; the calculus itself is characteristic-free.
    pub residue_char_odd: bool,
}

impl FieldContext {
    pub fn split() -> FieldContext {
        FieldContext { kind: FieldKind::Split, residue_char_odd: true }
    }

    pub fn quadratic(omega_at_minus1: Sign) -> FieldContext {
        FieldContext { kind: FieldKind::Quadratic { omega_at_minus1 }, residue_char_odd: true }
    }

    pub fn is_quadratic(&self) -> bool {
        matches!(self.kind, FieldKind::Quadratic { .. })
    }

    /// omega_{E/F}(-1); only meaningful over a quadratic extension.
    pub fn omega_at_minus1(&self) -> Option<Sign> {
        match self.kind {
            FieldKind::Split => None,
            FieldKind::Quadratic { omega_at_minus1 } => Some(omega_at_minus1),
        }
    }
}

/// Tag naming a fixed additive character; root-number tables are keyed by it.
/// There is no runtime rescaling between tags.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AddCharTag {
    Psi,
    PsiC(String),
    PsiE,
    PsiE2,
    PsiETrace,
}

impl AddCharTag {
    pub fn valid_for(&self, field: &FieldContext) -> bool {
        match self {
            AddCharTag::Psi => true,
            AddCharTag::PsiC(_) => !field.is_quadratic(),
            AddCharTag::PsiE | AddCharTag::PsiE2 | AddCharTag::PsiETrace => field.is_quadratic(),
        }
    }

    /// Whether the tag is conjugation-odd (psi' o c = psi'^{-1}); the
    /// trace-zero family is, the trace-composed character is not.
    pub fn conj_odd(&self) -> bool {
        matches!(self, AddCharTag::PsiE | AddCharTag::PsiE2)
    }

    pub fn parse(s: &str) -> Option<AddCharTag> {
        match s {
            "psi" => Some(AddCharTag::Psi),
            "psiE" => Some(AddCharTag::PsiE),
            "psiE2" => Some(AddCharTag::PsiE2),
            "psiEtrace" => Some(AddCharTag::PsiETrace),
            _ => {
                let inner = s.strip_prefix("psi_c(")?.strip_suffix(')')?;
                Some(AddCharTag::PsiC(inner.to_string()))
            }
        }
    }
}

impl fmt::Display for AddCharTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AddCharTag::Psi => f.write_str("psi"),
            AddCharTag::PsiC(c) => write!(f, "psi_c({c})"),
            AddCharTag::PsiE => f.write_str("psiE"),
            AddCharTag::PsiE2 => f.write_str("psiE2"),
            AddCharTag::PsiETrace => f.write_str("psiEtrace"),
        }
    }
}

/// Behaviour of a character of E^x on F^x, for E != F.  This is exactly the
/// data deciding conjugate self-duality and its sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConjRestriction {
    TrivialOnF,
    EqualsOmegaOnF,
    NotApplicable,
}

impl ConjRestriction {
    /// Conjugate self-duality sign of the character, when declared.
    pub fn conj_sign(self) -> Option<Sign> {
        match self {
            ConjRestriction::TrivialOnF => Some(Sign::Plus),
            ConjRestriction::EqualsOmegaOnF => Some(Sign::Minus),
            ConjRestriction::NotApplicable => None,
        }
    }
}

/// Index of a character within its registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharId(pub u16);

#[derive(Debug, Clone)]
pub struct TwistCharacter {
    pub name: String,
    pub is_trivial: bool,
    pub quadratic: bool,
    pub value_at_minus1: Sign,
    /// Values at declared symbols of E^x / squares (e.g. "2", "u", "pi").
    pub values: BTreeMap<String, Sign>,
    pub conj_restriction: ConjRestriction,
}

/// delta(chi = 1): +1 for the trivial character, -1 otherwise.
pub fn delta_indicator(chi: &TwistCharacter) -> Sign {
    if chi.is_trivial {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// A finite registry of twist characters together with its group law and
/// all declared root-number data (character-level, atom-level and pairwise).
#[derive(Debug, Clone)]
pub struct CharacterRegistry {
    pub field: FieldContext,
    chars: Vec<TwistCharacter>,
    product: Vec<Vec<u16>>,
    chi_minus1: Option<CharId>,
    /// eps(chi, tag) at the one-dimensional level; odd SL2 sizes derive from it.
    char_eps: BTreeMap<(u16, AddCharTag), Sign>,
    /// Fallback eps values keyed by canonical atom text.
    atom_eps: BTreeMap<(String, AddCharTag), Sign>,
    /// Pairwise eps values keyed by the two canonical atom texts (sorted).
    pair_eps: BTreeMap<(String, String, AddCharTag), Sign>,
    generics: BTreeMap<String, GenericDecl>,
}

impl CharacterRegistry {
    pub fn builder(field: FieldContext) -> RegistryBuilder {
        RegistryBuilder {
            field,
            chars: Vec::new(),
            products: Vec::new(),
            chi_minus1: None,
            char_eps: BTreeMap::new(),
            atom_eps: BTreeMap::new(),
            pair_eps: BTreeMap::new(),
            generics: BTreeMap::new(),
        }
    }

    /// The default split-field registry {1, u, pi, u*pi} modelling
    /// F^x/F^x2 for odd residue characteristic.  `minus_one_square` decides
    /// the value of the ramified characters at -1 and which element plays
    /// the character attached to -1.
    pub fn default_split(minus_one_square: bool) -> CharacterRegistry {
        let ram_minus1 = if minus_one_square { Sign::Plus } else { Sign::Minus };
        let mut b = Self::builder(FieldContext::split());
        b.push_char("1", true, true, Sign::Plus, &[("2", Sign::Plus), ("u", Sign::Plus), ("pi", Sign::Plus), ("upi", Sign::Plus)], ConjRestriction::NotApplicable);
        // chi_u(x) = (-1)^{v(x)}: +1 on units, -1 on uniformizers.
        b.push_char("u", false, true, Sign::Plus, &[("2", Sign::Plus), ("u", Sign::Plus), ("pi", Sign::Minus), ("upi", Sign::Minus)], ConjRestriction::NotApplicable);
        // chi_pi: quadratic residue symbol on units; chi_pi(pi) = chi_pi(-1).
        b.push_char("pi", false, true, ram_minus1, &[("u", Sign::Minus), ("pi", ram_minus1), ("upi", -ram_minus1)], ConjRestriction::NotApplicable);
        b.push_char("upi", false, true, ram_minus1, &[("u", Sign::Minus), ("pi", -ram_minus1), ("upi", ram_minus1)], ConjRestriction::NotApplicable);
        let table = [
            ["1", "u", "pi", "upi"],
            ["u", "1", "upi", "pi"],
            ["pi", "upi", "1", "u"],
            ["upi", "pi", "u", "1"],
        ];
        let names = ["1", "u", "pi", "upi"];
        for (i, row) in table.iter().enumerate() {
            for (j, prod) in row.iter().enumerate() {
                b.set_product(names[i], names[j], prod);
            }
        }
        b.set_chi_minus1(if minus_one_square { "1" } else { "u" });
        // Unramified characters have unit root number for the standard psi.
        b.declare_char_eps("1", AddCharTag::Psi, Sign::Plus);
        b.declare_char_eps("u", AddCharTag::Psi, Sign::Plus);
        b.finish().expect("default split registry is valid")
    }

    /// The default quadratic-field registry {1, a, b, ab}: `a` restricts
    /// trivially to F^x, `b` and `ab` restrict to omega_{E/F}.  Values at -1
    /// are forced by the restriction (the element -1 lies in F^x).
    pub fn default_quadratic(omega_at_minus1: Sign) -> CharacterRegistry {
        let mut b = Self::builder(FieldContext::quadratic(omega_at_minus1));
        b.push_char("1", true, true, Sign::Plus, &[("2", Sign::Plus)], ConjRestriction::TrivialOnF);
        b.push_char("a", false, true, Sign::Plus, &[], ConjRestriction::TrivialOnF);
        b.push_char("b", false, true, omega_at_minus1, &[], ConjRestriction::EqualsOmegaOnF);
        b.push_char("ab", false, true, omega_at_minus1, &[], ConjRestriction::EqualsOmegaOnF);
        let table = [
            ["1", "a", "b", "ab"],
            ["a", "1", "ab", "b"],
            ["b", "ab", "1", "a"],
            ["ab", "b", "a", "1"],
        ];
        let names = ["1", "a", "b", "ab"];
        for (i, row) in table.iter().enumerate() {
            for (j, prod) in row.iter().enumerate() {
                b.set_product(names[i], names[j], prod);
            }
        }
        // Characters trivial on F^x have unit root number against the
        // trace-zero additive characters; the omega-restricting ones carry
        // genuinely arithmetic signs, fixed here as registry data.
        for tag in [AddCharTag::PsiE2, AddCharTag::PsiE] {
            b.declare_char_eps("1", tag.clone(), Sign::Plus);
            b.declare_char_eps("a", tag.clone(), Sign::Plus);
            b.declare_char_eps("b", tag.clone(), Sign::Plus);
            b.declare_char_eps("ab", tag, Sign::Minus);
        }
        b.finish().expect("default quadratic registry is valid")
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn get(&self, id: CharId) -> &TwistCharacter {
        &self.chars[id.0 as usize]
    }

    pub fn name(&self, id: CharId) -> &str {
        &self.get(id).name
    }

    pub fn ids(&self) -> impl Iterator<Item = CharId> {
        (0..self.chars.len() as u16).map(CharId)
    }

    pub fn trivial(&self) -> CharId {
        CharId(
            self.chars
                .iter()
                .position(|c| c.is_trivial)
                .expect("registry contains the trivial character") as u16,
        )
    }

    pub fn by_name(&self, name: &str) -> Result<CharId> {
        self.chars
            .iter()
            .position(|c| c.name == name)
            .map(|i| CharId(i as u16))
            .ok_or_else(|| Error::UnknownCharacter(name.to_string()))
    }

    pub fn product(&self, a: CharId, b: CharId) -> CharId {
        CharId(self.product[a.0 as usize][b.0 as usize])
    }

    /// Group inverse via the product table.
    pub fn inverse(&self, a: CharId) -> CharId {
        let triv = self.trivial();
        for x in self.ids() {
            if self.product(a, x) == triv {
                return x;
            }
        }
        unreachable!("registry product table is a group");
    }

    /// n-fold power of a character.
    pub fn power(&self, a: CharId, n: u32) -> CharId {
        let mut acc = self.trivial();
        // Quadratic shortcut covers nearly every call.
        if self.get(a).quadratic {
            return if n % 2 == 0 { acc } else { a };
        }
        for _ in 0..n {
            acc = self.product(acc, a);
        }
        acc
    }

    pub fn is_trivial(&self, a: CharId) -> bool {
        self.get(a).is_trivial
    }

    pub fn delta(&self, a: CharId) -> Sign {
        delta_indicator(self.get(a))
    }

    pub fn value_at_minus1(&self, a: CharId) -> Sign {
        self.get(a).value_at_minus1
    }

    pub fn value_at(&self, a: CharId, symbol: &str) -> Result<Sign> {
        if symbol == "-1" {
            return Ok(self.value_at_minus1(a));
        }
        let c = self.get(a);
        if c.is_trivial {
            return Ok(Sign::Plus);
        }
        c.values.get(symbol).copied().ok_or_else(|| Error::UnknownCharacterValue {
            chi: c.name.clone(),
            symbol: symbol.to_string(),
        })
    }

    /// Conjugate self-duality sign of a character (E != F).
    pub fn conj_sign(&self, a: CharId) -> Result<Sign> {
        self.get(a)
            .conj_restriction
            .conj_sign()
            .ok_or_else(|| Error::IncompleteDualityData(self.name(a).to_string()))
    }

    /// The registry element playing the quadratic character attached to -1.
    pub fn chi_minus1(&self) -> Result<CharId> {
        self.chi_minus1
            .ok_or_else(|| Error::Other("registry declares no character attached to -1".into()))
    }

    pub fn char_eps(&self, a: CharId, tag: &AddCharTag) -> Option<Sign> {
        if self.is_trivial(a) {
            // Normalized so that the trivial character has unit root number
            // for every fixed tag.
            return Some(Sign::Plus);
        }
        self.char_eps.get(&(a.0, tag.clone())).copied()
    }

    pub fn atom_eps(&self, key: &str, tag: &AddCharTag) -> Option<Sign> {
        self.atom_eps.get(&(key.to_string(), tag.clone())).copied()
    }

    pub fn pair_eps(&self, k1: &str, k2: &str, tag: &AddCharTag) -> Option<Sign> {
        let (a, b) = if k1 <= k2 { (k1, k2) } else { (k2, k1) };
        self.pair_eps.get(&(a.to_string(), b.to_string(), tag.clone())).copied()
    }

    pub fn generic(&self, label: &str) -> Result<&GenericDecl> {
        self.generics.get(label).ok_or_else(|| Error::UnknownAtom(label.to_string()))
    }

    pub fn generic_labels(&self) -> impl Iterator<Item = &str> {
        self.generics.keys().map(|s| s.as_str())
    }

    /// Group product of `a` and `b`, by name lookup.
    pub fn char_product(&self, a: CharId, b: CharId) -> CharId {
        self.product(a, b)
    }
}

/// Mutable assembly of a [`CharacterRegistry`]; `finish` checks the group
/// axioms and the value coherence exhaustively (the table is tiny).
pub struct RegistryBuilder {
    field: FieldContext,
    chars: Vec<TwistCharacter>,
    products: Vec<(String, String, String)>,
    chi_minus1: Option<String>,
    char_eps: BTreeMap<(String, AddCharTag), Sign>,
    atom_eps: BTreeMap<(String, AddCharTag), Sign>,
    pair_eps: BTreeMap<(String, String, AddCharTag), Sign>,
    generics: BTreeMap<String, GenericDecl>,
}

impl RegistryBuilder {
    pub fn push_char(
        &mut self,
        name: &str,
        is_trivial: bool,
        quadratic: bool,
        value_at_minus1: Sign,
        values: &[(&str, Sign)],
        conj_restriction: ConjRestriction,
    ) -> &mut Self {
        self.chars.push(TwistCharacter {
            name: name.to_string(),
            is_trivial,
            quadratic,
            value_at_minus1,
            values: values.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            conj_restriction,
        });
        self
    }

    pub fn push_char_full(&mut self, c: TwistCharacter) -> &mut Self {
        self.chars.push(c);
        self
    }

    pub fn set_product(&mut self, a: &str, b: &str, c: &str) -> &mut Self {
        self.products.push((a.to_string(), b.to_string(), c.to_string()));
        self
    }

    pub fn set_chi_minus1(&mut self, name: &str) -> &mut Self {
        self.chi_minus1 = Some(name.to_string());
        self
    }

    pub fn declare_char_eps(&mut self, name: &str, tag: AddCharTag, value: Sign) -> &mut Self {
        self.char_eps.insert((name.to_string(), tag), value);
        self
    }

    pub fn declare_atom_eps(&mut self, key: &str, tag: AddCharTag, value: Sign) -> &mut Self {
        self.atom_eps.insert((key.to_string(), tag), value);
        self
    }

    pub fn declare_pair_eps(&mut self, k1: &str, k2: &str, tag: AddCharTag, value: Sign) -> &mut Self {
        let (a, b) = if k1 <= k2 { (k1, k2) } else { (k2, k1) };
        self.pair_eps.insert((a.to_string(), b.to_string(), tag), value);
        self
    }

    pub fn declare_generic(&mut self, decl: GenericDecl) -> &mut Self {
        self.generics.insert(decl.label.clone(), decl);
        self
    }

    pub fn finish(self) -> Result<CharacterRegistry> {
        let n = self.chars.len();
        if n == 0 {
            return Err(Error::BadRegistry("empty registry".into()));
        }
        let idx = |name: &str| -> Result<usize> {
            self.chars
                .iter()
                .position(|c| c.name == name)
                .ok_or_else(|| Error::UnknownCharacter(name.to_string()))
        };
        let trivial_count = self.chars.iter().filter(|c| c.is_trivial).count();
        if trivial_count != 1 {
            return Err(Error::BadRegistry(format!("expected exactly one trivial character, found {trivial_count}")));
        }
        let triv = self.chars.iter().position(|c| c.is_trivial).unwrap();
        if self.chars[triv].value_at_minus1 != Sign::Plus || !self.chars[triv].quadratic {
            return Err(Error::BadRegistry("the trivial character must be quadratic with value +1 at -1".into()));
        }
        let mut product = vec![vec![u16::MAX; n]; n];
        for (a, b, c) in &self.products {
            let (ia, ib, ic) = (idx(a)?, idx(b)?, idx(c)?);
            product[ia][ib] = ic as u16;
            product[ib][ia] = ic as u16;
        }
        for i in 0..n {
            product[i][triv] = i as u16;
            product[triv][i] = i as u16;
        }
        for i in 0..n {
            for j in 0..n {
                if product[i][j] == u16::MAX {
                    return Err(Error::BadRegistry(format!(
                        "product {} * {} undeclared",
                        self.chars[i].name, self.chars[j].name
                    )));
                }
            }
        }
        // Associativity, commutativity, inverses, quadratic flags, and the
        // homomorphism property of the declared values.
        for i in 0..n {
            for j in 0..n {
                if product[i][j] != product[j][i] {
                    return Err(Error::BadRegistry("product table is not commutative".into()));
                }
                for k in 0..n {
                    if product[product[i][j] as usize][k] != product[i][product[j][k] as usize] {
                        return Err(Error::BadRegistry("product table is not associative".into()));
                    }
                }
            }
            if !(0..n).any(|j| product[i][j] as usize == triv) {
                return Err(Error::BadRegistry(format!("character {} has no inverse", self.chars[i].name)));
            }
            let sq = product[i][i] as usize;
            if self.chars[i].quadratic != (sq == triv) {
                return Err(Error::BadRegistry(format!(
                    "quadratic flag of {} disagrees with the product table",
                    self.chars[i].name
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let p = product[i][j] as usize;
                if self.chars[i].value_at_minus1 * self.chars[j].value_at_minus1 != self.chars[p].value_at_minus1 {
                    return Err(Error::BadRegistry("value at -1 is not multiplicative over the table".into()));
                }
                for (sym, v) in &self.chars[i].values {
                    if let Some(w) = self.chars[j].values.get(sym) {
                        if let Some(pv) = self.chars[p].values.get(sym) {
                            if *v * *w != *pv {
                                return Err(Error::BadRegistry(format!("value at `{sym}` is not multiplicative")));
                            }
                        }
                    }
                }
            }
        }
        if self.field.is_quadratic() {
            let omega_m1 = self.field.omega_at_minus1().unwrap();
            for c in &self.chars {
                // -1 lies in F^x, so the value at -1 is forced by the
                // restriction class.
                match c.conj_restriction {
                    ConjRestriction::TrivialOnF if c.value_at_minus1 != Sign::Plus => {
                        return Err(Error::BadRegistry(format!(
                            "{} restricts trivially to F but has value -1 at -1",
                            c.name
                        )));
                    }
                    ConjRestriction::EqualsOmegaOnF if c.value_at_minus1 != omega_m1 => {
                        return Err(Error::BadRegistry(format!(
                            "{} restricts to omega on F but disagrees with omega at -1",
                            c.name
                        )));
                    }
                    _ => {}
                }
            }
            for (i, ci) in self.chars.iter().enumerate() {
                for (j, cj) in self.chars.iter().enumerate() {
                    let (si, sj) = (ci.conj_restriction.conj_sign(), cj.conj_restriction.conj_sign());
                    if let (Some(si), Some(sj)) = (si, sj) {
                        let sp = self.chars[product[i][j] as usize].conj_restriction.conj_sign();
                        if sp != Some(si * sj) {
                            return Err(Error::BadRegistry("conjugate restriction class is not multiplicative".into()));
                        }
                    }
                }
            }
        }
        let chi_minus1 = match self.chi_minus1 {
            Some(name) => Some(CharId(idx(&name)? as u16)),
            None => None,
        };
        let mut char_eps = BTreeMap::new();
        for ((name, tag), v) in self.char_eps {
            if !tag.valid_for(&self.field) {
                return Err(Error::BadTag { tag: tag.to_string() });
            }
            char_eps.insert((idx(&name)? as u16, tag), v);
        }
        Ok(CharacterRegistry {
            field: self.field,
            chars: self.chars,
            product,
            chi_minus1,
            char_eps,
            atom_eps: self.atom_eps,
            pair_eps: self.pair_eps,
            generics: self.generics,
        })
    }
}
