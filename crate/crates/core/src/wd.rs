//! The formal algebra of Weil–Deligne representations: multisets of
//! irreducible atoms `rho ⊠ S_k`, with Clebsch–Gordan tensor against `S_r`,
//! character twists, duals and (conjugate) self-duality classification.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::chars::{AddCharTag, CharId, CharacterRegistry};
use crate::error::Error;
use crate::sign::{HalfInt, Sign};
use crate::Result;

/// (Conjugate) self-duality class of an atom or representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualityClass {
    Orthogonal,
    Symplectic,
    ConjOrthogonal,
    ConjSymplectic,
    None,
}

impl DualityClass {
    pub fn sign(self) -> Option<Sign> {
        match self {
            DualityClass::Orthogonal | DualityClass::ConjOrthogonal => Some(Sign::Plus),
            DualityClass::Symplectic | DualityClass::ConjSymplectic => Some(Sign::Minus),
            DualityClass::None => None,
        }
    }

    pub fn is_conjugate(self) -> bool {
        matches!(self, DualityClass::ConjOrthogonal | DualityClass::ConjSymplectic)
    }

    pub fn from_sign(sign: Sign, conjugate: bool) -> DualityClass {
        match (sign, conjugate) {
            (Sign::Plus, false) => DualityClass::Orthogonal,
            (Sign::Minus, false) => DualityClass::Symplectic,
            (Sign::Plus, true) => DualityClass::ConjOrthogonal,
            (Sign::Minus, true) => DualityClass::ConjSymplectic,
        }
    }

    pub fn parse(s: &str) -> Option<DualityClass> {
        match s {
            "orthogonal" => Some(DualityClass::Orthogonal),
            "symplectic" => Some(DualityClass::Symplectic),
            "conj-orthogonal" => Some(DualityClass::ConjOrthogonal),
            "conj-symplectic" => Some(DualityClass::ConjSymplectic),
            "none" => Some(DualityClass::None),
            _ => None,
        }
    }
}

impl fmt::Display for DualityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DualityClass::Orthogonal => "orthogonal",
            DualityClass::Symplectic => "symplectic",
            DualityClass::ConjOrthogonal => "conj-orthogonal",
            DualityClass::ConjSymplectic => "conj-symplectic",
            DualityClass::None => "none",
        })
    }
}

/// Declaration of a generic (non-chain) irreducible atom.  `duality` and
/// `det_weil` refer to the Weil-group factor; the SL2 factor `k` is part of
/// the declared atom and its contribution to duality/determinant is computed.
#[derive(Debug, Clone)]
pub struct GenericDecl {
    pub label: String,
    pub weil_dim: u32,
    pub k: u32,
    /// Duality of the Weil factor.
    pub duality: DualityClass,
    /// Determinant character of the Weil factor.
    pub det_weil: CharId,
    /// Dual label for atoms that are not self-dual.
    pub dual_label: Option<String>,
    /// eps(atom twisted by chi, tag) at the declared k.
    pub root_table: BTreeMap<(CharId, AddCharTag), Sign>,
    /// eps(atom x other, tag) keyed by the other atom's canonical text.
    pub pair_table: BTreeMap<(String, AddCharTag), Sign>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AtomKind {
    /// chi ⊠ S_k for a registry character chi.
    Chain { chi: CharId, k: u32 },
    /// A declared irreducible Weil factor (possibly twisted) ⊠ S_k.
    Generic { label: String, twist: CharId, k: u32 },
}

/// One irreducible formal summand, with an optional half-integer unramified
/// twist exponent (zero exactly for tempered atoms).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub kind: AtomKind,
    pub shift: HalfInt,
}

impl Atom {
    pub fn chain(chi: CharId, k: u32) -> Atom {
        Atom { kind: AtomKind::Chain { chi, k }, shift: HalfInt::ZERO }
    }

    pub fn chain_shifted(chi: CharId, k: u32, shift: HalfInt) -> Atom {
        Atom { kind: AtomKind::Chain { chi, k }, shift }
    }

    pub fn generic(label: &str, twist: CharId, k: u32) -> Atom {
        Atom { kind: AtomKind::Generic { label: label.to_string(), twist, k }, shift: HalfInt::ZERO }
    }

    pub fn sl2_dim(&self) -> u32 {
        match &self.kind {
            AtomKind::Chain { k, .. } | AtomKind::Generic { k, .. } => *k,
        }
    }

    pub fn is_tempered(&self) -> bool {
        self.shift.is_zero()
    }

    pub fn dim(&self, reg: &CharacterRegistry) -> Result<u32> {
        match &self.kind {
            AtomKind::Chain { k, .. } => Ok(*k),
            AtomKind::Generic { label, k, .. } => Ok(reg.generic(label)?.weil_dim * k),
        }
    }

    /// Stable text form, used for table keys and display.
    pub fn canonical_key(&self, reg: &CharacterRegistry) -> String {
        let mut s = String::new();
        match &self.kind {
            AtomKind::Chain { chi, k } => {
                if !reg.is_trivial(*chi) {
                    s.push_str(reg.name(*chi));
                    s.push('.');
                }
                s.push_str(&format!("S{k}"));
            }
            AtomKind::Generic { label, twist, k } => {
                if !reg.is_trivial(*twist) {
                    s.push_str(reg.name(*twist));
                    s.push('.');
                }
                s.push_str(&format!("atom({label})"));
                let declared_k = reg.generic(label).map(|d| d.k).unwrap_or(*k);
                if *k != declared_k {
                    s.push_str(&format!(":S{k}"));
                }
            }
        }
        if !self.shift.is_zero() {
            s.push_str(&format!("@{}", self.shift));
        }
        s
    }

    /// Duality class of the full atom (Weil sign times (-1)^(k-1)); shifted
    /// atoms are never self-dual of any sign.
    pub fn duality(&self, reg: &CharacterRegistry) -> Result<DualityClass> {
        if !self.shift.is_zero() {
            return Ok(DualityClass::None);
        }
        let quadratic_field = reg.field.is_quadratic();
        match &self.kind {
            AtomKind::Chain { chi, k } => {
                if quadratic_field {
                    match reg.get(*chi).conj_restriction.conj_sign() {
                        Some(s) => Ok(DualityClass::from_sign(s * Sign::from_parity(*k as i64 + 1), true)),
                        None => Ok(DualityClass::None),
                    }
                } else if reg.get(*chi).quadratic {
                    Ok(DualityClass::from_sign(Sign::from_parity(*k as i64 + 1), false))
                } else {
                    Ok(DualityClass::None)
                }
            }
            AtomKind::Generic { label, twist, k } => {
                let decl = reg.generic(label)?;
                let twist_sign: Option<Sign> = if reg.is_trivial(*twist) {
                    Some(Sign::Plus)
                } else if quadratic_field {
                    reg.get(*twist).conj_restriction.conj_sign()
                } else if reg.get(*twist).quadratic {
                    Some(Sign::Plus)
                } else {
                    None
                };
                match (decl.duality.sign(), twist_sign) {
                    (Some(w), Some(t)) => {
                        let conj = quadratic_field;
                        if decl.duality.is_conjugate() != conj {
                            return Err(Error::IncompleteDualityData(format!(
                                "atom `{label}` declares {} duality over a {} field",
                                decl.duality,
                                if conj { "quadratic" } else { "split" }
                            )));
                        }
                        Ok(DualityClass::from_sign(w * t * Sign::from_parity(*k as i64 + 1), conj))
                    }
                    _ => Ok(DualityClass::None),
                }
            }
        }
    }

    /// Determinant character of the full atom.
    pub fn det_char(&self, reg: &CharacterRegistry) -> Result<CharId> {
        match &self.kind {
            AtomKind::Chain { chi, k } => Ok(reg.power(*chi, *k)),
            AtomKind::Generic { label, twist, k } => {
                let decl = reg.generic(label)?;
                let det = reg.power(decl.det_weil, *k);
                Ok(reg.product(det, reg.power(*twist, decl.weil_dim * *k)))
            }
        }
    }

    pub fn det_at_minus1(&self, reg: &CharacterRegistry) -> Result<Sign> {
        Ok(reg.value_at_minus1(self.det_char(reg)?))
    }

    /// Contragredient: negates the shift; chain atoms map via the character
    /// inverse; generic atoms via their declared dual label when not
    /// self-dual.
    pub fn dual(&self, reg: &CharacterRegistry) -> Result<Atom> {
        let kind = match &self.kind {
            AtomKind::Chain { chi, k } => AtomKind::Chain { chi: reg.inverse(*chi), k: *k },
            AtomKind::Generic { label, twist, k } => {
                let decl = reg.generic(label)?;
                let base = match decl.duality {
                    DualityClass::Orthogonal | DualityClass::Symplectic => label.clone(),
                    _ => decl
                        .dual_label
                        .clone()
                        .ok_or_else(|| Error::IncompleteDualityData(label.clone()))?,
                };
                AtomKind::Generic { label: base, twist: reg.inverse(*twist), k: *k }
            }
        };
        Ok(Atom { kind, shift: -self.shift })
    }

    /// Conjugate-contragredient over a quadratic field.
    pub fn conj_dual(&self, reg: &CharacterRegistry) -> Result<Atom> {
        if !reg.field.is_quadratic() {
            return self.dual(reg);
        }
        let kind = match &self.kind {
            AtomKind::Chain { chi, k } => {
                if reg.get(*chi).conj_restriction.conj_sign().is_some() {
                    // conjugate self-dual character: c(chi)^{-1} = chi
                    AtomKind::Chain { chi: *chi, k: *k }
                } else {
                    return Err(Error::IncompleteDualityData(reg.name(*chi).to_string()));
                }
            }
            AtomKind::Generic { label, twist, k } => {
                let decl = reg.generic(label)?;
                let base = match decl.duality {
                    DualityClass::ConjOrthogonal | DualityClass::ConjSymplectic => label.clone(),
                    _ => decl
                        .dual_label
                        .clone()
                        .ok_or_else(|| Error::IncompleteDualityData(label.clone()))?,
                };
                let twist = if reg.get(*twist).conj_restriction.conj_sign().is_some() {
                    *twist
                } else {
                    return Err(Error::IncompleteDualityData(reg.name(*twist).to_string()));
                };
                AtomKind::Generic { label: base, twist, k: *k }
            }
        };
        Ok(Atom { kind, shift: -self.shift })
    }

    fn order_key(&self) -> (u8, u16, String, u32, i32, i32) {
        // Tempered chain atoms first (by character index, then k), then
        // tempered generic atoms by label, then shifted atoms by |shift|.
        match (&self.kind, self.shift.is_zero()) {
            (AtomKind::Chain { chi, k }, true) => (0, chi.0, String::new(), *k, 0, 0),
            (AtomKind::Generic { label, twist, k }, true) => (1, twist.0, label.clone(), *k, 0, 0),
            (AtomKind::Chain { chi, k }, false) => {
                (2, chi.0, String::new(), *k, self.shift.abs().num, -self.shift.num)
            }
            (AtomKind::Generic { label, twist, k }, false) => {
                (3, twist.0, label.clone(), *k, self.shift.abs().num, -self.shift.num)
            }
        }
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Atom) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Atom) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

/// Clebsch–Gordan decomposition of S_a (x) S_b into SL2 dimensions:
/// `[a+b-1, a+b-3, ..., |a-b|+1]`, exactly `min(a,b)` entries.
pub fn cg_decompose(a: u32, b: u32) -> Vec<u32> {
    assert!(a >= 1 && b >= 1, "SL2 dimensions are >= 1");
    let lo = a.abs_diff(b) + 1;
    let hi = a + b - 1;
    let mut out = Vec::with_capacity(a.min(b) as usize);
    let mut j = hi;
    while j >= lo {
        out.push(j);
        if j < lo + 2 {
            break;
        }
        j -= 2;
    }
    out
}

/// A formal finite-dimensional representation: a multiset of atoms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WdRep {
    terms: BTreeMap<Atom, u32>,
}

impl WdRep {
    pub fn empty() -> WdRep {
        WdRep::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Atom, u32)>) -> WdRep {
        let mut rep = WdRep::empty();
        for (a, m) in terms {
            rep.add(a, m);
        }
        rep
    }

    pub fn add(&mut self, atom: Atom, mult: u32) {
        if mult == 0 {
            return;
        }
        *self.terms.entry(atom).or_insert(0) += mult;
    }

    /// Removes `mult` copies of `atom`; errors when fewer are present.
    pub fn remove(&mut self, atom: &Atom, mult: u32, reg: &CharacterRegistry) -> Result<()> {
        match self.terms.get_mut(atom) {
            Some(m) if *m > mult => {
                *m -= mult;
                Ok(())
            }
            Some(m) if *m == mult => {
                self.terms.remove(atom);
                Ok(())
            }
            _ => Err(Error::Other(format!(
                "cannot remove {}x {} from this representation",
                mult,
                atom.canonical_key(reg)
            ))),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Atom, u32)> {
        self.terms.iter().map(|(a, m)| (a, *m))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn mult(&self, atom: &Atom) -> u32 {
        self.terms.get(atom).copied().unwrap_or(0)
    }

    pub fn dim(&self, reg: &CharacterRegistry) -> Result<u32> {
        let mut d = 0;
        for (a, m) in self.terms() {
            d += a.dim(reg)? * m;
        }
        Ok(d)
    }

    pub fn is_tempered(&self) -> bool {
        self.terms.keys().all(|a| a.is_tempered())
    }

    /// Multiplicity of the chain atom chi ⊠ S_r (shift zero).
    pub fn multiplicity(&self, chi: CharId, r: u32) -> u32 {
        self.mult(&Atom::chain(chi, r))
    }

    /// Atomwise tensor with S_r via Clebsch–Gordan on the SL2 factors.
    pub fn tensor_sl2(&self, r: u32) -> WdRep {
        assert!(r >= 1);
        let mut out = WdRep::empty();
        for (atom, m) in self.terms() {
            for j in cg_decompose(atom.sl2_dim(), r) {
                let kind = match &atom.kind {
                    AtomKind::Chain { chi, .. } => AtomKind::Chain { chi: *chi, k: j },
                    AtomKind::Generic { label, twist, .. } => {
                        AtomKind::Generic { label: label.clone(), twist: *twist, k: j }
                    }
                };
                out.add(Atom { kind, shift: atom.shift }, m);
            }
        }
        out
    }

    /// Twist every atom by a registry character.
    pub fn twist(&self, chi: CharId, reg: &CharacterRegistry) -> WdRep {
        let mut out = WdRep::empty();
        for (atom, m) in self.terms() {
            let kind = match &atom.kind {
                AtomKind::Chain { chi: c, k } => AtomKind::Chain { chi: reg.product(*c, chi), k: *k },
                AtomKind::Generic { label, twist, k } => {
                    AtomKind::Generic { label: label.clone(), twist: reg.product(*twist, chi), k: *k }
                }
            };
            out.add(Atom { kind, shift: atom.shift }, m);
        }
        out
    }

    pub fn dual(&self, reg: &CharacterRegistry) -> Result<WdRep> {
        let mut out = WdRep::empty();
        for (atom, m) in self.terms() {
            out.add(atom.dual(reg)?, m);
        }
        Ok(out)
    }

    pub fn conj_dual(&self, reg: &CharacterRegistry) -> Result<WdRep> {
        let mut out = WdRep::empty();
        for (atom, m) in self.terms() {
            out.add(atom.conj_dual(reg)?, m);
        }
        Ok(out)
    }

    /// Determinant character of the whole representation.
    pub fn det_char(&self, reg: &CharacterRegistry) -> Result<CharId> {
        let mut det = reg.trivial();
        for (atom, m) in self.terms() {
            det = reg.product(det, reg.power(atom.det_char(reg)?, m));
        }
        Ok(det)
    }

    pub fn det_at_minus1(&self, reg: &CharacterRegistry) -> Result<Sign> {
        Ok(reg.value_at_minus1(self.det_char(reg)?))
    }

    pub fn det_at(&self, symbol: &str, reg: &CharacterRegistry) -> Result<Sign> {
        reg.value_at(self.det_char(reg)?, symbol)
    }

    /// Whether the representation carries a (conjugate) self-dual form of
    /// the given sign: matching-sign atoms freely, opposite-sign self-dual
    /// atoms in even multiplicity, everything else paired with its
    /// (conjugate) dual.
    pub fn admits_sign(&self, sign: Sign, reg: &CharacterRegistry) -> Result<bool> {
        let conj = reg.field.is_quadratic();
        for (atom, m) in self.terms() {
            match atom.duality(reg)? {
                d if d.sign() == Some(sign) && d.is_conjugate() == conj => {}
                d if d.sign() == Some(-sign) && d.is_conjugate() == conj => {
                    if m % 2 != 0 {
                        return Ok(false);
                    }
                }
                _ => {
                    let partner = if conj { atom.conj_dual(reg) } else { atom.dual(reg) };
                    match partner {
                        Ok(p) => {
                            if p == *atom {
                                // self-paired but of no definite sign
                                if m % 2 != 0 {
                                    return Ok(false);
                                }
                            } else if self.mult(&p) != m {
                                return Ok(false);
                            }
                        }
                        Err(_) => return Ok(false),
                    }
                }
            }
        }
        Ok(true)
    }

    /// Single-answer duality classification plus the determinant character.
    /// When both signs are admissible (e.g. the zero representation) the
    /// orthogonal class is reported.
    pub fn classify_duality(&self, reg: &CharacterRegistry) -> Result<(DualityClass, CharId)> {
        // Surface incomplete generic declarations first.
        for (atom, _) in self.terms() {
            if let AtomKind::Generic { label, .. } = &atom.kind {
                let decl = reg.generic(label)?;
                if decl.duality == DualityClass::None && decl.dual_label.is_none() {
                    return Err(Error::IncompleteDualityData(label.clone()));
                }
            }
        }
        let conj = reg.field.is_quadratic();
        let det = self.det_char(reg)?;
        let plus = self.admits_sign(Sign::Plus, reg)?;
        let minus = self.admits_sign(Sign::Minus, reg)?;
        let class = match (plus, minus) {
            (true, _) => DualityClass::from_sign(Sign::Plus, conj),
            (false, true) => DualityClass::from_sign(Sign::Minus, conj),
            (false, false) => DualityClass::None,
        };
        Ok((class, det))
    }

    pub fn display<'a>(&'a self, reg: &'a CharacterRegistry) -> RepDisplay<'a> {
        RepDisplay { rep: self, reg }
    }
}

pub struct RepDisplay<'a> {
    rep: &'a WdRep,
    reg: &'a CharacterRegistry,
}

impl fmt::Display for RepDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rep.num_terms() == 0 {
            return f.write_str("0");
        }
        let mut first = true;
        for (atom, m) in self.rep.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if m > 1 {
                write!(f, "{m}*")?;
            }
            f.write_str(&atom.canonical_key(self.reg))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reg() -> CharacterRegistry {
        CharacterRegistry::default_split(false)
    }

    #[test]
    fn cg_examples() {
        assert_eq!(cg_decompose(2, 2), vec![3, 1]);
        assert_eq!(cg_decompose(1, 5), vec![5]);
        assert_eq!(cg_decompose(4, 3), vec![6, 4, 2]);
        assert_eq!(cg_decompose(3, 4), vec![6, 4, 2]);
    }

    #[test]
    fn tensor_examples() {
        let r = reg();
        let one = r.trivial();
        let phi = WdRep::from_terms([(Atom::chain(one, 2), 1), (Atom::chain(one, 4), 1)]);
        let t = phi.tensor_sl2(3);
        // S2(x)S3 = S4+S2, S4(x)S3 = S6+S4+S2
        assert_eq!(t.multiplicity(one, 2), 2);
        assert_eq!(t.multiplicity(one, 4), 2);
        assert_eq!(t.multiplicity(one, 6), 1);
        assert_eq!(t.dim(&r).unwrap(), 18);
        assert_eq!(phi.tensor_sl2(1), phi);
        // character carried along
        let u = r.by_name("u").unwrap();
        let chi_rep = WdRep::from_terms([(Atom::chain(u, 2), 1)]);
        let t2 = chi_rep.tensor_sl2(2);
        assert_eq!(t2.multiplicity(u, 3), 1);
        assert_eq!(t2.multiplicity(u, 1), 1);
    }

    #[test]
    fn twist_examples() {
        let r = reg();
        let one = r.trivial();
        let u = r.by_name("u").unwrap();
        let phi = WdRep::from_terms([(Atom::chain(one, 2), 1), (Atom::chain(u, 2), 1)]);
        assert_eq!(phi.twist(u, &r), phi);
        assert_eq!(phi.twist(one, &r), phi);
        let v = WdRep::from_terms([(Atom::chain(u, 4), 1)]);
        assert_eq!(v.twist(u, &r), WdRep::from_terms([(Atom::chain(one, 4), 1)]));
    }

    #[test]
    fn multiplicity_examples() {
        let r = reg();
        let one = r.trivial();
        let u = r.by_name("u").unwrap();
        let phi = WdRep::from_terms([(Atom::chain(one, 2), 1), (Atom::chain(one, 4), 1)]);
        assert_eq!(phi.multiplicity(one, 2), 1);
        assert_eq!(phi.multiplicity(u, 2), 0);
        let two = WdRep::from_terms([(Atom::chain(u, 2), 2)]);
        assert_eq!(two.multiplicity(u, 2), 2);
    }

    #[test]
    fn duality_classification() {
        let r = reg();
        let one = r.trivial();
        let pi = r.by_name("pi").unwrap();
        let phi = WdRep::from_terms([(Atom::chain(one, 2), 1), (Atom::chain(one, 4), 1)]);
        let (d, det) = phi.classify_duality(&r).unwrap();
        assert_eq!(d, DualityClass::Symplectic);
        assert!(r.is_trivial(det));
        let orth = WdRep::from_terms([(Atom::chain(one, 1), 1), (Atom::chain(pi, 1), 1)]);
        let (d, det) = orth.classify_duality(&r).unwrap();
        assert_eq!(d, DualityClass::Orthogonal);
        assert_eq!(det, pi);
        let (d, det) = WdRep::empty().classify_duality(&r).unwrap();
        assert_eq!(d, DualityClass::Orthogonal);
        assert!(r.is_trivial(det));
    }

    #[test]
    fn dual_examples() {
        let r = reg();
        let one = r.trivial();
        let u = r.by_name("u").unwrap();
        let phi = WdRep::from_terms([(Atom::chain(one, 2), 1), (Atom::chain(one, 4), 1)]);
        assert_eq!(phi.dual(&r).unwrap(), phi);
        let shifted = WdRep::from_terms([(Atom::chain_shifted(u, 1, HalfInt::new(1)), 1)]);
        let d = shifted.dual(&r).unwrap();
        assert_eq!(d.mult(&Atom::chain_shifted(u, 1, HalfInt::new(-1))), 1);
    }

    #[test]
    fn canonical_order_groups_shifted_last() {
        let r = reg();
        let one = r.trivial();
        let rep = WdRep::from_terms([
            (Atom::chain_shifted(one, 1, HalfInt::new(1)), 1),
            (Atom::chain(one, 4), 1),
            (Atom::chain(one, 2), 1),
        ]);
        let keys: Vec<String> = rep.terms().map(|(a, _)| a.canonical_key(&r)).collect();
        assert_eq!(keys, vec!["S2", "S4", "S1@1/2"]);
    }

    proptest! {
        #[test]
        fn tensor_scales_dimension(dims in proptest::collection::vec((0u16..4, 1u32..6), 1..4), r in 1u32..6) {
            let rg = reg();
            let rep = WdRep::from_terms(dims.into_iter().map(|(c, k)| (Atom::chain(CharId(c), k), 1)));
            let t = rep.tensor_sl2(r);
            prop_assert_eq!(t.dim(&rg).unwrap(), r * rep.dim(&rg).unwrap());
        }

        #[test]
        fn cg_symmetric_and_parity(a in 1u32..9, b in 1u32..9) {
            let d1 = cg_decompose(a, b);
            let d2 = cg_decompose(b, a);
            prop_assert_eq!(&d1, &d2);
            prop_assert_eq!(d1.len() as u32, a.min(b));
            prop_assert_eq!(d1.iter().sum::<u32>(), a * b);
            for e in d1 {
                prop_assert_eq!(e % 2, (a + b + 1) % 2);
            }
        }

        #[test]
        fn dual_is_involution(dims in proptest::collection::vec((0u16..4, 1u32..6, -3i32..4), 1..4)) {
            let rg = reg();
            let rep = WdRep::from_terms(
                dims.into_iter().map(|(c, k, s)| (Atom::chain_shifted(CharId(c), k, HalfInt::new(s)), 1)),
            );
            prop_assert_eq!(rep.dual(&rg).unwrap().dual(&rg).unwrap(), rep);
        }

        #[test]
        fn quadratic_twist_is_involution(dims in proptest::collection::vec((0u16..4, 1u32..6), 1..4), c in 0u16..4) {
            let rg = reg();
            let rep = WdRep::from_terms(dims.into_iter().map(|(c, k)| (Atom::chain(CharId(c), k), 1)));
            let chi = CharId(c);
            prop_assert_eq!(rep.twist(chi, &rg).twist(chi, &rg), rep);
        }

        #[test]
        fn tensor_duality_sign(k in 1u32..7, r in 1u32..7) {
            // sign(S_k (x) S_r pieces) = sign(S_k) * (-1)^(r-1) slotwise
            let rg = reg();
            let rep = WdRep::from_terms([(Atom::chain(rg.trivial(), k), 1)]);
            let expect = Sign::from_parity(k as i64 + 1) * Sign::from_parity(r as i64 + 1);
            let t = rep.tensor_sl2(r);
            let plus = t.admits_sign(Sign::Plus, &rg).unwrap();
            let minus = t.admits_sign(Sign::Minus, &rg).unwrap();
            // every piece has sign (-1)^(j-1) with j = k+r-1 mod 2
            let holds = if expect == Sign::Plus { plus } else { minus };
            prop_assert!(holds);
        }
    }
}
