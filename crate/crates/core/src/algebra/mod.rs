//! Finite algebras with two implications and a unit.
//!
//! Tables are stored row-major: entry `(x, y)` of the arrow table holds `x -> y`,
//! entry `(x, y)` of the squiggle table holds `x ~> y`.

mod axioms;
mod classify;
pub(crate) mod format;

pub use axioms::{axioms_hold, check_axioms, AxiomReport, AxiomSystem, AxiomViolation};
pub use classify::{classify, ClassificationReport};
pub use format::{parse_algebra, serialize_algebra};

use std::fmt;

use crate::error::{Error, Result};
use crate::subset::ElementSubset;

/// Largest carrier supported; subsets are stored as 64-bit masks.
pub const MAX_ELEMENTS: usize = 64;

/// Index of an element in the carrier of its algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(u16);

impl ElementId {
    pub const fn new(index: usize) -> Self {
        ElementId(index as u16)
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    name: String,
    carrier: Vec<String>,
    arrow: Vec<ElementId>,
    squig: Vec<ElementId>,
    unit: ElementId,
    bottom: Option<ElementId>,
}

impl FiniteAlgebra {
    /// Builds an algebra from index tables, validating closure and token uniqueness.
    pub fn new(
        name: impl Into<String>,
        carrier: Vec<String>,
        arrow: Vec<Vec<usize>>,
        squig: Vec<Vec<usize>>,
        unit: usize,
        bottom: Option<usize>,
    ) -> Result<Self> {
        let n = carrier.len();
        let flatten = |table: Vec<Vec<usize>>, label: &str| -> Result<Vec<ElementId>> {
            if table.len() != n {
                return Err(Error::InvalidAlgebra(format!(
                    "{label} table has {} rows, expected {n}",
                    table.len()
                )));
            }
            let mut flat = Vec::with_capacity(n * n);
            for (i, row) in table.into_iter().enumerate() {
                if row.len() != n {
                    return Err(Error::InvalidAlgebra(format!(
                        "{label} table row {i} has {} entries, expected {n}",
                        row.len()
                    )));
                }
                flat.extend(row.into_iter().map(ElementId::new));
            }
            Ok(flat)
        };
        let arrow = flatten(arrow, "arrow")?;
        let squig = flatten(squig, "squig")?;
        Self::from_flat(name, carrier, arrow, squig, unit, bottom)
    }

    pub(crate) fn from_flat(
        name: impl Into<String>,
        carrier: Vec<String>,
        arrow: Vec<ElementId>,
        squig: Vec<ElementId>,
        unit: usize,
        bottom: Option<usize>,
    ) -> Result<Self> {
        let n = carrier.len();
        if n == 0 {
            return Err(Error::InvalidAlgebra("empty carrier".into()));
        }
        if n > MAX_ELEMENTS {
            return Err(Error::InvalidAlgebra(format!(
                "carrier of {n} elements exceeds the limit of {MAX_ELEMENTS}"
            )));
        }
        for (i, tok) in carrier.iter().enumerate() {
            if carrier[..i].contains(tok) {
                return Err(Error::InvalidAlgebra(format!("duplicate element `{tok}`")));
            }
        }
        if arrow.len() != n * n || squig.len() != n * n {
            return Err(Error::InvalidAlgebra("table size mismatch".into()));
        }
        if let Some(bad) = arrow.iter().chain(&squig).find(|e| e.index() >= n) {
            return Err(Error::InvalidAlgebra(format!(
                "table entry {} out of range",
                bad.index()
            )));
        }
        if unit >= n {
            return Err(Error::InvalidAlgebra("unit out of range".into()));
        }
        if matches!(bottom, Some(b) if b >= n) {
            return Err(Error::InvalidAlgebra("bottom out of range".into()));
        }
        Ok(Self {
            name: name.into(),
            carrier,
            arrow,
            squig,
            unit: ElementId::new(unit),
            bottom: bottom.map(ElementId::new),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.carrier.len()
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + Clone {
        (0..self.size()).map(ElementId::new)
    }

    pub fn token(&self, x: ElementId) -> &str {
        &self.carrier[x.index()]
    }

    pub fn find(&self, token: &str) -> Option<ElementId> {
        self.carrier
            .iter()
            .position(|t| t == token)
            .map(ElementId::new)
    }

    pub fn unit(&self) -> ElementId {
        self.unit
    }

    /// The declared bottom element, whether or not it is actually least.
    pub fn declared_bottom(&self) -> Option<ElementId> {
        self.bottom
    }

    /// The declared bottom, provided `0 -> x = 0 ~> x = 1` for every `x`.
    pub fn bottom(&self) -> Option<ElementId> {
        self.bottom.filter(|&b| {
            self.elements()
                .all(|x| self.arrow(b, x) == self.unit && self.squig(b, x) == self.unit)
        })
    }

    pub fn require_bottom(&self) -> Result<ElementId> {
        self.bottom()
            .ok_or_else(|| Error::Unbounded(self.name.clone()))
    }

    #[inline]
    pub fn arrow(&self, x: ElementId, y: ElementId) -> ElementId {
        self.arrow[x.index() * self.size() + y.index()]
    }

    #[inline]
    pub fn squig(&self, x: ElementId, y: ElementId) -> ElementId {
        self.squig[x.index() * self.size() + y.index()]
    }

    /// `x <= y` read off the arrow table alone (`x -> y = 1`).
    ///
    /// This is a preorder on pseudo-BE algebras; use [`FiniteAlgebra::leq`] when the
    /// tables have not been checked for (psBE5).
    #[inline]
    pub fn le(&self, x: ElementId, y: ElementId) -> bool {
        self.arrow(x, y) == self.unit
    }

    /// `x <= y`, refusing tables where `x -> y = 1` and `x ~> y = 1` disagree.
    pub fn leq(&self, x: ElementId, y: ElementId) -> Result<bool> {
        let by_arrow = self.arrow(x, y) == self.unit;
        let by_squig = self.squig(x, y) == self.unit;
        if by_arrow != by_squig {
            return Err(Error::InconsistentOrder {
                x: self.token(x).to_string(),
                y: self.token(y).to_string(),
            });
        }
        Ok(by_arrow)
    }

    /// `x v1 y = (x -> y) ~> y`
    #[inline]
    pub fn vee1(&self, x: ElementId, y: ElementId) -> ElementId {
        self.squig(self.arrow(x, y), y)
    }

    /// `x v2 y = (x ~> y) -> y`
    #[inline]
    pub fn vee2(&self, x: ElementId, y: ElementId) -> ElementId {
        self.arrow(self.squig(x, y), y)
    }

    /// The two negations `(x -> 0, x ~> 0)`.
    pub fn negations(&self, x: ElementId) -> Result<(ElementId, ElementId)> {
        let zero = self.require_bottom()?;
        Ok((self.arrow(x, zero), self.squig(x, zero)))
    }

    /// `(x^{-~}, x^{~-})`, i.e. `((x -> 0) ~> 0, (x ~> 0) -> 0)`.
    pub fn double_negations(&self, x: ElementId) -> Result<(ElementId, ElementId)> {
        let zero = self.require_bottom()?;
        let (minus, tilde) = self.negations(x)?;
        Ok((self.squig(minus, zero), self.arrow(tilde, zero)))
    }

    pub fn is_be_tables(&self) -> bool {
        self.arrow == self.squig
    }

    pub fn full_subset(&self) -> ElementSubset {
        ElementSubset::full(self.size())
    }

    pub fn subset_of(&self, members: impl IntoIterator<Item = ElementId>) -> ElementSubset {
        ElementSubset::from_members(self.size(), members)
    }

    /// Parses `{t1,t2,...}` (braces optional) against this carrier.
    pub fn parse_subset(&self, text: &str) -> Result<ElementSubset> {
        let inner = text.trim();
        let inner = inner
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .unwrap_or(inner);
        let mut members = Vec::new();
        for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let id = self
                .find(tok)
                .ok_or_else(|| Error::Precondition(format!("unknown element `{tok}`")))?;
            members.push(id);
        }
        Ok(self.subset_of(members))
    }

    /// Renders a subset as `{t1,t2,...}` in carrier order.
    pub fn format_subset(&self, set: &ElementSubset) -> String {
        let toks: Vec<&str> = set.iter().map(|e| self.token(e)).collect();
        format!("{{{}}}", toks.join(","))
    }

    pub fn format_tuple(&self, tuple: &[ElementId]) -> String {
        let toks: Vec<&str> = tuple.iter().map(|&e| self.token(e)).collect();
        format!("({})", toks.join(","))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const PBEA5: &str = include_str!("../../../../fixtures/algebras/pbea5.alg");
    const PBE6_BOUNDED: &str = include_str!("../../../../fixtures/algebras/pbe6_bounded.alg");
    const PBCK4: &str = include_str!("../../../../fixtures/algebras/pbck4.alg");

    fn id(a: &FiniteAlgebra, t: &str) -> ElementId {
        a.find(t).unwrap()
    }

    #[test]
    fn leq_reads_arrow_table() {
        let a = parse_algebra(PBCK4).unwrap();
        assert!(a.leq(id(&a, "a"), id(&a, "b")).unwrap());
        for x in a.elements() {
            assert!(a.leq(x, a.unit()).unwrap());
            if x != a.unit() {
                assert!(!a.leq(a.unit(), x).unwrap());
            }
        }
    }

    #[test]
    fn leq_rejects_inconsistent_tables() {
        let a = FiniteAlgebra::new(
            "bad",
            vec!["1".into(), "a".into()],
            vec![vec![0, 1], vec![0, 0]],
            vec![vec![0, 1], vec![0, 1]],
            0,
            None,
        )
        .unwrap();
        let x = ElementId::new(1);
        assert!(matches!(a.leq(x, x), Err(Error::InconsistentOrder { .. })));
    }

    #[test]
    fn joins_on_five_element_algebra() {
        let a = parse_algebra(PBEA5).unwrap();
        let (ea, eb, ed) = (id(&a, "a"), id(&a, "b"), id(&a, "d"));
        assert_eq!(a.vee1(ea, ed), ed);
        assert_eq!(a.vee1(ed, ea), ea);
        assert_eq!(a.vee1(ea, eb), a.unit());
        for x in a.elements() {
            assert_eq!(a.vee1(x, x), x);
            assert_eq!(a.vee1(x, a.unit()), a.unit());
            assert_eq!(a.vee2(x, x), x);
        }
    }

    #[test]
    fn negations_on_bounded_algebra() {
        let a = parse_algebra(PBE6_BOUNDED).unwrap();
        let (ea, ec, ed, ee) = (id(&a, "a"), id(&a, "c"), id(&a, "d"), id(&a, "e"));
        assert_eq!(a.negations(ea).unwrap(), (ed, ec));
        assert_eq!(a.negations(a.unit()).unwrap(), (ee, ee));
        assert_eq!(a.negations(ee).unwrap(), (a.unit(), a.unit()));
        // a^{-~} = d ~> e
        assert_eq!(a.squig(ed, ee), ea);
        assert_eq!(a.double_negations(ea).unwrap().0, ea);
    }

    #[test]
    fn negations_require_bottom() {
        let a = parse_algebra(PBEA5).unwrap();
        assert!(matches!(a.negations(a.unit()), Err(Error::Unbounded(_))));
    }

    #[test]
    fn subset_text_round_trip() {
        let a = parse_algebra(PBEA5).unwrap();
        let s = a.parse_subset("{d, 1,a}").unwrap();
        assert_eq!(a.format_subset(&s), "{1,a,d}");
        assert!(a.parse_subset("{1,z}").is_err());
    }
}
