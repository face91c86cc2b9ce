//! Certificates attached to an algebra: rational assignments (states, measures,
//! valuations) and element maps (operators, homomorphisms), with their text formats.

use std::fmt;

use crate::algebra::{format::strip_comment, ElementId, FiniteAlgebra};
use crate::error::{ParseError, Result};
use crate::linalg::{format_rational, parse_rational_at, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AssignmentKind {
    State,
    Measure,
    Valuation,
}

impl AssignmentKind {
    pub fn keyword(self) -> &'static str {
        match self {
            AssignmentKind::State => "state",
            AssignmentKind::Measure => "measure",
            AssignmentKind::Valuation => "valuation",
        }
    }

    fn from_keyword(word: &str) -> Option<Self> {
        [Self::State, Self::Measure, Self::Valuation]
            .into_iter()
            .find(|k| k.keyword() == word)
    }
}

impl fmt::Display for AssignmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// A rational value for every element, indexed by carrier position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalAssignment {
    pub kind: AssignmentKind,
    pub name: String,
    pub values: Vec<Rational>,
}

impl RationalAssignment {
    pub fn new(kind: AssignmentKind, name: impl Into<String>, values: Vec<Rational>) -> Self {
        Self {
            kind,
            name: name.into(),
            values,
        }
    }

    #[inline]
    pub fn at(&self, x: ElementId) -> &Rational {
        &self.values[x.index()]
    }

    /// Builds an assignment from `(token, value)` pairs; every element must appear.
    pub fn from_pairs(
        a: &FiniteAlgebra,
        kind: AssignmentKind,
        name: impl Into<String>,
        pairs: &[(&str, Rational)],
    ) -> Result<Self> {
        let mut text = format!("{} {}\n", kind, name.into());
        for (t, v) in pairs {
            text.push_str(&format!("{t} = {}\n", format_rational(v)));
        }
        parse_assignment(a, &text)
    }
}

/// Reads `state|measure|valuation <name>` followed by one `<element> = <rational>` per element.
pub fn parse_assignment(a: &FiniteAlgebra, text: &str) -> Result<RationalAssignment> {
    let mut header: Option<(AssignmentKind, String)> = None;
    let mut values: Vec<Option<Rational>> = vec![None; a.size()];
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if header.is_none() {
            let mut words = line.split_whitespace();
            let kw = words.next().unwrap_or_default();
            let kind = AssignmentKind::from_keyword(kw).ok_or_else(|| {
                ParseError::new(
                    lineno,
                    format!("expected `state`, `measure` or `valuation`, found `{kw}`"),
                )
            })?;
            let name = words.next().unwrap_or("unnamed").to_string();
            if words.next().is_some() {
                return Err(
                    ParseError::new(lineno, "trailing tokens after assignment name").into(),
                );
            }
            header = Some((kind, name));
            continue;
        }
        let (tok, value) = line
            .split_once('=')
            .ok_or_else(|| ParseError::new(lineno, "expected `<element> = <rational>`"))?;
        let tok = tok.trim();
        let x = a
            .find(tok)
            .ok_or_else(|| ParseError::new(lineno, format!("unknown element `{tok}`")))?;
        if values[x.index()].is_some() {
            return Err(ParseError::new(lineno, format!("duplicate value for `{tok}`")).into());
        }
        values[x.index()] = Some(parse_rational_at(lineno, value)?);
    }
    let (kind, name) = header.ok_or_else(|| ParseError::new(0, "missing assignment header"))?;
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| {
                ParseError::new(0, format!("missing value for `{}`", a.carrier()[i])).into()
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RationalAssignment { kind, name, values })
}

pub fn serialize_assignment(a: &FiniteAlgebra, s: &RationalAssignment) -> String {
    let mut out = format!("{} {}\n", s.kind, s.name);
    for x in a.elements() {
        out.push_str(&format!("{} = {}\n", a.token(x), format_rational(s.at(x))));
    }
    out
}

/// Reads lines `<keyword> <src>-><tgt>`, one per source element.
pub fn parse_element_map(
    keyword: &str,
    source: &FiniteAlgebra,
    target: &FiniteAlgebra,
    text: &str,
) -> Result<Vec<ElementId>> {
    let mut map: Vec<Option<ElementId>> = vec![None; source.size()];
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let rest = line
            .strip_prefix(keyword)
            .filter(|r| r.starts_with(char::is_whitespace))
            .ok_or_else(|| ParseError::new(lineno, format!("expected `{keyword} <x>-><y>`")))?;
        let (x, y) = rest
            .split_once("->")
            .ok_or_else(|| ParseError::new(lineno, "missing `->`"))?;
        let (x, y) = (x.trim(), y.trim());
        let xi = source
            .find(x)
            .ok_or_else(|| ParseError::new(lineno, format!("unknown source element `{x}`")))?;
        let yi = target
            .find(y)
            .ok_or_else(|| ParseError::new(lineno, format!("unknown target element `{y}`")))?;
        if map[xi.index()].replace(yi).is_some() {
            return Err(ParseError::new(lineno, format!("duplicate image for `{x}`")).into());
        }
    }
    map.into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| {
                ParseError::new(0, format!("missing image for `{}`", source.carrier()[i])).into()
            })
        })
        .collect()
}

pub fn serialize_element_map(
    keyword: &str,
    source: &FiniteAlgebra,
    target: &FiniteAlgebra,
    map: &[ElementId],
) -> String {
    source
        .elements()
        .map(|x| {
            format!(
                "{keyword} {}->{}\n",
                source.token(x),
                target.token(map[x.index()])
            )
        })
        .collect()
}
