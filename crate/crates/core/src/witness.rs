use crate::algebra::{ElementId, FiniteAlgebra};

/// The first tuple, in lexicographic index order, at which a rule fails.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Violation {
    pub rule: &'static str,
    pub witness: Vec<ElementId>,
}

impl Violation {
    pub fn new(rule: &'static str, witness: Vec<ElementId>) -> Self {
        Self { rule, witness }
    }

    /// `rule at (x,y)`
    pub fn describe(&self, a: &FiniteAlgebra) -> String {
        format!("{} at {}", self.rule, a.format_tuple(&self.witness))
    }
}

pub(crate) fn first_single(
    a: &FiniteAlgebra,
    rule: &'static str,
    ok: impl Fn(ElementId) -> bool,
) -> Option<Violation> {
    a.elements()
        .find(|&x| !ok(x))
        .map(|x| Violation::new(rule, vec![x]))
}

pub(crate) fn first_pair(
    a: &FiniteAlgebra,
    rule: &'static str,
    ok: impl Fn(ElementId, ElementId) -> bool,
) -> Option<Violation> {
    for x in a.elements() {
        for y in a.elements() {
            if !ok(x, y) {
                return Some(Violation::new(rule, vec![x, y]));
            }
        }
    }
    None
}

pub(crate) fn first_triple(
    a: &FiniteAlgebra,
    rule: &'static str,
    ok: impl Fn(ElementId, ElementId, ElementId) -> bool,
) -> Option<Violation> {
    for x in a.elements() {
        for y in a.elements() {
            for z in a.elements() {
                if !ok(x, y, z) {
                    return Some(Violation::new(rule, vec![x, y, z]));
                }
            }
        }
    }
    None
}
