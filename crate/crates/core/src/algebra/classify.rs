use super::{check_axioms, AxiomReport, AxiomSystem, FiniteAlgebra};
use crate::subset::ElementSubset;

/// Every structural predicate of an algebra in one pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub pseudo_be: bool,
    pub pseudo_bck: bool,
    /// `->` and `~>` are the same table.
    pub be: bool,
    pub proper: bool,
    pub condition_a: bool,
    pub distributive: bool,
    pub commutative: bool,
    pub p_system: bool,
    pub q_system: bool,
    pub bounded: bool,
    pub linear: bool,
    /// `None` when unbounded.
    pub good: Option<bool>,
    pub involutive: Option<bool>,
    pub regular: Option<ElementSubset>,
    pub dense: Option<ElementSubset>,
    /// The underlying axiom reports, in [`AxiomSystem::ALL`] order.
    pub reports: Vec<AxiomReport>,
}

/// `<=` is total and antisymmetric.
fn is_linear(a: &FiniteAlgebra) -> bool {
    a.elements().all(|x| {
        a.elements().all(|y| {
            let (xy, yx) = (a.le(x, y), a.le(y, x));
            (xy || yx) && (!(xy && yx) || x == y)
        })
    })
}

pub fn classify(a: &FiniteAlgebra) -> ClassificationReport {
    let reports: Vec<AxiomReport> = AxiomSystem::ALL
        .iter()
        .map(|&sys| check_axioms(a, sys))
        .collect();
    let holds = |sys: AxiomSystem| reports.iter().any(|r| r.system == sys && r.holds());
    let pseudo_be = holds(AxiomSystem::PseudoBe);
    let be = a.is_be_tables();

    let (mut good, mut involutive, mut regular, mut dense) = (None, None, None, None);
    if a.bottom().is_some() {
        let mut reg = ElementSubset::empty(a.size());
        let mut den = ElementSubset::empty(a.size());
        let mut all_good = true;
        for x in a.elements() {
            let (l, r) = a.double_negations(x).expect("bottom verified");
            all_good &= l == r;
            if l == x && r == x {
                reg.insert(x);
            }
            if l == a.unit() && r == a.unit() {
                den.insert(x);
            }
        }
        good = Some(all_good);
        involutive = Some(reg.is_full());
        regular = Some(reg);
        dense = Some(den);
    }

    ClassificationReport {
        pseudo_be,
        pseudo_bck: holds(AxiomSystem::PseudoBck),
        be,
        proper: pseudo_be && !be,
        condition_a: holds(AxiomSystem::ConditionA),
        distributive: holds(AxiomSystem::Distributive),
        commutative: holds(AxiomSystem::Commutative),
        p_system: holds(AxiomSystem::PSystem),
        q_system: holds(AxiomSystem::QSystem),
        bounded: a.bottom().is_some(),
        linear: is_linear(a),
        good,
        involutive,
        regular,
        dense,
        reports,
    }
}
