use std::fmt;
use std::str::FromStr;

use super::{ElementId, FiniteAlgebra};

/// The axiom systems that can be decided on a finite table pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomSystem {
    PseudoBe,
    PseudoBck,
    ConditionA,
    Distributive,
    Commutative,
    PSystem,
    QSystem,
}

impl AxiomSystem {
    pub const ALL: [AxiomSystem; 7] = [
        AxiomSystem::PseudoBe,
        AxiomSystem::PseudoBck,
        AxiomSystem::ConditionA,
        AxiomSystem::Distributive,
        AxiomSystem::Commutative,
        AxiomSystem::PSystem,
        AxiomSystem::QSystem,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            AxiomSystem::PseudoBe => "pseudo-BE",
            AxiomSystem::PseudoBck => "pseudo-BCK",
            AxiomSystem::ConditionA => "condition-A",
            AxiomSystem::Distributive => "distributive",
            AxiomSystem::Commutative => "commutative",
            AxiomSystem::PSystem => "P-system",
            AxiomSystem::QSystem => "Q-system",
        }
    }
}

impl fmt::Display for AxiomSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for AxiomSystem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AxiomSystem::ALL
            .into_iter()
            .find(|sys| sys.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let known: Vec<&str> = AxiomSystem::ALL.iter().map(|s| s.tag()).collect();
                format!(
                    "unknown axiom system `{s}` (expected one of {})",
                    known.join(", ")
                )
            })
    }
}

/// First failing tuple of one axiom, with the total number of failing tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: &'static str,
    pub witness: Vec<ElementId>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub system: AxiomSystem,
    /// Sorted by axiom tag; empty iff the system holds.
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violation(&self, axiom: &str) -> Option<&AxiomViolation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }
}

/// Scans every `K`-tuple in lexicographic index order.
fn scan<const K: usize>(
    a: &FiniteAlgebra,
    early: bool,
    axiom: &'static str,
    ok: impl Fn([ElementId; K]) -> bool,
) -> Option<AxiomViolation> {
    let n = a.size();
    let total = n.pow(K as u32);
    let mut first = None;
    let mut count = 0;
    for code in 0..total {
        let mut t = [ElementId::new(0); K];
        let mut rest = code;
        for slot in t.iter_mut().rev() {
            *slot = ElementId::new(rest % n);
            rest /= n;
        }
        if !ok(t) {
            count += 1;
            if first.is_none() {
                first = Some(t.to_vec());
            }
            if early {
                break;
            }
        }
    }
    first.map(|witness| AxiomViolation {
        axiom,
        witness,
        count,
    })
}

fn pseudo_be(a: &FiniteAlgebra, early: bool) -> Vec<Option<AxiomViolation>> {
    let one = a.unit();
    vec![
        scan(a, early, "psBE1", |[x]| {
            a.arrow(x, x) == one && a.squig(x, x) == one
        }),
        scan(a, early, "psBE2", |[x]| {
            a.arrow(x, one) == one && a.squig(x, one) == one
        }),
        scan(a, early, "psBE3", |[x]| {
            a.arrow(one, x) == x && a.squig(one, x) == x
        }),
        scan(a, early, "psBE4", |[x, y, z]| {
            a.arrow(x, a.squig(y, z)) == a.squig(y, a.arrow(x, z))
        }),
        scan(a, early, "psBE5", |[x, y]| {
            (a.arrow(x, y) == one) == (a.squig(x, y) == one)
        }),
    ]
}

fn pseudo_bck(a: &FiniteAlgebra, early: bool) -> Vec<Option<AxiomViolation>> {
    let one = a.unit();
    vec![
        scan(a, early, "psBCK1", |[x, y, z]| {
            a.squig(a.arrow(x, y), a.squig(a.arrow(y, z), a.arrow(x, z))) == one
        }),
        scan(a, early, "psBCK2", |[x, y, z]| {
            a.arrow(a.squig(x, y), a.arrow(a.squig(y, z), a.squig(x, z))) == one
        }),
        scan(a, early, "psBCK3", |[x]| a.arrow(one, x) == x),
        scan(a, early, "psBCK4", |[x]| a.squig(one, x) == x),
        scan(a, early, "psBCK5", |[x]| a.arrow(x, one) == one),
        scan(a, early, "psBCK6", |[x, y]| {
            !(a.arrow(x, y) == one && a.arrow(y, x) == one) || x == y
        }),
    ]
}

fn condition_a(a: &FiniteAlgebra, early: bool) -> Vec<Option<AxiomViolation>> {
    vec![scan(a, early, "A", |[x, y, z]| {
        !a.le(x, y) || (a.le(a.arrow(y, z), a.arrow(x, z)) && a.le(a.squig(y, z), a.squig(x, z)))
    })]
}

fn distributive(a: &FiniteAlgebra, early: bool) -> Vec<Option<AxiomViolation>> {
    vec![scan(a, early, "dist", |[x, y, z]| {
        a.arrow(x, a.squig(y, z)) == a.squig(a.arrow(x, y), a.arrow(x, z))
    })]
}

fn commutative(a: &FiniteAlgebra, early: bool) -> Vec<Option<AxiomViolation>> {
    vec![
        scan(a, early, "comm1", |[x, y]| a.vee1(x, y) == a.vee1(y, x)),
        scan(a, early, "comm2", |[x, y]| a.vee2(x, y) == a.vee2(y, x)),
    ]
}

fn twisted_identity(a: &FiniteAlgebra, [x, y, z]: [ElementId; 3]) -> bool {
    a.squig(a.arrow(x, z), a.arrow(y, z)) == a.squig(a.arrow(z, x), a.arrow(y, x))
        && a.arrow(a.squig(x, z), a.squig(y, z)) == a.arrow(a.squig(z, x), a.squig(y, x))
}

fn exchange(a: &FiniteAlgebra, [x, y, z]: [ElementId; 3]) -> bool {
    a.arrow(x, a.squig(y, z)) == a.squig(y, a.arrow(x, z))
}

fn order_agreement(a: &FiniteAlgebra, [x, y]: [ElementId; 2]) -> bool {
    (a.arrow(x, y) == a.unit()) == (a.squig(x, y) == a.unit())
}

fn p_system(a: &FiniteAlgebra, early: bool) -> Vec<Option<AxiomViolation>> {
    let one = a.unit();
    vec![
        scan(a, early, "P1", |[x]| {
            a.arrow(one, x) == x && a.squig(one, x) == x
        }),
        scan(a, early, "P2", |[x]| {
            a.arrow(x, one) == one && a.squig(x, one) == one
        }),
        scan(a, early, "P3", |t| twisted_identity(a, t)),
        scan(a, early, "P4", |t| exchange(a, t)),
        scan(a, early, "P5", |t| order_agreement(a, t)),
    ]
}

fn q_system(a: &FiniteAlgebra, early: bool) -> Vec<Option<AxiomViolation>> {
    let one = a.unit();
    vec![
        scan(a, early, "Q1", |[x, y]| {
            a.squig(a.arrow(x, one), y) == y && a.arrow(a.squig(x, one), y) == y
        }),
        scan(a, early, "Q2", |t| twisted_identity(a, t)),
        scan(a, early, "Q3", |t| exchange(a, t)),
        scan(a, early, "Q4", |t| order_agreement(a, t)),
    ]
}

/// Evaluates every quantified axiom of `system` over all element tuples.
pub fn check_axioms(a: &FiniteAlgebra, system: AxiomSystem) -> AxiomReport {
    let results = evaluate(a, system, false);
    let mut violations: Vec<AxiomViolation> = results.into_iter().flatten().collect();
    violations.sort_by(|l, r| l.axiom.cmp(r.axiom).then_with(|| l.witness.cmp(&r.witness)));
    AxiomReport { system, violations }
}

/// Whether `system` holds, stopping each axiom at its first failing tuple.
pub fn axioms_hold(a: &FiniteAlgebra, system: AxiomSystem) -> bool {
    evaluate(a, system, true).iter().all(Option::is_none)
}

fn evaluate(a: &FiniteAlgebra, system: AxiomSystem, early: bool) -> Vec<Option<AxiomViolation>> {
    match system {
        AxiomSystem::PseudoBe => pseudo_be(a, early),
        AxiomSystem::PseudoBck => pseudo_bck(a, early),
        AxiomSystem::ConditionA => condition_a(a, early),
        AxiomSystem::Distributive => distributive(a, early),
        AxiomSystem::Commutative => commutative(a, early),
        AxiomSystem::PSystem => p_system(a, early),
        AxiomSystem::QSystem => q_system(a, early),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_algebra;

    fn load(text: &str) -> FiniteAlgebra {
        parse_algebra(text).unwrap()
    }

    const PBCK4: &str = include_str!("../../../../fixtures/algebras/pbck4.alg");
    const PBE6: &str = include_str!("../../../../fixtures/algebras/pbe6.alg");
    const PBEA5: &str = include_str!("../../../../fixtures/algebras/pbea5.alg");

    #[test]
    fn four_element_algebra_is_pseudo_be_and_pseudo_bck() {
        let a = load(PBCK4);
        assert!(check_axioms(&a, AxiomSystem::PseudoBe).holds());
        assert!(check_axioms(&a, AxiomSystem::PseudoBck).holds());
    }

    #[test]
    fn six_element_algebra_fails_antisymmetry_at_b_c() {
        let a = load(PBE6);
        assert!(check_axioms(&a, AxiomSystem::PseudoBe).holds());
        let r = check_axioms(&a, AxiomSystem::PseudoBck);
        assert!(!r.holds());
        let v = r.violation("psBCK6").unwrap();
        assert_eq!(a.format_tuple(&v.witness), "(b,c)");
    }

    #[test]
    fn five_element_algebra_is_not_commutative() {
        let a = load(PBEA5);
        let r = check_axioms(&a, AxiomSystem::Commutative);
        let v = r.violation("comm1").unwrap();
        assert_eq!(a.format_tuple(&v.witness), "(a,d)");
        let (x, y) = (v.witness[0], v.witness[1]);
        assert_eq!(a.token(a.vee1(x, y)), "d");
        assert_eq!(a.token(a.vee1(y, x)), "a");
    }

    #[test]
    fn violations_are_sorted_by_tag() {
        // Break several axioms at once.
        let a = FiniteAlgebra::new(
            "broken",
            vec!["1".into(), "a".into(), "b".into()],
            vec![vec![0, 1, 2], vec![1, 1, 1], vec![2, 2, 2]],
            vec![vec![0, 2, 1], vec![0, 0, 0], vec![0, 0, 0]],
            0,
            None,
        )
        .unwrap();
        let r = check_axioms(&a, AxiomSystem::PseudoBe);
        let tags: Vec<&str> = r.violations.iter().map(|v| v.axiom).collect();
        let mut sorted = tags.clone();
        sorted.sort();
        assert_eq!(tags, sorted);
        assert!(!r.holds());
    }

    #[test]
    fn system_tags_parse() {
        for sys in AxiomSystem::ALL {
            assert_eq!(sys.tag().parse::<AxiomSystem>().unwrap(), sys);
        }
        assert!("pseudo-bck".parse::<AxiomSystem>().is_ok());
        assert!("nonsense".parse::<AxiomSystem>().is_err());
    }
}
