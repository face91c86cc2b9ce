//! Internal states of type I and II and state-morphism operators.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{check_axioms, AxiomSystem, ElementId, FiniteAlgebra};
use crate::ds::is_deductive_system;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::subset::ElementSubset;
use crate::witness::{first_pair, first_single, Violation};

/// Largest `n^n` accepted by [`enumerate_operators`].
pub const OPERATOR_SEARCH_LIMIT: u128 = 10_000_000;

/// Image of each element, indexed by carrier position.
pub type UnaryOperator = Vec<ElementId>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    /// (is1), (is2), (is3)
    TypeI,
    /// (is1), (is2'), (is3)
    TypeII,
    /// Idempotent endomorphism.
    Smo,
}

impl OperatorKind {
    pub fn tag(self) -> &'static str {
        match self {
            OperatorKind::TypeI => "I",
            OperatorKind::TypeII => "II",
            OperatorKind::Smo => "smo",
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for OperatorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "I" | "i" | "1" => Ok(OperatorKind::TypeI),
            "II" | "ii" | "2" => Ok(OperatorKind::TypeII),
            "smo" | "SMO" => Ok(OperatorKind::Smo),
            _ => Err(format!(
                "unknown operator kind `{s}` (expected I, II or smo)"
            )),
        }
    }
}

/// First failure in the order (is1), (is2)/(is2'), (is3).
pub fn internal_state_violation(
    a: &FiniteAlgebra,
    mu: &[ElementId],
    kind: OperatorKind,
) -> Option<Violation> {
    assert!(kind != OperatorKind::Smo, "use smo_violation");
    let m = |x: ElementId| mu[x.index()];
    let is1 = first_pair(a, "is1", |x, y| !a.le(x, y) || a.le(m(x), m(y)));
    let is2 = || match kind {
        OperatorKind::TypeI => first_pair(a, "is2", |x, y| {
            m(a.arrow(x, y)) == a.arrow(m(a.vee1(x, y)), m(y))
                && m(a.squig(x, y)) == a.squig(m(a.vee2(x, y)), m(y))
        }),
        _ => first_pair(a, "is2'", |x, y| {
            m(a.arrow(x, y)) == a.arrow(m(a.vee1(y, x)), m(y))
                && m(a.squig(x, y)) == a.squig(m(a.vee2(y, x)), m(y))
        }),
    };
    let is3 = || {
        first_pair(a, "is3", |x, y| {
            let (l, r) = (a.arrow(m(x), m(y)), a.squig(m(x), m(y)));
            m(l) == l && m(r) == r
        })
    };
    is1.or_else(is2).or_else(is3)
}

pub fn is_internal_state(a: &FiniteAlgebra, mu: &[ElementId], kind: OperatorKind) -> bool {
    internal_state_violation(a, mu, kind).is_none()
}

/// Endomorphism of both implications that is idempotent.
pub fn smo_violation(a: &FiniteAlgebra, mu: &[ElementId]) -> Option<Violation> {
    let m = |x: ElementId| mu[x.index()];
    first_pair(a, "hom", |x, y| {
        m(a.arrow(x, y)) == a.arrow(m(x), m(y)) && m(a.squig(x, y)) == a.squig(m(x), m(y))
    })
    .or_else(|| first_single(a, "idempotent", |x| m(m(x)) == m(x)))
}

pub fn is_smo(a: &FiniteAlgebra, mu: &[ElementId]) -> bool {
    smo_violation(a, mu).is_none()
}

/// Violation for any operator kind.
pub fn operator_violation(
    a: &FiniteAlgebra,
    mu: &[ElementId],
    kind: OperatorKind,
) -> Option<Violation> {
    match kind {
        OperatorKind::Smo => smo_violation(a, mu),
        _ => internal_state_violation(a, mu, kind),
    }
}

/// All operators of the given kind in lexicographic order of their image sequences.
///
/// With `prune` set and condition (A) holding, only maps with `mu(1) = 1` are tried;
/// otherwise every map is tested.
pub fn enumerate_operators(
    a: &FiniteAlgebra,
    kind: OperatorKind,
    prune: bool,
    exec: Exec,
) -> Result<Vec<UnaryOperator>> {
    let n = a.size();
    let total = (n as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > OPERATOR_SEARCH_LIMIT {
        return Err(Error::SearchTooLarge {
            size: total,
            limit: OPERATOR_SEARCH_LIMIT,
        });
    }
    let fix_unit = prune && check_axioms(a, AxiomSystem::ConditionA).holds();
    let unit = a.unit().index();
    let firsts: Vec<usize> = (0..n).collect();
    let batches = exec.map(firsts, |first| {
        let mut found = Vec::new();
        let mut mu = vec![ElementId::new(0); n];
        mu[0] = ElementId::new(first);
        if fix_unit && unit == 0 && first != 0 {
            return found;
        }
        let rest = (n as u64).pow(n as u32 - 1);
        'codes: for code in 0..rest {
            let mut c = code;
            for slot in (1..n).rev() {
                mu[slot] = ElementId::new((c % n as u64) as usize);
                c /= n as u64;
            }
            if fix_unit && mu[unit] != a.unit() {
                continue 'codes;
            }
            if operator_violation(a, &mu, kind).is_none() {
                found.push(mu.clone());
            }
        }
        found
    });
    Ok(batches.into_iter().flatten().collect())
}

pub fn operator_kernel(a: &FiniteAlgebra, mu: &[ElementId]) -> ElementSubset {
    a.subset_of(a.elements().filter(|&x| mu[x.index()] == a.unit()))
}

pub fn operator_image(a: &FiniteAlgebra, mu: &[ElementId]) -> ElementSubset {
    a.subset_of(mu.iter().copied())
}

/// Kernel and image of an internal state or state-morphism operator.
///
/// For internal states on algebras with condition (A) this also confirms that the
/// kernel is a deductive system, the image is a subalgebra, and they meet in `{1}`.
pub fn kernel_image(a: &FiniteAlgebra, mu: &[ElementId]) -> Result<(ElementSubset, ElementSubset)> {
    let internal = is_internal_state(a, mu, OperatorKind::TypeI)
        || is_internal_state(a, mu, OperatorKind::TypeII);
    if !internal && !is_smo(a, mu) {
        return Err(Error::Precondition(
            "map is neither an internal state nor a state-morphism operator".into(),
        ));
    }
    let ker = operator_kernel(a, mu);
    let im = operator_image(a, mu);
    if internal && check_axioms(a, AxiomSystem::ConditionA).holds() {
        let closed = im.iter().all(|x| {
            im.iter()
                .all(|y| im.contains(a.arrow(x, y)) && im.contains(a.squig(x, y)))
        });
        if !is_deductive_system(a, &ker)
            || !closed
            || ker.intersection(&im) != a.subset_of([a.unit()])
        {
            return Err(Error::ConsistencyAlarm(format!(
                "kernel {} and image {} of an internal state",
                a.format_subset(&ker),
                a.format_subset(&im)
            )));
        }
    }
    Ok((ker, im))
}
