//! Bosbach states, state-morphisms, measures and their exact solution sets.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{check_axioms, AxiomSystem, ElementId, FiniteAlgebra};
use crate::assignment::{AssignmentKind, RationalAssignment};
use crate::error::{Error, Result};
use crate::linalg::{
    box_vertices, cone_rays, solve_affine, AffineSolutionSpace, LinearEquation, PolyhedralCone,
    Rational,
};
use crate::subset::ElementSubset;
use crate::witness::{first_pair, first_single, Violation};

/// `min(1 - x + y, 1)`
pub fn lukasiewicz(x: &Rational, y: &Rational) -> Rational {
    let v = Rational::one() - x + y;
    if v > Rational::one() {
        Rational::one()
    } else {
        v
    }
}

fn unit_interval(v: &Rational) -> bool {
    !v.is_negative() && *v <= Rational::one()
}

/// First failure among (bs1), range, (bs2), (bs3).
pub fn bosbach_violation(a: &FiniteAlgebra, s: &RationalAssignment) -> Option<Violation> {
    let one = a.unit();
    if !s.at(one).is_one() {
        return Some(Violation::new("bs1", vec![one]));
    }
    first_single(a, "range", |x| unit_interval(s.at(x)))
        .or_else(|| {
            first_pair(a, "bs2", |x, y| {
                s.at(x) + s.at(a.arrow(x, y)) == s.at(y) + s.at(a.arrow(y, x))
            })
        })
        .or_else(|| {
            first_pair(a, "bs3", |x, y| {
                s.at(x) + s.at(a.squig(x, y)) == s.at(y) + s.at(a.squig(y, x))
            })
        })
}

pub fn is_bosbach_state(a: &FiniteAlgebra, s: &RationalAssignment) -> bool {
    bosbach_violation(a, s).is_none()
}

/// `s(x -> y) = s(x ~> y) = s(x) ->_L s(y)` for all pairs, with values in `[0,1]`.
pub fn state_morphism_violation(a: &FiniteAlgebra, s: &RationalAssignment) -> Option<Violation> {
    first_single(a, "range", |x| unit_interval(s.at(x))).or_else(|| {
        first_pair(a, "sm", |x, y| {
            let l = lukasiewicz(s.at(x), s.at(y));
            *s.at(a.arrow(x, y)) == l && *s.at(a.squig(x, y)) == l
        })
    })
}

pub fn is_state_morphism(a: &FiniteAlgebra, s: &RationalAssignment) -> bool {
    state_morphism_violation(a, s).is_none()
}

fn require_condition_a(a: &FiniteAlgebra) -> Result<()> {
    if check_axioms(a, AxiomSystem::ConditionA).holds() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "`{}` does not satisfy condition (A)",
            a.name()
        )))
    }
}

fn require_membership(a: &FiniteAlgebra, what: &str, violation: Option<Violation>) -> Result<()> {
    match violation {
        None => Ok(()),
        Some(v) => Err(Error::Precondition(format!(
            "not a {what}: {}",
            v.describe(a)
        ))),
    }
}

/// The max-characterization of state-morphisms: `s(x v1 y) = max(s(x), s(y))`.
///
/// Only meaningful for Bosbach states on algebras with condition (A), where it agrees
/// with [`state_morphism_violation`].
pub fn sm_characterization_violation(
    a: &FiniteAlgebra,
    s: &RationalAssignment,
) -> Result<Option<Violation>> {
    require_condition_a(a)?;
    require_membership(a, "Bosbach state", bosbach_violation(a, s))?;
    Ok(first_pair(a, "max-join", |x, y| {
        *s.at(a.vee1(x, y)) == s.at(x).max(s.at(y)).clone()
    }))
}

/// `m >= 0` and `m(x -> y) = m(x ~> y) = m(y) - m(x)` whenever `y <= x`.
pub fn measure_violation(a: &FiniteAlgebra, m: &RationalAssignment) -> Option<Violation> {
    first_single(a, "nonnegative", |x| !m.at(x).is_negative()).or_else(|| {
        first_pair(a, "measure", |x, y| {
            if !a.le(y, x) {
                return true;
            }
            let d = m.at(y) - m.at(x);
            *m.at(a.arrow(x, y)) == d && *m.at(a.squig(x, y)) == d
        })
    })
}

pub fn is_measure(a: &FiniteAlgebra, m: &RationalAssignment) -> bool {
    measure_violation(a, m).is_none()
}

/// `m >= 0` and `m(x -> y) = m(x ~> y) = max(0, m(y) - m(x))` for all pairs.
pub fn measure_morphism_violation(a: &FiniteAlgebra, m: &RationalAssignment) -> Option<Violation> {
    first_single(a, "nonnegative", |x| !m.at(x).is_negative()).or_else(|| {
        first_pair(a, "measure-morphism", |x, y| {
            let d = (m.at(y) - m.at(x)).max(Rational::zero());
            *m.at(a.arrow(x, y)) == d && *m.at(a.squig(x, y)) == d
        })
    })
}

pub fn is_measure_morphism(a: &FiniteAlgebra, m: &RationalAssignment) -> bool {
    measure_morphism_violation(a, m).is_none()
}

fn bottom_value(
    a: &FiniteAlgebra,
    m: &RationalAssignment,
    expected: Rational,
) -> Result<Option<Violation>> {
    let zero = a.require_bottom()?;
    Ok((*m.at(zero) != expected).then(|| Violation::new("bottom", vec![zero])))
}

pub fn state_measure_violation(
    a: &FiniteAlgebra,
    m: &RationalAssignment,
) -> Result<Option<Violation>> {
    let at_zero = bottom_value(a, m, Rational::one())?;
    Ok(measure_violation(a, m).or(at_zero))
}

pub fn state_measure_morphism_violation(
    a: &FiniteAlgebra,
    m: &RationalAssignment,
) -> Result<Option<Violation>> {
    let at_zero = bottom_value(a, m, Rational::one())?;
    Ok(measure_morphism_violation(a, m).or(at_zero))
}

fn unit_row(n: usize, i: usize) -> Vec<Rational> {
    let mut r = vec![Rational::zero(); n];
    r[i] = Rational::one();
    r
}

fn add(row: &mut [Rational], x: ElementId, c: i64) {
    row[x.index()] += Rational::from_integer(BigInt::from(c));
}

/// `s(1) = 1` plus (bs2), (bs3) for each unordered pair.
pub fn state_equations(a: &FiniteAlgebra) -> Vec<LinearEquation> {
    let n = a.size();
    let mut eqs = vec![LinearEquation::new(
        unit_row(n, a.unit().index()),
        Rational::one(),
    )];
    for x in a.elements() {
        for y in a.elements().filter(|y| x < *y) {
            for op in [FiniteAlgebra::arrow, FiniteAlgebra::squig] {
                let mut row = vec![Rational::zero(); n];
                add(&mut row, x, 1);
                add(&mut row, op(a, x, y), 1);
                add(&mut row, y, -1);
                add(&mut row, op(a, y, x), -1);
                if row.iter().any(|c| !c.is_zero()) {
                    eqs.push(LinearEquation::new(row, Rational::zero()));
                }
            }
        }
    }
    eqs
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpaceResult {
    /// `None` when the equations alone are inconsistent.
    pub affine: Option<AffineSolutionSpace>,
    /// Vertices of the affine space cut by `[0,1]^n`; empty when there are no states.
    pub vertices: Vec<Vec<Rational>>,
}

pub fn state_space(a: &FiniteAlgebra) -> Result<StateSpaceResult> {
    let n = a.size();
    let affine = solve_affine(n, &state_equations(a));
    let vertices = match &affine {
        None => Vec::new(),
        Some(space) => box_vertices(space, &vec![Rational::zero(); n], &vec![Rational::one(); n])?,
    };
    Ok(StateSpaceResult { affine, vertices })
}

/// The measure cone: `m(1) = 0`, the measure equalities for `y <= x`, and `m >= 0`.
pub fn measure_cone_description(a: &FiniteAlgebra) -> PolyhedralCone {
    let n = a.size();
    let mut eqs = vec![unit_row(n, a.unit().index())];
    for x in a.elements() {
        for y in a.elements().filter(|&y| a.le(y, x)) {
            for op in [FiniteAlgebra::arrow, FiniteAlgebra::squig] {
                let mut row = vec![Rational::zero(); n];
                add(&mut row, op(a, x, y), 1);
                add(&mut row, y, -1);
                add(&mut row, x, 1);
                if row.iter().any(|c| !c.is_zero()) && !eqs.contains(&row) {
                    eqs.push(row);
                }
            }
        }
    }
    PolyhedralCone::nonnegative(n, eqs)
}

pub fn measure_cone(a: &FiniteAlgebra) -> Result<(PolyhedralCone, Vec<Vec<BigInt>>)> {
    let cone = measure_cone_description(a);
    let rays = cone_rays(&cone)?;
    Ok((cone, rays))
}

fn require_bounded_a(a: &FiniteAlgebra) -> Result<ElementId> {
    let zero = a.require_bottom()?;
    require_condition_a(a)?;
    Ok(zero)
}

fn complement(kind: AssignmentKind, name: &str, v: &RationalAssignment) -> RationalAssignment {
    RationalAssignment::new(
        kind,
        name,
        v.values.iter().map(|x| Rational::one() - x).collect(),
    )
}

/// `m = 1 - s` for a Bosbach state with `s(0) = 0`.
pub fn state_to_measure(a: &FiniteAlgebra, s: &RationalAssignment) -> Result<RationalAssignment> {
    let zero = require_bounded_a(a)?;
    require_membership(a, "Bosbach state", bosbach_violation(a, s))?;
    if !s.at(zero).is_zero() {
        return Err(Error::Precondition(format!(
            "s({}) = 0 fails",
            a.token(zero)
        )));
    }
    let m = complement(AssignmentKind::Measure, &s.name, s);
    require_membership(a, "state-measure", state_measure_violation(a, &m)?)
        .map_err(|e| Error::ConsistencyAlarm(e.to_string()))?;
    Ok(m)
}

/// `s = 1 - m` for a state-measure.
pub fn measure_to_state(a: &FiniteAlgebra, m: &RationalAssignment) -> Result<RationalAssignment> {
    require_bounded_a(a)?;
    require_membership(a, "state-measure", state_measure_violation(a, m)?)?;
    let s = complement(AssignmentKind::State, &m.name, m);
    require_membership(a, "Bosbach state", bosbach_violation(a, &s))
        .map_err(|e| Error::ConsistencyAlarm(e.to_string()))?;
    Ok(s)
}

/// `Ker(s) = {x : s(x) = 1}` of a Bosbach state.
pub fn state_kernel(a: &FiniteAlgebra, s: &RationalAssignment) -> Result<ElementSubset> {
    require_membership(a, "Bosbach state", bosbach_violation(a, s))?;
    Ok(a.subset_of(a.elements().filter(|&x| s.at(x).is_one())))
}

/// `Ker0(m) = {x : m(x) = 0}` of a measure.
pub fn measure_kernel(a: &FiniteAlgebra, m: &RationalAssignment) -> Result<ElementSubset> {
    require_membership(a, "measure", measure_violation(a, m))?;
    Ok(a.subset_of(a.elements().filter(|&x| m.at(x).is_zero())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_algebra;
    use crate::linalg::{int, rat};

    fn load(name: &str) -> FiniteAlgebra {
        let path = format!(
            "{}/../../fixtures/algebras/{name}.alg",
            env!("CARGO_MANIFEST_DIR")
        );
        parse_algebra(&std::fs::read_to_string(path).unwrap()).unwrap()
    }

    /// Values on `1, a, b, c, d`.
    fn five(kind: AssignmentKind, v: [Rational; 5]) -> RationalAssignment {
        RationalAssignment::new(kind, "t", v.to_vec())
    }

    #[test]
    fn bosbach_families() {
        let a = load("pbea5");
        let s1 = five(
            AssignmentKind::State,
            [int(1), int(1), rat(1, 2), rat(1, 2), int(1)],
        );
        assert!(is_bosbach_state(&a, &s1));
        let s4 = five(
            AssignmentKind::State,
            [int(1), int(1), int(1), int(1), int(1)],
        );
        assert!(is_bosbach_state(&a, &s4));
        let bad = five(
            AssignmentKind::State,
            [int(1), int(1), int(1), int(1), int(0)],
        );
        assert_eq!(bosbach_violation(&a, &bad).unwrap().rule, "bs2");
    }

    #[test]
    fn state_space_of_five_element_algebra() {
        let a = load("pbea5");
        let r = state_space(&a).unwrap();
        let space = r.affine.unwrap();
        assert_eq!(space.dimension(), 2);
        assert_eq!(r.vertices.len(), 4);
        for v in &r.vertices {
            let s = RationalAssignment::new(AssignmentKind::State, "v", v.clone());
            assert!(is_bosbach_state(&a, &s));
            assert_eq!(v[1], v[4]);
            assert_eq!(v[2], v[3]);
        }
    }

    #[test]
    fn trivial_state_space() {
        let a = load("trivial");
        let r = state_space(&a).unwrap();
        assert_eq!(r.affine.unwrap().dimension(), 0);
        assert_eq!(r.vertices, vec![vec![int(1)]]);
    }

    #[test]
    fn state_morphism_discrimination() {
        let a = load("pbea5");
        let s3 = five(
            AssignmentKind::State,
            [int(1), rat(1, 2), rat(1, 3), rat(1, 3), rat(1, 2)],
        );
        assert!(is_bosbach_state(&a, &s3));
        assert!(!is_state_morphism(&a, &s3));
        let v = sm_characterization_violation(&a, &s3).unwrap().unwrap();
        assert_eq!(a.format_tuple(&v.witness), "(a,b)");
        let s1 = five(
            AssignmentKind::State,
            [int(1), int(1), rat(1, 2), rat(1, 2), int(1)],
        );
        assert!(is_state_morphism(&a, &s1));
        assert!(sm_characterization_violation(&a, &s1).unwrap().is_none());
    }

    #[test]
    fn measures_and_morphisms() {
        let a = load("pbea5");
        let m1 = five(
            AssignmentKind::Measure,
            [int(0), int(0), int(1), int(1), int(0)],
        );
        assert!(is_measure(&a, &m1) && is_measure_morphism(&a, &m1));
        let m3 = five(
            AssignmentKind::Measure,
            [int(0), int(1), int(2), int(2), int(1)],
        );
        assert!(is_measure(&a, &m3) && !is_measure_morphism(&a, &m3));
        assert_eq!(a.format_subset(&measure_kernel(&a, &m3).unwrap()), "{1}");
        let (_, rays) = measure_cone(&a).unwrap();
        let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(rays, vec![ints(&[0, 0, 1, 1, 0]), ints(&[0, 1, 0, 0, 1])]);
    }

    #[test]
    fn bijection_on_bounded_chain() {
        let a = load("luk3");
        let s =
            RationalAssignment::new(AssignmentKind::State, "s", vec![int(0), rat(1, 2), int(1)]);
        let m = state_to_measure(&a, &s).unwrap();
        assert_eq!(m.values, vec![int(1), rat(1, 2), int(0)]);
        assert_eq!(measure_to_state(&a, &m).unwrap().values, s.values);
        let u = load("pbea5");
        assert!(matches!(state_to_measure(&u, &s), Err(Error::Unbounded(_))));
        let ones = RationalAssignment::new(AssignmentKind::State, "s", vec![int(1); 3]);
        assert!(matches!(
            state_to_measure(&a, &ones),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn kernels() {
        let a = load("pbea5");
        let s1 = five(
            AssignmentKind::State,
            [int(1), int(1), rat(1, 2), rat(1, 2), int(1)],
        );
        assert_eq!(a.format_subset(&state_kernel(&a, &s1).unwrap()), "{1,a,d}");
    }
}
