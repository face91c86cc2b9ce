//! Identities the theory guarantees, checked over the fixtures and every model up to size 4.

use pbe_core::algebra::{classify, parse_algebra};
use pbe_core::assignment::{AssignmentKind, RationalAssignment};
use pbe_core::ds::{closure, deductive_systems, is_fantastic, quotient};
use pbe_core::finder::{enumerate_models, SearchConstraints};
use pbe_core::hom::{
    enumerate_homomorphisms, hom_kernel, is_monotone, preimage, preimage_ds, preserves_unit,
};
use pbe_core::linalg::{to_rationals, Rational};
use pbe_core::operators::{enumerate_operators, OperatorKind};
use pbe_core::states::{is_bosbach_state, state_space};
use pbe_core::valuations::{
    is_pseudo_valuation, is_weak_pseudo_valuation, pullback, pushforward, valuation_cone,
};
use pbe_core::{ElementId, ElementSubset, Exec, FiniteAlgebra};

const FIXTURES: &[&str] = &[
    include_str!("../../../fixtures/algebras/luk3.alg"),
    include_str!("../../../fixtures/algebras/pbck4.alg"),
    include_str!("../../../fixtures/algebras/pbe6.alg"),
    include_str!("../../../fixtures/algebras/pbe6_bounded.alg"),
    include_str!("../../../fixtures/algebras/pbea5.alg"),
    include_str!("../../../fixtures/algebras/trivial.alg"),
    include_str!("../../../fixtures/algebras/two.alg"),
];

fn corpus() -> Vec<FiniteAlgebra> {
    let mut all: Vec<FiniteAlgebra> = FIXTURES.iter().map(|t| parse_algebra(t).unwrap()).collect();
    for n in 1..=4 {
        all.extend(enumerate_models(&SearchConstraints::new(n), Exec::Sequential).unwrap());
    }
    all
}

fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn pairs(a: &FiniteAlgebra) -> impl Iterator<Item = (ElementId, ElementId)> + '_ {
    a.elements()
        .flat_map(move |x| a.elements().map(move |y| (x, y)))
}

/// Vertices of the state polytope and the midpoints of every two of them.
fn sample_states(a: &FiniteAlgebra) -> Vec<RationalAssignment> {
    let v = state_space(a).unwrap().vertices;
    let mut out = v.clone();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            out.push(
                v[i].iter()
                    .zip(&v[j])
                    .map(|(p, q)| (p + q) / r(2))
                    .collect(),
            );
        }
    }
    out.into_iter()
        .map(|s| RationalAssignment::new(AssignmentKind::State, "s", s))
        .collect()
}

#[test]
fn pseudo_be_consequences() {
    for a in corpus() {
        let c = classify(&a);
        assert!(c.pseudo_be, "{}", a.name());
        for (x, y) in pairs(&a) {
            assert_eq!(a.le(x, y), a.squig(x, y) == a.unit());
            assert_eq!(a.arrow(x, a.squig(y, x)), a.unit());
            assert_eq!(a.squig(x, a.arrow(y, x)), a.unit());
            if c.condition_a && a.le(x, y) {
                for z in a.elements() {
                    assert!(
                        a.le(a.vee1(x, z), a.vee1(y, z)),
                        "{}: join monotone",
                        a.name()
                    );
                }
            }
        }
    }
}

#[test]
fn both_modus_ponens_forms_agree() {
    for a in corpus() {
        for bits in 0..1u64 << a.size() {
            let d = ElementSubset::from_bits(a.size(), bits);
            let c = closure(&a, &d);
            if c.contains_unit {
                assert_eq!(
                    c.arrow_closed,
                    c.squig_closed,
                    "{} {}",
                    a.name(),
                    a.format_subset(&d)
                );
            }
        }
    }
}

#[test]
fn quotient_projection_has_kernel_h() {
    for a in corpus().into_iter().filter(|a| classify(a).distributive) {
        for h in deductive_systems(&a, Exec::Sequential).unwrap() {
            let q = quotient(&a, &h).unwrap();
            let unit = q.quotient.unit();
            let ker = a.subset_of(a.elements().filter(|x| q.projection[x.index()] == unit));
            assert_eq!(ker, h, "{}", a.name());
        }
    }
}

#[test]
fn state_identities() {
    for a in corpus() {
        let c = classify(&a);
        for s in sample_states(&a) {
            assert!(is_bosbach_state(&a, &s));
            for (x, y) in pairs(&a).filter(|&(x, y)| a.le(x, y)) {
                let want = r(1) + s.at(x) - s.at(y);
                assert_eq!(*s.at(a.arrow(y, x)), want, "{}", a.name());
                assert_eq!(*s.at(a.squig(y, x)), want, "{}", a.name());
            }
            if c.condition_a {
                for (x, y) in pairs(&a) {
                    assert_eq!(s.at(a.vee1(x, y)), s.at(a.vee2(x, y)));
                    assert_eq!(s.at(a.arrow(x, y)), s.at(a.squig(x, y)));
                }
            }
            if let Some(zero) = a.bottom().filter(|&z| *s.at(z) == r(0)) {
                for x in a.elements() {
                    let want = r(1) - s.at(x);
                    assert_eq!(*s.at(a.arrow(x, zero)), want);
                    assert_eq!(*s.at(a.squig(x, zero)), want);
                }
            }
        }
    }
}

#[test]
fn internal_state_identities() {
    for a in corpus().into_iter().filter(|a| classify(a).condition_a) {
        for kind in [OperatorKind::TypeI, OperatorKind::TypeII] {
            for mu in enumerate_operators(&a, kind, true, Exec::Sequential).unwrap() {
                let m = |x: ElementId| mu[x.index()];
                assert_eq!(m(a.unit()), a.unit());
                for x in a.elements() {
                    assert_eq!(m(m(x)), m(x));
                }
                for (x, y) in pairs(&a) {
                    assert!(a.le(m(a.arrow(x, y)), a.arrow(m(x), m(y))));
                    assert!(a.le(m(a.squig(x, y)), a.squig(m(x), m(y))));
                    if kind == OperatorKind::TypeII && a.le(y, x) {
                        assert_eq!(m(a.arrow(x, y)), a.arrow(m(x), m(y)), "{}", a.name());
                    }
                }
                let fixed: Vec<ElementId> = a.elements().filter(|&x| m(x) == x).collect();
                let mut image: Vec<ElementId> = mu.clone();
                image.sort();
                image.dedup();
                assert_eq!(image, fixed);
            }
        }
    }
}

/// Rays of the valuation cone plus a few positive combinations of them.
fn sample_valuations(a: &FiniteAlgebra) -> Vec<RationalAssignment> {
    let rays: Vec<Vec<Rational>> = valuation_cone(a)
        .unwrap()
        .1
        .iter()
        .map(|v| to_rationals(v))
        .collect();
    let mut out = rays.clone();
    for (k, w) in [(1, 1), (2, 3), (5, 1)] {
        let mut sum = vec![r(0); a.size()];
        for (i, ray) in rays.iter().enumerate() {
            let c = if i % 2 == 0 { r(k) } else { r(w) };
            for (s, v) in sum.iter_mut().zip(ray) {
                *s += &c * v;
            }
        }
        out.push(sum);
    }
    out.into_iter()
        .map(|v| RationalAssignment::new(AssignmentKind::Valuation, "p", v))
        .collect()
}

#[test]
fn pseudo_valuation_consequences() {
    for a in corpus() {
        for phi in sample_valuations(&a) {
            assert!(is_pseudo_valuation(&a, &phi));
            assert!(is_weak_pseudo_valuation(&a, &phi));
            for (x, y) in pairs(&a) {
                assert!(*phi.at(x) >= r(0));
                if a.le(x, y) {
                    assert!(phi.at(x) >= phi.at(y));
                }
                for z in a.elements() {
                    if a.arrow(z, a.squig(y, x)) == a.unit() {
                        assert!(*phi.at(x) <= phi.at(y) + phi.at(z));
                    }
                }
            }
        }
    }
}

#[test]
fn weak_pseudo_valuations_are_nonnegative() {
    for a in corpus().into_iter().filter(|a| a.size() <= 5) {
        let n = a.size() as u32;
        for code in 0..4u64.pow(n) {
            let values: Vec<Rational> = (0..n)
                .map(|i| r((code / 4u64.pow(i) % 4) as i64 - 1))
                .collect();
            let phi = RationalAssignment::new(AssignmentKind::Valuation, "g", values);
            if *phi.at(a.unit()) >= r(0) && is_weak_pseudo_valuation(&a, &phi) {
                assert!(phi.values.iter().all(|v| *v >= r(0)), "{}", a.name());
            }
        }
    }
}

#[test]
fn homomorphism_properties_and_transport() {
    let fixtures: Vec<FiniteAlgebra> = FIXTURES.iter().map(|t| parse_algebra(t).unwrap()).collect();
    let mut targets = fixtures.clone();
    for a in fixtures.iter().filter(|a| classify(a).distributive) {
        for h in deductive_systems(a, Exec::Sequential).unwrap() {
            targets.push(quotient(a, &h).unwrap().quotient);
        }
    }
    let mut checked = 0;
    for a in &fixtures {
        for b in targets
            .iter()
            .filter(|b| (b.size() as f64).powi(a.size() as i32) <= 50_000.0)
        {
            let fantastic: Vec<ElementSubset> = deductive_systems(b, Exec::Sequential)
                .unwrap()
                .into_iter()
                .filter(|e| is_fantastic(b, e).unwrap_or(false))
                .collect();
            let phis = sample_valuations(b);
            for f in enumerate_homomorphisms(a, b, false, true, Exec::Sequential).unwrap() {
                checked += 1;
                assert!(preserves_unit(a, b, &f) && is_monotone(a, b, &f));
                assert_eq!(
                    hom_kernel(a, b, &f),
                    preimage(a, &f, &b.subset_of([b.unit()]))
                );
                for e in &fantastic {
                    if let Ok(d) = preimage_ds(a, b, &f, e) {
                        assert!(
                            is_fantastic(a, &d).unwrap_or(true),
                            "{} -> {}",
                            a.name(),
                            b.name()
                        );
                    }
                }
                for phi in &phis {
                    pullback(a, b, &f, phi).unwrap();
                }
                if a.size() == b.size()
                    && f.iter().collect::<std::collections::BTreeSet<_>>().len() == a.size()
                {
                    for phi in sample_valuations(a) {
                        pushforward(a, b, &f, &phi).unwrap();
                    }
                }
            }
        }
    }
    assert!(checked > 20);
}
