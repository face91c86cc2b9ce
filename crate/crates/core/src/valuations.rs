//! Pseudo-valuations, weak and commutative pseudo-valuations, and their transport
//! along homomorphisms.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::algebra::{ElementId, FiniteAlgebra};
use crate::assignment::{AssignmentKind, RationalAssignment};
use crate::ds::{is_deductive_system, is_fantastic};
use crate::error::{Error, Result};
use crate::hom::{hom_violation, image, is_bijective, preimage};
use crate::linalg::{cone_rays, PolyhedralCone, Rational};
use crate::subset::ElementSubset;
use crate::witness::{first_pair, first_single, first_triple, Violation};

fn pv1(a: &FiniteAlgebra, phi: &RationalAssignment) -> Option<Violation> {
    (!phi.at(a.unit()).is_zero()).then(|| Violation::new("pv1", vec![a.unit()]))
}

/// First failure of (pv1), then (pv2).
pub fn pv_violation(a: &FiniteAlgebra, phi: &RationalAssignment) -> Option<Violation> {
    let v = |x: ElementId| phi.at(x);
    pv1(a, phi).or_else(|| {
        first_pair(a, "pv2", |x, y| {
            let d = v(y) - v(x);
            d <= *v(a.arrow(x, y)) && d <= *v(a.squig(x, y))
        })
    })
}

pub fn is_pseudo_valuation(a: &FiniteAlgebra, phi: &RationalAssignment) -> bool {
    pv_violation(a, phi).is_none()
}

/// A pseudo-valuation that vanishes only at `1`.
pub fn valuation_violation(a: &FiniteAlgebra, phi: &RationalAssignment) -> Option<Violation> {
    pv_violation(a, phi)
        .or_else(|| first_single(a, "pv3", |x| x == a.unit() || !phi.at(x).is_zero()))
}

pub fn is_valuation(a: &FiniteAlgebra, phi: &RationalAssignment) -> bool {
    valuation_violation(a, phi).is_none()
}

/// (pv6): `max(φ(x -> y), φ(x ~> y)) <= φ(x) + φ(y)`.
pub fn weak_pv_violation(a: &FiniteAlgebra, phi: &RationalAssignment) -> Option<Violation> {
    let v = |x: ElementId| phi.at(x);
    first_pair(a, "pv6", |x, y| {
        let s = v(x) + v(y);
        *v(a.arrow(x, y)) <= s && *v(a.squig(x, y)) <= s
    })
}

pub fn is_weak_pseudo_valuation(a: &FiniteAlgebra, phi: &RationalAssignment) -> bool {
    weak_pv_violation(a, phi).is_none()
}

fn cpv(a: &FiniteAlgebra, phi: &RationalAssignment) -> Option<Violation> {
    let v = |x: ElementId| phi.at(x);
    first_pair(a, "cpv1", |x, y| {
        v(a.arrow(a.vee1(x, y), x)) <= v(a.arrow(y, x))
    })
    .or_else(|| {
        first_pair(a, "cpv2", |x, y| {
            v(a.squig(a.vee2(x, y), x)) <= v(a.squig(y, x))
        })
    })
}

fn require_pv(a: &FiniteAlgebra, phi: &RationalAssignment) -> Result<()> {
    match pv_violation(a, phi) {
        None => Ok(()),
        Some(v) => Err(Error::Precondition(format!(
            "not a pseudo-valuation: {}",
            v.describe(a)
        ))),
    }
}

/// (cpv1), (cpv2) for a pseudo-valuation.
pub fn commutative_pv_violation(
    a: &FiniteAlgebra,
    phi: &RationalAssignment,
) -> Result<Option<Violation>> {
    require_pv(a, phi)?;
    Ok(cpv(a, phi))
}

pub fn is_commutative_pv(a: &FiniteAlgebra, phi: &RationalAssignment) -> Result<bool> {
    Ok(commutative_pv_violation(a, phi)?.is_none())
}

/// The triple-quantified characterizations, evaluated next to the direct checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterizationReport {
    pub pv4: Option<Violation>,
    pub pv5: Option<Violation>,
    pub cpv3: Option<Violation>,
    pub cpv4: Option<Violation>,
    pub pseudo_valuation: bool,
    /// `None` unless the input is a pseudo-valuation.
    pub commutative: Option<bool>,
}

impl CharacterizationReport {
    /// `pv4 ∧ pv5` agrees with (pv2), and `cpv3 ∧ cpv4` with (cpv1), (cpv2).
    pub fn consistent(&self) -> bool {
        let triple_pv = self.pv4.is_none() && self.pv5.is_none();
        let triple_cpv = self.cpv3.is_none() && self.cpv4.is_none();
        triple_pv == self.pseudo_valuation && self.commutative.is_none_or(|c| c == triple_cpv)
    }
}

pub fn characterization_crosscheck(
    a: &FiniteAlgebra,
    phi: &RationalAssignment,
) -> Result<CharacterizationReport> {
    if let Some(v) = pv1(a, phi) {
        return Err(Error::Precondition(format!("{} fails", v.describe(a))));
    }
    let v = |x: ElementId| phi.at(x);
    let pv4 = first_triple(a, "pv4", |x, y, z| {
        *v(a.arrow(x, z)) <= v(a.arrow(x, a.squig(y, z))) + v(y)
    });
    let pv5 = first_triple(a, "pv5", |x, y, z| {
        *v(a.squig(x, z)) <= v(a.squig(x, a.arrow(y, z))) + v(y)
    });
    let cpv3 = first_triple(a, "cpv3", |x, y, z| {
        *v(a.arrow(a.vee1(x, y), x)) <= v(a.arrow(z, a.arrow(y, x))) + v(z)
    });
    let cpv4 = first_triple(a, "cpv4", |x, y, z| {
        *v(a.squig(a.vee2(x, y), x)) <= v(a.squig(z, a.squig(y, x))) + v(z)
    });
    let pseudo_valuation = is_pseudo_valuation(a, phi);
    let commutative = pseudo_valuation.then(|| cpv(a, phi).is_none());
    Ok(CharacterizationReport {
        pv4,
        pv5,
        cpv3,
        cpv4,
        pseudo_valuation,
        commutative,
    })
}

/// `{φ : φ(1) = 0, φ(x -> y) + φ(x) - φ(y) >= 0, φ(x ~> y) + φ(x) - φ(y) >= 0}`
pub fn valuation_cone_description(a: &FiniteAlgebra) -> PolyhedralCone {
    let n = a.size();
    let mut unit = vec![Rational::zero(); n];
    unit[a.unit().index()] = Rational::from_integer(1.into());
    let mut ineqs: Vec<Vec<Rational>> = Vec::new();
    for x in a.elements() {
        for y in a.elements() {
            for t in [a.arrow(x, y), a.squig(x, y)] {
                let mut row = vec![Rational::zero(); n];
                row[t.index()] += Rational::from_integer(1.into());
                row[x.index()] += Rational::from_integer(1.into());
                row[y.index()] -= Rational::from_integer(1.into());
                if row.iter().any(|c| !c.is_zero()) && !ineqs.contains(&row) {
                    ineqs.push(row);
                }
            }
        }
    }
    PolyhedralCone {
        num_vars: n,
        equalities: vec![unit],
        inequalities: ineqs,
    }
}

/// Extreme rays of the pseudo-valuation cone, each re-verified as a pseudo-valuation.
pub fn valuation_cone(a: &FiniteAlgebra) -> Result<(PolyhedralCone, Vec<Vec<BigInt>>)> {
    let cone = valuation_cone_description(a);
    let rays = cone_rays(&cone)?;
    for r in &rays {
        let phi = RationalAssignment::new(
            AssignmentKind::Valuation,
            "ray",
            r.iter()
                .map(|x| Rational::from_integer(x.clone()))
                .collect(),
        );
        if let Some(v) = pv_violation(a, &phi) {
            return Err(Error::ConsistencyAlarm(format!(
                "cone ray fails {}",
                v.describe(a)
            )));
        }
    }
    Ok((cone, rays))
}

/// `Ker(φ) = {x : φ(x) = 0}`; a deductive system, fantastic when `φ` is commutative.
pub fn valuation_kernel(a: &FiniteAlgebra, phi: &RationalAssignment) -> Result<ElementSubset> {
    require_pv(a, phi)?;
    let ker = a.subset_of(a.elements().filter(|&x| phi.at(x).is_zero()));
    if !is_deductive_system(a, &ker) {
        return Err(Error::ConsistencyAlarm(format!(
            "kernel {} is not a deductive system",
            a.format_subset(&ker)
        )));
    }
    if cpv(a, phi).is_none() && !is_fantastic(a, &ker)? {
        return Err(Error::ConsistencyAlarm(format!(
            "kernel {} of a commutative pseudo-valuation is not fantastic",
            a.format_subset(&ker)
        )));
    }
    Ok(ker)
}

fn require_hom(a: &FiniteAlgebra, b: &FiniteAlgebra, f: &[ElementId]) -> Result<()> {
    if f.len() != a.size() {
        return Err(Error::SizeMismatch(format!(
            "map has {} entries for a carrier of {}",
            f.len(),
            a.size()
        )));
    }
    match hom_violation(a, b, f) {
        None => Ok(()),
        Some(v) => Err(Error::Precondition(format!(
            "not a homomorphism: {}",
            v.describe(a)
        ))),
    }
}

/// `ψ = φ ∘ f` for a homomorphism `f: A -> B` and a pseudo-valuation `φ` on `B`.
pub fn pullback(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    f: &[ElementId],
    phi: &RationalAssignment,
) -> Result<RationalAssignment> {
    require_hom(a, b, f)?;
    require_pv(b, phi)?;
    let psi = RationalAssignment::new(
        phi.kind,
        format!("{}_pullback", phi.name),
        a.elements().map(|x| phi.at(f[x.index()]).clone()).collect(),
    );
    let expected = preimage(a, f, &valuation_kernel(b, phi)?);
    check_transport(a, &psi, expected)?;
    Ok(psi)
}

/// The `ψ` on `B` with `ψ ∘ f = φ`, for an isomorphism `f: A -> B`.
pub fn pushforward(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    f: &[ElementId],
    phi: &RationalAssignment,
) -> Result<RationalAssignment> {
    require_hom(a, b, f)?;
    if !is_bijective(b, f) {
        return Err(Error::Precondition("map is not bijective".into()));
    }
    require_pv(a, phi)?;
    let mut values = vec![Rational::zero(); b.size()];
    for x in a.elements() {
        values[f[x.index()].index()] = phi.at(x).clone();
    }
    let psi = RationalAssignment::new(phi.kind, format!("{}_pushforward", phi.name), values);
    let expected = image(b, f, &valuation_kernel(a, phi)?);
    check_transport(b, &psi, expected)?;
    Ok(psi)
}

fn check_transport(
    a: &FiniteAlgebra,
    psi: &RationalAssignment,
    expected: ElementSubset,
) -> Result<()> {
    let ker = valuation_kernel(a, psi)
        .map_err(|e| Error::ConsistencyAlarm(format!("transported map: {e}")))?;
    if ker != expected {
        return Err(Error::ConsistencyAlarm(format!(
            "transported kernel {} differs from {}",
            a.format_subset(&ker),
            a.format_subset(&expected)
        )));
    }
    Ok(())
}

/// `φ(x) >= 0` for every element.
pub fn is_nonnegative(phi: &RationalAssignment) -> bool {
    phi.values.iter().all(|v| !v.is_negative())
}
