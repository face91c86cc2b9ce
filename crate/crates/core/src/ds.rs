//! Deductive systems: enumeration, classification and quotients.

use crate::algebra::{check_axioms, AxiomSystem, ElementId, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::subset::ElementSubset;

/// Largest carrier accepted by [`enumerate_ds`].
pub const MAX_DS_ENUMERATION: usize = 24;

/// Closure of a subset under the two forms of modus ponens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Closure {
    pub contains_unit: bool,
    /// (ds2): `x ∈ D` and `x -> y ∈ D` imply `y ∈ D`.
    pub arrow_closed: bool,
    /// (ds2'): the same with `~>`.
    pub squig_closed: bool,
}

fn mp_closed(
    a: &FiniteAlgebra,
    d: &ElementSubset,
    op: impl Fn(ElementId, ElementId) -> ElementId,
) -> bool {
    d.iter()
        .all(|x| a.elements().all(|y| d.contains(y) || !d.contains(op(x, y))))
}

pub fn closure(a: &FiniteAlgebra, d: &ElementSubset) -> Closure {
    Closure {
        contains_unit: d.contains(a.unit()),
        arrow_closed: mp_closed(a, d, |x, y| a.arrow(x, y)),
        squig_closed: mp_closed(a, d, |x, y| a.squig(x, y)),
    }
}

/// `1 ∈ D` and `D` closed under `->` modus ponens.
pub fn is_deductive_system(a: &FiniteAlgebra, d: &ElementSubset) -> bool {
    d.contains(a.unit()) && mp_closed(a, d, |x, y| a.arrow(x, y))
}

fn require_ds(a: &FiniteAlgebra, d: &ElementSubset) -> Result<()> {
    if is_deductive_system(a, d) {
        Ok(())
    } else {
        Err(Error::NotADeductiveSystem(a.format_subset(d)))
    }
}

/// `x -> y ∈ D` iff `x ~> y ∈ D`, for all pairs.
pub fn is_normal(a: &FiniteAlgebra, d: &ElementSubset) -> Result<bool> {
    require_ds(a, d)?;
    Ok(a.elements().all(|x| {
        a.elements()
            .all(|y| d.contains(a.arrow(x, y)) == d.contains(a.squig(x, y)))
    }))
}

/// First pair `(x, y)` breaking (cds1) or (cds2), tagged by the failing condition.
pub fn fantastic_witness(
    a: &FiniteAlgebra,
    d: &ElementSubset,
) -> Result<Option<(&'static str, ElementId, ElementId)>> {
    require_ds(a, d)?;
    for x in a.elements() {
        for y in a.elements() {
            if d.contains(a.arrow(y, x)) && !d.contains(a.arrow(a.vee1(x, y), x)) {
                return Ok(Some(("cds1", x, y)));
            }
        }
    }
    for x in a.elements() {
        for y in a.elements() {
            if d.contains(a.squig(y, x)) && !d.contains(a.squig(a.vee2(x, y), x)) {
                return Ok(Some(("cds2", x, y)));
            }
        }
    }
    Ok(None)
}

pub fn is_fantastic(a: &FiniteAlgebra, d: &ElementSubset) -> Result<bool> {
    Ok(fantastic_witness(a, d)?.is_none())
}

/// `x^{-~} -> x ∈ D` and `x^{~-} ~> x ∈ D` for every `x`.
pub fn is_involutive_ds(a: &FiniteAlgebra, d: &ElementSubset) -> Result<bool> {
    a.require_bottom()?;
    require_ds(a, d)?;
    Ok(a.elements().all(|x| {
        let (l, r) = a.double_negations(x).expect("bounded");
        d.contains(a.arrow(l, x)) && d.contains(a.squig(r, x))
    }))
}

fn require_proper(a: &FiniteAlgebra, d: &ElementSubset) -> Result<()> {
    require_ds(a, d)?;
    if d.is_full() {
        return Err(Error::NotProper(a.format_subset(d)));
    }
    Ok(())
}

/// A pair `D1, D2` of the family with `D1 ∩ D2 ⊆ P` but neither inside `P`.
pub fn prime_witness(
    a: &FiniteAlgebra,
    family: &[ElementSubset],
    p: &ElementSubset,
) -> Result<Option<(ElementSubset, ElementSubset)>> {
    require_proper(a, p)?;
    for (i, d1) in family.iter().enumerate() {
        for d2 in &family[i..] {
            if d1.intersection(d2).is_subset(p) && !d1.is_subset(p) && !d2.is_subset(p) {
                return Ok(Some((*d1, *d2)));
            }
        }
    }
    Ok(None)
}

/// Prime with respect to the deductive systems listed in `family`.
pub fn is_prime(a: &FiniteAlgebra, family: &[ElementSubset], p: &ElementSubset) -> Result<bool> {
    Ok(prime_witness(a, family, p)?.is_none())
}

/// Proper and not strictly below another proper member of `family`.
pub fn is_maximal(a: &FiniteAlgebra, family: &[ElementSubset], d: &ElementSubset) -> Result<bool> {
    require_proper(a, d)?;
    Ok(!family
        .iter()
        .any(|e| !e.is_full() && e != d && d.is_subset(e)))
}

/// One deductive system with its class memberships.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DsEntry {
    pub set: ElementSubset,
    pub normal: bool,
    pub fantastic: bool,
    /// `None` when the algebra is unbounded.
    pub involutive: Option<bool>,
    /// `None` for the improper system `A`.
    pub prime: Option<bool>,
    pub maximal: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DsFamily {
    /// Sorted by cardinality, then by member indices.
    pub entries: Vec<DsEntry>,
}

impl DsFamily {
    pub fn sets(&self) -> Vec<ElementSubset> {
        self.entries.iter().map(|e| e.set).collect()
    }

    pub fn filter(&self, pred: impl Fn(&DsEntry) -> bool) -> Vec<ElementSubset> {
        self.entries
            .iter()
            .filter(|e| pred(e))
            .map(|e| e.set)
            .collect()
    }

    pub fn normal(&self) -> Vec<ElementSubset> {
        self.filter(|e| e.normal)
    }

    pub fn fantastic(&self) -> Vec<ElementSubset> {
        self.filter(|e| e.fantastic)
    }

    pub fn involutive(&self) -> Vec<ElementSubset> {
        self.filter(|e| e.involutive == Some(true))
    }

    pub fn prime(&self) -> Vec<ElementSubset> {
        self.filter(|e| e.prime == Some(true))
    }

    pub fn maximal(&self) -> Vec<ElementSubset> {
        self.filter(|e| e.maximal == Some(true))
    }
}

/// All deductive systems, without classification.
///
/// On pseudo-BE algebras (ds2) and (ds2') must agree on every subset containing `1`;
/// a disagreement is reported as [`Error::ClosureMismatch`].
pub fn deductive_systems(a: &FiniteAlgebra, exec: Exec) -> Result<Vec<ElementSubset>> {
    let n = a.size();
    if n > MAX_DS_ENUMERATION {
        return Err(Error::SearchTooLarge {
            size: 1u128 << (n - 1),
            limit: 1u128 << (MAX_DS_ENUMERATION - 1),
        });
    }
    let alarm = check_axioms(a, AxiomSystem::PseudoBe).holds();
    let unit_bit = 1u64 << a.unit().index();
    let others: Vec<usize> = (0..n).filter(|&i| i != a.unit().index()).collect();
    let free = others.len();
    // Split the 2^free masks into chunks on the high bits.
    let split = free.min(6);
    let low = free - split;
    let chunks: Vec<u64> = (0..1u64 << split).collect();
    let per_chunk = exec.map(chunks, |hi| {
        let mut found = Vec::new();
        for lo in 0..1u64 << low {
            let code = hi << low | lo;
            let mut bits = unit_bit;
            for (k, &i) in others.iter().enumerate() {
                if code >> k & 1 == 1 {
                    bits |= 1 << i;
                }
            }
            let d = ElementSubset::from_bits(n, bits);
            let c = closure(a, &d);
            if alarm && c.arrow_closed != c.squig_closed {
                return Err(Error::ClosureMismatch(a.format_subset(&d)));
            }
            if c.arrow_closed {
                found.push(d);
            }
        }
        Ok(found)
    });
    let mut all = Vec::new();
    for batch in per_chunk {
        all.extend(batch?);
    }
    all.sort();
    Ok(all)
}

/// All deductive systems, each tagged with its classes.
pub fn enumerate_ds(a: &FiniteAlgebra, exec: Exec) -> Result<DsFamily> {
    let sets = deductive_systems(a, exec)?;
    let bounded = a.bottom().is_some();
    let entries = sets
        .iter()
        .map(|d| {
            let proper = !d.is_full();
            Ok(DsEntry {
                set: *d,
                normal: is_normal(a, d)?,
                fantastic: is_fantastic(a, d)?,
                involutive: if bounded {
                    Some(is_involutive_ds(a, d)?)
                } else {
                    None
                },
                prime: if proper {
                    Some(is_prime(a, &sets, d)?)
                } else {
                    None
                },
                maximal: if proper {
                    Some(is_maximal(a, &sets, d)?)
                } else {
                    None
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DsFamily { entries })
}

/// The quotient `A/H` together with its partition and projection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientResult {
    /// Classes ordered by their least member.
    pub classes: Vec<ElementSubset>,
    pub quotient: FiniteAlgebra,
    /// `projection[x]` is the class of `x` as an element of `quotient`.
    pub projection: Vec<ElementId>,
}

/// Quotient by `Θ_H = {(x, y) : x -> y ∈ H, y -> x ∈ H}` on a distributive algebra.
pub fn quotient(a: &FiniteAlgebra, h: &ElementSubset) -> Result<QuotientResult> {
    if !check_axioms(a, AxiomSystem::Distributive).holds() {
        return Err(Error::NotDistributive(a.name().to_string()));
    }
    require_ds(a, h)?;
    let label = a.format_subset(h);
    let related =
        |x: ElementId, y: ElementId| h.contains(a.arrow(x, y)) && h.contains(a.arrow(y, x));

    let n = a.size();
    let mut class_of: Vec<Option<usize>> = vec![None; n];
    let mut classes: Vec<ElementSubset> = Vec::new();
    for x in a.elements() {
        if class_of[x.index()].is_some() {
            continue;
        }
        let members: Vec<ElementId> = a.elements().filter(|&y| related(x, y)).collect();
        let class = a.subset_of(members.iter().copied());
        for &y in &members {
            if let Some(k) = class_of[y.index()] {
                if classes[k] != class {
                    return Err(Error::CongruenceFailure(
                        label,
                        format!("relation is not transitive at {}", a.token(y)),
                    ));
                }
            }
            class_of[y.index()] = Some(classes.len());
        }
        // Every member must see exactly the same class.
        for &y in &members {
            if a.elements().any(|z| related(y, z) != class.contains(z)) {
                return Err(Error::CongruenceFailure(
                    label,
                    format!("relation is not transitive at {}", a.token(y)),
                ));
            }
        }
        classes.push(class);
    }
    let projection: Vec<ElementId> = class_of
        .iter()
        .map(|k| ElementId::new(k.expect("every element classified")))
        .collect();
    let proj = |x: ElementId| projection[x.index()];

    let m = classes.len();
    let mut arrow = vec![None; m * m];
    let mut squig = vec![None; m * m];
    for x in a.elements() {
        for y in a.elements() {
            let cell = proj(x).index() * m + proj(y).index();
            for (table, value, op) in [
                (&mut arrow, proj(a.arrow(x, y)), "->"),
                (&mut squig, proj(a.squig(x, y)), "~>"),
            ] {
                match table[cell] {
                    None => table[cell] = Some(value),
                    Some(v) if v == value => {}
                    Some(_) => {
                        return Err(Error::CongruenceFailure(
                            label,
                            format!("{} is not compatible with {op}", a.format_tuple(&[x, y])),
                        ))
                    }
                }
            }
        }
    }
    let arrow: Vec<ElementId> = arrow.into_iter().map(|c| c.expect("filled")).collect();
    let squig: Vec<ElementId> = squig.into_iter().map(|c| c.expect("filled")).collect();
    if arrow != squig {
        return Err(Error::ConsistencyAlarm(format!(
            "quotient by {label} has distinct implications"
        )));
    }
    if classes[proj(a.unit()).index()] != *h {
        return Err(Error::ConsistencyAlarm(format!(
            "class of 1 differs from {label}"
        )));
    }
    let carrier: Vec<String> = classes
        .iter()
        .map(|c| c.iter().map(|e| a.token(e)).collect::<Vec<_>>().join("|"))
        .collect();
    let quotient = FiniteAlgebra::from_flat(
        format!("{}/{}", a.name(), label),
        carrier,
        arrow,
        squig,
        proj(a.unit()).index(),
        a.declared_bottom().map(|b| proj(b).index()),
    )?;
    Ok(QuotientResult {
        classes,
        quotient,
        projection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_algebra;

    fn load(name: &str) -> FiniteAlgebra {
        let path = format!(
            "{}/../../fixtures/algebras/{name}.alg",
            env!("CARGO_MANIFEST_DIR")
        );
        parse_algebra(&std::fs::read_to_string(path).unwrap()).unwrap()
    }

    fn fmt(a: &FiniteAlgebra, sets: &[ElementSubset]) -> Vec<String> {
        sets.iter().map(|s| a.format_subset(s)).collect()
    }

    #[test]
    fn four_element_chain_of_systems() {
        let a = load("pbck4");
        let fam = enumerate_ds(&a, Exec::Sequential).unwrap();
        assert_eq!(fmt(&a, &fam.sets()), ["{1}", "{1,b}", "{1,a,b,c}"]);
        assert_eq!(fmt(&a, &fam.maximal()), ["{1,b}"]);
        assert!(!is_deductive_system(&a, &a.parse_subset("{1,a}").unwrap()));
        let full = a.full_subset();
        assert!(matches!(
            is_prime(&a, &fam.sets(), &full),
            Err(Error::NotProper(_))
        ));
    }

    #[test]
    fn unit_alone_is_prime_in_a_chain_of_systems() {
        // In a chain every proper member meets the primality condition.
        let a = load("pbck4");
        let fam = enumerate_ds(&a, Exec::Sequential).unwrap();
        assert_eq!(fmt(&a, &fam.prime()), ["{1}", "{1,b}"]);
    }

    #[test]
    fn six_element_fantastic_systems() {
        let a = load("pbe6");
        let fam = enumerate_ds(&a, Exec::Parallel).unwrap();
        assert_eq!(
            fmt(&a, &fam.sets()),
            [
                "{1}",
                "{1,e}",
                "{1,a,e}",
                "{1,b,c,d}",
                "{1,b,c,d,e}",
                "{1,a,b,c,d,e}"
            ]
        );
        assert_eq!(
            fmt(&a, &fam.fantastic()),
            ["{1,e}", "{1,a,e}", "{1,b,c,d,e}", "{1,a,b,c,d,e}"]
        );
        assert!(fam.entries[0].normal);
    }

    #[test]
    fn five_element_systems_all_normal_and_fantastic() {
        let a = load("pbea5");
        let fam = enumerate_ds(&a, Exec::Parallel).unwrap();
        let expected = ["{1}", "{1,a,d}", "{1,b,c}", "{1,a,b,c,d}"];
        assert_eq!(fmt(&a, &fam.sets()), expected);
        assert_eq!(fmt(&a, &fam.normal()), expected);
        assert_eq!(fmt(&a, &fam.fantastic()), expected);
    }

    #[test]
    fn quotient_of_five_element_algebra() {
        let a = load("pbea5");
        let h = a.parse_subset("{1,a,d}").unwrap();
        let q = quotient(&a, &h).unwrap();
        assert_eq!(fmt(&a, &q.classes), ["{1,a,d}", "{b,c}"]);
        assert_eq!(q.quotient.carrier(), ["1|a|d", "b|c"]);
        assert!(q.quotient.is_be_tables());
        let k: Vec<ElementId> = a
            .elements()
            .filter(|&x| q.projection[x.index()] == q.quotient.unit())
            .collect();
        assert_eq!(a.subset_of(k), h);

        let whole = quotient(&a, &a.full_subset()).unwrap();
        assert_eq!(whole.quotient.size(), 1);
    }

    #[test]
    fn quotient_refuses_non_distributive() {
        let a = FiniteAlgebra::new(
            "nd",
            vec!["1".into(), "a".into(), "b".into()],
            vec![vec![0, 1, 2], vec![0, 0, 0], vec![0, 1, 0]],
            vec![vec![0, 1, 2], vec![0, 0, 0], vec![0, 1, 0]],
            0,
            None,
        )
        .unwrap();
        if !check_axioms(&a, AxiomSystem::Distributive).holds() {
            assert!(matches!(
                quotient(&a, &a.subset_of([a.unit()])),
                Err(Error::NotDistributive(_))
            ));
        }
    }

    #[test]
    fn involutive_systems_on_bounded_algebra() {
        let a = load("luk3");
        let fam = enumerate_ds(&a, Exec::Sequential).unwrap();
        assert_eq!(fam.involutive(), fam.sets());
        let u = load("pbea5");
        assert!(matches!(
            is_involutive_ds(&u, &u.full_subset()),
            Err(Error::Unbounded(_))
        ));
    }
}
