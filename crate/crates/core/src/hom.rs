//! Homomorphisms between finite algebras.

use crate::algebra::{ElementId, FiniteAlgebra};
use crate::ds::is_deductive_system;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::subset::ElementSubset;
use crate::witness::Violation;

/// Largest `|B|^|A|` accepted by [`enumerate_homomorphisms`].
pub const HOM_SEARCH_LIMIT: u128 = 10_000_000;

/// First pair `(x, y)` of the source with `f(x -> y) != f(x) -> f(y)` or the `~>` twin.
pub fn hom_violation(a: &FiniteAlgebra, b: &FiniteAlgebra, f: &[ElementId]) -> Option<Violation> {
    assert_eq!(
        f.len(),
        a.size(),
        "map length must match the source carrier"
    );
    let m = |x: ElementId| f[x.index()];
    for x in a.elements() {
        for y in a.elements() {
            if m(a.arrow(x, y)) != b.arrow(m(x), m(y)) {
                return Some(Violation::new("hom->", vec![x, y]));
            }
            if m(a.squig(x, y)) != b.squig(m(x), m(y)) {
                return Some(Violation::new("hom~>", vec![x, y]));
            }
        }
    }
    None
}

pub fn is_homomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra, f: &[ElementId]) -> bool {
    hom_violation(a, b, f).is_none()
}

pub fn preserves_unit(a: &FiniteAlgebra, b: &FiniteAlgebra, f: &[ElementId]) -> bool {
    f[a.unit().index()] == b.unit()
}

/// `x <= y` implies `f(x) <= f(y)`.
pub fn is_monotone(a: &FiniteAlgebra, b: &FiniteAlgebra, f: &[ElementId]) -> bool {
    a.elements().all(|x| {
        a.elements()
            .all(|y| !a.le(x, y) || b.le(f[x.index()], f[y.index()]))
    })
}

pub fn is_bijective(b: &FiniteAlgebra, f: &[ElementId]) -> bool {
    f.len() == b.size() && ElementSubset::from_members(b.size(), f.iter().copied()).is_full()
}

pub fn is_surjective(b: &FiniteAlgebra, f: &[ElementId]) -> bool {
    ElementSubset::from_members(b.size(), f.iter().copied()).is_full()
}

fn require_hom(a: &FiniteAlgebra, b: &FiniteAlgebra, f: &[ElementId]) -> Result<()> {
    match hom_violation(a, b, f) {
        None => Ok(()),
        Some(v) => Err(Error::Precondition(format!(
            "not a homomorphism: {}",
            v.describe(a)
        ))),
    }
}

/// `Ker(f) = f^{-1}(1)`
pub fn hom_kernel(a: &FiniteAlgebra, b: &FiniteAlgebra, f: &[ElementId]) -> ElementSubset {
    a.subset_of(a.elements().filter(|&x| f[x.index()] == b.unit()))
}

pub fn preimage(a: &FiniteAlgebra, f: &[ElementId], e: &ElementSubset) -> ElementSubset {
    a.subset_of(a.elements().filter(|&x| e.contains(f[x.index()])))
}

pub fn image(b: &FiniteAlgebra, f: &[ElementId], d: &ElementSubset) -> ElementSubset {
    b.subset_of(d.iter().map(|x| f[x.index()]))
}

/// `f^{-1}(E)` for a deductive system `E` of the target.
pub fn preimage_ds(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    f: &[ElementId],
    e: &ElementSubset,
) -> Result<ElementSubset> {
    require_hom(a, b, f)?;
    if !is_deductive_system(b, e) {
        return Err(Error::NotADeductiveSystem(b.format_subset(e)));
    }
    let d = preimage(a, f, e);
    if !is_deductive_system(a, &d) {
        return Err(Error::ConsistencyAlarm(format!(
            "preimage {} is not a deductive system",
            a.format_subset(&d)
        )));
    }
    Ok(d)
}

/// `f(D)` for a surjective `f` and a deductive system `D ⊇ Ker(f)`.
pub fn image_ds(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    f: &[ElementId],
    d: &ElementSubset,
) -> Result<ElementSubset> {
    require_hom(a, b, f)?;
    if !is_surjective(b, f) {
        return Err(Error::Precondition("map is not surjective".into()));
    }
    if !is_deductive_system(a, d) {
        return Err(Error::NotADeductiveSystem(a.format_subset(d)));
    }
    if !hom_kernel(a, b, f).is_subset(d) {
        return Err(Error::Precondition(format!(
            "kernel is not contained in {}",
            a.format_subset(d)
        )));
    }
    let e = image(b, f, d);
    if !is_deductive_system(b, &e) {
        return Err(Error::ConsistencyAlarm(format!(
            "image {} is not a deductive system",
            b.format_subset(&e)
        )));
    }
    Ok(e)
}

/// Partial map with an undo trail, propagating `f(x op y) = f(x) op f(y)`.
struct Propagator<'a> {
    a: &'a FiniteAlgebra,
    b: &'a FiniteAlgebra,
    map: Vec<Option<ElementId>>,
    assigned: Vec<ElementId>,
}

impl<'a> Propagator<'a> {
    fn new(a: &'a FiniteAlgebra, b: &'a FiniteAlgebra) -> Self {
        Self {
            a,
            b,
            map: vec![None; a.size()],
            assigned: Vec::new(),
        }
    }

    /// Assigns `x -> v` and everything it forces; on conflict returns false and the
    /// caller must [`Propagator::undo`] to its checkpoint.
    fn assign(&mut self, x: ElementId, v: ElementId) -> bool {
        let mut queue = vec![(x, v)];
        while let Some((x, v)) = queue.pop() {
            match self.map[x.index()] {
                Some(w) if w == v => continue,
                Some(_) => return false,
                None => {}
            }
            self.map[x.index()] = Some(v);
            self.assigned.push(x);
            for i in 0..self.assigned.len() {
                let y = self.assigned[i];
                let fy = self.map[y.index()].expect("assigned");
                for (src, val) in [
                    (self.a.arrow(x, y), self.b.arrow(v, fy)),
                    (self.a.arrow(y, x), self.b.arrow(fy, v)),
                    (self.a.squig(x, y), self.b.squig(v, fy)),
                    (self.a.squig(y, x), self.b.squig(fy, v)),
                ] {
                    match self.map[src.index()] {
                        Some(w) if w != val => return false,
                        Some(_) => {}
                        None => queue.push((src, val)),
                    }
                }
            }
        }
        true
    }

    fn checkpoint(&self) -> usize {
        self.assigned.len()
    }

    fn undo(&mut self, mark: usize) {
        for x in self.assigned.drain(mark..) {
            self.map[x.index()] = None;
        }
    }

    fn next_free(&self) -> Option<ElementId> {
        self.map
            .iter()
            .position(Option::is_none)
            .map(ElementId::new)
    }

    fn search(&mut self, out: &mut Vec<Vec<ElementId>>) {
        let Some(x) = self.next_free() else {
            out.push(self.map.iter().map(|v| v.expect("complete")).collect());
            return;
        };
        for v in self.b.elements() {
            let mark = self.checkpoint();
            if self.assign(x, v) {
                self.search(out);
            }
            self.undo(mark);
        }
    }
}

fn search_size(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<()> {
    let total = (b.size() as u128)
        .checked_pow(a.size() as u32)
        .unwrap_or(u128::MAX);
    if total > HOM_SEARCH_LIMIT {
        return Err(Error::SearchTooLarge {
            size: total,
            limit: HOM_SEARCH_LIMIT,
        });
    }
    Ok(())
}

/// All homomorphisms `A -> B` (isomorphisms only with `iso_only`), in lexicographic order.
///
/// With `prune` the search fixes `f(1) = 1` (sound whenever `x -> x = 1` holds in `B`)
/// and propagates the homomorphism equations; without it every map is tested.
pub fn enumerate_homomorphisms(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    iso_only: bool,
    prune: bool,
    exec: Exec,
) -> Result<Vec<Vec<ElementId>>> {
    search_size(a, b)?;
    if iso_only && a.size() != b.size() {
        return Ok(Vec::new());
    }
    let mut maps = if prune {
        pruned_search(a, b, exec)
    } else {
        brute_force(a, b, exec)
    };
    if iso_only {
        maps.retain(|f| is_bijective(b, f) && is_homomorphism(b, a, &inverse(f)));
    }
    maps.sort();
    Ok(maps)
}

fn inverse(f: &[ElementId]) -> Vec<ElementId> {
    let mut g = vec![ElementId::new(0); f.len()];
    for (x, y) in f.iter().enumerate() {
        g[y.index()] = ElementId::new(x);
    }
    g
}

fn pruned_search(a: &FiniteAlgebra, b: &FiniteAlgebra, exec: Exec) -> Vec<Vec<ElementId>> {
    let mut root = Propagator::new(a, b);
    let reflexive = b.elements().all(|y| b.arrow(y, y) == b.unit());
    if reflexive && !root.assign(a.unit(), b.unit()) {
        return Vec::new();
    }
    let Some(first) = root.next_free() else {
        return vec![root.map.iter().map(|v| v.expect("complete")).collect()];
    };
    let base = root.map.clone();
    let values: Vec<ElementId> = b.elements().collect();
    exec.flat_map(values, |v| {
        let mut p = Propagator::new(a, b);
        for (i, w) in base.iter().enumerate() {
            if let Some(w) = w {
                p.map[i] = Some(*w);
                p.assigned.push(ElementId::new(i));
            }
        }
        let mut out = Vec::new();
        if p.assign(first, v) {
            p.search(&mut out);
        }
        out
    })
}

fn brute_force(a: &FiniteAlgebra, b: &FiniteAlgebra, exec: Exec) -> Vec<Vec<ElementId>> {
    let (n, m) = (a.size(), b.size() as u64);
    let firsts: Vec<usize> = (0..b.size()).collect();
    exec.flat_map(firsts, |first| {
        let mut out = Vec::new();
        let mut f = vec![ElementId::new(first); n];
        for code in 0..m.pow(n as u32 - 1) {
            let mut c = code;
            for slot in (1..n).rev() {
                f[slot] = ElementId::new((c % m) as usize);
                c /= m;
            }
            if is_homomorphism(a, b, &f) {
                out.push(f.clone());
            }
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_algebra;
    use crate::ds::quotient;

    fn load(name: &str) -> FiniteAlgebra {
        let path = format!(
            "{}/../../fixtures/algebras/{name}.alg",
            env!("CARGO_MANIFEST_DIR")
        );
        parse_algebra(&std::fs::read_to_string(path).unwrap()).unwrap()
    }

    #[test]
    fn identity_and_constant_maps() {
        let a = load("pbck4");
        let id: Vec<ElementId> = a.elements().collect();
        assert!(is_homomorphism(&a, &a, &id));
        let one = vec![a.unit(); a.size()];
        assert!(is_homomorphism(&a, &a, &one));
        assert!(preserves_unit(&a, &a, &one) && is_monotone(&a, &a, &one));
    }

    #[test]
    fn canonical_projection() {
        let a = load("pbea5");
        let h = a.parse_subset("{1,a,d}").unwrap();
        let q = quotient(&a, &h).unwrap();
        let f = &q.projection;
        assert!(is_homomorphism(&a, &q.quotient, f));
        assert_eq!(hom_kernel(&a, &q.quotient, f), h);
        let unit_class = q.quotient.subset_of([q.quotient.unit()]);
        assert_eq!(preimage_ds(&a, &q.quotient, f, &unit_class).unwrap(), h);
        assert_eq!(image_ds(&a, &q.quotient, f, &h).unwrap(), unit_class);
        assert!(image_ds(&a, &q.quotient, f, &a.subset_of([a.unit()])).is_err());
    }

    #[test]
    fn pruned_search_matches_brute_force() {
        for (x, y) in [
            ("pbck4", "pbck4"),
            ("luk3", "pbck4"),
            ("pbea5", "luk3"),
            ("pbea5", "pbea5"),
        ] {
            let (a, b) = (load(x), load(y));
            let fast = enumerate_homomorphisms(&a, &b, false, true, Exec::Parallel).unwrap();
            let slow = enumerate_homomorphisms(&a, &b, false, false, Exec::Parallel).unwrap();
            assert_eq!(fast, slow, "{x} -> {y}");
        }
    }

    #[test]
    fn isomorphisms() {
        let a = load("pbck4");
        let isos = enumerate_homomorphisms(&a, &a, true, true, Exec::Sequential).unwrap();
        assert!(isos.contains(&a.elements().collect()));
        let b = load("pbea5");
        assert!(
            enumerate_homomorphisms(&a, &b, true, true, Exec::Sequential)
                .unwrap()
                .is_empty()
        );
    }
}
