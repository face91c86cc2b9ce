//! Exhaustive confirmation of the structural theorems over every small model.
//!
//! Theorems about arbitrary table pairs (axiom-system implications and equivalences)
//! are additionally swept over raw tables up to size 3. At size 3 the raw sweep fixes
//! those unit cells that every algebra on either side of the statement must have.

use num_traits::Zero;

use crate::algebra::{
    axioms_hold, classify, serialize_algebra, AxiomSystem, ClassificationReport, ElementId,
    FiniteAlgebra,
};
use crate::assignment::{AssignmentKind, RationalAssignment};
use crate::ds::{enumerate_ds, is_deductive_system, is_fantastic, is_normal, DsFamily};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::finder::{enumerate_models, model_tokens, SearchConstraints};
use crate::linalg::Rational;
use crate::operators::{enumerate_operators, is_smo, operator_kernel, OperatorKind, UnaryOperator};
use crate::states::{measure_cone, state_space};
use crate::subset::ElementSubset;
use crate::valuations::{
    is_commutative_pv, is_pseudo_valuation, is_weak_pseudo_valuation, valuation_cone,
};

pub const MAX_META_SIZE: usize = 4;
/// Largest size of the raw table sweep.
pub const RAW_SWEEP_SIZE: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    /// Serialized algebra, loadable by the parser.
    pub algebra: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremOutcome {
    pub name: &'static str,
    /// Algebras examined, models and raw tables alike.
    pub scanned: usize,
    /// Algebras on which the hypothesis held.
    pub checked: usize,
    pub counterexamples: usize,
    pub first: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaTheoremReport {
    pub max_size: usize,
    /// Number of models at each size `1..=max_size`.
    pub model_counts: Vec<usize>,
    /// Number of raw table pairs swept at each size `1..=min(max_size, 3)`.
    pub raw_counts: Vec<usize>,
    pub theorems: Vec<TheoremOutcome>,
}

impl MetaTheoremReport {
    pub fn total_counterexamples(&self) -> usize {
        self.theorems.iter().map(|t| t.counterexamples).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Verdict {
    Vacuous,
    Holds,
    Fails(String),
}

fn implication(hyp: bool, concl: impl FnOnce() -> Result<Option<String>>) -> Result<Verdict> {
    if !hyp {
        return Ok(Verdict::Vacuous);
    }
    Ok(match concl()? {
        None => Verdict::Holds,
        Some(detail) => Verdict::Fails(detail),
    })
}

fn equivalence(left: (&str, bool), right: (&str, bool)) -> Verdict {
    match (left.1, right.1) {
        (false, false) => Verdict::Vacuous,
        (true, true) => Verdict::Holds,
        (l, r) => Verdict::Fails(format!("{} is {l} but {} is {r}", left.0, right.0)),
    }
}

/// Everything the model theorems look at, computed once per model.
struct Facts {
    a: FiniteAlgebra,
    class: ClassificationReport,
    ds: DsFamily,
}

impl Facts {
    fn first_failing(&self, sets: &[ElementSubset], what: &str) -> Option<String> {
        sets.first()
            .map(|d| format!("{} is not {what}", self.a.format_subset(d)))
    }

    fn operators(&self, kind: OperatorKind) -> Result<Vec<UnaryOperator>> {
        enumerate_operators(&self.a, kind, false, Exec::Sequential)
    }
}

fn as_assignment(kind: AssignmentKind, values: Vec<Rational>) -> RationalAssignment {
    RationalAssignment::new(kind, "sweep", values)
}

fn ray_assignments(
    kind: AssignmentKind,
    rays: &[Vec<num_bigint::BigInt>],
) -> Vec<RationalAssignment> {
    rays.iter()
        .map(|r| {
            as_assignment(
                kind,
                r.iter().cloned().map(Rational::from_integer).collect(),
            )
        })
        .collect()
}

fn kernel(a: &FiniteAlgebra, values: &[Rational], at: impl Fn(&Rational) -> bool) -> ElementSubset {
    a.subset_of(a.elements().filter(|&x| at(&values[x.index()])))
}

fn render(a: &FiniteAlgebra, values: &[Rational]) -> String {
    let parts: Vec<String> = values.iter().map(crate::linalg::format_rational).collect();
    format!("{} ({})", a.name(), parts.join(","))
}

type RawCheck = fn(&FiniteAlgebra) -> Verdict;
type ModelCheck = fn(&Facts) -> Result<Verdict>;

/// Unit cells fixed by the raw sweep at size 3. The unit row is always fixed.
#[derive(Debug, Clone, Copy)]
enum Forcing {
    /// `1 -> x = 1 ~> x = x` and `x -> 1 = 1`.
    ArrowColumn,
    /// `1 -> x = 1 ~> x = x` and `x -> 1 = x ~> 1 = 1`.
    BothColumns,
    /// `1 -> x = 1 ~> x = x`.
    RowOnly,
}

struct Theorem {
    name: &'static str,
    raw: Option<(Forcing, RawCheck)>,
    model: ModelCheck,
}

fn commutative_pbe(a: &FiniteAlgebra) -> bool {
    axioms_hold(a, AxiomSystem::PseudoBe) && axioms_hold(a, AxiomSystem::Commutative)
}

fn raw_bck_is_be(a: &FiniteAlgebra) -> Verdict {
    if !axioms_hold(a, AxiomSystem::PseudoBck) {
        return Verdict::Vacuous;
    }
    if axioms_hold(a, AxiomSystem::PseudoBe) {
        Verdict::Holds
    } else {
        Verdict::Fails("pseudo-BCK but not pseudo-BE".into())
    }
}

fn raw_p_system(a: &FiniteAlgebra) -> Verdict {
    equivalence(
        ("P-system", axioms_hold(a, AxiomSystem::PSystem)),
        ("commutative pseudo-BE", commutative_pbe(a)),
    )
}

fn raw_q_system(a: &FiniteAlgebra) -> Verdict {
    equivalence(
        ("Q-system", axioms_hold(a, AxiomSystem::QSystem)),
        ("commutative pseudo-BE", commutative_pbe(a)),
    )
}

const THEOREMS: &[Theorem] = &[
    Theorem {
        name: "pseudo-BCK algebras are pseudo-BE",
        raw: Some((Forcing::ArrowColumn, raw_bck_is_be)),
        model: |f| {
            implication(f.class.pseudo_bck, || {
                Ok((!f.class.pseudo_be).then(|| "not pseudo-BE".into()))
            })
        },
    },
    Theorem {
        name: "commutative pseudo-BE algebras are pseudo-BCK",
        raw: None,
        model: |f| {
            implication(f.class.commutative, || {
                Ok((!f.class.pseudo_bck).then(|| "not pseudo-BCK".into()))
            })
        },
    },
    Theorem {
        name: "finite commutative pseudo-BE algebras are BE",
        raw: None,
        model: |f| {
            implication(f.class.commutative, || {
                Ok((!f.class.be).then(|| "-> differs from ~>".into()))
            })
        },
    },
    Theorem {
        name: "P-system iff commutative pseudo-BE",
        raw: Some((Forcing::BothColumns, raw_p_system)),
        model: |f| {
            Ok(equivalence(
                ("P-system", f.class.p_system),
                ("commutative pseudo-BE", f.class.commutative),
            ))
        },
    },
    Theorem {
        name: "Q-system iff commutative pseudo-BE",
        raw: Some((Forcing::RowOnly, raw_q_system)),
        model: |f| {
            Ok(equivalence(
                ("Q-system", f.class.q_system),
                ("commutative pseudo-BE", f.class.commutative),
            ))
        },
    },
    Theorem {
        name: "distributive: every deductive system is normal",
        raw: None,
        model: |f| {
            implication(f.class.distributive, || {
                let bad = f.ds.filter(|e| !e.normal);
                Ok(f.first_failing(&bad, "normal"))
            })
        },
    },
    Theorem {
        name: "commutative: every deductive system is fantastic",
        raw: None,
        model: |f| {
            implication(f.class.commutative, || {
                let bad = f.ds.filter(|e| !e.fantastic);
                Ok(f.first_failing(&bad, "fantastic"))
            })
        },
    },
    Theorem {
        name: "condition (A): systems above a fantastic system are fantastic",
        raw: None,
        model: |f| {
            implication(f.class.condition_a, || {
                for d in f.ds.entries.iter().filter(|e| e.fantastic) {
                    for e in f.ds.entries.iter().filter(|e| !e.fantastic) {
                        if d.set.is_subset(&e.set) {
                            return Ok(Some(format!(
                                "{} is fantastic, {} is not",
                                f.a.format_subset(&d.set),
                                f.a.format_subset(&e.set)
                            )));
                        }
                    }
                }
                Ok(None)
            })
        },
    },
    Theorem {
        name: "condition (A): {1} fantastic iff every system fantastic",
        raw: None,
        model: |f| {
            implication(f.class.condition_a, || {
                let unit = f.a.subset_of([f.a.unit()]);
                let unit_fantastic = is_fantastic(&f.a, &unit)?;
                let all = f.ds.entries.iter().all(|e| e.fantastic);
                Ok((unit_fantastic != all).then(|| {
                    format!("{{1}} fantastic is {unit_fantastic}, all fantastic is {all}")
                }))
            })
        },
    },
    Theorem {
        name: "bounded: fantastic systems are involutive",
        raw: None,
        model: |f| {
            implication(f.class.bounded, || {
                let bad = f.ds.filter(|e| e.fantastic && e.involutive != Some(true));
                Ok(f.first_failing(&bad, "involutive"))
            })
        },
    },
    Theorem {
        name: "kernels of Bosbach states are fantastic",
        raw: None,
        model: |f| {
            let space = state_space(&f.a)?;
            implication(!space.vertices.is_empty(), || {
                for v in &space.vertices {
                    let k = kernel(&f.a, v, |x| x == &Rational::from_integer(1.into()));
                    if !is_deductive_system(&f.a, &k) || !is_fantastic(&f.a, &k)? {
                        return Ok(Some(format!(
                            "kernel {} of state {}",
                            f.a.format_subset(&k),
                            render(&f.a, v)
                        )));
                    }
                }
                Ok(None)
            })
        },
    },
    Theorem {
        name: "kernels of measures are normal fantastic systems",
        raw: None,
        model: |f| {
            let (_, rays) = measure_cone(&f.a)?;
            implication(!rays.is_empty(), || {
                for m in ray_assignments(AssignmentKind::Measure, &rays) {
                    let k = kernel(&f.a, &m.values, Rational::is_zero);
                    if !is_deductive_system(&f.a, &k)
                        || !is_normal(&f.a, &k)?
                        || !is_fantastic(&f.a, &k)?
                    {
                        return Ok(Some(format!(
                            "kernel {} of measure {}",
                            f.a.format_subset(&k),
                            render(&f.a, &m.values)
                        )));
                    }
                }
                Ok(None)
            })
        },
    },
    Theorem {
        name: "condition (A): kernels of type II internal states are fantastic",
        raw: None,
        model: |f| {
            implication(f.class.condition_a, || {
                for mu in f.operators(OperatorKind::TypeII)? {
                    let k = operator_kernel(&f.a, &mu);
                    if !is_deductive_system(&f.a, &k) || !is_fantastic(&f.a, &k)? {
                        return Ok(Some(format!("kernel of {}", f.a.format_tuple(&mu))));
                    }
                }
                Ok(None)
            })
        },
    },
    Theorem {
        name: "pseudo-valuations are weak pseudo-valuations",
        raw: None,
        model: |f| {
            let (_, rays) = valuation_cone(&f.a)?;
            implication(!rays.is_empty(), || {
                Ok(ray_assignments(AssignmentKind::Valuation, &rays)
                    .iter()
                    .find(|phi| !is_weak_pseudo_valuation(&f.a, phi))
                    .map(|phi| format!("ray {}", render(&f.a, &phi.values))))
            })
        },
    },
    Theorem {
        name: "commutative: every pseudo-valuation is commutative",
        raw: None,
        model: |f| {
            implication(f.class.commutative, || {
                let (_, rays) = valuation_cone(&f.a)?;
                let rays = ray_assignments(AssignmentKind::Valuation, &rays);
                for phi in cone_samples(&rays) {
                    if !is_pseudo_valuation(&f.a, &phi) {
                        return Err(Error::ConsistencyAlarm(format!(
                            "cone point {} is not a pseudo-valuation",
                            render(&f.a, &phi.values)
                        )));
                    }
                    if !is_commutative_pv(&f.a, &phi)? {
                        return Ok(Some(format!(
                            "pseudo-valuation {}",
                            render(&f.a, &phi.values)
                        )));
                    }
                }
                Ok(None)
            })
        },
    },
    Theorem {
        name: "kernels of commutative pseudo-valuations are fantastic",
        raw: None,
        model: |f| {
            let (_, rays) = valuation_cone(&f.a)?;
            let mut seen = false;
            for phi in cone_samples(&ray_assignments(AssignmentKind::Valuation, &rays)) {
                if !is_commutative_pv(&f.a, &phi)? {
                    continue;
                }
                seen = true;
                let k = kernel(&f.a, &phi.values, Rational::is_zero);
                if !is_fantastic(&f.a, &k)? {
                    return Ok(Verdict::Fails(format!(
                        "kernel of {}",
                        render(&f.a, &phi.values)
                    )));
                }
            }
            Ok(if seen {
                Verdict::Holds
            } else {
                Verdict::Vacuous
            })
        },
    },
    Theorem {
        name: "commutative: type I and type II internal states coincide",
        raw: None,
        model: |f| {
            implication(f.class.commutative, || {
                let (one, two) = (
                    f.operators(OperatorKind::TypeI)?,
                    f.operators(OperatorKind::TypeII)?,
                );
                Ok((one != two)
                    .then(|| format!("{} type I versus {} type II", one.len(), two.len())))
            })
        },
    },
    Theorem {
        name: "linear: type II internal states are state-morphism operators",
        raw: None,
        model: |f| implication(f.class.linear, || not_smo(f, OperatorKind::TypeII)),
    },
    Theorem {
        name: "linear commutative: type I internal states are state-morphism operators",
        raw: None,
        model: |f| {
            implication(f.class.linear && f.class.commutative, || {
                not_smo(f, OperatorKind::TypeI)
            })
        },
    },
];

fn not_smo(f: &Facts, kind: OperatorKind) -> Result<Option<String>> {
    Ok(f.operators(kind)?
        .into_iter()
        .find(|mu| !is_smo(&f.a, mu))
        .map(|mu| format!("{} is not a state-morphism operator", f.a.format_tuple(&mu))))
}

/// Rays, pairwise sums, and a skewed combination of each pair.
fn cone_samples(rays: &[RationalAssignment]) -> Vec<RationalAssignment> {
    let mut out: Vec<RationalAssignment> = rays.to_vec();
    for (i, p) in rays.iter().enumerate() {
        for q in &rays[i + 1..] {
            for w in [1, 3] {
                let w = Rational::from_integer(w.into());
                let values = p
                    .values
                    .iter()
                    .zip(&q.values)
                    .map(|(x, y)| x + &w * y)
                    .collect();
                out.push(as_assignment(AssignmentKind::Valuation, values));
            }
        }
    }
    out
}

fn check_model(a: FiniteAlgebra) -> Result<Vec<Verdict>> {
    let facts = Facts {
        class: classify(&a),
        ds: enumerate_ds(&a, Exec::Sequential)?,
        a,
    };
    THEOREMS.iter().map(|t| (t.model)(&facts)).collect()
}

/// Cells forced at `(x, y)` of the arrow (`false`) or squig (`true`) table.
fn forced(n: usize, forcing: Option<Forcing>, squig: bool, x: usize, y: usize) -> Option<u8> {
    let forcing = forcing?;
    if x == 0 {
        return Some(y as u8);
    }
    let column = match forcing {
        Forcing::RowOnly => false,
        Forcing::ArrowColumn => !squig,
        Forcing::BothColumns => true,
    };
    (column && y == 0 && n > 0).then_some(0)
}

fn raw_sweep(
    n: usize,
    forcing: Option<Forcing>,
    check: RawCheck,
    exec: Exec,
) -> Result<Vec<(usize, Verdict)>> {
    let mut base = vec![0u8; 2 * n * n];
    let mut free = Vec::new();
    for t in 0..2 {
        for x in 0..n {
            for y in 0..n {
                let i = t * n * n + x * n + y;
                match forced(n, forcing, t == 1, x, y) {
                    Some(v) => base[i] = v,
                    None => free.push(i),
                }
            }
        }
    }
    let total = (n as u64).pow(free.len() as u32);
    let chunks: Vec<u64> = (0..n.max(1) as u64).collect();
    let per_chunk = total / chunks.len() as u64;
    let tokens = model_tokens(n);
    let results = exec.map(chunks, |c| -> Result<Vec<(usize, Verdict)>> {
        let mut out = Vec::new();
        let mut tables = base.clone();
        for code in c * per_chunk..(c + 1) * per_chunk {
            let mut rest = code;
            for &i in free.iter().rev() {
                tables[i] = (rest % n as u64) as u8;
                rest /= n as u64;
            }
            let ids: Vec<ElementId> = tables.iter().map(|&v| ElementId::new(v as usize)).collect();
            let (ar, sq) = ids.split_at(n * n);
            let a = FiniteAlgebra::from_flat(
                format!("raw{n}_{code}"),
                tokens.clone(),
                ar.to_vec(),
                sq.to_vec(),
                0,
                None,
            )?;
            out.push((code as usize, check(&a)));
        }
        Ok(out)
    });
    let mut all = Vec::new();
    for r in results {
        all.extend(r?);
    }
    Ok(all)
}

fn raw_algebra(n: usize, forcing: Option<Forcing>, code: usize) -> String {
    // Rebuilds the table pair for a reported counterexample.
    let mut tables = vec![0u8; 2 * n * n];
    let mut free = Vec::new();
    for t in 0..2 {
        for x in 0..n {
            for y in 0..n {
                let i = t * n * n + x * n + y;
                match forced(n, forcing, t == 1, x, y) {
                    Some(v) => tables[i] = v,
                    None => free.push(i),
                }
            }
        }
    }
    let mut rest = code as u64;
    for &i in free.iter().rev() {
        tables[i] = (rest % n as u64) as u8;
        rest /= n as u64;
    }
    let ids: Vec<ElementId> = tables.iter().map(|&v| ElementId::new(v as usize)).collect();
    let (ar, sq) = ids.split_at(n * n);
    let a = FiniteAlgebra::from_flat(
        format!("raw{n}_{code}"),
        model_tokens(n),
        ar.to_vec(),
        sq.to_vec(),
        0,
        None,
    )
    .expect("tables in range");
    serialize_algebra(&a)
}

fn tally(outcome: &mut TheoremOutcome, verdict: Verdict, witness: impl FnOnce() -> String) {
    outcome.scanned += 1;
    match verdict {
        Verdict::Vacuous => {}
        Verdict::Holds => outcome.checked += 1,
        Verdict::Fails(detail) => {
            outcome.checked += 1;
            outcome.counterexamples += 1;
            if outcome.first.is_none() {
                outcome.first = Some(Counterexample {
                    algebra: witness(),
                    detail,
                });
            }
        }
    }
}

/// Runs every theorem on every model of size `1..=n_max` and on the raw table sweeps.
pub fn verify_meta_theorems(n_max: usize, exec: Exec) -> Result<MetaTheoremReport> {
    if n_max > MAX_META_SIZE {
        return Err(Error::SearchTooLarge {
            size: n_max as u128,
            limit: MAX_META_SIZE as u128,
        });
    }
    let mut outcomes: Vec<TheoremOutcome> = THEOREMS
        .iter()
        .map(|t| TheoremOutcome {
            name: t.name,
            scanned: 0,
            checked: 0,
            counterexamples: 0,
            first: None,
        })
        .collect();

    let mut raw_counts = Vec::new();
    for n in 1..=n_max.min(RAW_SWEEP_SIZE) {
        let mut count = 0;
        for (t, outcome) in THEOREMS.iter().zip(outcomes.iter_mut()) {
            let Some((forcing, check)) = t.raw else {
                continue;
            };
            let forcing = (n == RAW_SWEEP_SIZE).then_some(forcing);
            let verdicts = raw_sweep(n, forcing, check, exec)?;
            count = count.max(verdicts.len());
            for (code, v) in verdicts {
                tally(outcome, v, || raw_algebra(n, forcing, code));
            }
        }
        raw_counts.push(count);
    }

    let mut model_counts = Vec::new();
    for n in 1..=n_max {
        let models = enumerate_models(&SearchConstraints::new(n), exec)?;
        model_counts.push(models.len());
        let texts: Vec<String> = models.iter().map(serialize_algebra).collect();
        let verdicts = exec.map(models, check_model);
        for (text, vs) in texts.iter().zip(verdicts) {
            for (outcome, v) in outcomes.iter_mut().zip(vs?) {
                tally(outcome, v, || text.clone());
            }
        }
    }

    Ok(MetaTheoremReport {
        max_size: n_max,
        model_counts,
        raw_counts,
        theorems: outcomes,
    })
}
