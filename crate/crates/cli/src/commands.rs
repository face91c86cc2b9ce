use std::path::{Path, PathBuf};

use num_traits::{One, Zero};
use pbe_core::algebra::{
    axioms_hold, check_axioms, classify, parse_algebra, serialize_algebra, AxiomSystem,
};
use pbe_core::assignment::{
    parse_assignment, parse_element_map, AssignmentKind, RationalAssignment,
};
use pbe_core::ds::{enumerate_ds, quotient};
use pbe_core::finder::{emit_models, enumerate_models, model_hash, ModelFlag, SearchConstraints};
use pbe_core::hom::{
    enumerate_homomorphisms, hom_kernel, hom_violation, image, is_bijective, is_monotone,
    preserves_unit,
};
use pbe_core::linalg::{format_rational, format_vector, to_rationals, LinearEquation, Rational};
use pbe_core::meta::verify_meta_theorems;
use pbe_core::operators::{
    enumerate_operators, operator_image, operator_kernel, operator_violation, OperatorKind,
};
use pbe_core::states::{
    bosbach_violation, measure_cone, measure_kernel, measure_morphism_violation, measure_to_state,
    measure_violation, sm_characterization_violation, state_kernel, state_measure_violation,
    state_morphism_violation, state_space, state_to_measure,
};
use pbe_core::valuations::{
    characterization_crosscheck, commutative_pv_violation, pv_violation, valuation_cone,
    valuation_kernel, valuation_violation, weak_pv_violation,
};
use pbe_core::witness::Violation;
use pbe_core::{ElementId, Exec, FiniteAlgebra};
use serde_json::{json, Value};

use crate::report::Report;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unreadable input; exit code 2.
    Input(String),
    /// A library error; exit code depends on the kind.
    Core(pbe_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use pbe_core::Error as E;
        match self {
            CliError::Input(_) => 2,
            CliError::Core(
                E::Parse(_) | E::InvalidAlgebra(_) | E::SizeMismatch(_) | E::SearchTooLarge { .. },
            ) => 2,
            CliError::Core(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<pbe_core::Error> for CliError {
    fn from(e: pbe_core::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: pbe_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| match e {
        pbe_core::Error::Parse(_) | pbe_core::Error::InvalidAlgebra(_) => {
            CliError::Input(format!("{}: {e}", path.display()))
        }
        other => CliError::Core(other),
    })
}

pub fn load_algebra(path: &Path) -> CliResult<FiniteAlgebra> {
    let text = read(path)?;
    in_file(path, parse_algebra(&text))
}

fn load_assignment(
    a: &FiniteAlgebra,
    path: &Path,
    kind: AssignmentKind,
) -> CliResult<RationalAssignment> {
    let s = in_file(path, parse_assignment(a, &read(path)?))?;
    if s.kind != kind {
        return Err(CliError::Input(format!(
            "{}: expected a {kind} file, found {}",
            path.display(),
            s.kind
        )));
    }
    Ok(s)
}

fn load_map(
    keyword: &str,
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    path: &Path,
) -> CliResult<Vec<ElementId>> {
    in_file(path, parse_element_map(keyword, a, b, &read(path)?))
}

fn describe(a: &FiniteAlgebra, v: &Option<Violation>) -> Value {
    match v {
        None => Value::Null,
        Some(v) => v.describe(a).into(),
    }
}

fn subsets(a: &FiniteAlgebra, sets: &[pbe_core::ElementSubset]) -> Value {
    sets.iter().map(|s| a.format_subset(s)).collect()
}

/// Images in carrier order, space separated: one row of an operator table.
fn row(target: &FiniteAlgebra, map: &[ElementId]) -> String {
    map.iter()
        .map(|&y| target.token(y))
        .collect::<Vec<_>>()
        .join(" ")
}

fn header(a: &FiniteAlgebra) -> String {
    a.carrier().join(" ")
}

fn values(v: &[Rational]) -> String {
    format_vector(v)
}

/// `v(x) = ...` with the pivot variable on the left.
fn equation(a: &FiniteAlgebra, var: &str, eq: &LinearEquation) -> String {
    let Some(pivot) = eq.coeffs.iter().position(|c| !c.is_zero()) else {
        return format!("0 = {}", format_rational(&eq.rhs));
    };
    let lead = &eq.coeffs[pivot];
    let mut terms: Vec<(Rational, Option<usize>)> = Vec::new();
    for (j, c) in eq.coeffs.iter().enumerate().skip(pivot + 1) {
        if !c.is_zero() {
            terms.push((-c / lead, Some(j)));
        }
    }
    if !eq.rhs.is_zero() || terms.is_empty() {
        terms.push((&eq.rhs / lead, None));
    }
    let mut rhs = String::new();
    for (i, (c, j)) in terms.iter().enumerate() {
        let negative = c < &Rational::zero();
        let mag = if negative { -c } else { c.clone() };
        if i == 0 {
            rhs.push_str(if negative { "-" } else { "" });
        } else {
            rhs.push_str(if negative { " - " } else { " + " });
        }
        match j {
            Some(j) => {
                if !mag.is_one() {
                    rhs.push_str(&format!("{} ", format_rational(&mag)));
                }
                rhs.push_str(&format!("{var}({})", a.carrier()[*j]));
            }
            None => rhs.push_str(&format_rational(&mag)),
        }
    }
    let lhs = if lead.is_one() {
        format!("{var}({})", a.carrier()[pivot])
    } else {
        format!("{} {var}({})", format_rational(lead), a.carrier()[pivot])
    };
    format!("{lhs} = {rhs}")
}

pub fn check(path: &Path, system: &str) -> CliResult<Report> {
    let a = load_algebra(path)?;
    let sys: AxiomSystem = system.parse().map_err(CliError::Input)?;
    let r = check_axioms(&a, sys);
    let violations: Vec<Value> = r
        .violations
        .iter()
        .map(|v| json!({"axiom": v.axiom, "witness": a.format_tuple(&v.witness), "failing_tuples": v.count}))
        .collect();
    let mut out = Report::new();
    out.field("algebra", a.name())
        .field("system", sys.tag())
        .field("holds", r.holds())
        .field("violations", violations)
        .fail_if(!r.holds());
    Ok(out)
}

pub fn classify_cmd(path: &Path) -> CliResult<Report> {
    let a = load_algebra(path)?;
    let c = classify(&a);
    let mut out = Report::new();
    out.field("algebra", a.name())
        .field("size", a.size())
        .field("pseudo-BE", c.pseudo_be)
        .field("pseudo-BCK", c.pseudo_bck)
        .field("BE", c.be)
        .field("proper", c.proper)
        .field("condition-A", c.condition_a)
        .field("distributive", c.distributive)
        .field("commutative", c.commutative)
        .field("P-system", c.p_system)
        .field("Q-system", c.q_system)
        .field("linear", c.linear)
        .field("bounded", c.bounded);
    if let Some(b) = a.bottom() {
        out.field("bottom", a.token(b));
    }
    if let (Some(good), Some(inv), Some(reg), Some(den)) =
        (c.good, c.involutive, &c.regular, &c.dense)
    {
        out.field("good", good)
            .field("involutive", inv)
            .field("regular", a.format_subset(reg))
            .field("dense", a.format_subset(den));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DsFilter {
    Normal,
    Fantastic,
    Involutive,
    Prime,
    Maximal,
}

pub fn ds(path: &Path, filter: Option<DsFilter>, exec: Exec) -> CliResult<Report> {
    let a = load_algebra(path)?;
    if filter == Some(DsFilter::Involutive) {
        a.require_bottom()?;
    }
    let fam = enumerate_ds(&a, exec)?;
    let mut out = Report::new();
    out.field("algebra", a.name());
    let Some(filter) = filter else {
        out.field("count", fam.entries.len())
            .field("deductive_systems", subsets(&a, &fam.sets()))
            .field("normal", subsets(&a, &fam.normal()))
            .field("fantastic", subsets(&a, &fam.fantastic()));
        if a.bottom().is_some() {
            out.field("involutive", subsets(&a, &fam.involutive()));
        }
        out.field("prime", subsets(&a, &fam.prime()))
            .field("maximal", subsets(&a, &fam.maximal()));
        return Ok(out);
    };
    let (name, sets) = match filter {
        DsFilter::Normal => ("normal", fam.normal()),
        DsFilter::Fantastic => ("fantastic", fam.fantastic()),
        DsFilter::Involutive => ("involutive", fam.involutive()),
        DsFilter::Prime => ("prime", fam.prime()),
        DsFilter::Maximal => ("maximal", fam.maximal()),
    };
    out.field("class", name)
        .field("count", sets.len())
        .field("deductive_systems", subsets(&a, &sets));
    Ok(out)
}

pub fn quotient_cmd(path: &Path, ds: &str) -> CliResult<Report> {
    let a = load_algebra(path)?;
    let h = a
        .parse_subset(ds)
        .map_err(|e| CliError::Input(format!("--ds: {e}")))?;
    let q = quotient(&a, &h)?;
    let b = &q.quotient;
    let projection: Vec<Value> = a
        .elements()
        .map(|x| format!("{} -> {}", a.token(x), b.token(q.projection[x.index()])).into())
        .collect();
    let joins: Vec<Value> = b
        .elements()
        .map(|x| {
            b.elements()
                .map(|y| b.token(b.vee1(x, y)))
                .collect::<Vec<_>>()
                .join(" ")
                .into()
        })
        .collect();
    let commutative_join = b
        .elements()
        .all(|x| b.elements().all(|y| b.vee1(x, y) == b.vee1(y, x)));
    let mut out = Report::new();
    out.field("algebra", a.name())
        .field("ds", a.format_subset(&h))
        .field("classes", subsets(&a, &q.classes))
        .field("projection", projection)
        .field("arrow_equals_squig", b.is_be_tables())
        .field("commutative_join", commutative_join)
        .field("join_table", joins)
        .field("quotient", serialize_algebra(b));
    Ok(out)
}

pub enum StatesMode {
    Vertices,
    Morphisms,
    Verify(PathBuf),
}

pub fn states(path: &Path, mode: StatesMode, morphism: bool) -> CliResult<Report> {
    let a = load_algebra(path)?;
    let mut out = Report::new();
    out.field("algebra", a.name());
    match mode {
        StatesMode::Vertices | StatesMode::Morphisms => {
            let space = state_space(&a)?;
            let Some(affine) = &space.affine else {
                out.field("dimension", Value::Null)
                    .field("vertices", json!([]));
                return Ok(out);
            };
            let vertices: Vec<&Vec<Rational>> = space
                .vertices
                .iter()
                .filter(|v| {
                    matches!(mode, StatesMode::Vertices)
                        || state_morphism_violation(&a, &state(v)).is_none()
                })
                .collect();
            let key = if matches!(mode, StatesMode::Vertices) {
                "vertices"
            } else {
                "state_morphism_vertices"
            };
            out.field("elements", header(&a))
                .field("dimension", affine.dimension())
                .field(
                    "equalities",
                    affine
                        .equalities
                        .iter()
                        .map(|e| equation(&a, "s", e))
                        .collect::<Vec<_>>(),
                )
                .field(key, vertices.iter().map(|v| values(v)).collect::<Vec<_>>());
        }
        StatesMode::Verify(file) => {
            let s = load_assignment(&a, &file, AssignmentKind::State)?;
            let bs = bosbach_violation(&a, &s);
            let sm = state_morphism_violation(&a, &s);
            out.field("state", s.name.as_str())
                .field("values", values(&s.values))
                .field("bosbach_state", bs.is_none())
                .field("bosbach_violation", describe(&a, &bs))
                .field("state_morphism", sm.is_none())
                .field("state_morphism_violation", describe(&a, &sm));
            if bs.is_none() {
                if axioms_hold(&a, AxiomSystem::ConditionA) {
                    let mj = sm_characterization_violation(&a, &s)?;
                    out.field("max_join", mj.is_none())
                        .field("max_join_violation", describe(&a, &mj));
                }
                out.field("kernel", a.format_subset(&state_kernel(&a, &s)?));
                if a.bottom().is_some() && axioms_hold(&a, AxiomSystem::ConditionA) {
                    out.field("measure", values(&state_to_measure(&a, &s)?.values));
                }
            }
            out.fail_if(bs.is_some() || (morphism && sm.is_some()));
        }
    }
    Ok(out)
}

fn state(v: &[Rational]) -> RationalAssignment {
    RationalAssignment::new(AssignmentKind::State, "vertex", v.to_vec())
}

pub fn measures(path: &Path, verify: Option<PathBuf>) -> CliResult<Report> {
    let a = load_algebra(path)?;
    let mut out = Report::new();
    out.field("algebra", a.name());
    let Some(file) = verify else {
        let (_, rays) = measure_cone(&a)?;
        let rows: Vec<Value> = rays
            .iter()
            .map(|r| {
                let m = RationalAssignment::new(AssignmentKind::Measure, "ray", to_rationals(r));
                let k = measure_kernel(&a, &m)?;
                Ok(json!({
                    "ray": values(&m.values),
                    "measure_morphism": measure_morphism_violation(&a, &m).is_none(),
                    "kernel": a.format_subset(&k),
                }))
            })
            .collect::<pbe_core::Result<_>>()?;
        out.field("elements", header(&a)).field("rays", rows);
        return Ok(out);
    };
    let m = load_assignment(&a, &file, AssignmentKind::Measure)?;
    let mv = measure_violation(&a, &m);
    let mm = measure_morphism_violation(&a, &m);
    out.field("measure", m.name.as_str())
        .field("values", values(&m.values))
        .field("is_measure", mv.is_none())
        .field("measure_violation", describe(&a, &mv))
        .field("measure_morphism", mm.is_none())
        .field("measure_morphism_violation", describe(&a, &mm));
    if mv.is_none() {
        out.field("kernel", a.format_subset(&measure_kernel(&a, &m)?));
    }
    if a.bottom().is_some() {
        let sv = state_measure_violation(&a, &m)?;
        out.field("state_measure", sv.is_none());
        if sv.is_none() && axioms_hold(&a, AxiomSystem::ConditionA) {
            out.field("state", values(&measure_to_state(&a, &m)?.values));
        }
    }
    out.fail_if(mv.is_some());
    Ok(out)
}

pub fn internal(
    path: &Path,
    kind: OperatorKind,
    verify: Option<PathBuf>,
    exec: Exec,
) -> CliResult<Report> {
    let a = load_algebra(path)?;
    let mut out = Report::new();
    out.field("algebra", a.name()).field("kind", kind.tag());
    let Some(file) = verify else {
        let ops = enumerate_operators(&a, kind, true, exec)?;
        out.field("count", ops.len())
            .field("x", header(&a))
            .field(
                "operators",
                ops.iter().map(|m| row(&a, m)).collect::<Vec<_>>(),
            )
            .field(
                "kernels",
                ops.iter()
                    .map(|m| a.format_subset(&operator_kernel(&a, m)))
                    .collect::<Vec<_>>(),
            );
        return Ok(out);
    };
    let mu = load_map("map", &a, &a, &file)?;
    let v = operator_violation(&a, &mu, kind);
    out.field("map", row(&a, &mu))
        .field("holds", v.is_none())
        .field("violation", describe(&a, &v));
    if v.is_none() {
        out.field("kernel", a.format_subset(&operator_kernel(&a, &mu)))
            .field("image", a.format_subset(&operator_image(&a, &mu)));
    }
    out.fail_if(v.is_some());
    Ok(out)
}

pub fn valuations(path: &Path, verify: Option<PathBuf>, commutative: bool) -> CliResult<Report> {
    let a = load_algebra(path)?;
    let mut out = Report::new();
    out.field("algebra", a.name());
    let Some(file) = verify else {
        let (_, rays) = valuation_cone(&a)?;
        let mut rows = Vec::new();
        for r in &rays {
            let phi = RationalAssignment::new(AssignmentKind::Valuation, "ray", to_rationals(r));
            let comm = commutative_pv_violation(&a, &phi)?.is_none();
            if commutative && !comm {
                continue;
            }
            rows.push(json!({
                "ray": values(&phi.values),
                "valuation": valuation_violation(&a, &phi).is_none(),
                "commutative": comm,
                "kernel": a.format_subset(&valuation_kernel(&a, &phi)?),
            }));
        }
        let key = if commutative {
            "commutative_rays"
        } else {
            "rays"
        };
        out.field("elements", header(&a)).field(key, rows);
        return Ok(out);
    };
    let phi = load_assignment(&a, &file, AssignmentKind::Valuation)?;
    let pv = pv_violation(&a, &phi);
    let weak = weak_pv_violation(&a, &phi);
    out.field("valuation", phi.name.as_str())
        .field("values", values(&phi.values))
        .field("pseudo_valuation", pv.is_none())
        .field("pseudo_valuation_violation", describe(&a, &pv))
        .field("weak", weak.is_none())
        .field("weak_violation", describe(&a, &weak));
    let mut comm_fails = false;
    if pv.is_none() {
        let val = valuation_violation(&a, &phi);
        let cpv = commutative_pv_violation(&a, &phi)?;
        comm_fails = cpv.is_some();
        out.field("is_valuation", val.is_none())
            .field("commutative", cpv.is_none())
            .field("commutative_violation", describe(&a, &cpv))
            .field("kernel", a.format_subset(&valuation_kernel(&a, &phi)?));
    }
    if phi.values[a.unit().index()].is_zero() {
        let c = characterization_crosscheck(&a, &phi)?;
        out.field(
            "characterization",
            json!({
                "pv4": describe(&a, &c.pv4),
                "pv5": describe(&a, &c.pv5),
                "cpv3": describe(&a, &c.cpv3),
                "cpv4": describe(&a, &c.cpv4),
                "consistent": c.consistent(),
            }),
        );
    }
    out.fail_if(pv.is_some() || (commutative && comm_fails));
    Ok(out)
}

pub fn hom(
    src: &Path,
    tgt: &Path,
    iso: bool,
    verify: Option<PathBuf>,
    exec: Exec,
) -> CliResult<Report> {
    let a = load_algebra(src)?;
    let b = load_algebra(tgt)?;
    let mut out = Report::new();
    out.field("source", a.name()).field("target", b.name());
    let Some(file) = verify else {
        let maps = enumerate_homomorphisms(&a, &b, iso, true, exec)?;
        let rows: Vec<Value> = maps
            .iter()
            .map(|f| {
                json!({
                    "map": row(&b, f),
                    "kernel": a.format_subset(&hom_kernel(&a, &b, f)),
                    "image": b.format_subset(&image(&b, f, &a.full_subset())),
                })
            })
            .collect();
        out.field("class", if iso { "isomorphisms" } else { "homomorphisms" })
            .field("count", maps.len())
            .field("x", header(&a))
            .field("maps", rows);
        return Ok(out);
    };
    let f = load_map("hom", &a, &b, &file)?;
    let v = hom_violation(&a, &b, &f);
    out.field("map", row(&b, &f))
        .field("homomorphism", v.is_none())
        .field("violation", describe(&a, &v))
        .field("preserves_unit", preserves_unit(&a, &b, &f))
        .field("monotone", is_monotone(&a, &b, &f))
        .field("bijective", is_bijective(&b, &f))
        .field("kernel", a.format_subset(&hom_kernel(&a, &b, &f)))
        .field("image", b.format_subset(&image(&b, &f, &a.full_subset())))
        .fail_if(v.is_some());
    Ok(out)
}

pub fn find(
    size: usize,
    required: &[String],
    limit: Option<usize>,
    audit: bool,
    emit: Option<PathBuf>,
    exec: Exec,
) -> CliResult<Report> {
    let required: Vec<ModelFlag> = required
        .iter()
        .map(|f| f.parse().map_err(CliError::Input))
        .collect::<CliResult<_>>()?;
    let c = SearchConstraints {
        size,
        required: required.clone(),
        limit,
        audit,
    };
    let models = enumerate_models(&c, exec)?;
    let flags = exec.map(models.iter().collect(), |m| {
        let report = classify(m);
        ModelFlag::ALL
            .iter()
            .filter(|f| f.holds(&report))
            .map(|f| f.tag())
            .collect::<Vec<_>>()
            .join(" ")
    });
    let rows: Vec<Value> = models
        .iter()
        .zip(flags)
        .map(|(m, f)| json!({"name": m.name(), "hash": model_hash(m), "properties": f}))
        .collect();
    let mut out = Report::new();
    out.field("size", size)
        .field(
            "required",
            required.iter().map(|f| f.tag()).collect::<Vec<_>>(),
        )
        .field("count", models.len())
        .field("models", rows);
    if let Some(dir) = emit {
        let paths = emit_models(&models, &dir)
            .map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
        out.field(
            "emitted",
            paths
                .iter()
                .map(|p| p.display().to_string())
                .collect::<Vec<_>>(),
        );
    }
    Ok(out)
}

pub fn meta(max_size: usize, allow_counterexamples: bool, exec: Exec) -> CliResult<Report> {
    let r = verify_meta_theorems(max_size, exec)?;
    let rows: Vec<Value> = r
        .theorems
        .iter()
        .map(|t| {
            let mut row = json!({
                "theorem": t.name,
                "scanned": t.scanned,
                "checked": t.checked,
                "counterexamples": t.counterexamples,
            });
            if let Some(c) = &t.first {
                row["detail"] = c.detail.clone().into();
                row["witness"] = c.algebra.clone().into();
            }
            row
        })
        .collect();
    let total = r.total_counterexamples();
    let mut out = Report::new();
    out.field("max_size", r.max_size)
        .field("model_counts", r.model_counts.clone())
        .field("raw_table_counts", r.raw_counts.clone())
        .field("theorems", rows)
        .field("total_counterexamples", total)
        .fail_if(total > 0 && !allow_counterexamples);
    Ok(out)
}
