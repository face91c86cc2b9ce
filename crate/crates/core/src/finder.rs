//! Exhaustive enumeration of small pseudo-BE algebras up to isomorphism.
//!
//! The unit is element 0. Row and column of the unit and the diagonal are forced, the
//! remaining cells of both tables are filled in row-major order with the `->` and `~>`
//! entries of each cell interleaved. (psBE5) is enforced the moment an `->` entry is
//! chosen and (psBE4) is checked on every triple whose four entries are known. An
//! algebra is emitted only when its table pair is lexicographically least among all
//! relabellings fixing the unit, so each isomorphism class appears exactly once.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use itertools::Itertools;
use sha2::{Digest, Sha256};

use crate::algebra::{
    axioms_hold, classify, serialize_algebra, AxiomSystem, ClassificationReport, FiniteAlgebra,
};
use crate::error::{Error, Result};
use crate::exec::Exec;

/// Largest size accepted by [`enumerate_models`].
pub const MAX_MODEL_SIZE: usize = 5;

/// Structural properties a model may be required to have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelFlag {
    PseudoBe,
    PseudoBck,
    Be,
    Proper,
    ConditionA,
    Distributive,
    Commutative,
    Bounded,
    Linear,
}

impl ModelFlag {
    pub const ALL: [ModelFlag; 9] = [
        ModelFlag::PseudoBe,
        ModelFlag::PseudoBck,
        ModelFlag::Be,
        ModelFlag::Proper,
        ModelFlag::ConditionA,
        ModelFlag::Distributive,
        ModelFlag::Commutative,
        ModelFlag::Bounded,
        ModelFlag::Linear,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ModelFlag::PseudoBe => "pseudo-BE",
            ModelFlag::PseudoBck => "pseudo-BCK",
            ModelFlag::Be => "BE",
            ModelFlag::Proper => "proper",
            ModelFlag::ConditionA => "condition-A",
            ModelFlag::Distributive => "distributive",
            ModelFlag::Commutative => "commutative",
            ModelFlag::Bounded => "bounded",
            ModelFlag::Linear => "linear",
        }
    }

    pub fn holds(self, c: &ClassificationReport) -> bool {
        match self {
            ModelFlag::PseudoBe => c.pseudo_be,
            ModelFlag::PseudoBck => c.pseudo_bck,
            ModelFlag::Be => c.be,
            ModelFlag::Proper => c.proper,
            ModelFlag::ConditionA => c.condition_a,
            ModelFlag::Distributive => c.distributive,
            ModelFlag::Commutative => c.commutative,
            ModelFlag::Bounded => c.bounded,
            ModelFlag::Linear => c.linear,
        }
    }
}

impl fmt::Display for ModelFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ModelFlag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModelFlag::ALL
            .into_iter()
            .find(|f| f.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown model flag `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConstraints {
    pub size: usize,
    pub required: Vec<ModelFlag>,
    pub limit: Option<usize>,
    /// Disable (psBE4)/(psBE5) pruning and test complete tables instead.
    pub audit: bool,
}

impl SearchConstraints {
    pub fn new(size: usize) -> Self {
        Self {
            size,
            required: Vec::new(),
            limit: None,
            audit: false,
        }
    }
}

/// Element tokens used for generated models: `1, a, b, ...`.
pub fn model_tokens(n: usize) -> Vec<String> {
    std::iter::once("1".to_string())
        .chain((0..n.saturating_sub(1)).map(|i| char::from(b'a' + i as u8).to_string()))
        .collect()
}

const UNSET: u8 = u8::MAX;

#[derive(Clone)]
struct Search {
    n: usize,
    arrow: Vec<u8>,
    squig: Vec<u8>,
    cells: Vec<usize>,
    audit: bool,
}

impl Search {
    fn new(n: usize, audit: bool) -> Self {
        let mut arrow = vec![UNSET; n * n];
        let mut squig = vec![UNSET; n * n];
        let mut cells = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let i = x * n + y;
                let forced = if x == 0 {
                    Some(y as u8)
                } else if y == 0 || x == y {
                    Some(0)
                } else {
                    None
                };
                match forced {
                    Some(v) => {
                        arrow[i] = v;
                        squig[i] = v;
                    }
                    None => cells.push(i),
                }
            }
        }
        Self {
            n,
            arrow,
            squig,
            cells,
            audit,
        }
    }

    fn steps(&self) -> usize {
        2 * self.cells.len()
    }

    /// Values to try at `step`.
    fn candidates(&self, step: usize) -> Vec<u8> {
        let n = self.n as u8;
        if self.audit || step.is_multiple_of(2) {
            return (0..n).collect();
        }
        if self.arrow[self.cells[step / 2]] == 0 {
            vec![0]
        } else {
            (1..n).collect()
        }
    }

    fn set(&mut self, step: usize, v: u8) {
        let cell = self.cells[step / 2];
        if step.is_multiple_of(2) {
            self.arrow[cell] = v;
        } else {
            self.squig[cell] = v;
        }
    }

    fn clear(&mut self, step: usize) {
        self.set(step, UNSET);
    }

    /// (psBE4) on every triple whose entries are all known.
    fn exchange_consistent(&self) -> bool {
        let n = self.n;
        let (ar, sq) = (&self.arrow, &self.squig);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let yz = sq[y * n + z];
                    let xz = ar[x * n + z];
                    if yz == UNSET || xz == UNSET {
                        continue;
                    }
                    let l = ar[x * n + yz as usize];
                    let r = sq[y * n + xz as usize];
                    if l != UNSET && r != UNSET && l != r {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The table pair is least among relabellings that fix the unit.
    fn is_canonical(&self) -> bool {
        let n = self.n;
        for perm in (1..n).permutations(n - 1) {
            let mut p = vec![0u8; n];
            for (i, &v) in perm.iter().enumerate() {
                p[i + 1] = v as u8;
            }
            // Table of the relabelled algebra at (p[x], p[y]) is p[t(x, y)].
            let mut inv = vec![0usize; n];
            for (x, &px) in p.iter().enumerate() {
                inv[px as usize] = x;
            }
            let relabelled = |t: &[u8], i: usize| {
                let (u, v) = (inv[i / n], inv[i % n]);
                p[t[u * n + v] as usize]
            };
            let mut ord = std::cmp::Ordering::Equal;
            for (table, i) in [&self.arrow, &self.squig]
                .into_iter()
                .flat_map(|t| (0..n * n).map(move |i| (t, i)))
            {
                ord = relabelled(table, i).cmp(&table[i]);
                if ord != std::cmp::Ordering::Equal {
                    break;
                }
            }
            if ord == std::cmp::Ordering::Less {
                return false;
            }
        }
        true
    }

    fn leaf(&self) -> Option<(Vec<u8>, Vec<u8>)> {
        if self.audit {
            let a = self.to_algebra("audit").expect("valid tables");
            if !axioms_hold(&a, AxiomSystem::PseudoBe) {
                return None;
            }
        }
        self.is_canonical()
            .then(|| (self.arrow.clone(), self.squig.clone()))
    }

    fn dfs(&mut self, step: usize, out: &mut Vec<(Vec<u8>, Vec<u8>)>) {
        if step == self.steps() {
            out.extend(self.leaf());
            return;
        }
        for v in self.candidates(step) {
            self.set(step, v);
            if self.audit || self.exchange_consistent() {
                self.dfs(step + 1, out);
            }
        }
        self.clear(step);
    }

    /// Partial searches at `depth`, in search order.
    fn frontier(&mut self, step: usize, depth: usize, out: &mut Vec<(Search, usize)>) {
        if step == depth.min(self.steps()) {
            out.push((self.clone(), step));
            return;
        }
        for v in self.candidates(step) {
            self.set(step, v);
            if self.audit || self.exchange_consistent() {
                self.frontier(step + 1, depth, out);
            }
        }
        self.clear(step);
    }

    fn to_algebra(&self, name: &str) -> Result<FiniteAlgebra> {
        build(name, self.n, &self.arrow, &self.squig)
    }
}

fn build(name: &str, n: usize, arrow: &[u8], squig: &[u8]) -> Result<FiniteAlgebra> {
    let to_ids = |t: &[u8]| {
        t.iter()
            .map(|&v| crate::algebra::ElementId::new(v as usize))
            .collect()
    };
    let least = (0..n).find(|&x| (0..n).all(|y| arrow[x * n + y] == 0));
    FiniteAlgebra::from_flat(
        name,
        model_tokens(n),
        to_ids(arrow),
        to_ids(squig),
        0,
        least,
    )
}

/// Frontier depth used to split the search between workers.
const SPLIT_DEPTH: usize = 4;

/// All pseudo-BE algebras of the given size up to isomorphism, filtered by the
/// required flags, in increasing order of their `(->, ~>)` tables.
///
/// Models are named `n<size>_<index>` by their position before filtering; a declared
/// bottom is the least-index least element, when one exists.
pub fn enumerate_models(c: &SearchConstraints, exec: Exec) -> Result<Vec<FiniteAlgebra>> {
    let n = c.size;
    if n == 0 {
        return Err(Error::Precondition("model size must be at least 1".into()));
    }
    if n > MAX_MODEL_SIZE {
        return Err(Error::SearchTooLarge {
            size: n as u128,
            limit: MAX_MODEL_SIZE as u128,
        });
    }
    let mut root = Search::new(n, c.audit);
    let mut frontier = Vec::new();
    root.frontier(0, SPLIT_DEPTH, &mut frontier);
    let mut tables = exec.flat_map(frontier, |(mut s, step)| {
        let mut out = Vec::new();
        s.dfs(step, &mut out);
        out
    });
    tables.sort();
    let width = tables.len().to_string().len().max(3);
    let models: Vec<FiniteAlgebra> = tables
        .iter()
        .enumerate()
        .map(|(i, (ar, sq))| build(&format!("n{n}_{i:0width$}"), n, ar, sq))
        .collect::<Result<_>>()?;
    let mut kept: Vec<FiniteAlgebra> = if c.required.is_empty() {
        models
    } else {
        let verdicts = exec.map(models, |m| {
            let report = classify(&m);
            c.required.iter().all(|f| f.holds(&report)).then_some(m)
        });
        verdicts.into_iter().flatten().collect()
    };
    if let Some(limit) = c.limit {
        kept.truncate(limit);
    }
    Ok(kept)
}

/// Hex SHA-256 of the serialized algebra, truncated to 16 digits.
pub fn model_hash(a: &FiniteAlgebra) -> String {
    let digest = Sha256::digest(serialize_algebra(a).as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Writes each model to `dir/<hash>.alg`, returning the paths in model order.
pub fn emit_models(models: &[FiniteAlgebra], dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    models
        .iter()
        .map(|m| {
            let path = dir.join(format!("{}.alg", model_hash(m)));
            std::fs::write(&path, serialize_algebra(m))?;
            Ok(path)
        })
        .collect()
}
