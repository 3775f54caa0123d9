//! Isomorph-free census of small digraphs and the extremal sizes of
//! minimally generalized (k, l)-connected digraphs.
//!
//! Minimality is decided through census lookups: every `D - e` of a strong
//! class is either non-strong (value 0) or another class of the census.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, signatures_sorted, CanonicalCode};
use crate::connectivity::connectivity_value;
use crate::constructions::{build_deletion_family, CyclePartition, DeletionFamily};
use crate::digraph::{Arc, Digraph};
use crate::error::{Error, Result};
use crate::format::to_text;
use crate::packing::Mode;

/// Largest order accepted by the census.
pub const CENSUS_MAX_ORDER: usize = 5;

/// Pre-canonicalization filter.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CensusFilter {
    pub strong_only: bool,
    /// Both minimum out-degree and minimum in-degree must reach this.
    pub min_degree: usize,
}

fn check_census_order(n: usize) -> Result<()> {
    if n == 0 || n > CENSUS_MAX_ORDER {
        return Err(Error::OrderTooLarge {
            n,
            max: CENSUS_MAX_ORDER,
        });
    }
    Ok(())
}

/// One digraph per isomorphism class passing `filter`, in canonical labeling,
/// ordered by canonical code.
pub fn enumerate_digraphs(n: usize, filter: CensusFilter) -> Result<Vec<Digraph>> {
    Ok(enumerate_codes(n, filter)?
        .into_iter()
        .map(CanonicalCode::to_digraph)
        .collect())
}

fn enumerate_codes(n: usize, filter: CensusFilter) -> Result<Vec<CanonicalCode>> {
    check_census_order(n)?;
    let pairs: Vec<Arc> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    let mut d = Digraph::empty(n)?;
    let mut seen = HashSet::new();
    // Gray-code walk: step i toggles the arc at the lowest set bit of i
    for i in 0u64..(1u64 << pairs.len()) {
        if i > 0 {
            let (u, v) = pairs[i.trailing_zeros() as usize];
            if d.has_arc(u, v) {
                d.remove(u, v);
            } else {
                d.insert(u, v);
            }
        }
        if filter.min_degree > 0
            && (d.min_out_degree() < filter.min_degree || d.min_in_degree() < filter.min_degree)
        {
            continue;
        }
        if !signatures_sorted(&d) || (filter.strong_only && !d.is_strong()) {
            continue;
        }
        seen.insert(canonical_form(&d)?);
    }
    let mut codes: Vec<_> = seen.into_iter().collect();
    codes.sort_unstable();
    Ok(codes)
}

/// A strong isomorphism class with its single-arc deletions resolved.
#[derive(Clone, Debug)]
pub struct CensusClass {
    pub code: CanonicalCode,
    pub digraph: Digraph,
    /// Class index of `D - e` per arc, `None` when `D - e` is not strong.
    pub deletions: Vec<Option<usize>>,
}

/// κ_k / λ_k of every strong class of one order.
#[derive(Clone, Debug)]
pub struct Census {
    n: usize,
    classes: Vec<CensusClass>,
    index: HashMap<CanonicalCode, usize>,
    /// `values[(mode, k)]` per class; absent when the cell was skipped.
    values: HashMap<(Mode, usize), Vec<usize>>,
    skipped: BTreeSet<(Mode, usize)>,
}

impl Census {
    /// Builds the census with every `(mode, k)` value table; a table whose
    /// computation reaches `budget` is abandoned and reported as skipped.
    pub fn build(n: usize, budget: Option<Duration>) -> Result<Census> {
        let mut census = Census::classes_only(n)?;
        for mode in Mode::BOTH {
            for k in 2..=n {
                census.fill(mode, k, budget)?;
            }
        }
        Ok(census)
    }

    /// Census restricted to the listed `(mode, k)` tables, without budget.
    pub fn build_tables(n: usize, cells: &[(Mode, usize)]) -> Result<Census> {
        let mut census = Census::classes_only(n)?;
        for &(mode, k) in cells {
            if k < 2 || k > n {
                return Err(Error::OutOfRange(format!("k = {k} outside 2..={n}")));
            }
            census.fill(mode, k, None)?;
        }
        Ok(census)
    }

    fn classes_only(n: usize) -> Result<Census> {
        let codes = enumerate_codes(
            n,
            CensusFilter {
                strong_only: true,
                min_degree: 1,
            },
        )?;
        let index: HashMap<_, _> = codes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut classes = Vec::with_capacity(codes.len());
        for &code in &codes {
            let digraph = code.to_digraph();
            let mut deletions = Vec::with_capacity(digraph.arc_count());
            for e in digraph.arcs() {
                let de = digraph.without_arc(e)?;
                deletions.push(if de.is_strong() {
                    Some(index[&canonical_form(&de)?])
                } else {
                    None
                });
            }
            classes.push(CensusClass {
                code,
                digraph,
                deletions,
            });
        }
        Ok(Census {
            n,
            classes,
            index,
            values: HashMap::new(),
            skipped: BTreeSet::new(),
        })
    }

    fn fill(&mut self, mode: Mode, k: usize, budget: Option<Duration>) -> Result<()> {
        let start = Instant::now();
        let mut vals = Vec::with_capacity(self.classes.len());
        for c in &self.classes {
            if budget.is_some_and(|b| start.elapsed() >= b) {
                self.skipped.insert((mode, k));
                return Ok(());
            }
            vals.push(connectivity_value(&c.digraph, k, mode)?);
        }
        self.values.insert((mode, k), vals);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[CensusClass] {
        &self.classes
    }

    pub fn class_index(&self, code: &CanonicalCode) -> Option<usize> {
        self.index.get(code).copied()
    }

    /// `(mode, k)` cells abandoned for exceeding the time budget.
    pub fn skipped(&self) -> impl Iterator<Item = (Mode, usize)> + '_ {
        self.skipped.iter().copied()
    }

    fn check_cell(&self, k: usize, l: usize) -> Result<()> {
        if k < 2 || k > self.n || l == 0 || l >= self.n {
            return Err(Error::OutOfRange(format!(
                "cell k = {k}, l = {l} outside 2 <= k <= {n}, 1 <= l <= {}",
                self.n - 1,
                n = self.n
            )));
        }
        Ok(())
    }

    /// Value of class `i`; `None` when the cell was skipped.
    pub fn value(&self, i: usize, mode: Mode, k: usize) -> Option<usize> {
        self.values.get(&(mode, k)).map(|v| v[i])
    }

    /// Indices of the minimally generalized (k, l)-connected classes.
    pub fn minimal_classes(&self, k: usize, l: usize, mode: Mode) -> Result<Option<Vec<usize>>> {
        self.check_cell(k, l)?;
        let Some(vals) = self.values.get(&(mode, k)) else {
            return Ok(None);
        };
        Ok(Some(
            (0..self.classes.len())
                .filter(|&i| {
                    vals[i] == l
                        && self.classes[i]
                            .deletions
                            .iter()
                            .all(|e| e.map_or(0, |j| vals[j]) + 1 == l)
                })
                .collect(),
        ))
    }

    /// Minimum size over all strong classes with value exactly `l`.
    pub fn min_size_with_value(&self, k: usize, l: usize, mode: Mode) -> Result<Option<usize>> {
        self.check_cell(k, l)?;
        Ok(self.values.get(&(mode, k)).and_then(|vals| {
            (0..self.classes.len())
                .filter(|&i| vals[i] == l)
                .map(|i| self.classes[i].digraph.arc_count())
                .min()
        }))
    }

    /// Extremal sizes and witness catalogs; [`CellOutcome::Skipped`] when
    /// the cell's values were not computed.
    pub fn record(&self, k: usize, l: usize, mode: Mode) -> Result<CellOutcome> {
        let Some(members) = self.minimal_classes(k, l, mode)? else {
            return Ok(CellOutcome::Skipped {
                n: self.n,
                k,
                l,
                mode,
            });
        };
        let size = |i: &usize| self.classes[*i].digraph.arc_count();
        let min_size = members.iter().map(size).min();
        let max_size = members.iter().map(size).max();
        let pick = |s: Option<usize>| -> Vec<CanonicalCode> {
            members
                .iter()
                .filter(|i| Some(size(i)) == s)
                .map(|&i| self.classes[i].code)
                .collect()
        };
        Ok(CellOutcome::Done(ExtremalRecord {
            n: self.n,
            k,
            l,
            mode,
            min_size,
            max_size,
            min_witnesses: pick(min_size),
            max_witnesses: pick(max_size),
            members: members.len(),
        }))
    }
}

/// Extremal data of one `(n, k, l, mode)` cell: `f`/`F` for
/// [`Mode::Vertex`], `g`/`G` for [`Mode::Arc`]. Sizes are `None` when no
/// digraph of order `n` is minimal for the cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalRecord {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub mode: Mode,
    pub min_size: Option<usize>,
    pub max_size: Option<usize>,
    pub min_witnesses: Vec<CanonicalCode>,
    pub max_witnesses: Vec<CanonicalCode>,
    /// Number of minimal classes in the cell.
    pub members: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CellOutcome {
    Done(ExtremalRecord),
    Skipped {
        n: usize,
        k: usize,
        l: usize,
        mode: Mode,
    },
}

impl CellOutcome {
    pub fn record(&self) -> Option<&ExtremalRecord> {
        match self {
            CellOutcome::Done(r) => Some(r),
            CellOutcome::Skipped { .. } => None,
        }
    }
}

fn opt(v: Option<usize>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

impl fmt::Display for CellOutcome {
    /// `mode n k l min max nmin nmax`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellOutcome::Done(r) => write!(
                f,
                "{} {} {} {} {} {} {} {}",
                r.mode,
                r.n,
                r.k,
                r.l,
                opt(r.min_size),
                opt(r.max_size),
                r.min_witnesses.len(),
                r.max_witnesses.len()
            ),
            CellOutcome::Skipped { n, k, l, mode } => {
                write!(f, "{mode} {n} {k} {l} SKIPPED")
            }
        }
    }
}

/// Builds the census of order `n` and extracts one cell.
pub fn extremal_values(n: usize, k: usize, l: usize, mode: Mode) -> Result<ExtremalRecord> {
    let census = Census::build_tables(n, &[(mode, k)])?;
    match census.record(k, l, mode)? {
        CellOutcome::Done(r) => Ok(r),
        CellOutcome::Skipped { .. } => unreachable!("no budget"),
    }
}

/// Which part of the characterization to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CharacterizationCase {
    /// `l = 1`: exactly the minimally strong digraphs, both modes.
    A,
    /// `l = n - 1`: exactly the complete digraph, both modes.
    B,
    /// `l = n - 2`, arc mode: exactly the two deletion families.
    C,
    /// `l = n - 2`, vertex mode: exactly the two deletion families.
    D,
}

impl std::str::FromStr for CharacterizationCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Self::A),
            "b" => Ok(Self::B),
            "c" => Ok(Self::C),
            "d" => Ok(Self::D),
            _ => Err(Error::OutOfRange(format!(
                "unknown case {s:?}, expected a, b, c or d"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterizationReport {
    pub n: usize,
    pub k: usize,
    pub case: CharacterizationCase,
    pub pass: bool,
    pub discrepancies: Vec<String>,
}

/// Canonical codes of the two deletion families of order `n`.
pub fn deletion_family_codes(
    n: usize,
) -> Result<(BTreeSet<CanonicalCode>, BTreeSet<CanonicalCode>)> {
    let mut covering = BTreeSet::new();
    let mut near = BTreeSet::new();
    for cp in CyclePartition::all(n) {
        let code = canonical_form(&build_deletion_family(&cp)?)?;
        match cp.family() {
            DeletionFamily::Covering => covering.insert(code),
            DeletionFamily::NearCovering => near.insert(code),
        };
    }
    Ok((covering, near))
}

fn compare(
    what: &str,
    got: &BTreeSet<CanonicalCode>,
    want: &BTreeSet<CanonicalCode>,
    out: &mut Vec<String>,
) {
    for c in got.difference(want) {
        out.push(format!("{what}: {c} found but not predicted"));
    }
    for c in want.difference(got) {
        out.push(format!("{what}: {c} predicted but not found"));
    }
}

/// Compares the census against one case of the characterization.
pub fn verify_characterization(
    census: &Census,
    k: usize,
    case: CharacterizationCase,
) -> Result<CharacterizationReport> {
    let n = census.n();
    let (l, modes): (usize, &[Mode]) = match case {
        CharacterizationCase::A => (1, &Mode::BOTH),
        CharacterizationCase::B => (n - 1, &Mode::BOTH),
        CharacterizationCase::C => (n - 2, &[Mode::Arc]),
        CharacterizationCase::D => (n - 2, &[Mode::Vertex]),
    };
    if l == 0 {
        return Err(Error::OutOfRange(format!("case {case:?} needs n >= 3")));
    }
    let mut discrepancies = Vec::new();
    for &mode in modes {
        let outcome = census.record(k, l, mode)?;
        let Some(rec) = outcome.record() else {
            discrepancies.push(format!("{mode} k={k} l={l}: SKIPPED"));
            continue;
        };
        let got: BTreeSet<CanonicalCode> = census
            .minimal_classes(k, l, mode)?
            .unwrap_or_default()
            .into_iter()
            .map(|i| census.classes()[i].code)
            .collect();
        let tag = format!("{mode} k={k} l={l}");
        match case {
            CharacterizationCase::A => {
                let want = census
                    .classes()
                    .iter()
                    .filter(|c| c.digraph.is_minimally_strong())
                    .map(|c| c.code)
                    .collect();
                compare(&tag, &got, &want, &mut discrepancies);
            }
            CharacterizationCase::B => {
                let want = BTreeSet::from([canonical_form(&Digraph::complete(n)?)?]);
                compare(&tag, &got, &want, &mut discrepancies);
            }
            CharacterizationCase::C | CharacterizationCase::D => {
                let (cov, near) = deletion_family_codes(n)?;
                let want: BTreeSet<_> = cov.union(&near).copied().collect();
                compare(&tag, &got, &want, &mut discrepancies);
                let mins: BTreeSet<_> = rec.min_witnesses.iter().copied().collect();
                let maxs: BTreeSet<_> = rec.max_witnesses.iter().copied().collect();
                compare(
                    &format!("{tag} min witnesses"),
                    &mins,
                    &cov,
                    &mut discrepancies,
                );
                compare(
                    &format!("{tag} max witnesses"),
                    &maxs,
                    &near,
                    &mut discrepancies,
                );
            }
        }
    }
    Ok(CharacterizationReport {
        n,
        k,
        case,
        pass: discrepancies.is_empty(),
        discrepancies,
    })
}

/// Number of vertices with out-degree exactly `l` and in-degree exactly `l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub out_count: usize,
    pub in_count: usize,
}

impl DegreeProfile {
    pub fn of(d: &Digraph, l: usize) -> Self {
        DegreeProfile {
            out_count: (0..d.n()).filter(|&v| d.out_degree(v) == l).count(),
            in_count: (0..d.n()).filter(|&v| d.in_degree(v) == l).count(),
        }
    }

    /// The four probed properties: out-count and in-count positive, and
    /// out-count and in-count at least `l + 1`.
    pub fn checks(&self, l: usize) -> [bool; 4] {
        [
            self.out_count > 0,
            self.in_count > 0,
            self.out_count > l,
            self.in_count > l,
        ]
    }
}

/// Degree profile of every minimal class of a cell; `None` when skipped.
pub fn degree_profile_scan(
    census: &Census,
    k: usize,
    l: usize,
    mode: Mode,
) -> Result<Option<Vec<(CanonicalCode, DegreeProfile)>>> {
    Ok(census.minimal_classes(k, l, mode)?.map(|members| {
        members
            .into_iter()
            .map(|i| {
                let c = &census.classes()[i];
                (c.code, DegreeProfile::of(&c.digraph, l))
            })
            .collect()
    }))
}

/// Appends record lines to `dir/records.txt` and writes the witnesses of
/// each cell to `dir/<mode>_n<n>_k<k>_l<l>/{min,max}_<i>.dg`.
pub fn write_records(dir: &Path, outcomes: &[CellOutcome]) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(e.to_string());
    fs::create_dir_all(dir).map_err(io)?;
    let mut lines = String::new();
    for o in outcomes {
        lines.push_str(&format!("{o}\n"));
        let Some(r) = o.record() else { continue };
        let cell = dir.join(format!("{}_n{}_k{}_l{}", r.mode, r.n, r.k, r.l));
        fs::create_dir_all(&cell).map_err(io)?;
        for (tag, list) in [("min", &r.min_witnesses), ("max", &r.max_witnesses)] {
            for (i, code) in list.iter().enumerate() {
                fs::write(
                    cell.join(format!("{tag}_{i}.dg")),
                    to_text(&code.to_digraph()),
                )
                .map_err(io)?;
            }
        }
    }
    fs::write(dir.join("records.txt"), lines).map_err(io)
}
