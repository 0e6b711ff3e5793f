//! Principal-block decomposition matrices by interval propagation.
//!
//! Unknowns are the sub-diagonal entries of the unitriangular matrix D and
//! the multiplicities a[k,j] of Φⱼ in Ψₖ. Bounds are affine in m and are
//! compared under the side condition m ≥ m_min of the case.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::affine::{Affine, Unknown};
use crate::hc::{column_tags, defect_zero_tag, psi_columns, HcError, LeviPims, ProjColumn, SeriesTag};
use crate::lusztig::{lusztig, relation_vectors, AffineChar, LusztigError};
use crate::polyq::{as_i64, EllCase};
use crate::unipotent::{enumerate, UniLabel, UnipotentError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Projectives,
    Relations,
    SeriesSupport,
    Dudas,
    /// Published entries, verification mode only.
    Seed,
}

impl Family {
    pub const ABLATABLE: [Family; 4] = [Family::Projectives, Family::Relations, Family::SeriesSupport, Family::Dudas];

    pub fn name(self) -> &'static str {
        match self {
            Family::Projectives => "projectives",
            Family::Relations => "relations",
            Family::SeriesSupport => "series-support",
            Family::Dudas => "dudas",
            Family::Seed => "seed",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ABLATABLE
            .into_iter()
            .chain([Family::Seed])
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown constraint family `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Derive,
    Verify,
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "derive" => Ok(Mode::Derive),
            "verify" => Ok(Mode::Verify),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Derive => "derive",
            Mode::Verify => "verify",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error(transparent)]
    Hc(#[from] HcError),
    #[error(transparent)]
    Lusztig(#[from] LusztigError),
    #[error(transparent)]
    Unipotent(#[from] UnipotentError),
    #[error("rank {0} is not supported")]
    UnsupportedRank(usize),
    #[error("{0} is not unitriangular in the principal-block order")]
    NotUnitriangular(String),
    #[error("infeasible: {var} has no admissible value ({origin})")]
    Infeasible { var: String, origin: String },
    #[error("no fixpoint after {0} passes")]
    NoFixpoint(usize),
    #[error("unresolved entries: {}", .0.join(", "))]
    Unresolved(Vec<String>),
    #[error("audit failed: {0}")]
    Audit(String),
}

/// Closed interval of nonnegative integers; `hi = None` is unbounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Affine,
    pub hi: Option<Affine>,
}

impl Interval {
    pub fn unbounded() -> Self {
        Interval { lo: Affine::zero(), hi: None }
    }

    pub fn point(v: Affine) -> Self {
        Interval { lo: v.clone(), hi: Some(v) }
    }

    pub fn fixed(&self) -> Option<&Affine> {
        match &self.hi {
            Some(h) if *h == self.lo => Some(h),
            _ => None,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.hi, self.fixed()) {
            (_, Some(v)) => write!(f, "{v}"),
            (Some(h), None) => write!(f, "[{}, {h}]", self.lo),
            (None, None) => write!(f, "[{}, ∞)", self.lo),
        }
    }
}

fn at(f: &Affine, m_min: i64) -> i64 {
    f.eval(&|u| (u == Unknown::M).then_some(m_min)).expect("bounds are affine in m")
}

/// f ≤ g for every m ≥ m_min.
fn le(f: &Affine, g: &Affine, m_min: i64) -> bool {
    at(f, m_min) <= at(g, m_min) && f.coefficient(Unknown::M) <= g.coefficient(Unknown::M)
}

fn div_ceil(a: &Affine, c: i64) -> Option<Affine> {
    if c == 1 {
        return Some(a.clone());
    }
    a.as_constant().map(|k| Affine::constant(-(-k).div_euclid(c)))
}

fn div_floor(a: &Affine, c: i64) -> Option<Affine> {
    if c == 1 {
        return Some(a.clone());
    }
    a.as_constant().map(|k| Affine::constant(k.div_euclid(c)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Term {
    coef: i64,
    x: Unknown,
    y: Option<Unknown>,
}

/// Σ terms + constant (= or ≥) 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    terms: Vec<Term>,
    constant: Affine,
    eq: bool,
    pub family: Family,
    pub origin: String,
}

impl Constraint {
    fn linear(terms: Vec<(i64, Unknown)>, constant: Affine, eq: bool, family: Family, origin: String) -> Self {
        let terms = terms.into_iter().filter(|(c, _)| *c != 0).map(|(coef, x)| Term { coef, x, y: None }).collect();
        Constraint { terms, constant, eq, family, origin }
    }

    fn from_affine(expr: &Affine, family: Family, origin: String) -> Self {
        let mut constant = Affine::constant(expr.constant_part());
        let mut terms = vec![];
        for (u, k) in expr.terms() {
            if u == Unknown::M {
                constant = constant + Affine::term(k, u);
            } else {
                terms.push((k, u));
            }
        }
        Constraint::linear(terms, constant, false, family, origin)
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            let sign = if t.coef < 0 {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            let sp = if i > 0 { " " } else { "" };
            write!(f, "{sp}{sign}{sp}")?;
            if t.coef.abs() != 1 {
                write!(f, "{}", t.coef.abs())?;
            }
            write!(f, "{}", t.x)?;
            if let Some(y) = t.y {
                write!(f, "·{y}")?;
            }
        }
        if !self.constant.is_zero() || self.terms.is_empty() {
            let c = &self.constant;
            if self.terms.is_empty() {
                write!(f, "{c}")?;
            } else if c.constant_part() < 0 && c.as_constant().is_some() {
                write!(f, " - {}", -c.clone())?;
            } else {
                write!(f, " + ({c})")?;
            }
        }
        write!(f, " {} 0", if self.eq { "=" } else { "≥" })
    }
}

/// A bound change, with the constraint that caused it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tightening {
    pub var: Unknown,
    pub family: Family,
    pub origin: String,
    pub interval: Interval,
}

/// One application of the sign bound to the class of R_w.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DudasStep {
    pub class: usize,
    pub word: Vec<usize>,
    pub length: usize,
    /// ⟨R_w, φ⟩ with the cells open at the start of the step symbolic.
    pub pairing: Affine,
    /// (−1)^ℓ(w)·pairing after substituting resolved cells; imposed ≥ 0.
    pub imposed: Affine,
}

impl DudasStep {
    pub fn sign(&self) -> i64 {
        if self.length.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// ℓ-regular relation row: Σᵢ coeffs[i]·D[i][j] ≥ bound for the given columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationRow {
    pub name: String,
    pub coeffs: Vec<i64>,
    pub column: Option<usize>,
    pub bound: i64,
}

/// Relation vectors of the case on principal rows, plus the bound
/// ⟨1_B^G, φ₁⟩ ≥ 2 from the permutation character on the Borel.
pub fn relation_rows(m: usize, case: EllCase) -> Result<Vec<RelationRow>, SolveError> {
    let set = enumerate(m)?;
    let principal = set.principal_block();
    let mut out = vec![];
    for r in relation_vectors(m, case)? {
        let coeffs = principal
            .iter()
            .map(|&i| {
                as_i64(&r.vector.coeffs[i]).ok_or_else(|| LusztigError::NonIntegral { name: r.name.clone(), vector: r.vector.to_string() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(RelationRow { name: r.name, coeffs, column: None, bound: 0 });
    }
    let perm: &[&str] = if m == 2 { &["[2,-,1]", "[1^2,-,1]"] } else { &["[3,-,1]", "[2,1,1]"] };
    let mut coeffs = vec![0; principal.len()];
    for p in perm {
        let i = set.find(p)?;
        coeffs[principal.iter().position(|&k| k == i).unwrap()] = 1;
    }
    out.push(RelationRow { name: "1_B".into(), coeffs, column: Some(0), bound: 2 });
    Ok(out)
}

fn column_names(m: usize, n: usize) -> Vec<String> {
    let prefix = if m == 2 { "⁵φ" } else { "φ" };
    (1..=n).map(|j| format!("{prefix}{j}")).collect()
}

/// Cells carrying the published unknowns, 0-based (row, column).
pub fn named_cells(m: usize) -> Vec<(Unknown, Vec<(usize, usize)>)> {
    match m {
        2 => vec![(Unknown::Alpha, vec![(4, 1)])],
        _ => vec![(Unknown::Alpha, vec![(6, 3), (9, 3)]), (Unknown::Beta, vec![(9, 7)]), (Unknown::Gamma, vec![(9, 8)])],
    }
}

/// Values of the published unknowns in the final theorems.
pub fn theorem_values(m: usize, case: EllCase) -> Vec<(Unknown, i64)> {
    let alpha = if case == EllCase::Case3 { 1 } else { 2 };
    match (m, case) {
        (2, _) => vec![(Unknown::Alpha, alpha)],
        (_, EllCase::Case3) => vec![(Unknown::Alpha, 1), (Unknown::Beta, 1), (Unknown::Gamma, 1)],
        (_, EllCase::Case5) => vec![(Unknown::Alpha, 2), (Unknown::Beta, 2), (Unknown::Gamma, 2)],
        (_, EllCase::Large) => vec![(Unknown::Alpha, 2), (Unknown::Beta, 3), (Unknown::Gamma, 2)],
    }
}

/// The published decomposition matrix with α, β, γ symbolic.
pub fn published_matrix(m: usize) -> Vec<Vec<Affine>> {
    let rows: &[&str] = match m {
        2 => &["1", "0 1", "1 0 1", "1 0 0 1", "1 α 1 1 1"],
        _ => &[
            "1",
            "1 1",
            "1 0 1",
            "0 0 0 1",
            "1 1 1 0 1",
            "1 1 0 0 1 1",
            "1 1 1 α 1 1 1",
            "1 0 0 0 0 1 0 1",
            "0 0 0 1 0 0 0 0 1",
            "1 0 1 α 1 1 1 β γ 1",
        ],
    };
    let n = rows.len();
    rows.iter()
        .map(|r| {
            let mut v: Vec<Affine> = r.split(' ').map(|s| s.parse().unwrap()).collect();
            v.resize(n, Affine::zero());
            v
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct DecModel {
    pub m: usize,
    pub case: EllCase,
    pub rows: Vec<UniLabel>,
    /// Row i is label `principal[i]` of the full unipotent set.
    pub principal: Vec<usize>,
    pub columns: Vec<String>,
    pub tags: Vec<SeriesTag>,
    pub psi: Vec<ProjColumn>,
    pub log: Vec<Tightening>,
    pub dudas: Vec<DudasStep>,
    /// Informational messages (skipped steps, inapplicable bounds).
    pub notes: Vec<String>,
    vars: BTreeMap<Unknown, Interval>,
    constraints: Vec<Constraint>,
    m_min: i64,
}

const MAX_PASSES: usize = 500;

/// Skeleton with unitriangularity imposed and sub-diagonal entries in [0, ∞).
pub fn build_model(m: usize, case: EllCase) -> Result<DecModel, SolveError> {
    if m != 2 && m != 3 {
        return Err(SolveError::UnsupportedRank(m));
    }
    let set = enumerate(m)?;
    let principal = set.principal_block();
    let n = principal.len();
    let mut vars = BTreeMap::new();
    for i in 0..n {
        for j in 0..i {
            vars.insert(Unknown::Entry(i as u8, j as u8), Interval::unbounded());
        }
    }
    Ok(DecModel {
        m,
        case,
        rows: principal.iter().map(|&i| set.labels[i].clone()).collect(),
        principal,
        columns: column_names(m, n),
        tags: column_tags(m),
        psi: vec![],
        log: vec![],
        dudas: vec![],
        notes: vec![],
        vars,
        constraints: vec![],
        m_min: case.m_min(),
    })
}

impl DecModel {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn row_index(&self, text: &str) -> Result<usize, SolveError> {
        let l: UniLabel = text.parse()?;
        self.rows.iter().position(|r| *r == l).ok_or(SolveError::Unipotent(UnipotentError::UnknownLabel(text.into(), self.m)))
    }

    pub fn entry(&self, i: usize, j: usize) -> Interval {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => Interval::point(Affine::constant(1)),
            std::cmp::Ordering::Less => Interval::point(Affine::zero()),
            std::cmp::Ordering::Greater => self.vars[&Unknown::Entry(i as u8, j as u8)].clone(),
        }
    }

    pub fn interval(&self, u: Unknown) -> Option<&Interval> {
        self.vars.get(&u)
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn unresolved(&self) -> Vec<(usize, usize, Interval)> {
        let mut out = vec![];
        for (u, iv) in &self.vars {
            if let (Unknown::Entry(i, j), None) = (u, iv.fixed()) {
                out.push((*i as usize, *j as usize, iv.clone()));
            }
        }
        out
    }

    pub fn is_resolved(&self) -> bool {
        self.unresolved().is_empty()
    }

    fn describe_cell(&self, i: usize, j: usize) -> String {
        format!("({}, {})", self.rows[i], self.columns[j])
    }

    fn range(&self, u: Unknown) -> (Affine, Option<Affine>) {
        let iv = &self.vars[&u];
        (iv.lo.clone(), iv.hi.clone())
    }

    fn term_range(&self, t: &Term) -> (Option<Affine>, Option<Affine>) {
        let (lx, hx) = self.range(t.x);
        let (lo, hi) = match t.y {
            None => (lx, hx),
            Some(y) => {
                let (ly, hy) = self.range(y);
                let zero = Affine::zero();
                let lo = lx.checked_mul(&ly).unwrap_or_else(Affine::zero);
                let hi = if hx.as_ref() == Some(&zero) || hy.as_ref() == Some(&zero) {
                    Some(zero)
                } else {
                    match (hx, hy) {
                        (Some(a), Some(b)) => a.checked_mul(&b),
                        _ => None,
                    }
                };
                (lo, hi)
            }
        };
        if t.coef > 0 {
            (Some(lo * t.coef), hi.map(|h| h * t.coef))
        } else {
            (hi.map(|h| h * t.coef), Some(lo * t.coef))
        }
    }

    fn infeasible(&self, u: Unknown, origin: &str) -> SolveError {
        SolveError::Infeasible { var: u.to_string(), origin: origin.to_string() }
    }

    fn tighten_lo(&mut self, u: Unknown, l: Affine, family: Family, origin: &str) -> Result<bool, SolveError> {
        let m_min = self.m_min;
        let iv = self.vars.get_mut(&u).expect("known unknown");
        if le(&l, &iv.lo, m_min) || !le(&iv.lo, &l, m_min) {
            return Ok(false);
        }
        iv.lo = l;
        let ok = iv.hi.as_ref().is_none_or(|h| le(&iv.lo, h, m_min));
        let interval = iv.clone();
        if !ok {
            return Err(self.infeasible(u, origin));
        }
        self.log.push(Tightening { var: u, family, origin: origin.to_string(), interval });
        Ok(true)
    }

    fn tighten_hi(&mut self, u: Unknown, h: Affine, family: Family, origin: &str) -> Result<bool, SolveError> {
        let m_min = self.m_min;
        let iv = self.vars.get_mut(&u).expect("known unknown");
        if let Some(old) = &iv.hi {
            if le(old, &h, m_min) || !le(&h, old, m_min) {
                return Ok(false);
            }
        }
        let ok = le(&iv.lo, &h, m_min);
        iv.hi = Some(h);
        let interval = iv.clone();
        if !ok {
            return Err(self.infeasible(u, origin));
        }
        self.log.push(Tightening { var: u, family, origin: origin.to_string(), interval });
        Ok(true)
    }

    /// Value of a term is at least l.
    fn term_at_least(&mut self, t: &Term, l: Affine, family: Family, origin: &str) -> Result<bool, SolveError> {
        let Some(y) = t.y else {
            return self.tighten_lo(t.x, l, family, origin);
        };
        let one = Affine::constant(1);
        if !le(&one, &l, self.m_min) {
            return Ok(false);
        }
        let mut changed = self.tighten_lo(t.x, one.clone(), family, origin)?;
        changed |= self.tighten_lo(y, one, family, origin)?;
        for (a, b) in [(t.x, y), (y, t.x)] {
            if let Some(h) = self.vars[&b].hi.as_ref().and_then(Affine::as_constant) {
                if let Some(v) = div_ceil(&l, h) {
                    changed |= self.tighten_lo(a, v, family, origin)?;
                }
            }
        }
        Ok(changed)
    }

    /// Value of a term is at most h.
    fn term_at_most(&mut self, t: &Term, h: Affine, family: Family, origin: &str) -> Result<bool, SolveError> {
        let Some(y) = t.y else {
            return self.tighten_hi(t.x, h, family, origin);
        };
        let mut changed = false;
        for (a, b) in [(t.x, y), (y, t.x)] {
            let lo = self.vars[&b].lo.as_constant().unwrap_or(0);
            if lo >= 1 {
                if let Some(v) = div_floor(&h, lo) {
                    changed |= self.tighten_hi(a, v, family, origin)?;
                }
            }
        }
        Ok(changed)
    }

    fn propagate_ge(&mut self, terms: &[Term], constant: &Affine, family: Family, origin: &str) -> Result<bool, SolveError> {
        let ranges: Vec<_> = terms.iter().map(|t| self.term_range(t)).collect();
        let total_max = ranges.iter().try_fold(constant.clone(), |acc, r| r.1.as_ref().map(|h| acc + h.clone()));
        if let Some(s) = &total_max {
            if !le(&Affine::zero(), s, self.m_min) && at(s, self.m_min) < 0 {
                return Err(SolveError::Infeasible { var: "constraint".into(), origin: origin.to_string() });
            }
        }
        let mut changed = false;
        for (idx, t) in terms.iter().enumerate() {
            let mut rest = Some(constant.clone());
            for (o, r) in ranges.iter().enumerate() {
                if o != idx {
                    rest = match (rest, &r.1) {
                        (Some(a), Some(b)) => Some(a + b.clone()),
                        _ => None,
                    };
                }
            }
            let Some(rest) = rest else { continue };
            // coef·v ≥ −rest
            if t.coef > 0 {
                if let Some(l) = div_ceil(&-rest, t.coef) {
                    changed |= self.term_at_least(t, l, family, origin)?;
                }
            } else if let Some(h) = div_floor(&rest, -t.coef) {
                changed |= self.term_at_most(t, h, family, origin)?;
            }
        }
        Ok(changed)
    }

    fn propagate(&mut self, c: &Constraint) -> Result<bool, SolveError> {
        let mut changed = self.propagate_ge(&c.terms, &c.constant, c.family, &c.origin)?;
        if c.eq {
            let neg: Vec<Term> = c.terms.iter().map(|t| Term { coef: -t.coef, ..t.clone() }).collect();
            changed |= self.propagate_ge(&neg, &-c.constant.clone(), c.family, &c.origin)?;
        }
        Ok(changed)
    }

    /// Propagates all constraints until no bound moves.
    pub fn fixpoint(&mut self) -> Result<usize, SolveError> {
        for pass in 1..=MAX_PASSES {
            let mut changed = false;
            for k in 0..self.constraints.len() {
                let c = self.constraints[k].clone();
                changed |= self.propagate(&c)?;
            }
            if !changed {
                return Ok(pass);
            }
        }
        Err(SolveError::NoFixpoint(MAX_PASSES))
    }

    fn add(&mut self, c: Constraint) {
        if !self.constraints.contains(&c) {
            self.constraints.push(c);
        }
    }

    /// Peels each Ψₖ as Σⱼ a[k,j]·Φⱼ with a[k,k] = 1 and a[k,j] ≥ 0.
    pub fn apply_projective_columns(&mut self, psi: &[ProjColumn]) -> Result<(), SolveError> {
        let n = self.size();
        if psi.len() != n {
            return Err(SolveError::NotUnitriangular(format!("{} columns for {} rows", psi.len(), n)));
        }
        for (k, col) in psi.iter().enumerate() {
            let bad = col.values[..k].iter().any(|v| !v.is_zero()) || col.values[k] != Affine::constant(1);
            if bad {
                return Err(SolveError::NotUnitriangular(col.name.clone()));
            }
        }
        for k in 0..n {
            for j in k + 1..n {
                self.vars.insert(Unknown::Mult(k as u8, j as u8), Interval::unbounded());
            }
        }
        for (k, col) in psi.iter().enumerate() {
            for i in k + 1..n {
                let mut terms = vec![Term { coef: 1, x: Unknown::Entry(i as u8, k as u8), y: None }];
                for j in k + 1..i {
                    terms.push(Term { coef: 1, x: Unknown::Mult(k as u8, j as u8), y: Some(Unknown::Entry(i as u8, j as u8)) });
                }
                terms.push(Term { coef: 1, x: Unknown::Mult(k as u8, i as u8), y: None });
                let origin = format!("{} at {}", col.name, self.rows[i]);
                self.add(Constraint { terms, constant: -col.values[i].clone(), eq: true, family: Family::Projectives, origin });
            }
        }
        self.psi = psi.to_vec();
        self.fixpoint()?;
        Ok(())
    }

    /// Σᵢ r(i)·D[i][j] ≥ bound for every relation row and column.
    pub fn apply_relations(&mut self, rels: &[RelationRow]) -> Result<(), SolveError> {
        let n = self.size();
        for r in rels {
            let cols: Vec<usize> = match r.column {
                Some(j) => vec![j],
                None => (0..n).collect(),
            };
            for j in cols {
                let terms = (j + 1..n).map(|i| (r.coeffs[i], Unknown::Entry(i as u8, j as u8))).collect();
                let constant = Affine::constant(r.coeffs[j] - r.bound);
                let origin = format!("{} at {}", r.name, self.columns[j]);
                self.add(Constraint::linear(terms, constant, false, Family::Relations, origin));
            }
        }
        self.fixpoint()?;
        Ok(())
    }

    /// A Harish-Chandra induced Ψ has no summand Φⱼ outside its own series.
    pub fn apply_cuspidal_support(&mut self) -> Result<(), SolveError> {
        if self.psi.is_empty() {
            self.notes.push("series support skipped: no projective columns".into());
            return Ok(());
        }
        let n = self.size();
        for k in 0..n {
            let Some(tag) = self.psi[k].series.clone() else { continue };
            for j in k + 1..n {
                if !tag.same_series(&self.tags[j]) {
                    let origin = format!("{} ({}) ∌ Φ{} ({})", self.psi[k].name, tag, j + 1, self.tags[j]);
                    self.add(Constraint::linear(
                        vec![(1, Unknown::Mult(k as u8, j as u8))],
                        Affine::zero(),
                        true,
                        Family::SeriesSupport,
                        origin,
                    ));
                }
            }
        }
        self.fixpoint()?;
        Ok(())
    }

    fn seed(&mut self) {
        let table = published_matrix(self.m);
        let named = named_cells(self.m);
        let is_named = |i: usize, j: usize| named.iter().any(|(_, cells)| cells.contains(&(i, j)));
        for (i, row) in table.iter().enumerate() {
            for (j, v) in row.iter().enumerate().take(i) {
                if !is_named(i, j) {
                    let u = Unknown::Entry(i as u8, j as u8);
                    self.add(Constraint::linear(vec![(1, u)], -v.clone(), true, Family::Seed, format!("published {u}")));
                }
            }
        }
        for (name, cells) in &named {
            for w in cells.windows(2) {
                let a = Unknown::Entry(w[0].0 as u8, w[0].1 as u8);
                let b = Unknown::Entry(w[1].0 as u8, w[1].1 as u8);
                self.add(Constraint::linear(vec![(1, a), (-1, b)], Affine::zero(), true, Family::Seed, format!("shared {name}")));
            }
        }
    }

    fn value(&self, i: usize, j: usize) -> Option<Affine> {
        self.entry(i, j).fixed().cloned()
    }

    /// Last row of D⁻¹ as a Brauer character, cells in `open` kept symbolic.
    fn last_brauer(&self, open: &BTreeSet<(usize, usize)>) -> Option<AffineChar> {
        let n = self.size();
        let last = n - 1;
        // X = A⁻¹ for the leading (n−1)×(n−1) block
        let mut x = vec![vec![Affine::zero(); last]; last];
        for i in 0..last {
            x[i][i] = Affine::constant(1);
            for j in 0..i {
                let mut s = Affine::zero();
                for (k, xk) in x.iter().enumerate().take(i).skip(j) {
                    s = s + self.value(i, k)?.checked_mul(&xk[j])?;
                }
                x[i][j] = -s;
            }
        }
        let v: Vec<Affine> = (0..last)
            .map(|j| if open.contains(&(last, j)) { Some(Affine::var(Unknown::Entry(last as u8, j as u8))) } else { self.value(last, j) })
            .collect::<Option<_>>()?;
        let set = enumerate(self.m).ok()?;
        let mut phi = AffineChar::zero(self.m);
        for (j, &p) in self.principal.iter().take(last).enumerate() {
            let s = v.iter().zip(&x).skip(j).try_fold(Affine::zero(), |acc, (vi, xi)| Some(acc + vi.checked_mul(&xi[j])?))?;
            phi.coeffs[p] = -s;
        }
        phi.coeffs[self.principal[last]] = Affine::constant(1);
        debug_assert_eq!(phi.coeffs.len(), set.len());
        Some(phi)
    }

    /// One round of the sign bound on the cuspidal Steinberg column:
    /// (−1)^ℓ(w)·⟨R_w, φ⟩ ≥ 0 for the shortest classes with nonvanishing
    /// pairing. Returns whether a new constraint was imposed.
    pub fn apply_dudas(&mut self, open: &BTreeSet<(usize, usize)>) -> Result<bool, SolveError> {
        let last = self.size() - 1;
        if self.unresolved().iter().any(|(i, _, _)| *i != last) {
            self.notes.push("sign bound skipped: unresolved entries outside the Steinberg row".into());
            return Ok(false);
        }
        let (Some(symbolic), Some(current)) = (self.last_brauer(open), self.last_brauer(&self.open_cells())) else {
            self.notes.push("sign bound skipped: Brauer character not affine".into());
            return Ok(false);
        };
        let l = lusztig(self.m)?;
        let pairs = l.pairings(&current)?;
        let sym = l.pairings(&symbolic)?;
        let Some(first) = pairs.iter().position(|p| !p.pairing.is_zero()) else {
            self.notes.push("sign bound: every pairing vanishes".into());
            return Ok(false);
        };
        let length = pairs[first].length;
        let mut added = false;
        for (p, s) in pairs.iter().zip(&sym).skip(first).take_while(|(p, _)| p.length == length) {
            if p.pairing.is_zero() {
                continue;
            }
            let sign = if length % 2 == 0 { 1 } else { -1 };
            let imposed = p.pairing.scale(sign);
            let step = DudasStep { class: p.class, word: p.word.clone(), length, pairing: s.pairing.clone(), imposed: imposed.clone() };
            if self.dudas.iter().any(|d| d.class == step.class && d.imposed == step.imposed) {
                continue;
            }
            let origin = format!("R_w, w = {}", word_string(&p.word));
            if imposed.unknowns().all(|u| u == Unknown::M) && !le(&Affine::zero(), &imposed, self.m_min) {
                return Err(SolveError::Infeasible { var: "sign bound".into(), origin });
            }
            self.add(Constraint::from_affine(&imposed, Family::Dudas, origin));
            self.dudas.push(step);
            added = true;
        }
        if added {
            self.fixpoint()?;
        }
        Ok(added)
    }

    fn open_cells(&self) -> BTreeSet<(usize, usize)> {
        self.unresolved().into_iter().map(|(i, j, _)| (i, j)).collect()
    }

    /// Repeats the sign bound while it keeps producing new constraints.
    pub fn run_dudas(&mut self) -> Result<(), SolveError> {
        let open = self.open_cells();
        while !self.is_resolved() && self.apply_dudas(&open)? {}
        Ok(())
    }

    /// Resolved matrix; `None` while an entry is open.
    pub fn matrix(&self) -> Option<Vec<Vec<Affine>>> {
        let n = self.size();
        (0..n).map(|i| (0..n).map(|j| self.value(i, j)).collect()).collect()
    }
}

fn word_string(w: &[usize]) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        w.iter().map(|s| format!("s{s}")).collect()
    }
}

/// Solver switches: mode and the constraint families left out.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub mode: Mode,
    pub disabled: BTreeSet<Family>,
}

impl Options {
    pub fn without(family: Family) -> Self {
        Options { mode: Mode::Derive, disabled: [family].into() }
    }

    fn on(&self, f: Family) -> bool {
        !self.disabled.contains(&f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub m: usize,
    pub case: EllCase,
    pub mode: Mode,
    pub rows: Vec<UniLabel>,
    pub columns: Vec<String>,
    pub tags: Vec<SeriesTag>,
    pub entries: Vec<Vec<Affine>>,
    /// α, β, γ as read off the named cells.
    pub named: Vec<(Unknown, Affine)>,
    /// a[k][j]: multiplicity of Φⱼ in Ψₖ.
    pub multiplicities: Vec<Vec<Affine>>,
    pub psi: Vec<ProjColumn>,
    pub dudas: Vec<DudasStep>,
    pub relations: Vec<RelationRow>,
    pub contributions: BTreeMap<Family, usize>,
    pub audit: Vec<AuditCheck>,
    pub log: Vec<Tightening>,
    pub notes: Vec<String>,
}

impl Solution {
    pub fn audit_passed(&self) -> bool {
        self.audit.iter().all(|a| a.passed)
    }

    pub fn named_value(&self, u: Unknown) -> Option<&Affine> {
        self.named.iter().find(|(n, _)| *n == u).map(|(_, v)| v)
    }

    /// Indices k with Ψₖ = Φₖ.
    pub fn indecomposable_psi(&self) -> Vec<usize> {
        (0..self.entries.len()).filter(|&k| self.multiplicities[k].iter().enumerate().all(|(j, a)| j == k || a.is_zero())).collect()
    }

    /// Rewrites cell unknowns as α, β, γ.
    pub fn rename(&self, e: &Affine) -> Affine {
        rename_cells(self.m, e)
    }

    /// PIM characters for Harish-Chandra induction one rank up.
    pub fn levi_pims(&self) -> LeviPims {
        let set = enumerate(self.m).unwrap();
        let principal = set.principal_block();
        let mut columns: Vec<AffineChar> = (0..self.entries.len())
            .map(|j| {
                let mut c = AffineChar::zero(self.m);
                for (i, row) in self.entries.iter().enumerate() {
                    c.coeffs[principal[i]] = row[j].clone();
                }
                c
            })
            .collect();
        let mut tags = self.tags.clone();
        for (i, b) in set.blocks.iter().enumerate() {
            if *b == crate::unipotent::BlockKind::Defect0 {
                let mut c = AffineChar::zero(self.m);
                c.coeffs[i] = Affine::constant(1);
                columns.push(c);
                tags.push(defect_zero_tag());
            }
        }
        LeviPims { columns, tags }
    }
}

fn rename_cells(m: usize, e: &Affine) -> Affine {
    let named = named_cells(m);
    e.substitute(&|u| match u {
        Unknown::Entry(i, j) => named.iter().find(|(_, cells)| cells.contains(&(i as usize, j as usize))).map(|(n, _)| Affine::var(*n)),
        _ => None,
    })
}

/// Runs the constraint families and returns the final model, resolved or not.
pub fn run(m: usize, case: EllCase, opts: &Options) -> Result<DecModel, SolveError> {
    let levi = if m == 3 { Some(solve_with(2, case, &Options { mode: opts.mode, disabled: BTreeSet::new() })?.levi_pims()) } else { None };
    let mut model = build_model(m, case)?;
    if opts.mode == Mode::Verify {
        model.seed();
        model.fixpoint()?;
    }
    if opts.on(Family::Projectives) {
        let psi = psi_columns(m, case, levi.as_ref())?;
        for c in &psi {
            model.notes.extend(c.dropped_notes());
        }
        model.apply_projective_columns(&psi)?;
    }
    if opts.on(Family::Relations) {
        model.apply_relations(&relation_rows(m, case)?)?;
    }
    if opts.on(Family::SeriesSupport) {
        model.apply_cuspidal_support()?;
    }
    if opts.on(Family::Dudas) && !model.is_resolved() {
        model.run_dudas()?;
    }
    Ok(model)
}

pub fn solve(m: usize, case: EllCase) -> Result<Solution, SolveError> {
    solve_with(m, case, &Options::default())
}

pub fn solve_with(m: usize, case: EllCase, opts: &Options) -> Result<Solution, SolveError> {
    let model = run(m, case, opts)?;
    let Some(entries) = model.matrix() else {
        let open = model.unresolved().into_iter().map(|(i, j, iv)| format!("{} ∈ {iv}", model.describe_cell(i, j))).collect();
        return Err(SolveError::Unresolved(open));
    };
    let named = named_cells(m).into_iter().map(|(u, cells)| (u, entries[cells[0].0][cells[0].1].clone())).collect();
    let relations = if opts.on(Family::Relations) { relation_rows(m, case)? } else { vec![] };
    let mut contributions = BTreeMap::new();
    for t in &model.log {
        *contributions.entry(t.family).or_insert(0) += 1;
    }
    let mut sol = Solution {
        m,
        case,
        mode: opts.mode,
        rows: model.rows.clone(),
        columns: model.columns.clone(),
        tags: model.tags.clone(),
        entries,
        named,
        multiplicities: vec![],
        psi: model.psi.clone(),
        dudas: model
            .dudas
            .iter()
            .map(|d| DudasStep { pairing: rename_cells(m, &d.pairing), imposed: rename_cells(m, &d.imposed), ..d.clone() })
            .collect(),
        relations,
        contributions,
        audit: vec![],
        log: model.log.clone(),
        notes: model.notes.clone(),
    };
    let (mults, checks) = audit(&sol, &model, opts);
    sol.multiplicities = mults;
    sol.audit = checks;
    if let Some(bad) = sol.audit.iter().find(|a| !a.passed) {
        return Err(SolveError::Audit(format!("{}: {}", bad.name, bad.detail)));
    }
    Ok(sol)
}

fn audit(sol: &Solution, model: &DecModel, opts: &Options) -> (Vec<Vec<Affine>>, Vec<AuditCheck>) {
    let n = sol.entries.len();
    let m_min = model.m_min;
    let nonneg = |a: &Affine| le(&Affine::zero(), a, m_min);
    let d = &sol.entries;
    let mut checks = vec![];

    // (i) Ψ = Σ a[k,j]·Φⱼ with a ≥ 0 and a[k,k] = 1
    let mut mults = vec![vec![Affine::zero(); n]; n];
    let mut fail = None;
    for (k, col) in sol.psi.iter().enumerate() {
        let mut res = col.values.clone();
        for j in k..n {
            let a = res[j].clone();
            if !nonneg(&a) || (j == k && a != Affine::constant(1)) {
                fail.get_or_insert(format!("{} has coefficient {a} on Φ{}", col.name, j + 1));
            }
            if opts.on(Family::SeriesSupport) && !a.is_zero() && j != k {
                if let Some(t) = &col.series {
                    if !t.same_series(&sol.tags[j]) {
                        fail.get_or_insert(format!("{} meets Φ{} outside its series", col.name, j + 1));
                    }
                }
            }
            for (i, r) in res.iter_mut().enumerate() {
                match a.checked_mul(&d[i][j]) {
                    Some(p) => *r = r.clone() - p,
                    None => {
                        fail.get_or_insert(format!("{} is not affine", col.name));
                    }
                }
            }
            mults[k][j] = a;
        }
        if res.iter().any(|r| !r.is_zero()) {
            fail.get_or_insert(format!("{} leaves a residual", col.name));
        }
    }
    checks.push(AuditCheck {
        name: "projective expansions".into(),
        passed: fail.is_none(),
        detail: fail.unwrap_or_else(|| format!("{} columns expand with nonnegative multiplicities", sol.psi.len())),
    });

    // (ii) relation rows pair nonnegatively with every column
    let mut fail = None;
    for r in &sol.relations {
        let cols: Vec<usize> = r.column.map_or((0..n).collect(), |j| vec![j]);
        for j in cols {
            let s = (0..n).fold(Affine::zero(), |acc, i| acc + d[i][j].scale(r.coeffs[i]));
            if !le(&Affine::constant(r.bound), &s, m_min) {
                fail.get_or_insert(format!("{} at {} gives {s}", r.name, sol.columns[j]));
            }
        }
    }
    checks.push(AuditCheck {
        name: "relation expansions".into(),
        passed: fail.is_none(),
        detail: fail.unwrap_or_else(|| format!("{} relation rows nonnegative", sol.relations.len())),
    });

    // (iii) the sign bounds hold at the solution
    let values: BTreeMap<Unknown, Affine> = sol.named.iter().cloned().collect();
    let mut fail = None;
    for step in &sol.dudas {
        let v = step.pairing.substitute(&|u| values.get(&u).cloned()).scale(step.sign());
        if v.unknowns().any(|u| u != Unknown::M) || !nonneg(&v) {
            fail.get_or_insert(format!("w = {} gives {v}", word_string(&step.word)));
        }
    }
    checks.push(AuditCheck {
        name: "sign bounds".into(),
        passed: fail.is_none(),
        detail: fail.unwrap_or_else(|| format!("{} sign bounds hold", sol.dudas.len())),
    });
    (mults, checks)
}

/// Families whose removal leaves an entry open.
pub fn load_bearing(m: usize, case: EllCase) -> Result<Vec<(Family, bool)>, SolveError> {
    Family::ABLATABLE
        .into_iter()
        .map(|f| match solve_with(m, case, &Options::without(f)) {
            Ok(_) => Ok((f, false)),
            Err(SolveError::Unresolved(_)) => Ok((f, true)),
            Err(e) => Err(e),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(sol: &Solution) -> Vec<(Unknown, i64)> {
        sol.named.iter().map(|(u, v)| (*u, v.as_constant().unwrap())).collect()
    }

    #[test]
    fn skeleton() {
        let m3 = build_model(3, EllCase::Large).unwrap();
        assert_eq!(m3.size(), 10);
        assert_eq!(m3.entry(0, 0), Interval::point(Affine::constant(1)));
        assert_eq!(m3.entry(0, 4), Interval::point(Affine::zero()));
        assert_eq!(m3.entry(4, 0).to_string(), "[0, ∞)");
        assert_eq!(build_model(2, EllCase::Case3).unwrap().size(), 5);
        assert!(build_model(4, EllCase::Case3).is_err());
    }

    #[test]
    fn rank2_cases() {
        for case in EllCase::ALL {
            let sol = solve(2, case).unwrap();
            assert_eq!(named(&sol), theorem_values(2, case), "{case}");
            let table = published_matrix(2);
            let alpha = theorem_values(2, case)[0].1;
            for (i, row) in table.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let v = v.substitute(&|u| (u == Unknown::Alpha).then(|| Affine::constant(alpha)));
                    assert_eq!(sol.entries[i][j], v);
                }
            }
        }
    }

    #[test]
    fn rank3_cases() {
        for case in EllCase::ALL {
            let sol = solve(3, case).unwrap();
            assert_eq!(named(&sol), theorem_values(3, case), "{case}");
            assert!(sol.audit_passed());
        }
    }

    #[test]
    fn sign_bound_steps() {
        let sol = solve(3, EllCase::Large).unwrap();
        let got: Vec<String> = sol.dudas.iter().map(|d| d.pairing.to_string()).collect();
        assert_eq!(got, ["2γ-4", "2β-2γ-2"]);
        assert_eq!(sol.multiplicities[7][9].to_string(), "m-3");
        assert!(solve(3, EllCase::Case3).unwrap().dudas.is_empty());
        let s2 = solve(2, EllCase::Large).unwrap();
        assert_eq!(s2.dudas.iter().map(|d| d.pairing.to_string()).collect::<Vec<_>>(), ["-α+2"]);
    }

    #[test]
    fn verify_mode() {
        for m in [2, 3] {
            for case in EllCase::ALL {
                let sol = solve_with(m, case, &Options { mode: Mode::Verify, disabled: BTreeSet::new() }).unwrap();
                assert_eq!(named(&sol), theorem_values(m, case));
            }
        }
    }

    #[test]
    fn every_family_bears_load() {
        for (f, needed) in load_bearing(3, EllCase::Large).unwrap() {
            assert!(needed, "{f}");
        }
        let case3 = load_bearing(3, EllCase::Case3).unwrap();
        assert!(!case3.iter().find(|(f, _)| *f == Family::Dudas).unwrap().1);
    }

    #[test]
    fn every_subset_of_families_is_sound() {
        for case in EllCase::ALL {
            let truth = solve(3, case).unwrap().entries;
            for mask in 0..16u8 {
                let disabled = Family::ABLATABLE.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, f)| *f).collect();
                let model = run(3, case, &Options { mode: Mode::Derive, disabled }).unwrap();
                let m0 = case.m_min();
                for (i, row) in truth.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        let iv = model.entry(i, j);
                        assert!(at(&iv.lo, m0) <= at(v, m0), "{case} mask {mask}: ({i},{j})");
                        assert!(iv.hi.as_ref().is_none_or(|h| at(v, m0) <= at(h, m0)), "{case} mask {mask}: ({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn interval_display() {
        let iv = Interval { lo: Affine::constant(3), hi: Some(Affine::m()) };
        assert_eq!(iv.to_string(), "[3, m]");
        assert_eq!(Interval::point(Affine::constant(2)).to_string(), "2");
    }
}
