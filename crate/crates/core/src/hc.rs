//! Harish-Chandra induction of unipotent characters from standard Levi
//! subgroups and the projective characters Ψᵢ built from it.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::affine::Affine;
use crate::blocks::{gg_part, induced_pim_parts, parabolic_pim_so5};
use crate::lusztig::{AffineChar, LusztigError, VirtualUniChar};
use crate::polyq::{int, EllCase, Rational};
use crate::unipotent::{enumerate, BlockKind, UniLabel, UnipotentError};
use crate::weyl::{symmetric_character, weyl_group, Bipartition, ParabolicSubset, Partition, SignedPerm, WeylError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HcError {
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Unipotent(#[from] UnipotentError),
    #[error(transparent)]
    Lusztig(#[from] LusztigError),
    #[error("{label} is not a unipotent label of the Levi subgroup for J = {j}")]
    LabelNotInLevi { label: String, j: String },
    #[error("the rank-3 projective columns need the solved rank-2 decomposition matrix")]
    MissingLeviMatrix,
    #[error("rank {0} is not supported")]
    UnsupportedRank(usize),
}

/// Unipotent character of a standard Levi L_J: a label of the type-B
/// factor (rank b = J.b_rank()) and a partition per type-A factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviLabel {
    pub b: UniLabel,
    pub a: Vec<Partition>,
}

impl LeviLabel {
    pub fn new(b: UniLabel, a: Vec<Partition>) -> Self {
        LeviLabel { b, a }
    }

    /// Label of a Levi whose only factor is of type B.
    pub fn b_only(b: UniLabel) -> Self {
        LeviLabel { b, a: vec![] }
    }

    pub fn trivial(j: &ParabolicSubset) -> Self {
        let b = j.b_rank() as u8;
        let alpha = if b == 0 { Partition::empty() } else { Partition::new(vec![b]) };
        LeviLabel {
            b: UniLabel::new(alpha, Partition::empty(), 1),
            a: j.a_blocks().iter().map(|r| Partition::new(vec![r.len() as u8])).collect(),
        }
    }

    pub fn steinberg(j: &ParabolicSubset) -> Self {
        let b = j.b_rank();
        LeviLabel {
            b: UniLabel::new(Partition::empty(), Partition::new(vec![1; b]), 1),
            a: j.a_blocks().iter().map(|r| Partition::new(vec![1; r.len()])).collect(),
        }
    }
}

impl fmt::Display for LeviLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.b)?;
        for p in &self.a {
            write!(f, "⊠{p}")?;
        }
        Ok(())
    }
}

/// Standard Levi subgroup data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviDatum {
    pub j: ParabolicSubset,
    pub levi_rank_b: usize,
    pub a_blocks: Vec<std::ops::Range<usize>>,
}

impl LeviDatum {
    pub fn new(m: usize, j: ParabolicSubset) -> Result<Self, HcError> {
        j.check(m)?;
        Ok(LeviDatum { levi_rank_b: j.b_rank(), a_blocks: j.a_blocks(), j })
    }

    fn validate(&self, label: &LeviLabel) -> Result<(), HcError> {
        let bad = || HcError::LabelNotInLevi { label: label.to_string(), j: self.j.to_string() };
        if label.b.rank() != self.levi_rank_b || label.a.len() != self.a_blocks.len() {
            return Err(bad());
        }
        if label.a.iter().zip(&self.a_blocks).any(|(p, r)| p.size() != r.len()) {
            return Err(bad());
        }
        Ok(())
    }

    /// Character of W_J attached to a principal-series Levi label.
    fn weyl_character(&self, label: &LeviLabel) -> impl Fn(&SignedPerm) -> Rational + '_ {
        let b = self.levi_rank_b;
        let bp = label.b.bipartition();
        let parts = label.a.clone();
        move |x: &SignedPerm| {
            let mut v = if b == 0 {
                Rational::one()
            } else {
                let wb = weyl_group(b).unwrap();
                wb.character_value(&bp, &x.restrict(0..b).unwrap()).unwrap()
            };
            for (p, r) in parts.iter().zip(&self.a_blocks) {
                let y = x.restrict(r.clone()).unwrap();
                let (pos, _) = y.cycle_type();
                v *= int(symmetric_character(p, pos.parts()));
            }
            v
        }
    }
}

fn is_b2_cuspidal(l: &UniLabel) -> bool {
    l.defect == 3 && l.alpha.is_empty() && l.beta.is_empty()
}

/// R_{L_J}^G of a unipotent character of L_J, in the unipotent basis of G.
pub fn hc_induce(m: usize, j: &ParabolicSubset, label: &LeviLabel) -> Result<VirtualUniChar, HcError> {
    let datum = LeviDatum::new(m, j.clone())?;
    let set = enumerate(m)?;
    datum.validate(label)?;
    if j == &ParabolicSubset::full(m) {
        return Ok(VirtualUniChar::unit(m, set.index(&label.b)?));
    }
    if is_b2_cuspidal(&label.b) {
        // relative Weyl group of type B₁: both of its characters, once each
        if m == 3 && label.a.is_empty() {
            let mut v = VirtualUniChar::zero(3);
            v.coeffs[set.find("[1,-,3]")?] = Rational::one();
            v.coeffs[set.find("[-,1,3]")?] = Rational::one();
            return Ok(v);
        }
        return Err(HcError::LabelNotInLevi { label: label.to_string(), j: j.to_string() });
    }
    if label.b.defect != 1 {
        return Err(HcError::LabelNotInLevi { label: label.to_string(), j: j.to_string() });
    }
    let w = weyl_group(m)?;
    let chi = datum.weyl_character(label);
    let ind = w.induce_from_parabolic(j, &chi)?;
    let mut v = VirtualUniChar::zero(m);
    for (bp, mult) in w.decompose(&ind) {
        if !mult.is_zero() {
            v.coeffs[set.index(&UniLabel::principal(&bp))?] = mult;
        }
    }
    Ok(v)
}

/// Harish-Chandra series of a modular character: a Levi J together with
/// the name of its cuspidal module.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeriesTag {
    pub levi: ParabolicSubset,
    pub cuspidal: &'static str,
    /// Display name in the decomposition-matrix header.
    pub name: &'static str,
}

impl SeriesTag {
    pub fn new(levi: &[usize], cuspidal: &'static str, name: &'static str) -> Self {
        SeriesTag { levi: ParabolicSubset::new(levi.iter().copied()), cuspidal, name }
    }

    pub fn same_series(&self, other: &SeriesTag) -> bool {
        self.levi == other.levi && self.cuspidal == other.cuspidal
    }
}

impl fmt::Display for SeriesTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name)
    }
}

/// Column tags of the decomposition matrices (header rows of the tables).
pub fn column_tags(m: usize) -> Vec<SeriesTag> {
    match m {
        2 => vec![
            SeriesTag::new(&[], "1", "ps"),
            SeriesTag::new(&[1, 2], "η", "c"),
            SeriesTag::new(&[2], "St", "Ã1"),
            SeriesTag::new(&[1], "St", "A1"),
            SeriesTag::new(&[1, 2], "St", "c"),
        ],
        _ => vec![
            SeriesTag::new(&[], "1", "ps"),
            SeriesTag::new(&[], "1", "ps"),
            SeriesTag::new(&[1], "St", "A1"),
            SeriesTag::new(&[1, 2], "η", "[B2,η]"),
            SeriesTag::new(&[1, 3], "St", "A1×A1'"),
            SeriesTag::new(&[2], "St", "A1'"),
            SeriesTag::new(&[1, 2], "St", "[B2,St]"),
            SeriesTag::new(&[1, 2, 3], "c8", "c"),
            SeriesTag::new(&[1, 2, 3], "c9", "c"),
            SeriesTag::new(&[1, 2, 3], "St", "c"),
        ],
    }
}

/// PIM characters (unipotent parts) of the rank-2 Levi, with their series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviPims {
    pub columns: Vec<AffineChar>,
    pub tags: Vec<SeriesTag>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColumnSource {
    HcInduced { j: ParabolicSubset, from: String },
    Induced(&'static str),
    GelfandGraev,
}

impl fmt::Display for ColumnSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnSource::HcInduced { j, from } => write!(f, "R_L{j}({from})"),
            ColumnSource::Induced(s) => write!(f, "{s}"),
            ColumnSource::GelfandGraev => write!(f, "Gelfand-Graev"),
        }
    }
}

/// Projective character Ψ restricted to the principal block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjColumn {
    pub name: String,
    /// Entries in principal-block row order.
    pub values: Vec<Affine>,
    pub source: ColumnSource,
    /// Series of an HC-induced column.
    pub series: Option<SeriesTag>,
    /// Labels outside the principal block that were dropped.
    pub dropped: Vec<(UniLabel, Affine)>,
}

fn restrict_to_block(m: usize, v: &AffineChar) -> (Vec<Affine>, Vec<(UniLabel, Affine)>) {
    let set = enumerate(m).unwrap();
    let mut kept = vec![];
    let mut dropped = vec![];
    for (i, c) in v.coeffs.iter().enumerate() {
        if set.blocks[i] == BlockKind::Principal {
            kept.push(c.clone());
        } else if !c.is_zero() {
            dropped.push((set.labels[i].clone(), c.clone()));
        }
    }
    (kept, dropped)
}

fn column(m: usize, name: String, v: AffineChar, source: ColumnSource, series: Option<SeriesTag>) -> ProjColumn {
    let (values, dropped) = restrict_to_block(m, &v);
    ProjColumn { name, values, source, series, dropped }
}

/// R_L^G of a Levi character with affine coefficients, Levi of type B_b.
fn induce_affine(m: usize, j: &ParabolicSubset, v: &AffineChar) -> Result<AffineChar, HcError> {
    let lset = enumerate(v.rank)?;
    let mut out = AffineChar::zero(m);
    for (i, c) in v.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let r = hc_induce(m, j, &LeviLabel::b_only(lset.labels[i].clone()))?;
        out.add_scaled(&r, c)?;
    }
    Ok(out)
}

impl ProjColumn {
    /// Dropped constituents as "c·label" notes.
    pub fn dropped_notes(&self) -> Vec<String> {
        self.dropped
            .iter()
            .map(|(l, v)| {
                let c = if *v == Affine::constant(1) { String::new() } else { format!("{v}·") };
                format!("{}: dropped {c}{l} outside the principal block", self.name)
            })
            .collect()
    }
}

fn psi_name(k: usize) -> String {
    format!("Ψ{k}")
}

/// The projective characters Ψ₁…Ψ₅ (m = 2) or Ψ₁…Ψ₁₀ (m = 3).
pub fn psi_columns(m: usize, case: EllCase, levi: Option<&LeviPims>) -> Result<Vec<ProjColumn>, HcError> {
    match m {
        2 => {
            let empty = ParabolicSubset::empty();
            let long = ParabolicSubset::new([2]);
            let short = ParabolicSubset::new([1]);
            let tags = column_tags(2);
            let ind = |j: &ParabolicSubset, l: LeviLabel| -> Result<AffineChar, HcError> {
                hc_induce(2, j, &l)?.to_affine().ok_or(HcError::UnsupportedRank(2))
            };
            Ok(vec![
                column(
                    2,
                    psi_name(1),
                    ind(&empty, LeviLabel::trivial(&empty))?,
                    ColumnSource::HcInduced { j: empty.clone(), from: "Φ(1_T)".into() },
                    Some(tags[0].clone()),
                ),
                column(2, psi_name(2), parabolic_pim_so5(case), ColumnSource::Induced("Φ(ν1⁻)↑ from P5"), None),
                column(
                    2,
                    psi_name(3),
                    ind(&long, LeviLabel::steinberg(&long))?,
                    ColumnSource::HcInduced { j: long.clone(), from: "Φ(St)".into() },
                    Some(tags[2].clone()),
                ),
                column(
                    2,
                    psi_name(4),
                    ind(&short, LeviLabel::steinberg(&short))?,
                    ColumnSource::HcInduced { j: short.clone(), from: "Φ(St)".into() },
                    Some(tags[3].clone()),
                ),
                column(2, psi_name(5), gg_part(2)?, ColumnSource::GelfandGraev, None),
            ])
        }
        3 => {
            let levi = levi.ok_or(HcError::MissingLeviMatrix)?;
            let b2 = ParabolicSubset::new([1, 2]);
            let l13 = ParabolicSubset::new([1, 3]);
            let mut out = vec![];
            // Ψ₁…Ψ₇ except Ψ₅ come from these Levi PIM columns
            let from_levi = [(1, 0usize), (2, 5), (3, 3), (4, 1), (6, 2), (7, 4)];
            for k in 1..=7 {
                if k == 5 {
                    let st = hc_induce(3, &l13, &LeviLabel::steinberg(&l13))?;
                    out.push(column(
                        3,
                        psi_name(5),
                        st.to_affine().unwrap(),
                        ColumnSource::HcInduced { j: l13.clone(), from: "Φ(St⊠St')".into() },
                        Some(SeriesTag::new(&[1, 3], "St", "A1×A1'")),
                    ));
                    continue;
                }
                let &(_, c) = from_levi.iter().find(|(kk, _)| *kk == k).unwrap();
                let v = induce_affine(3, &b2, &levi.columns[c])?;
                out.push(column(
                    3,
                    psi_name(k),
                    v,
                    ColumnSource::HcInduced { j: b2.clone(), from: format!("⁵Φ{}", c + 1) },
                    Some(levi.tags[c].clone()),
                ));
            }
            let (p8, p9) = induced_pim_parts(case);
            out.push(column(3, psi_name(8), p8, ColumnSource::Induced("Φ(ξ1)↑ from P7"), None));
            out.push(column(3, psi_name(9), p9, ColumnSource::Induced("Φ(ξ2)↑ from P7"), None));
            out.push(column(3, psi_name(10), gg_part(3)?, ColumnSource::GelfandGraev, None));
            Ok(out)
        }
        _ => Err(HcError::UnsupportedRank(m)),
    }
}

/// Tag carried into rank 3 by the defect-zero character [1,1,1] of the
/// B₂ Levi; it lies in the principal series.
pub fn defect_zero_tag() -> SeriesTag {
    SeriesTag::new(&[], "1", "ps")
}

/// Bipartition-level Frobenius multiplicity ⟨Ind_{W_J}^W χ, χ'⟩.
pub fn weyl_multiplicity(m: usize, j: &ParabolicSubset, label: &LeviLabel, target: &Bipartition) -> Result<Rational, HcError> {
    let v = hc_induce(m, j, label)?;
    let set = enumerate(m)?;
    Ok(v.coeffs[set.index(&UniLabel::principal(target))?].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyq::int;
    use proptest::prelude::*;

    fn l(s: &str) -> UniLabel {
        s.parse().unwrap()
    }

    fn names(v: &VirtualUniChar) -> String {
        v.to_string()
    }

    /// PIMs of the rank-2 table with α = 1, plus [1,1,1].
    fn levi_pims(alpha: i64) -> LeviPims {
        let c = Affine::constant;
        let t = |terms: &[(&str, i64)]| AffineChar::from_terms(2, &terms.iter().map(|(s, k)| (*s, c(*k))).collect::<Vec<_>>()).unwrap();
        let mut tags = column_tags(2);
        tags.push(defect_zero_tag());
        LeviPims {
            columns: vec![
                t(&[("[2,-,1]", 1), ("[1^2,-,1]", 1), ("[-,2,1]", 1), ("[-,1^2,1]", 1)]),
                t(&[("[-,-,3]", 1), ("[-,1^2,1]", alpha)]),
                t(&[("[1^2,-,1]", 1), ("[-,1^2,1]", 1)]),
                t(&[("[-,2,1]", 1), ("[-,1^2,1]", 1)]),
                t(&[("[-,1^2,1]", 1)]),
                t(&[("[1,1,1]", 1)]),
            ],
            tags,
        }
    }

    #[test]
    fn worked_examples() {
        let b2 = ParabolicSubset::new([1, 2]);
        let st = hc_induce(3, &b2, &LeviLabel::b_only(l("[-,1^2,1]"))).unwrap();
        assert_eq!(names(&st), "[1,1^2,1] + [-,1^3,1] + [-,21,1]");
        let dz = hc_induce(3, &b2, &LeviLabel::b_only(l("[1,1,1]"))).unwrap();
        assert_eq!(names(&dz), "[2,1,1] + [1,2,1] + [1^2,1,1] + [1,1^2,1]");
        let c = hc_induce(3, &b2, &LeviLabel::b_only(l("[-,-,3]"))).unwrap();
        assert_eq!(names(&c), "[1,-,3] + [-,1,3]");
        let full = ParabolicSubset::full(3);
        let id = hc_induce(3, &full, &LeviLabel::b_only(l("[1,-,3]"))).unwrap();
        assert_eq!(names(&id), "[1,-,3]");
        assert!(hc_induce(3, &b2, &LeviLabel::b_only(l("[3,-,1]"))).is_err());
        assert!(hc_induce(3, &ParabolicSubset::new([1, 3]), &LeviLabel::b_only(l("[1,-,1]"))).is_err());
    }

    #[test]
    fn torus_induction_is_regular() {
        let empty = ParabolicSubset::empty();
        let r = hc_induce(3, &empty, &LeviLabel::trivial(&empty)).unwrap();
        let dl = crate::lusztig::lusztig(3).unwrap().dl_character(&[]).unwrap();
        assert_eq!(r, dl);
    }

    #[test]
    fn transitivity_through_b2() {
        let empty = ParabolicSubset::empty();
        let b2 = ParabolicSubset::new([1, 2]);
        let direct = hc_induce(3, &empty, &LeviLabel::trivial(&empty)).unwrap();
        let inner = hc_induce(2, &empty, &LeviLabel::trivial(&empty)).unwrap();
        let set2 = enumerate(2).unwrap();
        let mut staged = VirtualUniChar::zero(3);
        for (i, c) in inner.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let r = hc_induce(3, &b2, &LeviLabel::b_only(set2.labels[i].clone())).unwrap();
                staged = &staged + &r.scale(c);
            }
        }
        assert_eq!(staged, direct);
    }

    #[test]
    fn frobenius_reciprocity() {
        let w = weyl_group(3).unwrap();
        let j = ParabolicSubset::new([1, 3]);
        let st = LeviLabel::steinberg(&j);
        let sign = |x: &SignedPerm| int(if w.length(x).unwrap().is_multiple_of(2) { 1 } else { -1 });
        let ind = w.induce_from_parabolic(&j, &sign).unwrap();
        for (bp, mult) in w.decompose(&ind) {
            assert_eq!(weyl_multiplicity(3, &j, &st, &bp).unwrap(), mult);
        }
    }

    fn weyl_dim(bp: &Bipartition) -> i64 {
        let w = weyl_group(bp.alpha.size() + bp.beta.size()).unwrap();
        let row = w.char_index(bp).unwrap();
        crate::polyq::as_i64(&w.character_table().values[row][0]).unwrap()
    }

    proptest! {
        #[test]
        fn induced_degree_is_index_times_degree(mask in 0u8..8, pick in 0usize..64) {
            let j = ParabolicSubset::new((1..=3).filter(|s| mask >> (s - 1) & 1 == 1));
            let datum = LeviDatum::new(3, j.clone()).unwrap();
            let b = datum.levi_rank_b;
            let bps = if b == 0 { vec![Bipartition::new(Partition::empty(), Partition::empty())] } else { Bipartition::all(b) };
            let bp = &bps[pick % bps.len()];
            let parts: Vec<Partition> = datum.a_blocks.iter().map(|r| {
                let all = Partition::all(r.len());
                all[pick % all.len()].clone()
            }).collect();
            let label = LeviLabel::new(UniLabel::principal(bp), parts.clone());
            let levi_dim = if b == 0 { 1 } else { weyl_dim(bp) } * parts.iter().map(|p| p.dimension() as i64).product::<i64>();
            let index = (48 / weyl_group(3).unwrap().parabolic_elements(&j).unwrap().len()) as i64;
            let v = hc_induce(3, &j, &label).unwrap();
            let set = enumerate(3).unwrap();
            let total: i64 = set.labels.iter().enumerate().filter(|(_, l)| l.defect == 1)
                .map(|(i, l)| crate::polyq::as_i64(&v.coeffs[i]).unwrap() * weyl_dim(&l.bipartition())).sum();
            prop_assert_eq!(total, index * levi_dim);
        }
    }

    fn column_strings(cols: &[ProjColumn]) -> Vec<Vec<String>> {
        cols.iter().map(|c| c.values.iter().map(|v| v.to_string()).collect()).collect()
    }

    #[test]
    fn rank2_table() {
        let cols = psi_columns(2, EllCase::Large, None).unwrap();
        let got = column_strings(&cols);
        let want: Vec<Vec<&str>> = vec![
            vec!["1", "0", "1", "1", "1"],
            vec!["0", "1", "0", "0", "m"],
            vec!["0", "0", "1", "0", "1"],
            vec!["0", "0", "0", "1", "1"],
            vec!["0", "0", "0", "0", "1"],
        ];
        assert_eq!(got, want);
        assert_eq!(cols[0].dropped.len(), 1);
    }

    #[test]
    fn rank3_table() {
        let cols = psi_columns(3, EllCase::Case5, Some(&levi_pims(2))).unwrap();
        let got = column_strings(&cols);
        let rows: [[&str; 10]; 10] = [
            ["1", "0", "0", "0", "0", "0", "0", "0", "0", "0"],
            ["1", "1", "0", "0", "0", "0", "0", "0", "0", "0"],
            ["1", "0", "1", "0", "0", "0", "0", "0", "0", "0"],
            ["0", "0", "0", "1", "0", "0", "0", "0", "0", "0"],
            ["1", "1", "1", "0", "1", "0", "0", "0", "0", "0"],
            ["1", "1", "0", "0", "1", "1", "0", "0", "0", "0"],
            ["1", "1", "1", "2", "1", "1", "1", "0", "0", "0"],
            ["1", "0", "0", "0", "0", "1", "0", "1", "0", "0"],
            ["0", "0", "0", "1", "0", "0", "0", "0", "1", "0"],
            ["1", "0", "1", "2", "1", "1", "1", "2", "2", "1"],
        ];
        for (i, row) in rows.iter().enumerate() {
            for (k, want) in row.iter().enumerate() {
                assert_eq!(got[k][i], *want, "row {} column Ψ{}", i + 1, k + 1);
            }
        }
        assert!(psi_columns(3, EllCase::Case5, None).is_err());
    }

    #[test]
    fn unitriangular_columns() {
        for (m, levi) in [(2, None), (3, Some(levi_pims(1)))] {
            let cols = psi_columns(m, EllCase::Large, levi.as_ref()).unwrap();
            for (k, c) in cols.iter().enumerate() {
                assert!(c.values[..k].iter().all(|v| v.is_zero()));
                assert_eq!(c.values[k], Affine::constant(1));
                assert!(c.values.iter().all(|v| v.constant_part() >= 0 && v.terms().all(|(_, k)| k > 0)));
            }
        }
    }
}
