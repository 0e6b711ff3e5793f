//! Unipotent character labels [α, β, d] of SO₅/Sp₄ (m = 2) and SO₇/Sp₆
//! (m = 3): symbols, degrees, families and block distribution.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::polyq::{cyclo_product, rat, PolyQ};
use crate::weyl::{Bipartition, Partition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnipotentError {
    #[error("rank {0} is not supported (expected 2 or 3)")]
    UnsupportedRank(usize),
    #[error("{0} is not a unipotent label of rank {1}")]
    UnknownLabel(String, usize),
    #[error("cannot parse label `{0}`")]
    Parse(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UniLabel {
    pub alpha: Partition,
    pub beta: Partition,
    pub defect: u8,
}

/// Two-row symbol, rows increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub top: Vec<u8>,
    pub bottom: Vec<u8>,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |r: &[u8]| {
            if r.is_empty() {
                "-".to_string()
            } else {
                r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
            }
        };
        write!(f, "({} / {})", row(&self.top), row(&self.bottom))
    }
}

impl UniLabel {
    pub fn new(alpha: Partition, beta: Partition, defect: u8) -> Self {
        UniLabel { alpha, beta, defect }
    }

    pub fn principal(bp: &Bipartition) -> Self {
        UniLabel::new(bp.alpha.clone(), bp.beta.clone(), 1)
    }

    pub fn bipartition(&self) -> Bipartition {
        Bipartition::new(self.alpha.clone(), self.beta.clone())
    }

    /// Rank of the group the label belongs to: |α| + |β| + (d² − 1)/4.
    pub fn rank(&self) -> usize {
        let d = self.defect as usize;
        self.alpha.size() + self.beta.size() + (d * d - 1) / 4
    }

    /// Shortest symbol: rows of lengths k + d and k.
    pub fn symbol(&self) -> Symbol {
        let d = self.defect as usize;
        let k = self.beta.len().max(self.alpha.len().saturating_sub(d));
        let row = |p: &Partition, len: usize| -> Vec<u8> {
            let mut parts: Vec<u8> = p.parts().to_vec();
            parts.resize(len, 0);
            parts.reverse();
            parts.iter().enumerate().map(|(i, &x)| x + i as u8).collect()
        };
        Symbol { top: row(&self.alpha, k + d), bottom: row(&self.beta, k) }
    }

    pub fn from_symbol(s: &Symbol) -> Option<UniLabel> {
        if s.top.len() < s.bottom.len() || (s.top.len() - s.bottom.len()).is_multiple_of(2) {
            return None;
        }
        let part = |r: &[u8]| -> Option<Partition> {
            if r.windows(2).any(|w| w[0] >= w[1]) {
                return None;
            }
            let v: Option<Vec<u8>> = r.iter().enumerate().map(|(i, &x)| x.checked_sub(i as u8)).collect();
            Some(Partition::new(v?))
        };
        Some(UniLabel::new(part(&s.top)?, part(&s.bottom)?, (s.top.len() - s.bottom.len()) as u8))
    }
}

impl fmt::Display for UniLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.alpha, self.beta, self.defect)
    }
}

impl FromStr for UniLabel {
    type Err = UnipotentError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || UnipotentError::Parse(s.to_string());
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        let fields: Vec<&str> = body.split(',').map(str::trim).collect();
        let [a, b, d] = fields.as_slice() else {
            return Err(err());
        };
        let d: u8 = d.parse().map_err(|_| err())?;
        if d.is_multiple_of(2) {
            return Err(err());
        }
        Ok(UniLabel::new(a.parse().map_err(|_| err())?, b.parse().map_err(|_| err())?, d))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockKind {
    Principal,
    Cyclic,
    Defect0,
}

/// Ordinary Harish-Chandra series of a unipotent character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrdinarySeries {
    Principal,
    /// Series of the cuspidal [−,−,3] of a B₂ Levi.
    B2Cuspidal,
    Cuspidal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    /// Indices into the label list.
    pub members: Vec<usize>,
    pub special: usize,
}

#[derive(Clone, Debug)]
pub struct UniCharSet {
    pub m: usize,
    pub labels: Vec<UniLabel>,
    pub degrees: Vec<PolyQ>,
    pub families: Vec<Family>,
    pub blocks: Vec<BlockKind>,
    pub hc_tag: Vec<OrdinarySeries>,
}

struct Row {
    label: &'static str,
    num: i64,
    den: i64,
    qexp: usize,
    factors: &'static [(u32, u32)],
    block: BlockKind,
}

const fn row(label: &'static str, num: i64, den: i64, qexp: usize, factors: &'static [(u32, u32)], block: BlockKind) -> Row {
    Row { label, num, den, qexp, factors, block }
}

use BlockKind::*;

/// Table 1, principal-block rows first in the order of the rank-2
/// decomposition matrix.
const RANK2: [Row; 6] = [
    row("[2,-,1]", 1, 1, 0, &[], Principal),
    row("[-,-,3]", 1, 2, 1, &[(1, 2)], Principal),
    row("[1^2,-,1]", 1, 2, 1, &[(4, 1)], Principal),
    row("[-,2,1]", 1, 2, 1, &[(4, 1)], Principal),
    row("[-,1^2,1]", 1, 1, 4, &[], Principal),
    row("[1,1,1]", 1, 2, 1, &[(2, 2)], Defect0),
];

/// Table 2, principal-block rows first in the order of the rank-3
/// decomposition matrix.
const RANK3: [Row; 12] = [
    row("[3,-,1]", 1, 1, 0, &[], Principal),
    row("[2,1,1]", 1, 2, 1, &[(3, 1), (4, 1)], Principal),
    row("[-,3,1]", 1, 2, 1, &[(4, 1), (6, 1)], Principal),
    row("[1,-,3]", 1, 2, 1, &[(1, 2), (3, 1)], Principal),
    row("[1,2,1]", 1, 1, 2, &[(3, 1), (6, 1)], Principal),
    row("[1^2,1,1]", 1, 1, 3, &[(3, 1), (6, 1)], Principal),
    row("[1,1^2,1]", 1, 2, 4, &[(3, 1), (4, 1)], Principal),
    row("[1^3,-,1]", 1, 2, 4, &[(4, 1), (6, 1)], Principal),
    row("[-,1,3]", 1, 2, 4, &[(1, 2), (3, 1)], Principal),
    row("[-,1^3,1]", 1, 1, 9, &[], Principal),
    row("[21,-,1]", 1, 2, 1, &[(2, 2), (6, 1)], Cyclic),
    row("[-,21,1]", 1, 2, 4, &[(2, 2), (6, 1)], Cyclic),
];

/// Families as (members, special), by label text.
const FAMILIES2: &[(&[&str], &str)] =
    &[(&["[2,-,1]"], "[2,-,1]"), (&["[1,1,1]", "[1^2,-,1]", "[-,2,1]", "[-,-,3]"], "[1,1,1]"), (&["[-,1^2,1]"], "[-,1^2,1]")];

const FAMILIES3: &[(&[&str], &str)] = &[
    (&["[3,-,1]"], "[3,-,1]"),
    (&["[2,1,1]", "[-,3,1]", "[1,-,3]", "[21,-,1]"], "[2,1,1]"),
    (&["[1,2,1]"], "[1,2,1]"),
    (&["[1^2,1,1]"], "[1^2,1,1]"),
    (&["[1,1^2,1]", "[1^3,-,1]", "[-,1,3]", "[-,21,1]"], "[1,1^2,1]"),
    (&["[-,1^3,1]"], "[-,1^3,1]"),
];

fn build(m: usize) -> UniCharSet {
    let (rows, fams): (&[Row], _) = match m {
        2 => (&RANK2, FAMILIES2),
        _ => (&RANK3, FAMILIES3),
    };
    let labels: Vec<UniLabel> = rows.iter().map(|r| r.label.parse().unwrap()).collect();
    let pos = |s: &str| {
        let l: UniLabel = s.parse().unwrap();
        labels.iter().position(|x| *x == l).unwrap()
    };
    let families =
        fams.iter().map(|(members, special)| Family { members: members.iter().map(|s| pos(s)).collect(), special: pos(special) }).collect();
    let hc_tag = labels
        .iter()
        .map(|l| match (l.defect, m) {
            (1, _) => OrdinarySeries::Principal,
            (_, 2) => OrdinarySeries::Cuspidal,
            _ => OrdinarySeries::B2Cuspidal,
        })
        .collect();
    UniCharSet {
        m,
        degrees: rows.iter().map(|r| cyclo_product(rat(r.num, r.den), r.qexp, r.factors)).collect(),
        blocks: rows.iter().map(|r| r.block).collect(),
        labels,
        families,
        hc_tag,
    }
}

/// The unipotent characters of rank m ∈ {2, 3}.
pub fn enumerate(m: usize) -> Result<&'static UniCharSet, UnipotentError> {
    static CACHE: [OnceLock<UniCharSet>; 2] = [OnceLock::new(), OnceLock::new()];
    match m {
        2 | 3 => Ok(CACHE[m - 2].get_or_init(|| build(m))),
        _ => Err(UnipotentError::UnsupportedRank(m)),
    }
}

impl UniCharSet {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index(&self, label: &UniLabel) -> Result<usize, UnipotentError> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| UnipotentError::UnknownLabel(label.to_string(), self.m))
    }

    /// Index of a label given as text, e.g. `"[1^2,1,1]"`.
    pub fn find(&self, text: &str) -> Result<usize, UnipotentError> {
        self.index(&text.parse()?)
    }

    pub fn degree(&self, label: &UniLabel) -> Result<&PolyQ, UnipotentError> {
        Ok(&self.degrees[self.index(label)?])
    }

    pub fn block_distribution(&self) -> Vec<(UniLabel, BlockKind)> {
        self.labels.iter().cloned().zip(self.blocks.iter().copied()).collect()
    }

    /// Principal-block labels in decomposition-matrix row order.
    pub fn principal_block(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.blocks[i] == BlockKind::Principal).collect()
    }

    pub fn family_of(&self, i: usize) -> usize {
        self.families.iter().position(|f| f.members.contains(&i)).unwrap()
    }

    pub fn steinberg(&self) -> usize {
        self.find(&format!("[-,1^{},1]", self.m)).unwrap()
    }
}

pub fn degree(m: usize, label: &UniLabel) -> Result<PolyQ, UnipotentError> {
    enumerate(m)?.degree(label).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyq::{int, order_p_prime, Rational};
    use crate::weyl::weyl_group;
    use std::collections::BTreeMap;

    fn l(s: &str) -> UniLabel {
        s.parse().unwrap()
    }

    #[test]
    fn counts_and_examples() {
        assert_eq!(enumerate(2).unwrap().len(), 6);
        assert_eq!(enumerate(3).unwrap().len(), 12);
        assert!(enumerate(4).is_err());
        let phi = |i| crate::polyq::cyclotomic(i).unwrap();
        assert_eq!(degree(3, &l("[1,2,1]")).unwrap(), PolyQ::monomial(int(1), 2) * phi(3) * phi(6));
        assert_eq!(degree(3, &l("[3,-,1]")).unwrap(), PolyQ::one());
        assert_eq!(degree(2, &l("[-,2,1]")).unwrap(), PolyQ::monomial(rat(1, 2), 1) * phi(4));
        assert!(degree(2, &l("[3,-,1]")).is_err());
    }

    #[test]
    fn symbols_match_tables() {
        let cases = [
            ("[2,-,1]", "(2 / -)"),
            ("[1,1,1]", "(0 2 / 1)"),
            ("[-,-,3]", "(0 1 2 / -)"),
            ("[-,2,1]", "(0 1 / 2)"),
            ("[1^2,-,1]", "(1 2 / 0)"),
            ("[-,1^2,1]", "(0 1 2 / 1 2)"),
            ("[2,1,1]", "(0 3 / 1)"),
            ("[-,3,1]", "(0 1 / 3)"),
            ("[21,-,1]", "(1 3 / 0)"),
            ("[1,-,3]", "(0 1 3 / -)"),
            ("[1,2,1]", "(0 2 / 2)"),
            ("[1^2,1,1]", "(1 2 / 1)"),
            ("[1,1^2,1]", "(0 1 3 / 1 2)"),
            ("[-,21,1]", "(0 1 2 / 1 3)"),
            ("[1^3,-,1]", "(1 2 3 / 0 1)"),
            ("[-,1,3]", "(0 1 2 3 / 1)"),
            ("[-,1^3,1]", "(0 1 2 3 / 1 2 3)"),
        ];
        for (lab, sym) in cases {
            let s = l(lab).symbol();
            assert_eq!(s.to_string(), sym, "{lab}");
            assert_eq!(UniLabel::from_symbol(&s).unwrap(), l(lab));
        }
    }

    #[test]
    fn label_parsing() {
        assert_eq!(l("[1²,-,1]"), l("[11,-,1]"));
        assert_eq!(l("[2 1,-,1]").to_string(), "[21,-,1]");
        assert!("[1,1]".parse::<UniLabel>().is_err());
        assert!("[1,1,2]".parse::<UniLabel>().is_err());
    }

    #[test]
    fn ranks_and_bijection() {
        for m in [2, 3] {
            let s = enumerate(m).unwrap();
            assert!(s.labels.iter().all(|x| x.rank() == m));
            let mut bips: Vec<Bipartition> = s.labels.iter().filter(|x| x.defect == 1).map(|x| x.bipartition()).collect();
            bips.sort();
            let mut all = Bipartition::all(m);
            all.sort();
            assert_eq!(bips, all);
        }
    }

    #[test]
    fn principal_series_degrees_square_sum() {
        for m in [2, 3] {
            let s = enumerate(m).unwrap();
            let w = weyl_group(m).unwrap();
            let total: u64 = s.labels.iter().filter(|x| x.defect == 1).map(|x| x.bipartition().degree().pow(2)).sum();
            assert_eq!(total as usize, w.order());
        }
    }

    #[test]
    fn degrees_positive_and_steinberg() {
        for m in [2, 3] {
            let s = enumerate(m).unwrap();
            for d in &s.degrees {
                for q0 in 2..6 {
                    assert!(d.eval_at(&int(q0)) > Rational::from_integer(0.into()));
                }
            }
            assert_eq!(s.degrees[s.steinberg()], PolyQ::monomial(int(1), m * m));
        }
    }

    /// Generic degree of a symbol of rank n (type B), used as an
    /// independent check on the transcribed tables.
    fn symbol_degree(sym: &Symbol, n: usize) -> PolyQ {
        let qp = |k: usize| PolyQ::monomial(int(1), k);
        let mut num = order_p_prime(n);
        for row in [&sym.top, &sym.bottom] {
            for (a, &x) in row.iter().enumerate() {
                for &y in &row[a + 1..] {
                    num = num * (qp(y as usize) - qp(x as usize));
                }
            }
        }
        for &x in &sym.top {
            for &y in &sym.bottom {
                num = num * (qp(x as usize) + qp(y as usize));
            }
        }
        let total = sym.top.len() + sym.bottom.len();
        let mut qexp = 0;
        let mut k = total as i64 - 2;
        while k >= 2 {
            qexp += (k * (k - 1) / 2) as usize;
            k -= 2;
        }
        let mut den = PolyQ::monomial(int(1 << ((total - 1) / 2)), qexp);
        for &x in sym.top.iter().chain(&sym.bottom) {
            for h in 1..=x as usize {
                den = den * crate::polyq::q_pow_minus_one(2 * h);
            }
        }
        num.div_exact(&den).expect("generic degree divides")
    }

    #[test]
    fn degrees_agree_with_symbol_formula() {
        for m in [2, 3] {
            let s = enumerate(m).unwrap();
            for (lab, d) in s.labels.iter().zip(&s.degrees) {
                assert_eq!(&symbol_degree(&lab.symbol(), m), d, "{lab}");
            }
        }
    }

    /// Entries of a symbol after padding to a common number of entries.
    fn entry_multiset(sym: &Symbol, total: usize) -> Vec<u8> {
        let mut top = sym.top.clone();
        let mut bottom = sym.bottom.clone();
        while top.len() + bottom.len() < total {
            top = std::iter::once(0).chain(top.iter().map(|x| x + 1)).collect();
            bottom = std::iter::once(0).chain(bottom.iter().map(|x| x + 1)).collect();
        }
        let mut v: Vec<u8> = top.into_iter().chain(bottom).collect();
        v.sort();
        v
    }

    #[test]
    fn families_are_entry_multisets() {
        for (m, sizes) in [(2, vec![1, 4, 1]), (3, vec![1, 4, 1, 1, 4, 1])] {
            let s = enumerate(m).unwrap();
            let got: Vec<usize> = s.families.iter().map(|f| f.members.len()).collect();
            assert_eq!(got, sizes);
            let mut groups: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
            for (i, lab) in s.labels.iter().enumerate() {
                groups.entry(entry_multiset(&lab.symbol(), 2 * m + 3)).or_default().push(i);
            }
            let mut oracle: Vec<Vec<usize>> = groups.into_values().collect();
            let mut data: Vec<Vec<usize>> = s
                .families
                .iter()
                .map(|f| {
                    let mut v = f.members.clone();
                    v.sort();
                    v
                })
                .collect();
            oracle.sort();
            data.sort();
            assert_eq!(oracle, data);
            for f in &s.families {
                assert!(f.members.contains(&f.special));
                if f.members.len() == 1 {
                    assert_eq!(s.blocks[f.members[0]], BlockKind::Principal);
                }
            }
        }
        let s = enumerate(3).unwrap();
        let fam = &s.families[s.family_of(s.find("[2,1,1]").unwrap())];
        let names: Vec<String> = fam.members.iter().map(|&i| s.labels[i].to_string()).collect();
        assert_eq!(names, ["[2,1,1]", "[-,3,1]", "[1,-,3]", "[21,-,1]"]);
    }

    #[test]
    fn block_distribution_examples() {
        let s3 = enumerate(3).unwrap();
        assert_eq!(s3.blocks[s3.find("[-,1^3,1]").unwrap()], BlockKind::Principal);
        assert_eq!(s3.blocks[s3.find("[21,-,1]").unwrap()], BlockKind::Cyclic);
        assert_eq!(s3.principal_block().len(), 10);
        let s2 = enumerate(2).unwrap();
        assert_eq!(s2.blocks[s2.find("[1,1,1]").unwrap()], BlockKind::Defect0);
        assert_eq!(s2.principal_block().len(), 5);
    }
}
