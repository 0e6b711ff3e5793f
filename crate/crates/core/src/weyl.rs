//! The hyperoctahedral groups W(B_m) as signed permutations, their
//! conjugacy classes, character tables and parabolic induction.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::polyq::{int, q_pow_minus_one, q_pow_plus_one, PolyQ, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error("rank {0} is not supported (expected 2 or 3)")]
    UnsupportedRank(usize),
    #[error("generator index {index} out of range 1..={rank}")]
    BadGenerator { index: usize, rank: usize },
    #[error("parabolic subset {0:?} is not contained in 1..={1}")]
    BadParabolic(Vec<usize>, usize),
    #[error("no bipartition {0} of {1}")]
    UnknownCharacter(String, usize),
    #[error("signed permutation has rank {found}, expected {expected}")]
    RankMismatch { expected: usize, found: usize },
}

/// A partition, parts weakly decreasing and positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u8>);

impl Partition {
    pub fn new(mut parts: Vec<u8>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(vec![])
    }

    pub fn parts(&self) -> &[u8] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All partitions of n, in reverse lexicographic order ((n) first).
    pub fn all(n: usize) -> Vec<Partition> {
        fn go(n: usize, max: usize, cur: &mut Vec<u8>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for k in (1..=n.min(max)).rev() {
                cur.push(k as u8);
                go(n - k, k, cur, out);
                cur.pop();
            }
        }
        let mut out = vec![];
        go(n, n, &mut vec![], &mut out);
        out
    }

    /// Number of standard tableaux, by the hook length formula.
    pub fn dimension(&self) -> u64 {
        let n = self.size();
        let mut hooks: u64 = 1;
        for (i, &row) in self.0.iter().enumerate() {
            for j in 0..row as usize {
                let arm = row as usize - j - 1;
                let leg = self.0[i + 1..].iter().filter(|&&r| r as usize > j).count();
                hooks *= (arm + leg + 1) as u64;
            }
        }
        (1..=n as u64).product::<u64>() / hooks
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "-");
        }
        let mut i = 0;
        while i < self.0.len() {
            let p = self.0[i];
            let run = self.0[i..].iter().take_while(|&&x| x == p).count();
            if run > 1 {
                write!(f, "{p}^{run}")?;
            } else {
                write!(f, "{p}")?;
            }
            i += run;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = String;
    /// Accepts `-`, `21`, `1^3`, `1³`, `111`.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "-" || s.is_empty() {
            return Ok(Partition::empty());
        }
        let sup = |c: char| "⁰¹²³⁴⁵⁶⁷⁸⁹".chars().position(|x| x == c);
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut parts = vec![];
        let mut i = 0;
        while i < chars.len() {
            let d = chars[i].to_digit(10).ok_or_else(|| format!("bad partition `{s}`"))? as u8;
            i += 1;
            let mut rep = 1usize;
            if i < chars.len() && chars[i] == '^' {
                let e: String = chars[i + 1..].iter().take_while(|c| c.is_ascii_digit()).collect();
                rep = e.parse().map_err(|_| format!("bad exponent in `{s}`"))?;
                i += 1 + e.len();
            } else if i < chars.len() && sup(chars[i]).is_some() {
                rep = sup(chars[i]).unwrap();
                i += 1;
            }
            parts.extend(std::iter::repeat_n(d, rep));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(format!("parts of `{s}` are not a partition"));
        }
        Ok(Partition(parts))
    }
}

/// Label (α, β) of an irreducible character of W(B_m).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    pub alpha: Partition,
    pub beta: Partition,
}

impl Bipartition {
    pub fn new(alpha: Partition, beta: Partition) -> Self {
        Bipartition { alpha, beta }
    }

    pub fn size(&self) -> usize {
        self.alpha.size() + self.beta.size()
    }

    /// All bipartitions of m, |α| decreasing.
    pub fn all(m: usize) -> Vec<Bipartition> {
        let mut out = vec![];
        for k in (0..=m).rev() {
            for a in Partition::all(k) {
                for b in Partition::all(m - k) {
                    out.push(Bipartition::new(a.clone(), b));
                }
            }
        }
        out
    }

    /// C(m,|α|)·f^α·f^β.
    pub fn degree(&self) -> u64 {
        let m = self.size() as u64;
        let k = self.alpha.size() as u64;
        let binom = (1..=k).fold(1u64, |acc, i| acc * (m - k + i) / i);
        binom * self.alpha.dimension() * self.beta.dimension()
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.alpha, self.beta)
    }
}

/// Signed permutation of {±1,…,±m}; `images[i-1]` is the image of i.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm {
    images: Vec<i8>,
}

impl SignedPerm {
    pub fn identity(m: usize) -> Self {
        SignedPerm { images: (1..=m as i8).collect() }
    }

    pub fn from_images(images: Vec<i8>) -> Option<Self> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &x in &images {
            let a = x.unsigned_abs() as usize;
            if a == 0 || a > m || seen[a - 1] {
                return None;
            }
            seen[a - 1] = true;
        }
        Some(SignedPerm { images })
    }

    /// s₁ negates position 1; s_j (j ≥ 2) swaps positions j−1 and j.
    pub fn generator(m: usize, j: usize) -> Result<Self, WeylError> {
        if j == 0 || j > m {
            return Err(WeylError::BadGenerator { index: j, rank: m });
        }
        let mut p = Self::identity(m);
        if j == 1 {
            p.images[0] = -1;
        } else {
            p.images.swap(j - 2, j - 1);
        }
        Ok(p)
    }

    /// Product of generators read left to right.
    pub fn from_word(m: usize, word: &[usize]) -> Result<Self, WeylError> {
        word.iter().try_fold(Self::identity(m), |acc, &j| Ok(acc.compose(&Self::generator(m, j)?)))
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[i8] {
        &self.images
    }

    pub fn apply(&self, x: i8) -> i8 {
        let y = self.images[x.unsigned_abs() as usize - 1];
        if x < 0 {
            -y
        } else {
            y
        }
    }

    /// (self ∘ other)(x) = self(other(x)).
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        SignedPerm { images: other.images.iter().map(|&x| self.apply(x)).collect() }
    }

    pub fn inverse(&self) -> SignedPerm {
        let mut r = vec![0i8; self.rank()];
        for (i, &x) in self.images.iter().enumerate() {
            let v = (i + 1) as i8;
            r[x.unsigned_abs() as usize - 1] = if x < 0 { -v } else { v };
        }
        SignedPerm { images: r }
    }

    pub fn conjugate_by(&self, g: &SignedPerm) -> SignedPerm {
        g.compose(self).compose(&g.inverse())
    }

    pub fn negative_count(&self) -> usize {
        self.images.iter().filter(|&&x| x < 0).count()
    }

    /// Signed cycle type: cycle lengths with positive and negative
    /// total sign, each decreasing.
    pub fn cycle_type(&self) -> (Partition, Partition) {
        let m = self.rank();
        let mut seen = vec![false; m];
        let (mut pos, mut neg) = (vec![], vec![]);
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let (mut len, mut sign, mut x) = (0u8, 1i8, start);
            loop {
                seen[x] = true;
                let y = self.images[x];
                sign *= y.signum();
                x = y.unsigned_abs() as usize - 1;
                len += 1;
                if x == start {
                    break;
                }
            }
            if sign > 0 {
                pos.push(len)
            } else {
                neg.push(len)
            }
        }
        (Partition::new(pos), Partition::new(neg))
    }

    /// det(q·id − w) on the reflection representation.
    pub fn char_poly(&self) -> PolyQ {
        let (pos, neg) = self.cycle_type();
        let p = pos.parts().iter().fold(PolyQ::one(), |acc, &k| acc * q_pow_minus_one(k as usize));
        neg.parts().iter().fold(p, |acc, &k| acc * q_pow_plus_one(k as usize))
    }

    /// Restriction to coordinates `range` (which it must stabilise up to
    /// sign), renumbered from 1.
    pub fn restrict(&self, range: std::ops::Range<usize>) -> Option<SignedPerm> {
        let lo = range.start as i8;
        let images = self.images[range.clone()]
            .iter()
            .map(|&x| {
                let a = x.unsigned_abs() as usize - 1;
                range.contains(&a).then(|| x.signum() * (a as i8 - lo + 1))
            })
            .collect::<Option<Vec<_>>>()?;
        Some(SignedPerm { images })
    }
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.images.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", v.join(" "))
    }
}

/// Character of S_n at cycle type `mu`, by Murnaghan–Nakayama on
/// beta numbers.
pub fn symmetric_character(lambda: &Partition, mu: &[u8]) -> i64 {
    fn rec(beta: &mut Vec<i64>, mu: &[u8]) -> i64 {
        let Some((&k, rest)) = mu.split_first() else {
            return 1;
        };
        let k = k as i64;
        let mut total = 0;
        for i in 0..beta.len() {
            let b = beta[i];
            let nb = b - k;
            if nb < 0 || beta.contains(&nb) {
                continue;
            }
            let between = beta.iter().filter(|&&c| nb < c && c < b).count();
            beta[i] = nb;
            let sign = if between % 2 == 0 { 1 } else { -1 };
            total += sign * rec(beta, rest);
            beta[i] = b;
        }
        total
    }
    if lambda.size() != mu.iter().map(|&x| x as usize).sum::<usize>() {
        return 0;
    }
    let n = lambda.len();
    let mut beta: Vec<i64> = lambda.parts().iter().enumerate().map(|(i, &p)| p as i64 + (n - 1 - i) as i64).collect();
    rec(&mut beta, mu)
}

/// Subset J of the simple reflections {1,…,m}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ParabolicSubset(BTreeSet<usize>);

impl ParabolicSubset {
    pub fn new(j: impl IntoIterator<Item = usize>) -> Self {
        ParabolicSubset(j.into_iter().collect())
    }

    pub fn empty() -> Self {
        ParabolicSubset(BTreeSet::new())
    }

    pub fn full(m: usize) -> Self {
        Self::new(1..=m)
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.contains(&j)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &ParabolicSubset) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn check(&self, m: usize) -> Result<(), WeylError> {
        if self.0.iter().any(|&j| j == 0 || j > m) {
            return Err(WeylError::BadParabolic(self.iter().collect(), m));
        }
        Ok(())
    }

    /// Rank b of the type-B component {1,…,b}.
    pub fn b_rank(&self) -> usize {
        (1..).take_while(|j| self.0.contains(j)).count()
    }

    /// Coordinate ranges permuted by the type-A components of W_J.
    pub fn a_blocks(&self) -> Vec<std::ops::Range<usize>> {
        let b = self.b_rank();
        let mut out = vec![];
        let mut run: Option<(usize, usize)> = None;
        for j in self.iter().filter(|&j| j > b + 1) {
            run = match run {
                Some((s, e)) if e + 1 == j => Some((s, j)),
                Some((s, e)) => {
                    out.push(s - 2..e);
                    Some((j, j))
                }
                None => Some((j, j)),
            };
        }
        if let Some((s, e)) = run {
            out.push(s - 2..e);
        }
        out
    }
}

impl fmt::Display for ParabolicSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.iter().map(|j| j.to_string()).collect();
        write!(f, "{{{}}}", v.join(","))
    }
}

#[derive(Clone, Debug)]
pub struct ConjClass {
    /// Index of a minimal-length member (smallest images among those).
    pub rep: usize,
    pub size: usize,
    pub min_length: usize,
    pub cycle_type: (Partition, Partition),
    /// Reduced word of `rep`.
    pub rep_word: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassData {
    pub class: usize,
    pub length: usize,
    pub centralizer_order: usize,
    pub char_poly: PolyQ,
}

/// Exact class function on W(B_m), one value per class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    pub rank: usize,
    pub values: Vec<Rational>,
}

#[derive(Clone, Debug)]
pub struct CharTable {
    pub labels: Vec<Bipartition>,
    /// values[χ][class]
    pub values: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    m: usize,
    elements: Vec<SignedPerm>,
    lengths: Vec<usize>,
    words: Vec<Vec<usize>>,
    index: HashMap<SignedPerm, usize>,
    class_of: Vec<usize>,
    classes: Vec<ConjClass>,
    table: CharTable,
}

/// W(B_m) for m ∈ {2, 3}.
pub fn build_weyl(m: usize) -> Result<WeylGroup, WeylError> {
    if !(2..=3).contains(&m) {
        return Err(WeylError::UnsupportedRank(m));
    }
    Ok(WeylGroup::build(m))
}

/// Shared copy of W(B_m), m ∈ {1, 2, 3}, built on first use.
pub fn weyl_group(m: usize) -> Result<&'static WeylGroup, WeylError> {
    static CACHE: [OnceLock<WeylGroup>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    if !(1..=3).contains(&m) {
        return Err(WeylError::UnsupportedRank(m));
    }
    Ok(CACHE[m - 1].get_or_init(|| WeylGroup::build(m)))
}

impl WeylGroup {
    /// Any rank from 1 to 3; Levi factors need the small ones.
    pub(crate) fn build(m: usize) -> WeylGroup {
        assert!((1..=3).contains(&m));
        let gens: Vec<SignedPerm> = (1..=m).map(|j| SignedPerm::generator(m, j).unwrap()).collect();
        let e = SignedPerm::identity(m);
        let mut elements = vec![e.clone()];
        let mut lengths = vec![0];
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        let mut index = HashMap::from([(e, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (j, s) in gens.iter().enumerate() {
                let y = elements[i].compose(s);
                if index.contains_key(&y) {
                    continue;
                }
                let mut w = words[i].clone();
                w.push(j + 1);
                index.insert(y.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(y);
                lengths.push(lengths[i] + 1);
                words.push(w);
            }
        }

        let n = elements.len();
        let mut class_of = vec![usize::MAX; n];
        let mut raw: Vec<Vec<usize>> = vec![];
        for i in 0..n {
            if class_of[i] != usize::MAX {
                continue;
            }
            let mut members: BTreeSet<usize> = BTreeSet::new();
            for g in &elements {
                members.insert(index[&elements[i].conjugate_by(g)]);
            }
            for &k in &members {
                class_of[k] = raw.len();
            }
            raw.push(members.into_iter().collect());
        }
        let mut classes: Vec<ConjClass> = raw
            .iter()
            .map(|members| {
                let rep = *members.iter().min_by_key(|&&k| (lengths[k], elements[k].clone())).unwrap();
                ConjClass {
                    rep,
                    size: members.len(),
                    min_length: lengths[rep],
                    cycle_type: elements[rep].cycle_type(),
                    rep_word: words[rep].clone(),
                }
            })
            .collect();
        let mut order: Vec<usize> = (0..classes.len()).collect();
        order.sort_by_key(|&c| (classes[c].min_length, elements[classes[c].rep].clone()));
        let mut renumber = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            renumber[old] = new;
        }
        for c in class_of.iter_mut() {
            *c = renumber[*c];
        }
        let mut sorted: Vec<Option<ConjClass>> = classes.drain(..).map(Some).collect();
        let classes: Vec<ConjClass> = order.iter().map(|&old| sorted[old].take().unwrap()).collect();

        let mut w =
            WeylGroup { m, elements, lengths, words, index, class_of, classes, table: CharTable { labels: vec![], values: vec![] } };
        w.table = w.compute_table();
        w
    }

    /// χ_(α,β) = Ind from W(B_k)×W(B_{m−k}) (k = |α|) of
    /// χ_α ⊠ (χ_β · ε), ε = parity of sign changes in the second block.
    fn compute_table(&self) -> CharTable {
        let labels = Bipartition::all(self.m);
        let values = labels
            .iter()
            .map(|bp| {
                let k = bp.alpha.size();
                let m = self.m;
                let f = move |x: &SignedPerm| -> Option<Rational> {
                    let p1 = x.restrict(0..k)?;
                    let p2 = x.restrict(k..m)?;
                    let ct = |p: &SignedPerm| {
                        let (a, b) = p.cycle_type();
                        let mut v: Vec<u8> = a.parts().iter().chain(b.parts()).copied().collect();
                        v.sort_unstable_by(|a, b| b.cmp(a));
                        v
                    };
                    let sign = if p2.negative_count() % 2 == 0 { 1 } else { -1 };
                    Some(int(symmetric_character(&bp.alpha, &ct(&p1)) * symmetric_character(&bp.beta, &ct(&p2)) * sign))
                };
                self.induce_general(&f, None).values
            })
            .collect();
        CharTable { labels, values }
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[SignedPerm] {
        &self.elements
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn character_table(&self) -> &CharTable {
        &self.table
    }

    pub fn index_of(&self, x: &SignedPerm) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn length(&self, x: &SignedPerm) -> Option<usize> {
        self.index_of(x).map(|i| self.lengths[i])
    }

    pub fn reduced_word(&self, x: &SignedPerm) -> Option<&[usize]> {
        self.index_of(x).map(|i| self.words[i].as_slice())
    }

    pub fn class_of(&self, x: &SignedPerm) -> Option<usize> {
        self.index_of(x).map(|i| self.class_of[i])
    }

    pub fn class_rep(&self, class: usize) -> &SignedPerm {
        &self.elements[self.classes[class].rep]
    }

    pub fn element(&self, word: &[usize]) -> Result<SignedPerm, WeylError> {
        SignedPerm::from_word(self.m, word)
    }

    pub fn class_data(&self, word: &[usize]) -> Result<ClassData, WeylError> {
        let x = self.element(word)?;
        let i = self.index[&x];
        let class = self.class_of[i];
        Ok(ClassData {
            class,
            length: self.lengths[i],
            centralizer_order: self.order() / self.classes[class].size,
            char_poly: x.char_poly(),
        })
    }

    pub fn longest_element(&self) -> SignedPerm {
        let i = (0..self.order()).max_by_key(|&i| self.lengths[i]).unwrap();
        self.elements[i].clone()
    }

    pub fn char_index(&self, label: &Bipartition) -> Result<usize, WeylError> {
        self.table.labels.iter().position(|b| b == label).ok_or_else(|| WeylError::UnknownCharacter(label.to_string(), self.m))
    }

    pub fn character(&self, label: &Bipartition) -> Result<ClassFunction, WeylError> {
        let i = self.char_index(label)?;
        Ok(ClassFunction { rank: self.m, values: self.table.values[i].clone() })
    }

    pub fn character_value(&self, label: &Bipartition, x: &SignedPerm) -> Result<Rational, WeylError> {
        if x.rank() != self.m {
            return Err(WeylError::RankMismatch { expected: self.m, found: x.rank() });
        }
        let i = self.char_index(label)?;
        Ok(self.table.values[i][self.class_of(x).unwrap()].clone())
    }

    /// Elements of W_J.
    pub fn parabolic_elements(&self, j: &ParabolicSubset) -> Result<Vec<usize>, WeylError> {
        j.check(self.m)?;
        let gens: Vec<SignedPerm> = j.iter().map(|k| SignedPerm::generator(self.m, k).unwrap()).collect();
        let mut seen = BTreeSet::from([0usize]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for s in &gens {
                let y = self.index[&self.elements[i].compose(s)];
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// Ind_H^K f for H = {x : f(x) is Some}, evaluated on `over` (all of W
    /// when None).
    fn induce_general(&self, f: &dyn Fn(&SignedPerm) -> Option<Rational>, over: Option<&[usize]>) -> ClassFunction {
        let all: Vec<usize> = (0..self.order()).collect();
        let over = over.unwrap_or(&all);
        let h = over.iter().filter(|&&i| f(&self.elements[i]).is_some()).count();
        let h = int(h as i64);
        let values = self
            .classes
            .iter()
            .map(|c| {
                let g = &self.elements[c.rep];
                let mut s = Rational::zero();
                for &x in over {
                    if let Some(v) = f(&g.conjugate_by(&self.elements[x])) {
                        s += v;
                    }
                }
                s / &h
            })
            .collect();
        ClassFunction { rank: self.m, values }
    }

    /// Ind_{W_J}^W χ, χ given on elements of W_J.
    pub fn induce_from_parabolic(&self, j: &ParabolicSubset, chi: &dyn Fn(&SignedPerm) -> Rational) -> Result<ClassFunction, WeylError> {
        let members: BTreeSet<usize> = self.parabolic_elements(j)?.into_iter().collect();
        let f = |x: &SignedPerm| members.contains(&self.index[x]).then(|| chi(x));
        Ok(self.induce_general(&f, None))
    }

    /// Ind_{W_J}^{W_K} χ as a function on the elements of W_K (J ⊆ K).
    pub fn induce_between(
        &self,
        j: &ParabolicSubset,
        k: &ParabolicSubset,
        chi: &dyn Fn(&SignedPerm) -> Rational,
    ) -> Result<HashMap<SignedPerm, Rational>, WeylError> {
        if !j.is_subset(k) {
            return Err(WeylError::BadParabolic(j.iter().collect(), self.m));
        }
        let hj: BTreeSet<usize> = self.parabolic_elements(j)?.into_iter().collect();
        let hk = self.parabolic_elements(k)?;
        let size = int(hj.len() as i64);
        let mut out = HashMap::new();
        for &g in &hk {
            let mut s = Rational::zero();
            for &x in &hk {
                let y = self.elements[g].conjugate_by(&self.elements[x]);
                if hj.contains(&self.index[&y]) {
                    s += chi(&y);
                }
            }
            out.insert(self.elements[g].clone(), s / &size);
        }
        Ok(out)
    }

    /// Class function from values on elements.
    pub fn class_function(&self, f: &dyn Fn(&SignedPerm) -> Rational) -> ClassFunction {
        ClassFunction { rank: self.m, values: self.classes.iter().map(|c| f(&self.elements[c.rep])).collect() }
    }

    /// ⟨f, g⟩ = |W|⁻¹ Σ f(x)g(x⁻¹); characters here are real.
    pub fn inner(&self, f: &ClassFunction, g: &ClassFunction) -> Rational {
        let s: Rational = self.classes.iter().enumerate().map(|(c, cl)| &f.values[c] * &g.values[c] * int(cl.size as i64)).sum();
        s / int(self.order() as i64)
    }

    /// Multiplicities of the irreducible characters in f.
    pub fn decompose(&self, f: &ClassFunction) -> Vec<(Bipartition, Rational)> {
        self.table
            .labels
            .iter()
            .zip(&self.table.values)
            .map(|(l, v)| (l.clone(), self.inner(f, &ClassFunction { rank: self.m, values: v.clone() })))
            .collect()
    }

    pub fn trivial(&self) -> ClassFunction {
        ClassFunction { rank: self.m, values: vec![Rational::one(); self.classes.len()] }
    }

    /// (−1)^ℓ(w).
    pub fn sign(&self) -> ClassFunction {
        self.class_function(&|x| int(if self.length(x).unwrap().is_multiple_of(2) { 1 } else { -1 }))
    }
}

/// Generator words used throughout.
pub mod words {
    /// s₁s₂s₃, the Coxeter element of B₃.
    pub const W_PRIME: &[usize] = &[1, 2, 3];
    pub const W_DOUBLE_PRIME: &[usize] = &[1, 2, 1, 2, 3];
    pub const W9: &[usize] = &[1, 2, 1, 3, 2, 1];
    pub const W13: &[usize] = &[2, 1, 3, 2, 1, 3, 2];
    pub const W23: &[usize] = &[2, 1, 3, 2, 1, 3, 2, 3];
    pub const W32: &[usize] = &[1, 2, 1, 3, 2, 1, 3, 2, 3];
    /// Rank 2.
    pub const W1W2: &[usize] = &[1, 2];
    pub const W212: &[usize] = &[2, 1, 2];
    pub const W0_B2: &[usize] = &[1, 2, 1, 2];

    pub fn concat(a: &[usize], b: &[usize]) -> Vec<usize> {
        a.iter().chain(b).copied().collect()
    }
}
