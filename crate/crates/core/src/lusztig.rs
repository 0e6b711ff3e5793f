//! Deligne–Lusztig characters R_{T_w}(1) in the unipotent basis, via
//! almost characters and the Fourier matrices of the families.

use std::fmt;
use std::ops::{Add, Sub};
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::affine::{Affine, Unknown};
use crate::polyq::{as_i64, int, order_p_prime, rat, EllCase, PolyQ, Rational};
use crate::unipotent::{enumerate, UniCharSet, UniLabel, UnipotentError};
use crate::weyl::{weyl_group, words, SignedPerm, WeylError, WeylGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LusztigError {
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Unipotent(#[from] UnipotentError),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("relation {name} has non-integral coefficients: {vector}")]
    NonIntegral { name: String, vector: String },
    #[error("coefficient {0} of a pairing is not an integer")]
    NonIntegralPairing(String),
    #[error("Fourier calibration at rank {rank} left {survivors} conventions (need exactly one)")]
    Calibration { rank: usize, survivors: usize },
}

/// Rational combination of the unipotent characters of rank m.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VirtualUniChar {
    pub rank: usize,
    pub coeffs: Vec<Rational>,
}

impl VirtualUniChar {
    pub fn zero(m: usize) -> Self {
        let n = enumerate(m).map(|s| s.len()).unwrap_or(0);
        VirtualUniChar { rank: m, coeffs: vec![Rational::zero(); n] }
    }

    pub fn unit(m: usize, i: usize) -> Self {
        let mut v = Self::zero(m);
        v.coeffs[i] = Rational::one();
        v
    }

    /// From `(label text, coefficient)` pairs.
    pub fn from_terms(m: usize, terms: &[(&str, i64)]) -> Result<Self, UnipotentError> {
        let set = enumerate(m)?;
        let mut v = Self::zero(m);
        for &(l, c) in terms {
            v.coeffs[set.find(l)?] += int(c);
        }
        Ok(v)
    }

    pub fn labels(&self) -> &'static [UniLabel] {
        &enumerate(self.rank).unwrap().labels
    }

    pub fn coeff(&self, label: &UniLabel) -> Result<&Rational, UnipotentError> {
        Ok(&self.coeffs[enumerate(self.rank)?.index(label)?])
    }

    pub fn scale(&self, c: &Rational) -> Self {
        VirtualUniChar { rank: self.rank, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn degree(&self) -> PolyQ {
        let set = enumerate(self.rank).unwrap();
        self.coeffs.iter().zip(&set.degrees).fold(PolyQ::zero(), |acc, (c, d)| acc + d.scale(c))
    }

    pub fn to_affine(&self) -> Option<AffineChar> {
        let coeffs = self.coeffs.iter().map(|c| as_i64(c).map(Affine::constant)).collect::<Option<_>>()?;
        Some(AffineChar { rank: self.rank, coeffs })
    }
}

impl Add<&VirtualUniChar> for &VirtualUniChar {
    type Output = VirtualUniChar;
    fn add(self, rhs: &VirtualUniChar) -> VirtualUniChar {
        VirtualUniChar { rank: self.rank, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub<&VirtualUniChar> for &VirtualUniChar {
    type Output = VirtualUniChar;
    fn sub(self, rhs: &VirtualUniChar) -> VirtualUniChar {
        self + &rhs.scale(&-Rational::one())
    }
}

fn write_combination<T: fmt::Display>(f: &mut fmt::Formatter<'_>, terms: impl Iterator<Item = (String, T, bool, bool)>) -> fmt::Result {
    // (label, |coeff|, negative, is_one)
    let mut first = true;
    for (label, abs, neg, one) in terms {
        let sign = match (first, neg) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        if one {
            write!(f, "{sign}{label}")?;
        } else {
            write!(f, "{sign}{abs}{label}")?;
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for VirtualUniChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = self.labels();
        write_combination(
            f,
            self.coeffs
                .iter()
                .zip(labels)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, l)| (l.to_string(), c.abs(), c.is_negative(), c.abs().is_one())),
        )
    }
}

/// Virtual character whose coefficients are affine in the unknowns,
/// e.g. a Brauer character in basic-set coordinates or a Ψ-column.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineChar {
    pub rank: usize,
    pub coeffs: Vec<Affine>,
}

impl AffineChar {
    pub fn zero(m: usize) -> Self {
        let n = enumerate(m).map(|s| s.len()).unwrap_or(0);
        AffineChar { rank: m, coeffs: vec![Affine::zero(); n] }
    }

    pub fn from_terms(m: usize, terms: &[(&str, Affine)]) -> Result<Self, UnipotentError> {
        let set = enumerate(m)?;
        let mut v = Self::zero(m);
        for (l, c) in terms {
            let i = set.find(l)?;
            v.coeffs[i] = &v.coeffs[i] + c;
        }
        Ok(v)
    }

    pub fn add_scaled(&mut self, v: &VirtualUniChar, c: &Affine) -> Result<(), LusztigError> {
        for (x, r) in self.coeffs.iter_mut().zip(&v.coeffs) {
            let k = as_i64(r).ok_or_else(|| LusztigError::NonIntegralPairing(r.to_string()))?;
            *x = &*x + &c.scale(k);
        }
        Ok(())
    }

    pub fn substitute(&self, f: &dyn Fn(Unknown) -> Option<Affine>) -> AffineChar {
        AffineChar { rank: self.rank, coeffs: self.coeffs.iter().map(|c| c.substitute(f)).collect() }
    }
}

impl fmt::Display for AffineChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = &enumerate(self.rank).unwrap().labels;
        write_combination(
            f,
            self.coeffs.iter().zip(labels).filter(|(c, _)| !c.is_zero()).map(|(c, l)| match c.as_constant() {
                Some(k) => (l.to_string(), k.abs().to_string(), k < 0, k.abs() == 1),
                None => (l.to_string(), format!("({c})"), false, false),
            }),
        )
    }
}

pub fn inner(u: &VirtualUniChar, v: &VirtualUniChar) -> Result<Rational, LusztigError> {
    if u.rank != v.rank {
        return Err(LusztigError::RankMismatch(u.rank, v.rank));
    }
    Ok(u.coeffs.iter().zip(&v.coeffs).map(|(a, b)| a * b).sum())
}

/// Σ r(χ)·φ(χ); r must be integral where φ is nonzero.
pub fn brauer_pairing(r: &VirtualUniChar, phi: &AffineChar) -> Result<Affine, LusztigError> {
    if r.rank != phi.rank {
        return Err(LusztigError::RankMismatch(r.rank, phi.rank));
    }
    let mut out = Affine::zero();
    for (c, p) in r.coeffs.iter().zip(&phi.coeffs) {
        if p.is_zero() || c.is_zero() {
            continue;
        }
        let k = as_i64(c).ok_or_else(|| LusztigError::NonIntegralPairing(c.to_string()))?;
        out = out + p.scale(k);
    }
    Ok(out)
}

/// Fourier matrix of one family; `matrix[a][b]` pairs `members[a]` and
/// `members[b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierBlock {
    pub family: usize,
    pub members: Vec<usize>,
    pub matrix: Vec<Vec<Rational>>,
}

impl FourierBlock {
    pub fn is_involution(&self) -> bool {
        let n = self.members.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let sq: Rational = (0..n).map(|k| &self.matrix[i][k] * &self.matrix[k][j]).sum();
                self.matrix[i][j] == self.matrix[j][i] && sq == int((i == j) as i64)
            })
        })
    }
}

/// ½[[1,1,1,1],[1,1,−1,−1],[1,−1,1,−1],[1,−1,−1,1]].
pub fn fourier4() -> Vec<Vec<Rational>> {
    let s = [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]];
    s.iter().map(|r| r.iter().map(|&x| rat(x, 2)).collect()).collect()
}

/// Decomposition engine for one rank.
#[derive(Debug)]
pub struct Lusztig {
    pub m: usize,
    pub weyl: &'static WeylGroup,
    pub unis: &'static UniCharSet,
    pub blocks: Vec<FourierBlock>,
    /// R_φ for each irreducible φ of W, in character-table order.
    almost: Vec<VirtualUniChar>,
    pub calibration: CalibrationReport,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalibrationReport {
    /// Distinct effective Fourier conventions examined per size-4 family.
    pub candidates: Vec<usize>,
    pub survivors: usize,
    /// Sign ε with deg R_w = ε·|G|_{p′}/det(q − w), per class.
    pub degree_signs: Vec<i8>,
}

fn almost_characters(w: &WeylGroup, unis: &UniCharSet, blocks: &[FourierBlock]) -> Vec<VirtualUniChar> {
    let m = w.rank();
    w.character_table()
        .labels
        .iter()
        .map(|bp| {
            let p = unis.index(&UniLabel::principal(bp)).unwrap();
            match blocks.iter().find(|b| b.members.contains(&p)) {
                Some(b) => {
                    let k = b.members.iter().position(|&x| x == p).unwrap();
                    let mut v = VirtualUniChar::zero(m);
                    for (j, &lab) in b.members.iter().enumerate() {
                        v.coeffs[lab] += &b.matrix[k][j];
                    }
                    v
                }
                None => VirtualUniChar::unit(m, p),
            }
        })
        .collect()
}

fn dl_from(w: &WeylGroup, almost: &[VirtualUniChar], class: usize) -> VirtualUniChar {
    let table = w.character_table();
    let mut v = VirtualUniChar::zero(w.rank());
    for (phi, r) in table.values.iter().zip(almost) {
        let c = &phi[class];
        if !c.is_zero() {
            v = &v + &r.scale(c);
        }
    }
    v
}

/// deg R_w = ε·|G|_{p′}/det(q − w): returns ε, or None if neither sign fits.
fn degree_sign(w: &WeylGroup, r: &VirtualUniChar, class: usize) -> Option<i8> {
    let target = order_p_prime(w.rank()).div_exact(&w.class_rep(class).char_poly())?;
    let d = r.degree();
    if d == target {
        Some(1)
    } else if d == -target {
        Some(-1)
    } else {
        None
    }
}

type Anchor = (&'static [usize], &'static [(&'static str, i64)]);

/// Printed expansions that anchor the rank-3 convention.
const ANCHORS3: &[Anchor] = &[
    (words::W_PRIME, &[("[3,-,1]", 1), ("[2,1,1]", -1), ("[1,-,3]", 1), ("[1,1^2,1]", 1), ("[-,1,3]", -1), ("[-,1^3,1]", -1)]),
    (
        words::W_DOUBLE_PRIME,
        &[
            ("[3,-,1]", 1),
            ("[21,-,1]", -1),
            ("[1,-,3]", -1),
            ("[1,2,1]", -1),
            ("[1^2,1,1]", 1),
            ("[-,21,1]", 1),
            ("[-,1,3]", 1),
            ("[-,1^3,1]", -1),
        ],
    ),
];

/// Brauer character of the cuspidal Steinberg column at rank 2, in
/// basic-set coordinates; its pairing with R_{w₁w₂} is printed as 2 − α.
pub fn steinberg_brauer_rank2() -> AffineChar {
    AffineChar::from_terms(
        2,
        &[
            ("[2,-,1]", Affine::constant(1)),
            ("[-,-,3]", -Affine::var(Unknown::Alpha)),
            ("[1^2,-,1]", Affine::constant(-1)),
            ("[-,2,1]", Affine::constant(-1)),
            ("[-,1^2,1]", Affine::constant(1)),
        ],
    )
    .unwrap()
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = vec![];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| p.contains(&i)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Searches orderings and signs of every size-4 family for the unique
/// effective Fourier convention compatible with the anchors, the degree
/// identity and integrality of the relation vectors.
pub fn calibrate(m: usize) -> Result<(Vec<FourierBlock>, CalibrationReport), LusztigError> {
    let w = weyl_group(m)?;
    if m != 2 && m != 3 {
        return Err(WeylError::UnsupportedRank(m).into());
    }
    let unis = enumerate(m)?;
    let base = fourier4();
    let big: Vec<usize> = (0..unis.families.len()).filter(|&f| unis.families[f].members.len() == 4).collect();

    // candidate blocks per family, deduplicated by effective matrix
    let mut per_family: Vec<Vec<FourierBlock>> = vec![];
    for &f in &big {
        let members = &unis.families[f].members;
        let mut seen: Vec<Vec<Vec<Rational>>> = vec![];
        let mut cands = vec![];
        for perm in permutations4() {
            for signs in 0..8u8 {
                // sign of the first slot fixed to +: global sign flips cancel
                let s: Vec<i64> = (0..4).map(|i| if i > 0 && signs >> (i - 1) & 1 == 1 { -1 } else { 1 }).collect();
                let order: Vec<usize> = perm.iter().map(|&i| members[i]).collect();
                let matrix: Vec<Vec<Rational>> = (0..4).map(|a| (0..4).map(|b| &base[a][b] * int(s[a] * s[b])).collect()).collect();
                // effective matrix in canonical member order
                let eff: Vec<Vec<Rational>> = (0..4)
                    .map(|a| {
                        (0..4)
                            .map(|b| {
                                let pa = order.iter().position(|&x| x == members[a]).unwrap();
                                let pb = order.iter().position(|&x| x == members[b]).unwrap();
                                matrix[pa][pb].clone()
                            })
                            .collect()
                    })
                    .collect();
                if seen.contains(&eff) {
                    continue;
                }
                seen.push(eff);
                cands.push(FourierBlock { family: f, members: order, matrix });
            }
        }
        per_family.push(cands);
    }
    let candidates: Vec<usize> = per_family.iter().map(|c| c.len()).collect();

    // local checks: anchors and integrality touch one family at a time
    let relation_defs: Vec<&RelationDef> = RELATIONS.iter().filter(|r| r.rank == m).collect();
    let local_ok = |block: &FourierBlock| -> bool {
        let blocks = std::slice::from_ref(block);
        let almost = almost_characters(w, unis, blocks);
        let dl = |word: &[usize]| dl_from(w, &almost, w.class_data(word).unwrap().class);
        let fam = &block.members;
        if m == 3 {
            for (word, terms) in ANCHORS3 {
                let want = VirtualUniChar::from_terms(3, terms).unwrap();
                let got = dl(word);
                if fam.iter().any(|&i| got.coeffs[i] != want.coeffs[i]) {
                    return false;
                }
            }
        } else {
            let got = brauer_pairing(&dl(words::W1W2), &steinberg_brauer_rank2()).ok();
            if got != Some(Affine::constant(2) - Affine::var(Unknown::Alpha)) {
                return false;
            }
        }
        relation_defs.iter().all(|def| {
            let v = def.evaluate(&dl);
            fam.iter().all(|&i| v.coeffs[i].is_integer())
        })
    };
    let filtered: Vec<Vec<FourierBlock>> = per_family.into_iter().map(|c| c.into_iter().filter(|b| local_ok(b)).collect()).collect();

    // global check: degree identity for every class
    let mut survivors: Vec<(Vec<FourierBlock>, Vec<i8>)> = vec![];
    let mut choice = vec![0usize; filtered.len()];
    if filtered.iter().all(|c| !c.is_empty()) {
        loop {
            let blocks: Vec<FourierBlock> = choice.iter().zip(&filtered).map(|(&i, c)| c[i].clone()).collect();
            let almost = almost_characters(w, unis, &blocks);
            let signs: Option<Vec<i8>> = (0..w.classes().len()).map(|c| degree_sign(w, &dl_from(w, &almost, c), c)).collect();
            if let Some(signs) = signs {
                survivors.push((blocks, signs));
            }
            let mut k = 0;
            while k < choice.len() {
                choice[k] += 1;
                if choice[k] < filtered[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == choice.len() {
                break;
            }
        }
    }
    if survivors.len() != 1 {
        return Err(LusztigError::Calibration { rank: m, survivors: survivors.len() });
    }
    let (blocks, degree_signs) = survivors.pop().unwrap();
    Ok((blocks, CalibrationReport { candidates, survivors: 1, degree_signs }))
}

/// Calibrated engine for rank m ∈ {2, 3}; fails if calibration does.
pub fn lusztig(m: usize) -> Result<&'static Lusztig, LusztigError> {
    static CACHE: [OnceLock<Result<Lusztig, LusztigError>>; 2] = [OnceLock::new(), OnceLock::new()];
    if m != 2 && m != 3 {
        return Err(WeylError::UnsupportedRank(m).into());
    }
    CACHE[m - 2]
        .get_or_init(|| {
            let (blocks, calibration) = calibrate(m)?;
            let weyl = weyl_group(m)?;
            let unis = enumerate(m)?;
            let almost = almost_characters(weyl, unis, &blocks);
            Ok(Lusztig { m, weyl, unis, blocks, almost, calibration })
        })
        .as_ref()
        .map_err(Clone::clone)
}

impl Lusztig {
    pub fn almost_character(&self, phi: usize) -> &VirtualUniChar {
        &self.almost[phi]
    }

    pub fn dl_class(&self, class: usize) -> VirtualUniChar {
        dl_from(self.weyl, &self.almost, class)
    }

    pub fn dl_element(&self, x: &SignedPerm) -> Result<VirtualUniChar, LusztigError> {
        let class = self.weyl.class_of(x).ok_or(WeylError::RankMismatch { expected: self.m, found: x.rank() })?;
        Ok(self.dl_class(class))
    }

    /// R_{T_w}(1) for w the product of the given generators.
    pub fn dl_character(&self, word: &[usize]) -> Result<VirtualUniChar, LusztigError> {
        Ok(self.dl_class(self.weyl.class_data(word)?.class))
    }

    pub fn degree_sign(&self, class: usize) -> Option<i8> {
        degree_sign(self.weyl, &self.dl_class(class), class)
    }

    pub fn relation_vectors(&self, case: EllCase) -> Result<Vec<Relation>, LusztigError> {
        let dl = |word: &[usize]| self.dl_character(word).unwrap();
        RELATIONS
            .iter()
            .filter(|r| r.rank == self.m && r.applies(case))
            .map(|def| {
                let vector = def.evaluate(&dl);
                if !vector.is_integral() {
                    return Err(LusztigError::NonIntegral { name: def.name.into(), vector: vector.to_string() });
                }
                Ok(Relation { name: def.name.to_string(), vector, def })
            })
            .collect()
    }

    /// Pairing of φ with R_w for every class, classes by minimal length.
    pub fn pairings(&self, phi: &AffineChar) -> Result<Vec<ClassPairing>, LusztigError> {
        self.weyl
            .classes()
            .iter()
            .enumerate()
            .map(|(c, cl)| {
                Ok(ClassPairing {
                    class: c,
                    length: cl.min_length,
                    word: cl.rep_word.clone(),
                    pairing: brauer_pairing(&self.dl_class(c), phi)?,
                })
            })
            .collect()
    }

    /// First class (by minimal length) whose pairing with φ is not the
    /// zero expression, with the classes before it that vanish.
    pub fn minimal_nonvanishing(&self, phi: &AffineChar) -> Result<Option<MinimalClass>, LusztigError> {
        let all = self.pairings(phi)?;
        let Some(k) = all.iter().position(|p| !p.pairing.is_zero()) else {
            return Ok(None);
        };
        let hit = all[k].clone();
        let vanishing = all[..k].iter().map(|p| p.class).collect();
        let ties = all[k..].iter().filter(|p| p.length == hit.length && !p.pairing.is_zero()).cloned().collect();
        Ok(Some(MinimalClass { hit, vanishing, ties }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPairing {
    pub class: usize,
    pub length: usize,
    pub word: Vec<usize>,
    pub pairing: Affine,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalClass {
    pub hit: ClassPairing,
    /// Classes of strictly smaller or equal length scanned before `hit`,
    /// all pairing to zero.
    pub vanishing: Vec<usize>,
    /// Every nonvanishing class of the same minimal length (including `hit`).
    pub ties: Vec<ClassPairing>,
}

/// One of the relations of the ℓ-regular Lemma: a rational combination
/// of R_w's whose ℓ-regular restriction is a genuine character.
#[derive(Debug)]
pub struct RelationDef {
    pub name: &'static str,
    pub rank: usize,
    /// Needs (q+1)_ℓ ≥ 5 (`Case5`) or > 5 (`Large`).
    pub needs: EllCase,
    /// (numerator, denominator, base word, suffix).
    pub terms: &'static [(i64, i64, &'static [usize], &'static [usize])],
}

impl RelationDef {
    pub fn applies(&self, case: EllCase) -> bool {
        case >= self.needs
    }

    fn evaluate(&self, dl: &dyn Fn(&[usize]) -> VirtualUniChar) -> VirtualUniChar {
        let mut v = VirtualUniChar::zero(self.rank);
        for &(n, d, base, suffix) in self.terms {
            v = &v + &dl(&words::concat(base, suffix)).scale(&rat(n, d));
        }
        v
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(n, d, base, suffix)| {
                let name = match *base {
                    b if b == words::W9 => "w9",
                    b if b == words::W13 => "w13",
                    b if b == words::W23 => "w23",
                    b if b == words::W32 => "w32",
                    b if b == words::W212 => "w212",
                    _ => "w0",
                };
                let suf: String = suffix.iter().map(|s| format!("s{s}")).collect();
                format!("{}R({name}{suf})", rat(*n, *d))
            })
            .collect();
        parts.join(" + ")
    }
}

#[derive(Clone, Debug)]
pub struct Relation {
    pub name: String,
    pub vector: VirtualUniChar,
    pub def: &'static RelationDef,
}

use words::{W0_B2, W13, W212, W23, W32, W9};

pub static RELATIONS: &[RelationDef] = &[
    RelationDef { name: "χ1", rank: 2, needs: EllCase::Case3, terms: &[(-1, 2, W212, &[]), (-1, 2, W212, &[1])] },
    RelationDef { name: "χ2", rank: 2, needs: EllCase::Case3, terms: &[(-1, 2, W212, &[]), (1, 2, W212, &[1])] },
    RelationDef { name: "χ3", rank: 2, needs: EllCase::Case5, terms: &[(1, 1, W0_B2, &[])] },
    RelationDef { name: "χ9,1", rank: 3, needs: EllCase::Case3, terms: &[(1, 6, W9, &[2, 3, 2]), (3, 6, W9, &[]), (2, 6, W9, &[2])] },
    RelationDef { name: "χ9,2", rank: 3, needs: EllCase::Case3, terms: &[(2, 6, W9, &[2, 3, 2]), (-2, 6, W9, &[2])] },
    RelationDef { name: "χ9,3", rank: 3, needs: EllCase::Case3, terms: &[(-1, 6, W9, &[2, 3, 2]), (3, 6, W9, &[]), (-2, 6, W9, &[2])] },
    RelationDef {
        name: "χ13,1",
        rank: 3,
        needs: EllCase::Case3,
        terms: &[(-1, 4, W13, &[]), (-1, 4, W13, &[1]), (-1, 4, W13, &[3]), (-1, 4, W13, &[1, 3])],
    },
    RelationDef {
        name: "χ13,2",
        rank: 3,
        needs: EllCase::Case3,
        terms: &[(-1, 4, W13, &[]), (-1, 4, W13, &[1]), (1, 4, W13, &[3]), (1, 4, W13, &[1, 3])],
    },
    RelationDef {
        name: "χ13,3",
        rank: 3,
        needs: EllCase::Case3,
        terms: &[(-1, 4, W13, &[]), (1, 4, W13, &[1]), (-1, 4, W13, &[3]), (1, 4, W13, &[1, 3])],
    },
    RelationDef {
        name: "χ13,4",
        rank: 3,
        needs: EllCase::Case3,
        terms: &[(-1, 4, W13, &[]), (1, 4, W13, &[1]), (1, 4, W13, &[3]), (-1, 4, W13, &[1, 3])],
    },
    RelationDef { name: "χ23,1", rank: 3, needs: EllCase::Case5, terms: &[(1, 2, W23, &[]), (1, 2, W23, &[1])] },
    RelationDef { name: "χ23,2", rank: 3, needs: EllCase::Case5, terms: &[(1, 2, W23, &[]), (-1, 2, W23, &[1])] },
    RelationDef { name: "χ32", rank: 3, needs: EllCase::Large, terms: &[(-1, 1, W32, &[])] },
];

/// relation_vectors(m, case).
pub fn relation_vectors(m: usize, case: EllCase) -> Result<Vec<Relation>, LusztigError> {
    lusztig(m)?.relation_vectors(case)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(m: usize, t: &[(&str, i64)]) -> VirtualUniChar {
        VirtualUniChar::from_terms(m, t).unwrap()
    }

    #[test]
    fn calibration_is_unique() {
        for m in [2, 3] {
            let l = lusztig(m).unwrap();
            assert_eq!(l.calibration.survivors, 1);
            for b in &l.blocks {
                assert!(b.is_involution());
                assert_eq!(b.matrix, fourier4());
                assert_eq!(b.members[0], l.unis.families[b.family].special);
            }
        }
        assert!(lusztig(4).is_err());
    }

    #[test]
    fn paper_expansions() {
        let l = lusztig(3).unwrap();
        let r1 = l.dl_character(words::W_PRIME).unwrap();
        assert_eq!(r1, v(3, &[("[3,-,1]", 1), ("[2,1,1]", -1), ("[1,-,3]", 1), ("[1,1^2,1]", 1), ("[-,1,3]", -1), ("[-,1^3,1]", -1)]));
        let r2 = l.dl_character(words::W_DOUBLE_PRIME).unwrap();
        assert_eq!(r2.to_string(), "[3,-,1] - [1,-,3] - [1,2,1] + [1^2,1,1] + [-,1,3] - [-,1^3,1] - [21,-,1] + [-,21,1]");
        assert_eq!(inner(&r1, &r1).unwrap(), int(6));
        assert_eq!(inner(&r1, &r2).unwrap(), int(0));
    }

    #[test]
    fn identity_and_rank2_examples() {
        let l = lusztig(3).unwrap();
        let r = l.dl_character(&[]).unwrap();
        let want = v(
            3,
            &[
                ("[3,-,1]", 1),
                ("[21,-,1]", 2),
                ("[1^3,-,1]", 1),
                ("[2,1,1]", 3),
                ("[1^2,1,1]", 3),
                ("[1,2,1]", 3),
                ("[1,1^2,1]", 3),
                ("[-,3,1]", 1),
                ("[-,21,1]", 2),
                ("[-,1^3,1]", 1),
            ],
        );
        assert_eq!(r, want);
        assert_eq!(inner(&r, &VirtualUniChar::unit(3, 0)).unwrap(), int(1));
        let l2 = lusztig(2).unwrap();
        let r = l2.dl_character(words::W1W2).unwrap();
        assert_eq!(r, v(2, &[("[2,-,1]", 1), ("[-,-,3]", 1), ("[1,1,1]", -1), ("[-,1^2,1]", 1)]));
        assert!(inner(&r, &VirtualUniChar::zero(3)).is_err());
    }

    #[test]
    fn orthogonality_and_degree_identity() {
        for m in [2, 3] {
            let l = lusztig(m).unwrap();
            let n = l.weyl.classes().len();
            for a in 0..n {
                for b in 0..n {
                    let want = if a == b { l.weyl.order() / l.weyl.classes()[a].size } else { 0 };
                    assert_eq!(inner(&l.dl_class(a), &l.dl_class(b)).unwrap(), int(want as i64));
                }
                let sign = l.degree_sign(a).expect("degree identity");
                let len = l.weyl.classes()[a].min_length;
                assert_eq!(sign, if len.is_multiple_of(2) { 1 } else { -1 });
                assert_eq!(l.calibration.degree_signs[a], sign);
            }
        }
    }

    #[test]
    fn relation_examples() {
        let rels = relation_vectors(3, EllCase::Large).unwrap();
        assert_eq!(rels.len(), 10);
        let get = |n: &str| rels.iter().find(|r| r.name == n).unwrap().vector.clone();
        assert_eq!(get("χ9,1"), v(3, &[("[3,-,1]", 1), ("[2,1,1]", -1), ("[-,3,1]", -1), ("[1,2,1]", 1)]));
        let c32: Vec<i64> = get("χ32").coeffs[..10].iter().map(|c| as_i64(c).unwrap()).collect();
        assert_eq!(c32, vec![-1, 1, 3, 2, -3, 3, -1, -3, -2, 1]);
        let r2 = relation_vectors(2, EllCase::Case5).unwrap();
        assert_eq!(r2[2].vector, v(2, &[("[2,-,1]", 1), ("[-,-,3]", -2), ("[1^2,-,1]", -1), ("[-,2,1]", -1), ("[-,1^2,1]", 1)]));
        assert_eq!(relation_vectors(2, EllCase::Case3).unwrap().len(), 2);
        assert_eq!(relation_vectors(3, EllCase::Case3).unwrap().len(), 7);
        assert_eq!(relation_vectors(3, EllCase::Case5).unwrap().len(), 9);
    }

    #[test]
    fn pairings_and_minimal_scan() {
        let l2 = lusztig(2).unwrap();
        let phi = steinberg_brauer_rank2();
        let min = l2.minimal_nonvanishing(&phi).unwrap().unwrap();
        assert_eq!(min.hit.length, 2);
        assert_eq!(min.hit.pairing.to_string(), "-α+2");
        assert_eq!(min.hit.class, l2.weyl.class_data(words::W1W2).unwrap().class);
        assert_eq!(min.vanishing.len(), 3);

        let l3 = lusztig(3).unwrap();
        let triv = AffineChar::from_terms(3, &[("[3,-,1]", Affine::constant(1))]).unwrap();
        let min = l3.minimal_nonvanishing(&triv).unwrap().unwrap();
        assert_eq!((min.hit.class, min.hit.length, min.hit.pairing.clone()), (0, 0, Affine::constant(1)));
        assert_eq!(l3.minimal_nonvanishing(&AffineChar::zero(3)).unwrap(), None);
    }

    #[test]
    fn rank3_dudas_expressions() {
        use Unknown::{Beta, Gamma};
        let l = lusztig(3).unwrap();
        let c = Affine::constant;
        let b = Affine::var(Beta);
        let g = Affine::var(Gamma);
        // last row of the inverse of the rank-3 decomposition matrix
        let phi = AffineChar::from_terms(
            3,
            &[
                ("[3,-,1]", c(-1)),
                ("[2,1,1]", c(1)),
                ("[-,3,1]", b.clone()),
                ("[1,-,3]", g.clone()),
                ("[1,2,1]", -b.clone()),
                ("[1^2,1,1]", b.clone()),
                ("[1,1^2,1]", c(-1)),
                ("[1^3,-,1]", -b.clone()),
                ("[-,1,3]", -g.clone()),
                ("[-,1^3,1]", c(1)),
            ],
        )
        .unwrap();
        let p1 = brauer_pairing(&l.dl_character(words::W_PRIME).unwrap(), &phi).unwrap();
        assert_eq!(p1.to_string(), "2γ-4");
        let p2 = brauer_pairing(&l.dl_character(words::W_DOUBLE_PRIME).unwrap(), &phi).unwrap();
        assert_eq!(p2.to_string(), "2β-2γ-2");
        let min = l.minimal_nonvanishing(&phi).unwrap().unwrap();
        assert_eq!(min.hit.length, 3);
        assert_eq!(min.vanishing.len(), 6);
    }

    proptest! {
        #[test]
        fn dl_is_a_class_invariant(word in prop::collection::vec(1usize..=3, 0..10), g in prop::collection::vec(1usize..=3, 0..10)) {
            let l = lusztig(3).unwrap();
            let x = l.weyl.element(&word).unwrap();
            let y = x.conjugate_by(&l.weyl.element(&g).unwrap());
            prop_assert_eq!(l.dl_element(&x).unwrap(), l.dl_element(&y).unwrap());
        }
    }
}
