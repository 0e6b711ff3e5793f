//! Affine expressions `c + Σ kᵢ·uᵢ` with integer coefficients over the
//! unknowns of the decomposition problem.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Unknown {
    Alpha,
    Beta,
    Gamma,
    /// m_exp = ((q+1)_ℓ − 1)/2 in the LARGE case.
    M,
    /// Decomposition number at (row, column), 0-based.
    Entry(u8, u8),
    /// Multiplicity of Φ_col in Ψ_psi, 0-based.
    Mult(u8, u8),
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unknown::Alpha => write!(f, "α"),
            Unknown::Beta => write!(f, "β"),
            Unknown::Gamma => write!(f, "γ"),
            Unknown::M => write!(f, "m"),
            Unknown::Entry(r, c) => write!(f, "d[{},{}]", r + 1, c + 1),
            Unknown::Mult(k, j) => write!(f, "a[{},{}]", k + 1, j + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Affine {
    constant: i64,
    terms: BTreeMap<Unknown, i64>,
}

impl Affine {
    pub fn constant(c: i64) -> Self {
        Affine { constant: c, terms: BTreeMap::new() }
    }

    pub fn zero() -> Self {
        Self::constant(0)
    }

    pub fn var(u: Unknown) -> Self {
        Self::term(1, u)
    }

    pub fn term(k: i64, u: Unknown) -> Self {
        let mut a = Self::zero();
        a.add_term(k, u);
        a
    }

    pub fn m() -> Self {
        Self::var(Unknown::M)
    }

    pub fn constant_part(&self) -> i64 {
        self.constant
    }

    pub fn coefficient(&self, u: Unknown) -> i64 {
        self.terms.get(&u).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Unknown, i64)> + '_ {
        self.terms.iter().map(|(&u, &k)| (u, k))
    }

    pub fn unknowns(&self) -> impl Iterator<Item = Unknown> + '_ {
        self.terms.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0 && self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<i64> {
        self.terms.is_empty().then_some(self.constant)
    }

    /// Only the symbol m (if anything) occurs.
    pub fn is_m_affine(&self) -> bool {
        self.terms.keys().all(|&u| u == Unknown::M)
    }

    fn add_term(&mut self, k: i64, u: Unknown) {
        let e = self.terms.entry(u).or_insert(0);
        *e += k;
        if *e == 0 {
            self.terms.remove(&u);
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        Affine { constant: self.constant * k, terms: self.terms.iter().map(|(&u, &c)| (u, c * k)).collect() }
    }

    /// Replace unknowns by expressions; unknowns missing from `f` stay.
    pub fn substitute(&self, f: &dyn Fn(Unknown) -> Option<Affine>) -> Affine {
        let mut out = Affine::constant(self.constant);
        for (&u, &k) in &self.terms {
            match f(u) {
                Some(e) => out = out + e.scale(k),
                None => out.add_term(k, u),
            }
        }
        out
    }

    pub fn eval(&self, f: &dyn Fn(Unknown) -> Option<i64>) -> Option<i64> {
        self.terms.iter().try_fold(self.constant, |acc, (&u, &k)| Some(acc + k * f(u)?))
    }

    /// Product, defined when one side is constant.
    pub fn checked_mul(&self, other: &Affine) -> Option<Affine> {
        match (self.as_constant(), other.as_constant()) {
            (Some(c), _) => Some(other.scale(c)),
            (_, Some(c)) => Some(self.scale(c)),
            _ => None,
        }
    }
}

impl From<i64> for Affine {
    fn from(c: i64) -> Self {
        Affine::constant(c)
    }
}

impl Add for Affine {
    type Output = Affine;
    fn add(mut self, rhs: Affine) -> Affine {
        self.constant += rhs.constant;
        for (u, k) in rhs.terms {
            self.add_term(k, u);
        }
        self
    }
}

impl Add<&Affine> for &Affine {
    type Output = Affine;
    fn add(self, rhs: &Affine) -> Affine {
        self.clone() + rhs.clone()
    }
}

impl Sub for Affine {
    type Output = Affine;
    fn sub(self, rhs: Affine) -> Affine {
        self + (-rhs)
    }
}

impl Sub<&Affine> for &Affine {
    type Output = Affine;
    fn sub(self, rhs: &Affine) -> Affine {
        self.clone() - rhs.clone()
    }
}

impl Neg for Affine {
    type Output = Affine;
    fn neg(self) -> Affine {
        self.scale(-1)
    }
}

impl Mul<i64> for Affine {
    type Output = Affine;
    fn mul(self, k: i64) -> Affine {
        self.scale(k)
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&u, &k) in &self.terms {
            let sign = if k < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            match k.abs() {
                1 => write!(f, "{sign}{u}")?,
                a => write!(f, "{sign}{a}{u}")?,
            }
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if self.constant != 0 {
            write!(f, "{:+}", self.constant)
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse affine expression `{0}`")]
pub struct ParseAffineError(pub String);

fn parse_unknown(s: &str) -> Option<Unknown> {
    match s {
        "α" | "alpha" => return Some(Unknown::Alpha),
        "β" | "beta" => return Some(Unknown::Beta),
        "γ" | "gamma" => return Some(Unknown::Gamma),
        "m" => return Some(Unknown::M),
        _ => {}
    }
    let (head, rest) = s.split_once('[')?;
    let (r, c) = rest.strip_suffix(']')?.split_once(',')?;
    let r: u8 = r.trim().parse().ok()?;
    let c: u8 = c.trim().parse().ok()?;
    if r == 0 || c == 0 {
        return None;
    }
    match head {
        "d" => Some(Unknown::Entry(r - 1, c - 1)),
        "a" => Some(Unknown::Mult(r - 1, c - 1)),
        _ => None,
    }
}

impl FromStr for Affine {
    type Err = ParseAffineError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseAffineError(s.to_string());
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).map(|c| if c == '−' { '-' } else { c }).collect();
        if cleaned.is_empty() {
            return Err(err());
        }
        // split into signed chunks, ignoring signs inside brackets
        let mut chunks = Vec::new();
        let mut cur = String::new();
        let mut depth = 0;
        for ch in cleaned.chars() {
            match ch {
                '[' => depth += 1,
                ']' => depth -= 1,
                '+' | '-' if depth == 0 && !cur.is_empty() => {
                    chunks.push(std::mem::take(&mut cur));
                }
                _ => {}
            }
            cur.push(ch);
        }
        chunks.push(cur);
        let mut out = Affine::zero();
        for chunk in chunks {
            let (neg, body) = match chunk.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, chunk.strip_prefix('+').unwrap_or(&chunk)),
            };
            let digits = body.chars().take_while(|c| c.is_ascii_digit()).count();
            let (num, sym) = body.split_at(digits);
            let k: i64 = if num.is_empty() { 1 } else { num.parse().map_err(|_| err())? };
            let k = if neg { -k } else { k };
            if sym.is_empty() {
                if num.is_empty() {
                    return Err(err());
                }
                out.constant += k;
            } else {
                out.add_term(k, parse_unknown(sym).ok_or_else(err)?);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Unknown::*;

    #[test]
    fn display_matches_paper_shapes() {
        let e = Affine::term(2, Gamma) - Affine::constant(4);
        assert_eq!(e.to_string(), "2γ-4");
        let e = Affine::term(2, Beta) - Affine::term(2, Gamma) - Affine::constant(2);
        assert_eq!(e.to_string(), "2β-2γ-2");
        assert_eq!(Affine::m().to_string(), "m");
        assert_eq!(Affine::zero().to_string(), "0");
        assert_eq!((Affine::constant(2) - Affine::var(Alpha)).to_string(), "-α+2");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["2γ-4", "2β-2γ-2", "m", "0", "-α+2", "d[10,8]+3a[1,2]-1", "-7"] {
            let a: Affine = s.parse().unwrap();
            assert_eq!(a.to_string(), s);
        }
        assert_eq!("2 − α".parse::<Affine>().unwrap(), Affine::constant(2) - Affine::var(Alpha));
        assert!("2x".parse::<Affine>().is_err());
        assert!("".parse::<Affine>().is_err());
    }

    #[test]
    fn substitution() {
        let e: Affine = "2γ-4".parse().unwrap();
        let s = e.substitute(&|u| (u == Gamma).then(|| Affine::constant(2)));
        assert!(s.is_zero());
        assert_eq!(e.eval(&|_| Some(3)), Some(2));
        assert_eq!(e.eval(&|_| None), None);
    }

    fn unknown() -> impl Strategy<Value = Unknown> {
        prop_oneof![
            Just(Alpha),
            Just(Beta),
            Just(Gamma),
            Just(M),
            (0u8..12, 0u8..12).prop_map(|(r, c)| Entry(r, c)),
            (0u8..12, 0u8..12).prop_map(|(r, c)| Mult(r, c)),
        ]
    }

    fn affine() -> impl Strategy<Value = Affine> {
        (-20i64..20, prop::collection::vec((-5i64..5, unknown()), 0..4))
            .prop_map(|(c, ts)| ts.into_iter().fold(Affine::constant(c), |acc, (k, u)| acc + Affine::term(k, u)))
    }

    proptest! {
        #[test]
        fn display_parse_inverse(a in affine()) {
            prop_assert_eq!(a.to_string().parse::<Affine>().unwrap(), a);
        }

        #[test]
        fn additive_group(a in affine(), b in affine()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!((&a + &b).scale(3), a.scale(3) + b.scale(3));
        }
    }
}
