//! Exact polynomials in `q` over the rationals, the cyclotomic factors
//! φ₁ … φ₆ and the ℓ-case split.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::affine::Affine;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Integer value of an exact rational, if it is one and fits.
pub fn as_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("cyclotomic index {0} is not one of 1, 2, 3, 4, 6")]
    UnsupportedCyclotomic(u32),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("(q+1)_l = {0} is not an odd power of l at least 3")]
    BadEllPart(u64),
}

/// Polynomial in `q`; `coeffs[k]` is the coefficient of q^k.
/// Trailing zeros are stripped, so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct PolyQ {
    coeffs: Vec<Rational>,
}

impl PolyQ {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyQ { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        PolyQ { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn q() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Horner evaluation.
    pub fn eval_at(&self, q0: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * q0 + c)
    }

    /// Euclidean division: `self = quot * d + rem` with deg rem < deg d.
    pub fn div_rem(&self, d: &PolyQ) -> Result<(PolyQ, PolyQ), PolyError> {
        let dl = d.degree().ok_or(PolyError::DivisionByZero)?;
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let n = rem.len();
        if n <= dl {
            return Ok((PolyQ::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); n - dl];
        for k in (0..n - dl).rev() {
            let c = &rem[k + dl] / &lead;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dl);
        Ok((PolyQ::new(quot), PolyQ::new(rem)))
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn div_exact(&self, d: &PolyQ) -> Option<PolyQ> {
        match self.div_rem(d) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let a = c.abs();
            let unit = a.is_one();
            if k == 0 || (!unit && a.is_integer()) {
                write!(f, "{a}")?;
            } else if !unit {
                write!(f, "({a})")?;
            }
            match k {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{k}")?,
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&PolyQ> for &PolyQ {
            type Output = PolyQ;
            fn $m(self, rhs: &PolyQ) -> PolyQ {
                $body(self, rhs)
            }
        }
        impl $tr<PolyQ> for PolyQ {
            type Output = PolyQ;
            fn $m(self, rhs: PolyQ) -> PolyQ {
                $body(&self, &rhs)
            }
        }
        impl $tr<&PolyQ> for PolyQ {
            type Output = PolyQ;
            fn $m(self, rhs: &PolyQ) -> PolyQ {
                $body(&self, rhs)
            }
        }
    };
}

fn add(a: &PolyQ, b: &PolyQ) -> PolyQ {
    let n = a.coeffs.len().max(b.coeffs.len());
    let z = Rational::zero();
    PolyQ::new((0..n).map(|k| a.coeffs.get(k).unwrap_or(&z) + b.coeffs.get(k).unwrap_or(&z)).collect())
}

fn sub(a: &PolyQ, b: &PolyQ) -> PolyQ {
    add(a, &-b)
}

fn mul(a: &PolyQ, b: &PolyQ) -> PolyQ {
    if a.is_zero() || b.is_zero() {
        return PolyQ::zero();
    }
    let mut v = vec![Rational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        for (j, y) in b.coeffs.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    PolyQ::new(v)
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl Neg for &PolyQ {
    type Output = PolyQ;
    fn neg(self) -> PolyQ {
        PolyQ::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for PolyQ {
    type Output = PolyQ;
    fn neg(self) -> PolyQ {
        -&self
    }
}

/// φᵢ for i in {1, 2, 3, 4, 6}.
pub fn cyclotomic(i: u32) -> Result<PolyQ, PolyError> {
    let c: &[i64] = match i {
        1 => &[-1, 1],
        2 => &[1, 1],
        3 => &[1, 1, 1],
        4 => &[1, 0, 1],
        6 => &[1, -1, 1],
        _ => return Err(PolyError::UnsupportedCyclotomic(i)),
    };
    Ok(PolyQ::from_ints(c))
}

/// c · q^k · Π φᵢ^eᵢ, the shape every degree in the label tables takes.
pub fn cyclo_product(c: Rational, k: usize, factors: &[(u32, u32)]) -> PolyQ {
    factors.iter().fold(PolyQ::monomial(c, k), |acc, &(i, e)| acc * cyclotomic(i).expect("cyclotomic index").pow(e))
}

/// q^k - 1 and q^k + 1.
pub fn q_pow_minus_one(k: usize) -> PolyQ {
    PolyQ::monomial(Rational::one(), k) - PolyQ::one()
}

pub fn q_pow_plus_one(k: usize) -> PolyQ {
    PolyQ::monomial(Rational::one(), k) + PolyQ::one()
}

/// p′-part of |SO_{2m+1}(q)|: (q²−1)(q⁴−1)…(q^{2m}−1).
pub fn order_p_prime(m: usize) -> PolyQ {
    (1..=m).fold(PolyQ::one(), |acc, i| acc * q_pow_minus_one(2 * i))
}

/// |SO_{2m+1}(q)| = q^{m²} · Π (q^{2i} − 1).
pub fn group_order(m: usize) -> PolyQ {
    PolyQ::monomial(Rational::one(), m * m) * order_p_prime(m)
}

/// Which size of (q+1)_ℓ we are in. The exceptional multiplicity of the
/// cyclic blocks is m_exp = ((q+1)_ℓ − 1)/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EllCase {
    Case3,
    Case5,
    Large,
}

impl EllCase {
    pub const ALL: [EllCase; 3] = [EllCase::Case3, EllCase::Case5, EllCase::Large];

    /// 1, 2 or the symbol m.
    pub fn m_exp(self) -> Affine {
        match self {
            EllCase::Case3 => Affine::constant(1),
            EllCase::Case5 => Affine::constant(2),
            EllCase::Large => Affine::m(),
        }
    }

    /// Smallest value the symbol m may take (only meaningful for LARGE).
    pub fn m_min(self) -> i64 {
        match self {
            EllCase::Case3 => 1,
            EllCase::Case5 => 2,
            EllCase::Large => 3,
        }
    }

    /// At least (q+1)_ℓ = 5.
    pub fn at_least_5(self) -> bool {
        self != EllCase::Case3
    }

    /// Classify by the value of (q+1)_ℓ.
    pub fn from_ell_part(n: u64) -> Result<EllCase, PolyError> {
        match n {
            3 => Ok(EllCase::Case3),
            5 => Ok(EllCase::Case5),
            n if n >= 7 && n % 2 == 1 => Ok(EllCase::Large),
            n => Err(PolyError::BadEllPart(n)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EllCase::Case3 => "CASE3",
            EllCase::Case5 => "CASE5",
            EllCase::Large => "LARGE",
        }
    }
}

impl fmt::Display for EllCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for EllCase {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "3" | "case3" => Ok(EllCase::Case3),
            "5" | "case5" => Ok(EllCase::Case5),
            "large" => Ok(EllCase::Large),
            _ => Err(format!("unknown case `{s}` (expected 3, 5 or large)")),
        }
    }
}

/// Largest power of ℓ dividing n.
pub fn ell_part(mut n: u64, ell: u64) -> u64 {
    let mut p = 1;
    if ell < 2 || n == 0 {
        return p;
    }
    while n.is_multiple_of(ell) {
        n /= ell;
        p *= ell;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn phi(i: u32) -> PolyQ {
        cyclotomic(i).unwrap()
    }

    #[test]
    fn cyclotomic_values() {
        assert_eq!(phi(1), PolyQ::from_ints(&[-1, 1]));
        assert_eq!(phi(6), PolyQ::from_ints(&[1, -1, 1]));
        assert_eq!(cyclotomic(5), Err(PolyError::UnsupportedCyclotomic(5)));
    }

    #[test]
    fn eval_examples() {
        let p = cyclo_product(rat(1, 2), 1, &[(2, 2)]);
        assert_eq!(p.eval_at(&int(3)), int(24));
        assert_eq!(PolyQ::monomial(int(1), 9).eval_at(&int(1)), int(1));
        assert_eq!(phi(1).pow(2).eval_at(&int(1)), int(0));
    }

    #[test]
    fn cyclotomic_identities() {
        let q6 = q_pow_minus_one(6);
        assert_eq!(phi(1) * phi(2) * phi(3) * phi(6), q6);
        assert_eq!(phi(2).pow(2) * phi(1).pow(2), q_pow_minus_one(2).pow(2));
        let so7 = PolyQ::monomial(int(1), 9) * q_pow_minus_one(6) * q_pow_minus_one(4) * q_pow_minus_one(2);
        assert_eq!(group_order(3), so7);
    }

    #[test]
    fn canonical_form() {
        let p = PolyQ::new(vec![int(1), int(0), int(0)]);
        assert_eq!(p.coeffs().len(), 1);
        assert!((phi(1) - phi(1)).is_zero());
        assert_eq!(PolyQ::zero().degree(), None);
    }

    #[test]
    fn display() {
        assert_eq!(phi(6).to_string(), "q^2 - q + 1");
        assert_eq!(cyclo_product(rat(1, 2), 1, &[(4, 1)]).to_string(), "(1/2)q^3 + (1/2)q");
        assert_eq!((-phi(1)).to_string(), "-q + 1");
        assert_eq!(PolyQ::zero().to_string(), "0");
    }

    #[test]
    fn division() {
        let (qt, r) = q_pow_minus_one(6).div_rem(&phi(3)).unwrap();
        assert!(r.is_zero());
        assert_eq!(qt, phi(1) * phi(2) * phi(6));
        let (_, r) = q_pow_plus_one(3).div_rem(&phi(1)).unwrap();
        assert_eq!(r, PolyQ::constant(int(2)));
        assert_eq!(phi(1).div_rem(&PolyQ::zero()), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn ell_cases() {
        assert_eq!(ell_part(24, 3), 3);
        assert_eq!(ell_part(54, 3), 27);
        assert_eq!(EllCase::from_ell_part(ell_part(10, 5)), Ok(EllCase::Case5));
        assert_eq!(EllCase::from_ell_part(9), Ok(EllCase::Large));
        assert!(EllCase::from_ell_part(4).is_err());
        assert_eq!(EllCase::Case5.m_exp(), Affine::constant(2));
        assert_eq!("large".parse::<EllCase>(), Ok(EllCase::Large));
    }

    fn poly() -> impl Strategy<Value = PolyQ> {
        prop::collection::vec((-6i64..6, 1i64..4), 0..5).prop_map(|v| PolyQ::new(v.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in poly(), b in poly(), c in poly()) {
            prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn eval_is_a_ring_map(a in poly(), b in poly(), x in -5i64..5) {
            let x = int(x);
            prop_assert_eq!((&a * &b).eval_at(&x), a.eval_at(&x) * b.eval_at(&x));
            prop_assert_eq!((&a + &b).eval_at(&x), a.eval_at(&x) + b.eval_at(&x));
        }

        #[test]
        fn div_rem_reconstructs(a in poly(), b in poly()) {
            prop_assume!(!b.is_zero());
            let (qt, r) = a.div_rem(&b).unwrap();
            prop_assert_eq!(&qt * &b + &r, a);
            prop_assert!(r.degree() < b.degree() || r.is_zero());
        }
    }
}
