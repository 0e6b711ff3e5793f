//! Cyclic blocks of the parabolic subgroups P₅ ⊂ SO₅(q), P₇ ⊂ SO₇(q),
//! P₆* ⊂ Sp₆(q), and the projective characters they induce.

use std::fmt;

use crate::affine::Affine;
use crate::lusztig::AffineChar;
use crate::polyq::EllCase;
use crate::unipotent::{enumerate, UnipotentError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParabolicGroup {
    P5,
    P7,
    P6Star,
}

impl fmt::Display for ParabolicGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParabolicGroup::P5 => "P5",
            ParabolicGroup::P7 => "P7",
            ParabolicGroup::P6Star => "P6*",
        })
    }
}

/// Line ξ₁ - ξ_exc - ξ₂ with exceptional middle node of multiplicity
/// m_exp.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerTreeLine {
    pub group: ParabolicGroup,
    pub nodes: [&'static str; 3],
    pub exceptional: usize,
    pub m_exp: Affine,
    pub caveat: Option<&'static str>,
}

impl BrauerTreeLine {
    /// Ordinary characters of the PIMs, one per edge, as node multisets.
    pub fn pim_characters(&self) -> Vec<(String, Vec<&'static str>)> {
        [0, 2]
            .iter()
            .map(|&end| {
                let name = format!("Φ_{}", self.nodes[end]);
                (name, vec![self.nodes[end], self.nodes[self.exceptional]])
            })
            .collect()
    }
}

pub fn parabolic_tree(group: ParabolicGroup, case: EllCase) -> BrauerTreeLine {
    BrauerTreeLine {
        group,
        nodes: ["ξ1", "ξexc", "ξ2"],
        exceptional: 1,
        m_exp: case.m_exp(),
        caveat: (group == ParabolicGroup::P6Star).then_some("requires q odd"),
    }
}

/// Unipotent parts of Φ_{ξ₁}↑ and Φ_{ξ₂}↑ from P₇ to SO₇(q).
pub fn induced_pim_parts(case: EllCase) -> (AffineChar, AffineChar) {
    let one = Affine::constant(1);
    let part = |head: &str| AffineChar::from_terms(3, &[(head, one.clone()), ("[-,1^3,1]", case.m_exp())]).expect("rank 3 labels");
    (part("[1^3,-,1]"), part("[-,1,3]"))
}

/// Unipotent part of Φ_{ν₁⁻}↑ from P₅ to SO₅(q).
pub fn parabolic_pim_so5(case: EllCase) -> AffineChar {
    AffineChar::from_terms(2, &[("[-,-,3]", Affine::constant(1)), ("[-,1^2,1]", case.m_exp())]).expect("rank 2 labels")
}

/// Unipotent part of the Gelfand–Graev character: the Steinberg character.
pub fn gg_part(m: usize) -> Result<AffineChar, UnipotentError> {
    let set = enumerate(m)?;
    let mut v = AffineChar::zero(m);
    v.coeffs[set.steinberg()] = Affine::constant(1);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyq::int;
    use crate::polyq::PolyQ;

    #[test]
    fn trees() {
        let t = parabolic_tree(ParabolicGroup::P7, EllCase::Case3);
        assert_eq!(t.m_exp, Affine::constant(1));
        assert_eq!(parabolic_tree(ParabolicGroup::P5, EllCase::Case5).m_exp, Affine::constant(2));
        let s = parabolic_tree(ParabolicGroup::P6Star, EllCase::Large);
        assert_eq!(s.m_exp, Affine::m());
        assert!(s.caveat.is_some());
        let pims = t.pim_characters();
        assert_eq!(pims[0].1, vec!["ξ1", "ξexc"]);
        assert_eq!(pims[1].1, vec!["ξ2", "ξexc"]);
        // every edge meets the exceptional node, which is counted twice
        let mut all: Vec<&str> = pims.iter().flat_map(|p| p.1.clone()).collect();
        all.sort();
        assert_eq!(all, vec!["ξ1", "ξ2", "ξexc", "ξexc"]);
    }

    #[test]
    fn induced_parts() {
        let (a, b) = induced_pim_parts(EllCase::Case3);
        assert_eq!(a.to_string(), "[1^3,-,1] + [-,1^3,1]");
        assert_eq!(b.to_string(), "[-,1,3] + [-,1^3,1]");
        let (a, _) = induced_pim_parts(EllCase::Case5);
        assert_eq!(a.to_string(), "[1^3,-,1] + 2[-,1^3,1]");
        let (_, b) = induced_pim_parts(EllCase::Large);
        assert_eq!(b.to_string(), "[-,1,3] + (m)[-,1^3,1]");
        // nothing outside the principal block
        let set = enumerate(3).unwrap();
        for v in [&a, &b] {
            for (i, c) in v.coeffs.iter().enumerate() {
                if set.blocks[i] != crate::unipotent::BlockKind::Principal {
                    assert!(c.is_zero());
                }
            }
        }
    }

    #[test]
    fn gelfand_graev() {
        let g = gg_part(3).unwrap();
        assert_eq!(g.to_string(), "[-,1^3,1]");
        assert_eq!(gg_part(2).unwrap().to_string(), "[-,1^2,1]");
        let set = enumerate(3).unwrap();
        let deg = g.coeffs.iter().zip(&set.degrees).fold(PolyQ::zero(), |acc, (c, d)| acc + d.scale(&int(c.as_constant().unwrap())));
        assert_eq!(deg, PolyQ::monomial(int(1), 9));
        assert_eq!(parabolic_pim_so5(EllCase::Large).to_string(), "[-,-,3] + (m)[-,1^2,1]");
    }
}
