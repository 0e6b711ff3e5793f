//! Decomposition numbers of the unipotent characters in the principal
//! ℓ-blocks of SO₅(q), SO₇(q) and Sp₆(q) for odd primes ℓ dividing q+1.

pub mod affine;
pub mod blocks;
pub mod decsolve;
pub mod hc;
pub mod lusztig;
pub mod polyq;
pub mod unipotent;
pub mod verify;
pub mod weyl;
