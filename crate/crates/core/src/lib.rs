//! Exact arithmetic for Lamé covers of elliptic curves in characteristic 2.
//!
//! The crate is layered bottom-up: binary fields and polynomials ([`gf2`]),
//! Weierstrass curves ([`weierstrass`]), function fields with local expansions
//! ([`funcfield`]), the automorphism quotient and class census ([`lame`]),
//! weighted moduli coordinates ([`moduli12`]), cyclic triples ([`triples`]) and
//! Jacobians of the curves Y² + Y = X^(2g+1) ([`hyper`]).

pub mod arith;
pub mod gf2;
pub mod weierstrass;
pub mod funcfield;
pub mod lame;
pub mod moduli12;
pub mod triples;
pub mod hyper;
