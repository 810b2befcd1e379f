//! Exact commutative algebra for grade computations over affine algebras.

pub mod coeff;
pub mod complexes;
pub mod constructions;
pub mod error;
pub mod fpmodules;
pub mod grades;
pub mod groebner;
pub mod monomial;
pub mod poly;
pub mod script;
pub mod syntax;
pub mod verify;

pub use coeff::{Coeff, CoefficientField};
pub use error::{Error, Result};
pub use groebner::{
    groebner_basis, ideal_membership, ideal_power, krull_dimension, normal_form, verify_maximal, Budget,
    GroebnerBasis, IdealSpec, MaximalityReport, MaximalityVerdict, RingPresentation,
};
pub use monomial::{Monomial, MonomialOrder, OrderKind};
pub use poly::{PolyRing, Polynomial};
