//! Ungraded matrix factorizations over characteristic-2 (Laurent) polynomial rings.
//!
//! The crate is layered bottom-up:
//!
//! * [`gf2k`]: the coefficient fields GF(2^k);
//! * [`ringpoly`]: sparse Laurent polynomials, their parser and printer;
//! * [`ringmat`]: polynomial matrices and dense field matrices;
//! * [`mfcore`]: factorizations, morphisms, the differential, doubling and
//!   forgetting, and brute-force factorization search;
//! * [`cohomwin`]: hom-space cohomology by exponent windows and by
//!   specialization at points;
//! * [`groebner`]: Buchberger's algorithm, saturation and Jacobian rings;
//! * [`rp2`]: the projective-plane mirror factorization, its endomorphism
//!   reduction algorithm and the `A_{2n-1}` corpus.

pub mod cohomwin;
pub mod error;
pub mod exec;
pub mod gf2k;
pub mod groebner;
pub mod mfcore;
pub mod mffile;
pub mod ringmat;
pub mod ringpoly;
pub mod rp2;
pub mod sample;
pub mod suite;

pub use error::{Error, Result};
pub use exec::Exec;
pub use gf2k::{FieldElem, FieldSpec};
pub use ringmat::{FieldMatrix, RingMatrix};
pub use ringpoly::{Ring, RingPoly};
