//! Unitary representations of the braid group `B3` built from a block
//! involution `U` and an order-three diagonal `V`, their
//! restriction to the pure braid group `P3`, and tooling to decide and
//! certify irreducibility.
//!
//! * [`linalg`]: small dense complex matrices.
//! * [`poly`]: exact integer polynomials and Sturm root isolation.
//! * [`rep`]: the representation, its generator images and braid words.
//! * [`irred`]: commutant and invariant-subspace tests.
//! * [`proofchain`]: the elimination chain behind the irreducibility proof.

pub mod irred;
pub mod linalg;
pub mod poly;
pub mod proofchain;
pub mod rep;
