//! Exact lattice-polytope volumes and the modular obstructions they give on the
//! depth of ReLU networks with N-ary weights.

pub mod arith;
pub mod bitset;
pub mod certificate;
pub mod depth;
pub mod error;
pub mod lattice;
pub mod polytope;
pub mod relu;
pub mod su;
pub mod volume;

pub use arith::{Integer, NaryFraction, Rational};
pub use certificate::{Certificate, Verdict};
pub use error::{Error, Result};
pub use lattice::LatticeChart;
pub use polytope::LatticePolytope;
pub use relu::{PolytopePair, ReluNetwork, Ring};
pub use su::SuExpr;
