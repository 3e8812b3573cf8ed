//! Exact symbolic kernel for twisted quantum affinizations of simply-laced
//! generalized Cartan matrices and their vertex-operator representations.

pub mod cartan;
pub mod coeff;
pub mod distcalc;
pub mod fock;
pub mod poly;
pub mod relcat;
pub mod verify;
pub mod vertex;
