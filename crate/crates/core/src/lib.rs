//! Numerical toolkit for one-dimensional transverse-field Ising chains.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! `*64` and `*32` aliases below fix the scalar type.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
pub mod coldatoms;
pub mod density;
pub mod dmrg;
pub mod eigensolve;
pub mod error;
pub mod linalg;
pub mod qmc;
pub mod rng;
pub mod scalar;
pub mod spin;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianMatrix, LinearOperator};
pub use scalar::{Real, C};
pub use spin::{Boundary, ObservableSpec, Parity, SpinConfiguration, StateVector, TfimHamiltonian};

pub type StateVector64 = spin::StateVector<f64>;
pub type StateVector32 = spin::StateVector<f32>;
pub type TfimHamiltonian64 = spin::TfimHamiltonian<f64>;
pub type TfimHamiltonian32 = spin::TfimHamiltonian<f32>;
pub type ComplexMatrix64 = linalg::ComplexMatrix<f64>;
pub type ComplexMatrix32 = linalg::ComplexMatrix<f32>;
pub type SolverConfig64 = eigensolve::SolverConfig<f64>;
pub type EigenResult64 = eigensolve::EigenResult<f64>;
pub type QubitRegister64 = circuit::QubitRegister<f64>;
pub type Circuit64 = circuit::Circuit<f64>;
pub type Gate64 = circuit::Gate<f64>;
pub type TrotterPlan64 = circuit::TrotterPlan<f64>;
pub type DensityMatrix64 = density::DensityMatrix<f64>;
pub type BoseHubbardMF64 = coldatoms::BoseHubbardMF<f64>;
pub type LatticeParams64 = coldatoms::LatticeParams<f64>;
