//! Exact computations on the spectral-sequence model of the Floer homology of
//! three-manifolds with first Betti number `n`, organised around the Rokhlin
//! map on spin structures.

pub mod f2core;
pub mod forms;
pub mod hmbar;
pub mod ktheory;
pub mod pages;
pub mod rmod;
pub mod solver;
