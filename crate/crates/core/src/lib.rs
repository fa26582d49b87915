//! Kernels for a 2D hp-adaptive finite element solver for the Poisson
//! problem: conforming triangular meshes with newest-vertex bisection,
//! variable-degree hierarchical spaces, sparse assembly, a preconditioned
//! conjugate gradient solver, a residual-based error indicator and an
//! adaptive refinement engine that picks h- or p-refinement per element
//! from the observed error reduction of earlier refinements.
//!
//! The crate is `no_std` (it allocates, but performs no IO and never
//! reads a clock on its own); the companion `hpfem-cli` crate adds
//! problem presets, file formats and a command line driver.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod assembly;
pub mod estimator;
pub mod linsolve;
pub mod mesh;
pub mod numerics;
pub mod probes;
pub mod space;
pub mod strategy;

mod basis;
mod math;
