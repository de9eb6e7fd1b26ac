//! A pressure-robust, convection-robust finite element solver for the
//! time-dependent incompressible Navier-Stokes equations on 2D triangular
//! meshes.
//!
//! The discretization combines three ingredients:
//!
//! * the second-order Scott-Vogelius pair (continuous quadratic vector
//!   velocities, discontinuous linear zero-mean pressures) on
//!   barycenter-refined meshes, which yields exactly divergence-free
//!   discrete velocities,
//! * a discontinuous Galerkin time stepping of degree one, marching the
//!   solution slab by slab with upwind jump coupling,
//! * a residual-based stabilization of the vorticity equation (a curl-SUPG
//!   term plus gradient-jump penalties) that controls convection-dominated
//!   flows without coupling velocity and pressure errors.
//!
//! The crate ships the solver as a library plus a small command line driver
//! for the bundled benchmark problems (convergence study, pressure
//! robustness sweep, planar lattice flow). A narrative guide lives in the
//! `book/` directory of the repository; its code snippets are compiled and
//! run as doc-tests of this crate.

pub mod analysis;
pub mod assembly;
pub mod config;
pub mod fe;
pub mod mesh;
pub mod problems;
pub mod quadrature;
pub mod runner;
pub mod solver;
pub mod vtk;

mod book;

use std::fmt;

/// Crate-wide error type.
#[derive(Debug)]
pub enum Error {
    /// Invalid argument or precondition violation.
    Invalid(String),
    /// I/O failure while reading or writing a file.
    Io(std::io::Error),
    /// Malformed input file (mesh or config), with 1-based line number.
    Parse { line: usize, msg: String },
    /// The fixed-point iteration on a slab did not converge.
    Nonconvergence {
        slab: usize,
        iterations: usize,
        last_increment: f64,
    },
    /// The sparse direct solver failed or the residual check did not pass.
    LinearSolve { slab: Option<usize>, msg: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Invalid(msg) => write!(f, "invalid input: {msg}"),
            Error::Io(e) => write!(f, "i/o error: {e}"),
            Error::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
            Error::Nonconvergence {
                slab,
                iterations,
                last_increment,
            } => write!(
                f,
                "fixed-point iteration on slab {slab} did not converge after {iterations} \
                 iterations (last increment {last_increment:.3e})"
            ),
            Error::LinearSolve { slab, msg } => match slab {
                Some(n) => write!(f, "linear solve failed on slab {n}: {msg}"),
                None => write!(f, "linear solve failed: {msg}"),
            },
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
