//! Sierpinski gasket graphs `G_n`, Hanoi towers Schreier graphs `H_n` and
//! the intermediate graphs `J_n`; their Laplacian spectra and eigenbases by
//! spectral decimation, and numerical checks of every step.
//!
//! ```
//! use gasket_spectra::{eigen::spectrum, graphs::Family};
//!
//! let s = spectrum(Family::H, 1).unwrap();
//! let values: Vec<(f64, usize)> = s.iter().map(|e| (e.value(), e.multiplicity)).collect();
//! assert_eq!(values, vec![(0.0, 1), (-1.0, 2)]);
//! ```

pub mod dynamics;
pub mod eigen;
pub mod error;
pub mod exec;
pub mod function;
pub mod graphs;
pub mod io;
pub mod laplacian;
pub mod linalg;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Execution;
pub use function::VertexFunction;
pub use graphs::{build_graph, Family, FractalGraph, VertexAddress, Word};
