//! Uniform permutations avoiding a decreasing pattern, their encodings as
//! pairs of words and lattice paths in the Weyl chamber, and the traceless
//! Dyson Brownian bridge that describes their scaling limit.
//!
//! The crate is organised bottom-up:
//!
//! * [`perm`]: permutations, pattern containment, the layer decomposition
//!   into increasing subsequences and the labelled permutation matrix.
//! * [`words`], [`path`], [`petrov`], [`cone`], [`family`]: word pairs,
//!   their lattice paths, moderate-deviation window checks, cone predicates
//!   and the scaled piecewise-linear path families.
//! * [`rsk`], [`young`], [`sampler`], [`bridge_dp`]: exact samplers.
//! * [`dyson`]: the Hermitian bridge, its eigenvalue process and the limiting
//!   densities.
//! * [`stats`]: the distributional test harness.
//! * [`experiments`]: the end-to-end runs driven by the command line tool.

pub mod bridge_dp;
pub mod cone;
pub mod dyson;
mod error;
pub mod experiments;
pub mod family;
pub mod path;
pub mod perm;
pub mod petrov;
pub mod rng;
pub mod rsk;
pub mod sampler;
pub mod stats;
pub mod words;
pub mod young;

pub use error::{Error, Result};
pub use family::ScaledPathFamily;
pub use path::LatticePath;
pub use perm::{LabelMatrix, LayerDecomposition, Permutation};
pub use rng::SeededRng;
pub use words::LayeredWords;
