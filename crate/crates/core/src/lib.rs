//! Exact verification toolkit for matrices that are totally positive
//! relative to a labelled tree (T-TP).
//!
//! Everything that makes a sign claim runs over arbitrary-precision
//! rationals. Floating point is confined to [`spectral`], where it is
//! cross-checked against the exact characteristic polynomial.
//!
//! Conventions: tree vertices and [`OrderedIndexList`] entries are 1-based
//! labels, matching how matrices are indexed by vertices. Raw element
//! access on [`ExactMatrix`] is 0-based.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

mod error;
pub mod exactmat;
pub mod poly;
pub mod search;
pub mod spectral;
pub mod tpcheck;
pub mod tree;
pub mod ttp;

mod combin;

pub use error::{Error, Result};
pub use exactmat::{ExactMatrix, OrderedIndexList, Rational};
pub use search::{SearchConfig, SearchOutcome};
pub use spectral::{EigenPair, FloatMatrix, SpectralConfig, TheoremStatus, TheoremVerdict};
pub use tpcheck::{VerdictReport, Witness};
pub use tree::{LabelledTree, TreePath, VertexSigning};
pub use ttp::{HypothesisReport, SignPatternReport};
