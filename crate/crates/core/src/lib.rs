//! Crystals of Lakshmibai-Seshadri paths of level-zero shape for affine Lie algebras.
//!
//! Everything is computed in exact rational arithmetic. The modules build on each other in order:
//! [`affine_data`] fixes the affine type, [`weights`] handles the level-zero weight lattice,
//! [`chain_order`] decides chains and sigma-chains by bounded search, [`paths`] implements the
//! root operators, [`crystal_graph`] generates finite crystal graphs, [`ls_crystal`] decomposes
//! the path crystal into components and [`affinization`] relates it to the affinization of the
//! classical crystal.

pub mod affine_data;
pub mod affinization;
pub mod chain_order;
pub mod crystal_graph;
pub mod error;
pub mod ls_crystal;
pub mod par;
pub mod paths;
pub mod rational;
pub mod weights;

pub use affine_data::{AffineCartanDatum, AffineType, FiniteRoot, PositiveRealRoot, RootKind};
pub use error::{Error, Result};
pub use paths::{ClPath, Path};
pub use rational::Q;
pub use weights::{ClWeight, DominantShape, LevelZeroWeight};
