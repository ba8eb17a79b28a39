//! Exact computer algebra for the Gauss-Manin connection of the Dwork
//! family of Calabi-Yau n-folds.
//!
//! The pipeline runs entirely in exact rational arithmetic: from the
//! hypergeometric Picard-Fuchs operator, through the connection matrix and
//! intersection form in the omega-basis, the enhanced-moduli parameter
//! solve, the modular vector field R_n with its Yukawa couplings, to big
//! rational q-expansion solutions verified against classical quasi-modular
//! forms.

pub mod charts;
pub mod exact;
pub mod matrix;
pub mod gaussmanin;
pub mod intersection;
pub mod modularforms;
pub mod moduli;
pub mod picardfuchs;
pub mod qsolver;
pub mod report;
pub mod vectorfield;

pub mod cli;

pub use exact::{Error, MPoly, QSeries, Rat, RatFunc, Ring};
