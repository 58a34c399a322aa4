//! Exact length census of tautological laminations.
//!
//! The census `N_q(n, m)` counts the components of the circle pinched along
//! the depth `<= n` leaves of the degree `q` tautological lamination whose
//! length is `2^m q^-n`. It is computed three independent ways:
//!
//! - [`lamination`]: build the leaves digit by digit and pinch the circle;
//! - [`treepoly`]: enumerate tree polynomials, either explicitly or through
//!   the compressed F-sequence digraph;
//! - [`words`]: count 1-unbordered words, which gives the `m = 0` column.
//!
//! [`census`] reconciles the engines against each other and against the
//! published reference tables.

pub mod census;
pub mod error;
pub mod lamination;
pub mod table;
pub mod treepoly;
pub mod words;

pub use census::{reconcile, EngineSet, ReconciliationReport, ReferenceTable};
pub use error::{Result, TautError};
pub use lamination::{
    census as lamination_census, Chord, CirclePoint, Lamination, PinchResult, Tick,
};
pub use table::CensusTable;
pub use treepoly::{census_trees, FSequence, GammaState, TreePolynomial};
pub use words::{CountSequence, DigitWord, SeriesCoefficients};
