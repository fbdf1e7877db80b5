//! Exact measure-theoretic machinery for inhomogeneous Diophantine
//! approximation experiments: torus preimage sets and their intersection
//! measures, weighted quasi-independence pair sums, gcd-sum estimates,
//! Monte Carlo limsup experiments, and Lebesgue-to-Hausdorff transference.

pub mod arith;
pub mod enclosure;
pub mod error;
pub mod lattice;
pub mod montecarlo;
pub mod qia;
pub mod rational;
pub mod torus;
pub mod transfer;
pub mod verify;

pub use enclosure::Enclosure;
pub use error::{KgError, Result};
pub use lattice::{LatticeMode, LatticeVector};
pub use montecarlo::{HitHistogram, McEstimate, MixingEstimate, SampleSpec};
pub use qia::{BallSequence, CenterRule, PairSumReport, RadiusRule, Trend};
pub use rational::Rational;
pub use torus::{Ball, IntervalUnion};
pub use transfer::{DichotomyPrediction, DimensionFunction, Prediction, SeriesVerdict, Verdict};
pub use verify::{CheckOutcome, Suite, SuiteReport};
