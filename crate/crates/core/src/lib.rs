//! A classical two-cube system that reproduces the contextual structure of
//! the Mermin-Peres magic square.
//!
//! Each cube's ontic state is a vertex `(x, y, z)` with coordinates in
//! `{+1, -1}`. Measurements reveal at most two bits about the pair and then
//! replace the state by a fixed distribution determined by the setting and
//! outcome (see [`measurement`]). With that disturbance rule:
//!
//! * `XX&YY`, `XX&ZZ`, `ZZ&YY` read the compatible triple `X1X2, Y1Y2, Z1Z2`
//!   repeatably, and their product is always `-1`;
//! * `XY&YX`, `YX&ZZ`, `XY&ZZ` read `X1Y2, Y1X2, Z1Z2` repeatably with
//!   product `+1`;
//! * local pairs `A1&B2` read `A1, B2, A1B2` with product `+1`.
//!
//! So the model meets the row/column constraints of the square from every
//! initial state, which no assignment of context-free values can do.
//! Values of individual observables depend on the order of measurement.
//!
//! ```
//! use magicsquare_core::{point_state, run_exact, assign_values, context_product, ContextId, Sign};
//!
//! let start = point_state("(+,-,+)x(+,+,-)".parse().unwrap());
//! let order = ["XX&YY".parse().unwrap(), "ZZ&YY".parse().unwrap()];
//! let trace = &run_exact(&start, &order).unwrap()[0];
//! let values = assign_values(ContextId::C3, trace).unwrap();
//! assert_eq!(context_product(&values), Sign::Minus);
//! ```
//!
//! All probabilities are exact rationals; there is no floating point in the
//! model.

pub mod epistemic;
pub mod error;
pub mod measurement;
pub mod model;
pub mod quantum;
pub mod rational;
pub mod scenario;
pub mod sequences;
pub mod verifier;

pub use epistemic::{
    canonical_state, canonical_state_on, elementary_state, point_state, point_state_elementary,
    states_equal, tensor, CanonicalStateName, EpistemicState, Space,
};
pub use error::{Error, Result};
pub use measurement::{
    measure, measure_elementary, outcome_of, post_state_for, sample, Branch, MeasurementSetting,
    Model, NonLocalSetting, Outcome, PostStateTables, Table,
};
pub use model::{
    evaluate_observable, parity_profile, Axis, JointOnticState, Observable, OnticState,
    ParityProfile, Sign, Subsystem,
};
pub use quantum::{
    commutes, pauli_tensor, quantum_signature, verify_quantum_square, GaussianInt, Matrix4, Pauli,
};
pub use rational::Rational;
pub use scenario::{parse_scenarios, Scenario, ScenarioError};
pub use sequences::{
    assign_values, context_product, run_exact, run_sampled, ContextFamily, ContextId, Step, Trace,
    ValueAssignment,
};
pub use verifier::{
    check_eigenstates, check_repeatability, check_support_partition, exhaustive_verify,
    square_products, ContextOrders, Counterexample, SquareResult, VerificationReport, Verifier,
    NONCONTEXTUAL_BOUND,
};
