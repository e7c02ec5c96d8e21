//! Mutually fair reward allocation for monotone cooperative games whose
//! rewards can be replicated (every coalition member may receive up to the
//! coalition's full value).
//!
//! The crate computes the unique allocation satisfying weak efficiency,
//! non-participation and balanced reciprocity ([`mechanism::solve`]), checks
//! any allocation against the incentive and fairness axioms
//! ([`axioms::check_all`]), cross-checks the mechanism against independent
//! enumeration ([`oracle`]) and compares it with Shapley-based baselines
//! ([`baselines`]).
//!
//! ```
//! use fairshare::{families, mechanism, Coalition, Rational, Scalar};
//!
//! let game = families::example1::<Rational>();
//! let solution = mechanism::solve(&game);
//! let grand = Coalition::grand(4);
//! let rewards: Vec<String> = solution.matrix.column(grand).iter().map(Scalar::render).collect();
//! assert_eq!(rewards, ["5", "5", "8", "9"]);
//! ```

pub mod axioms;
pub mod baselines;
pub mod coalition;
pub mod families;
pub mod game;
pub mod io;
pub mod matrix;
pub mod mechanism;
pub mod oracle;
pub mod scalar;

pub use coalition::Coalition;
pub use game::{Game, GameError, MAX_PLAYERS};
pub use matrix::RewardMatrix;
pub use scalar::{NumberMode, Rational, Scalar, Tolerance};
