//! Validated value functions over a fixed player set.

use thiserror::Error;

use crate::coalition::Coalition;
use crate::scalar::Scalar;

/// Upper bound on the number of players; a reward matrix has `n * 2^n` entries.
pub const MAX_PLAYERS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("a game needs between 1 and {MAX_PLAYERS} players, got {0}")]
    PlayerCount(usize),
    #[error("value table has length {got}, expected a power of two{}", expected.map(|e| format!(" ({e})")).unwrap_or_default())]
    BadLength { got: usize, expected: Option<usize> },
    #[error("the empty coalition must have value 0")]
    EmptyNotZero,
    #[error("coalition {0} has a negative value")]
    NegativeValue(Coalition),
    #[error("coalition {0} has a non-finite value")]
    NonFinite(Coalition),
    #[error("not monotone: v{subset} > v{superset}")]
    NotMonotone {
        subset: Coalition,
        superset: Coalition,
    },
}

/// A monotone value function with `v(∅) = 0`, stored as a dense table
/// indexed by coalition mask.
#[derive(Debug, Clone, PartialEq)]
pub struct Game<S> {
    n: usize,
    values: Vec<S>,
}

impl<S: Scalar> Game<S> {
    /// Validates and wraps a value table of length `2^n`.
    pub fn new(n: usize, values: Vec<S>) -> Result<Self, GameError> {
        if n == 0 || n > MAX_PLAYERS {
            return Err(GameError::PlayerCount(n));
        }
        if values.len() != 1 << n {
            return Err(GameError::BadLength {
                got: values.len(),
                expected: Some(1 << n),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(GameError::NonFinite(Coalition::from_mask(i as u32)));
        }
        if !values[0].is_zero() {
            return Err(GameError::EmptyNotZero);
        }
        let zero = S::zero();
        if let Some(i) = values.iter().position(|v| *v < zero) {
            return Err(GameError::NegativeValue(Coalition::from_mask(i as u32)));
        }
        if let Some((subset, superset)) = first_monotonicity_violation(&values) {
            return Err(GameError::NotMonotone { subset, superset });
        }
        Ok(Game { n, values })
    }

    pub fn n_players(&self) -> usize {
        self.n
    }

    pub fn grand(&self) -> Coalition {
        Coalition::grand(self.n)
    }

    pub fn value(&self, c: Coalition) -> &S {
        &self.values[c.index()]
    }

    /// `v_i`, the value player `i` achieves alone.
    pub fn standalone(&self, player: usize) -> &S {
        self.value(Coalition::singleton(player))
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn contains_coalition(&self, c: Coalition) -> bool {
        c.index() < self.values.len()
    }

    /// Copy of this game with `v(c)` replaced; revalidated.
    pub fn with_value(&self, c: Coalition, value: S) -> Result<Self, GameError> {
        let mut values = self.values.clone();
        values[c.index()] = value;
        Game::new(self.n, values)
    }

    /// Converts every value into another scalar type; revalidated.
    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Result<Game<T>, GameError> {
        Game::new(self.n, self.values.iter().map(f).collect())
    }

    /// Float copy of this game.
    pub fn to_float(&self) -> Game<f64> {
        Game {
            n: self.n,
            values: self.values.iter().map(Scalar::to_f64).collect(),
        }
    }
}

/// True iff `values[C \ {i}] <= values[C]` for every coalition and member.
pub fn is_monotone<S: Scalar>(values: &[S]) -> Result<bool, GameError> {
    if !values.len().is_power_of_two() {
        return Err(GameError::BadLength {
            got: values.len(),
            expected: None,
        });
    }
    Ok(first_monotonicity_violation(values).is_none())
}

/// First `(C \ {i}, C)` with `v(C \ {i}) > v(C)`, scanning masks then players
/// in ascending order. Single-element steps suffice by transitivity.
pub fn first_monotonicity_violation<S: Scalar>(values: &[S]) -> Option<(Coalition, Coalition)> {
    (0..values.len()).find_map(|mask| {
        let c = Coalition::from_mask(mask as u32);
        c.members()
            .map(|i| c.without(i))
            .find(|sub| values[sub.index()] > values[mask])
            .map(|sub| (sub, c))
    })
}
