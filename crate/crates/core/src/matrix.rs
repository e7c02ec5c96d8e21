//! The `n × 2^n` reward matrix: entry `(i, C)` is player `i`'s reward if
//! coalition `C` forms.

use thiserror::Error;

use crate::coalition::Coalition;
use crate::game::Game;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("player {player} or coalition {coalition} out of range for {n} players")]
    OutOfRange {
        player: usize,
        coalition: Coalition,
        n: usize,
    },
    #[error("matrix has {got} entries, expected {expected}")]
    BadShape { got: usize, expected: usize },
}

/// Dense reward matrix stored coalition-major (`rewards[mask * n + player]`),
/// so each coalition's column is contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardMatrix<S> {
    n: usize,
    rewards: Vec<S>,
}

impl<S: Scalar> RewardMatrix<S> {
    /// Every entry set to the player's standalone value, which is already the
    /// final answer for `|C| <= 1` and for every non-member.
    pub fn standalone(game: &Game<S>) -> Self {
        let n = game.n_players();
        let column: Vec<S> = (0..n).map(|i| game.standalone(i).clone()).collect();
        let mut rewards = Vec::with_capacity(n << n);
        for _ in 0..1usize << n {
            rewards.extend_from_slice(&column);
        }
        RewardMatrix { n, rewards }
    }

    /// Constant matrix.
    pub fn filled(n: usize, value: S) -> Self {
        RewardMatrix {
            n,
            rewards: vec![value; n << n],
        }
    }

    /// Wraps coalition-major entries.
    pub fn from_entries(n: usize, rewards: Vec<S>) -> Result<Self, MatrixError> {
        let expected = n << n;
        if rewards.len() != expected {
            return Err(MatrixError::BadShape {
                got: rewards.len(),
                expected,
            });
        }
        Ok(RewardMatrix { n, rewards })
    }

    pub fn n_players(&self) -> usize {
        self.n
    }

    pub fn get(&self, player: usize, c: Coalition) -> &S {
        &self.rewards[c.index() * self.n + player]
    }

    /// Bounds-checked lookup of `M^C_i`.
    pub fn reward(&self, player: usize, c: Coalition) -> Result<&S, MatrixError> {
        if player >= self.n || c.index() >= 1 << self.n {
            return Err(MatrixError::OutOfRange {
                player,
                coalition: c,
                n: self.n,
            });
        }
        Ok(self.get(player, c))
    }

    pub fn set(&mut self, player: usize, c: Coalition, value: S) {
        self.rewards[c.index() * self.n + player] = value;
    }

    /// Rewards of all players if `c` forms.
    pub fn column(&self, c: Coalition) -> &[S] {
        let start = c.index() * self.n;
        &self.rewards[start..start + self.n]
    }

    pub(crate) fn column_mut(&mut self, c: Coalition) -> &mut [S] {
        let start = c.index() * self.n;
        &mut self.rewards[start..start + self.n]
    }

    pub fn entries(&self) -> &[S] {
        &self.rewards
    }

    pub fn fits(&self, game: &Game<S>) -> bool {
        self.n == game.n_players()
    }

    pub fn to_float(&self) -> RewardMatrix<f64> {
        RewardMatrix {
            n: self.n,
            rewards: self.rewards.iter().map(Scalar::to_f64).collect(),
        }
    }
}
