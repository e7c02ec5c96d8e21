//! Reference solvers that reconstruct the fair allocation without the
//! mechanism's argmax step, used to cross-check it.
//!
//! Weak efficiency, non-participation and balanced reciprocity pin the whole
//! matrix down: once a coalition's efficient player `k` is known, every other
//! member's reward follows from the rewards one level below. The oracles
//! therefore try *every* candidate `k` and keep those that yield a feasible
//! row.

use thiserror::Error;

use crate::axioms::{check, Axiom};
use crate::coalition::Coalition;
use crate::game::Game;
use crate::matrix::RewardMatrix;
use crate::scalar::{Scalar, Tolerance};

/// Largest game accepted by [`brute_force_solve`].
pub const LEVEL_ORACLE_MAX_PLAYERS: usize = 10;
/// Largest game accepted by [`global_enumeration_solve`].
pub const GLOBAL_ORACLE_MAX_PLAYERS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("no candidate efficient player yields a feasible row for {0}")]
    NoFeasibleCandidate(Coalition),
    #[error("oracle accepts at most {limit} players, got {n}")]
    SizeLimitExceeded { n: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult<S> {
    /// Built from the lowest-index surviving candidate of every coalition.
    pub matrix: RewardMatrix<S>,
    /// Surviving candidates per coalition mask (empty below size two).
    pub feasible_k_sets: Vec<Vec<usize>>,
    /// Whether all survivors of every coalition produced identical rows.
    pub unique: bool,
}

/// Member rewards of `c` if `k` is paid `v_C` and every other member is
/// balanced against `k`; in member order.
fn row_for<S: Scalar>(game: &Game<S>, m: &RewardMatrix<S>, c: Coalition, k: usize) -> Vec<S> {
    let v_c = game.value(c);
    c.members()
        .map(|i| {
            if i == k {
                v_c.clone()
            } else {
                v_c.clone() - m.get(k, c.without(i)).clone() + m.get(i, c.without(k)).clone()
            }
        })
        .collect()
}

fn feasible<S: Scalar>(row: &[S], value: &S, tol: Tolerance) -> bool {
    let zero = S::zero();
    row.iter().all(|r| tol.ge(r, &zero) && tol.le(r, value))
}

fn write_row<S: Scalar>(m: &mut RewardMatrix<S>, c: Coalition, row: &[S]) {
    for (i, r) in c.members().zip(row) {
        m.set(i, c, r.clone());
    }
}

/// Level-wise reconstruction keeping every candidate whose row is
/// non-negative and feasible.
pub fn brute_force_solve<S: Scalar>(game: &Game<S>) -> Result<OracleResult<S>, OracleError> {
    let n = game.n_players();
    if n > LEVEL_ORACLE_MAX_PLAYERS {
        return Err(OracleError::SizeLimitExceeded {
            n,
            limit: LEVEL_ORACLE_MAX_PLAYERS,
        });
    }
    let tol = Tolerance::default_for(S::MODE);
    let mut matrix = RewardMatrix::standalone(game);
    let mut feasible_k_sets = vec![Vec::new(); 1 << n];
    let mut unique = true;

    for level in Coalition::by_size(n).into_iter().skip(2) {
        for c in level {
            let survivors: Vec<(usize, Vec<S>)> = c
                .members()
                .map(|k| (k, row_for(game, &matrix, c, k)))
                .filter(|(_, row)| feasible(row, game.value(c), tol))
                .collect();
            let Some((_, first)) = survivors.first() else {
                return Err(OracleError::NoFeasibleCandidate(c));
            };
            unique &= survivors
                .iter()
                .all(|(_, row)| row.iter().zip(first).all(|(a, b)| tol.eq(a, b)));
            let first = first.clone();
            feasible_k_sets[c.index()] = survivors.into_iter().map(|(k, _)| k).collect();
            write_row(&mut matrix, c, &first);
        }
    }

    Ok(OracleResult {
        matrix,
        feasible_k_sets,
        unique,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlobalEnumeration<S> {
    /// Distinct matrices satisfying R1–R5 and F5.
    pub matrices: Vec<RewardMatrix<S>>,
    /// Assignments (one efficient player per coalition) explored.
    pub assignments: usize,
    /// Assignments whose matrix passed every check.
    pub surviving_assignments: usize,
}

/// Enumerates every assignment of an efficient player to every coalition of
/// size at least two, builds the implied matrix and keeps those passing
/// R1–R5 and F5. No candidate is discarded before its matrix is complete.
pub fn global_enumeration_solve<S: Scalar>(game: &Game<S>) -> Result<GlobalEnumeration<S>, OracleError> {
    let n = game.n_players();
    if n > GLOBAL_ORACLE_MAX_PLAYERS {
        return Err(OracleError::SizeLimitExceeded {
            n,
            limit: GLOBAL_ORACLE_MAX_PLAYERS,
        });
    }
    let order: Vec<Coalition> = Coalition::by_size(n).into_iter().skip(2).flatten().collect();
    let mut state = Enumeration {
        game,
        order: &order,
        tol: Tolerance::default_for(S::MODE),
        matrix: RewardMatrix::standalone(game),
        out: GlobalEnumeration {
            matrices: Vec::new(),
            assignments: 0,
            surviving_assignments: 0,
        },
    };
    state.descend(0, true);
    Ok(state.out)
}

struct Enumeration<'a, S> {
    game: &'a Game<S>,
    order: &'a [Coalition],
    tol: Tolerance,
    matrix: RewardMatrix<S>,
    out: GlobalEnumeration<S>,
}

impl<S: Scalar> Enumeration<'_, S> {
    /// `bounded` caches whether every column written so far is within
    /// `[0, v_C]`; it short-cuts the final R1/R2 check, not the enumeration.
    fn descend(&mut self, depth: usize, bounded: bool) {
        let Some(&c) = self.order.get(depth) else {
            self.out.assignments += 1;
            if bounded && self.passes_full_check() {
                self.out.surviving_assignments += 1;
                if !self.out.matrices.contains(&self.matrix) {
                    self.out.matrices.push(self.matrix.clone());
                }
            }
            return;
        };
        for k in c.members() {
            let row = row_for(self.game, &self.matrix, c, k);
            let ok = bounded && feasible(&row, self.game.value(c), self.tol);
            write_row(&mut self.matrix, c, &row);
            self.descend(depth + 1, ok);
        }
    }

    fn passes_full_check(&self) -> bool {
        [Axiom::R1, Axiom::R2, Axiom::R3, Axiom::R4, Axiom::R5, Axiom::F5]
            .iter()
            .all(|&a| {
                check(a, self.game, &self.matrix, self.tol)
                    .expect("matrix built for this game")
                    .passed()
            })
    }
}
