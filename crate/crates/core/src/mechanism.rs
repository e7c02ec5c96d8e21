//! The balanced-reciprocity solution function.
//!
//! Rewards are built bottom-up over coalition size. Coalitions of size at
//! most one, and every non-member of a coalition, receive the standalone
//! value. For a coalition `C` with at least two members:
//!
//! 1. pick an anchor `j ∈ C` and score every member as if `j` were paid `v_C`:
//!    `m_j = v_C`, `m_i = v_C - M^{C\{i}}_j + M^{C\{j}}_i`;
//! 2. the top-scoring member `k` is the efficient player and gets `v_C`;
//! 3. every other member gets `M^C_i = v_C - M^{C\{i}}_k + M^{C\{k}}_i`, which
//!    balances the pairwise gains between `i` and `k`.
//!
//! The result does not depend on the anchor or on how ties in step 2 are
//! broken; both choices are exposed so that this can be tested.

use rayon::prelude::*;
use thiserror::Error;

use crate::coalition::Coalition;
use crate::game::Game;
use crate::matrix::RewardMatrix;
use crate::scalar::Scalar;

/// Levels with at least this many coalitions are solved in parallel.
const PARALLEL_LEVEL_THRESHOLD: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MechanismError {
    #[error("anchor {player} chosen for {coalition} is not a member")]
    BadAnchor { coalition: Coalition, player: usize },
    #[error("efficient player {player} chosen for {coalition} is not among the top-scoring members")]
    BadTieBreak { coalition: Coalition, player: usize },
}

/// The member awarded the full coalition value, for every coalition with at
/// least two members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfficientPlayerMap(Vec<Option<usize>>);

impl EfficientPlayerMap {
    pub fn get(&self, c: Coalition) -> Option<usize> {
        self.0.get(c.index()).copied().flatten()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Coalition, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(mask, k)| k.map(|k| (Coalition::from_mask(mask as u32), k)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution<S> {
    pub matrix: RewardMatrix<S>,
    pub efficient: EfficientPlayerMap,
}

/// Solves with the lowest-index anchor and the lowest-index tie-break.
pub fn solve<S: Scalar>(game: &Game<S>) -> Solution<S> {
    solve_with(game, lowest_member, |_, ties| ties[0])
        .expect("built-in anchor and tie-break choose members")
}

/// Solves with a caller-chosen anchor per coalition.
pub fn solve_with_anchor<S, A>(game: &Game<S>, anchor: A) -> Result<RewardMatrix<S>, MechanismError>
where
    S: Scalar,
    A: Fn(Coalition) -> usize + Sync,
{
    solve_with(game, anchor, |_, ties| ties[0]).map(|s| s.matrix)
}

/// Solves with caller-chosen anchors and tie-breaks. `tie_break` receives the
/// members attaining the maximal score (ascending) and must return one of them.
pub fn solve_with<S, A, T>(game: &Game<S>, anchor: A, tie_break: T) -> Result<Solution<S>, MechanismError>
where
    S: Scalar,
    A: Fn(Coalition) -> usize + Sync,
    T: Fn(Coalition, &[usize]) -> usize + Sync,
{
    let n = game.n_players();
    let mut matrix = RewardMatrix::standalone(game);
    let mut efficient = vec![None; 1 << n];

    for level in Coalition::by_size(n).into_iter().skip(2) {
        // Each column depends only on the previous level, so a level can be
        // computed in any order before it is written back.
        let solve_one = |&c: &Coalition| solve_coalition(game, &matrix, c, &anchor, &tie_break);
        let columns: Vec<_> = if level.len() >= PARALLEL_LEVEL_THRESHOLD {
            level.par_iter().map(solve_one).collect::<Result<_, _>>()?
        } else {
            level.iter().map(solve_one).collect::<Result<_, _>>()?
        };
        for (c, k, rewards) in columns {
            efficient[c.index()] = Some(k);
            let column = matrix.column_mut(c);
            for (i, r) in c.members().zip(rewards) {
                column[i] = r;
            }
        }
    }

    Ok(Solution {
        matrix,
        efficient: EfficientPlayerMap(efficient),
    })
}

/// Computes the members' rewards for one coalition; returns them in member order.
fn solve_coalition<S, A, T>(
    game: &Game<S>,
    m: &RewardMatrix<S>,
    c: Coalition,
    anchor: &A,
    tie_break: &T,
) -> Result<(Coalition, usize, Vec<S>), MechanismError>
where
    S: Scalar,
    A: Fn(Coalition) -> usize,
    T: Fn(Coalition, &[usize]) -> usize,
{
    let v_c = game.value(c);
    let j = anchor(c);
    if !c.contains(j) {
        return Err(MechanismError::BadAnchor {
            coalition: c,
            player: j,
        });
    }

    let scores: Vec<(usize, S)> = c
        .members()
        .map(|i| {
            let score = if i == j {
                v_c.clone()
            } else {
                v_c.clone() - m.get(j, c.without(i)).clone() + m.get(i, c.without(j)).clone()
            };
            (i, score)
        })
        .collect();
    let best = scores
        .iter()
        .map(|(_, s)| s)
        .fold(&scores[0].1, |best, s| if s > best { s } else { best });
    let ties: Vec<usize> = scores
        .iter()
        .filter(|(_, s)| s == best)
        .map(|&(i, _)| i)
        .collect();
    let k = tie_break(c, &ties);
    if !ties.contains(&k) {
        return Err(MechanismError::BadTieBreak {
            coalition: c,
            player: k,
        });
    }

    let rewards = c
        .members()
        .map(|i| {
            if i == k {
                v_c.clone()
            } else {
                v_c.clone() - m.get(k, c.without(i)).clone() + m.get(i, c.without(k)).clone()
            }
        })
        .collect();
    Ok((c, k, rewards))
}

/// Anchor strategy: lowest-index member.
pub fn lowest_member(c: Coalition) -> usize {
    c.first().expect("non-empty coalition")
}

/// Anchor strategy: highest-index member.
pub fn highest_member(c: Coalition) -> usize {
    c.last().expect("non-empty coalition")
}

/// `M^C_i`, bounds-checked.
pub fn reward<S: Scalar>(
    matrix: &RewardMatrix<S>,
    player: usize,
    coalition: Coalition,
) -> Result<&S, crate::matrix::MatrixError> {
    matrix.reward(player, coalition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{counterexample3, example1, gen_random_monotone};
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn c(players: &[usize]) -> Coalition {
        Coalition::from_players(players.iter().map(|p| p - 1))
    }

    fn column(m: &RewardMatrix<Rational>, players: &[usize]) -> Vec<Rational> {
        m.column(c(players)).to_vec()
    }

    #[test]
    fn example1_columns() {
        let sol = solve(&example1::<Rational>());
        let m = &sol.matrix;
        assert_eq!(column(m, &[1, 2]), vec![q(2), q(3), q(1), q(4)]);
        assert_eq!(column(m, &[1, 2, 3]), vec![q(5), q(5), q(6), q(4)]);
        assert_eq!(column(m, &[1, 2, 3, 4]), vec![q(5), q(5), q(8), q(9)]);
        assert_eq!(reward(m, 3, c(&[2, 3, 4])).unwrap(), &q(9));
        assert_eq!(sol.efficient.get(c(&[1, 2, 3, 4])), Some(3));
        assert_eq!(sol.efficient.get(c(&[1])), None);
    }

    #[test]
    fn counterexample_columns() {
        let m = solve(&counterexample3::<Rational>()).matrix;
        assert_eq!(column(&m, &[1, 2]), vec![q(2), q(3), q(3)]);
        assert_eq!(column(&m, &[1, 2, 3]), vec![q(3), q(5), q(6)]);
        assert_eq!(reward(&m, 0, c(&[1, 3])).unwrap(), &q(2));
    }

    #[test]
    fn two_player_additive_by_hand() {
        // anchor 1: m = (3, 3 - 1 + 2) = (3, 4); k = 2; M_1 = 3 - 2 + 1.
        let g = Game::new(2, vec![q(0), q(1), q(2), q(3)]).unwrap();
        let sol = solve(&g);
        assert_eq!(column(&sol.matrix, &[1, 2]), vec![q(2), q(3)]);
        assert_eq!(sol.efficient.get(c(&[1, 2])), Some(1));
    }

    #[test]
    fn empty_and_outsider_columns_are_standalone() {
        let g = gen_random_monotone::<Rational>(4, 5, &q(3));
        let m = solve(&g).matrix;
        for coalition in Coalition::all(4) {
            for i in (0..4).filter(|&i| !coalition.contains(i)) {
                assert_eq!(m.get(i, coalition), g.standalone(i));
            }
        }
    }

    #[test]
    fn anchor_choice_is_irrelevant() {
        let g = example1::<Rational>();
        let base = solve(&g).matrix;
        assert_eq!(solve_with_anchor(&g, highest_member).unwrap(), base);
        let g3 = counterexample3::<Rational>();
        let middle = |c: Coalition| c.members().nth(c.len() / 2).unwrap();
        assert_eq!(solve_with_anchor(&g3, middle).unwrap(), solve(&g3).matrix);
    }

    #[test]
    fn single_player_never_consults_anchor() {
        let g = Game::new(1, vec![q(0), q(7)]).unwrap();
        let m = solve_with_anchor(&g, |_| 99).unwrap();
        assert_eq!(m.entries(), &[q(7), q(7)]);
    }

    #[test]
    fn non_member_anchor_is_rejected() {
        let g = counterexample3::<Rational>();
        let err = solve_with_anchor(&g, |c| if c == Coalition::grand(3) { 7 } else { c.first().unwrap() })
            .unwrap_err();
        assert_eq!(
            err,
            MechanismError::BadAnchor {
                coalition: Coalition::grand(3),
                player: 7
            }
        );
    }

    #[test]
    fn non_maximal_efficient_player_is_rejected() {
        let g = counterexample3::<Rational>();
        let err = solve_with(&g, lowest_member, |c, _| c.first().unwrap()).unwrap_err();
        assert!(matches!(err, MechanismError::BadTieBreak { .. }));
    }

    #[test]
    fn large_game_uses_parallel_levels() {
        let g = gen_random_monotone::<Rational>(12, 1, &q(2));
        let sol = solve(&g);
        let highest = solve_with_anchor(&g, highest_member).unwrap();
        assert_eq!(sol.matrix, highest);
        assert_eq!(sol.matrix.get(sol.efficient.get(g.grand()).unwrap(), g.grand()), g.value(g.grand()));
    }
}
