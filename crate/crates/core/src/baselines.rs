//! Shapley-based baselines: the classical Shapley value on a subgame and the
//! scaled ρ-Shapley reward matrix for replicable rewards.

use thiserror::Error;

use crate::axioms::{f5_residuals, F5Residual};
use crate::coalition::Coalition;
use crate::game::Game;
use crate::matrix::RewardMatrix;
use crate::mechanism::solve;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BaselineError {
    #[error("the Shapley value needs a non-empty coalition")]
    EmptyCoalition,
    #[error("rho must lie in (0, 1], got {0}")]
    RhoOutOfRange(String),
    #[error("every Shapley value in {0} is zero but the coalition has positive value")]
    ZeroMaxShapley(Coalition),
    #[error("rho = {0} yields irrational rewards; use float mode")]
    InexactPower(String),
    #[error("coalition {0} is outside the game")]
    UnknownCoalition(Coalition),
}

/// Shapley values of the members of one coalition, computed on the subgame
/// restricted to that coalition.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapleyVector<S> {
    pub coalition: Coalition,
    /// One value per member, ascending player index.
    pub values: Vec<S>,
}

impl<S: Scalar> ShapleyVector<S> {
    pub fn get(&self, player: usize) -> Option<&S> {
        self.coalition
            .members()
            .position(|p| p == player)
            .map(|k| &self.values[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &S)> {
        self.coalition.members().zip(&self.values)
    }

    /// `max_i φ_i`.
    pub fn max(&self) -> &S {
        self.values
            .iter()
            .fold(&self.values[0], |b, x| if x > b { x } else { b })
    }
}

/// Shapley value of every member of `coalition` in the subgame on `coalition`:
/// `φ_i = Σ_{S ⊆ C\{i}} |S|!(|C|-1-|S|)!/|C|! · (v(S∪{i}) - v(S))`.
pub fn shapley<S: Scalar>(game: &Game<S>, coalition: Coalition) -> Result<ShapleyVector<S>, BaselineError> {
    if coalition.is_empty() {
        return Err(BaselineError::EmptyCoalition);
    }
    if !game.contains_coalition(coalition) {
        return Err(BaselineError::UnknownCoalition(coalition));
    }
    let size = coalition.len();
    // |S|!(c-1-|S|)!/c! = 1 / (c · binom(c-1, |S|))
    let weights: Vec<S> = (0..size)
        .map(|s| S::from_ratio(1, (size as i64) * binomial(size as i64 - 1, s as i64)))
        .collect();
    let values = coalition
        .members()
        .map(|i| {
            coalition
                .without(i)
                .subsets()
                .fold(S::zero(), |acc, s| {
                    let marginal = game.value(s.with(i)).clone() - game.value(s).clone();
                    acc + weights[s.len()].clone() * marginal
                })
        })
        .collect();
    Ok(ShapleyVector { coalition, values })
}

fn binomial(n: i64, k: i64) -> i64 {
    let k = k.min(n - k);
    (0..k).fold(1, |acc, t| acc * (n - t) / (t + 1))
}

/// The scaled ρ-Shapley matrix together with its exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoShapleyMatrix<S> {
    pub rho: S,
    pub matrix: RewardMatrix<S>,
}

/// `r^C_i = (φ_i / φ*_C)^ρ · v_C` for members (φ on the subgame `C`,
/// `φ*_C = max_{i∈C} φ_i`), `v_i` for non-members. A coalition of value zero
/// pays zero to every member.
pub fn scaled_rho_shapley<S: Scalar>(game: &Game<S>, rho: &S) -> Result<RhoShapleyMatrix<S>, BaselineError> {
    if !(*rho > S::zero() && *rho <= S::one()) {
        return Err(BaselineError::RhoOutOfRange(rho.render()));
    }
    let mut matrix = RewardMatrix::standalone(game);
    for c in Coalition::all(game.n_players()).skip(1) {
        let v_c = game.value(c);
        let phi = shapley(game, c)?;
        let best = phi.max().clone();
        if best.is_zero() {
            if !v_c.is_zero() {
                return Err(BaselineError::ZeroMaxShapley(c));
            }
            for i in c.members() {
                matrix.set(i, c, S::zero());
            }
            continue;
        }
        for (i, phi_i) in phi.iter() {
            let scale = (phi_i.clone() / best.clone())
                .checked_pow(rho)
                .ok_or_else(|| BaselineError::InexactPower(rho.render()))?;
            matrix.set(i, c, scale * v_c.clone());
        }
    }
    Ok(RhoShapleyMatrix {
        rho: rho.clone(),
        matrix,
    })
}

/// One entry where a candidate matrix departs from the mechanism.
#[derive(Debug, Clone, PartialEq)]
pub struct EntryDiff<S> {
    pub coalition: Coalition,
    pub player: usize,
    pub mechanism: S,
    pub candidate: S,
}

/// How far a reward matrix is from balanced reciprocity and from the
/// mechanism's allocation.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceReport<S> {
    /// Every F5 residual of the candidate, including zeros.
    pub residuals: Vec<F5Residual<S>>,
    pub max_residual: S,
    /// Entries that differ from the mechanism's matrix.
    pub diffs: Vec<EntryDiff<S>>,
    pub max_abs_diff: S,
}

/// Compares any candidate matrix for `game` against the mechanism.
pub fn divergence<S: Scalar>(game: &Game<S>, candidate: &RewardMatrix<S>) -> DivergenceReport<S> {
    let reference = solve(game).matrix;
    let residuals = f5_residuals(candidate);
    let max_residual = max_of(residuals.iter().map(|r| &r.residual));
    let diffs: Vec<EntryDiff<S>> = Coalition::all(game.n_players())
        .flat_map(|c| (0..game.n_players()).map(move |i| (c, i)))
        .filter(|&(c, i)| candidate.get(i, c) != reference.get(i, c))
        .map(|(c, i)| EntryDiff {
            coalition: c,
            player: i,
            mechanism: reference.get(i, c).clone(),
            candidate: candidate.get(i, c).clone(),
        })
        .collect();
    let abs: Vec<S> = diffs
        .iter()
        .map(|d| (d.candidate.clone() - d.mechanism.clone()).abs())
        .collect();
    let max_abs_diff = max_of(abs.iter());
    DivergenceReport {
        residuals,
        max_residual,
        diffs,
        max_abs_diff,
    }
}

/// ρ-Shapley versus the mechanism on `game`.
pub fn compare_mechanisms<S: Scalar>(game: &Game<S>, rho: &S) -> Result<DivergenceReport<S>, BaselineError> {
    let r = scaled_rho_shapley(game, rho)?;
    Ok(divergence(game, &r.matrix))
}

fn max_of<'a, S: Scalar + 'a>(xs: impl Iterator<Item = &'a S>) -> S {
    xs.fold(S::zero(), |b, x| if *x > b { x.clone() } else { b })
}
