//! Exhaustive checks of a reward matrix against the incentive axioms R1–R5
//! and the fairness axioms F1–F5.
//!
//! Every check enumerates its full quantifier range. Coalitions are scanned
//! in ascending mask order and players in ascending index order, so the first
//! violation found (the witness) is reproducible.

use std::fmt;

use thiserror::Error;

use crate::coalition::Coalition;
use crate::game::Game;
use crate::matrix::RewardMatrix;
use crate::scalar::{Scalar, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    /// Non-negativity.
    R1,
    /// Feasibility: no member gets more than the coalition value.
    R2,
    /// Weak efficiency: some member gets the full coalition value.
    R3,
    /// Individual rationality.
    R4,
    /// Non-members get their standalone value.
    R5,
    /// Uselessness.
    F1,
    /// Symmetry.
    F2,
    /// Strict desirability.
    F3,
    /// Strict monotonicity (compares two games).
    F4,
    /// Balanced reciprocity.
    F5,
}

impl Axiom {
    /// The axioms decidable from a single game and matrix, in report order.
    pub const SINGLE_GAME: [Axiom; 9] = [
        Axiom::R1,
        Axiom::R2,
        Axiom::R3,
        Axiom::R4,
        Axiom::R5,
        Axiom::F1,
        Axiom::F2,
        Axiom::F3,
        Axiom::F5,
    ];

    pub fn is_incentive(self) -> bool {
        matches!(
            self,
            Axiom::R1 | Axiom::R2 | Axiom::R3 | Axiom::R4 | Axiom::R5
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Axiom::R1 => "non-negativity",
            Axiom::R2 => "feasibility",
            Axiom::R3 => "weak efficiency",
            Axiom::R4 => "individual rationality",
            Axiom::R5 => "non-participation",
            Axiom::F1 => "uselessness",
            Axiom::F2 => "symmetry",
            Axiom::F3 => "strict desirability",
            Axiom::F4 => "strict monotonicity",
            Axiom::F5 => "balanced reciprocity",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("matrix is for {matrix} players but the game has {game}")]
    DimensionMismatch { matrix: usize, game: usize },
    #[error("{0} is not an incentive axiom")]
    NotAnIncentiveAxiom(Axiom),
    #[error("F4 compares two games; use check_f4_pair")]
    RequiresTwoGames,
    #[error("player {player} is not a member of {coalition}")]
    NotAMember { player: usize, coalition: Coalition },
}

/// The concrete quantifier instantiation demonstrating a violation.
/// Players are 0-indexed.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness<S> {
    /// R1: `M^C_i < 0`.
    Negative {
        coalition: Coalition,
        player: usize,
        reward: S,
    },
    /// R2: `M^C_i > v_C`.
    ExceedsValue {
        coalition: Coalition,
        player: usize,
        reward: S,
        value: S,
    },
    /// R3: no member of `C` receives `v_C`; `best` is the largest member reward.
    NoneEfficient {
        coalition: Coalition,
        value: S,
        best: S,
    },
    /// R4: `M^C_i < v_i`.
    BelowStandalone {
        coalition: Coalition,
        player: usize,
        reward: S,
        standalone: S,
    },
    /// R5: `M^C_i ≠ v_i` for `i ∉ C`.
    OutsiderReward {
        coalition: Coalition,
        player: usize,
        reward: S,
        standalone: S,
    },
    /// F1: the useless player receives a non-zero reward.
    UselessPaid {
        useless: usize,
        coalition: Coalition,
        reward: S,
    },
    /// F1: adding the useless player changes another member's reward
    /// (`coalition` excludes the useless player).
    UselessShifts {
        useless: usize,
        coalition: Coalition,
        player: usize,
        without: S,
        with: S,
    },
    /// F2: interchangeable players rewarded differently.
    Asymmetric {
        i: usize,
        j: usize,
        coalition: Coalition,
        reward_i: S,
        reward_j: S,
    },
    /// F3: `better` is weakly more valuable everywhere and strictly so for
    /// `evidence ∪ {better}`, yet is not strictly ahead in `coalition`.
    NotStrictlyAhead {
        better: usize,
        worse: usize,
        coalition: Coalition,
        evidence: Coalition,
        reward_better: S,
        reward_worse: S,
    },
    /// F4: reward did not strictly increase after the premised improvement.
    NoStrictIncrease {
        player: usize,
        coalition: Coalition,
        before: S,
        after: S,
    },
    /// F5: `gain_i = M^C_i - M^{C\{j}}_i` differs from `gain_j = M^C_j - M^{C\{i}}_j`.
    Unbalanced {
        coalition: Coalition,
        i: usize,
        j: usize,
        gain_i: S,
        gain_j: S,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict<S> {
    /// Checked against at least one instance and held.
    Pass,
    /// The axiom's premise never applied.
    Vacuous,
    /// F4 only: the two games do not satisfy the premise.
    PremiseNotMet,
    Fail(Witness<S>),
}

impl<S> Verdict<S> {
    pub fn is_failure(&self) -> bool {
        matches!(self, Verdict::Fail(_))
    }

    pub fn witness(&self) -> Option<&Witness<S>> {
        match self {
            Verdict::Fail(w) => Some(w),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport<S> {
    pub axiom: Axiom,
    pub verdict: Verdict<S>,
}

impl<S> AxiomReport<S> {
    pub fn passed(&self) -> bool {
        !self.verdict.is_failure()
    }
}

/// Verdicts for every single-game axiom.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport<S> {
    pub reports: Vec<AxiomReport<S>>,
}

impl<S> SuiteReport<S> {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(AxiomReport::passed)
    }

    pub fn get(&self, axiom: Axiom) -> Option<&AxiomReport<S>> {
        self.reports.iter().find(|r| r.axiom == axiom)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomReport<S>> {
        self.reports.iter().filter(|r| !r.passed())
    }
}

fn ensure_fits<S: Scalar>(game: &Game<S>, matrix: &RewardMatrix<S>) -> Result<(), AxiomError> {
    if matrix.fits(game) {
        Ok(())
    } else {
        Err(AxiomError::DimensionMismatch {
            matrix: matrix.n_players(),
            game: game.n_players(),
        })
    }
}

fn report<S>(axiom: Axiom, verdict: Verdict<S>) -> AxiomReport<S> {
    AxiomReport { axiom, verdict }
}

fn pass_or_fail<S>(axiom: Axiom, witness: Option<Witness<S>>) -> AxiomReport<S> {
    report(axiom, witness.map_or(Verdict::Pass, Verdict::Fail))
}

/// Checks one of R1–R5.
pub fn check_r<S: Scalar>(
    axiom: Axiom,
    game: &Game<S>,
    matrix: &RewardMatrix<S>,
    tol: Tolerance,
) -> Result<AxiomReport<S>, AxiomError> {
    if !axiom.is_incentive() {
        return Err(AxiomError::NotAnIncentiveAxiom(axiom));
    }
    check(axiom, game, matrix, tol)
}

/// Checks any single-game axiom.
pub fn check<S: Scalar>(
    axiom: Axiom,
    game: &Game<S>,
    matrix: &RewardMatrix<S>,
    tol: Tolerance,
) -> Result<AxiomReport<S>, AxiomError> {
    ensure_fits(game, matrix)?;
    let n = game.n_players();
    let zero = S::zero();
    let members = || Coalition::all(n).flat_map(|c| c.members().map(move |i| (c, i)));
    let everyone = || Coalition::all(n).flat_map(move |c| (0..n).map(move |i| (c, i)));

    let r = match axiom {
        Axiom::R1 => pass_or_fail(
            axiom,
            members().find_map(|(c, i)| {
                let m = matrix.get(i, c);
                (tol.compare(m, &zero).is_lt()).then(|| Witness::Negative {
                    coalition: c,
                    player: i,
                    reward: m.clone(),
                })
            }),
        ),
        Axiom::R2 => pass_or_fail(
            axiom,
            members().find_map(|(c, i)| {
                let (m, v) = (matrix.get(i, c), game.value(c));
                tol.gt(m, v).then(|| Witness::ExceedsValue {
                    coalition: c,
                    player: i,
                    reward: m.clone(),
                    value: v.clone(),
                })
            }),
        ),
        Axiom::R3 => pass_or_fail(
            axiom,
            Coalition::all(n).skip(1).find_map(|c| {
                let v = game.value(c);
                if c.members().any(|i| tol.eq(matrix.get(i, c), v)) {
                    return None;
                }
                let best = c
                    .members()
                    .map(|i| matrix.get(i, c))
                    .fold(None::<&S>, |b, m| match b {
                        Some(b) if b >= m => Some(b),
                        _ => Some(m),
                    })
                    .expect("non-empty");
                Some(Witness::NoneEfficient {
                    coalition: c,
                    value: v.clone(),
                    best: best.clone(),
                })
            }),
        ),
        Axiom::R4 => pass_or_fail(
            axiom,
            everyone().find_map(|(c, i)| {
                let (m, s) = (matrix.get(i, c), game.standalone(i));
                tol.compare(m, s).is_lt().then(|| Witness::BelowStandalone {
                    coalition: c,
                    player: i,
                    reward: m.clone(),
                    standalone: s.clone(),
                })
            }),
        ),
        Axiom::R5 => pass_or_fail(
            axiom,
            everyone()
                .filter(|&(c, i)| !c.contains(i))
                .find_map(|(c, i)| {
                    let (m, s) = (matrix.get(i, c), game.standalone(i));
                    (!tol.eq(m, s)).then(|| Witness::OutsiderReward {
                        coalition: c,
                        player: i,
                        reward: m.clone(),
                        standalone: s.clone(),
                    })
                }),
        ),
        Axiom::F1 => f1(game, matrix, tol),
        Axiom::F2 => f2(game, matrix, tol),
        Axiom::F3 => f3(game, matrix, tol),
        Axiom::F5 => f5(game, matrix, tol),
        Axiom::F4 => return Err(AxiomError::RequiresTwoGames),
    };
    Ok(r)
}

/// True iff adding `u` never changes any coalition's value.
pub fn is_useless<S: Scalar>(game: &Game<S>, u: usize, tol: Tolerance) -> bool {
    game.grand()
        .without(u)
        .subsets()
        .all(|c| tol.eq(game.value(c), game.value(c.with(u))))
}

/// True iff `i` and `j` add the same value to every coalition excluding both.
pub fn are_interchangeable<S: Scalar>(game: &Game<S>, i: usize, j: usize, tol: Tolerance) -> bool {
    game.grand()
        .without(i)
        .without(j)
        .subsets()
        .all(|c| tol.eq(game.value(c.with(i)), game.value(c.with(j))))
}

/// True iff `i` is weakly more valuable than `j` in every coalition excluding both.
pub fn weakly_dominates<S: Scalar>(game: &Game<S>, i: usize, j: usize, tol: Tolerance) -> bool {
    game.grand()
        .without(i)
        .without(j)
        .subsets()
        .all(|a| tol.ge(game.value(a.with(i)), game.value(a.with(j))))
}

/// First non-empty `B ⊆ C \ {i, j}` with `v_{B∪{i}} > v_{B∪{j}}`.
pub fn strict_evidence<S: Scalar>(
    game: &Game<S>,
    coalition: Coalition,
    i: usize,
    j: usize,
    tol: Tolerance,
) -> Option<Coalition> {
    coalition
        .without(i)
        .without(j)
        .subsets()
        .skip(1)
        .find(|b| tol.gt(game.value(b.with(i)), game.value(b.with(j))))
}

fn f1<S: Scalar>(game: &Game<S>, matrix: &RewardMatrix<S>, tol: Tolerance) -> AxiomReport<S> {
    let n = game.n_players();
    let zero = S::zero();
    let mut applied = false;
    for u in (0..n).filter(|&u| is_useless(game, u, tol)) {
        applied = true;
        for c in Coalition::all(n) {
            let m = matrix.get(u, c);
            if !tol.eq(m, &zero) {
                return report(
                    Axiom::F1,
                    Verdict::Fail(Witness::UselessPaid {
                        useless: u,
                        coalition: c,
                        reward: m.clone(),
                    }),
                );
            }
        }
        for c in game.grand().without(u).subsets() {
            for i in c.members() {
                let (without, with) = (matrix.get(i, c), matrix.get(i, c.with(u)));
                if !tol.eq(without, with) {
                    return report(
                        Axiom::F1,
                        Verdict::Fail(Witness::UselessShifts {
                            useless: u,
                            coalition: c,
                            player: i,
                            without: without.clone(),
                            with: with.clone(),
                        }),
                    );
                }
            }
        }
    }
    report(Axiom::F1, if applied { Verdict::Pass } else { Verdict::Vacuous })
}

fn f2<S: Scalar>(game: &Game<S>, matrix: &RewardMatrix<S>, tol: Tolerance) -> AxiomReport<S> {
    let n = game.n_players();
    let mut applied = false;
    for i in 0..n {
        for j in (i + 1..n).filter(|&j| are_interchangeable(game, i, j, tol)) {
            applied = true;
            let both = Coalition::singleton(i).with(j);
            for c in Coalition::all(n).filter(|c| both.is_subset_of(*c)) {
                let (mi, mj) = (matrix.get(i, c), matrix.get(j, c));
                if !tol.eq(mi, mj) {
                    return report(
                        Axiom::F2,
                        Verdict::Fail(Witness::Asymmetric {
                            i,
                            j,
                            coalition: c,
                            reward_i: mi.clone(),
                            reward_j: mj.clone(),
                        }),
                    );
                }
            }
        }
    }
    report(Axiom::F2, if applied { Verdict::Pass } else { Verdict::Vacuous })
}

fn f3<S: Scalar>(game: &Game<S>, matrix: &RewardMatrix<S>, tol: Tolerance) -> AxiomReport<S> {
    let n = game.n_players();
    let mut applied = false;
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i && weakly_dominates(game, i, j, tol)) {
            let both = Coalition::singleton(i).with(j);
            for c in Coalition::all(n).filter(|c| both.is_subset_of(*c)) {
                let Some(evidence) = strict_evidence(game, c, i, j, tol) else {
                    continue;
                };
                applied = true;
                let (mi, mj) = (matrix.get(i, c), matrix.get(j, c));
                if !tol.gt(mi, mj) {
                    return report(
                        Axiom::F3,
                        Verdict::Fail(Witness::NotStrictlyAhead {
                            better: i,
                            worse: j,
                            coalition: c,
                            evidence,
                            reward_better: mi.clone(),
                            reward_worse: mj.clone(),
                        }),
                    );
                }
            }
        }
    }
    report(Axiom::F3, if applied { Verdict::Pass } else { Verdict::Vacuous })
}

fn f5<S: Scalar>(game: &Game<S>, matrix: &RewardMatrix<S>, tol: Tolerance) -> AxiomReport<S> {
    let n = game.n_players();
    if n < 2 {
        return report(Axiom::F5, Verdict::Vacuous);
    }
    for c in Coalition::all(n).filter(|c| c.len() >= 2) {
        for i in c.members() {
            for j in c.members().filter(|&j| j > i) {
                let (gain_i, gain_j) = gains(matrix, c, i, j);
                if !tol.eq(&gain_i, &gain_j) {
                    return report(
                        Axiom::F5,
                        Verdict::Fail(Witness::Unbalanced {
                            coalition: c,
                            i,
                            j,
                            gain_i,
                            gain_j,
                        }),
                    );
                }
            }
        }
    }
    report(Axiom::F5, Verdict::Pass)
}

/// `(M^C_i - M^{C\{j}}_i, M^C_j - M^{C\{i}}_j)`.
fn gains<S: Scalar>(matrix: &RewardMatrix<S>, c: Coalition, i: usize, j: usize) -> (S, S) {
    (
        matrix.get(i, c).clone() - matrix.get(i, c.without(j)).clone(),
        matrix.get(j, c).clone() - matrix.get(j, c.without(i)).clone(),
    )
}

pub fn check_f1<S: Scalar>(
    game: &Game<S>,
    matrix: &RewardMatrix<S>,
    tol: Tolerance,
) -> Result<AxiomReport<S>, AxiomError> {
    check(Axiom::F1, game, matrix, tol)
}

pub fn check_f2<S: Scalar>(
    game: &Game<S>,
    matrix: &RewardMatrix<S>,
    tol: Tolerance,
) -> Result<AxiomReport<S>, AxiomError> {
    check(Axiom::F2, game, matrix, tol)
}

pub fn check_f3<S: Scalar>(
    game: &Game<S>,
    matrix: &RewardMatrix<S>,
    tol: Tolerance,
) -> Result<AxiomReport<S>, AxiomError> {
    check(Axiom::F3, game, matrix, tol)
}

pub fn check_f5<S: Scalar>(
    game: &Game<S>,
    matrix: &RewardMatrix<S>,
    tol: Tolerance,
) -> Result<AxiomReport<S>, AxiomError> {
    check(Axiom::F5, game, matrix, tol)
}

/// Whether `(v, v2, i, C)` satisfies the strict-monotonicity premise: `v2`
/// improves `C`, never lowers a coalition `A ∪ {i}` inside `C`, and leaves
/// every `D ⊆ C \ {i}` unchanged.
pub fn f4_premise<S: Scalar>(
    v: &Game<S>,
    v2: &Game<S>,
    player: usize,
    coalition: Coalition,
    tol: Tolerance,
) -> bool {
    let rest = coalition.without(player);
    tol.gt(v2.value(coalition), v.value(coalition))
        && rest
            .subsets()
            .all(|a| tol.ge(v2.value(a.with(player)), v.value(a.with(player))))
        && rest.subsets().all(|d| tol.eq(v2.value(d), v.value(d)))
}

/// Strict monotonicity for one `(v, v2, i, C)` instance.
pub fn check_f4_pair<S: Scalar>(
    v: &Game<S>,
    v2: &Game<S>,
    player: usize,
    coalition: Coalition,
    matrix_v: &RewardMatrix<S>,
    matrix_v2: &RewardMatrix<S>,
    tol: Tolerance,
) -> Result<AxiomReport<S>, AxiomError> {
    ensure_fits(v, matrix_v)?;
    ensure_fits(v, matrix_v2)?;
    if v2.n_players() != v.n_players() {
        return Err(AxiomError::DimensionMismatch {
            matrix: v2.n_players(),
            game: v.n_players(),
        });
    }
    if player >= v.n_players() || !coalition.contains(player) || !v.contains_coalition(coalition) {
        return Err(AxiomError::NotAMember { player, coalition });
    }
    if !f4_premise(v, v2, player, coalition, tol) {
        return Ok(report(Axiom::F4, Verdict::PremiseNotMet));
    }
    let (before, after) = (matrix_v.get(player, coalition), matrix_v2.get(player, coalition));
    Ok(pass_or_fail(
        Axiom::F4,
        (!tol.gt(after, before)).then(|| Witness::NoStrictIncrease {
            player,
            coalition,
            before: before.clone(),
            after: after.clone(),
        }),
    ))
}

/// R1–R5, F1–F3 and F5.
pub fn check_all<S: Scalar>(
    game: &Game<S>,
    matrix: &RewardMatrix<S>,
    tol: Tolerance,
) -> Result<SuiteReport<S>, AxiomError> {
    let reports = Axiom::SINGLE_GAME
        .iter()
        .map(|&a| check(a, game, matrix, tol))
        .collect::<Result<_, _>>()?;
    Ok(SuiteReport { reports })
}

/// One balanced-reciprocity residual `|gain_i - gain_j|`.
#[derive(Debug, Clone, PartialEq)]
pub struct F5Residual<S> {
    pub coalition: Coalition,
    pub i: usize,
    pub j: usize,
    pub residual: S,
}

/// Residuals for every coalition and unordered member pair.
pub fn f5_residuals<S: Scalar>(matrix: &RewardMatrix<S>) -> Vec<F5Residual<S>> {
    let n = matrix.n_players();
    let mut out = Vec::new();
    for c in Coalition::all(n).filter(|c| c.len() >= 2) {
        for i in c.members() {
            for j in c.members().filter(|&j| j > i) {
                let (gi, gj) = gains(matrix, c, i, j);
                out.push(F5Residual {
                    coalition: c,
                    i,
                    j,
                    residual: (gi - gj).abs(),
                });
            }
        }
    }
    out
}

impl<S: Scalar> Witness<S> {
    /// Re-evaluates the witness against `game` and `matrix`: the recorded
    /// values must match the matrix and still violate the axiom. For F4 only
    /// the recorded values are compared.
    pub fn reproduces(&self, game: &Game<S>, matrix: &RewardMatrix<S>, tol: Tolerance) -> bool {
        let zero = S::zero();
        match self {
            Witness::Negative {
                coalition,
                player,
                reward,
            } => {
                coalition.contains(*player)
                    && matrix.get(*player, *coalition) == reward
                    && tol.compare(reward, &zero).is_lt()
            }
            Witness::ExceedsValue {
                coalition,
                player,
                reward,
                value,
            } => {
                coalition.contains(*player)
                    && matrix.get(*player, *coalition) == reward
                    && game.value(*coalition) == value
                    && tol.gt(reward, value)
            }
            Witness::NoneEfficient { coalition, value, .. } => {
                !coalition.is_empty()
                    && game.value(*coalition) == value
                    && coalition
                        .members()
                        .all(|i| !tol.eq(matrix.get(i, *coalition), value))
            }
            Witness::BelowStandalone {
                coalition,
                player,
                reward,
                standalone,
            } => {
                matrix.get(*player, *coalition) == reward
                    && game.standalone(*player) == standalone
                    && tol.compare(reward, standalone).is_lt()
            }
            Witness::OutsiderReward {
                coalition,
                player,
                reward,
                standalone,
            } => {
                !coalition.contains(*player)
                    && matrix.get(*player, *coalition) == reward
                    && game.standalone(*player) == standalone
                    && !tol.eq(reward, standalone)
            }
            Witness::UselessPaid {
                useless,
                coalition,
                reward,
            } => {
                is_useless(game, *useless, tol)
                    && matrix.get(*useless, *coalition) == reward
                    && !tol.eq(reward, &zero)
            }
            Witness::UselessShifts {
                useless,
                coalition,
                player,
                without,
                with,
            } => {
                is_useless(game, *useless, tol)
                    && !coalition.contains(*useless)
                    && coalition.contains(*player)
                    && matrix.get(*player, *coalition) == without
                    && matrix.get(*player, coalition.with(*useless)) == with
                    && !tol.eq(without, with)
            }
            Witness::Asymmetric {
                i,
                j,
                coalition,
                reward_i,
                reward_j,
            } => {
                are_interchangeable(game, *i, *j, tol)
                    && coalition.contains(*i)
                    && coalition.contains(*j)
                    && matrix.get(*i, *coalition) == reward_i
                    && matrix.get(*j, *coalition) == reward_j
                    && !tol.eq(reward_i, reward_j)
            }
            Witness::NotStrictlyAhead {
                better,
                worse,
                coalition,
                evidence,
                reward_better,
                reward_worse,
            } => {
                let (i, j) = (*better, *worse);
                weakly_dominates(game, i, j, tol)
                    && coalition.contains(i)
                    && coalition.contains(j)
                    && !evidence.is_empty()
                    && evidence.is_subset_of(coalition.without(i).without(j))
                    && tol.gt(game.value(evidence.with(i)), game.value(evidence.with(j)))
                    && matrix.get(i, *coalition) == reward_better
                    && matrix.get(j, *coalition) == reward_worse
                    && !tol.gt(reward_better, reward_worse)
            }
            Witness::NoStrictIncrease { before, after, .. } => !tol.gt(after, before),
            Witness::Unbalanced {
                coalition,
                i,
                j,
                gain_i,
                gain_j,
            } => {
                let (gi, gj) = gains(matrix, *coalition, *i, *j);
                coalition.contains(*i)
                    && coalition.contains(*j)
                    && &gi == gain_i
                    && &gj == gain_j
                    && !tol.eq(gain_i, gain_j)
            }
        }
    }
}
