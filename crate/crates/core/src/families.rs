//! Generators for the game families used in tests and by the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coalition::Coalition;
use crate::game::{Game, GameError, MAX_PLAYERS};
use crate::scalar::Scalar;

/// Random increments are drawn from `{0, 1/GRID, ..., 1} * max_increment`,
/// fine enough that exact ties between increments are practically absent.
pub const INCREMENT_GRID: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("bad family parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// A named game family together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Family<S> {
    /// `v(C) = Σ_{i∈C} weights[i]`.
    Additive { weights: Vec<S> },
    /// Player `i` owns the elements `owned[i]`; `v(C)` is the total weight of
    /// the union of the members' elements.
    Coverage {
        owned: Vec<Vec<usize>>,
        element_weights: Vec<S>,
    },
    /// The 4-player worked example.
    Example1,
    /// The 3-player additive game on which scaled Shapley breaks balanced reciprocity.
    Counterexample3,
    RandomMonotone {
        n: usize,
        seed: u64,
        max_increment: S,
    },
}

pub fn gen_family<S: Scalar>(family: &Family<S>) -> Result<Game<S>, FamilyError> {
    match family {
        Family::Additive { weights } => additive(weights),
        Family::Coverage {
            owned,
            element_weights,
        } => coverage(owned, element_weights),
        Family::Example1 => Ok(example1()),
        Family::Counterexample3 => Ok(counterexample3()),
        Family::RandomMonotone {
            n,
            seed,
            max_increment,
        } => {
            check_players(*n)?;
            if *max_increment < S::zero() {
                return Err(FamilyError::BadParams(
                    "max increment must be non-negative".into(),
                ));
            }
            Ok(gen_random_monotone(*n, *seed, max_increment))
        }
    }
}

fn check_players(n: usize) -> Result<(), FamilyError> {
    if n == 0 || n > MAX_PLAYERS {
        return Err(FamilyError::BadParams(format!(
            "player count must be in 1..={MAX_PLAYERS}, got {n}"
        )));
    }
    Ok(())
}

/// Random monotone game built level by level:
/// `v(C) = max_{i∈C} v(C \ {i}) + δ_C`, `δ_C` uniform on a grid over
/// `[0, max_increment]`. Deterministic per seed.
///
/// Panics if `n` is outside `1..=MAX_PLAYERS` or `max_increment` is negative.
pub fn gen_random_monotone<S: Scalar>(n: usize, seed: u64, max_increment: &S) -> Game<S> {
    assert!((1..=MAX_PLAYERS).contains(&n), "player count out of range");
    assert!(*max_increment >= S::zero(), "negative max increment");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values: Vec<S> = Vec::with_capacity(1 << n);
    values.push(S::zero());
    for mask in 1u32..(1 << n) {
        let c = Coalition::from_mask(mask);
        let base = c
            .members()
            .map(|i| &values[c.without(i).index()])
            .fold(None::<&S>, |best, v| match best {
                Some(b) if b >= v => Some(b),
                _ => Some(v),
            })
            .expect("non-empty coalition")
            .clone();
        let step = rng.gen_range(0..=INCREMENT_GRID);
        values.push(base + S::from_ratio(step, INCREMENT_GRID) * max_increment.clone());
    }
    Game::new(n, values).expect("generator yields monotone games")
}

fn additive<S: Scalar>(weights: &[S]) -> Result<Game<S>, FamilyError> {
    check_players(weights.len())?;
    if weights.iter().any(|w| *w < S::zero()) {
        return Err(FamilyError::BadParams("weights must be non-negative".into()));
    }
    let n = weights.len();
    let values = Coalition::all(n)
        .map(|c| c.members().fold(S::zero(), |acc, i| acc + weights[i].clone()))
        .collect();
    Ok(Game::new(n, values)?)
}

fn coverage<S: Scalar>(owned: &[Vec<usize>], element_weights: &[S]) -> Result<Game<S>, FamilyError> {
    check_players(owned.len())?;
    if element_weights.iter().any(|w| *w < S::zero()) {
        return Err(FamilyError::BadParams(
            "element weights must be non-negative".into(),
        ));
    }
    if let Some(&e) = owned.iter().flatten().find(|&&e| e >= element_weights.len()) {
        return Err(FamilyError::BadParams(format!(
            "element {e} has no weight ({} elements declared)",
            element_weights.len()
        )));
    }
    let n = owned.len();
    let mut covered = vec![false; element_weights.len()];
    let values = Coalition::all(n)
        .map(|c| {
            covered.iter_mut().for_each(|x| *x = false);
            for i in c.members() {
                for &e in &owned[i] {
                    covered[e] = true;
                }
            }
            covered
                .iter()
                .zip(element_weights)
                .filter(|(hit, _)| **hit)
                .fold(S::zero(), |acc, (_, w)| acc + w.clone())
        })
        .collect();
    Ok(Game::new(n, values)?)
}

fn from_ints<S: Scalar>(n: usize, xs: &[i64]) -> Game<S> {
    Game::new(n, xs.iter().map(|&x| S::from_int(x)).collect()).expect("valid built-in game")
}

/// The 4-player worked example, in mask order (player 1 is bit 0).
pub fn example1<S: Scalar>() -> Game<S> {
    // ∅ 1 2 12 3 13 23 123 4 14 24 124 34 134 234 1234
    from_ints(4, &[0, 1, 2, 3, 1, 4, 4, 6, 4, 7, 7, 7, 6, 9, 9, 9])
}

/// Example 1 with `v({1,3})` raised from 4 to 5.
pub fn example1_variant<S: Scalar>() -> Game<S> {
    from_ints(4, &[0, 1, 2, 3, 1, 5, 4, 6, 4, 7, 7, 7, 6, 9, 9, 9])
}

/// `v = 0,1,2,3,3,4,5,6` over `∅,{1},{2},{3},{12},{13},{23},{123}`.
pub fn counterexample3<S: Scalar>() -> Game<S> {
    // mask order: ∅ 1 2 12 3 13 23 123
    from_ints(3, &[0, 1, 2, 3, 3, 4, 5, 6])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::is_monotone;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn c(players: &[usize]) -> Coalition {
        Coalition::from_players(players.iter().map(|p| p - 1))
    }

    #[test]
    fn additive_weights() {
        let g = gen_family(&Family::Additive {
            weights: vec![q(1), q(2)],
        })
        .unwrap();
        assert_eq!(g.values(), &[q(0), q(1), q(2), q(3)]);
    }

    #[test]
    fn counterexample_table() {
        let g: Game<Rational> = counterexample3();
        assert_eq!(g.value(c(&[1, 2])), &q(3));
        assert_eq!(g.value(c(&[1, 3])), &q(4));
        assert_eq!(g.value(c(&[2, 3])), &q(5));
        assert_eq!(g.value(c(&[1, 2, 3])), &q(6));
        assert_eq!(g.value(c(&[3])), &q(3));
    }

    #[test]
    fn example1_table() {
        let g: Game<Rational> = example1();
        let expect: &[(&[usize], i64)] = &[
            (&[1], 1),
            (&[2], 2),
            (&[3], 1),
            (&[4], 4),
            (&[1, 2], 3),
            (&[1, 3], 4),
            (&[1, 4], 7),
            (&[2, 3], 4),
            (&[2, 4], 7),
            (&[3, 4], 6),
            (&[1, 2, 3], 6),
            (&[1, 2, 4], 7),
            (&[1, 3, 4], 9),
            (&[2, 3, 4], 9),
            (&[1, 2, 3, 4], 9),
        ];
        for (players, v) in expect {
            assert_eq!(g.value(c(players)), &q(*v), "v{:?}", players);
        }
        assert_eq!(is_monotone(g.values()), Ok(true));
        let variant: Game<Rational> = example1_variant();
        assert_eq!(variant.value(c(&[1, 3])), &q(5));
    }

    #[test]
    fn coverage_full_redundancy() {
        let g = gen_family(&Family::Coverage {
            owned: vec![vec![0], vec![0]],
            element_weights: vec![q(5)],
        })
        .unwrap();
        assert_eq!(g.values(), &[q(0), q(5), q(5), q(5)]);
    }

    #[test]
    fn coverage_rejects_unknown_element() {
        let err = gen_family(&Family::Coverage {
            owned: vec![vec![0, 3]],
            element_weights: vec![q(5)],
        })
        .unwrap_err();
        assert!(matches!(err, FamilyError::BadParams(_)));
    }

    #[test]
    fn random_monotone_contracts() {
        let g = gen_random_monotone(3, 7, &q(10));
        assert_eq!(is_monotone(g.values()), Ok(true));
        let zero = gen_random_monotone(1, 0, &q(0));
        assert_eq!(zero.values(), &[q(0), q(0)]);
        assert_eq!(
            gen_random_monotone(5, 42, &q(4)),
            gen_random_monotone(5, 42, &q(4))
        );
        assert_ne!(
            gen_random_monotone(5, 42, &q(4)),
            gen_random_monotone(5, 43, &q(4))
        );
    }

    #[test]
    fn random_monotone_float_matches_rational() {
        let r = gen_random_monotone(4, 9, &q(3));
        let f = gen_random_monotone(4, 9, &3.0f64);
        for (a, b) in r.values().iter().zip(f.values()) {
            assert!((a.to_f64() - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_random_params() {
        let err = gen_family(&Family::RandomMonotone {
            n: 0,
            seed: 1,
            max_increment: q(1),
        })
        .unwrap_err();
        assert!(matches!(err, FamilyError::BadParams(_)));
        let err = gen_family(&Family::RandomMonotone {
            n: 3,
            seed: 1,
            max_increment: q(-1),
        })
        .unwrap_err();
        assert!(matches!(err, FamilyError::BadParams(_)));
    }
}
