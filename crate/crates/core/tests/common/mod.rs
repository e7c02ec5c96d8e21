#![allow(dead_code)]

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fairshare::families::gen_random_monotone;
use fairshare::{Coalition, Game, Rational, RewardMatrix, Scalar};

pub fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

pub fn random_game(n: usize, seed: u64) -> Game<Rational> {
    let max = q(1 + (seed % 10) as i64);
    gen_random_monotone(n, seed, &max)
}

/// Shapley values of `c`'s members by averaging marginal contributions over
/// every join order.
pub fn permutation_shapley(game: &Game<Rational>, c: Coalition) -> Vec<Rational> {
    let members: Vec<usize> = c.members().collect();
    let mut totals = vec![q(0); members.len()];
    let mut orders = 0i64;
    for order in members.iter().copied().permutations(members.len()) {
        orders += 1;
        let mut before = Coalition::EMPTY;
        for i in order {
            let after = before.with(i);
            let slot = members.iter().position(|&m| m == i).unwrap();
            totals[slot] += game.value(after) - game.value(before);
            before = after;
        }
    }
    totals.into_iter().map(|t| t / q(orders)).collect()
}

/// Anchor picking a member pseudo-randomly but deterministically per coalition.
pub fn seeded_anchor(seed: u64) -> impl Fn(Coalition) -> usize + Sync {
    move |c: Coalition| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (c.mask() as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let pick = rng.gen_range(0..c.len());
        c.members().nth(pick).unwrap()
    }
}

/// A premise-satisfying strict-monotonicity instance `(v', i, C)` for `v`.
///
/// Every coalition not inside `C \ {i}` gets a random non-negative bump (a
/// positive one for `C`), after which values are raised just enough to stay
/// monotone. Coalitions inside `C \ {i}` are untouched.
pub fn f4_instance(v: &Game<Rational>, seed: u64) -> (Game<Rational>, usize, Coalition) {
    let n = v.n_players();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = Coalition::from_mask(rng.gen_range(1..(1u32 << n)));
    let i = c.members().nth(rng.gen_range(0..c.len())).unwrap();
    let frozen = c.without(i);
    let mut values: Vec<Rational> = v.values().to_vec();
    for mask in 1u32..(1 << n) {
        let x = Coalition::from_mask(mask);
        if x.is_subset_of(frozen) {
            continue;
        }
        let bump = if x == c {
            Rational::from_ratio(rng.gen_range(1..=12), 4)
        } else if rng.gen_bool(0.4) {
            Rational::from_ratio(rng.gen_range(0..=12), 4)
        } else {
            q(0)
        };
        let floor = x.members().map(|j| values[x.without(j).index()].clone()).max().unwrap();
        values[mask as usize] = std::cmp::max(v.value(x).clone() + bump, floor);
    }
    (Game::new(n, values).expect("repaired to monotone"), i, c)
}

/// `game` plus a player whose presence never changes any value.
pub fn with_useless_player(game: &Game<Rational>) -> Game<Rational> {
    let n = game.n_players();
    let u = n;
    let values = Coalition::all(n + 1).map(|c| game.value(c.without(u)).clone()).collect();
    Game::new(n + 1, values).unwrap()
}

/// `game` plus a copy of player `i`: the copy contributes exactly what `i`
/// would, and the two together are worth no more than `i` alone.
pub fn with_twin(game: &Game<Rational>, i: usize) -> Game<Rational> {
    let n = game.n_players();
    let twin = n;
    let values = Coalition::all(n + 1)
        .map(|c| {
            let base = if c.contains(twin) { c.without(twin).with(i) } else { c };
            game.value(base).clone()
        })
        .collect();
    Game::new(n + 1, values).unwrap()
}

/// Rewards of `c`'s members when `k` takes `v_C` and every other member is
/// balanced against `k`.
pub fn balanced_row(game: &Game<Rational>, m: &RewardMatrix<Rational>, c: Coalition, k: usize) -> Vec<Rational> {
    let v_c = game.value(c);
    c.members()
        .map(|i| {
            if i == k {
                v_c.clone()
            } else {
                v_c - m.get(k, c.without(i)) + m.get(i, c.without(k))
            }
        })
        .collect()
}

/// Visits every matrix obtainable by choosing any member as efficient in
/// every coalition, with no feasibility filtering.
pub fn for_each_balanced_matrix(game: &Game<Rational>, visit: &mut dyn FnMut(&RewardMatrix<Rational>)) {
    fn go(
        game: &Game<Rational>,
        order: &[Coalition],
        m: &mut RewardMatrix<Rational>,
        visit: &mut dyn FnMut(&RewardMatrix<Rational>),
    ) {
        let Some((&c, rest)) = order.split_first() else {
            visit(m);
            return;
        };
        for k in c.members() {
            let row = balanced_row(game, m, c, k);
            for (i, r) in c.members().zip(row) {
                m.set(i, c, r);
            }
            go(game, rest, m, visit);
        }
    }
    let order: Vec<Coalition> = Coalition::all(game.n_players())
        .filter(|c| c.len() >= 2)
        .sorted_by_key(|c| c.len())
        .collect();
    go(game, &order, &mut RewardMatrix::standalone(game), visit);
}
