mod common;

use proptest::prelude::*;

use common::*;
use fairshare::axioms::{check, check_all, check_f4_pair, Axiom, Verdict};
use fairshare::baselines::shapley;
use fairshare::families::{gen_family, Family};
use fairshare::io::{parse_game_file, parse_reward_table, write_game_file, write_reward_table, AnyGame, Labels, TableFormat};
use fairshare::mechanism::{highest_member, solve, solve_with, solve_with_anchor};
use fairshare::oracle::brute_force_solve;
use fairshare::{Coalition, Game, Rational, Scalar, Tolerance};

fn game_strategy(max_n: usize) -> impl Strategy<Value = Game<Rational>> {
    (2..=max_n, any::<u64>()).prop_map(|(n, seed)| random_game(n, seed))
}

fn coverage_strategy() -> impl Strategy<Value = Game<Rational>> {
    (2..=5usize, 1..=6usize)
        .prop_flat_map(|(n, elements)| {
            (
                prop::collection::vec(prop::collection::vec(0..elements, 0..=elements), n),
                prop::collection::vec(0i64..=9, elements),
            )
        })
        .prop_map(|(owned, weights)| {
            gen_family(&Family::Coverage {
                owned,
                element_weights: weights.into_iter().map(q).collect(),
            })
            .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solver_satisfies_every_single_game_axiom(g in game_strategy(6)) {
        let m = solve(&g).matrix;
        let report = check_all(&g, &m, Tolerance::Exact).unwrap();
        prop_assert!(report.all_pass(), "{:?}", report.failures().collect::<Vec<_>>());
    }

    #[test]
    fn efficient_player_dominates_one_level_down(g in game_strategy(6)) {
        // M^{C\{k}}_i <= M^{C\{i}}_k for the efficient k and every other member i
        let sol = solve(&g);
        for (c, k) in sol.efficient.iter() {
            for i in c.members().filter(|&i| i != k) {
                prop_assert!(sol.matrix.get(i, c.without(k)) <= sol.matrix.get(k, c.without(i)));
            }
        }
    }

    #[test]
    fn anchor_does_not_matter(g in game_strategy(6), seed in any::<u64>()) {
        let base = solve(&g).matrix;
        prop_assert_eq!(&solve_with_anchor(&g, highest_member).unwrap(), &base);
        prop_assert_eq!(&solve_with_anchor(&g, seeded_anchor(seed)).unwrap(), &base);
    }

    #[test]
    fn tie_break_does_not_matter(g in game_strategy(6), seed in any::<u64>()) {
        let base = solve(&g).matrix;
        let last = solve_with(&g, fairshare::mechanism::lowest_member, |_, ties| *ties.last().unwrap()).unwrap();
        prop_assert_eq!(&last.matrix, &base);
        let pick = seeded_anchor(seed);
        let random = solve_with(&g, highest_member, |c, ties| {
            let chosen = pick(c);
            if ties.contains(&chosen) { chosen } else { ties[0] }
        })
        .unwrap();
        prop_assert_eq!(&random.matrix, &base);
    }

    #[test]
    fn level_oracle_agrees(g in game_strategy(5)) {
        let res = brute_force_solve(&g).unwrap();
        prop_assert!(res.unique);
        prop_assert_eq!(res.matrix, solve(&g).matrix);
    }

    #[test]
    fn coverage_games_are_subadditive_and_solved_fairly(g in coverage_strategy()) {
        let n = g.n_players();
        for a in Coalition::all(n) {
            for b in Coalition::all(n) {
                prop_assert!(g.value(a.union(b)) <= &(g.value(a) + g.value(b)));
            }
        }
        // coverage games are full of exact ties, where strict desirability
        // can fail (see f3_can_fail_when_values_tie)
        let report = check_all(&g, &solve(&g).matrix, Tolerance::Exact).unwrap();
        let failed: Vec<Axiom> = report.failures().map(|r| r.axiom).collect();
        prop_assert!(failed.iter().all(|&a| a == Axiom::F3), "{:?}", failed);
    }

    #[test]
    fn float_and_exact_verdicts_agree(g in game_strategy(6), bump in 0usize..64) {
        let m = solve(&g).matrix;
        let mut tampered = m.clone();
        let n = g.n_players();
        let (c, i) = (Coalition::from_mask((bump % (1 << n)) as u32), bump % n);
        tampered.set(i, c, m.get(i, c) + q(1));
        for candidate in [&m, &tampered] {
            let exact = check_all(&g, candidate, Tolerance::Exact).unwrap();
            let float = check_all(&g.to_float(), &candidate.to_float(), Tolerance::FLOAT_DEFAULT).unwrap();
            for (a, b) in exact.reports.iter().zip(&float.reports) {
                prop_assert_eq!(a.axiom, b.axiom);
                prop_assert_eq!(a.verdict.is_failure(), b.verdict.is_failure(), "{}", a.axiom);
            }
        }
    }

    #[test]
    fn witnesses_reproduce(g in game_strategy(5), at in any::<usize>(), delta in -3i64..=3) {
        let n = g.n_players();
        let mut m = solve(&g).matrix;
        let c = Coalition::from_mask((at % (1 << n)) as u32);
        let i = (at / 64) % n;
        m.set(i, c, m.get(i, c) + q(delta));
        for report in check_all(&g, &m, Tolerance::Exact).unwrap().reports {
            if let Verdict::Fail(w) = &report.verdict {
                prop_assert!(w.reproduces(&g, &m, Tolerance::Exact), "{} {:?}", report.axiom, w);
            }
        }
    }

    #[test]
    fn useless_and_twin_players_are_treated_fairly(g in game_strategy(4), twin_of in 0usize..4) {
        let with_u = with_useless_player(&g);
        let report = check(Axiom::F1, &with_u, &solve(&with_u).matrix, Tolerance::Exact).unwrap();
        prop_assert_eq!(report.verdict, Verdict::Pass);

        let twin = with_twin(&g, twin_of % g.n_players());
        let report = check(Axiom::F2, &twin, &solve(&twin).matrix, Tolerance::Exact).unwrap();
        prop_assert_eq!(report.verdict, Verdict::Pass);
    }

    #[test]
    fn strict_monotonicity(g in game_strategy(5), seed in any::<u64>()) {
        let (g2, i, c) = f4_instance(&g, seed);
        let report = check_f4_pair(&g, &g2, i, c, &solve(&g).matrix, &solve(&g2).matrix, Tolerance::Exact).unwrap();
        prop_assert_eq!(report.verdict, Verdict::Pass);
    }

    #[test]
    fn shapley_is_efficient_and_matches_permutations(g in game_strategy(5)) {
        for c in Coalition::all(g.n_players()).skip(1) {
            let phi = shapley(&g, c).unwrap();
            prop_assert_eq!(&phi.values, &permutation_shapley(&g, c));
            let total = phi.values.iter().fold(q(0), |a, x| a + x);
            prop_assert_eq!(&total, g.value(c));
        }
    }

    #[test]
    fn files_round_trip(g in game_strategy(5), format in prop_oneof![
        Just(TableFormat::Table), Just(TableFormat::Long), Just(TableFormat::Json)
    ]) {
        let labels = Labels::numeric(g.n_players());
        let text = write_game_file(&g, &labels);
        let parsed = parse_game_file(&text).unwrap();
        prop_assert_eq!(&parsed.game, &AnyGame::Rational(g.clone()));

        let sol = solve(&g);
        let table = write_reward_table(&sol.matrix, &labels, Some(&sol.efficient), format);
        prop_assert_eq!(parse_reward_table::<Rational>(&table, &labels).unwrap(), sol.matrix);
    }
}

/// Distinct balanced allocations of `g` passing feasibility, weak
/// efficiency, non-participation and reciprocity.
fn feasible_balanced_matrices(g: &Game<Rational>) -> Vec<fairshare::RewardMatrix<Rational>> {
    let mut out = Vec::new();
    for_each_balanced_matrix(g, &mut |m| {
        let core = [Axiom::R2, Axiom::R3, Axiom::R5, Axiom::F5]
            .iter()
            .all(|&a| check(a, g, m, Tolerance::Exact).unwrap().passed());
        if core && !out.contains(m) {
            out.push(m.clone());
        }
    });
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reciprocity_with_efficiency_and_feasibility_implies_the_rest(
        g in (2..=3usize, any::<u64>()).prop_map(|(n, s)| random_game(n, s))
    ) {
        let found = feasible_balanced_matrices(&g);
        prop_assert_eq!(&found, &vec![solve(&g).matrix]);
        for a in [Axiom::R1, Axiom::R4, Axiom::F1, Axiom::F2, Axiom::F3] {
            prop_assert!(check(a, &g, &found[0], Tolerance::Exact).unwrap().passed(), "{}", a);
        }
    }
}

#[test]
fn feasible_balanced_allocation_is_unique_on_example1() {
    let g = fairshare::families::example1::<Rational>();
    assert_eq!(feasible_balanced_matrices(&g), vec![solve(&g).matrix]);
}

/// Without feasibility, weak efficiency only asks that *some* member gets
/// `v_C`, and a second balanced allocation appears that overpays the other.
#[test]
fn uniqueness_needs_feasibility() {
    let g = Game::new(2, vec![q(0), Rational::from_ratio(4, 5), Rational::from_ratio(6, 5), Rational::from_ratio(8, 5)])
        .unwrap();
    let mut loose = Vec::new();
    for_each_balanced_matrix(&g, &mut |m| {
        let core = [Axiom::R3, Axiom::R5, Axiom::F5]
            .iter()
            .all(|&a| check(a, &g, m, Tolerance::Exact).unwrap().passed());
        if core {
            loose.push(m.clone());
        }
    });
    assert_eq!(loose.len(), 2);
    let grand = Coalition::grand(2);
    let other = loose.iter().find(|m| **m != solve(&g).matrix).unwrap();
    assert_eq!(other.column(grand), &[Rational::from_ratio(8, 5), q(2)]);
    assert!(!check(Axiom::R2, &g, other, Tolerance::Exact).unwrap().passed());
}

/// Player 3 weakly beats player 2 everywhere and strictly next to player 1,
/// yet both must receive the full value of the grand coalition: the only
/// allocation meeting the incentive axioms and reciprocity violates strict
/// desirability. Such games need exact ties between coalition values.
#[test]
fn f3_can_fail_when_values_tie() {
    let v = [0, 0, 0, 0, 0, 1, 1, 2, 0, 0, 1, 2, 1, 2, 2, 2];
    let g = Game::new(4, v.iter().map(|&x| q(x)).collect()).unwrap();
    let m = solve(&g).matrix;
    let report = check_all(&g, &m, Tolerance::Exact).unwrap();
    let failed: Vec<Axiom> = report.failures().map(|r| r.axiom).collect();
    assert_eq!(failed, vec![Axiom::F3]);
    let Verdict::Fail(w) = &report.get(Axiom::F3).unwrap().verdict else {
        unreachable!()
    };
    assert!(w.reproduces(&g, &m, Tolerance::Exact));
    assert_eq!(m.column(Coalition::grand(4)), &[q(1), q(2), q(2), q(2)]);

    let all = fairshare::oracle::global_enumeration_solve(&g).unwrap();
    assert_eq!(all.matrices, vec![m]);
}

#[test]
fn twin_construction_is_symmetric() {
    let g = random_game(3, 4);
    let t = with_twin(&g, 1);
    assert!(fairshare::axioms::are_interchangeable(&t, 1, 3, Tolerance::Exact));
    assert!(fairshare::axioms::is_useless(&with_useless_player(&g), 3, Tolerance::Exact));
}
