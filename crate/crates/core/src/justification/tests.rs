use super::*;
use crate::elimination::{RankedEngine, RankedGame};
use crate::exact::rational::rat;
use crate::exact::Ordinal;
use crate::game::{examples, Belief, Player};
use crate::hierarchy::{build_witness, check_rcbr_star};

#[test]
fn pd_cooperate_loses_at_once() {
    let g = examples::prisoners_dilemma();
    let arena = FiniteArena::for_game(&g);
    let mut first = CanonicalI::new();
    let mut second = synthesize_ii(&arena, Player::One, 0).unwrap();
    let record = play(&arena, Player::One, 0, &mut first, &mut second, DEFAULT_PLY_BUDGET);
    assert_eq!(record.outcome.winner, Side::II);
    assert_eq!(record.outcome.ply, 0);
    audit(&arena, &record).unwrap();
}

#[test]
fn pd_defect_repeats_forever() {
    let g = examples::prisoners_dilemma();
    let arena = FiniteArena::for_game(&g);
    let mut first = synthesize_i(&arena, Player::One, 1).unwrap();
    let mut second = RankDescentII;
    let record = play(&arena, Player::One, 1, &mut first, &mut second, DEFAULT_PLY_BUDGET);
    assert_eq!(record.outcome.reason, EndReason::Budget);
    for mv in &record.moves {
        match mv {
            Move::I(m) => assert_eq!(*m, JMoveI::tight(Belief::dirac(1))),
            Move::II(t) => assert_eq!(*t, 1),
        }
    }
}

#[test]
fn cascade_b_falls_by_ply_two() {
    let g = examples::cascade();
    let arena = FiniteArena::for_game(&g);
    let mut second = synthesize_ii(&arena, Player::One, 1).unwrap();
    for seed in 0..20 {
        let mut first = RandomLegalI::new(seed);
        let record = play(&arena, Player::One, 1, &mut first, &mut second, DEFAULT_PLY_BUDGET);
        assert_eq!(record.outcome.winner, Side::II);
        assert!(record.outcome.ply <= 2);
        audit(&arena, &record).unwrap();
        let chain = descent_certificate(&arena, &record).unwrap();
        assert_eq!(chain[0], Ordinal::finite(1));
    }
}

#[test]
fn ranked_identity_descends() {
    let game = RankedGame::new("identity", vec![0], 10).unwrap();
    let arena = RankedArena::new(RankedEngine::new(game));
    let mut first = CanonicalI::new();
    let mut second = synthesize_ii(&arena, Player::One, 3).unwrap();
    let record = play(&arena, Player::One, 3, &mut first, &mut second, DEFAULT_PLY_BUDGET);
    assert_eq!(record.outcome.winner, Side::II);
    let picks = record.ii_moves();
    assert!(picks.len() <= 4);
    assert!(picks.windows(2).all(|w| w[1] < w[0]));
    let chain = descent_certificate(&arena, &record).unwrap();
    assert_eq!(chain.len(), picks.len() + 1);
    audit(&arena, &record).unwrap();
}

#[test]
fn pennies_survive_long_plays() {
    let g = examples::matching_pennies();
    let arena = FiniteArena::for_game(&g);
    for seed in 0..5 {
        let mut first = synthesize_i(&arena, Player::Two, 0).unwrap();
        let mut second = RandomLegalII::new(seed);
        let record = play(&arena, Player::Two, 0, &mut first, &mut second, 120);
        assert_eq!(record.outcome.reason, EndReason::Budget);
        assert_eq!(record.moves.len(), 120);
        audit(&arena, &record).unwrap();
    }
}

#[test]
fn rule_breaker_loses() {
    struct Bad;
    impl StrategyI for Bad {
        fn choose(&mut self, _: &dyn Arena, _: &JPosition) -> Option<JMoveI> {
            Some(JMoveI::tight(Belief::dirac(0)))
        }
    }
    let g = examples::prisoners_dilemma();
    let arena = FiniteArena::for_game(&g);
    let record = play(&arena, Player::One, 0, &mut Bad, &mut RankDescentII, 10);
    assert_eq!(record.outcome.winner, Side::II);
    assert_eq!(record.outcome.ply, 0);
    assert!(matches!(record.outcome.reason, EndReason::Illegal(_)));
    audit(&arena, &record).unwrap();
}

#[test]
fn record_round_trip_and_tampering() {
    let g = examples::cascade();
    let arena = FiniteArena::for_game(&g);
    let mut first = RandomLegalI::new(3);
    let record = play(&arena, Player::One, 1, &mut first, &mut RankDescentII, 10);
    let text = emit_record(&arena, &record);
    assert_eq!(parse_record(&arena, &text).unwrap(), record);
    let mut forged = record.clone();
    forged.outcome.winner = Side::I;
    assert!(audit(&arena, &forged).is_err());
    let mut forged = record;
    forged.moves[0] = Move::I(JMoveI::tight(Belief::dirac(0)));
    assert!(audit(&arena, &forged).unwrap_err().starts_with("ply 0"));
}

#[test]
fn canonical_strategy_generates_the_witness() {
    for g in examples::all() {
        let arena = FiniteArena::for_game(&g);
        let witness = build_witness(&g, &arena.trace, 5).unwrap();
        for (player, s, entry) in witness.iter() {
            let mut tau = synthesize_i(&arena, player, s).unwrap();
            let h = hierarchy_from_strategy(&arena, player, s, &mut tau, 5).unwrap();
            assert!(h.same_as(&entry.hierarchy), "{} player {player} strategy {s}", g.name());
        }
    }
}

#[test]
fn opening_variation_still_passes_checks() {
    let g = examples::matching_pennies();
    let arena = FiniteArena::for_game(&g);
    let mu = Belief::from_pairs([(0, rat(1, 2)), (1, rat(1, 2))]).unwrap();
    let opening = JMoveI::tight(mu.clone());
    let mut tau = OpeningI { opening, rest: CanonicalI::new() };
    let h = hierarchy_from_strategy(&arena, Player::One, 0, &mut tau, 4).unwrap();
    assert_eq!(h.first_order(), Some(mu));
    for n in 1..=4 {
        assert!(check_rcbr_star(&g, Player::One, 0, &h, n).unwrap());
    }
}

#[test]
fn stuck_strategy_reported() {
    let g = examples::prisoners_dilemma();
    let arena = FiniteArena::for_game(&g);
    let err = hierarchy_from_strategy(&arena, Player::One, 0, &mut CanonicalI::new(), 3).unwrap_err();
    assert_eq!(err.ply, 0);
}
