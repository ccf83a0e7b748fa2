//! Per-game verification checks and their parallel drivers.
//!
//! Each check returns the list of discrepancies found in one game; a sweep
//! runs a check over a corpus on the rayon pool and reports failures in
//! corpus order.

use std::fmt::Write as _;

use num_traits::Signed;
use rayon::prelude::*;

use crate::elimination::{eliminate, Concept, EliminationTrace};
use crate::game::{emit_game, Game, Player};
use crate::hierarchy::{build_witness, DEFAULT_DEPTH};
use crate::justification::{
    audit, descent_certificate, hierarchy_from_strategy, play, synthesize_i, synthesize_ii, Arena, FiniteArena,
    PlayRecord, RandomLegalI, RandomLegalII, Side, StrategyI, StrategyII, DEFAULT_PLY_BUDGET,
};
use crate::response::{
    find_justifying_belief, is_strictly_dominated, pearce_auxiliary_game, solve_zero_sum, Dominance,
};

/// Counts gathered while checking one game.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    pub strategies: usize,
    pub survivors: usize,
    pub dominated: usize,
    pub plays: usize,
}

impl Tally {
    fn add(&mut self, other: &Tally) {
        self.strategies += other.strategies;
        self.survivors += other.survivors;
        self.dominated += other.dominated;
        self.plays += other.plays;
    }
}

#[derive(Debug, Clone, Default)]
pub struct GameReport {
    pub tally: Tally,
    pub failures: Vec<String>,
}

impl GameReport {
    fn fail(&mut self, message: String) {
        self.failures.push(message);
    }
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub game: Game,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct SweepSummary {
    pub games: usize,
    pub tally: Tally,
    pub counterexamples: Vec<Counterexample>,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    /// The failing games in the text game format, each followed by its
    /// failures as comments.
    pub fn dump(&self, limit: usize) -> String {
        let mut out = String::new();
        for c in self.counterexamples.iter().take(limit) {
            out.push_str(&emit_game(&c.game));
            for f in &c.failures {
                let _ = writeln!(out, "# {f}");
            }
            out.push('\n');
        }
        out
    }
}

/// Runs `check` on every game in parallel; failures keep corpus order.
pub fn run<F>(games: &[Game], check: F) -> SweepSummary
where
    F: Fn(&Game) -> GameReport + Sync,
{
    let reports: Vec<GameReport> = games.par_iter().map(&check).collect();
    let mut summary = SweepSummary {
        games: games.len(),
        ..Default::default()
    };
    for (game, report) in games.iter().zip(reports) {
        summary.tally.add(&report.tally);
        if !report.failures.is_empty() {
            summary.counterexamples.push(Counterexample {
                game: game.clone(),
                failures: report.failures,
            });
        }
    }
    summary
}

fn strategies(game: &Game) -> impl Iterator<Item = (Player, usize)> + '_ {
    Player::BOTH
        .into_iter()
        .flat_map(move |p| (0..game.num_strategies(p)).map(move |s| (p, s)))
}

/// The four concepts reach the same final rectangle, every trace
/// re-verifies, and every survivor gets a depth-`depth` witness passing
/// the local RCBR check at all levels.
pub fn check_fundamental(game: &Game, depth: usize) -> GameReport {
    let mut report = GameReport::default();
    let mut traces: Vec<EliminationTrace> = Vec::new();
    for concept in Concept::GAME_CONCEPTS {
        match eliminate(game, concept) {
            Ok(trace) => {
                if let Err(e) = trace.verify_game(game) {
                    report.fail(format!("{concept} trace fails verification: {e}"));
                }
                traces.push(trace);
            }
            Err(e) => report.fail(format!("{concept} elimination failed: {e}")),
        }
    }
    let Some(rat) = traces.first() else {
        return report;
    };
    for trace in &traces[1..] {
        if trace.final_rectangle() != rat.final_rectangle() {
            report.fail(format!(
                "{} fixpoint {} differs from rat fixpoint {}",
                trace.concept,
                trace.final_rectangle().describe(game),
                rat.final_rectangle().describe(game)
            ));
        }
    }
    report.tally.strategies = game.num_strategies(Player::One) + game.num_strategies(Player::Two);
    match build_witness(game, rat, depth) {
        Ok(witness) => {
            report.tally.survivors = witness.iter().count();
            if let Err(e) = witness.verify(game) {
                report.fail(format!("witness fails: {e}"));
            }
        }
        Err(e) => report.fail(format!("no witness: {e}")),
    }
    report
}

/// Never-best-response, strict dominance and a positive auxiliary value
/// coincide for every strategy, with the optimal row mix re-checked as a
/// strict dominator.
pub fn check_pearce(game: &Game) -> GameReport {
    let mut report = GameReport::default();
    for (player, s) in strategies(game) {
        report.tally.strategies += 1;
        let id = format!("player {player} `{}`", game.strategy_id(player, s));
        let own = game.all_strategies(player);
        let opp = game.all_strategies(player.other());
        let never_best = match find_justifying_belief(game, player, s, &opp, &own) {
            Ok(b) => b.is_none(),
            Err(e) => return fail_with(report, format!("{id}: {e}")),
        };
        let dominance = match is_strictly_dominated(game, player, s, &own, &opp) {
            Ok(d) => d,
            Err(e) => return fail_with(report, format!("{id}: {e}")),
        };
        if let Some(d) = &dominance {
            report.tally.dominated += 1;
            if !d.verify(game, player, s, &opp) {
                report.fail(format!("{id}: dominance certificate does not verify"));
            }
        }
        let solution = pearce_auxiliary_game(game, player, s)
            .map_err(|e| e.to_string())
            .and_then(|aux| {
                let sol = solve_zero_sum(&aux).map_err(|e| e.to_string())?;
                if sol.verify(&aux) {
                    Ok(sol)
                } else {
                    Err("zero-sum solution does not verify".to_string())
                }
            });
        let solution = match solution {
            Ok(sol) => sol,
            Err(e) => return fail_with(report, format!("{id}: {e}")),
        };
        let positive = solution.value.is_positive();
        if never_best != dominance.is_some() || never_best != positive {
            report.fail(format!(
                "{id}: never-best-response {never_best}, dominated {}, auxiliary value {}",
                dominance.is_some(),
                solution.value
            ));
        }
        if positive {
            // aux rows are the player's strategies in index order
            let mixture = solution.row_mix.clone();
            let margins = opp
                .iter()
                .map(|&t| {
                    let m = mixture.expect(|&r| game.payoff(player, r, t).clone()) - game.payoff(player, s, t);
                    (t, m)
                })
                .collect();
            let d = Dominance { mixture, margins };
            if !d.verify(game, player, s, &opp) {
                report.fail(format!("{id}: equilibrium row mix is not a strict dominator"));
            }
        }
    }
    report
}

fn fail_with(mut report: GameReport, message: String) -> GameReport {
    report.fail(message);
    report
}

/// Settings for the justification game check.
#[derive(Debug, Clone, Copy)]
pub struct PlaySettings {
    pub budget: usize,
    pub random_opponents: usize,
    pub seed: u64,
}

impl Default for PlaySettings {
    fn default() -> Self {
        Self {
            budget: DEFAULT_PLY_BUDGET,
            random_opponents: 100,
            seed: 0,
        }
    }
}

/// The strategy a play starts from, with its label for messages.
struct Root<'a> {
    player: Player,
    s: usize,
    id: &'a str,
}

fn played(
    arena: &dyn Arena,
    root: &Root<'_>,
    first: &mut dyn StrategyI,
    second: &mut dyn StrategyII,
    budget: usize,
    report: &mut GameReport,
) -> PlayRecord {
    let record = play(arena, root.player, root.s, first, second, budget);
    report.tally.plays += 1;
    if let Err(e) = audit(arena, &record) {
        report.fail(format!("{}: transcript fails audit: {e}", root.id));
    }
    record
}

/// I's synthesized strategy wins exactly from survivors and II's exactly
/// from eliminated strategies, against the other side's synthesized
/// strategy and against random legal opponents; every play won by II's
/// synthesized strategy carries a strictly decreasing ordinal chain.
pub fn check_justification(game: &Game, settings: PlaySettings) -> GameReport {
    let mut report = GameReport::default();
    let arena = FiniteArena::for_game(game);
    let budget = settings.budget;
    for (player, s) in strategies(game) {
        report.tally.strategies += 1;
        let id = format!("player {player} `{}`", game.strategy_id(player, s));
        let survivor = arena.is_survivor(player, s);
        let tau = synthesize_i(&arena, player, s);
        let sigma = synthesize_ii(&arena, player, s);
        if tau.is_ok() != survivor || sigma.is_ok() == survivor {
            report.fail(format!("{id}: synthesis domains disagree with elimination"));
            continue;
        }
        let root = Root { player, s, id: &id };
        let seed_base = settings.seed.wrapping_mul(1_000_003).wrapping_add((player.index() * 64 + s) as u64);
        if survivor {
            report.tally.survivors += 1;
            let mut tau = tau.expect("checked");
            let mut opponents: Vec<Box<dyn StrategyII>> = vec![Box::new(crate::justification::RankDescentII)];
            for k in 0..settings.random_opponents {
                opponents.push(Box::new(RandomLegalII::new(seed_base.wrapping_add(k as u64))));
            }
            for second in &mut opponents {
                let record = played(&arena, &root, &mut tau, second.as_mut(), budget, &mut report);
                if record.outcome.winner != Side::I {
                    report.fail(format!("{id}: synthesized I loses: {}", record.outcome));
                }
            }
        } else {
            let mut sigma = sigma.expect("checked");
            let mut opponents: Vec<Box<dyn StrategyI>> = vec![Box::new(crate::justification::CanonicalI::new())];
            for k in 0..settings.random_opponents {
                opponents.push(Box::new(RandomLegalI::new(seed_base.wrapping_add(k as u64))));
            }
            for first in &mut opponents {
                let record = played(&arena, &root, first.as_mut(), &mut sigma, budget, &mut report);
                if record.outcome.winner != Side::II {
                    report.fail(format!("{id}: synthesized II loses: {}", record.outcome));
                }
                if descent_certificate(&arena, &record).is_none() {
                    report.fail(format!("{id}: II's picks do not strictly descend"));
                }
            }
        }
    }
    report
}

/// The hierarchy generated by I's synthesized strategy equals the witness
/// for every survivor.
pub fn check_strategy_to_type(game: &Game, depth: usize) -> GameReport {
    let mut report = GameReport::default();
    let arena = FiniteArena::for_game(game);
    let witness = match build_witness(game, &arena.trace, depth) {
        Ok(w) => w,
        Err(e) => return fail_with(report, format!("no witness: {e}")),
    };
    for (player, s, entry) in witness.iter() {
        report.tally.survivors += 1;
        let id = format!("player {player} `{}`", game.strategy_id(player, s));
        let generated = synthesize_i(&arena, player, s)
            .map_err(|e| e.to_string())
            .and_then(|mut tau| hierarchy_from_strategy(&arena, player, s, &mut tau, depth).map_err(|e| e.to_string()));
        match generated {
            Ok(h) if h.same_as(&entry.hierarchy) => {}
            Ok(_) => report.fail(format!("{id}: generated hierarchy differs from the witness")),
            Err(e) => report.fail(format!("{id}: {e}")),
        }
    }
    report
}

/// Criteria 1 and 2 together, as run by `verify-ft`.
pub fn check_game(game: &Game) -> GameReport {
    let mut report = check_fundamental(game, DEFAULT_DEPTH);
    let pearce = check_pearce(game);
    report.tally.dominated = pearce.tally.dominated;
    report.failures.extend(pearce.failures);
    report
}
