//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::Instant;

use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rcbr_core::corpus;
use rcbr_core::elimination::{eliminate, ranked_stages, BeliefRelation, Concept, RankedEngine, RankedGame};
use rcbr_core::exact::rational::rat;
use rcbr_core::game::{Belief, FiniteMeasure, Game, Player};
use rcbr_core::hierarchy::{check_hereditarily_coherent, lift_belief_map, lubin_lift, rcbr_level};
use rcbr_core::sweep::{self, PlaySettings, SweepSummary};
use rcbr_core::{Ordinal, Rational};

struct Verdict {
    passed: bool,
    detail: String,
}

fn summary_verdict(parts: &[(&str, &SweepSummary)], what: impl Fn(&SweepSummary) -> String) -> Verdict {
    let passed = parts.iter().all(|(_, s)| s.passed());
    let detail = parts
        .iter()
        .map(|(name, s)| {
            if s.passed() {
                format!("{name}: {}", what(s))
            } else {
                format!(
                    "{name}: {} of {} games fail\n{}",
                    s.counterexamples.len(),
                    s.games,
                    s.dump(3)
                )
            }
        })
        .collect::<Vec<_>>()
        .join("; ");
    Verdict { passed, detail }
}

fn sweep_corpora() -> (Vec<Game>, Vec<Game>) {
    (corpus::exhaustive(2, &[0, 1, 2]), corpus::sampled(3, 3, &[0, 1, 2], 2000, 0))
}

fn criterion_1(two: &[Game], three: &[Game]) -> Verdict {
    let check = |g: &Game| sweep::check_fundamental(g, rcbr_core::hierarchy::DEFAULT_DEPTH);
    let a = sweep::run(two, check);
    let b = sweep::run(three, check);
    summary_verdict(&[("2x2 exhaustive", &a), ("3x3 sampled", &b)], |s| {
        format!("{} games, {} survivors witnessed at depth 8", s.games, s.tally.survivors)
    })
}

fn criterion_2(two: &[Game], three: &[Game]) -> Verdict {
    let a = sweep::run(two, sweep::check_pearce);
    let b = sweep::run(three, sweep::check_pearce);
    summary_verdict(&[("2x2 exhaustive", &a), ("3x3 sampled", &b)], |s| {
        format!("{} strategies, {} dominated", s.tally.strategies, s.tally.dominated)
    })
}

/// `{x < horizon : ψ(x) >= γ}` computed straight from the rank map.
fn closed_form(game: &RankedGame, gamma: &Ordinal) -> BTreeSet<u64> {
    (0..game.horizon).filter(|&x| game.rank(x) >= *gamma).collect()
}

fn criterion_3() -> Verdict {
    let mut problems = Vec::new();
    let mut checked = 0;
    for (coeffs, expected) in [(vec![0], Ordinal::omega_times(1)), (vec![0, 1], Ordinal::omega_times(2))] {
        for horizon in [32, 64] {
            let game = RankedGame::new("scheme", coeffs.clone(), horizon).expect("valid scheme");
            let engine = RankedEngine::new(game.clone());
            if engine.convergence() != expected {
                problems.push(format!("{coeffs:?}: convergence {} instead of {expected}", engine.convergence()));
            }
            let mut gammas: Vec<Ordinal> = (0..2)
                .flat_map(|k| (0..=horizon + 1).map(move |c| Ordinal::omega_times(k).plus(c)))
                .collect();
            gammas.push(Ordinal::omega_times(2));
            for gamma in gammas {
                checked += 1;
                let want = closed_form(&game, &gamma);
                let state = engine.state_at(&gamma);
                for player in Player::BOTH {
                    let got = state[player.index()].enumerate(&game);
                    if got != want {
                        problems.push(format!("{coeffs:?} horizon {horizon} player {player} at {gamma}"));
                    }
                }
                if let Ok(symbolic) = ranked_stages(&game, &gamma) {
                    if symbolic.enumerate(&game) != want {
                        problems.push(format!("{coeffs:?} symbolic closed form at {gamma}"));
                    }
                }
            }
        }
    }
    Verdict {
        passed: problems.is_empty(),
        detail: if problems.is_empty() {
            format!("{checked} stage sets match; convergence w and w*2")
        } else {
            problems.join("; ")
        },
    }
}

fn justification_corpus() -> Vec<Game> {
    corpus::mixed_shapes(500, 2024)
}

fn criterion_4(games: &[Game]) -> Verdict {
    let settings = PlaySettings::default();
    let s = sweep::run(games, |g| sweep::check_justification(g, settings));
    summary_verdict(&[("500 games", &s)], |s| {
        format!(
            "{} strategies ({} survivors), {} audited plays",
            s.tally.strategies, s.tally.survivors, s.tally.plays
        )
    })
}

fn criterion_5(games: &[Game]) -> Verdict {
    let s = sweep::run(games, |g| sweep::check_strategy_to_type(g, rcbr_core::hierarchy::DEFAULT_DEPTH));
    summary_verdict(&[("500 games", &s)], |s| format!("{} survivors", s.tally.survivors))
}

fn criterion_6() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures = 0;
    for _ in 0..1000 {
        let pairs: BTreeSet<(u8, u8)> = (0..rng.gen_range(1..20))
            .map(|_| (rng.gen_range(0..6), rng.gen_range(0..6)))
            .collect();
        let xs: BTreeSet<u8> = pairs.iter().map(|p| p.0).collect();
        let k = rng.gen_range(1..=xs.len());
        let support = xs.iter().copied().choose_multiple(&mut rng, k);
        let mu = FiniteMeasure::normalized(support.into_iter().map(|x| (x, rat(rng.gen_range(1..10), 1))))
            .expect("positive weights");
        match lubin_lift(&pairs, &mu) {
            Ok(nu) if nu.marginal_first() == mu && nu.is_concentrated(|p| pairs.contains(p)) => {}
            _ => failures += 1,
        }
    }
    Verdict {
        passed: failures == 0,
        detail: format!("1000 relations, {failures} failures"),
    }
}

fn random_belief(n: usize, rng: &mut ChaCha8Rng) -> Belief {
    let k = rng.gen_range(1..=n);
    let support = (0..n).choose_multiple(rng, k);
    Belief::normalized(support.into_iter().map(|t| (t, Rational::from_integer(rng.gen_range(1i64..5).into()))))
        .expect("positive weights")
}

/// Belief maps mixing justifying and arbitrary beliefs, lifted to coherent
/// hierarchies; every strategy certified at level `n` must lie in `X^n`.
fn criterion_7() -> Verdict {
    const WANTED: usize = 1000;
    const DEPTH: usize = 4;
    let games = corpus::mixed_shapes(400, 7);
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (mut certified, mut on_eliminated, mut problems) = (0, 0, Vec::new());
    'outer: for round in 0.. {
        if round > 50 {
            problems.push(format!("only {certified} certified mutants found"));
            break;
        }
        for game in &games {
            let trace = eliminate(game, Concept::Rat).expect("finite games certify");
            let mut beliefs: [BTreeMap<usize, Belief>; 2] = Default::default();
            for player in Player::BOTH {
                let opp = game.num_strategies(player.other());
                for s in 0..game.num_strategies(player) {
                    let restriction: BTreeSet<usize> = (0..opp).filter(|_| rng.gen_bool(0.7)).collect();
                    let justified = if restriction.is_empty() || rng.gen_bool(0.3) {
                        None
                    } else {
                        game.justify(player, s, &restriction)
                    };
                    let mu = justified.unwrap_or_else(|| random_belief(opp, &mut rng));
                    beliefs[player.index()].insert(s, mu);
                }
            }
            let map = lift_belief_map(beliefs, DEPTH).expect("belief map covers every strategy");
            for (player, s, entry) in map.iter() {
                if !check_hereditarily_coherent(&entry.hierarchy).expect("well formed") {
                    problems.push(format!("{}: lifted hierarchy is incoherent", game.name()));
                }
                let n = rcbr_level(game, player, s, &entry.hierarchy).expect("well formed");
                if n == 0 {
                    continue;
                }
                certified += 1;
                if !trace.is_survivor(player, s) {
                    on_eliminated += 1;
                }
                if !trace.rectangle_at(n).side(player).contains(&s) {
                    problems.push(format!(
                        "{}: player {player} `{}` certified at level {n} but not in stage {n}",
                        game.name(),
                        game.strategy_id(player, s)
                    ));
                }
                if certified >= WANTED {
                    break 'outer;
                }
            }
        }
    }
    Verdict {
        passed: problems.is_empty(),
        detail: if problems.is_empty() {
            format!("{certified} certified mutants ({on_eliminated} on eliminated strategies), all within their stage")
        } else {
            problems.into_iter().take(5).collect::<Vec<_>>().join("; ")
        },
    }
}

fn report(number: usize, title: &str, started: Instant, verdict: Verdict) -> bool {
    let status = if verdict.passed { "PASS" } else { "FAIL" };
    println!(
        "criterion {number} ({title}): {status} [{:.1}s] {}",
        started.elapsed().as_secs_f64(),
        verdict.detail
    );
    verdict.passed
}

fn main() -> ExitCode {
    // `cargo test -- --list` and filters from other targets must not run the suite
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let mut ok = true;
    let (two, three) = sweep_corpora();
    let t = Instant::now();
    ok &= report(1, "fundamental theorem sweep", t, criterion_1(&two, &three));
    let t = Instant::now();
    ok &= report(2, "never-best-response vs dominance", t, criterion_2(&two, &three));
    let t = Instant::now();
    ok &= report(3, "ranked closed form", t, criterion_3());
    let games = justification_corpus();
    let t = Instant::now();
    ok &= report(4, "justification game", t, criterion_4(&games));
    let t = Instant::now();
    ok &= report(5, "strategy to type", t, criterion_5(&games));
    let t = Instant::now();
    ok &= report(6, "least-selection lift", t, criterion_6());
    let t = Instant::now();
    ok &= report(7, "soundness mutations", t, criterion_7());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
