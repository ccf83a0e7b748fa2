use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use rcbr_core::corpus;
use rcbr_core::elimination::{eliminate, parse_ranked_game, ranked_stages, Concept, RankedEngine};
use rcbr_core::exact::rational::{is_positive, parse_rational, short_string};
use rcbr_core::game::{parse_game, FiniteMeasure, Game, Player};
use rcbr_core::hierarchy::{
    build_witness, check_hereditarily_coherent, check_rcbr_star, emit_witness, lubin_lift, parse_witness,
    parse_witnesses, Witness,
};
use rcbr_core::justification::{
    audit, descent_certificate, emit_record, play as run_play, synthesize_i, synthesize_ii, Arena, CanonicalI,
    FiniteArena, RandomLegalI, RandomLegalII, RankDescentII, RankedArena, StrategyI, StrategyII,
};
use rcbr_core::response::{
    find_justifying_belief, is_strictly_dominated, pearce_auxiliary_game, solve_zero_sum,
};
use rcbr_core::sweep;
use rcbr_core::Ordinal;

use crate::failure::{read, Failure};
use crate::human::{HumanI, HumanII};
use crate::SideArg;

fn load_game(path: &Path) -> Result<Game, Failure> {
    parse_game(&read(path)?).map_err(|e| Failure::input(path, e))
}

fn player_of(n: u8) -> Player {
    Player::from_number(n).expect("validated by the argument parser")
}

fn strategy_index(game: &Game, player: Player, id: &str) -> Result<usize, Failure> {
    game.index_of(player, id).map_err(Failure::invalid)
}

pub fn solve(path: &Path, concept: Concept, certificates: bool) -> Result<String, Failure> {
    let game = load_game(path)?;
    let trace = eliminate(&game, concept).map_err(Failure::invalid)?;
    trace
        .verify_game(&game)
        .map_err(|e| Failure::invalid(format!("trace fails its own check: {e}")))?;
    Ok(format!("game {} ({concept})\n{}", game.name(), trace.render(certificates)))
}

pub fn dominance(path: &Path, player: u8, id: &str) -> Result<String, Failure> {
    let game = load_game(path)?;
    let player = player_of(player);
    let s = strategy_index(&game, player, id)?;
    let own = game.all_strategies(player);
    let opp = game.all_strategies(player.other());
    let mut out = format!("game {}, player {player}, strategy {id}\n", game.name());

    let justifier = find_justifying_belief(&game, player, s, &opp, &own).map_err(Failure::invalid)?;
    match &justifier {
        Some(mu) => writeln!(out, "never best response: no, best response to {}", game.format_belief(player.other(), mu)),
        None => writeln!(out, "never best response: yes"),
    }
    .expect("string write");

    let dominated = is_strictly_dominated(&game, player, s, &own, &opp).map_err(Failure::invalid)?;
    match &dominated {
        Some(d) => {
            let margins: Vec<String> = d
                .margins
                .iter()
                .map(|(t, m)| format!("{}: {}", game.strategy_id(player.other(), *t), short_string(m)))
                .collect();
            writeln!(
                out,
                "strictly dominated: yes, by {} with margins {{{}}}",
                game.format_belief(player, &d.mixture),
                margins.join(", ")
            )
        }
        None => writeln!(out, "strictly dominated: no"),
    }
    .expect("string write");

    let aux = pearce_auxiliary_game(&game, player, s).map_err(Failure::invalid)?;
    out.push_str("auxiliary game (row player earns the margin over the strategy):\n");
    let columns: Vec<&str> = (0..aux.num_strategies(Player::Two))
        .map(|t| aux.strategy_id(Player::Two, t))
        .collect();
    writeln!(out, "  {}", columns.join(" ")).expect("string write");
    for (r, row) in aux.payoff_matrix(Player::One).iter().enumerate() {
        let cells: Vec<String> = row.iter().map(short_string).collect();
        writeln!(out, "  {}: {}", aux.strategy_id(Player::One, r), cells.join(" ")).expect("string write");
    }
    let solution = solve_zero_sum(&aux).map_err(Failure::invalid)?;
    writeln!(
        out,
        "auxiliary value: {}, row mix {}, column mix {}",
        short_string(&solution.value),
        aux.format_belief(Player::One, &solution.row_mix),
        aux.format_belief(Player::Two, &solution.column_mix)
    )
    .expect("string write");

    let positive = is_positive(&solution.value);
    let consistent = justifier.is_none() == dominated.is_some() && dominated.is_some() == positive;
    if consistent {
        out.push_str("consistent: yes\n");
        Ok(out)
    } else {
        Err(Failure::with_output(out, "the three characterizations disagree"))
    }
}

pub fn certify(path: &Path, depth: usize, out_dir: Option<&Path>) -> Result<String, Failure> {
    if depth == 0 {
        return Err(Failure::invalid("--depth must be at least 1"));
    }
    let game = load_game(path)?;
    let trace = eliminate(&game, Concept::Rat).map_err(Failure::invalid)?;
    let witness = build_witness(&game, &trace, depth).map_err(Failure::invalid)?;
    let mut out = format!(
        "game {}: fixpoint {} at {}, depth {depth}\n",
        game.name(),
        trace.final_rectangle().describe(&game),
        trace.convergence
    );
    let mut texts = String::new();
    let mut failures = Vec::new();
    for (player, s, entry) in witness.iter() {
        let id = game.strategy_id(player, s);
        let text = emit_witness(
            &game,
            &Witness {
                strategy: s,
                hierarchy: entry.hierarchy.clone(),
            },
        );
        // check what was written, not what was built
        let reread = parse_witness(&game, &text).map_err(|e| Failure::invalid(format!("emitted witness does not parse: {e}")))?;
        let coherent = check_hereditarily_coherent(&reread.hierarchy).map_err(Failure::invalid)?;
        let mut passed = 0;
        for n in 1..=depth {
            if !check_rcbr_star(&game, player, s, &reread.hierarchy, n).map_err(Failure::invalid)? {
                break;
            }
            passed = n;
        }
        let ok = coherent && passed == depth && reread.hierarchy.same_as(&entry.hierarchy);
        writeln!(
            out,
            "player {player} {id}: {}",
            if ok { format!("levels 1..{depth} pass") } else { format!("FAILS (coherent {coherent}, levels passed {passed})") }
        )
        .expect("string write");
        if !ok {
            failures.push(format!("player {player} {id}"));
        }
        match out_dir {
            Some(dir) => {
                let file = dir.join(format!("player{}-{id}.witness", player.index() + 1));
                std::fs::write(&file, &text).map_err(|e| Failure::input(&file, e))?;
                writeln!(out, "  wrote {}", file.display()).expect("string write");
            }
            None => {
                texts.push_str(&text);
                texts.push('\n');
            }
        }
    }
    out.push_str(&texts);
    if failures.is_empty() {
        Ok(out)
    } else {
        Err(Failure::with_output(out, format!("witness fails for {}", failures.join(", "))))
    }
}

pub fn check(witness_path: &Path, game_path: &Path, level: usize) -> Result<String, Failure> {
    let game = load_game(game_path)?;
    let witnesses = parse_witnesses(&game, &read(witness_path)?).map_err(|e| Failure::input(witness_path, e))?;
    if witnesses.is_empty() {
        return Err(Failure::input(witness_path, "no witnesses found"));
    }
    if level == 0 {
        return Err(Failure::invalid("--level must be at least 1"));
    }
    let mut out = String::new();
    let mut failures = Vec::new();
    for w in &witnesses {
        let player = w.hierarchy.player;
        let id = game.strategy_id(player, w.strategy);
        let name = format!("player {player} {id}");
        let coherent = check_hereditarily_coherent(&w.hierarchy).map_err(|e| Failure::invalid(format!("{name}: {e}")))?;
        let rcbr = check_rcbr_star(&game, player, w.strategy, &w.hierarchy, level)
            .map_err(|e| Failure::invalid(format!("{name}: {e}")))?;
        let verdict = if coherent && rcbr { "pass" } else { "FAIL" };
        writeln!(
            out,
            "{name}: depth {}, hereditarily coherent {}, rcbr at level {level} {}: {verdict}",
            w.hierarchy.depth(),
            yes_no(coherent),
            yes_no(rcbr)
        )
        .expect("string write");
        if !(coherent && rcbr) {
            failures.push(name);
        }
    }
    if failures.is_empty() {
        Ok(out)
    } else {
        Err(Failure::with_output(out, format!("check fails for {}", failures.join(", "))))
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub struct PlayArgs<'a> {
    pub path: &'a Path,
    pub strategy: &'a str,
    pub side: SideArg,
    pub player: u8,
    pub interactive: bool,
    pub seed: Option<u64>,
    pub budget: usize,
    pub transcript: Option<&'a Path>,
}

fn is_ranked(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with("ranked-game"))
}

pub fn play(args: PlayArgs<'_>) -> Result<String, Failure> {
    let text = read(args.path)?;
    if is_ranked(&text) {
        let game = parse_ranked_game(&text).map_err(|e| Failure::input(args.path, e))?;
        host(&RankedArena::new(RankedEngine::new(game)), &args)
    } else {
        let game = parse_game(&text).map_err(|e| Failure::input(args.path, e))?;
        host(&FiniteArena::for_game(&game), &args)
    }
}

fn host(arena: &dyn Arena, args: &PlayArgs<'_>) -> Result<String, Failure> {
    let player = player_of(args.player);
    let root = arena
        .parse_strategy(player, args.strategy)
        .ok_or_else(|| Failure::invalid(format!("player {player} has no strategy `{}`", args.strategy)))?;
    let (mut first, mut second): (Box<dyn StrategyI>, Box<dyn StrategyII>) = match args.side {
        SideArg::I => {
            let tau = synthesize_i(arena, player, root).map_err(Failure::invalid)?;
            let opponent: Box<dyn StrategyII> = match (args.interactive, args.seed) {
                (true, _) => Box::new(HumanII),
                (false, Some(seed)) => Box::new(RandomLegalII::new(seed)),
                (false, None) => Box::new(RankDescentII),
            };
            (Box::new(tau), opponent)
        }
        SideArg::II => {
            let sigma = synthesize_ii(arena, player, root).map_err(Failure::invalid)?;
            let opponent: Box<dyn StrategyI> = match (args.interactive, args.seed) {
                (true, _) => Box::new(HumanI),
                (false, Some(seed)) => Box::new(RandomLegalI::new(seed)),
                (false, None) => Box::new(CanonicalI::new()),
            };
            (opponent, Box::new(sigma))
        }
    };
    let record = run_play(arena, player, root, first.as_mut(), second.as_mut(), args.budget);
    let transcript = emit_record(arena, &record);
    if let Some(path) = args.transcript {
        std::fs::write(path, &transcript).map_err(|e| Failure::input(path, e))?;
    }
    let mut out = transcript;
    if let Some(chain) = descent_certificate(arena, &record) {
        let parts: Vec<String> = chain.iter().map(Ordinal::to_string).collect();
        writeln!(out, "descent: {}", parts.join(" > ")).expect("string write");
    }
    match audit(arena, &record) {
        Ok(()) => {
            out.push_str("audit: ok\n");
            Ok(out)
        }
        Err(e) => Err(Failure::with_output(out, format!("transcript fails audit: {e}"))),
    }
}

fn listing(set: &BTreeSet<u64>) -> String {
    if set.is_empty() {
        "-".to_string()
    } else {
        set.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
    }
}

pub fn ranked_demo(path: &Path, gamma: Option<&Ordinal>) -> Result<String, Failure> {
    let game = parse_ranked_game(&read(path)?).map_err(|e| Failure::input(path, e))?;
    let coeffs: Vec<String> = game.coeffs.iter().map(u64::to_string).collect();
    let engine = RankedEngine::new(game.clone());
    let mut out = format!(
        "ranked game {}: modulus {}, coeffs {}, horizon {}\nconvergence: {}\ngamma | closed form | engine\n",
        game.name,
        game.modulus(),
        coeffs.join(" "),
        game.horizon,
        engine.convergence()
    );
    let gammas = match gamma {
        Some(g) => vec![g.clone()],
        None => engine.checkpoints(),
    };
    let mut mismatches = Vec::new();
    for g in gammas {
        let closed = ranked_stages(&game, &g).map_err(Failure::invalid)?.enumerate(&game);
        let state = engine.state_at(&g);
        let engine_set = state[0].enumerate(&game);
        if engine_set != closed || state[1].enumerate(&game) != closed {
            mismatches.push(g.to_string());
        }
        writeln!(out, "{g} | {} | {}", listing(&closed), listing(&engine_set)).expect("string write");
    }
    if mismatches.is_empty() {
        Ok(out)
    } else {
        Err(Failure::with_output(out, format!("engine differs from the closed form at {}", mismatches.join(", "))))
    }
}

pub fn verify_ft(size: usize, values: &[i64], sample: Option<usize>, seed: u64) -> Result<String, Failure> {
    let values: Vec<i64> = values.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    if values.is_empty() {
        return Err(Failure::invalid("--values needs at least one value"));
    }
    let shown: Vec<String> = values.iter().map(i64::to_string).collect();
    let shown = shown.join(",");
    let per_player = (values.len() as u128).pow((size * size) as u32);
    let (games, corpus_line, pass_line) = match (size, sample) {
        (_, Some(0)) => return Err(Failure::invalid("--sample must be positive")),
        (2, None) => {
            let total = corpus::exhaustive_count(size, &values);
            if total > 100_000 {
                return Err(Failure::invalid(format!(
                    "the exhaustive corpus has {total} games; use --sample"
                )));
            }
            (
                corpus::exhaustive(size, &values),
                format!(
                    "corpus: {total} games, all {per_player}x{per_player} pairs of 2x2 payoff matrices over {shown}"
                ),
                format!("all {per_player}x{per_player}-paired checks passed"),
            )
        }
        (_, sample) => {
            let n = sample.unwrap_or(2000);
            (
                corpus::sampled(size, size, &values, n, seed),
                format!("corpus: {n} sampled {size}x{size} games over {shown}, seed {seed}"),
                format!("all {n} sampled checks passed"),
            )
        }
    };
    let summary = sweep::run(&games, sweep::check_game);
    let t = &summary.tally;
    let mut out = format!(
        "{corpus_line}\nchecked: {} strategies, {} survivors with depth-8 witnesses, {} strictly dominated\n",
        t.strategies, t.survivors, t.dominated
    );
    if summary.passed() {
        out.push_str(&pass_line);
        out.push('\n');
        Ok(out)
    } else {
        writeln!(out, "FAILED: {} of {} games", summary.counterexamples.len(), summary.games).expect("string write");
        out.push_str(&summary.dump(5));
        Err(Failure::with_output(out, "verification sweep found counterexamples"))
    }
}

fn parse_pairs(path: &Path, text: &str) -> Result<BTreeSet<(String, String)>, Failure> {
    let mut pairs = BTreeSet::new();
    for (k, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        match content.split_whitespace().collect::<Vec<_>>().as_slice() {
            [x, y] => {
                pairs.insert((x.to_string(), y.to_string()));
            }
            _ => {
                return Err(Failure::input(
                    path,
                    format!("line {}: expected two identifiers, found `{content}`", k + 1),
                ))
            }
        }
    }
    Ok(pairs)
}

fn parse_measure(text: &str) -> Result<FiniteMeasure<String>, Failure> {
    let mut weights = Vec::new();
    for item in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()) {
        let (id, w) = item
            .split_once('=')
            .ok_or_else(|| Failure::Input(format!("measure: expected `<id>=<weight>`, found `{item}`")))?;
        let w = parse_rational(w).map_err(|e| Failure::Input(format!("measure: {e}")))?;
        weights.push((id.to_string(), w));
    }
    FiniteMeasure::from_pairs(weights).map_err(|e| Failure::invalid(format!("measure: {e}")))
}

pub fn lift(path: &Path, measure: &str) -> Result<String, Failure> {
    let pairs = parse_pairs(path, &read(path)?)?;
    let mu = parse_measure(measure)?;
    let nu = lubin_lift(&pairs, &mu).map_err(Failure::invalid)?;
    let mut out = String::new();
    for ((x, y), w) in nu.iter() {
        writeln!(out, "({x}, {y}) {}", short_string(w)).expect("string write");
    }
    Ok(out)
}
