//! A human player reading moves from standard input.

use std::io::{self, BufRead, Write};

use rcbr_core::justification::{Arena, JMoveI, JPosition, Move, StrategyI, StrategyII};

fn last_move(arena: &dyn Arena, pos: &JPosition) -> String {
    match pos.history.split_last() {
        Some((mv, rest)) => {
            let before = JPosition {
                root_player: pos.root_player,
                root: pos.root,
                history: rest.to_vec(),
            };
            format!("; engine played {}", arena.move_text(&before, mv))
        }
        None => String::new(),
    }
}

/// `None` on end of input.
fn ask(prompt: &str) -> Option<String> {
    print!("{prompt}");
    io::stdout().flush().ok()?;
    let mut line = String::new();
    match io::stdin().lock().read_line(&mut line) {
        Ok(0) | Err(_) => {
            println!();
            None
        }
        Ok(_) => Some(line.trim().to_string()),
    }
}

pub struct HumanI;

impl StrategyI for HumanI {
    fn choose(&mut self, arena: &dyn Arena, pos: &JPosition) -> Option<JMoveI> {
        let (owner, s) = pos.current();
        println!(
            "ply {}: defend {} of player {owner}{}",
            pos.ply(),
            arena.strategy_id(owner, s),
            last_move(arena, pos)
        );
        print!("beliefs allowed:\n{}", arena.describe_beliefs(owner, s));
        loop {
            let line = ask("your move (mu: <id>=<weight> ... ; b: <id> ...): ")?;
            match arena.parse_move(pos, &line) {
                Ok(Move::I(mv)) => return Some(mv),
                Ok(Move::II(_)) => unreachable!("I's turn"),
                Err(e) => println!("cannot read move: {e}"),
            }
        }
    }
}

pub struct HumanII;

impl StrategyII for HumanII {
    fn choose(&mut self, arena: &dyn Arena, pos: &JPosition) -> Option<usize> {
        let (owner, _) = pos.current();
        let options = arena.legal_moves_ii(pos).ok()?;
        let ids: Vec<String> = options.iter().map(|&t| arena.strategy_id(owner.other(), t)).collect();
        println!("ply {}{}", pos.ply(), last_move(arena, pos));
        loop {
            let line = ask(&format!("your move (one of {}): ", ids.join(" ")))?;
            match arena.parse_move(pos, &line) {
                Ok(Move::II(t)) => return Some(t),
                Ok(Move::I(_)) => unreachable!("II's turn"),
                Err(e) => println!("cannot read move: {e}"),
            }
        }
    }
}
