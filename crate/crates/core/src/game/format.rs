//! Line-oriented game file format.
//!
//! ```text
//! game cascade
//! strategies 1 a b
//! strategies 2 x y
//! payoffs 1
//! 1 0
//! 0 2
//! payoffs 2
//! 1 0
//! 1 0
//! ```
//!
//! Both payoff blocks are indexed by player 1's strategies (rows) and player
//! 2's strategies (columns). `#` starts a comment.

use super::model::{Game, GameError, Player};
use crate::exact::rational::{parse_rational, short_string};
use crate::exact::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Game(#[from] GameError),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

fn player_arg(line: usize, word: Option<&str>) -> Result<Player, FormatError> {
    match word {
        Some("1") => Ok(Player::One),
        Some("2") => Ok(Player::Two),
        Some(other) => Err(syntax(line, format!("expected player 1 or 2, found `{other}`"))),
        None => Err(syntax(line, "missing player number")),
    }
}

pub fn parse_game(text: &str) -> Result<Game, FormatError> {
    let mut name: Option<String> = None;
    let mut strategies: [Option<Vec<String>>; 2] = [None, None];
    let mut payoffs: [Option<Vec<Vec<Rational>>>; 2] = [None, None];
    let mut block: Option<Player> = None;
    let mut last_line = 0;

    for (number, raw) in text.lines().enumerate() {
        let line = number + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let head = words.next().expect("non-empty line");
        match head {
            "game" => {
                let id = words.next().ok_or_else(|| syntax(line, "missing game name"))?;
                if words.next().is_some() {
                    return Err(syntax(line, "game name must be a single word"));
                }
                if name.replace(id.to_string()).is_some() {
                    return Err(syntax(line, "duplicate `game` line"));
                }
                block = None;
            }
            "strategies" => {
                let player = player_arg(line, words.next())?;
                let ids: Vec<String> = words.map(str::to_string).collect();
                if ids.is_empty() {
                    return Err(syntax(line, format!("player {player} lists no strategies")));
                }
                for (k, id) in ids.iter().enumerate() {
                    if ids[..k].contains(id) {
                        return Err(syntax(line, format!("duplicate strategy `{id}` for player {player}")));
                    }
                }
                if strategies[player.index()].replace(ids).is_some() {
                    return Err(syntax(line, format!("strategies for player {player} given twice")));
                }
                block = None;
            }
            "payoffs" => {
                let player = player_arg(line, words.next())?;
                if words.next().is_some() {
                    return Err(syntax(line, "unexpected text after `payoffs <player>`"));
                }
                if payoffs[player.index()].replace(Vec::new()).is_some() {
                    return Err(syntax(line, format!("payoffs for player {player} given twice")));
                }
                block = Some(player);
            }
            _ => {
                let player = block.ok_or_else(|| syntax(line, format!("unexpected `{head}`")))?;
                let row = content
                    .split_whitespace()
                    .map(|w| parse_rational(w).map_err(|e| syntax(line, e.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                let expected_cols = strategies[1].as_ref().map(Vec::len);
                if let Some(cols) = expected_cols {
                    if row.len() != cols {
                        return Err(syntax(
                            line,
                            format!("payoff row for player {player} has {} entries, expected {cols}", row.len()),
                        ));
                    }
                }
                payoffs[player.index()].as_mut().expect("block open").push(row);
            }
        }
    }

    let name = name.ok_or_else(|| syntax(last_line, "missing `game` line"))?;
    let [s1, s2] = strategies;
    let s1 = s1.ok_or_else(|| syntax(last_line, "missing strategies for player 1"))?;
    let s2 = s2.ok_or_else(|| syntax(last_line, "missing strategies for player 2"))?;
    let [p1, p2] = payoffs;
    let p1 = p1.ok_or_else(|| syntax(last_line, "missing payoffs for player 1"))?;
    let p2 = p2.ok_or_else(|| syntax(last_line, "missing payoffs for player 2"))?;
    Ok(Game::new(name, s1, s2, p1, p2)?)
}

pub fn emit_game(game: &Game) -> String {
    let mut out = format!("game {}\n", game.name());
    for player in Player::BOTH {
        out.push_str(&format!("strategies {player} {}\n", game.strategies(player).join(" ")));
    }
    for player in Player::BOTH {
        out.push_str(&format!("payoffs {player}\n"));
        for row in game.payoff_matrix(player) {
            let cells: Vec<String> = row.iter().map(short_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
    }
    out
}
