//! Witness files: hierarchies as nested parenthesized text.
//!
//! ```text
//! witness := "(" "hierarchy" "player=" P "strategy=" ID level* ")"
//! level   := "(" "level" K entry+ ")"            K counts from 1
//! entry   := "(" point WEIGHT ")"                WEIGHT is p/q
//! point   := "(" ID ")"                          a bare strategy
//!          | "(" "(" ID ")" level+ ")"           strategy and its levels
//! ```
//!
//! Level `K` of a player's hierarchy holds points whose strategy belongs to
//! the opponent and which carry the opponent's levels `1..K-1`; the ids
//! therefore alternate between the players as the nesting deepens. A file
//! may hold several witnesses separated by whitespace; `;` starts a comment
//! running to the end of the line.

use std::collections::HashMap;
use std::sync::Arc;

use super::point::{level_key, Hierarchy, Level, OrderPoint};
use crate::elimination::BeliefRelation;
use crate::exact::rational::{fraction_string, parse_rational};
use crate::exact::Rational;
use crate::game::{FiniteMeasure, Player};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub strategy: usize,
    pub hierarchy: Hierarchy,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct WitnessFormatError {
    pub line: usize,
    pub message: String,
}

pub fn emit_witness<R: BeliefRelation + ?Sized>(relation: &R, witness: &Witness) -> String {
    let player = witness.hierarchy.player;
    let mut memo = HashMap::new();
    let mut out = format!(
        "(hierarchy player={player} strategy={}",
        relation.strategy_id(player, witness.strategy)
    );
    for (k, level) in witness.hierarchy.levels.iter().enumerate() {
        out.push(' ');
        out.push_str(&emit_level(relation, level, player, k + 1, &mut memo));
    }
    out.push(')');
    out
}

fn emit_level<R: BeliefRelation + ?Sized>(
    relation: &R,
    level: &Arc<Level>,
    owner: Player,
    k: usize,
    memo: &mut HashMap<(usize, usize), String>,
) -> String {
    let key = (level_key(level), k);
    if let Some(text) = memo.get(&key) {
        return text.clone();
    }
    let opponent = owner.other();
    let mut out = format!("(level {k}");
    for (point, weight) in level.iter() {
        let id = relation.strategy_id(opponent, point.strategy);
        let point_text = if point.beliefs.is_empty() {
            format!("({id})")
        } else {
            let inner: Vec<String> = point
                .beliefs
                .iter()
                .enumerate()
                .map(|(m, l)| emit_level(relation, l, opponent, m + 1, memo))
                .collect();
            format!("(({id}) {})", inner.join(" "))
        };
        out.push_str(&format!(" ({point_text} {})", fraction_string(weight)));
    }
    out.push(')');
    memo.insert(key, out.clone());
    out
}

#[derive(Debug)]
enum Sexp {
    Atom(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    fn line(&self) -> usize {
        match self {
            Sexp::Atom(_, l) | Sexp::List(_, l) => *l,
        }
    }
}

fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, WitnessFormatError> {
    Err(WitnessFormatError {
        line,
        message: message.into(),
    })
}

fn read_all(text: &str) -> Result<Vec<Sexp>, WitnessFormatError> {
    let mut stack: Vec<(Vec<Sexp>, usize)> = vec![(Vec::new(), 1)];
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split(';').next().unwrap_or("");
        let mut atom = String::new();
        let flush = |atom: &mut String, stack: &mut Vec<(Vec<Sexp>, usize)>| {
            if !atom.is_empty() {
                stack.last_mut().expect("root").0.push(Sexp::Atom(std::mem::take(atom), line));
            }
        };
        for c in content.chars() {
            match c {
                '(' => {
                    flush(&mut atom, &mut stack);
                    stack.push((Vec::new(), line));
                }
                ')' => {
                    flush(&mut atom, &mut stack);
                    if stack.len() == 1 {
                        return fail(line, "unbalanced `)`");
                    }
                    let (items, start) = stack.pop().expect("checked");
                    stack.last_mut().expect("root").0.push(Sexp::List(items, start));
                }
                c if c.is_whitespace() => flush(&mut atom, &mut stack),
                c => atom.push(c),
            }
        }
        flush(&mut atom, &mut stack);
    }
    if stack.len() > 1 {
        return fail(stack.last().expect("nonempty").1, "unclosed `(`");
    }
    Ok(stack.pop().expect("root").0)
}

fn atom(s: &Sexp) -> Option<&str> {
    match s {
        Sexp::Atom(a, _) => Some(a),
        Sexp::List(..) => None,
    }
}

fn strategy<R: BeliefRelation + ?Sized>(relation: &R, player: Player, id: &str, line: usize) -> Result<usize, WitnessFormatError> {
    relation
        .index_of(player, id)
        .map_or_else(|| fail(line, format!("player {player} has no strategy `{id}`")), Ok)
}

/// Parses every witness in `text`, resolving ids against `relation`.
pub fn parse_witnesses<R: BeliefRelation + ?Sized>(relation: &R, text: &str) -> Result<Vec<Witness>, WitnessFormatError> {
    read_all(text)?.iter().map(|form| parse_one(relation, form)).collect()
}

pub fn parse_witness<R: BeliefRelation + ?Sized>(relation: &R, text: &str) -> Result<Witness, WitnessFormatError> {
    let mut all = parse_witnesses(relation, text)?;
    match all.len() {
        1 => Ok(all.pop().expect("one")),
        n => fail(1, format!("expected one witness, found {n}")),
    }
}

fn parse_one<R: BeliefRelation + ?Sized>(relation: &R, form: &Sexp) -> Result<Witness, WitnessFormatError> {
    let line = form.line();
    let Sexp::List(items, _) = form else {
        return fail(line, "expected `(hierarchy ...)`");
    };
    if items.first().and_then(atom) != Some("hierarchy") {
        return fail(line, "expected `(hierarchy ...)`");
    }
    let player = match items.get(1).and_then(atom) {
        Some("player=1") => Player::One,
        Some("player=2") => Player::Two,
        _ => return fail(line, "expected `player=1` or `player=2`"),
    };
    let id = items
        .get(2)
        .and_then(atom)
        .and_then(|a| a.strip_prefix("strategy="))
        .map_or_else(|| fail(line, "expected `strategy=<id>`"), Ok)?;
    let s = strategy(relation, player, id, line)?;
    let levels = parse_levels(relation, &items[3..], player)?;
    Ok(Witness {
        strategy: s,
        hierarchy: Hierarchy::new(player, levels),
    })
}

fn parse_levels<R: BeliefRelation + ?Sized>(relation: &R, forms: &[Sexp], owner: Player) -> Result<Vec<Arc<Level>>, WitnessFormatError> {
    let mut levels = Vec::new();
    for (k, form) in forms.iter().enumerate() {
        levels.push(Arc::new(parse_level(relation, form, owner, k + 1)?));
    }
    Ok(levels)
}

fn parse_level<R: BeliefRelation + ?Sized>(relation: &R, form: &Sexp, owner: Player, k: usize) -> Result<Level, WitnessFormatError> {
    let line = form.line();
    let Sexp::List(items, _) = form else {
        return fail(line, format!("expected `(level {k} ...)`"));
    };
    if items.first().and_then(atom) != Some("level") || items.get(1).and_then(atom) != Some(&k.to_string()) {
        return fail(line, format!("expected `(level {k} ...)`"));
    }
    if items.len() < 3 {
        return fail(line, format!("level {k} has no entries"));
    }
    let opponent = owner.other();
    let mut pairs: Vec<(OrderPoint, Rational)> = Vec::new();
    for entry in &items[2..] {
        let line = entry.line();
        let parts = match entry {
            Sexp::List(parts, _) if parts.len() == 2 => parts,
            _ => return fail(line, "expected `(<point> <weight>)`"),
        };
        let weight_text = atom(&parts[1]).map_or_else(|| fail(line, "expected a weight"), Ok)?;
        let weight = parse_rational(weight_text).map_err(|e| WitnessFormatError {
            line,
            message: e.to_string(),
        })?;
        let point = parse_point(relation, &parts[0], opponent)?;
        if point.order() != k - 1 {
            return fail(line, format!("level {k} needs points of order {}, found order {}", k - 1, point.order()));
        }
        if pairs.iter().any(|(p, _)| *p == point) {
            return fail(line, "repeated point in a level");
        }
        pairs.push((point, weight));
    }
    FiniteMeasure::from_pairs(pairs).map_err(|e| WitnessFormatError {
        line,
        message: format!("level {k}: {e}"),
    })
}

fn parse_point<R: BeliefRelation + ?Sized>(relation: &R, form: &Sexp, holder: Player) -> Result<OrderPoint, WitnessFormatError> {
    let line = form.line();
    let Sexp::List(items, _) = form else {
        return fail(line, "expected a point `(<id>)` or `((<id>) <levels>)`");
    };
    match items.as_slice() {
        [Sexp::Atom(id, _)] => Ok(OrderPoint::bare(strategy(relation, holder, id, line)?)),
        [Sexp::List(head, _), rest @ ..] if !rest.is_empty() => {
            let id = match head.as_slice() {
                [Sexp::Atom(id, _)] => id,
                _ => return fail(line, "expected `(<id>)` at the head of a point"),
            };
            Ok(OrderPoint {
                strategy: strategy(relation, holder, id, line)?,
                beliefs: parse_levels(relation, rest, holder)?,
            })
        }
        _ => fail(line, "expected a point `(<id>)` or `((<id>) <levels>)`"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elimination::{eliminate, Concept};
    use crate::game::examples;
    use crate::hierarchy::witness::build_witness;

    #[test]
    fn pd_text_form() {
        let g = examples::prisoners_dilemma();
        let trace = eliminate(&g, Concept::Rat).unwrap();
        let w = build_witness(&g, &trace, 2).unwrap();
        let entry = w.get(Player::One, 1).unwrap();
        let witness = Witness {
            strategy: 1,
            hierarchy: entry.hierarchy.clone(),
        };
        let text = emit_witness(&g, &witness);
        assert_eq!(
            text,
            "(hierarchy player=1 strategy=D (level 1 ((D) 1/1)) (level 2 (((D) (level 1 ((D) 1/1))) 1/1)))"
        );
        assert_eq!(parse_witness(&g, &text).unwrap(), witness);
    }

    #[test]
    fn round_trip_on_examples() {
        for g in examples::all() {
            let trace = eliminate(&g, Concept::Rat).unwrap();
            let w = build_witness(&g, &trace, 5).unwrap();
            for (player, s, entry) in w.iter() {
                let witness = Witness {
                    strategy: s,
                    hierarchy: entry.hierarchy.clone(),
                };
                let text = emit_witness(&g, &witness);
                let back = parse_witness(&g, &text).unwrap();
                assert_eq!(back.hierarchy.player, player);
                assert!(back.hierarchy.same_as(&witness.hierarchy));
                assert_eq!(emit_witness(&g, &back), text);
            }
        }
    }

    #[test]
    fn several_witnesses_and_comments() {
        let g = examples::prisoners_dilemma();
        let text = "; two witnesses\n(hierarchy player=1 strategy=D (level 1 ((D) 1/1)))\n(hierarchy player=2 strategy=D)\n";
        let all = parse_witnesses(&g, text).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[1].hierarchy.depth(), 0);
    }

    #[test]
    fn errors_name_the_line() {
        let g = examples::prisoners_dilemma();
        let cases = [
            ("(hierarchy player=3 strategy=D)", "line 1: expected `player=1` or `player=2`"),
            ("(hierarchy player=1 strategy=Q)", "line 1: player 1 has no strategy `Q`"),
            ("(hierarchy player=1 strategy=D\n(level 1 ((D) 1/2)))", "line 2: level 1: weights sum to 1/2, not 1"),
            ("(hierarchy player=1 strategy=D\n(level 2 ((D) 1/1)))", "line 2: expected `(level 1 ...)`"),
            ("(hierarchy player=1 strategy=D (level 1 ((D) 1/1))", "line 1: unclosed `(`"),
            (
                "(hierarchy player=1 strategy=D (level 1 (((D) (level 1 ((D) 1/1))) 1/1)))",
                "line 1: level 1 needs points of order 0, found order 1",
            ),
        ];
        for (text, message) in cases {
            assert_eq!(parse_witness(&g, text).unwrap_err().to_string(), message, "{text}");
        }
    }
}
