//! Iterated elimination on finite games and finite polyhedral relations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::relation::BeliefRelation;
use crate::exact::lp::verify_infeasibility_certificate;
use crate::exact::rational::short_string;
use crate::exact::{Ordinal, Rational};
use crate::game::{Belief, Game, Player, Rectangle};
use crate::response::{is_best_response, is_strictly_dominated, pearce_subgame, solve_zero_sum, Dominance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Concept {
    Rat,
    Mrat,
    Iu,
    Miu,
    /// Rationalizability for an abstract relation E.
    ERat,
}

impl Concept {
    pub const GAME_CONCEPTS: [Concept; 4] = [Concept::Rat, Concept::Mrat, Concept::Iu, Concept::Miu];

    /// Whether alternatives (or dominating mixtures) range over the current
    /// survivors rather than the original strategy list.
    pub fn is_memoryless(self) -> bool {
        matches!(self, Concept::Mrat | Concept::Miu)
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Concept::Rat => "rat",
            Concept::Mrat => "mrat",
            Concept::Iu => "iu",
            Concept::Miu => "miu",
            Concept::ERat => "e-rat",
        })
    }
}

impl FromStr for Concept {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rat" => Ok(Concept::Rat),
            "mrat" => Ok(Concept::Mrat),
            "iu" => Ok(Concept::Iu),
            "miu" => Ok(Concept::Miu),
            "e-rat" | "erat" => Ok(Concept::ERat),
            other => Err(format!("unknown concept `{other}` (expected rat, mrat, iu, miu or e-rat)")),
        }
    }
}

/// Why a strategy was removed at a stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EliminationCertificate {
    /// A mixture beating the strategy in every surviving opponent column.
    Dominated(Dominance),
    /// Farkas multipliers for the relation slice restricted to the
    /// surviving opponent strategies.
    Infeasible { farkas: Vec<Rational> },
    /// The opponent had no survivors, so no belief can concentrate on them.
    EmptySupport,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub label: Ordinal,
    pub rectangle: Rectangle,
    pub eliminated: [BTreeSet<usize>; 2],
    /// Beliefs for the stage's survivors, concentrated on the previous
    /// opponent survivors.
    pub justifications: [BTreeMap<usize, Belief>; 2],
    pub certificates: [BTreeMap<usize, EliminationCertificate>; 2],
}

impl Stage {
    fn initial(rectangle: Rectangle) -> Self {
        Self {
            label: Ordinal::zero(),
            rectangle,
            eliminated: Default::default(),
            justifications: Default::default(),
            certificates: Default::default(),
        }
    }

    pub fn eliminates_nothing(&self) -> bool {
        self.eliminated.iter().all(BTreeSet::is_empty)
    }
}

/// Stage 0 is the full rectangle; stage `k` holds `X^k` with the
/// justifications and certificates computed against `X^{k-1}`. The last
/// stage eliminates nothing and confirms the fixpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationTrace {
    pub concept: Concept,
    pub strategies: [Vec<String>; 2],
    pub stages: Vec<Stage>,
    /// Least α with `X^{α+1} = X^α`.
    pub convergence: Ordinal,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EliminationError {
    #[error("stage {stage}: no certificate could be produced for player {player} strategy `{strategy}`")]
    CertificateMismatch { stage: usize, player: Player, strategy: String },
    #[error("concept {0} needs a game, not an abstract relation")]
    WrongSource(Concept),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("stage {stage}: {message}")]
pub struct TraceError {
    pub stage: usize,
    pub message: String,
}

enum Verdict {
    Survive(Belief),
    Eliminate(EliminationCertificate),
}

fn run(
    concept: Concept,
    strategies: [Vec<String>; 2],
    step: impl Fn(Player, usize, &Rectangle, usize) -> Result<Verdict, EliminationError> + Sync,
) -> Result<EliminationTrace, EliminationError> {
    let full = Rectangle::new(
        (0..strategies[0].len()).collect(),
        (0..strategies[1].len()).collect(),
    );
    let mut stages = vec![Stage::initial(full)];
    loop {
        let k = stages.len();
        let prev = &stages[k - 1].rectangle;
        let mut stage = Stage {
            label: Ordinal::finite(k as u64),
            rectangle: prev.clone(),
            eliminated: Default::default(),
            justifications: Default::default(),
            certificates: Default::default(),
        };
        for player in Player::BOTH {
            let side: Vec<usize> = prev.side(player).iter().copied().collect();
            let verdicts: Vec<(usize, Verdict)> = if prev.side(player.other()).is_empty() {
                side.into_iter().map(|s| (s, Verdict::Eliminate(EliminationCertificate::EmptySupport))).collect()
            } else {
                side.into_par_iter()
                    .map(|s| step(player, s, prev, k).map(|v| (s, v)))
                    .collect::<Result<_, _>>()?
            };
            let i = player.index();
            for (s, verdict) in verdicts {
                match verdict {
                    Verdict::Survive(belief) => {
                        stage.justifications[i].insert(s, belief);
                    }
                    Verdict::Eliminate(certificate) => {
                        stage.rectangle.sides[i].remove(&s);
                        stage.eliminated[i].insert(s);
                        stage.certificates[i].insert(s, certificate);
                    }
                }
            }
        }
        let done = stage.eliminates_nothing();
        stages.push(stage);
        if done {
            return Ok(EliminationTrace {
                concept,
                strategies,
                convergence: Ordinal::finite(k as u64 - 1),
                stages,
            });
        }
    }
}

fn own_set(concept: Concept, game: &Game, player: Player, prev: &Rectangle) -> BTreeSet<usize> {
    if concept.is_memoryless() {
        prev.side(player).clone()
    } else {
        game.all_strategies(player)
    }
}

fn mismatch(game: &Game, stage: usize, player: Player, s: usize) -> EliminationError {
    EliminationError::CertificateMismatch {
        stage,
        player,
        strategy: game.strategy_id(player, s).to_string(),
    }
}

/// Runs one of the four game concepts to its fixpoint. Every verdict comes
/// with an independent certificate: survivors get a belief to which they
/// are a best response, eliminated strategies a dominating mixture.
pub fn eliminate(game: &Game, concept: Concept) -> Result<EliminationTrace, EliminationError> {
    if concept == Concept::ERat {
        return Err(EliminationError::WrongSource(concept));
    }
    let strategies = [
        game.strategies(Player::One).to_vec(),
        game.strategies(Player::Two).to_vec(),
    ];
    run(concept, strategies, |player, s, prev, stage| {
        let own = own_set(concept, game, player, prev);
        let opponents = prev.side(player.other());
        let dominance = |own: &BTreeSet<usize>| {
            is_strictly_dominated(game, player, s, own, opponents).expect("indices come from the game")
        };
        match concept {
            Concept::Rat | Concept::Mrat => {
                let belief = crate::response::find_justifying_belief(game, player, s, opponents, &own)
                    .expect("indices come from the game");
                match belief {
                    Some(mu) => Ok(Verdict::Survive(mu)),
                    None => dominance(&own)
                        .map(|d| Verdict::Eliminate(EliminationCertificate::Dominated(d)))
                        .ok_or_else(|| mismatch(game, stage, player, s)),
                }
            }
            Concept::Iu | Concept::Miu => {
                if let Some(d) = dominance(&own) {
                    return Ok(Verdict::Eliminate(EliminationCertificate::Dominated(d)));
                }
                // the column player's optimal mix in the restricted margin game
                // is a belief against which s is a best reply
                let sub = pearce_subgame(game, player, s, &own, opponents).expect("indices come from the game");
                let solution = solve_zero_sum(&sub).expect("margin games are zero-sum");
                let columns: Vec<usize> = opponents.iter().copied().collect();
                let belief = solution.column_mix.pushforward(|&k| columns[k]);
                if is_best_response(game, player, s, &belief, &own).expect("indices come from the game") {
                    Ok(Verdict::Survive(belief))
                } else {
                    Err(mismatch(game, stage, player, s))
                }
            }
            Concept::ERat => unreachable!(),
        }
    })
}

/// Iterated deletion of strategies without a related belief concentrated on
/// the surviving opponent strategies.
pub fn rat_of_relation<R: BeliefRelation + ?Sized>(relation: &R) -> EliminationTrace {
    let strategies = [Player::One, Player::Two].map(|p| {
        (0..relation.num_strategies(p))
            .map(|s| relation.strategy_id(p, s).to_string())
            .collect::<Vec<_>>()
    });
    run(Concept::ERat, strategies, |player, s, prev, _| {
        let opponents = prev.side(player.other());
        Ok(match relation.justify(player, s, opponents) {
            Some(mu) => Verdict::Survive(mu),
            None => Verdict::Eliminate(EliminationCertificate::Infeasible {
                farkas: relation
                    .refute(player, s, opponents)
                    .expect("an infeasible slice has a Farkas certificate"),
            }),
        })
    })
    .expect("relation verdicts always carry certificates")
}

/// Per-strategy outcome of an E-justification check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JustificationReport {
    pub justified: bool,
    pub beliefs: [BTreeMap<usize, Option<Belief>>; 2],
}

impl JustificationReport {
    pub fn failures(&self, player: Player) -> BTreeSet<usize> {
        self.beliefs[player.index()]
            .iter()
            .filter(|(_, b)| b.is_none())
            .map(|(&s, _)| s)
            .collect()
    }
}

/// Whether every strategy of `rectangle` has a related belief concentrated
/// on the other side.
pub fn check_e_justified<R: BeliefRelation + ?Sized>(relation: &R, rectangle: &Rectangle) -> JustificationReport {
    let beliefs = [Player::One, Player::Two].map(|player| {
        rectangle
            .side(player)
            .iter()
            .map(|&s| (s, relation.justify(player, s, rectangle.side(player.other()))))
            .collect::<BTreeMap<_, _>>()
    });
    let justified = beliefs.iter().all(|m| m.values().all(Option::is_some));
    JustificationReport { justified, beliefs }
}

impl EliminationTrace {
    pub fn final_stage(&self) -> &Stage {
        self.stages.last().expect("a trace has at least two stages")
    }

    pub fn final_rectangle(&self) -> &Rectangle {
        &self.final_stage().rectangle
    }

    pub fn survivors(&self, player: Player) -> &BTreeSet<usize> {
        self.final_rectangle().side(player)
    }

    pub fn is_survivor(&self, player: Player, s: usize) -> bool {
        self.survivors(player).contains(&s)
    }

    /// `X^γ`, which equals the final rectangle beyond the recorded stages.
    pub fn rectangle_at(&self, stage: usize) -> &Rectangle {
        &self.stages[stage.min(self.stages.len() - 1)].rectangle
    }

    /// The canonical belief of a final survivor, concentrated on the final
    /// opponent survivors.
    pub fn final_belief(&self, player: Player, s: usize) -> Option<&Belief> {
        self.final_stage().justifications[player.index()].get(&s)
    }

    /// The γ with `s ∈ X^γ \ X^{γ+1}`, or `None` for survivors.
    pub fn elimination_ordinal(&self, player: Player, s: usize) -> Option<Ordinal> {
        self.stages
            .iter()
            .position(|stage| stage.eliminated[player.index()].contains(&s))
            .map(|k| Ordinal::finite(k as u64 - 1))
    }

    fn ids(&self, player: Player, set: &BTreeSet<usize>) -> String {
        if set.is_empty() {
            return "-".to_string();
        }
        let ids: Vec<&str> = set.iter().map(|&s| self.strategies[player.index()][s].as_str()).collect();
        ids.join(" ")
    }

    fn label(&self, player: Player, set: &BTreeSet<usize>) -> String {
        let ids: Vec<&str> = set.iter().map(|&s| self.strategies[player.index()][s].as_str()).collect();
        format!("{{{}}}", ids.join(", "))
    }

    fn belief_text(&self, over: Player, belief: &Belief) -> String {
        let parts: Vec<String> = belief
            .iter()
            .map(|(&t, w)| format!("{}: {}", self.strategies[over.index()][t], short_string(w)))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// Text rendering: one line per stage and a closing fixpoint line. With
    /// `certificates`, every verdict is listed under its stage.
    pub fn render(&self, certificates: bool) -> String {
        let mut out = String::new();
        for stage in &self.stages[1..] {
            out.push_str(&format!(
                "stage {}: eliminated 1: {} ; eliminated 2: {}\n",
                stage.label,
                self.ids(Player::One, &stage.eliminated[0]),
                self.ids(Player::Two, &stage.eliminated[1]),
            ));
            if !certificates {
                continue;
            }
            for player in Player::BOTH {
                let i = player.index();
                for (&s, belief) in &stage.justifications[i] {
                    out.push_str(&format!(
                        "  {player} {} justified by {}\n",
                        self.strategies[i][s],
                        self.belief_text(player.other(), belief)
                    ));
                }
                for (&s, certificate) in &stage.certificates[i] {
                    let why = match certificate {
                        EliminationCertificate::Dominated(d) => {
                            let margins: Vec<String> = d
                                .margins
                                .iter()
                                .map(|(t, m)| format!("{}: {}", self.strategies[player.other().index()][*t], short_string(m)))
                                .collect();
                            format!(
                                "dominated by {} with margins {{{}}}",
                                self.belief_text(player, &d.mixture),
                                margins.join(", ")
                            )
                        }
                        EliminationCertificate::Infeasible { farkas } => {
                            let ys: Vec<String> = farkas.iter().map(short_string).collect();
                            format!("refuted by multipliers [{}]", ys.join(" "))
                        }
                        EliminationCertificate::EmptySupport => "has no opponent survivors to believe in".to_string(),
                    };
                    out.push_str(&format!("  {player} {} {why}\n", self.strategies[i][s]));
                }
            }
        }
        let last = self.final_rectangle();
        out.push_str(&format!(
            "fixpoint: {} x {} at {}\n",
            self.label(Player::One, last.side(Player::One)),
            self.label(Player::Two, last.side(Player::Two)),
            self.convergence
        ));
        out
    }

    /// Re-checks the trace against the game it was computed from.
    pub fn verify_game(&self, game: &Game) -> Result<(), TraceError> {
        if self.concept == Concept::ERat {
            return self.verify_relation(game);
        }
        self.verify_with(
            |player, s, belief, prev| {
                let own = own_set(self.concept, game, player, prev);
                belief.is_concentrated(|t| prev.side(player.other()).contains(t))
                    && is_best_response(game, player, s, belief, &own).unwrap_or(false)
            },
            |player, s, certificate, prev| match certificate {
                EliminationCertificate::Dominated(d) => {
                    let own = own_set(self.concept, game, player, prev);
                    d.mixture.is_concentrated(|k| own.contains(k)) && d.verify(game, player, s, prev.side(player.other()))
                }
                EliminationCertificate::EmptySupport => prev.side(player.other()).is_empty(),
                EliminationCertificate::Infeasible { .. } => false,
            },
            game.num_strategies(Player::One),
            game.num_strategies(Player::Two),
        )
    }

    /// Re-checks an E-rationalizability trace against its relation.
    pub fn verify_relation<R: BeliefRelation + ?Sized>(&self, relation: &R) -> Result<(), TraceError> {
        if self.concept != Concept::ERat {
            return Err(TraceError {
                stage: 0,
                message: format!("a {} trace cannot be checked against a relation alone", self.concept),
            });
        }
        self.verify_with(
            |player, s, belief, prev| {
                belief.is_concentrated(|t| prev.side(player.other()).contains(t)) && relation.relates(player, s, belief)
            },
            |player, s, certificate, prev| match certificate {
                EliminationCertificate::Infeasible { farkas } => {
                    let system = relation.restricted_system(player, s, prev.side(player.other()));
                    verify_infeasibility_certificate(&system, farkas)
                }
                EliminationCertificate::EmptySupport => prev.side(player.other()).is_empty(),
                EliminationCertificate::Dominated(_) => false,
            },
            relation.num_strategies(Player::One),
            relation.num_strategies(Player::Two),
        )
    }

    fn verify_with(
        &self,
        justified: impl Fn(Player, usize, &Belief, &Rectangle) -> bool,
        refuted: impl Fn(Player, usize, &EliminationCertificate, &Rectangle) -> bool,
        n1: usize,
        n2: usize,
    ) -> Result<(), TraceError> {
        let fail = |stage: usize, message: String| Err(TraceError { stage, message });
        if self.strategies[0].len() != n1 || self.strategies[1].len() != n2 {
            return fail(0, "strategy lists do not match the source".into());
        }
        if self.stages.len() < 2 {
            return fail(0, "a trace needs an initial and a confirming stage".into());
        }
        let first = &self.stages[0];
        if first.rectangle != Rectangle::new((0..n1).collect(), (0..n2).collect()) || !first.eliminates_nothing() {
            return fail(0, "stage 0 must be the full rectangle".into());
        }
        for (k, pair) in self.stages.windows(2).enumerate() {
            let (prev, stage) = (&pair[0].rectangle, &pair[1]);
            let k = k + 1;
            if stage.label != Ordinal::finite(k as u64) {
                return fail(k, format!("label {} out of sequence", stage.label));
            }
            let last = k + 1 == self.stages.len();
            if stage.eliminates_nothing() != last {
                return fail(k, "only the confirming stage may eliminate nothing".into());
            }
            for player in Player::BOTH {
                let i = player.index();
                let kept = stage.rectangle.side(player);
                let removed: BTreeSet<usize> = prev.side(player).difference(kept).copied().collect();
                if !kept.is_subset(prev.side(player)) || removed != stage.eliminated[i] {
                    return fail(k, format!("player {player} survivor sets do not shrink consistently"));
                }
                if stage.justifications[i].keys().ne(kept.iter()) {
                    return fail(k, format!("player {player} survivors and justifications differ"));
                }
                if stage.certificates[i].keys().ne(removed.iter()) {
                    return fail(k, format!("player {player} eliminations and certificates differ"));
                }
                for (&s, belief) in &stage.justifications[i] {
                    if !justified(player, s, belief, prev) {
                        return fail(k, format!("justification of player {player} strategy `{}` fails", self.strategies[i][s]));
                    }
                }
                for (&s, certificate) in &stage.certificates[i] {
                    if !refuted(player, s, certificate, prev) {
                        return fail(k, format!("certificate of player {player} strategy `{}` fails", self.strategies[i][s]));
                    }
                }
            }
        }
        if self.convergence != Ordinal::finite(self.stages.len() as u64 - 2) {
            return fail(self.stages.len() - 1, "convergence ordinal disagrees with the stages".into());
        }
        Ok(())
    }
}
