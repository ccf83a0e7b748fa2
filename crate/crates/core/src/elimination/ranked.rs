//! The ranked integer games: strategies are naturals, player 1 earns 1 iff
//! the opponent's rank is strictly below their own, and the rank of
//! `m·n + r` is `ω·a_r + n`. Elimination runs through transfinitely many
//! stages, so it is carried out on a symbolic description of the survivor
//! sets instead of by linear programming.

use std::collections::BTreeSet;
use std::fmt;

use crate::exact::Ordinal;
use crate::game::Player;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RankedError {
    #[error("a ranked game needs at least one coefficient")]
    NoCoefficients,
    #[error("coefficients must cover 0..={max} without gaps; {missing} is missing")]
    Gap { max: u64, missing: u64 },
    #[error("coefficient {0} is too large")]
    TooLarge(u64),
    #[error("horizon must be positive")]
    ZeroHorizon,
    #[error("stage {gamma} exceeds the bound {bound}")]
    BeyondBound { gamma: Ordinal, bound: Ordinal },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedGame {
    pub name: String,
    pub coeffs: Vec<u64>,
    pub horizon: u64,
}

/// Survivors of one player: class `r` keeps `{m·n + r : n >= lows[r]}`, or
/// nothing when `lows[r]` is `None`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankedSurvivors {
    pub lows: Vec<Option<u64>>,
}

impl RankedGame {
    /// The coefficient set must be exactly `{0, …, max}` so that the rank
    /// map is onto `ω·(1 + max)`.
    pub fn new(name: impl Into<String>, coeffs: Vec<u64>, horizon: u64) -> Result<Self, RankedError> {
        let max = *coeffs.iter().max().ok_or(RankedError::NoCoefficients)?;
        if max >= 1 << 20 {
            return Err(RankedError::TooLarge(max));
        }
        let present: BTreeSet<u64> = coeffs.iter().copied().collect();
        if let Some(missing) = (0..=max).find(|c| !present.contains(c)) {
            return Err(RankedError::Gap { max, missing });
        }
        if horizon == 0 {
            return Err(RankedError::ZeroHorizon);
        }
        Ok(Self {
            name: name.into(),
            coeffs,
            horizon,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.coeffs.len() as u64
    }

    /// `ψ(m·n + r) = ω·a_r + n`.
    pub fn rank(&self, x: u64) -> Ordinal {
        let m = self.modulus();
        let (n, r) = (x / m, x % m);
        Ordinal::omega_times(self.coeffs[r as usize]).plus(n)
    }

    /// The length `ω·(1 + max a_r)` of the rank pre-wellorder.
    pub fn bound(&self) -> Ordinal {
        Ordinal::omega_times(1 + self.coeffs.iter().max().copied().unwrap_or(0))
    }

    /// The largest rank, if the range has one. Every class is infinite, so
    /// the range never has a maximum.
    pub fn max_rank(&self) -> Option<Ordinal> {
        None
    }

    /// Payoff of `own` against `other` for either player; the game is
    /// symmetric.
    pub fn payoff(&self, own: u64, other: u64) -> u64 {
        u64::from(self.rank(other) < self.rank(own))
    }

    pub fn full(&self) -> RankedSurvivors {
        RankedSurvivors {
            lows: vec![Some(0); self.coeffs.len()],
        }
    }

    fn class_of(&self, x: u64) -> (usize, u64) {
        let m = self.modulus();
        ((x % m) as usize, x / m)
    }
}

impl RankedSurvivors {
    pub fn contains(&self, game: &RankedGame, x: u64) -> bool {
        let (r, n) = game.class_of(x);
        self.lows[r].is_some_and(|lo| n >= lo)
    }

    pub fn is_empty(&self) -> bool {
        self.lows.iter().all(Option::is_none)
    }

    pub fn contains_rank(&self, game: &RankedGame, rank: &Ordinal) -> bool {
        rank.cnf().len() <= 2
            && self.lows.iter().enumerate().any(|(r, lo)| {
                lo.is_some_and(|lo| game.coeffs[r] == rank.coefficient(1) && lo <= rank.coefficient(0))
            })
    }

    /// The least rank among the survivors.
    pub fn min_rank(&self, game: &RankedGame) -> Option<Ordinal> {
        self.lows
            .iter()
            .enumerate()
            .filter_map(|(r, lo)| lo.map(|lo| Ordinal::omega_times(game.coeffs[r]).plus(lo)))
            .min()
    }

    /// A survivor of least rank, least index among ties.
    pub fn min_rank_element(&self, game: &RankedGame) -> Option<u64> {
        let m = game.modulus();
        self.lows
            .iter()
            .enumerate()
            .filter_map(|(r, lo)| lo.map(|lo| (Ordinal::omega_times(game.coeffs[r]).plus(lo), lo * m + r as u64)))
            .min()
            .map(|(_, x)| x)
    }

    /// The survivors below the horizon.
    pub fn enumerate(&self, game: &RankedGame) -> BTreeSet<u64> {
        (0..game.horizon).filter(|&x| self.contains(game, x)).collect()
    }
}

impl fmt::Display for RankedSurvivors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .lows
            .iter()
            .enumerate()
            .map(|(r, lo)| match lo {
                Some(lo) => format!("class {r} from {lo}"),
                None => format!("class {r} gone"),
            })
            .collect();
        f.write_str(&parts.join(", "))
    }
}

/// Whether `x` is a best response to some finitely supported belief
/// concentrated on `survivors`.
///
/// Against a belief μ, `x` earns μ(ranks below ψ(x)), and because the rank
/// range has no maximum some alternative earns 1 against any finite
/// support. So `x` is a best response iff some such μ puts all its weight
/// below ψ(x), or the survivors contain a maximal-rank element (a Dirac at
/// it gives every strategy payoff 0). Returns false on empty survivors.
pub fn ranked_justifiable(game: &RankedGame, x: u64, survivors: &RankedSurvivors) -> bool {
    let below = survivors.min_rank(game).is_some_and(|min| min < game.rank(x));
    let top = game.max_rank().is_some_and(|top| survivors.contains_rank(game, &top));
    below || top
}

/// One successor step for one player against the opponent's survivors.
///
/// Inside a class the criterion is monotone in `n` (ranks grow with `n`),
/// so each class keeps an up-set; its new lower bound is either the old one
/// or one past the index of the opponent's least rank.
fn successor_side(game: &RankedGame, own: &RankedSurvivors, opponent: &RankedSurvivors) -> RankedSurvivors {
    let m = game.modulus();
    let pivot = opponent
        .min_rank(game)
        .map(|min| min.coefficient(0) + 1)
        .unwrap_or(0);
    let lows = own
        .lows
        .iter()
        .enumerate()
        .map(|(r, lo)| {
            let lo = (*lo)?;
            let at = |n: u64| ranked_justifiable(game, n * m + r as u64, opponent);
            [lo, lo.max(pivot)].into_iter().find(|&n| at(n))
        })
        .collect();
    RankedSurvivors { lows }
}

fn successor(game: &RankedGame, state: &[RankedSurvivors; 2]) -> [RankedSurvivors; 2] {
    [
        successor_side(game, &state[0], &state[1]),
        successor_side(game, &state[1], &state[0]),
    ]
}

/// Intersection at the next limit after `from`. Classes raised by the first
/// successor step keep being raised by one at every finite step (the
/// opponent's least rank climbs with them), so they are empty in the
/// intersection; every other class is never touched inside the block.
fn next_limit(game: &RankedGame, from: &[RankedSurvivors; 2]) -> [RankedSurvivors; 2] {
    let first = successor(game, from);
    let mut out = from.clone();
    for i in 0..2 {
        for r in 0..game.coeffs.len() {
            if first[i].lows[r] != from[i].lows[r] {
                out[i].lows[r] = None;
            }
        }
    }
    out
}

/// Survivors of both players at every stage of the transfinite elimination.
#[derive(Debug, Clone)]
pub struct RankedEngine {
    pub game: RankedGame,
    /// States at the limit stages `ω·k` for `k = 0, 1, …` until the state
    /// stops changing.
    limits: Vec<[RankedSurvivors; 2]>,
}

impl RankedEngine {
    pub fn new(game: RankedGame) -> Self {
        let start = game.full();
        let mut limits = vec![[start.clone(), start]];
        loop {
            let last = limits.last().expect("nonempty");
            let next = next_limit(&game, last);
            if &next == last {
                break;
            }
            limits.push(next);
        }
        Self { game, limits }
    }

    /// `(X_1^γ, X_2^γ)` for any ordinal below `ω²`; later stages repeat the
    /// fixpoint.
    pub fn state_at(&self, gamma: &Ordinal) -> [RankedSurvivors; 2] {
        if gamma.cnf().len() > 2 {
            return self.limits.last().expect("nonempty").clone();
        }
        let k = gamma.coefficient(1) as usize;
        let Some(base) = self.limits.get(k) else {
            return self.limits.last().expect("nonempty").clone();
        };
        let mut state = base.clone();
        for _ in 0..gamma.coefficient(0) {
            let next = successor(&self.game, &state);
            if next == state {
                break;
            }
            state = next;
        }
        state
    }

    /// Least α with `X^{α+1} = X^α`. A nonempty state always loses its
    /// least-rank class members at the next step, so this is a limit stage.
    pub fn convergence(&self) -> Ordinal {
        let k = self
            .limits
            .iter()
            .position(|state| successor(&self.game, state) == *state)
            .expect("the last recorded limit is a fixpoint");
        Ordinal::omega_times(k as u64)
    }

    /// The γ with `x ∈ X^γ \ X^{γ+1}`, or `None` if `x` survives forever.
    pub fn elimination_ordinal(&self, player: Player, x: u64) -> Option<Ordinal> {
        let i = player.index();
        let k = self.limits.iter().position(|state| !state[i].contains(&self.game, x))?;
        // x is present at ω·(k-1) and gone at ω·k, so it leaves inside that block
        let mut state = self.limits[k - 1].clone();
        let mut c = 0u64;
        loop {
            let next = successor(&self.game, &state);
            if !next[i].contains(&self.game, x) {
                return Some(Ordinal::omega_times(k as u64 - 1).plus(c));
            }
            state = next;
            c += 1;
        }
    }

    /// Every stage label `ω·k + c` with `c <= horizon` up to the bound.
    pub fn checkpoints(&self) -> Vec<Ordinal> {
        let top = self.game.bound().coefficient(1);
        let mut out = Vec::new();
        for k in 0..top {
            for c in 0..=self.game.horizon {
                out.push(Ordinal::omega_times(k).plus(c));
            }
        }
        out.push(self.game.bound());
        out
    }
}

/// The closed form `{x : ψ(x) >= γ}` for `γ` up to the bound.
pub fn ranked_stages(game: &RankedGame, gamma: &Ordinal) -> Result<RankedSurvivors, RankedError> {
    let bound = game.bound();
    if *gamma > bound {
        return Err(RankedError::BeyondBound {
            gamma: gamma.clone(),
            bound,
        });
    }
    let (k, c) = (gamma.coefficient(1), gamma.coefficient(0));
    let lows = game
        .coeffs
        .iter()
        .map(|&a| match a.cmp(&k) {
            std::cmp::Ordering::Less => None,
            std::cmp::Ordering::Equal => Some(c),
            std::cmp::Ordering::Greater => Some(0),
        })
        .collect();
    Ok(RankedSurvivors { lows })
}

/// Parses
///
/// ```text
/// ranked-game lipman
/// modulus 2
/// coeffs 0 1
/// horizon 64
/// ```
pub fn parse_ranked_game(text: &str) -> Result<RankedGame, RankedError> {
    let mut name = None;
    let mut modulus: Option<(usize, u64)> = None;
    let mut coeffs: Option<(usize, Vec<u64>)> = None;
    let mut horizon = None;
    let mut last = 0;
    let syntax = |line: usize, message: String| RankedError::Syntax { line, message };
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let head = words.next().expect("non-empty");
        let rest: Vec<&str> = words.collect();
        let number = |w: &str| w.parse::<u64>().map_err(|_| syntax(line, format!("expected a natural number, found `{w}`")));
        let single = |what: &str| match rest.as_slice() {
            [w] => Ok(*w),
            _ => Err(syntax(line, format!("`{what}` takes exactly one value"))),
        };
        match head {
            "ranked-game" => name = Some(single("ranked-game")?.to_string()),
            "modulus" => modulus = Some((line, number(single("modulus")?)?)),
            "coeffs" => coeffs = Some((line, rest.iter().map(|w| number(w)).collect::<Result<_, _>>()?)),
            "horizon" => horizon = Some(number(single("horizon")?)?),
            other => return Err(syntax(line, format!("unexpected `{other}`"))),
        }
    }
    let name = name.ok_or_else(|| syntax(last, "missing `ranked-game` line".into()))?;
    let (coeff_line, coeffs) = coeffs.ok_or_else(|| syntax(last, "missing `coeffs` line".into()))?;
    if let Some((line, m)) = modulus {
        if m != coeffs.len() as u64 {
            return Err(syntax(line, format!("modulus {m} but {} coefficients on line {coeff_line}", coeffs.len())));
        }
    }
    let horizon = horizon.ok_or_else(|| syntax(last, "missing `horizon` line".into()))?;
    RankedGame::new(name, coeffs, horizon)
}

pub fn emit_ranked_game(game: &RankedGame) -> String {
    let coeffs: Vec<String> = game.coeffs.iter().map(u64::to_string).collect();
    format!(
        "ranked-game {}\nmodulus {}\ncoeffs {}\nhorizon {}\n",
        game.name,
        game.modulus(),
        coeffs.join(" "),
        game.horizon
    )
}
