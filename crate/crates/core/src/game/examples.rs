//! Small named games used throughout the tests, the CLI and the corpus.

use super::model::Game;

pub fn prisoners_dilemma() -> Game {
    Game::from_integers("pd", &["C", "D"], &["C", "D"], &[&[2, 0], &[3, 1]], &[&[2, 3], &[0, 1]])
        .expect("valid game")
}

pub fn matching_pennies() -> Game {
    Game::from_integers("pennies", &["H", "T"], &["H", "T"], &[&[1, -1], &[-1, 1]], &[&[-1, 1], &[1, -1]])
        .expect("valid game")
}

/// Elimination takes two rounds: y goes first, then b.
pub fn cascade() -> Game {
    Game::from_integers("cascade", &["a", "b"], &["x", "y"], &[&[1, 0], &[0, 2]], &[&[1, 0], &[1, 0]])
        .expect("valid game")
}

/// Row c is dominated by the even mixture of a and b but by neither alone.
pub fn mix_dom() -> Game {
    Game::from_integers(
        "mixdom",
        &["a", "b", "c"],
        &["x", "y"],
        &[&[3, 0], &[0, 3], &[1, 1]],
        &[&[1, 0], &[0, 1], &[1, 1]],
    )
    .expect("valid game")
}

pub fn all() -> Vec<Game> {
    vec![prisoners_dilemma(), matching_pennies(), cascade(), mix_dom()]
}
