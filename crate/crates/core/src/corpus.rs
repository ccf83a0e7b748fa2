//! Deterministic corpora of small games for the verification sweeps.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::Rational;
use crate::game::Game;

const ROW_IDS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];
const COLUMN_IDS: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

/// Largest number of strategies per player in generated games.
pub const MAX_SIZE: usize = ROW_IDS.len();

fn build(name: String, rows: usize, cols: usize, p1: &[i64], p2: &[i64]) -> Game {
    let matrix = |flat: &[i64]| -> Vec<Vec<Rational>> {
        flat.chunks(cols)
            .map(|row| row.iter().map(|&v| Rational::from_integer(v.into())).collect())
            .collect()
    };
    let ids = |src: &[&str], n: usize| src[..n].iter().map(|s| s.to_string()).collect();
    Game::new(name, ids(&ROW_IDS, rows), ids(&COLUMN_IDS, cols), matrix(p1), matrix(p2))
        .expect("generated games are well formed")
}

/// Every `size x size` matrix with entries from `values`, in lexicographic
/// order of its row-major entries.
fn all_matrices(size: usize, values: &[i64]) -> Vec<Vec<i64>> {
    let cells = size * size;
    let mut out = vec![Vec::with_capacity(cells)];
    for _ in 0..cells {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out
}

/// Number of games `exhaustive` produces.
pub fn exhaustive_count(size: usize, values: &[i64]) -> u128 {
    (values.len() as u128).pow(2 * (size * size) as u32)
}

/// All pairs of per-player `size x size` matrices over `values`.
pub fn exhaustive(size: usize, values: &[i64]) -> Vec<Game> {
    assert!(size <= MAX_SIZE, "at most {MAX_SIZE} strategies per player");
    let matrices = all_matrices(size, values);
    let mut games = Vec::with_capacity(matrices.len() * matrices.len());
    for (i, p1) in matrices.iter().enumerate() {
        for (j, p2) in matrices.iter().enumerate() {
            let name = format!("g{size}x{size}-{i:04}-{j:04}");
            games.push(build(name, size, size, p1, p2));
        }
    }
    games
}

/// `count` games of `rows x cols` with entries drawn uniformly from
/// `values`, reproducible from `seed`.
pub fn sampled(rows: usize, cols: usize, values: &[i64], count: usize, seed: u64) -> Vec<Game> {
    assert!(rows <= MAX_SIZE && cols <= MAX_SIZE, "at most {MAX_SIZE} strategies per player");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let mut draw = || -> Vec<i64> { (0..rows * cols).map(|_| *values.choose(&mut rng).expect("values")).collect() };
            let (p1, p2) = (draw(), draw());
            build(format!("s{rows}x{cols}-{seed}-{k:05}"), rows, cols, &p1, &p2)
        })
        .collect()
}

/// Games of mixed shape (2 or 3 strategies per side) with payoffs in 0..=4,
/// used for the justification game checks.
pub fn mixed_shapes(count: usize, seed: u64) -> Vec<Game> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let rows = rng.gen_range(2..=3);
            let cols = rng.gen_range(2..=3);
            let mut draw = || -> Vec<i64> { (0..rows * cols).map(|_| rng.gen_range(0..=4)).collect() };
            let (p1, p2) = (draw(), draw());
            build(format!("m{rows}x{cols}-{seed}-{k:05}"), rows, cols, &p1, &p2)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Player;

    #[test]
    fn exhaustive_two_by_two() {
        let games = exhaustive(2, &[0, 1, 2]);
        assert_eq!(games.len(), 6561);
        assert_eq!(exhaustive_count(2, &[0, 1, 2]), 6561);
        let names: std::collections::BTreeSet<&str> = games.iter().map(|g| g.name()).collect();
        assert_eq!(names.len(), 6561);
        let last = games.last().unwrap();
        assert_eq!(last.payoff(Player::Two, 1, 0), &Rational::from_integer(2.into()));
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = sampled(3, 3, &[0, 1, 2], 10, 5);
        let b = sampled(3, 3, &[0, 1, 2], 10, 5);
        assert_eq!(a, b);
        assert_ne!(a, sampled(3, 3, &[0, 1, 2], 10, 6));
        assert_eq!(mixed_shapes(4, 1), mixed_shapes(4, 1));
    }
}
