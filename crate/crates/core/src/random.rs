//! Seeded instance generators shared by the self-check, the benchmark and the test suites.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::geometry::{CoordinateMap, Point, Rect, Axis};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn span<R: Rng>(rng: &mut R, grid: i64) -> (i64, i64) {
    let a = rng.gen_range(0..grid);
    let mut b = rng.gen_range(0..grid);
    while b == a {
        b = rng.gen_range(0..grid);
    }
    (a.min(b), a.max(b))
}

/// `n` rectangles with ids `0..n` and corners on the integer grid `[0, grid)`.
///
/// Coordinates collide often on a small grid; on top of that roughly one rectangle in six
/// reuses an earlier rectangle's x- or y-extent, and one in twenty repeats an extent entirely.
pub fn random_rects<R: Rng>(rng: &mut R, n: usize, grid: i64) -> Vec<Rect<i64>> {
    assert!(grid >= 2, "grid needs at least two coordinates");
    let mut out: Vec<Rect<i64>> = Vec::with_capacity(n);
    for id in 0..n as u64 {
        let roll: f64 = rng.gen();
        let (x, y) = match out.choose(rng) {
            Some(prev) if roll < 0.05 => ((prev.min_x, prev.max_x), (prev.min_y, prev.max_y)),
            Some(prev) if roll < 0.13 => ((prev.min_x, prev.max_x), span(rng, grid)),
            Some(prev) if roll < 0.21 => (span(rng, grid), (prev.min_y, prev.max_y)),
            _ => (span(rng, grid), span(rng, grid)),
        };
        out.push(Rect { id, min_x: x.0, min_y: y.0, max_x: x.1, max_y: y.1 });
    }
    out
}

/// A rectangle set of random size in `0..=max_n`.
pub fn random_instance<R: Rng>(rng: &mut R, max_n: usize, grid: i64) -> Vec<Rect<i64>> {
    let n = rng.gen_range(0..=max_n);
    random_rects(rng, n, grid)
}

/// A probe point: a third sit exactly on registered endpoints, a few land off the grid, the rest
/// are uniform over a slightly enlarged grid.
pub fn random_point<R: Rng>(rng: &mut R, map: &CoordinateMap<i64>, grid: i64) -> Point<i64> {
    let roll: f64 = rng.gen();
    let pick = |axis: Axis, rng: &mut R| -> i64 {
        match map.endpoints(axis).choose(rng) {
            Some(&e) if roll < 0.35 => e,
            _ if roll < 0.45 => {
                if rng.gen() {
                    rng.gen_range(-3..0)
                } else {
                    rng.gen_range(grid..grid + 3)
                }
            }
            _ => rng.gen_range(-1..grid + 1),
        }
    };
    let x = pick(Axis::X, rng);
    let y = pick(Axis::Y, rng);
    Point::new(x, y)
}

/// Rectangles scattered over a large square with sides up to a sixteenth of it, for timing runs.
pub fn scattered_rects<R: Rng>(rng: &mut R, n: usize, side: i64) -> Vec<Rect<i64>> {
    let max_len = (side / 16).max(1);
    (0..n as u64)
        .map(|id| {
            let w = rng.gen_range(1..=max_len);
            let h = rng.gen_range(1..=max_len);
            let x = rng.gen_range(0..side - w);
            let y = rng.gen_range(0..side - h);
            Rect { id, min_x: x, min_y: y, max_x: x + w, max_y: y + h }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rects_are_valid_and_seeded() {
        let a = random_rects(&mut rng(5), 200, 12);
        let b = random_rects(&mut rng(5), 200, 12);
        assert_eq!(a, b);
        for r in &a {
            r.validate().unwrap();
            assert!(r.min_x >= 0 && r.max_x < 12 && r.min_y >= 0 && r.max_y < 12);
        }
        let scattered = scattered_rects(&mut rng(1), 100, 1 << 20);
        assert!(scattered.iter().all(|r| r.validate().is_ok() && r.max_x <= 1 << 20));
    }
}
