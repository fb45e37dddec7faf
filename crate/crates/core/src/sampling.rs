//! Seeded random and quasi-random sampling, plus an order-preserving parallel map.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Radical inverse of `index` in the given base.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while index > 0 {
        out += f * (index % base) as f64;
        index /= base;
        f *= inv;
    }
    out
}

/// `count` points of the 2-D Halton sequence (bases 2 and 3) in `[0, 1)²`,
/// shifted modulo 1 by a seeded random offset.
pub fn halton_2d(count: usize, seed: u64) -> Vec<[f64; 2]> {
    let mut rng = seeded(seed);
    let shift = [rng.random::<f64>(), rng.random::<f64>()];
    (1..=count as u64)
        .map(|i| {
            let u = (radical_inverse(i, 2) + shift[0]).fract();
            let v = (radical_inverse(i, 3) + shift[1]).fract();
            [u, v]
        })
        .collect()
}

/// `items.map(f)` with results in input order, in parallel when the
/// `parallel` feature is enabled.
pub fn ordered_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_inverse_values() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(2, 2), 0.25);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert!((radical_inverse(1, 3) - 1.0 / 3.0).abs() < 1e-15);
        assert!((radical_inverse(5, 3) - (2.0 / 3.0 + 1.0 / 9.0)).abs() < 1e-15);
    }

    #[test]
    fn halton_is_deterministic_and_in_unit_square() {
        let a = halton_2d(200, 9);
        assert_eq!(a, halton_2d(200, 9));
        assert_ne!(a, halton_2d(200, 10));
        assert!(a.iter().all(|p| p.iter().all(|v| (0.0..1.0).contains(v))));
        // each quarter of [0,1) in the first coordinate gets about a quarter of the points
        for q in 0..4 {
            let cnt = a.iter().filter(|p| (p[0] * 4.0).floor() as usize == q).count();
            assert!((45..=55).contains(&cnt));
        }
    }

    #[test]
    fn ordered_map_preserves_order() {
        let v: Vec<u64> = (0..1000).collect();
        let out = ordered_map(&v, |x| x * x);
        assert!(out.iter().enumerate().all(|(i, y)| *y == (i * i) as u64));
    }
}
