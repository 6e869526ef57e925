//! Nearest-rank quantiles.

/// Zero-based index of the nearest-rank `p`-quantile of `n` sorted values,
/// rank `⌈p·n⌉` clamped to `[1, n]`.
pub fn nearest_rank_index(p: f64, n: usize) -> usize {
    debug_assert!(n > 0);
    let rank = crate::math::ceil(p * n as f64) as usize;
    rank.clamp(1, n) - 1
}

/// Quantiles at ascending `levels`, reordering `values` in place.
///
/// Uses successive selection from the top level down, so the cost is linear
/// in `values.len()` rather than a full sort. NaN sorts above +∞.
pub fn quantiles_in_place<const K: usize>(values: &mut [f64], levels: &[f64; K]) -> [f64; K] {
    let n = values.len();
    let mut out = [f64::NAN; K];
    if n == 0 {
        return out;
    }
    let mut end = n;
    for k in (0..K).rev() {
        let idx = nearest_rank_index(levels[k], n);
        if idx >= end {
            // same rank as the level above; already in place
            out[k] = values[idx];
            continue;
        }
        let (_, nth, _) = values[..end].select_nth_unstable_by(idx, f64::total_cmp);
        out[k] = *nth;
        end = idx;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn nearest_rank_examples() {
        assert_eq!(nearest_rank_index(0.05, 100), 4);
        assert_eq!(nearest_rank_index(0.5, 100), 49);
        assert_eq!(nearest_rank_index(0.5, 101), 50);
        assert_eq!(nearest_rank_index(0.95, 20), 18);
        assert_eq!(nearest_rank_index(0.05, 1), 0);
        assert_eq!(nearest_rank_index(1.0, 7), 6);
    }

    #[test]
    fn selection_matches_sorting() {
        let mut v: Vec<f64> = (0..1000).map(|i| ((i * 7919) % 1000) as f64).collect();
        v[3] = f64::NEG_INFINITY;
        let mut sorted = v.clone();
        sorted.sort_by(f64::total_cmp);
        let levels = [0.05, 0.25, 0.5, 0.75, 0.95];
        let q = quantiles_in_place(&mut v, &levels);
        for (k, p) in levels.iter().enumerate() {
            assert_eq!(q[k], sorted[nearest_rank_index(*p, 1000)]);
        }
    }

    #[test]
    fn tiny_sets() {
        let levels = [0.05, 0.25, 0.5, 0.75, 0.95];
        assert_eq!(quantiles_in_place(&mut [3.0], &levels), [3.0; 5]);
        assert_eq!(quantiles_in_place(&mut [2.0, 1.0], &levels), [1.0, 1.0, 1.0, 2.0, 2.0]);
    }
}
