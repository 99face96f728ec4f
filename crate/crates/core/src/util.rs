//! Small numeric and hashing helpers shared across modules.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Deterministic RNG from a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derive an independent stream for a sub-task (tree index, fold index, ...)
/// without correlating it with the parent stream.
pub fn rng_for_subtask(seed: u64, tag: &str, index: u64) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(tag.as_bytes());
    h.update(index.to_le_bytes());
    let digest = h.finalize();
    let mut sub = [0u8; 8];
    sub.copy_from_slice(&digest[..8]);
    ChaCha8Rng::seed_from_u64(u64::from_le_bytes(sub))
}

/// Hex-encoded SHA-256 of arbitrary bytes.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Squared Euclidean distance.
pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    sq_dist(a, b).sqrt()
}

/// Indices of the `k` nearest rows to `query` (excluding any index in
/// `exclude`), ordered by distance and then by row index so distance ties are
/// deterministic.
pub fn k_nearest(rows: &[Vec<f64>], query: &[f64], k: usize, exclude: Option<usize>) -> Vec<usize> {
    let mut order: Vec<(f64, usize)> = rows
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != exclude)
        .map(|(i, r)| (sq_dist(r, query), i))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    order.truncate(k);
    order.into_iter().map(|(_, i)| i).collect()
}

/// Median of a slice (averages the two middle elements for even lengths).
pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of empty slice");
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Empirical quantile with linear interpolation, `q` in [0, 1].
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Population standard deviation.
pub fn std_pop(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let m = mean(values);
    (values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64).sqrt()
}

/// Serialize any `Serialize` value to pretty JSON with lexicographically
/// sorted keys (reports are diffable and hash-stable).
pub fn to_sorted_pretty_json<T: serde::Serialize>(value: &T) -> serde_json::Result<String> {
    // serde_json::Value objects are BTreeMap-backed, so a round trip through
    // Value sorts the keys.
    let v = serde_json::to_value(value)?;
    serde_json::to_string_pretty(&v)
}

/// Hash of the canonical (key-sorted, compact) JSON form of a value.
pub fn json_hash<T: serde::Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("value serializes");
    sha256_hex(serde_json::to_string(&v).expect("json encodes").as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_nearest_breaks_distance_ties_by_index() {
        let rows = vec![vec![1.0], vec![-1.0], vec![1.0]];
        let nn = k_nearest(&rows, &[0.0], 2, None);
        assert_eq!(nn, vec![0, 1]);
    }

    #[test]
    fn median_even_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 3.0, 2.0]), 2.5);
    }

    #[test]
    fn sorted_json_orders_keys() {
        #[derive(serde::Serialize)]
        struct S {
            zeta: u32,
            alpha: u32,
        }
        let s = to_sorted_pretty_json(&S { zeta: 1, alpha: 2 }).unwrap();
        assert!(s.find("alpha").unwrap() < s.find("zeta").unwrap());
    }

    #[test]
    fn subtask_rngs_differ() {
        use rand::RngCore;
        let a = rng_for_subtask(7, "tree", 0).next_u64();
        let b = rng_for_subtask(7, "tree", 1).next_u64();
        let c = rng_for_subtask(7, "fold", 0).next_u64();
        assert_ne!(a, b);
        assert_ne!(a, c);
    }
}
