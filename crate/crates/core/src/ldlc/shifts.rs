//! Cyclic shift offsets placing each sequence value in H.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::RngCore;

use crate::error::{param, Result};

/// `d` distinct offsets `p_j` in `[1, n]`; value `h_j` of column `i` lands in
/// row `(i + p_j - 1) mod n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShiftSet {
    shifts: Vec<usize>,
}

const SIDON_RESTARTS: usize = 64;

impl ShiftSet {
    pub fn new(shifts: Vec<usize>, n: usize) -> Result<Self> {
        if shifts.is_empty() {
            return Err(param("shift set is empty"));
        }
        if let Some(&p) = shifts.iter().find(|&&p| p == 0 || p > n) {
            return Err(param(format!("shift {p} outside [1, {n}]")));
        }
        let distinct: HashSet<_> = shifts.iter().collect();
        if distinct.len() != shifts.len() {
            return Err(param("duplicate shifts"));
        }
        Ok(Self { shifts })
    }

    pub fn shifts(&self) -> &[usize] {
        &self.shifts
    }

    pub fn d(&self) -> usize {
        self.shifts.len()
    }

    /// True when all ordered differences `p_a - p_b` (a != b) are distinct
    /// modulo `n`, which rules out 4-cycles in the Tanner graph of H.
    pub fn is_four_cycle_free(&self, n: usize) -> bool {
        let mut seen = HashSet::new();
        for (a, &pa) in self.shifts.iter().enumerate() {
            for (b, &pb) in self.shifts.iter().enumerate() {
                if a != b && !seen.insert((pa + n - pb) % n) {
                    return false;
                }
            }
        }
        true
    }

    /// Draws `d` distinct shifts, preferring a 4-cycle-free set found by
    /// randomized greedy search and falling back to plain distinct shifts
    /// when none is found (always the case for small `n`).
    pub fn sample(d: usize, n: usize, rng: &mut dyn RngCore) -> Result<Self> {
        if d == 0 || d > n {
            return Err(param(format!(
                "cannot draw {d} distinct shifts from [1, {n}]"
            )));
        }
        let mut candidates: Vec<usize> = (1..=n).collect();
        if d * (d - 1) < n {
            for _ in 0..SIDON_RESTARTS {
                candidates.shuffle(rng);
                if let Some(set) = greedy_sidon(&candidates, d, n) {
                    return Self::new(set, n);
                }
            }
        }
        candidates.shuffle(rng);
        Self::new(candidates[..d].to_vec(), n)
    }
}

fn greedy_sidon(order: &[usize], d: usize, n: usize) -> Option<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::with_capacity(d);
    let mut diffs: HashSet<usize> = HashSet::new();
    for &x in order {
        let mut fresh = Vec::with_capacity(2 * chosen.len());
        let ok = chosen.iter().all(|&p| {
            let a = (x + n - p) % n;
            let b = (p + n - x) % n;
            let good = a != 0
                && a != b
                && !diffs.contains(&a)
                && !diffs.contains(&b)
                && !fresh.contains(&a)
                && !fresh.contains(&b);
            fresh.push(a);
            fresh.push(b);
            good
        });
        if ok {
            diffs.extend(fresh);
            chosen.push(x);
            if chosen.len() == d {
                return Some(chosen);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validation() {
        assert!(ShiftSet::new(vec![1, 2, 2], 5).is_err());
        assert!(ShiftSet::new(vec![0, 2], 5).is_err());
        assert!(ShiftSet::new(vec![6], 5).is_err());
        assert!(ShiftSet::new(vec![5, 1], 5).is_ok());
    }

    #[test]
    fn sampled_sets_prefer_no_four_cycles() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let s = ShiftSet::sample(7, 100, &mut rng).unwrap();
            assert_eq!(s.d(), 7);
            assert!(s.is_four_cycle_free(100));
        }
        let small = ShiftSet::sample(7, 16, &mut rng).unwrap();
        assert_eq!(small.d(), 7);
        assert!(ShiftSet::sample(8, 7, &mut rng).is_err());
    }

    #[test]
    fn four_cycle_detection() {
        assert!(!ShiftSet::new(vec![1, 2, 3], 10)
            .unwrap()
            .is_four_cycle_free(10));
        assert!(ShiftSet::new(vec![1, 2, 4], 10)
            .unwrap()
            .is_four_cycle_free(10));
        // 2 * (3 - 1) = 4 = n, so p_a - p_b = p_b - p_a mod 4.
        assert!(!ShiftSet::new(vec![1, 3], 4).unwrap().is_four_cycle_free(4));
    }
}
