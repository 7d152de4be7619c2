use std::collections::BTreeMap;

use rand::Rng;

use super::{ReplayError, ReplayMemory, ReplayStats, Transition};

/// Ring buffer of transitions sampled uniformly over occupied slots. Once
/// full, the oldest transition is overwritten first.
#[derive(Debug, Clone)]
pub struct UniformReplayMemory {
    storage: Vec<Transition>,
    capacity: usize,
    cursor: usize,
}

impl UniformReplayMemory {
    pub fn new(capacity: usize) -> Result<Self, ReplayError> {
        if capacity == 0 {
            return Err(ReplayError::ZeroCapacity);
        }
        Ok(Self {
            storage: Vec::with_capacity(capacity),
            capacity,
            cursor: 0,
        })
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }
}

impl ReplayMemory for UniformReplayMemory {
    fn insert(&mut self, t: Transition) {
        if self.storage.len() < self.capacity {
            self.storage.push(t);
        } else {
            self.storage[self.cursor] = t;
        }
        self.cursor = (self.cursor + 1) % self.capacity;
    }

    fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<usize, ReplayError> {
        if self.storage.is_empty() {
            return Err(ReplayError::Empty);
        }
        Ok(rng.gen_range(0..self.storage.len()))
    }

    fn get(&self, slot: usize) -> Option<&Transition> {
        self.storage.get(slot)
    }

    fn len(&self) -> usize {
        self.storage.len()
    }

    fn capacity(&self) -> usize {
        self.capacity
    }

    /// Counting keys scans the buffer; this is O(size).
    fn stats(&self) -> ReplayStats {
        let mut counts = std::collections::HashMap::new();
        for t in &self.storage {
            *counts.entry(t.key()).or_insert(0usize) += 1;
        }
        let num_keys = counts.len();
        let max_multiplicity = counts.values().copied().max().unwrap_or(0);
        ReplayStats::from_counts(self.storage.len(), self.capacity, num_keys, max_multiplicity)
    }

    fn exact_distribution(&self) -> BTreeMap<usize, f64> {
        let p = 1.0 / self.storage.len() as f64;
        (0..self.storage.len()).map(|slot| (slot, p)).collect()
    }
}
