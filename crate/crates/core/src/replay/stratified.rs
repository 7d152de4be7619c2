use std::collections::{BTreeMap, HashMap, VecDeque};

use rand::Rng;

use super::{ReplayError, ReplayMemory, ReplayStats, Transition, TransitionKey};

#[derive(Debug, Clone)]
struct KeyQueue {
    /// Slot indices holding this key, oldest at the front.
    slots: VecDeque<usize>,
    /// Position of the key in `key_registry`.
    registry_pos: usize,
}

/// Fixed-capacity replay memory with two-level sampling: a uniform draw over
/// the distinct `(state, action)` keys currently stored, then a uniform draw
/// over the slots holding that key.
///
/// Insertion overwrites slots in circular order, so the slot being evicted is
/// always the globally oldest transition and sits at the front of its key's
/// queue. Both `insert` and `sample` do O(1) expected work.
#[derive(Debug, Clone)]
pub struct StratifiedReplayMemory {
    storage: Vec<Option<Transition>>,
    key_index: HashMap<TransitionKey, KeyQueue>,
    key_registry: Vec<TransitionKey>,
    cursor: usize,
    size: usize,
}

impl StratifiedReplayMemory {
    pub fn new(capacity: usize) -> Result<Self, ReplayError> {
        if capacity == 0 {
            return Err(ReplayError::ZeroCapacity);
        }
        Ok(Self {
            storage: vec![None; capacity],
            key_index: HashMap::new(),
            key_registry: Vec::new(),
            cursor: 0,
            size: 0,
        })
    }

    /// Next slot to be written.
    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn num_keys(&self) -> usize {
        self.key_registry.len()
    }

    /// Dense list of stored keys; the first draw of `sample` is uniform over it.
    pub fn keys(&self) -> &[TransitionKey] {
        &self.key_registry
    }

    /// Slot queue of `key`, oldest first.
    pub fn queue(&self, key: &TransitionKey) -> Option<&VecDeque<usize>> {
        self.key_index.get(key).map(|q| &q.slots)
    }

    pub fn registry_position(&self, key: &TransitionKey) -> Option<usize> {
        self.key_index.get(key).map(|q| q.registry_pos)
    }

    pub fn multiplicity(&self, key: &TransitionKey) -> usize {
        self.key_index.get(key).map_or(0, |q| q.slots.len())
    }

    /// Raw slot array `D`.
    pub fn slots(&self) -> &[Option<Transition>] {
        &self.storage
    }

    fn evict(&mut self, slot: usize) {
        let old = self.storage[slot]
            .take()
            .expect("a full memory has every slot occupied");
        let key = old.key();
        let queue = self
            .key_index
            .get_mut(&key)
            .expect("every stored key has a queue");
        let popped = queue.slots.pop_front();
        debug_assert_eq!(popped, Some(slot), "evicted slot must be the oldest of its key");
        if queue.slots.is_empty() {
            let pos = queue.registry_pos;
            self.key_index.remove(&key);
            self.key_registry.swap_remove(pos);
            if let Some(moved) = self.key_registry.get(pos) {
                self.key_index
                    .get_mut(moved)
                    .expect("registered key has a queue")
                    .registry_pos = pos;
            }
        }
        self.size -= 1;
    }
}

impl ReplayMemory for StratifiedReplayMemory {
    fn insert(&mut self, t: Transition) {
        let slot = self.cursor;
        if self.size == self.storage.len() {
            self.evict(slot);
        }
        let key = t.key();
        let registry = &mut self.key_registry;
        self.key_index
            .entry(key)
            .or_insert_with(|| {
                registry.push(key);
                KeyQueue {
                    slots: VecDeque::new(),
                    registry_pos: registry.len() - 1,
                }
            })
            .slots
            .push_back(slot);
        self.storage[slot] = Some(t);
        self.size += 1;
        self.cursor = (self.cursor + 1) % self.storage.len();
    }

    fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<usize, ReplayError> {
        if self.size == 0 {
            return Err(ReplayError::Empty);
        }
        let key = &self.key_registry[rng.gen_range(0..self.key_registry.len())];
        let queue = &self.key_index[key].slots;
        Ok(queue[rng.gen_range(0..queue.len())])
    }

    fn get(&self, slot: usize) -> Option<&Transition> {
        self.storage.get(slot).and_then(Option::as_ref)
    }

    fn len(&self) -> usize {
        self.size
    }

    fn capacity(&self) -> usize {
        self.storage.len()
    }

    fn stats(&self) -> ReplayStats {
        let max_multiplicity = self
            .key_index
            .values()
            .map(|q| q.slots.len())
            .max()
            .unwrap_or(0);
        ReplayStats::from_counts(self.size, self.capacity(), self.num_keys(), max_multiplicity)
    }

    fn exact_distribution(&self) -> BTreeMap<usize, f64> {
        let num_keys = self.num_keys() as f64;
        self.key_index
            .values()
            .flat_map(|q| {
                let p = 1.0 / (num_keys * q.slots.len() as f64);
                q.slots.iter().map(move |&slot| (slot, p))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn t(s: u32, a: u32, r: f64, s2: u32) -> Transition {
        Transition::new(s, a, r, s2, false)
    }

    fn key(s: u32, a: u32) -> TransitionKey {
        TransitionKey::new(s, a)
    }

    fn example_memory() -> StratifiedReplayMemory {
        let mut m = StratifiedReplayMemory::new(4).unwrap();
        m.insert(t(0, 0, 1.0, 1));
        m.insert(t(0, 0, 0.0, 2));
        m.insert(t(1, 1, 5.0, 0));
        m
    }

    #[test]
    fn insert_builds_per_key_queues() {
        let m = example_memory();
        assert_eq!(m.queue(&key(0, 0)), Some(&VecDeque::from([0, 1])));
        assert_eq!(m.queue(&key(1, 1)), Some(&VecDeque::from([2])));
        assert_eq!(m.num_keys(), 2);
        assert_eq!(m.cursor(), 3);
        assert_eq!(m.len(), 3);
    }

    #[test]
    fn wraparound_reuses_front_slot() {
        let mut m = StratifiedReplayMemory::new(2).unwrap();
        m.insert(t(0, 0, 0.0, 0)); // A
        m.insert(t(1, 0, 0.0, 0)); // B
        m.insert(t(0, 0, 1.0, 1)); // A'
        assert_eq!(m.queue(&key(0, 0)), Some(&VecDeque::from([0])));
        assert_eq!(m.queue(&key(1, 0)), Some(&VecDeque::from([1])));
        assert_eq!(m.get(0).unwrap().reward, 1.0);
        assert_eq!(m.cursor(), 1);
        assert_eq!(m.len(), 2);
    }

    #[test]
    fn eviction_deletes_emptied_key() {
        let mut m = StratifiedReplayMemory::new(2).unwrap();
        m.insert(t(0, 0, 0.0, 0)); // A
        m.insert(t(1, 0, 0.0, 0)); // B
        m.insert(t(2, 0, 0.0, 0)); // C
        assert!(m.queue(&key(0, 0)).is_none());
        let mut keys = m.keys().to_vec();
        keys.sort();
        assert_eq!(keys, vec![key(1, 0), key(2, 0)]);
        for k in m.keys() {
            assert_eq!(m.keys()[m.registry_position(k).unwrap()], *k);
        }
    }

    #[test]
    fn exact_distribution_of_example() {
        let d = example_memory().exact_distribution();
        assert_eq!(d, BTreeMap::from([(0, 0.25), (1, 0.25), (2, 0.5)]));
    }

    #[test]
    fn distinct_keys_give_uniform_law() {
        let mut m = StratifiedReplayMemory::new(8).unwrap();
        for s in 0..5 {
            m.insert(t(s, 0, 0.0, 0));
        }
        for p in m.exact_distribution().values() {
            assert!((p - 0.2).abs() < 1e-15);
        }
    }

    #[test]
    fn single_transition_is_always_returned() {
        let mut m = StratifiedReplayMemory::new(3).unwrap();
        let only = t(4, 2, -1.0, 3);
        m.insert(only);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(m.sample(&mut rng).unwrap(), only);
        }
        assert_eq!(m.sample_batch(&mut rng, 32).unwrap(), vec![only; 32]);
    }

    #[test]
    fn empty_sample_is_an_error() {
        let m = StratifiedReplayMemory::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(m.sample(&mut rng), Err(ReplayError::Empty));
        assert_eq!(m.sample_batch(&mut rng, 0), Ok(vec![]));
        assert_eq!(m.sample_batch(&mut rng, 2), Err(ReplayError::Empty));
    }

    #[test]
    fn zero_capacity_is_rejected() {
        assert_eq!(
            StratifiedReplayMemory::new(0).unwrap_err(),
            ReplayError::ZeroCapacity
        );
    }

    #[test]
    fn sample_consumes_exactly_two_draws() {
        let m = example_memory();
        let mut a = ChaCha8Rng::seed_from_u64(9);
        let mut b = a.clone();
        m.sample(&mut a).unwrap();
        let _: usize = b.gen_range(0..2);
        let _: usize = b.gen_range(0..2);
        assert_eq!(a.gen::<u64>(), b.gen::<u64>());
    }

    #[test]
    fn sample_batch_of_one_matches_sample() {
        let m = example_memory();
        let mut a = ChaCha8Rng::seed_from_u64(3);
        let mut b = a.clone();
        assert_eq!(m.sample_batch(&mut a, 1).unwrap(), vec![m.sample(&mut b).unwrap()]);
    }

    #[test]
    fn stats_counts() {
        let empty = StratifiedReplayMemory::new(5).unwrap();
        assert_eq!(
            empty.stats(),
            ReplayStats {
                size: 0,
                capacity: 5,
                num_keys: 0,
                max_multiplicity: 0,
                redundancy_fraction: 0.0
            }
        );
        let s = example_memory().stats();
        assert_eq!((s.size, s.num_keys, s.max_multiplicity), (3, 2, 2));
        assert!((s.redundancy_fraction - 1.0 / 3.0).abs() < 1e-15);

        let mut copies = StratifiedReplayMemory::new(10).unwrap();
        for _ in 0..7 {
            copies.insert(t(1, 1, 0.0, 1));
        }
        let s = copies.stats();
        assert_eq!(s.max_multiplicity, 7);
        assert!((s.redundancy_fraction - 6.0 / 7.0).abs() < 1e-15);
    }
}
