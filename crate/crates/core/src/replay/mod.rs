//! Replay memories: the uniform ring-buffer baseline and the stratified memory
//! that samples a `(state, action)` key first and one of its stored
//! transitions second.

mod stratified;
mod uniform;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;
use thiserror::Error;

pub use stratified::StratifiedReplayMemory;
pub use uniform::UniformReplayMemory;

/// One environment interaction `(s, a, r, s')` plus the termination flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub state: u32,
    pub action: u32,
    pub reward: f64,
    pub next_state: u32,
    /// Set only when `next_state` ended the episode through the dynamics,
    /// never on step-limit truncation.
    pub terminal: bool,
}

impl Transition {
    pub fn new(state: u32, action: u32, reward: f64, next_state: u32, terminal: bool) -> Self {
        Self {
            state,
            action,
            reward,
            next_state,
            terminal,
        }
    }

    pub fn key(&self) -> TransitionKey {
        TransitionKey::new(self.state, self.action)
    }
}

/// Canonical byte encoding of a `(state, action)` pair: little-endian state
/// followed by little-endian action.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransitionKey([u8; 8]);

impl TransitionKey {
    pub fn new(state: u32, action: u32) -> Self {
        let mut bytes = [0u8; 8];
        bytes[..4].copy_from_slice(&state.to_le_bytes());
        bytes[4..].copy_from_slice(&action.to_le_bytes());
        Self(bytes)
    }

    pub fn from_bytes(bytes: [u8; 8]) -> Self {
        Self(bytes)
    }

    pub fn as_bytes(&self) -> &[u8; 8] {
        &self.0
    }

    pub fn state(&self) -> u32 {
        u32::from_le_bytes(self.0[..4].try_into().unwrap())
    }

    pub fn action(&self) -> u32 {
        u32::from_le_bytes(self.0[4..].try_into().unwrap())
    }
}

impl fmt::Debug for TransitionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.state(), self.action())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("cannot sample from an empty replay memory")]
    Empty,
    #[error("replay capacity must be at least 1")]
    ZeroCapacity,
}

/// Occupancy statistics of a replay memory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplayStats {
    pub size: usize,
    pub capacity: usize,
    pub num_keys: usize,
    pub max_multiplicity: usize,
    /// `(size - num_keys) / size`, or 0 for an empty memory.
    pub redundancy_fraction: f64,
}

impl ReplayStats {
    fn from_counts(size: usize, capacity: usize, num_keys: usize, max_multiplicity: usize) -> Self {
        let redundancy_fraction = if size == 0 {
            0.0
        } else {
            (size - num_keys) as f64 / size as f64
        };
        Self {
            size,
            capacity,
            num_keys,
            max_multiplicity,
            redundancy_fraction,
        }
    }
}

/// Common interface of the replay memories consumed by the agents.
pub trait ReplayMemory {
    fn insert(&mut self, t: Transition);

    /// Slot index of one draw under the memory's sampling law.
    fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<usize, ReplayError>;

    /// Transition stored at `slot`, if occupied.
    fn get(&self, slot: usize) -> Option<&Transition>;

    fn len(&self) -> usize;

    fn capacity(&self) -> usize;

    fn stats(&self) -> ReplayStats;

    /// Exact probability of each occupied slot being returned by one draw.
    fn exact_distribution(&self) -> BTreeMap<usize, f64>;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Transition, ReplayError> {
        let slot = self.sample_index(rng)?;
        Ok(*self.get(slot).expect("sampled slot is occupied"))
    }

    /// `m` independent draws with replacement. `m = 0` yields an empty batch
    /// even on an empty memory.
    fn sample_batch<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        m: usize,
    ) -> Result<Vec<Transition>, ReplayError> {
        if m == 0 {
            return Ok(Vec::new());
        }
        (0..m).map(|_| self.sample(rng)).collect()
    }
}

/// Which sampling law a run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SamplerKind {
    Uniform,
    Stratified,
}

impl SamplerKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SamplerKind::Uniform => "uniform",
            SamplerKind::Stratified => "stratified",
        }
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SamplerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(SamplerKind::Uniform),
            "stratified" => Ok(SamplerKind::Stratified),
            other => Err(format!("unknown sampler `{other}` (expected uniform|stratified)")),
        }
    }
}

/// Either memory behind one type, chosen at run time.
#[derive(Debug, Clone)]
pub enum AnyReplayMemory {
    Uniform(UniformReplayMemory),
    Stratified(StratifiedReplayMemory),
}

impl AnyReplayMemory {
    pub fn new(kind: SamplerKind, capacity: usize) -> Result<Self, ReplayError> {
        Ok(match kind {
            SamplerKind::Uniform => AnyReplayMemory::Uniform(UniformReplayMemory::new(capacity)?),
            SamplerKind::Stratified => {
                AnyReplayMemory::Stratified(StratifiedReplayMemory::new(capacity)?)
            }
        })
    }

    pub fn kind(&self) -> SamplerKind {
        match self {
            AnyReplayMemory::Uniform(_) => SamplerKind::Uniform,
            AnyReplayMemory::Stratified(_) => SamplerKind::Stratified,
        }
    }
}

impl ReplayMemory for AnyReplayMemory {
    fn insert(&mut self, t: Transition) {
        match self {
            AnyReplayMemory::Uniform(m) => m.insert(t),
            AnyReplayMemory::Stratified(m) => m.insert(t),
        }
    }

    fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<usize, ReplayError> {
        match self {
            AnyReplayMemory::Uniform(m) => m.sample_index(rng),
            AnyReplayMemory::Stratified(m) => m.sample_index(rng),
        }
    }

    fn get(&self, slot: usize) -> Option<&Transition> {
        match self {
            AnyReplayMemory::Uniform(m) => m.get(slot),
            AnyReplayMemory::Stratified(m) => m.get(slot),
        }
    }

    fn len(&self) -> usize {
        match self {
            AnyReplayMemory::Uniform(m) => m.len(),
            AnyReplayMemory::Stratified(m) => m.len(),
        }
    }

    fn capacity(&self) -> usize {
        match self {
            AnyReplayMemory::Uniform(m) => m.capacity(),
            AnyReplayMemory::Stratified(m) => m.capacity(),
        }
    }

    fn stats(&self) -> ReplayStats {
        match self {
            AnyReplayMemory::Uniform(m) => m.stats(),
            AnyReplayMemory::Stratified(m) => m.stats(),
        }
    }

    fn exact_distribution(&self) -> BTreeMap<usize, f64> {
        match self {
            AnyReplayMemory::Uniform(m) => m.exact_distribution(),
            AnyReplayMemory::Stratified(m) => m.exact_distribution(),
        }
    }
}

/// Relative frequency of each slot over `draws` samples.
pub fn empirical_slot_frequencies<M, R>(
    memory: &M,
    rng: &mut R,
    draws: usize,
) -> Result<BTreeMap<usize, f64>, ReplayError>
where
    M: ReplayMemory,
    R: Rng + ?Sized,
{
    if memory.is_empty() {
        return Err(ReplayError::Empty);
    }
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for _ in 0..draws {
        *counts.entry(memory.sample_index(rng)?).or_default() += 1;
    }
    Ok(counts
        .into_iter()
        .map(|(slot, c)| (slot, c as f64 / draws as f64))
        .collect())
}

/// Total-variation distance between two sparse distributions.
pub fn total_variation<K: Ord + Copy>(p: &BTreeMap<K, f64>, q: &BTreeMap<K, f64>) -> f64 {
    let keys: BTreeSet<K> = p.keys().chain(q.keys()).copied().collect();
    0.5 * keys
        .into_iter()
        .map(|k| (p.get(&k).copied().unwrap_or(0.0) - q.get(&k).copied().unwrap_or(0.0)).abs())
        .sum::<f64>()
}
