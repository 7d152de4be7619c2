//! C ABI over the replay memories of `ser-core`.
//!
//! Memories are reached through an opaque `SerReplay*` handle that owns the
//! memory and a seeded ChaCha8 generator used for sampling. Every fallible
//! function returns a [`SerStatus`] and writes its result through an out
//! pointer; out pointers are left untouched on failure. Handles are not
//! thread-safe: callers must serialize access to one handle.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ser_core::harness::{relative_score, HarnessError};
use ser_core::replay::{AnyReplayMemory, ReplayError, ReplayMemory, SamplerKind, Transition};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SerStatus {
    Ok = 0,
    NullPointer = 1,
    Empty = 2,
    ZeroCapacity = 3,
    InvalidArgument = 4,
    SlotOutOfRange = 5,
    DivisionByZero = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SerSampler {
    Uniform = 0,
    Stratified = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SerTransition {
    pub state: u32,
    pub action: u32,
    pub reward: f64,
    pub next_state: u32,
    pub terminal: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SerStats {
    pub size: usize,
    pub capacity: usize,
    pub num_keys: usize,
    pub max_multiplicity: usize,
    pub redundancy_fraction: f64,
}

/// Opaque replay memory handle.
pub struct SerReplay {
    memory: AnyReplayMemory,
    rng: ChaCha8Rng,
}

impl From<SerTransition> for Transition {
    fn from(t: SerTransition) -> Self {
        Transition::new(t.state, t.action, t.reward, t.next_state, t.terminal)
    }
}

impl From<&Transition> for SerTransition {
    fn from(t: &Transition) -> Self {
        SerTransition {
            state: t.state,
            action: t.action,
            reward: t.reward,
            next_state: t.next_state,
            terminal: t.terminal,
        }
    }
}

impl From<ReplayError> for SerStatus {
    fn from(e: ReplayError) -> Self {
        match e {
            ReplayError::Empty => SerStatus::Empty,
            ReplayError::ZeroCapacity => SerStatus::ZeroCapacity,
        }
    }
}

fn guard<F: FnOnce() -> Result<(), SerStatus>>(f: F) -> SerStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SerStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => SerStatus::Panic,
    }
}

unsafe fn borrow<'a>(h: *const SerReplay) -> Result<&'a SerReplay, SerStatus> {
    h.as_ref().ok_or(SerStatus::NullPointer)
}

unsafe fn borrow_mut<'a>(h: *mut SerReplay) -> Result<&'a mut SerReplay, SerStatus> {
    h.as_mut().ok_or(SerStatus::NullPointer)
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, SerStatus> {
    p.as_mut().ok_or(SerStatus::NullPointer)
}

/// Creates a memory of `capacity` slots whose sampler is seeded with `seed`.
/// Release it with [`ser_replay_free`].
///
/// # Safety
/// `out_handle` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ser_replay_new(
    sampler: SerSampler,
    capacity: usize,
    seed: u64,
    out_handle: *mut *mut SerReplay,
) -> SerStatus {
    guard(|| {
        let slot = out(out_handle)?;
        let kind = match sampler {
            SerSampler::Uniform => SamplerKind::Uniform,
            SerSampler::Stratified => SamplerKind::Stratified,
        };
        let memory = AnyReplayMemory::new(kind, capacity)?;
        let replay = SerReplay {
            memory,
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        *slot = Box::into_raw(Box::new(replay));
        Ok(())
    })
}

/// Destroys a handle. Passing null is a no-op.
///
/// # Safety
/// `handle` must be null or come from [`ser_replay_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ser_replay_free(handle: *mut SerReplay) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Stores one transition, evicting the oldest when full.
///
/// # Safety
/// `handle` must be a live handle and `transition` valid for reads.
#[no_mangle]
pub unsafe extern "C" fn ser_replay_insert(handle: *mut SerReplay, transition: *const SerTransition) -> SerStatus {
    guard(|| {
        let h = borrow_mut(handle)?;
        let t = *transition.as_ref().ok_or(SerStatus::NullPointer)?;
        h.memory.insert(t.into());
        Ok(())
    })
}

/// Draws one transition. `out_slot` may be null when the slot index is not
/// needed.
///
/// # Safety
/// `handle` must be a live handle; `out_transition` valid for writes;
/// `out_slot` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ser_replay_sample(
    handle: *mut SerReplay,
    out_slot: *mut usize,
    out_transition: *mut SerTransition,
) -> SerStatus {
    guard(|| {
        let h = borrow_mut(handle)?;
        let dst = out(out_transition)?;
        let SerReplay { memory, rng } = h;
        let slot = memory.sample_index(rng)?;
        *dst = memory.get(slot).expect("sampled slot is occupied").into();
        if let Some(s) = out_slot.as_mut() {
            *s = slot;
        }
        Ok(())
    })
}

/// Draws `count` transitions independently, with replacement, into
/// `out_transitions[0..count]`. `out_slots` may be null.
///
/// # Safety
/// `out_transitions` (and `out_slots` when non-null) must point to `count`
/// writable elements.
#[no_mangle]
pub unsafe extern "C" fn ser_replay_sample_batch(
    handle: *mut SerReplay,
    count: usize,
    out_slots: *mut usize,
    out_transitions: *mut SerTransition,
) -> SerStatus {
    guard(|| {
        let h = borrow_mut(handle)?;
        if count == 0 {
            return Ok(());
        }
        if out_transitions.is_null() {
            return Err(SerStatus::NullPointer);
        }
        let SerReplay { memory, rng } = h;
        if memory.is_empty() {
            return Err(SerStatus::Empty);
        }
        let transitions = std::slice::from_raw_parts_mut(out_transitions, count);
        let mut slots = out_slots.as_mut().map(|p| std::slice::from_raw_parts_mut(p, count));
        for (i, dst) in transitions.iter_mut().enumerate() {
            let slot = memory.sample_index(rng)?;
            *dst = memory.get(slot).expect("sampled slot is occupied").into();
            if let Some(s) = slots.as_deref_mut() {
                s[i] = slot;
            }
        }
        Ok(())
    })
}

/// Reads the transition stored in `slot`.
///
/// # Safety
/// `handle` must be a live handle and `out_transition` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ser_replay_get(
    handle: *const SerReplay,
    slot: usize,
    out_transition: *mut SerTransition,
) -> SerStatus {
    guard(|| {
        let h = borrow(handle)?;
        let dst = out(out_transition)?;
        *dst = h.memory.get(slot).ok_or(SerStatus::SlotOutOfRange)?.into();
        Ok(())
    })
}

/// Number of stored transitions, or 0 for a null handle.
///
/// # Safety
/// `handle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ser_replay_len(handle: *const SerReplay) -> usize {
    catch_unwind(AssertUnwindSafe(|| handle.as_ref().map_or(0, |h| h.memory.len()))).unwrap_or(0)
}

/// # Safety
/// `handle` must be a live handle and `out_stats` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ser_replay_stats(handle: *const SerReplay, out_stats: *mut SerStats) -> SerStatus {
    guard(|| {
        let h = borrow(handle)?;
        let dst = out(out_stats)?;
        let s = h.memory.stats();
        *dst = SerStats {
            size: s.size,
            capacity: s.capacity,
            num_keys: s.num_keys,
            max_multiplicity: s.max_multiplicity,
            redundancy_fraction: s.redundancy_fraction,
        };
        Ok(())
    })
}

/// Exact probability that one draw returns `slot`.
///
/// # Safety
/// `handle` must be a live handle and `out_probability` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ser_replay_slot_probability(
    handle: *const SerReplay,
    slot: usize,
    out_probability: *mut f64,
) -> SerStatus {
    guard(|| {
        let h = borrow(handle)?;
        let dst = out(out_probability)?;
        if h.memory.is_empty() {
            return Err(SerStatus::Empty);
        }
        if h.memory.get(slot).is_none() {
            return Err(SerStatus::SlotOutOfRange);
        }
        *dst = h.memory.exact_distribution().get(&slot).copied().unwrap_or(0.0);
        Ok(())
    })
}

/// `100 * (stratified - random) / (uniform - random)`.
///
/// # Safety
/// `out_score` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ser_relative_score(
    stratified: f64,
    uniform: f64,
    random: f64,
    out_score: *mut f64,
) -> SerStatus {
    guard(|| {
        let dst = out(out_score)?;
        *dst = relative_score(stratified, uniform, random).map_err(|e| match e {
            HarnessError::DivisionByZero(_) => SerStatus::DivisionByZero,
            _ => SerStatus::InvalidArgument,
        })?;
        Ok(())
    })
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn ser_status_message(status: SerStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        SerStatus::Ok => b"ok\0",
        SerStatus::NullPointer => b"null pointer argument\0",
        SerStatus::Empty => b"replay memory is empty\0",
        SerStatus::ZeroCapacity => b"capacity must be positive\0",
        SerStatus::InvalidArgument => b"invalid argument\0",
        SerStatus::SlotOutOfRange => b"slot is out of range or unoccupied\0",
        SerStatus::DivisionByZero => b"uniform and random scores are equal\0",
        SerStatus::Panic => b"internal panic\0",
    };
    msg.as_ptr().cast()
}
