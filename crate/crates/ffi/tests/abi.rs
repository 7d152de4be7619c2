use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use ser_ffi::*;

fn new_memory(sampler: SerSampler, capacity: usize) -> *mut SerReplay {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ser_replay_new(sampler, capacity, 42, &mut h) }, SerStatus::Ok);
    assert!(!h.is_null());
    h
}

fn transition(state: u32, action: u32, reward: f64) -> SerTransition {
    SerTransition {
        state,
        action,
        reward,
        next_state: state + 1,
        terminal: false,
    }
}

#[test]
fn stratified_round_trip() {
    let h = new_memory(SerSampler::Stratified, 3);
    unsafe {
        for t in [transition(0, 0, 1.0), transition(0, 0, 2.0), transition(1, 1, 3.0)] {
            assert_eq!(ser_replay_insert(h, &t), SerStatus::Ok);
        }
        assert_eq!(ser_replay_len(h), 3);

        let mut p = 0.0;
        assert_eq!(ser_replay_slot_probability(h, 0, &mut p), SerStatus::Ok);
        assert_eq!(p, 0.25);
        assert_eq!(ser_replay_slot_probability(h, 2, &mut p), SerStatus::Ok);
        assert_eq!(p, 0.5);

        let mut got = transition(9, 9, 0.0);
        assert_eq!(ser_replay_get(h, 1, &mut got), SerStatus::Ok);
        assert_eq!(got.reward, 2.0);

        let mut stats = std::mem::zeroed::<SerStats>();
        assert_eq!(ser_replay_stats(h, &mut stats), SerStatus::Ok);
        assert_eq!((stats.size, stats.num_keys, stats.max_multiplicity), (3, 2, 2));

        let mut slots = [usize::MAX; 64];
        let mut out = [transition(0, 0, 0.0); 64];
        assert_eq!(
            ser_replay_sample_batch(h, 64, slots.as_mut_ptr(), out.as_mut_ptr()),
            SerStatus::Ok
        );
        for (slot, t) in slots.iter().zip(&out) {
            assert_eq!(t.reward, *slot as f64 + 1.0);
        }
        ser_replay_free(h);
    }
}

#[test]
fn same_seed_same_draws() {
    let draws = || {
        let h = new_memory(SerSampler::Uniform, 8);
        let mut slots = [0usize; 32];
        let mut out = [transition(0, 0, 0.0); 32];
        unsafe {
            for s in 0..8 {
                ser_replay_insert(h, &transition(s, 0, 0.0));
            }
            ser_replay_sample_batch(h, 32, slots.as_mut_ptr(), out.as_mut_ptr());
            ser_replay_free(h);
        }
        slots
    };
    assert_eq!(draws(), draws());
}

#[test]
fn error_codes() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(
            ser_replay_new(SerSampler::Stratified, 0, 0, &mut h),
            SerStatus::ZeroCapacity
        );
        assert!(h.is_null());
        assert_eq!(
            ser_replay_new(SerSampler::Stratified, 1, 0, ptr::null_mut()),
            SerStatus::NullPointer
        );

        let h = new_memory(SerSampler::Stratified, 2);
        let mut t = transition(0, 0, 0.0);
        assert_eq!(ser_replay_sample(h, ptr::null_mut(), &mut t), SerStatus::Empty);
        assert_eq!(ser_replay_sample_batch(h, 0, ptr::null_mut(), ptr::null_mut()), SerStatus::Ok);
        assert_eq!(ser_replay_get(h, 0, &mut t), SerStatus::SlotOutOfRange);
        assert_eq!(ser_replay_insert(h, ptr::null()), SerStatus::NullPointer);
        assert_eq!(ser_replay_insert(ptr::null_mut(), &t), SerStatus::NullPointer);
        assert_eq!(ser_replay_len(ptr::null()), 0);
        ser_replay_free(h);
        ser_replay_free(ptr::null_mut());

        let mut score = 0.0;
        assert_eq!(ser_relative_score(3.0, 2.0, 1.0, &mut score), SerStatus::Ok);
        assert_eq!(score, 200.0);
        assert_eq!(ser_relative_score(3.0, 2.0, 2.0, &mut score), SerStatus::DivisionByZero);
        let msg = CStr::from_ptr(ser_status_message(SerStatus::Empty));
        assert_eq!(msg.to_str().unwrap(), "replay memory is empty");
    }
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_static_library() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libser_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or {} missing", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        "size=3 keys=2 max_multiplicity=2"
    );
}
