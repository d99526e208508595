#![no_main]
use libfuzzer_sys::fuzz_target;
use reconf_core::format::parse_sequence;

fuzz_target!(|data: &str| {
    if let Ok(raw) = parse_sequence(data) {
        assert!(!raw.steps.is_empty());
        assert!(raw.steps.iter().all(|s| s.len() == raw.vertices.len()));
    }
});
