#![no_main]
use libfuzzer_sys::fuzz_target;
use reconf_core::format::{parse_trace, write_trace};

fuzz_target!(|data: &str| {
    if let Ok(trace) = parse_trace(data) {
        let text = write_trace(&trace);
        assert_eq!(parse_trace(&text).expect("written trace parses"), trace);
    }
});
