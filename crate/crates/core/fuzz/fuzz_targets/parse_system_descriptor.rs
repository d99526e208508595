#![no_main]
use libfuzzer_sys::fuzz_target;
use reconf_core::format::{parse_system_descriptor, write_system_descriptor};

fuzz_target!(|data: &str| {
    if let Ok(d) = parse_system_descriptor(data) {
        let text = write_system_descriptor(d.n, d.weakened, &d.instance);
        assert_eq!(parse_system_descriptor(&text).expect("written descriptor parses"), d);
    }
});
