#![no_main]
use libfuzzer_sys::fuzz_target;
use reconf_core::format::{parse_instance, write_instance};

fuzz_target!(|data: &str| {
    if let Ok(inst) = parse_instance(data) {
        let text = write_instance(&inst);
        assert_eq!(parse_instance(&text).expect("written instance parses"), inst);
    }
});
