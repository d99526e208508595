#![no_main]
use libfuzzer_sys::fuzz_target;
use reconf_core::format::{parse_blocks, write_blocks};

fuzz_target!(|data: &str| {
    if let Ok(raw) = parse_blocks(data) {
        let named: Vec<_> = raw.blocks.iter().map(|(id, f)| (id.as_str(), f)).collect();
        let text = write_blocks(raw.n, &named);
        assert_eq!(parse_blocks(&text).expect("written blocks parse"), raw);
    }
});
