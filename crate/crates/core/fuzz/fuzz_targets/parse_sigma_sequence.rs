#![no_main]
use libfuzzer_sys::fuzz_target;
use reconf_core::format::{parse_sigma_sequence, write_sigma_sequence};

fuzz_target!(|data: &str| {
    if let Ok(raw) = parse_sigma_sequence(data) {
        let named: Vec<_> = raw.start.blocks.iter().map(|(id, f)| (id.as_str(), f)).collect();
        let text = write_sigma_sequence(raw.start.n, &named, raw.flips.clone());
        assert_eq!(parse_sigma_sequence(&text).expect("written sequence parses"), raw);
    }
});
