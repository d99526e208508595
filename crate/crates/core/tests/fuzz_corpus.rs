//! Replays the checked-in fuzz corpus seeds through the same round trips as the fuzz
//! targets.

use std::fs;
use std::path::PathBuf;

use reconf_core::format::{
    parse_blocks, parse_instance, parse_sequence, parse_sigma_sequence, parse_system_descriptor,
    parse_trace, write_blocks, write_instance, write_sigma_sequence, write_system_descriptor,
    write_trace,
};

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter(|p| {
            p.file_name()
                .unwrap()
                .to_string_lossy()
                .starts_with("seed-")
        })
        .map(|p| {
            let text = fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn instance_seeds() {
    for (p, text) in seeds("parse_instance") {
        let inst = parse_instance(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst);
    }
}

#[test]
fn sequence_seeds() {
    for (p, text) in seeds("parse_sequence") {
        let raw = parse_sequence(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        assert!(raw.steps.iter().all(|s| s.len() == raw.vertices.len()));
    }
}

#[test]
fn block_seeds() {
    for (p, text) in seeds("parse_blocks") {
        let raw = parse_blocks(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        let named: Vec<_> = raw.blocks.iter().map(|(id, f)| (id.as_str(), f)).collect();
        assert_eq!(parse_blocks(&write_blocks(raw.n, &named)).unwrap(), raw);
    }
}

#[test]
fn sigma_seeds() {
    for (p, text) in seeds("parse_sigma_sequence") {
        let raw = parse_sigma_sequence(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        assert!(!raw.flips.is_empty());
        let named: Vec<_> = raw
            .start
            .blocks
            .iter()
            .map(|(id, f)| (id.as_str(), f))
            .collect();
        let text = write_sigma_sequence(raw.start.n, &named, raw.flips.clone());
        assert_eq!(parse_sigma_sequence(&text).unwrap(), raw);
    }
}

#[test]
fn trace_seeds() {
    for (p, text) in seeds("parse_trace") {
        let trace = parse_trace(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        assert_eq!(parse_trace(&write_trace(&trace)).unwrap(), trace);
    }
}

#[test]
fn system_seeds() {
    for (p, text) in seeds("parse_system_descriptor") {
        let d = parse_system_descriptor(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        assert_eq!(
            parse_system_descriptor(&write_system_descriptor(d.n, d.weakened, &d.instance))
                .unwrap(),
            d
        );
    }
}
