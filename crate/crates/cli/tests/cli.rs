use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn reconf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reconf"))
        .args(args)
        .env_remove("RECONF_SEED")
        .env_remove("RECONF_OUT")
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn generate_is_deterministic_and_prints_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    for out in [&a, &b] {
        let o = reconf(&[
            "generate",
            "--kind",
            "path",
            "--vertices",
            "3",
            "--alphabet",
            "4",
            "--satisfiable",
            "--seed",
            "7",
            "--out",
            p(out),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(stderr(&o).contains("seed 7"));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let o = reconf(&["solve", "--instance", p(&a)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "2/2");
}

#[test]
fn seed_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_reconf"))
        .args(["generate", "--satisfiable"])
        .env("RECONF_SEED", "42")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(stderr(&o).contains("seed 42"));
    assert_eq!(
        stdout(&o),
        stdout(&reconf(&["generate", "--satisfiable", "--seed", "42"]))
    );
}

#[test]
fn bad_alphabet_is_an_error() {
    let o = reconf(&["generate", "--alphabet", "1"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("alphabet"));
}

#[test]
fn robustize_verify_compose_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("i.txt");
    assert!(reconf(&[
        "generate",
        "--satisfiable",
        "--seed",
        "3",
        "--out",
        p(&inst)
    ])
    .status
    .success());
    let sys = dir.path().join("sys");
    let o = reconf(&["robustize", "--instance", p(&inst), "--out", p(&sys)]);
    assert!(o.status.success(), "{}", stderr(&o));
    for f in ["system.txt", "sigma_ini.txt", "sigma_tar.txt", "trace.txt"] {
        assert!(sys.join(f).exists(), "{f}");
    }
    // a sequence that stays at the start misses the target
    let ini = fs::read_to_string(sys.join("sigma_ini.txt")).unwrap();
    let sigma = dir.path().join("sigma.txt");
    fs::write(
        &sigma,
        ini.replace("block-assignment v1", "sigma-sequence v1"),
    )
    .unwrap();
    let csv = dir.path().join("counts.csv");
    let o = reconf(&[
        "verify-sequence",
        "--system",
        p(&sys),
        "--sigma",
        p(&sigma),
        "--out",
        p(&csv),
    ]);
    assert!(!o.status.success());
    let counts = fs::read_to_string(&csv).unwrap();
    assert!(
        counts.starts_with("step,satisfied,total\n0,2,2"),
        "{counts}"
    );
    let out = dir.path().join("composed");
    let o = reconf(&["compose", "--system", p(&sys), "--out", p(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(fs::read_to_string(out.join("instance.txt"))
        .unwrap()
        .starts_with("reconf-instance v1\narity 4"));
    assert!(fs::read_to_string(out.join("trace.txt"))
        .unwrap()
        .starts_with("reduction-trace v1"));
}

#[test]
fn arity_reduce_writes_instance_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("q.txt");
    fs::write(
        &inst,
        "reconf-instance v1\narity 4\nalphabet 2\nvertex a\nvertex b\nvertex c\nvertex d\n\
         edge a b c d : 0 0 0 0 ; 1 0 0 0 ; 1 1 1 1\npsi_ini a=0 b=0 c=0 d=0\npsi_tar a=1 b=0 c=0 d=0\n",
    )
    .unwrap();
    let out = dir.path().join("bin.txt");
    let o = reconf(&["arity-reduce", "--instance", p(&inst), "--out", p(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(fs::read_to_string(&out).unwrap().contains("arity 2"));
    assert!(dir.path().join("bin.txt.trace").exists());
    let o = reconf(&["solve", "--instance", p(&out)]);
    assert!(o.status.success());
    let v = stdout(&o);
    let (s, t) = v.trim().split_once('/').unwrap();
    assert_eq!(s, t, "reduced instance keeps a perfect path: {v}");
}

#[test]
fn pipeline_micro_report() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("fan.txt");
    fs::write(
        &inst,
        "reconf-instance v1\narity 2\nalphabet 3\nvertex u\nvertex v\n\
         edge u v : 0 0 ; 1 0 ; 2 0\npsi_ini u=0 v=0\npsi_tar u=2 v=0\n",
    )
    .unwrap();
    let report = dir.path().join("report.csv");
    let o = reconf(&[
        "pipeline",
        "--instance",
        p(&inst),
        "--mode",
        "micro",
        "--report",
        p(&report),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(&report).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "stage,vertices,edges,max-alphabet,maxmin-numerator,maxmin-denominator,method"
    );
    assert!(lines[1].starts_with("source,2,1,3,1,1,exact"), "{csv}");
    assert_eq!(lines.len(), 5);
}

#[test]
fn experiments_run_and_pass() {
    let o = reconf(&["experiment", "claim-partition", "--n", "4"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "p-alpha,p-beta,p-gamma,p-equal,triples\n4,4,4,4,3360\n"
    );
    let o = reconf(&["experiment", "obs-n3"]);
    assert!(o.status.success());
    let o = reconf(&["experiment", "no-such-thing"]);
    assert!(!o.status.success());
    let o = reconf(&[
        "hadamard",
        "partial-sum",
        "--n",
        "128",
        "--trials",
        "2000",
        "--seed",
        "5",
    ]);
    assert!(o.status.success());
    assert!(
        stdout(&o).starts_with("half-len,trials,threshold,hits,frequency,bound\n128,2000,127,0,")
    );
}

#[test]
fn hadamard_path_profile_is_verified() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let o = reconf(&[
        "hadamard",
        "path",
        "--n",
        "9",
        "--alpha",
        "3",
        "--beta",
        "5",
        "--verify",
        "--out",
        p(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 1 + 257);
    for row in csv.lines().skip(1) {
        let f: Vec<u32> = row
            .split(',')
            .skip(2)
            .take(3)
            .map(|x| x.parse().unwrap())
            .collect();
        assert!(f[0].min(f[1]) <= 128);
        // more than (1/4 + 1/400) * 512 = 129.28
        assert!(f[2] >= 130, "{row}");
    }
}
