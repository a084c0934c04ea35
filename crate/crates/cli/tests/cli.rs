use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn sasplus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sasplus")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn validate_instance_and_plans() {
    let flip = data("flip.sas");
    assert_eq!(sasplus(&["validate", path(&flip)]).status.code(), Some(0));

    let out = sasplus(&["validate", path(&data("chain.sas")), path(&data("bad.plan"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("step 2 (up2)"), "{}", stderr(&out));

    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.plan");
    fs::write(&good, "a\n").unwrap();
    assert_eq!(sasplus(&["validate", path(&flip), path(&good)]).status.code(), Some(0));

    let out = sasplus(&["validate", path(&data("malformed.sas"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 4"), "{}", stderr(&out));
}

#[test]
fn solve_flip_with_every_engine() {
    let flip = data("flip.sas");
    for engine in ["bfs", "mar", "mar-mod"] {
        let out = sasplus(&["solve", path(&flip), "--k", "1", "--engine", engine]);
        assert_eq!(out.status.code(), Some(0), "{engine}");
        assert_eq!(stdout(&out), "a\n");
        let report = stderr(&out);
        let mut lines = report.lines();
        assert_eq!(
            lines.next(),
            Some("command,input,k,engine,outcome,plan_len,nodes,line5_max,establish_max,states,wall_ms")
        );
        assert!(lines.next().unwrap().contains(&format!(",1,{engine},found,1,")));

        let none = sasplus(&["solve", path(&flip), "--k", "0", "--engine", engine]);
        assert_eq!(none.status.code(), Some(10), "{engine}");
        assert!(stdout(&none).is_empty());
    }
}

#[test]
fn mar_mod_gate() {
    let non_p = data("non_p.sas");
    let out = sasplus(&["solve", path(&non_p), "--k", "1", "--engine", "mar-mod"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("restriction P"), "{}", stderr(&out));
    let forced = sasplus(&["solve", path(&non_p), "--k", "1", "--engine", "mar-mod", "--unsafe-mod"]);
    assert_eq!(forced.status.code(), Some(0));
}

#[test]
fn bfs_and_mar_agree_on_corpus() {
    let mut seen = 0;
    for entry in fs::read_dir(data("")).unwrap() {
        let file = entry.unwrap().path();
        if file.extension().and_then(|e| e.to_str()) != Some("sas") {
            continue;
        }
        for k in 0..4 {
            let k = k.to_string();
            let bfs = sasplus(&["solve", path(&file), "--k", &k, "--engine", "bfs"]);
            let mar = sasplus(&["solve", path(&file), "--k", &k, "--engine", "mar"]);
            assert_eq!(bfs.status.code(), mar.status.code(), "{} k={k}", file.display());
        }
        seen += 1;
    }
    assert!(seen >= 6);
}

#[test]
fn classify_reports() {
    let out = sasplus(&["classify", path(&data("no_actions.sas"))]);
    assert_eq!(stdout(&out), "P=true U=true B=true S=true m_p=0 m_e=0\n");

    let dir = tempfile::tempdir().unwrap();
    let k3 = dir.path().join("k3.sas");
    assert_eq!(sasplus(&["reduce", "pc", path(&data("k3.pc")), path(&k3)]).status.code(), Some(0));
    let out = stdout(&sasplus(&["classify", path(&k3)]));
    assert!(out.contains("U=true B=true S=true m_p=1 m_e=1"), "{out}");
}

#[test]
fn reduce_hitting_set_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("hs.sas");
    let out = sasplus(&["reduce", "hs", path(&data("example.hs")), path(&target)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "k'=1\n");
    assert_eq!(fs::read_to_string(&target).unwrap(), fs::read_to_string(data("example_hs.expected")).unwrap());
    let classify = stdout(&sasplus(&["classify", path(&target)]));
    assert!(classify.contains("U=false B=true S=true m_p=0"), "{classify}");
    let solve = sasplus(&["solve", path(&target), "--k", "1"]);
    assert_eq!(stdout(&solve), "pick:1\n");
}

#[test]
fn reduce_clique() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("k3.sas");
    let out = sasplus(&["reduce", "pc", path(&data("k3.pc")), path(&target)]);
    assert_eq!(stdout(&out), "k'=24\n");
    let bad = sasplus(&["reduce", "pc", path(&data("k1.pc")), path(&dir.path().join("k1.sas"))]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("k >= 2"), "{}", stderr(&bad));
}

#[test]
fn fomc_matches_solve() {
    for (file, k) in [("flip.sas", "1"), ("flip.sas", "0"), ("batching.sas", "2"), ("no_actions.sas", "2")] {
        let fo = sasplus(&["fomc", path(&data(file)), "--k", k]);
        let bfs = sasplus(&["solve", path(&data(file)), "--k", k]);
        assert_eq!(fo.status.code(), bfs.status.code(), "{file} k={k}");
        let expected = if bfs.status.code() == Some(0) { "SAT\n" } else { "UNSAT\n" };
        assert_eq!(stdout(&fo), expected);
    }
    let dump = stdout(&sasplus(&["fomc", path(&data("flip.sas")), "--k", "1", "--dump"]));
    assert!(dump.contains("(exists (a1) (forall (v x) "), "{dump}");
    assert!(dump.contains("postv/3: (a0,v0,1)"), "{dump}");

    let over = sasplus(&["fomc", path(&data("chain.sas")), "--k", "3", "--budget", "1000"]);
    assert_eq!(over.status.code(), Some(2));
    assert!(stdout(&over).is_empty());
}

#[test]
fn bench_csv_matches_golden() {
    let out = sasplus(&["bench", "--family", "pad-p", "--k", "3", "--sizes", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    // wall_ms is the last column and varies between runs.
    let stable: String = stdout(&out)
        .lines()
        .map(|l| format!("{}\n", l.rsplit_once(',').unwrap().0))
        .collect();
    assert_eq!(stable, fs::read_to_string(data("bench.expected")).unwrap());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(sasplus(&["solve", path(&data("flip.sas")), "--k", "1", "--engine", "astar"]).status.code(), Some(2));
    assert_eq!(sasplus(&["solve", path(&data("missing.sas")), "--k", "1"]).status.code(), Some(2));
}
