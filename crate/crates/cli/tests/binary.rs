use std::process::{Command, Output};

fn thmon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thmon")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn green_d_prints_pivot() {
    let o = thmon(&["--k", "3", "green", "d", "{0->0}", "{^->^}"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("true, pivot {0->^}"), "{}", stdout(&o));
}

#[test]
fn taut_reduction_reports_zero() {
    let o = thmon(&["reduce", "taut", "x | !x"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("zero element: B is a tautology"));
    let o = thmon(&["reduce", "taut", "x1 & x2"]);
    assert!(stdout(&o).contains("nonzero element: B is not a tautology"));
}

#[test]
fn exit_codes() {
    assert_eq!(thmon(&["green", "r", "{0->0}", "{0->0}"]).status.code(), Some(0));
    assert_eq!(thmon(&["green", "r", "{0->0}", "{1->1}"]).status.code(), Some(1));
    assert_eq!(thmon(&["green", "q", "{0->0}", "{1->1}"]).status.code(), Some(2));
    assert_eq!(thmon(&["element", "{0->"]).status.code(), Some(2));
    assert_eq!(thmon(&["element", "{0->0}", "--k", "1"]).status.code(), Some(2));
    assert_eq!(thmon(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn machine_format() {
    let o = thmon(&["--format", "machine", "green", "leq-j", "{0->1}", "id"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("thmon-result v1"));
    let v: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(v["command"], "green");
    assert_eq!(v["holds"], true);
    assert_eq!(v["result"]["relation"], "J-le");
}

#[test]
fn circuit_round_trip_through_file() {
    let dir = std::env::temp_dir().join(format!("thmon-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.net");
    let o = thmon(&["reduce", "gadget", "x1 | x2", "--m", "1"]);
    assert_eq!(o.status.code(), Some(0));
    std::fs::write(&path, &o.stdout).unwrap();
    let p = path.to_str().unwrap();
    let printed = thmon(&["circuit", "print", p]);
    assert_eq!(stdout(&printed), stdout(&o));
    let size = thmon(&["circuit", "image-size", p]);
    assert_eq!(stdout(&size).trim(), "2");
    let m2 = thmon(&["circuit", "image-size-mod", p, "--h", "2"]);
    assert_eq!((stdout(&m2).trim(), m2.status.code()), ("no", Some(1)));
    let and = thmon(&["reduce", "gadget", "x1 & x2", "--m", "1"]);
    std::fs::write(&path, &and.stdout).unwrap();
    let m2 = thmon(&["circuit", "image-size-mod", p, "--h", "2"]);
    assert_eq!((stdout(&m2).trim(), m2.status.code()), ("yes", Some(0)));
    let def = format!("g=circuit({p})");
    let e = thmon(&["--def", &def, "element", "g"]);
    assert_eq!(e.status.code(), Some(0));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn random_is_reproducible() {
    let a = thmon(&["--seed", "11", "random", "element", "--count", "4"]);
    let b = thmon(&["--seed", "11", "random", "element", "--count", "4"]);
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).starts_with("seed 11\n"));
}
