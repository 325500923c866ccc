use std::io::Write;
use std::path::Path;
use std::process::{Command, Stdio};

fn motivic() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_motivic"));
    for (k, _) in std::env::vars() {
        if k.starts_with("MOTIVIC_") {
            c.env_remove(k);
        }
    }
    c
}

fn corpus(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name).display().to_string()
}

#[test]
fn exit_codes_follow_the_worst_record() {
    for (name, code) in [("01_count.mot", 0), ("10_scissor_fail.mot", 1), ("18_errors.mot", 2), ("20_parse_error.mot", 3)] {
        let out = motivic().args(["run", &corpus(name)]).output().unwrap();
        assert_eq!(out.status.code(), Some(code), "{name}");
    }
}

#[test]
fn scripts_can_come_from_stdin() {
    let mut child = motivic().args(["run", "-"]).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(b"field F 2\nfatpoint p = k\nscheme X = Spec k[x]/(x^2 + x)\ncount X at p\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("value=2\n"), "{text}");
}

#[test]
fn fmt_prints_the_canonical_form() {
    let out = motivic().args(["fmt", &corpus("08_classes.mot")]).output().unwrap();
    assert!(out.status.success());
    let once = String::from_utf8(out.stdout).unwrap();
    let dir = std::env::temp_dir().join(format!("motivic-fmt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("once.mot");
    std::fs::write(&path, &once).unwrap();
    let twice = motivic().args(["fmt", &path.display().to_string()]).output().unwrap();
    assert_eq!(String::from_utf8(twice.stdout).unwrap(), once);
    let bad = motivic().args(["fmt", &corpus("20_parse_error.mot")]).output().unwrap();
    assert_eq!(bad.status.code(), Some(3));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn flags_take_precedence_over_the_environment() {
    let script = "fatpoint p = k\nscheme X = Spec k[x]\ncount X at p\n";
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = motivic();
        if let Some(v) = env {
            c.env("MOTIVIC_FIELD", v);
        }
        c.arg("run");
        if let Some(v) = flag {
            c.args(["--field", v]);
        }
        let mut child = c.arg("-").stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
        child.stdin.take().unwrap().write_all(script.as_bytes()).unwrap();
        String::from_utf8(child.wait_with_output().unwrap().stdout).unwrap()
    };
    assert!(run(None, None).contains("value=2\n"));
    assert!(run(Some("F5"), None).contains("value=5\n"));
    assert!(run(Some("F5"), Some("F3")).contains("value=3\n"));
}
