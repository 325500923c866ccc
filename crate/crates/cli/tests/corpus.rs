use std::path::{Path, PathBuf};

use motivic_cli::{parse, run_text, Config};

fn corpus() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut out: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "mot"))
        .collect();
    out.sort();
    out
}

fn expected_exit(name: &str) -> i32 {
    match &name[..2] {
        "10" | "13" => 1,
        "18" => 2,
        "20" => 3,
        _ => 0,
    }
}

#[test]
fn reports_match_golden_files() {
    let scripts = corpus();
    assert!(scripts.len() >= 20);
    for p in scripts {
        let text = std::fs::read_to_string(&p).unwrap();
        let golden = std::fs::read_to_string(p.with_extension("expected")).unwrap();
        let report = run_text(&text, &Config::default());
        assert_eq!(report.to_string(), golden, "{}", p.display());
        let name = p.file_name().unwrap().to_string_lossy().into_owned();
        assert_eq!(report.exit_code(), expected_exit(&name), "{name}");
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for p in corpus() {
        let text = std::fs::read_to_string(&p).unwrap();
        let a = run_text(&text, &Config::default()).to_string();
        let b = run_text(&text, &Config::default()).to_string();
        assert_eq!(a, b, "{}", p.display());
    }
}

#[test]
fn printing_is_a_fixed_point_of_parsing() {
    for p in corpus() {
        let text = std::fs::read_to_string(&p).unwrap();
        let Ok(script) = parse(&text) else {
            assert!(p.ends_with("20_parse_error.mot"), "{} failed to parse", p.display());
            continue;
        };
        let printed = script.to_string();
        let again = parse(&printed).unwrap();
        assert_eq!(again.stmts(), script.stmts(), "{}", p.display());
        assert_eq!(again.to_string(), printed);
        // the canonical form evaluates to the same report
        let a = run_text(&text, &Config::default());
        let b = run_text(&printed, &Config::default());
        assert_eq!(a.exit_code(), b.exit_code());
    }
}
