//! Text reports compared byte for byte against `tests/golden/<name>.txt`.
//! Set `PBE_BLESS=1` to rewrite the golden files.

use std::path::{Path, PathBuf};
use std::process::Command;

fn manifest_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).to_path_buf()
}

struct Case {
    name: String,
    exit: i32,
    args: Vec<String>,
}

fn cases() -> Vec<Case> {
    let text = std::fs::read_to_string(manifest_dir().join("tests/golden/cases.txt")).unwrap();
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let mut words = l.split_whitespace().map(String::from);
            let name = words.next().unwrap();
            let exit = words.next().unwrap().parse().unwrap();
            Case {
                name,
                exit,
                args: words.collect(),
            }
        })
        .collect()
}

#[test]
fn reports_match_golden_files() {
    let bless = std::env::var_os("PBE_BLESS").is_some();
    let root = manifest_dir().join("../..");
    let mut mismatched = Vec::new();
    for case in cases() {
        let out = Command::new(env!("CARGO_BIN_EXE_pbe"))
            .args(&case.args)
            .current_dir(&root)
            .output()
            .unwrap();
        let stdout = String::from_utf8(out.stdout).unwrap();
        assert_eq!(
            out.status.code(),
            Some(case.exit),
            "{}: {}",
            case.name,
            String::from_utf8_lossy(&out.stderr)
        );
        let path = manifest_dir()
            .join("tests/golden")
            .join(format!("{}.txt", case.name));
        if bless {
            std::fs::write(&path, &stdout).unwrap();
            continue;
        }
        let want =
            std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        if want != stdout {
            eprintln!("--- {} ---\n{stdout}", case.name);
            mismatched.push(case.name);
        }
    }
    assert!(mismatched.is_empty(), "golden mismatch: {mismatched:?}");
}

#[test]
fn json_mirrors_text_fields() {
    let root = manifest_dir().join("../..");
    for case in cases().into_iter().filter(|c| !c.name.starts_with("meta")) {
        let out = Command::new(env!("CARGO_BIN_EXE_pbe"))
            .args(&case.args)
            .args(["--format", "json"])
            .current_dir(&root)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(case.exit), "{}", case.name);
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        let text = std::fs::read_to_string(
            manifest_dir()
                .join("tests/golden")
                .join(format!("{}.txt", case.name)),
        )
        .unwrap();
        for key in v.as_object().unwrap().keys() {
            assert!(
                text.lines()
                    .any(|l| l.trim_start().starts_with(&format!("{key}:"))),
                "{}: text lacks {key}",
                case.name
            );
        }
    }
}
