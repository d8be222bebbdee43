mod common;

use std::process::Command;

use jacobs_ladder::cli::{EXIT_NUMERIC, EXIT_OK, EXIT_USAGE};
use jacobs_ladder::hlgrid::GRID_MAGIC;

fn records(csv_text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(csv_text.as_bytes())
        .records()
        .map(|r| r.unwrap())
        .collect()
}

#[test]
fn ladder_table() {
    let (code, out, _) = common::cli(&["ladder", "--T", "1000,10000"]);
    assert_eq!(code, EXIT_OK);
    let header = out.lines().next().unwrap();
    assert_eq!(
        header,
        "T,phi,phi1,T_minus_phi1,one_minus_c_pi_T,ratio,complementarity,omega_over_ln_T,hl_residual,error"
    );
    let rows = records(&out);
    let ratio: f64 = rows[1][5].parse().unwrap();
    assert!((0.8..=1.2).contains(&ratio));
    // floats carry 17 significant digits
    assert_eq!(rows[1][0].to_string(), "1.0000000000000000e4");
}

#[test]
fn ladder_row_errors_are_reported() {
    let (code, out, _) = common::cli(&["ladder", "--T", "1000,50"]);
    assert_eq!(code, EXIT_NUMERIC);
    let rows = records(&out);
    assert!(rows[0][9].is_empty());
    assert!(rows[1][9].contains("T0"));
}

#[test]
fn chain_tables() {
    let (code, out, _) = common::cli(&["chain", "--T", "10000", "-k", "3"]);
    assert_eq!(code, EXIT_OK);
    let rows = records(&out);
    assert_eq!(rows.len(), 4);
    for r in &rows[1..] {
        let g: f64 = r[5].parse().unwrap();
        assert!((0.75..=1.25).contains(&g));
    }
    let (_, out, _) = common::cli(&["chain", "--T", "10000", "-k", "0"]);
    let rows = records(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][1].parse::<f64>().unwrap(), 1e4);

    let (code, _, err) = common::cli(&["chain", "--T", "10000", "--U", "5000"]);
    assert_ne!(code, EXIT_OK);
    assert!(err.contains("T/(10 ln T)"));
}

#[test]
fn gram_csv_and_json_agree() {
    let args = ["gram", "--N", "3", "--p", "1"];
    let (_, csv_out, _) = common::cli(&args);
    let (_, json_out, _) = common::cli(&[&["--format", "json"][..], &args].concat());
    let json: Vec<serde_json::Map<String, serde_json::Value>> = serde_json::from_str(&json_out).unwrap();
    let rows = records(&csv_out);
    assert_eq!(rows.len(), json.len());
    for (r, j) in rows.iter().zip(&json) {
        assert_eq!(r[0], *j["quantity"].as_str().unwrap());
        if let Some(v) = j["value"].as_f64() {
            assert_eq!(r[3].parse::<f64>().unwrap(), v);
        }
    }
    let ratio = rows.iter().find(|r| &r[0] == "max_offdiag_ratio").unwrap();
    assert!(ratio[3].parse::<f64>().unwrap() <= 1e-4);
}

#[test]
fn gram_depth_zero_is_the_base() {
    let (code, out, _) = common::cli(&["gram", "--N", "3", "--p", "0"]);
    assert_eq!(code, EXIT_OK);
    let rows = records(&out);
    let g00 = rows.iter().find(|r| &r[0] == "entry" && &r[1] == "0" && &r[2] == "0").unwrap();
    assert!((g00[3].parse::<f64>().unwrap() - 2.0).abs() < 1e-10);
}

#[test]
fn outputs_are_byte_identical() {
    for args in [&["ladder", "--T", "2000,3000"][..], &["chain", "--T", "5000", "-k", "2"]] {
        assert_eq!(common::cli(args), common::cli(args));
    }
}

#[test]
fn grid_command_writes_a_reproducible_cache() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for dir in [a.path(), b.path()] {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let args = ["jacobs-ladder", "--t-max", "2e4", "--cache", dir.to_str().unwrap(), "grid"];
        assert_eq!(jacobs_ladder::cli::run(args, &mut out, &mut err), EXIT_OK);
        let entry = std::fs::read_dir(dir).unwrap().next().unwrap().unwrap();
        files.push(std::fs::read(entry.path()).unwrap());
    }
    assert_eq!(&files[0][..8], GRID_MAGIC);
    assert_eq!(files[0], files[1]);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_jacobs-ladder");
    let cache = common::cache_dir();
    let status = |args: &[&str]| {
        Command::new(bin)
            .arg("--cache")
            .arg(&cache)
            .args(args)
            .output()
            .unwrap()
    };
    let ok = status(&["verify", "zeta"]);
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("suite,check,measured,bound,pass"));
    assert_eq!(status(&["verify", "nonsense"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(status(&["--a", "9", "grid"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(status(&["ladder", "--T", "50"]).status.code(), Some(EXIT_NUMERIC));
}
