use std::io::Write;
use std::process::{Command, Output, Stdio};

fn lbk(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lbk"))
        .args(args)
        .env_remove("LBK_MAX_ORDER")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn lbk");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().expect("wait")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn dims_lists_counts() {
    let o = lbk(&["dims", "--order", "5"], "");
    assert!(o.status.success());
    let rows: Vec<Vec<usize>> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().map(|x| x.parse().unwrap()).collect())
        .collect();
    let forests: Vec<usize> = rows.iter().map(|r| r[1]).collect();
    let lie: Vec<usize> = rows.iter().map(|r| r[3]).collect();
    assert_eq!(forests, [1, 2, 5, 14, 42]);
    assert_eq!(lie, [1, 1, 3, 8, 25]);
}

#[test]
fn sharp_reads_two_series() {
    let o = lbk(&["sharp", "--order", "3"], "a[] ; a[]");
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).trim(),
        "2*a[] + a[a[]] + 1/2*a[] a[a[]] - 1/2*a[a[]] a[] + 1/2*a[a[] a[]]"
    );
    let again = lbk(&["flow", "sharp", "--order", "3"], "a[] ; a[]");
    assert_eq!(again.stdout, o.stdout);
}

#[test]
fn verify_flow_passes() {
    let o = lbk(&["verify", "flow", "--f", "y^2", "--order", "6"], "");
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("h^6  y^7  y^7"));
    assert_eq!(out.lines().last(), Some("PASS"));
}

#[test]
fn verify_subcommands_pass() {
    for what in ["axioms", "pbw", "recursion"] {
        let o = lbk(&["verify", what, "--order", "3"], "");
        assert!(o.status.success(), "{what}: {}", stdout(&o));
    }
}

#[test]
fn exit_codes() {
    assert_eq!(lbk(&["dims", "--order", "9"], "").status.code(), Some(3));
    assert_eq!(lbk(&["parse"], "a[] a[").status.code(), Some(2));
    assert_eq!(lbk(&["nonsense"], "").status.code(), Some(2));
    assert_eq!(lbk(&["phi"], "a[] a[]").status.code(), Some(2));
    let raised = Command::new(env!("CARGO_BIN_EXE_lbk"))
        .args(["dims", "--order", "9"])
        .env("LBK_MAX_ORDER", "9")
        .output()
        .unwrap();
    assert!(raised.status.success());
    assert!(String::from_utf8_lossy(&raised.stderr).contains("warning"));
}

#[test]
fn json_output_is_structured_and_stable() {
    let args = ["mul", "--product", "gl", "--format", "json", "--order", "3"];
    let o = lbk(&args, "a[] ; a[] + a[a[]]");
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["order"], 3);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms[0]["forest"], "a[] a[]");
    assert_eq!(terms[0]["coeff"], "1");
    assert_eq!(lbk(&args, "a[] ; a[] + a[a[]]").stdout, o.stdout);
}

#[test]
fn universal_table_json() {
    let o = lbk(&["subst", "universal", "--grade", "2", "--format", "json"], "");
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let tables = v.as_array().unwrap();
    assert_eq!(tables.len(), 2);
    let chain = tables.iter().find(|t| t["omega"] == "a[a[]]").unwrap();
    let targets: Vec<_> = chain["terms"].as_array().unwrap().iter().map(|t| t["target"].clone()).collect();
    assert_eq!(targets, ["a[]", "a[a[]]"]);
    assert_eq!(chain["terms"][0]["coeff"], "a_a(2.0)");
}

#[test]
fn substitution_from_file() {
    let dir = std::env::temp_dir().join(format!("lbk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let endo = dir.join("endo.txt");
    std::fs::write(&endo, "a := a[] + a[a[]]\n").unwrap();
    let input = dir.join("input.txt");
    std::fs::write(&input, "a[a[]]\n").unwrap();
    let o = lbk(
        &[
            "subst",
            "apply",
            "--endo",
            endo.to_str().unwrap(),
            "--input",
            input.to_str().unwrap(),
            "--order",
            "3",
        ],
        "",
    );
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "a[a[]] + 2*a[a[a[]]] + a[a[] a[]]");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn coproduct_and_lie_basis() {
    let o = lbk(&["coproduct", "--which", "unshuffle", "--order", "2"], "a[] a[]");
    assert_eq!(stdout(&o).trim(), "1 ⊗ a[] a[] + 2*a[] ⊗ a[] + a[] a[] ⊗ 1");
    let o = lbk(&["lie-basis", "--grade", "3", "--order", "3"], "");
    assert_eq!(stdout(&o).lines().count(), 3);
    let o = lbk(&["euler", "--order", "3"], "a[] a[a[]]");
    assert_eq!(stdout(&o).trim(), "1/2*a[] a[a[]] - 1/2*a[a[]] a[]");
}
