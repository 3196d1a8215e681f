//! End-to-end runs of the `elmkit` binary: the generate → transform →
//! characterize flow through real files, the exit-code contract, and the
//! reproducibility guarantees on the emitted bytes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use elmkit_core::datasets;

fn elmkit(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_elmkit"));
    cmd.args(args);
    cmd
}

fn run(args: &[&str]) -> Output {
    elmkit(args).output().expect("binary spawns")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn shipped_data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// A per-test scratch directory under the system temp dir, removed on
/// drop so failed assertions leave the evidence behind only until rerun.
struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Scratch {
        let dir = std::env::temp_dir().join(format!("elmkit-cli-{tag}-{}", std::process::id()));
        fs::create_dir_all(&dir).expect("scratch dir");
        Scratch(dir)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }

    fn write(&self, name: &str, contents: &str) -> PathBuf {
        let p = self.path(name);
        fs::write(&p, contents).expect("scratch write");
        p
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

#[test]
fn generate_transform_characterize_bound_flow() {
    let scratch = Scratch::new("flow");
    let system = scratch.path("35.eqs");
    let artifact = scratch.path("h1.json");

    let out = run(&[
        "generate",
        "35",
        "--p-bits",
        "3",
        "--q-bits",
        "3",
        "-o",
        system.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "generate: {}", stderr_of(&out));
    assert!(system.exists());

    let out = run(&[
        "elm",
        system.to_str().unwrap(),
        "--scheme",
        "ceil",
        "-o",
        artifact.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "elm: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(
        text.contains("preservation: verified"),
        "no preservation verdict:\n{text}"
    );
    assert!(artifact.exists());

    let out = run(&["spectrum", artifact.to_str().unwrap()]);
    assert!(out.status.success(), "spectrum: {}", stderr_of(&out));
    let text = stdout_of(&out);
    // 35 = 5·7 both ways round: exactly two ground states.
    assert!(text.contains("ground states (2 of 2)"), "unexpected spectrum:\n{text}");
    assert!(text.contains("E_gap"));

    let out = run(&["bound", system.to_str().unwrap(), "--epsilon", "0.1"]);
    assert!(out.status.success(), "bound: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("loose_bound:"), "no loose bound:\n{text}");
}

#[test]
fn usage_errors_exit_with_code_1() {
    let out = run(&["generate", "8", "--p-bits", "2", "--q-bits", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("error:"));

    let out = run(&["spectrum", "/no/such/file.eqs"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn the_variable_cap_exits_with_code_3() {
    let shipped = shipped_data_dir().join("841.eqs");
    let out = run(&["spectrum", shipped.to_str().unwrap(), "--max-vars", "8"]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr_of(&out));
}

#[test]
fn broken_deductions_exit_with_code_2_and_name_a_witness() {
    let scratch = Scratch::new("broken");
    let system = scratch.write("toy.eqs", datasets::SYSTEM_TOY_TEXT);
    // x3 = 1 does not hold at the ground state 100, so the penalty
    // reshapes the ground set and verification must fail loudly.
    let deductions = scratch.write("bad.deductions", "imply: x1 -> x3=1\n");
    let artifact = scratch.path("broken.json");

    let out = run(&[
        "elm",
        system.to_str().unwrap(),
        "--deductions",
        deductions.to_str().unwrap(),
        "-o",
        artifact.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr_of(&out));
    assert!(stderr_of(&out).contains("witness"), "stderr: {}", stderr_of(&out));
    assert!(stderr_of(&out).contains("101"));
    // The artifact is still written so the failure can be inspected.
    assert!(artifact.exists());
}

#[test]
fn reproduce_tables_passes_on_the_shipped_data() {
    let data = shipped_data_dir();
    let out = run(&["reproduce-tables", "--data-dir", data.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("all match"), "summary missing:\n{text}");
    assert!(text.contains("16 variables"), "size note missing:\n{text}");
}

#[test]
fn tampered_reference_data_exits_with_code_2_and_a_cell_diff() {
    let scratch = Scratch::new("tamper");
    let shipped = shipped_data_dir();
    for name in ["841.eqs", "841.deductions"] {
        fs::copy(shipped.join(name), scratch.path(name)).expect("copy shipped data");
    }
    let original = fs::read_to_string(shipped.join("551.eqs")).expect("shipped 551");
    let tampered = original.replacen("p1 + q1 = 1", "p1 + q1 = 0", 1);
    assert_ne!(original, tampered, "tamper target line missing");
    scratch.write("551.eqs", &tampered);

    let out = run(&["reproduce-tables", "--data-dir", scratch.0.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("MISMATCH"), "no cell diff:\n{text}");
    assert!(stderr_of(&out).contains("differ"));
}

#[test]
fn identical_invocations_emit_identical_bytes() {
    let scratch = Scratch::new("ident");
    let system = scratch.write("toy.eqs", datasets::SYSTEM_TOY_TEXT);
    let args = ["spectrum", system.to_str().unwrap(), "--workers", "4"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let args = ["bound", system.to_str().unwrap(), "--epsilon", "0.25"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn the_worker_env_var_sets_the_default_and_the_flag_overrides_it() {
    let scratch = Scratch::new("workers");
    let system = scratch.write("toy.eqs", datasets::SYSTEM_TOY_TEXT);

    let out = elmkit(&["spectrum", system.to_str().unwrap()])
        .env("ELMKIT_WORKERS", "3")
        .output()
        .expect("binary spawns");
    assert!(stdout_of(&out).contains("# workers = 3"));

    let out = elmkit(&["spectrum", system.to_str().unwrap(), "--workers", "5"])
        .env("ELMKIT_WORKERS", "3")
        .output()
        .expect("binary spawns");
    assert!(stdout_of(&out).contains("# workers = 5"));
}

#[test]
fn json_output_carries_the_resolved_config() {
    let scratch = Scratch::new("json");
    let system = scratch.write("toy.eqs", datasets::SYSTEM_TOY_TEXT);
    let out = run(&["spectrum", system.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());

    let value: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    let config = value.get("config").expect("config object");
    assert_eq!(config["subcommand"], "spectrum");
    assert_eq!(config["format"], "json");
    assert!(config.get("workers").is_some());
    assert!(config.get("max-vars").is_some());
    let report = value.get("report").expect("report object");
    assert_eq!(report["levels"][0]["energy"], 0);
    assert_eq!(report["total_ground_states"], 1);
}
