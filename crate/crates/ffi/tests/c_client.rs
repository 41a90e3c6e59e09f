//! Compiles a C program against the generated header and the static library.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

/// `target/<profile>`, found from this test binary's location in `deps/`.
fn profile_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_client_links_and_runs() {
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = profile_dir().join("libdebtscope_ffi.a");
    assert!(lib.is_file(), "static library not built at {}", lib.display());

    let work = tempfile::tempdir().unwrap();
    let exe = work.path().join("client");
    let out = Command::new(std::env::var("CC").unwrap_or_else(|_| "cc".into()))
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(crate_dir.join("tests/c/client.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .output()
        .expect("C compiler available");
    assert!(out.status.success(), "cc failed:\n{}", String::from_utf8_lossy(&out.stderr));

    let project = work.path().join("project");
    fs::create_dir(&project).unwrap();
    fs::write(project.join("Keys.java"), "class Keys {\n    String apiSecret = \"s3cr3t\";\n}\n").unwrap();
    let gate = work.path().join("gate.toml");
    fs::write(&gate, "[[condition]]\nmetric = \"blocker_issues\"\nop = \"<=\"\nbound = 0\n").unwrap();

    let run = Command::new(&exe).arg(&project).arg(&gate).output().unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert_eq!(run.status.code(), Some(2), "{stdout}{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(stdout.trim(), "run=1 blockers=1 effort=2d 6h gate=2");
}
