use std::process::Command;

fn main() {
    let id = std::env::var("BERGMAN_BUILD_ID").ok().or_else(|| {
        Command::new("git")
            .args(["describe", "--always", "--dirty", "--tags"])
            .output()
            .ok()
            .filter(|o| o.status.success())
            .and_then(|o| String::from_utf8(o.stdout).ok())
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
    });
    let id = id.unwrap_or_else(|| "unknown".to_string());
    println!("cargo:rustc-env=BERGMAN_BUILD_ID={}-{id}", env!("CARGO_PKG_VERSION"));
    println!("cargo:rerun-if-env-changed=BERGMAN_BUILD_ID");
    println!("cargo:rerun-if-changed=../../.git/HEAD");
}
