//! Artifact emission: stdout by default, atomic file replacement with
//! `--out`.

use std::io::Write;
use std::path::Path;

use screwpdm_core::error::{Error, Result};

/// Write an artifact to stdout or atomically to a file (temp file in the
/// same directory, then rename).
pub fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::Config(format!("cannot write to stdout: {e}")))
        }
        Some(path) => {
            let tmp = path.with_extension(format!("tmp{}", std::process::id()));
            std::fs::write(&tmp, content)
                .and_then(|_| std::fs::rename(&tmp, path))
                .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
        }
    }
}

/// Prefix every line of the resolved config as a `# ` comment block ahead
/// of a CSV body, so the artifact carries its own reproduction recipe.
pub fn csv_with_config(config_toml: &str, body: &str) -> String {
    let mut out = String::new();
    for line in config_toml.lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(body);
    out
}
