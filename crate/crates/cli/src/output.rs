//! Output envelopes and atomic file writes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

/// Common metadata recorded in every JSON artifact.
pub struct Envelope {
    pub command: String,
    pub mode: &'static str,
    pub seed: u64,
    pub tol: f64,
    pub inputs: Map<String, Value>,
}

impl Envelope {
    pub fn new(command: &str, mode: &'static str, seed: u64, tol: f64) -> Self {
        Envelope {
            command: command.to_string(),
            mode,
            seed,
            tol,
            inputs: Map::new(),
        }
    }

    /// Records the digest of an input artifact.
    pub fn input(&mut self, name: &str, digest: String) {
        self.inputs.insert(name.to_string(), Value::String(digest));
    }

    pub fn wrap(&self, result: Value) -> Value {
        json!({
            "command": self.command,
            "mode": self.mode,
            "seed": self.seed,
            "tol": self.tol,
            "inputs": self.inputs,
            "result": result,
        })
    }
}

/// Writes via a temporary file in the same directory and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp: PathBuf = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

/// Sink for a command's artifacts: a directory, or stdout for the main JSON.
pub struct Sink {
    pub dir: Option<PathBuf>,
}

impl Sink {
    /// The main JSON document goes to `<dir>/<name>` or stdout.
    pub fn main(&self, name: &str, v: &Value) -> std::io::Result<()> {
        match &self.dir {
            Some(d) => write_atomic(&d.join(name), pretty(v).as_bytes()),
            None => {
                print!("{}", pretty(v));
                Ok(())
            }
        }
    }

    /// Side artifacts (CSV, SVG) are only written with an output directory,
    /// except CSV, which goes to stdout otherwise.
    pub fn side(&self, name: &str, contents: &str, to_stdout: bool) -> std::io::Result<()> {
        match &self.dir {
            Some(d) => write_atomic(&d.join(name), contents.as_bytes()),
            None if to_stdout => {
                print!("{contents}");
                Ok(())
            }
            None => Ok(()),
        }
    }
}
