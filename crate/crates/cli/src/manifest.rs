use num_complex::Complex64;
use serde::{Serialize, Serializer};
use std::path::{Path, PathBuf};

use crate::{Cli, Failure};

pub fn complex<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{:?}{:+?}i", z.re, z.im))
}

/// Everything needed to regenerate an output file.
#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub subcommand: &'static str,
    pub argv: Vec<String>,
    pub flags: &'a Cli,
    pub seed: u64,
    pub library_version: &'static str,
    pub grid: Option<String>,
    pub outputs: Vec<String>,
}

impl<'a> RunManifest<'a> {
    pub fn new(cli: &'a Cli, subcommand: &'static str, grid: Option<String>) -> Self {
        // the program name is dropped so the manifest does not depend on the install path
        RunManifest {
            subcommand,
            argv: std::env::args().skip(1).collect(),
            flags: cli,
            seed: cli.common.seed,
            library_version: dirac_carousel::VERSION,
            grid,
            outputs: Vec::new(),
        }
    }
}

pub fn manifest_path(out: &Path) -> PathBuf {
    sibling(out, "manifest.json")
}

/// `out` with `.suffix` appended to its file name.
pub fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".");
    name.push(suffix);
    out.with_file_name(name)
}

/// Writes the primary output (or prints it) together with any side files,
/// then the manifest next to the primary output.
pub fn emit(cli: &Cli, mut m: RunManifest, body: &str, side: &[(PathBuf, String)]) -> Result<(), Failure> {
    for (p, text) in side {
        std::fs::write(p, text)?;
        m.outputs.push(p.display().to_string());
    }
    match &cli.common.out {
        Some(out) => {
            std::fs::write(out, body)?;
            m.outputs.insert(0, out.display().to_string());
            let text = serde_json::to_string_pretty(&m).map_err(|e| Failure::Usage(e.to_string()))?;
            std::fs::write(manifest_path(out), text + "\n")?;
        }
        None => print!("{body}"),
    }
    Ok(())
}
