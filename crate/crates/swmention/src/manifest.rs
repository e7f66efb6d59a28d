//! Per-stage manifests: input digests, the configuration in force and row
//! counts, so a re-run can be checked byte for byte.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::PipelineConfig;
use crate::error::{IoContext, Result};
use crate::io::write_file;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub stage: String,
    pub version: String,
    pub config_sha256: String,
    pub config: String,
    pub inputs: BTreeMap<String, InputDigest>,
    pub outputs: BTreeMap<String, InputDigest>,
    pub counts: BTreeMap<String, u64>,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// SHA-256 of a file, or of a directory as the sorted sequence of
/// `(relative path, file digest)` entries.
pub fn digest_path(path: &Path) -> Result<InputDigest> {
    let mut h = Sha256::new();
    let mut bytes = 0;
    if path.is_dir() {
        let mut files = Vec::new();
        collect_files(path, path, &mut files).at(path)?;
        files.sort();
        for rel in files {
            let d = digest_path(&path.join(&rel))?;
            h.update(rel.as_bytes());
            h.update([0]);
            h.update(d.sha256.as_bytes());
            bytes += d.bytes;
        }
    } else {
        let mut f = File::open(path).at(path)?;
        bytes = io::copy(&mut f, &mut HashWriter(&mut h)).at(path)?;
    }
    Ok(InputDigest { path: path.display().to_string(), sha256: hex(&h.finalize()), bytes })
}

fn collect_files(root: &Path, dir: &Path, out: &mut Vec<String>) -> io::Result<()> {
    for e in std::fs::read_dir(dir)? {
        let p = e?.path();
        if p.is_dir() {
            collect_files(root, &p, out)?;
        } else {
            out.push(p.strip_prefix(root).unwrap_or(&p).to_string_lossy().replace('\\', "/"));
        }
    }
    Ok(())
}

struct HashWriter<'a>(&'a mut Sha256);

impl Write for HashWriter<'_> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        self.0.update(buf);
        Ok(buf.len())
    }

    fn flush(&mut self) -> io::Result<()> {
        Ok(())
    }
}

impl Manifest {
    pub fn new(stage: &str, config: &PipelineConfig) -> Self {
        let text = config.to_toml();
        Manifest {
            stage: stage.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config_sha256: hex(&Sha256::digest(text.as_bytes())),
            config: text,
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            counts: BTreeMap::new(),
        }
    }

    pub fn input(&mut self, name: &str, path: &Path) -> Result<()> {
        self.inputs.insert(name.to_string(), digest_path(path)?);
        Ok(())
    }

    pub fn output(&mut self, name: &str, path: &Path) -> Result<()> {
        self.outputs.insert(name.to_string(), digest_path(path)?);
        Ok(())
    }

    pub fn count(&mut self, name: &str, n: usize) {
        self.counts.insert(name.to_string(), n as u64);
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self).expect("manifest always serializes");
        write_file(path, |w| writeln!(w, "{json}"))
    }
}
