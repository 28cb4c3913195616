//! On-disk store for operator matrices.
//!
//! Entries are keyed by `(m, modulus, operator, basis order)`. Each file
//! records the key hash and a digest of the payload, so a stale or damaged
//! file is detected and recomputed rather than trusted.

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

use suzuki_core::cohomology::Cohomology;
use suzuki_core::SemilinearOp;

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    digest: String,
    op: SemilinearOp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit,
    Miss,
    Corrupt,
    Disabled,
}

pub struct Cache {
    dir: Option<PathBuf>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn payload_digest(op: &SemilinearOp) -> Result<String> {
    Ok(sha256_hex(serde_json::to_string(op)?.as_bytes()))
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    fn key(coh: &Cohomology, operator: &str) -> String {
        let p = coh.params();
        let text = format!("{}|{:#x}|{}|{}", p.m, p.field.modulus(), operator, coh.basis_labels().join(","));
        sha256_hex(text.as_bytes())
    }

    fn path(dir: &Path, coh: &Cohomology, operator: &str) -> PathBuf {
        let p = coh.params();
        dir.join(format!("m{}-{:x}-{}.json", p.m, p.field.modulus(), operator))
    }

    fn load(path: &Path, key: &str) -> Lookup {
        let Ok(text) = fs::read_to_string(path) else {
            return Lookup::Miss;
        };
        match serde_json::from_str::<Entry>(&text) {
            Ok(e) if e.key == key && payload_digest(&e.op).is_ok_and(|d| d == e.digest) => Lookup::Hit,
            _ => Lookup::Corrupt,
        }
    }

    /// The operator from the store, computing and saving it when absent or
    /// invalid.
    pub fn get_or_compute(
        &self,
        coh: &Cohomology,
        operator: &str,
        compute: impl FnOnce() -> suzuki_core::Result<SemilinearOp>,
    ) -> Result<(SemilinearOp, Lookup)> {
        let Some(dir) = &self.dir else {
            return Ok((compute()?, Lookup::Disabled));
        };
        let key = Cache::key(coh, operator);
        let path = Cache::path(dir, coh, operator);
        let state = Cache::load(&path, &key);
        if state == Lookup::Hit {
            let entry: Entry = serde_json::from_str(&fs::read_to_string(&path)?)?;
            return Ok((entry.op, Lookup::Hit));
        }
        let op = compute()?;
        fs::create_dir_all(dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
        let entry = Entry {
            key,
            digest: payload_digest(&op)?,
            op,
        };
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_string(&entry)?)?;
        fs::rename(&tmp, &path)?;
        Ok((entry.op, state))
    }
}
