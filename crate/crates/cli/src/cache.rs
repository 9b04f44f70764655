//! Content-addressed on-disk cache of threshold-set slices.
//!
//! An entry is `<sha256 of the canonical query JSON>.json` holding
//! `{"query": …, "set": …}`. Writes go to a temp file in the same directory
//! and are renamed into place, so readers never see a partial entry.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use lctkit::{Rational, ThresholdSet};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use sha2::{Digest, Sha256};

pub const ENV_VAR: &str = "LCTKIT_CACHE";

/// Bumped whenever the meaning of a stored set could change.
const SCHEMA: u32 = 1;

/// Everything an enumeration result depends on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    pub schema: u32,
    pub op: String,
    pub set: Vec<Rational>,
    pub empty_sum: bool,
    pub targets: Vec<Rational>,
    pub above: Rational,
    pub allow_k_zero: bool,
}

impl Query {
    pub fn new(
        op: &str,
        set: Vec<Rational>,
        empty_sum: bool,
        targets: Vec<Rational>,
        above: Rational,
        allow_k_zero: bool,
    ) -> Self {
        Query {
            schema: SCHEMA,
            op: op.to_string(),
            set,
            empty_sum,
            targets,
            above,
            allow_k_zero,
        }
    }

    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("query serialisation cannot fail")
    }

    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }
}

#[derive(Serialize)]
struct EntryOut<'a> {
    query: &'a Query,
    set: &'a ThresholdSet,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryInfo {
    pub fingerprint: String,
    pub query: Option<Query>,
    pub bytes: u64,
}

/// `--cache-dir`, then `$LCTKIT_CACHE`, then the platform cache directory.
pub fn resolve_dir(flag: Option<&Path>) -> Option<PathBuf> {
    if let Some(p) = flag {
        return Some(p.to_path_buf());
    }
    match std::env::var_os(ENV_VAR) {
        Some(v) if !v.is_empty() => Some(PathBuf::from(v)),
        _ => dirs::cache_dir().map(|d| d.join("lctkit")),
    }
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: PathBuf) -> Self {
        Cache { dir }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, query: &Query) -> PathBuf {
        self.dir.join(format!("{}.json", query.fingerprint()))
    }

    /// A stored set for `query`. Unreadable or inconsistent entries are
    /// reported on `warn` and treated as misses.
    pub fn get(&self, query: &Query, warn: &mut dyn Write) -> Option<ThresholdSet> {
        let path = self.path_for(query);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return None,
            Err(e) => {
                let _ = writeln!(
                    warn,
                    "warning: cannot read cache entry {}: {e}",
                    path.display()
                );
                return None;
            }
        };
        match decode(query, &text) {
            Ok(set) => Some(set),
            Err(why) => {
                let _ = writeln!(
                    warn,
                    "warning: ignoring corrupt cache entry {}: {why}; recomputing",
                    path.display()
                );
                None
            }
        }
    }

    pub fn put(&self, query: &Query, set: &ThresholdSet) -> io::Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(query);
        let body = serde_json::to_string(&EntryOut { query, set }).map_err(io::Error::other)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(body.as_bytes())?;
        tmp.write_all(b"\n")?;
        tmp.as_file().sync_all()?;
        tmp.persist(&path).map_err(|e| e.error)?;
        Ok(path)
    }

    pub fn entries(&self) -> io::Result<Vec<EntryInfo>> {
        let mut out = Vec::new();
        let rd = match fs::read_dir(&self.dir) {
            Ok(rd) => rd,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(out),
            Err(e) => return Err(e),
        };
        for entry in rd {
            let entry = entry?;
            let path = entry.path();
            let Some(fingerprint) = entry_name(&path) else {
                continue;
            };
            let query = fs::read_to_string(&path)
                .ok()
                .and_then(|t| serde_json::from_str::<EntryIn>(&t).ok().map(|e| e.query));
            out.push(EntryInfo {
                fingerprint,
                query,
                bytes: entry.metadata()?.len(),
            });
        }
        out.sort_by(|a, b| a.fingerprint.cmp(&b.fingerprint));
        Ok(out)
    }

    /// Removes every entry; returns how many were removed.
    pub fn clear(&self) -> io::Result<usize> {
        let entries = self.entries()?;
        for e in &entries {
            fs::remove_file(self.dir.join(format!("{}.json", e.fingerprint)))?;
        }
        Ok(entries.len())
    }
}

fn entry_name(path: &Path) -> Option<String> {
    let stem = path.file_stem()?.to_str()?;
    let is_entry = path.extension()? == "json"
        && stem.len() == 64
        && stem.bytes().all(|b| b.is_ascii_hexdigit());
    is_entry.then(|| stem.to_string())
}

#[derive(Deserialize)]
struct EntryIn<'a> {
    query: Query,
    #[serde(borrow)]
    set: &'a RawValue,
}

fn decode(query: &Query, text: &str) -> Result<ThresholdSet, String> {
    let entry: EntryIn = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if &entry.query != query {
        return Err("stored query does not match its fingerprint".into());
    }
    let raw = entry.set.get();
    let set = ThresholdSet::from_json(raw).map_err(|e| e.to_string())?;
    if set.to_canonical_json() != raw {
        return Err("stored set is not in canonical form".into());
    }
    Ok(set)
}
