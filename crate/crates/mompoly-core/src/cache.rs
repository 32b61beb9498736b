//! Append-only count cache: line-delimited records keyed by
//! (group, k, q, N, strict), trusted only when the header's engine version
//! matches the running engine. Corrupt or mismatched content is ignored with
//! a warning, never trusted.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;

use crate::types::{Error, FamilySpec, Group, Result};
use crate::ENGINE_VERSION;

const MAGIC: &str = "#mompoly-cache v1";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CacheKey {
    pub group: Group,
    pub k: u32,
    pub q: u32,
    pub n: i64,
    pub strict: bool,
}

impl CacheKey {
    pub fn new(spec: &FamilySpec, n: i64, strict: bool) -> Self {
        CacheKey { group: spec.group, k: spec.k, q: spec.q, n, strict }
    }
}

/// In-memory view of a cache file. Warnings collected while loading are kept
/// for the caller to surface.
#[derive(Debug)]
pub struct CountCache {
    path: PathBuf,
    entries: HashMap<CacheKey, BigInt>,
    /// Whether the on-disk file already has a valid current-version header.
    has_header: bool,
    pub warnings: Vec<String>,
}

impl CountCache {
    /// Load a cache file; a missing file yields an empty cache.
    pub fn load(path: &Path) -> Result<Self> {
        let mut cache = CountCache {
            path: path.to_path_buf(),
            entries: HashMap::new(),
            has_header: false,
            warnings: Vec::new(),
        };
        let file = match File::open(path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(Error::Input(format!("cannot read cache {}: {e}", path.display()))),
        };
        let mut lines = BufReader::new(file).lines();
        match lines.next() {
            None => return Ok(cache),
            Some(Ok(header)) => {
                let expected = format!("{MAGIC} engine={ENGINE_VERSION}");
                if header != expected {
                    cache.warnings.push(format!(
                        "ignoring cache {}: header {header:?} does not match {expected:?}",
                        path.display()
                    ));
                    return Ok(cache);
                }
                cache.has_header = true;
            }
            Some(Err(e)) => {
                return Err(Error::Input(format!("cannot read cache {}: {e}", path.display())))
            }
        }
        for (lineno, line) in lines.enumerate() {
            let line = line
                .map_err(|e| Error::Input(format!("cannot read cache {}: {e}", path.display())))?;
            if line.trim().is_empty() {
                continue;
            }
            match parse_record(&line) {
                Some((key, count)) => {
                    cache.entries.insert(key, count);
                }
                None => cache.warnings.push(format!(
                    "ignoring corrupt cache record at {}:{}",
                    path.display(),
                    lineno + 2
                )),
            }
        }
        Ok(cache)
    }

    pub fn get(&self, key: &CacheKey) -> Option<&BigInt> {
        self.entries.get(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Record a count and append it to the file (writing the header first if
    /// the file is new or was version-mismatched).
    pub fn put(&mut self, key: CacheKey, count: BigInt) -> Result<()> {
        let io_err =
            |e: std::io::Error| Error::Input(format!("cannot write cache {}: {e}", self.path.display()));
        if !self.has_header {
            // a mismatched or corrupt file is superseded wholesale
            let mut f = File::create(&self.path).map_err(io_err)?;
            writeln!(f, "{MAGIC} engine={ENGINE_VERSION}").map_err(io_err)?;
            self.has_header = true;
        }
        let mut f =
            OpenOptions::new().append(true).open(&self.path).map_err(io_err)?;
        writeln!(
            f,
            "{},{},{},{},{},{}",
            key.group.tag(),
            key.k,
            key.q,
            key.n,
            u8::from(key.strict),
            count
        )
        .map_err(io_err)?;
        self.entries.insert(key, count);
        Ok(())
    }
}

fn parse_record(line: &str) -> Option<(CacheKey, BigInt)> {
    let mut parts = line.split(',');
    let group = Group::from_tag(parts.next()?).ok()?;
    let k = u32::from_str(parts.next()?).ok()?;
    let q = u32::from_str(parts.next()?).ok()?;
    let n = i64::from_str(parts.next()?).ok()?;
    let strict = match parts.next()? {
        "0" => false,
        "1" => true,
        _ => return None,
    };
    let count = BigInt::from_str(parts.next()?).ok()?;
    if parts.next().is_some() || k < 1 || q < 1 || n < 0 {
        return None;
    }
    Some((CacheKey { group, k, q, n, strict }, count))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn temp_path(name: &str) -> PathBuf {
        let mut p = std::env::temp_dir();
        p.push(format!("mompoly-cache-test-{}-{name}", std::process::id()));
        p
    }

    #[test]
    fn round_trip() {
        let path = temp_path("roundtrip");
        let _ = std::fs::remove_file(&path);
        let spec = FamilySpec::unitary(2, 1);
        let mut cache = CountCache::load(&path).unwrap();
        assert!(cache.is_empty());
        cache.put(CacheKey::new(&spec, 3, false), BigInt::from(20)).unwrap();
        cache.put(CacheKey::new(&spec, 4, true), BigInt::from(1)).unwrap();

        let reloaded = CountCache::load(&path).unwrap();
        assert!(reloaded.warnings.is_empty());
        assert_eq!(reloaded.len(), 2);
        assert_eq!(reloaded.get(&CacheKey::new(&spec, 3, false)), Some(&BigInt::from(20)));
        assert_eq!(reloaded.get(&CacheKey::new(&spec, 3, true)), None);
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn version_mismatch_is_ignored_with_warning() {
        let path = temp_path("mismatch");
        std::fs::write(&path, "#mompoly-cache v1 engine=0.0.0-other\nu,2,1,3,0,999\n").unwrap();
        let cache = CountCache::load(&path).unwrap();
        assert!(cache.is_empty());
        assert_eq!(cache.warnings.len(), 1);
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn corrupt_records_are_skipped() {
        let path = temp_path("corrupt");
        std::fs::write(
            &path,
            format!("{MAGIC} engine={ENGINE_VERSION}\nu,2,1,3,0,20\nnot,a,record\nu,2,1,-1,0,5\n"),
        )
        .unwrap();
        let cache = CountCache::load(&path).unwrap();
        assert_eq!(cache.len(), 1);
        assert_eq!(cache.warnings.len(), 2);
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn missing_file_is_empty() {
        let path = temp_path("missing-nonexistent");
        let _ = std::fs::remove_file(&path);
        let cache = CountCache::load(&path).unwrap();
        assert!(cache.is_empty());
        assert!(cache.warnings.is_empty());
    }
}
