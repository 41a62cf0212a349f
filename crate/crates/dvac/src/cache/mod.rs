//! On-disk store for assembled mode operators.
//!
//! Operator assembly is the expensive half of an exact verification run, and
//! the wedge matrices it produces depend only on (sector, cutoff, mode,
//! backend, expansion bound) — so they are stored once, keyed by a content
//! hash of exactly those fields, and reused across runs. Two hard rules:
//!
//! * a cache hit must be **bit-identical** to recomputation — guaranteed by
//!   storing the exact coefficients losslessly (rationals as strings) and
//!   never caching from the numeric backend, whose rounding depends on the
//!   order of assembly;
//! * a stale or foreign file is **refused, never silently recomputed
//!   around**: a format-version mismatch or a corrupt file is an error the
//!   caller sees, because quietly ignoring it would hide exactly the kind of
//!   environment problem a verification artifact exists to expose.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::coeff::XLaurent;
use crate::fock::GradedOperator;
use crate::CACHE_FORMAT_VERSION;

/// Everything a stored operator's identity depends on. Hashed (together
/// with the format version) into the file name; also embedded in the file
/// and compared on load, so a hash collision cannot smuggle in the wrong
/// operator.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CacheKey {
    /// Operator family: "wedge" for the bilinear part of a current mode.
    pub kind: String,
    pub sector: String,
    pub lambda: i64,
    /// Doubled mode index, so half-integer modes stay integral.
    pub mode2: i64,
    pub backend: String,
    /// Expansion bound the owning bank was configured with.
    pub x_cap: i64,
}

impl CacheKey {
    pub fn digest(&self) -> String {
        let payload = serde_json::to_vec(&(CACHE_FORMAT_VERSION, self))
            .expect("cache key serialization cannot fail");
        let hash = Sha256::digest(&payload);
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn file_name(&self) -> String {
        format!(
            "{}-{}-L{}-m{}-{}.json",
            self.kind,
            self.sector.to_lowercase(),
            self.lambda,
            self.mode2,
            &self.digest()[..16]
        )
    }
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format_version: u32,
    library_version: String,
    key: CacheKey,
    rows: usize,
    cols: usize,
    degree2: i64,
    columns: Vec<Vec<(usize, XLaurent)>>,
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error(
        "cache file {path} has format version {found}, this build expects \
         {expected}; delete the file or point --cache-dir elsewhere"
    )]
    Version { path: String, found: u32, expected: u32 },
    #[error("cache file {path} is corrupt: {detail}")]
    Corrupt { path: String, detail: String },
}

/// A directory of cached operators. Creating the handle creates the
/// directory.
#[derive(Debug)]
pub struct OperatorCache {
    dir: PathBuf,
}

impl OperatorCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self, CacheError> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(OperatorCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(key.file_name())
    }

    /// `Ok(None)` means "not cached"; every other irregularity is an error.
    pub fn load(&self, key: &CacheKey) -> Result<Option<GradedOperator<XLaurent>>, CacheError> {
        let path = self.path_for(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let shown = path.display().to_string();
        let corrupt = |detail: String| CacheError::Corrupt { path: shown.clone(), detail };
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| corrupt(e.to_string()))?;
        let found = value
            .get("format_version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| corrupt("missing format_version".into()))? as u32;
        if found != CACHE_FORMAT_VERSION {
            return Err(CacheError::Version {
                path: shown,
                found,
                expected: CACHE_FORMAT_VERSION,
            });
        }
        let file: CacheFile =
            serde_json::from_value(value).map_err(|e| corrupt(e.to_string()))?;
        if &file.key != key {
            return Err(corrupt("stored key does not match the requested one".into()));
        }
        if file.columns.len() != file.cols {
            return Err(corrupt("column count does not match header".into()));
        }
        let mut op = GradedOperator::zero(file.rows, file.cols, file.degree2);
        for (j, col) in file.columns.into_iter().enumerate() {
            for (i, c) in col {
                if i >= file.rows {
                    return Err(corrupt(format!("row index {i} out of range")));
                }
                op.accumulate(i, j, c);
            }
        }
        Ok(Some(op))
    }

    pub fn store(
        &self,
        key: &CacheKey,
        op: &GradedOperator<XLaurent>,
    ) -> Result<PathBuf, CacheError> {
        let file = CacheFile {
            format_version: CACHE_FORMAT_VERSION,
            library_version: crate::VERSION.to_string(),
            key: key.clone(),
            rows: op.rows,
            cols: op.cols,
            degree2: op.degree2,
            columns: (0..op.cols).map(|j| op.column(j).to_vec()).collect(),
        };
        let bytes = serde_json::to_vec(&file).map_err(|e| CacheError::Corrupt {
            path: self.path_for(key).display().to_string(),
            detail: e.to_string(),
        })?;
        let path = self.path_for(key);
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, &bytes)?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// Load on hit, build-and-store on miss. The flag reports which one
    /// happened.
    pub fn get_or_build(
        &self,
        key: &CacheKey,
        build: impl FnOnce() -> GradedOperator<XLaurent>,
    ) -> Result<(GradedOperator<XLaurent>, bool), CacheError> {
        if let Some(op) = self.load(key)? {
            return Ok((op, true));
        }
        let op = build();
        self.store(key, &op)?;
        Ok((op, false))
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use crate::dva::CurrentBank;
    use crate::fock::{FockSpace, Sector};

    use super::*;

    fn sample_key() -> CacheKey {
        CacheKey {
            kind: "wedge".into(),
            sector: "NS".into(),
            lambda: 4,
            mode2: 2,
            backend: "exact".into(),
            x_cap: 8,
        }
    }

    fn sample_op() -> GradedOperator<XLaurent> {
        let space = Arc::new(FockSpace::enumerate(Sector::NS, 4));
        let bank = CurrentBank::<XLaurent>::new((), space, 8);
        (*bank.wedge(1)).clone()
    }

    #[test]
    fn round_trip_is_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        let cache = OperatorCache::new(dir.path()).unwrap();
        let key = sample_key();
        let op = sample_op();
        let path = cache.store(&key, &op).unwrap();
        let back = cache.load(&key).unwrap().expect("stored operator loads");
        assert_eq!(op, back);
        // serializing the loaded copy reproduces the file byte for byte
        let other = OperatorCache::new(dir.path().join("other")).unwrap();
        let path2 = other.store(&key, &back).unwrap();
        assert_eq!(fs::read(&path).unwrap(), fs::read(&path2).unwrap());
    }

    #[test]
    fn missing_entry_is_a_miss_not_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let cache = OperatorCache::new(dir.path()).unwrap();
        assert!(cache.load(&sample_key()).unwrap().is_none());
    }

    #[test]
    fn version_mismatch_is_refused_not_reused() {
        let dir = tempfile::tempdir().unwrap();
        let cache = OperatorCache::new(dir.path()).unwrap();
        let key = sample_key();
        cache.store(&key, &sample_op()).unwrap();
        let path = cache.path_for(&key);
        let mut value: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        value["format_version"] = serde_json::json!(CACHE_FORMAT_VERSION + 1);
        fs::write(&path, serde_json::to_vec(&value).unwrap()).unwrap();
        match cache.load(&key) {
            Err(CacheError::Version { found, expected, .. }) => {
                assert_eq!(found, CACHE_FORMAT_VERSION + 1);
                assert_eq!(expected, CACHE_FORMAT_VERSION);
            }
            other => panic!("expected a version refusal, got {other:?}"),
        }
    }

    #[test]
    fn corrupt_file_is_an_error_not_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = OperatorCache::new(dir.path()).unwrap();
        let key = sample_key();
        fs::write(cache.path_for(&key), b"not json at all").unwrap();
        assert!(matches!(cache.load(&key), Err(CacheError::Corrupt { .. })));
    }

    #[test]
    fn wrong_stored_key_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = OperatorCache::new(dir.path()).unwrap();
        let key = sample_key();
        cache.store(&key, &sample_op()).unwrap();
        let mut other = key.clone();
        other.mode2 = 4;
        // plant the mode-2 file under the mode-4 name
        fs::copy(cache.path_for(&key), cache.path_for(&other)).unwrap();
        assert!(matches!(cache.load(&other), Err(CacheError::Corrupt { .. })));
    }

    #[test]
    fn preloaded_banks_reproduce_cold_assembly_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let cache = OperatorCache::new(dir.path()).unwrap();
        let space = Arc::new(FockSpace::enumerate(Sector::NS, 4));
        let cold = CurrentBank::<XLaurent>::new((), space.clone(), 8);
        for k in -2..=2 {
            cold.wedge(k);
        }
        assert_eq!(cold.persist_wedges(&cache).unwrap(), 5);
        let warm = CurrentBank::<XLaurent>::new((), space, 8);
        assert_eq!(warm.preload_wedges(&cache, -2..=2).unwrap(), 5);
        for k in -2..=2 {
            assert_eq!(cold.wedge(k), warm.wedge(k), "wedge {k}");
        }
        // a perturbed bank must not touch the store in either direction
        let faulted = CurrentBank::<XLaurent>::new(
            (),
            Arc::new(FockSpace::enumerate(Sector::NS, 4)),
            8,
        )
        .with_contraction_bump(crate::fock::HalfInt::from_doubled(1), 6);
        assert_eq!(faulted.preload_wedges(&cache, -2..=2).unwrap(), 0);
        assert_eq!(faulted.persist_wedges(&cache).unwrap(), 0);
    }

    #[test]
    fn get_or_build_builds_once() {
        let dir = tempfile::tempdir().unwrap();
        let cache = OperatorCache::new(dir.path()).unwrap();
        let key = sample_key();
        let mut builds = 0;
        for _ in 0..3 {
            let (op, _) = cache
                .get_or_build(&key, || {
                    builds += 1;
                    sample_op()
                })
                .unwrap();
            assert_eq!(op, sample_op());
        }
        assert_eq!(builds, 1);
    }
}
