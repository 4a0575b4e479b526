//! On-disk cache for enumerations. Each entry is a JSON file keyed by kind,
//! parameters, cap and enumerator version, and stores the SHA-256 of its
//! payload; an entry that fails to parse or hash is recomputed and
//! overwritten.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Bumped whenever an enumerator's output order or content changes.
pub const ENUMERATOR_VERSION: u32 = 1;

pub const CACHE_DIR_ENV: &str = "MONOIDAL_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub kind: String,
    pub params: String,
    pub cap: u64,
    pub version: u32,
}

impl CacheKey {
    pub fn new(kind: &str, params: impl Into<String>, cap: u64) -> Self {
        CacheKey {
            kind: kind.into(),
            params: params.into(),
            cap,
            version: ENUMERATOR_VERSION,
        }
    }

    fn file_name(&self) -> String {
        let clean = |s: &str| -> String {
            s.chars()
                .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
                .collect()
        };
        format!(
            "{}-{}-cap{}-v{}.json",
            clean(&self.kind),
            clean(&self.params),
            self.cap,
            self.version
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CacheStatus {
    Disabled,
    Hit,
    Miss,
    /// The stored entry was corrupt and has been replaced.
    Recomputed,
}

#[derive(Serialize, Deserialize)]
struct Entry<T> {
    key: CacheKey,
    sha256: String,
    payload: T,
}

pub fn payload_hash<T: Serialize>(payload: &T) -> Result<String> {
    Ok(hex::encode(Sha256::digest(serde_json::to_vec(payload)?)))
}

#[derive(Clone, Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: Some(dir.into()) }
    }

    /// Uses `MONOIDAL_CACHE_DIR` when set.
    pub fn from_env() -> Self {
        std::env::var_os(CACHE_DIR_ENV).map_or_else(Self::disabled, Self::at)
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn path_for(&self, key: &CacheKey) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(key.file_name()))
    }

    /// Reads a stored entry, rejecting it unless key and hash match.
    pub fn load<T: Serialize + DeserializeOwned>(&self, key: &CacheKey) -> Result<Option<T>> {
        let Some(path) = self.path_for(key) else {
            return Ok(None);
        };
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let corrupt = || Error::CacheCorrupt(path.display().to_string());
        let entry: Entry<T> = serde_json::from_slice(&bytes).map_err(|_| corrupt())?;
        if entry.key != *key || entry.sha256 != payload_hash(&entry.payload)? {
            return Err(corrupt());
        }
        Ok(Some(entry.payload))
    }

    pub fn store<T: Serialize>(&self, key: &CacheKey, payload: &T) -> Result<()> {
        let (Some(dir), Some(path)) = (self.dir.as_ref(), self.path_for(key)) else {
            return Ok(());
        };
        fs::create_dir_all(dir)?;
        let entry = Entry {
            key: key.clone(),
            sha256: payload_hash(payload)?,
            payload,
        };
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_vec(&entry)?)?;
        fs::rename(tmp, path)?;
        Ok(())
    }

    /// Returns the cached payload or computes, stores and returns it.
    pub fn get_or_compute<T, F>(&self, key: &CacheKey, compute: F) -> Result<(T, CacheStatus)>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        if self.dir.is_none() {
            return Ok((compute()?, CacheStatus::Disabled));
        }
        let status = match self.load(key) {
            Ok(Some(v)) => return Ok((v, CacheStatus::Hit)),
            Ok(None) => CacheStatus::Miss,
            Err(Error::CacheCorrupt(_)) => CacheStatus::Recomputed,
            Err(e) => return Err(e),
        };
        let value = compute()?;
        self.store(key, &value)?;
        Ok((value, status))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hit_after_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        let key = CacheKey::new("families", "n=3", 4);
        let (v, s) = cache.get_or_compute(&key, || Ok(vec![1u32, 2, 3])).unwrap();
        assert_eq!((v, s), (vec![1, 2, 3], CacheStatus::Miss));
        let (v, s) = cache
            .get_or_compute(&key, || -> Result<Vec<u32>> { panic!("should hit") })
            .unwrap();
        assert_eq!((v, s), (vec![1, 2, 3], CacheStatus::Hit));
    }

    #[test]
    fn cap_change_is_a_new_key() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        cache
            .get_or_compute(&CacheKey::new("families", "n=3", 4), || Ok(1u32))
            .unwrap();
        let (_, s) = cache
            .get_or_compute(&CacheKey::new("families", "n=3", 5), || Ok(1u32))
            .unwrap();
        assert_eq!(s, CacheStatus::Miss);
    }

    #[test]
    fn corrupt_entries_are_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        let key = CacheKey::new("submonoids", "mod:12", 256);
        cache.get_or_compute(&key, || Ok(vec![7u32])).unwrap();
        let path = cache.path_for(&key).unwrap();
        let text = fs::read_to_string(&path).unwrap().replace("[7]", "[8]");
        fs::write(&path, text).unwrap();
        assert!(matches!(cache.load::<Vec<u32>>(&key), Err(Error::CacheCorrupt(_))));
        let (v, s) = cache.get_or_compute(&key, || Ok(vec![7u32])).unwrap();
        assert_eq!((v, s), (vec![7], CacheStatus::Recomputed));
        assert_eq!(cache.load::<Vec<u32>>(&key).unwrap(), Some(vec![7]));

        fs::write(&path, b"not json").unwrap();
        let (_, s) = cache.get_or_compute(&key, || Ok(vec![7u32])).unwrap();
        assert_eq!(s, CacheStatus::Recomputed);
    }

    #[test]
    fn disabled_cache_always_computes() {
        let (v, s) = Cache::disabled()
            .get_or_compute(&CacheKey::new("x", "", 0), || Ok(3u8))
            .unwrap();
        assert_eq!((v, s), (3, CacheStatus::Disabled));
    }
}
