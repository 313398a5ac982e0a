//! Append-only on-disk cache of length profiles, keyed by matrix digest and radius.
//!
//! The file starts with a version header; every following line is one JSON record
//! carrying a checksum of its payload. Any unreadable line invalidates the whole file,
//! which is then rebuilt from scratch.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coxeter::{length_profile, CoxeterMatrix, LengthProfile, Limits, Representation};
use crate::error::Result;

pub const CACHE_HEADER: &str = "coxbuild-growth-cache v1";
pub const CACHE_FILE: &str = "growth-profiles.v1";
/// Environment variable overriding the cache directory.
pub const CACHE_DIR_ENV: &str = "COXBUILD_CACHE_DIR";

#[derive(Clone, Debug, Serialize, Deserialize)]
struct LayerRecord {
    length: usize,
    total: u64,
    by_class: Vec<(Vec<u32>, u64)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Record {
    digest: String,
    radius: usize,
    classes: usize,
    layers: Vec<LayerRecord>,
    checksum: String,
}

fn checksum(digest: &str, radius: usize, classes: usize, layers: &[LayerRecord]) -> String {
    let payload = serde_json::to_string(&(digest, radius, classes, layers)).expect("serialisable");
    format!("{:x}", Sha256::digest(payload.as_bytes()))
}

impl Record {
    fn new(digest: &str, p: &LengthProfile) -> Self {
        let layers: Vec<LayerRecord> = p
            .counts
            .iter()
            .enumerate()
            .map(|(k, l)| LayerRecord { length: k, total: l.iter().map(|x| x.1).sum(), by_class: l.clone() })
            .collect();
        let checksum = checksum(digest, p.radius, p.classes, &layers);
        Record { digest: digest.into(), radius: p.radius, classes: p.classes, layers, checksum }
    }

    fn valid(&self) -> bool {
        self.checksum == checksum(&self.digest, self.radius, self.classes, &self.layers)
            && self.layers.len() == self.radius + 1
            && self.layers.iter().enumerate().all(|(k, l)| {
                l.length == k && l.total == l.by_class.iter().map(|x| x.1).sum::<u64>()
            })
    }

    fn profile(&self) -> LengthProfile {
        LengthProfile {
            radius: self.radius,
            classes: self.classes,
            counts: self.layers.iter().map(|l| l.by_class.clone()).collect(),
        }
    }
}

/// Outcome of a cache lookup, for reporting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CacheStatus {
    Hit,
    Miss,
    /// The file was corrupt and has been discarded.
    Rebuilt,
    Disabled,
}

#[derive(Clone, Debug)]
pub struct GrowthCache {
    path: PathBuf,
}

impl GrowthCache {
    pub fn new(dir: impl AsRef<Path>) -> Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(GrowthCache { path: dir.as_ref().join(CACHE_FILE) })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// All records, or `None` when the file is corrupt.
    fn load(&self) -> Option<Vec<Record>> {
        let text = match fs::read_to_string(&self.path) {
            Ok(t) => t,
            Err(_) => return Some(Vec::new()),
        };
        let mut lines = text.lines();
        if lines.next()? != CACHE_HEADER {
            return None;
        }
        let mut out = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let rec: Record = serde_json::from_str(line).ok()?;
            if !rec.valid() {
                return None;
            }
            out.push(rec);
        }
        Some(out)
    }

    /// A stored profile for `digest` covering radius `r`, truncated to `r`.
    pub fn lookup(&self, digest: &str, r: usize) -> (Option<LengthProfile>, CacheStatus) {
        match self.load() {
            None => (None, CacheStatus::Rebuilt),
            Some(records) => {
                let hit = records
                    .iter()
                    .filter(|rec| rec.digest == digest && (rec.radius >= r || exhausted(rec)))
                    .min_by_key(|rec| rec.radius);
                match hit {
                    Some(rec) => (Some(rec.profile().truncate(r)), CacheStatus::Hit),
                    None => (None, CacheStatus::Miss),
                }
            }
        }
    }

    pub fn store(&self, digest: &str, p: &LengthProfile) -> Result<()> {
        let rec = serde_json::to_string(&Record::new(digest, p)).expect("serialisable");
        let fresh = self.load().is_none() || !self.path.exists();
        if fresh {
            fs::write(&self.path, format!("{CACHE_HEADER}\n{rec}\n"))?;
        } else {
            let mut f = OpenOptions::new().append(true).open(&self.path)?;
            writeln!(f, "{rec}")?;
        }
        Ok(())
    }
}

fn exhausted(rec: &Record) -> bool {
    rec.layers.last().is_some_and(|l| l.total == 0)
}

/// The per-class length profile of `m` to radius `r`, through the cache when one is given.
pub fn cached_length_profile(
    m: &CoxeterMatrix,
    r: usize,
    limits: Limits,
    cache: Option<&GrowthCache>,
) -> Result<(LengthProfile, CacheStatus)> {
    let digest = m.digest();
    let mut status = CacheStatus::Disabled;
    if let Some(c) = cache {
        let (hit, s) = c.lookup(&digest, r);
        if let Some(p) = hit {
            return Ok((pad(p, r), s));
        }
        status = s;
    }
    let profile = length_profile(&Representation::new(m)?, r, limits)?;
    if let Some(c) = cache {
        c.store(&digest, &profile)?;
    }
    Ok((profile, status))
}

/// Extends an exhausted profile with empty layers up to `r`.
fn pad(mut p: LengthProfile, r: usize) -> LengthProfile {
    while p.radius < r {
        p.counts.push(Vec::new());
        p.radius += 1;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::systems::*;

    #[test]
    fn hit_equals_cold_and_corruption_rebuilds() {
        let dir = tempfile::tempdir().unwrap();
        let cache = GrowthCache::new(dir.path()).unwrap();
        let m = pentagon();
        let (cold, s) = cached_length_profile(&m, 8, Limits::default(), Some(&cache)).unwrap();
        assert_eq!(s, CacheStatus::Miss);
        let (warm, s) = cached_length_profile(&m, 6, Limits::default(), Some(&cache)).unwrap();
        assert_eq!(s, CacheStatus::Hit);
        assert_eq!(warm, cold.truncate(6));
        let text = fs::read_to_string(cache.path()).unwrap().replace("\"total\":5,", "\"total\":6,");
        fs::write(cache.path(), text).unwrap();
        let (again, s) = cached_length_profile(&m, 8, Limits::default(), Some(&cache)).unwrap();
        assert_eq!(s, CacheStatus::Rebuilt);
        assert_eq!(again, cold);
        assert_eq!(cache.lookup(&m.digest(), 8).1, CacheStatus::Hit);
    }

    #[test]
    fn finite_groups_hit_at_any_radius() {
        let dir = tempfile::tempdir().unwrap();
        let cache = GrowthCache::new(dir.path()).unwrap();
        let m = type_a(2);
        let (p, _) = cached_length_profile(&m, 5, Limits::default(), Some(&cache)).unwrap();
        let (q, s) = cached_length_profile(&m, 9, Limits::default(), Some(&cache)).unwrap();
        assert_eq!(s, CacheStatus::Hit);
        assert_eq!(q.truncate(5), p);
        assert_eq!(q.radius, 9);
    }
}
