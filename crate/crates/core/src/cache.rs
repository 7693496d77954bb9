//! Append-only verdict cache, one JSON record per line, keyed by the
//! canonical graph6 string plus the instance. Safe to re-open and extend
//! across runs; a put that contradicts a cached verdict is an error rather
//! than a silent overwrite.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::CacheError;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CacheRecord {
    pub graph6: String,
    pub n: usize,
    pub p: usize,
    pub m: usize,
    pub arrows: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness_red_edge_ids: Option<Vec<usize>>,
    pub timestamp: u64,
}

type Key = (String, usize, usize, usize);

#[derive(Debug)]
pub struct VerdictCache {
    path: PathBuf,
    map: HashMap<Key, CacheRecord>,
}

impl VerdictCache {
    /// Loads an existing cache file or starts an empty one at `path`.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, CacheError> {
        let path = path.as_ref().to_path_buf();
        let mut map = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            for (idx, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let rec: CacheRecord =
                    serde_json::from_str(&line).map_err(|e| CacheError::BadRecord {
                        line: idx + 1,
                        reason: e.to_string(),
                    })?;
                map.insert(key_of(&rec), rec);
            }
        }
        Ok(VerdictCache { path, map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, graph6: &str, n: usize, p: usize, m: usize) -> Option<&CacheRecord> {
        self.map.get(&(graph6.to_owned(), n, p, m))
    }

    /// Records a verdict. Idempotent for identical verdicts; a conflicting
    /// verdict for the same key is refused.
    pub fn put(&mut self, rec: CacheRecord) -> Result<(), CacheError> {
        if let Some(old) = self.map.get(&key_of(&rec)) {
            if old.arrows != rec.arrows {
                return Err(CacheError::Conflict {
                    graph6: rec.graph6,
                    n: rec.n,
                    p: rec.p,
                    m: rec.m,
                    cached: old.arrows,
                    new: rec.arrows,
                });
            }
            return Ok(());
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        let line = serde_json::to_string(&rec).expect("record serializes");
        writeln!(file, "{line}")?;
        self.map.insert(key_of(&rec), rec);
        Ok(())
    }
}

fn key_of(rec: &CacheRecord) -> Key {
    (rec.graph6.clone(), rec.n, rec.p, rec.m)
}

pub fn now_unix() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(g6: &str, arrows: bool) -> CacheRecord {
        CacheRecord {
            graph6: g6.to_owned(),
            n: 2,
            p: 1,
            m: 2,
            arrows,
            witness_red_edge_ids: if arrows { None } else { Some(vec![0]) },
            timestamp: 1700000000,
        }
    }

    #[test]
    fn round_trips_through_file() {
        let dir = std::env::temp_dir().join(format!("vcache-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("verdicts.jsonl");
        let _ = std::fs::remove_file(&path);

        let mut cache = VerdictCache::open(&path).unwrap();
        assert!(cache.is_empty());
        cache.put(rec("Bw", true)).unwrap();
        cache.put(rec("A_", false)).unwrap();
        // idempotent re-put
        cache.put(rec("Bw", true)).unwrap();
        assert_eq!(cache.len(), 2);

        let reopened = VerdictCache::open(&path).unwrap();
        assert_eq!(reopened.len(), 2);
        assert!(reopened.get("Bw", 2, 1, 2).unwrap().arrows);
        assert!(!reopened.get("A_", 2, 1, 2).unwrap().arrows);
        assert!(reopened.get("Bw", 2, 1, 3).is_none());

        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn conflicting_put_is_refused() {
        let dir = std::env::temp_dir().join(format!("vcache-c-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("verdicts.jsonl");
        let _ = std::fs::remove_file(&path);

        let mut cache = VerdictCache::open(&path).unwrap();
        cache.put(rec("Bw", true)).unwrap();
        let err = cache.put(rec("Bw", false)).unwrap_err();
        assert!(matches!(err, CacheError::Conflict { .. }));

        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn bad_line_is_reported_with_position() {
        let dir = std::env::temp_dir().join(format!("vcache-b-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("verdicts.jsonl");
        std::fs::write(&path, "{\"graph6\":\"Bw\"\n").unwrap();
        let err = VerdictCache::open(&path).unwrap_err();
        assert!(matches!(err, CacheError::BadRecord { line: 1, .. }));
        std::fs::remove_file(&path).unwrap();
    }
}
