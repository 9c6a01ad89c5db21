//! Append-only JSONL result cache.
//!
//! Each line is `{"key": .., "result": .., "checksum": ..}` where the key is
//! the SHA-256 of the canonical query and the checksum covers key and result.
//! Lines that fail to parse or verify are skipped with a warning.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub struct Cache {
    path: PathBuf,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Content address of a query. `Value` maps are sorted, so the encoding is canonical.
pub fn query_key(query: &Value) -> String {
    sha256_hex(query.to_string().as_bytes())
}

fn checksum(key: &str, result: &Value) -> String {
    sha256_hex(format!("{key}\n{result}").as_bytes())
}

impl Cache {
    pub fn new(path: impl AsRef<Path>) -> Self {
        Cache {
            path: path.as_ref().to_path_buf(),
        }
    }

    pub fn lookup(&self, key: &str) -> Option<Value> {
        let file = File::open(&self.path).ok()?;
        let mut found = None;
        for (idx, line) in BufReader::new(file).lines().enumerate() {
            let Ok(line) = line else {
                eprintln!("warning: cache {}: unreadable line {}", self.path.display(), idx + 1);
                continue;
            };
            if line.trim().is_empty() {
                continue;
            }
            let record: Option<(String, Value, String)> = serde_json::from_str::<Value>(&line)
                .ok()
                .and_then(|v| {
                    Some((
                        v.get("key")?.as_str()?.to_owned(),
                        v.get("result")?.clone(),
                        v.get("checksum")?.as_str()?.to_owned(),
                    ))
                });
            let Some((k, result, sum)) = record else {
                eprintln!("warning: cache {}: skipping malformed line {}", self.path.display(), idx + 1);
                continue;
            };
            if sum != checksum(&k, &result) {
                eprintln!("warning: cache {}: checksum mismatch on line {}", self.path.display(), idx + 1);
                continue;
            }
            if k == key {
                found = Some(result);
            }
        }
        found
    }

    pub fn store(&self, key: &str, result: &Value) {
        let line = json!({"key": key, "result": result, "checksum": checksum(key, result)});
        let written = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .and_then(|mut f| writeln!(f, "{line}"));
        if let Err(err) = written {
            eprintln!("warning: cache {} not written: {err}", self.path.display());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn store_then_lookup() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().join("c.jsonl"));
        let key = query_key(&json!({"command": "nu", "q": 7}));
        assert_eq!(cache.lookup(&key), None);
        cache.store(&key, &json!({"nu": 5}));
        assert_eq!(cache.lookup(&key), Some(json!({"nu": 5})));
    }

    #[test]
    fn tampered_records_are_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let cache = Cache::new(&path);
        let key = query_key(&json!({"q": 1}));
        cache.store(&key, &json!({"nu": 5}));
        let text = std::fs::read_to_string(&path).unwrap().replace("5", "6");
        std::fs::write(&path, format!("{text}not json\n")).unwrap();
        assert_eq!(cache.lookup(&key), None);
    }

    #[test]
    fn unwritable_path_only_warns() {
        let cache = Cache::new("/nonexistent-dir/cache.jsonl");
        cache.store("k", &json!(1));
        assert_eq!(cache.lookup("k"), None);
    }
}
