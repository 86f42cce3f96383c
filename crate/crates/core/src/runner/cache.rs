use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{Read, Write};
use std::path::Path;

use super::{RunError, RunRecord};

/// Append-only JSONL store of run records, indexed by prompt hash.
pub struct Cache {
    file: File,
    index: HashMap<String, RunRecord>,
}

impl Cache {
    /// Opens (creating if needed) and indexes the cache. A final line
    /// without a newline is the remains of an interrupted write and is
    /// truncated away; an unreadable line anywhere else is corruption.
    pub fn open(path: &Path) -> Result<Self, RunError> {
        let mut file = OpenOptions::new().read(true).append(true).create(true).open(path)?;
        let mut bytes = Vec::new();
        file.read_to_end(&mut bytes)?;

        let complete = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1);
        if complete < bytes.len() {
            file.set_len(complete as u64)?;
        }

        let mut index = HashMap::new();
        let mut offset = 0;
        for line in bytes[..complete].split_inclusive(|&b| b == b'\n') {
            let body = &line[..line.len() - 1];
            if !body.iter().all(u8::is_ascii_whitespace) {
                let record: RunRecord = serde_json::from_slice(body).map_err(|e| RunError::CacheCorruption {
                    offset: offset as u64,
                    message: e.to_string(),
                })?;
                index.insert(record.prompt_hash.clone(), record);
            }
            offset += line.len();
        }
        Ok(Cache { file, index })
    }

    pub fn get(&self, prompt_hash: &str) -> Option<&RunRecord> {
        self.index.get(prompt_hash)
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Writes one record as a single line and flushes it.
    pub fn append(&mut self, record: &RunRecord) -> Result<(), RunError> {
        let mut line = serde_json::to_vec(record).expect("record serializes");
        line.push(b'\n');
        self.file.write_all(&line)?;
        self.file.flush()?;
        self.index.insert(record.prompt_hash.clone(), record.clone());
        Ok(())
    }
}
