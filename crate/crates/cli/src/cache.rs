use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use nimgen_core::{GameVariant, TOOL_VERSION};
use serde::{Deserialize, Serialize};

use crate::record::ResultRecord;

/// Results keyed by canonical spec, variant and tool version, stored as one
/// JSON file. Loaded once per run and written once at the end.
#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    file: CacheFile,
    dirty: bool,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct CacheFile {
    entries: BTreeMap<String, ResultRecord>,
}

pub fn key(canonical: &str, variant: GameVariant) -> String {
    format!("{canonical}|{variant}|{TOOL_VERSION}")
}

impl Cache {
    /// A missing file is an empty cache; an unreadable one is reported and
    /// replaced on save.
    pub fn open(path: &Path) -> Self {
        let file = match fs::read_to_string(path) {
            Ok(text) => serde_json::from_str(&text).unwrap_or_else(|e| {
                eprintln!("warning: ignoring unreadable cache {}: {e}", path.display());
                CacheFile::default()
            }),
            Err(_) => CacheFile::default(),
        };
        Self { path: path.to_path_buf(), file, dirty: false }
    }

    pub fn get(&self, canonical: &str, variant: GameVariant) -> Option<&ResultRecord> {
        self.file.entries.get(&key(canonical, variant))
    }

    /// Only successful results are cached.
    pub fn insert(&mut self, record: &ResultRecord) {
        if record.error.is_none() {
            self.file.entries.insert(key(&record.spec, record.variant), record.clone());
            self.dirty = true;
        }
    }

    pub fn save(&self) -> anyhow::Result<()> {
        if !self.dirty {
            return Ok(());
        }
        let tmp = self.path.with_extension("tmp");
        let mut text = serde_json::to_string_pretty(&self.file)?;
        text.push('\n');
        fs::write(&tmp, text).with_context(|| format!("writing {}", tmp.display()))?;
        fs::rename(&tmp, &self.path).with_context(|| format!("replacing {}", self.path.display()))?;
        Ok(())
    }
}
