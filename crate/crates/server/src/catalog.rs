use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use issuescope_core::model::RepoSnapshot;
use issuescope_core::payload::RepoEntry;
use issuescope_core::store::load_snapshot;
use tracing::{info, warn};

/// Every valid snapshot under a data directory, keyed by `(owner, name)`.
#[derive(Debug, Default)]
pub struct Catalog {
    repos: BTreeMap<(String, String), Arc<RepoSnapshot>>,
    /// Set when the data directory itself could not be listed.
    unreadable: Option<String>,
}

impl Catalog {
    /// Loads each immediate subdirectory as a snapshot. Subdirectories that
    /// fail to load are logged and skipped; if two hold the same repository
    /// the newer snapshot wins.
    pub fn scan(data_dir: &Path) -> Catalog {
        let entries = match std::fs::read_dir(data_dir) {
            Ok(e) => e,
            Err(e) => {
                warn!(dir = %data_dir.display(), error = %e, "data directory unreadable");
                return Catalog { repos: BTreeMap::new(), unreadable: Some(format!("{}: {e}", data_dir.display())) };
            }
        };
        let mut dirs: Vec<PathBuf> = entries.filter_map(Result::ok).map(|e| e.path()).filter(|p| p.is_dir()).collect();
        dirs.sort();
        let mut repos: BTreeMap<(String, String), Arc<RepoSnapshot>> = BTreeMap::new();
        for dir in dirs {
            match load_snapshot(&dir) {
                Ok(s) => {
                    let key = (s.repo().owner().to_string(), s.repo().name().to_string());
                    match repos.get(&key) {
                        Some(have) if have.snapshot_time() >= s.snapshot_time() => {
                            warn!(dir = %dir.display(), repo = %s.repo(), "older duplicate snapshot skipped");
                        }
                        _ => {
                            repos.insert(key, Arc::new(s));
                        }
                    }
                }
                Err(e) => warn!(dir = %dir.display(), error = %e, "invalid snapshot directory skipped"),
            }
        }
        info!(dir = %data_dir.display(), repos = repos.len(), "catalog loaded");
        Catalog { repos, unreadable: None }
    }

    pub fn from_snapshots(snapshots: impl IntoIterator<Item = RepoSnapshot>) -> Catalog {
        let repos = snapshots
            .into_iter()
            .map(|s| ((s.repo().owner().to_string(), s.repo().name().to_string()), Arc::new(s)))
            .collect();
        Catalog { repos, unreadable: None }
    }

    pub fn unreadable(&self) -> Option<&str> {
        self.unreadable.as_deref()
    }

    pub fn get(&self, owner: &str, name: &str) -> Option<&Arc<RepoSnapshot>> {
        self.repos.get(&(owner.to_string(), name.to_string()))
    }

    pub fn entries(&self) -> Vec<RepoEntry> {
        self.repos.values().map(|s| RepoEntry::of(s)).collect()
    }

    pub fn len(&self) -> usize {
        self.repos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.repos.is_empty()
    }
}
