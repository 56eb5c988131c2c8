//! Locating the snapshot a command works on.

use std::path::{Path, PathBuf};

use issuescope_core::model::{RepoRef, RepoSnapshot};
use issuescope_core::store::{load_snapshot, read_meta, META_FILE};

use crate::{exit, CliError, DataArgs};

pub const DATA_ENV: &str = "ISSUESCOPE_DATA";

/// `$ISSUESCOPE_DATA` when set and non-empty, else `./data`.
pub fn default_data_dir() -> PathBuf {
    std::env::var_os(DATA_ENV).filter(|d| !d.is_empty()).map_or_else(|| PathBuf::from("data"), PathBuf::from)
}

fn same_repo(a: &RepoRef, b: &RepoRef) -> bool {
    a.owner().eq_ignore_ascii_case(b.owner()) && a.name().eq_ignore_ascii_case(b.name())
}

fn load(dir: &Path) -> Result<RepoSnapshot, CliError> {
    load_snapshot(dir).map_err(|e| CliError::new(exit::DATA, format!("cannot load snapshot {}: {e}", dir.display())))
}

/// Picks the snapshot directory: `dir` itself when it holds `meta.json`,
/// otherwise the one child snapshot matching `repo` (or the only child).
pub fn locate(dir: &Path, repo: Option<&RepoRef>) -> Result<PathBuf, CliError> {
    if !dir.is_dir() {
        return Err(CliError::new(exit::DATA, format!("data directory {} does not exist", dir.display())));
    }
    if dir.join(META_FILE).is_file() {
        if let Some(want) = repo {
            let (have, _) = read_meta(dir).map_err(|e| CliError::new(exit::DATA, format!("{}: {e}", dir.display())))?;
            if !same_repo(&have, want) {
                return Err(CliError::new(exit::UNKNOWN_TARGET, format!("{} holds {have}, not {want}", dir.display())));
            }
        }
        return Ok(dir.to_path_buf());
    }
    let entries = std::fs::read_dir(dir)
        .map_err(|e| CliError::new(exit::DATA, format!("cannot read {}: {e}", dir.display())))?;
    let mut found: Vec<(RepoRef, PathBuf)> = entries
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter_map(|p| read_meta(&p).ok().map(|(r, _)| (r, p)))
        .collect();
    found.sort();
    match repo {
        Some(want) => found
            .into_iter()
            .find(|(r, _)| same_repo(r, want))
            .map(|(_, p)| p)
            .ok_or_else(|| CliError::new(exit::UNKNOWN_TARGET, format!("no snapshot of {want} under {}", dir.display()))),
        None => match found.len() {
            0 => Err(CliError::new(exit::DATA, format!("no snapshots under {}", dir.display()))),
            1 => Ok(found.remove(0).1),
            _ => {
                let names: Vec<String> = found.iter().map(|(r, _)| r.to_string()).collect();
                Err(CliError::new(exit::USAGE, format!("{} holds several snapshots ({}); pick one with --repo", dir.display(), names.join(", "))))
            }
        },
    }
}

pub fn resolve(args: &DataArgs) -> Result<RepoSnapshot, CliError> {
    let repo = args
        .repo
        .as_deref()
        .map(|r| r.parse::<RepoRef>().map_err(|e| CliError::new(exit::USAGE, e.to_string())))
        .transpose()?;
    let dir = args.data.clone().unwrap_or_else(default_data_dir);
    load(&locate(&dir, repo.as_ref())?)
}
