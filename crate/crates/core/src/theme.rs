//! Chart colors. Defaults come from `theme.toml` at the crate root and can be
//! replaced by any file with the same keys.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{is_rgb_hex, IssueState};

const DEFAULT_THEME: &str = include_str!("../theme.toml");

#[derive(Debug, Error)]
pub enum ThemeError {
    #[error("cannot read theme {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid theme: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("theme color {key} = {value:?} is not six hex digits")]
    Color { key: String, value: String },
    #[error("donut palette needs at least two colors")]
    ShortPalette,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeColors {
    pub user: String,
    pub commit: String,
    pub file: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theme {
    pub status_open: String,
    pub status_closed: String,
    pub no_label: String,
    pub edge: String,
    pub bug_fix_edge: String,
    pub histogram: String,
    pub donut: Vec<String>,
    pub node: NodeColors,
}

impl Default for Theme {
    fn default() -> Self {
        Theme::parse(DEFAULT_THEME).expect("bundled theme is valid")
    }
}

impl Theme {
    pub fn parse(text: &str) -> Result<Self, ThemeError> {
        let theme: Theme = toml::from_str(text)?;
        theme.check()?;
        Ok(theme)
    }

    pub fn load(path: &Path) -> Result<Self, ThemeError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ThemeError::Io { path: path.display().to_string(), source })?;
        Theme::parse(&text)
    }

    fn check(&self) -> Result<(), ThemeError> {
        if self.donut.len() < 2 {
            return Err(ThemeError::ShortPalette);
        }
        let singles = [
            ("status_open", &self.status_open),
            ("status_closed", &self.status_closed),
            ("no_label", &self.no_label),
            ("edge", &self.edge),
            ("bug_fix_edge", &self.bug_fix_edge),
            ("histogram", &self.histogram),
            ("node.user", &self.node.user),
            ("node.commit", &self.node.commit),
            ("node.file", &self.node.file),
        ];
        let donut = self.donut.iter().enumerate().map(|(i, c)| (format!("donut[{i}]"), c));
        for (key, value) in singles.into_iter().map(|(k, v)| (k.to_string(), v)).chain(donut) {
            if !is_rgb_hex(value) {
                return Err(ThemeError::Color { key, value: value.clone() });
            }
        }
        Ok(())
    }

    pub fn status_color(&self, state: IssueState) -> &str {
        match state {
            IssueState::Open => &self.status_open,
            IssueState::Closed => &self.status_closed,
        }
    }

    /// A donut palette with room for `segments` wedges. Named colors repeat
    /// when needed; the OTHERS color stays last.
    pub fn donut_palette(&self, segments: usize) -> Vec<String> {
        let (others, named) = self.donut.split_last().expect("palette checked non-empty");
        let mut out: Vec<String> = named.iter().cycle().take(segments.max(named.len())).cloned().collect();
        out.push(others.clone());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_defaults() {
        let t = Theme::default();
        assert_eq!(t.status_open, "8957e5");
        assert_eq!(t.status_closed, "2da44e");
        assert_eq!(t.no_label, "4682b4");
        assert_eq!(t.donut.len(), 8);
    }

    #[test]
    fn rejects_bad_colors() {
        let text = DEFAULT_THEME.replace("\"8957e5\"", "\"purple\"");
        assert!(matches!(Theme::parse(&text), Err(ThemeError::Color { key, .. }) if key == "status_open"));
    }

    #[test]
    fn donut_palette_keeps_others_last() {
        let t = Theme::default();
        let p = t.donut_palette(10);
        assert_eq!(p.len(), 11);
        assert_eq!(p.last().unwrap(), "b3b3b3");
        assert_eq!(p[7], p[0]);
        assert_eq!(t.donut_palette(3).len(), 8);
    }
}
