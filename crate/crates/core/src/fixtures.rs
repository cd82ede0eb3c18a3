//! Reference tables stored as whitespace grids.
//!
//! A fixture file holds one or more blocks separated by blank lines. The
//! first line of a block is a corner token followed by the column labels;
//! every further line is a row label followed by its cells. Lines starting
//! with `#` are ignored.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub const ENV_VAR: &str = "PRG_FIXTURES";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FixtureError {
    #[error("fixture `{0}` not found")]
    Missing(String),
    #[error("fixture `{name}` line {line}: expected {expected} cells, found {found}")]
    RaggedRow { name: String, line: usize, expected: usize, found: usize },
    #[error("fixture `{0}` has no blocks")]
    Empty(String),
    #[error("fixture `{name}`: {message}")]
    Invalid { name: String, message: String },
    #[error("reading `{path}`: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub corner: String,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub cells: Vec<Vec<String>>,
}

impl Grid {
    pub fn cell(&self, row: &str, col: &str) -> Option<&str> {
        let r = self.row_labels.iter().position(|l| l == row)?;
        let c = self.col_labels.iter().position(|l| l == col)?;
        Some(&self.cells[r][c])
    }
}

pub fn parse_grids(name: &str, text: &str) -> Result<Vec<Grid>, FixtureError> {
    let mut grids = Vec::new();
    let mut current: Option<Grid> = None;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            grids.extend(current.take());
            continue;
        }
        let tokens: Vec<String> = line.split_whitespace().map(str::to_owned).collect();
        match current.as_mut() {
            None => {
                current = Some(Grid {
                    corner: tokens[0].clone(),
                    row_labels: Vec::new(),
                    col_labels: tokens[1..].to_vec(),
                    cells: Vec::new(),
                });
            }
            Some(g) => {
                if tokens.len() != g.col_labels.len() + 1 {
                    return Err(FixtureError::RaggedRow {
                        name: name.to_owned(),
                        line: n + 1,
                        expected: g.col_labels.len(),
                        found: tokens.len() - 1,
                    });
                }
                g.row_labels.push(tokens[0].clone());
                g.cells.push(tokens[1..].to_vec());
            }
        }
    }
    grids.extend(current);
    if grids.is_empty() {
        return Err(FixtureError::Empty(name.to_owned()));
    }
    Ok(grids)
}

const EMBEDDED: [(&str, &str); 10] = [
    ("table1", include_str!("../fixtures/table1.txt")),
    ("table2", include_str!("../fixtures/table2.txt")),
    ("table3", include_str!("../fixtures/table3.txt")),
    ("table4", include_str!("../fixtures/table4.txt")),
    ("table5", include_str!("../fixtures/table5.txt")),
    ("table6", include_str!("../fixtures/table6.txt")),
    ("table7", include_str!("../fixtures/table7.txt")),
    ("table8", include_str!("../fixtures/table8.txt")),
    ("table9", include_str!("../fixtures/table9.txt")),
    ("labelling", include_str!("../fixtures/labelling.txt")),
];

/// The set of named fixture texts, parsed on demand.
#[derive(Debug, Clone)]
pub struct Fixtures {
    sources: BTreeMap<String, Result<Vec<Grid>, FixtureError>>,
    origin: Option<PathBuf>,
}

impl Fixtures {
    pub fn embedded() -> Self {
        Self::from_texts(EMBEDDED.iter().map(|(n, t)| (n.to_string(), t.to_string())), None)
    }

    /// Reads `<name>.txt` for every known fixture name; absent files are
    /// reported when the fixture is requested.
    pub fn from_dir(dir: &Path) -> Self {
        let mut texts = Vec::new();
        let mut sources = BTreeMap::new();
        for (name, _) in EMBEDDED {
            let path = dir.join(format!("{name}.txt"));
            match std::fs::read_to_string(&path) {
                Ok(t) => texts.push((name.to_string(), t)),
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                    sources.insert(name.to_string(), Err(FixtureError::Missing(path.display().to_string())));
                }
                Err(e) => {
                    sources.insert(
                        name.to_string(),
                        Err(FixtureError::Io { path: path.display().to_string(), message: e.to_string() }),
                    );
                }
            }
        }
        let mut fx = Self::from_texts(texts, Some(dir.to_path_buf()));
        fx.sources.extend(sources);
        fx
    }

    /// Uses the directory named by `PRG_FIXTURES` if set, else the embedded copies.
    pub fn from_env() -> Self {
        match std::env::var_os(ENV_VAR) {
            Some(dir) if !dir.is_empty() => Self::from_dir(Path::new(&dir)),
            _ => Self::embedded(),
        }
    }

    pub fn from_texts(texts: impl IntoIterator<Item = (String, String)>, origin: Option<PathBuf>) -> Self {
        let sources = texts.into_iter().map(|(n, t)| (n.clone(), parse_grids(&n, &t))).collect();
        Fixtures { sources, origin }
    }

    pub fn origin(&self) -> Option<&Path> {
        self.origin.as_deref()
    }

    pub fn blocks(&self, name: &str) -> Result<&[Grid], FixtureError> {
        match self.sources.get(name) {
            Some(Ok(g)) => Ok(g),
            Some(Err(e)) => Err(e.clone()),
            None => Err(FixtureError::Missing(name.to_owned())),
        }
    }

    /// First block of `table<id>`.
    pub fn grid(&self, id: u8) -> Result<&Grid, FixtureError> {
        let name = format!("table{id}");
        self.blocks(&name)?.first().ok_or(FixtureError::Empty(name))
    }

    /// Point name → operator label pairs, in file order.
    pub fn labelling(&self) -> Result<Vec<(String, u8)>, FixtureError> {
        let grid = self.blocks("labelling")?.first().ok_or(FixtureError::Empty("labelling".into()))?;
        grid.row_labels
            .iter()
            .zip(&grid.cells)
            .map(|(p, cells)| {
                cells[0].parse::<u8>().map(|l| (p.clone(), l)).map_err(|_| FixtureError::Invalid {
                    name: "labelling".into(),
                    message: format!("label `{}` for {p} is not a number", cells[0]),
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_blocks_and_comments() {
        let g = parse_grids("t", "# note\n* a b\nx 1 2\ny 3 4\n\n+ a\nz 5\n").unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].col_labels, ["a", "b"]);
        assert_eq!(g[0].cell("y", "a"), Some("3"));
        assert_eq!(g[1].corner, "+");
    }

    #[test]
    fn rejects_ragged_and_empty() {
        assert!(matches!(parse_grids("t", "* a b\nx 1\n"), Err(FixtureError::RaggedRow { line: 2, .. })));
        assert_eq!(parse_grids("t", "# only\n\n"), Err(FixtureError::Empty("t".into())));
    }

    #[test]
    fn embedded_shapes() {
        let fx = Fixtures::embedded();
        for id in 1..=3 {
            let g = fx.grid(id).unwrap();
            assert_eq!((g.row_labels.len(), g.col_labels.len()), (8, 8));
        }
        assert_eq!(fx.blocks("table4").unwrap().len(), 4);
        assert_eq!(fx.blocks("table5").unwrap().len(), 2);
        assert_eq!(fx.grid(9).unwrap().col_labels.len(), 7);
        assert_eq!(fx.labelling().unwrap().len(), 15);
        assert!(matches!(fx.grid(10), Err(FixtureError::Missing(_))));
    }

    #[test]
    fn missing_directory_reports_missing() {
        let fx = Fixtures::from_dir(Path::new("/nonexistent/fixture/dir"));
        assert!(matches!(fx.grid(1), Err(FixtureError::Missing(_))));
    }
}
