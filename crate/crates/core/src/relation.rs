//! Labeled boolean relation tables and the small-graph utilities used on
//! them (isomorphism search, bipartiteness, DOT export).

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelationError {
    #[error("cell grid is {rows}x{cols} but there are {row_labels} row labels and {col_labels} column labels")]
    Shape {
        rows: usize,
        cols: usize,
        row_labels: usize,
        col_labels: usize,
    },
    #[error("relation is not square")]
    NotSquare,
}

/// Boolean table over labeled rows and columns. `true` prints as `+`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationMatrix {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub cells: Vec<Vec<bool>>,
}

impl RelationMatrix {
    pub fn new(row_labels: Vec<String>, col_labels: Vec<String>, cells: Vec<Vec<bool>>) -> Result<Self, RelationError> {
        let bad = cells.len() != row_labels.len() || cells.iter().any(|r| r.len() != col_labels.len());
        if bad {
            return Err(RelationError::Shape {
                rows: cells.len(),
                cols: cells.first().map_or(0, Vec::len),
                row_labels: row_labels.len(),
                col_labels: col_labels.len(),
            });
        }
        Ok(RelationMatrix { row_labels, col_labels, cells })
    }

    /// Square relation over one label set, from a predicate on index pairs.
    pub fn square_from_fn(labels: Vec<String>, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let n = labels.len();
        let cells = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        RelationMatrix { row_labels: labels.clone(), col_labels: labels, cells }
    }

    pub fn rect_from_fn(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Self {
        let cells = (0..row_labels.len())
            .map(|i| (0..col_labels.len()).map(|j| f(i, j)).collect())
            .collect();
        RelationMatrix { row_labels, col_labels, cells }
    }

    pub fn n_rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn n_cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.cells[r][c]
    }

    /// Square with identical row and column labels.
    pub fn is_square(&self) -> bool {
        self.row_labels == self.col_labels
    }

    /// Symmetric with an all-false diagonal: a simple undirected graph.
    pub fn is_simple_graph(&self) -> bool {
        self.is_square()
            && (0..self.n_rows()).all(|i| !self.cells[i][i] && (0..i).all(|j| self.cells[i][j] == self.cells[j][i]))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.cells[v].iter().filter(|&&c| c).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n_rows()).map(|v| self.degree(v)).collect()
    }

    /// Number of undirected edges (true cells above the diagonal).
    pub fn edge_count(&self) -> usize {
        (0..self.n_rows())
            .map(|i| (i + 1..self.n_cols()).filter(|&j| self.cells[i][j]).count())
            .sum()
    }

    /// The common degree, if every vertex has the same one.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degrees();
        let first = *d.first()?;
        d.iter().all(|&x| x == first).then_some(first)
    }

    pub fn index_of_row(&self, label: &str) -> Option<usize> {
        self.row_labels.iter().position(|l| l == label)
    }

    pub fn index_of_col(&self, label: &str) -> Option<usize> {
        self.col_labels.iter().position(|l| l == label)
    }

    /// Restriction of a square relation to a subset of its vertices, in the
    /// given order.
    pub fn restrict(&self, vertices: &[usize]) -> RelationMatrix {
        let labels: Vec<String> = vertices.iter().map(|&v| self.row_labels[v].clone()).collect();
        RelationMatrix::square_from_fn(labels, |i, j| self.cells[vertices[i]][vertices[j]])
    }

    /// Two-colouring of a simple graph, if one exists.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let n = self.n_rows();
        let mut colour: Vec<Option<u8>> = vec![None; n];
        for start in 0..n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(0);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                let c = colour[v].unwrap();
                for w in 0..n {
                    if !self.cells[v][w] {
                        continue;
                    }
                    match colour[w] {
                        None => {
                            colour[w] = Some(1 - c);
                            stack.push(w);
                        }
                        Some(cw) if cw == c => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        colour.into_iter().collect()
    }

    /// Plain `+/−` grid with row and column headers.
    pub fn render_pm(&self) -> String {
        let w = self
            .row_labels
            .iter()
            .chain(&self.col_labels)
            .map(String::len)
            .max()
            .unwrap_or(1)
            .max(1);
        let mut out = String::new();
        let _ = write!(out, "{:w$}", "");
        for c in &self.col_labels {
            let _ = write!(out, " {c:>w$}");
        }
        out.push('\n');
        for (r, row) in self.row_labels.iter().zip(&self.cells) {
            let _ = write!(out, "{r:w$}");
            for &cell in row {
                let _ = write!(out, " {:>w$}", if cell { "+" } else { "-" });
            }
            out.push('\n');
        }
        out
    }
}

/// Undirected DOT graph: one node per label, one edge per true cell above
/// the diagonal.
pub fn export_dot(graph: &RelationMatrix, name: &str) -> Result<String, RelationError> {
    if !graph.is_square() {
        return Err(RelationError::NotSquare);
    }
    let mut out = String::new();
    let _ = writeln!(out, "graph \"{}\" {{", escape(name));
    for l in &graph.row_labels {
        let _ = writeln!(out, "  \"{}\";", escape(l));
    }
    for i in 0..graph.n_rows() {
        for j in i + 1..graph.n_cols() {
            if graph.cells[i][j] {
                let _ = writeln!(out, "  \"{}\" -- \"{}\";", escape(&graph.row_labels[i]), escape(&graph.row_labels[j]));
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Lexicographically first isomorphism `a → b` between two simple graphs,
/// returned as `map[i] = j` for vertex `i` of `a`.
pub fn find_isomorphism(a: &RelationMatrix, b: &RelationMatrix) -> Option<Vec<usize>> {
    find_isomorphism_pinned(a, b, &[])
}

/// Like [`find_isomorphism`], with some vertices of `a` forced onto given
/// vertices of `b`.
pub fn find_isomorphism_pinned(a: &RelationMatrix, b: &RelationMatrix, pins: &[(usize, usize)]) -> Option<Vec<usize>> {
    let n = a.n_rows();
    if n != b.n_rows() || !a.is_square() || !b.is_square() {
        return None;
    }
    let (da, db) = (a.degrees(), b.degrees());
    let mut sa = da.clone();
    let mut sb = db.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return None;
    }
    let mut pinned = vec![None; n];
    for &(i, j) in pins {
        if i >= n || j >= n {
            return None;
        }
        pinned[i] = Some(j);
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        i: usize,
        a: &RelationMatrix,
        b: &RelationMatrix,
        da: &[usize],
        db: &[usize],
        pinned: &[Option<usize>],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let n = map.len();
        if i == n {
            return true;
        }
        for j in 0..n {
            if used[j] || da[i] != db[j] || pinned[i].is_some_and(|p| p != j) {
                continue;
            }
            if (0..i).any(|k| a.cells[i][k] != b.cells[j][map[k]] || a.cells[k][i] != b.cells[map[k]][j]) {
                continue;
            }
            map[i] = j;
            used[j] = true;
            if go(i + 1, a, b, da, db, pinned, map, used) {
                return true;
            }
            used[j] = false;
        }
        false
    }
    go(0, a, b, &da, &db, &pinned, &mut map, &mut used).then_some(map)
}

/// The 3-cube graph Q₃ on vertices 0..8 (adjacent iff one bit differs).
pub fn cube_graph() -> RelationMatrix {
    let labels = (0..8).map(|v| format!("{v:03b}")).collect();
    RelationMatrix::square_from_fn(labels, |i, j| (i ^ j).count_ones() == 1)
}

/// Girth of a simple graph (`None` if acyclic).
pub fn girth(g: &RelationMatrix) -> Option<usize> {
    let n = g.n_rows();
    let mut best: Option<usize> = None;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for w in 0..n {
                if !g.cells[v][w] {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    parent[w] = v;
                    queue.push_back(w);
                } else if parent[v] != w {
                    let cycle = dist[v] + dist[w] + 1;
                    best = Some(best.map_or(cycle, |b| b.min(cycle)));
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> RelationMatrix {
        let labels = (0..n).map(|i| i.to_string()).collect();
        RelationMatrix::square_from_fn(labels, move |i, j| (i + 1) % n == j || (j + 1) % n == i)
    }

    #[test]
    fn cube_invariants() {
        let q = cube_graph();
        assert!(q.is_simple_graph());
        assert_eq!(q.regular_degree(), Some(3));
        assert_eq!(q.edge_count(), 12);
        assert!(q.bipartition().is_some());
        assert_eq!(girth(&q), Some(4));
    }

    #[test]
    fn isomorphism_of_relabelled_cycle() {
        let c6 = cycle(6);
        let perm = [3, 0, 4, 1, 5, 2];
        let relabelled = RelationMatrix::square_from_fn(c6.row_labels.clone(), |i, j| c6.cells[perm[i]][perm[j]]);
        let map = find_isomorphism(&c6, &relabelled).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(c6.cells[i][j], relabelled.cells[map[i]][map[j]]);
            }
        }
        // two triangles are not a hexagon
        let two_triangles = RelationMatrix::square_from_fn(c6.row_labels.clone(), |i, j| i != j && i / 3 == j / 3);
        assert!(find_isomorphism(&c6, &two_triangles).is_none());
        assert_eq!(girth(&two_triangles), Some(3));
        assert!(cycle(5).bipartition().is_none());
    }

    #[test]
    fn dot_export() {
        let dot = export_dot(&cube_graph(), "cube").unwrap();
        assert_eq!(dot.matches(" -- ").count(), 12);
        assert_eq!(dot.lines().filter(|l| l.ends_with("\";") && !l.contains("--")).count(), 8);
        let empty = RelationMatrix::square_from_fn(vec!["a".into(), "b".into()], |_, _| false);
        let dot = export_dot(&empty, "e").unwrap();
        assert!(!dot.contains("--"));
        let rect = RelationMatrix::rect_from_fn(vec!["a".into()], vec!["b".into()], |_, _| true);
        assert_eq!(export_dot(&rect, "r"), Err(RelationError::NotSquare));
    }

    #[test]
    fn shape_checked() {
        assert!(RelationMatrix::new(vec!["a".into()], vec!["a".into(), "b".into()], vec![vec![true]]).is_err());
    }
}
