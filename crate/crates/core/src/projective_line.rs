//! The projective line over a finite commutative ring.
//!
//! A pair (a, b) is admissible when some (c, d) makes ad − bc a unit.
//! Points are unit orbits of admissible pairs; each is stored by its
//! lexicographically smallest (index, index) representative. Two points
//! are distant when the determinant of their representatives is a unit,
//! and neighbours otherwise.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::finite_ring::{is_nontrivial_zero_divisor, FiniteRing, RingElement, RingError, RingStructure};
use crate::relation::RelationMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LineError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("({0},{1}) is not an admissible pair")]
    NotAdmissible(String, String),
    #[error("cannot parse point `{0}`; expected `(a,b)`")]
    BadPointName(String),
    #[error("point does not belong to this line")]
    ForeignPoint,
    #[error("the 3x3 array needs a nine-point line, this one has {0}")]
    NotNinePoints(usize),
    #[error("distant graph is not the 3x3 rook graph")]
    NotRookGraph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint {
    pub alpha: RingElement,
    pub beta: RingElement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ShellTag {
    /// No entry is a nontrivial zero-divisor.
    Nucleus,
    /// Exactly one entry is a nontrivial zero-divisor.
    Mixed,
    /// Both entries are nontrivial zero-divisors.
    Outer,
}

impl fmt::Display for ShellTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShellTag::Nucleus => "nucleus",
            ShellTag::Mixed => "mixed",
            ShellTag::Outer => "outer",
        })
    }
}

/// Per-coordinate type of a point over GF(2)^n: each component pair is
/// one of U = (1,0), V = (0,1), W = (1,1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CoordType {
    U,
    V,
    W,
}

#[derive(Debug, Clone)]
pub struct ProjectiveLineModel {
    ring: FiniteRing,
    points: Vec<ProjectivePoint>,
    units: Vec<RingElement>,
}

/// Definition check by exhaustive search over (c, d).
pub fn is_admissible_exhaustive(ring: &FiniteRing, a: RingElement, b: RingElement) -> bool {
    ring.elements().any(|c| {
        ring.elements()
            .any(|d| ring.is_unit(ring.sub(ring.mul(a, d), ring.mul(b, c))))
    })
}

/// Admissibility; componentwise for GF(2)^n (some component of a or b is
/// nonzero in every coordinate), exhaustive otherwise.
pub fn is_admissible(ring: &FiniteRing, a: RingElement, b: RingElement) -> bool {
    match ring.structure() {
        RingStructure::DirectProduct { n, coords } => {
            let full = (1u32 << n) - 1;
            coords[a.index] | coords[b.index] == full
        }
        RingStructure::Quotient { .. } => is_admissible_exhaustive(ring, a, b),
    }
}

pub fn enumerate_points(ring: &FiniteRing) -> Vec<ProjectivePoint> {
    let units: Vec<RingElement> = ring.elements().filter(|&e| ring.is_unit(e)).collect();
    let mut seen = BTreeSet::new();
    for a in ring.elements() {
        for b in ring.elements() {
            if is_admissible(ring, a, b) {
                seen.insert(canonical_rep(ring, &units, a, b));
            }
        }
    }
    seen.into_iter().collect()
}

fn canonical_rep(ring: &FiniteRing, units: &[RingElement], a: RingElement, b: RingElement) -> ProjectivePoint {
    units
        .iter()
        .map(|&u| ProjectivePoint { alpha: ring.mul(u, a), beta: ring.mul(u, b) })
        .min_by_key(|p| (p.alpha.index, p.beta.index))
        .expect("1 is a unit")
}

impl ProjectiveLineModel {
    pub fn new(ring: FiniteRing) -> Result<Self, LineError> {
        ring.check_axioms()?;
        let points = enumerate_points(&ring);
        let units = ring.elements().filter(|&e| ring.is_unit(e)).collect();
        Ok(ProjectiveLineModel { ring, points, units })
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, p: ProjectivePoint) -> Option<usize> {
        self.points.binary_search(&p).ok()
    }

    fn owns(&self, p: ProjectivePoint) -> Result<(), LineError> {
        self.index_of(p).map(|_| ()).ok_or(LineError::ForeignPoint)
    }

    /// The point through the pair (a, b).
    pub fn point(&self, a: RingElement, b: RingElement) -> Result<ProjectivePoint, LineError> {
        self.ring.owns(a)?;
        self.ring.owns(b)?;
        if !is_admissible(&self.ring, a, b) {
            return Err(LineError::NotAdmissible(self.ring.name(a).into(), self.ring.name(b).into()));
        }
        Ok(canonical_rep(&self.ring, &self.units, a, b))
    }

    pub fn point_by_names(&self, a: &str, b: &str) -> Result<ProjectivePoint, LineError> {
        let a = self.ring.by_name(a)?;
        let b = self.ring.by_name(b)?;
        self.point(a, b)
    }

    /// Parses `(a,b)` with ring element names.
    pub fn parse_point(&self, s: &str) -> Result<ProjectivePoint, LineError> {
        let bad = || LineError::BadPointName(s.to_owned());
        let inner = s.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        self.point_by_names(a.trim(), b.trim())
    }

    pub fn name(&self, p: ProjectivePoint) -> String {
        format!("({},{})", self.ring.name(p.alpha), self.ring.name(p.beta))
    }

    pub fn is_distant(&self, p: ProjectivePoint, q: ProjectivePoint) -> bool {
        let r = &self.ring;
        r.is_unit(r.sub(r.mul(p.alpha, q.beta), r.mul(p.beta, q.alpha)))
    }

    /// Points neighbouring `p`, other than `p` itself.
    pub fn neighbourhood(&self, p: ProjectivePoint) -> Result<Vec<ProjectivePoint>, LineError> {
        self.owns(p)?;
        Ok(self.points.iter().copied().filter(|&q| q != p && !self.is_distant(p, q)).collect())
    }

    pub fn classify_point(&self, p: ProjectivePoint) -> ShellTag {
        let nz = [p.alpha, p.beta].iter().filter(|&&e| is_nontrivial_zero_divisor(&self.ring, e)).count();
        match nz {
            0 => ShellTag::Nucleus,
            1 => ShellTag::Mixed,
            _ => ShellTag::Outer,
        }
    }

    pub fn shell_counts(&self) -> BTreeMap<ShellTag, usize> {
        let mut m = BTreeMap::new();
        for &p in &self.points {
            *m.entry(self.classify_point(p)).or_insert(0) += 1;
        }
        m
    }

    /// Both entries units, or both nontrivial zero-divisors.
    pub fn same_character(&self, p: ProjectivePoint) -> bool {
        let r = &self.ring;
        (r.is_unit(p.alpha) && r.is_unit(p.beta))
            || (is_nontrivial_zero_divisor(r, p.alpha) && is_nontrivial_zero_divisor(r, p.beta))
    }

    /// Component types for lines over GF(2)^n.
    pub fn coordinate_types(&self, p: ProjectivePoint) -> Option<Vec<CoordType>> {
        let RingStructure::DirectProduct { n, coords } = self.ring.structure() else {
            return None;
        };
        let (a, b) = (coords[p.alpha.index], coords[p.beta.index]);
        Some(
            (0..*n)
                .map(|k| match ((a >> k) & 1, (b >> k) & 1) {
                    (1, 0) => CoordType::U,
                    (0, 1) => CoordType::V,
                    _ => CoordType::W,
                })
                .collect(),
        )
    }

    /// Distant relation between two point lists, labelled by point names.
    pub fn relation_on(&self, rows: &[ProjectivePoint], cols: &[ProjectivePoint]) -> RelationMatrix {
        RelationMatrix::rect_from_fn(
            rows.iter().map(|&p| self.name(p)).collect(),
            cols.iter().map(|&p| self.name(p)).collect(),
            |i, j| self.is_distant(rows[i], cols[j]),
        )
    }

    pub fn distant_graph(&self) -> RelationMatrix {
        self.relation_on(&self.points, &self.points)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let points: Vec<serde_json::Value> = self
            .points
            .iter()
            .map(|&p| {
                serde_json::json!({
                    "name": self.name(p),
                    "alpha": self.ring.name(p.alpha),
                    "beta": self.ring.name(p.beta),
                    "shell": self.classify_point(p).to_string(),
                })
            })
            .collect();
        serde_json::json!({ "ring_order": self.ring.order(), "count": self.points.len(), "points": points })
    }
}

/// The nine points of a nine-point line arranged so every row and every
/// column is a mutually distant triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Array3x3 {
    pub cells: [[ProjectivePoint; 3]; 3],
    /// The same-character triple, placed as the third column.
    pub distinguished: Vec<ProjectivePoint>,
}

impl Array3x3 {
    pub fn names(&self, model: &ProjectiveLineModel) -> [[String; 3]; 3] {
        self.cells.map(|row| row.map(|p| model.name(p)))
    }
}

fn distant_triangles(model: &ProjectiveLineModel) -> Vec<[ProjectivePoint; 3]> {
    let pts = model.points();
    let mut out = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                let (a, b, c) = (pts[i], pts[j], pts[k]);
                if model.is_distant(a, b) && model.is_distant(a, c) && model.is_distant(b, c) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// Rows and columns of `grid` are mutually distant triples of nine distinct points.
pub fn is_valid_grid(model: &ProjectiveLineModel, grid: &[[ProjectivePoint; 3]; 3]) -> bool {
    let distinct: BTreeSet<_> = grid.iter().flatten().collect();
    let triple_ok = |t: [ProjectivePoint; 3]| {
        model.is_distant(t[0], t[1]) && model.is_distant(t[0], t[2]) && model.is_distant(t[1], t[2])
    };
    distinct.len() == 9
        && grid.iter().all(|r| triple_ok(*r))
        && (0..3).all(|c| triple_ok([grid[0][c], grid[1][c], grid[2][c]]))
}

pub fn array_3x3(model: &ProjectiveLineModel) -> Result<Array3x3, LineError> {
    if model.len() != 9 {
        return Err(LineError::NotNinePoints(model.len()));
    }
    let triangles = distant_triangles(model);
    let distinguished: Vec<ProjectivePoint> = model.points().iter().copied().filter(|&p| model.same_character(p)).collect();
    let disjoint = |a: &[ProjectivePoint; 3], b: &[ProjectivePoint; 3]| a.iter().all(|p| !b.contains(p));
    let col3: [ProjectivePoint; 3] = {
        let t = triangles.iter().find(|t| t.iter().all(|p| distinguished.contains(p))).ok_or(LineError::NotRookGraph)?;
        // units entry first, then zero-divisor pairs in point order
        let mut t = *t;
        t.sort_by_key(|&p| (!model.ring().is_unit(p.alpha), p));
        t
    };
    let mut cols: Vec<[ProjectivePoint; 3]> = triangles.iter().filter(|t| disjoint(t, &col3)).copied().collect();
    cols.sort();
    if cols.len() != 2 || !disjoint(&cols[0], &cols[1]) || triangles.len() != 6 {
        return Err(LineError::NotRookGraph);
    }
    let mut cells = [[col3[0]; 3]; 3];
    for (r, &anchor) in col3.iter().enumerate() {
        let row = triangles
            .iter()
            .find(|t| t.contains(&anchor) && !disjoint(t, &cols[0]) && !disjoint(t, &cols[1]))
            .ok_or(LineError::NotRookGraph)?;
        let pick = |col: &[ProjectivePoint; 3]| row.iter().copied().find(|p| col.contains(p));
        cells[r] = [pick(&cols[0]).ok_or(LineError::NotRookGraph)?, pick(&cols[1]).ok_or(LineError::NotRookGraph)?, anchor];
    }
    if !is_valid_grid(model, &cells) {
        return Err(LineError::NotRookGraph);
    }
    Ok(Array3x3 { cells, distinguished })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_ring::{direct_product_ring, quotient_ring_gf2};
    use crate::relation::{find_isomorphism, girth};

    fn line(n: usize) -> ProjectiveLineModel {
        ProjectiveLineModel::new(direct_product_ring(n).unwrap()).unwrap()
    }

    #[test]
    fn point_counts() {
        for n in 1..=4 {
            assert_eq!(line(n).len(), 3usize.pow(n as u32));
        }
        let gf4 = ProjectiveLineModel::new(quotient_ring_gf2(0b111).unwrap()).unwrap();
        assert_eq!(gf4.len(), 5);
        let gf8 = ProjectiveLineModel::new(quotient_ring_gf2(0b1011).unwrap()).unwrap();
        assert_eq!(gf8.len(), 9);
    }

    #[test]
    fn admissibility_shortcut_matches_definition() {
        for n in 1..=3 {
            let r = direct_product_ring(n).unwrap();
            for a in r.elements() {
                for b in r.elements() {
                    assert_eq!(is_admissible(&r, a, b), is_admissible_exhaustive(&r, a, b));
                }
            }
        }
    }

    #[test]
    fn r_perp_points_and_neighbourhoods() {
        let m = line(2);
        let names: BTreeSet<String> = m.points().iter().map(|&p| m.name(p)).collect();
        let expected: BTreeSet<String> = ["(1,0)", "(1,x)", "(1,x+1)", "(1,1)", "(0,1)", "(x,1)", "(x+1,1)", "(x,x+1)", "(x+1,x)"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(names, expected);
        let nb = |s: &str| -> BTreeSet<String> {
            m.neighbourhood(m.parse_point(s).unwrap()).unwrap().into_iter().map(|p| m.name(p)).collect()
        };
        let set = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
        assert_eq!(nb("(1,0)"), set(&["(1,x)", "(1,x+1)", "(x,x+1)", "(x+1,x)"]));
        assert_eq!(nb("(0,1)"), set(&["(x,1)", "(x+1,1)", "(x,x+1)", "(x+1,x)"]));
        assert_eq!(nb("(1,1)"), set(&["(1,x)", "(1,x+1)", "(x,1)", "(x+1,1)"]));
    }

    #[test]
    fn r_perp_rook_graph() {
        let m = line(2);
        let g = m.distant_graph();
        assert!(g.is_simple_graph());
        assert_eq!(g.edge_count(), 18);
        assert_eq!(g.regular_degree(), Some(4));
        assert_eq!(girth(&g), Some(3));
        let rook = RelationMatrix::square_from_fn((0..9).map(|i| i.to_string()).collect(), |i, j| {
            i != j && (i / 3 == j / 3 || i % 3 == j % 3)
        });
        assert!(find_isomorphism(&g, &rook).is_some());
    }

    #[test]
    fn array_and_distinguished_triple() {
        let m = line(2);
        let a = array_3x3(&m).unwrap();
        let d: Vec<String> = a.distinguished.iter().map(|&p| m.name(p)).collect();
        assert_eq!(d.len(), 3);
        let col3: Vec<String> = (0..3).map(|r| m.name(a.cells[r][2])).collect();
        assert_eq!(col3, ["(1,1)", "(x,x+1)", "(x+1,x)"]);
        assert!(is_valid_grid(&m, &a.cells));
        let mut swapped = a.cells;
        let t = swapped[0][0];
        swapped[0][0] = swapped[1][1];
        swapped[1][1] = t;
        assert!(!is_valid_grid(&m, &swapped));
        assert_eq!(array_3x3(&line(3)), Err(LineError::NotNinePoints(27)));
    }

    #[test]
    fn r_triangle_shells() {
        let m = line(3);
        let c = m.shell_counts();
        assert_eq!(c[&ShellTag::Nucleus], 3);
        assert_eq!(c[&ShellTag::Mixed], 12);
        assert_eq!(c[&ShellTag::Outer], 12);
        assert_eq!(m.classify_point(m.parse_point("(b,y)").unwrap()), ShellTag::Outer);
        assert_eq!(m.classify_point(m.parse_point("(1,c)").unwrap()), ShellTag::Mixed);
    }

    #[test]
    fn distance_is_coordinatewise() {
        let m = line(3);
        for &p in m.points() {
            for &q in m.points() {
                let (tp, tq) = (m.coordinate_types(p).unwrap(), m.coordinate_types(q).unwrap());
                let differ = tp.iter().zip(&tq).all(|(a, b)| a != b);
                assert_eq!(m.is_distant(p, q), differ);
            }
        }
    }

    #[test]
    fn parse_errors() {
        let m = line(2);
        assert_eq!(m.parse_point("1,0"), Err(LineError::BadPointName("1,0".into())));
        assert_eq!(m.parse_point("(x,x)"), Err(LineError::NotAdmissible("x".into(), "x".into())));
        assert!(matches!(m.parse_point("(q,1)"), Err(LineError::Ring(_))));
        assert_eq!(m.parse_point("(x+1, 1)").unwrap(), m.point_by_names("x+1", "1").unwrap());
    }

    #[test]
    fn field_line_is_complete() {
        let m = ProjectiveLineModel::new(quotient_ring_gf2(0b1011).unwrap()).unwrap();
        let g = m.distant_graph();
        assert_eq!(g.regular_degree(), Some(8));
        assert!(m.points().iter().all(|&p| m.neighbourhood(p).unwrap().is_empty()));
    }
}
