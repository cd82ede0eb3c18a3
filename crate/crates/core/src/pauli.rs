//! The sixteen two-qubit Pauli operators with exact phased multiplication.
//!
//! Labels 1–15 follow the five-row mutually-unbiased arrangement
//!
//! ```text
//!  1 = I⊗Z   2 = Z⊗I   3 = Z⊗Z
//!  4 = X⊗I   5 = I⊗Y   6 = X⊗Y
//!  7 = X⊗Z   8 = Z⊗X   9 = Y⊗Y
//! 10 = I⊗X  11 = Y⊗I  12 = Y⊗X
//! 13 = Y⊗Z  14 = X⊗X  15 = Z⊗Y
//! ```
//!
//! and 0 is the identity. Products are computed symbolically from the
//! single-qubit rules (XY = iZ and cyclic); [`matrix_product`] recomputes
//! them with 4×4 matrices as an independent check.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exact_linalg::{
    self, is_unbiased_pair, pauli_2x2, schmidt_rank, ExactMatrix, GaussianInt, GaussianRational, LinalgError,
    SignSignature, StateVector,
};
use crate::fixtures::{FixtureError, Fixtures};
use crate::relation::{self, RelationMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("label {0} is outside 0..=15")]
    LabelOutOfRange(u8),
    #[error("operators {0} and {1} do not commute")]
    NotCommuting(u8, u8),
    #[error("triple {0:?} is not closed under the phaseless product")]
    NotClosed([u8; 3]),
    #[error("base {0} is not in the universe")]
    BaseOutsideUniverse(u8),
    #[error("the identity is not a point of any pencil")]
    IdentityBase,
    #[error("no Mermin square {0}; squares are numbered 1..=4")]
    NoSuchSquare(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Fixture(#[from] FixtureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Factor {
    I,
    X,
    Y,
    Z,
}

impl Factor {
    pub fn symbol(self) -> char {
        match self {
            Factor::I => 'I',
            Factor::X => 'X',
            Factor::Y => 'Y',
            Factor::Z => 'Z',
        }
    }

    /// Single-qubit product `self · rhs` as (power of i, factor).
    fn times(self, rhs: Factor) -> (u8, Factor) {
        use Factor::*;
        match (self, rhs) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }
}

const FACTORS: [(Factor, Factor); 16] = {
    use Factor::*;
    [
        (I, I),
        (I, Z),
        (Z, I),
        (Z, Z),
        (X, I),
        (I, Y),
        (X, Y),
        (X, Z),
        (Z, X),
        (Y, Y),
        (I, X),
        (Y, I),
        (Y, X),
        (Y, Z),
        (X, X),
        (Z, Y),
    ]
};

/// One of the sixteen operators, by label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PauliOp(u8);

impl PauliOp {
    pub fn new(label: u8) -> Result<Self, PauliError> {
        if label < 16 {
            Ok(PauliOp(label))
        } else {
            Err(PauliError::LabelOutOfRange(label))
        }
    }

    /// Panics on labels above 15; for literal labels in code.
    pub fn of(label: u8) -> Self {
        Self::new(label).expect("label in 0..=15")
    }

    pub fn all() -> impl Iterator<Item = PauliOp> {
        (0..16).map(PauliOp)
    }

    pub fn label(self) -> u8 {
        self.0
    }

    pub fn left_factor(self) -> Factor {
        FACTORS[self.0 as usize].0
    }

    pub fn right_factor(self) -> Factor {
        FACTORS[self.0 as usize].1
    }

    fn from_factors(left: Factor, right: Factor) -> PauliOp {
        PauliOp(FACTORS.iter().position(|&f| f == (left, right)).expect("all pairs labeled") as u8)
    }

    pub fn tensor_name(self) -> String {
        format!("{}⊗{}", self.left_factor().symbol(), self.right_factor().symbol())
    }
}

/// A power of i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    One,
    I,
    MinusOne,
    MinusI,
}

impl Phase {
    pub fn from_power(k: u8) -> Phase {
        match k % 4 {
            0 => Phase::One,
            1 => Phase::I,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn power(self) -> u8 {
        match self {
            Phase::One => 0,
            Phase::I => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    pub fn to_gaussian(self) -> GaussianInt {
        GaussianInt::UNITS[self.power() as usize]
    }

    pub fn from_gaussian(z: GaussianInt) -> Option<Phase> {
        GaussianInt::UNITS.iter().position(|&u| u == z).map(|k| Phase::from_power(k as u8))
    }

    /// `+`, `-`, `+i`, `-i`.
    pub fn symbol(self) -> &'static str {
        match self {
            Phase::One => "+",
            Phase::I => "+i",
            Phase::MinusOne => "-",
            Phase::MinusI => "-i",
        }
    }

    /// Prefix used in table cells: ``, `i`, `-`, `-i`.
    fn cell_prefix(self) -> &'static str {
        match self {
            Phase::One => "",
            Phase::I => "i",
            Phase::MinusOne => "-",
            Phase::MinusI => "-i",
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase::from_power(self.power() + rhs.power())
    }
}

impl Serialize for Phase {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.symbol())
    }
}

/// `phase × operator(label)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhasedOp {
    pub phase: Phase,
    pub label: u8,
}

impl PhasedOp {
    /// Parses a table cell such as `-i14`, `i6`, `-9` or `12`.
    pub fn parse(cell: &str) -> Option<PhasedOp> {
        let s: String = cell.chars().filter(|c| !c.is_whitespace()).collect();
        let s = s.replace('−', "-");
        let (neg, rest) = match s.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, s.strip_prefix('+').unwrap_or(&s)),
        };
        let (imag, digits) = match rest.strip_prefix('i') {
            Some(r) => (true, r),
            None => (false, rest),
        };
        let label: u8 = digits.parse().ok()?;
        if label > 15 {
            return None;
        }
        let phase = Phase::from_power(u8::from(imag) + if neg { 2 } else { 0 });
        Some(PhasedOp { phase, label })
    }
}

impl fmt::Display for PhasedOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.phase.cell_prefix(), self.label)
    }
}

impl Serialize for PhasedOp {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

fn factor_matrix(f: Factor) -> ExactMatrix {
    pauli_2x2(f.symbol())
}

/// Left factor ⊗ right factor as a 4×4 matrix.
pub fn op_matrix(label: u8) -> Result<ExactMatrix, PauliError> {
    let op = PauliOp::new(label)?;
    Ok(factor_matrix(op.left_factor()).tensor(&factor_matrix(op.right_factor())))
}

pub fn phased_product(a: PauliOp, b: PauliOp) -> PhasedOp {
    let (pl, l) = a.left_factor().times(b.left_factor());
    let (pr, r) = a.right_factor().times(b.right_factor());
    PhasedOp { phase: Phase::from_power(pl + pr), label: PauliOp::from_factors(l, r).label() }
}

/// Label of the product with the phase dropped.
pub fn phaseless(a: u8, b: u8) -> u8 {
    phased_product(PauliOp::of(a), PauliOp::of(b)).label
}

/// The product recomputed by multiplying matrices and matching the result
/// against `phase × op_matrix(label)` for all sixteen labels.
pub fn matrix_product(a: PauliOp, b: PauliOp) -> Option<PhasedOp> {
    let m = op_matrix(a.label()).ok()?.matmul(&op_matrix(b.label()).ok()?).ok()?;
    PauliOp::all().find_map(|c| {
        let s = m.proportionality(&op_matrix(c.label()).ok()?)?;
        let phase = Phase::from_gaussian(s.to_gaussian_int()?)?;
        Some(PhasedOp { phase, label: c.label() })
    })
}

pub fn commutes(a: PauliOp, b: PauliOp) -> bool {
    phased_product(a, b) == phased_product(b, a)
}

fn commutes_labels(a: u8, b: u8) -> bool {
    commutes(PauliOp::of(a), PauliOp::of(b))
}

/// Left-to-right product of a sequence of labels.
pub fn ordered_product(labels: &[u8]) -> PhasedOp {
    labels.iter().fold(PhasedOp { phase: Phase::One, label: 0 }, |acc, &l| {
        let p = phased_product(PauliOp::of(acc.label), PauliOp::of(l));
        PhasedOp { phase: acc.phase * p.phase, label: p.label }
    })
}

pub const SET_A: [u8; 8] = [0, 1, 2, 3, 6, 14, 9, 12];
pub const SET_B: [u8; 8] = [4, 7, 11, 13, 5, 10, 15, 8];
pub const KERNEL: [u8; 7] = [1, 2, 3, 6, 14, 9, 12];

/// Which multiplication table: rows and columns in printed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TableSet {
    A,
    B,
    AB,
}

impl TableSet {
    pub fn fixture_id(self) -> u8 {
        match self {
            TableSet::A => 1,
            TableSet::B => 2,
            TableSet::AB => 3,
        }
    }

    pub fn rows(self) -> [u8; 8] {
        match self {
            TableSet::A => SET_A,
            TableSet::B | TableSet::AB => SET_B,
        }
    }

    pub fn cols(self) -> [u8; 8] {
        match self {
            TableSet::A | TableSet::AB => SET_A,
            TableSet::B => SET_B,
        }
    }
}

pub fn product_table(set: TableSet) -> Vec<Vec<PhasedOp>> {
    set.rows()
        .iter()
        .map(|&r| set.cols().iter().map(|&c| phased_product(PauliOp::of(r), PauliOp::of(c))).collect())
        .collect()
}

pub fn render_table(set: TableSet) -> String {
    let table = product_table(set);
    let mut out = format!("{:>4}", "*");
    for c in set.cols() {
        out.push_str(&format!(" {c:>5}"));
    }
    out.push('\n');
    for (r, row) in set.rows().iter().zip(&table) {
        out.push_str(&format!("{r:>4}"));
        for cell in row {
            out.push_str(&format!(" {:>5}", cell.to_string()));
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellDiscrepancy {
    pub row: String,
    pub col: String,
    pub expected: String,
    pub computed: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub table: u8,
    pub cells_checked: usize,
    pub discrepancies: Vec<CellDiscrepancy>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty() && self.cells_checked == 64
    }
}

/// Regenerates one multiplication table and diffs it against its fixture.
pub fn verify_table(set: TableSet, fixtures: &Fixtures) -> Result<TableReport, PauliError> {
    let grid = fixtures.grid(set.fixture_id())?;
    let mut discrepancies = Vec::new();
    let mut cells_checked = 0;
    let header_ok = grid.col_labels == set.cols().map(|c| c.to_string())
        && grid.row_labels == set.rows().map(|r| r.to_string());
    if !header_ok {
        discrepancies.push(CellDiscrepancy {
            row: "header".into(),
            col: "header".into(),
            expected: format!("{:?} x {:?}", grid.row_labels, grid.col_labels),
            computed: format!("{:?} x {:?}", set.rows(), set.cols()),
        });
    }
    for (r, row_label) in grid.row_labels.iter().enumerate() {
        for (c, col_label) in grid.col_labels.iter().enumerate() {
            let text = &grid.cells[r][c];
            let computed = match (row_label.parse::<u8>(), col_label.parse::<u8>()) {
                (Ok(a), Ok(b)) if a < 16 && b < 16 => phased_product(PauliOp::of(a), PauliOp::of(b)),
                _ => continue,
            };
            cells_checked += 1;
            if PhasedOp::parse(text) != Some(computed) {
                discrepancies.push(CellDiscrepancy {
                    row: row_label.clone(),
                    col: col_label.clone(),
                    expected: text.clone(),
                    computed: computed.to_string(),
                });
            }
        }
    }
    Ok(TableReport { table: set.fixture_id(), cells_checked, discrepancies })
}

pub fn verify_tables(fixtures: &Fixtures) -> Result<Vec<TableReport>, PauliError> {
    [TableSet::A, TableSet::B, TableSet::AB].into_iter().map(|s| verify_table(s, fixtures)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OperatorPartition {
    pub a: BTreeSet<u8>,
    pub b: BTreeSet<u8>,
    pub c: BTreeSet<u8>,
    pub e: BTreeSet<u8>,
}

impl OperatorPartition {
    pub fn standard() -> Self {
        OperatorPartition {
            a: SET_A.into_iter().collect(),
            b: SET_B.into_iter().collect(),
            c: [0, 1, 2, 3].into_iter().collect(),
            e: [6, 9, 12, 14].into_iter().collect(),
        }
    }

    pub fn is_partition(&self) -> bool {
        self.a.is_disjoint(&self.b)
            && self.a.union(&self.b).count() == 16
            && self.c.union(&self.e).copied().collect::<BTreeSet<_>>() == self.a
    }
}

/// A·A ⊆ A, B·B ⊆ A and A·B ⊆ B under the phaseless product.
pub fn closure_check(p: &OperatorPartition) -> bool {
    let lands = |x: &BTreeSet<u8>, y: &BTreeSet<u8>, target: &BTreeSet<u8>| {
        x.iter().all(|&s| y.iter().all(|&t| target.contains(&phaseless(s, t))))
    };
    lands(&p.a, &p.a, &p.a) && lands(&p.b, &p.b, &p.a) && lands(&p.a, &p.b, &p.b)
}

pub const MUB_ROWS: [[u8; 3]; 5] = [[1, 2, 3], [4, 5, 6], [7, 8, 9], [10, 11, 12], [13, 14, 15]];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Basis {
    pub triple: [u8; 3],
    pub vectors: Vec<(StateVector, SignSignature)>,
    pub entangled: bool,
}

impl Basis {
    pub fn states(&self) -> Vec<StateVector> {
        self.vectors.iter().map(|(v, _)| *v).collect()
    }
}

pub fn joint_eigenbasis(a: PauliOp, b: PauliOp) -> Result<Vec<(StateVector, SignSignature)>, PauliError> {
    if !commutes(a, b) {
        return Err(PauliError::NotCommuting(a.label(), b.label()));
    }
    let third = phased_product(a, b).label;
    Ok(exact_linalg::joint_eigenbasis(&op_matrix(a.label())?, &op_matrix(b.label())?, &op_matrix(third)?)?)
}

/// Joint eigenbasis of a closed commuting triple, with signatures over all
/// three members; entangled iff every vector has Schmidt rank 2.
pub fn line_eigenbasis(triple: [u8; 3]) -> Result<Basis, PauliError> {
    for &l in &triple {
        PauliOp::new(l)?;
    }
    let [a, b, c] = triple;
    for (x, y) in [(a, b), (a, c), (b, c)] {
        if !commutes_labels(x, y) {
            return Err(PauliError::NotCommuting(x, y));
        }
    }
    if phaseless(a, b) != c {
        return Err(PauliError::NotClosed(triple));
    }
    let vectors = joint_eigenbasis(PauliOp::of(a), PauliOp::of(b))?;
    let mut entangled = true;
    for (v, _) in &vectors {
        entangled &= schmidt_rank(v)? == 2;
    }
    Ok(Basis { triple, vectors, entangled })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MubReport {
    pub bases: Vec<Basis>,
    pub unbiased_pairs: Vec<(usize, usize, bool)>,
    pub pairs_checked: usize,
    pub all_unbiased: bool,
    /// 1-based rows whose basis is fully entangled.
    pub entangled_rows: Vec<usize>,
}

pub fn mub_partition() -> Result<MubReport, PauliError> {
    let bases = MUB_ROWS.iter().map(|&row| line_eigenbasis(row)).collect::<Result<Vec<_>, _>>()?;
    let mut unbiased_pairs = Vec::new();
    for i in 0..bases.len() {
        for j in i + 1..bases.len() {
            unbiased_pairs.push((i + 1, j + 1, is_unbiased_pair(&bases[i].states(), &bases[j].states())?));
        }
    }
    let entangled_rows = bases.iter().enumerate().filter(|(_, b)| b.entangled).map(|(i, _)| i + 1).collect();
    Ok(MubReport {
        pairs_checked: unbiased_pairs.len(),
        all_unbiased: unbiased_pairs.iter().all(|p| p.2),
        unbiased_pairs,
        bases,
        entangled_rows,
    })
}

/// Real parts, imaginary parts and sign signature of one printed vector.
pub type PrintedVector = ([i64; 4], [i64; 4], &'static str);

/// The printed joint eigenbases: the three rows and three columns of the
/// first Mermin square, and the entangled third row of squares 3 and 4.
pub const PRINTED_EIGENBASES: [([u8; 3], [PrintedVector; 4]); 7] = [
    ([1, 2, 3], [([1, 0, 0, 0], [0; 4], "+++"), ([0, 1, 0, 0], [0; 4], "-+-"), ([0, 0, 1, 0], [0; 4], "+--"), ([0, 0, 0, 1], [0; 4], "--+")]),
    ([4, 10, 14], [([1, 1, 1, 1], [0; 4], "+++"), ([1, -1, 1, -1], [0; 4], "+--"), ([1, 1, -1, -1], [0; 4], "-+-"), ([1, -1, -1, 1], [0; 4], "--+")]),
    ([7, 8, 9], [([1, 1, 1, -1], [0; 4], "+++"), ([1, -1, 1, 1], [0; 4], "+--"), ([1, 1, -1, 1], [0; 4], "-+-"), ([1, -1, -1, -1], [0; 4], "--+")]),
    ([1, 4, 7], [([1, 0, 1, 0], [0; 4], "+++"), ([1, 0, -1, 0], [0; 4], "+--"), ([0, 1, 0, 1], [0; 4], "-+-"), ([0, 1, 0, -1], [0; 4], "--+")]),
    ([2, 10, 8], [([1, 1, 0, 0], [0; 4], "+++"), ([1, -1, 0, 0], [0; 4], "+--"), ([0, 0, 1, 1], [0; 4], "-+-"), ([0, 0, 1, -1], [0; 4], "--+")]),
    ([3, 14, 9], [([1, 0, 0, 1], [0; 4], "++-"), ([1, 0, 0, -1], [0; 4], "+-+"), ([0, 1, 1, 0], [0; 4], "-++"), ([0, -1, 1, 0], [0; 4], "---")]),
    ([3, 6, 12], [([1, 0, 0, 0], [0, 0, 0, 1], "+++"), ([1, 0, 0, 0], [0, 0, 0, -1], "+--"), ([0, 1, 0, 0], [0, 0, 1, 0], "-++"), ([0, 1, 0, 0], [0, 0, -1, 0], "---")]),
];

/// A printed basis entry as (real parts, imaginary parts) plus signature.
pub fn printed_vector(re: [i64; 4], im: [i64; 4]) -> StateVector {
    StateVector(std::array::from_fn(|k| GaussianInt::new(re[k], im[k])))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenbasisComparison {
    pub triple: [u8; 3],
    /// Printed vectors found in the computed basis with the printed signature.
    pub matched: usize,
    /// Printed vectors found in the computed basis, whatever the signature.
    pub vectors_matched: usize,
    pub mismatches: Vec<SignatureMismatch>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignatureMismatch {
    pub vector: String,
    pub printed: SignSignature,
    /// Signature of the computed vector on the same ray, if any.
    pub computed: Option<SignSignature>,
    /// Whether the printed signature obeys s3 = phase · s1 · s2 for the
    /// real phase of the product of the first two operators.
    pub printed_consistent: bool,
}

impl EigenbasisComparison {
    pub fn passed(&self) -> bool {
        self.matched == 4 && self.mismatches.is_empty()
    }
}

/// Whether signature (s1, s2, s3) can occur for a triple whose first two
/// members multiply to `phase` times the third.
pub fn signature_consistent(triple: [u8; 3], sig: SignSignature) -> bool {
    let p = phased_product(PauliOp::of(triple[0]), PauliOp::of(triple[1]));
    let phase = match p.phase {
        Phase::One => 1,
        Phase::MinusOne => -1,
        _ => return false,
    };
    p.label == triple[2] && sig.0[2].value() == phase * sig.0[0].value() * sig.0[1].value()
}

/// Compares each printed basis with the computed one, vectors up to a
/// global scalar and signatures exactly.
pub fn compare_printed_eigenbases() -> Result<Vec<EigenbasisComparison>, PauliError> {
    PRINTED_EIGENBASES
        .iter()
        .map(|(triple, entries)| {
            let computed = line_eigenbasis(*triple)?;
            let mut mismatches = Vec::new();
            let (mut matched, mut vectors_matched) = (0, 0);
            for (re, im, sig) in entries {
                let v = printed_vector(*re, *im);
                let sig = SignSignature::parse(sig).expect("valid signature literal");
                let on_ray = computed.vectors.iter().find(|(w, _)| w.same_ray(&v)).map(|(_, s)| *s);
                vectors_matched += usize::from(on_ray.is_some());
                if on_ray == Some(sig) {
                    matched += 1;
                } else {
                    mismatches.push(SignatureMismatch {
                        vector: v.to_string(),
                        printed: sig,
                        computed: on_ray,
                        printed_consistent: signature_consistent(*triple, sig),
                    });
                }
            }
            Ok(EigenbasisComparison { triple: *triple, matched, vectors_matched, mismatches })
        })
        .collect()
}

pub const MERMIN_SQUARES: [[[u8; 3]; 3]; 4] = [
    [[1, 2, 3], [4, 10, 14], [7, 8, 9]],
    [[1, 2, 3], [13, 15, 14], [11, 5, 9]],
    [[1, 4, 7], [2, 5, 15], [3, 6, 12]],
    [[1, 11, 13], [2, 10, 8], [3, 12, 6]],
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MerminReport {
    pub square: usize,
    pub grid: [[u8; 3]; 3],
    pub lines_commute: bool,
    /// Phase of each ordered row product when it is a multiple of the
    /// identity; `None` otherwise.
    pub row_phases: [Option<Phase>; 3],
    pub col_phases: [Option<Phase>; 3],
}

impl MerminReport {
    /// Rows and the first two columns give +identity, the third gives −identity.
    pub fn has_expected_signs(&self) -> bool {
        self.lines_commute
            && self.row_phases.iter().all(|p| *p == Some(Phase::One))
            && self.col_phases == [Some(Phase::One), Some(Phase::One), Some(Phase::MinusOne)]
    }
}

pub fn mermin_square(index: usize) -> Result<MerminReport, PauliError> {
    let grid = *MERMIN_SQUARES.get(index.wrapping_sub(1)).ok_or(PauliError::NoSuchSquare(index))?;
    let rows: Vec<[u8; 3]> = grid.to_vec();
    let cols: Vec<[u8; 3]> = (0..3).map(|c| [grid[0][c], grid[1][c], grid[2][c]]).collect();
    let mutually_commuting = |t: &[u8; 3]| (0..3).all(|i| (0..3).all(|j| commutes_labels(t[i], t[j])));
    let phase_of = |t: &[u8; 3]| {
        let p = ordered_product(t);
        (p.label == 0).then_some(p.phase)
    };
    Ok(MerminReport {
        square: index,
        grid,
        lines_commute: rows.iter().chain(&cols).all(mutually_commuting),
        row_phases: std::array::from_fn(|i| phase_of(&rows[i])),
        col_phases: std::array::from_fn(|i| phase_of(&cols[i])),
    })
}

pub fn mermin_squares() -> Vec<MerminReport> {
    (1..=4).map(|i| mermin_square(i).expect("four squares")).collect()
}

/// How often each label occurs across the four squares.
pub fn mermin_label_counts() -> [usize; 16] {
    let mut counts = [0; 16];
    for sq in MERMIN_SQUARES {
        for row in sq {
            for l in row {
                counts[l as usize] += 1;
            }
        }
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanoEmbedding {
    /// (label, point as a nonzero 3-bit vector)
    pub points: Vec<(u8, u8)>,
    pub lines: Vec<[u8; 3]>,
}

/// Checks φ(phaseless(a∗b)) = φ(a) ⊕ φ(b) for all distinct a, b.
pub fn is_fano_embedding(points: &[(u8, u8)]) -> bool {
    let image = |l: u8| points.iter().find(|p| p.0 == l).map(|p| p.1);
    let distinct: BTreeSet<u8> = points.iter().map(|p| p.1).collect();
    if distinct.len() != points.len() || distinct.contains(&0) || distinct.iter().any(|&v| v > 7) {
        return false;
    }
    points.iter().all(|&(a, fa)| {
        points
            .iter()
            .filter(|&&(b, _)| b != a)
            .all(|&(b, fb)| image(phaseless(a, b)) == Some(fa ^ fb))
    })
}

/// Lexicographically first bijection A∖{0} → PG(2,2) turning the
/// phaseless product into XOR, with the seven lines it induces.
pub fn fano_embedding() -> Option<FanoEmbedding> {
    let labels: Vec<u8> = {
        let mut v: Vec<u8> = SET_A.iter().copied().filter(|&l| l != 0).collect();
        v.sort_unstable();
        v
    };
    let mut assign = vec![0u8; 7];
    let mut used = [false; 8];
    fn go(k: usize, labels: &[u8], assign: &mut Vec<u8>, used: &mut [bool; 8]) -> bool {
        if k == labels.len() {
            let pts: Vec<(u8, u8)> = labels.iter().copied().zip(assign.iter().copied()).collect();
            return is_fano_embedding(&pts);
        }
        for v in 1..8u8 {
            if used[v as usize] {
                continue;
            }
            // partial check against already placed labels
            let ok = (0..k).all(|j| {
                let c = phaseless(labels[k], labels[j]);
                match labels[..k].iter().position(|&l| l == c) {
                    Some(p) => assign[p] == v ^ assign[j],
                    None => true,
                }
            });
            if !ok {
                continue;
            }
            assign[k] = v;
            used[v as usize] = true;
            if go(k + 1, labels, assign, used) {
                return true;
            }
            used[v as usize] = false;
        }
        false
    }
    if !go(0, &labels, &mut assign, &mut used) {
        return None;
    }
    let points: Vec<(u8, u8)> = labels.iter().copied().zip(assign.iter().copied()).collect();
    let mut lines = Vec::new();
    for i in 0..7 {
        for j in i + 1..7 {
            for k in j + 1..7 {
                if points[i].1 ^ points[j].1 ^ points[k].1 == 0 {
                    lines.push([points[i].0, points[j].0, points[k].0]);
                }
            }
        }
    }
    Some(FanoEmbedding { points, lines })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PencilLine {
    pub points: [u8; 3],
    /// Full line: the three operators mutually commute.
    pub commuting: bool,
    /// For full lines, whether their joint eigenbasis is entangled.
    pub entangled: Option<bool>,
}

/// All phaseless-product lines `{base, a, base∗a}` inside `universe`.
pub fn pencil_through(base: u8, universe: &BTreeSet<u8>) -> Result<Vec<PencilLine>, PauliError> {
    PauliOp::new(base)?;
    if base == 0 {
        return Err(PauliError::IdentityBase);
    }
    if !universe.contains(&base) {
        return Err(PauliError::BaseOutsideUniverse(base));
    }
    let mut lines = Vec::new();
    for &a in universe {
        if a == base || a == 0 || a > 15 {
            continue;
        }
        let c = phaseless(base, a);
        if c == 0 || c == base || !universe.contains(&c) || c < a {
            continue;
        }
        let points = [base, a, c];
        let commuting = commutes_labels(base, a) && commutes_labels(base, c) && commutes_labels(a, c);
        let entangled = if commuting { Some(line_eigenbasis(points)?.entangled) } else { None };
        lines.push(PencilLine { points, commuting, entangled });
    }
    Ok(lines)
}

/// Commutation graph over the given labels (edges join distinct commuting
/// operators).
pub fn commutation_graph(labels: &[u8]) -> RelationMatrix {
    RelationMatrix::square_from_fn(labels.iter().map(|l| l.to_string()).collect(), |i, j| {
        i != j && commutes_labels(labels[i], labels[j])
    })
}

/// Commutation relation between two label lists.
pub fn commutation_rect(rows: &[u8], cols: &[u8]) -> RelationMatrix {
    RelationMatrix::rect_from_fn(
        rows.iter().map(|l| l.to_string()).collect(),
        cols.iter().map(|l| l.to_string()).collect(),
        |i, j| rows[i] != cols[j] && commutes_labels(rows[i], cols[j]),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CubeReport {
    pub graph: RelationMatrix,
    pub regular_degree: Option<usize>,
    pub edges: usize,
    pub bipartite: bool,
    pub girth: Option<usize>,
    /// label → vertex of Q₃ (as a 3-bit string)
    pub isomorphism: Option<Vec<(u8, String)>>,
}

impl CubeReport {
    pub fn is_cube(&self) -> bool {
        self.regular_degree == Some(3) && self.edges == 12 && self.bipartite && self.girth == Some(4) && self.isomorphism.is_some()
    }
}

pub fn cube_structure() -> CubeReport {
    let mut labels = SET_B;
    labels.sort_unstable();
    let graph = commutation_graph(&labels);
    let q3 = relation::cube_graph();
    let isomorphism = relation::find_isomorphism(&graph, &q3)
        .map(|m| labels.iter().zip(m).map(|(&l, v)| (l, q3.row_labels[v].clone())).collect());
    CubeReport {
        regular_degree: graph.regular_degree(),
        edges: graph.edge_count(),
        bipartite: graph.bipartition().is_some(),
        girth: relation::girth(&graph),
        isomorphism,
        graph,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairCoupling {
    pub pair: (u8, u8),
    pub first_commuters: Vec<u8>,
    pub second_commuters: Vec<u8>,
    /// Both four-tuples, disjoint, covering all eight outer operators.
    pub complementary: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CouplingReport {
    pub pairs: Vec<PairCoupling>,
    /// Every kernel pair whose members commute with complementary
    /// four-tuples of outer operators.
    pub qualifying_pairs: Vec<(u8, u8)>,
    pub full_graph_degree: Option<usize>,
    pub full_graph_edges: usize,
}

impl CouplingReport {
    pub fn matches_expected(&self) -> bool {
        self.qualifying_pairs == [(1, 2), (6, 12), (9, 14)]
            && self.pairs.iter().all(|p| p.complementary)
            && self.full_graph_degree == Some(6)
            && self.full_graph_edges == 45
    }
}

fn outer_commuters(label: u8) -> Vec<u8> {
    let mut v: Vec<u8> = SET_B.iter().copied().filter(|&b| commutes_labels(label, b)).collect();
    v.sort_unstable();
    v
}

fn pair_coupling(p: u8, q: u8) -> PairCoupling {
    let first = outer_commuters(p);
    let second = outer_commuters(q);
    let union: BTreeSet<u8> = first.iter().chain(&second).copied().collect();
    PairCoupling {
        pair: (p, q),
        complementary: first.len() == 4 && second.len() == 4 && union.len() == 8,
        first_commuters: first,
        second_commuters: second,
    }
}

pub fn shell_coupling() -> CouplingReport {
    let pairs = [(6, 12), (9, 14), (1, 2)].iter().map(|&(p, q)| pair_coupling(p, q)).collect();
    let mut kernel = KERNEL;
    kernel.sort_unstable();
    let mut qualifying_pairs = Vec::new();
    for i in 0..kernel.len() {
        for j in i + 1..kernel.len() {
            if pair_coupling(kernel[i], kernel[j]).complementary {
                qualifying_pairs.push((kernel[i], kernel[j]));
            }
        }
    }
    let nontrivial: Vec<u8> = (1..16).collect();
    let full = commutation_graph(&nontrivial);
    CouplingReport {
        pairs,
        qualifying_pairs,
        full_graph_degree: full.regular_degree(),
        full_graph_edges: full.edge_count(),
    }
}

/// `scale` used by callers that need the identity matrix with a phase.
pub fn phased_identity(phase: Phase) -> ExactMatrix {
    ExactMatrix::identity(4).scale(GaussianRational::from(phase.to_gaussian()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::sign_on;

    fn pp(a: u8, b: u8) -> PhasedOp {
        phased_product(PauliOp::of(a), PauliOp::of(b))
    }

    #[test]
    fn matrices() {
        assert_eq!(op_matrix(0).unwrap(), ExactMatrix::identity(4));
        let one = op_matrix(1).unwrap();
        let diag: Vec<i64> = (0..4).map(|i| one.get(i, i).num().re).collect();
        assert_eq!(diag, [1, -1, 1, -1]);
        assert_eq!(op_matrix(6).unwrap(), pauli_2x2('X').tensor(&pauli_2x2('Y')));
        assert_eq!(op_matrix(16), Err(PauliError::LabelOutOfRange(16)));
        for l in 1..16 {
            let m = op_matrix(l).unwrap();
            assert!(m.is_hermitian());
            assert!(m.trace().is_zero());
            assert_eq!(m.matmul(&m).unwrap(), ExactMatrix::identity(4));
        }
    }

    #[test]
    fn products() {
        assert_eq!(pp(1, 2), PhasedOp { phase: Phase::One, label: 3 });
        assert_eq!(pp(3, 14), PhasedOp { phase: Phase::MinusOne, label: 9 });
        assert_eq!(pp(6, 1), PhasedOp { phase: Phase::I, label: 14 });
        assert_eq!(pp(4, 5), PhasedOp { phase: Phase::One, label: 6 });
        let m3 = op_matrix(3).unwrap().matmul(&op_matrix(14).unwrap()).unwrap();
        assert_eq!(m3, op_matrix(9).unwrap().scale((-1).into()));
    }

    #[test]
    fn commutation() {
        assert!(commutes(PauliOp::of(1), PauliOp::of(2)));
        assert!(!commutes(PauliOp::of(1), PauliOp::of(6)));
        assert!(PauliOp::all().all(|k| commutes(PauliOp::of(0), k)));
    }

    #[test]
    fn phase_dichotomy_and_squares() {
        for a in PauliOp::all() {
            assert_eq!(phased_product(a, a), PhasedOp { phase: Phase::One, label: 0 });
            for b in PauliOp::all() {
                let (ab, ba) = (phased_product(a, b), phased_product(b, a));
                assert_eq!(ab.label, ba.label);
                assert!(ab.phase == ba.phase || ab.phase == ba.phase * Phase::MinusOne);
            }
        }
    }

    #[test]
    fn product_matches_matrix_oracle() {
        for a in PauliOp::all() {
            for b in PauliOp::all() {
                assert_eq!(matrix_product(a, b), Some(phased_product(a, b)), "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn cell_parsing() {
        assert_eq!(PhasedOp::parse("-i 14"), Some(PhasedOp { phase: Phase::MinusI, label: 14 }));
        assert_eq!(PhasedOp::parse("i6"), Some(PhasedOp { phase: Phase::I, label: 6 }));
        assert_eq!(PhasedOp::parse("-9"), Some(PhasedOp { phase: Phase::MinusOne, label: 9 }));
        assert_eq!(PhasedOp::parse("12"), Some(PhasedOp { phase: Phase::One, label: 12 }));
        assert_eq!(PhasedOp::parse("i"), None);
        assert_eq!(PhasedOp::parse("17"), None);
        for a in PauliOp::all() {
            for b in PauliOp::all() {
                let p = phased_product(a, b);
                assert_eq!(PhasedOp::parse(&p.to_string()), Some(p));
            }
        }
    }

    #[test]
    fn embedded_tables_match() {
        let fx = Fixtures::embedded();
        let reports = verify_tables(&fx).unwrap();
        assert!(reports[1].passed());
        let ab: Vec<(&str, &str, &str)> =
            reports[2].discrepancies.iter().map(|d| (d.row.as_str(), d.col.as_str(), d.expected.as_str())).collect();
        assert_eq!(ab, [("8", "14", "-i11")]);
        // the transcribed table has one sign-flipped antisymmetric pair
        let cells: Vec<(&str, &str, &str, &str)> = reports[0]
            .discrepancies
            .iter()
            .map(|d| (d.row.as_str(), d.col.as_str(), d.expected.as_str(), d.computed.as_str()))
            .collect();
        assert_eq!(cells, [("14", "12", "-i2", "i2"), ("12", "14", "i2", "-i2")]);
    }

    #[test]
    fn transcribed_pair_contradicts_associativity() {
        let fx = Fixtures::embedded();
        let g = fx.grid(1).unwrap();
        let cell = |r: &str, c: &str| PhasedOp::parse(g.cell(r, c).unwrap()).unwrap();
        // 14 = -(3*9), so 14*12 = -(3*(9*12))
        assert_eq!(cell("3", "9"), PhasedOp { phase: Phase::MinusOne, label: 14 });
        let nine_twelve = cell("9", "12");
        let three_x = cell("3", &nine_twelve.label.to_string());
        let implied = PhasedOp { phase: Phase::MinusOne * nine_twelve.phase * three_x.phase, label: three_x.label };
        assert_eq!(implied, PhasedOp { phase: Phase::I, label: 2 });
        assert_ne!(cell("14", "12"), implied);
    }

    #[test]
    fn partition_closure() {
        let p = OperatorPartition::standard();
        assert!(p.is_partition());
        assert!(closure_check(&p));
        let mut swapped = p.clone();
        swapped.a.remove(&6);
        swapped.a.insert(4);
        swapped.b.remove(&4);
        swapped.b.insert(6);
        assert!(!closure_check(&swapped));
        let everything = OperatorPartition {
            a: (0..16).collect(),
            b: BTreeSet::new(),
            c: BTreeSet::new(),
            e: BTreeSet::new(),
        };
        assert!(closure_check(&everything));
    }

    #[test]
    fn eigenbases() {
        let comp = joint_eigenbasis(PauliOp::of(1), PauliOp::of(2)).unwrap();
        let mut vs: Vec<StateVector> = comp.iter().map(|(v, _)| *v).collect();
        vs.sort();
        let mut expect: Vec<StateVector> =
            [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]].map(StateVector::from_ints).to_vec();
        expect.sort();
        assert_eq!(vs, expect);
        assert!(matches!(joint_eigenbasis(PauliOp::of(1), PauliOp::of(6)), Err(PauliError::NotCommuting(1, 6))));
        assert!(joint_eigenbasis(PauliOp::of(1), PauliOp::of(1)).is_err());
        assert!(joint_eigenbasis(PauliOp::of(0), PauliOp::of(1)).is_err());

        let cmps = compare_printed_eigenbases().unwrap();
        assert!(cmps.iter().all(|c| c.vectors_matched == 4));
        assert_eq!(cmps.iter().map(|c| c.matched).sum::<usize>(), 26);
        for c in &cmps[..6] {
            assert!(c.passed(), "{c:?}");
        }
        // the last printed basis carries two signatures no eigenvector can have
        let last = &cmps[6];
        assert_eq!(last.triple, [3, 6, 12]);
        let bad: Vec<(&str, String, Option<String>)> = last
            .mismatches
            .iter()
            .map(|m| (m.vector.as_str(), m.printed.to_string(), m.computed.map(|s| s.to_string())))
            .collect();
        assert_eq!(
            bad,
            [
                ("(0,1,i,0)", "-++".to_string(), Some("--+".to_string())),
                ("(0,1,-i,0)", "---".to_string(), Some("-+-".to_string())),
            ]
        );
        assert!(last.mismatches.iter().all(|m| !m.printed_consistent));
    }

    #[test]
    fn eigenvectors_are_exact() {
        for a in 1..16u8 {
            for b in a + 1..16u8 {
                if !commutes_labels(a, b) || phaseless(a, b) == 0 {
                    continue;
                }
                let basis = joint_eigenbasis(PauliOp::of(a), PauliOp::of(b)).unwrap();
                for (v, sig) in &basis {
                    assert_eq!(sign_on(&op_matrix(a).unwrap(), v).unwrap(), Some(sig.0[0]));
                    assert_eq!(sign_on(&op_matrix(b).unwrap(), v).unwrap(), Some(sig.0[1]));
                }
                for i in 0..4 {
                    for j in i + 1..4 {
                        assert!(exact_linalg::inner(&basis[i].0, &basis[j].0).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn line_bases() {
        assert!(!line_eigenbasis([1, 2, 3]).unwrap().entangled);
        assert!(line_eigenbasis([3, 14, 9]).unwrap().entangled);
        assert!(line_eigenbasis([3, 6, 12]).unwrap().entangled);
        assert_eq!(line_eigenbasis([1, 6, 14]), Err(PauliError::NotCommuting(1, 6)));
        assert_eq!(line_eigenbasis([1, 2, 4]), Err(PauliError::NotCommuting(2, 4)));
        assert_eq!(line_eigenbasis([1, 2, 0]), Err(PauliError::NotClosed([1, 2, 0])));
    }

    #[test]
    fn mubs() {
        let r = mub_partition().unwrap();
        assert_eq!(r.pairs_checked, 10);
        assert!(r.all_unbiased);
        assert_eq!(r.entangled_rows, [3, 5]);
        let b1 = line_eigenbasis([1, 2, 3]).unwrap().states();
        assert!(!is_unbiased_pair(&b1, &b1).unwrap());
        let bell = line_eigenbasis([3, 14, 9]).unwrap().states();
        let other = line_eigenbasis([7, 8, 9]).unwrap().states();
        assert!(!is_unbiased_pair(&bell, &other).unwrap());
    }

    #[test]
    fn mermin() {
        for r in mermin_squares() {
            assert!(r.has_expected_signs(), "{r:?}");
        }
        assert_eq!(ordered_product(&[7, 15, 12]), PhasedOp { phase: Phase::MinusOne, label: 0 });
        let counts = mermin_label_counts();
        assert_eq!(counts[0], 0);
        assert_eq!(&counts[1..4], &[4, 4, 4]);
        assert!(counts[4..].iter().all(|&c| c == 2));
        assert_eq!(mermin_square(5), Err(PauliError::NoSuchSquare(5)));
        assert_eq!(mermin_square(0), Err(PauliError::NoSuchSquare(0)));
    }

    #[test]
    fn fano() {
        let f = fano_embedding().unwrap();
        assert_eq!(f.points.len(), 7);
        assert_eq!(f.lines.len(), 7);
        let has = |t: [u8; 3]| {
            let mut t = t;
            t.sort_unstable();
            f.lines.iter().any(|l| {
                let mut l = *l;
                l.sort_unstable();
                l == t
            })
        };
        assert!(has([1, 2, 3]));
        assert!(has([3, 6, 12]));
        let pts: BTreeSet<u8> = f.points.iter().map(|p| p.1).collect();
        assert_eq!(pts, (1..8).collect());
    }

    #[test]
    fn pencils() {
        let a: BTreeSet<u8> = SET_A.iter().copied().filter(|&l| l != 0).collect();
        let lines = pencil_through(3, &a).unwrap();
        let pts: Vec<[u8; 3]> = lines.iter().map(|l| l.points).collect();
        assert_eq!(pts, [[3, 1, 2], [3, 6, 12], [3, 9, 14]]);
        assert!(lines.iter().all(|l| l.commuting));
        assert_eq!(lines.iter().filter(|l| l.entangled == Some(true)).count(), 2);

        let s: BTreeSet<u8> = (1..16).collect();
        let full: Vec<[u8; 3]> = pencil_through(1, &s).unwrap().into_iter().filter(|l| l.commuting).map(|l| l.points).collect();
        assert_eq!(full, [[1, 2, 3], [1, 4, 7], [1, 11, 13]]);
        assert_eq!(pencil_through(0, &s), Err(PauliError::IdentityBase));
        assert_eq!(pencil_through(4, &a), Err(PauliError::BaseOutsideUniverse(4)));
    }

    #[test]
    fn cube_and_coupling() {
        let c = cube_structure();
        assert!(c.is_cube());
        let four = c.graph.index_of_row("4").unwrap();
        let nbrs: Vec<&str> = (0..8).filter(|&j| c.graph.get(four, j)).map(|j| c.graph.row_labels[j].as_str()).collect();
        assert_eq!(nbrs, ["5", "7", "10"]);

        let s = shell_coupling();
        assert!(s.matches_expected(), "{s:?}");
        let p12 = s.pairs.iter().find(|p| p.pair == (1, 2)).unwrap();
        assert_eq!(p12.first_commuters, [4, 7, 11, 13]);
        assert_eq!(p12.second_commuters, [5, 8, 10, 15]);
    }
}
