//! Exact arithmetic over the Gaussian integers and Gaussian rationals.
//!
//! Everything here is small and dense: 2×2 and 4×4 matrices, 4-component
//! state vectors. Nothing is ever rounded, so every claim about Pauli
//! products, eigenvectors and overlaps can be checked by plain equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {left_rows}x{left_cols} times {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("entry list of length {len} does not fit a {rows}x{cols} matrix")]
    BadShape { rows: usize, cols: usize, len: usize },
    #[error("operators do not commute")]
    NotCommuting,
    #[error("operators are not independent; a joint projector is not rank one")]
    NotIndependent,
    #[error("the zero vector has no Schmidt rank")]
    ZeroVector,
    #[error("basis vectors {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),
    #[error("expected a 4x4 matrix")]
    NotFourByFour,
}

/// `re + im·i` with integer parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

impl GaussianInt {
    pub const ZERO: GaussianInt = GaussianInt { re: 0, im: 0 };
    pub const ONE: GaussianInt = GaussianInt { re: 1, im: 0 };
    pub const I: GaussianInt = GaussianInt { re: 0, im: 1 };
    pub const MINUS_ONE: GaussianInt = GaussianInt { re: -1, im: 0 };
    pub const MINUS_I: GaussianInt = GaussianInt { re: 0, im: -1 };
    /// The unit group {1, i, −1, −i}, listed as powers of i.
    pub const UNITS: [GaussianInt; 4] = [Self::ONE, Self::I, Self::MINUS_ONE, Self::MINUS_I];

    pub const fn new(re: i64, im: i64) -> Self {
        GaussianInt { re, im }
    }

    pub const fn from_int(re: i64) -> Self {
        GaussianInt { re, im: 0 }
    }

    pub fn conj(self) -> Self {
        GaussianInt::new(self.re, -self.im)
    }

    /// |z|², always a nonnegative integer.
    pub fn norm(self) -> i64 {
        self.re * self.re + self.im * self.im
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn is_unit(self) -> bool {
        self.norm() == 1
    }

    /// Division rounded to the nearest Gaussian integer, so that the
    /// remainder has strictly smaller norm than the divisor.
    pub fn div_round(self, rhs: GaussianInt) -> GaussianInt {
        assert!(!rhs.is_zero(), "division by zero Gaussian integer");
        let n = rhs.norm();
        let p = self * rhs.conj();
        GaussianInt::new(round_div(p.re, n), round_div(p.im, n))
    }

    /// Exact quotient, if `rhs` divides `self`.
    pub fn checked_div(self, rhs: GaussianInt) -> Option<GaussianInt> {
        if rhs.is_zero() {
            return None;
        }
        let q = self.div_round(rhs);
        (q * rhs == self).then_some(q)
    }

    /// A greatest common divisor, normalized into the first quadrant.
    pub fn gcd(self, rhs: GaussianInt) -> GaussianInt {
        let (mut a, mut b) = (self, rhs);
        while !b.is_zero() {
            let r = a - a.div_round(b) * b;
            a = b;
            b = r;
        }
        a.first_quadrant()
    }

    /// The unit multiple of `self` with `re > 0, im >= 0` (zero stays zero).
    pub fn first_quadrant(self) -> GaussianInt {
        if self.is_zero() {
            return self;
        }
        Self::UNITS
            .iter()
            .map(|u| self * *u)
            .find(|z| z.re > 0 && z.im >= 0)
            .expect("one rotation lies in the first quadrant")
    }
}

fn round_div(x: i64, n: i64) -> i64 {
    (2 * x + n).div_euclid(2 * n)
}

fn int_gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

impl Add for GaussianInt {
    type Output = GaussianInt;
    fn add(self, rhs: Self) -> Self {
        GaussianInt::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for GaussianInt {
    type Output = GaussianInt;
    fn sub(self, rhs: Self) -> Self {
        GaussianInt::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: Self) -> Self {
        GaussianInt::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Neg for GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> Self {
        GaussianInt::new(-self.re, -self.im)
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (0, 1) => write!(f, "i"),
            (0, -1) => write!(f, "-i"),
            (0, im) => write!(f, "{im}i"),
            (re, 1) => write!(f, "{re}+i"),
            (re, -1) => write!(f, "{re}-i"),
            (re, im) if im > 0 => write!(f, "{re}+{im}i"),
            (re, im) => write!(f, "{re}{im}i"),
        }
    }
}

/// `num / den` with `den >= 1`, always reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    num: GaussianInt,
    den: i64,
}

impl GaussianRational {
    pub const ZERO: GaussianRational = GaussianRational { num: GaussianInt::ZERO, den: 1 };
    pub const ONE: GaussianRational = GaussianRational { num: GaussianInt::ONE, den: 1 };

    pub fn new(num: GaussianInt, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        if num.is_zero() {
            return Self::ZERO;
        }
        let g = int_gcd(int_gcd(num.re, num.im), den);
        GaussianRational {
            num: GaussianInt::new(num.re / g, num.im / g),
            den: den / g,
        }
    }

    pub fn num(&self) -> GaussianInt {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn to_gaussian_int(self) -> Option<GaussianInt> {
        (self.den == 1).then_some(self.num)
    }

    pub fn conj(self) -> Self {
        GaussianRational { num: self.num.conj(), den: self.den }
    }

    pub fn recip(self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // 1 / (n/d) = d·conj(n) / |n|²
        let n = self.num;
        Some(GaussianRational::new(n.conj() * GaussianInt::from_int(self.den), n.norm()))
    }
}

impl From<GaussianInt> for GaussianRational {
    fn from(num: GaussianInt) -> Self {
        GaussianRational { num, den: 1 }
    }
}

impl From<i64> for GaussianRational {
    fn from(v: i64) -> Self {
        GaussianInt::from_int(v).into()
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> Self {
        let num = self.num * GaussianInt::from_int(rhs.den) + rhs.num * GaussianInt::from_int(self.den);
        GaussianRational::new(num, self.den * rhs.den)
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> Self {
        GaussianRational::new(self.num * rhs.num, self.den * rhs.den)
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> Self {
        GaussianRational { num: -self.num, den: self.den }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

/// Dense row-major matrix of Gaussian rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussianRational>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<GaussianRational>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(LinalgError::BadShape { rows, cols, len: entries.len() });
        }
        Ok(ExactMatrix { rows, cols, entries })
    }

    pub fn from_ints(rows: usize, cols: usize, entries: &[GaussianInt]) -> Result<Self, LinalgError> {
        Self::new(rows, cols, entries.iter().map(|&z| z.into()).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, entries: vec![GaussianRational::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = GaussianRational::ONE;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> GaussianRational {
        self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[GaussianRational] {
        &self.entries
    }

    pub fn matmul(&self, rhs: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = GaussianRational::ZERO;
                for k in 0..self.cols {
                    acc = acc + self.get(i, k) * rhs.get(k, j);
                }
                out.entries[i * rhs.cols + j] = acc;
            }
        }
        Ok(out)
    }

    /// Kronecker product; the left factor indexes the coarse blocks.
    pub fn tensor(&self, rhs: &ExactMatrix) -> ExactMatrix {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.entries[(i * rhs.rows + k) * cols + (j * rhs.cols + l)] =
                            self.get(i, j) * rhs.get(k, l);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| *a + *b).collect();
        Ok(ExactMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn scale(&self, s: GaussianRational) -> ExactMatrix {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| *e * s).collect(),
        }
    }

    pub fn conj_transpose(&self) -> ExactMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        self.rows == self.cols && *self == self.conj_transpose()
    }

    pub fn trace(&self) -> GaussianRational {
        (0..self.rows.min(self.cols)).fold(GaussianRational::ZERO, |acc, i| acc + self.get(i, i))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GaussianRational::is_zero)
    }

    /// Returns `s` when `self == s·other` for some scalar `s`, and `None`
    /// when the matrices are not proportional (or `other` is zero).
    pub fn proportionality(&self, other: &ExactMatrix) -> Option<GaussianRational> {
        if self.rows != other.rows || self.cols != other.cols {
            return None;
        }
        let pivot = other.entries.iter().position(|e| !e.is_zero())?;
        let s = self.entries[pivot] * other.entries[pivot].recip()?;
        (other.scale(s) == *self).then_some(s)
    }

    pub fn apply(&self, v: &StateVector) -> Result<[GaussianRational; 4], LinalgError> {
        if self.rows != 4 || self.cols != 4 {
            return Err(LinalgError::NotFourByFour);
        }
        let mut out = [GaussianRational::ZERO; 4];
        for (i, o) in out.iter_mut().enumerate() {
            for j in 0..4 {
                *o = *o + self.get(i, j) * v.0[j].into();
            }
        }
        Ok(out)
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Unnormalized two-qubit state with Gaussian-integer amplitudes, in the
/// order |00⟩, |01⟩, |10⟩, |11⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StateVector(pub [GaussianInt; 4]);

impl StateVector {
    pub fn from_ints(v: [i64; 4]) -> Self {
        StateVector(v.map(GaussianInt::from_int))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.is_zero())
    }

    pub fn norm_sqr(&self) -> i64 {
        self.0.iter().map(|z| z.norm()).sum()
    }

    pub fn scale(&self, s: GaussianInt) -> StateVector {
        StateVector(self.0.map(|z| z * s))
    }

    /// Divides out the Gaussian gcd of the entries and rotates by a unit so
    /// the first nonzero entry lies in the first quadrant (`re > 0, im >= 0`).
    pub fn primitive(&self) -> StateVector {
        let g = self.0.iter().fold(GaussianInt::ZERO, |g, z| g.gcd(*z));
        if g.is_zero() {
            return *self;
        }
        let reduced = self.0.map(|z| z.checked_div(g).expect("gcd divides every entry"));
        let lead = reduced.iter().find(|z| !z.is_zero()).copied().expect("nonzero");
        let unit = GaussianInt::UNITS
            .iter()
            .copied()
            .find(|u| {
                let z = lead * *u;
                z.re > 0 && z.im >= 0
            })
            .expect("one rotation lies in the first quadrant");
        StateVector(reduced.map(|z| z * unit))
    }

    /// True when `self = s·other` for a nonzero Gaussian rational `s`.
    pub fn same_ray(&self, other: &StateVector) -> bool {
        !self.is_zero() && !other.is_zero() && self.primitive() == other.primitive()
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|z| z.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// ⟨u|v⟩, conjugate-linear in `u`.
pub fn inner(u: &StateVector, v: &StateVector) -> GaussianInt {
    u.0.iter().zip(&v.0).fold(GaussianInt::ZERO, |acc, (a, b)| acc + a.conj() * *b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Eigenvalue signs of the three operators of a commuting triple on one
/// joint eigenvector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignSignature(pub [Sign; 3]);

impl SignSignature {
    /// Parses a string such as `"+-+"`.
    pub fn parse(s: &str) -> Option<Self> {
        let signs: Vec<Sign> = s
            .chars()
            .map(|c| match c {
                '+' => Some(Sign::Plus),
                '-' | '−' => Some(Sign::Minus),
                _ => None,
            })
            .collect::<Option<_>>()?;
        Some(SignSignature(signs.try_into().ok()?))
    }
}

impl fmt::Display for SignSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.0 {
            write!(f, "{}", s.symbol())?;
        }
        Ok(())
    }
}

impl Serialize for SignSignature {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// The eigenvalue of `op` on `v`, if `v` is an eigenvector with eigenvalue ±1.
pub fn sign_on(op: &ExactMatrix, v: &StateVector) -> Result<Option<Sign>, LinalgError> {
    let image = op.apply(v)?;
    let as_rat = v.0.map(GaussianRational::from);
    if image == as_rat {
        Ok(Some(Sign::Plus))
    } else if image == as_rat.map(|z| -z) {
        Ok(Some(Sign::Minus))
    } else {
        Ok(None)
    }
}

/// Joint eigenbasis of two commuting, independent, Hermitian involutions
/// `a` and `b` on two qubits. `third` is the operator whose eigenvalue
/// completes each sign signature (usually the phaseless product of `a` and
/// `b`).
///
/// Each vector spans the range of `(I + s₁a)(I + s₂b)/4`, taken in the
/// order `(s₁, s₂) = (+,+), (+,−), (−,+), (−,−)` and reduced with
/// [`StateVector::primitive`].
pub fn joint_eigenbasis(
    a: &ExactMatrix,
    b: &ExactMatrix,
    third: &ExactMatrix,
) -> Result<Vec<(StateVector, SignSignature)>, LinalgError> {
    for m in [a, b, third] {
        if m.rows() != 4 || m.cols() != 4 {
            return Err(LinalgError::NotFourByFour);
        }
    }
    if a.matmul(b)? != b.matmul(a)? {
        return Err(LinalgError::NotCommuting);
    }
    let id = ExactMatrix::identity(4);
    let mut out = Vec::with_capacity(4);
    for s1 in [Sign::Plus, Sign::Minus] {
        for s2 in [Sign::Plus, Sign::Minus] {
            let pa = id.add(&a.scale(s1.value().into()))?;
            let pb = id.add(&b.scale(s2.value().into()))?;
            // four times the projector; rank one iff its trace is 4
            let p = pa.matmul(&pb)?;
            if p.trace() != GaussianRational::from(4) {
                return Err(LinalgError::NotIndependent);
            }
            let col = (0..4)
                .find(|&c| (0..4).any(|r| !p.get(r, c).is_zero()))
                .ok_or(LinalgError::NotIndependent)?;
            let mut v = [GaussianInt::ZERO; 4];
            for (r, slot) in v.iter_mut().enumerate() {
                *slot = p.get(r, col).to_gaussian_int().expect("integer projector multiple");
            }
            let v = StateVector(v).primitive();
            let s3 = sign_on(third, &v)?.ok_or(LinalgError::NotIndependent)?;
            out.push((v, SignSignature([s1, s2, s3])));
        }
    }
    Ok(out)
}

/// 1 for a product state, 2 for an entangled one.
pub fn schmidt_rank(v: &StateVector) -> Result<u8, LinalgError> {
    if v.is_zero() {
        return Err(LinalgError::ZeroVector);
    }
    let [a, b, c, d] = v.0;
    Ok(if a * d - b * c == GaussianInt::ZERO { 1 } else { 2 })
}

fn check_orthogonal(basis: &[StateVector]) -> Result<(), LinalgError> {
    for i in 0..basis.len() {
        if basis[i].is_zero() {
            return Err(LinalgError::ZeroVector);
        }
        for j in i + 1..basis.len() {
            if !inner(&basis[i], &basis[j]).is_zero() {
                return Err(LinalgError::NotOrthogonal(i, j));
            }
        }
    }
    Ok(())
}

/// Mutual unbiasedness in dimension 4, stated without normalization:
/// `4·|⟨u|v⟩|² = ‖u‖²·‖v‖²` for every cross pair.
pub fn is_unbiased_pair(first: &[StateVector], second: &[StateVector]) -> Result<bool, LinalgError> {
    check_orthogonal(first)?;
    check_orthogonal(second)?;
    Ok(first.iter().all(|u| {
        second
            .iter()
            .all(|v| 4 * inner(u, v).norm() == u.norm_sqr() * v.norm_sqr())
    }))
}

/// The 2×2 blocks: identity and the three Pauli matrices.
pub fn pauli_2x2(which: char) -> ExactMatrix {
    use GaussianInt as G;
    let e = match which {
        'I' => [G::ONE, G::ZERO, G::ZERO, G::ONE],
        'X' => [G::ZERO, G::ONE, G::ONE, G::ZERO],
        'Y' => [G::ZERO, G::MINUS_I, G::I, G::ZERO],
        'Z' => [G::ONE, G::ZERO, G::ZERO, G::MINUS_ONE],
        other => panic!("no Pauli matrix named {other}"),
    };
    ExactMatrix::from_ints(2, 2, &e).expect("2x2")
}
