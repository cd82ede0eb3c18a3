//! Small finite commutative rings with unity, stored as explicit tables.
//!
//! Two families are built: direct products GF(2)^n (componentwise bit
//! operations) and quotients GF(2)[x]/⟨f⟩. Element names for n = 2, 3, 4
//! follow the conventions used throughout the crate: `0 1 x x+1`,
//! `0 1 b y r c g m`, and `x0 … x15`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::hash::{DefaultHasher, Hash, Hasher};

use serde::Serialize;
use thiserror::Error;

use crate::fixtures::Grid;
use crate::pauli::PhasedOp;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("direct product size {0} is outside 1..=6")]
    ProductSizeOutOfRange(usize),
    #[error("modulus must have degree at least 1")]
    ZeroModulus,
    #[error("modulus degree {0} is too large")]
    ModulusTooLarge(u32),
    #[error("element belongs to a different ring")]
    ForeignElement,
    #[error("no element named {0:?}")]
    UnknownName(String),
    #[error("size mismatch: {0} labels against a ring of order {1}")]
    SizeMismatch(usize, usize),
    #[error("ring axiom fails: {0}")]
    Axiom(String),
}

/// Content hash of a ring's tables; rings with identical tables share it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RingId(pub u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement {
    pub ring: RingId,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingStructure {
    /// GF(2)^n; `coords[i]` holds the component bits of element `i`
    /// (bit k = component k).
    DirectProduct { n: usize, coords: Vec<u32> },
    /// GF(2)[x]/⟨modulus⟩ with bit k of the modulus the coefficient of x^k;
    /// element `i` is the polynomial with bit pattern `i`.
    Quotient { modulus: u64 },
}

#[derive(Debug, Clone)]
pub struct FiniteRing {
    id: RingId,
    names: Vec<String>,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    zero: usize,
    one: usize,
    structure: RingStructure,
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.add == other.add && self.mul == other.mul && self.names == other.names
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ideal {
    pub ring: RingId,
    pub elements: BTreeSet<usize>,
    pub generator: Option<usize>,
    pub is_maximal: bool,
}

impl Ideal {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: RingElement) -> bool {
        e.ring == self.ring && self.elements.contains(&e.index)
    }

    pub fn names(&self, ring: &FiniteRing) -> Vec<String> {
        self.elements.iter().map(|&i| ring.names[i].clone()).collect()
    }
}

const R_PERP_BITS: [u32; 4] = [0b00, 0b11, 0b01, 0b10];
const R_PERP_NAMES: [&str; 4] = ["0", "1", "x", "x+1"];

// component 0 is the leftmost entry of [c0,c1,c2]
const R_TRIANGLE_BITS: [u32; 8] = [0b000, 0b111, 0b001, 0b110, 0b010, 0b101, 0b100, 0b011];
const R_TRIANGLE_NAMES: [&str; 8] = ["0", "1", "b", "y", "r", "c", "g", "m"];

/// GF(2)^n with componentwise operations.
pub fn direct_product_ring(n: usize) -> Result<FiniteRing, RingError> {
    if !(1..=6).contains(&n) {
        return Err(RingError::ProductSizeOutOfRange(n));
    }
    let (coords, names): (Vec<u32>, Vec<String>) = match n {
        2 => (R_PERP_BITS.to_vec(), R_PERP_NAMES.iter().map(|s| s.to_string()).collect()),
        3 => (R_TRIANGLE_BITS.to_vec(), R_TRIANGLE_NAMES.iter().map(|s| s.to_string()).collect()),
        4 => {
            // x_{4p+q} = [p, q] with p, q taken from R_perp in the order 0, 1, a=x, b=x+1
            let coords = (0..16).map(|i| R_PERP_BITS[i / 4] | (R_PERP_BITS[i % 4] << 2)).collect();
            (coords, (0..16).map(|i| format!("x{i}")).collect())
        }
        _ => {
            let size = 1u32 << n;
            let coords: Vec<u32> = (0..size)
                .map(|i| (0..n).fold(0, |acc, k| acc | (((i >> (n - 1 - k)) & 1) << k)))
                .collect();
            let names = coords
                .iter()
                .map(|&c| {
                    let parts: Vec<String> = (0..n).map(|k| ((c >> k) & 1).to_string()).collect();
                    format!("[{}]", parts.join(","))
                })
                .collect();
            (coords, names)
        }
    };
    let size = coords.len();
    let mut index_of = vec![usize::MAX; size];
    for (i, &c) in coords.iter().enumerate() {
        index_of[c as usize] = i;
    }
    let add = (0..size).map(|a| (0..size).map(|b| index_of[(coords[a] ^ coords[b]) as usize]).collect()).collect();
    let mul = (0..size).map(|a| (0..size).map(|b| index_of[(coords[a] & coords[b]) as usize]).collect()).collect();
    let all_ones = (1u32 << n) - 1;
    Ok(FiniteRing::assemble(
        names,
        add,
        mul,
        index_of[0],
        index_of[all_ones as usize],
        RingStructure::DirectProduct { n, coords },
    ))
}

fn poly_name(p: u64) -> String {
    if p == 0 {
        return "0".into();
    }
    let mut terms = Vec::new();
    for k in (0..64).rev() {
        if (p >> k) & 1 == 1 {
            terms.push(match k {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            });
        }
    }
    terms.join("+")
}

fn poly_mul_mod(a: u64, b: u64, modulus: u64, deg: u32) -> u64 {
    let mut prod: u64 = 0;
    for k in 0..deg {
        if (b >> k) & 1 == 1 {
            prod ^= a << k;
        }
    }
    for k in (deg..2 * deg).rev() {
        if (prod >> k) & 1 == 1 {
            prod ^= modulus << (k - deg);
        }
    }
    prod
}

/// GF(2)[x]/⟨modulus⟩, with the modulus as a bit polynomial (bit k is the
/// coefficient of x^k), e.g. `0b111` for x²+x+1.
pub fn quotient_ring_gf2(modulus: u64) -> Result<FiniteRing, RingError> {
    if modulus < 2 {
        return Err(RingError::ZeroModulus);
    }
    let deg = 63 - modulus.leading_zeros();
    if deg > 6 {
        return Err(RingError::ModulusTooLarge(deg));
    }
    let size = 1usize << deg;
    let add = (0..size).map(|a| (0..size).map(|b| a ^ b).collect()).collect();
    let mul = (0..size)
        .map(|a| (0..size).map(|b| poly_mul_mod(a as u64, b as u64, modulus, deg) as usize).collect())
        .collect();
    let names = (0..size as u64).map(poly_name).collect();
    Ok(FiniteRing::assemble(names, add, mul, 0, 1, RingStructure::Quotient { modulus }))
}

impl FiniteRing {
    fn assemble(
        names: Vec<String>,
        add: Vec<Vec<usize>>,
        mul: Vec<Vec<usize>>,
        zero: usize,
        one: usize,
        structure: RingStructure,
    ) -> FiniteRing {
        let mut h = DefaultHasher::new();
        add.hash(&mut h);
        mul.hash(&mut h);
        FiniteRing { id: RingId(h.finish()), names, add, mul, zero, one, structure }
    }

    pub fn id(&self) -> RingId {
        self.id
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn structure(&self) -> &RingStructure {
        &self.structure
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn add_table(&self) -> &[Vec<usize>] {
        &self.add
    }

    pub fn mul_table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    pub fn element(&self, index: usize) -> RingElement {
        assert!(index < self.order(), "element index {index} out of range");
        RingElement { ring: self.id, index }
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElement> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    pub fn by_name(&self, name: &str) -> Result<RingElement, RingError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.element(i))
            .ok_or_else(|| RingError::UnknownName(name.to_string()))
    }

    pub fn name(&self, e: RingElement) -> &str {
        &self.names[e.index]
    }

    pub fn zero(&self) -> RingElement {
        self.element(self.zero)
    }

    pub fn one(&self) -> RingElement {
        self.element(self.one)
    }

    pub fn owns(&self, e: RingElement) -> Result<(), RingError> {
        if e.ring == self.id && e.index < self.order() {
            Ok(())
        } else {
            Err(RingError::ForeignElement)
        }
    }

    pub fn add(&self, a: RingElement, b: RingElement) -> RingElement {
        self.element(self.add[a.index][b.index])
    }

    pub fn mul(&self, a: RingElement, b: RingElement) -> RingElement {
        self.element(self.mul[a.index][b.index])
    }

    pub fn neg(&self, a: RingElement) -> RingElement {
        let idx = (0..self.order()).find(|&b| self.add[a.index][b] == self.zero).expect("additive inverse");
        self.element(idx)
    }

    pub fn sub(&self, a: RingElement, b: RingElement) -> RingElement {
        self.add(a, self.neg(b))
    }

    pub fn inverse(&self, a: RingElement) -> Option<RingElement> {
        (0..self.order()).find(|&b| self.mul[a.index][b] == self.one).map(|b| self.element(b))
    }

    pub fn is_unit(&self, a: RingElement) -> bool {
        self.inverse(a).is_some()
    }

    /// Every table axiom of a commutative ring with unity, checked exhaustively.
    pub fn check_axioms(&self) -> Result<(), RingError> {
        let n = self.order();
        let fail = |what: &str, a: usize, b: usize, c: usize| {
            Err(RingError::Axiom(format!("{what} at ({}, {}, {})", self.names[a], self.names[b], self.names[c])))
        };
        for a in 0..n {
            if self.add[self.zero][a] != a || self.mul[self.one][a] != a || self.mul[a][self.one] != a {
                return fail("identity", a, a, a);
            }
            if !(0..n).any(|b| self.add[a][b] == self.zero) {
                return fail("additive inverse", a, a, a);
            }
            for b in 0..n {
                if self.add[a][b] != self.add[b][a] {
                    return fail("additive commutativity", a, b, b);
                }
                if self.mul[a][b] != self.mul[b][a] {
                    return fail("multiplicative commutativity", a, b, b);
                }
                for c in 0..n {
                    if self.add[self.add[a][b]][c] != self.add[a][self.add[b][c]] {
                        return fail("additive associativity", a, b, c);
                    }
                    if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]] {
                        return fail("multiplicative associativity", a, b, c);
                    }
                    if self.mul[a][self.add[b][c]] != self.add[self.mul[a][b]][self.mul[a][c]] {
                        return fail("distributivity", a, b, c);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn characteristic(&self) -> usize {
        let mut acc = self.one;
        let mut k = 1;
        while acc != self.zero {
            acc = self.add[acc][self.one];
            k += 1;
        }
        k
    }

    /// The additive span of `{r·g : r ∈ R, g ∈ generators}`.
    pub fn ideal_generated(&self, generators: &[RingElement]) -> Result<BTreeSet<usize>, RingError> {
        let mut span: BTreeSet<usize> = BTreeSet::from([self.zero]);
        for &g in generators {
            self.owns(g)?;
            let multiples: BTreeSet<usize> = (0..self.order()).map(|r| self.mul[r][g.index]).collect();
            span = span.iter().flat_map(|&s| multiples.iter().map(move |&m| (s, m))).map(|(s, m)| self.add[s][m]).collect();
        }
        Ok(span)
    }

    pub fn is_ideal(&self, set: &BTreeSet<usize>) -> bool {
        set.contains(&self.zero)
            && set.iter().all(|&a| set.iter().all(|&b| set.contains(&self.add[a][b])))
            && set.iter().all(|&a| (0..self.order()).all(|r| set.contains(&self.mul[r][a])))
    }

    fn principal_generator(&self, set: &BTreeSet<usize>) -> Option<usize> {
        set.iter()
            .copied()
            .find(|&a| (0..self.order()).map(|r| self.mul[r][a]).collect::<BTreeSet<_>>() == *set)
    }

    fn make_ideal(&self, elements: BTreeSet<usize>, maximal: &[BTreeSet<usize>]) -> Ideal {
        Ideal {
            ring: self.id,
            generator: self.principal_generator(&elements),
            is_maximal: maximal.contains(&elements),
            elements,
        }
    }

    fn maximal_sets(&self) -> Vec<BTreeSet<usize>> {
        let zds: Vec<usize> = zero_divisors(self).into_iter().map(|e| e.index).filter(|&i| i != self.zero).collect();
        let mut candidates: Vec<BTreeSet<usize>> = vec![BTreeSet::from([self.zero])];
        let mut push = |s: BTreeSet<usize>| {
            if !candidates.contains(&s) {
                candidates.push(s);
            }
        };
        for &a in &zds {
            push(self.ideal_generated(&[self.element(a)]).expect("own element"));
        }
        for (k, &a) in zds.iter().enumerate() {
            for &b in &zds[k + 1..] {
                push(self.ideal_generated(&[self.element(a), self.element(b)]).expect("own element"));
            }
        }
        let proper: Vec<BTreeSet<usize>> = candidates.into_iter().filter(|s| !s.contains(&self.one)).collect();
        proper
            .iter()
            .filter(|s| !proper.iter().any(|t| t.len() > s.len() && t.is_superset(s)))
            .cloned()
            .collect()
    }

    /// Table layout with a `+` block and a `×` block (written `*`), the
    /// same whitespace grid format the fixtures use.
    pub fn render_tables(&self) -> String {
        let mut out = String::new();
        for (sym, table) in [("+", &self.add), ("*", &self.mul)] {
            let w = self.names.iter().map(String::len).max().unwrap_or(1);
            let _ = write!(out, "{sym:w$}");
            for n in &self.names {
                let _ = write!(out, " {n:>w$}");
            }
            out.push('\n');
            for (a, row) in table.iter().enumerate() {
                let _ = write!(out, "{:w$}", self.names[a]);
                for &c in row {
                    let _ = write!(out, " {:>w$}", self.names[c]);
                }
                out.push('\n');
            }
            out.push('\n');
        }
        out
    }

    /// Cells where a `+` or `*` grid written with element names disagrees
    /// with this ring's tables, as `row op col` strings.
    pub fn grid_differences(&self, grid: &Grid) -> Result<Vec<String>, RingError> {
        let table = match grid.corner.as_str() {
            "+" => &self.add,
            "*" | "×" => &self.mul,
            other => return Err(RingError::UnknownName(other.to_owned())),
        };
        let mut out = Vec::new();
        for (r, row) in grid.row_labels.iter().zip(&grid.cells) {
            let a = self.by_name(r)?.index;
            for (c, cell) in grid.col_labels.iter().zip(row) {
                let b = self.by_name(c)?.index;
                if self.names[table[a][b]] != *cell {
                    out.push(format!("{r} {} {c}", grid.corner));
                }
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "order": self.order(),
            "names": self.names,
            "add": self.add,
            "mul": self.mul,
        })
    }
}

pub fn units(ring: &FiniteRing) -> Vec<RingElement> {
    ring.elements().filter(|&e| ring.is_unit(e)).collect()
}

/// Non-units, including the trivial zero-divisor 0.
pub fn zero_divisors(ring: &FiniteRing) -> Vec<RingElement> {
    ring.elements().filter(|&e| !ring.is_unit(e)).collect()
}

/// True when `a` is a nonzero element annihilating some nonzero element.
pub fn is_nontrivial_zero_divisor(ring: &FiniteRing, a: RingElement) -> bool {
    a != ring.zero() && ring.elements().any(|s| s != ring.zero() && ring.mul(a, s) == ring.zero())
}

pub fn principal_ideal(ring: &FiniteRing, a: RingElement) -> Result<Ideal, RingError> {
    ring.owns(a)?;
    let elements = ring.ideal_generated(&[a])?;
    let maximal = ring.maximal_sets();
    Ok(Ideal {
        ring: ring.id,
        is_maximal: maximal.contains(&elements),
        generator: Some(a.index),
        elements,
    })
}

/// Inclusion-maximal proper ideals among those generated by at most two
/// zero-divisors, in order of first discovery.
pub fn maximal_ideals(ring: &FiniteRing) -> Vec<Ideal> {
    let maximal = ring.maximal_sets();
    maximal.iter().map(|s| ring.make_ideal(s.clone(), &maximal)).collect()
}

pub fn jacobson_radical(ring: &FiniteRing) -> Ideal {
    let maximal = ring.maximal_sets();
    let mut iter = maximal.iter();
    let first = iter.next().cloned().unwrap_or_default();
    let meet = iter.fold(first, |acc, s| acc.intersection(s).copied().collect());
    ring.make_ideal(meet, &maximal)
}

pub fn is_field(ring: &FiniteRing) -> bool {
    ring.order() > 1 && zero_divisors(ring) == vec![ring.zero()]
}

/// A ring isomorphism `a → b` (`map[i]` is the image of element `i`).
pub fn find_ring_isomorphism(a: &FiniteRing, b: &FiniteRing) -> Option<Vec<usize>> {
    let n = a.order();
    if n != b.order() {
        return None;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    // assign in an order that starts with 0 and 1
    let mut order: Vec<usize> = vec![a.zero, a.one];
    order.extend((0..n).filter(|&i| i != a.zero && i != a.one));
    order.dedup();
    fn consistent(a: &FiniteRing, b: &FiniteRing, map: &[usize]) -> bool {
        let n = map.len();
        for x in 0..n {
            if map[x] == usize::MAX {
                continue;
            }
            for y in 0..n {
                if map[y] == usize::MAX {
                    continue;
                }
                let s = map[a.add[x][y]];
                if s != usize::MAX && s != b.add[map[x]][map[y]] {
                    return false;
                }
                let p = map[a.mul[x][y]];
                if p != usize::MAX && p != b.mul[map[x]][map[y]] {
                    return false;
                }
            }
        }
        true
    }
    fn go(k: usize, order: &[usize], a: &FiniteRing, b: &FiniteRing, map: &mut [usize], used: &mut [bool]) -> bool {
        if k == order.len() {
            return true;
        }
        let x = order[k];
        let forced = if x == a.zero {
            Some(b.zero)
        } else if x == a.one {
            Some(b.one)
        } else {
            None
        };
        for y in 0..map.len() {
            if used[y] || forced.is_some_and(|f| f != y) {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if consistent(a, b, map) && go(k + 1, order, a, b, map, used) {
                return true;
            }
            used[y] = false;
            map[x] = usize::MAX;
        }
        false
    }
    go(0, &order, a, b, &mut map, &mut used).then_some(map)
}

/// Searches for a bijection φ from operator labels to ring elements with
/// φ(phaseless(a∗b)) = φ(a) + φ(b), sending the table's identity label to
/// the ring's zero. `table[i][j]` is the product `labels[i] ∗ labels[j]`.
pub fn ring_isomorphic_upto_phase(
    labels: &[u8],
    table: &[Vec<PhasedOp>],
    ring: &FiniteRing,
) -> Result<Option<Vec<(u8, RingElement)>>, RingError> {
    let n = labels.len();
    if n != ring.order() || table.len() != n || table.iter().any(|r| r.len() != n) {
        return Err(RingError::SizeMismatch(n, ring.order()));
    }
    let pos = |label: u8| labels.iter().position(|&l| l == label);
    // phaseless product as indices into `labels`
    let mut prod = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..n {
            match pos(table[i][j].label) {
                Some(k) => prod[i][j] = k,
                None => return Ok(None),
            }
        }
    }
    let Some(identity) = (0..n).find(|&e| (0..n).all(|j| prod[e][j] == j && prod[j][e] == j)) else {
        return Ok(None);
    };
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[identity] = ring.zero;
    used[ring.zero] = true;
    let rest: Vec<usize> = (0..n).filter(|&i| i != identity).collect();
    fn go(k: usize, rest: &[usize], prod: &[Vec<usize>], ring: &FiniteRing, map: &mut [usize], used: &mut [bool]) -> bool {
        if k == rest.len() {
            return true;
        }
        let x = rest[k];
        for y in 0..map.len() {
            if used[y] {
                continue;
            }
            map[x] = y;
            used[y] = true;
            let ok = (0..map.len()).all(|a| {
                (0..map.len()).all(|b| {
                    let (fa, fb, fp) = (map[a], map[b], map[prod[a][b]]);
                    fa == usize::MAX || fb == usize::MAX || fp == usize::MAX || ring.add[fa][fb] == fp
                })
            });
            if ok && go(k + 1, rest, prod, ring, map, used) {
                return true;
            }
            used[y] = false;
            map[x] = usize::MAX;
        }
        false
    }
    if !go(0, &rest, &prod, ring, &mut map, &mut used) {
        return Ok(None);
    }
    Ok(Some(labels.iter().zip(&map).map(|(&l, &m)| (l, ring.element(m))).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(ring: &FiniteRing, elems: &[RingElement]) -> Vec<String> {
        elems.iter().map(|&e| ring.name(e).to_string()).collect()
    }

    fn set(ring: &FiniteRing, ns: &[&str]) -> BTreeSet<usize> {
        ns.iter().map(|n| ring.by_name(n).unwrap().index).collect()
    }

    #[test]
    fn r_perp_tables() {
        let r = direct_product_ring(2).unwrap();
        let x = r.by_name("x").unwrap();
        let x1 = r.by_name("x+1").unwrap();
        assert_eq!(r.mul(x, x), x);
        assert_eq!(r.mul(x, x1), r.zero());
        assert_eq!(r.add(x, r.one()), x1);
        assert_eq!(names(&r, &units(&r)), ["1"]);
        assert_eq!(names(&r, &zero_divisors(&r)), ["0", "x", "x+1"]);
        assert!(!is_field(&r));
    }

    #[test]
    fn r_triangle_products() {
        let r = direct_product_ring(3).unwrap();
        let e = |n: &str| r.by_name(n).unwrap();
        assert_eq!(r.mul(e("y"), e("c")), e("g"));
        assert_eq!(r.mul(e("b"), e("y")), r.zero());
        // complementary pairs sum to unity
        for (p, q) in [("b", "y"), ("r", "c"), ("g", "m")] {
            assert_eq!(r.add(e(p), e(q)), r.one());
        }
    }

    #[test]
    fn gf2_is_field() {
        let r = direct_product_ring(1).unwrap();
        assert!(is_field(&r));
        assert_eq!(r.order(), 2);
        assert!(direct_product_ring(0).is_err());
        assert!(direct_product_ring(7).is_err());
    }

    #[test]
    fn quotient_rings() {
        let gf4 = quotient_ring_gf2(0b111).unwrap();
        let x = gf4.by_name("x").unwrap();
        assert_eq!(gf4.name(gf4.mul(x, x)), "x+1");
        assert_eq!(names(&gf4, &units(&gf4)), ["1", "x", "x+1"]);
        assert!(is_field(&gf4));

        let perp_like = quotient_ring_gf2(0b110).unwrap();
        let perp = direct_product_ring(2).unwrap();
        assert!(find_ring_isomorphism(&perp_like, &perp).is_some());
        assert!(find_ring_isomorphism(&gf4, &perp).is_none());

        let gf8 = quotient_ring_gf2(0b1011).unwrap();
        assert_eq!(gf8.order(), 8);
        assert!(is_field(&gf8));
        assert_eq!(names(&gf8, &zero_divisors(&gf8)), ["0"]);
        assert_eq!(quotient_ring_gf2(0).unwrap_err(), RingError::ZeroModulus);
        assert_eq!(quotient_ring_gf2(1).unwrap_err(), RingError::ZeroModulus);
    }

    #[test]
    fn axioms_hold() {
        for n in 1..=5 {
            let r = direct_product_ring(n).unwrap();
            r.check_axioms().unwrap();
            assert_eq!(r.characteristic(), 2);
            for a in r.elements() {
                assert_eq!(r.add(a, a), r.zero());
                assert_eq!(r.mul(a, a), a);
            }
        }
        for m in [0b111, 0b110, 0b100, 0b1011, 0b1101, 0b1001] {
            quotient_ring_gf2(m).unwrap().check_axioms().unwrap();
        }
    }

    #[test]
    fn product_ring_counts() {
        for n in 1..=5 {
            let r = direct_product_ring(n).unwrap();
            assert_eq!(units(&r).len(), 1);
            assert_eq!(zero_divisors(&r).len(), (1 << n) - 1);
            assert_eq!(maximal_ideals(&r).len(), n);
        }
        let r4 = direct_product_ring(4).unwrap();
        assert_eq!(names(&r4, &units(&r4)), ["x5"]);
    }

    #[test]
    fn r_triangle_ideals() {
        let r = direct_product_ring(3).unwrap();
        let y = principal_ideal(&r, r.by_name("y").unwrap()).unwrap();
        assert_eq!(y.elements, set(&r, &["0", "r", "g", "y"]));
        assert!(y.is_maximal);
        let b = principal_ideal(&r, r.by_name("b").unwrap()).unwrap();
        assert_eq!(b.elements, set(&r, &["0", "b"]));
        assert!(!b.is_maximal);
        assert_eq!(principal_ideal(&r, r.zero()).unwrap().elements, set(&r, &["0"]));

        let max = maximal_ideals(&r);
        let gens: Vec<&str> = max.iter().map(|i| r.names()[i.generator.unwrap()].as_str()).collect();
        assert_eq!(gens, ["y", "c", "m"]);
        let ideal = |n: &str| principal_ideal(&r, r.by_name(n).unwrap()).unwrap().elements;
        let meet = |p: &str, q: &str| ideal(p).intersection(&ideal(q)).copied().collect::<BTreeSet<_>>();
        assert_eq!(ideal("b"), meet("c", "m"));
        assert_eq!(ideal("r"), meet("y", "m"));
        assert_eq!(ideal("g"), meet("y", "c"));
        assert_eq!(jacobson_radical(&r).elements, set(&r, &["0"]));
    }

    #[test]
    fn jacobson_of_dual_numbers() {
        let r = quotient_ring_gf2(0b100).unwrap();
        let j = jacobson_radical(&r);
        assert_eq!(j.elements, set(&r, &["0", "x"]));
        assert!(j.is_maximal);
        assert_eq!(maximal_ideals(&r).len(), 1);
    }

    #[test]
    fn field_has_zero_ideal_maximal() {
        let gf4 = quotient_ring_gf2(0b111).unwrap();
        let max = maximal_ideals(&gf4);
        assert_eq!(max.len(), 1);
        assert_eq!(max[0].elements, BTreeSet::from([0]));
    }

    #[test]
    fn r_diamond_maximal_ideals() {
        let r = direct_product_ring(4).unwrap();
        let max = maximal_ideals(&r);
        assert_eq!(max.len(), 4);
        assert!(max.iter().all(|i| i.len() == 8 && i.is_maximal));
        assert_eq!(jacobson_radical(&r).elements, BTreeSet::from([0]));
    }

    #[test]
    fn foreign_elements_rejected() {
        let r2 = direct_product_ring(2).unwrap();
        let r3 = direct_product_ring(3).unwrap();
        assert_eq!(principal_ideal(&r2, r3.one()).unwrap_err(), RingError::ForeignElement);
        // identical tables mean identical identity
        assert_eq!(direct_product_ring(2).unwrap().id(), r2.id());
    }

    #[test]
    fn json_and_text_export() {
        let r = direct_product_ring(2).unwrap();
        let j = r.to_json();
        assert_eq!(j["order"], 4);
        assert_eq!(j["names"][3], "x+1");
        assert_eq!(j["mul"][2][3], 0);
        let text = r.render_tables();
        assert!(text.lines().next().unwrap().starts_with('+'));
        assert_eq!(text.lines().filter(|l| !l.is_empty()).count(), 10);
    }

    #[test]
    fn fixture_tables_agree() {
        let fx = crate::fixtures::Fixtures::embedded();
        let t4 = fx.blocks("table4").unwrap();
        let perp = direct_product_ring(2).unwrap();
        let gf4 = quotient_ring_gf2(0b111).unwrap();
        for g in &t4[..2] {
            assert!(perp.grid_differences(g).unwrap().is_empty());
        }
        for g in &t4[2..] {
            assert!(gf4.grid_differences(g).unwrap().is_empty());
        }
        assert_eq!(perp.grid_differences(&t4[3]).unwrap().len(), 4);
        let tri = direct_product_ring(3).unwrap();
        for g in fx.blocks("table5").unwrap() {
            assert!(tri.grid_differences(g).unwrap().is_empty());
        }
    }

    #[test]
    fn generic_direct_product_names() {
        let r = direct_product_ring(5).unwrap();
        assert_eq!(r.name(r.one()), "[1,1,1,1,1]");
        assert_eq!(r.name(r.element(1)), "[0,0,0,0,1]");
    }
}
