//! Exact rank computations on sparse row vectors.
//!
//! Integer and rational rows use fraction-free elimination: a row is reduced
//! against a pivot by cross-multiplying with the two leading entries and then
//! divided by the gcd of its entries, so no fractions ever appear. Rows over
//! cyclotomic fields use ordinary elimination with exact field inverses.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::Field;

/// A sparse row: strictly increasing column indices with nonzero entries.
pub type SparseRow<S> = Vec<(usize, S)>;

/// Row echelon form over the integers, built incrementally.
#[derive(Clone, Debug, Default)]
pub struct IntegerEchelon {
    pivots: BTreeMap<usize, SparseRow<BigInt>>,
}

impl IntegerEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce `row` to its normal form against the current pivots.
    pub fn reduce(&self, row: SparseRow<BigInt>) -> SparseRow<BigInt> {
        let mut row = primitive(row);
        loop {
            let Some((lead_col, lead)) = row.first() else {
                return row;
            };
            let Some(pivot) = self.pivots.get(lead_col) else {
                return row;
            };
            let a = &pivot[0].1;
            let g = a.gcd(lead);
            let (ra, rb) = (a / &g, lead / &g);
            row = primitive(combine(&row, &ra, pivot, &rb));
        }
    }

    /// Insert a row; returns whether it enlarged the span.
    pub fn insert(&mut self, row: SparseRow<BigInt>) -> bool {
        let row = self.reduce(row);
        match row.first() {
            None => false,
            Some(&(c, _)) => {
                self.pivots.insert(c, row);
                true
            }
        }
    }

    pub fn contains(&self, row: SparseRow<BigInt>) -> bool {
        self.reduce(row).is_empty()
    }
}

/// `ra·x − rb·y` on sparse rows.
fn combine(x: &[(usize, BigInt)], ra: &BigInt, y: &[(usize, BigInt)], rb: &BigInt) -> SparseRow<BigInt> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, ra * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(rb * &y[j].1)));
            j += 1;
        } else {
            let v = ra * &x[i].1 - rb * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Divide by the content and make the leading entry positive.
fn primitive(mut row: SparseRow<BigInt>) -> SparseRow<BigInt> {
    row.retain(|(_, v)| !v.is_zero());
    let Some(first) = row.first() else {
        return row;
    };
    let mut g = first.1.abs();
    for (_, v) in &row[1..] {
        if g.is_one() {
            break;
        }
        g = g.gcd(v);
    }
    if first.1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in &mut row {
            *v /= &g;
        }
    }
    row
}

/// Clear denominators of a rational row.
pub fn integer_row(row: &[(usize, BigRational)]) -> SparseRow<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    row.iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| (*c, v.numer() * (&lcm / v.denom())))
        .collect()
}

/// Exact rank of integer rows.
///
/// The rank modulo a large prime never exceeds the rank over `Q`, so full row
/// rank modulo the prime certifies full rank; only otherwise do we fall back
/// to exact elimination.
pub fn rank_integer<I>(rows: I) -> usize
where
    I: IntoIterator<Item = SparseRow<i64>>,
{
    let rows: Vec<SparseRow<i64>> = rows.into_iter().collect();
    if rank_modular(&rows) == rows.len() {
        return rows.len();
    }
    let mut ech = IntegerEchelon::new();
    for row in rows {
        ech.insert(row.into_iter().map(|(c, v)| (c, BigInt::from(v))).collect());
    }
    ech.rank()
}

/// Prime modulus of [`rank_modular`]; products of residues fit in a `u64`.
pub const MODULUS: u64 = 2_147_483_647;

fn mod_mul(a: u64, b: u64) -> u64 {
    a * b % MODULUS
}

fn mod_inv(a: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (a, MODULUS - 2, 1);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base);
        }
        base = mod_mul(base, base);
        exp >>= 1;
    }
    acc
}

/// Rank of integer rows reduced modulo [`MODULUS`].
pub fn rank_modular(rows: &[SparseRow<i64>]) -> usize {
    let mut pivots: BTreeMap<usize, SparseRow<u64>> = BTreeMap::new();
    for row in rows {
        let mut row: SparseRow<u64> = row
            .iter()
            .map(|&(c, v)| (c, v.rem_euclid(MODULUS as i64) as u64))
            .filter(|&(_, v)| v != 0)
            .collect();
        while let Some(&(lead_col, lead)) = row.first() {
            match pivots.get(&lead_col) {
                Some(pivot) => row = subtract_modular(&row, lead, pivot),
                None => {
                    let inv = mod_inv(lead);
                    let scaled = row.iter().map(|&(c, v)| (c, mod_mul(v, inv))).collect();
                    pivots.insert(lead_col, scaled);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// `x − f·y` modulo the prime.
fn subtract_modular(x: &[(usize, u64)], f: u64, y: &[(usize, u64)]) -> SparseRow<u64> {
    let neg = |v: u64| if v == 0 { 0 } else { MODULUS - v };
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j >= y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i]);
            i += 1;
        } else if i >= x.len() || y[j].0 < x[i].0 {
            out.push((y[j].0, neg(mod_mul(f, y[j].1))));
            j += 1;
        } else {
            let v = (x[i].1 + neg(mod_mul(f, y[j].1))) % MODULUS;
            if v != 0 {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Exact rank of rational rows.
pub fn rank_rational<I>(rows: I) -> usize
where
    I: IntoIterator<Item = SparseRow<BigRational>>,
{
    let mut ech = IntegerEchelon::new();
    for row in rows {
        ech.insert(integer_row(&row));
    }
    ech.rank()
}

/// Row echelon form over an exact field, pivots scaled to leading entry one.
#[derive(Clone, Debug)]
pub struct FieldEchelon<F: Field> {
    pivots: BTreeMap<usize, SparseRow<F>>,
}

impl<F: Field> Default for FieldEchelon<F> {
    fn default() -> Self {
        FieldEchelon {
            pivots: BTreeMap::new(),
        }
    }
}

impl<F: Field> FieldEchelon<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn reduce(&self, row: SparseRow<F>) -> SparseRow<F> {
        let mut row: SparseRow<F> = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        loop {
            let Some((lead_col, lead)) = row.first() else {
                return row;
            };
            let Some(pivot) = self.pivots.get(lead_col) else {
                return row;
            };
            let factor = lead.clone();
            row = subtract_multiple(&row, &factor, pivot);
        }
    }

    pub fn insert(&mut self, row: SparseRow<F>) -> bool {
        let row = self.reduce(row);
        let Some((c, lead)) = row.first() else {
            return false;
        };
        let inv = lead.inverse().expect("nonzero leading entry");
        let c = *c;
        let scaled = row.into_iter().map(|(j, v)| (j, v.times(&inv))).collect();
        self.pivots.insert(c, scaled);
        true
    }

    pub fn contains(&self, row: SparseRow<F>) -> bool {
        self.reduce(row).is_empty()
    }
}

/// `x − f·y` on sparse rows.
fn subtract_multiple<F: Field>(x: &[(usize, F)], f: &F, y: &[(usize, F)]) -> SparseRow<F> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j >= y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i].clone());
            i += 1;
        } else if i >= x.len() || y[j].0 < x[i].0 {
            out.push((y[j].0, f.times(&y[j].1).negated()));
            j += 1;
        } else {
            let v = x[i].1.minus(&f.times(&y[j].1));
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Exact rank of rows over a field.
pub fn rank_field<F: Field, I>(rows: I) -> usize
where
    I: IntoIterator<Item = SparseRow<F>>,
{
    let mut ech = FieldEchelon::new();
    for row in rows {
        ech.insert(row);
    }
    ech.rank()
}
