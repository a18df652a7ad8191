//! Randomized fingerprints of operator identities over a prime field.
//!
//! An identity `A = B` between operators `V^{⊗k} → V^{⊗l}` is probed by the
//! bilinear form `u^T (A − B) v` with `u = u_1 ⊗ … ⊗ u_l` and
//! `v = v_1 ⊗ … ⊗ v_k` drawn uniformly from `F_p^{dim}`. If `A ≠ B` the form
//! is a nonzero multilinear polynomial of degree `k + l` in the probe
//! coordinates, so a false agreement has probability at most `(k + l)/p`.
//! Entries are mapped to `F_p` through a fixed primitive root of unity, which
//! is injective on the small cyclotomic integers that occur here.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::cyclo::CycInt;
use crate::operators::{decode, ExactOperator};
use crate::partitions::Partition;
use crate::scalar::Scalar;

/// A prime with `27720 = lcm(1..=12)` dividing `p − 1`.
pub const PRIME: u64 = 2_305_843_009_213_423_681;

/// A primitive 27720-th root of unity modulo [`PRIME`].
const ROOT: u64 = 1_066_639_673_349_433_794;
const ROOT_ORDER: u64 = 27_720;

pub fn add(a: u64, b: u64) -> u64 {
    ((a as u128 + b as u128) % PRIME as u128) as u64
}

pub fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

pub fn pow(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        exp >>= 1;
    }
    acc
}

pub fn from_i64(v: i64) -> u64 {
    v.rem_euclid(PRIME as i64) as u64
}

/// Image of `ζ_m^k`.
pub fn zeta(m: usize, k: usize) -> u64 {
    assert!(ROOT_ORDER.is_multiple_of(m as u64), "order {m} does not divide {ROOT_ORDER}");
    pow(ROOT, (ROOT_ORDER / m as u64) * (k % m) as u64)
}

/// Scalars with a ring map into `F_p`.
pub trait Reduce: Scalar {
    fn reduce(&self) -> u64;
}

impl Reduce for i64 {
    fn reduce(&self) -> u64 {
        from_i64(*self)
    }
}

impl Reduce for CycInt {
    fn reduce(&self) -> u64 {
        let m = self.order();
        self.coeffs()
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &c)| add(acc, mul(from_i64(c), zeta(m, j))))
    }
}

/// Per block of a partition: the colourings its points may carry (in point
/// order) together with their weights.
pub type BlockTerms<S> = Vec<Vec<(Vec<usize>, S)>>;

/// Random rank-one probe vectors, one per tensor slot on each side.
#[derive(Clone, Debug)]
pub struct Probe {
    dim: usize,
    domain: Vec<Vec<u64>>,
    codomain: Vec<Vec<u64>>,
}

impl Probe {
    pub fn new(dim: usize, slots: usize, seed: u64) -> Probe {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut draw = |_| (0..dim).map(|_| rng.gen_range(0..PRIME)).collect::<Vec<u64>>();
        let domain = (0..slots).map(&mut draw).collect();
        let codomain = (0..slots).map(&mut draw).collect();
        Probe { dim, domain, codomain }
    }

    fn weight(&self, vectors: &[Vec<u64>], index: usize, len: usize) -> u64 {
        decode(index, self.dim, len)
            .iter()
            .zip(vectors)
            .fold(1, |acc, (&d, vec)| mul(acc, vec[d]))
    }

    /// `op · v`, indexed by the rows of `op`.
    pub fn right<S: Reduce>(&self, op: &ExactOperator<S>) -> Vec<u64> {
        let mut out = vec![0; op.rows()];
        for (r, c, x) in op.entries() {
            let w = self.weight(&self.domain, *c, op.domain());
            out[*r] = add(out[*r], mul(x.reduce(), w));
        }
        out
    }

    /// `u^T · op`, indexed by the columns of `op`.
    pub fn left<S: Reduce>(&self, op: &ExactOperator<S>) -> Vec<u64> {
        let mut out = vec![0; op.cols()];
        for (r, c, x) in op.entries() {
            let w = self.weight(&self.codomain, *r, op.codomain());
            out[*c] = add(out[*c], mul(x.reduce(), w));
        }
        out
    }

    /// `u^T · op · v`.
    pub fn bilinear<S: Reduce>(&self, op: &ExactOperator<S>) -> u64 {
        op.entries().iter().fold(0, |acc, (r, c, x)| {
            let w = mul(
                self.weight(&self.codomain, *r, op.codomain()),
                self.weight(&self.domain, *c, op.domain()),
            );
            add(acc, mul(x.reduce(), w))
        })
    }

    /// `u^T · X · v` for the operator `X` whose entries are products of block
    /// terms, without building `X`: each block contributes an independent factor
    /// summed over its terms and sites.
    pub fn bilinear_blocks<S: Reduce>(&self, p: &Partition, terms: &BlockTerms<S>, group_order: usize, n: usize) -> u64 {
        let k = p.upper();
        let blocks = p.blocks();
        let mut total = 1;
        for (points, block_terms) in blocks.iter().zip(terms) {
            let mut factor = 0;
            for (colours, w) in block_terms {
                let mut over_sites = 0;
                for site in 0..n {
                    let mut prod = 1;
                    for (&pt, &c) in points.iter().zip(colours) {
                        let vec = if pt < k { &self.domain[pt] } else { &self.codomain[pt - k] };
                        prod = mul(prod, vec[site * group_order + c]);
                    }
                    over_sites = add(over_sites, prod);
                }
                factor = add(factor, mul(w.reduce(), over_sites));
            }
            total = mul(total, factor);
        }
        total
    }
}

/// `u^T · (lhs ∘ rhs) · v` from the cached one-sided products.
pub fn composed(left_of_lhs: &[u64], right_of_rhs: &[u64]) -> u64 {
    left_of_lhs
        .iter()
        .zip(right_of_rhs)
        .fold(0, |acc, (a, b)| add(acc, mul(*a, *b)))
}
