//! Moments and free cumulants of character laws, the named laws they are
//! compared against, and free convolutions at the level of cumulants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{check_bound, Error, Result};
use crate::partitions::{enumerate, Family, Partition};

/// Largest moment index accepted by [`wreath_moments`].
pub const MAX_MOMENT_INDEX: usize = 10;

/// Largest sequence length for the noncrossing moment-cumulant conversion.
pub const MAX_CUMULANT_INDEX: usize = 12;

/// Explanation attached to reports that use the moment formula.
pub const BLOCK_WEIGHT_NOTE: &str = "each block b contributes |G|^(|b|-1); the reading |b|^(|G|-1) \
    of the block weight contradicts the NC, NC2 and NCEV moment counts and is not used";

fn rational(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Moments `m_0, …, m_n` with `m_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentSequence {
    values: Vec<BigRational>,
}

impl MomentSequence {
    /// `values[0]` must be 1.
    pub fn new(values: Vec<BigRational>) -> Result<Self> {
        match values.first() {
            Some(v) if v.is_one() => Ok(MomentSequence { values }),
            _ => Err(Error::Parse("a moment sequence starts with m_0 = 1".into())),
        }
    }

    pub fn from_integers(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| rational(v)).collect())
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// Highest moment index present.
    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> &BigRational {
        &self.values[n]
    }

    pub fn truncate(&self, n_max: usize) -> MomentSequence {
        MomentSequence {
            values: self.values[..=n_max.min(self.n_max())].to_vec(),
        }
    }
}

/// Free cumulants `κ_1, …, κ_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumulantSequence {
    values: Vec<BigRational>,
}

impl CumulantSequence {
    /// `values[i]` is `κ_{i+1}`.
    pub fn new(values: Vec<BigRational>) -> Self {
        CumulantSequence { values }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| rational(v)).collect())
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn n_max(&self) -> usize {
        self.values.len()
    }

    /// `κ_n` for `n ≥ 1`.
    pub fn get(&self, n: usize) -> &BigRational {
        &self.values[n - 1]
    }

    pub fn scale(&self, factor: &BigRational) -> CumulantSequence {
        CumulantSequence::new(self.values.iter().map(|v| v * factor).collect())
    }
}

/// A finitely supported probability measure on the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteLaw {
    atoms: Vec<(BigRational, BigRational)>,
}

impl DiscreteLaw {
    /// Atoms as (location, weight); weights positive and summing to one.
    pub fn new(atoms: Vec<(BigRational, BigRational)>) -> Result<Self> {
        if atoms.iter().any(|(_, w)| !w.is_positive()) {
            return Err(Error::Parse("atom weights must be positive".into()));
        }
        let total: BigRational = atoms.iter().map(|(_, w)| w.clone()).sum();
        if !total.is_one() {
            return Err(Error::Parse(format!("atom weights sum to {total}, not 1")));
        }
        Ok(DiscreteLaw { atoms })
    }

    pub fn atoms(&self) -> &[(BigRational, BigRational)] {
        &self.atoms
    }

    pub fn dirac(location: BigRational) -> Self {
        DiscreteLaw {
            atoms: vec![(location, BigRational::one())],
        }
    }

    /// `μ_G = (1 − 1/|G|) δ_0 + (1/|G|) δ_{|G|}`.
    pub fn mu_g(group_order: usize) -> Result<Self> {
        let g = rational(group_order as i64);
        if group_order == 1 {
            return Ok(Self::dirac(g));
        }
        let inv = g.recip();
        Self::new(vec![(BigRational::zero(), BigRational::one() - &inv), (g, inv)])
    }

    /// `(1/2|G|) δ_{−|G|} + (1 − 1/|G|) δ_0 + (1/2|G|) δ_{|G|}`.
    pub fn ncev_initial(group_order: usize) -> Result<Self> {
        let g = rational(group_order as i64);
        let half = (rational(2) * &g).recip();
        let mut atoms = vec![(-g.clone(), half.clone())];
        if group_order > 1 {
            atoms.push((BigRational::zero(), BigRational::one() - g.recip()));
        }
        atoms.push((g, half));
        Self::new(atoms)
    }

    /// `(δ_{−1} + δ_1)/2`.
    pub fn symmetric_bernoulli() -> Self {
        let half = BigRational::new(1.into(), 2.into());
        DiscreteLaw {
            atoms: vec![(rational(-1), half.clone()), (rational(1), half)],
        }
    }

    /// The law of `X·Y` for independent `X ~ self`, `Y ~ other`.
    pub fn classical_product(&self, other: &DiscreteLaw) -> DiscreteLaw {
        let mut atoms: Vec<(BigRational, BigRational)> = Vec::new();
        for (x, a) in &self.atoms {
            for (y, b) in &other.atoms {
                let loc = x * y;
                let w = a * b;
                match atoms.iter_mut().find(|(l, _)| *l == loc) {
                    Some(entry) => entry.1 += w,
                    None => atoms.push((loc, w)),
                }
            }
        }
        atoms.sort();
        DiscreteLaw { atoms }
    }
}

/// `m_n = Σ_{p ∈ family(0,n)} Π_{b ⊂ p} |G|^{|b|−1}`.
pub fn wreath_moments(family: Family, group_order: usize, n_max: usize) -> Result<MomentSequence> {
    check_bound("n_max", n_max, MAX_MOMENT_INDEX)?;
    if group_order == 0 {
        return Err(Error::InvalidGroup("group order must be positive".into()));
    }
    let g = BigInt::from(group_order);
    let mut values = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let total: BigInt = enumerate(family, 0, n)?
            .iter()
            .map(|p| {
                p.block_sizes()
                    .iter()
                    .map(|&s| num_traits::pow(g.clone(), s - 1))
                    .product::<BigInt>()
            })
            .sum();
        values.push(BigRational::from_integer(total));
    }
    MomentSequence::new(values)
}

fn noncrossing(n: usize) -> Result<Vec<Partition>> {
    enumerate(Family::Nc, 0, n)
}

/// `Π_{b ⊂ π} κ_{|b|}`.
fn block_product(p: &Partition, kappa: &[BigRational]) -> BigRational {
    p.block_sizes().iter().map(|&s| kappa[s - 1].clone()).product()
}

/// Invert `m_n = Σ_{π ∈ NC(n)} Π κ_{|b|}` term by term.
pub fn moments_to_cumulants(m: &MomentSequence) -> Result<CumulantSequence> {
    check_bound("n_max", m.n_max(), MAX_CUMULANT_INDEX)?;
    let mut kappa: Vec<BigRational> = Vec::with_capacity(m.n_max());
    for n in 1..=m.n_max() {
        let mut rest = BigRational::zero();
        kappa.push(BigRational::zero());
        for p in noncrossing(n)? {
            if p.num_blocks() > 1 {
                rest += block_product(&p, &kappa);
            }
        }
        kappa[n - 1] = m.get(n) - rest;
    }
    Ok(CumulantSequence::new(kappa))
}

/// `m_n = Σ_{π ∈ NC(n)} Π κ_{|b|}`.
pub fn cumulants_to_moments(kappa: &CumulantSequence) -> Result<MomentSequence> {
    check_bound("n_max", kappa.n_max(), MAX_CUMULANT_INDEX)?;
    let mut values = vec![BigRational::one()];
    for n in 1..=kappa.n_max() {
        values.push(noncrossing(n)?.iter().map(|p| block_product(p, kappa.values())).sum());
    }
    MomentSequence::new(values)
}

/// `m_n = Σ weight · location^n`.
pub fn law_moments(law: &DiscreteLaw, n_max: usize) -> MomentSequence {
    let values = (0..=n_max)
        .map(|n| {
            law.atoms
                .iter()
                .map(|(x, w)| w * num_traits::pow(x.clone(), n))
                .sum()
        })
        .collect();
    MomentSequence { values }
}

pub fn law_cumulants(law: &DiscreteLaw, n_max: usize) -> Result<CumulantSequence> {
    moments_to_cumulants(&law_moments(law, n_max))
}

/// Semicircle law with the given variance: `κ_2 = variance`, every other cumulant zero.
pub fn semicircle(variance: BigRational, n_max: usize) -> CumulantSequence {
    CumulantSequence::new(
        (1..=n_max)
            .map(|n| if n == 2 { variance.clone() } else { BigRational::zero() })
            .collect(),
    )
}

/// Free Poisson law with rate `rate`: every cumulant equals `rate`.
pub fn free_poisson(rate: BigRational, n_max: usize) -> CumulantSequence {
    CumulantSequence::new(vec![rate; n_max])
}

/// Free additive convolution: cumulants add, truncated to the shortest input.
pub fn free_additive(parts: &[CumulantSequence]) -> CumulantSequence {
    let len = parts.iter().map(CumulantSequence::n_max).min().unwrap_or(0);
    CumulantSequence::new(
        (0..len)
            .map(|i| parts.iter().map(|c| c.values[i].clone()).sum())
            .collect(),
    )
}

/// `μ_G ⊠ μ = (1 − 1/|G|) δ_0 + (1/|G|) μ^{⊞|G|}`, as moments.
pub fn mult_conv_with_mu_g(mu: &MomentSequence, group_order: usize) -> Result<MomentSequence> {
    if group_order == 0 {
        return Err(Error::InvalidGroup("group order must be positive".into()));
    }
    let g = rational(group_order as i64);
    let power = moments_to_cumulants(mu)?.scale(&g);
    let moments = cumulants_to_moments(&power)?;
    let inv = g.recip();
    let mut values = vec![BigRational::one()];
    values.extend(moments.values[1..].iter().map(|v| v * &inv));
    MomentSequence::new(values)
}

/// Compound free Poisson law: `κ_n = rate · m_n(initial)`.
pub fn compound_free_poisson(initial: &DiscreteLaw, rate: &BigRational, n_max: usize) -> CumulantSequence {
    let m = law_moments(initial, n_max);
    CumulantSequence::new(m.values[1..].iter().map(|v| v * rate).collect())
}

/// Whether the initial law of the NCEV case is the classical product of `μ_G`
/// with the symmetric Bernoulli law, compared on moments up to order 8.
pub fn classical_mult_check(group_order: usize) -> Result<bool> {
    const ORDER: usize = 8;
    let initial = law_moments(&DiscreteLaw::ncev_initial(group_order)?, ORDER);
    let mu = law_moments(&DiscreteLaw::mu_g(group_order)?, ORDER);
    let nu = law_moments(&DiscreteLaw::symmetric_bernoulli(), ORDER);
    let product = law_moments(&DiscreteLaw::mu_g(group_order)?.classical_product(&DiscreteLaw::symmetric_bernoulli()), ORDER);
    Ok((0..=ORDER).all(|n| *initial.get(n) == mu.get(n) * nu.get(n) && initial.get(n) == product.get(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(seq: &[BigRational]) -> Vec<i64> {
        seq.iter()
            .map(|v| {
                assert!(v.is_integer());
                i64::try_from(v.to_integer()).unwrap()
            })
            .collect()
    }

    /// First-block recursion `m_n = Σ_s κ_s Σ_{i_1+…+i_s = n−s} m_{i_1}⋯m_{i_s}`,
    /// independent of partition enumeration.
    fn moments_by_recursion(kappa: &[BigRational]) -> Vec<BigRational> {
        let n_max = kappa.len();
        let mut m = vec![BigRational::one()];
        for n in 1..=n_max {
            let mut total = BigRational::zero();
            for s in 1..=n {
                // coefficient of x^{n−s} in (Σ m_i x^i)^s
                let mut poly = vec![BigRational::one()];
                for _ in 0..s {
                    let mut next = vec![BigRational::zero(); n - s + 1];
                    for (i, a) in poly.iter().enumerate() {
                        for (j, b) in m.iter().enumerate() {
                            if i + j <= n - s {
                                next[i + j] += a * b;
                            }
                        }
                    }
                    poly = next;
                }
                total += &kappa[s - 1] * &poly[n - s];
            }
            m.push(total);
        }
        m
    }

    #[test]
    fn moment_tables() {
        let nc = wreath_moments(Family::Nc, 2, 4).unwrap();
        assert_eq!(ints(nc.values()), vec![1, 1, 3, 11, 45]);
        let nc2 = wreath_moments(Family::Nc2, 2, 4).unwrap();
        assert_eq!(ints(nc2.values()), vec![1, 0, 2, 0, 8]);
        let ncev = wreath_moments(Family::NcEv, 2, 4).unwrap();
        assert_eq!(ints(ncev.values()), vec![1, 0, 2, 0, 16]);
        assert!(wreath_moments(Family::Nc, 2, 11).is_err());
    }

    #[test]
    fn trivial_group_counts_partitions() {
        let nc = wreath_moments(Family::Nc, 1, 6).unwrap();
        assert_eq!(ints(nc.values()), vec![1, 1, 2, 5, 14, 42, 132]);
    }

    #[test]
    fn cumulant_identities() {
        for g in [2i64, 3] {
            let nc = moments_to_cumulants(&wreath_moments(Family::Nc, g as usize, 6).unwrap()).unwrap();
            assert_eq!(ints(nc.values()), (0..6).map(|n| g.pow(n)).collect::<Vec<_>>());
            let nc2 = moments_to_cumulants(&wreath_moments(Family::Nc2, g as usize, 6).unwrap()).unwrap();
            assert_eq!(ints(nc2.values()), vec![0, g, 0, 0, 0, 0]);
            let ncev = moments_to_cumulants(&wreath_moments(Family::NcEv, g as usize, 6).unwrap()).unwrap();
            let law = law_moments(&DiscreteLaw::ncev_initial(g as usize).unwrap(), 6);
            assert_eq!(ncev.values(), &law.values()[1..]);
        }
    }

    #[test]
    fn conversion_matches_recursion() {
        let kappa = CumulantSequence::from_integers(&[1, 2, -1, 3, 0, 5, 2]);
        let m = cumulants_to_moments(&kappa).unwrap();
        assert_eq!(m.values(), moments_by_recursion(kappa.values()).as_slice());
    }

    #[test]
    fn named_laws() {
        let mu = law_moments(&DiscreteLaw::mu_g(2).unwrap(), 6);
        assert_eq!(ints(&mu.values()[1..]), vec![1, 2, 4, 8, 16, 32]);
        let ncev = law_moments(&DiscreteLaw::ncev_initial(2).unwrap(), 6);
        assert_eq!(ints(ncev.values()), vec![1, 0, 2, 0, 8, 0, 32]);
        let dirac = law_moments(&DiscreteLaw::dirac(BigRational::zero()), 4);
        assert_eq!(ints(dirac.values()), vec![1, 0, 0, 0, 0]);
        assert!(DiscreteLaw::new(vec![(rational(1), rational(2))]).is_err());
        assert_eq!(DiscreteLaw::mu_g(1).unwrap(), DiscreteLaw::dirac(rational(1)));
    }

    #[test]
    fn free_additive_examples() {
        let sc = semicircle(rational(1), 6);
        assert_eq!(free_additive(&[sc.clone(), sc]), semicircle(rational(2), 6));
        let mu = law_cumulants(&DiscreteLaw::mu_g(2).unwrap(), 6).unwrap();
        let zero = law_cumulants(&DiscreteLaw::dirac(BigRational::zero()), 6).unwrap();
        assert_eq!(free_additive(&[mu.clone(), zero]), mu);
        assert_eq!(ints(mu.values()), vec![1, 1, 0, -1, 0, 2]);
        assert_eq!(free_additive(&[mu.clone(), mu.clone()]), mu.scale(&rational(2)));
    }

    #[test]
    fn convolution_with_mu_g() {
        let sc = cumulants_to_moments(&semicircle(rational(1), 4)).unwrap();
        let conv = mult_conv_with_mu_g(&sc, 2).unwrap();
        assert_eq!(ints(conv.values()), vec![1, 0, 1, 0, 4]);
        let nc2 = wreath_moments(Family::Nc2, 2, 4).unwrap();
        assert_ne!(nc2.get(4), conv.get(4));
        for g in [2, 3] {
            let poisson = cumulants_to_moments(&free_poisson(rational(1), 6)).unwrap();
            let lhs = mult_conv_with_mu_g(&poisson, g).unwrap();
            let compound = cumulants_to_moments(&compound_free_poisson(
                &DiscreteLaw::mu_g(g).unwrap(),
                &rational(1),
                6,
            ))
            .unwrap();
            assert_eq!(lhs, compound);
            assert_eq!(lhs, wreath_moments(Family::Nc, g, 6).unwrap());
        }
    }

    #[test]
    fn compound_poisson_examples() {
        let ncev = compound_free_poisson(&DiscreteLaw::ncev_initial(2).unwrap(), &rational(1), 6);
        assert_eq!(cumulants_to_moments(&ncev).unwrap(), wreath_moments(Family::NcEv, 2, 6).unwrap());
        let poisson = compound_free_poisson(&DiscreteLaw::dirac(rational(1)), &rational(1), 4);
        assert_eq!(ints(cumulants_to_moments(&poisson).unwrap().values()), vec![1, 1, 2, 5, 14]);
    }

    #[test]
    fn classical_products() {
        for g in [1, 2, 3, 4] {
            assert!(classical_mult_check(g).unwrap());
        }
    }

    proptest! {
        #[test]
        fn round_trip(raw in prop::collection::vec((-20i64..20, 1i64..6), 0..8)) {
            let kappa = CumulantSequence::new(raw.iter().map(|&(a, b)| BigRational::new(a.into(), b.into())).collect());
            let back = moments_to_cumulants(&cumulants_to_moments(&kappa).unwrap()).unwrap();
            prop_assert_eq!(back, kappa);
        }

        #[test]
        fn enumeration_agrees_with_recursion(raw in prop::collection::vec(-5i64..6, 1..8)) {
            let kappa = CumulantSequence::from_integers(&raw);
            let m = cumulants_to_moments(&kappa).unwrap();
            let expected = moments_by_recursion(kappa.values());
            prop_assert_eq!(m.values(), expected.as_slice());
        }
    }
}
