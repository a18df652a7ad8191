//! Exact matrices of the linear maps attached to partitions.
//!
//! An operator in `P(k,l)` position maps `V^{⊗k}` to `V^{⊗l}`, where each
//! tensor factor `V` has dimension `dim`. With a group `G` and `N` sites the
//! factor basis is `e_i^g`, encoded as `i·|G| + g` (sites and elements
//! 0-based). A basis tuple is encoded in mixed radix with the first tensor
//! slot most significant, rows index the codomain and columns the domain,
//! and vectorization is row-major over (row, column).

use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;

use crate::cyclo::{CycInt, Cyclo, MAX_FAST_ORDER};
use crate::error::{Error, Result};
use crate::fingerprint::{composed, BlockTerms, Probe, Reduce};
use crate::groups::{Character, FiniteGroup};
use crate::linalg::SparseRow;
use crate::partitions::{ColouredPartition, Partition};
use crate::scalar::Scalar;

/// Largest number of basis vectors a tensor power may have.
pub const MAX_SPACE_DIM: usize = 1 << 26;

/// A sparse exact matrix between tensor powers of one factor space.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactOperator<S> {
    domain: usize,
    codomain: usize,
    dim: usize,
    entries: Vec<(usize, usize, S)>,
}

fn power(dim: usize, k: usize) -> usize {
    let mut out: usize = 1;
    for _ in 0..k {
        out = out
            .checked_mul(dim)
            .filter(|&v| v <= MAX_SPACE_DIM)
            .unwrap_or_else(|| panic!("tensor power {dim}^{k} is too large"));
    }
    out
}

/// Encode a tuple of factor indices, first slot most significant.
pub fn encode(digits: &[usize], dim: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * dim + d)
}

/// Inverse of [`encode`].
pub fn decode(mut index: usize, dim: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % dim;
        index /= dim;
    }
    out
}

impl<S: Scalar> ExactOperator<S> {
    /// Build from (row, column, value) triples; duplicates are summed and zeros dropped.
    pub fn from_entries(domain: usize, codomain: usize, dim: usize, mut raw: Vec<(usize, usize, S)>) -> Self {
        raw.sort_by_key(|a| (a.0, a.1));
        let mut entries: Vec<(usize, usize, S)> = Vec::with_capacity(raw.len());
        for (r, c, v) in raw {
            match entries.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 = last.2.plus(&v),
                _ => entries.push((r, c, v)),
            }
        }
        entries.retain(|e| !e.2.is_zero());
        ExactOperator {
            domain,
            codomain,
            dim,
            entries,
        }
    }

    pub fn zero(domain: usize, codomain: usize, dim: usize) -> Self {
        ExactOperator {
            domain,
            codomain,
            dim,
            entries: Vec::new(),
        }
    }

    pub fn identity(k: usize, dim: usize) -> Self {
        let n = power(dim, k);
        ExactOperator {
            domain: k,
            codomain: k,
            dim,
            entries: (0..n).map(|i| (i, i, S::one())).collect(),
        }
    }

    /// Number of tensor factors of the domain.
    pub fn domain(&self) -> usize {
        self.domain
    }

    /// Number of tensor factors of the codomain.
    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> usize {
        power(self.dim, self.codomain)
    }

    pub fn cols(&self) -> usize {
        power(self.dim, self.domain)
    }

    pub fn entries(&self) -> &[(usize, usize, S)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> S {
        match self.entries.binary_search_by(|e| (e.0, e.1).cmp(&(row, col))) {
            Ok(i) => self.entries[i].2.clone(),
            Err(_) => S::zero(),
        }
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.domain == other.domain && self.codomain == other.codomain && self.dim == other.dim
    }

    fn row_range(&self, row: usize) -> std::ops::Range<usize> {
        let start = self.entries.partition_point(|e| e.0 < row);
        let end = start + self.entries[start..].partition_point(|e| e.0 == row);
        start..end
    }

    /// `self ∘ rhs`: apply `rhs` first.
    pub fn compose(&self, rhs: &ExactOperator<S>) -> Result<ExactOperator<S>> {
        if rhs.codomain != self.domain || rhs.dim != self.dim {
            return Err(Error::SizeMismatch(format!(
                "cannot compose {}→{} after {}→{}",
                self.domain, self.codomain, rhs.domain, rhs.codomain
            )));
        }
        let cols = rhs.cols();
        let mut acc: Vec<Option<S>> = vec![None; cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.entries.len() {
            let row = self.entries[i].0;
            while i < self.entries.len() && self.entries[i].0 == row {
                let (_, mid, ref a) = self.entries[i];
                for (_, c, b) in &rhs.entries[rhs.row_range(mid)] {
                    let t = a.times(b);
                    match &mut acc[*c] {
                        Some(v) => *v = v.plus(&t),
                        slot @ None => {
                            *slot = Some(t);
                            touched.push(*c);
                        }
                    }
                }
                i += 1;
            }
            touched.sort_unstable();
            for &c in &touched {
                let v = acc[c].take().expect("touched slot");
                if !v.is_zero() {
                    out.push((row, c, v));
                }
            }
            touched.clear();
        }
        Ok(ExactOperator {
            domain: rhs.domain,
            codomain: self.codomain,
            dim: self.dim,
            entries: out,
        })
    }

    /// Kronecker product; `self` occupies the leading tensor slots.
    pub fn tensor(&self, rhs: &ExactOperator<S>) -> Result<ExactOperator<S>> {
        if self.dim != rhs.dim {
            return Err(Error::SizeMismatch("factor dimensions differ".into()));
        }
        let (rr, rc) = (rhs.rows(), rhs.cols());
        let mut entries = Vec::with_capacity(self.nnz() * rhs.nnz());
        for (r1, c1, a) in &self.entries {
            for (r2, c2, b) in &rhs.entries {
                entries.push((r1 * rr + r2, c1 * rc + c2, a.times(b)));
            }
        }
        entries.sort_by_key(|a| (a.0, a.1));
        Ok(ExactOperator {
            domain: self.domain + rhs.domain,
            codomain: self.codomain + rhs.codomain,
            dim: self.dim,
            entries,
        })
    }

    pub fn tensor_power(&self, k: usize) -> ExactOperator<S> {
        let mut out = ExactOperator::identity(0, self.dim);
        for _ in 0..k {
            out = out.tensor(self).expect("same factor dimension");
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ExactOperator<S> {
        let mut entries: Vec<_> = self
            .entries
            .iter()
            .map(|(r, c, v)| (*c, *r, v.conjugate()))
            .collect();
        entries.sort_by_key(|a| (a.0, a.1));
        ExactOperator {
            domain: self.codomain,
            codomain: self.domain,
            dim: self.dim,
            entries,
        }
    }

    pub fn scale(&self, s: &S) -> ExactOperator<S> {
        let entries = self
            .entries
            .iter()
            .map(|(r, c, v)| (*r, *c, v.times(s)))
            .filter(|e| !e.2.is_zero())
            .collect();
        ExactOperator {
            entries,
            ..self.shape_only()
        }
    }

    fn shape_only(&self) -> ExactOperator<S> {
        ExactOperator::zero(self.domain, self.codomain, self.dim)
    }

    pub fn add(&self, rhs: &ExactOperator<S>) -> Result<ExactOperator<S>> {
        if !self.same_shape(rhs) {
            return Err(Error::SizeMismatch("operator shapes differ".into()));
        }
        let mut raw = self.entries.clone();
        raw.extend(rhs.entries.iter().cloned());
        Ok(ExactOperator::from_entries(self.domain, self.codomain, self.dim, raw))
    }

    pub fn sub(&self, rhs: &ExactOperator<S>) -> Result<ExactOperator<S>> {
        self.add(&rhs.scale(&S::from_i64(-1)))
    }

    /// Exact equality of shapes and entries.
    pub fn equals(&self, rhs: &ExactOperator<S>) -> bool {
        self.same_shape(rhs)
            && self.entries.len() == rhs.entries.len()
            && self
                .entries
                .iter()
                .zip(&rhs.entries)
                .all(|(a, b)| a.0 == b.0 && a.1 == b.1 && a.2 == b.2)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ExactOperator<T> {
        let entries = self
            .entries
            .iter()
            .map(|(r, c, v)| (*r, *c, f(v)))
            .filter(|e| !e.2.is_zero())
            .collect();
        ExactOperator {
            domain: self.domain,
            codomain: self.codomain,
            dim: self.dim,
            entries,
        }
    }

    /// The nonzero rows as sparse vectors, in row order.
    pub fn row_vectors(&self) -> Vec<SparseRow<S>> {
        let mut out: Vec<SparseRow<S>> = Vec::new();
        let mut last = None;
        for (r, c, v) in &self.entries {
            if last != Some(*r) {
                out.push(Vec::new());
                last = Some(*r);
            }
            out.last_mut().expect("pushed").push((*c, v.clone()));
        }
        out
    }

    /// Row-major vectorization.
    pub fn vectorize(&self) -> SparseRow<S> {
        let cols = self.cols();
        self.entries
            .iter()
            .map(|(r, c, v)| (r * cols + c, v.clone()))
            .collect()
    }

    /// Conjugate by tensor powers: `B^{⊗l} ∘ self ∘ A^{⊗k}`.
    pub fn conjugate_by(&self, after: &ExactOperator<S>, before: &ExactOperator<S>) -> Result<ExactOperator<S>> {
        after
            .tensor_power(self.codomain)
            .compose(&self.compose(&before.tensor_power(self.domain))?)
    }
}

impl<S: Scalar> fmt::Display for ExactOperator<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "operator {}→{} (factor dim {}, {} nonzero entries)",
            self.domain,
            self.codomain,
            self.dim,
            self.nnz()
        )
    }
}

/// Enumerate one choice per block from `choices` options, calling `f` with the choice tuple.
fn for_each_block_choice(blocks: usize, choices: usize, mut f: impl FnMut(&[usize])) {
    let mut tuple = vec![0usize; blocks];
    if choices == 0 && blocks > 0 {
        return;
    }
    loop {
        f(&tuple);
        let mut pos = blocks;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < choices {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

/// Enumerate tuples with `tuple[i] < radices[i]`, last position fastest.
fn for_each_mixed(radices: &[usize], mut f: impl FnMut(&[usize])) {
    if radices.contains(&0) {
        return;
    }
    let mut tuple = vec![0usize; radices.len()];
    loop {
        f(&tuple);
        let mut pos = radices.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < radices[pos] {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

/// Row and column indices for a digit per point.
fn point_digits_to_index(p: &Partition, digits: &[usize], dim: usize) -> (usize, usize) {
    let k = p.upper();
    (encode(&digits[k..], dim), encode(&digits[..k], dim))
}

/// `T_p` on `(C^n)^{⊗k} → (C^n)^{⊗l}`: entry one exactly when indices are constant on blocks.
pub fn t_of(p: &Partition, n: usize) -> ExactOperator<i64> {
    let labels = p.labels();
    let mut raw = Vec::with_capacity(power(n, p.num_blocks()));
    let mut digits = vec![0; labels.len()];
    for_each_block_choice(p.num_blocks(), n, |choice| {
        for (d, &b) in digits.iter_mut().zip(labels) {
            *d = choice[b];
        }
        let (r, c) = point_digits_to_index(p, &digits, n);
        raw.push((r, c, 1));
    });
    ExactOperator::from_entries(p.upper(), p.lower(), n, raw)
}

/// `T_p` of a group-coloured partition, embedded in the full space with basis `e_i^g`.
pub fn t_coloured(p: &ColouredPartition, group_order: usize, n: usize) -> ExactOperator<i64> {
    let labels = p.base.labels();
    let colours = p.colours();
    let dim = n * group_order;
    let mut raw = Vec::new();
    let mut digits = vec![0; labels.len()];
    for_each_block_choice(p.base.num_blocks(), n, |choice| {
        for (pt, d) in digits.iter_mut().enumerate() {
            *d = choice[labels[pt]] * group_order + colours[pt];
        }
        let (r, c) = point_digits_to_index(&p.base, &digits, dim);
        raw.push((r, c, 1));
    });
    ExactOperator::from_entries(p.base.upper(), p.base.lower(), dim, raw)
}

/// `M_p = Σ_{x ∈ G^{b(p)}} T_{x.p}`.
pub fn m_of(p: &ColouredPartition, group: &FiniteGroup, n: usize) -> ExactOperator<i64> {
    let go = group.order();
    let labels = p.base.labels();
    let colours = p.colours();
    let dim = n * go;
    let mut raw = Vec::new();
    let mut digits = vec![0; labels.len()];
    // a block choice is (site, group element) packed as site·|G| + element
    for_each_block_choice(p.base.num_blocks(), dim, |choice| {
        for (pt, d) in digits.iter_mut().enumerate() {
            let ch = choice[labels[pt]];
            *d = (ch / go) * go + group.mul(ch % go, colours[pt]);
        }
        let (r, c) = point_digits_to_index(&p.base, &digits, dim);
        raw.push((r, c, 1));
    });
    ExactOperator::from_entries(p.base.upper(), p.base.lower(), dim, raw)
}

/// `L_p = Σ_{g ∈ G} T_{g.p}`.
pub fn l_of(p: &ColouredPartition, group: &FiniteGroup, n: usize) -> ExactOperator<i64> {
    let mut raw = Vec::new();
    for g in 0..group.order() {
        raw.extend_from_slice(t_coloured(&p.act_global(g, group), group.order(), n).entries());
    }
    ExactOperator::from_entries(p.base.upper(), p.base.lower(), n * group.order(), raw)
}

fn check_site(n: usize, i: usize) -> Result<()> {
    if i >= n {
        return Err(Error::OutOfRange(format!("site {} of {n}", i + 1)));
    }
    Ok(())
}

/// `ρ(g) e_j^h = e_j^{gh}` on one factor.
pub fn rho(group: &FiniteGroup, n: usize, g: usize) -> ExactOperator<i64> {
    let go = group.order();
    let raw = (0..n)
        .flat_map(|j| (0..go).map(move |h| (j, h)))
        .map(|(j, h)| (j * go + group.mul(g, h), j * go + h, 1))
        .collect();
    ExactOperator::from_entries(1, 1, n * go, raw)
}

/// `ρ_i(g)`: left multiplication by `g` on the colour of site `i` only (0-based).
pub fn rho_i(group: &FiniteGroup, n: usize, i: usize, g: usize) -> Result<ExactOperator<i64>> {
    check_site(n, i)?;
    let go = group.order();
    let raw = (0..n)
        .flat_map(|j| (0..go).map(move |h| (j, h)))
        .map(|(j, h)| {
            let target = if j == i { group.mul(g, h) } else { h };
            (j * go + target, j * go + h, 1)
        })
        .collect();
    Ok(ExactOperator::from_entries(1, 1, n * go, raw))
}

/// `π(σ) e_i^g = e_{σ^{-1}(i)}^g` for a permutation `σ` of the sites (0-based images).
pub fn pi_rep(n: usize, group_order: usize, sigma: &[usize]) -> Result<ExactOperator<i64>> {
    let mut seen = vec![false; n];
    if sigma.len() != n || sigma.iter().any(|&s| s >= n || std::mem::replace(&mut seen[s], true)) {
        return Err(Error::OutOfRange(format!("{sigma:?} is not a permutation of {n} sites")));
    }
    let mut inverse = vec![0; n];
    for (i, &s) in sigma.iter().enumerate() {
        inverse[s] = i;
    }
    let raw = (0..n)
        .flat_map(|i| (0..group_order).map(move |g| (i, g)))
        .map(|(i, g)| (inverse[i] * group_order + g, i * group_order + g, 1))
        .collect();
    Ok(ExactOperator::from_entries(1, 1, n * group_order, raw))
}

/// `M_{|^g_e}`: identity string with upper colour `g` and lower colour `e`.
pub fn m_string(group: &FiniteGroup, n: usize, g: usize) -> ExactOperator<i64> {
    let p = ColouredPartition::with_rows(Partition::identity(), &[g], &[group.identity()])
        .expect("one point per row");
    m_of(&p, group, n)
}

/// `P_χ = (1/|G|) Σ_g χ(g) M_{|^g_e}`.
pub fn p_of(chi: &Character, group: &FiniteGroup, n: usize) -> Result<ExactOperator<Cyclo>> {
    group.cyclic_orders().ok_or(Error::NonAbelian)?;
    let weight = Cyclo::from_rational(BigRational::new(1.into(), (group.order() as i64).into()));
    let mut raw = Vec::new();
    for g in 0..group.order() {
        let c = &chi.value(group, g) * &weight;
        for (r, col, v) in m_string(group, n, g).entries() {
            raw.push((*r, *col, &c * &Cyclo::from_i64(*v)));
        }
    }
    Ok(ExactOperator::from_entries(1, 1, n * group.order(), raw))
}

/// Square matrices over `Q(ζ_m)` representing a group, indexed by group element.
#[derive(Clone, Debug)]
pub struct Irrep {
    pub matrices: Vec<Vec<Vec<Cyclo>>>,
}

impl Irrep {
    pub fn degree(&self) -> usize {
        self.matrices.first().map_or(0, Vec::len)
    }

    /// Check shape, the homomorphism property and unitarity.
    pub fn validate(&self, group: &FiniteGroup) -> Result<()> {
        let d = self.degree();
        if self.matrices.len() != group.order() {
            return Err(Error::InvalidIrrep(format!(
                "{} matrices for a group of order {}",
                self.matrices.len(),
                group.order()
            )));
        }
        if d == 0 || self.matrices.iter().any(|m| m.len() != d || m.iter().any(|r| r.len() != d)) {
            return Err(Error::InvalidIrrep("matrices must be square of one size".into()));
        }
        let ident = identity_matrix(d);
        if self.matrices[group.identity()] != ident {
            return Err(Error::InvalidIrrep("identity does not act trivially".into()));
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                if mat_mul(&self.matrices[a], &self.matrices[b]) != self.matrices[group.mul(a, b)] {
                    return Err(Error::InvalidIrrep(format!("not multiplicative at ({a}, {b})")));
                }
            }
            if mat_mul(&self.matrices[a], &mat_adjoint(&self.matrices[a])) != ident {
                return Err(Error::InvalidIrrep(format!("matrix of element {a} is not unitary")));
            }
        }
        Ok(())
    }
}

fn identity_matrix(d: usize) -> Vec<Vec<Cyclo>> {
    (0..d)
        .map(|i| (0..d).map(|j| Cyclo::from_i64((i == j) as i64)).collect())
        .collect()
}

fn mat_mul(a: &[Vec<Cyclo>], b: &[Vec<Cyclo>]) -> Vec<Vec<Cyclo>> {
    let d = a.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| (0..d).fold(Cyclo::zero(), |acc, t| &acc + &(&a[i][t] * &b[t][j])))
                .collect()
        })
        .collect()
}

fn mat_adjoint(a: &[Vec<Cyclo>]) -> Vec<Vec<Cyclo>> {
    let d = a.len();
    (0..d).map(|i| (0..d).map(|j| a[j][i].conj()).collect()).collect()
}

/// `(d/|G|) Σ_g π(g)_{ij} M_{|^g_e}` for 0-based matrix indices; `i = j` gives `P_{π,i}`.
pub fn irrep_unit(irrep: &Irrep, i: usize, j: usize, group: &FiniteGroup, n: usize) -> Result<ExactOperator<Cyclo>> {
    irrep.validate(group)?;
    let d = irrep.degree();
    if i >= d || j >= d {
        return Err(Error::OutOfRange(format!("matrix index beyond degree {d}")));
    }
    let weight = Cyclo::from_rational(BigRational::new((d as i64).into(), (group.order() as i64).into()));
    let mut raw = Vec::new();
    for g in 0..group.order() {
        let c = &irrep.matrices[g][i][j] * &weight;
        if c.is_zero() {
            continue;
        }
        for (r, col, v) in m_string(group, n, g).entries() {
            raw.push((*r, *col, &c * &Cyclo::from_i64(*v)));
        }
    }
    Ok(ExactOperator::from_entries(1, 1, n * group.order(), raw))
}

pub fn p_nonabelian(irrep: &Irrep, i: usize, group: &FiniteGroup, n: usize) -> Result<ExactOperator<Cyclo>> {
    irrep_unit(irrep, i, i, group, n)
}

/// Per block, the product of the upper characters equals the product of the lower ones.
pub fn is_admissible(p: &Partition, chis: &[Character], rhos: &[Character], group: &FiniteGroup) -> Result<bool> {
    check_tuples(p, chis, rhos, group)?;
    let trivial = Character::trivial(group)?;
    let nb = p.num_blocks();
    let mut up = vec![trivial.clone(); nb];
    let mut down = vec![trivial; nb];
    for (&b, chi) in p.upper_labels().iter().zip(chis) {
        up[b] = up[b].mul(chi, group);
    }
    for (&b, rho) in p.lower_labels().iter().zip(rhos) {
        down[b] = down[b].mul(rho, group);
    }
    Ok(up == down)
}

fn check_tuples(p: &Partition, chis: &[Character], rhos: &[Character], group: &FiniteGroup) -> Result<()> {
    group.cyclic_orders().ok_or(Error::NonAbelian)?;
    if chis.len() != p.upper() {
        return Err(Error::LengthMismatch {
            expected: p.upper(),
            got: chis.len(),
        });
    }
    if rhos.len() != p.lower() {
        return Err(Error::LengthMismatch {
            expected: p.lower(),
            got: rhos.len(),
        });
    }
    Ok(())
}

/// Per block, the colourings of its points allowed by `M_p` (every left
/// translate of the block's colours), each with weight one.
pub fn m_block_terms(p: &ColouredPartition, group: &FiniteGroup) -> BlockTerms<i64> {
    let colours = p.colours();
    p.base
        .blocks()
        .iter()
        .map(|points| {
            (0..group.order())
                .map(|x| (points.iter().map(|&pt| group.mul(x, colours[pt])).collect(), 1))
                .collect()
        })
        .collect()
}

/// Per block, the colourings `t` of its points with nonzero weight in `F_p(χ,ρ)`.
///
/// Summands `M_{p(g,h)}` reaching a colouring `t` are those with `(g,h) = x^{-1}.t`
/// for a block tuple `x`, so the weight of `t` is `Σ_x Π_pt χ_pt(x_β^{-1} t_pt)`
/// (conjugated on the lower row), which factors over blocks.
pub fn f_block_terms(p: &Partition, chis: &[Character], rhos: &[Character], group: &FiniteGroup) -> Result<BlockTerms<CycInt>> {
    check_tuples(p, chis, rhos, group)?;
    let m = group.exponent();
    if m > MAX_FAST_ORDER {
        return Err(Error::Unsupported(format!("groups of exponent {m} > {MAX_FAST_ORDER}")));
    }
    let go = group.order();
    let k = p.upper();
    let exponent = |pt: usize, g: usize| {
        if pt < k {
            chis[pt].power(group, g)
        } else {
            (m - rhos[pt - k].power(group, g)) % m
        }
    };
    let mut out = Vec::new();
    for points in p.blocks() {
        let mut terms = Vec::new();
        for_each_block_choice(points.len(), go, |t| {
            let mut counts = vec![0i64; m];
            for x in 0..go {
                let xi = group.inv(x);
                let e: usize = points
                    .iter()
                    .zip(t)
                    .map(|(&pt, &c)| exponent(pt, group.mul(xi, c)))
                    .sum();
                counts[e % m] += 1;
            }
            let weight = counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .fold(CycInt::from_i64(0), |acc, (e, &c)| {
                    acc.add(&CycInt::zeta_pow(m, e as i64).mul(&CycInt::from_i64(c)))
                });
            if !weight.is_zero() {
                terms.push((t.to_vec(), weight));
            }
        });
        out.push(terms);
    }
    Ok(out)
}

/// Materialize the operator whose entries are products of block terms: each
/// block picks a site and one of its colourings.
pub fn from_block_terms<S: Scalar>(p: &Partition, terms: &BlockTerms<S>, group_order: usize, n: usize) -> ExactOperator<S> {
    let blocks = p.blocks();
    let radices: Vec<usize> = terms.iter().map(|t| t.len() * n).collect();
    let dim = n * group_order;
    let mut digits = vec![0; p.points()];
    let mut raw = Vec::new();
    for_each_mixed(&radices, |choice| {
        let mut weight = S::one();
        for ((points, block_terms), &c) in blocks.iter().zip(terms).zip(choice) {
            let (site, term) = (c / block_terms.len(), c % block_terms.len());
            let (colours, w) = &block_terms[term];
            for (&pt, &colour) in points.iter().zip(colours) {
                digits[pt] = site * group_order + colour;
            }
            weight = weight.times(w);
        }
        let (r, c) = point_digits_to_index(p, &digits, dim);
        raw.push((r, c, weight));
    });
    ExactOperator::from_entries(p.upper(), p.lower(), dim, raw)
}

/// Number of entries [`from_block_terms`] would produce.
pub fn block_terms_size<S>(terms: &BlockTerms<S>, n: usize) -> usize {
    terms.iter().fold(1usize, |acc, t| acc.saturating_mul(t.len() * n))
}

/// `F_p(χ, ρ) = Σ_{g ∈ G^k} Σ_{h ∈ G^l} χ(g) conj(ρ(h)) M_{p(g,h)}`, with `χ` on the
/// upper row (domain) and `ρ` on the lower row (codomain).
pub fn f_of(p: &Partition, chis: &[Character], rhos: &[Character], group: &FiniteGroup, n: usize) -> Result<ExactOperator<CycInt>> {
    let terms = f_block_terms(p, chis, rhos, group)?;
    Ok(from_block_terms(p, &terms, group.order(), n))
}

/// The literal double sum of `M` operators, kept as an independent reference for `f_of`.
pub fn f_of_by_definition(
    p: &Partition,
    chis: &[Character],
    rhos: &[Character],
    group: &FiniteGroup,
    n: usize,
) -> Result<ExactOperator<CycInt>> {
    check_tuples(p, chis, rhos, group)?;
    let k = p.upper();
    let mut acc = ExactOperator::zero(k, p.lower(), n * group.order());
    let mut failure = None;
    for_each_block_choice(p.points(), group.order(), |colours| {
        let mut w = CycInt::from_i64(1);
        for (pt, &c) in colours.iter().enumerate() {
            let v = if pt < k {
                chis[pt].value_int(group, c)
            } else {
                rhos[pt - k].value_int(group, c).conj()
            };
            w = w.mul(&v);
        }
        let cp = ColouredPartition::new(p.clone(), colours.to_vec()).expect("one colour per point");
        let term = m_of(&cp, group, n).map(|&v| CycInt::from_i64(v)).scale(&w);
        match acc.add(&term) {
            Ok(sum) => acc = sum,
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(acc),
    }
}

/// An operator times a power of `√|G|`: value = `operator · |G|^{half_power/2}`.
#[derive(Clone, Debug)]
pub struct NormalizedOperator {
    pub operator: ExactOperator<Cyclo>,
    pub half_power: i64,
    pub group_order: usize,
}

impl NormalizedOperator {
    /// Fold even powers of `√|G|` into the matrix, leaving a tag of 0 or 1.
    pub fn canonical(&self) -> NormalizedOperator {
        let whole = self.half_power.div_euclid(2);
        let rest = self.half_power.rem_euclid(2);
        let g = BigRational::from_integer((self.group_order as i64).into());
        let factor = if whole >= 0 {
            num_traits::pow(g, whole as usize)
        } else {
            num_traits::pow(g.recip(), (-whole) as usize)
        };
        NormalizedOperator {
            operator: self.operator.scale(&Cyclo::from_rational(factor)),
            half_power: rest,
            group_order: self.group_order,
        }
    }

    pub fn compose(&self, rhs: &NormalizedOperator) -> Result<NormalizedOperator> {
        Ok(NormalizedOperator {
            operator: self.operator.compose(&rhs.operator)?,
            half_power: self.half_power + rhs.half_power,
            group_order: self.group_order,
        })
    }

    pub fn tensor(&self, rhs: &NormalizedOperator) -> Result<NormalizedOperator> {
        Ok(NormalizedOperator {
            operator: self.operator.tensor(&rhs.operator)?,
            half_power: self.half_power + rhs.half_power,
            group_order: self.group_order,
        })
    }

    pub fn adjoint(&self) -> NormalizedOperator {
        NormalizedOperator {
            operator: self.operator.adjoint(),
            ..self.clone()
        }
    }

    pub fn scale(&self, s: &Cyclo) -> NormalizedOperator {
        NormalizedOperator {
            operator: self.operator.scale(s),
            ..self.clone()
        }
    }

    pub fn equals(&self, rhs: &NormalizedOperator) -> bool {
        let (a, b) = (self.canonical(), rhs.canonical());
        if a.operator.is_zero() && b.operator.is_zero() {
            return a.operator.same_shape(&b.operator);
        }
        a.half_power == b.half_power && a.operator.equals(&b.operator)
    }
}

/// `F̃_p(χ,ρ) = |G|^{-(k+l)/2 - b(p)} F_p(χ,ρ)`.
pub fn f_normalized(p: &Partition, chis: &[Character], rhos: &[Character], group: &FiniteGroup, n: usize) -> Result<NormalizedOperator> {
    let f = f_of(p, chis, rhos, group, n)?;
    Ok(NormalizedOperator {
        operator: f.map(CycInt::to_cyclo),
        half_power: -(p.points() as i64) - 2 * p.num_blocks() as i64,
        group_order: group.order(),
    })
}

/// Outcome of an identity sweep.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub suite: String,
    pub cases: usize,
    /// Cases settled by probe fingerprints rather than full matrices.
    pub fingerprinted: usize,
    pub violations: Vec<String>,
}

impl VerificationReport {
    pub fn new(suite: &str) -> Self {
        VerificationReport {
            suite: suite.to_string(),
            ..Default::default()
        }
    }

    pub fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violations.push(describe());
        }
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.cases += other.cases;
        self.fingerprinted += other.fingerprinted;
        self.violations.extend(other.violations);
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every partition in `P(k,l)`.
fn all_partitions(k: usize, l: usize) -> Vec<Partition> {
    crate::partitions::enumerate(crate::partitions::Family::All, k, l).expect("small sizes")
}

/// `T_p* = T_{p*}`, `T_p ⊗ T_q = T_{p⊗q}` and `T_p T_q = N^{rl(p,q)} T_{pq}` over all
/// partitions with `k, l, m ≤ max_side` and each `n` in `ns`.
pub fn verify_t_composition(max_side: usize, ns: &[usize]) -> VerificationReport {
    let mut report = VerificationReport::new("T");
    let rows: Vec<Vec<Vec<Partition>>> = (0..=max_side)
        .map(|k| (0..=max_side).map(|l| all_partitions(k, l)).collect())
        .collect();
    for &n in ns {
        let mut cache: HashMap<Partition, ExactOperator<i64>> = HashMap::new();
        let mut t = |p: &Partition| cache.entry(p.clone()).or_insert_with(|| t_of(p, n)).clone();
        for k in 0..=max_side {
            for l in 0..=max_side {
                for p in &rows[k][l] {
                    let tp = t(p);
                    report.check(tp.adjoint().equals(&t(&p.involution())), || {
                        format!("N={n}: T_p* != T_p* for {p}")
                    });
                }
            }
        }
        // tensor identity on pairs with at most `max_side` points each
        let small: Vec<&Partition> = rows
            .iter()
            .flatten()
            .flatten()
            .filter(|p| p.points() <= max_side)
            .collect();
        for p in &small {
            for q in &small {
                let lhs = t(p).tensor(&t(q)).expect("same n");
                report.check(lhs.equals(&t(&p.tensor(q))), || {
                    format!("N={n}: T_p ⊗ T_q != T_(p⊗q) for {p}, {q}")
                });
            }
        }
        for k in 0..=max_side {
            for l in 0..=max_side {
                for m in 0..=max_side {
                    for q in &rows[k][l] {
                        let tq = t(q);
                        for p in &rows[l][m] {
                            let lhs = t(p).compose(&tq).expect("inner sizes match");
                            let (pq, loops) = p.compose(q).expect("inner sizes match");
                            let factor = (n as i64).pow(loops as u32);
                            let rhs = t(&pq).scale(&factor);
                            report.check(lhs.equals(&rhs), || {
                                format!("N={n}: T_p T_q != N^rl T_pq for p={p}, q={q}")
                            });
                        }
                    }
                }
            }
        }
    }
    report
}

/// Block tuples `(x, y)` with `x.p` and `y.q` agreeing on the middle row, if any.
///
/// Each equation `x_β c = y_γ c'` fixes one unknown from another, so each
/// connected component of the block graph is solved by propagation from a
/// root set to `e`; a solution for any root value is a left translate of it.
pub fn match_block_tuples(p: &ColouredPartition, q: &ColouredPartition, group: &FiniteGroup) -> Option<(Vec<usize>, Vec<usize>)> {
    let l = q.base.lower();
    let (bp, bq) = (p.base.num_blocks(), q.base.num_blocks());
    // unknowns 0..bp are blocks of p, bp..bp+bq blocks of q
    let mut adj: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); bp + bq];
    for j in 0..l {
        let beta = p.base.upper_labels()[j];
        let gamma = bp + q.base.lower_labels()[j];
        let cp = p.upper_colours()[j];
        let cq = q.lower_colours()[j];
        // x_β = y_γ · cq · cp^{-1}, equivalently y_γ = x_β · cp · cq^{-1}
        adj[beta].push((gamma, cp, cq));
        adj[gamma].push((beta, cq, cp));
    }
    let mut value: Vec<Option<usize>> = vec![None; bp + bq];
    for root in 0..bp + bq {
        if value[root].is_some() {
            continue;
        }
        value[root] = Some(group.identity());
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            let vu = value[u].expect("assigned");
            for &(w, cu, cw) in &adj[u] {
                // v_u · cu = v_w · cw
                let want = group.mul(group.mul(vu, cu), group.inv(cw));
                match value[w] {
                    None => {
                        value[w] = Some(want);
                        stack.push(w);
                    }
                    Some(v) if v != want => return None,
                    Some(_) => {}
                }
            }
        }
    }
    let vals: Vec<usize> = value.into_iter().map(|v| v.expect("assigned")).collect();
    Some((vals[..bp].to_vec(), vals[bp..].to_vec()))
}

/// Exhaustive search over `G^{b(p)} × G^{b(q)}`, the reference for [`match_block_tuples`].
pub fn match_block_tuples_exhaustive(p: &ColouredPartition, q: &ColouredPartition, group: &FiniteGroup) -> bool {
    let mut found = false;
    for_each_block_choice(p.base.num_blocks(), group.order(), |x| {
        if found {
            return;
        }
        let px = p.act_blocks(x, group).expect("tuple length");
        for_each_block_choice(q.base.num_blocks(), group.order(), |y| {
            if !found {
                let qy = q.act_blocks(y, group).expect("tuple length");
                found = px.upper_colours() == qy.lower_colours();
            }
        });
    });
    found
}

/// The partition and scalar predicted for `M_p M_q`, or `None` when the product vanishes.
pub fn predicted_m_term(
    p: &ColouredPartition,
    q: &ColouredPartition,
    group: &FiniteGroup,
    n: usize,
) -> Result<Option<(ColouredPartition, i64)>> {
    match match_block_tuples(p, q, group) {
        None => Ok(None),
        Some((x, y)) => {
            let (r, loops) = p.act_blocks(&x, group)?.compose(&q.act_blocks(&y, group)?)?;
            Ok(Some((r, ((group.order() * n) as i64).pow(loops as u32))))
        }
    }
}

/// The product `M_p M_q` predicted by the averaged composition law.
pub fn predicted_m_product(p: &ColouredPartition, q: &ColouredPartition, group: &FiniteGroup, n: usize) -> Result<ExactOperator<i64>> {
    Ok(match predicted_m_term(p, q, group, n)? {
        None => ExactOperator::zero(q.base.upper(), p.base.lower(), n * group.order()),
        Some((r, factor)) => m_of(&r, group, n).scale(&factor),
    })
}

/// Largest estimated entry count for which a product identity is checked on full matrices.
pub const EXACT_BUDGET: usize = 1 << 12;

/// Independent probes per fingerprinted identity.
pub const PROBES: u64 = 3;

const PROBE_SEED: u64 = 0x5eed;

/// Rough work for `lhs ∘ rhs`: entries times the mean row length met.
fn product_cost<S: Scalar>(lhs: &ExactOperator<S>, rhs: &ExactOperator<S>) -> usize {
    lhs.nnz().saturating_mul(rhs.nnz()) / rhs.rows().max(1)
}

/// One-sided probe products of the operators in a list, computed on first use.
struct ProbeCache<'a> {
    probes: &'a [Probe],
    right: HashMap<usize, Vec<Vec<u64>>>,
    left: HashMap<usize, Vec<Vec<u64>>>,
}

impl<'a> ProbeCache<'a> {
    fn new(probes: &'a [Probe]) -> Self {
        ProbeCache {
            probes,
            right: HashMap::new(),
            left: HashMap::new(),
        }
    }

    /// `u^T (lhs ∘ rhs) v` for every probe; `lhs` and `rhs` are keyed by list position.
    fn composed<S: Reduce>(&mut self, lhs: (usize, &ExactOperator<S>), rhs: (usize, &ExactOperator<S>)) -> Vec<u64> {
        let probes = self.probes;
        let left = self
            .left
            .entry(lhs.0)
            .or_insert_with(|| probes.iter().map(|pr| pr.left(lhs.1)).collect());
        let right = self
            .right
            .entry(rhs.0)
            .or_insert_with(|| probes.iter().map(|pr| pr.right(rhs.1)).collect());
        left.iter().zip(right.iter()).map(|(a, b)| composed(a, b)).collect()
    }
}

fn probes_for(dim: usize, max_points: usize) -> Vec<Probe> {
    (0..PROBES).map(|i| Probe::new(dim, max_points, PROBE_SEED + i)).collect()
}

/// `M_p M_q` against the averaged composition law for all canonically coloured
/// pairs with at most `max_points` points each, zero cases included.
///
/// Pairs whose product fits [`EXACT_BUDGET`] are compared as full matrices; larger
/// ones by probe fingerprints, with the predicted side evaluated block by block.
pub fn verify_m_composition(group: &FiniteGroup, n: usize, max_points: usize) -> Result<VerificationReport> {
    use crate::categories::canonical_coloured;
    use crate::partitions::Family;
    let mut report = VerificationReport::new("M");
    let set = group.colour_set();
    let dim = n * group.order();
    let probes = probes_for(dim, max_points);
    let mut ops: HashMap<(usize, usize), Vec<(ColouredPartition, ExactOperator<i64>)>> = HashMap::new();
    for total in 0..=max_points {
        for k in 0..=total {
            let list = canonical_coloured(Family::All, group, k, total - k)?
                .into_iter()
                .map(|p| {
                    let op = m_of(&p, group, n);
                    (p, op)
                })
                .collect();
            ops.insert((k, total - k), list);
        }
    }
    for l in 0..=max_points {
        for k in 0..=max_points - l {
            for m in 0..=max_points - l {
                let mut cache = ProbeCache::new(&probes);
                for (qi, (q, mq)) in ops[&(k, l)].iter().enumerate() {
                    for (pi, (p, mp)) in ops[&(l, m)].iter().enumerate() {
                        let term = predicted_m_term(p, q, group, n)?;
                        let predicted_size = term
                            .as_ref()
                            .map_or(0, |(r, _)| (dim as u64).saturating_pow(r.base.num_blocks() as u32) as usize);
                        let describe = || format!("M_p M_q mismatch: p={}, q={}", p.to_text(&set), q.to_text(&set));
                        if product_cost(mp, mq).max(predicted_size) <= EXACT_BUDGET {
                            let lhs = mp.compose(mq)?;
                            let rhs = match &term {
                                None => ExactOperator::zero(k, m, dim),
                                Some((r, factor)) => m_of(r, group, n).scale(factor),
                            };
                            report.check(lhs.equals(&rhs), describe);
                        } else {
                            let lhs = cache.composed((pi, mp), (qi, mq));
                            let rhs: Vec<u64> = match &term {
                                None => vec![0; probes.len()],
                                Some((r, factor)) => {
                                    let terms = m_block_terms(r, group);
                                    probes
                                        .iter()
                                        .map(|pr| {
                                            crate::fingerprint::mul(
                                                factor.reduce(),
                                                pr.bilinear_blocks(&r.base, &terms, group.order(), n),
                                            )
                                        })
                                        .collect()
                                }
                            };
                            report.fingerprinted += 1;
                            report.check(lhs == rhs, describe);
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}


/// Character tuples of a given length, lexicographic.
pub fn character_tuples(dual: &[Character], len: usize) -> Vec<Vec<Character>> {
    crate::categories::words(dual.len(), len)
        .into_iter()
        .map(|w| w.into_iter().map(|i| dual[i].clone()).collect())
        .collect()
}

/// Admissibility annihilation for every partition with at most `max_points` points and
/// every tuple pair, and the composition scalar
/// `|G|^{b(p)+b(q)−b(pq)+l} N^{rl(p,q)} δ(ρ,χ')` for all admissible composable pairs.
///
/// Large products are fingerprinted as in [`verify_m_composition`].
pub fn verify_f_composition(group: &FiniteGroup, n: usize, max_points: usize) -> Result<VerificationReport> {
    let dual = crate::groups::dual_group(group)?;
    let go = group.order() as i64;
    let mut report = VerificationReport::new("F");
    let probes = probes_for(n * group.order(), max_points);
    type Entry = (Partition, Vec<Character>, Vec<Character>, ExactOperator<CycInt>);
    let mut admissible: HashMap<(usize, usize), Vec<Entry>> = HashMap::new();
    for total in 0..=max_points {
        for k in 0..=total {
            let l = total - k;
            let mut list = Vec::new();
            for p in all_partitions(k, l) {
                for chis in character_tuples(&dual, k) {
                    for rhos in character_tuples(&dual, l) {
                        let f = f_of(&p, &chis, &rhos, group, n)?;
                        let adm = is_admissible(&p, &chis, &rhos, group)?;
                        report.check(adm != f.is_zero(), || {
                            format!("F_p zero-pattern disagrees with admissibility: p={p}, χ={chis:?}, ρ={rhos:?}")
                        });
                        if adm {
                            list.push((p.clone(), chis.clone(), rhos, f));
                        }
                    }
                }
            }
            admissible.insert((k, l), list);
        }
    }
    for l in 0..=max_points {
        for k in 0..=max_points - l {
            for m in 0..=max_points - l {
                let mut cache = ProbeCache::new(&probes);
                for (qi, (q, chi, rho, fq)) in admissible[&(k, l)].iter().enumerate() {
                    for (pi, (p, chi2, rho2, fp)) in admissible[&(l, m)].iter().enumerate() {
                        let describe = || {
                            format!("F_p F_q mismatch: p={p}, q={q}, χ={chi:?}, ρ={rho:?}, χ'={chi2:?}, ρ'={rho2:?}")
                        };
                        let expected = if rho == chi2 {
                            let (pq, loops) = p.compose(q)?;
                            let exponent = p.num_blocks() + q.num_blocks() + l - pq.num_blocks();
                            let scalar = go.pow(exponent as u32) * (n as i64).pow(loops as u32);
                            let terms = f_block_terms(&pq, chi, rho2, group)?;
                            Some((pq, scalar, terms))
                        } else {
                            None
                        };
                        let predicted_size = expected.as_ref().map_or(0, |e| block_terms_size(&e.2, n));
                        if product_cost(fp, fq).max(predicted_size) <= EXACT_BUDGET {
                            let lhs = fp.compose(fq)?;
                            let ok = match &expected {
                                None => lhs.is_zero(),
                                Some((pq, scalar, terms)) => lhs.equals(
                                    &from_block_terms(pq, terms, group.order(), n).scale(&CycInt::from_i64(*scalar)),
                                ),
                            };
                            report.check(ok, describe);
                        } else {
                            let lhs = cache.composed((pi, fp), (qi, fq));
                            let rhs: Vec<u64> = match &expected {
                                None => vec![0; probes.len()],
                                Some((pq, scalar, terms)) => probes
                                    .iter()
                                    .map(|pr| {
                                        crate::fingerprint::mul(
                                            scalar.reduce(),
                                            pr.bilinear_blocks(pq, terms, group.order(), n),
                                        )
                                    })
                                    .collect(),
                            };
                            report.fingerprinted += 1;
                            report.check(lhs == rhs, describe);
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}


/// Exact rank of the span of operators (vectorized rows).
pub fn span_rank_int(ops: &[ExactOperator<i64>]) -> Result<usize> {
    check_shapes(ops)?;
    Ok(crate::linalg::rank_integer(ops.iter().map(ExactOperator::vectorize)))
}

pub fn span_rank_cyclo(ops: &[ExactOperator<Cyclo>]) -> Result<usize> {
    check_shapes(ops)?;
    Ok(crate::linalg::rank_field(ops.iter().map(ExactOperator::vectorize)))
}

/// Rank of cyclotomic-integer operators, computed over `Q(ζ_m)`.
pub fn span_rank_cycint(ops: &[ExactOperator<CycInt>]) -> Result<usize> {
    check_shapes(ops)?;
    Ok(crate::linalg::rank_field(
        ops.iter().map(|op| op.map(CycInt::to_cyclo).vectorize()),
    ))
}

fn check_shapes<S: Scalar>(ops: &[ExactOperator<S>]) -> Result<()> {
    match ops.first() {
        Some(first) if ops.iter().any(|o| !o.same_shape(first)) => {
            Err(Error::SizeMismatch("operators of different shapes".into()))
        }
        _ => Ok(()),
    }
}

impl Irrep {
    /// Extend matrices given on generators to the whole group, then validate.
    pub fn from_generators(group: &FiniteGroup, generators: &[(usize, Vec<Vec<Cyclo>>)]) -> Result<Irrep> {
        let d = generators
            .first()
            .map(|g| g.1.len())
            .ok_or_else(|| Error::InvalidIrrep("no generators".into()))?;
        let mut known: Vec<Option<Vec<Vec<Cyclo>>>> = vec![None; group.order()];
        known[group.identity()] = Some(identity_matrix(d));
        let mut queue = vec![group.identity()];
        while let Some(a) = queue.pop() {
            for (g, m) in generators {
                let target = group.mul(a, *g);
                let value = mat_mul(known[a].as_ref().expect("visited"), m);
                match &known[target] {
                    None => {
                        known[target] = Some(value);
                        queue.push(target);
                    }
                    Some(existing) if *existing != value => {
                        return Err(Error::InvalidIrrep("generator relations are violated".into()));
                    }
                    Some(_) => {}
                }
            }
        }
        let matrices = known
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidIrrep("generators do not generate the group".into()))?;
        let irrep = Irrep { matrices };
        irrep.validate(group)?;
        Ok(irrep)
    }
}

/// `P_χ` completeness, orthogonality, idempotence and self-adjointness for every character.
pub fn verify_projections(group: &FiniteGroup, n: usize) -> Result<VerificationReport> {
    let dual = crate::groups::dual_group(group)?;
    let mut report = VerificationReport::new("P");
    let ps: Vec<ExactOperator<Cyclo>> = dual.iter().map(|chi| p_of(chi, group, n)).collect::<Result<_>>()?;
    let mut total = ExactOperator::zero(1, 1, n * group.order());
    for (a, pa) in ps.iter().enumerate() {
        total = total.add(pa)?;
        report.check(pa.adjoint().equals(pa), || format!("P_{} is not self-adjoint", dual[a].label()));
        for (b, pb) in ps.iter().enumerate() {
            let prod = pa.compose(pb)?;
            let ok = if a == b { prod.equals(pa) } else { prod.is_zero() };
            report.check(ok, || {
                format!("P_{} P_{} is wrong", dual[a].label(), dual[b].label())
            });
        }
    }
    report.check(total.equals(&ExactOperator::identity(1, n * group.order())), || {
        "projections do not sum to the identity".into()
    });
    Ok(report)
}

/// Matrix units of an irrep: `X_ij X_kl = δ_jk X_il` and `X_ij* = X_ji`.
pub fn verify_irrep_units(irrep: &Irrep, group: &FiniteGroup, n: usize) -> Result<VerificationReport> {
    let d = irrep.degree();
    let mut report = VerificationReport::new("P");
    let mut units = vec![Vec::with_capacity(d); d];
    for (i, row) in units.iter_mut().enumerate() {
        for j in 0..d {
            row.push(irrep_unit(irrep, i, j, group, n)?);
        }
    }
    for i in 0..d {
        for j in 0..d {
            report.check(units[i][j].adjoint().equals(&units[j][i]), || {
                format!("X_{i}{j}* != X_{j}{i}")
            });
            for k in 0..d {
                for l in 0..d {
                    let prod = units[i][j].compose(&units[k][l])?;
                    let ok = if j == k { prod.equals(&units[i][l]) } else { prod.is_zero() };
                    report.check(ok, || format!("X_{i}{j} X_{k}{l} is wrong"));
                }
            }
        }
    }
    Ok(report)
}

/// Matrix units of every irrep, mutual orthogonality of the `P_{π,i}` across irreps and,
/// when `Σ d_π² = |G|`, completeness `Σ_{π,i} P_{π,i} = 1`.
pub fn verify_irrep_projections(irreps: &[Irrep], group: &FiniteGroup, n: usize) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("P");
    let mut projections = Vec::new();
    for (a, irrep) in irreps.iter().enumerate() {
        report.merge(verify_irrep_units(irrep, group, n)?);
        for i in 0..irrep.degree() {
            projections.push((a, i, p_nonabelian(irrep, i, group, n)?));
        }
    }
    for (a, i, pa) in &projections {
        for (b, j, pb) in &projections {
            if a != b {
                report.check(pa.compose(pb)?.is_zero(), || format!("P_{{{a},{i}}} P_{{{b},{j}}} is not zero"));
            }
        }
    }
    if irreps.iter().map(|r| r.degree() * r.degree()).sum::<usize>() == group.order() {
        let mut total = ExactOperator::zero(1, 1, n * group.order());
        for (_, _, p) in &projections {
            total = total.add(p)?;
        }
        report.check(total.equals(&ExactOperator::identity(1, n * group.order())), || {
            "projections do not sum to the identity".into()
        });
    }
    Ok(report)
}

/// `F_p(χ,ρ)* = F_{p*}(ρ,χ)` and `F_p ⊗ F_q = F_{p⊗q}` on concatenated tuples.
pub fn verify_f_structure(group: &FiniteGroup, n: usize, max_points: usize) -> Result<VerificationReport> {
    let dual = crate::groups::dual_group(group)?;
    let mut report = VerificationReport::new("F");
    let mut family = Vec::new();
    for total in 0..=max_points {
        for k in 0..=total {
            for p in all_partitions(k, total - k) {
                for chis in character_tuples(&dual, k) {
                    for rhos in character_tuples(&dual, total - k) {
                        family.push((p.clone(), chis.clone(), rhos));
                    }
                }
            }
        }
    }
    for (p, chis, rhos) in &family {
        let f = f_of(p, chis, rhos, group, n)?;
        let g = f_of(&p.involution(), rhos, chis, group, n)?;
        report.check(f.adjoint().equals(&g), || format!("F_p* != F_p* for p={p}"));
    }
    let half: Vec<_> = family.iter().filter(|e| 2 * e.0.points() <= max_points).collect();
    for (p, chi1, rho1) in &half {
        let fp = f_of(p, chi1, rho1, group, n)?;
        for (q, chi2, rho2) in &half {
            let lhs = fp.tensor(&f_of(q, chi2, rho2, group, n)?)?;
            let chis: Vec<_> = chi1.iter().chain(chi2).cloned().collect();
            let rhos: Vec<_> = rho1.iter().chain(rho2).cloned().collect();
            let rhs = f_of(&p.tensor(q), &chis, &rhos, group, n)?;
            report.check(lhs.equals(&rhs), || format!("F_p ⊗ F_q != F_(p⊗q) for p={p}, q={q}"));
        }
    }
    Ok(report)
}

fn conjugation_invariant(op: &ExactOperator<i64>, forward: &ExactOperator<i64>, back: &ExactOperator<i64>) -> bool {
    op.conjugate_by(back, forward).is_ok_and(|c| c.equals(op))
}

/// Forward equivariance: `M_p` commutes with every `ρ_i(g)` and every `π(σ)`,
/// `L_p` with every `ρ(g)`, for canonical members of `family^G` within the bound.
pub fn verify_equivariance(
    family: crate::partitions::Family,
    group: &FiniteGroup,
    n: usize,
    max_points: usize,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("equivariance");
    let go = group.order();
    let mut site_pairs = Vec::new();
    for i in 0..n {
        for g in 0..go {
            site_pairs.push((rho_i(group, n, i, g)?, rho_i(group, n, i, group.inv(g))?));
        }
    }
    let global: Vec<_> = (0..go).map(|g| (rho(group, n, g), rho(group, n, group.inv(g)))).collect();
    let mut perms = Vec::new();
    for sigma in permutations(n) {
        let mut inverse = vec![0; n];
        for (i, &s) in sigma.iter().enumerate() {
            inverse[s] = i;
        }
        perms.push((pi_rep(n, go, &sigma)?, pi_rep(n, go, &inverse)?));
    }
    let set = group.colour_set();
    for total in 0..=max_points {
        for k in 0..=total {
            for p in crate::categories::canonical_coloured(family, group, k, total - k)? {
                let m = m_of(&p, group, n);
                for (fwd, back) in site_pairs.iter().chain(&perms) {
                    report.check(conjugation_invariant(&m, fwd, back), || {
                        format!("M_p not invariant: p={}", p.to_text(&set))
                    });
                }
                let l = l_of(&p, group, n);
                for (fwd, back) in &global {
                    report.check(conjugation_invariant(&l, fwd, back), || {
                        format!("L_p not invariant under ρ: p={}", p.to_text(&set))
                    });
                }
            }
        }
    }
    Ok(report)
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).expect("successor exists");
        current.swap(i - 1, j);
        current[i..].reverse();
    }
}

/// Dimension of the subspace of `span{T_p : p ∈ P^G(k,l)}` fixed by every
/// `ρ_i`-conjugation, next to the number of block-action orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedSpace {
    pub span_dim: usize,
    pub fixed_dim: usize,
    pub orbit_count: usize,
}

/// Solve the fixed-point system exactly: with `D_p = (Ad_j(T_p) − T_p)_j`
/// stacked over all conjugations `j`, the fixed subspace has dimension
/// `rank{T_p} − rank{D_p}`.
pub fn converse_fixed_space(group: &FiniteGroup, n: usize, k: usize, l: usize) -> Result<FixedSpace> {
    use crate::partitions::Family;
    let go = group.order();
    let alphabet = crate::categories::words(go, k + l);
    let mut ts = Vec::new();
    for base in all_partitions(k, l) {
        for w in &alphabet {
            ts.push(t_coloured(&ColouredPartition::new(base.clone(), w.clone())?, go, n));
        }
    }
    let mut conj = Vec::new();
    for i in 0..n {
        for g in 0..go {
            conj.push((rho_i(group, n, i, g)?, rho_i(group, n, i, group.inv(g))?));
        }
    }
    let block = ts.first().map_or(0, |t| t.rows() * t.cols());
    let mut diffs = Vec::with_capacity(ts.len());
    for t in &ts {
        let mut row = Vec::new();
        for (j, (fwd, back)) in conj.iter().enumerate() {
            let d = t.conjugate_by(back, fwd)?.sub(t)?;
            row.extend(d.vectorize().into_iter().map(|(c, v)| (j * block + c, v)));
        }
        diffs.push(row);
    }
    let span_dim = span_rank_int(&ts)?;
    let fixed_dim = span_dim - crate::linalg::rank_integer(diffs);
    let orbit_count = crate::categories::canonical_coloured(Family::All, group, k, l)?.len();
    Ok(FixedSpace {
        span_dim,
        fixed_dim,
        orbit_count,
    })
}

/// Rank of `{M_p}` over canonical members of `family^G(k,l)` on the full space.
pub fn dim_mor_averaged(family: crate::partitions::Family, group: &FiniteGroup, n: usize, k: usize, l: usize) -> Result<usize> {
    let ops: Vec<_> = crate::categories::canonical_coloured(family, group, k, l)?
        .iter()
        .map(|p| m_of(p, group, n))
        .collect();
    span_rank_int(&ops)
}

/// Rank of `{F_p(χ,ρ) : p ∈ family(k,l)}` for fixed boundary character tuples.
pub fn dim_mor_characters(
    family: crate::partitions::Family,
    group: &FiniteGroup,
    n: usize,
    chis: &[Character],
    rhos: &[Character],
) -> Result<usize> {
    let mut ops = Vec::new();
    for p in crate::partitions::enumerate(family, chis.len(), rhos.len())? {
        let f = f_of(&p, chis, rhos, group, n)?;
        if !f.is_zero() {
            ops.push(f);
        }
    }
    span_rank_cycint(&ops)
}

/// Rank of the uncoloured `{T_p}` over members of `spec` with the given boundary colour words.
pub fn dim_mor_coloured(
    spec: &crate::categories::CategorySpec,
    n: usize,
    upper_word: &[usize],
    lower_word: &[usize],
) -> Result<usize> {
    let bases: Vec<Partition> = crate::categories::enumerate_category(spec, upper_word, lower_word)?
        .into_iter()
        .map(|p| p.base)
        .collect();
    gram_rank(&bases, n)
}

/// Number of blocks of the join of two partitions on the same points.
fn join_blocks(p: &Partition, q: &Partition) -> usize {
    let offset = p.num_blocks();
    let mut parent: Vec<usize> = (0..offset + q.num_blocks()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = parent.len();
    for (&a, &b) in p.labels().iter().zip(q.labels()) {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, offset + b));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
        }
    }
    components
}

/// Rank of `{T_p}` from its Gram matrix `⟨T_p, T_q⟩ = N^{b(p ∨ q)}`; the span
/// of real vectors and their Gram matrix have the same rank.
pub fn gram_rank(partitions: &[Partition], n: usize) -> Result<usize> {
    let Some(first) = partitions.first() else {
        return Ok(0);
    };
    if partitions.iter().any(|p| p.upper() != first.upper() || p.lower() != first.lower()) {
        return Err(Error::SizeMismatch("partitions of different shapes".into()));
    }
    crate::error::check_bound("points", first.points(), crate::partitions::DEFAULT_MAX_POINTS)?;
    if (n as i64).checked_pow(first.points() as u32).is_none() {
        return Err(Error::Unsupported(format!("Gram entries overflow for N = {n}")));
    }
    let rows = partitions.iter().map(|p| {
        partitions
            .iter()
            .enumerate()
            .map(|(j, q)| (j, (n as i64).pow(join_blocks(p, q) as u32)))
            .collect()
    });
    Ok(crate::linalg::rank_integer(rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::dual_group;
    use crate::partitions::{enumerate, Family};

    fn z(n: usize) -> FiniteGroup {
        FiniteGroup::cyclic(n).unwrap()
    }

    fn coloured(p: Partition, up: &[usize], down: &[usize]) -> ColouredPartition {
        ColouredPartition::with_rows(p, up, down).unwrap()
    }

    #[test]
    fn t_basics() {
        for n in 1..=4 {
            assert!(t_of(&Partition::identity(), n).equals(&ExactOperator::identity(1, n)));
        }
        let cup = t_of(&Partition::cup(), 3);
        assert_eq!((cup.rows(), cup.cols(), cup.nnz()), (9, 1, 3));
        for n in 2..=5 {
            let loop_value = t_of(&Partition::cap(), n).compose(&t_of(&Partition::cup(), n)).unwrap();
            assert_eq!(loop_value.entries(), &[(0, 0, n as i64)]);
        }
        let cross = t_of(&Partition::crossing(), 3);
        let id2 = t_of(&Partition::identity().tensor(&Partition::identity()), 3);
        assert!(cross.compose(&cross).unwrap().equals(&id2));
    }

    #[test]
    fn t_identities_small() {
        let report = verify_t_composition(2, &[3]);
        assert!(report.is_clean(), "{:?}", report.violations);
        assert!(report.cases > 0);
    }

    #[test]
    fn t_adjoint_is_transpose() {
        for total in 0..=4 {
            for k in 0..=total {
                for p in enumerate(Family::All, k, total - k).unwrap() {
                    assert!(t_of(&p, 2).adjoint().equals(&t_of(&p.involution(), 2)));
                }
            }
        }
    }

    #[test]
    fn m_examples() {
        let g = z(2);
        for n in 1..=3 {
            let id = coloured(Partition::identity(), &[0], &[0]);
            assert!(m_of(&id, &g, n).equals(&ExactOperator::identity(1, 2 * n)));
        }
        let swap = m_of(&coloured(Partition::identity(), &[1], &[0]), &g, 1);
        assert_eq!(swap.entries(), &[(0, 1, 1), (1, 0, 1)]);
        // one-block partitions: L = M
        for total in 1..=4 {
            for k in 0..=total {
                let base = Partition::one_block(k, total - k);
                for w in crate::categories::words(2, total) {
                    let p = ColouredPartition::new(base.clone(), w).unwrap();
                    assert!(l_of(&p, &g, 2).equals(&m_of(&p, &g, 2)));
                }
            }
        }
    }

    #[test]
    fn m_depends_on_orbit_only() {
        let g = z(3);
        let p = coloured(Partition::cup().tensor(&Partition::identity()), &[2], &[1, 2, 0]);
        let canon = p.canonical_e_form(&g);
        assert!(m_of(&p, &g, 2).equals(&m_of(&canon, &g, 2)));
    }

    #[test]
    fn cap_cup_scalar() {
        let g = z(2);
        let cap = coloured(Partition::cap(), &[0, 0], &[]);
        let cup = coloured(Partition::cup(), &[], &[0, 0]);
        let prod = m_of(&cap, &g, 3).compose(&m_of(&cup, &g, 3)).unwrap();
        assert_eq!(prod.entries(), &[(0, 0, 6)]);
    }

    #[test]
    fn mismatched_colours_give_zero() {
        // the only inner matches need x_β = y_γ·1·2^{-1} and x_β = y_γ·0·0^{-1} at once
        let g = z(3);
        let p = coloured(Partition::identity().tensor(&Partition::identity()), &[1, 0], &[0, 0]);
        let q = coloured(Partition::one_block(0, 2), &[], &[2, 0]);
        assert!(match_block_tuples(&p, &q, &g).is_some());
        let p = coloured(Partition::cap(), &[1, 0], &[]);
        let q = coloured(Partition::cup(), &[], &[0, 0]);
        assert!(match_block_tuples(&p, &q, &g).is_none());
        assert!(!match_block_tuples_exhaustive(&p, &q, &g));
        let prod = m_of(&p, &g, 2).compose(&m_of(&q, &g, 2)).unwrap();
        assert!(prod.is_zero());
    }

    #[test]
    fn matching_solver_agrees_with_exhaustive_search() {
        for g in [z(2), z(3), FiniteGroup::symmetric(3).unwrap()] {
            for l in 0..=2 {
                let qs = crate::categories::canonical_coloured(Family::All, &g, 1, l).unwrap();
                let ps = crate::categories::canonical_coloured(Family::All, &g, l, 1).unwrap();
                for q in &qs {
                    for p in &ps {
                        assert_eq!(
                            match_block_tuples(p, q, &g).is_some(),
                            match_block_tuples_exhaustive(p, q, &g)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn m_sweep_small() {
        let report = verify_m_composition(&z(2), 2, 3).unwrap();
        assert!(report.is_clean(), "{:?}", report.violations);
    }

    #[test]
    fn rho_operators() {
        let g = z(3);
        for i in 0..3 {
            assert!(rho_i(&g, 3, i, 0).unwrap().equals(&ExactOperator::identity(1, 9)));
        }
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                for a in 0..3 {
                    for b in 0..3 {
                        let x = rho_i(&g, 3, i, a).unwrap();
                        let y = rho_i(&g, 3, j, b).unwrap();
                        assert!(x.compose(&y).unwrap().equals(&y.compose(&x).unwrap()));
                    }
                }
            }
        }
        assert!(rho_i(&g, 3, 3, 1).is_err());
        let swap = rho(&z(2), 2, 1);
        assert_eq!(swap.entries(), &[(0, 1, 1), (1, 0, 1), (2, 3, 1), (3, 2, 1)]);
        assert!(pi_rep(3, 2, &[0, 0, 1]).is_err());
    }

    #[test]
    fn projections_for_z2() {
        let g = z(2);
        let dual = dual_group(&g).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        let p_eps = p_of(&dual[0], &g, 1).unwrap();
        let expected: Vec<_> = [(0, 0), (0, 1), (1, 0), (1, 1)]
            .iter()
            .map(|&(r, c)| (r, c, Cyclo::from_rational(half.clone())))
            .collect();
        assert_eq!(p_eps.entries(), expected.as_slice());
        let p_sigma = p_of(&dual[1], &g, 1).unwrap();
        assert_eq!(p_sigma.get(0, 1), Cyclo::from_rational(-half));
    }

    #[test]
    fn f_agrees_with_definition() {
        let g = z(3);
        let dual = dual_group(&g).unwrap();
        for total in 0..=3 {
            for k in 0..=total {
                for p in enumerate(Family::All, k, total - k).unwrap() {
                    for chis in character_tuples(&dual, k) {
                        for rhos in character_tuples(&dual, total - k) {
                            let fast = f_of(&p, &chis, &rhos, &g, 1).unwrap();
                            let slow = f_of_by_definition(&p, &chis, &rhos, &g, 1).unwrap();
                            assert!(fast.equals(&slow), "{p} {chis:?} {rhos:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn f_examples() {
        let g = z(2);
        let dual = dual_group(&g).unwrap();
        let (eps, sigma) = (dual[0].clone(), dual[1].clone());
        let cup = Partition::cup();
        assert!(!is_admissible(&cup, &[], &[sigma.clone(), eps.clone()], &g).unwrap());
        assert!(f_of(&cup, &[], &[sigma.clone(), eps.clone()], &g, 2).unwrap().is_zero());
        assert!(is_admissible(&cup, &[], &[sigma.clone(), sigma.clone()], &g).unwrap());
        let f = f_of(&cup, &[], &[sigma.clone(), sigma.clone()], &g, 2).unwrap();
        assert_eq!(span_rank_cycint(std::slice::from_ref(&f)).unwrap(), 1);
        let three = Partition::one_block(1, 2);
        assert!(!is_admissible(&three, std::slice::from_ref(&sigma), &[sigma.clone(), sigma.clone()], &g).unwrap());
        // cap after cup with inner (σ,σ): 2^4 · 2
        let cap = Partition::cap();
        let fcap = f_of(&cap, &[sigma.clone(), sigma.clone()], &[], &g, 2).unwrap();
        let prod = fcap.compose(&f).unwrap();
        let empty = f_of(&Partition::empty(), &[], &[], &g, 2).unwrap();
        assert!(prod.equals(&empty.scale(&CycInt::from_i64(32))));
    }

    #[test]
    fn f_sweep_small() {
        let report = verify_f_composition(&z(2), 2, 3).unwrap();
        assert!(report.is_clean(), "{:?}", report.violations);
    }

    #[test]
    fn normalized_f_is_multiplicative() {
        let g = z(3);
        let dual = dual_group(&g).unwrap();
        let id = Partition::identity();
        for chi in &dual {
            let f = f_normalized(&id, std::slice::from_ref(chi), std::slice::from_ref(chi), &g, 2).unwrap();
            let p = NormalizedOperator {
                operator: p_of(chi, &g, 2).unwrap(),
                half_power: 0,
                group_order: 3,
            };
            assert!(f.equals(&p));
        }
        // F̃_cap F̃_cup = N^{rl} F̃_∅ with odd half powers cancelling
        let (a, b) = (dual[1].clone(), dual[2].clone());
        let cup = f_normalized(&Partition::cup(), &[], &[a.clone(), b.clone()], &g, 2).unwrap();
        let cap = f_normalized(&Partition::cap(), &[a, b], &[], &g, 2).unwrap();
        let empty = f_normalized(&Partition::empty(), &[], &[], &g, 2).unwrap();
        assert!(cap.compose(&cup).unwrap().equals(&empty.scale(&Cyclo::from_i64(2))));
    }

    fn s3_irreps() -> (FiniteGroup, Vec<Irrep>) {
        let g = FiniteGroup::symmetric(3).unwrap();
        let (r, s) = (g.element("231").unwrap(), g.element("213").unwrap());
        let c = |v: i64| Cyclo::from_i64(v);
        let w = |k: i64| Cyclo::zeta_pow(3, k);
        let trivial = Irrep::from_generators(&g, &[(r, vec![vec![c(1)]]), (s, vec![vec![c(1)]])]).unwrap();
        let sign = Irrep::from_generators(&g, &[(r, vec![vec![c(1)]]), (s, vec![vec![c(-1)]])]).unwrap();
        let standard = Irrep::from_generators(
            &g,
            &[
                (r, vec![vec![w(1), c(0)], vec![c(0), w(2)]]),
                (s, vec![vec![c(0), c(1)], vec![c(1), c(0)]]),
            ],
        )
        .unwrap();
        (g, vec![trivial, sign, standard])
    }

    #[test]
    fn abelian_projections() {
        for g in ["Z2", "Z3", "Z2xZ2"] {
            let g = FiniteGroup::parse(g).unwrap();
            for n in 1..=2 {
                let report = verify_projections(&g, n).unwrap();
                assert!(report.is_clean(), "{:?}", report.violations);
            }
        }
    }

    #[test]
    fn nonabelian_projections() {
        let (g, irreps) = s3_irreps();
        let p_triv = p_nonabelian(&irreps[0], 0, &g, 2).unwrap();
        let p_sign = p_nonabelian(&irreps[1], 0, &g, 2).unwrap();
        for p in [&p_triv, &p_sign] {
            assert!(p.compose(p).unwrap().equals(p));
            assert!(p.adjoint().equals(p));
        }
        assert!(p_triv.compose(&p_sign).unwrap().is_zero());
        let report = verify_irrep_units(&irreps[2], &g, 2).unwrap();
        assert!(report.is_clean(), "{:?}", report.violations);
        let p1 = p_nonabelian(&irreps[2], 0, &g, 1).unwrap();
        let p2 = p_nonabelian(&irreps[2], 1, &g, 1).unwrap();
        assert_eq!(crate::linalg::rank_field(p1.row_vectors()), 2);
        assert_eq!(crate::linalg::rank_field(p2.row_vectors()), 2);
        assert!(p1.compose(&p2).unwrap().is_zero());
        // all projections together resolve the identity: 1 + 1 + 2·2 = |G|
        let mut total = ExactOperator::zero(1, 1, 6);
        for (irrep, d) in irreps.iter().zip([1, 1, 2]) {
            for i in 0..d {
                total = total.add(&p_nonabelian(irrep, i, &g, 1).unwrap()).unwrap();
            }
        }
        assert!(total.equals(&ExactOperator::identity(1, 6)));
        let broken = Irrep {
            matrices: vec![vec![vec![Cyclo::from_i64(2)]]; 6],
        };
        assert!(matches!(p_nonabelian(&broken, 0, &g, 1), Err(Error::InvalidIrrep(_))));
    }

    #[test]
    fn irrep_projection_suite() {
        let (g, irreps) = s3_irreps();
        let full = verify_irrep_projections(&irreps, &g, 2).unwrap();
        assert!(full.is_clean(), "{:?}", full.violations);
        // without the standard irrep completeness is not checked
        let partial = verify_irrep_projections(&irreps[..2], &g, 2).unwrap();
        assert!(partial.is_clean());
        assert!(partial.cases < full.cases);
    }

    #[test]
    fn equivariance_small() {
        let report = verify_equivariance(Family::Nc, &z(2), 2, 2).unwrap();
        assert!(report.is_clean(), "{:?}", report.violations);
        assert!(report.cases > 0);
    }

    #[test]
    fn converse_fixed_space_counts_orbits() {
        let fixed = converse_fixed_space(&z(2), 2, 1, 1).unwrap();
        assert_eq!(fixed.fixed_dim, 3);
        assert_eq!(fixed.orbit_count, 3);
        assert_eq!(fixed.span_dim, 8);
    }

    #[test]
    fn f_structure_small() {
        let report = verify_f_structure(&z(2), 2, 3).unwrap();
        assert!(report.is_clean(), "{:?}", report.violations);
    }

    #[test]
    fn permutation_listing() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(3)[1], vec![0, 2, 1]);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn dim_mor_routes() {
        let g = z(2);
        assert_eq!(dim_mor_averaged(Family::Nc, &g, 4, 0, 2).unwrap(), 3);
        let dual = dual_group(&g).unwrap();
        let sigma = dual[1].clone();
        assert_eq!(dim_mor_characters(Family::Nc, &g, 4, &[], &[sigma.clone(), sigma]).unwrap(), 1);
        let spec = crate::categories::CategorySpec::GammaColoured(Family::Nc, g.clone());
        assert_eq!(dim_mor_coloured(&spec, 4, &[], &[1, 1]).unwrap(), 1);
        let nc2 = crate::categories::CategorySpec::Uncoloured(Family::Nc2);
        assert_eq!(dim_mor_coloured(&nc2, 4, &[], &[0, 0, 0]).unwrap(), 0);
    }

    #[test]
    fn block_terms_rebuild_m() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let p = coloured("P(2,2) {u1 l2}{u2}{l1}".parse().unwrap(), &[3, 1], &[2, 5]);
        let built = from_block_terms(&p.base, &m_block_terms(&p, &g), g.order(), 2);
        assert!(built.equals(&m_of(&p, &g, 2)));
    }

    #[test]
    fn fingerprints_separate_different_products() {
        let g = z(3);
        let dual = dual_group(&g).unwrap();
        let p = Partition::one_block(0, 4);
        let q = Partition::singletons(4, 0);
        let rho = vec![dual[1].clone(), dual[2].clone(), dual[0].clone(), dual[0].clone()];
        let fp = f_of(&p, &[], &rho, &g, 2).unwrap();
        let fq = f_of(&q, &vec![dual[0].clone(); 4], &[], &g, 2).unwrap();
        let probes = probes_for(6, 4);
        let mut cache = ProbeCache::new(&probes);
        let fingerprint = cache.composed((0, &fp), (0, &fq));
        let exact: Vec<u64> = probes.iter().map(|pr| pr.bilinear(&fp.compose(&fq).unwrap())).collect();
        assert_eq!(fingerprint, exact);
        let doubled: Vec<u64> = probes
            .iter()
            .map(|pr| pr.bilinear(&fp.compose(&fq).unwrap().scale(&CycInt::from_i64(2))))
            .collect();
        assert_ne!(fingerprint, doubled);
    }

    #[test]
    fn ranks() {
        let ops: Vec<_> = enumerate(Family::Nc, 0, 4).unwrap().iter().map(|p| t_of(p, 4)).collect();
        assert_eq!(span_rank_int(&ops).unwrap(), 14);
        let ops: Vec<_> = enumerate(Family::Nc, 0, 4).unwrap().iter().map(|p| t_of(p, 2)).collect();
        assert!(span_rank_int(&ops).unwrap() < 14);
        let g = z(2);
        let ops: Vec<_> = crate::categories::canonical_coloured(Family::Nc, &g, 0, 2)
            .unwrap()
            .iter()
            .map(|p| m_of(p, &g, 4))
            .collect();
        assert_eq!(span_rank_int(&ops).unwrap(), 3);
        assert!(span_rank_int(&[t_of(&Partition::cup(), 2), t_of(&Partition::identity(), 2)]).is_err());
    }
}
