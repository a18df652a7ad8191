//! Finite groups given either as products of cyclic groups or by a Cayley table,
//! and the characters of the abelian ones.

use std::fmt;
use std::path::Path;

use num_integer::Integer;

use crate::cyclo::{CycInt, Cyclo};
use crate::error::{Error, Result};
use crate::partitions::ColourSet;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Presentation {
    /// Z/n1 x ... x Z/nr; element index is mixed radix with the first factor most significant.
    Cyclic(Vec<usize>),
    Symmetric(usize),
    Table,
}

/// A finite group with elements `0..order`; the identity is always element 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    presentation: Presentation,
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    exponent: usize,
    names: Vec<String>,
}

impl FiniteGroup {
    /// The product Z/n1 x ... x Z/nr. An empty list gives the trivial group.
    pub fn abelian(orders: &[usize]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::InvalidGroup("cyclic factors must have order at least 1".into()));
        }
        let order: usize = orders.iter().product();
        if order > 4096 {
            return Err(Error::InvalidGroup(format!("order {order} is too large")));
        }
        let coords: Vec<Vec<usize>> = (0..order).map(|g| split_radix(g, orders)).collect();
        let mut table = vec![0; order * order];
        for a in 0..order {
            for b in 0..order {
                let sum: Vec<usize> = coords[a]
                    .iter()
                    .zip(&coords[b])
                    .zip(orders)
                    .map(|((x, y), n)| (x + y) % n)
                    .collect();
                table[a * order + b] = join_radix(&sum, orders);
            }
        }
        let names = coords
            .iter()
            .map(|c| {
                c.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(".")
            })
            .map(|s| if s.is_empty() { "e".to_string() } else { s })
            .collect();
        let exponent = orders.iter().fold(1, |acc, &n| acc.lcm(&n));
        let inverses = (0..order)
            .map(|g| {
                let neg: Vec<usize> = coords[g]
                    .iter()
                    .zip(orders)
                    .map(|(x, n)| (n - x) % n)
                    .collect();
                join_radix(&neg, orders)
            })
            .collect();
        Ok(FiniteGroup {
            presentation: Presentation::Cyclic(orders.to_vec()),
            order,
            table,
            inverses,
            exponent,
            names,
        })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        FiniteGroup::abelian(&[n])
    }

    pub fn trivial() -> Self {
        FiniteGroup::abelian(&[]).expect("trivial group")
    }

    /// A group from its multiplication table (`table[a][b]` = index of ab), identity 0.
    pub fn from_table(table: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if table.iter().any(|row| row.len() != order) {
            return Err(Error::InvalidGroup("table is not square".into()));
        }
        if table.iter().flatten().any(|&x| x >= order) {
            return Err(Error::InvalidGroup("table entry out of range".into()));
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let m = |a: usize, b: usize| flat[a * order + b];
        for a in 0..order {
            if m(0, a) != a || m(a, 0) != a {
                return Err(Error::InvalidGroup("element 0 is not a two-sided identity".into()));
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = m(a, b);
                for c in 0..order {
                    if m(ab, c) != m(a, m(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inverses = Vec::with_capacity(order);
        for a in 0..order {
            let inv = (0..order)
                .find(|&b| m(a, b) == 0 && m(b, a) == 0)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
            inverses.push(inv);
        }
        let names = match names {
            Some(n) if n.len() == order => n,
            Some(n) => {
                return Err(Error::LengthMismatch {
                    expected: order,
                    got: n.len(),
                })
            }
            None => (0..order).map(|g| g.to_string()).collect(),
        };
        let mut group = FiniteGroup {
            presentation: Presentation::Table,
            order,
            table: flat,
            inverses,
            exponent: 1,
            names,
        };
        group.exponent = (0..order).fold(1, |acc, g| acc.lcm(&group.element_order(g)));
        Ok(group)
    }

    /// Read a whitespace-separated table file, one row per line.
    pub fn from_table_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidGroup(format!("{}: {e}", path.display())))?;
        let table = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.split_whitespace()
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad table entry `{t}`")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteGroup::from_table(table, None)
    }

    /// The symmetric group on `n` letters; elements are permutations in
    /// lexicographic order, composed as functions (`(ab)(x) = a(b(x))`).
    pub fn symmetric(n: usize) -> Result<Self> {
        if n > 5 {
            return Err(Error::InvalidGroup(format!("S{n} is too large")));
        }
        let perms = permutations(n);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("closed");
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index(&b.iter().map(|&x| a[x]).collect()))
                    .collect()
            })
            .collect();
        let names = perms
            .iter()
            .map(|p| p.iter().map(|x| (x + 1).to_string()).collect::<String>())
            .collect();
        let mut group = FiniteGroup::from_table(table, Some(names))?;
        group.presentation = Presentation::Symmetric(n);
        Ok(group)
    }

    /// Parse `Z2`, `Z2xZ3`, `S3`, `trivial`.
    pub fn parse(spec: &str) -> Result<Self> {
        let s = spec.trim();
        if s.eq_ignore_ascii_case("trivial") || s == "1" {
            return Ok(FiniteGroup::trivial());
        }
        if let Some(n) = s.strip_prefix('S') {
            let n = n
                .parse()
                .map_err(|_| Error::Parse(format!("bad group `{spec}`")))?;
            return FiniteGroup::symmetric(n);
        }
        let orders = s
            .split(['x', '×', '*'])
            .map(|f| {
                f.trim()
                    .strip_prefix('Z')
                    .and_then(|n| n.parse::<usize>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad group `{spec}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteGroup::abelian(&orders)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Cyclic factor orders, when the group was given as a product of cyclic groups.
    pub fn cyclic_orders(&self) -> Option<&[usize]> {
        match &self.presentation {
            Presentation::Cyclic(o) => Some(o),
            Presentation::Table | Presentation::Symmetric(_) => None,
        }
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn coords(&self, g: usize) -> Result<Vec<usize>> {
        let orders = self.cyclic_orders().ok_or(Error::NonAbelian)?;
        Ok(split_radix(g, orders))
    }

    pub fn element_from_coords(&self, coords: &[usize]) -> Result<usize> {
        let orders = self.cyclic_orders().ok_or(Error::NonAbelian)?;
        if coords.len() != orders.len() || coords.iter().zip(orders).any(|(c, n)| c >= n) {
            return Err(Error::OutOfRange(format!("coordinates {coords:?}")));
        }
        Ok(join_radix(coords, orders))
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Resolve an element name; `e` always denotes the identity.
    pub fn element(&self, name: &str) -> Result<usize> {
        if name == "e" {
            return Ok(0);
        }
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Parse(format!("unknown group element `{name}`")))
    }

    pub fn product(&self, elements: &[usize]) -> usize {
        elements.iter().fold(0, |acc, &g| self.mul(acc, g))
    }

    /// Colours for `C^G`: every element self-conjugate.
    pub fn colour_set(&self) -> ColourSet {
        ColourSet::self_conjugate(self.names.clone())
    }

    /// Colours for `C[Γ]`: conjugation is the group inverse.
    pub fn inverse_colour_set(&self) -> ColourSet {
        ColourSet::new(self.names.clone(), self.inverses.clone()).expect("inverse is an involution")
    }

    pub fn is_subgroup(&self, subset: &[usize]) -> bool {
        subset.contains(&0)
            && subset
                .iter()
                .all(|&a| subset.iter().all(|&b| subset.contains(&self.mul(a, self.inv(b)))))
    }

    pub fn is_normal(&self, subgroup: &[usize]) -> bool {
        (0..self.order).all(|g| {
            subgroup
                .iter()
                .all(|&h| subgroup.contains(&self.mul(self.mul(g, h), self.inv(g))))
        })
    }

    /// Largest normal subgroup contained in `subgroup`: the intersection of its conjugates.
    pub fn normal_core(&self, subgroup: &[usize]) -> Vec<usize> {
        let mut core: Vec<usize> = subgroup
            .iter()
            .copied()
            .filter(|&h| {
                (0..self.order).all(|g| subgroup.contains(&self.mul(self.mul(self.inv(g), h), g)))
            })
            .collect();
        core.sort_unstable();
        core
    }

    /// Quotient by a normal subgroup; returns the quotient and the projection.
    pub fn quotient(&self, normal: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(normal) || !self.is_normal(normal) {
            return Err(Error::InvalidGroup("not a normal subgroup".into()));
        }
        let mut projection = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if projection[g] != usize::MAX {
                continue;
            }
            let class = reps.len();
            reps.push(g);
            for &h in normal {
                projection[self.mul(g, h)] = class;
            }
        }
        let table = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| projection[self.mul(a, b)]).collect())
            .collect();
        let names = reps.iter().map(|&g| format!("{}H", self.names[g])).collect();
        let q = FiniteGroup::from_table(table, Some(names))?;
        Ok((q, projection))
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.presentation {
            Presentation::Cyclic(o) if o.is_empty() => f.write_str("trivial"),
            Presentation::Cyclic(o) => {
                let parts: Vec<String> = o.iter().map(|n| format!("Z{n}")).collect();
                f.write_str(&parts.join("x"))
            }
            Presentation::Symmetric(n) => write!(f, "S{n}"),
            Presentation::Table => write!(f, "table group of order {}", self.order),
        }
    }
}

fn split_radix(mut g: usize, orders: &[usize]) -> Vec<usize> {
    let mut out = vec![0; orders.len()];
    for (slot, &n) in out.iter_mut().zip(orders).rev() {
        *slot = g % n;
        g /= n;
    }
    out
}

fn join_radix(coords: &[usize], orders: &[usize]) -> usize {
    coords.iter().zip(orders).fold(0, |acc, (c, n)| acc * n + c)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..n {
            let mut p: Vec<usize> = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// A character of a product of cyclic groups, `g ↦ ζ_m^{Σ a_j g_j m/n_j}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    exponents: Vec<usize>,
}

impl Character {
    pub fn new(group: &FiniteGroup, exponents: Vec<usize>) -> Result<Self> {
        let orders = group.cyclic_orders().ok_or(Error::NonAbelian)?;
        if exponents.len() != orders.len() || exponents.iter().zip(orders).any(|(a, n)| a >= n) {
            return Err(Error::OutOfRange(format!("character exponents {exponents:?}")));
        }
        Ok(Character { exponents })
    }

    pub fn trivial(group: &FiniteGroup) -> Result<Self> {
        let orders = group.cyclic_orders().ok_or(Error::NonAbelian)?;
        Ok(Character {
            exponents: vec![0; orders.len()],
        })
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    /// The power `k` with `χ(g) = ζ_m^k`, `m` the group exponent.
    pub fn power(&self, group: &FiniteGroup, g: usize) -> usize {
        let orders = group.cyclic_orders().expect("characters live on abelian groups");
        let m = group.exponent();
        split_radix(g, orders)
            .iter()
            .zip(&self.exponents)
            .zip(orders)
            .map(|((x, a), n)| x * a * (m / n))
            .sum::<usize>()
            % m
    }

    pub fn value(&self, group: &FiniteGroup, g: usize) -> Cyclo {
        Cyclo::zeta_pow(group.exponent(), self.power(group, g) as i64)
    }

    pub fn value_int(&self, group: &FiniteGroup, g: usize) -> CycInt {
        CycInt::zeta_pow(group.exponent(), self.power(group, g) as i64)
    }

    pub fn mul(&self, other: &Character, group: &FiniteGroup) -> Character {
        let orders = group.cyclic_orders().expect("abelian");
        Character {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .zip(orders)
                .map(|((a, b), n)| (a + b) % n)
                .collect(),
        }
    }

    pub fn conj(&self, group: &FiniteGroup) -> Character {
        let orders = group.cyclic_orders().expect("abelian");
        Character {
            exponents: self
                .exponents
                .iter()
                .zip(orders)
                .map(|(a, n)| (n - a) % n)
                .collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&a| a == 0)
    }

    pub fn is_self_conjugate(&self, group: &FiniteGroup) -> bool {
        self.conj(group) == *self
    }

    /// The group element with the same coordinates, identifying Ĝ with G.
    pub fn as_element(&self, group: &FiniteGroup) -> usize {
        group
            .element_from_coords(&self.exponents)
            .expect("exponents are valid coordinates")
    }

    pub fn from_element(group: &FiniteGroup, g: usize) -> Result<Self> {
        Ok(Character {
            exponents: group.coords(g)?,
        })
    }

    pub fn label(&self) -> String {
        if self.exponents.is_empty() {
            return "eps".into();
        }
        let parts: Vec<String> = self.exponents.iter().map(|a| a.to_string()).collect();
        format!("chi{}", parts.join("."))
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// All characters, trivial first, in lexicographic order of exponents.
pub fn dual_group(group: &FiniteGroup) -> Result<Vec<Character>> {
    group.cyclic_orders().ok_or(Error::NonAbelian)?;
    (0..group.order())
        .map(|g| Character::from_element(group, g))
        .collect()
}

/// `Σ_g χ(g) conj(ρ(g)) = |G| δ(χ, ρ)` for every pair, exactly.
pub fn orthogonality_check(group: &FiniteGroup) -> Result<bool> {
    let dual = dual_group(group)?;
    let order = Cyclo::from_i64(group.order() as i64);
    for chi in &dual {
        for rho in &dual {
            let mut sum = Cyclo::zero();
            for g in 0..group.order() {
                sum = &sum + &(&chi.value(group, g) * &rho.value(group, g).conj());
            }
            let expected = if chi == rho { order.clone() } else { Cyclo::zero() };
            if sum != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// (number of self-conjugate characters, number of conjugate pairs).
pub fn self_conjugate_split(group: &FiniteGroup) -> Result<(usize, usize)> {
    let dual = dual_group(group)?;
    let k = dual.iter().filter(|c| c.is_self_conjugate(group)).count();
    Ok((k, (dual.len() - k) / 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_products() {
        let g = FiniteGroup::parse("Z2xZ3").unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.exponent(), 6);
        assert_eq!(g.name(0), "0.0");
        assert_eq!(g.element("1.2").unwrap(), 5);
        assert_eq!(g.mul(5, 5), g.element("0.1").unwrap());
        assert!(g.is_commutative());
        for a in 0..6 {
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
        assert_eq!(FiniteGroup::trivial().order(), 1);
    }

    #[test]
    fn symmetric_group_table() {
        let s3 = FiniteGroup::parse("S3").unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_commutative());
        assert_eq!(s3.exponent(), 6);
        assert_eq!(s3.name(0), "123");
        assert!(matches!(dual_group(&s3), Err(Error::NonAbelian)));
    }

    #[test]
    fn table_validation() {
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteGroup::from_table(bad, None).is_err());
        let z2 = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(FiniteGroup::from_table(z2, None).unwrap().exponent(), 2);
    }

    #[test]
    fn characters() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let dual = dual_group(&z2).unwrap();
        assert!(dual[0].is_trivial());
        assert_eq!(dual[1].value(&z2, 1), Cyclo::from_i64(-1));
        let v = FiniteGroup::parse("Z2xZ2").unwrap();
        let dual = dual_group(&v).unwrap();
        assert_eq!(dual.len(), 4);
        assert!(dual.iter().all(|c| c.is_self_conjugate(&v)));
        for g in ["Z2", "Z3", "Z4", "Z2xZ3", "Z2xZ2", "Z5"] {
            assert!(orthogonality_check(&FiniteGroup::parse(g).unwrap()).unwrap());
        }
        let split = |s: &str| self_conjugate_split(&FiniteGroup::parse(s).unwrap()).unwrap();
        assert_eq!(split("Z2"), (2, 0));
        assert_eq!(split("Z3"), (1, 1));
        assert_eq!(split("Z4"), (2, 1));
    }

    #[test]
    fn characters_are_homomorphisms() {
        let g = FiniteGroup::parse("Z2xZ4").unwrap();
        for chi in dual_group(&g).unwrap() {
            assert_eq!(chi.value(&g, 0), Cyclo::one());
            for a in 0..g.order() {
                for b in 0..g.order() {
                    assert_eq!(
                        chi.value(&g, g.mul(a, b)),
                        &chi.value(&g, a) * &chi.value(&g, b)
                    );
                }
            }
        }
    }

    #[test]
    fn quotient_and_core() {
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let (q, proj) = z4.quotient(&[0, 2]).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(proj, vec![0, 1, 0, 1]);
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let transposition = s3.element("213").unwrap();
        assert_eq!(s3.normal_core(&[0, transposition]), vec![0]);
    }
}
