//! Categories of (coloured) partitions described by membership predicates
//! together with bounded enumerators.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{check_bound, Error, Result};
use crate::groups::FiniteGroup;
use crate::partitions::{
    enumerate_bounded, ColourSet, ColouredPartition, Corner, Family, Partition, DEFAULT_MAX_POINTS,
};

/// Largest point bound accepted by [`closure`].
pub const MAX_CLOSURE_POINTS: usize = 12;

/// Largest point bound accepted by [`is_block_stable`].
pub const MAX_BLOCK_STABILITY_POINTS: usize = 10;

/// Colour indices of the two-colour categories.
pub const WHITE: usize = 0;
pub const BLACK: usize = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CategorySpec {
    /// A named family over a single colour.
    Uncoloured(Family),
    /// All colourings of the family's partitions by elements of the group; every colour self-conjugate.
    GroupColoured(Family, FiniteGroup),
    /// Colourings by an abelian group with equal upper and lower colour products in every block.
    GammaColoured(Family, FiniteGroup),
    /// Non-crossing two-coloured partitions whose blocks have equal white-minus-black
    /// counts on both rows modulo `s`; `None` means the counts must agree exactly.
    TwoColourModS(Option<usize>),
    /// The category generated by finitely many partitions, truncated at a point bound.
    Generated(GeneratedCategory),
}

/// Members of a generated category up to its point bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedCategory {
    pub generators: Vec<ColouredPartition>,
    pub colours: ColourSet,
    pub max_points: usize,
    members: BTreeSet<ColouredPartition>,
}

impl GeneratedCategory {
    pub fn new(generators: Vec<ColouredPartition>, colours: ColourSet, max_points: usize) -> Result<Self> {
        let members = closure(&generators, &colours, max_points)?.into_iter().collect();
        Ok(GeneratedCategory {
            generators,
            colours,
            max_points,
            members,
        })
    }

    pub fn members(&self) -> impl Iterator<Item = &ColouredPartition> {
        self.members.iter()
    }
}

impl fmt::Display for CategorySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CategorySpec::Uncoloured(fam) => write!(f, "{fam}"),
            CategorySpec::GroupColoured(fam, g) => write!(f, "{fam}^{g}"),
            CategorySpec::GammaColoured(fam, g) => write!(f, "{fam}[{g}]"),
            CategorySpec::TwoColourModS(Some(s)) => write!(f, "NCwb_{s}"),
            CategorySpec::TwoColourModS(None) => write!(f, "NCwb_inf"),
            CategorySpec::Generated(g) => write!(
                f,
                "generated by {} partitions (truncated at {} points)",
                g.generators.len(),
                g.max_points
            ),
        }
    }
}

impl CategorySpec {
    pub fn colour_set(&self) -> ColourSet {
        match self {
            CategorySpec::Uncoloured(_) => ColourSet::trivial(),
            CategorySpec::GroupColoured(_, g) => g.colour_set(),
            CategorySpec::GammaColoured(_, g) => g.inverse_colour_set(),
            CategorySpec::TwoColourModS(_) => two_colours(),
            CategorySpec::Generated(g) => g.colours.clone(),
        }
    }

    /// The uncoloured family that every member's base partition belongs to, if any.
    pub fn base_family(&self) -> Option<Family> {
        match self {
            CategorySpec::Uncoloured(f)
            | CategorySpec::GroupColoured(f, _)
            | CategorySpec::GammaColoured(f, _) => Some(*f),
            CategorySpec::TwoColourModS(_) => Some(Family::Nc),
            CategorySpec::Generated(_) => None,
        }
    }

    /// Point bound beyond which membership is unknown (generated categories only).
    pub fn point_limit(&self) -> Option<usize> {
        match self {
            CategorySpec::Generated(g) => Some(g.max_points),
            _ => None,
        }
    }

    pub fn contains(&self, p: &ColouredPartition) -> Result<bool> {
        let colours = self.colour_set();
        p.check_colours(&colours)?;
        Ok(match self {
            CategorySpec::Uncoloured(fam) | CategorySpec::GroupColoured(fam, _) => fam.contains(&p.base),
            CategorySpec::GammaColoured(fam, g) => fam.contains(&p.base) && gamma_balanced(p, g),
            CategorySpec::TwoColourModS(s) => p.base.is_noncrossing() && two_colour_balanced(p, *s),
            CategorySpec::Generated(gen) => gen.members.contains(p),
        })
    }
}

impl FromStr for CategorySpec {
    type Err = Error;

    /// `NC`, `NC^Z2` (all group colourings), `NC[Z3]` (balanced colourings),
    /// `NCwb_2` or `NCwb_inf` (two colours, block counts modulo `s`).
    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some(s) = t.strip_prefix("NCwb_") {
            return match s {
                "inf" => Ok(CategorySpec::TwoColourModS(None)),
                _ => match s.parse::<usize>() {
                    Ok(s) if s > 0 => Ok(CategorySpec::TwoColourModS(Some(s))),
                    _ => Err(Error::Parse(format!("bad modulus in `{text}`"))),
                },
            };
        }
        if let Some((family, group)) = t.split_once('^') {
            return Ok(CategorySpec::GroupColoured(family.parse()?, FiniteGroup::parse(group)?));
        }
        if let Some((family, rest)) = t.split_once('[') {
            let group = rest
                .strip_suffix(']')
                .ok_or_else(|| Error::Parse(format!("unclosed bracket in `{text}`")))?;
            let group = FiniteGroup::parse(group)?;
            if !group.is_commutative() {
                return Err(Error::NonAbelian);
            }
            return Ok(CategorySpec::GammaColoured(family.parse()?, group));
        }
        Ok(CategorySpec::Uncoloured(t.parse()?))
    }
}

/// White and black, conjugate to each other.
pub fn two_colours() -> ColourSet {
    ColourSet::new(vec!["w".into(), "b".into()], vec![BLACK, WHITE]).expect("swap is an involution")
}

fn gamma_balanced(p: &ColouredPartition, group: &FiniteGroup) -> bool {
    let nb = p.base.num_blocks();
    let mut upper = vec![group.identity(); nb];
    let mut lower = vec![group.identity(); nb];
    let k = p.base.upper();
    for (pt, (&b, &c)) in p.base.labels().iter().zip(p.colours()).enumerate() {
        let acc = if pt < k { &mut upper[b] } else { &mut lower[b] };
        *acc = group.mul(*acc, c);
    }
    upper == lower
}

fn two_colour_balanced(p: &ColouredPartition, s: Option<usize>) -> bool {
    let nb = p.base.num_blocks();
    let mut diff = vec![0i64; nb];
    let k = p.base.upper();
    for (pt, (&b, &c)) in p.base.labels().iter().zip(p.colours()).enumerate() {
        let sign = if c == WHITE { 1 } else { -1 };
        // upper minus lower
        diff[b] += if pt < k { sign } else { -sign };
    }
    diff.iter().all(|&d| match s {
        None => d == 0,
        Some(s) => d.rem_euclid(s as i64) == 0,
    })
}

/// Members with prescribed upper and lower colour words.
pub fn enumerate_category(
    spec: &CategorySpec,
    upper_word: &[usize],
    lower_word: &[usize],
) -> Result<Vec<ColouredPartition>> {
    enumerate_category_bounded(spec, upper_word, lower_word, DEFAULT_MAX_POINTS)
}

pub fn enumerate_category_bounded(
    spec: &CategorySpec,
    upper_word: &[usize],
    lower_word: &[usize],
    max_points: usize,
) -> Result<Vec<ColouredPartition>> {
    let (k, l) = (upper_word.len(), lower_word.len());
    check_bound("points", k + l, max_points)?;
    let colours = spec.colour_set();
    if let Some(&c) = upper_word.iter().chain(lower_word).find(|&&c| c >= colours.len()) {
        return Err(Error::ColourMismatch(format!("colour index {c} out of range")));
    }
    if let CategorySpec::Generated(g) = spec {
        check_bound("points", k + l, g.max_points)?;
        return Ok(g
            .members
            .iter()
            .filter(|p| p.upper_colours() == upper_word && p.lower_colours() == lower_word)
            .cloned()
            .collect());
    }
    let family = spec.base_family().expect("named base family");
    let mut out = Vec::new();
    for base in enumerate_bounded(family, k, l, max_points)? {
        let p = ColouredPartition::with_rows(base, upper_word, lower_word)?;
        if spec.contains(&p)? {
            out.push(p);
        }
    }
    Ok(out)
}

/// Every word of length `n` over `alphabet` colours, lexicographically.
pub fn words(alphabet: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(n)];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..alphabet).map(move |c| {
                    let mut w2 = w.clone();
                    w2.push(c);
                    w2
                })
            })
            .collect();
    }
    out
}

/// All members in `P(k,l)` with any boundary colouring.
pub fn enumerate_members(spec: &CategorySpec, k: usize, l: usize) -> Result<Vec<ColouredPartition>> {
    let alphabet = spec.colour_set().len();
    check_bound("points", k + l, DEFAULT_MAX_POINTS)?;
    let mut out = Vec::new();
    for up in words(alphabet, k) {
        for down in words(alphabet, l) {
            out.extend(enumerate_category(spec, &up, &down)?);
        }
    }
    out.sort();
    Ok(out)
}

/// Group colourings of `family(k,l)` whose leftmost point in every block has colour `e`:
/// one representative per block-action orbit.
pub fn canonical_coloured(family: Family, group: &FiniteGroup, k: usize, l: usize) -> Result<Vec<ColouredPartition>> {
    let mut out = Vec::new();
    for base in enumerate_bounded(family, k, l, DEFAULT_MAX_POINTS)? {
        let n = base.points();
        let mut leading = vec![false; n];
        let mut seen = vec![false; base.num_blocks()];
        for (pt, &b) in base.labels().iter().enumerate() {
            if !seen[b] {
                seen[b] = true;
                leading[pt] = true;
            }
        }
        let free: Vec<usize> = (0..n).filter(|&pt| !leading[pt]).collect();
        for w in words(group.order(), free.len()) {
            let mut colours = vec![group.identity(); n];
            for (&pt, &c) in free.iter().zip(&w) {
                colours[pt] = c;
            }
            out.push(ColouredPartition::new(base.clone(), colours)?);
        }
    }
    Ok(out)
}

/// The least set containing the generators and the coloured identities that is
/// stable under the category operations, restricted to at most `max_points` points.
pub fn closure(
    generators: &[ColouredPartition],
    colours: &ColourSet,
    max_points: usize,
) -> Result<Vec<ColouredPartition>> {
    check_bound("points", max_points, MAX_CLOSURE_POINTS)?;
    let mut members: BTreeSet<ColouredPartition> = BTreeSet::new();
    let mut frontier: Vec<ColouredPartition> = Vec::new();
    let push = |p: ColouredPartition, members: &mut BTreeSet<_>, frontier: &mut Vec<_>| {
        if p.base.points() <= max_points && members.insert(p.clone()) {
            frontier.push(p);
        }
    };
    for c in 0..colours.len() {
        let id = ColouredPartition::with_rows(Partition::identity(), &[c], &[c])?;
        push(id, &mut members, &mut frontier);
    }
    for g in generators {
        g.check_colours(colours)?;
        push(g.clone(), &mut members, &mut frontier);
    }
    while !frontier.is_empty() {
        let batch = std::mem::take(&mut frontier);
        let snapshot: Vec<ColouredPartition> = members.iter().cloned().collect();
        let mut found = Vec::new();
        for p in &batch {
            found.push(p.involution());
            for corner in Corner::ALL {
                if let Ok(r) = p.rotate(corner, colours) {
                    found.push(r);
                }
            }
            for q in &snapshot {
                if p.base.points() + q.base.points() <= max_points {
                    found.push(p.tensor(q));
                    found.push(q.tensor(p));
                }
                if p.upper_colours() == q.lower_colours() {
                    found.push(p.compose(q)?.0);
                }
                if q.upper_colours() == p.lower_colours() {
                    found.push(q.compose(p)?.0);
                }
            }
        }
        for r in found {
            push(r, &mut members, &mut frontier);
        }
    }
    Ok(members.into_iter().collect())
}

/// The category generated together with the crossing.
pub fn abelianize(spec: &CategorySpec) -> Result<CategorySpec> {
    match spec {
        CategorySpec::Uncoloured(f) => Ok(CategorySpec::Uncoloured(f.with_crossing())),
        CategorySpec::GroupColoured(f, g) => Ok(CategorySpec::GroupColoured(f.with_crossing(), g.clone())),
        _ => Err(Error::Unsupported(
            "abelianization is defined for uncoloured and group-coloured named families".into(),
        )),
    }
}

/// The one-block partition carrying the points and colours of block `b` of `p`.
pub fn block_partition(p: &ColouredPartition, b: usize) -> ColouredPartition {
    let k = p.base.upper();
    let mut up = Vec::new();
    let mut down = Vec::new();
    for (pt, (&lab, &c)) in p.base.labels().iter().zip(p.colours()).enumerate() {
        if lab == b {
            if pt < k {
                up.push(c);
            } else {
                down.push(c);
            }
        }
    }
    ColouredPartition::with_rows(Partition::one_block(up.len(), down.len()), &up, &down)
        .expect("row lengths match")
}

/// Whether every block of every member (within the bound) is itself a member.
pub fn is_block_stable(spec: &CategorySpec, max_points: usize) -> Result<bool> {
    check_bound("points", max_points, MAX_BLOCK_STABILITY_POINTS)?;
    let limit = spec.point_limit().map_or(max_points, |m| m.min(max_points));
    for n in 0..=limit {
        for k in 0..=n {
            for p in enumerate_members(spec, k, n - k)? {
                for b in 0..p.base.num_blocks() {
                    if !spec.contains(&block_partition(&p, b))? {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}
