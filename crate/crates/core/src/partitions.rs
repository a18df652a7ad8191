//! Partition diagrams on `k` upper and `l` lower points.
//!
//! Points are indexed `0..k` for the upper row (left to right) followed by
//! `k..k+l` for the lower row (left to right). A partition stores one block
//! label per point; labels are always canonical, i.e. numbered `0..b` by
//! first occurrence in that point order, so structural equality is plain
//! field equality.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{check_bound, Error, Result};
use crate::groups::FiniteGroup;

/// Default limit on `k + l` for exhaustive enumeration.
pub const DEFAULT_MAX_POINTS: usize = 12;

/// Named partition families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// All partitions.
    All,
    /// Non-crossing partitions.
    Nc,
    /// Non-crossing pairings.
    Nc2,
    /// Non-crossing partitions with blocks of even size.
    NcEv,
    /// All pairings.
    Pair,
    /// All partitions with blocks of even size.
    Even,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::All,
        Family::Nc,
        Family::Nc2,
        Family::NcEv,
        Family::Pair,
        Family::Even,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::All => "ALL",
            Family::Nc => "NC",
            Family::Nc2 => "NC2",
            Family::NcEv => "NCEV",
            Family::Pair => "PAIR",
            Family::Even => "EVEN",
        }
    }

    pub fn requires_noncrossing(self) -> bool {
        matches!(self, Family::Nc | Family::Nc2 | Family::NcEv)
    }

    fn max_block(self) -> Option<usize> {
        match self {
            Family::Nc2 | Family::Pair => Some(2),
            _ => None,
        }
    }

    /// Membership of an uncoloured partition.
    pub fn contains(self, p: &Partition) -> bool {
        if self.requires_noncrossing() && !p.is_noncrossing() {
            return false;
        }
        let sizes = p.block_sizes();
        match self {
            Family::All | Family::Nc => true,
            Family::Nc2 | Family::Pair => sizes.iter().all(|&s| s == 2),
            Family::NcEv | Family::Even => sizes.iter().all(|&s| s % 2 == 0),
        }
    }

    /// The family generated together with the crossing.
    pub fn with_crossing(self) -> Family {
        match self {
            Family::Nc | Family::All => Family::All,
            Family::Nc2 | Family::Pair => Family::Pair,
            Family::NcEv | Family::Even => Family::Even,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().replace(['_', '-'], "").as_str() {
            "ALL" | "P" => Ok(Family::All),
            "NC" => Ok(Family::Nc),
            "NC2" => Ok(Family::Nc2),
            "NCEV" => Ok(Family::NcEv),
            "PAIR" | "P2" => Ok(Family::Pair),
            "EVEN" | "PEV" => Ok(Family::Even),
            _ => Err(Error::Parse(format!("unknown partition family `{s}`"))),
        }
    }
}

/// A point of a diagram, 0-based within its row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Upper(usize),
    Lower(usize),
}

/// Disjoint-set forest with path halving and union by size.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

/// Renumber arbitrary labels by order of first occurrence.
fn canonical_labels<T: Eq + std::hash::Hash + Copy>(raw: &[T]) -> Vec<usize> {
    let mut seen: HashMap<T, usize> = HashMap::new();
    raw.iter()
        .map(|x| {
            let next = seen.len();
            *seen.entry(*x).or_insert(next)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    upper: usize,
    lower: usize,
    labels: Vec<usize>,
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.points(), self.upper, &self.labels).cmp(&(other.points(), other.upper, &other.labels))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Partition {
    /// Build from arbitrary block labels (one per point), canonicalizing them.
    pub fn new(upper: usize, lower: usize, labels: &[usize]) -> Result<Self> {
        if labels.len() != upper + lower {
            return Err(Error::LengthMismatch {
                expected: upper + lower,
                got: labels.len(),
            });
        }
        Ok(Partition {
            upper,
            lower,
            labels: canonical_labels(labels),
        })
    }

    fn from_canonical(upper: usize, lower: usize, labels: Vec<usize>) -> Self {
        debug_assert_eq!(labels, canonical_labels(&labels));
        Partition {
            upper,
            lower,
            labels,
        }
    }

    pub fn from_blocks(upper: usize, lower: usize, blocks: &[Vec<Point>]) -> Result<Self> {
        let mut raw = vec![usize::MAX; upper + lower];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Parse("empty block".into()));
            }
            for &pt in block {
                let idx = match pt {
                    Point::Upper(i) if i < upper => i,
                    Point::Lower(i) if i < lower => upper + i,
                    _ => return Err(Error::OutOfRange(format!("{pt:?} in P({upper},{lower})"))),
                };
                if raw[idx] != usize::MAX {
                    return Err(Error::Parse(format!("{pt:?} appears twice")));
                }
                raw[idx] = b;
            }
        }
        if raw.contains(&usize::MAX) {
            return Err(Error::Parse("some point belongs to no block".into()));
        }
        Partition::new(upper, lower, &raw)
    }

    pub fn empty() -> Self {
        Partition::from_canonical(0, 0, Vec::new())
    }

    /// The identity string `|` in P(1,1).
    pub fn identity() -> Self {
        Partition::from_canonical(1, 1, vec![0, 0])
    }

    /// `{{l1,l2}}` in P(0,2).
    pub fn cup() -> Self {
        Partition::from_canonical(0, 2, vec![0, 0])
    }

    /// `{{u1,u2}}` in P(2,0).
    pub fn cap() -> Self {
        Partition::from_canonical(2, 0, vec![0, 0])
    }

    /// `{{u1,l2},{u2,l1}}` in P(2,2).
    pub fn crossing() -> Self {
        Partition::from_canonical(2, 2, vec![0, 1, 1, 0])
    }

    pub fn singletons(upper: usize, lower: usize) -> Self {
        Partition::from_canonical(upper, lower, (0..upper + lower).collect())
    }

    pub fn one_block(upper: usize, lower: usize) -> Self {
        Partition::from_canonical(upper, lower, vec![0; upper + lower])
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn points(&self) -> usize {
        self.upper + self.lower
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn upper_labels(&self) -> &[usize] {
        &self.labels[..self.upper]
    }

    pub fn lower_labels(&self) -> &[usize] {
        &self.labels[self.upper..]
    }

    /// b(p)
    pub fn num_blocks(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    /// t(p): blocks meeting both rows.
    pub fn through_blocks(&self) -> usize {
        let b = self.num_blocks();
        let mut up = vec![false; b];
        let mut down = vec![false; b];
        for &x in self.upper_labels() {
            up[x] = true;
        }
        for &x in self.lower_labels() {
            down[x] = true;
        }
        up.iter().zip(&down).filter(|(u, d)| **u && **d).count()
    }

    /// Point indices of each block, blocks in canonical order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (pt, &b) in self.labels.iter().enumerate() {
            out[b].push(pt);
        }
        out
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.num_blocks()];
        for &b in &self.labels {
            out[b] += 1;
        }
        out
    }

    pub fn point(&self, idx: usize) -> Point {
        if idx < self.upper {
            Point::Upper(idx)
        } else {
            Point::Lower(idx - self.upper)
        }
    }

    /// Horizontal concatenation `self ⊗ other`.
    pub fn tensor(&self, other: &Partition) -> Partition {
        let off = self.num_blocks();
        let mut raw = Vec::with_capacity(self.points() + other.points());
        raw.extend_from_slice(self.upper_labels());
        raw.extend(other.upper_labels().iter().map(|x| x + off));
        raw.extend_from_slice(self.lower_labels());
        raw.extend(other.lower_labels().iter().map(|x| x + off));
        Partition::new(self.upper + other.upper, self.lower + other.lower, &raw)
            .expect("lengths agree by construction")
    }

    /// Vertical concatenation: `self.compose(q)` is `pq`, i.e. `q` stacked
    /// on top of `self`. Returns the composite and the number of removed loops.
    pub fn compose(&self, q: &Partition) -> Result<(Partition, usize)> {
        if q.lower != self.upper {
            return Err(Error::SizeMismatch(format!(
                "cannot compose P({},{}) after P({},{})",
                self.upper, self.lower, q.upper, q.lower
            )));
        }
        let (k, l, m) = (q.upper, q.lower, self.lower);
        // nodes: q upper 0..k, middle k..k+l, p lower k+l..k+l+m
        let mut uf = UnionFind::new(k + l + m);
        let mut first_q = vec![usize::MAX; q.num_blocks()];
        for (pt, &b) in q.labels.iter().enumerate() {
            if first_q[b] == usize::MAX {
                first_q[b] = pt;
            } else {
                uf.union(first_q[b], pt);
            }
        }
        let mut first_p = vec![usize::MAX; self.num_blocks()];
        for (pt, &b) in self.labels.iter().enumerate() {
            let node = k + pt;
            if first_p[b] == usize::MAX {
                first_p[b] = node;
            } else {
                uf.union(first_p[b], node);
            }
        }
        let outer: Vec<usize> = (0..k).chain(k + l..k + l + m).collect();
        let roots: Vec<usize> = outer.iter().map(|&n| uf.find(n)).collect();
        let mut outer_roots: Vec<usize> = roots.clone();
        outer_roots.sort_unstable();
        outer_roots.dedup();
        let mut middle_roots: Vec<usize> = (k..k + l).map(|n| uf.find(n)).collect();
        middle_roots.sort_unstable();
        middle_roots.dedup();
        let loops = middle_roots
            .iter()
            .filter(|r| outer_roots.binary_search(r).is_err())
            .count();
        Ok((Partition::new(k, m, &roots)?, loops))
    }

    /// Upside-down flip.
    pub fn involution(&self) -> Partition {
        let mut raw = Vec::with_capacity(self.points());
        raw.extend_from_slice(self.lower_labels());
        raw.extend_from_slice(self.upper_labels());
        Partition::new(self.lower, self.upper, &raw).expect("lengths agree")
    }

    /// Block labels read around the diagram: u1..uk then ll..l1.
    fn cyclic_labels(&self) -> Vec<usize> {
        self.upper_labels()
            .iter()
            .chain(self.lower_labels().iter().rev())
            .copied()
            .collect()
    }

    /// Planarity: no interleaving quadruple in the cyclic reading.
    pub fn is_noncrossing(&self) -> bool {
        sequence_is_noncrossing(&self.cyclic_labels())
    }

    /// Rotate one boundary point to the other row (uncoloured).
    pub fn rotate(&self, corner: Corner) -> Result<Partition> {
        let single = ColourSet::trivial();
        Ok(ColouredPartition::uncoloured(self.clone())
            .rotate(corner, &single)?
            .base)
    }
}

/// Crossing test on a cyclic label sequence.
pub(crate) fn sequence_is_noncrossing(seq: &[usize]) -> bool {
    let n = seq.len();
    let nb = seq.iter().max().map_or(0, |m| m + 1);
    let mut first = vec![usize::MAX; nb];
    let mut last = vec![0; nb];
    for (i, &b) in seq.iter().enumerate() {
        if first[b] == usize::MAX {
            first[b] = i;
        }
        last[b] = i;
    }
    let mut prev = vec![usize::MAX; nb];
    for c in 0..n {
        let b = seq[c];
        let a = prev[b];
        prev[b] = c;
        if a == usize::MAX {
            continue;
        }
        // every block met strictly between consecutive points of b must lie inside (a, c)
        for &y in &seq[a + 1..c] {
            if y != b && (first[y] < a || last[y] > c) {
                return false;
            }
        }
    }
    true
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_text(f, self, None)
    }
}

fn write_text(
    f: &mut fmt::Formatter<'_>,
    p: &Partition,
    colours: Option<(&[usize], &ColourSet)>,
) -> fmt::Result {
    write!(f, "P({},{})", p.upper, p.lower)?;
    for (bi, block) in p.blocks().iter().enumerate() {
        f.write_str(if bi == 0 { " {" } else { "{" })?;
        for (j, &pt) in block.iter().enumerate() {
            if j > 0 {
                f.write_str(" ")?;
            }
            match p.point(pt) {
                Point::Upper(i) => write!(f, "u{}", i + 1)?,
                Point::Lower(i) => write!(f, "l{}", i + 1)?,
            }
            if let Some((cols, set)) = colours {
                write!(f, "@{}", set.name(cols[pt]))?;
            }
        }
        f.write_str("}")?;
    }
    Ok(())
}

/// Parse `P(k,l) {u1 l1}{u2@x l2@y}`; colour names are returned unresolved.
fn parse_text(s: &str) -> Result<(Partition, Vec<Option<String>>)> {
    let s = s.trim();
    let rest = s
        .strip_prefix("P(")
        .ok_or_else(|| Error::Parse(format!("expected `P(k,l)` in `{s}`")))?;
    let close = rest
        .find(')')
        .ok_or_else(|| Error::Parse("missing `)`".into()))?;
    let dims: Vec<&str> = rest[..close].split(',').map(str::trim).collect();
    if dims.len() != 2 {
        return Err(Error::Parse(format!("bad dimensions `{}`", &rest[..close])));
    }
    let parse_num = |t: &str| {
        t.parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad number `{t}`")))
    };
    let (upper, lower) = (parse_num(dims[0])?, parse_num(dims[1])?);
    let mut body = rest[close + 1..].trim();
    let mut blocks = Vec::new();
    let mut colour_names: Vec<Option<String>> = vec![None; upper + lower];
    while !body.is_empty() {
        let inner_end = body
            .find('}')
            .ok_or_else(|| Error::Parse("unterminated block".into()))?;
        let inner = body
            .strip_prefix('{')
            .ok_or_else(|| Error::Parse(format!("expected `{{` at `{body}`")))?;
        let inner = &inner[..inner_end - 1];
        let mut block = Vec::new();
        for tok in inner.split_whitespace() {
            let (pt, colour) = match tok.split_once('@') {
                Some((a, b)) => (a, Some(b.to_string())),
                None => (tok, None),
            };
            let point = if let Some(i) = pt.strip_prefix('u') {
                Point::Upper(parse_num(i)?.checked_sub(1).ok_or_else(|| {
                    Error::Parse("points are numbered from 1".into())
                })?)
            } else if let Some(i) = pt.strip_prefix('l') {
                Point::Lower(parse_num(i)?.checked_sub(1).ok_or_else(|| {
                    Error::Parse("points are numbered from 1".into())
                })?)
            } else {
                return Err(Error::Parse(format!("bad point `{pt}`")));
            };
            let idx = match point {
                Point::Upper(i) => i,
                Point::Lower(i) => upper + i,
            };
            if idx < colour_names.len() {
                colour_names[idx] = colour;
            }
            block.push(point);
        }
        blocks.push(block);
        body = body[inner_end + 1..].trim_start();
    }
    Ok((Partition::from_blocks(upper, lower, &blocks)?, colour_names))
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, colours) = parse_text(s)?;
        if colours.iter().any(Option::is_some) {
            return Err(Error::Parse(
                "coloured text needs a colour set; use ColouredPartition::parse".into(),
            ));
        }
        Ok(p)
    }
}

/// Which boundary point a rotation moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Corner {
    UpperLeft,
    UpperRight,
    LowerLeft,
    LowerRight,
}

impl Corner {
    pub const ALL: [Corner; 4] = [
        Corner::UpperLeft,
        Corner::UpperRight,
        Corner::LowerLeft,
        Corner::LowerRight,
    ];
}

/// A finite colour set with a self-inverse conjugation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColourSet {
    names: Vec<String>,
    involution: Vec<usize>,
}

impl ColourSet {
    pub fn new(names: Vec<String>, involution: Vec<usize>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::ColourMismatch("colour set must be nonempty".into()));
        }
        if involution.len() != names.len() {
            return Err(Error::LengthMismatch {
                expected: names.len(),
                got: involution.len(),
            });
        }
        for (x, &y) in involution.iter().enumerate() {
            if y >= names.len() || involution[y] != x {
                return Err(Error::ColourMismatch(format!(
                    "conjugation is not an involution at `{}`",
                    names[x]
                )));
            }
        }
        Ok(ColourSet { names, involution })
    }

    /// Every colour self-conjugate.
    pub fn self_conjugate(names: Vec<String>) -> Self {
        let involution = (0..names.len()).collect();
        ColourSet { names, involution }
    }

    /// The one-element colour set used for uncoloured diagrams.
    pub fn trivial() -> Self {
        ColourSet::self_conjugate(vec!["x".to_string()])
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, c: usize) -> &str {
        &self.names[c]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn conj(&self, c: usize) -> usize {
        self.involution[c]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// A partition with one colour index per point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColouredPartition {
    pub base: Partition,
    colours: Vec<usize>,
}

impl Ord for ColouredPartition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.base
            .cmp(&other.base)
            .then_with(|| self.colours.cmp(&other.colours))
    }
}

impl PartialOrd for ColouredPartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl ColouredPartition {
    pub fn new(base: Partition, colours: Vec<usize>) -> Result<Self> {
        if colours.len() != base.points() {
            return Err(Error::LengthMismatch {
                expected: base.points(),
                got: colours.len(),
            });
        }
        Ok(ColouredPartition { base, colours })
    }

    /// Colour the upper row with `upper` and the lower row with `lower`.
    pub fn with_rows(base: Partition, upper: &[usize], lower: &[usize]) -> Result<Self> {
        if upper.len() != base.upper() || lower.len() != base.lower() {
            return Err(Error::SizeMismatch(format!(
                "row colourings of lengths ({}, {}) for P({},{})",
                upper.len(),
                lower.len(),
                base.upper(),
                base.lower()
            )));
        }
        let colours = upper.iter().chain(lower).copied().collect();
        Ok(ColouredPartition { base, colours })
    }

    pub fn uncoloured(base: Partition) -> Self {
        let colours = vec![0; base.points()];
        ColouredPartition { base, colours }
    }

    pub fn colours(&self) -> &[usize] {
        &self.colours
    }

    /// c_u(p)
    pub fn upper_colours(&self) -> &[usize] {
        &self.colours[..self.base.upper()]
    }

    /// c_d(p)
    pub fn lower_colours(&self) -> &[usize] {
        &self.colours[self.base.upper()..]
    }

    pub fn check_colours(&self, set: &ColourSet) -> Result<()> {
        match self.colours.iter().find(|&&c| c >= set.len()) {
            Some(c) => Err(Error::ColourMismatch(format!(
                "colour index {c} outside a set of {} colours",
                set.len()
            ))),
            None => Ok(()),
        }
    }

    pub fn tensor(&self, other: &ColouredPartition) -> ColouredPartition {
        let base = self.base.tensor(&other.base);
        let colours = self
            .upper_colours()
            .iter()
            .chain(other.upper_colours())
            .chain(self.lower_colours())
            .chain(other.lower_colours())
            .copied()
            .collect();
        ColouredPartition { base, colours }
    }

    /// `self.compose(q)` = `pq`; the upper word of `self` must equal the lower word of `q`.
    pub fn compose(&self, q: &ColouredPartition) -> Result<(ColouredPartition, usize)> {
        if self.upper_colours() != q.lower_colours() {
            return Err(Error::ColourMismatch(
                "inner colour words differ".to_string(),
            ));
        }
        let (base, loops) = self.base.compose(&q.base)?;
        let colours = q
            .upper_colours()
            .iter()
            .chain(self.lower_colours())
            .copied()
            .collect();
        Ok((ColouredPartition { base, colours }, loops))
    }

    pub fn involution(&self) -> ColouredPartition {
        let colours = self
            .lower_colours()
            .iter()
            .chain(self.upper_colours())
            .copied()
            .collect();
        ColouredPartition {
            base: self.base.involution(),
            colours,
        }
    }

    /// Move a corner point to the other row, conjugating its colour.
    pub fn rotate(&self, corner: Corner, set: &ColourSet) -> Result<ColouredPartition> {
        let (k, l) = (self.base.upper(), self.base.lower());
        let up_lab = self.base.upper_labels();
        let lo_lab = self.base.lower_labels();
        let up_col = self.upper_colours();
        let lo_col = self.lower_colours();
        // (labels, colours) of each new row
        let (nu, nl): (Vec<(usize, usize)>, Vec<(usize, usize)>) = match corner {
            Corner::UpperLeft => {
                if k == 0 {
                    return Err(Error::EmptyRow("upper"));
                }
                let moved = (up_lab[0], set.conj(up_col[0]));
                let nu = zip(&up_lab[1..], &up_col[1..]);
                let mut nl = vec![moved];
                nl.extend(zip(lo_lab, lo_col));
                (nu, nl)
            }
            Corner::UpperRight => {
                if k == 0 {
                    return Err(Error::EmptyRow("upper"));
                }
                let moved = (up_lab[k - 1], set.conj(up_col[k - 1]));
                let nu = zip(&up_lab[..k - 1], &up_col[..k - 1]);
                let mut nl = zip(lo_lab, lo_col);
                nl.push(moved);
                (nu, nl)
            }
            Corner::LowerLeft => {
                if l == 0 {
                    return Err(Error::EmptyRow("lower"));
                }
                let moved = (lo_lab[0], set.conj(lo_col[0]));
                let mut nu = vec![moved];
                nu.extend(zip(up_lab, up_col));
                (nu, zip(&lo_lab[1..], &lo_col[1..]))
            }
            Corner::LowerRight => {
                if l == 0 {
                    return Err(Error::EmptyRow("lower"));
                }
                let moved = (lo_lab[l - 1], set.conj(lo_col[l - 1]));
                let mut nu = zip(up_lab, up_col);
                nu.push(moved);
                (nu, zip(&lo_lab[..l - 1], &lo_col[..l - 1]))
            }
        };
        let labels: Vec<usize> = nu.iter().chain(&nl).map(|x| x.0).collect();
        let colours = nu.iter().chain(&nl).map(|x| x.1).collect();
        Ok(ColouredPartition {
            base: Partition::new(nu.len(), nl.len(), &labels)?,
            colours,
        })
    }

    /// Left-multiply the colours of block `i` by `x[i]`.
    pub fn act_blocks(&self, x: &[usize], group: &FiniteGroup) -> Result<ColouredPartition> {
        if x.len() != self.base.num_blocks() {
            return Err(Error::LengthMismatch {
                expected: self.base.num_blocks(),
                got: x.len(),
            });
        }
        let colours = self
            .base
            .labels()
            .iter()
            .zip(&self.colours)
            .map(|(&b, &c)| group.mul(x[b], c))
            .collect();
        Ok(ColouredPartition {
            base: self.base.clone(),
            colours,
        })
    }

    /// Left-multiply every colour by `g`.
    pub fn act_global(&self, g: usize, group: &FiniteGroup) -> ColouredPartition {
        let colours = self.colours.iter().map(|&c| group.mul(g, c)).collect();
        ColouredPartition {
            base: self.base.clone(),
            colours,
        }
    }

    /// Representative of the block-action orbit whose first colour in every block is `e`.
    pub fn canonical_e_form(&self, group: &FiniteGroup) -> ColouredPartition {
        let mut lead = vec![usize::MAX; self.base.num_blocks()];
        for (&b, &c) in self.base.labels().iter().zip(&self.colours) {
            if lead[b] == usize::MAX {
                lead[b] = group.inv(c);
            }
        }
        self.act_blocks(&lead, group).expect("one entry per block")
    }

    pub fn is_canonical_e_form(&self, group: &FiniteGroup) -> bool {
        let mut seen = vec![false; self.base.num_blocks()];
        for (&b, &c) in self.base.labels().iter().zip(&self.colours) {
            if !seen[b] {
                seen[b] = true;
                if c != group.identity() {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_text(&self, set: &ColourSet) -> String {
        struct Show<'a>(&'a ColouredPartition, &'a ColourSet);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write_text(f, &self.0.base, Some((&self.0.colours, self.1)))
            }
        }
        Show(self, set).to_string()
    }

    /// Parse the block-list text format; points without `@colour` get colour 0.
    pub fn parse(s: &str, set: &ColourSet) -> Result<ColouredPartition> {
        let (base, names) = parse_text(s)?;
        let mut colours = Vec::with_capacity(names.len());
        for name in names {
            colours.push(match name {
                None => 0,
                Some(n) => set
                    .index_of(&n)
                    .ok_or_else(|| Error::ColourMismatch(format!("unknown colour `{n}`")))?,
            });
        }
        ColouredPartition::new(base, colours)
    }
}

fn zip(a: &[usize], b: &[usize]) -> Vec<(usize, usize)> {
    a.iter().copied().zip(b.iter().copied()).collect()
}

/// All members of `family` in P(k,l), sorted, with the default point bound.
pub fn enumerate(family: Family, upper: usize, lower: usize) -> Result<Vec<Partition>> {
    enumerate_bounded(family, upper, lower, DEFAULT_MAX_POINTS)
}

pub fn enumerate_bounded(
    family: Family,
    upper: usize,
    lower: usize,
    max_points: usize,
) -> Result<Vec<Partition>> {
    let n = upper + lower;
    check_bound("points", n, max_points)?;
    let mut out = Vec::new();
    let mut seq = Vec::with_capacity(n);
    let mut sizes = Vec::new();
    let mut emit = |seq: &[usize]| {
        // seq is in cyclic order u1..uk, ll..l1
        let mut raw = Vec::with_capacity(n);
        raw.extend_from_slice(&seq[..upper]);
        raw.extend(seq[upper..].iter().rev());
        let p = Partition::new(upper, lower, &raw).expect("length n");
        if family.contains(&p) {
            out.push(p);
        }
    };
    grow(family, n, &mut seq, &mut sizes, &mut emit);
    out.sort();
    Ok(out)
}

/// Restricted-growth generation with pruning for crossings and block sizes.
fn grow(
    family: Family,
    n: usize,
    seq: &mut Vec<usize>,
    sizes: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    let j = seq.len();
    if j == n {
        emit(seq);
        return;
    }
    let cap = family.max_block();
    let remaining = n - j;
    for b in 0..=sizes.len() {
        let fresh = b == sizes.len();
        if !fresh {
            if cap.is_some_and(|c| sizes[b] >= c) {
                continue;
            }
            if family.requires_noncrossing() && creates_crossing(seq, b) {
                continue;
            }
        }
        if let Some(c) = cap {
            // open blocks still needing points must fit in the remaining slots
            let mut deficit: usize = sizes
                .iter()
                .enumerate()
                .map(|(i, &s)| if i == b { c - s - 1 } else { c - s })
                .sum();
            if fresh {
                deficit += c - 1;
            }
            if deficit > remaining - 1 {
                continue;
            }
        }
        if fresh {
            sizes.push(1);
        } else {
            sizes[b] += 1;
        }
        seq.push(b);
        grow(family, n, seq, sizes, emit);
        seq.pop();
        if fresh {
            sizes.pop();
        } else {
            sizes[b] -= 1;
        }
    }
}

/// Would appending a point of block `b` create a crossing whose largest point is the new one?
fn creates_crossing(seq: &[usize], b: usize) -> bool {
    let a = match seq.iter().rposition(|&x| x == b) {
        Some(a) => a,
        None => return false,
    };
    seq[a + 1..]
        .iter()
        .any(|&y| y != b && seq[..a].contains(&y))
}
