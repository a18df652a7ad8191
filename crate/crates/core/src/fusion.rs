//! Projective partitions, the fusion set of a category of coloured partitions
//! and the fusion semiring built from it.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::categories::{enumerate_category, is_block_stable, CategorySpec};
use crate::error::{check_bound, Error, Result};
use crate::groups::{self_conjugate_split, FiniteGroup};
use crate::operators::dim_mor_coloured;
use crate::partitions::{ColouredPartition, Family, Partition};

/// Largest word length accepted by [`FusionSet::new`].
pub const MAX_WORD_LEN: usize = 6;

/// Default word length of a fusion set.
pub const DEFAULT_WORD_LEN: usize = 4;

/// Largest colour word decomposed into irreducibles.
pub const MAX_DECOMPOSE_LEN: usize = 4;

/// Point bound of the block-stability check made before decomposing.
pub const STABILITY_POINTS: usize = 4;

/// `p² = p = p*` with no loops removed in `p²`.
pub fn is_projective(p: &ColouredPartition) -> bool {
    projective(p, false)
}

/// `p² = p = p*` where `p²` may drop closed loops.
pub fn is_projective_up_to_loops(p: &ColouredPartition) -> bool {
    projective(p, true)
}

fn projective(p: &ColouredPartition, allow_loops: bool) -> bool {
    if p.upper_colours() != p.lower_colours() || p.involution() != *p {
        return false;
    }
    match p.compose(p) {
        Ok((square, loops)) => square == *p && (allow_loops || loops == 0),
        Err(_) => false,
    }
}

/// `π(w, w')`, the one-block partition with the given row colourings.
pub fn one_block(upper: &[usize], lower: &[usize]) -> ColouredPartition {
    ColouredPartition::with_rows(Partition::one_block(upper.len(), lower.len()), upper, lower)
        .expect("row lengths match")
}

/// Word reversal with every colour conjugated.
fn conjugate_word(spec: &CategorySpec, word: &[usize]) -> Vec<usize> {
    let colours = spec.colour_set();
    word.iter().rev().map(|&c| colours.conj(c)).collect()
}

/// An equivalence class of one-block projective partitions, identified by its
/// shortest, lexicographically least colour word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionClass {
    pub index: usize,
    pub word: Vec<usize>,
}

/// A word over the fusion set; the empty word is the trivial representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FusionWord(pub Vec<usize>);

impl FusionWord {
    pub fn empty() -> Self {
        FusionWord(Vec::new())
    }

    pub fn letter(class: usize) -> Self {
        FusionWord(vec![class])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Ord for FusionWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for FusionWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Fusion words with positive multiplicities, ordered by length then letters.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FormalSum(BTreeMap<FusionWord, usize>);

impl FormalSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit() -> Self {
        Self::word(FusionWord::empty())
    }

    pub fn word(word: FusionWord) -> Self {
        let mut sum = Self::zero();
        sum.add(word, 1);
        sum
    }

    pub fn add(&mut self, word: FusionWord, count: usize) {
        if count > 0 {
            *self.0.entry(word).or_insert(0) += count;
        }
    }

    pub fn add_sum(&mut self, other: &FormalSum) {
        for (w, &c) in &other.0 {
            self.add(w.clone(), c);
        }
    }

    pub fn multiplicity(&self, word: &FusionWord) -> usize {
        self.0.get(word).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FusionWord, usize)> {
        self.0.iter().map(|(w, &c)| (w, c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `Σ_γ m_γ m'_γ`.
    pub fn pairing(&self, other: &FormalSum) -> usize {
        self.0.iter().map(|(w, &c)| c * other.multiplicity(w)).sum()
    }
}

/// The fusion set of a category, truncated at a word length.
#[derive(Clone, Debug)]
pub struct FusionSet {
    spec: CategorySpec,
    max_word_len: usize,
    classes: Vec<FusionClass>,
    block_stable: bool,
}

impl FusionSet {
    pub fn new(spec: CategorySpec, max_word_len: usize) -> Result<Self> {
        check_bound("max_word_len", max_word_len, MAX_WORD_LEN)?;
        let alphabet = spec.colour_set().len();
        let mut classes: Vec<FusionClass> = Vec::new();
        for len in 1..=max_word_len {
            for word in crate::categories::words(alphabet, len) {
                if !spec.contains(&one_block(&word, &word))? {
                    continue;
                }
                let mut known = false;
                for c in &classes {
                    if spec.contains(&one_block(&word, &c.word))? {
                        known = true;
                        break;
                    }
                }
                if !known {
                    classes.push(FusionClass {
                        index: classes.len(),
                        word,
                    });
                }
            }
        }
        let block_stable = is_block_stable(&spec, STABILITY_POINTS)?;
        Ok(FusionSet {
            spec,
            max_word_len,
            classes,
            block_stable,
        })
    }

    pub fn spec(&self) -> &CategorySpec {
        &self.spec
    }

    pub fn max_word_len(&self) -> usize {
        self.max_word_len
    }

    pub fn classes(&self) -> &[FusionClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn is_block_stable(&self) -> bool {
        self.block_stable
    }

    /// The class of `π(word, word)`, or `None` when that partition is not in the category.
    pub fn class_of(&self, word: &[usize]) -> Result<Option<usize>> {
        if word.is_empty() || !self.spec.contains(&one_block(word, word))? {
            return Ok(None);
        }
        for c in &self.classes {
            if self.spec.contains(&one_block(word, &c.word))? {
                return Ok(Some(c.index));
            }
        }
        Err(Error::BoundExceeded {
            what: "fusion class representative length",
            requested: self.max_word_len + 1,
            limit: self.max_word_len,
        })
    }

    fn class(&self, index: usize) -> Result<&FusionClass> {
        self.classes
            .get(index)
            .ok_or_else(|| Error::OutOfRange(format!("fusion class {index}")))
    }

    /// `[a] * [b]`, or `None` for EMPTY.
    pub fn star(&self, a: usize, b: usize) -> Result<Option<usize>> {
        let mut word = self.class(a)?.word.clone();
        word.extend_from_slice(&self.class(b)?.word);
        self.class_of(&word)
    }

    /// The class of the partition turned upside down.
    pub fn conj(&self, a: usize) -> Result<usize> {
        let word = conjugate_word(&self.spec, &self.class(a)?.word);
        self.class_of(&word)?
            .ok_or_else(|| Error::Unsupported("conjugate word leaves the fusion set".into()))
    }

    pub fn conj_word(&self, w: &FusionWord) -> Result<FusionWord> {
        Ok(FusionWord(w.0.iter().rev().map(|&a| self.conj(a)).collect::<Result<_>>()?))
    }

    /// `a * b` on words: the last letter of `a` is starred with the first of `b`.
    pub fn star_words(&self, a: &FusionWord, b: &FusionWord) -> Result<Option<FusionWord>> {
        let (Some(&last), Some(&first)) = (a.0.last(), b.0.first()) else {
            return Ok(None);
        };
        Ok(self.star(last, first)?.map(|s| {
            let mut out = a.0[..a.len() - 1].to_vec();
            out.push(s);
            out.extend_from_slice(&b.0[1..]);
            FusionWord(out)
        }))
    }

    /// `w ⊗ w' = Σ_{w = az, w' = z̄b} ab + a*b`.
    pub fn tensor(&self, w: &FusionWord, v: &FusionWord) -> Result<FormalSum> {
        if !self.block_stable {
            return Err(Error::NotBlockStable(STABILITY_POINTS));
        }
        let mut out = FormalSum::zero();
        for j in 0..=w.len().min(v.len()) {
            let z = FusionWord(w.0[w.len() - j..].to_vec());
            if self.conj_word(&z)?.0 != v.0[..j] {
                continue;
            }
            let a = FusionWord(w.0[..w.len() - j].to_vec());
            let b = FusionWord(v.0[j..].to_vec());
            if let Some(s) = self.star_words(&a, &b)? {
                out.add(s, 1);
            }
            out.add(FusionWord([a.0, b.0].concat()), 1);
        }
        Ok(out)
    }

    pub fn tensor_sums(&self, x: &FormalSum, y: &FormalSum) -> Result<FormalSum> {
        let mut out = FormalSum::zero();
        for (w, cw) in x.terms() {
            for (v, cv) in y.terms() {
                for (t, ct) in self.tensor(w, v)?.terms() {
                    out.add(t.clone(), cw * cv * ct);
                }
            }
        }
        Ok(out)
    }

    /// Fusion word of a projective partition: the classes of its through-blocks, left to right.
    pub fn word_of_projective(&self, p: &ColouredPartition) -> Result<FusionWord> {
        let k = p.base.upper();
        let mut blocks: Vec<usize> = Vec::new();
        for &b in p.base.upper_labels() {
            if !blocks.contains(&b) && p.base.lower_labels().contains(&b) {
                blocks.push(b);
            }
        }
        let mut word = Vec::with_capacity(blocks.len());
        for b in blocks {
            let letters: Vec<usize> = (0..k)
                .filter(|&pt| p.base.labels()[pt] == b)
                .map(|pt| p.colours()[pt])
                .collect();
            let class = self
                .class_of(&letters)?
                .ok_or_else(|| Error::Unsupported("through-block outside the fusion set".into()))?;
            word.push(class);
        }
        Ok(FusionWord(word))
    }

    /// `u^{⊗w}` as the sum over projective partitions in `C(w, w)` (loops allowed in `p²`).
    pub fn projective_decomposition(&self, colour_word: &[usize]) -> Result<FormalSum> {
        check_bound("word length", colour_word.len(), MAX_DECOMPOSE_LEN)?;
        let mut out = FormalSum::zero();
        for p in enumerate_category(&self.spec, colour_word, colour_word)? {
            if is_projective_up_to_loops(&p) {
                out.add(self.word_of_projective(&p)?, 1);
            }
        }
        Ok(out)
    }

    /// `u^{⊗w}` by tensoring the decompositions of its letters one at a time.
    pub fn decompose(&self, colour_word: &[usize]) -> Result<FormalSum> {
        check_bound("word length", colour_word.len(), MAX_DECOMPOSE_LEN)?;
        let mut acc = FormalSum::unit();
        for &c in colour_word {
            acc = self.tensor_sums(&acc, &self.projective_decomposition(&[c])?)?;
        }
        Ok(acc)
    }

    /// Multiplicity of `target` in `u^{⊗w}`.
    pub fn multiplicity(&self, colour_word: &[usize], target: &FusionWord) -> Result<usize> {
        Ok(self.decompose(colour_word)?.multiplicity(target))
    }

    pub fn class_label(&self, a: usize) -> String {
        let colours = self.spec.colour_set();
        let letters: Vec<&str> = self.classes[a].word.iter().map(|&c| colours.name(c)).collect();
        format!("[{}]", letters.join(","))
    }

    pub fn word_label(&self, w: &FusionWord) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.0.iter().map(|&a| self.class_label(a)).collect::<Vec<_>>().join("")
    }

    pub fn sum_label(&self, s: &FormalSum) -> String {
        if s.is_zero() {
            return "0".into();
        }
        s.terms()
            .map(|(w, c)| {
                if c == 1 {
                    self.word_label(w)
                } else {
                    format!("{c}{}", self.word_label(w))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Star table with `None` for EMPTY.
    pub fn star_table(&self) -> Result<Vec<Vec<Option<usize>>>> {
        (0..self.len())
            .map(|a| (0..self.len()).map(|b| self.star(a, b)).collect())
            .collect()
    }
}

/// Associativity of `*` where both sides are defined and `conj(a*b) = conj(b)*conj(a)`.
pub fn star_axioms_hold(set: &FusionSet) -> Result<bool> {
    let table = set.star_table()?;
    for a in 0..set.len() {
        for b in 0..set.len() {
            let ab = table[a][b];
            let ba_conj = table[set.conj(b)?][set.conj(a)?];
            if ab.map(|s| set.conj(s)).transpose()? != ba_conj {
                return Ok(false);
            }
            for c in 0..set.len() {
                let left = ab.and_then(|s| table[s][c]);
                let right = table[b][c].and_then(|s| table[a][s]);
                if left.is_some() && right.is_some() && left != right {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// One line of a fusion-versus-rank comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionCheck {
    pub upper: Vec<usize>,
    pub lower: Vec<usize>,
    pub fusion: usize,
    pub rank: usize,
}

impl DimensionCheck {
    pub fn agrees(&self) -> bool {
        self.fusion == self.rank
    }
}

/// `Σ_γ mult_γ(w) mult_γ(w')` against the exact rank of `Mor(w, w')` for every pair of words.
pub fn cross_check_dim(set: &FusionSet, words: &[Vec<usize>], n: usize) -> Result<Vec<DimensionCheck>> {
    if n < 4 {
        return Err(Error::Unsupported("the rank cross-check needs N ≥ 4".into()));
    }
    let sums = words
        .iter()
        .map(|w| set.decompose(w))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for (i, w) in words.iter().enumerate() {
        for (j, v) in words.iter().enumerate().skip(i) {
            out.push(DimensionCheck {
                upper: w.clone(),
                lower: v.clone(),
                fusion: sums[i].pairing(&sums[j]),
                rank: dim_mor_coloured(set.spec(), n, w, v)?,
            });
        }
    }
    Ok(out)
}

/// Fusion-set structure of `NC₂[Ĝ]` for an abelian group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalReport {
    pub classes: usize,
    pub self_conjugate_classes: usize,
    pub paired_classes: usize,
    /// `(k, l)` counted from the characters of the group.
    pub expected: (usize, usize),
    pub star_always_empty: bool,
    pub conj_is_inverse: bool,
}

impl OrthogonalReport {
    pub fn consistent(&self) -> bool {
        self.star_always_empty
            && self.conj_is_inverse
            && (self.self_conjugate_classes, self.paired_classes) == self.expected
            && self.classes == self.expected.0 + 2 * self.expected.1
    }
}

pub fn orthogonal_case_report(group: &FiniteGroup) -> Result<OrthogonalReport> {
    if !group.is_commutative() {
        return Err(Error::NonAbelian);
    }
    let set = FusionSet::new(CategorySpec::GammaColoured(Family::Nc2, group.clone()), 2)?;
    let mut star_always_empty = true;
    for a in 0..set.len() {
        for b in 0..set.len() {
            star_always_empty &= set.star(a, b)?.is_none();
        }
    }
    let mut conj_is_inverse = set.len() == group.order();
    let mut self_conjugate = 0;
    for c in set.classes() {
        let conj = set.conj(c.index)?;
        conj_is_inverse &= c.word.len() == 1 && set.classes()[conj].word == vec![group.inv(c.word[0])];
        if conj == c.index {
            self_conjugate += 1;
        }
    }
    Ok(OrthogonalReport {
        classes: set.len(),
        self_conjugate_classes: self_conjugate,
        paired_classes: (set.len() - self_conjugate) / 2,
        expected: self_conjugate_split(group)?,
        star_always_empty,
        conj_is_inverse,
    })
}
