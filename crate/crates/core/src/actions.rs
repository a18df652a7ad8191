//! Averaged operators relative to a group action on a finite colour set, and
//! the classification of such actions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::categories::{enumerate_members, words, CategorySpec};
use crate::error::{check_bound, Error, Result};
use crate::groups::FiniteGroup;
use crate::linalg::IntegerEchelon;
use crate::operators::{m_of, span_rank_int, t_coloured, ExactOperator};
use crate::partitions::{enumerate, ColouredPartition, Family};

/// Largest point count accepted by the closure and rank routines.
pub const MAX_ACTION_POINTS: usize = 6;

/// An action `G ↷ X` given by its table `g.x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    group: FiniteGroup,
    table: Vec<Vec<usize>>,
}

impl GroupAction {
    /// `table[g][x]` is `g.x`.
    pub fn new(group: FiniteGroup, table: Vec<Vec<usize>>) -> Result<Self> {
        if table.len() != group.order() {
            return Err(Error::InvalidAction(format!(
                "{} rows for a group of order {}",
                table.len(),
                group.order()
            )));
        }
        let size = table.first().map_or(0, Vec::len);
        for row in &table {
            let mut seen = vec![false; size];
            if row.len() != size {
                return Err(Error::InvalidAction("rows of different lengths".into()));
            }
            for &x in row {
                if x >= size || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidAction(format!("row {row:?} is not a permutation")));
                }
            }
        }
        let action = GroupAction { group, table };
        let e = action.group.identity();
        if (0..size).any(|x| action.act(e, x) != x) {
            return Err(Error::InvalidAction("the identity moves a point".into()));
        }
        for g in 0..action.group.order() {
            for h in 0..action.group.order() {
                let gh = action.group.mul(g, h);
                if (0..size).any(|x| action.act(gh, x) != action.act(g, action.act(h, x))) {
                    return Err(Error::InvalidAction(format!("(gh).x ≠ g.(h.x) for g = {g}, h = {h}")));
                }
            }
        }
        Ok(action)
    }

    pub fn trivial(group: FiniteGroup, size: usize) -> Self {
        let table = vec![(0..size).collect(); group.order()];
        GroupAction { group, table }
    }

    /// Left translation of the group on itself.
    pub fn regular(group: FiniteGroup) -> Self {
        let table = (0..group.order())
            .map(|g| (0..group.order()).map(|x| group.mul(g, x)).collect())
            .collect();
        GroupAction { group, table }
    }

    /// Left translation on the left cosets of a subgroup.
    pub fn on_cosets(group: FiniteGroup, subgroup: &[usize]) -> Result<Self> {
        if !group.is_subgroup(subgroup) {
            return Err(Error::InvalidAction("not a subgroup".into()));
        }
        let mut coset_of = vec![usize::MAX; group.order()];
        let mut count = 0;
        for g in 0..group.order() {
            if coset_of[g] == usize::MAX {
                for &h in subgroup {
                    coset_of[group.mul(g, h)] = count;
                }
                count += 1;
            }
        }
        let mut table = vec![vec![0; count]; group.order()];
        for g in 0..group.order() {
            for x in 0..group.order() {
                table[g][coset_of[x]] = coset_of[group.mul(g, x)];
            }
        }
        GroupAction::new(group, table)
    }

    /// Disjoint union of two actions of the same group.
    pub fn disjoint_union(&self, other: &GroupAction) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::InvalidAction("actions of different groups".into()));
        }
        let offset = self.set_size();
        let table = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| a.iter().copied().chain(b.iter().map(|x| x + offset)).collect())
            .collect();
        GroupAction::new(self.group.clone(), table)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn set_size(&self) -> usize {
        self.table.first().map_or(0, Vec::len)
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.table[g][x]
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.set_size()];
        let mut out = Vec::new();
        for x in 0..self.set_size() {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = (0..self.group.order()).map(|g| self.act(g, x)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        (0..self.group.order()).filter(|&g| self.act(g, x) == x).collect()
    }

    /// Elements acting as the identity.
    pub fn kernel(&self) -> Vec<usize> {
        (0..self.group.order())
            .filter(|&g| (0..self.set_size()).all(|x| self.act(g, x) == x))
            .collect()
    }

    pub fn is_faithful(&self) -> bool {
        self.kernel().len() == 1
    }

    /// Whether `ḡ.x = g.x̄` for the involution `x ↦ x̄` of the set.
    pub fn is_coloured(&self, involution: &[usize]) -> Result<bool> {
        let n = self.set_size();
        if involution.len() != n || (0..n).any(|x| involution[x] >= n || involution[involution[x]] != x) {
            return Err(Error::InvalidAction("not an involution of the colour set".into()));
        }
        Ok((0..self.group.order())
            .all(|g| (0..n).all(|x| involution[self.act(g, x)] == self.act(g, involution[x]))))
    }
}

/// `α` commutes with the colour involution at every `(g, x)`.
pub fn coloured_action_check(action: &GroupAction, involution: &[usize]) -> Result<bool> {
    action.is_coloured(involution)
}

/// `M_p^α = Σ_{g ∈ G^{b(p)}} T_{g.p}`, where block `β` moves its colours by `g_β`,
/// on the basis `(i, x) ∈ {1..N} × X`.
pub fn m_alpha_of(p: &ColouredPartition, action: &GroupAction, n: usize) -> Result<ExactOperator<i64>> {
    let size = action.set_size();
    if let Some(&c) = p.colours().iter().find(|&&c| c >= size) {
        return Err(Error::ColourMismatch(format!("colour {c} outside a set of {size}")));
    }
    let blocks = p.base.num_blocks();
    let go = action.group().order();
    // colourings reached by block tuples, with multiplicities
    let mut reached: HashMap<Vec<usize>, i64> = HashMap::new();
    for tuple in words(go, blocks) {
        let colours: Vec<usize> = p
            .base
            .labels()
            .iter()
            .zip(p.colours())
            .map(|(&b, &x)| action.act(tuple[b], x))
            .collect();
        *reached.entry(colours).or_insert(0) += 1;
    }
    let mut reached: Vec<_> = reached.into_iter().collect();
    reached.sort();
    let (k, l) = (p.base.upper(), p.base.lower());
    let mut total = ExactOperator::zero(k, l, n * size);
    for (colours, weight) in reached {
        let q = ColouredPartition::new(p.base.clone(), colours)?;
        total = total.add(&t_coloured(&q, size, n).scale(&weight))?;
    }
    Ok(total)
}

/// The category members that carry `M^α` operators: every `X`-colouring of an
/// uncoloured family, or the members of a coloured category over `X`.
pub fn alpha_members(base: &CategorySpec, action: &GroupAction, k: usize, l: usize) -> Result<Vec<ColouredPartition>> {
    check_bound("points", k + l, MAX_ACTION_POINTS)?;
    let size = action.set_size();
    match base {
        CategorySpec::Uncoloured(family) => {
            let mut out = Vec::new();
            for p in enumerate(*family, k, l)? {
                for colours in words(size, k + l) {
                    out.push(ColouredPartition::new(p.clone(), colours)?);
                }
            }
            Ok(out)
        }
        spec => {
            if spec.colour_set().len() != size {
                return Err(Error::ColourMismatch(format!(
                    "{} colours for an action on {size} points",
                    spec.colour_set().len()
                )));
            }
            enumerate_members(spec, k, l)
        }
    }
}

/// Outcome of a closure sweep.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClosureReport {
    pub compositions: usize,
    pub tensors: usize,
    pub involutions: usize,
    pub failures: Vec<String>,
}

impl ClosureReport {
    pub fn is_closed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Products, tensor products and adjoints of `M^α` operators stay in the
/// span of the `M^α` operators, tested by exact span membership.
pub fn closure_check_alpha(base: &CategorySpec, action: &GroupAction, n: usize, max_points: usize) -> Result<ClosureReport> {
    check_bound("points", max_points, MAX_ACTION_POINTS)?;
    let mut ops: BTreeMap<(usize, usize), Vec<(ColouredPartition, ExactOperator<i64>)>> = BTreeMap::new();
    let mut spans: BTreeMap<(usize, usize), IntegerEchelon> = BTreeMap::new();
    for total in 0..=max_points {
        for k in 0..=total {
            let l = total - k;
            let mut echelon = IntegerEchelon::new();
            let mut list = Vec::new();
            for p in alpha_members(base, action, k, l)? {
                let op = m_alpha_of(&p, action, n)?;
                echelon.insert(to_big(op.vectorize()));
                list.push((p, op));
            }
            ops.insert((k, l), list);
            spans.insert((k, l), echelon);
        }
    }
    let mut report = ClosureReport::default();
    let check = |report: &mut ClosureReport, shape: (usize, usize), op: &ExactOperator<i64>, what: String| {
        if !spans[&shape].contains(to_big(op.vectorize())) {
            report.failures.push(what);
        }
    };
    for (&(k, l), qs) in &ops {
        for (q, mq) in qs {
            check(&mut report, (l, k), &mq.adjoint(), format!("adjoint of {}", show(q)));
            report.involutions += 1;
        }
        for m in 0..=max_points {
            if l + m > max_points || k + m > max_points {
                continue;
            }
            for (p, mp) in &ops[&(l, m)] {
                for (q, mq) in qs {
                    check(&mut report, (k, m), &mp.compose(mq)?, format!("{} ∘ {}", show(p), show(q)));
                    report.compositions += 1;
                }
            }
        }
    }
    for (&(k1, l1), ps) in &ops {
        for (&(k2, l2), qs) in &ops {
            if k1 + l1 + k2 + l2 > max_points {
                continue;
            }
            for (p, mp) in ps {
                for (q, mq) in qs {
                    check(&mut report, (k1 + k2, l1 + l2), &mp.tensor(mq)?, format!("{} ⊗ {}", show(p), show(q)));
                    report.tensors += 1;
                }
            }
        }
    }
    Ok(report)
}

fn show(p: &ColouredPartition) -> String {
    format!("{} colours {:?}", p.base, p.colours())
}

fn to_big(row: Vec<(usize, i64)>) -> Vec<(usize, num_bigint::BigInt)> {
    row.into_iter().map(|(c, v)| (c, v.into())).collect()
}

/// `span_rank{M_p^α : p ∈ C^X(0, n)}`.
pub fn rank_alpha(base: &CategorySpec, action: &GroupAction, n_sites: usize, points: usize) -> Result<usize> {
    let ops = alpha_members(base, action, 0, points)?
        .iter()
        .map(|p| m_alpha_of(p, action, n_sites))
        .collect::<Result<Vec<_>>>()?;
    span_rank_int(&ops)
}

/// The faithful action of `G/H` induced by `α`, with `H` its kernel.
#[derive(Clone, Debug)]
pub struct ReducedAction {
    pub action: GroupAction,
    pub kernel: Vec<usize>,
    /// Coset index of every element of `G`.
    pub projection: Vec<usize>,
}

pub fn reduce_action(action: &GroupAction) -> Result<ReducedAction> {
    let kernel = action.kernel();
    let (quotient, projection) = action.group().quotient(&kernel)?;
    let mut table = vec![Vec::new(); quotient.order()];
    for g in 0..action.group().order() {
        if table[projection[g]].is_empty() {
            table[projection[g]] = action.table()[g].clone();
        }
    }
    Ok(ReducedAction {
        action: GroupAction::new(quotient, table)?,
        kernel,
        projection,
    })
}

/// Whether `M_p^α = |H|^{b(p)} M_p^{α̃}` for every member `p` within the bound,
/// i.e. the normalized averages `|G|^{−b(p)} M_p^α` of `α` and of its faithful
/// reduction coincide exactly.
pub fn reduction_preserves_operators(base: &CategorySpec, action: &GroupAction, n: usize, max_points: usize) -> Result<bool> {
    let reduced = reduce_action(action)?;
    let h = reduced.kernel.len() as i64;
    for total in 0..=max_points {
        for k in 0..=total {
            for p in alpha_members(base, action, k, total - k)? {
                let lhs = m_alpha_of(&p, action, n)?;
                let rhs = m_alpha_of(&p, &reduced.action, n)?.scale(&h.pow(p.base.num_blocks() as u32));
                if !lhs.equals(&rhs) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Kinds of actions with a known identification of the resulting quantum group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionClass {
    /// Every element acts as the identity.
    Trivial,
    /// Every stabilizer is trivial.
    Free { orbits: usize },
    /// A single orbit with point stabilizer `H`; `core` is the normal core of `H`.
    Transitive { stabilizer: Vec<usize>, core: Vec<usize> },
    General,
}

impl fmt::Display for ActionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionClass::Trivial => write!(f, "trivial"),
            ActionClass::Free { .. } => write!(f, "free"),
            ActionClass::Transitive { .. } => write!(f, "transitive"),
            ActionClass::General => write!(f, "general"),
        }
    }
}

impl ActionClass {
    /// The expected identification, in words.
    pub fn identification(&self) -> String {
        match self {
            ActionClass::Trivial => "G_N(C) with fundamental representation U^{⊕|X|}".into(),
            ActionClass::Free { orbits } => {
                format!("G≀G_N(C), the regular case, with the representation repeated over {orbits} orbit(s)")
            }
            ActionClass::Transitive { core, .. } => {
                format!("(G/Co(H))≀G_N(C) with |Co(H)| = {}", core.len())
            }
            ActionClass::General => "no general identification".into(),
        }
    }
}

/// Trivial takes precedence over free, and free over transitive.
pub fn classify(action: &GroupAction) -> ActionClass {
    let size = action.set_size();
    let group = action.group();
    if action.kernel().len() == group.order() {
        return ActionClass::Trivial;
    }
    if (0..size).all(|x| action.stabilizer(x).len() == 1) {
        return ActionClass::Free {
            orbits: action.orbits().len(),
        };
    }
    if action.orbits().len() == 1 {
        let stabilizer = action.stabilizer(0);
        let core = group.normal_core(&stabilizer);
        return ActionClass::Transitive { stabilizer, core };
    }
    ActionClass::General
}

/// Rank of `Mor(ε, V^{⊗n})` predicted by the classification, where one exists.
pub fn predicted_rank(action: &GroupAction, family: Family, n_sites: usize, points: usize) -> Result<Option<usize>> {
    let size = action.set_size();
    let group = action.group();
    let count = enumerate(family, 0, points)?.len();
    let regular_rank = |g: &FiniteGroup| -> Result<usize> {
        let ops: Vec<_> = crate::categories::canonical_coloured(family, g, 0, points)?
            .iter()
            .map(|p| m_of(p, g, n_sites))
            .collect();
        span_rank_int(&ops)
    };
    Ok(match classify(action) {
        ActionClass::Trivial => Some(size.pow(points as u32) * count),
        ActionClass::Free { orbits } => Some(orbits.pow(points as u32) * regular_rank(group)?),
        ActionClass::Transitive { stabilizer, core } if stabilizer == core => {
            let (quotient, _) = group.quotient(&core)?;
            Some(regular_rank(&quotient)?)
        }
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::Partition;

    fn z(n: usize) -> FiniteGroup {
        FiniteGroup::cyclic(n).unwrap()
    }

    fn swap() -> GroupAction {
        GroupAction::new(z(2), vec![vec![0, 1], vec![1, 0]]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(GroupAction::new(z(2), vec![vec![0, 1]]).is_err());
        assert!(GroupAction::new(z(2), vec![vec![1, 0], vec![0, 1]]).is_err());
        assert!(GroupAction::new(z(2), vec![vec![0, 0], vec![1, 0]]).is_err());
        // Z4 acting through its parity is an action, a 3-cycle for the generator is not
        let parity = vec![vec![0, 1, 2], vec![1, 0, 2], vec![0, 1, 2], vec![1, 0, 2]];
        assert!(GroupAction::new(z(4), parity).is_ok());
        let bad = vec![vec![0, 1, 2], vec![1, 2, 0], vec![0, 1, 2], vec![1, 2, 0]];
        assert!(GroupAction::new(z(4), bad).is_err());
    }

    #[test]
    fn orbit_data() {
        let cosets = GroupAction::on_cosets(z(4), &[0, 2]).unwrap();
        assert_eq!(cosets.set_size(), 2);
        assert_eq!(cosets.kernel(), vec![0, 2]);
        assert_eq!(cosets.orbits(), vec![vec![0, 1]]);
        let two = swap().disjoint_union(&GroupAction::trivial(z(2), 1)).unwrap();
        assert_eq!(two.orbits(), vec![vec![0, 1], vec![2]]);
        assert_eq!(two.stabilizer(2), vec![0, 1]);
    }

    #[test]
    fn operator_examples() {
        let id = |c: usize| ColouredPartition::with_rows(Partition::identity(), &[c], &[c]).unwrap();
        let m = m_alpha_of(&id(0), &swap(), 1).unwrap();
        let expected = ExactOperator::from_entries(1, 1, 2, vec![(0, 0, 1), (1, 1, 1)]);
        assert!(m.equals(&expected));
        let p = ColouredPartition::with_rows(Partition::identity(), &[0], &[1]).unwrap();
        let swap_op = ExactOperator::from_entries(1, 1, 2, vec![(0, 1, 1), (1, 0, 1)]);
        assert!(m_alpha_of(&p, &swap(), 1).unwrap().equals(&swap_op));
        // translation of Z2 on itself reproduces the averaged operators
        let group = z(2);
        let regular = GroupAction::regular(group.clone());
        for points in 0..=3 {
            for k in 0..=points {
                for p in alpha_members(&CategorySpec::Uncoloured(Family::All), &regular, k, points - k).unwrap() {
                    assert!(m_alpha_of(&p, &regular, 2).unwrap().equals(&m_of(&p, &group, 2)));
                }
            }
        }
        // the trivial action multiplies the coloured T by |G|^{b(p)}
        let trivial = GroupAction::trivial(z(3), 2);
        for p in alpha_members(&CategorySpec::Uncoloured(Family::Nc), &trivial, 1, 2).unwrap() {
            let scaled = t_coloured(&p, 2, 2).scale(&3i64.pow(p.base.num_blocks() as u32));
            assert!(m_alpha_of(&p, &trivial, 2).unwrap().equals(&scaled));
        }
    }

    #[test]
    fn supports_respect_orbits() {
        let action = swap().disjoint_union(&GroupAction::trivial(z(2), 1)).unwrap();
        let orbit = |x: usize| usize::from(x == 2);
        for p in alpha_members(&CategorySpec::Uncoloured(Family::Nc), &action, 1, 1).unwrap() {
            for (r, c, _) in m_alpha_of(&p, &action, 2).unwrap().entries() {
                assert_eq!(orbit(r % 3), orbit(p.lower_colours()[0]));
                assert_eq!(orbit(c % 3), orbit(p.upper_colours()[0]));
            }
        }
    }

    #[test]
    fn closure_small() {
        let nc = CategorySpec::Uncoloured(Family::Nc);
        assert!(closure_check_alpha(&nc, &swap(), 2, 3).unwrap().is_closed());
        assert!(closure_check_alpha(&nc, &GroupAction::trivial(z(2), 2), 2, 3).unwrap().is_closed());
        let two_colour = CategorySpec::TwoColourModS(Some(2));
        let report = closure_check_alpha(&two_colour, &swap(), 2, 3).unwrap();
        assert!(report.is_closed(), "{:?}", report.failures);
        assert!(report.compositions > 0 && report.tensors > 0);
    }

    #[test]
    fn reductions() {
        let trivial = reduce_action(&GroupAction::trivial(z(2), 3)).unwrap();
        assert_eq!(trivial.kernel, vec![0, 1]);
        assert_eq!(trivial.action.group().order(), 1);
        assert_eq!(reduce_action(&swap()).unwrap().kernel, vec![0]);
        let parity = GroupAction::on_cosets(z(4), &[0, 2]).unwrap();
        let reduced = reduce_action(&parity).unwrap();
        assert_eq!(reduced.kernel.len(), 2);
        assert!(reduced.action.is_faithful());
        let nc = CategorySpec::Uncoloured(Family::Nc);
        assert!(reduction_preserves_operators(&nc, &parity, 2, 2).unwrap());
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&GroupAction::trivial(z(2), 3)), ActionClass::Trivial);
        assert_eq!(classify(&GroupAction::regular(z(2))), ActionClass::Free { orbits: 1 });
        let cosets = GroupAction::on_cosets(z(4), &[0, 2]).unwrap();
        assert_eq!(
            classify(&cosets),
            ActionClass::Transitive {
                stabilizer: vec![0, 2],
                core: vec![0, 2]
            }
        );
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let point_stabilizer: Vec<usize> = (0..6).filter(|&g| s3.mul(g, g) == s3.identity()).take(2).collect();
        let on_three = GroupAction::on_cosets(s3, &point_stabilizer).unwrap();
        match classify(&on_three) {
            ActionClass::Transitive { core, .. } => assert_eq!(core.len(), 1),
            other => panic!("{other:?}"),
        }
        let mixed = swap().disjoint_union(&GroupAction::trivial(z(2), 1)).unwrap();
        assert_eq!(classify(&mixed), ActionClass::General);
    }

    #[test]
    fn degenerate_ranks() {
        let nc = CategorySpec::Uncoloured(Family::Nc);
        let trivial = GroupAction::trivial(z(2), 1);
        for points in 1..=3 {
            let rank = rank_alpha(&nc, &trivial, 4, points).unwrap();
            assert_eq!(rank, enumerate(Family::Nc, 0, points).unwrap().len());
            assert_eq!(Some(rank), predicted_rank(&trivial, Family::Nc, 4, points).unwrap());
        }
        let regular = GroupAction::regular(z(2));
        let ranks: Vec<usize> = (1..=3).map(|n| rank_alpha(&nc, &regular, 4, n).unwrap()).collect();
        assert_eq!(ranks, vec![1, 3, 11]);
    }

    #[test]
    fn coloured_actions() {
        assert!(coloured_action_check(&swap(), &[1, 0]).unwrap());
        assert!(coloured_action_check(&GroupAction::trivial(z(2), 2), &[1, 0]).unwrap());
        let mixed = swap().disjoint_union(&GroupAction::trivial(z(2), 1)).unwrap();
        assert!(coloured_action_check(&mixed, &[1, 0, 2]).unwrap());
        assert!(!coloured_action_check(&mixed, &[2, 1, 0]).unwrap());
        assert!(coloured_action_check(&swap(), &[0, 0]).is_err());
    }
}
