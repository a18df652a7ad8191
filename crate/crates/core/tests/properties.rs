use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use pwreath_core::actions::{rank_alpha, GroupAction};
use pwreath_core::categories::CategorySpec;
use pwreath_core::freeprob::wreath_moments;
use pwreath_core::groups::FiniteGroup;
use pwreath_core::operators::{decode, gram_rank, span_rank_int, t_of};
use pwreath_core::partitions::{enumerate, ColouredPartition, Corner, Family, Partition};

fn partition(max_side: usize) -> impl Strategy<Value = Partition> {
    (0..=max_side, 0..=max_side).prop_flat_map(|(k, l)| {
        prop::collection::vec(0..(k + l).max(1), k + l).prop_map(move |labels| Partition::new(k, l, &labels).unwrap())
    })
}

/// A composable pair `(p, q)` with `q ∈ P(k,l)` and `p ∈ P(l,m)`, sides at most 3.
fn composable() -> impl Strategy<Value = (Partition, Partition)> {
    (0usize..=3, 0usize..=3, 0usize..=3).prop_flat_map(|(k, l, m)| {
        (
            prop::collection::vec(0..(l + m).max(1), l + m),
            prop::collection::vec(0..(k + l).max(1), k + l),
        )
            .prop_map(move |(lp, lq)| (Partition::new(l, m, &lp).unwrap(), Partition::new(k, l, &lq).unwrap()))
    })
}

/// `T_p` entries straight from the definition: 1 iff the index is constant on every block.
fn t_entry_oracle(p: &Partition, n: usize, row: usize, col: usize) -> i64 {
    let upper = decode(col, n, p.upper());
    let lower = decode(row, n, p.lower());
    let index: Vec<usize> = upper.iter().chain(&lower).copied().collect();
    let labels = p.labels();
    for a in 0..index.len() {
        for b in 0..index.len() {
            if labels[a] == labels[b] && index[a] != index[b] {
                return 0;
            }
        }
    }
    1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trip(p in partition(4)) {
        let text = p.to_string();
        prop_assert_eq!(text.parse::<Partition>().unwrap(), p);
    }

    #[test]
    fn coloured_text_round_trip(p in partition(3), seed in prop::collection::vec(0usize..3, 6)) {
        let group = FiniteGroup::cyclic(3).unwrap();
        let set = group.colour_set();
        let colours = seed[..p.points()].to_vec();
        let cp = ColouredPartition::new(p, colours).unwrap();
        prop_assert_eq!(ColouredPartition::parse(&cp.to_text(&set), &set).unwrap(), cp);
    }

    #[test]
    fn t_matches_definition(p in partition(3), n in 1usize..4) {
        let t = t_of(&p, n);
        for row in 0..t.rows() {
            for col in 0..t.cols() {
                prop_assert_eq!(t.get(row, col), t_entry_oracle(&p, n, row, col));
            }
        }
    }

    #[test]
    fn t_composition_law((p, q) in composable(), n in 2usize..5) {
        let (pq, loops) = p.compose(&q).unwrap();
        let lhs = t_of(&p, n).compose(&t_of(&q, n)).unwrap();
        prop_assert!(lhs.equals(&t_of(&pq, n).scale(&(n as i64).pow(loops as u32))));
    }

    #[test]
    fn families_are_closed(family in prop::sample::select(vec![Family::Nc, Family::Nc2, Family::NcEv]), a in 0usize..40, b in 0usize..40) {
        let lefts = enumerate(family, 2, 2).unwrap();
        let rights = enumerate(family, 2, 2).unwrap();
        let p = &lefts[a % lefts.len()];
        let q = &rights[b % rights.len()];
        prop_assert!(family.contains(&p.compose(q).unwrap().0));
        prop_assert!(family.contains(&p.tensor(q)));
        prop_assert!(family.contains(&p.involution()));
        prop_assert!(family.contains(&p.rotate(Corner::UpperLeft).unwrap()));
        prop_assert!(family.contains(&p.rotate(Corner::LowerRight).unwrap()));
    }

    #[test]
    fn gram_rank_matches_span_rank(mask in prop::collection::vec(any::<bool>(), 14), n in 1usize..4) {
        let members: Vec<Partition> = enumerate(Family::Nc, 0, 4)
            .unwrap()
            .into_iter()
            .zip(&mask)
            .filter(|(_, keep)| **keep)
            .map(|(p, _)| p)
            .collect();
        let ops: Vec<_> = members.iter().map(|p| t_of(p, n)).collect();
        prop_assert_eq!(gram_rank(&members, n).unwrap(), span_rank_int(&ops).unwrap());
    }
}

#[test]
fn moments_are_block_weighted_counts() {
    for family in [Family::Nc, Family::Nc2, Family::NcEv] {
        for order in 1..=4usize {
            let m = wreath_moments(family, order, 6).unwrap();
            for n in 0..=6 {
                let oracle: usize = enumerate(family, 0, n)
                    .unwrap()
                    .iter()
                    .map(|p| p.block_sizes().iter().map(|&s| order.pow(s as u32 - 1)).product::<usize>())
                    .sum();
                assert_eq!(*m.get(n), BigRational::from_integer(BigInt::from(oracle)), "{family} |G|={order} n={n}");
            }
        }
    }
}

#[test]
fn trivial_actions_scale_with_the_set() {
    let nc = CategorySpec::Uncoloured(Family::Nc);
    let group = FiniteGroup::cyclic(2).unwrap();
    for size in 1..=3usize {
        let action = GroupAction::trivial(group.clone(), size);
        for points in 1..=2 {
            let count = enumerate(Family::Nc, 0, points).unwrap().len();
            assert_eq!(rank_alpha(&nc, &action, 3, points).unwrap(), size.pow(points as u32) * count);
        }
    }
}
