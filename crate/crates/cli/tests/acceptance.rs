//! Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;

use pwreath_cli::report::normalize;
use pwreath_core::actions::{rank_alpha, reduce_action, reduction_preserves_operators, GroupAction};
use pwreath_core::categories::{canonical_coloured, words, CategorySpec};
use pwreath_core::freeprob::{
    cumulants_to_moments, free_poisson, law_moments, moments_to_cumulants, mult_conv_with_mu_g, semicircle,
    wreath_moments, DiscreteLaw,
};
use pwreath_core::fusion::{cross_check_dim, FusionSet, FusionWord, FormalSum};
use pwreath_core::groups::FiniteGroup;
use pwreath_core::operators::{
    converse_fixed_space, dim_mor_averaged, m_of, span_rank_int, t_of, verify_equivariance, verify_f_composition,
    verify_m_composition, verify_projections, verify_t_composition,
};
use pwreath_core::partitions::{enumerate, Family};

type Outcome = Result<(bool, String), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn z(n: usize) -> FiniteGroup {
    FiniteGroup::cyclic(n).expect("cyclic group")
}

fn klein() -> FiniteGroup {
    FiniteGroup::abelian(&[2, 2]).expect("Z2xZ2")
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn ints(values: &[i64]) -> Vec<BigRational> {
    values.iter().map(|&v| int(v)).collect()
}

fn composition_law() -> Outcome {
    let report = verify_t_composition(3, &[2, 3, 4, 5]);
    Ok((
        report.is_clean() && report.cases > 0,
        format!("{} cases, {} violations", report.cases, report.violations.len()),
    ))
}

fn linear_independence() -> Outcome {
    let mut ok = true;
    let mut checked = 0;
    for total in 0..=6 {
        for k in 0..=total {
            let members = enumerate(Family::Nc, k, total - k).map_err(err)?;
            let ops: Vec<_> = members.iter().map(|p| t_of(p, 4)).collect();
            ok &= span_rank_int(&ops).map_err(err)? == members.len();
            checked += 1;
        }
    }
    let mut drops = Vec::new();
    for k in 0..=4 {
        let members = enumerate(Family::Nc, k, 4 - k).map_err(err)?;
        let ops: Vec<_> = members.iter().map(|p| t_of(p, 2)).collect();
        let rank = span_rank_int(&ops).map_err(err)?;
        drops.push(rank);
        ok &= rank < members.len();
    }
    Ok((ok, format!("{checked} spaces full rank at N=4; N=2 ranks at 4 points {drops:?} < 14")))
}

fn averaged_composition() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, group) in [("Z2", z(2)), ("Z3", z(3)), ("S3", FiniteGroup::symmetric(3).map_err(err)?)] {
        let report = verify_m_composition(&group, 2, 4).map_err(err)?;
        ok &= report.is_clean() && report.cases > 0;
        parts.push(format!(
            "{name}: {} cases ({} fingerprinted), {} violations",
            report.cases,
            report.fingerprinted,
            report.violations.len()
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn moment_cross_check() -> Outcome {
    let mut ok = true;
    for family in [Family::Nc, Family::Nc2, Family::NcEv] {
        for group in [z(2), z(3)] {
            let m = wreath_moments(family, group.order(), 4).map_err(err)?;
            for n in 1..=4 {
                let rank = dim_mor_averaged(family, &group, 4, 0, n).map_err(err)?;
                ok &= *m.get(n) == int(rank as i64);
            }
        }
    }
    let expected = [
        (Family::Nc, [1, 1, 3, 11, 45]),
        (Family::Nc2, [1, 0, 2, 0, 8]),
        (Family::NcEv, [1, 0, 2, 0, 16]),
    ];
    for (family, values) in expected {
        ok &= wreath_moments(family, 2, 4).map_err(err)?.values() == ints(&values).as_slice();
    }
    Ok((ok, "NC, NC2, NCEV over Z2, Z3 at N=4, n <= 4".into()))
}

fn cumulant_identities() -> Outcome {
    let mut ok = true;
    for g in [2i64, 3] {
        let kappa = |family| -> Result<Vec<BigRational>, String> {
            let m = wreath_moments(family, g as usize, 6).map_err(err)?;
            Ok(moments_to_cumulants(&m).map_err(err)?.values().to_vec())
        };
        ok &= kappa(Family::Nc)? == (0..6).map(|n| int(g.pow(n))).collect::<Vec<_>>();
        ok &= kappa(Family::Nc2)? == ints(&[0, g, 0, 0, 0, 0]);
        let law = law_moments(&DiscreteLaw::ncev_initial(g as usize).map_err(err)?, 6);
        ok &= kappa(Family::NcEv)?.as_slice() == &law.values()[1..];
    }
    Ok((ok, "n <= 6, |G| in {2, 3}".into()))
}

fn negative_convolution() -> Outcome {
    let sc2 = cumulants_to_moments(&semicircle(int(2), 4)).map_err(err)?;
    let sc1 = cumulants_to_moments(&semicircle(int(1), 4)).map_err(err)?;
    let conv = mult_conv_with_mu_g(&sc1, 2).map_err(err)?;
    let ok = *sc2.get(4) == int(8) && *conv.get(4) == int(4) && sc2.get(4) != conv.get(4);
    Ok((ok, format!("m4 semicircle(2) = {}, m4 mu_G boxtimes sc(1) = {}", sc2.get(4), conv.get(4))))
}

fn positive_convolution() -> Outcome {
    let poisson = cumulants_to_moments(&free_poisson(int(1), 6)).map_err(err)?;
    let mut ok = true;
    for g in [2, 3] {
        ok &= wreath_moments(Family::Nc, g, 6).map_err(err)? == mult_conv_with_mu_g(&poisson, g).map_err(err)?;
    }
    Ok((ok, "n <= 6, |G| in {2, 3}".into()))
}

fn f_suite() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, group) in [("Z2", z(2)), ("Z3", z(3))] {
        let report = verify_f_composition(&group, 2, 4).map_err(err)?;
        ok &= report.is_clean() && report.cases > 0;
        parts.push(format!("{name}: {} cases, {} violations", report.cases, report.violations.len()));
    }
    Ok((ok, parts.join("; ")))
}

fn basic_projections() -> Outcome {
    let mut ok = true;
    let mut cases = 0;
    for group in [z(2), z(3), klein()] {
        for n in 1..=4 {
            let report = verify_projections(&group, n).map_err(err)?;
            ok &= report.is_clean();
            cases += report.cases;
        }
    }
    Ok((ok, format!("{cases} cases over Z2, Z3, Z2xZ2 and N <= 4")))
}

fn fusion_structure() -> Outcome {
    let mut ok = true;
    // S(NC[Γ]) is Γ: one-letter classes multiply like group elements
    for group in [z(2), z(3), klein()] {
        let set = FusionSet::new(CategorySpec::GammaColoured(Family::Nc, group.clone()), 3).map_err(err)?;
        ok &= set.len() == group.order();
        let letter = |a: usize| set.classes()[a].word.first().copied();
        for a in 0..set.len() {
            for b in 0..set.len() {
                let star = set.star(a, b).map_err(err)?.and_then(letter);
                ok &= match (letter(a), letter(b)) {
                    (Some(x), Some(y)) => star == Some(group.mul(x, y)),
                    _ => false,
                };
            }
        }
    }
    // S(NC_ev[Ĝ]) is Ĝ x Z2 with the four star rules
    for group in [z(2), z(3)] {
        let set = FusionSet::new(CategorySpec::GammaColoured(Family::NcEv, group.clone()), 3).map_err(err)?;
        ok &= set.len() == 2 * group.order();
        let e = group.identity();
        let class = |w: &[usize]| set.class_of(w).map_err(err)?.ok_or_else(|| format!("no class for {w:?}"));
        for chi in 0..group.order() {
            for rho in 0..group.order() {
                let prod = group.mul(chi, rho);
                let (odd_a, even_a) = (class(&[chi])?, class(&[chi, e])?);
                let (odd_b, even_b) = (class(&[rho])?, class(&[rho, e])?);
                let (odd_p, even_p) = (class(&[prod])?, class(&[prod, e])?);
                ok &= set.star(odd_a, odd_b).map_err(err)? == Some(even_p);
                ok &= set.star(odd_a, even_b).map_err(err)? == Some(odd_p);
                ok &= set.star(even_a, odd_b).map_err(err)? == Some(odd_p);
                ok &= set.star(even_a, even_b).map_err(err)? == Some(even_p);
            }
        }
    }
    // NC2: a ⊗ a = aa + 1 and a^n ⊗ a = a^(n+1) + a^(n-1) up to length 4
    let set = FusionSet::new(CategorySpec::Uncoloured(Family::Nc2), 4).map_err(err)?;
    ok &= set.len() == 1;
    for n in 1..=3 {
        let mut expected = FormalSum::zero();
        expected.add(FusionWord(vec![0; n + 1]), 1);
        expected.add(FusionWord(vec![0; n - 1]), 1);
        ok &= set.tensor(&FusionWord(vec![0; n]), &FusionWord::letter(0)).map_err(err)? == expected;
    }
    Ok((ok, "NC[Z2], NC[Z3], NC[Z2xZ2]; NCEV[Z2], NCEV[Z3]; NC2 to length 4".into()))
}

fn fusion_rank() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for spec in [
        CategorySpec::Uncoloured(Family::Nc2),
        CategorySpec::Uncoloured(Family::Nc),
        CategorySpec::GammaColoured(Family::Nc, z(2)),
    ] {
        let set = FusionSet::new(spec.clone(), 4).map_err(err)?;
        let alphabet = set.spec().colour_set().len();
        let all: Vec<Vec<usize>> = (0..=4).flat_map(|n| words(alphabet, n)).collect();
        let checks = cross_check_dim(&set, &all, 4).map_err(err)?;
        let bad = checks.iter().filter(|c| !c.agrees()).count();
        ok &= bad == 0;
        parts.push(format!("{spec}: {} pairs, {bad} disagree", checks.len()));
    }
    Ok((ok, parts.join("; ")))
}

fn equivariance() -> Outcome {
    let mut ok = true;
    let mut cases = 0;
    for group in [z(2), z(3)] {
        for n in 1..=3 {
            let report = verify_equivariance(Family::All, &group, n, 4).map_err(err)?;
            ok &= report.is_clean();
            cases += report.cases;
        }
    }
    let fixed = converse_fixed_space(&z(2), 2, 1, 1).map_err(err)?;
    ok &= fixed.fixed_dim == fixed.orbit_count;
    Ok((
        ok,
        format!(
            "{cases} forward cases; converse ALL k=l=1 N=2 Z2: fixed {} vs {} canonical forms",
            fixed.fixed_dim, fixed.orbit_count
        ),
    ))
}

fn action_degenerations() -> Outcome {
    let nc = CategorySpec::Uncoloured(Family::Nc);
    let mut ok = true;
    let trivial = GroupAction::trivial(z(2), 1);
    let regular = GroupAction::regular(z(2));
    let doubled = GroupAction::trivial(z(2), 2);
    let mut scaling = Vec::new();
    for n in 1..=3 {
        let count = enumerate(Family::Nc, 0, n).map_err(err)?.len();
        ok &= rank_alpha(&nc, &trivial, 4, n).map_err(err)? == count;
        let regular_wreath: Vec<_> = canonical_coloured(Family::Nc, &z(2), 0, n)
            .map_err(err)?
            .iter()
            .map(|p| m_of(p, &z(2), 4))
            .collect();
        ok &= rank_alpha(&nc, &regular, 4, n).map_err(err)? == span_rank_int(&regular_wreath).map_err(err)?;
        let doubled_rank = rank_alpha(&nc, &doubled, 4, n).map_err(err)?;
        scaling.push(format!("{doubled_rank} = 2^{n}*{count}"));
        ok &= doubled_rank == (1 << n) * count;
    }
    // Z2xZ2 acting through its first factor has a kernel of order 2
    let group = klein();
    let table = (0..4)
        .map(|g| {
            let flip = group.coords(g).map_err(err)?[0] == 1;
            Ok(if flip { vec![1, 0] } else { vec![0, 1] })
        })
        .collect::<Result<Vec<_>, String>>()?;
    let action = GroupAction::new(group, table).map_err(err)?;
    let reduced = reduce_action(&action).map_err(err)?;
    ok &= reduced.kernel.len() == 2;
    ok &= reduction_preserves_operators(&nc, &action, 2, 3).map_err(err)?;
    Ok((
        ok,
        format!("|X|=1 trivial and regular ranks match for n <= 3; |X|=2 trivial scales as {}", scaling.join(", ")),
    ))
}

fn catalan(n: usize) -> usize {
    let mut c = vec![1usize];
    for m in 1..=n {
        c.push((0..m).map(|i| c[i] * c[m - 1 - i]).sum());
    }
    c[n]
}

fn bell(n: usize) -> usize {
    // Bell triangle
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![*row.last().expect("nonempty")];
        for &v in &row {
            next.push(next.last().expect("nonempty") + v);
        }
        row = next;
    }
    row[0]
}

fn counting_oracles() -> Outcome {
    let count = |family, n| enumerate(family, 0, n).map(|v| v.len()).map_err(err);
    let nc: Vec<usize> = (0..=5).map(|n| count(Family::Nc, n)).collect::<Result<_, _>>()?;
    let all: Vec<usize> = (0..=4).map(|n| count(Family::All, n)).collect::<Result<_, _>>()?;
    let nc2: Vec<usize> = (0..=4).map(|n| count(Family::Nc2, 2 * n)).collect::<Result<_, _>>()?;
    let ncev4 = count(Family::NcEv, 4)?;
    let ok = nc == vec![1, 1, 2, 5, 14, 42]
        && nc == (0..=5).map(catalan).collect::<Vec<_>>()
        && all == vec![1, 1, 2, 5, 15]
        && all == (0..=4).map(bell).collect::<Vec<_>>()
        && nc2 == (0..=4).map(catalan).collect::<Vec<_>>()
        && ncev4 == 3;
    Ok((ok, format!("NC {nc:?}, ALL {all:?}, NC2(0,2n) {nc2:?}, NCEV(0,4) {ncev4}")))
}

const DETERMINISM_CASES: &[&[&str]] = &[
    &["enumerate", "--family", "NC", "--max-points", "6"],
    &["moments", "--category", "NC", "--group-order", "2", "--n-max", "4", "--against-rank", "--N", "4"],
    &["cumulants", "--category", "NCEV", "--group-order", "3"],
    &["fusion", "--spec", "NC2", "--word", "x,xx,xxx", "--decompose", "--cross-check", "--N", "4"],
    &["dim-mor", "--category", "NC", "--points", "2", "2", "--group", "Z2", "--N", "2"],
    &["verify", "--suite", "all", "--group", "Z2", "--N", "2", "--max-points", "2"],
    &["actions", "--N", "2", "--max-points", "2", "--emit", "both"],
];

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("pwreath-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(err)?;
    let action_config = dir.join("action.toml");
    std::fs::write(&action_config, "action = { group = \"Z2\", set_size = 2, map = [[0, 1], [1, 0]] }\n").map_err(err)?;
    let mut ok = true;
    for case in DETERMINISM_CASES {
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let mut command = Command::new(env!("CARGO_BIN_EXE_pwreath"));
            command.args(case.iter());
            if case[0] == "actions" {
                command.arg(&action_config);
            }
            let out = command.env_remove("SOURCE_DATE_EPOCH").output().map_err(err)?;
            ok &= out.status.success();
            outputs.push(normalize(&String::from_utf8_lossy(&out.stdout)));
        }
        ok &= !outputs[0].is_empty() && outputs[0] == outputs[1];
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok((ok, format!("{} subcommands run twice, bodies compared", DETERMINISM_CASES.len())))
}

fn main() {
    let criteria: [Criterion; 15] = [
        ("composition law T_p T_q = N^rl T_pq", composition_law),
        ("linear independence of NC operators", linear_independence),
        ("averaged composition law", averaged_composition),
        ("moments against intertwiner ranks", moment_cross_check),
        ("cumulant identities", cumulant_identities),
        ("semicircle is not mu_G boxtimes sc(1)", negative_convolution),
        ("NC law is mu_G boxtimes free Poisson(1)", positive_convolution),
        ("F operator suite", f_suite),
        ("basic projections", basic_projections),
        ("fusion structure", fusion_structure),
        ("fusion rules against ranks", fusion_rank),
        ("equivariance", equivariance),
        ("action degenerations", action_degenerations),
        ("counting oracles", counting_oracles),
        ("determinism of CLI reports", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (passed, detail) = match check() {
            Ok(result) => result,
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failures += 1;
        }
        println!(
            "{} {:>2} {name}: {detail} [{:.1}s]",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
