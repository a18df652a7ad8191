//! One function per subcommand, each turning a validated config into an [`Outcome`].

use num_rational::BigRational;
use num_traits::One;
use serde_json::json;

use pwreath_core::actions::{
    classify, closure_check_alpha, coloured_action_check, predicted_rank, rank_alpha, reduce_action,
    reduction_preserves_operators, ActionClass,
};
use pwreath_core::categories::{enumerate_members, CategorySpec};
use pwreath_core::cyclo::Cyclo;
use pwreath_core::freeprob::{
    compound_free_poisson, cumulants_to_moments, free_poisson, moments_to_cumulants, mult_conv_with_mu_g, semicircle,
    wreath_moments, CumulantSequence, DiscreteLaw, MomentSequence, BLOCK_WEIGHT_NOTE,
};
use pwreath_core::fusion::{cross_check_dim, FusionSet, FusionWord};
use pwreath_core::groups::FiniteGroup;
use pwreath_core::operators::{
    dim_mor_averaged, dim_mor_coloured, gram_rank, verify_equivariance, verify_f_composition, verify_f_structure,
    verify_irrep_projections, verify_m_composition, verify_projections, verify_t_composition, Irrep,
    VerificationReport,
};
use pwreath_core::partitions::{enumerate, ColourSet, ColouredPartition, Family};

use crate::config::{RunConfig, Subcommand, Suite};
use crate::error::{CliError, CliResult};
use crate::report::{Outcome, Table};

/// Largest `n` of the moment-versus-rank cross-check; beyond it operators outgrow memory.
pub const RANK_CHECK_MAX: usize = 4;
/// Colour words up to this length are used when none are given.
pub const DEFAULT_WORDS_LEN: usize = 2;
/// Largest side of the uncoloured composition sweep.
pub const T_SIDE_MAX: usize = 3;

pub fn run(config: &RunConfig) -> CliResult<Outcome> {
    match config.subcommand {
        Subcommand::Enumerate => enumerate_cmd(config),
        Subcommand::Moments => moments_cmd(config),
        Subcommand::Cumulants => cumulants_cmd(config),
        Subcommand::Fusion => fusion_cmd(config),
        Subcommand::DimMor => dim_mor_cmd(config),
        Subcommand::Verify => verify_cmd(config),
        Subcommand::Actions => actions_cmd(config),
    }
}

fn show(p: &ColouredPartition, colours: &ColourSet) -> String {
    if colours.len() == 1 {
        p.base.to_string()
    } else {
        p.to_text(colours)
    }
}

/// A colour word: names separated by whitespace, or concatenated when every
/// name is a single character (`"wb"`, `"0 1"`, `"0.1 1.0"`). A token that is
/// not a name may be a colour index. `""` and `"()"` are empty.
pub fn parse_colour_word(text: &str, colours: &ColourSet) -> CliResult<Vec<usize>> {
    let text = text.trim();
    if text.is_empty() || text == "()" {
        return Ok(Vec::new());
    }
    let lookup = |token: &str| {
        colours
            .index_of(token)
            .or_else(|| token.parse::<usize>().ok().filter(|&i| i < colours.len()))
            .ok_or_else(|| CliError::Config(format!("unknown colour `{token}` in word `{text}`")))
    };
    if text.contains(char::is_whitespace) {
        return text.split_whitespace().map(lookup).collect();
    }
    if let Some(single) = colours.index_of(text) {
        return Ok(vec![single]);
    }
    if single_char_names(colours) {
        return text.chars().map(|c| lookup(&c.to_string())).collect();
    }
    lookup(text).map(|c| vec![c])
}

fn single_char_names(colours: &ColourSet) -> bool {
    colours.names().iter().all(|n| n.chars().count() == 1)
}

fn colour_word_label(word: &[usize], colours: &ColourSet) -> String {
    if word.is_empty() {
        return "()".into();
    }
    let sep = if single_char_names(colours) { "" } else { " " };
    word.iter().map(|&c| colours.name(c)).collect::<Vec<_>>().join(sep)
}

fn enumerate_cmd(config: &RunConfig) -> CliResult<Outcome> {
    let spec = config.category_spec()?;
    let colours = spec.colour_set();
    let mut out = Outcome::default();
    out.set("category", spec.to_string());
    let mut table = Table::new("counts", &["k", "l", "count"]);
    match config.points {
        Some([k, l]) => {
            let members = enumerate_members(&spec, k, l)?;
            table.push(vec![k.to_string(), l.to_string(), members.len().to_string()]);
            out.set("k", k);
            out.set("l", l);
            out.set("count", members.len());
            if config.list {
                out.set("members", members.iter().map(|p| show(p, &colours)).collect::<Vec<_>>());
            }
        }
        None => {
            let mut counts = Vec::new();
            for n in 0..=config.max_points {
                let count = enumerate_members(&spec, 0, n)?.len();
                table.push(vec!["0".into(), n.to_string(), count.to_string()]);
                counts.push(count);
            }
            out.set("counts_0_n", counts);
        }
    }
    out.tables.push(table);
    Ok(out)
}

fn rational_text(values: &[BigRational]) -> Vec<String> {
    values.iter().map(|v| v.to_string()).collect()
}

fn group_order(config: &RunConfig) -> CliResult<usize> {
    match (config.group_order, config.group()?) {
        (Some(o), Some(g)) if o != g.order() => Err(CliError::Config(format!(
            "group_order {o} disagrees with the group of order {}",
            g.order()
        ))),
        (Some(o), _) => Ok(o),
        (None, Some(g)) => Ok(g.order()),
        (None, None) => Ok(2),
    }
}

/// Closed forms of the character law that the moments must satisfy, by family.
fn law_identities(family: Family, order: usize, m: &MomentSequence, kappa: &CumulantSequence) -> CliResult<Vec<(String, bool)>> {
    let n_max = m.n_max();
    let g = BigRational::from_integer(order.into());
    let mut checks = Vec::new();
    match family {
        Family::Nc => {
            let expected: Vec<BigRational> = (0..n_max).map(|i| num_traits::pow(g.clone(), i)).collect();
            checks.push(("free cumulants equal |G|^(n-1)".into(), kappa.values() == expected.as_slice()));
            let poisson = cumulants_to_moments(&free_poisson(BigRational::one(), n_max))?;
            let law = mult_conv_with_mu_g(&poisson, order)?;
            checks.push(("law equals mu_G boxtimes free Poisson(1)".into(), law == *m));
        }
        Family::Nc2 => {
            checks.push((
                "semicircle of variance |G|".into(),
                kappa.values() == semicircle(g, n_max).values(),
            ));
        }
        Family::NcEv => {
            let initial = DiscreteLaw::ncev_initial(order)?;
            let compound = compound_free_poisson(&initial, &BigRational::one(), n_max);
            checks.push((
                "compound free Poisson with the three-atom initial law".into(),
                kappa.values() == compound.values(),
            ));
        }
        _ => {}
    }
    Ok(checks)
}

fn moments_cmd(config: &RunConfig) -> CliResult<Outcome> {
    let family = config.family()?;
    let order = group_order(config)?;
    let m = wreath_moments(family, order, config.n_max)?;
    let kappa = moments_to_cumulants(&m)?;
    let mut out = Outcome::default();
    out.set("family", family.name());
    out.set("group_order", order);
    out.set("moments", rational_text(&m.values()[1..]));
    out.set("cumulants", rational_text(kappa.values()));
    out.notes.push(BLOCK_WEIGHT_NOTE.to_string());

    let ranks = if config.against_rank {
        let group = match config.group()? {
            Some(g) => g,
            None => FiniteGroup::cyclic(order)?,
        };
        let top = config.n_max.min(RANK_CHECK_MAX);
        if top < config.n_max {
            out.notes.push(format!("rank cross-check limited to n <= {RANK_CHECK_MAX}"));
        }
        let ranks = (1..=top)
            .map(|n| dim_mor_averaged(family, &group, config.n, 0, n))
            .collect::<pwreath_core::Result<Vec<_>>>()?;
        Some(ranks)
    } else {
        None
    };

    let mut columns = vec!["n", "moment", "cumulant"];
    if ranks.is_some() {
        columns.extend(["rank", "agrees"]);
    }
    let mut table = Table::new("moments", &columns);
    let mut agreement = Vec::new();
    for n in 1..=config.n_max {
        let mut row = vec![n.to_string(), m.get(n).to_string(), kappa.get(n).to_string()];
        if let Some(ranks) = &ranks {
            match ranks.get(n - 1) {
                Some(&rank) => {
                    let agrees = *m.get(n) == BigRational::from_integer(rank.into());
                    if !agrees {
                        out.violations
                            .push(format!("moment m_{n} = {} but the rank is {rank}", m.get(n)));
                    }
                    agreement.push(agrees);
                    row.extend([rank.to_string(), agrees.to_string()]);
                }
                None => row.extend([String::new(), String::new()]),
            }
        }
        table.push(row);
    }
    if let Some(ranks) = ranks {
        out.set("N", config.n);
        out.set("ranks", ranks);
        out.set("rank_agreement", agreement);
    }
    identities_into(&mut out, law_identities(family, order, &m, &kappa)?);
    out.tables.push(table);
    Ok(out)
}

fn identities_into(out: &mut Outcome, checks: Vec<(String, bool)>) {
    let mut map = serde_json::Map::new();
    for (name, ok) in checks {
        if !ok {
            out.violations.push(format!("identity fails: {name}"));
        }
        map.insert(name, json!(ok));
    }
    out.set("identities", map);
}

fn cumulants_cmd(config: &RunConfig) -> CliResult<Outcome> {
    let mut out = Outcome::default();
    let (m, family_order) = if config.moments.is_empty() {
        let family = config.family()?;
        let order = group_order(config)?;
        out.set("family", family.name());
        out.set("group_order", order);
        (wreath_moments(family, order, config.n_max)?, Some((family, order)))
    } else {
        let mut values = vec![BigRational::one()];
        for text in &config.moments {
            values.push(
                text.trim()
                    .parse::<BigRational>()
                    .map_err(|_| CliError::Config(format!("bad moment `{text}`")))?,
            );
        }
        (MomentSequence::new(values)?, None)
    };
    let kappa = moments_to_cumulants(&m)?;
    out.set("moments", rational_text(&m.values()[1..]));
    out.set("cumulants", rational_text(kappa.values()));
    let mut table = Table::new("cumulants", &["n", "moment", "cumulant"]);
    for n in 1..=m.n_max() {
        table.push(vec![n.to_string(), m.get(n).to_string(), kappa.get(n).to_string()]);
    }
    out.tables.push(table);
    if let Some((family, order)) = family_order {
        out.notes.push(BLOCK_WEIGHT_NOTE.to_string());
        identities_into(&mut out, law_identities(family, order, &m, &kappa)?);
    }
    // round trip back to moments as an internal consistency check
    if cumulants_to_moments(&kappa)? != m {
        out.violations.push("cumulants do not reproduce the moments".into());
    }
    Ok(out)
}

fn fusion_cmd(config: &RunConfig) -> CliResult<Outcome> {
    let spec = config.category_spec()?;
    let colours = spec.colour_set();
    let set = FusionSet::new(spec.clone(), config.max_word_len)?;
    let mut out = Outcome::default();
    out.set("category", spec.to_string());
    out.set("block_stable", set.is_block_stable());

    let mut classes = Table::new("classes", &["index", "label", "representative", "conjugate"]);
    for class in set.classes() {
        classes.push(vec![
            class.index.to_string(),
            set.class_label(class.index),
            colour_word_label(&class.word, &colours),
            set.class_label(set.conj(class.index)?),
        ]);
    }
    out.set("classes", set.classes().iter().map(|c| set.class_label(c.index)).collect::<Vec<_>>());
    let star: Vec<Vec<String>> = set
        .star_table()?
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| c.map_or_else(|| "EMPTY".to_string(), |c| set.class_label(c)))
                .collect()
        })
        .collect();
    out.set("star_table", star);
    out.tables.push(classes);

    if set.is_block_stable() {
        let mut tensor = Table::new("tensor", &["left", "right", "product"]);
        for a in 0..set.len() {
            for b in 0..set.len() {
                let sum = set.tensor(&FusionWord::letter(a), &FusionWord::letter(b))?;
                tensor.push(vec![set.class_label(a), set.class_label(b), set.sum_label(&sum)]);
            }
        }
        out.tables.push(tensor);
    } else {
        out.notes
            .push("the category is not block-stable, so no fusion rules are derived".into());
    }

    let words = if config.words.is_empty() {
        (1..=DEFAULT_WORDS_LEN)
            .flat_map(|n| pwreath_core::categories::words(colours.len(), n))
            .collect()
    } else {
        config
            .words
            .iter()
            .map(|w| parse_colour_word(w, &colours))
            .collect::<CliResult<Vec<_>>>()?
    };
    if config.decompose {
        let mut table = Table::new("decompositions", &["word", "decomposition"]);
        let mut map = serde_json::Map::new();
        for w in &words {
            let sum = set.decompose(w)?;
            let label = set.sum_label(&sum);
            table.push(vec![colour_word_label(w, &colours), label.clone()]);
            let terms: Vec<_> = sum
                .terms()
                .map(|(word, count)| json!({ "word": set.word_label(word), "multiplicity": count }))
                .collect();
            map.insert(colour_word_label(w, &colours), json!({ "sum": label, "terms": terms }));
        }
        out.set("decompositions", map);
        out.tables.push(table);
    }
    if config.cross_check {
        let mut table = Table::new("cross_check", &["upper", "lower", "fusion", "rank", "agrees"]);
        for check in cross_check_dim(&set, &words, config.n)? {
            if !check.agrees() {
                out.violations.push(format!(
                    "dim Mor({}, {}) is {} but the fusion rules give {}",
                    colour_word_label(&check.upper, &colours),
                    colour_word_label(&check.lower, &colours),
                    check.rank,
                    check.fusion
                ));
            }
            table.push(vec![
                colour_word_label(&check.upper, &colours),
                colour_word_label(&check.lower, &colours),
                check.fusion.to_string(),
                check.rank.to_string(),
                check.agrees().to_string(),
            ]);
        }
        out.set("N", config.n);
        out.tables.push(table);
    }
    Ok(out)
}

fn dim_mor_cmd(config: &RunConfig) -> CliResult<Outcome> {
    let mut out = Outcome::default();
    let mut table = Table::new("dim_mor", &["route", "source", "target", "N", "rank"]);
    let (route, source, target, rank) = match config.points {
        Some([k, l]) => {
            let family = config.family()?;
            match config.group()? {
                Some(group) => (
                    format!("averaged {}^{}", family.name(), group),
                    k.to_string(),
                    l.to_string(),
                    dim_mor_averaged(family, &group, config.n, k, l)?,
                ),
                None => (
                    family.name().to_string(),
                    k.to_string(),
                    l.to_string(),
                    gram_rank(&enumerate(family, k, l)?, config.n)?,
                ),
            }
        }
        None => {
            let spec = config.category_spec()?;
            let colours = spec.colour_set();
            let upper = parse_colour_word(&config.upper, &colours)?;
            let lower = parse_colour_word(&config.lower, &colours)?;
            (
                spec.to_string(),
                colour_word_label(&upper, &colours),
                colour_word_label(&lower, &colours),
                dim_mor_coloured(&spec, config.n, &upper, &lower)?,
            )
        }
    };
    table.push(vec![route.clone(), source.clone(), target.clone(), config.n.to_string(), rank.to_string()]);
    out.set("route", route);
    out.set("source", source);
    out.set("target", target);
    out.set("N", config.n);
    out.set("rank", rank);
    out.tables.push(table);
    Ok(out)
}

fn build_irreps(config: &RunConfig, group: &FiniteGroup) -> CliResult<Vec<Irrep>> {
    config
        .irreps
        .iter()
        .map(|spec| {
            let generators = spec
                .generators
                .iter()
                .map(|g| {
                    if g.element >= group.order() {
                        return Err(CliError::Config(format!("element {} outside the group", g.element)));
                    }
                    let matrix = g
                        .matrix
                        .iter()
                        .map(|row| row.iter().map(|e| e.parse::<Cyclo>()).collect())
                        .collect::<pwreath_core::Result<Vec<Vec<Cyclo>>>>()?;
                    Ok((g.element, matrix))
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok(Irrep::from_generators(group, &generators)?)
        })
        .collect()
}

fn verify_cmd(config: &RunConfig) -> CliResult<Outcome> {
    let suites: Vec<Suite> = match config.suite {
        Suite::All => vec![Suite::T, Suite::M, Suite::F, Suite::P, Suite::Equivariance],
        one => vec![one],
    };
    let mut out = Outcome::default();
    let mut reports: Vec<VerificationReport> = Vec::new();
    let mut group = None;
    for suite in suites {
        if suite != Suite::T && group.is_none() {
            group = Some(config.require_group()?);
        }
        let report = match suite {
            Suite::T => {
                if config.max_points > T_SIDE_MAX {
                    return Err(pwreath_core::Error::BoundExceeded {
                        what: "T side",
                        requested: config.max_points,
                        limit: T_SIDE_MAX,
                    }
                    .into());
                }
                verify_t_composition(config.max_points, &[config.n])
            }
            Suite::M => verify_m_composition(group.as_ref().expect("set above"), config.n, config.max_points)?,
            Suite::F => {
                let g = group.as_ref().expect("set above");
                if !g.is_commutative() {
                    if config.suite == Suite::All {
                        out.notes.push("F suite skipped: the group is not abelian".into());
                        continue;
                    }
                    return Err(pwreath_core::Error::NonAbelian.into());
                }
                let mut report = verify_f_composition(g, config.n, config.max_points)?;
                report.merge(verify_f_structure(g, config.n, config.max_points)?);
                report
            }
            Suite::P => {
                let g = group.as_ref().expect("set above");
                if g.is_commutative() {
                    verify_projections(g, config.n)?
                } else if config.irreps.is_empty() {
                    if config.suite == Suite::All {
                        out.notes.push("P suite skipped: a non-abelian group needs irreps in the config".into());
                        continue;
                    }
                    return Err(CliError::Config("a non-abelian group needs `irreps` for the P suite".into()));
                } else {
                    verify_irrep_projections(&build_irreps(config, g)?, g, config.n)?
                }
            }
            Suite::Equivariance => {
                verify_equivariance(config.family()?, group.as_ref().expect("set above"), config.n, config.max_points)?
            }
            Suite::All => unreachable!("expanded above"),
        };
        reports.push(report);
    }
    if let Some(g) = &group {
        out.set("group", g.to_string());
    }
    out.set("N", config.n);
    out.set("max_points", config.max_points);
    let mut table = Table::new("suites", &["suite", "cases", "fingerprinted", "violations"]);
    let mut summaries = Vec::new();
    for report in &reports {
        table.push(vec![
            report.suite.clone(),
            report.cases.to_string(),
            report.fingerprinted.to_string(),
            report.violations.len().to_string(),
        ]);
        summaries.push(json!({
            "suite": report.suite,
            "cases": report.cases,
            "fingerprinted": report.fingerprinted,
            "violations": report.violations,
        }));
        out.violations
            .extend(report.violations.iter().map(|v| format!("[{}] {v}", report.suite)));
    }
    out.set("suites", summaries);
    out.tables.push(table);
    Ok(out)
}

fn actions_cmd(config: &RunConfig) -> CliResult<Outcome> {
    let action = config.action()?;
    let spec = config.category_spec()?;
    let mut out = Outcome::default();
    out.set("category", spec.to_string());
    out.set("group", action.group().to_string());
    out.set("set_size", action.set_size());
    out.set("orbits", action.orbits());
    out.set(
        "stabilizers",
        (0..action.set_size()).map(|x| action.stabilizer(x)).collect::<Vec<_>>(),
    );
    out.set("kernel", action.kernel());
    out.set("faithful", action.is_faithful());
    let class = classify(&action);
    out.set("classification", class.to_string());
    out.set("identification", class.identification());
    if let ActionClass::Transitive { stabilizer, core } = &class {
        out.set("stabilizer", stabilizer);
        out.set("core", core);
    }
    if let Some(involution) = &config.involution {
        let coloured = coloured_action_check(&action, involution)?;
        out.set("coloured", coloured);
        if !coloured {
            out.notes
                .push("the action does not commute with the colour involution".into());
        }
    }

    let family = match &spec {
        CategorySpec::Uncoloured(f) => Some(*f),
        _ => None,
    };
    let mut ranks = Table::new("ranks", &["points", "rank", "predicted"]);
    for points in 1..=config.max_points {
        let rank = rank_alpha(&spec, &action, config.n, points)?;
        let predicted = match family {
            Some(f) => predicted_rank(&action, f, config.n, points)?,
            None => None,
        };
        if let Some(p) = predicted {
            if p != rank {
                out.violations
                    .push(format!("rank {rank} at {points} points, predicted {p}"));
            }
        }
        ranks.push(vec![
            points.to_string(),
            rank.to_string(),
            predicted.map_or_else(String::new, |p| p.to_string()),
        ]);
    }
    out.tables.push(ranks);

    let closure = closure_check_alpha(&spec, &action, config.n, config.max_points)?;
    out.set(
        "closure",
        json!({
            "compositions": closure.compositions,
            "tensors": closure.tensors,
            "involutions": closure.involutions,
            "closed": closure.is_closed(),
        }),
    );
    out.violations
        .extend(closure.failures.iter().map(|f| format!("not closed: {f}")));

    let reduced = reduce_action(&action)?;
    let preserved = reduction_preserves_operators(&spec, &action, config.n, config.max_points)?;
    out.set(
        "reduction",
        json!({
            "kernel": reduced.kernel,
            "quotient": reduced.action.group().to_string(),
            "operators_preserved": preserved,
        }),
    );
    if !preserved {
        out.violations
            .push("operators change under reduction to the faithful action".into());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Settings;
    use std::path::PathBuf;

    fn run_toml(sub: Subcommand, text: &str) -> Outcome {
        let config = RunConfig::resolve(sub, Settings::from_toml(text).unwrap(), PathBuf::from(".")).unwrap();
        run(&config).unwrap()
    }

    #[test]
    fn enumerate_nc_four() {
        let out = run_toml(Subcommand::Enumerate, "category = \"NC\"\npoints = [0, 4]");
        assert_eq!(out.results["count"], json!(14));
        let sweep = run_toml(Subcommand::Enumerate, "category = \"NC\"\nmax_points = 5");
        assert_eq!(sweep.results["counts_0_n"], json!([1, 1, 2, 5, 14, 42]));
    }

    #[test]
    fn moments_with_rank() {
        let out = run_toml(
            Subcommand::Moments,
            "category = \"NC\"\ngroup_order = 2\nn_max = 4\nagainst_rank = true\nN = 4",
        );
        assert_eq!(out.results["moments"], json!(["1", "3", "11", "45"]));
        assert_eq!(out.results["rank_agreement"], json!([true, true, true, true]));
        assert!(out.violations.is_empty(), "{:?}", out.violations);
        assert!(out.notes.iter().any(|n| n.contains("|G|^(|b|-1)")));
    }

    #[test]
    fn cumulants_from_values() {
        let out = run_toml(Subcommand::Cumulants, "moments = [\"0\", \"1\", \"0\", \"2\"]");
        assert_eq!(out.results["cumulants"], json!(["0", "1", "0", "0"]));
        let nc2 = run_toml(Subcommand::Cumulants, "category = \"NC2\"\ngroup_order = 3\nn_max = 6");
        assert_eq!(nc2.results["cumulants"], json!(["0", "3", "0", "0", "0", "0"]));
        assert!(nc2.violations.is_empty());
    }

    #[test]
    fn fusion_nc2() {
        let out = run_toml(
            Subcommand::Fusion,
            "category = \"NC2\"\nwords = [\"x\", \"xx\"]\ndecompose = true\ncross_check = true\nN = 4",
        );
        assert_eq!(out.results["block_stable"], json!(true));
        assert!(out.violations.is_empty(), "{:?}", out.violations);
        let table = out.tables.iter().find(|t| t.name == "decompositions").unwrap();
        assert_eq!(table.rows[1][1], "1 + [x][x]");
    }

    #[test]
    fn dim_mor_routes() {
        let uncoloured = run_toml(Subcommand::DimMor, "category = \"NC\"\npoints = [2, 2]\nN = 4");
        assert_eq!(uncoloured.results["rank"], json!(14));
        let coloured = run_toml(
            Subcommand::DimMor,
            "category = \"NC\"\ncolouring = \"gamma\"\ngroup = \"Z2\"\nupper = \"0\"\nlower = \"0\"\nN = 4",
        );
        assert_eq!(coloured.results["rank"], json!(2));
        let sigma = run_toml(
            Subcommand::DimMor,
            "category = \"NC\"\ncolouring = \"gamma\"\ngroup = \"Z2\"\nupper = \"1\"\nlower = \"1\"\nN = 4",
        );
        // the split singletons fail the per-block product rule
        assert_eq!(sigma.results["rank"], json!(1));
    }

    #[test]
    fn verify_small() {
        let out = run_toml(Subcommand::Verify, "suite = \"all\"\ngroup = \"Z2\"\nmax_points = 2");
        assert!(out.violations.is_empty(), "{:?}", out.violations);
        assert_eq!(out.results["suites"].as_array().unwrap().len(), 5);
    }

    #[test]
    fn verify_nonabelian_projections() {
        let text = r#"
            suite = "P"
            group = "S3"
            N = 1
            [[irreps]]
            generators = [{ element = 1, matrix = [["1"]] }, { element = 2, matrix = [["1"]] }]
        "#;
        let config = RunConfig::resolve(Subcommand::Verify, Settings::from_toml(text).unwrap(), PathBuf::new()).unwrap();
        let out = run(&config).unwrap();
        assert!(out.violations.is_empty(), "{:?}", out.violations);
        let with_sign = format!("{text}\n[[irreps]]\ngenerators = [{{ element = 1, matrix = [[\"-1\"]] }}, {{ element = 2, matrix = [[\"-1\"]] }}]\n");
        let config = RunConfig::resolve(Subcommand::Verify, Settings::from_toml(&with_sign).unwrap(), PathBuf::new()).unwrap();
        assert!(run(&config).unwrap().violations.is_empty());
    }

    #[test]
    fn actions_regular() {
        let out = run_toml(
            Subcommand::Actions,
            "action = { group = \"Z2\", set_size = 2, map = [[0, 1], [1, 0]] }\nmax_points = 2\nN = 2",
        );
        assert_eq!(out.results["classification"], json!("free"));
        assert!(out.violations.is_empty(), "{:?}", out.violations);
    }

    #[test]
    fn colour_words() {
        let set = pwreath_core::categories::two_colours();
        assert_eq!(parse_colour_word("wb", &set).unwrap(), vec![0, 1]);
        assert_eq!(parse_colour_word("w b", &set).unwrap(), vec![0, 1]);
        assert_eq!(parse_colour_word("()", &set).unwrap(), Vec::<usize>::new());
        assert!(parse_colour_word("wq", &set).is_err());
        let klein = FiniteGroup::abelian(&[2, 2]).unwrap().colour_set();
        assert_eq!(parse_colour_word("0.1 1.0", &klein).unwrap().len(), 2);
        assert_eq!(colour_word_label(&[1, 2], &klein), "0.1 1.0");
        assert_eq!(parse_colour_word("2", &klein).unwrap(), vec![2]);
        let z2 = FiniteGroup::cyclic(2).unwrap().colour_set();
        assert_eq!(parse_colour_word("01", &z2).unwrap(), vec![0, 1]);
    }
}
