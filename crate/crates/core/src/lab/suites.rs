use std::collections::HashSet;

use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{Check, ExperimentConfig, SuiteOutput};
use crate::crossed::{cp_multiply, cp_represent, cp_trace, cyclic_regular_model, CrossedProduct};
use crate::error::{LabError, Result};
use crate::group::FiniteGroup;
use crate::heisenberg::{
    clock_shift_residual, convergent_sweep, cross_lattice_commutator, non_abelian_witness, torus_bridge,
    weyl_check, ClockShiftPair, LatticeIndex, WeylSystem,
};
use crate::matrix::C64;
use crate::operators::{bicyclic_witness, is_irreducible, mvn_coupling_with, side_algebra, Witness};
use crate::rational::{frac, parse_rational, to_f64, Q};
use crate::symmetric::{
    character_value, commutant_projections_report, coupling_formula, mc_character, mc_coupling,
    pseudogroupoid_check, pseudogroupoid_check_with, sn_smoke, BernoulliSpec, SideSets,
};
use crate::systems::{
    check_axioms, dyn_coupling, parse_system_description, product_model, translation_pair, PairedSystem, Side,
};

pub fn default_lattice_ratios() -> Vec<String> {
    vec!["2/5".into(), "7/3".into(), "355/113".into()]
}

fn sub_seed(base: u64, k: u64) -> u64 {
    base.wrapping_add(k.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn cap(config: &ExperimentConfig, dim: usize) -> Result<()> {
    if dim > config.max_dim {
        return Err(LabError::DimensionCap { dim, cap: config.max_dim });
    }
    Ok(())
}

fn unordered_pair(a: &Q, b: &Q) -> String {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    format!("{{{lo}, {hi}}}")
}

fn load_system(path: &str) -> Result<PairedSystem> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::Config(format!("cannot read {path}: {e}")))?;
    parse_system_description(&text)
}

fn named_systems(config: &ExperimentConfig) -> Result<Vec<(String, PairedSystem)>> {
    let mut out = Vec::new();
    for &[m, n] in &config.coupling.models {
        cap(config, m * n)?;
        out.push((format!("z{m}xz{n}"), product_model(m, n)?));
    }
    for path in &config.coupling.systems {
        let sys = load_system(path)?;
        cap(config, sys.len())?;
        let stem = std::path::Path::new(path)
            .file_stem()
            .map_or_else(|| path.clone(), |s| s.to_string_lossy().into_owned());
        out.push((stem, sys));
    }
    Ok(out)
}

pub(super) fn axioms(config: &ExperimentConfig) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::new();
    let mut systems = named_systems(config)?;
    if config.coupling.systems.is_empty() {
        let s3 = FiniteGroup::symmetric(3);
        let e = s3.identity();
        let t = s3.find_label("(1 2)").expect("transposition");
        let c = s3.find_label("(1 2 3)").expect("3-cycle");
        let pair = translation_pair(&s3, &[e, t], &[e, c, s3.mul(c, c)])?;
        systems.push(("s3-translations".into(), pair.system));
    }
    for (name, sys) in &systems {
        let rep = check_axioms(sys);
        for (flag, value) in [
            ("free-g", rep.free_g),
            ("free-h", rep.free_h),
            ("commuting", rep.commuting),
            ("transversal", rep.transversal),
            ("ergodic", rep.ergodic),
        ] {
            out.push(Check::exact(format!("axioms/{name}/{flag}"), "commuting-actions", true, value));
        }
        let dc = dyn_coupling(sys)?;
        out.push(Check::exact(
            format!("axioms/{name}/reciprocity"),
            "coupling-reciprocity",
            Q::one(),
            &dc.lambda_gh * &dc.lambda_hg,
        ));
        out.attach(format!("axioms/{name}"), &rep);
    }
    Ok(out)
}

#[derive(Serialize)]
struct CouplingArtifact {
    dynamic: crate::systems::CouplingReport,
    a_g: crate::operators::CouplingCertificate,
    a_h: crate::operators::CouplingCertificate,
    #[serde(rename = "commutantDistance")]
    commutant_distance: f64,
    irreducible: bool,
}

pub(super) fn coupling(config: &ExperimentConfig) -> Result<SuiteOutput> {
    let tol = config.tolerances.float;
    let systems = named_systems(config)?;
    let results: Vec<Result<SuiteOutput>> = systems
        .par_iter()
        .enumerate()
        .map(|(i, (name, sys))| {
            let mut out = SuiteOutput::new();
            let seed = sub_seed(config.seed, i as u64);
            let dc = dyn_coupling(sys)?;
            if let Some(&[m, n]) = config.coupling.models.get(i) {
                let expected = Q::new((m as i64).into(), (n as i64).into());
                out.push(Check::exact(
                    format!("coupling/{name}/dyn-coupling"),
                    "dynamical-coupling",
                    expected,
                    dc.lambda_gh.clone(),
                ));
            }
            let a_g = side_algebra(sys, Side::G)?;
            let a_h = side_algebra(sys, Side::H)?;
            let g_comm = a_g.commutant()?;
            let h_comm = a_h.commutant()?;
            let distance = g_comm.span_distance(&a_h).max(h_comm.span_distance(&a_g));
            out.push(Check::at_most(format!("coupling/{name}/mutual-commutants"), "factor-pair", distance, tol));
            let irreducible = is_irreducible(&[&a_g, &a_h])?.irreducible;
            out.push(Check::exact(format!("coupling/{name}/irreducible"), "factor-pair", true, irreducible));
            let cg = mvn_coupling_with(&a_g, &g_comm, &Witness::auto(seed))?;
            let ch = mvn_coupling_with(&a_h, &h_comm, &Witness::auto(seed))?;
            out.push(Check::exact(
                format!("coupling/{name}/mvn-pair"),
                "coupling-equality",
                unordered_pair(&dc.lambda_gh, &dc.lambda_hg),
                unordered_pair(&cg.lambda_rational, &ch.lambda_rational),
            ));
            out.push(Check::exact(
                format!("coupling/{name}/orientation"),
                "coupling-equality",
                dc.lambda_hg.clone(),
                cg.lambda_rational.clone(),
            ));
            out.push(Check::close(
                format!("coupling/{name}/reciprocity"),
                "coupling-reciprocity",
                1.0,
                cg.lambda * ch.lambda,
                tol,
            ));
            out.push(Check::at_most(
                format!("coupling/{name}/witness-spread"),
                "witness-independence",
                cg.spread.max(ch.spread),
                tol,
            ));
            out.push(Check::exact(
                format!("coupling/{name}/flags-confirmed"),
                "cyclic-separating",
                true,
                cg.flags.rank_confirmed && ch.flags.rank_confirmed,
            ));
            out.attach(
                format!("coupling/{name}"),
                &CouplingArtifact { dynamic: dc, a_g: cg, a_h: ch, commutant_distance: distance, irreducible },
            );
            Ok(out)
        })
        .collect();
    merge(results)
}

fn merge(parts: Vec<Result<SuiteOutput>>) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::new();
    for part in parts {
        let part = part?;
        out.checks.extend(part.checks);
        out.artifacts.extend(part.artifacts);
    }
    Ok(out)
}

fn lattice_checks(config: &ExperimentConfig, out: &mut SuiteOutput) -> Result<()> {
    let t = &config.torus;
    for (i, ratio) in t.lattice_ratios.iter().enumerate() {
        let ratio_q = parse_rational(ratio)?;
        if ratio_q <= Q::zero() {
            return Err(LabError::Config(format!("lattice ratio {ratio} must be positive")));
        }
        let id = format!("torus/lattice-{}", ratio.replace('/', "_"));
        let l1 = Q::from_integer(ratio_q.numer().clone());
        let l2 = Q::from_integer(ratio_q.denom().clone());
        let k = t.lattice_radius;
        let cube: Vec<LatticeIndex> = (-k..=k)
            .flat_map(|m| (-k..=k).flat_map(move |n| (-k..=k).map(move |r| LatticeIndex::new(m, n, r))))
            .collect();
        let bad: usize = cube
            .par_iter()
            .map(|&a| cube.iter().filter(|&&b| !cross_lattice_commutator(a, b, &l1, &l2).is_zero()).count())
            .sum();
        out.push(Check::exact(format!("{id}/exhaustive"), "lattice-commutation", 0usize, bad));
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(config.seed, 100 + i as u64));
        let mut draw = || LatticeIndex::new(rng.random_range(-1000..=1000), rng.random_range(-1000..=1000), rng.random_range(-1000..=1000));
        let pairs: Vec<(LatticeIndex, LatticeIndex)> = (0..t.lattice_samples).map(|_| (draw(), draw())).collect();
        let bad_random = pairs
            .iter()
            .filter(|(a, b)| !cross_lattice_commutator(*a, *b, &l1, &l2).is_zero())
            .count();
        out.push(Check::exact(format!("{id}/random"), "lattice-commutation", 0usize, bad_random));
        let witness = non_abelian_witness(&l1, &l2);
        let phase = witness.as_ref().map(|w| w.2.clone());
        out.push(Check::exact(
            format!("{id}/same-lattice-witness"),
            "lattice-commutation",
            true,
            phase.as_ref().is_some_and(|p| !p.is_zero()),
        ));
        let described = witness.map(|(a, b, t)| format!("{a:?} {b:?} phase {t}"));
        out.attach(id, &described);
    }
    Ok(())
}

fn clock_shift_checks(config: &ExperimentConfig, out: &mut SuiteOutput) -> Result<()> {
    let t = &config.torus;
    let pairs: Vec<(usize, usize)> = if t.clock_shift.is_empty() {
        t.clock_orders
            .iter()
            .flat_map(|&n| (1..n).filter(move |&p| num::integer::gcd(n, p) == 1).map(move |p| (n, p)))
            .collect()
    } else {
        t.clock_shift.iter().map(|&[n, p]| (n, p)).collect()
    };
    for (n, p) in pairs {
        let cs = ClockShiftPair::new(n, p)?;
        out.push(Check::at_most(
            format!("torus/clock-shift-{n}-{p}"),
            "rotation-relation",
            clock_shift_residual(&cs),
            config.tolerances.clock_shift,
        ));
    }
    for (i, factors) in t.weyl_groups.iter().enumerate() {
        let label = factors.iter().map(|f| format!("z{f}")).collect::<Vec<_>>().join("x");
        let w = WeylSystem::new(factors.clone())?;
        let order = w.order();
        let exact_ok = (0..order).all(|chi| {
            (0..order).all(|x| {
                (0..order).all(|y| w.pairing(chi, w.add(x, y)) == frac(&(w.pairing(chi, x) + w.pairing(chi, y))))
            })
        });
        out.push(Check::exact(format!("torus/weyl-{label}/bicharacter"), "weyl-cocycle", true, exact_ok));
        let rep = weyl_check(factors, sub_seed(config.seed, 200 + i as u64))?;
        out.push(Check::at_most(
            format!("torus/weyl-{label}/cocycle-residual"),
            "weyl-cocycle",
            rep.cocycle_residual,
            config.tolerances.clock_shift,
        ));
        out.attach(format!("torus/weyl-{label}"), &rep);
    }
    Ok(())
}

pub(super) fn torus(config: &ExperimentConfig) -> Result<SuiteOutput> {
    let tol = config.tolerances.float;
    let mut out = SuiteOutput::new();
    for &[p, q] in &config.torus.pairs {
        cap(config, (p * q) as usize)?;
    }
    let bridges: Vec<Result<SuiteOutput>> = config
        .torus
        .pairs
        .par_iter()
        .enumerate()
        .map(|(i, &[p, q])| {
            let mut out = SuiteOutput::new();
            let rep = torus_bridge(p, q, sub_seed(config.seed, i as u64))?;
            let id = format!("torus/p{p}q{q}");
            let ratio = Q::new((p as i64).into(), (q as i64).into());
            out.push(Check::exact(format!("{id}/dyn-coupling"), "torus-bridge", ratio.clone(), rep.dyn_coupling.clone()));
            out.push(Check::exact(
                format!("{id}/mvn-pair"),
                "torus-bridge",
                format!("[{}, {}]", ratio, ratio.recip()),
                format!("[{}, {}]", rep.mvn_pair[0], rep.mvn_pair[1]),
            ));
            out.push(Check::exact(format!("{id}/cyclic"), "torus-bridge", p <= q, rep.cyclic));
            out.push(Check::exact(format!("{id}/separating"), "torus-bridge", p >= q, rep.separating));
            out.push(Check::exact(format!("{id}/mutual-commutants"), "factor-pair", true, rep.mutual_commutants));
            out.push(Check::exact(format!("{id}/irreducible"), "factor-pair", true, rep.irreducible));
            out.push(Check::at_most(format!("{id}/witness-spread"), "witness-independence", rep.residuals.spread, tol));
            out.attach(id, &rep);
            Ok(out)
        })
        .collect();
    let bridges = merge(bridges)?;
    out.checks.extend(bridges.checks);
    out.artifacts.extend(bridges.artifacts);

    if let Some(gamma) = &config.torus.gamma {
        let rows = convergent_sweep(gamma, config.torus.terms, config.max_dim, config.seed)?;
        for row in &rows {
            let id = format!("torus/sweep-{gamma}/k{}", row.k);
            match (&row.skip_reason, &row.coupling) {
                (Some(reason), _) => out.push(Check::skipped(id, "convergent-sweep", reason.clone())),
                (None, Some(c)) => out.push(Check::exact(
                    id,
                    "convergent-sweep",
                    Q::new((row.p as i64).into(), (row.q as i64).into()),
                    c.clone(),
                )),
                (None, None) => out.push(Check::skipped(id, "convergent-sweep", "no coupling computed")),
            }
        }
        out.attach(format!("torus/sweep-{gamma}"), &rows);
    }
    lattice_checks(config, &mut out)?;
    clock_shift_checks(config, &mut out)?;
    Ok(out)
}

fn spec_label(weights: &[String]) -> String {
    format!("alpha-{}", weights.join("-").replace('/', "_"))
}

/// Identity, a transposition, a 3-cycle and a double transposition on four points.
pub(crate) fn character_test_perms() -> Vec<(&'static str, Vec<usize>)> {
    vec![
        ("identity", vec![0, 1, 2, 3]),
        ("transposition", vec![1, 0, 2, 3]),
        ("3-cycle", vec![1, 2, 0, 3]),
        ("double-transposition", vec![1, 0, 3, 2]),
    ]
}

pub(super) fn symmetric(config: &ExperimentConfig) -> Result<SuiteOutput> {
    let cfg = &config.symmetric;
    let sigmas = config.tolerances.mc_sigmas;
    let mut out = SuiteOutput::new();
    for (si, weights) in cfg.specs.iter().enumerate() {
        let parsed = weights.iter().map(|w| parse_rational(w)).collect::<Result<Vec<_>>>()?;
        let spec = BernoulliSpec::new(parsed.clone()).map_err(|e| LabError::Config(e.to_string()))?;
        let label = spec_label(weights);
        let base = sub_seed(config.seed, 1000 * (si as u64 + 1));

        let distinct: HashSet<&Q> = parsed.iter().collect();
        out.push(Check::exact(
            format!("symmetric/{label}/degenerate-flag"),
            "extra-symmetry",
            distinct.len() < parsed.len(),
            spec.degenerate_flag(),
        ));

        let mut previous: Option<Q> = None;
        for &r in &cfg.r {
            let exact = coupling_formula(&spec, r);
            let proj = commutant_projections_report(r as usize, &spec)?;
            out.push(Check::exact(
                format!("symmetric/{label}/r{r}/cylinder-identity"),
                "symmetric-coupling",
                exact.clone(),
                proj.weighted_identity.clone(),
            ));
            let est = mc_coupling(&spec, r, config.samples, sub_seed(base, r as u64))?;
            out.push(Check::close(
                format!("symmetric/{label}/r{r}/monte-carlo"),
                "symmetric-coupling",
                to_f64(&exact),
                est.mc_mean,
                sigmas * est.mc_stderr,
            ));
            if let Some(prev) = &previous {
                if spec.alphabet_size() >= 2 {
                    out.push(Check::exact(
                        format!("symmetric/{label}/r{r}/decreasing"),
                        "symmetric-coupling",
                        true,
                        exact < *prev,
                    ));
                }
            }
            previous = Some(exact);
            out.attach(format!("symmetric/{label}/r{r}"), &est);
        }

        for (pi, (name, perm)) in character_test_perms().into_iter().enumerate() {
            let est = mc_character(&perm, &spec, config.samples, sub_seed(base, 100 + pi as u64))?;
            out.push(Check::close(
                format!("symmetric/{label}/character-{name}"),
                "fixed-point-character",
                to_f64(&est.exact),
                est.mc_mean,
                sigmas * est.mc_stderr,
            ));
            out.attach(format!("symmetric/{label}/character-{name}"), &est);
        }
        let two = character_value(&[2], &spec);
        let three = character_value(&[3], &spec);
        let multiplicative = character_value(&[2, 2], &spec) == &two * &two
            && character_value(&[3, 2], &spec) == &three * &two
            && character_value(&[3, 2, 1, 1], &spec) == &three * &two;
        out.push(Check::exact(
            format!("symmetric/{label}/character-multiplicativity"),
            "fixed-point-character",
            true,
            multiplicative,
        ));
        let bounded = [vec![2], vec![3], vec![2, 2], vec![4]]
            .iter()
            .all(|c| {
                let v = character_value(c, &spec);
                v > Q::zero() && v < Q::one()
            });
        out.push(Check::exact(format!("symmetric/{label}/character-bounds"), "fixed-point-character", true, bounded));

        for &[r, n] in &cfg.windows {
            let rep = pseudogroupoid_check(r, n, &spec, cfg.trials, sub_seed(base, 200 + r as u64))?;
            let id = format!("symmetric/{label}/window-r{r}-n{n}");
            out.push(Check::exact(format!("{id}/homogeneity"), "pseudogroupoid", true, rep.homogeneity));
            out.push(Check::exact(format!("{id}/commutation"), "pseudogroupoid", true, rep.commutation));
            out.push(Check::exact(format!("{id}/transitivity"), "pseudogroupoid", true, rep.transitivity));
            out.attach(id, &rep);
        }
    }

    if let Some(&[r, n]) = cfg.windows.first() {
        let binary = BernoulliSpec::new(vec![Q::new(1.into(), 2.into()); 2])?;
        let mut sets = SideSets::standard(r, n);
        sets.left.push(1);
        let rep = pseudogroupoid_check_with(r, n, &binary, &sets, cfg.trials, config.seed)?;
        out.push(Check::exact(
            format!("symmetric/corrupted-r{r}-n{n}/commutation-fails"),
            "pseudogroupoid",
            false,
            rep.commutation,
        ));
        out.attach(format!("symmetric/corrupted-r{r}-n{n}"), &rep.witness);
    }

    for &[n, r] in &cfg.smoke {
        let binary = BernoulliSpec::new(vec![Q::new(1.into(), 2.into()); 2])?;
        let rep = sn_smoke(n, r, &binary)?;
        out.push(Check::exact(format!("symmetric/sn-n{n}-r{r}/commute"), "symmetric-group-model", true, rep.commute));
        out.attach(format!("symmetric/sn-n{n}-r{r}"), &rep);
    }
    Ok(out)
}

#[derive(Serialize)]
struct TraceArtifact {
    samples: usize,
    #[serde(rename = "traceDeviation")]
    trace_deviation: f64,
    #[serde(rename = "tracialityDeviation")]
    traciality_deviation: f64,
    #[serde(rename = "minPositivity")]
    min_positivity: f64,
}

pub(super) fn regular(config: &ExperimentConfig) -> Result<SuiteOutput> {
    let tol = config.tolerances.trace;
    let mut out = SuiteOutput::new();
    for &n in &config.regular.orders {
        cap(config, n * n)?;
        let model = cyclic_regular_model(n)?;
        let id = format!("regular/z{n}");
        let dc = model.coupling()?;
        out.push(Check::exact(format!("{id}/dyn-coupling"), "regular-representation", Q::one(), dc.lambda_gh));
        let induced = model.induced_actions();
        out.push(Check::exact(format!("{id}/right-is-base"), "regular-representation", true, induced.right_is_base));
        out.push(Check::exact(format!("{id}/left-is-inverse"), "regular-representation", true, induced.left_is_inverse));
        let a_g = side_algebra(&model.system, Side::G)?;
        let bc = bicyclic_witness(&a_g, &model.domain_indicator())?;
        out.push(Check::exact(format!("{id}/domain-bicyclic"), "regular-representation", true, bc.bicyclic()));
        out.attach(id, &bc);
    }

    for (mi, &[m, n]) in config.regular.trace_models.iter().enumerate() {
        cap(config, m * n)?;
        let sys = product_model(m, n)?;
        for side in [Side::G, Side::H] {
            let cp = CrossedProduct::new(&sys, side)?;
            let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(config.seed, 300 + 2 * mi as u64 + side as u64));
            let dim = C64::new(sys.len() as f64, 0.0);
            let (mut dev, mut trac, mut pos) = (0.0f64, 0.0f64, f64::INFINITY);
            for _ in 0..config.regular.trace_samples {
                let a = cp.random_element(&mut rng, 4);
                let b = cp.random_element(&mut rng, 4);
                let ta = cp_trace(&cp, &a)?;
                let matrix = cp_represent(&cp, &a, &sys)?.trace() / dim;
                dev = dev.max((ta - matrix).norm());
                let ab = cp_trace(&cp, &cp_multiply(&cp, &a, &b)?)?;
                let ba = cp_trace(&cp, &cp_multiply(&cp, &b, &a)?)?;
                trac = trac.max((ab - ba).norm());
                let aa = cp_trace(&cp, &cp_multiply(&cp, &cp.adjoint(&a)?, &a)?)?;
                pos = pos.min(if aa.im.abs() <= tol { aa.re } else { f64::NEG_INFINITY });
            }
            let id = format!("regular/crossed-z{m}xz{n}-{side}");
            out.push(Check::at_most(format!("{id}/trace-vs-matrix"), "crossed-product-trace", dev, tol));
            out.push(Check::at_most(format!("{id}/traciality"), "crossed-product-trace", trac, tol));
            out.push(Check::exact(format!("{id}/positivity"), "crossed-product-trace", true, pos >= -tol));
            out.attach(
                id,
                &TraceArtifact {
                    samples: config.regular.trace_samples,
                    trace_deviation: dev,
                    traciality_deviation: trac,
                    min_positivity: pos,
                },
            );
        }
    }
    Ok(out)
}
