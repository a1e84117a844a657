//! Acceptance criteria 1-10, one line each. Runs without the libtest
//! harness so the lines are printed on every run.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use coupling_lab::crossed::{cp_multiply, cp_represent, cp_trace, cyclic_regular_model, CrossedProduct};
use coupling_lab::heisenberg::{
    clock_shift_residual, cross_lattice_commutator, non_abelian_witness, torus_bridge, ClockShiftPair, LatticeIndex,
    WeylSystem,
};
use coupling_lab::lab::{run_suite, ExperimentConfig};
use coupling_lab::operators::{bicyclic_witness, is_irreducible, mvn_coupling_with, side_algebra, Witness};
use coupling_lab::rational::{frac, q, Q};
use coupling_lab::symmetric::{character_value, coupling_formula, cycle_type, mc_character, mc_coupling, BernoulliSpec};
use coupling_lab::systems::{dyn_coupling, product_model, PairedSystem, Side};
use nalgebra::Complex;
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRODUCT_MODELS: [(usize, usize); 4] = [(2, 3), (3, 4), (2, 5), (4, 4)];
const TORUS_PAIRS: [(u64, u64); 7] = [(1, 2), (2, 3), (3, 2), (3, 5), (5, 3), (5, 8), (8, 5)];
const LATTICE_RATIOS: [(i64, i64); 3] = [(2, 5), (7, 3), (355, 113)];

const SPAN_TOL: f64 = 1e-8;
const RECIPROCITY_TOL: f64 = 1e-8;
const SPREAD_TOL: f64 = 1e-8;
const CLOCK_SHIFT_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const MC_SIGMAS: f64 = 3.0;
const MC_SAMPLES: u64 = 100_000;
const MC_SEED: u64 = 0;
const WITNESS_SEED: u64 = 0;
const WITNESS_COUNT: usize = 8;
const LATTICE_RADIUS: i64 = 5;
const LATTICE_RANDOM: usize = 10_000;
const LATTICE_RANGE: i64 = 1_000;
const TRACE_SAMPLES: usize = 100;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: coupling_lab::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn within_time(start: Instant, limit: Duration, detail: String) -> Outcome {
    let took = start.elapsed();
    ensure(took < limit, || format!("{detail}; took {took:.2?}, limit {limit:?}"))?;
    Ok(format!("{detail}; {took:.2?} < {limit:?}"))
}

/// Orbit count of one side, by direct traversal of the action table.
fn orbit_count(sys: &PairedSystem, side: Side) -> usize {
    let order = sys.group(side).order();
    let mut seen = vec![false; sys.len()];
    let mut count = 0;
    for x in 0..sys.len() {
        if seen[x] {
            continue;
        }
        count += 1;
        for g in 0..order {
            seen[sys.act(side, g, x)] = true;
        }
    }
    count
}

fn pair_set(a: &Q, b: &Q) -> BTreeSet<Q> {
    [a.clone(), b.clone()].into_iter().collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for (m, n) in PRODUCT_MODELS {
        let sys = lib(product_model(m, n))?;
        // uniform weights: mu(F_G) is the number of G-orbits
        let oracle = Q::new((orbit_count(&sys, Side::H) as i64).into(), (orbit_count(&sys, Side::G) as i64).into());
        let dc = lib(dyn_coupling(&sys))?;
        ensure(dc.lambda_gh == oracle, || format!("z{m}xz{n}: dyn coupling {} vs orbit count {oracle}", dc.lambda_gh))?;
        let a_g = lib(side_algebra(&sys, Side::G))?;
        let a_h = lib(side_algebra(&sys, Side::H))?;
        let g_comm = lib(a_g.commutant())?;
        let h_comm = lib(a_h.commutant())?;
        let dist = g_comm.span_distance(&a_h).max(h_comm.span_distance(&a_g));
        ensure(dist <= SPAN_TOL, || format!("z{m}xz{n}: span distance {dist:e}"))?;
        ensure(lib(is_irreducible(&[&a_g, &a_h]))?.irreducible, || format!("z{m}xz{n}: joint algebra reducible"))?;
        let cg = lib(mvn_coupling_with(&a_g, &g_comm, &Witness::auto(WITNESS_SEED)))?;
        let ch = lib(mvn_coupling_with(&a_h, &h_comm, &Witness::auto(WITNESS_SEED)))?;
        let expected = pair_set(&q(m as i64, n as i64), &q(n as i64, m as i64));
        let got = pair_set(&cg.lambda_rational, &ch.lambda_rational);
        ensure(got == expected, || format!("z{m}xz{n}: MvN pair {got:?} vs {expected:?}"))?;
    }
    within_time(start, Duration::from_secs(10), format!("{} product models", PRODUCT_MODELS.len()))
}

fn criterion_2() -> Outcome {
    let mut worst_rec = 0.0f64;
    let mut worst_spread = 0.0f64;
    for (m, n) in PRODUCT_MODELS {
        let sys = lib(product_model(m, n))?;
        let a_g = lib(side_algebra(&sys, Side::G))?;
        let a_h = lib(side_algebra(&sys, Side::H))?;
        let w = Witness::Auto { count: WITNESS_COUNT, seed: WITNESS_SEED };
        let cg = lib(mvn_coupling_with(&a_g, &lib(a_g.commutant())?, &w))?;
        let ch = lib(mvn_coupling_with(&a_h, &lib(a_h.commutant())?, &w))?;
        ensure(cg.witness_count >= 5 && ch.witness_count >= 5, || format!("z{m}xz{n}: fewer than 5 witnesses"))?;
        let rec = (cg.lambda * ch.lambda - 1.0).abs();
        ensure(rec <= RECIPROCITY_TOL, || format!("z{m}xz{n}: |lambda lambda' - 1| = {rec:e}"))?;
        let spread = cg.spread.max(ch.spread);
        ensure(spread <= SPREAD_TOL, || format!("z{m}xz{n}: witness spread {spread:e}"))?;
        worst_rec = worst_rec.max(rec);
        worst_spread = worst_spread.max(spread);
    }
    Ok(format!("{WITNESS_COUNT} witnesses; max |lambda lambda' - 1| = {worst_rec:e}, max spread = {worst_spread:e}"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    for (i, (p, qq)) in TORUS_PAIRS.into_iter().enumerate() {
        let rep = lib(torus_bridge(p, qq, WITNESS_SEED + i as u64))?;
        let ratio = q(p as i64, qq as i64);
        ensure(rep.dyn_coupling == ratio, || format!("({p},{qq}): dyn coupling {}", rep.dyn_coupling))?;
        let expected = pair_set(&ratio, &ratio.recip());
        let got = pair_set(&rep.mvn_pair[0], &rep.mvn_pair[1]);
        ensure(got == expected, || format!("({p},{qq}): MvN pair {got:?}"))?;
        ensure(rep.cyclic == (p < qq), || format!("({p},{qq}): cyclic = {}", rep.cyclic))?;
    }
    within_time(start, Duration::from_secs(30), format!("{} torus pairs", TORUS_PAIRS.len()))
}

/// `a b' - a' b` for `(m l1, n / l2)` against `(m' l2, n' / l1)`, over the integers.
fn cross_oracle(x: LatticeIndex, y: LatticeIndex, l1: i64, l2: i64) -> Q {
    let (l1, l2) = (i128::from(l1), i128::from(l2));
    let num = i128::from(x.m) * l1 * i128::from(y.n) * l2 - i128::from(y.m) * l2 * i128::from(x.n) * l1;
    frac(&Q::new(num.into(), (l1 * l2).into()))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let k = LATTICE_RADIUS;
    let cube: Vec<LatticeIndex> = (-k..=k)
        .flat_map(|m| (-k..=k).flat_map(move |n| (-k..=k).map(move |r| LatticeIndex::new(m, n, r))))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut draw = || {
        let mut c = || rng.random_range(-LATTICE_RANGE..=LATTICE_RANGE);
        LatticeIndex::new(c(), c(), c())
    };
    let random: Vec<(LatticeIndex, LatticeIndex)> = (0..LATTICE_RANDOM).map(|_| (draw(), draw())).collect();
    for (a, b) in LATTICE_RATIOS {
        let (l1, l2) = (Q::from_integer(a.into()), Q::from_integer(b.into()));
        for x in &cube {
            for y in &cube {
                let t = cross_lattice_commutator(*x, *y, &l1, &l2);
                ensure(t.is_zero() && cross_oracle(*x, *y, a, b).is_zero(), || {
                    format!("{a}/{b}: {x:?} {y:?} commutator {t}")
                })?;
            }
        }
        for (x, y) in &random {
            let t = cross_lattice_commutator(*x, *y, &l1, &l2);
            ensure(t.is_zero(), || format!("{a}/{b}: random {x:?} {y:?} commutator {t}"))?;
        }
        let (x, y, t) = non_abelian_witness(&l1, &l2).ok_or_else(|| format!("{a}/{b}: no same-lattice witness"))?;
        // (m n' - m' n) l1 / l2 mod 1
        let oracle = frac(&Q::new(((x.m * y.n - y.m * x.n) as i128 * i128::from(a)).into(), b.into()));
        ensure(!t.is_zero() && t == oracle, || format!("{a}/{b}: witness phase {t} vs {oracle}"))?;
    }
    Ok(format!(
        "{} ratios; {} exhaustive pairs (|m|,|n|,|r| <= {k}) and {LATTICE_RANDOM} random pairs each; witnesses found; {:.2?}",
        LATTICE_RATIOS.len(),
        cube.len() * cube.len(),
        start.elapsed()
    ))
}

fn criterion_5() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for n in [4usize, 12, 64] {
        for p in (1..n).filter(|&p| num::integer::gcd(n, p) == 1) {
            let r = clock_shift_residual(&lib(ClockShiftPair::new(n, p))?);
            ensure(r <= CLOCK_SHIFT_TOL, || format!("N={n} p={p}: residual {r:e}"))?;
            worst = worst.max(r);
            count += 1;
        }
    }
    for factors in [vec![2usize], vec![6], vec![2, 3]] {
        let w = lib(WeylSystem::new(factors.clone()))?;
        let order = w.order();
        for chi in 0..order {
            let dc = w.digits(chi);
            for x in 0..order {
                let dx = w.digits(x);
                let oracle = frac(
                    &dc.iter().zip(&dx).zip(&factors).map(|((&c, &d), &f)| q((c * d) as i64, f as i64)).sum::<Q>(),
                );
                ensure(w.pairing(chi, x) == oracle, || format!("{factors:?}: pairing({chi},{x})"))?;
                for y in 0..order {
                    let lhs = w.pairing(chi, w.add(x, y));
                    let rhs = frac(&(w.pairing(chi, x) + w.pairing(chi, y)));
                    ensure(lhs == rhs, || format!("{factors:?}: cocycle at ({chi},{x},{y})"))?;
                }
            }
        }
    }
    Ok(format!("{count} clock/shift pairs, max residual {worst:e}; Weyl phases exact on Z2, Z6, Z2xZ3"))
}

fn criterion_6() -> Outcome {
    for n in [5usize, 7] {
        let model = lib(cyclic_regular_model(n))?;
        let dc = lib(model.coupling())?;
        ensure(dc.lambda_gh.is_one() && dc.lambda_hg.is_one(), || format!("Z{n}: dyn coupling {}", dc.lambda_gh))?;
        let a_g = lib(side_algebra(&model.system, Side::G))?;
        let bc = lib(bicyclic_witness(&a_g, &model.domain_indicator()))?;
        ensure(bc.bicyclic(), || format!("Z{n}: domain indicator not bicyclic: {bc:?}"))?;
    }
    Ok("Z5 and Z7: coupling 1, domain indicator bicyclic".into())
}

fn test_specs() -> Vec<BernoulliSpec> {
    vec![
        BernoulliSpec::new(vec![q(1, 2), q(3, 10), q(1, 5)]).expect("valid spec"),
        BernoulliSpec::new(vec![q(1, 2), q(1, 2)]).expect("valid spec"),
    ]
}

fn mc_line(label: &str, e: &coupling_lab::symmetric::Estimate) -> String {
    format!("{label}: exact {} mc {:.5} z {:+.2}", e.exact, e.mc_mean, e.z_score)
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let specs = test_specs();
    let sum_sq: Q = specs[0].weights().iter().map(|a| a * a).sum();
    ensure(sum_sq == q(19, 50), || format!("sum of squares {sum_sq}"))?;
    for (r, want) in [(1u32, q(19, 50)), (2, q(361, 2500))] {
        let got = coupling_formula(&specs[0], r);
        ensure(got == want, || format!("r={r}: formula {got} vs {want}"))?;
    }
    let mut worst = 0.0f64;
    for (si, spec) in specs.iter().enumerate() {
        for r in 0..=3u32 {
            let e = lib(mc_coupling(spec, r, MC_SAMPLES, MC_SEED))?;
            let oracle: Q = spec.weights().iter().map(|a| a * a).sum::<Q>().pow(r as i32);
            ensure(e.exact == oracle, || format!("spec {si} r={r}: exact {} vs {oracle}", e.exact))?;
            ensure(e.within(MC_SIGMAS), || mc_line(&format!("spec {si} r={r}"), &e))?;
            worst = worst.max(e.z_score.abs());
        }
    }
    within_time(start, Duration::from_secs(20), format!("19/50, 361/2500 exact; 8 MC cells, max |z| {worst:.2}"))
}

fn criterion_8() -> Outcome {
    let perms: [(&str, Vec<usize>); 4] = [
        ("identity", vec![0, 1, 2, 3]),
        ("transposition", vec![1, 0, 2, 3]),
        ("3-cycle", vec![1, 2, 0, 3]),
        ("double transposition", vec![1, 0, 3, 2]),
    ];
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for (si, spec) in test_specs().iter().enumerate() {
        for (name, perm) in &perms {
            let e = lib(mc_character(perm, spec, MC_SAMPLES, MC_SEED))?;
            let oracle: Q = cycle_type(perm).iter().map(|&l| spec.power_sum(l as u32)).product();
            ensure(e.exact == oracle, || format!("spec {si} {name}: exact {} vs {oracle}", e.exact))?;
            worst = worst.max(e.z_score.abs());
            if !e.within(MC_SIGMAS) {
                failures.push(mc_line(&format!("spec {si} {name}"), &e));
            }
        }
        let types: [&[usize]; 5] = [&[1], &[2], &[3], &[2, 2], &[4, 1]];
        for a in types {
            for b in types {
                let joined: Vec<usize> = a.iter().chain(b).copied().collect();
                let lhs = character_value(&joined, spec);
                let rhs = character_value(a, spec) * character_value(b, spec);
                ensure(lhs == rhs, || format!("spec {si}: multiplicativity {a:?} {b:?}"))?;
            }
        }
    }
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok(format!("8 MC cells, max |z| {worst:.2}; multiplicativity exact"))
}

fn criterion_9() -> Outcome {
    let mut worst = (0.0f64, 0.0f64, f64::INFINITY);
    for (mi, (m, n)) in PRODUCT_MODELS.into_iter().enumerate() {
        let sys = lib(product_model(m, n))?;
        let dim = Complex::new(sys.len() as f64, 0.0);
        for side in [Side::G, Side::H] {
            let cp = lib(CrossedProduct::new(&sys, side))?;
            let mut rng = ChaCha8Rng::seed_from_u64(2 * mi as u64 + side as u64);
            for _ in 0..TRACE_SAMPLES {
                let a = cp.random_element(&mut rng, 4);
                let b = cp.random_element(&mut rng, 4);
                let dev = (lib(cp_trace(&cp, &a))? - lib(cp_represent(&cp, &a, &sys))?.trace() / dim).norm();
                let ab = lib(cp_trace(&cp, &lib(cp_multiply(&cp, &a, &b))?))?;
                let ba = lib(cp_trace(&cp, &lib(cp_multiply(&cp, &b, &a))?))?;
                let aa = lib(cp_trace(&cp, &lib(cp_multiply(&cp, &lib(cp.adjoint(&a))?, &a))?))?;
                let trac = (ab - ba).norm();
                ensure(dev <= TRACE_TOL, || format!("z{m}xz{n} {side}: trace deviation {dev:e}"))?;
                ensure(trac <= TRACE_TOL, || format!("z{m}xz{n} {side}: traciality {trac:e}"))?;
                ensure(aa.im.abs() <= TRACE_TOL && aa.re >= -TRACE_TOL, || format!("z{m}xz{n} {side}: tau(a*a) = {aa}"))?;
                worst = (worst.0.max(dev), worst.1.max(trac), worst.2.min(aa.re));
            }
        }
    }
    Ok(format!(
        "{TRACE_SAMPLES} elements per model and side; max trace deviation {:e}, traciality {:e}, min tau(a*a) {:.3e}",
        worst.0, worst.1, worst.2
    ))
}

fn criterion_10() -> Outcome {
    let config = ExperimentConfig { suites: vec!["all".into()], seed: 0, ..Default::default() };
    let first = lib(run_suite(&config))?.to_json();
    let second = lib(run_suite(&config))?.to_json();
    ensure(first == second, || "JSON reports differ".into())?;
    Ok(format!("two `all` runs at seed 0 give identical {}-byte JSON", first.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("product-model factor pairs", criterion_1),
        ("coupling reciprocity and witness independence", criterion_2),
        ("torus bridge", criterion_3),
        ("Heisenberg lattice commutation", criterion_4),
        ("clock/shift relation and Weyl cocycle", criterion_5),
        ("regular representation", criterion_6),
        ("Bernoulli coupling", criterion_7),
        ("characters", criterion_8),
        ("crossed-product trace", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
