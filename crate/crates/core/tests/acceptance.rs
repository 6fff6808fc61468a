//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach stdout.
//! `TOMOCOVER_N5_BUDGET` and `TOMOCOVER_N6_BUDGET` (seconds) override the
//! long-run budgets for five and six spins.

mod common;

use std::cell::Cell;
use std::time::{Duration, Instant};

use common::matrix::assert_matches;
use common::{any_small_instance, brute_force, fixture, homonuclear, probe_instance, venn_instance};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use tomocover::clifford::{canonical_local_set, single_probe_set, Generator, ReadoutOp};
use tomocover::pauli::{basis_vec, Letter, PauliString};
use tomocover::probe::{construct, f_star, weight_bound};
use tomocover::settings::CoverInstance;
use tomocover::solver::{greedy, solve_exact, verify, CoverSolution, SolverOptions, Status};

struct Report {
    failures: Vec<String>,
}

impl Report {
    fn line(&mut self, id: &str, gating: bool, ok: bool, detail: String) {
        let verdict = if ok { "PASS" } else { "FAIL" };
        let tag = if gating { "" } else { " (soft)" };
        println!("[{verdict}] criterion {id}{tag}: {detail}");
        if gating && !ok {
            self.failures.push(id.to_string());
        }
    }
}

fn seeded_runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(Config::with_cases(cases), TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn budget(var: &str, default: u64) -> Duration {
    let secs = std::env::var(var).ok().and_then(|v| v.parse().ok()).unwrap_or(default);
    Duration::from_secs(secs)
}

fn table_counts(r: &mut Report) {
    let want = [2.0, 4.0, 7.0, 15.0];
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 1..=4 {
        let started = Instant::now();
        let s = solve_exact(&homonuclear(n), &SolverOptions::with_time_limit(Duration::from_secs(600))).unwrap();
        let secs = started.elapsed().as_secs_f64();
        let good = s.status == Status::Optimal && s.objective == want[n - 1] && secs <= 600.0;
        ok &= good;
        parts.push(format!("n={n}: {} {:?} in {secs:.1}s", s.objective, s.status));
    }
    r.line("1", true, ok, format!("{} (want 2, 4, 7, 15 optimal)", parts.join("; ")));
}

fn five_spins(r: &mut Report) {
    let inst = homonuclear(5);
    let pulses = fixture("homonuclear_n5.txt");
    let report = verify(&inst, &pulses).unwrap();
    let bound = weight_bound(&inst);
    let limit = budget("TOMOCOVER_N5_BUDGET", 120);
    let s = solve_exact(&inst, &SolverOptions::with_time_limit(limit)).unwrap();
    let solved = s.objective == 33.0
        && (s.status == Status::Optimal || (s.status == Status::Feasible && s.lower_bound <= 33.0));
    let ok = pulses.len() == 33 && report.feasible && report.covered == 1023 && bound >= 25 && solved;
    r.line(
        "2",
        true,
        ok,
        format!(
            "list covers {}/{} with {} pulses; weight bound {bound}; search ({}s budget) objective {} {:?}, lower bound {} ({:?})",
            report.covered,
            report.total,
            pulses.len(),
            limit.as_secs(),
            s.objective,
            s.status,
            s.lower_bound,
            s.certificate
        ),
    );
}

fn probe_optimum(r: &mut Report) {
    let mut ok = (1..=4).map(f_star).collect::<Vec<_>>() == vec![2, 5, 14, 41];
    let mut sizes = Vec::new();
    for n in 1..=5 {
        let scheme = construct(n, 1).unwrap();
        let inst = probe_instance(n, 1);
        let covered = verify(&inst, &scheme.names()).unwrap().feasible;
        let certified = weight_bound(&inst) == scheme.pulses.len() as u64;
        ok &= covered && certified && scheme.pulses.len() as u64 == f_star(n);
        sizes.push(format!("{}{}", scheme.pulses.len(), if covered && certified { "" } else { "!" }));
    }
    let mut searched = Vec::new();
    for n in 1..=3 {
        let s = solve_exact(&probe_instance(n, 1), &SolverOptions::with_time_limit(Duration::from_secs(600))).unwrap();
        ok &= s.status == Status::Optimal && s.objective == f_star(n) as f64;
        searched.push(format!("{}", s.objective));
    }
    r.line(
        "3",
        true,
        ok,
        format!(
            "constructed sizes n=1..5: {} (verified, weight bound tight); search n=1..3: {}",
            sizes.join(", "),
            searched.join(", ")
        ),
    );
}

fn conjugation_tables(r: &mut Report) {
    let outcome = std::panic::catch_unwind(|| {
        for g in [Generator::Rx(1), Generator::Ry(1), Generator::Rz(1)] {
            for l in Letter::NON_IDENTITY {
                assert_matches(1, &[g], &PauliString::new(&[l]).unwrap());
            }
        }
        let sw = ReadoutOp::parse("SW12", 2).unwrap();
        for a in Letter::ALL {
            for b in Letter::ALL {
                let p = PauliString::new(&[a, b]).unwrap();
                assert_eq!(sw.conjugate(&p).unwrap(), PauliString::new(&[b, a]).unwrap());
                if !p.is_identity() {
                    assert_matches(2, &[Generator::Swap(1, 2)], &p);
                }
            }
        }
    });
    r.line(
        "4",
        true,
        outcome.is_ok(),
        "9 rotation/letter pairs against 2x2 matrices, 16 letter pairs against the 4x4 SWAP".into(),
    );
}

fn brute_force_agreement(r: &mut Report) {
    let checked = Cell::new(0usize);
    let agree = |inst: &CoverInstance| {
        checked.set(checked.get() + 1);
        let want = brute_force(inst);
        let got = solve_exact(inst, &SolverOptions::default()).unwrap();
        match want {
            None => got.status == Status::Infeasible,
            Some(v) => got.status == Status::Optimal && (got.objective - v).abs() < 1e-9,
        }
    };
    let venn = venn_instance();
    let mut ok = brute_force(&venn) == Some(4.0) && agree(&venn);
    ok &= agree(&homonuclear(1)) && agree(&homonuclear(2));
    let mut runner = seeded_runner(400);
    let random = runner.run(&any_small_instance(12), |inst| {
        proptest::prop_assert!(agree(&inst));
        Ok(())
    });
    ok &= random.is_ok();
    r.line(
        "5",
        true,
        ok,
        format!("{} instances with at most 12 columns, including the five-set two-spin instance (optimum 4)", checked.get()),
    );
}

fn harmonic(k: usize) -> f64 {
    (1..=k).map(|i| 1.0 / i as f64).sum()
}

fn property_suite(r: &mut Report) {
    let started = Instant::now();
    let mut ok = true;
    for n in 1..=4 {
        let basis = basis_vec(n).unwrap();
        let mut ops = canonical_local_set(n).unwrap();
        for probe in 1..=n {
            ops.extend(single_probe_set(n, probe).unwrap());
        }
        for o in &ops {
            let mut images: Vec<PauliString> = basis.iter().map(|p| o.conjugate(p).unwrap()).collect();
            ok &= basis.iter().zip(&images).all(|(p, q)| p.weight() == q.weight());
            images.sort();
            images.dedup();
            ok &= images.len() == basis.len();
        }
    }
    let mut runner = seeded_runner(150);
    let solver_props = runner.run(&any_small_instance(20), |inst| {
        let e = solve_exact(&inst, &SolverOptions::default()).unwrap();
        let g = greedy(&inst).unwrap();
        let mut raw = SolverOptions::default();
        raw.presolve = false;
        let unreduced = solve_exact(&inst, &raw).unwrap();
        proptest::prop_assert_eq!(e.status, unreduced.status);
        proptest::prop_assert!((e.objective - unreduced.objective).abs() < 1e-9);
        if e.is_feasible() {
            proptest::prop_assert!(g.objective >= e.objective - 1e-9);
            proptest::prop_assert!(g.objective <= harmonic(inst.num_rows()) * e.objective + 1e-9);
        }
        for s in [&e, &g] {
            let text = serde_json::to_string(s).unwrap();
            proptest::prop_assert_eq!(&serde_json::from_str::<CoverSolution>(&text).unwrap(), s);
        }
        Ok(())
    });
    ok &= solver_props.is_ok();
    let secs = started.elapsed().as_secs_f64();
    ok &= secs < 300.0;
    r.line(
        "6",
        true,
        ok,
        format!("bijection and weight preservation n<=4, greedy >= exact, greedy <= H(|P|) opt, reduction invariance, JSON round trip; {secs:.1}s"),
    );
}

fn six_spins(r: &mut Report) {
    let inst = homonuclear(6);
    let g = greedy(&inst).unwrap();
    let limit = budget("TOMOCOVER_N6_BUDGET", 60);
    let s = solve_exact(&inst, &SolverOptions::with_time_limit(limit)).unwrap();
    let saving = 1.0 - s.objective / g.objective;
    r.line(
        "7",
        false,
        s.is_feasible() && saving >= 0.15,
        format!(
            "greedy {} vs search incumbent {} ({}s budget, lower bound {}): {:.1}% fewer settings, target 15%",
            g.objective,
            s.objective,
            limit.as_secs(),
            s.lower_bound,
            100.0 * saving
        ),
    );
}

fn main() {
    // libtest-style flags such as --nocapture or test filters are accepted and ignored
    let mut r = Report { failures: Vec::new() };
    table_counts(&mut r);
    five_spins(&mut r);
    probe_optimum(&mut r);
    conjugation_tables(&mut r);
    brute_force_agreement(&mut r);
    property_suite(&mut r);
    six_spins(&mut r);
    if r.failures.is_empty() {
        println!("acceptance: all gating criteria passed");
    } else {
        println!("acceptance: failed criteria {}", r.failures.join(", "));
        std::process::exit(1);
    }
}
