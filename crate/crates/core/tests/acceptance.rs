//! Acceptance criteria, one report line each.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use composite_pulses::analysis::{compare, uniform_grid, window_audit, HalfPiFamily};
use composite_pulses::families::{
    self, asymmetric_half_pi, bb1, equivalence_distance, equivalent, levitt_ernst, prime_four,
    prime_three, prime_two, symmetric_half_pi, Branch, FourClass, FourVariant, Transform,
};
use composite_pulses::solver::{solve_phases, verify_order, SeedStrategy, SolveTemplate};
use composite_pulses::su2::probability_series;
use composite_pulses::tables::{
    check_prime_constructors, prime_table_sequence, TwinBase, PRIME_TABLE, TABLE_TOL, TWIN_FORMULAS,
    TWIN_TABLE, TWIN_THETAS,
};
use composite_pulses::CompositeSequence;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn grid201() -> Vec<f64> {
    uniform_grid(-1.0, 1.0, 201).unwrap()
}

fn closed_form_conformance() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 2..=20 {
        for f in HalfPiFamily::ALL {
            let s = f.build(n).unwrap();
            for &e in &grid201() {
                worst = worst.max((s.probability(e) - f.probability(n, e)).abs());
            }
        }
    }
    outcome(worst < 1e-12, format!("max deviation {worst:.2e}"))
}

fn constructor_table() -> Outcome {
    let checks = check_prime_constructors();
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed).map(|c| c.row.clone()).collect();
    let worst = checks.iter().map(|c| c.max_deviation).fold(0.0, f64::max);
    outcome(
        failed.is_empty() && checks.len() == 52,
        format!("{} entries, max deviation {worst:.2e}pi, failing {failed:?}", checks.len()),
    )
}

/// Solves every 5-pulse row; returns the matched branch per row.
fn solver_table() -> (Outcome, Vec<Option<(f64, CompositeSequence)>>) {
    let seeds = SeedStrategy::default();
    let mut matched = Vec::new();
    let mut worst: f64 = 0.0;
    for row in &PRIME_TABLE {
        let expected = prime_table_sequence(&row.five);
        let t = SolveTemplate::from_letters("ABBBA", row.p()).unwrap();
        let best = solve_phases(&t, &seeds).ok().and_then(|res| {
            res.iter()
                .filter_map(|r| {
                    let s = r.sequence(&t).ok()?;
                    Some((equivalence_distance(&expected, &s)?, s))
                })
                .min_by(|a, b| a.0.total_cmp(&b.0))
        });
        worst = worst.max(best.as_ref().map_or(f64::INFINITY, |b| b.0));
        matched.push(best.map(|(_, s)| (row.p(), s)));
    }
    let passed = worst <= TABLE_TOL;
    (outcome(passed, format!("13 rows, max deviation {worst:.2e}pi")), matched)
}

fn error_orders(five: &[Option<(f64, CompositeSequence)>]) -> Outcome {
    let mut cases: Vec<(String, CompositeSequence, f64, usize)> = Vec::new();
    for row in &PRIME_TABLE {
        let p = row.p();
        let theta = families::theta_from_probability(p).unwrap();
        cases.push((format!("prime2 {}", row.name()), prime_two(p, Branch::Minus).unwrap(), p, 2));
        for v in 1..=4 {
            cases.push((format!("prime3/{v} {}", row.name()), prime_three(p, v).unwrap(), p, 4));
        }
        for v in [FourVariant::A, FourVariant::B] {
            cases.push((format!("aaaa {}", row.name()), prime_four(p, FourClass::Aaaa, v).unwrap(), p, 4));
            cases.push((format!("abba {}", row.name()), prime_four(p, FourClass::Abba, v).unwrap(), p, 6));
        }
        cases.push((format!("6-pulse {}", row.name()), families::twin_asymmetric(3, theta).unwrap(), p, 10));
    }
    for (p, s) in five.iter().flatten() {
        cases.push((format!("5-pulse P={p:.4}"), s.clone(), *p, 8));
    }
    for n in 2..=12 {
        cases.push((format!("sym N={n}"), symmetric_half_pi(n).unwrap(), 0.5, 2 * (n - 1)));
        cases.push((format!("asym N={n}"), asymmetric_half_pi(n).unwrap(), 0.5, 2 * n - 1));
    }
    cases.push(("bb1(pi/2)".into(), bb1(0.5).unwrap(), 0.5, 3));
    let mut bad = Vec::new();
    let mut worst_slope: f64 = 0.0;
    for (name, seq, p, want) in &cases {
        match verify_order(seq, *p) {
            Ok(c) if c.order == *want => worst_slope = worst_slope.max((c.slope - *want as f64).abs()),
            Ok(c) => bad.push(format!("{name}: {} (slope {:.3})", c.order, c.slope)),
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    }
    let all_five = five.iter().all(Option::is_some);
    outcome(
        bad.is_empty() && all_five,
        format!("{} sequences, max |slope - order| {worst_slope:.3}, failing {bad:?}", cases.len()),
    )
}

fn twin_identity() -> Outcome {
    let grid = grid201();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let base_of = |b: TwinBase| match b {
        TwinBase::Symmetric(n) => symmetric_half_pi(n).unwrap(),
        TwinBase::Asymmetric(n) => asymmetric_half_pi(n).unwrap(),
        TwinBase::AsymmetricReversed(n) => families::reverse(&asymmetric_half_pi(n).unwrap()),
    };
    let mut check = |seq: &CompositeSequence, base: &CompositeSequence, theta: f64| {
        count += 1;
        let s2 = libm::sin(PI * theta / 2.0).powi(2);
        for &e in &grid {
            let p = base.probability(e);
            worst = worst.max((seq.probability(e) - 4.0 * p * (1.0 - p) * s2).abs());
        }
    };
    for f in &TWIN_FORMULAS {
        for theta in TWIN_THETAS.iter().chain(&[0.5, 1.0]) {
            check(&f.sequence(*theta).unwrap(), &base_of(f.base), *theta);
        }
    }
    for row in &TWIN_TABLE {
        for (theta, entry) in TWIN_THETAS.iter().zip(row.entries) {
            let seq = CompositeSequence::from_pairs(entry, "twin").unwrap();
            check(&seq, &base_of(row.base), *theta);
        }
    }
    outcome(worst < 1e-12, format!("{count} sequences, max deviation {worst:.2e}"))
}

fn catalog() -> Vec<CompositeSequence> {
    let mut v = Vec::new();
    for row in &PRIME_TABLE {
        let p = row.p();
        v.push(prime_two(p, Branch::Plus).unwrap());
        v.push(prime_three(p, 1).unwrap());
        v.push(prime_four(p, FourClass::Abba, FourVariant::A).unwrap());
        v.push(prime_four(p, FourClass::Aaaa, FourVariant::B).unwrap());
        v.push(prime_table_sequence(&row.five));
    }
    for n in 2..=8 {
        v.push(symmetric_half_pi(n).unwrap());
        v.push(asymmetric_half_pi(n).unwrap());
        v.push(families::twin_asymmetric_reversed(n, 0.3).unwrap());
    }
    v.push(bb1(0.5).unwrap());
    v.push(levitt_ernst(4).unwrap());
    v.push(levitt_ernst(8).unwrap());
    v
}

fn equivalence_suite() -> Outcome {
    let grid = grid201();
    let mut worst: f64 = 0.0;
    let mut worst_rev: f64 = 0.0;
    for seq in catalog() {
        let turns: Vec<i64> = (0..seq.len() as i64).map(|k| k % 3 - 1).collect();
        let transforms = [
            Transform::Negate,
            Transform::AddTurns(turns),
            Transform::Reverse,
            Transform::GlobalShift(0.2),
        ];
        for t in &transforms {
            let other = equivalent(&seq, t).unwrap();
            for &e in &grid {
                worst = worst.max((seq.probability(e) - other.probability(e)).abs());
            }
        }
        let rev = seq.reversed();
        for &e in &grid {
            let u = seq.propagator(e);
            let r = rev.propagator(e);
            worst_rev = worst_rev.max((r.a - u.a.conj()).norm()).max((r.b - u.b).norm());
        }
    }
    outcome(
        worst < 1e-12 && worst_rev < 1e-12,
        format!("profile deviation {worst:.2e}, reversal relation {worst_rev:.2e}"),
    )
}

fn bb1_comparison() -> Outcome {
    let grid = uniform_grid(-0.2, 0.2, 401).unwrap();
    let c = compare(
        &[asymmetric_half_pi(5).unwrap(), prime_three(0.5, 4).unwrap(), bb1(0.5).unwrap()],
        &grid,
    )
    .unwrap();
    let [asym, three, bb] = [c.max_in_band[0], c.max_in_band[1], c.max_in_band[2]];
    outcome(
        asym < bb && three < bb,
        format!("max |P-1/2| on |eps|<=0.2: asym N=5 {asym:.3e}, 3-pulse {three:.3e}, BB1 {bb:.3e}"),
    )
}

fn window_claims() -> Outcome {
    let rows = window_audit(20).unwrap();
    let mut table = String::new();
    for r in &rows {
        table.push_str(&format!(
            "\n      eps={:.1} {:<4} claimed {} closed-form {} oracle {} eps*={:.6}/{:.6}{}",
            r.eps_req,
            r.family.name(),
            r.claimed,
            r.closed_form,
            r.oracle,
            r.eps_star_closed_form,
            r.eps_star_oracle,
            if r.matches_claim() { "" } else { "  (differs from claim)" }
        ));
    }
    let agree = rows.iter().all(|r| r.methods_agree());
    let mid = rows.iter().filter(|r| r.eps_req == 0.2).all(|r| r.matches_claim());
    outcome(agree && mid, format!("methods agree {agree}, eps=0.2 matches {mid}{table}"))
}

fn random_sequence(rng: &mut ChaCha8Rng) -> CompositeSequence {
    let n = rng.gen_range(1..=10);
    let pairs: Vec<(f64, f64)> = (0..n)
        .map(|_| (if rng.gen_bool(0.5) { 0.5 } else { 1.0 }, rng.gen_range(0.0..2.0)))
        .collect();
    CompositeSequence::from_pairs(&pairs, "random").unwrap()
}

fn property_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2018);
    let mut unitarity: f64 = 0.0;
    let mut series: f64 = 0.0;
    for _ in 0..100 {
        let s = random_sequence(&mut rng);
        for i in 0..41 {
            let e = -1.0 + i as f64 * 0.05;
            unitarity = unitarity.max(s.propagator(e).unitarity_defect());
        }
        let c = probability_series(&s, 24).unwrap();
        for e in [-0.05, -0.01, 0.02, 0.04] {
            let sum: f64 = c.iter().rev().fold(0.0, |acc, &k| acc * e + k);
            series = series.max((sum - s.probability(e)).abs());
        }
    }
    let mut parity: f64 = 0.0;
    let mut flattening = true;
    for i in 0..=50 {
        let e = i as f64 * 0.01;
        for f in HalfPiFamily::ALL {
            let mut last = f64::INFINITY;
            for n in 2..=12 {
                let s = f.build(n).unwrap();
                let (d_pos, d_neg) = (s.probability(e) - 0.5, s.probability(-e) - 0.5);
                parity = parity.max(match f {
                    HalfPiFamily::Symmetric => (d_pos - d_neg).abs(),
                    HalfPiFamily::Asymmetric => (d_pos + d_neg).abs(),
                });
                let d = d_pos.abs();
                if d > last + 1e-15 {
                    flattening = false;
                }
                last = d;
            }
        }
    }
    let passed = unitarity < 1e-12 && series < 1e-10 && parity < 1e-12 && flattening;
    outcome(
        passed,
        format!(
            "100 random sequences: unitarity {unitarity:.1e}, series {series:.1e}; parity {parity:.1e}, flattening {flattening}"
        ),
    )
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let r = f();
    (r, t.elapsed())
}

#[test]
fn acceptance() {
    let mut results: Vec<(u32, &str, Outcome, Duration, Option<Duration>)> = Vec::new();
    let (o, d) = timed(closed_form_conformance);
    results.push((1, "closed-form conformance", o, d, Some(Duration::from_secs(1))));
    let (o, d) = timed(constructor_table);
    results.push((2, "table reproduction (constructors)", o, d, Some(Duration::from_secs(1))));
    let ((o, five), d) = timed(solver_table);
    results.push((3, "table reproduction (solver)", o, d, Some(Duration::from_secs(60))));
    let (o, d) = timed(|| error_orders(&five));
    results.push((4, "error orders", o, d, Some(Duration::from_secs(5))));
    let (o, d) = timed(twin_identity);
    results.push((5, "twin identity", o, d, None));
    let (o, d) = timed(equivalence_suite);
    results.push((6, "equivalence suite", o, d, None));
    let (o, d) = timed(bb1_comparison);
    results.push((7, "BB1 comparison", o, d, None));
    let (o, d) = timed(window_claims);
    results.push((8, "window claim audit", o, d, None));
    let (o, d) = timed(property_suite);
    results.push((9, "property suite", o, d, None));

    let mut all = true;
    for (id, name, o, d, limit) in &results {
        let in_time = limit.is_none_or(|l| *d < l);
        let ok = o.passed && in_time;
        all &= ok;
        let budget = limit.map_or(String::new(), |l| format!(" / {:.0}s", l.as_secs_f64()));
        println!(
            "criterion {id} {}: {name} [{:.2}s{budget}] {}",
            if ok { "PASS" } else { "FAIL" },
            d.as_secs_f64(),
            o.detail
        );
    }
    assert!(all, "acceptance criteria failed");
}
