//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::time::{Duration, Instant};

use qcomb_core::exactnum::{lift, Sampler, SamplerConfig};
use qcomb_core::polyweights::PolyParams;
use qcomb_core::residues;
use qcomb_core::verify::{self, Check, Field, Report, RunConfig, Verdict};
use qcomb_core::Rational;

struct Outcome {
    ok: bool,
    detail: String,
}

fn cfg(check: Check, ell: usize, n: usize) -> RunConfig {
    RunConfig { ell, n, ..RunConfig::new(check) }
}

fn windowed(check: Check, ell: usize, n: usize, i: usize, j: usize) -> RunConfig {
    RunConfig { i, j, ..cfg(check, ell, n) }
}

/// Run every config and require the expected verdict; collects failures.
fn expect(runs: &[RunConfig], want: Verdict, fails: &mut Vec<String>) -> usize {
    for c in runs {
        match verify::run(c) {
            Ok(r) if r.verdict == want => {}
            Ok(r) => fails.push(format!(
                "{} ell={} n={} i={} j={} mutate={} lift={}: {} (wanted {}){}",
                c.check,
                c.ell,
                c.n,
                c.i,
                c.j,
                c.mutate,
                c.lift_condition,
                r.verdict.as_str(),
                want.as_str(),
                r.error.map(|e| format!(" {e}")).unwrap_or_default()
            )),
            Err(e) => fails.push(format!("{} ell={} n={}: {e}", c.check, c.ell, c.n)),
        }
    }
    runs.len()
}

fn mutated(runs: &[RunConfig]) -> Vec<RunConfig> {
    runs.iter().map(|c| RunConfig { mutate: true, ..c.clone() }).collect()
}

fn lifted(runs: &[RunConfig]) -> Vec<RunConfig> {
    runs.iter().map(|c| RunConfig { lift_condition: true, ..c.clone() }).collect()
}

fn finish(fails: Vec<String>, runs: usize, extra: String) -> Outcome {
    let detail = if fails.is_empty() {
        format!("{runs} runs{extra}")
    } else {
        format!("{} of {runs} runs wrong: {}", fails.len(), fails.join("; "))
    };
    Outcome { ok: fails.is_empty(), detail }
}

fn window_configs(check: Check, ells: std::ops::RangeInclusive<usize>, ns: &[usize]) -> Vec<RunConfig> {
    let mut out = Vec::new();
    for ell in ells {
        for &n in ns {
            for i in 1..=n {
                for j in i + 1..=n {
                    out.push(windowed(check, ell, n, i, j));
                }
            }
        }
    }
    out
}

fn c1_jing() -> Outcome {
    let start = Instant::now();
    let runs: Vec<_> = (1..=5).map(|ell| cfg(Check::Jing, ell, 1)).collect();
    let mut fails = Vec::new();
    let k = expect(&runs, Verdict::Verified, &mut fails);
    let elapsed = start.elapsed();
    expect(&mutated(&runs), Verdict::Falsified, &mut fails);
    if elapsed > Duration::from_secs(30) {
        fails.push(format!("took {elapsed:?}, budget 30 s"));
    }
    finish(fails, k, format!(", {:.2} s", elapsed.as_secs_f64()))
}

fn c2_id() -> Outcome {
    let mut runs = window_configs(Check::Id1, 1..=3, &[2, 3]);
    runs.extend(window_configs(Check::Id2, 1..=3, &[2, 3]));
    let mut fails = Vec::new();
    let mut k = expect(&runs, Verdict::Verified, &mut fails);
    k += expect(&mutated(&runs), Verdict::Falsified, &mut fails);
    k += expect(&lifted(&runs), Verdict::ConditionNotSatisfied, &mut fails);
    finish(fails, k, String::new())
}

fn c3_pp() -> Outcome {
    let pp: Vec<_> = [(1, 1), (1, 2), (2, 2), (2, 3), (3, 2)].iter().map(|&(l, n)| cfg(Check::Pp, l, n)).collect();
    let resi: Vec<_> = [(1, 1), (1, 2), (2, 1), (2, 2)].iter().map(|&(l, n)| cfg(Check::ResI, l, n)).collect();
    let mut fails = Vec::new();
    let mut k = expect(&pp, Verdict::Verified, &mut fails);
    k += expect(&resi, Verdict::Verified, &mut fails);
    k += expect(&mutated(&pp), Verdict::Falsified, &mut fails);
    k += expect(&mutated(&resi), Verdict::Falsified, &mut fails);
    finish(fails, k, String::new())
}

fn c4_mn() -> Outcome {
    let runs: Vec<_> = [(1, 2), (2, 2)].iter().map(|&(l, n)| cfg(Check::Mn, l, n)).collect();
    let mut fails = Vec::new();
    let mut k = expect(&runs, Verdict::Verified, &mut fails);
    k += expect(&mutated(&runs), Verdict::Falsified, &mut fails);
    finish(fails, k, String::new())
}

fn c5_det() -> Outcome {
    let mut runs = Vec::new();
    for ell in 1..=3 {
        for n in 1..=3 {
            runs.push(cfg(Check::Detq, ell, n));
            runs.push(cfg(Check::Deta, ell, n));
        }
    }
    let mut fails = Vec::new();
    let mut k = expect(&runs, Verdict::Verified, &mut fails);
    k += expect(&mutated(&runs), Verdict::Falsified, &mut fails);
    // the ℓ = 1, n = 2 values
    let mut s = Sampler::new(SamplerConfig::default());
    let mut draw = |name: &str| lift::<Rational>(&s.generic(name, &[]).unwrap()).unwrap();
    let (x1, x2, y1, y2, eta) = (draw("x1"), draw("x2"), draw("y1"), draw("y2"), draw("eta"));
    let pp = PolyParams::new(vec![x1.clone(), x2.clone()], vec![y1.clone(), y2], eta).unwrap();
    let q_want = x1.clone() * x2.clone() * (x2.clone() - x1);
    let a_want = y1 - x2;
    if residues::det_q(1, &pp).unwrap() != q_want || residues::det_q_closed(1, &pp).unwrap() != q_want {
        fails.push("det Q at (1,2) is not x1 x2 (x2 - x1)".into());
    }
    if residues::det_a(1, &pp).unwrap() != a_want || residues::det_a_closed(1, &pp).unwrap() != a_want {
        fails.push("det A at (1,2) is not y1 - x2".into());
    }
    k += 1;
    finish(fails, k, String::new())
}

fn with_order(runs: Vec<RunConfig>, order: usize, trials: usize) -> Vec<RunConfig> {
    runs.into_iter().map(|c| RunConfig { order, trials, ..c }).collect()
}

fn c6_idp() -> Outcome {
    let start = Instant::now();
    let mut runs = window_configs(Check::Idp1, 1..=2, &[1, 2]);
    for ell in 1..=2 {
        for n in 1..=2 {
            runs.push(cfg(Check::Idp2, ell, n));
        }
    }
    let runs = with_order(runs, 6, 2);
    let mut fails = Vec::new();
    let k = expect(&runs, Verdict::Verified, &mut fails);
    let elapsed = start.elapsed();
    expect(&mutated(&runs), Verdict::Falsified, &mut fails);
    let idp1: Vec<_> = runs.iter().filter(|c| c.check == Check::Idp1).cloned().collect();
    expect(&lifted(&idp1), Verdict::ConditionNotSatisfied, &mut fails);
    if elapsed > Duration::from_secs(120) {
        fails.push(format!("took {elapsed:?}, budget 2 min"));
    }
    finish(fails, k, format!(", K=6, {:.2} s", elapsed.as_secs_f64()))
}

fn c7_xx() -> Outcome {
    let runs = with_order([(1, 1), (1, 2), (2, 2)].iter().map(|&(l, n)| cfg(Check::Xx, l, n)).collect(), 6, 3);
    let mut fails = Vec::new();
    let mut k = expect(&runs, Verdict::Verified, &mut fails);
    k += expect(&mutated(&runs), Verdict::Falsified, &mut fails);
    finish(fails, k, ", K=6, y-side sign included".into())
}

fn c8_xt() -> Outcome {
    let mut runs: Vec<_> = [(1, 1), (1, 2), (2, 2)].iter().map(|&(l, n)| cfg(Check::Xt, l, n)).collect();
    runs.extend([(1, 2), (2, 2)].iter().map(|&(l, n)| cfg(Check::Detprod, l, n)));
    let runs = with_order(runs, 6, 3);
    let mut fails = Vec::new();
    let mut k = expect(&runs, Verdict::Verified, &mut fails);
    k += expect(&mutated(&runs), Verdict::Falsified, &mut fails);
    finish(fails, k, ", K=6".into())
}

fn c9_theta() -> Outcome {
    let runs = vec![RunConfig { order: 8, trials: 1, ..cfg(Check::Theta, 0, 1) }];
    let mut fails = Vec::new();
    let mut k = expect(&runs, Verdict::Verified, &mut fails);
    k += expect(&mutated(&runs), Verdict::Falsified, &mut fails);
    finish(fails, k, ", K=8, 5 points".into())
}

fn c10_rll() -> Outcome {
    let rat = RunConfig { depth: 2, ..cfg(Check::Rll, 0, 2) };
    let mut fails = Vec::new();
    let mut k = 0;
    for p in verify::PRIME_MENU {
        let prime = RunConfig { field: Field::Prime(p), ..rat.clone() };
        k += expect(&[rat.clone(), prime.clone()], Verdict::Verified, &mut fails);
        k += expect(&mutated(&[rat.clone(), prime]), Verdict::Falsified, &mut fails);
    }
    finish(fails, k, ", rational and prime verdicts agree".into())
}

fn c11_kbi() -> Outcome {
    let mut runs = Vec::new();
    for ell in 0..=3 {
        for n in 1..=3 {
            runs.push(cfg(Check::Kbi, ell, n));
        }
    }
    let mut fails = Vec::new();
    let mut k = expect(&runs, Verdict::Verified, &mut fails);
    k += expect(&mutated(&runs[4..]), Verdict::Falsified, &mut fails);
    finish(fails, k, String::new())
}

fn c12_bc() -> Outcome {
    let mut runs = window_configs(Check::Bc1, 0..=2, &[2, 3]);
    runs.extend(window_configs(Check::Bc2, 0..=2, &[2, 3]));
    runs.extend(window_configs(Check::Singular, 0..=2, &[2, 3]));
    let mut fails = Vec::new();
    let mut k = expect(&runs, Verdict::Verified, &mut fails);
    k += expect(&mutated(&runs), Verdict::Falsified, &mut fails);
    k += expect(&lifted(&runs), Verdict::ConditionNotSatisfied, &mut fails);
    finish(fails, k, String::new())
}

fn c13_replay() -> Outcome {
    let runs = vec![
        cfg(Check::Jing, 3, 1),
        windowed(Check::Id1, 2, 3, 1, 3),
        RunConfig { field: Field::Prime(998244353), ..cfg(Check::Mn, 2, 2) },
        RunConfig { order: 4, ..cfg(Check::Xx, 1, 2) },
        windowed(Check::Bc2, 1, 2, 1, 2),
        RunConfig { mutate: true, ..cfg(Check::Kbi, 2, 2) },
    ];
    let mut fails = Vec::new();
    for c in &runs {
        let r = verify::run(c).unwrap();
        let back = Report::from_json(&r.to_json()).unwrap();
        match verify::replay(&back) {
            Ok((_, true)) => {}
            Ok((_, false)) => fails.push(format!("{} replay differs", c.check)),
            Err(e) => fails.push(format!("{}: {e}", c.check)),
        }
    }
    finish(fails, runs.len(), String::new())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 13] = [
        ("1 jing identity", c1_jing),
        ("2 id1/id2", c2_id),
        ("3 gram PP and ResI", c3_pp),
        ("4 MN relation", c4_mn),
        ("5 determinants", c5_det),
        ("6 elliptic identities", c6_idp),
        ("7 elliptic gram XX", c7_xx),
        ("8 XT and determinant product", c8_xt),
        ("9 theta ring", c9_theta),
        ("10 RLL", c10_rll),
        ("11 KBI", c11_kbi),
        ("12 BC1/BC2/singular", c12_bc),
        ("13 reproducibility", c13_replay),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let o = f();
        if !o.ok {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {} [{:.1} s]",
            if o.ok { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of 13 criteria passed", 13 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
