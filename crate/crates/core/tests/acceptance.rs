//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use unitcon::decomp::{angular_distance, ui_singular_values, unsv_signature, Signature};
use unitcon::experiments::{fit_experiment, signature_experiment, FitConfig, NoiseConfig, Norm};
use unitcon::inverse::{block_uc_inverse, linv, rinv, uinv, uinv_from_scaling, BlockSplit};
use unitcon::rng::{random_gaussian, random_nonsingular_diagonal, random_orthogonal, Rng};
use unitcon::scaling::{dscale, su_closed_form, DiagonalScaling, ScalingOptions};
use unitcon::spectral::{pinv, rank};
use unitcon::{DiagonalFactor, Matrix};

type Check = Result<String, String>;

fn m(rows: &[&[f64]]) -> Matrix {
    Matrix::from_rows(rows).unwrap()
}

fn expect(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(label: &str, got: &Matrix, want: &Matrix, tol: f64) -> Result<(), String> {
    let d = got.max_abs_diff(want).map_err(|e| e.to_string())?;
    expect(d <= tol, || {
        format!("{label}: deviation {d:.3e} > {tol:.0e}\n{got:?}")
    })
}

fn worked_pair() -> (Matrix, DiagonalFactor) {
    (
        m(&[&[0.5, -0.5], &[0.5, -0.5]]),
        DiagonalFactor::positive(vec![1.0, 2.0]).unwrap(),
    )
}

fn worked_pinv_example() -> Check {
    let (a, d) = worked_pair();
    let dinv = d.inverse();
    let p = pinv(&a, None).map_err(|e| e.to_string())?;
    within("pinv(A)", &p, &m(&[&[0.5, 0.5], &[-0.5, -0.5]]), 1e-9)?;
    let dpd = p
        .scale_rows(d.entries())
        .unwrap()
        .scale_cols(dinv.entries())
        .unwrap();
    within(
        "D pinv(A) D^-1",
        &dpd,
        &m(&[&[0.5, 0.25], &[-1.0, -0.5]]),
        1e-9,
    )?;
    let pdad = pinv(&dae(&a, &d, &dinv), None).map_err(|e| e.to_string())?;
    within(
        "pinv(D A D^-1)",
        &pdad,
        &m(&[&[0.32, 0.64], &[-0.16, -0.32]]),
        1e-9,
    )?;
    Ok("pinv(A), D pinv(A) D^-1 and pinv(D A D^-1) match to 1e-9".into())
}

fn worked_uinv_example() -> Check {
    let (a, d) = worked_pair();
    let u = uinv(&dae(&a, &d, &d.inverse()), None).map_err(|e| e.to_string())?;
    within(
        "uinv(D A D^-1)",
        &u,
        &m(&[&[0.5, 0.25], &[-1.0, -0.5]]),
        1e-9,
    )?;
    let e = DiagonalFactor::nonsingular(vec![5.0, -3.0]).unwrap();
    let u = uinv(&dae(&a, &d, &e), None).map_err(|e| e.to_string())?;
    let want = m(&[&[0.1, 0.05], &[1.0 / 6.0, 1.0 / 12.0]]);
    within("uinv(D A E)", &u, &want, 1e-9)?;
    Ok("uinv(D A D^-1) and uinv(D A E) match to 1e-9".into())
}

struct SweepCase {
    a: Matrix,
    d: DiagonalFactor,
    e: DiagonalFactor,
}

fn sweep_cases() -> Vec<SweepCase> {
    let mut rng = Rng::new(2024);
    sweep(200, 8, &mut rng)
        .into_iter()
        .map(|(_, a)| {
            let d = random_nonsingular_diagonal(a.rows(), &mut rng);
            let e = random_nonsingular_diagonal(a.cols(), &mut rng);
            SweepCase { a, d, e }
        })
        .collect()
}

fn unit_consistency(cases: &[SweepCase]) -> Check {
    let mut worst = 0.0f64;
    for (i, c) in cases.iter().enumerate() {
        let base = uinv(&c.a, None).map_err(|e| format!("case {i}: {e}"))?;
        let moved = uinv(&dae(&c.a, &c.d, &c.e), None).map_err(|e| format!("case {i}: {e}"))?;
        // E uinv(DAE) D should equal uinv(A)
        let back = dae(&moved, &c.e, &c.d);
        let dev = rel_diff(&back, &base);
        worst = worst.max(dev);
        expect(dev <= 1e-8, || {
            format!(
                "case {i} ({}x{}): deviation {dev:.3e}",
                c.a.rows(),
                c.a.cols()
            )
        })?;
    }
    Ok(format!(
        "{} matrices, max relative deviation {worst:.2e}",
        cases.len()
    ))
}

fn inverse_contracts(cases: &[SweepCase]) -> Check {
    let mut worst = 0.0f64;
    for (i, c) in cases.iter().enumerate() {
        for a in [c.a.clone(), dae(&c.a, &c.d, &c.e)] {
            let g = uinv(&a, None).map_err(|e| format!("case {i}: {e}"))?;
            let aga = a.matmul(&g).unwrap().matmul(&a).unwrap();
            let gag = g.matmul(&a).unwrap().matmul(&g).unwrap();
            let (d1, d2) = (rel_diff(&aga, &a), rel_diff(&gag, &g));
            worst = worst.max(d1).max(d2);
            expect(d1 <= 1e-9, || {
                format!("case {i}: A G A deviates by {d1:.3e}")
            })?;
            expect(d2 <= 1e-9, || {
                format!("case {i}: G A G deviates by {d2:.3e}")
            })?;
            let (ra, rg) = (rank(&a, None).unwrap(), rank(&g, None).unwrap());
            expect(ra == rg, || {
                format!("case {i}: rank(A) = {ra}, rank(G) = {rg}")
            })?;
        }
    }
    Ok(format!(
        "A G A = A, G A G = G (max {worst:.2e}) and rank equality on {} pairs",
        2 * cases.len()
    ))
}

fn scaling_oracle(collected: &mut Vec<DiagonalScaling>) -> Check {
    let mut rng = Rng::new(5150);
    let (mut worst_s, mut worst_u) = (0.0f64, 0.0f64);
    for i in 0..100 {
        let (r, c) = (1 + rng.below(8), 1 + rng.below(8));
        let a = dae(
            &random_gaussian(r, c, &mut rng),
            &random_nonsingular_diagonal(r, &mut rng),
            &random_nonsingular_diagonal(c, &mut rng),
        );
        let it = dscale(&a, ScalingOptions::default()).map_err(|e| e.to_string())?;
        let cf = su_closed_form(&a).map_err(|e| e.to_string())?;
        expect(it.converged, || {
            format!("case {i}: dscale did not converge")
        })?;
        let ds = it.scaled.max_abs_diff(&cf.scaled).unwrap();
        let ui = uinv_from_scaling(&it, None).unwrap();
        let uc = uinv_from_scaling(&cf, None).unwrap();
        let du = rel_diff(&ui, &uc);
        worst_s = worst_s.max(ds);
        worst_u = worst_u.max(du);
        expect(ds <= 1e-10, || {
            format!("case {i}: scaled matrices differ by {ds:.3e}")
        })?;
        expect(du <= 1e-9, || {
            format!("case {i}: inverses differ by {du:.3e}")
        })?;
        collected.push(it);
    }
    Ok(format!(
        "100 matrices, scaled max diff {worst_s:.2e}, uinv max rel diff {worst_u:.2e}"
    ))
}

fn unit_products(scalings: &[DiagonalScaling]) -> Check {
    let mut worst = 0.0f64;
    let mut lines = 0usize;
    for (idx, s) in scalings.iter().enumerate() {
        let a = &s.scaled;
        let row_lines = (0..a.rows()).map(|i| a.row(i).to_vec());
        let col_lines = (0..a.cols()).map(|j| a.col(j));
        for line in row_lines.chain(col_lines) {
            let nz: Vec<f64> = line.into_iter().filter(|&x| x != 0.0).collect();
            if nz.is_empty() {
                continue;
            }
            let p = nz.iter().map(|x| x.abs()).product::<f64>();
            let dev = (p - 1.0).abs();
            worst = worst.max(dev);
            lines += 1;
            expect(dev <= 1e-8, || format!("scaling {idx}: product {p}"))?;
        }
    }
    Ok(format!(
        "{} scalings, {lines} nonzero lines, max |prod - 1| {worst:.2e}",
        scalings.len()
    ))
}

fn ui_invariance() -> Check {
    let mut rng = Rng::new(777);
    let (mut worst_s, mut worst_sig) = (0.0f64, 0.0f64);
    for (i, (_, a)) in sweep(100, 8, &mut rng).into_iter().enumerate() {
        let d = random_nonsingular_diagonal(a.rows(), &mut rng);
        let e = random_nonsingular_diagonal(a.cols(), &mut rng);
        let b = dae(&a, &d, &e);
        let s1 = ui_singular_values(&a).map_err(|e| e.to_string())?;
        let s2 = ui_singular_values(&b).map_err(|e| e.to_string())?;
        let scale = if s1[0] > 0.0 { s1[0] } else { 1.0 };
        let ds = s1
            .iter()
            .zip(&s2)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
            / scale;
        worst_s = worst_s.max(ds);
        expect(ds <= 1e-9, || {
            format!("case {i}: singular values differ by {ds:.3e}")
        })?;
        let p = unsv_signature(&a, 5).unwrap();
        let q = unsv_signature(&b, 5).unwrap();
        let dsig = p
            .values()
            .iter()
            .zip(q.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        worst_sig = worst_sig.max(dsig);
        expect(dsig <= 1e-9, || {
            format!("case {i}: signatures differ by {dsig:.3e}")
        })?;
    }
    Ok(format!(
        "100 triples, values max rel diff {worst_s:.2e}, signatures {worst_sig:.2e}"
    ))
}

fn left_right_consistency() -> Check {
    let mut rng = Rng::new(31337);
    let mut worst = 0.0f64;
    for (i, (_, a)) in sweep(100, 8, &mut rng).into_iter().enumerate() {
        let d = random_nonsingular_diagonal(a.rows(), &mut rng);
        let e = random_nonsingular_diagonal(a.cols(), &mut rng);
        let base = linv(&a, None).unwrap();
        // linv(D A) D = linv(A)
        let back = linv(&a.scale_rows(d.entries()).unwrap(), None)
            .unwrap()
            .scale_cols(d.entries())
            .unwrap();
        let dl = rel_diff(&back, &base);
        let base = rinv(&a, None).unwrap();
        let back = rinv(&a.scale_cols(e.entries()).unwrap(), None)
            .unwrap()
            .scale_rows(e.entries())
            .unwrap();
        let dr = rel_diff(&back, &base);
        worst = worst.max(dl).max(dr);
        expect(dl <= 1e-9 && dr <= 1e-9, || {
            format!("case {i}: left {dl:.3e}, right {dr:.3e}")
        })?;
    }
    let mut worst_inv = 0.0f64;
    for i in 0..100 {
        let n = 1 + rng.below(8);
        let a = random_orthogonal(n, &mut rng)
            .scale_cols(
                &(0..n)
                    .map(|_| rng.uniform_range(1.0, 10.0))
                    .collect::<Vec<_>>(),
            )
            .unwrap()
            .matmul(&random_orthogonal(n, &mut rng))
            .unwrap();
        let want = oracle_inverse(&a);
        for (name, got) in [
            ("linv", linv(&a, None).unwrap()),
            ("rinv", rinv(&a, None).unwrap()),
        ] {
            let dev = rel_diff(&got, &want);
            worst_inv = worst_inv.max(dev);
            expect(dev <= 1e-9, || {
                format!("nonsingular case {i}: {name} off by {dev:.3e}")
            })?;
        }
    }
    Ok(format!(
        "consistency max {worst:.2e}; nonsingular inverse max {worst_inv:.2e}"
    ))
}

fn block_inverse() -> Check {
    let mut rng = Rng::new(4242);
    let split = BlockSplit { k: 3 };
    let mut worst = 0.0f64;
    for i in 0..50 {
        let r = 3 + i % 3;
        let a = random_gaussian(6, r, &mut rng)
            .matmul(&random_gaussian(r, 6, &mut rng))
            .unwrap();
        let (d1, d2) = (
            random_nonsingular_diagonal(3, &mut rng),
            random_nonsingular_diagonal(3, &mut rng),
        );
        let (q1, q2) = (
            random_orthogonal(3, &mut rng),
            random_orthogonal(3, &mut rng),
        );
        let t1 = blockdiag(d1.entries(), &q1);
        let t2 = blockdiag(d2.entries(), &q2);
        let b = t1.matmul(&a).unwrap().matmul(&t2).unwrap();
        let base = block_uc_inverse(&a, split, None).map_err(|e| format!("case {i}: {e}"))?;
        let moved = block_uc_inverse(&b, split, None).map_err(|e| format!("case {i}: {e}"))?;
        // T2 inv(T1 A T2) T1 should equal inv(A)
        let back = t2.matmul(&moved).unwrap().matmul(&t1).unwrap();
        let dev = rel_diff(&back, &base);
        worst = worst.max(dev);
        expect(dev <= 1e-7, || {
            format!("singular case {i} (rank {r}): deviation {dev:.3e}")
        })?;
    }
    let mut worst_dense = 0.0f64;
    for i in 0..50 {
        let s: Vec<f64> = (0..6).map(|_| rng.uniform_range(1.0, 4.0)).collect();
        let a = random_orthogonal(6, &mut rng)
            .scale_cols(&s)
            .unwrap()
            .matmul(&random_orthogonal(6, &mut rng))
            .unwrap();
        let got = block_uc_inverse(&a, split, None).map_err(|e| format!("case {i}: {e}"))?;
        let dev = rel_diff(&got, &oracle_inverse(&a));
        worst_dense = worst_dense.max(dev);
        expect(dev <= 1e-8, || {
            format!("nonsingular case {i}: deviation {dev:.3e}")
        })?;
    }
    Ok(format!(
        "singular max {worst:.2e}; nonsingular vs dense inverse max {worst_dense:.2e}"
    ))
}

fn fit_trend() -> Check {
    let cfg = FitConfig {
        m: 7,
        n_values: vec![50, 100, 200, 500],
        trials: 200,
        norm: Norm::L1,
        seed: 42,
    };
    let report = fit_experiment(&cfg).map_err(|e| e.to_string())?;
    let fr: Vec<String> = report
        .rows
        .iter()
        .map(|r| format!("n={}:{:.3}", r.n, r.fraction))
        .collect();
    let first = report.rows.first().unwrap().fraction;
    let last = report.rows.last().unwrap().fraction;
    expect(last > 0.5, || format!("fraction at largest n is {last}"))?;
    expect(last > first, || format!("no increase: {first} -> {last}"))?;
    Ok(fr.join(" "))
}

fn signature_robustness() -> Check {
    let clean = signature_experiment(&NoiseConfig {
        quantize: false,
        trials: 100,
        ..Default::default()
    })
    .map_err(|e| e.to_string())?;
    let worst = clean
        .trials
        .iter()
        .map(|t| t.unsv_self_max)
        .fold(0.0, f64::max);
    expect(worst <= 1e-9, || {
        format!("unquantized UNSV self-distance {worst:.3e}")
    })?;
    let noisy = signature_experiment(&NoiseConfig {
        quantize: true,
        trials: 100,
        ..Default::default()
    })
    .map_err(|e| e.to_string())?;
    let wins = noisy
        .trials
        .iter()
        .filter(|t| t.unsv_self < t.nsv_self)
        .count();
    expect(wins >= 95, || {
        format!("UNSV closer on only {wins}/100 trials")
    })?;
    Ok(format!(
        "unquantized max UNSV self {worst:.2e}; quantized UNSV < NSV on {wins}/100 (means {:.2e} vs {:.2e})",
        noisy.mean(|t| t.unsv_self),
        noisy.mean(|t| t.nsv_self)
    ))
}

fn metric_properties() -> Check {
    let mut rng = Rng::new(99);
    let unit = |rng: &mut Rng| {
        let v: Vec<f64> = (0..5).map(|_| rng.uniform()).collect();
        Signature::from_singular_values(&v, 5).unwrap()
    };
    let mut max_slack = f64::NEG_INFINITY;
    for i in 0..1000 {
        let (p, q, r) = (unit(&mut rng), unit(&mut rng), unit(&mut rng));
        let d = |x: &Signature, y: &Signature| angular_distance(x, y).unwrap();
        expect(d(&p, &p) <= 1e-12, || {
            format!("triple {i}: d(p, p) = {}", d(&p, &p))
        })?;
        expect(p == q || d(&p, &q) > 1e-12, || {
            format!("triple {i}: distinct vectors at distance 0")
        })?;
        expect((d(&p, &q) - d(&q, &p)).abs() <= 1e-12, || {
            format!("triple {i}: asymmetric")
        })?;
        let slack = d(&p, &r) - d(&p, &q) - d(&q, &r);
        max_slack = max_slack.max(slack);
        expect(slack <= 1e-12, || {
            format!("triple {i}: triangle inequality violated by {slack:.3e}")
        })?;
    }
    Ok(format!("1000 triples, max triangle slack {max_slack:.2e}"))
}

fn run(id: usize, name: &str, budget: Option<Duration>, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    let elapsed = start.elapsed();
    let outcome = match (outcome, budget) {
        (Ok(_), Some(b)) if elapsed > b => Err(format!("took {elapsed:.2?}, budget {b:?}")),
        (o, _) => o,
    };
    let (tag, detail) = match &outcome {
        Ok(d) => ("PASS", d.as_str()),
        Err(d) => ("FAIL", d.as_str()),
    };
    println!("{tag} [{id:>2}] {name}: {detail} ({elapsed:.2?})");
    outcome.is_ok()
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let cases = sweep_cases();
    let mut scalings: Vec<DiagonalScaling> = cases
        .iter()
        .flat_map(|c| [c.a.clone(), dae(&c.a, &c.d, &c.e)])
        .map(|a| dscale(&a, ScalingOptions::default()).unwrap())
        .collect();

    let results = [
        run(
            1,
            "worked pseudoinverse example",
            Some(secs(1)),
            worked_pinv_example,
        ),
        run(
            2,
            "worked unit-consistent inverse example",
            Some(secs(1)),
            worked_uinv_example,
        ),
        run(3, "unit-consistency sweep", Some(secs(30)), || {
            unit_consistency(&cases)
        }),
        run(4, "generalized-inverse contracts", None, || {
            inverse_contracts(&cases)
        }),
        run(
            5,
            "iterative vs closed-form scaling",
            Some(secs(10)),
            || scaling_oracle(&mut scalings),
        ),
        run(6, "unit-product condition", None, || {
            unit_products(&scalings)
        }),
        run(7, "unit-invariant singular values", None, ui_invariance),
        run(8, "left/right consistency", None, left_right_consistency),
        run(9, "block mixed inverse", None, block_inverse),
        run(10, "F_R vs F_P fit trend", Some(secs(300)), fit_trend),
        run(
            11,
            "signature robustness",
            Some(secs(60)),
            signature_robustness,
        ),
        run(12, "angular distance metric", None, metric_properties),
    ];
    let failed = results.iter().filter(|&&ok| !ok).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
