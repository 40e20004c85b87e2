use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use weno_cli::run_cli;
use weno_core::harness::{render_report, ReportFormat};
use weno_core::smoothness::{indicator_closed_form, indicator_quadrature, undivided_differences};
use weno_core::weights::{classical_optimal_weights, constant_tree_weights};
use weno_core::{
    aitken_combine, locate_singular_interval, run_refinement, run_refinement_fn, substencil_value, time_method,
    Interpolator, MethodSpec, PointValues, RefinementReport, Stencil, TestFunctionSpec, UniformGrid,
};

type Check = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Check);

fn ok_if(cond: bool, detail: String) -> Check {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn finest(rep: &RefinementReport, d: i64) -> f64 {
    rep.finest_defined_order(d).map_or(f64::NAN, |(_, o)| o)
}

fn near(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol
}

fn kink() -> TestFunctionSpec {
    TestFunctionSpec::new(0).unwrap()
}

fn ac1() -> Check {
    let w3 = classical_optimal_weights::<f64>(3).unwrap();
    let w4 = classical_optimal_weights::<f64>(4).unwrap();
    let e3 = [3.0 / 16.0, 10.0 / 16.0, 3.0 / 16.0];
    let e4 = [1.0 / 16.0, 7.0 / 16.0, 7.0 / 16.0, 1.0 / 16.0];
    let err = w3
        .as_slice()
        .iter()
        .zip(&e3)
        .chain(w4.as_slice().iter().zip(&e4))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    ok_if(err <= 1e-15, format!("max abs error {err:e}"))
}

fn ac2() -> Check {
    let mut worst = 0.0f64;
    for r in 3..=8 {
        let t = constant_tree_weights::<f64>(r).map_err(|e| e.to_string())?;
        let c = classical_optimal_weights::<f64>(r).unwrap();
        for (a, b) in t.iter().zip(c.as_slice()) {
            worst = worst.max((a - b).abs());
        }
    }
    ok_if(worst <= 1e-14, format!("r=3..8 max abs error {worst:e}"))
}

fn random_stencil(rng: &mut StdRng, r: usize) -> Vec<f64> {
    (0..2 * r).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn ac3() -> Check {
    let mut rng = StdRng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for r in 3..=5 {
        for _ in 0..1000 {
            let v = random_stencil(&mut rng, r);
            let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let s = Stencil::new(r, v).unwrap();
            for l in r..=2 * r - 2 {
                for k in 0..=2 * r - 2 - l {
                    let lhs = substencil_value(&s, k, l + 1).unwrap();
                    let vl = substencil_value(&s, k, l).unwrap();
                    let vr = substencil_value(&s, k + 1, l).unwrap();
                    let rhs = aitken_combine(vl, vr, l, k, r).unwrap();
                    worst = worst.max((lhs - rhs).abs() / lhs.abs().max(scale));
                }
            }
        }
    }
    ok_if(worst <= 1e-11, format!("3000 stencils, max relative error {worst:e}"))
}

fn ac4() -> Check {
    let mut rng = StdRng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for r in 3..=4 {
        for _ in 0..1000 {
            let v = random_stencil(&mut rng, r);
            let d = undivided_differences(&v).unwrap();
            let s = Stencil::new(r, v).unwrap();
            for k in 0..r {
                let q = indicator_quadrature(&s, k, 2).unwrap();
                let c = indicator_closed_form(&d, r, k).unwrap();
                worst = worst.max((q - c).abs() / q.abs().max(c.abs()).max(1e-300));
            }
        }
    }
    ok_if(worst <= 1e-11, format!("2000 stencils, max relative error {worst:e}"))
}

fn ac5() -> Check {
    let offsets: Vec<i64> = (-3..=3).collect();
    let rep = run_refinement(&kink(), &MethodSpec::progressive(3), 5, 10, &offsets).map_err(|e| e.to_string())?;
    let want = [(-3, 6.09), (-2, 4.98), (-1, 3.99), (1, 4.1), (2, 4.93), (3, 6.02)];
    let mut pass = true;
    let mut got = Vec::new();
    for (d, o) in want {
        let f = finest(&rep, d);
        pass &= near(f, o, 0.25);
        got.push(format!("{f:.2}"));
    }
    let o0 = rep.order_at(10, 0).unwrap_or(f64::NAN);
    pass &= o0.abs() < 1.0 && rep.errors.iter().all(|row| row[3] > 1e-6);
    let e5 = rep.error(5, -3).unwrap();
    pass &= (e5 / 1.575e-08 - 1.0).abs() <= 0.01;
    ok_if(
        pass,
        format!("orders [{}], jump-interval order {o0:.2}, e(5,-3) = {e5:.4e}", got.join(", ")),
    )
}

fn ac6() -> Check {
    let c = run_refinement(&kink(), &MethodSpec::classical(3), 5, 10, &[-2]).map_err(|e| e.to_string())?;
    let p = run_refinement(&kink(), &MethodSpec::progressive(3), 5, 10, &[-2]).map_err(|e| e.to_string())?;
    let (co, po) = (finest(&c, -2), finest(&p, -2));
    ok_if(
        near(co, 3.995, 0.25) && near(po, 4.98, 0.25),
        format!("offset -2: classical {co:.3}, progressive {po:.3}"),
    )
}

fn ac7() -> Check {
    let offs = [-3, -2, -1];
    let p = run_refinement(&kink(), &MethodSpec::progressive(4), 5, 10, &offs).map_err(|e| e.to_string())?;
    let c = run_refinement(&kink(), &MethodSpec::classical(4), 5, 10, &offs).map_err(|e| e.to_string())?;
    let mut pass = true;
    let mut detail = Vec::new();
    for (d, po, co) in [(-3, 7.06, 4.99), (-2, 6.16, 4.98), (-1, 4.98, 4.98)] {
        let (a, b) = (finest(&p, d), finest(&c, d));
        pass &= near(a, po, 0.3) && near(b, co, 0.3);
        detail.push(format!("{d}: {a:.2}/{b:.2}"));
    }
    ok_if(pass, format!("progressive/classical {}", detail.join(", ")))
}

fn ac8() -> Check {
    let offs: Vec<i64> = (-6..=-1).collect();
    let rep = run_refinement(&kink(), &MethodSpec::progressive(5), 5, 10, &offs).map_err(|e| e.to_string())?;
    let a = rep.order_at(6, -6).unwrap_or(f64::NAN);
    let b = rep.order_at(6, -5).unwrap_or(f64::NAN);
    let csv = render_report(&rep, ReportFormat::Csv);
    let dashes = [(9, -6), (10, -6), (10, -4), (10, -2)]
        .iter()
        .all(|(l, d)| csv.lines().any(|line| line.starts_with(&format!("{l},{d},")) && line.ends_with(",-")));
    ok_if(
        near(a, 12.12, 0.5) && near(b, 11.90, 0.5) && dashes,
        format!("i=6 orders {a:.2}, {b:.2}; underflow cells rendered '-': {dashes}"),
    )
}

fn ac9() -> Check {
    let func = TestFunctionSpec::new(1).unwrap();
    let p = run_refinement(&func, &MethodSpec::progressive(3), 5, 10, &[-3, -2, -1]).map_err(|e| e.to_string())?;
    let c = run_refinement(&func, &MethodSpec::classical(3), 5, 10, &[-2, -1]).map_err(|e| e.to_string())?;
    let po: Vec<f64> = [-3, -2, -1].iter().map(|&d| finest(&p, d)).collect();
    let co: Vec<f64> = [-2, -1].iter().map(|&d| finest(&c, d)).collect();
    let pass = near(po[0], 6.09, 0.25)
        && near(po[1], 4.98, 0.25)
        && near(po[2], 3.99, 0.25)
        && co.iter().all(|&o| near(o, 3.99, 0.25));
    ok_if(pass, format!("progressive {po:.2?}, classical {co:.2?}"))
}

fn ac10() -> Check {
    let func = kink();
    let r = 3;
    let g = UniformGrid::new(func.a, func.b, 1024).unwrap();
    let pv = PointValues::sample(|x| func.eval(x), g).unwrap();
    let sing = locate_singular_interval(&g).unwrap();
    let s = sing.index;
    let it = Interpolator::new(MethodSpec::progressive(r)).unwrap();
    let mut worst = 0.0f64;
    let mut count = 0;
    for i in pv.admissible_intervals(r).unwrap() {
        if i == s {
            continue;
        }
        let w = it.evaluate(&pv.stencil(i, r).unwrap()).unwrap().weights.unwrap();
        for k in 0..r {
            // Sub-stencil k covers nodes i+k-r ..= i+k; the kink lies in (x_{s-1}, x_s].
            let (first, last) = (i + k - r, i + k);
            let crosses = if sing.jump_on_node { first < s && last > s } else { first < s && last >= s };
            if crosses {
                worst = worst.max(w[k]);
                count += 1;
            }
        }
    }
    ok_if(
        worst <= 1e-6 && count > 0,
        format!("{count} crossing weights off the singular interval, max {worst:e}"),
    )
}

fn ac11() -> Check {
    let mut pass = true;
    let mut detail = Vec::new();
    for (r, c) in [(3usize, 1.0), (4, 6.0)] {
        for spec in [MethodSpec::progressive(r), MethodSpec::classical(r)] {
            let rep = run_refinement_fn(move |x: f64| (c * x).exp(), -0.5, 0.5, &spec, 5, 7, &[0])
                .map_err(|e| e.to_string())?;
            let o = rep.max_order(rep.levels.len() - 1).unwrap_or(f64::NAN);
            pass &= o >= 2.0 * r as f64 - 0.3;
            detail.push(format!("r={r} {}: {o:.2}", spec.method));
        }
    }
    ok_if(pass, detail.join(", "))
}

fn ac12() -> Check {
    let run = |threads: &str, format: &str| {
        run_cli([
            "weno2r", "--threads", threads, "refine", "--r", "3", "--eta", "0", "--method", "progressive", "--levels",
            "5:10", "--format", format,
        ])
    };
    let mut pass = true;
    for format in ["csv", "markdown", "json"] {
        let a = run("1", format);
        let b = run("1", format);
        let c = run("4", format);
        pass &= a.code == 0 && !a.stdout.is_empty() && a.stdout == b.stdout && a.stdout == c.stdout;
    }
    ok_if(pass, "csv/markdown/json identical across runs and 1 vs 4 threads".into())
}

fn ac13() -> Check {
    let func = kink();
    let sample = |level: u32| {
        let g = UniformGrid::new(func.a, func.b, 1usize << level).unwrap();
        PointValues::sample(|x| func.eval(x), g).unwrap()
    };
    let pv = sample(7);
    let reps = 300;
    let t = |spec: MethodSpec| time_method(&pv, &spec, reps).map_err(|e| e.to_string());
    let p3 = t(MethodSpec::progressive(3))?;
    let c3 = t(MethodSpec::classical(3))?;
    let p5 = t(MethodSpec::progressive(5))?;
    let ratio = p3 / c3;
    ok_if(
        (0.2..=5.0).contains(&ratio) && p5 > p3,
        format!("r=3 J=128 progressive/classical = {ratio:.3}; progressive r=5/r=3 = {:.3}", p5 / p3),
    )
}

fn main() {
    let checks: [Criterion; 13] = [
        ("AC1", "optimal weight golden values", ac1),
        ("AC2", "tree recombination r=3..8", ac2),
        ("AC3", "Aitken identity on random stencils", ac3),
        ("AC4", "indicator closed forms vs quadrature", ac4),
        ("AC5", "progressive r=3 kink table", ac5),
        ("AC6", "classical r=3 stalls near the kink", ac6),
        ("AC7", "r=4 progressive vs classical", ac7),
        ("AC8", "r=5 spot check and underflow markers", ac8),
        ("AC9", "jump-in-function runs", ac9),
        ("AC10", "weight collapse across the kink", ac10),
        ("AC11", "smooth-region convergence", ac11),
        ("AC12", "refine output determinism", ac12),
        ("AC13", "timing sanity", ac13),
    ];
    let mut failed = 0;
    for (id, name, f) in checks {
        match f() {
            Ok(d) => println!("PASS {id} {name}: {d}"),
            Err(d) => {
                failed += 1;
                println!("FAIL {id} {name}: {d}");
            }
        }
    }
    println!("{} passed, {failed} failed", checks.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
