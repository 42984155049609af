use fracvar::geometry::SetSpec;
use fracvar::kernel::AlphaContext;
use fracvar::quadrature::{mc_singular_integral_set, singular_integral_set, QuadratureConfig};
use fracvar::vecn::VecN;
use std::time::Instant;

#[test]
fn halfspace_probe() {
    for n in [1usize, 2] {
        for alpha in [0.25, 0.5, 0.75] {
            let ctx = AlphaContext::new(n, alpha).unwrap();
            let hs = SetSpec::half_space(VecN::zeros(n), VecN::basis(n, n - 1)).unwrap();
            let cfg = QuadratureConfig {
                tail_radius: 1e10,
                tol: 1e-3,
                max_depth: 40,
                ..Default::default()
            };
            for d in [0.1, 1.0, 10.0] {
                let mut x = VecN::zeros(n);
                x[n - 1] = d;
                let t0 = Instant::now();
                let r = singular_integral_set(&hs, &x, &ctx, &cfg).unwrap();
                let exact = ctx.mu_1() / ctx.mu() / alpha * f64::powf(d, -alpha);
                let rel = (r.value[n - 1] - exact).abs() / exact;
                println!(
                    "n={n} a={alpha} d={d}: rel={rel:.2e} bar={:.2e} evals={} t={:?} tol_ok={}",
                    r.abs_error_estimate / exact,
                    r.evaluations,
                    t0.elapsed(),
                    r.within_tol
                );
            }
        }
    }
}

#[test]
fn ball_probe() {
    let ctx = AlphaContext::new(2, 0.5).unwrap();
    let ball = SetSpec::ball(VecN::zeros(2), 1.0).unwrap();
    let cfg = QuadratureConfig { tol: 1e-3, max_depth: 34, ..Default::default() };
    for x in [[2.0, 0.0], [1.5, 0.7], [0.5, 0.0], [0.0, 0.0], [0.3, 0.4]] {
        let xv = VecN::from_slice(&x);
        let t0 = Instant::now();
        let r = singular_integral_set(&ball, &xv, &ctx, &cfg).unwrap();
        let oracle = fracvar::oracles::ball_gradient(&VecN::zeros(2), 1.0, &xv, &ctx).unwrap();
        let o = oracle.scale(1.0 / ctx.mu());
        let diff: f64 = r.value.sub(&o).norm();
        let onorm: f64 = o.norm();
        let rel = diff / onorm.max(1e-12);
        println!(
            "x={x:?}: rel={rel:.2e} |v|={:.5} bar={:.2e} evals={} t={:?}",
            r.value.norm(),
            r.abs_error_estimate,
            r.evaluations,
            t0.elapsed()
        );
    }
}

#[test]
fn mc_probe() {
    let ctx = AlphaContext::new(2, 0.5).unwrap();
    let ball = SetSpec::ball(VecN::zeros(2), 1.0).unwrap();
    let cfg = QuadratureConfig { mc_samples: 1_000_000, ..Default::default() };
    let x = VecN::from_slice(&[1.5, 0.7]);
    let t0 = Instant::now();
    let r = mc_singular_integral_set(&ball, &x, &ctx, &cfg).unwrap();
    let o = fracvar::oracles::ball_gradient(&VecN::zeros(2), 1.0, &x, &ctx)
        .unwrap()
        .scale(1.0 / ctx.mu());
    println!(
        "mc: v={:?} vs {:?}, se={:.3e}, t={:?}",
        r.value.as_slice(),
        o.as_slice(),
        r.abs_error_estimate,
        t0.elapsed()
    );
}

#[test]
fn cost_vs_tol() {
    let ctx = AlphaContext::new(2, 0.5).unwrap();
    let ball = SetSpec::ball(VecN::zeros(2), 1.0).unwrap();
    for (tol, md, mc) in [(1e-2, 26, 50_000), (3e-3, 30, 100_000), (1e-3, 34, 400_000)] {
        let cfg = QuadratureConfig { tol, max_depth: md, max_cells: mc, ..Default::default() };
        for x in [[1.5, 0.7], [0.01, 0.0], [1.001, 0.0]] {
            let xv = VecN::from_slice(&x);
            let t0 = Instant::now();
            let r = singular_integral_set(&ball, &xv, &ctx, &cfg).unwrap();
            let oracle = fracvar::oracles::ball_gradient(&VecN::zeros(2), 1.0, &xv, &ctx).unwrap();
            let o = oracle.scale(1.0 / ctx.mu());
            let diff: f64 = r.value.sub(&o).norm();
            let onorm: f64 = o.norm();
            println!(
                "tol={tol:.0e} x={x:?}: rel={:.2e} bar={:.2e} evals={} t={:?}",
                diff / onorm.max(1e-12),
                r.abs_error_estimate / onorm.max(1e-12),
                r.evaluations,
                t0.elapsed()
            );
        }
    }
}
