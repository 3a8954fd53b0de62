//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Built with `harness = false`, so `cargo test` runs `main`.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::Instant;

use exitpair::bc::{bc_fisher_info, bc_log_density, bc_moment, bc_power, bc_product, bc_root_sample, bc_sample};
use exitpair::bs::{
    bs_log_density, bs_mom_asymptotic_cov, bs_mom_estimate, bs_moments, bs_sample, pivotal_test, random_orthogonal,
};
use exitpair::extended::fit::{model_select, FitResult};
use exitpair::extended::plane::plane_density;
use exitpair::extended::{
    mobius_marginal_log_density, sengupta_fit, sengupta_log_density, shieh_johnson_fit, shieh_johnson_log_density,
    shifted_log_density, vm_copula_fit, vm_copula_log_density, vm_copula_sample,
};
use exitpair::math::quad_torus_2d;
use exitpair::math::wrap_angle;
use exitpair::oracle::oracle_compare;
use exitpair::study::{analytic_ratio, run_study, STANDARD_PSI, STANDARD_SIZES};
use exitpair::univariate::gof::ks_test;
use exitpair::univariate::wrapped_cauchy::{wrapped_cauchy_cdf, wrapped_cauchy_log_density};
use exitpair::univariate::{sphere_area, uniform_sphere_sample, WrappedCauchyParams};
use exitpair::{
    BCParams, BSParams, CirclePairSample, Complex64, DetSign, MobiusMarginalParams, OrthogonalMatrix, PathConfig,
    RngStream, SenGuptaParams, ShiehJohnsonParams, ShiftedParams, StudyGrid, UnitVector, VMCopulaParams,
};
use nalgebra::{DVector, Matrix3};

type Outcome = exitpair::Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Outcome);
type PairLogDensity<'a> = Box<dyn Fn(&UnitVector, &UnitVector) -> exitpair::Result<f64> + 'a>;

const REFERENCE_RATIOS: [[f64; 5]; 5] = [
    [0.919, 0.998, 1.155, 1.620, 4.135],
    [0.963, 1.032, 1.221, 1.749, 4.767],
    [0.980, 1.071, 1.229, 1.795, 4.942],
    [0.977, 1.059, 1.306, 1.827, 5.039],
    [0.992, 1.105, 1.311, 1.891, 5.088],
];

fn c1_ratio_table() -> Outcome {
    let table = run_study(&StudyGrid::standard(2000, 20240)?)?;
    let mut worst = (0.0, 0usize, 0.0f64);
    let mut ok = true;
    for (i, &n) in STANDARD_SIZES.iter().enumerate() {
        for (j, &psi) in STANDARD_PSI.iter().enumerate() {
            let want = REFERENCE_RATIOS[i][j];
            let got = table.cell(i, j).ratio;
            let tol = if want <= 2.0 { 0.10 } else { 0.15 };
            let rel = (got - want).abs() / want;
            ok &= rel <= tol;
            if rel / tol > worst.0 {
                worst = (rel / tol, n, psi);
            }
        }
    }
    Ok((
        ok,
        format!(
            "25 cells, largest deviation {:.0}% of its tolerance at n = {}, psi = {}",
            100.0 * worst.0,
            worst.1,
            worst.2
        ),
    ))
}

fn c2_analytic_row() -> Outcome {
    let want = ["1.010", "1.099", "1.333", "1.961", "5.263"];
    let table = run_study(&StudyGrid::new(vec![10], STANDARD_PSI.to_vec(), 1, 1)?)?;
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for ((&psi, a), w) in STANDARD_PSI.iter().zip(&table.analytic).zip(want) {
        let exact = 1.0 / (1.0 - psi * psi);
        worst = worst.max((a - exact).abs()).max((analytic_ratio(psi) - exact).abs());
        ok &= format!("{a:.3}") == w;
    }
    ok &= worst <= 1e-12;
    let last = table.to_csv(3).lines().last().unwrap_or_default().to_string();
    ok &= last == "inf,1.010,1.099,1.333,1.961,5.263";
    Ok((ok, format!("max error {worst:.1e}, csv row {last}")))
}

fn c3_pivotal() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (k, d) in [2usize, 3, 5].into_iter().enumerate() {
        let mut rng = RngStream::new(3, k as u64);
        let p = BSParams::new(0.6, random_orthogonal(d, &mut rng)?)?;
        let s = bs_sample(&p, 5000, &mut rng);
        let ks = pivotal_test(&s, &p)?;
        ok &= ks.p_value > 0.01;
        parts.push(format!("d = {d}: p = {:.3}", ks.p_value));
    }
    Ok((ok, parts.join(", ")))
}

fn torus(f: impl Fn(f64, f64) -> f64) -> f64 {
    quad_torus_2d(f, 128)
}

fn z(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

fn c4_normalization() -> Outcome {
    let q = OrthogonalMatrix::rotation2(0.9, DetSign::Minus);
    let bs = BSParams::new(0.6, q.clone())?;
    let shifted = ShiftedParams::new(0.6, q, DVector::from_vec(vec![0.2, 0.1]))?;
    let bc = BCParams::plus(Complex64::from_polar(0.7, 1.3))?;
    let mobius = MobiusMarginalParams::new(
        Complex64::from_polar(0.5, 2.0),
        Complex64::new(0.3, -0.2),
        Complex64::new(-0.4, 0.1),
    )?;
    let vm = VMCopulaParams::new(1.0, 4.0, 2.0, 0.5, Complex64::from_polar(0.6, 0.3))?;
    let mut rng = RngStream::new(4, 0);
    let m = Matrix3::from_fn(|_, _| 2.0 * rng.uniform() - 1.0);
    let sg = SenGuptaParams::new(m)?;
    let sj = ShiehJohnsonParams::new([0.0; 3], [1.0; 3])?;
    let sj2 = ShiehJohnsonParams::new([1.0, 2.5, -0.5], [2.0, 0.3, 1.5])?;

    let u = UnitVector::from_angle;
    let totals = [
        ("bs", torus(|a, b| bs_log_density(&u(a), &u(b), &bs).map_or(f64::NAN, f64::exp))),
        ("bc", torus(|a, b| bc_log_density(z(a), z(b), &bc).exp())),
        ("shifted", torus(|a, b| shifted_log_density(&u(a), &u(b), &shifted).map_or(f64::NAN, f64::exp))),
        ("mobius-marginal", torus(|a, b| mobius_marginal_log_density(z(a), z(b), &mobius).exp())),
        ("vm-copula", torus(|a, b| vm_copula_log_density(a, b, &vm).exp())),
        ("sengupta", torus(|a, b| sengupta_log_density(a, b, &sg).exp())),
        ("shieh-johnson", torus(|a, b| shieh_johnson_log_density(a, b, &sj).exp())),
        ("shieh-johnson'", torus(|a, b| shieh_johnson_log_density(a, b, &sj2).exp())),
    ];
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for (_, t) in &totals {
        ok &= (t - 1.0).abs() <= 1e-6;
        worst = worst.max((t - 1.0).abs());
    }

    // d = 3 by Monte Carlo against the product of uniform laws.
    let q3 = random_orthogonal(3, &mut rng)?;
    let bs3 = BSParams::new(0.5, q3.clone())?;
    let sh3 = ShiftedParams::new(0.6, q3, DVector::from_vec(vec![0.2, -0.1, 0.15]))?;
    let area2 = sphere_area(3).powi(2);
    let n = 400_000;
    let mut mc = Vec::new();
    for (name, logf) in [
        ("bs", Box::new(|a: &UnitVector, b: &UnitVector| bs_log_density(a, b, &bs3)) as PairLogDensity),
        ("shifted", Box::new(|a: &UnitVector, b: &UnitVector| shifted_log_density(a, b, &sh3))),
    ] {
        let mut w = Vec::with_capacity(n);
        for _ in 0..n {
            let a = uniform_sphere_sample(3, &mut rng)?;
            let b = uniform_sphere_sample(3, &mut rng)?;
            w.push(logf(&a, &b)?.exp() * area2);
        }
        let mean = w.iter().sum::<f64>() / n as f64;
        let se = (w.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64 / n as f64).sqrt();
        ok &= (mean - 1.0).abs() <= 4.0 * se;
        mc.push(format!("{name} d=3: {mean:.4} +- {se:.4}"));
    }
    Ok((ok, format!("{} torus integrals within {worst:.1e} of 1; {}", totals.len(), mc.join(", "))))
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn c5_moments() -> Outcome {
    let mut rng = RngStream::new(5, 0);
    let q = random_orthogonal(3, &mut rng)?;
    let p = BSParams::new(0.6, q.clone())?;
    let expected = q.matrix() * (0.6 / 3.0);
    let closed = (bs_moments(&p).cross_uv - &expected).abs().max();
    let s = bs_sample(&p, 100_000, &mut rng);
    let mut ok = closed <= 1e-12;
    let mut worst_z: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let xs: Vec<f64> = s.pairs().iter().map(|(u, v)| u.coords()[i] * v.coords()[j]).collect();
            let (m, se) = mean_se(&xs);
            worst_z = worst_z.max((m - expected[(i, j)]).abs() / se);
        }
    }
    ok &= worst_z <= 4.0;

    let mut worst_bc: f64 = 0.0;
    for (k, sign) in [DetSign::Plus, DetSign::Minus].into_iter().enumerate() {
        let bp = BCParams::new(Complex64::from_polar(0.6, 0.7), sign)?;
        let s = bc_sample(&bp, 100_000, &mut RngStream::new(5, 1 + k as u64));
        for j in -3..=3 {
            for l in -3..=3 {
                let vals: Vec<Complex64> = s.pairs().iter().map(|(a, b)| a.powi(j) * b.powi(l)).collect();
                let want = bc_moment(j, l, &bp);
                for part in [|c: &Complex64| c.re, |c: &Complex64| c.im] {
                    let xs: Vec<f64> = vals.iter().map(part).collect();
                    let (m, se) = mean_se(&xs);
                    let dev = (m - part(&want)).abs();
                    if dev > 0.0 {
                        worst_bc = worst_bc.max(dev / se);
                    }
                }
            }
        }
    }
    ok &= worst_bc <= 4.0;
    Ok((
        ok,
        format!("E(UV') largest |z| = {worst_z:.2}; 98 circular moment parts per sign, largest |z| = {worst_bc:.2}"),
    ))
}

fn c6_estimators() -> Outcome {
    let t = run_study(&StudyGrid::new(vec![100], vec![0.5], 2000, 6)?)?;
    let ratio = t.cell(0, 0).ratio;
    let target = 1.0 / (1.0 - 0.25);
    let mut ok = (ratio - target).abs() <= 0.2 * target;

    let q = OrthogonalMatrix::rotation2(0.7, DetSign::Plus);
    let p = BSParams::new(0.5, q.clone())?;
    let sigma = bs_mom_asymptotic_cov(&p).sigma;
    let mu: Vec<f64> = (q.matrix() * 0.5).as_slice().to_vec();
    let (reps, n) = (4000usize, 200usize);
    let mut centered = Vec::with_capacity(reps);
    for r in 0..reps {
        let s = bs_sample(&p, n, &mut RngStream::new(6, r as u64));
        let est = bs_mom_estimate(&s)?;
        let x: Vec<f64> = est.rho_q.as_slice().iter().zip(&mu).map(|(a, m)| (n as f64).sqrt() * (a - m)).collect();
        centered.push(x);
    }
    let mut worst_z: f64 = 0.0;
    for a in 0..4 {
        for b in a..4 {
            let prods: Vec<f64> = centered.iter().map(|x| x[a] * x[b]).collect();
            let (m, se) = mean_se(&prods);
            worst_z = worst_z.max((m - sigma[(a, b)]).abs() / se);
        }
    }
    ok &= worst_z <= 4.0;
    Ok((ok, format!("MSE ratio {ratio:.3} vs {target:.3}; covariance entries largest |z| = {worst_z:.2}")))
}

fn c7_fisher() -> Outcome {
    let psi = Complex64::new(0.5, 0.0);
    let h = 1e-4;
    let n = 4096;
    let ll = |a: f64, b: f64, t: f64| -> exitpair::Result<f64> {
        Ok(wrapped_cauchy_log_density(z(t), &WrappedCauchyParams::new(Complex64::new(a, b))?))
    };
    let mut info = [[0.0; 2]; 2];
    for i in 0..n {
        let t = TAU * i as f64 / n as f64;
        let f0 = ll(psi.re, psi.im, t)?;
        let weight = f0.exp() * TAU / n as f64;
        let haa = (ll(psi.re + h, psi.im, t)? - 2.0 * f0 + ll(psi.re - h, psi.im, t)?) / (h * h);
        let hbb = (ll(psi.re, psi.im + h, t)? - 2.0 * f0 + ll(psi.re, psi.im - h, t)?) / (h * h);
        let hab = (ll(psi.re + h, psi.im + h, t)? - ll(psi.re + h, psi.im - h, t)? - ll(psi.re - h, psi.im + h, t)?
            + ll(psi.re - h, psi.im - h, t)?)
            / (4.0 * h * h);
        info[0][0] -= haa * weight;
        info[1][1] -= hbb * weight;
        info[0][1] -= hab * weight;
    }
    let target = 2.0 / (1.0f64 - 0.25).powi(2);
    let closed = bc_fisher_info(psi)?;
    let ok = (info[0][0] - target).abs() <= 0.02 * target
        && (info[1][1] - target).abs() <= 0.02 * target
        && info[0][1].abs() <= 0.02 * target
        && (closed[(0, 0)] - target).abs() <= 1e-12;
    Ok((
        ok,
        format!(
            "finite-difference information diag ({:.4}, {:.4}), off-diagonal {:.1e}, target {target:.4}",
            info[0][0], info[1][1], info[0][1]
        ),
    ))
}

fn c8_oracle() -> Outcome {
    let cfg = PathConfig::centered(2, 0.5, 1e-5)?;
    let r = oracle_compare(&cfg, 20_000, &mut RngStream::new(8, 0))?;
    let chi2 = r.chi2_inner_product.as_ref().map_or(0.0, |c| c.p_value);
    let ok = (r.mean_inner_product - 0.5).abs() <= 0.03 && chi2 > 0.01;
    let bias = r.bias.as_ref().map_or(String::from("no bias check"), |b| {
        format!("coarse/fine shift {:.4} vs predicted {:.4}", b.shift, b.predicted_shift)
    });
    Ok((
        ok,
        format!("mean u'Qv {:.4} +- {:.4}, chi-square p = {chi2:.3}; {bias}", r.mean_inner_product, r.mean_std_error),
    ))
}

fn c9_model_choice() -> Outcome {
    let tables: [[(f64, usize, &str, &str); 3]; 2] = [
        [(-65.9, 6, "143.8", "152.2"), (-68.2, 8, "152.4", "163.6"), (-70.9, 6, "153.8", "162.2")],
        [(-89.8, 6, "191.6", "200.0"), (-82.0, 8, "180.0", "191.2"), (-89.9, 6, "191.8", "200.2")],
    ];
    let names = ["vm-copula", "sengupta", "shieh-johnson"];
    let mut ok = true;
    let mut best = Vec::new();
    for rows in &tables {
        let fits: Vec<FitResult> =
            rows.iter().zip(names).map(|(&(ll, k, _, _), name)| FitResult::from_loglik(name, ll, k, 30)).collect();
        for (f, &(_, _, aic, bic)) in fits.iter().zip(rows) {
            ok &= format!("{:.1}", f.aic) == aic && format!("{:.1}", f.bic) == bic;
        }
        let ranked = model_select(&fits)?;
        let by_bic = ranked.iter().find(|r| r.bic_rank == 1).map(|r| r.model.clone()).unwrap_or_default();
        best.push((ranked[0].model.clone(), by_bic));
    }
    ok &= best[0] == ("vm-copula".into(), "vm-copula".into()) && best[1] == ("sengupta".into(), "sengupta".into());
    let tables_ok = ok;

    let truth = VMCopulaParams::new(1.89, 2.01, 1.03, 1.19, Complex64::from_polar(0.75, 6.24))?;
    let trials = 50;
    let mut wins = 0;
    for t in 0..trials {
        let data = vm_copula_sample(&truth, 200, &mut RngStream::new(9, t))?;
        let fits = [
            vm_copula_fit(&data, None)?.result,
            sengupta_fit(&data, None)?.result,
            shieh_johnson_fit(&data, None)?.result,
        ];
        if model_select(&fits)?[0].model == "vm-copula" {
            wins += 1;
        }
    }
    ok &= wins * 10 >= trials * 8;
    Ok((ok, format!("tables reproduced: {tables_ok}; vm-copula best by AIC in {wins}/{trials} synthetic trials")))
}

fn reduced_ks(s: &CirclePairSample, psi: Complex64) -> exitpair::Result<f64> {
    let p = WrappedCauchyParams::new(psi)?;
    let angles: Vec<f64> = s.reduced(DetSign::Plus).iter().map(|w| wrap_angle(w.arg())).collect();
    Ok(ks_test(&angles, |t| wrapped_cauchy_cdf(t, &p))?.p_value)
}

fn c10_identities() -> Outcome {
    let n = 5000;
    let (psi1, psi2) = (Complex64::from_polar(0.7, 0.5), Complex64::from_polar(0.8, -1.2));
    let s1 = bc_sample(&BCParams::plus(psi1)?, n, &mut RngStream::new(10, 0));
    let s2 = bc_sample(&BCParams::plus(psi2)?, n, &mut RngStream::new(10, 1));
    let p_product = reduced_ks(&bc_product(&s1, &s2)?, psi1 * psi2)?;
    let p_power = reduced_ks(&bc_power(&s1, 3)?, psi1.powu(3))?;

    let target = BCParams::plus(Complex64::from_polar(0.6, 2.0))?;
    let mut prod = bc_root_sample(&target, 3, n, &mut RngStream::new(10, 2))?;
    for k in 3..5 {
        prod = bc_product(&prod, &bc_root_sample(&target, 3, n, &mut RngStream::new(10, k))?)?;
    }
    let p_root = reduced_ks(&prod, target.psi())?;

    let mut rng = RngStream::new(10, 5);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (x, y) = (20.0 * rng.uniform() - 10.0, 20.0 * rng.uniform() - 10.0);
        let want = 1.0 / (PI * PI * (1.0 + x * x) * (1.0 + y * y));
        worst = worst.max((plane_density(x, y, Complex64::new(0.0, 0.0))? - want).abs() / want);
    }
    let ok = p_product > 0.01 && p_power > 0.01 && p_root > 0.01 && worst <= 1e-10;
    Ok((ok, format!("product p = {p_product:.3}, power p = {p_power:.3}, root p = {p_root:.3}; plane identity max rel error {worst:.1e}")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("relative MSE table", c1_ratio_table),
        ("large-sample ratio row", c2_analytic_row),
        ("pivotal beta law", c3_pivotal),
        ("normalization", c4_normalization),
        ("moments", c5_moments),
        ("estimator asymptotics", c6_estimators),
        ("Fisher information", c7_fisher),
        ("Brownian path oracle", c8_oracle),
        ("information criteria", c9_model_choice),
        ("algebraic identities", c10_identities),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {name}: {detail} [{:.1}s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
