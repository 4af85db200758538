//! Acceptance run: one PASS/FAIL line per criterion, exact comparisons only,
//! each criterion timed against its budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use fedosov_core::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sym(dim: usize) -> SymplecticForm {
    SymplecticForm::standard(dim).unwrap()
}

fn flat(dim: usize) -> WeylCurvatureSpec {
    WeylCurvatureSpec::unperturbed(Geometry::flat(sym(dim)))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// `(2n choose n)/4^n` and `(2n choose n)/((2n−1)4^n)` by the ratio recurrence.
fn sqrt_taylor(p: usize) -> (Vec<Scalar>, Vec<Scalar>) {
    let mut inv = vec![Scalar::one()];
    let mut one_minus = vec![Scalar::zero()];
    for n in 1..=p as i64 {
        let a = &inv[n as usize - 1] * &Scalar::ratio(2 * n - 1, 2 * n);
        one_minus.push(&a * &Scalar::ratio(1, 2 * n - 1));
        inv.push(a);
    }
    (one_minus, inv)
}

fn criterion_1() -> Outcome {
    let p = 32;
    let t = coeff_sequences(p);
    let (sigma, kappa) = sqrt_taylor(p);
    for n in 1..=p {
        ensure(t.sigma[n] == sigma[n], || format!("sigma_{n} = {}, Taylor {}", t.sigma[n], sigma[n]))?;
    }
    for n in 0..=p {
        ensure(t.kappa[n] == kappa[n], || format!("kappa_{n} = {}, Taylor {}", t.kappa[n], kappa[n]))?;
        ensure(t.c[n] == Scalar::ratio(1, 2), || format!("c_{n} = {}", t.c[n]))?;
    }
    Ok(format!("sigma, kappa, c through P={p}"))
}

/// `Σ_{r,s} −ω̄^{ir} ω̄^{js} α_{rs}` written out entrywise.
fn raise(alpha: &Tensor2, s: &SymplecticForm) -> Vec<Vec<CoordPoly>> {
    let n = alpha.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut v = CoordPoly::zero(n);
                    for r in 0..n {
                        for t in 0..n {
                            let c = &(s.omega_bar(i, r) * s.omega_bar(j, t)) * &Scalar::from_int(-1);
                            v.add_scaled(alpha.get(r, t), &c);
                        }
                    }
                    v
                })
                .collect()
        })
        .collect()
}

fn criterion_2() -> Outcome {
    let order = 8;
    let mut cases = 0;
    for dim in [2usize, 4] {
        let s = sym(dim);
        let base = StarProduct::new(flat(dim), order).map_err(err)?;
        for k in 1..=2u32 {
            for seed in 0..2u64 {
                let alpha = gen::constant_skew(&mut rng(100 * dim as u64 + 10 * k as u64 + seed), dim);
                let spec = flat(dim).perturbed(k, alpha.clone()).map_err(err)?;
                let pert = StarProduct::new(spec.clone(), order).map_err(err)?;
                let bar = series_inverse(&spec.omega_series(order), order).map_err(err)?;
                for i in 0..dim {
                    for j in 0..dim {
                        let xi = CoordPoly::var(dim, i);
                        let xj = CoordPoly::var(dim, j);
                        let st = pert.star(&xi, &xj).map_err(err)?;
                        ensure(st.coeff(0) == &(&xi * &xj), || format!("dim {dim} k {k}: C0(x{i},x{j})"))?;
                        for n in 1..=order {
                            let want = bar.coeff(n - 1).get(i, j).scale(&Scalar::imag_ratio(-1, 2));
                            ensure(st.coeff(n) == &want, || format!("dim {dim} k {k}: C{n}(x{i},x{j}) = {}, want {want}", st.coeff(n)))?;
                        }
                    }
                }
                let probes = probe_series(&base, &pert).map_err(err)?;
                for n in 0..=order {
                    let want = if n > 1 && (n - 1) % k as usize == 0 {
                        let p = ((n - 1) / k as usize) as u32;
                        alpha.diamond_power(p, &s).and_then(|a| a.mu(&s)).map_err(err)?.scale(&Scalar::imag_ratio(1, 2))
                    } else {
                        Tensor2::zero(dim, Variance::Contravariant)
                    };
                    ensure(probes.coeff(n) == &want, || format!("dim {dim} k {k}: probe {n} = {}", probes.coeff(n)))?;
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} flat cases through N={order}"))
}

fn quadratic(r: &mut ChaCha8Rng, dim: usize) -> CoordPoly {
    loop {
        let f = gen::homogeneous_poly(r, dim, 2, 3);
        if !f.is_zero() {
            return f;
        }
    }
}

fn criterion_3() -> Outcome {
    let dim = 4;
    let s = sym(dim);
    let mut r = rng(3);
    let plane = Geometry::flat(s.clone());
    let geos = [("flat", plane), ("curved", gen::geometry(&mut r, dim, 1, 0.5))];
    let mut pairs = 0;
    for (name, geo) in geos {
        let base_spec = WeylCurvatureSpec::unperturbed(geo);
        for k in 1..=2u32 {
            let alpha = gen::closed_two_form(&mut r, dim, 0);
            let order = k as usize + 1;
            let base = StarProduct::new(base_spec.clone(), order).map_err(err)?;
            let pert = StarProduct::new(base_spec.perturbed(k, alpha.clone()).map_err(err)?, order).map_err(err)?;
            let up = raise(&alpha, &s);
            for _ in 0..20 {
                let f = quadratic(&mut r, dim);
                let g = quadratic(&mut r, dim);
                let diff = pert.star(&f, &g).map_err(err)?.coeff(order) - base.star(&f, &g).map_err(err)?.coeff(order);
                let mut pred = CoordPoly::zero(dim);
                for i in 0..dim {
                    for j in 0..dim {
                        pred = &pred + &(&(&up[i][j] * &f.partial(i)) * &g.partial(j));
                    }
                }
                let pred = pred.scale(&Scalar::imag_ratio(1, 2));
                ensure(diff == pred, || format!("{name} k={k}: f={f} g={g}: {diff} vs {pred}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} quadratic pairs"))
}

fn criterion_4() -> Outcome {
    let names = [
        "delta_inv_bracket_minus_1_24",
        "identity_1_minus_1_over_9_2_6",
        "identity_2_minus_1_over_3_2_5",
        "hbar2_delta_inv_beta0",
        "identity_3_minus_1_over_2_6",
        "ratio_2_over_1_is_6",
        "ratio_3_over_1_is_9",
    ];
    let cases = 10;
    for seed in 0..cases {
        let mut r = rng(400 + seed);
        let geo = gen::geometry(&mut r, 4, 1, 0.5);
        ensure(!geo.is_flat(), || format!("seed {seed}: flat draw"))?;
        let f = quadratic(&mut r, 4);
        let g = quadratic(&mut r, 4);
        let checks = curvature_identities(&geo, &f, &g).map_err(err)?;
        let got: Vec<&str> = checks.iter().map(|c| c.name).collect();
        ensure(got == names, || format!("identity set {got:?}"))?;
        for c in &checks {
            ensure(c.pass, || format!("seed {seed} {}: residual {}", c.name, c.residual))?;
        }
    }
    Ok(format!("7 identities on {cases} random connections"))
}

fn criterion_5() -> Outcome {
    let order = 4;
    let mut cases = 0;
    for dim in [2usize, 4] {
        let base = StarProduct::new(flat(dim), order).map_err(err)?;
        for seed in 0..3u64 {
            let alpha = gen::constant_skew(&mut rng(500 + 10 * dim as u64 + seed), dim);
            let pert = StarProduct::new(flat(dim).perturbed(2, alpha).map_err(err)?, order).map_err(err)?;
            let probes = probe_series(&base, &pert).map_err(err)?;
            ensure(probes.coeff(4).is_zero(), || format!("dim {dim} seed {seed}: {}", probes.coeff(4)))?;
            ensure(!probes.coeff(3).is_zero(), || format!("dim {dim} seed {seed}: order 3 probe vanished"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} cases"))
}

type Invariant = fn(u64) -> std::result::Result<(), String>;

fn inv_delta(seed: u64) -> std::result::Result<(), String> {
    let dim = [2, 4][seed as usize % 2];
    let a = gen::weyl(&mut rng(seed), dim, WeylForm::UNCAPPED, 4, &[0, 1, 2, 3], 6);
    ensure(a.delta().delta().is_zero() && a.delta_inv().delta_inv().is_zero(), || "delta squares".into())?;
    let mut sum = a.sigma_part();
    sum.add_assign(&a.delta_inv().delta());
    sum.add_assign(&a.delta().delta_inv());
    ensure(sum == a, || "Hodge decomposition".into())
}

fn inv_weyl_assoc(seed: u64) -> std::result::Result<(), String> {
    let dim = [2, 4][seed as usize % 2];
    let s = sym(dim);
    let mut r = rng(seed);
    let [a, b, c] = [0; 3].map(|_| gen::weyl(&mut r, dim, 6, 4, &[0, 1], 4));
    ensure(a.circ(&b, &s).circ(&c, &s) == a.circ(&b.circ(&c, &s), &s), || "circ associativity".into())
}

fn inv_connection(seed: u64) -> std::result::Result<(), String> {
    let dim = [2, 4][seed as usize % 2];
    let mut r = rng(seed);
    let geo = gen::geometry(&mut r, dim, 1, 0.4);
    let a = gen::weyl(&mut r, dim, 8, 4, &[0], 4);
    let dd = geo.cov_ext_deriv(&geo.cov_ext_deriv(&a));
    let rhs = geo.curvature().weyl_two_form(8).commutator(&a, geo.symplectic()).map_err(err)?.div_hbar().map_err(err)?.scale(&Scalar::i());
    ensure(dd == rhs, || "connection squared".into())?;
    ensure(geo.curvature().check_invariants().is_ok(), || "curvature symmetries".into())?;
    ensure(geo.curvature().bianchi_contractions().iter().all(|w| w.is_zero()), || "Bianchi".into())
}

fn inv_poisson(seed: u64) -> std::result::Result<(), String> {
    let mut r = rng(seed);
    let order = 4;
    let s = sym(4);
    let mut coeffs = vec![Tensor2::zero(4, Variance::Covariant); order + 1];
    coeffs[1] = gen::closed_two_form(&mut r, 4, 1);
    coeffs[2] = gen::constant_skew(&mut r, 4);
    let bar = formal_poisson(&s, &HSeries::from_coeffs(coeffs), order).map_err(err)?;
    let res = series_schouten(&bar, order).map_err(err)?;
    ensure(res.iter().all(|t| t.is_zero()), || "Schouten bracket of the formal bivector".into())
}

fn inv_sections(seed: u64) -> std::result::Result<(), String> {
    let mut r = rng(seed);
    let geo = gen::geometry(&mut r, 2, 1, 0.6);
    let alpha = gen::closed_two_form(&mut r, 2, 1);
    let spec = WeylCurvatureSpec::unperturbed(geo).perturbed(1, alpha).map_err(err)?;
    let solver = FedosovSolver::new(spec, 6).map_err(err)?;
    let f = gen::poly(&mut r, 2, 3, 3);
    let a = solver.flat_section(&f).map_err(err)?;
    ensure(solver.abelian_derivative(&a).truncated(5).is_zero(), || "Da = 0".into())?;
    ensure(a.sigma(6) == HSeries::constant(f.clone(), 6), || "sigma(a_f) = f".into())
}

fn inv_star(seed: u64) -> std::result::Result<(), String> {
    let mut r = rng(seed);
    let alpha = gen::closed_two_form(&mut r, 2, 1);
    let sp = StarProduct::new(flat(2).perturbed(1, alpha).map_err(err)?, 4).map_err(err)?;
    let [f, g, h] = [0; 3].map(|_| gen::poly(&mut r, 2, 3, 3));
    let s0 = |p: &CoordPoly| HSeries::constant(p.clone(), 0);
    let lhs = sp.star_series(&sp.star_series(&s0(&f), &s0(&g)).map_err(err)?, &s0(&h)).map_err(err)?;
    let rhs = sp.star_series(&s0(&f), &sp.star_series(&s0(&g), &s0(&h)).map_err(err)?).map_err(err)?;
    ensure(lhs == rhs, || "star associativity".into())?;
    let fg = sp.star(&f, &g).map_err(err)?;
    let gf = sp.star(&g, &f).map_err(err)?;
    ensure(fg.coeff(0) == &(&f * &g), || "C0 = fg".into())?;
    ensure(fg.coeff(1) == &gf.coeff(1).scale(&Scalar::from_int(-1)), || "C1 skew".into())?;
    let one = sp.star(&CoordPoly::one(2), &f).map_err(err)?;
    let zero = CoordPoly::zero(2);
    ensure((0..=4).all(|n| one.coeff(n) == if n == 0 { &f } else { &zero }), || "unit".into())
}

fn criterion_6() -> Outcome {
    let suite: [(&str, Invariant); 6] = [
        ("delta/Hodge", inv_delta),
        ("circ associativity", inv_weyl_assoc),
        ("connection", inv_connection),
        ("Poisson", inv_poisson),
        ("flat sections", inv_sections),
        ("star product", inv_star),
    ];
    let instances = 20;
    for (name, check) in suite {
        for seed in 0..instances {
            check(6000 + seed).map_err(|e| format!("{name} seed {seed}: {e}"))?;
        }
    }
    Ok(format!("{} invariants x {instances} instances", suite.len()))
}

fn criterion_7() -> Outcome {
    let order = 6;
    let mut cases = 0;
    for dim in [2usize, 4] {
        let s = sym(dim);
        let base = StarProduct::new(flat(dim), order).map_err(err)?;
        for seed in 0..2u64 {
            let mut r = rng(700 + 10 * dim as u64 + seed);
            let a1 = gen::constant_skew(&mut r, dim);
            let a2 = gen::constant_skew(&mut r, dim);
            let spec = WeylCurvatureSpec::new(Geometry::flat(s.clone()), vec![Perturbation::new(1, a1).map_err(err)?, Perturbation::new(2, a2).map_err(err)?])
                .map_err(err)?;
            let pert = StarProduct::new(spec.clone(), order).map_err(err)?;
            let probes = probe_series(&base, &pert).map_err(err)?;
            let alpha_h = spec.alpha_series(order);
            let pred = predicted_onediff(&alpha_h, base.spec().geometry(), order).map_err(err)?;
            for n in 0..=order {
                ensure(probes.coeff(n) == pred.coeff(n), || format!("dim {dim} seed {seed}: order {n}: {} vs {}", probes.coeff(n), pred.coeff(n)))?;
            }
            let bar = series_inverse(&spec.omega_series(order), order).map_err(err)?;
            let whole = HSeries::monomial(Tensor2::omega_bar(&s).scale(&Scalar::imag_ratio(-1, 2)), 1, order).add(&probes);
            let target = bar.shift(1).map(|t| t.scale(&Scalar::imag_ratio(-1, 2)));
            for n in 0..=order {
                ensure(whole.coeff(n) == target.coeff(n), || format!("dim {dim} seed {seed}: reassembly at order {n}"))?;
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} two-term series through order {order}"))
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome, Duration); 7] = [
        (1, criterion_1, Duration::from_secs(1)),
        (2, criterion_2, Duration::from_secs(10)),
        (3, criterion_3, Duration::from_secs(30)),
        (4, criterion_4, Duration::from_secs(60)),
        (5, criterion_5, Duration::from_secs(10)),
        (6, criterion_6, Duration::from_secs(300)),
        (7, criterion_7, Duration::from_secs(30)),
    ];
    let mut failed = 0;
    for (id, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let timing = format!("{:.2}s / {}s", elapsed.as_secs_f64(), limit.as_secs());
        match outcome {
            Ok(note) if elapsed <= limit => println!("criterion {id}: PASS ({timing}) {note}"),
            Ok(note) => {
                failed += 1;
                println!("criterion {id}: FAIL ({timing}) over budget; {note}");
            }
            Err(e) => {
                failed += 1;
                println!("criterion {id}: FAIL ({timing}) {e}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
