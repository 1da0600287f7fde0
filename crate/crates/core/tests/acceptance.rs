//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::Zero;
use triharmonic::algebra::geometry::to_complex;
use triharmonic::algebra::{
    cyclic_multiply, invert, is_in_plane, is_on_trisector, membership, nu, pi_divide,
    pi_divide_dropping, AlgebraError, AlgebraParams, Element, Membership, Singularity,
};
use triharmonic::calculus::{
    cr_residual_numeric, cr_residual_poly, CrSystem, Elementary, PhiContext, PhiFunction, PhiPoly,
};
use triharmonic::field::{expand, sample_grid, GridSpec};
use triharmonic::harmonic::{
    harmonicity_residual, solve_params, system_residual, AffineMap, SolverConfig, SolverError,
};
use triharmonic::linalg;
use triharmonic::poly::{PolyField, TriPoly};
use triharmonic::random::{harmonic_population, Sampler};
use triharmonic::scalar::{rat, QSqrt3, Rational};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

const POPULATION_SEED: u64 = 2024;

fn criterion_1() -> Outcome {
    let p = AlgebraParams::<Rational>::cyclic();
    let derived = p.derived();
    check(derived == [rat(0), rat(1), rat(0)], || {
        format!("derived {derived:?}")
    })?;
    let table = p.table();
    let e = |n| Element::<Rational>::basis(n);
    let mut triples = 0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let left = table.multiply(&table.multiply(&e(i), &e(j)), &e(k));
                let right = table.multiply(&e(i), &table.multiply(&e(j), &e(k)));
                check(left == right, || {
                    format!("triple ({i},{j},{k}) not associative")
                })?;
                triples += 1;
            }
        }
    }
    check(p.associativity_check().pass, || {
        "associativity report fails".into()
    })?;
    Ok(format!("p7=0 p8=1 p9=0, {triples} associative triples"))
}

fn criterion_2() -> Outcome {
    let phi = AffineMap::<Rational>::cyclic_harmonic();
    let p = AlgebraParams::cyclic();
    let r = harmonicity_residual(&phi, &p);
    check(r.is_zero(), || format!("harmonicity residual {r:?}"))?;
    let x = [0, 1, 0, 0, 1, 0, 0, 1, 0].map(rat);
    let rows = system_residual(&x, &phi);
    check(rows.iter().all(Zero::is_zero), || {
        format!("system residual {rows:?}")
    })?;
    Ok("harmonicity residual (0,0,0), 6 system rows zero".into())
}

fn criterion_3() -> Outcome {
    let cfg = SolverConfig {
        restarts: 200,
        seed: 1,
        tolerance: 1e-10,
        ..Default::default()
    };
    match solve_params(&AffineMap::identity(), &cfg) {
        Err(SolverError::NoSolutionFound {
            restarts,
            best_residual,
        }) => Ok(format!(
            "no certified candidate in {restarts} restarts (best residual {best_residual:.3e})"
        )),
        Ok(c) => Err(format!(
            "{} candidates certified for the identity map",
            c.len()
        )),
        Err(e) => Err(e.to_string()),
    }
}

fn criterion_4() -> Outcome {
    let phi = AffineMap::<Rational>::cyclic_harmonic();
    let cfg = SolverConfig {
        restarts: 50,
        seed: 1,
        ..Default::default()
    };
    let cands = solve_params(&phi, &cfg).map_err(|e| e.to_string())?;
    let target = [0.0, 1.0, 0.0, 0.0, 1.0, 0.0];
    let near = cands
        .iter()
        .any(|c| c.p.iter().zip(target).all(|(a, b)| (a - b).abs() < 1e-8));
    if near {
        return Ok(format!(
            "{} candidates, one within 1e-8 of the cyclic algebra",
            cands.len()
        ));
    }
    let confirmed = cands
        .iter()
        .filter(|c| {
            let r = harmonicity_residual(&phi, &c.exact_params()).max_abs();
            triharmonic::scalar::Scalar::to_f64(&r) < cfg.tolerance
        })
        .count();
    check(confirmed > 0, || {
        format!("{} candidates, none confirmed exactly", cands.len())
    })?;
    Ok(format!(
        "{} candidates, {confirmed} confirmed by exact residual after rationalization",
        cands.len()
    ))
}

fn criterion_5() -> Outcome {
    let pop = harmonic_population(POPULATION_SEED, 50, 5);
    let mut zero_checks = 0;
    let mut vacuous = 0;
    for (n, m) in pop.iter().enumerate() {
        let f = expand(&m.function).map_err(|e| e.to_string())?;
        let lap = f.laplacian();
        for (i, c) in lap.components().iter().enumerate() {
            check(c.is_zero(), || {
                format!("field {n}: Laplacian of F{} is {c}", i + 1)
            })?;
            zero_checks += 1;
            if f.components()[i].degree().unwrap_or(0) < 2 {
                vacuous += 1;
            }
        }
    }
    Ok(format!(
        "{zero_checks} zero Laplacian components ({vacuous} of degree < 2)"
    ))
}

fn criterion_6() -> Outcome {
    let pop = harmonic_population(POPULATION_SEED, 50, 5);
    let ones = [rat(1), rat(1), rat(1)];
    let alternating = [rat(1), rat(-1), rat(1)];
    let mut plane = 0;
    for (n, m) in pop.iter().enumerate() {
        let f = expand(&m.function).map_err(|e| e.to_string())?;
        let v = f.lamellarize();
        check(v.divergence().is_zero(), || {
            format!("field {n}: div V = {}", v.divergence())
        })?;
        check(v.curl().is_zero(), || {
            format!("field {n}: curl V = {}", v.curl())
        })?;
        check(v.laplacian().is_zero(), || {
            format!("field {n}: Laplacian of V nonzero")
        })?;
        let h1 = v.first_integral_check(&alternating);
        check(h1.is_zero(), || format!("field {n}: (1,-1,1)·V = {h1}"))?;
        if m.plane_parallel {
            let h = f.first_integral_check(&ones);
            check(h.is_zero(), || format!("field {n}: (1,1,1)·F = {h}"))?;
            plane += 1;
        }
    }
    Ok(format!(
        "50 lamellar fields; x+y+z checked on {plane}, x-y+z on 50"
    ))
}

fn criterion_7() -> Outcome {
    let f = expand(&PhiFunction::polynomial(
        PhiPoly::monomial(Element::identity(), 2),
        PhiContext::cyclic_harmonic(),
    ))
    .map_err(|e| e.to_string())?;
    let x = TriPoly::<Rational>::var(0);
    let y = TriPoly::var(1);
    let z = TriPoly::var(2);
    let c = |n: i64| TriPoly::constant(rat(n));
    let want = PolyField([
        (&x + &y).pow(2) + &c(2) * &(&(&x - &z) * &(&y + &z)),
        (&y + &z).pow(2) - &c(2) * &(&(&x + &y) * &(&x - &z)),
        (&x - &z).pow(2) - &c(2) * &(&(&x + &y) * &(&y + &z)),
    ]);
    check(f == want, || format!("expansion {f}"))?;
    let div = f.divergence();
    let want_div = &(&c(-4) * &x + &c(4) * &y) + &(&c(8) * &z);
    check(div == want_div, || format!("div F = {div}"))?;
    let curl = f.curl();
    let want_curl = PolyField([
        &c(-4) * &(&(&x + &(&c(2) * &y)) + &z),
        TriPoly::zero(),
        &c(-4) * &(&(&(&c(2) * &x) + &y) - &z),
    ]);
    check(curl == want_curl, || format!("curl F = {curl}"))?;
    Ok(format!("components match, div F = {div}"))
}

fn criterion_8() -> Outcome {
    let pop = harmonic_population(POPULATION_SEED, 50, 5);
    let mut s = Sampler::new(POPULATION_SEED + 1);
    let probes: Vec<[Rational; 3]> = (0..5).map(|_| s.point()).collect();
    let system = CrSystem::new(&AlgebraParams::cyclic(), &AffineMap::cyclic_harmonic());
    check(system.rank() == 4, || {
        format!("reduced rank {}", system.rank())
    })?;
    for (n, m) in pop.iter().enumerate() {
        let ctx = m.function.context();
        let sys = CrSystem::new(ctx.params(), ctx.map());
        let f = expand(&m.function).map_err(|e| e.to_string())?;
        let r = cr_residual_poly(&f, &sys, &probes);
        check(r.pass && r.rank_consistent, || {
            format!("field {n}: {:?}", r.first_failure(&rat(0)))
        })?;
        check(r.full.len() == 9 && r.reduced.len() == 4, || {
            "row counts".into()
        })?;
    }
    let bad = PolyField([TriPoly::var(0), TriPoly::zero(), TriPoly::zero()]);
    let r = cr_residual_poly(&bad, &system, &probes);
    check(!r.pass, || "(x,0,0) passed".into())?;
    check(r.probes.iter().all(|p| p.reduced[0] == rat(1)), || {
        format!("first reduced row {:?}", r.probes[0].reduced[0])
    })?;
    check(r.rank_consistent, || "rank consistency on (x,0,0)".into())?;
    // Jacobians killing the reduced rows kill all nine rows.
    let reduced: Vec<Vec<Rational>> = system.reduced_rows().iter().map(|r| r.to_vec()).collect();
    let kernel = linalg::nullspace(&reduced);
    check(kernel.len() == 5, || {
        format!("kernel dimension {}", kernel.len())
    })?;
    for _ in 0..50 {
        let coeffs: Vec<Rational> = kernel.iter().map(|_| s.rational(3)).collect();
        let jac: [[Rational; 3]; 3] = std::array::from_fn(|i| {
            std::array::from_fn(|a| {
                kernel
                    .iter()
                    .zip(&coeffs)
                    .fold(Rational::zero(), |acc, (k, c)| acc + &k[3 * i + a] * c)
            })
        });
        let rows = system.evaluate(&jac);
        check(rows.full.iter().all(Zero::is_zero), || {
            "full row survives".into()
        })?;
    }
    Ok("50 fields pass 9+4 rows; (x,0,0) first reduced row = 1; rank 4".into())
}

fn criterion_9() -> Outcome {
    let ctx = PhiContext::cyclic_harmonic();
    let f = PhiFunction::elementary(Elementary::Exp, Element::identity(), ctx);
    let mut s = Sampler::new(9);
    let probes: Vec<[f64; 3]> = (0..20).map(|_| s.point_f64(-1.0, 1.0)).collect();
    let system = CrSystem::new(
        &AlgebraParams::<f64>::cyclic(),
        &AffineMap::cyclic_harmonic(),
    );
    let sampler = |q: [f64; 3]| f.sample(q);
    let r = cr_residual_numeric(&sampler, &system, &probes, 1e-4, 1e-6);
    check(r.pass && r.rank_consistent, || {
        format!("CR max {:.3e}", r.max_abs)
    })?;
    let h = 1e-2;
    let mut worst = 0.0f64;
    for q in &probes {
        let centre = sampler(*q);
        let mut lap = [0.0; 3];
        for a in 0..3 {
            let (mut up, mut dn) = (*q, *q);
            up[a] += h;
            dn[a] -= h;
            let (fu, fd) = (sampler(up), sampler(dn));
            for i in 0..3 {
                lap[i] += (fu[i] - 2.0 * centre[i] + fd[i]) / (h * h);
            }
        }
        worst = lap.iter().fold(worst, |m, v| m.max(v.abs()));
    }
    check(worst < 1e-5, || format!("Laplacian {worst:.3e}"))?;
    Ok(format!(
        "CR max {:.2e} (h=1e-4), Laplacian max {worst:.2e} (h=1e-2)",
        r.max_abs
    ))
}

fn criterion_10() -> Outcome {
    let mut s = Sampler::new(10);
    let general = AlgebraParams::<Rational>::cyclic();
    let (mut regular, mut singular) = (0, 0);
    for n in 0..500 {
        let u = match n % 10 {
            0 => s.plane_element(3),
            1 => s.trisector_element(3),
            _ => s.element(3),
        };
        let plane = u.coordinate_sum().is_zero();
        let line = is_on_trisector(&u);
        let closed = invert(&u);
        let via_rep = general.invert(&u);
        if plane || line {
            let want = match (plane, line) {
                (true, true) => Singularity::Origin,
                (true, false) => Singularity::NodalPlane,
                _ => Singularity::Trisector,
            };
            check(closed == Err(AlgebraError::SingularElement(want)), || {
                format!("{u}: {closed:?}")
            })?;
            check(via_rep.is_err(), || {
                format!("{u}: representation inverse exists")
            })?;
            check(nu(&u).is_zero(), || format!("{u}: ν ≠ 0"))?;
            singular += 1;
        } else {
            check(!nu(&u).is_zero(), || format!("{u}: ν = 0"))?;
            let inv = closed.map_err(|e| format!("{u}: {e}"))?;
            check(cyclic_multiply(&u, &inv) == Element::identity(), || {
                format!("{u}: u·u⁻¹ ≠ e")
            })?;
            check(via_rep.as_ref() == Ok(&inv), || {
                format!("{u}: inverses disagree")
            })?;
            regular += 1;
        }
    }
    Ok(format!(
        "{regular} regular round-trips, {singular} singular elements"
    ))
}

fn lift(u: &Element<Rational>) -> Element<QSqrt3> {
    u.map(|c| QSqrt3::rational(c.clone()))
}

fn criterion_11() -> Outcome {
    let mut s = Sampler::new(11);
    let zero = Element::<Rational>::zero();
    for n in 0..200 {
        let u = s.element(3);
        let p = s.nonzero_plane_element(3);
        let t = s.trisector_element(3);
        // 1: Π is an ideal
        check(is_in_plane(&cyclic_multiply(&u, &p)), || {
            format!("sample {n}: claim 1")
        })?;
        // 2: 𝗍 absorbs
        check(is_on_trisector(&cyclic_multiply(&u, &t)), || {
            format!("sample {n}: claim 2")
        })?;
        // 3: Π·𝗍 = 0
        let q = s.plane_element(3);
        check(cyclic_multiply(&q, &t) == zero, || {
            format!("sample {n}: claim 3")
        })?;
        // 4: the annihilator of 0 ≠ υ′ ∈ Π is 𝗍
        let kernel = linalg::nullspace(&general_rows(&p));
        check(kernel.len() == 1, || {
            format!("sample {n}: annihilator dimension {}", kernel.len())
        })?;
        let k = Element([
            kernel[0][0].clone(),
            kernel[0][1].clone(),
            kernel[0][2].clone(),
        ]);
        check(membership(&k) == Membership::Trisector, || {
            format!("sample {n}: claim 4")
        })?;
        if !t.is_zero() {
            check(
                cyclic_multiply(&t, &p) == zero && membership(&t) == Membership::Trisector,
                || format!("sample {n}: claim 4 (constructed)"),
            )?;
        }
        // 5: ω·υ′ = μ has a unique solution in Π
        let mu = s.nonzero_plane_element(3);
        let w = pi_divide(&mu, &p).map_err(|e| format!("sample {n}: {e}"))?;
        check(is_in_plane(&w) && cyclic_multiply(&w, &p) == mu, || {
            format!("sample {n}: claim 5")
        })?;
        for dropped in 0..2 {
            let other = pi_divide_dropping(&mu, &p, dropped).map_err(|e| e.to_string())?;
            check(other == w, || format!("sample {n}: pi_divide not unique"))?;
        }
        // 6: υ·υ′ = ω·υ′ for a unique ω ∈ Π when υ ∉ 𝗍
        if !is_on_trisector(&u) {
            let target = cyclic_multiply(&u, &p);
            let w = pi_divide(&target, &p).map_err(|e| format!("sample {n}: {e}"))?;
            check(cyclic_multiply(&w, &p) == target, || {
                format!("sample {n}: claim 6")
            })?;
            let other = pi_divide_dropping(&target, &p, 0).map_err(|e| e.to_string())?;
            check(other == w, || format!("sample {n}: claim 6 not unique"))?;
        }
    }
    for n in 0..50 {
        let a = s.plane_element(3);
        let b = s.plane_element(3);
        let prod = cyclic_multiply(&lift(&a), &lift(&b));
        let lhs = to_complex(&prod).map_err(|e| e.to_string())?;
        let rhs = to_complex(&lift(&a)).map_err(|e| e.to_string())?
            * to_complex(&lift(&b)).map_err(|e| e.to_string())?;
        check(lhs == rhs, || format!("pair {n}: Π≅ℂ fails"))?;
    }
    Ok("claims 1-6 on 200 samples, unique division, Π≅ℂ on 50 pairs".into())
}

fn general_rows(u: &Element<Rational>) -> Vec<Vec<Rational>> {
    let m = AlgebraParams::<Rational>::cyclic().table().matrix_of(u);
    m.0.iter().map(|r| r.to_vec()).collect()
}

/// A degree-5 field with nonzero divergence, curl and Laplacian.
fn control_field() -> PolyField<Rational> {
    let x = TriPoly::<Rational>::var(0);
    let y = TriPoly::var(1);
    let z = TriPoly::var(2);
    PolyField([
        &x.pow(5) + &(&(&x * &y.pow(3)) * &z),
        &(&y.pow(4) * &z) - &(&x.pow(2) * &z.pow(3)),
        &(&x.pow(3) * &y.pow(2)) + &z.pow(5),
    ])
}

fn stencil_error(
    field: &PolyField<Rational>,
    centre: [f64; 3],
    h: f64,
) -> Result<[f64; 3], String> {
    let spec = GridSpec {
        min: centre.map(|c| c - h),
        max: centre.map(|c| c + h),
        n: [3; 3],
    };
    let table = sample_grid(&|q| field.eval_f64(&q), &spec, true).map_err(|e| e.to_string())?;
    let st = table.rows[13].stencil.ok_or("missing interior stencil")?;
    let div = field.divergence().eval_f64(&centre);
    let curl = field.curl().eval_f64(&centre);
    let lap = field.laplacian().eval_f64(&centre);
    let max = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .fold(0.0f64, |m, (p, q)| m.max((p - q).abs()))
    };
    Ok([
        (st.div - div).abs(),
        max(&st.curl, &curl),
        max(&st.lap, &lap),
    ])
}

fn criterion_12() -> Outcome {
    let f = control_field();
    check(
        !f.laplacian().is_zero() && !f.divergence().is_zero(),
        || "control field is harmonic".into(),
    )?;
    let centre = [0.3, -0.2, 0.4];
    let coarse = stencil_error(&f, centre, 0.1)?;
    let fine = stencil_error(&f, centre, 0.05)?;
    let ratios: Vec<f64> = coarse.iter().zip(&fine).map(|(c, f)| c / f).collect();
    for (name, r) in ["div", "curl", "Laplacian"].iter().zip(&ratios) {
        check((r - 4.0).abs() <= 0.3, || {
            format!("{name} error ratio {r:.3}")
        })?;
    }
    Ok(format!(
        "error ratios div {:.3}, curl {:.3}, Laplacian {:.3}",
        ratios[0], ratios[1], ratios[2]
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 12] = [
        ("cyclic certification", Duration::from_secs(1), criterion_1),
        (
            "φ-harmonicity of the cyclic pair",
            Duration::from_secs(1),
            criterion_2,
        ),
        (
            "orthonormal obstruction",
            Duration::from_secs(30),
            criterion_3,
        ),
        ("solver recovery", Duration::from_secs(30), criterion_4),
        ("harmonic expansions", Duration::from_secs(60), criterion_5),
        (
            "lamellar fields and first integrals",
            Duration::from_secs(60),
            criterion_6,
        ),
        ("worked example", Duration::from_secs(1), criterion_7),
        ("CR equivalence", Duration::from_secs(30), criterion_8),
        (
            "transcendental numeric path",
            Duration::from_secs(10),
            criterion_9,
        ),
        (
            "inverse and singularity",
            Duration::from_secs(10),
            criterion_10,
        ),
        (
            "nodal plane geometry",
            Duration::from_secs(10),
            criterion_11,
        ),
        ("order-2 convergence", Duration::from_secs(10), criterion_12),
    ];
    let mut failed = 0;
    for (n, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= *budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {budget:?} budget")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {detail} [{:.0?}]",
            n + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
