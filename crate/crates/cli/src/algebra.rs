use anyhow::Result;
use clap::Args;

use triharmonic::algebra::{AlgebraParams, Element};
use triharmonic::random::Sampler;
use triharmonic::scalar::{format_rational, rat, Rational, Scalar};

use crate::input;
use crate::report::{emit, Check, Report};
use crate::{Global, Outcome};

#[derive(Args)]
pub struct CheckArgs {
    /// Parameters file `{"p": [p1, .., p6]}` or `paper:cyclic-params`.
    pub params: String,
    /// Random pairs for the representation check.
    #[arg(long, default_value_t = 20)]
    pub pairs: usize,
}

fn checks_exact(p: &AlgebraParams<Rational>, pairs: usize, seed: u64) -> Vec<Check> {
    let table = p.table();
    let assoc = table.associator_max();
    let mut s = Sampler::new(seed);
    let mut worst = rat(0);
    for _ in 0..pairs {
        let (u, v) = (s.element(3), s.element(3));
        let lhs = table.matrix_of(&table.multiply(&u, &v));
        let rhs = table.matrix_of(&u).mul(&table.matrix_of(&v));
        let d = lhs.add(&rhs.scale(&rat(-1)));
        for row in d.0.iter() {
            for x in row {
                if x.abs() > worst {
                    worst = x.abs();
                }
            }
        }
    }
    vec![
        Check::new(
            "associativity (27 basis triples)",
            true,
            assoc.to_f64(),
            assoc.is_negligible(),
        ),
        Check::new(
            format!("representation homomorphism ({pairs} random pairs)"),
            true,
            worst.to_f64(),
            worst.is_negligible(),
        ),
    ]
}

fn checks_float(p: &AlgebraParams<Rational>, pairs: usize, seed: u64, tol: f64) -> Vec<Check> {
    let table = p.to_f64().table();
    let assoc = table.associator_max();
    let mut s = Sampler::new(seed);
    let mut worst = 0.0f64;
    for _ in 0..pairs {
        let (u, v): (Element<f64>, Element<f64>) = (s.element(3).to_f64(), s.element(3).to_f64());
        let lhs = table.matrix_of(&table.multiply(&u, &v));
        let rhs = table.matrix_of(&u).mul(&table.matrix_of(&v));
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((lhs.0[i][j] - rhs.0[i][j]).abs());
            }
        }
    }
    vec![
        Check::new(
            "associativity (27 basis triples)",
            false,
            assoc,
            assoc <= tol,
        ),
        Check::new(
            format!("representation homomorphism ({pairs} random pairs)"),
            false,
            worst,
            worst <= tol,
        ),
    ]
}

pub fn check(a: &CheckArgs, g: &Global) -> Result<Outcome> {
    let p = input::params(&a.params)?;
    let checks = if g.exact {
        checks_exact(&p, a.pairs, g.seed)
    } else {
        checks_float(&p, a.pairs, g.seed, g.tolerance)
    };
    let [p7, p8, p9] = p.derived().map(|x| format_rational(&x));
    let yes = |c: &Check| {
        if c.status == crate::report::Status::Pass {
            "yes"
        } else {
            "no"
        }
    };
    let preamble = format!(
        "p7={p7} p8={p8} p9={p9}, associative: {}, homomorphism: {}\n",
        yes(&checks[0]),
        yes(&checks[1])
    );
    let mut report = Report::new("algebra check", &a.params, checks);
    report.data = Some(serde_json::json!({
        "p": p.free().iter().map(format_rational).collect::<Vec<_>>(),
        "derived": [p7, p8, p9],
    }));
    emit(&report, g, &preamble)?;
    Ok(if report.pass {
        Outcome::Pass
    } else {
        Outcome::CheckFailed
    })
}
