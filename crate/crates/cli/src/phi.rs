use anyhow::{bail, Result};
use clap::{ArgGroup, Args};
use serde_json::json;

use triharmonic::harmonic::{
    harmonicity_residual, solve_matrix, solve_params, system_residual, SolverConfig, SolverError,
};
use triharmonic::scalar::{format_rational, max_abs, Scalar};

use crate::input;
use crate::report::{emit, write_data, Check, Report};
use crate::{Format, Global, Outcome};

#[derive(Args)]
#[command(group(ArgGroup::new("known").required(true).args(["matrix", "params"])))]
pub struct SolveArgs {
    /// Fixed affine map; solve for the algebra parameters.
    #[arg(long)]
    pub matrix: Option<String>,
    /// Fixed algebra; solve for the linear map.
    #[arg(long)]
    pub params: Option<String>,
    #[arg(long, default_value_t = 50)]
    pub restarts: usize,
    #[arg(long, default_value_t = 200)]
    pub max_iterations: usize,
}

pub fn solve(a: &SolveArgs, g: &Global) -> Result<Outcome> {
    if g.format == Some(Format::Csv) {
        bail!("phi solve writes JSON only");
    }
    let cfg = SolverConfig {
        restarts: a.restarts,
        max_iterations: a.max_iterations,
        tolerance: g.tolerance,
        seed: g.seed,
    };
    let (mode, result) = match (&a.matrix, &a.params) {
        (Some(m), None) => {
            let phi = input::map(m)?;
            ("params", solve_params(&phi, &cfg).map(|c| json!(c)))
        }
        (None, Some(p)) => {
            let p = input::params(p)?;
            ("matrix", solve_matrix(&p, &cfg).map(|c| json!(c)))
        }
        _ => unreachable!("clap enforces exactly one of --matrix and --params"),
    };
    let candidates = match result {
        Ok(c) => c,
        Err(SolverError::NoSolutionFound {
            restarts,
            best_residual,
        }) => {
            eprintln!(
                "no certified solution after {restarts} restarts (best residual {best_residual:e})"
            );
            return Ok(Outcome::NoSolution);
        }
        Err(e) => return Err(e.into()),
    };
    let count = candidates.as_array().map_or(0, Vec::len);
    let doc = json!({
        "unknown": mode,
        "config": cfg,
        "candidates": candidates,
    });
    eprintln!("{count} certified candidate(s)");
    write_data(g, &(serde_json::to_string_pretty(&doc)? + "\n"))?;
    Ok(Outcome::Pass)
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Affine map file or `paper:eqA-matrix`.
    #[arg(long, default_value = "paper:eqA-matrix")]
    pub matrix: String,
    /// Parameters file or `paper:cyclic-params`.
    #[arg(long, default_value = "paper:cyclic-params")]
    pub params: String,
}

pub fn verify(a: &VerifyArgs, g: &Global) -> Result<Outcome> {
    let phi = input::map(&a.matrix)?;
    let p = input::params(&a.params)?;
    let checks = if g.exact {
        let r = harmonicity_residual(&phi, &p);
        let s = system_residual(&p.all(), &phi);
        let hmax = r.max_abs();
        let smax = max_abs(&s);
        vec![
            Check::new(
                "harmonicity φ_x² + φ_y² + φ_z² = 0",
                true,
                hmax.to_f64(),
                r.is_zero(),
            )
            .detail(format!(
                "coefficients ({})",
                r.r.0
                    .iter()
                    .map(format_rational)
                    .collect::<Vec<_>>()
                    .join(", ")
            )),
            Check::new(
                "harmonicity system (6 rows)",
                true,
                smax.to_f64(),
                s.iter().all(Scalar::is_negligible),
            )
            .detail(format!(
                "rows ({})",
                s.iter().map(format_rational).collect::<Vec<_>>().join(", ")
            )),
        ]
    } else {
        let (phi, p) = (phi.to_f64(), p.to_f64());
        let r = harmonicity_residual(&phi, &p);
        let s = system_residual(&p.all(), &phi);
        let smax = max_abs(&s);
        vec![
            Check::new(
                "harmonicity φ_x² + φ_y² + φ_z² = 0",
                false,
                r.max_abs(),
                r.max_abs() <= g.tolerance,
            ),
            Check::new(
                "harmonicity system (6 rows)",
                false,
                smax,
                smax <= g.tolerance,
            ),
        ]
    };
    let report = Report::new(
        "phi verify",
        format!("{} with {}", a.params, a.matrix),
        checks,
    );
    emit(&report, g, "")?;
    Ok(if report.pass {
        Outcome::Pass
    } else {
        Outcome::CheckFailed
    })
}
