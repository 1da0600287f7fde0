use std::fs;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args};

use triharmonic::algebra::{v_map, Element};
use triharmonic::calculus::{cr_residual_numeric, cr_residual_poly, CrSystem, PhiFunction};
use triharmonic::field::{expand, read_csv, sample_grid, GridTable, StencilStats};
use triharmonic::poly::{PolyField, TriPoly};
use triharmonic::random::Sampler;
use triharmonic::scalar::{parse_rational, rat, Rational, Scalar};

use crate::input::{self, FieldInput, Kind};
use crate::report::{emit, write_data, Check, Report};
use crate::{Format, Global, Outcome};

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["field", "grid_file"])))]
pub struct VerifyArgs {
    /// Built-in name (`paper:phi2`, `paper:V-of-phi2`), φ𝔸-function JSON or
    /// polynomial field JSON `{"field": [[{"e": [i,j,k], "c": "p/q"}, ..], .., ..]}`.
    pub field: Option<String>,
    /// CSV written by `field gen`; stencils are recomputed from its values.
    #[arg(long)]
    pub grid_file: Option<String>,
    #[arg(long)]
    pub laplacian: bool,
    #[arg(long)]
    pub cr: bool,
    #[arg(long)]
    pub div: bool,
    #[arg(long)]
    pub curl: bool,
    /// `w` as `a,b,c`: checks `F·w = 0`.
    #[arg(long, value_name = "W")]
    pub first_integral: Option<String>,
    /// Verify `V(F)` instead of `F`.
    #[arg(long)]
    pub lamellar: bool,
    /// Divergence and curl count toward the verdict.
    #[arg(long)]
    pub strict: bool,
    /// Algebra for the CR equations of an explicit polynomial field.
    #[arg(long)]
    pub params: Option<String>,
    /// Affine map for the CR equations of an explicit polynomial field.
    #[arg(long)]
    pub map: Option<String>,
    #[arg(long, default_value_t = 20)]
    pub probes: usize,
    /// Central-difference step.
    #[arg(long, default_value_t = 1e-4)]
    pub h: f64,
    /// Tolerance for finite-difference residuals.
    #[arg(long, default_value_t = 1e-6)]
    pub fd_tolerance: f64,
}

#[derive(Args)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value = "poly")]
    pub kind: Kind,
    /// Coefficients JSON; defaults to `φ` itself or `f(φ)`.
    #[arg(long)]
    pub coeffs: Option<String>,
    #[arg(long)]
    pub params: Option<String>,
    #[arg(long)]
    pub map: Option<String>,
    /// Sample `V(F)` instead of `F`.
    #[arg(long)]
    pub lamellar: bool,
    /// `lo:hi:n` or a grid JSON file.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
    /// Add discrete divergence, curl and Laplacian at interior nodes.
    #[arg(long)]
    pub stencils: bool,
}

fn parse_w(text: &str) -> Result<[Rational; 3]> {
    let parts: Vec<&str> = text.split(',').collect();
    let [a, b, c] = parts[..] else {
        bail!("--first-integral expects three comma-separated numbers, got {text:?}");
    };
    let r = |s: &str| parse_rational(s).map_err(anyhow::Error::from);
    Ok([r(a)?, r(b)?, r(c)?])
}

fn coeff_max(p: &TriPoly<Rational>) -> f64 {
    p.terms().values().fold(0.0, |m, c| m.max(c.abs().to_f64()))
}

fn field_max(f: &PolyField<Rational>) -> f64 {
    f.0.iter().map(coeff_max).fold(0.0, f64::max)
}

fn exact_checks(
    a: &VerifyArgs,
    g: &Global,
    poly: &PolyField<Rational>,
    fi: &FieldInput,
) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    if a.laplacian {
        let lap = poly.laplacian();
        let mut c = Check::new("laplacian", true, field_max(&lap), lap.is_zero());
        if let Some(i) = lap.0.iter().position(|p| !p.is_zero()) {
            c = c.detail(format!("component {} = {}", i + 1, lap.0[i]));
        }
        checks.push(c);
    }
    if a.cr {
        let system = CrSystem::new(fi.ctx.params(), fi.ctx.map());
        let mut s = Sampler::new(g.seed);
        let probes: Vec<[Rational; 3]> = (0..a.probes).map(|_| s.point()).collect();
        let r = cr_residual_poly(poly, &system, &probes);
        let mut c = Check::new("cauchy-riemann", true, r.max_abs.to_f64(), r.pass);
        if let Some(f) = r.first_failure(&rat(0)) {
            c = c.detail(format!("first nonzero {f}"));
        } else if r.symbolic_zero == Some(false) {
            c = c.detail("rows vanish at the probes but not identically");
        }
        checks.push(c);
    }
    if a.div {
        let d = poly.divergence();
        checks.push(
            Check::new("divergence", true, coeff_max(&d), d.is_zero())
                .detail(format!("div = {d}"))
                .required(a.strict),
        );
    }
    if a.curl {
        let c = poly.curl();
        checks.push(
            Check::new("curl", true, field_max(&c), c.is_zero())
                .detail(format!("curl = {c}"))
                .required(a.strict),
        );
    }
    if let Some(w) = &a.first_integral {
        let w = parse_w(w)?;
        let p = poly.first_integral_check(&w);
        checks.push(
            Check::new("first integral F·w", true, coeff_max(&p), p.is_zero())
                .detail(format!("F·w = {p}")),
        );
    }
    Ok(checks)
}

type Jac = [[f64; 3]; 3];

/// Value, Jacobian and Laplacian at one point.
type Local = ([f64; 3], Jac, [f64; 3]);

/// Value, Jacobian `J[i][a] = ∂Fⁱ/∂a` and Laplacian at a point; `None` where singular.
struct Numeric<'a> {
    eval: Box<dyn Fn([f64; 3]) -> Option<Local> + Sync + 'a>,
}

fn numeric_of_poly(poly: &PolyField<Rational>) -> Numeric<'static> {
    let f = poly.map_coeffs(Scalar::to_f64);
    let jac = f.jacobian();
    let lap = f.laplacian();
    Numeric {
        eval: Box::new(move |q| {
            let j: Jac = std::array::from_fn(|i| std::array::from_fn(|a| jac[i][a].eval_f64(&q)));
            Some((f.eval_f64(&q), j, lap.eval_f64(&q)))
        }),
    }
}

fn numeric_of_function(f: &PhiFunction) -> Numeric<'_> {
    Numeric {
        eval: Box::new(move |q| {
            let value = f.eval(&q).ok()?.0;
            let parts = f.partials(&q).ok()?;
            let lap = f.second_partials(&q).ok()?.square_sum().0;
            Some((
                value,
                std::array::from_fn(|i| std::array::from_fn(|a| parts[a][i])),
                lap,
            ))
        }),
    }
}

fn lamellar_numeric(inner: Numeric<'_>) -> Numeric<'_> {
    let v = |x: [f64; 3]| v_map(&Element(x)).0;
    Numeric {
        eval: Box::new(move |q| {
            let (value, j, lap) = (inner.eval)(q)?;
            let cols: [[f64; 3]; 3] = std::array::from_fn(|a| v(std::array::from_fn(|i| j[i][a])));
            Some((
                v(value),
                std::array::from_fn(|i| std::array::from_fn(|a| cols[a][i])),
                v(lap),
            ))
        }),
    }
}

fn numeric_checks(
    a: &VerifyArgs,
    g: &Global,
    num: &Numeric<'_>,
    fi: &FieldInput,
) -> Result<Vec<Check>> {
    let mut s = Sampler::new(g.seed);
    let all: Vec<[f64; 3]> = (0..a.probes).map(|_| s.point_f64(-1.0, 1.0)).collect();
    let samples: Vec<([f64; 3], Local)> = all
        .iter()
        .filter_map(|q| (num.eval)(*q).map(|v| (*q, v)))
        .collect();
    let skipped = all.len() - samples.len();
    if samples.is_empty() {
        bail!("the field is singular at every probe point");
    }
    let note = |c: Check| {
        if skipped > 0 {
            let d = c.detail.clone().map_or(String::new(), |d| format!("{d}; "));
            c.detail(format!("{d}{skipped} singular probe(s) skipped"))
        } else {
            c
        }
    };
    let worst = |f: &dyn Fn(&Local) -> f64| {
        samples.iter().map(|(_, v)| f(v)).fold(0.0, |m: f64, x| {
            if x.is_nan() || m.is_nan() {
                f64::NAN
            } else {
                m.max(x)
            }
        })
    };
    let tol = g.tolerance;
    let mut checks = Vec::new();
    if a.laplacian {
        let m = worst(&|(_, _, lap)| lap.iter().fold(0.0, |m: f64, x| m.max(x.abs())));
        checks.push(note(Check::new("laplacian", false, m, m <= tol)));
    }
    if a.cr {
        let system = CrSystem::new(&fi.ctx.params().to_f64(), &fi.ctx.map().to_f64());
        let sampler = |q: [f64; 3]| (num.eval)(q).map_or([f64::NAN; 3], |v| v.0);
        let probes: Vec<[f64; 3]> = samples.iter().map(|(q, _)| *q).collect();
        let r = cr_residual_numeric(&sampler, &system, &probes, a.h, a.fd_tolerance);
        let mut c = Check::new("cauchy-riemann", false, r.max_abs, r.pass);
        if let Some(f) = r.first_failure(&a.fd_tolerance) {
            c = c.detail(format!("first failing {f}"));
        }
        checks.push(note(c));
    }
    if a.div {
        let m = worst(&|(_, j, _)| (j[0][0] + j[1][1] + j[2][2]).abs());
        checks.push(note(
            Check::new("divergence", false, m, m <= tol).required(a.strict),
        ));
    }
    if a.curl {
        let m = worst(&|(_, j, _)| {
            [j[2][1] - j[1][2], j[0][2] - j[2][0], j[1][0] - j[0][1]]
                .iter()
                .fold(0.0, |m: f64, x| m.max(x.abs()))
        });
        checks.push(note(
            Check::new("curl", false, m, m <= tol).required(a.strict),
        ));
    }
    if let Some(w) = &a.first_integral {
        let w = parse_w(w)?.map(|x| x.to_f64());
        let m = worst(&|(v, _, _)| (v[0] * w[0] + v[1] * w[1] + v[2] * w[2]).abs());
        checks.push(note(Check::new("first integral F·w", false, m, m <= tol)));
    }
    Ok(checks)
}

pub fn format_stats(t: &GridTable, s: &StencilStats) -> String {
    format!(
        "nodes {}, interior {}, max |div| {:e}, max |curl| {:e}, max |lap| {:e}, non-finite rows {}\n",
        t.rows.len(),
        s.interior,
        s.max_div,
        s.max_curl,
        s.max_lap,
        s.nan_rows
    )
}

fn grid_checks(a: &VerifyArgs, table: &GridTable, stats: &StencilStats) -> Result<Vec<Check>> {
    if a.cr {
        bail!("--cr needs a field specification, not a grid file");
    }
    let tol = a.fd_tolerance;
    let mut checks = Vec::new();
    if a.laplacian {
        checks.push(Check::new(
            "discrete laplacian",
            false,
            stats.max_lap,
            stats.max_lap <= tol,
        ));
    }
    if a.div {
        checks.push(
            Check::new(
                "discrete divergence",
                false,
                stats.max_div,
                stats.max_div <= tol,
            )
            .required(a.strict),
        );
    }
    if a.curl {
        checks.push(
            Check::new(
                "discrete curl",
                false,
                stats.max_curl,
                stats.max_curl <= tol,
            )
            .required(a.strict),
        );
    }
    if let Some(w) = &a.first_integral {
        let w = parse_w(w)?.map(|x| x.to_f64());
        let m = table
            .rows
            .iter()
            .map(|r| (r.value[0] * w[0] + r.value[1] * w[1] + r.value[2] * w[2]).abs())
            .fold(0.0, |m: f64, x| {
                if x.is_nan() || m.is_nan() {
                    f64::NAN
                } else {
                    m.max(x)
                }
            });
        checks.push(Check::new("first integral F·w", false, m, m <= tol));
    }
    Ok(checks)
}

pub fn verify(a: &VerifyArgs, g: &Global) -> Result<Outcome> {
    if !(a.laplacian || a.cr || a.div || a.curl || a.first_integral.is_some()) {
        bail!("no checks requested; use --laplacian, --cr, --div, --curl or --first-integral");
    }
    if !(a.h > 0.0 && a.fd_tolerance > 0.0) {
        bail!("--h and --fd-tolerance must be positive");
    }
    if let Some(path) = &a.grid_file {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {path}"))?;
        let table = read_csv(&text, true).with_context(|| format!("{path}: not a grid CSV"))?;
        let stats = table.stats();
        let checks = grid_checks(a, &table, &stats)?;
        let report = Report::new("field verify", path.as_str(), checks);
        emit(&report, g, &format_stats(&table, &stats))?;
        return Ok(if report.pass {
            Outcome::Pass
        } else {
            Outcome::CheckFailed
        });
    }
    let spec = a.field.as_deref().expect("clap requires a source");
    let ctx = input::context(a.params.as_deref(), a.map.as_deref())?;
    let fi = input::field(spec, ctx)?;
    let checks = match (&fi.poly, g.exact) {
        (Some(p), true) => {
            let p = if a.lamellar {
                p.lamellarize()
            } else {
                p.clone()
            };
            exact_checks(a, g, &p, &fi)?
        }
        (Some(p), false) => {
            let num = numeric_of_poly(p);
            let num = if a.lamellar {
                lamellar_numeric(num)
            } else {
                num
            };
            numeric_checks(a, g, &num, &fi)?
        }
        (None, _) => {
            let f = fi
                .function
                .as_ref()
                .expect("a field input has a function or a polynomial");
            let num = numeric_of_function(f);
            let num = if a.lamellar {
                lamellar_numeric(num)
            } else {
                num
            };
            numeric_checks(a, g, &num, &fi)?
        }
    };
    let subject = if a.lamellar {
        format!("V({spec})")
    } else {
        spec.to_string()
    };
    let report = Report::new("field verify", subject, checks);
    emit(&report, g, "")?;
    Ok(if report.pass {
        Outcome::Pass
    } else {
        Outcome::CheckFailed
    })
}

pub fn gen(a: &GenArgs, g: &Global) -> Result<Outcome> {
    let spec = input::grid(&a.grid)?;
    let ctx = input::context(a.params.as_deref(), a.map.as_deref())?;
    let f = input::function(a.kind, a.coeffs.as_deref(), ctx)?;
    let table = match expand(&f) {
        Ok(poly) => {
            let poly = if a.lamellar { poly.lamellarize() } else { poly };
            let p = poly.map_coeffs(Scalar::to_f64);
            sample_grid(&|q| p.eval_f64(&q), &spec, a.stencils)?
        }
        Err(_) if a.lamellar => {
            sample_grid(&|q| v_map(&Element(f.sample(q))).0, &spec, a.stencils)?
        }
        Err(_) => sample_grid(&|q| f.sample(q), &spec, a.stencils)?,
    };
    let stats = table.stats();
    if stats.nan_rows > 0 {
        eprintln!(
            "warning: {} row(s) at singular points written as NaN",
            stats.nan_rows
        );
    }
    eprint!("{}", format_stats(&table, &stats));
    let data = match g.format {
        Some(Format::Json) => table.to_json() + "\n",
        _ => table.to_csv(),
    };
    write_data(g, &data)?;
    Ok(Outcome::Pass)
}
