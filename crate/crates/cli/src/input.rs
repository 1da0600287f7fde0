//! Resolution of command-line inputs: files, inline specs and built-in examples.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use triharmonic::algebra::{AlgebraParams, Element};
use triharmonic::calculus::{
    Elementary, PhiContext, PhiFunction, PhiFunctionJson, PhiKind, PhiPoly,
};
use triharmonic::field::{expand, GridSpec};
use triharmonic::harmonic::AffineMap;
use triharmonic::poly::{PolyField, TermJson, TriPoly};
use triharmonic::scalar::{Rational, RationalText};

pub const BUILTINS: [&str; 4] = [
    "paper:cyclic-params",
    "paper:eqA-matrix",
    "paper:phi2",
    "paper:V-of-phi2",
];

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {path}"))
}

fn unknown_builtin(name: &str) -> anyhow::Error {
    anyhow!(
        "unknown built-in {name:?}; available: {}",
        BUILTINS.join(", ")
    )
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str, source: &str) -> Result<T> {
    serde_json::from_str(text).with_context(|| format!("{source}: malformed {what} JSON"))
}

pub fn params(spec: &str) -> Result<AlgebraParams<Rational>> {
    match spec {
        "paper:cyclic-params" => Ok(AlgebraParams::cyclic()),
        s if s.starts_with("paper:") => Err(unknown_builtin(s)),
        path => parse_json(&read(path)?, "algebra parameters", path),
    }
}

pub fn map(spec: &str) -> Result<AffineMap<Rational>> {
    match spec {
        "paper:eqA-matrix" => Ok(AffineMap::cyclic_harmonic()),
        s if s.starts_with("paper:") => Err(unknown_builtin(s)),
        path => parse_json(&read(path)?, "affine map", path),
    }
}

pub fn context(params_spec: Option<&str>, map_spec: Option<&str>) -> Result<PhiContext> {
    let p = params_spec
        .map(params)
        .transpose()?
        .unwrap_or_else(AlgebraParams::cyclic);
    let m = map_spec
        .map(map)
        .transpose()?
        .unwrap_or_else(AffineMap::cyclic_harmonic);
    Ok(PhiContext::new(p, m))
}

/// `{"field": [[terms of F¹], [terms of F²], [terms of F³]]}`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyFieldJson {
    field: [Vec<TermJson>; 3],
}

/// A field to verify, with the context its CR equations refer to.
pub struct FieldInput {
    pub function: Option<PhiFunction>,
    pub poly: Option<PolyField<Rational>>,
    pub ctx: PhiContext,
}

fn phi_squared() -> PhiFunction {
    PhiFunction::polynomial(
        PhiPoly::monomial(Element::identity(), 2),
        PhiContext::cyclic_harmonic(),
    )
}

/// Built-in name, φ𝔸-function JSON (has `"kind"`) or explicit polynomial field JSON.
pub fn field(spec: &str, ctx: PhiContext) -> Result<FieldInput> {
    let from_function = |f: PhiFunction| {
        let poly = expand(&f).ok();
        let ctx = f.context().clone();
        FieldInput {
            function: Some(f),
            poly,
            ctx,
        }
    };
    match spec {
        "paper:phi2" => return Ok(from_function(phi_squared())),
        "paper:V-of-phi2" => {
            let v = expand(&phi_squared())?.lamellarize();
            return Ok(FieldInput {
                function: None,
                poly: Some(v),
                ctx: PhiContext::cyclic_harmonic(),
            });
        }
        s if s.starts_with("paper:") => return Err(unknown_builtin(s)),
        _ => {}
    }
    let text = read(spec)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("{spec}: malformed JSON"))?;
    if value.get("kind").is_some() {
        let f: PhiFunctionJson = parse_json(&text, "φ𝔸-function", spec)?;
        Ok(from_function(f.build()))
    } else {
        let raw: PolyFieldJson = parse_json(&text, "polynomial field", spec)?;
        let poly = PolyField(raw.field.map(|t| TriPoly::from_terms_json(&t)));
        Ok(FieldInput {
            function: None,
            poly: Some(poly),
            ctx,
        })
    }
}

/// `lo:hi:n` for a cube, or a JSON file `{"min": [..], "max": [..], "n": [..]}`.
pub fn grid(spec: &str) -> Result<GridSpec> {
    let g = if Path::new(spec).is_file() {
        parse_json(&read(spec)?, "grid", spec)?
    } else {
        let parts: Vec<&str> = spec.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            bail!("grid {spec:?} is neither a file nor lo:hi:n");
        };
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .with_context(|| format!("bad grid bound {s:?}"))
        };
        let n = n
            .trim()
            .parse::<usize>()
            .with_context(|| format!("bad node count {n:?}"))?;
        GridSpec::cube(num(lo)?, num(hi)?, n)
    };
    g.validate()?;
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    Poly,
    Rational,
    Exp,
    Sin,
    Cos,
    Sinh,
    Cosh,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RationalCoeffs {
    num: Vec<[RationalText; 3]>,
    den: Vec<[RationalText; 3]>,
}

fn coeff_list(c: Vec<[RationalText; 3]>) -> PhiPoly {
    PhiPoly::new(c.into_iter().map(|e| Element(e.map(|r| r.0))).collect())
}

/// Coefficients file: a list of elements for `poly`, `{"num", "den"}` for
/// `rational`, one element otherwise. Without a file, `φ` itself or `f(φ)`.
pub fn function(kind: Kind, coeffs: Option<&str>, ctx: PhiContext) -> Result<PhiFunction> {
    let text = coeffs.map(read).transpose()?;
    let src = coeffs.unwrap_or("");
    let elementary = |f: Elementary| -> Result<PhiFunction> {
        let c = match &text {
            Some(t) => {
                Element(parse_json::<[RationalText; 3]>(t, "coefficient", src)?.map(|r| r.0))
            }
            None => Element::identity(),
        };
        Ok(PhiFunction::elementary(f, c, ctx.clone()))
    };
    let kind = match kind {
        Kind::Poly => PhiKind::Polynomial(match &text {
            Some(t) => coeff_list(parse_json(t, "coefficient list", src)?),
            None => PhiPoly::identity(),
        }),
        Kind::Rational => {
            let t = text
                .as_deref()
                .ok_or_else(|| anyhow!("--kind rational needs --coeffs with num and den"))?;
            let raw: RationalCoeffs = parse_json(t, "rational coefficients", src)?;
            PhiKind::Rational {
                num: coeff_list(raw.num),
                den: coeff_list(raw.den),
            }
        }
        Kind::Exp => return elementary(Elementary::Exp),
        Kind::Sin => return elementary(Elementary::Sin),
        Kind::Cos => return elementary(Elementary::Cos),
        Kind::Sinh => return elementary(Elementary::Sinh),
        Kind::Cosh => return elementary(Elementary::Cosh),
    };
    Ok(PhiFunction::new(kind, ctx))
}
