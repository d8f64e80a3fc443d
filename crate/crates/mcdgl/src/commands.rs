//! One function per verb. Each returns the text and JSON renderings of its
//! result and whether the checked statement held.

use std::fmt::Write as _;

use mcdgl_core::dersub::der_basis;
use mcdgl_core::dgl::{gauge_witness_check, homology_dims, mc_check, Derivation};
use mcdgl_core::mc::{aut_a_action, aut_action, aut_v_lift, build_variety, MCVariety};
use mcdgl_core::{scalar, Scalar};
use serde_json::json;

use crate::artifacts::{
    values, BasisRow, BasisTable, BigradedModelJson, DimensionEntry, DimensionTable, FreeDglJson,
    QuadraticSystemJson,
};
use crate::cli::{BasisArgs, CheckArgs, HomologyArgs, McArgs};
use crate::problem::Problem;
use crate::syntax::Kind;
use crate::CliError;

#[derive(Clone, Debug)]
pub struct Outcome {
    pub text: String,
    pub json: serde_json::Value,
    pub verified: bool,
}

impl Outcome {
    fn ok(text: String, json: serde_json::Value) -> Self {
        Outcome {
            text,
            json,
            verified: true,
        }
    }
}

pub fn kind_label(key: &str) -> &'static str {
    match key {
        "der" => "Der",
        "dder" => "Đer",
        "sder" => "𝒟er",
        "weight" => "𝔇er",
        _ => "?",
    }
}

const DEFAULT_KIND: &str = "dder";

fn to_json<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("artifacts serialize")
}

fn describe(theta: &Derivation) -> String {
    theta.to_string()
}

pub fn basis(p: &Problem, a: &BasisArgs) -> Result<Outcome, CliError> {
    let key = a.kind.as_deref().unwrap_or(DEFAULT_KIND);
    let k = a
        .degree
        .ok_or_else(|| CliError::Usage("basis needs --degree".into()))?;
    let kind = p.der_kind(key)?;
    let b = der_basis(&p.algebra, &kind, k)?;
    let mut rows = Vec::new();
    let mut fresh = 0;
    for theta in &b.basis {
        let minus = theta.scale(&scalar::int(-1));
        let name = match p.derivations.iter().find(|(_, d)| d == theta) {
            Some((n, _)) => n.clone(),
            None => match p.derivations.iter().find(|(_, d)| *d == minus) {
                Some((n, _)) => format!("-{n}"),
                None => {
                    fresh += 1;
                    format!("b{fresh}")
                }
            },
        };
        rows.push(BasisRow {
            name,
            values: values(theta),
        });
    }
    let table = BasisTable {
        kind: key.to_string(),
        degree: k,
        dimension: rows.len(),
        rows,
    };
    let mut text = format!("{}_{}: dimension {}\n", kind_label(key), k, table.dimension);
    let width = table.rows.iter().map(|r| r.name.chars().count()).max().unwrap_or(0);
    for (r, theta) in table.rows.iter().zip(&b.basis) {
        let _ = writeln!(text, "{:width$}  {}", r.name, describe(theta));
    }
    Ok(Outcome::ok(text, to_json(&table)))
}

/// `M₋₁` and `M₋₂` of `key`, with the declared degree −1 derivations as
/// coordinates when there are any.
pub fn variety(p: &Problem, key: &str) -> Result<MCVariety, CliError> {
    let kind = p.der_kind(key)?;
    let m1 = der_basis(&p.algebra, &kind, -1)?;
    let m2 = der_basis(&p.algebra, &kind, -2)?;
    let declared: Vec<(String, Derivation)> = p
        .derivations
        .iter()
        .filter(|(_, d)| d.degree() == -1)
        .cloned()
        .collect();
    let coords = if declared.is_empty() {
        m1.basis
            .iter()
            .enumerate()
            .map(|(i, d)| (format!("a{}", i + 1), d.clone()))
            .collect()
    } else {
        for (n, d) in &declared {
            if !m1.contains(d) {
                return Err(CliError::Usage(format!(
                    "`{n}` is not in {}_-1",
                    kind_label(key)
                )));
            }
        }
        if declared.len() != m1.len() {
            return Err(CliError::Usage(format!(
                "{} declared degree -1 derivations, but {}_-1 has dimension {}",
                declared.len(),
                kind_label(key),
                m1.len()
            )));
        }
        declared
    };
    Ok(build_variety(&p.differential, &coords, &m2)?)
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("1 {word}")
    } else {
        format!("{n} {word}s")
    }
}

pub fn mc_summary(v: &MCVariety) -> String {
    let e = v.system.equations().count();
    let tail = if v.system.is_identically_zero() {
        "MC = all of M₋₁"
    } else {
        "MC is the zero set of the system"
    };
    format!(
        "{}, {}; {}",
        plural(e, "equation"),
        plural(v.dimension(), "variable"),
        tail
    )
}

pub fn mc(p: &Problem, a: &McArgs) -> Result<Outcome, CliError> {
    let key = a.kind.as_deref().unwrap_or(DEFAULT_KIND);
    let v = variety(p, key)?;
    let summary = mc_summary(&v);
    let mut text = format!("{summary}\nvariables: {}\n", v.labels.join(" "));
    text.push_str(&v.system.to_text());
    let json = json!({
        "summary": summary,
        "identically_zero": v.system.is_identically_zero(),
        "system": to_json(&QuadraticSystemJson::from(&v.system)),
        "text": v.system.to_text().lines().collect::<Vec<_>>(),
    });
    Ok(Outcome::ok(text, json))
}

fn scalars(text: &str) -> Option<Vec<Scalar>> {
    let t = text.trim().trim_start_matches('(').trim_end_matches(')');
    if t.trim().is_empty() {
        return Some(Vec::new());
    }
    t.split(',').map(scalar::parse).collect()
}

fn matrix(text: &str) -> Result<Vec<Vec<Scalar>>, CliError> {
    text.split(';')
        .map(|row| scalars(row).ok_or_else(|| CliError::Usage(format!("bad matrix row `{row}`"))))
        .collect()
}

/// Coordinates in `v`, or a combination of declared derivations.
pub fn point(p: &Problem, v: &MCVariety, text: &str) -> Result<Derivation, CliError> {
    if let Some(c) = scalars(text) {
        if c.len() == v.dimension() {
            return Ok(v.point(&c)?);
        }
        if c.len() == 1 && num_traits::Zero::is_zero(&c[0]) {
            return Ok(Derivation::zero(&p.algebra, -1));
        }
        return Err(CliError::Usage(format!(
            "point `{text}` has {} coordinates, expected {}",
            c.len(),
            v.dimension()
        )));
    }
    p.combination(text, -1)
}

fn show(alpha: &Derivation, v: &MCVariety) -> String {
    match v.coordinates(alpha) {
        Ok(c) => format!(
            "({})",
            c.iter().map(scalar::format).collect::<Vec<_>>().join(",")
        ),
        Err(_) => describe(alpha),
    }
}

pub fn check(p: &Problem, a: &CheckArgs) -> Result<Outcome, CliError> {
    let key = a.kind.as_deref().unwrap_or(DEFAULT_KIND);
    let given = [&a.point, &a.gauge, &a.aut_a, &a.aut_v]
        .iter()
        .filter(|x| x.is_some())
        .count();
    if given != 1 {
        return Err(CliError::Usage(
            "check needs exactly one of --point, --gauge, --aut-a, --aut-v".into(),
        ));
    }
    let v = variety(p, key)?;
    if let Some(pt) = &a.point {
        let delta = point(p, &v, pt)?;
        let ok = mc_check(&p.differential, &delta)?;
        let text = format!(
            "{}: {}\n",
            show(&delta, &v),
            if ok { "Maurer-Cartan" } else { "not Maurer-Cartan" }
        );
        let json = json!({ "check": "point", "point": values(&delta), "holds": ok });
        return Ok(Outcome {
            text,
            json,
            verified: ok,
        });
    }
    let (from, to) = match (&a.from, &a.to) {
        (Some(f), Some(t)) => (point(p, &v, f)?, point(p, &v, t)?),
        _ => return Err(CliError::Usage("witness checks need --from and --to".into())),
    };
    let (what, ok) = if let Some(g) = &a.gauge {
        let theta = p.combination(g, 0)?;
        ("gauge", gauge_witness_check(&p.differential, &theta, &from, &to)?)
    } else if let Some(s) = &a.aut_a {
        let pres = p.presentation.as_ref().ok_or_else(|| {
            CliError::Usage("--aut-a needs a graded-algebra input".into())
        })?;
        let s = scalars(s).ok_or_else(|| CliError::Usage(format!("bad scalars `{s}`")))?;
        ("aut-a", aut_a_action(pres, &s, &v, &from)? == to)
    } else {
        let m = matrix(a.aut_v.as_deref().expect("one witness given"))?;
        let phi = aut_v_lift(&p.algebra, &m)?;
        ("aut-v", aut_action(&v, &phi, &from)? == to)
    };
    let text = format!(
        "{what} witness {} -> {}: {}\n",
        show(&from, &v),
        show(&to, &v),
        if ok { "verified" } else { "refuted" }
    );
    let json = json!({
        "check": what,
        "from": values(&from),
        "to": values(&to),
        "holds": ok,
    });
    Ok(Outcome {
        text,
        json,
        verified: ok,
    })
}

fn range(text: &str) -> Result<(i32, i32), CliError> {
    let bad = || CliError::Usage(format!("bad range `{text}`, expected lo..hi"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let lo: i32 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i32 = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

pub fn homology(p: &Problem, a: &HomologyArgs) -> Result<Outcome, CliError> {
    let key = a.kind.as_deref().unwrap_or(DEFAULT_KIND);
    let delta = match a.delta.as_deref() {
        None | Some("0") => Derivation::zero(&p.algebra, -1),
        Some(t) => {
            if scalars(t).is_some() {
                let v = variety(p, key)?;
                point(p, &v, t)?
            } else {
                p.combination(t, -1)?
            }
        }
    };
    if !mc_check(&p.differential, &delta)? {
        return Err(CliError::Usage("the perturbation is not Maurer-Cartan".into()));
    }
    let set = p.algebra.generators();
    let (lo, hi) = match &a.range {
        Some(r) => range(r)?,
        None => (1, set.max_degree() - 1),
    };
    let total = p.differential.try_add(&delta)?;
    let dims = homology_dims(&total, lo..=hi)?;
    let elliptic = set.top_degree().and_then(|n| {
        (lo <= 2 * n && 3 * n <= hi).then(|| {
            let window = &dims[(2 * n - lo) as usize..=(3 * n - lo) as usize];
            if window.iter().all(|d| *d == 0) {
                "certified-elliptic".to_string()
            } else {
                "inconclusive".to_string()
            }
        })
    });
    let table = DimensionTable {
        perturbation: values(&delta),
        dimensions: (lo..=hi)
            .zip(&dims)
            .map(|(degree, d)| DimensionEntry {
                degree,
                dimension: *d,
            })
            .collect(),
        elliptic,
    };
    let mut text = format!("perturbation: {}\ndegree  dim\n", describe(&delta));
    for e in &table.dimensions {
        let _ = writeln!(text, "{:>6}  {}", e.degree, e.dimension);
    }
    if let Some(s) = &table.elliptic {
        let _ = writeln!(text, "elliptic: {s}");
    }
    Ok(Outcome::ok(text, to_json(&table)))
}

pub fn bigraded(p: &Problem) -> Result<Outcome, CliError> {
    let (m, pi) = match (&p.model, &p.nilpotent) {
        (Some(m), Some(pi)) => (m, pi),
        _ => return Err(CliError::Usage("bigraded needs a nilpotent-lie input".into())),
    };
    let names: Vec<&str> = (0..pi.len()).map(|i| pi.name(i)).collect();
    let art = BigradedModelJson::new(m, &names);
    let mut text = format!(
        "{}; H^0 = pi and H^n = 0 certified for lower degree <= {} and 1 <= n <= {}\n",
        plural(art.generators.len(), "generator"),
        art.certified_lower,
        art.certified_upper
    );
    let width = art.generators.iter().map(|g| g.name.len()).max().unwrap_or(0);
    for g in &art.generators {
        let _ = write!(
            text,
            "{:width$}  ({},{})  weight {}  d = {}",
            g.name, g.lower, g.upper, g.weight, g.differential
        );
        if !g.rho.is_empty() {
            let rho: Vec<String> = g
                .rho
                .iter()
                .map(|c| {
                    if c.coefficient == "1" {
                        c.element.clone()
                    } else {
                        format!("{}*{}", c.coefficient, c.element)
                    }
                })
                .collect();
            let _ = write!(text, "  rho = {}", rho.join(" + "));
        }
        text.push('\n');
    }
    Ok(Outcome::ok(text, to_json(&art)))
}

/// The model as a `free-dgl` problem file.
pub fn free_dgl_document(d: &Derivation) -> String {
    let set = d.algebra().generators();
    let mut out = String::from("free-dgl\ngenerators");
    for g in set.generators() {
        let _ = write!(out, " {}:{}", g.name, g.degree);
    }
    let _ = writeln!(
        out,
        "\nwindow degree={} length={}",
        set.max_degree(),
        set.max_word_length()
    );
    for (i, v) in d.values().iter().enumerate() {
        if !v.is_zero() {
            let _ = writeln!(out, "d {} = {}", set.name(i), v);
        }
    }
    out
}

pub fn quillen(p: &Problem) -> Result<Outcome, CliError> {
    if p.kind != Kind::GradedAlgebra {
        return Err(CliError::Usage("quillen needs a graded-algebra input".into()));
    }
    Ok(Outcome::ok(
        free_dgl_document(&p.differential),
        to_json(&FreeDglJson::new(&p.differential)),
    ))
}
