//! The two bundled examples, run end to end. Every claim is recomputed;
//! a failed claim is reported, never skipped.

use mcdgl_core::dersub::{der_basis, DerKind, DerSubspaceBasis};
use mcdgl_core::dgl::{boundary, der_bracket, gauge, gauge_witness_check, mc_check, Derivation};
use mcdgl_core::mc::{
    aut_a_action, aut_action, aut_v_lift, canonical_gauge_representative, classify,
    closure_poset, elliptic_certificate, gauge_is_trivial, mc_points_check, orbit_invariants,
    EllipticStatus, MCVariety, OrbitInvariantReport,
};
use mcdgl_core::scalar::{int, ratio};
use mcdgl_core::Scalar;

use crate::artifacts::{Claim, DimensionEntry, ExampleReport, InvariantTable};
use crate::commands::variety;
use crate::problem::{Problem, WindowOverride};
use crate::CliError;

pub const WEDGE: &str = include_str!("../problems/wedge-2-4-6-6.mcd");
pub const QUOTIENT: &str = include_str!("../problems/su6-quotient.mcd");

pub const NAMES: [&str; 2] = ["wedge-2-4-6-6", "su6-quotient"];

/// Degree window used by `--reduced`.
pub const REDUCED_WINDOW: i32 = 31;

pub fn run(name: &str, reduced: bool) -> Result<ExampleReport, CliError> {
    match name {
        "wedge-2-4-6-6" => wedge(),
        "su6-quotient" => quotient(reduced),
        other => Err(CliError::Usage(format!(
            "unknown example `{other}`, expected one of {}",
            NAMES.join(", ")
        ))),
    }
}

struct Claims(Vec<Claim>);

impl Claims {
    fn push(&mut self, claim: &str, passed: bool, detail: impl Into<String>) {
        self.0.push(Claim {
            claim: claim.to_string(),
            passed,
            detail: detail.into(),
        });
    }
}

fn coords(v: &MCVariety, d: &Derivation) -> String {
    match v.coordinates(d) {
        Ok(c) => format!(
            "({})",
            c.iter()
                .map(mcdgl_core::scalar::format)
                .collect::<Vec<_>>()
                .join(",")
        ),
        Err(_) => d.to_string(),
    }
}

fn table(v: &MCVariety, d: &Derivation, r: &OrbitInvariantReport) -> InvariantTable {
    InvariantTable {
        representative: coords(v, d),
        homology: (r.degrees.0..=r.degrees.1)
            .zip(&r.homology)
            .map(|(degree, dimension)| DimensionEntry {
                degree,
                dimension: *dimension,
            })
            .collect(),
        elliptic: r.elliptic.map(|e| status(e).to_string()),
    }
}

fn status(e: EllipticStatus) -> &'static str {
    match e {
        EllipticStatus::CertifiedElliptic => "certified-elliptic",
        EllipticStatus::Inconclusive => "inconclusive",
    }
}

fn named<'a>(p: &'a Problem, n: &str) -> &'a Derivation {
    p.derivation(n).expect("bundled file declares it")
}

fn identity(n: usize) -> Vec<Vec<Scalar>> {
    (0..n)
        .map(|i| (0..n).map(|j| int(i64::from(i == j))).collect())
        .collect()
}

fn wedge() -> Result<ExampleReport, CliError> {
    let p = Problem::parse(WEDGE, WindowOverride::default())?;
    let l = &p.algebra;
    let d = &p.differential;
    let mut c = Claims(Vec::new());
    let kind = p.der_kind("dder")?;

    let m1 = der_basis(l, &kind, -1)?;
    let expected = ["delta_y", "delta_z", "delta_w"];
    let spans = m1.len() == 3 && expected.iter().all(|n| m1.contains(named(&p, n)));
    c.push(
        "Đer₋₁ is 3-dimensional, spanned by δ_y: y ↦ [x,x], δ_z: z ↦ [x,y], δ_w: w ↦ [x,y]",
        spans,
        format!("dimension {}", m1.len()),
    );

    let v = variety(&p, "dder")?;
    c.push(
        "the MC system is identically zero, so MC = Đer₋₁",
        v.system.is_identically_zero(),
        format!("{} equations", v.system.equations().count()),
    );

    let m0 = der_basis(l, &kind, 0)?;
    let mut samples = Vec::new();
    for a in -1..=1 {
        for b in -1..=1 {
            for g in -1..=1 {
                samples.push(v.point(&[int(a), int(b), int(g)])?);
            }
        }
    }
    let all_mc = samples.iter().map(|s| mc_check(d, s)).collect::<Result<Vec<_>, _>>()?;
    let trivial = gauge_is_trivial(d, &m0.basis, &samples)?;
    c.push(
        "the gauge action of exp(Đer₀) fixes every point",
        trivial && all_mc.iter().all(|x| *x),
        format!(
            "{} directions of Đer₀ on {} sample points of {{-1,0,1}}³",
            m0.len(),
            samples.len()
        ),
    );

    let report = |delta: &Derivation| orbit_invariants(d, delta, (1, 10), 4);
    let reps: Vec<Derivation> = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)]
        .iter()
        .map(|(a, b, g)| v.point(&[int(*a), int(*b), int(*g)]))
        .collect::<Result<_, _>>()?;
    let reports: Vec<OrbitInvariantReport> = reps.iter().map(report).collect::<Result<_, _>>()?;
    let classes = classify(&reports);
    c.push(
        "representatives (0,0,0), (α,0,0), (0,β,γ), (α,β,γ) have 4 distinct invariant reports",
        classes.len() == 4,
        format!("{} classes", classes.len()),
    );

    // y ↦ y/α sends δ_y to αδ_y.
    let mut ok = true;
    for al in [int(2), int(-1), ratio(1, 3)] {
        let mut m = identity(4);
        m[1][1] = al.recip();
        let phi = aut_v_lift(l, &m)?;
        let target = v.point(&[al.clone(), int(0), int(0)])?;
        ok &= aut_action(&v, &phi, &reps[1])? == target && report(&target)? == reports[1];
    }
    c.push(
        "scaling witnesses identify (1,0,0) with (α,0,0) for α ∈ {2, -1, 1/3}",
        ok,
        "",
    );

    // φ⁻¹: z ↦ βz + bw, w ↦ γz + ew.
    let mix = |al: &Scalar, be: &Scalar, ga: &Scalar| -> Result<_, CliError> {
        let mut inv = identity(4);
        inv[1][1] = al.clone();
        let (a, cc) = (al * be, al * ga);
        let (b, e) = if a == int(0) { (int(1), int(0)) } else { (int(0), int(1)) };
        inv[2] = vec![int(0), int(0), a, b];
        inv[3] = vec![int(0), int(0), cc, e];
        Ok(aut_v_lift(l, &inv)?.inverse()?)
    };
    let mut ok = true;
    for (be, ga) in [(int(2), int(3)), (int(0), int(1)), (ratio(-1, 2), int(1))] {
        let phi = mix(&int(1), &be, &ga)?;
        let target = v.point(&[int(0), be.clone(), ga.clone()])?;
        ok &= aut_action(&v, &phi, &reps[2])? == target && report(&target)? == reports[2];
    }
    c.push(
        "linear witnesses identify (0,1,0) with (0,β,γ) for (β,γ) ∈ {(2,3), (0,1), (-1/2,1)}",
        ok,
        "",
    );
    let mut ok = true;
    for (al, be, ga) in [(int(2), int(1), int(0)), (int(-1), int(0), int(3)), (ratio(1, 3), int(2), int(-1))] {
        let phi = mix(&al, &be, &ga)?;
        let target = v.point(&[al.clone(), be.clone(), ga.clone()])?;
        ok &= aut_action(&v, &phi, &reps[3])? == target && report(&target)? == reports[3];
    }
    c.push(
        "linear witnesses identify (1,1,0) with (α,β,γ) for three sampled points with α ≠ 0, (β,γ) ≠ 0",
        ok,
        "",
    );

    let labelled: Vec<(String, Derivation)> = reps
        .iter()
        .map(|r| (coords(&v, r), r.clone()))
        .collect();
    let samples_t = [ratio(1, 3), ratio(1, 2), int(2), int(-1)];
    let order = closure_poset(d, &labelled, &samples_t, |x| report(x))?;
    let shown: Vec<String> = order
        .iter()
        .map(|(a, b)| format!("{} ≤ {}", labelled[*a].0, labelled[*b].0))
        .collect();
    c.push(
        "closure order: (0,0,0) lies below everything, (1,0,0) and (0,1,0) lie below (1,1,0)",
        order == [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)],
        shown.join(", "),
    );

    let top = l.generators().top_degree().unwrap_or(0);
    let cert = elliptic_certificate(d, top)?;
    c.push(
        "the ellipticity certificate of the zero perturbation is inconclusive",
        cert == EllipticStatus::Inconclusive,
        status(cert),
    );

    let tables = reps
        .iter()
        .zip(&reports)
        .map(|(r, rep)| table(&v, r, rep))
        .collect();
    Ok(ExampleReport {
        example: "wedge-2-4-6-6".into(),
        summary: format!(
            "{}-dim MC space, {} gauge, {} orbit classes, invariant tables attached",
            v.dimension(),
            if trivial { "trivial" } else { "nontrivial" },
            classes.len()
        ),
        claims: c.0,
        tables,
    })
}

fn quotient(reduced: bool) -> Result<ExampleReport, CliError> {
    let over = if reduced {
        WindowOverride {
            degree: Some(REDUCED_WINDOW),
            length: None,
        }
    } else {
        WindowOverride::default()
    };
    let p = Problem::parse(QUOTIENT, over)?;
    let l = &p.algebra;
    let d = &p.differential;
    let mut c = Claims(Vec::new());
    let g = |n: &str| l.gen(n).expect("quillen generator");

    let set = l.generators();
    let degrees: Vec<i32> = (0..set.len()).map(|i| set.degree(i)).collect();
    let dv = g("x").bracket(&g("u"))?.try_add(&g("y").bracket(&g("z"))?)?;
    let others_zero = (0..4).all(|i| d.value(i).is_zero());
    c.push(
        "the Quillen model has generators of degrees 3, 5, 12, 14, 18 and dv = [x,u] + [y,z]",
        degrees == [3, 5, 12, 14, 18] && *d.value(4) == dv && others_zero,
        format!("degrees {degrees:?}, dv = {}", d.value(4)),
    );

    let m1 = der_basis(l, &DerKind::ScriptDer, -1)?;
    let (dz, du, dv_) = (named(&p, "delta_z"), named(&p, "delta_u"), named(&p, "delta_v"));
    c.push(
        "𝒟er₋₁ is 3-dimensional, spanned by δ_z: z ↦ ad_x²y, δ_u: u ↦ ad_y²x, δ_v: v ↦ ad_x⁴y",
        m1.len() == 3 && [dz, du, dv_].iter().all(|x| m1.contains(x)),
        format!("dimension {}", m1.len()),
    );

    let v = variety(&p, "sder")?;
    let mut disagreements = 0;
    for a in -3..=3 {
        for b in -3..=3 {
            for gg in -3..=3 {
                let pt = [int(a), int(b), int(gg)];
                let by_system = mc_points_check(&v, &pt)?;
                let assembled = v.assembled_check(&pt)?;
                if by_system != assembled || by_system != (a == b) {
                    disagreements += 1;
                }
            }
        }
    }
    c.push(
        "the MC system cuts out the plane α = β (343-point grid, system and assembled differential)",
        disagreements == 0,
        format!(
            "{} disagreements; system: {}",
            disagreements,
            v.system.to_text().trim_end().replace('\n', "; ")
        ),
    );

    let m0 = der_basis(l, &DerKind::ScriptDer, 0)?;
    let (th, th1, th2) = (named(&p, "theta"), named(&p, "theta'"), named(&p, "theta''"));
    c.push(
        "𝒟er₀ is spanned by θ, θ′, θ″",
        m0.len() == 3 && [th, th1, th2].iter().all(|x| m0.contains(x)),
        format!("dimension {}", m0.len()),
    );
    let b0 = boundary(d, th)?;
    let ok = b0 == dv_.scale(&int(-1)) && boundary(d, th1)?.is_zero() && boundary(d, th2)?.is_zero();
    c.push("Dθ = -δ_v and Dθ′ = Dθ″ = 0", ok, format!("Dθ = {b0}"));

    let mut nonzero = Vec::new();
    let images = DerSubspaceBasis {
        kind: DerKind::Full,
        degree: -1,
        basis: m0
            .basis
            .iter()
            .map(|t| boundary(d, t))
            .collect::<Result<_, _>>()?,
    };
    let mut all_boundaries = true;
    let names = [("θ", th), ("θ′", th1), ("θ″", th2)];
    let deltas = [("δ_z", dz), ("δ_u", du), ("δ_v", dv_)];
    for (na, a) in names {
        for (nb, b) in deltas {
            let br = der_bracket(a, b)?;
            if !br.is_zero() {
                all_boundaries &= images.contains(&br);
                nonzero.push(format!("[{na},{nb}] = {br}"));
            }
        }
    }
    c.push(
        "[𝒟er₀, 𝒟er₋₁] = 0",
        nonzero.is_empty(),
        if nonzero.is_empty() {
            String::new()
        } else {
            format!("nonzero: {}", nonzero.join("; "))
        },
    );
    c.push(
        "[𝒟er₀, 𝒟er₋₁] consists of boundaries D(𝒟er₀)",
        all_boundaries,
        "",
    );

    let mut ok = true;
    for (al, ga) in [(int(1), int(0)), (int(-2), ratio(1, 3)), (int(3), int(5))] {
        let delta = v.point(&[al.clone(), al.clone(), ga.clone()])?;
        for t in [int(1), int(-2), ratio(1, 2)] {
            let expected = v.point(&[al.clone(), al.clone(), &ga + &t])?;
            let tt = th.scale(&t);
            ok &= gauge(d, &tt, &delta)? == expected && gauge_witness_check(d, &tt, &delta, &expected)?;
        }
    }
    c.push(
        "(tθ)𝒢(α,α,γ) = (α,α,γ+t) for t ∈ {1, -2, 1/2}",
        ok,
        "α, γ ∈ {(1,0), (-2,1/3), (3,5)}",
    );
    let mut ok = true;
    for (al, ga) in [(int(1), int(3)), (int(-2), ratio(1, 2))] {
        let delta = v.point(&[al.clone(), al.clone(), ga])?;
        let red = canonical_gauge_representative(&v, &m0.basis, &delta, &[2])?;
        ok &= red.reduced && red.representative == v.point(&[al.clone(), al, int(0)])?;
    }
    c.push("the gauge action reduces (α,α,γ) to (α,α,0)", ok, "");

    let a = p.presentation.as_ref().expect("graded-algebra input");
    let x1 = dz.try_add(du)?;
    let mut ok = true;
    for al in [int(2), ratio(1, 5)] {
        let inv = al.recip();
        let scalars = [inv.clone(), int(1), inv.clone(), int(1), inv];
        ok &= aut_a_action(a, &scalars, &v, &x1)? == x1.scale(&al);
    }
    c.push(
        "the aut(A) scaling witness maps δ_z + δ_u to α(δ_z + δ_u) for α ∈ {2, 1/5}",
        ok,
        "a, c, q scaled by 1/α",
    );

    let report = |delta: &Derivation| orbit_invariants(d, delta, (1, 20), 3);
    let x0 = v.point(&[int(0), int(0), int(0)])?;
    let reps = [x0, x1.clone()];
    let reports: Vec<_> = reps.iter().map(report).collect::<Result<_, _>>()?;
    let classes = classify(&reports);
    c.push(
        "X₀ = 0 and X₁ = δ_z + δ_u have different invariant reports",
        classes.len() == 2,
        format!("{} classes", classes.len()),
    );

    let tables = reps
        .iter()
        .zip(&reports)
        .map(|(r, rep)| table(&v, r, rep))
        .collect();
    let mut summary = format!(
        "MC plane α=β, gauge reduces γ, aut(A) collapses to {} classes {{X₀, X₁}}",
        classes.len()
    );
    if reduced {
        summary.push_str("; ellipticity certificate skipped (reduced window)");
    } else {
        let top = set.top_degree().unwrap_or(0);
        let cert = elliptic_certificate(&d.try_add(&x1)?, top)?;
        c.push(
            "the ellipticity certificate of δ_z + δ_u is certified-elliptic",
            cert == EllipticStatus::CertifiedElliptic,
            format!("homology in degrees {}..{}: {}", 2 * top, 3 * top, status(cert)),
        );
    }
    Ok(ExampleReport {
        example: "su6-quotient".into(),
        summary,
        claims: c.0,
        tables,
    })
}

impl ExampleReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.example, self.summary);
        for c in &self.claims {
            out.push_str(if c.passed { "PASS  " } else { "FAIL  " });
            out.push_str(&c.claim);
            if !c.detail.is_empty() {
                out.push_str(" [");
                out.push_str(&c.detail);
                out.push(']');
            }
            out.push('\n');
        }
        for t in &self.tables {
            let dims: Vec<String> = t.homology.iter().map(|e| e.dimension.to_string()).collect();
            out.push_str(&format!(
                "H of {} in degrees {}..{}: {}",
                t.representative,
                t.homology.first().map(|e| e.degree).unwrap_or(0),
                t.homology.last().map(|e| e.degree).unwrap_or(0),
                dims.join(" ")
            ));
            if let Some(e) = &t.elliptic {
                out.push_str(&format!(" ({e})"));
            }
            out.push('\n');
        }
        out
    }
}
