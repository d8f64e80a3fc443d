//! Turns a parsed [`Document`] into algebraic data.

use mcdgl_core::dersub::{DerKind, FiltrationOfV};
use mcdgl_core::dgl::{Derivation, Differential};
use mcdgl_core::models::{
    bigraded_model, quillen_model, BigradedModel, GradedAlgebraPresentation,
    NilpotentLiePresentation, Truncation,
};
use mcdgl_core::{FreeLie, Generator, GeneratorSet, LieElement, Scalar, Window};
use num_traits::Zero;

use crate::syntax::{parse_document, Body, Document, Expr, Kind, Name, ParseError, Pos};
use crate::CliError;

/// Window given on the command line; overrides the file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WindowOverride {
    pub degree: Option<i32>,
    pub length: Option<usize>,
}

impl WindowOverride {
    /// `N` or `N:L`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let (d, l) = match text.split_once(':') {
            Some((d, l)) => (d, Some(l)),
            None => (text, None),
        };
        let degree = d
            .trim()
            .parse()
            .map_err(|_| format!("bad window degree `{d}`"))?;
        let length = match l {
            Some(l) => Some(
                l.trim()
                    .parse()
                    .map_err(|_| format!("bad window length `{l}`"))?,
            ),
            None => None,
        };
        Ok(WindowOverride {
            degree: Some(degree),
            length,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Task {
    pub pos: Pos,
    pub verb: String,
    pub args: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub kind: Kind,
    pub algebra: FreeLie,
    pub differential: Derivation,
    pub filtration: Option<FiltrationOfV>,
    pub derivations: Vec<(String, Derivation)>,
    pub tasks: Vec<Task>,
    pub presentation: Option<GradedAlgebraPresentation>,
    pub nilpotent: Option<NilpotentLiePresentation>,
    pub model: Option<BigradedModel>,
}

fn at(pos: Pos, e: impl std::fmt::Display) -> CliError {
    CliError::Parse(ParseError::new(pos, e.to_string()))
}

fn err<T>(pos: Pos, msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Parse(ParseError::new(pos, msg)))
}

/// Evaluates a bracket expression in `alg`.
pub fn eval_lie(e: &Expr, alg: &FreeLie) -> Result<LieElement, CliError> {
    let v = match e {
        Expr::Zero(_) => alg.zero(),
        Expr::Name(n, p) => match alg.gen(n) {
            Some(g) => g,
            None => return err(*p, format!("unknown generator `{n}`")),
        },
        Expr::Scale(c, inner) => eval_lie(inner, alg)?.scale(c),
        Expr::Sum(terms) => {
            let mut acc = alg.zero();
            for t in terms {
                acc = acc.try_add(&eval_lie(t, alg)?).map_err(|x| at(t.pos(), x))?;
            }
            acc
        }
        Expr::Bracket(a, b, p) => eval_lie(a, alg)?
            .bracket(&eval_lie(b, alg)?)
            .map_err(|x| at(*p, x))?,
        Expr::Ad { x, power, y, pos } => eval_lie(x, alg)?
            .ad_pow(*power, &eval_lie(y, alg)?)
            .map_err(|e| at(*pos, e))?,
    };
    if v.is_truncated() {
        return err(e.pos(), "expression leaves the computation window");
    }
    Ok(v)
}

/// Evaluates a linear combination of `names` as a dense coefficient vector.
pub fn eval_linear(e: &Expr, names: &[&str], what: &str) -> Result<Vec<Scalar>, CliError> {
    let mut out = vec![Scalar::zero(); names.len()];
    fn go(
        e: &Expr,
        c: &Scalar,
        names: &[&str],
        what: &str,
        out: &mut [Scalar],
    ) -> Result<(), CliError> {
        match e {
            Expr::Zero(_) => Ok(()),
            Expr::Name(n, p) => match names.iter().position(|m| m == n) {
                Some(i) => {
                    out[i] += c;
                    Ok(())
                }
                None => err(*p, format!("unknown {what} `{n}`")),
            },
            Expr::Scale(s, inner) => go(inner, &(c * s), names, what, out),
            Expr::Sum(terms) => terms.iter().try_for_each(|t| go(t, c, names, what, out)),
            Expr::Bracket(_, _, p) | Expr::Ad { pos: p, .. } => {
                err(*p, format!("brackets are not allowed in a combination of {what}s"))
            }
        }
    }
    go(e, &Scalar::from_integer(1.into()), names, what, &mut out)?;
    Ok(out)
}

fn resolve(names: &[&str], n: &Name, what: &str) -> Result<usize, CliError> {
    names
        .iter()
        .position(|m| *m == n.0)
        .ok_or_else(|| at(n.1, format!("unknown {what} `{}`", n.0)))
}

struct Collected<'a> {
    gens: Vec<(Name, i32)>,
    gens_pos: Option<Pos>,
    window: Option<(Pos, Option<i32>, Option<usize>)>,
    names: Option<&'a [Name]>,
    differential: Vec<(&'a Name, &'a Expr)>,
    filtration: Option<(Pos, &'a [Vec<Name>])>,
    derivations: Vec<(Pos, &'a Name, i32, &'a [(Name, Expr)])>,
    products: Vec<(Pos, &'a Name, &'a Name, &'a Expr)>,
    brackets: Vec<(Pos, &'a Name, &'a Name, &'a Expr)>,
    class: Option<usize>,
    truncation: Option<Truncation>,
    tasks: Vec<Task>,
}

fn collect(doc: &Document) -> Result<Collected<'_>, CliError> {
    let mut c = Collected {
        gens: Vec::new(),
        gens_pos: None,
        window: None,
        names: None,
        differential: Vec::new(),
        filtration: None,
        derivations: Vec::new(),
        products: Vec::new(),
        brackets: Vec::new(),
        class: None,
        truncation: None,
        tasks: Vec::new(),
    };
    let kind = doc.kind;
    for st in &doc.statements {
        let allowed = match &st.body {
            Body::Generators(_) => true,
            Body::Window { .. } | Body::Task { .. } | Body::Derivation { .. } => true,
            Body::Filtration(_) => kind != Kind::NilpotentLie,
            Body::Differential(..) => kind == Kind::FreeDgl,
            Body::Names(_) | Body::Product(..) => kind == Kind::GradedAlgebra,
            Body::Bracket(..) | Body::Class(_) | Body::Truncation { .. } => {
                kind == Kind::NilpotentLie
            }
        };
        if !allowed {
            return err(st.pos, format!("statement not allowed in a {} file", kind.keyword()));
        }
        match &st.body {
            Body::Generators(g) => {
                c.gens.extend(g.iter().cloned());
                c.gens_pos.get_or_insert(st.pos);
            }
            Body::Window { degree, length } => c.window = Some((st.pos, *degree, *length)),
            Body::Names(n) => c.names = Some(n),
            Body::Differential(g, e) => c.differential.push((g, e)),
            Body::Filtration(steps) => c.filtration = Some((st.pos, steps)),
            Body::Derivation {
                name,
                degree,
                values,
            } => c.derivations.push((st.pos, name, *degree, values)),
            Body::Product(a, b, e) => c.products.push((st.pos, a, b, e)),
            Body::Bracket(a, b, e) => c.brackets.push((st.pos, a, b, e)),
            Body::Class(n) => c.class = Some(*n),
            Body::Truncation {
                lower,
                upper,
                length,
            } => {
                c.truncation = Some(Truncation {
                    max_lower: *lower,
                    max_upper: *upper,
                    max_word_length: *length,
                })
            }
            Body::Task { verb, args } => c.tasks.push(Task {
                pos: st.pos,
                verb: verb.clone(),
                args: args.clone(),
            }),
        }
    }
    Ok(c)
}

fn window_for(
    c: &Collected<'_>,
    over: WindowOverride,
    top: i32,
) -> Option<Window> {
    let (fd, fl) = c.window.map(|(_, d, l)| (d, l)).unwrap_or((None, None));
    let degree = over.degree.or(fd);
    let length = over.length.or(fl);
    if degree.is_none() && length.is_none() {
        return None;
    }
    Some(Window {
        max_degree: degree.unwrap_or(3 * top + 1),
        max_word_length: length,
    })
}

fn check_unique(gens: &[(Name, i32)], what: &str) -> Result<(), CliError> {
    for (i, ((n, p), _)) in gens.iter().enumerate() {
        if gens[..i].iter().any(|((m, _), _)| m == n) {
            return err(*p, format!("duplicate {what} `{n}`"));
        }
    }
    Ok(())
}

impl Problem {
    pub fn parse(text: &str, over: WindowOverride) -> Result<Problem, CliError> {
        let doc = parse_document(text)?;
        Problem::elaborate(&doc, over)
    }

    pub fn elaborate(doc: &Document, over: WindowOverride) -> Result<Problem, CliError> {
        let c = collect(doc)?;
        let header = Pos { line: 1, column: 1 };
        let first = c.gens_pos.unwrap_or(header);
        let top = c.gens.iter().map(|(_, d)| *d).max().unwrap_or(0);
        let mut presentation = None;
        let mut nilpotent = None;
        let mut model = None;
        let (algebra, differential) = match doc.kind {
            Kind::FreeDgl => {
                check_unique(&c.gens, "generator")?;
                let gens = c
                    .gens
                    .iter()
                    .map(|((n, _), d)| Generator::new(n.clone(), *d))
                    .collect();
                let set = GeneratorSet::new(gens, window_for(&c, over, top))
                    .map_err(|e| at(first, e))?;
                let alg = FreeLie::new(set);
                let mut values: Vec<LieElement> =
                    (0..alg.rank()).map(|_| alg.zero()).collect();
                for (g, e) in &c.differential {
                    let i = alg
                        .generators()
                        .index_of(&g.0)
                        .ok_or_else(|| at(g.1, format!("unknown generator `{}`", g.0)))?;
                    let v = eval_lie(e, &alg)?;
                    let want = alg.generators().degree(i) - 1;
                    if !v.is_zero() && !v.is_homogeneous_of(want) {
                        return err(e.pos(), format!("d {} must have degree {want}", g.0));
                    }
                    values[i] = v;
                }
                let d = Derivation::new(&alg, -1, values).map_err(|e| at(first, e))?;
                let pos = c.differential.first().map(|(g, _)| g.1).unwrap_or(first);
                let d = Differential::new(d).map_err(|e| at(pos, e))?.into_derivation();
                (alg, d)
            }
            Kind::GradedAlgebra => {
                check_unique(&c.gens, "basis element")?;
                let basis: Vec<(&str, i32)> =
                    c.gens.iter().map(|((n, _), d)| (n.as_str(), *d)).collect();
                let names: Vec<&str> = basis.iter().map(|(n, _)| *n).collect();
                let mut products = Vec::new();
                for (_, a, b, e) in &c.products {
                    let i = resolve(&names, a, "basis element")?;
                    let j = resolve(&names, b, "basis element")?;
                    let v = eval_linear(e, &names, "basis element")?;
                    let sparse = v
                        .into_iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_zero())
                        .collect();
                    products.push((i, j, sparse));
                }
                let pos = c.products.first().map(|p| p.0).unwrap_or(first);
                let a = GradedAlgebraPresentation::new(&basis, &products)
                    .map_err(|e| at(pos, e))?;
                let qnames: Option<Vec<&str>> =
                    c.names.map(|ns| ns.iter().map(|(n, _)| n.as_str()).collect());
                if let (Some(ns), Some(q)) = (c.names, &qnames) {
                    if q.len() != a.len() {
                        let p = ns.first().map(|n| n.1).unwrap_or(first);
                        return err(p, format!("expected {} names, found {}", a.len(), q.len()));
                    }
                }
                let window = window_for(&c, over, top - 1);
                let (alg, d) = quillen_model(&a, qnames.as_deref(), window)
                    .map_err(|e| at(first, e))?;
                presentation = Some(a);
                (alg, d.into_derivation())
            }
            Kind::NilpotentLie => {
                check_unique(&c.gens, "basis element")?;
                let basis: Vec<(&str, i32)> =
                    c.gens.iter().map(|((n, _), d)| (n.as_str(), *d)).collect();
                let names: Vec<&str> = basis.iter().map(|(n, _)| *n).collect();
                let mut brackets = Vec::new();
                for (_, a, b, e) in &c.brackets {
                    let i = resolve(&names, a, "basis element")?;
                    let j = resolve(&names, b, "basis element")?;
                    let v = eval_linear(e, &names, "basis element")?;
                    let sparse = v
                        .into_iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_zero())
                        .collect();
                    brackets.push((i, j, sparse));
                }
                let pos = c.brackets.first().map(|p| p.0).unwrap_or(first);
                let class = c.class.unwrap_or(basis.len().max(1));
                let pi = NilpotentLiePresentation::new(&basis, &brackets, class)
                    .map_err(|e| at(pos, e))?;
                let trunc = match (c.truncation, over.degree) {
                    (Some(t), None) => Truncation {
                        max_word_length: over.length.or(t.max_word_length),
                        ..t
                    },
                    (t, Some(lower)) => Truncation {
                        max_lower: lower,
                        max_upper: t.map(|t| t.max_upper).unwrap_or(DEFAULT_UPPER),
                        max_word_length: over.length.or(t.and_then(|t| t.max_word_length)),
                    },
                    (None, None) => {
                        return err(first, "a nilpotent-lie file needs a truncation statement or --window")
                    }
                };
                let m = bigraded_model(&pi, trunc).map_err(|e| at(first, e))?;
                let out = (m.algebra.clone(), m.differential.clone());
                nilpotent = Some(pi);
                model = Some(m);
                out
            }
        };
        let filtration = match c.filtration {
            None => None,
            Some((pos, steps)) => {
                let set = algebra.generators();
                let mut idx = Vec::new();
                for step in steps {
                    let mut s = Vec::new();
                    for n in step {
                        s.push(set.index_of(&n.0).ok_or_else(|| {
                            at(n.1, format!("unknown generator `{}`", n.0))
                        })?);
                    }
                    idx.push(s);
                }
                Some(FiltrationOfV::coordinate(set, &idx).map_err(|e| at(pos, e))?)
            }
        };
        let mut derivations: Vec<(String, Derivation)> = Vec::new();
        for (pos, name, degree, values) in &c.derivations {
            if derivations.iter().any(|(n, _)| *n == name.0) {
                return err(name.1, format!("duplicate derivation `{}`", name.0));
            }
            let set = algebra.generators();
            let mut vals: Vec<LieElement> = (0..algebra.rank()).map(|_| algebra.zero()).collect();
            for (g, e) in values.iter() {
                let i = set
                    .index_of(&g.0)
                    .ok_or_else(|| at(g.1, format!("unknown generator `{}`", g.0)))?;
                let v = eval_lie(e, &algebra)?;
                let want = set.degree(i) + degree;
                if !v.is_zero() && !v.is_homogeneous_of(want) {
                    return err(e.pos(), format!("value on {} must have degree {want}", g.0));
                }
                vals[i] = v;
            }
            let theta = Derivation::new(&algebra, *degree, vals).map_err(|e| at(*pos, e))?;
            derivations.push((name.0.clone(), theta));
        }
        Ok(Problem {
            kind: doc.kind,
            algebra,
            differential,
            filtration,
            derivations,
            tasks: c.tasks,
            presentation,
            nilpotent,
            model,
        })
    }

    /// The subspace family named on the command line.
    pub fn der_kind(&self, name: &str) -> Result<DerKind, CliError> {
        match name {
            "der" => Ok(DerKind::Full),
            "dder" => Ok(DerKind::Dder(self.filtration.clone().unwrap_or_else(|| {
                FiltrationOfV::trivial(self.algebra.generators())
            }))),
            "sder" => Ok(DerKind::ScriptDer),
            "weight" => match &self.model {
                Some(m) => Ok(DerKind::WeightRaising(m.generator_weights())),
                None => Err(CliError::Usage(
                    "kind `weight` needs a nilpotent-lie input".into(),
                )),
            },
            other => Err(CliError::Usage(format!(
                "unknown kind `{other}`, expected der, dder, sder or weight"
            ))),
        }
    }

    pub fn derivation(&self, name: &str) -> Option<&Derivation> {
        self.derivations
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, d)| d)
    }

    /// A linear combination of declared derivations, e.g. `delta_z + 2*delta_u`.
    pub fn combination(&self, text: &str, degree: i32) -> Result<Derivation, CliError> {
        let e = crate::syntax::parse_expr(text).map_err(|e| CliError::Argument(text.into(), e))?;
        let names: Vec<&str> = self.derivations.iter().map(|(n, _)| n.as_str()).collect();
        let c = eval_linear(&e, &names, "derivation").map_err(|e| match e {
            CliError::Parse(p) => CliError::Argument(text.into(), p),
            other => other,
        })?;
        let mut acc = Derivation::zero(&self.algebra, degree);
        for ((n, d), x) in self.derivations.iter().zip(&c) {
            if x.is_zero() {
                continue;
            }
            if d.degree() != degree {
                return Err(CliError::Usage(format!(
                    "`{n}` has degree {}, expected {degree}",
                    d.degree()
                )));
            }
            acc = acc.add_scaled(x, d)?;
        }
        Ok(acc)
    }
}

/// Upper-degree bound used when only `--window` is given.
pub const DEFAULT_UPPER: usize = 4;
