//! JSON artifacts. Scalars are strings `p/q`; all lists keep declaration
//! order so identical inputs give identical bytes.

use mcdgl_core::dgl::Derivation;
use mcdgl_core::mc::{Polynomial, QuadraticSystem};
use mcdgl_core::models::BigradedModel;
use mcdgl_core::scalar;
use mcdgl_core::{FreeLie, Generator, GeneratorSet, Scalar, Window};
use serde::{Deserialize, Serialize};

use crate::problem::eval_lie;
use crate::syntax::parse_expr;
use crate::CliError;

fn parse_scalar(s: &str) -> Result<Scalar, CliError> {
    scalar::parse(s).ok_or_else(|| CliError::Usage(format!("bad rational `{s}`")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    /// One variable for a linear term, two for a quadratic one.
    pub monomial: Vec<String>,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticSystemJson {
    pub variables: Vec<String>,
    /// Nonzero polynomials only; each is a list of terms.
    pub polynomials: Vec<Vec<Term>>,
}

impl From<&QuadraticSystem> for QuadraticSystemJson {
    fn from(s: &QuadraticSystem) -> Self {
        let name = |i: &usize| s.variables[*i].clone();
        let polynomials = s
            .equations()
            .map(|p| {
                let mut terms: Vec<Term> = p
                    .linear
                    .iter()
                    .map(|(i, c)| Term {
                        monomial: vec![name(i)],
                        coefficient: scalar::format(c),
                    })
                    .collect();
                terms.extend(p.quadratic.iter().map(|((i, j), c)| Term {
                    monomial: vec![name(i), name(j)],
                    coefficient: scalar::format(c),
                }));
                terms
            })
            .collect();
        QuadraticSystemJson {
            variables: s.variables.clone(),
            polynomials,
        }
    }
}

impl QuadraticSystemJson {
    pub fn to_system(&self) -> Result<QuadraticSystem, CliError> {
        let index = |n: &str| {
            self.variables
                .iter()
                .position(|v| v == n)
                .ok_or_else(|| CliError::Usage(format!("unknown variable `{n}`")))
        };
        let mut polynomials = Vec::new();
        for terms in &self.polynomials {
            let mut p = Polynomial::default();
            for t in terms {
                let c = parse_scalar(&t.coefficient)?;
                match t.monomial.as_slice() {
                    [a] => {
                        p.linear.insert(index(a)?, c);
                    }
                    [a, b] => {
                        let (i, j) = (index(a)?, index(b)?);
                        p.quadratic.insert((i.min(j), i.max(j)), c);
                    }
                    _ => return Err(CliError::Usage("monomials have one or two variables".into())),
                }
            }
            polynomials.push(p);
        }
        Ok(QuadraticSystem {
            variables: self.variables.clone(),
            polynomials,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Value {
    pub generator: String,
    pub value: String,
}

/// Nonzero values of a derivation on generators.
pub fn values(theta: &Derivation) -> Vec<Value> {
    let set = theta.algebra().generators();
    theta
        .values()
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| Value {
            generator: set.name(i).to_string(),
            value: v.to_string(),
        })
        .collect()
}

/// Reads values back into a derivation of `alg`.
pub fn derivation_from(alg: &FreeLie, degree: i32, vals: &[Value]) -> Result<Derivation, CliError> {
    let mut out: Vec<_> = (0..alg.rank()).map(|_| alg.zero()).collect();
    for v in vals {
        let i = alg
            .generators()
            .index_of(&v.generator)
            .ok_or_else(|| CliError::Usage(format!("unknown generator `{}`", v.generator)))?;
        let e = parse_expr(&v.value).map_err(|p| CliError::Argument(v.value.clone(), p))?;
        out[i] = eval_lie(&e, alg)?;
    }
    Ok(Derivation::new(alg, degree, out)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisRow {
    pub name: String,
    pub values: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisTable {
    pub kind: String,
    pub degree: i32,
    pub dimension: usize,
    pub rows: Vec<BasisRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionEntry {
    pub degree: i32,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionTable {
    pub perturbation: Vec<Value>,
    pub dimensions: Vec<DimensionEntry>,
    /// `certified-elliptic` or `inconclusive`, when the range allows a verdict.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elliptic: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub name: String,
    pub degree: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeDglJson {
    pub generators: Vec<GeneratorJson>,
    pub max_degree: i32,
    pub max_word_length: usize,
    pub differential: Vec<Value>,
}

impl FreeDglJson {
    pub fn new(d: &Derivation) -> Self {
        let set = d.algebra().generators();
        FreeDglJson {
            generators: set
                .generators()
                .iter()
                .map(|g| GeneratorJson {
                    name: g.name.clone(),
                    degree: g.degree,
                })
                .collect(),
            max_degree: set.max_degree(),
            max_word_length: set.max_word_length(),
            differential: values(d),
        }
    }

    pub fn to_dgl(&self) -> Result<(FreeLie, Derivation), CliError> {
        let gens = self
            .generators
            .iter()
            .map(|g| Generator::new(g.name.clone(), g.degree))
            .collect();
        let set = GeneratorSet::new(
            gens,
            Some(Window {
                max_degree: self.max_degree,
                max_word_length: Some(self.max_word_length),
            }),
        )?;
        let alg = FreeLie::new(set);
        let d = derivation_from(&alg, -1, &self.differential)?;
        Ok((alg, d))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coefficient {
    pub element: String,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedGenerator {
    pub name: String,
    pub lower: i32,
    pub upper: usize,
    pub weight: i64,
    pub differential: String,
    /// `ρ` of a generator of upper degree 0 in the basis of `π`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rho: Vec<Coefficient>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedModelJson {
    pub max_lower: i32,
    pub max_upper: usize,
    pub max_word_length: usize,
    pub certified_lower: i32,
    pub certified_upper: usize,
    pub generators: Vec<BigradedGenerator>,
}

impl BigradedModelJson {
    pub fn new(m: &BigradedModel, basis_names: &[&str]) -> Self {
        let set = m.algebra.generators();
        let weights = m.generator_weights();
        let generators = (0..set.len())
            .map(|i| BigradedGenerator {
                name: set.name(i).to_string(),
                lower: set.degree(i),
                upper: m.upper[i],
                weight: weights[i],
                differential: m.differential.value(i).to_string(),
                rho: m.rho[i]
                    .iter()
                    .filter(|(_, c)| !num_traits::Zero::is_zero(c))
                    .map(|(j, c)| Coefficient {
                        element: basis_names[*j].to_string(),
                        coefficient: scalar::format(c),
                    })
                    .collect(),
            })
            .collect();
        BigradedModelJson {
            max_lower: m.max_lower,
            max_upper: m.max_upper,
            max_word_length: set.max_word_length(),
            certified_lower: m.certified.0,
            certified_upper: m.certified.1,
            generators,
        }
    }

    /// The free dgl described by the artifact.
    pub fn to_dgl(&self) -> Result<(FreeLie, Derivation), CliError> {
        FreeDglJson {
            generators: self
                .generators
                .iter()
                .map(|g| GeneratorJson {
                    name: g.name.clone(),
                    degree: g.lower,
                })
                .collect(),
            max_degree: self.max_lower,
            max_word_length: self.max_word_length,
            differential: self
                .generators
                .iter()
                .filter(|g| g.differential != "0")
                .map(|g| Value {
                    generator: g.name.clone(),
                    value: g.differential.clone(),
                })
                .collect(),
        }
        .to_dgl()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub claim: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantTable {
    pub representative: String,
    pub homology: Vec<DimensionEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elliptic: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleReport {
    pub example: String,
    pub summary: String,
    pub claims: Vec<Claim>,
    pub tables: Vec<InvariantTable>,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }
}
