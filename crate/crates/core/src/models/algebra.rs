use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::Zero;

use crate::dgl::{Derivation, Differential};
use crate::error::{Error, Result};
use crate::glie::{add_term, FreeLie, Generator, GeneratorSet, Terms, Window};
use crate::scalar::{self, Scalar};

/// Finite graded-commutative algebra, given as the augmentation ideal on a
/// linear basis with structure constants `e_i e_j = Σ_k m_ij^k e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebraPresentation {
    names: Vec<String>,
    degrees: Vec<i32>,
    products: BTreeMap<(usize, usize), Vec<(usize, Scalar)>>,
}

fn clean(v: Vec<(usize, Scalar)>) -> Vec<(usize, Scalar)> {
    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (k, c) in v {
        *acc.entry(k).or_insert_with(Scalar::zero) += c;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

impl GradedAlgebraPresentation {
    /// `products` lists `(i, j, e_i e_j)`. A product given one way round
    /// determines the other by graded commutativity; products not listed are
    /// zero. Commutativity, associativity and degrees are checked.
    pub fn new(
        basis: &[(&str, i32)],
        products: &[(usize, usize, Vec<(usize, Scalar)>)],
    ) -> Result<Self> {
        let names: Vec<String> = basis.iter().map(|(n, _)| n.to_string()).collect();
        let degrees: Vec<i32> = basis.iter().map(|(_, d)| *d).collect();
        let m = names.len();
        for (i, d) in degrees.iter().enumerate() {
            if *d < 2 {
                return Err(Error::InvalidPresentation(alloc::format!(
                    "{} has degree {d}; degrees must be at least 2",
                    names[i]
                )));
            }
        }
        for i in 0..m {
            if names[..i].contains(&names[i]) {
                return Err(Error::InvalidPresentation(alloc::format!(
                    "duplicate basis element {}",
                    names[i]
                )));
            }
        }
        let mut table: BTreeMap<(usize, usize), Vec<(usize, Scalar)>> = BTreeMap::new();
        for (i, j, v) in products {
            if *i >= m || *j >= m || v.iter().any(|(k, _)| *k >= m) {
                return Err(Error::InvalidPresentation("product index out of range".into()));
            }
            let v = clean(v.clone());
            for (k, _) in &v {
                if degrees[*k] != degrees[*i] + degrees[*j] {
                    return Err(Error::InvalidPresentation(alloc::format!(
                        "{}*{} has degree {} but {} has degree {}",
                        names[*i],
                        names[*j],
                        degrees[*i] + degrees[*j],
                        names[*k],
                        degrees[*k]
                    )));
                }
            }
            if let Some(prev) = table.get(&(*i, *j)) {
                if *prev != v {
                    return Err(Error::InvalidPresentation(alloc::format!(
                        "{}*{} given twice with different values",
                        names[*i],
                        names[*j]
                    )));
                }
            }
            table.insert((*i, *j), v);
        }
        // Fill in the transposes and check the ones given explicitly.
        let keys: Vec<(usize, usize)> = table.keys().copied().collect();
        for (i, j) in keys {
            let sign = scalar::sign_pow(i64::from(degrees[i] * degrees[j]));
            let swapped: Vec<(usize, Scalar)> = table[&(i, j)]
                .iter()
                .map(|(k, c)| (*k, &sign * c))
                .collect();
            match table.get(&(j, i)) {
                Some(other) if *other != swapped => {
                    return Err(Error::InvalidPresentation(alloc::format!(
                        "{}*{} and {}*{} violate graded commutativity",
                        names[i],
                        names[j],
                        names[j],
                        names[i]
                    )))
                }
                Some(_) => {}
                None => {
                    table.insert((j, i), swapped);
                }
            }
        }
        table.retain(|_, v| !v.is_empty());
        let alg = GradedAlgebraPresentation {
            names,
            degrees,
            products: table,
        };
        alg.check_associative()?;
        Ok(alg)
    }

    /// Builds the presentation without the commutativity and associativity
    /// checks. Meant for exercising what downstream checks catch.
    pub fn new_unchecked(
        basis: &[(&str, i32)],
        products: &[(usize, usize, Vec<(usize, Scalar)>)],
    ) -> Self {
        GradedAlgebraPresentation {
            names: basis.iter().map(|(n, _)| n.to_string()).collect(),
            degrees: basis.iter().map(|(_, d)| *d).collect(),
            products: products
                .iter()
                .map(|(i, j, v)| ((*i, *j), clean(v.clone())))
                .filter(|(_, v)| !v.is_empty())
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `e_i e_j` as sparse coordinates.
    pub fn product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        self.products.get(&(i, j)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Nonzero structure constants `(i, j, k, m_ij^k)`.
    pub fn structure_constants(&self) -> impl Iterator<Item = (usize, usize, usize, &Scalar)> {
        self.products
            .iter()
            .flat_map(|((i, j), v)| v.iter().map(move |(k, c)| (*i, *j, *k, c)))
    }

    fn multiply(&self, a: &[(usize, Scalar)], j: usize) -> Vec<(usize, Scalar)> {
        let mut out = Vec::new();
        for (i, c) in a {
            for (k, m) in self.product(*i, j) {
                out.push((*k, c * m));
            }
        }
        clean(out)
    }

    fn check_associative(&self) -> Result<()> {
        let m = self.len();
        for i in 0..m {
            for j in 0..m {
                let ij = self.product(i, j).to_vec();
                for k in 0..m {
                    let left = self.multiply(&ij, k);
                    let mut right = Vec::new();
                    for (l, c) in self.product(j, k) {
                        for (t, x) in self.product(i, *l) {
                            right.push((*t, c * x));
                        }
                    }
                    if left != clean(right) {
                        return Err(Error::InvalidPresentation(alloc::format!(
                            "({}*{})*{} differs from {}*({}*{})",
                            self.names[i],
                            self.names[j],
                            self.names[k],
                            self.names[i],
                            self.names[j],
                            self.names[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Free Lie algebra on the desuspended dual of `A` with the quadratic
/// differential dual to the product:
/// `d v_k = ½ Σ_{i,j} (-1)^{|e_i|} m_ij^k [v_i, v_j]`, `|v_i| = |e_i| - 1`.
///
/// `names` renames the generators; by default `e` becomes `se`.
/// The returned derivation is not validated; see [`quillen_model`].
pub fn quillen_derivation(
    a: &GradedAlgebraPresentation,
    names: Option<&[&str]>,
    window: Option<Window>,
) -> Result<(FreeLie, Derivation)> {
    if let Some(ns) = names {
        if ns.len() != a.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                found: ns.len(),
            });
        }
    }
    let gens: Vec<Generator> = (0..a.len())
        .map(|i| {
            let name = match names {
                Some(ns) => ns[i].to_string(),
                None => alloc::format!("s{}", a.name(i)),
            };
            Generator::new(name, a.degree(i) - 1)
        })
        .collect();
    let set = GeneratorSet::new(gens, window)?;
    let alg = FreeLie::new(set);
    let half = scalar::ratio(1, 2);
    let mut values: Vec<Terms> = (0..a.len()).map(|_| Terms::new()).collect();
    for (i, j, k, m) in a.structure_constants() {
        let c = &half * &scalar::sign_pow(i64::from(a.degree(i))) * m;
        let b = alg.generator(i).bracket(&alg.generator(j))?;
        for (w, x) in b.terms() {
            add_term(&mut values[k], w.clone(), &c * x);
        }
    }
    let values = values.into_iter().map(|t| alg.element(t, false)).collect();
    let d = Derivation::new(&alg, -1, values)?;
    if d.is_truncated() {
        return Err(Error::WindowInsufficient(
            "window too small for the quadratic differential".into(),
        ));
    }
    Ok((alg, d))
}

/// [`quillen_derivation`] checked to square to zero.
pub fn quillen_model(
    a: &GradedAlgebraPresentation,
    names: Option<&[&str]>,
    window: Option<Window>,
) -> Result<(FreeLie, Differential)> {
    let (alg, d) = quillen_derivation(a, names, window)?;
    let d = Differential::new(d).map_err(|e| match e {
        Error::ConstraintViolation(_) => {
            Error::InvalidPresentation("dual differential does not square to zero".into())
        }
        other => other,
    })?;
    Ok((alg, d))
}
