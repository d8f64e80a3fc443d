use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::Zero;

use crate::dgl::{exp, is_differential, log_unchecked, Automorphism, Derivation};
use crate::error::{Error, Result};
use crate::glie::{
    add_term, standard_split, BasisKind, FreeLie, Generator, GeneratorSet, LieElement, Terms,
    Window, Word,
};

use crate::linalg::{greedy_complement, nullspace, rank, SparseVec};
use crate::scalar::{self, Scalar};

type Vector = Vec<(usize, Scalar)>;

fn clean(v: Vec<(usize, Scalar)>) -> Vector {
    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (k, c) in v {
        *acc.entry(k).or_insert_with(Scalar::zero) += c;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Finite-dimensional nilpotent graded Lie algebra on a basis with
/// structure constants `[e_i, e_j] = Σ_k c_ij^k e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentLiePresentation {
    names: Vec<String>,
    degrees: Vec<i32>,
    brackets: BTreeMap<(usize, usize), Vector>,
    class: usize,
}

impl NilpotentLiePresentation {
    /// A bracket given one way round determines the other by graded
    /// antisymmetry; brackets not listed are zero. Checks degrees,
    /// antisymmetry, Jacobi, and that the lower central series vanishes
    /// after `class` steps.
    pub fn new(
        basis: &[(&str, i32)],
        brackets: &[(usize, usize, Vector)],
        class: usize,
    ) -> Result<Self> {
        let names: Vec<String> = basis.iter().map(|(n, _)| n.to_string()).collect();
        let degrees: Vec<i32> = basis.iter().map(|(_, d)| *d).collect();
        let m = names.len();
        if let Some(i) = degrees.iter().position(|d| *d < 0) {
            return Err(Error::InvalidPresentation(alloc::format!(
                "{} has negative degree",
                names[i]
            )));
        }
        for i in 0..m {
            if names[..i].contains(&names[i]) {
                return Err(Error::InvalidPresentation(alloc::format!(
                    "duplicate basis element {}",
                    names[i]
                )));
            }
        }
        let mut table: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
        for (i, j, v) in brackets {
            if *i >= m || *j >= m || v.iter().any(|(k, _)| *k >= m) {
                return Err(Error::InvalidPresentation("bracket index out of range".into()));
            }
            let v = clean(v.clone());
            if let Some((k, _)) = v.iter().find(|(k, _)| degrees[*k] != degrees[*i] + degrees[*j]) {
                return Err(Error::InvalidPresentation(alloc::format!(
                    "[{},{}] has degree {} but {} has degree {}",
                    names[*i],
                    names[*j],
                    degrees[*i] + degrees[*j],
                    names[*k],
                    degrees[*k]
                )));
            }
            if table.get(&(*i, *j)).is_some_and(|p| *p != v) {
                return Err(Error::InvalidPresentation(alloc::format!(
                    "[{},{}] given twice with different values",
                    names[*i],
                    names[*j]
                )));
            }
            table.insert((*i, *j), v);
        }
        let keys: Vec<(usize, usize)> = table.keys().copied().collect();
        for (i, j) in keys {
            let sign = -scalar::sign_pow(i64::from(degrees[i] * degrees[j]));
            let swapped: Vector = table[&(i, j)].iter().map(|(k, c)| (*k, &sign * c)).collect();
            match table.get(&(j, i)) {
                Some(other) if *other != swapped => {
                    return Err(Error::InvalidPresentation(alloc::format!(
                        "[{},{}] violates graded antisymmetry",
                        names[i],
                        names[j]
                    )))
                }
                Some(_) => {}
                None => {
                    table.insert((j, i), swapped);
                }
            }
        }
        table.retain(|_, v| !v.is_empty());
        let pi = NilpotentLiePresentation {
            names,
            degrees,
            brackets: table,
            class,
        };
        pi.check_jacobi()?;
        pi.check_nilpotent()?;
        Ok(pi)
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

    pub fn class_bound(&self) -> usize {
        self.class
    }

    /// Dimension of the degree-`p` part.
    pub fn dimension(&self, p: i32) -> usize {
        self.degrees.iter().filter(|d| **d == p).count()
    }

    /// Bracket of two vectors.
    pub fn bracket(&self, a: &[(usize, Scalar)], b: &[(usize, Scalar)]) -> Vector {
        let mut out = Vec::new();
        for (i, x) in a {
            for (j, y) in b {
                if let Some(v) = self.brackets.get(&(*i, *j)) {
                    let xy = x * y;
                    out.extend(v.iter().map(|(k, c)| (*k, c * &xy)));
                }
            }
        }
        clean(out)
    }

    fn unit(i: usize) -> Vector {
        alloc::vec![(i, scalar::one())]
    }

    fn check_jacobi(&self) -> Result<()> {
        let m = self.len();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let (ea, eb, ec) = (Self::unit(a), Self::unit(b), Self::unit(c));
                    let lhs = self.bracket(&ea, &self.bracket(&eb, &ec));
                    let mut rhs = self.bracket(&self.bracket(&ea, &eb), &ec);
                    let s = scalar::sign_pow(i64::from(self.degrees[a] * self.degrees[b]));
                    rhs.extend(
                        self.bracket(&eb, &self.bracket(&ea, &ec))
                            .into_iter()
                            .map(|(k, x)| (k, x * &s)),
                    );
                    if lhs != clean(rhs) {
                        return Err(Error::InvalidPresentation(alloc::format!(
                            "Jacobi identity fails on {}, {}, {}",
                            self.names[a],
                            self.names[b],
                            self.names[c]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Spans of `π^1 = π ⊃ π^2 = [π,π] ⊃ ...` until zero.
    pub fn lower_central_series(&self) -> Vec<Vec<Vector>> {
        let m = self.len();
        let mut out: Vec<Vec<Vector>> = Vec::new();
        let mut cur: Vec<Vector> = (0..m).map(Self::unit).collect();
        while rank(&cur) > 0 && out.len() <= self.class + m {
            out.push(cur.clone());
            let mut next = Vec::new();
            for i in 0..m {
                for v in &cur {
                    let b = self.bracket(&Self::unit(i), v);
                    if !b.is_empty() {
                        next.push(b);
                    }
                }
            }
            cur = next;
        }
        out
    }

    fn check_nilpotent(&self) -> Result<()> {
        let steps = self.lower_central_series().len();
        if steps > self.class {
            return Err(Error::InvalidPresentation(alloc::format!(
                "lower central series does not vanish within class {}",
                self.class
            )));
        }
        Ok(())
    }
}

/// Bigraded model `(𝕃(V), d) → π` with `V = ⊕ V_p^n`.
#[derive(Clone, Debug)]
pub struct BigradedModel {
    pub algebra: FreeLie,
    /// Upper degree of each generator.
    pub upper: Vec<usize>,
    pub differential: Derivation,
    /// `ρ` on generators: a vector of `π` on `V^0`, zero elsewhere.
    pub rho: Vec<Vector>,
    pub max_lower: i32,
    pub max_upper: usize,
    /// Lower and upper bounds within which `H^0 ≅ π` and `H^+ = 0` were verified.
    pub certified: (i32, usize),
}

/// Bounds on the lower (homological) and upper degrees of generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub max_lower: i32,
    pub max_upper: usize,
    /// Required when `π` has elements of degree 0.
    pub max_word_length: Option<usize>,
}

fn word_upper(upper: &[usize], w: &[u16]) -> usize {
    w.iter().map(|l| upper[usize::from(*l)]).sum()
}

/// The part of `basis(degree p)` of upper degree `n`.
fn block(alg: &FreeLie, upper: &[usize], p: i32, n: usize) -> Vec<LieElement> {
    let mut out = Vec::new();
    for len in alg.lengths_in_degree(p) {
        let cell = alg.basis_cell(len, p);
        for b in &cell.elements {
            if word_upper(upper, &b.leading_word()) == n {
                out.push(b.element.clone());
            }
        }
    }
    out
}

fn key(e: &LieElement) -> SparseVec<Word> {
    e.lead_projection()
}

/// Kernel of a linear map given by the images of `elems`, as combinations
/// of `elems`.
fn kernel(elems: &[LieElement], images: &[SparseVec<Word>]) -> Vec<LieElement> {
    let mut rows: BTreeMap<Word, Vec<Scalar>> = BTreeMap::new();
    for (j, img) in images.iter().enumerate() {
        for (w, c) in img {
            rows.entry(w.clone())
                .or_insert_with(|| alloc::vec![Scalar::zero(); elems.len()])[j] = c.clone();
        }
    }
    let ns = nullspace(rows.into_values().collect(), elems.len());
    ns.into_iter()
        .map(|v| {
            let mut acc = elems[0].algebra().zero();
            for (c, e) in v.iter().zip(elems) {
                acc = acc.add_scaled(c, e).expect("same algebra");
            }
            acc
        })
        .collect()
}

fn d_images(d: &Derivation, elems: &[LieElement]) -> Result<Vec<SparseVec<Word>>> {
    elems.iter().map(|e| d.evaluate(e).map(|x| key(&x))).collect()
}

struct Rho<'a> {
    pi: &'a NilpotentLiePresentation,
    alg: &'a FreeLie,
    gens: &'a [Vector],
    memo: BTreeMap<Word, Vector>,
}

impl Rho<'_> {
    fn lyndon(&mut self, w: &[u16]) -> Vector {
        if let Some(v) = self.memo.get(w) {
            return v.clone();
        }
        let v = if w.len() == 1 {
            self.gens[usize::from(w[0])].clone()
        } else {
            let k = standard_split(w);
            let a = self.lyndon(&w[..k]);
            let b = self.lyndon(&w[k..]);
            self.pi.bracket(&a, &b)
        };
        self.memo.insert(w.to_vec(), v.clone());
        v
    }

    fn apply(&mut self, e: &LieElement) -> Result<Vector> {
        let mut out = Vec::new();
        for ((len, deg), comp) in e.components() {
            let coords = self.alg.express(&comp, len, deg)?;
            let cell = self.alg.basis_cell(len, deg);
            for (c, b) in coords.iter().zip(&cell.elements) {
                if c.is_zero() {
                    continue;
                }
                let base = self.lyndon(&b.lyndon);
                let img = match b.kind {
                    BasisKind::Lyndon => base,
                    BasisKind::Square => self.pi.bracket(&base, &base),
                };
                out.extend(img.into_iter().map(|(k, x)| (k, x * c)));
            }
        }
        Ok(clean(out))
    }
}

fn vector_key(v: &[(usize, Scalar)]) -> SparseVec<Word> {
    v.iter().map(|(k, c)| (alloc::vec![*k as u16], c.clone())).collect()
}

struct Stage {
    gens: Vec<Generator>,
    upper: Vec<usize>,
    values: Vec<Terms>,
    rho: Vec<Vector>,
}

impl Stage {
    fn algebra(&self, window: Window) -> Result<(FreeLie, Derivation)> {
        let set = GeneratorSet::new(self.gens.clone(), Some(window))?;
        let alg = FreeLie::new(set);
        let values = self
            .values
            .iter()
            .map(|t| alg.element(t.clone(), false))
            .collect();
        let d = Derivation::new(&alg, -1, values)?;
        Ok((alg, d))
    }
}

/// Builds the bigraded model of `π` up to the given truncation, choosing
/// sections greedily in basis order, and verifies it.
pub fn bigraded_model(pi: &NilpotentLiePresentation, trunc: Truncation) -> Result<BigradedModel> {
    let p_max = trunc.max_lower;
    if let Some(i) = (0..pi.len()).find(|&i| pi.degree(i) > p_max) {
        return Err(Error::WindowInsufficient(alloc::format!(
            "{} has degree {} above the truncation {}",
            pi.name(i),
            pi.degree(i),
            p_max
        )));
    }
    let has_zero = (0..pi.len()).any(|i| pi.degree(i) == 0);
    let word_bound = match (trunc.max_word_length, has_zero) {
        (Some(w), _) => w,
        (None, false) => p_max.max(1) as usize,
        (None, true) => {
            return Err(Error::Hypothesis(
                "degree-0 elements need a word-length bound".into(),
            ))
        }
    };
    let window = Window {
        max_degree: p_max,
        max_word_length: Some(word_bound),
    };

    // V^0: a complement of [π, π] among the basis vectors.
    let m = pi.len();
    let units: Vec<Vector> = (0..m).map(NilpotentLiePresentation::unit).collect();
    let mut squares = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let b = pi.bracket(&units[i], &units[j]);
            if !b.is_empty() {
                squares.push(vector_key(&b));
            }
        }
    }
    let unit_keys: Vec<_> = units.iter().map(|u| vector_key(u)).collect();
    let chosen = greedy_complement(&squares, &unit_keys);
    let mut stage = Stage {
        gens: chosen
            .iter()
            .map(|&i| Generator::new(pi.name(i), pi.degree(i)))
            .collect(),
        upper: alloc::vec![0; chosen.len()],
        values: alloc::vec![Terms::new(); chosen.len()],
        rho: chosen.iter().map(|&i| units[i].clone()).collect(),
    };
    let n0 = stage.gens.len();

    for n in 0..trunc.max_upper {
        let (alg, d) = stage.algebra(window)?;
        let mut rho = Rho {
            pi,
            alg: &alg,
            gens: &stage.rho,
            memo: BTreeMap::new(),
        };
        let mut new_values: Vec<(i32, LieElement)> = Vec::new();
        let lo = alg.generators().min_degree().unwrap_or(0).max(0);
        let mut cycles_by_degree: BTreeMap<i32, Vec<LieElement>> = BTreeMap::new();
        for p in lo..p_max {
            let elems = block(&alg, &stage.upper, p, n);
            if elems.is_empty() {
                continue;
            }
            let images = if n == 0 {
                elems
                    .iter()
                    .map(|e| rho.apply(e).map(|v| vector_key(&v)))
                    .collect::<Result<Vec<_>>>()?
            } else {
                d_images(&d, &elems)?
            };
            let cycles = kernel(&elems, &images);
            cycles_by_degree.insert(p, cycles);
        }
        for (&p, cycles) in &cycles_by_degree {
            if cycles.is_empty() {
                continue;
            }
            let mut killed: Vec<SparseVec<Word>> = Vec::new();
            if n > 0 {
                for b in block(&alg, &stage.upper, p + 1, n + 1) {
                    let img = d.evaluate(&b)?;
                    if !img.is_zero() {
                        killed.push(key(&img));
                    }
                }
            }
            for v in 0..n0 {
                let dv = alg.generators().degree(v);
                if let Some(zs) = cycles_by_degree.get(&(p - dv)) {
                    for z in zs {
                        let b = alg.generator(v).bracket(z)?;
                        if !b.is_zero() {
                            killed.push(key(&b));
                        }
                    }
                }
            }
            let cand: Vec<_> = cycles.iter().map(key).collect();
            for i in greedy_complement(&killed, &cand) {
                new_values.push((p, cycles[i].clone()));
            }
        }
        if new_values.is_empty() {
            continue;
        }
        let mut count = 0;
        for (p, z) in new_values {
            count += 1;
            stage
                .gens
                .push(Generator::new(alloc::format!("v{}_{}", n + 1, count), p + 1));
            stage.upper.push(n + 1);
            let mut t = Terms::new();
            for (w, c) in z.terms() {
                add_term(&mut t, w.clone(), c.clone());
            }
            stage.values.push(t);
            stage.rho.push(Vec::new());
        }
    }

    let (alg, d) = stage.algebra(window)?;
    let model = BigradedModel {
        algebra: alg,
        upper: stage.upper,
        differential: d,
        rho: stage.rho,
        max_lower: p_max,
        max_upper: trunc.max_upper,
        certified: (p_max - 1, trunc.max_upper.saturating_sub(1)),
    };
    verify(pi, &model)?;
    Ok(model)
}

/// `ρ` applied to an element of the model.
pub fn rho_apply(pi: &NilpotentLiePresentation, model: &BigradedModel, e: &LieElement) -> Result<Vector> {
    let mut rho = Rho {
        pi,
        alg: &model.algebra,
        gens: &model.rho,
        memo: BTreeMap::new(),
    };
    rho.apply(e)
}

/// Checks the defining properties of the model within `model.certified`.
pub fn verify(pi: &NilpotentLiePresentation, model: &BigradedModel) -> Result<()> {
    let alg = &model.algebra;
    let d = &model.differential;
    let upper = &model.upper;
    let fail = |what: String| Err(Error::ConstraintViolation(what));
    for (i, v) in d.values().iter().enumerate() {
        let n = upper[i];
        if n == 0 && !v.is_zero() {
            return fail(alloc::format!("d{} is not zero", alg.generators().name(i)));
        }
        if v.terms().any(|(w, _)| word_upper(upper, w) + 1 != n) {
            return fail(alloc::format!(
                "d{} does not lower the upper degree by one",
                alg.generators().name(i)
            ));
        }
        if n == 1 && !rho_apply(pi, model, v)?.is_empty() {
            return fail(alloc::format!("rho(d{}) is not zero", alg.generators().name(i)));
        }
    }
    if !is_differential(d)? {
        return fail("d does not square to zero".into());
    }
    let (p_top, n_top) = model.certified;
    let mut rho = Rho {
        pi,
        alg,
        gens: &model.rho,
        memo: BTreeMap::new(),
    };
    for p in 0..=p_top {
        for n in 0..=n_top {
            let here = block(alg, upper, p, n);
            let above = block(alg, upper, p + 1, n + 1);
            let b_rank = rank(&d_images(d, &above)?);
            let cycles = if n == 0 {
                here.len()
            } else {
                kernel(&here, &d_images(d, &here)?).len()
            };
            let h = cycles - b_rank;
            if n == 0 {
                let imgs: Vec<_> = here
                    .iter()
                    .map(|e| rho.apply(e).map(|v| vector_key(&v)))
                    .collect::<Result<_>>()?;
                if h != pi.dimension(p) || rank(&imgs) != pi.dimension(p) {
                    return fail(alloc::format!("H^0 differs from pi in degree {p}"));
                }
            } else if h != 0 {
                return fail(alloc::format!("H^{n} is nonzero in degree {p}"));
            }
        }
    }
    Ok(())
}

impl BigradedModel {
    /// `p - n` for each generator.
    pub fn generator_weights(&self) -> Vec<i64> {
        let set = self.algebra.generators();
        (0..set.len())
            .map(|i| i64::from(set.degree(i)) - self.upper[i] as i64)
            .collect()
    }

    pub fn generator_bidegree(&self, i: usize) -> (i32, usize) {
        (self.algebra.generators().degree(i), self.upper[i])
    }

    /// Weight of a bihomogeneous element.
    pub fn weight(&self, e: &LieElement) -> Result<i64> {
        let mut found: Option<(i32, usize)> = None;
        let set = self.algebra.generators();
        for (w, _) in e.terms() {
            let p: i32 = w.iter().map(|l| set.degree(usize::from(*l))).sum();
            let n = word_upper(&self.upper, w);
            match found {
                None => found = Some((p, n)),
                Some(f) if f != (p, n) => return Err(Error::NonHomogeneous),
                _ => {}
            }
        }
        match found {
            Some((p, n)) => Ok(i64::from(p) - n as i64),
            None => Err(Error::NonHomogeneous),
        }
    }

    fn word_weight(&self, w: &[u16]) -> i64 {
        let weights = self.generator_weights();
        w.iter().map(|l| weights[usize::from(*l)]).sum()
    }

    /// Whether every value of `theta` has strictly larger weight than its
    /// generator.
    pub fn raises_weight(&self, theta: &Derivation) -> bool {
        let weights = self.generator_weights();
        theta.values().iter().enumerate().all(|(i, v)| {
            v.terms().all(|(w, _)| self.word_weight(w) > weights[i])
        })
    }

    /// Whether `f - id` strictly raises weight on generators.
    pub fn automorphism_raises_weight(&self, f: &Automorphism) -> bool {
        let weights = self.generator_weights();
        (0..self.algebra.rank()).all(|i| {
            let diff = f.value(i) - &self.algebra.generator(i);
            let ok = diff.terms().all(|(w, _)| self.word_weight(w) > weights[i]);
            ok
        })
    }
}

/// `φ` strictly raises weight and `d + φ` squares to zero.
pub fn filtered_perturbation_check(model: &BigradedModel, phi: &Derivation) -> Result<bool> {
    model.algebra.check(phi.algebra())?;
    if phi.degree() != -1 {
        return Err(Error::WrongDegree {
            expected: -1,
            found: phi.degree(),
        });
    }
    if !model.raises_weight(phi) {
        return Ok(false);
    }
    is_differential(&model.differential.try_add(phi)?)
}

/// `exp` on weight-raising degree-0 derivations.
pub fn weight_exp(model: &BigradedModel, theta: &Derivation) -> Result<Automorphism> {
    if theta.degree() != 0 || !model.raises_weight(theta) {
        return Err(Error::Hypothesis("derivation does not raise weight".into()));
    }
    exp(theta)
}

/// `log` on automorphisms with `f - id` weight-raising.
pub fn weight_log(model: &BigradedModel, f: &Automorphism) -> Result<Derivation> {
    if !model.automorphism_raises_weight(f) {
        return Err(Error::Hypothesis(
            "automorphism minus identity does not raise weight".into(),
        ));
    }
    log_unchecked(f)
}
