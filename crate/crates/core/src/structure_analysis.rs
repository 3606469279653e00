//! Structural verdicts for subalgebras and finite-dimensional modules.
//!
//! Lower central series, quasi-nilpotency and Whittaker pair checks work on
//! a presentation and a named subalgebra. Weight decompositions and socles
//! work on explicit action matrices.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact_linear::{kernel_basis, q, to_dense, to_sparse, Scalar, SparseMatrix, SparseVec, Subspace};
use crate::lie_presentations::{Combo, LiePresentation, OverflowMode};
use crate::pbw_engine::{Pbw, StandardMonomial, UEAElement};

/// Default series depth and ad-nilpotency budget.
pub const DEFAULT_DEPTH: usize = 16;

/// Finite-dimensional module given by one matrix per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinDimModule {
    dim: usize,
    labels: Vec<String>,
    actions: Vec<SparseMatrix>,
}

impl FinDimModule {
    /// Module over the Lie algebra generated by the given matrices.
    pub fn new(dim: usize, labels: Vec<String>, actions: Vec<SparseMatrix>) -> Result<Self> {
        if labels.len() != actions.len() {
            return Err(Error::usage("one label per action matrix"));
        }
        for (l, a) in labels.iter().zip(&actions) {
            if a.rows() != dim || a.cols() != dim {
                return Err(Error::usage(format!("action of {l} is not {dim}x{dim}")));
            }
        }
        Ok(FinDimModule { dim, labels, actions })
    }

    /// Module over the subalgebra spanned by `gens` of `p`. The identity
    /// `rho([x,y]) = rho(x) rho(y) - rho(y) rho(x)` is checked for every
    /// generator pair whose bracket stays in the window.
    pub fn for_presentation(p: &LiePresentation, gens: &[usize], dim: usize, actions: Vec<SparseMatrix>) -> Result<Self> {
        let labels = gens.iter().map(|&g| p.tag(g).to_string()).collect();
        let m = Self::new(dim, labels, actions)?;
        let slot: BTreeMap<usize, usize> = gens.iter().enumerate().map(|(k, &g)| (g, k)).collect();
        for (a, &x) in gens.iter().enumerate() {
            for (b, &y) in gens.iter().enumerate().skip(a + 1) {
                let br = p.bracket_marked(x, y);
                if br.overflow {
                    continue;
                }
                let mut lhs = SparseMatrix::zeros(dim, dim);
                for (k, c) in &br.value {
                    let s = slot.get(k).ok_or_else(|| Error::usage(format!("[{}, {}] leaves the generating set", p.tag(x), p.tag(y))))?;
                    lhs = lhs.add(&m.actions[*s].scale(c))?;
                }
                let rhs = m.actions[a].mul(&m.actions[b])?.sub(&m.actions[b].mul(&m.actions[a])?)?;
                if lhs != rhs {
                    return Err(Error::invariant(format!("action does not respect [{}, {}]", p.tag(x), p.tag(y))));
                }
            }
        }
        Ok(m)
    }

    /// The zero module of the given dimension.
    pub fn zero_action(dim: usize, labels: Vec<String>) -> Self {
        let actions = labels.iter().map(|_| SparseMatrix::zeros(dim, dim)).collect();
        FinDimModule { dim, labels, actions }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn actions(&self) -> &[SparseMatrix] {
        &self.actions
    }

    pub fn action(&self, label: &str) -> Option<&SparseMatrix> {
        self.labels.iter().position(|l| l == label).map(|k| &self.actions[k])
    }

    /// Tensor product with `x` acting as `x (x) 1 + 1 (x) x`.
    pub fn tensor(&self, other: &FinDimModule) -> Result<FinDimModule> {
        if self.labels != other.labels {
            return Err(Error::usage("tensor factors act by different generators"));
        }
        let n = self.dim * other.dim;
        let mut actions = Vec::new();
        for (a, b) in self.actions.iter().zip(&other.actions) {
            let mut t = SparseMatrix::zeros(n, n);
            for (&(i, j), x) in a.entries() {
                for k in 0..other.dim {
                    t.add_to(i * other.dim + k, j * other.dim + k, x);
                }
            }
            for (&(i, j), x) in b.entries() {
                for k in 0..self.dim {
                    t.add_to(k * other.dim + i, k * other.dim + j, x);
                }
            }
            actions.push(t);
        }
        FinDimModule::new(n, self.labels.clone(), actions)
    }
}

/// A weight with its generalized weight space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightBlock {
    /// Value on each generator, aligned with the module labels.
    pub weight: Vec<Scalar>,
    pub basis: Vec<Vec<Scalar>>,
}

impl WeightBlock {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn commutator(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    a.mul(b).unwrap().sub(&b.mul(a).unwrap()).unwrap()
}

fn flatten(m: &SparseMatrix) -> SparseVec {
    m.entries().map(|(&(i, j), x)| (i * m.cols() + j, x.clone())).collect()
}

fn unflatten(v: &SparseVec, n: usize) -> SparseMatrix {
    let mut m = SparseMatrix::zeros(n, n);
    for (&k, x) in v {
        m.set(k / n, k % n, x.clone());
    }
    m
}

/// Whether the Lie algebra generated by the matrices is nilpotent with
/// class at most `budget`.
pub fn image_is_nilpotent(actions: &[SparseMatrix], n: usize, budget: usize) -> bool {
    let mut span = Subspace::new(n * n);
    let mut frontier: Vec<SparseMatrix> = Vec::new();
    for a in actions {
        if span.insert(&flatten(a)) {
            frontier.push(a.clone());
        }
    }
    while let Some(a) = frontier.pop() {
        for b in span.basis() {
            let c = commutator(&a, &unflatten(&b, n));
            if span.insert(&flatten(&c)) {
                frontier.push(c);
            }
        }
    }
    let base: Vec<SparseMatrix> = span.basis().iter().map(|v| unflatten(v, n)).collect();
    let mut level = base.clone();
    for _ in 0..=budget {
        if level.is_empty() {
            return true;
        }
        let mut next = Subspace::new(n * n);
        for x in &level {
            for y in &base {
                next.insert(&flatten(&commutator(x, y)));
            }
        }
        level = next.basis().iter().map(|v| unflatten(v, n)).collect();
    }
    level.is_empty()
}

fn charpoly(a: &[Vec<Scalar>]) -> Vec<Scalar> {
    // Faddeev-LeVerrier; returns c_0..c_n of det(tI - A), monic.
    let n = a.len();
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut m = vec![vec![Scalar::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![Scalar::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Scalar::zero();
                for l in 0..n {
                    if !a[i][l].is_zero() && !m[l][j].is_zero() {
                        s += &a[i][l] * &m[l][j];
                    }
                }
                next[i][j] = s;
            }
            next[i][i] += &coeffs[n - k + 1];
        }
        m = next;
        let mut tr = Scalar::zero();
        for i in 0..n {
            for l in 0..n {
                if !a[i][l].is_zero() && !m[l][i].is_zero() {
                    tr += &a[i][l] * &m[l][i];
                }
            }
        }
        coeffs[n - k] = -tr / Scalar::from_integer(BigInt::from(k));
    }
    coeffs
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n.abs().to_u64().ok_or_else(|| Error::usage("characteristic polynomial coefficients too large"))?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
        if d > 10_000_000 {
            return Err(Error::usage("characteristic polynomial coefficients too large"));
        }
    }
    Ok(out)
}

fn eval(poly: &[Scalar], x: &Scalar) -> Scalar {
    poly.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + c)
}

fn deflate(poly: &[Scalar], r: &Scalar) -> Vec<Scalar> {
    let n = poly.len() - 1;
    let mut out = vec![Scalar::zero(); n];
    let mut carry = Scalar::zero();
    for k in (0..n).rev() {
        carry = &poly[k + 1] + carry * r;
        out[k] = carry.clone();
    }
    out
}

/// Rational roots with multiplicities, sorted.
fn rational_roots(poly: &[Scalar]) -> Result<Vec<(Scalar, usize)>> {
    let mut p = poly.to_vec();
    let mut out: Vec<(Scalar, usize)> = Vec::new();
    let mut zero_mult = 0;
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        out.push((Scalar::zero(), zero_mult));
    }
    if p.len() > 1 {
        let lcm = p.iter().fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
        let ints: Vec<BigInt> = p.iter().map(|c| (c * Scalar::from_integer(lcm.clone())).to_integer()).collect();
        let num = divisors(&ints[0])?;
        let den = divisors(ints.last().unwrap())?;
        let mut cands: Vec<Scalar> = Vec::new();
        for a in &num {
            for b in &den {
                for s in [1, -1] {
                    let r = Scalar::new(a * s, b.clone());
                    if !cands.contains(&r) {
                        cands.push(r);
                    }
                }
            }
        }
        for r in cands {
            let mut m = 0;
            while p.len() > 1 && eval(&p, &r).is_zero() {
                p = deflate(&p, &r);
                m += 1;
            }
            if m > 0 {
                out.push((r, m));
            }
        }
    }
    out.sort();
    Ok(out)
}

fn restrict(a: &SparseMatrix, basis: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>> {
    // coordinates of A b_j in the basis; the span must be invariant
    let n = a.rows();
    let k = basis.len();
    let mut b = SparseMatrix::zeros(n, k);
    for (j, v) in basis.iter().enumerate() {
        for (i, x) in v.iter().enumerate() {
            b.set(i, j, x.clone());
        }
    }
    let mut out = vec![vec![Scalar::zero(); k]; k];
    for (j, v) in basis.iter().enumerate() {
        let av = a.mul_vec(v)?;
        let c = crate::exact_linear::solve(&b, &av)?.ok_or_else(|| Error::invariant("weight space is not invariant"))?;
        for i in 0..k {
            out[i][j] = c[i].clone();
        }
    }
    Ok(out)
}

/// Splits the module into generalized weight spaces `M_lambda`.
///
/// The image of the acting algebra must be nilpotent of class at most
/// `budget`, and every weight must be rational.
pub fn generalized_weight_decomposition_with_budget(m: &FinDimModule, budget: usize) -> Result<Vec<WeightBlock>> {
    let n = m.dim;
    if n == 0 {
        return Ok(Vec::new());
    }
    if !image_is_nilpotent(&m.actions, n, budget) {
        return Err(Error::usage("acting algebra is not nilpotent on the module within the depth budget"));
    }
    let identity: Vec<Vec<Scalar>> = (0..n).map(|i| to_dense(&SparseVec::from([(i, q(1))]), n)).collect();
    let mut blocks = vec![WeightBlock { weight: Vec::new(), basis: identity }];
    for a in &m.actions {
        let mut next = Vec::new();
        for block in blocks {
            let k = block.basis.len();
            let r = restrict(a, &block.basis)?;
            let roots = rational_roots(&charpoly(&r))?;
            if roots.iter().map(|x| x.1).sum::<usize>() != k {
                return Err(Error::usage("the module has non-rational weights"));
            }
            for (root, mult) in roots {
                let mut shifted = SparseMatrix::from_dense(k, &r)?.shift(&root);
                let base = shifted.clone();
                for _ in 1..k {
                    shifted = shifted.mul(&base)?;
                }
                let ker = kernel_basis(&shifted);
                if ker.len() != mult {
                    return Err(Error::invariant("generalized eigenspace has the wrong dimension"));
                }
                let basis: Vec<Vec<Scalar>> = ker
                    .iter()
                    .map(|c| {
                        let mut v = vec![Scalar::zero(); n];
                        for (coef, b) in c.iter().zip(&block.basis) {
                            if !coef.is_zero() {
                                for (vi, bi) in v.iter_mut().zip(b) {
                                    *vi += coef * bi;
                                }
                            }
                        }
                        v
                    })
                    .collect();
                let mut weight = block.weight.clone();
                weight.push(root);
                next.push(WeightBlock { weight, basis });
            }
        }
        blocks = next;
    }
    blocks.sort_by(|x, y| x.weight.cmp(&y.weight));
    Ok(blocks)
}

/// [`generalized_weight_decomposition_with_budget`] with the default budget.
pub fn generalized_weight_decomposition(m: &FinDimModule) -> Result<Vec<WeightBlock>> {
    generalized_weight_decomposition_with_budget(m, DEFAULT_DEPTH)
}

/// Action matrices of each generator restricted to each block, in block order.
pub fn block_actions(m: &FinDimModule, blocks: &[WeightBlock]) -> Result<Vec<Vec<Vec<Vec<Scalar>>>>> {
    blocks.iter().map(|b| m.actions.iter().map(|a| restrict(a, &b.basis)).collect()).collect()
}

/// Reassembles the action matrices from the blocks: `P diag(A_i) P^-1`.
pub fn recombine(m: &FinDimModule, blocks: &[WeightBlock]) -> Result<Vec<SparseMatrix>> {
    let n = m.dim;
    let cols: Vec<&Vec<Scalar>> = blocks.iter().flat_map(|b| b.basis.iter()).collect();
    if cols.len() != n {
        return Err(Error::invariant("blocks do not fill the module"));
    }
    let mut pm = SparseMatrix::zeros(n, n);
    for (j, v) in cols.iter().enumerate() {
        for (i, x) in v.iter().enumerate() {
            pm.set(i, j, x.clone());
        }
    }
    let inv = invert(&pm)?;
    let per_block = block_actions(m, blocks)?;
    let mut out = Vec::new();
    for g in 0..m.actions.len() {
        let mut d = SparseMatrix::zeros(n, n);
        let mut off = 0;
        for (b, acts) in blocks.iter().zip(&per_block) {
            let blk = SparseMatrix::from_dense(b.dim(), &acts[g])?;
            d.put_block(off, off, &blk);
            off += b.dim();
        }
        out.push(pm.mul(&d)?.mul(&inv)?);
    }
    Ok(out)
}

fn invert(m: &SparseMatrix) -> Result<SparseMatrix> {
    let n = m.rows();
    let mut out = SparseMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = vec![Scalar::zero(); n];
        e[j] = Scalar::one();
        let x = crate::exact_linear::solve(m, &e)?.ok_or_else(|| Error::invariant("singular change of basis"))?;
        for (i, v) in x.into_iter().enumerate() {
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// Joint eigenvectors: for each weight, a basis of `ker(rho(x) - lambda(x))` over all generators.
pub fn socle_vectors(m: &FinDimModule) -> Result<Vec<(Vec<Scalar>, Vec<Scalar>)>> {
    let blocks = generalized_weight_decomposition(m)?;
    let n = m.dim;
    let mut out = Vec::new();
    for b in blocks {
        let mut stacked = SparseMatrix::zeros(n * m.actions.len(), n);
        for (g, a) in m.actions.iter().enumerate() {
            stacked.put_block(g * n, 0, &a.shift(&b.weight[g]));
        }
        for v in kernel_basis(&stacked) {
            out.push((b.weight.clone(), v));
        }
    }
    Ok(out)
}

/// Chain `n_0 ⊇ n_1 ⊇ ...` of subspaces of the ambient presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralSeries {
    pub chain: Vec<Subspace>,
    /// Whether some bracket computing level `i` overflowed the window.
    pub overflow: Vec<bool>,
}

impl CentralSeries {
    /// Tags spanning level `i` when it is a coordinate subspace.
    pub fn level_tags(&self, p: &LiePresentation, i: usize) -> Option<Vec<String>> {
        let s = &self.chain[i];
        let mut tags = Vec::new();
        for v in s.basis() {
            if v.len() != 1 {
                return None;
            }
            tags.push(p.tag(*v.keys().next().unwrap()).to_string());
        }
        Some(tags)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.chain.iter().map(Subspace::dim).collect()
    }
}

fn unit(i: usize) -> Combo {
    Combo::from([(i, q(1))])
}

/// Checks that `part` is closed under the bracket inside the window.
pub fn check_subalgebra(p: &LiePresentation, part: &[usize]) -> Result<()> {
    for &x in part {
        for &y in part {
            let br = p.bracket_marked(x, y);
            if let Some(k) = br.value.keys().find(|k| !part.contains(k)) {
                return Err(Error::usage(format!(
                    "[{}, {}] has a component along {} outside the subalgebra",
                    p.tag(x),
                    p.tag(y),
                    p.tag(*k)
                )));
            }
        }
    }
    Ok(())
}

/// `n_0 = n`, `n_i = [n_{i-1}, n]` for `i <= depth`, computed in the window.
pub fn lower_central_series(p: &LiePresentation, part: &[usize], depth: usize) -> Result<CentralSeries> {
    check_subalgebra(p, part)?;
    let n0 = Subspace::spanned_by(p.dim(), part.iter().map(|&i| unit(i)).collect::<Vec<_>>().iter());
    let mut chain = vec![n0];
    let mut overflow = vec![false];
    for _ in 0..depth {
        let prev = chain.last().unwrap();
        let mut next = Subspace::new(p.dim());
        let mut of = false;
        for v in prev.basis() {
            for &x in part {
                let br = p.bracket_combo(&v, &unit(x));
                of |= br.overflow;
                next.insert(&br.value);
            }
        }
        chain.push(next);
        overflow.push(of);
    }
    Ok(CentralSeries { chain, overflow })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuasiNilpotency {
    /// The series reaches zero inside the window.
    YesWithinWindow,
    /// The series stabilizes at a nonzero subspace without overflow.
    No,
    Inconclusive,
}

pub fn quasi_nilpotent_check(p: &LiePresentation, part: &[usize], depth: usize) -> Result<QuasiNilpotency> {
    let s = lower_central_series(p, part, depth)?;
    for i in 0..s.chain.len() {
        if s.chain[i].dim() == 0 {
            return Ok(QuasiNilpotency::YesWithinWindow);
        }
        if i > 0 && !s.overflow[i] && s.chain[i] == s.chain[i - 1] {
            return Ok(QuasiNilpotency::No);
        }
    }
    Ok(QuasiNilpotency::Inconclusive)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairVerdict {
    Pair,
    NotPair,
    Inconclusive,
}

/// Verdict with the evidence it rests on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairReport {
    pub verdict: PairVerdict,
    pub quasi_nilpotent: QuasiNilpotency,
    /// Generators whose action on `g/n` was not shown locally nilpotent.
    pub failing: Vec<String>,
    /// Whether the verdict relied on overflow beyond the window.
    pub used_overflow: bool,
}

/// Matrices of `ad x` on `g/n` in the complement basis, with per-column overflow flags.
pub fn quotient_ad_matrices(p: &LiePresentation, part: &[usize]) -> (Vec<usize>, Vec<(SparseMatrix, Vec<bool>)>) {
    let comp: Vec<usize> = (0..p.dim()).filter(|i| !part.contains(i)).collect();
    let slot: BTreeMap<usize, usize> = comp.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut out = Vec::new();
    for &x in part {
        let mut m = SparseMatrix::zeros(comp.len(), comp.len());
        let mut flags = vec![false; comp.len()];
        for (j, &w) in comp.iter().enumerate() {
            let br = p.bracket_marked(x, w);
            flags[j] = br.overflow;
            for (k, c) in br.value {
                if let Some(&i) = slot.get(&k) {
                    m.set(i, j, c);
                }
            }
        }
        out.push((m, flags));
    }
    (comp, out)
}

fn one_sided(p: &LiePresentation, part: &[usize]) -> bool {
    let degs: Vec<Option<i64>> = part.iter().map(|&i| p.degree(i)).collect();
    degs.iter().all(|d| d.is_some_and(|d| d > 0)) || degs.iter().all(|d| d.is_some_and(|d| d < 0))
}

/// Quasi-nilpotency of `n` plus local nilpotency of `ad n` on `g/n`.
pub fn whittaker_pair_check(p: &LiePresentation, part: &[usize], depth: usize) -> Result<PairReport> {
    let qn = quasi_nilpotent_check(p, part, depth)?;
    let (comp, mats) = quotient_ad_matrices(p, part);
    let sided = one_sided(p, part);
    let mut failing = Vec::new();
    let mut definite_failure = false;
    let mut undecided = false;
    let mut used_overflow = false;
    for (&x, (m, flags)) in part.iter().zip(&mats) {
        let any_overflow = flags.iter().any(|&f| f);
        if !any_overflow {
            let mut power = m.clone();
            for _ in 1..comp.len().max(1) {
                power = power.mul(m)?;
            }
            if !power.is_zero() {
                failing.push(p.tag(x).to_string());
                definite_failure = true;
            }
            continue;
        }
        for j in 0..comp.len() {
            let mut v = SparseVec::from([(j, q(1))]);
            let mut touched = false;
            let mut reached = false;
            for _ in 0..=depth {
                if v.is_empty() {
                    reached = true;
                    break;
                }
                touched |= v.keys().any(|&k| flags[k]);
                v = to_sparse(&m.mul_vec(&to_dense(&v, comp.len()))?);
            }
            reached |= v.is_empty();
            if !reached || (touched && !sided) {
                failing.push(format!("{} on {}", p.tag(x), p.tag(comp[j])));
                undecided = true;
            } else if touched {
                used_overflow = true;
            }
        }
    }
    let verdict = if qn == QuasiNilpotency::No || definite_failure {
        PairVerdict::NotPair
    } else if qn == QuasiNilpotency::Inconclusive || undecided {
        PairVerdict::Inconclusive
    } else {
        PairVerdict::Pair
    };
    Ok(PairReport { verdict, quasi_nilpotent: qn, failing, used_overflow })
}

/// The adjoint `n`-module `g/n` on the complement basis (in-window parts).
pub fn quotient_module(p: &LiePresentation, part: &[usize]) -> Result<FinDimModule> {
    let (comp, mats) = quotient_ad_matrices(p, part);
    let labels = part.iter().map(|&x| p.tag(x).to_string()).collect();
    FinDimModule::new(comp.len(), labels, mats.into_iter().map(|(m, _)| m).collect())
}

/// One generating step of the block relation between characters of `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimReport {
    pub related: bool,
    /// Weights of `g/n`, i.e. the admissible differences.
    pub shifts: Vec<Vec<Scalar>>,
}

/// Decides whether `lam ~ lam2` in one step: equal, or differing by a weight of `g/n`.
pub fn sim_relation_check(p: &LiePresentation, part: &[usize], lam: &[Scalar], lam2: &[Scalar], depth: usize) -> Result<SimReport> {
    if lam.len() != part.len() || lam2.len() != part.len() {
        return Err(Error::usage("characters must give one value per subalgebra generator"));
    }
    let module = quotient_module(p, part)?;
    let blocks = generalized_weight_decomposition_with_budget(&module, depth)?;
    let shifts: Vec<Vec<Scalar>> = blocks.into_iter().map(|b| b.weight).collect();
    let diff: Vec<Scalar> = lam2.iter().zip(lam).map(|(a, b)| a - b).collect();
    let neg: Vec<Scalar> = diff.iter().map(|x| -x.clone()).collect();
    let related = diff.iter().all(Zero::is_zero) || shifts.contains(&diff) || shifts.contains(&neg);
    Ok(SimReport { related, shifts })
}

/// Span of iterated adjoint actions on `u`, modulo the left ideal generated by `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitReport {
    pub dim: usize,
    pub saturated: bool,
    pub overflow: bool,
}

fn complement_class(engine: &Pbw, u: &UEAElement) -> UEAElement {
    let mut out = UEAElement::zero();
    for (c, b, a) in engine.split_form(u) {
        if a.is_unit() {
            out.add_term(b, c);
        }
    }
    out
}

pub fn adjoint_local_finiteness_check(p: &LiePresentation, part: &[usize], u: &UEAElement, budget: usize) -> Result<OrbitReport> {
    let engine = Pbw::with_split(p, part);
    let mut index: BTreeMap<StandardMonomial, usize> = BTreeMap::new();
    let coords = |e: &UEAElement, index: &mut BTreeMap<StandardMonomial, usize>| -> SparseVec {
        e.terms()
            .iter()
            .map(|(m, c)| {
                let n = index.len();
                (*index.entry(m.clone()).or_insert(n), c.clone())
            })
            .collect()
    };
    let mut span = Subspace::new(usize::MAX);
    let start = complement_class(&engine, u);
    let mut frontier = Vec::new();
    let mut overflow = false;
    if span.insert(&coords(&start, &mut index)) {
        frontier.push(start);
    } else if u.is_zero() {
        return Ok(OrbitReport { dim: 0, saturated: true, overflow });
    }
    for _ in 0..budget {
        let mut next = Vec::new();
        for v in &frontier {
            for &x in part {
                let (xv, o1) = engine.multiply_marked(&engine.generator(x), v)?;
                let (vx, o2) = engine.multiply_marked(v, &engine.generator(x))?;
                overflow |= o1 || o2;
                let w = complement_class(&engine, &xv.sub(&vx));
                if span.insert(&coords(&w, &mut index)) {
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            return Ok(OrbitReport { dim: span.dim().max(1), saturated: true, overflow });
        }
        frontier = next;
    }
    Ok(OrbitReport { dim: span.dim().max(1), saturated: false, overflow })
}

/// Truncation of `Ind_n^g N` to complement degree at most `depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedTruncation {
    /// Pairs (complement monomial, index into the basis of N).
    pub basis: Vec<(StandardMonomial, usize)>,
    /// Action of each generator of `n`, in the order of N's labels.
    pub module: FinDimModule,
    /// Dimension of `U(n) v` for each basis vector `v`.
    pub orbit_dims: Vec<usize>,
}

fn complement_monomials(engine: &Pbw, max_degree: u32) -> Vec<StandardMonomial> {
    let split = engine.order().split_point();
    let mut out = vec![StandardMonomial::unit()];
    let mut layer = vec![Vec::<(usize, u32)>::new()];
    for _ in 0..max_degree {
        let mut next = Vec::new();
        for f in &layer {
            let start = f.last().map_or(0, |x| x.0);
            for pos in start..split {
                let mut g = f.clone();
                match g.last_mut() {
                    Some(last) if last.0 == pos => last.1 += 1,
                    _ => g.push((pos, 1)),
                }
                next.push(g);
            }
        }
        for g in &next {
            out.push(StandardMonomial::from_factors(g.clone()).unwrap());
        }
        layer = next;
    }
    out
}

/// Complement monomials of degree at most `d` in the split order of `engine`.
pub fn complement_basis(engine: &Pbw, d: u32) -> Vec<StandardMonomial> {
    complement_monomials(engine, d)
}

pub fn induced_module_truncation(p: &LiePresentation, part: &[usize], n_mod: &FinDimModule, depth: u32) -> Result<InducedTruncation> {
    check_subalgebra(p, part)?;
    let tags: Vec<String> = part.iter().map(|&x| p.tag(x).to_string()).collect();
    if n_mod.labels() != tags.as_slice() {
        return Err(Error::usage("module must act by the subalgebra generators in order"));
    }
    let engine = Pbw::with_split(p, part);
    let monos = complement_monomials(&engine, depth);
    let nd = n_mod.dim();
    let basis: Vec<(StandardMonomial, usize)> = monos.iter().flat_map(|m| (0..nd).map(move |i| (m.clone(), i))).collect();
    let slot: BTreeMap<(StandardMonomial, usize), usize> = basis.iter().cloned().enumerate().map(|(k, b)| (b, k)).collect();
    let dim = basis.len();
    let mut actions = Vec::new();
    for &x in part {
        let mut a = SparseMatrix::zeros(dim, dim);
        for (col, (m, i)) in basis.iter().enumerate() {
            let prod = engine.multiply(&engine.generator(x), &UEAElement::monomial(m.clone()))?;
            for (c, b, nmono) in engine.split_form(&prod) {
                // apply the n-monomial to e_i, rightmost factor first
                let mut v = to_dense(&SparseVec::from([(*i, q(1))]), nd);
                for &(pos, e) in nmono.factors().iter().rev() {
                    let sym = engine.order().symbol_at(pos);
                    let k = part.iter().position(|&s| s == sym).unwrap();
                    for _ in 0..e {
                        v = n_mod.actions()[k].mul_vec(&v)?;
                    }
                }
                for (j, coef) in v.iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    let row =
                        *slot.get(&(b.clone(), j)).ok_or_else(|| Error::invariant("subalgebra action raised the complement degree"))?;
                    a.add_to(row, col, &(&c * coef));
                }
            }
        }
        actions.push(a);
    }
    let module = FinDimModule::new(dim, tags, actions)?;
    let orbit_dims = (0..dim).map(|k| orbit_dim(&module, k)).collect();
    Ok(InducedTruncation { basis, module, orbit_dims })
}

/// Dimension of the cyclic submodule generated by a basis vector.
pub fn orbit_dim(m: &FinDimModule, k: usize) -> usize {
    let mut span = Subspace::new(m.dim());
    let mut frontier = vec![to_dense(&SparseVec::from([(k, q(1))]), m.dim())];
    span.insert(&to_sparse(&frontier[0]));
    while let Some(v) = frontier.pop() {
        for a in m.actions() {
            let w = a.mul_vec(&v).unwrap();
            if span.insert(&to_sparse(&w)) {
                frontier.push(w);
            }
        }
    }
    span.dim()
}

/// Mark-mode copy of a presentation, so analyses can inspect overflow.
pub fn marked(p: &LiePresentation) -> LiePresentation {
    p.with_mode(OverflowMode::Mark)
}
