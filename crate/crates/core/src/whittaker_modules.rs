//! Whittaker modules and highest-weight ladders.
//!
//! Induced modules `U(g) (x)_{U(s)} C_chi` are realized on complement
//! monomials with the action computed by straightening. Highest-weight
//! modules are realized on lowering monomials, grouped by depth.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_linear::{kernel_basis, q, rank, Scalar, SparseMatrix};
use crate::lie_presentations::{catalog, CatalogParams, LiePresentation, OverflowMode};
use crate::pbw_engine::{MonomialOrder, Pbw, StandardMonomial, UEAElement};
use crate::structure_analysis::{check_subalgebra, complement_basis, whittaker_pair_check, FinDimModule, PairVerdict, DEFAULT_DEPTH};

/// Values of a one-dimensional representation on the basis of a subalgebra.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Character {
    values: BTreeMap<usize, Scalar>,
}

impl Character {
    pub fn get(&self, sym: usize) -> Scalar {
        self.values.get(&sym).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn values(&self) -> &BTreeMap<usize, Scalar> {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(Zero::is_zero)
    }

    /// Value on a standard monomial of the subalgebra.
    pub fn on_monomial(&self, engine: &Pbw, m: &StandardMonomial) -> Scalar {
        let mut out = Scalar::one();
        for &(pos, e) in m.factors() {
            let v = self.get(engine.order().symbol_at(pos));
            for _ in 0..e {
                out *= &v;
            }
        }
        out
    }
}

/// Checks that `assignment` is a Lie algebra homomorphism on `part`.
/// Symbols of `part` missing from the assignment take the value 0.
pub fn character_validate(p: &LiePresentation, part: &[usize], assignment: &BTreeMap<usize, Scalar>) -> Result<Character> {
    check_subalgebra(p, part)?;
    if let Some(k) = assignment.keys().find(|k| !part.contains(k)) {
        return Err(Error::usage(format!("{} is not in the subalgebra", p.tag(*k))));
    }
    let values: BTreeMap<usize, Scalar> = assignment.iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (*k, v.clone())).collect();
    let chi = Character { values };
    for (a, &x) in part.iter().enumerate() {
        for &y in &part[a + 1..] {
            let br = p.bracket_marked(x, y);
            let v: Scalar = br.value.iter().map(|(k, c)| c * chi.get(*k)).sum();
            if !v.is_zero() {
                return Err(Error::usage(format!("character is nonzero on [{}, {}] = {}", p.tag(x), p.tag(y), p.format_combo(&br.value))));
            }
        }
    }
    Ok(chi)
}

/// Character from `(tag, value)` pairs.
pub fn character_from_tags(p: &LiePresentation, part: &[usize], pairs: &[(&str, Scalar)]) -> Result<Character> {
    let mut a = BTreeMap::new();
    for (t, v) in pairs {
        a.insert(p.lookup(t)?, v.clone());
    }
    character_validate(p, part, &a)
}

/// Solution space of the Whittaker equations on a finite slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WhittakerSolveResult {
    pub depth: usize,
    pub dim: usize,
    /// Components of one solution, grouped by depth (or degree).
    pub representative: Vec<Vec<Scalar>>,
    /// Equations dropped because they involve components beyond `depth`.
    pub dropped_equations: usize,
}

/// `U(g) (x)_{U(s)} C_chi` realized on complement monomials.
#[derive(Debug, Clone)]
pub struct InducedModule {
    part: Vec<usize>,
    chi: Character,
    engine: Pbw,
}

impl InducedModule {
    /// Induction from any subalgebra with a validated character.
    pub fn new(p: &LiePresentation, part: &[usize], chi: Character) -> Result<Self> {
        check_subalgebra(p, part)?;
        let engine = Pbw::with_split(p, part);
        Ok(InducedModule { part: part.to_vec(), chi, engine })
    }

    /// The standard Whittaker module `M_lambda`; `(g, n)` must be a Whittaker pair.
    pub fn standard(p: &LiePresentation, part: &[usize], chi: Character) -> Result<Self> {
        let report = whittaker_pair_check(&p.with_mode(OverflowMode::Mark), part, DEFAULT_DEPTH)?;
        if report.verdict != PairVerdict::Pair {
            return Err(Error::usage(format!("not a Whittaker pair ({:?})", report.verdict)));
        }
        Self::new(p, part, chi)
    }

    pub fn presentation(&self) -> &LiePresentation {
        self.engine.presentation()
    }

    pub fn part(&self) -> &[usize] {
        &self.part
    }

    pub fn character(&self) -> &Character {
        &self.chi
    }

    pub fn engine(&self) -> &Pbw {
        &self.engine
    }

    /// The class of `u` applied to the generator.
    pub fn class_of(&self, u: &UEAElement) -> UEAElement {
        let mut out = UEAElement::zero();
        for (c, b, a) in self.engine.split_form(u) {
            let v = self.chi.on_monomial(&self.engine, &a);
            if !v.is_zero() {
                out.add_term(b, c * v);
            }
        }
        out
    }

    /// `u . v` for a module element `v` (a combination of complement monomials).
    pub fn act_element(&self, u: &UEAElement, v: &UEAElement) -> Result<UEAElement> {
        Ok(self.class_of(&self.engine.multiply(u, v)?))
    }

    pub fn act(&self, sym: usize, v: &UEAElement) -> Result<UEAElement> {
        self.act_element(&self.engine.generator(sym), v)
    }

    /// Complement monomials of degree at most `d`, by degree.
    pub fn basis(&self, d: u32) -> Vec<StandardMonomial> {
        let mut b = complement_basis(&self.engine, d);
        b.sort_by_key(|m| (m.degree(), m.clone()));
        b
    }

    /// Action of the subalgebra generators on the degree-`<= d` slice.
    pub fn truncation(&self, d: u32) -> Result<(Vec<StandardMonomial>, FinDimModule)> {
        let basis = self.basis(d);
        let slot: BTreeMap<&StandardMonomial, usize> = basis.iter().enumerate().map(|(k, m)| (m, k)).collect();
        let mut actions = Vec::new();
        for &x in &self.part {
            let mut a = SparseMatrix::zeros(basis.len(), basis.len());
            for (j, m) in basis.iter().enumerate() {
                let v = self.act(x, &UEAElement::monomial(m.clone()))?;
                for (mm, c) in v.terms() {
                    let i = slot.get(mm).ok_or_else(|| Error::invariant("subalgebra action raised the degree"))?;
                    a.set(*i, j, c.clone());
                }
            }
            actions.push(a);
        }
        let labels = self.part.iter().map(|&x| self.presentation().tag(x).to_string()).collect();
        Ok((basis.clone(), FinDimModule::new(basis.len(), labels, actions)?))
    }

    /// Whittaker vectors of degree at most `d`.
    pub fn whittaker_vectors(&self, d: u32) -> Result<WhittakerSolveResult> {
        let (basis, m) = self.truncation(d)?;
        let lam: Vec<Scalar> = self.part.iter().map(|&x| self.chi.get(x)).collect();
        let ker = whittaker_vectors_fin(&m, &lam)?;
        let mut representative = vec![Vec::new(); d as usize + 1];
        if let Some(v) = ker.first() {
            let v = normalize(v);
            for (mono, c) in basis.iter().zip(v) {
                representative[mono.degree() as usize].push(c);
            }
        }
        Ok(WhittakerSolveResult { depth: d as usize, dim: ker.len(), representative, dropped_equations: 0 })
    }

    pub fn format(&self, v: &UEAElement) -> String {
        self.engine.format(v)
    }
}

fn normalize(v: &[Scalar]) -> Vec<Scalar> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let lead = lead.clone();
            v.iter().map(|x| x / &lead).collect()
        }
        None => v.to_vec(),
    }
}

/// Joint kernel of `rho(x) - lam(x)` over all generators.
pub fn whittaker_vectors_fin(m: &FinDimModule, lam: &[Scalar]) -> Result<Vec<Vec<Scalar>>> {
    if lam.len() != m.actions().len() {
        return Err(Error::usage("one character value per generator"));
    }
    let n = m.dim();
    let mut stacked = SparseMatrix::zeros(n * lam.len(), n);
    for (g, (a, l)) in m.actions().iter().zip(lam).enumerate() {
        stacked.put_block(g * n, 0, &a.shift(l));
    }
    Ok(kernel_basis(&stacked))
}

/// Monomials in the given positions with total weight at most `max`
/// (exactly `max` when `exact`). Every weight must be positive.
fn monomials(positions: &[usize], weights: &[u32], max: u32, exact: bool) -> Vec<StandardMonomial> {
    fn go(
        positions: &[usize],
        weights: &[u32],
        from: usize,
        left: u32,
        cur: &mut Vec<(usize, u32)>,
        exact: bool,
        out: &mut Vec<StandardMonomial>,
    ) {
        if !exact || left == 0 {
            out.push(StandardMonomial::from_factors(cur.clone()).unwrap());
        }
        for k in from..positions.len() {
            let w = weights[k];
            let mut e = 1;
            while w * e <= left {
                cur.push((positions[k], e));
                go(positions, weights, k + 1, left - w * e, cur, exact, out);
                cur.pop();
                e += 1;
            }
        }
    }
    let mut out = Vec::new();
    go(positions, weights, 0, max, &mut Vec::new(), exact, &mut out);
    out.sort();
    out
}

fn one_sided_degrees(p: &LiePresentation, syms: &[usize]) -> Option<Vec<u32>> {
    let degs: Vec<i64> = syms.iter().map(|&s| p.degree(s)).collect::<Option<_>>()?;
    if degs.iter().all(|&d| d > 0) || degs.iter().all(|&d| d < 0) {
        Some(degs.iter().map(|d| d.unsigned_abs() as u32).collect())
    } else {
        None
    }
}

/// Dimension of the functionals `f` on `U(n)` up to weight `d` with
/// `f(x u) = chi(x) f(u)` whenever `x u` has weight at most `d`.
///
/// The weight is the absolute grading degree when the degrees of `n` are
/// nonzero and of one sign, and the PBW length otherwise.
pub fn whittaker_vectors_in_dual(p: &LiePresentation, part: &[usize], chi: &Character, d: u32) -> Result<usize> {
    check_subalgebra(p, part)?;
    let graded = one_sided_degrees(p, part);
    let p = if graded.is_some() { p.with_mode(OverflowMode::Mark) } else { p.clone() };
    let engine = Pbw::with_split(&p, part);
    let split = engine.order().split_point();
    let positions: Vec<usize> = (split..engine.order().len()).collect();
    let weights: Vec<u32> = match &graded {
        Some(w) => positions.iter().map(|&pos| w[part.iter().position(|&s| s == engine.order().symbol_at(pos)).unwrap()]).collect(),
        None => vec![1; positions.len()],
    };
    let weight_of = |m: &StandardMonomial| -> u32 { m.factors().iter().map(|&(pos, e)| weights[pos - split] * e).sum() };
    let basis = monomials(&positions, &weights, d, false);
    let slot: BTreeMap<&StandardMonomial, usize> = basis.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let mut rows: Vec<BTreeMap<usize, Scalar>> = Vec::new();
    for (k, &pos) in positions.iter().enumerate() {
        let x = engine.order().symbol_at(pos);
        for u in &basis {
            if weight_of(u) + weights[k] > d {
                continue;
            }
            let (prod, _) = engine.multiply_marked(&engine.generator(x), &UEAElement::monomial(u.clone()))?;
            let mut row: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (m, c) in prod.terms() {
                let i = slot.get(m).ok_or_else(|| Error::invariant("product left the weight slice"))?;
                *row.entry(*i).or_insert_with(Scalar::zero) += c;
            }
            *row.entry(slot[u]).or_insert_with(Scalar::zero) -= chi.get(x);
            row.retain(|_, v| !v.is_zero());
            rows.push(row);
        }
    }
    let mut a = SparseMatrix::zeros(rows.len(), basis.len());
    for (i, r) in rows.into_iter().enumerate() {
        for (j, v) in r {
            a.set(i, j, v);
        }
    }
    Ok(basis.len() - rank(&a))
}

/// Which module a ladder computation works in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Verma,
    Simple,
}

/// A highest-weight module induced from `h + upper` with weight `mu`,
/// realized on monomials in `lower`.
#[derive(Debug, Clone)]
pub struct Triangular {
    lower: Vec<usize>,
    h: Vec<usize>,
    upper: Vec<usize>,
    mu: Vec<Scalar>,
    lower_w: Vec<u32>,
    upper_w: Vec<u32>,
    engine: Pbw,
}

fn truncated_side(p: &LiePresentation, sign: i64) -> Option<u32> {
    let (lo, hi) = p.window()?;
    for i in 0..p.dim() {
        for j in i + 1..p.dim() {
            if p.is_overflow(i, j) {
                let s = p.degree(i)? + p.degree(j)?;
                if sign < 0 && s < lo {
                    return Some(lo.unsigned_abs() as u32);
                }
                if sign > 0 && s > hi {
                    return Some(hi.unsigned_abs() as u32);
                }
            }
        }
    }
    None
}

impl Triangular {
    pub fn new(p: &LiePresentation, lower: &[usize], h: &[usize], upper: &[usize], mu: &[Scalar]) -> Result<Self> {
        if mu.len() != h.len() {
            return Err(Error::usage("weight must give one value per Cartan generator"));
        }
        let sort = |v: &[usize]| {
            let mut v = v.to_vec();
            v.sort_by(|&x, &y| (p.degree(x).map(i64::abs), p.tag(x)).cmp(&(p.degree(y).map(i64::abs), p.tag(y))));
            v
        };
        let (lower, upper) = (sort(lower), sort(upper));
        let lower_w = one_sided_degrees(p, &lower).ok_or_else(|| Error::usage("lowering part must have nonzero degrees of one sign"))?;
        let upper_w = one_sided_degrees(p, &upper).ok_or_else(|| Error::usage("raising part must have nonzero degrees of one sign"))?;
        let mut seq = lower.clone();
        seq.extend(h);
        seq.extend(&upper);
        let order = MonomialOrder::from_sequence(p, seq, lower.len())?;
        let engine = Pbw::new(&p.with_mode(OverflowMode::Reject), order);
        Ok(Triangular { lower, h: h.to_vec(), upper, mu: mu.to_vec(), lower_w, upper_w, engine })
    }

    fn parts(p: &LiePresentation) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>)> {
        let get = |n: &str| p.part(n).map(<[usize]>::to_vec).ok_or_else(|| Error::usage(format!("presentation has no part {n}")));
        Ok((get("n_-")?, get("h")?, get("n_+")?))
    }

    /// Verma-type module `M(mu)` from the parts `n_-`, `h`, `n_+`.
    pub fn highest_weight(p: &LiePresentation, mu: &[Scalar]) -> Result<Self> {
        let (lo, h, up) = Self::parts(p)?;
        Self::new(p, &lo, &h, &up, mu)
    }

    /// Lowest-weight module `M^-(mu)` with the parts swapped.
    pub fn lowest_weight(p: &LiePresentation, mu: &[Scalar]) -> Result<Self> {
        let (lo, h, up) = Self::parts(p)?;
        Self::new(p, &up, &h, &lo, mu)
    }

    pub fn presentation(&self) -> &LiePresentation {
        self.engine.presentation()
    }

    pub fn engine(&self) -> &Pbw {
        &self.engine
    }

    pub fn lower(&self) -> &[usize] {
        &self.lower
    }

    pub fn upper(&self) -> &[usize] {
        &self.upper
    }

    pub fn weight(&self) -> &[Scalar] {
        &self.mu
    }

    fn check_window(&self, syms: &[usize], d: u32) -> Result<()> {
        let p = self.presentation();
        let sign = p.degree(syms.first().copied().unwrap_or(0)).unwrap_or(0).signum();
        if syms.is_empty() || sign == 0 {
            return Ok(());
        }
        if let Some(b) = truncated_side(p, sign) {
            if b < d {
                return Err(Error::usage(format!("window reaches depth {b}, {d} requested")));
            }
        }
        Ok(())
    }

    /// Lowering monomials of depth exactly `k`.
    pub fn lowering_monomials(&self, k: u32) -> Vec<StandardMonomial> {
        let pos: Vec<usize> = (0..self.lower.len()).collect();
        monomials(&pos, &self.lower_w, k, true)
    }

    /// Raising monomials of depth exactly `k`.
    pub fn raising_monomials(&self, k: u32) -> Vec<StandardMonomial> {
        let off = self.lower.len() + self.h.len();
        let pos: Vec<usize> = (0..self.upper.len()).map(|i| i + off).collect();
        monomials(&pos, &self.upper_w, k, true)
    }

    pub fn depth(&self, m: &StandardMonomial) -> u32 {
        m.factors().iter().map(|&(pos, e)| self.lower_w[pos] * e).sum()
    }

    /// `u . (m v_mu)` as a combination of lowering monomials.
    pub fn apply(&self, u: &UEAElement, m: &StandardMonomial) -> Result<UEAElement> {
        let prod = self.engine.multiply(u, &UEAElement::monomial(m.clone()))?;
        let (nl, nh) = (self.lower.len(), self.h.len());
        let mut out = UEAElement::zero();
        'terms: for (mono, c) in prod.terms() {
            let mut coef = c.clone();
            let mut keep = Vec::new();
            for &(pos, e) in mono.factors() {
                if pos >= nl + nh {
                    continue 'terms;
                }
                if pos >= nl {
                    for _ in 0..e {
                        coef *= &self.mu[pos - nl];
                    }
                } else {
                    keep.push((pos, e));
                }
            }
            out.add_term(StandardMonomial::from_factors(keep)?, coef);
        }
        Ok(out)
    }

    /// Pairing matrix at depth `k`: raising monomials against lowering ones,
    /// entry = coefficient of the highest-weight vector.
    pub fn pairing(&self, k: u32) -> Result<SparseMatrix> {
        self.check_window(&self.upper, k)?;
        self.check_window(&self.lower, k)?;
        let rows = self.raising_monomials(k);
        let cols = self.lowering_monomials(k);
        let mut m = SparseMatrix::zeros(rows.len(), cols.len());
        for (i, r) in rows.iter().enumerate() {
            for (j, c) in cols.iter().enumerate() {
                let v = self.apply(&UEAElement::monomial(r.clone()), c)?;
                m.set(i, j, v.coefficient(&StandardMonomial::unit()));
            }
        }
        Ok(m)
    }

    /// `dim M(mu)` at depths `0..=d`.
    pub fn verma_dims(&self, d: u32) -> Result<Vec<usize>> {
        self.check_window(&self.lower, d)?;
        Ok((0..=d).map(|k| self.lowering_monomials(k).len()).collect())
    }

    /// `dim L(mu)` at depths `0..=d`, from pairing ranks.
    pub fn simple_dims(&self, d: u32) -> Result<Vec<usize>> {
        (0..=d).map(|k| Ok(rank(&self.pairing(k)?))).collect()
    }
}

/// Per-depth dimensions of the simple quotient of `M(mu)`.
pub fn simple_hw_quotient_dims(p: &LiePresentation, mu: &[Scalar], d: u32) -> Result<Vec<usize>> {
    Triangular::highest_weight(p, mu)?.simple_dims(d)
}

/// Per-depth dimensions of `M(mu)`.
pub fn verma_weight_dims(p: &LiePresentation, mu: &[Scalar], d: u32) -> Result<Vec<usize>> {
    Triangular::highest_weight(p, mu)?.verma_dims(d)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarReport {
    pub highest: Vec<usize>,
    pub lowest: Vec<usize>,
}

impl StarReport {
    pub fn equal(&self) -> bool {
        self.highest == self.lowest
    }
}

/// Compares `L^+(mu)` with the lowest-weight `L^-(-mu)` depth by depth.
pub fn star_duality_check(p: &LiePresentation, mu: &[Scalar], d: u32) -> Result<StarReport> {
    let neg: Vec<Scalar> = mu.iter().map(|x| -x.clone()).collect();
    Ok(StarReport {
        highest: Triangular::highest_weight(p, mu)?.simple_dims(d)?,
        lowest: Triangular::lowest_weight(p, &neg)?.simple_dims(d)?,
    })
}

/// Whittaker vectors in a depth-truncated completion, one solve per truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionResult {
    pub ladder: Ladder,
    /// Solution dimension at truncations `0..=d`.
    pub dims: Vec<usize>,
    /// Solutions at each truncation restrict to solutions at the previous one.
    pub nested: bool,
    pub result: WhittakerSolveResult,
}

struct CompletionSystem {
    offsets: Vec<usize>,
    sizes: Vec<usize>,
    /// `(lambda(x), delta, blocks[j] = x: M_{j+delta} -> M_j)` per raising generator.
    actions: Vec<(Scalar, u32, Vec<SparseMatrix>)>,
    pairings: Vec<SparseMatrix>,
}

impl CompletionSystem {
    fn equations(&self, t: usize, ladder: Ladder) -> (SparseMatrix, usize) {
        let unknowns = self.offsets[t] + self.sizes[t];
        let mut rows: Vec<SparseMatrix> = Vec::new();
        let mut dropped = 0;
        for (lam, delta, blocks) in &self.actions {
            let delta = *delta as usize;
            for (j, block) in blocks.iter().enumerate().take(t + 1) {
                if j + delta > t {
                    dropped += 1;
                    continue;
                }
                let mut a = SparseMatrix::zeros(self.sizes[j], unknowns);
                a.put_block(0, self.offsets[j + delta], block);
                let id = SparseMatrix::identity(self.sizes[j]).scale(&-lam.clone());
                let cur = a.clone();
                let mut sum = SparseMatrix::zeros(self.sizes[j], unknowns);
                sum.put_block(0, self.offsets[j], &id);
                let mut e = cur.add(&sum).unwrap();
                if ladder == Ladder::Simple {
                    e = self.pairings[j].mul(&e).unwrap();
                }
                rows.push(e);
            }
        }
        let total: usize = rows.iter().map(SparseMatrix::rows).sum();
        let mut m = SparseMatrix::zeros(total, unknowns);
        let mut r = 0;
        for b in rows {
            let h = b.rows();
            m.put_block(r, 0, &b);
            r += h;
        }
        (m, dropped)
    }

    fn radical(&self, t: usize) -> usize {
        (0..=t).map(|k| self.sizes[k] - rank(&self.pairings[k])).sum()
    }
}

/// Solves `(x - lambda(x)) v = 0` for every raising generator `x`, with
/// `v` a formal sum of components at depths `0..=t`, for each `t <= d`.
/// Equations involving depths beyond `t` are dropped.
pub fn completion_whittaker_solve(tri: &Triangular, lam: &Character, d: u32, ladder: Ladder) -> Result<CompletionResult> {
    let p = tri.presentation();
    let upper = tri.upper().to_vec();
    let mut values = BTreeMap::new();
    for (&k, v) in lam.values() {
        values.insert(k, v.clone());
    }
    character_validate(p, &upper, &values)?;
    let bases: Vec<Vec<StandardMonomial>> = (0..=d).map(|k| tri.lowering_monomials(k)).collect();
    tri.check_window(tri.lower(), d)?;
    let sizes: Vec<usize> = bases.iter().map(Vec::len).collect();
    let mut offsets = vec![0];
    for s in &sizes {
        offsets.push(offsets.last().unwrap() + s);
    }
    let mut actions = Vec::new();
    for (k, &x) in upper.iter().enumerate() {
        let delta = tri.upper_w[k];
        let gen = tri.engine().generator(x);
        let mut blocks = Vec::new();
        for j in 0..=d as usize {
            let src = j + delta as usize;
            if src > d as usize {
                break;
            }
            let slot: BTreeMap<&StandardMonomial, usize> = bases[j].iter().enumerate().map(|(i, m)| (m, i)).collect();
            let mut b = SparseMatrix::zeros(sizes[j], sizes[src]);
            for (c, m) in bases[src].iter().enumerate() {
                for (mm, v) in tri.apply(&gen, m)?.terms() {
                    let r = slot.get(mm).ok_or_else(|| Error::invariant("raising operator changed depth unexpectedly"))?;
                    b.set(*r, c, v.clone());
                }
            }
            blocks.push(b);
        }
        actions.push((lam.get(x), delta, blocks));
    }
    let pairings = match ladder {
        Ladder::Simple => (0..=d).map(|k| tri.pairing(k)).collect::<Result<Vec<_>>>()?,
        Ladder::Verma => sizes.iter().map(|&s| SparseMatrix::identity(s)).collect(),
    };
    let sys = CompletionSystem { offsets, sizes, actions, pairings };
    let mut dims = Vec::new();
    let mut nested = true;
    let mut last = None;
    for t in 0..=d as usize {
        let (eq, dropped) = sys.equations(t, ladder);
        let ker = kernel_basis(&eq);
        let radical = if ladder == Ladder::Simple { sys.radical(t) } else { 0 };
        dims.push(ker.len() - radical);
        if t > 0 {
            let (prev, _) = sys.equations(t - 1, ladder);
            let width = sys.offsets[t];
            for v in &ker {
                if !prev.mul_vec(&v[..width])?.iter().all(Zero::is_zero) {
                    nested = false;
                }
            }
        }
        last = Some((ker, dropped));
    }
    let (ker, dropped) = last.unwrap();
    let pick = ker.iter().find(|v| {
        (0..=d as usize).any(|k| {
            let comp = &v[sys.offsets[k]..sys.offsets[k] + sys.sizes[k]];
            !sys.pairings[k].mul_vec(comp).unwrap().iter().all(Zero::is_zero)
        })
    });
    let mut representative = Vec::new();
    if let Some(v) = pick {
        let mut comps: Vec<Vec<Scalar>> = (0..=d as usize)
            .map(|k| {
                let comp = &v[sys.offsets[k]..sys.offsets[k] + sys.sizes[k]];
                match ladder {
                    Ladder::Verma => comp.to_vec(),
                    Ladder::Simple => sys.pairings[k].mul_vec(comp).unwrap(),
                }
            })
            .collect();
        if let Some(lead) = comps.iter().flatten().find(|x| !x.is_zero()).cloned() {
            for c in comps.iter_mut().flatten() {
                *c /= &lead;
            }
        }
        representative = comps;
    }
    Ok(CompletionResult {
        ladder,
        dims,
        nested,
        result: WhittakerSolveResult { depth: d as usize, dim: 0, representative, dropped_equations: dropped },
    }
    .finish())
}

impl CompletionResult {
    fn finish(mut self) -> Self {
        self.result.dim = *self.dims.last().unwrap_or(&0);
        self
    }

    /// Dimension is 1 at every truncation.
    pub fn unique_at_every_truncation(&self) -> bool {
        self.dims.iter().all(|&x| x == 1)
    }
}

/// Evidence that a standard Whittaker module is simple within a degree window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicityCertificate {
    pub whittaker_dim: usize,
    pub unique_whittaker: bool,
    /// `v - x.v / lambda(x)` has lower degree for every basis monomial `v`.
    pub degree_reduction: bool,
    pub designated: Option<String>,
    pub witness: Option<String>,
    pub depth: u32,
}

impl SimplicityCertificate {
    pub fn passed(&self) -> bool {
        self.unique_whittaker && self.degree_reduction
    }
}

pub fn simplicity_certificate(m: &InducedModule, depth: u32, designated: Option<usize>) -> Result<SimplicityCertificate> {
    let w = m.whittaker_vectors(depth)?;
    let x = designated.or_else(|| m.part().iter().copied().find(|&x| !m.character().get(x).is_zero()));
    let p = m.presentation();
    let mut cert = SimplicityCertificate {
        whittaker_dim: w.dim,
        unique_whittaker: w.dim == 1,
        degree_reduction: false,
        designated: x.map(|x| p.tag(x).to_string()),
        witness: None,
        depth,
    };
    if !cert.unique_whittaker {
        cert.witness = Some(format!("{} independent Whittaker vectors in degree <= {depth}", w.dim));
    }
    let Some(x) = x else {
        cert.witness.get_or_insert_with(|| "character vanishes on every generator".into());
        return Ok(cert);
    };
    let lam = m.character().get(x);
    if lam.is_zero() {
        cert.witness.get_or_insert_with(|| format!("character vanishes on {}", p.tag(x)));
        return Ok(cert);
    }
    cert.degree_reduction = true;
    for mono in m.basis(depth) {
        if mono.is_unit() {
            continue;
        }
        let v = UEAElement::monomial(mono.clone());
        let r = v.sub(&m.act(x, &v)?.scale(&(Scalar::one() / &lam)));
        if r.degree().is_some_and(|d| d >= mono.degree()) {
            cert.degree_reduction = false;
            cert.witness.get_or_insert_with(|| format!("degree does not drop on {}", m.engine().format_monomial(&mono)));
            break;
        }
    }
    Ok(cert)
}

/// A simple module of the Borel subalgebra of `sl_n`, with its factorization.
#[derive(Debug, Clone)]
pub struct BorelSimple {
    pub module: InducedModule,
    /// Simple roots `k` (1-based) with `lambda_k != 0`.
    pub active: Vec<usize>,
    /// Dimension of the degree-`k` piece of the realization.
    pub dims: Vec<usize>,
    /// Degree-wise convolution of the per-root factor dimensions.
    pub product_dims: Vec<usize>,
    /// The action agrees with the tensor product of per-root factors.
    pub factorization_ok: bool,
    pub witness: Option<String>,
}

/// `U(b) (x)_{U(c)} C` for the Borel of `sl_n`, where `c` is spanned by all
/// `e_ij` and the `h_k` with `lambda_k = 0`. Returns the module and the
/// simple roots `k` (1-based) with `lambda_k != 0`.
pub fn borel_simple_realization(n: usize, lambda: &[Scalar], mu: &BTreeMap<usize, Scalar>) -> Result<(InducedModule, Vec<usize>)> {
    let p = catalog("borel_sl", &CatalogParams { n: Some(n as i64), ..Default::default() })?;
    if lambda.len() != n - 1 {
        return Err(Error::usage(format!("lambda needs {} simple-root values", n - 1)));
    }
    let zero_roots: Vec<usize> = (1..n).filter(|&k| lambda[k - 1].is_zero()).collect();
    let mu_keys: Vec<usize> = mu.keys().copied().collect();
    if mu_keys != zero_roots {
        return Err(Error::usage(format!("mu must be given exactly on h_k for k in {zero_roots:?}")));
    }
    let active: Vec<usize> = (1..n).filter(|k| !zero_roots.contains(k)).collect();
    let mut part: Vec<usize> = p.part("n").unwrap().to_vec();
    let mut assignment = BTreeMap::new();
    for k in 1..n {
        assignment.insert(p.lookup(&format!("e{k}{}", k + 1))?, lambda[k - 1].clone());
    }
    for (&k, v) in mu {
        let hk = p.lookup(&format!("h{k}"))?;
        part.push(hk);
        assignment.insert(hk, v.clone());
    }
    part.sort();
    let chi = character_validate(&p, &part, &assignment)?;
    Ok((InducedModule::new(&p, &part, chi)?, active))
}

/// `L_{lambda,mu}` for the Borel of `sl_n`: `lambda` on the simple roots,
/// `mu` on `h_k` for each `k` with `lambda_k = 0`.
pub fn borel_simple_module(n: usize, lambda: &[Scalar], mu: &BTreeMap<usize, Scalar>, depth: u32) -> Result<BorelSimple> {
    let (module, active) = borel_simple_realization(n, lambda, mu)?;
    let p = module.presentation().clone();
    let h = |k: usize| p.lookup(&format!("h{k}"));
    let e = |i: usize, j: usize| p.lookup(&format!("e{i}{j}"));
    let basis = module.basis(depth);
    let mut dims = vec![0; depth as usize + 1];
    for m in &basis {
        dims[m.degree() as usize] += 1;
    }
    let sv = catalog("solvable2d", &CatalogParams::default())?;
    let mut product_dims = vec![0; depth as usize + 1];
    product_dims[0] = 1;
    let mut factors = Vec::new();
    for &k in &active {
        let chi = character_from_tags(&sv, &[1], &[("b", lambda[k - 1].clone())])?;
        let f = InducedModule::standard(&sv, &[1], chi)?;
        let fd: Vec<usize> = (0..=depth).map(|d| f.basis(d).iter().filter(|m| m.degree() == d).count()).collect();
        let mut next = vec![0; depth as usize + 1];
        for a in 0..=depth as usize {
            for b in 0..=depth as usize - a {
                next[a + b] += product_dims[a] * fd[b];
            }
        }
        product_dims = next;
        factors.push((k, f));
    }
    let mut factorization_ok = true;
    let mut witness = None;
    let exps = |m: &StandardMonomial| -> BTreeMap<usize, u32> {
        m.factors()
            .iter()
            .map(|&(pos, e)| {
                let tag = p.tag(module.engine().order().symbol_at(pos)).to_string();
                (tag[1..].parse::<usize>().unwrap(), e)
            })
            .collect()
    };
    let build = |ex: &BTreeMap<usize, u32>| -> Result<StandardMonomial> {
        let pairs: Vec<(usize, u32)> = ex.iter().filter(|(_, &e)| e > 0).map(|(&k, &e)| (h(k).unwrap(), e)).collect();
        let u = module.engine().monomial_of(&pairs)?;
        Ok(u.terms().keys().next().unwrap().clone())
    };
    'outer: for m in &basis {
        let v = UEAElement::monomial(m.clone());
        let ex = exps(m);
        for (k, f) in &factors {
            let slot = ex.get(k).copied().unwrap_or(0);
            let a_pow = f.engine().monomial_of(&if slot > 0 { vec![(0, slot)] } else { vec![] })?;
            for (sym_l, sym_f) in [(h(*k)?, 0usize), (e(*k, *k + 1)?, 1usize)] {
                let got = module.act(sym_l, &v)?;
                let fv = f.act(sym_f, &a_pow)?;
                let mut want = UEAElement::zero();
                for (fm, c) in fv.terms() {
                    let mut ex2 = ex.clone();
                    ex2.insert(*k, fm.degree());
                    want.add_term(build(&ex2)?, c.clone());
                }
                if got != want {
                    factorization_ok = false;
                    witness = Some(format!("{} on {}", p.tag(sym_l), module.engine().format_monomial(m)));
                    break 'outer;
                }
            }
        }
        for (&k, val) in mu {
            if module.act(h(k)?, &v)? != v.scale(val) {
                factorization_ok = false;
                witness = Some(format!("h{k} on {}", module.engine().format_monomial(m)));
                break 'outer;
            }
        }
        for i in 1..n {
            for j in i + 2..=n {
                if !module.act(e(i, j)?, &v)?.is_zero() {
                    factorization_ok = false;
                    witness = Some(format!("e{i}{j} on {}", module.engine().format_monomial(m)));
                    break 'outer;
                }
            }
        }
    }
    Ok(BorelSimple { module, active, dims, product_dims, factorization_ok, witness })
}

/// Pointwise annihilation evidence for one element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnihilatorEntry {
    pub element: String,
    pub kills_verma: bool,
    pub kills_whittaker: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnihilatorReport {
    pub depth: u32,
    pub entries: Vec<AnnihilatorEntry>,
    pub disclaimer: String,
}

/// Net depth change of each term of `u`.
fn depth_shifts(tri: &Triangular, u: &UEAElement) -> Vec<i64> {
    let (nl, nh) = (tri.lower.len(), tri.h.len());
    u.terms()
        .keys()
        .map(|m| {
            m.factors()
                .iter()
                .map(|&(pos, e)| {
                    if pos < nl {
                        (tri.lower_w[pos] * e) as i64
                    } else if pos >= nl + nh {
                        -((tri.upper_w[pos - nl - nh] * e) as i64)
                    } else {
                        0
                    }
                })
                .sum()
        })
        .collect()
}

/// Tests `u . M(mu) = 0` on depths `0..=depth` and `u . w = 0` for the
/// truncated completion Whittaker vector `w`, on the depths where the
/// truncation determines `u . w`.
pub fn annihilator_spot_check(tri: &Triangular, lam: &Character, elements: &[UEAElement], depth: u32) -> Result<AnnihilatorReport> {
    let comp = completion_whittaker_solve(tri, lam, depth, Ladder::Verma)?;
    let w = &comp.result.representative;
    let mut entries = Vec::new();
    for u in elements {
        let shifts = depth_shifts(tri, u);
        let min_shift = shifts.iter().copied().min().unwrap_or(0);
        let reach = depth as i64 + min_shift;
        if reach < 0 && !u.is_zero() {
            return Err(Error::usage("element lowers depth beyond the window"));
        }
        let mut kills_verma = true;
        for k in 0..=depth {
            for m in tri.lowering_monomials(k) {
                if !tri.apply(u, &m)?.is_zero() {
                    kills_verma = false;
                }
            }
        }
        let mut image = UEAElement::zero();
        for k in 0..=depth {
            for (m, c) in tri.lowering_monomials(k).iter().zip(&w[k as usize]) {
                if !c.is_zero() {
                    image = image.add(&tri.apply(u, m)?.scale(c));
                }
            }
        }
        let kills_whittaker = !w.is_empty() && image.terms().keys().all(|m| tri.depth(m) as i64 > reach);
        entries.push(AnnihilatorEntry { element: tri.engine().format(u), kills_verma, kills_whittaker });
    }
    Ok(AnnihilatorReport {
        depth,
        entries,
        disclaimer: "pointwise evidence on a truncation; annihilating one vector does not put an element in the module annihilator".into(),
    })
}

/// The `sl2` Casimir `ef + fe + h^2/2` and its scalar on `M(mu)`.
pub fn sl2_casimir(tri: &Triangular) -> Result<(UEAElement, Scalar)> {
    let u = tri.engine().normalize_expr("e f + f e + 1/2 h h")?;
    let mu = tri.weight().first().cloned().ok_or_else(|| Error::usage("sl2 weight missing"))?;
    let s = &mu * &mu / q(2) + &mu;
    Ok((u, s))
}
