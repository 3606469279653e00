//! Enveloping algebra arithmetic in a PBW basis.
//!
//! A [`Pbw`] engine fixes a presentation and a [`MonomialOrder`]. Words are
//! straightened with `xy = yx + [x, y]`, always resolving the leftmost
//! adjacent inversion first.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_linear::{parse_scalar, Scalar};
use crate::lie_presentations::{format_terms, LiePresentation, OverflowMode};

/// Total order on the basis with the symbols of a distinguished subalgebra
/// forming a suffix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOrder {
    order: Vec<usize>,
    pos: Vec<usize>,
    split: usize,
}

fn by_degree_then_tag(p: &LiePresentation, v: &mut [usize]) {
    v.sort_by(|&x, &y| (p.degree(x), p.tag(x)).cmp(&(p.degree(y), p.tag(y))));
}

impl MonomialOrder {
    /// Complement symbols first, then `n`; each group by `(degree, tag)`.
    pub fn split(p: &LiePresentation, n: &[usize]) -> Self {
        let mut comp: Vec<usize> = (0..p.dim()).filter(|i| !n.contains(i)).collect();
        let mut tail: Vec<usize> = n.to_vec();
        tail.sort();
        tail.dedup();
        by_degree_then_tag(p, &mut comp);
        by_degree_then_tag(p, &mut tail);
        let split = comp.len();
        comp.extend(tail);
        Self::from_sequence(p, comp, split).expect("split order is a permutation")
    }

    /// All symbols ordered by `(degree, tag)` with an empty distinguished part.
    pub fn standard(p: &LiePresentation) -> Self {
        Self::split(p, &[])
    }

    /// Explicit order; the last `len - split` symbols form the distinguished part.
    pub fn from_sequence(p: &LiePresentation, order: Vec<usize>, split: usize) -> Result<Self> {
        let mut pos = vec![usize::MAX; p.dim()];
        for (k, &s) in order.iter().enumerate() {
            if s >= p.dim() || pos[s] != usize::MAX {
                return Err(Error::usage("monomial order is not a permutation of the basis"));
            }
            pos[s] = k;
        }
        if order.len() != p.dim() || split > order.len() {
            return Err(Error::usage("monomial order is not a permutation of the basis"));
        }
        Ok(MonomialOrder { order, pos, split })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn position(&self, sym: usize) -> usize {
        self.pos[sym]
    }

    pub fn symbol_at(&self, position: usize) -> usize {
        self.order[position]
    }

    /// Number of complement symbols.
    pub fn split_point(&self) -> usize {
        self.split
    }

    pub fn is_distinguished(&self, sym: usize) -> bool {
        self.pos[sym] >= self.split
    }

    pub fn sequence(&self) -> &[usize] {
        &self.order
    }
}

/// Ordered product of powers, stored as `(position in order, exponent)`
/// with strictly increasing positions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct StandardMonomial {
    factors: Vec<(usize, u32)>,
}

impl StandardMonomial {
    pub fn unit() -> Self {
        StandardMonomial { factors: Vec::new() }
    }

    /// Builds from factors; positions must increase strictly, exponents be positive.
    pub fn from_factors(factors: Vec<(usize, u32)>) -> Result<Self> {
        let ok = factors.iter().all(|&(_, e)| e > 0) && factors.windows(2).all(|w| w[0].0 < w[1].0);
        if !ok {
            return Err(Error::usage("factors are not strictly increasing with positive exponents"));
        }
        Ok(StandardMonomial { factors })
    }

    fn from_sorted_word(word: &[usize]) -> Self {
        let mut factors: Vec<(usize, u32)> = Vec::new();
        for &x in word {
            match factors.last_mut() {
                Some((p, e)) if *p == x => *e += 1,
                _ => factors.push((x, 1)),
            }
        }
        StandardMonomial { factors }
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.factors
    }

    /// Total exponent count.
    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    /// Expanded word of positions.
    pub fn word(&self) -> Vec<usize> {
        self.factors.iter().flat_map(|&(p, e)| std::iter::repeat_n(p, e as usize)).collect()
    }

    pub fn exponent_at(&self, position: usize) -> u32 {
        self.factors.iter().find(|f| f.0 == position).map_or(0, |f| f.1)
    }

    /// Splits at an order position: factors below `split`, and the rest.
    pub fn split_at(&self, split: usize) -> (StandardMonomial, StandardMonomial) {
        let k = self.factors.partition_point(|f| f.0 < split);
        (StandardMonomial { factors: self.factors[..k].to_vec() }, StandardMonomial { factors: self.factors[k..].to_vec() })
    }
}

/// Rational combination of standard monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UEAElement {
    terms: BTreeMap<StandardMonomial, Scalar>,
}

impl UEAElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(Scalar::one())
    }

    pub fn scalar(c: Scalar) -> Self {
        let mut u = Self::zero();
        u.add_term(StandardMonomial::unit(), c);
        u
    }

    pub fn monomial(m: StandardMonomial) -> Self {
        let mut u = Self::zero();
        u.add_term(m, Scalar::one());
        u
    }

    pub fn terms(&self) -> &BTreeMap<StandardMonomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &StandardMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: StandardMonomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &UEAElement) -> UEAElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &UEAElement) -> UEAElement {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> UEAElement {
        if c.is_zero() {
            return Self::zero();
        }
        UEAElement { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    /// Largest monomial degree, or `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(StandardMonomial::degree).max()
    }
}

/// A generator `(x - c)^power` of a left ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealGen {
    pub symbol: usize,
    pub scalar: Scalar,
    pub power: u32,
}

impl IdealGen {
    pub fn linear(symbol: usize, scalar: Scalar) -> Self {
        IdealGen { symbol, scalar, power: 1 }
    }
}

/// Bracket terms keyed by position, with the overflow flag.
type BracketRow = (Vec<(usize, Scalar)>, bool);

/// Straightening engine for one presentation and one monomial order.
#[derive(Debug, Clone)]
pub struct Pbw {
    p: LiePresentation,
    order: MonomialOrder,
    /// `[x, y]` for positions `x > y`, as position-keyed terms.
    table: BTreeMap<(usize, usize), BracketRow>,
}

impl Pbw {
    pub fn new(p: &LiePresentation, order: MonomialOrder) -> Self {
        let mut table = BTreeMap::new();
        for x in 0..order.len() {
            for y in 0..x {
                let b = p.bracket_marked(order.symbol_at(x), order.symbol_at(y));
                if b.value.is_empty() && !b.overflow {
                    continue;
                }
                let terms = b.value.into_iter().map(|(s, c)| (order.position(s), c)).collect();
                table.insert((x, y), (terms, b.overflow));
            }
        }
        Pbw { p: p.clone(), order, table }
    }

    /// Engine whose distinguished suffix is the subalgebra `n`.
    pub fn with_split(p: &LiePresentation, n: &[usize]) -> Self {
        Self::new(p, MonomialOrder::split(p, n))
    }

    pub fn presentation(&self) -> &LiePresentation {
        &self.p
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Monomial `x` for a basis symbol.
    pub fn generator(&self, sym: usize) -> UEAElement {
        UEAElement::monomial(StandardMonomial { factors: vec![(self.order.position(sym), 1)] })
    }

    /// Monomial from `(symbol, exponent)` pairs in any order, straightened.
    pub fn monomial_of(&self, pairs: &[(usize, u32)]) -> Result<UEAElement> {
        let mut word = Vec::new();
        for &(s, e) in pairs {
            word.extend(std::iter::repeat_n(s, e as usize));
        }
        self.normalize_word(&word)
    }

    /// Exponent of a basis symbol in a monomial.
    pub fn exponent(&self, m: &StandardMonomial, sym: usize) -> u32 {
        m.exponent_at(self.order.position(sym))
    }

    /// Straightens a linear combination of positions-words. Returns the
    /// normal form and whether any bracket overflowed the window.
    fn straighten(&self, input: Vec<(Vec<usize>, Scalar)>) -> Result<(UEAElement, bool)> {
        let mut work: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
        for (w, c) in input {
            push_word(&mut work, w, c);
        }
        let mut out = UEAElement::zero();
        let mut overflow = false;
        let mut steps: u64 = 0;
        while let Some((w, c)) = work.pop_last() {
            steps += 1;
            if steps > 50_000_000 {
                return Err(Error::invariant("straightening did not terminate"));
            }
            let Some(k) = (0..w.len().saturating_sub(1)).find(|&k| w[k] > w[k + 1]) else {
                out.add_term(StandardMonomial::from_sorted_word(&w), c);
                continue;
            };
            let (x, y) = (w[k], w[k + 1]);
            let mut swapped = w.clone();
            swapped.swap(k, k + 1);
            push_word(&mut work, swapped, c.clone());
            if let Some((terms, of)) = self.table.get(&(x, y)) {
                if *of {
                    if self.p.mode() == OverflowMode::Reject {
                        return Err(Error::overflow(format!(
                            "[{}, {}] leaves the window while straightening",
                            self.p.tag(self.order.symbol_at(x)),
                            self.p.tag(self.order.symbol_at(y))
                        )));
                    }
                    overflow = true;
                }
                for (z, d) in terms {
                    let mut nw = Vec::with_capacity(w.len() - 1);
                    nw.extend_from_slice(&w[..k]);
                    nw.push(*z);
                    nw.extend_from_slice(&w[k + 2..]);
                    push_word(&mut work, nw, &c * d);
                }
            }
        }
        Ok((out, overflow))
    }

    /// Normal form of a word of basis symbols.
    pub fn normalize_word(&self, symbols: &[usize]) -> Result<UEAElement> {
        Ok(self.normalize_words_marked(&[(Scalar::one(), symbols.to_vec())])?.0)
    }

    /// Normal form of a combination of words; the flag reports overflow under the mark policy.
    pub fn normalize_words_marked(&self, words: &[(Scalar, Vec<usize>)]) -> Result<(UEAElement, bool)> {
        let input = words.iter().map(|(c, w)| (w.iter().map(|&s| self.order.position(s)).collect(), c.clone())).collect();
        self.straighten(input)
    }

    /// Normal form of a combination of words.
    pub fn normalize(&self, words: &[(Scalar, Vec<usize>)]) -> Result<UEAElement> {
        Ok(self.normalize_words_marked(words)?.0)
    }

    /// Parses and normalizes a word expression such as `2/3 b a^2 + a`.
    pub fn normalize_expr(&self, text: &str) -> Result<UEAElement> {
        self.normalize(&parse_word_expr(&self.p, text)?)
    }

    /// Product with overflow flag.
    pub fn multiply_marked(&self, x: &UEAElement, y: &UEAElement) -> Result<(UEAElement, bool)> {
        let mut input = Vec::new();
        for (m1, c1) in &x.terms {
            for (m2, c2) in &y.terms {
                let mut w = m1.word();
                w.extend(m2.word());
                input.push((w, c1 * c2));
            }
        }
        self.straighten(input)
    }

    pub fn multiply(&self, x: &UEAElement, y: &UEAElement) -> Result<UEAElement> {
        Ok(self.multiply_marked(x, y)?.0)
    }

    /// `x u - u x` for a basis symbol `x`.
    pub fn adjoint_action(&self, sym: usize, u: &UEAElement) -> Result<UEAElement> {
        let x = self.generator(sym);
        Ok(self.multiply(&x, u)?.sub(&self.multiply(u, &x)?))
    }

    /// Rewrites in the basis (complement monomial)(distinguished monomial).
    pub fn split_form(&self, u: &UEAElement) -> Vec<(Scalar, StandardMonomial, StandardMonomial)> {
        u.terms
            .iter()
            .map(|(m, c)| {
                let (b, a) = m.split_at(self.order.split_point());
                (c.clone(), b, a)
            })
            .collect()
    }

    /// Inverse of [`Pbw::split_form`] via multiplication.
    pub fn join_split(&self, parts: &[(Scalar, StandardMonomial, StandardMonomial)]) -> Result<UEAElement> {
        let mut out = UEAElement::zero();
        for (c, b, a) in parts {
            let prod = self.multiply(&UEAElement::monomial(b.clone()), &UEAElement::monomial(a.clone()))?;
            out = out.add(&prod.scale(c));
        }
        Ok(out)
    }

    /// Whether a monomial belongs to the residue basis of the ideal generated by `gens`.
    pub fn is_residue_monomial(&self, m: &StandardMonomial, gens: &[IdealGen]) -> bool {
        gens.iter().all(|g| self.exponent(m, g.symbol) < g.power)
    }

    /// Class of `u` modulo the left ideal generated by `gens`, in the basis of
    /// monomials whose generator-symbol exponents stay below the powers.
    ///
    /// For a term `P s^e K` with `s` the rightmost generator symbol at or above
    /// its power, `K s = (s + d) K` must hold for a scalar `d`; then
    /// `(s - c + d)^k K` lies in the ideal and `s^e` is reduced modulo it.
    pub fn reduce_mod_left_ideal(&self, u: &UEAElement, gens: &[IdealGen]) -> Result<UEAElement> {
        let mut by_pos: BTreeMap<usize, &IdealGen> = BTreeMap::new();
        for g in gens {
            if g.power == 0 {
                return Err(Error::usage("ideal generator with power 0"));
            }
            if by_pos.insert(self.order.position(g.symbol), g).is_some() {
                return Err(Error::usage("two ideal generators on one symbol"));
            }
        }
        let mut out = UEAElement::zero();
        let mut work: Vec<(StandardMonomial, Scalar)> = u.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        let mut shift_cache: BTreeMap<(usize, Vec<(usize, u32)>), Scalar> = BTreeMap::new();
        while let Some((m, c)) = work.pop() {
            let hit = m.factors.iter().enumerate().rev().find(|(_, (p, e))| by_pos.get(p).is_some_and(|g| *e >= g.power));
            let Some((k, &(s_pos, e))) = hit else {
                out.add_term(m, c);
                continue;
            };
            let g = by_pos[&s_pos];
            let tail: Vec<(usize, u32)> = m.factors[k + 1..].to_vec();
            let d = match shift_cache.get(&(s_pos, tail.clone())) {
                Some(d) => d.clone(),
                None => {
                    let d = self.tail_shift(s_pos, &tail)?;
                    shift_cache.insert((s_pos, tail.clone()), d.clone());
                    d
                }
            };
            let root = &g.scalar - &d;
            let rem = power_mod_shifted(e, &root, g.power);
            for (t, coeff) in rem.into_iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let mut f: Vec<(usize, u32)> = m.factors[..k].to_vec();
                if t > 0 {
                    f.push((s_pos, t as u32));
                }
                f.extend_from_slice(&tail);
                work.push((StandardMonomial { factors: f }, &c * coeff));
            }
        }
        Ok(out)
    }

    /// Scalar `d` with `K s = (s + d) K` for the standard monomial `K`.
    fn tail_shift(&self, s_pos: usize, tail: &[(usize, u32)]) -> Result<Scalar> {
        if tail.is_empty() {
            return Ok(Scalar::zero());
        }
        let k = StandardMonomial { factors: tail.to_vec() };
        let mut w = k.word();
        w.push(s_pos);
        let (ks, _) = self.straighten(vec![(w, Scalar::one())])?;
        let mut sk = vec![s_pos];
        sk.extend(k.word());
        let (sk, _) = self.straighten(vec![(sk, Scalar::one())])?;
        let diff = ks.sub(&sk);
        match diff.terms.len() {
            0 => Ok(Scalar::zero()),
            1 if diff.terms.contains_key(&k) => Ok(diff.coefficient(&k)),
            _ => Err(Error::usage("ideal generators are not of the supported triangular shape")),
        }
    }

    pub fn format_monomial(&self, m: &StandardMonomial) -> String {
        let mut out = String::new();
        for &(pos, e) in &m.factors {
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(self.p.tag(self.order.symbol_at(pos)));
            if e > 1 {
                write!(out, "^{e}").unwrap();
            }
        }
        out
    }

    /// Renders terms in increasing monomial order, e.g. `a b - b`.
    pub fn format(&self, u: &UEAElement) -> String {
        format_terms(u.terms.iter().map(|(m, c)| (c.clone(), self.format_monomial(m))))
    }
}

fn push_word(work: &mut BTreeMap<Vec<usize>, Scalar>, w: Vec<usize>, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match work.entry(w) {
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
        Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

fn binomial(n: u32, k: u32) -> Scalar {
    let mut r = Scalar::one();
    for i in 0..k {
        r = r * Scalar::from_integer((n - i).into()) / Scalar::from_integer((i + 1).into());
    }
    r
}

/// Coefficients `r_0..r_{k-1}` of `s^e mod (s - root)^k`.
fn power_mod_shifted(e: u32, root: &Scalar, k: u32) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); k as usize];
    let pow = |x: &Scalar, n: u32| -> Scalar {
        let mut r = Scalar::one();
        for _ in 0..n {
            r *= x;
        }
        r
    };
    for j in 0..k.min(e + 1) {
        // s^e = sum_j C(e,j) root^(e-j) (s - root)^j
        let a = binomial(e, j) * pow(root, e - j);
        if a.is_zero() {
            continue;
        }
        for t in 0..=j {
            let b = binomial(j, t) * pow(&-root.clone(), j - t);
            out[t as usize] += &a * b;
        }
    }
    out
}

/// Parses `2/3 b a^2 + a - 3 c` into words of basis indices.
pub fn parse_word_expr(p: &LiePresentation, text: &str) -> Result<Vec<(Scalar, Vec<usize>)>> {
    let mut out = Vec::new();
    let mut sign = Scalar::one();
    let mut coeff: Option<Scalar> = None;
    let mut word: Vec<usize> = Vec::new();
    let mut open = false;
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.is_empty() {
        return Err(Error::parse("empty expression"));
    }
    let flush = |out: &mut Vec<(Scalar, Vec<usize>)>, sign: &Scalar, coeff: &mut Option<Scalar>, word: &mut Vec<usize>| {
        let c = coeff.take().unwrap_or_else(Scalar::one);
        out.push((sign * c, std::mem::take(word)));
    };
    for tok in toks {
        match tok {
            "+" | "-" => {
                if !open {
                    if out.is_empty() && tok == "-" && coeff.is_none() {
                        sign = -sign;
                        continue;
                    }
                    return Err(Error::parse(format!("dangling operator {tok:?}")));
                }
                flush(&mut out, &sign, &mut coeff, &mut word);
                open = false;
                sign = if tok == "-" { -Scalar::one() } else { Scalar::one() };
            }
            _ => {
                if let Ok(c) = parse_scalar(tok) {
                    if !word.is_empty() || coeff.is_some() {
                        return Err(Error::parse(format!("coefficient {tok:?} must prefix its term")));
                    }
                    coeff = Some(c);
                    open = true;
                    continue;
                }
                let (sym, exp) = match tok.split_once('^') {
                    Some((s, e)) => {
                        let e: u32 = e.parse().map_err(|_| Error::parse(format!("bad exponent in {tok:?}")))?;
                        (s, e)
                    }
                    None => (tok, 1),
                };
                let i = p.index_of(sym).ok_or_else(|| Error::parse(format!("unknown symbol {sym:?}")))?;
                word.extend(std::iter::repeat_n(i, exp as usize));
                open = true;
            }
        }
    }
    if !open {
        return Err(Error::parse("expression ends with an operator"));
    }
    flush(&mut out, &sign, &mut coeff, &mut word);
    Ok(out)
}
