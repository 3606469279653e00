//! Lie algebras by structure constants.
//!
//! A presentation stores an indexed basis, one orientation of every nonzero
//! bracket, optional named parts and an optional degree window. Infinite
//! graded algebras are represented by a finite window; brackets whose true
//! value leaves the window are recorded as overflowed rather than dropped.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_linear::{format_scalar, parse_scalar, q, Scalar, SparseVec, Subspace};

/// Linear combination of basis symbols, keyed by basis index.
pub type Combo = BTreeMap<usize, Scalar>;

/// A basis element: a tag and, for graded algebras, its degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisSymbol {
    pub tag: String,
    pub degree: Option<i64>,
}

/// What to do when a bracket lands outside the degree window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OverflowMode {
    /// Raise [`Error::Overflow`].
    #[default]
    Reject,
    /// Return the in-window part and report the overflow to the caller.
    Mark,
}

/// Overflow handling together with the window it applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationPolicy {
    pub mode: OverflowMode,
    pub window: Option<(i64, i64)>,
}

/// Result of a bracket under the mark policy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bracket {
    pub value: Combo,
    pub overflow: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiePresentation {
    name: String,
    basis: Vec<BasisSymbol>,
    index: HashMap<String, usize>,
    brackets: BTreeMap<(usize, usize), Combo>,
    overflow: BTreeSet<(usize, usize)>,
    parts: BTreeMap<String, Vec<usize>>,
    window: Option<(i64, i64)>,
    mode: OverflowMode,
}

fn valid_tag(tag: &str) -> bool {
    !tag.is_empty()
        && !tag.contains(|c: char| c.is_whitespace() || matches!(c, ',' | '^' | '=' | '#' | '+'))
        && parse_scalar(tag).is_err()
        && tag != "-"
}

/// Incremental construction with validation in [`PresentationBuilder::build`].
#[derive(Debug, Clone, Default)]
pub struct PresentationBuilder {
    name: String,
    basis: Vec<BasisSymbol>,
    index: HashMap<String, usize>,
    brackets: BTreeMap<(usize, usize), Combo>,
    overflow: BTreeSet<(usize, usize)>,
    parts: BTreeMap<String, Vec<usize>>,
    window: Option<(i64, i64)>,
}

impl PresentationBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        PresentationBuilder { name: name.into(), ..Default::default() }
    }

    pub fn symbol(&mut self, tag: &str, degree: Option<i64>) -> Result<usize> {
        if !valid_tag(tag) {
            return Err(Error::parse(format!("invalid basis tag {tag:?}")));
        }
        if self.index.contains_key(tag) {
            return Err(Error::parse(format!("duplicate basis tag {tag:?}")));
        }
        let i = self.basis.len();
        self.basis.push(BasisSymbol { tag: tag.to_string(), degree });
        self.index.insert(tag.to_string(), i);
        Ok(i)
    }

    fn lookup(&self, tag: &str) -> Result<usize> {
        self.index.get(tag).copied().ok_or_else(|| Error::parse(format!("undeclared symbol {tag:?}")))
    }

    /// Sets `[x, y]` by index. The opposite orientation is implied.
    pub fn bracket_idx(&mut self, x: usize, y: usize, value: Combo) -> Result<()> {
        if x == y {
            if value.values().any(|c| !c.is_zero()) {
                return Err(Error::parse(format!("[{0},{0}] must vanish", self.basis[x].tag)));
            }
            return Ok(());
        }
        let (key, sign) = if x < y { ((x, y), q(1)) } else { ((y, x), q(-1)) };
        if self.brackets.contains_key(&key) || self.overflow.contains(&key) {
            return Err(Error::parse(format!("bracket [{}, {}] given twice", self.basis[x].tag, self.basis[y].tag)));
        }
        let value: Combo = value.into_iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c * &sign)).collect();
        if !value.is_empty() {
            self.brackets.insert(key, value);
        }
        Ok(())
    }

    pub fn bracket(&mut self, x: &str, y: &str, value: &[(Scalar, &str)]) -> Result<()> {
        let (i, j) = (self.lookup(x)?, self.lookup(y)?);
        let mut combo = Combo::new();
        for (c, t) in value {
            let k = self.lookup(t)?;
            *combo.entry(k).or_insert_with(Scalar::zero) += c;
        }
        self.bracket_idx(i, j, combo)
    }

    /// Records that the true value of `[x, y]` lies outside the window.
    pub fn overflow_idx(&mut self, x: usize, y: usize) -> Result<()> {
        let key = (x.min(y), x.max(y));
        if x == y || self.brackets.contains_key(&key) || !self.overflow.insert(key) {
            return Err(Error::parse(format!("conflicting overflow mark for [{}, {}]", self.basis[x].tag, self.basis[y].tag)));
        }
        Ok(())
    }

    pub fn part(&mut self, name: &str, tags: &[&str]) -> Result<()> {
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(Error::parse(format!("invalid part name {name:?}")));
        }
        let idx = tags.iter().map(|t| self.lookup(t)).collect::<Result<Vec<_>>>()?;
        self.part_idx(name, idx)
    }

    pub fn part_idx(&mut self, name: &str, idx: Vec<usize>) -> Result<()> {
        if self.parts.contains_key(name) {
            return Err(Error::parse(format!("part {name:?} given twice")));
        }
        let set: BTreeSet<usize> = idx.iter().copied().collect();
        if set.len() != idx.len() {
            return Err(Error::parse(format!("part {name:?} repeats a symbol")));
        }
        self.parts.insert(name.to_string(), idx);
        Ok(())
    }

    pub fn window(&mut self, lo: i64, hi: i64) -> Result<()> {
        if lo > hi {
            return Err(Error::parse(format!("empty window {lo}..{hi}")));
        }
        self.window = Some((lo, hi));
        Ok(())
    }

    pub fn build(self) -> Result<LiePresentation> {
        let graded = self.basis.iter().any(|s| s.degree.is_some());
        if graded && self.basis.iter().any(|s| s.degree.is_none()) {
            return Err(Error::parse("graded presentation with an ungraded symbol"));
        }
        if self.window.is_some() && !graded && !self.basis.is_empty() {
            return Err(Error::parse("a window needs a graded presentation"));
        }
        if let Some((lo, hi)) = self.window {
            for s in &self.basis {
                let d = s.degree.unwrap_or(lo);
                if d < lo || d > hi {
                    return Err(Error::parse(format!("symbol {} of degree {d} outside window", s.tag)));
                }
            }
        }
        if graded {
            for (&(i, j), v) in &self.brackets {
                let d = self.basis[i].degree.unwrap() + self.basis[j].degree.unwrap();
                for &k in v.keys() {
                    if self.basis[k].degree != Some(d) {
                        return Err(Error::parse(format!(
                            "bracket [{}, {}] is not homogeneous of degree {d}",
                            self.basis[i].tag, self.basis[j].tag
                        )));
                    }
                }
            }
        }
        if !self.overflow.is_empty() && self.window.is_none() {
            return Err(Error::parse("overflow marks need a window"));
        }
        Ok(LiePresentation {
            name: self.name,
            basis: self.basis,
            index: self.index,
            brackets: self.brackets,
            overflow: self.overflow,
            parts: self.parts,
            window: self.window,
            mode: OverflowMode::Reject,
        })
    }
}

impl LiePresentation {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn symbols(&self) -> &[BasisSymbol] {
        &self.basis
    }

    pub fn tag(&self, i: usize) -> &str {
        &self.basis[i].tag
    }

    pub fn degree(&self, i: usize) -> Option<i64> {
        self.basis[i].degree
    }

    pub fn is_graded(&self) -> bool {
        self.basis.iter().any(|s| s.degree.is_some())
    }

    pub fn index_of(&self, tag: &str) -> Option<usize> {
        self.index.get(tag).copied()
    }

    pub fn lookup(&self, tag: &str) -> Result<usize> {
        self.index_of(tag).ok_or_else(|| Error::usage(format!("unknown symbol {tag:?} in {}", self.name)))
    }

    pub fn window(&self) -> Option<(i64, i64)> {
        self.window
    }

    pub fn mode(&self) -> OverflowMode {
        self.mode
    }

    pub fn policy(&self) -> TruncationPolicy {
        TruncationPolicy { mode: self.mode, window: self.window }
    }

    /// Same algebra under a different overflow policy.
    pub fn with_mode(&self, mode: OverflowMode) -> Self {
        let mut p = self.clone();
        p.mode = mode;
        p
    }

    pub fn parts(&self) -> &BTreeMap<String, Vec<usize>> {
        &self.parts
    }

    pub fn part(&self, name: &str) -> Option<&[usize]> {
        self.parts.get(name).map(|v| v.as_slice())
    }

    /// Resolves a part name or a comma-separated tag list.
    pub fn resolve_part(&self, arg: &str) -> Result<Vec<usize>> {
        if let Some(p) = self.part(arg) {
            return Ok(p.to_vec());
        }
        let mut out = Vec::new();
        for t in arg.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let i = self.lookup(t)?;
            if !out.contains(&i) {
                out.push(i);
            }
        }
        if out.is_empty() {
            return Err(Error::usage(format!("empty subalgebra {arg:?}")));
        }
        Ok(out)
    }

    pub fn is_overflow(&self, i: usize, j: usize) -> bool {
        self.overflow.contains(&(i.min(j), i.max(j)))
    }

    /// Number of basis pairs whose bracket overflows the window.
    pub fn overflow_pairs(&self) -> usize {
        self.overflow.len()
    }

    /// `[x_i, x_j]` with the overflow flag, never failing.
    pub fn bracket_marked(&self, i: usize, j: usize) -> Bracket {
        if i == j {
            return Bracket { value: Combo::new(), overflow: false };
        }
        let key = (i.min(j), i.max(j));
        let overflow = self.overflow.contains(&key);
        let mut value = self.brackets.get(&key).cloned().unwrap_or_default();
        if i > j {
            for c in value.values_mut() {
                *c = -c.clone();
            }
        }
        Bracket { value, overflow }
    }

    /// `[x_i, x_j]` under the presentation's overflow policy.
    pub fn bracket(&self, i: usize, j: usize) -> Result<Bracket> {
        let b = self.bracket_marked(i, j);
        if b.overflow && self.mode == OverflowMode::Reject {
            return Err(Error::overflow(format!("[{}, {}] leaves the window {:?}", self.tag(i), self.tag(j), self.window)));
        }
        Ok(b)
    }

    /// Bilinear extension of the marked bracket.
    pub fn bracket_combo(&self, x: &Combo, y: &Combo) -> Bracket {
        let mut value = Combo::new();
        let mut overflow = false;
        for (&i, a) in x {
            for (&j, b) in y {
                let br = self.bracket_marked(i, j);
                overflow |= br.overflow;
                let ab = a * b;
                for (k, c) in br.value {
                    add_term(&mut value, k, &(&ab * c));
                }
            }
        }
        Bracket { value, overflow }
    }

    /// Stored brackets, one orientation per pair.
    pub fn stored_brackets(&self) -> impl Iterator<Item = (&(usize, usize), &Combo)> {
        self.brackets.iter()
    }

    pub fn format_combo(&self, c: &Combo) -> String {
        format_terms(c.iter().map(|(&k, x)| (x.clone(), self.tag(k).to_string())))
    }

    /// Serializes to the line-oriented presentation format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.basis {
            match s.degree {
                Some(d) => writeln!(out, "basis {} degree={d}", s.tag).unwrap(),
                None => writeln!(out, "basis {}", s.tag).unwrap(),
            }
        }
        let mut keys: BTreeSet<(usize, usize)> = self.brackets.keys().copied().collect();
        keys.extend(self.overflow.iter().copied());
        for (i, j) in keys {
            if self.overflow.contains(&(i, j)) {
                writeln!(out, "bracket {} {} = overflow", self.tag(i), self.tag(j)).unwrap();
                continue;
            }
            let rhs: Vec<String> = self.brackets[&(i, j)].iter().map(|(&k, c)| format!("{} {}", format_scalar(c), self.tag(k))).collect();
            writeln!(out, "bracket {} {} = {}", self.tag(i), self.tag(j), rhs.join(" + ")).unwrap();
        }
        for (name, idx) in &self.parts {
            let tags: Vec<&str> = idx.iter().map(|&i| self.tag(i)).collect();
            writeln!(out, "part {name} = {}", tags.join(",")).unwrap();
        }
        if let Some((lo, hi)) = self.window {
            writeln!(out, "window {lo} {hi}").unwrap();
        }
        out
    }
}

pub(crate) fn add_term(c: &mut Combo, k: usize, x: &Scalar) {
    if x.is_zero() {
        return;
    }
    let e = c.entry(k).or_insert_with(Scalar::zero);
    *e += x;
    if e.is_zero() {
        c.remove(&k);
    }
}

/// Renders `c1 t1 + c2 t2 - ...` with unit coefficients elided; `0` when empty.
pub fn format_terms(terms: impl IntoIterator<Item = (Scalar, String)>) -> String {
    let mut out = String::new();
    for (c, t) in terms {
        let neg = c < Scalar::zero();
        let a = if neg { -c } else { c };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if t.is_empty() {
            out.push_str(&format_scalar(&a));
        } else if a.is_one() {
            out.push_str(&t);
        } else {
            out.push_str(&format!("{} {t}", format_scalar(&a)));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Parses the presentation file format.
pub fn parse_presentation(name: &str, text: &str) -> Result<LiePresentation> {
    let mut b = PresentationBuilder::new(name);
    let mut pending_brackets = Vec::new();
    let mut pending_parts = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: &str| Error::parse(format!("line {}: {m}", lineno + 1));
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "basis" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                let degree = match toks.as_slice() {
                    [_] => None,
                    [_, d] => {
                        let v = d.strip_prefix("degree=").ok_or_else(|| err("expected degree=<int>"))?;
                        Some(v.parse::<i64>().map_err(|_| err("bad degree"))?)
                    }
                    _ => return Err(err("expected: basis <tag> [degree=<int>]")),
                };
                b.symbol(toks[0], degree).map_err(|e| err(&e.to_string()))?;
            }
            "bracket" => {
                let (lhs, rhs) = rest.split_once('=').ok_or_else(|| err("missing '='"))?;
                let lt: Vec<&str> = lhs.split_whitespace().collect();
                if lt.len() != 2 {
                    return Err(err("expected two symbols before '='"));
                }
                pending_brackets.push((lineno + 1, lt[0].to_string(), lt[1].to_string(), rhs.trim().to_string()));
            }
            "part" => {
                let (n, tags) = rest.split_once('=').ok_or_else(|| err("missing '='"))?;
                let tags: Vec<String> = tags.split(',').map(|t| t.trim().to_string()).collect();
                if tags.iter().any(|t| t.is_empty()) {
                    return Err(err("empty tag in part"));
                }
                pending_parts.push((lineno + 1, n.trim().to_string(), tags));
            }
            "window" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 2 {
                    return Err(err("expected: window <lo> <hi>"));
                }
                let lo = toks[0].parse::<i64>().map_err(|_| err("bad window bound"))?;
                let hi = toks[1].parse::<i64>().map_err(|_| err("bad window bound"))?;
                b.window(lo, hi).map_err(|e| err(&e.to_string()))?;
            }
            other => return Err(err(&format!("unknown key {other:?}"))),
        }
    }
    for (lineno, x, y, rhs) in pending_brackets {
        let err = |m: String| Error::parse(format!("line {lineno}: {m}"));
        let i = b.lookup(&x).map_err(|e| err(e.to_string()))?;
        let j = b.lookup(&y).map_err(|e| err(e.to_string()))?;
        if rhs == "overflow" {
            b.overflow_idx(i, j).map_err(|e| err(e.to_string()))?;
            continue;
        }
        let mut combo = Combo::new();
        if rhs != "0" {
            for term in rhs.split('+') {
                let toks: Vec<&str> = term.split_whitespace().collect();
                let [c, t] = toks.as_slice() else {
                    return Err(err(format!("expected '<coeff> <tag>', got {:?}", term.trim())));
                };
                let c = parse_scalar(c).map_err(|e| err(e.to_string()))?;
                let k = b.lookup(t).map_err(|e| err(e.to_string()))?;
                add_term(&mut combo, k, &c);
            }
        }
        b.bracket_idx(i, j, combo).map_err(|e| err(e.to_string()))?;
    }
    for (lineno, n, tags) in pending_parts {
        let refs: Vec<&str> = tags.iter().map(String::as_str).collect();
        b.part(&n, &refs).map_err(|e| Error::parse(format!("line {lineno}: {e}")))?;
    }
    b.build()
}

/// Parameters for [`catalog`]. Unused fields are ignored by each entry.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CatalogParams {
    pub n: Option<i64>,
    pub k: Option<i64>,
    pub window: Option<(i64, i64)>,
    /// Total polynomial degree cap for `witt_w`.
    pub cap: Option<u32>,
}

/// Names accepted by [`catalog`].
pub const CATALOG_NAMES: &[&str] = &["solvable2d", "heisenberg3d", "v_n", "v_quotient", "centerless_virasoro", "witt_w", "borel_sl", "sl2"];

/// Builds a named example algebra.
pub fn catalog(name: &str, params: &CatalogParams) -> Result<LiePresentation> {
    match name {
        "solvable2d" => solvable2d(),
        "heisenberg3d" => heisenberg3d(),
        "v_n" => v_n(params.n.unwrap_or(1), params.window),
        "v_quotient" => {
            let n = params.n.ok_or_else(|| Error::usage("v_quotient needs n"))?;
            let k = params.k.ok_or_else(|| Error::usage("v_quotient needs k"))?;
            v_quotient(n, k)
        }
        "centerless_virasoro" => centerless_virasoro(params.window.unwrap_or((-10, 10))),
        "witt_w" => {
            let n = params.n.unwrap_or(1);
            if !(1..=4).contains(&n) {
                return Err(Error::usage(format!("witt_w supports 1 <= n <= 4, got {n}")));
            }
            witt_w(n as usize, params.cap.unwrap_or(5))
        }
        "borel_sl" => {
            let n = params.n.unwrap_or(2);
            if !(2..=9).contains(&n) {
                return Err(Error::usage(format!("borel_sl supports 2 <= n <= 9, got {n}")));
            }
            borel_sl(n as usize)
        }
        "sl2" => sl2(),
        other => Err(Error::usage(format!("unknown catalog algebra {other:?}"))),
    }
}

fn solvable2d() -> Result<LiePresentation> {
    let mut b = PresentationBuilder::new("solvable2d");
    b.symbol("a", Some(0))?;
    b.symbol("b", Some(1))?;
    b.bracket("a", "b", &[(q(1), "b")])?;
    b.part("a", &["a"])?;
    b.part("n", &["b"])?;
    b.build()
}

fn heisenberg3d() -> Result<LiePresentation> {
    let mut b = PresentationBuilder::new("heisenberg3d");
    b.symbol("a", Some(1))?;
    b.symbol("b", Some(1))?;
    b.symbol("c", Some(2))?;
    b.bracket("a", "b", &[(q(1), "c")])?;
    b.part("a", &["a", "b"])?;
    b.part("n", &["c"])?;
    b.build()
}

fn sl2() -> Result<LiePresentation> {
    let mut b = PresentationBuilder::new("sl2");
    b.symbol("f", Some(-1))?;
    b.symbol("h", Some(0))?;
    b.symbol("e", Some(1))?;
    b.bracket("h", "e", &[(q(2), "e")])?;
    b.bracket("h", "f", &[(q(-2), "f")])?;
    b.bracket("e", "f", &[(q(1), "h")])?;
    b.part("n_-", &["f"])?;
    b.part("h", &["h"])?;
    b.part("n_+", &["e"])?;
    b.build()
}

fn e_tag(i: i64) -> String {
    format!("e{i}")
}

/// Witt-type bracket `[e_i, e_j] = (j - i) e_{i+j}` on the degrees `lo..=hi`.
/// Results with degree `>= cut` vanish (quotient); other out-of-range results
/// are marked as overflow.
fn witt_type(name: &str, lo: i64, hi: i64, cut: Option<i64>, windowed: bool) -> Result<PresentationBuilder> {
    let mut b = PresentationBuilder::new(name);
    for i in lo..=hi {
        b.symbol(&e_tag(i), Some(i))?;
    }
    for i in lo..=hi {
        for j in (i + 1)..=hi {
            let s = i + j;
            if cut.is_some_and(|c| s >= c) {
                continue;
            }
            let (x, y) = ((i - lo) as usize, (j - lo) as usize);
            if (lo..=hi).contains(&s) {
                b.bracket_idx(x, y, Combo::from([((s - lo) as usize, q(j - i))]))?;
            } else if windowed {
                b.overflow_idx(x, y)?;
            } else {
                return Err(Error::invariant(format!("bracket [e{i}, e{j}] leaves a closed algebra")));
            }
        }
    }
    if windowed {
        b.window(lo, hi)?;
    }
    let neg: Vec<usize> = (lo..=hi).filter(|&i| i < 0).map(|i| (i - lo) as usize).collect();
    let zero: Vec<usize> = (lo..=hi).filter(|&i| i == 0).map(|i| (i - lo) as usize).collect();
    let pos: Vec<usize> = (lo..=hi).filter(|&i| i > 0).map(|i| (i - lo) as usize).collect();
    for (n, idx) in [("n_-", neg), ("h", zero), ("n_+", pos)] {
        if !idx.is_empty() {
            b.part_idx(n, idx)?;
        }
    }
    Ok(b)
}

/// `v_n` with basis `e_i`, `i >= n`, seen through the window `[n, hi]`.
fn v_n(n: i64, window: Option<(i64, i64)>) -> Result<LiePresentation> {
    if n < -1 {
        return Err(Error::usage(format!("v_n is not closed under the bracket for n = {n}")));
    }
    let (lo, hi) = window.unwrap_or((n, n + 11));
    if lo != n || hi < lo {
        return Err(Error::usage(format!("window [{lo}, {hi}] does not start at the lowest index {n}")));
    }
    witt_type(&format!("v_{n}"), lo, hi, None, true)?.build()
}

/// The finite-dimensional quotient `v_n / v_k`.
fn v_quotient(n: i64, k: i64) -> Result<LiePresentation> {
    if n < 0 || k <= n {
        return Err(Error::usage(format!("v_quotient needs 0 <= n < k, got n={n}, k={k}")));
    }
    witt_type(&format!("v_{n}/v_{k}"), n, k - 1, Some(k), false)?.build()
}

fn centerless_virasoro(window: (i64, i64)) -> Result<LiePresentation> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::usage(format!("empty window [{lo}, {hi}]")));
    }
    witt_type("centerless_virasoro", lo, hi, None, true)?.build()
}

fn borel_sl(n: usize) -> Result<LiePresentation> {
    let mut b = PresentationBuilder::new(format!("borel_sl{n}"));
    for k in 1..n {
        b.symbol(&format!("h{k}"), Some(0))?;
    }
    let mut roots = Vec::new();
    for h in 1..n {
        for i in 1..=(n - h) {
            let j = i + h;
            b.symbol(&format!("e{i}{j}"), Some(h as i64))?;
            roots.push((i, j));
        }
    }
    for k in 1..n {
        for &(i, j) in &roots {
            if i <= k && k < j {
                let e = format!("e{i}{j}");
                b.bracket(&format!("h{k}"), &e, &[(q(1), &e)])?;
            }
        }
    }
    for (x, &(i, j)) in roots.iter().enumerate() {
        for &(k, l) in &roots[x + 1..] {
            // [E_ij, E_kl] = d_jk E_il - d_li E_kj
            let mut terms = Vec::new();
            if j == k {
                terms.push((q(1), format!("e{i}{l}")));
            }
            if l == i {
                terms.push((q(-1), format!("e{k}{j}")));
            }
            let refs: Vec<(Scalar, &str)> = terms.iter().map(|(c, t)| (c.clone(), t.as_str())).collect();
            b.bracket(&format!("e{i}{j}"), &format!("e{k}{l}"), &refs)?;
        }
    }
    let hs: Vec<String> = (1..n).map(|k| format!("h{k}")).collect();
    let es: Vec<String> = roots.iter().map(|(i, j)| format!("e{i}{j}")).collect();
    b.part("h", &hs.iter().map(String::as_str).collect::<Vec<_>>())?;
    b.part("n", &es.iter().map(String::as_str).collect::<Vec<_>>())?;
    b.build()
}

/// The derivation `x^m d/dx_i` of a polynomial ring in `m.len()` variables.
/// `i` is zero-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialDerivation {
    pub i: usize,
    pub m: Vec<u32>,
}

impl MonomialDerivation {
    pub fn new(i: usize, m: Vec<u32>) -> Self {
        assert!(i < m.len(), "derivation index out of range");
        MonomialDerivation { i, m }
    }

    pub fn n(&self) -> usize {
        self.m.len()
    }

    /// Total degree grading `|m| - 1`.
    pub fn degree(&self) -> i64 {
        self.m.iter().map(|&x| x as i64).sum::<i64>() - 1
    }

    /// Weight under the diagonal torus: `m - e_i`.
    pub fn weight(&self) -> Vec<i64> {
        let mut w: Vec<i64> = self.m.iter().map(|&x| x as i64).collect();
        w[self.i] -= 1;
        w
    }

    pub fn tag(&self) -> String {
        let ms: Vec<String> = self.m.iter().map(u32::to_string).collect();
        format!("D{}_{}", self.i + 1, ms.join("_"))
    }
}

/// `[x^m d_i, x^p d_j] = p_i x^(m+p-e_i) d_j - m_j x^(m+p-e_j) d_i`.
pub fn witt_bracket(d1: &MonomialDerivation, d2: &MonomialDerivation) -> Result<Vec<(Scalar, MonomialDerivation)>> {
    if d1.n() != d2.n() {
        return Err(Error::usage(format!("derivations of w_{} and w_{}", d1.n(), d2.n())));
    }
    let mut acc: BTreeMap<MonomialDerivation, Scalar> = BTreeMap::new();
    let mut push = |c: u32, target: usize, drop: usize| {
        if c == 0 {
            return;
        }
        let mut m: Vec<u32> = d1.m.iter().zip(&d2.m).map(|(a, b)| a + b).collect();
        m[drop] -= 1;
        let key = MonomialDerivation::new(target, m);
        *acc.entry(key).or_insert_with(Scalar::zero) += q(c as i64);
    };
    push(d2.m[d1.i], d2.i, d1.i);
    let mut neg: BTreeMap<MonomialDerivation, Scalar> = BTreeMap::new();
    if d1.m[d2.i] > 0 {
        let mut m: Vec<u32> = d1.m.iter().zip(&d2.m).map(|(a, b)| a + b).collect();
        m[d2.i] -= 1;
        neg.insert(MonomialDerivation::new(d1.i, m), q(d1.m[d2.i] as i64));
    }
    for (k, c) in neg {
        *acc.entry(k).or_insert_with(Scalar::zero) -= c;
    }
    Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (c, k)).collect())
}

fn exponent_vectors(n: usize, total: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in exponent_vectors(n - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Which part of the `w_n` decomposition a basis derivation belongs to.
fn witt_part(d: &MonomialDerivation) -> &'static str {
    let total: u32 = d.m.iter().sum();
    match total {
        0 => "n_+",
        1 => {
            let j = d.m.iter().position(|&x| x == 1).unwrap();
            // x_j d_i is the matrix unit E_ji of gl_n
            match j.cmp(&d.i) {
                std::cmp::Ordering::Equal => "h",
                std::cmp::Ordering::Less => "n_+",
                std::cmp::Ordering::Greater => "n_-",
            }
        }
        _ => "n_-",
    }
}

/// `w_n` with polynomial coefficients of total degree at most `cap`.
fn witt_w(n: usize, cap: u32) -> Result<LiePresentation> {
    if cap < 1 {
        return Err(Error::usage("witt_w needs cap >= 1"));
    }
    let mut b = PresentationBuilder::new(format!("w_{n}"));
    let mut ders = Vec::new();
    for total in 0..=cap {
        for m in exponent_vectors(n, total) {
            for i in 0..n {
                ders.push(MonomialDerivation::new(i, m.clone()));
            }
        }
    }
    let pos: HashMap<MonomialDerivation, usize> = ders.iter().cloned().enumerate().map(|(k, d)| (d, k)).collect();
    for d in &ders {
        b.symbol(&d.tag(), Some(d.degree()))?;
    }
    for x in 0..ders.len() {
        for y in (x + 1)..ders.len() {
            let terms = witt_bracket(&ders[x], &ders[y])?;
            if terms.is_empty() {
                continue;
            }
            if terms.iter().any(|(_, d)| !pos.contains_key(d)) {
                b.overflow_idx(x, y)?;
            } else {
                b.bracket_idx(x, y, terms.iter().map(|(c, d)| (pos[d], c.clone())).collect())?;
            }
        }
    }
    b.window(-1, cap as i64 - 1)?;
    for part in ["n_-", "h", "n_+"] {
        let idx: Vec<usize> = ders.iter().enumerate().filter(|(_, d)| witt_part(d) == part).map(|(k, _)| k).collect();
        b.part_idx(part, idx)?;
    }
    b.build()
}

/// Outcome of [`jacobi_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiReport {
    pub checked: usize,
    pub overflowed: Vec<[String; 3]>,
    pub failures: Vec<[String; 3]>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the Jacobi identity on every basis triple whose brackets stay in the window.
pub fn jacobi_check(p: &LiePresentation) -> JacobiReport {
    let n = p.dim();
    let unit = |i: usize| Combo::from([(i, q(1))]);
    let mut report = JacobiReport { checked: 0, overflowed: Vec::new(), failures: Vec::new() };
    for x in 0..n {
        for y in (x + 1)..n {
            let xy = p.bracket_marked(x, y);
            for z in (y + 1)..n {
                let yz = p.bracket_marked(y, z);
                let zx = p.bracket_marked(z, x);
                let t1 = p.bracket_combo(&xy.value, &unit(z));
                let t2 = p.bracket_combo(&yz.value, &unit(x));
                let t3 = p.bracket_combo(&zx.value, &unit(y));
                let names = [p.tag(x).to_string(), p.tag(y).to_string(), p.tag(z).to_string()];
                if xy.overflow || yz.overflow || zx.overflow || t1.overflow || t2.overflow || t3.overflow {
                    report.overflowed.push(names);
                    continue;
                }
                report.checked += 1;
                let mut sum = t1.value;
                for (k, c) in t2.value.into_iter().chain(t3.value) {
                    add_term(&mut sum, k, &c);
                }
                if !sum.is_empty() {
                    report.failures.push(names);
                }
            }
        }
    }
    report
}

/// Per-part closure plus independence of the parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionReport {
    /// Part name with a witness pair when the part is not closed.
    pub closure: Vec<(String, Option<(String, String)>)>,
    pub disjoint: bool,
    pub covers_basis: bool,
    pub independent: bool,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.disjoint && self.covers_basis && self.independent && self.closure.iter().all(|(_, w)| w.is_none())
    }
}

/// Checks that the named parts are subalgebras and that their spans are independent.
pub fn decomposition_check(p: &LiePresentation, names: &[&str]) -> Result<DecompositionReport> {
    let mut seen = BTreeSet::new();
    let mut disjoint = true;
    let mut closure = Vec::new();
    let mut spans = Vec::new();
    for &name in names {
        let idx = p.part(name).ok_or_else(|| Error::usage(format!("unknown part {name:?}")))?;
        for &i in idx {
            disjoint &= seen.insert(i);
        }
        let members: BTreeSet<usize> = idx.iter().copied().collect();
        let mut witness = None;
        'outer: for &i in idx {
            for &j in idx {
                let br = p.bracket_marked(i, j);
                if br.value.keys().any(|k| !members.contains(k)) {
                    witness = Some((p.tag(i).to_string(), p.tag(j).to_string()));
                    break 'outer;
                }
            }
        }
        closure.push((name.to_string(), witness));
        let vecs: Vec<SparseVec> = idx.iter().map(|&i| SparseVec::from([(i, q(1))])).collect();
        spans.push(Subspace::spanned_by(p.dim(), vecs.iter()));
    }
    let total: usize = spans.iter().map(Subspace::dim).sum();
    let mut all = Subspace::new(p.dim());
    for s in &spans {
        for v in s.basis() {
            all.insert(&v);
        }
    }
    Ok(DecompositionReport { closure, disjoint, covers_basis: seen.len() == p.dim(), independent: all.dim() == total })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(i: usize) -> Combo {
        Combo::from([(i, q(1))])
    }

    #[test]
    fn solvable2d_bracket() {
        let p = catalog("solvable2d", &CatalogParams::default()).unwrap();
        let (a, b) = (p.lookup("a").unwrap(), p.lookup("b").unwrap());
        assert_eq!(p.bracket(a, b).unwrap().value, unit(b));
        assert_eq!(p.bracket(b, a).unwrap().value, Combo::from([(b, q(-1))]));
        assert!(jacobi_check(&p).passed());
    }

    #[test]
    fn heisenberg_brackets() {
        let p = catalog("heisenberg3d", &CatalogParams::default()).unwrap();
        let [a, b, c] = ["a", "b", "c"].map(|t| p.lookup(t).unwrap());
        assert_eq!(p.bracket(a, b).unwrap().value, unit(c));
        assert!(p.bracket(a, c).unwrap().value.is_empty());
        assert!(p.bracket(b, c).unwrap().value.is_empty());
    }

    #[test]
    fn v1_window_overflow_policy() {
        let p = catalog("v_n", &CatalogParams { n: Some(1), window: Some((1, 12)), ..Default::default() }).unwrap();
        assert_eq!(p.dim(), 12);
        let (e2, e5, e7) = (p.lookup("e2").unwrap(), p.lookup("e5").unwrap(), p.lookup("e7").unwrap());
        assert_eq!(p.bracket(e2, e5).unwrap().value, Combo::from([(e7, q(3))]));
        let e6 = p.lookup("e6").unwrap();
        assert!(matches!(p.bracket(e6, e7), Err(Error::Overflow(_))));
        let marked = p.with_mode(OverflowMode::Mark).bracket(e6, e7).unwrap();
        assert!(marked.overflow && marked.value.is_empty());
        let r = jacobi_check(&p);
        assert!(r.passed() && r.checked > 0 && !r.overflowed.is_empty());
    }

    #[test]
    fn corrupted_table_fails_jacobi() {
        let text = "basis x\nbasis y\nbasis z\nbracket x y = 1 z\nbracket y z = 1 x\nbracket x z = 1 x\n";
        let p = parse_presentation("bad", text).unwrap();
        let r = jacobi_check(&p);
        assert_eq!(r.failures, vec![["x".to_string(), "y".to_string(), "z".to_string()]]);
    }

    #[test]
    fn file_format_round_trip() {
        for name in ["solvable2d", "sl2", "borel_sl"] {
            let p = catalog(name, &CatalogParams { n: Some(3), ..Default::default() }).unwrap();
            let back = parse_presentation(p.name(), &p.to_text()).unwrap();
            assert_eq!(back, p);
        }
        let v = catalog("v_n", &CatalogParams { n: Some(1), window: Some((1, 6)), ..Default::default() }).unwrap();
        assert_eq!(parse_presentation(v.name(), &v.to_text()).unwrap(), v);
    }

    #[test]
    fn file_format_errors() {
        assert!(parse_presentation("x", "basis a\nfoo b\n").is_err());
        assert!(parse_presentation("x", "basis a\nbracket a b = 1 a\n").is_err());
        assert!(parse_presentation("x", "basis a degree=1\nbasis b\n").is_err());
        assert!(parse_presentation("x", "basis a degree=1\nbasis b degree=2\nbracket a b = 1 a\n").is_err());
    }

    #[test]
    fn witt_bracket_examples() {
        let d = MonomialDerivation::new(0, vec![0]);
        let xd = MonomialDerivation::new(0, vec![1]);
        assert_eq!(witt_bracket(&d, &xd).unwrap(), vec![(q(1), d.clone())]);
        assert!(witt_bracket(&xd, &xd).unwrap().is_empty());
        assert_eq!(MonomialDerivation::new(1, vec![2, 0, 1]).weight(), vec![2, -1, 1]);
        assert!(witt_bracket(&d, &MonomialDerivation::new(0, vec![0, 0])).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let w1 = catalog("witt_w", &CatalogParams { n: Some(1), cap: Some(5), ..Default::default() }).unwrap();
        assert!(decomposition_check(&w1, &["n_-", "h", "n_+"]).unwrap().passed());
        let vir = catalog("centerless_virasoro", &CatalogParams { window: Some((-4, 4)), ..Default::default() }).unwrap();
        assert!(decomposition_check(&vir, &["n_-", "h", "n_+"]).unwrap().passed());
        let s = catalog("solvable2d", &CatalogParams::default()).unwrap();
        assert!(decomposition_check(&s, &["a", "n"]).unwrap().passed());
    }

    #[test]
    fn borel_sl2_is_solvable2d() {
        let b = catalog("borel_sl", &CatalogParams { n: Some(2), ..Default::default() }).unwrap();
        let (h, e) = (b.lookup("h1").unwrap(), b.lookup("e12").unwrap());
        assert_eq!(b.bracket(h, e).unwrap().value, unit(e));
        assert_eq!(b.dim(), 2);
    }
}
