//! Sparse multivariate polynomials over exact rationals.
//!
//! `MultiPoly` stores a map from exponent vectors to nonzero coefficients.
//! The canonical form keeps the variable list sorted by a fixed global name
//! order, drops variables that no longer occur, and orders terms
//! graded-lexicographically. All arithmetic preserves canonical form.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::bigint::BigInt;
use num::Integer;
use num::{One, Zero};

use crate::scalar::ExactScalar;

/// The fixed global variable order. Names not listed sort after all listed
/// ones, alphabetically.
const VAR_ORDER: [&str; 14] = [
    "b0", "b1", "b2", "z0", "z1", "w0", "w1", "lambda", "t", "c", "l", "x", "y", "s",
];

fn var_rank(name: &str) -> (usize, &str) {
    match VAR_ORDER.iter().position(|v| *v == name) {
        Some(i) => (i, ""),
        None => (VAR_ORDER.len(), name),
    }
}

/// Compare variable names in the fixed global order.
pub fn var_cmp(a: &str, b: &str) -> Ordering {
    var_rank(a).cmp(&var_rank(b))
}

/// An exponent vector, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    fn total(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse multivariate polynomial in canonical form.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, ExactScalar>,
}

impl MultiPoly {
    // ---- Constructors ----

    pub fn zero() -> Self {
        MultiPoly {
            vars: Vec::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(ExactScalar::one())
    }

    pub fn constant(c: ExactScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(Vec::new()), c);
        }
        MultiPoly {
            vars: Vec::new(),
            terms,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(ExactScalar::from_int(n))
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(vec![1]), ExactScalar::one());
        MultiPoly {
            vars: vec![name.to_string()],
            terms,
        }
    }

    /// Builds a polynomial from `(coefficient, [(var, exponent)...])` terms.
    pub fn from_terms(terms: &[(ExactScalar, &[(&str, u32)])]) -> Self {
        let mut acc = MultiPoly::zero();
        for (c, monomial) in terms {
            let mut term = Self::constant(c.clone());
            for (v, e) in monomial.iter() {
                term = term.mul(&Self::var(v).pow(*e));
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Raw constructor used by deserialisation; canonicalises the input.
    pub fn from_raw(vars: Vec<String>, raw: Vec<(Vec<u32>, ExactScalar)>) -> Result<Self, String> {
        for (e, _) in &raw {
            if e.len() != vars.len() {
                return Err(format!(
                    "exponent vector length {} does not match {} variables",
                    e.len(),
                    vars.len()
                ));
            }
        }
        let mut p = MultiPoly {
            vars,
            terms: BTreeMap::new(),
        };
        for (e, c) in raw {
            if !c.is_zero() {
                let m = Monomial(e);
                let entry = p.terms.entry(m).or_insert_with(ExactScalar::zero);
                *entry += &c;
            }
        }
        p.terms.retain(|_, c| !c.is_zero());
        p.sort_vars();
        p.trim_vars();
        Ok(p)
    }

    // ---- Canonical form maintenance ----

    fn sort_vars(&mut self) {
        let mut order: Vec<usize> = (0..self.vars.len()).collect();
        order.sort_by(|&i, &j| var_cmp(&self.vars[i], &self.vars[j]));
        if order.iter().enumerate().all(|(i, &j)| i == j) {
            return;
        }
        let vars: Vec<String> = order.iter().map(|&i| self.vars[i].clone()).collect();
        let terms = std::mem::take(&mut self.terms);
        self.terms = terms
            .into_iter()
            .map(|(m, c)| (Monomial(order.iter().map(|&i| m.0[i]).collect()), c))
            .collect();
        self.vars = vars;
    }

    fn trim_vars(&mut self) {
        let n = self.vars.len();
        let mut used = vec![false; n];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        if used.iter().all(|&u| u) {
            return;
        }
        let keep: Vec<usize> = (0..n).filter(|&i| used[i]).collect();
        self.vars = keep.iter().map(|&i| self.vars[i].clone()).collect();
        let terms = std::mem::take(&mut self.terms);
        self.terms = terms
            .into_iter()
            .map(|(m, c)| (Monomial(keep.iter().map(|&i| m.0[i]).collect()), c))
            .collect();
    }

    /// Re-expresses `self` over the variable list `vars` (a superset).
    fn embed(&self, vars: &[String]) -> BTreeMap<Monomial, ExactScalar> {
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("superset"))
            .collect();
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u32; vars.len()];
                for (k, &i) in idx.iter().enumerate() {
                    e[i] = m.0[k];
                }
                (Monomial(e), c.clone())
            })
            .collect()
    }

    fn union_vars(a: &MultiPoly, b: &MultiPoly) -> Vec<String> {
        let mut set: BTreeSet<String> = a.vars.iter().cloned().collect();
        set.extend(b.vars.iter().cloned());
        let mut vars: Vec<String> = set.into_iter().collect();
        vars.sort_by(|x, y| var_cmp(x, y));
        vars
    }

    fn from_map(vars: Vec<String>, mut terms: BTreeMap<Monomial, ExactScalar>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        let mut p = MultiPoly { vars, terms };
        p.trim_vars();
        p
    }

    // ---- Basic queries ----

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactScalar)> {
        self.terms.iter()
    }

    /// Terms in canonical emission order: graded-lex, leading term first.
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Monomial, &ExactScalar)> {
        self.terms.iter().rev()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.total()).max()
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        match self.vars.iter().position(|v| v == var) {
            None => 0,
            Some(i) => self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0),
        }
    }

    pub fn as_constant(&self) -> Option<ExactScalar> {
        if self.is_zero() {
            return Some(ExactScalar::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.total() == 0 {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn leading(&self) -> Option<(&Monomial, &ExactScalar)> {
        self.terms.iter().next_back()
    }

    /// The leading rational coefficient under graded-lex.
    pub fn leading_coeff(&self) -> ExactScalar {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(ExactScalar::zero)
    }

    pub fn coeff_of(&self, vars_exps: &[(&str, u32)]) -> ExactScalar {
        let mut e = vec![0u32; self.vars.len()];
        for (v, k) in vars_exps {
            match self.vars.iter().position(|w| w == v) {
                Some(i) => e[i] = *k,
                None if *k == 0 => {}
                None => return ExactScalar::zero(),
            }
        }
        self.terms
            .get(&Monomial(e))
            .cloned()
            .unwrap_or_else(ExactScalar::zero)
    }

    // ---- Ring operations ----

    pub fn neg(&self) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let vars = Self::union_vars(self, other);
        let mut terms = self.embed(&vars);
        for (m, c) in other.embed(&vars) {
            let entry = terms.entry(m).or_insert_with(ExactScalar::zero);
            *entry += &c;
        }
        Self::from_map(vars, terms)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero();
        }
        let vars = Self::union_vars(self, other);
        let a = self.embed(&vars);
        let b = other.embed(&vars);
        let mut terms: BTreeMap<Monomial, ExactScalar> = BTreeMap::new();
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                let m = Monomial(ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect());
                let c = ca * cb;
                let entry = terms.entry(m).or_insert_with(ExactScalar::zero);
                *entry += &c;
            }
        }
        Self::from_map(vars, terms)
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = MultiPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    // ---- Exact division ----

    /// Exact polynomial division: returns `q` with `self = q·b`, or `None`
    /// when `self` is not a multiple of `b`.
    pub fn exact_divide(&self, b: &Self) -> Option<Self> {
        assert!(!b.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(MultiPoly::zero());
        }
        let vars = Self::union_vars(self, b);
        let mut r = self.embed(&vars);
        let bt = b.embed(&vars);
        let (bm, bc) = bt.iter().next_back().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut q: BTreeMap<Monomial, ExactScalar> = BTreeMap::new();
        while let Some((rm, rc)) = r.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if !bm.divides(&rm) {
                return None;
            }
            let qm = Monomial(rm.0.iter().zip(&bm.0).map(|(x, y)| x - y).collect());
            let qc = &rc / &bc;
            for (m, c) in &bt {
                let mm = Monomial(m.0.iter().zip(&qm.0).map(|(x, y)| x + y).collect());
                let delta = c * &qc;
                let entry = r.entry(mm).or_insert_with(ExactScalar::zero);
                *entry -= &delta;
            }
            r.retain(|_, c| !c.is_zero());
            q.insert(qm, qc);
        }
        Some(Self::from_map(vars, q))
    }

    /// Strips every factor of `f` that divides `self`, returning the
    /// quotient and the multiplicity removed.
    pub fn strip_factor(&self, f: &Self) -> (Self, u32) {
        let mut p = self.clone();
        let mut k = 0;
        if f.as_constant().is_some() {
            return (p, 0);
        }
        while let Some(q) = p.exact_divide(f) {
            p = q;
            k += 1;
            if p.is_zero() {
                break;
            }
        }
        (p, k)
    }

    // ---- Univariate views ----

    /// Coefficients `c_0..c_d` (in the remaining variables) with
    /// `self = Σ c_i · var^i`.
    pub fn univariate_view(&self, var: &str) -> Vec<MultiPoly> {
        let Some(vi) = self.vars.iter().position(|v| v == var) else {
            return vec![self.clone()];
        };
        let d = self.degree_in(var) as usize;
        let mut coeffs: Vec<BTreeMap<Monomial, ExactScalar>> = vec![BTreeMap::new(); d + 1];
        let rest: Vec<String> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != vi)
            .map(|(_, v)| v.clone())
            .collect();
        for (m, c) in &self.terms {
            let e = m.0[vi] as usize;
            let mut rm: Vec<u32> = m.0.clone();
            rm.remove(vi);
            coeffs[e].insert(Monomial(rm), c.clone());
        }
        coeffs
            .into_iter()
            .map(|t| Self::from_map(rest.clone(), t))
            .collect()
    }

    /// Rebuilds `Σ coeffs[i] · var^i`.
    pub fn from_univariate(var: &str, coeffs: &[MultiPoly]) -> MultiPoly {
        let v = MultiPoly::var(var);
        let mut acc = MultiPoly::zero();
        for (i, c) in coeffs.iter().enumerate() {
            acc = acc.add(&c.mul(&v.pow(i as u32)));
        }
        acc
    }

    // ---- Substitution and evaluation ----

    /// Simultaneous substitution of polynomials for variables.
    pub fn subst(&self, map: &BTreeMap<String, MultiPoly>) -> MultiPoly {
        if self.vars.iter().all(|v| !map.contains_key(v)) {
            return self.clone();
        }
        // Cache powers of each image.
        let mut powers: BTreeMap<usize, Vec<MultiPoly>> = BTreeMap::new();
        for (i, v) in self.vars.iter().enumerate() {
            if let Some(img) = map.get(v) {
                let d = self.degree_in(v);
                let mut ps = vec![MultiPoly::one()];
                for k in 1..=d {
                    let next = ps[(k - 1) as usize].mul(img);
                    ps.push(next);
                }
                powers.insert(i, ps);
            }
        }
        let mut acc = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(c.clone());
            let mut kept: Vec<(String, u32)> = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if let Some(ps) = powers.get(&i) {
                    term = term.mul(&ps[e as usize]);
                } else {
                    kept.push((self.vars[i].clone(), e));
                }
            }
            for (v, e) in kept {
                term = term.mul(&MultiPoly::var(&v).pow(e));
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Substitutes scalars for some variables.
    pub fn eval_partial(&self, assign: &BTreeMap<String, ExactScalar>) -> MultiPoly {
        let map: BTreeMap<String, MultiPoly> = assign
            .iter()
            .map(|(v, c)| (v.clone(), MultiPoly::constant(c.clone())))
            .collect();
        self.subst(&map)
    }

    /// Full evaluation; panics if a variable is missing from `assign`.
    pub fn eval(&self, assign: &BTreeMap<String, ExactScalar>) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    let v = assign
                        .get(&self.vars[i])
                        .unwrap_or_else(|| panic!("missing assignment for {}", self.vars[i]));
                    t = &t * &v.pow(e);
                }
            }
            acc += &t;
        }
        acc
    }

    pub fn derivative(&self, var: &str) -> MultiPoly {
        let Some(vi) = self.vars.iter().position(|v| v == var) else {
            return MultiPoly::zero();
        };
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[vi];
            if e == 0 {
                continue;
            }
            let mut em = m.0.clone();
            em[vi] = e - 1;
            terms.insert(Monomial(em), c * &ExactScalar::from_int(e as i64));
        }
        Self::from_map(self.vars.clone(), terms)
    }

    /// Replaces `var^(2k+r)` by `rhs^k · var^r`; `rhs` must not involve `var`.
    pub fn reduce_square(&self, var: &str, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(rhs.degree_in(var), 0, "reduction rhs must not contain var");
        let coeffs = self.univariate_view(var);
        let mut acc = MultiPoly::zero();
        let v = MultiPoly::var(var);
        for (e, c) in coeffs.iter().enumerate() {
            let k = (e / 2) as u32;
            let r = (e % 2) as u32;
            acc = acc.add(&c.mul(&rhs.pow(k)).mul(&v.pow(r)));
        }
        acc
    }

    // ---- Content and normalisation ----

    /// The positive rational content (gcd of coefficients over ℚ).
    pub fn content(&self) -> ExactScalar {
        if self.is_zero() {
            return ExactScalar::zero();
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        ExactScalar::from_big(num, den)
    }

    /// Divides by the content and makes the graded-lex leading coefficient
    /// positive. Zero stays zero.
    pub fn primitive_part(&self) -> MultiPoly {
        if self.is_zero() {
            return MultiPoly::zero();
        }
        let mut c = self.content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        let inv = c.recip();
        self.scale(&inv)
    }

    /// The common monomial factor of all terms, as exponents per variable.
    pub fn monomial_content(&self) -> Vec<(String, u32)> {
        if self.is_zero() {
            return Vec::new();
        }
        let n = self.vars.len();
        let mut mins = vec![u32::MAX; n];
        for m in self.terms.keys() {
            for (lo, &e) in mins.iter_mut().zip(&m.0) {
                *lo = (*lo).min(e);
            }
        }
        self.vars
            .iter()
            .zip(mins)
            .filter(|(_, e)| *e > 0)
            .map(|(v, e)| (v.clone(), e))
            .collect()
    }

    /// Divides out the common monomial factor.
    pub fn strip_monomial_content(&self) -> MultiPoly {
        let mc = self.monomial_content();
        let mut p = self.clone();
        for (v, e) in mc {
            let q = p
                .exact_divide(&MultiPoly::var(&v).pow(e))
                .expect("monomial content divides");
            p = q;
        }
        p
    }

    // ---- Homogeneity ----

    /// Total degree in the given variable subset if homogeneous in it.
    pub fn homogeneous_degree_in(&self, vars: &[&str]) -> Option<u64> {
        let idx: Vec<Option<usize>> = vars
            .iter()
            .map(|v| self.vars.iter().position(|w| w == v))
            .collect();
        let mut deg: Option<u64> = None;
        for m in self.terms.keys() {
            let d: u64 = idx
                .iter()
                .map(|i| i.map(|i| m.0[i] as u64).unwrap_or(0))
                .sum();
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return None,
                _ => {}
            }
        }
        deg.or(Some(0))
    }

    // ---- Randomised identity pre-checks ----

    /// Evaluates at the given rational point (variables not in `assign`
    /// default to the listed fallbacks). Used for fast non-identity spot
    /// checks; the exact canonical-form comparison stays authoritative.
    pub fn spot_eval(&self, assign: &BTreeMap<String, ExactScalar>) -> ExactScalar {
        let mut full = assign.clone();
        for v in &self.vars {
            full.entry(v.clone())
                .or_insert_with(|| ExactScalar::from_int(1));
        }
        self.eval(&full)
    }
}

// ---- gcd machinery ----

/// Pseudo-remainder of `a` by `b` viewed univariately in `var`
/// (`lc(b)^(da-db+1) · a  mod  b`).
fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, var: &str) -> MultiPoly {
    let da = a.degree_in(var);
    let db = b.degree_in(var);
    assert!(db >= 1 && da >= db);
    let bc = b.univariate_view(var);
    let lcb = bc.last().unwrap().clone();
    let mut r = a.clone();
    // Multiply through once per reduction step to keep sizes down.
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let rc = r.univariate_view(var);
        let lcr = rc.last().unwrap().clone();
        let shift = MultiPoly::var(var).pow(dr - db);
        r = r.mul(&lcb).sub(&b.mul(&lcr).mul(&shift));
    }
    r
}

/// Content of `p` viewed univariately in `var`: the gcd of its coefficients.
fn content_in(p: &MultiPoly, var: &str) -> MultiPoly {
    let coeffs = p.univariate_view(var);
    let mut g = MultiPoly::zero();
    for c in &coeffs {
        if c.is_zero() {
            continue;
        }
        g = if g.is_zero() { c.clone() } else { gcd(&g, c) };
        if g.as_constant().is_some() {
            return MultiPoly::one();
        }
    }
    if g.is_zero() {
        MultiPoly::one()
    } else {
        g.primitive_part()
    }
}

fn primitive_in(p: &MultiPoly, var: &str) -> MultiPoly {
    let c = content_in(p, var);
    if c.as_constant().is_some() {
        return p.primitive_part();
    }
    p.exact_divide(&c).expect("content divides").primitive_part()
}

/// Degree bound for `deg_var gcd(a, b)` from a random rational
/// specialisation of the other variables. Zero means "no common factor
/// involving `var`" is very likely; the exact PRS below stays authoritative.
fn gcd_degree_bound(a: &MultiPoly, b: &MultiPoly, var: &str, salt: u64) -> u32 {
    let mut assign = BTreeMap::new();
    let mut k = salt.wrapping_mul(6364136223846793005).wrapping_add(1) % 997;
    for v in a.variables().iter().chain(b.variables()) {
        if v != var && !assign.contains_key(v) {
            k = k.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            assign.insert(v.clone(), ExactScalar::from_int(((k % 2000) as i64) - 1000));
        }
    }
    let ua: Vec<ExactScalar> = a
        .univariate_view(var)
        .iter()
        .map(|c| c.spot_eval(&assign))
        .collect();
    let ub: Vec<ExactScalar> = b
        .univariate_view(var)
        .iter()
        .map(|c| c.spot_eval(&assign))
        .collect();
    // Degenerate specialisation (leading coefficient vanished): give up on
    // the shortcut and report the trivial bound.
    if ua.last().map(|c| c.is_zero()).unwrap_or(true)
        || ub.last().map(|c| c.is_zero()).unwrap_or(true)
    {
        return a.degree_in(var).min(b.degree_in(var));
    }
    univariate_scalar_gcd_degree(&ua, &ub)
}

fn univariate_scalar_gcd_degree(a: &[ExactScalar], b: &[ExactScalar]) -> u32 {
    let trim = |v: &[ExactScalar]| {
        let mut v = v.to_vec();
        while v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
        v
    };
    let mut f = trim(a);
    let mut g = trim(b);
    while !g.is_empty() {
        if f.len() < g.len() {
            std::mem::swap(&mut f, &mut g);
            continue;
        }
        // f mod g
        let lg = g.last().unwrap().clone();
        while f.len() >= g.len() && !f.is_empty() {
            let lf = f.last().unwrap().clone();
            let q = &lf / &lg;
            let shift = f.len() - g.len();
            for (i, c) in g.iter().enumerate() {
                let delta = c * &q;
                f[shift + i] = &f[shift + i] - &delta;
            }
            while f.last().map(|c| c.is_zero()).unwrap_or(false) {
                f.pop();
            }
        }
        std::mem::swap(&mut f, &mut g);
    }
    if f.is_empty() {
        0
    } else {
        (f.len() - 1) as u32
    }
}

/// A common divisor of `a` and `b` over ℚ, primitive and with positive
/// leading coefficient. Computed per the normalisation rule: monomial gcd,
/// then for each shared variable the univariate gcd (primitive polynomial
/// remainder sequence over the other variables) confirmed by trial exact
/// division. Sound by construction (every returned factor divides both
/// inputs exactly); complete at the degrees used in this crate.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.primitive_part();
    }
    if b.is_zero() {
        return a.primitive_part();
    }
    let mut pa = a.strip_monomial_content().primitive_part();
    let mut pb = b.strip_monomial_content().primitive_part();
    let mut g = MultiPoly::one();
    // Shared monomial factor.
    let ma: BTreeMap<String, u32> = a.monomial_content().into_iter().collect();
    for (v, e) in b.monomial_content() {
        if let Some(&ea) = ma.get(&v) {
            g = g.mul(&MultiPoly::var(&v).pow(e.min(ea)));
        }
    }
    if pa.as_constant().is_some() || pb.as_constant().is_some() {
        return g;
    }
    let shared: Vec<String> = pa
        .variables()
        .iter()
        .filter(|v| pb.degree_in(v) > 0 && pa.degree_in(v) > 0)
        .cloned()
        .collect();
    let mut salt = 0u64;
    for v in shared {
        salt += 1;
        if pa.degree_in(&v) == 0 || pb.degree_in(&v) == 0 {
            continue;
        }
        if gcd_degree_bound(&pa, &pb, &v, salt) == 0 {
            continue;
        }
        let cand = prs_gcd_in(&pa, &pb, &v);
        if cand.as_constant().is_some() {
            continue;
        }
        if let (Some(qa), Some(qb)) = (pa.exact_divide(&cand), pb.exact_divide(&cand)) {
            g = g.mul(&cand);
            pa = qa;
            pb = qb;
            if pa.as_constant().is_some() || pb.as_constant().is_some() {
                break;
            }
        }
    }
    g.primitive_part()
}

/// Univariate gcd candidate in `var` via a primitive PRS.
fn prs_gcd_in(a: &MultiPoly, b: &MultiPoly, var: &str) -> MultiPoly {
    let mut f = primitive_in(a, var);
    let mut h = primitive_in(b, var);
    if f.degree_in(var) < h.degree_in(var) {
        std::mem::swap(&mut f, &mut h);
    }
    loop {
        if h.degree_in(var) == 0 {
            return MultiPoly::one();
        }
        let r = pseudo_rem(&f, &h, var);
        if r.is_zero() {
            return primitive_in(&h, var);
        }
        if r.degree_in(var) == 0 {
            return MultiPoly::one();
        }
        f = h;
        h = primitive_in(&r, var);
    }
}

/// gcd of a list.
pub fn gcd_many(polys: &[MultiPoly]) -> MultiPoly {
    let mut g = MultiPoly::zero();
    for p in polys {
        g = if g.is_zero() { p.clone() } else { gcd(&g, p) };
        if g.as_constant().is_some() && !g.is_zero() {
            return MultiPoly::one();
        }
    }
    if g.is_zero() {
        MultiPoly::zero()
    } else {
        g.primitive_part()
    }
}

/// Divides every entry by the common polynomial gcd and by the rational
/// content of the tuple; used to normalise map components.
pub fn strip_common_factors(polys: &[MultiPoly]) -> Vec<MultiPoly> {
    let g = gcd_many(polys);
    let stripped: Vec<MultiPoly> = if g.is_zero() || g.as_constant().is_some() {
        polys.to_vec()
    } else {
        polys
            .iter()
            .map(|p| p.exact_divide(&g).expect("gcd divides"))
            .collect()
    };
    // Shared rational content.
    let mut c = ExactScalar::zero();
    for p in &stripped {
        if p.is_zero() {
            continue;
        }
        let pc = p.content();
        c = if c.is_zero() {
            pc
        } else {
            let num = c.numer().gcd(pc.numer());
            let den = c.denom().lcm(pc.denom());
            ExactScalar::from_big(num, den)
        };
    }
    if c.is_zero() || c.is_one() {
        return stripped;
    }
    let inv = c.recip();
    stripped.iter().map(|p| p.scale(&inv)).collect()
}

// ---- Resultants ----

/// Errors from resultant/discriminant computations.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ResultantError {
    #[error("degree too small: need degree >= 1 in the elimination variable")]
    DegreeTooSmall,
}

/// Fraction-free (Bareiss) determinant of a square polynomial matrix.
pub fn poly_det(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        return MultiPoly::one();
    }
    let mut a: Vec<Vec<MultiPoly>> = m.to_vec();
    let mut sign = false;
    let mut prev = MultiPoly::one();
    for k in 0..n - 1 {
        // Pivot: prefer the shortest nonzero entry in column k.
        let pivot = (k..n)
            .filter(|&i| !a[i][k].is_zero())
            .min_by_key(|&i| a[i][k].num_terms());
        let Some(p) = pivot else {
            return MultiPoly::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num
                    .exact_divide(&prev)
                    .expect("Bareiss divisibility");
            }
            a[i][k] = MultiPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

/// Sylvester resultant of `p` and `q` with respect to `var`.
pub fn resultant(p: &MultiPoly, q: &MultiPoly, var: &str) -> Result<MultiPoly, ResultantError> {
    let dp = p.degree_in(var) as usize;
    let dq = q.degree_in(var) as usize;
    if dp == 0 || dq == 0 {
        return Err(ResultantError::DegreeTooSmall);
    }
    let pc = p.univariate_view(var);
    let qc = q.univariate_view(var);
    let n = dp + dq;
    let mut m = vec![vec![MultiPoly::zero(); n]; n];
    for i in 0..dq {
        for (j, c) in pc.iter().enumerate() {
            m[i][i + dp - j] = c.clone();
        }
    }
    for i in 0..dp {
        for (j, c) in qc.iter().enumerate() {
            m[dq + i][i + dq - j] = c.clone();
        }
    }
    Ok(poly_det(&m))
}

/// Discriminant with the fixed sign convention
/// `disc(p) = (−1)^{d(d−1)/2} · resultant(p, p′) / lead(p)`.
pub fn discriminant(p: &MultiPoly, var: &str) -> Result<MultiPoly, ResultantError> {
    let d = p.degree_in(var);
    if d < 1 {
        return Err(ResultantError::DegreeTooSmall);
    }
    if d == 1 {
        return Ok(MultiPoly::one());
    }
    let dp = p.derivative(var);
    let res = resultant(p, &dp, var)?;
    let lead = p.univariate_view(var).last().unwrap().clone();
    let q = res.exact_divide(&lead).expect("lead divides res(p, p')");
    let sign = (d as u64) * (d as u64 - 1) / 2;
    Ok(if sign % 2 == 1 { q.neg() } else { q })
}

// ---- Display ----

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms_desc() {
            let mut mono = String::new();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                mono.push_str(&self.vars[i]);
                if e > 1 {
                    mono.push_str(&format!("^{e}"));
                }
            }
            let neg = c.is_negative();
            let ca = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mono.is_empty() {
                write!(f, "{ca}")?;
            } else if ca.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{ca}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z() -> MultiPoly {
        MultiPoly::var("z0")
    }
    fn w() -> MultiPoly {
        MultiPoly::var("w0")
    }

    #[test]
    fn additive_cancellation() {
        // (z + 1) + (z − 1) = 2z
        let p = z().add(&MultiPoly::one());
        let q = z().sub(&MultiPoly::one());
        assert_eq!(p.add(&q), z().scale(&ExactScalar::from_int(2)));
    }

    #[test]
    fn difference_of_squares() {
        let p = z().sub(&w()).mul(&z().add(&w()));
        assert_eq!(p, z().pow(2).sub(&w().pow(2)));
    }

    #[test]
    fn absorbing_zero() {
        let p = z().pow(3).add(&w()).sub(&MultiPoly::from_int(7));
        assert!(p.mul(&MultiPoly::zero()).is_zero());
    }

    #[test]
    fn exact_divide_basics() {
        let num = z().pow(2).sub(&w().pow(2));
        let den = z().sub(&w());
        assert_eq!(num.exact_divide(&den).unwrap(), z().add(&w()));
        let bad = z().pow(2).add(&MultiPoly::one());
        assert_eq!(bad.exact_divide(&z().sub(&MultiPoly::one())), None);
    }

    #[test]
    fn univariate_view_collects() {
        // z0^2*w0 + z0, viewed in z0 -> [0, 1, w0]
        let p = z().pow(2).mul(&w()).add(&z());
        let view = p.univariate_view("z0");
        assert_eq!(view.len(), 3);
        assert!(view[0].is_zero());
        assert_eq!(view[1], MultiPoly::one());
        assert_eq!(view[2], w());
        assert_eq!(MultiPoly::from_univariate("z0", &view), p);
        let c = MultiPoly::from_int(5);
        assert_eq!(c.univariate_view("z0"), vec![MultiPoly::from_int(5)]);
    }

    #[test]
    fn resultant_and_discriminant() {
        // disc(w^2 - 1) = 4
        let p = w().pow(2).sub(&MultiPoly::one());
        assert_eq!(discriminant(&p, "w0").unwrap(), MultiPoly::from_int(4));
        // resultant(z - a, z - b) = a - b  (up to the matrix convention sign)
        let a = MultiPoly::var("lambda");
        let b = MultiPoly::var("t");
        let r = resultant(&z().sub(&a), &z().sub(&b), "z0").unwrap();
        assert!(r == a.sub(&b) || r == b.sub(&a));
        assert_eq!(
            resultant(&MultiPoly::one(), &z(), "z0"),
            Err(ResultantError::DegreeTooSmall)
        );
    }

    #[test]
    fn gcd_finds_shared_factor() {
        let f = z().sub(&w());
        let a = f.mul(&z().add(&MultiPoly::one()));
        let b = f.mul(&w().pow(2).add(&MultiPoly::from_int(3)));
        let g = gcd(&a, &b);
        assert_eq!(g, f.primitive_part());
    }

    #[test]
    fn strip_common_factors_normalises() {
        let f = z().add(&w());
        let ps = vec![
            f.mul(&z()).scale(&ExactScalar::from_int(2)),
            f.mul(&w()).scale(&ExactScalar::from_int(2)),
        ];
        let s = strip_common_factors(&ps);
        assert_eq!(s[0], z());
        assert_eq!(s[1], w());
    }

    #[test]
    fn reduce_square_replaces_even_powers() {
        // y^3 -> y * rhs where rhs = x
        let y = MultiPoly::var("y");
        let x = MultiPoly::var("x");
        let p = y.pow(3);
        assert_eq!(p.reduce_square("y", &x), y.mul(&x));
    }

    #[test]
    fn homogeneity_check() {
        let p = z().pow(2).mul(&w()).add(&z().mul(&MultiPoly::var("z1")).mul(&w()));
        assert_eq!(p.homogeneous_degree_in(&["z0", "z1"]), Some(2));
        assert_eq!(p.homogeneous_degree_in(&["z0"]), None);
    }

    fn small_poly() -> impl Strategy<Value = MultiPoly> {
        let term = (
            -6i64..7,
            0u32..3,
            0u32..3,
        )
            .prop_map(|(c, e0, e1)| {
                MultiPoly::from_int(c)
                    .mul(&MultiPoly::var("z0").pow(e0))
                    .mul(&MultiPoly::var("w0").pow(e1))
            });
        proptest::collection::vec(term, 0..5)
            .prop_map(|ts| ts.iter().fold(MultiPoly::zero(), |a, t| a.add(t)))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn multiply_then_divide_round_trips(q in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            let p = q.mul(&b);
            prop_assert_eq!(p.exact_divide(&b).unwrap(), q);
        }

        #[test]
        fn canonical_form_is_stable(a in small_poly()) {
            // Rebuilding from raw parts reproduces the same canonical value.
            let raw: Vec<(Vec<u32>, ExactScalar)> = a
                .terms()
                .map(|(m, c)| (m.0.clone(), c.clone()))
                .collect();
            let rebuilt = MultiPoly::from_raw(a.variables().to_vec(), raw).unwrap();
            prop_assert_eq!(rebuilt, a);
        }
    }

    #[test]
    fn resultant_vanishes_iff_common_root_spot_check() {
        // (z - a)(z - 1) and (z - a)(z + 2) share the root a.
        let a = MultiPoly::var("lambda");
        let p = z().sub(&a).mul(&z().sub(&MultiPoly::one()));
        let q = z().sub(&a).mul(&z().add(&MultiPoly::from_int(2)));
        let r = resultant(&p, &q, "z0").unwrap();
        assert!(r.is_zero());
        // Perturbed: no common root generically.
        let q2 = z().sub(&a.add(&MultiPoly::one())).mul(&z().add(&MultiPoly::from_int(2)));
        let r2 = resultant(&p, &q2, "z0").unwrap();
        assert!(!r2.is_zero());
        // p = (z-a)(z-1) and q2 = (z-a-1)(z+2) share a root only at a = -2
        // (common root -2) and a = 0 (common root 1).
        for k in 0..20 {
            let a = k - 10;
            let mut assign = BTreeMap::new();
            assign.insert("lambda".to_string(), ExactScalar::from_int(a));
            let vanished = r2.spot_eval(&assign).is_zero();
            assert_eq!(vanished, a == -2 || a == 0, "wrong vanishing at a = {a}");
        }
    }
}
