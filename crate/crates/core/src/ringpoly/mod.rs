//! Sparse multivariate (Laurent) polynomials over GF(2^k).

mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::gf2k::{FieldElem, FieldSpec};

pub(crate) use parse::parse_matrix_text;

/// Exponent vector, one entry per ring variable.
pub type Exponents = SmallVec<[i32; 4]>;

struct RingInner {
    field: FieldSpec,
    vars: Vec<String>,
    laurent: Vec<bool>,
}

/// Coefficient field, ordered variable names and per-variable Laurent flags.
#[derive(Clone)]
pub struct Ring(Arc<RingInner>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field && self.0.vars == other.0.vars && self.0.laurent == other.0.laurent)
    }
}

impl Eq for Ring {}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Ring {
    pub fn new<S: AsRef<str>>(field: FieldSpec, vars: &[S], laurent: &[bool]) -> Result<Ring> {
        if vars.len() != laurent.len() {
            return Err(Error::InvalidRing(format!(
                "{} variables but {} Laurent flags",
                vars.len(),
                laurent.len()
            )));
        }
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if !valid_identifier(v) {
                return Err(Error::InvalidRing(format!("bad variable name `{v}`")));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidRing(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Ring(Arc::new(RingInner {
            field,
            vars,
            laurent: laurent.to_vec(),
        })))
    }

    /// Every variable invertible.
    pub fn laurent<S: AsRef<str>>(field: FieldSpec, vars: &[S]) -> Result<Ring> {
        Ring::new(field, vars, &vec![true; vars.len()])
    }

    /// No variable invertible.
    pub fn polynomial<S: AsRef<str>>(field: FieldSpec, vars: &[S]) -> Result<Ring> {
        Ring::new(field, vars, &vec![false; vars.len()])
    }

    pub fn field(&self) -> &FieldSpec {
        &self.0.field
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn laurent_flags(&self) -> &[bool] {
        &self.0.laurent
    }

    pub fn is_laurent(&self, i: usize) -> bool {
        self.0.laurent[i]
    }

    pub fn has_laurent_vars(&self) -> bool {
        self.0.laurent.iter().any(|&l| l)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    /// Same variables with every Laurent flag cleared.
    pub fn polynomial_version(&self) -> Ring {
        Ring::polynomial(self.field().clone(), self.vars()).unwrap()
    }

    pub fn with_field(&self, field: FieldSpec) -> Ring {
        Ring::new(field, self.vars(), self.laurent_flags()).unwrap()
    }

    /// Parses the MF-file ring line body: `x,y laurent:1,1`.
    pub fn parse_descriptor(field: FieldSpec, text: &str) -> Result<Ring> {
        let text = text.trim();
        let (vars, flags) = match text.split_once("laurent:") {
            Some((v, f)) => (v.trim(), Some(f.trim())),
            None => (text, None),
        };
        let vars: Vec<&str> = vars.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        let flags = match flags {
            None => vec![false; vars.len()],
            Some(f) => f
                .split(',')
                .map(|s| match s.trim() {
                    "1" | "true" => Ok(true),
                    "0" | "false" => Ok(false),
                    other => Err(Error::InvalidRing(format!("bad Laurent flag `{other}`"))),
                })
                .collect::<Result<Vec<bool>>>()?,
        };
        Ring::new(field, &vars, &flags)
    }

    pub(crate) fn check_exponents(&self, e: &[i32]) -> Result<()> {
        for (i, &a) in e.iter().enumerate() {
            if a < 0 && !self.is_laurent(i) {
                return Err(Error::NegativeExponent(self.0.vars[i].clone()));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[{}]", self.field(), self)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flags: Vec<&str> = self
            .laurent_flags()
            .iter()
            .map(|&l| if l { "1" } else { "0" })
            .collect();
        write!(f, "{} laurent:{}", self.vars().join(","), flags.join(","))
    }
}

/// Graded reverse lexicographic comparison (total degree, then the smaller
/// exponent in the last differing variable wins). Translation invariant, so
/// it orders Laurent monomials consistently with any nonnegative shift.
pub fn grevlex_cmp(a: &[i32], b: &[i32]) -> Ordering {
    let da: i64 = a.iter().map(|&x| x as i64).sum();
    let db: i64 = b.iter().map(|&x| x as i64).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

fn add_exponents(a: &[i32], b: &[i32]) -> Exponents {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.checked_add(*y).expect("exponent overflow"))
        .collect()
}

/// A polynomial: a finite map from exponent vectors to nonzero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct RingPoly {
    ring: Ring,
    terms: BTreeMap<Exponents, u8>,
}

impl RingPoly {
    pub fn zero(ring: &Ring) -> Self {
        RingPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant_raw(ring, 1)
    }

    pub(crate) fn constant_raw(ring: &Ring, c: u8) -> Self {
        let mut p = Self::zero(ring);
        if c != 0 {
            p.terms.insert(SmallVec::from_elem(0, ring.nvars()), c);
        }
        p
    }

    pub fn constant(ring: &Ring, c: &FieldElem) -> Result<Self> {
        if c.spec() != ring.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(Self::constant_raw(ring, c.raw()))
    }

    /// `x_i`.
    pub fn var(ring: &Ring, i: usize) -> Self {
        let mut e = SmallVec::from_elem(0, ring.nvars());
        e[i] = 1;
        Self::monomial_raw(ring, e, 1)
    }

    /// The monomial `coeff * z^exps`; fails on negative exponents of non-Laurent variables.
    pub fn monomial(ring: &Ring, exps: &[i32], coeff: &FieldElem) -> Result<Self> {
        if exps.len() != ring.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "exponent vector of length {} in a ring with {} variables",
                exps.len(),
                ring.nvars()
            )));
        }
        if coeff.spec() != ring.field() {
            return Err(Error::FieldMismatch);
        }
        ring.check_exponents(exps)?;
        Ok(Self::monomial_raw(ring, exps.into(), coeff.raw()))
    }

    pub(crate) fn monomial_raw(ring: &Ring, exps: Exponents, coeff: u8) -> Self {
        let mut p = Self::zero(ring);
        if coeff != 0 {
            p.terms.insert(exps, coeff);
        }
        p
    }

    pub(crate) fn from_terms_raw(ring: &Ring, terms: impl IntoIterator<Item = (Exponents, u8)>) -> Self {
        let mut p = Self::zero(ring);
        for (e, c) in terms {
            p.add_term_raw(e, c);
        }
        p
    }

    pub fn parse(text: &str, ring: &Ring) -> Result<Self> {
        parse::parse_poly(text, ring)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().all(|(e, &c)| c == 1 && e.iter().all(|&x| x == 0))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in storage (lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, FieldElem)> + '_ {
        let f = self.ring.field();
        self.terms.iter().map(move |(e, &c)| (e, FieldElem::from_raw(f, c)))
    }

    pub(crate) fn raw_terms(&self) -> impl Iterator<Item = (&Exponents, u8)> + '_ {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coeff(&self, exps: &[i32]) -> FieldElem {
        let c = self.terms.get(exps).copied().unwrap_or(0);
        FieldElem::from_raw(self.ring.field(), c)
    }

    /// Terms sorted by the canonical order, largest first.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, u8)> {
        let mut ts: Vec<_> = self.raw_terms().collect();
        ts.sort_by(|a, b| grevlex_cmp(b.0, a.0));
        ts
    }

    pub fn leading_term(&self) -> Option<(&Exponents, u8)> {
        self.raw_terms().max_by(|a, b| grevlex_cmp(a.0, b.0))
    }

    pub(crate) fn add_term_raw(&mut self, e: Exponents, c: u8) {
        if c == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = *o.get() ^ c;
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn checked_add(&self, other: &RingPoly) -> Result<RingPoly> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let (mut big, small) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (e, &c) in &small.terms {
            big.add_term_raw(e.clone(), c);
        }
        Ok(big)
    }

    pub fn checked_mul(&self, other: &RingPoly) -> Result<RingPoly> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let f = self.ring.field();
        let mut out = RingPoly::zero(&self.ring);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                out.add_term_raw(add_exponents(ea, eb), f.mul_raw(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElem) -> RingPoly {
        assert!(c.spec() == self.ring.field(), "field mismatch");
        self.scale_raw(c.raw())
    }

    pub(crate) fn scale_raw(&self, c: u8) -> RingPoly {
        if c == 0 {
            return RingPoly::zero(&self.ring);
        }
        let f = self.ring.field();
        RingPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, &a)| (e.clone(), f.mul_raw(a, c))).collect(),
        }
    }

    /// Multiplies by the monomial `z^shift` (a unit when every shifted
    /// variable is Laurent). Panics if a non-Laurent exponent goes negative.
    pub fn shift(&self, shift: &[i32]) -> RingPoly {
        let terms: BTreeMap<Exponents, u8> = self.terms.iter().map(|(e, &c)| (add_exponents(e, shift), c)).collect();
        for e in terms.keys() {
            self.ring
                .check_exponents(e)
                .expect("monomial shift left the polynomial ring");
        }
        RingPoly {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn pow(&self, n: u32) -> RingPoly {
        let mut acc = RingPoly::one(&self.ring);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative in variable `i`: `z_i^a -> (a mod 2) z_i^(a-1)`.
    pub fn partial(&self, i: usize) -> RingPoly {
        let mut out = RingPoly::zero(&self.ring);
        for (e, &c) in &self.terms {
            if e[i].rem_euclid(2) == 1 {
                let mut d = e.clone();
                d[i] -= 1;
                out.add_term_raw(d, c);
            }
        }
        out
    }

    /// Per-variable minimum exponent over the support (zeros for the zero polynomial).
    pub fn min_exponents(&self) -> Exponents {
        let n = self.ring.nvars();
        let mut it = self.terms.keys();
        match it.next() {
            None => SmallVec::from_elem(0, n),
            Some(first) => it.fold(first.clone(), |mut acc, e| {
                for (a, &b) in acc.iter_mut().zip(e) {
                    *a = (*a).min(b);
                }
                acc
            }),
        }
    }

    pub fn max_exponents(&self) -> Exponents {
        let n = self.ring.nvars();
        let mut it = self.terms.keys();
        match it.next() {
            None => SmallVec::from_elem(0, n),
            Some(first) => it.fold(first.clone(), |mut acc, e| {
                for (a, &b) in acc.iter_mut().zip(e) {
                    *a = (*a).max(b);
                }
                acc
            }),
        }
    }

    /// Substitutes `point` (coordinates over `point`'s field, which must
    /// contain this ring's field). Negative exponents invert.
    pub fn evaluate(&self, point: &[FieldElem]) -> Result<FieldElem> {
        if point.len() != self.ring.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, ring has {} variables",
                point.len(),
                self.ring.nvars()
            )));
        }
        let target = match point.first() {
            Some(p) => p.spec().clone(),
            None => self.ring.field().clone(),
        };
        if point.iter().any(|p| p.spec() != &target) {
            return Err(Error::FieldMismatch);
        }
        let emb = self.ring.field().embedding_into(&target)?;
        self.evaluate_embedded(point, &target, &emb)
    }

    pub(crate) fn evaluate_embedded(&self, point: &[FieldElem], target: &FieldSpec, emb: &[u8]) -> Result<FieldElem> {
        for (i, p) in point.iter().enumerate() {
            if self.ring.is_laurent(i) && p.is_zero() {
                return Err(Error::Pole(i));
            }
        }
        let mut acc = 0u8;
        for (e, &c) in &self.terms {
            let mut v = emb[c as usize];
            for (p, &a) in point.iter().zip(e) {
                let pw = target.pow_raw(p.raw(), a as i64).ok_or(Error::DivisionByZero)?;
                v = target.mul_raw(v, pw);
            }
            acc ^= v;
        }
        Ok(FieldElem::from_raw(target, acc))
    }

    /// Exact quotient `self / d` in the ring, or `None` when `d` does not divide.
    ///
    /// Laurent variables are cleared by monomial shifts so both operands have
    /// minimum exponent zero there; the shifted divisor then has no monomial
    /// factor in those variables and single-divisor grevlex division decides
    /// divisibility.
    pub fn exact_divide(&self, d: &RingPoly) -> Result<Option<RingPoly>> {
        if self.ring != d.ring {
            return Err(Error::RingMismatch);
        }
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Some(RingPoly::zero(&self.ring)));
        }
        let n = self.ring.nvars();
        let clearing = |p: &RingPoly| -> Exponents {
            let mins = p.min_exponents();
            (0..n)
                .map(|i| if self.ring.is_laurent(i) { -mins[i] } else { 0 })
                .collect()
        };
        let sp = clearing(self);
        let sd = clearing(d);
        let mut rem = self.shift(&sp);
        let div = d.shift(&sd);
        let f = self.ring.field();
        let (lt_e, lt_c) = div.leading_term().map(|(e, c)| (e.clone(), c)).unwrap();
        let lt_inv = f.inv_raw(lt_c).unwrap();
        let mut quot = RingPoly::zero(&self.ring);
        while let Some((e, c)) = rem.leading_term().map(|(e, c)| (e.clone(), c)) {
            if e.iter().zip(&lt_e).any(|(a, b)| a < b) {
                return Ok(None);
            }
            let qe: Exponents = e.iter().zip(&lt_e).map(|(a, b)| a - b).collect();
            let qc = f.mul_raw(c, lt_inv);
            let t = RingPoly::monomial_raw(&self.ring, qe, qc);
            rem = &rem + &(&t * &div);
            quot.add_term_raw(t.terms.into_iter().next().unwrap().0, qc);
        }
        let back: Exponents = sd.iter().zip(&sp).map(|(a, b)| a - b).collect();
        let q = quot.shift(&back);
        debug_assert!(&q * d == *self);
        Ok(Some(q))
    }
}

impl fmt::Display for RingPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let prime = self.ring.field().is_prime_field();
        for (idx, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if c != 1 && !prime {
                parts.push(format!("{{{c}}}"));
            }
            for (name, &a) in self.ring.vars().iter().zip(e) {
                match a {
                    0 => {}
                    1 => parts.push(name.clone()),
                    a => parts.push(format!("{name}^{a}")),
                }
            }
            if parts.is_empty() {
                parts.push("1".into());
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for RingPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! poly_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr<&RingPoly> for &RingPoly {
            type Output = RingPoly;
            fn $method(self, rhs: &RingPoly) -> RingPoly {
                self.$checked(rhs).expect("ring mismatch")
            }
        }
        impl std::ops::$tr<RingPoly> for RingPoly {
            type Output = RingPoly;
            fn $method(self, rhs: RingPoly) -> RingPoly {
                self.$checked(&rhs).expect("ring mismatch")
            }
        }
        impl std::ops::$tr<&RingPoly> for RingPoly {
            type Output = RingPoly;
            fn $method(self, rhs: &RingPoly) -> RingPoly {
                self.$checked(rhs).expect("ring mismatch")
            }
        }
    };
}

poly_binop!(Add, add, checked_add);
poly_binop!(Mul, mul, checked_mul);

impl std::ops::AddAssign<&RingPoly> for RingPoly {
    fn add_assign(&mut self, rhs: &RingPoly) {
        assert!(self.ring == rhs.ring, "ring mismatch");
        for (e, &c) in &rhs.terms {
            self.add_term_raw(e.clone(), c);
        }
    }
}
