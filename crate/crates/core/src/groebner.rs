//! Gröbner bases over GF(2^k)[z_1, ..., z_n]: Buchberger's algorithm, normal
//! forms, Jacobian ideals of Laurent potentials by saturation, and
//! finite-dimensional quotient rings.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::gf2k::{FieldElem, FieldSpec};
use crate::ringmat::FieldMatrix;
use crate::ringpoly::{Exponents, Ring, RingPoly};

type Mono = SmallVec<[u32; 4]>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderKind {
    Lex,
    Grevlex,
    /// The first `k` variables (by precedence) form a block compared before
    /// the rest; each block is compared by grevlex.
    Elimination(usize),
}

/// A monomial order; `precedence[0]` is the most significant variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermOrder {
    kind: OrderKind,
    precedence: Vec<usize>,
}

impl TermOrder {
    pub fn grevlex(nvars: usize) -> Self {
        TermOrder {
            kind: OrderKind::Grevlex,
            precedence: (0..nvars).collect(),
        }
    }

    pub fn lex(nvars: usize) -> Self {
        TermOrder {
            kind: OrderKind::Lex,
            precedence: (0..nvars).collect(),
        }
    }

    pub fn elimination(nvars: usize, block: usize) -> Self {
        TermOrder {
            kind: OrderKind::Elimination(block.min(nvars)),
            precedence: (0..nvars).collect(),
        }
    }

    /// Replaces the variable precedence; must be a permutation of `0..nvars`.
    pub fn with_precedence(mut self, precedence: Vec<usize>) -> Result<Self> {
        let mut sorted = precedence.clone();
        sorted.sort_unstable();
        if sorted != (0..self.precedence.len()).collect::<Vec<_>>() {
            return Err(Error::Precondition("precedence is not a permutation".into()));
        }
        self.precedence = precedence;
        Ok(self)
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn nvars(&self) -> usize {
        self.precedence.len()
    }

    pub fn precedence(&self) -> &[usize] {
        &self.precedence
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self.kind {
            OrderKind::Lex => {
                for &v in &self.precedence {
                    match a[v].cmp(&b[v]) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            OrderKind::Grevlex => grevlex_on(a, b, &self.precedence),
            OrderKind::Elimination(k) => {
                grevlex_on(a, b, &self.precedence[..k]).then_with(|| grevlex_on(a, b, &self.precedence[k..]))
            }
        }
    }
}

fn grevlex_on(a: &[u32], b: &[u32], vars: &[usize]) -> Ordering {
    let da: u32 = vars.iter().map(|&v| a[v]).sum();
    let db: u32 = vars.iter().map(|&v| b[v]).sum();
    da.cmp(&db).then_with(|| {
        for &v in vars.iter().rev() {
            if a[v] != b[v] {
                return b[v].cmp(&a[v]);
            }
        }
        Ordering::Equal
    })
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// A polynomial with terms sorted in decreasing order for some fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
struct GPoly {
    terms: Vec<(Mono, u8)>,
}

impl GPoly {
    fn from_terms(mut terms: Vec<(Mono, u8)>, order: &TermOrder) -> Self {
        terms.retain(|t| t.1 != 0);
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        GPoly { terms }
    }

    fn lm(&self) -> &Mono {
        &self.terms[0].0
    }

    fn lc(&self) -> u8 {
        self.terms[0].1
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn make_monic(&mut self, f: &FieldSpec) {
        if let Some(&(_, c)) = self.terms.first() {
            let inv = f.inv_raw(c).expect("nonzero leading coefficient");
            for t in &mut self.terms {
                t.1 = f.mul_raw(t.1, inv);
            }
        }
    }

    /// `self + c * m * g`, merging two sorted term lists.
    fn add_scaled(&self, c: u8, m: &[u32], g: &GPoly, f: &FieldSpec, order: &TermOrder) -> GPoly {
        let shifted = g.terms.iter().map(|(e, gc)| {
            let e: Mono = e.iter().zip(m).map(|(a, b)| a + b).collect();
            (e, f.mul_raw(c, *gc))
        });
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut left = self.terms.iter().cloned().peekable();
        let mut right = shifted.peekable();
        loop {
            match (left.peek(), right.peek()) {
                (Some(a), Some(b)) => match order.cmp(&a.0, &b.0) {
                    Ordering::Greater => out.push(left.next().unwrap()),
                    Ordering::Less => out.push(right.next().unwrap()),
                    Ordering::Equal => {
                        let (e, ca) = left.next().unwrap();
                        let (_, cb) = right.next().unwrap();
                        if ca ^ cb != 0 {
                            out.push((e, ca ^ cb));
                        }
                    }
                },
                (Some(_), None) => out.push(left.next().unwrap()),
                (None, Some(_)) => out.push(right.next().unwrap()),
                (None, None) => break,
            }
        }
        GPoly { terms: out }
    }
}

/// Full reduction of `p` modulo `basis`.
fn reduce(p: &GPoly, basis: &[GPoly], f: &FieldSpec, order: &TermOrder) -> GPoly {
    let mut p = p.clone();
    let mut rem: Vec<(Mono, u8)> = Vec::new();
    while !p.is_zero() {
        let (lm, lc) = (p.lm().clone(), p.lc());
        match basis.iter().find(|g| divides(g.lm(), &lm)) {
            Some(g) => {
                let m: Mono = lm.iter().zip(g.lm()).map(|(a, b)| a - b).collect();
                let c = f.mul_raw(lc, f.inv_raw(g.lc()).unwrap());
                p = p.add_scaled(c, &m, g, f, order);
            }
            None => {
                rem.push(p.terms.remove(0));
            }
        }
    }
    GPoly { terms: rem }
}

fn s_poly(a: &GPoly, b: &GPoly, f: &FieldSpec, order: &TermOrder) -> GPoly {
    let l = lcm(a.lm(), b.lm());
    let ma: Mono = l.iter().zip(a.lm()).map(|(x, y)| x - y).collect();
    let mb: Mono = l.iter().zip(b.lm()).map(|(x, y)| x - y).collect();
    let zero = GPoly { terms: Vec::new() };
    let ca = f.inv_raw(a.lc()).unwrap();
    let cb = f.inv_raw(b.lc()).unwrap();
    zero.add_scaled(ca, &ma, a, f, order).add_scaled(cb, &mb, b, f, order)
}

/// Buchberger with the normal selection strategy (smallest lcm degree, ties
/// by insertion index) and the coprime-leading-monomial criterion, followed
/// by full interreduction.
fn buchberger_raw(gens: Vec<GPoly>, f: &FieldSpec, order: &TermOrder) -> Vec<GPoly> {
    let mut basis: Vec<GPoly> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let add = |basis: &mut Vec<GPoly>, pairs: &mut Vec<(usize, usize)>, mut h: GPoly| {
        h.make_monic(f);
        let k = basis.len();
        for (i, g) in basis.iter().enumerate() {
            if !coprime(g.lm(), h.lm()) {
                pairs.push((i, k));
            }
        }
        basis.push(h);
    };
    for g in gens {
        let h = reduce(&g, &basis, f, order);
        if !h.is_zero() {
            add(&mut basis, &mut pairs, h);
        }
    }
    while !pairs.is_empty() {
        let best = (0..pairs.len())
            .min_by_key(|&p| {
                let (i, j) = pairs[p];
                let deg: u32 = lcm(basis[i].lm(), basis[j].lm()).iter().sum();
                (deg, j, i)
            })
            .unwrap();
        let (i, j) = pairs.swap_remove(best);
        let h = reduce(&s_poly(&basis[i], &basis[j], f, order), &basis, f, order);
        if !h.is_zero() {
            add(&mut basis, &mut pairs, h);
        }
    }
    interreduce(basis, f, order)
}

/// Minimal, monic, fully reduced basis, sorted by increasing leading monomial.
fn interreduce(basis: Vec<GPoly>, f: &FieldSpec, order: &TermOrder) -> Vec<GPoly> {
    let mut minimal: Vec<GPoly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = basis
            .iter()
            .enumerate()
            .any(|(j, h)| j != i && divides(h.lm(), g.lm()) && (h.lm() != g.lm() || j < i));
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<GPoly> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let head = GPoly {
            terms: vec![minimal[i].terms[0].clone()],
        };
        let tail = GPoly {
            terms: minimal[i].terms[1..].to_vec(),
        };
        let one: Mono = smallvec::smallvec![0; order.nvars()];
        let mut g = head.add_scaled(1, &one, &reduce(&tail, &others, f, order), f, order);
        g.make_monic(f);
        out.push(g);
    }
    out.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    out
}

fn to_gpoly(p: &RingPoly, order: &TermOrder) -> Result<GPoly> {
    let mut terms = Vec::with_capacity(p.num_terms());
    for (e, c) in p.raw_terms() {
        if e.iter().any(|&v| v < 0) {
            return Err(Error::LaurentInput);
        }
        terms.push((e.iter().map(|&v| v as u32).collect(), c));
    }
    Ok(GPoly::from_terms(terms, order))
}

fn from_gpoly(g: &GPoly, ring: &Ring) -> RingPoly {
    RingPoly::from_terms_raw(
        ring,
        g.terms
            .iter()
            .map(|(e, c)| (e.iter().map(|&v| v as i32).collect::<Exponents>(), *c)),
    )
}

/// A reduced Gröbner basis together with its ring and order.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Ring,
    order: TermOrder,
    polys: Vec<GPoly>,
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn buchberger(ring: &Ring, gens: &[RingPoly], order: &TermOrder) -> Result<GroebnerBasis> {
    if ring.has_laurent_vars() {
        return Err(Error::LaurentInput);
    }
    if order.nvars() != ring.nvars() {
        return Err(Error::DimensionMismatch("term order arity".into()));
    }
    let mut gs = Vec::with_capacity(gens.len());
    for g in gens {
        if g.ring() != ring {
            return Err(Error::RingMismatch);
        }
        gs.push(to_gpoly(g, order)?);
    }
    Ok(GroebnerBasis {
        ring: ring.clone(),
        order: order.clone(),
        polys: buchberger_raw(gs, ring.field(), order),
    })
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Basis elements in increasing order of leading monomial.
    pub fn generators(&self) -> Vec<RingPoly> {
        self.polys.iter().map(|g| from_gpoly(g, &self.ring)).collect()
    }

    /// Leading monomials as exponent vectors.
    pub fn leading_monomials(&self) -> Vec<Vec<u32>> {
        self.polys.iter().map(|g| g.lm().to_vec()).collect()
    }

    pub fn normal_form(&self, p: &RingPoly) -> Result<RingPoly> {
        if p.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        let g = to_gpoly(p, &self.order)?;
        Ok(from_gpoly(
            &reduce(&g, &self.polys, self.ring.field(), &self.order),
            &self.ring,
        ))
    }

    pub fn contains(&self, p: &RingPoly) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// Buchberger's criterion: every S-polynomial reduces to zero.
    pub fn is_groebner(&self) -> bool {
        let f = self.ring.field();
        (0..self.polys.len()).all(|i| {
            (i + 1..self.polys.len()).all(|j| {
                reduce(
                    &s_poly(&self.polys[i], &self.polys[j], f, &self.order),
                    &self.polys,
                    f,
                    &self.order,
                )
                .is_zero()
            })
        })
    }
}

impl fmt::Display for GroebnerBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators().iter().map(|g| g.to_string()).collect();
        write!(f, "{{{}}}", gens.join(", "))
    }
}

/// The Jacobian ideal of a potential, as a polynomial ideal.
#[derive(Clone, Debug)]
pub struct JacobianIdeal {
    /// The polynomial ring on the same variables.
    pub ring: Ring,
    /// Partials multiplied by the monomial making their Laurent exponents
    /// nonnegative with minimum zero.
    pub cleared: Vec<RingPoly>,
    /// Reduced basis of the saturation of `cleared` by the product of the
    /// Laurent variables (equal to the ideal of `cleared` without them).
    pub basis: GroebnerBasis,
}

/// Partials of `w`, denominators cleared, saturated by the Laurent variables
/// through an auxiliary `t` with `t * prod(z_i) + 1` and elimination of `t`.
pub fn laurent_jacobian_ideal(w: &RingPoly, order: &TermOrder) -> Result<JacobianIdeal> {
    let ring = w.ring();
    let n = ring.nvars();
    let poly_ring = ring.polynomial_version();
    let mut cleared = Vec::new();
    for i in 0..n {
        let p = w.partial(i);
        if p.is_zero() {
            continue;
        }
        let mins = p.min_exponents();
        let shift: Vec<i32> = (0..n).map(|v| if ring.is_laurent(v) { -mins[v] } else { 0 }).collect();
        let s = p.shift(&shift);
        cleared.push(RingPoly::from_terms_raw(
            &poly_ring,
            s.raw_terms().map(|(e, c)| (e.clone(), c)),
        ));
    }
    let laurent: Vec<usize> = (0..n).filter(|&v| ring.is_laurent(v)).collect();
    if laurent.is_empty() || cleared.is_empty() {
        let basis = buchberger(&poly_ring, &cleared, order)?;
        return Ok(JacobianIdeal {
            ring: poly_ring,
            cleared,
            basis,
        });
    }
    // Variable n is t; it is the single most significant variable.
    let f = ring.field();
    let mut prec = vec![n];
    prec.extend(0..n);
    let elim = TermOrder::elimination(n + 1, 1).with_precedence(prec)?;
    let mut gens: Vec<GPoly> = cleared
        .iter()
        .map(|p| {
            let terms = p
                .raw_terms()
                .map(|(e, c)| {
                    let mut m: Mono = e.iter().map(|&v| v as u32).collect();
                    m.push(0);
                    (m, c)
                })
                .collect();
            GPoly::from_terms(terms, &elim)
        })
        .collect();
    let mut rab: Mono = (0..n).map(|v| u32::from(ring.is_laurent(v))).collect();
    rab.push(1);
    gens.push(GPoly::from_terms(
        vec![(rab, 1), (smallvec::smallvec![0; n + 1], 1)],
        &elim,
    ));
    let eliminated: Vec<RingPoly> = buchberger_raw(gens, f, &elim)
        .into_iter()
        .filter(|g| g.terms.iter().all(|(e, _)| e[n] == 0))
        .map(|g| {
            RingPoly::from_terms_raw(
                &poly_ring,
                g.terms
                    .iter()
                    .map(|(e, c)| (e[..n].iter().map(|&v| v as i32).collect::<Exponents>(), *c)),
            )
        })
        .collect();
    let basis = buchberger(&poly_ring, &eliminated, order)?;
    Ok(JacobianIdeal {
        ring: poly_ring,
        cleared,
        basis,
    })
}

impl JacobianIdeal {
    /// For each saturated generator `g`, checks that `m^k g` lies in the
    /// ideal of the cleared partials for some `k <= max_power`, where `m` is
    /// the product of the Laurent variables of `original`.
    pub fn saturation_spot_check(&self, original: &Ring, max_power: u32) -> Result<bool> {
        let pre = buchberger(&self.ring, &self.cleared, self.basis.order())?;
        let exps: Exponents = (0..original.nvars())
            .map(|v| i32::from(original.is_laurent(v)))
            .collect();
        let m = RingPoly::from_terms_raw(&self.ring, [(exps, 1u8)]);
        for g in self.basis.generators() {
            let mut cur = g;
            let mut found = false;
            for _ in 0..=max_power {
                if pre.contains(&cur)? {
                    found = true;
                    break;
                }
                cur = &cur * &m;
            }
            if !found {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `A / I` for a reduced Gröbner basis of `I`.
#[derive(Clone, Debug)]
pub struct QuotientRing {
    gb: GroebnerBasis,
    /// Standard monomials in increasing order; `None` when infinite.
    staircase: Option<Vec<Vec<u32>>>,
    /// Matrix of multiplication by each variable in the staircase basis.
    mult: Option<Vec<FieldMatrix>>,
}

impl QuotientRing {
    pub fn new(gb: &GroebnerBasis) -> Result<Self> {
        let n = gb.ring.nvars();
        let lms = gb.leading_monomials();
        let mut bounds = vec![None; n];
        for lm in &lms {
            let nz: Vec<usize> = (0..n).filter(|&v| lm[v] > 0).collect();
            if nz.len() == 1 {
                let v = nz[0];
                bounds[v] = Some(bounds[v].map_or(lm[v], |b: u32| b.min(lm[v])));
            }
        }
        // The unit ideal has the constant as a leading monomial.
        if lms.iter().any(|lm| lm.iter().all(|&v| v == 0)) {
            return Ok(QuotientRing {
                gb: gb.clone(),
                staircase: Some(Vec::new()),
                mult: Some(vec![FieldMatrix::zeros(gb.ring.field(), 0, 0); n]),
            });
        }
        if bounds.iter().any(Option::is_none) {
            return Ok(QuotientRing {
                gb: gb.clone(),
                staircase: None,
                mult: None,
            });
        }
        let bounds: Vec<u32> = bounds.into_iter().map(Option::unwrap).collect();
        let mut stairs = Vec::new();
        let total: u64 = bounds.iter().map(|&b| b as u64).product();
        for mut code in 0..total {
            let mut m = vec![0u32; n];
            for v in 0..n {
                m[v] = (code % bounds[v] as u64) as u32;
                code /= bounds[v] as u64;
            }
            if !lms.iter().any(|lm| divides(lm, &m)) {
                stairs.push(m);
            }
        }
        stairs.sort_by(|a, b| gb.order.cmp(a, b));
        let index: HashMap<Vec<u32>, usize> = stairs.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let f = gb.ring.field();
        let mut mult = Vec::with_capacity(n);
        for v in 0..n {
            let mut mat = FieldMatrix::zeros(f, stairs.len(), stairs.len());
            for (j, s) in stairs.iter().enumerate() {
                let mut e: Mono = s.iter().copied().collect();
                e[v] += 1;
                let nf = reduce(&GPoly { terms: vec![(e, 1)] }, &gb.polys, f, &gb.order);
                for (m, c) in &nf.terms {
                    let i = index[&m.to_vec()];
                    mat.set_raw(i, j, c ^ mat.get_raw(i, j));
                }
            }
            mult.push(mat);
        }
        Ok(QuotientRing {
            gb: gb.clone(),
            staircase: Some(stairs),
            mult: Some(mult),
        })
    }

    pub fn basis(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn is_finite(&self) -> bool {
        self.staircase.is_some()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.staircase.as_ref().map(Vec::len)
    }

    pub fn staircase(&self) -> Option<&[Vec<u32>]> {
        self.staircase.as_deref()
    }

    /// Standard monomials rendered as ring elements.
    pub fn staircase_polys(&self) -> Option<Vec<RingPoly>> {
        self.staircase.as_ref().map(|s| {
            s.iter()
                .map(|m| {
                    let e: Exponents = m.iter().map(|&v| v as i32).collect();
                    RingPoly::from_terms_raw(&self.gb.ring, [(e, 1u8)])
                })
                .collect()
        })
    }

    pub fn mult_matrix(&self, var: usize) -> Option<&FieldMatrix> {
        self.mult.as_ref().map(|m| &m[var])
    }

    /// `p(M_1, ..., M_n)` acting on the staircase basis.
    pub fn evaluate_at_mult(&self, p: &RingPoly) -> Option<FieldMatrix> {
        let mats = self.mult.as_ref()?;
        let f = self.gb.ring.field();
        let d = self.dimension()?;
        let mut acc = FieldMatrix::zeros(f, d, d);
        for (e, c) in p.raw_terms() {
            let mut t = FieldMatrix::identity(f, d);
            for (v, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t.mul(&mats[v]).ok()?;
                }
            }
            for i in 0..d {
                for j in 0..d {
                    acc.add_raw(i, j, f.mul_raw(c, t.get_raw(i, j)));
                }
            }
        }
        Some(acc)
    }
}

/// Monic polynomial of least degree annihilating `m`, as a polynomial in one
/// variable named `var`.
pub fn minimal_polynomial(m: &FieldMatrix, var: &str) -> Result<RingPoly> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch(
            "minimal polynomial of a non-square matrix".into(),
        ));
    }
    let f = m.spec().clone();
    let ring = Ring::polynomial(f.clone(), &[var])?;
    let n = m.rows();
    let flat = |a: &FieldMatrix| -> Vec<FieldElem> {
        let mut v = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                v.push(a.get(i, j));
            }
        }
        v
    };
    let mut powers = vec![flat(&FieldMatrix::identity(&f, n))];
    let mut cur = FieldMatrix::identity(&f, n);
    for d in 1..=n {
        cur = cur.mul(m)?;
        let target = flat(&cur);
        let mut sys = FieldMatrix::zeros(&f, n * n, powers.len());
        for (j, p) in powers.iter().enumerate() {
            for (i, v) in p.iter().enumerate() {
                sys.set_raw(i, j, v.raw());
            }
        }
        if let Some(c) = sys.solve(&target)? {
            let mut terms: Vec<(Exponents, u8)> = vec![(smallvec::smallvec![d as i32], 1)];
            terms.extend(
                c.iter()
                    .enumerate()
                    .map(|(k, v)| (smallvec::smallvec![k as i32], v.raw())),
            );
            return Ok(RingPoly::from_terms_raw(&ring, terms));
        }
        powers.push(target);
    }
    unreachable!("Cayley-Hamilton bounds the degree by n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring2() -> Ring {
        Ring::polynomial(FieldSpec::gf2(), &["x", "y"]).unwrap()
    }

    fn p(s: &str, r: &Ring) -> RingPoly {
        RingPoly::parse(s, r).unwrap()
    }

    #[test]
    fn orders() {
        let g = TermOrder::grevlex(3);
        assert_eq!(g.cmp(&[1, 0, 0], &[0, 1, 0]), Ordering::Greater);
        // x*z < y^2 in grevlex, x*z > y^2 in lex.
        assert_eq!(g.cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
        assert_eq!(TermOrder::lex(3).cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Greater);
        let e = TermOrder::elimination(3, 1);
        assert_eq!(e.cmp(&[1, 0, 0], &[0, 5, 5]), Ordering::Greater);
        let rev = TermOrder::grevlex(2).with_precedence(vec![1, 0]).unwrap();
        assert_eq!(rev.cmp(&[1, 0], &[0, 1]), Ordering::Less);
        assert!(TermOrder::grevlex(2).with_precedence(vec![0, 0]).is_err());
    }

    #[test]
    fn single_generator_is_its_own_basis() {
        let r = Ring::polynomial(FieldSpec::gf2(), &["x"]).unwrap();
        let gb = buchberger(&r, &[p("x^2 + x", &r)], &TermOrder::lex(1)).unwrap();
        assert_eq!(gb.generators(), vec![p("x^2 + x", &r)]);
        let empty = buchberger(&r, &[], &TermOrder::lex(1)).unwrap();
        assert!(empty.is_empty());
        assert!(empty.contains(&RingPoly::zero(&r)).unwrap());
        assert!(!empty.contains(&p("x", &r)).unwrap());
    }

    #[test]
    fn two_binomials() {
        let r = ring2();
        let gb = buchberger(&r, &[p("x*y^2 + 1", &r), p("x^2*y + 1", &r)], &TermOrder::grevlex(2)).unwrap();
        assert!(gb.is_groebner());
        assert!(gb.generators().contains(&p("x + y", &r)));
        assert!(gb.contains(&p("x*y^2 + 1", &r)).unwrap());
        assert_eq!(gb.generators(), vec![p("x + y", &r), p("y^3 + 1", &r)]);
    }

    #[test]
    fn laurent_input_is_rejected() {
        let r = Ring::laurent(FieldSpec::gf2(), &["x"]).unwrap();
        assert_eq!(
            buchberger(&r, &[p("x^-1", &r)], &TermOrder::grevlex(1)).unwrap_err(),
            Error::LaurentInput
        );
    }

    #[test]
    fn normal_form_examples() {
        let r = Ring::polynomial(FieldSpec::gf2(), &["x"]).unwrap();
        let gb = buchberger(&r, &[p("x^3 + 1", &r)], &TermOrder::grevlex(1)).unwrap();
        assert_eq!(gb.normal_form(&p("x^3", &r)).unwrap(), p("1", &r));
        let nf = gb.normal_form(&p("x^7 + x^4 + x", &r)).unwrap();
        assert_eq!(nf, p("x", &r));
        assert_eq!(gb.normal_form(&nf).unwrap(), nf);
    }

    #[test]
    fn rp2_jacobian_ring() {
        let lr = Ring::laurent(FieldSpec::gf2(), &["x", "y"]).unwrap();
        let w = p("x + y + x^-1*y^-1", &lr);
        let order = TermOrder::grevlex(2).with_precedence(vec![1, 0]).unwrap();
        let jac = laurent_jacobian_ideal(&w, &order).unwrap();
        let pr = jac.ring.clone();
        assert_eq!(jac.cleared, vec![p("x^2*y + 1", &pr), p("x*y^2 + 1", &pr)]);
        assert_eq!(jac.basis.generators(), vec![p("x + y", &pr), p("x^3 + 1", &pr)]);
        assert!(jac.saturation_spot_check(&lr, 4).unwrap());
        let q = QuotientRing::new(&jac.basis).unwrap();
        assert_eq!(q.dimension(), Some(3));
        assert_eq!(q.staircase().unwrap(), &[vec![0, 0], vec![1, 0], vec![2, 0]]);
        let mx = q.mult_matrix(0).unwrap();
        assert_eq!(minimal_polynomial(mx, "x").unwrap().to_string(), "x^3 + 1");
        let my = q.mult_matrix(1).unwrap();
        assert_eq!(mx.mul(my).unwrap(), my.mul(mx).unwrap());
        for g in jac.basis.generators() {
            assert!(q.evaluate_at_mult(&g).unwrap().is_zero());
        }

        let default = laurent_jacobian_ideal(&w, &TermOrder::grevlex(2)).unwrap();
        assert_eq!(default.basis.generators(), vec![p("x + y", &pr), p("y^3 + 1", &pr)]);
    }

    #[test]
    fn characteristic_two_jacobians() {
        let r = ring2();
        let jac = laurent_jacobian_ideal(&p("x^4 + y^2", &r), &TermOrder::grevlex(2)).unwrap();
        assert!(jac.basis.is_empty());
        assert!(!QuotientRing::new(&jac.basis).unwrap().is_finite());

        let r3 = Ring::polynomial(FieldSpec::gf2(), &["x", "y", "z"]).unwrap();
        let jac = laurent_jacobian_ideal(&p("x^6 + y^2 + x*y*z", &r3), &TermOrder::grevlex(3)).unwrap();
        let mut gens = jac.basis.generators();
        gens.sort_by_key(|g| g.to_string());
        assert_eq!(gens, vec![p("x*y", &r3), p("x*z", &r3), p("y*z", &r3)]);
        let q = QuotientRing::new(&jac.basis).unwrap();
        assert_eq!(q.dimension(), None);
        assert!(q.mult_matrix(0).is_none());
    }

    #[test]
    fn unit_ideal_quotient_is_zero() {
        let r = ring2();
        let gb = buchberger(&r, &[p("x + 1", &r), p("x", &r)], &TermOrder::grevlex(2)).unwrap();
        assert_eq!(gb.generators(), vec![p("1", &r)]);
        assert_eq!(QuotientRing::new(&gb).unwrap().dimension(), Some(0));
    }

    #[test]
    fn minimal_polynomials() {
        let f = FieldSpec::gf2();
        let id = FieldMatrix::identity(&f, 3);
        assert_eq!(minimal_polynomial(&id, "t").unwrap().to_string(), "t + 1");
        let mut nil = FieldMatrix::zeros(&f, 2, 2);
        nil.set_raw(0, 1, 1);
        assert_eq!(minimal_polynomial(&nil, "t").unwrap().to_string(), "t^2");
    }
}
