//! The mirror factorization of the real projective plane,
//! `W = x + y + x^-1 y^-1` over `K[x^±1, y^±1]`, and the `A_{2n-1}` corpus.
//!
//! With `U = [[0,1],[y,0]]` and `V = Id + x^-1 y^-1 U`, the factorization is
//! `Q = [[U, V], [xV, U]]`. On 2x2 matrices `d_U(F) = [U, F]` is acyclic and
//! controlled by `tr(F) = a + d` and `at(F) = y b + c`. The reduction of a
//! closed endomorphism to `alpha * Id` is a chain of explicit coboundaries,
//! each re-verified symbolically.

use crate::cohomwin::{self, Window};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gf2k::FieldSpec;
use crate::groebner::{self, JacobianIdeal, QuotientRing, TermOrder};
use crate::mfcore::{HomotopyWitness, Morphism, UngradedMF};
use crate::ringmat::RingMatrix;
use crate::ringpoly::{Exponents, Ring, RingPoly};
use crate::sample::{self, SampleRng};

use rand::Rng;

/// The factorization, its blocks, `F_alpha`, `M` and the Jacobian
/// ring, over a chosen GF(2^k).
#[derive(Debug, Clone)]
pub struct Rp2Context {
    ring: Ring,
    x: UngradedMF,
    u: RingMatrix,
    v: RingMatrix,
    f_alpha: RingMatrix,
    m: RingMatrix,
    dxw: RingPoly,
    dyw: RingPoly,
    jacobian: JacobianIdeal,
}

pub const RP2_POTENTIAL: &str = "x + y + x^-1*y^-1";
pub const RP2_MATRIX: &str = "0, 1, 1, x^-1*y^-1; y, 0, x^-1, 1; x, y^-1, 0, 1; 1, x, y, 0";
const F_ALPHA: &str = "0, 0, 0, x^-1*y^-1; 0, 0, x^-1, 0; 0, y^-1, 0, 0; 1, 0, 0, 0";
const HOMOTOPY_M: &str = "0, 0, 0, 0; x^-1, 0, 0, 0; 0, 0, 0, x^-1*y^-1; 0, 0, 0, 0";

fn consistency(what: &str) -> Error {
    Error::Consistency(what.to_string())
}

fn ensure(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(consistency(what))
    }
}

impl Rp2Context {
    pub fn new(field: &FieldSpec) -> Result<Self> {
        Self::with_seed(field, sample::DEFAULT_SEED)
    }

    /// Builds the context, checks `Q = [[U,V],[xV,U]]` and the block
    /// relations, and validates the `alpha` canonicalization rule against
    /// Gröbner normal forms on 50 monomials drawn from `seed`.
    pub fn with_seed(field: &FieldSpec, seed: u64) -> Result<Self> {
        let ring = Ring::laurent(field.clone(), &["x", "y"])?;
        let w = RingPoly::parse(RP2_POTENTIAL, &ring)?;
        let x = UngradedMF::new(w.clone(), RingMatrix::parse(RP2_MATRIX, &ring)?)?;
        let u = RingMatrix::parse("0, 1; y, 0", &ring)?;
        let v = &RingMatrix::identity(&ring, 2) + &u.scale(&RingPoly::parse("x^-1*y^-1", &ring)?);
        let xv = v.scale(&RingPoly::var(&ring, 0));
        ensure(
            RingMatrix::block2(&u, &v, &xv, &u)? == *x.matrix(),
            "Q differs from [[U, V], [xV, U]]",
        )?;
        // Variables ordered y > x so the standard monomials are powers of x.
        let order = TermOrder::grevlex(2).with_precedence(vec![1, 0])?;
        let jacobian = groebner::laurent_jacobian_ideal(&w, &order)?;
        let ctx = Rp2Context {
            dxw: w.partial(0),
            dyw: w.partial(1),
            f_alpha: RingMatrix::parse(F_ALPHA, &ring)?,
            m: RingMatrix::parse(HOMOTOPY_M, &ring)?,
            ring,
            x,
            u,
            v,
            jacobian,
        };
        ensure(ctx.block_relations(), "block relations of U and V")?;
        ctx.validate_canonicalization(50, seed)?;
        Ok(ctx)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn mf(&self) -> &UngradedMF {
        &self.x
    }

    pub fn potential(&self) -> &RingPoly {
        self.x.potential()
    }

    pub fn q(&self) -> &RingMatrix {
        self.x.matrix()
    }

    pub fn u(&self) -> &RingMatrix {
        &self.u
    }

    pub fn v(&self) -> &RingMatrix {
        &self.v
    }

    pub fn f_alpha(&self) -> &RingMatrix {
        &self.f_alpha
    }

    pub fn homotopy_m(&self) -> &RingMatrix {
        &self.m
    }

    pub fn jacobian(&self) -> &JacobianIdeal {
        &self.jacobian
    }

    pub fn poly(&self, text: &str) -> Result<RingPoly> {
        RingPoly::parse(text, &self.ring)
    }

    fn mono(&self, a: i32, b: i32) -> RingPoly {
        RingPoly::from_terms_raw(&self.ring, [(smallvec::smallvec![a, b], 1u8)])
    }

    fn identity(&self, n: usize) -> RingMatrix {
        RingMatrix::identity(&self.ring, n)
    }

    /// `d(f) = Qf + fQ` on 4x4 matrices.
    pub fn delta(&self, f: &RingMatrix) -> RingMatrix {
        self.q().commutator(f).expect("4x4 endomorphism")
    }

    pub fn endomorphism(&self, f: RingMatrix) -> Result<Morphism> {
        Morphism::new(&self.x, &self.x, f)
    }

    /// `U^2 = y Id`, `V^2 = (1 + x^-2 y^-1) Id`, `UV = VU = x^-1 Id + U`.
    pub fn block_relations(&self) -> bool {
        let id = self.identity(2);
        let y = RingPoly::var(&self.ring, 1);
        let xinv = self.mono(-1, 0);
        let uv = &self.u * &self.v;
        &self.u * &self.u == id.scale(&y)
            && &self.v * &self.v == id.scale(&(&RingPoly::one(&self.ring) + &self.mono(-2, -1)))
            && uv == &self.v * &self.u
            && uv == &id.scale(&xinv) + &self.u
    }

    /// `[Q, M] = F_alpha + x^-1 Id`.
    pub fn homotopy_identity(&self) -> bool {
        self.delta(&self.m) == &self.f_alpha + &self.identity(4).scale(&self.mono(-1, 0))
    }

    /// The rule `x^a y^b -> x^((a+b) mod 3)`, with cofactors:
    /// returns `(alpha, c1, c2)` with `p + alpha = c1 dW/dx + c2 dW/dy`.
    pub fn canonicalize(&self, p: &RingPoly) -> Result<(RingPoly, RingPoly, RingPoly)> {
        let ring = &self.ring;
        let x_plus_y = self.poly("x + y")?;
        let cube = self.poly("x^3 + 1")?;
        // x + y = x dW/dx + y dW/dy;  x^3 + 1 = (x^3 + x y^-1) dW/dx + dW/dy.
        let (ex, ey) = (RingPoly::var(ring, 0), RingPoly::var(ring, 1));
        let (cx, cy) = (self.poly("x^3 + x*y^-1")?, RingPoly::one(ring));
        let mut alpha = RingPoly::zero(ring);
        let mut c1 = RingPoly::zero(ring);
        let mut c2 = RingPoly::zero(ring);
        for (e, c) in p.raw_terms() {
            let (a, b) = (e[0], e[1]);
            let s = a + b;
            let r = s.rem_euclid(3);
            // x^a y^b + x^s = x^a (x + y) h
            if b != 0 {
                let h = (&self.mono(0, b) + &self.mono(b, 0))
                    .exact_divide(&x_plus_y)?
                    .ok_or_else(|| consistency("x + y does not divide x^b + y^b"))?;
                let k = h.shift(&[a, 0]).scale_raw(c);
                c1 += &(&k * &ex);
                c2 += &(&k * &ey);
            }
            // x^s + x^r = x^r (x^3 + 1) h
            if s != r {
                let h = (&self.mono(s - r, 0) + &RingPoly::one(ring))
                    .exact_divide(&cube)?
                    .ok_or_else(|| consistency("x^3 + 1 does not divide x^3k + 1"))?;
                let k = h.shift(&[r, 0]).scale_raw(c);
                c1 += &(&k * &cx);
                c2 += &(&k * &cy);
            }
            alpha += &self.mono(r, 0).scale_raw(c);
        }
        ensure(
            (p + &alpha) == (&(&c1 * &self.dxw) + &(&c2 * &self.dyw)),
            "canonicalization cofactors",
        )?;
        Ok((alpha, c1, c2))
    }

    /// Compares the canonical form of random monomials with the Jacobian
    /// normal form (after clearing by a unit monomial).
    pub fn validate_canonicalization(&self, samples: usize, seed: u64) -> Result<()> {
        let mut rng = sample::rng(seed);
        let gb = &self.jacobian.basis;
        let pr = &self.jacobian.ring;
        for _ in 0..samples {
            let (a, b) = (rng.gen_range(-6..=6), rng.gen_range(-6..=6));
            let (alpha, _, _) = self.canonicalize(&self.mono(a, b))?;
            let (sa, sb) = (6 - a.min(0) + 6, 6 - b.min(0) + 6);
            let lhs = RingPoly::from_terms_raw(pr, [(Exponents::from_slice(&[a + sa, b + sb]), 1u8)]);
            let shifted = alpha.shift(&[sa, sb]);
            let rhs = RingPoly::from_terms_raw(pr, shifted.raw_terms().map(|(e, c)| (e.clone(), c)));
            ensure(
                gb.normal_form(&lhs)? == gb.normal_form(&rhs)?,
                "canonical form disagrees with the Jacobian normal form",
            )?;
        }
        Ok(())
    }

    pub fn quotient(&self) -> Result<QuotientRing> {
        QuotientRing::new(&self.jacobian.basis)
    }
}

fn check_2x2(f: &RingMatrix) -> Result<()> {
    if f.rows() != 2 || f.cols() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected 2x2, got {}x{}",
            f.rows(),
            f.cols()
        )));
    }
    Ok(())
}

/// `F_11 + F_22`.
pub fn tr(f: &RingMatrix) -> Result<RingPoly> {
    check_2x2(f)?;
    Ok(f.get(0, 0) + f.get(1, 1))
}

/// `y F_12 + F_21`.
pub fn at(f: &RingMatrix) -> Result<RingPoly> {
    check_2x2(f)?;
    let y = RingPoly::var(f.ring(), 1);
    Ok(&(&y * f.get(0, 1)) + f.get(1, 0))
}

fn u_of(ring: &Ring) -> RingMatrix {
    RingMatrix::parse("0, 1; y, 0", ring).expect("U parses")
}

fn v_of(ring: &Ring) -> RingMatrix {
    RingMatrix::parse("1, x^-1*y^-1; x^-1, 1", ring).expect("V parses")
}

/// `[U, F]`.
pub fn delta_u(f: &RingMatrix) -> Result<RingMatrix> {
    check_2x2(f)?;
    u_of(f.ring()).commutator(f)
}

/// `[[at F, tr F], [y tr F, at F]]`.
pub fn delta_u_formula(f: &RingMatrix) -> Result<RingMatrix> {
    let (a, t) = (at(f)?, tr(f)?);
    let y = RingPoly::var(f.ring(), 1);
    RingMatrix::from_rows(f.ring(), vec![vec![a.clone(), t.clone()], vec![&y * &t, a]])
}

/// `[[0,0],[s,t]]` for `X = [[s,t],[yt,s]]`; `None` if `X` has another shape.
pub fn delta_u_preimage(x: &RingMatrix) -> Option<RingMatrix> {
    if x.rows() != 2 || x.cols() != 2 {
        return None;
    }
    let y = RingPoly::var(x.ring(), 1);
    let (s, t) = (x.get(0, 0), x.get(0, 1));
    if x.get(1, 1) != s || *x.get(1, 0) != &y * t {
        return None;
    }
    let z = RingPoly::zero(x.ring());
    RingMatrix::from_rows(x.ring(), vec![vec![z.clone(), z], vec![s.clone(), t.clone()]]).ok()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TracePairReport {
    pub tr_chain: bool,
    pub at_chain: bool,
}

impl TracePairReport {
    pub fn holds(&self) -> bool {
        self.tr_chain && self.at_chain
    }
}

/// `tr(VF) = tr(FV) = tr F + x^-1 y^-1 at F` and
/// `at(VF) = at(FV) = at F + x^-1 tr F`.
pub fn trace_pair_check(f: &RingMatrix) -> Result<TracePairReport> {
    check_2x2(f)?;
    let ring = f.ring();
    let v = v_of(ring);
    let (vf, fv) = (&v * f, f * &v);
    let xinv = RingPoly::parse("x^-1", ring)?;
    let xyinv = RingPoly::parse("x^-1*y^-1", ring)?;
    let (t, a) = (tr(f)?, at(f)?);
    let tr_rhs = &t + &(&xyinv * &a);
    let at_rhs = &a + &(&xinv * &t);
    Ok(TracePairReport {
        tr_chain: tr(&vf)? == tr_rhs && tr(&fv)? == tr_rhs,
        at_chain: at(&vf)? == at_rhs && at(&fv)? == at_rhs,
    })
}

/// A closed `f = [[A, B], [C, D]]` with `D = A + [U,T]`, `C = xB + [U,S]`.
#[derive(Debug, Clone)]
pub struct ClosedDecomposition {
    pub a: RingMatrix,
    pub b: RingMatrix,
    pub c: RingMatrix,
    pub d: RingMatrix,
    pub s: RingMatrix,
    pub t: RingMatrix,
}

impl ClosedDecomposition {
    pub fn reassemble(&self) -> RingMatrix {
        RingMatrix::block2(&self.a, &self.b, &self.c, &self.d).expect("2x2 blocks")
    }

    /// The four closed conditions relating `A, B` to `S, T`.
    pub fn closed_conditions_hold(&self) -> Result<bool> {
        let ring = self.a.ring();
        let xinv = RingPoly::parse("x^-1", ring)?;
        let yinv = RingPoly::parse("y^-1", ring)?;
        let xyinv = RingPoly::parse("x^-1*y^-1", ring)?;
        let ab = &self.a + &self.b.scale(&yinv);
        let ba = &self.b + &self.a.scale(&xyinv);
        let side = |m: &RingMatrix| -> Result<(RingPoly, RingPoly)> {
            let (t, a) = (tr(m)?, at(m)?);
            Ok((&a + &(&xinv * &t), &t + &(&xyinv * &a)))
        };
        let (s_at, s_tr) = side(&self.s)?;
        let (t_at, t_tr) = side(&self.t)?;
        Ok(at(&ab)? == s_at && tr(&ab)? == s_tr && at(&ba)? == t_at && tr(&ba)? == t_tr)
    }
}

/// Blocks of a closed endomorphism together with `S, T`.
pub fn decompose_closed(ctx: &Rp2Context, f: &RingMatrix) -> Result<ClosedDecomposition> {
    if !ctx.delta(f).is_zero() {
        return Err(Error::NotClosed);
    }
    let (a, b, c, d) = f.blocks_of()?;
    let x = RingPoly::var(ctx.ring(), 0);
    let t = delta_u_preimage(&(&d + &a)).ok_or_else(|| consistency("D + A is not d_U-exact"))?;
    let s = delta_u_preimage(&(&c + &b.scale(&x))).ok_or_else(|| consistency("C + xB is not d_U-exact"))?;
    let dec = ClosedDecomposition { a, b, c, d, s, t };
    ensure(dec.closed_conditions_hold()?, "closed conditions")?;
    Ok(dec)
}

/// `f + alpha Id = d(witness)` with `alpha` in `span{1, x, x^2}`.
#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub alpha: RingPoly,
    pub witness: HomotopyWitness,
}

/// Normalizes a closed endomorphism to `alpha * Id` by four coboundaries:
/// `G1` clears the `(1,2)` block, `G2 = [[0,0],[S,0]]` the `(2,1)` block,
/// `G3 = [[0,0],[a2 U,0]]` the off-diagonal of the remaining `A = D`, and
/// `G4 = c1 dQ/dx + c2 dQ/dy` moves the scalar to its canonical form.
pub fn reduce_endomorphism(ctx: &Rp2Context, f: &RingMatrix) -> Result<ReductionResult> {
    if !ctx.delta(f).is_zero() {
        return Err(Error::NotClosed);
    }
    let ring = ctx.ring();
    let z2 = RingMatrix::zeros(ring, 2, 2);
    let p_ = |s: &str| ctx.poly(s);
    let y = RingPoly::var(ring, 1);

    let (_, b, _, _) = f.blocks_of()?;
    let (b1, b2, b3, b4) = (b.get(0, 0), b.get(0, 1), b.get(1, 0), b.get(1, 1));
    let num = &(b3 + &(&p_("x^-1")? * &(b1 + b4))) + &(&y * b2);
    let p = num
        .exact_divide(&p_("1 + x^-2*y^-1")?)?
        .ok_or_else(|| consistency("1 + x^-2 y^-1 does not divide at(B) + x^-1 tr(B)"))?;
    let xyinv_p = &p_("x^-1*y^-1")? * &p;
    let zero = RingPoly::zero(ring);
    let a1m = RingMatrix::from_rows(
        ring,
        vec![vec![zero.clone(), zero.clone()], vec![&y * b2, b4 + &xyinv_p]],
    )?;
    let b1m = RingMatrix::from_rows(
        ring,
        vec![vec![zero.clone(), zero.clone()], vec![xyinv_p.clone(), zero.clone()]],
    )?;
    let d1m = RingMatrix::from_rows(ring, vec![vec![b1.clone(), b2.clone()], vec![p.clone(), zero.clone()]])?;
    let g1 = RingMatrix::block2(&a1m, &b1m, &z2, &d1m)?;
    let f1 = f + &ctx.delta(&g1);
    let (_, bb, c1, _) = f1.blocks_of()?;
    ensure(bb.is_zero(), "first coboundary leaves a nonzero (1,2) block")?;

    let s1 = delta_u_preimage(&c1).ok_or_else(|| consistency("(2,1) block is not d_U-exact"))?;
    let g2 = RingMatrix::block2(&z2, &z2, &s1, &z2)?;
    let f2 = &f1 + &ctx.delta(&g2);
    let (a2m, bb, cc, d2m) = f2.blocks_of()?;
    ensure(
        bb.is_zero() && cc.is_zero(),
        "second coboundary leaves off-diagonal blocks",
    )?;
    ensure(a2m == d2m, "diagonal blocks differ")?;
    let (a1, a2) = (a2m.get(0, 0).clone(), a2m.get(0, 1).clone());
    ensure(
        *a2m.get(1, 1) == a1 && *a2m.get(1, 0) == &y * &a2,
        "diagonal block is not of the form [[a1, a2], [y a2, a1]]",
    )?;

    let g3 = RingMatrix::block2(&z2, &z2, &ctx.u.scale(&a2), &z2)?;
    let f3 = &f2 + &ctx.delta(&g3);
    let alpha_raw = &a1 + &(&p_("x^-1")? * &a2);
    ensure(
        f3 == ctx.identity(4).scale(&alpha_raw),
        "third coboundary does not reach a scalar",
    )?;

    let (alpha, k1, k2) = ctx.canonicalize(&alpha_raw)?;
    let g4 = &ctx.q().partial(0).scale(&k1) + &ctx.q().partial(1).scale(&k2);
    let f4 = &f3 + &ctx.delta(&g4);
    let alpha_id = ctx.identity(4).scale(&alpha);
    ensure(f4 == alpha_id, "fourth coboundary does not reach the canonical scalar")?;

    let g = &(&(&g1 + &g2) + &g3) + &g4;
    let claim = ctx.endomorphism(f + &alpha_id)?;
    let witness = HomotopyWitness::new(claim, g)?;
    Ok(ReductionResult { alpha, witness })
}

/// Cofactors `(c1, c2)` with `alpha = c1 (1 + x^-2 y^-1) + c2 (1 + x^-1 y^-2)`
/// for `d(f) = alpha Id`:
/// `c1 = xy (at T + x^-1 y^-1 at S)` and `c2 = xy (at B + x^-1 tr B)`.
pub fn obstruction_decomposition(ctx: &Rp2Context, f: &RingMatrix, alpha: &RingPoly) -> Result<(RingPoly, RingPoly)> {
    if ctx.delta(f) != ctx.identity(4).scale(alpha) {
        return Err(Error::Precondition("d(f) is not alpha * Id".into()));
    }
    let (a, b, c, d) = f.blocks_of()?;
    let x = RingPoly::var(ctx.ring(), 0);
    let t = delta_u_preimage(&(&d + &a)).ok_or_else(|| consistency("D + A is not d_U-exact"))?;
    let s = delta_u_preimage(&(&c + &b.scale(&x))).ok_or_else(|| consistency("C + xB is not d_U-exact"))?;
    let xy = ctx.poly("x*y")?;
    let c1 = &xy * &(&at(&t)? + &(&ctx.poly("x^-1*y^-1")? * &at(&s)?));
    let c2 = &xy * &(&at(&b)? + &(&ctx.poly("x^-1")? * &tr(&b)?));
    ensure(
        *alpha == &(&c1 * &ctx.dxw) + &(&c2 * &ctx.dyw),
        "alpha differs from c1 dW/dx + c2 dW/dy",
    )?;
    Ok((c1, c2))
}

/// One named check of a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub id: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(id: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            id: id.into(),
            pass,
            detail: detail.into(),
        }
    }

    /// An `Err` becomes a failing check carrying the error text.
    pub fn from_result(id: impl Into<String>, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((pass, detail)) => Check::new(id, pass, detail),
            Err(e) => Check::new(id, false, format!("error: {e}")),
        }
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{tag} {} {}", self.id, self.detail)
    }
}

/// `alpha * Id + d(g)` for random canonical `alpha` and `g` with entries in
/// `[-2,2]^2`, drawn from stream `index` of `seed`.
pub fn random_closed(ctx: &Rp2Context, seed: u64, index: u64) -> (RingPoly, RingMatrix) {
    let mut rng = sample::substream(seed, index);
    random_closed_from(ctx, &mut rng)
}

fn random_closed_from(ctx: &Rp2Context, rng: &mut SampleRng) -> (RingPoly, RingMatrix) {
    let ring = ctx.ring();
    let field = ring.field();
    let alpha = RingPoly::from_terms_raw(
        ring,
        (0..3).map(|i| (Exponents::from_slice(&[i, 0]), rng.gen_range(0..field.size()) as u8)),
    );
    let g = sample::random_matrix(ring, 4, 4, &Window::symmetric(ring, 2), 0.3, rng);
    let f = &ctx.identity(4).scale(&alpha) + &ctx.delta(&g);
    (alpha, f)
}

/// Runs [`reduce_endomorphism`] on `samples` random closed endomorphisms
/// with known `alpha`; returns the number of failures.
pub fn reduction_round_trips(ctx: &Rp2Context, samples: u64, seed: u64, exec: Exec) -> usize {
    exec.map((0..samples).collect(), |i| {
        let (alpha, f) = random_closed(ctx, seed, i);
        match reduce_endomorphism(ctx, &f) {
            Ok(r) => r.alpha == alpha && r.witness.verify(),
            Err(_) => false,
        }
    })
    .into_iter()
    .filter(|ok| !ok)
    .count()
}

/// Certificate that `alpha -> alpha * Id` is an isomorphism from the Jacobian
/// ring onto the endomorphisms of `Q` in the homotopy category.
pub fn closed_open_certify(ctx: &Rp2Context, seed: u64, samples: u64, exec: Exec) -> Vec<Check> {
    let mut checks = Vec::new();
    let id = Morphism::identity(ctx.mf());
    checks.push(Check::from_result(
        "closed_open.well_defined",
        (|| {
            let wx = id.jacobian_action_witness(0)?;
            let wy = id.jacobian_action_witness(1)?;
            Ok((
                wx.verify() && wy.verify(),
                "dW/dx Id and dW/dy Id are exact".to_string(),
            ))
        })(),
    ));
    let failures = reduction_round_trips(ctx, samples, seed, exec);
    checks.push(Check::new(
        "closed_open.surjective",
        failures == 0,
        format!("{samples} random closed endomorphisms reduced, failures={failures}"),
    ));
    checks.push(Check::from_result(
        "closed_open.injective_points",
        (|| {
            let f4 = crate::suite::cube_root_field(ctx.ring().field())?;
            let pts = cohomwin::find_critical_points(ctx.potential(), &f4)?;
            let classes: Vec<Morphism> = ["1", "x", "x^2"]
                .iter()
                .map(|s| Ok(id.scale(&ctx.poly(s)?)))
                .collect::<Result<_>>()?;
            let reports = pts
                .iter()
                .map(|p| cohomwin::certify_at_point(ctx.mf(), ctx.mf(), p, &classes))
                .collect::<Result<Vec<_>>>()?;
            let rank = cohomwin::joint_class_rank(&reports);
            Ok((
                pts.len() == 3 && rank == 3,
                format!("critical_points={} rank={rank}", pts.len()),
            ))
        })(),
    ));
    checks.push(Check::from_result(
        "closed_open.injective_ideal",
        (|| {
            let mut ok = true;
            for (i, alpha) in [&ctx.dxw, &ctx.dyw].into_iter().enumerate() {
                let g = ctx.q().partial(i);
                let (c1, c2) = obstruction_decomposition(ctx, &g, alpha)?;
                ok &= *alpha == &(&c1 * &ctx.dxw) + &(&c2 * &ctx.dyw);
            }
            Ok((ok, "exact scalars lie in the Jacobian ideal".to_string()))
        })(),
    ));
    checks.push(Check::from_result(
        "closed_open.dimension",
        (|| {
            let q = ctx.quotient()?;
            let dim = q.dimension();
            Ok((
                dim == Some(3),
                format!("dimension={}", dim.map_or("infinite".into(), |d| d.to_string())),
            ))
        })(),
    ));
    checks
}

/// Verifications for the `A_{2n-1}` factorizations
/// `Q = [[x^n, y], [y + xz, x^n]]` of `x^2n + y^2 + xyz` and
/// `R = [[x^n, y], [y, x^n]]` of `x^2n + y^2`.
pub struct AnCorpus {
    pub q: UngradedMF,
    pub r: UngradedMF,
}

impl AnCorpus {
    pub fn new(field: &FieldSpec, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("n must be positive".into()));
        }
        let rq = Ring::polynomial(field.clone(), &["x", "y", "z"])?;
        let rr = Ring::polynomial(field.clone(), &["x", "y"])?;
        let q = UngradedMF::new(
            RingPoly::parse(&format!("x^{} + y^2 + x*y*z", 2 * n), &rq)?,
            RingMatrix::parse(&format!("x^{n}, y; y + x*z, x^{n}"), &rq)?,
        )?;
        let r = UngradedMF::new(
            RingPoly::parse(&format!("x^{} + y^2", 2 * n), &rr)?,
            RingMatrix::parse(&format!("x^{n}, y; y, x^{n}"), &rr)?,
        )?;
        Ok(AnCorpus { q, r })
    }

    pub fn checks(&self, n: u32, d_max: u32, exec: Exec) -> Vec<Check> {
        let mut out = Vec::new();
        let tag = |s: &str| format!("an.{n}.{s}");
        out.push(Check::new(tag("factorizations"), true, "Q^2 = W Id and R^2 = W0 Id"));
        out.push(Check::from_result(
            tag("involution"),
            (|| {
                let rr = self.r.ring();
                let j = RingMatrix::parse("0, 1; 1, 0", rr)?;
                let jm = Morphism::new(&self.r, &self.r, j.clone())?;
                Ok((
                    jm.is_closed() && &j * &j == RingMatrix::identity(rr, 2),
                    "J closed, J^2 = Id".into(),
                ))
            })(),
        ));
        out.push(Check::from_result(
            tag("endomorphisms"),
            (|| {
                let rq = self.q.ring();
                let id = Morphism::identity(&self.q);
                let (x, z) = (RingPoly::var(rq, 0), RingPoly::var(rq, 2));
                let closed = id.scale(&x).is_closed() && id.scale(&z).is_closed();
                let w = id.jacobian_action_witness(1)?;
                let expect = RingMatrix::scalar_identity(&(&x * &z), 2);
                Ok((
                    closed && w.claim().matrix() == &expect && w.homotopy() == &self.q.matrix().partial(1),
                    "x Id, z Id closed; xz Id = d(dQ/dy)".into(),
                ))
            })(),
        ));
        out.push(Check::from_result(
            tag("jacobian"),
            (|| {
                let jq = groebner::laurent_jacobian_ideal(self.q.potential(), &TermOrder::grevlex(3))?;
                let jr = groebner::laurent_jacobian_ideal(self.r.potential(), &TermOrder::grevlex(2))?;
                let rq = &jq.ring;
                let mut gens = jq.basis.generators();
                gens.sort_by_key(|g| g.to_string());
                let expect: Vec<RingPoly> = ["x*y", "x*z", "y*z"]
                    .iter()
                    .map(|s| RingPoly::parse(s, rq))
                    .collect::<Result<_>>()?;
                let fq = QuotientRing::new(&jq.basis)?.is_finite();
                let fr = QuotientRing::new(&jr.basis)?.is_finite();
                Ok((
                    gens == expect && jr.basis.is_empty() && !fq && !fr,
                    format!(
                        "Jac(Q)=({}) infinite; Jac(R)=0 infinite",
                        expect.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(",")
                    ),
                ))
            })(),
        ));
        out.push(Check::from_result(
            tag("window_growth"),
            (|| {
                let h = cohomwin::cohomology_dims(&self.r, &self.r, d_max, exec)?;
                let growing = h.windows(2).skip(1).all(|w| w[0] < w[1]);
                Ok((growing, format!("h(R)={h:?}")))
            })(),
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Rp2Context {
        Rp2Context::new(&FieldSpec::gf2()).unwrap()
    }

    #[test]
    fn context_invariants() {
        let c = ctx();
        assert!(c.block_relations());
        assert!(c.homotopy_identity());
        assert!(Rp2Context::new(&FieldSpec::gf4()).is_ok());
    }

    #[test]
    fn tr_at_examples() {
        let c = ctx();
        let id = RingMatrix::identity(c.ring(), 2);
        assert!(tr(&id).unwrap().is_zero() && at(&id).unwrap().is_zero());
        assert!(tr(c.u()).unwrap().is_zero() && at(c.u()).unwrap().is_zero());
        assert!(tr(c.q()).is_err());
        assert_eq!(delta_u(c.u()).unwrap(), RingMatrix::zeros(c.ring(), 2, 2));
    }

    #[test]
    fn preimage_examples() {
        let c = ctx();
        let z = RingMatrix::zeros(c.ring(), 2, 2);
        assert_eq!(delta_u_preimage(&z), Some(z.clone()));
        let bad = RingMatrix::parse("1, 0; 1, 0", c.ring()).unwrap();
        assert_eq!(delta_u_preimage(&bad), None);
        let v = c.v().clone();
        let x = delta_u(&v).unwrap();
        assert_eq!(delta_u(&delta_u_preimage(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn trace_pairs_of_identity_and_u() {
        let c = ctx();
        assert!(trace_pair_check(&RingMatrix::identity(c.ring(), 2)).unwrap().holds());
        assert!(trace_pair_check(c.u()).unwrap().holds());
    }

    #[test]
    fn decompose_scalars() {
        let c = ctx();
        for s in ["1", "x"] {
            let f = RingMatrix::identity(c.ring(), 4).scale(&c.poly(s).unwrap());
            let d = decompose_closed(&c, &f).unwrap();
            assert!(d.b.is_zero() && d.c.is_zero() && d.s.is_zero() && d.t.is_zero());
            assert_eq!(d.reassemble(), f);
        }
        assert!(decompose_closed(&c, c.f_alpha()).is_ok());
        assert_eq!(decompose_closed(&c, c.homotopy_m()).unwrap_err(), Error::NotClosed);
    }

    #[test]
    fn reduce_examples() {
        let c = ctx();
        let id = RingMatrix::identity(c.ring(), 4);
        let r = reduce_endomorphism(&c, &id).unwrap();
        assert_eq!(r.alpha, c.poly("1").unwrap());
        assert!(r.witness.homotopy().is_zero());
        let r = reduce_endomorphism(&c, c.f_alpha()).unwrap();
        assert_eq!(r.alpha, c.poly("x^2").unwrap());
        let cube = &(c.f_alpha() * c.f_alpha()) * c.f_alpha();
        assert_eq!(reduce_endomorphism(&c, &cube).unwrap().alpha, c.poly("1").unwrap());
        let y = id.scale(&c.poly("y^-1").unwrap());
        assert_eq!(reduce_endomorphism(&c, &y).unwrap().alpha, c.poly("x^2").unwrap());
    }

    #[test]
    fn reduce_random() {
        let c = ctx();
        assert_eq!(reduction_round_trips(&c, 10, 3, Exec::Serial), 0);
        let c4 = Rp2Context::new(&FieldSpec::gf4()).unwrap();
        assert_eq!(reduction_round_trips(&c4, 5, 4, Exec::Parallel), 0);
    }

    #[test]
    fn obstruction_on_euler_instances() {
        let c = ctx();
        for i in 0..2 {
            let alpha = c.potential().partial(i);
            let (c1, c2) = obstruction_decomposition(&c, &c.q().partial(i), &alpha).unwrap();
            assert_eq!(alpha, &(&c1 * &c.dxw) + &(&c2 * &c.dyw));
        }
        let z = RingMatrix::zeros(c.ring(), 4, 4);
        let (c1, c2) = obstruction_decomposition(&c, &z, &RingPoly::zero(c.ring())).unwrap();
        assert!(c1.is_zero() && c2.is_zero());
        assert!(obstruction_decomposition(&c, &z, &c.poly("1").unwrap()).is_err());
    }

    #[test]
    fn canonical_forms() {
        let c = ctx();
        let (a, _, _) = c.canonicalize(&c.poly("x^-1 + y^5 + x*y").unwrap()).unwrap();
        // x^-1 -> x^2, y^5 -> x^2, xy -> x^2
        assert_eq!(a, c.poly("x^2").unwrap());
    }

    #[test]
    fn an_corpus_small() {
        let an = AnCorpus::new(&FieldSpec::gf2(), 1).unwrap();
        let checks = an.checks(1, 4, Exec::Serial);
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
        assert!(AnCorpus::new(&FieldSpec::gf2(), 0).is_err());
    }

    #[test]
    fn certification_passes() {
        let c = Rp2Context::new(&FieldSpec::gf4()).unwrap();
        let checks = closed_open_certify(&c, 1, 5, Exec::Parallel);
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
    }
}
