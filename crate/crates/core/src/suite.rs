//! The end-to-end verification suite, grouped into ten numbered criteria.
//!
//! Every check is deterministic given [`SuiteConfig::seed`].

use std::fmt;

use crate::cohomwin::{self, Window};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gf2k::{FieldElem, FieldSpec};
use crate::groebner::minimal_polynomial;
use crate::mfcore::{
    adjunction_transport, adjunction_transport_inverse, double, search_factorizations, verify_mf, Adjunction, GradedMF,
    GradedMorphism, Morphism, Parity, UngradedMF,
};
use crate::ringmat::RingMatrix;
use crate::ringpoly::{Exponents, Ring, RingPoly};
use crate::rp2::{self, AnCorpus, Check, Rp2Context};
use crate::sample;

use rand::Rng;

pub const CRITERIA: usize = 10;

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    /// Coefficient field of the projective-plane context.
    pub field: FieldSpec,
    pub seed: u64,
    pub exec: Exec,
    pub d_max: u32,
    pub budget_bits: u64,
    /// Random samples for the block and reduction checks.
    pub samples: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            field: FieldSpec::gf2(),
            seed: sample::DEFAULT_SEED,
            exec: Exec::Parallel,
            d_max: 6,
            budget_bits: 24,
            samples: 100,
        }
    }
}

/// The smallest field of the form GF(2^(k or 2k)) containing `f` and the cube
/// roots of unity.
pub fn cube_root_field(f: &FieldSpec) -> Result<FieldSpec> {
    if f.degree().is_multiple_of(2) {
        Ok(f.clone())
    } else {
        FieldSpec::with_default_modulus(2 * f.degree())
    }
}

fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

/// Checks of criterion `n` (1-based).
pub fn criterion(n: usize, cfg: &SuiteConfig) -> Vec<Check> {
    let ctx = match Rp2Context::with_seed(&cfg.field, cfg.seed) {
        Ok(c) => c,
        Err(e) => return vec![Check::new("context", false, format!("error: {e}"))],
    };
    match n {
        1 => factorizations(&ctx),
        2 => block_identities(&ctx, cfg),
        3 => jacobian(&ctx),
        4 => normalization(&ctx, cfg),
        5 => obstruction(&ctx),
        6 => support(&ctx, cfg),
        7 => windows(&ctx, cfg),
        8 => alpha_endomorphism(&ctx),
        9 => functors(cfg),
        10 => search(cfg),
        _ => vec![Check::new(format!("criterion.{n}"), false, "no such criterion")],
    }
}

pub fn factorizations(ctx: &Rp2Context) -> Vec<Check> {
    let mut out = vec![Check::from_result(
        "factorization.rp2",
        verify_mf(ctx.q(), ctx.potential()).map(|r| (r.ok, format!("residual_terms={}", r.residual_terms()))),
    )];
    for n in 1..=4 {
        out.push(Check::from_result(
            format!("factorization.an.{n}"),
            AnCorpus::new(ctx.ring().field(), n).map(|_| (true, "Q(n) and R(n) verify".to_string())),
        ));
    }
    out
}

pub fn block_identities(ctx: &Rp2Context, cfg: &SuiteConfig) -> Vec<Check> {
    let ring = ctx.ring();
    let win = Window::symmetric(ring, 2);
    let mut rng = sample::rng(cfg.seed);
    let n = cfg.samples;
    let mut formula_fail = 0;
    let mut acyclic_fail = 0;
    let mut trace_fail = 0;
    let mut kernel_fail = 0;
    for _ in 0..n {
        let f = sample::random_matrix(ring, 2, 2, &win, 0.4, &mut rng);
        let du = rp2::delta_u(&f).unwrap();
        if du != rp2::delta_u_formula(&f).unwrap() {
            formula_fail += 1;
        }
        match rp2::delta_u_preimage(&du) {
            Some(p) if rp2::delta_u(&p).unwrap() == du => {}
            _ => acyclic_fail += 1,
        }
        if !rp2::trace_pair_check(&f).map(|r| r.holds()).unwrap_or(false) {
            trace_fail += 1;
        }
        // tr(VF) = at(VF) = 0 is a linear system in (tr F, at F) with
        // determinant 1 + x^-2 y^-1, so its only solution is zero: F = [[a,b],[yb,a]].
        let (a, b) = (f.get(0, 0).clone(), f.get(0, 1).clone());
        let y = RingPoly::var(ring, 1);
        let g = RingMatrix::from_rows(ring, vec![vec![a.clone(), b.clone()], vec![&y * &b, a]]).unwrap();
        let vg = ctx.v() * &g;
        let ok = rp2::tr(&vg).unwrap().is_zero()
            && rp2::at(&vg).unwrap().is_zero()
            && rp2::tr(&g).unwrap().is_zero()
            && rp2::at(&g).unwrap().is_zero()
            && rp2::delta_u(&g).unwrap().is_zero();
        if !ok {
            kernel_fail += 1;
        }
    }
    vec![
        Check::new(
            "blocks.relations",
            ctx.block_relations(),
            "U^2 = y Id, V^2 = (1+x^-2y^-1) Id, UV = VU = x^-1 Id + U",
        ),
        Check::new(
            "blocks.delta_u",
            formula_fail == 0,
            format!("samples={n} failures={formula_fail}"),
        ),
        Check::new(
            "blocks.acyclic",
            acyclic_fail == 0,
            format!("samples={n} failures={acyclic_fail}"),
        ),
        Check::new(
            "blocks.trace_pair",
            trace_fail == 0,
            format!("samples={n} failures={trace_fail}"),
        ),
        Check::new(
            "blocks.kernel",
            kernel_fail == 0,
            format!("samples={n} failures={kernel_fail}"),
        ),
    ]
}

pub fn jacobian(ctx: &Rp2Context) -> Vec<Check> {
    vec![Check::from_result(
        "jacobian.rp2",
        (|| {
            let q = ctx.quotient()?;
            let dim = q
                .dimension()
                .ok_or_else(|| Error::Consistency("infinite quotient".into()))?;
            let mx = q
                .mult_matrix(0)
                .ok_or_else(|| Error::Consistency("no multiplication matrix".into()))?;
            let mp = minimal_polynomial(mx, "x")?;
            let expect = RingPoly::parse("x^3 + 1", mp.ring())?;
            Ok((dim == 3 && mp == expect, format!("dimension={dim} minpoly(x)={mp}")))
        })(),
    )]
}

pub fn normalization(ctx: &Rp2Context, cfg: &SuiteConfig) -> Vec<Check> {
    let failures = rp2::reduction_round_trips(ctx, cfg.samples, cfg.seed, cfg.exec);
    let retraction = (|| {
        for s in ["0", "1", "x", "x^2", "1 + x + x^2"] {
            let alpha = ctx.poly(s)?;
            let r = rp2::reduce_endomorphism(ctx, &RingMatrix::identity(ctx.ring(), 4).scale(&alpha))?;
            if r.alpha != alpha || !r.witness.verify() {
                return Ok((false, format!("alpha={s}")));
            }
        }
        Ok((true, "canonical scalars are fixed".to_string()))
    })();
    vec![
        Check::new(
            "reduce.random",
            failures == 0,
            format!("samples={} failures={failures}", cfg.samples),
        ),
        Check::from_result("reduce.retraction", retraction),
    ]
}

pub fn obstruction(ctx: &Rp2Context) -> Vec<Check> {
    ["x", "y"]
        .iter()
        .enumerate()
        .map(|(i, v)| {
            Check::from_result(
                format!("obstruction.d{v}"),
                (|| {
                    let alpha = ctx.potential().partial(i);
                    let (c1, c2) = rp2::obstruction_decomposition(ctx, &ctx.q().partial(i), &alpha)?;
                    Ok((true, format!("c1={c1} c2={c2}")))
                })(),
            )
        })
        .collect()
}

pub fn support(ctx: &Rp2Context, cfg: &SuiteConfig) -> Vec<Check> {
    let r = (|| {
        let ext = cube_root_field(ctx.ring().field())?;
        let x = ctx.mf();
        let pts = cohomwin::find_critical_points(x.potential(), &ext)?;
        let id = Morphism::identity(x);
        let classes: Vec<Morphism> = ["1", "x", "x^2"]
            .iter()
            .map(|s| Ok(id.scale(&ctx.poly(s)?)))
            .collect::<Result<_>>()?;
        let mut reports = Vec::new();
        let mut critical_ok = pts.len() == 3 && pts.iter().all(|p| p[0] == p[1]);
        for p in &pts {
            let rep = cohomwin::certify_at_point(x, x, p, &classes)?;
            critical_ok &= rep.local_dim > 0 && rep.nonexact_classes().contains(&0);
            reports.push(rep);
        }
        let rank = cohomwin::joint_class_rank(&reports);

        let mut rng = sample::rng(cfg.seed);
        let elems: Vec<FieldElem> = ext.enumerate().into_iter().filter(|e| !e.is_zero()).collect();
        let mut regular_ok = true;
        let mut tested = 0;
        while tested < 5 {
            let p = vec![
                elems[rng.gen_range(0..elems.len())].clone(),
                elems[rng.gen_range(0..elems.len())].clone(),
            ];
            if pts.contains(&p) {
                continue;
            }
            tested += 1;
            let rep = cohomwin::certify_at_point(x, x, &p, std::slice::from_ref(&id))?;
            let dir = (0..2)
                .find(|&i| {
                    !x.potential()
                        .partial(i)
                        .evaluate(&p)
                        .map(|v| v.is_zero())
                        .unwrap_or(true)
                })
                .ok_or_else(|| Error::Consistency("regular point with vanishing gradient".into()))?;
            regular_ok &= rep.local_dim == 0 && x.contract_at_noncritical(&p, dir).is_ok();
        }
        Ok(vec![
            Check::new(
                "support.critical",
                critical_ok,
                format!("field=GF(2^{}) critical_points={}", ext.degree(), pts.len()),
            ),
            Check::new(
                "support.regular",
                regular_ok,
                "5 random regular points: local dim 0, contraction verified",
            ),
            Check::new("support.independence", rank == 3, format!("rank={rank}")),
        ])
    })();
    r.unwrap_or_else(|e: Error| vec![Check::new("support", false, format!("error: {e}"))])
}

fn strictly_increasing_from_2(h: &[usize]) -> bool {
    h.windows(2).skip(1).all(|w| w[0] < w[1])
}

pub fn windows(ctx: &Rp2Context, cfg: &SuiteConfig) -> Vec<Check> {
    let field = ctx.ring().field();
    let mut out = vec![Check::from_result(
        "window.rp2",
        cohomwin::cohomology_dims(ctx.mf(), ctx.mf(), cfg.d_max, cfg.exec)
            .map(|h| (h[1..].iter().all(|&v| v == 3), format!("h={h:?}"))),
    )];
    out.push(Check::from_result(
        "window.an_r1",
        AnCorpus::new(field, 1)
            .and_then(|an| cohomwin::cohomology_dims(&an.r, &an.r, cfg.d_max, cfg.exec))
            .map(|h| (strictly_increasing_from_2(&h), format!("h={h:?}"))),
    ));
    out.push(Check::from_result(
        "window.x_plus_y",
        (|| {
            let r = Ring::polynomial(field.clone(), &["x", "y"])?;
            let x = UngradedMF::new(RingPoly::parse("x^2 + y^2", &r)?, RingMatrix::parse("x + y", &r)?)?;
            let h = cohomwin::cohomology_dims(&x, &x, cfg.d_max, cfg.exec)?;
            Ok((strictly_increasing_from_2(&h), format!("h={h:?}")))
        })(),
    ));
    out
}

pub fn alpha_endomorphism(ctx: &Rp2Context) -> Vec<Check> {
    let fa = ctx.f_alpha();
    vec![
        Check::new(
            "f_alpha.identity",
            ctx.homotopy_identity(),
            "[Q, M] = F_alpha + x^-1 Id",
        ),
        Check::from_result(
            "f_alpha.reduce",
            rp2::reduce_endomorphism(ctx, fa).and_then(|r| {
                let x2 = ctx.poly("x^2")?;
                Ok((r.alpha == x2, format!("alpha={}", r.alpha)))
            }),
        ),
        Check::from_result(
            "f_alpha.cube",
            rp2::reduce_endomorphism(ctx, &(&(fa * fa) * fa)).map(|r| (r.alpha.is_one(), format!("alpha={}", r.alpha))),
        ),
    ]
}

/// Round trips and intertwining of both adjunctions on random morphisms
/// between `forget(double(R))` and `R` for `R = [[x, y], [y, x]]`.
pub fn functors(cfg: &SuiteConfig) -> Vec<Check> {
    let r = (|| {
        let ring = Ring::polynomial(cfg.field.clone(), &["x", "y"])?;
        let y = UngradedMF::new(
            RingPoly::parse("x^2 + y^2", &ring)?,
            RingMatrix::parse("x, y; y, x", &ring)?,
        )?;
        let x: GradedMF = double(&y);
        let fx = x.forget();
        let rp2_ctx = Rp2Context::with_seed(&cfg.field, cfg.seed)?;
        let d = double(rp2_ctx.mf());
        let invariants = verify_mf(fx.matrix(), fx.potential())?.ok
            && fx.size() == 2 * y.size()
            && GradedMF::new(d.potential().clone(), d.q0().clone(), d.q1().clone()).is_ok();

        let win = Window::symmetric(&ring, 2);
        let mut rng = sample::rng(cfg.seed);
        let mut failures = 0;
        let trials = 20;
        for _ in 0..trials {
            let left = Morphism::new(&fx, &y, sample::random_matrix(&ring, 2, 4, &win, 0.4, &mut rng))?;
            let right = Morphism::new(&y, &fx, sample::random_matrix(&ring, 4, 2, &win, 0.4, &mut rng))?;
            for (dir, phi) in [(Adjunction::ForgetLeft, &left), (Adjunction::ForgetRight, &right)] {
                if !adjunction_round_trip(dir, &x, &y, phi)? {
                    failures += 1;
                }
            }
        }
        let zero = Morphism::zero(&fx, &y)?;
        let zero_ok = adjunction_transport(Adjunction::ForgetLeft, &x, &y, &zero, Parity::Even)?
            .f
            .is_zero();
        Ok(vec![
            Check::new(
                "functors.invariants",
                invariants,
                "forget(double(X)) verifies, double(Q) is graded",
            ),
            Check::new(
                "functors.adjunction",
                failures == 0 && zero_ok,
                format!("trials={trials} directions=2 failures={failures}"),
            ),
        ])
    })();
    r.unwrap_or_else(|e: Error| vec![Check::new("functors", false, format!("error: {e}"))])
}

/// Both parities: inverse(transport(phi)) = phi, `d` intertwines with the
/// parity flip, and closed maps to closed.
pub fn adjunction_round_trip(dir: Adjunction, x: &GradedMF, y: &UngradedMF, phi: &Morphism) -> Result<bool> {
    let dphi = phi.differential();
    for parity in [Parity::Even, Parity::Odd] {
        let t: GradedMorphism = adjunction_transport(dir, x, y, phi, parity)?;
        if adjunction_transport_inverse(dir, x, y, &t)? != *phi {
            return Ok(false);
        }
        let dt = t.differential();
        let td = adjunction_transport(dir, x, y, &dphi, parity.flip())?;
        if dt != td {
            return Ok(false);
        }
        if !adjunction_transport(dir, x, y, &dphi, parity)?.is_closed() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn search(cfg: &SuiteConfig) -> Vec<Check> {
    let r = (|| {
        let ring = Ring::polynomial(FieldSpec::gf2(), &["x", "y"])?;
        let w = RingPoly::parse("x^2 + y^2", &ring)?;
        let support: Vec<Exponents> = vec![Exponents::from_slice(&[1, 0]), Exponents::from_slice(&[0, 1])];
        let one = search_factorizations(&w, 1, &support, cfg.budget_bits, cfg.exec)?;
        let two = search_factorizations(&w, 2, &support, cfg.budget_bits, cfg.exec)?;
        let all_verify = one
            .iter()
            .chain(&two)
            .all(|q| verify_mf(q, &w).map(|r| r.ok).unwrap_or(false));
        let expect_one = vec![RingMatrix::parse("x + y", &ring)?];
        let a1 = RingMatrix::parse("x, y; y, x", &ring)?;
        Ok(vec![
            Check::new("search.size1", one == expect_one, format!("found={}", one.len())),
            Check::new("search.size2", two.contains(&a1), format!("found={}", two.len())),
            Check::new("search.verified", all_verify, "every result passes verification"),
        ])
    })();
    r.unwrap_or_else(|e: Error| vec![Check::new("search", false, format!("error: {e}"))])
}

/// All criteria followed by the closed-open certificate and the `A_{2n-1}`
/// corpus checks.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.pass).count()
    }

    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }

    pub fn all_pass(&self) -> bool {
        all_pass(&self.checks)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        write!(
            f,
            "summary passed={} failed={} seed={}",
            self.passed(),
            self.failed(),
            self.seed
        )
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut checks: Vec<Check> = (1..=CRITERIA).flat_map(|n| criterion(n, cfg)).collect();
    match Rp2Context::with_seed(&cfg.field, cfg.seed) {
        Ok(ctx) => {
            let cert_ctx = cube_root_field(&cfg.field).and_then(|f| Rp2Context::with_seed(&f, cfg.seed));
            match cert_ctx {
                Ok(c4) => checks.extend(rp2::closed_open_certify(&c4, cfg.seed, cfg.samples.min(20), cfg.exec)),
                Err(e) => checks.push(Check::new("closed_open", false, format!("error: {e}"))),
            }
            drop(ctx);
        }
        Err(e) => checks.push(Check::new("context", false, format!("error: {e}"))),
    }
    for n in 1..=4 {
        match AnCorpus::new(&cfg.field, n) {
            Ok(an) => checks.extend(an.checks(n, cfg.d_max.min(5), cfg.exec)),
            Err(e) => checks.push(Check::new(format!("an.{n}"), false, format!("error: {e}"))),
        }
    }
    SuiteReport { seed: cfg.seed, checks }
}

/// Whether every check of criterion `n` passes.
pub fn criterion_passes(n: usize, cfg: &SuiteConfig) -> bool {
    all_pass(&criterion(n, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root_fields() {
        assert_eq!(cube_root_field(&FieldSpec::gf2()).unwrap().degree(), 2);
        assert_eq!(cube_root_field(&FieldSpec::gf4()).unwrap().degree(), 2);
        assert_eq!(
            cube_root_field(&FieldSpec::with_default_modulus(3).unwrap())
                .unwrap()
                .degree(),
            6
        );
        assert!(cube_root_field(&FieldSpec::with_default_modulus(5).unwrap()).is_err());
    }

    #[test]
    fn unknown_criterion_fails() {
        assert!(!criterion_passes(11, &SuiteConfig::default()));
    }

    #[test]
    fn small_criteria_pass() {
        let cfg = SuiteConfig {
            samples: 5,
            d_max: 3,
            ..SuiteConfig::default()
        };
        for n in [1, 2, 3, 5, 8, 9, 10] {
            let checks = criterion(n, &cfg);
            assert!(all_pass(&checks), "criterion {n}: {checks:?}");
        }
    }
}
