//! The differential category of ungraded matrix factorizations.
//!
//! Objects are square matrices `Q` with `Q^2 = W * Id`; morphisms are
//! arbitrary matrices with differential `d(f) = R f + f Q`. Everything here is
//! characteristic 2, so no signs appear anywhere.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gf2k::{FieldElem, FieldSpec};
use crate::ringmat::{FieldMatrix, RingMatrix};
use crate::ringpoly::{Exponents, Ring, RingPoly};

/// Outcome of checking `Q^2 = W * Id`.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub ok: bool,
    /// `Q^2 + W * Id`; zero exactly when `ok`.
    pub residual: RingMatrix,
}

impl VerifyReport {
    pub fn residual_terms(&self) -> usize {
        self.residual.num_terms()
    }
}

pub fn verify_mf(q: &RingMatrix, w: &RingPoly) -> Result<VerifyReport> {
    if !q.is_square() {
        return Err(Error::DimensionMismatch("factorization matrix must be square".into()));
    }
    if q.ring() != w.ring() {
        return Err(Error::RingMismatch);
    }
    let residual = &(q * q) + &RingMatrix::scalar_identity(w, q.rows());
    Ok(VerifyReport {
        ok: residual.is_zero(),
        residual,
    })
}

/// A verified ungraded matrix factorization `(W, Q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UngradedMF {
    w: RingPoly,
    q: RingMatrix,
}

impl UngradedMF {
    /// Rejects `q` unless `q^2 = w * Id`.
    pub fn new(w: RingPoly, q: RingMatrix) -> Result<Self> {
        let report = verify_mf(&q, &w)?;
        if !report.ok {
            return Err(Error::NotFactorization {
                residual_terms: report.residual_terms(),
            });
        }
        Ok(UngradedMF { w, q })
    }

    pub fn potential(&self) -> &RingPoly {
        &self.w
    }

    pub fn matrix(&self) -> &RingMatrix {
        &self.q
    }

    pub fn size(&self) -> usize {
        self.q.rows()
    }

    pub fn ring(&self) -> &Ring {
        self.q.ring()
    }

    /// `dQ/dz_i Q + Q dQ/dz_i` against `dW/dz_i Id`.
    pub fn euler_identity_check(&self, i: usize) -> EulerReport {
        let dq = self.q.partial(i);
        let lhs = &(&dq * &self.q) + &(&self.q * &dq);
        let rhs = RingMatrix::scalar_identity(&self.w.partial(i), self.size());
        EulerReport {
            holds: lhs == rhs,
            lhs,
            rhs,
        }
    }

    /// The contracting homotopy `(dW/dz_i(p))^-1 dQ/dz_i(p)` at a point
    /// where `dW/dz_i` does not vanish, checked against `Q(p) h + h Q(p) = Id`.
    pub fn contract_at_noncritical(&self, point: &[FieldElem], i: usize) -> Result<FieldMatrix> {
        let dw = self.w.partial(i).evaluate(point)?;
        if dw.is_zero() {
            return Err(Error::CriticalDirection(i));
        }
        let inv = dw.invert()?;
        let dq = self.q.partial(i).specialize(point)?;
        let spec = inv.spec().clone();
        let mut h = FieldMatrix::zeros(&spec, self.size(), self.size());
        for r in 0..self.size() {
            for c in 0..self.size() {
                h.set(r, c, &(&inv * &dq.get(r, c)));
            }
        }
        let qp = self.q.specialize(point)?;
        let check = qp.mul(&h)?.add(&h.mul(&qp)?)?;
        if check != FieldMatrix::identity(&spec, self.size()) {
            return Err(Error::Consistency("contraction fails Q(p)h + hQ(p) = Id".into()));
        }
        Ok(h)
    }
}

#[derive(Debug, Clone)]
pub struct EulerReport {
    pub holds: bool,
    pub lhs: RingMatrix,
    pub rhs: RingMatrix,
}

/// A matrix `f : source -> target` between factorizations of the same potential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    source: UngradedMF,
    target: UngradedMF,
    f: RingMatrix,
}

impl Morphism {
    pub fn new(source: &UngradedMF, target: &UngradedMF, f: RingMatrix) -> Result<Self> {
        if source.ring() != target.ring() || f.ring() != source.ring() {
            return Err(Error::RingMismatch);
        }
        if source.w != target.w {
            return Err(Error::PotentialMismatch);
        }
        if f.rows() != target.size() || f.cols() != source.size() {
            return Err(Error::DimensionMismatch(format!(
                "morphism {}x{} between sizes {} -> {}",
                f.rows(),
                f.cols(),
                source.size(),
                target.size()
            )));
        }
        Ok(Morphism {
            source: source.clone(),
            target: target.clone(),
            f,
        })
    }

    pub fn identity(x: &UngradedMF) -> Self {
        Morphism {
            source: x.clone(),
            target: x.clone(),
            f: RingMatrix::identity(x.ring(), x.size()),
        }
    }

    pub fn zero(source: &UngradedMF, target: &UngradedMF) -> Result<Self> {
        Self::new(
            source,
            target,
            RingMatrix::zeros(source.ring(), target.size(), source.size()),
        )
    }

    pub fn source(&self) -> &UngradedMF {
        &self.source
    }

    pub fn target(&self) -> &UngradedMF {
        &self.target
    }

    pub fn matrix(&self) -> &RingMatrix {
        &self.f
    }

    /// Same endpoints, different matrix.
    pub fn with_matrix(&self, f: RingMatrix) -> Result<Self> {
        Morphism::new(&self.source, &self.target, f)
    }

    /// `d(f) = R f + f Q`.
    pub fn differential(&self) -> Morphism {
        let f = &(self.target.matrix() * &self.f) + &(&self.f * self.source.matrix());
        Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            f,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.differential().f.is_zero()
    }

    /// `self . first`, i.e. apply `first` and then `self`.
    pub fn compose(&self, first: &Morphism) -> Result<Morphism> {
        if first.target != self.source {
            return Err(Error::DimensionMismatch("morphisms are not composable".into()));
        }
        Ok(Morphism {
            source: first.source.clone(),
            target: self.target.clone(),
            f: &self.f * &first.f,
        })
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::DimensionMismatch("morphisms have different endpoints".into()));
        }
        self.with_matrix(&self.f + &other.f)
    }

    pub fn scale(&self, c: &RingPoly) -> Morphism {
        Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            f: self.f.scale(c),
        }
    }

    /// The Jacobian action: for closed `f`, `g = f dQ/dz_i` satisfies
    /// `d(g) = (dW/dz_i) f`. The witness is verified before it is returned.
    pub fn jacobian_action_witness(&self, i: usize) -> Result<HomotopyWitness> {
        if !self.is_closed() {
            return Err(Error::NotClosed);
        }
        let g = &self.f * &self.source.q.partial(i);
        let claim = self.scale(&self.source.w.partial(i));
        HomotopyWitness::new(claim, g)
    }
}

/// A certificate `d(g) = f`, checked on construction.
#[derive(Debug, Clone)]
pub struct HomotopyWitness {
    claim: Morphism,
    g: RingMatrix,
}

impl HomotopyWitness {
    pub fn new(claim: Morphism, g: RingMatrix) -> Result<Self> {
        let w = HomotopyWitness { claim, g };
        if !w.verify() {
            return Err(Error::Consistency("homotopy witness fails d(g) = f".into()));
        }
        Ok(w)
    }

    pub fn claim(&self) -> &Morphism {
        &self.claim
    }

    pub fn homotopy(&self) -> &RingMatrix {
        &self.g
    }

    /// Re-checks `R g + g Q = f` symbolically.
    pub fn verify(&self) -> bool {
        let Ok(g) = self.claim.with_matrix(self.g.clone()) else {
            return false;
        };
        g.differential().f == self.claim.f
    }
}

/// A Z/2-graded factorization `Q0 Q1 = Q1 Q0 = W Id`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMF {
    w: RingPoly,
    q0: RingMatrix,
    q1: RingMatrix,
}

impl GradedMF {
    pub fn new(w: RingPoly, q0: RingMatrix, q1: RingMatrix) -> Result<Self> {
        if q0.rows() != q0.cols() || q1.rows() != q1.cols() || q0.rows() != q1.rows() {
            return Err(Error::DimensionMismatch("graded factorization blocks".into()));
        }
        let wid = RingMatrix::scalar_identity(&w, q0.rows());
        if &q0 * &q1 != wid || &q1 * &q0 != wid {
            let residual = &(&q0 * &q1) + &wid;
            return Err(Error::NotFactorization {
                residual_terms: residual.num_terms(),
            });
        }
        Ok(GradedMF { w, q0, q1 })
    }

    pub fn potential(&self) -> &RingPoly {
        &self.w
    }

    pub fn rank(&self) -> usize {
        self.q0.rows()
    }

    pub fn q0(&self) -> &RingMatrix {
        &self.q0
    }

    pub fn q1(&self) -> &RingMatrix {
        &self.q1
    }

    /// The odd block matrix `[[0, Q0], [Q1, 0]]` on `E0 + E1`.
    pub fn block_matrix(&self) -> RingMatrix {
        let z = RingMatrix::zeros(self.q0.ring(), self.rank(), self.rank());
        RingMatrix::block2(&z, &self.q0, &self.q1, &z).unwrap()
    }

    /// Forget the grading.
    pub fn forget(&self) -> UngradedMF {
        UngradedMF {
            w: self.w.clone(),
            q: self.block_matrix(),
        }
    }
}

/// Doubling: `Q0 = Q1 = Q`.
pub fn double(x: &UngradedMF) -> GradedMF {
    GradedMF {
        w: x.w.clone(),
        q0: x.q.clone(),
        q1: x.q.clone(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// A homogeneous morphism of graded factorizations, stored as its full block
/// matrix from `source.E0 + source.E1` to `target.E0 + target.E1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMorphism {
    pub source: GradedMF,
    pub target: GradedMF,
    pub parity: Parity,
    pub f: RingMatrix,
}

impl GradedMorphism {
    /// `d(f) = Q_target f + f Q_source`; flips parity.
    pub fn differential(&self) -> GradedMorphism {
        let f = &(&self.target.block_matrix() * &self.f) + &(&self.f * &self.source.block_matrix());
        GradedMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            parity: self.parity.flip(),
            f,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.differential().f.is_zero()
    }
}

/// Which of the two adjunctions between forgetting and doubling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Adjunction {
    /// `Hom(F X, Y) = Hom(X, D Y)`.
    ForgetLeft,
    /// `Hom(Y, F X) = Hom(D Y, X)`.
    ForgetRight,
}

/// Splits `m` into its first `k` and remaining columns (or rows).
fn split_cols(m: &RingMatrix, k: usize) -> (RingMatrix, RingMatrix) {
    let ring = m.ring();
    let mut a = RingMatrix::zeros(ring, m.rows(), k);
    let mut b = RingMatrix::zeros(ring, m.rows(), m.cols() - k);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if j < k {
                a.set(i, j, m.get(i, j).clone());
            } else {
                b.set(i, j - k, m.get(i, j).clone());
            }
        }
    }
    (a, b)
}

fn hcat(a: &RingMatrix, b: &RingMatrix) -> RingMatrix {
    let mut out = RingMatrix::zeros(a.ring(), a.rows(), a.cols() + b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.set(i, j, a.get(i, j).clone());
        }
        for j in 0..b.cols() {
            out.set(i, a.cols() + j, b.get(i, j).clone());
        }
    }
    out
}

/// Block matrix from four (not necessarily square) blocks.
fn blocks(a: &RingMatrix, b: &RingMatrix, c: &RingMatrix, d: &RingMatrix) -> RingMatrix {
    let top = hcat(a, b);
    let bottom = hcat(c, d);
    hcat(&top.transpose(), &bottom.transpose()).transpose()
}

/// Chain-level adjunction isomorphism between the ungraded hom-complex and
/// one parity of the graded hom-complex.
///
/// For [`Adjunction::ForgetLeft`], `phi : F(x) -> y` splits as `[phi0 | phi1]`
/// along `E0 + E1`; its even image is `diag(phi0, phi1) : x -> D(y)` and its
/// odd image is `[[0, phi1], [phi0, 0]]`. The differential of the even image
/// is the odd image of `d(phi)` and vice versa, so the even part computes the
/// same cohomology as the ungraded complex.
pub fn adjunction_transport(
    dir: Adjunction,
    x: &GradedMF,
    y: &UngradedMF,
    phi: &Morphism,
    parity: Parity,
) -> Result<GradedMorphism> {
    let fx = x.forget();
    let k = x.rank();
    let ring = y.ring();
    match dir {
        Adjunction::ForgetLeft => {
            if phi.source != fx || phi.target != *y {
                return Err(Error::DimensionMismatch("expected a morphism F(X) -> Y".into()));
            }
            let (p0, p1) = split_cols(&phi.f, k);
            let z = RingMatrix::zeros(ring, y.size(), k);
            let f = match parity {
                Parity::Even => blocks(&p0, &z, &z, &p1),
                Parity::Odd => blocks(&z, &p1, &p0, &z),
            };
            Ok(GradedMorphism {
                source: x.clone(),
                target: double(y),
                parity,
                f,
            })
        }
        Adjunction::ForgetRight => {
            if phi.source != *y || phi.target != fx {
                return Err(Error::DimensionMismatch("expected a morphism Y -> F(X)".into()));
            }
            let (p0, p1) = split_cols(&phi.f.transpose(), k);
            let (p0, p1) = (p0.transpose(), p1.transpose());
            let z = RingMatrix::zeros(ring, k, y.size());
            let f = match parity {
                Parity::Even => blocks(&p0, &z, &z, &p1),
                Parity::Odd => blocks(&z, &p0, &p1, &z),
            };
            Ok(GradedMorphism {
                source: double(y),
                target: x.clone(),
                parity,
                f,
            })
        }
    }
}

/// Inverse of [`adjunction_transport`].
pub fn adjunction_transport_inverse(
    dir: Adjunction,
    x: &GradedMF,
    y: &UngradedMF,
    psi: &GradedMorphism,
) -> Result<Morphism> {
    let fx = x.forget();
    let (a, b, c, d) = split_blocks(&psi.f, psi.f.rows() / 2, psi.f.cols() / 2);
    match dir {
        Adjunction::ForgetLeft => {
            if psi.source != *x || psi.target != double(y) {
                return Err(Error::DimensionMismatch("expected a morphism X -> D(Y)".into()));
            }
            let phi = match psi.parity {
                Parity::Even => hcat(&a, &d),
                Parity::Odd => hcat(&c, &b),
            };
            Morphism::new(&fx, y, phi)
        }
        Adjunction::ForgetRight => {
            if psi.source != double(y) || psi.target != *x {
                return Err(Error::DimensionMismatch("expected a morphism D(Y) -> X".into()));
            }
            let phi = match psi.parity {
                Parity::Even => hcat(&a.transpose(), &d.transpose()).transpose(),
                Parity::Odd => hcat(&b.transpose(), &c.transpose()).transpose(),
            };
            Morphism::new(y, &fx, phi)
        }
    }
}

fn split_blocks(m: &RingMatrix, r: usize, c: usize) -> (RingMatrix, RingMatrix, RingMatrix, RingMatrix) {
    let (left, right) = split_cols(m, c);
    let (a, cc) = split_cols(&left.transpose(), r);
    let (b, d) = split_cols(&right.transpose(), r);
    (a.transpose(), b.transpose(), cc.transpose(), d.transpose())
}

/// Every `n x n` matrix with entries supported on `support` whose square is
/// `W * Id`, in assignment order.
///
/// Unknowns are the coefficients of each support monomial in each entry;
/// the search is exhaustive over `|support| * n^2 * k` bits and refuses to run
/// when that exceeds `budget_bits`.
pub fn search_factorizations(
    w: &RingPoly,
    size: usize,
    support: &[Exponents],
    budget_bits: u64,
    exec: Exec,
) -> Result<Vec<RingMatrix>> {
    let ring = w.ring();
    let field: &FieldSpec = ring.field();
    for s in support {
        if s.len() != ring.nvars() {
            return Err(Error::DimensionMismatch("support monomial length".into()));
        }
        ring.check_exponents(s)?;
    }
    let mut support: Vec<Exponents> = support.to_vec();
    support.sort();
    support.dedup();
    let k = field.degree() as u64;
    let s = support.len();
    let required = s as u64 * (size * size) as u64 * k;
    if required > budget_bits || required >= 63 {
        return Err(Error::BudgetExceeded {
            required,
            budget: budget_bits,
        });
    }

    // Index every product of two support monomials.
    let mut products: Vec<Exponents> = Vec::new();
    let mut prod_index = vec![vec![0usize; s]; s];
    for a in 0..s {
        for b in 0..s {
            let e: Exponents = support[a].iter().zip(&support[b]).map(|(x, y)| x + y).collect();
            let idx = match products.iter().position(|p| *p == e) {
                Some(i) => i,
                None => {
                    products.push(e);
                    products.len() - 1
                }
            };
            prod_index[a][b] = idx;
        }
    }
    // W must be expressible in the product monomials.
    let mut w_coeffs = vec![0u8; products.len()];
    for (e, c) in w.raw_terms() {
        match products.iter().position(|p| p == e) {
            Some(i) => w_coeffs[i] = c,
            None => return Ok(Vec::new()),
        }
    }

    let n = size;
    let mask = (1u64 << k) - 1;
    let decode = |code: u64| -> Vec<u8> {
        (0..n * n * s)
            .map(|slot| ((code >> (slot as u64 * k)) & mask) as u8)
            .collect()
    };
    let is_solution = |coeffs: &[u8]| -> bool {
        let mut acc = vec![0u8; products.len()];
        for i in 0..n {
            for j in 0..n {
                acc.iter_mut().for_each(|v| *v = 0);
                for l in 0..n {
                    let left = &coeffs[(i * n + l) * s..(i * n + l + 1) * s];
                    let right = &coeffs[(l * n + j) * s..(l * n + j + 1) * s];
                    for (a, &ca) in left.iter().enumerate() {
                        if ca == 0 {
                            continue;
                        }
                        for (b, &cb) in right.iter().enumerate() {
                            if cb != 0 {
                                acc[prod_index[a][b]] ^= field.mul_raw(ca, cb);
                            }
                        }
                    }
                }
                let ok = if i == j {
                    acc == w_coeffs
                } else {
                    acc.iter().all(|&v| v == 0)
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    };

    let hits = exec.filter_map_range(1u64 << required, |code| {
        let coeffs = decode(code);
        is_solution(&coeffs).then_some(coeffs)
    });
    Ok(hits
        .into_iter()
        .map(|coeffs| {
            let mut m = RingMatrix::zeros(ring, n, n);
            for i in 0..n {
                for j in 0..n {
                    let slot = &coeffs[(i * n + j) * s..(i * n + j + 1) * s];
                    let entry = RingPoly::from_terms_raw(ring, support.iter().cloned().zip(slot.iter().copied()));
                    m.set(i, j, entry);
                }
            }
            m
        })
        .collect())
}
