//! Hom-space cohomology by exponent windows, exactness solving, and
//! certification of non-exactness by specialization at points.
//!
//! A morphism with entries supported in a box of exponents is a finite vector
//! over the coefficient field; `d` is then a field matrix. Window dimensions
//! are an over-approximation; specialization at a point is a chain map, so
//! local non-exactness is a sound certificate of global non-exactness.

use std::fmt;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gf2k::{FieldElem, FieldSpec};
use crate::mfcore::{HomotopyWitness, Morphism, UngradedMF};
use crate::ringmat::{FieldMatrix, RingMatrix};
use crate::ringpoly::{Exponents, Ring, RingPoly};

/// A box `lo_i <= e_i <= hi_i` of exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    lo: Vec<i32>,
    hi: Vec<i32>,
}

impl Window {
    pub fn new(ring: &Ring, lo: Vec<i32>, hi: Vec<i32>) -> Result<Self> {
        if lo.len() != ring.nvars() || hi.len() != ring.nvars() {
            return Err(Error::DimensionMismatch("window arity".into()));
        }
        for i in 0..lo.len() {
            if lo[i] > hi[i] {
                return Err(Error::Precondition(format!("empty window in variable {i}")));
            }
            if lo[i] < 0 && !ring.is_laurent(i) {
                return Err(Error::NegativeExponent(ring.vars()[i].clone()));
            }
        }
        Ok(Window { lo, hi })
    }

    /// `[-d, d]` in Laurent variables, `[0, d]` in polynomial ones.
    pub fn symmetric(ring: &Ring, d: u32) -> Self {
        let d = d as i32;
        let lo = (0..ring.nvars())
            .map(|i| if ring.is_laurent(i) { -d } else { 0 })
            .collect();
        Window {
            lo,
            hi: vec![d; ring.nvars()],
        }
    }

    pub fn lo(&self) -> &[i32] {
        &self.lo
    }

    pub fn hi(&self) -> &[i32] {
        &self.hi
    }

    /// Number of exponent vectors in the box.
    pub fn len(&self) -> usize {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| (h - l + 1) as usize)
            .product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, e: &[i32]) -> bool {
        e.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (l, h))| l <= v && v <= h)
    }

    /// Position of `e` in row-major order, or `None` outside the box.
    pub fn index(&self, e: &[i32]) -> Option<usize> {
        if !self.contains(e) {
            return None;
        }
        let mut idx = 0usize;
        for (i, &ei) in e.iter().enumerate() {
            idx = idx * (self.hi[i] - self.lo[i] + 1) as usize + (ei - self.lo[i]) as usize;
        }
        Some(idx)
    }

    pub fn exponent_at(&self, mut idx: usize) -> Exponents {
        let n = self.lo.len();
        let mut e: Exponents = smallvec::smallvec![0; n];
        for i in (0..n).rev() {
            let w = (self.hi[i] - self.lo[i] + 1) as usize;
            e[i] = self.lo[i] + (idx % w) as i32;
            idx /= w;
        }
        e
    }

    pub fn expand(&self, lo_add: &[i32], hi_add: &[i32]) -> Window {
        Window {
            lo: self.lo.iter().zip(lo_add).map(|(a, b)| a + b).collect(),
            hi: self.hi.iter().zip(hi_add).map(|(a, b)| a + b).collect(),
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| format!("[{l},{h}]"))
            .collect();
        write!(f, "{}", parts.join("x"))
    }
}

type Term = (usize, usize, Exponents, u8);

fn matrix_terms(m: &RingMatrix) -> Vec<Term> {
    let mut out = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            for (e, c) in m.get(i, j).raw_terms() {
                out.push((i, j, e.clone(), c));
            }
        }
    }
    out
}

/// Exponent bounds of the union of supports of `Q` and `R` (zero if both vanish).
fn support_bounds(q: &UngradedMF, r: &UngradedMF) -> (Vec<i32>, Vec<i32>) {
    let n = q.ring().nvars();
    match (q.matrix().exponent_bounds(), r.matrix().exponent_bounds()) {
        (None, None) => (vec![0; n], vec![0; n]),
        (Some(b), None) | (None, Some(b)) => b,
        (Some((l1, h1)), Some((l2, h2))) => (
            l1.iter().zip(&l2).map(|(a, b)| *a.min(b)).collect(),
            h1.iter().zip(&h2).map(|(a, b)| *a.max(b)).collect(),
        ),
    }
}

/// The smallest window guaranteed to contain `d(f)` for `f` supported in `win`.
pub fn image_window(q: &UngradedMF, r: &UngradedMF, win: &Window) -> Window {
    let (lo, hi) = support_bounds(q, r);
    win.expand(&lo, &hi)
}

fn check_pair(q: &UngradedMF, r: &UngradedMF) -> Result<()> {
    if q.ring() != r.ring() {
        return Err(Error::RingMismatch);
    }
    if q.potential() != r.potential() {
        return Err(Error::PotentialMismatch);
    }
    Ok(())
}

/// Matrix of `f -> R f + f Q` from `win_in` to the rows of `win_out` for which
/// `keep` holds. A term landing outside `win_out` is an error.
///
/// Coordinates: `(a * cols + b) * |window| + monomial index` for entry `(a, b)`.
fn build_delta(
    q: &UngradedMF,
    r: &UngradedMF,
    win_in: &Window,
    win_out: &Window,
    keep: impl Fn(&[i32]) -> bool,
) -> Result<FieldMatrix> {
    let (m, n) = (r.size(), q.size());
    let qt = matrix_terms(q.matrix());
    let rt = matrix_terms(r.matrix());
    let mut remap = vec![usize::MAX; win_out.len()];
    let mut kept = 0usize;
    for (idx, slot) in remap.iter_mut().enumerate() {
        if keep(&win_out.exponent_at(idx)) {
            *slot = kept;
            kept += 1;
        }
    }
    let field = q.ring().field();
    let mut out = FieldMatrix::zeros(field, m * n * kept, m * n * win_in.len());
    let mut sum: Exponents = smallvec::smallvec![0; win_in.lo.len()];
    for mono in 0..win_in.len() {
        let e = win_in.exponent_at(mono);
        for i in 0..m {
            for j in 0..n {
                let col = (i * n + j) * win_in.len() + mono;
                // R E_ij x^e: column j of the result is column i of R.
                let from_r = rt.iter().filter(|t| t.1 == i).map(|(a, _, te, c)| (*a, j, te, *c));
                // E_ij x^e Q: row i of the result is row j of Q.
                let from_q = qt.iter().filter(|t| t.0 == j).map(|(_, b, te, c)| (i, *b, te, *c));
                for (a, b, te, c) in from_r.chain(from_q) {
                    for v in 0..sum.len() {
                        sum[v] = e[v] + te[v];
                    }
                    let Some(pos) = win_out.index(&sum) else {
                        return Err(Error::WindowOverflow(format!(
                            "image term outside output window {win_out}"
                        )));
                    };
                    let slot = remap[pos];
                    if slot != usize::MAX {
                        out.add_raw((a * n + b) * kept + slot, col, c);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The matrix of `d` on morphisms supported in `win_in`, landing in `win_out`.
pub fn delta_as_field_matrix(q: &UngradedMF, r: &UngradedMF, win_in: &Window, win_out: &Window) -> Result<FieldMatrix> {
    check_pair(q, r)?;
    build_delta(q, r, win_in, win_out, |_| true)
}

/// Coordinates of a `rows x cols` matrix in `win`, or `None` if some term
/// lies outside it.
pub fn coordinates(f: &RingMatrix, win: &Window) -> Option<Vec<FieldElem>> {
    let field = f.ring().field();
    let mut v = vec![field.zero(); f.rows() * f.cols() * win.len()];
    for a in 0..f.rows() {
        for b in 0..f.cols() {
            for (e, c) in f.get(a, b).terms() {
                let pos = win.index(e)?;
                v[(a * f.cols() + b) * win.len() + pos] = c;
            }
        }
    }
    Some(v)
}

/// Inverse of [`coordinates`].
pub fn from_coordinates(ring: &Ring, rows: usize, cols: usize, win: &Window, v: &[FieldElem]) -> RingMatrix {
    let mut out = RingMatrix::zeros(ring, rows, cols);
    for a in 0..rows {
        for b in 0..cols {
            let base = (a * cols + b) * win.len();
            let terms = (0..win.len())
                .filter(|&p| !v[base + p].is_zero())
                .map(|p| (win.exponent_at(p), v[base + p].raw()));
            out.set(a, b, RingPoly::from_terms_raw(ring, terms));
        }
    }
    out
}

/// Window dimensions `h_1, ..., h_{d_max}` of `H(Hom(Q, R))`.
///
/// `h_d = dim ker(d on B_d) - dim(d(B_d) ∩ B_d)`: closed morphisms in the box
/// modulo coboundaries of the box that stay in the box. The second term is
/// `rank d_d - rank(rows of d_d outside B_d)`. Degrees are independent and run
/// under `exec`.
pub fn cohomology_dims(q: &UngradedMF, r: &UngradedMF, d_max: u32, exec: Exec) -> Result<Vec<usize>> {
    check_pair(q, r)?;
    if d_max < 2 {
        return Err(Error::Precondition("d_max must be at least 2".into()));
    }
    let ring = q.ring();
    let entries = q.size() * r.size();
    let dims = exec.map((1..=d_max).collect(), |d| -> Result<usize> {
        let b = Window::symmetric(ring, d);
        let out = image_window(q, r, &b);
        let full = build_delta(q, r, &b, &out, |_| true)?.rank();
        let outside = build_delta(q, r, &b, &out, |e| !b.contains(e))?.rank();
        let kernel = entries * b.len() - full;
        Ok(kernel - (full - outside))
    });
    dims.into_iter().collect()
}

/// Searches for `g` supported in `win` with `d(g) = f`. `None` is
/// inconclusive: a witness may exist in a larger window.
pub fn solve_exactness(f: &Morphism, win: &Window) -> Result<Option<HomotopyWitness>> {
    if !f.is_closed() {
        return Err(Error::NotClosed);
    }
    let (q, r) = (f.source(), f.target());
    let out = image_window(q, r, win);
    let Some(rhs) = coordinates(f.matrix(), &out) else {
        return Ok(None);
    };
    let delta = build_delta(q, r, win, &out, |_| true)?;
    let Some(sol) = delta.solve(&rhs)? else {
        return Ok(None);
    };
    let g = from_coordinates(q.ring(), r.size(), q.size(), win, &sol);
    HomotopyWitness::new(f.clone(), g).map(Some)
}

/// Cohomology of the specialized complex `f -> R(p) f + f Q(p)` at one point.
#[derive(Debug, Clone)]
pub struct LocalCohomologyReport {
    pub point: Vec<FieldElem>,
    pub local_dim: usize,
    /// One vector per input class, in a fixed basis of local cohomology.
    pub class_coordinates: Vec<Vec<FieldElem>>,
}

impl LocalCohomologyReport {
    /// Classes with a nonzero local coordinate vector; each is globally non-exact.
    pub fn nonexact_classes(&self) -> Vec<usize> {
        (0..self.class_coordinates.len())
            .filter(|&i| self.class_coordinates[i].iter().any(|c| !c.is_zero()))
            .collect()
    }
}

impl fmt::Display for LocalCohomologyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pt: Vec<String> = self.point.iter().map(|p| p.to_string()).collect();
        write!(f, "point=({}) dim={}", pt.join(","), self.local_dim)?;
        for (i, v) in self.class_coordinates.iter().enumerate() {
            let v: Vec<String> = v.iter().map(|c| c.to_string()).collect();
            write!(f, " class[{i}]=[{}]", v.join(","))?;
        }
        Ok(())
    }
}

fn flatten(m: &FieldMatrix) -> Vec<FieldElem> {
    let mut v = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            v.push(m.get(i, j));
        }
    }
    v
}

/// Specializes the hom-complex at `point` and expresses each closed class in
/// a basis of its cohomology, chosen as kernel vectors completing a basis of
/// the image.
pub fn certify_at_point(
    q: &UngradedMF,
    r: &UngradedMF,
    point: &[FieldElem],
    classes: &[Morphism],
) -> Result<LocalCohomologyReport> {
    check_pair(q, r)?;
    let qp = q.matrix().specialize(point)?;
    let rp = r.matrix().specialize(point)?;
    let spec = qp.spec().clone();
    let (m, n) = (r.size(), q.size());
    // Column (i, j) is the image of the elementary matrix E_ij.
    let mut delta = FieldMatrix::zeros(&spec, m * n, m * n);
    for i in 0..m {
        for j in 0..n {
            let col = i * n + j;
            for a in 0..m {
                delta.add_raw(a * n + j, col, rp.get_raw(a, i));
            }
            for b in 0..n {
                delta.add_raw(i * n + b, col, qp.get_raw(j, b));
            }
        }
    }
    let image_cols = delta.pivot_columns();
    let mut basis: Vec<Vec<FieldElem>> = image_cols.iter().map(|&c| delta.column(c)).collect();
    let image_rank = basis.len();
    let mut complement = 0usize;
    for k in delta.kernel_basis() {
        let mut trial = basis.clone();
        trial.push(k.clone());
        if columns_matrix(&spec, m * n, &trial).rank() == trial.len() {
            basis = trial;
            complement += 1;
        }
    }
    let system = columns_matrix(&spec, m * n, &basis);
    let mut class_coordinates = Vec::with_capacity(classes.len());
    for f in classes {
        if f.source() != q || f.target() != r {
            return Err(Error::DimensionMismatch("class is not a morphism Q -> R".into()));
        }
        let v = flatten(&f.matrix().specialize(point)?);
        let coords = system
            .solve(&v)?
            .ok_or_else(|| Error::Consistency("specialized class is not closed".into()))?;
        class_coordinates.push(coords[image_rank..].to_vec());
    }
    Ok(LocalCohomologyReport {
        point: point.to_vec(),
        local_dim: complement,
        class_coordinates,
    })
}

fn columns_matrix(spec: &FieldSpec, rows: usize, cols: &[Vec<FieldElem>]) -> FieldMatrix {
    let mut out = FieldMatrix::zeros(spec, rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, v) in c.iter().enumerate() {
            out.set_raw(i, j, v.raw());
        }
    }
    out
}

/// Rank of the matrix whose row `i` concatenates the coordinates of class `i`
/// across all reports. Rank `r` certifies `r` linearly independent global classes.
pub fn joint_class_rank(reports: &[LocalCohomologyReport]) -> usize {
    let Some(first) = reports.first() else {
        return 0;
    };
    let spec = first
        .point
        .first()
        .map(|p| p.spec().clone())
        .unwrap_or_else(FieldSpec::gf2);
    let nclasses = first.class_coordinates.len();
    let row: Vec<Vec<FieldElem>> = (0..nclasses)
        .map(|i| {
            reports
                .iter()
                .flat_map(|r| r.class_coordinates[i].iter().cloned())
                .collect()
        })
        .collect();
    let width = row.first().map_or(0, Vec::len);
    let mut m = FieldMatrix::zeros(&spec, nclasses, width);
    for (i, r) in row.iter().enumerate() {
        for (j, v) in r.iter().enumerate() {
            m.set_raw(i, j, v.raw());
        }
    }
    m.rank()
}

/// Points of `ext^n` (Laurent coordinates nonzero) where every formal partial
/// of `w` vanishes, in enumeration order.
pub fn find_critical_points(w: &RingPoly, ext: &FieldSpec) -> Result<Vec<Vec<FieldElem>>> {
    let ring = w.ring();
    let n = ring.nvars();
    let partials: Vec<RingPoly> = (0..n).map(|i| w.partial(i)).collect();
    let emb = ring.field().embedding_into(ext)?;
    let elems = ext.enumerate();
    let total = elems.len().pow(n as u32);
    let mut out = Vec::new();
    'points: for code in 0..total {
        let mut c = code;
        let mut point = Vec::with_capacity(n);
        for i in 0..n {
            let e = elems[c % elems.len()].clone();
            c /= elems.len();
            if ring.is_laurent(i) && e.is_zero() {
                continue 'points;
            }
            point.push(e);
        }
        for p in &partials {
            if !p.evaluate_embedded(&point, ext, &emb)?.is_zero() {
                continue 'points;
            }
        }
        out.push(point);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp2() -> UngradedMF {
        let r = Ring::laurent(FieldSpec::gf2(), &["x", "y"]).unwrap();
        UngradedMF::new(
            RingPoly::parse("x + y + x^-1*y^-1", &r).unwrap(),
            RingMatrix::parse("0, 1, 1, x^-1*y^-1; y, 0, x^-1, 1; x, y^-1, 0, 1; 1, x, y, 0", &r).unwrap(),
        )
        .unwrap()
    }

    fn xy() -> UngradedMF {
        let r = Ring::polynomial(FieldSpec::gf2(), &["x", "y"]).unwrap();
        UngradedMF::new(
            RingPoly::parse("x^2 + y^2", &r).unwrap(),
            RingMatrix::parse("x + y", &r).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn window_indexing_round_trips() {
        let r = Ring::new(FieldSpec::gf2(), &["x", "y"], &[true, false]).unwrap();
        let w = Window::new(&r, vec![-2, 0], vec![1, 3]).unwrap();
        assert_eq!(w.len(), 16);
        for i in 0..w.len() {
            assert_eq!(w.index(&w.exponent_at(i)), Some(i));
        }
        assert_eq!(w.index(&[2, 0]), None);
        assert!(Window::new(&r, vec![0, -1], vec![0, 0]).is_err());
        assert!(Window::new(&r, vec![1, 0], vec![0, 0]).is_err());
        assert_eq!(Window::symmetric(&r, 2).to_string(), "[-2,2]x[0,2]");
    }

    #[test]
    fn commutative_one_by_one_has_zero_delta() {
        let x = xy();
        let win = Window::new(x.ring(), vec![0, 0], vec![1, 1]).unwrap();
        let out = image_window(&x, &x, &win);
        let m = delta_as_field_matrix(&x, &x, &win, &out).unwrap();
        assert_eq!(m.cols(), 4);
        assert!(m.is_zero());
    }

    #[test]
    fn rp2_column_count_and_closed_identity() {
        let x = rp2();
        let win = Window::symmetric(x.ring(), 1);
        let out = image_window(&x, &x, &win);
        let m = delta_as_field_matrix(&x, &x, &win, &out).unwrap();
        assert_eq!(m.cols(), 144);
        // Id has coefficient one at the zero monomial of each diagonal entry.
        let id = coordinates(&RingMatrix::identity(x.ring(), 4), &win).unwrap();
        assert!(m.mul_vec(&id).unwrap().iter().all(FieldElem::is_zero));
        assert!(matches!(
            delta_as_field_matrix(&x, &x, &win, &win),
            Err(Error::WindowOverflow(_))
        ));
    }

    #[test]
    fn delta_squares_to_zero_across_windows() {
        let x = rp2();
        let w1 = Window::symmetric(x.ring(), 1);
        let w2 = image_window(&x, &x, &w1);
        let w3 = image_window(&x, &x, &w2);
        let d1 = delta_as_field_matrix(&x, &x, &w1, &w2).unwrap();
        let d2 = delta_as_field_matrix(&x, &x, &w2, &w3).unwrap();
        assert!(d2.mul(&d1).unwrap().is_zero());
    }

    #[test]
    fn rp2_window_dims_are_three() {
        let x = rp2();
        let serial = cohomology_dims(&x, &x, 4, Exec::Serial).unwrap();
        assert_eq!(serial, vec![3, 3, 3, 3]);
        assert_eq!(cohomology_dims(&x, &x, 4, Exec::Parallel).unwrap(), serial);
    }

    #[test]
    fn one_by_one_window_dims_increase() {
        let x = xy();
        let h = cohomology_dims(&x, &x, 5, Exec::Serial).unwrap();
        assert!(h.windows(2).all(|w| w[0] < w[1]), "{h:?}");
        assert!(cohomology_dims(&x, &x, 1, Exec::Serial).is_err());
    }

    #[test]
    fn exactness_of_euler_instance() {
        let x = rp2();
        let alpha = RingPoly::parse("1 + x^-2*y^-1", x.ring()).unwrap();
        let f = Morphism::identity(&x).scale(&alpha);
        let w = solve_exactness(&f, &Window::symmetric(x.ring(), 2)).unwrap().unwrap();
        assert!(w.verify());
        let zero = Morphism::zero(&x, &x).unwrap();
        let w = solve_exactness(&zero, &Window::symmetric(x.ring(), 1))
            .unwrap()
            .unwrap();
        assert!(w.homotopy().is_zero());
        let id = Morphism::identity(&x);
        assert!(solve_exactness(&id, &Window::symmetric(x.ring(), 2)).unwrap().is_none());
    }

    #[test]
    fn critical_points_of_rp2_over_gf4() {
        let x = rp2();
        let f4 = FieldSpec::gf4();
        let pts = find_critical_points(x.potential(), &f4).unwrap();
        assert_eq!(pts.len(), 3);
        assert!(pts.iter().all(|p| p[0] == p[1]));
        assert_eq!(find_critical_points(x.potential(), &FieldSpec::gf2()).unwrap().len(), 1);
    }

    #[test]
    fn local_cohomology_at_critical_and_regular_points() {
        let x = rp2();
        let f2 = FieldSpec::gf2();
        let id = Morphism::identity(&x);
        let rep = certify_at_point(&x, &x, &[f2.one(), f2.one()], std::slice::from_ref(&id)).unwrap();
        assert!(rep.local_dim > 0);
        assert_eq!(rep.nonexact_classes(), vec![0]);
        let f4 = FieldSpec::gf4();
        let rep = certify_at_point(&x, &x, &[f4.one(), f4.elem(2).unwrap()], &[id]).unwrap();
        assert_eq!(rep.local_dim, 0);
        assert!(rep.nonexact_classes().is_empty());
    }

    #[test]
    fn powers_of_x_are_independent_at_critical_points() {
        let x = rp2();
        let f4 = FieldSpec::gf4();
        let classes: Vec<Morphism> = ["1", "x", "x^2"]
            .iter()
            .map(|s| Morphism::identity(&x).scale(&RingPoly::parse(s, x.ring()).unwrap()))
            .collect();
        let reports: Vec<_> = find_critical_points(x.potential(), &f4)
            .unwrap()
            .iter()
            .map(|p| certify_at_point(&x, &x, p, &classes).unwrap())
            .collect();
        assert_eq!(joint_class_rank(&reports), 3);
        assert_eq!(joint_class_rank(&reports[..1]), 1);
    }
}
