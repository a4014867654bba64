//! Matrices over [`RingPoly`] and dense matrices over GF(2^k).

mod field;

use std::fmt;

pub use field::FieldMatrix;

use crate::error::{Error, Result};
use crate::gf2k::FieldElem;
use crate::ringpoly::{parse_matrix_text, Ring, RingPoly};

#[derive(Clone, PartialEq, Eq)]
pub struct RingMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<RingPoly>,
}

impl RingMatrix {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Self {
        RingMatrix {
            ring: ring.clone(),
            rows,
            cols,
            entries: vec![RingPoly::zero(ring); rows * cols],
        }
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.entries[i * n + i] = RingPoly::one(ring);
        }
        m
    }

    pub fn scalar_identity(c: &RingPoly, n: usize) -> Self {
        let mut m = Self::zeros(c.ring(), n, n);
        for i in 0..n {
            m.entries[i * n + i] = c.clone();
        }
        m
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<RingPoly>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if nrows == 0 || ncols == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        let mut entries = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has {} entries, expected {ncols}",
                    i + 1,
                    row.len()
                )));
            }
            for e in row {
                if e.ring() != ring {
                    return Err(Error::RingMismatch);
                }
                entries.push(e);
            }
        }
        Ok(RingMatrix {
            ring: ring.clone(),
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    /// Parses rows separated by `;` or newlines with `,`-separated entries.
    pub fn parse(text: &str, ring: &Ring) -> Result<Self> {
        Self::parse_from_line(text, ring, 1)
    }

    pub(crate) fn parse_from_line(text: &str, ring: &Ring, first_line: usize) -> Result<Self> {
        let rows = parse_matrix_text(text, ring, first_line)?;
        Self::from_rows(ring, rows)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RingPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: RingPoly) {
        assert!(value.ring() == &self.ring, "ring mismatch");
        self.entries[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[RingPoly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RingPoly::is_zero)
    }

    /// Total number of nonzero terms across all entries.
    pub fn num_terms(&self) -> usize {
        self.entries.iter().map(RingPoly::num_terms).sum()
    }

    pub fn map(&self, f: impl Fn(&RingPoly) -> RingPoly) -> RingMatrix {
        RingMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> RingMatrix {
        let mut out = RingMatrix::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn checked_add(&self, other: &RingMatrix) -> Result<RingMatrix> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(RingMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_mul(&self, other: &RingMatrix) -> Result<RingMatrix> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RingMatrix::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `AB + BA`, the commutator in characteristic 2.
    pub fn commutator(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.checked_mul(other)?.checked_add(&other.checked_mul(self)?)
    }

    pub fn scale(&self, c: &RingPoly) -> RingMatrix {
        assert!(c.ring() == &self.ring, "ring mismatch");
        if c.is_zero() {
            return RingMatrix::zeros(&self.ring, self.rows, self.cols);
        }
        self.map(|e| e * c)
    }

    /// `[[a, b], [c, d]]` from four equal square blocks.
    pub fn block2(a: &RingMatrix, b: &RingMatrix, c: &RingMatrix, d: &RingMatrix) -> Result<RingMatrix> {
        let n = a.rows;
        for m in [a, b, c, d] {
            if m.rows != n || m.cols != n {
                return Err(Error::DimensionMismatch(
                    "block2 needs four square blocks of equal size".into(),
                ));
            }
            if m.ring != a.ring {
                return Err(Error::RingMismatch);
            }
        }
        let mut out = RingMatrix::zeros(&a.ring, 2 * n, 2 * n);
        for (block, (r0, c0)) in [a, b, c, d].into_iter().zip([(0, 0), (0, n), (n, 0), (n, n)]) {
            for i in 0..n {
                for j in 0..n {
                    out.entries[(r0 + i) * 2 * n + c0 + j] = block.get(i, j).clone();
                }
            }
        }
        Ok(out)
    }

    /// Inverse of [`RingMatrix::block2`].
    pub fn blocks_of(&self) -> Result<(RingMatrix, RingMatrix, RingMatrix, RingMatrix)> {
        if !self.is_square() || !self.rows.is_multiple_of(2) {
            return Err(Error::DimensionMismatch("blocks_of needs an even square matrix".into()));
        }
        let n = self.rows / 2;
        let block = |r0: usize, c0: usize| {
            let mut m = RingMatrix::zeros(&self.ring, n, n);
            for i in 0..n {
                for j in 0..n {
                    m.entries[i * n + j] = self.get(r0 + i, c0 + j).clone();
                }
            }
            m
        };
        Ok((block(0, 0), block(0, n), block(n, 0), block(n, n)))
    }

    /// Entry-wise formal partial derivative in variable `i`.
    pub fn partial(&self, i: usize) -> RingMatrix {
        self.map(|e| e.partial(i))
    }

    /// Entry-wise evaluation at `point` (over an extension of the ring's field).
    pub fn specialize(&self, point: &[FieldElem]) -> Result<FieldMatrix> {
        let target = match point.first() {
            Some(p) => p.spec().clone(),
            None => self.ring.field().clone(),
        };
        let emb = self.ring.field().embedding_into(&target)?;
        let mut out = FieldMatrix::zeros(&target, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j).evaluate_embedded(point, &target, &emb)?;
                out.set_raw(i, j, v.raw());
            }
        }
        Ok(out)
    }

    /// Union of exponent bounding boxes of the entries, as `(min, max)`.
    pub fn exponent_bounds(&self) -> Option<(Vec<i32>, Vec<i32>)> {
        let n = self.ring.nvars();
        let mut lo: Option<Vec<i32>> = None;
        let mut hi = vec![i32::MIN; n];
        for e in self.entries.iter().filter(|e| !e.is_zero()) {
            let (mn, mx) = (e.min_exponents(), e.max_exponents());
            let l = lo.get_or_insert_with(|| vec![i32::MAX; n]);
            for v in 0..n {
                l[v] = l[v].min(mn[v]);
                hi[v] = hi[v].max(mx[v]);
            }
        }
        lo.map(|l| (l, hi))
    }
}

macro_rules! mat_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr<&RingMatrix> for &RingMatrix {
            type Output = RingMatrix;
            fn $method(self, rhs: &RingMatrix) -> RingMatrix {
                self.$checked(rhs).expect("matrix shape or ring mismatch")
            }
        }
        impl std::ops::$tr<RingMatrix> for RingMatrix {
            type Output = RingMatrix;
            fn $method(self, rhs: RingMatrix) -> RingMatrix {
                self.$checked(&rhs).expect("matrix shape or ring mismatch")
            }
        }
        impl std::ops::$tr<&RingMatrix> for RingMatrix {
            type Output = RingMatrix;
            fn $method(self, rhs: &RingMatrix) -> RingMatrix {
                self.$checked(rhs).expect("matrix shape or ring mismatch")
            }
        }
    };
}

mat_binop!(Add, add, checked_add);
mat_binop!(Mul, mul, checked_mul);

impl fmt::Display for RingMatrix {
    /// One row per line, entries separated by `, `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2k::FieldSpec;

    fn ring() -> Ring {
        Ring::laurent(FieldSpec::gf2(), &["x", "y"]).unwrap()
    }

    fn m(s: &str) -> RingMatrix {
        RingMatrix::parse(s, &ring()).unwrap()
    }

    #[test]
    fn u_and_v_relations() {
        let r = ring();
        let u = m("0, 1; y, 0");
        let v = m("1, x^-1*y^-1; x^-1, 1");
        let y = RingPoly::parse("y", &r).unwrap();
        assert_eq!(&u * &u, RingMatrix::scalar_identity(&y, 2));
        let expect = &RingMatrix::scalar_identity(&RingPoly::parse("x^-1", &r).unwrap(), 2) + &u;
        assert_eq!(&u * &v, expect);
        assert_eq!(&v * &u, expect);
        assert!(u.commutator(&u).unwrap().is_zero());
    }

    #[test]
    fn blocks_round_trip() {
        let r = ring();
        let u = m("0, 1; y, 0");
        let v = m("1, x^-1*y^-1; x^-1, 1");
        let xv = v.scale(&RingPoly::parse("x", &r).unwrap());
        let q = RingMatrix::block2(&u, &v, &xv, &u).unwrap();
        let expected = m("0, 1, 1, x^-1*y^-1; y, 0, x^-1, 1; x, y^-1, 0, 1; 1, x, y, 0");
        assert_eq!(q, expected);
        assert_eq!(q.blocks_of().unwrap(), (u.clone(), v, xv, u));
        assert!(q.scale(&RingPoly::zero(&r)).is_zero());
    }

    #[test]
    fn dimension_errors() {
        let a = m("1, x");
        let b = m("1, x");
        assert!(matches!(a.checked_mul(&b), Err(Error::DimensionMismatch(_))));
        assert!(RingMatrix::block2(&a, &a, &a, &a).is_err());
        assert!(matches!(
            RingMatrix::parse("1, x; y", &ring()),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn specialization_of_rp2() {
        let q = m("0, 1, 1, x^-1*y^-1; y, 0, x^-1, 1; x, y^-1, 0, 1; 1, x, y, 0");
        let f = FieldSpec::gf2();
        let s = q.specialize(&[f.one(), f.one()]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(s.get(i, j).value(), (i != j) as u32);
            }
        }
        assert_eq!(s.rank(), 4);
        let id = RingMatrix::identity(&ring(), 3)
            .specialize(&[f.one(), f.one()])
            .unwrap();
        assert_eq!(id, FieldMatrix::identity(&f, 3));
        assert!(matches!(q.specialize(&[f.zero(), f.one()]), Err(Error::Pole(0))));
    }

    #[test]
    fn specialization_is_multiplicative() {
        let a = m("x + y, x^-1; 1, y^2");
        let b = m("y^-1, 0; x*y, x + 1");
        let f4 = FieldSpec::gf4();
        let p = [f4.elem(2).unwrap(), f4.elem(3).unwrap()];
        let lhs = (&a * &b).specialize(&p).unwrap();
        let rhs = a.specialize(&p).unwrap().mul(&b.specialize(&p).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}
