use std::fmt;

use crate::error::{Error, Result};
use crate::gf2k::{FieldElem, FieldSpec};

#[derive(Clone, PartialEq, Eq)]
enum Storage {
    /// GF(2): row-major, each row packed into `stride` words.
    Bits { stride: usize, data: Vec<u64> },
    /// GF(2^k), k > 1: one byte per entry, row-major.
    Bytes(Vec<u8>),
}

/// Dense matrix over GF(2^k) with exact Gaussian elimination.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    spec: FieldSpec,
    rows: usize,
    cols: usize,
    storage: Storage,
}

impl FieldMatrix {
    pub fn zeros(spec: &FieldSpec, rows: usize, cols: usize) -> Self {
        let storage = if spec.is_prime_field() {
            let stride = cols.div_ceil(64);
            Storage::Bits {
                stride,
                data: vec![0; stride * rows],
            }
        } else {
            Storage::Bytes(vec![0; rows * cols])
        };
        FieldMatrix {
            spec: spec.clone(),
            rows,
            cols,
            storage,
        }
    }

    pub fn identity(spec: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(spec, n, n);
        for i in 0..n {
            m.set_raw(i, i, 1);
        }
        m
    }

    /// Row-major entries.
    pub fn from_elems(spec: &FieldSpec, rows: usize, cols: usize, entries: &[FieldElem]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let mut m = Self::zeros(spec, rows, cols);
        for (idx, e) in entries.iter().enumerate() {
            if e.spec() != spec {
                return Err(Error::FieldMismatch);
            }
            m.set_raw(idx / cols, idx % cols, e.raw());
        }
        Ok(m)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub(crate) fn get_raw(&self, i: usize, j: usize) -> u8 {
        match &self.storage {
            Storage::Bits { stride, data } => (data[i * stride + j / 64] >> (j % 64) & 1) as u8,
            Storage::Bytes(d) => d[i * self.cols + j],
        }
    }

    #[inline]
    pub(crate) fn set_raw(&mut self, i: usize, j: usize, v: u8) {
        match &mut self.storage {
            Storage::Bits { stride, data } => {
                let w = &mut data[i * *stride + j / 64];
                let bit = 1u64 << (j % 64);
                if v & 1 == 1 {
                    *w |= bit;
                } else {
                    *w &= !bit;
                }
            }
            Storage::Bytes(d) => d[i * self.cols + j] = v,
        }
    }

    /// Adds `v` into entry `(i, j)`.
    #[inline]
    pub(crate) fn add_raw(&mut self, i: usize, j: usize, v: u8) {
        match &mut self.storage {
            Storage::Bits { stride, data } => {
                data[i * *stride + j / 64] ^= ((v & 1) as u64) << (j % 64);
            }
            Storage::Bytes(d) => d[i * self.cols + j] ^= v,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        FieldElem::from_raw(&self.spec, self.get_raw(i, j))
    }

    pub fn set(&mut self, i: usize, j: usize, v: &FieldElem) {
        assert!(v.spec() == &self.spec, "field mismatch");
        self.set_raw(i, j, v.raw());
    }

    pub fn is_zero(&self) -> bool {
        match &self.storage {
            Storage::Bits { data, .. } => data.iter().all(|&w| w == 0),
            Storage::Bytes(d) => d.iter().all(|&b| b == 0),
        }
    }

    pub fn column(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut out = FieldMatrix::zeros(&self.spec, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set_raw(j, i, self.get_raw(i, j));
            }
        }
        out
    }

    pub fn add(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.spec != other.spec {
            return Err(Error::FieldMismatch);
        }
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        let mut out = self.clone();
        match (&mut out.storage, &other.storage) {
            (Storage::Bits { data: a, .. }, Storage::Bits { data: b, .. }) => {
                a.iter_mut().zip(b).for_each(|(x, y)| *x ^= y)
            }
            (Storage::Bytes(a), Storage::Bytes(b)) => a.iter_mut().zip(b).for_each(|(x, y)| *x ^= y),
            _ => unreachable!("storage follows the field"),
        }
        Ok(out)
    }

    pub fn mul(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.spec != other.spec {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = FieldMatrix::zeros(&self.spec, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get_raw(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get_raw(k, j);
                    if b != 0 {
                        out.add_raw(i, j, self.spec.mul_raw(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[FieldElem]) -> Result<Vec<FieldElem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("matrix-vector product".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                let acc = (0..self.cols).fold(0u8, |acc, j| acc ^ self.spec.mul_raw(self.get_raw(i, j), v[j].raw()));
                FieldElem::from_raw(&self.spec, acc)
            })
            .collect())
    }

    /// Row reduction in place. With `full`, produces reduced row echelon
    /// form with unit pivots; otherwise only clears below each pivot.
    /// Returns pivot columns in row order.
    fn eliminate(&mut self, full: bool) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        match &mut self.storage {
            Storage::Bits { stride, data } => {
                let stride = *stride;
                let mut pivot_row = vec![0u64; stride];
                for c in 0..cols {
                    if r == rows {
                        break;
                    }
                    let (w, bit) = (c / 64, 1u64 << (c % 64));
                    let Some(p) = (r..rows).find(|&i| data[i * stride + w] & bit != 0) else {
                        continue;
                    };
                    if p != r {
                        for k in 0..stride {
                            data.swap(p * stride + k, r * stride + k);
                        }
                    }
                    pivot_row[w..].copy_from_slice(&data[r * stride + w..(r + 1) * stride]);
                    let start = if full { 0 } else { r + 1 };
                    for i in start..rows {
                        if i != r && data[i * stride + w] & bit != 0 {
                            let row = &mut data[i * stride + w..(i + 1) * stride];
                            row.iter_mut().zip(&pivot_row[w..]).for_each(|(x, y)| *x ^= y);
                        }
                    }
                    pivots.push(c);
                    r += 1;
                }
            }
            Storage::Bytes(d) => {
                let spec = self.spec.clone();
                let mut pivot_row = vec![0u8; cols];
                for c in 0..cols {
                    if r == rows {
                        break;
                    }
                    let Some(p) = (r..rows).find(|&i| d[i * cols + c] != 0) else {
                        continue;
                    };
                    if p != r {
                        for j in 0..cols {
                            d.swap(p * cols + j, r * cols + j);
                        }
                    }
                    let inv = spec.inv_raw(d[r * cols + c]).unwrap();
                    let inv_log = spec.log_raw(inv);
                    for j in c..cols {
                        let v = d[r * cols + j];
                        if v != 0 {
                            d[r * cols + j] = spec.exp_raw(spec.log_raw(v) + inv_log);
                        }
                    }
                    pivot_row[c..].copy_from_slice(&d[r * cols + c..(r + 1) * cols]);
                    let start = if full { 0 } else { r + 1 };
                    for i in start..rows {
                        let factor = d[i * cols + c];
                        if i == r || factor == 0 {
                            continue;
                        }
                        let fl = spec.log_raw(factor);
                        for j in c..cols {
                            let v = pivot_row[j];
                            if v != 0 {
                                d[i * cols + j] ^= spec.exp_raw(spec.log_raw(v) + fl);
                            }
                        }
                    }
                    pivots.push(c);
                    r += 1;
                }
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate(false).len()
    }

    /// Basis of the right kernel `{v : M v = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<FieldElem>> {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u8; self.cols];
                v[free] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = m.get_raw(r, free);
                }
                v.into_iter().map(|x| FieldElem::from_raw(&self.spec, x)).collect()
            })
            .collect()
    }

    /// Some `v` with `M v = b`, taking every free variable to be zero; `None`
    /// when the system is inconsistent.
    pub fn solve(&self, b: &[FieldElem]) -> Result<Option<Vec<FieldElem>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        if b.iter().any(|e| e.spec() != &self.spec) {
            return Err(Error::FieldMismatch);
        }
        let mut aug = FieldMatrix::zeros(&self.spec, self.rows, self.cols + 1);
        for (i, bi) in b.iter().enumerate() {
            for j in 0..self.cols {
                aug.set_raw(i, j, self.get_raw(i, j));
            }
            aug.set_raw(i, self.cols, bi.raw());
        }
        let pivots = aug.eliminate(true);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u8; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get_raw(r, self.cols);
        }
        Ok(Some(
            x.into_iter().map(|v| FieldElem::from_raw(&self.spec, v)).collect(),
        ))
    }

    /// Indices of a maximal set of linearly independent columns (first pivots).
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.clone().eliminate(false)
    }
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {:?}", self.rows, self.cols, self.spec)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get_raw(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_matrix(spec: &FieldSpec, rows: usize, cols: usize, seed: &[u8]) -> FieldMatrix {
        let mut m = FieldMatrix::zeros(spec, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = seed[(i * cols + j) % seed.len()] as usize % spec.size();
                m.set_raw(i, j, v as u8);
            }
        }
        m
    }

    #[test]
    fn identity_solves_to_rhs() {
        for spec in [FieldSpec::gf2(), FieldSpec::gf4()] {
            let id = FieldMatrix::identity(&spec, 5);
            let b: Vec<FieldElem> = (0..5)
                .map(|i| spec.elem(i as u32 % spec.size() as u32).unwrap())
                .collect();
            assert_eq!(id.solve(&b).unwrap(), Some(b.clone()));
            assert_eq!(id.rank(), 5);
        }
    }

    #[test]
    fn zero_map_kernel_is_everything() {
        let z = FieldMatrix::zeros(&FieldSpec::gf4(), 3, 7);
        assert_eq!(z.kernel_basis().len(), 7);
        assert_eq!(z.rank(), 0);
    }

    #[test]
    fn inconsistent_system() {
        let spec = FieldSpec::gf2();
        let mut m = FieldMatrix::zeros(&spec, 2, 2);
        m.set_raw(0, 0, 1);
        m.set_raw(1, 0, 1);
        assert_eq!(m.solve(&[spec.one(), spec.zero()]).unwrap(), None);
        assert!(m.solve(&[spec.one()]).is_err());
    }

    #[test]
    fn wide_bit_rows() {
        // spans several words per row
        let spec = FieldSpec::gf2();
        let mut m = FieldMatrix::zeros(&spec, 3, 200);
        m.set_raw(0, 150, 1);
        m.set_raw(1, 150, 1);
        m.set_raw(1, 199, 1);
        m.set_raw(2, 3, 1);
        assert_eq!(m.rank(), 3);
        assert_eq!(m.kernel_basis().len(), 197);
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in 1usize..9, cols in 1usize..9, k in 1u32..4,
                        seed in proptest::collection::vec(any::<u8>(), 1..64)) {
            let spec = FieldSpec::with_default_modulus(k).unwrap();
            let m = random_matrix(&spec, rows, cols, &seed);
            let kernel = m.kernel_basis();
            prop_assert_eq!(m.rank() + kernel.len(), cols);
            for v in &kernel {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(FieldElem::is_zero));
            }
        }

        #[test]
        fn solve_is_sound(rows in 1usize..8, cols in 1usize..8, k in 1u32..4,
                          seed in proptest::collection::vec(any::<u8>(), 1..64)) {
            let spec = FieldSpec::with_default_modulus(k).unwrap();
            let m = random_matrix(&spec, rows, cols, &seed);
            // b in the column space is always solvable
            let x0: Vec<FieldElem> = (0..cols).map(|j| spec.elem((seed[j % seed.len()] as u32 >> 2) % spec.size() as u32).unwrap()).collect();
            let b = m.mul_vec(&x0).unwrap();
            let x = m.solve(&b).unwrap().expect("consistent system");
            prop_assert_eq!(m.mul_vec(&x).unwrap(), b);
        }
    }
}
