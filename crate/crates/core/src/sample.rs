//! Seeded random polynomials and matrices for randomized checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cohomwin::Window;
use crate::ringmat::RingMatrix;
use crate::ringpoly::{Ring, RingPoly};

pub const DEFAULT_SEED: u64 = 20_240_917;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `index` derived from `seed`; used so that parallel
/// sample loops draw the same values as serial ones.
pub fn substream(seed: u64, index: u64) -> SampleRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

/// Each monomial of `win` appears with probability `density`, with a
/// uniformly random nonzero coefficient.
pub fn random_poly(ring: &Ring, win: &Window, density: f64, rng: &mut SampleRng) -> RingPoly {
    let field = ring.field();
    let terms: Vec<_> = (0..win.len())
        .filter_map(|i| {
            if !rng.gen_bool(density) {
                return None;
            }
            let c = rng.gen_range(1..field.size()) as u8;
            Some((win.exponent_at(i), c))
        })
        .collect();
    RingPoly::from_terms_raw(ring, terms)
}

pub fn random_matrix(
    ring: &Ring,
    rows: usize,
    cols: usize,
    win: &Window,
    density: f64,
    rng: &mut SampleRng,
) -> RingMatrix {
    let mut m = RingMatrix::zeros(ring, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, random_poly(ring, win, density, rng));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2k::FieldSpec;

    #[test]
    fn deterministic_and_in_window() {
        let r = Ring::laurent(FieldSpec::gf4(), &["x", "y"]).unwrap();
        let w = Window::symmetric(&r, 2);
        let a = random_matrix(&r, 2, 2, &w, 0.5, &mut rng(7));
        let b = random_matrix(&r, 2, 2, &w, 0.5, &mut rng(7));
        assert_eq!(a, b);
        for e in a.entries() {
            assert!(e.terms().all(|(m, c)| w.contains(m) && !c.is_zero()));
        }
        let s1 = random_poly(&r, &w, 0.5, &mut substream(7, 1));
        let s2 = random_poly(&r, &w, 0.5, &mut substream(7, 2));
        assert_ne!(s1, s2);
    }
}
