//! Seeded random Gaussian-integer matrices: generic Hermitian, definite,
//! and exact rank 2.

use num_traits::Zero;
use rand::Rng;

use crate::matrix::GMatrix;
use crate::pencil::HermitianMatrix;
use crate::scalar::GaussianRational;

pub fn gint<R: Rng + ?Sized>(rng: &mut R, r: i64) -> GaussianRational {
    GaussianRational::from_ints(rng.random_range(-r..=r), rng.random_range(-r..=r))
}

pub(crate) fn from_gmatrix(m: GMatrix) -> HermitianMatrix {
    HermitianMatrix::new(m).expect("constructed Hermitian")
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R) -> HermitianMatrix {
    let mut m = GMatrix::zeros(4, 4);
    for i in 0..4 {
        m.set(i, i, GaussianRational::from(rng.random_range(-3..=3)));
        for j in i + 1..4 {
            let z = gint(rng, 3);
            m.set(j, i, z.conj());
            m.set(i, j, z);
        }
    }
    from_gmatrix(m)
}

/// `L·L*` with `L` lower triangular, positive integer diagonal.
pub fn random_definite<R: Rng + ?Sized>(rng: &mut R) -> HermitianMatrix {
    let mut l = GMatrix::zeros(4, 4);
    for i in 0..4 {
        l.set(i, i, GaussianRational::from(rng.random_range(1..=3)));
        for j in 0..i {
            l.set(i, j, gint(rng, 2));
        }
    }
    from_gmatrix(l.mul(&l.conj_transpose()))
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, r: i64) -> [GaussianRational; 4] {
    loop {
        let v: [GaussianRational; 4] = core::array::from_fn(|_| gint(rng, r));
        if v.iter().any(|z| !z.is_zero()) {
            return v;
        }
    }
}

pub fn outer(v: &[GaussianRational; 4]) -> GMatrix {
    let mut m = GMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            m.set(i, j, v[i].clone() * v[j].conj());
        }
    }
    m
}

/// `v·v* + w·w*` (semidefinite) or `v·v* − w·w*` (indefinite), exact rank 2.
pub fn plant<R: Rng + ?Sized>(rng: &mut R, semidefinite: bool) -> HermitianMatrix {
    loop {
        let v = random_vector(rng, if semidefinite { 2 } else { 3 });
        let w = random_vector(rng, if semidefinite { 2 } else { 1 });
        let ww = outer(&w);
        let m = if semidefinite {
            outer(&v).add(&ww)
        } else {
            outer(&v).add(&ww.scale(&GaussianRational::from(-1)))
        };
        if m.rank() == 2 {
            return from_gmatrix(m);
        }
    }
}
