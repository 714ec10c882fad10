//! `det A₈ = f²` and `rank A₈ = 2·rank M₄` on random Gaussian-integer
//! pencils, checked against pointwise exact determinants.

use detquartic_core::sample::{plant, random_definite, random_hermitian};
use detquartic_core::{GMatrix, GaussianRational, HermitianMatrix, HermitianPencil, Rational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_pencil(seed: u64) -> HermitianPencil {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    HermitianPencil::new(core::array::from_fn(|_| random_hermitian(&mut rng)))
}

fn int_point(v: &[i64]) -> Vec<GaussianRational> {
    v.iter().map(|&k| GaussianRational::from_ints(k, 0)).collect()
}

/// `[[Re, −Im], [Im, Re]]` built entrywise, independent of the crate's
/// block layout (the two agree up to the sign convention of the blocks,
/// which does not change the determinant or rank).
fn realify_oracle(m: &GMatrix) -> GMatrix {
    let mut out = GMatrix::zeros(8, 8);
    for i in 0..4 {
        for j in 0..4 {
            let z = m.get(i, j);
            let re = GaussianRational::real(z.re.clone());
            let im = GaussianRational::real(z.im.clone());
            out.set(i, j, re.clone());
            out.set(i + 4, j + 4, re);
            out.set(i, j + 4, -im.clone());
            out.set(i + 4, j, im);
        }
    }
    out
}

#[test]
fn square_identity_on_fifty_random_pencils() {
    for seed in 0..50 {
        let p = random_pencil(seed);
        assert!(p.verify_square_identity().unwrap(), "seed {seed}");
    }
}

#[test]
fn square_identity_pointwise_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for seed in 0..10 {
        let p = random_pencil(100 + seed);
        let f = p.det().unwrap();
        for _ in 0..5 {
            let x: Vec<i64> = (0..4).map(|_| rng.random_range(-4..=4)).collect();
            let xe = int_point(&x);
            let m = p.eval_exact(&xe).unwrap();
            let d4 = m.determinant();
            let d8 = realify_oracle(&m).determinant();
            assert_eq!(d8, d4.clone() * d4.clone());
            assert_eq!(f.eval_exact(&xe).unwrap(), d4);
            assert_eq!(p.realify().eval_exact(&xe).unwrap().determinant(), d8);
        }
    }
}

#[test]
fn rank_doubles_at_planted_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let coeffs = [
            random_definite(&mut rng),
            plant(&mut rng, true),
            plant(&mut rng, false),
            random_hermitian(&mut rng),
        ];
        let p = HermitianPencil::new(coeffs);
        for (k, want) in [(0, 4), (1, 2), (2, 2)] {
            let mut x = vec![GaussianRational::from_ints(0, 0); 4];
            x[k] = GaussianRational::from_ints(1, 0);
            assert_eq!(p.rank_at_exact(&x).unwrap(), want);
            assert_eq!(p.realify().eval_exact(&x).unwrap().rank(), 2 * want);
        }
    }
}

#[test]
fn definite_points_are_certified() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p = HermitianPencil::new([
        random_definite(&mut rng),
        random_hermitian(&mut rng),
        random_hermitian(&mut rng),
        random_hermitian(&mut rng),
    ]);
    let e = int_point(&[1, 0, 0, 0]);
    assert!(p.is_definite_at(&e).unwrap().is_definite());
    let neg = int_point(&[-1, 0, 0, 0]);
    assert!(p.is_definite_at(&neg).unwrap().is_definite());
    assert_eq!(p.is_definite_at(&neg).unwrap().sign(), Some(-1.0));
    let zero = HermitianPencil::new(core::array::from_fn(|_| HermitianMatrix::zero()));
    assert!(!zero.is_definite_at(&e).unwrap().is_definite());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_doubling(seed in 0u64..1_000_000, x in prop::collection::vec((-6i64..=6, 1i64..=4), 4)) {
        let p = random_pencil(seed);
        let pt: Vec<GaussianRational> =
            x.iter().map(|&(n, d)| GaussianRational::real(Rational::new(n.into(), d.into()))).collect();
        let r4 = p.rank_at_exact(&pt).unwrap();
        let r8 = p.realify().eval_exact(&pt).unwrap().rank();
        prop_assert_eq!(r8, 2 * r4);
        prop_assert_eq!(realify_oracle(&p.eval_exact(&pt).unwrap()).rank(), r8);
    }

    #[test]
    fn rank_doubling_on_low_rank_combinations(seed in 0u64..1_000_000, semidefinite in any::<bool>(), s in -3i64..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = plant(&mut rng, semidefinite);
        let b = plant(&mut rng, !semidefinite);
        let p = HermitianPencil::new([a, b, random_hermitian(&mut rng), HermitianMatrix::zero()]);
        let pt = int_point(&[1, s, 0, 0]);
        let r4 = p.rank_at_exact(&pt).unwrap();
        prop_assert!(r4 <= 4);
        prop_assert_eq!(p.realify().eval_exact(&pt).unwrap().rank(), 2 * r4);
    }
}
