#![allow(dead_code)]

use num_complex::Complex64 as C64;
use qsd_core::{ComplexMatrix, DensityMatrix, DiscriminationProblem, HermitianOperator};
use rand::Rng;
use rand_distr::StandardNormal;

fn gaussian<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unitary: Gram-Schmidt on a complex Ginibre matrix.
pub fn haar_unitary<R: Rng>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
        for u in &cols {
            let overlap: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= overlap * y;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|x| x / norm).collect());
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

pub fn random_hermitian<R: Rng>(dim: usize, rng: &mut R) -> HermitianOperator {
    let a = ComplexMatrix::from_fn(dim, |_, _| gaussian(rng));
    HermitianOperator::new((&a + &a.adjoint()).scale_real(0.5)).unwrap()
}

pub fn random_density<R: Rng>(dim: usize, rng: &mut R) -> DensityMatrix {
    let a = ComplexMatrix::from_fn(dim, |_, _| gaussian(rng));
    let m = &a * &a.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(HermitianOperator::new(m.scale_real(1.0 / tr)).unwrap()).unwrap()
}

/// α ∈ (0.05, π/2], v ∈ [0, 0.95], q ∈ [0.02, 0.98].
pub fn random_problem<R: Rng>(copies: usize, rng: &mut R) -> DiscriminationProblem {
    DiscriminationProblem::new(
        rng.gen_range(0.05..=std::f64::consts::FRAC_PI_2),
        rng.gen_range(0.0..0.95),
        rng.gen_range(0.02..0.98),
        copies,
    )
    .unwrap()
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(m: &ComplexMatrix) -> C64 {
    let n = m.dim();
    let mut a: Vec<Vec<C64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut d = C64::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm())).unwrap();
        if a[p][k].norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if p != k {
            a.swap(p, k);
            d = -d;
        }
        d *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                let x = a[k][j];
                a[i][j] -= f * x;
            }
        }
    }
    d
}

/// Makhlin local invariants (G1, G2) of a two-qubit unitary.
pub fn makhlin(u: &ComplexMatrix) -> (C64, f64) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let i = C64::new(0.0, s);
    let o = C64::new(s, 0.0);
    let z = C64::new(0.0, 0.0);
    let magic = ComplexMatrix::from_vec(4, vec![o, z, z, i, z, i, o, z, z, i, -o, z, o, z, z, -i]).unwrap();
    let ub = &(&magic.adjoint() * u) * &magic;
    let ubt = ComplexMatrix::from_fn(4, |r, c| ub[(c, r)]);
    let m = &ubt * &ub;
    let det_u = det(u);
    let tr = m.trace();
    let tr2 = (&m * &m).trace();
    let g1 = tr * tr / (det_u * 16.0);
    let g2 = (tr * tr - tr2) / (det_u * 4.0);
    (g1, g2.re)
}
