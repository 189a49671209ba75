//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.

use super::matrix::{Matrix, C64};

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition `m = V diag(values) V†`, eigenvalues in descending order.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns, in the order of `values`.
    pub vectors: Matrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }
}

/// Diagonalizes the Hermitian part of `m`. The caller is responsible for
/// checking Hermiticity when it matters.
pub fn hermitian_eigen(m: &Matrix) -> HermitianEigen {
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = Matrix::identity(n);

    let frob2: f64 = a.data().iter().map(|z| z.norm_sqr()).sum();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off <= 1e-32 * frob2 || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    HermitianEigen {
        values: order.iter().map(|&i| diag[i]).collect(),
        vectors: Matrix::from_fn(n, |i, k| v[(i, order[k])]),
    }
}

/// One Jacobi rotation zeroing `a[p][q]`: `a ← V† a V`, `v ← v V` with
/// `V = diag(1, e^{-iφ}) · [[c, s], [−s, c]]` on the `(p, q)` plane.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let b = a[(p, q)];
    let mag = b.norm();
    if mag < 1e-300 {
        return;
    }
    let phase = (b / mag).conj();
    let theta = 0.5 * (2.0 * mag).atan2(a[(q, q)].re - a[(p, p)].re);
    let (s, c) = theta.sin_cos();
    let vpp = C64::new(c, 0.0);
    let vpq = C64::new(s, 0.0);
    let vqp = phase * -s;
    let vqq = phase * c;

    let n = a.dim();
    for i in 0..n {
        let (aip, aiq) = (a[(i, p)], a[(i, q)]);
        a[(i, p)] = aip * vpp + aiq * vqp;
        a[(i, q)] = aip * vpq + aiq * vqq;
        let (vip, viq) = (v[(i, p)], v[(i, q)]);
        v[(i, p)] = vip * vpp + viq * vqp;
        v[(i, q)] = vip * vpq + viq * vqq;
    }
    for j in 0..n {
        let (apj, aqj) = (a[(p, j)], a[(q, j)]);
        a[(p, j)] = vpp.conj() * apj + vqp.conj() * aqj;
        a[(q, j)] = vpq.conj() * apj + vqq.conj() * aqj;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn two_by_two_complex() {
        // [[2, i], [-i, 2]] has eigenvalues 3 and 1
        let m = Matrix::from_rows(vec![vec![c(2.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(2.0, 0.0)]])
            .unwrap();
        let e = hermitian_eigen(&m);
        assert!((e.values[0] - 3.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        let x = e.vector(0);
        let mx = m.apply(&x);
        for (a, b) in mx.iter().zip(&x) {
            assert!((a - b * 3.0).norm() < 1e-13);
        }
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let m = Matrix::from_diagonal(&[c(0.1, 0.0), c(0.5, 0.0), c(-0.2, 0.0)]);
        let e = hermitian_eigen(&m);
        assert_eq!(e.values, vec![0.5, 0.1, -0.2]);
    }

    #[test]
    fn reconstructs_input() {
        let m = Matrix::from_fn(5, |i, j| {
            let x = c((i * 7 + j * 3) as f64 % 5.0, (i as f64 - j as f64) * 0.3);
            if i == j {
                c(x.re, 0.0)
            } else {
                x
            }
        })
        .hermitian_part();
        let e = hermitian_eigen(&m);
        let d = Matrix::from_diagonal(&e.values.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>());
        let rec = &(&e.vectors * &d) * &e.vectors.adjoint();
        assert!(rec.max_abs_diff(&m) < 1e-12);
    }
}
