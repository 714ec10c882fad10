//! Small dense floating-point linear algebra: Jacobi eigensolvers, singular
//! values, complex LU, and real Hessenberg QR for companion matrices.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Eigen-decomposition of a real symmetric `n × n` matrix (row-major) by
/// cyclic Jacobi rotations. Returns eigenvalues ascending and the matching
/// eigenvectors as columns of a row-major matrix.
pub fn sym_eigen(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale: f64 = m.iter().map(|x| x * x).sum::<f64>();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * n + j] * m[i * n + j])
            .sum();
        if off <= 1e-36 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if libm::fabs(apq) <= 1e-300 || apq * apq <= 1e-40 * scale {
                    m[p * n + q] = 0.0;
                    m[q * n + p] = 0.0;
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = {
                    let s = if theta >= 0.0 { 1.0 } else { -1.0 };
                    s / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0))
                };
                let cs = 1.0 / libm::sqrt(t * t + 1.0);
                let sn = t * cs;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = cs * mkp - sn * mkq;
                    m[k * n + q] = sn * mkp + cs * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = cs * mpk - sn * mqk;
                    m[q * n + k] = sn * mpk + cs * mqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = cs * vkp - sn * vkq;
                    v[k * n + q] = sn * vkp + cs * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    let vals = order.iter().map(|&i| m[i * n + i]).collect();
    let mut vecs = vec![0.0; n * n];
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vecs[k * n + new] = v[k * n + old];
        }
    }
    (vals, vecs)
}

pub fn sym_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    sym_eigen(a, n).0
}

/// Real symmetric `2n × 2n` embedding `[[X, -Y], [Y, X]]` of `H = X + iY`.
fn real_embedding(h: &[Complex64], n: usize) -> Vec<f64> {
    let m = 2 * n;
    let mut r = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = h[i * n + j];
            r[i * m + j] = z.re;
            r[(i + n) * m + (j + n)] = z.re;
            r[i * m + (j + n)] = -z.im;
            r[(i + n) * m + j] = z.im;
        }
    }
    r
}

/// Eigenvalues of a Hermitian `n × n` matrix, ascending.
pub fn hermitian_eigenvalues(h: &[Complex64], n: usize) -> Vec<f64> {
    hermitian_eigen(h, n).0
}

/// Eigenvalues (ascending) and unit eigenvectors of a Hermitian matrix.
/// Only the Hermitian part of `h` is used.
pub fn hermitian_eigen(h: &[Complex64], n: usize) -> (Vec<f64>, Vec<Vec<Complex64>>) {
    let mut sym = vec![c(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            sym[i * n + j] = (h[i * n + j] + h[j * n + i].conj()) * 0.5;
        }
    }
    let m = 2 * n;
    let (vals, vecs) = sym_eigen(&real_embedding(&sym, n), m);
    // Each eigenvalue of H appears twice; keep one complex vector per
    // linearly independent direction.
    let mut out_vals = Vec::with_capacity(n);
    let mut out_vecs: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for k in 0..m {
        if out_vecs.len() == n {
            break;
        }
        let mut z: Vec<Complex64> = (0..n).map(|i| c(vecs[i * m + k], vecs[(i + n) * m + k])).collect();
        for u in &out_vecs {
            let dot: Complex64 = u.iter().zip(&z).map(|(a, b)| a.conj() * b).sum();
            for (zi, ui) in z.iter_mut().zip(u) {
                *zi -= dot * ui;
            }
        }
        let nrm = libm::sqrt(z.iter().map(|v| v.norm_sqr()).sum::<f64>());
        if nrm > 0.5 {
            for zi in &mut z {
                *zi /= nrm;
            }
            out_vecs.push(z);
            out_vals.push(vals[k]);
        }
    }
    (out_vals, out_vecs)
}

/// Singular values of a complex `rows × cols` matrix, descending, via the
/// eigenvalues of the Hermitian dilation `[[0, A], [A*, 0]]`.
pub fn singular_values(a: &[Complex64], rows: usize, cols: usize) -> Vec<f64> {
    let n = rows + cols;
    let mut d = vec![c(0.0, 0.0); n * n];
    for i in 0..rows {
        for j in 0..cols {
            d[i * n + rows + j] = a[i * cols + j];
            d[(rows + j) * n + i] = a[i * cols + j].conj();
        }
    }
    let vals = sym_eigenvalues(&real_embedding(&d, n), 2 * n);
    // Real embedding doubles every eigenvalue of the dilation; the top
    // 2·min(rows, cols) values are the singular values, each twice.
    let k = rows.min(cols);
    let mut sv: Vec<f64> = vals.iter().rev().take(2 * k).step_by(2).map(|&v| v.max(0.0)).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Count of singular values above `rel_tol × σ_max`.
pub fn numeric_rank(sv: &[f64], rel_tol: f64) -> usize {
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Solves `A x = b` in place by LU with partial pivoting. Returns `false`
/// when a pivot vanishes.
pub fn solve_c64(a: &mut [Complex64], n: usize, b: &mut [Complex64]) -> bool {
    for col in 0..n {
        let mut p = col;
        let mut best = a[col * n + col].norm();
        for r in col + 1..n {
            let v = a[r * n + col].norm();
            if v > best {
                best = v;
                p = r;
            }
        }
        if best == 0.0 || !best.is_finite() {
            return false;
        }
        if p != col {
            for j in 0..n {
                a.swap(p * n + j, col * n + j);
            }
            b.swap(p, col);
        }
        let inv = c(1.0, 0.0) / a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] * inv;
            if f == c(0.0, 0.0) {
                continue;
            }
            for j in col..n {
                let t = a[col * n + j];
                a[r * n + j] -= f * t;
            }
            let t = b[col];
            b[r] -= f * t;
        }
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= a[i * n + j] * b[j];
        }
        b[i] = s / a[i * n + i];
    }
    b.iter().all(|v| v.re.is_finite() && v.im.is_finite())
}

/// Least-squares step `argmin ‖J d + r‖² + μ‖d‖²` for a `m × n` Jacobian.
pub fn damped_least_squares(j: &[Complex64], m: usize, n: usize, r: &[Complex64], mu: f64) -> Option<Vec<Complex64>> {
    let mut ata = vec![c(0.0, 0.0); n * n];
    let mut atb = vec![c(0.0, 0.0); n];
    for i in 0..n {
        for k in 0..n {
            let mut s = c(0.0, 0.0);
            for row in 0..m {
                s += j[row * n + i].conj() * j[row * n + k];
            }
            ata[i * n + k] = s;
        }
        let mut s = c(0.0, 0.0);
        for row in 0..m {
            s += j[row * n + i].conj() * r[row];
        }
        atb[i] = -s;
    }
    for i in 0..n {
        ata[i * n + i] += c(mu, 0.0);
    }
    solve_c64(&mut ata, n, &mut atb).then_some(atb)
}

/// Eigenvalues of a real upper Hessenberg matrix by the shifted QR
/// algorithm (Francis double shift). `None` if iteration fails to converge.
pub fn hessenberg_eigenvalues(h: &[f64], n: usize) -> Option<Vec<Complex64>> {
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| h[i * n..(i + 1) * n].to_vec()).collect();
    balance(&mut a);
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += libm::fabs(a[i][j]);
        }
    }
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    let sign = |a: f64, b: f64| if b >= 0.0 { libm::fabs(a) } else { -libm::fabs(a) };
    while nn >= 0 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            let mut l = nu;
            while l >= 1 {
                let mut s = libm::fabs(a[l - 1][l - 1]) + libm::fabs(a[l][l]);
                if s == 0.0 {
                    s = anorm;
                }
                if libm::fabs(a[l][l - 1]) + s == s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[nu][nu];
            if l == nu {
                wr[nu] = x + t;
                wi[nu] = 0.0;
                nn -= 1;
                break;
            }
            let mut y = a[nu - 1][nu - 1];
            let mut w = a[nu][nu - 1] * a[nu - 1][nu];
            if l == nu - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let mut z = libm::sqrt(libm::fabs(q));
                x += t;
                if q >= 0.0 {
                    z = p + sign(z, p);
                    wr[nu - 1] = x + z;
                    wr[nu] = x + z;
                    if z != 0.0 {
                        wr[nu] = x - w / z;
                    }
                    wi[nu - 1] = 0.0;
                    wi[nu] = 0.0;
                } else {
                    wr[nu - 1] = x + p;
                    wr[nu] = x + p;
                    wi[nu - 1] = -z;
                    wi[nu] = z;
                }
                nn -= 2;
                break;
            }
            if its == 60 {
                return None;
            }
            if its == 10 || its == 20 {
                t += x;
                for (i, row) in a.iter_mut().enumerate().take(nu + 1) {
                    row[i] -= x;
                }
                let s = libm::fabs(a[nu][nu - 1]) + libm::fabs(a[nu - 1][nu - 2]);
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            let mut m = nu - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[m][m];
                let rr = x - z;
                let s = y - z;
                p = (rr * s - w) / a[m + 1][m] + a[m][m + 1];
                q = a[m + 1][m + 1] - z - rr - s;
                r = a[m + 2][m + 1];
                let s = libm::fabs(p) + libm::fabs(q) + libm::fabs(r);
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = libm::fabs(a[m][m - 1]) * (libm::fabs(q) + libm::fabs(r));
                let v = libm::fabs(p) * (libm::fabs(a[m - 1][m - 1]) + libm::fabs(z) + libm::fabs(a[m + 1][m + 1]));
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nu {
                a[i][i - 2] = 0.0;
                if i != m + 2 {
                    a[i][i - 3] = 0.0;
                }
            }
            let mut k = m;
            while k + 1 <= nu {
                if k != m {
                    p = a[k][k - 1];
                    q = a[k + 1][k - 1];
                    r = if k + 1 != nu { a[k + 2][k - 1] } else { 0.0 };
                    x = libm::fabs(p) + libm::fabs(q) + libm::fabs(r);
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign(libm::sqrt(p * p + q * q + r * r), p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[k][k - 1] = -a[k][k - 1];
                        }
                    } else {
                        a[k][k - 1] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nu {
                        let mut pp = a[k][j] + q * a[k + 1][j];
                        if k + 1 != nu {
                            pp += r * a[k + 2][j];
                            a[k + 2][j] -= pp * z;
                        }
                        a[k + 1][j] -= pp * y;
                        a[k][j] -= pp * x;
                    }
                    let mmin = if nu < k + 3 { nu } else { k + 3 };
                    for row in a.iter_mut().take(mmin + 1).skip(l) {
                        let mut pp = x * row[k] + y * row[k + 1];
                        if k + 1 != nu {
                            pp += z * row[k + 2];
                            row[k + 2] -= pp * r;
                        }
                        row[k + 1] -= pp * q;
                        row[k] -= pp;
                    }
                }
                k += 1;
            }
        }
    }
    Some(wr.into_iter().zip(wi).map(|(re, im)| c(re, im)).collect())
}

/// Diagonal similarity balancing (radix 2).
fn balance(a: &mut [Vec<f64>]) {
    let n = a.len();
    let radix = 2.0;
    let sqrdx = radix * radix;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut cc = 0.0;
            for j in 0..n {
                if j != i {
                    cc += libm::fabs(a[j][i]);
                    r += libm::fabs(a[i][j]);
                }
            }
            if cc != 0.0 && r != 0.0 {
                let mut g = r / radix;
                let mut f = 1.0;
                let s = cc + r;
                while cc < g {
                    f *= radix;
                    cc *= sqrdx;
                }
                g = r * radix;
                while cc > g {
                    f /= radix;
                    cc /= sqrdx;
                }
                if (cc + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 0..n {
                        a[i][j] *= g;
                    }
                    for row in a.iter_mut() {
                        row[i] *= f;
                    }
                }
            }
        }
    }
}

/// Roots of `Σ coeffs[k] t^k` via the eigenvalues of its companion matrix.
/// Leading coefficient must be nonzero.
pub fn poly_roots(coeffs: &[f64]) -> Option<Vec<Complex64>> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    if lead == 0.0 {
        return None;
    }
    if deg == 0 {
        return Some(Vec::new());
    }
    let mut comp = vec![0.0; deg * deg];
    for j in 0..deg {
        comp[j] = -coeffs[deg - 1 - j] / lead;
    }
    for i in 1..deg {
        comp[i * deg + i - 1] = 1.0;
    }
    hessenberg_eigenvalues(&comp, deg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_diagonalises() {
        let a = [4.0, 1.0, 2.0, 1.0, 3.0, 0.5, 2.0, 0.5, 1.0];
        let (vals, vecs) = sym_eigen(&a, 3);
        for k in 0..3 {
            for i in 0..3 {
                let av: f64 = (0..3).map(|j| a[i * 3 + j] * vecs[j * 3 + k]).sum();
                assert!((av - vals[k] * vecs[i * 3 + k]).abs() < 1e-12);
            }
        }
        assert!(vals[0] <= vals[1] && vals[1] <= vals[2]);
    }

    #[test]
    fn hermitian_eigenpairs() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let h = [c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)];
        let (vals, vecs) = hermitian_eigen(&h, 2);
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 3.0).abs() < 1e-12);
        for (k, v) in vecs.iter().enumerate() {
            for i in 0..2 {
                let hv: Complex64 = (0..2).map(|j| h[i * 2 + j] * v[j]).sum();
                assert!((hv - v[i] * vals[k]).norm() < 1e-12);
            }
        }
        // repeated eigenvalue keeps independent vectors
        let id = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        let (_, vecs) = hermitian_eigen(&id, 2);
        let dot: Complex64 = vecs[0].iter().zip(&vecs[1]).map(|(a, b)| a.conj() * b).sum();
        assert!(dot.norm() < 1e-12);
    }

    #[test]
    fn singular_values_of_rank_one() {
        // u v^T with u = (1, i), v = (1, 2, 3): one singular value |u||v|
        let u = [c(1.0, 0.0), c(0.0, 1.0)];
        let v = [1.0, 2.0, 3.0];
        let a: Vec<Complex64> = (0..6).map(|k| u[k / 3] * v[k % 3]).collect();
        let sv = singular_values(&a, 2, 3);
        assert_eq!(sv.len(), 2);
        assert!((sv[0] - libm::sqrt(28.0)).abs() < 1e-12 && sv[1].abs() < 1e-12);
        let b = [c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)];
        let sv = singular_values(&b, 2, 2);
        assert!((sv[0] - 5.0).abs() < 1e-12 && sv[1].abs() < 1e-12);
        assert_eq!(numeric_rank(&sv, 1e-8), 1);
    }

    #[test]
    fn lu_solves() {
        let mut a = vec![c(0.0, 1.0), c(1.0, 0.0), c(2.0, 0.0), c(0.0, -1.0)];
        let mut b = vec![c(1.0, 0.0), c(0.0, 0.0)];
        assert!(solve_c64(&mut a, 2, &mut b));
        let a0 = [c(0.0, 1.0), c(1.0, 0.0), c(2.0, 0.0), c(0.0, -1.0)];
        let r0 = a0[0] * b[0] + a0[1] * b[1];
        let r1 = a0[2] * b[0] + a0[3] * b[1];
        assert!((r0 - c(1.0, 0.0)).norm() < 1e-14 && r1.norm() < 1e-14);
    }

    #[test]
    fn companion_roots() {
        // t^4 - 1
        let mut r = poly_roots(&[-1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        r.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        assert_eq!(r.len(), 4);
        assert!((r[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((r[3] - c(1.0, 0.0)).norm() < 1e-12);
        // (t-1)(t-2)(t-3)(t+5)
        let r = poly_roots(&[-30.0, 49.0, -19.0, -1.0, 1.0]).unwrap();
        for want in [1.0, 2.0, 3.0, -5.0] {
            assert!(r.iter().any(|z| (z - c(want, 0.0)).norm() < 1e-9));
        }
    }
}
