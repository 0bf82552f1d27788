//! Symmetric tridiagonal eigenproblems: Sturm-sequence bisection for
//! eigenvalues, inverse iteration for eigenvectors.

use crate::scalar::Real;

/// Symmetric tridiagonal matrix with diagonal `diag` and off-diagonal `off`
/// (`off[i]` couples rows `i` and `i + 1`).
#[derive(Debug, Clone)]
pub struct SymTridiagonal<T> {
    pub diag: Vec<T>,
    pub off: Vec<T>,
}

impl<T: Real> SymTridiagonal<T> {
    pub fn new(diag: Vec<T>, off: Vec<T>) -> Self {
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal length");
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    fn gershgorin(&self) -> (T, T) {
        let n = self.len();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { T::zero() };
            let right = if i + 1 < n { self.off[i].abs() } else { T::zero() };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x` (Sturm count).
    pub fn count_below(&self, x: T) -> usize {
        let tiny = T::min_positive_value().sqrt();
        let mut count = 0;
        let mut d = T::one();
        for i in 0..self.len() {
            let coupling = if i > 0 {
                self.off[i - 1] * self.off[i - 1] / d
            } else {
                T::zero()
            };
            d = self.diag[i] - x - coupling;
            if d == T::zero() {
                d = -tiny;
            }
            if d < T::zero() {
                count += 1;
            }
        }
        count
    }

    /// The `k` lowest eigenvalues in ascending order, each bisected to
    /// machine precision.
    pub fn lowest_eigenvalues(&self, k: usize) -> Vec<T> {
        let k = k.min(self.len());
        let (lo0, hi0) = self.gershgorin();
        let mut out = Vec::with_capacity(k);
        let mut floor = lo0;
        for i in 0..k {
            let (mut lo, mut hi) = (floor, hi0);
            for _ in 0..400 {
                let mid = (lo + hi) / T::lit(2.0);
                if mid <= lo || mid >= hi {
                    break;
                }
                if self.count_below(mid) > i {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let value = (lo + hi) / T::lit(2.0);
            out.push(value);
            floor = lo;
        }
        out
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y = y + self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y = y + self.off[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Solves `(A - shift) x = rhs` by Gaussian elimination with partial
    /// pivoting (fill-in of one extra superdiagonal).
    pub fn solve_shifted(&self, shift: T, rhs: &[T]) -> Vec<T> {
        let n = self.len();
        let tiny = T::epsilon() * (T::one() + shift.abs());
        // rows hold (sub, diag, sup, sup2) after elimination; work on a band copy.
        let mut a: Vec<T> = self.diag.iter().map(|&d| d - shift).collect();
        let mut b: Vec<T> = self.off.clone(); // superdiagonal
        b.push(T::zero());
        let mut c: Vec<T> = vec![T::zero(); n]; // second superdiagonal
        let mut sub: Vec<T> = self.off.clone();
        sub.push(T::zero());
        let mut x = rhs.to_vec();
        for i in 0..n.saturating_sub(1) {
            // candidate rows i (a[i], b[i], c[i]) and i+1 (sub[i], a[i+1], b[i+1])
            if sub[i].abs() > a[i].abs() {
                // swap rows i and i+1
                let (r0, r1, r2) = (sub[i], a[i + 1], b[i + 1]);
                let (s0, s1, s2) = (a[i], b[i], c[i]);
                a[i] = r0;
                b[i] = r1;
                c[i] = r2;
                sub[i] = s0;
                a[i + 1] = s1;
                b[i + 1] = s2;
                x.swap(i, i + 1);
            }
            if a[i] == T::zero() {
                a[i] = tiny;
            }
            let m = sub[i] / a[i];
            a[i + 1] = a[i + 1] - m * b[i];
            b[i + 1] = b[i + 1] - m * c[i];
            x[i + 1] = x[i + 1] - m * x[i];
            sub[i] = T::zero();
        }
        if a[n - 1] == T::zero() {
            a[n - 1] = tiny;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            if i + 1 < n {
                s = s - b[i] * x[i + 1];
            }
            if i + 2 < n {
                s = s - c[i] * x[i + 2];
            }
            x[i] = s / a[i];
        }
        x
    }

    /// Unit-norm eigenvector for an eigenvalue approximation `lambda`.
    pub fn eigenvector(&self, lambda: T) -> Vec<T> {
        let n = self.len();
        // Asymmetric start so that neither parity sector is missed.
        let mut v: Vec<T> = (0..n)
            .map(|i| T::one() + T::of_usize(i) / T::of_usize(n))
            .collect();
        for _ in 0..4 {
            v = self.solve_shifted(lambda, &v);
            let norm = v.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt();
            for x in &mut v {
                *x = *x / norm;
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(n: usize) -> SymTridiagonal<f64> {
        SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1])
    }

    #[test]
    fn dirichlet_laplacian_spectrum() {
        let n = 50;
        let m = laplacian(n);
        let ev = m.lowest_eigenvalues(5);
        for (k, &e) in ev.iter().enumerate() {
            let theta = std::f64::consts::PI * (k + 1) as f64 / (n + 1) as f64;
            let exact = 2.0 - 2.0 * theta.cos();
            assert!((e - exact).abs() < 1e-13, "{k}: {e} vs {exact}");
        }
    }

    #[test]
    fn sturm_count_brackets() {
        let m = laplacian(10);
        assert_eq!(m.count_below(-1.0), 0);
        assert_eq!(m.count_below(5.0), 10);
    }

    #[test]
    fn eigenvector_residual_is_small() {
        let m = SymTridiagonal::new(
            (0..40).map(|i| 2.0 + 0.01 * (i as f64 - 20.0).powi(2)).collect(),
            vec![-1.0; 39],
        );
        for (k, lambda) in m.lowest_eigenvalues(4).into_iter().enumerate() {
            let v = m.eigenvector(lambda);
            let av = m.apply(&v);
            let res = av
                .iter()
                .zip(&v)
                .map(|(a, x)| (a - lambda * x).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(res < 1e-10, "k={k} residual {res}");
        }
    }

    #[test]
    fn pivoted_solve_matches_dense() {
        let m = SymTridiagonal::new(vec![0.0, 1.0, -2.0, 3.0], vec![5.0, 0.5, 1.5]);
        let rhs = [1.0f64, 2.0, 3.0, 4.0];
        let x = m.solve_shifted(0.25, &rhs);
        let ax = m.apply(&x);
        for i in 0..4 {
            assert!((ax[i] - 0.25 * x[i] - rhs[i]).abs() < 1e-12);
        }
    }
}
