use crate::scalar::Real;

/// Square band matrix with `m` sub- and superdiagonals, solved by Gaussian
/// elimination with partial pivoting (storage leaves room for `m` extra
/// superdiagonals of fill-in).
#[derive(Debug, Clone)]
pub struct BandMatrix<T> {
    n: usize,
    m: usize,
    data: Vec<T>,
}

impl<T: Real> BandMatrix<T> {
    pub fn zeros(n: usize, m: usize) -> Self {
        Self {
            n,
            m,
            data: vec![T::zero(); n * (3 * m + 1)],
        }
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.m >= i && j <= i + 2 * self.m);
        i * (3 * self.m + 1) + (j + self.m - i)
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        if j + self.m < i || j > i + self.m {
            T::zero()
        } else {
            self.data[self.slot(i, j)]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        assert!(j + self.m >= i && j <= i + self.m, "outside the band");
        let s = self.slot(i, j);
        self.data[s] = v;
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.m);
                let hi = (i + self.m).min(self.n - 1);
                (lo..=hi).fold(T::zero(), |acc, j| acc + self.get(i, j) * x[j])
            })
            .collect()
    }

    /// Solves `(A - shift) x = rhs`.
    pub fn solve_shifted(&self, shift: T, rhs: &[T]) -> Vec<T> {
        let (n, m) = (self.n, self.m);
        let mut a = self.data.clone();
        let width = 3 * m + 1;
        let idx = |i: usize, j: usize| i * width + (j + m - i);
        for i in 0..n {
            a[idx(i, i)] = a[idx(i, i)] - shift;
        }
        let mut x = rhs.to_vec();
        let tiny = T::epsilon() * (T::one() + shift.abs());
        for k in 0..n {
            let last = (k + m).min(n - 1);
            let p = (k..=last)
                .max_by(|&r, &s| {
                    a[idx(r, k)]
                        .abs()
                        .partial_cmp(&a[idx(s, k)].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(k);
            let right = (k + 2 * m).min(n - 1);
            if p != k {
                for j in k..=right {
                    a.swap(idx(k, j), idx(p, j));
                }
                x.swap(k, p);
            }
            if a[idx(k, k)] == T::zero() {
                a[idx(k, k)] = tiny;
            }
            let pivot = a[idx(k, k)];
            for i in k + 1..=last {
                let l = a[idx(i, k)] / pivot;
                if l == T::zero() {
                    continue;
                }
                a[idx(i, k)] = T::zero();
                for j in k + 1..=right {
                    a[idx(i, j)] = a[idx(i, j)] - l * a[idx(k, j)];
                }
                x[i] = x[i] - l * x[k];
            }
        }
        for i in (0..n).rev() {
            let right = (i + 2 * m).min(n - 1);
            let mut s = x[i];
            for j in i + 1..=right {
                s = s - a[idx(i, j)] * x[j];
            }
            x[i] = s / a[idx(i, i)];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_with_pivoting() {
        let n = 12;
        let mut a = BandMatrix::<f64>::zeros(n, 3);
        for i in 0..n {
            for j in i.saturating_sub(3)..=(i + 3).min(n - 1) {
                let v = if i == j { 0.0 } else { 1.0 + ((i * 7 + j * 3) % 5) as f64 };
                a.set(i, j, v);
            }
        }
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let x = a.solve_shifted(0.5, &rhs);
        let ax = a.apply(&x);
        for i in 0..n {
            assert!((ax[i] - 0.5 * x[i] - rhs[i]).abs() < 1e-10, "{i}");
        }
    }
}
