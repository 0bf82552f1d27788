//! Central finite-difference stencils on a uniform grid with zero ghost
//! values outside the sampled nodes, and Lagrange resampling.

use crate::scalar::Real;

const D1_ORDER6: [f64; 3] = [3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0];
const D1_ORDER8: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];

/// Symmetric second-derivative stencil: centre weight and off-centre weights.
pub(crate) struct SecondDerivative {
    pub centre: f64,
    pub off: &'static [f64],
}

pub(crate) const D2_ORDER4: SecondDerivative = SecondDerivative {
    centre: -5.0 / 2.0,
    off: &[4.0 / 3.0, -1.0 / 12.0],
};

pub(crate) const D2_ORDER8: SecondDerivative = SecondDerivative {
    centre: -205.0 / 72.0,
    off: &[8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0],
};

fn at<T: Real>(v: &[T], i: isize) -> T {
    if i < 0 || i as usize >= v.len() {
        T::zero()
    } else {
        v[i as usize]
    }
}

fn antisymmetric<T: Real>(v: &[T], h: T, weights: &[f64]) -> Vec<T> {
    (0..v.len() as isize)
        .map(|i| {
            weights.iter().enumerate().fold(T::zero(), |acc, (k, &w)| {
                let k = k as isize + 1;
                acc + T::lit(w) * (at(v, i + k) - at(v, i - k))
            }) / h
        })
        .collect()
}

/// Sixth-order first derivative.
pub fn derivative6<T: Real>(v: &[T], h: T) -> Vec<T> {
    antisymmetric(v, h, &D1_ORDER6)
}

/// Eighth-order first derivative.
pub fn derivative8<T: Real>(v: &[T], h: T) -> Vec<T> {
    antisymmetric(v, h, &D1_ORDER8)
}

/// Eighth-order second derivative.
pub fn second_derivative8<T: Real>(v: &[T], h: T) -> Vec<T> {
    (0..v.len() as isize)
        .map(|i| {
            let mut acc = T::lit(D2_ORDER8.centre) * v[i as usize];
            for (k, &w) in D2_ORDER8.off.iter().enumerate() {
                let k = k as isize + 1;
                acc = acc + T::lit(w) * (at(v, i + k) + at(v, i - k));
            }
            acc / (h * h)
        })
        .collect()
}

/// Eight-point Lagrange interpolation of samples `v` at nodes
/// `x_j = x_first + j h`, zero outside.
pub fn interpolate<T: Real>(v: &[T], x_first: T, h: T, x: T) -> T {
    const POINTS: isize = 8;
    let t = (x - x_first) / h;
    let base = t.floor().to_isize().unwrap_or(isize::MIN / 2) - POINTS / 2 + 1;
    let mut acc = T::zero();
    for a in 0..POINTS {
        let ja = base + a;
        let va = at(v, ja);
        if va == T::zero() {
            continue;
        }
        let mut w = T::one();
        for b in 0..POINTS {
            if b != a {
                let jb = base + b;
                w = w * (t - T::lit(jb as f64)) / T::lit((ja - jb) as f64);
            }
        }
        acc = acc + w * va;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(n: usize, h: f64, x0: f64, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..n).map(|j| f(x0 + j as f64 * h)).collect()
    }

    #[test]
    fn derivatives_of_a_gaussian() {
        let h = 0.02;
        let x0 = -8.0;
        let n = 801;
        let g = |x: f64| (-x * x).exp();
        let v = samples(n, h, x0, g);
        let d8 = derivative8(&v, h);
        let d6 = derivative6(&v, h);
        let dd = second_derivative8(&v, h);
        for j in 0..n {
            let x = x0 + j as f64 * h;
            let exact = -2.0 * x * g(x);
            assert!((d8[j] - exact).abs() < 1e-11, "{x}");
            assert!((d6[j] - exact).abs() < 1e-8, "{x}");
            assert!((dd[j] - (4.0 * x * x - 2.0) * g(x)).abs() < 1e-9, "{x}");
        }
    }

    #[test]
    fn eighth_order_convergence() {
        let f = |x: f64| x.sin();
        let err = |h: f64| {
            let v = samples(41, h, 1.0 - 20.0 * h, f);
            (derivative8(&v, h)[20] - 1f64.cos()).abs()
        };
        let ratio = err(0.2) / err(0.1);
        assert!(ratio > 200.0 && ratio < 300.0, "ratio {ratio}");
    }

    #[test]
    fn interpolation_is_exact_on_nodes_and_accurate_between() {
        let h = 0.05;
        let v = samples(200, h, -5.0, |x| (-x * x / 2.0).exp());
        assert_eq!(interpolate(&v, -5.0, h, -5.0 + 37.0 * h), v[37]);
        let x = 0.3141;
        assert!((interpolate(&v, -5.0, h, x) - (-x * x / 2.0).exp()).abs() < 1e-10);
    }
}
