//! Gauss–Hermite quadrature for integrals of the form ∫ e^{−x²} g(x) dx.
//!
//! Nodes and weights come from the Golub–Welsch construction: the nodes are
//! the eigenvalues of the symmetric tridiagonal Jacobi matrix of the Hermite
//! recurrence (zero diagonal, off-diagonals `sqrt(j/2)`), found by implicit
//! QL iterations that also accumulate the first eigenvector components,
//! which give the weights.

use crate::error::{Error, Result};
use crate::scalar::{cst, Real};

/// A Gauss–Hermite rule: ∫ e^{−x²} g(x) dx ≈ Σ w_i g(x_i).
#[derive(Debug, Clone)]
pub struct GaussHermite<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

/// Implicit-shift QL on a symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonals `e[0..n-1]` (`e[n-1]` is workspace), rotating a single row
/// vector `z` along. On return `d` holds the eigenvalues and `z` the first
/// components of the normalized eigenvectors.
fn tridiagonal_ql<T: Real>(d: &mut [T], e: &mut [T], z: &mut [T]) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    let eps = T::epsilon();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::numerical(
                    "tridiagonal QL did not converge while building the quadrature rule",
                ));
            }
            let mut g = (d[l + 1] - d[l]) / (cst::<T>(2.0) * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + cst::<T>(2.0) * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflow {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

impl<T: Real> GaussHermite<T> {
    /// Builds the `n`-point rule.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("Gauss-Hermite rule needs at least one node"));
        }
        let mut d = vec![T::zero(); n];
        let mut e: Vec<T> = (1..n).map(|j| (cst::<T>(j as f64) * cst(0.5)).sqrt()).collect();
        e.push(T::zero());
        let mut z = vec![T::zero(); n];
        z[0] = T::one();
        tridiagonal_ql(&mut d, &mut e, &mut z)?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap());
        let sqrt_pi = cst::<T>(std::f64::consts::PI).sqrt();
        let nodes: Vec<T> = order.iter().map(|&k| d[k]).collect();
        let weights: Vec<T> = order.iter().map(|&k| sqrt_pi * z[k] * z[k]).collect();
        Ok(GaussHermite { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// ∫ e^{−x²} g(x) dx. Nodes whose weights underflowed to zero are
    /// skipped so a large integrand there cannot poison the sum.
    pub fn integrate(&self, mut g: impl FnMut(T) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .filter(|(_, &w)| w != T::zero())
            .map(|(&x, &w)| w * g(x))
            .sum()
    }
}

/// Node-doubling ladder: evaluates `value(rule)` at 64, 128, … nodes until
/// two successive results agree within `agree_tol`; errors out if the final
/// disagreement still exceeds `fail_tol`.
pub(crate) fn converge_by_doubling<T: Real>(
    mut value: impl FnMut(&GaussHermite<T>) -> Result<T>,
    start: usize,
    max_nodes: usize,
    agree_tol: T,
    fail_tol: T,
) -> Result<T> {
    let mut n = start;
    let mut prev = value(&GaussHermite::new(n)?)?;
    loop {
        n *= 2;
        if n > max_nodes {
            return Err(Error::QuadratureDivergence {
                disagreement: f64::NAN,
                nodes: n / 2,
            });
        }
        let cur = value(&GaussHermite::new(n)?)?;
        let diff = (cur - prev).abs();
        if diff <= agree_tol {
            return Ok(cur);
        }
        if n == max_nodes {
            if diff <= fail_tol {
                return Ok(cur);
            }
            return Err(Error::QuadratureDivergence {
                disagreement: diff.to_f64().unwrap_or(f64::NAN),
                nodes: n,
            });
        }
        prev = cur;
    }
}

/// Default agreement tolerance for the node-doubling ladder, scaled away
/// from 1e−10 only when the scalar type cannot represent it.
pub(crate) fn agree_tol<T: Real>() -> T {
    cst::<T>(1e-10).max(T::epsilon() * cst(64.0))
}

/// Hard failure threshold for the node-doubling ladder.
pub(crate) fn fail_tol<T: Real>() -> T {
    cst::<T>(1e-9).max(T::epsilon() * cst(640.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn low_order_rules_match_known_nodes() {
        let q = GaussHermite::<f64>::new(2).unwrap();
        let r = 1.0 / 2.0_f64.sqrt();
        assert!((q.nodes()[0].abs() - r).abs() < 1e-14);
        assert!((q.weights()[0] - PI.sqrt() / 2.0).abs() < 1e-14);

        let q3 = GaussHermite::<f64>::new(3).unwrap();
        assert!(q3.nodes()[1].abs() < 1e-14);
        assert!((q3.nodes()[0].abs() - (1.5_f64).sqrt()).abs() < 1e-13);
        assert!((q3.weights()[1] - 2.0 * PI.sqrt() / 3.0).abs() < 1e-13);
        assert!((q3.weights()[0] - PI.sqrt() / 6.0).abs() < 1e-13);
    }

    #[test]
    fn moments_are_exact() {
        for n in [8usize, 21, 64, 128] {
            let q = GaussHermite::<f64>::new(n).unwrap();
            let m0 = q.integrate(|_| 1.0);
            let m2 = q.integrate(|x| x * x);
            let m4 = q.integrate(|x| x.powi(4));
            assert!((m0 - PI.sqrt()).abs() < 1e-12, "n={n} m0={m0}");
            assert!((m2 - PI.sqrt() / 2.0).abs() < 1e-12);
            assert!((m4 - 0.75 * PI.sqrt()).abs() < 1e-11);
        }
    }

    #[test]
    fn oscillatory_integrand() {
        // ∫ e^{-x^2} cos x dx = sqrt(pi) e^{-1/4}
        let q = GaussHermite::<f64>::new(32).unwrap();
        let got = q.integrate(|x| x.cos());
        let want = PI.sqrt() * (-0.25_f64).exp();
        assert!((got - want).abs() < 1e-13);
    }

    #[test]
    fn doubling_converges_for_smooth_integrand() {
        let v = converge_by_doubling::<f64>(
            |q| Ok(q.integrate(|x| (2.0 * x).cosh().ln_1p())),
            64,
            1024,
            1e-10,
            1e-9,
        )
        .unwrap();
        assert!(v.is_finite());
    }

    #[test]
    fn f32_rule_builds() {
        let q = GaussHermite::<f32>::new(16).unwrap();
        let m0 = q.integrate(|_| 1.0f32);
        assert!((m0 - (PI as f32).sqrt()).abs() < 1e-5);
    }
}
