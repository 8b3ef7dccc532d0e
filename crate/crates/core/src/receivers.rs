//! Exact mutual-information models for the concrete receivers: minimum-error
//! (Helstrom) detection of BPSK, the Shannon–Hartley quadrature benchmark,
//! shot-noise-limited homodyne detection, and the collective two- and
//! three-symbol schemes built from a linear circuit, one homodyne port and
//! single-photon detectors.
//!
//! Homodyne statistics follow the convention `p(x | a) = exp(-(x - sqrt(2)
//! Re a)^2) / sqrt(pi)` (quadrature variance 1/2); every scheme in this
//! module reuses it. Single-photon detectors are binary (click / no click)
//! with no-click probability `exp(-|a + beta|^2)` for field amplitude `a`
//! and optional displacement `beta`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{cre, CMatrix};
use crate::lowcost::three_symbol_povm_vectors;
use crate::quad::{agree_tol, converge_by_doubling, fail_tol, GaussHermite};
use crate::scalar::{binary_entropy_impl, cst, Real};

const QUAD_START: usize = 64;
const QUAD_MAX: usize = 512;

/// Binary entropy −x ln x − (1−x) ln(1−x) in nats.
pub fn binary_entropy<T: Real>(x: T) -> T {
    binary_entropy_impl(x)
}

/// Mutual information of minimum-error detection on the BPSK alphabet
/// `|±sqrt(nbar)>`: `log 2 − H(eps)` with
/// `eps = (1 − sqrt(1 − e^{−4 nbar})) / 2`.
pub fn helstrom_mi<T: Real>(nbar: T) -> T {
    assert!(nbar >= T::zero(), "mean photon number must be nonnegative");
    let four = cst::<T>(4.0);
    // 1 − e^{−4 nbar} evaluated without cancellation.
    let one_minus = -(-four * nbar).exp_m1();
    let eps = cst::<T>(0.5) * (T::one() - one_minus.sqrt());
    cst::<T>(2.0).ln() - binary_entropy(eps)
}

/// Shannon–Hartley mutual information of a quadrature channel at mean photon
/// number `nbar` with `nb` thermal background photons:
/// `log(1 + 4 nbar / (1 + 2 nb)) / 2`.
pub fn shannon_hartley<T: Real>(nbar: T, nb: T) -> T {
    assert!(nbar >= T::zero() && nb >= T::zero());
    cst::<T>(0.5) * (cst::<T>(4.0) * nbar / (T::one() + cst::<T>(2.0) * nb)).ln_1p()
}

/// Leading-order photon information efficiency bound for coherent states
/// displaced on a thermal background with `nb` photons: `2 / (1 + 2 nb)`
/// nats per photon.
pub fn thermal_pie_bound<T: Real>(nb: T) -> T {
    assert!(nb >= T::zero());
    cst::<T>(2.0) / (T::one() + cst::<T>(2.0) * nb)
}

/// ln cosh(y) without overflow.
fn ln_cosh<T: Real>(y: T) -> T {
    let a = y.abs();
    a + (-(a + a)).exp().ln_1p() - cst::<T>(2.0).ln()
}

/// Mutual information of shot-noise-limited homodyne detection on the BPSK
/// alphabet `|±zeta>`, `zeta = sqrt(nbar)`, in nats:
///
/// `4 zeta^2 − e^{−2 zeta^2}/sqrt(pi) ∫ e^{−x^2} cosh(2 sqrt(2) x zeta)
/// ln cosh(2 sqrt(2) x zeta) dx`,
///
/// evaluated by Gauss–Hermite quadrature with node doubling.
pub fn homodyne_bpsk_mi<T: Real>(nbar: T) -> Result<T> {
    if nbar < T::zero() || !nbar.is_finite() {
        return Err(Error::domain("mean photon number must be nonnegative"));
    }
    let zeta = nbar.sqrt();
    let a = cst::<T>(2.0) * cst::<T>(2.0).sqrt() * zeta;
    let z2 = zeta * zeta;
    let sqrt_pi = cst::<T>(std::f64::consts::PI).sqrt();
    converge_by_doubling(
        |q| {
            let integral = q.integrate(|x| {
                let y = a * x;
                let lc = ln_cosh(y);
                // cosh(y) * ln cosh(y), stable for large |y|.
                let e = (-cst::<T>(2.0) * y.abs()).exp();
                cst::<T>(0.5) * y.abs().exp() * (T::one() + e) * lc
            });
            Ok(cst::<T>(4.0) * z2 - (-cst::<T>(2.0) * z2).exp() / sqrt_pi * integral)
        },
        QUAD_START,
        QUAD_MAX,
        agree_tol::<T>(),
        fail_tol::<T>(),
    )
}

/// A passive linear optical circuit: a unitary map on mode amplitudes.
#[derive(Debug, Clone)]
pub struct LinearCircuit<T> {
    matrix: CMatrix<T>,
}

impl<T: Real> LinearCircuit<T> {
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::domain("circuit matrix must be square"));
        }
        let n = matrix.rows();
        let gram = matrix.adjoint().matmul(&matrix);
        let dev = gram.sub(&CMatrix::identity(n)).frobenius_norm();
        if dev > cst(1e-10) {
            return Err(Error::domain(format!(
                "circuit matrix is not unitary (deviation {dev:e})"
            )));
        }
        Ok(LinearCircuit { matrix })
    }

    pub fn from_real_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        let m = CMatrix::from_fn(n, n, |i, j| cre(rows[i][j]));
        Self::new(m)
    }

    pub fn modes(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    /// Output amplitudes for the given input amplitudes.
    pub fn transform(&self, input: &[Complex<T>]) -> Vec<Complex<T>> {
        self.matrix.matvec(input)
    }
}

/// The balanced two-mode interferometer used by the two-symbol scheme.
pub fn two_symbol_circuit<T: Real>() -> LinearCircuit<T> {
    let r = T::one() / cst::<T>(2.0).sqrt();
    LinearCircuit::from_real_rows(&[vec![r, r], vec![r, -r]]).expect("balanced splitter is unitary")
}

/// The three-mode circuit used by the three-symbol scheme: the first output
/// collects the symmetric combination, the other two project onto the
/// optimal photon-counting directions of the one-photon sector.
pub fn three_symbol_circuit<T: Real>() -> LinearCircuit<T> {
    let s = T::one() / cst::<T>(3.0).sqrt();
    let (q1, q2) = three_symbol_povm_vectors::<T>();
    LinearCircuit::from_real_rows(&[vec![s, s, s], q1.to_vec(), q2.to_vec()])
        .expect("three-symbol circuit is orthogonal")
}

/// A measurement channel with one continuous quadrature branch and one
/// finite click branch; the outcome is the pair `(x, k)`.
///
/// Conditioned on input `j`, the two branches are independent: the
/// quadrature has density `sum_a w_a exp(-(x-mu_a)^2)/sqrt(pi)` given by the
/// per-input mixture, and the clicks follow the per-input distribution over
/// a shared finite alphabet.
#[derive(Debug, Clone)]
pub struct HybridChannel<T> {
    priors: Vec<T>,
    /// Per input: Gaussian mixture as (weight, mean) pairs.
    densities: Vec<Vec<(T, T)>>,
    /// Per input: probabilities over the click alphabet.
    clicks: Vec<Vec<T>>,
}

impl<T: Real> HybridChannel<T> {
    pub fn new(
        priors: Vec<T>,
        densities: Vec<Vec<(T, T)>>,
        clicks: Vec<Vec<T>>,
    ) -> Result<Self> {
        if priors.is_empty() || priors.len() != densities.len() || priors.len() != clicks.len() {
            return Err(Error::domain("inputs, densities and clicks must align"));
        }
        if priors.iter().any(|p| *p < T::zero() || !p.is_finite()) {
            return Err(Error::domain("priors must be nonnegative"));
        }
        let psum: T = priors.iter().copied().sum();
        if (psum - T::one()).abs() > cst(1e-12) {
            return Err(Error::domain("priors must sum to 1"));
        }
        let n_clicks = clicks[0].len();
        if n_clicks == 0 {
            return Err(Error::domain("click alphabet must be nonempty"));
        }
        let mut densities = densities;
        let mut clicks = clicks;
        for (d, c) in densities.iter_mut().zip(&mut clicks) {
            if d.is_empty() {
                return Err(Error::domain("each input needs a quadrature density"));
            }
            if c.len() != n_clicks {
                return Err(Error::domain("click alphabet must be shared by all inputs"));
            }
            if d.iter().any(|(w, m)| *w < T::zero() || !w.is_finite() || !m.is_finite())
                || c.iter().any(|q| *q < T::zero() || !q.is_finite())
            {
                return Err(Error::domain("weights and probabilities must be nonnegative"));
            }
            let wsum: T = d.iter().map(|(w, _)| *w).sum();
            let csum: T = c.iter().copied().sum();
            if (wsum * csum - T::one()).abs() > cst(1e-9) {
                return Err(Error::domain(
                    "per input, density mass times click mass must equal 1",
                ));
            }
            // Move the mass split into the click branch so that the density
            // integrates to 1 and the clicks sum to 1; the conditional
            // p(x, k | j) is unchanged.
            for (w, _) in d.iter_mut() {
                *w = *w / wsum;
            }
            for q in c.iter_mut() {
                *q = *q * wsum;
            }
        }
        Ok(HybridChannel { priors, densities, clicks })
    }

    pub fn inputs(&self) -> usize {
        self.priors.len()
    }

    pub fn click_outcomes(&self) -> usize {
        self.clicks[0].len()
    }

    pub fn priors(&self) -> &[T] {
        &self.priors
    }

    /// p(x, k | j): quadrature density times click probability.
    pub fn conditional_density(&self, j: usize, x: T, k: usize) -> T {
        let sqrt_pi = cst::<T>(std::f64::consts::PI).sqrt();
        let dens: T = self.densities[j]
            .iter()
            .map(|(w, mu)| *w * (-(x - *mu) * (x - *mu)).exp())
            .sum::<T>()
            / sqrt_pi;
        dens * self.clicks[j][k]
    }

    /// p(x, k) marginalized over inputs.
    pub fn marginal_density(&self, x: T, k: usize) -> T {
        (0..self.inputs())
            .map(|j| self.priors[j] * self.conditional_density(j, x, k))
            .sum()
    }

    /// Joint entropy −Σ_k ∫ p(x,k) ln p(x,k) dx for a fixed quadrature rule,
    /// integrating each Gaussian component against its own shifted rule.
    fn joint_entropy(&self, rule: &GaussHermite<T>) -> T {
        let n = self.inputs();
        let nk = self.click_outcomes();
        let sqrt_pi = cst::<T>(std::f64::consts::PI).sqrt();
        let ln_sqrt_pi = sqrt_pi.ln();
        let mut h = T::zero();
        for k in 0..nk {
            // Mixture components of p(x, k): weight p_j c_jk w_a at mean mu_a.
            let mut comps: Vec<(T, T)> = Vec::new();
            for j in 0..n {
                let base = self.priors[j] * self.clicks[j][k];
                if base <= T::zero() {
                    continue;
                }
                for (w, mu) in &self.densities[j] {
                    if *w > T::zero() {
                        comps.push((base * *w, *mu));
                    }
                }
            }
            if comps.is_empty() {
                continue;
            }
            let log_w: Vec<T> = comps.iter().map(|(w, _)| w.ln()).collect();
            for (w, mu) in &comps {
                let shift = *mu;
                let integral = rule.integrate(|t| {
                    let x = t + shift;
                    // ln p(x,k) by log-sum-exp over the mixture.
                    let mut m = T::neg_infinity();
                    for ((_, mj), lw) in comps.iter().zip(&log_w) {
                        let e = *lw - (x - *mj) * (x - *mj);
                        if e > m {
                            m = e;
                        }
                    }
                    let mut s = T::zero();
                    for ((_, mj), lw) in comps.iter().zip(&log_w) {
                        s = s + (*lw - (x - *mj) * (x - *mj) - m).exp();
                    }
                    m + s.ln() - ln_sqrt_pi
                });
                h = h - *w / sqrt_pi * integral;
            }
        }
        h
    }

    /// Differential entropy of input `j`'s quadrature mixture.
    fn conditional_quadrature_entropy(&self, j: usize, rule: &GaussHermite<T>) -> T {
        let comps = &self.densities[j];
        if comps.len() == 1 {
            // Single Gaussian of the fixed shape.
            return cst::<T>(0.5) * (T::one() + cst::<T>(std::f64::consts::PI).ln());
        }
        let sqrt_pi = cst::<T>(std::f64::consts::PI).sqrt();
        let ln_sqrt_pi = sqrt_pi.ln();
        let log_w: Vec<T> = comps.iter().map(|(w, _)| w.ln()).collect();
        let mut h = T::zero();
        for (w, mu) in comps {
            if *w <= T::zero() {
                continue;
            }
            let shift = *mu;
            let integral = rule.integrate(|t| {
                let x = t + shift;
                let mut m = T::neg_infinity();
                for ((_, mj), lw) in comps.iter().zip(&log_w) {
                    let e = *lw - (x - *mj) * (x - *mj);
                    if e > m {
                        m = e;
                    }
                }
                let mut s = T::zero();
                for ((_, mj), lw) in comps.iter().zip(&log_w) {
                    s = s + (*lw - (x - *mj) * (x - *mj) - m).exp();
                }
                m + s.ln() - ln_sqrt_pi
            });
            h = h - *w / sqrt_pi * integral;
        }
        h
    }

    /// Mutual information between the input label and the outcome `(x, k)`,
    /// by node doubling until successive values agree.
    pub fn mutual_information(&self) -> Result<T> {
        converge_by_doubling(
            |rule| Ok(self.mi_at(rule)),
            QUAD_START,
            QUAD_MAX,
            agree_tol::<T>(),
            fail_tol::<T>(),
        )
    }

    fn mi_at(&self, rule: &GaussHermite<T>) -> T {
        let joint = self.joint_entropy(rule);
        let mut cond = T::zero();
        for j in 0..self.inputs() {
            if self.priors[j] <= T::zero() {
                continue;
            }
            let hk: T = self.clicks[j]
                .iter()
                .map(|q| if *q > T::zero() { -*q * q.ln() } else { T::zero() })
                .sum();
            let hx = self.conditional_quadrature_entropy(j, rule);
            cond = cond + self.priors[j] * (hk + hx);
        }
        joint - cond
    }
}

/// No-click probability of a single-photon detector seeing amplitude `a`
/// displaced by `beta`.
fn spd_no_click<T: Real>(a: Complex<T>, beta: Complex<T>) -> T {
    (-(a + beta).norm_sqr()).exp()
}

/// Exact mutual information of the two-symbol collective scheme.
///
/// Words `00`, `11` (probability `(1-u)/2` each) and `01` (probability `u`)
/// of BPSK symbols `|±zeta>`, `zeta = sqrt(nbar)`, interfere on a balanced
/// splitter; output port 1 is homodyned, port 2 feeds a single-photon
/// detector preceded by an optional displacement `beta`. Returns the mutual
/// information between the word and the outcome `(x, k)` in nats.
///
/// Only real displacements are ever needed: the amplitude reaching the
/// detector is real, so a complex `beta` is accepted but its imaginary part
/// can only dilute the click statistics.
pub fn two_symbol_mi<T: Real>(nbar: T, u: T, beta: Complex<T>) -> Result<T> {
    if nbar < T::zero() || !nbar.is_finite() {
        return Err(Error::domain("mean photon number must be nonnegative"));
    }
    if u < T::zero() || u > T::one() || !u.is_finite() {
        return Err(Error::domain("u must lie in [0, 1]"));
    }
    let zeta = nbar.sqrt();
    let circuit = two_symbol_circuit::<T>();
    let words: [[T; 2]; 3] = [
        [T::one(), T::one()],   // 00
        [-T::one(), -T::one()], // 11
        [T::one(), -T::one()],  // 01
    ];
    let half = cst::<T>(0.5);
    let priors = vec![(T::one() - u) * half, (T::one() - u) * half, u];
    let mut densities = Vec::with_capacity(3);
    let mut clicks = Vec::with_capacity(3);
    let sqrt2 = cst::<T>(2.0).sqrt();
    for w in &words {
        let input: Vec<Complex<T>> = w.iter().map(|s| cre(*s * zeta)).collect();
        let out = circuit.transform(&input);
        densities.push(vec![(T::one(), sqrt2 * out[0].re)]);
        let q0 = spd_no_click(out[1], beta);
        clicks.push(vec![q0, T::one() - q0]);
    }
    HybridChannel::new(priors, densities, clicks)?.mutual_information()
}

/// Exact mutual information of the three-symbol collective scheme.
///
/// Words `000`, `111` (probability `1/2 - v` each), `001` and `010`
/// (probability `v` each) pass through [`three_symbol_circuit`]; output
/// port 1 is homodyned and ports 2–3 feed undisplaced single-photon
/// detectors. The outcome is `(x, k2, k3)`.
pub fn three_symbol_mi<T: Real>(nbar: T, v: T) -> Result<T> {
    if nbar < T::zero() || !nbar.is_finite() {
        return Err(Error::domain("mean photon number must be nonnegative"));
    }
    if v < T::zero() || v > cst(0.5) || !v.is_finite() {
        return Err(Error::domain("v must lie in [0, 1/2]"));
    }
    let zeta = nbar.sqrt();
    let circuit = three_symbol_circuit::<T>();
    let words: [[T; 3]; 4] = [
        [T::one(), T::one(), T::one()],
        [-T::one(), -T::one(), -T::one()],
        [T::one(), T::one(), -T::one()],
        [T::one(), -T::one(), T::one()],
    ];
    let half = cst::<T>(0.5);
    let priors = vec![half - v, half - v, v, v];
    let zero = Complex::new(T::zero(), T::zero());
    let sqrt2 = cst::<T>(2.0).sqrt();
    let mut densities = Vec::with_capacity(4);
    let mut clicks = Vec::with_capacity(4);
    for w in &words {
        let input: Vec<Complex<T>> = w.iter().map(|s| cre(*s * zeta)).collect();
        let out = circuit.transform(&input);
        densities.push(vec![(T::one(), sqrt2 * out[0].re)]);
        let q2 = spd_no_click(out[1], zero);
        let q3 = spd_no_click(out[2], zero);
        clicks.push(vec![
            q2 * q3,
            q2 * (T::one() - q3),
            (T::one() - q2) * q3,
            (T::one() - q2) * (T::one() - q3),
        ]);
    }
    HybridChannel::new(priors, densities, clicks)?.mutual_information()
}
