//! Independent verification layer: brute-force mutual information from
//! explicit joint distributions, Born-rule probabilities in a truncated Fock
//! basis, and finite-cost convergence checks of the expansion engine.

use num_complex::Complex;

use crate::constellation::{CoherentEnsemble, WordEnsemble};
use crate::error::{Error, Result};
use crate::lowcost::{expansion_report, Povm, StateExpansion};
use crate::scalar::{cst, xlog_ratio, Real};

/// A joint probability matrix `p[input][outcome]`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution<T> {
    probs: Vec<Vec<T>>,
}

impl<T: Real> JointDistribution<T> {
    pub fn new(probs: Vec<Vec<T>>) -> Result<Self> {
        if probs.is_empty() || probs[0].is_empty() {
            return Err(Error::domain("joint distribution must be nonempty"));
        }
        let cols = probs[0].len();
        let mut total = T::zero();
        let mut probs = probs;
        for row in probs.iter_mut() {
            if row.len() != cols {
                return Err(Error::domain("joint distribution must be rectangular"));
            }
            for p in row.iter_mut() {
                if *p < cst(-1e-12) || !p.is_finite() {
                    return Err(Error::domain(format!("invalid joint probability {p}")));
                }
                *p = p.max(T::zero());
                total = total + *p;
            }
        }
        if (total - T::one()).abs() > cst(1e-9) {
            return Err(Error::domain(format!(
                "joint probabilities must sum to 1, got {total}"
            )));
        }
        Ok(JointDistribution { probs })
    }

    pub fn inputs(&self) -> usize {
        self.probs.len()
    }

    pub fn outcomes(&self) -> usize {
        self.probs[0].len()
    }

    pub fn probs(&self) -> &[Vec<T>] {
        &self.probs
    }

    pub fn input_marginals(&self) -> Vec<T> {
        self.probs.iter().map(|row| row.iter().copied().sum()).collect()
    }

    pub fn outcome_marginals(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.outcomes()];
        for row in &self.probs {
            for (k, p) in row.iter().enumerate() {
                out[k] = out[k] + *p;
            }
        }
        out
    }
}

/// Mutual information of a joint distribution in nats,
/// `sum_{j,r} p_{jr} ln(p_{jr} / (p_j p_r))`, with `0 ln 0 = 0`.
pub fn mutual_information<T: Real>(jd: &JointDistribution<T>) -> T {
    let rows = jd.input_marginals();
    let cols = jd.outcome_marginals();
    let mut mi = T::zero();
    for (j, row) in jd.probs().iter().enumerate() {
        for (r, p) in row.iter().enumerate() {
            if *p > T::zero() {
                mi = mi + xlog_ratio(*p, rows[j] * cols[r]);
            }
        }
    }
    mi
}

/// Probability mass a coherent state of energy `energy = |alpha|^2` carries
/// beyond the first `dim` Fock levels.
pub fn fock_tail_mass<T: Real>(energy: T, dim: usize) -> T {
    if energy <= T::zero() {
        return T::zero();
    }
    // 1 - e^{-x} sum_{n<dim} x^n / n! via the term recurrence.
    let mut term = (-energy).exp();
    let mut kept = term;
    for n in 1..dim {
        term = term * energy / cst(n as f64);
        kept = kept + term;
    }
    (T::one() - kept).max(T::zero())
}

/// Fock-basis amplitudes `<m|alpha>` of a coherent state, truncated to `dim`.
pub fn coherent_fock_vector<T: Real>(alpha: Complex<T>, dim: usize) -> Vec<Complex<T>> {
    let norm = (-alpha.norm_sqr() * cst::<T>(0.5)).exp();
    let mut out = Vec::with_capacity(dim);
    let mut amp = Complex::new(norm, T::zero());
    out.push(amp);
    for m in 1..dim {
        amp = amp * alpha.scale(T::one() / cst::<T>(m as f64).sqrt());
        out.push(amp);
    }
    out
}

const TRUNCATION_LIMIT: f64 = 1e-12;

/// Born-rule joint distribution `p[j][r] = p_j Tr[Q_r rho_j(zeta)]` for a
/// coherent ensemble measured in a truncated Fock basis of dimension `dim`.
///
/// Errors out when the truncation leaves more than 1e-12 probability mass
/// outside the basis for the most energetic symbol.
pub fn born_probabilities<T: Real>(
    ens: &CoherentEnsemble<T>,
    povm: &Povm<T>,
    dim: usize,
) -> Result<JointDistribution<T>> {
    if povm.dim() != dim {
        return Err(Error::domain("POVM dimension must equal the Fock truncation"));
    }
    let zeta = ens.zeta();
    let max_energy = ens
        .amplitudes()
        .iter()
        .map(|g| g.norm_sqr())
        .fold(T::zero(), T::max)
        * zeta
        * zeta;
    let tail = fock_tail_mass(max_energy, dim);
    if tail >= cst(TRUNCATION_LIMIT) {
        return Err(Error::Truncation {
            neglected: tail.to_f64().unwrap_or(f64::NAN),
            dim,
        });
    }
    let mut probs = Vec::with_capacity(ens.len());
    for (g, p_j) in ens.amplitudes().iter().zip(ens.priors()) {
        let psi = coherent_fock_vector(g.scale(zeta), dim);
        let row: Vec<T> = povm
            .elements()
            .iter()
            .map(|q| *p_j * q.sandwich(&psi, &psi).re)
            .collect();
        probs.push(row);
    }
    JointDistribution::new(probs)
}

/// Born-rule joint distribution for a BPSK word ensemble measured by a POVM
/// on the `M`-mode Fock space truncated to `per_mode_dim` levels per mode
/// (total dimension `per_mode_dim^M`).
pub fn born_probabilities_words<T: Real>(
    we: &WordEnsemble<T>,
    povm: &Povm<T>,
    per_mode_dim: usize,
) -> Result<JointDistribution<T>> {
    let m = we.word_len();
    let total_dim = per_mode_dim.pow(m as u32);
    if povm.dim() != total_dim {
        return Err(Error::domain(format!(
            "POVM dimension {} must equal per_mode_dim^M = {total_dim}",
            povm.dim()
        )));
    }
    let zeta = we.zeta();
    let tail = fock_tail_mass(zeta * zeta, per_mode_dim);
    // Multimode product state: neglected mass is at most M times the
    // per-mode tail.
    if tail * cst(m as f64) >= cst(TRUNCATION_LIMIT) {
        return Err(Error::Truncation {
            neglected: (tail * cst(m as f64)).to_f64().unwrap_or(f64::NAN),
            dim: per_mode_dim,
        });
    }
    let mut probs = Vec::with_capacity(we.words().len());
    for (word, p_j) in we.words().iter().zip(we.priors()) {
        let mut psi: Vec<Complex<T>> = vec![Complex::new(T::one(), T::zero())];
        for s in word.signs() {
            let amp = Complex::new(cst::<T>(*s as f64) * zeta, T::zero());
            let mode = coherent_fock_vector(amp, per_mode_dim);
            let mut next = Vec::with_capacity(psi.len() * per_mode_dim);
            for a in &psi {
                for b in &mode {
                    next.push(*a * *b);
                }
            }
            psi = next;
        }
        let row: Vec<T> = povm
            .elements()
            .iter()
            .map(|q| *p_j * q.sandwich(&psi, &psi).re)
            .collect();
        probs.push(row);
    }
    JointDistribution::new(probs)
}

/// One evaluation point of [`convergence_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergencePoint<T> {
    pub zeta: T,
    /// Exact mutual information of the second-order model divided by zeta^2.
    pub ratio: T,
    /// |ratio − total_coeff|.
    pub deviation: T,
}

/// Report of [`convergence_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport<T> {
    /// Leading coefficient predicted by the expansion engine.
    pub coeff: T,
    pub points: Vec<ConvergencePoint<T>>,
    /// Whether the deviations decrease along the given cost sequence, up to
    /// the rounding floor of `I / zeta^2` (mutual information carries an
    /// absolute error of a few machine epsilons, so the ratio cannot be
    /// trusted below ~100 eps / zeta^2).
    pub deviations_decreasing: bool,
}

/// Compares the expansion engine against exact mutual information of the
/// second-order Born probabilities `p0 + zeta p1 + zeta^2 p2` at each given
/// cost. Costs must be positive and strictly decreasing.
pub fn convergence_check<T: Real>(
    se: &StateExpansion<T>,
    povm: &Povm<T>,
    zetas: &[T],
) -> Result<ConvergenceReport<T>> {
    if zetas.is_empty() {
        return Err(Error::domain("need at least one cost value"));
    }
    if zetas.iter().any(|z| *z <= T::zero()) || zetas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::domain("costs must be positive and strictly decreasing"));
    }
    let coeff = expansion_report(se, povm)?.total_coeff;
    let n_inputs = se.symbols();
    let mut points = Vec::with_capacity(zetas.len());
    for &zeta in zetas {
        let mut probs = Vec::with_capacity(n_inputs);
        for j in 0..n_inputs {
            let p_j = se.priors()[j];
            let row: Vec<T> = povm
                .elements()
                .iter()
                .map(|q| {
                    let p0 = q.trace_product_re(se.rho0());
                    let p1 = q.trace_product_re(&se.rho1()[j]);
                    let p2 = q.trace_product_re(&se.rho2()[j]);
                    p_j * (p0 + zeta * p1 + zeta * zeta * p2)
                })
                .collect();
            probs.push(row);
        }
        let jd = JointDistribution::new(probs)?;
        let ratio = mutual_information(&jd) / (zeta * zeta);
        points.push(ConvergencePoint {
            zeta,
            ratio,
            deviation: (ratio - coeff).abs(),
        });
    }
    let deviations_decreasing = points.windows(2).all(|w| {
        let noise_floor = cst::<T>(100.0) * T::epsilon() / (w[1].zeta * w[1].zeta);
        w[1].deviation <= w[0].deviation + noise_floor
    });
    Ok(ConvergenceReport { coeff, points, deviations_decreasing })
}

/// Two-point Richardson extrapolation in `zeta^2`: removes the leading
/// quadratic correction from ratios `r(zeta) = C + b zeta^2 + ...`.
pub fn richardson_zeta2<T: Real>(z1: T, r1: T, z2: T, r2: T) -> T {
    let (s1, s2) = (z1 * z1, z2 * z2);
    (r2 * s1 - r1 * s2) / (s1 - s2)
}
