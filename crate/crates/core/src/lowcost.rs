//! Leading-order mutual information in the cost parameter.
//!
//! Input states are modeled by a second-order power series around the common
//! zero-cost state, `rho_j(zeta) ≈ rho0 + zeta rho1_j + zeta^2 rho2_j`. For
//! a fixed POVM, each outcome falls into one of two classes: *on-support*
//! outcomes respond to the zero-cost state (`Tr[Q rho0] > 0`, phase-sensitive
//! detection in the optical picture) and contribute through the first-order
//! probability spreads; *off-support* outcomes are silent on the zero-cost
//! state (photon counting) and contribute through the kernel-compressed
//! second derivatives. The engine returns the per-outcome leading
//! coefficients of mutual information divided by `zeta^2`, their total, and
//! an upper bound built from symmetric logarithmic derivatives.
//!
//! All logarithms are natural; coefficients are nats per unit `zeta^2`.

use serde::{Deserialize, Serialize};

use crate::constellation::{CoherentEnsemble, WordEnsemble};
use crate::error::{Error, Result};
use crate::linalg::{cre, CMatrix};
use crate::scalar::{cst, xlog_ratio, Real};

/// Relative spectral tolerance used for kernel detection and outcome
/// classification.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Second-order power-series model of an input ensemble near zero cost.
#[derive(Debug, Clone)]
pub struct StateExpansion<T> {
    rho0: CMatrix<T>,
    rho1: Vec<CMatrix<T>>,
    rho2: Vec<CMatrix<T>>,
    priors: Vec<T>,
}

impl<T: Real> StateExpansion<T> {
    pub fn new(
        rho0: CMatrix<T>,
        rho1: Vec<CMatrix<T>>,
        rho2: Vec<CMatrix<T>>,
        priors: Vec<T>,
    ) -> Result<Self> {
        let dim = rho0.rows();
        if !rho0.is_square() {
            return Err(Error::domain("zero-cost state must be square"));
        }
        if rho1.len() != priors.len() || rho2.len() != priors.len() || priors.is_empty() {
            return Err(Error::domain("derivative lists must match the priors"));
        }
        if priors.iter().any(|p| *p < T::zero()) {
            return Err(Error::domain("priors must be nonnegative"));
        }
        let psum: T = priors.iter().copied().sum();
        if (psum - T::one()).abs() > cst(1e-12) {
            return Err(Error::domain("priors must sum to 1"));
        }
        if (rho0.trace().re - T::one()).abs() > cst(1e-10) || rho0.trace().im.abs() > cst(1e-10) {
            return Err(Error::domain("zero-cost state must have unit trace"));
        }
        if !rho0.is_hermitian(cst(1e-10)) {
            return Err(Error::domain("zero-cost state must be Hermitian"));
        }
        let (vals, _) = rho0.eigh()?;
        if vals.iter().any(|l| *l < cst(-1e-12)) {
            return Err(Error::domain("zero-cost state must be positive semidefinite"));
        }
        for (k, m) in rho1.iter().chain(rho2.iter()).enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::domain("derivative dimensions must match the state"));
            }
            if !m.is_hermitian(cst(1e-9)) {
                return Err(Error::domain(format!("derivative {k} is not Hermitian")));
            }
            let t = m.trace();
            if t.re.abs() > cst(1e-10) || t.im.abs() > cst(1e-10) {
                return Err(Error::domain(format!(
                    "derivative {k} is not traceless (trace preservation order by order)"
                )));
            }
        }
        Ok(StateExpansion { rho0, rho1, rho2, priors })
    }

    pub fn dim(&self) -> usize {
        self.rho0.rows()
    }

    pub fn symbols(&self) -> usize {
        self.priors.len()
    }

    pub fn rho0(&self) -> &CMatrix<T> {
        &self.rho0
    }

    pub fn rho1(&self) -> &[CMatrix<T>] {
        &self.rho1
    }

    pub fn rho2(&self) -> &[CMatrix<T>] {
        &self.rho2
    }

    pub fn priors(&self) -> &[T] {
        &self.priors
    }

    /// Prior-weighted first derivative of the ensemble state.
    pub fn rho1_ensemble(&self) -> CMatrix<T> {
        let mut acc = CMatrix::zeros(self.dim(), self.dim());
        for (r, p) in self.rho1.iter().zip(&self.priors) {
            acc = acc.add(&r.scale_re(*p));
        }
        acc
    }
}

/// A finite POVM: Hermitian positive semidefinite elements summing to the
/// identity.
#[derive(Debug, Clone)]
pub struct Povm<T> {
    elements: Vec<CMatrix<T>>,
}

impl<T: Real> Povm<T> {
    pub fn new(elements: Vec<CMatrix<T>>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::domain("POVM needs at least one element"));
        }
        let dim = elements[0].rows();
        let mut sum = CMatrix::zeros(dim, dim);
        for (k, q) in elements.iter().enumerate() {
            if !q.is_square() || q.rows() != dim {
                return Err(Error::domain("POVM elements must share one dimension"));
            }
            if !q.is_hermitian(cst(1e-9)) {
                return Err(Error::domain(format!("POVM element {k} is not Hermitian")));
            }
            let (vals, _) = q.eigh()?;
            let scale = q.frobenius_norm().max(T::one());
            if vals.iter().any(|l| *l < -scale * cst::<T>(1e-10)) {
                return Err(Error::domain(format!(
                    "POVM element {k} is not positive semidefinite"
                )));
            }
            sum = sum.add(q);
        }
        let dev = sum.sub(&CMatrix::identity(dim)).frobenius_norm();
        if dev > cst(1e-10) {
            return Err(Error::domain(format!(
                "POVM elements must sum to the identity (deviation {dev:e})"
            )));
        }
        Ok(Povm { elements })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }

    pub fn elements(&self) -> &[CMatrix<T>] {
        &self.elements
    }

    /// Two-outcome POVM `{P, I - P}` from a projector or effect `P`.
    pub fn from_effect(p: CMatrix<T>) -> Result<Self> {
        let dim = p.rows();
        let complement = CMatrix::identity(dim).sub(&p);
        Self::new(vec![p, complement])
    }
}

/// Outcome class relative to the zero-cost state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutcomeClass {
    /// `Tr[Q rho0] > 0`: the outcome fires on the zero-cost state.
    OnSupport,
    /// `Tr[Q rho0] = 0`: the outcome is silent on the zero-cost state.
    OffSupport,
}

/// Partition of POVM outcomes by [`OutcomeClass`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub on_support: Vec<usize>,
    pub off_support: Vec<usize>,
}

/// Splits the POVM outcomes by whether they respond to `rho0`.
///
/// An outcome is off-support when `Tr[Q rho0] <= tol * ||Q||_F`. For such
/// outcomes positivity forces `Q rho0 = rho0 Q = 0`, which is asserted as
/// `||Q rho0||_F <= sqrt(tol) * ||Q||_F`.
pub fn classify<T: Real>(
    povm: &Povm<T>,
    rho0: &CMatrix<T>,
    tol: T,
) -> Result<Classification> {
    let mut on_support = Vec::new();
    let mut off_support = Vec::new();
    for (r, q) in povm.elements().iter().enumerate() {
        let norm = q.frobenius_norm();
        let p0 = q.trace_product_re(rho0);
        if p0 <= tol * norm {
            let cross = q.matmul(rho0).frobenius_norm();
            if cross > tol.sqrt() * norm {
                return Err(Error::numerical(format!(
                    "outcome {r} is silent on the zero-cost state but Q rho0 is not negligible \
                     (|Q rho0| = {cross:e})"
                )));
            }
            off_support.push(r);
        } else {
            on_support.push(r);
        }
    }
    Ok(Classification { on_support, off_support })
}

/// A symmetric logarithmic derivative together with the residual of its
/// defining equation.
#[derive(Debug, Clone)]
pub struct Sld<T> {
    pub matrix: CMatrix<T>,
    pub residual: T,
}

/// Solves `rho1 = (L rho0 + rho0 L)/2` for Hermitian `L` in the eigenbasis
/// of `rho0`: `L_mn = 2 rho1_mn / (l_m + l_n)` wherever `l_m + l_n` exceeds
/// `tol` (relative to the largest eigenvalue), zero elsewhere. Errors out
/// when the residual of the defining equation exceeds 1e-8: the derivative
/// then leaves the support of `rho0` and no SLD exists.
pub fn sld<T: Real>(rho0: &CMatrix<T>, rho1: &CMatrix<T>, tol: T) -> Result<Sld<T>> {
    let eig = rho0.eigh()?;
    sld_in_basis(rho0, &eig, rho1, tol)
}

fn sld_in_basis<T: Real>(
    rho0: &CMatrix<T>,
    eig: &(Vec<T>, CMatrix<T>),
    rho1: &CMatrix<T>,
    tol: T,
) -> Result<Sld<T>> {
    let (vals, vecs) = eig;
    let n = rho0.rows();
    let top = vals.iter().map(|v| v.abs()).fold(T::zero(), T::max).max(T::epsilon());
    let cutoff = tol * top;
    // rho1 in the eigenbasis.
    let r = vecs.adjoint().matmul(rho1).matmul(vecs);
    let mut l = CMatrix::zeros(n, n);
    for m in 0..n {
        for k in 0..n {
            let denom = vals[m] + vals[k];
            if denom > cutoff {
                l[(m, k)] = r[(m, k)].scale(cst::<T>(2.0) / denom);
            }
        }
    }
    let l = vecs.matmul(&l).matmul(&vecs.adjoint());
    let recon = l
        .matmul(rho0)
        .add(&rho0.matmul(&l))
        .scale(cre(cst(0.5)));
    let residual = recon.sub(rho1).frobenius_norm();
    if residual > cst(1e-8) {
        return Err(Error::SldUndefined {
            residual: residual.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(Sld { matrix: l, residual })
}

/// Per-outcome leading-order contribution to mutual information.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutcomeContribution<T> {
    pub outcome: usize,
    pub class: OutcomeClass,
    /// Outcome probability on the zero-cost state.
    pub p_zero: T,
    /// Leading mutual-information coefficient of this outcome per `zeta^2`.
    pub coeff: T,
}

/// Leading-order mutual information report for one ensemble/POVM pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpansionReport<T> {
    pub outcomes: Vec<OutcomeContribution<T>>,
    /// Sum of the per-outcome coefficients: `I(zeta) ≈ total_coeff * zeta^2`.
    pub total_coeff: T,
    /// Upper bound on the total, from the SLD spread of the ensemble.
    pub bound_coeff: T,
}

impl<T: Real> ExpansionReport<T> {
    pub fn to_json(&self) -> String
    where
        T: Serialize,
    {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Computes the leading-order mutual information coefficients of a
/// state-expansion/POVM pair, together with the SLD upper bound.
///
/// On-support outcomes contribute
/// `(1 / 2 p_r0) sum_j p_j (p1_{r|j} - p1_r)^2` with
/// `p1_{r|j} = Tr[Q_r rho1_j]`; off-support outcomes contribute
/// `sum_j p_j a_rj ln(a_rj / abar_r)` with `a_rj = Tr[Q_r P rho2_j P]`,
/// `P` the projector onto the kernel of `rho0`. The bound adds the
/// off-support total to `Tr[(I - sum_offsupport Q_r) S] / 2` where
/// `S = sum_j p_j D_j rho0 D_j` and `D_j` is the difference between the
/// symbol SLD and the ensemble SLD.
pub fn expansion_report<T: Real>(
    se: &StateExpansion<T>,
    povm: &Povm<T>,
) -> Result<ExpansionReport<T>> {
    if povm.dim() != se.dim() {
        return Err(Error::domain("POVM dimension must match the expansion"));
    }
    let tol = cst::<T>(DEFAULT_TOL);
    let classification = classify(povm, se.rho0(), tol)?;
    let eig = se.rho0().eigh()?;
    let kernel = se.rho0().kernel_projector(tol)?;

    // SLD differences D_j = L_j - L_ens.
    let l_ens = sld_in_basis(se.rho0(), &eig, &se.rho1_ensemble(), tol)?;
    let mut spread = CMatrix::zeros(se.dim(), se.dim());
    for (rho1_j, p_j) in se.rho1().iter().zip(se.priors()) {
        let l_j = sld_in_basis(se.rho0(), &eig, rho1_j, tol)?;
        let d_j = l_j.matrix.sub(&l_ens.matrix);
        spread = spread.add(&d_j.matmul(se.rho0()).matmul(&d_j).scale_re(*p_j));
    }

    // Kernel-compressed second derivatives.
    let rho2_compressed: Vec<CMatrix<T>> = se
        .rho2()
        .iter()
        .map(|r2| kernel.matmul(r2).matmul(&kernel))
        .collect();

    let mut outcomes = Vec::with_capacity(povm.len());
    let mut total = T::zero();
    let mut off_support_total = T::zero();
    let mut off_support_sum = CMatrix::zeros(se.dim(), se.dim());

    for (r, q) in povm.elements().iter().enumerate() {
        let p_zero = q.trace_product_re(se.rho0());
        if classification.off_support.contains(&r) {
            off_support_sum = off_support_sum.add(q);
            let rates: Vec<T> = rho2_compressed
                .iter()
                .map(|r2| q.trace_product_re(r2))
                .collect();
            for (j, a) in rates.iter().enumerate() {
                if *a < cst(-1e-10) {
                    return Err(Error::numerical(format!(
                        "negative compressed second-order rate {a:e} for outcome {r}, symbol {j}"
                    )));
                }
            }
            let mean_rate: T = rates
                .iter()
                .zip(se.priors())
                .map(|(a, p)| *p * a.max(T::zero()))
                .sum();
            let coeff = if mean_rate > T::zero() {
                rates
                    .iter()
                    .zip(se.priors())
                    .map(|(a, p)| *p * xlog_ratio(a.max(T::zero()), mean_rate))
                    .sum()
            } else {
                T::zero()
            };
            total = total + coeff;
            off_support_total = off_support_total + coeff;
            outcomes.push(OutcomeContribution {
                outcome: r,
                class: OutcomeClass::OffSupport,
                p_zero,
                coeff,
            });
        } else {
            let firsts: Vec<T> = se.rho1().iter().map(|r1| q.trace_product_re(r1)).collect();
            let mean_first: T = firsts
                .iter()
                .zip(se.priors())
                .map(|(f, p)| *p * *f)
                .sum();
            let var: T = firsts
                .iter()
                .zip(se.priors())
                .map(|(f, p)| *p * (*f - mean_first) * (*f - mean_first))
                .sum();
            let coeff = var / (cst::<T>(2.0) * p_zero);
            total = total + coeff;
            outcomes.push(OutcomeContribution {
                outcome: r,
                class: OutcomeClass::OnSupport,
                p_zero,
                coeff,
            });
        }
    }

    let remainder = CMatrix::identity(se.dim()).sub(&off_support_sum);
    let bound = off_support_total + cst::<T>(0.5) * remainder.trace_product_re(&spread);

    if total > bound + cst(1e-9) {
        return Err(Error::numerical(format!(
            "leading coefficient {total} exceeds its bound {bound}"
        )));
    }
    Ok(ExpansionReport { outcomes, total_coeff: total, bound_coeff: bound })
}

/// Second-order Fock-space model of a coherent-state ensemble: the zero-cost
/// state is the vacuum, first derivatives couple `|0>` and `|1>`, second
/// derivatives populate `|1><1|` and the `|2><0|` coherence. Needs `dim >= 3`
/// so that the second derivative is represented exactly.
pub fn coherent_state_expansion<T: Real>(
    ens: &CoherentEnsemble<T>,
    dim: usize,
) -> Result<StateExpansion<T>> {
    if dim < 3 {
        return Err(Error::domain(
            "coherent-state expansion needs dim >= 3 to hold the |2><0| coherence",
        ));
    }
    let mut rho0 = CMatrix::zeros(dim, dim);
    rho0[(0, 0)] = cre(T::one());
    let sqrt2 = cst::<T>(2.0).sqrt();
    let mut rho1 = Vec::with_capacity(ens.len());
    let mut rho2 = Vec::with_capacity(ens.len());
    for g in ens.amplitudes() {
        let mut r1 = CMatrix::zeros(dim, dim);
        r1[(1, 0)] = *g;
        r1[(0, 1)] = g.conj();
        rho1.push(r1);
        let mut r2 = CMatrix::zeros(dim, dim);
        let msq = g.norm_sqr();
        r2[(1, 1)] = cre(msq);
        r2[(0, 0)] = cre(-msq);
        let coher = (*g * *g).scale(T::one() / sqrt2);
        r2[(2, 0)] = coher;
        r2[(0, 2)] = coher.conj();
        rho2.push(r2);
    }
    StateExpansion::new(rho0, rho1, rho2, ens.priors().to_vec())
}

/// The concave weight `f(u) = u ln(1/u) − 2u` controlling how much an
/// off-support (photon-counting) outcome can add on top of the 2 nats per
/// photon baseline; `f(0) = 0` by continuity.
pub fn f_curve<T: Real>(u: T) -> Result<T> {
    if u < T::zero() || u > T::one() || !u.is_finite() {
        return Err(Error::domain("f_curve argument must lie in [0, 1]"));
    }
    if u == T::zero() {
        return Ok(T::zero());
    }
    Ok(u * (T::one() / u).ln() - cst::<T>(2.0) * u)
}

/// Result of [`word_sector_bound`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WordSectorBound<T> {
    /// PIE bound coefficient: mutual information per word divided by
    /// `M zeta^2`.
    pub coeff: T,
    /// Whether the one-photon vectors of the word classes are mutually
    /// orthogonal; the bound is only exact in that case.
    pub orthogonal: bool,
}

/// Upper bound on the PIE of a word ensemble when each equivalence class
/// `[j]` is routed to off-support detection with weight `q[j] ∈ [0, 1]`:
/// `2 + sum_[j] f(p_[j]) q_[j]`, in nats per photon. `q` aligns with
/// [`WordEnsemble::equivalence_classes`]. The bound is only valid as stated
/// when the class one-photon vectors are mutually orthogonal; the flag
/// reports that check.
pub fn word_sector_bound<T: Real>(we: &WordEnsemble<T>, q: &[T]) -> Result<WordSectorBound<T>> {
    let classes = we.equivalence_classes();
    if q.len() != classes.len() {
        return Err(Error::domain(format!(
            "need one weight per word class ({} classes, got {})",
            classes.len(),
            q.len()
        )));
    }
    if q.iter().any(|x| *x < T::zero() || *x > T::one() || !x.is_finite()) {
        return Err(Error::domain("class weights must lie in [0, 1]"));
    }
    let mut coeff = cst::<T>(2.0);
    for (class, weight) in classes.iter().zip(q) {
        coeff = coeff + f_curve(class.probability)? * *weight;
    }
    let vectors: Vec<_> = classes
        .iter()
        .map(|c| c.representative.one_photon_vector::<T>())
        .collect();
    let mut orthogonal = true;
    'outer: for i in 0..vectors.len() {
        for j in (i + 1)..vectors.len() {
            if vectors[i].dot(&vectors[j]).abs() > cst(1e-12) {
                orthogonal = false;
                break 'outer;
            }
        }
    }
    Ok(WordSectorBound { coeff, orthogonal })
}

/// The two off-support projection directions of the optimal three-symbol
/// measurement, in the one-photon basis of the three modes. Both are unit
/// vectors orthogonal to the symmetric direction `(1,1,1)/sqrt(3)` and to
/// each other.
pub fn three_symbol_povm_vectors<T: Real>() -> ([T; 3], [T; 3]) {
    let s = T::one() / cst::<T>(3.0).sqrt();
    let half = cst::<T>(0.5);
    let q1 = [s, half * (T::one() - s), -half * (T::one() + s)];
    let q2 = [s, -half * (T::one() + s), half * (T::one() - s)];
    (q1, q2)
}

/// Closed-form PIE bound coefficient of the three-symbol scheme as a
/// function of the probability `v` assigned to each of the two
/// counting-routed words:
///
/// `2 + (2/9) { 4 v [sqrt(3) ln(2 + sqrt(3)) − 4 ln 2 − v] + 8 f(v) }`.
pub fn three_symbol_bound<T: Real>(v: T) -> Result<T> {
    if v < T::zero() || v > cst(0.5) || !v.is_finite() {
        return Err(Error::domain("three-symbol bound argument must lie in [0, 1/2]"));
    }
    let three = cst::<T>(3.0);
    let k = three.sqrt() * (cst::<T>(2.0) + three.sqrt()).ln()
        - cst::<T>(4.0) * cst::<T>(2.0).ln();
    let f = f_curve(v)?;
    Ok(cst::<T>(2.0)
        + cst::<T>(2.0) / cst::<T>(9.0)
            * (cst::<T>(4.0) * v * (k - v) + cst::<T>(8.0) * f))
}
