//! Shared generators for randomized integration tests: power-series state
//! families with a known zero-cost state, and POVMs that exercise both
//! outcome classes exactly.

use num_complex::Complex64 as C64;
use photon_pie::linalg::CMatrix;
use photon_pie::lowcost::{Povm, StateExpansion};
use rand::Rng;
use rand_distr::StandardNormal;

pub fn randn(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn random_complex_vector(rng: &mut impl Rng, dim: usize, scale: f64) -> Vec<C64> {
    (0..dim)
        .map(|_| C64::new(scale * randn(rng), scale * randn(rng)))
        .collect()
}

fn outer(u: &[C64], v: &[C64]) -> CMatrix<f64> {
    CMatrix::outer(u, v)
}

/// A random ensemble of mixtures of pure-state families
/// `|a_k> + zeta |b_jk> + zeta^2 |c_jk>` (normalized), sharing the diagonal
/// zero-cost state `rho0 = diag(w_1..w_rank, 0, ..)`. The construction keeps
/// every derivative Hermitian and traceless and guarantees that symmetric
/// logarithmic derivatives exist.
pub fn random_expansion(
    rng: &mut impl Rng,
    dim: usize,
    n_symbols: usize,
    rank: usize,
) -> StateExpansion<f64> {
    assert!(rank >= 1 && rank <= dim);
    let mut weights: Vec<f64> = (0..rank).map(|_| 0.2 + rng.gen::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);

    let mut rho0 = CMatrix::<f64>::zeros(dim, dim);
    for (k, w) in weights.iter().enumerate() {
        rho0[(k, k)] = C64::new(*w, 0.0);
    }

    let mut rho1 = Vec::with_capacity(n_symbols);
    let mut rho2 = Vec::with_capacity(n_symbols);
    for _ in 0..n_symbols {
        let mut r1 = CMatrix::<f64>::zeros(dim, dim);
        let mut r2 = CMatrix::<f64>::zeros(dim, dim);
        for (k, w) in weights.iter().enumerate() {
            let mut a = vec![C64::new(0.0, 0.0); dim];
            a[k] = C64::new(1.0, 0.0);
            let b = random_complex_vector(rng, dim, 0.5);
            let c = random_complex_vector(rng, dim, 0.4);
            let s1 = 2.0 * b[k].re;
            let s2 = b.iter().map(|x| x.norm_sqr()).sum::<f64>() + 2.0 * c[k].re;
            // First derivative of the normalized family.
            let d1 = outer(&a, &b)
                .add(&outer(&b, &a))
                .sub(&outer(&a, &a).scale_re(s1));
            // Second derivative of the normalized family.
            let d2 = outer(&b, &b)
                .add(&outer(&a, &c))
                .add(&outer(&c, &a))
                .sub(&outer(&a, &b).add(&outer(&b, &a)).scale_re(s1))
                .add(&outer(&a, &a).scale_re(s1 * s1 - s2));
            r1 = r1.add(&d1.scale_re(*w));
            r2 = r2.add(&d2.scale_re(*w));
        }
        rho1.push(r1);
        rho2.push(r2);
    }

    let priors = {
        let mut p: Vec<f64> = (0..n_symbols).map(|_| 0.2 + rng.gen::<f64>()).collect();
        let s: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= s);
        p
    };

    StateExpansion::new(rho0, rho1, rho2, priors).expect("generated expansion is valid")
}

/// Random positive semidefinite matrix supported on the coordinate window
/// `[lo, hi)`, built as a sum of `draws` outer products.
fn random_psd_block(rng: &mut impl Rng, dim: usize, lo: usize, hi: usize, draws: usize) -> CMatrix<f64> {
    let mut acc = CMatrix::<f64>::zeros(dim, dim);
    for _ in 0..draws {
        let mut g = vec![C64::new(0.0, 0.0); dim];
        for slot in g.iter_mut().take(hi).skip(lo) {
            *slot = C64::new(randn(rng), randn(rng));
        }
        acc = acc.add(&CMatrix::outer(&g, &g));
    }
    acc
}

fn inverse_sqrt(m: &CMatrix<f64>) -> CMatrix<f64> {
    let (vals, vecs) = m.eigh().expect("PSD matrix decomposes");
    let n = vals.len();
    let mut isq = CMatrix::<f64>::zeros(n, n);
    for (k, lam) in vals.iter().enumerate() {
        assert!(*lam > 1e-12, "normalization matrix nearly singular");
        let col: Vec<C64> = (0..n).map(|i| vecs[(i, k)]).collect();
        isq = isq.add(&CMatrix::outer(&col, &col).scale_re(1.0 / lam.sqrt()));
    }
    isq
}

/// Random POVM adapted to the support/kernel split of the zero-cost state at
/// coordinate `rank`: some outcomes are exactly kernel-supported (silent on
/// the zero-cost state), the others are generic positive matrices with
/// support–kernel coherences, and a final completion outcome tops the sum up
/// to the identity. Produces `n_raw + 1` elements.
pub fn random_povm(rng: &mut impl Rng, dim: usize, rank: usize, n_raw: usize) -> Povm<f64> {
    let kernel_dim = dim - rank;
    let mut raw: Vec<CMatrix<f64>> = Vec::with_capacity(n_raw);
    for i in 0..n_raw {
        let kernel_only = kernel_dim > 0 && i > 0 && rng.gen_bool(0.4);
        let a = if kernel_only {
            random_psd_block(rng, dim, rank, dim, kernel_dim.max(2))
        } else {
            random_psd_block(rng, dim, 0, dim, dim)
        };
        raw.push(a);
    }
    let mut total = CMatrix::<f64>::zeros(dim, dim);
    for a in &raw {
        total = total.add(a);
    }
    let (vals, _) = total.eigh().expect("PSD sum decomposes");
    let top = vals.last().copied().unwrap_or(1.0).max(1e-9);
    // Scale so the completion element stays safely positive.
    let margin = 0.1 + 0.4 * rng.gen::<f64>();
    let scale = (1.0 - margin) / top;
    let mut elements: Vec<CMatrix<f64>> = raw.iter().map(|a| a.scale_re(scale)).collect();
    let mut sum = CMatrix::<f64>::zeros(dim, dim);
    for q in &elements {
        sum = sum.add(q);
    }
    elements.push(CMatrix::identity(dim).sub(&sum));
    Povm::new(elements).expect("scaled elements with completion form a POVM")
}

/// Random POVM acting on the span of the two lowest Fock states, embedded in
/// `dim` dimensions and completed by the projector onto the higher levels.
pub fn random_qubit_povm_embedded(
    rng: &mut impl Rng,
    dim: usize,
    n_outcomes: usize,
) -> Povm<f64> {
    assert!(dim >= 3);
    let mut raw: Vec<CMatrix<f64>> = Vec::with_capacity(n_outcomes);
    let mut total = CMatrix::<f64>::zeros(dim, dim);
    for _ in 0..n_outcomes {
        let a = random_psd_block(rng, dim, 0, 2, 2);
        total = total.add(&a);
        raw.push(a);
    }
    // Invert on the 2x2 block only.
    let mut block = CMatrix::<f64>::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            block[(i, j)] = total[(i, j)];
        }
    }
    let isq2 = inverse_sqrt(&block);
    let mut isq = CMatrix::<f64>::zeros(dim, dim);
    for i in 0..2 {
        for j in 0..2 {
            isq[(i, j)] = isq2[(i, j)];
        }
    }
    let mut elements: Vec<CMatrix<f64>> = raw
        .iter()
        .map(|a| isq.matmul(a).matmul(&isq))
        .collect();
    let mut sum = CMatrix::<f64>::zeros(dim, dim);
    for q in &elements {
        sum = sum.add(q);
    }
    let rest = CMatrix::identity(dim).sub(&sum);
    if rest.frobenius_norm() > 1e-12 {
        elements.push(rest);
    }
    Povm::new(elements).expect("embedded qubit POVM is valid")
}
