//! Input ensembles: coherent-state constellations, BPSK words, Hadamard word
//! sets, and their scalar cost statistics.
//!
//! Amplitudes are stored cost-free: a symbol's physical amplitude is
//! `zeta * gamma_j`, so asymptotic sweeps can vary the cost scale `zeta`
//! without rebuilding the ensemble.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cst, Real};

const PRIOR_TOL: f64 = 1e-12;

fn check_priors<T: Real>(priors: &[T]) -> Result<()> {
    if priors.iter().any(|p| *p < T::zero() || !p.is_finite()) {
        return Err(Error::domain("priors must be nonnegative and finite"));
    }
    let sum: T = priors.iter().copied().sum();
    if (sum - T::one()).abs() > cst(PRIOR_TOL) {
        return Err(Error::domain(format!("priors must sum to 1, got {sum}")));
    }
    Ok(())
}

/// A finite constellation of coherent states `|zeta * gamma_j>` with prior
/// probabilities `p_j`. Zero priors are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentEnsemble<T> {
    amplitudes: Vec<Complex<T>>,
    priors: Vec<T>,
    zeta: T,
}

impl<T: Real> CoherentEnsemble<T> {
    pub fn new(amplitudes: Vec<Complex<T>>, priors: Vec<T>, zeta: T) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::domain("ensemble needs at least one symbol"));
        }
        if amplitudes.len() != priors.len() {
            return Err(Error::domain("amplitudes and priors must have equal length"));
        }
        check_priors(&priors)?;
        if zeta < T::zero() || !zeta.is_finite() {
            return Err(Error::domain("cost scale zeta must be nonnegative"));
        }
        Ok(CoherentEnsemble { amplitudes, priors, zeta })
    }

    /// m-ary phase shift keying: `gamma_j = exp(2 pi i j / m)`, uniform priors.
    pub fn psk(m: usize, zeta: T) -> Result<Self> {
        if m < 2 {
            return Err(Error::domain("PSK needs at least two symbols"));
        }
        let two_pi: T = cst(std::f64::consts::TAU);
        let mf: T = cst(m as f64);
        let amplitudes = (0..m)
            .map(|j| {
                let phi = two_pi * cst::<T>(j as f64) / mf;
                Complex::new(phi.cos(), phi.sin())
            })
            .collect();
        let priors = vec![T::one() / mf; m];
        Self::new(amplitudes, priors, zeta)
    }

    /// On-off keying: vacuum with probability `1 - p`, amplitude `gamma` with
    /// probability `p`.
    pub fn on_off(gamma: Complex<T>, p: T, zeta: T) -> Result<Self> {
        Self::new(
            vec![Complex::new(T::zero(), T::zero()), gamma],
            vec![T::one() - p, p],
            zeta,
        )
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn priors(&self) -> &[T] {
        &self.priors
    }

    pub fn zeta(&self) -> T {
        self.zeta
    }

    pub fn with_zeta(&self, zeta: T) -> Result<Self> {
        Self::new(self.amplitudes.clone(), self.priors.clone(), zeta)
    }

    /// Prior-weighted mean of the unit-cost amplitudes.
    pub fn mean_amplitude(&self) -> Complex<T> {
        self.amplitudes
            .iter()
            .zip(&self.priors)
            .map(|(g, p)| g.scale(*p))
            .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
    }

    /// Mean photon number per symbol, `zeta^2 sum_j p_j |gamma_j|^2`.
    pub fn mean_photon_number(&self) -> T {
        let msq: T = self
            .amplitudes
            .iter()
            .zip(&self.priors)
            .map(|(g, p)| *p * g.norm_sqr())
            .sum();
        self.zeta * self.zeta * msq
    }

    /// Peak-to-average power ratio over the transmitted symbols (those with
    /// nonzero prior). Independent of `zeta`.
    pub fn papr(&self) -> Result<T> {
        let mean: T = self
            .amplitudes
            .iter()
            .zip(&self.priors)
            .map(|(g, p)| *p * g.norm_sqr())
            .sum();
        if mean <= T::zero() {
            return Err(Error::domain(
                "PAPR undefined: the transmitted ensemble has zero average power",
            ));
        }
        let peak = self
            .amplitudes
            .iter()
            .zip(&self.priors)
            .filter(|(_, p)| **p > T::zero())
            .map(|(g, _)| g.norm_sqr())
            .fold(T::zero(), T::max);
        Ok(peak / mean)
    }
}

/// Plain-text serialization schema for a constellation: symbols as
/// `[re, im, p]` triples plus the cost scale.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstellationConfig {
    pub symbols: Vec<[f64; 3]>,
    pub zeta: f64,
}

impl<T: Real> CoherentEnsemble<T> {
    pub fn to_config(&self) -> ConstellationConfig {
        ConstellationConfig {
            symbols: self
                .amplitudes
                .iter()
                .zip(&self.priors)
                .map(|(g, p)| {
                    [
                        g.re.to_f64().unwrap(),
                        g.im.to_f64().unwrap(),
                        p.to_f64().unwrap(),
                    ]
                })
                .collect(),
            zeta: self.zeta.to_f64().unwrap(),
        }
    }

    pub fn from_config(cfg: &ConstellationConfig) -> Result<Self> {
        let amplitudes = cfg
            .symbols
            .iter()
            .map(|s| Complex::new(cst(s[0]), cst(s[1])))
            .collect();
        let priors = cfg.symbols.iter().map(|s| cst(s[2])).collect();
        Self::new(amplitudes, priors, cst(cfg.zeta))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_config()).expect("config serializes")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let cfg: ConstellationConfig = serde_json::from_str(json)
            .map_err(|e| Error::domain(format!("invalid constellation config: {e}")))?;
        Self::from_config(&cfg)
    }
}

/// A BPSK word: one sign per mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(Vec<i8>);

impl Word {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::domain("a word needs at least one symbol"));
        }
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::domain("word entries must be +1 or -1"));
        }
        Ok(Word(signs))
    }

    /// Builds a word from a bit string, bit `0` mapping to `+1`.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        Word::new(bits.iter().map(|b| if *b == 0 { 1 } else { -1 }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn negated(&self) -> Word {
        Word(self.0.iter().map(|s| -s).collect())
    }

    /// Representative of the {word, negated word} pair: the one whose first
    /// entry is `+1`.
    pub fn canonical(&self) -> Word {
        if self.0[0] == 1 {
            self.clone()
        } else {
            self.negated()
        }
    }

    /// Normalized amplitudes of the word's one-photon component, `s_k / sqrt(M)`.
    pub fn one_photon_vector<T: Real>(&self) -> OnePhotonVector<T> {
        let norm = cst::<T>(self.0.len() as f64).sqrt();
        OnePhotonVector {
            components: self
                .0
                .iter()
                .map(|s| cst::<T>(*s as f64) / norm)
                .collect(),
        }
    }
}

/// Unit vector of single-photon amplitudes across the modes of a word.
#[derive(Debug, Clone, PartialEq)]
pub struct OnePhotonVector<T> {
    components: Vec<T>,
}

impl<T: Real> OnePhotonVector<T> {
    pub fn new(components: Vec<T>) -> Result<Self> {
        let norm_sq: T = components.iter().map(|c| *c * *c).sum();
        if (norm_sq.sqrt() - T::one()).abs() > cst(1e-12) {
            return Err(Error::domain("one-photon vector must have unit norm"));
        }
        Ok(OnePhotonVector { components })
    }

    pub fn components(&self) -> &[T] {
        &self.components
    }

    pub fn dot(&self, other: &Self) -> T {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| *a * *b)
            .sum()
    }
}

/// An equivalence class of words under bitwise negation, with its total
/// probability.
#[derive(Debug, Clone, PartialEq)]
pub struct WordClass<T> {
    pub representative: Word,
    pub probability: T,
}

/// An ensemble of equal-length BPSK words with priors and a per-symbol cost
/// scale. All symbols carry the same energy, so the mean photon number per
/// symbol is exactly `zeta^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct WordEnsemble<T> {
    words: Vec<Word>,
    priors: Vec<T>,
    zeta: T,
}

impl<T: Real> WordEnsemble<T> {
    pub fn new(words: Vec<Word>, priors: Vec<T>, zeta: T) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::domain("word ensemble needs at least one word"));
        }
        let m = words[0].len();
        if words.iter().any(|w| w.len() != m) {
            return Err(Error::domain("all words must have the same length"));
        }
        if words.len() != priors.len() {
            return Err(Error::domain("words and priors must have equal length"));
        }
        check_priors(&priors)?;
        if zeta < T::zero() || !zeta.is_finite() {
            return Err(Error::domain("cost scale zeta must be nonnegative"));
        }
        Ok(WordEnsemble { words, priors, zeta })
    }

    /// Word set whose sign patterns are the rows of a Hadamard matrix of
    /// order `m` (rows flipped, where needed, to start with `+1`).
    pub fn hadamard(m: usize, priors: Vec<T>, zeta: T) -> Result<Self> {
        let rows = hadamard_matrix(m)?;
        let words = rows
            .into_iter()
            .map(|r| Word::new(r).expect("Hadamard rows are sign vectors"))
            .map(|w| w.canonical())
            .collect();
        Self::new(words, priors, zeta)
    }

    pub fn word_len(&self) -> usize {
        self.words[0].len()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn priors(&self) -> &[T] {
        &self.priors
    }

    pub fn zeta(&self) -> T {
        self.zeta
    }

    /// Mean photon number per elementary symbol.
    pub fn mean_photon_per_symbol(&self) -> T {
        self.zeta * self.zeta
    }

    /// Mean photon number of a whole word.
    pub fn mean_photon_per_word(&self) -> T {
        cst::<T>(self.word_len() as f64) * self.zeta * self.zeta
    }

    /// Groups words into {word, negation} classes, in order of first
    /// appearance, accumulating their probabilities.
    pub fn equivalence_classes(&self) -> Vec<WordClass<T>> {
        let mut classes: Vec<WordClass<T>> = Vec::new();
        for (w, p) in self.words.iter().zip(&self.priors) {
            let rep = w.canonical();
            match classes.iter_mut().find(|c| c.representative == rep) {
                Some(c) => c.probability = c.probability + *p,
                None => classes.push(WordClass { representative: rep, probability: *p }),
            }
        }
        classes
    }
}

/// Returns the rows of a Hadamard matrix of order `m` as sign vectors.
///
/// Orders covered: 1 and 2, powers of two (Sylvester doubling), and
/// `q + 1` for primes `q ≡ 3 (mod 4)` (Paley construction), plus Sylvester
/// doublings of those. Prime powers in the Paley branch are not implemented,
/// so e.g. order 28 (`q = 27`) is unsupported.
pub fn hadamard_matrix(m: usize) -> Result<Vec<Vec<i8>>> {
    if m == 0 {
        return Err(Error::domain("Hadamard order must be positive"));
    }
    if m == 1 {
        return Ok(vec![vec![1]]);
    }
    if m == 2 {
        return Ok(vec![vec![1, 1], vec![1, -1]]);
    }
    if m % 4 != 0 {
        return Err(Error::domain(format!(
            "no Hadamard matrix of order {m}: order must be 1, 2, or a multiple of 4"
        )));
    }
    if m % 2 == 0 {
        if let Ok(half) = hadamard_matrix(m / 2) {
            let mut rows = Vec::with_capacity(m);
            for r in &half {
                let mut top: Vec<i8> = r.clone();
                top.extend(r.iter().copied());
                rows.push(top);
            }
            for r in &half {
                let mut bot: Vec<i8> = r.clone();
                bot.extend(r.iter().map(|s| -s));
                rows.push(bot);
            }
            return Ok(rows);
        }
    }
    paley_hadamard(m)
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Paley construction I for order `q + 1`, `q` prime with `q ≡ 3 (mod 4)`.
fn paley_hadamard(m: usize) -> Result<Vec<Vec<i8>>> {
    let q = m - 1;
    if !is_prime(q) || q % 4 != 3 {
        return Err(Error::domain(format!(
            "Hadamard order {m} not constructible here (needs a power of two or q = {q} prime with q = 3 mod 4)"
        )));
    }
    // Quadratic residue character chi(x) over Z_q.
    let mut chi = vec![-1i8; q];
    chi[0] = 0;
    for x in 1..q {
        chi[(x * x) % q] = 1;
    }
    // H = I + C with C = [[0, 1..], [-1.., Q]], Q the Jacobsthal matrix.
    let mut h = vec![vec![0i8; m]; m];
    for i in 0..m {
        h[i][i] = 1;
    }
    for j in 1..m {
        h[0][j] += 1;
        h[j][0] -= 1;
    }
    for i in 1..m {
        for j in 1..m {
            if i != j {
                let diff = (i + q - j) % q;
                h[i][j] += chi[diff];
            }
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn bpsk(zeta: f64) -> CoherentEnsemble<f64> {
        CoherentEnsemble::psk(2, zeta).unwrap()
    }

    #[test]
    fn mean_photon_number_examples() {
        assert!((bpsk(0.1).mean_photon_number() - 0.01).abs() < 1e-15);

        let single = CoherentEnsemble::new(vec![c(2.0, 0.0)], vec![1.0], 0.5).unwrap();
        assert!((single.mean_photon_number() - 1.0).abs() < 1e-15);

        let ook = CoherentEnsemble::on_off(c(10.0_f64.sqrt(), 0.0), 0.1, 1.0).unwrap();
        assert!((ook.mean_photon_number() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn papr_examples() {
        for m in [2usize, 3, 4, 8] {
            let psk = CoherentEnsemble::<f64>::psk(m, 0.3).unwrap();
            assert!((psk.papr().unwrap() - 1.0).abs() < 1e-13);
        }
        let ook = CoherentEnsemble::on_off(c(10.0_f64.sqrt(), 0.0), 0.1, 1.0).unwrap();
        assert!((ook.papr().unwrap() - 10.0).abs() < 1e-12);

        let two = CoherentEnsemble::new(
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![0.75, 0.25],
            0.7,
        )
        .unwrap();
        assert!((two.papr().unwrap() - 16.0 / 7.0).abs() < 1e-14);
    }

    #[test]
    fn papr_rejects_all_zero() {
        let z = CoherentEnsemble::new(vec![c(0.0, 0.0)], vec![1.0], 1.0).unwrap();
        assert!(z.papr().is_err());
    }

    #[test]
    fn psk_amplitudes() {
        let b = bpsk(1.0);
        assert!((b.amplitudes()[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((b.amplitudes()[1] - c(-1.0, 0.0)).norm() < 1e-15);

        let q = CoherentEnsemble::psk(4, 1.0).unwrap();
        let want = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (g, w) in q.amplitudes().iter().zip(want.iter()) {
            assert!((g - w).norm() < 1e-14);
        }

        for m in [2usize, 3, 5, 8, 17] {
            let p = CoherentEnsemble::<f64>::psk(m, 1.0).unwrap();
            assert!(p.mean_amplitude().norm() < 1e-14, "m={m}");
            assert!((p.mean_photon_number() - 1.0).abs() < 1e-13);
        }

        assert!(CoherentEnsemble::<f64>::psk(1, 1.0).is_err());
    }

    #[test]
    fn one_photon_vectors() {
        let r = 1.0 / 2.0_f64.sqrt();
        let pp = Word::new(vec![1, 1]).unwrap().one_photon_vector::<f64>();
        assert!((pp.components()[0] - r).abs() < 1e-15);
        assert!((pp.components()[1] - r).abs() < 1e-15);

        let pm = Word::new(vec![1, -1]).unwrap().one_photon_vector::<f64>();
        assert!((pm.components()[0] - r).abs() < 1e-15);
        assert!((pm.components()[1] + r).abs() < 1e-15);

        let s = 1.0 / 3.0_f64.sqrt();
        let ppm = Word::new(vec![1, 1, -1]).unwrap().one_photon_vector::<f64>();
        assert!((ppm.components()[0] - s).abs() < 1e-15);
        assert!((ppm.components()[2] + s).abs() < 1e-15);
    }

    #[test]
    fn negation_flips_one_photon_vector() {
        let w = Word::new(vec![1, -1, 1, 1, -1]).unwrap();
        let v = w.one_photon_vector::<f64>();
        let nv = w.negated().one_photon_vector::<f64>();
        for (a, b) in v.components().iter().zip(nv.components()) {
            assert!((a + b).abs() < 1e-15);
        }
        assert_eq!(w.canonical(), w.negated().canonical());
    }

    #[test]
    fn hadamard_two() {
        let we = WordEnsemble::hadamard(2, vec![0.5, 0.5], 0.1).unwrap();
        assert_eq!(we.words()[0].signs(), &[1, 1]);
        assert_eq!(we.words()[1].signs(), &[1, -1]);
        let v0 = we.words()[0].one_photon_vector::<f64>();
        let v1 = we.words()[1].one_photon_vector::<f64>();
        assert!(v0.dot(&v1).abs() < 1e-15);
    }

    #[test]
    fn hadamard_gram_identity() {
        for m in [4usize, 8, 12, 16, 20, 24, 32] {
            let priors = vec![1.0 / m as f64; m];
            let we = WordEnsemble::hadamard(m, priors, 0.1)
                .unwrap_or_else(|e| panic!("order {m}: {e}"));
            let vecs: Vec<_> = we
                .words()
                .iter()
                .map(|w| w.one_photon_vector::<f64>())
                .collect();
            for i in 0..m {
                for j in 0..m {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (vecs[i].dot(&vecs[j]) - want).abs() < 1e-12,
                        "m={m} i={i} j={j}"
                    );
                }
            }
            // Canonicalized rows start with +1.
            for w in we.words() {
                assert_eq!(w.signs()[0], 1);
            }
        }
    }

    #[test]
    fn hadamard_unsupported_orders() {
        assert!(hadamard_matrix(3).is_err());
        assert!(hadamard_matrix(6).is_err());
        assert!(hadamard_matrix(10).is_err());
        // 28 = 27 + 1 needs the prime-power Paley branch, which is out.
        assert!(hadamard_matrix(28).is_err());
    }

    #[test]
    fn equivalence_classes_group_negated_pairs() {
        let words = vec![
            Word::from_bits(&[0, 0]).unwrap(),
            Word::from_bits(&[1, 1]).unwrap(),
            Word::from_bits(&[0, 1]).unwrap(),
        ];
        let we = WordEnsemble::<f64>::new(words, vec![0.45, 0.45, 0.1], 0.1).unwrap();
        let classes = we.equivalence_classes();
        assert_eq!(classes.len(), 2);
        assert!((classes[0].probability - 0.9).abs() < 1e-15);
        assert!((classes[1].probability - 0.1).abs() < 1e-15);
        assert_eq!(classes[0].representative.signs(), &[1, 1]);
        assert_eq!(classes[1].representative.signs(), &[1, -1]);
    }

    #[test]
    fn validation_errors() {
        assert!(CoherentEnsemble::new(vec![], vec![], 1.0_f64).is_err());
        assert!(CoherentEnsemble::new(vec![c(1.0, 0.0)], vec![0.9], 1.0).is_err());
        assert!(CoherentEnsemble::new(vec![c(1.0, 0.0)], vec![1.0], -0.1).is_err());
        assert!(
            CoherentEnsemble::new(vec![c(1.0, 0.0), c(0.0, 0.0)], vec![1.5, -0.5], 1.0).is_err()
        );
        assert!(Word::new(vec![1, 0]).is_err());
        assert!(Word::new(vec![]).is_err());
        let w = vec![Word::new(vec![1, 1]).unwrap(), Word::new(vec![1]).unwrap()];
        assert!(WordEnsemble::new(w, vec![0.5, 0.5], 0.1_f64).is_err());
    }

    #[test]
    fn config_roundtrip() {
        let e = CoherentEnsemble::new(
            vec![c(1.0, 0.0), c(-0.25, 0.5), c(0.0, 0.0)],
            vec![0.5, 0.25, 0.25],
            0.37,
        )
        .unwrap();
        let json = e.to_json();
        let back = CoherentEnsemble::<f64>::from_json(&json).unwrap();
        assert_eq!(e, back);
    }

    #[test]
    fn config_rejects_bad_priors() {
        let json = r#"{"symbols": [[1.0, 0.0, 0.7]], "zeta": 0.1}"#;
        assert!(CoherentEnsemble::<f64>::from_json(json).is_err());
    }

    proptest! {
        #[test]
        fn papr_at_least_one(
            res in prop::collection::vec(-3.0f64..3.0, 1..6),
            ims in prop::collection::vec(-3.0f64..3.0, 1..6),
            raw_p in prop::collection::vec(0.05f64..1.0, 1..6),
        ) {
            let n = res.len().min(ims.len()).min(raw_p.len());
            let total: f64 = raw_p[..n].iter().sum();
            let priors: Vec<f64> = raw_p[..n].iter().map(|p| p / total).collect();
            let amps: Vec<C64> = (0..n).map(|i| c(res[i], ims[i])).collect();
            let ens = CoherentEnsemble::new(amps, priors, 1.0).unwrap();
            prop_assume!(ens.mean_photon_number() > 1e-9);
            let papr = ens.papr().unwrap();
            prop_assert!(papr >= 1.0 - 1e-12);
        }

        #[test]
        fn papr_equals_one_iff_constant_modulus(mag in 0.2f64..2.0, m in 2usize..6) {
            // Same modulus on the whole support: PAPR is exactly 1.
            let amps: Vec<C64> = (0..m)
                .map(|j| C64::from_polar(mag, 0.3 * j as f64))
                .collect();
            let priors = vec![1.0 / m as f64; m];
            let ens = CoherentEnsemble::new(amps, priors, 1.0).unwrap();
            prop_assert!((ens.papr().unwrap() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn one_photon_vector_unit_norm(bits in prop::collection::vec(0u8..2, 1..12)) {
            let w = Word::from_bits(&bits).unwrap();
            let v = w.one_photon_vector::<f64>();
            let norm: f64 = v.components().iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert!((norm - 1.0).abs() < 1e-12);
        }
    }
}
