//! Scalar searches over input probabilities and displacement, the
//! superadditivity threshold, and the Hadamard-word strategy table.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::constellation::hadamard_matrix;
use crate::error::{Error, Result};
use crate::lowcost::f_curve;
use crate::receivers::{helstrom_mi, homodyne_bpsk_mi, shannon_hartley, three_symbol_mi, two_symbol_mi};
use crate::scalar::{cst, Real};

/// Golden-section search for the maximum of a unimodal function on
/// `[lo, hi]`. Returns `(argmax, max)` with the argmax located to within
/// `tol`. Unimodality is assumed, not verified; non-finite function values
/// are reported as numerical errors.
pub fn maximize_scalar<T: Real>(
    mut f: impl FnMut(T) -> Result<T>,
    lo: T,
    hi: T,
    tol: T,
) -> Result<(T, T)> {
    if !(lo < hi) || tol <= T::zero() {
        return Err(Error::domain("need lo < hi and tol > 0"));
    }
    let inv_phi: T = cst(0.618_033_988_749_894_9);
    let mut a = lo;
    let mut b = hi;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let eval = |x: T, f: &mut dyn FnMut(T) -> Result<T>| -> Result<T> {
        let y = f(x)?;
        if !y.is_finite() {
            return Err(Error::numerical(format!("objective not finite at {x}")));
        }
        Ok(y)
    };
    let mut fc = eval(c, &mut f)?;
    let mut fd = eval(d, &mut f)?;
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c, &mut f)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d, &mut f)?;
        }
    }
    let x = (a + b) * cst(0.5);
    let fx = eval(x, &mut f)?;
    // Return the best point actually seen.
    if fc >= fd && fc >= fx {
        Ok((c, fc))
    } else if fd >= fx {
        Ok((d, fd))
    } else {
        Ok((x, fx))
    }
}

/// Optimum of the two-symbol scheme at fixed mean photon number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSymbolOptimum<T> {
    /// Photon information efficiency `I_2 / (2 nbar)` in nats per photon.
    pub pie: T,
    /// Optimal probability of the counting-routed word.
    pub u: T,
    /// Optimal detector displacement (zero when disabled).
    pub beta: T,
}

fn pie_two_symbol_at<T: Real>(nbar: T, u: T, beta: T) -> Result<T> {
    let i2 = two_symbol_mi(nbar, u, Complex::new(beta, T::zero()))?;
    Ok(i2 / (cst::<T>(2.0) * nbar))
}

const U_TOL: f64 = 1e-6;

/// Maximizes the two-symbol PIE over the input probability `u`, and over a
/// real displacement `beta` when enabled (nested search, `beta` outer).
pub fn optimal_pie_two_symbol<T: Real>(
    nbar: T,
    with_displacement: bool,
) -> Result<TwoSymbolOptimum<T>> {
    if nbar <= T::zero() || !nbar.is_finite() {
        return Err(Error::domain("mean photon number must be positive"));
    }
    let u_tol = cst::<T>(U_TOL);
    let best_u = |beta: T| -> Result<(T, T)> {
        maximize_scalar(|u| pie_two_symbol_at(nbar, u, beta), T::zero(), T::one(), u_tol)
    };
    if !with_displacement {
        let (u, pie) = best_u(T::zero())?;
        return Ok(TwoSymbolOptimum { pie, u, beta: T::zero() });
    }
    // The signal amplitude at the detector port is sqrt(2 nbar); the
    // displacement search spans a few times that.
    let beta_hi = cst::<T>(8.0) * nbar.sqrt();
    let beta_tol = beta_hi * cst::<T>(1e-4);
    let (beta, _) = maximize_scalar(
        |b| best_u(b).map(|(_, pie)| pie),
        T::zero(),
        beta_hi,
        beta_tol,
    )?;
    let (u, pie) = best_u(beta)?;
    Ok(TwoSymbolOptimum { pie, u, beta })
}

/// Optimum of the three-symbol scheme at fixed mean photon number: maximizes
/// `I_3 / (3 nbar)` over the word probability `v`. Returns `(v_opt, pie)`.
pub fn optimal_pie_three_symbol<T: Real>(nbar: T) -> Result<(T, T)> {
    if nbar <= T::zero() || !nbar.is_finite() {
        return Err(Error::domain("mean photon number must be positive"));
    }
    maximize_scalar(
        |v| Ok(three_symbol_mi(nbar, v)? / (cst::<T>(3.0) * nbar)),
        T::zero(),
        cst(0.5),
        cst(U_TOL),
    )
}

/// Locates the mean photon number below which the optimized two-symbol
/// scheme (no displacement) beats minimum-error detection of single symbols,
/// by bisection on the PIE difference over `[1e-4, 0.1]` to an absolute
/// accuracy of 1e-5.
pub fn superadditivity_threshold<T: Real>() -> Result<T> {
    let gap = |nbar: T| -> Result<T> {
        let best = optimal_pie_two_symbol(nbar, false)?;
        Ok(best.pie - helstrom_mi(nbar) / nbar)
    };
    let mut lo: T = cst(1e-4);
    let mut hi: T = cst(0.1);
    let glo = gap(lo)?;
    let ghi = gap(hi)?;
    if glo <= T::zero() || ghi >= T::zero() {
        return Err(Error::Algorithm(format!(
            "no sign change of the PIE gap on the bracket: g(lo) = {glo}, g(hi) = {ghi}"
        )));
    }
    while hi - lo > cst(1e-5) {
        let mid = (lo + hi) * cst(0.5);
        if gap(mid)? > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * cst(0.5))
}

/// Which of the two Hadamard-word strategies attains the PIE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HadamardStrategy {
    /// All words routed to photon counting with probability 1/M each
    /// (pulse-position style): PIE `ln M`.
    Ppm,
    /// M−1 words routed to photon counting with the weight-maximizing
    /// probability each, the rest detected phase-sensitively.
    Mixed,
}

impl fmt::Display for HadamardStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HadamardStrategy::Ppm => write!(f, "ppm"),
            HadamardStrategy::Mixed => write!(f, "mixed"),
        }
    }
}

/// Asymptotic PIE attainable with a Hadamard word set of order `m`, and the
/// strategy that attains it.
///
/// The mixed strategy assigns each of the `m − 1` counting-routed classes
/// the probability maximizing its weight, capped at `1/(m−1)` so the
/// probabilities stay feasible; past the cap the strategy degenerates to
/// pulse-position over `m − 1` words and the full pulse-position strategy
/// wins.
pub fn hadamard_strategy_pie<T: Real>(m: usize) -> Result<(T, HadamardStrategy)> {
    hadamard_matrix(m)?;
    let mf: T = cst(m as f64);
    let pie_ppm = mf.ln();
    let pie_mixed = if m == 1 {
        cst(2.0)
    } else {
        let u_star = cst::<T>(-3.0).exp();
        let t = u_star.min(T::one() / cst(m as f64 - 1.0));
        cst::<T>(2.0) + cst::<T>(m as f64 - 1.0) * f_curve(t)?
    };
    if pie_ppm > pie_mixed {
        Ok((pie_ppm, HadamardStrategy::Ppm))
    } else {
        Ok((pie_mixed, HadamardStrategy::Mixed))
    }
}

/// Receiver or bound selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Helstrom,
    ShannonHartley,
    HomodyneBpsk,
    TwoSymbol,
    TwoSymbolDisplaced,
    ThreeSymbol,
    Hadamard,
}

impl Scheme {
    pub const ALL: [Scheme; 7] = [
        Scheme::Helstrom,
        Scheme::ShannonHartley,
        Scheme::HomodyneBpsk,
        Scheme::TwoSymbol,
        Scheme::TwoSymbolDisplaced,
        Scheme::ThreeSymbol,
        Scheme::Hadamard,
    ];
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Scheme::Helstrom => "helstrom",
            Scheme::ShannonHartley => "shannon_hartley",
            Scheme::HomodyneBpsk => "homodyne_bpsk",
            Scheme::TwoSymbol => "two_symbol",
            Scheme::TwoSymbolDisplaced => "two_symbol_displaced",
            Scheme::ThreeSymbol => "three_symbol",
            Scheme::Hadamard => "hadamard",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "helstrom" => Ok(Scheme::Helstrom),
            "shannon_hartley" => Ok(Scheme::ShannonHartley),
            "homodyne_bpsk" => Ok(Scheme::HomodyneBpsk),
            "two_symbol" => Ok(Scheme::TwoSymbol),
            "two_symbol_displaced" => Ok(Scheme::TwoSymbolDisplaced),
            "three_symbol" => Ok(Scheme::ThreeSymbol),
            "hadamard" => Ok(Scheme::Hadamard),
            other => Err(Error::domain(format!(
                "unknown scheme '{other}' (expected one of helstrom, shannon_hartley, \
                 homodyne_bpsk, two_symbol, two_symbol_displaced, three_symbol, hadamard)"
            ))),
        }
    }
}

/// Optional fixed parameters for a sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SchemeParams<T> {
    /// Fixed probability of the counting-routed word (two-symbol schemes).
    pub u: Option<T>,
    /// Fixed probability of each counting-routed word (three-symbol scheme).
    pub v: Option<T>,
    /// Fixed detector displacement.
    pub beta: Option<T>,
    /// Thermal background photons (Shannon–Hartley only).
    pub nb: Option<T>,
    /// Hadamard order.
    pub m: Option<usize>,
}

/// A validated sweep request: log-spaced grid, scheme, parameters, and the
/// tolerance of any per-point parameter search.
#[derive(Debug, Clone)]
pub struct SweepSpec<T> {
    pub grid: Vec<T>,
    pub scheme: Scheme,
    pub params: SchemeParams<T>,
    pub tol: T,
}

impl<T: Real> SweepSpec<T> {
    pub fn new(grid: Vec<T>, scheme: Scheme, params: SchemeParams<T>) -> Result<Self> {
        Self::with_tol(grid, scheme, params, cst(U_TOL))
    }

    pub fn with_tol(
        grid: Vec<T>,
        scheme: Scheme,
        params: SchemeParams<T>,
        tol: T,
    ) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::domain("sweep grid must be nonempty"));
        }
        if grid.iter().any(|x| *x <= T::zero() || !x.is_finite()) {
            return Err(Error::domain("sweep grid must be strictly positive"));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("sweep grid must be strictly increasing"));
        }
        if tol <= T::zero() || !tol.is_finite() {
            return Err(Error::domain("search tolerance must be positive"));
        }
        Ok(SweepSpec { grid, scheme, params, tol })
    }

    /// Evaluates every grid point in order.
    pub fn run(&self) -> Result<Vec<SweepPoint<T>>> {
        self.grid
            .iter()
            .map(|nbar| sweep_point_with_tol(self.scheme, *nbar, &self.params, self.tol))
            .collect()
    }
}

/// Log-spaced grid from `min` to `max` inclusive.
pub fn log_grid<T: Real>(min: T, max: T, points: usize) -> Result<Vec<T>> {
    if points < 2 {
        return Err(Error::domain("grid needs at least two points"));
    }
    if min <= T::zero() || max <= min {
        return Err(Error::domain("need 0 < min < max"));
    }
    let lmin = min.ln();
    let lmax = max.ln();
    let step = (lmax - lmin) / cst(points as f64 - 1.0);
    let mut grid: Vec<T> = (0..points)
        .map(|k| (lmin + step * cst(k as f64)).exp())
        .collect();
    grid[0] = min;
    grid[points - 1] = max;
    Ok(grid)
}

/// One evaluated sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint<T> {
    pub nbar: T,
    pub pie: T,
    /// Optimized (or fixed) scheme parameter, where one applies:
    /// `u` for the two-symbol scheme, `beta` for the displaced variant,
    /// `v` for the three-symbol scheme.
    pub param: Option<T>,
}

/// Evaluates one scheme at one mean photon number with the default search
/// tolerance.
pub fn sweep_point<T: Real>(
    scheme: Scheme,
    nbar: T,
    params: &SchemeParams<T>,
) -> Result<SweepPoint<T>> {
    sweep_point_with_tol(scheme, nbar, params, cst(U_TOL))
}

/// Evaluates one scheme at one mean photon number; `tol` bounds the argument
/// accuracy of any internal parameter search.
pub fn sweep_point_with_tol<T: Real>(
    scheme: Scheme,
    nbar: T,
    params: &SchemeParams<T>,
    tol: T,
) -> Result<SweepPoint<T>> {
    if nbar <= T::zero() || !nbar.is_finite() {
        return Err(Error::domain("mean photon number must be positive"));
    }
    if tol <= T::zero() || !tol.is_finite() {
        return Err(Error::domain("search tolerance must be positive"));
    }
    let point = |pie: T, param: Option<T>| SweepPoint { nbar, pie, param };
    match scheme {
        Scheme::Helstrom => Ok(point(helstrom_mi(nbar) / nbar, None)),
        Scheme::ShannonHartley => {
            let nb = params.nb.unwrap_or(T::zero());
            if nb < T::zero() {
                return Err(Error::domain("background photon number must be nonnegative"));
            }
            Ok(point(shannon_hartley(nbar, nb) / nbar, None))
        }
        Scheme::HomodyneBpsk => Ok(point(homodyne_bpsk_mi(nbar)? / nbar, None)),
        Scheme::TwoSymbol => {
            let beta = params.beta.unwrap_or(T::zero());
            match params.u {
                Some(u) => Ok(point(pie_two_symbol_at(nbar, u, beta)?, Some(u))),
                None => {
                    let (u, pie) = maximize_scalar(
                        |u| pie_two_symbol_at(nbar, u, beta),
                        T::zero(),
                        T::one(),
                        tol,
                    )?;
                    Ok(point(pie, Some(u)))
                }
            }
        }
        Scheme::TwoSymbolDisplaced => match params.beta {
            Some(beta) => {
                let pie = match params.u {
                    Some(u) => pie_two_symbol_at(nbar, u, beta)?,
                    None => {
                        maximize_scalar(
                            |u| pie_two_symbol_at(nbar, u, beta),
                            T::zero(),
                            T::one(),
                            tol,
                        )?
                        .1
                    }
                };
                Ok(point(pie, Some(beta)))
            }
            None => {
                let best = optimal_pie_two_symbol(nbar, true)?;
                Ok(point(best.pie, Some(best.beta)))
            }
        },
        Scheme::ThreeSymbol => match params.v {
            Some(v) => Ok(point(
                three_symbol_mi(nbar, v)? / (cst::<T>(3.0) * nbar),
                Some(v),
            )),
            None => {
                let (v, pie) = maximize_scalar(
                    |v| Ok(three_symbol_mi(nbar, v)? / (cst::<T>(3.0) * nbar)),
                    T::zero(),
                    cst(0.5),
                    tol,
                )?;
                Ok(point(pie, Some(v)))
            }
        },
        Scheme::Hadamard => {
            let m = params
                .m
                .ok_or_else(|| Error::domain("hadamard scheme needs the word length M"))?;
            let (pie, _) = hadamard_strategy_pie::<T>(m)?;
            Ok(point(pie, None))
        }
    }
}
