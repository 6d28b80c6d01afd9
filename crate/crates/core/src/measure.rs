//! Fourier transform of the equal-weight Moran measure.
//!
//! The measure is the infinite convolution `ν_1 * ν_2 * ...` with
//! `ν_j = (1/K_j) Σ_{b ∈ B_j} δ_{b/(N_1..N_j)}`, so its transform is the product
//! of the level factors `(1/K_j) Σ_b e^{-2πi b ξ/(N_1..N_j)}`.
//!
//! Arguments `ξ/(N_1..N_j)` are reduced modulo 1 in exact rational arithmetic
//! before any floating-point work. Integer arguments therefore give factors of
//! exactly 1, and a factor whose Dirichlet numerator vanishes is exactly 0.
//! Every [`SpectralSample`] carries a certified bound on its distance from the
//! true value: a truncation bound for the unevaluated tail of the product plus
//! a rounding allowance per evaluated factor.

use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::level_endpoints;
use crate::numeric::{
    biguint_to_rational, pi_bounds, ratio, rational_from_f64, to_f64, to_f64_down, to_f64_up, Precision,
    Rational,
};
use crate::rules::{DigitRule, DigitSet};
use crate::sequences::DigitSystem;

/// Allowance for the floating-point error of one evaluated factor and the product step.
/// Factors have modulus at most 1, so errors add across the product.
fn rounding_allowance(digits: &DigitSet) -> f64 {
    match digits {
        DigitSet::Consecutive(_) => 16.0 * f64::EPSILON,
        DigitSet::Explicit(ds) => (16.0 + 4.0 * ds.len() as f64) * f64::EPSILON,
    }
}

/// Tail-truncation target used for `c0`.
pub const C0_TAIL_TOLERANCE: f64 = 1e-12;

/// `√6/π`, the threshold on `sup K_j/N_j` for the non-decay bound (reporting only;
/// comparisons are done exactly).
pub const NONDECAY_THRESHOLD: f64 = 0.779_696_801_233_676_1;

/// One convolution factor `ν_j`: atoms `b / (N_1..N_j)` for `b ∈ B_j`, each of weight `1/K_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelFactor {
    pub level: usize,
    pub digits: DigitSet,
    /// `1/(N_1..N_j)`
    pub scale: Rational,
}

impl LevelFactor {
    pub fn weight(&self) -> Rational {
        ratio(1, self.digits.len())
    }

    pub fn atoms(&self) -> impl Iterator<Item = Rational> + '_ {
        self.digits
            .iter()
            .map(move |b| &self.scale * Rational::from_integer(BigInt::from(b)))
    }

    /// `ν̂_j(ξ)`
    pub fn transform(&self, xi: &Rational) -> Complex64 {
        factor_at(&self.digits, &(xi * &self.scale)).value
    }
}

pub fn level_factor(sys: &DigitSystem, j: usize) -> Result<LevelFactor> {
    let (_, digits) = sys.get_level(j)?;
    Ok(LevelFactor {
        level: j,
        digits: digits.clone(),
        scale: biguint_to_rational(&sys.scale(j)?).recip(),
    })
}

/// Value of `(1/K) Σ_{b ∈ B} e^{-2πi b θ}`, flagged when it is exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorValue {
    pub value: Complex64,
    pub exact: bool,
}

/// `q - round(q)`, in `[-1/2, 1/2]`.
fn reduce_mod1(q: &Rational) -> Rational {
    q - q.round()
}

/// Representative of `q` modulo 2 in `[-1, 1]`.
fn reduce_mod2(q: &Rational) -> Rational {
    let two = Rational::from_integer(BigInt::from(2));
    q - &two * (q / &two).round()
}

fn sin_pi(x: f64) -> f64 {
    (PI * x).sin()
}

/// `(1/K) Σ_{b ∈ B} e^{-2πi b θ}` for an exact argument `θ`.
pub fn factor_at(digits: &DigitSet, theta: &Rational) -> FactorValue {
    if theta.is_integer() {
        return FactorValue {
            value: Complex64::new(1.0, 0.0),
            exact: true,
        };
    }
    let r = reduce_mod1(theta);
    match digits {
        DigitSet::Consecutive(k) => {
            // e^{-πi(K-1)r} sin(πKr) / (K sin(πr))
            let k_q = Rational::from_integer(BigInt::from(*k));
            let kr = reduce_mod2(&(&k_q * &r));
            if kr.is_integer() {
                return FactorValue {
                    value: Complex64::new(0.0, 0.0),
                    exact: true,
                };
            }
            let phase = reduce_mod2(&((&k_q - Rational::one()) * &r));
            let modulus = sin_pi(to_f64(&kr)) / (*k as f64 * sin_pi(to_f64(&r)));
            FactorValue {
                value: Complex64::from_polar(modulus, -PI * to_f64(&phase)),
                exact: false,
            }
        }
        DigitSet::Explicit(ds) => {
            let sum: Complex64 = ds
                .iter()
                .map(|&b| {
                    let t = reduce_mod1(&(&r * Rational::from_integer(BigInt::from(b))));
                    Complex64::cis(-2.0 * PI * to_f64(&t))
                })
                .sum();
            FactorValue {
                value: sum / ds.len() as f64,
                exact: false,
            }
        }
    }
}

/// `ν̂_j(ξ)` for real `ξ`; `ξ` is taken as the exact rational value of the `f64`.
pub fn factor_value(sys: &DigitSystem, j: usize, xi: f64) -> Result<Complex64> {
    let xi = rational_from_f64(xi)?;
    let (_, digits) = sys.get_level(j)?;
    let theta = xi / biguint_to_rational(&sys.scale(j)?);
    Ok(factor_at(digits, &theta).value)
}

/// `Π_{j ≤ n} ν̂_j(ξ)`: the transform of the partial convolution `μ_n`.
pub fn partial_product(sys: &DigitSystem, xi: f64, n: usize) -> Result<Complex64> {
    let xi = rational_from_f64(xi)?;
    let mut scale = BigUint::one();
    let mut product = Complex64::new(1.0, 0.0);
    for j in 1..=n {
        let (nj, digits) = sys.get_level(j)?;
        scale *= nj;
        product *= factor_at(digits, &(&xi / biguint_to_rational(&scale))).value;
    }
    Ok(product)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSample {
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub xi: f64,
    /// Serialized as `[re, im]`.
    #[serde(serialize_with = "crate::report::ser_complex")]
    pub value: Complex64,
    /// Certified: `|value - μ̂(ξ)| <= error_bound`.
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub error_bound: f64,
    /// Deepest level whose factor was evaluated.
    pub levels_used: usize,
}

impl SpectralSample {
    pub fn modulus(&self) -> f64 {
        self.value.norm()
    }
}

/// Bound on the unevaluated tail `Π_{j>J} ν̂_j(ξ)`.
///
/// `|ν̂_j(ξ) - 1| <= 2π mean(B_j) |ξ| / P_j <= w π c |ξ| / P_(j-1)` with `w = 1` for
/// consecutive digits (mean `(K-1)/2`) and `w = 2` otherwise. Summing the
/// geometric majorant `P_(j-1) >= P_J m^(j-1-J)` gives
/// `D_J = w π c |ξ| m / ((m - 1) P_J)` and the tail deviates from 1 by at most `e^{D_J} - 1`.
struct TailControl {
    /// `w π_hi c m/(m-1)` as an exact rational.
    coefficient: Rational,
}

impl TailControl {
    fn new(sys: &DigitSystem) -> Self {
        let (_, pi_hi) = pi_bounds(Precision::default());
        let weight = if is_consecutive_everywhere(sys) { 1 } else { 2 };
        let m = sys.min_n_global();
        let coefficient = pi_hi * ratio(weight, 1) * sys.compute_c().upper() * ratio(m, m - 1);
        TailControl { coefficient }
    }

    /// `e^{D} - 1` for `D = coefficient * |ξ| / P`, rounded up.
    fn bound(&self, abs_xi_over_scale: &Rational) -> f64 {
        let d = to_f64_up(&(&self.coefficient * abs_xi_over_scale));
        if d == 0.0 {
            return 0.0;
        }
        (d.exp_m1() * (1.0 + 4.0 * f64::EPSILON)).next_up()
    }
}

pub(crate) fn is_consecutive_everywhere(sys: &DigitSystem) -> bool {
    match sys.digit_rule() {
        DigitRule::Consecutive(_) => true,
        DigitRule::Sets { .. } => sys
            .digit_rule()
            .reachable_sets(1)
            .iter()
            .all(|s| s.iter().enumerate().all(|(i, d)| i as u64 == *d)),
    }
}

/// Multiplies factors from `start` on until the certified error drops to `tol`.
/// Factors below `start` must have integer arguments and are checked to be exactly 1.
fn certified_product(
    sys: &DigitSystem,
    xi: &Rational,
    start: usize,
    tol: f64,
) -> Result<(Complex64, f64, usize)> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    if xi.is_zero() {
        return Ok((Complex64::new(1.0, 0.0), 0.0, 0));
    }
    let tail = TailControl::new(sys);
    let abs_xi = xi.abs();
    let mut scale = BigUint::one();
    let mut product = Complex64::new(1.0, 0.0);
    let mut rounding = 0.0;
    let mut achieved = f64::INFINITY;
    for j in 1..=sys.horizon() {
        let level = sys.level(j)?;
        scale *= level.n;
        let scale_q = biguint_to_rational(&scale);
        let f = factor_at(&level.digits, &(xi / &scale_q));
        if j < start {
            assert!(
                f.exact && f.value == Complex64::new(1.0, 0.0),
                "head factor at level {j} must be exactly 1"
            );
            continue;
        }
        product *= f.value;
        if f.exact && f.value.is_zero() {
            return Ok((Complex64::new(0.0, 0.0), 0.0, j));
        }
        if !f.exact {
            rounding += rounding_allowance(&level.digits);
        }
        achieved = tail.bound(&(&abs_xi / &scale_q)) + rounding;
        if achieved <= tol {
            return Ok((product, achieved, j));
        }
    }
    Err(Error::ToleranceUnreachable {
        tol,
        achieved,
        levels_used: sys.horizon(),
    })
}

/// `μ̂(ξ)` to within `tol`.
pub fn mu_hat(sys: &DigitSystem, xi: f64, tol: f64) -> Result<SpectralSample> {
    let xi_q = rational_from_f64(xi)?;
    let (value, error_bound, levels_used) = certified_product(sys, &xi_q, 1, tol)?;
    Ok(SpectralSample {
        xi,
        value,
        error_bound,
        levels_used,
    })
}

/// `μ̂` on `steps + 1` equally spaced frequencies from `xi_min` to `xi_max`.
pub fn spectrum(
    sys: &DigitSystem,
    xi_min: f64,
    xi_max: f64,
    steps: usize,
    tol: f64,
) -> Result<Vec<SpectralSample>> {
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    if !(xi_min.is_finite() && xi_max.is_finite()) {
        return Err(Error::InvalidParameter("frequency range must be finite".into()));
    }
    (0..=steps)
        .into_par_iter()
        .map(|i| {
            let xi = xi_min + (xi_max - xi_min) * i as f64 / steps as f64;
            mu_hat(sys, xi, tol)
        })
        .collect()
}

/// Direct evaluation of `μ̂_n(ξ) = (1/(K_1..K_n)) Σ_x e^{-2πiξx}` over all level-`n` endpoints.
pub fn mu_hat_bruteforce(sys: &DigitSystem, xi: f64, n: usize, cap: u64) -> Result<Complex64> {
    let approx = level_endpoints(sys, n, cap)?;
    let xi_q = rational_from_f64(xi)?;
    let p = xi_q.numer().abs().to_biguint().expect("absolute value");
    let q = xi_q.denom().to_biguint().expect("positive denominator");
    let modulus = &q * approx.denominator();
    let modulus_f = modulus.to_f64().filter(|m| m.is_finite());
    let sum: Complex64 = approx
        .numerators()
        .iter()
        .map(|a| {
            let rem = (&p * a).mod_floor(&modulus);
            let t = match modulus_f {
                Some(m) if modulus.bits() < 900 => rem.to_f64().unwrap_or(0.0) / m,
                _ => to_f64(&Rational::new(rem.into(), modulus.clone().into())),
            };
            Complex64::cis(-2.0 * PI * t)
        })
        .sum();
    let value = sum / approx.len() as f64;
    Ok(if xi_q.is_negative() { value.conj() } else { value })
}

/// `μ̂(N_1..N_n)` together with the scale itself.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleSample {
    pub n: usize,
    #[serde(serialize_with = "ser_biguint")]
    pub scale: BigUint,
    pub sample: SpectralSample,
}

fn ser_biguint<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// `μ̂(N_1..N_n) = μ̂_{>n}(N_1..N_n)`: only factors beyond level `n` are evaluated,
/// at the exact arguments `1/(N_(n+1)..N_j)`; the first `n` are verified to be exactly 1.
pub fn mu_hat_at_scale(sys: &DigitSystem, n: usize, tol: f64) -> Result<ScaleSample> {
    let scale = sys.scale(n)?;
    let xi = biguint_to_rational(&scale);
    let (value, error_bound, levels_used) = certified_product(sys, &xi, n + 1, tol)?;
    Ok(ScaleSample {
        n,
        sample: SpectralSample {
            xi: to_f64(&xi),
            value,
            error_bound,
            levels_used,
        },
        scale,
    })
}

/// Rational enclosure of `c0 = Π_{j≥1} (1 - π²/(6·9^j))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct C0Enclosure {
    pub lower: Rational,
    pub upper: Rational,
    /// Number of explicit factors multiplied.
    pub terms: usize,
}

impl C0Enclosure {
    pub fn midpoint(&self) -> f64 {
        to_f64(&((&self.lower + &self.upper) / Rational::from_integer(BigInt::from(2))))
    }

    pub fn width(&self) -> f64 {
        to_f64_up(&(&self.upper - &self.lower))
    }
}

/// Multiplies explicit factors until the tail is provably within `tail_tol`.
///
/// With `x_j = π²/(6·9^j)`, `-ln Π_{j>J}(1 - x_j) <= Σ_{j>J} x_j/(1 - x_{J+1}) = π²/(48·9^J (1 - x_{J+1}))`,
/// and the tail product is at least one minus that.
pub fn c0_enclosure(prec: Precision, tail_tol: f64) -> Result<C0Enclosure> {
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::InvalidParameter(format!("c0 tail tolerance must lie in (0, 1), got {tail_tol}")));
    }
    let (pi_lo, pi_hi) = pi_bounds(prec);
    let pi_lo2 = &pi_lo * &pi_lo;
    let pi_hi2 = &pi_hi * &pi_hi;
    let tol_q = rational_from_f64(tail_tol)?;
    let one = Rational::one();
    let mut lower = one.clone();
    let mut upper = one.clone();
    let mut nine_pow = BigInt::one();
    let mut terms = 0;
    loop {
        terms += 1;
        nine_pow *= 9;
        let six_nine = Rational::from_integer(BigInt::from(6) * &nine_pow);
        lower *= &one - &pi_hi2 / &six_nine;
        upper *= &one - &pi_lo2 / &six_nine;
        let next_x = &pi_hi2 / (&six_nine * Rational::from_integer(BigInt::from(9)));
        let tail = &pi_hi2 / (Rational::from_integer(BigInt::from(48) * &nine_pow) * (&one - next_x));
        if tail < tol_q {
            lower *= &one - tail;
            return Ok(C0Enclosure { lower, upper, terms });
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonDecayBound {
    /// `sup max B_j / N_j`
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub c: Rational,
    /// Certified `sup K_j / N_j`, the quantity the bound depends on.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub mass_ratio: Rational,
    pub mass_ratio_exact: bool,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub c0: f64,
    /// `c0` lies within this distance of the reported value.
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub c0_error: f64,
    pub c0_terms: usize,
    /// Certified lower bound `(1 - κ²π²/6) c0` on `|μ̂(N_1..N_n)|` for every `n`, rounded down.
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub lower_bound: f64,
    pub precision_digits: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonDecayRefusal {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub mass_ratio: Rational,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum NonDecay {
    Certified(NonDecayBound),
    Refused(NonDecayRefusal),
}

impl NonDecay {
    pub fn is_certified(&self) -> bool {
        matches!(self, NonDecay::Certified(_))
    }
}

/// Lower bound on `|μ̂(N_1..N_n)|` uniform in `n`, for consecutive digits with `N_j >= 3`.
///
/// Each tail factor at scale `N_1..N_n` is `sin(πKθ)/(K sin(πθ)) >= 1 - (πKθ)²/6`;
/// the first is governed by `K/N <= κ` and the rest by `N_j >= 3`, giving
/// `(1 - κ²π²/6) c0` whenever `κ < √6/π`.
pub fn nondecay_certificate(sys: &DigitSystem, prec: Precision) -> Result<NonDecay> {
    if !is_consecutive_everywhere(sys) {
        return Err(Error::Precondition(
            "the non-decay bound needs consecutive digit sets {0,..,K_j-1}".into(),
        ));
    }
    let m = sys.min_n_global();
    if m < 3 {
        return Err(Error::Precondition(format!("the non-decay bound needs N_j >= 3; found N = {m}")));
    }
    let c = sys.compute_c().upper();
    let kappa_bound = sys.mass_ratio();
    let kappa = kappa_bound.upper();
    let (pi_lo, pi_hi) = pi_bounds(prec);
    let six = Rational::from_integer(BigInt::from(6));
    let k2 = &kappa * &kappa;
    if &k2 * &pi_lo * &pi_lo >= six {
        return Ok(NonDecay::Refused(NonDecayRefusal {
            reason: format!(
                "sup K_j/N_j = {} >= sqrt(6)/pi = {NONDECAY_THRESHOLD}",
                to_f64(&kappa)
            ),
            mass_ratio: kappa,
        }));
    }
    if &k2 * &pi_hi * &pi_hi >= six {
        return Ok(NonDecay::Refused(NonDecayRefusal {
            reason: format!(
                "sup K_j/N_j is within 1e-{} of sqrt(6)/pi; raise the precision",
                prec.digits()
            ),
            mass_ratio: kappa,
        }));
    }
    let c0 = c0_enclosure(prec, C0_TAIL_TOLERANCE)?;
    let first = Rational::one() - &k2 * &pi_hi * &pi_hi / &six;
    let lower = first * &c0.lower;
    Ok(NonDecay::Certified(NonDecayBound {
        c,
        mass_ratio: kappa,
        mass_ratio_exact: kappa_bound.exact,
        c0: c0.midpoint(),
        c0_error: c0.width(),
        c0_terms: c0.terms,
        lower_bound: to_f64_down(&lower),
        precision_digits: prec.digits(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DEFAULT_ENUMERATION_CAP;
    use crate::testutil::{lebesgue, system};
    use proptest::prelude::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    /// Independent oracle: the plain exponential sum in f64.
    fn direct_sum(k: u64, theta: f64) -> Complex64 {
        (0..k)
            .map(|b| Complex64::cis(-2.0 * PI * b as f64 * theta))
            .sum::<Complex64>()
            / k as f64
    }

    #[test]
    fn factor_examples() {
        let two = DigitSet::Consecutive(2);
        let f = factor_at(&two, &ratio(1, 2));
        assert!(f.exact);
        assert_eq!(f.value, Complex64::new(0.0, 0.0));

        let odd = DigitSet::Explicit(vec![0, 2, 5]);
        assert_eq!(factor_at(&odd, &Rational::zero()).value, Complex64::new(1.0, 0.0));

        let three = DigitSet::Consecutive(3);
        let f = factor_at(&three, &ratio(1, 4));
        assert!((f.value.norm() - 1.0 / 3.0).abs() < 1e-12);
        assert!(close(f.value, direct_sum(3, 0.25), 1e-12));
    }

    #[test]
    fn factor_is_one_at_integer_arguments() {
        for k in 1..20 {
            for t in -5..5 {
                let f = factor_at(&DigitSet::Consecutive(k), &ratio(0, 1).add_int(t));
                assert!(f.exact);
                assert_eq!(f.value, Complex64::new(1.0, 0.0));
            }
        }
    }

    trait AddInt {
        fn add_int(self, t: i64) -> Rational;
    }

    impl AddInt for Rational {
        fn add_int(self, t: i64) -> Rational {
            self + Rational::from_integer(BigInt::from(t))
        }
    }

    #[test]
    fn dirichlet_form_matches_direct_sum() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let k = rng.gen_range(1..60u64);
            let theta = rng.gen_range(-3.0..3.0f64);
            let f = factor_at(&DigitSet::Consecutive(k), &rational_from_f64(theta).unwrap());
            let oracle = direct_sum(k, theta);
            assert!(close(f.value, oracle, 1e-12), "k={k} theta={theta}: {} vs {oracle}", f.value);
            let explicit = factor_at(&DigitSet::Explicit((0..k).collect()), &rational_from_f64(theta).unwrap());
            assert!(close(explicit.value, oracle, 1e-12));
        }
    }

    #[test]
    fn brute_force_examples() {
        let cantor = system("constant 3", "sets {0,2} then repeat", 8);
        let v = mu_hat_bruteforce(&cantor, 1.0, 1, DEFAULT_ENUMERATION_CAP).unwrap();
        let oracle = (Complex64::new(1.0, 0.0) + Complex64::cis(-4.0 * PI / 3.0)) / 2.0;
        assert!(close(v, oracle, 1e-14));

        assert!(close(
            mu_hat_bruteforce(&cantor, 0.0, 4, DEFAULT_ENUMERATION_CAP).unwrap(),
            Complex64::new(1.0, 0.0),
            1e-15
        ));
        let v = mu_hat_bruteforce(&lebesgue(5), 8.0, 3, DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(close(v, Complex64::new(1.0, 0.0), 1e-15));
    }

    #[test]
    fn product_matches_brute_force() {
        let cases = [
            system("constant 3", "sets {0,2} then repeat", 6),
            system("affine 1 2", "consecutive floor-pow 1/2", 8),
            system("constant 7", "sets {0,3,4};{1,6} then cycle", 5),
        ];
        for sys in &cases {
            for n in 1..=4 {
                for xi in [-13.25, -1.0, 0.5, 2.0, 7.75, 41.0] {
                    let a = partial_product(sys, xi, n).unwrap();
                    let b = mu_hat_bruteforce(sys, xi, n, DEFAULT_ENUMERATION_CAP).unwrap();
                    assert!(close(a, b, 1e-10), "n={n} xi={xi}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn mu_hat_examples() {
        let leb = lebesgue(60);
        let s = mu_hat(&leb, 5.0, 1e-12).unwrap();
        assert_eq!(s.value, Complex64::new(0.0, 0.0));
        assert_eq!(s.error_bound, 0.0);
        assert_eq!(s.levels_used, 1);

        let cantor = system("constant 3", "sets {0,2} then repeat", 60);
        let s = mu_hat(&cantor, 0.0, 1e-12).unwrap();
        assert_eq!((s.value, s.error_bound, s.levels_used), (Complex64::new(1.0, 0.0), 0.0, 0));

        let s = mu_hat(&cantor, 1.0, 1e-10).unwrap();
        assert!(s.error_bound <= 1e-10);
        let oracle = mu_hat_bruteforce(&cantor, 1.0, s.levels_used, DEFAULT_ENUMERATION_CAP).unwrap();
        assert!((s.value - oracle).norm() <= s.error_bound + 1e-12);
    }

    #[test]
    fn mu_hat_error_bar_brackets_a_deeper_evaluation() {
        let sys = system("affine 1 2", "consecutive floor-pow 2/3", 80);
        for xi in [0.3, 3.7, 25.0, 1234.5] {
            let coarse = mu_hat(&sys, xi, 1e-4).unwrap();
            let fine = mu_hat(&sys, xi, 1e-12).unwrap();
            assert!((coarse.value - fine.value).norm() <= coarse.error_bound + fine.error_bound);
            assert!(fine.levels_used >= coarse.levels_used);
        }
    }

    #[test]
    fn tolerance_unreachable_reports_best_bound() {
        let sys = system("constant 3", "sets {0,2} then repeat", 4);
        match mu_hat(&sys, 1000.0, 1e-12) {
            Err(Error::ToleranceUnreachable { achieved, levels_used, .. }) => {
                assert!(achieved > 1e-12);
                assert_eq!(levels_used, 4);
            }
            other => panic!("{other:?}"),
        }
        assert!(mu_hat(&sys, 1.0, 0.0).is_err());
        assert!(mu_hat(&sys, f64::NAN, 1e-3).is_err());
    }

    #[test]
    fn scale_examples() {
        let leb = lebesgue(60);
        for n in 1..=20 {
            let s = mu_hat_at_scale(&leb, n, 1e-12).unwrap();
            assert_eq!(s.sample.value, Complex64::new(0.0, 0.0));
        }
        let sys = system("constant 4", "consecutive constant 2", 60);
        for n in 0..=20 {
            let s = mu_hat_at_scale(&sys, n, 1e-12).unwrap();
            assert!(s.sample.modulus() >= 0.470 - s.sample.error_bound, "n = {n}");
        }
        assert!(matches!(
            mu_hat_at_scale(&sys, 61, 1e-12),
            Err(Error::LevelOutOfHorizon { .. })
        ));
    }

    #[test]
    fn scale_evaluation_agrees_with_general_evaluation() {
        let sys = system("affine 1 2", "consecutive floor-pow 1/2", 40);
        for n in 0..=8 {
            let at_scale = mu_hat_at_scale(&sys, n, 1e-12).unwrap();
            let general = mu_hat(&sys, at_scale.sample.xi, 1e-12).unwrap();
            assert!((at_scale.sample.value - general.value).norm() < 1e-11);
        }
    }

    #[test]
    fn c0_value() {
        // Oracle: the plain f64 product over 40 factors.
        let oracle: f64 = (1..=40).map(|j| 1.0 - PI * PI / (6.0 * 9f64.powi(j))).product();
        let c0 = c0_enclosure(Precision::default(), C0_TAIL_TOLERANCE).unwrap();
        assert!(c0.width() < 1e-9);
        assert!((c0.midpoint() - oracle).abs() < 1e-12);
        assert!((c0.midpoint() - 0.7986).abs() < 1e-4);
    }

    #[test]
    fn nondecay_examples() {
        let prec = Precision::default();
        let half = system("constant 4", "consecutive constant 2", 10);
        let NonDecay::Certified(b) = nondecay_certificate(&half, prec).unwrap() else {
            panic!("expected a certificate");
        };
        assert_eq!(b.mass_ratio, ratio(1, 2));
        let expected = (1.0 - PI * PI / 24.0) * b.c0;
        assert!(b.lower_bound <= expected && expected - b.lower_bound < 1e-9);
        assert!((b.lower_bound - 0.470).abs() < 1e-3);

        let over = system("constant 100", "consecutive constant 78", 10);
        assert!(!nondecay_certificate(&over, prec).unwrap().is_certified());

        // κ -> 0: the bound approaches c0.
        let thin = system("constant 1000000", "consecutive constant 1", 10);
        let NonDecay::Certified(b) = nondecay_certificate(&thin, prec).unwrap() else {
            panic!("expected a certificate");
        };
        assert!((b.lower_bound - b.c0).abs() < 1e-10);

        let cantor = system("constant 3", "sets {0,2} then repeat", 10);
        assert!(matches!(nondecay_certificate(&cantor, prec), Err(Error::Precondition(_))));
        let small = system("explicit 2 then constant 5", "consecutive constant 1", 10);
        assert!(matches!(nondecay_certificate(&small, prec), Err(Error::Precondition(_))));
    }

    #[test]
    fn nondecay_bound_holds_at_every_scale() {
        let prec = Precision::default();
        for (n_rule, k_rule) in [
            ("constant 10", "consecutive constant 7"),
            ("affine 1 2", "consecutive floor-pow 1/2"),
            ("explicit 3,100 then constant 5", "consecutive explicit 2,77 then constant 3"),
        ] {
            let sys = system(n_rule, k_rule, 80);
            let NonDecay::Certified(b) = nondecay_certificate(&sys, prec).unwrap() else {
                panic!("{n_rule}: expected a certificate");
            };
            for n in 0..=20 {
                let s = mu_hat_at_scale(&sys, n, 1e-12).unwrap();
                assert!(s.sample.modulus() >= b.lower_bound - s.sample.error_bound, "{n_rule} n={n}");
            }
        }
    }

    proptest! {
        #[test]
        fn transform_is_bounded_and_hermitian(xi in -200.0f64..200.0) {
            let sys = system("affine 2 1", "consecutive floor-pow 1/2", 60);
            let s = mu_hat(&sys, xi, 1e-10).unwrap();
            let t = mu_hat(&sys, -xi, 1e-10).unwrap();
            prop_assert!(s.modulus() <= 1.0 + s.error_bound);
            prop_assert!((s.value - t.value.conj()).norm() <= 1e-14);
        }

        #[test]
        fn lebesgue_kills_nonzero_integers(m in 1i64..2000) {
            let s = mu_hat(&lebesgue(64), m as f64, 1e-12).unwrap();
            prop_assert!(s.modulus() < 1e-12);
        }
    }
}
