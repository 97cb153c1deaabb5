//! Meet/join matrices over GCD-closed sets, the Ψ function, exact
//! determinants and singularity certificates.
//!
//! For a GCD-closed set S and exponent α the reciprocal power meet matrix
//! `(S)_{1/N^α}` has entries `gcd(x_i, x_j)^{-α}` and satisfies
//!
//! ```text
//! det (S)_{1/N^α} = Ψ(x_1) Ψ(x_2) ⋯ Ψ(x_n),
//! Ψ(x_i) = Σ_{x_k | x_i} μ(x_k, x_i) / x_k^α,
//! [S]_{N^α} = diag(x^α) (S)_{1/N^α} diag(x^α),
//! ```
//!
//! so the power LCM matrix `[S]_{N^α}` is singular exactly when some Ψ value
//! vanishes. Everything here is exact; real (non-integer) exponents route
//! through the certified interval evaluator.

use crate::certified::{pow_neg_alpha_interval, rational_interval, CertifiedReal, Sign};
use crate::intsets::GcdClosedSet;
use crate::poset::{MobiusTable, Poset};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("exact mode needs an integer exponent (or perfect powers throughout), got {0}")]
    NonIntegerAlphaInExactMode(String),
    #[error("divisor enumeration budget exceeded while factoring {0}")]
    FactoringTooHard(BigInt),
}

// ---------------------------------------------------------------------------
// Arithmetical functions and exact matrices
// ---------------------------------------------------------------------------

/// The power functions `m ↦ m^α` and `m ↦ m^{-α}` used for meet and join
/// matrices. Exact evaluation succeeds for integer α, and for rational α
/// exactly when the argument is a perfect power of the right order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArithFn {
    Power(BigRational),
    ReciprocalPower(BigRational),
}

impl ArithFn {
    pub fn power(alpha: i64) -> ArithFn {
        ArithFn::Power(BigRational::from_integer(BigInt::from(alpha)))
    }

    pub fn reciprocal_power(alpha: i64) -> ArithFn {
        ArithFn::ReciprocalPower(BigRational::from_integer(BigInt::from(alpha)))
    }

    pub fn exponent(&self) -> &BigRational {
        match self {
            ArithFn::Power(a) | ArithFn::ReciprocalPower(a) => a,
        }
    }

    /// Exact value at a positive integer, when one exists.
    pub fn eval_exact(&self, m: &BigInt) -> Option<BigRational> {
        let alpha = self.exponent();
        let base = exact_rational_power(m, alpha)?;
        Some(match self {
            ArithFn::Power(_) => base,
            ArithFn::ReciprocalPower(_) => base.recip(),
        })
    }
}

/// `m^(p/q)` as an exact rational, when `m` is a perfect q-th power.
fn exact_rational_power(m: &BigInt, alpha: &BigRational) -> Option<BigRational> {
    let p = alpha.numer();
    let q = alpha.denom(); // canonical: q > 0
    let root = if q.is_one() {
        m.clone()
    } else {
        let q32: u32 = q.try_into().ok()?;
        let r = num_integer::Roots::nth_root(m, q32);
        if r.pow(q32) != *m {
            return None;
        }
        r
    };
    let p32: i64 = p.try_into().ok()?;
    let mag = root.pow(p32.unsigned_abs() as u32);
    Some(if p32 >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::from_integer(mag).recip()
    })
}

/// A square matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    n: usize,
    entries: Vec<BigRational>,
}

impl ExactMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        ExactMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.n + j]
    }
}

fn matrix_of(values: &[BigInt], f: &ArithFn, combine: impl Fn(&BigInt, &BigInt) -> BigInt) -> Result<ExactMatrix, MatrixError> {
    let n = values.len();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let m = combine(&values[i], &values[j]);
            let v = f
                .eval_exact(&m)
                .ok_or_else(|| MatrixError::NonIntegerAlphaInExactMode(f.exponent().to_string()))?;
            entries.push(v);
        }
    }
    Ok(ExactMatrix { n, entries })
}

/// Matrix with entries `f(gcd(x_i, x_j))` over any list of positive integers.
pub fn meet_matrix_of(values: &[BigInt], f: &ArithFn) -> Result<ExactMatrix, MatrixError> {
    matrix_of(values, f, |a, b| a.gcd(b))
}

/// Matrix with entries `f(lcm(x_i, x_j))`.
pub fn join_matrix_of(values: &[BigInt], f: &ArithFn) -> Result<ExactMatrix, MatrixError> {
    matrix_of(values, f, |a, b| a.lcm(b))
}

pub fn meet_matrix(s: &GcdClosedSet, f: &ArithFn) -> Result<ExactMatrix, MatrixError> {
    meet_matrix_of(s.elems(), f)
}

pub fn join_matrix(s: &GcdClosedSet, f: &ArithFn) -> Result<ExactMatrix, MatrixError> {
    join_matrix_of(s.elems(), f)
}

// ---------------------------------------------------------------------------
// Determinants
// ---------------------------------------------------------------------------

/// Exact determinant by fraction-free (Bareiss) elimination over big integers
/// after clearing denominators row by row.
pub fn det_direct(m: &ExactMatrix) -> BigRational {
    let n = m.n();
    if n == 0 {
        return BigRational::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut d = BigInt::one();
        for j in 0..n {
            d = d.lcm(m.get(i, j).denom());
        }
        a.push(
            (0..n)
                .map(|j| {
                    let e = m.get(i, j);
                    e.numer() * (&d / e.denom())
                })
                .collect(),
        );
        scale *= d;
    }
    BigRational::new(bareiss_det(a), scale)
}

fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let t = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev; // exact by the Bareiss identity
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

// ---------------------------------------------------------------------------
// Ψ analysis
// ---------------------------------------------------------------------------

/// Cached divisibility poset and Möbius table of a GCD-closed set; the basis
/// for every Ψ computation.
#[derive(Clone, Debug)]
pub struct Analysis {
    set: GcdClosedSet,
    poset: Poset,
    mobius: MobiusTable,
}

impl Analysis {
    pub fn new(set: GcdClosedSet) -> Self {
        let poset = set.divisibility_poset();
        let mobius = MobiusTable::compute(&poset);
        Analysis { set, poset, mobius }
    }

    pub fn set(&self) -> &GcdClosedSet {
        &self.set
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn mobius(&self) -> &MobiusTable {
        &self.mobius
    }

    /// Indices of the set elements dividing `x_i`, ascending.
    pub fn divisor_indices(&self, i: usize) -> Vec<usize> {
        self.poset.down_mask(i).ones().collect()
    }

    /// `Ψ(x_i) = Σ_{x_k | x_i} μ(x_k, x_i) / x_k^α` at an integer exponent.
    pub fn psi(&self, alpha: u32, i: usize) -> BigRational {
        let mut acc = BigRational::zero();
        for k in self.divisor_indices(i) {
            let mu = self.mobius.value(k, i);
            if mu == 0 {
                continue;
            }
            let denom = self.set.elems()[k].pow(alpha);
            acc += BigRational::new(BigInt::from(mu), denom);
        }
        acc
    }

    pub fn psi_vector(&self, alpha: u32) -> Vec<BigRational> {
        (0..self.set.len()).map(|i| self.psi(alpha, i)).collect()
    }

    /// `det (S)_{1/N^α}` as the product of the Ψ values.
    pub fn det_product(&self, alpha: u32) -> BigRational {
        self.psi_vector(alpha)
            .into_iter()
            .fold(BigRational::one(), |acc, v| acc * v)
    }

    /// Ψ at `x_i` as integer summands `μ(x_k, x_i) · x_i / x_k` over the
    /// common denominator `x_i`, listed by descending element.
    pub fn psi_unit_summands(&self, i: usize) -> (Vec<BigInt>, BigInt) {
        let xi = &self.set.elems()[i];
        let mut summands = Vec::new();
        for k in self.divisor_indices(i).into_iter().rev() {
            let mu = BigInt::from(self.mobius.value(k, i));
            summands.push(mu * (xi / &self.set.elems()[k]));
        }
        (summands, xi.clone())
    }

    /// Certified enclosure of Ψ(x_i) at a real exponent enclosed by `alpha`.
    pub fn psi_interval(&self, alpha: &CertifiedReal, i: usize, prec: u32) -> CertifiedReal {
        let mut acc = CertifiedReal::zero(prec);
        for k in self.divisor_indices(i) {
            let mu = self.mobius.value(k, i);
            if mu == 0 {
                continue;
            }
            let term = pow_neg_alpha_interval(&self.set.elems()[k], alpha, prec);
            acc = acc.add(&term.mul_i64(mu));
        }
        acc
    }

    /// Exact Ψ vector at a rational exponent, when every power evaluates
    /// exactly (always true for integer exponents).
    pub fn psi_vector_rational(&self, alpha: &BigRational) -> Option<Vec<BigRational>> {
        let f = ArithFn::ReciprocalPower(alpha.clone());
        let mut out = Vec::with_capacity(self.set.len());
        for i in 0..self.set.len() {
            let mut acc = BigRational::zero();
            for k in self.divisor_indices(i) {
                let mu = self.mobius.value(k, i);
                if mu == 0 {
                    continue;
                }
                let v = f.eval_exact(&self.set.elems()[k])?;
                acc += BigRational::from_integer(BigInt::from(mu)) * v;
            }
            out.push(acc);
        }
        Some(out)
    }
}

/// Convenience wrapper over [`Analysis::psi`].
pub fn psi(s: &GcdClosedSet, alpha: u32, i: usize) -> BigRational {
    Analysis::new(s.clone()).psi(alpha, i)
}

pub fn det_product(s: &GcdClosedSet, alpha: u32) -> BigRational {
    Analysis::new(s.clone()).det_product(alpha)
}

/// Ψ through the Dirichlet-convolution route: sum of `(1/N^α * μ)(z)` over
/// the divisors `z` of `x_i` dividing no earlier element, with μ the
/// number-theoretic Möbius function. Cross-check oracle for [`psi`]; needs
/// the divisors of `x_i`, so a factoring budget applies.
pub fn psi_dirichlet(
    s: &GcdClosedSet,
    alpha: u32,
    i: usize,
    trial_budget: u64,
) -> Result<BigRational, MatrixError> {
    let xi = &s.elems()[i];
    let factors = factorize(xi, trial_budget)?;
    let mut acc = BigRational::zero();
    for z in divisor_list(&factors) {
        if s.elems()[..i].iter().any(|xj| (xj % &z).is_zero()) {
            continue;
        }
        acc += dirichlet_recip_power_mobius(&z, alpha, trial_budget)?;
    }
    Ok(acc)
}

/// `(1/N^α * μ)(z) = Π_{p^e || z} (p^{-eα} - p^{-(e-1)α})`.
fn dirichlet_recip_power_mobius(z: &BigInt, alpha: u32, budget: u64) -> Result<BigRational, MatrixError> {
    let mut acc = BigRational::one();
    for (p, e) in factorize(z, budget)? {
        let hi = BigRational::new(BigInt::one(), p.pow(e * alpha));
        let lo = BigRational::new(BigInt::one(), p.pow((e - 1) * alpha));
        acc *= hi - lo;
    }
    Ok(acc)
}

/// Trial-division factorization with a step budget.
fn factorize(x: &BigInt, budget: u64) -> Result<Vec<(BigInt, u32)>, MatrixError> {
    let mut rem = x.clone();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    let mut steps = 0u64;
    while &d * &d <= rem {
        steps += 1;
        if steps > budget {
            return Err(MatrixError::FactoringTooHard(x.clone()));
        }
        if (&rem % &d).is_zero() {
            let mut e = 0u32;
            while (&rem % &d).is_zero() {
                rem /= &d;
                e += 1;
            }
            out.push((d.clone(), e));
        }
        d += 1u32;
    }
    if rem > BigInt::one() {
        out.push((rem, 1));
    }
    Ok(out)
}

fn divisor_list(factors: &[(BigInt, u32)]) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        for d in &out {
            let mut pe = BigInt::one();
            for _ in 0..=*e {
                next.push(d * &pe);
                pe *= p;
            }
        }
        out = next;
    }
    out
}

// ---------------------------------------------------------------------------
// Singularity
// ---------------------------------------------------------------------------

/// Outcome of a singularity test of the power LCM matrix `[S]_{N^α}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SingularityVerdict {
    /// Some Ψ value is exactly zero; its indices are reported.
    Singular { witnesses: Vec<usize> },
    /// Every Ψ value is certified nonzero.
    Nonsingular,
    /// Some Ψ enclosure still straddles zero at the maximum precision; the
    /// exact value may or may not be zero.
    Indeterminate { witnesses: Vec<usize>, precision: u32 },
}

impl SingularityVerdict {
    pub fn is_singular(&self) -> bool {
        matches!(self, SingularityVerdict::Singular { .. })
    }
}

/// Exact-mode singularity test at a rational exponent. Falls back to the
/// certified numeric test when some power does not evaluate exactly.
pub fn is_singular_power_lcm(
    s: &GcdClosedSet,
    alpha: &BigRational,
    start_prec: u32,
    max_prec: u32,
) -> SingularityVerdict {
    let analysis = Analysis::new(s.clone());
    if let Some(values) = analysis.psi_vector_rational(alpha) {
        let witnesses: Vec<usize> = values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_zero())
            .map(|(i, _)| i)
            .collect();
        return if witnesses.is_empty() {
            SingularityVerdict::Nonsingular
        } else {
            SingularityVerdict::Singular { witnesses }
        };
    }
    // numeric mode with precision escalation
    let mut prec = start_prec.max(8);
    loop {
        let a = rational_interval(alpha.numer(), alpha.denom(), prec);
        let mut straddlers = Vec::new();
        for i in 0..s.len() {
            match analysis.psi_interval(&a, i, prec).sign() {
                Sign::Positive | Sign::Negative => {}
                Sign::Indeterminate => straddlers.push(i),
            }
        }
        if straddlers.is_empty() {
            return SingularityVerdict::Nonsingular;
        }
        if prec >= max_prec {
            return SingularityVerdict::Indeterminate {
                witnesses: straddlers,
                precision: prec,
            };
        }
        prec = (prec * 2).min(max_prec);
    }
}

/// Verifies `[S]_{N^α} = diag(x^α) (S)_{1/N^α} diag(x^α)` entrywise.
pub fn scaling_identity_check(s: &GcdClosedSet, alpha: u32) -> bool {
    let join = match join_matrix(s, &ArithFn::power(alpha as i64)) {
        Ok(m) => m,
        Err(_) => return false,
    };
    let meet = match meet_matrix(s, &ArithFn::reciprocal_power(alpha as i64)) {
        Ok(m) => m,
        Err(_) => return false,
    };
    let n = s.len();
    let d: Vec<BigRational> = s
        .elems()
        .iter()
        .map(|x| BigRational::from_integer(x.pow(alpha)))
        .collect();
    for i in 0..n {
        for j in 0..n {
            if *join.get(i, j) != &d[i] * meet.get(i, j) * &d[j] {
                return false;
            }
        }
    }
    true
}

/// An exact witness that the largest element of `set` is a singular number:
/// the Ψ summands over the common denominator sum to zero.
#[derive(Debug, Clone)]
pub struct SingularNumberCertificate {
    pub set: GcdClosedSet,
    pub number: BigInt,
    /// `μ(x_k, x_n) · x_n / x_k`, by descending element `x_k`.
    pub summands: Vec<BigInt>,
    pub denominator: BigInt,
}

/// Returns a certificate when `Ψ(x_n) = 0` at α = 1 for the maximum of the
/// set. One-sided: absence of a certificate for this particular set proves
/// nothing about the number.
pub fn singular_number_certificate(s: &GcdClosedSet) -> Option<SingularNumberCertificate> {
    let analysis = Analysis::new(s.clone());
    let n = s.len() - 1;
    let (summands, denominator) = analysis.psi_unit_summands(n);
    let total: BigInt = summands.iter().sum();
    if total.is_zero() {
        Some(SingularNumberCertificate {
            set: s.clone(),
            number: s.max_element().clone(),
            summands,
            denominator,
        })
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Dual determinant identity
// ---------------------------------------------------------------------------

/// Both candidate scalings of the dual determinant identity
/// `det [S']_{N^α} = x_n^? · det [1/(x_i, x_j)^α]` for the LCM-closed dual
/// `S' = {x_n / x_i}`: the exponent `n·α` holds in general, `n` alone only
/// at α = 1. Computed exactly and reported rather than silently resolved.
#[derive(Debug, Clone)]
pub struct DualDetIdentity {
    pub alpha: u32,
    pub dual_det: BigRational,
    pub reciprocal_meet_det: BigRational,
    pub holds_with_power_n: bool,
    pub holds_with_power_n_alpha: bool,
}

pub fn dual_det_identity(s: &GcdClosedSet, alpha: u32) -> Result<DualDetIdentity, crate::intsets::SetError> {
    let dual = crate::intsets::dual_lcm_closed(s)?;
    let f_pow = ArithFn::power(alpha as i64);
    let f_rec = ArithFn::reciprocal_power(alpha as i64);
    let dual_det = det_direct(&join_matrix_of(&dual, &f_pow).expect("integer exponent"));
    let recip = det_direct(&meet_matrix(s, &f_rec).expect("integer exponent"));
    let n = s.len() as u32;
    let top = s.max_element();
    let pow_n = BigRational::from_integer(top.pow(n));
    let pow_na = BigRational::from_integer(top.pow(n * alpha));
    Ok(DualDetIdentity {
        alpha,
        dual_det: dual_det.clone(),
        reciprocal_meet_det: recip.clone(),
        holds_with_power_n: dual_det == &pow_n * &recip,
        holds_with_power_n_alpha: dual_det == &pow_na * &recip,
    })
}
