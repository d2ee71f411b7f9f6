//! Exact univariate polynomials and rational functions over `Q`.
//!
//! Every value is kept in canonical form: polynomials carry no trailing zero
//! coefficient, and rational functions are gcd-reduced with a monic
//! denominator. Two values are therefore equal iff their representations are.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("rational function has a pole at {at}")]
    Pole { at: String },
    #[error("malformed rational literal {0:?}")]
    Parse(String),
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}

/// Formats a rational as `"p/q"`, always with an explicit denominator.
pub fn format_rational(value: &BigRational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(text: &str) -> Result<BigRational, AlgebraError> {
    let err = || AlgebraError::Parse(text.to_string());
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| err())?;
            let q: BigInt = q.trim().parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(text.parse().map_err(|_| err())?)),
    }
}

/// A polynomial with rational coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The indeterminate itself.
    pub fn var() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn monomial(c: BigRational, degree: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(coeffs)
    }

    /// `a + b·var`.
    pub fn linear(a: BigRational, b: BigRational) -> Self {
        Self::from_coeffs(vec![a, b])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, at: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }

    pub fn eval_int(&self, at: i64) -> BigRational {
        self.eval(&int(at))
    }

    pub fn scale(&self, by: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * by).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Scales so the leading coefficient is 1; the zero polynomial is unchanged.
    pub fn monic(&self) -> Self {
        match self.leading_coefficient() {
            Some(lead) => self.scale(&lead.recip()),
            None => Self::zero(),
        }
    }

    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial), AlgebraError> {
        let d_deg = divisor.degree().ok_or(AlgebraError::DivisionByZero)?;
        let lead_inv = divisor.coeffs[d_deg].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d_deg {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigRational::zero(); rem.len() - d_deg];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + d_deg] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
            quot[i] = c;
        }
        rem.truncate(d_deg);
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    ///
    /// Runs a primitive pseudo-remainder sequence over `Z`, which keeps
    /// coefficient growth in check where Euclid over `Q` does not.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let (mut a, mut b) = (self.primitive_integer(), other.primitive_integer());
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = primitive_part(pseudo_remainder(&a, &b));
            a = b;
            b = r;
        }
        Polynomial::from_coeffs(a.into_iter().map(BigRational::from_integer).collect()).monic()
    }

    /// Integer coefficients with content 1, same roots as `self`.
    fn primitive_integer(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        primitive_part(
            self.coeffs
                .iter()
                .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
                .collect(),
        )
    }

    /// True iff `divisor` divides `self` exactly.
    pub fn is_divisible_by(&self, divisor: &Polynomial) -> Result<bool, AlgebraError> {
        Ok(self.div_rem(divisor)?.1.is_zero())
    }

    /// `var^degree · p(1/var)`; `degree` must be at least `self.degree()`.
    pub fn reversed(&self, degree: usize) -> Polynomial {
        assert!(self.degree().is_none_or(|d| d <= degree));
        let mut coeffs = vec![BigRational::zero(); degree + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[degree - i] = c.clone();
        }
        Self::from_coeffs(coeffs)
    }

    /// Lowest index with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn shift_down(&self, by: usize) -> Polynomial {
        assert!(self.coeffs.iter().take(by).all(Zero::is_zero));
        Self::from_coeffs(self.coeffs.iter().skip(by).cloned().collect())
    }

    /// Exact Lagrange interpolation through distinct abscissae.
    pub fn interpolate(points: &[(BigRational, BigRational)]) -> Polynomial {
        let mut acc = Polynomial::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = Polynomial::constant(yi.clone());
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let denom = (xi - xj).recip();
                basis = &basis * &Polynomial::linear(-xj * &denom, denom);
            }
            acc = &acc + &basis;
        }
        acc
    }

    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }

    fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

fn primitive_part(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    let content = p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if content.is_zero() || content.is_one() {
        return p;
    }
    p.into_iter().map(|c| c / &content).collect()
}

/// `lc(b)^(deg a - deg b + 1) · a mod b`, exactly over `Z`.
fn pseudo_remainder(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = &b[db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let c = r[dr].clone();
        for x in r.iter_mut() {
            *x *= lead;
        }
        for (j, bj) in b.iter().enumerate() {
            r[dr - db + j] -= &c * bj;
        }
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

/// `n (n-1) ... (n-m+1)`; the empty product for `m = 0`.
pub fn falling_factorial(m: usize) -> Polynomial {
    falling_from(0, m)
}

/// `(n - start)(n - start - 1) ... ` with `len` factors.
pub fn falling_from(start: i64, len: usize) -> Polynomial {
    let mut acc = Polynomial::one();
    for c in 0..len as i64 {
        acc = &acc * &Polynomial::linear(int(-(start + c)), BigRational::one());
    }
    acc
}

/// `prod_{c=1}^{KL} (1 - c x)^L · [prod_{j=1}^{2K} (1 - (j-1) x)]^L`.
///
/// The `(1 + (1 - j) x)` spelling of the second product is the same polynomial.
/// Its `j = 1` factor is constant, so the degree is `L (KL + 2K - 1)`.
pub fn gate_polynomial(l: usize, k: usize) -> Polynomial {
    let mut single = Polynomial::one();
    for c in 1..=(k * l) as i64 {
        single = &single * &Polynomial::linear(BigRational::one(), int(-c));
    }
    for j in 1..=(2 * k) as i64 {
        single = &single * &Polynomial::linear(BigRational::one(), int(-(j - 1)));
    }
    single.pow(l as u32)
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::from_coeffs((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::from_coeffs((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::from_coeffs(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("n"))
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        strings.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(deserializer)?;
        let coeffs = strings
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Ok(Polynomial::from_coeffs(coeffs))
    }
}

/// A reduced quotient of polynomials with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        if den.degree() == Some(0) {
            let lead = den.coeffs[0].recip();
            return Ok(RationalFunction { num: num.scale(&lead), den: Polynomial::one() });
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g)?;
        let (den, _) = den.div_rem(&g)?;
        let lead = den.leading_coefficient().expect("nonzero").recip();
        Ok(RationalFunction {
            num: num.scale(&lead),
            den: den.scale(&lead),
        })
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_polynomial(Polynomial::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_polynomial(Polynomial::constant(c))
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial this function equals, if the denominator is constant.
    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        (self.den.degree() == Some(0)).then_some(&self.num)
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &RationalFunction) -> Result<Self, AlgebraError> {
        if rhs.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn eval(&self, at: &BigRational) -> Result<BigRational, AlgebraError> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return Err(AlgebraError::Pole { at: at.to_string() });
        }
        Ok(self.num.eval(at) / d)
    }

    pub fn eval_int(&self, at: i64) -> Result<BigRational, AlgebraError> {
        self.eval(&int(at))
    }

    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(num, &self.den * &self.den).expect("denominator is nonzero")
    }

    /// Denominator degree minus numerator degree: the order of vanishing at
    /// infinity. `None` for the zero function.
    pub fn degree_gap(&self) -> Option<i64> {
        let num = self.num.degree()? as i64;
        Some(self.den.degree().expect("nonzero") as i64 - num)
    }

    /// Returns `g` with `g(x) = f(1/x)`.
    pub fn reciprocal_substitute(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let d = self.num.degree().unwrap().max(self.den.degree().unwrap());
        Self::new(self.num.reversed(d), self.den.reversed(d)).expect("reversal keeps den nonzero")
    }

    /// The first `count` Maclaurin coefficients, by power-series division.
    pub fn taylor_coefficients(&self, count: usize) -> Result<Vec<BigRational>, AlgebraError> {
        let b0 = self.den.coeff(0);
        if b0.is_zero() {
            return Err(AlgebraError::Pole { at: "0".into() });
        }
        let b0_inv = b0.recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(count);
        for i in 0..count {
            let mut c = self.num.coeff(i);
            for j in 1..=i.min(self.den.coeffs.len().saturating_sub(1)) {
                c -= &self.den.coeffs[j] * &out[i - j];
            }
            out.push(c * &b0_inv);
        }
        Ok(out)
    }

    pub fn to_string_in(&self, var: &str) -> String {
        let wrap = |p: &Polynomial| {
            if p.term_count() > 1 {
                format!("({})", p.to_string_in(var))
            } else {
                p.to_string_in(var)
            }
        };
        format!("{} / {}", wrap(&self.num), wrap(&self.den))
    }
}

impl Add<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        RationalFunction::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .unwrap()
    }
}

impl Sub<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("n"))
    }
}

#[derive(Serialize, Deserialize)]
struct RationalFunctionRepr {
    num: Polynomial,
    den: Polynomial,
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RationalFunctionRepr {
            num: self.num.clone(),
            den: self.den.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = RationalFunctionRepr::deserialize(deserializer)?;
        RationalFunction::new(repr.num, repr.den).map_err(D::Error::custom)
    }
}
