//! Scalar fields the matrix kernel runs over.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Which field a computation runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarMode {
    Exact,
    Float,
}

impl ScalarMode {
    /// Largest order for which exact arithmetic is the default.
    pub const EXACT_ORDER_LIMIT: usize = 12;

    pub fn default_for_order(n: usize) -> Self {
        if n <= Self::EXACT_ORDER_LIMIT {
            ScalarMode::Exact
        } else {
            ScalarMode::Float
        }
    }
}

impl Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarMode::Exact => f.write_str("exact"),
            ScalarMode::Float => f.write_str("float"),
        }
    }
}

impl FromStr for ScalarMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(ScalarMode::Exact),
            "float" => Ok(ScalarMode::Float),
            other => Err(Error::BadParameters(format!("unknown scalar mode `{other}`"))),
        }
    }
}

/// A field element usable by [`DenseMatrix`].
///
/// Implemented for [`Rational`] (exact) and `f64`. The two implementations
/// differ in how they eliminate: rationals use fraction-free Bareiss
/// elimination for determinants and treat only an exact zero as singular,
/// floats use partial pivoting with a relative pivot threshold.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Signed
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    const MODE: ScalarMode;

    fn from_rational(value: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    /// The exact value represented; `None` for non-finite floats.
    fn to_rational(&self) -> Option<Rational>;

    /// Unit roundoff of the representation; zero for exact arithmetic.
    fn unit_roundoff() -> f64;

    /// True when `pivot` must be treated as zero relative to `scale`.
    fn negligible_pivot(pivot: &Self, scale: &Self) -> bool;

    /// Equality as used for classifying `lhs = rhs` in the bottleneck check.
    fn classify_equal(lhs: &Self, rhs: &Self) -> bool;

    fn determinant(m: &DenseMatrix<Self>) -> Self;

    fn from_usize(value: usize) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(value)))
    }
}

/// Relative pivot threshold for float elimination.
pub const FLOAT_PIVOT_THRESHOLD: f64 = 1e-12;

/// Relative tolerance for calling two floats equal in bottleneck checks.
pub const FLOAT_EQUALITY_TOLERANCE: f64 = 1e-9;

impl Scalar for Rational {
    const MODE: ScalarMode = ScalarMode::Exact;

    fn from_rational(value: &Rational) -> Self {
        value.clone()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn unit_roundoff() -> f64 {
        0.0
    }

    fn negligible_pivot(pivot: &Self, _scale: &Self) -> bool {
        pivot.is_zero()
    }

    fn classify_equal(lhs: &Self, rhs: &Self) -> bool {
        lhs == rhs
    }

    fn determinant(m: &DenseMatrix<Self>) -> Self {
        bareiss_determinant(m)
    }
}

impl Scalar for f64 {
    const MODE: ScalarMode = ScalarMode::Float;

    fn from_rational(value: &Rational) -> Self {
        rational_to_f64(value)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_rational(&self) -> Option<Rational> {
        Rational::from_float(*self)
    }

    fn unit_roundoff() -> f64 {
        f64::EPSILON / 2.0
    }

    fn negligible_pivot(pivot: &Self, scale: &Self) -> bool {
        pivot.abs() < FLOAT_PIVOT_THRESHOLD * scale.abs()
    }

    fn classify_equal(lhs: &Self, rhs: &Self) -> bool {
        (lhs - rhs).abs() <= FLOAT_EQUALITY_TOLERANCE * rhs.abs().max(1.0)
    }

    fn determinant(m: &DenseMatrix<Self>) -> Self {
        partial_pivot_determinant(m)
    }
}

fn rational_to_f64(value: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (value.numer().to_f64(), value.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Huge numerator or denominator: shift both down to fit an f64.
    let bits = value.numer().bits().max(value.denom().bits());
    let shift = bits.saturating_sub(1000);
    let n = (value.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (value.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Fraction-free elimination. Each row is first scaled by the lcm of its
/// denominators so that elimination runs over integers; the determinant of the
/// original matrix is the integer determinant divided by the product of the
/// row scales.
fn bareiss_determinant(m: &DenseMatrix<Rational>) -> Rational {
    let n = m.order();
    if n == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let row = m.row(i);
        let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        a.push(row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect());
        scale *= lcm;
    }

    let mut negate = false;
    let mut previous = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Rational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let value = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = value / &previous;
            }
            a[i][k] = BigInt::zero();
        }
        previous = a[k][k].clone();
    }

    let mut det = Rational::new(a[n - 1][n - 1].clone(), scale);
    if negate {
        det = -det;
    }
    det
}

fn partial_pivot_determinant(m: &DenseMatrix<f64>) -> f64 {
    let n = m.order();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut det = 1.0;
    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&x, &y| a[x][k].abs().total_cmp(&a[y][k].abs()))
            .unwrap();
        if a[pivot_row][k] == 0.0 {
            return 0.0;
        }
        if pivot_row != k {
            a.swap(pivot_row, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..n {
            let factor = a[i][k] / a[k][k];
            if factor != 0.0 {
                for j in k..n {
                    a[i][j] -= factor * a[k][j];
                }
            }
        }
    }
    det
}

/// Parses a rational written as an integer, a decimal (`0.25`, `1.5e-3`) or a
/// fraction `p/q`.
pub fn parse_rational(text: &str) -> std::result::Result<Rational, String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("empty number".into());
    }
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| format!("bad numerator in `{text}`"))?;
        let q: BigInt = q.trim().parse().map_err(|_| format!("bad denominator in `{text}`"))?;
        if q.is_zero() {
            return Err(format!("zero denominator in `{text}`"));
        }
        return Ok(Rational::new(p, q));
    }

    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = text[pos + 1..]
                .parse()
                .map_err(|_| format!("bad exponent in `{text}`"))?;
            (&text[..pos], exp)
        }
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(format!("`{text}` is not a number"));
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(all_digits.parse::<BigInt>().unwrap_or_default());
    let shift = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Ok(if negative { -value } else { value })
}
