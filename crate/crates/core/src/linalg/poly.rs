use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Dense univariate polynomial over the rationals; `coeffs[k]` multiplies `d^k`.
/// Trailing zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        RatPoly::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        RatPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        RatPoly::new(vec![c])
    }

    /// The monic linear polynomial `d - root`.
    pub fn linear(root: &Rational) -> Self {
        RatPoly::new(vec![-root.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: i64) -> Rational {
        self.values_at(std::iter::once(x)).pop().expect("one point")
    }

    /// `(numerators, denominator)` with a positive common denominator.
    fn integer_form(&self) -> (Vec<BigInt>, BigInt) {
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = self.coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        (nums, den)
    }

    fn horner(nums: &[BigInt], x: i64) -> BigInt {
        let x = BigInt::from(x);
        nums.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
    }

    /// Values at integer points, by Horner over a common denominator.
    pub fn values_at(&self, xs: impl IntoIterator<Item = i64>) -> Vec<Rational> {
        let (nums, den) = self.integer_form();
        xs.into_iter().map(|x| Rational::new(Self::horner(&nums, x), den.clone())).collect()
    }

    /// Signs of the values at integer points.
    pub fn signs_at(&self, xs: impl IntoIterator<Item = i64>) -> Vec<Sign> {
        let (nums, _) = self.integer_form();
        xs.into_iter().map(|x| Self::horner(&nums, x).sign()).collect()
    }

    /// Value at an integer where the polynomial is known to be integral.
    pub fn eval_integer(&self, x: i64) -> Option<BigInt> {
        let v = self.eval_int(x);
        v.is_integer().then(|| v.to_integer())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RatPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `p(a*d + b)`.
    pub fn compose_affine(&self, a: &Rational, b: &Rational) -> Self {
        if a.is_integer() && b.is_integer() {
            let (nums, den) = self.integer_form();
            let (a, b) = (a.to_integer(), b.to_integer());
            let mut acc: Vec<BigInt> = Vec::new();
            for c in nums.iter().rev() {
                let mut next = vec![BigInt::zero(); acc.len() + 1];
                for (k, x) in acc.iter().enumerate() {
                    next[k] += x * &b;
                    next[k + 1] += x * &a;
                }
                next[0] += c;
                acc = next;
            }
            return RatPoly::new(acc.into_iter().map(|x| Rational::new(x, den.clone())).collect());
        }
        let lin = RatPoly::new(vec![b.clone(), a.clone()]);
        self.coeffs
            .iter()
            .rev()
            .fold(RatPoly::zero(), |acc, c| &(&acc * &lin) + &RatPoly::constant(c.clone()))
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

impl fmt::Display for RatPoly {
    /// Coefficient list `[c0, c1, ...]` in increasing powers of `d`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl RatPoly {
    /// Human-readable sum such as `1/2*d^2 + 1/2*d`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let a = c.abs();
            let mono = match k {
                0 => String::new(),
                1 => "d".into(),
                _ => format!("d^{k}"),
            };
            if k == 0 {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{a}*{mono}"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = RatPoly::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(RatPoly::from_ints(&[0, 0]).degree(), None);
    }

    #[test]
    fn arithmetic() {
        let p = RatPoly::from_ints(&[1, 1]);
        let q = RatPoly::from_ints(&[-1, 1]);
        assert_eq!(&p * &q, RatPoly::from_ints(&[-1, 0, 1]));
        assert_eq!(&p - &p, RatPoly::zero());
        assert_eq!(&p + &q, RatPoly::from_ints(&[0, 2]));
        assert_eq!(p.eval_int(-3), Rational::from_integer((-2).into()));
    }

    #[test]
    fn affine_composition() {
        // (d+1)^2 at -4-d is (d+3)^2.
        let p = RatPoly::from_ints(&[1, 2, 1]);
        let q = p.compose_affine(&Rational::from_integer((-1).into()), &Rational::from_integer((-4).into()));
        assert_eq!(q, RatPoly::from_ints(&[9, 6, 1]));
    }

    #[test]
    fn rendering() {
        let half = Rational::new(1.into(), 2.into());
        let p = RatPoly::new(vec![Rational::zero(), half.clone(), half]);
        assert_eq!(p.to_string(), "[0, 1/2, 1/2]");
        assert_eq!(p.pretty(), "1/2*d^2 + 1/2*d");
        assert_eq!(RatPoly::from_ints(&[-3, 0, -1]).pretty(), "-d^2 - 3");
    }
}
