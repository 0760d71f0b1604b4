use std::cmp::Ordering;
use std::fmt;

use super::{NumError, Rational};

/// Splits `k` as `s^2 * d` with `d` squarefree. Returns `(s, d)`.
pub fn fold_sqrt(k: u64) -> (u64, u64) {
    if k == 0 {
        return (0, 1);
    }
    let (mut s, mut d, mut rest) = (1u64, 1u64, k);
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            d *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (s, d * rest)
}

/// An element `a + b*sqrt(d)` of the real quadratic field Q(sqrt(d)).
///
/// `d` is squarefree and at least 2. Values with `b == 0` are allowed here;
/// [`super::ExactScalar`] collapses them to plain rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    d: u64,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, d: u64) -> Result<Self, NumError> {
        if d < 2 || fold_sqrt(d).0 != 1 {
            return Err(NumError::BadField(d));
        }
        Ok(QuadExt { a, b, d })
    }

    /// `coef * sqrt(k)` for any positive `k`, folding square factors into the
    /// coefficient: sqrt(8) becomes 2*sqrt(2). `None` when `k` is a perfect square.
    pub fn from_sqrt(coef: Rational, k: u64) -> Option<Self> {
        let (s, d) = fold_sqrt(k);
        (d >= 2).then(|| QuadExt { a: Rational::zero(), b: coef * Rational::from(s as i64), d })
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn same_field(&self, other: &QuadExt) -> Result<(), NumError> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(NumError::FieldMismatch(self.d, other.d))
        }
    }

    fn lift(&self, r: &Rational) -> QuadExt {
        QuadExt { a: r.clone(), b: Rational::zero(), d: self.d }
    }

    pub fn add(&self, rhs: &QuadExt) -> Result<QuadExt, NumError> {
        self.same_field(rhs)?;
        Ok(QuadExt { a: &self.a + &rhs.a, b: &self.b + &rhs.b, d: self.d })
    }

    pub fn sub(&self, rhs: &QuadExt) -> Result<QuadExt, NumError> {
        self.same_field(rhs)?;
        Ok(QuadExt { a: &self.a - &rhs.a, b: &self.b - &rhs.b, d: self.d })
    }

    pub fn mul(&self, rhs: &QuadExt) -> Result<QuadExt, NumError> {
        self.same_field(rhs)?;
        let d = Rational::from(self.d as i64);
        Ok(QuadExt { a: &self.a * &rhs.a + &self.b * &rhs.b * d, b: &self.a * &rhs.b + &self.b * &rhs.a, d: self.d })
    }

    pub fn conj(&self) -> QuadExt {
        QuadExt { a: self.a.clone(), b: -&self.b, d: self.d }
    }

    /// Field norm `a^2 - d*b^2`; zero only for the zero element.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from(self.d as i64)
    }

    pub fn recip(&self) -> Result<QuadExt, NumError> {
        if self.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        let n = self.norm();
        let c = self.conj();
        Ok(QuadExt { a: c.a.checked_div(&n)?, b: c.b.checked_div(&n)?, d: self.d })
    }

    pub fn div(&self, rhs: &QuadExt) -> Result<QuadExt, NumError> {
        self.same_field(rhs)?;
        self.mul(&rhs.recip()?)
    }

    pub fn add_rational(&self, r: &Rational) -> QuadExt {
        self.add(&self.lift(r)).expect("same field")
    }

    pub fn mul_rational(&self, r: &Rational) -> QuadExt {
        QuadExt { a: &self.a * r, b: &self.b * r, d: self.d }
    }

    /// Exact sign, decided from the signs of `a`, `b` and a comparison of
    /// `a^2` with `b^2 d`.
    pub fn sign(&self) -> Ordering {
        let (sa, sb) = (self.a.signum(), self.b.signum());
        use Ordering::*;
        match (sa, sb) {
            (Equal, s) | (s, Equal) => s,
            (Greater, Greater) => Greater,
            (Less, Less) => Less,
            (sa, _) => {
                let a2 = &self.a * &self.a;
                let b2d = &self.b * &self.b * Rational::from(self.d as i64);
                // a^2 == b^2 d cannot happen for squarefree d > 1 and (a, b) != 0.
                if a2 > b2d {
                    sa
                } else {
                    sa.reverse()
                }
            }
        }
    }

    pub fn try_cmp(&self, rhs: &QuadExt) -> Result<Ordering, NumError> {
        Ok(self.sub(rhs)?.sign())
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * (self.d as f64).sqrt()
    }
}

impl fmt::Display for QuadExt {
    /// `a+b*sqrt(d)`, `a-b*sqrt(d)`, or `b*sqrt(d)` when `a == 0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a.is_zero() {
            return write!(f, "{}*sqrt({})", self.b, self.d);
        }
        if self.b.is_negative() {
            write!(f, "{}-{}*sqrt({})", self.a, self.b.abs(), self.d)
        } else {
            write!(f, "{}+{}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
