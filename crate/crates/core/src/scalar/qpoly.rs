//! Univariate polynomials and rational functions over the rationals,
//! the internal representation of Laurent-series scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense polynomial with rational coefficients, lowest degree first.
/// Canonical form: no trailing zero coefficients (the zero polynomial
/// is the empty coefficient vector).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly::new(vec![c])
    }

    /// The monomial t^k, k >= 0.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = BigRational::one();
        QPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Index of the lowest nonzero coefficient (the order at t = 0).
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
            let b = other.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
            out.push(a + b);
        }
        QPoly::new(out)
    }

    pub fn neg(&self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QPoly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division: self = q * div + r with deg r < deg div.
    pub fn div_rem(&self, div: &QPoly) -> Result<(QPoly, QPoly)> {
        if div.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = div.degree().unwrap();
        let lead = div.leading_coeff().unwrap().clone();
        let mut rem = self.clone();
        let mut quot = QPoly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.leading_coeff().unwrap() / &lead;
            let term = QPoly::monomial(rd - dd).scale(&factor);
            quot = quot.add(&term);
            rem = rem.sub(&term.mul(div));
        }
        Ok((quot, rem))
    }

    /// Integer coefficients with denominators cleared and content removed.
    fn primitive_int(&self) -> Vec<BigInt> {
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = num_integer::Integer::lcm(&lcm, c.denom());
        }
        let mut out: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for c in &out {
            content = num_integer::Integer::gcd(&content, c);
        }
        if !content.is_zero() && !content.is_one() {
            for c in &mut out {
                *c /= &content;
            }
        }
        out
    }

    /// Monic greatest common divisor via a primitive pseudo-remainder
    /// sequence over the integers; a naive rational Euclid blows up.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let mut a = self.primitive_int();
        let mut b = other.primitive_int();
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            // pseudo-remainder of a by b, then strip its content
            let db = b.len() - 1;
            let lead = b[db].clone();
            while a.len() > db {
                let factor = a.last().unwrap().clone();
                if factor.is_zero() {
                    a.pop();
                    continue;
                }
                let shift = a.len() - 1 - db;
                for c in &mut a {
                    *c *= &lead;
                }
                for (i, bc) in b.iter().enumerate() {
                    let delta = bc * &factor;
                    a[shift + i] -= delta;
                }
                while a.last().map_or(false, |c| c.is_zero()) {
                    a.pop();
                }
            }
            let mut content = BigInt::zero();
            for c in &a {
                content = num_integer::Integer::gcd(&content, c);
            }
            if !content.is_zero() && !content.is_one() {
                for c in &mut a {
                    *c /= &content;
                }
            }
            std::mem::swap(&mut a, &mut b);
        }
        QPoly::new(a.into_iter().map(BigRational::from_integer).collect()).monic()
    }

    /// Self scaled to leading coefficient one.
    fn monic(&self) -> QPoly {
        match self.leading_coeff() {
            None => QPoly::zero(),
            Some(l) => {
                let inv = BigRational::one() / l;
                self.scale(&inv)
            }
        }
    }
}

/// Ratio of two polynomials in canonical reduced form: gcd divided out
/// and denominator monic. The denominator is always nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: QPoly,
    den: QPoly,
}

impl RatFunc {
    pub fn new(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num: QPoly::zero(),
                den: QPoly::one(),
            });
        }
        // strip the common power of t first, then a polynomial gcd only
        // when both parts are non-constant
        let shift = num.order().unwrap().min(den.order().unwrap());
        let num = QPoly::new(num.coeffs[shift..].to_vec());
        let den = QPoly::new(den.coeffs[shift..].to_vec());
        let (num, den) = if num.degree() == Some(0) || den.degree() == Some(0) {
            (num, den)
        } else {
            let g = num.gcd(&den);
            (num.div_rem(&g)?.0, den.div_rem(&g)?.0)
        };
        let lead = den.leading_coeff().unwrap().clone();
        let inv = BigRational::one() / lead;
        Ok(RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn from_poly(p: QPoly) -> Self {
        RatFunc {
            num: p,
            den: QPoly::one(),
        }
    }

    pub fn zero() -> Self {
        RatFunc::from_poly(QPoly::zero())
    }

    pub fn one() -> Self {
        RatFunc::from_poly(QPoly::one())
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RatFunc::new(num, den).expect("denominator product is nonzero")
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("denominator product is nonzero")
    }

    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    /// Order at t of the rational function: ord(num) - ord(den).
    pub fn order(&self) -> Option<isize> {
        let n = self.num.order()?;
        let d = self.den.order().expect("denominator is nonzero");
        Some(n as isize - d as isize)
    }
}

/// p-adic valuation of a rational number; `None` encodes +infinity (x = 0).
pub fn padic_valuation(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let count = |mut n: BigInt| -> i64 {
        let mut v = 0;
        n = n.abs();
        loop {
            let (q, r) = num_integer::Integer::div_rem(&n, &p);
            if r.is_zero() {
                v += 1;
                n = q;
            } else {
                return v;
            }
        }
    };
    Some(count(x.numer().clone()) - count(x.denom().clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn gcd_reduces() {
        // (t^2 + t^3) / t^5 reduces to (1 + t) / t^3
        let num = QPoly::new(vec![q(0, 1), q(0, 1), q(1, 1), q(1, 1)]);
        let den = QPoly::monomial(5);
        let f = RatFunc::new(num, den).unwrap();
        assert_eq!(f.num(), &QPoly::new(vec![q(1, 1), q(1, 1)]));
        assert_eq!(f.den(), &QPoly::monomial(3));
        assert_eq!(f.order(), Some(-3));
    }

    #[test]
    fn padic_valuation_examples() {
        assert_eq!(padic_valuation(&q(3, 5), 5), Some(-1));
        assert_eq!(padic_valuation(&q(0, 1), 5), None);
        assert_eq!(padic_valuation(&q(50, 1), 5), Some(2));
        assert_eq!(padic_valuation(&q(-8, 3), 2), Some(3));
    }

    #[test]
    fn div_rem_exact() {
        let a = QPoly::new(vec![q(-1, 1), q(0, 1), q(1, 1)]); // t^2 - 1
        let b = QPoly::new(vec![q(1, 1), q(1, 1)]); // t + 1
        let (quot, rem) = a.div_rem(&b).unwrap();
        assert_eq!(quot, QPoly::new(vec![q(-1, 1), q(1, 1)]));
        assert!(rem.is_zero());
    }
}
