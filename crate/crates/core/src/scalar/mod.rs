//! Exact arithmetic in the dense effective subfield of a complete
//! discretely valued field: rationals inside Q_p, rational functions
//! inside the Laurent-series field Q((t)).

mod parse;
pub mod qpoly;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use qpoly::{padic_valuation, QPoly, RatFunc};

/// The base field: Q_p for a prime p, or Q((t)) with a named variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldKind {
    PAdic(u64),
    Laurent(Arc<str>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    kind: FieldKind,
}

fn is_prime(n: u64) -> bool {
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

impl FieldDescriptor {
    pub fn p_adic(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldDescriptor {
            kind: FieldKind::PAdic(p),
        })
    }

    pub fn laurent(var: &str) -> Result<Self> {
        if var.is_empty() || !var.chars().all(|c| c.is_ascii_alphabetic()) {
            return Err(Error::Parse(format!("invalid variable name {var:?}")));
        }
        Ok(FieldDescriptor {
            kind: FieldKind::Laurent(Arc::from(var)),
        })
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    /// An element of valuation exactly 1: p, respectively t.
    pub fn uniformizer(&self) -> ValuedScalar {
        self.power_of_uniformizer(1)
    }

    /// pi^k, for any integer k.
    pub fn power_of_uniformizer(&self, k: i64) -> ValuedScalar {
        match &self.kind {
            FieldKind::PAdic(p) => {
                let base = BigInt::from(*p);
                let value = if k >= 0 {
                    BigRational::from_integer(base.pow(k as u32))
                } else {
                    BigRational::new(BigInt::one(), base.pow((-k) as u32))
                };
                ValuedScalar {
                    descriptor: self.clone(),
                    repr: Repr::Rational(value),
                }
            }
            FieldKind::Laurent(_) => {
                let f = if k >= 0 {
                    RatFunc::from_poly(QPoly::monomial(k as usize))
                } else {
                    RatFunc::new(QPoly::one(), QPoly::monomial((-k) as usize))
                        .expect("monomial is nonzero")
                };
                ValuedScalar {
                    descriptor: self.clone(),
                    repr: Repr::RatFunc(f),
                }
            }
        }
    }

    pub fn zero(&self) -> ValuedScalar {
        self.from_integer(0)
    }

    pub fn one(&self) -> ValuedScalar {
        self.from_integer(1)
    }

    pub fn from_integer(&self, n: i64) -> ValuedScalar {
        self.from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(&self, n: BigInt) -> ValuedScalar {
        let repr = match &self.kind {
            FieldKind::PAdic(_) => Repr::Rational(BigRational::from_integer(n)),
            FieldKind::Laurent(_) => {
                Repr::RatFunc(RatFunc::from_poly(QPoly::constant(BigRational::from_integer(n))))
            }
        };
        ValuedScalar {
            descriptor: self.clone(),
            repr,
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<ValuedScalar> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        let q = BigRational::new(BigInt::from(num), BigInt::from(den));
        Ok(self.from_rational(q))
    }

    pub fn from_rational(&self, q: BigRational) -> ValuedScalar {
        let repr = match &self.kind {
            FieldKind::PAdic(_) => Repr::Rational(q),
            FieldKind::Laurent(_) => Repr::RatFunc(RatFunc::from_poly(QPoly::constant(q))),
        };
        ValuedScalar {
            descriptor: self.clone(),
            repr,
        }
    }

    /// A Laurent scalar from an explicit ratio of polynomials.
    pub fn from_poly_ratio(&self, num: QPoly, den: QPoly) -> Result<ValuedScalar> {
        match &self.kind {
            FieldKind::Laurent(_) => Ok(ValuedScalar {
                descriptor: self.clone(),
                repr: Repr::RatFunc(RatFunc::new(num, den)?),
            }),
            FieldKind::PAdic(_) => Err(Error::Parse(
                "polynomial scalars require a Laurent descriptor".into(),
            )),
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FieldKind::PAdic(p) => write!(f, "Q_{p}"),
            FieldKind::Laurent(v) => write!(f, "Q(({v}))"),
        }
    }
}

/// Element of the value group Z extended with +infinity.
/// Infinity compares greater than every finite value and is absorbing
/// for addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtValuation {
    Finite(i64),
    Infinity,
}

impl ExtValuation {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtValuation::Finite(_))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            ExtValuation::Finite(v) => Some(v),
            ExtValuation::Infinity => None,
        }
    }
}

impl std::ops::Add for ExtValuation {
    type Output = ExtValuation;
    fn add(self, rhs: ExtValuation) -> ExtValuation {
        match (self, rhs) {
            (ExtValuation::Finite(a), ExtValuation::Finite(b)) => ExtValuation::Finite(a + b),
            _ => ExtValuation::Infinity,
        }
    }
}

impl fmt::Display for ExtValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValuation::Finite(v) => write!(f, "{v}"),
            ExtValuation::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Rational(BigRational),
    RatFunc(RatFunc),
}

/// An exact element of K, restricted to the dense subfield Q resp. Q(t).
/// Immutable; all operations are pure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuedScalar {
    descriptor: FieldDescriptor,
    repr: Repr,
}

impl ValuedScalar {
    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.descriptor
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rational(q) => q.is_zero(),
            Repr::RatFunc(f) => f.is_zero(),
        }
    }

    pub fn valuation(&self) -> ExtValuation {
        match (&self.repr, &self.descriptor.kind) {
            (Repr::Rational(q), FieldKind::PAdic(p)) => match padic_valuation(q, *p) {
                Some(v) => ExtValuation::Finite(v),
                None => ExtValuation::Infinity,
            },
            (Repr::RatFunc(f), FieldKind::Laurent(_)) => match f.order() {
                Some(v) => ExtValuation::Finite(v as i64),
                None => ExtValuation::Infinity,
            },
            _ => unreachable!("representation matches descriptor by construction"),
        }
    }

    /// Membership in the valuation ring O_K.
    pub fn is_integral(&self) -> bool {
        self.valuation() >= ExtValuation::Finite(0)
    }

    /// True for elements of valuation exactly 0 (invertible in O_K).
    pub fn is_unit(&self) -> bool {
        self.valuation() == ExtValuation::Finite(0)
    }

    fn check_same_field(&self, other: &ValuedScalar) {
        assert_eq!(
            self.descriptor, other.descriptor,
            "mixed-descriptor scalar operation"
        );
    }

    pub fn add(&self, other: &ValuedScalar) -> ValuedScalar {
        self.check_same_field(other);
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => Repr::Rational(a + b),
            (Repr::RatFunc(a), Repr::RatFunc(b)) => Repr::RatFunc(a.add(b)),
            _ => unreachable!(),
        };
        ValuedScalar {
            descriptor: self.descriptor.clone(),
            repr,
        }
    }

    pub fn neg(&self) -> ValuedScalar {
        let repr = match &self.repr {
            Repr::Rational(a) => Repr::Rational(-a.clone()),
            Repr::RatFunc(a) => Repr::RatFunc(a.neg()),
        };
        ValuedScalar {
            descriptor: self.descriptor.clone(),
            repr,
        }
    }

    pub fn sub(&self, other: &ValuedScalar) -> ValuedScalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ValuedScalar) -> ValuedScalar {
        self.check_same_field(other);
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => Repr::Rational(a * b),
            (Repr::RatFunc(a), Repr::RatFunc(b)) => Repr::RatFunc(a.mul(b)),
            _ => unreachable!(),
        };
        ValuedScalar {
            descriptor: self.descriptor.clone(),
            repr,
        }
    }

    pub fn inv(&self) -> Result<ValuedScalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let repr = match &self.repr {
            Repr::Rational(a) => Repr::Rational(a.recip()),
            Repr::RatFunc(a) => Repr::RatFunc(a.inv()?),
        };
        Ok(ValuedScalar {
            descriptor: self.descriptor.clone(),
            repr,
        })
    }

    pub fn div(&self, other: &ValuedScalar) -> Result<ValuedScalar> {
        Ok(self.mul(&other.inv()?))
    }

    /// Divide by a nonzero integer (always exact in characteristic 0).
    pub fn div_int(&self, n: i64) -> ValuedScalar {
        self.div(&self.descriptor.from_integer(n))
            .expect("nonzero integer divisor")
    }

}

impl fmt::Display for ValuedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for &ValuedScalar {
            type Output = ValuedScalar;
            fn $method(self, rhs: &ValuedScalar) -> ValuedScalar {
                ValuedScalar::$method(self, rhs)
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl std::ops::Neg for &ValuedScalar {
    type Output = ValuedScalar;
    fn neg(self) -> ValuedScalar {
        ValuedScalar::neg(self)
    }
}
