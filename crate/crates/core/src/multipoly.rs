//! Multivariate polynomials over K, used for the symbolic coefficient
//! polynomials of pencil characteristic polynomials.

use std::collections::BTreeMap;

use crate::scalar::{FieldDescriptor, ValuedScalar};

/// Sparse polynomial in a fixed number of variables. Keys are exponent
/// vectors; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    descriptor: FieldDescriptor,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, ValuedScalar>,
}

impl MultiPoly {
    pub fn zero(descriptor: &FieldDescriptor, nvars: usize) -> Self {
        MultiPoly {
            descriptor: descriptor.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(descriptor: &FieldDescriptor, nvars: usize, c: ValuedScalar) -> Self {
        let mut p = MultiPoly::zero(descriptor, nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn variable(descriptor: &FieldDescriptor, nvars: usize, index: usize) -> Self {
        assert!(index < nvars);
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        let mut p = MultiPoly::zero(descriptor, nvars);
        p.terms.insert(exps, descriptor.one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &ValuedScalar)> {
        self.terms.iter()
    }

    fn insert(&mut self, exps: Vec<u32>, c: ValuedScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(existing) => {
                let sum = existing.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MultiPoly::zero(&self.descriptor, self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert(exps, ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &ValuedScalar) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.descriptor, self.nvars);
        for (e, a) in &self.terms {
            out.insert(e.clone(), a.mul(c));
        }
        out
    }

    pub fn eval(&self, point: &[ValuedScalar]) -> ValuedScalar {
        assert_eq!(point.len(), self.nvars);
        let mut acc = self.descriptor.zero();
        for (exps, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(exps) {
                for _ in 0..e {
                    term = term.mul(x);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Deterministic human-readable rendering, e.g. `-1*x1^2 + 3`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (exps, c) in self.terms.iter().rev() {
            let mut factors = vec![format!("{}", c.render())];
            for (i, &e) in exps.iter().enumerate() {
                if e == 1 {
                    factors.push(format!("x{}", i + 1));
                } else if e > 1 {
                    factors.push(format!("x{}^{}", i + 1, e));
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_eval() {
        let d = FieldDescriptor::p_adic(5).unwrap();
        let x = MultiPoly::variable(&d, 2, 0);
        let y = MultiPoly::variable(&d, 2, 1);
        let p = x.mul(&x).add(&y.scale(&d.from_integer(3))); // x^2 + 3y
        let val = p.eval(&[d.from_integer(2), d.from_integer(-1)]);
        assert_eq!(val, d.from_integer(1));
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn cancellation_removes_terms() {
        let d = FieldDescriptor::p_adic(5).unwrap();
        let x = MultiPoly::variable(&d, 1, 0);
        assert!(x.add(&x.neg()).is_zero());
    }
}
