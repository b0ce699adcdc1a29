//! Univariate polynomials over K, characteristic polynomials, and
//! Newton polygons.

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{FieldDescriptor, ValuedScalar};

/// Polynomial over K, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPolynomial {
    descriptor: FieldDescriptor,
    coeffs: Vec<ValuedScalar>,
}

impl UniPolynomial {
    pub fn new(descriptor: &FieldDescriptor, mut coeffs: Vec<ValuedScalar>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UniPolynomial {
            descriptor: descriptor.clone(),
            coeffs,
        }
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.descriptor
    }

    pub fn coeffs(&self) -> &[ValuedScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> ValuedScalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.descriptor.zero())
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

    pub fn is_monic(&self) -> bool {
        self.coeffs
            .last()
            .map_or(false, |c| c == &self.descriptor.one())
    }

    /// True iff every coefficient lies in O_K.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integral())
    }

    pub fn eval(&self, x: &ValuedScalar) -> ValuedScalar {
        let mut acc = self.descriptor.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }
}

/// det(T I - M), computed by the Faddeev-LeVerrier recurrence. The only
/// divisions are by the integers 1..d, valid in characteristic 0.
pub fn characteristic_polynomial(m: &Matrix) -> Result<UniPolynomial> {
    if m.rows() != m.cols() {
        return Err(Error::NonSquare);
    }
    let d = m.rows();
    let descriptor = m.descriptor().clone();
    let mut coeffs = vec![descriptor.zero(); d + 1];
    coeffs[d] = descriptor.one();
    let mut aux = Matrix::identity(&descriptor, d);
    for k in 1..=d {
        aux = m.mul(&aux)?;
        let mut trace = descriptor.zero();
        for i in 0..d {
            trace = trace.add(aux.get(i, i));
        }
        let c = trace.div_int(k as i64).neg();
        for i in 0..d {
            aux.set(i, i, aux.get(i, i).add(&c));
        }
        coeffs[d - k] = c;
    }
    Ok(UniPolynomial::new(&descriptor, coeffs))
}

/// Lower convex hull of {(i, val a_i) : a_i != 0}. Slopes are listed with
/// multiplicity and their opposites are the valuations of the nonzero
/// roots in an algebraic closure. Zero roots (a factor T^k) are split off
/// first and reported via `zero_root_multiplicity`, with the valuation
/// +infinity convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(i64, Rational64)>,
    pub slopes: Vec<Rational64>,
    pub zero_root_multiplicity: usize,
}

impl NewtonPolygon {
    /// Valuations of the nonzero roots (negated slopes), with multiplicity.
    pub fn root_valuations(&self) -> Vec<Rational64> {
        self.slopes.iter().map(|s| -s).collect()
    }

    pub fn max_slope(&self) -> Option<Rational64> {
        self.slopes.last().copied()
    }
}

pub fn newton_polygon(f: &UniPolynomial) -> Result<NewtonPolygon> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let order = f
        .coeffs()
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero polynomial");
    let points: Vec<(i64, i64)> = f
        .coeffs()
        .iter()
        .enumerate()
        .skip(order)
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            let v = c.valuation().finite().expect("nonzero coefficient");
            ((i - order) as i64, v)
        })
        .collect();

    // monotone chain, keeping the lower hull only
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in &points {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // drop b when it lies on or above segment a--p
            if (b.1 - a.1) * (p.0 - a.0) >= (p.1 - a.1) * (b.0 - a.0) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }

    let mut slopes = Vec::new();
    for w in hull.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        let slope = Rational64::new(y1 - y0, x1 - x0);
        for _ in 0..(x1 - x0) {
            slopes.push(slope);
        }
    }
    Ok(NewtonPolygon {
        vertices: hull
            .into_iter()
            .map(|(x, y)| (x, Rational64::from_integer(y)))
            .collect(),
        slopes,
        zero_root_multiplicity: order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q5() -> FieldDescriptor {
        FieldDescriptor::p_adic(5).unwrap()
    }

    /// The 5-adic matrix [[3/5+5, 4/5], [4/5, -3/5]].
    pub(crate) fn example_matrix(d: &FieldDescriptor) -> Matrix {
        let mut m = Matrix::zeros(d, 2, 2);
        m.set(0, 0, d.from_ratio(3, 5).unwrap().add(&d.from_integer(5)));
        m.set(0, 1, d.from_ratio(4, 5).unwrap());
        m.set(1, 0, d.from_ratio(4, 5).unwrap());
        m.set(1, 1, d.from_ratio(-3, 5).unwrap());
        m
    }

    #[test]
    fn charpoly_of_example_matrix() {
        let d = q5();
        let chi = characteristic_polynomial(&example_matrix(&d)).unwrap();
        // T^2 - 5T - 4
        assert_eq!(
            chi.coeffs(),
            &[d.from_integer(-4), d.from_integer(-5), d.from_integer(1)]
        );
    }

    #[test]
    fn charpoly_of_identity() {
        let d = q5();
        let chi = characteristic_polynomial(&Matrix::identity(&d, 3)).unwrap();
        // (T-1)^3 = T^3 - 3T^2 + 3T - 1
        assert_eq!(
            chi.coeffs(),
            &[
                d.from_integer(-1),
                d.from_integer(3),
                d.from_integer(-3),
                d.from_integer(1)
            ]
        );
    }

    #[test]
    fn charpoly_of_diagonal() {
        let d = q5();
        let m = Matrix::from_i64(&d, &[&[2, 0], &[0, 3]]);
        let chi = characteristic_polynomial(&m).unwrap();
        assert_eq!(
            chi.coeffs(),
            &[d.from_integer(6), d.from_integer(-5), d.from_integer(1)]
        );
    }

    #[test]
    fn charpoly_requires_square() {
        let d = q5();
        assert_eq!(
            characteristic_polynomial(&Matrix::zeros(&d, 2, 3)),
            Err(Error::NonSquare)
        );
    }

    #[test]
    fn newton_polygon_flat() {
        let d = q5();
        // T^2 - 5T - 4: points (0,0),(1,1),(2,0); hull (0,0)--(2,0)
        let f = UniPolynomial::new(
            &d,
            vec![d.from_integer(-4), d.from_integer(-5), d.from_integer(1)],
        );
        let np = newton_polygon(&f).unwrap();
        assert_eq!(
            np.vertices,
            vec![(0, Rational64::from_integer(0)), (2, Rational64::from_integer(0))]
        );
        assert_eq!(np.slopes, vec![Rational64::from_integer(0); 2]);
        assert_eq!(np.zero_root_multiplicity, 0);
    }

    #[test]
    fn newton_polygon_zero_root() {
        let d = q5();
        let f = UniPolynomial::new(&d, vec![d.zero(), d.from_integer(1)]); // T
        let np = newton_polygon(&f).unwrap();
        assert_eq!(np.zero_root_multiplicity, 1);
        assert!(np.slopes.is_empty());
    }

    #[test]
    fn newton_polygon_half_slope() {
        let d = FieldDescriptor::p_adic(2).unwrap();
        // T^2 - 2: points (0,1),(2,0); slope -1/2 twice
        let f = UniPolynomial::new(
            &d,
            vec![d.from_integer(-2), d.zero(), d.from_integer(1)],
        );
        let np = newton_polygon(&f).unwrap();
        assert_eq!(np.slopes, vec![Rational64::new(-1, 2); 2]);
        assert_eq!(np.root_valuations(), vec![Rational64::new(1, 2); 2]);
    }

    #[test]
    fn zero_polynomial_rejected() {
        let d = q5();
        let f = UniPolynomial::new(&d, vec![]);
        assert_eq!(newton_polygon(&f), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn slope_count_matches_degree() {
        let d = FieldDescriptor::p_adic(3).unwrap();
        let f = UniPolynomial::new(
            &d,
            vec![
                d.from_integer(9),
                d.from_ratio(1, 3).unwrap(),
                d.zero(),
                d.from_integer(1),
            ],
        );
        let np = newton_polygon(&f).unwrap();
        assert_eq!(np.slopes.len() + np.zero_root_multiplicity, 3);
    }
}
