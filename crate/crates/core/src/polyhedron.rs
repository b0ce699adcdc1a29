//! Polyhedra over K: sets {x : Ax + v >= 0, Bx + w = 0} where ">=" is
//! coordinatewise nonnegative valuation, with exact membership,
//! emptiness, direct images under affine maps, Minkowski sums, and the
//! dimension-1 canonical ball form.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{ExtValuation, FieldDescriptor, ValuedScalar};
use crate::snf::smith_normal_form;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyhedron {
    descriptor: FieldDescriptor,
    n: usize,
    a: Matrix,
    v: Vec<ValuedScalar>,
    b: Matrix,
    w: Vec<ValuedScalar>,
}

/// x |-> Fx + g
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    pub f: Matrix,
    pub g: Vec<ValuedScalar>,
}

impl AffineMap {
    pub fn new(f: Matrix, g: Vec<ValuedScalar>) -> Result<Self> {
        if g.len() != f.rows() {
            return Err(Error::DimensionMismatch(
                "offset length differs from matrix row count".into(),
            ));
        }
        Ok(AffineMap { f, g })
    }

    pub fn linear(f: Matrix) -> Self {
        let g = vec![f.descriptor().zero(); f.rows()];
        AffineMap { f, g }
    }

    pub fn translation(descriptor: &FieldDescriptor, g: Vec<ValuedScalar>) -> Self {
        let f = Matrix::identity(descriptor, g.len());
        AffineMap { f, g }
    }

    /// Coordinate projection K^n -> K^m keeping the first m coordinates.
    pub fn projection(descriptor: &FieldDescriptor, n: usize, m: usize) -> Self {
        assert!(m <= n);
        let mut f = Matrix::zeros(descriptor, m, n);
        for i in 0..m {
            f.set(i, i, descriptor.one());
        }
        AffineMap::linear(f)
    }

    pub fn domain_dim(&self) -> usize {
        self.f.cols()
    }

    pub fn codomain_dim(&self) -> usize {
        self.f.rows()
    }

    pub fn apply(&self, x: &[ValuedScalar]) -> Result<Vec<ValuedScalar>> {
        let mut y = self.f.mul_vec(x)?;
        for (yi, gi) in y.iter_mut().zip(&self.g) {
            *yi = yi.add(gi);
        }
        Ok(y)
    }
}

/// Ultrametric ball {x : val(x - center) >= radius_valuation}, or the
/// empty set, or all of K.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ball {
    Empty,
    All,
    Ball {
        center: ValuedScalar,
        radius_valuation: ExtValuation,
    },
}

impl Ball {
    pub fn contains(&self, x: &ValuedScalar) -> bool {
        match self {
            Ball::Empty => false,
            Ball::All => true,
            Ball::Ball {
                center,
                radius_valuation,
            } => x.sub(center).valuation() >= *radius_valuation,
        }
    }

    /// Set equality: two balls coincide iff the radii agree and the
    /// centers are within the radius of each other.
    pub fn set_eq(&self, other: &Ball) -> bool {
        match (self, other) {
            (Ball::Empty, Ball::Empty) | (Ball::All, Ball::All) => true,
            (
                Ball::Ball {
                    center: c1,
                    radius_valuation: r1,
                },
                Ball::Ball {
                    center: c2,
                    radius_valuation: r2,
                },
            ) => r1 == r2 && c1.sub(c2).valuation() >= *r1,
            _ => false,
        }
    }
}

/// A nonempty polyhedron written as x0 + M * disc, the image of a
/// polydisc under an affine map. Coordinate i of the disc is constrained
/// by s_i z_i + c_i >= 0 when s_i != 0 and is free otherwise.
#[derive(Debug, Clone)]
pub struct PolydiscImage {
    pub base_point: Vec<ValuedScalar>,
    pub map: Matrix,
    pub disc_constraints: Vec<(ValuedScalar, ValuedScalar)>,
}

impl PolydiscImage {
    pub fn disc_dim(&self) -> usize {
        self.map.cols()
    }

    /// Whether z lies in the polydisc.
    pub fn disc_contains(&self, z: &[ValuedScalar]) -> bool {
        self.disc_constraints
            .iter()
            .zip(z)
            .all(|((s, c), zi)| s.mul(zi).add(c).is_integral())
    }

    pub fn apply(&self, z: &[ValuedScalar]) -> Result<Vec<ValuedScalar>> {
        let mut x = self.map.mul_vec(z)?;
        for (xi, bi) in x.iter_mut().zip(&self.base_point) {
            *xi = xi.add(bi);
        }
        Ok(x)
    }

    /// The center of the disc (each constrained coordinate at -c_i/s_i).
    pub fn disc_center(&self) -> Vec<ValuedScalar> {
        self.disc_constraints
            .iter()
            .map(|(s, c)| {
                if s.is_zero() {
                    s.descriptor().zero()
                } else {
                    c.div(s).expect("nonzero diagonal entry").neg()
                }
            })
            .collect()
    }
}

/// Internal result of the equality-elimination + SNF reduction pipeline.
struct ReducedForm {
    x0: Vec<ValuedScalar>,
    /// x = x0 + composed * z for z in the disc
    composed: Matrix,
    disc: Vec<(ValuedScalar, ValuedScalar)>,
}

impl Polyhedron {
    pub fn new(
        n: usize,
        a: Matrix,
        v: Vec<ValuedScalar>,
        b: Matrix,
        w: Vec<ValuedScalar>,
    ) -> Result<Self> {
        let descriptor = a.descriptor().clone();
        if b.descriptor() != &descriptor {
            return Err(Error::DimensionMismatch("mixed descriptors".into()));
        }
        if (a.rows() > 0 && a.cols() != n) || (b.rows() > 0 && b.cols() != n) {
            return Err(Error::DimensionMismatch(
                "constraint matrices do not match the ambient dimension".into(),
            ));
        }
        if v.len() != a.rows() || w.len() != b.rows() {
            return Err(Error::DimensionMismatch(
                "constant block length differs from row count".into(),
            ));
        }
        // normalize 0-row blocks to have n columns
        let a = if a.rows() == 0 { Matrix::zeros(&descriptor, 0, n) } else { a };
        let b = if b.rows() == 0 { Matrix::zeros(&descriptor, 0, n) } else { b };
        Ok(Polyhedron {
            descriptor,
            n,
            a,
            v,
            b,
            w,
        })
    }

    pub fn from_inequalities(n: usize, a: Matrix, v: Vec<ValuedScalar>) -> Result<Self> {
        let d = a.descriptor().clone();
        let b = Matrix::zeros(&d, 0, n);
        Polyhedron::new(n, a, v, b, vec![])
    }

    pub fn full_space(descriptor: &FieldDescriptor, n: usize) -> Self {
        Polyhedron {
            descriptor: descriptor.clone(),
            n,
            a: Matrix::zeros(descriptor, 0, n),
            v: vec![],
            b: Matrix::zeros(descriptor, 0, n),
            w: vec![],
        }
    }

    /// The closed unit polydisc O_K^n.
    pub fn unit_polydisc(descriptor: &FieldDescriptor, n: usize) -> Self {
        let a = Matrix::identity(descriptor, n);
        let v = vec![descriptor.zero(); n];
        Polyhedron::from_inequalities(n, a, v).expect("consistent dimensions")
    }

    /// Canonical empty polyhedron: the single row 0*x + pi^-1 >= 0.
    pub fn canonical_empty(descriptor: &FieldDescriptor, n: usize) -> Self {
        let a = Matrix::zeros(descriptor, 1, n);
        let v = vec![descriptor.power_of_uniformizer(-1)];
        Polyhedron::from_inequalities(n, a, v).expect("consistent dimensions")
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.descriptor
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn inequality_block(&self) -> (&Matrix, &[ValuedScalar]) {
        (&self.a, &self.v)
    }

    pub fn equality_block(&self) -> (&Matrix, &[ValuedScalar]) {
        (&self.b, &self.w)
    }

    pub fn contains(&self, x: &[ValuedScalar]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} in ambient dimension {}",
                x.len(),
                self.n
            )));
        }
        let ineq = self.a.mul_vec(x)?;
        for (row, vi) in ineq.iter().zip(&self.v) {
            if !row.add(vi).is_integral() {
                return Ok(false);
            }
        }
        let eq = self.b.mul_vec(x)?;
        for (row, wi) in eq.iter().zip(&self.w) {
            if !row.add(wi).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Intersection by concatenating constraint blocks.
    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(
                "intersection of polyhedra in different ambient spaces".into(),
            ));
        }
        let a = self.a.vstack(&other.a)?;
        let b = self.b.vstack(&other.b)?;
        let mut v = self.v.clone();
        v.extend(other.v.iter().cloned());
        let mut w = self.w.clone();
        w.extend(other.w.iter().cloned());
        Polyhedron::new(self.n, a, v, b, w)
    }

    /// The translate P + t.
    pub fn translate(&self, t: &[ValuedScalar]) -> Result<Polyhedron> {
        let at = self.a.mul_vec(t)?;
        let bt = self.b.mul_vec(t)?;
        let v = self.v.iter().zip(&at).map(|(vi, s)| vi.sub(s)).collect();
        let w = self.w.iter().zip(&bt).map(|(wi, s)| wi.sub(s)).collect();
        Polyhedron::new(self.n, self.a.clone(), v, self.b.clone(), w)
    }

    /// Equality elimination followed by SNF reduction of the inequality
    /// block; `None` when the polyhedron is empty.
    fn reduce(&self) -> Option<ReducedForm> {
        let neg_w: Vec<ValuedScalar> = self.w.iter().map(|wi| wi.neg()).collect();
        let x0 = self
            .b
            .solve_affine(&neg_w)
            .expect("dimensions validated at construction")?;
        let j = self.b.kernel_basis();

        let a_red = self.a.mul(&j).expect("kernel basis has n rows");
        let mut v_red = self.a.mul_vec(&x0).expect("x0 has length n");
        for (s, vi) in v_red.iter_mut().zip(&self.v) {
            *s = s.add(vi);
        }

        let snf = smith_normal_form(&a_red);
        let r = snf.rank();
        let v2 = snf.q.mul_vec(&v_red).expect("Q is d x d");
        // rows past the rank constrain nothing; their constants must be
        // integral for the polyhedron to be nonempty
        if v2.iter().skip(r).any(|c| !c.is_integral()) {
            return None;
        }

        let big_r = j.cols();
        let disc: Vec<(ValuedScalar, ValuedScalar)> = (0..big_r)
            .map(|i| {
                if i < r {
                    (snf.diagonal_entry(i).clone(), v2[i].clone())
                } else {
                    (self.descriptor.zero(), self.descriptor.zero())
                }
            })
            .collect();

        let composed = j.mul(&snf.p_inv).expect("P^-1 is R x R");
        Some(ReducedForm { x0, composed, disc })
    }

    /// A point of the polyhedron, or None when it is empty.
    pub fn witness(&self) -> Option<Vec<ValuedScalar>> {
        let red = self.reduce()?;
        let z: Vec<ValuedScalar> = red
            .disc
            .iter()
            .map(|(s, c)| {
                if s.is_zero() {
                    self.descriptor.zero()
                } else {
                    c.div(s).expect("nonzero diagonal entry").neg()
                }
            })
            .collect();
        let mut x = red.composed.mul_vec(&z).expect("composed is n x R");
        for (xi, bi) in x.iter_mut().zip(&red.x0) {
            *xi = xi.add(bi);
        }
        debug_assert_eq!(self.contains(&x), Ok(true));
        Some(x)
    }

    pub fn is_empty(&self) -> bool {
        self.witness().is_none()
    }

    /// Every nonempty polyhedron is the image of a polydisc under an
    /// affine map.
    pub fn as_polydisc_image(&self) -> Result<PolydiscImage> {
        let red = self.reduce().ok_or(Error::EmptyPolyhedron)?;
        Ok(PolydiscImage {
            base_point: red.x0,
            map: red.composed,
            disc_constraints: red.disc,
        })
    }

    /// Direct image under an affine map, via equality restriction, SNF
    /// factorization of the linear part, and the immersion / diagonal /
    /// single-coordinate-projection chain.
    pub fn direct_image(&self, f: &AffineMap) -> Result<Polyhedron> {
        if f.domain_dim() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "map domain {} differs from ambient dimension {}",
                f.domain_dim(),
                self.n
            )));
        }
        let m = f.codomain_dim();
        // the projection chain is only valid on nonempty inputs
        let Some(red) = self.reduce() else {
            return Ok(Polyhedron::canonical_empty(&self.descriptor, m));
        };

        // restrict to the equality block: x = x0 + J y
        let x0 = &red.x0;
        let j = self.b.kernel_basis();
        let big_r = j.cols();

        let g_lin = f.f.mul(&j)?;
        let mut h0 = f.f.mul_vec(x0)?;
        for (hi, gi) in h0.iter_mut().zip(&f.g) {
            *hi = hi.add(gi);
        }

        let mut a_cur = self.a.mul(&j)?;
        let mut v_cur = self.a.mul_vec(x0)?;
        for (s, vi) in v_cur.iter_mut().zip(&self.v) {
            *s = s.add(vi);
        }

        // SNF-factor the linear part: Q G P^-1 = diag(delta_1..delta_rho)
        let snf = smith_normal_form(&g_lin);
        let rho = snf.rank();

        // unimodular change of coordinates y -> P y
        a_cur = a_cur.mul(&snf.p_inv)?;

        // drop coordinates rho+1..R one at a time
        let mut dim = big_r;
        while dim > rho {
            let (na, nv) = project_last_coordinate(&a_cur, &v_cur, dim)?;
            a_cur = na;
            v_cur = nv;
            dim -= 1;
        }

        // diagonal scaling z_i -> delta_i z_i
        for i in 0..rho {
            let delta_inv = snf.diagonal_entry(i).inv().expect("nonzero within rank");
            a_cur.scale_col(i, &delta_inv);
        }

        // immersion K^rho -> K^m: pad columns, pin the new coordinates
        let pad = Matrix::zeros(&self.descriptor, a_cur.rows(), m - rho);
        a_cur = a_cur.hstack(&pad)?;
        let mut b_out = Matrix::zeros(&self.descriptor, m - rho, m);
        for i in 0..m - rho {
            b_out.set(i, rho + i, self.descriptor.one());
        }
        let mut w_out = vec![self.descriptor.zero(); m - rho];

        // unimodular map Q^-1 on the codomain
        a_cur = a_cur.mul(&snf.q)?;
        b_out = b_out.mul(&snf.q)?;

        // translate by h0
        let ah = a_cur.mul_vec(&h0)?;
        for (vi, s) in v_cur.iter_mut().zip(&ah) {
            *vi = vi.sub(s);
        }
        let bh = b_out.mul_vec(&h0)?;
        for (wi, s) in w_out.iter_mut().zip(&bh) {
            *wi = wi.sub(s);
        }

        Polyhedron::new(m, a_cur, v_cur, b_out, w_out)
    }

    /// Minkowski sum as the image of the product polyhedron under the
    /// coordinate-sum map.
    pub fn minkowski_sum(&self, other: &Polyhedron) -> Result<Polyhedron> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(
                "Minkowski sum of polyhedra in different ambient spaces".into(),
            ));
        }
        let n = self.n;
        let d = &self.descriptor;
        let zero_a1 = Matrix::zeros(d, self.a.rows(), n);
        let zero_a2 = Matrix::zeros(d, other.a.rows(), n);
        let a_prod = self
            .a
            .hstack(&zero_a1)?
            .vstack(&zero_a2.hstack(&other.a)?)?;
        let zero_b1 = Matrix::zeros(d, self.b.rows(), n);
        let zero_b2 = Matrix::zeros(d, other.b.rows(), n);
        let b_prod = self
            .b
            .hstack(&zero_b1)?
            .vstack(&zero_b2.hstack(&other.b)?)?;
        let mut v_prod = self.v.clone();
        v_prod.extend(other.v.iter().cloned());
        let mut w_prod = self.w.clone();
        w_prod.extend(other.w.iter().cloned());
        let product = Polyhedron::new(2 * n, a_prod, v_prod, b_prod, w_prod)?;

        let eye = Matrix::identity(d, n);
        let sum_map = AffineMap::linear(eye.hstack(&Matrix::identity(d, n))?);
        product.direct_image(&sum_map)
    }

    /// Exact canonical form of a polyhedron in K (ambient dimension 1).
    pub fn canonical_ball_form(&self) -> Result<Ball> {
        if self.n != 1 {
            return Err(Error::DimensionMismatch(
                "canonical ball form requires ambient dimension 1".into(),
            ));
        }
        if self.is_empty() {
            return Ok(Ball::Empty);
        }
        // a nonzero equality row pins the point
        for (i, wi) in self.w.iter().enumerate() {
            let coeff = self.b.get(i, 0);
            if !coeff.is_zero() {
                let center = wi.div(coeff)?.neg();
                return Ok(Ball::Ball {
                    center,
                    radius_valuation: ExtValuation::Infinity,
                });
            }
        }
        // row val(a x + v) >= 0 is the ball of radius valuation -val(a)
        // around -v/a; the intersection of the row balls is the smallest
        // one, the row of minimal coefficient valuation
        let mut best: Option<(ExtValuation, usize)> = None;
        for i in 0..self.a.rows() {
            let coeff = self.a.get(i, 0);
            if coeff.is_zero() {
                continue;
            }
            let cv = coeff.valuation();
            if best.map_or(true, |(bv, _)| cv <= bv) {
                best = Some((cv, i));
            }
        }
        match best {
            None => Ok(Ball::All),
            Some((cv, i)) => {
                let coeff = self.a.get(i, 0);
                let center = self.v[i].div(coeff)?.neg();
                let radius_valuation = match cv {
                    ExtValuation::Finite(k) => ExtValuation::Finite(-k),
                    ExtValuation::Infinity => unreachable!("nonzero coefficient"),
                };
                Ok(Ball::Ball {
                    center,
                    radius_valuation,
                })
            }
        }
    }
}

pub(crate) use project::project_last_coordinate;

mod project {
    use super::*;

    /// One step of the projection chain: the image of the nonempty
    /// inequality-only polyhedron {x in K^dim : A x + v >= 0} under the
    /// map dropping the last coordinate.
    ///
    /// The rows are split through the SNF of the first dim-1 columns
    /// into diagonal rows and rows constraining only x_dim; the latter
    /// are ultrametric balls whose intersection is the smallest of them,
    /// and the two valuation cases of the remaining elimination follow
    /// the shape of that smallest ball.
    pub(crate) fn project_last_coordinate(
        a: &Matrix,
        v: &[ValuedScalar],
        dim: usize,
    ) -> Result<(Matrix, Vec<ValuedScalar>)> {
        assert!(dim >= 1);
        assert_eq!(a.cols(), dim);
        let descriptor = a.descriptor().clone();
        let d = a.rows();
        if d == 0 {
            return Ok((Matrix::zeros(&descriptor, 0, dim - 1), vec![]));
        }

        let a_front = a.columns(0, dim - 1);
        let last_col: Vec<ValuedScalar> = (0..d).map(|i| a.get(i, dim - 1).clone()).collect();
        let snf = smith_normal_form(&a_front);
        let r = snf.rank();
        let abar = snf.q.mul_vec(&last_col)?;
        let vbar = snf.q.mul_vec(v)?;

        // smallest ball among the rows that constrain only the dropped
        // coordinate: a row val(a x + v) >= 0 is a ball of radius
        // valuation -val(a), so minimal val(a_s) wins, ties to the
        // largest row index
        let mut star: Option<(ExtValuation, usize)> = None;
        for s in r..d {
            if abar[s].is_zero() {
                continue;
            }
            let val = abar[s].valuation();
            if star.map_or(true, |(bv, _)| val <= bv) {
                star = Some((val, s));
            }
        }

        let rows_out: Vec<(Vec<(usize, ValuedScalar)>, ValuedScalar)> = match star {
            Some((_, s_star)) => {
                let a_star = &abar[s_star];
                let v_star = &vbar[s_star];
                let b: Vec<ValuedScalar> =
                    (0..r).map(|i| abar[i].div(a_star).expect("a_star nonzero")).collect();
                let c: Vec<ValuedScalar> =
                    (0..r).map(|i| vbar[i].sub(&b[i].mul(v_star))).collect();
                let vmin = b
                    .iter()
                    .map(|bi| bi.valuation())
                    .min()
                    .unwrap_or(ExtValuation::Infinity);
                if vmin >= ExtValuation::Finite(0) {
                    // x_dim stays within the smallest ball, so the
                    // diagonal rows survive with shifted constants
                    (0..r)
                        .map(|i| {
                            (
                                vec![(i, snf.diagonal_entry(i).clone())],
                                c[i].clone(),
                            )
                        })
                        .collect()
                } else {
                    // a coefficient of negative valuation pins x_dim up
                    // to O(1); eliminate through the sharpest row
                    let i1 = (0..r)
                        .find(|&i| b[i].valuation() == vmin)
                        .expect("vmin is attained");
                    let b1_inv = b[i1].inv().expect("minimal valuation is finite");
                    let s1 = snf.diagonal_entry(i1).clone();
                    let mut rows = vec![(
                        vec![(i1, b1_inv.mul(&s1))],
                        b1_inv.mul(&c[i1]),
                    )];
                    for i in 0..r {
                        if i == i1 {
                            continue;
                        }
                        let factor = b[i].mul(&b1_inv);
                        rows.push((
                            vec![
                                (i, snf.diagonal_entry(i).clone()),
                                (i1, factor.mul(&s1).neg()),
                            ],
                            c[i].sub(&factor.mul(&c[i1])),
                        ));
                    }
                    rows
                }
            }
            None => {
                // no pure row constrains x_dim, so it ranges over all of
                // K; eliminate through the smallest diagonal-row ball
                let mut istar: Option<(ExtValuation, usize)> = None;
                for i in 0..r {
                    if abar[i].is_zero() {
                        continue;
                    }
                    let val = abar[i].valuation();
                    if istar.map_or(true, |(bv, _)| val <= bv) {
                        istar = Some((val, i));
                    }
                }
                match istar {
                    None => (0..r)
                        .map(|i| {
                            (
                                vec![(i, snf.diagonal_entry(i).clone())],
                                vbar[i].clone(),
                            )
                        })
                        .collect(),
                    Some((_, istar)) => {
                        let a_star = &abar[istar];
                        let s_star = snf.diagonal_entry(istar).clone();
                        let mut rows = Vec::new();
                        for i in 0..r {
                            if i == istar {
                                continue;
                            }
                            let factor = abar[i].div(a_star).expect("a_star nonzero");
                            rows.push((
                                vec![
                                    (i, snf.diagonal_entry(i).clone()),
                                    (istar, factor.mul(&s_star).neg()),
                                ],
                                vbar[i].sub(&factor.mul(&vbar[istar])),
                            ));
                        }
                        rows
                    }
                }
            }
        };

        // assemble in SNF coordinates, then return to the original ones
        let mut a_out = Matrix::zeros(&descriptor, rows_out.len(), dim - 1);
        let mut v_out = Vec::with_capacity(rows_out.len());
        for (row_idx, (coeffs, cst)) in rows_out.into_iter().enumerate() {
            for (col, coeff) in coeffs {
                a_out.set(row_idx, col, a_out.get(row_idx, col).add(&coeff));
            }
            v_out.push(cst);
        }
        let a_out = a_out.mul(&snf.p)?;
        Ok((a_out, v_out))
    }
}
