//! Valuation linear programming: minimize val<c,x> subject to
//! Ax + b >= 0 (coordinatewise valuation) and Dx = e, solved exactly by
//! equality elimination, SNF diagonalization, and the closed form for
//! diagonal instances.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::polyhedron::{AffineMap, Polyhedron};
use crate::scalar::{ExtValuation, FieldDescriptor, ValuedScalar};
use crate::snf::smith_normal_form;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpInstance {
    descriptor: FieldDescriptor,
    pub a: Matrix,
    pub b: Vec<ValuedScalar>,
    pub c: Vec<ValuedScalar>,
    pub d_eq: Matrix,
    pub e: Vec<ValuedScalar>,
    pub sense: Sense,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Feasible {
        point: Vec<ValuedScalar>,
        value: ExtValuation,
    },
}

impl LpInstance {
    pub fn new(
        a: Matrix,
        b: Vec<ValuedScalar>,
        c: Vec<ValuedScalar>,
        d_eq: Matrix,
        e: Vec<ValuedScalar>,
        sense: Sense,
    ) -> Result<Self> {
        let descriptor = a.descriptor().clone();
        let n = c.len();
        if (a.rows() > 0 && a.cols() != n) || (d_eq.rows() > 0 && d_eq.cols() != n) {
            return Err(Error::DimensionMismatch(
                "constraint matrices do not match the cost vector length".into(),
            ));
        }
        if b.len() != a.rows() || e.len() != d_eq.rows() {
            return Err(Error::DimensionMismatch(
                "constant block length differs from row count".into(),
            ));
        }
        let a = if a.rows() == 0 { Matrix::zeros(&descriptor, 0, n) } else { a };
        let d_eq = if d_eq.rows() == 0 { Matrix::zeros(&descriptor, 0, n) } else { d_eq };
        Ok(LpInstance {
            descriptor,
            a,
            b,
            c,
            d_eq,
            e,
            sense,
        })
    }

    pub fn without_equalities(
        a: Matrix,
        b: Vec<ValuedScalar>,
        c: Vec<ValuedScalar>,
        sense: Sense,
    ) -> Result<Self> {
        let n = c.len();
        let d = a.descriptor().clone();
        LpInstance::new(a, b, c, Matrix::zeros(&d, 0, n), vec![], sense)
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.descriptor
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    /// {x : Ax + b >= 0, Dx = e}.
    pub fn feasible_polyhedron(&self) -> Polyhedron {
        let w: Vec<ValuedScalar> = self.e.iter().map(|ei| ei.neg()).collect();
        Polyhedron::new(
            self.n(),
            self.a.clone(),
            self.b.clone(),
            self.d_eq.clone(),
            w,
        )
        .expect("instance dimensions validated at construction")
    }

    pub fn objective_valuation(&self, x: &[ValuedScalar]) -> Result<ExtValuation> {
        Ok(inner(&self.descriptor, &self.c, x)?.valuation())
    }
}

fn inner(d: &FieldDescriptor, c: &[ValuedScalar], x: &[ValuedScalar]) -> Result<ValuedScalar> {
    if c.len() != x.len() {
        return Err(Error::DimensionMismatch(
            "inner product of vectors of different lengths".into(),
        ));
    }
    let mut acc = d.zero();
    for (ci, xi) in c.iter().zip(x) {
        acc = acc.add(&ci.mul(xi));
    }
    Ok(acc)
}

/// Eliminate Dx = e: the reduced instance lives in ker D coordinates and
/// the back-map is y |-> x0 + J y. The reduced cost is J^T c; the
/// constant objective offset <c, x0> is NOT folded into the reduced
/// instance, so reduced optimal values differ from the original ones by
/// that additive constant whenever it is nonzero. The full solver
/// accounts for it separately.
pub fn reduce_equalities(instance: &LpInstance) -> Result<(LpInstance, AffineMap)> {
    let x0 = instance
        .d_eq
        .solve_affine(&instance.e)?
        .ok_or(Error::InconsistentEqualities)?;
    let j = instance.d_eq.kernel_basis();
    let a_red = instance.a.mul(&j)?;
    let mut b_red = instance.a.mul_vec(&x0)?;
    for (s, bi) in b_red.iter_mut().zip(&instance.b) {
        *s = s.add(bi);
    }
    let c_red = j.transpose().mul_vec(&instance.c)?;
    let reduced = LpInstance::without_equalities(a_red, b_red, c_red, instance.sense)?;
    let back = AffineMap::new(j, x0)?;
    Ok((reduced, back))
}

/// Instance with an SNF-shaped constraint matrix diag(s_1..s_r, 0).
#[derive(Debug, Clone)]
pub struct DiagonalLp {
    descriptor: FieldDescriptor,
    /// Nonzero diagonal entries s_1, ..., s_r.
    pub diag: Vec<ValuedScalar>,
    /// Number of variables.
    pub n: usize,
    /// Constants, one per constraint row (rows past r are pure).
    pub b: Vec<ValuedScalar>,
    pub c: Vec<ValuedScalar>,
    pub sense: Sense,
}

/// SNF-diagonalize an equality-free instance: S = Q A P^-1, b' = Q b,
/// c' = (P^-1)^T c, back-map y |-> P^-1 y.
pub fn diagonalize_lp(instance: &LpInstance) -> Result<(DiagonalLp, AffineMap)> {
    if instance.d_eq.rows() != 0 {
        return Err(Error::DimensionMismatch(
            "diagonalization requires an equality-free instance".into(),
        ));
    }
    let snf = smith_normal_form(&instance.a);
    let b2 = snf.q.mul_vec(&instance.b)?;
    let c2 = snf.p_inv.transpose().mul_vec(&instance.c)?;
    let diag = (0..snf.rank())
        .map(|i| snf.diagonal_entry(i).clone())
        .collect();
    let out = DiagonalLp {
        descriptor: instance.descriptor.clone(),
        diag,
        n: instance.n(),
        b: b2,
        c: c2,
        sense: instance.sense,
    };
    let back = AffineMap::linear(snf.p_inv);
    Ok((out, back))
}

/// Closed-form solve for the diagonal case. `offset` is a constant added
/// to the objective (zero for a standalone diagonal instance). Also
/// returns, for a minimization declared Unbounded, a feasible point with
/// objective valuation -10 built along a free-coordinate ray.
fn solve_diagonal_core(
    lp: &DiagonalLp,
    offset: &ValuedScalar,
) -> (LpOutcome, Option<Vec<ValuedScalar>>) {
    let d = &lp.descriptor;
    let r = lp.diag.len();

    // rows past the rank constrain nothing; their constants decide
    // feasibility
    if lp.b.iter().skip(r).any(|bi| !bi.is_integral()) {
        return (LpOutcome::Infeasible, None);
    }

    let mut center: Vec<ValuedScalar> = Vec::with_capacity(lp.n);
    for i in 0..lp.n {
        if i < r {
            center.push(lp.b[i].div(&lp.diag[i]).expect("nonzero diagonal").neg());
        } else {
            center.push(d.zero());
        }
    }

    // a nonzero cost on a free coordinate makes the objective surjective
    if let Some(i) = (r..lp.n).find(|&i| !lp.c[i].is_zero()) {
        let lambda_tot = offset.add(&inner(d, &lp.c, &center).expect("matching lengths"));
        let ray = if lp.sense == Sense::Min {
            let mut y = center;
            let target = lambda_tot.add(&d.power_of_uniformizer(-10)).neg();
            y[i] = target.div(&lp.c[i]).expect("nonzero cost entry");
            Some(y)
        } else {
            None
        };
        return (LpOutcome::Unbounded, ray);
    }

    // objective image is lambda + pi^v O_K
    let lambda_tot = offset.add(&inner(d, &lp.c, &center).expect("matching lengths"));
    let v = (0..r)
        .map(|i| lp.c[i].div(&lp.diag[i]).expect("nonzero diagonal").valuation())
        .min()
        .unwrap_or(ExtValuation::Infinity);
    let val_lambda = lambda_tot.valuation();

    if v == ExtValuation::Infinity {
        // objective is constant on the feasible set
        return (
            LpOutcome::Feasible {
                point: center,
                value: val_lambda,
            },
            None,
        );
    }

    if val_lambda < v {
        return match lp.sense {
            Sense::Min => (
                // every feasible point has objective valuation val lambda
                LpOutcome::Feasible {
                    point: center,
                    value: val_lambda,
                },
                None,
            ),
            Sense::Max => (LpOutcome::Unbounded, None),
        };
    }

    // optimum v, attained at the smallest index realizing it
    let j = (0..r)
        .find(|&i| {
            lp.c[i].div(&lp.diag[i]).expect("nonzero diagonal").valuation() == v
        })
        .expect("v is attained");
    let point = if val_lambda == v {
        center
    } else {
        // shift coordinate j off the center by one unit so the objective
        // picks up c_j/s_j exactly
        let mut y = center;
        y[j] = lp.b[j].neg().add(&d.one()).div(&lp.diag[j]).expect("nonzero diagonal");
        y
    };
    (LpOutcome::Feasible { point, value: v }, None)
}

pub fn solve_diagonal_lp(lp: &DiagonalLp) -> LpOutcome {
    solve_diagonal_core(lp, &lp.descriptor.zero()).0
}

fn solve_full(instance: &LpInstance) -> Result<(LpOutcome, Option<Vec<ValuedScalar>>)> {
    let (reduced, back1) = match reduce_equalities(instance) {
        Ok(pair) => pair,
        Err(Error::InconsistentEqualities) => return Ok((LpOutcome::Infeasible, None)),
        Err(e) => return Err(e),
    };
    // constant objective offset from the particular equality solution
    let gamma = inner(&instance.descriptor, &instance.c, &back1.g)?;
    let (diag, back2) = diagonalize_lp(&reduced)?;
    let (outcome, ray) = solve_diagonal_core(&diag, &gamma);

    let map_back = |y: &[ValuedScalar]| -> Result<Vec<ValuedScalar>> {
        back1.apply(&back2.apply(y)?)
    };
    let outcome = match outcome {
        LpOutcome::Feasible { point, value } => {
            let x = map_back(&point)?;
            debug_assert_eq!(instance.objective_valuation(&x), Ok(value));
            debug_assert_eq!(instance.feasible_polyhedron().contains(&x), Ok(true));
            LpOutcome::Feasible { point: x, value }
        }
        other => other,
    };
    let ray = match ray {
        Some(y) => Some(map_back(&y)?),
        None => None,
    };
    Ok((outcome, ray))
}

pub fn solve_lp(instance: &LpInstance) -> Result<LpOutcome> {
    Ok(solve_full(instance)?.0)
}

/// For a minimization that is Unbounded, a feasible point whose
/// objective valuation is -10.
pub fn unbounded_certificate(instance: &LpInstance) -> Result<Option<Vec<ValuedScalar>>> {
    Ok(solve_full(instance)?.1)
}
