//! Independent brute-force oracles: deterministic scalar grids, sampled
//! polyhedron points, and two cross-checks for the LP solver (an exact
//! route through the direct image of the objective, and a sampled upper
//! bound on the optimal valuation).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linprog::LpInstance;
use crate::polyhedron::{AffineMap, Ball, Polyhedron};
use crate::scalar::{ExtValuation, FieldDescriptor, FieldKind, ValuedScalar};

pub use crate::snf::snf_invariants_by_minors;

/// Deterministic scalar pool: 0 together with u * pi^k for pool units u
/// and k in [k_min, k_max], emitted in a fixed order.
#[derive(Debug, Clone)]
pub struct SampleGrid {
    pub descriptor: FieldDescriptor,
    pub units: Vec<i64>,
    pub k_min: i64,
    pub k_max: i64,
    pub seed: u64,
}

impl SampleGrid {
    pub fn new(descriptor: &FieldDescriptor, units: Vec<i64>, k_min: i64, k_max: i64, seed: u64) -> Self {
        assert!(k_min <= k_max);
        assert!(units.iter().all(|&u| {
            u != 0
                && match descriptor.kind() {
                    FieldKind::PAdic(p) => u.unsigned_abs() % p != 0,
                    FieldKind::Laurent(_) => true,
                }
        }));
        SampleGrid {
            descriptor: descriptor.clone(),
            units,
            k_min,
            k_max,
            seed,
        }
    }

    /// Small integers coprime to p (all small integers in the Laurent
    /// case, where nonzero constants are units).
    pub fn default_for(descriptor: &FieldDescriptor, k_min: i64, k_max: i64, seed: u64) -> Self {
        let units = (1..=7)
            .filter(|&u| match descriptor.kind() {
                FieldKind::PAdic(p) => (u as u64) % p != 0,
                FieldKind::Laurent(_) => true,
            })
            .collect();
        SampleGrid::new(descriptor, units, k_min, k_max, seed)
    }

    /// 0, then u * pi^k by ascending k, units in pool order.
    pub fn sample_scalars(&self) -> Vec<ValuedScalar> {
        let mut out = vec![self.descriptor.zero()];
        for k in self.k_min..=self.k_max {
            let power = self.descriptor.power_of_uniformizer(k);
            for &u in &self.units {
                out.push(self.descriptor.from_integer(u).mul(&power));
            }
        }
        out
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// One grid element chosen at random (zero included).
    pub fn random_scalar(&self, rng: &mut ChaCha8Rng) -> ValuedScalar {
        if rng.gen_range(0..8) == 0 {
            return self.descriptor.zero();
        }
        let u = self.units[rng.gen_range(0..self.units.len())];
        let k = rng.gen_range(self.k_min..=self.k_max);
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        self.descriptor
            .from_integer(sign * u)
            .mul(&self.descriptor.power_of_uniformizer(k))
    }

    /// Random integral grid element (valuation >= 0).
    pub fn random_integral(&self, rng: &mut ChaCha8Rng) -> ValuedScalar {
        if rng.gen_range(0..8) == 0 {
            return self.descriptor.zero();
        }
        let u = self.units[rng.gen_range(0..self.units.len())];
        let k = rng.gen_range(self.k_min.max(0)..=self.k_max.max(0));
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        self.descriptor
            .from_integer(sign * u)
            .mul(&self.descriptor.power_of_uniformizer(k))
    }
}

/// Sampled points of a nonempty polyhedron, via its polydisc
/// parametrization: the disc center first, then single-coordinate unit
/// offsets, then random disc points. Empty input yields no points.
pub fn sample_polyhedron_points(
    p: &Polyhedron,
    grid: &SampleGrid,
    count: usize,
) -> Vec<Vec<ValuedScalar>> {
    let Ok(img) = p.as_polydisc_image() else {
        return vec![];
    };
    let dim = img.disc_dim();
    let center = img.disc_center();
    let mut disc_points = vec![center.clone()];

    // one unit offset per coordinate keeps the point in the disc: the
    // constrained coordinates move by 1/s_i, the free ones by 1
    for i in 0..dim {
        let mut z = center.clone();
        let (s, _) = &img.disc_constraints[i];
        let step = if s.is_zero() {
            grid.descriptor.one()
        } else {
            s.inv().expect("nonzero diagonal entry")
        };
        z[i] = z[i].add(&step);
        disc_points.push(z);
    }

    let mut rng = grid.rng();
    while disc_points.len() < count.max(dim + 1) {
        let z: Vec<ValuedScalar> = (0..dim)
            .map(|i| {
                let (s, _) = &img.disc_constraints[i];
                if s.is_zero() {
                    grid.random_scalar(&mut rng)
                } else {
                    center[i].add(
                        &grid
                            .random_integral(&mut rng)
                            .div(s)
                            .expect("nonzero diagonal entry"),
                    )
                }
            })
            .collect();
        disc_points.push(z);
    }

    disc_points
        .into_iter()
        .map(|z| {
            let x = img.apply(&z).expect("disc dimension matches");
            debug_assert_eq!(p.contains(&x), Ok(true));
            x
        })
        .collect()
}

/// Exact LP cross-check (minimization): the image of the feasible set
/// under x |-> <c,x> is a one-dimensional polyhedron, and the optimal
/// valuation reads off its canonical ball form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOracleVerdict {
    Infeasible,
    Unbounded,
    Value(ExtValuation),
}

pub fn lp_oracle_via_image(instance: &LpInstance) -> crate::error::Result<LpOracleVerdict> {
    let feasible = instance.feasible_polyhedron();
    let d = instance.descriptor().clone();
    let row = crate::matrix::Matrix::from_rows(&d, vec![instance.c.clone()])?;
    let image = feasible.direct_image(&AffineMap::linear(row))?;
    Ok(match image.canonical_ball_form()? {
        Ball::Empty => LpOracleVerdict::Infeasible,
        Ball::All => LpOracleVerdict::Unbounded,
        Ball::Ball {
            center,
            radius_valuation,
        } => LpOracleVerdict::Value(center.valuation().min(radius_valuation)),
    })
}

/// Minimum objective valuation over sampled feasible points; an upper
/// bound on the true optimum, exact when the grid covers the attaining
/// offsets (the center and the single-coordinate unit offsets always do
/// for bounded instances).
pub fn lp_sampled_optimum(instance: &LpInstance, grid: &SampleGrid, count: usize) -> ExtValuation {
    let feasible = instance.feasible_polyhedron();
    sample_polyhedron_points(&feasible, grid, count)
        .iter()
        .map(|x| {
            instance
                .objective_valuation(x)
                .expect("sampled point has ambient length")
        })
        .min()
        .unwrap_or(ExtValuation::Infinity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linprog::{solve_lp, LpOutcome, Sense};
    use crate::matrix::Matrix;

    fn q2() -> FieldDescriptor {
        FieldDescriptor::p_adic(2).unwrap()
    }

    #[test]
    fn grid_enumeration_order() {
        let d = q2();
        let grid = SampleGrid::new(&d, vec![1, 3], 0, 1, 0);
        let scalars = grid.sample_scalars();
        let expect: Vec<ValuedScalar> =
            [0, 1, 3, 2, 6].iter().map(|&k| d.from_integer(k)).collect();
        assert_eq!(scalars, expect);
    }

    #[test]
    fn grid_valuation_range() {
        let d = q2();
        let grid = SampleGrid::default_for(&d, -2, 3, 7);
        for s in grid.sample_scalars() {
            if let ExtValuation::Finite(v) = s.valuation() {
                assert!((-2..=3).contains(&v));
            }
        }
    }

    #[test]
    fn grid_determinism() {
        let d = q2();
        let grid = SampleGrid::default_for(&d, -2, 2, 42);
        let mut r1 = grid.rng();
        let mut r2 = grid.rng();
        for _ in 0..50 {
            assert_eq!(grid.random_scalar(&mut r1), grid.random_scalar(&mut r2));
        }
    }

    #[test]
    fn sampled_points_are_members() {
        let d = q2();
        let p = Polyhedron::unit_polydisc(&d, 2);
        let grid = SampleGrid::default_for(&d, -3, 3, 1);
        let pts = sample_polyhedron_points(&p, &grid, 30);
        assert!(pts.len() >= 30);
        for x in &pts {
            assert_eq!(p.contains(x), Ok(true));
        }
    }

    #[test]
    fn image_oracle_matches_solver() {
        let d = q2();
        // feasible set -1/2 + (1/2) O_K, objective val(x): optimum -1
        let inst = LpInstance::without_equalities(
            Matrix::from_i64(&d, &[&[2]]),
            vec![d.one()],
            vec![d.one()],
            Sense::Min,
        )
        .unwrap();
        assert_eq!(
            lp_oracle_via_image(&inst).unwrap(),
            LpOracleVerdict::Value(ExtValuation::Finite(-1))
        );
        match solve_lp(&inst).unwrap() {
            LpOutcome::Feasible { value, .. } => assert_eq!(value, ExtValuation::Finite(-1)),
            other => panic!("expected Feasible, got {other:?}"),
        }
    }

    #[test]
    fn sampled_optimum_boundary_instance() {
        let d = q2();
        let inst = LpInstance::without_equalities(
            Matrix::from_i64(&d, &[&[2]]),
            vec![d.one()],
            vec![d.one()],
            Sense::Min,
        )
        .unwrap();
        let grid = SampleGrid::default_for(&d, -5, 5, 3);
        assert_eq!(
            lp_sampled_optimum(&inst, &grid, 50),
            ExtValuation::Finite(-1)
        );
    }

    #[test]
    fn sampled_optimum_degenerate_cases() {
        let d = q2();
        // infeasible
        let inf = LpInstance::without_equalities(
            Matrix::from_i64(&d, &[&[0]]),
            vec![d.from_ratio(1, 2).unwrap()],
            vec![d.one()],
            Sense::Min,
        )
        .unwrap();
        let grid = SampleGrid::default_for(&d, -5, 5, 3);
        assert_eq!(lp_sampled_optimum(&inf, &grid, 20), ExtValuation::Infinity);
        // zero cost
        let zero = LpInstance::without_equalities(
            Matrix::from_i64(&d, &[&[1]]),
            vec![d.zero()],
            vec![d.zero()],
            Sense::Min,
        )
        .unwrap();
        assert_eq!(lp_sampled_optimum(&zero, &grid, 20), ExtValuation::Infinity);
    }
}
