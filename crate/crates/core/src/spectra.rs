//! The PSD cone over K, spectrahedron membership, semialgebraic
//! coefficient descriptions, and semidefinite representations of annuli
//! and polyannuli.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::multipoly::MultiPoly;
use crate::oracle::SampleGrid;
use crate::scalar::{ExtValuation, FieldDescriptor, ValuedScalar};
use crate::unipoly::{characteristic_polynomial, newton_polygon};

/// A(x) = A_0 + x_1 A_1 + ... + x_n A_n with general square blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pencil {
    descriptor: FieldDescriptor,
    d: usize,
    n: usize,
    mats: Vec<Matrix>,
}

impl Pencil {
    pub fn new(mats: Vec<Matrix>) -> Result<Self> {
        let first = mats.first().ok_or_else(|| {
            Error::DimensionMismatch("a pencil needs at least the constant matrix".into())
        })?;
        if first.rows() != first.cols() {
            return Err(Error::NonSquare);
        }
        let d = first.rows();
        let descriptor = first.descriptor().clone();
        for m in &mats {
            if m.rows() != d || m.cols() != d || m.descriptor() != &descriptor {
                return Err(Error::DimensionMismatch(
                    "pencil matrices must share shape and field".into(),
                ));
            }
        }
        let n = mats.len() - 1;
        Ok(Pencil {
            descriptor,
            d,
            n,
            mats,
        })
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.descriptor
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn evaluate(&self, x: &[ValuedScalar]) -> Result<Matrix> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for a pencil in {} variables",
                x.len(),
                self.n
            )));
        }
        let mut out = self.mats[0].clone();
        for (xi, mi) in x.iter().zip(&self.mats[1..]) {
            out = out.add(&mi.scale(xi))?;
        }
        Ok(out)
    }

    /// Block-diagonal join; variables are concatenated.
    pub fn block_diag(pencils: &[Pencil]) -> Result<Pencil> {
        let first = pencils
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty pencil list".into()))?;
        let descriptor = first.descriptor.clone();
        let d_total: usize = pencils.iter().map(|p| p.d).sum();
        let n_total: usize = pencils.iter().map(|p| p.n).sum();
        let mut mats = vec![Matrix::zeros(&descriptor, d_total, d_total); n_total + 1];
        let mut row_off = 0;
        let mut var_off = 0;
        for p in pencils {
            for (local, m) in p.mats.iter().enumerate() {
                let target = if local == 0 { 0 } else { var_off + local };
                for i in 0..p.d {
                    for j in 0..p.d {
                        mats[target].set(row_off + i, row_off + j, m.get(i, j).clone());
                    }
                }
            }
            row_off += p.d;
            var_off += p.n;
        }
        Pencil::new(mats)
    }
}

/// PSD over K: all eigenvalue valuations nonnegative, equivalently the
/// characteristic polynomial has integral coefficients.
pub fn is_psd(m: &Matrix) -> Result<bool> {
    let chi = characteristic_polynomial(m)?;
    Ok(chi.is_integral())
}

/// Dual route: the maximal Newton-polygon slope of the characteristic
/// polynomial is <= 0. Must agree with `is_psd` everywhere.
pub fn psd_newton_crosscheck(m: &Matrix) -> Result<bool> {
    let chi = characteristic_polynomial(m)?;
    let np = newton_polygon(&chi)?;
    Ok(np.max_slope().map_or(true, |s| s <= 0.into()))
}

/// Membership in the spectrahedron of a pencil, optionally restricted to
/// an affine section {x : Fx + g = 0}.
pub fn spectrahedron_contains(
    pencil: &Pencil,
    x: &[ValuedScalar],
    section: Option<(&Matrix, &[ValuedScalar])>,
) -> Result<bool> {
    if let Some((f, g)) = section {
        let fx = f.mul_vec(x)?;
        for (row, gi) in fx.iter().zip(g) {
            if !row.add(gi).is_zero() {
                return Ok(false);
            }
        }
    }
    if pencil.degree() == 0 {
        return Ok(true);
    }
    is_psd(&pencil.evaluate(x)?)
}

/// The d non-leading coefficients of det(T I - A(x)) as polynomials in
/// x, lowest degree in T first. The spectrahedron is the set where every
/// one of them has nonnegative valuation.
pub fn semialgebraic_description(pencil: &Pencil) -> Vec<MultiPoly> {
    let d = pencil.degree();
    let n = pencil.ambient_dim();
    let desc = pencil.descriptor();
    if d == 0 {
        return vec![];
    }

    // pencil entries as degree-<=1 polynomials in x
    let entry = |i: usize, j: usize| -> MultiPoly {
        let mut p = MultiPoly::constant(desc, n, pencil.matrices()[0].get(i, j).clone());
        for k in 0..n {
            let var = MultiPoly::variable(desc, n, k);
            p = p.add(&var.scale(pencil.matrices()[k + 1].get(i, j)));
        }
        p
    };
    let a: Vec<Vec<MultiPoly>> = (0..d)
        .map(|i| (0..d).map(|j| entry(i, j)).collect())
        .collect();

    // Faddeev-LeVerrier with polynomial entries; divisions only by the
    // integers 1..d
    let zero = MultiPoly::zero(desc, n);
    let mut aux: Vec<Vec<MultiPoly>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i == j {
                        MultiPoly::constant(desc, n, desc.one())
                    } else {
                        zero.clone()
                    }
                })
                .collect()
        })
        .collect();
    let mut coeffs = vec![zero.clone(); d];
    for k in 1..=d {
        // aux <- A * aux
        let mut next = vec![vec![zero.clone(); d]; d];
        for i in 0..d {
            for j in 0..d {
                let mut acc = zero.clone();
                for l in 0..d {
                    acc = acc.add(&a[i][l].mul(&aux[l][j]));
                }
                next[i][j] = acc;
            }
        }
        aux = next;
        let mut trace = zero.clone();
        for i in 0..d {
            trace = trace.add(&aux[i][i]);
        }
        let inv_k = desc
            .from_integer(k as i64)
            .inv()
            .expect("positive integer in characteristic 0");
        let c = trace.scale(&inv_k).neg();
        for i in 0..d {
            aux[i][i] = aux[i][i].add(&c);
        }
        coeffs[d - k] = c;
    }
    coeffs
}

/// Projection of a spectrahedron: the pencil lives in ambient + height
/// variables, the first `ambient` of which survive the projection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdRepresentation {
    pub pencil: Pencil,
    pub ambient: usize,
    pub height: usize,
}

impl SdRepresentation {
    pub fn new(pencil: Pencil, ambient: usize, height: usize) -> Result<Self> {
        if pencil.ambient_dim() != ambient + height {
            return Err(Error::DimensionMismatch(
                "pencil variable count differs from ambient + height".into(),
            ));
        }
        Ok(SdRepresentation {
            pencil,
            ambient,
            height,
        })
    }

    pub fn degree(&self) -> usize {
        self.pencil.degree()
    }

    /// Membership given an explicit witness for the projected-out block.
    pub fn contains_with_witness(
        &self,
        x: &[ValuedScalar],
        y: &[ValuedScalar],
    ) -> Result<bool> {
        if x.len() != self.ambient || y.len() != self.height {
            return Err(Error::DimensionMismatch(
                "witness shape differs from the representation".into(),
            ));
        }
        let mut full = x.to_vec();
        full.extend(y.iter().cloned());
        is_psd(&self.pencil.evaluate(&full)?)
    }
}

/// {x : a <= val(x) <= b} with integer bounds 1 <= a <= b.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Annulus {
    pub a: i64,
    pub b: i64,
}

impl Annulus {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a < 1 || a > b {
            return Err(Error::InvalidBounds { a, b });
        }
        Ok(Annulus { a, b })
    }

    pub fn contains(&self, x: &ValuedScalar) -> bool {
        match x.valuation() {
            ExtValuation::Finite(v) => self.a <= v && v <= self.b,
            ExtValuation::Infinity => false,
        }
    }
}

/// Height-1 degree-4 representation of the annulus: the pencil
/// diag(pi^-a x, pi^b y, [[pi^-1, -pi^-1 x], [pi^-1 y, -pi^-1]]) is PSD
/// exactly when val x >= a, val y >= -b, and val(xy - 1) >= 2; together
/// these pin a <= val x <= b with witness y = 1/x.
pub fn annulus_sdr(descriptor: &FieldDescriptor, annulus: Annulus) -> SdRepresentation {
    let d = descriptor;
    let pi_inv = d.power_of_uniformizer(-1);
    let mut a0 = Matrix::zeros(d, 4, 4);
    a0.set(2, 2, pi_inv.clone());
    a0.set(3, 3, pi_inv.neg());
    let mut a1 = Matrix::zeros(d, 4, 4);
    a1.set(0, 0, d.power_of_uniformizer(-annulus.a));
    a1.set(2, 3, pi_inv.neg());
    let mut a2 = Matrix::zeros(d, 4, 4);
    a2.set(1, 1, d.power_of_uniformizer(annulus.b));
    a2.set(3, 2, pi_inv.clone());
    let pencil = Pencil::new(vec![a0, a1, a2]).expect("uniform 4x4 blocks");
    SdRepresentation::new(pencil, 1, 1).expect("one variable projected out")
}

/// Block-diagonal assembly over n annuli: height n, degree 4n. Pencil
/// variables are x_1..x_n then y_1..y_n.
pub fn polyannulus_sdr(
    descriptor: &FieldDescriptor,
    annuli: &[Annulus],
) -> Result<SdRepresentation> {
    if annuli.is_empty() {
        return Err(Error::DimensionMismatch("empty annulus list".into()));
    }
    let n = annuli.len();
    let blocks: Vec<Pencil> = annuli
        .iter()
        .map(|&c| annulus_sdr(descriptor, c).pencil)
        .collect();
    // block i uses local variables (x_i, y_i); reorder the joined pencil
    // so all x come before all y
    let joined = Pencil::block_diag(&blocks)?;
    let mut mats = Vec::with_capacity(2 * n + 1);
    mats.push(joined.matrices()[0].clone());
    for i in 0..n {
        mats.push(joined.matrices()[2 * i + 1].clone());
    }
    for i in 0..n {
        mats.push(joined.matrices()[2 * i + 2].clone());
    }
    let pencil = Pencil::new(mats)?;
    SdRepresentation::new(pencil, n, n)
}

/// Membership test for an SDR of a (poly)annulus using the canonical
/// witness y_i = 1/x_i; falls back to sampled witnesses when any x_i is
/// zero.
pub fn annulus_member(sdr: &SdRepresentation, x: &[ValuedScalar]) -> Result<bool> {
    if x.iter().any(|xi| xi.is_zero()) {
        return Ok(false);
    }
    let y: Vec<ValuedScalar> = x.iter().map(|xi| xi.inv().expect("nonzero")).collect();
    sdr.contains_with_witness(x, &y)
}

/// True when the membership predicate differs from every candidate ball
/// B(c, r), c ranging over member samples and r over the radius range,
/// as witnessed on the sample set itself.
pub fn differs_from_every_ball<F>(
    samples: &[ValuedScalar],
    member: F,
    radius_range: std::ops::RangeInclusive<i64>,
) -> bool
where
    F: Fn(&ValuedScalar) -> bool,
{
    let centers: Vec<&ValuedScalar> = samples.iter().filter(|s| member(s)).collect();
    for c in centers {
        for r in radius_range.clone() {
            let ball = |x: &ValuedScalar| x.sub(c).valuation() >= ExtValuation::Finite(r);
            if samples.iter().all(|s| ball(s) == member(s)) {
                return false; // this ball matches everywhere sampled
            }
        }
    }
    true
}

/// Sampled evidence that the annulus is not a single ball: every ball
/// centered at a sampled annulus point disagrees with the annulus
/// somewhere on the grid.
pub fn annulus_is_not_ball_check(
    descriptor: &FieldDescriptor,
    annulus: Annulus,
) -> bool {
    let grid = SampleGrid::default_for(descriptor, annulus.a - 3, annulus.b + 3, 0);
    let samples = grid.sample_scalars();
    differs_from_every_ball(
        &samples,
        |x| annulus.contains(x),
        (annulus.a - 2)..=(annulus.b + 2),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q5() -> FieldDescriptor {
        FieldDescriptor::p_adic(5).unwrap()
    }

    fn q2() -> FieldDescriptor {
        FieldDescriptor::p_adic(2).unwrap()
    }

    fn worked_matrix(d: &FieldDescriptor) -> Matrix {
        let mut m = Matrix::zeros(d, 2, 2);
        m.set(0, 0, d.from_ratio(3, 5).unwrap().add(&d.from_integer(5)));
        m.set(0, 1, d.from_ratio(4, 5).unwrap());
        m.set(1, 0, d.from_ratio(4, 5).unwrap());
        m.set(1, 1, d.from_ratio(-3, 5).unwrap());
        m
    }

    #[test]
    fn psd_with_nonintegral_entries() {
        let d = q5();
        let m = worked_matrix(&d);
        assert!(!m.get(0, 1).is_integral());
        assert_eq!(is_psd(&m), Ok(true));
        assert_eq!(psd_newton_crosscheck(&m), Ok(true));
    }

    #[test]
    fn integral_matrices_are_psd() {
        let d = q5();
        let m = Matrix::from_i64(&d, &[&[7, -2, 0], &[1, 5, 5], &[0, 3, 125]]);
        assert_eq!(is_psd(&m), Ok(true));
    }

    #[test]
    fn scalar_counterexample() {
        let d = q5();
        let mut m = Matrix::zeros(&d, 1, 1);
        m.set(0, 0, d.from_ratio(1, 5).unwrap());
        assert_eq!(is_psd(&m), Ok(false));
        assert_eq!(psd_newton_crosscheck(&m), Ok(false));
    }

    #[test]
    fn newton_crosscheck_mixed_diagonal() {
        let d = q5();
        let mut m = Matrix::zeros(&d, 2, 2);
        m.set(0, 0, d.from_integer(5));
        m.set(1, 1, d.from_ratio(1, 5).unwrap());
        assert_eq!(psd_newton_crosscheck(&m), Ok(false));
        assert_eq!(is_psd(&m), Ok(false));
        assert_eq!(psd_newton_crosscheck(&Matrix::zeros(&d, 3, 3)), Ok(true));
    }

    fn off_diag_pencil(d: &FieldDescriptor) -> Pencil {
        // [[0, x + pi^-1], [x, 0]]
        let mut a0 = Matrix::zeros(d, 2, 2);
        a0.set(0, 1, d.power_of_uniformizer(-1));
        let mut a1 = Matrix::zeros(d, 2, 2);
        a1.set(0, 1, d.one());
        a1.set(1, 0, d.one());
        Pencil::new(vec![a0, a1]).unwrap()
    }

    #[test]
    fn off_diagonal_pencil_membership() {
        let d = q2();
        let p = off_diag_pencil(&d);
        assert_eq!(
            spectrahedron_contains(&p, &[d.from_integer(2)], None),
            Ok(true)
        );
        assert_eq!(
            spectrahedron_contains(&p, &[d.from_integer(1)], None),
            Ok(false)
        );
    }

    #[test]
    fn diagonal_pencil_is_polydisc() {
        let d = q2();
        // diag(x1, x2)
        let a0 = Matrix::zeros(&d, 2, 2);
        let mut a1 = Matrix::zeros(&d, 2, 2);
        a1.set(0, 0, d.one());
        let mut a2 = Matrix::zeros(&d, 2, 2);
        a2.set(1, 1, d.one());
        let p = Pencil::new(vec![a0, a1, a2]).unwrap();
        assert_eq!(
            spectrahedron_contains(&p, &[d.one(), d.zero()], None),
            Ok(true)
        );
        assert_eq!(
            spectrahedron_contains(&p, &[d.from_ratio(1, 2).unwrap(), d.zero()], None),
            Ok(false)
        );
        // the coefficients are the elementary symmetric polynomials
        let coeffs = semialgebraic_description(&p);
        let x1 = MultiPoly::variable(&d, 2, 0);
        let x2 = MultiPoly::variable(&d, 2, 1);
        assert_eq!(coeffs[0], x1.mul(&x2)); // det
        assert_eq!(coeffs[1], x1.add(&x2).neg()); // -trace
    }

    #[test]
    fn affine_section_is_enforced() {
        let d = q2();
        let p = off_diag_pencil(&d);
        let f = Matrix::from_i64(&d, &[&[1]]);
        let g = vec![d.from_integer(-2)];
        // section x = 2
        assert_eq!(
            spectrahedron_contains(&p, &[d.from_integer(2)], Some((&f, &g))),
            Ok(true)
        );
        assert_eq!(
            spectrahedron_contains(&p, &[d.from_integer(4)], Some((&f, &g))),
            Ok(false)
        );
    }

    #[test]
    fn semialgebraic_matches_membership() {
        let d = q2();
        let p = off_diag_pencil(&d);
        let coeffs = semialgebraic_description(&p);
        assert_eq!(coeffs.len(), 2);
        let grid = SampleGrid::default_for(&d, -3, 3, 9);
        for x in grid.sample_scalars() {
            let direct = spectrahedron_contains(&p, &[x.clone()], None).unwrap();
            let via_coeffs = coeffs.iter().all(|c| c.eval(&[x.clone()]).is_integral());
            assert_eq!(direct, via_coeffs);
        }
    }

    #[test]
    fn zero_pencil_description() {
        let d = q2();
        let p = Pencil::new(vec![Matrix::zeros(&d, 3, 3); 2]).unwrap();
        let coeffs = semialgebraic_description(&p);
        assert!(coeffs.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn annulus_sdr_witness() {
        let d = q2();
        let sdr = annulus_sdr(&d, Annulus::new(1, 2).unwrap());
        assert_eq!(sdr.degree(), 4);
        assert_eq!(sdr.height, 1);
        let x = d.from_integer(2);
        let y = d.from_ratio(1, 2).unwrap();
        assert_eq!(sdr.contains_with_witness(&[x.clone()], &[y]), Ok(true));
        assert_eq!(annulus_member(&sdr, &[x]), Ok(true));
        // val 3 > b and val 0 < a lie outside
        assert_eq!(annulus_member(&sdr, &[d.from_integer(8)]), Ok(false));
        assert_eq!(annulus_member(&sdr, &[d.from_integer(1)]), Ok(false));
    }

    #[test]
    fn annulus_sdr_outside_has_no_sampled_witness() {
        let d = q2();
        let sdr = annulus_sdr(&d, Annulus::new(1, 2).unwrap());
        let grid = SampleGrid::default_for(&d, -4, 4, 5);
        for x in [d.from_integer(8), d.from_integer(1)] {
            for y in grid.sample_scalars() {
                assert_eq!(sdr.contains_with_witness(&[x.clone()], &[y]), Ok(false));
            }
        }
    }

    #[test]
    fn invalid_annulus_bounds() {
        assert!(Annulus::new(2, 1).is_err());
        assert!(Annulus::new(0, 3).is_err());
    }

    #[test]
    fn polyannulus_shape_and_membership() {
        let d = q2();
        let annuli = [Annulus::new(1, 1).unwrap(), Annulus::new(1, 2).unwrap()];
        let sdr = polyannulus_sdr(&d, &annuli).unwrap();
        assert_eq!(sdr.degree(), 8);
        assert_eq!(sdr.height, 2);
        let x = vec![d.from_integer(2), d.from_integer(4)];
        let y = vec![d.from_ratio(1, 2).unwrap(), d.from_ratio(1, 4).unwrap()];
        assert_eq!(sdr.contains_with_witness(&x, &y), Ok(true));
        assert_eq!(annulus_member(&sdr, &x), Ok(true));
        assert_eq!(
            annulus_member(&sdr, &[d.from_integer(2), d.from_integer(8)]),
            Ok(false)
        );
        // n = 3: height 3, degree 12
        let three = [Annulus::new(1, 1).unwrap(); 3];
        let sdr3 = polyannulus_sdr(&d, &three).unwrap();
        assert_eq!(sdr3.degree(), 12);
        assert_eq!(sdr3.height, 3);
    }

    #[test]
    fn annulus_differs_from_balls() {
        let d = q2();
        assert!(annulus_is_not_ball_check(&d, Annulus::new(1, 2).unwrap()));
        // sphere case: needs at least two nonzero residue classes, so p = 3
        let d3 = FieldDescriptor::p_adic(3).unwrap();
        assert!(annulus_is_not_ball_check(&d3, Annulus::new(2, 2).unwrap()));
        // control: a ball does equal itself on the same sampler
        let grid = SampleGrid::default_for(&d, -2, 4, 0);
        let samples = grid.sample_scalars();
        let not_ball = differs_from_every_ball(
            &samples,
            |x| x.valuation() >= ExtValuation::Finite(1),
            -1..=3,
        );
        assert!(!not_ball);
    }
}
