//! Exact arithmetic and geometry over discretely valued fields: p-adic
//! and Laurent-series scalars, Smith Normal Form over the valuation
//! ring, polyhedra and their direct images, valuation linear programs,
//! and semidefinite structure (PSD cone, spectrahedra, annulus
//! representations).

pub mod error;
pub mod json;
pub mod linprog;
pub mod matrix;
pub mod multipoly;
pub mod oracle;
pub mod polyhedron;
pub mod scalar;
pub mod snf;
pub mod spectra;
pub mod unipoly;

pub use error::{Error, Result};
pub use linprog::{
    diagonalize_lp, reduce_equalities, solve_diagonal_lp, solve_lp, unbounded_certificate,
    DiagonalLp, LpInstance, LpOutcome, Sense,
};
pub use matrix::Matrix;
pub use multipoly::MultiPoly;
pub use oracle::{
    lp_oracle_via_image, lp_sampled_optimum, sample_polyhedron_points, LpOracleVerdict,
    SampleGrid,
};
pub use polyhedron::{AffineMap, Ball, PolydiscImage, Polyhedron};
pub use scalar::{ExtValuation, FieldDescriptor, FieldKind, ValuedScalar};
pub use snf::{smith_normal_form, snf_invariants_by_minors, SnfDecomposition};
pub use spectra::{
    annulus_is_not_ball_check, annulus_member, annulus_sdr, is_psd, polyannulus_sdr,
    psd_newton_crosscheck, semialgebraic_description, spectrahedron_contains, Annulus, Pencil,
    SdRepresentation,
};
pub use unipoly::{characteristic_polynomial, newton_polygon, NewtonPolygon, UniPolynomial};
