//! Exact-arithmetic models of the moduli space of rank-2 parabolic bundles
//! over a 2-punctured elliptic curve.
//!
//! The crate is organised in layers:
//!
//! * [`scalar`], [`poly`], [`ratfunc`], [`matrix`], [`roots`] — the exact
//!   computational substrate: arbitrary-precision rationals, sparse
//!   multivariate polynomials, rational functions, fraction-free linear
//!   algebra and rational root extraction.
//! * [`projective`] — projective points, Möbius maps, plane and biprojective
//!   curves, rational maps between `P²` and `P¹×P¹`, tangency and
//!   contraction detection.
//! * [`elliptic`] — arithmetic on the curve `y² = x(x−1)(x−λ)`: chord
//!   involutions, the group law, 2-torsion translations and the induced
//!   Möbius maps on the `x`-line.
//! * [`stability`] — the finite symbolic catalog of parabolic bundles and the
//!   weight-chamber classification.
//! * [`moduli`] — the concrete geometric catalog: the five special points,
//!   the sixteen special curves, the branch curve `Γ`, the cubic `Σ`, the
//!   2:1 covering map, its involutions, and the reconstruction of `(λ, t)`
//!   from a bidegree-(2,2) curve.
//! * [`verify`] — the named certificate suite over all of the above.
//! * [`jsonio`] — the JSON wire formats used by the CLI.

pub mod elliptic;
pub mod jsonio;
pub mod matrix;
pub mod moduli;
pub mod poly;
pub mod projective;
pub mod ratfunc;
pub mod roots;
pub mod scalar;
pub mod stability;
pub mod verify;

pub use scalar::ExactScalar;
pub use poly::MultiPoly;
pub use ratfunc::RatFunc;
pub use matrix::ExactMatrix;
