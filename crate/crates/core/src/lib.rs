//! Exact computations around rational `T^2`-equivariant elliptic cohomology.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`]: characters, directions and finite subgroups of the torus;
//!   Euler-class polynomials and inflation components.
//! * [`series`]: truncated exact-rational power series in one or more variables.
//! * [`formal_group`]: the Weierstrass formal group law, its logarithm and
//!   the coordinates `t_{d,j}`, `t̂_{d,j}`.
//! * [`torsion`]: torsion-point model of `E×E`, the loci `𝔛(H)` and `bvar(F)`,
//!   Abel's criterion and divisor intersections.
//! * [`cohomology`]: divisors of representations, cohomology triples and the
//!   values on representation spheres.
//! * [`cousin`]: the truncated local model of the Cousin complex at the origin.
//! * [`verify`]: the property checks shared by the command-line `selftest`
//!   and the acceptance suite.
//!
//! All arithmetic is exact; nothing in the crate uses floating point.

pub mod cohomology;
pub mod cousin;
pub mod error;
pub mod formal_group;
pub mod lattice;
pub mod linalg;
pub mod number;
pub mod oracle;
pub mod series;
pub mod torsion;
pub mod verify;

pub use cohomology::{
    cohomology_triple, divisor_of_rep, kunneth_oracle, theory_value, CohomologyTriple,
    Representation, Sign, TheoryValue,
};
pub use cousin::{ExactnessReport, H1Class, H2Class, KLocal, Window};
pub use error::{Error, Result};
pub use formal_group::{Curve, FormalGroup};
pub use lattice::{
    decompose_character, n_index, normalize_direction, parse_direction_list, solve_character_eq,
    splitting_pair, subgroup_from_generators, Character, CodimOneSubgroup, Direction,
    EulerPolynomial, FiniteSubgroup, FiniteSubgroupProfile,
};
pub use number::{Frac, Q};
pub use series::{BiSeries, LaurentTail, MvSeries, TriSeries, UniSeries};
pub use torsion::{EllipticDivisor, SurfaceTorsionPoint, TorsionPoint, XDivisor};
