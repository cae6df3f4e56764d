//! Exact arithmetic for tight full-correlation Bell inequalities.

pub mod delta;
pub mod enumerate;
pub mod error;
pub mod family;
pub mod fixtures;
pub mod polytope;
pub mod rank;
pub mod reduce;
pub mod scenario;
pub mod sign;
pub mod symmetry;
pub mod tensor;

pub use delta::{delta, reconstruct_sign, DeltaPoly, Var};
pub use enumerate::{enumerate_three_party, enumerate_two_party, Budget, Catalog, InequalityRecord};
pub use error::{BellError, Result};
pub use family::{classify_delta, DeltaFamily, FamilyId};
pub use polytope::{lhs_extremes, lr_vertices, tightness, LRVertex, TightnessCertificate};
pub use reduce::identify_settings;
pub use scenario::{Assignment, Dyadic, Scenario};
pub use sign::{coefficients_from_sign, SignTable};
pub use symmetry::{canonical_form, LocalSymmetry};
pub use tensor::{CoeffTensor, NormConditions};
