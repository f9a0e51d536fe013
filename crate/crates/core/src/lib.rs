//! Exact computations on curves of bidegree (k,k) on the quadric P¹×P¹:
//! smoothness certificates, Čech cohomology of line bundles restricted to the
//! curve, torsion of the difference of the two rulings' pencils, grid-family
//! membership, grilled-type tests, and intersection numbers on the second
//! symmetric product.

pub mod bipoly;
pub mod cech;
pub mod error;
pub mod families;
pub mod field;
pub mod linalg;
pub mod parse;
pub mod smooth;
pub mod symprod;
pub mod torsion;
pub mod upoly;

pub use bipoly::{BiForm, TorusAuto};
pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use smooth::{CurveContext, SmoothVerdict};
