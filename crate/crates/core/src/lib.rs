pub mod constants;
pub mod enumeration;
pub mod error;
pub mod height;
pub mod qfield;
pub mod surfaces;
pub mod torsor;

pub use error::{Error, Result};
pub use height::{PointKey, ProjPoint};
pub use qfield::{Element, FieldCtx, FieldElem, FracIdeal, Ideal};
pub use surfaces::{Line, SurfaceId, SurfaceSpec};
