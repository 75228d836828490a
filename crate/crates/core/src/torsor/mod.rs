//! Universal torsor data and exact enumeration of `M_C(B)`.

mod enumerate;
mod spec;

use num_rational::Ratio;

pub use enumerate::{
    class_tuples, enumerate_m, fold_points, normalize_count, psi_multiset, torsor_count, unit_reduction_valid, ClassSetup, Leaf,
    Mode, TorsorCount, TorsorPoint,
};
pub use spec::{build_torsor_spec, calibrate_psi_signs, HeightCondition, Term, TorsorSpec};

use crate::error::Result;
use crate::qfield::FieldCtx;
use crate::surfaces::SurfaceId;

/// `N_{U,H}(B)` through the torsor, unit-reduced whenever that is valid.
pub fn count(k: &FieldCtx, s: SurfaceId, bound: Ratio<i128>) -> Result<TorsorCount> {
    let spec = build_torsor_spec(s)?;
    let mode = if unit_reduction_valid(&spec) { Mode::UnitReduced } else { Mode::Full };
    torsor_count(k, &spec, bound, mode)
}
