//! Arithmetic in an imaginary quadratic field and its ring of integers.

pub mod classgroup;
mod element;
mod field;
mod ideal;
pub mod lattice;
pub mod primes;

pub(crate) use element::gcd;
pub use element::{Element, FieldElem};
pub use field::{is_squarefree, FieldCtx, MAX_ABS_DISC};
pub use ideal::{FracIdeal, Ideal};
pub use primes::{prime_ideals_up_to, PrimeIdl, Splitting};
