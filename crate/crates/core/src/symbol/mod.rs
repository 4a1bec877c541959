//! Trigonometric polynomials, coefficients, symbol expressions, monotone
//! rearrangement and moduli of continuity.

mod coefficient;
mod expr;
pub mod json;
mod moduli;
mod rearrangement;
mod trig;

pub use coefficient::{coefficient_preset, Coefficient, Regularity, PRESET_NAMES};
pub use expr::{SymbolExpr, DIVISION_GUARD};
pub use moduli::{modulus_of_continuity, modulus_of_integral_continuity, modulus_upper_bound};
pub use rearrangement::{monotone_rearrangement, Rearrangement, Rect};
pub use trig::TrigPoly;
