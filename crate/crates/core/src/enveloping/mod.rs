//! The universal enveloping algebra, the Duflo map, and the
//! Chevalley-Eilenberg complex with `U(g)` coefficients.

mod ce;
mod duflo;
mod pbw;

pub use ce::{ce_differential, cup_ce, CeCochain};
pub use duflo::{
    duflo_extension, duflo_map, duflo_truncation, log_sinhc_coefficients, star_product,
    DufloMap, DufloTruncation,
};
pub use pbw::{
    monomial_word, pbw_product, symmetrization, symmetrization_inverse, Enveloping, PbwElement,
};
