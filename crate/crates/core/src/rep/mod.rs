//! The representation `π` of `B3` and its restriction `φ` to `P3`.

mod build;
mod params;
mod word;

use thiserror::Error;

use crate::linalg::LinalgError;

pub use build::{
    build_general, build_specialized, entry_symbols, images, pure_braid_images, pure_closed_form,
    sigma_closed_form, sigma_images, verify_relations, EntrySymbols, Images, RelationReport,
    CLOSED_FORM_TOL, RELATION_TOL,
};
pub use params::{random_valid_params, ARSpecialization, BetaChoice, GeneralARParams, GENERAL_TOL};
pub use word::{
    evaluate_word, parse_braid_word, BraidWord, Generator, Letter, ParseError, ParseErrorKind,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RepError {
    #[error("{0}")]
    Domain(String),
    #[error("constraint {constraint} violated (residual {residual:e})")]
    Constraint { constraint: String, residual: f64 },
    #[error("product-derived {image} deviates from its closed form by {deviation:e}")]
    ClosedFormMismatch { image: &'static str, deviation: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
