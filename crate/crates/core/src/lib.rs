//! Decomposition of homogeneous forms into direct sums via the Harrison center.

pub mod center;
pub mod decomp;
pub mod error;
pub mod factor;
pub mod form;
pub mod harness;
pub mod idem;
pub mod matrix;
pub mod rank;
pub mod report;
pub mod scalar;
pub mod upoly;

pub use decomp::{decompose, decompose_with, odeco_precheck, ortho_check, verify, verify_residual, Decomposition, DecomposeOptions, Ortho, Verdict};
pub use error::{Error, Result};
pub use form::{form_from_gram, gram_tensor, parse_form, Form, SymTensor};
pub use idem::{AlgebraDescription, AlgebraFactor, Certificate};
pub use matrix::Matrix;
pub use report::Report;
pub use scalar::{Field, FieldConfig, Mode, Scalar};
