//! Exact ν-invariants and Bernstein-Sato roots of monomial ideals.

pub mod bs;
pub mod char_zero;
pub mod error;
pub mod format;
pub mod frobenius;
pub mod ilp;
pub mod jobs;
pub mod monomial;
pub mod nu;
pub mod padic;

pub use error::{Error, Result};
pub use format::{ideal_to_json, parse_ideal};
pub use frobenius::{bracket_power, cartier_image, nu_set_chain, PrimePower};
pub use jobs::Jobs;
pub use monomial::{Monomial, MonomialIdeal};
pub use nu::{default_grid, nu, nu_set_grid, GridSpec, LevelSet, NuEngine, NuQuery};
pub use padic::{PAdicBranch, PeriodicExpansion, Rational};
pub use bs::{bs_roots, certify_root, find_d, BsConfig, Certificate, RootReport, RootStatus};
pub use char_zero::{char0_roots, compare_char_p, fit_affine_law, AffineLaw, Char0Config, Char0Report, Comparison};
