//! Convolution algebras, the Euler idempotent, exponentials and
//! logarithms, a Lie basis, the PBW isomorphism, dual coproducts and
//! characters.

mod character;
mod convolution;
mod dual;
mod euler;
mod explog;
mod lie_basis;
mod pbw;

pub use character::{convolve_functionals, Character, InfinitesimalCharacter};
pub use convolution::{convolve, ConvolutionPowers};
pub use dual::{coproduct_map, product_map};
pub use euler::{euler_idempotent, euler_matrix, euler_rank, euler_transpose, eulerian_component};
pub use explog::{exp, exp_conc, exp_gl, log, log_conc, log_gl};
pub use lie_basis::{is_lyndon, LieBasis, LieElement, LieIndex};
pub use pbw::{pbw_dual_basis, pbw_iso, pbw_rank};
