//! Exact cohomology of real toric spaces `M^R(K, λ)` built from a shellable
//! simplicial complex `K` on `[m]` and a characteristic matrix `Λ` over GF(2).
//!
//! Three independent routes compute `H^*(Y; Z)`:
//!
//! * [`cells`]: the cubical cell structure of the real moment-angle complex,
//!   divided by `ker λ` (brute force, used as the oracle);
//! * [`morse`]: critical faces of the full subcomplexes `K_ω`, `ω ∈ row λ`,
//!   assembled into a complex with doubled coboundary;
//! * [`toric::assemble_integral`]: reduced cohomology of the `K_ω` together
//!   with the h-vector.

pub mod cells;
pub mod cli;
pub mod complex;
pub mod error;
pub mod face;
pub mod facering;
pub mod linalg;
pub mod morse;
pub mod shelling;
pub mod toric;

pub use error::{Error, Result};
pub use face::Face;
