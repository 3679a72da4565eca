//! Exact Bass–Ihara zeta functions and twisted L-functions of edge-weighted
//! quotient graphs: finite graphs and cuspidal graphs (a finite core with
//! finitely many eventually periodic rays).
//!
//! Several independent routes compute `Z(u)⁻¹` and are expected to agree
//! exactly:
//!
//! - traces `N_m = Tr(Tᵐ)` of the transfer operator, exponentiated into a
//!   power series and reconstructed by Padé approximation ([`zeta::zeta_via_pade`]);
//! - a cusp-closure determinant `det(1 − u·A_N)` divided by one factor per cusp
//!   ([`zeta::zeta_via_closure`]);
//! - the Euler product over enumerated prime cycles ([`cycles`]);
//! - the Ihara determinant `det(1 − uA + u²Q)` on finite truncations ([`ihara`]).

pub mod cycles;
pub mod error;
pub mod exact;
pub mod graph;
pub mod ihara;
pub mod lfunc;
pub mod spectral;
pub mod zeta;

pub use error::{Error, Result};
