//! Sampled half-space signals, the quasi-regular and metaplectic representations, and the shearlet transform.

pub mod grid;
pub mod ops;
pub mod spectrum;
pub mod transform;

pub use grid::{half_space_axes, reference_axes, Axis, Dft, HalfSpaceSignal, TimeSignal};
pub use ops::{
    equivalence_residual, metaplectic_apply, pi_hat_apply, pi_time_apply, psi_hat_apply, psi_hat_inverse,
    q_covariance_residual, q_inverse, q_map, MetaKind, Warp,
};
pub use spectrum::{Atom, Spectrum};
pub use transform::{
    admissibility_constant, admissibility_constant_analytic, shearlet_transform, square_integrability_ratio, AsQuadrature,
    GroupPoint,
};
