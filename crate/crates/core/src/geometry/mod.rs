//! Exact geometric checks on realizations and generators for inscribed cyclic polytopes.

pub mod cyclic;
pub mod scribe;

pub use cyclic::{
    default_parameters, generate_cyclic_moment, generate_cyclic_trig, is_separable, k_sets, verify_face_lattice,
    LatticeCheck,
};
pub use scribe::{
    check_ij_scribed, check_k_scribed, face_avoids, face_cuts, face_status, min_norm_sq_over_face, on_sphere_check,
    FaceStatus, MinNorm, ScribeQuery, ScribeReport,
};
