//! Open book decompositions of closed orientable 3-manifolds.
//!
//! Pages are compact surfaces with boundary, monodromies are words of Dehn
//! twists along a configured curve system, and everything homological is
//! computed exactly over the integers. The [`embedder`] module builds and
//! checks structural certificates for open book embeddings into
//! `S^3 × S^2`, `S^2 ×~ S^3` and `S^5`.

pub mod intlinalg;
pub mod surface;
pub mod mcg;
pub mod openbook;
pub mod embedder;

pub use intlinalg::{cokernel, smith_normal_form, AbelianGroup, IntMatrix, SmithForm};
pub use mcg::{arc_defect, relation_report, twist_matrix, word_action, TwistLetter, TwistWord};
pub use openbook::{
    closed_h1, identify_known, mapping_torus_h1, reduce_to_one_boundary, stabilize_positive,
    AbstractOpenBook, Attachment,
};
pub use surface::{lickorish_system, validate_config, CurveSystem, Surface};
