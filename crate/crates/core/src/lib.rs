//! Quermassintegrals of λ-concave convex bodies and the reverse isoperimetric
//! family of inequalities they satisfy.
//!
//! Bodies are built as a polytope core dilated by a ball ([`ConvexBody`]). Their
//! quermassintegrals come from closed forms, exact intrinsic-volume formulas for
//! cores of affine dimension at most three, or a stratified Monte-Carlo fit of the
//! Steiner polynomial ([`quermass`]). The [`inequality`] module evaluates the
//! inequalities on those vectors, [`kubota`] checks projection averages over the
//! Grassmannian, and [`poly`] verifies the underlying integer identities exactly.

pub mod body;
pub mod campaign;
pub mod error;
pub mod hull;
pub mod inequality;
pub mod kubota;
pub mod linalg;
pub mod points;
pub mod poly;
pub mod quermass;
pub mod sampling;

pub use body::{BodyKind, ConvexBody, Frame, SupportSample};
pub use campaign::{CampaignConfig, CampaignSummary};
pub use error::{Error, Result};
pub use hull::project_onto_hull;
pub use inequality::{InequalityId, InequalityReport, TolerancePolicy, Verdict};
pub use kubota::{KubotaResult, SubspaceSample};
pub use points::PointSet;
pub use poly::IntPolynomial;
pub use quermass::{
    unit_ball_volume, Method, McOptions, QuermassVector, SteinerFit, UnitBallVolumes,
};
pub use sampling::{BodySpec, Family};
