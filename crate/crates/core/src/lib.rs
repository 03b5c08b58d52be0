//! Exact decision procedures for shadowing-type properties of finite
//! uniform dynamical systems.

pub mod chain;
pub mod corpus;
pub mod dynsys;
pub mod error;
pub mod lasso;
pub mod natsets;
pub mod par;
pub mod pointset;
pub mod proximal;
pub mod report;
pub mod shadowing;
pub mod suites;
pub mod sysfile;
pub mod uniform;

pub use dynsys::{EPSeq, FiniteSystem};
pub use error::{Result, ShadowError};
pub use lasso::Lasso;
pub use natsets::{Family, FamilyTag, UPSet};
pub use pointset::PointSet;
pub use uniform::{Relation, UniformBase};
