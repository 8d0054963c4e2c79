//! Exact combinatorics of the hyperplane arrangements attached to 3-fold
//! flopping contractions.
//!
//! The crate is organised bottom-up:
//!
//! * [`dynkin`] builds ADE diagrams, affine extensions and flop data;
//! * [`roots`] enumerates roots and restricts them to wall covectors;
//! * [`arrangement`] enumerates chambers and alcoves by wall crossing;
//! * [`tracking`] turns crossings into integer matrices and classifies
//!   complexified points;
//! * [`groupoid`] checks reduced positive paths;
//! * [`skms`] extracts the punctured-sphere description for irreducible
//!   flops.
//!
//! [`io`], [`render`] and [`verify`] serve the command-line tool. All
//! arithmetic is exact: integers for covectors, rays and matrices, and
//! [`linalg::Q`] rationals for level coordinates.

pub mod arrangement;
pub mod dynkin;
pub mod groupoid;
pub mod io;
pub mod linalg;
pub mod render;
pub mod roots;
pub mod skms;
pub mod tracking;
pub mod verify;

pub use linalg::Q;

use thiserror::Error;

/// Any error raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Dynkin(#[from] dynkin::DynkinError),
    #[error(transparent)]
    Arrangement(#[from] arrangement::ArrangementError),
    #[error(transparent)]
    Tracking(#[from] tracking::TrackingError),
    #[error(transparent)]
    Groupoid(#[from] groupoid::GroupoidError),
    #[error(transparent)]
    Skms(#[from] skms::SkmsError),
    #[error(transparent)]
    Render(#[from] render::RenderError),
}
