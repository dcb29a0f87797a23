//! Torsion linking forms of duality presentations.

mod form;
mod germ;
mod presentation;
mod series;

pub use form::{ExpandedForm, TorsionLinkingForm};
pub use germ::GermValue;
pub use presentation::{
    discriminant_form, discriminant_presentation, gram_at_point, linking_pairing, Analysis,
    DualityPresentation, LocalPresentation, LocalSolution,
};
pub use series::PowerSeries;
