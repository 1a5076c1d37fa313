//! Site presentations of a finite ambient category and the colimit of their
//! underlying categories.

mod colimit;
mod presentation;

pub use colimit::{verify_site_colimit, SiteColimit, SiteColimitReport};
pub use presentation::{
    cocone_presentations, equalize_presentations, AmbientCategory, Cocone, Equalizer, PresentationDiagram,
    PresentationMorphism, SitePresentation,
};
