pub mod grid;
pub mod svg;

pub use grid::{deform_grid, GridSpec};
pub use svg::FigureDoc;
