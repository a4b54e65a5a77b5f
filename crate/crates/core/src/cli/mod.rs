//! Command-line surface: map files, reports, plots and the `pwlinv` tool.

pub mod app;
pub mod builtin;
pub mod expr;
pub mod mapfile;
pub mod report;
pub mod svg;

pub use app::{run, EXIT_INVALID, EXIT_NOT_INVERTIBLE, EXIT_OK, EXIT_USAGE};
pub use expr::{parse_scalar, ExprError};
pub use mapfile::{load_map, load_map_str, write_map_string, LoadError, MapFile};
pub use report::{analyze, Report};
pub use svg::{render_svg, svg_string, SvgError};
