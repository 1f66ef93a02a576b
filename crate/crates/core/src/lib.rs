pub mod battery;
pub mod borel_lab;
pub mod char_roots;
pub mod expr_parser;
pub mod goursat_solver;
pub mod newton_polygon;
pub mod numeric;
pub mod par;
pub mod series_core;
pub mod solvability;
