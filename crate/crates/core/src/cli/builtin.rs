//! Builtin map files for the three worked examples.

/// Five convex cones, every determinant positive, degree two.
pub const PIE5: &str = r#"{
  "name": "pie5",
  "cones": [
    { "start_turn": "0",    "matrix": [[1, "-sqrt(2)"], [0, "sqrt(2)-1"]] },
    { "start_turn": "3/16", "matrix": [["-sqrt(2)", "-sqrt(2)+1"], [1, 0]] },
    { "start_turn": "3/8",  "matrix": [[0, 1], ["-sqrt(2)+1", "-sqrt(2)"]] },
    { "start_turn": "9/16", "matrix": [["sqrt(2)-1", 0], ["-sqrt(2)", 1]] },
    { "start_turn": "3/4",  "matrix": [[1, 0], [0, 1]] }
  ]
}
"#;

/// Four cones, one of them wider than a half-plane, degree two.
pub const PIE4_NONCONVEX: &str = r#"{
  "name": "pie4-nonconvex",
  "cones": [
    { "start_turn": "0",     "matrix": [[1, 0], [0, 1]] },
    { "start_turn": "1/4",   "matrix": [[1, 0], ["2*sqrt(3)", 1]] },
    { "start_turn": "1/3",   "matrix": [[-2, "-sqrt(3)"], ["-sqrt(3)", -2]] },
    { "start_turn": "11/12", "matrix": [[1, "2*sqrt(3)"], [0, 1]] }
  ]
}
"#;

/// Four convex cones, degree one, yet the convex hull of the matrices
/// contains singular elements.
///
/// The seams sit where neighbouring matrices agree: 0, pi/2, 5pi/4, 7pi/4.
/// On the four coordinate quadrants these matrices would not glue
/// continuously.
pub const CLARKE4: &str = r#"{
  "name": "clarke4",
  "cones": [
    { "start_turn": "0",   "matrix": [[1, 0], [0, 1]] },
    { "start_turn": "1/4", "matrix": [["1/10", 0], [-10, 1]] },
    { "start_turn": "5/8", "matrix": [["5/100", "5/100"], ["-455/100", "-445/100"]] },
    { "start_turn": "7/8", "matrix": [[1, 1], [0, "1/10"]] }
  ]
}
"#;

pub const NAMES: [&str; 3] = ["pie5", "pie4-nonconvex", "clarke4"];

pub fn source(name: &str) -> Option<&'static str> {
    match name {
        "pie5" => Some(PIE5),
        "pie4-nonconvex" => Some(PIE4_NONCONVEX),
        "clarke4" => Some(CLARKE4),
        _ => None,
    }
}
