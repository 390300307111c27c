//! Fixtures shared by the benchmarks.

use tangle_core::Graph;

/// Named graphs of increasing size.
pub fn graphs() -> Vec<(&'static str, Graph)> {
    vec![
        ("P4", Graph::path(4)),
        ("C5", Graph::cycle(5)),
        ("K1,4", Graph::star(4)),
        ("K5", Graph::complete(5)),
        ("grid2x3", Graph::grid(2, 3)),
        ("C6", Graph::cycle(6)),
    ]
}
