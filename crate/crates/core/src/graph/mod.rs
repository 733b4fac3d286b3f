//! Graph representations and the structural subroutines the solvers rely on.

mod branching;
mod digraph;
mod matching;

pub use branching::{has_out_branching, out_branching_from, OutBranching};
pub(crate) use digraph::parse_num as digraph_parse_num;
pub use digraph::{Arc, ArcColoredDigraph};
pub use matching::{
    exchange_out_branching, max_matching_undirected, maximum_matching, ArcMatching,
};
