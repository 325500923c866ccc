/// Instance caps shared by every algorithm that has no a-priori complexity bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Variables allowed in a user-supplied presentation.
    pub max_vars: usize,
    /// Total degree allowed for user-supplied generators.
    pub max_degree: u32,
    /// Coordinates allowed in a Weil restriction.
    pub max_arc_coords: usize,
    /// Search nodes visited by a point enumeration before giving up.
    pub max_candidates: u64,
    /// S-pairs processed by one Buchberger run.
    pub max_pairs: usize,
    /// Non-degenerate cells allowed in a homology computation.
    pub max_cells: usize,
    /// Largest block canonicalized by trying every variable permutation.
    pub exhaustive_block_vars: usize,
    /// Largest union expanded by inclusion–exclusion.
    pub max_union_terms: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_vars: 12,
            max_degree: 8,
            max_arc_coords: 96,
            max_candidates: 1 << 20,
            max_pairs: 20_000,
            max_cells: 512,
            exhaustive_block_vars: 5,
            max_union_terms: 12,
        }
    }
}
