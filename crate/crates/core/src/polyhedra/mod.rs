//! Small polyhedral computations: affine reduction, LP feasibility, and
//! combinatorial enumeration of polytope vertices and cone rays.

mod rays;
mod reduce;
mod simplex;
mod subsets;
mod system;
mod vertices;

pub use rays::{
    cone_is_trivial, cone_trivial_lp, cone_witness_lp, enumerate_rays, enumerate_rays_with,
    RaySet,
};
pub use reduce::{affine_reduce, AffineReduction, Reduction};
pub use simplex::{lp_feasible, maximize, LpOutcome};
pub use system::{LinearSystem, Row};
pub use vertices::{
    enumerate_vertices, enumerate_vertices_with, is_extreme_point, EnumerationLimits, VertexSet,
    VERTEX_DEDUP_TOL,
};
