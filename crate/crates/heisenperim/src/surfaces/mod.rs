//! Graphs, implicit surfaces, triangle meshes and the bubble-set builders.

mod bubble;
mod characteristic;
pub mod expr;
pub mod field;
mod graph;
mod implicit;
mod mesh;
mod slab;

pub use bubble::{build_q_bubble_mesh, MIN_BUBBLE_RES};
pub use characteristic::{characteristic_points_graph, characteristic_points_mesh};
pub use expr::Expr;
pub use field::{Field, FnField, Hessian, Quadratic, ScalarField2};
pub use graph::{GraphSurface, PlanarDomain};
pub use implicit::{ImplicitMesh, ImplicitSurface};
pub use mesh::TriMesh;
pub use slab::{
    build_polygonal_bubble, build_square_bubble, Quad1, QuadraticPatch, SlabSurface, Wall,
    WallPiece,
};

use crate::error::Result;
use crate::quadrature::QuadOptions;

/// Any surface the perimeter module can measure.
#[derive(Debug, Clone)]
pub enum Surface {
    Graph(GraphSurface),
    Slab(SlabSurface),
    Mesh(TriMesh),
}

impl Surface {
    /// Enclosed volume; for graphs, the volume above the floor `z = 0`.
    pub fn volume(&self, opts: &QuadOptions) -> Result<f64> {
        match self {
            Surface::Graph(g) => g.volume(opts),
            Surface::Slab(s) => Ok(s.volume()),
            Surface::Mesh(m) => m.volume(),
        }
    }

    /// Image under `δ_s`.
    pub fn dilate(&self, s: f64) -> Result<Surface> {
        Ok(match self {
            Surface::Graph(g) => Surface::Graph(g.dilate(s)?),
            Surface::Slab(x) => Surface::Slab(x.dilate(s)?),
            Surface::Mesh(m) => Surface::Mesh(m.dilate(s)?),
        })
    }

    /// Mirror image under `(x, y, z) ↦ (y, x, z)`.
    pub fn swap_xy(&self) -> Surface {
        match self {
            Surface::Graph(g) => Surface::Graph(g.swap_xy()),
            Surface::Slab(s) => Surface::Slab(s.swap_xy()),
            Surface::Mesh(m) => Surface::Mesh(m.swap_xy()),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Surface::Graph(_) => "graph",
            Surface::Slab(_) => "slab",
            Surface::Mesh(_) => "mesh",
        }
    }
}

impl From<GraphSurface> for Surface {
    fn from(g: GraphSurface) -> Self {
        Surface::Graph(g)
    }
}

impl From<SlabSurface> for Surface {
    fn from(s: SlabSurface) -> Self {
        Surface::Slab(s)
    }
}

impl From<TriMesh> for Surface {
    fn from(m: TriMesh) -> Self {
        Surface::Mesh(m)
    }
}
