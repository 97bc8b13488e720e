//! Group law, dilations, horizontal lifts, CC-geodesics and metric spheres.

pub mod geodesic;
mod group;
mod path;
pub mod sphere;

pub use geodesic::{bubble_family, cc_geodesic, GeodesicSpec, IsoLoop};
pub(crate) use group::check_scale;
pub use group::{dilate, frame, group_mul, HPoint, Vec3};
pub use path::{lift_path, HorizontalPath};
pub use sphere::{sphere_sample, sphere_sample_radius, sphere_sample_with, SphereProfile};
