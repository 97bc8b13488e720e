use std::fs;

use heisenperim::heisenberg::sphere_sample;
use heisenperim::planar::ConvexBody;
use heisenperim::surfaces::{
    build_polygonal_bubble, build_q_bubble_mesh, build_square_bubble, Expr, GraphSurface,
    PlanarDomain, Surface, TriMesh,
};
use heisenperim::{Error, Result};

pub fn parse_body(spec: &str) -> Result<ConvexBody> {
    match spec {
        "diamond" => Ok(ConvexBody::unit_diamond()),
        "square" => Ok(ConvexBody::unit_square()),
        "disk" => Ok(ConvexBody::unit_disk()),
        _ => {
            if let Some(k) = spec.strip_prefix("ngon:") {
                let k: usize = k
                    .parse()
                    .map_err(|_| Error::InvalidBody(format!("bad vertex count in {spec:?}")))?;
                ConvexBody::regular_ngon(k)
            } else if let Some(path) = spec.strip_prefix("file:") {
                ConvexBody::from_file(path)
            } else {
                Err(Error::InvalidBody(format!("unknown body {spec:?}")))
            }
        }
    }
}

pub fn parse_domain(spec: &str) -> Result<PlanarDomain> {
    let v: Vec<f64> = spec
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidArgument(format!("bad domain {spec:?}")))?;
    match v.as_slice() {
        [x0, x1, y0, y1] => PlanarDomain::rect(*x0, *x1, *y0, *y1),
        _ => Err(Error::InvalidArgument(format!(
            "domain needs x0,x1,y0,y1, got {spec:?}"
        ))),
    }
}

pub fn bubble(q: &ConvexBody, resolution: usize) -> Result<Surface> {
    if q.is_disk() {
        Ok(Surface::Mesh(build_q_bubble_mesh(q, resolution)?))
    } else {
        Ok(Surface::Slab(build_polygonal_bubble(q)?))
    }
}

pub fn parse_surface(
    spec: &str,
    body: &ConvexBody,
    resolution: usize,
    domain: &PlanarDomain,
) -> Result<Surface> {
    match spec {
        "square-bubble" => Ok(Surface::Slab(build_square_bubble())),
        "q-bubble" => bubble(body, resolution),
        "dual-bubble" => bubble(&body.polar_dual()?, resolution),
        "pansu-bubble" => Ok(Surface::Mesh(build_q_bubble_mesh(
            &ConvexBody::unit_disk(),
            resolution,
        )?)),
        "cc-ball" => Ok(Surface::Mesh(sphere_sample(body, resolution)?)),
        _ => {
            if let Some(src) = spec.strip_prefix("graph:") {
                Ok(Surface::Graph(GraphSurface::from_field(
                    Expr::parse(src)?,
                    domain.clone(),
                )?))
            } else if let Some(path) = spec.strip_prefix("mesh:") {
                let text =
                    fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
                Ok(Surface::Mesh(TriMesh::from_obj(&text)?))
            } else {
                Err(Error::InvalidSurface(format!("unknown surface {spec:?}")))
            }
        }
    }
}

pub fn body_label(q: &ConvexBody) -> String {
    match q {
        ConvexBody::Disk { radius } => format!("disk({radius})"),
        ConvexBody::Polygon { vertices } => format!("polygon({})", vertices.vertices().len()),
    }
}
