//! Conforming triangulations of a polygonal domain.
//!
//! The mesh stores vertex coordinates, CCW-oriented triangles, and a
//! deduplicated edge list with element adjacency and a fixed unit normal per
//! edge. Edge normals point from the lower-indexed adjacent element to the
//! higher-indexed one (outward on boundary edges), so every quantity that is
//! quadratic in an edge jump is independent of the orientation choice.
//!
//! Meshes are immutable after construction and can be shared freely across
//! threads.

use crate::{Error, Result};
use std::path::Path;

/// An undirected mesh edge with its adjacency.
#[derive(Debug, Clone)]
pub struct Edge {
    /// Endpoint vertex indices, `vertices[0] < vertices[1]`.
    pub vertices: [usize; 2],
    /// Lower-indexed adjacent element.
    pub left: usize,
    /// Higher-indexed adjacent element, `None` on the boundary.
    pub right: Option<usize>,
    /// Fixed unit normal, pointing away from `left`.
    pub normal: [f64; 2],
    /// Edge length.
    pub length: f64,
}

impl Edge {
    pub fn is_boundary(&self) -> bool {
        self.right.is_none()
    }
}

/// A conforming triangulation.
#[derive(Debug, Clone)]
pub struct Mesh {
    /// Vertex coordinates.
    pub vertices: Vec<[f64; 2]>,
    /// Vertex index triples, counterclockwise.
    pub triangles: Vec<[usize; 3]>,
    /// Deduplicated edges with adjacency.
    pub edges: Vec<Edge>,
    /// Per triangle, the global edge indices opposite to the local ordering:
    /// entry `k` is the edge between local vertices `k` and `(k + 1) % 3`.
    pub triangle_edges: Vec<[usize; 3]>,
    /// Per-element diameter (longest edge).
    pub h_e: Vec<f64>,
    /// Mesh size, `max h_e`.
    pub h: f64,
    /// True if the mesh was produced by [`barycentric_refine`] (required for
    /// the inf-sup stability of the Scott-Vogelius pair).
    pub barycentric: bool,
}

/// Shape-regularity and quasi-uniformity measures of a mesh.
#[derive(Debug, Clone, Copy)]
pub struct MeshQuality {
    /// `max_E h_E / rho_E` where `rho_E` is the inradius.
    pub shape_regularity: f64,
    /// `h / min_E h_E`.
    pub quasi_uniformity: f64,
}

fn signed_area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

impl Mesh {
    /// Builds a mesh from raw vertices and triangles, fixing CW triangles by
    /// swapping their last two vertices. Returns the mesh and the number of
    /// swapped triangles.
    pub fn from_raw(
        vertices: Vec<[f64; 2]>,
        mut triangles: Vec<[usize; 3]>,
        barycentric: bool,
    ) -> Result<(Self, usize)> {
        let nv = vertices.len();
        if nv < 3 || triangles.is_empty() {
            return Err(Error::Invalid(
                "a mesh needs at least 3 vertices and 1 triangle".into(),
            ));
        }
        let mut swapped = 0;
        for (i, tri) in triangles.iter_mut().enumerate() {
            for &v in tri.iter() {
                if v >= nv {
                    return Err(Error::Invalid(format!(
                        "triangle {i} references vertex {v}, but only {nv} vertices exist"
                    )));
                }
            }
            let area = signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
            if area == 0.0 {
                return Err(Error::Invalid(format!("triangle {i} has zero area")));
            }
            if area < 0.0 {
                tri.swap(1, 2);
                swapped += 1;
            }
        }

        // Deduplicate edges; key is the sorted vertex pair.
        let mut edge_of: std::collections::HashMap<(usize, usize), usize> =
            std::collections::HashMap::new();
        let mut edges: Vec<Edge> = Vec::new();
        let mut triangle_edges = vec![[usize::MAX; 3]; triangles.len()];
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                match edge_of.get(&key) {
                    None => {
                        let id = edges.len();
                        edge_of.insert(key, id);
                        edges.push(Edge {
                            vertices: [key.0, key.1],
                            left: t,
                            right: None,
                            normal: [0.0, 0.0],
                            length: dist(vertices[key.0], vertices[key.1]),
                        });
                        triangle_edges[t][k] = id;
                    }
                    Some(&id) => {
                        if edges[id].right.is_some() {
                            return Err(Error::Invalid(format!(
                                "edge ({}, {}) is shared by more than two triangles",
                                key.0, key.1
                            )));
                        }
                        edges[id].right = Some(t);
                        triangle_edges[t][k] = id;
                    }
                }
            }
        }

        // Order adjacency by element index and fix the normal to point away
        // from the lower-indexed element.
        let mut h_e = vec![0.0f64; triangles.len()];
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                let len = dist(vertices[tri[k]], vertices[tri[(k + 1) % 3]]);
                h_e[t] = h_e[t].max(len);
            }
        }
        for edge in edges.iter_mut() {
            if let Some(r) = edge.right {
                if r < edge.left {
                    edge.right = Some(edge.left);
                    edge.left = r;
                }
            }
            let [a, b] = edge.vertices;
            let (pa, pb) = (vertices[a], vertices[b]);
            let tangent = [(pb[0] - pa[0]) / edge.length, (pb[1] - pa[1]) / edge.length];
            let mut normal = [tangent[1], -tangent[0]];
            let tri = triangles[edge.left];
            let centroid = [
                (vertices[tri[0]][0] + vertices[tri[1]][0] + vertices[tri[2]][0]) / 3.0,
                (vertices[tri[0]][1] + vertices[tri[1]][1] + vertices[tri[2]][1]) / 3.0,
            ];
            let mid = [(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0];
            if normal[0] * (centroid[0] - mid[0]) + normal[1] * (centroid[1] - mid[1]) > 0.0 {
                normal = [-normal[0], -normal[1]];
            }
            edge.normal = normal;
        }

        let h = h_e.iter().cloned().fold(0.0, f64::max);
        Ok((
            Mesh {
                vertices,
                triangles,
                edges,
                triangle_edges,
                h_e,
                h,
                barycentric,
            },
            swapped,
        ))
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Area of triangle `t` (positive, since triangles are CCW).
    pub fn area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        signed_area(self.vertices[a], self.vertices[b], self.vertices[c])
    }

    /// Total mesh area.
    pub fn total_area(&self) -> f64 {
        (0..self.n_triangles()).map(|t| self.area(t)).sum()
    }

    /// Affine map jacobian of triangle `t`: columns are the two edge vectors
    /// from the first vertex.
    pub fn jacobian(&self, t: usize) -> [[f64; 2]; 2] {
        let [a, b, c] = self.triangles[t];
        let (pa, pb, pc) = (self.vertices[a], self.vertices[b], self.vertices[c]);
        [
            [pb[0] - pa[0], pc[0] - pa[0]],
            [pb[1] - pa[1], pc[1] - pa[1]],
        ]
    }

    /// Maps a reference point (r, s) in the unit triangle to physical
    /// coordinates in triangle `t`.
    pub fn map_point(&self, t: usize, rs: [f64; 2]) -> [f64; 2] {
        let [a, _, _] = self.triangles[t];
        let j = self.jacobian(t);
        let pa = self.vertices[a];
        [
            pa[0] + j[0][0] * rs[0] + j[0][1] * rs[1],
            pa[1] + j[1][0] * rs[0] + j[1][1] * rs[1],
        ]
    }

    /// Vertices lying on the boundary (endpoints of boundary edges).
    pub fn boundary_vertices(&self) -> Vec<bool> {
        let mut on_boundary = vec![false; self.n_vertices()];
        for edge in &self.edges {
            if edge.is_boundary() {
                on_boundary[edge.vertices[0]] = true;
                on_boundary[edge.vertices[1]] = true;
            }
        }
        on_boundary
    }
}

/// Builds a uniform triangulation of the unit square: `n x n` cells, each
/// split into two CCW triangles along the SW-NE diagonal.
pub fn generate_uniform(n: usize) -> Result<Mesh> {
    if n == 0 {
        return Err(Error::Invalid("subdivision count must be at least 1".into()));
    }
    let step = 1.0 / n as f64;
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            vertices.push([i as f64 * step, j as f64 * step]);
        }
    }
    let id = |i: usize, j: usize| j * (n + 1) + i;
    let mut triangles = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            triangles.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            triangles.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    let (mesh, swapped) = Mesh::from_raw(vertices, triangles, false)?;
    debug_assert_eq!(swapped, 0);
    Ok(mesh)
}

/// Splits every triangle into three by connecting its vertices to the
/// barycenter (Alfeld split). Boundary vertices and edges are preserved.
pub fn barycentric_refine(mesh: &Mesh) -> Result<Mesh> {
    let mut vertices = mesh.vertices.clone();
    let mut triangles = Vec::with_capacity(3 * mesh.n_triangles());
    for (t, tri) in mesh.triangles.iter().enumerate() {
        if mesh.area(t) <= 0.0 {
            return Err(Error::Invalid(format!(
                "triangle {t} is degenerate and cannot be split"
            )));
        }
        let [a, b, c] = *tri;
        let m = vertices.len();
        vertices.push([
            (mesh.vertices[a][0] + mesh.vertices[b][0] + mesh.vertices[c][0]) / 3.0,
            (mesh.vertices[a][1] + mesh.vertices[b][1] + mesh.vertices[c][1]) / 3.0,
        ]);
        triangles.push([a, b, m]);
        triangles.push([b, c, m]);
        triangles.push([c, a, m]);
    }
    let (refined, swapped) = Mesh::from_raw(vertices, triangles, true)?;
    debug_assert_eq!(swapped, 0);
    Ok(refined)
}

/// Shape-regularity and quasi-uniformity report.
pub fn quality(mesh: &Mesh) -> Result<MeshQuality> {
    let mut shape = 0.0f64;
    let mut h_min = f64::INFINITY;
    for t in 0..mesh.n_triangles() {
        let area = mesh.area(t);
        if area <= 0.0 {
            return Err(Error::Invalid(format!("triangle {t} has zero area")));
        }
        let [a, b, c] = mesh.triangles[t];
        let perimeter = dist(mesh.vertices[a], mesh.vertices[b])
            + dist(mesh.vertices[b], mesh.vertices[c])
            + dist(mesh.vertices[c], mesh.vertices[a]);
        let inradius = 2.0 * area / perimeter;
        shape = shape.max(mesh.h_e[t] / inradius);
        h_min = h_min.min(mesh.h_e[t]);
    }
    Ok(MeshQuality {
        shape_regularity: shape,
        quasi_uniformity: mesh.h / h_min,
    })
}

/// Reads a mesh from the plain ASCII format:
///
/// ```text
/// # comment
/// vertices N
/// x y          (N lines)
/// triangles M
/// i j k        (M lines, 0-based vertex indices)
/// ```
///
/// CW triangles are fixed by swapping their last two vertices; a warning is
/// printed to stderr when that happens.
pub fn load_mesh<P: AsRef<Path>>(path: P) -> Result<Mesh> {
    let text = std::fs::read_to_string(&path)?;
    let mesh = parse_mesh(&text)?;
    Ok(mesh)
}

fn parse_mesh(text: &str) -> Result<Mesh> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let parse_err = |line: usize, msg: &str| Error::Parse {
        line,
        msg: msg.to_string(),
    };

    let (line, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty mesh file"))?;
    let n_vertices: usize = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["vertices", n] => n
            .parse()
            .map_err(|_| parse_err(line, "invalid vertex count"))?,
        _ => return Err(parse_err(line, "expected `vertices N`")),
    };

    let mut vertices = Vec::with_capacity(n_vertices);
    for _ in 0..n_vertices {
        let (line, l) = lines
            .next()
            .ok_or_else(|| parse_err(0, "unexpected end of file in vertex block"))?;
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(parse_err(line, "expected `x y`"));
        }
        let x: f64 = parts[0]
            .parse()
            .map_err(|_| parse_err(line, "invalid x coordinate"))?;
        let y: f64 = parts[1]
            .parse()
            .map_err(|_| parse_err(line, "invalid y coordinate"))?;
        if !x.is_finite() || !y.is_finite() {
            return Err(parse_err(line, "non-finite coordinate"));
        }
        vertices.push([x, y]);
    }

    let (line, header) = lines
        .next()
        .ok_or_else(|| parse_err(0, "missing `triangles M` header"))?;
    let n_triangles: usize = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["triangles", m] => m
            .parse()
            .map_err(|_| parse_err(line, "invalid triangle count"))?,
        _ => return Err(parse_err(line, "expected `triangles M`")),
    };

    let mut triangles = Vec::with_capacity(n_triangles);
    for _ in 0..n_triangles {
        let (line, l) = lines
            .next()
            .ok_or_else(|| parse_err(0, "unexpected end of file in triangle block"))?;
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(parse_err(line, "expected `i j k`"));
        }
        let mut tri = [0usize; 3];
        for (slot, p) in tri.iter_mut().zip(&parts) {
            *slot = p
                .parse()
                .map_err(|_| parse_err(line, "invalid vertex index"))?;
        }
        for &v in &tri {
            if v >= n_vertices {
                return Err(parse_err(
                    line,
                    &format!("vertex index {v} out of range (only {n_vertices} vertices)"),
                ));
            }
        }
        triangles.push(tri);
    }

    let (mesh, swapped) = Mesh::from_raw(vertices, triangles, false)?;
    if swapped > 0 {
        eprintln!("warning: fixed orientation of {swapped} clockwise triangle(s)");
    }
    Ok(mesh)
}

/// Writes a mesh in the format accepted by [`load_mesh`]. Coordinates are
/// printed with the shortest representation that round-trips exactly.
pub fn save_mesh<P: AsRef<Path>>(mesh: &Mesh, path: P) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "vertices {}", mesh.n_vertices())?;
    for v in &mesh.vertices {
        writeln!(out, "{} {}", v[0], v[1])?;
    }
    writeln!(out, "triangles {}", mesh.n_triangles())?;
    for t in &mesh.triangles {
        writeln!(out, "{} {} {}", t[0], t[1], t[2])?;
    }
    Ok(())
}
