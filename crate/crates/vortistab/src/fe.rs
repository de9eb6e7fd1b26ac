//! The second-order Scott-Vogelius pair: continuous piecewise-quadratic
//! vector velocities and discontinuous piecewise-linear pressures.
//!
//! Scalar velocity dofs sit at vertices and edge midpoints; a vector dof is
//! (component, scalar node) with all x-components numbered before all
//! y-components. Pressure dofs are nodal at the three vertices of each
//! element and are not shared between elements. On barycenter-refined meshes
//! the divergence of the velocity space lands inside the pressure space, so
//! the discrete solutions of the saddle-point systems assembled downstream
//! are exactly divergence-free.

use crate::mesh::Mesh;
use crate::quadrature::triangle_rule;
use crate::{Error, Result};

/// Dof maps and boundary flags for the Scott-Vogelius pair on a mesh.
#[derive(Debug, Clone)]
pub struct FeSystem {
    pub n_vertices: usize,
    pub n_edges: usize,
    /// Scalar velocity nodes: vertices first, then edge midpoints.
    pub n_scalar: usize,
    /// Vector velocity dofs, `2 * n_scalar`; x-components come first.
    pub n_vel: usize,
    /// Pressure dofs, `3 * n_triangles`.
    pub n_prs: usize,
    /// Physical position of each scalar node.
    pub node_pos: Vec<[f64; 2]>,
    /// Dirichlet flag per velocity dof (true on the boundary).
    pub dirichlet: Vec<bool>,
    /// Map from velocity dof to its index among free dofs, `None` on the
    /// boundary.
    pub free_index: Vec<Option<usize>>,
    /// Number of free velocity dofs.
    pub n_free: usize,
}

/// Values, gradients and (constant) second derivatives of the local shape
/// functions at one point of one element, in physical coordinates.
///
/// P2 local ordering: vertices 0..3, then midpoints of edges (0,1), (1,2),
/// (2,0). P1 ordering: the three vertices.
#[derive(Debug, Clone)]
pub struct BasisEval {
    pub p2_val: [f64; 6],
    pub p2_grad: [[f64; 2]; 6],
    /// Second derivatives (xx, xy, yy); constant over the element.
    pub p2_hess: [[f64; 3]; 6],
    pub p1_val: [f64; 3],
}

impl FeSystem {
    /// Velocity dof index of `component` at scalar node `node`.
    #[inline]
    pub fn vel_dof(&self, component: usize, node: usize) -> usize {
        component * self.n_scalar + node
    }

    /// The six scalar nodes of element `t`, in local P2 order.
    #[inline]
    pub fn element_nodes(&self, mesh: &Mesh, t: usize) -> [usize; 6] {
        let tri = mesh.triangles[t];
        let edges = mesh.triangle_edges[t];
        [
            tri[0],
            tri[1],
            tri[2],
            self.n_vertices + edges[0],
            self.n_vertices + edges[1],
            self.n_vertices + edges[2],
        ]
    }

    /// Pressure dof index of local vertex `k` of element `t`.
    #[inline]
    pub fn prs_dof(&self, t: usize, k: usize) -> usize {
        3 * t + k
    }
}

/// Builds dof maps for a mesh. Numbering is deterministic: scalar nodes are
/// vertices then edges in mesh order, with all x-components before all
/// y-components.
pub fn build_system(mesh: &Mesh) -> FeSystem {
    let n_vertices = mesh.n_vertices();
    let n_edges = mesh.n_edges();
    let n_scalar = n_vertices + n_edges;
    let n_vel = 2 * n_scalar;

    let mut node_pos = Vec::with_capacity(n_scalar);
    node_pos.extend_from_slice(&mesh.vertices);
    for edge in &mesh.edges {
        let [a, b] = edge.vertices;
        node_pos.push([
            0.5 * (mesh.vertices[a][0] + mesh.vertices[b][0]),
            0.5 * (mesh.vertices[a][1] + mesh.vertices[b][1]),
        ]);
    }

    let boundary_vertex = mesh.boundary_vertices();
    let mut boundary_scalar = vec![false; n_scalar];
    for (v, &on) in boundary_vertex.iter().enumerate() {
        boundary_scalar[v] = on;
    }
    for (e, edge) in mesh.edges.iter().enumerate() {
        if edge.is_boundary() {
            boundary_scalar[n_vertices + e] = true;
        }
    }

    let mut dirichlet = vec![false; n_vel];
    for c in 0..2 {
        for s in 0..n_scalar {
            dirichlet[c * n_scalar + s] = boundary_scalar[s];
        }
    }
    let mut free_index = vec![None; n_vel];
    let mut n_free = 0;
    for (d, &fixed) in dirichlet.iter().enumerate() {
        if !fixed {
            free_index[d] = Some(n_free);
            n_free += 1;
        }
    }

    FeSystem {
        n_vertices,
        n_edges,
        n_scalar,
        n_vel,
        n_prs: 3 * mesh.n_triangles(),
        node_pos,
        dirichlet,
        free_index,
        n_free,
    }
}

/// Evaluates the P2 and P1 shape functions of element `t` at a reference
/// point, mapped to physical coordinates through the affine element map.
pub fn eval_basis(mesh: &Mesh, t: usize, rs: [f64; 2]) -> BasisEval {
    let (r, s) = (rs[0], rs[1]);
    let lambda = [1.0 - r - s, r, s];
    // Reference gradients of the barycentric coordinates.
    let dl = [[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]];

    let mut val = [0.0; 6];
    let mut grad_ref = [[0.0; 2]; 6];
    let mut hess_ref = [[0.0; 3]; 6]; // rr, rs, ss
    for i in 0..3 {
        val[i] = lambda[i] * (2.0 * lambda[i] - 1.0);
        for d in 0..2 {
            grad_ref[i][d] = (4.0 * lambda[i] - 1.0) * dl[i][d];
        }
        hess_ref[i] = [
            4.0 * dl[i][0] * dl[i][0],
            4.0 * dl[i][0] * dl[i][1],
            4.0 * dl[i][1] * dl[i][1],
        ];
    }
    for (k, (i, j)) in [(0usize, 1usize), (1, 2), (2, 0)].iter().enumerate() {
        let (i, j) = (*i, *j);
        val[3 + k] = 4.0 * lambda[i] * lambda[j];
        for d in 0..2 {
            grad_ref[3 + k][d] = 4.0 * (lambda[i] * dl[j][d] + lambda[j] * dl[i][d]);
        }
        hess_ref[3 + k] = [
            8.0 * dl[i][0] * dl[j][0],
            4.0 * (dl[i][0] * dl[j][1] + dl[i][1] * dl[j][0]),
            8.0 * dl[i][1] * dl[j][1],
        ];
    }

    // Push forward: grad_x = J^{-T} grad_ref, H_x = J^{-T} H_ref J^{-1}.
    let j = mesh.jacobian(t);
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let jinv = [
        [j[1][1] / det, -j[0][1] / det],
        [-j[1][0] / det, j[0][0] / det],
    ];
    let mut p2_grad = [[0.0; 2]; 6];
    let mut p2_hess = [[0.0; 3]; 6];
    for a in 0..6 {
        for d in 0..2 {
            p2_grad[a][d] = jinv[0][d] * grad_ref[a][0] + jinv[1][d] * grad_ref[a][1];
        }
        let h = hess_ref[a];
        let href = [[h[0], h[1]], [h[1], h[2]]];
        let mut hx = [[0.0; 2]; 2];
        for p in 0..2 {
            for q in 0..2 {
                let mut acc = 0.0;
                for m in 0..2 {
                    for n in 0..2 {
                        acc += jinv[m][p] * href[m][n] * jinv[n][q];
                    }
                }
                hx[p][q] = acc;
            }
        }
        p2_hess[a] = [hx[0][0], hx[0][1], hx[1][1]];
    }

    BasisEval {
        p2_val: val,
        p2_grad,
        p2_hess,
        p1_val: lambda,
    }
}

/// Nodal interpolation of a time-frozen vector field onto the velocity
/// space. Exact for componentwise quadratic fields.
pub fn interpolate_velocity<F>(g: F, sys: &FeSystem) -> Result<Vec<f64>>
where
    F: Fn(f64, f64) -> [f64; 2],
{
    let mut coeffs = vec![0.0; sys.n_vel];
    for (s, pos) in sys.node_pos.iter().enumerate() {
        let v = g(pos[0], pos[1]);
        if !v[0].is_finite() || !v[1].is_finite() {
            return Err(Error::Invalid(format!(
                "non-finite sample {v:?} at node ({}, {})",
                pos[0], pos[1]
            )));
        }
        coeffs[sys.vel_dof(0, s)] = v[0];
        coeffs[sys.vel_dof(1, s)] = v[1];
    }
    Ok(coeffs)
}

/// L2 norm of the divergence of a velocity coefficient vector.
pub fn divergence_norm(u: &[f64], sys: &FeSystem, mesh: &Mesh) -> f64 {
    let rule = triangle_rule(4).expect("static degree");
    let mut acc = 0.0;
    for t in 0..mesh.n_triangles() {
        let nodes = sys.element_nodes(mesh, t);
        let jac = 2.0 * mesh.area(t);
        for (pt, w) in rule.points.iter().zip(&rule.weights) {
            let basis = eval_basis(mesh, t, *pt);
            let mut div = 0.0;
            for (l, &node) in nodes.iter().enumerate() {
                div += u[sys.vel_dof(0, node)] * basis.p2_grad[l][0]
                    + u[sys.vel_dof(1, node)] * basis.p2_grad[l][1];
            }
            acc += w * jac * div * div;
        }
    }
    acc.sqrt()
}

/// Value of the velocity field at a reference point of element `t`.
pub fn velocity_value(
    u: &[f64],
    sys: &FeSystem,
    nodes: &[usize; 6],
    basis: &BasisEval,
) -> [f64; 2] {
    let mut val = [0.0; 2];
    for (l, &node) in nodes.iter().enumerate() {
        val[0] += u[sys.vel_dof(0, node)] * basis.p2_val[l];
        val[1] += u[sys.vel_dof(1, node)] * basis.p2_val[l];
    }
    val
}

/// Gradient of the velocity field: `grad[i][j] = d u_i / d x_j`.
pub fn velocity_gradient(
    u: &[f64],
    sys: &FeSystem,
    nodes: &[usize; 6],
    basis: &BasisEval,
) -> [[f64; 2]; 2] {
    let mut grad = [[0.0; 2]; 2];
    for (l, &node) in nodes.iter().enumerate() {
        for c in 0..2 {
            let coeff = u[sys.vel_dof(c, node)];
            grad[c][0] += coeff * basis.p2_grad[l][0];
            grad[c][1] += coeff * basis.p2_grad[l][1];
        }
    }
    grad
}
