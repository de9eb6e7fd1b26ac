//! Benchmark problems with closed-form exact solutions.
//!
//! Each problem carries the exact velocity and pressure, the forcing term of
//! the momentum equation in the convention used throughout this crate,
//!
//! ```text
//! u_t - nu div(eps(u)) + (grad u) u - grad p = f ,
//! ```
//!
//! (symmetric-gradient viscous term, minus sign on the pressure), the curl of
//! the forcing, and time-dependent Dirichlet data given by the trace of the
//! exact velocity. All formulas are hand-derived closed forms; the test suite
//! checks them against a finite-difference evaluation of the strong residual
//! at random space-time points, so a transcription slip fails loudly.

use crate::{Error, Result};
use std::f64::consts::PI;

type VecField = Box<dyn Fn(f64, f64, f64) -> [f64; 2] + Send + Sync>;
type TensorField = Box<dyn Fn(f64, f64, f64) -> [[f64; 2]; 2] + Send + Sync>;
type ScalarField = Box<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// A manufactured Navier-Stokes problem on the unit square.
pub struct ManufacturedProblem {
    pub name: &'static str,
    pub nu: f64,
    /// Default final time of the benchmark.
    pub final_time: f64,
    /// Exact velocity.
    pub u: VecField,
    /// Exact velocity gradient, `grad[i][j] = d u_i / d x_j`.
    pub grad_u: TensorField,
    /// Exact pressure as stated (not necessarily zero-mean).
    pub p: ScalarField,
    /// Spatial mean of the exact pressure at time `t`; subtracted when
    /// comparing against the zero-mean discrete pressure.
    pub p_mean: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    /// Momentum forcing.
    pub f: VecField,
    /// Curl of the forcing (drives the vorticity-residual right hand side).
    pub curl_f: ScalarField,
}

impl ManufacturedProblem {
    /// Initial velocity, the exact solution at `t = 0`.
    pub fn u0(&self, x: f64, y: f64) -> [f64; 2] {
        (self.u)(x, y, 0.0)
    }

    /// Dirichlet data: the trace of the exact velocity.
    pub fn dirichlet(&self, x: f64, y: f64, t: f64) -> [f64; 2] {
        (self.u)(x, y, t)
    }

    /// Looks up a benchmark by name (`convergence`, `robustness`,
    /// `lattice`), overriding its default viscosity when `nu` is given.
    pub fn by_name(name: &str, nu: Option<f64>) -> Result<Self> {
        match name {
            "convergence" => convergence_problem(nu.unwrap_or(1.0)),
            "robustness" => robustness_problem(nu.unwrap_or(1.0)),
            "lattice" => lattice_vortex(nu.unwrap_or(1e-5)),
            _ => Err(Error::Invalid(format!(
                "unknown problem `{name}`; valid names: convergence, robustness, lattice"
            ))),
        }
    }
}

/// Smooth vortex with homogeneous Dirichlet data, for the convergence study.
///
/// The velocity is the curl of the stream function
/// `cos^2(pi (x - 1/2)) cos^2(pi (y - 1/2)) cos(t) / (4 pi)`, so it is
/// exactly divergence-free and its trace vanishes on the boundary of the
/// unit square. The forcing depends on the viscosity.
pub fn convergence_problem(nu: f64) -> Result<ManufacturedProblem> {
    if nu <= 0.0 {
        return Err(Error::Invalid("viscosity must be positive".into()));
    }
    let trig = |x: f64, y: f64| {
        let xx = PI * (x - 0.5);
        let yy = PI * (y - 0.5);
        (xx.cos(), xx.sin(), yy.cos(), yy.sin())
    };
    Ok(ManufacturedProblem {
        name: "convergence",
        nu,
        final_time: 1.0,
        u: Box::new(move |x, y, t| {
            let (cx, sx, cy, sy) = trig(x, y);
            let ct = t.cos();
            [-0.5 * cx * cx * cy * sy * ct, 0.5 * cy * cy * cx * sx * ct]
        }),
        grad_u: Box::new(move |x, y, t| {
            let (cx, sx, cy, sy) = trig(x, y);
            let ct = t.cos();
            let c2x = cx * cx - sx * sx;
            let c2y = cy * cy - sy * sy;
            [
                [PI * cx * sx * cy * sy * ct, -0.5 * PI * cx * cx * c2y * ct],
                [0.5 * PI * c2x * cy * cy * ct, -PI * cx * sx * cy * sy * ct],
            ]
        }),
        p: Box::new(move |x, y, t| {
            let (_, sx, _, sy) = trig(x, y);
            (sx - sy) * t.cos()
        }),
        p_mean: Box::new(|_t| 0.0),
        f: Box::new(move |x, y, t| {
            let (cx, sx, cy, sy) = trig(x, y);
            let (ct, st) = (t.cos(), t.sin());
            let c2x = cx * cx - sx * sx;
            let c2y = cy * cy - sy * sy;
            let s2x = 2.0 * sx * cx;
            let s2y = 2.0 * sy * cy;
            [
                0.5 * cx * cx * cy * sy * st
                    - 0.25 * nu * PI * PI * s2y * (2.0 * c2x + 1.0) * ct
                    - 0.25 * PI * cx * cx * cx * sx * cy * cy * ct * ct
                    - PI * cx * ct,
                -0.5 * cx * sx * cy * cy * st
                    + 0.25 * nu * PI * PI * s2x * (2.0 * c2y + 1.0) * ct
                    - 0.25 * PI * cx * cx * cy * cy * cy * sy * ct * ct
                    + PI * cy * ct,
            ]
        }),
        curl_f: Box::new(move |x, y, t| {
            let (cx, sx, cy, sy) = trig(x, y);
            let (ct, st) = (t.cos(), t.sin());
            let c2x = cx * cx - sx * sx;
            let c2y = cy * cy - sy * sy;
            -0.5 * PI * st * (c2x * cy * cy + cx * cx * c2y)
                + 0.5 * nu * PI.powi(3) * ct * (c2x + c2y + 4.0 * c2x * c2y)
                + 0.5 * PI * PI * ct * ct * cx * sx * cy * sy * (cy * cy - cx * cx)
        }),
    })
}

/// Quadratic-in-space velocity with cubic pressure, for the pressure
/// robustness sweep.
///
/// The exact velocity lives in the discrete Scott-Vogelius space (it is
/// componentwise quadratic and linear in time), so the scheme reproduces it
/// to solver precision for every viscosity; the pressure does not, which is
/// exactly what makes this a pressure-robustness test.
pub fn robustness_problem(nu: f64) -> Result<ManufacturedProblem> {
    if nu <= 0.0 {
        return Err(Error::Invalid("viscosity must be positive".into()));
    }
    Ok(ManufacturedProblem {
        name: "robustness",
        nu,
        final_time: 1.0,
        u: Box::new(|x, y, t| [y * y * (t + 1.0), x * x * (t + 1.0)]),
        grad_u: Box::new(|x, y, t| {
            [[0.0, 2.0 * y * (t + 1.0)], [2.0 * x * (t + 1.0), 0.0]]
        }),
        // The constant 5/12 makes the spatial mean vanish for all t.
        p: Box::new(|x, y, t| {
            (x * x * y + y * y * y - 5.0 / 12.0) * (t * t * t - t + 1.0)
        }),
        p_mean: Box::new(|_t| 0.0),
        f: Box::new(move |x, y, t| {
            let s = t + 1.0;
            let q = t * t * t - t + 1.0;
            [
                y * y - nu * s + 2.0 * x * x * y * s * s - 2.0 * x * y * q,
                x * x - nu * s + 2.0 * x * y * y * s * s - (x * x + 3.0 * y * y) * q,
            ]
        }),
        curl_f: Box::new(|x, y, t| {
            let s = t + 1.0;
            2.0 * x - 2.0 * y + 2.0 * (y * y - x * x) * s * s
        }),
    })
}

/// Planar lattice flow: an array of spinning vortices whose edges touch,
/// decaying slowly in time.
///
/// With the viscous convention of this crate the strong residual of the
/// stated solution is `-4 nu pi^2 u`, a forcing of magnitude below `4e-4`
/// at the benchmark viscosity; it is kept in closed form here rather than
/// rounded to zero so that the residual oracle holds to machine precision.
/// The convective term and the pressure gradient cancel exactly.
pub fn lattice_vortex(nu: f64) -> Result<ManufacturedProblem> {
    if nu <= 0.0 {
        return Err(Error::Invalid("viscosity must be positive".into()));
    }
    let decay = move |t: f64| (-8.0 * nu * PI * PI * t).exp();
    Ok(ManufacturedProblem {
        name: "lattice",
        nu,
        final_time: 10.0,
        u: Box::new(move |x, y, t| {
            let g = decay(t);
            [
                (2.0 * PI * x).sin() * (2.0 * PI * y).sin() * g,
                (2.0 * PI * x).cos() * (2.0 * PI * y).cos() * g,
            ]
        }),
        grad_u: Box::new(move |x, y, t| {
            let g = decay(t);
            let (sx, cx) = ((2.0 * PI * x).sin(), (2.0 * PI * x).cos());
            let (sy, cy) = ((2.0 * PI * y).sin(), (2.0 * PI * y).cos());
            [
                [2.0 * PI * cx * sy * g, 2.0 * PI * sx * cy * g],
                [-2.0 * PI * sx * cy * g, -2.0 * PI * cx * sy * g],
            ]
        }),
        p: Box::new(move |x, y, t| {
            let g2 = (-16.0 * nu * PI * PI * t).exp();
            0.5 * ((2.0 * PI * x).sin().powi(2) + (2.0 * PI * y).cos().powi(2)) * g2
        }),
        p_mean: Box::new(move |t| 0.5 * (-16.0 * nu * PI * PI * t).exp()),
        f: Box::new(move |x, y, t| {
            let g = decay(t);
            let c = -4.0 * nu * PI * PI;
            [
                c * (2.0 * PI * x).sin() * (2.0 * PI * y).sin() * g,
                c * (2.0 * PI * x).cos() * (2.0 * PI * y).cos() * g,
            ]
        }),
        curl_f: Box::new(move |x, y, t| {
            16.0 * nu * PI.powi(3) * (2.0 * PI * x).sin() * (2.0 * PI * y).cos() * decay(t)
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Finite-difference strong residual of the momentum equation from the
    /// closed-form u and p alone: first derivatives with step 1e-6, second
    /// derivatives with step 1e-4.
    fn fd_residual(p: &ManufacturedProblem, x: f64, y: f64, t: f64) -> [f64; 2] {
        let h1 = 1e-6;
        let h2 = 1e-4;
        let u = |x: f64, y: f64, t: f64| (p.u)(x, y, t);
        let ut = [
            (u(x, y, t + h1)[0] - u(x, y, t - h1)[0]) / (2.0 * h1),
            (u(x, y, t + h1)[1] - u(x, y, t - h1)[1]) / (2.0 * h1),
        ];
        let dx = |c: usize| (u(x + h1, y, t)[c] - u(x - h1, y, t)[c]) / (2.0 * h1);
        let dy = |c: usize| (u(x, y + h1, t)[c] - u(x, y - h1, t)[c]) / (2.0 * h1);
        let grad = [[dx(0), dy(0)], [dx(1), dy(1)]];
        // div eps(u) = (Laplacian u + grad div u) / 2 via second differences.
        let mut div_eps = [0.0; 2];
        for c in 0..2 {
            let uxx =
                (u(x + h2, y, t)[c] - 2.0 * u(x, y, t)[c] + u(x - h2, y, t)[c]) / (h2 * h2);
            let uyy =
                (u(x, y + h2, t)[c] - 2.0 * u(x, y, t)[c] + u(x, y - h2, t)[c]) / (h2 * h2);
            div_eps[c] += 0.5 * (uxx + uyy);
        }
        let div = |x: f64, y: f64| {
            let gx = (u(x + h1, y, t)[0] - u(x - h1, y, t)[0]) / (2.0 * h1);
            let gy = (u(x, y + h1, t)[1] - u(x, y - h1, t)[1]) / (2.0 * h1);
            gx + gy
        };
        div_eps[0] += 0.5 * (div(x + h2, y) - div(x - h2, y)) / (2.0 * h2);
        div_eps[1] += 0.5 * (div(x, y + h2) - div(x, y - h2)) / (2.0 * h2);
        let uv = u(x, y, t);
        let conv = [
            grad[0][0] * uv[0] + grad[0][1] * uv[1],
            grad[1][0] * uv[0] + grad[1][1] * uv[1],
        ];
        let gp = [
            ((p.p)(x + h1, y, t) - (p.p)(x - h1, y, t)) / (2.0 * h1),
            ((p.p)(x, y + h1, t) - (p.p)(x, y - h1, t)) / (2.0 * h1),
        ];
        [
            ut[0] - p.nu * div_eps[0] + conv[0] - gp[0],
            ut[1] - p.nu * div_eps[1] + conv[1] - gp[1],
        ]
    }

    fn sample_points() -> Vec<(f64, f64, f64)> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        (0..20)
            .map(|_| {
                (
                    rng.gen_range(0.05..0.95),
                    rng.gen_range(0.05..0.95),
                    rng.gen_range(0.0..2.0),
                )
            })
            .collect()
    }

    fn check_problem(p: &ManufacturedProblem) {
        for &(x, y, t) in &sample_points() {
            // Divergence-free exact velocity.
            let g = (p.grad_u)(x, y, t);
            assert!(
                (g[0][0] + g[1][1]).abs() < 1e-10,
                "{}: div u = {}",
                p.name,
                g[0][0] + g[1][1]
            );
            // Closed-form gradient against finite differences.
            let h = 1e-6;
            for c in 0..2 {
                let fdx = ((p.u)(x + h, y, t)[c] - (p.u)(x - h, y, t)[c]) / (2.0 * h);
                let fdy = ((p.u)(x, y + h, t)[c] - (p.u)(x, y - h, t)[c]) / (2.0 * h);
                assert!((g[c][0] - fdx).abs() < 1e-8);
                assert!((g[c][1] - fdy).abs() < 1e-8);
            }
            // Closed-form f against the finite-difference strong residual.
            let f = (p.f)(x, y, t);
            let fd = fd_residual(p, x, y, t);
            let scale = f[0].abs().max(f[1].abs()).max(1.0);
            assert!(
                (f[0] - fd[0]).abs() / scale < 1e-6 && (f[1] - fd[1]).abs() / scale < 1e-6,
                "{}: f = {f:?}, fd = {fd:?} at ({x}, {y}, {t})",
                p.name
            );
            // curl f against first differences of the closed-form f.
            let cf = (p.curl_f)(x, y, t);
            let fd_cf = ((p.f)(x + h, y, t)[1] - (p.f)(x - h, y, t)[1]) / (2.0 * h)
                - ((p.f)(x, y + h, t)[0] - (p.f)(x, y - h, t)[0]) / (2.0 * h);
            assert!(
                (cf - fd_cf).abs() / cf.abs().max(1.0) < 1e-6,
                "{}: curl f = {cf}, fd = {fd_cf}",
                p.name
            );
            // Dirichlet data coincides with the exact trace.
            let d = p.dirichlet(0.0, y, t);
            let ue = (p.u)(0.0, y, t);
            assert_eq!(d, ue);
        }
    }

    #[test]
    fn convergence_problem_is_consistent() {
        check_problem(&convergence_problem(1.0).unwrap());
        check_problem(&convergence_problem(1e-11).unwrap());
    }

    #[test]
    fn robustness_problem_is_consistent() {
        check_problem(&robustness_problem(1.0).unwrap());
        check_problem(&robustness_problem(1e-7).unwrap());
    }

    #[test]
    fn lattice_problem_is_consistent() {
        check_problem(&lattice_vortex(1e-5).unwrap());
    }

    #[test]
    fn convergence_trace_vanishes_on_boundary() {
        let p = convergence_problem(1.0).unwrap();
        for s in [0.0, 0.13, 0.5, 0.77, 1.0] {
            for t in [0.0, 0.4, 1.0] {
                for (x, y) in [(0.0, s), (1.0, s), (s, 0.0), (s, 1.0)] {
                    let u = (p.u)(x, y, t);
                    assert!(u[0].abs() < 1e-15 && u[1].abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn convergence_f_matches_frozen_reference() {
        // Reference values computed with an independent symbolic derivation
        // of the strong residual.
        let p = convergence_problem(1.0).unwrap();
        let f = (p.f)(0.3, 0.7, 0.2);
        assert!((f[0] - -6.0275995671811073).abs() < 1e-12, "{}", f[0]);
        assert!((f[1] - -1.3530748646863069).abs() < 1e-12, "{}", f[1]);
        let cf = (p.curl_f)(0.3, 0.7, 0.2);
        assert!((cf - 15.067873154349172).abs() < 1e-11, "{cf}");
        let p = convergence_problem(1e-3).unwrap();
        let f = (p.f)(0.62, 0.12, 0.9);
        assert!((f[0] - -1.9411870756044515).abs() < 1e-12);
        assert!((f[1] - 0.71241155338009388).abs() < 1e-12);
        let p = convergence_problem(1e-11).unwrap();
        let cf = (p.curl_f)(0.85, 0.44, 1.7);
        assert!((cf - 0.58031016301397626).abs() < 1e-12);
    }

    #[test]
    fn robustness_divergence_and_mean_are_exact() {
        let p = robustness_problem(1e-9).unwrap();
        // div (y^2, x^2) = 0 identically.
        let g = (p.grad_u)(0.3, 0.9, 1.7);
        assert_eq!(g[0][0] + g[1][1], 0.0);
        // Spatial mean of x^2 y + y^3 - 5/12 over the unit square is zero:
        // the polynomial integrals are 1/6 and 1/4.
        assert!((1.0f64 / 6.0 + 1.0 / 4.0 - 5.0 / 12.0).abs() < 1e-16);
    }

    #[test]
    fn lattice_amplitude_and_bounds() {
        let p = lattice_vortex(1e-5).unwrap();
        // Amplitude factor at the final time.
        let g = (-8.0 * 1e-5 * PI * PI * 10.0f64).exp();
        assert!((g - 0.99213).abs() < 1e-5, "{g}");
        let u = (p.u)(0.125, 0.125, 10.0);
        assert!((u[0] / g - 0.5).abs() < 1e-12);
        // |u| <= 1 everywhere for all positive times.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let (x, y, t) = (rng.gen::<f64>(), rng.gen::<f64>(), 10.0 * rng.gen::<f64>());
            let u = (p.u)(x, y, t);
            assert!((u[0] * u[0] + u[1] * u[1]).sqrt() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn lattice_forcing_is_negligibly_small() {
        // The stated solution leaves a strong residual of -4 nu pi^2 u; at
        // the benchmark viscosity that is a forcing below 4e-4 in magnitude.
        let p = lattice_vortex(1e-5).unwrap();
        for &(x, y, t) in &sample_points() {
            let f = (p.f)(x, y, t);
            let u = (p.u)(x, y, t);
            let bound = 4.0 * 1e-5 * PI * PI * (u[0] * u[0] + u[1] * u[1]).sqrt() + 1e-15;
            assert!((f[0] * f[0] + f[1] * f[1]).sqrt() <= bound * (1.0 + 1e-12));
            assert!((f[0] * f[0] + f[1] * f[1]).sqrt() < 4e-4);
        }
    }

    #[test]
    fn by_name_lookup() {
        assert!(ManufacturedProblem::by_name("convergence", None).is_ok());
        assert!(ManufacturedProblem::by_name("robustness", Some(1e-7)).is_ok());
        assert!(ManufacturedProblem::by_name("lattice", None).is_ok());
        match ManufacturedProblem::by_name("vortex", None) {
            Err(err) => assert!(err.to_string().contains("convergence")),
            Ok(_) => panic!("expected an error for an unknown problem name"),
        }
    }
}
