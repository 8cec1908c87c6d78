//! Weighted Laplacian, carre du champ operators, curvature tensors and
//! curvature-dimension checks.
//!
//! The weighted Laplacian is discretised in divergence form
//! `exp(phi) d/dx (exp(-phi) du/dx)` with the conductivity evaluated at
//! half nodes. Together with the trapezoid masses this gives exact
//! summation by parts: the matrix is self-adjoint in the discrete
//! `L^2(mu)` inner product and annihilates constants, which the semigroup
//! and nonlinear solvers rely on. Neumann walls get the zero-flux closure
//! (first-order pointwise at the wall itself, conservative globally);
//! Dirichlet walls are pinned. `gamma1`/`gamma2` are computed from the
//! product definitions, never from gradients, so the gradient identities
//! stay genuine tests.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec;
use crate::field::ScalarField;
use crate::linalg::Tridiag;
use crate::report::{InequalityReport, MarginSample, SampleCoord};
use crate::space::{Boundary, WeightedSpace};

/// Builds the tridiagonal matrix of the weighted Laplacian with boundary closure.
pub fn laplacian_matrix(space: &WeightedSpace) -> Tridiag {
    let n = space.node_count();
    let h = space.h();
    let h2 = h * h;
    let nodes = space.nodes();
    let w = space.weight();
    let periodic = space.is_periodic();

    // Shared edge weights: edge i joins node i and node i+1 (mod n on the circle).
    let edge_count = if periodic { n } else { n - 1 };
    let edge_phi: Vec<f64> = (0..edge_count).map(|i| w.phi(nodes[0] + (i as f64 + 0.5) * h)).collect();
    let node_phi: Vec<f64> = nodes.iter().map(|&x| w.phi(x)).collect();

    let mut m = Tridiag::zeros(n, periodic);
    if periodic {
        for i in 0..n {
            let e_plus = edge_phi[i];
            let e_minus = edge_phi[(i + n - 1) % n];
            let c_plus = (node_phi[i] - e_plus).exp() / h2;
            let c_minus = (node_phi[i] - e_minus).exp() / h2;
            m.diag[i] = -(c_plus + c_minus);
            if i + 1 < n {
                m.sup[i] = c_plus;
            }
            if i > 0 {
                m.sub[i - 1] = c_minus;
            }
        }
        let c0_minus = (node_phi[0] - edge_phi[n - 1]).exp() / h2;
        let clast_plus = (node_phi[n - 1] - edge_phi[n - 1]).exp() / h2;
        m.wrap = Some((c0_minus, clast_plus));
    } else {
        for i in 1..n - 1 {
            let c_plus = (node_phi[i] - edge_phi[i]).exp() / h2;
            let c_minus = (node_phi[i] - edge_phi[i - 1]).exp() / h2;
            m.diag[i] = -(c_plus + c_minus);
            m.sup[i] = c_plus;
            m.sub[i - 1] = c_minus;
        }
        match space.kind().boundary() {
            Boundary::Neumann => {
                // Zero flux through the wall; boundary cells have width h/2.
                let c_plus = (node_phi[0] - edge_phi[0]).exp() / h2;
                m.diag[0] = -2.0 * c_plus;
                m.sup[0] = 2.0 * c_plus;
                let c_minus = (node_phi[n - 1] - edge_phi[n - 2]).exp() / h2;
                m.diag[n - 1] = -2.0 * c_minus;
                m.sub[n - 2] = 2.0 * c_minus;
            }
            Boundary::Dirichlet => {
                // Pinned rows: the generator vanishes at held boundary nodes.
                m.diag[0] = 0.0;
                m.sup[0] = 0.0;
                m.diag[n - 1] = 0.0;
                m.sub[n - 2] = 0.0;
            }
        }
    }
    m
}

/// First derivative: central differences, one-sided second order at walls.
pub fn gradient(f: &ScalarField) -> ScalarField {
    let space = f.space();
    let u = f.values();
    let n = u.len();
    let h = space.h();
    let mut g = vec![0.0; n];
    if space.is_periodic() {
        for i in 0..n {
            let ip = (i + 1) % n;
            let im = (i + n - 1) % n;
            g[i] = (u[ip] - u[im]) / (2.0 * h);
        }
    } else {
        g[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
        for i in 1..n - 1 {
            g[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
        }
        g[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
    }
    ScalarField::from_values(space, g).expect("gradient length matches")
}

/// Second derivative: central differences, one-sided second order at walls.
pub fn second_derivative(f: &ScalarField) -> ScalarField {
    let space = f.space();
    let u = f.values();
    let n = u.len();
    let h2 = space.h() * space.h();
    let mut g = vec![0.0; n];
    if space.is_periodic() {
        for i in 0..n {
            let ip = (i + 1) % n;
            let im = (i + n - 1) % n;
            g[i] = (u[ip] - 2.0 * u[i] + u[im]) / h2;
        }
    } else {
        g[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / h2;
        for i in 1..n - 1 {
            g[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / h2;
        }
        g[n - 1] = (2.0 * u[n - 1] - 5.0 * u[n - 2] + 4.0 * u[n - 3] - u[n - 4]) / h2;
    }
    ScalarField::from_values(space, g).expect("second derivative length matches")
}

/// Weighted Laplacian `u'' - phi' u'` (divergence form with boundary closure).
pub fn laplacian_phi(f: &ScalarField) -> ScalarField {
    let m = laplacian_matrix(f.space());
    apply_matrix(&m, f)
}

fn apply_matrix(m: &Tridiag, f: &ScalarField) -> ScalarField {
    ScalarField::from_values(f.space(), m.matvec(f.values())).expect("matvec length matches")
}

fn gamma1_values(m: &Tridiag, u: &[f64], v: &[f64]) -> Vec<f64> {
    let prod: Vec<f64> = u.iter().zip(v.iter()).map(|(a, b)| a * b).collect();
    let l_prod = m.matvec(&prod);
    let lu = m.matvec(u);
    let lv = m.matvec(v);
    (0..u.len())
        .map(|i| 0.5 * (l_prod[i] - u[i] * lv[i] - v[i] * lu[i]))
        .collect()
}

/// Carre du champ `1/2 [L(uv) - u Lv - v Lu]`, computed from the product rule.
pub fn gamma1(u: &ScalarField, v: &ScalarField) -> Result<ScalarField> {
    u.require_same_space(v)?;
    let m = laplacian_matrix(u.space());
    let vals = gamma1_values(&m, u.values(), v.values());
    ScalarField::from_values(u.space(), vals)
}

fn gamma2_values(m: &Tridiag, u: &[f64]) -> Vec<f64> {
    let g = gamma1_values(m, u, u);
    let lg = m.matvec(&g);
    let lu = m.matvec(u);
    let g_u_lu = gamma1_values(m, u, &lu);
    (0..u.len()).map(|i| 0.5 * lg[i] - g_u_lu[i]).collect()
}

/// Iterated carre du champ `1/2 [L Gamma(u,u) - 2 Gamma(u, Lu)]`.
pub fn gamma2(u: &ScalarField) -> ScalarField {
    let m = laplacian_matrix(u.space());
    ScalarField::from_values(u.space(), gamma2_values(&m, u.values())).expect("length matches")
}

/// Bakry-Emery tensor on a 1-D base: `phi'' - phi'^2 / (m - 1)` for finite
/// `m`, `phi''` for `m = inf`.
pub fn ricci_phi_m(space: &Arc<WeightedSpace>, m: f64) -> Result<ScalarField> {
    if !(m > 1.0) {
        return Err(Error::InvalidParam(format!(
            "dimension parameter must exceed the base dimension 1 (or be infinite), got {m}"
        )));
    }
    let w = space.weight().clone();
    Ok(ScalarField::from_fn(space, |x| {
        let dd = w.phi_double_prime(x);
        if m.is_infinite() {
            dd
        } else {
            let d = w.phi_prime(x);
            dd - d * d / (m - 1.0)
        }
    }))
}

/// Parameters of the curvature-dimension condition `CD(k, m)`.
#[derive(Debug, Clone, Copy)]
pub struct CDParams {
    pub k: f64,
    pub m: f64,
}

impl CDParams {
    /// `m` may be `f64::INFINITY`; finite values must exceed the base dimension 1.
    pub fn new(k: f64, m: f64) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::InvalidParam(format!("curvature bound must be finite, got {k}")));
        }
        if !(m > 1.0) {
            return Err(Error::InvalidParam(format!(
                "dimension parameter must exceed 1 (infinity allowed), got {m}"
            )));
        }
        Ok(CDParams { k, m })
    }
}

/// Scale of the fourth difference quotient of `u`, used to calibrate the
/// discretisation tolerance of nested second-order stencils.
fn fourth_difference_scale(space: &WeightedSpace, u: &[f64]) -> f64 {
    let n = u.len();
    let h4 = space.h().powi(4);
    let mut worst: f64 = 0.0;
    let idx: Box<dyn Iterator<Item = usize>> = if space.is_periodic() {
        Box::new(0..n)
    } else {
        Box::new(2..n - 2)
    };
    for i in idx {
        let (im2, im1, ip1, ip2) = if space.is_periodic() {
            ((i + n - 2) % n, (i + n - 1) % n, (i + 1) % n, (i + 2) % n)
        } else {
            (i - 2, i - 1, i + 1, i + 2)
        };
        let d4 = (u[im2] - 4.0 * u[im1] + 6.0 * u[i] - 4.0 * u[ip1] + u[ip2]) / h4;
        worst = worst.max(d4.abs());
    }
    worst
}

/// Per-probe margins of `Gamma_2(w) >= (1/m)(Lw)^2 + k Gamma(w)` on
/// interior nodes, along with the grid-calibrated tolerance. This is the
/// sequential kernel behind [`cd_check`].
pub fn cd_probe_margins(
    space: &Arc<WeightedSpace>,
    params: &CDParams,
    probe: &ScalarField,
) -> (Vec<MarginSample>, f64) {
    let m = laplacian_matrix(space);
    cd_probe_margins_with(&m, space, params, probe)
}

fn cd_probe_margins_with(
    matrix: &Tridiag,
    space: &WeightedSpace,
    params: &CDParams,
    probe: &ScalarField,
) -> (Vec<MarginSample>, f64) {
    let u = probe.values();
    let g1 = gamma1_values(matrix, u, u);
    let g2 = gamma2_values(matrix, u);
    let lu = matrix.matvec(u);
    let h = space.h();
    let scale4 = fourth_difference_scale(space, u);
    let amp = 1.0 + probe.linf_norm();
    // Two nested second differences amplify rounding by 1/h^4; the floor
    // tracks that, the h^2 term tracks the stencil truncation error.
    let roundoff = 64.0 * f64::EPSILON * amp * amp / h.powi(4);
    let tol = 10.0 * h * h * scale4 + roundoff;
    let inv_m = if params.m.is_infinite() { 0.0 } else { 1.0 / params.m };
    let samples: Vec<MarginSample> = space
        .interior_range(2)
        .map(|i| MarginSample {
            coord: SampleCoord::Node(space.nodes()[i]),
            lhs: inv_m * lu[i] * lu[i] + params.k * g1[i],
            rhs: g2[i],
            tol,
        })
        .collect();
    (samples, tol)
}

/// Checks `CD(k, m)` over a probe set; the worst margin and per-probe
/// tolerances are recorded in the report.
pub fn cd_check(
    space: &Arc<WeightedSpace>,
    params: &CDParams,
    probes: &[ScalarField],
) -> Result<InequalityReport> {
    if probes.is_empty() {
        return Err(Error::EmptyInput("curvature-dimension probe list"));
    }
    for p in probes {
        if !std::sync::Arc::ptr_eq(p.space(), space) {
            return Err(Error::SpaceMismatch);
        }
    }
    let matrix = laplacian_matrix(space);
    let per_probe = exec::map(probes, |p| cd_probe_margins_with(&matrix, space, params, p));
    let mut samples = Vec::new();
    let mut report_meta = Vec::new();
    for (idx, (probe_samples, tol)) in per_probe.into_iter().enumerate() {
        let worst = probe_samples
            .iter()
            .map(MarginSample::margin)
            .fold(f64::INFINITY, f64::min);
        report_meta.push((
            format!("probe_{idx}_worst_margin"),
            format!("{worst:.6e} (tol {tol:.3e})"),
        ));
        samples.extend(probe_samples.into_iter().map(|mut s| {
            if let SampleCoord::Node(x) = s.coord {
                s.coord = SampleCoord::SpaceTime { x, t: idx as f64 };
            }
            s
        }));
    }
    let mut report = InequalityReport::from_samples(
        format!("cd({},{})", params.k, params.m),
        samples,
    );
    report.metadata = report_meta;
    report = report.with_metadata(
        "dimension_convention",
        "any m > 1 accepted for the 1-D base; stated lower bounds vary between m >= 2 and m >= n",
    );
    Ok(report)
}

/// Sup-norm residual of the pointwise curvature identity
/// `1/2 L|grad u|^2 - <grad u, grad Lu> = |Hess u|^2 + Ric_phi(grad u, grad u)`
/// over interior nodes.
pub fn bochner_residual(u: &ScalarField) -> f64 {
    let space = u.space();
    let g = gradient(u);
    let g_sq = g.map(|v| v * v);
    let lhs1 = laplacian_phi(&g_sq);
    let lu = laplacian_phi(u);
    let grad_lu = gradient(&lu);
    let hess = second_derivative(u);
    let w = space.weight().clone();
    let mut worst: f64 = 0.0;
    for i in space.interior_range(2) {
        let x = space.nodes()[i];
        let ric = w.phi_double_prime(x);
        let lhs = 0.5 * lhs1.values()[i] - g.values()[i] * grad_lu.values()[i];
        let rhs = hess.values()[i] * hess.values()[i] + ric * g.values()[i] * g.values()[i];
        worst = worst.max((lhs - rhs).abs());
    }
    worst
}

/// Jacobi polynomial of degree `k` via the three-term recurrence.
pub fn jacobi_polynomial(alpha: f64, beta: f64, k: usize, t: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let p1 = 0.5 * (alpha + beta + 2.0) * t + 0.5 * (alpha - beta);
    if k == 1 {
        return p1;
    }
    let mut pm2 = 1.0;
    let mut pm1 = p1;
    for deg in 2..=k {
        let n = deg as f64;
        let c = 2.0 * n + alpha + beta;
        let a1 = 2.0 * n * (n + alpha + beta) * (c - 2.0);
        let a2 = (c - 1.0) * (alpha * alpha - beta * beta);
        let a3 = (c - 1.0) * c * (c - 2.0);
        let a4 = 2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * c;
        let p = ((a2 + a3 * t) * pm1 - a4 * pm2) / a1;
        pm2 = pm1;
        pm1 = p;
    }
    pm1
}

/// Applies the discrete Jacobi operator to the degree-`kdeg` polynomial and
/// reports the sup-norm eigen-equation residual with default resolution.
pub fn jacobi_eigencheck(alpha: f64, beta: f64, kdeg: usize) -> Result<InequalityReport> {
    jacobi_eigencheck_with(alpha, beta, kdeg, 513, 1e-3)
}

/// As [`jacobi_eigencheck`] with explicit node count and edge inset `delta`.
pub fn jacobi_eigencheck_with(
    alpha: f64,
    beta: f64,
    kdeg: usize,
    nodes: usize,
    delta: f64,
) -> Result<InequalityReport> {
    if !(alpha > -1.0) || !(beta > -1.0) {
        return Err(Error::InvalidParam(format!(
            "Jacobi parameters need alpha, beta > -1, got alpha={alpha}, beta={beta}"
        )));
    }
    if kdeg > 10 {
        return Err(Error::InvalidParam(format!(
            "recurrence-generated polynomials are limited to degree 10, got {kdeg}"
        )));
    }
    if nodes < 16 || !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidParam("jacobi grid needs nodes >= 16 and delta in (0, 1/2)".into()));
    }
    let lo = -1.0 + delta;
    let hi = 1.0 - delta;
    let h = (hi - lo) / (nodes - 1) as f64;
    let t: Vec<f64> = (0..nodes).map(|i| lo + i as f64 * h).collect();
    let y: Vec<f64> = t.iter().map(|&ti| jacobi_polynomial(alpha, beta, kdeg, ti)).collect();

    let n = nodes;
    let mut dy = vec![0.0; n];
    let mut ddy = vec![0.0; n];
    dy[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
    dy[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h);
    ddy[0] = (2.0 * y[0] - 5.0 * y[1] + 4.0 * y[2] - y[3]) / (h * h);
    ddy[n - 1] = (2.0 * y[n - 1] - 5.0 * y[n - 2] + 4.0 * y[n - 3] - y[n - 4]) / (h * h);
    for i in 1..n - 1 {
        dy[i] = (y[i + 1] - y[i - 1]) / (2.0 * h);
        ddy[i] = (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h);
    }

    let lambda = kdeg as f64 * (kdeg as f64 + alpha + beta + 1.0);
    let ly: Vec<f64> = (0..n)
        .map(|i| (1.0 - t[i] * t[i]) * ddy[i] - (alpha - beta + (alpha + beta + 2.0) * t[i]) * dy[i])
        .collect();

    // Fourth-difference scale of the polynomial drives the stencil error.
    let mut scale4: f64 = 0.0;
    for i in 2..n - 2 {
        let d4 = (y[i - 2] - 4.0 * y[i - 1] + 6.0 * y[i] - 4.0 * y[i + 1] + y[i + 2]) / h.powi(4);
        scale4 = scale4.max(d4.abs());
    }
    let y_amp = y.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let tol = 10.0 * h * h * scale4 + 1e-9 * (1.0 + lambda) * (1.0 + y_amp);

    let samples: Vec<MarginSample> = (2..n - 2)
        .map(|i| MarginSample {
            coord: SampleCoord::Node(t[i]),
            lhs: (ly[i] + lambda * y[i]).abs(),
            rhs: 0.0,
            tol,
        })
        .collect();

    let num: f64 = (0..n).map(|i| ly[i] * y[i]).sum();
    let den: f64 = (0..n).map(|i| y[i] * y[i]).sum();
    let eigen_est = num / den;

    let report = InequalityReport::from_samples(
        format!("jacobi-eigen(alpha={alpha}, beta={beta}, k={kdeg})"),
        samples,
    )
    .with_metadata("eigenvalue_expected", format!("{:.12e}", -lambda))
    .with_metadata("eigenvalue_estimated", format!("{eigen_est:.12e}"))
    .with_metadata("grid_h", format!("{h:.6e}"));
    Ok(report)
}

/// Estimated eigenvalue stored by [`jacobi_eigencheck`], parsed back out of
/// the report metadata.
pub fn jacobi_eigen_estimate(report: &InequalityReport) -> Option<f64> {
    report
        .metadata
        .iter()
        .find(|(k, _)| k == "eigenvalue_estimated")
        .and_then(|(_, v)| v.parse().ok())
}
