//! The diffusion coefficient `a`, its transverse averaging, and the
//! effective coefficient on the curve.
//!
//! Coefficients come in two flavours: declared directly on the reference
//! cylinder in (s, t) coordinates (constant, piecewise-in-t, surface times
//! profile) or as plane fields composed with the tube chart (closed-form
//! expressions, tabulated grids). Averages are taken against the tube
//! Jacobian weight, split exactly at the t = 0 jump line.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{CurveGeometry, TubeDescriptor};
use crate::linalg::gauss_legendre;

mod expr;
pub use expr::Expr;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Variants of the non-homogeneity.
#[derive(Clone)]
pub enum Kind {
    /// `a = value` everywhere.
    Constant(f64),
    /// `a = a_minus` for t < 0, `a_plus` for t > 0; the mean on the jump
    /// line itself (measure zero, fixed for reproducibility).
    PiecewiseTransverse { a_minus: f64, a_plus: f64 },
    /// Separable reference-coordinate field `a(s, t) = surface(s) * profile(t)`.
    SurfaceTimesProfile { surface: ScalarFn, profile: ScalarFn },
    /// Plane field evaluated at the tube chart image.
    CartesianField(Expr),
    /// Plane field sampled on a rectangular grid, bilinear interpolation.
    Tabulated(BilinearGrid),
}

/// The coefficient together with its declared bounds: `c <= a <= 1/c`
/// pointwise and `|d a_eps / d s| <= grad_bound`.
#[derive(Clone)]
pub struct CoefficientModel {
    kind: Kind,
    lower_bound: Option<f64>,
    grad_bound: Option<f64>,
}

impl fmt::Debug for CoefficientModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match &self.kind {
            Kind::Constant(v) => format!("constant({v})"),
            Kind::PiecewiseTransverse { a_minus, a_plus } => {
                format!("piecewise_t({a_minus}, {a_plus})")
            }
            Kind::SurfaceTimesProfile { .. } => "surface_times_profile".into(),
            Kind::CartesianField(_) => "cartesian".into(),
            Kind::Tabulated(_) => "tabulated".into(),
        };
        f.debug_struct("CoefficientModel")
            .field("kind", &name)
            .field("lower_bound", &self.lower_bound)
            .field("grad_bound", &self.grad_bound)
            .finish()
    }
}

impl CoefficientModel {
    pub fn constant(value: f64) -> Self {
        Self::from_kind(Kind::Constant(value))
    }

    pub fn piecewise(a_minus: f64, a_plus: f64) -> Self {
        Self::from_kind(Kind::PiecewiseTransverse { a_minus, a_plus })
    }

    pub fn cartesian(expr: &str) -> Result<Self> {
        Ok(Self::from_kind(Kind::CartesianField(Expr::parse(expr)?)))
    }

    pub fn surface_profile(
        surface: impl Fn(f64) -> f64 + Send + Sync + 'static,
        profile: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::from_kind(Kind::SurfaceTimesProfile {
            surface: Arc::new(surface),
            profile: Arc::new(profile),
        })
    }

    pub fn tabulated(grid: BilinearGrid) -> Self {
        Self::from_kind(Kind::Tabulated(grid))
    }

    pub fn from_kind(kind: Kind) -> Self {
        CoefficientModel {
            kind,
            lower_bound: None,
            grad_bound: None,
        }
    }

    /// Declare the uniform bound `c` (so `c <= a <= 1/c`) and the
    /// longitudinal gradient bound.
    pub fn with_bounds(mut self, lower_bound: Option<f64>, grad_bound: Option<f64>) -> Self {
        self.lower_bound = lower_bound;
        self.grad_bound = grad_bound;
        self
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn declared_lower_bound(&self) -> Option<f64> {
        self.lower_bound
    }

    pub fn declared_grad_bound(&self) -> Option<f64> {
        self.grad_bound
    }

    /// Evaluate `a_eps(s, t)`: reference-coordinate kinds read (s, t)
    /// directly, plane-field kinds go through the tube chart.
    pub fn evaluate(&self, tube: &TubeDescriptor, s: f64, t: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&t) {
            return Err(Error::TransverseOutOfRange(t));
        }
        let v = match &self.kind {
            Kind::Constant(v) => *v,
            Kind::PiecewiseTransverse { a_minus, a_plus } => {
                if t < 0.0 {
                    *a_minus
                } else if t > 0.0 {
                    *a_plus
                } else {
                    0.5 * (a_minus + a_plus)
                }
            }
            Kind::SurfaceTimesProfile { surface, profile } => surface(s) * profile(t),
            Kind::CartesianField(expr) => {
                let p = tube.map(s, t)?;
                expr.eval(p[0], p[1])
            }
            Kind::Tabulated(grid) => {
                let p = tube.map(s, t)?;
                grid.eval(p[0], p[1])?
            }
        };
        if v <= 0.0 {
            return Err(Error::NonPositiveCoefficient { value: v, s, t });
        }
        Ok(v)
    }

    /// Weighted transverse average `<a_eps>(s) = int_-1^1 a f dt` with the
    /// tube Jacobian weight, by Gauss-Legendre of the given order on each
    /// half-interval (exact split at the t = 0 jump line).
    pub fn transverse_average(
        &self,
        tube: &TubeDescriptor,
        s: f64,
        quadrature_order: usize,
    ) -> Result<f64> {
        if quadrature_order < 2 {
            return Err(Error::QuadratureOrderTooSmall(quadrature_order));
        }
        let (x, w) = gauss_legendre(quadrature_order);
        let mut total = 0.0;
        for (lo, hi) in [(-1.0, 0.0), (0.0, 1.0)] {
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            for (&xi, &wi) in x.iter().zip(&w) {
                let t = mid + half * xi;
                let a = self.evaluate(tube, s, t)?;
                let f = tube.jacobian(s, t)?;
                total += wi * half * a * f;
            }
        }
        Ok(total)
    }

    /// The effective coefficient on the curve: the small-width limit of
    /// half the weighted transverse average. Closed-form kinds take their
    /// analytic limit; tabulated plane fields are Richardson-extrapolated
    /// over the ladder eps0, eps0/2, eps0/4.
    pub fn effective(&self, geometry: &Arc<CurveGeometry>) -> Result<EffectiveCoefficient> {
        let n = geometry.n_samples();
        let svals: Vec<f64> = (0..n)
            .map(|i| geometry.length() * i as f64 / n as f64)
            .collect();
        match &self.kind {
            Kind::Constant(v) => Ok(EffectiveCoefficient::analytic(vec![*v; n], geometry)),
            Kind::PiecewiseTransverse { a_minus, a_plus } => Ok(EffectiveCoefficient::analytic(
                vec![0.5 * (a_minus + a_plus); n],
                geometry,
            )),
            Kind::SurfaceTimesProfile { surface, profile } => {
                // half the plain t-integral of the profile
                let (x, w) = gauss_legendre(16);
                let mut pint = 0.0;
                for (lo, hi) in [(-1.0f64, 0.0f64), (0.0, 1.0)] {
                    let mid = 0.5 * (lo + hi);
                    let half = 0.5 * (hi - lo);
                    for (&xi, &wi) in x.iter().zip(&w) {
                        pint += wi * half * profile(mid + half * xi);
                    }
                }
                let vals = svals.iter().map(|&s| surface(s) * 0.5 * pint).collect();
                Ok(EffectiveCoefficient::analytic(vals, geometry))
            }
            Kind::CartesianField(expr) => {
                let vals = svals
                    .iter()
                    .map(|&s| {
                        let p = geometry.point_at(s);
                        expr.eval(p[0], p[1])
                    })
                    .collect();
                Ok(EffectiveCoefficient::analytic(vals, geometry))
            }
            Kind::Tabulated(_) => {
                let rho = geometry.rho();
                let scale = if rho.is_finite() {
                    rho
                } else {
                    geometry.length() / (2.0 * std::f64::consts::PI)
                };
                let eps0 = 0.05 * scale;
                let ladder: Vec<Vec<f64>> = [eps0, 0.5 * eps0, 0.25 * eps0]
                    .iter()
                    .map(|&e| {
                        let tube = TubeDescriptor::validate(geometry, e)?;
                        svals
                            .iter()
                            .map(|&s| Ok(0.5 * self.transverse_average(&tube, s, 8)?))
                            .collect::<Result<Vec<f64>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mut vals = vec![0.0; n];
                let mut worst = 0.0f64;
                for i in 0..n {
                    let r1a = 2.0 * ladder[1][i] - ladder[0][i];
                    let r1b = 2.0 * ladder[2][i] - ladder[1][i];
                    worst = worst.max((r1b - r1a).abs() / r1b.abs().max(1.0));
                    vals[i] = (4.0 * r1b - r1a) / 3.0;
                }
                if worst > 1e-3 {
                    return Err(Error::ExtrapolationDiverged(worst));
                }
                Ok(EffectiveCoefficient {
                    values: vals,
                    length: geometry.length(),
                    provenance: Provenance::Extrapolated,
                })
            }
        }
    }

    /// Sup-norm deviation of the finite-width average from twice the
    /// effective coefficient, over the geometry sample grid.
    pub fn deviation(&self, tube: &TubeDescriptor) -> Result<f64> {
        let geometry = tube.geometry();
        let abar = self.effective(geometry)?;
        let n = geometry.n_samples();
        let mut worst = 0.0f64;
        for i in 0..n {
            let s = geometry.length() * i as f64 / n as f64;
            let avg = self.transverse_average(tube, s, 8)?;
            worst = worst.max((avg - 2.0 * abar.values[i]).abs());
        }
        Ok(worst)
    }

    /// Scan min/max of `a` and max |d a_eps / d s| on an (n_s x n_t) grid
    /// and compare with the declared bounds. Failures are reported, not
    /// raised.
    pub fn verify_bounds(&self, tube: &TubeDescriptor, n_s: usize, n_t: usize) -> Result<BoundsReport> {
        assert!(n_s >= 3 && n_t >= 2, "grid too small to scan");
        let length = tube.geometry().length();
        let h = length / n_s as f64;
        let mut min_a = f64::INFINITY;
        let mut max_a = f64::NEG_INFINITY;
        let mut max_ds = 0.0f64;
        for j in 0..=n_t {
            let t = -1.0 + 2.0 * j as f64 / n_t as f64;
            let row: Vec<f64> = (0..n_s)
                .map(|i| self.evaluate(tube, i as f64 * h, t))
                .collect::<Result<_>>()?;
            for i in 0..n_s {
                min_a = min_a.min(row[i]);
                max_a = max_a.max(row[i]);
                let dv = (row[(i + 1) % n_s] - row[(i + n_s - 1) % n_s]) / (2.0 * h);
                max_ds = max_ds.max(dv.abs());
            }
        }
        let c_observed = min_a.min(1.0 / max_a);
        let pass_c = self.lower_bound.map_or(true, |c| c <= c_observed + 1e-12);
        let pass_d = self.grad_bound.map_or(true, |d| max_ds <= d + 1e-12);
        Ok(BoundsReport {
            c_observed,
            d_observed: max_ds,
            min_a,
            max_a,
            pass: pass_c && pass_d,
        })
    }
}

/// Result of a bounds scan.
#[derive(Debug, Clone, Copy)]
pub struct BoundsReport {
    /// Largest `c` with `c <= a <= 1/c` on the scanned grid.
    pub c_observed: f64,
    /// Largest longitudinal difference quotient seen.
    pub d_observed: f64,
    pub min_a: f64,
    pub max_a: f64,
    pub pass: bool,
}

/// Provenance of an effective coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    Extrapolated,
}

/// The effective coefficient sampled on the geometry grid.
#[derive(Debug, Clone)]
pub struct EffectiveCoefficient {
    values: Vec<f64>,
    length: f64,
    pub provenance: Provenance,
}

impl EffectiveCoefficient {
    fn analytic(values: Vec<f64>, geometry: &Arc<CurveGeometry>) -> Self {
        EffectiveCoefficient {
            values,
            length: geometry.length(),
            provenance: Provenance::Analytic,
        }
    }

    /// Build directly from samples (used by tests and bespoke pipelines).
    pub fn from_samples(values: Vec<f64>, length: f64) -> Self {
        EffectiveCoefficient {
            values,
            length,
            provenance: Provenance::Analytic,
        }
    }

    pub fn samples(&self) -> &[f64] {
        &self.values
    }

    /// Periodic linear interpolation.
    pub fn at(&self, s: f64) -> f64 {
        let n = self.values.len();
        let h = self.length / n as f64;
        let u = (s / h).rem_euclid(n as f64);
        let i = (u.floor() as usize) % n;
        let w = u - u.floor();
        (1.0 - w) * self.values[i] + w * self.values[(i + 1) % n]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Rectangular grid of plane-field samples with bilinear interpolation.
#[derive(Debug, Clone)]
pub struct BilinearGrid {
    x0: f64,
    y0: f64,
    dx: f64,
    dy: f64,
    nx: usize,
    ny: usize,
    /// row-major: values[j * nx + i] at (x0 + i dx, y0 + j dy)
    values: Vec<f64>,
}

impl BilinearGrid {
    pub fn new(x0: f64, y0: f64, dx: f64, dy: f64, nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        if nx < 2 || ny < 2 || values.len() != nx * ny {
            return Err(Error::TabulatedFormat(format!(
                "need nx, ny >= 2 and nx*ny values, got {}x{} with {}",
                nx,
                ny,
                values.len()
            )));
        }
        if dx <= 0.0 || dy <= 0.0 {
            return Err(Error::TabulatedFormat("grid spacing must be positive".into()));
        }
        Ok(BilinearGrid {
            x0,
            y0,
            dx,
            dy,
            nx,
            ny,
            values,
        })
    }

    /// Parse `x,y,a` rows forming a complete rectangular lattice. Lines
    /// beginning with `#` and a leading header row are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut pts: Vec<(f64, f64, f64)> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != 3 {
                return Err(Error::TabulatedFormat(format!(
                    "expected 3 columns, got {}: {line}",
                    cols.len()
                )));
            }
            match (
                cols[0].parse::<f64>(),
                cols[1].parse::<f64>(),
                cols[2].parse::<f64>(),
            ) {
                (Ok(x), Ok(y), Ok(v)) => pts.push((x, y, v)),
                _ if pts.is_empty() => continue, // header row
                _ => {
                    return Err(Error::TabulatedFormat(format!("non-numeric row: {line}")));
                }
            }
        }
        if pts.is_empty() {
            return Err(Error::TabulatedFormat("no data rows".into()));
        }
        let mut xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let mut ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        ys.sort_by(f64::total_cmp);
        ys.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let (nx, ny) = (xs.len(), ys.len());
        if nx * ny != pts.len() {
            return Err(Error::TabulatedFormat(format!(
                "{} points do not fill a {}x{} lattice",
                pts.len(),
                nx,
                ny
            )));
        }
        let dx = (xs[nx - 1] - xs[0]) / (nx - 1) as f64;
        let dy = (ys[ny - 1] - ys[0]) / (ny - 1) as f64;
        for (i, &x) in xs.iter().enumerate() {
            if (x - (xs[0] + i as f64 * dx)).abs() > 1e-9 * dx.abs().max(1.0) {
                return Err(Error::TabulatedFormat("x coordinates not uniform".into()));
            }
        }
        for (j, &y) in ys.iter().enumerate() {
            if (y - (ys[0] + j as f64 * dy)).abs() > 1e-9 * dy.abs().max(1.0) {
                return Err(Error::TabulatedFormat("y coordinates not uniform".into()));
            }
        }
        let mut values = vec![f64::NAN; nx * ny];
        for (x, y, v) in pts {
            let i = ((x - xs[0]) / dx).round() as usize;
            let j = ((y - ys[0]) / dy).round() as usize;
            values[j * nx + i] = v;
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::TabulatedFormat("lattice has holes".into()));
        }
        BilinearGrid::new(xs[0], ys[0], dx, dy, nx, ny, values)
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let u = (x - self.x0) / self.dx;
        let v = (y - self.y0) / self.dy;
        if u < -1e-9 || v < -1e-9 || u > (self.nx - 1) as f64 + 1e-9 || v > (self.ny - 1) as f64 + 1e-9 {
            return Err(Error::OutsideTabulatedGrid { x, y });
        }
        let i = (u.floor().max(0.0) as usize).min(self.nx - 2);
        let j = (v.floor().max(0.0) as usize).min(self.ny - 2);
        let fu = (u - i as f64).clamp(0.0, 1.0);
        let fv = (v - j as f64).clamp(0.0, 1.0);
        let g = |ii: usize, jj: usize| self.values[jj * self.nx + ii];
        Ok(g(i, j) * (1.0 - fu) * (1.0 - fv)
            + g(i + 1, j) * fu * (1.0 - fv)
            + g(i, j + 1) * (1.0 - fu) * fv
            + g(i + 1, j + 1) * fu * fv)
    }
}
