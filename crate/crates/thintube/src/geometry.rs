//! Closed plane curves, their curvature data, and the tube chart.
//!
//! A [`CurveGeometry`] is an arclength-uniform sampling of a closed curve
//! with unit tangent/normal fields and signed curvature. Orientation is
//! normalized so the curve runs counterclockwise and the normal points
//! outward; with that convention the unit circle has curvature +1 and the
//! tube Jacobian is `1 - eps * t * kappa`.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::gauss_legendre;

/// Minimum sample count accepted by the constructors.
pub const MIN_SAMPLES: usize = 16;

/// Fourier descriptor of a closed plane curve:
/// `x(th) = sum_k cos_x[k] cos(k th) + sin_x[k] sin(k th)` and likewise for
/// `y`. Index 0 of the `sin_*` arrays has no effect.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct FourierCurve {
    #[serde(default)]
    pub cos_x: Vec<f64>,
    #[serde(default)]
    pub sin_x: Vec<f64>,
    #[serde(default)]
    pub cos_y: Vec<f64>,
    #[serde(default)]
    pub sin_y: Vec<f64>,
}

impl FourierCurve {
    /// Circle of given radius centred at the origin.
    pub fn circle(radius: f64) -> Self {
        FourierCurve {
            cos_x: vec![0.0, radius],
            sin_x: vec![0.0, 0.0],
            cos_y: vec![0.0, 0.0],
            sin_y: vec![0.0, radius],
        }
    }

    /// Position, first and second derivative with respect to the parameter.
    fn eval(&self, theta: f64) -> ([f64; 2], [f64; 2], [f64; 2]) {
        let mut p = [0.0; 2];
        let mut d1 = [0.0; 2];
        let mut d2 = [0.0; 2];
        let series = [(&self.cos_x, &self.sin_x, 0usize), (&self.cos_y, &self.sin_y, 1usize)];
        for (cos_c, sin_c, axis) in series {
            let terms = cos_c.len().max(sin_c.len());
            for k in 0..terms {
                let kf = k as f64;
                let (s, c) = (kf * theta).sin_cos();
                let a = cos_c.get(k).copied().unwrap_or(0.0);
                let b = sin_c.get(k).copied().unwrap_or(0.0);
                p[axis] += a * c + b * s;
                d1[axis] += kf * (-a * s + b * c);
                d2[axis] += kf * kf * (-a * c - b * s);
            }
        }
        (p, d1, d2)
    }

    /// Descriptor of the same trace run in the opposite direction.
    fn reversed(&self) -> Self {
        let neg = |v: &[f64]| v.iter().map(|x| -x).collect();
        FourierCurve {
            cos_x: self.cos_x.clone(),
            sin_x: neg(&self.sin_x),
            cos_y: self.cos_y.clone(),
            sin_y: neg(&self.sin_y),
        }
    }
}

/// Arclength-uniform sampling of a closed plane curve.
pub struct CurveGeometry {
    /// Sample points, `samples[i]` at arclength `i * length / n`.
    samples: Vec<[f64; 2]>,
    tangent: Vec<[f64; 2]>,
    normal: Vec<[f64; 2]>,
    curvature: Vec<f64>,
    length: f64,
    rho: f64,
    /// False for the synthetic flat reference, which is periodic in `s`
    /// without a closed embedding.
    embedded: bool,
}

impl fmt::Debug for CurveGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurveGeometry")
            .field("n_samples", &self.samples.len())
            .field("length", &self.length)
            .field("rho", &self.rho)
            .field("embedded", &self.embedded)
            .finish()
    }
}

impl CurveGeometry {
    /// Circle of the given radius, sampled at `n_samples` points.
    pub fn circle(radius: f64, n_samples: usize) -> Result<Arc<Self>> {
        if radius <= 0.0 {
            return Err(Error::NonPositiveRadius(radius));
        }
        check_samples(n_samples)?;
        let n = n_samples;
        let length = 2.0 * std::f64::consts::PI * radius;
        let mut samples = Vec::with_capacity(n);
        let mut tangent = Vec::with_capacity(n);
        let mut normal = Vec::with_capacity(n);
        for i in 0..n {
            let th = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            let (s, c) = th.sin_cos();
            samples.push([radius * c, radius * s]);
            tangent.push([-s, c]);
            normal.push([c, s]);
        }
        Ok(Arc::new(CurveGeometry {
            samples,
            tangent,
            normal,
            curvature: vec![1.0 / radius; n],
            length,
            rho: radius,
            embedded: true,
        }))
    }

    /// Synthetic flat reference of the given circumference: periodic in `s`
    /// with zero curvature. Embedded as a straight segment, so the tube
    /// chart and plane-field coefficients remain usable; the closed-curve
    /// identities do not apply.
    pub fn flat(length: f64, n_samples: usize) -> Result<Arc<Self>> {
        if length <= 0.0 {
            return Err(Error::ConfigValidation {
                field: "length".into(),
                msg: format!("must be positive, got {length}"),
            });
        }
        check_samples(n_samples)?;
        let n = n_samples;
        let h = length / n as f64;
        let samples = (0..n).map(|i| [i as f64 * h, 0.0]).collect();
        Ok(Arc::new(CurveGeometry {
            samples,
            tangent: vec![[1.0, 0.0]; n],
            normal: vec![[0.0, 1.0]; n],
            curvature: vec![0.0; n],
            length,
            rho: f64::INFINITY,
            embedded: false,
        }))
    }

    /// Build from a Fourier descriptor: arclength-reparametrized to uniform
    /// spacing, curvature from the analytic derivatives of the series,
    /// simple-closedness checked on the resampled polyline.
    pub fn from_fourier(desc: &FourierCurve, n_samples: usize) -> Result<Arc<Self>> {
        check_samples(n_samples)?;

        // Normalize to counterclockwise orientation first.
        let owned;
        let desc = if signed_area(desc) < 0.0 {
            owned = desc.reversed();
            &owned
        } else {
            desc
        };

        // Cumulative arclength on a fine parameter grid.
        let fine = (8 * n_samples).max(4096);
        let mut speeds = Vec::with_capacity(fine + 1);
        let mut max_speed = 0.0f64;
        let mut min_speed = f64::INFINITY;
        let mut min_theta = 0.0;
        for j in 0..=fine {
            let th = 2.0 * std::f64::consts::PI * j as f64 / fine as f64;
            let (_, d1, _) = desc.eval(th);
            let sp = (d1[0] * d1[0] + d1[1] * d1[1]).sqrt();
            if sp < min_speed {
                min_speed = sp;
                min_theta = th;
            }
            max_speed = max_speed.max(sp);
            speeds.push(sp);
        }
        if min_speed <= 1e-9 * max_speed {
            return Err(Error::VanishingSpeed {
                theta: min_theta,
                speed: min_speed,
            });
        }
        let dth = 2.0 * std::f64::consts::PI / fine as f64;
        let mut cum = Vec::with_capacity(fine + 1);
        cum.push(0.0);
        for j in 0..fine {
            cum.push(cum[j] + 0.5 * dth * (speeds[j] + speeds[j + 1]));
        }
        let length = cum[fine];

        // Invert s(theta) for each uniform arclength target.
        let (gl_x, gl_w) = gauss_legendre(8);
        let arc_from = |th_a: f64, th_b: f64| -> f64 {
            let mid = 0.5 * (th_a + th_b);
            let half = 0.5 * (th_b - th_a);
            gl_x
                .iter()
                .zip(&gl_w)
                .map(|(&x, &w)| {
                    let (_, d1, _) = desc.eval(mid + half * x);
                    w * half * (d1[0] * d1[0] + d1[1] * d1[1]).sqrt()
                })
                .sum()
        };

        let n = n_samples;
        let mut samples = Vec::with_capacity(n);
        let mut tangent = Vec::with_capacity(n);
        let mut normal = Vec::with_capacity(n);
        let mut curvature = Vec::with_capacity(n);
        let mut lo_idx = 0usize;
        for i in 0..n {
            let target = length * i as f64 / n as f64;
            while lo_idx + 1 < cum.len() && cum[lo_idx + 1] < target {
                lo_idx += 1;
            }
            let mut th = if i == 0 {
                0.0
            } else {
                // Newton refinement inside the bracketing fine cell.
                let th_lo = dth * lo_idx as f64;
                let mut th = th_lo
                    + dth * (target - cum[lo_idx]) / (cum[lo_idx + 1] - cum[lo_idx]).max(1e-300);
                let base = cum[lo_idx];
                for _ in 0..60 {
                    let g = base + arc_from(th_lo, th) - target;
                    let (_, d1, _) = desc.eval(th);
                    let sp = (d1[0] * d1[0] + d1[1] * d1[1]).sqrt();
                    let step = g / sp;
                    th -= step;
                    if g.abs() <= 1e-10 * length {
                        break;
                    }
                }
                th
            };
            if th < 0.0 {
                th += 2.0 * std::f64::consts::PI;
            }
            let (p, d1, d2) = desc.eval(th);
            let sp = (d1[0] * d1[0] + d1[1] * d1[1]).sqrt();
            let t = [d1[0] / sp, d1[1] / sp];
            samples.push(p);
            tangent.push(t);
            normal.push([t[1], -t[0]]);
            curvature.push((d1[0] * d2[1] - d1[1] * d2[0]) / (sp * sp * sp));
        }

        // Reject self-intersecting traces (e.g. figure-eight descriptors).
        if let Some((i, j)) = polyline_self_intersection(&samples) {
            return Err(Error::SelfIntersectingCurve { i, j });
        }

        let max_kappa = curvature.iter().fold(0.0f64, |m, k| m.max(k.abs()));
        let rho = if max_kappa > 0.0 {
            1.0 / max_kappa
        } else {
            f64::INFINITY
        };
        Ok(Arc::new(CurveGeometry {
            samples,
            tangent,
            normal,
            curvature,
            length,
            rho,
            embedded: true,
        }))
    }

    pub fn n_samples(&self) -> usize {
        self.samples.len()
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Curvature radius 1 / max |kappa|.
    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn is_embedded(&self) -> bool {
        self.embedded
    }

    pub fn samples(&self) -> &[[f64; 2]] {
        &self.samples
    }

    pub fn curvature_samples(&self) -> &[f64] {
        &self.curvature
    }

    pub fn normal_samples(&self) -> &[[f64; 2]] {
        &self.normal
    }

    pub fn tangent_samples(&self) -> &[[f64; 2]] {
        &self.tangent
    }

    /// Periodic linear interpolation helpers. `s` may be any real number.
    fn locate(&self, s: f64) -> (usize, usize, f64) {
        let n = self.samples.len();
        let h = self.length / n as f64;
        let mut u = (s / h).rem_euclid(n as f64);
        if u >= n as f64 {
            u = 0.0;
        }
        let i = u.floor() as usize % n;
        (i, (i + 1) % n, u - i as f64)
    }

    pub fn curvature_at(&self, s: f64) -> f64 {
        let (i, j, w) = self.locate(s);
        (1.0 - w) * self.curvature[i] + w * self.curvature[j]
    }

    pub fn point_at(&self, s: f64) -> [f64; 2] {
        let (i, j, w) = self.locate(s);
        [
            (1.0 - w) * self.samples[i][0] + w * self.samples[j][0],
            (1.0 - w) * self.samples[i][1] + w * self.samples[j][1],
        ]
    }

    pub fn normal_at(&self, s: f64) -> [f64; 2] {
        let (i, j, w) = self.locate(s);
        let v = [
            (1.0 - w) * self.normal[i][0] + w * self.normal[j][0],
            (1.0 - w) * self.normal[i][1] + w * self.normal[j][1],
        ];
        let norm = (v[0] * v[0] + v[1] * v[1]).sqrt();
        [v[0] / norm, v[1] / norm]
    }

    /// Tube chart volume distortion `1 - eps * t * kappa(s)`.
    pub fn tube_jacobian(&self, epsilon: f64, s: f64, t: f64) -> Result<f64> {
        check_transverse(t)?;
        Ok(1.0 - epsilon * t * self.curvature_at(s))
    }

    /// Tube chart `(s, t) -> p(s) + eps * t * n(s)`.
    pub fn tube_point(&self, epsilon: f64, s: f64, t: f64) -> Result<[f64; 2]> {
        check_transverse(t)?;
        let p = self.point_at(s);
        let nv = self.normal_at(s);
        Ok([p[0] + epsilon * t * nv[0], p[1] + epsilon * t * nv[1]])
    }

    /// Geometry dump: columns s, x, y, nx, ny, kappa.
    pub fn write_csv<W: Write>(&self, w: &mut W, fmt_float: impl Fn(f64) -> String) -> std::io::Result<()> {
        writeln!(w, "s,x,y,nx,ny,kappa")?;
        let n = self.samples.len();
        for i in 0..n {
            let s = self.length * i as f64 / n as f64;
            writeln!(
                w,
                "{},{},{},{},{},{}",
                fmt_float(s),
                fmt_float(self.samples[i][0]),
                fmt_float(self.samples[i][1]),
                fmt_float(self.normal[i][0]),
                fmt_float(self.normal[i][1]),
                fmt_float(self.curvature[i]),
            )?;
        }
        Ok(())
    }
}

fn check_samples(n: usize) -> Result<()> {
    if n < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            min: MIN_SAMPLES,
            got: n,
        });
    }
    Ok(())
}

fn check_transverse(t: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::TransverseOutOfRange(t));
    }
    Ok(())
}

/// Signed enclosed area of the descriptor trace (positive when the curve
/// runs counterclockwise), by the periodic rectangle rule.
fn signed_area(desc: &FourierCurve) -> f64 {
    let m = 2048;
    let dth = 2.0 * std::f64::consts::PI / m as f64;
    let mut area = 0.0;
    for j in 0..m {
        let (p, d1, _) = desc.eval(j as f64 * dth);
        area += 0.5 * (p[0] * d1[1] - p[1] * d1[0]) * dth;
    }
    area
}

/// Validated tube of half-width `epsilon` around a curve.
#[derive(Debug, Clone)]
pub struct TubeDescriptor {
    geometry: Arc<CurveGeometry>,
    epsilon: f64,
}

impl TubeDescriptor {
    /// Check the admissibility conditions and build the descriptor:
    /// `epsilon < rho` and global injectivity of the sampled tube chart,
    /// certified by pairwise disjointness of non-adjacent cross sections
    /// (adjacency window of 3 samples) together with the chord criterion
    /// that non-local arcs stay at least `2 epsilon` apart.
    pub fn validate(geometry: &Arc<CurveGeometry>, epsilon: f64) -> Result<Self> {
        if epsilon <= 0.0 {
            return Err(Error::NonPositiveHalfWidth(epsilon));
        }
        let rho = geometry.rho();
        if epsilon >= rho {
            return Err(Error::CurvatureOverlap { epsilon, rho });
        }

        let n = geometry.n_samples();
        let h = geometry.length() / n as f64;
        let pts = geometry.samples();
        let nrm = geometry.normal_samples();

        // Cross sections as segments from t = -1 to t = +1.
        let sections: Vec<([f64; 2], [f64; 2])> = (0..n)
            .map(|i| {
                (
                    [
                        pts[i][0] - epsilon * nrm[i][0],
                        pts[i][1] - epsilon * nrm[i][1],
                    ],
                    [
                        pts[i][0] + epsilon * nrm[i][0],
                        pts[i][1] + epsilon * nrm[i][1],
                    ],
                )
            })
            .collect();

        // Arc distance below which chord proximity is explained by bending
        // alone: a curve of curvature <= 1/rho cannot re-enter the 2 eps
        // ball before this much arclength.
        let arc_guard = if rho.is_finite() {
            2.0 * rho * (epsilon / rho).min(1.0).asin()
        } else {
            2.0 * epsilon
        };

        for i in 0..n {
            for j in (i + 4)..n {
                let window = j - i <= 3 || n - (j - i) <= 3;
                if window {
                    continue;
                }
                let arc = ((j - i) as f64 * h).min((n - (j - i)) as f64 * h);
                let dx = pts[i][0] - pts[j][0];
                let dy = pts[i][1] - pts[j][1];
                let chord = (dx * dx + dy * dy).sqrt();
                let near = chord < 2.0 * epsilon && arc > arc_guard;
                if near || segments_intersect(sections[i], sections[j]) {
                    return Err(Error::TubeSelfIntersection {
                        epsilon,
                        s_a: i as f64 * h,
                        s_b: j as f64 * h,
                    });
                }
            }
        }

        Ok(TubeDescriptor {
            geometry: Arc::clone(geometry),
            epsilon,
        })
    }

    pub fn geometry(&self) -> &Arc<CurveGeometry> {
        &self.geometry
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn jacobian(&self, s: f64, t: f64) -> Result<f64> {
        self.geometry.tube_jacobian(self.epsilon, s, t)
    }

    pub fn map(&self, s: f64, t: f64) -> Result<[f64; 2]> {
        self.geometry.tube_point(self.epsilon, s, t)
    }

    /// Lower bound `1 - eps / rho` of the tube Jacobian.
    pub fn jacobian_lower_bound(&self) -> f64 {
        if self.geometry.rho().is_finite() {
            1.0 - self.epsilon / self.geometry.rho()
        } else {
            1.0
        }
    }

    /// Upper bound `1 + eps / rho` of the tube Jacobian.
    pub fn jacobian_upper_bound(&self) -> f64 {
        if self.geometry.rho().is_finite() {
            1.0 + self.epsilon / self.geometry.rho()
        } else {
            1.0
        }
    }
}

/// First self-intersection of the closed polyline, if any (non-adjacent
/// edges only).
fn polyline_self_intersection(pts: &[[f64; 2]]) -> Option<(usize, usize)> {
    let n = pts.len();
    for i in 0..n {
        let a = (pts[i], pts[(i + 1) % n]);
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue; // shares the wrap-around vertex
            }
            let b = (pts[j], pts[(j + 1) % n]);
            if segments_intersect(a, b) {
                return Some((i, j));
            }
        }
    }
    None
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn on_segment(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

/// Proper and degenerate segment intersection test.
pub(crate) fn segments_intersect(s1: ([f64; 2], [f64; 2]), s2: ([f64; 2], [f64; 2])) -> bool {
    let (a, b) = s1;
    let (c, d) = s2;
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// Dumbbell-shaped test curve: two lobes joined by a neck of the given
/// half-gap. The neck arcs face each other at distance `2 * half_gap`.
#[cfg(test)]
pub(crate) fn dumbbell(half_gap: f64) -> FourierCurve {
    let g = half_gap;
    let c1 = g + (1.0 - g) / 4.0;
    let c3 = (1.0 - g) / 4.0;
    FourierCurve {
        cos_x: vec![0.0, 1.6],
        sin_x: vec![],
        cos_y: vec![],
        sin_y: vec![0.0, c1, 0.0, c3],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_identities() {
        let g = CurveGeometry::circle(1.0, 256).unwrap();
        assert!((g.length() - 2.0 * std::f64::consts::PI).abs() < 1e-12);
        assert!(g.curvature_samples().iter().all(|&k| (k - 1.0).abs() < 1e-12));
        assert_eq!(g.rho(), 1.0);

        let g2 = CurveGeometry::circle(2.0, 256).unwrap();
        assert!((g2.length() - 4.0 * std::f64::consts::PI).abs() < 1e-12);
        assert!(g2.curvature_samples().iter().all(|&k| (k - 0.5).abs() < 1e-12));
        assert_eq!(g2.rho(), 2.0);
    }

    #[test]
    fn degenerate_circle_rejected() {
        assert!(matches!(
            CurveGeometry::circle(0.0, 256),
            Err(Error::NonPositiveRadius(_))
        ));
        assert!(matches!(
            CurveGeometry::circle(1.0, 8),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn unit_fields_and_uniform_spacing() {
        let desc = FourierCurve {
            cos_x: vec![0.0, 2.0],
            sin_y: vec![0.0, 1.0],
            ..Default::default()
        };
        let g = CurveGeometry::from_fourier(&desc, 512).unwrap();
        for i in 0..g.n_samples() {
            let t = g.tangent_samples()[i];
            let nv = g.normal_samples()[i];
            assert!(((t[0] * t[0] + t[1] * t[1]).sqrt() - 1.0).abs() < 1e-12);
            assert!(((nv[0] * nv[0] + nv[1] * nv[1]).sqrt() - 1.0).abs() < 1e-12);
        }
        // spacing uniform within 1e-10 relative
        let n = g.n_samples();
        let pts = g.samples();
        let mut lens = Vec::with_capacity(n);
        for i in 0..n {
            let a = pts[i];
            let b = pts[(i + 1) % n];
            lens.push(((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt());
        }
        // chords differ from the uniform arcs by the local kappa^2 h^2 / 24
        // correction; anything beyond that bound is a resampling defect
        let mean: f64 = lens.iter().sum::<f64>() / n as f64;
        let h = g.length() / n as f64;
        let bound = h * h * (2.0f64.powi(2) - 0.25f64.powi(2)) / 24.0 + 1e-9;
        for l in lens {
            assert!((l - mean).abs() / mean < bound, "chord spread {}", (l - mean).abs() / mean);
        }

        // constant curvature makes chords exactly uniform, which pins the
        // resampler tolerance itself
        let gc = CurveGeometry::from_fourier(&FourierCurve::circle(1.5), 256).unwrap();
        let pc = gc.samples();
        let mut clens = Vec::new();
        for i in 0..256 {
            let a = pc[i];
            let b = pc[(i + 1) % 256];
            clens.push(((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt());
        }
        let cmean: f64 = clens.iter().sum::<f64>() / 256.0;
        for l in clens {
            assert!((l - cmean).abs() / cmean < 1e-10);
        }
    }

    #[test]
    fn ellipse_curvature_extremes() {
        let desc = FourierCurve {
            cos_x: vec![0.0, 2.0],
            sin_y: vec![0.0, 1.0],
            ..Default::default()
        };
        let g = CurveGeometry::from_fourier(&desc, 1024).unwrap();
        // closed-form ellipse curvature: a/b^2 at the major ends, b/a^2 at
        // the minor ends; the extrema sit exactly on the axes
        let max_k = g.curvature_samples().iter().cloned().fold(f64::MIN, f64::max);
        let min_k = g.curvature_samples().iter().cloned().fold(f64::MAX, f64::min);
        assert!((max_k - 2.0).abs() < 1e-4, "max curvature {max_k}");
        assert!((min_k - 0.25).abs() < 1e-4, "min curvature {min_k}");
    }

    #[test]
    fn fourier_circle_matches_analytic_circle() {
        let g1 = CurveGeometry::circle(1.0, 256).unwrap();
        let g2 = CurveGeometry::from_fourier(&FourierCurve::circle(1.0), 256).unwrap();
        for i in 0..256 {
            assert!((g1.curvature_samples()[i] - g2.curvature_samples()[i]).abs() < 1e-8);
            for a in 0..2 {
                assert!((g1.samples()[i][a] - g2.samples()[i][a]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn clockwise_descriptor_is_normalized() {
        // y-flip of the circle runs clockwise; construction reverses it
        let cw = FourierCurve {
            cos_x: vec![0.0, 1.0],
            sin_y: vec![0.0, -1.0],
            ..Default::default()
        };
        let g = CurveGeometry::from_fourier(&cw, 128).unwrap();
        assert!(g.curvature_samples().iter().all(|&k| k > 0.9));
    }

    #[test]
    fn figure_eight_rejected() {
        let desc = FourierCurve {
            sin_x: vec![0.0, 0.0, 1.0],
            sin_y: vec![0.0, 1.0],
            ..Default::default()
        };
        match CurveGeometry::from_fourier(&desc, 256) {
            Err(Error::SelfIntersectingCurve { .. }) => {}
            other => panic!("expected self-intersection, got {other:?}"),
        }
    }

    #[test]
    fn jacobian_and_tube_point_examples() {
        let g = CurveGeometry::circle(1.0, 256).unwrap();
        assert!((g.tube_jacobian(0.1, 0.0, 1.0).unwrap() - 0.9).abs() < 1e-14);
        assert!((g.tube_jacobian(0.1, 1.234, 0.0).unwrap() - 1.0).abs() < 1e-14);
        let g2 = CurveGeometry::circle(0.5, 256).unwrap(); // kappa = 2
        assert!((g2.tube_jacobian(0.1, 0.0, -1.0).unwrap() - 1.2).abs() < 1e-14);

        let p = g.tube_point(0.1, 0.0, 1.0).unwrap();
        assert!((p[0] - 1.1).abs() < 1e-14 && p[1].abs() < 1e-14);
        let q = g.tube_point(0.1, 0.0, -1.0).unwrap();
        assert!((q[0] - 0.9).abs() < 1e-14 && q[1].abs() < 1e-14);
        let r = g.tube_point(0.37, 1.0, 0.0).unwrap();
        let c = g.point_at(1.0);
        assert_eq!(r, c);

        assert!(matches!(
            g.tube_jacobian(0.1, 0.0, 1.5),
            Err(Error::TransverseOutOfRange(_))
        ));
    }

    #[test]
    fn tube_validation_on_circle() {
        let g = CurveGeometry::circle(1.0, 256).unwrap();
        assert!(TubeDescriptor::validate(&g, 0.5).is_ok());
        match TubeDescriptor::validate(&g, 1.0) {
            Err(Error::CurvatureOverlap { .. }) => {}
            other => panic!("expected curvature overlap, got {other:?}"),
        }
        assert!(matches!(
            TubeDescriptor::validate(&g, 0.0),
            Err(Error::NonPositiveHalfWidth(_))
        ));
    }

    #[test]
    fn dumbbell_neck_overlap_detected() {
        // neck gap 0.15 between opposite arcs; eps = 0.1 overlaps it
        let g = CurveGeometry::from_fourier(&dumbbell(0.075), 1024).unwrap();
        assert!(
            g.rho() > 0.1,
            "fixture must fail by overlap, not curvature: rho = {}",
            g.rho()
        );

        // brute-force oracle: some pair of non-adjacent cross sections must
        // come closer than the sampled test's own criterion
        let eps = 0.1;
        let pts = g.samples();
        let n = g.n_samples();
        let mut min_chord = f64::INFINITY;
        for i in 0..n {
            for j in (i + 4)..n {
                if n - (j - i) <= 3 {
                    continue;
                }
                let arc = ((j - i).min(n - (j - i))) as f64 * g.length() / n as f64;
                if arc < 1.0 {
                    continue; // stay on genuinely opposite arcs
                }
                let dx = pts[i][0] - pts[j][0];
                let dy = pts[i][1] - pts[j][1];
                min_chord = min_chord.min((dx * dx + dy * dy).sqrt());
            }
        }
        assert!(
            (min_chord - 0.15).abs() < 0.01,
            "neck gap drifted: {min_chord}"
        );
        assert!(min_chord < 2.0 * eps);

        match TubeDescriptor::validate(&g, eps) {
            Err(Error::TubeSelfIntersection { .. }) => {}
            other => panic!("expected tube self-intersection, got {other:?}"),
        }
        // a much thinner tube around the same curve is fine
        assert!(TubeDescriptor::validate(&g, 0.05).is_ok());
    }

    #[test]
    fn offset_curves_stay_disjoint_when_valid() {
        let desc = FourierCurve {
            cos_x: vec![0.0, 1.3, 0.0, 0.1],
            sin_y: vec![0.0, 1.0, 0.05],
            ..Default::default()
        };
        let g = CurveGeometry::from_fourier(&desc, 512).unwrap();
        let eps = 0.8 * g.rho().min(0.3);
        let tube = TubeDescriptor::validate(&g, eps).unwrap();
        // inner and outer offset polylines must not cross the core curve
        let n = g.n_samples();
        let mk = |t: f64| -> Vec<[f64; 2]> {
            (0..n)
                .map(|i| {
                    let s = g.length() * i as f64 / n as f64;
                    tube.map(s, t).unwrap()
                })
                .collect()
        };
        let outer = mk(1.0);
        let inner = mk(-1.0);
        let core = mk(0.0);
        for (a, b) in [(&outer, &core), (&inner, &core), (&outer, &inner)] {
            for i in 0..n {
                let sa = (a[i], a[(i + 1) % n]);
                for j in 0..n {
                    let sb = (b[j], b[(j + 1) % n]);
                    assert!(
                        !segments_intersect(sa, sb),
                        "offset polylines cross at {i},{j}"
                    );
                }
            }
        }
    }

    #[test]
    fn jacobian_bounds_hold_on_grid() {
        let desc = dumbbell(0.075);
        let g = CurveGeometry::from_fourier(&desc, 512).unwrap();
        // thin enough to clear the 0.15 neck gap
        let eps = 0.05;
        assert!(eps < g.rho());
        let tube = TubeDescriptor::validate(&g, eps).unwrap();
        let (lo, hi) = (tube.jacobian_lower_bound(), tube.jacobian_upper_bound());
        assert!(lo > 0.0);
        for i in 0..512 {
            let s = g.length() * i as f64 / 512.0;
            for j in 0..=16 {
                let t = -1.0 + 2.0 * j as f64 / 16.0;
                let f = tube.jacobian(s, t).unwrap();
                assert!(f >= lo - 1e-12 && f <= hi + 1e-12, "f={f} at ({s},{t})");
            }
        }
    }

    #[test]
    fn flat_reference_has_zero_curvature() {
        let g = CurveGeometry::flat(2.0 * std::f64::consts::PI, 256).unwrap();
        assert_eq!(g.rho(), f64::INFINITY);
        assert!(g.curvature_samples().iter().all(|&k| k == 0.0));
        assert!(TubeDescriptor::validate(&g, 0.1).is_ok());
        assert!((g.tube_jacobian(0.3, 1.0, 0.7).unwrap() - 1.0).abs() < 1e-15);
    }
}
