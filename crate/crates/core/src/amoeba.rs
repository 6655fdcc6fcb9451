//! Floating-point verification of the localization claim: plane quintic
//! curves with coefficient magnitudes `|a_m| = t^{w_m}`, pushed through the
//! weighted moment map, concentrate around the dual graph of the weight's
//! subdivision as `t` shrinks.
//!
//! Everything here is numerical by design — the combinatorial modules never
//! depend on it.  The sampling slices the curve along the first coordinate
//! (a log-modulus × phase grid whose modulus range is auto-selected from
//! the tropical vertices of the weights), finds each slice's roots as
//! companion-matrix eigenvalues polished by Newton steps, keeps only roots
//! whose back-substituted residual is tiny relative to the coefficient
//! scale, and measures the cloud against the graph with a one-sided
//! Hausdorff distance plus per-segment coverage flags.

use crate::error::Error;
use crate::locus::FaceGraph;
use crate::rat::rat_to_f64;
use crate::subdivision::{regular_subdivision, FaceWeights};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Relative tolerance for `|a_m| = t^{w_m}` at construction.
const COEFF_TOL: f64 = 1e-12;
/// Coefficients below this magnitude (after rescaling the slice so its
/// largest term is 1) are treated as underflowed to zero.
const UNDERFLOW: f64 = 1e-250;
/// Relative residual bound for accepting a root.
const ROOT_RESIDUAL: f64 = 1e-8;

/// A plane curve `Σ a_m x^m` over a chart of lattice points, with
/// magnitudes pinned to `t^{w_m}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveSpec {
    pub chart: Vec<[i64; 2]>,
    /// The weights as floats (exact rationals are not needed numerically).
    pub weights: Vec<f64>,
    pub t: f64,
    /// Coefficient phases; the coefficient is `t^{w_m}·e^{iη_m}`.
    pub phases: Vec<f64>,
}

impl CurveSpec {
    /// Real-positive coefficients (all phases zero) from a face weight
    /// configuration — the real moduli slice.
    pub fn new(fw: &FaceWeights, t: f64) -> Result<Self, Error> {
        Self::with_phases(fw, t, vec![0.0; fw.chart.len()])
    }

    /// Prescribed coefficient phases `η_m`.
    pub fn with_phases(fw: &FaceWeights, t: f64, phases: Vec<f64>) -> Result<Self, Error> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::WrongDomain(format!(
                "t must lie in (0,1), got {t}"
            )));
        }
        if phases.len() != fw.chart.len() {
            return Err(Error::WrongDomain(
                "one phase per chart point required".into(),
            ));
        }
        let spec = CurveSpec {
            chart: fw.chart.clone(),
            weights: fw.values.iter().map(rat_to_f64).collect(),
            t,
            phases,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The coefficient `a_m = t^{w_m} e^{iη_m}` of chart point `i`.
    pub fn coefficient(&self, i: usize) -> Complex64 {
        Complex64::from_polar(self.t.powf(self.weights[i]), self.phases[i])
    }

    /// Check `|a_m| = t^{w_m}` to relative tolerance 1e−12 (trivially true
    /// for polar-form storage; guards against tampered float data).
    pub fn validate(&self) -> Result<(), Error> {
        if self.chart.len() != self.weights.len() || self.chart.len() != self.phases.len() {
            return Err(Error::WrongDomain(
                "chart, weights, and phases must have equal length".into(),
            ));
        }
        for i in 0..self.chart.len() {
            let want = self.t.powf(self.weights[i]);
            let got = self.coefficient(i).norm();
            if !want.is_finite() || want <= 0.0 {
                return Err(Error::Numeric(format!(
                    "weight {} at chart point {:?} underflows t^w",
                    self.weights[i], self.chart[i]
                )));
            }
            if ((got - want) / want).abs() > COEFF_TOL {
                return Err(Error::Numeric(format!(
                    "|a_m| deviates from t^w at chart point {:?}",
                    self.chart[i]
                )));
            }
        }
        Ok(())
    }
}

/// Sampling resolution: `moduli × phases` grid over the first coordinate,
/// keeping at most `roots` roots per slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub moduli: usize,
    pub phases: usize,
    pub roots: usize,
}

impl GridSpec {
    /// Parse the `AxBxC` CLI form.
    pub fn parse(s: &str) -> Result<Self, Error> {
        let parts: Vec<&str> = s.split('x').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!(
                "grid must look like 200x200x5, got {s:?}"
            )));
        }
        let num = |p: &str| -> Result<usize, Error> {
            p.parse()
                .map_err(|_| Error::Parse(format!("bad grid component {p:?} in {s:?}")))
        };
        Ok(GridSpec {
            moduli: num(parts[0])?,
            phases: num(parts[1])?,
            roots: num(parts[2])?,
        })
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { moduli: 200, phases: 200, roots: 5 }
    }
}

/// The sampled moment-map image with its sampling metadata.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AmoebaCloud {
    pub points: Vec<[f64; 2]>,
    pub grid: GridSpec,
    pub seed: u64,
    pub t: f64,
    /// Slices skipped because every coefficient underflowed.
    pub skipped_slices: usize,
}

fn log_norm(x: Complex64) -> f64 {
    let n = x.norm();
    if n == 0.0 {
        f64::NEG_INFINITY
    } else {
        n.ln()
    }
}

fn moment_map_raw(
    x: (Complex64, Complex64),
    chart: &[[i64; 2]],
    weights: &[f64],
    log_t: f64,
) -> Result<[f64; 2], Error> {
    let (lx, ly) = (log_norm(x.0), log_norm(x.1));
    if lx == f64::NEG_INFINITY && ly == f64::NEG_INFINITY {
        return Err(Error::WrongDomain(
            "moment map needs x ≠ (0,0) in the chart".into(),
        ));
    }
    // log |t^{w_m} x^m|², with the convention 0·(−∞) = 0 so that vanishing
    // coordinates simply drop the monomials they appear in
    let term = |e: i64, l: f64| -> f64 {
        if e == 0 {
            0.0
        } else {
            e as f64 * l
        }
    };
    let logs: Vec<f64> = chart
        .iter()
        .zip(weights)
        .map(|(m, w)| 2.0 * (w * log_t + term(m[0], lx) + term(m[1], ly)))
        .collect();
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut total = 0.0;
    let mut img = [0.0f64; 2];
    for (m, l) in chart.iter().zip(&logs) {
        let u = (l - top).exp();
        total += u;
        img[0] += u * m[0] as f64;
        img[1] += u * m[1] as f64;
    }
    Ok([img[0] / total, img[1] / total])
}

/// The weighted moment map `F_{t^w}: (x₁,x₂) ↦ Σ (|t^{w_m}x^m|²/Σ…)·m`, a
/// convex combination of the chart points.  Computed in log-space with the
/// peak exponent subtracted, so extreme weights cannot overflow.
pub fn moment_map_2d(
    x: (Complex64, Complex64),
    fw: &FaceWeights,
    t: f64,
) -> Result<[f64; 2], Error> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::WrongDomain(format!("t must lie in (0,1), got {t}")));
    }
    let weights: Vec<f64> = fw.values.iter().map(rat_to_f64).collect();
    moment_map_raw(x, &fw.chart, &weights, t.ln())
}

/// Roots of one vertical slice `x₁ = const` of the curve, with relative
/// residuals of back-substitution.  `None` when every coefficient of the
/// slice underflows (the slice misses the torus at this resolution).
pub fn slice_roots(spec: &CurveSpec, log_t_x1: f64, theta: f64) -> Option<Vec<(Complex64, f64)>> {
    let log_t = spec.t.ln();
    let degree = spec.chart.iter().map(|m| m[1]).max().unwrap_or(0) as usize;
    // slice coefficients by powers of x₂, rescaled so the largest term is 1:
    // |a_m x₁^{m₁}| = t^{w_m + m₁·log_t|x₁|}
    let mut exps = vec![f64::INFINITY; degree + 1];
    for (m, w) in spec.chart.iter().zip(&spec.weights) {
        let e = w + m[0] as f64 * log_t_x1;
        let k = m[1] as usize;
        if e < exps[k] {
            exps[k] = e;
        }
    }
    let base = exps.iter().cloned().fold(f64::INFINITY, f64::min);
    if !base.is_finite() {
        return None;
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
    for (i, m) in spec.chart.iter().enumerate() {
        let e = spec.weights[i] + m[0] as f64 * log_t_x1 - base;
        let mag = (e * log_t).exp();
        let phase = spec.phases[i] + m[0] as f64 * theta;
        coeffs[m[1] as usize] += Complex64::from_polar(mag, phase);
    }
    let deg = coeffs.iter().rposition(|c| c.norm() > UNDERFLOW)?;
    if deg == 0 {
        return Some(vec![]);
    }
    let monic: Vec<Complex64> = coeffs[..deg].iter().map(|c| c / coeffs[deg]).collect();

    // companion matrix of the monic slice, embedded as a real matrix whose
    // eigenvalue set is the roots together with their conjugates
    let comp = |r: usize, c: usize| -> Complex64 {
        if c == deg - 1 {
            -monic[r]
        } else if r == c + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    let embed = DMatrix::<f64>::from_fn(2 * deg, 2 * deg, |r, c| {
        let (br, bc) = (r / deg, c / deg);
        let z = comp(r % deg, c % deg);
        match (br, bc) {
            (0, 0) | (1, 1) => z.re,
            (0, 1) => -z.im,
            (1, 0) => z.im,
            _ => unreachable!(),
        }
    });
    let eigen = embed.complex_eigenvalues();

    let eval = |z: Complex64| -> (Complex64, Complex64, f64) {
        // p, p′, and the coefficient scale Σ|c_k||z|^k of the monic slice
        let mut p = Complex64::new(1.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        let mut scale = 1.0f64;
        for k in (0..deg).rev() {
            dp = dp * z + p;
            p = p * z + monic[k];
            scale = scale * z.norm() + monic[k].norm();
        }
        (p, dp, scale.max(f64::MIN_POSITIVE))
    };
    let mut roots: Vec<(Complex64, f64)> = Vec::new();
    for cand in eigen.iter() {
        let mut z = Complex64::new(cand.re, cand.im);
        for _ in 0..12 {
            let (p, dp, _) = eval(z);
            if dp.norm() < f64::MIN_POSITIVE {
                break;
            }
            let step = p / dp;
            z -= step;
            if step.norm() < 1e-14 * (1.0 + z.norm()) {
                break;
            }
        }
        let (p, _, scale) = eval(z);
        if p.norm() > ROOT_RESIDUAL * scale {
            continue;
        }
        let dup = roots
            .iter()
            .any(|(r, _)| (r - z).norm() <= 1e-6 * (1.0 + z.norm()));
        if !dup {
            roots.push((z, p.norm() / scale));
        }
    }
    roots.sort_by(|a, b| {
        (a.0.re, a.0.im)
            .partial_cmp(&(b.0.re, b.0.im))
            .expect("finite roots")
    });
    Some(roots)
}

/// The modulus range (in `log_t` units) where the slices can meet the
/// torus: the bounding interval of the tropical vertices of the weights —
/// the supporting-plane gradients of the regular subdivision — padded so
/// the tentacle directions are sampled past the last vertex.
fn modulus_range(spec: &CurveSpec) -> (f64, f64) {
    const PAD: f64 = 3.0;
    let fw = FaceWeights::new(
        spec.chart.clone(),
        spec.weights
            .iter()
            .map(|w| crate::rat::f64_to_rat(*w).expect("finite weight"))
            .collect(),
    );
    if let Ok(fw) = fw {
        if let Ok(sub) = regular_subdivision(&fw) {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for c in &sub.cells {
                let g = rat_to_f64(&c.plane.0[0]);
                lo = lo.min(g);
                hi = hi.max(g);
            }
            if lo.is_finite() && hi.is_finite() {
                return (lo - PAD, hi + PAD);
            }
        }
    }
    let spread = spec
        .weights
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max)
        - spec.weights.iter().cloned().fold(f64::INFINITY, f64::min);
    (-spread - PAD, spread + PAD)
}

/// Sample the curve over a log-modulus × phase grid of its first
/// coordinate, solving every slice for the second.  Deterministic for a
/// fixed grid and seed (the seed jitters the grid sub-cell offsets so the
/// samples do not all sit on symmetry loci).
pub fn sample_curve(spec: &CurveSpec, grid: &GridSpec, seed: u64) -> Result<AmoebaCloud, Error> {
    spec.validate()?;
    let mut cloud = AmoebaCloud {
        points: Vec::new(),
        grid: *grid,
        seed,
        t: spec.t,
        skipped_slices: 0,
    };
    if grid.moduli == 0 || grid.phases == 0 || grid.roots == 0 {
        return Ok(cloud);
    }
    let (lo, hi) = modulus_range(spec);
    let step = (hi - lo) / grid.moduli as f64;
    let log_t = spec.t.ln();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..grid.moduli {
        // v is the exponent in |x₁| = t^{−v}: log_t|x₁| = −v
        let v = lo + (i as f64 + 0.5 + rng.random_range(-0.3..0.3)) * step;
        for j in 0..grid.phases {
            let theta = (j as f64 + 0.5 + rng.random_range(-0.3..0.3))
                * std::f64::consts::TAU
                / grid.phases as f64;
            let Some(roots) = slice_roots(spec, -v, theta) else {
                cloud.skipped_slices += 1;
                continue;
            };
            let x1 = Complex64::from_polar((-v * log_t).exp(), theta);
            for (x2, _residual) in roots.into_iter().take(grid.roots) {
                let p = moment_map_raw((x1, x2), &spec.chart, &spec.weights, log_t)?;
                cloud.points.push(p);
            }
        }
    }
    Ok(cloud)
}

fn dist_to_segment(p: [f64; 2], seg: &[[f64; 2]; 2]) -> f64 {
    let (a, b) = (seg[0], seg[1]);
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let u = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    };
    let q = [a[0] + u * d[0], a[1] + u * d[1]];
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt()
}

/// The dual graph of one face as a flat segment list in chart coordinates:
/// two segments per interior arc (site → crossing midpoint → site) and one
/// per leg.
pub fn graph_segments(g: &FaceGraph) -> Vec<[[f64; 2]; 2]> {
    let pt = |p: &[crate::rat::Rat; 2]| [rat_to_f64(&p[0]), rat_to_f64(&p[1])];
    let mut out = Vec::with_capacity(2 * g.edges.len() + g.legs.len());
    for e in &g.edges {
        let m = pt(&e.midpoint);
        out.push([pt(&g.sites[e.sites[0]]), m]);
        out.push([m, pt(&g.sites[e.sites[1]])]);
    }
    for l in &g.legs {
        out.push([pt(&g.sites[l.site]), pt(&l.midpoint)]);
    }
    out
}

/// One-sided Hausdorff distance from the cloud to the segment set, plus a
/// coverage flag per segment: whether some cloud point sits within `delta`
/// of it.
pub fn hausdorff_to_graph(
    cloud: &AmoebaCloud,
    segments: &[[[f64; 2]; 2]],
    delta: f64,
) -> Result<(f64, Vec<bool>), Error> {
    if cloud.points.is_empty() {
        return Err(Error::Numeric("empty amoeba cloud".into()));
    }
    if segments.is_empty() {
        return Err(Error::Numeric("no graph segments to compare against".into()));
    }
    let mut covered = vec![false; segments.len()];
    let mut sup = 0.0f64;
    for p in &cloud.points {
        let mut best = f64::INFINITY;
        for (s, seg) in segments.iter().enumerate() {
            let d = dist_to_segment(*p, seg);
            if d < best {
                best = d;
            }
            if d <= delta {
                covered[s] = true;
            }
        }
        if best > sup {
            sup = best;
        }
    }
    Ok((sup, covered))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::two_faces;
    use crate::locus::face_graph;
    use crate::rat::{rat, rat_i};
    use crate::subdivision::jittered_standard;

    /// The quadratic weights that induce the standard 25-triangle
    /// decomposition of the 21-point chart.
    fn standard_quadratic() -> FaceWeights {
        let chart = crate::lattice::chart_points();
        let values = chart
            .iter()
            .map(|m| rat_i(m[0] * m[0] + m[0] * m[1] + m[1] * m[1]))
            .collect();
        FaceWeights::new(chart, values).unwrap()
    }

    #[test]
    fn moment_map_examples_and_guards() {
        let chart = crate::lattice::chart_points();
        let flat =
            FaceWeights::new(chart.clone(), vec![rat_i(0); chart.len()]).unwrap();
        // all |x^m| equal → the uniform average of the 21 chart points
        let img = moment_map_2d(
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)),
            &flat,
            0.5,
        )
        .unwrap();
        let mean = [
            chart.iter().map(|m| m[0] as f64).sum::<f64>() / 21.0,
            chart.iter().map(|m| m[1] as f64).sum::<f64>() / 21.0,
        ];
        assert!((img[0] - mean[0]).abs() < 1e-12);
        assert!((img[1] - mean[1]).abs() < 1e-12);
        // dominant first coordinate → the (5,0) vertex
        let img = moment_map_2d(
            (Complex64::new(1e9, 0.0), Complex64::new(1.0, 0.0)),
            &flat,
            0.5,
        )
        .unwrap();
        assert!((img[0] - 5.0).abs() < 1e-6 && img[1].abs() < 1e-6);
        // the origin is outside the domain, t must be in (0,1)
        assert!(matches!(
            moment_map_2d(
                (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
                &flat,
                0.5
            ),
            Err(Error::WrongDomain(_))
        ));
        assert!(moment_map_2d(
            (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
            &flat,
            1.5
        )
        .is_err());
        // a vanishing coordinate only drops its monomials
        let img = moment_map_2d(
            (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
            &flat,
            0.5,
        )
        .unwrap();
        assert!((img[0] - 0.0).abs() < 1e-12);
        assert!((img[1] - (0..=5).sum::<i64>() as f64 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn moment_map_is_phase_invariant_and_continuous() {
        let fw = standard_quadratic();
        let t = 0.05;
        // torus action on the coordinates does not move the image
        for k in 0..12 {
            let (r1, r2) = (0.37 * (k + 1) as f64, 1.9 / (k + 1) as f64);
            let base = moment_map_2d(
                (Complex64::new(r1, 0.0), Complex64::new(r2, 0.0)),
                &fw,
                t,
            )
            .unwrap();
            let spun = moment_map_2d(
                (
                    Complex64::from_polar(r1, 1.1 + k as f64),
                    Complex64::from_polar(r2, -2.4 * k as f64),
                ),
                &fw,
                t,
            )
            .unwrap();
            assert!((base[0] - spun[0]).abs() < 1e-10);
            assert!((base[1] - spun[1]).abs() < 1e-10);
        }
        // continuity along a log-radial path: no jumps beyond the step-
        // consistent bound
        let steps = 600;
        let mut prev: Option<[f64; 2]> = None;
        let mut max_jump = 0.0f64;
        for i in 0..=steps {
            let v = -1.0 + 12.0 * i as f64 / steps as f64;
            let x1 = Complex64::new(t.powf(-v), 0.0);
            let p = moment_map_2d((x1, Complex64::new(1.0, 0.0)), &fw, t).unwrap();
            if let Some(q) = prev {
                max_jump = max_jump.max(((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt());
            }
            prev = Some(p);
        }
        assert!(
            max_jump < 0.15,
            "discontinuous moment image: jump {max_jump}"
        );
    }

    #[test]
    fn curve_spec_guards_its_invariants() {
        let fw = standard_quadratic();
        let spec = CurveSpec::new(&fw, 0.1).unwrap();
        spec.validate().unwrap();
        assert!((spec.coefficient(0).norm() - 1.0).abs() < 1e-15);
        assert!(matches!(
            CurveSpec::new(&fw, 1.0),
            Err(Error::WrongDomain(_))
        ));
        assert!(matches!(
            CurveSpec::new(&fw, 0.0),
            Err(Error::WrongDomain(_))
        ));
        assert!(CurveSpec::with_phases(&fw, 0.1, vec![0.0; 3]).is_err());
    }

    #[test]
    fn slice_roots_carry_tiny_residuals() {
        let spec = CurveSpec::new(&standard_quadratic(), 0.05).unwrap();
        let mut seen = 0;
        for i in 0..20 {
            let v = -1.0 + 12.0 * i as f64 / 19.0;
            let roots = slice_roots(&spec, -v, 0.governor)
                .expect("quadratic weights never underflow entirely");
            for (_z, residual) in &roots {
                assert!(*residual <= ROOT_RESIDUAL);
                seen += 1;
            }
        }
        assert!(seen > 20, "the sweep should cross the curve many times");
    }

    #[test]
    fn line_amoeba_concentrates_on_the_corner_spine() {
        // 1 + x₁ + x₂ on the three corner points, weights 0 (t-independent)
        let chart = vec![[0i64, 0], [1, 0], [0, 1]];
        let fw = FaceWeights::new(chart, vec![rat_i(0); 3]).unwrap();
        let spec = CurveSpec::new(&fw, 0.1).unwrap();
        let cloud = sample_curve(
            &spec,
            &GridSpec { moduli: 120, phases: 60, roots: 1 },
            5,
        )
        .unwrap();
        assert!(!cloud.points.is_empty());
        // the image stays in the corner simplex
        for p in &cloud.points {
            assert!(p[0] >= -1e-9 && p[1] >= -1e-9 && p[0] + p[1] <= 1.0 + 1e-9);
        }
        // Y spine: barycenter to the three corners
        let b = [1.0 / 3.0, 1.0 / 3.0];
        let spine = vec![
            [b, [0.0, 0.0]],
            [b, [1.0, 0.0]],
            [b, [0.0, 1.0]],
        ];
        let (sup, covered) = hausdorff_to_graph(&cloud, &spine, 0.15).unwrap();
        assert!(covered.iter().all(|c| *c), "tentacles must reach all corners");
        // the fattened line amoeba stays within the known width of the spine
        assert!(sup < 0.30, "sup distance {sup} too large for a line");
    }

    #[test]
    fn localization_tightens_and_covers_the_face_graph() {
        let fw = standard_quadratic();
        let segments = graph_segments(&face_graph(&fw).unwrap());
        assert_eq!(segments.len(), 75);
        let grid = GridSpec { moduli: 96, phases: 96, roots: 5 };
        let mut sups = Vec::new();
        for t in [0.1, 0.01] {
            let spec = CurveSpec::new(&fw, t).unwrap();
            let cloud = sample_curve(&spec, &grid, 1).unwrap();
            // convexity of the image: inside the 21-point chart triangle
            for p in &cloud.points {
                assert!(p[0] >= -1e-9 && p[1] >= -1e-9 && p[0] + p[1] <= 5.0 + 1e-9);
            }
            let (sup, covered) = hausdorff_to_graph(&cloud, &segments, 0.25).unwrap();
            if t == 0.01 {
                let misses = covered.iter().filter(|c| !**c).count();
                assert_eq!(misses, 0, "{misses} of 75 segments uncovered at t=0.01");
            }
            sups.push(sup);
        }
        assert!(
            sups[1] < sups[0],
            "localization must tighten: sup(t=0.01)={} vs sup(t=0.1)={}",
            sups[1],
            sups[0]
        );
    }

    #[test]
    fn sampling_is_deterministic_and_respects_empty_grids() {
        let fw = jittered_standard(1).face_weights(&two_faces()[0]);
        let spec = CurveSpec::new(&fw, 0.1).unwrap();
        let grid = GridSpec { moduli: 12, phases: 12, roots: 5 };
        let a = sample_curve(&spec, &grid, 42).unwrap();
        let b = sample_curve(&spec, &grid, 42).unwrap();
        assert_eq!(a.points, b.points);
        let empty = sample_curve(
            &spec,
            &GridSpec { moduli: 0, phases: 50, roots: 5 },
            42,
        )
        .unwrap();
        assert!(empty.points.is_empty());
        assert!(matches!(
            hausdorff_to_graph(&empty, &[[[0.0, 0.0], [1.0, 0.0]]], 0.1),
            Err(Error::Numeric(_))
        ));
    }

    #[test]
    fn hausdorff_handles_exact_hits_and_outliers() {
        let segments = vec![[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [1.0, 1.0]]];
        let mut cloud = AmoebaCloud {
            points: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]],
            grid: GridSpec::default(),
            seed: 0,
            t: 0.1,
            skipped_slices: 0,
        };
        let (sup, covered) = hausdorff_to_graph(&cloud, &segments, 0.05).unwrap();
        assert_eq!(sup, 0.0);
        assert!(covered.iter().all(|c| *c));
        cloud.points.push([4.0, 0.0]);
        let (sup, _) = hausdorff_to_graph(&cloud, &segments, 0.05).unwrap();
        assert!((sup - 3.0).abs() < 1e-12);
    }
}
