//! Adaptive Gauss–Kronrod integration.
//!
//! Path integrals over a real parameter may carry endpoint singularities of
//! the form `distance^(-2/3)` (the behaviour of `dz/w²` at a branch point of
//! `w³ = z¹² − 1`). A flagged endpoint is regularised with `t = a + h·u³`,
//! which turns `s^(-2/3) ds` into the bounded `3 h^(1/3) du`, and the
//! transformed integrand is handed to a globally adaptive G7/K15 rule.
//!
//! Plane integrals are computed as nested 1-D integrals in polar coordinates
//! `(r, θ)`, with the outer radial range mapped through `r → r_split / s`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    /// Strongest endpoint blow-up the cube substitution is meant for.
    pub singular_exponent: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-11,
            rel_tol: 1e-11,
            max_depth: 30,
            singular_exponent: -2.0 / 3.0,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerance(tol: f64) -> Self {
        QuadratureSpec {
            abs_tol: tol,
            rel_tol: tol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x > 0.0 && x < 1.0;
        if !ok(self.abs_tol) || !ok(self.rel_tol) {
            return Err(Error::Domain(format!(
                "tolerances must lie in (0, 1): abs {} rel {}",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_depth < 10 {
            return Err(Error::Domain(format!("max_depth {} < 10", self.max_depth)));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value)
    }
}

/// An integration abscissa `anchor + offset`.
///
/// Near a flagged endpoint the anchor is the endpoint itself and `offset`
/// is the (possibly tiny) signed distance from it, so integrands can
/// evaluate `z¹² − 1` without cancellation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Abscissa {
    pub anchor: f64,
    pub offset: f64,
}

impl Abscissa {
    pub fn at(t: f64) -> Self {
        Abscissa { anchor: t, offset: 0.0 }
    }

    pub fn value(&self) -> f64 {
        self.anchor + self.offset
    }
}

/// Which endpoints carry a `-2/3` singularity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SingularEnds {
    pub start: bool,
    pub end: bool,
}

impl SingularEnds {
    pub const NONE: SingularEnds = SingularEnds {
        start: false,
        end: false,
    };
    pub const BOTH: SingularEnds = SingularEnds { start: true, end: true };
    pub const START: SingularEnds = SingularEnds {
        start: true,
        end: false,
    };
    pub const END: SingularEnds = SingularEnds {
        start: false,
        end: true,
    };
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
}

/// Values the adaptive rule can accumulate.
pub trait QuadValue: Copy + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
    fn is_finite(&self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Fixed-length vector of complex values, used to integrate all four
/// Weierstrass components in one pass.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CVec<const N: usize>(pub [Complex64; N]);

impl<const N: usize> Add for CVec<N> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut out = self.0;
        for (a, b) in out.iter_mut().zip(o.0) {
            *a += b;
        }
        CVec(out)
    }
}

impl<const N: usize> Sub for CVec<N> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let mut out = self.0;
        for (a, b) in out.iter_mut().zip(o.0) {
            *a -= b;
        }
        CVec(out)
    }
}

impl<const N: usize> Mul<f64> for CVec<N> {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        CVec(self.0.map(|c| c * s))
    }
}

impl<const N: usize> QuadValue for CVec<N> {
    fn zero() -> Self {
        CVec([Complex64::new(0.0, 0.0); N])
    }
    fn magnitude(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
    fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

// Kronrod 15-point abscissae and weights, with the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct RuleResult<T> {
    value: T,
    error: f64,
}

fn gk15<T: QuadValue>(f: &dyn Fn(f64) -> T, a: f64, b: f64) -> RuleResult<T> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut resabs = fc.magnitude() * WGK[7];
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod = kronrod + (f1 + f2) * WGK[j];
        resabs += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut resasc = WGK[7] * (fc - mean).magnitude();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).magnitude() + (fv2[j] - mean).magnitude());
    }
    let value = kronrod * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((kronrod - gauss) * half).magnitude();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    RuleResult { value, error: err }
}

struct Interval<T> {
    piece: usize,
    a: f64,
    b: f64,
    depth: u32,
    value: T,
    error: f64,
}

impl<T> PartialEq for Interval<T> {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl<T> Eq for Interval<T> {}
impl<T> PartialOrd for Interval<T> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<T> Ord for Interval<T> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

const MAX_INTERVALS: usize = 4000;

/// Globally adaptive integration of `Σ_i ∫_{a_i}^{b_i} g(i, u) du`.
fn adaptive<T: QuadValue>(
    pieces: &[(f64, f64)],
    g: &dyn Fn(usize, f64) -> T,
    spec: &QuadratureSpec,
) -> Result<Estimate<T>> {
    let mut heap = BinaryHeap::new();
    let mut total = T::zero();
    let mut total_err = 0.0;
    let mut evaluations = 0;
    for (i, &(a, b)) in pieces.iter().enumerate() {
        let f = |u: f64| g(i, u);
        let r = gk15(&f, a, b);
        evaluations += 15;
        total = total + r.value;
        total_err += r.error;
        heap.push(Interval {
            piece: i,
            a,
            b,
            depth: 0,
            value: r.value,
            error: r.error,
        });
    }
    loop {
        if !total.is_finite() {
            return Err(Error::ToleranceNotMet {
                estimate: f64::INFINITY,
                target: spec.target(0.0),
            });
        }
        let target = spec.target(total.magnitude());
        if total_err <= target {
            break;
        }
        let worst = match heap.pop() {
            Some(w) => w,
            None => break,
        };
        if worst.depth >= spec.max_depth || heap.len() + 2 > MAX_INTERVALS {
            return Err(Error::ToleranceNotMet {
                estimate: total_err,
                target,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let f = |u: f64| g(worst.piece, u);
        let left = gk15(&f, worst.a, mid);
        let right = gk15(&f, mid, worst.b);
        evaluations += 30;
        total = total - worst.value + left.value + right.value;
        total_err += left.error + right.error - worst.error;
        for (a, b, r) in [(worst.a, mid, left), (mid, worst.b, right)] {
            heap.push(Interval {
                piece: worst.piece,
                a,
                b,
                depth: worst.depth + 1,
                value: r.value,
                error: r.error,
            });
        }
    }
    // re-sum to shed the drift of incremental updates
    let mut value = T::zero();
    let mut error = 0.0;
    for iv in heap.iter() {
        value = value + iv.value;
        error += iv.error;
    }
    Ok(Estimate {
        value,
        error,
        evaluations,
    })
}

fn check_growth<T: QuadValue>(
    f: &dyn Fn(Abscissa) -> T,
    anchor: f64,
    direction: f64,
    length: f64,
    spec: &QuadratureSpec,
) -> Result<()> {
    let d1 = 1e-5 * length;
    let d2 = 1e-8 * length;
    let v1 = f(Abscissa {
        anchor,
        offset: direction * d1,
    })
    .magnitude();
    let v2 = f(Abscissa {
        anchor,
        offset: direction * d2,
    })
    .magnitude();
    if v1 > 0.0 && v2 > 0.0 && v1.is_finite() && v2.is_finite() {
        let exponent = (v2 / v1).ln() / (d2 / d1).ln();
        if exponent < spec.singular_exponent - 0.1 {
            return Err(Error::NonIntegrableSingularity { exponent });
        }
    }
    Ok(())
}

/// Integrate `f` over the parameter interval `[a, b]`.
///
/// Flagged endpoints are regularised by the cube substitution; when both
/// ends are flagged the interval is split at its midpoint first.
pub fn integrate_path<T: QuadValue>(
    f: impl Fn(Abscissa) -> T,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
    singular: SingularEnds,
) -> Result<Estimate<T>> {
    spec.validate()?;
    if a == b {
        return Ok(Estimate {
            value: T::zero(),
            error: 0.0,
            evaluations: 0,
        });
    }
    let f = &f as &dyn Fn(Abscissa) -> T;
    let len = (b - a).abs();
    if singular.start {
        check_growth(f, a, (b - a).signum(), len, spec)?;
    }
    if singular.end {
        check_growth(f, b, (a - b).signum(), len, spec)?;
    }
    let mid = 0.5 * (a + b);
    // each piece: (kind, lo, hi) where kind 0 = plain, 1 = singular at lo, 2 = singular at hi
    let segments: Vec<(u8, f64, f64)> = match (singular.start, singular.end) {
        (false, false) => vec![(0, a, b)],
        (true, false) => vec![(1, a, b)],
        (false, true) => vec![(2, a, b)],
        (true, true) => vec![(1, a, mid), (2, mid, b)],
    };
    let pieces: Vec<(f64, f64)> = segments
        .iter()
        .map(|&(kind, lo, hi)| if kind == 0 { (lo, hi) } else { (0.0, 1.0) })
        .collect();
    let g = |i: usize, u: f64| -> T {
        let (kind, lo, hi) = segments[i];
        match kind {
            0 => f(Abscissa {
                anchor: lo,
                offset: u - lo,
            }),
            1 => {
                let h = hi - lo;
                let u2 = u * u;
                f(Abscissa {
                    anchor: lo,
                    offset: h * u2 * u,
                }) * (3.0 * h * u2)
            }
            _ => {
                let h = hi - lo;
                let u2 = u * u;
                f(Abscissa {
                    anchor: hi,
                    offset: -h * u2 * u,
                }) * (3.0 * h * u2)
            }
        }
    };
    adaptive(&pieces, &g, spec)
}

/// Plain adaptive integral of a real function, no endpoint treatment.
pub fn integrate_real(f: impl Fn(f64) -> f64, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate<f64>> {
    integrate_path(|x: Abscissa| f(x.value()), a, b, spec, SingularEnds::NONE)
}

/// Layout of a plane integral in polar coordinates.
#[derive(Clone, Debug)]
pub struct PlaneOptions {
    /// Radius separating the inner disk from the inverted outer region.
    pub r_split: f64,
    /// Angles in `[0, 2π)` where the outer θ-integral is split.
    pub theta_breaks: Vec<f64>,
    /// Centres of excised disks.
    pub excised: Vec<Complex64>,
    pub excision_radius: f64,
    /// Restrict θ to `[theta_range.0, theta_range.1]` (default full turn).
    pub theta_range: (f64, f64),
}

impl Default for PlaneOptions {
    fn default() -> Self {
        PlaneOptions {
            r_split: 1.0,
            theta_breaks: (0..12).map(|k| k as f64 * PI / 6.0).collect(),
            excised: Vec::new(),
            excision_radius: 0.0,
            theta_range: (0.0, 2.0 * PI),
        }
    }
}

/// Radial intervals on the ray at angle `theta` lying outside every excised disk.
fn radial_intervals(theta: f64, opts: &PlaneOptions) -> Vec<(f64, f64)> {
    let eps = opts.excision_radius;
    let mut cuts: Vec<(f64, f64)> = Vec::new();
    if eps > 0.0 {
        for c in &opts.excised {
            let rho = c.norm();
            let delta = theta - c.arg();
            let perp = rho * delta.sin();
            let along = rho * delta.cos();
            if perp.abs() < eps {
                let half = (eps * eps - perp * perp).sqrt();
                let lo = (along - half).max(0.0);
                let hi = along + half;
                if hi > 0.0 {
                    cuts.push((lo, hi));
                }
            }
        }
    }
    cuts.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out = Vec::new();
    let mut start = 0.0;
    for (lo, hi) in cuts {
        if lo > start {
            out.push((start, lo));
        }
        start = start.max(hi);
    }
    out.push((start, f64::INFINITY));
    out
}

/// `∫_θ ∫_r f(r, θ) dr dθ` over the plane (`f` includes any Jacobian).
///
/// The radial integral is split at `r_split`; `[r_split, ∞)` is mapped by
/// `r = r_split / s`. Excised disks are removed exactly from every ray, and
/// the θ-integral is split at the angles where rays become tangent to them.
pub fn integrate_plane(
    f: impl Fn(f64, f64) -> f64 + Sync,
    spec: &QuadratureSpec,
    opts: &PlaneOptions,
) -> Result<Estimate<f64>> {
    spec.validate()?;
    let (t0, t1) = opts.theta_range;
    let mut breaks: Vec<(f64, bool)> = vec![(t0, false), (t1, false)];
    let wrap = |x: f64| -> f64 {
        // move x into [t0, t0 + 2π)
        let mut y = (x - t0).rem_euclid(2.0 * PI) + t0;
        if y >= t0 + 2.0 * PI {
            y -= 2.0 * PI;
        }
        y
    };
    for &b in &opts.theta_breaks {
        let b = wrap(b);
        if b > t0 && b < t1 {
            breaks.push((b, false));
        }
    }
    if opts.excision_radius > 0.0 {
        for c in &opts.excised {
            let rho = c.norm();
            if rho <= opts.excision_radius {
                continue;
            }
            let hw = (opts.excision_radius / rho).asin();
            for b in [c.arg() - hw, c.arg() + hw] {
                let b = wrap(b);
                if b > t0 && b < t1 {
                    breaks.push((b, true));
                }
            }
        }
    }
    breaks.sort_by(|x, y| x.0.total_cmp(&y.0));
    breaks.dedup_by(|a, b| {
        if (a.0 - b.0).abs() < 1e-15 {
            b.1 |= a.1;
            true
        } else {
            false
        }
    });

    let inner_spec = QuadratureSpec {
        abs_tol: spec.abs_tol * 0.1,
        rel_tol: spec.rel_tol * 0.1,
        ..*spec
    };
    let radial = |theta: f64| -> Result<Estimate<f64>> {
        let mut pieces: Vec<(f64, f64, bool)> = Vec::new();
        for (lo, hi) in radial_intervals(theta, opts) {
            let rs = opts.r_split;
            if lo < rs {
                pieces.push((lo, hi.min(rs), false));
            }
            if hi > rs {
                let a = lo.max(rs);
                // r in [a, hi] ↦ s = rs / r in [rs/hi, rs/a]
                let s_lo = if hi.is_infinite() { 0.0 } else { rs / hi };
                pieces.push((s_lo, rs / a, true));
            }
        }
        let g = |i: usize, x: f64| -> f64 {
            let (_, _, inverted) = pieces[i];
            if inverted {
                let r = opts.r_split / x;
                let v = f(r, theta) * opts.r_split / (x * x);
                if v.is_finite() {
                    v
                } else {
                    0.0
                }
            } else {
                f(x, theta)
            }
        };
        let spans: Vec<(f64, f64)> = pieces.iter().map(|p| (p.0, p.1)).collect();
        adaptive(&spans, &g, &inner_spec)
    };

    let outer: Vec<Result<Estimate<f64>>> = breaks
        .windows(2)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|w| {
            let (a, sa) = w[0];
            let (b, sb) = w[1];
            let inner_err = std::sync::Mutex::new(0.0f64);
            let failure = std::sync::Mutex::new(None);
            let outer_f = |x: Abscissa| -> f64 {
                if failure.lock().unwrap().is_some() {
                    return 0.0;
                }
                match radial(x.value()) {
                    Ok(e) => {
                        let mut m = inner_err.lock().unwrap();
                        *m = m.max(e.error);
                        e.value
                    }
                    Err(e) => {
                        *failure.lock().unwrap() = Some(e);
                        0.0
                    }
                }
            };
            let ends = SingularEnds { start: sa, end: sb };
            let est = integrate_path(outer_f, a, b, spec, ends)?;
            if let Some(e) = failure.into_inner().unwrap() {
                return Err(e);
            }
            let extra = inner_err.into_inner().unwrap() * (b - a);
            Ok(Estimate {
                value: est.value,
                error: est.error + extra,
                evaluations: est.evaluations,
            })
        })
        .collect();
    let mut value = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0;
    for r in outer {
        let e = r?;
        value += e.value;
        error += e.error;
        evaluations += e.evaluations;
    }
    Ok(Estimate {
        value,
        error,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_integrand() {
        let e = integrate_real(|_| 1.0, 0.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert!((e.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cube_substitution_is_exact_for_the_model_singularity() {
        let spec = QuadratureSpec::default();
        let e = integrate_path(
            |x: Abscissa| {
                let t = x.value();
                t.powf(-2.0 / 3.0)
            },
            0.0,
            1.0,
            &spec,
            SingularEnds::START,
        )
        .unwrap();
        assert!((e.value - 3.0).abs() < 1e-14, "{}", e.value);
    }

    #[test]
    fn offsets_preserve_tiny_distances() {
        // integrand only depends on the distance from the right endpoint
        let spec = QuadratureSpec::default();
        let e = integrate_path(
            |x: Abscissa| {
                assert!(x.anchor == 1.0 && x.offset <= 0.0);
                (-x.offset).powf(-2.0 / 3.0)
            },
            0.0,
            1.0,
            &spec,
            SingularEnds::END,
        )
        .unwrap();
        assert!((e.value - 3.0).abs() < 1e-14);
    }

    #[test]
    fn steeper_singularity_is_rejected() {
        let r = integrate_path(
            |x: Abscissa| x.value().powf(-5.0 / 6.0),
            0.0,
            1.0,
            &QuadratureSpec::default(),
            SingularEnds::START,
        );
        match r {
            Err(Error::NonIntegrableSingularity { exponent }) => {
                assert!((exponent + 5.0 / 6.0).abs() < 1e-6)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unreachable_tolerance_reports_failure() {
        let spec = QuadratureSpec::with_tolerance(1e-17);
        let r = integrate_real(|x| x.sin().exp(), 0.0, 3.0, &spec);
        assert!(matches!(r, Err(Error::ToleranceNotMet { .. })));
    }

    #[test]
    fn invalid_spec_rejected() {
        let spec = QuadratureSpec {
            max_depth: 5,
            ..Default::default()
        };
        assert!(spec.validate().is_err());
        assert!(QuadratureSpec::with_tolerance(0.0).validate().is_err());
    }

    #[test]
    fn reversed_interval_changes_sign() {
        let spec = QuadratureSpec::default();
        let fwd = integrate_real(|x| x * x, 0.0, 2.0, &spec).unwrap().value;
        let back = integrate_real(|x| x * x, 2.0, 0.0, &spec).unwrap().value;
        assert!((fwd + back).abs() < 1e-14);
        assert!((fwd - 8.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn gaussian_over_the_plane() {
        let spec = QuadratureSpec::with_tolerance(1e-11);
        let e = integrate_plane(|r, _| (-r * r).exp() * r, &spec, &PlaneOptions::default()).unwrap();
        assert!((e.value - PI).abs() < 1e-9, "{}", e.value);
    }

    #[test]
    fn zero_over_the_plane() {
        let e = integrate_plane(|_, _| 0.0, &QuadratureSpec::default(), &PlaneOptions::default()).unwrap();
        assert_eq!(e.value, 0.0);
    }

    #[test]
    fn excised_disk_area() {
        // area of {|z| < 2} minus a disk of radius 0.3 at z = 1
        let spec = QuadratureSpec::with_tolerance(1e-10);
        let opts = PlaneOptions {
            excised: vec![Complex64::new(1.0, 0.0)],
            excision_radius: 0.3,
            r_split: 2.0,
            ..Default::default()
        };
        // the indicator jumps at r = 2, so split the radius there
        let e = integrate_plane(|r, _| if r <= 2.0 { r } else { 0.0 }, &spec, &opts).unwrap();
        let expected = PI * 4.0 - PI * 0.09;
        assert!((e.value - expected).abs() < 1e-8, "{} vs {}", e.value, expected);
    }

    #[test]
    fn radial_intervals_skip_the_disk() {
        let opts = PlaneOptions {
            excised: vec![Complex64::new(1.0, 0.0)],
            excision_radius: 0.1,
            ..Default::default()
        };
        let iv = radial_intervals(0.0, &opts);
        assert_eq!(iv.len(), 2);
        assert!((iv[0].1 - 0.9).abs() < 1e-15);
        assert!((iv[1].0 - 1.1).abs() < 1e-15);
        assert_eq!(radial_intervals(1.0, &opts).len(), 1);
    }
}
