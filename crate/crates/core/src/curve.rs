//! The cyclic trigonal cover `w³ = z^{g+2} − 1`, its sheets, and the
//! Weierstrass data `Ψ` of the genus-10 surface.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::Cyclo;
use crate::quadrature::Abscissa;

pub const CURVE_TOL: f64 = 1e-12;
/// Exponent of `z` for the genus-10 curve.
pub const DEGREE: i32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurveParams {
    pub genus: u32,
    pub branch_degree: u32,
}

impl CurveParams {
    pub fn new(genus: u32) -> Result<Self> {
        if genus < 4 || genus % 3 != 1 {
            return Err(Error::Domain(format!(
                "genus {genus} is not of the form 3r+1 with r >= 1"
            )));
        }
        Ok(CurveParams {
            genus,
            branch_degree: genus + 2,
        })
    }

    pub fn genus10() -> Self {
        CurveParams {
            genus: 10,
            branch_degree: 12,
        }
    }

    /// Exponent pairs `(a, b)` of the holomorphic differentials `z^a dz / w^b`.
    ///
    /// Finite branch points allow `b ≤ 2`; the three unramified points over
    /// infinity require `a ≤ b·n/3 − 2`.
    pub fn differential_basis(&self) -> Vec<(u32, u32)> {
        let n = self.branch_degree;
        let mut out = Vec::new();
        for b in 1..=2u32 {
            let top = b * n / 3;
            for a in 0..top.saturating_sub(1) {
                out.push((a, b));
            }
        }
        out
    }

    pub fn branch_points(&self) -> Vec<Complex64> {
        let n = self.branch_degree;
        (0..n)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
            .collect()
    }
}

/// `z¹² − 1`.
pub fn branch_value(z: Complex64) -> Complex64 {
    z.powi(DEGREE) - 1.0
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint {
    pub z: Complex64,
    pub w: Complex64,
}

impl SurfacePoint {
    pub fn new(z: Complex64, w: Complex64) -> Result<Self> {
        let p = SurfacePoint { z, w };
        let residual = p.residual();
        if residual > CURVE_TOL * 1f64.max(z.norm().powi(DEGREE)) {
            return Err(Error::SeedOffCurve { residual });
        }
        Ok(p)
    }

    pub fn residual(&self) -> f64 {
        (self.w * self.w * self.w - branch_value(self.z)).norm()
    }
}

fn sorted_cube_roots(v: Complex64) -> [Complex64; 3] {
    if v == Complex64::zero() {
        return [Complex64::zero(); 3];
    }
    let c = v.cbrt();
    let omega = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let mut roots = [c, c * omega, c * omega * omega];
    roots.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
    roots
}

/// The three values of `w` over `z`, sorted by principal argument.
pub fn sheet_values(z: Complex64) -> [Complex64; 3] {
    sorted_cube_roots(branch_value(z))
}

/// A path `z(s)`, `s ∈ [0, 1]`.
pub trait ComplexPath: Sync {
    fn z(&self, s: Abscissa) -> Complex64;
    fn dz(&self, s: Abscissa) -> Complex64;
    /// `z(s)¹² − 1`; paths touching branch points override this with a
    /// cancellation-free form.
    fn branch_value(&self, s: Abscissa) -> Complex64 {
        branch_value(self.z(s))
    }
}

/// Unit-circle arc `z = e^{iπu/6}` with `u` running linearly from `from` to `to`.
///
/// Angles are measured in units of π/6, so integer values are branch points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub from: f64,
    pub to: f64,
}

impl Arc {
    pub fn new(from: f64, to: f64) -> Self {
        Arc { from, to }
    }

    fn angle_units(&self, s: Abscissa) -> (f64, f64) {
        let d = self.to - self.from;
        (self.from + d * s.anchor, d * s.offset)
    }
}

impl ComplexPath for Arc {
    fn z(&self, s: Abscissa) -> Complex64 {
        let (u0, du) = self.angle_units(s);
        Complex64::from_polar(1.0, PI * (u0 + du) / 6.0)
    }

    fn dz(&self, s: Abscissa) -> Complex64 {
        Complex64::i() * (PI * (self.to - self.from) / 6.0) * self.z(s)
    }

    fn branch_value(&self, s: Abscissa) -> Complex64 {
        // e^{iπu}·e^{iπu} − 1 = 2i·sin(πu)·e^{iπu}, with u reduced mod 1 around its anchor
        let (u0, du) = self.angle_units(s);
        let k = u0.round();
        let x = PI * ((u0 - k) + du);
        Complex64::new(0.0, 2.0 * x.sin()) * Complex64::from_polar(1.0, x)
    }
}

/// Straight segment from `a` to `b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub a: Complex64,
    pub b: Complex64,
}

impl ComplexPath for Segment {
    fn z(&self, s: Abscissa) -> Complex64 {
        let base = self.a + (self.b - self.a) * s.anchor;
        base + (self.b - self.a) * s.offset
    }

    fn dz(&self, _s: Abscissa) -> Complex64 {
        self.b - self.a
    }
}

/// Counter-clockwise circle `center + radius·e^{i(start + 2π·turns·s)}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
    pub start: f64,
    pub turns: f64,
}

impl ComplexPath for Circle {
    fn z(&self, s: Abscissa) -> Complex64 {
        let t = self.start + 2.0 * PI * self.turns * s.value();
        self.center + Complex64::from_polar(self.radius, t)
    }

    fn dz(&self, s: Abscissa) -> Complex64 {
        let t = self.start + 2.0 * PI * self.turns * s.value();
        Complex64::i() * (2.0 * PI * self.turns) * Complex64::from_polar(self.radius, t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constant(pub Complex64);

impl ComplexPath for Constant {
    fn z(&self, _s: Abscissa) -> Complex64 {
        self.0
    }

    fn dz(&self, _s: Abscissa) -> Complex64 {
        Complex64::zero()
    }
}

/// Distance from a branch endpoint at which tracks stop.
pub const ENDPOINT_GAP: f64 = 1e-8;
const INITIAL_STEP: f64 = 1.0 / 64.0;
const MIN_STEP: f64 = 1e-13;
const JUMP_GUARD: f64 = 0.5;

/// Samples of a continuous sheet `w(s)` along a path.
#[derive(Clone, Debug)]
pub struct SheetTrack {
    samples: Vec<(f64, Complex64)>,
}

impl SheetTrack {
    pub fn samples(&self) -> &[(f64, Complex64)] {
        &self.samples
    }

    pub fn first(&self) -> (f64, Complex64) {
        self.samples[0]
    }

    pub fn last(&self) -> (f64, Complex64) {
        *self.samples.last().unwrap()
    }

    fn nearest(&self, s: f64) -> Complex64 {
        let i = self.samples.partition_point(|(t, _)| *t < s);
        let pick = if i == 0 {
            0
        } else if i == self.samples.len() {
            i - 1
        } else if (self.samples[i].0 - s) < (s - self.samples[i - 1].0) {
            i
        } else {
            i - 1
        };
        self.samples[pick].1
    }

    /// Sheet value at `s`: the cube root pointing closest to the nearest sample.
    pub fn value_at(&self, path: &dyn ComplexPath, s: Abscissa) -> Complex64 {
        let reference = self.nearest(s.value());
        let dir = reference / reference.norm();
        let roots = sorted_cube_roots(path.branch_value(s));
        let mut best = roots[0];
        let mut best_d = f64::INFINITY;
        for r in roots {
            let n = r.norm();
            let d = if n == 0.0 { 0.0 } else { (r / n - dir).norm() };
            if d < best_d {
                best_d = d;
                best = r;
            }
        }
        best
    }
}

fn step_towards(
    path: &dyn ComplexPath,
    start: f64,
    w0: Complex64,
    stop: f64,
    scale: f64,
) -> Result<Vec<(f64, Complex64)>> {
    let dir = (stop - start).signum();
    let mut out = Vec::new();
    let mut s = start;
    let mut w = w0;
    let mut h = INITIAL_STEP;
    while (stop - s) * dir > 0.0 {
        let next = if (stop - s).abs() <= h { stop } else { s + dir * h };
        let roots = sorted_cube_roots(path.branch_value(Abscissa::at(next)));
        let mut d: Vec<(f64, Complex64)> = roots.iter().map(|r| ((r - w).norm(), *r)).collect();
        d.sort_by(|a, b| a.0.total_cmp(&b.0));
        let wn = w.norm();
        let jump_ok = d[0].0 < JUMP_GUARD * wn;
        let separated = d[1].0 - d[0].0 > 0.25 * wn;
        let degenerate = d[0].1.norm() < 1e-10 * scale;
        if jump_ok && separated && !degenerate {
            s = next;
            w = d[0].1;
            out.push((s, w));
            h = (2.0 * h).min(INITIAL_STEP);
        } else {
            h *= 0.5;
            if h < MIN_STEP || degenerate {
                return Err(Error::AmbiguousContinuation { param: next });
            }
        }
    }
    Ok(out)
}

/// Continue the sheet `w` along `path` from `w(seed) = w_seed`.
///
/// Endpoints that are branch points are approached to within
/// [`ENDPOINT_GAP`]; interior branch points yield `AmbiguousContinuation`.
pub fn continue_sheet(path: &dyn ComplexPath, seed: f64, w_seed: Complex64) -> Result<SheetTrack> {
    let bv = path.branch_value(Abscissa::at(seed));
    let z = path.z(Abscissa::at(seed));
    let residual = (w_seed * w_seed * w_seed - bv).norm();
    if residual > CURVE_TOL * 1f64.max(z.norm().powi(DEGREE)) {
        return Err(Error::SeedOffCurve { residual });
    }
    if w_seed == Complex64::zero() {
        return Err(Error::AmbiguousContinuation { param: seed });
    }
    let scale = w_seed.norm();
    let is_branch = |s: f64| path.branch_value(Abscissa::at(s)).norm() < 1e-12;
    let lo = if is_branch(0.0) { ENDPOINT_GAP } else { 0.0 };
    let hi = if is_branch(1.0) { 1.0 - ENDPOINT_GAP } else { 1.0 };
    let mut back = step_towards(path, seed, w_seed, lo, scale)?;
    let fwd = step_towards(path, seed, w_seed, hi, scale)?;
    back.reverse();
    back.push((seed, w_seed));
    back.extend(fwd);
    Ok(SheetTrack { samples: back })
}

/// Values of the four components of `Ψ/dz`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsiValue {
    pub components: [Complex64; 4],
}

impl PsiValue {
    pub fn square_sum(&self) -> Complex64 {
        self.components.iter().map(|c| c * c).sum()
    }

    pub fn scale(&self, s: Complex64) -> PsiValue {
        PsiValue {
            components: self.components.map(|c| c * s),
        }
    }
}

/// `((1−z⁶)/w², i(1+z⁶)/w², (z⁵+z)/w², i(z⁵−z)/w²)`.
pub fn psi_at(z: Complex64, w: Complex64) -> Result<PsiValue> {
    if w == Complex64::zero() {
        return Err(Error::BranchPointSingularity);
    }
    let i = Complex64::i();
    let inv = (w * w).inv();
    let z5 = z.powi(5);
    let z6 = z5 * z;
    Ok(PsiValue {
        components: [
            (1.0 - z6) * inv,
            i * (1.0 + z6) * inv,
            (z5 + z) * inv,
            i * (z5 - z) * inv,
        ],
    })
}

pub fn psi(p: &SurfacePoint) -> Result<PsiValue> {
    psi_at(p.z, p.w)
}

/// Dense polynomial over Q(i, √3), lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloPoly(Vec<Cyclo>);

impl CycloPoly {
    pub fn new(mut coeffs: Vec<Cyclo>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        CycloPoly(coeffs)
    }

    pub fn zero() -> Self {
        CycloPoly(Vec::new())
    }

    /// `Σ c·z^k` from integer `(k, c)` terms with an overall scalar.
    pub fn from_terms(scalar: Cyclo, terms: &[(usize, i64)]) -> Self {
        let deg = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let mut c = vec![Cyclo::zero(); deg + 1];
        for &(k, v) in terms {
            c[k] += &(&scalar * &Cyclo::from_int(v));
        }
        CycloPoly::new(c)
    }

    pub fn coeffs(&self) -> &[Cyclo] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn add(&self, o: &CycloPoly) -> CycloPoly {
        let n = self.0.len().max(o.0.len());
        let mut c = vec![Cyclo::zero(); n];
        for (k, v) in self.0.iter().enumerate() {
            c[k] += v;
        }
        for (k, v) in o.0.iter().enumerate() {
            c[k] += v;
        }
        CycloPoly::new(c)
    }

    pub fn mul(&self, o: &CycloPoly) -> CycloPoly {
        if self.is_zero() || o.is_zero() {
            return CycloPoly::zero();
        }
        let mut c = vec![Cyclo::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += &(a * b);
            }
        }
        CycloPoly::new(c)
    }

    pub fn eval(&self, x: &Cyclo) -> Cyclo {
        let mut acc = Cyclo::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    fn monic(&self) -> CycloPoly {
        match self.0.last() {
            None => CycloPoly::zero(),
            Some(lead) => {
                let inv = lead.inv().expect("nonzero leading coefficient");
                CycloPoly::new(self.0.iter().map(|c| c * &inv).collect())
            }
        }
    }

    fn rem(&self, d: &CycloPoly) -> CycloPoly {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.0[dd].inv().unwrap();
        let mut r = self.0.clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let q = &r[top] * &lead_inv;
            for (k, dc) in d.0.iter().enumerate() {
                let t = &q * dc;
                r[top - dd + k] = &r[top - dd + k] - &t;
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        CycloPoly::new(r)
    }

    /// Monic gcd (the zero polynomial if both inputs vanish).
    pub fn gcd(&self, o: &CycloPoly) -> CycloPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Multiplicity of `x` as a root.
    pub fn root_multiplicity(&self, x: &Cyclo) -> usize {
        let mut p = self.0.clone();
        let mut m = 0;
        while !p.is_empty() {
            // synthetic division by (z − x)
            let n = p.len();
            let mut q = vec![Cyclo::zero(); n - 1];
            let mut carry = Cyclo::zero();
            for k in (0..n).rev() {
                let v = &p[k] + &(&carry * x);
                if k == 0 {
                    if !v.is_zero() {
                        return m;
                    }
                } else {
                    q[k - 1] = v.clone();
                }
                carry = v;
            }
            m += 1;
            p = q;
        }
        m
    }
}

/// Numerators of `Ψ` over the common factor `dz / w²`.
pub fn weierstrass_numerators() -> [CycloPoly; 4] {
    let one = Cyclo::one();
    let i = Cyclo::i();
    [
        CycloPoly::from_terms(one.clone(), &[(0, 1), (6, -1)]),
        CycloPoly::from_terms(i.clone(), &[(0, 1), (6, 1)]),
        CycloPoly::from_terms(one, &[(1, 1), (5, 1)]),
        CycloPoly::from_terms(i, &[(1, -1), (5, 1)]),
    ]
}

/// Vanishing order in the local parameter `t` (`z − ζ ~ t³`) of each
/// `num·dz/w²` at the branch point `ζ^k`; `None` for a zero numerator.
///
/// `dz ~ 3t² dt` cancels the pole of `1/w² ~ t⁻²`, so the order is
/// three times the root multiplicity of the numerator.
pub fn branch_point_orders(nums: &[CycloPoly]) -> Vec<Vec<Option<usize>>> {
    (0..12)
        .map(|k| {
            let zeta = Cyclo::root_of_unity(k);
            nums.iter()
                .map(|p| (!p.is_zero()).then(|| 3 * p.root_multiplicity(&zeta)))
                .collect()
        })
        .collect()
}

/// Condition (1) for differentials `num_k·dz/w²` at finite points.
pub fn no_common_zeros(nums: &[CycloPoly]) -> bool {
    let g = nums.iter().fold(CycloPoly::zero(), |acc, p| acc.gcd(p));
    if g.degree() != Some(0) {
        return false;
    }
    branch_point_orders(nums).iter().all(|orders| orders.contains(&Some(0)))
}

pub fn check_no_common_zeros() -> bool {
    no_common_zeros(&weierstrass_numerators())
}

/// `Σ num_k²`; it vanishes identically iff `Σψ_k² = 0`.
pub fn conformality_polynomial(nums: &[CycloPoly]) -> CycloPoly {
    nums.iter().fold(CycloPoly::zero(), |acc, p| acc.add(&p.mul(p)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObstructionReason {
    NotTrigonal,
    Residue { genus: u64, residue: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Obstruction {
    Admissible { r: u64 },
    Obstructed(ObstructionReason),
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::Admissible { r } => write!(f, "Admissible({r})"),
            Obstruction::Obstructed(ObstructionReason::NotTrigonal) => write!(f, "Obstructed(not trigonal)"),
            Obstruction::Obstructed(ObstructionReason::Residue { genus, residue }) => {
                write!(f, "Obstructed({genus} ≡ {residue} mod 3)")
            }
        }
    }
}

/// Whether a trigonal surface of genus `g` can be minimally immersed in a flat 4-torus.
pub fn trigonal_obstruction(g: u64) -> Obstruction {
    if g <= 3 {
        return Obstruction::Obstructed(ObstructionReason::NotTrigonal);
    }
    match g % 3 {
        1 => Obstruction::Admissible { r: (g - 1) / 3 },
        residue => Obstruction::Obstructed(ObstructionReason::Residue { genus: g, residue }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sheets_at_origin_are_cube_roots_of_minus_one() {
        let s = sheet_values(c(0.0, 0.0));
        let expect = [
            Complex64::from_polar(1.0, -PI / 3.0),
            Complex64::from_polar(1.0, PI / 3.0),
            c(-1.0, 0.0),
        ];
        for (a, b) in s.iter().zip(expect) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn sheets_contain_minus_cbrt2_at_pi_over_12() {
        let s = sheet_values(Complex64::from_polar(1.0, PI / 12.0));
        let target = c(-2f64.cbrt(), 0.0);
        assert!(s.iter().any(|w| (w - target).norm() < 1e-14));
    }

    #[test]
    fn branch_point_sheets_collapse() {
        assert_eq!(sheet_values(c(1.0, 0.0)), [Complex64::zero(); 3]);
    }

    #[test]
    fn psi_at_base_point() {
        let p = SurfacePoint::new(c(0.0, 0.0), c(-1.0, 0.0)).unwrap();
        let v = psi(&p).unwrap();
        assert_eq!(v.components, [c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(psi_at(c(1.0, 0.0), Complex64::zero()).is_err());
    }

    #[test]
    fn psi_is_isotropic_at_z_equal_two() {
        for w in sheet_values(c(2.0, 0.0)) {
            let v = psi_at(c(2.0, 0.0), w).unwrap();
            let scale: f64 = v.components.iter().map(|x| x.norm_sqr()).sum();
            assert!(v.square_sum().norm() < 1e-12 * scale);
        }
    }

    #[test]
    fn seed_off_curve_rejected() {
        assert!(matches!(
            SurfacePoint::new(c(0.0, 0.0), c(1.0, 0.0)),
            Err(Error::SeedOffCurve { .. })
        ));
        let arc = Arc::new(0.0, 1.0);
        assert!(matches!(
            continue_sheet(&arc, 0.5, c(2.0, 0.0)),
            Err(Error::SeedOffCurve { .. })
        ));
    }

    #[test]
    fn constant_path_keeps_seed() {
        let z = Complex64::from_polar(1.0, PI / 12.0);
        let w = c(-2f64.cbrt(), 0.0);
        let path = Constant(z);
        let t = continue_sheet(&path, 0.3, w).unwrap();
        for &(_, v) in t.samples() {
            assert!((v - w).norm() < 1e-14);
        }
    }

    #[test]
    fn arc_through_branch_point_is_ambiguous() {
        // z = e^{it}, t from π/12 to π/4, crosses the branch point e^{iπ/6}
        let arc = Arc::new(0.5, 1.5);
        let r = continue_sheet(&arc, 0.0, c(-2f64.cbrt(), 0.0));
        assert!(matches!(r, Err(Error::AmbiguousContinuation { .. })));
    }

    #[test]
    fn arc_branch_value_is_stable_near_endpoints() {
        let arc = Arc::new(1.0, 0.0);
        let s = Abscissa {
            anchor: 1.0,
            offset: -1e-12,
        };
        let direct = branch_value(arc.z(s));
        let stable = arc.branch_value(s);
        // the direct form loses most digits; both must agree to its accuracy
        assert!((direct - stable).norm() < 1e-14);
        let expected = 2.0 * PI * 1e-12 / 6.0 * 6.0;
        assert!((stable.norm() - expected).abs() < 1e-22);
    }

    #[test]
    fn holomorphic_basis_has_dimension_genus() {
        for r in 1..30 {
            let p = CurveParams::new(3 * r + 1).unwrap();
            assert_eq!(p.differential_basis().len() as u32, p.genus);
        }
        assert!(CurveParams::new(6).is_err());
        assert!(CurveParams::new(1).is_err());
        let basis = CurveParams::genus10().differential_basis();
        // every Ψ numerator monomial z^0..z^6 over w² is holomorphic
        for a in 0..=6 {
            assert!(basis.contains(&(a, 2)));
        }
    }

    #[test]
    fn numerators_are_coprime_and_isotropic() {
        assert!(check_no_common_zeros());
        assert!(conformality_polynomial(&weierstrass_numerators()).is_zero());
    }

    #[test]
    fn common_factor_family_fails() {
        let one = Cyclo::one();
        let nums = [
            CycloPoly::from_terms(one.clone(), &[(0, -1), (6, 1)]),
            CycloPoly::from_terms(Cyclo::i(), &[(0, -1), (6, 1)]),
            CycloPoly::zero(),
            CycloPoly::zero(),
        ];
        assert!(!no_common_zeros(&nums));
        let g = nums[0].gcd(&nums[1]);
        assert_eq!(g.degree(), Some(6));
    }

    #[test]
    fn two_component_family_passes() {
        let nums = [
            CycloPoly::from_terms(Cyclo::one(), &[(0, 1), (6, -1)]),
            CycloPoly::from_terms(Cyclo::i(), &[(0, 1), (6, 1)]),
            CycloPoly::zero(),
            CycloPoly::zero(),
        ];
        assert!(no_common_zeros(&nums));
    }

    #[test]
    fn branch_orders_of_psi() {
        let orders = branch_point_orders(&weierstrass_numerators());
        // 1 − z⁶ vanishes simply at even powers of ζ, 1 + z⁶ at odd ones
        assert_eq!(orders[0][0], Some(3));
        assert_eq!(orders[0][1], Some(0));
        assert_eq!(orders[1][1], Some(3));
        assert_eq!(orders[1][0], Some(0));
    }

    #[test]
    fn root_multiplicity_counts_repeats() {
        let x = Cyclo::zeta12();
        let lin = CycloPoly::new(vec![-&x, Cyclo::one()]);
        let cube = lin.mul(&lin).mul(&lin);
        assert_eq!(cube.root_multiplicity(&x), 3);
        assert_eq!(cube.root_multiplicity(&Cyclo::one()), 0);
    }

    #[test]
    fn obstruction_examples() {
        assert_eq!(trigonal_obstruction(10), Obstruction::Admissible { r: 3 });
        assert_eq!(trigonal_obstruction(4), Obstruction::Admissible { r: 1 });
        assert!(matches!(trigonal_obstruction(6), Obstruction::Obstructed(_)));
        assert_eq!(trigonal_obstruction(2).to_string(), "Obstructed(not trigonal)");
        assert_eq!(trigonal_obstruction(8).to_string(), "Obstructed(8 ≡ 2 mod 3)");
        assert_eq!(trigonal_obstruction(10).to_string(), "Admissible(3)");
    }
}
