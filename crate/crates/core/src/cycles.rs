//! The twenty 1-cycles `A₁…A₁₀, B₁…B₁₀` and the automorphisms φ, φ′, j.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::curve::{continue_sheet, Arc, SheetTrack, SurfacePoint};
use crate::error::{Error, Result};
use crate::quadrature::Abscissa;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CycleKind {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CycleLabel {
    pub kind: CycleKind,
    pub index: u8,
}

impl fmt::Display for CycleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            CycleKind::A => "A",
            CycleKind::B => "B",
        };
        write!(f, "{k}{}", self.index)
    }
}

/// One arc of a cycle with the sheet value at its seed parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleSegment {
    pub arc: Arc,
    pub seed: f64,
    pub w_seed: Complex64,
}

impl CycleSegment {
    pub fn track(&self) -> Result<SheetTrack> {
        continue_sheet(&self.arc, self.seed, self.w_seed)
    }

    pub fn seed_point(&self) -> Result<SurfacePoint> {
        use crate::curve::ComplexPath;
        SurfacePoint::new(self.arc.z(Abscissa::at(self.seed)), self.w_seed)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CyclePath {
    pub label: CycleLabel,
    pub segments: Vec<CycleSegment>,
}

fn cbrt2() -> f64 {
    2f64.cbrt()
}

fn omega() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI / 3.0)
}

fn a_cycle(index: u8, second_seed: Complex64) -> CyclePath {
    let w1 = Complex64::new(-cbrt2(), 0.0);
    CyclePath {
        label: CycleLabel {
            kind: CycleKind::A,
            index,
        },
        segments: vec![
            // z = e^{it}, t: 0 → π/6, w(π/12) = −∛2
            CycleSegment {
                arc: Arc::new(0.0, 1.0),
                seed: 0.5,
                w_seed: w1,
            },
            // z = e^{−it}, t: −π/6 → 0, seed at t = −π/12
            CycleSegment {
                arc: Arc::new(1.0, 0.0),
                seed: 0.5,
                w_seed: second_seed,
            },
        ],
    }
}

pub fn cycle_a1() -> CyclePath {
    a_cycle(1, -cbrt2() * omega())
}

pub fn cycle_a2() -> CyclePath {
    a_cycle(2, -cbrt2() * omega() * omega())
}

impl CyclePath {
    /// Image under `φ^k`: arcs rotate by `kπ/6`, sheet values are unchanged.
    pub fn rotate(&self, k: i32, label: CycleLabel) -> CyclePath {
        CyclePath {
            label,
            segments: self
                .segments
                .iter()
                .map(|s| CycleSegment {
                    arc: Arc::new(s.arc.from + k as f64, s.arc.to + k as f64),
                    ..*s
                })
                .collect(),
        }
    }

    pub fn tracks(&self) -> Result<Vec<SheetTrack>> {
        self.segments.iter().map(|s| s.track()).collect()
    }

    /// Worst mismatch where consecutive segments meet.
    ///
    /// Junctions at branch points close automatically (all sheets meet at
    /// `w = 0`); elsewhere the continued sheet values must agree.
    pub fn closure_residual(&self) -> Result<f64> {
        use crate::curve::ComplexPath;
        let tracks = self.tracks()?;
        let n = self.segments.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            let a = &self.segments[i];
            let b = &self.segments[(i + 1) % n];
            let za = a.arc.z(Abscissa::at(1.0));
            let zb = b.arc.z(Abscissa::at(0.0));
            worst = worst.max((za - zb).norm());
            let at_branch = a.arc.branch_value(Abscissa::at(1.0)).norm() < 1e-12;
            if !at_branch {
                let wa = tracks[i].last().1;
                let wb = tracks[(i + 1) % n].first().1;
                worst = worst.max((wa - wb).norm());
            }
        }
        Ok(worst)
    }
}

/// Column order used throughout: `A1, A2, B1, B2, A3, A4, B3, B4, …, B9, B10`.
pub fn cycle_order() -> Vec<CycleLabel> {
    let mut out = Vec::with_capacity(20);
    for pair in 0..5u8 {
        for kind in [CycleKind::A, CycleKind::B] {
            for off in 1..=2u8 {
                out.push(CycleLabel {
                    kind,
                    index: 2 * pair + off,
                });
            }
        }
    }
    out
}

/// Power of φ taking `A₁` or `A₂` to the cycle, and which of the two.
pub fn pullback_exponent(label: CycleLabel) -> (u32, u8) {
    let pair = (label.index as u32 - 1) / 2;
    let base = if label.index % 2 == 1 { 1 } else { 2 };
    let k = 2 * pair + u32::from(label.kind == CycleKind::B);
    (k, base)
}

/// `A_{2k+1} = φ²(A_{2k−1})`, `A_{2k+2} = φ²(A_{2k})`, `B_l = φ(A_l)`.
pub fn generate_all_cycles() -> Vec<CyclePath> {
    let a1 = cycle_a1();
    let a2 = cycle_a2();
    cycle_order()
        .into_iter()
        .map(|label| {
            let (k, base) = pullback_exponent(label);
            let b = if base == 1 { &a1 } else { &a2 };
            b.rotate(k as i32, label)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Automorphism {
    /// `(z, w) ↦ (e^{iπ/6} z, w)`
    Phi,
    /// `(z, w) ↦ (1/z, e^{iπ/3} w / z⁴)`
    PhiPrime,
    /// `(z, w) ↦ (z, e^{2πi/3} w)`
    J,
    /// `φ ∘ j²`
    Phi1,
    /// `φ′ ∘ j`
    Phi2,
}

impl Automorphism {
    /// Primitive maps applied right to left.
    fn factors(self) -> &'static [Automorphism] {
        match self {
            Automorphism::Phi1 => &[Automorphism::J, Automorphism::J, Automorphism::Phi],
            Automorphism::Phi2 => &[Automorphism::J, Automorphism::PhiPrime],
            Automorphism::Phi => &[Automorphism::Phi],
            Automorphism::PhiPrime => &[Automorphism::PhiPrime],
            Automorphism::J => &[Automorphism::J],
        }
    }

    /// `d z′ / d z` at `z`.
    pub fn z_derivative(self, z: Complex64) -> Complex64 {
        let mut d = Complex64::new(1.0, 0.0);
        let mut zc = z;
        for f in self.factors() {
            match f {
                Automorphism::Phi => {
                    d *= Complex64::from_polar(1.0, PI / 6.0);
                    zc *= Complex64::from_polar(1.0, PI / 6.0);
                }
                Automorphism::PhiPrime => {
                    d *= -1.0 / (zc * zc);
                    zc = zc.inv();
                }
                _ => {}
            }
        }
        d
    }
}

fn apply_primitive(a: Automorphism, z: Complex64, w: Complex64) -> Result<(Complex64, Complex64)> {
    Ok(match a {
        Automorphism::Phi => (Complex64::from_polar(1.0, PI / 6.0) * z, w),
        Automorphism::PhiPrime => {
            if z == Complex64::new(0.0, 0.0) {
                return Err(Error::Domain("φ′ is undefined at z = 0".into()));
            }
            (z.inv(), Complex64::from_polar(1.0, PI / 3.0) * w / z.powi(4))
        }
        Automorphism::J => (z, omega() * w),
        _ => unreachable!("composite maps are expanded into factors"),
    })
}

pub fn apply_automorphism(a: Automorphism, p: &SurfacePoint) -> Result<SurfacePoint> {
    let (mut z, mut w) = (p.z, p.w);
    for &f in a.factors() {
        (z, w) = apply_primitive(f, z, w)?;
    }
    SurfacePoint::new(z, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{sheet_values, ComplexPath};
    use crate::exact::Cyclo;
    use num_traits::One;

    fn point(z: Complex64, sheet: usize) -> SurfacePoint {
        SurfacePoint::new(z, sheet_values(z)[sheet]).unwrap()
    }

    #[test]
    fn a1_seed_is_on_curve() {
        let a1 = cycle_a1();
        let p = a1.segments[0].seed_point().unwrap();
        assert!((p.w.powi(3) - Complex64::new(-2.0, 0.0)).norm() < 1e-14);
        assert!(a1.segments[1].seed_point().is_ok());
    }

    #[test]
    fn a1_and_a2_differ_only_in_second_seed() {
        let (a1, a2) = (cycle_a1(), cycle_a2());
        assert_eq!(a1.segments[0], a2.segments[0]);
        assert_eq!(a1.segments[1].arc, a2.segments[1].arc);
        assert_ne!(a1.segments[1].w_seed, a2.segments[1].w_seed);
    }

    #[test]
    fn all_cycles_close() {
        let all = generate_all_cycles();
        assert_eq!(all.len(), 20);
        let mut labels: Vec<String> = all.iter().map(|c| c.label.to_string()).collect();
        labels.sort();
        labels.dedup();
        assert_eq!(labels.len(), 20);
        for c in &all {
            assert!(c.closure_residual().unwrap() < 1e-10, "{}", c.label);
        }
    }

    #[test]
    fn b1_is_rotated_a1() {
        let all = generate_all_cycles();
        let b1 = &all[2];
        assert_eq!(b1.label.to_string(), "B1");
        assert_eq!(b1.segments[0].arc, Arc::new(1.0, 2.0));
        let seed_z = b1.segments[0].arc.z(Abscissa::at(b1.segments[0].seed));
        assert!((seed_z - Complex64::from_polar(1.0, PI / 12.0 + PI / 6.0)).norm() < 1e-15);
        assert_eq!(b1.segments[0].w_seed, cycle_a1().segments[0].w_seed);
        assert_eq!(all[4].segments[0].arc, Arc::new(2.0, 3.0)); // A3
    }

    #[test]
    fn first_arc_follows_closed_form_sheet() {
        // on the first A₁ arc, w = (2 sin 6t)^{1/3} e^{i(2t + 5π/6)}
        let seg = cycle_a1().segments[0];
        let track = seg.track().unwrap();
        for s in [1e-6, 0.1, 0.37, 0.5, 0.81, 1.0 - 1e-6] {
            let t = s * PI / 6.0;
            let sin6t = (PI * s.min(1.0 - s)).sin();
            let exact = Complex64::from_polar((2.0 * sin6t).cbrt(), 2.0 * t + 5.0 * PI / 6.0);
            let w = track.value_at(&seg.arc, Abscissa::at(s));
            assert!((w - exact).norm() < 1e-12 * exact.norm().max(1e-3), "s={s}");
        }
    }

    #[test]
    fn phi_has_order_twelve_and_j_order_three() {
        let p = point(Complex64::new(0.3, 0.7), 1);
        let mut q = p;
        for _ in 0..12 {
            q = apply_automorphism(Automorphism::Phi, &q).unwrap();
        }
        assert!((q.z - p.z).norm() < 1e-14 && (q.w - p.w).norm() < 1e-14);
        let mut q = p;
        for _ in 0..3 {
            q = apply_automorphism(Automorphism::J, &q).unwrap();
        }
        assert!((q.w - p.w).norm() < 1e-14);
    }

    #[test]
    fn phi_prime_squared_is_j() {
        let p = point(Complex64::new(1.3, -0.4), 2);
        let q = apply_automorphism(Automorphism::PhiPrime, &p).unwrap();
        let q = apply_automorphism(Automorphism::PhiPrime, &q).unwrap();
        let j = apply_automorphism(Automorphism::J, &p).unwrap();
        assert!((q.z - p.z).norm() < 1e-13);
        assert!((q.w - j.w).norm() < 1e-12);
        let origin = SurfacePoint::new(Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)).unwrap();
        assert!(apply_automorphism(Automorphism::PhiPrime, &origin).is_err());
    }

    #[test]
    fn phi_prime_preserves_curve_exactly() {
        // w′³ = e^{iπ} w³ / z¹² = −(z¹² − 1)/z¹² = z′¹² − 1, checked in Q(ζ₁₂)
        let e = Cyclo::e_pi_3();
        assert_eq!(e.pow(3), -Cyclo::one());
        // φ′² = j on the w-coordinate: e^{iπ/3} · e^{iπ/3} = e^{2πi/3}
        assert_eq!(&e * &e, Cyclo::omega());
    }

    #[test]
    fn pullback_exponents() {
        let order = cycle_order();
        let ks: Vec<(u32, u8)> = order.iter().map(|l| pullback_exponent(*l)).collect();
        assert_eq!(&ks[..6], &[(0, 1), (0, 2), (1, 1), (1, 2), (2, 1), (2, 2)]);
        assert_eq!(ks[19], (9, 2));
    }
}
