//! Periods of Ψ over the twenty cycles, numerically and in exact form.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::constants::LatticeConstants;
use crate::curve::{psi_at, ComplexPath};
use crate::cycles::{cycle_order, generate_all_cycles, pullback_exponent, CycleLabel, CyclePath};
use crate::error::{Error, Result};
use crate::exact::{Cyclo, Rational, Surd};
use crate::quadrature::{integrate_path, Abscissa, CVec, QuadValue, QuadratureSpec, SingularEnds};

/// `a·α + c·γ` with `a, c ∈ Q(i, √3)`; β is eliminated as `√3γ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SymbolicScalar {
    pub a: Cyclo,
    pub c: Cyclo,
}

impl SymbolicScalar {
    pub fn new(a: Cyclo, c: Cyclo) -> Self {
        SymbolicScalar { a, c }
    }

    pub fn alpha() -> Self {
        SymbolicScalar::new(Cyclo::one(), Cyclo::zero())
    }

    pub fn gamma() -> Self {
        SymbolicScalar::new(Cyclo::zero(), Cyclo::one())
    }

    pub fn zero() -> Self {
        SymbolicScalar::default()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.c.is_zero()
    }

    /// The eight rationals of `c₁α + c₂√3α + c₃γ + c₄√3γ + i(c₅α + c₆√3α + c₇γ + c₈√3γ)`.
    pub fn coefficients(&self) -> [Rational; 8] {
        [
            self.a.re.rat.clone(),
            self.a.re.irr.clone(),
            self.c.re.rat.clone(),
            self.c.re.irr.clone(),
            self.a.im.rat.clone(),
            self.a.im.irr.clone(),
            self.c.im.rat.clone(),
            self.c.im.irr.clone(),
        ]
    }

    pub fn from_coefficients(k: [Rational; 8]) -> Self {
        let [c1, c2, c3, c4, c5, c6, c7, c8] = k;
        SymbolicScalar::new(
            Cyclo::new(Surd::new(c1, c2), Surd::new(c5, c6)),
            Cyclo::new(Surd::new(c3, c4), Surd::new(c7, c8)),
        )
    }

    pub fn mul_cyclo(&self, s: &Cyclo) -> Self {
        SymbolicScalar::new(&self.a * s, &self.c * s)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        SymbolicScalar::new(self.a.scale(q), self.c.scale(q))
    }

    pub fn real_part(&self) -> Self {
        SymbolicScalar::new(Cyclo::real(self.a.re.clone()), Cyclo::real(self.c.re.clone()))
    }

    pub fn imag_part(&self) -> Self {
        SymbolicScalar::new(Cyclo::real(self.a.im.clone()), Cyclo::real(self.c.im.clone()))
    }

    pub fn is_real(&self) -> bool {
        self.a.im.is_zero() && self.c.im.is_zero()
    }

    pub fn to_complex(&self, k: &LatticeConstants) -> Complex64 {
        self.a.to_complex() * k.alpha + self.c.to_complex() * k.gamma
    }
}

impl fmt::Display for SymbolicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.c.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "({})α", self.a),
            (true, false) => write!(f, "({})γ", self.c),
            (false, false) => write!(f, "({})α + ({})γ", self.a, self.c),
        }
    }
}

impl Add<&SymbolicScalar> for &SymbolicScalar {
    type Output = SymbolicScalar;
    fn add(self, o: &SymbolicScalar) -> SymbolicScalar {
        SymbolicScalar::new(&self.a + &o.a, &self.c + &o.c)
    }
}

impl Sub<&SymbolicScalar> for &SymbolicScalar {
    type Output = SymbolicScalar;
    fn sub(self, o: &SymbolicScalar) -> SymbolicScalar {
        SymbolicScalar::new(&self.a - &o.a, &self.c - &o.c)
    }
}

impl Neg for &SymbolicScalar {
    type Output = SymbolicScalar;
    fn neg(self) -> SymbolicScalar {
        SymbolicScalar::new(-&self.a, -&self.c)
    }
}

pub type SymbolicVector = [SymbolicScalar; 4];

/// `(1 + e^{iπ/3})`, the A₁ prefactor.
pub fn prefactor_a1() -> Cyclo {
    Cyclo::one() + Cyclo::e_pi_3()
}

/// `(e^{2πi/3} + e^{iπ/3})`, the A₂ prefactor.
pub fn prefactor_a2() -> Cyclo {
    Cyclo::omega() + Cyclo::e_pi_3()
}

fn period_pattern(p: &Cyclo) -> SymbolicVector {
    let i = Cyclo::i();
    let alpha = SymbolicScalar::alpha();
    let gamma = SymbolicScalar::gamma();
    [
        alpha.mul_cyclo(p),
        (-&alpha).mul_cyclo(p),
        // i·p·β with β = √3γ
        gamma.mul_cyclo(&(&(&i * p) * &Cyclo::sqrt3())),
        (-&gamma).mul_cyclo(&(&i * p)),
    ]
}

/// Closed-form periods of Ψ over A₁.
pub fn closed_form_a1() -> SymbolicVector {
    period_pattern(&prefactor_a1())
}

/// Closed-form periods of Ψ over A₂.
pub fn closed_form_a2() -> SymbolicVector {
    period_pattern(&prefactor_a2())
}

pub type CycloMatrix = [[Cyclo; 4]; 4];

/// `e^{2πi/3}·diag(R(π/2), R(−π/3))`, with `φ*Ψ = M·Ψ`.
pub fn phi_pullback_matrix() -> CycloMatrix {
    let z = Cyclo::zero;
    let s = |a, b, d| Cyclo::real(Surd::frac(a, b, d));
    let block = [
        [s(0, 0, 1), s(-1, 0, 1), z(), z()],
        [s(1, 0, 1), s(0, 0, 1), z(), z()],
        [z(), z(), s(1, 0, 2), s(0, 1, 2)],
        [z(), z(), s(0, -1, 2), s(1, 0, 2)],
    ];
    let w = Cyclo::omega();
    block.map(|row| row.map(|e| &e * &w))
}

pub fn mat_vec(m: &CycloMatrix, v: &SymbolicVector) -> SymbolicVector {
    std::array::from_fn(|r| {
        let mut acc = SymbolicScalar::zero();
        for (k, vk) in v.iter().enumerate() {
            if !m[r][k].is_zero() {
                acc = &acc + &vk.mul_cyclo(&m[r][k]);
            }
        }
        acc
    })
}

/// `M^k·base`, the periods over `φ^k` of the base cycle.
pub fn period_via_pullback(base: &SymbolicVector, k: u32) -> SymbolicVector {
    let m = phi_pullback_matrix();
    let mut v = base.clone();
    for _ in 0..k {
        v = mat_vec(&m, &v);
    }
    v
}

pub fn symbolic_column(label: CycleLabel) -> SymbolicVector {
    let (k, base) = pullback_exponent(label);
    let b = if base == 1 { closed_form_a1() } else { closed_form_a2() };
    period_via_pullback(&b, k)
}

/// The twenty columns of Ω₁…Ω₇ as printed, each `scalar × vector`.
///
/// Scalars are `±(1+e^{iπ/3})`, `±(e^{2πi/3}+e^{iπ/3})`, `±(−1+e^{2πi/3})`;
/// vectors are `(a₁α, a₂α, a₃√3iγ, a₄iγ)`.
pub fn printed_omega() -> Vec<SymbolicVector> {
    const P: u8 = 0;
    const Q: u8 = 1;
    const R: u8 = 2;
    const TABLE: [(i64, u8, [i64; 4]); 20] = [
        (1, P, [1, -1, 1, -1]),
        (1, Q, [1, -1, 1, -1]),
        (1, R, [1, 1, 0, -2]),
        (-1, P, [1, 1, 0, -2]),
        (1, Q, [1, -1, 1, 1]),
        (1, R, [1, -1, 1, 1]),
        (-1, P, [1, 1, 1, -1]),
        (-1, Q, [1, 1, 1, -1]),
        (1, R, [1, -1, 0, 2]),
        (-1, P, [1, -1, 0, 2]),
        (-1, Q, [1, 1, 1, 1]),
        (-1, R, [1, 1, 1, 1]),
        (-1, P, [1, -1, -1, 1]),
        (-1, Q, [1, -1, -1, 1]),
        (-1, R, [1, 1, 0, 2]),
        (1, P, [1, 1, 0, 2]),
        (-1, Q, [1, -1, -1, -1]),
        (-1, R, [1, -1, -1, -1]),
        (1, P, [1, 1, -1, 1]),
        (1, Q, [1, 1, -1, 1]),
    ];
    let i = Cyclo::i();
    TABLE
        .iter()
        .map(|&(sign, kind, v)| {
            let base = match kind {
                P => prefactor_a1(),
                Q => prefactor_a2(),
                _ => Cyclo::omega() - Cyclo::one(),
            };
            let s = base.scale(&crate::exact::int(sign));
            let n = |x: i64| Cyclo::from_int(x);
            [
                SymbolicScalar::new(&n(v[0]) * &s, Cyclo::zero()),
                SymbolicScalar::new(&n(v[1]) * &s, Cyclo::zero()),
                SymbolicScalar::new(Cyclo::zero(), &(&(&n(v[2]) * &Cyclo::sqrt3()) * &i) * &s),
                SymbolicScalar::new(Cyclo::zero(), &(&n(v[3]) * &i) * &s),
            ]
        })
        .collect()
}

/// Numeric periods of all four components over one cycle.
pub fn period_vector(c: &CyclePath, spec: &QuadratureSpec) -> Result<([Complex64; 4], f64)> {
    let mut total = CVec::<4>::zero();
    let mut error = 0.0;
    for seg in &c.segments {
        let track = seg.track()?;
        let arc = seg.arc;
        let f = |s: Abscissa| -> CVec<4> {
            let z = arc.z(s);
            let w = track.value_at(&arc, s);
            match psi_at(z, w) {
                Ok(v) => CVec(v.components.map(|x| x * arc.dz(s))),
                Err(_) => CVec([Complex64::new(f64::NAN, 0.0); 4]),
            }
        };
        let is_branch = |s: f64| arc.branch_value(Abscissa::at(s)).norm() < 1e-12;
        let ends = SingularEnds {
            start: is_branch(0.0),
            end: is_branch(1.0),
        };
        let est = integrate_path(f, 0.0, 1.0, spec, ends)?;
        total = total + est.value;
        error += est.error;
    }
    Ok((total.0, error))
}

/// Period of component `component` (1-based) over `c`.
pub fn period_numeric(c: &CyclePath, component: usize, spec: &QuadratureSpec) -> Result<Complex64> {
    if !(1..=4).contains(&component) {
        return Err(Error::Domain(format!("component {component} outside 1..4")));
    }
    Ok(period_vector(c, spec)?.0[component - 1])
}

#[derive(Clone, Debug)]
pub struct PeriodMatrix {
    pub labels: Vec<CycleLabel>,
    /// Column-major: `numeric[col][row]`.
    pub numeric: Vec<[Complex64; 4]>,
    pub symbolic: Vec<SymbolicVector>,
    /// Largest `|numeric − symbolic|` over all entries.
    pub max_discrepancy: f64,
}

impl PeriodMatrix {
    pub fn symbolic_entry(&self, row: usize, col: usize) -> &SymbolicScalar {
        &self.symbolic[col][row]
    }
}

/// Integrate Ψ over all twenty cycles and compare with pullback transport.
pub fn assemble_period_matrix(spec: &QuadratureSpec, k: &LatticeConstants, tol: f64) -> Result<PeriodMatrix> {
    let cycles = generate_all_cycles();
    let numeric: Vec<Result<([Complex64; 4], f64)>> = cycles.par_iter().map(|c| period_vector(c, spec)).collect();
    let labels = cycle_order();
    let mut cols = Vec::with_capacity(20);
    let mut symbolic = Vec::with_capacity(20);
    let mut worst = 0.0f64;
    for (label, n) in labels.iter().zip(numeric) {
        let (v, _) = n?;
        let s = symbolic_column(*label);
        for r in 0..4 {
            let d = (v[r] - s[r].to_complex(k)).norm();
            if d > tol {
                return Err(Error::Mismatch {
                    label: label.to_string(),
                    component: r + 1,
                    difference: d,
                });
            }
            worst = worst.max(d);
        }
        cols.push(v);
        symbolic.push(s);
    }
    Ok(PeriodMatrix {
        labels,
        numeric: cols,
        symbolic,
        max_discrepancy: worst,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BetaGammaResiduals {
    /// `|β − √3γ| / β`
    pub identity: f64,
    /// numeric B₅ period of component 3 against `−i(e^{2πi/3}+e^{iπ/3})β`
    pub form_beta: f64,
    /// the same against `−i(e^{iπ/3}+e^{2πi/3})(β/2 + √3γ/2)`
    pub form_mixed: f64,
}

pub fn verify_beta_gamma_periods(k: &LatticeConstants, spec: &QuadratureSpec) -> Result<BetaGammaResiduals> {
    let b5 = cycle_order()
        .into_iter()
        .position(|l| l.to_string() == "B5")
        .expect("B5 present");
    let cycle = &generate_all_cycles()[b5];
    let v = period_numeric(cycle, 3, spec)?;
    let pre = -Complex64::i() * prefactor_a2().to_complex();
    let form_beta = pre * k.beta;
    let form_mixed = pre * (0.5 * k.beta + 0.5 * 3f64.sqrt() * k.gamma);
    Ok(BetaGammaResiduals {
        identity: k.beta_gamma_residual(),
        form_beta: (v - form_beta).norm(),
        form_mixed: (v - form_mixed).norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::lattice_constants;
    use crate::cycles::{cycle_a1, cycle_a2};
    use crate::exact::int;

    fn consts() -> LatticeConstants {
        lattice_constants(&QuadratureSpec::default()).unwrap()
    }

    #[test]
    fn coefficient_round_trip() {
        let x = SymbolicScalar::new(
            Cyclo::new(Surd::frac(1, 2, 3), Surd::frac(-1, 0, 2)),
            Cyclo::new(Surd::frac(0, 5, 1), Surd::frac(7, -1, 4)),
        );
        assert_eq!(SymbolicScalar::from_coefficients(x.coefficients()), x);
    }

    #[test]
    fn sqrt3_reduces_eagerly() {
        let g = SymbolicScalar::gamma()
            .mul_cyclo(&Cyclo::sqrt3())
            .mul_cyclo(&Cyclo::sqrt3());
        assert_eq!(g, SymbolicScalar::gamma().scale(&int(3)));
    }

    #[test]
    fn pullback_power_zero_and_twelve() {
        let a1 = closed_form_a1();
        assert_eq!(period_via_pullback(&a1, 0), a1);
        assert_eq!(period_via_pullback(&a1, 12), a1);
    }

    #[test]
    fn pullback_five_matches_mixed_form() {
        // component 3 over B₅ = φ⁵(A₁) equals −i(e^{iπ/3}+e^{2πi/3})·√3γ
        let v = period_via_pullback(&closed_form_a1(), 5);
        let pre = &(-Cyclo::i()) * &prefactor_a2();
        let expected = SymbolicScalar::gamma().mul_cyclo(&pre).mul_cyclo(&Cyclo::sqrt3());
        assert_eq!(v[2], expected);
    }

    #[test]
    fn pullback_reproduces_printed_blocks() {
        let printed = printed_omega();
        for (label, col) in cycle_order().into_iter().zip(printed) {
            assert_eq!(symbolic_column(label), col, "{label}");
        }
    }

    #[test]
    fn first_column_real_part() {
        let re: Vec<SymbolicScalar> = closed_form_a1().iter().map(|x| x.real_part()).collect();
        assert_eq!(re[0], SymbolicScalar::alpha().scale(&crate::exact::rat(3, 2)));
        assert_eq!(re[1], SymbolicScalar::alpha().scale(&crate::exact::rat(-3, 2)));
        // Re(i(1+e^{iπ/3})√3γ) = −(√3/2)·√3γ = −3γ/2
        assert_eq!(re[2], SymbolicScalar::gamma().scale(&crate::exact::rat(-3, 2)));
        assert_eq!(
            re[3],
            SymbolicScalar::gamma().mul_cyclo(&Cyclo::real(Surd::frac(0, 1, 2)))
        );
    }

    #[test]
    fn a1_periods_match_closed_form() {
        let k = consts();
        let spec = QuadratureSpec::default();
        for (c, closed) in [(cycle_a1(), closed_form_a1()), (cycle_a2(), closed_form_a2())] {
            let (v, _) = period_vector(&c, &spec).unwrap();
            for r in 0..4 {
                let d = (v[r] - closed[r].to_complex(&k)).norm();
                assert!(d < 1e-10, "{} comp {}: {d:e}", c.label, r + 1);
            }
        }
        let v = period_numeric(&cycle_a1(), 1, &spec).unwrap();
        assert!((v - Complex64::new(1.324_979_062_714_087_4, 0.764_977_018_528_596_3)).norm() < 1e-12);
    }

    #[test]
    fn component_out_of_range() {
        assert!(period_numeric(&cycle_a1(), 5, &QuadratureSpec::default()).is_err());
    }

    #[test]
    fn beta_gamma_forms() {
        let r = verify_beta_gamma_periods(&consts(), &QuadratureSpec::default()).unwrap();
        assert!(r.identity < 1e-10);
        assert!(r.form_beta < 1e-8 && r.form_mixed < 1e-8, "{r:?}");
    }
}
