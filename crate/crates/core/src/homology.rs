//! Wedge-product integrals ∫ dxⁱ∧dxʲ over the three-sheeted z-plane.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::CurveParams;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_plane, PlaneOptions, QuadratureSpec};

pub const PAIRS: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

/// Distance below which `z` counts as a branch point.
const BRANCH_TOL: f64 = 1e-12;

/// `|w|⁴ = |z¹² − 1|^{4/3}`, with `|z¹²−1|² = (r¹²−1)² + 4r¹²sin²(6θ)`.
fn w_fourth(r: f64, theta: f64) -> f64 {
    let r12 = r.powi(12);
    let s = (6.0 * theta).sin();
    let sq = (r12 - 1.0).powi(2) + 4.0 * r12 * s * s;
    sq.powf(2.0 / 3.0)
}

/// Coefficient `c` of `dz∧dz̄` in `dxⁱ∧dxʲ`, times `|w|⁴`.
fn dz_dzbar_numerator(i: usize, j: usize, z: Complex64) -> Complex64 {
    let iu = Complex64::i();
    let r2 = z.norm_sqr();
    let r10 = r2.powi(5);
    let z5 = z.powi(5);
    let zb = z.conj();
    let z5b = z5.conj();
    let (re_sum, im_diff) = (z + zb, z - zb);
    let (re5_sum, im5_diff) = (z5 + z5b, z5 - z5b);
    match (i, j) {
        (1, 2) => -iu * 0.5 * (1.0 - r2.powi(6)),
        (1, 3) => 0.25 * (-im_diff * (1.0 + r10) - im5_diff * (1.0 + r2)),
        (1, 4) => -iu * 0.25 * (-re_sum * (1.0 + r10) + re5_sum * (1.0 + r2)),
        (2, 3) => iu * 0.25 * (re_sum * (1.0 + r10) + re5_sum * (1.0 + r2)),
        (2, 4) => 0.25 * (im_diff * (1.0 + r10) - im5_diff * (1.0 + r2)),
        (3, 4) => -iu * 0.5 * (-r2 + r10),
        _ => unreachable!("pair checked by caller"),
    }
}

fn check_pair(i: usize, j: usize) -> Result<()> {
    if PAIRS.contains(&(i, j)) {
        Ok(())
    } else {
        Err(Error::Domain(format!("wedge pair ({i},{j}) needs 1 <= i < j <= 4")))
    }
}

fn density_polar(i: usize, j: usize, r: f64, theta: f64) -> f64 {
    let z = Complex64::from_polar(r, theta);
    // dz∧dz̄ = −2i r dr∧dθ; three sheets
    let c = dz_dzbar_numerator(i, j, z) * Complex64::new(0.0, -2.0);
    3.0 * c.re / w_fourth(r, theta)
}

/// Real density of `dxⁱ∧dxʲ` against `r dr dθ`, summed over the three sheets.
pub fn wedge_density(i: usize, j: usize, z: Complex64) -> Result<f64> {
    check_pair(i, j)?;
    let near_branch = CurveParams::genus10()
        .branch_points()
        .iter()
        .any(|b| (z - b).norm() < BRANCH_TOL);
    if near_branch {
        return Err(Error::SingularPoint(format!("z = {z} is a branch point")));
    }
    Ok(density_polar(i, j, z.norm(), z.arg()))
}

#[derive(Clone, Debug)]
pub struct HomologyOptions {
    pub spec: QuadratureSpec,
    pub excision_radius: f64,
}

impl Default for HomologyOptions {
    fn default() -> Self {
        HomologyOptions {
            spec: QuadratureSpec::with_tolerance(1e-10),
            excision_radius: 1e-3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WedgeResidual {
    pub pair: (usize, usize),
    /// Signed integral with the given excision radius ε.
    pub integral: f64,
    /// Signed integral with ε/2.
    pub integral_half: f64,
    /// Richardson estimate at ε → 0, assuming an ε^{2/3} leading error.
    pub extrapolated: f64,
    /// `∫∫ |density|`, extrapolated the same way.
    pub normalizer: f64,
    pub quadrature_error: f64,
}

impl WedgeResidual {
    pub fn halving_change(&self) -> f64 {
        (self.integral - self.integral_half).abs()
    }

    pub fn relative(&self) -> f64 {
        self.extrapolated.abs() / self.normalizer
    }
}

fn plane_options(eps: f64) -> PlaneOptions {
    PlaneOptions {
        excised: CurveParams::genus10().branch_points(),
        excision_radius: eps,
        ..PlaneOptions::default()
    }
}

fn richardson(coarse: f64, fine: f64) -> f64 {
    let q = 2f64.powf(2.0 / 3.0);
    fine + (fine - coarse) / (q - 1.0)
}

/// Signed and absolute integrals of one density at one excision radius.
pub fn wedge_integral(i: usize, j: usize, opts: &PlaneOptions, spec: &QuadratureSpec) -> Result<(f64, f64, f64)> {
    check_pair(i, j)?;
    let signed = integrate_plane(|r, t| density_polar(i, j, r, t) * r, spec, opts)?;
    let abs = integrate_plane(|r, t| density_polar(i, j, r, t).abs() * r, spec, opts)?;
    Ok((signed.value, abs.value, signed.error + abs.error))
}

pub fn verify_pair(i: usize, j: usize, o: &HomologyOptions) -> Result<WedgeResidual> {
    let eps = o.excision_radius;
    let (s1, a1, e1) = wedge_integral(i, j, &plane_options(eps), &o.spec)?;
    let (s2, a2, e2) = wedge_integral(i, j, &plane_options(eps / 2.0), &o.spec)?;
    Ok(WedgeResidual {
        pair: (i, j),
        integral: s1,
        integral_half: s2,
        extrapolated: richardson(s1, s2),
        normalizer: richardson(a1, a2),
        quadrature_error: e1.max(e2),
    })
}

/// All six wedge integrals, in the order of [`PAIRS`].
pub fn verify_homological_triviality(o: &HomologyOptions) -> Result<Vec<WedgeResidual>> {
    PAIRS.par_iter().map(|&(i, j)| verify_pair(i, j, o)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::psi_at;
    use std::f64::consts::PI;

    fn oracle(i: usize, j: usize, z: Complex64) -> f64 {
        let w = (z.powi(12) - 1.0).cbrt();
        let p = psi_at(z, w).unwrap().components;
        3.0 * (p[i - 1] * p[j - 1].conj()).im
    }

    #[test]
    fn display_formulas_match_the_pullback_oracle() {
        let pts = [
            Complex64::new(0.3, 0.1),
            Complex64::new(-0.7, 0.5),
            Complex64::new(1.2, -0.9),
            Complex64::from_polar(1.0, 0.2),
            Complex64::from_polar(0.999, PI / 6.0 + 0.01),
            Complex64::new(-2.5, -0.4),
        ];
        for &(i, j) in &PAIRS {
            for &z in &pts {
                let d = wedge_density(i, j, z).unwrap();
                let o = oracle(i, j, z);
                assert!((d - o).abs() < 1e-10 * (1.0 + o.abs()), "({i},{j}) at {z}: {d} vs {o}");
            }
        }
    }

    #[test]
    fn density_values_at_special_points() {
        let origin = Complex64::new(0.0, 0.0);
        assert_eq!(wedge_density(1, 2, origin).unwrap(), -3.0);
        assert_eq!(wedge_density(3, 4, origin).unwrap(), 0.0);
        let on_circle = Complex64::from_polar(1.0, 0.1);
        assert!(wedge_density(1, 2, on_circle).unwrap().abs() < 1e-12);
    }

    #[test]
    fn branch_points_and_bad_pairs_rejected() {
        let b = Complex64::from_polar(1.0, PI / 6.0);
        assert!(matches!(wedge_density(1, 2, b), Err(Error::SingularPoint(_))));
        assert!(wedge_density(2, 1, Complex64::new(0.0, 0.0)).is_err());
        assert!(wedge_density(1, 5, Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn one_twelfth_period_suffices_for_the_radial_pairs() {
        let spec = QuadratureSpec::with_tolerance(1e-10);
        for (i, j) in [(1, 2), (3, 4)] {
            let full = wedge_integral(i, j, &plane_options(1e-3), &spec).unwrap();
            let part_opts = PlaneOptions {
                theta_range: (0.0, PI / 6.0),
                ..plane_options(1e-3)
            };
            let part = wedge_integral(i, j, &part_opts, &spec).unwrap();
            assert!(
                (12.0 * part.0 - full.0).abs() < 1e-8,
                "({i},{j}) signed {} vs {}",
                12.0 * part.0,
                full.0
            );
            assert!(
                (12.0 * part.1 - full.1).abs() < 1e-8,
                "({i},{j}) abs {} vs {}",
                12.0 * part.1,
                full.1
            );
        }
    }

    #[test]
    fn normalizers_are_positive_on_a_coarse_grid() {
        // midpoint rule on [0,3]×[0,2π), avoiding branch points
        for &(i, j) in &PAIRS {
            let mut s = 0.0;
            for a in 0..60 {
                for b in 0..96 {
                    let r = (a as f64 + 0.5) * 0.05;
                    let t = (b as f64 + 0.37) * 2.0 * PI / 96.0;
                    s += wedge_density(i, j, Complex64::from_polar(r, t)).unwrap().abs() * r;
                }
            }
            assert!(s > 0.0, "({i},{j})");
        }
    }

    #[test]
    fn all_six_integrals_vanish() {
        let res = verify_homological_triviality(&HomologyOptions::default()).unwrap();
        for w in &res {
            assert!(w.normalizer > 0.0);
            assert!(w.relative() <= 1e-4, "{w:?}");
            assert!(w.halving_change() < 1e-6, "{w:?}");
        }
    }
}
