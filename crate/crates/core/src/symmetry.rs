//! Pullback matrices of the curve automorphisms and the group they generate.

use std::collections::{HashSet, VecDeque};
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::{psi, sheet_values, CurveParams, SurfacePoint};
use crate::cycles::{apply_automorphism, Automorphism};
use crate::error::{Error, Result};
use crate::exact::{Cyclo, Surd};

pub type SurdMatrix = [[Surd; 4]; 4];

pub const GROUP_BOUND: usize = 10_000;

/// Minimum distance of sample points from branch points and, for maps
/// involving `1/z`, from the origin.
pub const SAMPLE_CLEARANCE: f64 = 1e-3;

pub fn identity() -> SurdMatrix {
    std::array::from_fn(|r| std::array::from_fn(|c| if r == c { Surd::one() } else { Surd::zero() }))
}

pub fn mat_mul(a: &SurdMatrix, b: &SurdMatrix) -> SurdMatrix {
    std::array::from_fn(|r| {
        std::array::from_fn(|c| {
            let mut acc = Surd::zero();
            for k in 0..4 {
                if !a[r][k].is_zero() && !b[k][c].is_zero() {
                    acc += &(&a[r][k] * &b[k][c]);
                }
            }
            acc
        })
    })
}

pub fn transpose(a: &SurdMatrix) -> SurdMatrix {
    std::array::from_fn(|r| std::array::from_fn(|c| a[c][r].clone()))
}

pub fn is_orthogonal(a: &SurdMatrix) -> bool {
    mat_mul(&transpose(a), a) == identity()
}

/// Block-diagonal or block-anti-diagonal with respect to {1,2} ⊕ {3,4}.
pub fn preserves_splitting(a: &SurdMatrix) -> bool {
    let block_zero = |r0: usize, c0: usize| (r0..r0 + 2).all(|r| (c0..c0 + 2).all(|c| a[r][c].is_zero()));
    (block_zero(0, 2) && block_zero(2, 0)) || (block_zero(0, 0) && block_zero(2, 2))
}

fn rot_half_pi() -> [[Surd; 2]; 2] {
    [[Surd::zero(), Surd::from_int(-1)], [Surd::one(), Surd::zero()]]
}

fn rot_minus_third_pi() -> [[Surd; 2]; 2] {
    [
        [Surd::frac(1, 0, 2), Surd::frac(0, 1, 2)],
        [Surd::frac(0, -1, 2), Surd::frac(1, 0, 2)],
    ]
}

fn block_diag(a: [[Surd; 2]; 2], b: [[Surd; 2]; 2]) -> SurdMatrix {
    let mut m: SurdMatrix = std::array::from_fn(|_| std::array::from_fn(|_| Surd::zero()));
    for r in 0..2 {
        for c in 0..2 {
            m[r][c] = a[r][c].clone();
            m[r + 2][c + 2] = b[r][c].clone();
        }
    }
    m
}

/// `a*Ψ = scalar · block · Ψ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackMatrix {
    pub scalar: Cyclo,
    pub block: SurdMatrix,
}

impl PullbackMatrix {
    pub fn new(scalar: Cyclo, block: SurdMatrix) -> Result<Self> {
        if !is_orthogonal(&block) {
            return Err(Error::Domain("pullback block is not orthogonal".into()));
        }
        Ok(PullbackMatrix { scalar, block })
    }

    pub fn phi() -> Self {
        PullbackMatrix {
            scalar: Cyclo::omega(),
            block: block_diag(rot_half_pi(), rot_minus_third_pi()),
        }
    }

    pub fn phi1() -> Self {
        PullbackMatrix {
            scalar: Cyclo::one(),
            block: block_diag(rot_half_pi(), rot_minus_third_pi()),
        }
    }

    pub fn phi2() -> Self {
        let d = |v: [i64; 4]| -> SurdMatrix {
            std::array::from_fn(|r| std::array::from_fn(|c| if r == c { Surd::from_int(v[r]) } else { Surd::zero() }))
        };
        PullbackMatrix {
            scalar: Cyclo::one(),
            block: d([1, -1, -1, 1]),
        }
    }

    pub fn j() -> Self {
        PullbackMatrix {
            scalar: Cyclo::omega(),
            block: identity(),
        }
    }

    pub fn apply(&self, v: &[Complex64; 4]) -> [Complex64; 4] {
        let s = self.scalar.to_complex();
        std::array::from_fn(|r| {
            let mut acc = Complex64::zero();
            for (c, x) in v.iter().enumerate() {
                acc += self.block[r][c].to_f64() * x;
            }
            s * acc
        })
    }
}

fn involves_inversion(a: Automorphism) -> bool {
    matches!(a, Automorphism::PhiPrime | Automorphism::Phi2)
}

/// Relative residual `|Ψ(a(p))·a′(p) − M·Ψ(p)| / |Ψ(p)|` (max-norm) at one point.
pub fn pullback_residual_at(a: Automorphism, expected: &PullbackMatrix, p: &SurfacePoint) -> Result<f64> {
    let on_branch = CurveParams::genus10()
        .branch_points()
        .iter()
        .any(|b| (p.z - b).norm() < SAMPLE_CLEARANCE);
    if on_branch || (involves_inversion(a) && p.z.norm() < SAMPLE_CLEARANCE) {
        return Err(Error::SampleOnSingularLocus);
    }
    let q = apply_automorphism(a, p)?;
    let lhs = psi(&q)?.scale(a.z_derivative(p.z)).components;
    let base = psi(p)?.components;
    let rhs = expected.apply(&base);
    let scale = base.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let diff = lhs.iter().zip(&rhs).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    Ok(diff / scale)
}

/// Sample points in the annulus `0.2 ≤ |z| ≤ 2` on a random sheet, clear of
/// branch points.
pub fn random_points(count: usize, seed: u64) -> Vec<SurfacePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let branch = CurveParams::genus10().branch_points();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let z = Complex64::from_polar(rng.gen_range(0.2..2.0), rng.gen_range(0.0..2.0 * PI));
        if branch.iter().any(|b| (z - b).norm() < 10.0 * SAMPLE_CLEARANCE) {
            continue;
        }
        let w = sheet_values(z)[rng.gen_range(0..3)];
        out.push(SurfacePoint::new(z, w).expect("sheet value lies on the curve"));
    }
    out
}

/// Worst residual over `sample_count` seeded random points.
pub fn verify_pullback(a: Automorphism, expected: &PullbackMatrix, sample_count: usize, seed: u64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in random_points(sample_count, seed) {
        worst = worst.max(pullback_residual_at(a, expected, &p)?);
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSummary {
    pub order: usize,
    /// Per generator: preserves {1,2} ⊕ {3,4}.
    pub reducible: Vec<bool>,
    /// Every element preserves {1,2} ⊕ {3,4}.
    pub all_preserve_splitting: bool,
    /// Every element is block-diagonal.
    pub all_block_diagonal: bool,
}

/// Close the matrix group generated by `generators` by exact multiplication.
pub fn generated_group(generators: &[SurdMatrix]) -> Result<GroupSummary> {
    generated_group_bounded(generators, GROUP_BOUND)
}

pub fn generated_group_bounded(generators: &[SurdMatrix], bound: usize) -> Result<GroupSummary> {
    for g in generators {
        if !is_orthogonal(g) {
            return Err(Error::Domain("generator is not orthogonal".into()));
        }
    }
    let mut seen: HashSet<SurdMatrix> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(identity());
    queue.push_back(identity());
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = mat_mul(g, &x);
            if seen.insert(y.clone()) {
                if seen.len() > bound {
                    return Err(Error::NonClosure(seen.len()));
                }
                queue.push_back(y);
            }
        }
    }
    let block_diagonal = |a: &SurdMatrix| (0..2).all(|r| (2..4).all(|c| a[r][c].is_zero() && a[c][r].is_zero()));
    Ok(GroupSummary {
        order: seen.len(),
        reducible: generators.iter().map(preserves_splitting).collect(),
        all_preserve_splitting: seen.iter().all(preserves_splitting),
        all_block_diagonal: seen.iter().all(block_diagonal),
    })
}

pub fn mat_pow(a: &SurdMatrix, k: u32) -> SurdMatrix {
    (0..k).fold(identity(), |acc, _| mat_mul(&acc, a))
}

/// Smallest `k ≥ 1` with `aᵏ = I`, up to `bound`.
pub fn element_order(a: &SurdMatrix, bound: u32) -> Option<u32> {
    let mut x = a.clone();
    for k in 1..=bound {
        if x == identity() {
            return Some(k);
        }
        x = mat_mul(&x, a);
    }
    None
}

/// `r¹² = s² = I`, `r` of exact order 12, and `s r s = r⁻¹`.
pub fn dihedral_relations(r: &SurdMatrix, s: &SurdMatrix) -> bool {
    let r_inv = transpose(r);
    element_order(r, 12) == Some(12) && mat_mul(s, s) == identity() && mat_mul(&mat_mul(s, r), s) == r_inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pullback_blocks_are_orthogonal() {
        for m in [
            PullbackMatrix::phi(),
            PullbackMatrix::phi1(),
            PullbackMatrix::phi2(),
            PullbackMatrix::j(),
        ] {
            assert!(is_orthogonal(&m.block));
        }
        let mut bad = identity();
        bad[0][0] = Surd::from_int(2);
        assert!(PullbackMatrix::new(Cyclo::one(), bad).is_err());
    }

    #[test]
    fn pullbacks_hold_at_random_points() {
        let cases = [
            (Automorphism::Phi, PullbackMatrix::phi()),
            (Automorphism::Phi1, PullbackMatrix::phi1()),
            (Automorphism::Phi2, PullbackMatrix::phi2()),
            (Automorphism::J, PullbackMatrix::j()),
        ];
        for (a, m) in cases {
            let r = verify_pullback(a, &m, 100, 7).unwrap();
            assert!(r < 1e-12, "{a:?}: {r}");
        }
    }

    #[test]
    fn wrong_matrix_is_detected() {
        let r = verify_pullback(Automorphism::Phi, &PullbackMatrix::phi1(), 10, 1).unwrap();
        assert!(r > 0.1);
        let r = verify_pullback(Automorphism::Phi2, &PullbackMatrix::phi1(), 10, 1).unwrap();
        assert!(r > 0.1);
    }

    #[test]
    fn singular_samples_rejected() {
        let z = Complex64::from_polar(1.0, PI / 6.0);
        let p = SurfacePoint::new(z, Complex64::zero()).unwrap();
        assert!(matches!(
            pullback_residual_at(Automorphism::Phi, &PullbackMatrix::phi(), &p),
            Err(Error::SampleOnSingularLocus)
        ));
        let o = SurfacePoint::new(Complex64::zero(), Complex64::new(-1.0, 0.0)).unwrap();
        assert!(matches!(
            pullback_residual_at(Automorphism::Phi2, &PullbackMatrix::phi2(), &o),
            Err(Error::SampleOnSingularLocus)
        ));
        assert!(pullback_residual_at(Automorphism::Phi, &PullbackMatrix::phi(), &o).is_ok());
    }

    #[test]
    fn group_orders() {
        assert_eq!(generated_group(&[identity()]).unwrap().order, 1);
        let g1 = PullbackMatrix::phi1().block;
        let g2 = PullbackMatrix::phi2().block;
        assert_eq!(generated_group(std::slice::from_ref(&g1)).unwrap().order, 12);
        let both = generated_group(&[g1, g2]).unwrap();
        assert_eq!(both.order, 24);
        assert_eq!(both.reducible, vec![true, true]);
        assert!(both.all_preserve_splitting);
        assert!(both.all_block_diagonal);
    }

    #[test]
    fn dihedral_relations_hold() {
        let g1 = PullbackMatrix::phi1().block;
        let g2 = PullbackMatrix::phi2().block;
        assert_eq!(mat_pow(&g1, 12), identity());
        assert_ne!(mat_pow(&g1, 6), identity());
        assert_ne!(mat_pow(&g1, 4), identity());
        assert!(dihedral_relations(&g1, &g2));
        assert!(!dihedral_relations(&g1, &g1));
    }

    #[test]
    fn irrational_rotation_hits_the_bound() {
        // entries (3/5, 4/5) give a rotation of infinite order
        let mut m = identity();
        m[0][0] = Surd::frac(3, 0, 5);
        m[0][1] = Surd::frac(-4, 0, 5);
        m[1][0] = Surd::frac(4, 0, 5);
        m[1][1] = Surd::frac(3, 0, 5);
        assert!(matches!(
            generated_group_bounded(&[m], 200),
            Err(Error::NonClosure(201))
        ));
    }

    #[test]
    fn j_fixes_the_z_coordinate() {
        for p in random_points(20, 3) {
            let q = apply_automorphism(Automorphism::J, &p).unwrap();
            assert_eq!(q.z, p.z);
            assert!((q.w - p.w).norm() > 1e-3);
        }
    }
}
