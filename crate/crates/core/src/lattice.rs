//! Exact lattice identities: the two-sided integer transformation test,
//! the reduction of Ω to eight columns, and the associate-family rank.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::constants::LatticeConstants;
use crate::cycles::cycle_order;
use crate::error::{Error, Result};
use crate::exact::{int, rat, Cyclo, Rational, Surd};
use crate::periods::{prefactor_a1, prefactor_a2, symbolic_column, SymbolicScalar};

pub const BUNDLED_MATRICES: &str = include_str!("../data/lattice_matrices.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<i64>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntegerMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse("ragged integer matrix".into()));
        }
        Ok(IntegerMatrix {
            rows: rows.len(),
            cols,
            entries: rows.concat(),
        })
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = IntegerMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }
}

/// The six integer matrices of the lattice identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeData {
    pub g_omega_1: IntegerMatrix,
    pub g_omega_2: IntegerMatrix,
    pub g_r_1: IntegerMatrix,
    pub g_r_2: IntegerMatrix,
    pub g_i_1: IntegerMatrix,
    pub g_i_2: IntegerMatrix,
}

pub const MATRIX_NAMES: [&str; 6] = ["G_omega_1", "G_omega_2", "G_R_1", "G_R_2", "G_I_1", "G_I_2"];

impl LatticeData {
    pub fn parse(text: &str) -> Result<Self> {
        let mut sections: Vec<(String, usize, usize, Vec<Vec<i64>>)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let (name, dims) = rest
                    .split_once(']')
                    .ok_or_else(|| Error::Parse(format!("line {}: unterminated header", lineno + 1)))?;
                let dims: Vec<usize> = dims
                    .split_whitespace()
                    .map(|d| {
                        d.parse()
                            .map_err(|_| Error::Parse(format!("line {}: bad dimension", lineno + 1)))
                    })
                    .collect::<Result<_>>()?;
                if dims.len() != 2 {
                    return Err(Error::Parse(format!("line {}: expected rows and cols", lineno + 1)));
                }
                sections.push((name.trim().to_string(), dims[0], dims[1], Vec::new()));
                continue;
            }
            let row: Vec<i64> = line
                .split_whitespace()
                .map(|x| {
                    x.parse()
                        .map_err(|_| Error::Parse(format!("line {}: bad integer {x:?}", lineno + 1)))
                })
                .collect::<Result<_>>()?;
            match sections.last_mut() {
                Some(s) => s.3.push(row),
                None => return Err(Error::Parse(format!("line {}: data before header", lineno + 1))),
            }
        }
        let mut take = |name: &str| -> Result<IntegerMatrix> {
            let i = sections
                .iter()
                .position(|s| s.0 == name)
                .ok_or_else(|| Error::Parse(format!("missing section {name}")))?;
            let (_, r, c, rows) = sections.remove(i);
            let m = IntegerMatrix::from_rows(&rows)?;
            if m.rows != r || m.cols != c {
                return Err(Error::Parse(format!(
                    "{name}: header says {r}x{c}, data is {}x{}",
                    m.rows, m.cols
                )));
            }
            Ok(m)
        };
        Ok(LatticeData {
            g_omega_1: take("G_omega_1")?,
            g_omega_2: take("G_omega_2")?,
            g_r_1: take("G_R_1")?,
            g_r_2: take("G_R_2")?,
            g_i_1: take("G_I_1")?,
            g_i_2: take("G_I_2")?,
        })
    }

    pub fn bundled() -> Self {
        LatticeData::parse(BUNDLED_MATRICES).expect("bundled matrix file is well formed")
    }

    pub fn matrix(&self, name: &str) -> Option<&IntegerMatrix> {
        Some(match name {
            "G_omega_1" => &self.g_omega_1,
            "G_omega_2" => &self.g_omega_2,
            "G_R_1" => &self.g_r_1,
            "G_R_2" => &self.g_r_2,
            "G_I_1" => &self.g_i_1,
            "G_I_2" => &self.g_i_2,
            _ => return None,
        })
    }

    pub fn matrix_mut(&mut self, name: &str) -> Option<&mut IntegerMatrix> {
        Some(match name {
            "G_omega_1" => &mut self.g_omega_1,
            "G_omega_2" => &mut self.g_omega_2,
            "G_R_1" => &mut self.g_r_1,
            "G_R_2" => &mut self.g_r_2,
            "G_I_1" => &mut self.g_i_1,
            "G_I_2" => &mut self.g_i_2,
            _ => return None,
        })
    }
}

/// Dense matrix over the symbolic ring, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<SymbolicScalar>,
}

impl SymMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SymMatrix {
            rows,
            cols,
            data: vec![SymbolicScalar::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<SymbolicScalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged symbolic matrix");
        SymMatrix {
            rows: r,
            cols: c,
            data: rows.concat(),
        }
    }

    pub fn from_columns(cols: &[[SymbolicScalar; 4]]) -> Self {
        let mut m = SymMatrix::zeros(4, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &SymbolicScalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: SymbolicScalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn hstack(&self, o: &SymMatrix) -> SymMatrix {
        assert_eq!(self.rows, o.rows);
        let mut m = SymMatrix::zeros(self.rows, self.cols + o.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..o.cols {
                m.set(r, self.cols + c, o.get(r, c).clone());
            }
        }
        m
    }

    pub fn map(&self, f: impl Fn(&SymbolicScalar) -> SymbolicScalar) -> SymMatrix {
        SymMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn real_part(&self) -> SymMatrix {
        self.map(|x| x.real_part())
    }

    pub fn imag_part(&self) -> SymMatrix {
        self.map(|x| x.imag_part())
    }

    /// `self · g` in exact arithmetic.
    pub fn mul_int(&self, g: &IntegerMatrix) -> Result<SymMatrix> {
        if self.cols != g.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, g.rows, g.cols
            )));
        }
        let mut out = SymMatrix::zeros(self.rows, g.cols);
        for r in 0..self.rows {
            for c in 0..g.cols {
                let mut acc = SymbolicScalar::zero();
                for k in 0..self.cols {
                    let e = g.get(k, c);
                    let x = self.get(r, k);
                    if e == 0 || x.is_zero() {
                        continue;
                    }
                    acc = match e {
                        1 => &acc + x,
                        -1 => &acc - x,
                        _ => &acc + &x.scale(&int(e)),
                    };
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// Real numeric values (imaginary parts must vanish).
    pub fn to_real(&self, k: &LatticeConstants) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).to_complex(k).re).collect())
            .collect()
    }
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn real_alpha(a: i64, b: i64, d: i64) -> SymbolicScalar {
    SymbolicScalar::new(Cyclo::real(Surd::frac(a, b, d)), Cyclo::zero())
}

fn real_gamma(a: i64, b: i64, d: i64) -> SymbolicScalar {
    SymbolicScalar::new(Cyclo::zero(), Cyclo::real(Surd::frac(a, b, d)))
}

fn zero() -> SymbolicScalar {
    SymbolicScalar::zero()
}

/// The full 4×20 symbolic period matrix in cycle order.
pub fn omega() -> SymMatrix {
    let cols: Vec<_> = cycle_order().into_iter().map(symbolic_column).collect();
    SymMatrix::from_columns(&cols)
}

pub fn omega_8() -> SymMatrix {
    let p = prefactor_a1();
    let q = prefactor_a2();
    let a = |c: Cyclo| SymbolicScalar::new(c, Cyclo::zero());
    let two = Cyclo::from_int(2);
    SymMatrix::from_rows(vec![
        vec![
            a(&(-&two) * &(&Cyclo::omega() - &Cyclo::one())),
            a(&two * &p),
            a(q.clone()),
            a(-&p),
        ],
        vec![zero(), zero(), a(-&q), a(p)],
        vec![zero(); 4],
        vec![zero(); 4],
    ])
}

pub fn omega_9() -> SymMatrix {
    let p = prefactor_a1();
    let q = prefactor_a2();
    let g = |c: Cyclo| SymbolicScalar::new(Cyclo::zero(), c);
    let i = Cyclo::i();
    let si = &Cyclo::sqrt3() * &i;
    let n = Cyclo::from_int;
    SymMatrix::from_rows(vec![
        vec![zero(); 4],
        vec![zero(); 4],
        vec![g(&(&n(-2) * &si) * &q), zero(), g(&si * &p), g(&si * &q)],
        vec![zero(), g(&(&n(2) * &i) * &p), g(&i * &p), g(&(-&i) * &q)],
    ])
}

pub fn omega_r() -> SymMatrix {
    let z = zero;
    SymMatrix::from_rows(vec![
        vec![
            real_alpha(3, 0, 1),
            real_alpha(3, 0, 1),
            z(),
            real_alpha(-3, 0, 2),
            z(),
            z(),
            z(),
            z(),
        ],
        vec![z(), z(), z(), real_alpha(3, 0, 2), z(), z(), z(), z()],
        vec![
            z(),
            z(),
            z(),
            z(),
            real_gamma(6, 0, 1),
            z(),
            real_gamma(-3, 0, 2),
            real_gamma(-3, 0, 1),
        ],
        vec![
            z(),
            z(),
            z(),
            z(),
            z(),
            real_gamma(0, -1, 1),
            real_gamma(0, -1, 2),
            real_gamma(0, 1, 1),
        ],
    ])
}

pub fn omega_i() -> SymMatrix {
    let z = zero;
    SymMatrix::from_rows(vec![
        vec![
            real_alpha(0, -1, 1),
            real_alpha(0, 1, 1),
            real_alpha(0, 1, 1),
            real_alpha(0, -1, 2),
            z(),
            z(),
            z(),
            z(),
        ],
        vec![z(), z(), real_alpha(0, -1, 1), real_alpha(0, 1, 2), z(), z(), z(), z()],
        vec![z(), z(), z(), z(), z(), z(), real_gamma(0, 3, 2), z()],
        vec![z(), z(), z(), z(), z(), real_gamma(3, 0, 1), real_gamma(3, 0, 2), z()],
    ])
}

/// Generators of a lattice in R⁴ as the columns of a real symbolic matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    pub generators: SymMatrix,
}

impl LatticeBasis {
    pub fn lambda() -> Self {
        let z = zero;
        LatticeBasis {
            generators: SymMatrix::from_rows(vec![
                vec![real_alpha(3, 0, 1), real_alpha(3, 0, 2), z(), z()],
                vec![z(), real_alpha(3, 0, 2), z(), z()],
                vec![z(), z(), real_gamma(3, 0, 1), real_gamma(3, 0, 2)],
                vec![z(), z(), z(), real_gamma(0, 1, 2)],
            ]),
        }
    }

    pub fn lambda_half_pi() -> Self {
        let z = zero;
        LatticeBasis {
            generators: SymMatrix::from_rows(vec![
                vec![real_alpha(0, 1, 1), real_alpha(0, 1, 2), z(), z()],
                vec![z(), real_alpha(0, 1, 2), z(), z()],
                vec![z(), z(), real_gamma(0, 3, 1), real_gamma(0, 3, 2)],
                vec![z(), z(), z(), real_gamma(3, 0, 2)],
            ]),
        }
    }

    /// Exact determinant `c·α²γ²` of a generator matrix that is upper
    /// triangular with diagonal `(·α, ·α, ·γ, ·γ)`; `None` for any other shape.
    pub fn determinant(&self) -> Option<Surd> {
        let g = &self.generators;
        if g.rows != 4 || g.cols != 4 {
            return None;
        }
        for r in 0..4 {
            for c in 0..r {
                if !g.get(r, c).is_zero() {
                    return None;
                }
            }
        }
        let mut acc = Surd::one();
        for d in 0..4 {
            let e = g.get(d, d);
            if !e.is_real() {
                return None;
            }
            let coeff = if d < 2 {
                if !e.c.is_zero() {
                    return None;
                }
                e.a.re.clone()
            } else {
                if !e.a.is_zero() {
                    return None;
                }
                e.c.re.clone()
            };
            acc = &acc * &coeff;
        }
        Some(acc)
    }

    pub fn to_real(&self, k: &LatticeConstants) -> [[f64; 4]; 4] {
        let m = self.generators.to_real(k);
        std::array::from_fn(|r| std::array::from_fn(|c| m[r][c]))
    }
}

/// `U·G₁ = V` and `V·G₂ = U`, both exactly.
pub fn verify_lattice_pair(u: &SymMatrix, v: &SymMatrix, g1: &IntegerMatrix, g2: &IntegerMatrix) -> Result<bool> {
    if u.rows != v.rows || g1.rows != u.cols || g1.cols != v.cols || g2.rows != v.cols || g2.cols != u.cols {
        return Err(Error::DimensionMismatch(format!(
            "U {}x{}, V {}x{}, G1 {}x{}, G2 {}x{}",
            u.rows, u.cols, v.rows, v.cols, g1.rows, g1.cols, g2.rows, g2.cols
        )));
    }
    Ok(u.mul_int(g1)? == *v && v.mul_int(g2)? == *u)
}

pub const IDENTITY_NAMES: [&str; 6] = [
    "omega.forward",
    "omega.backward",
    "real.forward",
    "real.backward",
    "imag.forward",
    "imag.backward",
];

/// The six one-sided identities, in the order of [`IDENTITY_NAMES`].
pub fn lattice_identities(data: &LatticeData) -> Result<[bool; 6]> {
    let om = omega();
    let o89 = omega_8().hstack(&omega_9());
    let or = omega_r();
    let oi = omega_i();
    let l = LatticeBasis::lambda().generators;
    let lp = LatticeBasis::lambda_half_pi().generators;
    Ok([
        om.mul_int(&data.g_omega_1)? == o89,
        o89.mul_int(&data.g_omega_2)? == om,
        or.mul_int(&data.g_r_1)? == l,
        l.mul_int(&data.g_r_2)? == or,
        oi.mul_int(&data.g_i_1)? == lp,
        lp.mul_int(&data.g_i_2)? == oi,
    ])
}

/// Both Ω-reduction identities, plus `(Ω₈, Ω₉) = Ω_R + iΩ_I` entrywise.
pub fn verify_omega_reduction(data: &LatticeData) -> Result<bool> {
    let om = omega();
    let o89 = omega_8().hstack(&omega_9());
    let split = o89.real_part() == omega_r() && o89.imag_part() == omega_i();
    Ok(verify_lattice_pair(&om, &o89, &data.g_omega_1, &data.g_omega_2)? && split)
}

pub fn conjugate_lattice_check(data: &LatticeData) -> Result<bool> {
    verify_lattice_pair(
        &omega_i(),
        &LatticeBasis::lambda_half_pi().generators,
        &data.g_i_1,
        &data.g_i_2,
    )
}

/// `(Ω₁₀, Ω₁₁) = Re{e^{iθ}(Ω₈,Ω₉)}/cos θ` with `√3 tan θ = m/n`.
pub fn associate_matrix(m: i64, n: i64) -> Result<SymMatrix> {
    if n == 0 {
        return Err(Error::DegenerateAngle);
    }
    let t = rat(m, n);
    let al = |q: Rational| SymbolicScalar::alpha().scale(&q);
    let ga = |q: Rational| SymbolicScalar::gamma().scale(&q);
    let ga3 = |q: Rational| SymbolicScalar::gamma().mul_cyclo(&Cyclo::sqrt3()).scale(&q);
    let one = Rational::one();
    let half = rat(1, 2);
    let three = int(3);
    let z = zero;
    let three_minus = &three - &t;
    let one_plus = &one + &t;
    Ok(SymMatrix::from_rows(vec![
        vec![
            al(&three + &t),
            al(three_minus.clone()),
            al(-t.clone()),
            al(-(&three_minus * &half)),
            z(),
            z(),
            z(),
            z(),
        ],
        vec![z(), z(), al(t.clone()), al(&three_minus * &half), z(), z(), z(), z()],
        vec![
            z(),
            z(),
            z(),
            z(),
            ga(int(6)),
            z(),
            ga(-(&one_plus * rat(3, 2))),
            ga(int(-3)),
        ],
        vec![
            z(),
            z(),
            z(),
            z(),
            z(),
            ga3(-one_plus.clone()),
            ga3(-(&one_plus * &half)),
            ga3(one),
        ],
    ]))
}

/// Rational coefficient rows of a symbolic matrix: each entry expands over
/// `(α, √3α, γ, √3γ)` for its real and imaginary parts.
pub fn coefficient_matrix(s: &SymMatrix) -> Vec<Vec<Rational>> {
    let mut out = Vec::with_capacity(8 * s.rows);
    for r in 0..s.rows {
        let coeffs: Vec<[Rational; 8]> = (0..s.cols).map(|c| s.get(r, c).coefficients()).collect();
        for k in 0..8 {
            out.push(coeffs.iter().map(|cf| cf[k].clone()).collect());
        }
    }
    out
}

/// Rank over Q by fraction-free (Bareiss) elimination.
pub fn rational_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        })
        .filter(|r: &Vec<BigInt>| r.iter().any(|x| !x.is_zero()))
        .collect();
    if m.is_empty() {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            for c in col + 1..ncols {
                let v = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = v / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].abs();
        if prev.is_zero() {
            prev = BigInt::one();
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

pub fn associate_rank(m: i64, n: i64) -> Result<usize> {
    Ok(rational_rank(&coefficient_matrix(&associate_matrix(m, n)?)))
}

/// Entries whose `+1` mutation leaves all six identities intact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationSweep {
    pub total: usize,
    pub undetected: Vec<(&'static str, usize, usize)>,
}

/// Mutate every integer entry by `+1` in turn and re-run the identities.
///
/// Each matrix enters exactly one identity, so only that one is recomputed.
pub fn mutation_sweep(data: &LatticeData) -> Result<MutationSweep> {
    let om = omega();
    let o89 = omega_8().hstack(&omega_9());
    let or = omega_r();
    let oi = omega_i();
    let l = LatticeBasis::lambda().generators;
    let lp = LatticeBasis::lambda_half_pi().generators;
    let cases: [(&'static str, &SymMatrix, &SymMatrix); 6] = [
        ("G_omega_1", &om, &o89),
        ("G_omega_2", &o89, &om),
        ("G_R_1", &or, &l),
        ("G_R_2", &l, &or),
        ("G_I_1", &oi, &lp),
        ("G_I_2", &lp, &oi),
    ];
    let mut total = 0;
    let mut undetected = Vec::new();
    for (name, lhs, rhs) in cases {
        let g = data.matrix(name).expect("known name");
        for r in 0..g.rows {
            for c in 0..g.cols {
                let mut h = g.clone();
                h.set(r, c, g.get(r, c) + 1);
                total += 1;
                if lhs.mul_int(&h)? == *rhs {
                    undetected.push((name, r, c));
                }
            }
        }
    }
    Ok(MutationSweep { total, undetected })
}
