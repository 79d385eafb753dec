//! Machine-readable aggregate of every verification item.

use std::path::Path;
use std::time::Instant;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{
    alpha, beta, beta_by_quadrature, beta_function, gamma_by_quadrature, lattice_constants, LatticeConstants,
};
use crate::curve::{
    check_no_common_zeros, conformality_polynomial, trigonal_obstruction, weierstrass_numerators, Obstruction,
};
use crate::cycles::{cycle_a1, cycle_a2, cycle_order, Automorphism};
use crate::error::{Error, Result};
use crate::homology::{verify_homological_triviality, HomologyOptions, PAIRS};
use crate::lattice::{
    associate_rank, lattice_identities, omega_8, omega_9, omega_i, omega_r, LatticeData, IDENTITY_NAMES,
};
use crate::periods::{
    assemble_period_matrix, closed_form_a1, closed_form_a2, period_vector, printed_omega, symbolic_column,
    verify_beta_gamma_periods, SymbolicVector,
};
use crate::quadrature::QuadratureSpec;
use crate::symmetry::{dihedral_relations, generated_group, verify_pullback, PullbackMatrix};

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Residual {
    /// Exact check: `zero` is true iff the residual vanishes identically.
    Exact {
        zero: bool,
    },
    Numeric {
        value: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportItem {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub residual: Option<Residual>,
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub toolkit_version: String,
    pub constants: LatticeConstants,
    pub items: Vec<ReportItem>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|i| i.status == Status::Pass)
    }

    pub fn item(&self, name: &str) -> Option<&ReportItem> {
        self.items.iter().find(|i| i.name == name)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.items
            .iter()
            .filter(|i| i.status == Status::Fail)
            .map(|i| i.name.as_str())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Section {
    Periods,
    Lattice,
    Associate,
    Homology,
    Symmetry,
    Curve,
    Obstruction,
}

impl Section {
    pub const ALL: [Section; 7] = [
        Section::Periods,
        Section::Lattice,
        Section::Associate,
        Section::Homology,
        Section::Symmetry,
        Section::Curve,
        Section::Obstruction,
    ];
}

#[derive(Clone, Debug)]
pub struct ReportConfig {
    /// Quadrature tolerance override for every numerically integrated item.
    pub tolerance: Option<f64>,
    /// Glob over item names; unmatched items are not run.
    pub only: Option<String>,
    /// Sections to run after the constants.
    pub sections: Vec<Section>,
    pub lattice_data: LatticeData,
    pub timings: bool,
    pub sweep_bound: i64,
    pub symmetry_samples: usize,
    pub seed: u64,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            tolerance: None,
            only: None,
            sections: Section::ALL.to_vec(),
            lattice_data: LatticeData::bundled(),
            timings: true,
            sweep_bound: 20,
            symmetry_samples: 100,
            seed: 1,
        }
    }
}

impl ReportConfig {
    /// Constants only.
    pub fn empty() -> Self {
        ReportConfig {
            sections: Vec::new(),
            ..ReportConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.tolerance {
            QuadratureSpec::with_tolerance(t).validate()?;
        }
        if let Some(g) = &self.only {
            glob::Pattern::new(g).map_err(|e| Error::Parse(format!("bad --only pattern {g:?}: {e}")))?;
        }
        if self.sweep_bound < 1 {
            return Err(Error::Domain("sweep bound must be at least 1".into()));
        }
        Ok(())
    }

    fn spec(&self, default: QuadratureSpec) -> QuadratureSpec {
        self.tolerance.map_or(default, QuadratureSpec::with_tolerance)
    }
}

const PERIOD_TOL: f64 = 1e-8;
const CONSTANT_TOL: f64 = 1e-10;
const HOMOLOGY_TOL: f64 = 1e-4;
const HALVING_TOL: f64 = 1e-6;
const PULLBACK_TOL: f64 = 1e-12;

fn item(name: &str, anchor: &str) -> ReportItem {
    ReportItem {
        name: name.to_string(),
        anchor: anchor.to_string(),
        status: Status::Fail,
        residual: None,
        tolerance: None,
        runtime_ms: None,
        detail: String::new(),
        error: None,
    }
}

fn numeric(name: &str, anchor: &str, value: Result<f64>, tol: f64, detail: String) -> ReportItem {
    let mut it = item(name, anchor);
    it.tolerance = Some(tol);
    it.detail = detail;
    match value {
        Ok(v) => {
            it.residual = Some(Residual::Numeric { value: v });
            if v.is_finite() && v <= tol {
                it.status = Status::Pass;
            }
        }
        Err(e) => it.error = Some(e.to_string()),
    }
    it
}

fn exact(name: &str, anchor: &str, ok: Result<bool>, detail: String) -> ReportItem {
    let mut it = item(name, anchor);
    it.detail = detail;
    match ok {
        Ok(z) => {
            it.residual = Some(Residual::Exact { zero: z });
            if z {
                it.status = Status::Pass;
            }
        }
        Err(e) => it.error = Some(e.to_string()),
    }
    it
}

struct Ctx<'a> {
    cfg: &'a ReportConfig,
    constants: LatticeConstants,
}

#[derive(Clone, Copy, Debug)]
enum Task {
    Constants,
    ClosedForms,
    BetaGamma,
    Transport,
    Lattice,
    Associate,
    Homology,
    Symmetry,
    Curve,
    Obstruction,
}

impl Task {
    fn section(self) -> Option<Section> {
        match self {
            Task::Constants => None,
            Task::ClosedForms | Task::BetaGamma | Task::Transport => Some(Section::Periods),
            Task::Lattice => Some(Section::Lattice),
            Task::Associate => Some(Section::Associate),
            Task::Homology => Some(Section::Homology),
            Task::Symmetry => Some(Section::Symmetry),
            Task::Curve => Some(Section::Curve),
            Task::Obstruction => Some(Section::Obstruction),
        }
    }

    fn names(self) -> Vec<String> {
        let v: Vec<&str> = match self {
            Task::Constants => vec!["constants.alpha", "constants.beta"],
            Task::ClosedForms => vec!["periods.a1_closed_form", "periods.a2_closed_form"],
            Task::BetaGamma => vec!["periods.beta_gamma_identity", "periods.b5_component3"],
            Task::Transport => vec!["periods.printed_table", "periods.pullback_transport"],
            Task::Lattice => {
                let mut v: Vec<String> = IDENTITY_NAMES.iter().map(|n| format!("lattice.{n}")).collect();
                v.push("omega.real_imag_split".into());
                return v;
            }
            Task::Associate => vec!["associate.rank_sweep"],
            Task::Homology => return PAIRS.iter().map(|(i, j)| format!("homology.dx{i}{j}")).collect(),
            Task::Symmetry => vec!["symmetry.phi", "symmetry.phi1", "symmetry.phi2", "symmetry.group"],
            Task::Curve => vec!["curve.conformality", "curve.no_common_zeros"],
            Task::Obstruction => vec!["obstruction.table"],
        };
        v.into_iter().map(String::from).collect()
    }

    const ORDER: [Task; 10] = [
        Task::Constants,
        Task::ClosedForms,
        Task::BetaGamma,
        Task::Transport,
        Task::Lattice,
        Task::Associate,
        Task::Homology,
        Task::Symmetry,
        Task::Curve,
        Task::Obstruction,
    ];
}

fn vector_discrepancy(numeric: &[num_complex::Complex64; 4], symbolic: &SymbolicVector, k: &LatticeConstants) -> f64 {
    (0..4)
        .map(|r| (numeric[r] - symbolic[r].to_complex(k)).norm())
        .fold(0.0, f64::max)
}

fn run_task(task: Task, ctx: &Ctx) -> Vec<ReportItem> {
    let cfg = ctx.cfg;
    let k = &ctx.constants;
    let spec = cfg.spec(QuadratureSpec::default());
    match task {
        Task::Constants => {
            let check = |a: f64, b: f64, scale: f64| -> Result<f64> {
                let q = beta_by_quadrature(a, b, &spec)?;
                Ok((beta_function(a, b)? - q).abs() / scale)
            };
            vec![
                numeric(
                    "constants.alpha",
                    "α = B(2/3,1/6)/(6∛2)",
                    check(2.0 / 3.0, 1.0 / 6.0, alpha() * 6.0 * 2f64.cbrt()),
                    CONSTANT_TOL,
                    format!("alpha = {:.16}; log-Gamma route against Beta quadrature", alpha()),
                ),
                numeric(
                    "constants.beta",
                    "β = B(1/3,1/6)/(4√3)",
                    check(1.0 / 3.0, 1.0 / 6.0, beta() * 4.0 * 3f64.sqrt()),
                    CONSTANT_TOL,
                    format!("beta = {:.16}; log-Gamma route against Beta quadrature", beta()),
                ),
            ]
        }
        Task::ClosedForms => {
            let one = |name: &str, anchor: &str, c, sym: SymbolicVector| {
                let r = period_vector(&c, &spec).map(|(v, _)| vector_discrepancy(&v, &sym, k));
                numeric(
                    name,
                    anchor,
                    r,
                    PERIOD_TOL,
                    "max |numeric − closed form| over 4 components".into(),
                )
            };
            vec![
                one(
                    "periods.a1_closed_form",
                    "A1 periods = (1 + e^{iπ/3})(α, −α, i√3γ, −iγ)",
                    cycle_a1(),
                    closed_form_a1(),
                ),
                one(
                    "periods.a2_closed_form",
                    "A2 periods = (e^{2πi/3} + e^{iπ/3})(α, −α, i√3γ, −iγ)",
                    cycle_a2(),
                    closed_form_a2(),
                ),
            ]
        }
        Task::BetaGamma => {
            let gamma = gamma_by_quadrature(&spec).map(|g| (beta() - 3f64.sqrt() * g).abs() / beta());
            let b5 = verify_beta_gamma_periods(k, &spec).map(|r| r.form_beta.max(r.form_mixed));
            vec![
                numeric(
                    "periods.beta_gamma_identity",
                    "β = √3γ",
                    gamma,
                    CONSTANT_TOL,
                    "|β − √3γ|/β with γ by singular-endpoint quadrature".into(),
                ),
                numeric(
                    "periods.b5_component3",
                    "third period of B5 in its β form and its (β + √3γ)/2 form",
                    b5,
                    PERIOD_TOL,
                    "max of both forms' |numeric − closed form|".into(),
                ),
            ]
        }
        Task::Transport => {
            let table = cycle_order()
                .into_iter()
                .zip(printed_omega())
                .all(|(l, c)| symbolic_column(l) == c);
            let transport = assemble_period_matrix(&spec, k, f64::INFINITY).map(|m| m.max_discrepancy);
            vec![
                exact(
                    "periods.printed_table",
                    "period matrix Ω as tabulated, column by column",
                    Ok(table),
                    "pullback transport of A1/A2 against the transcribed table, 20 columns".into(),
                ),
                numeric(
                    "periods.pullback_transport",
                    "periods of φᵏ-images obtained by pullback",
                    transport,
                    PERIOD_TOL,
                    "max over 80 (cycle, component) entries of |integrated − transported|".into(),
                ),
            ]
        }
        Task::Lattice => {
            let ids = lattice_identities(&cfg.lattice_data);
            let anchors = [
                "Ω·G^Ω₁ = (Ω₈, Ω₉)",
                "(Ω₈, Ω₉)·G^Ω₂ = Ω",
                "Ω_R·G^R₁ = Λ",
                "Λ·G^R₂ = Ω_R",
                "Ω_I·G^I₁ = Λ_{π/2}",
                "Λ_{π/2}·G^I₂ = Ω_I",
            ];
            let mut out: Vec<ReportItem> = (0..6)
                .map(|i| {
                    let r = ids.clone().map(|v| v[i]);
                    exact(
                        &format!("lattice.{}", IDENTITY_NAMES[i]),
                        anchors[i],
                        r,
                        "exact product over Q(i, √3)·{α, γ}".into(),
                    )
                })
                .collect();
            let o89 = omega_8().hstack(&omega_9());
            let split = o89.real_part() == omega_r() && o89.imag_part() == omega_i();
            out.push(exact(
                "omega.real_imag_split",
                "(Ω₈, Ω₉) = Ω_R + iΩ_I",
                Ok(split),
                "entrywise against the transcribed Ω_R and Ω_I".into(),
            ));
            out
        }
        Task::Associate => {
            let b = cfg.sweep_bound;
            let pairs: Vec<(i64, i64)> = (1..=b)
                .flat_map(|n| (-b..=b).map(move |m| (m, n)))
                .filter(|&(m, n)| m.gcd(&n) == 1)
                .collect();
            let ranks: Vec<Result<usize>> = pairs.par_iter().map(|&(m, n)| associate_rank(m, n)).collect();
            let mut bad = Vec::new();
            let mut err = None;
            for (p, r) in pairs.iter().zip(ranks) {
                match r {
                    Ok(4) => {}
                    Ok(_) => bad.push(*p),
                    Err(e) => err = Some(e),
                }
            }
            let res = match err {
                Some(e) => Err(e),
                None => Ok(bad.is_empty()),
            };
            vec![exact(
                "associate.rank_sweep",
                "rank_Q Re{e^{iθ}Ω} = 4 for √3 tan θ = m/n",
                res,
                format!(
                    "{} reduced pairs with |m|, |n| <= {b}; rank != 4 at {bad:?}",
                    pairs.len()
                ),
            )]
        }
        Task::Homology => {
            let opts = HomologyOptions {
                spec: cfg.spec(HomologyOptions::default().spec),
                ..HomologyOptions::default()
            };
            match verify_homological_triviality(&opts) {
                Ok(rs) => rs
                    .iter()
                    .map(|w| {
                        let (i, j) = w.pair;
                        let mut it = numeric(
                            &format!("homology.dx{i}{j}"),
                            &format!("∫ dx{i}∧dx{j} = 0 over the surface"),
                            Ok(w.relative()),
                            HOMOLOGY_TOL,
                            format!(
                                "integral {:.3e}, normalizer {:.6}, excision-halving change {:.3e}",
                                w.extrapolated,
                                w.normalizer,
                                w.halving_change()
                            ),
                        );
                        if w.halving_change() >= HALVING_TOL {
                            it.status = Status::Fail;
                            it.detail.push_str("; halving change exceeds 1e-6");
                        }
                        it
                    })
                    .collect(),
                Err(e) => PAIRS
                    .iter()
                    .map(|(i, j)| {
                        numeric(
                            &format!("homology.dx{i}{j}"),
                            &format!("∫ dx{i}∧dx{j} = 0 over the surface"),
                            Err(e.clone()),
                            HOMOLOGY_TOL,
                            String::new(),
                        )
                    })
                    .collect(),
            }
        }
        Task::Symmetry => {
            let n = cfg.symmetry_samples;
            let pb = |name: &str, anchor: &str, a: Automorphism, m: PullbackMatrix| {
                numeric(
                    name,
                    anchor,
                    verify_pullback(a, &m, n, cfg.seed),
                    PULLBACK_TOL,
                    format!("worst relative residual over {n} random points"),
                )
            };
            let g1 = PullbackMatrix::phi1().block;
            let g2 = PullbackMatrix::phi2().block;
            let group = generated_group(&[g1.clone(), g2.clone()]).map(|g| {
                (
                    g.order == 24 && g.all_preserve_splitting && g.reducible.iter().all(|&x| x),
                    g.order,
                )
            });
            let dihedral = dihedral_relations(&g1, &g2);
            let detail = match &group {
                Ok((_, order)) => format!("order {order}; dihedral relations {dihedral}"),
                Err(_) => String::new(),
            };
            vec![
                pb(
                    "symmetry.phi",
                    "φ*Ψ = e^{2πi/3} diag(R(π/2), R(−π/3)) Ψ",
                    Automorphism::Phi,
                    PullbackMatrix::phi(),
                ),
                pb(
                    "symmetry.phi1",
                    "φ₁*f = diag(R(π/2), R(−π/3)) f",
                    Automorphism::Phi1,
                    PullbackMatrix::phi1(),
                ),
                pb(
                    "symmetry.phi2",
                    "φ₂*f = diag(1, −1, −1, 1) f",
                    Automorphism::Phi2,
                    PullbackMatrix::phi2(),
                ),
                exact(
                    "symmetry.group",
                    "φ₁, φ₂ generate D₁₂ acting reducibly",
                    group.map(|(ok, _)| ok && dihedral),
                    detail,
                ),
            ]
        }
        Task::Curve => vec![
            exact(
                "curve.conformality",
                "Σ ψₖ² = 0",
                Ok(conformality_polynomial(&weierstrass_numerators()).is_zero()),
                "sum of squared numerators over Q(i, √3)[z]".into(),
            ),
            exact(
                "curve.no_common_zeros",
                "the differentials have no common zero",
                Ok(check_no_common_zeros()),
                "exact gcd and branch-point orders".into(),
            ),
        ],
        Task::Obstruction => {
            let mismatches: Vec<u64> = (0..=301u64)
                .filter(|&g| {
                    let expected = g >= 4 && g % 3 == 1;
                    match trigonal_obstruction(g) {
                        Obstruction::Admissible { r } => !expected || 3 * r + 1 != g,
                        Obstruction::Obstructed(_) => expected,
                    }
                })
                .collect();
            vec![exact(
                "obstruction.table",
                "trigonal genus g admits such an immersion iff g = 3r + 1, r ≥ 1",
                Ok(mismatches.is_empty()),
                format!("genera 0..=301; mismatches {mismatches:?}"),
            )]
        }
    }
}

/// Every selected item, in a fixed order; failures are recorded, never fatal.
pub fn run_all(cfg: &ReportConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let constants = lattice_constants(&QuadratureSpec::default())?;
    let pattern = cfg
        .only
        .as_deref()
        .map(glob::Pattern::new)
        .transpose()
        .expect("validated");
    let selected = |name: &str| pattern.as_ref().is_none_or(|p| p.matches(name));
    let tasks: Vec<Task> = Task::ORDER
        .into_iter()
        .filter(|t| t.section().is_none_or(|s| cfg.sections.contains(&s)))
        .filter(|t| t.names().iter().any(|n| selected(n)))
        .collect();
    let ctx = Ctx { cfg, constants };
    let results: Vec<Vec<ReportItem>> = tasks
        .par_iter()
        .map(|&t| {
            let start = Instant::now();
            let mut items = run_task(t, &ctx);
            let ms = start.elapsed().as_secs_f64() * 1e3;
            for it in &mut items {
                it.runtime_ms = cfg.timings.then_some(ms);
            }
            items
        })
        .collect();
    let items = results.into_iter().flatten().filter(|i| selected(&i.name)).collect();
    Ok(VerificationReport {
        toolkit_version: TOOLKIT_VERSION.to_string(),
        constants,
        items,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> ReportConfig {
        ReportConfig {
            sections: vec![
                Section::Lattice,
                Section::Curve,
                Section::Obstruction,
                Section::Symmetry,
            ],
            timings: false,
            ..ReportConfig::default()
        }
    }

    #[test]
    fn empty_config_reports_constants_only() {
        let r = run_all(&ReportConfig::empty()).unwrap();
        let names: Vec<&str> = r.items.iter().map(|i| i.name.as_str()).collect();
        assert_eq!(names, vec!["constants.alpha", "constants.beta"]);
        assert!(r.all_passed());
    }

    #[test]
    fn exact_items_never_report_float_zero() {
        let r = run_all(&quick()).unwrap();
        assert!(r.all_passed(), "{:?}", r.failed());
        let lat = r.item("lattice.real.forward").unwrap();
        assert_eq!(lat.residual, Some(Residual::Exact { zero: true }));
        assert_eq!(lat.tolerance, None);
        let json = r.to_json();
        assert!(json.contains("\"kind\": \"exact\""));
        assert!(!json.contains("runtime_ms"));
    }

    #[test]
    fn glob_filter_selects_lattice_items() {
        let cfg = ReportConfig {
            only: Some("lattice.*".into()),
            ..ReportConfig::default()
        };
        let r = run_all(&cfg).unwrap();
        let names: Vec<String> = r.items.iter().map(|i| i.name.clone()).collect();
        let expected: Vec<String> = IDENTITY_NAMES.iter().map(|n| format!("lattice.{n}")).collect();
        assert_eq!(names, expected);
    }

    #[test]
    fn mutated_real_matrix_fails_only_its_identity() {
        let mut data = LatticeData::bundled();
        data.g_r_1.set(0, 0, data.g_r_1.get(0, 0) + 1);
        let cfg = ReportConfig {
            lattice_data: data,
            only: Some("lattice.*".into()),
            ..ReportConfig::default()
        };
        let r = run_all(&cfg).unwrap();
        assert_eq!(r.failed(), vec!["lattice.real.forward"]);
    }

    #[test]
    fn serial_reports_are_byte_identical() {
        let a = run_all(&quick()).unwrap().to_json();
        let b = run_all(&quick()).unwrap().to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_config_is_rejected() {
        let bad = ReportConfig {
            tolerance: Some(-1.0),
            ..ReportConfig::default()
        };
        assert!(run_all(&bad).is_err());
        let bad = ReportConfig {
            only: Some("[".into()),
            ..ReportConfig::default()
        };
        assert!(run_all(&bad).is_err());
    }
}
