//! Triangulated three-sheeted domain carrying the immersion `f_θ = Re(e^{iθ}∫Ψ)`.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::constants::LatticeConstants;
use crate::curve::{continue_sheet, psi_at, sheet_values, ComplexPath, CurveParams, Segment, SurfacePoint};
use crate::error::{Error, Result};
use crate::lattice::LatticeBasis;
use crate::quadrature::{integrate_path, Abscissa, CVec, QuadratureSpec, SingularEnds};
use crate::symmetry::PullbackMatrix;

/// Minimum distance between a mesh vertex and a branch point.
pub const BRANCH_CLEARANCE: f64 = 1e-3;
/// Triangles whose centroid lies this close to a branch point are skipped by
/// the conformality check.
pub const BRANCH_DISK: f64 = 0.05;
pub const MAX_REFINEMENT: u32 = 6;
pub const DEFAULT_RADIUS: f64 = 1.5;

type Vec4 = [Complex64; 4];

fn omega_pow(k: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (k % 3) as f64 / 3.0)
}

fn nearest_branch_distance(z: Complex64) -> f64 {
    CurveParams::genus10()
        .branch_points()
        .iter()
        .map(|b| (z - b).norm())
        .fold(f64::INFINITY, f64::min)
}

fn nearest_index(values: &[Complex64; 3], w: Complex64) -> usize {
    (0..3)
        .min_by(|&a, &b| (values[a] - w).norm().total_cmp(&(values[b] - w).norm()))
        .unwrap()
}

/// Concentric-ring triangulation of a z-disk.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarMesh {
    pub points: Vec<Complex64>,
    pub triangles: Vec<[usize; 3]>,
    pub rings: usize,
    /// Indices moved radially away from a branch point.
    pub perturbed: Vec<usize>,
}

impl PlanarMesh {
    /// Index of vertex `j` on ring `i ≥ 1` (ring `i` has `12i` vertices).
    pub fn ring_index(i: usize, j: usize) -> usize {
        1 + 6 * i * (i - 1) + j % (12 * i)
    }

    /// `(ring, position)` of a vertex; the centre is ring 0.
    pub fn ring_of(&self, idx: usize) -> (usize, usize) {
        if idx == 0 {
            return (0, 0);
        }
        let mut i = 1;
        while PlanarMesh::ring_index(i + 1, 0) <= idx {
            i += 1;
        }
        (i, idx - PlanarMesh::ring_index(i, 0))
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])])
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }
}

pub fn planar_mesh(radius: f64, refinement: u32) -> Result<PlanarMesh> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Domain(format!("mesh radius must be positive, got {radius}")));
    }
    if refinement > MAX_REFINEMENT {
        return Err(Error::Domain(format!(
            "refinement {refinement} exceeds {MAX_REFINEMENT}"
        )));
    }
    let n = 4usize << refinement;
    let mut points = vec![Complex64::new(0.0, 0.0)];
    let mut perturbed = Vec::new();
    for i in 1..=n {
        let r = radius * i as f64 / n as f64;
        let m = 12 * i;
        for j in 0..m {
            let t = 2.0 * PI * (j as f64 + 0.5) / m as f64;
            let mut z = Complex64::from_polar(r, t);
            if nearest_branch_distance(z) < BRANCH_CLEARANCE {
                let r2 = if r < 1.0 {
                    1.0 - 1.5 * BRANCH_CLEARANCE
                } else {
                    1.0 + 1.5 * BRANCH_CLEARANCE
                };
                z = Complex64::from_polar(r2, t);
                perturbed.push(points.len());
            }
            points.push(z);
        }
    }
    let mut triangles = Vec::with_capacity(12 * n * n);
    for j in 0..12 {
        triangles.push([0, PlanarMesh::ring_index(1, j), PlanarMesh::ring_index(1, j + 1)]);
    }
    for i in 2..=n {
        let (a, b) = (12 * (i - 1), 12 * i);
        let inner = |p: usize| PlanarMesh::ring_index(i - 1, p);
        let outer = |q: usize| PlanarMesh::ring_index(i, q);
        let ang = |k: usize, m: usize| (k as f64 + 0.5) / m as f64;
        let (mut p, mut q) = (0, 0);
        while p < a || q < b {
            let take_outer = p == a || (q < b && ang(q + 1, b) <= ang(p + 1, a));
            if take_outer {
                triangles.push([inner(p), outer(q), outer(q + 1)]);
                q += 1;
            } else {
                triangles.push([inner(p), outer(q), inner(p + 1)]);
                p += 1;
            }
        }
    }
    Ok(PlanarMesh {
        points,
        triangles,
        rings: n,
        perturbed,
    })
}

/// `∫ Ψ` along the segment `a → b` on the sheet through `w(a) = wa`, and
/// the continued value `w(b)`.
pub fn segment_integral(a: Complex64, b: Complex64, wa: Complex64, spec: &QuadratureSpec) -> Result<(Vec4, Complex64)> {
    segment_integral_seeded(a, b, 0.0, wa, spec)
}

fn segment_integral_seeded(
    a: Complex64,
    b: Complex64,
    seed: f64,
    w_seed: Complex64,
    spec: &QuadratureSpec,
) -> Result<(Vec4, Complex64)> {
    let seg = Segment { a, b };
    let track = continue_sheet(&seg, seed, w_seed)?;
    let f = |s: Abscissa| -> CVec<4> {
        let z = seg.z(s);
        match psi_at(z, track.value_at(&seg, s)) {
            Ok(v) => CVec(v.components.map(|x| x * seg.dz(s))),
            Err(_) => CVec([Complex64::new(f64::NAN, 0.0); 4]),
        }
    };
    let est = integrate_path(f, 0.0, 1.0, spec, SingularEnds::NONE)?;
    Ok((est.value.0, track.last().1))
}

/// A planar edge lifted to the three sheets.
#[derive(Clone, Debug)]
struct EdgeLift {
    /// Sheet index at `v` reached from sheet `s` at `u`.
    target: [usize; 3],
    /// `∫_u^v Ψ` starting on sheet `s` at `u`.
    integral: [Vec4; 3],
}

fn lift_edge(zu: Complex64, zv: Complex64, spec: &QuadratureSpec) -> Result<EdgeLift> {
    let su = sheet_values(zu);
    let sv = sheet_values(zv);
    let (i0, w_end) = segment_integral(zu, zv, su[0], spec)?;
    let mut target = [0; 3];
    let mut integral = [[Complex64::new(0.0, 0.0); 4]; 3];
    for s in 0..3 {
        // sheet s is ω^k times sheet 0, and Ψ picks up ω^{−2k} = ω^k
        let ratio = su[s] / su[0];
        let k = ((ratio.arg() / (2.0 * PI / 3.0)).round() as i64).rem_euclid(3) as usize;
        let wk = omega_pow(k);
        target[s] = nearest_index(&sv, wk * w_end);
        integral[s] = i0.map(|x| x * wk);
    }
    let mut seen = target;
    seen.sort_unstable();
    if seen != [0, 1, 2] {
        return Err(Error::AmbiguousContinuation { param: 1.0 });
    }
    Ok(EdgeLift { target, integral })
}

/// Edge of the lifted graph, in mesh-vertex indices.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedEdge {
    pub from: usize,
    pub to: usize,
    pub integral: Vec4,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeshVertex {
    pub position: [f64; 4],
    pub source: SurfacePoint,
    /// `∫_{p₀}^{p} Ψ` along the integration tree.
    pub primitive: Vec4,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImmersedMesh {
    pub vertices: Vec<MeshVertex>,
    pub triangles: Vec<[usize; 3]>,
    pub theta: f64,
    pub lattice: Option<LatticeBasis>,
    pub planar: PlanarMesh,
    /// `3·planar + sheet` → vertex index.
    pub lifted_index: Vec<Option<usize>>,
    pub edges: Vec<LiftedEdge>,
    /// Tree edge used to reach each vertex (`None` at the base point).
    pub tree_parent: Vec<Option<usize>>,
    pub root: usize,
    /// Planar triangle lifts dropped because a branch point lies inside or
    /// an edge could not be continued.
    pub omitted_triangles: usize,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct MeshOptions {
    pub radius: f64,
    pub refinement: u32,
    pub theta: f64,
    pub spec: QuadratureSpec,
}

impl Default for MeshOptions {
    fn default() -> Self {
        MeshOptions {
            radius: DEFAULT_RADIUS,
            refinement: 1,
            theta: 0.0,
            spec: QuadratureSpec::with_tolerance(1e-12),
        }
    }
}

/// Λ for θ ≡ 0 and Λ_{π/2} for θ ≡ π/2 (mod π); otherwise no lattice.
pub fn lattice_for_theta(theta: f64) -> Option<LatticeBasis> {
    const TOL: f64 = 1e-6;
    let t = theta.rem_euclid(PI);
    if t < TOL || PI - t < TOL {
        Some(LatticeBasis::lambda())
    } else if (t - PI / 2.0).abs() < TOL {
        Some(LatticeBasis::lambda_half_pi())
    } else {
        None
    }
}

fn rotate_real(theta: f64, v: &Vec4) -> [f64; 4] {
    let e = Complex64::from_polar(1.0, theta);
    v.map(|x| (e * x).re)
}

pub fn build_mesh(radius: f64, refinement: u32, theta: f64) -> Result<ImmersedMesh> {
    build_mesh_with(&MeshOptions {
        radius,
        refinement,
        theta,
        ..MeshOptions::default()
    })
}

pub fn build_mesh_with(o: &MeshOptions) -> Result<ImmersedMesh> {
    if !o.theta.is_finite() {
        return Err(Error::Domain("theta must be finite".into()));
    }
    o.spec.validate()?;
    let planar = planar_mesh(o.radius, o.refinement)?;
    let mut warnings: Vec<String> = planar
        .perturbed
        .iter()
        .map(|&i| format!("vertex {i} moved off a branch point"))
        .collect();
    let pedges = planar.edges();
    let lifts: Vec<Result<EdgeLift>> = pedges
        .par_iter()
        .map(|&(u, v)| lift_edge(planar.points[u], planar.points[v], &o.spec))
        .collect();
    let mut edge_map: HashMap<(usize, usize), usize> = HashMap::new();
    let mut good: Vec<Option<EdgeLift>> = Vec::with_capacity(lifts.len());
    for (k, (l, &(u, v))) in lifts.into_iter().zip(&pedges).enumerate() {
        match l {
            Ok(l) => good.push(Some(l)),
            Err(e) => {
                warnings.push(format!("edge {u}-{v} skipped: {e}"));
                good.push(None);
            }
        }
        edge_map.insert((u, v), k);
    }

    // lifted graph on 3·planar vertices
    let nl = 3 * planar.points.len();
    let mut raw_edges: Vec<(usize, usize, Vec4)> = Vec::new();
    for (k, &(u, v)) in pedges.iter().enumerate() {
        if let Some(l) = &good[k] {
            for s in 0..3 {
                raw_edges.push((3 * u + s, 3 * v + l.target[s], l.integral[s]));
            }
        }
    }
    let mut adj: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); nl];
    for (k, &(a, b, _)) in raw_edges.iter().enumerate() {
        adj[a].push((b, k, true));
        adj[b].push((a, k, false));
    }
    let s0 = nearest_index(&sheet_values(planar.points[0]), Complex64::new(-1.0, 0.0));
    let root_l = s0;
    let (prim, parent) = spanning_tree(&adj, &raw_edges, root_l, TreeOrder::Breadth);

    // keep reachable lifted vertices
    let mut lifted_index = vec![None; nl];
    let mut vertices = Vec::new();
    let mut tree_parent_l = Vec::new();
    for l in 0..nl {
        if let Some(p) = prim[l] {
            lifted_index[l] = Some(vertices.len());
            let z = planar.points[l / 3];
            let w = if l == root_l {
                Complex64::new(-1.0, 0.0)
            } else {
                sheet_values(z)[l % 3]
            };
            vertices.push(MeshVertex {
                position: rotate_real(o.theta, &p),
                source: SurfacePoint::new(z, w)?,
                primitive: p,
            });
            tree_parent_l.push(parent[l]);
        }
    }
    let unreachable = nl - vertices.len();
    if unreachable > 0 {
        warnings.push(format!(
            "{unreachable} lifted vertices are not connected to the base point"
        ));
    }
    let mut edges = Vec::new();
    let mut edge_renumber = vec![None; raw_edges.len()];
    for (k, (a, b, i)) in raw_edges.iter().enumerate() {
        if let (Some(x), Some(y)) = (lifted_index[*a], lifted_index[*b]) {
            edge_renumber[k] = Some(edges.len());
            edges.push(LiftedEdge {
                from: x,
                to: y,
                integral: *i,
            });
        }
    }
    let tree_parent = tree_parent_l
        .into_iter()
        .map(|p| p.map(|k| edge_renumber[k].expect("tree edges join reachable vertices")))
        .collect();

    let sheet_step = |u: usize, v: usize, s: usize| -> Option<usize> {
        let key = (u.min(v), u.max(v));
        let l = good[*edge_map.get(&key)?].as_ref()?;
        if u < v {
            Some(l.target[s])
        } else {
            l.target.iter().position(|&t| t == s)
        }
    };
    let mut triangles = Vec::new();
    let mut omitted = 0;
    for t in &planar.triangles {
        for s in 0..3 {
            let lifted = sheet_step(t[0], t[1], s).and_then(|sb| {
                let sc = sheet_step(t[1], t[2], sb)?;
                let back = sheet_step(t[2], t[0], sc)?;
                (back == s).then_some([3 * t[0] + s, 3 * t[1] + sb, 3 * t[2] + sc])
            });
            match lifted.and_then(|l| Some([lifted_index[l[0]]?, lifted_index[l[1]]?, lifted_index[l[2]]?])) {
                Some(tri) => triangles.push(tri),
                None => omitted += 1,
            }
        }
    }
    let root = lifted_index[root_l].expect("root is reachable");
    Ok(ImmersedMesh {
        vertices,
        triangles,
        theta: o.theta,
        lattice: lattice_for_theta(o.theta),
        planar,
        lifted_index,
        edges,
        tree_parent,
        root,
        omitted_triangles: omitted,
        warnings,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum TreeOrder {
    Breadth,
    Depth,
}

type Adjacency = Vec<Vec<(usize, usize, bool)>>;

fn spanning_tree(
    adj: &Adjacency,
    edges: &[(usize, usize, Vec4)],
    root: usize,
    order: TreeOrder,
) -> (Vec<Option<Vec4>>, Vec<Option<usize>>) {
    let n = adj.len();
    let mut prim: Vec<Option<Vec4>> = vec![None; n];
    let mut parent = vec![None; n];
    prim[root] = Some([Complex64::new(0.0, 0.0); 4]);
    let mut frontier = VecDeque::from([root]);
    while let Some(x) = match order {
        TreeOrder::Breadth => frontier.pop_front(),
        TreeOrder::Depth => frontier.pop_back(),
    } {
        let px = prim[x].expect("visited");
        let neighbours: Box<dyn Iterator<Item = &(usize, usize, bool)>> = match order {
            TreeOrder::Breadth => Box::new(adj[x].iter()),
            TreeOrder::Depth => Box::new(adj[x].iter().rev()),
        };
        for &(y, k, forward) in neighbours {
            if prim[y].is_some() {
                continue;
            }
            let i = edges[k].2;
            let step: Vec4 = std::array::from_fn(|c| if forward { px[c] + i[c] } else { px[c] - i[c] });
            prim[y] = Some(step);
            parent[y] = Some(k);
            frontier.push_back(y);
        }
    }
    (prim, parent)
}

impl ImmersedMesh {
    /// A mesh from bare positions, for export and tests.
    pub fn from_positions(positions: Vec<[f64; 4]>, triangles: Vec<[usize; 3]>) -> Self {
        let base = SurfacePoint::new(Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)).expect("on curve");
        let vertices = positions
            .into_iter()
            .map(|position| MeshVertex {
                position,
                source: base,
                primitive: [Complex64::new(0.0, 0.0); 4],
            })
            .collect();
        ImmersedMesh {
            vertices,
            triangles,
            theta: 0.0,
            lattice: None,
            planar: PlanarMesh {
                points: Vec::new(),
                triangles: Vec::new(),
                rings: 0,
                perturbed: Vec::new(),
            },
            lifted_index: Vec::new(),
            edges: Vec::new(),
            tree_parent: Vec::new(),
            root: 0,
            omitted_triangles: 0,
            warnings: Vec::new(),
        }
    }

    fn adjacency(&self) -> (Adjacency, Vec<(usize, usize, Vec4)>) {
        let raw: Vec<(usize, usize, Vec4)> = self.edges.iter().map(|e| (e.from, e.to, e.integral)).collect();
        let mut adj: Adjacency = vec![Vec::new(); self.vertices.len()];
        for (k, &(a, b, _)) in raw.iter().enumerate() {
            adj[a].push((b, k, true));
            adj[b].push((a, k, false));
        }
        (adj, raw)
    }

    /// Primitives along a depth-first tree, a second route to every vertex.
    pub fn depth_first_primitives(&self) -> Vec<Vec4> {
        let (adj, raw) = self.adjacency();
        let (prim, _) = spanning_tree(&adj, &raw, self.root, TreeOrder::Depth);
        prim.into_iter().map(|p| p.expect("same connected graph")).collect()
    }

    pub fn lattice_matrix(&self, k: &LatticeConstants) -> Option<[[f64; 4]; 4]> {
        self.lattice.as_ref().map(|l| l.to_real(k))
    }
}

/// Round `v` against the (upper-triangular) generator matrix; returns the
/// integer coefficients and the residual `|v − L·n|`.
pub fn reduce_against(l: &[[f64; 4]; 4], v: [f64; 4]) -> ([f64; 4], f64) {
    let mut n = [0.0; 4];
    for r in (0..4).rev() {
        let mut acc = v[r];
        for c in r + 1..4 {
            acc -= l[r][c] * n[c];
        }
        n[r] = acc / l[r][r];
    }
    let rounded = n.map(f64::round);
    let mut res: f64 = 0.0;
    for r in 0..4 {
        let lv: f64 = (0..4).map(|c| l[r][c] * rounded[c]).sum();
        res = res.max((v[r] - lv).abs());
    }
    (rounded, res)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathCheck {
    pub checked: usize,
    /// Vertices whose two routes agree to 1e−8.
    pub direct: usize,
    /// Vertices whose routes differ by a lattice vector (residual < 1e−6).
    pub lattice: usize,
    pub failures: Vec<usize>,
    pub worst_lattice_residual: f64,
}

impl PathCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }
}

pub const DIRECT_TOL: f64 = 1e-8;
pub const LATTICE_TOL: f64 = 1e-6;

/// Compare breadth-first and depth-first routes at `samples` seeded vertices.
pub fn path_independence(mesh: &ImmersedMesh, samples: usize, seed: u64, k: &LatticeConstants) -> PathCheck {
    let second = mesh.depth_first_primitives();
    let lat = mesh.lattice_matrix(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks = sample(&mut rng, mesh.vertices.len(), samples.min(mesh.vertices.len()));
    let mut out = PathCheck {
        checked: 0,
        direct: 0,
        lattice: 0,
        failures: Vec::new(),
        worst_lattice_residual: 0.0,
    };
    for i in picks.iter() {
        out.checked += 1;
        let d: Vec4 = std::array::from_fn(|c| mesh.vertices[i].primitive[c] - second[i][c]);
        let real = rotate_real(mesh.theta, &d);
        if real.iter().all(|x| x.abs() < DIRECT_TOL) {
            out.direct += 1;
            continue;
        }
        match lat {
            Some(l) => {
                let (_, res) = reduce_against(&l, real);
                out.worst_lattice_residual = out.worst_lattice_residual.max(res);
                if res < LATTICE_TOL {
                    out.lattice += 1;
                } else {
                    out.failures.push(i);
                }
            }
            None => out.failures.push(i),
        }
    }
    out
}

/// Largest `|∮ Ψ|` around a lifted triangle (zero by Cauchy's theorem).
pub fn triangle_closure_residual(mesh: &ImmersedMesh) -> f64 {
    let mut lookup: HashMap<(usize, usize), Vec4> = HashMap::new();
    for e in &mesh.edges {
        lookup.insert((e.from, e.to), e.integral);
        lookup.insert((e.to, e.from), e.integral.map(|x| -x));
    }
    let mut worst: f64 = 0.0;
    for t in &mesh.triangles {
        let mut sum = [Complex64::new(0.0, 0.0); 4];
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            let i = lookup[&(a, b)];
            for c in 0..4 {
                sum[c] += i[c];
            }
        }
        worst = worst.max(sum.iter().map(|x| x.norm()).fold(0.0, f64::max));
    }
    worst
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConformalityCheck {
    pub checked: usize,
    pub passed: usize,
    pub excluded: usize,
    pub worst_angle: f64,
    pub worst_stretch: f64,
}

impl ConformalityCheck {
    pub fn pass_fraction(&self) -> f64 {
        if self.checked == 0 {
            0.0
        } else {
            self.passed as f64 / self.checked as f64
        }
    }
}

pub const CONFORMAL_TOL: f64 = 1e-3;
const FD_STEP: f64 = 1e-5;

/// Central finite differences of `f_θ` at each lifted triangle's centroid.
pub fn conformality(mesh: &ImmersedMesh, spec: &QuadratureSpec) -> Result<ConformalityCheck> {
    let results: Vec<Result<Option<(f64, f64)>>> = mesh
        .triangles
        .par_iter()
        .map(|t| {
            let a = mesh.vertices[t[0]].source;
            let zc = t.iter().map(|&i| mesh.vertices[i].source.z).sum::<Complex64>() / 3.0;
            if nearest_branch_distance(zc) < BRANCH_DISK {
                return Ok(None);
            }
            let (_, wc) = segment_integral(a.z, zc, a.w, spec)?;
            let h = Complex64::new(FD_STEP, 0.0);
            let ih = Complex64::new(0.0, FD_STEP);
            let (du, _) = segment_integral_seeded(zc - h, zc + h, 0.5, wc, spec)?;
            let (dv, _) = segment_integral_seeded(zc - ih, zc + ih, 0.5, wc, spec)?;
            let fu = rotate_real(mesh.theta, &du).map(|x| x / (2.0 * FD_STEP));
            let fv = rotate_real(mesh.theta, &dv).map(|x| x / (2.0 * FD_STEP));
            let dot: f64 = (0..4).map(|c| fu[c] * fv[c]).sum();
            let nu = fu.iter().map(|x| x * x).sum::<f64>().sqrt();
            let nv = fv.iter().map(|x| x * x).sum::<f64>().sqrt();
            Ok(Some((dot.abs() / (nu * nv), (nu - nv).abs() / nu)))
        })
        .collect();
    let mut out = ConformalityCheck {
        checked: 0,
        passed: 0,
        excluded: 0,
        worst_angle: 0.0,
        worst_stretch: 0.0,
    };
    for r in results {
        match r? {
            None => out.excluded += 1,
            Some((angle, stretch)) => {
                out.checked += 1;
                out.worst_angle = out.worst_angle.max(angle);
                out.worst_stretch = out.worst_stretch.max(stretch);
                if angle < CONFORMAL_TOL && stretch < CONFORMAL_TOL {
                    out.passed += 1;
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetrySpotCheck {
    pub checked: usize,
    pub worst_residual: f64,
}

/// `f(φ₁p) − M·f(p) − f(φ₁p₀)` reduced against the mesh lattice, over every
/// unperturbed off-centre vertex. φ₁ rotates ring `i` by `i` positions.
pub fn phi1_spot_check(mesh: &ImmersedMesh, k: &LatticeConstants) -> Result<SymmetrySpotCheck> {
    let l = mesh
        .lattice_matrix(k)
        .ok_or_else(|| Error::Domain("φ₁ spot check needs θ ≡ 0 or π/2 (mod π)".into()))?;
    let m = PullbackMatrix::phi1().block.map(|row| row.map(|x| x.to_f64()));
    let w2 = omega_pow(2);
    let image_of = |l_idx: usize| -> Option<usize> {
        let pi = l_idx / 3;
        let z = mesh.planar.points[pi];
        let w = sheet_values(z)[l_idx % 3];
        let qi = if pi == 0 {
            0
        } else {
            let (ring, pos) = mesh.planar.ring_of(pi);
            PlanarMesh::ring_index(ring, pos + ring)
        };
        let s = nearest_index(&sheet_values(mesh.planar.points[qi]), w2 * w);
        Some(3 * qi + s)
    };
    let root_l = mesh
        .lifted_index
        .iter()
        .position(|&x| x == Some(mesh.root))
        .expect("root lifted");
    let base = mesh.lifted_index[image_of(root_l).expect("centre maps to centre")]
        .ok_or_else(|| Error::Domain("φ₁(p₀) not in mesh".into()))?;
    let f0 = mesh.vertices[base].position;
    let mut out = SymmetrySpotCheck {
        checked: 0,
        worst_residual: 0.0,
    };
    for (l_idx, v) in mesh.lifted_index.iter().enumerate() {
        let Some(v) = *v else { continue };
        let pi = l_idx / 3;
        if pi == 0 || mesh.planar.perturbed.contains(&pi) {
            continue;
        }
        let Some(img_l) = image_of(l_idx) else { continue };
        if mesh.planar.perturbed.contains(&(img_l / 3)) {
            continue;
        }
        let Some(img) = mesh.lifted_index[img_l] else { continue };
        let fp = mesh.vertices[v].position;
        let fi = mesh.vertices[img].position;
        let d: [f64; 4] = std::array::from_fn(|r| fi[r] - (0..4).map(|c| m[r][c] * fp[c]).sum::<f64>() - f0[r]);
        let (_, res) = reduce_against(&l, d);
        out.checked += 1;
        out.worst_residual = out.worst_residual.max(res);
    }
    Ok(out)
}

/// Three of the four coordinates, 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Projection(pub [usize; 3]);

impl Projection {
    /// Parse a digit string such as `"123"` or `"124"`.
    pub fn parse(s: &str) -> Result<Self> {
        let digits: Vec<usize> = s
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Parse(format!("projection {s:?} must be three digits")))?;
        if digits.len() != 3 || digits.iter().any(|&d| !(1..=4).contains(&d)) {
            return Err(Error::Parse(format!("projection {s:?} must be three of 1..4")));
        }
        let mut sorted = digits.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != 3 {
            return Err(Error::Parse(format!("projection {s:?} repeats a coordinate")));
        }
        Ok(Projection([digits[0] - 1, digits[1] - 1, digits[2] - 1]))
    }

    /// The coordinate left out.
    pub fn omitted(&self) -> usize {
        (0..4).find(|c| !self.0.contains(c)).expect("three of four")
    }
}

impl Default for Projection {
    fn default() -> Self {
        Projection([0, 1, 2])
    }
}

pub fn write_obj(
    mesh: &ImmersedMesh,
    projection: Projection,
    obj: &mut impl Write,
    attr: &mut impl Write,
) -> Result<()> {
    let [a, b, c] = projection.0;
    let o = projection.omitted();
    writeln!(
        obj,
        "# {} vertices, {} faces, theta = {}, coordinates {}{}{}",
        mesh.vertices.len(),
        mesh.triangles.len(),
        mesh.theta,
        a + 1,
        b + 1,
        c + 1
    )?;
    for v in &mesh.vertices {
        let p = v.position;
        writeln!(obj, "v {:.12} {:.12} {:.12}", p[a], p[b], p[c])?;
    }
    for t in &mesh.triangles {
        writeln!(obj, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    for (i, v) in mesh.vertices.iter().enumerate() {
        writeln!(attr, "{} {:.12}", i + 1, v.position[o])?;
    }
    Ok(())
}

/// Side-car path: the OBJ path with extension `attr`.
pub fn attribute_path(obj_path: &Path) -> PathBuf {
    obj_path.with_extension("attr")
}

/// Write `path` and its attribute side-car; returns the side-car path.
pub fn export_obj(mesh: &ImmersedMesh, projection: Projection, path: &Path) -> Result<PathBuf> {
    let side = attribute_path(path);
    let mut obj = BufWriter::new(File::create(path)?);
    let mut attr = BufWriter::new(File::create(&side)?);
    write_obj(mesh, projection, &mut obj, &mut attr)?;
    obj.flush()?;
    attr.flush()?;
    Ok(side)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::lattice_constants;

    fn constants() -> LatticeConstants {
        lattice_constants(&QuadratureSpec::default()).unwrap()
    }

    #[test]
    fn planar_counts() {
        for refine in 0..3 {
            let m = planar_mesh(1.5, refine).unwrap();
            let n = 4usize << refine;
            assert_eq!(m.points.len(), 1 + 6 * n * (n + 1));
            assert_eq!(m.triangles.len(), 12 * n * n);
            // Euler characteristic of a disk
            let e = m.edges().len() as i64;
            assert_eq!(m.points.len() as i64 - e + m.triangles.len() as i64, 1);
        }
    }

    #[test]
    fn planar_triangles_are_counter_clockwise() {
        let m = planar_mesh(1.5, 1).unwrap();
        for t in &m.triangles {
            let (a, b, c) = (m.points[t[0]], m.points[t[1]], m.points[t[2]]);
            let cross = ((b - a).conj() * (c - a)).im;
            assert!(cross > 0.0, "{t:?}");
        }
    }

    #[test]
    fn vertices_avoid_branch_points() {
        let m = planar_mesh(1.0, 2).unwrap();
        assert!(m.points.iter().all(|&z| nearest_branch_distance(z) >= BRANCH_CLEARANCE));
        assert!(planar_mesh(-1.0, 0).is_err());
        assert!(planar_mesh(1.0, MAX_REFINEMENT + 1).is_err());
    }

    #[test]
    fn ring_lookup_round_trips() {
        let m = planar_mesh(1.5, 1).unwrap();
        for idx in 1..m.points.len() {
            let (i, j) = m.ring_of(idx);
            assert_eq!(PlanarMesh::ring_index(i, j), idx);
        }
    }

    #[test]
    fn base_point_maps_to_origin_and_counts() {
        let mesh = build_mesh(1.5, 0, 0.0).unwrap();
        assert_eq!(mesh.vertices[mesh.root].position, [0.0; 4]);
        assert_eq!(mesh.vertices[mesh.root].source.w, Complex64::new(-1.0, 0.0));
        assert_eq!(mesh.vertices.len(), 3 * mesh.planar.points.len());
        // one planar triangle around each branch point has a nontrivial monodromy
        assert_eq!(
            mesh.triangles.len() + mesh.omitted_triangles,
            3 * mesh.planar.triangles.len()
        );
        assert_eq!(mesh.omitted_triangles, 3 * 12);
        assert!(matches!(mesh.lattice, Some(ref l) if *l == LatticeBasis::lambda()));
    }

    #[test]
    fn small_disk_reaches_only_one_sheet() {
        let mesh = build_mesh(0.5, 0, 0.0).unwrap();
        assert_eq!(mesh.vertices.len(), mesh.planar.points.len());
        assert!(!mesh.warnings.is_empty());
    }

    #[test]
    fn cauchy_closure_on_triangles() {
        let mesh = build_mesh(1.5, 0, 0.0).unwrap();
        assert!(triangle_closure_residual(&mesh) < 1e-9);
    }

    #[test]
    fn routes_agree_up_to_lattice() {
        let k = constants();
        for theta in [0.0, PI / 2.0] {
            let mesh = build_mesh(1.5, 0, theta).unwrap();
            let pc = path_independence(&mesh, 50, 11, &k);
            assert!(pc.passed(), "{theta}: {pc:?}");
            assert!(pc.lattice > 0, "some routes wind around branch points");
        }
    }

    #[test]
    fn generic_angle_has_no_lattice() {
        let mesh = build_mesh(1.5, 0, 0.3).unwrap();
        assert!(mesh.lattice.is_none());
        assert!(phi1_spot_check(&mesh, &constants()).is_err());
    }

    #[test]
    fn conformal_away_from_branch_points() {
        let mesh = build_mesh(1.5, 0, 0.7).unwrap();
        let c = conformality(&mesh, &QuadratureSpec::with_tolerance(1e-12)).unwrap();
        assert!(c.checked > 0);
        assert!(c.pass_fraction() >= 0.95, "{c:?}");
    }

    #[test]
    fn phi1_acts_affinely_up_to_lattice() {
        let k = constants();
        for theta in [0.0, PI / 2.0] {
            let mesh = build_mesh(1.5, 0, theta).unwrap();
            let s = phi1_spot_check(&mesh, &k).unwrap();
            assert!(s.checked > 100);
            assert!(s.worst_residual < 1e-6, "{theta}: {s:?}");
        }
    }

    #[test]
    fn projection_parsing() {
        assert_eq!(Projection::parse("124").unwrap(), Projection([0, 1, 3]));
        assert_eq!(Projection::parse("124").unwrap().omitted(), 2);
        for bad in ["12", "125", "112", "1a3", "1234"] {
            assert!(Projection::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn obj_records() {
        let mut obj = Vec::new();
        let mut attr = Vec::new();
        let empty = ImmersedMesh::from_positions(Vec::new(), Vec::new());
        write_obj(&empty, Projection::default(), &mut obj, &mut attr).unwrap();
        let text = String::from_utf8(obj.clone()).unwrap();
        assert!(!text.lines().any(|l| l.starts_with("f ") || l.starts_with("v ")));

        obj.clear();
        attr.clear();
        let tri = ImmersedMesh::from_positions(
            vec![[0.0, 0.0, 0.0, 1.0], [1.0, 0.0, 0.0, 2.0], [0.0, 1.0, 0.0, 3.0]],
            vec![[0, 1, 2]],
        );
        write_obj(&tri, Projection::default(), &mut obj, &mut attr).unwrap();
        let text = String::from_utf8(obj).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 3);
        assert_eq!(
            text.lines().filter(|l| l.starts_with("f ")).collect::<Vec<_>>(),
            vec!["f 1 2 3"]
        );
        let attr = String::from_utf8(attr).unwrap();
        assert_eq!(attr.lines().next().unwrap(), "1 1.000000000000");
    }
}
