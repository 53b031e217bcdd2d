//! Mesh-refinement studies on the unit square: mass-matrix conditioning,
//! L² projection, the Dirichlet Laplacian and the clamped plate, with CSV and
//! plot-script output.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::linalg::{cg_solve_detailed, condition_number_spd_sparse, fit_loglog_slope, successive_rates, EnvelopeCholesky, SparseMatrix};
use crate::mesh_assembly::{apply_dirichlet, BoundarySpec, Discretization};
use crate::reference_element::ElementFamily;
use crate::tabulate::Form;

/// Poisson ratio of the plate problem.
pub const PLATE_POISSON_RATIO: f64 = 0.5;

/// Default refinement sweep.
pub const DEFAULT_NS: [usize; 5] = [2, 4, 8, 16, 32];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudyKind {
    Conditioning,
    Projection,
    Laplace,
    Plate,
}

impl FromStr for StudyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conditioning" => Ok(StudyKind::Conditioning),
            "projection" => Ok(StudyKind::Projection),
            "laplace" => Ok(StudyKind::Laplace),
            "plate" => Ok(StudyKind::Plate),
            other => Err(Error::InvalidInput(format!("unknown study '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    /// Jacobi-preconditioned conjugate gradients.
    Cg,
    /// Envelope Cholesky after reverse Cuthill–McKee reordering.
    Direct,
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cg" => Ok(SolverKind::Cg),
            "dense" | "direct" => Ok(SolverKind::Direct),
            other => Err(Error::InvalidInput(format!("unknown solver '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub ns: Vec<usize>,
    /// Scale derivative DOFs by local mesh size.
    pub scaled: bool,
    pub solver: SolverKind,
    /// Relative residual tolerance for iterative solves.
    pub tol: f64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            ns: DEFAULT_NS.to_vec(),
            scaled: true,
            solver: SolverKind::Direct,
            tol: 1e-13,
        }
    }
}

impl StudyConfig {
    pub fn with_ns(ns: &[usize]) -> Self {
        Self {
            ns: ns.to_vec(),
            ..Self::default()
        }
    }
}

/// Powers of two from 2 up to `nmax`.
pub fn refinement_sweep(nmax: usize) -> Vec<usize> {
    std::iter::successors(Some(2usize), |n| Some(n * 2)).take_while(|&n| n <= nmax).collect()
}

/// One curve of a study: a metric per mesh size.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyResult {
    pub family: ElementFamily,
    pub study: StudyKind,
    /// `"condition_number"` or `"l2_error"`.
    pub metric: String,
    pub scaled: bool,
    pub ns: Vec<usize>,
    pub dofs: Vec<usize>,
    pub values: Vec<f64>,
}

impl StudyResult {
    pub fn hs(&self) -> Vec<f64> {
        self.ns.iter().map(|&n| 1.0 / n as f64).collect()
    }

    /// Rates between successive refinements. For errors this is the
    /// convergence order; for condition numbers the growth exponent in `N`.
    pub fn successive_rates(&self) -> Vec<f64> {
        let r = successive_rates(&self.hs(), &self.values);
        if self.study == StudyKind::Conditioning {
            r.into_iter().map(|v| -v).collect()
        } else {
            r
        }
    }

    /// Least-squares log-log slope over all mesh sizes, signed like
    /// [`Self::successive_rates`].
    pub fn fitted_rate(&self) -> Result<f64> {
        let s = fit_loglog_slope(&self.hs(), &self.values)?;
        Ok(if self.study == StudyKind::Conditioning { -s } else { s })
    }

    /// Rate between the two finest meshes.
    pub fn finest_rate(&self) -> Option<f64> {
        self.successive_rates().last().copied()
    }
}

fn check_ns(ns: &[usize]) -> Result<()> {
    if ns.is_empty() || ns.windows(2).any(|w| w[0] >= w[1]) || ns[0] == 0 {
        return Err(Error::InvalidInput("mesh sizes must be positive and strictly increasing".into()));
    }
    Ok(())
}

/// Condition number of the global mass matrix for each `N`.
pub fn run_conditioning(family: ElementFamily, ns: &[usize], scaled: bool) -> Result<StudyResult> {
    check_ns(ns)?;
    let mut dofs = Vec::new();
    let mut values = Vec::new();
    for &n in ns {
        let disc = Discretization::new(family, n)?;
        let s = if scaled { Some(disc.scaling()?) } else { None };
        let a = disc.assemble(Form::Mass, s.as_ref())?;
        dofs.push(disc.num_dofs());
        values.push(condition_number_spd_sparse(&a)?);
    }
    Ok(StudyResult {
        family,
        study: StudyKind::Conditioning,
        metric: "condition_number".into(),
        scaled,
        ns: ns.to_vec(),
        dofs,
        values,
    })
}

/// Projection target `sin(πx) sin(2πy)`.
pub fn projection_solution(p: Point) -> f64 {
    (PI * p[0]).sin() * (2.0 * PI * p[1]).sin()
}

/// Laplace solution `sin(2πx) sin(2πy)`.
pub fn laplace_solution(p: Point) -> f64 {
    (2.0 * PI * p[0]).sin() * (2.0 * PI * p[1]).sin()
}

/// `-Δ` of [`laplace_solution`].
pub fn laplace_forcing(p: Point) -> f64 {
    8.0 * PI * PI * laplace_solution(p)
}

/// Plate solution `(x(1−x) y(1−y))²`.
pub fn plate_solution(p: Point) -> f64 {
    let [x, y] = p;
    (x * (1.0 - x) * y * (1.0 - y)).powi(2)
}

/// `Δ²` of [`plate_solution`]. With `a(x) = x²(1−x)²` and `b(y)` likewise,
/// `Δ²(ab) = a⁗b + 2a″b″ + ab⁗`, `a″ = 2 − 12x + 12x²`, `a⁗ = 24`.
pub fn plate_forcing(p: Point) -> f64 {
    let [x, y] = p;
    let a = (x * (1.0 - x)).powi(2);
    let b = (y * (1.0 - y)).powi(2);
    let a2 = 2.0 - 12.0 * x + 12.0 * x * x;
    let b2 = 2.0 - 12.0 * y + 12.0 * y * y;
    24.0 * b + 2.0 * a2 * b2 + 24.0 * a
}

/// Error quadrature exactness: comfortably above what the element needs.
fn error_degree(family: ElementFamily) -> usize {
    (2 * family.degree() + 6).min(crate::quadrature::MAX_TRIANGLE_DEGREE)
}

/// Solves an SPD system with the requested solver.
pub fn solve(a: &SparseMatrix, b: &[f64], solver: SolverKind, tol: f64) -> Result<Vec<f64>> {
    match solver {
        SolverKind::Direct => Ok(EnvelopeCholesky::factor(a)?.solve(b)),
        SolverKind::Cg => Ok(cg_solve_detailed(a, b, tol)?.solution),
    }
}

/// Assembles `form`, applies boundary conditions, solves and returns the
/// (un-scaled) coefficient vector.
pub fn solve_problem(
    disc: &Discretization,
    form: Form,
    forcing: &dyn Fn(Point) -> f64,
    bc: Option<BoundarySpec>,
    config: &StudyConfig,
) -> Result<Vec<f64>> {
    let s = if config.scaled { Some(disc.scaling()?) } else { None };
    let mut a = disc.assemble(form, s.as_ref())?;
    let mut b = disc.assemble_load(forcing, error_degree(disc.family), s.as_ref())?;
    if let Some(bc) = bc {
        apply_dirichlet(&mut a, &mut b, &disc.constrained_dofs(bc))?;
    }
    let x = solve(&a, &b, config.solver, config.tol)?;
    Ok(match s {
        Some(s) => s.apply_inverse(&x),
        None => x,
    })
}

fn error_study(
    family: ElementFamily,
    study: StudyKind,
    config: &StudyConfig,
    form: Form,
    forcing: &dyn Fn(Point) -> f64,
    exact: &dyn Fn(Point) -> f64,
    bc: Option<BoundarySpec>,
) -> Result<StudyResult> {
    check_ns(&config.ns)?;
    let mut dofs = Vec::new();
    let mut values = Vec::new();
    for &n in &config.ns {
        let disc = Discretization::new(family, n)?;
        let u = solve_problem(&disc, form, forcing, bc, config)?;
        dofs.push(disc.num_dofs());
        values.push(disc.l2_error(&u, exact, error_degree(family))?);
    }
    Ok(StudyResult {
        family,
        study,
        metric: "l2_error".into(),
        scaled: config.scaled,
        ns: config.ns.clone(),
        dofs,
        values,
    })
}

/// L² projection of `sin(πx) sin(2πy)`.
pub fn run_projection(family: ElementFamily, config: &StudyConfig) -> Result<StudyResult> {
    error_study(
        family,
        StudyKind::Projection,
        config,
        Form::Mass,
        &projection_solution,
        &projection_solution,
        None,
    )
}

/// `-Δu = f` with homogeneous Dirichlet conditions.
pub fn run_laplace(family: ElementFamily, config: &StudyConfig) -> Result<StudyResult> {
    if family == ElementFamily::Morley {
        return Err(Error::InvalidInput("the Morley element is not H¹-conforming".into()));
    }
    error_study(
        family,
        StudyKind::Laplace,
        config,
        Form::Stiffness,
        &laplace_forcing,
        &laplace_solution,
        Some(BoundarySpec::Dirichlet),
    )
}

/// Clamped plate `Δ²u = f`.
pub fn run_plate(family: ElementFamily, config: &StudyConfig) -> Result<StudyResult> {
    if !matches!(family, ElementFamily::Morley | ElementFamily::Argyris | ElementFamily::Bell) {
        return Err(Error::InvalidInput(format!("the {family} element is not suited to the plate problem")));
    }
    error_study(
        family,
        StudyKind::Plate,
        config,
        Form::Plate(PLATE_POISSON_RATIO),
        &plate_forcing,
        &plate_solution,
        Some(BoundarySpec::Clamped),
    )
}

/// Runs a study by kind; conditioning uses `config.ns` and `config.scaled`.
pub fn run_study(kind: StudyKind, family: ElementFamily, config: &StudyConfig) -> Result<StudyResult> {
    match kind {
        StudyKind::Conditioning => run_conditioning(family, &config.ns, config.scaled),
        StudyKind::Projection => run_projection(family, config),
        StudyKind::Laplace => run_laplace(family, config),
        StudyKind::Plate => run_plate(family, config),
    }
}

/// CSV with columns `family,N,dofs,metric,value`: the metric per `N`, the
/// successive rate ending at that `N`, and the fitted rate on the last row.
pub fn results_csv(results: &[StudyResult]) -> Result<String> {
    let mut out = String::from("family,N,dofs,metric,value\n");
    for r in results {
        let rates = r.successive_rates();
        for (k, (&n, &d)) in r.ns.iter().zip(&r.dofs).enumerate() {
            writeln!(out, "{},{},{},{},{:e}", r.family, n, d, r.metric, r.values[k]).expect("write to string");
            if k > 0 {
                writeln!(out, "{},{},{},rate,{:.6}", r.family, n, d, rates[k - 1]).expect("write to string");
            }
        }
        if r.ns.len() >= 2 {
            let last = r.ns.len() - 1;
            writeln!(out, "{},{},{},fitted_rate,{:.6}", r.family, r.ns[last], r.dofs[last], r.fitted_rate()?)
                .expect("write to string");
        }
    }
    Ok(out)
}

fn plot_script(csv_name: &str, metric: &str) -> String {
    format!(
        r#"import csv
import collections
import matplotlib.pyplot as plt

data = collections.defaultdict(list)
with open("{csv_name}") as f:
    for row in csv.DictReader(f):
        if row["metric"] == "{metric}":
            data[row["family"]].append((int(row["N"]), float(row["value"])))

for family, pts in sorted(data.items()):
    pts.sort()
    plt.loglog([p[0] for p in pts], [p[1] for p in pts], "o-", label=family)
plt.xlabel("N")
plt.ylabel("{metric}")
plt.legend()
plt.grid(True, which="both", alpha=0.3)
plt.savefig("{csv_name}".replace(".csv", ".png"), dpi=150)
"#
    )
}

/// Writes `<stem>.csv` and `<stem>_plot.py` into `dir`.
pub fn emit_report(results: &[StudyResult], dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
    let io = |e: std::io::Error| Error::InvalidInput(format!("cannot write report: {e}"));
    fs::create_dir_all(dir).map_err(io)?;
    let csv_path = dir.join(format!("{stem}.csv"));
    let plot_path = dir.join(format!("{stem}_plot.py"));
    fs::write(&csv_path, results_csv(results)?).map_err(io)?;
    let metric = results.first().map(|r| r.metric.as_str()).unwrap_or("l2_error");
    fs::write(&plot_path, plot_script(&format!("{stem}.csv"), metric)).map_err(io)?;
    Ok(vec![csv_path, plot_path])
}
