use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hspatch::analysis::{
    continuity_check, ContinuityReport, ContinuityTolerances, DegreeAudit, Side,
};
use hspatch::batch;
use hspatch::hs::{
    constraint_report, tangent_residual, CoordInput, HsPatch, HsPatchInput, Policy, CORNER_SLOTS,
};
use hspatch::mesh::{export_obj_set, TessPattern, TriangleMesh};
use hspatch::{par, Basis, Exec, GeometricPatch};
use serde::Serialize;

use crate::document::{
    parse_adjacency, parse_document, write_document, Adjacency, DocBasis, PatchData,
    PatchSetDocument,
};
use crate::error::CliError;
use crate::teapot::{parse_teapot, TeapotDocument};

const AXES: [&str; 3] = ["x", "y", "z"];

#[derive(Debug, Parser)]
#[command(
    name = "hspatch",
    version,
    about = "Build, check, convert and mesh HS-patches"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Relative tolerance for feasibility and degree tests.
    #[arg(long, global = true, env = "HSPATCH_TOL", default_value_t = 1e-9)]
    pub tol: f64,
    /// Output file (a directory for demo-teapot). Defaults to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print reports as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Run on a single thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report the tangent condition of every patch; exit 1 if any coordinate fails.
    Check { input: PathBuf },
    /// Complete twists and write a Hermite document.
    Build {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = PolicyArg::Strict)]
        policy: PolicyArg,
    },
    /// Rewrite a document in another basis.
    Convert {
        input: PathBuf,
        #[arg(long, value_enum)]
        to: BasisArg,
    },
    /// Triangulate every patch and write OBJ.
    Tessellate {
        input: PathBuf,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, value_enum, default_value_t = PatternArg::DiagNe)]
        pattern: PatternArg,
    },
    /// Degrees of the patch along grid lines and diagonals; exit 1 if any exceeds 3.
    Audit {
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        grid: usize,
    },
    /// C0/C1/G1 checks across shared sides; exit 1 if any pair is not G1.
    Continuity {
        input: PathBuf,
        /// Adjacency list; defaults to the one stored in the document.
        #[arg(long)]
        adjacency: Option<PathBuf>,
        #[arg(long, default_value_t = 33)]
        samples: usize,
        /// Largest tangent-plane angle accepted as G1, in radians.
        #[arg(long, default_value_t = 1e-6)]
        angle_tol: f64,
    },
    /// Convert a Bézier teapot file, repair tangents and mesh it.
    DemoTeapot {
        teapot: PathBuf,
        #[arg(long, value_enum, default_value_t = PolicyArg::Project)]
        policy: PolicyArg,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, value_enum, default_value_t = PatternArg::DiagNe)]
        pattern: PatternArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Strict,
    Project,
}

impl From<PolicyArg> for Policy {
    fn from(p: PolicyArg) -> Policy {
        match p {
            PolicyArg::Strict => Policy::Strict,
            PolicyArg::Project => Policy::Project,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Hermite,
    Bezier,
    Bspline,
}

impl From<BasisArg> for Basis {
    fn from(b: BasisArg) -> Basis {
        match b {
            BasisArg::Hermite => Basis::Hermite,
            BasisArg::Bezier => Basis::Bezier,
            BasisArg::Bspline => Basis::BSpline,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PatternArg {
    DiagNe,
    DiagNw,
    Alternating,
}

impl From<PatternArg> for TessPattern {
    fn from(p: PatternArg) -> TessPattern {
        match p {
            PatternArg::DiagNe => TessPattern::DiagNE,
            PatternArg::DiagNw => TessPattern::DiagNW,
            PatternArg::Alternating => TessPattern::Alternating,
        }
    }
}

/// What a command printed and how the process should exit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn status(ok: bool, stdout: String) -> Self {
        Outcome {
            code: if ok { 0 } else { 1 },
            stdout,
            stderr: String::new(),
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let c = &cli.common;
    if !(c.tol.is_finite() && c.tol >= 0.0) {
        return Err(CliError::Usage(format!(
            "--tol must be a non-negative number, got {}",
            c.tol
        )));
    }
    let exec = if c.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    match &cli.command {
        Command::Check { input } => cmd_check(&load_document(input)?, c, exec),
        Command::Build { input, policy } => {
            cmd_build(&load_document(input)?, (*policy).into(), c, exec)
        }
        Command::Convert { input, to } => {
            cmd_convert(&load_document(input)?, (*to).into(), c, exec)
        }
        Command::Tessellate { input, n, pattern } => {
            cmd_tessellate(&load_document(input)?, *n, (*pattern).into(), c, exec)
        }
        Command::Audit { input, grid } => cmd_audit(&load_document(input)?, *grid, c, exec),
        Command::Continuity {
            input,
            adjacency,
            samples,
            angle_tol,
        } => {
            let doc = load_document(input)?;
            let adjacency = match adjacency {
                Some(path) => {
                    parse_adjacency(&read(path)?, &doc).map_err(|source| CliError::Parse {
                        path: path.clone(),
                        source,
                    })?
                }
                None => doc.adjacency.clone(),
            };
            cmd_continuity(&doc, &adjacency, *samples, *angle_tol, c, exec)
        }
        Command::DemoTeapot {
            teapot,
            policy,
            n,
            pattern,
        } => {
            let doc = parse_teapot(&read(teapot)?).map_err(|source| CliError::Parse {
                path: teapot.clone(),
                source,
            })?;
            cmd_demo_teapot(&doc, (*policy).into(), *n, (*pattern).into(), c, exec)
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_owned(),
        source,
    })
}

pub fn load_document(path: &Path) -> Result<PatchSetDocument, CliError> {
    parse_document(&read(path)?).map_err(|source| CliError::Parse {
        path: path.to_owned(),
        source,
    })
}

/// Send `text` to `--out` if given (with a one-line note on stdout), else to stdout.
fn emit(common: &Common, text: String, what: &str) -> Result<String, CliError> {
    match &common.out {
        Some(path) => {
            write(path, &text)?;
            Ok(format!("wrote {what} to {}\n", path.display()))
        }
        None => Ok(text),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn sci(x: f64) -> String {
    format!("{x:.6e}")
}

/// HS inputs of every patch. Geometric patches are converted to Hermite and
/// their twists dropped.
pub fn hs_inputs(doc: &PatchSetDocument, exec: Exec) -> Vec<HsPatchInput> {
    par::map(exec, &doc.patches, |e| match &e.data {
        PatchData::HsInput(h) => *h,
        PatchData::Geometric(g) => {
            HsPatchInput::from_patch(&hspatch::convert::convert_patch(g, Basis::Hermite))
                .expect("converted patch is Hermite")
        }
    })
}

/// Hermite form of every patch. HS inputs are built under the strict policy.
pub fn hermite_patches(
    doc: &PatchSetDocument,
    tol: f64,
    exec: Exec,
) -> Result<Vec<GeometricPatch>, CliError> {
    match doc.basis {
        DocBasis::Geometric(_) => {
            let patches: Vec<GeometricPatch> = doc
                .patches
                .iter()
                .map(|e| match &e.data {
                    PatchData::Geometric(g) => *g,
                    PatchData::HsInput(_) => unreachable!("document kinds are uniform"),
                })
                .collect();
            Ok(batch::convert_many(&patches, Basis::Hermite, exec))
        }
        DocBasis::HsInput => {
            let inputs = hs_inputs(doc, exec);
            let built = batch::build_many(&inputs, Policy::Strict, tol, exec);
            collect_built(doc, built).map(|v| v.into_iter().map(|h| h.patch).collect())
        }
    }
}

fn collect_built(
    doc: &PatchSetDocument,
    built: Vec<hspatch::Result<HsPatch>>,
) -> Result<Vec<HsPatch>, CliError> {
    built
        .into_iter()
        .enumerate()
        .map(|(k, r)| {
            r.map_err(|e| match e {
                hspatch::Error::Infeasible { residuals } => CliError::Infeasible {
                    patch: doc.label(k),
                    residuals,
                },
                e => e.into(),
            })
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct CoordRow {
    axis: &'static str,
    phi: f64,
    a: f64,
    b: f64,
    c: f64,
    residual: f64,
    alpha: Option<f64>,
    beta: Option<f64>,
    scale: f64,
    feasible: bool,
}

#[derive(Debug, Serialize)]
struct CheckRow {
    patch: String,
    coords: Vec<CoordRow>,
    feasible: bool,
}

#[derive(Debug, Serialize)]
struct CheckReport {
    patches: Vec<CheckRow>,
    feasible: bool,
}

fn check_rows(
    doc: &PatchSetDocument,
    inputs: &[HsPatchInput],
    tol: f64,
    exec: Exec,
) -> Vec<CheckRow> {
    let reports = par::map(exec, inputs, |i| constraint_report(i, tol));
    reports
        .iter()
        .zip(inputs)
        .enumerate()
        .map(|(k, (r, input))| CheckRow {
            patch: doc.label(k),
            coords: (0..3)
                .map(|c| {
                    let cr = r.coords[c];
                    CoordRow {
                        axis: AXES[c],
                        phi: cr.phi,
                        a: cr.a,
                        b: cr.b,
                        c: cr.c,
                        residual: cr.residual,
                        alpha: cr.alpha,
                        beta: cr.beta,
                        scale: input.coords[c].scale(),
                        feasible: cr.feasible,
                    }
                })
                .collect(),
            feasible: r.feasible(),
        })
        .collect()
}

pub fn cmd_check(doc: &PatchSetDocument, common: &Common, exec: Exec) -> Result<Outcome, CliError> {
    if matches!(doc.basis, DocBasis::Geometric(b) if b != Basis::Hermite) {
        return Err(CliError::Usage(format!(
            "check expects a hermite or hs-input document, got {}",
            doc.basis.name()
        )));
    }
    let rows = check_rows(doc, &hs_inputs(doc, exec), common.tol, exec);
    let report = CheckReport {
        feasible: rows.iter().all(|r| r.feasible),
        patches: rows,
    };
    let text = if common.json {
        to_json(&report)
    } else {
        let mut s = String::new();
        for row in &report.patches {
            let _ = writeln!(s, "patch {}", row.patch);
            for c in &row.coords {
                let opt = |x: Option<f64>| x.map_or("undefined".to_string(), sci);
                let _ = writeln!(
                    s,
                    "  {}: phi={} a={} b={} c={} residual={} alpha={} beta={} {}",
                    c.axis,
                    sci(c.phi),
                    sci(c.a),
                    sci(c.b),
                    sci(c.c),
                    sci(c.residual),
                    opt(c.alpha),
                    opt(c.beta),
                    if c.feasible { "feasible" } else { "INFEASIBLE" }
                );
            }
        }
        let bad = report.patches.iter().filter(|r| !r.feasible).count();
        let _ = writeln!(s, "{} patches, {bad} infeasible", report.patches.len());
        s
    };
    Ok(Outcome::status(
        report.feasible,
        emit(common, text, "report")?,
    ))
}

#[derive(Debug, Serialize)]
struct BuildRow {
    patch: String,
    residuals: [f64; 3],
    repaired: bool,
}

pub fn cmd_build(
    doc: &PatchSetDocument,
    policy: Policy,
    common: &Common,
    exec: Exec,
) -> Result<Outcome, CliError> {
    let inputs = hs_inputs(doc, exec);
    let built = collect_built(doc, batch::build_many(&inputs, policy, common.tol, exec))?;
    let out = doc.with_data(
        DocBasis::Geometric(Basis::Hermite),
        built
            .iter()
            .map(|h| PatchData::Geometric(h.patch))
            .collect(),
    );
    let rows: Vec<BuildRow> = built
        .iter()
        .enumerate()
        .map(|(k, h)| BuildRow {
            patch: doc.label(k),
            residuals: h.report.residuals(),
            repaired: h.repaired,
        })
        .collect();
    let summary = if common.json {
        to_json(&rows)
    } else {
        let mut s = String::new();
        for r in &rows {
            let _ = writeln!(
                s,
                "patch {}: residuals {} {} {}{}",
                r.patch,
                sci(r.residuals[0]),
                sci(r.residuals[1]),
                sci(r.residuals[2]),
                if r.repaired {
                    " (tangents projected)"
                } else {
                    ""
                }
            );
        }
        s
    };
    let stdout = emit(common, write_document(&out), "document")?;
    Ok(Outcome {
        code: 0,
        stdout,
        stderr: summary,
    })
}

pub fn cmd_convert(
    doc: &PatchSetDocument,
    to: Basis,
    common: &Common,
    exec: Exec,
) -> Result<Outcome, CliError> {
    if doc.basis == DocBasis::HsInput {
        return Err(CliError::Usage(
            "convert expects a hermite, bezier or bspline document; run build first".into(),
        ));
    }
    let patches: Vec<GeometricPatch> = doc
        .patches
        .iter()
        .map(|e| match &e.data {
            PatchData::Geometric(g) => *g,
            PatchData::HsInput(_) => unreachable!("document kinds are uniform"),
        })
        .collect();
    let converted = batch::convert_many(&patches, to, exec);
    let out = doc.with_data(
        DocBasis::Geometric(to),
        converted.into_iter().map(PatchData::Geometric).collect(),
    );
    Ok(Outcome::status(
        true,
        emit(common, write_document(&out), "document")?,
    ))
}

pub fn cmd_tessellate(
    doc: &PatchSetDocument,
    n: usize,
    pattern: TessPattern,
    common: &Common,
    exec: Exec,
) -> Result<Outcome, CliError> {
    let patches = hermite_patches(doc, common.tol, exec)?;
    let meshes = batch::tessellate_many(&patches, n, pattern, exec)?;
    Ok(Outcome::status(
        true,
        emit(common, export_obj_set(&meshes), "mesh")?,
    ))
}

#[derive(Debug, Serialize)]
struct AuditRow {
    patch: String,
    horizontal: usize,
    vertical: usize,
    slope_up: usize,
    slope_down: usize,
    max: usize,
}

pub fn cmd_audit(
    doc: &PatchSetDocument,
    grid: usize,
    common: &Common,
    exec: Exec,
) -> Result<Outcome, CliError> {
    let patches = hermite_patches(doc, common.tol, exec)?;
    let audits: Vec<DegreeAudit> = batch::audit_many(&patches, grid, common.tol, exec)
        .into_iter()
        .collect::<hspatch::Result<_>>()?;
    let rows: Vec<AuditRow> = audits
        .iter()
        .enumerate()
        .map(|(k, a)| AuditRow {
            patch: doc.label(k),
            horizontal: a.horizontal,
            vertical: a.vertical,
            slope_up: a.slope_up,
            slope_down: a.slope_down,
            max: a.max(),
        })
        .collect();
    let ok = rows.iter().all(|r| r.max <= 3);
    let text = if common.json {
        to_json(&rows)
    } else {
        let mut s = String::new();
        for r in &rows {
            let _ = writeln!(
                s,
                "patch {}: horizontal {} vertical {} slope-up {} slope-down {}",
                r.patch, r.horizontal, r.vertical, r.slope_up, r.slope_down
            );
        }
        let _ = writeln!(
            s,
            "grid {grid}: {}",
            if ok {
                "all degrees <= 3"
            } else {
                "degree above 3 found"
            }
        );
        s
    };
    Ok(Outcome::status(ok, emit(common, text, "report")?))
}

#[derive(Debug, Serialize)]
struct ContinuityRow {
    a: String,
    side_a: &'static str,
    b: String,
    side_b: &'static str,
    reversed: bool,
    max_c0_gap: f64,
    max_c1_mismatch: f64,
    max_g1_angle: f64,
    samples: usize,
    degenerate_normals: usize,
    c0: bool,
    c1: bool,
    g1: bool,
}

pub fn cmd_continuity(
    doc: &PatchSetDocument,
    adjacency: &[Adjacency],
    samples: usize,
    angle_tol: f64,
    common: &Common,
    exec: Exec,
) -> Result<Outcome, CliError> {
    let patches = hermite_patches(doc, common.tol, exec)?;
    let tols = ContinuityTolerances {
        c0: common.tol,
        c1: common.tol,
        g1: angle_tol,
    };
    let reports: Vec<ContinuityReport> = par::map(exec, adjacency, |adj| {
        let (ea, eb) = adj.edges();
        let a = doc.resolve(&adj.a).expect("validated at parse time");
        let b = doc.resolve(&adj.b).expect("validated at parse time");
        continuity_check(&patches[a], ea, &patches[b], eb, samples, tols)
    })
    .into_iter()
    .collect::<hspatch::Result<_>>()?;

    let rows: Vec<ContinuityRow> = adjacency
        .iter()
        .zip(&reports)
        .map(|(adj, r)| ContinuityRow {
            a: doc.label(doc.resolve(&adj.a).expect("validated")),
            side_a: Side::from(adj.side_a).name(),
            b: doc.label(doc.resolve(&adj.b).expect("validated")),
            side_b: Side::from(adj.side_b).name(),
            reversed: adj.reversed,
            max_c0_gap: r.max_c0_gap,
            max_c1_mismatch: r.max_c1_mismatch,
            max_g1_angle: r.max_g1_angle,
            samples: r.samples,
            degenerate_normals: r.degenerate_normals,
            c0: r.c0_pass,
            c1: r.c1_pass,
            g1: r.g1_pass,
        })
        .collect();
    let ok = rows.iter().all(|r| r.g1);
    let text = if common.json {
        to_json(&rows)
    } else {
        let mut s = String::new();
        let flag = |b: bool| if b { "yes" } else { "no" };
        for r in &rows {
            let _ = writeln!(
                s,
                "{}.{} ~ {}.{}{}: c0 gap {} ({}), c1 mismatch {} ({}), g1 angle {} ({}), {} degenerate normals",
                r.a,
                r.side_a,
                r.b,
                r.side_b,
                if r.reversed { " reversed" } else { "" },
                sci(r.max_c0_gap),
                flag(r.c0),
                sci(r.max_c1_mismatch),
                flag(r.c1),
                sci(r.max_g1_angle),
                flag(r.g1),
                r.degenerate_normals
            );
        }
        let _ = writeln!(
            s,
            "{} pairs, {} not G1",
            rows.len(),
            rows.iter().filter(|r| !r.g1).count()
        );
        s
    };
    Ok(Outcome::status(ok, emit(common, text, "report")?))
}

/// Per-patch outcome of the teapot pipeline. Patch numbers are one-based.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TeapotPatchReport {
    pub patch: usize,
    /// Residuals of the converted Bézier data, before any repair.
    pub residuals: [f64; 3],
    pub scales: [f64; 3],
    pub feasible: bool,
    pub repaired: bool,
    /// Residuals of the built patch; absent when the build was rejected.
    pub post_residuals: Option<[f64; 3]>,
    /// Whether the built patch has bit-identical corners to the converted one.
    pub corners_unchanged: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeapotRun {
    /// Hermite form of each Bézier patch, as converted.
    pub hermite: Vec<GeometricPatch>,
    pub reports: Vec<TeapotPatchReport>,
    /// Completed HS-patches; `None` when the strict policy rejected a patch.
    pub built: Option<Vec<GeometricPatch>>,
    pub meshes: Vec<TriangleMesh>,
    pub obj: Option<String>,
}

fn corner_bits(x: &hspatch::Mat4) -> [u64; 4] {
    CORNER_SLOTS.map(|(i, j)| x.0[i][j].to_bits())
}

/// Convert, report, build and mesh every teapot patch.
pub fn run_teapot(
    doc: &TeapotDocument,
    policy: Policy,
    n: usize,
    pattern: TessPattern,
    tol: f64,
    exec: Exec,
) -> Result<TeapotRun, CliError> {
    let hermite = batch::convert_many(&doc.bezier_patches(), Basis::Hermite, exec);
    let inputs: Vec<HsPatchInput> = hermite
        .iter()
        .map(|p| HsPatchInput::from_patch(p).expect("converted patch is Hermite"))
        .collect();
    let built = batch::build_many(&inputs, policy, tol, exec);
    let mut reports: Vec<TeapotPatchReport> = inputs
        .iter()
        .enumerate()
        .map(|(k, input)| {
            let r = constraint_report(input, tol);
            TeapotPatchReport {
                patch: k + 1,
                residuals: r.residuals(),
                scales: input.coords.map(|c| c.scale()),
                feasible: r.feasible(),
                repaired: false,
                post_residuals: None,
                corners_unchanged: None,
            }
        })
        .collect();

    let mut patches = Vec::with_capacity(built.len());
    for ((report, result), conv) in reports.iter_mut().zip(built).zip(&hermite) {
        match result {
            Ok(h) => {
                report.repaired = h.repaired;
                report.post_residuals = Some(h.patch.coords().map(|x| {
                    let c = CoordInput::from_hermite(x);
                    tangent_residual(&c.corners, &c.tangents)
                }));
                let same = h
                    .patch
                    .coords()
                    .iter()
                    .zip(conv.coords())
                    .all(|(a, b)| corner_bits(a) == corner_bits(b));
                report.corners_unchanged = Some(same);
                patches.push(h.patch);
            }
            Err(hspatch::Error::Infeasible { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    if patches.len() < hermite.len() {
        return Ok(TeapotRun {
            hermite,
            reports,
            built: None,
            meshes: Vec::new(),
            obj: None,
        });
    }
    let meshes = batch::tessellate_many(&patches, n, pattern, exec)?;
    let obj = export_obj_set(&meshes);
    Ok(TeapotRun {
        hermite,
        reports,
        built: Some(patches),
        meshes,
        obj: Some(obj),
    })
}

#[derive(Debug, Serialize)]
struct TeapotSummary<'a> {
    patches: &'a [TeapotPatchReport],
    infeasible_inputs: usize,
    repaired: usize,
    built: bool,
    vertices: usize,
    faces: usize,
    groups: usize,
}

pub fn cmd_demo_teapot(
    doc: &TeapotDocument,
    policy: Policy,
    n: usize,
    pattern: TessPattern,
    common: &Common,
    exec: Exec,
) -> Result<Outcome, CliError> {
    let run = run_teapot(doc, policy, n, pattern, common.tol, exec)?;
    let summary = TeapotSummary {
        patches: &run.reports,
        infeasible_inputs: run.reports.iter().filter(|r| !r.feasible).count(),
        repaired: run.reports.iter().filter(|r| r.repaired).count(),
        built: run.built.is_some(),
        vertices: run.meshes.iter().map(|m| m.vertices.len()).sum(),
        faces: run.meshes.iter().map(|m| m.triangles.len()).sum(),
        groups: run.meshes.iter().filter(|m| !m.is_empty()).count(),
    };
    let text = if common.json {
        to_json(&summary)
    } else {
        let mut s = String::new();
        for r in &run.reports {
            let _ = write!(
                s,
                "patch {:2}: residuals {} {} {} {}",
                r.patch,
                sci(r.residuals[0]),
                sci(r.residuals[1]),
                sci(r.residuals[2]),
                if r.feasible { "feasible" } else { "infeasible" }
            );
            if let (Some(post), Some(same)) = (r.post_residuals, r.corners_unchanged) {
                let worst = post.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
                let _ = write!(
                    s,
                    "; built, max residual {}, corners {}",
                    sci(worst),
                    if same { "unchanged" } else { "CHANGED" }
                );
            }
            s.push('\n');
        }
        let _ = writeln!(
            s,
            "{} patches, {} infeasible as given, {} repaired",
            run.reports.len(),
            summary.infeasible_inputs,
            summary.repaired
        );
        if summary.built {
            let _ = writeln!(
                s,
                "mesh: {} groups, {} vertices, {} faces",
                summary.groups, summary.vertices, summary.faces
            );
        } else {
            let _ = writeln!(
                s,
                "strict policy rejected {} patches; no mesh",
                summary.infeasible_inputs
            );
        }
        s
    };

    if let Some(dir) = &common.out {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Write {
            path: dir.clone(),
            source,
        })?;
        let report_name = if common.json {
            "report.json"
        } else {
            "report.txt"
        };
        write(&dir.join(report_name), &text)?;
        if let (Some(obj), Some(built)) = (&run.obj, &run.built) {
            write(&dir.join("teapot.obj"), obj)?;
            write(
                &dir.join("teapot-hermite.json"),
                &write_document(&PatchSetDocument::geometric(
                    Basis::Hermite,
                    built.iter().copied(),
                )),
            )?;
        }
    }
    Ok(Outcome::status(run.built.is_some(), text))
}
