//! Command-line interface: argument parsing, dispatch, and the per-command
//! reports and data files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::classify::{
    self, admissible_energy_range, turning_points, ClassifyOpts, FlowParams, RationalWitness,
};
use crate::closed_form;
use crate::error::{Error, Result};
use crate::investigate;
use crate::mesh::{self, MeshOpts, MeshSurface};
use crate::numerics::QuadratureSpec;
use crate::profile::{self, IntegrateOpts};
use crate::report::{fmt_f64, write_csv, write_json, CsvMeta};
use crate::space::{SpaceKind, SpaceParams};

#[derive(Debug, Parser)]
#[command(
    name = "rotcmc",
    version,
    about = "Rotationally invariant CMC surfaces in Berger spheres and Sl(2,R)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    Berger,
    Sl2r,
}

#[derive(Debug, Args)]
pub struct SpaceOpts {
    /// ambient space family
    #[arg(long, value_enum, default_value = "berger")]
    pub space: SpaceArg,
    /// base curvature (positive for berger, negative for sl2r)
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: f64,
    /// bundle curvature (nonzero)
    #[arg(long)]
    pub tau: f64,
}

impl SpaceOpts {
    pub fn params(&self) -> Result<SpaceParams> {
        let kind = match self.space {
            SpaceArg::Berger => SpaceKind::BergerSphere,
            SpaceArg::Sl2r => SpaceKind::Sl2R,
        };
        SpaceParams::new(kind, self.kappa, self.tau)
    }
}

#[derive(Debug, Args)]
pub struct OutOpts {
    /// output file (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Obj,
}

/// "lo:hi:n" grid specification.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl std::str::FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid must be lo:hi:n, got {s}"));
        }
        let lo: f64 = parts[0].parse().map_err(|e| format!("bad lo: {e}"))?;
        let hi: f64 = parts[1].parse().map_err(|e| format!("bad hi: {e}"))?;
        let n: usize = parts[2].parse().map_err(|e| format!("bad n: {e}"))?;
        if !(lo < hi) || n < 2 {
            return Err("grid needs lo < hi and n >= 2".into());
        }
        Ok(GridSpec { lo, hi, n })
    }
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the surface with invariants (H, E)
    Classify {
        #[command(flatten)]
        space: SpaceOpts,
        #[arg(long = "H")]
        h: f64,
        #[arg(long = "E", allow_hyphen_values = true)]
        e: f64,
        /// rationality tolerance of the compactness witness
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// largest denominator searched for the witness
        #[arg(long, default_value_t = 10_000)]
        qmax: u64,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Integrate the generating curve and emit (s, x, y, alpha, C, E_drift)
    Profile {
        #[command(flatten)]
        space: SpaceOpts,
        #[arg(long = "H")]
        h: f64,
        #[arg(long = "E", allow_hyphen_values = true)]
        e: f64,
        /// arc length to integrate (default: six turning points)
        #[arg(long)]
        span: Option<f64>,
        /// sample spacing bound
        #[arg(long, default_value_t = 0.02)]
        max_step: f64,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Period T(H, E) of the profile oscillation with rationality witness
    Period {
        #[command(flatten)]
        space: SpaceOpts,
        #[arg(long = "H")]
        h: f64,
        #[arg(long = "E", allow_hyphen_values = true)]
        e: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        qmax: u64,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Closed-form CMC sphere report (domain, pole angle, embeddedness,
    /// area, volume) or its profile as CSV
    Sphere {
        #[command(flatten)]
        space: SpaceOpts,
        #[arg(long = "H")]
        h: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// profile sample count (csv format)
        #[arg(long, default_value = "0.0:1.0:200")]
        grid: GridSpec,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Enclosed volume of the Berger CMC sphere (both sides) and torus data
    Volume {
        #[command(flatten)]
        space: SpaceOpts,
        #[arg(long = "H")]
        h: f64,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Scan the minimal-unduloid period T(0, E) for a 2 pi crossing
    LawsonScan {
        #[command(flatten)]
        space: SpaceOpts,
        /// energy grid (defaults to a dense grid on (0, sqrt(kappa)/4))
        #[arg(long)]
        grid: Option<GridSpec>,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Bisect the tau where embedded compact minimal unduloids disappear
    Tau0 {
        /// base curvature
        #[arg(long, default_value_t = 4.0)]
        kappa: f64,
        /// bisection bracket
        #[arg(long, default_value = "0.40:0.80:2")]
        grid: GridSpec,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Map the non-embedded region of CMC spheres over (tau, H)
    Embeddedness {
        #[command(flatten)]
        space: SpaceOpts,
        /// tau grid
        #[arg(long, default_value = "0.05:1.2:60")]
        grid: GridSpec,
        /// H grid
        #[arg(long, default_value = "0.01:4.0:120")]
        hgrid: GridSpec,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Sphere and torus area-volume families
    Isoperimetric {
        #[command(flatten)]
        space: SpaceOpts,
        /// H grid of both families
        #[arg(long, default_value = "0.0:6.0:400")]
        grid: GridSpec,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Export a surface mesh as OBJ
    Mesh {
        #[command(flatten)]
        space: SpaceOpts,
        /// surface type: sphere | torus | tube | great-sphere
        #[arg(long)]
        surface: String,
        #[arg(long = "H", default_value_t = 0.0)]
        h: f64,
        #[arg(long = "E", default_value_t = 0.0, allow_hyphen_values = true)]
        e: f64,
        #[arg(long, default_value_t = 64)]
        nu: usize,
        #[arg(long, default_value_t = 64)]
        nv: usize,
        /// profile oscillations for tube surfaces
        #[arg(long, default_value_t = 1)]
        periods: usize,
        /// check the exported triangles for self-intersections
        #[arg(long, default_value_t = false)]
        check_intersections: bool,
        /// output OBJ path
        #[arg(long)]
        out: PathBuf,
    },
    /// Regenerate the data behind all figures into a directory
    Figures {
        /// output directory
        #[arg(long)]
        out: PathBuf,
        /// smaller grids for quick runs
        #[arg(long, default_value_t = false)]
        quick: bool,
    },
}

fn open_out(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    match out {
        None => Ok(Box::new(std::io::stdout().lock())),
        Some(path) => {
            if let Some(dir) = path.parent() {
                if !dir.as_os_str().is_empty() {
                    fs::create_dir_all(dir)?;
                }
            }
            Ok(Box::new(fs::File::create(path)?))
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Classify { space, h, e, tol, qmax, out } => {
            let sp = space.params()?;
            let opts = ClassifyOpts { tol, qmax, quad: QuadratureSpec::default() };
            let report = classify_report(&FlowParams::new(h, e), &sp, &opts)?;
            write_json(&mut *open_out(&out.out)?, "classify", &report)
        }
        Command::Profile { space, h, e, span, max_step, out } => {
            let sp = space.params()?;
            cmd_profile(&sp, &FlowParams::new(h, e), span, max_step, &mut *open_out(&out.out)?)
        }
        Command::Period { space, h, e, tol, qmax, out } => {
            let sp = space.params()?;
            let fp = FlowParams::new(h, e);
            let t = classify::period(&fp, &sp, &QuadratureSpec::default())?;
            #[derive(Serialize)]
            struct PeriodReport {
                t_period: f64,
                t_over_pi: f64,
                compact: Option<RationalWitness>,
                band: classify::TurningBand,
            }
            let report = PeriodReport {
                t_period: t,
                t_over_pi: t / std::f64::consts::PI,
                compact: classify::compactness_test(t, tol, qmax),
                band: turning_points(&fp, &sp)?,
            };
            write_json(&mut *open_out(&out.out)?, "period", &report)
        }
        Command::Sphere { space, h, format, grid, out } => {
            let sp = space.params()?;
            cmd_sphere(&sp, h, format, &grid, &out.out)
        }
        Command::Volume { space, h, out } => {
            let sp = space.params()?;
            #[derive(Serialize)]
            struct VolumeReport {
                h: f64,
                sphere_volume: f64,
                sphere_volume_complement: f64,
                total_volume: f64,
                torus_area: f64,
                torus_volume: f64,
            }
            let vol = closed_form::sphere_volume(h, &sp)?;
            let total = closed_form::total_volume(&sp)?;
            let (torus_area, torus_volume) = closed_form::torus_area_volume(h, &sp)?;
            let report = VolumeReport {
                h,
                sphere_volume: vol,
                sphere_volume_complement: total - vol,
                total_volume: total,
                torus_area,
                torus_volume,
            };
            write_json(&mut *open_out(&out.out)?, "volume", &report)
        }
        Command::LawsonScan { space, grid, out } => {
            let sp = space.params()?;
            let grid_points = match grid {
                Some(g) => g.points(),
                None => investigate::default_lawson_grid(sp.kappa),
            };
            let report = investigate::lawson_scan_report(&sp, &grid_points)?;
            write_json(&mut *open_out(&out.out)?, "lawson_scan", &report)
        }
        Command::Tau0 { kappa, grid, out } => {
            #[derive(Serialize)]
            struct Tau0Report {
                kappa: f64,
                bracket: (f64, f64),
                tau0: f64,
                note: &'static str,
            }
            let tau0 = investigate::tau0_estimate(kappa, (grid.lo, grid.hi))?;
            let report = Tau0Report {
                kappa,
                bracket: (grid.lo, grid.hi),
                tau0,
                note: "computed transition of the period scan; the threshold itself is conjectural",
            };
            write_json(&mut *open_out(&out.out)?, "tau0", &report)
        }
        Command::Embeddedness { space, grid, hgrid, out } => {
            let sp = space.params()?;
            cmd_embeddedness(&sp, &grid, &hgrid, &mut *open_out(&out.out)?)
        }
        Command::Isoperimetric { space, grid, out } => {
            let sp = space.params()?;
            let pts = investigate::isoperimetric_profile(&sp, &grid.points())?;
            let meta = CsvMeta::new("isoperimetric").with_space(&sp).push("h_grid", format_args!(
                "{}:{}:{}",
                grid.lo, grid.hi, grid.n
            ));
            write_csv(
                &mut *open_out(&out.out)?,
                &meta,
                &["family", "H", "volume", "area"],
                pts.iter().map(|p| {
                    vec![
                        format!("{:?}", p.family),
                        fmt_f64(p.h),
                        fmt_f64(p.volume),
                        fmt_f64(p.area),
                    ]
                }),
            )
        }
        Command::Mesh { space, surface, h, e, nu, nv, periods, check_intersections, out } => {
            let sp = space.params()?;
            cmd_mesh(&sp, &surface, h, e, nu, nv, periods, check_intersections, &out)
        }
        Command::Figures { out, quick } => cmd_figures(&out, quick),
    }
}

#[derive(Serialize)]
struct ClassifyReport {
    h: f64,
    e: f64,
    admissible_range: classify::EnergyRange,
    band: classify::TurningBand,
    class: classify::SurfaceClass,
}

fn classify_report(fp: &FlowParams, sp: &SpaceParams, opts: &ClassifyOpts) -> Result<ClassifyReport> {
    Ok(ClassifyReport {
        h: fp.h,
        e: fp.e,
        admissible_range: admissible_energy_range(fp.h, sp),
        band: turning_points(fp, sp)?,
        class: classify::classify(fp, sp, opts)?,
    })
}

fn cmd_profile(
    sp: &SpaceParams,
    fp: &FlowParams,
    span: Option<f64>,
    max_step: f64,
    out: &mut dyn Write,
) -> Result<()> {
    let start = profile::default_start(fp, sp)?;
    let opts = IntegrateOpts {
        max_step,
        max_turnings: if span.is_none() { Some(6) } else { None },
        ..Default::default()
    };
    let curve = profile::integrate_profile(&start, fp, sp, span.unwrap_or(f64::INFINITY), &opts)?;
    let meta = CsvMeta::new("profile")
        .with_space(sp)
        .push("H", fp.h)
        .push("E", fp.e)
        .push("rtol", opts.rtol)
        .push("atol", opts.atol)
        .push("energy_tol", opts.energy_tol);
    let events_by_index: std::collections::HashMap<usize, String> = {
        let mut m: std::collections::HashMap<usize, Vec<String>> = Default::default();
        for (i, k) in &curve.events {
            m.entry(*i).or_default().push(format!("{k:?}"));
        }
        m.into_iter().map(|(i, ks)| (i, ks.join("+"))).collect()
    };
    write_csv(
        out,
        &meta,
        &["s", "x", "y", "alpha", "C", "E_drift", "event"],
        curve.samples.iter().enumerate().map(|(i, st)| {
            let c = profile::tilt_c(st.x, st.alpha, sp);
            let drift = profile::energy(st.x, st.alpha, fp.h, sp) - fp.e;
            vec![
                fmt_f64(st.s),
                fmt_f64(st.x),
                fmt_f64(st.y),
                fmt_f64(st.alpha),
                fmt_f64(c),
                fmt_f64(drift),
                events_by_index.get(&i).cloned().unwrap_or_default(),
            ]
        }),
    )
}

fn cmd_sphere(
    sp: &SpaceParams,
    h: f64,
    format: Format,
    grid: &GridSpec,
    out: &Option<PathBuf>,
) -> Result<()> {
    let profile = closed_form::sphere_profile(h, sp)?;
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct SphereReport {
                h: f64,
                half_domain: f64,
                y0: f64,
                embedded: bool,
                area: f64,
                volume: Option<f64>,
                volume_complement: Option<f64>,
            }
            let volume = closed_form::sphere_volume(h, sp).ok();
            let report = SphereReport {
                h,
                half_domain: profile.a,
                y0: profile.y0,
                embedded: profile.embedded,
                area: closed_form::sphere_area(h, sp)?,
                volume,
                volume_complement: volume.map(|v| closed_form::total_volume(sp).unwrap() - v),
            };
            write_json(&mut *open_out(out)?, "sphere", &report)
        }
        Format::Csv => {
            let meta = CsvMeta::new("sphere").with_space(sp).push("H", h);
            let xs: Vec<f64> = (0..grid.n)
                .map(|i| {
                    let f = i as f64 / (grid.n - 1) as f64;
                    match sp.kind {
                        SpaceKind::BergerSphere => profile.a * f,
                        SpaceKind::Sl2R => -profile.a * (1.0 - f),
                    }
                })
                .collect();
            write_csv(
                &mut *open_out(out)?,
                &meta,
                &["x", "y"],
                xs.iter().map(|&x| {
                    vec![fmt_f64(x), fmt_f64(closed_form::sphere_profile_y(x, h, sp).unwrap_or(f64::NAN))]
                }),
            )
        }
        Format::Obj => Err(Error::InvalidParams("sphere emits csv or json; use the mesh command for obj".into())),
    }
}

fn cmd_embeddedness(sp: &SpaceParams, grid: &GridSpec, hgrid: &GridSpec, out: &mut dyn Write) -> Result<()> {
    let region = investigate::embeddedness_region(sp.kind, sp.kappa, &grid.points(), &hgrid.points())?;
    let meta = CsvMeta::new("embeddedness")
        .with_space(sp)
        .push("tau_grid", format_args!("{}:{}:{}", grid.lo, grid.hi, grid.n))
        .push("h_grid", format_args!("{}:{}:{}", hgrid.lo, hgrid.hi, hgrid.n));
    let mut rows: Vec<Vec<String>> = Vec::new();
    for (i, &tau) in region.tau_grid.iter().enumerate() {
        for (j, &h) in region.h_grid.iter().enumerate() {
            let m = region.margin[i][j];
            rows.push(vec![
                "cell".into(),
                fmt_f64(tau),
                fmt_f64(h),
                fmt_f64(m),
                if m.is_nan() {
                    "no_sphere".into()
                } else if m > 0.0 {
                    "embedded".into()
                } else {
                    "immersed".into()
                },
            ]);
        }
    }
    for &(tau, h) in &region.boundary {
        rows.push(vec!["boundary".into(), fmt_f64(tau), fmt_f64(h), "0".into(), "boundary".into()]);
    }
    write_csv(out, &meta, &["kind", "tau", "H", "y0_plus_pi", "status"], rows.into_iter())
}

#[allow(clippy::too_many_arguments)]
fn cmd_mesh(
    sp: &SpaceParams,
    surface: &str,
    h: f64,
    e: f64,
    nu: usize,
    nv: usize,
    periods: usize,
    check_intersections: bool,
    out: &Path,
) -> Result<()> {
    let kind = match surface {
        "sphere" => MeshSurface::Sphere,
        "torus" => MeshSurface::CliffordTorus,
        "tube" => MeshSurface::ProfileTube,
        "great-sphere" => MeshSurface::GreatSphere,
        other => {
            return Err(Error::InvalidParams(format!(
                "unknown surface {other}; expected sphere | torus | tube | great-sphere"
            )))
        }
    };
    let fp = FlowParams::new(h, e);
    let opts = MeshOpts { nu, nv, periods, pole: None };
    let m = mesh::build_mesh(kind, &fp, sp, &opts)?;
    let mut header = vec![
        ("surface".to_string(), surface.to_string()),
        ("kappa".to_string(), sp.kappa.to_string()),
        ("tau".to_string(), sp.tau.to_string()),
        ("H".to_string(), h.to_string()),
        ("E".to_string(), e.to_string()),
        ("euler_characteristic".to_string(), m.euler_characteristic().to_string()),
    ];
    if check_intersections {
        header.push(("self_intersections".to_string(), mesh::self_intersections(&m).to_string()));
    }
    if let Some(dir) = out.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    mesh::write_obj(&mut fs::File::create(out)?, &m, &header)
}

/// Data files behind every figure: period curves for three tau values,
/// the two non-embedded regions, the four isoperimetric panels, and the
/// six profile-curve portraits, plus a manifest mapping file to figure.
fn cmd_figures(dir: &Path, quick: bool) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut manifest: Vec<serde_json::Value> = Vec::new();
    let kappa = 4.0;

    // 1) period of the minimal unduloid vs energy, three tau values
    for tau in [0.4, 0.57, 0.8] {
        let sp = SpaceParams::berger(kappa, tau)?;
        let n = if quick { 60 } else { 220 };
        let e_max = kappa.sqrt() / 4.0;
        let grid: Vec<f64> = (1..=n).map(|i| e_max * i as f64 / (n + 1) as f64).collect();
        let rep = investigate::lawson_scan_report(&sp, &grid)?;
        let name = format!("period_tau_{tau}.csv");
        let meta = CsvMeta::new("figures").with_space(&sp).push("figure", "minimal unduloid period vs energy");
        write_csv(
            &mut *open_out(&Some(dir.join(&name)))?,
            &meta,
            &["E", "T"],
            rep.grid.iter().zip(&rep.values).map(|(e, t)| vec![fmt_f64(*e), fmt_f64(*t)]),
        )?;
        manifest.push(serde_json::json!({
            "file": name,
            "figure": "period of minimal unduloid-type surfaces vs energy",
            "tau": tau,
            "crossings_2pi": rep.roots.iter().map(|r| r.x).collect::<Vec<_>>(),
        }));
    }

    // 2-3) non-embedded regions for both spaces
    for (kind, kap, name, taus, hs) in [
        (SpaceKind::BergerSphere, 4.0, "region_berger.csv", (0.05, 1.2), (0.01, 4.0)),
        (SpaceKind::Sl2R, -4.0, "region_sl2r.csv", (0.05, 1.5), (1.0001, 5.0)),
    ] {
        let nt = if quick { 30 } else { 80 };
        let nh = if quick { 40 } else { 120 };
        let tg: Vec<f64> = (0..nt).map(|i| taus.0 + (taus.1 - taus.0) * i as f64 / (nt - 1) as f64).collect();
        let hg: Vec<f64> = (0..nh).map(|i| hs.0 + (hs.1 - hs.0) * i as f64 / (nh - 1) as f64).collect();
        let region = investigate::embeddedness_region(kind, kap, &tg, &hg)?;
        let meta = CsvMeta::new("figures").push("figure", "non-embedded region of CMC spheres").push("kappa", kap);
        let mut rows = Vec::new();
        for (i, &tau) in region.tau_grid.iter().enumerate() {
            for (j, &h) in region.h_grid.iter().enumerate() {
                rows.push(vec![
                    "cell".to_string(),
                    fmt_f64(tau),
                    fmt_f64(h),
                    fmt_f64(region.margin[i][j]),
                ]);
            }
        }
        for &(tau, h) in &region.boundary {
            rows.push(vec!["boundary".to_string(), fmt_f64(tau), fmt_f64(h), "0".to_string()]);
        }
        write_csv(
            &mut *open_out(&Some(dir.join(name)))?,
            &meta,
            &["kind", "tau", "H", "y0_plus_pi"],
            rows.into_iter(),
        )?;
        manifest.push(serde_json::json!({
            "file": name,
            "figure": "non-embedded region of CMC spheres",
            "kappa": kap,
            "boundary_points": region.boundary.len(),
        }));
    }

    // 4) isoperimetric panels at the four tau values
    for tau in [0.5, 0.407, 0.374, 0.244] {
        let sp = SpaceParams::berger(kappa, tau)?;
        let n = if quick { 80 } else { 400 };
        let grid: Vec<f64> = (0..n).map(|i| 6.0 * i as f64 / (n - 1) as f64).collect();
        let pts = investigate::isoperimetric_profile(&sp, &grid)?;
        let name = format!("isoperimetric_tau_{tau}.csv");
        let meta = CsvMeta::new("figures").with_space(&sp).push("figure", "area vs volume of CMC spheres and tori");
        write_csv(
            &mut *open_out(&Some(dir.join(&name)))?,
            &meta,
            &["family", "H", "volume", "area"],
            pts.iter().map(|p| {
                vec![format!("{:?}", p.family), fmt_f64(p.h), fmt_f64(p.volume), fmt_f64(p.area)]
            }),
        )?;
        manifest.push(serde_json::json!({
            "file": name,
            "figure": "area of CMC spheres and tori vs enclosed volume",
            "tau": tau,
        }));
    }

    // 5) profile-curve portraits: closed cases in the Berger sphere,
    //    open cases in Sl(2,R)
    let portraits: Vec<(&str, SpaceParams, FlowParams)> = vec![
        ("curve_unduloid.csv", SpaceParams::berger(4.0, 0.4)?, FlowParams::new(0.0, 0.3)),
        ("curve_nodoid.csv", SpaceParams::berger(4.0, 0.4)?, FlowParams::new(1.0, -0.3)),
        ("curve_pole_chain.csv", SpaceParams::berger(4.0, 0.2)?, FlowParams::new(0.3, -0.3)),
        ("curve_open_sphere.csv", SpaceParams::sl2r(-4.0, 1.0)?, FlowParams::new(0.9, 0.0)),
        ("curve_open_unduloid.csv", SpaceParams::sl2r(-4.0, 1.0)?, FlowParams::new(0.8, 0.5)),
        ("curve_open_nodoid.csv", SpaceParams::sl2r(-4.0, 1.0)?, FlowParams::new(0.8, -0.5)),
    ];
    for (name, sp, fp) in portraits {
        let open_case = !sp.is_berger() && 4.0 * fp.h * fp.h + sp.kappa <= 0.0;
        let span = if open_case { Some(8.0) } else { None };
        cmd_profile(&sp, &fp, span, 0.02, &mut *open_out(&Some(dir.join(name)))?)?;
        manifest.push(serde_json::json!({
            "file": name,
            "figure": "generating curve portrait",
            "space": format!("{:?}", sp.kind),
            "H": fp.h,
            "E": fp.e,
        }));
    }

    let mut mf = fs::File::create(dir.join("manifest.json"))?;
    writeln!(
        mf,
        "{}",
        serde_json::to_string_pretty(&serde_json::json!({
            "schema": "rotcmc.figures/1",
            "version": env!("CARGO_PKG_VERSION"),
            "panels": manifest,
        }))?
    )?;
    Ok(())
}
