//! Command-line driver for `maskbench`.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on domain errors. Domain
//! errors are also written to stderr as one JSON object.

mod io;

use std::ffi::OsString;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use maskbench::experiments::{
    run_channel_protection, run_demo_fig2, run_sweep_fig3, write_sweep_csv, Direction, SweepConfig, SweepRecord,
};
use maskbench::maskers::{
    disk_contains, disk_through, highdim_masker, mask, qubit_masker, unmask, vandermonde_masker, Disk,
};
use maskbench::photonics::{fuse_coherent, fuse_qubit, fuse_qudit};
use maskbench::qcore::density_to_bloch;
use maskbench::secretshare::{read_ppm, reconstruct_image, share_image, write_ppm, ShareFile, TamperedPixel};
use maskbench::{Error, HighDimFamily, Masker};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use io::{load_state, parse_state, save_state, LoadedState};

/// Environment variable supplying the default seed.
pub const SEED_ENV: &str = "MASKBENCH_SEED";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("tamper detected at {} pixel(s)", .0.len())]
    Tampered(Vec<TamperedPixel>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Domain(e) => match e {
                Error::DimensionMismatch { .. } => "DimensionMismatch",
                Error::DimensionTooLarge { .. } => "DimensionTooLarge",
                Error::InvalidDimension(_) => "InvalidDimension",
                Error::NonFinite => "NonFinite",
                Error::NotHermitian(_) => "NotHermitian",
                Error::InvalidTrace(_) => "InvalidTrace",
                Error::NotPositiveSemidefinite(_) => "NotPositiveSemidefinite",
                Error::NotNormalized(_) => "NotNormalized",
                Error::NonPhysical(_) => "NonPhysical",
                Error::NotInMaskerRange => "NotInMaskerRange",
                Error::BlockOffDisk { .. } => "BlockOffDisk",
                Error::InvalidOffDiagonal(_) => "InvalidOffDiagonal",
                Error::InvalidParameter(_) => "InvalidParameter",
                Error::PostSelectionEmpty => "PostSelectionEmpty",
                Error::TamperDetected { .. } => "TamperDetected",
                Error::MaskerSet(_) => "MaskerSet",
                Error::ShareFormat(_) => "ShareFormat",
                Error::ImageFormat(_) => "ImageFormat",
                Error::Io(_) => "Io",
            },
            CliError::Io { .. } => "Io",
            CliError::Parse { .. } => "Parse",
            CliError::Usage(_) => "Usage",
            CliError::Tampered(_) => "TamperDetected",
        }
    }

    /// Machine-readable form written to stderr.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({ "error": self.kind(), "message": self.to_string() });
        if let CliError::Tampered(px) = self {
            v["pixels"] = serde_json::to_value(px).expect("plain data");
        }
        v
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "maskbench", version, about = "Quantum information masking simulator")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mask a state and write the bipartite result.
    Mask(MaskArgs),
    /// Invert a masking.
    Unmask(MaskArgs),
    /// Maskable disk of U_α^θ through a state or at a given offset.
    Disk(DiskArgs),
    /// Simulate the polarizing-beam-splitter fusion gate.
    Fusion(FusionArgs),
    /// Latitude sweep of Bob's marginal around U_0^0.
    Sweep(SweepArgs),
    /// Mask the five demo states on the body-diagonal disk.
    Demo(DemoArgs),
    /// Phase-noise protection through a masked pair.
    Channel(ChannelArgs),
    /// Split a P6 image into three share files.
    Share(ShareArgs),
    /// Recombine three share files into an image.
    Reconstruct(ReconstructArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MaskerKind {
    Qubit,
    Vandermonde,
    Highdim,
}

#[derive(Args, Debug)]
struct MaskerArgs {
    /// Masker family.
    #[arg(long, value_enum, default_value = "qubit")]
    masker: MaskerKind,
    /// α of U_α^θ in degrees.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// θ of U_α^θ in degrees.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Dimension of the Vandermonde masker.
    #[arg(long)]
    d: Option<usize>,
    /// JSON file `{d, p, c, alpha, theta}` (angles in radians) for the block masker.
    #[arg(long)]
    family: Option<PathBuf>,
}

#[derive(Deserialize)]
struct FamilyFile {
    d: usize,
    p: Vec<f64>,
    c: Vec<f64>,
    alpha: Vec<f64>,
    theta: Vec<f64>,
}

impl MaskerArgs {
    fn build(&self) -> CliResult<Masker> {
        match self.masker {
            MaskerKind::Qubit => {
                let (Some(a), Some(t)) = (self.alpha, self.theta) else {
                    return Err(CliError::Usage("qubit masker needs --alpha and --theta".into()));
                };
                Ok(qubit_masker(a.to_radians(), t.to_radians()))
            }
            MaskerKind::Vandermonde => {
                let d = self
                    .d
                    .ok_or_else(|| CliError::Usage("vandermonde masker needs --d".into()))?;
                Ok(vandermonde_masker(d)?)
            }
            MaskerKind::Highdim => {
                let path = self
                    .family
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("highdim masker needs --family".into()))?;
                let f: FamilyFile = serde_json::from_str(&io::read_text(path)?).map_err(|e| CliError::Parse {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })?;
                Ok(highdim_masker(&HighDimFamily::new(f.d, f.p, f.c, f.alpha, f.theta)?))
            }
        }
    }
}

#[derive(Args, Debug)]
struct MaskArgs {
    /// Input state (JSON).
    #[arg(long)]
    state: PathBuf,
    #[command(flatten)]
    masker: MaskerArgs,
    /// Output state file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DiskArgs {
    /// α in degrees.
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    /// θ in degrees.
    #[arg(long, allow_hyphen_values = true)]
    theta: f64,
    /// State the disk passes through.
    #[arg(long, conflicts_with = "offset")]
    through: Option<PathBuf>,
    /// Plane offset c in n·r = c.
    #[arg(long, allow_hyphen_values = true)]
    offset: Option<f64>,
    /// States to test for membership.
    #[arg(long, num_args = 1..)]
    check: Vec<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FusionMode {
    Qubit,
    Qudit,
    Coherent,
}

#[derive(Args, Debug)]
struct FusionArgs {
    #[arg(long)]
    state: PathBuf,
    #[arg(long, value_enum, default_value = "qubit")]
    mode: FusionMode,
    /// Photons carrying the qudit (qudit mode).
    #[arg(long)]
    photons: Option<usize>,
    /// Single-photon source efficiency (coherent mode).
    #[arg(long)]
    p: Option<f64>,
    /// Coherent amplitude (coherent mode).
    #[arg(long)]
    amp: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DirectionArg {
    Meridian,
    Parallel,
    Both,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Reference latitudes in degrees.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,30,60")]
    phi: Vec<f64>,
    /// Largest |shift| in degrees.
    #[arg(long, default_value_t = 40.0)]
    shift_max: f64,
    /// Shift step in degrees.
    #[arg(long, default_value_t = 2.0)]
    step: f64,
    #[arg(long, value_enum, default_value = "meridian")]
    direction: DirectionArg,
    /// Sample Bob's marginal with this many shots per point.
    #[arg(long)]
    shots: Option<u64>,
    /// Sampling seed; overrides MASKBENCH_SEED.
    #[arg(long)]
    seed: Option<u64>,
    /// CSV output; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional JSON report.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DemoArgs {
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ChannelArgs {
    #[arg(long)]
    state: PathBuf,
    /// Phase of e^{-iσ_z t}, in radians.
    #[arg(long, allow_hyphen_values = true)]
    t: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ShareArgs {
    /// P6 image.
    #[arg(long = "in")]
    input: PathBuf,
    /// Directory or file-name prefix for share1.bin, share2.bin, share3.bin.
    #[arg(long)]
    out_prefix: String,
}

#[derive(Args, Debug)]
struct ReconstructArgs {
    /// The three share files, in any order.
    #[arg(long, num_args = 3, required = true)]
    shares: Vec<PathBuf>,
    /// Reconstructed P6 image.
    #[arg(long)]
    out: PathBuf,
    /// Original image to score against.
    #[arg(long)]
    compare: Option<PathBuf>,
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => io::write_bytes(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn open(path: &Path) -> CliResult<File> {
    File::open(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn cmd_mask(a: &MaskArgs, forward: bool) -> CliResult<()> {
    let m = a.masker.build()?;
    let rho = load_state(&a.state)?.density();
    let out = if forward { mask(&m, &rho)? } else { unmask(&m, &rho)? };
    match &a.out {
        Some(p) => save_state(&out, p),
        None => emit(None, &io::to_json(&out)),
    }
}

#[derive(Serialize)]
struct DiskReport {
    disk: Disk,
    masker: Masker,
    marginal: maskbench::DensityMatrix,
    checks: Vec<DiskCheck>,
}

#[derive(Serialize)]
struct DiskCheck {
    path: String,
    residual: f64,
    on_disk: bool,
}

fn cmd_disk(a: &DiskArgs) -> CliResult<()> {
    let (alpha, theta) = (a.alpha.to_radians(), a.theta.to_radians());
    let disk = match (&a.through, a.offset) {
        (Some(p), None) => disk_through(alpha, theta, &density_to_bloch(&load_state(p)?.density())?),
        (None, Some(c)) => Disk::from_angles(alpha, theta, c)?,
        _ => return Err(CliError::Usage("disk needs exactly one of --through or --offset".into())),
    };
    let mut checks = Vec::new();
    for p in &a.check {
        let v = density_to_bloch(&load_state(p)?.density())?;
        checks.push(DiskCheck {
            path: p.display().to_string(),
            residual: disk.residual(&v),
            on_disk: disk_contains(&disk, &v, 1e-10),
        });
    }
    let c = disk.offset();
    let report = DiskReport {
        disk: disk.canonical(),
        masker: qubit_masker(alpha, theta),
        marginal: maskbench::DensityMatrix::diagonal(&[(1.0 + c) / 2.0, (1.0 - c) / 2.0])?,
        checks,
    };
    emit(None, &io::to_json(&report))
}

fn cmd_fusion(a: &FusionArgs) -> CliResult<()> {
    let state = load_state(&a.state)?;
    let need_pure = || {
        state
            .pure()
            .ok_or_else(|| CliError::Usage("this fusion mode needs a pure state {dim, amp_re, amp_im}".into()))
    };
    let outcome = match a.mode {
        FusionMode::Qubit => fuse_qubit(&state.density())?,
        FusionMode::Qudit => {
            let n = a
                .photons
                .ok_or_else(|| CliError::Usage("qudit fusion needs --photons".into()))?;
            fuse_qudit(need_pure()?, n)?
        }
        FusionMode::Coherent => {
            let (Some(p), Some(amp)) = (a.p, a.amp) else {
                return Err(CliError::Usage("coherent fusion needs --p and --amp".into()));
            };
            fuse_coherent(need_pure()?, p, Complex64::new(amp, 0.0))?
        }
    };
    emit(a.out.as_deref(), &io::to_json(&outcome))
}

/// `--seed`, else `MASKBENCH_SEED`, else 0.
fn resolve_seed(flag: Option<u64>) -> CliResult<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV} must be an unsigned integer, got {v:?}"))),
        Err(_) => Ok(0),
    }
}

#[derive(Serialize)]
struct SweepReport<'a> {
    units: &'a str,
    grid_note: &'a str,
    shots: Option<u64>,
    seed: u64,
    records: &'a [SweepRecord],
}

fn cmd_sweep(a: &SweepArgs) -> CliResult<()> {
    let seed = resolve_seed(a.seed)?;
    let dirs: &[Direction] = match a.direction {
        DirectionArg::Meridian => &[Direction::Meridian],
        DirectionArg::Parallel => &[Direction::Parallel],
        DirectionArg::Both => &[Direction::Meridian, Direction::Parallel],
    };
    let mut records = Vec::new();
    for &d in dirs {
        let cfg = SweepConfig::degree_grid(&a.phi, a.shift_max, a.step, d, a.shots, seed)?;
        records.extend(run_sweep_fig3(&cfg)?);
    }
    let mut csv = Vec::new();
    write_sweep_csv(&records, &mut csv).map_err(Error::from)?;
    emit(a.out.as_deref(), std::str::from_utf8(&csv).expect("ascii csv"))?;
    if let Some(p) = &a.json {
        let report = SweepReport {
            units: "phi and shift in radians; trace_distance and std_error dimensionless",
            grid_note: "sweep grid chosen for simulation; it is not a measured-data grid",
            shots: a.shots,
            seed,
            records: &records,
        };
        io::write_bytes(p, io::to_json(&report).as_bytes())?;
    }
    Ok(())
}

fn cmd_demo(a: &DemoArgs) -> CliResult<()> {
    emit(a.out.as_deref(), &io::to_json(&run_demo_fig2()?))
}

fn cmd_channel(a: &ChannelArgs) -> CliResult<()> {
    let rho = load_state(&a.state)?.density();
    emit(a.out.as_deref(), &io::to_json(&run_channel_protection(&rho, a.t)?))
}

fn share_path(prefix: &str, k: usize) -> PathBuf {
    PathBuf::from(format!("{prefix}share{k}.bin"))
}

fn cmd_share(a: &ShareArgs) -> CliResult<()> {
    let img = read_ppm(std::io::BufReader::new(open(&a.input)?))?;
    if a.out_prefix.ends_with('/') || a.out_prefix.ends_with(std::path::MAIN_SEPARATOR) {
        std::fs::create_dir_all(&a.out_prefix).map_err(|source| CliError::Io {
            path: a.out_prefix.clone(),
            source,
        })?;
    }
    let shares = share_image(&img)?;
    let mut written = Vec::new();
    for (k, s) in shares.iter().enumerate() {
        let p = share_path(&a.out_prefix, k + 1);
        io::write_bytes(&p, &s.to_bytes())?;
        written.push(p.display().to_string());
    }
    emit(
        None,
        &io::to_json(&serde_json::json!({ "width": img.width(), "height": img.height(), "shares": written })),
    )
}

#[derive(Serialize)]
struct ReconstructReport {
    width: u32,
    height: u32,
    output: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    correlation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    per_channel_correlation: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    constant_channel: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_channel_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    correlation_metric: Option<&'static str>,
    tampered: Vec<TamperedPixel>,
}

fn cmd_reconstruct(a: &ReconstructArgs) -> CliResult<()> {
    let mut shares = Vec::with_capacity(3);
    for p in &a.shares {
        let bytes = std::fs::read(p).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        })?;
        shares.push(ShareFile::from_bytes(&bytes)?);
    }
    let original = match &a.compare {
        Some(p) => Some(read_ppm(std::io::BufReader::new(open(p)?))?),
        None => None,
    };
    let rec = reconstruct_image([&shares[0], &shares[1], &shares[2]], original.as_ref())?;
    let mut w = create(&a.out)?;
    write_ppm(&rec.image, &mut w)?;
    std::io::Write::flush(&mut w).map_err(Error::from)?;
    let cmp = rec.comparison;
    let report = ReconstructReport {
        width: rec.image.width(),
        height: rec.image.height(),
        output: a.out.display().to_string(),
        correlation: cmp.map(|c| c.correlation),
        per_channel_correlation: cmp.map(|c| c.per_channel),
        constant_channel: cmp.map(|c| c.constant_channel),
        max_channel_error: cmp.map(|c| c.max_channel_error),
        correlation_metric: cmp.map(|_| "Pearson correlation per RGB channel, averaged over channels"),
        tampered: rec.tampered.clone(),
    };
    emit(None, &io::to_json(&report))?;
    if !rec.tampered.is_empty() {
        return Err(CliError::Tampered(rec.tampered));
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Mask(a) => cmd_mask(a, true),
        Command::Unmask(a) => cmd_mask(a, false),
        Command::Disk(a) => cmd_disk(a),
        Command::Fusion(a) => cmd_fusion(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Demo(a) => cmd_demo(a),
        Command::Channel(a) => cmd_channel(a),
        Command::Share(a) => cmd_share(a),
        Command::Reconstruct(a) => cmd_reconstruct(a),
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}
