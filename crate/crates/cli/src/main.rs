//! Command-line front end: end-to-end energy reproductions and figure/table
//! data emission.
//!
//! Exit codes map error kinds: 0 success, 1 io/other, 2 parse, 3 index,
//! 4 consistency, 5 unsupported, 6 domain, 7 capacity, 8 symmetry,
//! 9 shape, 10 numerics, 11 preparation, 12 degeneracy, 13 encoding.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ndarray::prelude::*;
use num_complex::Complex64;
use serde::Serialize;

use molpea_core::asp::{self, AspPath};
use molpea_core::error::Error;
use molpea_core::integrals::IntegralTable;
use molpea_core::mappings::{
    build_fci_matrix, build_s2_matrix, enumerate_determinants, jordan_wigner, project_singlet,
    qubit_requirements, MappingKind, PauliHamiltonian,
};
use molpea_core::oracle::diagonalize;
use molpea_core::pea::{self, PeaConfig, PeaMode, PeaTrace};
use molpea_core::simulator::{expm_i_hermitian, StateVector};
use molpea_core::trotter;

#[derive(Parser)]
#[command(name = "molpea", version, about = "Molecular ground-state energies via simulated quantum phase estimation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Qubit requirements of the direct/compact/compact-singlet mappings.
    Qubits(QubitsArgs),
    /// Exact diagonalization energies of an FCIDUMP Hamiltonian.
    Fci(FciArgs),
    /// Emit the mapped Hamiltonian (Pauli terms or subspace summary).
    Hamiltonian(HamiltonianArgs),
    /// Recursive phase estimation of the ground-state energy.
    Pea(PeaArgs),
    /// Adiabatic state preparation trace, optionally chained into PEA.
    Asp(AspArgs),
    /// Trotterized propagator: gate report and error-versus-M scan.
    Trotter(TrotterArgs),
}

#[derive(Args)]
struct QubitsArgs {
    #[arg(long)]
    norb: Option<usize>,
    #[arg(long)]
    nelec: usize,
    /// Scan a basis-function range A..B and emit CSV rows per size.
    #[arg(long)]
    scan: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FciArgs {
    fcidump: PathBuf,
    /// Determinant subspace: sz0 (all Sz = 0) or singlet (S = 0 projected).
    #[arg(long, default_value = "singlet")]
    mapping: String,
}

#[derive(Args)]
struct HamiltonianArgs {
    fcidump: PathBuf,
    /// direct emits Jordan-Wigner Pauli terms; compact/compact-singlet
    /// emit the mapping summary.
    #[arg(long, default_value = "direct")]
    mapping: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PeaArgs {
    fcidump: PathBuf,
    #[arg(long, default_value = "singlet")]
    mapping: String,
    #[arg(long, default_value_t = 4)]
    readout_bits: usize,
    #[arg(long, default_value_t = 20)]
    iterations: usize,
    /// Reference energy for choosing tau: "hf-auto" or a number (hartree).
    #[arg(long, default_value = "hf-auto")]
    reference: String,
    /// argmax or sampled (sampled uses --seed).
    #[arg(long, default_value = "argmax")]
    mode: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AspArgs {
    fcidump: PathBuf,
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    /// Total evolution time in hartree^-1; "auto" ties it to the HF gap.
    #[arg(long, default_value = "auto")]
    total_time: String,
    /// Double T until the final overlap reaches this threshold.
    #[arg(long)]
    calibrate: Option<f64>,
    /// Chain the prepared state into a default PEA run.
    #[arg(long)]
    then_pea: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrotterArgs {
    fcidump: PathBuf,
    /// Repetition count for the gate report.
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Comma-separated M values for the error scan CSV.
    #[arg(long)]
    m_list: Option<String>,
    #[arg(long, default_value = "hf-auto")]
    reference: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Qubits(a) => cmd_qubits(a),
        Command::Fci(a) => cmd_fci(a),
        Command::Hamiltonian(a) => cmd_hamiltonian(a),
        Command::Pea(a) => cmd_pea(a),
        Command::Asp(a) => cmd_asp(a),
        Command::Trotter(a) => cmd_trotter(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => 1,
        Error::Parse(_) => 2,
        Error::Index(_) => 3,
        Error::Consistency(_) => 4,
        Error::Unsupported(_) => 5,
        Error::Domain(_) => 6,
        Error::Capacity(_) => 7,
        Error::Symmetry(_) => 8,
        Error::Shape(_) => 9,
        Error::Numerics(_) => 10,
        Error::Preparation(_) => 11,
        Error::Degeneracy(_) => 12,
        Error::Encoding(_) => 13,
    }
}

type Result<T> = std::result::Result<T, Error>;

fn out_dir(flag: &Option<PathBuf>) -> Result<PathBuf> {
    let dir = flag
        .clone()
        .or_else(|| std::env::var_os("MOLPEA_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    std::fs::write(dir.join(name), contents)?;
    Ok(())
}

fn load_table(path: &Path) -> Result<IntegralTable> {
    let text = std::fs::read_to_string(path)?;
    IntegralTable::parse_fcidump(&text)
}

fn parse_mapping(s: &str) -> Result<MappingKind> {
    match s {
        "sz0" | "compact" => Ok(MappingKind::Compact),
        "singlet" | "compact-singlet" | "compact_singlet" => Ok(MappingKind::CompactSinglet),
        "direct" => Ok(MappingKind::Direct),
        other => Err(Error::Parse(format!("unknown mapping {other:?}"))),
    }
}

/// Sz = 0 determinant FCI matrix, optionally projected onto the singlet
/// subspace.  Returns (hamiltonian, subspace dimension label).
fn compact_hamiltonian(t: &IntegralTable, kind: MappingKind) -> Result<Array2<f64>> {
    if t.nelec() % 2 != 0 || t.ms2() != 0 {
        return Err(Error::Unsupported(format!(
            "closed-shell pipeline requires even NELEC and MS2 = 0, got {} and {}",
            t.nelec(),
            t.ms2()
        )));
    }
    let half = t.nelec() / 2;
    let basis = enumerate_determinants(t.norb(), half, half)?;
    let h = build_fci_matrix(t, &basis)?;
    match kind {
        MappingKind::Compact => Ok(h),
        MappingKind::CompactSinglet => {
            let s2 = build_s2_matrix(&basis)?;
            let (projected, _) = project_singlet(&h, &s2)?;
            Ok(projected)
        }
        MappingKind::Direct => Err(Error::Unsupported(
            "direct mapping has no determinant-basis matrix; use `hamiltonian`".into(),
        )),
    }
}

fn ceil_log2(n: usize) -> usize {
    (usize::BITS - n.saturating_sub(1).leading_zeros()) as usize
}

fn fmt_f(x: f64) -> String {
    format!("{x:.12e}")
}

// ---------------------------------------------------------------------------
// qubits
// ---------------------------------------------------------------------------

fn cmd_qubits(a: QubitsArgs) -> Result<()> {
    if let Some(scan) = &a.scan {
        let (lo, hi) = scan
            .split_once("..")
            .and_then(|(l, h)| Some((l.parse::<usize>().ok()?, h.parse::<usize>().ok()?)))
            .ok_or_else(|| Error::Parse(format!("bad scan range {scan:?}; expected A..B")))?;
        if lo < 1 || hi < lo {
            return Err(Error::Domain(format!("empty scan range {scan:?}")));
        }
        let mut csv = String::from("basis_functions,direct_qubits,compact_qubits\n");
        for norb in lo..=hi {
            if a.nelec > 2 * norb {
                continue;
            }
            let d = qubit_requirements(norb, a.nelec, MappingKind::Direct)?;
            let c = qubit_requirements(norb, a.nelec, MappingKind::Compact)?;
            let _ = writeln!(csv, "{norb},{},{}", d.nqubits, c.nqubits);
        }
        match &a.out {
            Some(_) => write_file(&out_dir(&a.out)?, "qubit_scan.csv", &csv)?,
            None => print!("{csv}"),
        }
        return Ok(());
    }
    let norb = a
        .norb
        .ok_or_else(|| Error::Domain("either --norb or --scan is required".into()))?;
    let specs: Vec<_> = [MappingKind::Direct, MappingKind::Compact, MappingKind::CompactSinglet]
        .into_iter()
        .map(|k| qubit_requirements(norb, a.nelec, k))
        .collect::<Result<_>>()?;
    println!("{}", serde_json::to_string_pretty(&specs).expect("serializable"));
    Ok(())
}

// ---------------------------------------------------------------------------
// fci
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct FciSummary {
    dimension: usize,
    e_electronic: f64,
    e_total: f64,
    gap: f64,
    core_energy: f64,
    e_hf_electronic: f64,
}

fn cmd_fci(a: FciArgs) -> Result<()> {
    let t = load_table(&a.fcidump)?;
    let h = compact_hamiltonian(&t, parse_mapping(&a.mapping)?)?;
    let spec = diagonalize(&h.view())?;
    let summary = FciSummary {
        dimension: h.nrows(),
        e_electronic: spec.eigenvalues[0],
        e_total: spec.eigenvalues[0] + t.core_energy(),
        gap: spec.gap,
        core_energy: t.core_energy(),
        e_hf_electronic: t.hf_reference_energy(&t.hf_occupation())?,
    };
    println!("{}", serde_json::to_string_pretty(&summary).expect("serializable"));
    Ok(())
}

// ---------------------------------------------------------------------------
// hamiltonian
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct DirectHamiltonianOutput {
    spec: molpea_core::MappingSpec,
    term_count: usize,
    terms: Vec<(f64, String)>,
}

fn cmd_hamiltonian(a: HamiltonianArgs) -> Result<()> {
    let t = load_table(&a.fcidump)?;
    let kind = parse_mapping(&a.mapping)?;
    let text = match kind {
        MappingKind::Direct => {
            let h = jordan_wigner(&t);
            let spec = qubit_requirements(t.norb(), t.nelec(), kind)?;
            let out = DirectHamiltonianOutput {
                spec,
                term_count: h.terms.len(),
                terms: h
                    .terms
                    .iter()
                    .map(|(c, s)| (*c, PauliHamiltonian::string_of(s)))
                    .collect(),
            };
            serde_json::to_string_pretty(&out).expect("serializable")
        }
        _ => {
            let spec = qubit_requirements(t.norb(), t.nelec(), kind)?;
            let h = compact_hamiltonian(&t, kind)?;
            serde_json::to_string_pretty(&serde_json::json!({
                "spec": spec,
                "matrix_dimension": h.nrows(),
            }))
            .expect("serializable")
        }
    };
    match &a.out {
        Some(_) => write_file(&out_dir(&a.out)?, "hamiltonian.json", &text)?,
        None => println!("{text}"),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// pea
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct PeaSummary {
    e_electronic: f64,
    e_total: f64,
    e_diagonalization: f64,
    abs_delta: f64,
    phi: f64,
    tau: f64,
    iterations: usize,
    readout_bits: usize,
    warning: Option<String>,
}

fn reference_energy(spec: &str, t: &IntegralTable) -> Result<f64> {
    if spec == "hf-auto" {
        t.hf_reference_energy(&t.hf_occupation())
    } else {
        spec.parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad reference energy {spec:?}")))
    }
}

fn parse_mode(mode: &str, seed: u64) -> Result<PeaMode> {
    match mode {
        "argmax" => Ok(PeaMode::Argmax),
        "sampled" => Ok(PeaMode::Sampled { seed }),
        other => Err(Error::Parse(format!("unknown mode {other:?}"))),
    }
}

/// Per-iteration distribution CSV: outcome, the candidate phase obtained
/// by folding the outcome back through the recorded shifts, the candidate
/// energy the candidate would reconstruct to, and the probability.
fn iteration_csv(trace: &PeaTrace, k: usize, tau: f64) -> String {
    let grid = trace.records[k].distribution.len();
    let mut csv = String::from("outcome,theta,phi_candidate,energy,probability\n");
    for (outcome, p) in trace.records[k].distribution.iter().enumerate() {
        let theta = outcome as f64 / grid as f64;
        let mut phi = theta;
        for r in trace.records[..k].iter().rev() {
            phi = r.shift + phi / 2.0;
        }
        phi = phi.rem_euclid(1.0);
        let energy = 2.0 * std::f64::consts::PI * phi / tau;
        let _ = writeln!(
            csv,
            "{outcome},{},{},{},{}",
            fmt_f(theta),
            fmt_f(phi),
            fmt_f(energy),
            fmt_f(*p)
        );
    }
    csv
}

fn run_pea(
    t: &IntegralTable,
    h: &Array2<f64>,
    initial: Option<StateVector>,
    readout_bits: usize,
    iterations: usize,
    reference: &str,
    mode: PeaMode,
    dir: &Path,
) -> Result<PeaSummary> {
    let spec = diagonalize(&h.view())?;
    let e_ref = reference_energy(reference, t)?;
    let mut cfg = PeaConfig::from_reference(e_ref)?;
    cfg.readout_bits = readout_bits;
    cfg.iterations = iterations;
    cfg.mode = mode;
    let nsys = ceil_log2(h.nrows());
    let mut target = vec![Complex64::new(0.0, 0.0); 1 << nsys];
    for (i, &g) in spec.ground.iter().enumerate() {
        target[i] = Complex64::new(g, 0.0);
    }
    cfg.target_state = Some(target);
    let initial = match initial {
        Some(s) => s,
        None => StateVector::basis_state(nsys, 0)?,
    };
    let u = expm_i_hermitian(&h.view(), cfg.tau)?;
    let trace = pea::recursive_pea(&u, &initial, &cfg)?;

    write_file(dir, "pea_trace.json", &serde_json::to_string_pretty(&trace).expect("serializable"))?;
    for k in 0..trace.records.len() {
        write_file(dir, &format!("iteration_{k:02}.csv"), &iteration_csv(&trace, k, cfg.tau))?;
    }
    let summary = PeaSummary {
        e_electronic: trace.energy,
        e_total: trace.energy + t.core_energy(),
        e_diagonalization: spec.eigenvalues[0],
        abs_delta: (trace.energy - spec.eigenvalues[0]).abs(),
        phi: trace.phi,
        tau: cfg.tau,
        iterations,
        readout_bits,
        warning: trace.warning.clone(),
    };
    write_file(dir, "pea_summary.json", &serde_json::to_string_pretty(&summary).expect("serializable"))?;
    Ok(summary)
}

fn cmd_pea(a: PeaArgs) -> Result<()> {
    let t = load_table(&a.fcidump)?;
    let h = compact_hamiltonian(&t, parse_mapping(&a.mapping)?)?;
    let dir = out_dir(&a.out)?;
    let mode = parse_mode(&a.mode, a.seed)?;
    let summary = run_pea(&t, &h, None, a.readout_bits, a.iterations, &a.reference, mode, &dir)?;
    println!("{}", serde_json::to_string_pretty(&summary).expect("serializable"));
    Ok(())
}

// ---------------------------------------------------------------------------
// asp
// ---------------------------------------------------------------------------

fn cmd_asp(a: AspArgs) -> Result<()> {
    let t = load_table(&a.fcidump)?;
    let h_end = compact_hamiltonian(&t, MappingKind::CompactSinglet)?;
    let e_hf = t.hf_reference_energy(&t.hf_occupation())?;
    let dim = h_end.nrows();
    let h_start = asp::build_hf_hamiltonian(dim, e_hf);
    let mut initial = Array1::from_elem(dim, Complex64::new(0.0, 0.0));
    initial[0] = Complex64::new(1.0, 0.0);

    let (total_time, trace) = if let Some(threshold) = a.calibrate {
        asp::calibrate_total_time(&h_start, &h_end, a.steps, &initial, threshold)?
    } else {
        let total_time = match a.total_time.as_str() {
            "auto" => asp::default_total_time(e_hf, a.steps),
            s => s
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad total time {s:?}")))?,
        };
        let path = AspPath::new(h_start.clone(), h_end.clone(), a.steps, total_time)?;
        (total_time, asp::asp_evolve(&path, &initial)?)
    };

    let dir = out_dir(&a.out)?;
    let mut csv = String::from("s,overlap_exact,overlap_instantaneous,gap\n");
    for r in &trace.records {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            fmt_f(r.s),
            fmt_f(r.overlap_final),
            fmt_f(r.overlap_instantaneous),
            fmt_f(r.gap)
        );
    }
    write_file(&dir, "asp_trace.csv", &csv)?;
    let mut summary = serde_json::json!({
        "steps": a.steps,
        "total_time": total_time,
        "initial_overlap": trace.records[0].overlap_final,
        "final_overlap": trace.final_overlap(),
        "min_gap": trace.records.iter().map(|r| r.gap).fold(f64::INFINITY, f64::min),
    });

    if a.then_pea {
        let amps: Vec<Complex64> = trace.final_state.to_vec();
        let nsys = ceil_log2(dim);
        let prepared = StateVector::from_subspace(nsys, &amps)?;
        let pea_summary = run_pea(
            &t,
            &h_end,
            Some(prepared),
            4,
            20,
            "hf-auto",
            PeaMode::Argmax,
            &dir,
        )?;
        summary["pea"] = serde_json::to_value(&pea_summary).expect("serializable");
    }
    println!("{}", serde_json::to_string_pretty(&summary).expect("serializable"));
    Ok(())
}

// ---------------------------------------------------------------------------
// trotter
// ---------------------------------------------------------------------------

fn cmd_trotter(a: TrotterArgs) -> Result<()> {
    if a.m < 1 {
        return Err(Error::Domain("M must be at least 1".into()));
    }
    let t = load_table(&a.fcidump)?;
    let h = jordan_wigner(&t);
    let dir = out_dir(&a.out)?;
    let report = trotter::gate_count(&h, a.m)?;
    write_file(&dir, "gate_report.json", &serde_json::to_string_pretty(&report).expect("serializable"))?;

    if let Some(list) = &a.m_list {
        let e_ref = reference_energy(&a.reference, &t)?;
        let tau = pea::choose_tau(e_ref)?;
        let mut csv = String::from("m,spectral_error\n");
        for token in list.split(',') {
            let m: usize = token
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad M value {token:?}")))?;
            let err = trotter::trotter_error(&h, tau, m)?;
            let _ = writeln!(csv, "{m},{}", fmt_f(err));
        }
        write_file(&dir, "trotter_error.csv", &csv)?;
    }
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    Ok(())
}
