mod golden;
mod io;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use canonical24::branch::{certify, sample_config, BranchConfig, Certificate};
use canonical24::canring::{
    build_m2, check_w_lemma, choose_generators, describe_quadric, dim_a, generation_check, hartshorne_rao_bounds,
    numerology, relation_count_deg3, severi_solutions, slot_name, slot_table, QRing,
};
use canonical24::cover::{basepoint_free_probe, injectivity_probe, jacobian_rank_probe, CoverModel, Tolerances};
use canonical24::{Error, FORMAT_TAG, VERSION};
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "canonical24", version, about = "Bidouble covers of P1xP1 with K^2 = 24 and p_g = 6")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rejection-sample a certified branch configuration.
    Sample {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
        coeff_bound: u32,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        max_tries: u64,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Re-run every certificate check on a configuration.
    Verify {
        config: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Analyze the canonical ring and compare with the reference table.
    Ring {
        config: PathBuf,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(2..=12))]
        max_degree: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Numerically probe base-point freeness, immersion and injectivity.
    Probe {
        config: PathBuf,
        #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        pairs: u64,
        /// Probe seed; defaults to the configuration's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the invariants of the family and the Severi solutions.
    Numerology,
}

/// A command outcome other than success, with its exit code.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn io(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    fn check(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Exhausted { tries, histogram } => {
                let mut message = format!("no certified configuration in {tries} tries; failed checks:");
                for (name, n) in &histogram {
                    message.push_str(&format!("\n  {name:<24} {n}"));
                }
                Failure { code: 2, message }
            }
            Error::InvalidArgument(m) => Failure::io(m),
            other => Failure::check(other.to_string()),
        }
    }
}

#[derive(Serialize)]
struct Manifest {
    command: &'static str,
    seed: u64,
    coeff_bound: u32,
    tolerances: Option<Tolerances>,
    input: Option<String>,
    output: Option<String>,
    version: &'static str,
}

impl Manifest {
    fn new(command: &'static str, seed: u64, coeff_bound: u32, input: Option<&Path>, output: Option<&Path>) -> Self {
        Manifest {
            command,
            seed,
            coeff_bound,
            tolerances: None,
            input: input.map(|p| p.display().to_string()),
            output: output.map(|p| p.display().to_string()),
            version: VERSION,
        }
    }
}

#[derive(Serialize)]
struct ConfigArtifact<'a> {
    format: &'static str,
    manifest: Manifest,
    config: &'a BranchConfig,
    certificate: &'a Certificate,
}

fn cmd_sample(seed: u64, coeff_bound: u32, max_tries: u64, output: Option<PathBuf>) -> Result<(), Failure> {
    let sampled = sample_config(seed, coeff_bound, max_tries as usize)?;
    let artifact = ConfigArtifact {
        format: FORMAT_TAG,
        manifest: Manifest::new("sample", seed, coeff_bound, None, output.as_deref()),
        config: &sampled.config,
        certificate: &sampled.certificate,
    };
    io::emit(output.as_deref(), &artifact)?;
    eprintln!("certified after {} attempt(s)", sampled.certificate.attempts);
    Ok(())
}

fn cmd_verify(path: PathBuf, report: Option<PathBuf>) -> Result<(), Failure> {
    let config = io::read_config(&path)?;
    let certificate = certify(&config)?;
    let artifact = ConfigArtifact {
        format: FORMAT_TAG,
        manifest: Manifest::new("verify", config.seed, config.coeff_bound, Some(&path), report.as_deref()),
        config: &config,
        certificate: &certificate,
    };
    if let Some(p) = &report {
        io::write_json(p, &artifact)?;
    }
    for c in &certificate.checks {
        println!("{:<24} {}", c.name, if c.pass { "pass" } else { "FAIL" });
    }
    if certificate.pass {
        Ok(())
    } else {
        Err(Failure::check(format!("failing checks: {}", certificate.failed().join(", "))))
    }
}

fn require_certified(config: &BranchConfig) -> Result<(), Failure> {
    let certificate = certify(config)?;
    if certificate.pass {
        Ok(())
    } else {
        Err(Failure {
            code: 4,
            message: format!(
                "configuration is not certified (failing: {}); refusing ring analysis",
                certificate.failed().join(", ")
            ),
        })
    }
}

fn cmd_ring(path: PathBuf, max_degree: usize, report: Option<PathBuf>) -> Result<(), Failure> {
    let config = io::read_config(&path)?;
    require_certified(&config)?;
    let ring = QRing::from_config(&config);
    let mut observed: BTreeMap<String, Value> = BTreeMap::new();

    let mut dims = serde_json::Map::new();
    for m in 0..=max_degree.max(3) {
        let table = slot_table(m);
        let slots: BTreeMap<&str, usize> = table.iter().map(|&(s, _, d)| (slot_name(s), d)).collect();
        let total: usize = table.iter().map(|t| t.2).sum();
        observed.insert(format!("dims.R{m}"), json!(total));
        observed.insert(format!("dims.slots_m{m}"), json!(table.iter().map(|t| t.2).collect::<Vec<_>>()));
        dims.insert(format!("R{m}"), json!({"total": total, "slots": slots}));
    }
    observed.insert("dims.A3".into(), json!(dim_a(3)));

    let m2 = build_m2(&ring)?;
    let quadric = (m2.kernel.len() == 1 && m2.kernel_is_quadric).then(|| describe_quadric(&m2.kernel[0]));
    observed.insert("m2.rank".into(), json!(m2.rank));
    observed.insert("m2.kernel_dim".into(), json!(m2.kernel.len()));
    observed.insert("m2.quadric".into(), json!(quadric));
    observed.insert("m2.cokernel_by_slot".into(), json!(m2.cokernel_by_slot));

    let w = check_w_lemma(&ring);
    observed.insert(
        "w_lemma.rank".into(),
        json!((w.rank_fraction_free == w.rank_transposed).then_some(w.rank_fraction_free)),
    );

    let gens = choose_generators(&m2)?;
    observed.insert("generators".into(), json!(gens.len()));
    let relations = relation_count_deg3(&ring, &gens)?;
    observed.insert("relations_deg3.kernel_dim".into(), json!(relations.kernel_dim));

    let generation = generation_check(&ring, &gens, max_degree)?;
    for d in &generation.degrees {
        observed.insert(format!("generation.m{}", d.m), json!(d.pass));
    }

    let mut image_ranks: Vec<Option<usize>> = vec![Some(1), Some(6)];
    image_ranks.extend(generation.degrees.iter().map(|d| Some(d.image_rank_a)));
    let hr = hartshorne_rao_bounds(max_degree, &image_ranks);
    for row in &hr {
        observed.insert(format!("hr_bounds.m{}.forced", row.m), json!(row.forced));
        observed.insert(format!("hr_bounds.m{}.h1_lower", row.m), json!(row.h1_lower));
    }

    let mismatches = golden::compare(max_degree, |k| observed.get(k).cloned());
    let out = json!({
        "format": FORMAT_TAG,
        "manifest": Manifest::new("ring", config.seed, config.coeff_bound, Some(&path), report.as_deref()),
        "max_degree": max_degree,
        "dims": dims,
        "m2": {
            "rank": m2.rank,
            "kernel_dim": m2.kernel.len(),
            "quadric": quadric,
            "cokernel_by_slot": m2.cokernel_by_slot,
        },
        "w_lemma": w,
        "generators": gens,
        "relations_deg3": relations,
        "generation": {
            "pass": generation.pass(),
            "minimal_at_2": generation.minimal_at_2,
            "quotient_dim_2": generation.quotient_dim_2,
            "degrees": generation.degrees,
        },
        "hr_bounds": hr,
        "numerology": numerology(),
        "severi": severi_solutions(),
        "golden": {"pass": mismatches.is_empty(), "mismatches": mismatches},
    });
    io::emit(report.as_deref(), &out)?;

    if mismatches.is_empty() {
        eprintln!("all reference values match");
        Ok(())
    } else {
        let mut message = String::from("reference mismatch:");
        for m in &mismatches {
            message.push_str(&format!("\n  {}\n    - expected {}\n    + computed {}", m.key, m.expected, m.computed));
        }
        Err(Failure::check(message))
    }
}

fn cmd_probe(path: PathBuf, samples: usize, pairs: usize, seed: Option<u64>, report: Option<PathBuf>) -> Result<(), Failure> {
    let config = io::read_config(&path)?;
    let certificate = certify(&config)?;
    let tol = Tolerances::default();
    let seed = seed.unwrap_or(config.seed);
    let mut manifest = Manifest::new("probe", seed, config.coeff_bound, Some(&path), report.as_deref());
    manifest.tolerances = Some(tol);

    let model = CoverModel::new(&config, tol)
        .map_err(|e| Failure::check(format!("cannot build the cover model: {e}")))?;
    let probes = [
        basepoint_free_probe(&model, samples, seed),
        jacobian_rank_probe(&model, samples, seed),
        injectivity_probe(&model, pairs, seed),
    ];
    let pass = probes.iter().all(|p| p.passed());
    let out = json!({
        "format": FORMAT_TAG,
        "manifest": manifest,
        "certified": certificate.pass,
        "pass": pass,
        "probes": probes,
    });
    io::emit(report.as_deref(), &out)?;

    for p in &probes {
        eprintln!("{:<22} samples {:>5}  failures {}", p.probe, p.samples, p.failures.len());
    }
    if pass {
        Ok(())
    } else {
        let mut message = String::from("probe failures:");
        for p in &probes {
            for f in p.failures.iter().take(20) {
                message.push_str(&format!("\n  {} [{} #{}] {}", p.probe, f.stratum, f.index, f.reason));
            }
        }
        Err(Failure::check(message))
    }
}

fn cmd_numerology() {
    let n = numerology();
    println!("pg={}", n.p_g);
    println!("q={}", n.q);
    println!("chi={}", n.chi);
    println!("K2={}", n.k2);
    println!("castelnuovo_lower={}", n.castelnuovo_lower);
    println!("bmy_upper={}", n.bmy_upper);
    println!("within_window={}", n.within_window);
    println!("expected_moduli_dim={}", n.expected_moduli_dim);
    let [a, b, c] = n.linear_system_dims;
    println!("linear_system_dims={a},{b},{c}");
    println!("family_dim={}", n.family_dim);
    println!("aut_dim={}", n.aut_q_dim);
    println!("moduli_dim={}", n.moduli_dim);
    println!("exceeds_expected={}", n.exceeds_expected);
    let severi: Vec<String> = severi_solutions()
        .iter()
        .map(|s| {
            if s.excluded {
                format!("({},{} excluded)", s.d, s.chi)
            } else {
                format!("({},{})", s.d, s.chi)
            }
        })
        .collect();
    println!("severi={}", severi.join(","));
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("CANONICAL24_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::io(format!("CANONICAL24_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::io(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    let start = Instant::now();
    let result = match cli.command {
        Command::Sample { seed, coeff_bound, max_tries, output } => cmd_sample(seed, coeff_bound, max_tries, output),
        Command::Verify { config, report } => cmd_verify(config, report),
        Command::Ring { config, max_degree, report } => cmd_ring(config, max_degree as usize, report),
        Command::Probe { config, samples, pairs, seed, report } => {
            cmd_probe(config, samples as usize, pairs as usize, seed, report)
        }
        Command::Numerology => {
            cmd_numerology();
            Ok(())
        }
    };
    eprintln!("wall time {:.3} s", start.elapsed().as_secs_f64());
    result
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
