use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use knapcrack::attack::{full_attack, lambda_sweep_from_exponents, AttackConfig};
use knapcrack::bench::{run_grid, scaling_slope, summarize, trial_instance, write_csv, TrialGrid, DEMO_N, DEMO_SEED};
use knapcrack::cryptosystem::{decrypt, encrypt, keygen, selection_in_order_superincreasing, SchemeParams};
use knapcrack::diophantine::solve_sda;
use knapcrack::format;
use knapcrack::lattice::lll_reduce_with_stats;

#[derive(Parser)]
#[command(name = "knapcrack", version, about = "Knapsack cryptosystem toolkit and lattice attack")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair
    Keygen(KeygenArgs),
    /// Encrypt a file under a public key
    Encrypt {
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decrypt a ciphertext file with a private key
    Decrypt {
        #[arg(long = "priv")]
        private: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recover the plaintext from a public key and ciphertext alone
    Attack(AttackArgs),
    /// LLL-reduce a matrix file
    Lll {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Lovasz parameter as "p/q"
        #[arg(long, default_value = "3/4")]
        delta: String,
    },
    /// Simultaneous Diophantine approximation
    Sda {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Seeded attack trials over a grid of key sizes
    Bench(BenchArgs),
    /// Key generation, encryption and attack on a small seeded instance
    Demo {
        #[arg(long, default_value_t = DEMO_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEMO_N)]
        n: usize,
    },
}

#[derive(Args)]
struct KeygenArgs {
    #[arg(long, default_value_t = 1360)]
    n: usize,
    #[arg(long, default_value_t = 8)]
    subsets: usize,
    #[arg(long, default_value_t = 170)]
    group_size: usize,
    #[arg(long, default_value_t = 128)]
    take: usize,
    #[arg(long, default_value_t = SchemeParams::DEFAULT_SLACK_BITS)]
    slack_bits: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "pub")]
    public: PathBuf,
    #[arg(long = "priv")]
    private: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated lattice widths
    #[arg(long, value_delimiter = ',')]
    ell_sweep: Option<Vec<usize>>,
    /// Exponent range "lo:hi" for lambda = 2^-e
    #[arg(long, value_parser = parse_range)]
    lambda_exp_range: Option<(u32, u32)>,
    #[arg(long)]
    max_candidates: Option<usize>,
}

#[derive(Args)]
struct AttackArgs {
    #[arg(long)]
    pubkey: PathBuf,
    #[arg(long)]
    ciphertext: PathBuf,
    #[command(flatten)]
    sweep: SweepArgs,
    #[arg(long)]
    json_report: Option<PathBuf>,
    /// Where to write the recovered plaintext
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated key sizes
    #[arg(long = "n", value_delimiter = ',', default_values_t = [16, 24, 32])]
    n_values: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    slack_bits: Option<u32>,
    #[arg(long, default_value_t = 4)]
    message_bytes: usize,
    #[command(flatten)]
    sweep: SweepArgs,
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: u32 = lo.trim().parse().map_err(|e| format!("lo: {e}"))?;
    let hi: u32 = hi.trim().parse().map_err(|e| format!("hi: {e}"))?;
    if lo > hi {
        return Err("lo must not exceed hi".into());
    }
    Ok((lo, hi))
}

enum Failure {
    /// Bad flags, unreadable or malformed files.
    Usage(String),
    /// The operation ran and did not succeed.
    Operation(String),
}

type Outcome = Result<(), Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn op(e: impl ToString) -> Failure {
    Failure::Operation(e.to_string())
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, data: impl AsRef<[u8]>) -> Outcome {
    fs::write(path, data).map_err(|e| op(format!("{}: {e}", path.display())))
}

fn config_for(n: usize, sweep: &SweepArgs) -> AttackConfig {
    let mut cfg = AttackConfig::default_for(n);
    if let Some(ells) = &sweep.ell_sweep {
        cfg.ell_sweep = ells.clone();
    }
    if let Some((lo, hi)) = sweep.lambda_exp_range {
        cfg.lambda_sweep = lambda_sweep_from_exponents(lo, hi);
    }
    if let Some(m) = sweep.max_candidates {
        cfg.max_candidates = m;
    }
    cfg
}

fn cmd_keygen(args: &KeygenArgs) -> Outcome {
    let params =
        SchemeParams::new(args.n, args.subsets, args.group_size, args.take, args.slack_bits).map_err(usage)?;
    let kp = keygen(&params, args.seed).map_err(op)?;
    write(&args.public, format::public_key_to_json(&kp.public))?;
    write(&args.private, format::private_key_to_json(&kp.private, &params))?;
    println!(
        "generated key: n = {}, {} groups of {}, {} bits per block, p has {} bits",
        params.n,
        params.subsets,
        params.group_size,
        params.block_bits(),
        kp.private.p.bits()
    );
    Ok(())
}

fn cmd_encrypt(public: &Path, input: &Path, out: &Path) -> Outcome {
    let pk = format::public_key_from_json(&read_text(public)?).map_err(usage)?;
    let message = read_bytes(input)?;
    let ct = encrypt(&pk, &message).map_err(op)?;
    write(out, format::ciphertext_to_json(&ct))?;
    println!("encrypted {} bytes into {} blocks", message.len(), ct.blocks.len());
    Ok(())
}

fn cmd_decrypt(private: &Path, input: &Path, out: &Path) -> Outcome {
    let (sk, params) = format::private_key_from_json(&read_text(private)?).map_err(usage)?;
    let ct = format::ciphertext_from_json(&read_text(input)?).map_err(usage)?;
    let message = decrypt(&sk, &params, &ct).map_err(op)?;
    // a foreign key can still decode to some bit pattern; re-encryption exposes it
    let pk = sk.public_key(params);
    if encrypt(&pk, &message).ok().as_ref() != Some(&ct) {
        return Err(op("key does not match ciphertext: re-encryption differs"));
    }
    write(out, &message)?;
    println!("decrypted {} bytes", message.len());
    Ok(())
}

fn cmd_attack(args: &AttackArgs) -> Outcome {
    let pk = format::public_key_from_json(&read_text(&args.pubkey)?).map_err(usage)?;
    let ct = format::ciphertext_from_json(&read_text(&args.ciphertext)?).map_err(usage)?;
    let cfg = config_for(pk.a.len(), &args.sweep);
    cfg.validate(pk.a.len()).map_err(usage)?;
    let report = full_attack(&pk, &ct, &cfg).map_err(op)?;
    if let Some(path) = &args.json_report {
        write(path, format::attack_report_to_json(&report))?;
    }
    println!(
        "lattices reduced: {}, LLL swaps: {}, candidates tried: {}",
        report.lattices_reduced, report.lll_swaps, report.candidates_tried
    );
    match (&report.plaintext, report.success) {
        (Some(plain), true) => {
            if let Some(path) = &args.out {
                write(path, plain)?;
            }
            let key = report.equivalent_key.as_ref().expect("success carries a key");
            println!("equivalent key: U' = {}, p' = {}", key.u_prime, key.p_prime);
            println!("ATTACK SUCCEEDED: recovered {} bytes", plain.len());
            Ok(())
        }
        _ => Err(op("ATTACK FAILED: no candidate produced a validated plaintext")),
    }
}

fn cmd_lll(input: &Path, out: &Path, delta: &str) -> Outcome {
    let basis = format::matrix_from_json(&read_text(input)?).map_err(usage)?;
    let delta = format::parse_rational(delta, "delta").map_err(usage)?;
    let (reduced, stats) = lll_reduce_with_stats(&basis, &delta).map_err(op)?;
    write(out, format::matrix_to_json(&reduced))?;
    println!(
        "reduced {}x{} basis: {} swaps, {} size reductions",
        basis.rank(),
        basis.dim(),
        stats.swaps,
        stats.size_reductions
    );
    Ok(())
}

fn cmd_sda(input: &Path, out: &Path) -> Outcome {
    let problem = format::sda_problem_from_json(&read_text(input)?).map_err(usage)?;
    let solution = solve_sda(&problem).map_err(op)?;
    write(out, format::sda_solution_to_json(solution.as_ref()))?;
    match solution {
        Some(s) => {
            println!("q = {}, quality = {}", s.q, format::rational_to_string(&s.quality));
            Ok(())
        }
        None => Err(op("no reduced row met both approximation bounds")),
    }
}

fn cmd_bench(args: &BenchArgs) -> Outcome {
    let mut grid = TrialGrid::new(args.n_values.clone(), args.trials, args.seed);
    grid.slack_bits = args.slack_bits;
    grid.message_bytes = args.message_bytes;
    grid.ell_sweep = args.sweep.ell_sweep.clone();
    grid.lambda_exponents = args.sweep.lambda_exp_range;
    grid.max_candidates = args.sweep.max_candidates;
    grid.validate().map_err(usage)?;
    let records = run_grid(&grid).map_err(op)?;
    if let Some(path) = &args.csv {
        let file = fs::File::create(path).map_err(|e| op(format!("{}: {e}", path.display())))?;
        write_csv(&records, file).map_err(op)?;
    }
    let summary = summarize(&records);
    println!("{:>5} {:>7} {:>10} {:>8} {:>12} {:>13}", "n", "trials", "successes", "rate", "median_ms", "selection_ok");
    for row in &summary {
        println!(
            "{:>5} {:>7} {:>10} {:>8.3} {:>12.2} {:>13}",
            row.n, row.trials, row.successes, row.success_rate, row.median_ms, row.selection_ok
        );
    }
    if let Some(slope) = scaling_slope(&summary) {
        println!("log-log slope of median time against n: {slope:.2}");
    }
    Ok(())
}

fn cmd_demo(seed: u64, n: usize) -> Outcome {
    let params = SchemeParams::desk(n);
    params.validate().map_err(usage)?;
    let (kp, message, ct) = trial_instance(&params, seed, 4).map_err(op)?;
    println!(
        "key: n = {}, {} groups of {}, take {} -> {}-bit blocks, seed {}",
        n,
        params.subsets,
        params.group_size,
        params.take,
        params.block_bits(),
        seed
    );
    println!("  private modulus p = {}", kp.private.p);

    println!("message {} -> {} ciphertext blocks, D' = {}", hex::encode(&message), ct.blocks.len(), ct.d_prime);
    let in_order = selection_in_order_superincreasing(&kp.private.b, &ct.d_prime, &params).map_err(op)?;
    println!("  selected private weights super-increasing in permuted order: {in_order}");

    let cfg = AttackConfig::default_for(n);
    println!(
        "attacking with l in {:?} and {} values of lambda",
        cfg.ell_sweep,
        cfg.lambda_sweep.len()
    );
    let report = full_attack(&kp.public, &ct, &cfg).map_err(op)?;
    println!(
        "  {} lattices reduced, {} LLL swaps, {} candidates tried",
        report.lattices_reduced, report.lll_swaps, report.candidates_tried
    );
    match (&report.plaintext, &report.equivalent_key) {
        (Some(plain), Some(key)) if report.success && *plain == message => {
            println!("  multiplier k1 = {}", report.winning_k1.as_ref().expect("set on success"));
            println!("  equivalent key U' = {}, p' = {}", key.u_prime, key.p_prime);
            println!("  recovered {}", hex::encode(plain));
            println!("ATTACK SUCCEEDED");
            Ok(())
        }
        _ => Err(op("ATTACK FAILED")),
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Keygen(args) => cmd_keygen(&args),
        Command::Encrypt { public, input, out } => cmd_encrypt(&public, &input, &out),
        Command::Decrypt { private, input, out } => cmd_decrypt(&private, &input, &out),
        Command::Attack(args) => cmd_attack(&args),
        Command::Lll { input, out, delta } => cmd_lll(&input, &out, &delta),
        Command::Sda { input, out } => cmd_sda(&input, &out),
        Command::Bench(args) => cmd_bench(&args),
        Command::Demo { seed, n } => cmd_demo(seed, n),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Operation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
