//! Dispatch from parsed arguments to the core algorithms, producing a
//! renderable record per run. Construction problems map to configuration
//! errors; runs that complete without a verified answer map to outcome
//! errors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use qperm_core::program_search::{self, GroverGeometry, ProgramBank, SearchTarget};
use qperm_core::{
    fixed_point, BvError, BvInstance, FixedPointError, FixedPointInstance, HiddenHomomorphism,
    ProgramSearchError,
};

use crate::args::{
    BvArgs, Cli, Command, ConjugacyArgs, FixedPointArgs, ProgramSearchArgs, SweepArgs, SweepOver,
};
use crate::error::CliError;
use crate::inputs;
use crate::output::{CommandOutput, CsvRecord};

pub const SCHEMA_VERSION: u32 = 1;

pub enum Execution {
    Record(Box<CommandOutput>),
    Table(String),
}

pub fn execute(cli: &Cli) -> Result<Execution, CliError> {
    match &cli.command {
        Command::Bv(args) => run_bv(args, cli.seed).map(|o| Execution::Record(Box::new(o))),
        Command::FixedPoint(args) => {
            run_fixed_point(args, cli.seed).map(|o| Execution::Record(Box::new(o)))
        }
        Command::ProgramSearch(args) => {
            run_program_search(args, cli.seed).map(|o| Execution::Record(Box::new(o)))
        }
        Command::Conjugacy(args) => {
            run_conjugacy(args, cli.seed).map(|o| Execution::Record(Box::new(o)))
        }
        Command::Sweep(args) => run_sweep(args, cli.seed).map(Execution::Table),
    }
}

fn envelope(csv: &mut CsvRecord, command: &str, seed: u64) {
    csv.push("schema_version", SCHEMA_VERSION);
    csv.push("library_version", qperm_core::VERSION);
    csv.push("command", command);
    csv.push("seed", seed);
}

fn run_bv(args: &BvArgs, seed: u64) -> Result<CommandOutput, CliError> {
    let hidden = match &args.multipliers {
        Some(multipliers) => {
            if multipliers.len() != args.m {
                return Err(CliError::Config(format!(
                    "{} multipliers given, --m says {}",
                    multipliers.len(),
                    args.m
                )));
            }
            HiddenHomomorphism::new(args.p, multipliers.clone()).map_err(CliError::config)?
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            HiddenHomomorphism::random(args.p, args.m, &mut rng).map_err(CliError::config)?
        }
    };
    let instance = match args.j0 {
        Some(j0) => BvInstance::with_generator(hidden.clone(), j0).map_err(CliError::config)?,
        None => BvInstance::new(hidden.clone()).map_err(CliError::config)?,
    };

    let outcome = qperm_core::run_bv(&instance).map_err(|e| match e {
        BvError::Group(g) => CliError::config(g),
        other => CliError::outcome(other),
    })?;

    let record = json!({
        "schema_version": SCHEMA_VERSION,
        "library_version": qperm_core::VERSION,
        "command": "bv",
        "seed": seed,
        "config": {
            "p": args.p,
            "m": args.m,
            "hidden": hidden.multipliers(),
            "j0": instance.generator(),
        },
        "result": {
            "y": outcome.exponents.entries(),
            "kernel_size": outcome.kernel.len(),
            "oracle_uses": outcome.oracle_uses,
            "peak_probability": outcome.peak_probability,
        },
    });
    let mut csv = CsvRecord::default();
    envelope(&mut csv, "bv", seed);
    csv.push("p", args.p);
    csv.push("m", args.m);
    csv.push_list("hidden", hidden.multipliers());
    csv.push("j0", instance.generator());
    csv.push_list("y", outcome.exponents.entries());
    csv.push("kernel_size", outcome.kernel.len());
    csv.push("oracle_uses", outcome.oracle_uses);
    csv.push("peak_probability", outcome.peak_probability);

    Ok(CommandOutput {
        record,
        csv,
        extra_files: Vec::new(),
    })
}

fn run_fixed_point(args: &FixedPointArgs, seed: u64) -> Result<CommandOutput, CliError> {
    let sigma = inputs::load_permutation(&args.perm, args.n)?;
    let instance = match args.t {
        Some(t) => FixedPointInstance::with_claimed_count(sigma, args.power, t).map_err(
            |e| match e {
                FixedPointError::BadTargetCount { .. } => CliError::config(e),
                other => CliError::outcome(other),
            },
        )?,
        None => FixedPointInstance::new(sigma, args.power).map_err(CliError::outcome)?,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcome = fixed_point::grover_fixed_point(&instance, &mut rng).map_err(CliError::outcome)?;
    let success = *outcome.trace.success_probabilities.last().expect("non-empty trace");

    let mut extra_files = Vec::new();
    if let Some(path) = &args.trace {
        let mut text = String::from("iteration,success_probability\n");
        for (k, p) in outcome.trace.success_probabilities.iter().enumerate() {
            text.push_str(&format!("{k},{p}\n"));
        }
        extra_files.push((path.clone(), text));
    }
    if let Some(path) = &args.dump_state {
        // The dump re-derives the pre-measurement state; the simulator is
        // exact, so this is the state every measurement sampled from.
        let (state, _) = fixed_point::evolve(&instance, outcome.trace.iterations)
            .map_err(CliError::outcome)?;
        let mut buffer = Vec::new();
        state
            .write_amplitudes_csv(args.dump_threshold, &mut buffer)
            .map_err(|e| CliError::file(&path.display().to_string(), e))?;
        let text = String::from_utf8(buffer).expect("csv dump is utf-8");
        extra_files.push((path.clone(), text));
    }

    let record = json!({
        "schema_version": SCHEMA_VERSION,
        "library_version": qperm_core::VERSION,
        "command": "fixed-point",
        "seed": seed,
        "config": {
            "n": args.n,
            "perm": args.perm,
            "power": args.power,
            "claimed_t": args.t,
        },
        "result": {
            "t": instance.target_count(),
            "iterations": outcome.trace.iterations,
            "success_probability": success,
            "element": outcome.element,
            "candidates": outcome.candidates,
            "verified": true,
            "oracle_calls_quantum": outcome.oracle_calls_quantum,
            "oracle_calls_classical": outcome.oracle_calls_classical,
        },
    });
    let mut csv = CsvRecord::default();
    envelope(&mut csv, "fixed-point", seed);
    csv.push("n", args.n);
    csv.push("perm", &args.perm);
    csv.push("power", args.power);
    csv.push("t", instance.target_count());
    csv.push("iterations", outcome.trace.iterations);
    csv.push("success_probability", success);
    csv.push("element", outcome.element);
    csv.push_list("candidates", &outcome.candidates);
    csv.push("verified", true);
    csv.push("oracle_calls_quantum", outcome.oracle_calls_quantum);
    csv.push("oracle_calls_classical", outcome.oracle_calls_classical);

    Ok(CommandOutput {
        record,
        csv,
        extra_files,
    })
}

fn run_program_search(args: &ProgramSearchArgs, seed: u64) -> Result<CommandOutput, CliError> {
    let target = inputs::parse_target(&args.target, args.n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (bank, bank_source) = match &args.bank {
        Some(path) => (
            inputs::load_bank(path, args.m, args.n)?,
            path.display().to_string(),
        ),
        None => {
            let winner = rng.gen_range(0..args.m);
            let bank = ProgramBank::random_with_unique_solution(
                args.m, args.n, &target, winner, &mut rng,
            )
            .map_err(CliError::config)?;
            (bank, "random".to_string())
        }
    };

    let map_err = |e: ProgramSearchError| match e {
        ProgramSearchError::NoSolutions
        | ProgramSearchError::VerificationFailed { .. }
        | ProgramSearchError::NotFound { .. }
        | ProgramSearchError::Sim(_) => CliError::outcome(e),
        other => CliError::config(other),
    };
    let outcome = if target.arity() == 1 {
        program_search::program_search(&bank, &target, &mut rng).map_err(map_err)?
    } else {
        program_search::tuple_program_search(&bank, &target, &mut rng).map_err(map_err)?
    };
    let success = *outcome.trace.success_probabilities.last().expect("non-empty trace");

    let mut extra_files = Vec::new();
    if let Some(path) = &args.dump_state {
        let (state, _) = program_search::evolve(&bank, &target, outcome.trace.iterations)
            .map_err(map_err)?;
        let mut buffer = Vec::new();
        state
            .write_amplitudes_csv(args.dump_threshold, &mut buffer)
            .map_err(|e| CliError::file(&path.display().to_string(), e))?;
        extra_files.push((path.clone(), String::from_utf8(buffer).expect("utf-8")));
    }

    let record = json!({
        "schema_version": SCHEMA_VERSION,
        "library_version": qperm_core::VERSION,
        "command": "program-search",
        "seed": seed,
        "config": {
            "m": args.m,
            "n": args.n,
            "bank": bank_source,
            "target": args.target,
            "arity": target.arity(),
        },
        "result": {
            "n_star": outcome.geometry.iterations,
            "solution_count": outcome.geometry.solution_count,
            "success_probability": success,
            "measured_j": outcome.program,
            "verified": true,
            "oracle_calls_quantum": outcome.oracle_calls_quantum,
            "oracle_calls_classical": outcome.oracle_calls_classical,
        },
    });
    let mut csv = CsvRecord::default();
    envelope(&mut csv, "program-search", seed);
    csv.push("m", args.m);
    csv.push("n", args.n);
    csv.push("bank", &bank_source);
    csv.push("target", &args.target);
    csv.push("arity", target.arity());
    csv.push("n_star", outcome.geometry.iterations);
    csv.push("solution_count", outcome.geometry.solution_count);
    csv.push("success_probability", success);
    csv.push("measured_j", outcome.program);
    csv.push("verified", true);
    csv.push("oracle_calls_quantum", outcome.oracle_calls_quantum);
    csv.push("oracle_calls_classical", outcome.oracle_calls_classical);

    Ok(CommandOutput {
        record,
        csv,
        extra_files,
    })
}

fn run_conjugacy(args: &ConjugacyArgs, seed: u64) -> Result<CommandOutput, CliError> {
    let group = inputs::load_group(&args.group)?;
    for g in [args.g1, args.g2] {
        if g >= group.order() {
            return Err(CliError::Config(format!(
                "element {g} out of range for a group of order {}",
                group.order()
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcome = program_search::conjugacy_search(&group, args.g1, args.g2, &mut rng)
        .map_err(CliError::outcome)?;

    // The absence branch is classically certified, so both branches count as
    // a verified answer.
    let verified = match outcome.conjugator {
        Some(g0) => group.mul(group.mul(g0, args.g2), group.inv(g0)) == args.g1,
        None => true,
    };
    if !verified {
        return Err(CliError::Outcome(format!(
            "conjugator {} failed the table check",
            outcome.conjugator.expect("checked above")
        )));
    }

    let record = json!({
        "schema_version": SCHEMA_VERSION,
        "library_version": qperm_core::VERSION,
        "command": "conjugacy",
        "seed": seed,
        "config": {
            "group": args.group,
            "order": group.order(),
            "g1": args.g1,
            "g2": args.g2,
        },
        "result": {
            "conjugate": outcome.conjugator.is_some(),
            "conjugator": outcome.conjugator,
            "verified": verified,
            "oracle_calls_quantum": outcome.oracle_calls_quantum,
            "oracle_calls_classical": outcome.oracle_calls_classical,
        },
    });
    let mut csv = CsvRecord::default();
    envelope(&mut csv, "conjugacy", seed);
    csv.push("group", &args.group);
    csv.push("order", group.order());
    csv.push("g1", args.g1);
    csv.push("g2", args.g2);
    csv.push("conjugate", outcome.conjugator.is_some());
    csv.push(
        "conjugator",
        outcome
            .conjugator
            .map(|g| g.to_string())
            .unwrap_or_default(),
    );
    csv.push("verified", verified);
    csv.push("oracle_calls_quantum", outcome.oracle_calls_quantum);
    csv.push("oracle_calls_classical", outcome.oracle_calls_classical);

    Ok(CommandOutput {
        record,
        csv,
        extra_files: Vec::new(),
    })
}

fn parse_sweep_values(text: &str) -> Result<Vec<usize>, CliError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Config(format!("bad sweep value {part:?}")))
        })
        .collect()
}

fn thread_count() -> Result<usize, CliError> {
    match std::env::var("QPERM_THREADS") {
        Err(_) => Ok(1),
        Ok(text) => text
            .parse::<usize>()
            .ok()
            .filter(|&t| t >= 1)
            .ok_or_else(|| CliError::Config(format!("bad QPERM_THREADS value {text:?}"))),
    }
}

/// One bank-size sweep row. The bank for size m is drawn on ChaCha stream m
/// of the seed, so a parameter point is reproducible on its own and the
/// table is identical however many threads computed it.
fn sweep_point(seed: u64, n: usize, m: usize) -> Result<String, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(m as u64);
    let target = SearchTarget::single(0, 1);
    let winner = rng.gen_range(0..m);
    let bank = ProgramBank::random_with_unique_solution(m, n, &target, winner, &mut rng)
        .map_err(CliError::config)?;
    let geometry = GroverGeometry::new(m, 1).map_err(CliError::config)?;
    let (_, probabilities) =
        program_search::evolve(&bank, &target, geometry.iterations).map_err(CliError::outcome)?;
    let success = probabilities.last().expect("non-empty");
    Ok(format!("{m},{n},{},{success}\n", geometry.iterations))
}

fn run_sweep(args: &SweepArgs, seed: u64) -> Result<String, CliError> {
    let values = parse_sweep_values(&args.values)?;
    if args.n < 2 {
        return Err(CliError::Config("--n must be at least 2".into()));
    }
    match args.over {
        SweepOver::M => {
            let mut table = String::from("m,n,n_star,success_probability\n");
            for &m in &values {
                if m < 2 {
                    return Err(CliError::Config(format!("bank size {m} must be at least 2")));
                }
            }
            let threads = thread_count()?.min(values.len().max(1));
            let rows: Vec<Result<String, CliError>> = if threads <= 1 {
                values.iter().map(|&m| sweep_point(seed, args.n, m)).collect()
            } else {
                let chunk_size = values.len().div_ceil(threads);
                let n = args.n;
                std::thread::scope(|scope| {
                    let handles: Vec<_> = values
                        .chunks(chunk_size)
                        .map(|chunk| {
                            scope.spawn(move || {
                                chunk
                                    .iter()
                                    .map(|&m| sweep_point(seed, n, m))
                                    .collect::<Vec<_>>()
                            })
                        })
                        .collect();
                    handles
                        .into_iter()
                        .flat_map(|h| h.join().expect("sweep worker panicked"))
                        .collect()
                })
            };
            for row in rows {
                table.push_str(&row?);
            }
            Ok(table)
        }
        SweepOver::Iterations => {
            if args.m < 2 {
                return Err(CliError::Config("--m must be at least 2".into()));
            }
            let mut table = String::from("m,n,iterations,success_probability\n");
            if values.is_empty() {
                return Ok(table);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let target = SearchTarget::single(0, 1);
            let winner = rng.gen_range(0..args.m);
            let bank =
                ProgramBank::random_with_unique_solution(args.m, args.n, &target, winner, &mut rng)
                    .map_err(CliError::config)?;
            let deepest = *values.iter().max().expect("non-empty");
            let (_, probabilities) = program_search::evolve(&bank, &target, deepest)
                .map_err(CliError::outcome)?;
            for &k in &values {
                table.push_str(&format!("{},{},{k},{}\n", args.m, args.n, probabilities[k]));
            }
            Ok(table)
        }
    }
}
