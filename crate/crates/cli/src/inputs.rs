//! Parsing of permutation files, bank files, group sources, and
//! target strings into core types, with file problems and configuration
//! problems kept apart for exit-code purposes.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qperm_core::{FiniteGroup, Permutation, ProgramBank, SearchTarget};

use crate::error::CliError;

/// A permutation from `random:<seed>` or from a one-line image file; its
/// size is validated against the expected count.
pub fn load_permutation(source: &str, n: usize) -> Result<Permutation, CliError> {
    if let Some(seed_text) = source.strip_prefix("random:") {
        let seed: u64 = seed_text
            .parse()
            .map_err(|_| CliError::Config(format!("bad permutation seed {seed_text:?}")))?;
        if n < 1 {
            return Err(CliError::Config("permutation size must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return Ok(Permutation::random(n, &mut rng));
    }
    let text = std::fs::read_to_string(source)
        .map_err(|e| CliError::file(source, e))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let line = lines
        .next()
        .ok_or_else(|| CliError::file(source, "empty permutation file"))?;
    if lines.next().is_some() {
        return Err(CliError::file(source, "expected a single image row"));
    }
    let perm = Permutation::parse_line(line).map_err(|e| CliError::file(source, e))?;
    if perm.len() != n {
        return Err(CliError::Config(format!(
            "permutation in {source} has {} images, --n says {n}",
            perm.len()
        )));
    }
    Ok(perm)
}

/// A bank from a file of image rows, validated against the expected shape.
pub fn load_bank(path: &Path, m: usize, n: usize) -> Result<ProgramBank, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::file(&path.display().to_string(), e))?;
    let bank = ProgramBank::parse(&text)
        .map_err(|e| CliError::file(&path.display().to_string(), e))?;
    if bank.len() != m {
        return Err(CliError::Config(format!(
            "bank in {} has {} programs, --m says {m}",
            path.display(),
            bank.len()
        )));
    }
    if bank.degree() != n {
        return Err(CliError::Config(format!(
            "bank in {} acts on {} elements, --n says {n}",
            path.display(),
            bank.degree()
        )));
    }
    Ok(bank)
}

/// A group from `builtin:Z<n>`, `builtin:S<n>`, `builtin:D<n>`, or a
/// Cayley-table file.
pub fn load_group(source: &str) -> Result<FiniteGroup, CliError> {
    if let Some(name) = source.strip_prefix("builtin:") {
        let (family, size) = name.split_at(1);
        let size: usize = size
            .parse()
            .map_err(|_| CliError::Config(format!("bad builtin group {name:?}")))?;
        let group = match family {
            "Z" | "z" => Ok(FiniteGroup::cyclic(size)),
            "S" | "s" => FiniteGroup::symmetric(size),
            "D" | "d" => FiniteGroup::dihedral(size),
            _ => {
                return Err(CliError::Config(format!(
                    "unknown builtin family {family:?}; use Z, S, or D"
                )))
            }
        };
        return group.map_err(CliError::config);
    }
    let text = std::fs::read_to_string(source).map_err(|e| CliError::file(source, e))?;
    FiniteGroup::parse(&text).map_err(|e| CliError::file(source, e))
}

/// A target from `x:y` pairs separated by commas.
pub fn parse_target(text: &str, n: usize) -> Result<SearchTarget, CliError> {
    let mut pairs = Vec::new();
    for part in text.split(',') {
        let (x, y) = part
            .split_once(':')
            .ok_or_else(|| CliError::Config(format!("bad target pair {part:?}, want x:y")))?;
        let x: usize = x
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("bad target input {x:?}")))?;
        let y: usize = y
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("bad target output {y:?}")))?;
        if x >= n || y >= n {
            return Err(CliError::Config(format!(
                "target pair {x}:{y} out of range for --n {n}"
            )));
        }
        pairs.push((x, y));
    }
    SearchTarget::new(pairs).map_err(CliError::config)
}
