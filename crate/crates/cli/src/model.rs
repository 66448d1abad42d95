use std::fmt;
use std::path::Path;

use anyhow::{Context, Result};
use latwalk::catalog::builtin;
use latwalk::enumerate::EndpointFilter;
use latwalk::stepset::{compass_vector, StepSet};

/// Missing or contradictory command-line input.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Resolves `--model`: an existing file holding a step-set document, a
/// built-in name, or a comma separated compass list.
pub fn load(arg: Option<&str>) -> Result<StepSet> {
    let arg = arg.ok_or_else(|| UsageError("--model is required".into()))?;
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        return Ok(StepSet::parse_document(&text)?.with_label(label));
    }
    if let Some(s) = builtin(arg) {
        return Ok(s);
    }
    let list = arg.trim_matches(|c| c == '{' || c == '}');
    if !list.is_empty() && list.split(',').all(|n| compass_vector(n).is_some()) {
        return Ok(StepSet::from_compass_list(list)?);
    }
    Err(UsageError(format!("{arg:?} is neither a file, a built-in model nor a list of compass steps")).into())
}

pub fn filter(arg: &str, s: &StepSet) -> Result<EndpointFilter> {
    let f = EndpointFilter::parse(arg)?;
    if f.zero_axes(s.dim()).iter().any(|&a| a >= s.dim()) {
        return Err(UsageError(format!("endpoint {arg} names an axis beyond dimension {}", s.dim())).into());
    }
    Ok(f)
}
