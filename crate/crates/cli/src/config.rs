use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use anyhow::{bail, Context};
use memlen::io::{read_bin, read_text};
use memlen::{ModelSpec, Symbol};

use crate::Format;

/// Resolves `--model`: an existing file, inline JSON, or a preset name.
pub fn load_model(arg: &str) -> anyhow::Result<ModelSpec> {
    let path = Path::new(arg);
    let spec: ModelSpec = if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        serde_json::from_str(&text).with_context(|| format!("parsing model spec {arg}"))?
    } else if arg.trim_start().starts_with('{') {
        serde_json::from_str(arg).context("parsing inline model spec")?
    } else if let Some(s) = ModelSpec::preset(arg) {
        s
    } else {
        bail!(
            "model {arg:?} is neither a file nor a preset (presets: {})",
            memlen::processes::PRESETS.join(", ")
        );
    };
    spec.build().with_context(|| format!("invalid model {arg}"))?;
    Ok(spec)
}

/// Parses `a,b,c` or `start:end:step`; the result must be strictly increasing and positive.
pub fn parse_checkpoints(s: &str) -> anyhow::Result<Vec<usize>> {
    let out: Vec<usize> = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            bail!("checkpoint range must be start:end:step, got {s:?}");
        }
        let num = |t: &str| -> anyhow::Result<usize> {
            t.trim().parse().with_context(|| format!("bad checkpoint number {t:?}"))
        };
        let (a, b, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if step == 0 {
            bail!("checkpoint step must be positive");
        }
        (a..=b).step_by(step).collect()
    } else {
        s.split(',')
            .map(|t| t.trim().parse().with_context(|| format!("bad checkpoint {t:?}")))
            .collect::<anyhow::Result<_>>()?
    };
    if out.is_empty() {
        bail!("no checkpoints in {s:?}");
    }
    if out[0] == 0 {
        bail!("checkpoints must be positive");
    }
    if out.windows(2).any(|w| w[1] <= w[0]) {
        bail!("checkpoints must be strictly increasing");
    }
    Ok(out)
}

pub fn infer_format(path: &Path, explicit: Option<Format>) -> Format {
    explicit.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some("bin") => Format::Bin,
        _ => Format::Txt,
    })
}

pub fn read_sample(path: &Path, format: Format) -> anyhow::Result<Vec<Symbol>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let v = match format {
        Format::Txt => read_text(BufReader::new(f)),
        Format::Bin => read_bin(BufReader::new(f)),
    }
    .with_context(|| format!("reading {}", path.display()))?;
    if v.len() < 2 {
        bail!("{}: a sample needs at least two symbols", path.display());
    }
    Ok(v)
}

/// Worker pool capped by `MEMLEN_THREADS`.
pub fn pool() -> anyhow::Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("MEMLEN_THREADS") {
        let k: usize = v.parse().with_context(|| format!("MEMLEN_THREADS={v:?}"))?;
        if k == 0 {
            bail!("MEMLEN_THREADS must be positive");
        }
        b = b.num_threads(k);
    }
    b.build().map_err(|e| anyhow::Error::new(crate::Internal(e.to_string())))
}
