use std::fs::File;

use anyhow::{bail, Context};
use memlen::io::{write_bin, write_text};
use memlen::processes::rng::{replica_rng, RNG_ID};
use rayon::prelude::*;

use crate::config::{load_model, pool};
use crate::manifest::{self, Manifest, SimulateManifest};
use crate::{Format, Internal, SimulateArgs};

pub fn sample_name(replica: u64, format: Format) -> String {
    format!("sample-{replica:03}.{}", format.extension())
}

pub fn run(a: &SimulateArgs) -> anyhow::Result<()> {
    if a.n == 0 {
        bail!("--n must be positive");
    }
    if a.replicas == 0 {
        bail!("--replicas must be positive");
    }
    let spec = load_model(&a.model)?;
    let model = spec.build()?;
    manifest::prepare_dir(&a.out)?;
    let files: Vec<String> = (0..a.replicas).map(|r| sample_name(r, a.format)).collect();
    pool()?.install(|| {
        files.par_iter().enumerate().try_for_each(|(r, name)| -> anyhow::Result<()> {
            let path = model
                .generate_rng(a.n, &mut replica_rng(a.seed, r as u64))
                .map_err(|e| Internal(e.to_string()))?;
            let f = File::create(a.out.join(name)).with_context(|| format!("creating {name}"))?;
            match a.format {
                Format::Txt => write_text(f, path.symbols()),
                Format::Bin => write_bin(f, path.symbols()),
            }
            .with_context(|| format!("writing {name}"))
        })
    })?;
    manifest::write(
        &a.out,
        &Manifest::Simulate(SimulateManifest {
            schema_version: manifest::SCHEMA_VERSION,
            model: spec,
            n: a.n,
            seed: a.seed,
            rng: RNG_ID.to_string(),
            replicas: a.replicas,
            format: a.format,
            files,
        }),
    )
}
