use std::collections::BTreeSet;
use std::fs::File;
use std::time::Instant;

use anyhow::{bail, Context};
use memlen::backward::chi;
use memlen::condprob::{qhat_fm_indexed, qhat_markov_indexed};
use memlen::counting::CountIndex;
use memlen::forward::{decide_p_indexed, forward_index, Chi, SchemeR};
use memlen::processes::rng::{replica_rng, RNG_ID};
use memlen::{Error, MemoryLength, Method, OracleAnswer, Params, ProcessModel, Sample, Symbol};
use rayon::prelude::*;

use crate::config::{infer_format, load_model, parse_checkpoints, pool, read_sample};
use crate::manifest::{self, EstimateManifest, Manifest, CSV_SCHEMA};
use crate::{EstimateArgs, Internal, SchemeArg};

pub fn csv_name(replica: usize) -> String {
    format!("estimate-{replica:03}.csv")
}

fn internal(e: impl std::fmt::Display) -> anyhow::Error {
    anyhow::Error::new(Internal(e.to_string()))
}

/// Where the paths come from.
enum Source {
    Model { model: ProcessModel, seed: u64, len: usize },
    Files(Vec<Vec<Symbol>>),
}

struct Job<'a> {
    scheme: SchemeArg,
    params: Params,
    tolerance: f64,
    checkpoints: &'a [usize],
    model: Option<&'a ProcessModel>,
    /// Generated paths have positive probability; files are checked.
    trusted: bool,
    timing: bool,
}

pub fn run(a: &EstimateArgs) -> anyhow::Result<()> {
    let params = Params::new(a.gamma, a.beta, a.epsilon)?;
    if !(a.tolerance >= 0.0) {
        bail!("--tolerance must be nonnegative");
    }
    if a.replicas == 0 {
        bail!("--replicas must be positive");
    }
    let spec = a.model.as_deref().map(load_model).transpose()?;
    let listed = a.checkpoints.as_deref().map(parse_checkpoints).transpose()?;

    let (source, checkpoints) = if a.input.is_empty() {
        let Some(spec) = &spec else {
            bail!("either --model or --input is required");
        };
        let checkpoints = match (listed, a.n) {
            (Some(c), Some(n)) if *c.last().unwrap() > n => bail!("checkpoints exceed --n {n}"),
            (Some(c), _) => c,
            (None, Some(n)) if n > 0 => vec![n],
            _ => bail!("--n or --checkpoints is required with --model"),
        };
        let len = a.n.unwrap_or(*checkpoints.last().unwrap());
        let model = spec.build()?;
        (Source::Model { model, seed: a.seed, len }, checkpoints)
    } else {
        if a.replicas != 1 {
            bail!("--replicas applies to generated paths; pass one --input per replica instead");
        }
        let paths: Vec<Vec<Symbol>> = a
            .input
            .iter()
            .map(|p| read_sample(p, infer_format(p, a.format)))
            .collect::<anyhow::Result<_>>()?;
        let shortest = paths.iter().map(|v| v.len() - 1).min().unwrap();
        let checkpoints = match listed {
            Some(c) => c,
            None => vec![a.n.unwrap_or(shortest)],
        };
        if *checkpoints.last().unwrap() > shortest {
            bail!("checkpoint {} exceeds the shortest input (n = {shortest})", checkpoints.last().unwrap());
        }
        (Source::Files(paths), checkpoints)
    };

    manifest::prepare_dir(&a.out)?;
    let model = match &source {
        Source::Model { model, .. } => Some(model.clone()),
        Source::Files(_) => spec.as_ref().map(|s| s.build()).transpose()?,
    };
    let job = Job {
        scheme: a.scheme,
        params,
        tolerance: a.tolerance,
        checkpoints: &checkpoints,
        model: model.as_ref(),
        trusted: matches!(source, Source::Model { .. }),
        timing: !a.no_timing,
    };
    let replicas = match &source {
        Source::Model { .. } => a.replicas as usize,
        Source::Files(p) => p.len(),
    };
    let files: Vec<String> = (0..replicas).map(csv_name).collect();
    pool()?.install(|| {
        files.par_iter().enumerate().try_for_each(|(r, name)| -> anyhow::Result<()> {
            let symbols = match &source {
                Source::Model { model, seed, len } => {
                    model.generate_rng(*len, &mut replica_rng(*seed, r as u64)).map_err(internal)?
                }
                Source::Files(p) => Sample::forward(p[r].clone())?,
            };
            let f = File::create(a.out.join(name)).with_context(|| format!("creating {name}"))?;
            replica(&job, &symbols, f).with_context(|| format!("replica {r}"))
        })
    })?;

    let (seed, rng) = match &source {
        Source::Model { seed, .. } => (Some(*seed), Some(RNG_ID.to_string())),
        Source::Files(_) => (None, None),
    };
    manifest::write(
        &a.out,
        &Manifest::Estimate(EstimateManifest {
            schema_version: manifest::SCHEMA_VERSION,
            csv_schema: csv_header(a.scheme, &[]).join(","),
            scheme: a.scheme,
            gamma: a.gamma,
            beta: a.beta,
            epsilon: a.epsilon,
            tolerance: a.tolerance,
            checkpoints: checkpoints.clone(),
            model: spec,
            inputs: a.input.iter().map(|p| p.display().to_string()).collect(),
            seed,
            rng,
            timing: job.timing,
            files,
        }),
    )
}

/// Header; condprob schemes append `linf`, then `qhat_<x>` and `oracle_<x>` per symbol.
pub fn csv_header(scheme: SchemeArg, alphabet: &[Symbol]) -> Vec<String> {
    let mut h: Vec<String> = CSV_SCHEMA.split(',').map(str::to_string).collect();
    if scheme.is_condprob() {
        h.push("linf".into());
        h.extend(alphabet.iter().map(|x| format!("qhat_{x}")));
        h.extend(alphabet.iter().map(|x| format!("oracle_{x}")));
    }
    h
}

#[derive(Default)]
struct Row {
    in_set: bool,
    estimate: Option<String>,
    oracle: Option<OracleAnswer>,
    matched: Option<bool>,
    theta: Option<usize>,
    kappa: Option<usize>,
    /// Estimated law over the alphabet, for the condprob schemes.
    qhat: Option<Vec<f64>>,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn replica(job: &Job, path: &Sample, out: File) -> anyhow::Result<()> {
    let symbols = path.symbols();
    let alphabet: Vec<Symbol> = symbols.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(csv_header(job.scheme, &alphabet))?;

    let oracle_of = |past: &[Symbol]| -> anyhow::Result<Option<OracleAnswer>> {
        let Some(m) = job.model else { return Ok(None) };
        let res = if job.trusted { m.oracle_trusted(past) } else { m.oracle(past) };
        match res {
            Ok(a) => Ok(Some(a)),
            Err(Error::NoOracle) => Ok(None),
            Err(Error::ImpossiblePast) => bail!("sample has probability zero under the model"),
            Err(e) => Err(internal(e)),
        }
    };
    // The backward past at every checkpoint ends at the same present.
    let backward_oracle = match job.scheme {
        SchemeArg::Backward => oracle_of(symbols)?,
        _ => None,
    };
    let mut scheme_r = SchemeR::new(&job.params, Chi(job.params));
    let p = &job.params;

    for &n in job.checkpoints {
        let start = Instant::now();
        let mut row = Row::default();
        match job.scheme {
            SchemeArg::Backward => {
                let back = path.tail(n)?;
                let k = chi(&CountIndex::for_gamma(&back, p.gamma), p);
                row.in_set = true;
                row.estimate = Some(k.to_string());
                row.oracle = backward_oracle.clone();
                row.matched = row.oracle.as_ref().map(|o| o.memory == k);
            }
            SchemeArg::ForwardP | SchemeArg::CondprobFm => {
                let index = forward_index(&path.prefix(n)?, p.gamma)?;
                let d = decide_p_indexed(&index, p);
                row.theta = Some(d.theta);
                row.kappa = d.kappa;
                row.oracle = oracle_of(&symbols[..=n])?;
                if d.in_stopping_set {
                    let rho = d.rho.ok_or_else(|| internal("decision in the stopping set without rho"))?;
                    row.in_set = true;
                    row.estimate = Some(rho.to_string());
                    if job.scheme == SchemeArg::ForwardP {
                        row.matched = row.oracle.as_ref().map(|o| o.memory == MemoryLength::Finite(rho));
                    } else {
                        row.qhat = qhat_fm_indexed::<f64>(&index, rho, Method::Fm)
                            .ok()
                            .map(|est| law_on(&alphabet, |x| est.iter().find(|e| e.x == x).map_or(0.0, |e| e.qhat)));
                    }
                }
            }
            SchemeArg::ForwardR => {
                let d = scheme_r.decide(&path.prefix(n)?);
                row.theta = Some(d.theta);
                row.kappa = d.kappa;
                row.oracle = oracle_of(&symbols[..=n])?;
                if d.in_stopping_set {
                    let rho = d.rho.ok_or_else(|| internal("decision in the stopping set without rho"))?;
                    row.in_set = true;
                    row.estimate = Some(rho.to_string());
                    row.matched = row.oracle.as_ref().map(|o| o.memory == MemoryLength::Finite(rho));
                }
            }
            SchemeArg::CondprobMarkov => {
                let index = forward_index(&path.prefix(n)?, p.gamma)?;
                let est = qhat_markov_indexed::<f64>(&index, p);
                row.oracle = oracle_of(&symbols[..=n])?;
                if est.in_stopping_set {
                    row.in_set = true;
                    row.estimate = Some(est.order.to_string());
                    row.qhat = Some(law_on(&alphabet, |x| est.qhat(x)));
                }
            }
        }
        let ms = start.elapsed().as_secs_f64() * 1e3;

        let mut rec = vec![
            n.to_string(),
            u8::from(row.in_set).to_string(),
            opt(row.estimate),
            opt(row.oracle.as_ref().map(|o| o.memory)),
            String::new(),
            opt(row.theta),
            opt(row.kappa),
            if job.timing { format!("{ms:.3}") } else { String::new() },
        ];
        if job.scheme.is_condprob() {
            let linf = match (&row.qhat, &row.oracle) {
                (Some(q), Some(o)) => Some(sup_distance(&alphabet, q, o)),
                _ => None,
            };
            if row.in_set && row.oracle.is_some() {
                row.matched = Some(linf.is_some_and(|d| d <= job.tolerance));
            }
            rec.push(opt(linf.map(|d| format!("{d:.6}"))));
            match &row.qhat {
                Some(q) => rec.extend(q.iter().map(|v| format!("{v:.6}"))),
                None => rec.extend(alphabet.iter().map(|_| String::new())),
            }
            match &row.oracle {
                Some(o) => rec.extend(alphabet.iter().map(|&x| format!("{:.6}", o.prob(x)))),
                None => rec.extend(alphabet.iter().map(|_| String::new())),
            }
        }
        rec[4] = opt(row.matched.map(u8::from));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

fn law_on(alphabet: &[Symbol], f: impl Fn(Symbol) -> f64) -> Vec<f64> {
    alphabet.iter().map(|&x| f(x)).collect()
}

/// Sup distance over the observed alphabet and the oracle's support.
fn sup_distance(alphabet: &[Symbol], q: &[f64], o: &OracleAnswer) -> f64 {
    let on_alphabet = alphabet
        .iter()
        .zip(q)
        .map(|(&x, &v)| (v - o.prob(x)).abs())
        .fold(0.0, f64::max);
    o.law
        .iter()
        .filter(|(x, _)| alphabet.binary_search(x).is_err())
        .map(|&(_, p)| p.abs())
        .fold(on_alphabet, f64::max)
}
