use std::collections::BTreeMap;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context};

use crate::manifest::{self, Manifest};
use crate::ReportArgs;

/// One parsed estimate CSV.
struct Replica {
    source: String,
    /// `(n, in_set, match, linf)` per row.
    rows: Vec<(usize, bool, Option<bool>, Option<f64>)>,
}

impl Replica {
    fn in_set(&self) -> usize {
        self.rows.iter().filter(|r| r.1).count()
    }

    fn matches(&self) -> (usize, usize) {
        let compared: Vec<bool> = self.rows.iter().filter(|r| r.1).filter_map(|r| r.2).collect();
        (compared.iter().filter(|&&m| m).count(), compared.len())
    }
}

fn parse_flag(field: &str, what: &str) -> anyhow::Result<Option<bool>> {
    match field {
        "" => Ok(None),
        "0" => Ok(Some(false)),
        "1" => Ok(Some(true)),
        other => bail!("bad {what} value {other:?}"),
    }
}

fn load(dir: &Path, file: &str) -> anyhow::Result<Replica> {
    let path = dir.join(file);
    let mut rdr = csv::Reader::from_path(&path).with_context(|| format!("opening {}", path.display()))?;
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (Some(cn), Some(cs), Some(cm)) = (col("n"), col("in_set"), col("match")) else {
        bail!("{}: not an estimate CSV", path.display());
    };
    let cl = col("linf");
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let n: usize = rec[cn].parse().with_context(|| format!("{}: bad n", path.display()))?;
        let in_set = parse_flag(&rec[cs], "in_set")?.unwrap_or(false);
        let matched = parse_flag(&rec[cm], "match")?;
        let linf = match cl.map(|c| &rec[c]) {
            Some(s) if !s.is_empty() => Some(s.parse::<f64>()?),
            _ => None,
        };
        rows.push((n, in_set, matched, linf));
    }
    Ok(Replica {
        source: format!("{}/{file}", dir.display()),
        rows,
    })
}

/// Nearest-rank quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    Some(sorted[rank - 1])
}

fn ratio(a: usize, b: usize) -> Option<f64> {
    (b > 0).then(|| a as f64 / b as f64)
}

fn f(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.6}")).unwrap_or_default()
}

const SUMMARY_HEADER: &[&str] = &[
    "source",
    "rows",
    "in_set",
    "density",
    "matches",
    "compared",
    "match_rate",
    "match_rate_min",
    "linf_p50",
    "linf_p90",
    "linf_max",
];

/// Per-replica rows followed by an `aggregate` row whose `match_rate` is the mean over replicas.
fn summary(replicas: &[Replica]) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SUMMARY_HEADER)?;
    let linf_cols = |v: &mut Vec<f64>| {
        v.sort_by(f64::total_cmp);
        [quantile(v, 0.5), quantile(v, 0.9), v.last().copied()].map(f)
    };
    let mut rates = Vec::new();
    let mut all_linf = Vec::new();
    let (mut rows, mut in_set, mut matches, mut compared) = (0, 0, 0, 0);
    for r in replicas {
        let (m, c) = r.matches();
        let rate = ratio(m, c);
        rates.extend(rate);
        let mut linf: Vec<f64> = r.rows.iter().filter(|x| x.1).filter_map(|x| x.3).collect();
        all_linf.extend_from_slice(&linf);
        let [p50, p90, max] = linf_cols(&mut linf);
        w.write_record([
            r.source.clone(),
            r.rows.len().to_string(),
            r.in_set().to_string(),
            f(ratio(r.in_set(), r.rows.len()).or(Some(0.0))),
            m.to_string(),
            c.to_string(),
            f(rate),
            f(rate),
            p50,
            p90,
            max,
        ])?;
        rows += r.rows.len();
        in_set += r.in_set();
        matches += m;
        compared += c;
    }
    let mean = (!rates.is_empty()).then(|| rates.iter().sum::<f64>() / rates.len() as f64);
    let min = rates.iter().copied().reduce(f64::min);
    let [p50, p90, max] = linf_cols(&mut all_linf);
    w.write_record([
        "aggregate".to_string(),
        rows.to_string(),
        in_set.to_string(),
        f(ratio(in_set, rows).or(Some(0.0))),
        matches.to_string(),
        compared.to_string(),
        f(mean),
        f(min),
        p50,
        p90,
        max,
    ])?;
    Ok(w.into_inner()?)
}

/// Rows by checkpoint across replicas.
fn convergence(replicas: &[Replica]) -> anyhow::Result<Vec<u8>> {
    #[derive(Default)]
    struct Acc {
        replicas: usize,
        in_set: usize,
        matches: usize,
        compared: usize,
        linf_max: Option<f64>,
    }
    let mut by_n: BTreeMap<usize, Acc> = BTreeMap::new();
    for r in replicas {
        for &(n, in_set, matched, linf) in &r.rows {
            let a = by_n.entry(n).or_default();
            a.replicas += 1;
            if in_set {
                a.in_set += 1;
                if let Some(m) = matched {
                    a.compared += 1;
                    a.matches += usize::from(m);
                }
                if let Some(l) = linf {
                    a.linf_max = Some(a.linf_max.map_or(l, |x: f64| x.max(l)));
                }
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "replicas", "in_set", "density", "compared", "match_rate", "linf_max"])?;
    for (n, a) in by_n {
        w.write_record([
            n.to_string(),
            a.replicas.to_string(),
            a.in_set.to_string(),
            f(ratio(a.in_set, a.replicas)),
            a.compared.to_string(),
            f(ratio(a.matches, a.compared)),
            f(a.linf_max),
        ])?;
    }
    Ok(w.into_inner()?)
}

pub fn run(a: &ReportArgs) -> anyhow::Result<()> {
    let mut scheme = None;
    let mut replicas = Vec::new();
    for dir in &a.dirs {
        let Manifest::Estimate(m) = manifest::read(dir)? else {
            bail!("{}: not an estimate run", dir.display());
        };
        match scheme {
            None => scheme = Some(m.scheme),
            Some(s) if s != m.scheme => bail!(
                "scheme mismatch: {} is {}, earlier runs are {}",
                dir.display(),
                m.scheme.name(),
                s.name()
            ),
            _ => {}
        }
        for file in &m.files {
            replicas.push(load(dir, file)?);
        }
    }
    let summary = summary(&replicas)?;
    let table = convergence(&replicas)?;
    match &a.out {
        Some(out) => {
            std::fs::create_dir_all(out)?;
            File::create(out.join("summary.csv"))?.write_all(&summary)?;
            File::create(out.join("convergence.csv"))?.write_all(&table)?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&summary)?;
            writeln!(stdout)?;
            stdout.write_all(&table)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_rank() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&v, 0.5), Some(2.0));
        assert_eq!(quantile(&v, 0.9), Some(4.0));
        assert_eq!(quantile(&[], 0.5), None);
    }

    #[test]
    fn empty_stopping_set_reports_zero_density() {
        let r = Replica {
            source: "x".into(),
            rows: vec![(10, false, None, None), (20, false, None, None)],
        };
        let text = String::from_utf8(summary(&[r]).unwrap()).unwrap();
        let agg = text.lines().last().unwrap();
        assert_eq!(agg, "aggregate,2,0,0.000000,0,0,,,,,");
    }
}
