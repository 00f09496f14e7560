use std::path::Path;

use physdist_core::ot::{
    hamming_metric, line_metric, torus_metric_1d, transport_plan, DistanceConfig, Distribution,
    MetricSpace,
};

use super::{kv, Env};
use crate::cli::{MetricKind, OtArgs};
use crate::error::{CliError, CliResult};
use crate::output::fmt_num;

/// Reads `label,weight` rows; `#` lines and a non-numeric header row are skipped.
pub fn read_weights(path: &Path) -> CliResult<(Vec<String>, Vec<f64>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::parse(path, e.to_string()))?;
    let (mut labels, mut weights) = (Vec::new(), Vec::new());
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::parse(path, e.to_string()))?;
        if rec.len() != 2 {
            return Err(CliError::parse(
                path,
                format!("row {}: expected `label,weight`", n + 1),
            ));
        }
        match rec[1].parse::<f64>() {
            Ok(w) => {
                labels.push(rec[0].to_string());
                weights.push(w);
            }
            Err(_) if n == 0 => continue,
            Err(_) => {
                return Err(CliError::parse(
                    path,
                    format!("row {}: weight {:?} is not a number", n + 1, &rec[1]),
                ))
            }
        }
    }
    if labels.is_empty() {
        return Err(CliError::parse(path, "no rows"));
    }
    Ok((labels, weights))
}

fn numeric_labels(labels: &[String]) -> CliResult<Vec<f64>> {
    labels
        .iter()
        .map(|l| {
            l.parse::<f64>()
                .map_err(|_| CliError::usage(format!("label {l:?} is not a number")))
        })
        .collect()
}

fn bit_labels(labels: &[String]) -> CliResult<Vec<Vec<bool>>> {
    labels
        .iter()
        .map(|l| {
            l.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(CliError::usage(format!("label {l:?} is not a bitstring"))),
                })
                .collect()
        })
        .collect()
}

fn read_matrix(path: &Path, n: usize) -> CliResult<MetricSpace> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::parse(path, e.to_string()))?;
    let mut flat = Vec::with_capacity(n * n);
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::parse(path, e.to_string()))?;
        rows += 1;
        if rec.len() != n {
            return Err(CliError::parse(
                path,
                format!("row {rows} has {} entries, expected {n}", rec.len()),
            ));
        }
        for v in rec.iter() {
            flat.push(v.parse::<f64>().map_err(|_| {
                CliError::parse(path, format!("row {rows}: {v:?} is not a number"))
            })?);
        }
    }
    if rows != n {
        return Err(CliError::parse(path, format!("{rows} rows, expected {n}")));
    }
    Ok(MetricSpace::from_matrix(n, flat)?)
}

pub fn build_metric(args: &OtArgs, labels: &[String]) -> CliResult<MetricSpace> {
    Ok(match args.metric {
        MetricKind::Line => line_metric(&numeric_labels(labels)?)?,
        MetricKind::Torus => {
            let period = args
                .period
                .ok_or_else(|| CliError::usage("--metric torus needs --period"))?;
            torus_metric_1d(&numeric_labels(labels)?, period)?
        }
        MetricKind::Hamming => hamming_metric(&bit_labels(labels)?)?,
        MetricKind::File => {
            let path = args
                .metric_file
                .as_ref()
                .ok_or_else(|| CliError::usage("--metric file needs --metric-file"))?;
            read_matrix(path, labels.len())?
        }
    })
}

pub fn run(args: &OtArgs, env: &mut Env) -> CliResult<()> {
    let cfg = DistanceConfig::new(args.lambda)?;
    let (lp, wp) = read_weights(&args.p)?;
    let (lq, wq) = read_weights(&args.q)?;
    if lp != lq {
        return Err(CliError::usage(
            "p and q must list the same labels in the same order",
        ));
    }
    let space = build_metric(args, &lp)?;
    let p = Distribution::new(wp)?;
    let q = Distribution::new(wq)?;
    let plan = transport_plan(&p, &q, &space, cfg)?;
    let distance = match args.lambda {
        1 => plan.cost(),
        _ => plan.cost().max(0.0).sqrt(),
    };
    let metric = match args.metric {
        MetricKind::Line => "line",
        MetricKind::Torus => "torus",
        MetricKind::Hamming => "hamming",
        MetricKind::File => "file",
    };
    let out = env.open(vec![
        kv("p", args.p.display()),
        kv("q", args.q.display()),
        kv("metric", metric),
        kv("period", args.period.map_or("none".into(), fmt_num)),
        kv("lambda", args.lambda),
    ])?;
    if args.plan {
        let rows: Vec<Vec<String>> = plan
            .entries()
            .iter()
            .map(|&(i, j, m)| {
                vec![
                    i.to_string(),
                    j.to_string(),
                    lp[i].clone(),
                    lq[j].clone(),
                    fmt_num(m),
                ]
            })
            .collect();
        out.csv(
            "ot_plan.csv",
            &[
                kv("distance", fmt_num(distance)),
                kv("cost", fmt_num(plan.cost())),
            ],
            &["i", "j", "label_i", "label_j", "mass"],
            &rows,
        )?;
    }
    env.say(fmt_num(distance))
}
