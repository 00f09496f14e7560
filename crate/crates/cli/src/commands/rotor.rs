use physdist_core::ot::DistanceConfig;
use physdist_core::rotor::{
    default_starts, three_distance_experiment, ClassicalPoint, LongTimeAverage, RotorParams,
    RotorScan,
};
use rayon::prelude::*;

use super::{kv, write_scan, Env, ScanAxes};
use crate::cli::{RotorEvolveArgs, RotorScanArgs};
use crate::error::CliResult;
use crate::output::{fmt_num, fmt_opt};

pub fn evolve(args: &RotorEvolveArgs, env: &mut Env) -> CliResult<()> {
    let params = RotorParams::new(args.k, args.m)?;
    let cfg = DistanceConfig::new(args.lambda)?;
    let (d1, d2) = default_starts(args.m);
    let s1 = args.start1.map_or(d1, |(q, p)| ClassicalPoint::new(q, p));
    let s2 = match (args.start1, args.start2) {
        (_, Some((q, p))) => ClassicalPoint::new(q, p),
        (Some(_), None) => {
            let w = params.cell_width();
            ClassicalPoint::new(s1.q + w, s1.p + w)
        }
        (None, None) => d2,
    };
    let rows = three_distance_experiment(params, s1, s2, args.kicks, cfg)?;

    let out = env.open(vec![
        kv("K", fmt_num(args.k)),
        kv("m", args.m),
        kv("kicks", args.kicks),
        kv("start1", format!("{},{}", fmt_num(s1.q), fmt_num(s1.p))),
        kv("start2", format!("{},{}", fmt_num(s2.q), fmt_num(s2.p))),
        kv("lambda", args.lambda),
    ])?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.kick.to_string(),
                fmt_num(r.classical),
                fmt_num(r.physical),
                fmt_num(r.expectation),
                fmt_num(r.overlap),
            ]
        })
        .collect();
    out.csv(
        "rotor_evolve.csv",
        &[],
        &["kick", "classical", "physical", "expectation", "overlap"],
        &table,
    )?;
    let (first, last) = (rows[0], rows[rows.len() - 1]);
    env.say(format!(
        "kick {}: classical {} physical {}; kick {}: classical {} physical {}",
        first.kick,
        fmt_num(first.classical),
        fmt_num(first.physical),
        last.kick,
        fmt_num(last.classical),
        fmt_num(last.physical)
    ))
}

pub fn scan(args: &RotorScanArgs, env: &mut Env) -> CliResult<()> {
    let params = RotorParams::new(args.k, args.m)?;
    let cfg = DistanceConfig::new(args.lambda)?;
    let mode = args.stroboscopic.map_or(
        LongTimeAverage::DiagonalEnsemble,
        LongTimeAverage::Stroboscopic,
    );
    let scan = RotorScan::new(params, mode, cfg)?;
    let m = args.m;
    let values = (0..m * m)
        .into_par_iter()
        .map(|i| scan.cell_upsilon(i / m, i % m))
        .collect::<Result<Vec<f64>, _>>()?;
    let result = scan.assemble(values);

    let out = env.open(vec![kv("log", args.log)])?;
    let axes = ScanAxes {
        row_index: "ell",
        col_index: "theta",
        row_coord: "p",
        col_coord: "q",
    };
    write_scan(out, "rotor_scan", &result, &axes, args.log)?;
    env.say(format!(
        "median {} min {} max {}",
        fmt_opt(result.median()),
        fmt_opt(result.min()),
        fmt_opt(result.max())
    ))
}
