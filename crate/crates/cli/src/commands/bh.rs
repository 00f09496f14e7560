use physdist_core::bose_hubbard::{
    section_dispersion, section_points, BHParams, BhChaosContext, Direction, SectionSpec,
};
use physdist_core::Error;
use rayon::prelude::*;

use super::{kv, write_scan, Env, ScanAxes};
use crate::cli::{BhChaosArgs, BhModelArgs, BhSectionArgs};
use crate::error::CliResult;
use crate::output::{fmt_num, fmt_opt};

const C0: f64 = 1.0;

fn model(args: &BhModelArgs) -> CliResult<(BHParams, SectionSpec)> {
    let params = BHParams::new(C0, args.c_over_c0 * C0, args.l)?;
    let spec = SectionSpec::new(args.energy * C0, args.n2, Direction::Increasing)?;
    Ok((params, spec))
}

fn model_meta(args: &BhModelArgs, params: &BHParams) -> Vec<(String, String)> {
    vec![
        kv("c_over_c0", fmt_num(args.c_over_c0)),
        kv("energy", fmt_num(args.energy)),
        kv("n2", fmt_num(args.n2)),
        kv("L", args.l),
        kv("N", params.particles()),
    ]
}

pub fn section(args: &BhSectionArgs, env: &mut Env) -> CliResult<()> {
    let (params, spec) = model(&args.model)?;
    if !(args.t_max > 0.0 && args.dt > 0.0 && args.dt < args.t_max) {
        return Err(crate::error::CliError::usage("need 0 < dt < t-max"));
    }
    let seeds = &args.seeds.0;
    let orbits: Vec<_> = seeds
        .par_iter()
        .map(|&s| section_points(&spec, &params, s, args.t_max, args.dt))
        .collect();

    let mut meta = model_meta(&args.model, &params);
    meta.extend([
        kv("t_max", fmt_num(args.t_max)),
        kv("dt", fmt_num(args.dt)),
        kv("direction", "increasing"),
    ]);
    let out = env.open(meta)?;
    let (mut points, mut summary, mut lines) = (Vec::new(), Vec::new(), Vec::new());
    for (k, (seed, orbit)) in seeds.iter().zip(orbits).enumerate() {
        let (n1, t1) = (fmt_num(seed.0), fmt_num(seed.1));
        match orbit {
            Ok(pts) => {
                for (i, p) in pts.iter().enumerate() {
                    points.push(vec![
                        k.to_string(),
                        i.to_string(),
                        fmt_num(p.t),
                        fmt_num(p.n1),
                        fmt_num(p.theta1),
                    ]);
                }
                let d = section_dispersion(&pts);
                summary.push(vec![
                    k.to_string(),
                    n1.clone(),
                    t1.clone(),
                    pts.len().to_string(),
                    fmt_num(d),
                ]);
                lines.push(format!(
                    "seed {k} ({n1}, {t1}): {} points, dispersion {}",
                    pts.len(),
                    fmt_num(d)
                ));
            }
            Err(Error::Unreachable { .. }) => {
                summary.push(vec![
                    k.to_string(),
                    n1.clone(),
                    t1.clone(),
                    "0".into(),
                    "NA".into(),
                ]);
                lines.push(format!("seed {k} ({n1}, {t1}): not on the energy surface"));
            }
            Err(e) => return Err(e.into()),
        }
    }
    out.csv(
        "bh_section.csv",
        &[],
        &["seed", "crossing", "t", "n1", "theta1"],
        &points,
    )?;
    out.csv(
        "bh_section_seeds.csv",
        &[],
        &["seed", "n1", "theta1", "points", "dispersion"],
        &summary,
    )?;
    for l in lines {
        env.say(l)?;
    }
    Ok(())
}

pub fn chaos(args: &BhChaosArgs, env: &mut Env) -> CliResult<()> {
    let (params, spec) = model(&args.model)?;
    let step = args.grid_step.unwrap_or(1.0 / (3.0 * args.model.l as f64));
    let ctx = BhChaosContext::new(params, spec, step)?;
    let cols = ctx.cols();
    let values = (0..ctx.rows() * cols)
        .into_par_iter()
        .map(|i| ctx.grid_upsilon(i / cols, i % cols))
        .collect::<Result<Vec<_>, _>>()?;
    let map = ctx.assemble(values);

    let mut meta = model_meta(&args.model, &params);
    meta.push(kv("log", args.log));
    let out = env.open(meta)?;
    let axes = ScanAxes {
        row_index: "row",
        col_index: "col",
        row_coord: "n1",
        col_coord: "theta1",
    };
    write_scan(out, "bh_chaos", &map.scan, &axes, args.log)?;
    let shell = ctx.shell();
    let envelope: Vec<Vec<String>> = shell
        .envelope
        .iter()
        .map(|&(e, w)| vec![fmt_num(e), fmt_num(w), fmt_num(map.fit.eval(e))])
        .collect();
    out.csv(
        "bh_shell.csv",
        &[
            kv("fit_amplitude", fmt_num(map.fit.amplitude)),
            kv("fit_mean", fmt_num(map.fit.mean)),
            kv("fit_sigma", fmt_num(map.fit.sigma)),
            kv("fit_r_squared", fmt_num(map.fit.r_squared)),
        ],
        &["energy", "smoothed_weight", "gaussian"],
        &envelope,
    )?;
    env.say(format!("fit R^2 {}", fmt_num(map.fit.r_squared)))?;
    env.say(format!(
        "captured fraction {} +- {}",
        fmt_num(map.captured_mean),
        fmt_num(map.captured_std)
    ))?;
    env.say(format!(
        "grid {}x{}, unreachable {}, median {}",
        map.scan.rows,
        map.scan.cols,
        map.scan.missing(),
        fmt_opt(map.scan.median())
    ))
}
