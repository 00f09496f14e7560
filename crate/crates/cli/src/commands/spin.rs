use physdist_core::xxz::{
    diagonalize_chain, level_spacing_statistics, poisson_density, spin_chaos_measure,
    wigner_density, SpinChainParams, EDGE_FRACTION,
};

use super::{kv, Env};
use crate::cli::SpinArgs;
use crate::error::CliResult;
use crate::output::fmt_num;

pub fn run(args: &SpinArgs, env: &mut Env) -> CliResult<()> {
    let params =
        SpinChainParams::new(args.sites, args.up, args.j1, args.j2, args.eps, args.defect)?;
    let eig = diagonalize_chain(&params)?;
    let stats = level_spacing_statistics(eig.values())?;
    let chaos = spin_chaos_measure(&params, &eig)?;

    let out = env.open(vec![
        kv("sites", args.sites),
        kv("up", args.up),
        kv("j1", fmt_num(args.j1)),
        kv("j2", fmt_num(args.j2)),
        kv("eps", fmt_num(args.eps)),
        kv("defect", args.defect),
        kv("dim", params.dim()),
    ])?;
    let levels: Vec<Vec<String>> = eig
        .values()
        .iter()
        .enumerate()
        .map(|(i, &e)| vec![i.to_string(), fmt_num(e)])
        .collect();
    out.csv("spin_eigenvalues.csv", &[], &["index", "energy"], &levels)?;

    let hist: Vec<Vec<String>> = stats
        .histogram
        .iter()
        .map(|&(s, d)| {
            vec![
                fmt_num(s),
                fmt_num(d),
                fmt_num(poisson_density(s)),
                fmt_num(wigner_density(s)),
            ]
        })
        .collect();
    out.csv(
        "spin_spacings.csv",
        &[
            kv("edge_fraction", fmt_num(EDGE_FRACTION)),
            kv("spacings", stats.spacings.len()),
            kv("ks_poisson", fmt_num(stats.ks_poisson)),
            kv("ks_wigner", fmt_num(stats.ks_wigner)),
        ],
        &["s", "density", "poisson", "wigner"],
        &hist,
    )?;

    let rows: Vec<Vec<String>> = chaos
        .states
        .iter()
        .zip(&chaos.upsilon)
        .enumerate()
        .map(|(i, (c, &u))| {
            let bits: String = c
                .bits()
                .iter()
                .map(|&b| if b { '1' } else { '0' })
                .collect();
            vec![i.to_string(), bits, fmt_num(u)]
        })
        .collect();
    out.csv(
        "spin_upsilon.csv",
        &[
            kv("reference", "uniform"),
            kv("mean", fmt_num(chaos.mean())),
            kv("median", fmt_num(chaos.median())),
        ],
        &["state", "configuration", "upsilon"],
        &rows,
    )?;

    env.say(format!(
        "KS to Poisson {}, KS to Wigner {}",
        fmt_num(stats.ks_poisson),
        fmt_num(stats.ks_wigner)
    ))?;
    env.say(format!(
        "mean upsilon {}, median {}",
        fmt_num(chaos.mean()),
        fmt_num(chaos.median())
    ))
}
