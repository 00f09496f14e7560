use physdist_core::phase::{build_phase_lattice_1d, build_phase_lattice_2d, PhaseWindow};
use physdist_core::Error;

use super::{kv, Env};
use crate::basis_io::encode;
use crate::cli::ExportBasisArgs;
use crate::error::CliResult;

/// Largest exported dimension; the dense matrix takes `16·D²` bytes.
pub const MAX_EXPORT_DIM: usize = 2500;

pub fn run(args: &ExportBasisArgs, env: &mut Env) -> CliResult<()> {
    let dim = args.l.checked_pow(2 * args.dof).unwrap_or(usize::MAX);
    if dim > MAX_EXPORT_DIM {
        return Err(Error::ResourceLimit(format!(
            "basis dimension {dim} exceeds {MAX_EXPORT_DIM}"
        ))
        .into());
    }
    let basis = match args.dof {
        1 => build_phase_lattice_1d(args.l, PhaseWindow::Shifted)?,
        _ => build_phase_lattice_2d(args.l)?,
    };
    let m = basis.matrix();
    let name = format!("basis_L{}_dof{}.bin", args.l, args.dof);
    let out = env.open(vec![
        kv("L", args.l),
        kv("dof", args.dof),
        kv("window", "shifted"),
    ])?;
    out.write(&name, &encode(args.l, args.dof as usize, &m))?;
    env.say(format!("{name}: dimension {}", m.nrows()))
}
