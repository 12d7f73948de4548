//! Configuration, tables, plots and VTK output, and the driver behind the
//! `amfem` binary.

pub mod config;
pub mod plot;
pub mod table;
pub mod vtk;

use std::path::Path;

use crate::adaptivity::{adapt_loop_with, LevelRecord};
use crate::mesh::write_mesh;
use crate::{Error, Result};

pub use config::{parse_config, Emit, RunConfig};
pub use plot::{emit_convergence_plot, fit_slope, tail_slope};
pub use table::{emit_table, format_table, read_table};
pub use vtk::{emit_vtk, read_vtk};

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Runs the adaptive loop for `config` and writes the requested artifacts
/// into `config.out`.
pub fn run(config: &RunConfig) -> Result<Vec<LevelRecord>> {
    let problem = config.problem()?;
    let out = &config.out;
    if config.emit.any() {
        std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    }
    let mut last = None;
    let records = adapt_loop_with(problem.as_ref(), &config.params, &config.loop_options(), |state| {
        let level = state.record.level;
        if config.emit.indicators {
            write(&out.join(format!("indicators_{level:03}.csv")), &table::format_indicators(state.report))?;
        }
        if config.emit.vtk || config.emit.mesh {
            last = Some((state.mesh.clone(), state.discrete.mixed.clone()));
        }
        Ok(())
    })?;
    if let Some((mesh, sol)) = &last {
        if config.emit.vtk {
            emit_vtk(mesh, sol, &out.join("solution.vtk"))?;
        }
        if config.emit.mesh {
            write(&out.join("mesh.txt"), &write_mesh(mesh))?;
        }
    }
    if config.emit.csv {
        emit_table(&records, Some(&config.describe()), &out.join("levels.csv"))?;
    }
    if config.emit.svg && records.len() >= 2 {
        emit_convergence_plot(&records, &[-0.5, -0.25], &out.join("convergence.svg"))?;
    }
    Ok(records)
}
