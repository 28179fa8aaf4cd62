//! The worked examples, rebuilt from scratch on every run.

use std::path::Path;
use std::time::{Duration, Instant};

use symcert_core::certify::{certify, CertificationReport, CertifyOptions, RepresentationTable};
use symcert_core::group::{
    cube_rotation_group, cyclic_group, find_direct_decompositions, FiniteGroup,
};
use symcert_core::world::{
    canonical_table, coordinate_table, mixed_phase_table, world_group, GridWorldSpec, MixedAxes,
};

use crate::dataset::export_dataset;
use crate::error::Result;
use crate::formats::{write_json, write_table};
use crate::report::ReportFile;

/// One certification run with its wall time.
#[derive(Debug)]
pub struct DemoRun {
    pub name: &'static str,
    pub report: CertificationReport,
    pub elapsed: Duration,
}

fn run(
    name: &'static str,
    f: &RepresentationTable,
    options: CertifyOptions<'_>,
    world: &symcert_core::world::GridWorld,
    decomposition: &symcert_core::group::DirectProductDecomposition,
    started: Instant,
    out: Option<&Path>,
) -> Result<DemoRun> {
    let report = certify(f, &world.action, decomposition, &options)?;
    let elapsed = started.elapsed();
    if let Some(dir) = out {
        write_table(&dir.join(format!("{name}.csv")), f)?;
        write_json(
            &dir.join(format!("{name}.report.json")),
            &ReportFile::from(&report),
        )?;
    }
    Ok(DemoRun {
        name,
        report,
        elapsed,
    })
}

fn prepare(spec: &GridWorldSpec, out: Option<&Path>) -> Result<()> {
    if let Some(dir) = out {
        export_dataset(spec, dir)?;
    }
    Ok(())
}

/// The canonical embedding with its block-rotation action.
pub fn linear_grid(n: usize, out: Option<&Path>) -> Result<DemoRun> {
    let spec = GridWorldSpec::new(n)?;
    prepare(&spec, out)?;
    let started = Instant::now();
    let world = world_group(&spec);
    let f = canonical_table(&spec);
    let rep = world.canonical_representation();
    let options = CertifyOptions {
        linear_action: Some(&rep),
        reference: Some(&f),
        ..Default::default()
    };
    run(
        "canonical",
        &f,
        options,
        &world,
        &world.decomposition,
        started,
        out,
    )
}

/// Scaled integer coordinates, whose wrap-around step is not linear.
pub fn grid(n: usize, out: Option<&Path>) -> Result<DemoRun> {
    let spec = GridWorldSpec::new(n)?;
    prepare(&spec, out)?;
    let started = Instant::now();
    let world = world_group(&spec);
    let f = coordinate_table(&spec, [1.0, 1.0, 1.0])?;
    let reference = canonical_table(&spec);
    let options = CertifyOptions {
        reference: Some(&reference),
        ..Default::default()
    };
    run(
        "coordinates",
        &f,
        options,
        &world,
        &world.decomposition,
        started,
        out,
    )
}

/// The same kind of mixing judged against two decompositions: x with c
/// against `G_x × G_y × G_c`, and x with y against `G_p × G_c`.
pub fn mixing(n: usize, out: Option<&Path>) -> Result<[DemoRun; 2]> {
    let spec = GridWorldSpec::new(n)?;
    prepare(&spec, out)?;
    let world = world_group(&spec);
    let reference = canonical_table(&spec);
    let options = CertifyOptions {
        reference: Some(&reference),
        ..Default::default()
    };
    let started = Instant::now();
    let fine = mixed_phase_table(&spec, MixedAxes::PositionColour);
    let fine = run(
        "mixed_xc",
        &fine,
        options,
        &world,
        &world.decomposition,
        started,
        out,
    )?;
    let started = Instant::now();
    let coarse = mixed_phase_table(&spec, MixedAxes::PositionPosition);
    let pc = world.position_colour_decomposition();
    let coarse = run("mixed_xy", &coarse, options, &world, &pc, started, out)?;
    Ok([fine, coarse])
}

#[derive(Debug)]
pub struct SearchRun {
    pub name: &'static str,
    pub order: usize,
    /// Factor orders of each decomposition found.
    pub decompositions: Vec<Vec<usize>>,
    pub elapsed: Duration,
}

fn search(name: &'static str, g: &FiniteGroup, max_factors: usize) -> Result<SearchRun> {
    let started = Instant::now();
    let found = find_direct_decompositions(g, max_factors)?;
    Ok(SearchRun {
        name,
        order: g.order(),
        decompositions: found.iter().map(|d| d.factor_orders()).collect(),
        elapsed: started.elapsed(),
    })
}

/// Decomposition search on the cube rotation group, with `C_6` and `C_12`
/// for comparison.
pub fn so3() -> Result<Vec<SearchRun>> {
    Ok(vec![
        search("cube rotations", &cube_rotation_group(), 4)?,
        search("C6", &cyclic_group(6)?, 4)?,
        search("C12", &cyclic_group(12)?, 4)?,
    ])
}
