//! Export of the grid world as a directory of files, and loading it back.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use symcert_core::action::FiniteAction;
use symcert_core::group::DirectProductDecomposition;
use symcert_core::world::{render, world_group, GridWorld, GridWorldSpec, WorldState};

use crate::error::{format_error, IoContext, Result};
use crate::formats::{
    load_action, load_decomposition, read_json, write_json, ActionFile, DecompositionFile,
    GroupFile, GroupRef,
};
use crate::pgm;

pub const MANIFEST: &str = "manifest.json";
pub const WORLD: &str = "world.json";
pub const GROUP: &str = "group.json";
pub const ACTION: &str = "action.json";
pub const DECOMPOSITION_XYC: &str = "decomposition_xyc.json";
pub const DECOMPOSITION_PC: &str = "decomposition_pc.json";
pub const STATES: &str = "states.csv";
pub const TRANSITIONS: &str = "transitions.csv";

/// Environment variable capping worker threads; `0` or unset means one per
/// available core.
pub const THREADS_VAR: &str = "SYMCERT_THREADS";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorldFile {
    pub n: usize,
    pub cell_pixels: usize,
    pub palette: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema: u32,
    pub n: usize,
    pub files: Vec<ManifestEntry>,
}

pub fn thread_count() -> usize {
    let auto = || std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
    {
        Some(0) | None => auto(),
        Some(k) => k,
    }
}

fn observation_path(id: usize) -> String {
    format!("obs/{id:06}.pgm")
}

fn entry(path: String, bytes: &[u8]) -> ManifestEntry {
    ManifestEntry {
        path,
        bytes: bytes.len() as u64,
        sha256: hex::encode(Sha256::digest(bytes)),
    }
}

fn write_file(dir: &Path, rel: &str, bytes: &[u8]) -> Result<ManifestEntry> {
    let path = dir.join(rel);
    fs::write(&path, bytes).at(&path)?;
    Ok(entry(rel.to_string(), bytes))
}

fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s.into_bytes()
}

fn render_all(spec: &GridWorldSpec, dir: &Path) -> Result<Vec<ManifestEntry>> {
    let count = spec.state_count();
    let threads = thread_count().clamp(1, count);
    let chunk = count.div_ceil(threads);
    let results: Vec<Result<Vec<ManifestEntry>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                scope.spawn(move || {
                    (t * chunk..((t + 1) * chunk).min(count))
                        .map(|id| {
                            let w = WorldState::from_index(spec.n(), id);
                            write_file(dir, &observation_path(id), &pgm::encode(&render(spec, w)))
                        })
                        .collect()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("render worker panicked"))
            .collect()
    });
    let mut entries = Vec::with_capacity(count);
    for r in results {
        entries.extend(r?);
    }
    Ok(entries)
}

/// Writes every observation, the state and transition CSVs, the group,
/// action and decomposition files, and a manifest of SHA-256 hashes.
pub fn export_dataset(spec: &GridWorldSpec, dir: &Path) -> Result<Manifest> {
    let n = spec.n();
    let world = world_group(spec);
    fs::create_dir_all(dir.join("obs")).at(&dir.join("obs"))?;
    let mut files = render_all(spec, dir)?;

    let world_file = WorldFile {
        n,
        cell_pixels: spec.cell_pixels(),
        palette: spec.palette().to_vec(),
    };
    files.push(write_file(dir, WORLD, &json_bytes(&world_file))?);
    files.push(write_file(
        dir,
        GROUP,
        &json_bytes(&GroupFile::from_group(&world.group)),
    )?);
    let action = ActionFile {
        group: GroupRef::Path(GROUP.into()),
        set_size: world.action.set_size(),
        table: world.action.table().to_vec(),
    };
    files.push(write_file(dir, ACTION, &json_bytes(&action))?);
    let xyc = DecompositionFile::from_decomposition(
        &world.decomposition,
        Some(vec!["x".into(), "y".into(), "c".into()]),
    );
    files.push(write_file(dir, DECOMPOSITION_XYC, &json_bytes(&xyc))?);
    let pc = DecompositionFile::from_decomposition(
        &world.position_colour_decomposition(),
        Some(vec!["position".into(), "colour".into()]),
    );
    files.push(write_file(dir, DECOMPOSITION_PC, &json_bytes(&pc))?);

    let mut states = String::from("state_id,x,y,c\n");
    for w in spec.states() {
        states.push_str(&format!("{},{},{},{}\n", w.index(n), w.x, w.y, w.c));
    }
    files.push(write_file(dir, STATES, states.as_bytes())?);
    let mut transitions = String::from("state_id,element_id,next_state_id\n");
    for w in 0..spec.state_count() {
        for g in world.generators() {
            transitions.push_str(&format!("{w},{g},{}\n", world.action.apply(g, w)));
        }
    }
    files.push(write_file(dir, TRANSITIONS, transitions.as_bytes())?);

    files.sort_by(|a, b| a.path.cmp(&b.path));
    let manifest = Manifest {
        schema: 1,
        n,
        files,
    };
    write_json(&dir.join(MANIFEST), &manifest)?;
    Ok(manifest)
}

/// An exported world read back from disk.
#[derive(Clone, Debug)]
pub struct LoadedWorld {
    pub dir: PathBuf,
    pub action: FiniteAction,
    /// Present when `world.json` describes the same group as `action.json`.
    pub grid: Option<GridWorld>,
}

impl LoadedWorld {
    pub fn decomposition(&self, path: &Path) -> Result<DirectProductDecomposition> {
        load_decomposition(path, self.action.group())
    }
}

pub fn load_world(dir: &Path) -> Result<LoadedWorld> {
    if !dir.is_dir() {
        return Err(format_error(dir, "not a directory"));
    }
    let action = load_action(&dir.join(ACTION))?;
    let world_path = dir.join(WORLD);
    let grid = if world_path.exists() {
        let file: WorldFile = read_json(&world_path)?;
        let spec = GridWorldSpec::with_palette(file.n, file.cell_pixels, file.palette)?;
        let grid = world_group(&spec);
        (grid.action.table() == action.table() && &grid.group == action.group()).then_some(grid)
    } else {
        None
    };
    Ok(LoadedWorld {
        dir: dir.to_path_buf(),
        action,
        grid,
    })
}

/// Re-hashes every file in a manifest; returns the paths that differ.
pub fn verify_manifest(dir: &Path) -> Result<Vec<String>> {
    let manifest: Manifest = read_json(&dir.join(MANIFEST))?;
    let mut bad = Vec::new();
    for e in manifest.files {
        let path = dir.join(&e.path);
        let bytes = fs::read(&path).at(&path)?;
        if entry(e.path.clone(), &bytes) != e {
            bad.push(e.path);
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn export_counts_and_reload() {
        let dir = tempfile::tempdir().unwrap();
        let spec = GridWorldSpec::new(3).unwrap();
        let manifest = export_dataset(&spec, dir.path()).unwrap();
        let pgms = manifest
            .files
            .iter()
            .filter(|e| e.path.ends_with(".pgm"))
            .count();
        assert_eq!(pgms, 27);
        assert!(manifest.files.windows(2).all(|w| w[0].path < w[1].path));
        let transitions = fs::read_to_string(dir.path().join(TRANSITIONS)).unwrap();
        assert_eq!(transitions.lines().count(), 1 + 27 * 3);
        let loaded = load_world(dir.path()).unwrap();
        assert!(loaded.grid.is_some());
        let dec = loaded
            .decomposition(&dir.path().join(DECOMPOSITION_PC))
            .unwrap();
        assert_eq!(dec.factor_orders(), vec![9, 3]);
        assert!(verify_manifest(dir.path()).unwrap().is_empty());
        fs::write(dir.path().join(STATES), "tampered").unwrap();
        assert_eq!(
            verify_manifest(dir.path()).unwrap(),
            vec![STATES.to_string()]
        );
    }

    #[test]
    fn observation_decodes_to_render() {
        let dir = tempfile::tempdir().unwrap();
        let spec = GridWorldSpec::new(2).unwrap();
        export_dataset(&spec, dir.path()).unwrap();
        for w in spec.states() {
            let bytes = fs::read(dir.path().join(observation_path(w.index(2)))).unwrap();
            assert_eq!(pgm::decode(&bytes).unwrap(), render(&spec, w));
        }
    }
}
