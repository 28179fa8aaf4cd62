use std::fs;
use std::path::{Path, PathBuf};

use symcert::cli::{run, EXIT_ENTANGLED, EXIT_INVALID, EXIT_OK};
use symcert::dataset::{export_dataset, load_world, verify_manifest, MANIFEST};
use symcert::formats::{
    read_json, read_table, write_json, ActionFile, DecompositionFile, GroupFile, GroupRef, RepFile,
};
use symcert::pgm;
use symcert::report::ReportFile;
use symcert_core::action::regular_action;
use symcert_core::group::{cube_rotation_group, cyclic_group, direct_product, product_factors};
use symcert_core::rep::regular_representation;
use symcert_core::world::{
    canonical_table, mixed_phase_table, render, world_group, GridWorldSpec, MixedAxes, WorldState,
};

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("symcert").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_group(dir: &Path, name: &str, g: &symcert_core::FiniteGroup) -> PathBuf {
    let path = dir.join(name);
    write_json(&path, &GroupFile::from_group(g)).unwrap();
    path
}

#[test]
fn group_validate_and_decompose() {
    let dir = tempfile::tempdir().unwrap();
    let c6 = write_group(dir.path(), "c6.json", &cyclic_group(6).unwrap());
    let c4 = write_group(dir.path(), "c4.json", &cyclic_group(4).unwrap());
    let cube = write_group(dir.path(), "cube.json", &cube_rotation_group());

    let o = cli(&["group", "validate", s(&cube)]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("valid group of order 24"));
    assert!(o.stdout.contains("abelian: false"));

    let json = dir.path().join("found.json");
    let o = cli(&["group", "decompose", s(&c6), "--json", s(&json)]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("1 direct-product decompositions found"));
    assert!(
        o.stdout.contains("factors of orders {2, 3}")
            || o.stdout.contains("factors of orders {3, 2}")
    );
    let found: Vec<DecompositionFile> = read_json(&json).unwrap();
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].factors.len(), 2);

    let o = cli(&["group", "decompose", s(&c4)]);
    assert!(o.stdout.contains("indecomposable"));
    let o = cli(&["group", "decompose", s(&cube), "--max-factors", "3"]);
    assert!(o
        .stdout
        .starts_with("0 direct-product decompositions found"));
}

#[test]
fn invalid_group_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let mut file = GroupFile::from_group(&cyclic_group(3).unwrap());
    file.cayley[4] = file.cayley[3];
    let path = dir.path().join("bad.json");
    write_json(&path, &file).unwrap();
    let o = cli(&["group", "validate", s(&path)]);
    assert_eq!(o.code, EXIT_INVALID);
    assert!(o.stderr.starts_with("error:"), "{}", o.stderr);

    let o = cli(&["group", "validate", s(&dir.path().join("missing.json"))]);
    assert_eq!(o.code, EXIT_INVALID);
    fs::write(&path, "{ not json").unwrap();
    assert_eq!(cli(&["group", "validate", s(&path)]).code, EXIT_INVALID);
}

#[test]
fn action_check_finds_product_structure() {
    let dir = tempfile::tempdir().unwrap();
    let (g2, g3) = (cyclic_group(2).unwrap(), cyclic_group(3).unwrap());
    let g = direct_product(&g2, &g3);
    let group = write_group(dir.path(), "g.json", &g);
    let a = regular_action(&g);
    let action = dir.path().join("action.json");
    write_json(
        &action,
        &ActionFile {
            group: GroupRef::Path("g.json".into()),
            set_size: a.set_size(),
            table: a.table().to_vec(),
        },
    )
    .unwrap();
    let d = product_factors(&g, &g2, &g3).unwrap();
    let dec = dir.path().join("dec.json");
    write_json(&dec, &DecompositionFile::from_decomposition(&d, None)).unwrap();

    let o = cli(&["action", "check", s(&action)]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert!(o.stdout.contains("free: true, transitive: true"));
    let o = cli(&["action", "check", s(&action), "--decomposition", s(&dec)]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("disentangled: true"));

    let mut bad = a.table().to_vec();
    bad.swap(7, 8);
    write_json(
        &action,
        &ActionFile {
            group: GroupRef::Path(group),
            set_size: 6,
            table: bad,
        },
    )
    .unwrap();
    assert_eq!(cli(&["action", "check", s(&action)]).code, EXIT_INVALID);
}

#[test]
fn rep_validate_and_certify() {
    let dir = tempfile::tempdir().unwrap();
    let spec = GridWorldSpec::new(3).unwrap();
    let world = world_group(&spec);
    write_group(dir.path(), "group.json", &world.action.group().clone());
    let rep = world.canonical_representation();
    let path = dir.path().join("rep.json");
    write_json(
        &path,
        &RepFile::from_rep(&rep, GroupRef::Path("group.json".into())),
    )
    .unwrap();
    let dec = dir.path().join("dec.json");
    write_json(
        &dec,
        &DecompositionFile::from_decomposition(&world.decomposition, None),
    )
    .unwrap();

    let o = cli(&["rep", "validate", s(&path)]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert!(o.stdout.contains("valid representation of dimension 6"));
    let o = cli(&["rep", "certify", s(&path), "--decomposition", s(&dec)]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("factor block dims: [2, 2, 2]"));
    assert!(o.stdout.contains("trivial block dim: 0"));

    let c4 = cyclic_group(4).unwrap();
    let c4_path = write_group(dir.path(), "c4.json", &c4);
    let reg = dir.path().join("reg.json");
    write_json(
        &reg,
        &RepFile::from_rep(&regular_representation(&c4), GroupRef::Path(c4_path)),
    )
    .unwrap();
    let o = cli(&["rep", "validate", s(&reg)]);
    assert_eq!(o.code, EXIT_OK);

    let mut file: RepFile = read_json(&reg).unwrap();
    file.matrices.swap(1, 2);
    write_json(&reg, &file).unwrap();
    let o = cli(&["rep", "validate", s(&reg)]);
    assert_eq!(o.code, EXIT_INVALID);
}

#[test]
fn world_gen_writes_consistent_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let o = cli(&[
        "world",
        "gen",
        "--n",
        "3",
        "--cell-pixels",
        "2",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert!(dir.path().join(MANIFEST).exists());
    assert!(verify_manifest(dir.path()).unwrap().is_empty());

    let loaded = load_world(dir.path()).unwrap();
    assert_eq!(loaded.action.set_size(), 27);
    let grid = loaded.grid.expect("world.json present");
    let spec = &grid.spec;
    let w = WorldState { x: 2, y: 1, c: 0 };
    let bytes = fs::read(dir.path().join(format!("obs/{:06}.pgm", w.index(3)))).unwrap();
    let decoded = pgm::decode(&bytes).unwrap();
    assert_eq!(decoded, render(spec, w));

    fs::write(dir.path().join("obs/000000.pgm"), b"P5\n1 1\n255\n\0").unwrap();
    assert_eq!(
        verify_manifest(dir.path()).unwrap(),
        vec!["obs/000000.pgm".to_string()]
    );
}

#[test]
fn certify_exit_codes_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let spec = GridWorldSpec::new(4).unwrap();
    export_dataset(&spec, dir.path()).unwrap();
    let table = dir.path().join("f.csv");
    symcert::formats::write_table(&table, &canonical_table(&spec)).unwrap();
    let report = dir.path().join("report.json");
    let dec = dir.path().join("decomposition_xyc.json");
    let o = cli(&[
        "certify",
        "--world",
        s(dir.path()),
        "--rep",
        s(&table),
        "--decomposition",
        s(&dec),
        "--report",
        s(&report),
    ]);
    assert_eq!(o.code, EXIT_OK, "{}{}", o.stdout, o.stderr);
    assert!(o.stdout.contains("verdict disentangled: true"));
    let parsed: ReportFile = read_json(&report).unwrap();
    assert_eq!(parsed.schema, 1);
    assert!(parsed.verdict_linear_disentangled);
    assert_eq!(parsed.block_dims(), Some(vec![2, 2, 2]));
    assert_eq!(parsed.metrics.explicitness.map(|e| e > 0.999), Some(true));
    let text = fs::read_to_string(&report).unwrap();
    let again: ReportFile = serde_json::from_str(&text).unwrap();
    assert_eq!(again, parsed);

    let back = read_table(&table).unwrap();
    assert_eq!(back.len(), 64);

    let mixed = dir.path().join("mixed.csv");
    symcert::formats::write_table(&mixed, &mixed_phase_table(&spec, MixedAxes::PositionColour))
        .unwrap();
    let o = cli(&[
        "certify",
        "--world",
        s(dir.path()),
        "--rep",
        s(&mixed),
        "--decomposition",
        s(&dec),
    ]);
    assert_eq!(o.code, EXIT_ENTANGLED, "{}{}", o.stdout, o.stderr);

    let text = fs::read_to_string(&table).unwrap();
    let truncated: String = text.lines().take(10).map(|l| format!("{l}\n")).collect();
    fs::write(&table, truncated).unwrap();
    let o = cli(&[
        "certify",
        "--world",
        s(dir.path()),
        "--rep",
        s(&table),
        "--decomposition",
        s(&dec),
    ]);
    assert_eq!(o.code, EXIT_INVALID);
    assert!(o.stderr.contains("error:"));
}

#[test]
fn demos_write_their_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let o = cli(&["demo", "grid", "--n", "3", "--out", s(dir.path())]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("== coordinates"));
    assert!(o.stdout.contains("verdict disentangled: true"));
    assert!(o.stdout.contains("verdict linear disentangled: false"));
    let report: ReportFile = read_json(&dir.path().join("coordinates.report.json")).unwrap();
    assert!(report.verdict_disentangled && !report.verdict_linear_disentangled);
    assert!(dir.path().join("coordinates.csv").exists());

    let o = cli(&["demo", "so3"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o
        .stdout
        .contains("cube rotations (order 24): 0 direct-product decompositions found"));

    let o = cli(&["demo", "mixing", "--n", "3"]);
    assert!(o.stdout.contains("== mixed_xc") && o.stdout.contains("== mixed_xy"));
}

#[test]
fn usage_errors() {
    assert_eq!(cli(&[]).code, EXIT_INVALID);
    assert_eq!(
        cli(&["world", "gen", "--n", "1", "--out", "/tmp/x"]).code,
        EXIT_INVALID
    );
    assert_eq!(
        cli(&["rep", "validate", "x.json", "--tol-rep", "-1"]).code,
        EXIT_INVALID
    );
    let o = cli(&["--help"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("certify"));
}
