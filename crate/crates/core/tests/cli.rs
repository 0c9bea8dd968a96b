use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn gcdm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcdm"))
        .args(args)
        .output()
        .expect("run gcdm")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn catalog() -> String {
    fixture("synthetic.json").display().to_string()
}

#[test]
fn weights_from_central_weight() {
    let o = gcdm(&["weights", "--x", "0.5", "--omega-n", "0.4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0.050000 0.400000 0.550000 InteriorAcceptor\n");

    let o = gcdm(&["weights", "--x", "0", "--omega-n", "1"]);
    assert_eq!(stdout(&o), "0.000000 1.000000 0.000000 VertexNeutral\n");

    let o = gcdm(&["weights", "--x", "0.8", "--omega-n", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
}

#[test]
fn weights_from_reference_fraction() {
    let o = gcdm(&["weights", "--nu", "-0.2", "--nu0", "-0.6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0.400000 0.400000 0.200000 InteriorDonor\n");

    let o = gcdm(&["weights", "--nu", "0.5", "--nu0", "-0.6"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn mixed_coordinate_pairs_are_refused() {
    let o = gcdm(&["weights", "--x", "0.1", "--omega-n", "0.2", "--nu", "0.1", "--nu0", "0.2"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn classify_prints_region() {
    let o = gcdm(&["classify", "--x", "-1", "--omega-n", "0"]);
    assert_eq!(stdout(&o), "VertexCation\n");
    let o = gcdm(&["classify", "--x", "0", "--omega-n", "0.3"]);
    assert_eq!(stdout(&o), "NeutralAxis\n");
}

#[test]
fn descriptors_of_fixture_species() {
    let c = catalog();
    let o = gcdm(&["descriptors", "--domain", &c, "--label", "fixture"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "I_q=10.000000 A_q=-1.000000 mu0=-4.500000 eta0=5.500000 Ebar=-94.500000\n"
    );
    assert!(o.stderr.is_empty());

    let o = gcdm(&["descriptors", "--domain", &c, "--label", "symmetric"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("mu0=0.000000"));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("warning:"));

    let o = gcdm(&["descriptors", "--domain", &c, "--label", "absent"]);
    assert_eq!(o.status.code(), Some(2));

    let csv = fixture("synthetic.csv").display().to_string();
    let from_csv = gcdm(&["descriptors", "--domain", &csv, "--label", "descriptor-bound"]);
    let from_json = gcdm(&["descriptors", "--domain", &c, "--label", "descriptor-bound"]);
    assert_eq!(from_csv.stdout, from_json.stdout);
}

#[test]
fn unreadable_or_invalid_catalogs_exit_1() {
    let bad = fixture("nonpositive_ionization.json").display().to_string();
    for args in [
        vec!["descriptors", "--domain", bad.as_str(), "--label", "inverted"],
        vec!["verify", "--domain", bad.as_str()],
        vec!["descriptors", "--domain", "/nonexistent/catalog.json", "--label", "x"],
    ] {
        assert_eq!(gcdm(&args).status.code(), Some(1), "{args:?}");
    }
    let dir = tempfile::tempdir().unwrap();
    let garbled = dir.path().join("garbled.json");
    std::fs::write(&garbled, "{ not json").unwrap();
    let o = gcdm(&["descriptors", "--domain", garbled.to_str().unwrap(), "--label", "x"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn state_and_energy_of_fixture() {
    let c = catalog();
    let o = gcdm(&["state", "--domain", &c, "--label", "fixture", "--x", "0", "--omega-n", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "M=5 weight=0.500000\nM=6 weight=0.000000\nM=7 weight=0.500000\n\
         mean_particle_number=6.000000\npurity=0.500000\nregion=Origin\n"
    );

    let o = gcdm(&[
        "energy", "--domain", &c, "--label", "fixture", "--nu", "0.5", "--nu0", "0.8", "--nu0-prime", "0.6",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("delta_h=1.350000"), "{text}");
    assert!(text.contains("delta_u=-1.100000"), "{text}");
}

#[test]
fn scan_writes_file_atomically_and_deterministically() {
    let c = catalog();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = gcdm(&[
        "scan", "--domain", &c, "--label", "fixture", "--grid", "2", "--output", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 10);
    assert!(text.starts_with("x,omega_n,w_minus,w_plus,region,energy,delta_h\n"));

    let a = gcdm(&["scan", "--domain", &c, "--label", "fixture", "--grid", "50"]);
    let b = gcdm(&["scan", "--domain", &c, "--label", "fixture", "--grid", "50"]);
    assert_eq!(a.stdout, b.stdout);

    let missing = dir.path().join("no/such/dir/scan.csv");
    let o = gcdm(&[
        "scan", "--domain", &c, "--label", "fixture", "--grid", "4", "--output", missing.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn verify_is_deterministic_and_echoes_seed() {
    let a = gcdm(&["verify", "--synthetic", "20", "--seed", "5"]);
    let b = gcdm(&["verify", "--synthetic", "20", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("seed: 5\n"));
    assert!(!text.contains("FAIL"));
}
