// State files and the command layer, driven in-process: write ψ, ask for
// the verdict, build the family, then a partner from one of its members.
// The `rdm-determined` binary runs the same code.
//
//     cargo run --example cli_pipeline

use rdm_determined::cli::io::StateFile;
use rdm_determined::cli::{run, EXIT_OK, EXIT_UNDETERMINED};
use rdm_determined::ghz::GhzParams;
use rdm_determined::PureState;

fn main() -> rdm_determined::Result<()> {
    let dir = tempfile::tempdir().map_err(|e| rdm_determined::Error::Parameter(e.to_string()))?;
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let write = |name: &str, f: StateFile| {
        f.write(std::path::Path::new(&path(name)))
            .expect("temp dir is writable")
    };

    write("w.json", StateFile::Pure(PureState::w_state(3)?));
    write(
        "ghz.json",
        StateFile::Pure(GhzParams::from_weight(3, 0.8, 0.0)?.state()),
    );
    println!(
        "{}",
        std::fs::read_to_string(path("w.json")).unwrap_or_default()
    );

    let out = run(["rdm-determined", "verdict", &path("w.json")]);
    println!("verdict W: exit {}", out.code);
    assert_eq!(out.code, EXIT_OK);
    let out = run(["rdm-determined", "verdict", &path("ghz.json")]);
    println!("verdict GHZ: exit {}", out.code);
    assert_eq!(out.code, EXIT_UNDETERMINED);

    // Family members land in a directory, one state file per z.
    let fam = path("family");
    let out = run([
        "rdm-determined",
        "family",
        "--n",
        "3",
        "--p",
        "0.8",
        "--z",
        "0",
        "--out",
        &fam,
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let mut members: Vec<_> = std::fs::read_dir(&fam)
        .map_err(|e| rdm_determined::Error::Parameter(e.to_string()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .collect();
    members.sort();
    println!(
        "family wrote {:?}",
        members.iter().map(|p| p.file_name()).collect::<Vec<_>>()
    );
    let omega = members
        .iter()
        .find(|p| {
            p.file_name()
                .is_some_and(|f| f.to_string_lossy().starts_with("member_"))
        })
        .expect("one member")
        .to_string_lossy()
        .into_owned();

    let out = run([
        "rdm-determined",
        "partner",
        &path("ghz.json"),
        &omega,
        "--out",
        &path("partner.json"),
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let report = out.report.expect("commands always report");
    println!("partner overlap {}", report.result["overlap"]);
    assert!((report.result["overlap"].as_f64().unwrap_or(1.0) - 0.6).abs() < 1e-9);
    let (partner, _) = StateFile::read(std::path::Path::new(&path("partner.json")))
        .map_err(|e| rdm_determined::Error::Parameter(e.to_string()))?;
    assert_eq!(partner.n(), 3);
    Ok(())
}
