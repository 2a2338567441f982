//! Balancing of weighted fans and the boundary derivatives of a δ-form.

use std::path::PathBuf;

use tropcalc::cli::read_deltaform;
use tropcalc::deltaforms::{boundary1, check_balanced};

fn main() {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for (file, name) in [("line.json", "L"), ("two_rays.json", "R"), ("corrupted_line.json", "L")] {
        let form = read_deltaform(&fixtures.join(file), name).unwrap();
        let report = check_balanced(&form);
        println!("{file}:{name} balanced = {} ({} failing faces)", report.balanced, report.failing_faces.len());
        if report.balanced {
            println!("  ∂′ has {} cells", boundary1(&form).unwrap().cells().len());
        }
    }
}
