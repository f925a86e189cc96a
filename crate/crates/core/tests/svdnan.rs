// temporary probe: find the matrix that drives the jacobi fallback to NaN
use w160::partition::orbit_representatives;
use w160::tangency::{multiplicity_profile, Pipeline, StageBands};
use w160::wiman::Model;

#[test]
#[ignore]
fn find_nan_case() {
    let model = Model::shared();
    let reps = orbit_representatives(model, true);
    let pipeline = Pipeline::new(model, StageBands::default());
    for quad in reps.reps.iter() {
        let profile = multiplicity_profile(quad, model);
        let m = pipeline.stage1_matrix(&profile.distinct);
        let result = std::panic::catch_unwind(|| {
            let _ = w160::linalg::svd::svd_verified(&m);
        });
        if result.is_err() {
            println!("panic at quad {quad:?}, matrix {}x{}", m.nrows(), m.ncols());
            for r in 0..m.nrows() {
                let row: Vec<String> = (0..m.ncols())
                    .map(|c| format!("({:+.3e},{:+.3e})", m[(r, c)].re, m[(r, c)].im))
                    .collect();
                println!("  [{}]", row.join(", "));
            }
            return;
        }
    }
    println!("no panic found");
}
