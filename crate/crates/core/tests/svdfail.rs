// temporary probe: characterize svd_verified failures across the sweep
use w160::linalg::svd::svd_verified;
use w160::partition::orbit_representatives;
use w160::tangency::{multiplicity_profile, Pipeline, StageBands};
use w160::wiman::Model;

#[test]
#[ignore]
fn probe_svd_failures() {
    let model = Model::shared();
    let reps = orbit_representatives(model, true);
    let pipeline = Pipeline::new(model, StageBands::default());
    let mut fail_recon = 0u64;
    let mut fail_unit = 0u64;
    let mut fail_other = 0u64;
    let mut worst_recon: f64 = 0.0;
    let mut worst_fail_example = None;
    for (i, quad) in reps.reps.iter().enumerate() {
        if i % 3 != 0 {
            continue; // sample a third for speed
        }
        let profile = multiplicity_profile(quad, model);
        let m = pipeline.stage1_matrix(&profile.distinct);
        match svd_verified(&m) {
            Ok(_) => {}
            Err(w160::linalg::svd::SvdError::Residual { which, value }) => {
                if which == "reconstruction" {
                    fail_recon += 1;
                    if value > worst_recon {
                        worst_recon = value;
                        worst_fail_example = Some(*quad);
                    }
                } else {
                    fail_unit += 1;
                }
            }
            Err(_) => fail_other += 1,
        }
    }
    println!("fail_recon {fail_recon} fail_unit {fail_unit} fail_other {fail_other}");
    println!("worst recon residual {worst_recon:.3e} at {worst_fail_example:?}");
}
