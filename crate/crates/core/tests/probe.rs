// temporary probe: timing and structure of the full sweep
use std::time::Instant;
use w160::partition;
use w160::tangency::StageBands;
use w160::wiman::Model;

#[test]
#[ignore]
fn probe_sweep() {
    let model = Model::shared();
    let t0 = Instant::now();
    let reps = partition::orbit_representatives(model, true);
    println!(
        "orbit reps: {} covering {} in {:?}",
        reps.reps.len(),
        reps.total_covered(),
        t0.elapsed()
    );

    let t1 = Instant::now();
    let outcome = partition::sweep(model, StageBands::default(), true);
    println!("sweep in {:?}", t1.elapsed());
    println!("counts: {:?}", outcome.counts);
    println!("svd failures: {}", outcome.svd_failures);
    for (i, o) in outcome.stage_obs.iter().enumerate() {
        println!(
            "stage {}: matrices {} max_low {:.3e} min_high {:.3e} max_high {:.3e} max_extra {:.3e}",
            i + 1,
            o.matrices,
            o.max_low_sigma,
            o.min_high_sigma,
            o.max_high_sigma,
            o.max_extra_low
        );
    }

    let t2 = Instant::now();
    match partition::build_partition(model, &outcome) {
        Ok(result) => {
            println!("partition built in {:?}", t2.elapsed());
            println!("classes: {}", result.classes.len());
            println!("census: {:?}", result.census);
            println!("orbit census: {:?}", result.orbit_census);
            println!("candidate quads: {}", result.candidate_quads);
        }
        Err(e) => println!("partition FAILED in {:?}: {e}", t2.elapsed()),
    }
}
