mod common;

use std::sync::Arc;

use asdim_core::metric::{GroupWindow, LineMetric};
use asdim_core::{Group, GroupSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn saturated_union_bounds_on_the_line() {
    let line = LineMetric::interval(0, 160);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..600 {
        common::saturated_union_instance(&line, &mut rng, 4, 8).unwrap();
    }
}

#[test]
fn saturated_union_bounds_on_a_free_group_ball() {
    let g = Arc::new(Group::from_spec(&GroupSpec::free(&["a", "b"])).unwrap());
    let w = GroupWindow::new(g, 5, 5, 1 << 16).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..400 {
        common::saturated_union_instance(&w, &mut rng, 2, 4).unwrap();
    }
}
