use asdim_core::engine::{run_pipeline, PipelineConfig};
use std::time::Instant;

fn config(name: &str, scale: u64, radius: u32) -> PipelineConfig {
    let text = std::fs::read_to_string(format!("{}/../../configs/{name}.toml", env!("CARGO_MANIFEST_DIR"))).unwrap();
    let mut c = PipelineConfig::from_toml(&text).unwrap();
    c.scale = scale;
    c.radius = radius;
    c
}

fn run(name: &str, scale: u64, radius: u32) -> usize {
    let t = Instant::now();
    let out = run_pipeline(&config(name, scale, radius)).unwrap_or_else(|e| panic!("{name} d={scale}: {e}"));
    assert!(out.report.passed());
    let p = &out.params;
    assert_eq!(p.colors, p.stab_colors * p.orbit_colors);
    eprintln!(
        "{name} d={scale} radius={radius}: {} points, colors {} (used {}), max diameter {}, {:?}",
        out.window.elements().len(),
        p.colors,
        out.cover.colors_used(),
        out.report.max_diameter,
        t.elapsed()
    );
    p.colors
}

#[test]
fn z2_z2() {
    for d in [2, 4, 8] {
        assert_eq!(run("z2_z2", d, 6 * d as u32), 2);
    }
}

#[test]
fn z2_z3() {
    for d in [2, 4, 8] {
        assert_eq!(run("z2_z3", d, 6 * d as u32), 2);
    }
}

#[test]
fn free_group_of_rank_two() {
    for d in [2, 4] {
        assert_eq!(run("f2", d, 10), 4);
    }
}

#[test]
fn trefoil() {
    assert!(run("trefoil", 2, 12) <= 4);
}

#[test]
fn baumslag_solitar() {
    for d in [2, 3] {
        assert!(run("bs12", d, 8) <= 4);
    }
}

#[test]
fn quotient_of_z2() {
    for d in [2, 4] {
        assert_eq!(run("z2_to_z", d, 10), 4);
    }
}
