//! Acceptance run: one line per criterion, then a single assertion.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use asdim_core::certificate::Certificate;
use asdim_core::engine::{inequality_audit, neighborhood_identity, run_pipeline, PipelineConfig, PipelineOutput, Quotient};
use asdim_core::group::ball;
use asdim_core::metric::{check_d_disjoint, diameter, GroupWindow, LineMetric, MatrixMetric, Metric, PointId};
use asdim_core::tree::{tree_cover, tree_cover_bound, validate_tree, TreeMetric, TreeSlice};
use asdim_core::{Group, GroupSpec};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> std::result::Result<(), String> {
    ensure(start.elapsed() < limit, format!("took {:?}, limit {:?}", start.elapsed(), limit))
}

fn pipeline(name: &str, scale: u64, radius: u32) -> std::result::Result<(PipelineConfig, PipelineOutput), String> {
    let mut c = config(name);
    c.scale = scale;
    c.radius = radius;
    let out = run_pipeline(&c).map_err(|e| format!("{name} d={scale}: {e}"))?;
    ensure(out.report.passed(), format!("{name} d={scale}: verification failed"))?;
    ensure(out.transcript.passed(), format!("{name} d={scale}: transcript has a failed check"))?;
    Ok((c, out))
}

fn c1_saturated_union() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let line = LineMetric::interval(0, 400);
    let ball = GroupWindow::new(Arc::new(group("f2.toml")), 5, 5, 1 << 16).map_err(|e| e.to_string())?;
    let f2 = MatrixMetric::from_fn(ball.len(), |i, j| ball.dist(i as PointId, j as PointId).unwrap())
        .map_err(|e| e.to_string())?;
    let mut n = 0;
    for i in 0..1200 {
        let m: &dyn Metric = if i % 3 == 0 { &f2 } else { &line };
        saturated_union_instance(m, &mut rng, 8, 16).map_err(|e| format!("instance {i}: {e}"))?;
        n += 1;
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("{n} instances in {:.1?}", start.elapsed()))
}

fn two_colors(name: &str) -> Check {
    let mut times = Vec::new();
    for d in [2, 4, 8] {
        let start = Instant::now();
        let (_, out) = pipeline(name, d, 6 * d as u32)?;
        ensure(out.cover.colors() == 2, format!("d={d}: {} colors", out.cover.colors()))?;
        within(start, Duration::from_secs(60))?;
        times.push(format!("d={d} {:.1?}", start.elapsed()));
    }
    Ok(times.join(", "))
}

fn c2_free_products() -> Check {
    Ok(format!("Z2*Z2 [{}]; Z2*Z3 [{}]", two_colors("z2_z2.toml")?, two_colors("z2_z3.toml")?))
}

fn c3_free_group() -> Check {
    for d in [2, 4] {
        let (_, out) = pipeline("f2.toml", d, 10)?;
        ensure(out.cover.colors() == 4, format!("d={d}: {} colors", out.cover.colors()))?;
    }
    Ok("4 colors at d=2,4".into())
}

fn c4_trefoil() -> Check {
    let (_, out) = pipeline("trefoil.toml", 2, 12)?;
    let audit = inequality_audit(&Arc::new(group("trefoil.toml")), 10, 1 << 22)
        .map_err(|e| e.to_string())?;
    ensure(audit.passed(), format!("{} violations", audit.violations.len()))?;
    Ok(format!("{} colors, audit {} elements clean", out.cover.colors(), audit.checked))
}

fn c5_baumslag_solitar() -> Check {
    let mut colors = Vec::new();
    for d in [2, 3] {
        let (_, out) = pipeline("bs12.toml", d, 8)?;
        ensure(out.cover.colors() <= 4, format!("d={d}: {} colors", out.cover.colors()))?;
        colors.push(out.cover.colors());
    }
    let audit = inequality_audit(&Arc::new(group("bs12.toml")), 10, 1 << 22).map_err(|e| e.to_string())?;
    ensure(audit.passed(), format!("{} violations", audit.violations.len()))?;
    Ok(format!("colors {colors:?}, audit {} elements clean", audit.checked))
}

fn c6_normal_forms() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let z2 = Group::from_spec(&GroupSpec::free_abelian(&["a", "b"])).unwrap();
    let cases = [
        ("F2", group("f2.toml"), sanov()),
        ("Z2*Z3", group("z2_z3.toml"), modular()),
        ("Z^2", z2, abelianization()),
        ("trefoil", group("trefoil.toml"), burau_trefoil()),
        ("BS(1,2)", group("bs12.toml"), affine_bs12()),
    ];
    for (name, g, oracle) in &cases {
        let r = check_normal_forms(g, oracle, &mut rng, 10_000);
        ensure(r.mismatches() == 0, format!("{name}: {r:?}"))?;
        let bad = exhaustive_mismatches(g, oracle, 6);
        ensure(bad == 0, format!("{name}: {bad} short-word mismatches"))?;
    }
    let racg = square_racg();
    let commute = |s: usize, t: usize| (s + 1) % 4 == t || (t + 1) % 4 == s;
    for w in all_words(&racg, 8) {
        ensure(racg.reduce_word(&w) == racg_closure(commute, &w), format!("racg word {w:?}"))?;
    }
    Ok(format!("{} kinds x 10^4 words, 0 mismatches", cases.len() + 1))
}

fn c7_trees() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut largest = 0;
    for i in 0..24 {
        let n: usize = if i % 4 == 0 { 10_000 } else { rng.gen_range(1..3_000) };
        let reach = [1, 3, 50, usize::MAX][i % 4];
        let parents: Vec<Option<u32>> = (0..n)
            .map(|v| (v > 0).then(|| rng.gen_range(v.saturating_sub(reach)..v) as u32))
            .collect();
        let t = TreeSlice::from_parents(&parents, (0..n).map(|v| v.to_string()).collect()).unwrap();
        ensure(validate_tree(&t).passed, "generated slice is not a tree")?;
        let m = TreeMetric::new(&t, rng.gen_range(0..n as u32)).unwrap();
        let r = rng.gen_range(1..=64);
        let cover = tree_cover(&m, r).map_err(|e| e.to_string())?;
        ensure(cover.colors() == 2, "more than two colors")?;
        let mut seen = vec![false; n];
        for f in &cover.families {
            if let Some(v) = check_d_disjoint(&m, &f.sets, r + 1).unwrap() {
                return Err(format!("n={n} r={r}: same-color sets at distance {}", v.distance));
            }
            for s in &f.sets {
                let diam = diameter(&m, s).unwrap() as u64;
                ensure(diam <= tree_cover_bound(r as u64), format!("n={n} r={r}: diameter {diam}"))?;
                for &p in s {
                    seen[p as usize] = true;
                }
            }
        }
        ensure(seen.iter().all(|&b| b), format!("n={n} r={r}: vertex uncovered"))?;
        largest = largest.max(n);
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("24 trees up to {largest} vertices in {:.1?}", start.elapsed()))
}

fn c8_color_count() -> Check {
    let runs = [
        ("z2_z2.toml", 2, 12),
        ("z2_z3.toml", 2, 12),
        ("f2.toml", 2, 10),
        ("trefoil.toml", 2, 12),
        ("bs12.toml", 2, 8),
        ("z2_to_z.toml", 2, 10),
    ];
    let mut seen = Vec::new();
    for (name, d, radius) in runs {
        let (_, out) = pipeline(name, d, radius)?;
        let p = &out.params;
        let expected = p.stab_colors * p.orbit_colors;
        ensure(
            out.cover.colors() == expected && p.colors == expected,
            format!("{name}: {} colors, expected {expected}", out.cover.colors()),
        )?;
        seen.push(format!("{}x{}", p.stab_colors, p.orbit_colors));
    }
    Ok(seen.join(" "))
}

fn c9_neighborhood_identity() -> Check {
    let c = config("z2_to_z.toml");
    let mut q = Quotient::new(&c.group, c.quotient.as_ref().unwrap()).map_err(|e| e.to_string())?;
    let mut sizes = Vec::new();
    for r in 0..=4 {
        let (ok, w, n) = neighborhood_identity(&mut q, r, 10).map_err(|e| e.to_string())?;
        ensure(ok, format!("R={r}: |W|={w} |N|={n}"))?;
        sizes.push(w);
    }
    Ok(format!("|W_R| = {sizes:?}"))
}

fn c10_ball_growth() -> Check {
    let f2 = group("f2.toml");
    for r in 0..=8u32 {
        let b = ball(&f2, r, 1 << 20).map_err(|e| e.to_string())?;
        let expected = 2 * 3usize.pow(r) - 1;
        ensure(b.len() == expected, format!("r={r}: {} != {expected}", b.len()))?;
    }
    let z2 = Group::from_spec(&GroupSpec::free_abelian(&["a", "b"])).unwrap();
    let b = ball(&z2, 1, 1 << 10).map_err(|e| e.to_string())?;
    ensure(b.len() == 5, format!("Z^2 unit ball has {} points", b.len()))?;
    Ok("F2 r<=8 and Z^2 r=1 exact".into())
}

fn c11_certificates() -> Check {
    let (c, out) = pipeline("z2_z3.toml", 4, 24)?;
    let cert = Certificate::from_run(&c, &out);
    let json = cert.to_json();
    let back = Certificate::from_json(&json).map_err(|e| e.to_string())?;
    let r = back.recheck().map_err(|e| e.to_string())?;
    ensure(r.passed(), format!("round trip: {:?}", r.failures))?;
    let (_, again) = pipeline("z2_z3.toml", 4, 24)?;
    ensure(Certificate::from_run(&c, &again).to_json() == json, "rerun differs")?;

    let mut tampered = back.clone();
    let fams = &mut tampered.content.families;
    let moved = fams[0][0].pop().ok_or("empty set")?;
    fams[1][0].push(moved);
    let t = Certificate::from_json(&tampered.to_json()).map_err(|e| e.to_string())?;
    let r = t.recheck().map_err(|e| e.to_string())?;
    ensure(!r.digest_ok && !r.passed(), "tampered certificate accepted")?;
    Ok(format!("round trip, rerun identical, tamper caught ({} failures)", r.failures.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("saturated union bounds", c1_saturated_union),
        ("free products of finite groups", c2_free_products),
        ("free group of rank two", c3_free_group),
        ("trefoil amalgam", c4_trefoil),
        ("BS(1,2) extension", c5_baumslag_solitar),
        ("normal forms", c6_normal_forms),
        ("tree covers", c7_trees),
        ("color count", c8_color_count),
        ("neighborhood identity", c9_neighborhood_identity),
        ("ball growth", c10_ball_growth),
        ("certificates", c11_certificates),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into()))
        });
        match result {
            Ok(detail) => println!("[{:>2}] PASS {name}: {detail}", i + 1),
            Err(why) => {
                println!("[{:>2}] FAIL {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
