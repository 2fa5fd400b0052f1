use asdim_core::certificate::Certificate;
use asdim_core::engine::{run_pipeline, PipelineConfig};

fn config(name: &str) -> PipelineConfig {
    let text = std::fs::read_to_string(format!("{}/../../configs/{name}.toml", env!("CARGO_MANIFEST_DIR"))).unwrap();
    PipelineConfig::from_toml(&text).unwrap()
}

fn certify(c: &PipelineConfig) -> Certificate {
    Certificate::from_run(c, &run_pipeline(c).unwrap())
}

#[test]
fn round_trip_passes() {
    for name in ["z2_z2", "bs12", "z2_to_z"] {
        let cert = certify(&config(name));
        assert!(cert.verdicts.passed, "{name}");
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        let r = back.recheck().unwrap();
        assert!(r.passed(), "{name}: {:?}", r.failures);
        assert_eq!(r.verdicts, cert.verdicts);
    }
}

#[test]
fn reruns_are_byte_identical() {
    for name in ["z2_z3", "trefoil"] {
        let c = config(name);
        assert_eq!(certify(&c).to_json(), certify(&c).to_json(), "{name}");
    }
}

#[test]
fn moving_one_element_is_detected() {
    let cert = certify(&config("z2_z2"));
    let fams = &cert.content.families;
    let (f, s) = (0..fams.len())
        .flat_map(|f| (0..fams[f].len()).map(move |s| (f, s)))
        .find(|&(f, s)| fams[f][s].len() > 1 && fams[f].len() > 1)
        .expect("a family with two sets");
    let mut tampered = cert.clone();
    let w = tampered.content.families[f][s].pop().unwrap();
    let other = (s + 1) % tampered.content.families[f].len();
    tampered.content.families[f][other].push(w);
    let r = tampered.recheck().unwrap();
    assert!(!r.digest_ok);
    assert!(!r.verdicts.passed);
    assert!(r.failures.iter().any(|m| m.contains("meet at distance")), "{:?}", r.failures);

    let mut dropped = cert.clone();
    dropped.content.families[f][s].pop();
    dropped.digest = asdim_core::certificate::content_digest(&dropped.content);
    let r = dropped.recheck().unwrap();
    assert!(r.digest_ok);
    assert!(r.failures.iter().any(|m| m.contains("is not covered")), "{:?}", r.failures);
}

#[test]
fn stored_verdicts_are_not_trusted() {
    let cert = certify(&config("z2_z2"));
    let mut flipped = cert.clone();
    flipped.verdicts.passed = false;
    flipped.verdicts.disjoint = false;
    flipped.verdicts.max_diameter = 0;
    assert_eq!(flipped.recheck().unwrap(), cert.recheck().unwrap());
}

#[test]
fn foreign_words_are_rejected() {
    let mut cert = certify(&config("z2_z2"));
    cert.content.families[0][0].push("s s".into());
    cert.digest = asdim_core::certificate::content_digest(&cert.content);
    let r = cert.recheck().unwrap();
    assert!(r.failures.iter().any(|m| m.contains("not canonical")), "{:?}", r.failures);
}
