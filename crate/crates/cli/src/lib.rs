//! Command implementations for the `asdim` binary.
//!
//! Every command returns the text it prints and an exit code: 0 pass,
//! 1 verification failure, 2 input error, 3 resource or window exhaustion.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use asdim_core::certificate::Certificate;
use asdim_core::cover::verify_cover;
use asdim_core::engine::{run_pipeline, PipelineConfig};
use asdim_core::group::{ball, Group, GroupSpec};
use asdim_core::tree::{build_bass_serre, tree_cover, validate_tree, TreeMetric};
use asdim_core::Error;
use serde::Serialize;

pub const PASS: i32 = 0;
pub const FAIL: i32 = 1;
pub const INPUT: i32 = 2;
pub const EXHAUSTED: i32 = 3;

/// What a command printed, and how it ended.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            ..Default::default()
        }
    }

    pub fn from_error(e: &Error) -> Self {
        Outcome {
            stderr: format!("error: {e}\n"),
            code: exit_code(e),
            ..Default::default()
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Input(_) | Error::Spec(_) | Error::Degenerate(_) => INPUT,
        Error::WindowExhausted { .. } | Error::Resource { .. } => EXHAUSTED,
        Error::Hypothesis { .. } => FAIL,
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<String, Error> {
    match out {
        Some(p) => {
            write_atomic(p, text.as_bytes()).map_err(|e| Error::input(format!("{}: {e}", p.display())))?;
            Ok(String::new())
        }
        None => Ok(text.to_string()),
    }
}

/// Overrides applied on top of a configuration file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub scale: Option<u64>,
    pub radius: Option<u32>,
    pub cap: Option<usize>,
}

pub fn load_config(path: &Path, o: &Overrides) -> Result<PipelineConfig, Error> {
    let mut c = PipelineConfig::from_toml(&read(path)?)?;
    if let Some(d) = o.scale {
        c.scale = d;
    }
    if let Some(r) = o.radius {
        c.radius = r;
    }
    if let Some(cap) = o.cap {
        c.cap = cap;
    }
    Ok(c)
}

/// A group spec file, or the `[group]` table of a pipeline config.
pub fn load_group(path: &Path) -> Result<GroupSpec, Error> {
    let text = read(path)?;
    match PipelineConfig::from_toml(&text) {
        Ok(c) => Ok(c.group),
        Err(_) => GroupSpec::from_toml(&text),
    }
}

pub fn cmd_run(config: &Path, out: Option<&Path>, o: &Overrides) -> Outcome {
    let run = || -> Result<Outcome, Error> {
        let c = load_config(config, o)?;
        let result = run_pipeline(&c)?;
        let cert = Certificate::from_run(&c, &result);
        let stdout = emit(out, &cert.to_json())?;
        let v = &cert.verdicts;
        let mut stderr = format!(
            "{} pipeline on {}: d = {}, {} colors, max diameter {}, {}\n",
            c.pipeline.name(),
            c.group.describe(),
            c.scale,
            result.params.colors,
            v.max_diameter,
            if v.passed { "pass" } else { "FAIL" }
        );
        for check in result.transcript.checks.iter().filter(|k| !k.passed) {
            let _ = writeln!(stderr, "failed at {}: {} ({})", check.stage, check.name, check.detail);
        }
        Ok(Outcome {
            stdout,
            stderr,
            code: if v.passed { PASS } else { FAIL },
        })
    };
    run().unwrap_or_else(|e| Outcome::from_error(&e))
}

pub fn cmd_verify(paths: &[PathBuf]) -> Outcome {
    let mut out = Outcome::default();
    for path in paths {
        let cert = match read(path).and_then(|t| Certificate::from_json(&t)) {
            Ok(c) => c,
            Err(e) => {
                let _ = writeln!(out.stderr, "{}: {e}", path.display());
                out.code = out.code.max(INPUT);
                continue;
            }
        };
        match cert.recheck() {
            Ok(r) => {
                let _ = writeln!(
                    out.stdout,
                    "{}: {}",
                    path.display(),
                    if r.passed() { "pass" } else { "FAIL" }
                );
                for f in &r.failures {
                    let _ = writeln!(out.stdout, "  {f}");
                }
                if !r.passed() {
                    out.code = out.code.max(FAIL);
                }
            }
            Err(e) => {
                let _ = writeln!(out.stderr, "{}: {e}", path.display());
                out.code = out.code.max(exit_code(&e));
            }
        }
    }
    out
}

/// One row of `report`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub certificate: String,
    pub group: String,
    pub pipeline: String,
    pub d: u64,
    pub colors: usize,
    pub max_diameter: u32,
    pub verdict: String,
}

pub fn report_rows(paths: &[PathBuf]) -> Vec<Row> {
    paths
        .iter()
        .map(|path| {
            let name = path.display().to_string();
            let cert = read(path).and_then(|t| Certificate::from_json(&t));
            match cert {
                Ok(c) => {
                    let r = c.recheck();
                    let (max_diameter, verdict) = match &r {
                        Ok(r) => (r.verdicts.max_diameter, if r.passed() { "pass" } else { "fail" }),
                        Err(_) => (0, "error"),
                    };
                    Row {
                        certificate: name,
                        group: c.content.config.group.describe(),
                        pipeline: c.content.config.pipeline.name().into(),
                        d: c.content.params.d,
                        colors: c.content.params.colors,
                        max_diameter,
                        verdict: verdict.into(),
                    }
                }
                Err(_) => Row {
                    certificate: name,
                    group: "-".into(),
                    pipeline: "-".into(),
                    d: 0,
                    colors: 0,
                    max_diameter: 0,
                    verdict: "unreadable".into(),
                },
            }
        })
        .collect()
}

pub fn cmd_report(paths: &[PathBuf], json: bool, out: Option<&Path>) -> Outcome {
    if paths.is_empty() {
        return Outcome::from_error(&Error::input("report needs at least one certificate"));
    }
    let rows = report_rows(paths);
    let mut text = String::new();
    if json {
        for r in &rows {
            text.push_str(&serde_json::to_string(r).expect("rows serialize"));
            text.push('\n');
        }
    } else {
        let header = ["certificate", "group", "pipeline", "d", "colors", "max_diameter", "verdict"];
        let cells: Vec<[String; 7]> = rows
            .iter()
            .map(|r| {
                [
                    r.certificate.clone(),
                    r.group.clone(),
                    r.pipeline.clone(),
                    r.d.to_string(),
                    r.colors.to_string(),
                    r.max_diameter.to_string(),
                    r.verdict.clone(),
                ]
            })
            .collect();
        let mut width = header.map(str::len);
        for row in &cells {
            for (w, c) in width.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cols: Vec<&str>| -> String {
            let parts: Vec<String> = cols
                .iter()
                .zip(&width)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        text.push_str(&line(header.to_vec()));
        for row in &cells {
            text.push_str(&line(row.iter().map(String::as_str).collect()));
        }
    }
    match emit(out, &text) {
        Ok(stdout) => Outcome::ok(stdout),
        Err(e) => Outcome::from_error(&e),
    }
}

pub fn cmd_ball(spec: &Path, radius: u32, cap: usize) -> Outcome {
    let run = || -> Result<String, Error> {
        let group = Group::from_spec(&load_group(spec)?)?;
        let b = ball(&group, radius, cap)?;
        let mut text = String::from("r  sphere  ball\n");
        let mut total = 0;
        for (r, s) in b.table.growth().iter().enumerate().take(radius as usize + 1) {
            total += s;
            let _ = writeln!(text, "{r}  {s}  {total}");
        }
        Ok(text)
    };
    run().map(Outcome::ok).unwrap_or_else(|e| Outcome::from_error(&e))
}

pub fn cmd_reduce(spec: &Path, words: &[String]) -> Outcome {
    let run = || -> Result<String, Error> {
        let group = Group::from_spec(&load_group(spec)?)?;
        let mut text = String::new();
        for w in words {
            let g = group.parse(w)?;
            let _ = writeln!(text, "{}", group.format(&g));
        }
        Ok(text)
    };
    run().map(Outcome::ok).unwrap_or_else(|e| Outcome::from_error(&e))
}

pub fn cmd_tree(spec: &Path, radius: u32, scale: Option<u64>, cap: usize, out: Option<&Path>) -> Outcome {
    let run = || -> Result<Outcome, Error> {
        let group = Arc::new(Group::from_spec(&load_group(spec)?)?);
        let (slice, _) = build_bass_serre(group, radius, radius, cap)?;
        let report = validate_tree(&slice);
        let mut text = format!(
            "vertices {}\nedges {}\ntree {}\n",
            slice.len(),
            slice.edges.len(),
            if report.passed { "yes" } else { "no" }
        );
        if let Some(w) = &report.witness {
            let _ = writeln!(text, "witness {w}");
        }
        let mut code = if report.passed { PASS } else { FAIL };
        if let Some(d) = scale {
            let t = TreeMetric::new(&slice, 0)?;
            let r = u32::try_from(d).map_err(|_| Error::input("scale too large"))?;
            let cover = tree_cover(&t, r)?;
            let v = verify_cover(&t, &cover)?;
            let _ = writeln!(
                text,
                "cover at scale {d}: {} colors, max diameter {}, {}",
                cover.colors(),
                v.max_diameter,
                if v.passed() { "pass" } else { "FAIL" }
            );
            if !v.passed() {
                code = FAIL;
            }
        }
        for (a, b) in &slice.edges {
            let _ = writeln!(text, "{} -- {}", slice.labels[*a as usize], slice.labels[*b as usize]);
        }
        Ok(Outcome {
            stdout: emit(out, &text)?,
            code,
            ..Default::default()
        })
    };
    run().unwrap_or_else(|e| Outcome::from_error(&e))
}
