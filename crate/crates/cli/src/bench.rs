use std::time::Instant;

use clap::{Args, ValueEnum};
use ldkep_core::attacks::{run_pipeline, Pipeline};
use ldkep_core::braid::{normal_form, random_word};
use ldkep_core::ld::parse_context;
use ldkep_core::protocol::{run_local, PublicParams, SecretBounds, HASH_SHA256};

use crate::config::Settings;
use crate::{Report, Verdict};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Csv,
    Text,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Repetitions per row.
    #[arg(long, default_value_t = 5)]
    pub reps: u32,
    /// Braid word lengths for the normal-form rows.
    #[arg(long, value_delimiter = ',', default_values_t = [8, 16, 32, 64, 128, 256])]
    pub lengths: Vec<usize>,
    /// Presets for the handshake rows.
    #[arg(long, value_delimiter = ',', default_values_t = ["laver3".to_string(), "s5-conj".into(), "d4-twist".into(), "shifted".into(), "braid-gsc".into()])]
    pub presets: Vec<String>,
}

struct Row {
    task: String,
    ctx: String,
    size: usize,
    reps: u32,
    mean_ms: f64,
}

fn time<F: FnMut() -> anyhow::Result<()>>(reps: u32, mut f: F) -> anyhow::Result<f64> {
    let start = Instant::now();
    for _ in 0..reps {
        f()?;
    }
    Ok(start.elapsed().as_secs_f64() * 1e3 / f64::from(reps))
}

fn params(desc: &str, s: &Settings) -> anyhow::Result<PublicParams> {
    let ctx = parse_context(desc)?;
    let b = SecretBounds::for_context(&ctx);
    Ok(PublicParams::new(ctx, s.m, s.n, b, HASH_SHA256)?)
}

pub fn bench(s: &Settings, args: &BenchArgs, report: &mut Report) -> anyhow::Result<Verdict> {
    let reps = args.reps.max(1);
    let mut rows = Vec::new();
    let strands = 8;
    for &len in &args.lengths {
        let words: Vec<_> = (0..reps)
            .map(|i| random_word(s.seed + u64::from(i), len, strands - 1))
            .collect();
        let mut i = 0;
        let mean_ms = time(reps, || {
            normal_form(&words[i], strands)?;
            i += 1;
            Ok(())
        })?;
        rows.push(Row {
            task: "normal_form".into(),
            ctx: format!("B{strands}"),
            size: len,
            reps,
            mean_ms,
        });
    }
    for desc in &args.presets {
        let p = params(desc, s)?;
        let mut seed = s.seed;
        let mean_ms = time(reps, || {
            run_local(&p, seed, seed)?;
            seed += 1;
            Ok(())
        })?;
        rows.push(Row {
            task: "handshake".into(),
            ctx: desc.clone(),
            size: p.bounds().leaf_max,
            reps,
            mean_ms,
        });
    }
    for desc in ["laver3", "d4-twist"] {
        let p = params(desc, s)?;
        let run = run_local(&p, s.seed, s.seed)?;
        for pipe in Pipeline::ALL {
            let mean_ms = time(reps, || {
                run_pipeline(&p, &run.transcript, pipe)?;
                Ok(())
            })?;
            rows.push(Row {
                task: format!("pipeline_{pipe}"),
                ctx: desc.into(),
                size: p.ctx().carrier().size().unwrap_or(0),
                reps,
                mean_ms,
            });
        }
    }
    match args.format {
        Format::Csv => {
            report.line("task,ctx,size,reps,mean_ms");
            for r in &rows {
                report.line(format!("{},{},{},{},{:.6}", r.task, r.ctx, r.size, r.reps, r.mean_ms));
            }
        }
        Format::Text => {
            report.line(format!(
                "{:<14} {:<10} {:>6} {:>5} {:>12}",
                "task", "ctx", "size", "reps", "mean_ms"
            ));
            for r in &rows {
                report.line(format!(
                    "{:<14} {:<10} {:>6} {:>5} {:>12.4}",
                    r.task, r.ctx, r.size, r.reps, r.mean_ms
                ));
            }
        }
    }
    Ok(Verdict::Ok)
}
