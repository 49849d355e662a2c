use std::sync::Arc;
use std::time::Instant;

use clap::Args;
use ldkep_core::attacks::{
    plant_decomposition, plant_sccp, run_pipeline, sccp_brute, verify_transform, Pipeline, SccpSolution,
};
use ldkep_core::ld::{FiniteGroup, GroupKind, Subgroup};
use ldkep_core::protocol::{key_digest, run_local};
use ldkep_core::seed;

use crate::config::Settings;
use crate::{Report, Usage, Verdict};

#[derive(Args, Debug)]
pub struct AttackArgs {
    /// A, B, C, D or all.
    #[arg(long, default_value = "all")]
    pub pipeline: String,
    /// Transcripts to attack, seeded from --seed upwards.
    #[arg(long, default_value_t = 1)]
    pub count: u64,
}

pub fn attack(s: &Settings, args: &AttackArgs, report: &mut Report) -> anyhow::Result<Verdict> {
    let pipelines: Vec<Pipeline> = if args.pipeline.eq_ignore_ascii_case("all") {
        Pipeline::ALL.to_vec()
    } else {
        vec![args.pipeline.parse()?]
    };
    let params = s.params()?;
    let mut verdict = Verdict::Ok;
    for seed in s.seed..s.seed + args.count {
        let run = run_local(&params, seed, seed)?;
        let truth = key_digest(&run.key_a, &params);
        for &p in &pipelines {
            let r = run_pipeline(&params, &run.transcript, p)?;
            report.line(format!("seed {seed}"));
            report.line(&r);
            if r.key_hash == truth {
                report.line("verdict match");
            } else {
                report.line(format!("verdict mismatch (true key_hash {truth})"));
                verdict = Verdict::Mismatch;
            }
        }
    }
    Ok(verdict)
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "mode")]
pub struct SccpModes {
    /// Generate and solve finite-group instances.
    #[arg(long)]
    pub plant: bool,
    /// Build braid decomposition instances and check the conjugacy transform.
    #[arg(long)]
    pub transform: bool,
}

#[derive(Args, Debug)]
pub struct SccpArgs {
    #[command(flatten)]
    pub mode: SccpModes,
    /// `S<degree>`, `D<n>` (order 2n) or `Q8`.
    #[arg(long, default_value = "S5")]
    pub group: String,
    /// Coset subgroup H: whole, trivial, center or young:c1,c2,...
    #[arg(long, default_value = "young:3,2")]
    pub h: Subgroup,
    /// Conjugator subgroup K.
    #[arg(long, default_value = "whole")]
    pub k: Subgroup,
    #[arg(long, default_value_t = 7)]
    pub p: usize,
    #[arg(long, default_value_t = 3)]
    pub q1: usize,
    #[arg(long, default_value_t = 4)]
    pub q2: usize,
    /// Letters of b and s may reach this far past p.
    #[arg(long, default_value_t = 0)]
    pub extra: usize,
    /// Instances to generate.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
}

fn parse_group(text: &str) -> anyhow::Result<FiniteGroup> {
    let bad = || Usage(format!("group must be S<degree>, D<n> or Q8, got {text:?}"));
    let t = text.to_ascii_uppercase();
    let kind = if t == "Q8" {
        GroupKind::Quaternion
    } else {
        let (head, num) = t.split_at(1.min(t.len()));
        let v: usize = num.parse().map_err(|_| bad())?;
        match head {
            "S" => GroupKind::Symmetric { degree: v },
            "D" => GroupKind::Dihedral { order: 2 * v },
            _ => return Err(bad().into()),
        }
    };
    Ok(FiniteGroup::from_kind(kind)?)
}

pub fn sccp(s: &Settings, args: &SccpArgs, report: &mut Report) -> anyhow::Result<Verdict> {
    let mut rng = seed::rng(s.seed);
    let mut failures = 0;
    if args.mode.plant {
        let g = Arc::new(parse_group(&args.group)?);
        report.line(format!("group {} H={} K={}", g.kind(), args.h, args.k));
        for i in 0..args.count {
            let inst = plant_sccp(g.clone(), args.h.clone(), args.k.clone(), &mut rng)?;
            let start = Instant::now();
            let SccpSolution { h, c, searched } = sccp_brute(&inst)?;
            let ok = inst.verify(h, c)?;
            failures += usize::from(!ok);
            let p = |x: u32| g.permutation(x).to_string();
            report.line(format!(
                "instance {i} x={} y={} -> h={} c={} searched={searched} elapsed_ms={:.3} {}",
                p(inst.x),
                p(inst.y),
                p(h),
                p(c),
                start.elapsed().as_secs_f64() * 1e3,
                if ok { "ok" } else { "FAIL" }
            ));
        }
    } else {
        let word_len = s.word_len.unwrap_or(10);
        report.line(format!(
            "p={} q1={} q2={} extra={} word_len={word_len}",
            args.p, args.q1, args.q2, args.extra
        ));
        for i in 0..args.count {
            let inst = plant_decomposition(args.p, args.q1, args.q2, args.extra, word_len, &mut rng)?;
            let check = verify_transform(&inst)?;
            failures += usize::from(!check.holds());
            report.line(format!(
                "instance {i} N={} identity={} windows={}",
                check.n, check.identity, check.windows
            ));
        }
    }
    report.line(format!("solved {}/{}", args.count - failures, args.count));
    Ok(if failures == 0 { Verdict::Ok } else { Verdict::Mismatch })
}
