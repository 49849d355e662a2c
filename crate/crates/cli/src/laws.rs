use clap::Args;
use ldkep_core::ld::laws::check_declared_laws;
use ldkep_core::ld::{parse_context, CheckOptions, LaverTable, MAX_LEVEL};

use crate::config::Settings;
use crate::{Report, Verdict};

#[derive(Args, Debug)]
pub struct LaverArgs {
    /// Level; the table has 2^n rows.
    #[arg(value_parser = clap::value_parser!(u32).range(1..=MAX_LEVEL as i64))]
    pub level: u32,
    /// Also scan every triple for left distributivity.
    #[arg(long)]
    pub check: bool,
}

/// Row `k` lists `k * 1 .. k * 2^n`, under a header row of column labels.
pub fn format_table(t: &LaverTable) -> String {
    let size = t.size() as u16;
    let w = size.to_string().len();
    let mut out = format!("{:>w$} |", format!("L{}", t.level()), w = w + 1);
    let pad = out.len() - 1;
    for l in 1..=size {
        out.push_str(&format!(" {l:>w$}"));
    }
    out.push('\n');
    out.push_str(&format!(
        "{}+{}\n",
        "-".repeat(pad),
        "-".repeat((w + 1) * size as usize)
    ));
    for k in 1..=size {
        out.push_str(&format!("{k:>pad$}|", pad = pad));
        for &v in t.row(k) {
            out.push_str(&format!(" {v:>w$}"));
        }
        out.push('\n');
    }
    out
}

pub fn laver(args: &LaverArgs, report: &mut Report) -> anyhow::Result<Verdict> {
    let t = LaverTable::new(args.level)?;
    report.raw(&format_table(&t));
    if !args.check {
        return Ok(Verdict::Ok);
    }
    let triples = t.size().pow(3);
    Ok(match t.first_ld_violation() {
        None => {
            report.line(format!("PASS left distributivity (exhaustive, {triples} triples)"));
            Verdict::Ok
        }
        Some((a, b, c)) => {
            report.line(format!("FAIL left distributivity at ({a}, {b}, {c})"));
            Verdict::Mismatch
        }
    })
}

pub fn laws(s: &Settings, report: &mut Report) -> anyhow::Result<Verdict> {
    let ctx = parse_context(&s.ctx)?;
    report.line(format!("ctx {}", ctx.descriptor()));
    let opts = CheckOptions::sampled(s.trials, s.seed);
    let mut verdict = Verdict::Ok;
    for r in check_declared_laws(&ctx, &opts)? {
        if !r.passed() {
            verdict = Verdict::Mismatch;
        }
        report.line(r);
    }
    Ok(verdict)
}
