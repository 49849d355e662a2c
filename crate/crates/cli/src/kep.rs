use std::net::{TcpListener, TcpStream};

use anyhow::Context;
use clap::Subcommand;
use ldkep_core::protocol::{
    confirm, encode_alice_pub, encode_bob_pub, encode_hello, key_digest, run_local, run_tcp, PublicParams, Role,
    SessionOutcome,
};

use crate::config::Settings;
use crate::{Report, Usage, Verdict};

#[derive(Subcommand, Debug)]
pub enum KepCommand {
    /// Both parties in one process; prints the transcript in wire format.
    Run,
    /// Accept connections and run one handshake on each.
    Serve {
        #[arg(long, value_name = "HOST:PORT")]
        listen: Option<String>,
        /// Defaults to bob.
        #[arg(long)]
        role: Option<Role>,
        /// Sessions to serve before exiting; 0 serves forever.
        #[arg(long, default_value_t = 1)]
        sessions: u64,
        /// Per-read timeout in seconds.
        #[arg(long)]
        timeout: Option<u64>,
    },
    /// Connect to a peer and run one handshake.
    Connect {
        #[arg(long, value_name = "HOST:PORT")]
        connect: Option<String>,
        /// Defaults to alice.
        #[arg(long)]
        role: Option<Role>,
        #[arg(long)]
        timeout: Option<u64>,
    },
}

pub fn run(s: &Settings, cmd: &KepCommand, report: &mut Report) -> anyhow::Result<Verdict> {
    let params = s.params()?;
    match cmd {
        KepCommand::Run => local(s, &params, report),
        KepCommand::Serve {
            listen,
            role,
            sessions,
            timeout,
        } => {
            let addr = address(listen.clone(), s, "listen")?;
            let role = pick_role(*role, s, Role::Bob)?;
            let listener = TcpListener::bind(&addr).with_context(|| format!("binding {addr}"))?;
            // stderr, so callers binding port 0 learn the address before the report
            eprintln!("listening on {}", listener.local_addr()?);
            let timeout = s.timeout(*timeout)?;
            let mut verdict = Verdict::Ok;
            let mut served = 0;
            while *sessions == 0 || served < *sessions {
                let (stream, peer) = listener.accept()?;
                served += 1;
                report.line(format!("session {served} peer {peer}"));
                if session(&params, role, s.seed, stream, timeout, report)? == Verdict::Mismatch {
                    verdict = Verdict::Mismatch;
                }
            }
            Ok(verdict)
        }
        KepCommand::Connect { connect, role, timeout } => {
            let addr = address(connect.clone(), s, "connect")?;
            let role = pick_role(*role, s, Role::Alice)?;
            let stream = TcpStream::connect(&addr).with_context(|| format!("connecting to {addr}"))?;
            session(&params, role, s.seed, stream, s.timeout(*timeout)?, report)
        }
    }
}

fn address(flag: Option<String>, s: &Settings, key: &str) -> anyhow::Result<String> {
    match flag.or(s.file.get(key)?) {
        Some(a) => Ok(a),
        None => Err(Usage(format!("--{key} host:port is required")).into()),
    }
}

fn pick_role(flag: Option<Role>, s: &Settings, default: Role) -> anyhow::Result<Role> {
    Ok(match flag {
        Some(r) => r,
        None => s.file.get::<Role>("role")?.unwrap_or(default),
    })
}

fn local(s: &Settings, params: &PublicParams, report: &mut Report) -> anyhow::Result<Verdict> {
    let run = run_local(params, s.seed, s.seed)?;
    report.raw(&encode_hello(params, "alice"));
    report.raw(&encode_hello(params, "bob"));
    report.raw(&encode_alice_pub(params, &run.transcript.alice));
    report.raw(&encode_bob_pub(params, &run.transcript.bob));
    report.line(format!("key {}", run.key_a.canonical));
    report.line(format!("key_hash_a {}", key_digest(&run.key_a, params)));
    report.line(format!("key_hash_b {}", key_digest(&run.key_b, params)));
    report.line(format!("confirm {}", confirm(&run.key_a, params, &run.transcript)));
    // run_local fails on a mismatch, so reaching here means agreement
    report.line("match yes");
    Ok(Verdict::Ok)
}

fn session(
    params: &PublicParams,
    role: Role,
    seed: u64,
    stream: TcpStream,
    timeout: std::time::Duration,
    report: &mut Report,
) -> anyhow::Result<Verdict> {
    let out: SessionOutcome = run_tcp(role, params, seed, stream, timeout)?;
    report.line(format!("role {role}"));
    report.raw(&encode_alice_pub(params, &out.transcript.alice));
    report.raw(&encode_bob_pub(params, &out.transcript.bob));
    report.line(format!("key_hash {}", key_digest(&out.key, params)));
    report.line(format!("confirm_own {}", out.own_confirm));
    report.line(format!("confirm_peer {}", out.peer_confirm));
    Ok(if out.confirmed() {
        report.line("confirmed yes");
        Verdict::Ok
    } else {
        report.line("confirmed no");
        Verdict::Mismatch
    })
}
