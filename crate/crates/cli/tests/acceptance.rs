//! Acceptance run: one PASS/FAIL line per criterion. Runs without the test
//! harness so the lines always show; exits nonzero if any criterion fails.

use std::io::{BufRead, BufReader, Write};
use std::net::{Shutdown, TcpListener, TcpStream};
use std::panic::{self, AssertUnwindSafe};
use std::process::{Child, Command, Stdio};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use ldkep_core::attacks::{
    plant_decomposition, plant_sccp, run_pipeline, sccp_brute, verify_transform, Pipeline, SccpInstance,
};
use ldkep_core::braid::{equal, tau};
use ldkep_core::ld::laws::{check_declared_laws, check_left_distributive, check_projector, check_twist_conditions};
use ldkep_core::ld::{
    parse_context, BraidSampler, Carrier, CheckOptions, Element, Endo, FiniteGroup, LaverTable, LdContext, Subgroup,
    PRESETS,
};
use ldkep_core::protocol::{encode_alice_pub, encode_bob_pub, run_local, PublicParams, SecretBounds, HASH_SHA256};
use ldkep_core::seed;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn params(desc: &str, m: usize, n: usize, bounds: Option<SecretBounds>) -> PublicParams {
    let ctx = parse_context(desc).unwrap();
    let b = bounds.unwrap_or_else(|| SecretBounds::for_context(&ctx));
    PublicParams::new(ctx, m, n, b, HASH_SHA256).unwrap()
}

// Reference tables L_1, L_2, L_3, row k listing k*1 .. k*2^n.
const L1: &[&[u16]] = &[&[2, 2], &[1, 2]];
const L2: &[&[u16]] = &[&[2, 4, 2, 4], &[3, 4, 3, 4], &[4, 4, 4, 4], &[1, 2, 3, 4]];
const L3: &[&[u16]] = &[
    &[2, 4, 6, 8, 2, 4, 6, 8],
    &[3, 4, 7, 8, 3, 4, 7, 8],
    &[4, 8, 4, 8, 4, 8, 4, 8],
    &[5, 6, 7, 8, 5, 6, 7, 8],
    &[6, 8, 6, 8, 6, 8, 6, 8],
    &[7, 8, 7, 8, 7, 8, 7, 8],
    &[8, 8, 8, 8, 8, 8, 8, 8],
    &[1, 2, 3, 4, 5, 6, 7, 8],
];

fn laver_exactness() -> Outcome {
    let start = Instant::now();
    let mut cells = 0;
    for (n, expected) in [(1, L1), (2, L2), (3, L3)] {
        let t = LaverTable::new(n).unwrap();
        ensure(t.size() == expected.len(), format!("L{n} has {} rows", t.size()))?;
        for (k, row) in expected.iter().enumerate() {
            for (l, &v) in row.iter().enumerate() {
                let got = t.star(k as u16 + 1, l as u16 + 1);
                ensure(got == v, format!("L{n}: {}*{} = {got}, expected {v}", k + 1, l + 1))?;
                cells += 1;
            }
        }
        // independent scan of every triple
        let s = t.size() as u16;
        for a in 1..=s {
            for b in 1..=s {
                for c in 1..=s {
                    let lhs = t.star(a, t.star(b, c));
                    let rhs = t.star(t.star(a, b), t.star(a, c));
                    ensure(lhs == rhs, format!("L{n} not LD at ({a},{b},{c})"))?;
                }
            }
        }
        ensure(
            t.first_ld_violation().is_none(),
            format!("L{n} checker reports a violation"),
        )?;
    }
    let el = start.elapsed();
    ensure(el < Duration::from_secs(1), format!("took {el:?}"))?;
    Ok(format!(
        "{cells} cells exact, LD exhaustive for n<=3, {:.1} ms",
        el.as_secs_f64() * 1e3
    ))
}

/// Every context the descriptor language can build, one or more instances each.
const BUILT_INS: &[&str] = &[
    "platform=laver n=1",
    "platform=laver n=2",
    "platform=laver n=3",
    "platform=laver n=4",
    "platform=laver n=5",
    "platform=group kind=symmetric degree=3 op=conj",
    "platform=group kind=symmetric degree=4 op=rev",
    "platform=group kind=symmetric degree=5 op=conj",
    "platform=group kind=symmetric degree=4 op=sym",
    "platform=group kind=dihedral order=8 op=conj",
    "platform=group kind=quaternion op=conj",
    "platform=group kind=symmetric degree=4 op=trivial endo=sign",
    "platform=group kind=symmetric degree=4 op=fconj endo=sign",
    "platform=group kind=symmetric degree=3 op=fconj endo=\"inner:(1 2 3)\"",
    "platform=group kind=symmetric degree=4 op=fsym endo=sign",
    "platform=group kind=symmetric degree=4 op=fsym-rev endo=sign",
    "platform=group kind=dihedral order=12 a=r3",
    "platform=pure n=5 d=1",
    "platform=braid mode=shifted p=2",
    "platform=braid mode=shifted p=3",
    "platform=braid mode=gsl p=3 ap=1 app=1",
    "platform=braid mode=gsl p=3 ap=\"1 2\" app=\"1 2\" sign=-1",
    "platform=braid mode=split p1=2 p2=2 a1p=1 a1pp=1 a2p=-1 a2pp=\"1 1\"",
    "platform=braid mode=gsc p=8 q1=3 q2=5 alpha1=\"-2 1\" alpha2=4 beta1=\"6 -7\" beta2=-4 restricted=1",
];

fn law_suite() -> Outcome {
    let start = Instant::now();
    let opts = CheckOptions::default();
    let mut laws = 0;
    let descs = PRESETS.iter().map(|(name, _)| *name).chain(BUILT_INS.iter().copied());
    for desc in descs {
        let ctx = parse_context(desc).map_err(|e| format!("{desc}: {e}"))?;
        if let Carrier::Braid(BraidSampler { len, max_index }) = ctx.carrier() {
            let strands = max_index + 1;
            ensure(
                *len <= 24 && strands <= 40,
                format!("{desc}: samples of length {len} on {strands} strands"),
            )?;
        }
        for r in check_declared_laws(&ctx, &opts).map_err(|e| format!("{desc}: {e}"))? {
            ensure(r.passed(), format!("{desc}: {r}"))?;
            let finite = ctx.carrier().size().is_some_and(|s| s <= 1 << 10);
            ensure(r.exhaustive == finite, format!("{desc}: wrong check mode"))?;
            ensure(
                r.exhaustive || r.checked == 200,
                format!("{desc}: {} samples", r.checked),
            )?;
            laws += 1;
        }
    }
    let el = start.elapsed();
    ensure(el < Duration::from_secs(120), format!("took {el:?}"))?;
    Ok(format!(
        "{laws} laws on {} contexts, {:.1} s",
        PRESETS.len() + BUILT_INS.len(),
        el.as_secs_f64()
    ))
}

fn condition_evidence() -> Outcome {
    let w = |s: &str| s.parse().unwrap();
    let ok = LdContext::gen_shifted(3, w("1"), w("1"), 1, true, None).unwrap();
    let r = check_left_distributive(&ok, 0, 0, &CheckOptions::sampled(200, 0)).unwrap();
    ensure(r.passed() && r.checked == 200, format!("commuting instance: {r}"))?;
    ensure(
        LdContext::gen_shifted(3, w("1"), w("2"), 1, true, None).is_err(),
        "checked builder accepted non-commuting parts",
    )?;
    let bad = LdContext::gen_shifted(3, w("1"), w("2"), 1, false, None).unwrap();
    let r = check_left_distributive(&bad, 0, 0, &CheckOptions::sampled(100, 0)).unwrap();
    let at = match &r.counterexample {
        Some((i, _)) => *i,
        None => return Err("non-commuting instance passed 100 triples".into()),
    };

    // twist conditions on shifted-conjugacy data a1 = σ1, a2 = σ1⁻¹
    let c = Carrier::Braid(BraidSampler { len: 10, max_index: 6 });
    let tw = [Element::Braid(w("1")), Element::Braid(w("-1"))];
    let r = check_twist_conditions(&c, &Endo::Shift(1), &tw, &CheckOptions::sampled(200, 1)).unwrap();
    ensure(r.conditions_hold() && r.laws_hold(), format!("twist conditions: {r}"))?;

    // split construction with commuting parts
    let split = LdContext::split(2, 2, (w("1"), w("1")), (w("-1"), w("1 1")), true, None).unwrap();
    for r in check_declared_laws(&split, &CheckOptions::sampled(200, 2)).unwrap() {
        ensure(r.passed(), format!("split: {r}"))?;
    }
    ensure(
        LdContext::split(3, 1, (w("1"), w("2")), (w(""), w("")), true, None).is_err(),
        "split accepted non-commuting parts",
    )?;

    // f-symmetric operations need f² = f
    let s4 = Arc::new(FiniteGroup::symmetric(4).unwrap());
    let g = |s: &str| Element::Group(s4.parse_element(s).unwrap());
    let carrier = Carrier::Group(s4.clone());
    let sign = Endo::Sign(g("(1 2)"));
    ensure(
        check_projector(&carrier, &sign, &CheckOptions::default())
            .unwrap()
            .passed(),
        "sign map not a projector",
    )?;
    let fsym = LdContext::group_f_symmetric(s4.clone(), sign, false, true).unwrap();
    for r in check_declared_laws(&fsym, &CheckOptions::default()).unwrap() {
        ensure(r.passed(), format!("f-symmetric: {r}"))?;
    }
    let inner = Endo::Inner(g("(1 2 3)"));
    ensure(
        !check_projector(&carrier, &inner, &CheckOptions::default())
            .unwrap()
            .passed(),
        "inner map passed",
    )?;
    ensure(
        LdContext::group_f_symmetric(s4, inner, false, true).is_err(),
        "f-symmetric builder accepted a non-projector",
    )?;
    Ok(format!(
        "commuting 200/200, non-commuting fails at triple {at}, twist/split/projector checks hold"
    ))
}

fn protocol_correctness() -> Outcome {
    for desc in ["laver3", "s5-conj", "shifted"] {
        let p = params(desc, 1, 1, None);
        for s in 0..100 {
            let run = run_local(&p, s, s + 1).map_err(|e| format!("{desc} seed {s}: {e}"))?;
            ensure(run.key_a == run.key_b, format!("{desc} seed {s}"))?;
        }
    }
    let start = Instant::now();
    let bounds = SecretBounds {
        leaf_min: 3,
        leaf_max: 5,
        word_len: 16,
    };
    let p = params("braid-gsc", 1, 1, Some(bounds));
    for s in 0..20 {
        let run = run_local(&p, s, s + 1).map_err(|e| format!("braid-gsc seed {s}: {e}"))?;
        let (ka, kb) = (
            run.key_a.element.as_braid().unwrap(),
            run.key_b.element.as_braid().unwrap(),
        );
        ensure(equal(ka, kb), format!("braid-gsc seed {s}"))?;
    }
    let el = start.elapsed();
    ensure(el < Duration::from_secs(120), format!("braid preset took {el:?}"))?;
    Ok(format!(
        "300 finite/shifted + 20 braid handshakes agree, braid {:.1} s",
        el.as_secs_f64()
    ))
}

fn tau_relation() -> Outcome {
    for p in 1..=3 {
        let a = tau(p, p);
        let da = a.shift(p);
        let lhs = a.concat(&da).concat(&a);
        let rhs = da.concat(&a).concat(&da);
        ensure(equal(&lhs, &rhs), format!("p={p}"))?;
        ensure(
            !equal(&a.concat(&da), &da.concat(&a)),
            format!("p={p}: factors commute"),
        )?;
    }
    Ok("p=1,2,3".into())
}

fn transform_identity() -> Outcome {
    let mut rng = seed::rng(2024);
    let mut at_boundary = 0;
    for i in 0..50 {
        let (p, q1, q2) = if i % 2 == 0 { (5, 2, 3) } else { (7, 3, 4) };
        let extra = i % 3;
        let inst = plant_decomposition(p, q1, q2, extra, 12, &mut rng).map_err(|e| e.to_string())?;
        let check = verify_transform(&inst).map_err(|e| e.to_string())?;
        ensure(check.identity, format!("instance {i}: identity fails"))?;
        ensure(check.windows, format!("instance {i}: index windows fail"))?;
        at_boundary += usize::from(check.n == 2 * p);
    }
    Ok(format!("50/50 instances, {at_boundary} at N=2p"))
}

/// `c x c⁻¹ = h y` by composing permutation images point by point.
fn reference_sccp(g: &FiniteGroup, hs: &[u32], ks: &[u32], x: u32, y: u32) -> Option<(u32, u32)> {
    let img = |e: u32| g.permutation(e).images().to_vec();
    let compose = |a: &[u32], b: &[u32]| -> Vec<u32> { b.iter().map(|&j| a[j as usize - 1]).collect() };
    let invert = |a: &[u32]| -> Vec<u32> {
        let mut out = vec![0; a.len()];
        for (i, &v) in a.iter().enumerate() {
            out[v as usize - 1] = i as u32 + 1;
        }
        out
    };
    for &h in hs {
        let hy = compose(&img(h), &img(y));
        for &c in ks {
            if compose(&compose(&img(c), &img(x)), &invert(&img(c))) == hy {
                return Some((h, c));
            }
        }
    }
    None
}

fn attack_completeness() -> Outcome {
    for desc in ["laver3", "d4-twist"] {
        let p = params(desc, 1, 1, None);
        for s in 0..50 {
            let run = run_local(&p, s, s + 500).map_err(|e| e.to_string())?;
            for pipe in Pipeline::ALL {
                let r = run_pipeline(&p, &run.transcript, pipe).map_err(|e| format!("{desc} {pipe} seed {s}: {e}"))?;
                ensure(
                    r.key == run.key_a,
                    format!("{desc} pipeline {pipe} seed {s}: wrong key"),
                )?;
            }
        }
    }
    let s5 = Arc::new(FiniteGroup::symmetric(5).unwrap());
    let mut rng = seed::rng(5);
    for i in 0..50 {
        let inst = plant_sccp(s5.clone(), Subgroup::Young(vec![3, 2]), Subgroup::Whole, &mut rng).unwrap();
        let sol = sccp_brute(&inst).map_err(|e| format!("planted {i}: {e}"))?;
        ensure(inst.verify(sol.h, sol.c).unwrap(), format!("planted {i}: bad solution"))?;
    }
    let mut groups = vec![
        FiniteGroup::symmetric(2).unwrap(),
        FiniteGroup::symmetric(3).unwrap(),
        FiniteGroup::symmetric(4).unwrap(),
        FiniteGroup::quaternion().unwrap(),
    ];
    groups.extend((6..=24).step_by(2).map(|o| FiniteGroup::dihedral(o).unwrap()));
    let mut compared = 0u64;
    for g in groups {
        let g = Arc::new(g);
        let mut subs = vec![Subgroup::Whole, Subgroup::Trivial, Subgroup::Center];
        if g.degree() == 4 && g.order() == 24 {
            subs.extend([
                Subgroup::Young(vec![2, 2]),
                Subgroup::Young(vec![3, 1]),
                Subgroup::Young(vec![2, 1, 1]),
            ]);
        }
        let n = g.order() as u32;
        for h in &subs {
            let hs = g.subgroup(h).unwrap();
            for k in &subs {
                let ks = g.subgroup(k).unwrap();
                for x in 0..n {
                    for y in 0..n {
                        let inst = SccpInstance {
                            group: g.clone(),
                            h: h.clone(),
                            k: k.clone(),
                            x,
                            y,
                        };
                        let got = sccp_brute(&inst).ok().map(|s| (s.h, s.c));
                        let want = reference_sccp(&g, &hs, &ks, x, y);
                        ensure(
                            got == want,
                            format!("{} H={h} K={k} x={x} y={y}: {got:?} vs {want:?}", g.kind()),
                        )?;
                        compared += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "400 pipeline runs, 50 planted S5, {compared} instances match the reference"
    ))
}

// wire fidelity

const BIN: &str = env!("CARGO_BIN_EXE_ldkep");

/// Which ELT line to damage: direction (true = client to server), index
/// among that direction's ELT lines, byte offset within the line.
#[derive(Clone, Copy, Debug)]
struct Corruption {
    upstream: bool,
    elt: usize,
    offset: usize,
}

/// Forwards lines in one direction, recording them and damaging at most one.
fn pump(from: TcpStream, mut to: TcpStream, log: Arc<Mutex<String>>, damage: Option<(usize, usize)>) {
    let mut r = BufReader::new(from);
    let mut elt = 0;
    loop {
        let mut line = Vec::new();
        match r.read_until(b'\n', &mut line) {
            Ok(0) | Err(_) => break,
            Ok(_) => {}
        }
        log.lock().unwrap().push_str(&String::from_utf8_lossy(&line));
        if line.starts_with(b"ELT ") {
            if let Some((target, offset)) = damage {
                if elt == target && offset < line.len() - 1 {
                    line[offset] ^= 0x01;
                }
            }
            elt += 1;
        }
        if to.write_all(&line).is_err() {
            break;
        }
    }
    let _ = to.shutdown(Shutdown::Write);
}

struct Session {
    server_ok: bool,
    client_ok: bool,
    server_out: String,
    client_out: String,
    /// Bytes the client sent, then bytes the server sent.
    upstream: String,
    downstream: String,
}

fn spawn_serve(desc: &str, seed: u64) -> (Child, String) {
    let mut child = Command::new(BIN)
        .args([
            "kep",
            "serve",
            "--listen",
            "127.0.0.1:0",
            "--timeout",
            "20",
            "--ctx",
            desc,
        ])
        .args(["--seed", &seed.to_string()])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut err = BufReader::new(child.stderr.take().unwrap());
    let mut line = String::new();
    err.read_line(&mut line).unwrap();
    let addr = line
        .trim()
        .strip_prefix("listening on ")
        .expect("serve prints its address")
        .to_string();
    (child, addr)
}

fn session(desc: &str, seed: u64, corrupt: Option<Corruption>) -> Session {
    let (server, server_addr) = spawn_serve(desc, seed);
    let proxy = TcpListener::bind("127.0.0.1:0").unwrap();
    let proxy_addr = proxy.local_addr().unwrap().to_string();
    let up = Arc::new(Mutex::new(String::new()));
    let down = Arc::new(Mutex::new(String::new()));
    let (u, d) = (up.clone(), down.clone());
    let relay = thread::spawn(move || {
        let (client, _) = proxy.accept().unwrap();
        let upstream = TcpStream::connect(server_addr).unwrap();
        let dmg = |dir: bool| corrupt.filter(|c| c.upstream == dir).map(|c| (c.elt, c.offset));
        let (dmg_up, dmg_down) = (dmg(true), dmg(false));
        let (c2, s2) = (client.try_clone().unwrap(), upstream.try_clone().unwrap());
        let t1 = thread::spawn(move || pump(client, upstream, u, dmg_up));
        let t2 = thread::spawn(move || pump(s2, c2, d, dmg_down));
        t1.join().unwrap();
        t2.join().unwrap();
    });
    let client = Command::new(BIN)
        .args([
            "kep",
            "connect",
            "--connect",
            &proxy_addr,
            "--timeout",
            "20",
            "--ctx",
            desc,
        ])
        .args(["--seed", &seed.to_string()])
        .output()
        .unwrap();
    let server = server.wait_with_output().unwrap();
    relay.join().unwrap();
    let text = |b: &[u8]| String::from_utf8_lossy(b).into_owned();
    let upstream = up.lock().unwrap().clone();
    let downstream = down.lock().unwrap().clone();
    Session {
        server_ok: server.status.success(),
        client_ok: client.status.success(),
        server_out: text(&server.stdout),
        client_out: text(&client.stdout),
        upstream,
        downstream,
    }
}

fn field<'a>(out: &'a str, key: &str) -> Option<&'a str> {
    out.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')))
}

fn wire_fidelity() -> Outcome {
    let mut corrupted = 0;
    for (name, _) in PRESETS {
        let seed = 11;
        let s = session(name, seed, None);
        ensure(
            s.server_ok && s.client_ok,
            format!("{name}: session failed\n{}{}", s.server_out, s.client_out),
        )?;
        let (hc, hs) = (field(&s.client_out, "confirm_own"), field(&s.server_out, "confirm_own"));
        ensure(hc.is_some() && hc == hs, format!("{name}: CONFIRM hashes differ"))?;
        ensure(
            field(&s.client_out, "key_hash") == field(&s.server_out, "key_hash"),
            format!("{name}: key hashes"),
        )?;
        let p = params(name, 1, 1, None);
        let local = run_local(&p, seed, seed).unwrap();
        let alice_pub = encode_alice_pub(&p, &local.transcript.alice);
        let bob_pub = encode_bob_pub(&p, &local.transcript.bob);
        ensure(
            s.upstream.contains(&alice_pub),
            format!("{name}: alice PUB differs from in-process bytes"),
        )?;
        ensure(
            s.downstream.contains(&bob_pub),
            format!("{name}: bob PUB differs from in-process bytes"),
        )?;

        // every byte of every ELT line on the small platforms, a spread of
        // offsets on the braid ones
        let elts: Vec<(bool, usize, usize)> = [(true, &alice_pub), (false, &bob_pub)]
            .iter()
            .flat_map(|(dir, text)| {
                text.lines()
                    .filter(|l| l.starts_with("ELT "))
                    .enumerate()
                    .map(|(i, l)| (*dir, i, l.len()))
                    .collect::<Vec<_>>()
            })
            .collect();
        let braid = !p.ctx().carrier().is_finite();
        for (upstream, elt, len) in elts {
            let offsets: Vec<usize> = if braid {
                [0, 4, 8, len / 3, len / 2, len - 1]
                    .into_iter()
                    .filter(|&o| o < len)
                    .collect()
            } else {
                (0..len).collect()
            };
            for offset in offsets {
                let c = Corruption { upstream, elt, offset };
                let s = session(name, seed, Some(c));
                ensure(
                    !s.server_ok && !s.client_ok,
                    format!(
                        "{name}: corruption {c:?} went unnoticed (server ok {}, client ok {})",
                        s.server_ok, s.client_ok
                    ),
                )?;
                corrupted += 1;
            }
        }
    }
    Ok(format!(
        "{} presets confirmed, PUB bytes match, {corrupted}/{corrupted} corruptions rejected",
        PRESETS.len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 laver exactness", laver_exactness),
        ("2 law suite", law_suite),
        ("3 condition/law evidence", condition_evidence),
        ("4 protocol correctness", protocol_correctness),
        ("5 tau braid relation", tau_relation),
        ("6 conjugacy transform identity", transform_identity),
        ("7 attack completeness", attack_completeness),
        ("8 wire fidelity", wire_fidelity),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{secs:.2} s]"),
            Err(why) => {
                println!("FAIL criterion {name}: {why} [{secs:.2} s]");
                failed.push(name);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
