//! Line-oriented frames: a header line `LDKEP/1 <KIND> key=value ...`,
//! body lines, and a closing `end` line.

use std::io::{BufRead, Read};

use super::{AliceMessage, BobMessage, PublicParams, VERSION};
use crate::error::{Error, Result};
use crate::ld::{quote, tokenize, Element, Token};

const MAX_LINE: u64 = 1 << 24;
const MAX_BODY_LINES: usize = 1 << 16;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Frame {
    pub kind: String,
    pub fields: Vec<Token>,
    pub body: Vec<String>,
}

impl Frame {
    pub fn field(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|t| t.key == key).map(|t| t.value.as_str())
    }

    /// Requires exactly the given keys, in any order.
    fn expect_fields(&self, keys: &[&str]) -> Result<()> {
        for t in &self.fields {
            if !keys.contains(&t.key.as_str()) {
                return Err(Error::Protocol(format!(
                    "unexpected field {:?} in {} frame",
                    t.key, self.kind
                )));
            }
        }
        for k in keys {
            if self.field(k).is_none() {
                return Err(Error::Protocol(format!("{} frame lacks {k}", self.kind)));
            }
        }
        Ok(())
    }

    fn expect_kind(&self, kind: &str) -> Result<()> {
        if self.kind == "ERROR" {
            return Err(Error::Protocol(format!(
                "peer reported an error: {}",
                self.field("reason").unwrap_or("(no reason)")
            )));
        }
        if self.kind != kind {
            return Err(Error::Protocol(format!("expected a {kind} frame, got {}", self.kind)));
        }
        Ok(())
    }
}

fn read_line<R: BufRead>(r: &mut R) -> Result<Option<String>> {
    let mut buf = Vec::new();
    let n = r.by_ref().take(MAX_LINE).read_until(b'\n', &mut buf)?;
    if n == 0 {
        return Ok(None);
    }
    if buf.pop() != Some(b'\n') {
        return Err(Error::Protocol("line too long or truncated".into()));
    }
    let line = String::from_utf8(buf).map_err(|_| Error::Protocol("frame is not valid UTF-8".into()))?;
    if line.contains('\r') {
        return Err(Error::Protocol("carriage return in frame".into()));
    }
    Ok(Some(line))
}

/// Reads one frame. End of stream before a header is an error.
pub fn read_frame<R: BufRead>(r: &mut R) -> Result<Frame> {
    let header = read_line(r)?.ok_or_else(|| Error::Protocol("connection closed".into()))?;
    let rest = header
        .strip_prefix(VERSION)
        .and_then(|s| s.strip_prefix(' '))
        .ok_or_else(|| Error::Protocol(format!("expected a {VERSION} header, got {header:?}")))?;
    let (kind, fields) = rest.split_once(' ').unwrap_or((rest, ""));
    if kind.is_empty() || !kind.bytes().all(|b| b.is_ascii_uppercase()) {
        return Err(Error::Protocol(format!("bad frame kind {kind:?}")));
    }
    let fields = tokenize(fields).map_err(|e| Error::Protocol(format!("bad {kind} header: {e}")))?;
    let mut body = Vec::new();
    loop {
        let line = read_line(r)?.ok_or_else(|| Error::Protocol(format!("{kind} frame not terminated")))?;
        if line == "end" {
            break;
        }
        if body.len() == MAX_BODY_LINES {
            return Err(Error::Protocol("frame body too long".into()));
        }
        body.push(line);
    }
    Ok(Frame {
        kind: kind.to_string(),
        fields,
        body,
    })
}

fn frame_text(header: &str, body: &[String]) -> String {
    let mut out = format!("{VERSION} {header}\n");
    for line in body {
        out.push_str(line);
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

/// The `HELLO` fields; both peers must agree on everything but the role.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Hello {
    pub role: String,
    pub ctx: String,
    pub m: usize,
    pub n: usize,
    pub strands: usize,
    pub hash: String,
}

impl Hello {
    pub fn of(params: &PublicParams, role: &str) -> Self {
        Hello {
            role: role.into(),
            ctx: params.descriptor(),
            m: params.m(),
            n: params.n(),
            strands: params.strands(),
            hash: params.hash().into(),
        }
    }

    pub fn parse(frame: &Frame) -> Result<Self> {
        frame.expect_kind("HELLO")?;
        frame.expect_fields(&["role", "ctx", "m", "n", "N", "hash"])?;
        if !frame.body.is_empty() {
            return Err(Error::Protocol("HELLO carries no body".into()));
        }
        let num = |k: &str| {
            let v = frame.field(k).expect("checked");
            v.parse::<usize>()
                .ok()
                .filter(|_| v == "0" || !v.starts_with('0'))
                .ok_or_else(|| Error::Protocol(format!("HELLO {k} is not a number: {v:?}")))
        };
        Ok(Hello {
            role: frame.field("role").expect("checked").into(),
            ctx: frame.field("ctx").expect("checked").into(),
            m: num("m")?,
            n: num("n")?,
            strands: num("N")?,
            hash: frame.field("hash").expect("checked").into(),
        })
    }

    pub fn encode(&self) -> String {
        frame_text(
            &format!(
                "HELLO role={} ctx={} m={} n={} N={} hash={}",
                self.role,
                quote(&self.ctx),
                self.m,
                self.n,
                self.strands,
                self.hash
            ),
            &[],
        )
    }

    /// Checks a peer's hello against ours.
    pub fn check_peer(&self, peer: &Hello) -> Result<()> {
        let expected_role = if self.role == "alice" { "bob" } else { "alice" };
        if peer.role != expected_role {
            return Err(Error::Protocol(format!(
                "peer role {:?}, expected {expected_role}",
                peer.role
            )));
        }
        if peer.ctx != self.ctx {
            return Err(Error::Protocol(format!(
                "context mismatch: ours {:?}, peer {:?}",
                self.ctx, peer.ctx
            )));
        }
        if (peer.m, peer.n, peer.strands) != (self.m, self.n, self.strands) {
            return Err(Error::Protocol(format!(
                "parameter mismatch: ours m={} n={} N={}, peer m={} n={} N={}",
                self.m, self.n, self.strands, peer.m, peer.n, peer.strands
            )));
        }
        if peer.hash != self.hash {
            return Err(Error::Protocol(format!(
                "hash mismatch: ours {}, peer {}",
                self.hash, peer.hash
            )));
        }
        Ok(())
    }
}

pub fn encode_hello(params: &PublicParams, role: &str) -> String {
    Hello::of(params, role).encode()
}

fn elt_lines(params: &PublicParams, names: impl Iterator<Item = String>, elements: &[&Element]) -> Vec<String> {
    names
        .zip(elements)
        .map(|(name, x)| {
            let text = params.ctx().carrier().format(x);
            format!("ELT {name} {} {text}", text.len())
        })
        .collect()
}

fn alice_names(n: usize) -> impl Iterator<Item = String> {
    (1..=n)
        .map(|i| format!("at{i}"))
        .chain(std::iter::once("p0".to_string()))
}

fn bob_names(m: usize) -> impl Iterator<Item = String> {
    (1..=m).map(|i| format!("bs{i}"))
}

pub fn encode_alice_pub(params: &PublicParams, msg: &AliceMessage) -> String {
    let elts: Vec<&Element> = msg.at.iter().chain(std::iter::once(&msg.p0)).collect();
    let body = elt_lines(params, alice_names(msg.at.len()), &elts);
    frame_text(&format!("PUB role=alice count={}", elts.len()), &body)
}

pub fn encode_bob_pub(params: &PublicParams, msg: &BobMessage) -> String {
    let elts: Vec<&Element> = msg.bs.iter().collect();
    let body = elt_lines(params, bob_names(msg.bs.len()), &elts);
    frame_text(&format!("PUB role=bob count={}", elts.len()), &body)
}

fn decode_elts(params: &PublicParams, frame: &Frame, role: &str, names: Vec<String>) -> Result<Vec<Element>> {
    frame.expect_kind("PUB")?;
    frame.expect_fields(&["role", "count"])?;
    if frame.field("role") != Some(role) {
        return Err(Error::Protocol(format!("expected PUB from {role}")));
    }
    let count = names.len().to_string();
    if frame.field("count") != Some(count.as_str()) || frame.body.len() != names.len() {
        return Err(Error::Protocol(format!("PUB from {role} must carry {count} elements")));
    }
    frame
        .body
        .iter()
        .zip(names)
        .map(|(line, name)| {
            let bad = |why: &str| Error::Protocol(format!("bad ELT line {line:?}: {why}"));
            let rest = line.strip_prefix("ELT ").ok_or_else(|| bad("missing ELT tag"))?;
            let rest = rest
                .strip_prefix(name.as_str())
                .and_then(|r| r.strip_prefix(' '))
                .ok_or_else(|| bad(&format!("expected name {name}")))?;
            let (len, text) = rest.split_once(' ').ok_or_else(|| bad("missing length"))?;
            let ok_len =
                !len.is_empty() && len.bytes().all(|b| b.is_ascii_digit()) && (len == "0" || !len.starts_with('0'));
            if !ok_len || len.parse::<usize>().ok() != Some(text.len()) {
                return Err(bad("length does not match"));
            }
            params
                .ctx()
                .carrier()
                .parse(text, params.strands())
                .map_err(|e| bad(&e.to_string()))
        })
        .collect()
}

pub fn decode_alice_pub(params: &PublicParams, frame: &Frame) -> Result<AliceMessage> {
    let mut elts = decode_elts(params, frame, "alice", alice_names(params.n()).collect())?;
    let p0 = elts.pop().expect("n + 1 >= 1 elements");
    Ok(AliceMessage { at: elts, p0 })
}

pub fn decode_bob_pub(params: &PublicParams, frame: &Frame) -> Result<BobMessage> {
    let bs = decode_elts(params, frame, "bob", bob_names(params.m()).collect())?;
    Ok(BobMessage { bs })
}

pub(crate) fn confirm_frame(hash: &str) -> String {
    frame_text(&format!("CONFIRM keyhash={hash}"), &[])
}

pub(crate) fn parse_confirm(frame: &Frame) -> Result<String> {
    frame.expect_kind("CONFIRM")?;
    frame.expect_fields(&["keyhash"])?;
    let h = frame.field("keyhash").expect("checked");
    if h.len() != 64 || !h.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b)) || !frame.body.is_empty() {
        return Err(Error::Protocol(format!("malformed CONFIRM keyhash {h:?}")));
    }
    Ok(h.to_string())
}

pub(crate) fn error_frame(reason: &str) -> String {
    let reason: String = reason.chars().map(|c| if c.is_control() { ' ' } else { c }).collect();
    frame_text(&format!("ERROR reason={}", quote(&reason)), &[])
}
