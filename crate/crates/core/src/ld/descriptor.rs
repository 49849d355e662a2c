//! Context descriptors: `key=value` text naming a platform, e.g.
//! `platform=laver n=3` or
//! `platform=braid mode=gsc p=7 q1=3 q2=4 alpha1="1 2" alpha2="3" beta1="5" beta2="5 6"`.
//!
//! Values containing spaces are double-quoted (`\"` and `\\` escape);
//! lists of braid words or group elements are separated by `;`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::context::{LdContext, TwistPair};
use super::element::{BraidSampler, Element};
use super::group::FiniteGroup;
use super::ops::Endo;
use crate::braid::{BraidParams, BraidWord, Permutation};
use crate::error::{Error, Result};

/// Ordered `key=value` pairs; `Display` gives the canonical text.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Descriptor {
    pairs: Vec<(String, String)>,
}

impl Descriptor {
    pub fn new(platform: &str) -> Self {
        Descriptor {
            pairs: vec![("platform".into(), platform.into())],
        }
    }

    pub fn with(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.pairs.push((key.into(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// Quotes a value when it would not survive whitespace splitting.
pub fn quote(value: &str) -> String {
    if !value.is_empty() && !value.contains([' ', '"', '\\', '\t', '\n']) {
        return value.to_string();
    }
    let mut out = String::with_capacity(value.len() + 2);
    out.push('"');
    for c in value.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (key, value)) in self.pairs.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{key}={}", quote(value))?;
        }
        Ok(())
    }
}

/// One `key=value` token with the byte offset of its value.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Token {
    pub key: String,
    pub value: String,
    pub pos: usize,
}

/// Splits `key=value key="quoted value" ...` into tokens.
pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < bytes.len() && bytes[i] != b'=' && !bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if i >= bytes.len() || bytes[i] != b'=' {
            return Err(Error::parse(start, "expected key=value"));
        }
        let key = &text[start..i];
        if key.is_empty() {
            return Err(Error::parse(start, "empty key"));
        }
        i += 1;
        let pos = i;
        let mut value = String::new();
        if i < bytes.len() && bytes[i] == b'"' {
            i += 1;
            loop {
                match bytes.get(i) {
                    None => return Err(Error::parse(pos, "unterminated quoted value")),
                    Some(b'"') => {
                        i += 1;
                        break;
                    }
                    Some(b'\\') => {
                        match bytes.get(i + 1) {
                            Some(&c @ (b'"' | b'\\')) => value.push(c as char),
                            _ => return Err(Error::parse(i, "bad escape")),
                        }
                        i += 2;
                    }
                    Some(_) => {
                        let c = text[i..].chars().next().expect("in bounds");
                        value.push(c);
                        i += c.len_utf8();
                    }
                }
            }
            if i < bytes.len() && !bytes[i].is_ascii_whitespace() {
                return Err(Error::parse(i, "junk after quoted value"));
            }
        } else {
            let vstart = i;
            while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
                if bytes[i] == b'"' {
                    return Err(Error::parse(i, "stray quote"));
                }
                i += 1;
            }
            value.push_str(&text[vstart..i]);
        }
        if tokens.iter().any(|t: &Token| t.key == key) {
            return Err(Error::parse(start, format!("duplicate key {key:?}")));
        }
        tokens.push(Token {
            key: key.to_string(),
            value,
            pos,
        });
    }
    Ok(tokens)
}

/// Named platform presets.
pub const PRESETS: &[(&str, &str)] = &[
    ("laver3", "platform=laver n=3"),
    ("s5-conj", "platform=group kind=symmetric degree=5 op=conj"),
    ("shifted", "platform=braid mode=shifted p=1"),
    (
        "braid-gsc",
        "platform=braid mode=gsc p=7 q1=3 q2=4 alpha1=\"1 2;-2 -1\" alpha2=\"3;1 -3 2\" \
         beta1=\"5;-6 5\" beta2=\"5 6;4 -5\"",
    ),
    ("d4-twist", "platform=group kind=dihedral order=8 a=r2"),
    ("q8-twist", "platform=group kind=quaternion a=\"1;-1\""),
    ("pure4", "platform=pure n=4 d=1"),
];

/// Expands a preset name; other text is returned unchanged.
pub fn resolve_preset(text: &str) -> &str {
    let t = text.trim();
    PRESETS
        .iter()
        .find(|(name, _)| *name == t)
        .map(|(_, d)| *d)
        .unwrap_or(text)
}

struct Fields {
    map: BTreeMap<String, (String, usize)>,
}

impl Fields {
    fn take(&mut self, key: &str) -> Option<(String, usize)> {
        self.map.remove(key)
    }

    fn required(&mut self, key: &str) -> Result<(String, usize)> {
        self.take(key)
            .ok_or_else(|| Error::parse(0, format!("missing key {key:?}")))
    }

    fn number(&mut self, key: &str, default: Option<usize>) -> Result<usize> {
        match self.take(key) {
            Some((v, pos)) => v
                .parse()
                .map_err(|_| Error::parse(pos, format!("{key} must be a non-negative integer"))),
            None => default.ok_or_else(|| Error::parse(0, format!("missing key {key:?}"))),
        }
    }

    fn flag(&mut self, key: &str) -> Result<bool> {
        match self.take(key) {
            None => Ok(false),
            Some((v, _)) if v == "1" || v == "true" => Ok(true),
            Some((v, _)) if v == "0" || v == "false" => Ok(false),
            Some((_, pos)) => Err(Error::parse(pos, format!("{key} must be 0 or 1"))),
        }
    }

    fn words(&mut self, key: &str) -> Result<Vec<BraidWord>> {
        let (v, pos) = self.take(key).unwrap_or_default();
        v.split(';')
            .map(|w| {
                w.parse::<BraidWord>()
                    .map_err(|e| Error::parse(pos, format!("{key}: {e}")))
            })
            .collect()
    }

    fn word(&mut self, key: &str) -> Result<BraidWord> {
        let mut ws = self.words(key)?;
        if ws.len() != 1 {
            return Err(Error::parse(0, format!("{key} takes a single braid word")));
        }
        Ok(ws.remove(0))
    }

    fn finish(self) -> Result<()> {
        match self.map.into_iter().next() {
            None => Ok(()),
            Some((k, (_, pos))) => Err(Error::parse(pos, format!("unknown key {k:?}"))),
        }
    }
}

fn with_pos<T>(r: Result<T>, pos: usize) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => Error::parse(pos, other),
    })
}

fn parse_endo(g: &FiniteGroup, text: &str, pos: usize) -> Result<Endo> {
    Ok(match text {
        "id" => Endo::Identity,
        "trivial" => Endo::Trivial,
        "sign" => {
            let t = g
                .index_of(&Permutation::transposition(g.degree(), 1, 2))
                .ok_or_else(|| Error::parse(pos, "sign map needs (1 2) in the group"))?;
            Endo::Sign(Element::Group(t))
        }
        _ => {
            let e = text
                .strip_prefix("inner:")
                .ok_or_else(|| Error::parse(pos, format!("unknown endomorphism {text:?}")))?;
            Endo::Inner(Element::Group(with_pos(g.parse_element(e), pos)?))
        }
    })
}

fn braid_sampler(f: &mut Fields, p: usize) -> Result<Option<BraidSampler>> {
    let d = LdContext::default_sampler(p);
    let len = f.number("len", Some(d.len))?;
    let max_index = f.number("wmax", Some(d.max_index))?;
    if max_index == 0 {
        return Err(Error::parse(0, "wmax must be positive"));
    }
    Ok(Some(BraidSampler { len, max_index }))
}

fn pairs(f: &mut Fields, left: &str, right: &str) -> Result<Vec<TwistPair>> {
    let l = f.words(left)?;
    let r = f.words(right)?;
    if l.len() != r.len() {
        return Err(Error::parse(
            0,
            format!("{left} and {right} list different numbers of words"),
        ));
    }
    Ok(l.into_iter().zip(r).map(|(a, b)| TwistPair::new(a, b)).collect())
}

/// Parses a descriptor (or preset name) and builds its context.
pub fn parse_context(text: &str) -> Result<LdContext> {
    let text = resolve_preset(text);
    let tokens = tokenize(text)?;
    let mut f = Fields {
        map: tokens.into_iter().map(|t| (t.key, (t.value, t.pos))).collect(),
    };
    let (platform, ppos) = f.required("platform")?;
    let ctx = match platform.as_str() {
        "laver" => {
            let n = f.number("n", None)?;
            LdContext::laver(n as u32)?
        }
        "group" => parse_group(&mut f)?,
        "pure" => {
            let n = f.number("n", None)?;
            let d = f.number("d", Some(1))?;
            let len = f.number("len", Some(4))?;
            LdContext::pure_pullout(n, d, len)?
        }
        "braid" => {
            let (mode, mpos) = f.required("mode")?;
            let checked = !f.flag("unchecked")?;
            match mode.as_str() {
                "shifted" => {
                    let p = f.number("p", Some(1))?;
                    let s = braid_sampler(&mut f, p)?;
                    LdContext::shifted_conjugacy(p, s)?
                }
                "gsl" => {
                    let p = f.number("p", None)?;
                    let a1 = f.word("ap")?;
                    let a2 = f.word("app")?;
                    let sign = match f.take("sign") {
                        None => 1,
                        Some((v, pos)) => v
                            .parse::<i32>()
                            .map_err(|_| Error::parse(pos, "sign must be 1 or -1"))?,
                    };
                    let s = braid_sampler(&mut f, p)?;
                    LdContext::gen_shifted(p, a1, a2, sign, checked, s)?
                }
                "split" => {
                    let p1 = f.number("p1", None)?;
                    let p2 = f.number("p2", None)?;
                    let a1 = (f.word("a1p")?, f.word("a1pp")?);
                    let a2 = (f.word("a2p")?, f.word("a2pp")?);
                    let s = braid_sampler(&mut f, p1 + p2)?;
                    LdContext::split(p1, p2, a1, a2, checked, s)?
                }
                "gsc" => {
                    let p = f.number("p", None)?;
                    let q1 = f.number("q1", None)?;
                    let q2 = f.number("q2", None)?;
                    let alphas = pairs(&mut f, "alpha1", "alpha2")?;
                    let betas = pairs(&mut f, "beta1", "beta2")?;
                    let restricted = f.flag("restricted")?;
                    let s = braid_sampler(&mut f, p)?;
                    let params = BraidParams::new(p, q1, q2, 2 * p)?;
                    LdContext::partial_multi(params, &alphas, &betas, restricted, checked, s)?
                }
                other => return Err(Error::parse(mpos, format!("unknown braid mode {other:?}"))),
            }
        }
        other => return Err(Error::parse(ppos, format!("unknown platform {other:?}"))),
    };
    f.finish()?;
    Ok(ctx)
}

fn parse_group(f: &mut Fields) -> Result<LdContext> {
    let (kind, kpos) = f.required("kind")?;
    let g = match kind.as_str() {
        "symmetric" => FiniteGroup::symmetric(f.number("degree", None)?)?,
        "dihedral" => FiniteGroup::dihedral(f.number("order", Some(8))?)?,
        "quaternion" => FiniteGroup::quaternion()?,
        other => return Err(Error::parse(kpos, format!("unknown group kind {other:?}"))),
    };
    let g = Arc::new(g);
    let checked = !f.flag("unchecked")?;
    if let Some((list, pos)) = f.take("a") {
        if let Some((op, opos)) = f.take("op") {
            if op != "twist" {
                return Err(Error::parse(opos, "a= implies op=twist"));
            }
        }
        let twists = list
            .split(';')
            .map(|e| with_pos(g.parse_element(e), pos))
            .collect::<Result<Vec<_>>>()?;
        return LdContext::central_twist(g, &twists, checked);
    }
    let (op, opos) = f.take("op").unwrap_or(("conj".into(), 0));
    let endo = |f: &mut Fields| -> Result<Endo> {
        let (e, epos) = f.required("endo")?;
        parse_endo(&g, &e, epos)
    };
    match op.as_str() {
        "conj" => LdContext::group_conjugacy(g.clone(), false),
        "rev" => LdContext::group_conjugacy(g.clone(), true),
        "sym" => LdContext::group_symmetric(g.clone()),
        "trivial" => {
            let e = endo(f)?;
            LdContext::group_trivial(g.clone(), e)
        }
        "fconj" => {
            let e = endo(f)?;
            LdContext::group_f_conjugacy(g.clone(), e)
        }
        "fsym" | "fsym-rev" => {
            let e = endo(f)?;
            LdContext::group_f_symmetric(g.clone(), e, op == "fsym-rev", checked)
        }
        other => Err(Error::parse(opos, format!("unknown group operation {other:?}"))),
    }
}
