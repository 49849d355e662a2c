//! Key establishment over a partial multi-LD system. With a single
//! operation in both pools this is the plain LD-system protocol.
//!
//! Alice holds `(a_0, a, *_α)` with `a_0 = T(s_i...)`, Bob holds `(b, *_β)`
//! with `b = T′(t_j...)`. Alice sends `a *_α t_j` and `p_0 = a *_α a_0`,
//! Bob sends `b *_β s_i`; both arrive at `a *_α (b *_β a_0)`.

mod net;
mod wire;

use std::sync::Arc;

use rand::Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ld::{laws, CheckOptions, Element, LdContext, Side};
use crate::seed;
use crate::treeword::TreeWord;

pub use net::{run_party, run_tcp, Role, SessionOutcome, DEFAULT_TIMEOUT};
pub use wire::{
    decode_alice_pub, decode_bob_pub, encode_alice_pub, encode_bob_pub, encode_hello, read_frame, Frame, Hello,
};

pub const VERSION: &str = "LDKEP/1";
pub const HASH_SHA256: &str = "sha256";

/// Size bounds for secrets. `word_len` only matters on braid carriers.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SecretBounds {
    pub leaf_min: usize,
    pub leaf_max: usize,
    pub word_len: usize,
}

impl SecretBounds {
    pub fn for_context(ctx: &LdContext) -> Self {
        if ctx.carrier().is_finite() {
            SecretBounds {
                leaf_min: 4,
                leaf_max: 8,
                word_len: 0,
            }
        } else {
            SecretBounds {
                leaf_min: 3,
                leaf_max: 5,
                word_len: 16,
            }
        }
    }
}

/// Everything both parties agree on before a handshake.
#[derive(Clone, Debug)]
pub struct PublicParams {
    ctx: Arc<LdContext>,
    m: usize,
    n: usize,
    bounds: SecretBounds,
    strands: usize,
    hash: String,
    basis_a: Vec<Element>,
    basis_b: Vec<Element>,
}

impl PublicParams {
    /// Derives the public bases `s_1..s_m`, `t_1..t_n` from the descriptor
    /// and runs a short sampled distributivity check on the context.
    pub fn new(ctx: LdContext, m: usize, n: usize, bounds: SecretBounds, hash: &str) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::invalid("m and n must be at least 1"));
        }
        if bounds.leaf_min == 0 || bounds.leaf_min > bounds.leaf_max {
            return Err(Error::invalid(format!(
                "need 1 <= leaf-min <= leaf-max, got {}..{}",
                bounds.leaf_min, bounds.leaf_max
            )));
        }
        if !ctx.carrier().is_finite() && bounds.word_len == 0 {
            return Err(Error::invalid("braid secrets need a positive word length"));
        }
        if hash != HASH_SHA256 {
            return Err(Error::invalid(format!("unsupported hash {hash:?} (only sha256)")));
        }
        let opts = CheckOptions {
            trials: 8,
            seed: 0,
            exhaustive_limit: 16,
        };
        for report in laws::check_declared_laws(&ctx, &opts)? {
            if !report.passed() {
                return Err(Error::precondition(format!("context self-check failed: {report}")));
            }
        }
        let desc = ctx.descriptor();
        let basis_seed = seed::derive(0, &format!("basis\n{desc}\nm={m}\nn={n}"));
        let sample = |k: usize| ctx.carrier().sample(&mut seed::stream(basis_seed, k as u64));
        let basis_a = (0..m).map(sample).collect();
        let basis_b = (m..m + n).map(sample).collect();
        let strands = ctx.key_strands(bounds.leaf_max, bounds.leaf_max);
        Ok(PublicParams {
            ctx: Arc::new(ctx),
            m,
            n,
            bounds,
            strands,
            hash: hash.to_string(),
            basis_a,
            basis_b,
        })
    }

    pub fn ctx(&self) -> &LdContext {
        &self.ctx
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bounds(&self) -> SecretBounds {
        self.bounds
    }

    /// Strand count `N` of the braid group messages and keys live in
    /// (zero on finite carriers).
    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    /// `s_1..s_m`.
    pub fn basis_a(&self) -> &[Element] {
        &self.basis_a
    }

    /// `t_1..t_n`.
    pub fn basis_b(&self) -> &[Element] {
        &self.basis_b
    }

    pub fn descriptor(&self) -> String {
        self.ctx.descriptor()
    }

    fn canonical(&self, x: &Element) -> Result<Element> {
        self.ctx.carrier().canonical(x, self.strands)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AliceSecret {
    pub a0_tree: TreeWord,
    pub a: Element,
    pub alpha: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BobSecret {
    pub b_tree: TreeWord,
    pub beta: usize,
}

/// `a *_α t_1 .. a *_α t_n` followed by `p_0 = a *_α a_0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AliceMessage {
    pub at: Vec<Element>,
    pub p0: Element,
}

/// `b *_β s_1 .. b *_β s_m`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BobMessage {
    pub bs: Vec<Element>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SharedKey {
    pub element: Element,
    /// Wire text of the canonical representative.
    pub canonical: String,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Transcript {
    pub alice: AliceMessage,
    pub bob: BobMessage,
}

fn draw_tree<R: Rng>(rng: &mut R, params: &PublicParams, basis: usize, side: Side) -> Result<TreeWord> {
    let b = params.bounds;
    let k = rng.gen_range(b.leaf_min..=b.leaf_max);
    TreeWord::random(rng, k, basis, &params.ctx.pool(side))
}

fn draw_op<R: Rng>(rng: &mut R, params: &PublicParams, side: Side) -> usize {
    let pool = params.ctx.pool(side);
    pool[rng.gen_range(0..pool.len())]
}

pub fn keygen_alice(params: &PublicParams, seed: u64) -> Result<AliceSecret> {
    let mut rng = seed::rng(seed::derive(seed, "alice"));
    let a0_tree = draw_tree(&mut rng, params, params.m, Side::A)?;
    let a = params.ctx.carrier().sample_with_len(&mut rng, params.bounds.word_len);
    let alpha = draw_op(&mut rng, params, Side::A);
    Ok(AliceSecret { a0_tree, a, alpha })
}

pub fn keygen_bob(params: &PublicParams, seed: u64) -> Result<BobSecret> {
    let mut rng = seed::rng(seed::derive(seed, "bob"));
    let b_tree = draw_tree(&mut rng, params, params.n, Side::B)?;
    let beta = draw_op(&mut rng, params, Side::B);
    Ok(BobSecret { b_tree, beta })
}

pub fn alice_message(params: &PublicParams, secret: &AliceSecret) -> Result<AliceMessage> {
    let ctx = &params.ctx;
    let a0 = secret.a0_tree.eval(&params.basis_a, ctx)?;
    let at = params
        .basis_b
        .iter()
        .map(|t| params.canonical(&ctx.apply(secret.alpha, &secret.a, t)?))
        .collect::<Result<_>>()?;
    let p0 = params.canonical(&ctx.apply(secret.alpha, &secret.a, &a0)?)?;
    Ok(AliceMessage { at, p0 })
}

pub fn bob_message(params: &PublicParams, secret: &BobSecret) -> Result<BobMessage> {
    let ctx = &params.ctx;
    let b = secret.b_tree.eval(&params.basis_b, ctx)?;
    let bs = params
        .basis_a
        .iter()
        .map(|s| params.canonical(&ctx.apply(secret.beta, &b, s)?))
        .collect::<Result<_>>()?;
    Ok(BobMessage { bs })
}

pub(crate) fn shared_key(params: &PublicParams, k: &Element) -> Result<SharedKey> {
    let element = params.canonical(k)?;
    let canonical = params.ctx.carrier().format(&element);
    Ok(SharedKey { element, canonical })
}

/// `K_A = a *_α T(b *_β r_1, ..)`, the inner tree value being `b *_β a_0`.
pub fn alice_finish(params: &PublicParams, secret: &AliceSecret, msg: &BobMessage) -> Result<SharedKey> {
    if msg.bs.len() != params.m {
        return Err(Error::Protocol(format!(
            "expected {} elements from Bob, got {}",
            params.m,
            msg.bs.len()
        )));
    }
    let ctx = &params.ctx;
    let b_a0 = secret.a0_tree.eval(&msg.bs, ctx)?;
    shared_key(params, &ctx.apply(secret.alpha, &secret.a, &b_a0)?)
}

/// `K_B = T′(a *_α u_1, ..) *_β p_0`, the tree value being `a *_α b`.
pub fn bob_finish(params: &PublicParams, secret: &BobSecret, msg: &AliceMessage) -> Result<SharedKey> {
    if msg.at.len() != params.n {
        return Err(Error::Protocol(format!(
            "expected {} elements from Alice, got {}",
            params.n,
            msg.at.len()
        )));
    }
    let ctx = &params.ctx;
    let a_b = secret.b_tree.eval(&msg.at, ctx)?;
    shared_key(params, &ctx.apply(secret.beta, &a_b, &msg.p0)?)
}

fn hex_digest(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_be_bytes());
        h.update(p.as_bytes());
    }
    hex::encode(h.finalize())
}

/// Digest of the key's canonical text under the pinned parameters. Equal
/// keys give equal digests whatever words they were computed from.
pub fn key_digest(key: &SharedKey, params: &PublicParams) -> String {
    hex_digest(&[
        VERSION,
        "key",
        &params.descriptor(),
        &params.strands.to_string(),
        &key.canonical,
    ])
}

/// Key confirmation value sent in `CONFIRM`: the key digest bound to both
/// public messages as serialized on the wire.
pub fn confirm(key: &SharedKey, params: &PublicParams, transcript: &Transcript) -> String {
    hex_digest(&[
        VERSION,
        "confirm",
        &params.descriptor(),
        &params.strands.to_string(),
        &encode_alice_pub(params, &transcript.alice),
        &encode_bob_pub(params, &transcript.bob),
        &key.canonical,
    ])
}

#[derive(Clone, Debug)]
pub struct LocalRun {
    pub alice: AliceSecret,
    pub bob: BobSecret,
    pub transcript: Transcript,
    pub key_a: SharedKey,
    pub key_b: SharedKey,
}

/// Runs both parties in process. Fails with [`Error::KeyMismatch`] when the
/// keys differ, which means the context is not distributive as declared.
pub fn run_local(params: &PublicParams, seed_a: u64, seed_b: u64) -> Result<LocalRun> {
    let alice = keygen_alice(params, seed_a)?;
    let bob = keygen_bob(params, seed_b)?;
    let transcript = Transcript {
        alice: alice_message(params, &alice)?,
        bob: bob_message(params, &bob)?,
    };
    let key_a = alice_finish(params, &alice, &transcript.bob)?;
    let key_b = bob_finish(params, &bob, &transcript.alice)?;
    if key_a != key_b {
        return Err(Error::KeyMismatch(format!(
            "K_A = {} but K_B = {}",
            key_a.canonical, key_b.canonical
        )));
    }
    Ok(LocalRun {
        alice,
        bob,
        transcript,
        key_a,
        key_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ld::parse_context;

    fn params(desc: &str) -> PublicParams {
        let ctx = parse_context(desc).unwrap();
        let b = SecretBounds::for_context(&ctx);
        PublicParams::new(ctx, 1, 1, b, HASH_SHA256).unwrap()
    }

    #[test]
    fn laver_handshake_agrees() {
        let p = params("laver3");
        for s in 0..20 {
            let run = run_local(&p, s, s + 100).unwrap();
            assert_eq!(run.key_a, run.key_b);
        }
    }

    #[test]
    fn keygen_is_deterministic() {
        let p = params("laver3");
        assert_eq!(keygen_alice(&p, 1).unwrap(), keygen_alice(&p, 1).unwrap());
        assert_eq!(keygen_bob(&p, 1).unwrap(), keygen_bob(&p, 1).unwrap());
        assert_eq!(keygen_alice(&p, 1).unwrap().alpha, 0);
    }

    #[test]
    fn rejects_bad_parameters() {
        let ctx = parse_context("laver3").unwrap();
        let b = SecretBounds::for_context(&ctx);
        assert!(PublicParams::new(ctx.clone(), 0, 1, b, HASH_SHA256).is_err());
        assert!(PublicParams::new(ctx, 1, 1, b, "md5").is_err());
    }
}
