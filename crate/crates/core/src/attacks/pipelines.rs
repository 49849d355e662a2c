use std::fmt;
use std::time::{Duration, Instant};

use super::{
    brute_modsimldp, brute_simldp, membership_search, require_finite, Closure, LdpInstance, DEFAULT_CLOSURE_CAP,
};
use crate::error::{Error, Result};
use crate::ld::{Element, LdContext, Side};
use crate::protocol::{key_digest, shared_key, PublicParams, SharedKey, Transcript};

/// Key-recovery strategies from public data.
///
/// * `A`: pseudo-key for Bob from his submagma, then a tree for it.
/// * `B`: pseudo-key for Alice together with a pseudo `a0` from her submagma, then a tree for that.
/// * `C`: pseudo-keys for both, no tree search.
/// * `D`: Bob's pseudo-key from the whole carrier, Alice's with a pseudo `a0`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Pipeline {
    A,
    B,
    C,
    D,
}

impl Pipeline {
    pub const ALL: [Pipeline; 4] = [Pipeline::A, Pipeline::B, Pipeline::C, Pipeline::D];
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pipeline::A => "A",
            Pipeline::B => "B",
            Pipeline::C => "C",
            Pipeline::D => "D",
        })
    }
}

impl std::str::FromStr for Pipeline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Pipeline::A),
            "B" | "b" => Ok(Pipeline::B),
            "C" | "c" => Ok(Pipeline::C),
            "D" | "d" => Ok(Pipeline::D),
            _ => Err(Error::invalid(format!("pipeline must be one of A, B, C, D, got {s:?}"))),
        }
    }
}

/// One oracle invocation inside a pipeline.
#[derive(Clone, Debug)]
pub struct OracleCall {
    pub name: String,
    /// Size of the enumerated space.
    pub space: u64,
    /// Candidates tried before the answer.
    pub searched: u64,
    pub result: String,
}

#[derive(Clone, Debug)]
pub struct AttackReport {
    pub pipeline: Pipeline,
    pub descriptor: String,
    pub calls: Vec<OracleCall>,
    pub elapsed: Duration,
    pub key: SharedKey,
    pub key_hash: String,
}

impl fmt::Display for AttackReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pipeline {}", self.pipeline)?;
        writeln!(f, "ctx {}", self.descriptor)?;
        for c in &self.calls {
            writeln!(
                f,
                "oracle {} space={} searched={} -> {}",
                c.name, c.space, c.searched, c.result
            )?;
        }
        writeln!(f, "elapsed_ms {:.3}", self.elapsed.as_secs_f64() * 1e3)?;
        writeln!(f, "key {}", self.key.canonical)?;
        write!(f, "key_hash {}", self.key_hash)
    }
}

fn op_name(ctx: &LdContext, op: usize) -> String {
    ctx.op(op).map(|o| o.name.clone()).unwrap_or_else(|_| format!("op{op}"))
}

struct Attack<'a> {
    params: &'a PublicParams,
    transcript: &'a Transcript,
    calls: Vec<OracleCall>,
}

impl Attack<'_> {
    fn ctx(&self) -> &LdContext {
        self.params.ctx()
    }

    fn closure(&self, side: Side) -> Result<Closure> {
        let basis = match side {
            Side::A => self.params.basis_a(),
            Side::B => self.params.basis_b(),
        };
        Closure::build(self.ctx(), basis, &self.ctx().pool(side), DEFAULT_CLOSURE_CAP)
    }

    /// `b′ *_β′ s_i = b *_β s_i` over the given candidates.
    fn bob_pseudo_key(&mut self, candidates: &[Element], label: &str) -> Result<(Element, usize)> {
        let inst = LdpInstance {
            pairs: self
                .params
                .basis_a()
                .iter()
                .cloned()
                .zip(self.transcript.bob.bs.iter().cloned())
                .collect(),
            ops: self.ctx().pool(Side::B),
        };
        let sol = brute_simldp(self.ctx(), &inst, candidates)?;
        self.calls.push(OracleCall {
            name: format!("simLDP[{label}]"),
            space: (candidates.len() * inst.ops.len()) as u64,
            searched: sol.searched,
            result: format!(
                "b′={} β′={}",
                self.ctx().carrier().display(&sol.element),
                op_name(self.ctx(), sol.op)
            ),
        });
        Ok((sol.element, sol.op))
    }

    fn alice_pairs(&self) -> Vec<(Element, Element)> {
        self.params
            .basis_b()
            .iter()
            .cloned()
            .zip(self.transcript.alice.at.iter().cloned())
            .collect()
    }

    /// `a′ *_α′ t_j = a *_α t_j` over the whole carrier.
    fn alice_pseudo_key(&mut self) -> Result<(Element, usize)> {
        let inst = LdpInstance {
            pairs: self.alice_pairs(),
            ops: self.ctx().pool(Side::A),
        };
        let carrier: Vec<Element> = self.ctx().carrier().elements().collect();
        let sol = brute_simldp(self.ctx(), &inst, &carrier)?;
        self.calls.push(OracleCall {
            name: "simLDP[carrier]".into(),
            space: (carrier.len() * inst.ops.len()) as u64,
            searched: sol.searched,
            result: format!(
                "a′={} α′={}",
                self.ctx().carrier().display(&sol.element),
                op_name(self.ctx(), sol.op)
            ),
        });
        Ok((sol.element, sol.op))
    }

    /// `(a′, α′, a′_0)` with `a′_0` in Alice's submagma.
    fn alice_pseudo_key_with_a0(&mut self) -> Result<(Element, usize, Element)> {
        let inst = LdpInstance {
            pairs: self.alice_pairs(),
            ops: self.ctx().pool(Side::A),
        };
        let s_a = self.closure(Side::A)?;
        let sol = brute_modsimldp(self.ctx(), &inst, &self.transcript.alice.p0, s_a.elements())?;
        let size = self.ctx().carrier().size().unwrap_or(0);
        let disp = |x: &Element| self.ctx().carrier().display(x);
        self.calls.push(OracleCall {
            name: "modsimLDP[S_A]".into(),
            space: (size * inst.ops.len() * s_a.len()) as u64,
            searched: sol.searched,
            result: format!(
                "a′={} α′={} a′0={}",
                disp(&sol.element),
                op_name(self.ctx(), sol.op),
                disp(&sol.a0)
            ),
        });
        Ok((sol.element, sol.op, sol.a0))
    }

    fn tree_for(&mut self, side: Side, target: &Element) -> Result<crate::treeword::TreeWord> {
        let basis = match side {
            Side::A => self.params.basis_a(),
            Side::B => self.params.basis_b(),
        };
        let tree = membership_search(self.ctx(), basis, &self.ctx().pool(side), target, DEFAULT_CLOSURE_CAP)?;
        self.calls.push(OracleCall {
            name: format!("MSP[{side}]"),
            space: DEFAULT_CLOSURE_CAP as u64,
            searched: tree.leaf_count() as u64,
            result: tree.to_string(),
        });
        Ok(tree)
    }
}

/// Recovers the shared key from public parameters and a transcript alone.
/// Only finite platforms are supported.
pub fn run_pipeline(params: &PublicParams, transcript: &Transcript, pipeline: Pipeline) -> Result<AttackReport> {
    let ctx = params.ctx();
    require_finite(ctx)?;
    if transcript.alice.at.len() != params.n() || transcript.bob.bs.len() != params.m() {
        return Err(Error::invalid("transcript does not match the basis sizes"));
    }
    let start = Instant::now();
    let mut att = Attack {
        params,
        transcript,
        calls: Vec::new(),
    };
    let p0 = &transcript.alice.p0;
    let k = match pipeline {
        Pipeline::A => {
            let s_b = att.closure(Side::B)?;
            let (b, beta) = att.bob_pseudo_key(s_b.elements(), "S_B")?;
            let tree = att.tree_for(Side::B, &b)?;
            let ab = tree.eval(&transcript.alice.at, ctx)?;
            ctx.apply(beta, &ab, p0)?
        }
        Pipeline::B => {
            let (a, alpha, a0) = att.alice_pseudo_key_with_a0()?;
            let tree = att.tree_for(Side::A, &a0)?;
            let ba0 = tree.eval(&transcript.bob.bs, ctx)?;
            ctx.apply(alpha, &a, &ba0)?
        }
        Pipeline::C => {
            let (a, alpha) = att.alice_pseudo_key()?;
            let s_b = att.closure(Side::B)?;
            let (b, beta) = att.bob_pseudo_key(s_b.elements(), "S_B")?;
            ctx.apply(beta, &ctx.apply(alpha, &a, &b)?, p0)?
        }
        Pipeline::D => {
            let carrier: Vec<Element> = ctx.carrier().elements().collect();
            let (b, beta) = att.bob_pseudo_key(&carrier, "carrier")?;
            let (a, alpha, a0) = att.alice_pseudo_key_with_a0()?;
            ctx.apply(alpha, &a, &ctx.apply(beta, &b, &a0)?)?
        }
    };
    let key = shared_key(params, &k)?;
    let key_hash = key_digest(&key, params);
    Ok(AttackReport {
        pipeline,
        descriptor: params.descriptor(),
        calls: att.calls,
        elapsed: start.elapsed(),
        key,
        key_hash,
    })
}
