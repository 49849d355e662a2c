//! Brute-force oracles for the key-recovery problems on finite platforms,
//! the four key-recovery pipelines, SCCP search in finite groups, and the
//! braid-side reduction of the decomposition problem to SCCP.

mod closure;
mod pipelines;
mod sccp;
mod transform;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ld::{Element, LdContext};

pub use closure::{membership_search, Closure, DEFAULT_CLOSURE_CAP};
pub use pipelines::{run_pipeline, AttackReport, OracleCall, Pipeline};
pub use sccp::{plant_sccp, sccp_brute, SccpInstance, SccpSolution};
pub use transform::{
    minimal_strands, plant_decomposition, sdp_to_sccp, verify_transform, DecompositionInstance, SccpTransform,
    TransformCheck,
};

/// Left-multiplication pairs `(x_i, e *_op x_i)` with the candidate
/// operations (context indices).
#[derive(Clone, Debug)]
pub struct LdpInstance {
    pub pairs: Vec<(Element, Element)>,
    pub ops: Vec<usize>,
}

/// A solution `(e, op)` with `e *_op x_i = x′_i` for all pairs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LdpSolution {
    pub element: Element,
    pub op: usize,
    /// Position of `element` in the candidate list.
    pub candidate: usize,
    /// Candidates tried, counting each `(element, op)` once.
    pub searched: u64,
}

/// A solution `(a′, op, a′_0)` of the modified problem: `a′ *_op t_i = t′_i`
/// and `a′ *_op a′_0 = p_0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModLdpSolution {
    pub element: Element,
    pub op: usize,
    pub a0: Element,
    pub a0_candidate: usize,
    pub searched: u64,
}

pub(crate) fn require_finite(ctx: &LdContext) -> Result<()> {
    if ctx.carrier().is_finite() {
        Ok(())
    } else {
        Err(Error::precondition(format!(
            "brute-force oracles need a finite platform; {} is infinite \
             (braid instances only support the SCCP transformation)",
            ctx.carrier().name()
        )))
    }
}

fn satisfies(ctx: &LdContext, e: &Element, op: usize, pairs: &[(Element, Element)]) -> bool {
    pairs
        .iter()
        .all(|(x, x2)| ctx.apply(op, e, x).map(|v| ctx.eq(&v, x2)).unwrap_or(false))
}

/// First `(e, op)` in candidate-major, op-minor order solving the instance.
/// `candidates` is the whole carrier for the plain problem or a submagma
/// closure for the generalized one.
pub fn brute_simldp(ctx: &LdContext, inst: &LdpInstance, candidates: &[Element]) -> Result<LdpSolution> {
    require_finite(ctx)?;
    if inst.ops.is_empty() {
        return Err(Error::invalid("no candidate operations"));
    }
    let k = inst.ops.len();
    let total = candidates.len() * k;
    let hit = (0..total).into_par_iter().find_first(|&idx| {
        let (c, o) = (idx / k, idx % k);
        satisfies(ctx, &candidates[c], inst.ops[o], &inst.pairs)
    });
    match hit {
        Some(idx) => Ok(LdpSolution {
            element: candidates[idx / k].clone(),
            op: inst.ops[idx % k],
            candidate: idx / k,
            searched: idx as u64 + 1,
        }),
        None => Err(Error::Exhausted { searched: total as u64 }),
    }
}

/// First `(a′, op)` in carrier-major, op-minor order matching the pairs for
/// which some `a′_0` among `a0_candidates` has `a′ *_op a′_0 = p_0`; the
/// first such `a′_0` is returned.
pub fn brute_modsimldp(
    ctx: &LdContext,
    inst: &LdpInstance,
    p0: &Element,
    a0_candidates: &[Element],
) -> Result<ModLdpSolution> {
    require_finite(ctx)?;
    if inst.ops.is_empty() {
        return Err(Error::invalid("no candidate operations"));
    }
    let carrier: Vec<Element> = ctx.carrier().elements().collect();
    let k = inst.ops.len();
    let total = carrier.len() * k;
    let hit = (0..total).into_par_iter().find_map_first(|idx| {
        let (e, op) = (&carrier[idx / k], inst.ops[idx % k]);
        if !satisfies(ctx, e, op, &inst.pairs) {
            return None;
        }
        a0_candidates
            .iter()
            .position(|a0| ctx.apply(op, e, a0).map(|v| ctx.eq(&v, p0)).unwrap_or(false))
            .map(|j| (idx, j))
    });
    match hit {
        Some((idx, j)) => Ok(ModLdpSolution {
            element: carrier[idx / k].clone(),
            op: inst.ops[idx % k],
            a0: a0_candidates[j].clone(),
            a0_candidate: j,
            searched: (idx as u64 + 1) * a0_candidates.len() as u64,
        }),
        None => Err(Error::Exhausted {
            searched: (total * a0_candidates.len()) as u64,
        }),
    }
}
