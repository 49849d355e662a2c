//! Executable law checks. Finite carriers up to a size limit are scanned
//! exhaustively; everything else is sampled with per-index seed streams, so
//! reports do not depend on evaluation order and the reported counterexample
//! is always the one with the smallest index.

use std::fmt;

use rayon::prelude::*;

use super::context::LdContext;
use super::element::{Carrier, Element};
use super::ops::{Endo, Operation};
use crate::error::Result;
use crate::seed;

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    /// Samples drawn on infinite (or too large) carriers.
    pub trials: usize,
    pub seed: u64,
    /// Finite carriers with at most this many elements are scanned exhaustively.
    pub exhaustive_limit: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            trials: 200,
            seed: 0,
            exhaustive_limit: 1 << 10,
        }
    }
}

impl CheckOptions {
    pub fn sampled(trials: usize, seed: u64) -> Self {
        CheckOptions {
            trials,
            seed,
            ..Default::default()
        }
    }
}

/// Outcome of checking one identity.
#[derive(Clone, Debug)]
pub struct LawReport {
    pub law: String,
    pub checked: u64,
    pub exhaustive: bool,
    /// Index of the failing sample and the rendered witnesses.
    pub counterexample: Option<(u64, Vec<String>)>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let how = if self.exhaustive { "exhaustive" } else { "sampled" };
        match &self.counterexample {
            None => write!(f, "PASS {} ({how}, {} cases)", self.law, self.checked),
            Some((i, w)) => write!(
                f,
                "FAIL {} ({how}, case {i} of {}): {}",
                self.law,
                self.checked,
                w.join(", ")
            ),
        }
    }
}

/// Runs `holds` on `arity`-tuples of carrier elements.
pub fn check_tuples<F>(carrier: &Carrier, arity: u32, law: &str, opts: &CheckOptions, holds: F) -> Result<LawReport>
where
    F: Fn(&[Element]) -> Result<bool> + Sync,
{
    let finite = carrier
        .size()
        .filter(|&n| n <= opts.exhaustive_limit && (n as u64).checked_pow(arity).is_some());
    let (count, exhaustive) = match finite {
        Some(n) => ((n as u64).pow(arity), true),
        None => (opts.trials as u64, false),
    };
    let tuple = |i: u64| -> Vec<Element> {
        match finite {
            Some(n) => {
                let mut rest = i;
                let mut out = Vec::with_capacity(arity as usize);
                for _ in 0..arity {
                    out.push(carrier.element((rest % n as u64) as usize));
                    rest /= n as u64;
                }
                out.reverse();
                out
            }
            None => {
                let mut rng = seed::stream(opts.seed, i);
                (0..arity).map(|_| carrier.sample(&mut rng)).collect()
            }
        }
    };
    let failure = (0..count).into_par_iter().find_map_first(|i| {
        let t = tuple(i);
        match holds(&t) {
            Ok(true) => None,
            Ok(false) => Some(Ok((i, t))),
            Err(e) => Some(Err(e)),
        }
    });
    let counterexample = match failure {
        None => None,
        Some(Err(e)) => return Err(e),
        Some(Ok((i, t))) => Some((i, t.iter().map(|x| carrier.display(x)).collect())),
    };
    Ok(LawReport {
        law: law.to_string(),
        checked: count,
        exhaustive,
        counterexample,
    })
}

/// `x ⋆ (y ∘ z) = (x ⋆ y) ∘ (x ⋆ z)` for arbitrary operations `⋆`, `∘`.
pub fn check_distributive(
    carrier: &Carrier,
    outer: &Operation,
    inner: &Operation,
    law: &str,
    opts: &CheckOptions,
) -> Result<LawReport> {
    check_tuples(carrier, 3, law, opts, |t| {
        let (x, y, z) = (&t[0], &t[1], &t[2]);
        let lhs = outer.apply(carrier, x, &inner.apply(carrier, y, z)?)?;
        let rhs = inner.apply(carrier, &outer.apply(carrier, x, y)?, &outer.apply(carrier, x, z)?)?;
        Ok(carrier.eq(&lhs, &rhs))
    })
}

/// `x *_i (y *_j z) = (x *_i y) *_j (x *_i z)`.
pub fn check_left_distributive(ctx: &LdContext, i: usize, j: usize, opts: &CheckOptions) -> Result<LawReport> {
    let (a, b) = (ctx.op(i)?, ctx.op(j)?);
    let law = format!("{} over {}", a.name, b.name);
    check_distributive(ctx.carrier(), &a.op, &b.op, &law, opts)
}

/// Every law promised by the context's pools.
pub fn check_declared_laws(ctx: &LdContext, opts: &CheckOptions) -> Result<Vec<LawReport>> {
    ctx.declared_laws()
        .into_iter()
        .map(|(i, j)| check_left_distributive(ctx, i, j, opts))
        .collect()
}

/// `x *_i x = x`.
pub fn check_idempotent(ctx: &LdContext, i: usize, opts: &CheckOptions) -> Result<LawReport> {
    let op = &ctx.op(i)?.op;
    let c = ctx.carrier();
    check_tuples(c, 1, &format!("{} idempotent", ctx.op(i)?.name), opts, |t| {
        Ok(c.eq(&op.apply(c, &t[0], &t[0])?, &t[0]))
    })
}

/// `f(xy) = f(x) f(y)`.
pub fn check_endomorphism(carrier: &Carrier, f: &Endo, opts: &CheckOptions) -> Result<LawReport> {
    check_tuples(carrier, 2, &format!("{f} is a homomorphism"), opts, |t| {
        let lhs = f.apply(carrier, &carrier.mul(&t[0], &t[1])?)?;
        let rhs = carrier.mul(&f.apply(carrier, &t[0])?, &f.apply(carrier, &t[1])?)?;
        Ok(carrier.eq(&lhs, &rhs))
    })
}

/// `f(f(x)) = f(x)`.
pub fn check_projector(carrier: &Carrier, f: &Endo, opts: &CheckOptions) -> Result<LawReport> {
    check_tuples(carrier, 1, &format!("{f}∘{f} = {f}"), opts, |t| {
        let once = f.apply(carrier, &t[0])?;
        Ok(carrier.eq(&f.apply(carrier, &once)?, &once))
    })
}

/// Pointwise `u ∘ v = w ∘ z` for two compositions of endomorphisms.
fn check_composites(
    carrier: &Carrier,
    name: &str,
    lhs: &[&Endo],
    rhs: &[&Endo],
    opts: &CheckOptions,
) -> Result<LawReport> {
    let run = |chain: &[&Endo], x: &Element| -> Result<Element> {
        let mut v = x.clone();
        for f in chain.iter().rev() {
            v = f.apply(carrier, &v)?;
        }
        Ok(v)
    };
    check_tuples(carrier, 1, name, opts, |t| {
        Ok(carrier.eq(&run(lhs, &t[0])?, &run(rhs, &t[0])?))
    })
}

/// A list of algebraic conditions next to the law they are claimed to be
/// equivalent to.
#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub conditions: Vec<LawReport>,
    pub laws: Vec<LawReport>,
}

impl ConditionReport {
    pub fn conditions_hold(&self) -> bool {
        self.conditions.iter().all(LawReport::passed)
    }

    pub fn laws_hold(&self) -> bool {
        self.laws.iter().all(LawReport::passed)
    }

    /// Whether conditions and laws agree, as the equivalence predicts.
    pub fn consistent(&self) -> bool {
        self.conditions_hold() == self.laws_hold()
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.conditions {
            writeln!(f, "condition {r}")?;
        }
        for r in &self.laws {
            writeln!(f, "law       {r}")?;
        }
        write!(
            f,
            "verdict   conditions {} / law {} ({})",
            if self.conditions_hold() { "hold" } else { "fail" },
            if self.laws_hold() { "holds" } else { "fails" },
            if self.consistent() {
                "consistent"
            } else {
                "INCONSISTENT"
            }
        )
    }
}

/// Conditions `fh = f, gh = hg = hf, fg = gf = f², h² = h` for the ansatz
/// `x * y = f(x⁻¹) g(y) h(x)`, next to a check of its LD law.
pub fn check_ansatz_conditions(
    carrier: &Carrier,
    f: &Endo,
    g: &Endo,
    h: &Endo,
    opts: &CheckOptions,
) -> Result<ConditionReport> {
    let eqs: [(&str, &[&Endo], &[&Endo]); 7] = [
        ("fh = f", &[f, h], &[f]),
        ("gh = hg", &[g, h], &[h, g]),
        ("hg = hf", &[h, g], &[h, f]),
        ("fg = gf", &[f, g], &[g, f]),
        ("gf = ff", &[g, f], &[f, f]),
        ("hh = h", &[h, h], &[h]),
        ("fg = ff", &[f, g], &[f, f]),
    ];
    let conditions = eqs
        .iter()
        .map(|(name, l, r)| check_composites(carrier, name, l, r, opts))
        .collect::<Result<Vec<_>>>()?;
    let op = Operation::Ansatz {
        f: f.clone(),
        g: g.clone(),
        h: h.clone(),
    };
    let law = check_distributive(carrier, &op, &op, "f(x^-1) g(y) h(x) is LD", opts)?;
    Ok(ConditionReport {
        conditions,
        laws: vec![law],
    })
}

/// Conditions `f² = f, fh = gh = fg, hg = gf = hf, h² = h` for the ansatz
/// `x ∘ y = f(x) g(y⁻¹) h(x)`, next to its LD law.
pub fn check_sym_ansatz_conditions(
    carrier: &Carrier,
    f: &Endo,
    g: &Endo,
    h: &Endo,
    opts: &CheckOptions,
) -> Result<ConditionReport> {
    let eqs: [(&str, &[&Endo], &[&Endo]); 6] = [
        ("ff = f", &[f, f], &[f]),
        ("fh = gh", &[f, h], &[g, h]),
        ("gh = fg", &[g, h], &[f, g]),
        ("hg = gf", &[h, g], &[g, f]),
        ("gf = hf", &[g, f], &[h, f]),
        ("hh = h", &[h, h], &[h]),
    ];
    let conditions = eqs
        .iter()
        .map(|(name, l, r)| check_composites(carrier, name, l, r, opts))
        .collect::<Result<Vec<_>>>()?;
    let op = Operation::SymAnsatz {
        f: f.clone(),
        g: g.clone(),
        h: h.clone(),
    };
    let law = check_distributive(carrier, &op, &op, "f(x) g(y^-1) h(x) is LD", opts)?;
    Ok(ConditionReport {
        conditions,
        laws: vec![law],
    })
}

/// Multi-LD conditions for `x *_i y = f(x⁻¹) a_i f(y) x`:
/// `[a_i, f²(x)] = 1` and `a_i f(a_i) a_j = f(a_j) a_i f(a_i)`, next to
/// every pairwise distributive law.
pub fn check_twist_conditions(
    carrier: &Carrier,
    f: &Endo,
    twists: &[Element],
    opts: &CheckOptions,
) -> Result<ConditionReport> {
    let mut conditions = Vec::new();
    for (i, a) in twists.iter().enumerate() {
        conditions.push(check_tuples(
            carrier,
            1,
            &format!("[a{}, f²(x)] = 1", i + 1),
            opts,
            |t| {
                let ffx = f.apply(carrier, &f.apply(carrier, &t[0])?)?;
                Ok(carrier.eq(&carrier.mul(a, &ffx)?, &carrier.mul(&ffx, a)?))
            },
        )?);
    }
    for (i, ai) in twists.iter().enumerate() {
        for (j, aj) in twists.iter().enumerate() {
            let fai = f.apply(carrier, ai)?;
            let faj = f.apply(carrier, aj)?;
            let lhs = carrier.mul_all(&[ai, &fai, aj])?;
            let rhs = carrier.mul_all(&[&faj, ai, &fai])?;
            let holds = carrier.eq(&lhs, &rhs);
            conditions.push(LawReport {
                law: format!("a{0} f(a{0}) a{1} = f(a{1}) a{0} f(a{0})", i + 1, j + 1),
                checked: 1,
                exhaustive: true,
                counterexample: (!holds).then(|| (0, vec![carrier.display(ai), carrier.display(aj)])),
            });
        }
    }
    let ops: Vec<Operation> = twists
        .iter()
        .map(|a| Operation::Shifted {
            f: f.clone(),
            a: a.clone(),
        })
        .collect();
    let mut laws = Vec::new();
    for (i, oi) in ops.iter().enumerate() {
        for (j, oj) in ops.iter().enumerate() {
            laws.push(check_distributive(
                carrier,
                oi,
                oj,
                &format!("*{} over *{}", i + 1, j + 1),
                opts,
            )?);
        }
    }
    Ok(ConditionReport { conditions, laws })
}

/// Twisted conjugacy `c ⋆ u = f(c⁻¹) u c` satisfies
/// `α ⋆ (β ⋆ γ) = (α ⋆ β) ⋆ (f(α) ⋆ γ)`.
pub fn check_near_ld(carrier: &Carrier, f: &Endo, opts: &CheckOptions) -> Result<LawReport> {
    let op = Operation::Twisted(f.clone());
    check_tuples(carrier, 3, &format!("near-LD for {f}-twisted conjugacy"), opts, |t| {
        let (a, b, c) = (&t[0], &t[1], &t[2]);
        let lhs = op.apply(carrier, a, &op.apply(carrier, b, c)?)?;
        let fa = f.apply(carrier, a)?;
        let rhs = op.apply(carrier, &op.apply(carrier, a, b)?, &op.apply(carrier, &fa, c)?)?;
        Ok(carrier.eq(&lhs, &rhs))
    })
}

/// `c *_f u = c ⋆ f(u)`: `f`-conjugacy by `c` is twisted conjugacy of `f(u)`.
pub fn check_twisted_reduction(carrier: &Carrier, f: &Endo, opts: &CheckOptions) -> Result<LawReport> {
    let fconj = super::context::f_conjugacy_op(f.clone());
    let tw = Operation::Twisted(f.clone());
    check_tuples(
        carrier,
        2,
        &format!("{f}-conjugacy = twisted conjugacy of f(u)"),
        opts,
        |t| {
            let lhs = fconj.apply(carrier, &t[0], &t[1])?;
            let rhs = tw.apply(carrier, &t[0], &f.apply(carrier, &t[1])?)?;
            Ok(carrier.eq(&lhs, &rhs))
        },
    )
}

/// `x ⋆ (y ∘ z) = (x ⋆ y) ∘ (x ⋆ z)` with `∘` symmetric conjugacy.
pub fn check_distributivity_over_sym(carrier: &Carrier, star: &Operation, opts: &CheckOptions) -> Result<LawReport> {
    check_distributive(
        carrier,
        star,
        &Operation::Symmetric,
        &format!("{star} over x y^-1 x"),
        opts,
    )
}
