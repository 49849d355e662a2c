use rand::Rng;

use crate::braid::{equal, random_word_with, tau, BraidWord};
use crate::error::{Error, Result};

/// The SCCP instance equivalent to a single decomposition instance
/// `s′ = ∂^p(b⁻¹) β₁ τ_{p,p} β₂ ∂^p(s) b` in `B_N`: find `h ∈ H`,
/// `c ∈ B_{N-p}` with `c x c⁻¹ = h y`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SccpTransform {
    pub p: usize,
    pub q1: usize,
    pub q2: usize,
    pub n: usize,
    /// `τ_{p,N-p}⁻¹ s′`
    pub x: BraidWord,
    /// `∂^p(τ_{p,N-2p}⁻¹ s)`
    pub y: BraidWord,
    /// Generator ranges of the two parabolic factors of `H`,
    /// `∂^{q1}(B_{p-q1})` and `∂^{N-p+q2}(B_{p-q2})`.
    pub h_windows: [(usize, usize); 2],
    /// Generator range of the conjugator group `B_{N-p}`.
    pub k_window: (usize, usize),
}

impl SccpTransform {
    /// True when `word` only uses generators of the parabolic factor `i`.
    pub fn in_h_window(&self, i: usize, word: &BraidWord) -> bool {
        let (lo, hi) = self.h_windows[i];
        word.within(lo, hi)
    }
}

fn check_shape(p: usize, q1: usize, q2: usize) -> Result<()> {
    if 1 < q1 && q1 < q2 && q2 < p {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "need 1 < q1 < q2 < p, got q1={q1} q2={q2} p={p}"
        )))
    }
}

/// Smallest `N ≥ 2p` with `s′, ∂^p(s) ∈ B_N`.
pub fn minimal_strands(s: &BraidWord, s_prime: &BraidWord, p: usize) -> usize {
    (2 * p).max(s_prime.strands()).max(s.shift(p).strands())
}

/// Transforms `(s, s′)` into an SCCP instance in `B_N`. `n = None` picks
/// the minimal `N`; an explicit `n` must still cover both words and satisfy
/// `N ≥ 2p`.
pub fn sdp_to_sccp(
    s: &BraidWord,
    s_prime: &BraidWord,
    p: usize,
    q1: usize,
    q2: usize,
    n: Option<usize>,
) -> Result<SccpTransform> {
    check_shape(p, q1, q2)?;
    let min = minimal_strands(s, s_prime, p);
    let n = match n {
        None => min,
        Some(n) if n < 2 * p => return Err(Error::invalid(format!("need N >= 2p, got N={n} p={p}"))),
        Some(n) if n < min => {
            return Err(Error::invalid(format!(
                "N={n} does not cover s′ and ∂^p(s), which need {min}"
            )))
        }
        Some(n) => n,
    };
    let x = tau(p, n - p).invert().concat(s_prime);
    let y = tau(p, n - 2 * p).invert().concat(s).shift(p);
    Ok(SccpTransform {
        p,
        q1,
        q2,
        n,
        x,
        y,
        h_windows: [(q1 + 1, p - 1), (n - p + q2 + 1, n - 1)],
        k_window: (1, n - p - 1),
    })
}

/// A planted decomposition instance together with its secret.
#[derive(Clone, Debug)]
pub struct DecompositionInstance {
    pub p: usize,
    pub q1: usize,
    pub q2: usize,
    pub b: BraidWord,
    /// In `∂^{q2}(B_{p-q2})`.
    pub beta1: BraidWord,
    /// In `∂^{q1}(B_{p-q1})`.
    pub beta2: BraidWord,
    pub s: BraidWord,
    pub s_prime: BraidWord,
}

fn window_word<R: Rng + ?Sized>(rng: &mut R, len: usize, lo: usize, hi: usize) -> BraidWord {
    if hi < lo {
        BraidWord::identity()
    } else {
        random_word_with(rng, len, hi - lo + 1).shift(lo - 1)
    }
}

/// Samples `b, s ∈ B_{2p+extra-p}` and `β₁, β₂` in their parabolic ranges,
/// each of `word_len` letters, and computes `s′`. With `extra = 0` the
/// minimal strand count is the boundary case `N = 2p`.
pub fn plant_decomposition<R: Rng + ?Sized>(
    p: usize,
    q1: usize,
    q2: usize,
    extra: usize,
    word_len: usize,
    rng: &mut R,
) -> Result<DecompositionInstance> {
    check_shape(p, q1, q2)?;
    let width = p + extra - 1;
    let b = random_word_with(rng, word_len, width);
    let beta1 = window_word(rng, word_len, q2 + 1, p - 1);
    let beta2 = window_word(rng, word_len, q1 + 1, p - 1);
    let s = random_word_with(rng, word_len, width);
    let s_prime = b
        .invert()
        .shift(p)
        .concat(&beta1)
        .concat(&tau(p, p))
        .concat(&beta2)
        .concat(&s.shift(p))
        .concat(&b);
    Ok(DecompositionInstance {
        p,
        q1,
        q2,
        b,
        beta1,
        beta2,
        s,
        s_prime,
    })
}

/// Outcome of [`verify_transform`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TransformCheck {
    pub n: usize,
    /// `b x b⁻¹ = β̃ y` by normal forms, with `β̃ = ∂^{N-p}(β₁) β₂`.
    pub identity: bool,
    /// `β₂` and `∂^{N-p}(β₁)` lie in the two factors of `H`, and `b` in `B_{N-p}`.
    pub windows: bool,
}

impl TransformCheck {
    pub fn holds(&self) -> bool {
        self.identity && self.windows
    }
}

/// Transforms a planted instance with the minimal `N` and checks the
/// secret against the resulting SCCP instance.
pub fn verify_transform(inst: &DecompositionInstance) -> Result<TransformCheck> {
    let t = sdp_to_sccp(&inst.s, &inst.s_prime, inst.p, inst.q1, inst.q2, None)?;
    let beta1 = inst.beta1.shift(t.n - inst.p);
    let lhs = inst.b.concat(&t.x).concat(&inst.b.invert());
    let rhs = beta1.concat(&inst.beta2).concat(&t.y);
    let (klo, khi) = t.k_window;
    Ok(TransformCheck {
        n: t.n,
        identity: equal(&lhs, &rhs),
        windows: t.in_h_window(0, &inst.beta2) && t.in_h_window(1, &beta1) && inst.b.within(klo, khi),
    })
}
