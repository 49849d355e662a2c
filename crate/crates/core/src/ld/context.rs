use std::fmt;
use std::sync::Arc;

use super::descriptor::Descriptor;
use super::element::{BraidSampler, Carrier, Element};
use super::group::FiniteGroup;
use super::laver::LaverTable;
use super::laws::{check_projector, CheckOptions};
use super::ops::{Endo, Operation};
use crate::braid::{self, tau, BraidParams, BraidWord};
use crate::error::{Error, Result};

/// Which pool an operation belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Side {
    A,
    B,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::B => "B",
        })
    }
}

#[derive(Clone, Debug)]
pub struct LabeledOp {
    pub name: String,
    pub op: Operation,
    pub in_a: bool,
    pub in_b: bool,
}

impl LabeledOp {
    pub fn both(name: impl Into<String>, op: Operation) -> Self {
        LabeledOp {
            name: name.into(),
            op,
            in_a: true,
            in_b: true,
        }
    }

    pub fn on(name: impl Into<String>, op: Operation, side: Side) -> Self {
        LabeledOp {
            name: name.into(),
            op,
            in_a: side == Side::A,
            in_b: side == Side::B,
        }
    }

    pub fn has_side(&self, side: Side) -> bool {
        match side {
            Side::A => self.in_a,
            Side::B => self.in_b,
        }
    }
}

/// A carrier with an indexed family of operations split into the pools
/// `O_A` and `O_B`. Every operation in `O_A` is expected to distribute
/// over every operation in `O_B` and vice versa.
#[derive(Clone, Debug)]
pub struct LdContext {
    descriptor: Descriptor,
    carrier: Carrier,
    ops: Vec<LabeledOp>,
}

/// Default braid word length for sampled elements.
pub const DEFAULT_WORD_LEN: usize = 12;

fn default_wmax(p: usize) -> usize {
    (2 * p).max(4) - 1
}

fn check_window(what: &str, w: &BraidWord, lo: usize, hi: usize) -> Result<()> {
    if w.within(lo, hi) {
        Ok(())
    } else if lo > hi {
        Err(Error::precondition(format!("{what} must be trivial here, got [{w}]")))
    } else {
        Err(Error::precondition(format!(
            "{what} = [{w}] leaves the generator window σ_{lo}..σ_{hi}"
        )))
    }
}

fn check_commute(what: &str, x: &BraidWord, y: &BraidWord) -> Result<()> {
    if braid::commute(x, y) {
        Ok(())
    } else {
        Err(Error::precondition(format!("{what}: [{x}] and [{y}] do not commute")))
    }
}

/// Twist element `a′ τ_{p,p}^{sign} a″`.
fn gen_twist(p: usize, a1: &BraidWord, a2: &BraidWord, sign: i32) -> BraidWord {
    let t = tau(p, p);
    let t = if sign < 0 { t.invert() } else { t };
    a1.concat(&t).concat(a2)
}

fn shifted_op(p: usize, a: BraidWord) -> Operation {
    Operation::Shifted {
        f: Endo::Shift(p),
        a: Element::Braid(a),
    }
}

/// One `α` or `β` of the partial multi-LD braid platform: `x_1 τ_{p,p} x_2`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TwistPair {
    pub left: BraidWord,
    pub right: BraidWord,
}

impl TwistPair {
    pub fn new(left: BraidWord, right: BraidWord) -> Self {
        TwistPair { left, right }
    }

    pub fn element(&self, p: usize) -> BraidWord {
        gen_twist(p, &self.left, &self.right, 1)
    }
}

impl LdContext {
    pub fn new(descriptor: Descriptor, carrier: Carrier, ops: Vec<LabeledOp>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::invalid("a context needs at least one operation"));
        }
        if !ops.iter().any(|o| o.in_a) || !ops.iter().any(|o| o.in_b) {
            return Err(Error::invalid("both operation pools must be non-empty"));
        }
        Ok(LdContext {
            descriptor,
            carrier,
            ops,
        })
    }

    /// The Laver table `L_n` with its single operation.
    pub fn laver(n: u32) -> Result<Self> {
        let t = LaverTable::new(n)?;
        Self::new(
            Descriptor::new("laver").with("n", n),
            Carrier::Laver(Arc::new(t)),
            vec![LabeledOp::both("star", Operation::Laver)],
        )
    }

    fn group_descriptor(g: &FiniteGroup) -> Descriptor {
        use super::group::GroupKind;
        let d = Descriptor::new("group");
        match g.kind() {
            GroupKind::Symmetric { degree } => d.with("kind", "symmetric").with("degree", degree),
            GroupKind::Dihedral { order } => d.with("kind", "dihedral").with("order", order),
            GroupKind::Quaternion => d.with("kind", "quaternion"),
        }
    }

    fn group_elem_text(g: &FiniteGroup, x: &Element) -> String {
        match x {
            Element::Group(i) => g.permutation(*i).to_string(),
            other => other.to_string(),
        }
    }

    fn endo_text(g: &FiniteGroup, f: &Endo) -> String {
        match f {
            Endo::Inner(x) => format!("inner:{}", Self::group_elem_text(g, x)),
            Endo::Sign(_) => "sign".into(),
            other => other.to_string(),
        }
    }

    /// Group conjugacy `x⁻¹yx` (or `xyx⁻¹` when `reversed`).
    pub fn group_conjugacy(g: Arc<FiniteGroup>, reversed: bool) -> Result<Self> {
        let (name, op) = if reversed {
            ("rev", Operation::ConjRev)
        } else {
            ("conj", Operation::Conj)
        };
        Self::new(
            Self::group_descriptor(&g).with("op", name),
            Carrier::Group(g),
            vec![LabeledOp::both(name, op)],
        )
    }

    /// Symmetric conjugacy `x y⁻¹ x` on a group.
    pub fn group_symmetric(g: Arc<FiniteGroup>) -> Result<Self> {
        Self::new(
            Self::group_descriptor(&g).with("op", "sym"),
            Carrier::Group(g),
            vec![LabeledOp::both("sym", Operation::Symmetric)],
        )
    }

    /// `x * y = f(y)`.
    pub fn group_trivial(g: Arc<FiniteGroup>, f: Endo) -> Result<Self> {
        let d = Self::group_descriptor(&g)
            .with("op", "trivial")
            .with("endo", Self::endo_text(&g, &f));
        Self::new(
            d,
            Carrier::Group(g),
            vec![LabeledOp::both("trivial", Operation::Trivial(f))],
        )
    }

    /// `f`-conjugacy `x * y = f(x⁻¹) f(y) x` on a finite group.
    pub fn group_f_conjugacy(g: Arc<FiniteGroup>, f: Endo) -> Result<Self> {
        let d = Self::group_descriptor(&g)
            .with("op", "fconj")
            .with("endo", Self::endo_text(&g, &f));
        Self::new(d, Carrier::Group(g), vec![LabeledOp::both("fconj", f_conjugacy_op(f))])
    }

    /// `f`-symmetric conjugacy `f(x y⁻¹) x`, or `x f(y⁻¹ x)` when
    /// `reversed`. Rejects `f` unless it is a projector on samples.
    pub fn group_f_symmetric(g: Arc<FiniteGroup>, f: Endo, reversed: bool, checked: bool) -> Result<Self> {
        let carrier = Carrier::Group(g.clone());
        if checked {
            let report = check_projector(&carrier, &f, &CheckOptions::default())?;
            if !report.passed() {
                return Err(Error::precondition(format!("{f} is not a projector: {report}")));
            }
        }
        let (name, op) = if reversed {
            (
                "fsym-rev",
                Operation::SymAnsatz {
                    f: Endo::Identity,
                    g: f.clone(),
                    h: f.clone(),
                },
            )
        } else {
            (
                "fsym",
                Operation::SymAnsatz {
                    f: f.clone(),
                    g: f.clone(),
                    h: Endo::Identity,
                },
            )
        };
        let mut d = Self::group_descriptor(&g)
            .with("op", name)
            .with("endo", Self::endo_text(&g, &f));
        if !checked {
            d = d.with("unchecked", 1);
        }
        Self::new(d, carrier, vec![LabeledOp::both(name, op)])
    }

    /// Multi-LD system `x *_i y = x⁻¹ a_i y x` for central `a_i`.
    pub fn central_twist(g: Arc<FiniteGroup>, twists: &[u32], checked: bool) -> Result<Self> {
        if twists.is_empty() {
            return Err(Error::invalid("central twist needs at least one element"));
        }
        if checked {
            for &a in twists {
                if !g.is_central(a) {
                    return Err(Error::precondition(format!(
                        "{} is not central in {}",
                        g.permutation(a),
                        g.kind()
                    )));
                }
            }
        }
        let list: Vec<String> = twists.iter().map(|&a| g.permutation(a).to_string()).collect();
        let mut d = Self::group_descriptor(&g).with("a", list.join(";"));
        if !checked {
            d = d.with("unchecked", 1);
        }
        let ops = twists
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                LabeledOp::both(
                    format!("twist{}", i + 1),
                    Operation::Shifted {
                        f: Endo::Identity,
                        a: Element::Group(a),
                    },
                )
            })
            .collect();
        Self::new(d, Carrier::Group(g), ops)
    }

    /// `f`-conjugacy on `P_n` with `f = ∂^d ∘ η_d`.
    pub fn pure_pullout(n: usize, d: usize, gens: usize) -> Result<Self> {
        if n < 2 || d == 0 || d >= n {
            return Err(Error::invalid(format!("need 1 <= d < n, got n={n} d={d}")));
        }
        let f = Endo::PullOutShift { strands: n, erase: d };
        Self::new(
            Descriptor::new("pure").with("n", n).with("d", d).with("len", gens),
            Carrier::PureBraid { strands: n, gens },
            vec![LabeledOp::both("fconj", f_conjugacy_op(f))],
        )
    }

    fn braid_carrier(d: Descriptor, sampler: BraidSampler) -> (Descriptor, Carrier) {
        (
            d.with("len", sampler.len).with("wmax", sampler.max_index),
            Carrier::Braid(sampler),
        )
    }

    pub fn default_sampler(p: usize) -> BraidSampler {
        BraidSampler {
            len: DEFAULT_WORD_LEN,
            max_index: default_wmax(p),
        }
    }

    /// Shifted conjugacy `x * y = ∂^p(x⁻¹) a ∂^p(y) x` with `a = τ_{p,p}`
    /// together with its bar twin `a = τ_{p,p}⁻¹`; a bi-LD system.
    pub fn shifted_conjugacy(p: usize, sampler: Option<BraidSampler>) -> Result<Self> {
        if p == 0 {
            return Err(Error::invalid("shift amount must be positive"));
        }
        let t = tau(p, p);
        let (d, c) = Self::braid_carrier(
            Descriptor::new("braid").with("mode", "shifted").with("p", p),
            sampler.unwrap_or(Self::default_sampler(p)),
        );
        Self::new(
            d,
            c,
            vec![
                LabeledOp::both("star", shifted_op(p, t.clone())),
                LabeledOp::both("bar", shifted_op(p, t.invert())),
            ],
        )
    }

    /// Generalized shifted conjugacy with twist `a′ τ_{p,p}^{±1} a″`,
    /// `a′, a″ ∈ B_p`; LD exactly when `[a′, a″] = 1`.
    pub fn gen_shifted(
        p: usize,
        a1: BraidWord,
        a2: BraidWord,
        sign: i32,
        checked: bool,
        sampler: Option<BraidSampler>,
    ) -> Result<Self> {
        if p == 0 || sign.abs() != 1 {
            return Err(Error::invalid("need p >= 1 and sign = ±1"));
        }
        if checked {
            check_window("a′", &a1, 1, p - 1)?;
            check_window("a″", &a2, 1, p - 1)?;
            check_commute("a′, a″", &a1, &a2)?;
        }
        let twist = gen_twist(p, &a1, &a2, sign);
        let mut d = Descriptor::new("braid")
            .with("mode", "gsl")
            .with("p", p)
            .with("ap", a1)
            .with("app", a2)
            .with("sign", sign);
        if !checked {
            d = d.with("unchecked", 1);
        }
        let (d, c) = Self::braid_carrier(d, sampler.unwrap_or(Self::default_sampler(p)));
        Self::new(d, c, vec![LabeledOp::both("star", shifted_op(p, twist))])
    }

    /// Split twist `a1′ ∂^{p1}(a2′) ∂^{p1}(τ_{p2,p}) τ_{p,p1}⁻¹ a1″ ∂^{p1}(a2″)`
    /// with `p = p1 + p2`.
    #[allow(clippy::too_many_arguments)]
    pub fn split(
        p1: usize,
        p2: usize,
        a1: (BraidWord, BraidWord),
        a2: (BraidWord, BraidWord),
        checked: bool,
        sampler: Option<BraidSampler>,
    ) -> Result<Self> {
        if p1 == 0 || p2 == 0 {
            return Err(Error::invalid("split needs p1, p2 >= 1"));
        }
        let p = p1 + p2;
        if checked {
            check_window("a1′", &a1.0, 1, p1 - 1)?;
            check_window("a1″", &a1.1, 1, p1 - 1)?;
            check_window("a2′", &a2.0, 1, p2 - 1)?;
            check_window("a2″", &a2.1, 1, p2 - 1)?;
            check_commute("a1′, a1″", &a1.0, &a1.1)?;
            check_commute("a2′, a2″", &a2.0, &a2.1)?;
        }
        let twist = split_twist(p1, p2, &a1, &a2);
        let mut d = Descriptor::new("braid")
            .with("mode", "split")
            .with("p1", p1)
            .with("p2", p2)
            .with("a1p", &a1.0)
            .with("a1pp", &a1.1)
            .with("a2p", &a2.0)
            .with("a2pp", &a2.1);
        if !checked {
            d = d.with("unchecked", 1);
        }
        let (d, c) = Self::braid_carrier(d, sampler.unwrap_or(Self::default_sampler(p)));
        Self::new(d, c, vec![LabeledOp::both("star", shifted_op(p, twist))])
    }

    /// The partial multi-LD braid platform: `O_A` holds the operations with
    /// `α = α_1 τ_{p,p} α_2` (`α_1 ∈ B_{q1}`, `α_2 ∈ B_{q2}`), `O_B` those
    /// with `β = β_1 τ_{p,p} β_2` (`β_1 ∈ ∂^{q2}(B_{p-q2})`,
    /// `β_2 ∈ ∂^{q1}(B_{p-q1})`).
    ///
    /// With `restricted`, `α_2` and `β_2` must lie in `∂^{q1}(B_{q2-q1})`;
    /// then every operation sits in both pools and the family is checked
    /// to be multi-LD.
    pub fn partial_multi(
        params: BraidParams,
        alphas: &[TwistPair],
        betas: &[TwistPair],
        restricted: bool,
        checked: bool,
        sampler: Option<BraidSampler>,
    ) -> Result<Self> {
        params.validate()?;
        let BraidParams { p, q1, q2, .. } = params;
        if alphas.is_empty() || betas.is_empty() {
            return Err(Error::invalid("need at least one α and one β"));
        }
        if checked {
            for (k, a) in alphas.iter().enumerate() {
                check_window(&format!("α{}_1", k + 1), &a.left, 1, q1 - 1)?;
                check_window(&format!("α{}_2", k + 1), &a.right, 1, q2 - 1)?;
                if restricted {
                    check_window(&format!("α{}_2", k + 1), &a.right, q1 + 1, q2 - 1)?;
                }
            }
            for (k, b) in betas.iter().enumerate() {
                check_window(&format!("β{}_1", k + 1), &b.left, q2 + 1, p - 1)?;
                check_window(&format!("β{}_2", k + 1), &b.right, q1 + 1, p - 1)?;
                if restricted {
                    check_window(&format!("β{}_2", k + 1), &b.right, q1 + 1, q2 - 1)?;
                }
            }
            if restricted {
                let all: Vec<&TwistPair> = alphas.iter().chain(betas).collect();
                for x in &all {
                    for y in &all {
                        check_commute("x′ against y′", &x.left, &y.left)?;
                        check_commute("x′ against y″", &x.left, &y.right)?;
                    }
                }
            }
        }
        let join = |v: &[TwistPair], left: bool| -> String {
            v.iter()
                .map(|t| if left { t.left.to_string() } else { t.right.to_string() })
                .collect::<Vec<_>>()
                .join(";")
        };
        let mut d = Descriptor::new("braid")
            .with("mode", "gsc")
            .with("p", p)
            .with("q1", q1)
            .with("q2", q2)
            .with("alpha1", join(alphas, true))
            .with("alpha2", join(alphas, false))
            .with("beta1", join(betas, true))
            .with("beta2", join(betas, false));
        if restricted {
            d = d.with("restricted", 1);
        }
        if !checked {
            d = d.with("unchecked", 1);
        }
        let mut ops = Vec::new();
        for (k, a) in alphas.iter().enumerate() {
            let op = shifted_op(p, a.element(p));
            ops.push(if restricted {
                LabeledOp::both(format!("alpha{}", k + 1), op)
            } else {
                LabeledOp::on(format!("alpha{}", k + 1), op, Side::A)
            });
        }
        for (k, b) in betas.iter().enumerate() {
            let op = shifted_op(p, b.element(p));
            ops.push(if restricted {
                LabeledOp::both(format!("beta{}", k + 1), op)
            } else {
                LabeledOp::on(format!("beta{}", k + 1), op, Side::B)
            });
        }
        let (d, c) = Self::braid_carrier(d, sampler.unwrap_or(Self::default_sampler(p)));
        Self::new(d, c, ops)
    }

    /// Canonical descriptor text.
    pub fn descriptor(&self) -> String {
        self.descriptor.to_string()
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn ops(&self) -> &[LabeledOp] {
        &self.ops
    }

    pub fn op(&self, i: usize) -> Result<&LabeledOp> {
        self.ops
            .get(i)
            .ok_or_else(|| Error::invalid(format!("operation index {i} out of range ({} ops)", self.ops.len())))
    }

    /// Indices of the operations in a pool, in declaration order.
    pub fn pool(&self, side: Side) -> Vec<usize> {
        (0..self.ops.len()).filter(|&i| self.ops[i].has_side(side)).collect()
    }

    /// True when some operation is in both pools.
    pub fn is_multi_ld(&self) -> bool {
        self.ops.iter().any(|o| o.in_a && o.in_b)
    }

    /// `x *_i y`.
    pub fn apply(&self, i: usize, x: &Element, y: &Element) -> Result<Element> {
        self.op(i)?.op.apply(&self.carrier, x, y)
    }

    pub fn eq(&self, x: &Element, y: &Element) -> bool {
        self.carrier.eq(x, y)
    }

    /// The laws `(i, j)` meaning `x *_i (y *_j z) = (x *_i y) *_j (x *_i z)`
    /// that the pools promise: one of `i, j` in `O_A` and the other in `O_B`.
    pub fn declared_laws(&self) -> Vec<(usize, usize)> {
        let n = self.ops.len();
        let mut laws = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (&self.ops[i], &self.ops[j]);
                if (a.in_a && b.in_b) || (a.in_b && b.in_a) {
                    laws.push((i, j));
                }
            }
        }
        laws
    }

    /// Largest shift amount used by an operation.
    pub fn shift_amount(&self) -> usize {
        self.ops
            .iter()
            .map(|o| match &o.op {
                Operation::Shifted { f: Endo::Shift(d), .. } => *d,
                _ => 0,
            })
            .max()
            .unwrap_or(0)
    }

    /// Strand count that holds every element produced by evaluating trees
    /// with up to `leaves_a` and `leaves_b` leaves (the key of a handshake).
    /// Zero for finite carriers.
    pub fn key_strands(&self, leaves_a: usize, leaves_b: usize) -> usize {
        match &self.carrier {
            Carrier::Laver(_) | Carrier::Group(_) => 0,
            Carrier::PureBraid { strands, .. } => *strands,
            Carrier::Braid(s) => {
                let twist = self
                    .ops
                    .iter()
                    .filter_map(|o| o.op.twist())
                    .map(BraidWord::max_index)
                    .max()
                    .unwrap_or(0);
                let base = s.max_index.max(twist);
                base + self.shift_amount() * (leaves_a + leaves_b) + 1
            }
        }
    }
}

/// `f(x⁻¹) f(y) x`.
pub fn f_conjugacy_op(f: Endo) -> Operation {
    Operation::Ansatz {
        f: f.clone(),
        g: f,
        h: Endo::Identity,
    }
}

pub(crate) fn split_twist(p1: usize, p2: usize, a1: &(BraidWord, BraidWord), a2: &(BraidWord, BraidWord)) -> BraidWord {
    let p = p1 + p2;
    a1.0.concat(&a2.0.shift(p1))
        .concat(&tau(p2, p).shift(p1))
        .concat(&tau(p, p1).invert())
        .concat(&a1.1)
        .concat(&a2.1.shift(p1))
}
