use std::fmt;

use super::element::{Carrier, Element};
use crate::braid::{self, BraidWord};
use crate::error::{Error, Result};

/// Closed descriptions of the endomorphisms the operations are built from.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Endo {
    Identity,
    /// Constant map onto the identity element.
    Trivial,
    /// `∂^d` on braids.
    Shift(usize),
    /// `∂^d ∘ η_d` on `P_n`: erase the last `d` strands, then shift by `d`.
    PullOutShift {
        strands: usize,
        erase: usize,
    },
    /// `x ↦ g⁻¹ x g`.
    Inner(Element),
    /// Sends even permutations to the identity and odd ones to `t`
    /// (a projector when `t` is an odd involution).
    Sign(Element),
    /// Explicit images on a finite group, indexed by element.
    Table(Vec<u32>),
}

impl Endo {
    pub fn apply(&self, c: &Carrier, x: &Element) -> Result<Element> {
        match self {
            Endo::Identity => Ok(x.clone()),
            Endo::Trivial => c.identity(),
            Endo::Shift(d) => match x {
                Element::Braid(w) => Ok(Element::Braid(w.shift(*d))),
                _ => Err(Error::CarrierMismatch("shift acts on braids only".into())),
            },
            Endo::PullOutShift { strands, erase } => match x {
                Element::Braid(w) => Ok(Element::Braid(
                    braid::erase_last_strands(w, *strands, *erase)?.shift(*erase),
                )),
                _ => Err(Error::CarrierMismatch("pull-out acts on braids only".into())),
            },
            Endo::Inner(g) => {
                let gi = c.inv(g)?;
                c.mul_all(&[&gi, x, g])
            }
            Endo::Sign(t) => match (c, x) {
                (Carrier::Group(g), Element::Group(i)) => Ok(if g.is_odd(*i) {
                    t.clone()
                } else {
                    Element::Group(g.identity())
                }),
                _ => Err(Error::CarrierMismatch("sign map needs a permutation group".into())),
            },
            Endo::Table(images) => match x {
                Element::Group(i) => images
                    .get(*i as usize)
                    .map(|&v| Element::Group(v))
                    .ok_or_else(|| Error::CarrierMismatch("table endomorphism too short".into())),
                _ => Err(Error::CarrierMismatch(
                    "table endomorphisms act on finite groups".into(),
                )),
            },
        }
    }

    /// `self ∘ other`.
    pub fn then_apply(&self, other: &Endo, c: &Carrier, x: &Element) -> Result<Element> {
        self.apply(c, &other.apply(c, x)?)
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Endo::Identity)
    }
}

impl fmt::Display for Endo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endo::Identity => f.write_str("id"),
            Endo::Trivial => f.write_str("trivial"),
            Endo::Shift(d) => write!(f, "shift{d}"),
            Endo::PullOutShift { strands, erase } => write!(f, "pullout{strands}/{erase}"),
            Endo::Inner(g) => write!(f, "inner{g}"),
            Endo::Sign(t) => write!(f, "sign{t}"),
            Endo::Table(_) => f.write_str("table"),
        }
    }
}

/// Binary operations on a carrier.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Operation {
    /// The Laver table product.
    Laver,
    /// `x⁻¹ y x`.
    Conj,
    /// `x y x⁻¹`.
    ConjRev,
    /// `f(y)`, LD for any map `f`.
    Trivial(Endo),
    /// `f(x⁻¹) g(y) h(x)`.
    Ansatz { f: Endo, g: Endo, h: Endo },
    /// `f(x⁻¹) y x`, the twisted conjugacy action of `x` on `y`.
    Twisted(Endo),
    /// `x y⁻¹ x`.
    Symmetric,
    /// `f(x) g(y⁻¹) h(x)`.
    SymAnsatz { f: Endo, g: Endo, h: Endo },
    /// `f(x)⁻¹ a f(y) x`.
    Shifted { f: Endo, a: Element },
    /// `y y`; not a homomorphism in `y`, used as a negative control.
    Square,
}

impl Operation {
    /// `x * y`.
    pub fn apply(&self, c: &Carrier, x: &Element, y: &Element) -> Result<Element> {
        match self {
            Operation::Laver => match (c, x, y) {
                (Carrier::Laver(t), Element::Laver(a), Element::Laver(b)) if c.accepts(x) && c.accepts(y) => {
                    Ok(Element::Laver(t.star(*a, *b)))
                }
                _ => Err(Error::CarrierMismatch("Laver product needs Laver elements".into())),
            },
            Operation::Conj => {
                let xi = c.inv(x)?;
                c.mul_all(&[&xi, y, x])
            }
            Operation::ConjRev => {
                let xi = c.inv(x)?;
                c.mul_all(&[x, y, &xi])
            }
            Operation::Trivial(f) => f.apply(c, y),
            Operation::Ansatz { f, g, h } => {
                let fx = f.apply(c, &c.inv(x)?)?;
                c.mul_all(&[&fx, &g.apply(c, y)?, &h.apply(c, x)?])
            }
            Operation::Twisted(f) => {
                let fx = f.apply(c, &c.inv(x)?)?;
                c.mul_all(&[&fx, y, x])
            }
            Operation::Symmetric => {
                let yi = c.inv(y)?;
                c.mul_all(&[x, &yi, x])
            }
            Operation::SymAnsatz { f, g, h } => {
                let gy = g.apply(c, &c.inv(y)?)?;
                c.mul_all(&[&f.apply(c, x)?, &gy, &h.apply(c, x)?])
            }
            Operation::Shifted { f, a } => {
                let fxi = c.inv(&f.apply(c, x)?)?;
                c.mul_all(&[&fxi, a, &f.apply(c, y)?, x])
            }
            Operation::Square => c.mul(y, y),
        }
    }

    /// The twist element of a shifted operation.
    pub fn twist(&self) -> Option<&BraidWord> {
        match self {
            Operation::Shifted {
                a: Element::Braid(w), ..
            } => Some(w),
            _ => None,
        }
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operation::Laver => f.write_str("x*y (Laver)"),
            Operation::Conj => f.write_str("x^-1 y x"),
            Operation::ConjRev => f.write_str("x y x^-1"),
            Operation::Trivial(e) => write!(f, "{e}(y)"),
            Operation::Ansatz { f: a, g, h } => write!(f, "{a}(x^-1) {g}(y) {h}(x)"),
            Operation::Twisted(e) => write!(f, "{e}(x^-1) y x"),
            Operation::Symmetric => f.write_str("x y^-1 x"),
            Operation::SymAnsatz { f: a, g, h } => write!(f, "{a}(x) {g}(y^-1) {h}(x)"),
            Operation::Shifted { f: e, a } => write!(f, "{e}(x)^-1 {a} {e}(y) x"),
            Operation::Square => f.write_str("y y"),
        }
    }
}
