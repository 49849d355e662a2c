use std::fmt;
use std::sync::Arc;

use rand::Rng;

use super::group::FiniteGroup;
use super::laver::LaverTable;
use crate::braid::{self, normal_form, BraidWord};
use crate::error::{Error, Result};

/// An element of some carrier. Equality of the enum is syntactic; use
/// [`Carrier::eq`] for equality in the carrier.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Element {
    /// A value in `1..=2^n`.
    Laver(u16),
    /// Index into a [`FiniteGroup`].
    Group(u32),
    Braid(BraidWord),
}

impl Element {
    pub fn as_braid(&self) -> Option<&BraidWord> {
        match self {
            Element::Braid(w) => Some(w),
            _ => None,
        }
    }
}

impl From<BraidWord> for Element {
    fn from(w: BraidWord) -> Self {
        Element::Braid(w)
    }
}

/// How braid elements are sampled: words of `len` uniform letters with
/// indices up to `max_index`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BraidSampler {
    pub len: usize,
    pub max_index: usize,
}

/// The underlying set of an LD context together with its group structure
/// (when it has one), equality and sampler.
#[derive(Clone, Debug)]
pub enum Carrier {
    Laver(Arc<LaverTable>),
    Group(Arc<FiniteGroup>),
    Braid(BraidSampler),
    /// Pure braids in `P_strands`, sampled as products of `gens` generators `A_{i,j}^{±1}`.
    PureBraid {
        strands: usize,
        gens: usize,
    },
}

impl Carrier {
    pub fn name(&self) -> String {
        match self {
            Carrier::Laver(t) => format!("L{}", t.level()),
            Carrier::Group(g) => g.kind().to_string(),
            Carrier::Braid(_) => "B_inf".into(),
            Carrier::PureBraid { strands, .. } => format!("P{strands}"),
        }
    }

    /// Number of elements for finite carriers.
    pub fn size(&self) -> Option<usize> {
        match self {
            Carrier::Laver(t) => Some(t.size()),
            Carrier::Group(g) => Some(g.order()),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.size().is_some()
    }

    /// The `i`-th element in enumeration order (finite carriers only).
    pub fn element(&self, i: usize) -> Element {
        match self {
            Carrier::Laver(_) => Element::Laver(i as u16 + 1),
            Carrier::Group(_) => Element::Group(i as u32),
            _ => panic!("infinite carriers cannot be enumerated"),
        }
    }

    /// Position of `x` in enumeration order (finite carriers only).
    pub fn position(&self, x: &Element) -> usize {
        match x {
            Element::Laver(k) => *k as usize - 1,
            Element::Group(g) => *g as usize,
            Element::Braid(_) => panic!("braids have no enumeration position"),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.size().unwrap_or(0)).map(|i| self.element(i))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        match self {
            Carrier::Braid(s) => self.sample_with_len(rng, s.len),
            Carrier::PureBraid { gens, .. } => self.sample_with_len(rng, *gens),
            _ => self.element(rng.gen_range(0..self.size().expect("finite"))),
        }
    }

    /// Like [`Carrier::sample`] but with an explicit word length for braid carriers.
    pub fn sample_with_len<R: Rng + ?Sized>(&self, rng: &mut R, len: usize) -> Element {
        match self {
            Carrier::Braid(s) => Element::Braid(braid::random_word_with(rng, len, s.max_index)),
            Carrier::PureBraid { strands, .. } => {
                let mut letters = Vec::new();
                for _ in 0..len {
                    let j = rng.gen_range(2..=*strands);
                    let i = rng.gen_range(1..j);
                    let g = braid::pure_gen(i, j).expect("i < j");
                    let g = if rng.gen_bool(0.5) { g } else { g.invert() };
                    letters.extend_from_slice(g.letters());
                }
                Element::Braid(BraidWord::new(letters).expect("nonzero letters"))
            }
            _ => self.sample(rng),
        }
    }

    pub fn is_group(&self) -> bool {
        !matches!(self, Carrier::Laver(_))
    }

    fn group_only(&self) -> Error {
        Error::CarrierMismatch(format!("{} has no group structure", self.name()))
    }

    fn kind_mismatch(&self, x: &Element) -> Error {
        Error::CarrierMismatch(format!("{x:?} is not an element of {}", self.name()))
    }

    pub fn identity(&self) -> Result<Element> {
        match self {
            Carrier::Group(g) => Ok(Element::Group(g.identity())),
            Carrier::Braid(_) | Carrier::PureBraid { .. } => Ok(Element::Braid(BraidWord::identity())),
            Carrier::Laver(_) => Err(self.group_only()),
        }
    }

    /// Group product. Braid products concatenate without reduction.
    pub fn mul(&self, x: &Element, y: &Element) -> Result<Element> {
        match (self, x, y) {
            (Carrier::Group(g), Element::Group(a), Element::Group(b)) => Ok(Element::Group(g.mul(*a, *b))),
            (Carrier::Braid(_) | Carrier::PureBraid { .. }, Element::Braid(a), Element::Braid(b)) => {
                Ok(Element::Braid(a.concat(b)))
            }
            (Carrier::Laver(_), _, _) => Err(self.group_only()),
            _ => Err(self.kind_mismatch(if self.accepts(x) { y } else { x })),
        }
    }

    pub fn mul_all(&self, factors: &[&Element]) -> Result<Element> {
        let mut acc = self.identity()?;
        for f in factors {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }

    pub fn inv(&self, x: &Element) -> Result<Element> {
        match (self, x) {
            (Carrier::Group(g), Element::Group(a)) => Ok(Element::Group(g.inv(*a))),
            (Carrier::Braid(_) | Carrier::PureBraid { .. }, Element::Braid(a)) => Ok(Element::Braid(a.invert())),
            (Carrier::Laver(_), _) => Err(self.group_only()),
            _ => Err(self.kind_mismatch(x)),
        }
    }

    /// Whether `x` has the representation this carrier uses.
    pub fn accepts(&self, x: &Element) -> bool {
        match (self, x) {
            (Carrier::Laver(t), Element::Laver(k)) => (1..=t.size() as u16).contains(k),
            (Carrier::Group(g), Element::Group(i)) => (*i as usize) < g.order(),
            (Carrier::Braid(_) | Carrier::PureBraid { .. }, Element::Braid(_)) => true,
            _ => false,
        }
    }

    /// Equality in the carrier (normal forms for braids).
    pub fn eq(&self, x: &Element, y: &Element) -> bool {
        match (x, y) {
            (Element::Braid(a), Element::Braid(b)) => braid::equal(a, b),
            _ => x == y,
        }
    }

    /// Canonical representative: braids are replaced by the word spelling
    /// their normal form in `B_strands`; finite elements are returned as is.
    pub fn canonical(&self, x: &Element, strands: usize) -> Result<Element> {
        match x {
            Element::Braid(w) => {
                if w.max_index() >= strands {
                    return Err(Error::BoundExceeded(format!(
                        "braid uses σ_{} but keys live in B_{strands}",
                        w.max_index()
                    )));
                }
                Ok(Element::Braid(normal_form(w, strands)?.to_word()))
            }
            _ if self.accepts(x) => Ok(x.clone()),
            _ => Err(self.kind_mismatch(x)),
        }
    }

    /// Wire text: decimal for finite carriers, braid word text otherwise.
    pub fn format(&self, x: &Element) -> String {
        match x {
            Element::Laver(k) => k.to_string(),
            Element::Group(i) => i.to_string(),
            Element::Braid(w) => w.to_string(),
        }
    }

    /// Human-readable rendering (cycle notation for group elements).
    pub fn display(&self, x: &Element) -> String {
        match (self, x) {
            (Carrier::Group(g), Element::Group(i)) if (*i as usize) < g.order() => g.permutation(*i).to_string(),
            (_, Element::Braid(w)) if w.is_empty() => "e".into(),
            (_, Element::Braid(w)) => format!("[{w}]"),
            _ => self.format(x),
        }
    }

    /// Strict inverse of [`Carrier::format`]. Braids must already be in
    /// canonical form for `B_strands`.
    pub fn parse(&self, text: &str, strands: usize) -> Result<Element> {
        let decimal = |limit: usize| -> Result<usize> {
            let ok =
                !text.is_empty() && text.bytes().all(|b| b.is_ascii_digit()) && (text == "0" || !text.starts_with('0'));
            let v: usize = if ok {
                text.parse().map_err(|_| Error::parse(0, "number too large"))?
            } else {
                return Err(Error::parse(0, format!("expected a decimal element, got {text:?}")));
            };
            if v >= limit {
                return Err(Error::parse(0, format!("element {v} out of range")));
            }
            Ok(v)
        };
        match self {
            Carrier::Laver(t) => {
                let v = decimal(t.size() + 1)?;
                if v == 0 {
                    return Err(Error::parse(0, "Laver elements start at 1"));
                }
                Ok(Element::Laver(v as u16))
            }
            Carrier::Group(g) => Ok(Element::Group(decimal(g.order())? as u32)),
            Carrier::Braid(_) | Carrier::PureBraid { .. } => {
                let w: BraidWord = text.parse()?;
                let x = Element::Braid(w);
                let canon = self.canonical(&x, strands)?;
                if canon != x {
                    return Err(Error::parse(0, "braid is not in canonical form"));
                }
                Ok(x)
            }
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Laver(k) => write!(f, "{k}"),
            Element::Group(i) => write!(f, "#{i}"),
            Element::Braid(w) => write!(f, "[{w}]"),
        }
    }
}
