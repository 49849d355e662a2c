//! Small permutation groups with a precomputed Cayley table.
//!
//! Elements are addressed by index into the image-sorted element list, so the
//! identity is always index 0 and enumeration order is canonical.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::braid::Permutation;
use crate::error::{Error, Result};

/// Order cap keeping the Cayley table at desk scale.
pub const MAX_ORDER: usize = 720;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GroupKind {
    Symmetric { degree: usize },
    Dihedral { order: usize },
    Quaternion,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Symmetric { degree } => write!(f, "S{degree}"),
            GroupKind::Dihedral { order } => write!(f, "D{}", order / 2),
            GroupKind::Quaternion => write!(f, "Q8"),
        }
    }
}

pub struct FiniteGroup {
    kind: GroupKind,
    degree: usize,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, u32>,
    table: Vec<u32>,
    inverses: Vec<u32>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.kind, self.order())
    }
}

/// Unit quaternions `±1, ±i, ±j, ±k` encoded as `sign * 4 + unit`.
fn quaternion_mul(a: usize, b: usize) -> usize {
    // unit products: rows/cols 1, i, j, k; value (sign, unit)
    const T: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let (sa, ua) = (a / 4, a % 4);
    let (sb, ub) = (b / 4, b % 4);
    let (s, u) = T[ua][ub];
    ((sa + sb + s) % 2) * 4 + u
}

const QUATERNION_NAMES: [&str; 8] = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"];

impl FiniteGroup {
    pub fn symmetric(degree: usize) -> Result<Self> {
        if !(2..=6).contains(&degree) {
            return Err(Error::invalid(format!("symmetric degree {degree} outside 2..=6")));
        }
        let mut cycle: Vec<u32> = (2..=degree as u32).collect();
        cycle.push(1);
        let gens = vec![
            Permutation::transposition(degree, 1, 2),
            Permutation::from_images(cycle)?,
        ];
        Self::generated(GroupKind::Symmetric { degree }, degree, &gens)
    }

    /// Dihedral group of the given order acting on `order / 2` points,
    /// generated by `r = (1 2 ... m)` and the reflection fixing 1.
    pub fn dihedral(order: usize) -> Result<Self> {
        if order < 6 || !order.is_multiple_of(2) || order > 2 * 16 {
            return Err(Error::invalid(format!("dihedral order {order} must be even in 6..=32")));
        }
        let m = order / 2;
        let mut rot: Vec<u32> = (2..=m as u32).collect();
        rot.push(1);
        let refl: Vec<u32> = (1..=m as u32)
            .map(|i| if i == 1 { 1 } else { m as u32 + 2 - i })
            .collect();
        let gens = vec![Permutation::from_images(rot)?, Permutation::from_images(refl)?];
        Self::generated(GroupKind::Dihedral { order }, m, &gens)
    }

    /// The quaternion group through its left regular representation on
    /// the eight points `1, i, j, k, -1, -i, -j, -k`.
    pub fn quaternion() -> Result<Self> {
        let left = |g: usize| Permutation::from_images((0..8).map(|x| quaternion_mul(g, x) as u32 + 1).collect());
        let gens = vec![left(1)?, left(2)?];
        Self::generated(GroupKind::Quaternion, 8, &gens)
    }

    pub fn from_kind(kind: GroupKind) -> Result<Self> {
        match kind {
            GroupKind::Symmetric { degree } => Self::symmetric(degree),
            GroupKind::Dihedral { order } => Self::dihedral(order),
            GroupKind::Quaternion => Self::quaternion(),
        }
    }

    fn generated(kind: GroupKind, degree: usize, gens: &[Permutation]) -> Result<Self> {
        let id = Permutation::identity(degree);
        let mut seen: HashMap<Permutation, ()> = HashMap::new();
        seen.insert(id.clone(), ());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = x.compose(g);
                if !seen.contains_key(&y) {
                    if seen.len() >= MAX_ORDER {
                        return Err(Error::BoundExceeded(format!("group order above {MAX_ORDER}")));
                    }
                    seen.insert(y.clone(), ());
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_keys().collect();
        elements.sort();
        let index: HashMap<Permutation, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let n = elements.len();
        let mut table = vec![0u32; n * n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                table[i * n + j] = index[&a.compose(b)];
            }
        }
        let inverses = elements.iter().map(|p| index[&p.inverse()]).collect();
        Ok(FiniteGroup {
            kind,
            degree,
            elements,
            index,
            table,
            inverses,
        })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> u32 {
        0
    }

    /// Product `x·y` as permutation composition `x ∘ y`.
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        self.table[x as usize * self.order() + y as usize]
    }

    pub fn inv(&self, x: u32) -> u32 {
        self.inverses[x as usize]
    }

    pub fn permutation(&self, x: u32) -> &Permutation {
        &self.elements[x as usize]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<u32> {
        self.index.get(p).copied()
    }

    pub fn commutes(&self, x: u32, y: u32) -> bool {
        self.mul(x, y) == self.mul(y, x)
    }

    pub fn is_central(&self, x: u32) -> bool {
        (0..self.order() as u32).all(|y| self.commutes(x, y))
    }

    pub fn is_odd(&self, x: u32) -> bool {
        self.permutation(x).sign() < 0
    }

    /// Parses an element: cycle notation, or a group-specific name
    /// (`r2`, `sr` for dihedral groups; `-1`, `i`, `-k` for `Q8`).
    pub fn parse_element(&self, text: &str) -> Result<u32> {
        let text = text.trim();
        if let Some(x) = self.named(text) {
            return Ok(x);
        }
        let p = Permutation::parse_cycles(self.degree, text)?;
        self.index_of(&p)
            .ok_or_else(|| Error::invalid(format!("{text} is not an element of {}", self.kind)))
    }

    fn named(&self, text: &str) -> Option<u32> {
        match self.kind {
            GroupKind::Quaternion => {
                let u = QUATERNION_NAMES.iter().position(|&n| n == text)?;
                let p = Permutation::from_images((0..8).map(|x| quaternion_mul(u, x) as u32 + 1).collect()).ok()?;
                self.index_of(&p)
            }
            GroupKind::Dihedral { order } => {
                let m = order / 2;
                let (refl, rest) = match text.strip_prefix('s') {
                    Some(r) => (true, r),
                    None => (false, text),
                };
                let k: usize = match rest {
                    "" if refl => 0,
                    "r" => 1,
                    _ => rest.strip_prefix('r')?.parse().ok()?,
                };
                let mut rot: Vec<u32> = (2..=m as u32).collect();
                rot.push(1);
                let r = self.index_of(&Permutation::from_images(rot).ok()?)?;
                let mut x = self.identity();
                for _ in 0..k % m {
                    x = self.mul(x, r);
                }
                if refl {
                    let s = self.dihedral_reflection()?;
                    x = self.mul(s, x);
                }
                Some(x)
            }
            GroupKind::Symmetric { .. } => (text == "e").then_some(0),
        }
    }

    fn dihedral_reflection(&self) -> Option<u32> {
        let m = self.degree as u32;
        let refl: Vec<u32> = (1..=m).map(|i| if i == 1 { 1 } else { m + 2 - i }).collect();
        self.index_of(&Permutation::from_images(refl).ok()?)
    }

    /// Elements of a subgroup in index order.
    pub fn subgroup(&self, sub: &Subgroup) -> Result<Vec<u32>> {
        let all = 0..self.order() as u32;
        Ok(match sub {
            Subgroup::Whole => all.collect(),
            Subgroup::Trivial => vec![0],
            Subgroup::Center => all.filter(|&x| self.is_central(x)).collect(),
            Subgroup::Young(parts) => {
                if parts.iter().sum::<usize>() != self.degree || parts.contains(&0) {
                    return Err(Error::invalid(format!(
                        "composition {parts:?} does not partition {} points",
                        self.degree
                    )));
                }
                let mut block = Vec::with_capacity(self.degree);
                for (b, &len) in parts.iter().enumerate() {
                    block.extend(std::iter::repeat_n(b, len));
                }
                all.filter(|&x| {
                    let p = self.permutation(x);
                    (1..=self.degree).all(|i| block[p.apply(i) - 1] == block[i - 1])
                })
                .collect()
            }
        })
    }
}

/// Subgroups used by coset and conjugacy searches.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Subgroup {
    Whole,
    Trivial,
    Center,
    /// Young subgroup `S_{c1} × S_{c2} × ...` for a composition of the degree.
    Young(Vec<usize>),
}

impl std::str::FromStr for Subgroup {
    type Err = Error;

    /// `whole`, `trivial`, `center`, or `young:3,2`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "whole" | "G" => Ok(Subgroup::Whole),
            "trivial" | "e" => Ok(Subgroup::Trivial),
            "center" => Ok(Subgroup::Center),
            _ => {
                let parts = s
                    .strip_prefix("young:")
                    .ok_or_else(|| Error::parse(0, format!("unknown subgroup {s:?}")))?;
                parts
                    .split(',')
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| Error::parse(6, format!("bad part {t:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(Subgroup::Young)
            }
        }
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subgroup::Whole => f.write_str("whole"),
            Subgroup::Trivial => f.write_str("trivial"),
            Subgroup::Center => f.write_str("center"),
            Subgroup::Young(parts) => {
                let parts: Vec<String> = parts.iter().map(usize::to_string).collect();
                write!(f, "young:{}", parts.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(FiniteGroup::symmetric(3).unwrap().order(), 6);
        assert_eq!(FiniteGroup::symmetric(5).unwrap().order(), 120);
        assert_eq!(FiniteGroup::dihedral(8).unwrap().order(), 8);
        assert_eq!(FiniteGroup::quaternion().unwrap().order(), 8);
    }

    #[test]
    fn cayley_table_is_associative() {
        let g = FiniteGroup::symmetric(4).unwrap();
        let n = g.order() as u32;
        for x in 0..n {
            assert_eq!(g.mul(x, g.inv(x)), g.identity());
            for y in 0..n {
                for z in 0..n {
                    assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
                }
            }
        }
    }

    #[test]
    fn centers() {
        let d4 = FiniteGroup::dihedral(8).unwrap();
        let r2 = d4.parse_element("r2").unwrap();
        assert_eq!(d4.subgroup(&Subgroup::Center).unwrap(), {
            let mut c = vec![0, r2];
            c.sort();
            c
        });
        let q8 = FiniteGroup::quaternion().unwrap();
        assert_eq!(q8.subgroup(&Subgroup::Center).unwrap().len(), 2);
        assert!(q8.is_central(q8.parse_element("-1").unwrap()));
        assert!(!q8.is_central(q8.parse_element("i").unwrap()));
        assert_eq!(
            FiniteGroup::symmetric(4).unwrap().subgroup(&Subgroup::Center).unwrap(),
            vec![0]
        );
    }

    #[test]
    fn quaternion_relations() {
        let q = FiniteGroup::quaternion().unwrap();
        let [i, j, k, m] = ["i", "j", "k", "-1"].map(|s| q.parse_element(s).unwrap());
        assert_eq!(q.mul(i, i), m);
        assert_eq!(q.mul(i, j), k);
        assert_eq!(q.mul(q.mul(i, j), k), m);
    }

    #[test]
    fn young_subgroup_order() {
        let s5 = FiniteGroup::symmetric(5).unwrap();
        assert_eq!(s5.subgroup(&Subgroup::Young(vec![3, 2])).unwrap().len(), 12);
        assert!(s5.subgroup(&Subgroup::Young(vec![3, 3])).is_err());
        assert_eq!("young:3,2".parse::<Subgroup>().unwrap(), Subgroup::Young(vec![3, 2]));
    }

    #[test]
    fn dihedral_names() {
        let d4 = FiniteGroup::dihedral(8).unwrap();
        let r = d4.parse_element("r").unwrap();
        let s = d4.parse_element("s").unwrap();
        assert_eq!(d4.mul(r, d4.mul(r, d4.mul(r, r))), 0);
        assert_eq!(d4.mul(s, s), 0);
        assert_eq!(d4.mul(s, d4.mul(r, s)), d4.inv(r));
        assert_eq!(d4.parse_element("(1 3)(2 4)").unwrap(), d4.parse_element("r2").unwrap());
    }
}
