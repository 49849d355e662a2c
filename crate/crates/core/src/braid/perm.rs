use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `{1, ..., n}` stored as its image sequence.
///
/// Products follow function composition: `p.compose(&q)` is `p ∘ q`, so `q`
/// is applied first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n as u32).collect(),
        }
    }

    /// Builds a permutation from 1-based images, rejecting anything that is
    /// not a bijection on `{1, ..., n}`.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            let v = v as usize;
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::invalid(format!("{images:?} is not a permutation")));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { images })
    }

    /// The transposition `(i j)` in `S_n`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(i - 1, j - 1);
        p
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Image of the point `i` (1-based).
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] as usize
    }

    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: other.images.iter().map(|&j| self.images[j as usize - 1]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize - 1] = i as u32 + 1;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    /// `+1` for even permutations, `-1` for odd ones.
    pub fn sign(&self) -> i32 {
        let mut seen = vec![false; self.degree()];
        let mut sign = 1;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.images[k] as usize - 1;
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    /// Non-trivial cycles in canonical order (each starting at its least point).
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 1..=self.degree() {
            if seen[start - 1] || self.apply(start) == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut k = start;
            while !seen[k - 1] {
                seen[k - 1] = true;
                cycle.push(k);
                k = self.apply(k);
            }
            out.push(cycle);
        }
        out
    }

    /// Parses cycle notation such as `(1 2)(3 4 5)` or `()` into `S_n`.
    pub fn parse_cycles(n: usize, text: &str) -> Result<Self> {
        let mut images: Vec<u32> = (1..=n as u32).collect();
        let mut rest = text.trim();
        let mut offset = text.len() - text.trim_start().len();
        if rest.is_empty() || rest == "e" || rest == "()" {
            return Ok(Permutation { images });
        }
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(Error::parse(offset, "expected '('"));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| Error::parse(offset, "unterminated cycle"))?;
            let body = &rest[1..close];
            let points: Vec<usize> = body
                .split([' ', ','])
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| Error::parse(offset + 1, format!("bad point {s:?}")))
                })
                .collect::<Result<_>>()?;
            for &p in &points {
                if p == 0 || p > n {
                    return Err(Error::parse(offset + 1, format!("point {p} outside 1..={n}")));
                }
            }
            // Juxtaposed cycles compose right to left: "(1 2)(1 3)" applies (1 3) first.
            let mut cycle = Permutation::identity(n);
            for k in 0..points.len() {
                let from = points[k];
                let to = points[(k + 1) % points.len()];
                if cycle.images[from - 1] != from as u32 {
                    return Err(Error::parse(offset, "repeated point in cycle"));
                }
                cycle.images[from - 1] = to as u32;
            }
            images = Permutation { images }.compose(&cycle).images;
            offset += close + 1;
            rest = &rest[close + 1..];
            let trimmed = rest.trim_start();
            offset += rest.len() - trimmed.len();
            rest = trimmed;
        }
        Permutation::from_images(images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}
