//! Laver tables `L_n`: the unique LD operation on `{1, ..., 2^n}` with
//! `k * 1 = k + 1` (taken mod `2^n`).

use crate::error::{Error, Result};

pub const MAX_LEVEL: u32 = 5;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaverTable {
    level: u32,
    size: usize,
    entries: Vec<u16>,
}

impl LaverTable {
    /// Builds `L_n` for `1 <= n <= 5`.
    ///
    /// Row `2^n` is the identity. The remaining rows are filled from the
    /// bottom up with `k*1 = k+1` and `k*(l+1) = (k*l)*(k+1)`; since
    /// `k*l > k` the right-hand side only reads rows already filled.
    pub fn new(level: u32) -> Result<Self> {
        if !(1..=MAX_LEVEL).contains(&level) {
            return Err(Error::invalid(format!("Laver level {level} outside 1..={MAX_LEVEL}")));
        }
        let size = 1usize << level;
        let mut entries = vec![0u16; size * size];
        for l in 1..=size {
            entries[(size - 1) * size + l - 1] = l as u16;
        }
        for k in (1..size).rev() {
            entries[(k - 1) * size] = (k + 1) as u16;
            for l in 1..size {
                let kl = entries[(k - 1) * size + l - 1] as usize;
                debug_assert!(kl > k);
                entries[(k - 1) * size + l] = entries[(kl - 1) * size + k];
            }
        }
        Ok(LaverTable { level, size, entries })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// `2^n`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// `k * l` for `k, l` in `1..=2^n`.
    pub fn star(&self, k: u16, l: u16) -> u16 {
        self.entries[(k as usize - 1) * self.size + l as usize - 1]
    }

    /// Row `k` as a slice of `2^n` values.
    pub fn row(&self, k: u16) -> &[u16] {
        let start = (k as usize - 1) * self.size;
        &self.entries[start..start + self.size]
    }

    /// Scans every triple; returns the first failing `(x, y, z)`.
    pub fn first_ld_violation(&self) -> Option<(u16, u16, u16)> {
        let n = self.size as u16;
        for x in 1..=n {
            for y in 1..=n {
                for z in 1..=n {
                    let lhs = self.star(x, self.star(y, z));
                    let rhs = self.star(self.star(x, y), self.star(x, z));
                    if lhs != rhs {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }
}
