use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::ld::{FiniteGroup, Subgroup};

/// Largest `|H|·|K|` we agree to scan.
const MAX_PAIRS: usize = 10_000_000;

/// Find `h ∈ H`, `c ∈ K` with `c x c⁻¹ = h y` in a finite group.
#[derive(Clone, Debug)]
pub struct SccpInstance {
    pub group: Arc<FiniteGroup>,
    pub h: Subgroup,
    pub k: Subgroup,
    pub x: u32,
    pub y: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SccpSolution {
    pub h: u32,
    pub c: u32,
    /// Position of the solution in h-major, c-minor order, counting from 1.
    pub searched: u64,
}

impl SccpInstance {
    pub fn verify(&self, h: u32, c: u32) -> Result<bool> {
        let g = &self.group;
        let in_h = g.subgroup(&self.h)?.contains(&h);
        let in_k = g.subgroup(&self.k)?.contains(&c);
        Ok(in_h && in_k && g.mul(g.mul(c, self.x), g.inv(c)) == g.mul(h, self.y))
    }
}

/// First solution in h-major, c-minor order (both subgroups in index
/// order). `Exhausted` means the conjugacy class of `x` misses the coset `Hy`.
pub fn sccp_brute(inst: &SccpInstance) -> Result<SccpSolution> {
    let g = &inst.group;
    let order = g.order() as u32;
    if inst.x >= order || inst.y >= order {
        return Err(Error::invalid(format!(
            "element index out of range for a group of order {order}"
        )));
    }
    let hs = g.subgroup(&inst.h)?;
    let ks = g.subgroup(&inst.k)?;
    if hs.len().saturating_mul(ks.len()) > MAX_PAIRS {
        return Err(Error::BoundExceeded(format!(
            "|H|·|K| = {} exceeds {MAX_PAIRS}",
            hs.len() * ks.len()
        )));
    }
    // first_c[z] = position in K of the first c with c x c⁻¹ = z
    let mut first_c = vec![usize::MAX; order as usize];
    for (j, &c) in ks.iter().enumerate() {
        let z = g.mul(g.mul(c, inst.x), g.inv(c)) as usize;
        if first_c[z] == usize::MAX {
            first_c[z] = j;
        }
    }
    for (i, &h) in hs.iter().enumerate() {
        let j = first_c[g.mul(h, inst.y) as usize];
        if j != usize::MAX {
            return Ok(SccpSolution {
                h,
                c: ks[j],
                searched: (i * ks.len() + j + 1) as u64,
            });
        }
    }
    Err(Error::Exhausted {
        searched: (hs.len() * ks.len()) as u64,
    })
}

/// A solvable instance: uniform `y ∈ G`, `h ∈ H`, `c ∈ K`, and
/// `x = c⁻¹(h y)c`.
pub fn plant_sccp<R: Rng + ?Sized>(
    group: Arc<FiniteGroup>,
    h: Subgroup,
    k: Subgroup,
    rng: &mut R,
) -> Result<SccpInstance> {
    let hs = group.subgroup(&h)?;
    let ks = group.subgroup(&k)?;
    let y = rng.gen_range(0..group.order() as u32);
    let h0 = hs[rng.gen_range(0..hs.len())];
    let c0 = ks[rng.gen_range(0..ks.len())];
    let x = group.mul(group.mul(group.inv(c0), group.mul(h0, y)), c0);
    Ok(SccpInstance { group, h, k, x, y })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;

    #[test]
    fn trivial_coset_finds_identity_first() {
        let g = Arc::new(FiniteGroup::symmetric(4).unwrap());
        let inst = SccpInstance {
            group: g,
            h: Subgroup::Trivial,
            k: Subgroup::Whole,
            x: 7,
            y: 7,
        };
        let sol = sccp_brute(&inst).unwrap();
        assert_eq!((sol.h, sol.c, sol.searched), (0, 0, 1));
    }

    #[test]
    fn trivial_conjugator_is_coset_membership() {
        let g = Arc::new(FiniteGroup::symmetric(4).unwrap());
        let hs = g.subgroup(&Subgroup::Young(vec![2, 2])).unwrap();
        for x in 0..24 {
            for y in 0..24 {
                let inst = SccpInstance {
                    group: g.clone(),
                    h: Subgroup::Young(vec![2, 2]),
                    k: Subgroup::Trivial,
                    x,
                    y,
                };
                let member = hs.contains(&g.mul(x, g.inv(y)));
                assert_eq!(sccp_brute(&inst).is_ok(), member);
            }
        }
    }

    #[test]
    fn planted_s5_instances_solve() {
        let g = Arc::new(FiniteGroup::symmetric(5).unwrap());
        let mut rng = seed::rng(3);
        for _ in 0..10 {
            let inst = plant_sccp(g.clone(), Subgroup::Young(vec![3, 2]), Subgroup::Whole, &mut rng).unwrap();
            let sol = sccp_brute(&inst).unwrap();
            assert!(inst.verify(sol.h, sol.c).unwrap());
        }
    }
}
