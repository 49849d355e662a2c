use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ld::{Element, LdContext};
use crate::treeword::TreeWord;

/// Element cap for closures.
pub const DEFAULT_CLOSURE_CAP: usize = 100_000;

/// The submagma generated by a basis under some operations, each element
/// with a minimal-size witness tree.
///
/// Elements are discovered level by level (a level is the leaf count of
/// the witness); within a level the order is split size, left element,
/// right element, operation.
#[derive(Clone, Debug)]
pub struct Closure {
    elements: Vec<Element>,
    witnesses: Vec<TreeWord>,
    index: HashMap<Element, usize>,
    levels: Vec<usize>,
}

impl Closure {
    pub fn build(ctx: &LdContext, basis: &[Element], ops: &[usize], cap: usize) -> Result<Self> {
        Self::build_until(ctx, basis, ops, cap, None)
    }

    /// Builds the closure, stopping as soon as `target` is found.
    fn build_until(
        ctx: &LdContext,
        basis: &[Element],
        ops: &[usize],
        cap: usize,
        target: Option<&Element>,
    ) -> Result<Self> {
        if !ctx.carrier().is_finite() {
            return Err(Error::precondition("closures are only enumerated on finite platforms"));
        }
        if basis.is_empty() {
            return Err(Error::invalid("empty basis"));
        }
        let mut c = Closure {
            elements: Vec::new(),
            witnesses: Vec::new(),
            index: HashMap::new(),
            levels: vec![0],
        };
        // by_level[k] lists element positions whose minimal witness has k leaves
        let mut by_level: Vec<Vec<usize>> = vec![Vec::new(), Vec::new()];
        for (i, x) in basis.iter().enumerate() {
            if c.insert(x.clone(), TreeWord::Leaf(i + 1), cap)? {
                by_level[1].push(c.elements.len() - 1);
            }
        }
        c.levels.push(c.elements.len());
        let found = |c: &Closure| target.is_some_and(|t| c.index.contains_key(t));
        let mut last_nonempty = 1;
        let mut k = 2;
        while k <= 2 * last_nonempty && !found(&c) {
            let mut fresh = Vec::new();
            'splits: for i in 1..k {
                let j = k - i;
                if j >= by_level.len() {
                    continue;
                }
                for &x in &by_level[i] {
                    for &y in &by_level[j] {
                        for &op in ops {
                            let z = ctx.apply(op, &c.elements[x], &c.elements[y])?;
                            let w = TreeWord::node(op, c.witnesses[x].clone(), c.witnesses[y].clone());
                            if c.insert(z, w, cap)? {
                                fresh.push(c.elements.len() - 1);
                                if found(&c) {
                                    break 'splits;
                                }
                            }
                        }
                    }
                }
            }
            if !fresh.is_empty() {
                last_nonempty = k;
            }
            by_level.push(fresh);
            c.levels.push(c.elements.len());
            k += 1;
        }
        Ok(c)
    }

    fn insert(&mut self, x: Element, w: TreeWord, cap: usize) -> Result<bool> {
        if self.index.contains_key(&x) {
            return Ok(false);
        }
        if self.elements.len() >= cap {
            return Err(Error::BoundExceeded(format!("submagma closure exceeds {cap} elements")));
        }
        self.index.insert(x.clone(), self.elements.len());
        self.elements.push(x);
        self.witnesses.push(w);
        Ok(true)
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.index.contains_key(x)
    }

    /// Minimal witness tree of an element of the closure.
    pub fn witness(&self, x: &Element) -> Option<&TreeWord> {
        self.index.get(x).map(|&i| &self.witnesses[i])
    }
}

/// A minimal-size tree-word over `basis` with operations from `ops`
/// evaluating to `target`. Fails with `BoundExceeded` when the target lies
/// outside the generated submagma.
pub fn membership_search(
    ctx: &LdContext,
    basis: &[Element],
    ops: &[usize],
    target: &Element,
    cap: usize,
) -> Result<TreeWord> {
    let c = Closure::build_until(ctx, basis, ops, cap, Some(target))?;
    c.witness(target).cloned().ok_or_else(|| {
        Error::BoundExceeded(format!(
            "{} is not in the submagma generated by the basis ({} elements searched)",
            ctx.carrier().display(target),
            c.len()
        ))
    })
}
