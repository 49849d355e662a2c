//! Planar rooted binary trees with operation-labelled internal nodes and
//! generator-labelled leaves, written `(opJ left right)` / `gI` (1-based).

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::ld::{Element, LdContext};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum TreeWord {
    /// Basis element `g_i`, 1-based.
    Leaf(usize),
    /// `left *_op right`; `op` is a 0-based context operation index.
    Node {
        op: usize,
        left: Box<TreeWord>,
        right: Box<TreeWord>,
    },
}

impl TreeWord {
    pub fn leaf(i: usize) -> Self {
        TreeWord::Leaf(i)
    }

    pub fn node(op: usize, left: TreeWord, right: TreeWord) -> Self {
        TreeWord::Node {
            op,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeWord::Leaf(_) => 1,
            TreeWord::Node { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeWord::Leaf(_) => 0,
            TreeWord::Node { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    /// Leaf labels from left to right.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.visit(&mut |t| {
            if let TreeWord::Leaf(g) = t {
                out.push(*g);
            }
        });
        out
    }

    /// Operation labels in prefix order.
    pub fn ops(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.visit(&mut |t| {
            if let TreeWord::Node { op, .. } = t {
                out.push(*op);
            }
        });
        out
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a TreeWord)) {
        f(self);
        if let TreeWord::Node { left, right, .. } = self {
            left.visit(f);
            right.visit(f);
        }
    }

    /// The tree with its leaves forgotten and relabelled `g1, g2, ...`
    /// from left to right, so shapes and op labels can be compared.
    pub fn shape(&self) -> TreeWord {
        fn go(t: &TreeWord, next: &mut usize) -> TreeWord {
            match t {
                TreeWord::Leaf(_) => {
                    *next += 1;
                    TreeWord::Leaf(*next)
                }
                TreeWord::Node { op, left, right } => {
                    let l = go(left, next);
                    TreeWord::node(*op, l, go(right, next))
                }
            }
        }
        go(self, &mut 0)
    }

    /// Checks leaf labels against the basis size and op labels against `ops`.
    pub fn validate(&self, basis: usize, ops: &[usize]) -> Result<()> {
        if let Some(g) = self.leaves().into_iter().find(|&g| g == 0 || g > basis) {
            return Err(Error::invalid(format!("leaf g{g} outside a basis of size {basis}")));
        }
        if let Some(o) = self.ops().into_iter().find(|o| !ops.contains(o)) {
            return Err(Error::invalid(format!("operation op{} not allowed here", o + 1)));
        }
        Ok(())
    }

    /// Bottom-up value with leaf `gI` read as `basis[I-1]`.
    pub fn eval(&self, basis: &[Element], ctx: &LdContext) -> Result<Element> {
        match self {
            TreeWord::Leaf(g) => basis
                .get(g.wrapping_sub(1))
                .cloned()
                .ok_or_else(|| Error::invalid(format!("leaf g{g} outside a basis of size {}", basis.len()))),
            TreeWord::Node { op, left, right } => {
                let l = left.eval(basis, ctx)?;
                let r = right.eval(basis, ctx)?;
                ctx.apply(*op, &l, &r)
            }
        }
    }

    /// Evaluates the same tree with its `k`-th leaf (left to right)
    /// replaced by `leaves[k]`.
    pub fn map_leaves_eval(&self, leaves: &[Element], ctx: &LdContext) -> Result<Element> {
        if leaves.len() != self.leaf_count() {
            return Err(Error::invalid(format!(
                "tree has {} leaves, got {} elements",
                self.leaf_count(),
                leaves.len()
            )));
        }
        fn go(t: &TreeWord, leaves: &[Element], next: &mut usize, ctx: &LdContext) -> Result<Element> {
            match t {
                TreeWord::Leaf(_) => {
                    *next += 1;
                    Ok(leaves[*next - 1].clone())
                }
                TreeWord::Node { op, left, right } => {
                    let l = go(left, leaves, next, ctx)?;
                    let r = go(right, leaves, next, ctx)?;
                    ctx.apply(*op, &l, &r)
                }
            }
        }
        go(self, leaves, &mut 0, ctx)
    }

    /// Random tree with `k` leaves: the left subtree size is uniform in
    /// `1..k`, leaf labels uniform in `1..=basis`, op labels uniform in `ops`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, k: usize, basis: usize, ops: &[usize]) -> Result<TreeWord> {
        if k == 0 || basis == 0 {
            return Err(Error::invalid("random trees need k >= 1 and a non-empty basis"));
        }
        if k > 1 && ops.is_empty() {
            return Err(Error::invalid("random trees with k > 1 need operations"));
        }
        Ok(random_tree(rng, k, basis, ops))
    }
}

fn random_tree<R: Rng + ?Sized>(rng: &mut R, k: usize, basis: usize, ops: &[usize]) -> TreeWord {
    if k == 1 {
        return TreeWord::Leaf(rng.gen_range(1..=basis));
    }
    let split = rng.gen_range(1..k);
    let op = ops[rng.gen_range(0..ops.len())];
    let left = random_tree(rng, split, basis, ops);
    let right = random_tree(rng, k - split, basis, ops);
    TreeWord::node(op, left, right)
}

impl fmt::Display for TreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeWord::Leaf(g) => write!(f, "g{g}"),
            TreeWord::Node { op, left, right } => write!(f, "(op{} {left} {right})", op + 1),
        }
    }
}

impl FromStr for TreeWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            text: s.as_bytes(),
            pos: 0,
        };
        let t = p.tree()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(Error::parse(p.pos, "trailing input after tree"));
        }
        Ok(t)
    }
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, lit: &[u8]) -> Result<()> {
        if self.text[self.pos..].starts_with(lit) {
            self.pos += lit.len();
            Ok(())
        } else {
            Err(Error::parse(
                self.pos,
                format!("expected {:?}", String::from_utf8_lossy(lit)),
            ))
        }
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.text[start..self.pos]).expect("ascii digits");
        if digits.is_empty() || (digits.len() > 1 && digits.starts_with('0')) {
            return Err(Error::parse(start, "expected a positive number"));
        }
        match digits.parse::<usize>() {
            Ok(0) | Err(_) => Err(Error::parse(start, "expected a positive number")),
            Ok(v) => Ok(v),
        }
    }

    fn tree(&mut self) -> Result<TreeWord> {
        self.skip_ws();
        match self.text.get(self.pos) {
            Some(b'g') => {
                self.pos += 1;
                Ok(TreeWord::Leaf(self.number()?))
            }
            Some(b'(') => {
                self.pos += 1;
                self.expect(b"op")?;
                let op = self.number()? - 1;
                let here = self.pos;
                self.skip_ws();
                if self.pos == here {
                    return Err(Error::parse(self.pos, "expected whitespace after operation"));
                }
                let left = self.tree()?;
                let here = self.pos;
                self.skip_ws();
                if self.pos == here {
                    return Err(Error::parse(self.pos, "expected whitespace between subtrees"));
                }
                let right = self.tree()?;
                self.skip_ws();
                self.expect(b")")?;
                Ok(TreeWord::node(op, left, right))
            }
            None => Err(Error::parse(self.pos, "unexpected end of input")),
            Some(_) => Err(Error::parse(self.pos, "expected 'g' or '('")),
        }
    }
}
