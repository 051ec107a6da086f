//! Cylinder events of a Bernoulli measure on `A^ℤ`.
//!
//! An event is stored as a reduced ordered multi-valued decision diagram over the
//! integer coordinates (smaller coordinates nearer the root). A node whose children
//! are all equal is never created and equal nodes are shared, so for a fixed carrier
//! each event has exactly one diagram. Nodes are numbered in the post-order of a
//! depth-first walk from the root that visits children in symbol order, which makes
//! structural equality of the node vector coincide with equality of events.
//!
//! The first and last coordinates used by the diagram are the minimal window: a
//! boundary coordinate over which the word set is a full-alphabet product is never
//! tested.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub const MAX_ALPHABET: usize = 36;

/// A node-table edge: `Ok(index)` for an inner node, `Err(value)` for a terminal.
pub type NodeRef = Result<u32, bool>;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub(crate) enum Edge {
    False,
    True,
    Node(u32),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub(crate) struct Node {
    pub coord: i64,
    pub kids: Box<[Edge]>,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CylinderEvent {
    probs: Arc<[Rational]>,
    nodes: Vec<Node>,
    root: Edge,
}

/// Validates a Bernoulli probability vector: at least two symbols, all positive, sum one.
pub fn check_probs(probs: &[Rational]) -> Result<()> {
    if probs.len() < 2 || probs.len() > MAX_ALPHABET {
        return Err(Error::InvalidProbs(format!(
            "alphabet size {} outside 2..={MAX_ALPHABET}",
            probs.len()
        )));
    }
    if let Some(p) = probs.iter().find(|p| !p.is_positive()) {
        return Err(Error::InvalidProbs(format!("probability {p} is not positive")));
    }
    let total: Rational = probs.iter().sum();
    if !total.is_one() {
        return Err(Error::InvalidProbs(format!("probabilities sum to {total}")));
    }
    Ok(())
}

pub fn symbol_char(s: usize) -> char {
    std::char::from_digit(s as u32, MAX_ALPHABET as u32).expect("symbol in range")
}

pub fn char_symbol(c: char, arity: usize) -> Result<usize> {
    match c.to_digit(MAX_ALPHABET as u32) {
        Some(d) if (d as usize) < arity && !c.is_ascii_uppercase() => Ok(d as usize),
        _ => Err(Error::BadSymbol(c)),
    }
}

pub(crate) struct Builder {
    arity: usize,
    nodes: Vec<Node>,
    unique: HashMap<Node, u32>,
}

impl Builder {
    pub(crate) fn new(arity: usize) -> Self {
        Builder {
            arity,
            nodes: Vec::new(),
            unique: HashMap::new(),
        }
    }

    pub(crate) fn mk(&mut self, coord: i64, kids: Vec<Edge>) -> Edge {
        debug_assert_eq!(kids.len(), self.arity);
        if kids.iter().all(|k| *k == kids[0]) {
            return kids[0];
        }
        let node = Node {
            coord,
            kids: kids.into_boxed_slice(),
        };
        if let Some(&id) = self.unique.get(&node) {
            return Edge::Node(id);
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(node.clone());
        self.unique.insert(node, id);
        Edge::Node(id)
    }

    fn coord(&self, e: Edge) -> i64 {
        match e {
            Edge::Node(i) => self.nodes[i as usize].coord,
            _ => i64::MAX,
        }
    }

    /// Renumbers the part reachable from `root` into canonical post-order.
    pub(crate) fn finish(self, probs: Arc<[Rational]>, root: Edge) -> CylinderEvent {
        let Edge::Node(r) = root else {
            return CylinderEvent {
                probs,
                nodes: Vec::new(),
                root,
            };
        };
        let mut remap: HashMap<u32, u32> = HashMap::new();
        let mut out: Vec<Node> = Vec::new();
        let mut stack: Vec<(u32, usize)> = vec![(r, 0)];
        while let Some((id, next)) = stack.pop() {
            let node = &self.nodes[id as usize];
            let pending = node.kids[next..].iter().position(|k| match k {
                Edge::Node(c) => !remap.contains_key(c),
                _ => false,
            });
            match pending {
                Some(off) => {
                    let Edge::Node(c) = node.kids[next + off] else {
                        unreachable!()
                    };
                    stack.push((id, next + off + 1));
                    stack.push((c, 0));
                }
                None => {
                    if remap.contains_key(&id) {
                        continue;
                    }
                    let kids = node
                        .kids
                        .iter()
                        .map(|k| match k {
                            Edge::Node(c) => Edge::Node(remap[c]),
                            t => *t,
                        })
                        .collect();
                    remap.insert(id, out.len() as u32);
                    out.push(Node {
                        coord: node.coord,
                        kids,
                    });
                }
            }
        }
        CylinderEvent {
            probs,
            root: Edge::Node(remap[&r]),
            nodes: out,
        }
    }
}

/// Transition result of a scanning automaton.
pub(crate) enum Step<S> {
    Accept,
    Reject,
    Go(S),
}

impl CylinderEvent {
    pub fn empty(probs: Arc<[Rational]>) -> Self {
        CylinderEvent {
            probs,
            nodes: Vec::new(),
            root: Edge::False,
        }
    }

    pub fn full(probs: Arc<[Rational]>) -> Self {
        CylinderEvent {
            probs,
            nodes: Vec::new(),
            root: Edge::True,
        }
    }

    pub fn probs(&self) -> &Arc<[Rational]> {
        &self.probs
    }

    pub fn arity(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.root == Edge::False
    }

    pub fn is_full(&self) -> bool {
        self.root == Edge::True
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// `[x_coord = symbol]`.
    pub fn symbol_at(probs: Arc<[Rational]>, coord: i64, symbol: usize) -> Result<Self> {
        Self::word_at(probs, coord, &[symbol])
    }

    /// `[x_coord .. x_{coord+len} = word]`.
    pub fn word_at(probs: Arc<[Rational]>, coord: i64, word: &[usize]) -> Result<Self> {
        let pattern: Vec<Option<usize>> = word.iter().map(|&s| Some(s)).collect();
        Self::from_patterns(probs, coord, &[pattern])
    }

    /// Builds an event from a window start and equal-length patterns, `None` standing
    /// for "any symbol". The event is the union of the patterns.
    pub fn from_patterns(
        probs: Arc<[Rational]>,
        lo: i64,
        patterns: &[Vec<Option<usize>>],
    ) -> Result<Self> {
        check_probs(&probs)?;
        let arity = probs.len();
        let mut chains = Vec::with_capacity(patterns.len());
        for p in patterns {
            if let Some(&Some(s)) = p.iter().find(|s| matches!(s, Some(s) if *s >= arity)) {
                return Err(Error::BadSymbol(symbol_char(s.min(MAX_ALPHABET - 1))));
            }
            let mut b = Builder::new(arity);
            let mut edge = Edge::True;
            for (i, s) in p.iter().enumerate().rev() {
                if let Some(s) = s {
                    let mut kids = vec![Edge::False; arity];
                    kids[*s] = edge;
                    edge = b.mk(lo + i as i64, kids);
                }
            }
            chains.push(b.finish(probs.clone(), edge));
        }
        // Balanced reduction keeps the intermediate diagrams small.
        while chains.len() > 1 {
            let mut next = Vec::with_capacity(chains.len().div_ceil(2));
            let mut it = chains.into_iter();
            while let Some(a) = it.next() {
                match it.next() {
                    Some(b) => next.push(a.union(&b)),
                    None => next.push(a),
                }
            }
            chains = next;
        }
        Ok(chains
            .pop()
            .unwrap_or_else(|| CylinderEvent::empty(probs.clone())))
    }

    /// Parses the text form: window `[lo, hi]` and words over `0-9a-z`, `*` matching any symbol.
    pub fn from_words(
        probs: Arc<[Rational]>,
        window: Option<(i64, i64)>,
        words: &[String],
    ) -> Result<Self> {
        check_probs(&probs)?;
        let arity = probs.len();
        let len = match window {
            Some((lo, hi)) if hi < lo => {
                return Err(Error::Parse(format!("window [{lo}, {hi}] is reversed")))
            }
            Some((lo, hi)) => usize::try_from(hi - lo + 1)
                .ok()
                .filter(|&l| l <= 1 << 16)
                .ok_or_else(|| Error::Parse("window too long".into()))?,
            None => 0,
        };
        let mut patterns = Vec::with_capacity(words.len());
        for w in words {
            let got = w.chars().count();
            if got != len {
                return Err(Error::WordLength {
                    word: w.clone(),
                    expected: len,
                    got,
                });
            }
            let p = w
                .chars()
                .map(|c| {
                    if c == '*' {
                        Ok(None)
                    } else {
                        char_symbol(c, arity).map(Some)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            patterns.push(p);
        }
        Self::from_patterns(probs, window.map_or(0, |w| w.0), &patterns)
    }

    /// Builds the event accepted by a left-to-right scan of coordinates `lo..=hi`.
    pub(crate) fn from_automaton<S, F, G>(
        probs: Arc<[Rational]>,
        lo: i64,
        hi: i64,
        init: S,
        step: F,
        at_end: G,
    ) -> Self
    where
        S: Clone + Eq + Hash,
        F: Fn(i64, &S, usize) -> Step<S>,
        G: Fn(&S) -> bool,
    {
        #[derive(Clone, Copy)]
        enum Target {
            Accept,
            Reject,
            State(usize),
        }
        let arity = probs.len();
        let mut layers: Vec<Vec<S>> = vec![vec![init]];
        let mut moves: Vec<Vec<Vec<Target>>> = Vec::new();
        for pos in lo..=hi {
            let current = layers.last().expect("nonempty");
            let mut index: HashMap<S, usize> = HashMap::new();
            let mut next: Vec<S> = Vec::new();
            let mut layer_moves = Vec::with_capacity(current.len());
            for state in current {
                let mut row = Vec::with_capacity(arity);
                for sym in 0..arity {
                    row.push(match step(pos, state, sym) {
                        Step::Accept => Target::Accept,
                        Step::Reject => Target::Reject,
                        Step::Go(s) => {
                            let id = *index.entry(s.clone()).or_insert_with(|| {
                                next.push(s);
                                next.len() - 1
                            });
                            Target::State(id)
                        }
                    });
                }
                layer_moves.push(row);
            }
            moves.push(layer_moves);
            layers.push(next);
        }
        let mut b = Builder::new(arity);
        let mut below: Vec<Edge> = layers
            .last()
            .expect("nonempty")
            .iter()
            .map(|s| if at_end(s) { Edge::True } else { Edge::False })
            .collect();
        for (depth, layer_moves) in moves.iter().enumerate().rev() {
            let coord = lo + depth as i64;
            below = layer_moves
                .iter()
                .map(|row| {
                    let kids = row
                        .iter()
                        .map(|t| match t {
                            Target::Accept => Edge::True,
                            Target::Reject => Edge::False,
                            Target::State(i) => below[*i],
                        })
                        .collect();
                    b.mk(coord, kids)
                })
                .collect();
        }
        let root = below[0];
        b.finish(probs, root)
    }

    /// Smallest and largest coordinates the event depends on.
    pub fn window(&self) -> Option<(i64, i64)> {
        if self.nodes.is_empty() {
            return None;
        }
        let lo = self.nodes.iter().map(|n| n.coord).min()?;
        let hi = self.nodes.iter().map(|n| n.coord).max()?;
        Some((lo, hi))
    }

    fn coord(&self, e: Edge) -> i64 {
        match e {
            Edge::Node(i) => self.nodes[i as usize].coord,
            _ => i64::MAX,
        }
    }

    fn cofactor(&self, e: Edge, coord: i64, sym: usize) -> Edge {
        match e {
            Edge::Node(i) if self.nodes[i as usize].coord == coord => {
                self.nodes[i as usize].kids[sym]
            }
            other => other,
        }
    }

    /// Pointwise `op` of two events. The product traversal keeps an explicit stack,
    /// since windows can span thousands of coordinates.
    pub(crate) fn apply(&self, other: &Self, op: fn(bool, bool) -> bool) -> Self {
        debug_assert_eq!(self.probs, other.probs);
        struct Frame {
            x: Edge,
            y: Edge,
            coord: i64,
            kids: Vec<Edge>,
        }
        let arity = self.arity();
        let mut b = Builder::new(arity);
        let mut memo: HashMap<(Edge, Edge), Edge> = HashMap::new();
        let known = |x: Edge, y: Edge, memo: &HashMap<(Edge, Edge), Edge>| -> Option<Edge> {
            let term = |e: Edge| match e {
                Edge::True => Some(true),
                Edge::False => Some(false),
                Edge::Node(_) => None,
            };
            let edge = |v: bool| if v { Edge::True } else { Edge::False };
            match (term(x), term(y)) {
                (Some(p), Some(q)) => Some(edge(op(p, q))),
                (Some(p), None) if op(p, false) == op(p, true) => Some(edge(op(p, false))),
                (None, Some(q)) if op(false, q) == op(true, q) => Some(edge(op(false, q))),
                _ => memo.get(&(x, y)).copied(),
            }
        };
        let frame = |x: Edge, y: Edge| Frame {
            x,
            y,
            coord: self.coord(x).min(other.coord(y)),
            kids: Vec::with_capacity(arity),
        };
        let root = match known(self.root, other.root, &memo) {
            Some(e) => e,
            None => {
                let mut stack = vec![frame(self.root, other.root)];
                loop {
                    let top = stack.last_mut().expect("nonempty until the root is built");
                    if top.kids.len() < arity {
                        let s = top.kids.len();
                        let xs = self.cofactor(top.x, top.coord, s);
                        let ys = other.cofactor(top.y, top.coord, s);
                        match known(xs, ys, &memo) {
                            Some(e) => top.kids.push(e),
                            None => stack.push(frame(xs, ys)),
                        }
                        continue;
                    }
                    let done = stack.pop().expect("nonempty");
                    let e = b.mk(done.coord, done.kids);
                    memo.insert((done.x, done.y), e);
                    match stack.last_mut() {
                        Some(parent) => parent.kids.push(e),
                        None => break e,
                    }
                }
            }
        };
        b.finish(self.probs.clone(), root)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.apply(other, |p, q| p || q)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.apply(other, |p, q| p && q)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.apply(other, |p, q| p && !q)
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.apply(other, |p, q| p != q)
    }

    pub fn complement(&self) -> Self {
        let flip = |e: Edge| match e {
            Edge::True => Edge::False,
            Edge::False => Edge::True,
            n => n,
        };
        CylinderEvent {
            probs: self.probs.clone(),
            nodes: self
                .nodes
                .iter()
                .map(|n| Node {
                    coord: n.coord,
                    kids: n.kids.iter().map(|&k| flip(k)).collect(),
                })
                .collect(),
            root: flip(self.root),
        }
    }

    /// Whether the two events share a point, without building the intersection.
    pub fn intersects(&self, other: &Self) -> bool {
        let mut seen = HashSet::new();
        let mut stack = vec![(self.root, other.root)];
        while let Some((x, y)) = stack.pop() {
            match (x, y) {
                (Edge::False, _) | (_, Edge::False) => continue,
                (Edge::True, Edge::True) => return true,
                _ => {}
            }
            if !seen.insert((x, y)) {
                continue;
            }
            let c = self.coord(x).min(other.coord(y));
            for s in 0..self.arity() {
                stack.push((self.cofactor(x, c, s), other.cofactor(y, c, s)));
            }
        }
        false
    }

    /// Reindexes coordinates by `k`: the result depends on `x_{c+k}` where `self` depends on `x_c`.
    pub fn shift(&self, k: i64) -> Self {
        CylinderEvent {
            probs: self.probs.clone(),
            nodes: self
                .nodes
                .iter()
                .map(|n| Node {
                    coord: n.coord + k,
                    kids: n.kids.clone(),
                })
                .collect(),
            root: self.root,
        }
    }

    /// Exact Bernoulli measure.
    ///
    /// Runs the dynamic program over integers scaled by powers of the common
    /// denominator of the probabilities, so no gcd is taken until the final division.
    pub fn measure(&self) -> Rational {
        let root = match self.root {
            Edge::False => return Rational::zero(),
            Edge::True => return Rational::one(),
            Edge::Node(r) => r,
        };
        let denom = Rational::common_denominator(self.probs.iter());
        let weights: Vec<BigUint> = self
            .probs
            .iter()
            .map(|p| {
                (p * &Rational::from_integer(denom.clone()))
                    .numer()
                    .magnitude()
                    .clone()
            })
            .collect();
        let denom = denom.magnitude().clone();
        let top = self.nodes.iter().map(|n| n.coord).max().unwrap_or(0) + 1;
        let mut powers: HashMap<i64, BigUint> = HashMap::new();
        let mut power = |e: i64| -> BigUint {
            powers
                .entry(e)
                .or_insert_with(|| num_traits::pow(denom.clone(), e as usize))
                .clone()
        };
        let mut value: Vec<BigUint> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let mut acc = BigUint::zero();
            for (s, kid) in node.kids.iter().enumerate() {
                let (v, c) = match kid {
                    Edge::False => continue,
                    Edge::True => (BigUint::one(), top),
                    Edge::Node(i) => (
                        value[*i as usize].clone(),
                        self.nodes[*i as usize].coord,
                    ),
                };
                let gap = c - node.coord - 1;
                let scaled = if gap > 0 { v * power(gap) } else { v };
                acc += scaled * &weights[s];
            }
            value.push(acc);
        }
        let exp = top - self.nodes[root as usize].coord;
        Rational::new(
            BigInt::from(value[root as usize].clone()),
            BigInt::from(power(exp)),
        )
        .expect("positive denominator")
    }

    /// Disjoint wildcard patterns over the window, if there are at most `limit` of them.
    pub fn patterns(&self, limit: usize) -> Option<Vec<String>> {
        let (lo, hi) = match self.window() {
            None => return Some(if self.is_full() { vec![String::new()] } else { vec![] }),
            Some(w) => w,
        };
        let len = (hi - lo + 1) as usize;
        let mut out = Vec::new();
        let mut current = vec!['*'; len];
        if self.collect_paths(self.root, lo, &mut current, &mut out, limit) {
            Some(out)
        } else {
            None
        }
    }

    fn collect_paths(
        &self,
        root: Edge,
        lo: i64,
        current: &mut [char],
        out: &mut Vec<String>,
        limit: usize,
    ) -> bool {
        let mut stack = vec![(root, 0)];
        while let Some((e, next)) = stack.pop() {
            match e {
                Edge::False => {}
                Edge::True => {
                    if out.len() >= limit {
                        return false;
                    }
                    out.push(current.iter().collect());
                }
                Edge::Node(i) => {
                    let node = &self.nodes[i as usize];
                    let at = (node.coord - lo) as usize;
                    if next == node.kids.len() {
                        current[at] = '*';
                        continue;
                    }
                    current[at] = symbol_char(next);
                    stack.push((e, next + 1));
                    stack.push((node.kids[next], 0));
                }
            }
        }
        true
    }

    /// Raw node table: `(coord, kids)` with kids `Err(bool)` for terminals, `Ok(index)` otherwise.
    pub fn node_table(&self) -> (Vec<(i64, Vec<NodeRef>)>, NodeRef) {
        let conv = |e: Edge| match e {
            Edge::True => Err(true),
            Edge::False => Err(false),
            Edge::Node(i) => Ok(i),
        };
        (
            self.nodes
                .iter()
                .map(|n| (n.coord, n.kids.iter().map(|&k| conv(k)).collect()))
                .collect(),
            conv(self.root),
        )
    }

    /// Rebuilds an event from a node table, re-reducing it. Children must refer to
    /// earlier nodes at strictly larger coordinates.
    pub fn from_node_table(
        probs: Arc<[Rational]>,
        table: &[(i64, Vec<Result<u32, bool>>)],
        root: Result<u32, bool>,
    ) -> Result<Self> {
        check_probs(&probs)?;
        let arity = probs.len();
        let mut b = Builder::new(arity);
        let mut built: Vec<Edge> = Vec::with_capacity(table.len());
        let resolve = |k: &Result<u32, bool>, built: &[Edge], b: &Builder| -> Result<(Edge, i64)> {
            match k {
                Err(true) => Ok((Edge::True, i64::MAX)),
                Err(false) => Ok((Edge::False, i64::MAX)),
                Ok(i) => {
                    let e = *built
                        .get(*i as usize)
                        .ok_or_else(|| Error::Parse(format!("node {i} referenced before definition")))?;
                    Ok((e, b.coord(e)))
                }
            }
        };
        for (idx, (coord, kids)) in table.iter().enumerate() {
            if kids.len() != arity {
                return Err(Error::Parse(format!(
                    "node {idx} has {} children, alphabet has {arity}",
                    kids.len()
                )));
            }
            let mut resolved = Vec::with_capacity(arity);
            for k in kids {
                let (e, c) = resolve(k, &built, &b)?;
                if let Ok(i) = k {
                    let declared = table[*i as usize].0;
                    if declared <= *coord || (c != i64::MAX && c <= *coord) {
                        return Err(Error::Parse(format!(
                            "node {idx} at coordinate {coord} has a child at coordinate {declared}"
                        )));
                    }
                }
                resolved.push(e);
            }
            built.push(b.mk(*coord, resolved));
        }
        let (root, _) = resolve(&root, &built, &b)?;
        Ok(b.finish(probs, root))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    fn fair() -> Arc<[Rational]> {
        Arc::from(vec![q!(1, 2), q!(1, 2)])
    }

    fn words(lo: i64, hi: i64, ws: &[&str]) -> CylinderEvent {
        let ws: Vec<String> = ws.iter().map(|s| s.to_string()).collect();
        CylinderEvent::from_words(fair(), Some((lo, hi)), &ws).unwrap()
    }

    #[test]
    fn window_is_trimmed() {
        let a = words(0, 1, &["00", "01"]);
        assert_eq!(a, words(0, 0, &["0"]));
        assert_eq!(a.window(), Some((0, 0)));
        let full = words(3, 4, &["00", "01", "10", "11"]);
        assert!(full.is_full());
        assert_eq!(full.window(), None);
    }

    #[test]
    fn measure_of_cylinders() {
        let probs: Arc<[Rational]> = Arc::from(vec![q!(1, 3), q!(2, 3)]);
        let a = CylinderEvent::symbol_at(probs.clone(), 0, 0).unwrap();
        assert_eq!(a.measure(), q!(1, 3));
        let b = CylinderEvent::from_words(probs, Some((0, 1)), &["01".into(), "10".into()]).unwrap();
        assert_eq!(b.measure(), q!(4, 9));
        assert_eq!(words(0, 2, &["0*1"]).measure(), q!(1, 4));
    }

    #[test]
    fn boolean_ops_are_canonical() {
        let a = words(0, 1, &["01", "10"]);
        let b = words(0, 1, &["10", "01"]);
        assert_eq!(a, b);
        let x0 = words(0, 0, &["0"]);
        let x1 = words(1, 1, &["0"]);
        let both = x0.intersection(&x1);
        assert_eq!(both, words(0, 1, &["00"]));
        assert_eq!(x0.union(&x0.complement()), CylinderEvent::full(fair()));
        assert_eq!(
            x0.symmetric_difference(&x1).complement(),
            words(0, 1, &["00", "11"])
        );
        assert!(!x0.intersects(&x0.complement()));
        assert!(x0.intersects(&x1));
    }

    #[test]
    fn shift_moves_coordinates() {
        let x0 = words(0, 0, &["0"]);
        assert_eq!(x0.shift(1), words(1, 1, &["0"]));
        assert_eq!(x0.shift(1).measure(), q!(1, 2));
    }

    #[test]
    fn bad_words_rejected() {
        let r = CylinderEvent::from_words(fair(), Some((0, 1)), &["0".into()]);
        assert!(matches!(r, Err(Error::WordLength { .. })));
        let r = CylinderEvent::from_words(fair(), Some((0, 0)), &["2".into()]);
        assert!(matches!(r, Err(Error::BadSymbol('2'))));
    }

    #[test]
    fn node_table_round_trip() {
        let a = words(-2, 3, &["01**10", "1*0*1*"]);
        let (table, root) = a.node_table();
        let back = CylinderEvent::from_node_table(fair(), &table, root).unwrap();
        assert_eq!(a, back);
        let pats = a.patterns(100).unwrap();
        let (lo, hi) = a.window().unwrap();
        assert_eq!(CylinderEvent::from_words(fair(), Some((lo, hi)), &pats).unwrap(), a);
    }

    #[test]
    fn automaton_matches_boolean_construction() {
        // No occurrence of "11" in coordinates 0..=4.
        let ev = CylinderEvent::from_automaton(
            fair(),
            0,
            4,
            false,
            |_, prev: &bool, s| {
                if *prev && s == 1 {
                    Step::Reject
                } else {
                    Step::Go(s == 1)
                }
            },
            |_| true,
        );
        let mut expected = CylinderEvent::full(fair());
        for j in 0..4 {
            let occ = CylinderEvent::word_at(fair(), j, &[1, 1]).unwrap();
            expected = expected.difference(&occ);
        }
        assert_eq!(ev, expected);
        // Fibonacci count: 13 binary words of length 5 avoid "11".
        assert_eq!(ev.measure(), q!(13, 32));
    }
}
