//! Point-by-point search over matroid tables against a compiled set of
//! forbidden configurations.
//!
//! Every forbidden pattern `N` of dimension `d <= n` is compiled into one
//! `(care, value)` mask pair per distinct image of an injection
//! `F_2^d -> F_2^n`; a table `a` contains that instance iff
//! `a & care == value`. Points are assigned in increasing order. A constraint
//! is checked once its largest point is assigned and is dropped ("dead") as
//! soon as one of its points disagrees. When no live constraint remains, all
//! completions of the current prefix are members and are counted in one step.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use rayon::prelude::*;

use crate::gf2::{for_each_injection, num_points};
use crate::matroid::Pattern;
use crate::{Error, Result};

/// Largest dimension the engine handles (one bit per point in a `u64`).
pub const MAX_ENGINE_DIM: usize = 6;

/// How many leading free points the parallel counter splits on.
const SPLIT_BITS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Constraint {
    pub care: u64,
    pub value: u64,
}

pub(crate) struct Engine {
    points: usize,
    constraints: Vec<Constraint>,
    /// Constraints indexed by their largest cared point.
    by_top: Vec<Vec<u32>>,
    /// Constraints indexed by every cared point.
    by_point: Vec<Vec<u32>>,
    /// Some constraint has no cared point, so every table is excluded.
    always_violated: Option<u32>,
    node_budget: u64,
}

/// A dead end of the search: the first `len` points, with values `bits`,
/// already contain the instance `constraint`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Leaf {
    pub len: usize,
    pub bits: u64,
    pub constraint: Constraint,
}

struct State {
    a: u64,
    dead: Vec<bool>,
    alive: usize,
    nodes: u64,
    undo: Vec<u32>,
}

trait Visitor {
    fn members(&mut self, bits: u64, len: usize, points: usize) -> ControlFlow<()>;
    fn violation(&mut self, _leaf: Leaf) {}
}

struct Counter(u128);

impl Visitor for Counter {
    fn members(&mut self, _bits: u64, len: usize, points: usize) -> ControlFlow<()> {
        self.0 += 1u128 << (points - len);
        ControlFlow::Continue(())
    }
}

struct FirstMember(Option<u64>);

impl Visitor for FirstMember {
    fn members(&mut self, bits: u64, _len: usize, _points: usize) -> ControlFlow<()> {
        self.0 = Some(bits);
        ControlFlow::Break(())
    }
}

struct Transcript {
    members: u128,
    leaves: Vec<Leaf>,
}

impl Visitor for Transcript {
    fn members(&mut self, _bits: u64, len: usize, points: usize) -> ControlFlow<()> {
        self.members += 1u128 << (points - len);
        ControlFlow::Continue(())
    }

    fn violation(&mut self, leaf: Leaf) {
        self.leaves.push(leaf);
    }
}

enum Abort {
    Budget,
    Stop,
}

impl Engine {
    pub fn new(n: usize, forbidden: &[Pattern]) -> Result<Engine> {
        if n > MAX_ENGINE_DIM {
            return Err(Error::budget(
                "matroid table search",
                format!("dimension {n}"),
                MAX_ENGINE_DIM,
            ));
        }
        let points = num_points(n) as usize;
        let mut set = BTreeSet::new();
        for pat in forbidden {
            let d = pat.dim();
            if d > n {
                continue;
            }
            let cells: Vec<(usize, bool)> = (1..=pat.num_points() as u32)
                .filter_map(|x| pat.get(x).as_bool().map(|b| (x as usize, b)))
                .collect();
            if cells.is_empty() {
                set.insert((0u64, 0u64));
                continue;
            }
            let mut table = vec![0u32; 1 << d];
            for_each_injection(d, n, |images| {
                for (i, &b) in images.iter().enumerate() {
                    let half = 1 << i;
                    for y in 0..half {
                        table[half + y] = b ^ table[y];
                    }
                }
                let (mut care, mut value) = (0u64, 0u64);
                for &(x, b) in &cells {
                    let bit = 1u64 << (table[x] - 1);
                    care |= bit;
                    if b {
                        value |= bit;
                    }
                }
                set.insert((care, value));
            })?;
        }
        let constraints: Vec<Constraint> = set
            .into_iter()
            .map(|(care, value)| Constraint { care, value })
            .collect();
        let mut by_top = vec![Vec::new(); points];
        let mut by_point = vec![Vec::new(); points];
        let mut always_violated = None;
        for (i, c) in constraints.iter().enumerate() {
            if c.care == 0 {
                always_violated.get_or_insert(i as u32);
                continue;
            }
            by_top[63 - c.care.leading_zeros() as usize].push(i as u32);
            let mut rest = c.care;
            while rest != 0 {
                by_point[rest.trailing_zeros() as usize].push(i as u32);
                rest &= rest - 1;
            }
        }
        Ok(Engine {
            points,
            constraints,
            by_top,
            by_point,
            always_violated,
            node_budget: u64::MAX,
        })
    }

    pub fn with_node_budget(mut self, budget: u64) -> Engine {
        self.node_budget = budget;
        self
    }

    pub fn points(&self) -> usize {
        self.points
    }

    fn check_prefix(&self, prefix: &[bool]) -> Result<()> {
        if prefix.len() > self.points {
            return Err(Error::invalid(format!(
                "prefix of {} points in a space with {}",
                prefix.len(),
                self.points
            )));
        }
        Ok(())
    }

    fn run<V: Visitor>(&self, prefix: &[bool], v: &mut V) -> Result<(), Abort> {
        if let Some(c) = self.always_violated {
            v.violation(Leaf {
                len: 0,
                bits: 0,
                constraint: self.constraints[c as usize],
            });
            return Ok(());
        }
        let mut st = State {
            a: 0,
            dead: vec![false; self.constraints.len()],
            alive: self.constraints.len(),
            nodes: 0,
            undo: Vec::new(),
        };
        self.dfs(&mut st, 0, prefix, v)
    }

    fn dfs<V: Visitor>(&self, st: &mut State, i: usize, prefix: &[bool], v: &mut V) -> Result<(), Abort> {
        st.nodes += 1;
        if st.nodes > self.node_budget {
            return Err(Abort::Budget);
        }
        if st.alive == 0 || i == self.points {
            let mut bits = st.a;
            // remaining prefix points are forced, the rest are free
            let mut len = i;
            while len < prefix.len() {
                if prefix[len] {
                    bits |= 1 << len;
                }
                len += 1;
            }
            return match v.members(bits, len, self.points) {
                ControlFlow::Continue(()) => Ok(()),
                ControlFlow::Break(()) => Err(Abort::Stop),
            };
        }
        let choices: &[bool] = match prefix.get(i) {
            Some(false) => &[false],
            Some(true) => &[true],
            None => &[false, true],
        };
        'choice: for &b in choices {
            let a = if b { st.a | 1 << i } else { st.a };
            for &c in &self.by_top[i] {
                let con = self.constraints[c as usize];
                if a & con.care == con.value {
                    v.violation(Leaf {
                        len: i + 1,
                        bits: a,
                        constraint: con,
                    });
                    continue 'choice;
                }
            }
            let mark = st.undo.len();
            for &c in &self.by_point[i] {
                let ci = c as usize;
                if !st.dead[ci] && (self.constraints[ci].value >> i & 1 == 1) != b {
                    st.dead[ci] = true;
                    st.undo.push(c);
                }
            }
            let killed = st.undo.len() - mark;
            st.alive -= killed;
            let saved = st.a;
            st.a = a;
            let r = self.dfs(st, i + 1, prefix, v);
            st.a = saved;
            st.alive += killed;
            for c in st.undo.drain(mark..) {
                st.dead[c as usize] = false;
            }
            r?;
        }
        Ok(())
    }

    fn budget_error(&self) -> Error {
        Error::budget("search nodes", "more", self.node_budget)
    }

    /// Number of member tables extending `prefix` (values of the first
    /// points, in order).
    pub fn count(&self, prefix: &[bool]) -> Result<u128> {
        self.check_prefix(prefix)?;
        let split = SPLIT_BITS.min(self.points - prefix.len());
        let counts: Vec<Result<u128, Abort>> = (0..1u32 << split)
            .into_par_iter()
            .map(|branch| {
                let mut p = prefix.to_vec();
                p.extend((0..split).map(|j| branch >> j & 1 == 1));
                let mut c = Counter(0);
                self.run(&p, &mut c).map(|_| c.0)
            })
            .collect();
        let mut total = 0u128;
        for c in counts {
            match c {
                Ok(c) => total += c,
                Err(Abort::Budget) => return Err(self.budget_error()),
                Err(Abort::Stop) => unreachable!("counting never stops early"),
            }
        }
        Ok(total)
    }

    /// The first member extending `prefix` in the search order, with free
    /// points beyond the decision point set to 0.
    pub fn find_member(&self, prefix: &[bool]) -> Result<Option<u64>> {
        self.check_prefix(prefix)?;
        let mut f = FirstMember(None);
        match self.run(prefix, &mut f) {
            Ok(()) | Err(Abort::Stop) => Ok(f.0),
            Err(Abort::Budget) => Err(self.budget_error()),
        }
    }

    /// Member count plus every refutation leaf of the search tree below
    /// `prefix`, in search order.
    pub fn transcript(&self, prefix: &[bool]) -> Result<(u128, Vec<Leaf>)> {
        self.check_prefix(prefix)?;
        let mut t = Transcript {
            members: 0,
            leaves: Vec::new(),
        };
        match self.run(prefix, &mut t) {
            Ok(()) => Ok((t.members, t.leaves)),
            Err(Abort::Budget) => Err(self.budget_error()),
            Err(Abort::Stop) => unreachable!("transcripts never stop early"),
        }
    }
}

/// Bits of a prefix of a table, point 1 first.
pub(crate) fn prefix_bits(bits: u64, len: usize) -> Vec<bool> {
    (0..len).map(|i| bits >> i & 1 == 1).collect()
}
