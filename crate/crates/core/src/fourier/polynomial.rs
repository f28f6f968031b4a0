//! Nonclassical polynomials `F_2^n -> T` in the normal form
//! `alpha + sum c_{I,j} / 2^j prod_{i in I} |x_i|  (mod 1)`
//! with `I` nonempty, `j >= 1` and `|I| + j <= d + 1`. The term `(I, j)` has
//! degree `|I| + j - 1`.
//!
//! Text format: `n d alpha ; I:j I:j ...` where `I` lists 1-based
//! coordinates separated by commas, e.g. `3 2 0/1 ; 1,2:1 3:2` is
//! `|x1||x2|/2 + |x3|/4`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::torus::TorusValue;
use crate::{Error, Result};

/// Largest number of variables for table-based operations.
pub const MAX_POLY_VARS: usize = 20;

/// A normal-form term: coordinate set `I` (bit `i` is `x_{i+1}`) and the
/// power `j` of the denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub vars: u32,
    pub j: u32,
}

impl Term {
    pub fn degree(&self) -> u32 {
        self.vars.count_ones() + self.j - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NonclassicalPolynomial {
    n: usize,
    d: usize,
    alpha: TorusValue,
    terms: BTreeSet<Term>,
}

/// A function `F_2^n -> T` as a table indexed by `x`.
pub type TorusTable = Vec<TorusValue>;

impl NonclassicalPolynomial {
    pub fn new(n: usize, d: usize, alpha: TorusValue, terms: impl IntoIterator<Item = Term>) -> Result<Self> {
        if n > MAX_POLY_VARS {
            return Err(Error::budget("polynomial variables", n, MAX_POLY_VARS));
        }
        if d > super::torus::MAX_TORUS_SHIFT as usize {
            return Err(Error::budget("polynomial degree", d, super::torus::MAX_TORUS_SHIFT));
        }
        if alpha.shift() as usize > d {
            return Err(Error::invalid(format!(
                "constant {alpha} has a denominator above 2^{d}"
            )));
        }
        let mut set = BTreeSet::new();
        for t in terms {
            if t.vars == 0 || t.j == 0 {
                return Err(Error::invalid("terms need a nonempty coordinate set and j >= 1"));
            }
            if (t.vars >> n) != 0 {
                return Err(Error::invalid(format!("term uses a coordinate beyond x_{n}")));
            }
            if t.degree() as usize > d {
                return Err(Error::invalid(format!(
                    "term with |I| = {} and j = {} exceeds degree {d}",
                    t.vars.count_ones(),
                    t.j
                )));
            }
            set.insert(t);
        }
        Ok(NonclassicalPolynomial {
            n,
            d,
            alpha,
            terms: set,
        })
    }

    pub fn zero(n: usize, d: usize) -> Result<Self> {
        Self::new(n, d, TorusValue::ZERO, [])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree_bound(&self) -> usize {
        self.d
    }

    pub fn alpha(&self) -> TorusValue {
        self.alpha
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.terms.iter()
    }

    /// Largest `|I| + j - 1` over the terms, 0 for constants.
    pub fn max_term_degree(&self) -> usize {
        self.terms.iter().map(|t| t.degree() as usize).max().unwrap_or(0)
    }

    pub fn eval(&self, x: u32) -> TorusValue {
        let mut v = self.alpha;
        for t in &self.terms {
            if x & t.vars == t.vars {
                v = v + TorusValue::new(1, t.j).expect("j is at most d + 1");
            }
        }
        v
    }

    pub fn table(&self) -> TorusTable {
        (0..1u32 << self.n).map(|x| self.eval(x)).collect()
    }

    /// Every normal-form term for `n` variables and degree `d`, in a fixed
    /// order (by `j`, then coordinate set).
    pub fn all_terms(n: usize, d: usize) -> Vec<Term> {
        let mut out = Vec::new();
        for j in 1..=d as u32 {
            for vars in 1..1u32 << n {
                let t = Term { vars, j };
                if t.degree() as usize <= d {
                    out.push(t);
                }
            }
        }
        out
    }

    /// A random normal-form polynomial: each admissible term with
    /// probability 1/2 and a random constant.
    pub fn random(n: usize, d: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let terms: Vec<Term> = Self::all_terms(n, d).into_iter().filter(|_| rng.gen()).collect();
        let alpha = TorusValue::new(rng.gen_range(0..1u64 << d.min(32)), d as u32)?;
        Self::new(n, d, alpha, terms)
    }
}

/// `(D_y f)(x) = f(x + y) - f(x)`.
pub fn derivative(f: &[TorusValue], y: u32) -> TorusTable {
    (0..f.len() as u32)
        .map(|x| f[(x ^ y) as usize] - f[x as usize])
        .collect()
}

fn table_dim(f: &[TorusValue]) -> Result<usize> {
    if !f.len().is_power_of_two() {
        return Err(Error::invalid(format!(
            "table length {} is not a power of two",
            f.len()
        )));
    }
    Ok(f.len().trailing_zeros() as usize)
}

/// How [`verify_degree`] checks that all `(d+1)`-fold derivatives vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum DegreeMode {
    /// Every tuple of directions; needs `2^(n(d+2))` evaluations within
    /// `budget`.
    Exhaustive { budget: u64 },
    /// Every multiset of `d + 1` basis directions. Exact, because
    /// `D_{y+z} = D_y + D_z + D_z D_y` expands any iterated derivative into
    /// iterated basis derivatives of at least the same order.
    Basis,
    /// Random direction tuples; can only find violations.
    Randomized { trials: u64, seed: u64 },
    /// Exhaustive when within `budget`, otherwise basis directions.
    Auto { budget: u64 },
}

/// Default evaluation budget of [`DegreeMode::Auto`].
pub const DEFAULT_DEGREE_BUDGET: u64 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub holds: bool,
    pub method: &'static str,
    /// Direction tuples examined.
    pub tuples: u64,
}

fn vanishes_all(f: &[TorusValue], dirs: &[u32], depth: usize, start: usize, repeat: bool, tuples: &mut u64) -> bool {
    if depth == 0 {
        *tuples += 1;
        return f.iter().all(TorusValue::is_zero);
    }
    for (i, &y) in dirs.iter().enumerate().skip(start) {
        let g = derivative(f, y);
        let next = if repeat { i } else { 0 };
        if !vanishes_all(&g, dirs, depth - 1, next, repeat, tuples) {
            return false;
        }
    }
    true
}

/// Whether every `(d+1)`-fold derivative of the table `f` vanishes, i.e.
/// `f` has degree at most `d`.
pub fn verify_degree_table(f: &[TorusValue], d: usize, mode: DegreeMode) -> Result<DegreeCheck> {
    let n = table_dim(f)?;
    let mut tuples = 0;
    match mode {
        DegreeMode::Exhaustive { budget } => {
            let cost = n as u32 * (d as u32 + 2);
            if cost >= 64 || 1u64 << cost > budget {
                return Err(Error::budget(
                    "exhaustive degree check",
                    format!("2^{cost} evaluations"),
                    budget,
                ));
            }
            let dirs: Vec<u32> = (0..1u32 << n).collect();
            let holds = vanishes_all(f, &dirs, d + 1, 0, false, &mut tuples);
            Ok(DegreeCheck {
                holds,
                method: "exhaustive",
                tuples,
            })
        }
        DegreeMode::Basis => {
            let dirs: Vec<u32> = (0..n).map(|i| 1u32 << i).collect();
            let holds = vanishes_all(f, &dirs, d + 1, 0, true, &mut tuples);
            Ok(DegreeCheck {
                holds,
                method: "basis",
                tuples,
            })
        }
        DegreeMode::Randomized { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let size = 1u32 << n;
            for _ in 0..trials {
                tuples += 1;
                let mut g = f.to_vec();
                for _ in 0..=d {
                    g = derivative(&g, rng.gen_range(0..size));
                }
                if !g.iter().all(TorusValue::is_zero) {
                    return Ok(DegreeCheck {
                        holds: false,
                        method: "randomized",
                        tuples,
                    });
                }
            }
            Ok(DegreeCheck {
                holds: true,
                method: "randomized",
                tuples,
            })
        }
        DegreeMode::Auto { budget } => {
            let cost = n as u32 * (d as u32 + 2);
            if cost < 64 && 1u64 << cost <= budget {
                verify_degree_table(f, d, DegreeMode::Exhaustive { budget })
            } else {
                verify_degree_table(f, d, DegreeMode::Basis)
            }
        }
    }
}

pub fn verify_degree(p: &NonclassicalPolynomial, d: usize, mode: DegreeMode) -> Result<DegreeCheck> {
    verify_degree_table(&p.table(), d, mode)
}

impl fmt::Display for NonclassicalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} ;", self.n, self.d, self.alpha)?;
        for t in &self.terms {
            let vars: Vec<String> = (0..32)
                .filter(|i| t.vars >> i & 1 == 1)
                .map(|i| (i + 1).to_string())
                .collect();
            write!(f, " {}:{}", vars.join(","), t.j)?;
        }
        Ok(())
    }
}

impl FromStr for NonclassicalPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, tail) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("missing `;` in polynomial {s:?}")))?;
        let head: Vec<&str> = head.split_whitespace().collect();
        let [n, d, alpha] = head[..] else {
            return Err(Error::Parse(format!("expected `n d alpha` before `;`, found {head:?}")));
        };
        let parse_usize = |v: &str| {
            v.parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad integer {v:?}: {e}")))
        };
        let n = parse_usize(n)?;
        let d = parse_usize(d)?;
        let alpha: TorusValue = alpha.parse()?;
        let mut terms = Vec::new();
        for item in tail.split_whitespace() {
            let (vars, j) = item
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("term {item:?} is not I:j")))?;
            let mut mask = 0u32;
            for v in vars.split(',') {
                let i = parse_usize(v)?;
                if i == 0 || i > n {
                    return Err(Error::Parse(format!("coordinate {i} outside 1..={n}")));
                }
                mask |= 1 << (i - 1);
            }
            let j = parse_usize(j)? as u32;
            terms.push(Term { vars: mask, j });
        }
        NonclassicalPolynomial::new(n, d, alpha, terms)
    }
}

impl Serialize for NonclassicalPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for NonclassicalPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> NonclassicalPolynomial {
        s.parse().unwrap()
    }

    fn tv(s: &str) -> TorusValue {
        s.parse().unwrap()
    }

    #[test]
    fn evaluation() {
        let zero = p("3 2 0 ;");
        assert!(zero.table().iter().all(TorusValue::is_zero));
        let lin = p("3 1 0 ; 1:1");
        assert_eq!(lin.eval(0b001), tv("1/2"));
        assert_eq!(lin.eval(0b110), TorusValue::ZERO);
        let q = p("3 2 0 ; 1,2:1 3:2");
        assert_eq!(q.eval(0b111), tv("3/4"));
        assert_eq!(q.to_string(), "3 2 0/1 ; 1,2:1 3:2");
        assert_eq!(p(&q.to_string()), q);
    }

    #[test]
    fn rejects_malformed() {
        assert!("3 1 0 ; 1,2:1".parse::<NonclassicalPolynomial>().is_err());
        assert!("3 1 0 ; 4:1".parse::<NonclassicalPolynomial>().is_err());
        assert!("3 1 1/4 ;".parse::<NonclassicalPolynomial>().is_err());
        assert!("3 1 0".parse::<NonclassicalPolynomial>().is_err());
        assert!("3 1 0 ; 1:0".parse::<NonclassicalPolynomial>().is_err());
    }

    #[test]
    fn derivatives() {
        let c = vec![tv("1/4"); 8];
        assert!(derivative(&c, 5).iter().all(TorusValue::is_zero));
        let lin = p("3 1 0 ; 1:1");
        let modes = [
            DegreeMode::Exhaustive { budget: 1 << 20 },
            DegreeMode::Basis,
            DegreeMode::Auto {
                budget: DEFAULT_DEGREE_BUDGET,
            },
        ];
        for mode in modes {
            assert!(verify_degree(&lin, 1, mode).unwrap().holds);
            assert!(verify_degree(&lin, 2, mode).unwrap().holds);
            assert!(!verify_degree(&lin, 0, mode).unwrap().holds);
        }
        // |x1|/4 is nonclassical of degree 1 + 2 - 1 = 2
        let quarter = p("2 2 0 ; 1:2");
        assert!(verify_degree(&quarter, 2, DegreeMode::Basis).unwrap().holds);
        assert!(!verify_degree(&quarter, 1, DegreeMode::Basis).unwrap().holds);
        assert!(
            !verify_degree(&quarter, 1, DegreeMode::Randomized { trials: 200, seed: 1 })
                .unwrap()
                .holds
        );
    }

    #[test]
    fn exhaustive_and_basis_agree() {
        for seed in 0..30 {
            let n = 3;
            let d = 1 + (seed as usize % 3);
            let q = NonclassicalPolynomial::random(n, d, seed).unwrap();
            for k in 0..=d {
                let a = verify_degree(&q, k, DegreeMode::Exhaustive { budget: 1 << 20 })
                    .unwrap()
                    .holds;
                let b = verify_degree(&q, k, DegreeMode::Basis).unwrap().holds;
                assert_eq!(a, b, "{q} at {k}");
                assert_eq!(a, k >= q.max_term_degree(), "{q} at {k}");
            }
        }
    }

    #[test]
    fn exhaustive_budget() {
        let q = p("6 4 0 ; 1:1");
        let err = verify_degree(&q, 4, DegreeMode::Exhaustive { budget: 1 << 20 }).unwrap_err();
        assert!(err.is_budget());
        assert_eq!(
            verify_degree(&q, 4, DegreeMode::Auto { budget: 1 << 20 })
                .unwrap()
                .method,
            "basis"
        );
    }
}
