use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::arith::Q;
use crate::error::{Error, Result};
use crate::linear_strata::{LinearStratification, Subset};

use super::model::StratifiedModel;

/// Primitive maps between gluing bundles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arrow {
    /// phi^a from Gl^a into the space.
    Glue(usize),
    /// Phi^a_b for a < b.
    Phi(usize, usize),
    /// tau o (Phi^b_a)^-1, from b down to a < b.
    Psi(usize, usize),
    /// Shrinking the domain of a map over stratum a.
    Restrict(usize),
}

impl Arrow {
    pub fn source(self) -> usize {
        match self {
            Arrow::Glue(a) | Arrow::Phi(a, _) | Arrow::Psi(a, _) | Arrow::Restrict(a) => a,
        }
    }

    /// None for Glue, whose target is the space itself.
    pub fn target(self) -> Option<usize> {
        match self {
            Arrow::Glue(_) => None,
            Arrow::Phi(_, b) | Arrow::Psi(_, b) => Some(b),
            Arrow::Restrict(a) => Some(a),
        }
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arrow::Glue(a) => write!(f, "Glue({a})"),
            Arrow::Phi(a, b) => write!(f, "Phi({a},{b})"),
            Arrow::Psi(a, b) => write!(f, "Psi({a},{b})"),
            Arrow::Restrict(a) => write!(f, "Res({a})"),
        }
    }
}

/// A composition word, applied left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChartMap {
    source: usize,
    word: Vec<Arrow>,
}

impl Serialize for ChartMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for ChartMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "Id({})", self.source);
        }
        let parts: Vec<String> = self.word.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(" ; "))
    }
}

/// Which redex the rewriter contracts first.
#[derive(Clone, Copy, Debug)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    Random(u64),
}

/// Value of a chart word: a point of a gluing bundle or of the space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Bundle { stratum: usize, comp: Subset, z: Vec<Q> },
    Space(Vec<Q>),
}

impl ChartMap {
    pub fn identity(a: usize) -> Self {
        Self { source: a, word: Vec::new() }
    }

    pub fn glue(a: usize) -> Self {
        Self { source: a, word: vec![Arrow::Glue(a)] }
    }

    pub fn phi(a: usize, b: usize) -> Self {
        Self { source: a, word: vec![Arrow::Phi(a, b)] }
    }

    pub fn psi(b: usize, a: usize) -> Self {
        Self { source: b, word: vec![Arrow::Psi(b, a)] }
    }

    pub fn restrict(a: usize) -> Self {
        Self { source: a, word: vec![Arrow::Restrict(a)] }
    }

    /// Builds a word after checking that consecutive arrows meet and every
    /// arrow respects the order.
    pub fn from_word(strat: &LinearStratification, source: usize, word: Vec<Arrow>) -> Result<Self> {
        let mut cur = Some(source);
        for &x in &word {
            let Some(c) = cur else {
                return Err(Error::Order(format!("{x} follows Glue")));
            };
            if x.source() != c {
                return Err(Error::Order(format!("{x} does not start at {c}")));
            }
            match x {
                Arrow::Phi(a, b) if !strat.lt(a, b) => return Err(Error::Order(format!("{x}: {a} is not below {b}"))),
                Arrow::Psi(b, a) if !strat.lt(a, b) => return Err(Error::Order(format!("{x}: {a} is not below {b}"))),
                _ => {}
            }
            cur = x.target();
        }
        Ok(Self { source, word })
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> Option<usize> {
        self.word.last().map_or(Some(self.source), |x| x.target())
    }

    pub fn word(&self) -> &[Arrow] {
        &self.word
    }

    /// self first, then other.
    pub fn then(&self, other: &ChartMap) -> Result<ChartMap> {
        if self.target() != Some(other.source) {
            return Err(Error::Order(format!("cannot compose {self} with {other}")));
        }
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Ok(ChartMap { source: self.source, word })
    }

    pub fn normal_form(&self, strat: &LinearStratification) -> ChartMap {
        self.normalize(strat, Strategy::Leftmost)
    }

    pub fn is_normal(&self, strat: &LinearStratification) -> bool {
        redexes(strat, &self.word).is_empty()
    }

    pub fn normalize(&self, strat: &LinearStratification, strategy: Strategy) -> ChartMap {
        let mut rng = match strategy {
            Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        let mut word = self.word.clone();
        loop {
            let r = redexes(strat, &word);
            if r.is_empty() {
                return ChartMap { source: self.source, word };
            }
            let pick = match (&strategy, rng.as_mut()) {
                (Strategy::Leftmost, _) => r[0],
                (Strategy::Rightmost, _) => r[r.len() - 1],
                (Strategy::Random(_), Some(g)) => r[g.gen_range(0..r.len())],
                _ => r[0],
            };
            word = contract(strat, &word, pick);
        }
    }

    /// Exact evaluation. The input is a point of Gl^source: a component
    /// `comp` of the source stratum and a point z of V with z_comp nonzero.
    /// None when some step leaves its domain.
    pub fn evaluate(&self, model: &StratifiedModel, comp: Subset, z: &[Q]) -> Option<Value> {
        let strat = model.strat();
        if strat.class_of(comp) != self.source || comp & !model.support(z) != 0 {
            return None;
        }
        let mut cur = (self.source, comp);
        for &x in &self.word {
            match x {
                Arrow::Glue(_) => return Some(Value::Space(z.to_vec())),
                Arrow::Restrict(_) => {}
                Arrow::Phi(_, b) => cur = (b, model.phi_target(b, cur.1, z)?),
                Arrow::Psi(b, a) => cur = (a, model.psi_target(b, a, cur.1, z)?),
            }
        }
        Some(Value::Bundle { stratum: cur.0, comp: cur.1, z: z.to_vec() })
    }
}

/// The arrow from a to c when a, c are comparable; None when equal.
fn direct(strat: &LinearStratification, a: usize, c: usize) -> Option<Arrow> {
    if a == c {
        None
    } else if strat.lt(a, c) {
        Some(Arrow::Phi(a, c))
    } else {
        Some(Arrow::Psi(a, c))
    }
}

/// Positions i where a rule applies to the pair (i, i+1). A word that is a
/// single Restrict reports position 0.
fn redexes(strat: &LinearStratification, word: &[Arrow]) -> Vec<usize> {
    let top = strat.top();
    let mut out = Vec::new();
    if word.len() == 1 && matches!(word[0], Arrow::Restrict(_)) {
        out.push(0);
        return out;
    }
    for i in 0..word.len().saturating_sub(1) {
        let (x, y) = (word[i], word[i + 1]);
        let fires = match y {
            Arrow::Glue(_) => true,
            _ => {
                let (a, c) = (x.source(), y.target().unwrap());
                strat.comparable(a, c) || !(x == Arrow::Phi(a, top) && y == Arrow::Psi(top, c))
            }
        };
        if fires {
            out.push(i);
        }
    }
    out
}

fn contract(strat: &LinearStratification, word: &[Arrow], i: usize) -> Vec<Arrow> {
    if word.len() == 1 {
        return Vec::new();
    }
    let (x, y) = (word[i], word[i + 1]);
    let replacement: Vec<Arrow> = match y {
        Arrow::Glue(_) => vec![Arrow::Glue(x.source())],
        _ => {
            let (a, c) = (x.source(), y.target().unwrap());
            if strat.comparable(a, c) {
                direct(strat, a, c).into_iter().collect()
            } else {
                let top = strat.top();
                vec![Arrow::Phi(a, top), Arrow::Psi(top, c)]
            }
        }
    };
    let mut out = word[..i].to_vec();
    out.extend(replacement);
    out.extend_from_slice(&word[i + 2..]);
    out
}
