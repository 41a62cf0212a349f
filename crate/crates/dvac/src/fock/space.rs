//! Truncated fermionic Fock spaces.
//!
//! A basis state is a finite set of occupied modes, written with modes
//! strictly decreasing left to right:
//!
//! ```text
//! |m₁, m₂, …, m_j⟩ = ψ_{m₁} ψ_{m₂} ⋯ ψ_{m_j} |vac⟩,   m₁ > m₂ > ⋯ > m_j ≥ 0.
//! ```
//!
//! Modes are half-odd integers in the antiperiodic sector and integers in the
//! periodic one; the periodic sector has the self-paired mode ψ₀ whose square
//! is the identity, so "0 occupied" is a genuine second state at level 0.
//! The truncated space keeps states of level Σmᵢ ≤ Λ.
//!
//! Mode operators act by wedge calculus: each transposition of adjacent ψ's
//! with distinct mode sum contributes a factor −1, and ψ_{−p}ψ_p contracts to
//! x^{2p} + x^{−2p}. Everything here is the free algebra on states; level
//! truncation happens only when a result is looked up in a [`FockSpace`].

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;

use super::halfint::HalfInt;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Sector {
    /// Antiperiodic: modes in ℤ + ½.
    NS,
    /// Periodic: modes in ℤ, with the unpaired zero mode.
    R,
}

impl Sector {
    pub fn contains_mode(self, m: HalfInt) -> bool {
        match self {
            Sector::NS => !m.is_integer(),
            Sector::R => m.is_integer(),
        }
    }

    /// All modes of this sector with |m| ≤ bound, ascending.
    pub fn modes_through(self, bound: HalfInt) -> Vec<HalfInt> {
        let b = bound.doubled();
        let mut out = Vec::new();
        let start = match self {
            Sector::NS => -(b - (b % 2 == 0) as i64),
            Sector::R => -(b - b % 2),
        };
        let mut d = start;
        while d <= b {
            out.push(HalfInt::from_doubled(d));
            d += 2;
        }
        out
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sector::NS => write!(f, "ns"),
            Sector::R => write!(f, "r"),
        }
    }
}

/// Occupied-mode set, stored strictly decreasing. Ordered by (level, modes)
/// so a sorted basis lists levels from the vacuum up.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct FockState {
    modes: Vec<HalfInt>,
}

impl FockState {
    pub fn vacuum() -> Self {
        FockState { modes: Vec::new() }
    }

    /// Build from any mode list; must be distinct and nonnegative.
    pub fn from_modes(mut modes: Vec<HalfInt>) -> Self {
        modes.sort_unstable_by(|a, b| b.cmp(a));
        assert!(modes.windows(2).all(|w| w[0] > w[1]), "duplicate mode");
        assert!(modes.last().map_or(true, |m| m.doubled() >= 0), "negative mode");
        FockState { modes }
    }

    pub fn modes(&self) -> &[HalfInt] {
        &self.modes
    }

    pub fn occupation(&self) -> usize {
        self.modes.len()
    }

    pub fn level(&self) -> HalfInt {
        HalfInt::from_doubled(self.modes.iter().map(|m| m.doubled()).sum())
    }

    pub fn occupied(&self, m: HalfInt) -> bool {
        self.modes.binary_search_by(|x| m.cmp(x)).is_ok()
    }

    fn count_above(&self, m: HalfInt) -> usize {
        self.modes.iter().take_while(|&&x| x > m).count()
    }

    /// Apply ψ_m. `None` is the zero vector; otherwise the image is a single
    /// basis state with sign ±1 and, for a contraction, the paired mode p
    /// whose scalar factor x^{2p} + x^{−2p} the caller materializes in its
    /// coefficient ring.
    pub fn apply_psi(&self, m: HalfInt) -> Option<PsiImage> {
        let d = m.doubled();
        if d > 0 {
            if self.occupied(m) {
                return None;
            }
            let flips = self.count_above(m);
            let mut modes = self.modes.clone();
            modes.insert(flips, m);
            Some(PsiImage {
                state: FockState { modes },
                sign: if flips % 2 == 0 { 1 } else { -1 },
                contraction: None,
            })
        } else if d == 0 {
            // move ψ₀ past every positive mode, then toggle the zero slot
            let positives = self.count_above(HalfInt::ZERO);
            let sign = if positives % 2 == 0 { 1 } else { -1 };
            let mut modes = self.modes.clone();
            if self.occupied(HalfInt::ZERO) {
                modes.pop();
            } else {
                modes.push(HalfInt::ZERO);
            }
            Some(PsiImage { state: FockState { modes }, sign, contraction: None })
        } else {
            let p = -m;
            if !self.occupied(p) {
                return None;
            }
            let flips = self.count_above(p);
            let mut modes = self.modes.clone();
            modes.remove(flips);
            Some(PsiImage {
                state: FockState { modes },
                sign: if flips % 2 == 0 { 1 } else { -1 },
                contraction: Some(p),
            })
        }
    }
}

impl PartialOrd for FockState {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FockState {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.level().cmp(&other.level()).then_with(|| self.modes.cmp(&other.modes))
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modes.is_empty() {
            return write!(f, "|vac⟩");
        }
        write!(f, "|")?;
        for (i, m) in self.modes.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "⟩")
    }
}

pub struct PsiImage {
    pub state: FockState,
    pub sign: i32,
    /// `Some(p)`: the result carries the contraction factor x^{2p} + x^{−2p}.
    pub contraction: Option<HalfInt>,
}

/// All states of a sector with level ≤ Λ, sorted by (level, modes), with a
/// reverse index for matrix building.
pub struct FockSpace {
    pub sector: Sector,
    pub lambda: i64,
    states: Vec<FockState>,
    index: HashMap<FockState, usize>,
}

impl FockSpace {
    pub fn enumerate(sector: Sector, lambda: i64) -> Self {
        assert!(lambda >= 0);
        let budget2 = 2 * lambda;
        // candidate modes ascending; DFS over "skip or take" with remaining budget
        let modes: Vec<HalfInt> = sector
            .modes_through(HalfInt::int(lambda))
            .into_iter()
            .filter(|m| m.doubled() >= 0)
            .collect();
        let mut states = Vec::new();
        let mut chosen: Vec<HalfInt> = Vec::new();
        fn dfs(
            modes: &[HalfInt],
            i: usize,
            left2: i64,
            chosen: &mut Vec<HalfInt>,
            out: &mut Vec<FockState>,
        ) {
            if i == modes.len() {
                let mut m = chosen.clone();
                m.reverse();
                out.push(FockState { modes: m });
                return;
            }
            dfs(modes, i + 1, left2, chosen, out);
            let d = modes[i].doubled();
            if d <= left2 {
                chosen.push(modes[i]);
                dfs(modes, i + 1, left2 - d, chosen, out);
                chosen.pop();
            }
        }
        dfs(&modes, 0, budget2, &mut chosen, &mut states);
        states.sort();
        let index = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        FockSpace { sector, lambda, states, index }
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, i: usize) -> &FockState {
        &self.states[i]
    }

    pub fn states(&self) -> &[FockState] {
        &self.states
    }

    pub fn index_of(&self, s: &FockState) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Number of basis states at each level, keyed by doubled level.
    pub fn dims_by_level(&self) -> std::collections::BTreeMap<i64, usize> {
        let mut out = std::collections::BTreeMap::new();
        for s in &self.states {
            *out.entry(s.level().doubled()).or_insert(0) += 1;
        }
        out
    }
}

/// Sign rule wiring the two tensor slots together: with `Anticommuting`, an
/// operator acting on the right slot picks up (−1)^{occupation of the left
/// factor} (the usual graded tensor product); with `Commuting` the two slots
/// ignore each other.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Convention {
    Commuting,
    Anticommuting,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Convention::Commuting => write!(f, "commuting"),
            Convention::Anticommuting => write!(f, "anticommuting"),
        }
    }
}

/// Tensor product of an antiperiodic and a periodic space, truncated by
/// total level ≤ Λ. Pairs are sorted by (total level, left index, right
/// index).
pub struct PairedFockSpace {
    pub lambda: i64,
    pub ns: FockSpace,
    pub r: FockSpace,
    pairs: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

impl PairedFockSpace {
    pub fn enumerate(lambda: i64) -> Self {
        let ns = FockSpace::enumerate(Sector::NS, lambda);
        let r = FockSpace::enumerate(Sector::R, lambda);
        let mut pairs = Vec::new();
        for i in 0..ns.dim() {
            for j in 0..r.dim() {
                if ns.state(i).level().doubled() + r.state(j).level().doubled() <= 2 * lambda {
                    pairs.push((i, j));
                }
            }
        }
        pairs.sort_by_key(|&(i, j)| {
            (ns.state(i).level().doubled() + r.state(j).level().doubled(), i, j)
        });
        let index = pairs.iter().copied().enumerate().map(|(k, p)| (p, k)).collect();
        PairedFockSpace { lambda, ns, r, pairs, index }
    }

    pub fn dim(&self) -> usize {
        self.pairs.len()
    }

    pub fn pair(&self, k: usize) -> (usize, usize) {
        self.pairs[k]
    }

    pub fn index_of(&self, i: usize, j: usize) -> Option<usize> {
        self.index.get(&(i, j)).copied()
    }

    pub fn level(&self, k: usize) -> HalfInt {
        let (i, j) = self.pairs[k];
        self.ns.state(i).level() + self.r.state(j).level()
    }
}
