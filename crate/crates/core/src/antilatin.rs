//! Anti-Latin squares and the decodability of the relay codes built from
//! pairs of them.
//!
//! A `d × d` table over `Z_d` is anti-Latin when every row and every column
//! repeats some value. A pair `(A, B)` drives the relay as
//! `Y3 = a[Y1][Y2], Y4 = b[Y1][Y2]`; with `Y1 = L, Y2 = M + L` the destination
//! sees `(a[l][l+m], b[l][l+m])`, and the pair is decodable when that view
//! always determines `m`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::radix::{pow, unpack};

/// Largest square size the searches accept.
pub const MAX_SEARCH_D: u32 = 6;

/// Largest size with an exhaustive catalog (`3^9` tables).
pub const MAX_EXACT_D: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AntiLatinError {
    /// Row count and row lengths disagree.
    NotSquare,
    Empty,
    ValueOutOfRange { value: u32, d: u32 },
    NotAntiLatin,
    SizeMismatch { left: u32, right: u32 },
    ParameterOutOfRange { name: &'static str, value: u32, d: u32 },
    InvalidSize(u32),
    /// The exhaustive method only covers `d <= MAX_EXACT_D`.
    ExactUnavailable(u32),
    /// The randomized search spent its whole budget without a hit.
    BudgetExhausted { iterations: u64 },
}

impl fmt::Display for AntiLatinError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AntiLatinError::NotSquare => write!(f, "table is not square"),
            AntiLatinError::Empty => write!(f, "table is empty"),
            AntiLatinError::ValueOutOfRange { value, d } => {
                write!(f, "entry {value} outside Z_{d}")
            }
            AntiLatinError::NotAntiLatin => {
                write!(f, "some row or column has no repeated entry")
            }
            AntiLatinError::SizeMismatch { left, right } => {
                write!(f, "squares of sizes {left} and {right}")
            }
            AntiLatinError::ParameterOutOfRange { name, value, d } => {
                write!(f, "{name}={value} outside Z_{d}")
            }
            AntiLatinError::InvalidSize(d) => {
                write!(f, "size {d} outside 2..={MAX_SEARCH_D}")
            }
            AntiLatinError::ExactUnavailable(d) => {
                write!(f, "exact search only available for d <= {MAX_EXACT_D}, got {d}")
            }
            AntiLatinError::BudgetExhausted { iterations } => {
                write!(f, "search budget of {iterations} iterations exhausted")
            }
        }
    }
}

impl core::error::Error for AntiLatinError {}

fn has_duplicate(values: impl Iterator<Item = u32>, d: u32) -> bool {
    let mut seen = [false; 64];
    let mut seen_big = vec![];
    if d as usize > seen.len() {
        seen_big = vec![false; d as usize];
    }
    let seen: &mut [bool] = if seen_big.is_empty() { &mut seen } else { &mut seen_big };
    for v in values {
        if core::mem::replace(&mut seen[v as usize], true) {
            return true;
        }
    }
    false
}

fn flat_is_anti_latin(d: u32, entries: &[u32]) -> bool {
    let n = d as usize;
    (0..n).all(|i| has_duplicate(entries[i * n..(i + 1) * n].iter().copied(), d))
        && (0..n).all(|j| has_duplicate((0..n).map(|i| entries[i * n + j]), d))
}

/// True iff every row and every column of `rows` contains a repeated value.
pub fn is_anti_latin(rows: &[Vec<u32>]) -> Result<bool, AntiLatinError> {
    let (d, entries) = flatten(rows)?;
    Ok(flat_is_anti_latin(d, &entries))
}

fn flatten(rows: &[Vec<u32>]) -> Result<(u32, Vec<u32>), AntiLatinError> {
    let n = rows.len();
    if n == 0 {
        return Err(AntiLatinError::Empty);
    }
    if rows.iter().any(|r| r.len() != n) {
        return Err(AntiLatinError::NotSquare);
    }
    let d = n as u32;
    let entries: Vec<u32> = rows.iter().flatten().copied().collect();
    if let Some(&value) = entries.iter().find(|&&v| v >= d) {
        return Err(AntiLatinError::ValueOutOfRange { value, d });
    }
    Ok((d, entries))
}

/// A validated `d × d` anti-Latin square over `Z_d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AntiLatinSquare {
    d: u32,
    entries: Vec<u32>,
    /// `shifted[l * d + m] = a[l][l + m]`, the cell the relay reads for
    /// scramble `l` and message `m`.
    shifted: Vec<u32>,
}

impl AntiLatinSquare {
    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self, AntiLatinError> {
        let (d, entries) = flatten(rows)?;
        Self::new(d, entries)
    }

    /// Row-major entries.
    pub fn new(d: u32, entries: Vec<u32>) -> Result<Self, AntiLatinError> {
        if d == 0 {
            return Err(AntiLatinError::Empty);
        }
        if entries.len() != (d * d) as usize {
            return Err(AntiLatinError::NotSquare);
        }
        if let Some(&value) = entries.iter().find(|&&v| v >= d) {
            return Err(AntiLatinError::ValueOutOfRange { value, d });
        }
        if !flat_is_anti_latin(d, &entries) {
            return Err(AntiLatinError::NotAntiLatin);
        }
        Ok(Self::new_unchecked(d, entries))
    }

    fn new_unchecked(d: u32, entries: Vec<u32>) -> Self {
        let n = d as usize;
        let shifted = (0..n * n)
            .map(|idx| {
                let (l, m) = (idx / n, idx % n);
                entries[l * n + (l + m) % n]
            })
            .collect();
        AntiLatinSquare { d, entries, shifted }
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.entries[row * self.d as usize + col]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.d as usize).map(<[u32]>::to_vec).collect()
    }

    /// Applies the value relabeling `perm` (a permutation of `Z_d`) to every
    /// entry.
    pub fn relabel(&self, perm: &[u32]) -> Result<Self, AntiLatinError> {
        Self::new(self.d, self.entries.iter().map(|&v| perm[v as usize]).collect())
    }
}

/// The two squares of the `d = 3` code in the reference construction.
pub fn reference_pair_d3() -> (AntiLatinSquare, AntiLatinSquare) {
    let a = AntiLatinSquare::new(3, vec![0, 1, 0, 1, 1, 2, 0, 2, 2]).expect("anti-Latin");
    let b = AntiLatinSquare::new(3, vec![0, 2, 2, 0, 1, 0, 1, 1, 2]).expect("anti-Latin");
    (a, b)
}

/// The two squares of the `d = 4` code in the reference construction.
pub fn reference_pair_d4() -> (AntiLatinSquare, AntiLatinSquare) {
    let a = AntiLatinSquare::new(4, vec![0, 1, 3, 3, 0, 1, 2, 0, 1, 1, 2, 3, 0, 2, 2, 3])
        .expect("anti-Latin");
    let b = AntiLatinSquare::new(4, vec![0, 0, 1, 0, 1, 1, 1, 2, 3, 2, 2, 2, 3, 0, 3, 3])
        .expect("anti-Latin");
    (a, b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XiSet {
    pub z: u32,
    pub m: u32,
    /// Sorted, deduplicated.
    pub members: Vec<u32>,
}

fn same_size(a: &AntiLatinSquare, b: &AntiLatinSquare) -> Result<u32, AntiLatinError> {
    if a.d != b.d {
        return Err(AntiLatinError::SizeMismatch {
            left: a.d,
            right: b.d,
        });
    }
    Ok(a.d)
}

/// `Ξ_{z,m} = { b[l][l+m] : a[l][l+m] = z }`: the values `Y4` can take when
/// `Y3 = z` and the message is `m`.
pub fn xi_set(a: &AntiLatinSquare, b: &AntiLatinSquare, z: u32, m: u32) -> Result<XiSet, AntiLatinError> {
    let d = same_size(a, b)?;
    for (name, value) in [("z", z), ("m", m)] {
        if value >= d {
            return Err(AntiLatinError::ParameterOutOfRange { name, value, d });
        }
    }
    let n = d as usize;
    let mut members: Vec<u32> = (0..n)
        .filter(|&l| a.shifted[l * n + m as usize] == z)
        .map(|l| b.shifted[l * n + m as usize])
        .collect();
    members.sort_unstable();
    members.dedup();
    Ok(XiSet { z, m, members })
}

fn decodable_unchecked(a: &AntiLatinSquare, b: &AntiLatinSquare) -> bool {
    let n = a.d as usize;
    let mut owner = [u8::MAX; (MAX_SEARCH_D * MAX_SEARCH_D) as usize];
    let mut owner_big = vec![];
    let owner: &mut [u8] = if n * n <= owner.len() {
        &mut owner
    } else {
        owner_big = vec![u8::MAX; n * n];
        &mut owner_big
    };
    for idx in 0..n * n {
        let key = a.shifted[idx] as usize * n + b.shifted[idx] as usize;
        let m = (idx % n) as u8;
        match owner[key] {
            u8::MAX => owner[key] = m,
            prev if prev != m => return false,
            _ => {}
        }
    }
    true
}

fn one_to_one_unchecked(a: &AntiLatinSquare, b: &AntiLatinSquare) -> bool {
    let n = a.d as usize;
    let mut seen = vec![false; n * n];
    a.entries
        .iter()
        .zip(&b.entries)
        .all(|(&x, &y)| !core::mem::replace(&mut seen[x as usize * n + y as usize], true))
}

/// True iff `Ξ_{z,m} ∩ Ξ_{z,m'} = ∅` for every `z` and `m ≠ m'`, i.e. the
/// destination view `(Y3, Y4)` determines the message.
pub fn is_decodable_pair(a: &AntiLatinSquare, b: &AntiLatinSquare) -> Result<bool, AntiLatinError> {
    same_size(a, b)?;
    Ok(decodable_unchecked(a, b))
}

/// True iff `(Y1, Y2) ↦ (a[Y1][Y2], b[Y1][Y2])` is injective.
pub fn is_one_to_one_pair(a: &AntiLatinSquare, b: &AntiLatinSquare) -> Result<bool, AntiLatinError> {
    same_size(a, b)?;
    Ok(one_to_one_unchecked(a, b))
}

/// Every anti-Latin square of size `d`, in lexicographic order of the
/// row-major entries. Only feasible for `d <= MAX_EXACT_D`.
pub fn catalog(d: u32) -> Result<Vec<AntiLatinSquare>, AntiLatinError> {
    if d < 2 {
        return Err(AntiLatinError::InvalidSize(d));
    }
    if d > MAX_EXACT_D {
        return Err(AntiLatinError::ExactUnavailable(d));
    }
    let cells = (d * d) as usize;
    let mut entries = vec![0u32; cells];
    let mut out = Vec::new();
    for idx in 0..pow(d, cells) {
        unpack(idx, d, &mut entries);
        if flat_is_anti_latin(d, &entries) {
            out.push(AntiLatinSquare::new_unchecked(d, entries.clone()));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairSearch {
    Found(AntiLatinSquare, AntiLatinSquare),
    /// Exhaustive proof that no decodable pair exists.
    NotFound {
        tables_examined: usize,
        anti_latin_squares: usize,
        pairs_checked: usize,
    },
}

/// Which pairwise predicate a search targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairMode {
    Decodable,
    OneToOne,
}

impl PairMode {
    fn holds(self, a: &AntiLatinSquare, b: &AntiLatinSquare) -> bool {
        match self {
            PairMode::Decodable => decodable_unchecked(a, b),
            PairMode::OneToOne => one_to_one_unchecked(a, b),
        }
    }
}

fn check_search_size(d: u32) -> Result<(), AntiLatinError> {
    if !(2..=MAX_SEARCH_D).contains(&d) {
        return Err(AntiLatinError::InvalidSize(d));
    }
    Ok(())
}

/// Finds a decodable pair of `d × d` anti-Latin squares.
///
/// `d <= 3` is settled by exhaustive enumeration (for `d = 2` this proves
/// that none exists); larger `d` uses a seeded hill-climb capped at `budget`
/// single-cell mutations.
pub fn find_decodable_pair(d: u32, seed: u64, budget: u64) -> Result<PairSearch, AntiLatinError> {
    check_search_size(d)?;
    if d <= MAX_EXACT_D {
        let squares = catalog(d)?;
        let mut pairs_checked = 0;
        for a in &squares {
            for b in &squares {
                pairs_checked += 1;
                if decodable_unchecked(a, b) {
                    return Ok(PairSearch::Found(a.clone(), b.clone()));
                }
            }
        }
        return Ok(PairSearch::NotFound {
            tables_examined: pow(d, (d * d) as usize),
            anti_latin_squares: squares.len(),
            pairs_checked,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut climber = Climber::new(d, PairMode::Decodable);
    let members: Vec<AntiLatinSquare> = Vec::new();
    match climber.search_pair(&mut rng, budget, &members) {
        Some((a, b)) => Ok(PairSearch::Found(a, b)),
        None => Err(AntiLatinError::BudgetExhausted { iterations: budget }),
    }
}

/// Number of row/column lines without a repeated value.
fn latin_lines(d: usize, t: &[u32]) -> u64 {
    let rows = (0..d)
        .filter(|&i| !has_duplicate(t[i * d..(i + 1) * d].iter().copied(), d as u32))
        .count();
    let cols = (0..d)
        .filter(|&j| !has_duplicate((0..d).map(|i| t[i * d + j]), d as u32))
        .count();
    (rows + cols) as u64
}

/// Number of cell pairs that break the predicate for the pair `(a, b)`.
fn pair_conflicts(d: usize, a: &[u32], b: &[u32], mode: PairMode) -> u64 {
    let mut count = vec![0u64; d * d];
    let mut by_message = vec![0u64; d * d * d];
    for l in 0..d {
        for m in 0..d {
            let (row, col) = match mode {
                PairMode::Decodable => (l, (l + m) % d),
                PairMode::OneToOne => (l, m),
            };
            let key = a[row * d + col] as usize * d + b[row * d + col] as usize;
            count[key] += 1;
            by_message[key * d + m] += 1;
        }
    }
    let pairs = |n: u64| n * n.saturating_sub(1) / 2;
    match mode {
        PairMode::OneToOne => count.iter().map(|&n| pairs(n)).sum(),
        PairMode::Decodable => {
            let same: u64 = by_message.iter().map(|&n| pairs(n)).sum();
            count.iter().map(|&n| pairs(n)).sum::<u64>() - same
        }
    }
}

/// Single-cell mutation hill-climb with random restarts.
struct Climber {
    d: usize,
    mode: PairMode,
    iterations: u64,
}

impl Climber {
    const RESTART_AFTER: u64 = 4000;

    fn new(d: u32, mode: PairMode) -> Self {
        Climber {
            d: d as usize,
            mode,
            iterations: 0,
        }
    }

    fn random_table(&self, rng: &mut ChaCha8Rng) -> Vec<u32> {
        (0..self.d * self.d).map(|_| rng.gen_range(0..self.d as u32)).collect()
    }

    /// Cost of candidate `c` joining `members` (and `partner`, if any).
    fn cost(&self, c: &[u32], partner: Option<&[u32]>, members: &[AntiLatinSquare]) -> u64 {
        let mut cost = 10 * latin_lines(self.d, c);
        if let Some(p) = partner {
            cost += 10 * latin_lines(self.d, p) + pair_conflicts(self.d, p, c, self.mode);
        }
        for s in members {
            cost += pair_conflicts(self.d, s.entries(), c, self.mode);
            if let Some(p) = partner {
                cost += pair_conflicts(self.d, s.entries(), p, self.mode);
            }
        }
        cost
    }

    /// Looks for a pair compatible with each other and with `members`.
    fn search_pair(
        &mut self,
        rng: &mut ChaCha8Rng,
        budget: u64,
        members: &[AntiLatinSquare],
    ) -> Option<(AntiLatinSquare, AntiLatinSquare)> {
        let cells = self.d * self.d;
        while self.iterations < budget {
            let mut a = self.random_table(rng);
            let mut b = self.random_table(rng);
            let mut cost = self.cost(&b, Some(&a), members);
            let mut stale = 0;
            while self.iterations < budget && stale < Self::RESTART_AFTER {
                if cost == 0 {
                    let sa = AntiLatinSquare::new(self.d as u32, a).ok()?;
                    let sb = AntiLatinSquare::new(self.d as u32, b).ok()?;
                    return Some((sa, sb));
                }
                self.iterations += 1;
                let which = rng.gen_range(0..2);
                let cell = rng.gen_range(0..cells);
                let value = rng.gen_range(0..self.d as u32);
                let t = if which == 0 { &mut a } else { &mut b };
                let old = core::mem::replace(&mut t[cell], value);
                let next = self.cost(&b, Some(&a), members);
                if next <= cost {
                    stale = if next < cost { 0 } else { stale + 1 };
                    cost = next;
                } else {
                    let t = if which == 0 { &mut a } else { &mut b };
                    t[cell] = old;
                    stale += 1;
                }
            }
        }
        None
    }

    /// Looks for one square compatible with every member.
    fn search_one(&mut self, rng: &mut ChaCha8Rng, budget: u64, members: &[AntiLatinSquare]) -> Option<AntiLatinSquare> {
        let cells = self.d * self.d;
        while self.iterations < budget {
            let mut c = self.random_table(rng);
            let mut cost = self.cost(&c, None, members);
            let mut stale = 0;
            while self.iterations < budget && stale < Self::RESTART_AFTER {
                if cost == 0 {
                    return AntiLatinSquare::new(self.d as u32, c).ok();
                }
                self.iterations += 1;
                let cell = rng.gen_range(0..cells);
                let value = rng.gen_range(0..self.d as u32);
                let old = core::mem::replace(&mut c[cell], value);
                let next = self.cost(&c, None, members);
                if next <= cost {
                    stale = if next < cost { 0 } else { stale + 1 };
                    cost = next;
                } else {
                    c[cell] = old;
                    stale += 1;
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMethod {
    Exact,
    Heuristic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutualSet {
    pub d: u32,
    pub mode: PairMode,
    /// Size of the best set found.
    pub size: usize,
    /// Squares of the best set; every pair satisfies the mode's predicate.
    pub certificate: Vec<AntiLatinSquare>,
    /// True when `size` is proven maximal.
    pub exact: bool,
    /// The heuristic spent its budget without finding a single compatible
    /// pair; the certificate is then one square.
    pub budget_exhausted: bool,
}

/// Largest set of anti-Latin squares whose pairs all satisfy `mode`.
///
/// Singletons satisfy the pairwise condition vacuously, so the answer is
/// at least 1. The exact method builds the compatibility graph over the full
/// catalog (`d <= 3`) and runs a branch-and-bound maximum clique search; the
/// heuristic grows a set by seeded hill-climbing until `budget` mutations
/// are spent and only reports a lower bound.
pub fn max_mutual_set(
    d: u32,
    mode: PairMode,
    method: SearchMethod,
    seed: u64,
    budget: u64,
) -> Result<MutualSet, AntiLatinError> {
    check_search_size(d)?;
    match method {
        SearchMethod::Exact => {
            let squares = catalog(d)?;
            let graph = CompatibilityGraph::build(&squares, mode);
            let clique = graph.maximum_clique();
            let certificate: Vec<AntiLatinSquare> = clique.iter().map(|&v| squares[v].clone()).collect();
            Ok(MutualSet {
                d,
                mode,
                size: certificate.len(),
                certificate,
                exact: true,
                budget_exhausted: false,
            })
        }
        SearchMethod::Heuristic => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut climber = Climber::new(d, mode);
            let mut members: Vec<AntiLatinSquare> = Vec::new();
            match climber.search_pair(&mut rng, budget, &members) {
                Some((a, b)) => {
                    members.push(a);
                    members.push(b);
                }
                None => {
                    // A single square is always a valid set.
                    let s = climber
                        .search_one(&mut rng, u64::MAX, &members)
                        .expect("an anti-Latin square always exists");
                    return Ok(MutualSet {
                        d,
                        mode,
                        size: 1,
                        certificate: vec![s],
                        exact: false,
                        budget_exhausted: true,
                    });
                }
            }
            while let Some(s) = climber.search_one(&mut rng, budget, &members) {
                if members.contains(&s) {
                    continue;
                }
                members.push(s);
            }
            Ok(MutualSet {
                d,
                mode,
                size: members.len(),
                certificate: members,
                exact: false,
                budget_exhausted: false,
            })
        }
    }
}

/// True iff every pair of distinct members satisfies `mode`.
pub fn is_mutual(squares: &[AntiLatinSquare], mode: PairMode) -> bool {
    squares.iter().enumerate().all(|(i, a)| {
        squares[i + 1..]
            .iter()
            .all(|b| a.d == b.d && mode.holds(a, b))
    })
}

/// Pair counts over a full catalog, for comparing the two predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairStatistics {
    pub squares: usize,
    /// Unordered pairs of distinct squares.
    pub decodable_pairs: usize,
    pub one_to_one_pairs: usize,
    pub decodable_not_one_to_one: usize,
    /// One-to-one pairs that fail decodability; must be zero.
    pub one_to_one_not_decodable: usize,
}

pub fn pair_statistics(d: u32) -> Result<PairStatistics, AntiLatinError> {
    let squares = catalog(d)?;
    let mut stats = PairStatistics {
        squares: squares.len(),
        decodable_pairs: 0,
        one_to_one_pairs: 0,
        decodable_not_one_to_one: 0,
        one_to_one_not_decodable: 0,
    };
    for (i, a) in squares.iter().enumerate() {
        for b in &squares[i + 1..] {
            let dec = decodable_unchecked(a, b);
            let oto = one_to_one_unchecked(a, b);
            stats.decodable_pairs += dec as usize;
            stats.one_to_one_pairs += oto as usize;
            stats.decodable_not_one_to_one += (dec && !oto) as usize;
            stats.one_to_one_not_decodable += (oto && !dec) as usize;
        }
    }
    Ok(stats)
}

/// Undirected graph on a square catalog, as adjacency bitsets.
struct CompatibilityGraph {
    n: usize,
    words: usize,
    adjacency: Vec<u64>,
}

impl CompatibilityGraph {
    fn build(squares: &[AntiLatinSquare], mode: PairMode) -> Self {
        let n = squares.len();
        let words = n.div_ceil(64);
        let mut adjacency = vec![0u64; n * words];
        for i in 0..n {
            for j in i + 1..n {
                if mode.holds(&squares[i], &squares[j]) {
                    adjacency[i * words + j / 64] |= 1 << (j % 64);
                    adjacency[j * words + i / 64] |= 1 << (i % 64);
                }
            }
        }
        CompatibilityGraph { n, words, adjacency }
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    fn degree(&self, v: usize) -> u32 {
        self.adjacency[v * self.words..(v + 1) * self.words]
            .iter()
            .map(|w| w.count_ones())
            .sum()
    }

    /// Branch and bound with a greedy-coloring bound. Vertices are tried in
    /// a fixed order, so the returned clique is deterministic.
    fn maximum_clique(&self) -> Vec<usize> {
        if self.n == 0 {
            return Vec::new();
        }
        // Non-isolated vertices only; an isolated vertex is a clique of one.
        let mut order: Vec<usize> = (0..self.n).filter(|&v| self.degree(v) > 0).collect();
        order.sort_by_key(|&v| core::cmp::Reverse(self.degree(v)));
        let mut best = vec![0usize];
        let mut current = Vec::new();
        self.expand(order, &mut current, &mut best);
        best.sort_unstable();
        best
    }

    fn expand(&self, candidates: Vec<usize>, current: &mut Vec<usize>, best: &mut Vec<usize>) {
        let (ordered, colors) = self.color_sort(&candidates);
        for i in (0..ordered.len()).rev() {
            if current.len() + colors[i] <= best.len() {
                return;
            }
            let v = ordered[i];
            current.push(v);
            let next: Vec<usize> = ordered[..i]
                .iter()
                .copied()
                .filter(|&u| self.adjacent(u, v))
                .collect();
            if next.is_empty() {
                if current.len() > best.len() {
                    *best = current.clone();
                }
            } else {
                self.expand(next, current, best);
            }
            current.pop();
        }
    }

    /// Greedy coloring; returns the vertices ordered by color class and the
    /// running color count (an upper bound on any clique within the prefix).
    fn color_sort(&self, candidates: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in candidates {
            match classes
                .iter_mut()
                .find(|class| class.iter().all(|&u| !self.adjacent(u, v)))
            {
                Some(class) => class.push(v),
                None => classes.push(vec![v]),
            }
        }
        let mut ordered = Vec::with_capacity(candidates.len());
        let mut colors = Vec::with_capacity(candidates.len());
        for (c, class) in classes.into_iter().enumerate() {
            for v in class {
                ordered.push(v);
                colors.push(c + 1);
            }
        }
        (ordered, colors)
    }
}
