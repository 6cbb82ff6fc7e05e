//! Capacity analysis of wiretap networks: mincuts with and without pseudo
//! sources, r-wiretap and layered unicast capacity formulas, and a wiretap
//! channel II code built on an MDS generator.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;

use crate::algebra::{build_mds_generator, is_prime, AlgebraError, Matrix};
use crate::info::{InfoError, JointDistribution, Variable};
use crate::radix::{pack, unpack, Combinations};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetworkError {
    DuplicateNode(String),
    UnknownNode(String),
    /// Exactly one source and one terminal are required.
    Roles { sources: usize, terminals: usize },
    Cyclic,
    SelfLoop(String),
    /// Layered parameters are inconsistent.
    Layers(&'static str),
    /// `r_i >= k_i` in some layer.
    BudgetTooLarge { layer: usize, k: u32, r: u32 },
    InvalidField(u64),
    /// The wiretap II code needs `r < k`.
    InvalidShape { k: usize, r: usize },
    Overflow,
    TooLarge,
    Algebra(AlgebraError),
    Info(InfoError),
}

impl fmt::Display for NetworkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkError::DuplicateNode(id) => write!(f, "node `{id}` declared twice"),
            NetworkError::UnknownNode(id) => write!(f, "edge refers to unknown node `{id}`"),
            NetworkError::Roles { sources, terminals } => {
                write!(f, "need one source and one terminal, found {sources} and {terminals}")
            }
            NetworkError::Cyclic => write!(f, "network has a directed cycle"),
            NetworkError::SelfLoop(id) => write!(f, "self-loop at node `{id}`"),
            NetworkError::Layers(msg) => write!(f, "invalid layered network: {msg}"),
            NetworkError::BudgetTooLarge { layer, k, r } => {
                write!(f, "layer {layer}: wiretap budget {r} must be below width {k}")
            }
            NetworkError::InvalidField(q) => write!(f, "field size {q} is not usable"),
            NetworkError::InvalidShape { k, r } => write!(f, "need r < k, got k={k}, r={r}"),
            NetworkError::Overflow => write!(f, "arithmetic overflow"),
            NetworkError::TooLarge => write!(f, "problem too large to verify exhaustively"),
            NetworkError::Algebra(e) => write!(f, "{e}"),
            NetworkError::Info(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for NetworkError {}

impl From<AlgebraError> for NetworkError {
    fn from(e: AlgebraError) -> Self {
        NetworkError::Algebra(e)
    }
}

impl From<InfoError> for NetworkError {
    fn from(e: InfoError) -> Self {
        NetworkError::Info(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeRole {
    Source,
    Terminal,
    Intermediate,
}

impl NodeRole {
    pub fn name(self) -> &'static str {
        match self {
            NodeRole::Source => "source",
            NodeRole::Terminal => "terminal",
            NodeRole::Intermediate => "intermediate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: String,
    pub role: NodeRole,
    /// Carries an original message.
    pub message: bool,
    /// Generates local randomness.
    pub random: bool,
}

impl Node {
    pub fn new(id: impl Into<String>, role: NodeRole) -> Self {
        Node {
            id: id.into(),
            role,
            message: false,
            random: false,
        }
    }
}

/// A directed acyclic multigraph with unit edge capacities, one source and
/// one terminal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WiretapNetwork {
    nodes: Vec<Node>,
    /// `(from, to)` node indices; parallel edges allowed.
    edges: Vec<(usize, usize)>,
    source: usize,
    terminal: usize,
}

impl WiretapNetwork {
    /// `edges` name their endpoints by node id.
    pub fn new(nodes: Vec<Node>, edges: &[(&str, &str)]) -> Result<Self, NetworkError> {
        let index = |id: &str| {
            nodes
                .iter()
                .position(|n| n.id == id)
                .ok_or_else(|| NetworkError::UnknownNode(id.into()))
        };
        for (i, n) in nodes.iter().enumerate() {
            if nodes[..i].iter().any(|m| m.id == n.id) {
                return Err(NetworkError::DuplicateNode(n.id.clone()));
            }
        }
        let mut idx_edges = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            let (u, v) = (index(a)?, index(b)?);
            if u == v {
                return Err(NetworkError::SelfLoop(a.into()));
            }
            idx_edges.push((u, v));
        }
        Self::from_indices(nodes, idx_edges)
    }

    pub fn from_indices(nodes: Vec<Node>, edges: Vec<(usize, usize)>) -> Result<Self, NetworkError> {
        let with = |role| nodes.iter().filter(|n| n.role == role).count();
        let (sources, terminals) = (with(NodeRole::Source), with(NodeRole::Terminal));
        if sources != 1 || terminals != 1 {
            return Err(NetworkError::Roles { sources, terminals });
        }
        if let Some(&(u, _)) = edges.iter().find(|&&(u, v)| u >= nodes.len() || v >= nodes.len() || u == v) {
            return Err(match nodes.get(u) {
                Some(n) => NetworkError::SelfLoop(n.id.clone()),
                None => NetworkError::UnknownNode(alloc::format!("#{u}")),
            });
        }
        let source = nodes.iter().position(|n| n.role == NodeRole::Source).expect("counted");
        let terminal = nodes.iter().position(|n| n.role == NodeRole::Terminal).expect("counted");
        let net = WiretapNetwork {
            nodes,
            edges,
            source,
            terminal,
        };
        if !net.is_acyclic() {
            return Err(NetworkError::Cyclic);
        }
        Ok(net)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn terminal(&self) -> usize {
        self.terminal
    }

    fn in_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.1 == v).count()
    }

    fn is_acyclic(&self) -> bool {
        let n = self.nodes.len();
        let mut indeg: Vec<usize> = (0..n).map(|v| self.in_degree(v)).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(u) = queue.pop_front() {
            seen += 1;
            for &(a, b) in &self.edges {
                if a == u {
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        queue.push_back(b);
                    }
                }
            }
        }
        seen == n
    }

    /// Intermediate nodes with no incoming edge and no message.
    pub fn pseudo_sources(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&v| {
                let n = &self.nodes[v];
                n.role == NodeRole::Intermediate && !n.message && self.in_degree(v) == 0 && self.edges.iter().any(|e| e.0 == v)
            })
            .collect()
    }

    /// Edge-disjoint path count from the source and every pseudo source to
    /// the terminal; pseudo-source edges carry independent randomness and
    /// so count towards the cut.
    pub fn mincut1(&self) -> u32 {
        let mut roots = vec![self.source];
        roots.extend(self.pseudo_sources());
        max_flow(self.nodes.len(), &self.edges, &roots, self.terminal)
    }

    /// Edge-disjoint path count from the source to the terminal after
    /// deleting every out-edge of every pseudo source.
    pub fn mincut2(&self) -> u32 {
        let pseudo = self.pseudo_sources();
        let kept: Vec<(usize, usize)> = self.edges.iter().copied().filter(|e| !pseudo.contains(&e.0)).collect();
        max_flow(self.nodes.len(), &kept, &[self.source], self.terminal)
    }
}

/// Unit-capacity max-flow from a super-source feeding every root.
fn max_flow(n: usize, edges: &[(usize, usize)], roots: &[usize], sink: usize) -> u32 {
    // Residual graph with a super-source at index n.
    let total = n + 1;
    let mut to = Vec::new();
    let mut cap = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); total];
    let mut add = |u: usize, v: usize, c: u32, to: &mut Vec<usize>, cap: &mut Vec<u32>| {
        adj[u].push(to.len());
        to.push(v);
        cap.push(c);
        adj[v].push(to.len());
        to.push(u);
        cap.push(0);
    };
    for &(u, v) in edges {
        add(u, v, 1, &mut to, &mut cap);
    }
    for &r in roots {
        add(n, r, edges.len() as u32 + 1, &mut to, &mut cap);
    }
    let mut flow = 0;
    loop {
        let mut via = vec![usize::MAX; total];
        let mut queue = VecDeque::from([n]);
        let mut reached = false;
        while let Some(u) = queue.pop_front() {
            if u == sink {
                reached = true;
                break;
            }
            for &e in &adj[u] {
                let v = to[e];
                if cap[e] > 0 && via[v] == usize::MAX && v != n {
                    via[v] = e;
                    queue.push_back(v);
                }
            }
        }
        if !reached {
            return flow;
        }
        let mut v = sink;
        while v != n {
            let e = via[v];
            cap[e] -= 1;
            cap[e ^ 1] += 1;
            v = to[e ^ 1];
        }
        flow += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RWiretapCapacities {
    pub r: u32,
    pub mincut1: u32,
    pub mincut2: u32,
    /// `max(mincut2 - r, 0)`.
    pub c2: u32,
    pub c1_lower: u32,
    pub c1_upper: u32,
    /// `r` reached a cut and a capacity was clamped at zero.
    pub clamped: bool,
    /// No pseudo source: `C1 = C2 = mincut1 - r`.
    pub collapsed: bool,
}

/// Capacities of the r-wiretap network in symbols per use.
pub fn rwiretap_capacities(net: &WiretapNetwork, r: u32) -> RWiretapCapacities {
    let (m1, m2) = (net.mincut1(), net.mincut2());
    let c2 = m2.saturating_sub(r);
    let c1_upper = m1.saturating_sub(r);
    RWiretapCapacities {
        r,
        mincut1: m1,
        mincut2: m2,
        c2,
        c1_lower: c2,
        c1_upper,
        clamped: r > m2 || r > m1,
        collapsed: net.pseudo_sources().is_empty(),
    }
}

/// `c` layers of parallel edges; layer `i` has `k[i]` edges of which Eve
/// taps `r[i]`, over a field of size `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredUnicastNetwork {
    k: Vec<u32>,
    r: Vec<u32>,
    q: u64,
}

impl LayeredUnicastNetwork {
    pub fn new(k: Vec<u32>, r: Vec<u32>, q: u64) -> Result<Self, NetworkError> {
        if k.is_empty() {
            return Err(NetworkError::Layers("no layers"));
        }
        if k.len() != r.len() {
            return Err(NetworkError::Layers("k and r differ in length"));
        }
        if q < 2 {
            return Err(NetworkError::InvalidField(q));
        }
        for (layer, (&k, &r)) in k.iter().zip(&r).enumerate() {
            if k == 0 {
                return Err(NetworkError::Layers("empty layer"));
            }
            if r >= k {
                return Err(NetworkError::BudgetTooLarge { layer: layer + 1, k, r });
            }
        }
        Ok(LayeredUnicastNetwork { k, r, q })
    }

    pub fn layers(&self) -> usize {
        self.k.len()
    }

    pub fn k(&self) -> &[u32] {
        &self.k
    }

    pub fn r(&self) -> &[u32] {
        &self.r
    }

    pub fn q(&self) -> u64 {
        self.q
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnicastCapacities {
    /// `min_j (k_j - r_j)` symbols.
    pub c1_symbols: u32,
    /// `min_j (k_j - r_j) ∏_{i>j} (k_i - r_i) / k_i` symbols, exact.
    pub c2_symbols: Ratio<u128>,
    pub c1_bits: f64,
    pub c2_bits: f64,
}

/// Both capacities of a layered unicast relay network, in bits per use.
pub fn unicast_capacities(net: &LayeredUnicastNetwork) -> Result<UnicastCapacities, NetworkError> {
    let c = net.layers();
    let free: Vec<u128> = (0..c).map(|i| (net.k[i] - net.r[i]) as u128).collect();
    let c1 = free.iter().copied().min().expect("non-empty") as u32;
    let mut c2: Option<Ratio<u128>> = None;
    for j in 0..c {
        let mut num = free[j];
        let mut den = 1u128;
        for i in j + 1..c {
            num = num.checked_mul(free[i]).ok_or(NetworkError::Overflow)?;
            den = den.checked_mul(net.k[i] as u128).ok_or(NetworkError::Overflow)?;
            let g = gcd_u128(num, den);
            num /= g;
            den /= g;
        }
        let v = Ratio::new(num, den);
        c2 = Some(match c2 {
            Some(prev) if prev <= v => prev,
            _ => v,
        });
    }
    let c2 = c2.expect("non-empty");
    let log_q = libm::log2(net.q as f64);
    Ok(UnicastCapacities {
        c1_symbols: c1,
        c2_symbols: c2,
        c1_bits: log_q * c1 as f64,
        c2_bits: log_q * (*c2.numer() as f64 / *c2.denom() as f64),
    })
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// A `(k, r)` code for the wiretap channel II: `k - r` message symbols
/// over `F_q` sent on `k` channels, any `r` of which reveal nothing.
///
/// With generator `[I_r | P]` the codeword is `c = s [I_r | P] + (0, u)`
/// for scrambles `s` and message `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WiretapIICode {
    k: usize,
    r: usize,
    q: u64,
    /// `r × k`; empty when `r = 0`.
    generator: Option<Matrix>,
}

impl WiretapIICode {
    pub fn new(k: usize, r: usize, q: u64) -> Result<Self, NetworkError> {
        if r >= k {
            return Err(NetworkError::InvalidShape { k, r });
        }
        let generator = if r == 0 {
            if !is_prime(q) {
                return Err(AlgebraError::NotPrime(q).into());
            }
            if q < k as u64 {
                return Err(AlgebraError::FieldTooSmall { q, k }.into());
            }
            None
        } else {
            Some(build_mds_generator(k, r, q)?)
        };
        Ok(WiretapIICode { k, r, q, generator })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn message_len(&self) -> usize {
        self.k - self.r
    }

    pub fn generator(&self) -> Option<&Matrix> {
        self.generator.as_ref()
    }

    fn mix(&self, s: &[u64], j: usize) -> u64 {
        self.generator.as_ref().map_or(0, |g| {
            s.iter()
                .enumerate()
                .fold(0, |acc, (i, &si)| (acc + si * g.get(i, j)) % self.q)
        })
    }

    /// Encodes `message` (`k - r` symbols) with `scrambles` (`r` symbols).
    pub fn encode(&self, message: &[u64], scrambles: &[u64]) -> Result<Vec<u64>, NetworkError> {
        if message.len() != self.message_len() || scrambles.len() != self.r {
            return Err(NetworkError::Layers("wrong number of message or scramble symbols"));
        }
        if message.iter().chain(scrambles).any(|&v| v >= self.q) {
            return Err(NetworkError::InvalidField(self.q));
        }
        Ok((0..self.k)
            .map(|j| {
                let u = if j >= self.r { message[j - self.r] } else { 0 };
                (self.mix(scrambles, j) + u) % self.q
            })
            .collect())
    }

    /// Recovers the message: the first `r` symbols are the scrambles, the
    /// rest minus their scramble mix are the message.
    pub fn decode(&self, codeword: &[u64]) -> Result<Vec<u64>, NetworkError> {
        if codeword.len() != self.k || codeword.iter().any(|&v| v >= self.q) {
            return Err(NetworkError::Layers("codeword has wrong length or symbols"));
        }
        let s = &codeword[..self.r];
        Ok((self.r..self.k)
            .map(|j| (codeword[j] + self.q - self.mix(s, j)) % self.q)
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Wiretap2Report {
    pub k: usize,
    pub r: usize,
    pub q: u64,
    /// `q^k` equally likely message/scramble combinations.
    pub combinations: usize,
    pub subsets_checked: usize,
    /// Tap sets whose view is not exactly independent of the message.
    pub leaking_subsets: Vec<Vec<usize>>,
    /// Largest `I(U; C_T)` in bits; exactly 0 when nothing leaks.
    pub max_leakage_bits: f64,
    /// `decode(encode(u, s)) = u` everywhere and the codeword determines `u`.
    pub decodable: bool,
}

impl Wiretap2Report {
    pub fn passed(&self) -> bool {
        self.leaking_subsets.is_empty() && self.decodable
    }
}

/// Exhaustive secrecy and decodability check over uniform messages and
/// scrambles.
pub fn wiretap2_verify(code: &WiretapIICode) -> Result<Wiretap2Report, NetworkError> {
    let (k, r, q) = (code.k, code.r, code.q);
    let combinations = (q as usize)
        .checked_pow(k as u32)
        .filter(|&n| n <= 1 << 22)
        .ok_or(NetworkError::TooLarge)?;
    let ml = code.message_len();
    let qm = (q as usize).pow(ml as u32);
    let mut vars = vec![Variable::new("U", qm as u32)];
    let names: Vec<String> = (0..k).map(|j| alloc::format!("C{j}")).collect();
    vars.extend(names.iter().map(|n| Variable::new(n.clone(), q as u32)));
    let mut digits = vec![0u32; k];
    let mut outcomes = Vec::with_capacity(combinations);
    let mut decodable = true;
    for idx in 0..combinations {
        unpack(idx, q as u32, &mut digits);
        let u: Vec<u64> = digits[..ml].iter().map(|&v| v as u64).collect();
        let s: Vec<u64> = digits[ml..].iter().map(|&v| v as u64).collect();
        let c = code.encode(&u, &s)?;
        decodable &= code.decode(&c)? == u;
        let mut row = vec![pack(&digits[..ml], q as u32) as u32];
        row.extend(c.iter().map(|&v| v as u32));
        outcomes.push(row);
    }
    let law = JointDistribution::from_outcomes(vars, outcomes)?;
    let all: Vec<&str> = names.iter().map(String::as_str).collect();
    decodable &= law.is_function_of(&["U"], &all)?;
    let mut report = Wiretap2Report {
        k,
        r,
        q,
        combinations,
        subsets_checked: 0,
        leaking_subsets: Vec::new(),
        max_leakage_bits: 0.0,
        decodable,
    };
    for subset in Combinations::new(k, r) {
        report.subsets_checked += 1;
        let view: Vec<&str> = subset.iter().map(|&j| names[j].as_str()).collect();
        if view.is_empty() || law.is_independent(&["U"], &view)? {
            continue;
        }
        let leak = law.mutual_information(&["U"], &view)?;
        report.max_leakage_bits = report.max_leakage_bits.max(leak);
        report.leaking_subsets.push(subset);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(id: &str, role: NodeRole) -> Node {
        Node::new(id, role)
    }

    fn six_node() -> WiretapNetwork {
        let mut pseudo = node("5", NodeRole::Intermediate);
        pseudo.random = true;
        let mut src = node("1", NodeRole::Source);
        src.message = true;
        src.random = true;
        WiretapNetwork::new(
            vec![
                src,
                node("2", NodeRole::Intermediate),
                node("3", NodeRole::Intermediate),
                node("4", NodeRole::Intermediate),
                pseudo,
                node("6", NodeRole::Terminal),
            ],
            &[("1", "2"), ("1", "3"), ("2", "4"), ("3", "4"), ("2", "6"), ("4", "6"), ("5", "4"), ("5", "6")],
        )
        .unwrap()
    }

    fn one_hop() -> WiretapNetwork {
        WiretapNetwork::new(
            vec![
                node("s", NodeRole::Source),
                node("relay", NodeRole::Intermediate),
                node("t", NodeRole::Terminal),
            ],
            &[("s", "relay"), ("s", "relay"), ("relay", "t"), ("relay", "t")],
        )
        .unwrap()
    }

    #[test]
    fn six_node_mincuts_and_capacities() {
        let net = six_node();
        assert_eq!(net.pseudo_sources(), vec![4]);
        assert_eq!((net.mincut1(), net.mincut2()), (3, 2));
        let c = rwiretap_capacities(&net, 2);
        assert_eq!((c.c2, c.c1_lower, c.c1_upper), (0, 0, 1));
        assert!(!c.collapsed);
        assert!(!c.clamped);
        assert!(rwiretap_capacities(&net, 3).clamped);
    }

    #[test]
    fn simple_networks() {
        let single = WiretapNetwork::new(
            vec![node("a", NodeRole::Source), node("b", NodeRole::Terminal)],
            &[("a", "b")],
        )
        .unwrap();
        assert_eq!(single.mincut1(), 1);
        let net = one_hop();
        assert_eq!((net.mincut1(), net.mincut2()), (2, 2));
        let c = rwiretap_capacities(&net, 1);
        assert_eq!((c.c2, c.c1_lower, c.c1_upper), (1, 1, 1));
        assert!(c.collapsed);
        assert_eq!(rwiretap_capacities(&net, 0).c2, 2);
        let cut = WiretapNetwork::new(
            vec![node("a", NodeRole::Source), node("m", NodeRole::Intermediate), node("b", NodeRole::Terminal)],
            &[("a", "m")],
        )
        .unwrap();
        assert_eq!((cut.mincut1(), cut.mincut2()), (0, 0));
    }

    #[test]
    fn network_validation() {
        let nodes = || vec![node("a", NodeRole::Source), node("m", NodeRole::Intermediate), node("b", NodeRole::Terminal)];
        assert_eq!(
            WiretapNetwork::new(nodes(), &[("a", "m"), ("m", "a")]),
            Err(NetworkError::Cyclic)
        );
        assert_eq!(
            WiretapNetwork::new(nodes(), &[("a", "x")]),
            Err(NetworkError::UnknownNode("x".into()))
        );
        assert_eq!(
            WiretapNetwork::new(vec![node("a", NodeRole::Source)], &[]),
            Err(NetworkError::Roles { sources: 1, terminals: 0 })
        );
    }

    #[test]
    fn message_node_is_not_a_pseudo_source() {
        let mut extra = node("x", NodeRole::Intermediate);
        extra.message = true;
        let net = WiretapNetwork::new(
            vec![node("a", NodeRole::Source), extra, node("b", NodeRole::Terminal)],
            &[("a", "b"), ("x", "b")],
        )
        .unwrap();
        assert!(net.pseudo_sources().is_empty());
        assert_eq!(net.mincut1(), 1);
    }

    #[test]
    fn layered_examples() {
        let net = LayeredUnicastNetwork::new(vec![2, 2], vec![1, 1], 2).unwrap();
        let c = unicast_capacities(&net).unwrap();
        assert_eq!(c.c1_bits, 1.0);
        assert_eq!(c.c2_symbols, Ratio::new(1, 2));
        assert_eq!(c.c2_bits, 0.5);

        let net = LayeredUnicastNetwork::new(vec![3, 5, 4], vec![0, 0, 0], 7).unwrap();
        let c = unicast_capacities(&net).unwrap();
        assert_eq!(c.c1_symbols, 3);
        assert_eq!(c.c2_symbols, Ratio::from_integer(3));

        let net = LayeredUnicastNetwork::new(vec![5], vec![2], 3).unwrap();
        let c = unicast_capacities(&net).unwrap();
        assert_eq!((c.c1_symbols, c.c2_symbols), (3, Ratio::from_integer(3)));

        assert_eq!(
            LayeredUnicastNetwork::new(vec![2, 2], vec![1, 2], 2),
            Err(NetworkError::BudgetTooLarge { layer: 2, k: 2, r: 2 })
        );
    }

    #[test]
    fn wiretap2_examples() {
        for (q, k, r) in [(3, 3, 1), (5, 4, 2), (2, 2, 1), (3, 2, 0), (7, 3, 2)] {
            let code = WiretapIICode::new(k, r, q).unwrap();
            let rep = wiretap2_verify(&code).unwrap();
            assert!(rep.passed(), "q={q} k={k} r={r}");
            assert_eq!(rep.max_leakage_bits, 0.0);
        }
        assert!(matches!(
            WiretapIICode::new(4, 2, 3),
            Err(NetworkError::Algebra(AlgebraError::FieldTooSmall { .. }))
        ));
        assert_eq!(WiretapIICode::new(2, 2, 3), Err(NetworkError::InvalidShape { k: 2, r: 2 }));
    }

    #[test]
    fn broken_generator_is_caught() {
        // A repeated column leaks through the pair of equal symbols.
        let mut code = WiretapIICode::new(3, 1, 3).unwrap();
        code.generator = Some(Matrix::new(1, 3, 3, vec![1, 0, 1]).unwrap());
        let rep = wiretap2_verify(&code).unwrap();
        assert_eq!(rep.leaking_subsets, vec![vec![1]]);
        assert!(rep.max_leakage_bits > 0.0);
    }
}
