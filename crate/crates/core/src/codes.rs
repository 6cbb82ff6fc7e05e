//! One-hop relay codes stored as explicit lookup tables.
//!
//! The network is the four-edge relay of a source, one relay and a
//! destination: `e(1), e(2)` run from the source to the relay (layer 1) and
//! `e(3), e(4)` from the relay to the destination (layer 2). A code may use
//! the network for several shots; layer 2 may stay silent in later shots.
//!
//! Table layouts (all indices are mixed-radix in base `d`, most significant
//! digit first):
//!
//! - encoder: input `[M, L_1..L_s]`, output `[e1 per shot.., e2 per shot..]`
//! - relay: input `[e1 per shot.., e2 per shot.., L'_1..L'_t]`, output
//!   `[e3 per relay shot.., e4 per relay shot..]`
//! - decoder: input `[e3 per relay shot.., e4 per relay shot..]`, output `M`
//!
//! Keeping every code as tables lets enumeration, equivalence search and
//! attack simulation share one evaluation path.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::RingElement;
use crate::antilatin::{is_decodable_pair, AntiLatinSquare};
use crate::radix::{pack, pow, unpack};

/// Largest table the constructors will allocate, in symbols.
const MAX_TABLE: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeError {
    InvalidAlphabet(u32),
    InvalidShape(&'static str),
    TableLength {
        table: &'static str,
        expected: usize,
        found: usize,
    },
    SymbolOutOfRange {
        table: &'static str,
        value: u32,
    },
    TooLarge,
    /// The relay output does not determine the message.
    NotDecodable,
    SizeMismatch { left: u32, right: u32 },
    /// The operation is only defined for the listed alphabet size.
    UnsupportedAlphabet { d: u32, supported: u32 },
    /// The operation needs a single-shot code.
    MultiShot,
}

impl fmt::Display for CodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeError::InvalidAlphabet(d) => write!(f, "alphabet size {d} is below 2"),
            CodeError::InvalidShape(msg) => write!(f, "invalid code shape: {msg}"),
            CodeError::TableLength {
                table,
                expected,
                found,
            } => write!(f, "{table} table has {found} symbols, expected {expected}"),
            CodeError::SymbolOutOfRange { table, value } => {
                write!(f, "{table} table contains out-of-range symbol {value}")
            }
            CodeError::TooLarge => write!(f, "code tables too large"),
            CodeError::NotDecodable => write!(f, "relay output does not determine the message"),
            CodeError::SizeMismatch { left, right } => {
                write!(f, "squares of different sizes {left} and {right}")
            }
            CodeError::UnsupportedAlphabet { d, supported } => {
                write!(f, "alphabet size {d} unsupported, only d={supported}")
            }
            CodeError::MultiShot => write!(f, "operation needs a single-shot code"),
        }
    }
}

impl core::error::Error for CodeError {}

/// Dimensions of a one-hop code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeShape {
    pub d: u32,
    /// Uses of layer 1.
    pub shots: usize,
    /// Uses of layer 2 that carry a symbol; the rest are silent.
    pub relay_shots: usize,
    /// Uniform scrambles drawn at the source.
    pub source_scrambles: usize,
    /// Uniform scrambles drawn at the relay.
    pub relay_scrambles: usize,
}

impl CodeShape {
    /// Single shot, one source scramble, no relay randomness.
    pub fn single(d: u32) -> Self {
        CodeShape {
            d,
            shots: 1,
            relay_shots: 1,
            source_scrambles: 1,
            relay_scrambles: 0,
        }
    }

    fn validate(&self) -> Result<(), CodeError> {
        if self.d < 2 {
            return Err(CodeError::InvalidAlphabet(self.d));
        }
        if self.shots == 0 {
            return Err(CodeError::InvalidShape("no shots"));
        }
        if self.relay_shots == 0 || self.relay_shots > self.shots {
            return Err(CodeError::InvalidShape("relay shots must be in 1..=shots"));
        }
        let sizes = [
            self.encoder_inputs().checked_mul(self.layer1_width()),
            self.relay_inputs().checked_mul(self.layer2_width()),
            Some(self.decoder_inputs()),
        ];
        if sizes.iter().any(|s| s.is_none_or(|s| s > MAX_TABLE)) {
            return Err(CodeError::TooLarge);
        }
        Ok(())
    }

    /// Symbols on layer 1 over all shots (`e1` then `e2`).
    pub fn layer1_width(&self) -> usize {
        2 * self.shots
    }

    /// Symbols on layer 2 over all relay shots (`e3` then `e4`).
    pub fn layer2_width(&self) -> usize {
        2 * self.relay_shots
    }

    pub fn encoder_inputs(&self) -> usize {
        pow(self.d, 1 + self.source_scrambles)
    }

    pub fn relay_inputs(&self) -> usize {
        pow(self.d, self.layer1_width() + self.relay_scrambles)
    }

    pub fn decoder_inputs(&self) -> usize {
        pow(self.d, self.layer2_width())
    }

    /// Number of equally likely `(M, source scrambles, relay scrambles)`
    /// outcomes.
    pub fn outcomes(&self) -> usize {
        pow(self.d, 1 + self.source_scrambles + self.relay_scrambles)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OneHopCode {
    shape: CodeShape,
    encoder: Vec<u32>,
    relay: Vec<u32>,
    decoder: Vec<u32>,
}

/// One full run of a code: every symbol on every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transmission {
    pub layer1: Vec<u32>,
    pub layer2: Vec<u32>,
    pub decoded: u32,
}

impl OneHopCode {
    pub fn from_tables(
        shape: CodeShape,
        encoder: Vec<u32>,
        relay: Vec<u32>,
        decoder: Vec<u32>,
    ) -> Result<Self, CodeError> {
        shape.validate()?;
        let checks = [
            ("encoder", &encoder, shape.encoder_inputs() * shape.layer1_width()),
            ("relay", &relay, shape.relay_inputs() * shape.layer2_width()),
            ("decoder", &decoder, shape.decoder_inputs()),
        ];
        for (table, t, expected) in checks {
            if t.len() != expected {
                return Err(CodeError::TableLength {
                    table,
                    expected,
                    found: t.len(),
                });
            }
            if let Some(&value) = t.iter().find(|&&v| v >= shape.d) {
                return Err(CodeError::SymbolOutOfRange { table, value });
            }
        }
        Ok(OneHopCode {
            shape,
            encoder,
            relay,
            decoder,
        })
    }

    /// Tabulates closures over their whole domains.
    ///
    /// `encoder(m, scrambles, out)` writes layer 1, `relay(layer1,
    /// relay_scrambles, out)` writes layer 2 and `decoder(layer2)` returns the
    /// message estimate. Outputs are reduced mod `d`.
    pub fn from_fns<E, R, D>(shape: CodeShape, encoder: E, relay: R, decoder: D) -> Result<Self, CodeError>
    where
        E: Fn(u32, &[u32], &mut [u32]),
        R: Fn(&[u32], &[u32], &mut [u32]),
        D: Fn(&[u32]) -> u32,
    {
        shape.validate()?;
        let d = shape.d;
        let enc = tabulate(d, 1 + shape.source_scrambles, shape.layer1_width(), |x, out| {
            encoder(x[0], &x[1..], out)
        });
        let rel = tabulate(
            d,
            shape.layer1_width() + shape.relay_scrambles,
            shape.layer2_width(),
            |x, out| relay(&x[..shape.layer1_width()], &x[shape.layer1_width()..], out),
        );
        let dec = tabulate(d, shape.layer2_width(), 1, |x, out| out[0] = decoder(x));
        Self::from_tables(shape, enc, rel, dec)
    }

    /// Builds the code with a decoder read off the relay tables, or returns
    /// `None` when some layer-2 output is reachable from two messages.
    ///
    /// Unreachable layer-2 outputs decode to 0.
    pub fn with_derived_decoder(
        shape: CodeShape,
        encoder: Vec<u32>,
        relay: Vec<u32>,
    ) -> Result<Option<Self>, CodeError> {
        let placeholder = vec![0; shape.decoder_inputs()];
        let mut code = Self::from_tables(shape, encoder, relay, placeholder)?;
        let mut decoder: Vec<Option<u32>> = vec![None; shape.decoder_inputs()];
        let mut ok = true;
        code.for_each_outcome(|m, scr, rscr| {
            if !ok {
                return;
            }
            let layer2 = code.relay_output(code.encode(m, scr), rscr);
            let slot = &mut decoder[pack(layer2, shape.d)];
            match slot {
                Some(prev) if *prev != m => ok = false,
                _ => *slot = Some(m),
            }
        });
        if !ok {
            return Ok(None);
        }
        code.decoder = decoder.into_iter().map(|m| m.unwrap_or(0)).collect();
        Ok(Some(code))
    }

    pub fn shape(&self) -> CodeShape {
        self.shape
    }

    pub fn d(&self) -> u32 {
        self.shape.d
    }

    pub fn shots(&self) -> usize {
        self.shape.shots
    }

    pub fn relay_randomness(&self) -> bool {
        self.shape.relay_scrambles > 0
    }

    pub fn encoder_table(&self) -> &[u32] {
        &self.encoder
    }

    pub fn relay_table(&self) -> &[u32] {
        &self.relay
    }

    pub fn decoder_table(&self) -> &[u32] {
        &self.decoder
    }

    /// Message symbols per network use, in bits.
    pub fn rate_bits(&self) -> f64 {
        libm::log2(self.shape.d as f64) / self.shape.shots as f64
    }

    /// Layer-1 symbols for message `m` and source scrambles `scrambles`.
    pub fn encode(&self, m: u32, scrambles: &[u32]) -> &[u32] {
        let d = self.shape.d;
        let idx = scrambles
            .iter()
            .fold(m as usize, |acc, &x| acc * d as usize + x as usize);
        let w = self.shape.layer1_width();
        &self.encoder[idx * w..(idx + 1) * w]
    }

    /// Layer-2 symbols for the given layer-1 input and relay scrambles.
    pub fn relay_output(&self, layer1: &[u32], relay_scrambles: &[u32]) -> &[u32] {
        let d = self.shape.d;
        let idx = relay_scrambles
            .iter()
            .fold(pack(layer1, d), |acc, &x| acc * d as usize + x as usize);
        let w = self.shape.layer2_width();
        &self.relay[idx * w..(idx + 1) * w]
    }

    pub fn decode(&self, layer2: &[u32]) -> u32 {
        self.decoder[pack(layer2, self.shape.d)]
    }

    pub fn transmit(&self, m: u32, scrambles: &[u32], relay_scrambles: &[u32]) -> Transmission {
        let layer1 = self.encode(m, scrambles).to_vec();
        let layer2 = self.relay_output(&layer1, relay_scrambles).to_vec();
        let decoded = self.decode(&layer2);
        Transmission {
            layer1,
            layer2,
            decoded,
        }
    }

    /// Calls `f(m, source_scrambles, relay_scrambles)` for every equally
    /// likely outcome, in mixed-radix order.
    pub fn for_each_outcome(&self, mut f: impl FnMut(u32, &[u32], &[u32])) {
        let s = self.shape.source_scrambles;
        let mut digits = vec![0u32; 1 + s + self.shape.relay_scrambles];
        for idx in 0..self.shape.outcomes() {
            unpack(idx, self.shape.d, &mut digits);
            f(digits[0], &digits[1..1 + s], &digits[1 + s..]);
        }
    }

    /// First `(m, scrambles, relay scrambles)` that decodes wrongly.
    pub fn correctness_counterexample(&self) -> Option<(u32, Vec<u32>, Vec<u32>)> {
        let mut found = None;
        self.for_each_outcome(|m, scr, rscr| {
            if found.is_none() && self.decode(self.relay_output(self.encode(m, scr), rscr)) != m {
                found = Some((m, scr.to_vec(), rscr.to_vec()));
            }
        });
        found
    }

    /// True iff the code decodes every message under every scramble draw.
    pub fn check_correctness(&self) -> bool {
        self.correctness_counterexample().is_none()
    }

    /// True iff encoder and relay tables are affine maps over `Z_d`.
    pub fn is_affine(&self) -> bool {
        let s = &self.shape;
        is_affine_table(&self.encoder, s.d, 1 + s.source_scrambles, s.layer1_width())
            && is_affine_table(&self.relay, s.d, s.layer1_width() + s.relay_scrambles, s.layer2_width())
    }
}

fn tabulate(d: u32, inputs: usize, width: usize, mut f: impl FnMut(&[u32], &mut [u32])) -> Vec<u32> {
    let n = pow(d, inputs);
    let mut table = vec![0u32; n * width];
    let mut x = vec![0u32; inputs];
    for (idx, out) in table.chunks_mut(width.max(1)).enumerate().take(n) {
        unpack(idx, d, &mut x);
        f(&x, out);
        for v in out.iter_mut() {
            *v %= d;
        }
    }
    table
}

/// `T(x) = T(0) + Σ_i x_i (T(e_i) - T(0))` for every input `x`.
fn is_affine_table(table: &[u32], d: u32, inputs: usize, width: usize) -> bool {
    let row = |idx: usize| &table[idx * width..(idx + 1) * width];
    let base = row(0);
    let units: Vec<&[u32]> = (0..inputs).map(|i| row(pow(d, inputs - 1 - i))).collect();
    let mut x = vec![0u32; inputs];
    (0..pow(d, inputs)).all(|idx| {
        unpack(idx, d, &mut x);
        let got = row(idx);
        (0..width).all(|c| {
            let mut v = base[c] as u64;
            for (i, u) in units.iter().enumerate() {
                let slope = (u[c] + d - base[c]) % d;
                v += x[i] as u64 * slope as u64;
            }
            (v % d as u64) as u32 == got[c]
        })
    })
}

fn ring(v: u32, d: u32) -> RingElement {
    RingElement::new(v as u64, d as u64).expect("alphabet validated")
}

fn sym(r: RingElement) -> u32 {
    r.value() as u32
}

/// `Y1 = L, Y2 = M + L`; relay `Y3 = L', Y4 = Y2 - Y1 + L'`; decoder
/// `Y4 - Y3`. Uses one relay scramble.
pub fn scalar_linear_code(d: u32) -> Result<OneHopCode, CodeError> {
    let shape = CodeShape {
        relay_scrambles: 1,
        ..CodeShape::single(d)
    };
    OneHopCode::from_fns(
        shape,
        |m, l, out| {
            let (m, l) = (ring(m, d), ring(l[0], d));
            out[0] = sym(l);
            out[1] = sym(m + l);
        },
        |y, lp, out| {
            let (y1, y2, lp) = (ring(y[0], d), ring(y[1], d), ring(lp[0], d));
            out[0] = sym(lp);
            out[1] = sym(y2 - y1 + lp);
        },
        |z| sym(ring(z[1], d) - ring(z[0], d)),
    )
}

/// The standard non-linear code: `Y1 = L, Y2 = M + L`, relay
/// `Y3 = Y1 (Y2 - Y1)`, `Y4 = (Y1 + 1)(Y2 - Y1)`, decoder `Y4 - Y3`.
pub fn standard_nonlinear_code(d: u32) -> Result<OneHopCode, CodeError> {
    OneHopCode::from_fns(
        CodeShape::single(d),
        |m, l, out| {
            let (m, l) = (ring(m, d), ring(l[0], d));
            out[0] = sym(l);
            out[1] = sym(m + l);
        },
        |y, _, out| {
            let (y1, y2) = (ring(y[0], d), ring(y[1], d));
            let one = ring(1, d);
            out[0] = sym(y1 * (y2 - y1));
            out[1] = sym((y1 + one) * (y2 - y1));
        },
        |z| sym(ring(z[1], d) - ring(z[0], d)),
    )
}

/// Relay `Y3 = a[Y1][Y2]`, `Y4 = b[Y1][Y2]` over the usual encoder; the
/// decoder inverts the Ξ-set partition.
pub fn anti_latin_code(a: &AntiLatinSquare, b: &AntiLatinSquare) -> Result<OneHopCode, CodeError> {
    if a.d() != b.d() {
        return Err(CodeError::SizeMismatch {
            left: a.d(),
            right: b.d(),
        });
    }
    if !is_decodable_pair(a, b).expect("sizes checked") {
        return Err(CodeError::NotDecodable);
    }
    let d = a.d();
    let encoder = tabulate(d, 2, 2, |x, out| {
        out[0] = x[1];
        out[1] = sym(ring(x[0], d) + ring(x[1], d));
    });
    let relay = tabulate(d, 2, 2, |y, out| {
        out[0] = a.get(y[0] as usize, y[1] as usize);
        out[1] = b.get(y[0] as usize, y[1] as usize);
    });
    OneHopCode::with_derived_decoder(CodeShape::single(d), encoder, relay)?.ok_or(CodeError::NotDecodable)
}

/// Two-shot vector-linear code.
///
/// Shot 1 sends `Y1 = L1, Y2 = M + L1`, shot 2 sends `Y1' = L2,
/// Y2' = L3 + L2`; the relay forwards `Y3 = Y2' - Y1'` and
/// `Y4 = Y2 - Y1 + Y2' - Y1'` once and stays silent in shot 2. The decoder
/// returns `Y4 - Y3`. Rate is half a symbol per use.
pub fn vector_linear_code(d: u32) -> Result<OneHopCode, CodeError> {
    let shape = CodeShape {
        d,
        shots: 2,
        relay_shots: 1,
        source_scrambles: 3,
        relay_scrambles: 0,
    };
    OneHopCode::from_fns(
        shape,
        |m, l, out| {
            let m = ring(m, d);
            let (l1, l2, l3) = (ring(l[0], d), ring(l[1], d), ring(l[2], d));
            // [e1 shot1, e1 shot2, e2 shot1, e2 shot2]
            out[0] = sym(l1);
            out[1] = sym(l2);
            out[2] = sym(m + l1);
            out[3] = sym(l3 + l2);
        },
        |y, _, out| {
            let (y1, y1p, y2, y2p) = (ring(y[0], d), ring(y[1], d), ring(y[2], d), ring(y[3], d));
            out[0] = sym(y2p - y1p);
            out[1] = sym(y2 - y1 + y2p - y1p);
        },
        |z| sym(ring(z[1], d) - ring(z[0], d)),
    )
}

/// Correct codes with one scramble and no relay randomness over `Z_2`,
/// enumerated over all 256 × 256 encoder/relay table pairs.
#[derive(Debug, Clone)]
pub struct CodeEnumeration {
    next: usize,
}

/// A code from [`enumerate_onehop_codes`] with its table indices.
///
/// Bits `2i..2i+2` of `encoder_index` hold `(Y1, Y2)` for input `i = 2M + L`;
/// bits `2i..2i+2` of `relay_index` hold `(Y3, Y4)` for input
/// `i = 2Y1 + Y2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumeratedCode {
    pub encoder_index: u8,
    pub relay_index: u8,
    pub code: OneHopCode,
}

pub const ENUMERATION_SPACE: usize = 256 * 256;

pub fn enumerate_onehop_codes(d: u32) -> Result<CodeEnumeration, CodeError> {
    if d != 2 {
        return Err(CodeError::UnsupportedAlphabet { d, supported: 2 });
    }
    Ok(CodeEnumeration { next: 0 })
}

/// The code for a pair of table indices, if it is correct.
pub fn code_from_indices(encoder_index: u8, relay_index: u8) -> Option<OneHopCode> {
    let expand = |bits: u8| -> Vec<u32> {
        (0..4)
            .flat_map(|i| {
                let o = (bits >> (2 * i)) & 3;
                [(o >> 1) as u32, (o & 1) as u32]
            })
            .collect()
    };
    OneHopCode::with_derived_decoder(CodeShape::single(2), expand(encoder_index), expand(relay_index))
        .expect("d=2 tables are well formed")
}

impl Iterator for CodeEnumeration {
    type Item = EnumeratedCode;

    fn next(&mut self) -> Option<EnumeratedCode> {
        while self.next < ENUMERATION_SPACE {
            let idx = self.next;
            self.next += 1;
            let (encoder_index, relay_index) = ((idx >> 8) as u8, (idx & 0xff) as u8);
            if let Some(code) = code_from_indices(encoder_index, relay_index) {
                return Some(EnumeratedCode {
                    encoder_index,
                    relay_index,
                    code,
                });
            }
        }
        None
    }
}

/// Relabeling that maps a binary code onto the standard non-linear code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Equivalence {
    /// `flips[i]` is true when `f_{i+1}` is `x ↦ x + 1` (false: identity)
    /// for `Y1, Y2, Y3, Y4, M` in that order.
    pub flips: [bool; 5],
    /// Outcome counts of the relabeled `(M̄, L̄)` with `L̄ = f1(Y1)`;
    /// `joint_law[m][l]` over a total of [`CodeShape::outcomes`].
    pub joint_law: [[u64; 2]; 2],
}

/// Searches the 32 bijective relabelings of `Y1..Y4, M` for one that turns
/// `code` into the standard non-linear code, where the scramble may be any
/// variable `L̄ = f1(Y1)` (possibly correlated with the message).
pub fn standard_equivalence(code: &OneHopCode) -> Result<Option<Equivalence>, CodeError> {
    let shape = code.shape();
    if shape.d != 2 {
        return Err(CodeError::UnsupportedAlphabet {
            d: shape.d,
            supported: 2,
        });
    }
    if shape.shots != 1 {
        return Err(CodeError::MultiShot);
    }
    let mut runs: Vec<(u32, [u32; 4])> = Vec::with_capacity(shape.outcomes());
    code.for_each_outcome(|m, scr, rscr| {
        let t = code.transmit(m, scr, rscr);
        runs.push((m, [t.layer1[0], t.layer1[1], t.layer2[0], t.layer2[1]]));
    });
    for mask in 0u32..32 {
        let f = |i: u32, x: u32| x ^ ((mask >> i) & 1);
        let mut joint = [[0u64; 2]; 2];
        let fits = runs.iter().all(|&(m, y)| {
            let l = f(0, y[0]);
            let mb = f(4, m);
            let y2 = f(1, y[1]);
            let diff = (y2 + 2 - l) % 2;
            joint[mb as usize][l as usize] += 1;
            y2 == (mb + l) % 2 && f(2, y[2]) == (l * diff) % 2 && f(3, y[3]) == ((l + 1) * diff) % 2
        });
        if fits {
            let flips = core::array::from_fn(|i| (mask >> i) & 1 == 1);
            return Ok(Some(Equivalence {
                flips,
                joint_law: joint,
            }));
        }
    }
    Ok(None)
}

pub fn is_equivalent_to_standard(code: &OneHopCode) -> Result<bool, CodeError> {
    Ok(standard_equivalence(code)?.is_some())
}

/// A single-shot scalar-linear code without relay randomness, with its
/// coefficients `[a1, b1, c1, a2, b2, c2, α1, α2, α0, β1, β2, β0]`:
/// `Y1 = a1 M + b1 L + c1`, `Y2 = a2 M + b2 L + c2`,
/// `Y3 = α1 Y1 + α2 Y2 + α0`, `Y4 = β1 Y1 + β2 Y2 + β0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineCode {
    pub coefficients: [u32; 12],
    pub code: OneHopCode,
}

/// Iterator over every correct affine code over `Z_d` (decoder read off the
/// tables). With `offsets = false` the constants `c1, c2, α0, β0` are fixed
/// at zero.
#[derive(Debug, Clone)]
pub struct AffineCodes {
    d: u32,
    offsets: bool,
    next: usize,
    end: usize,
}

pub fn scalar_linear_family(d: u32, offsets: bool) -> Result<AffineCodes, CodeError> {
    if d < 2 {
        return Err(CodeError::InvalidAlphabet(d));
    }
    let free = if offsets { 12 } else { 8 };
    let end = (d as usize).checked_pow(free).ok_or(CodeError::TooLarge)?;
    Ok(AffineCodes {
        d,
        offsets,
        next: 0,
        end,
    })
}

impl AffineCodes {
    /// Size of the coefficient space, correct or not.
    pub fn space(&self) -> usize {
        self.end
    }

    fn coefficients(&self, idx: usize) -> [u32; 12] {
        let mut c = [0u32; 12];
        if self.offsets {
            unpack(idx, self.d, &mut c);
        } else {
            let mut free = [0u32; 8];
            unpack(idx, self.d, &mut free);
            for (slot, v) in [0, 1, 3, 4, 6, 7, 9, 10].into_iter().zip(free) {
                c[slot] = v;
            }
        }
        c
    }
}

impl Iterator for AffineCodes {
    type Item = AffineCode;

    fn next(&mut self) -> Option<AffineCode> {
        let d = self.d;
        while self.next < self.end {
            let c = self.coefficients(self.next);
            self.next += 1;
            let lin = |a: u32, x: u32, b: u32, y: u32, k: u32| (a * x + b * y + k) % d;
            let encoder = tabulate(d, 2, 2, |x, out| {
                out[0] = lin(c[0], x[0], c[1], x[1], c[2]);
                out[1] = lin(c[3], x[0], c[4], x[1], c[5]);
            });
            let relay = tabulate(d, 2, 2, |y, out| {
                out[0] = lin(c[6], y[0], c[7], y[1], c[8]);
                out[1] = lin(c[9], y[0], c[10], y[1], c[11]);
            });
            let code = OneHopCode::with_derived_decoder(CodeShape::single(d), encoder, relay)
                .expect("affine tables are well formed");
            if let Some(code) = code {
                return Some(AffineCode {
                    coefficients: c,
                    code,
                });
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_linear_example_and_exhaustive_d3() {
        let c = scalar_linear_code(2).unwrap();
        let t = c.transmit(1, &[0], &[1]);
        assert_eq!(t.layer1, [0, 1]);
        assert_eq!(t.layer2, [1, 0]);
        assert_eq!(t.decoded, 1);
        assert!(c.relay_randomness());

        let c3 = scalar_linear_code(3).unwrap();
        let mut cases = 0;
        for m in 0..3 {
            for l in 0..3 {
                for lp in 0..3 {
                    assert_eq!(c3.transmit(m, &[l], &[lp]).decoded, m);
                    cases += 1;
                }
            }
        }
        assert_eq!(cases, 27);
    }

    #[test]
    fn standard_code_examples() {
        let c = standard_nonlinear_code(2).unwrap();
        for m in 0..2 {
            for l in 0..2 {
                let t = c.transmit(m, &[l], &[]);
                assert_eq!(t.layer2, [l * m % 2, (l * m + m) % 2]);
            }
        }
        for d in 2..8 {
            let c = standard_nonlinear_code(d).unwrap();
            for m in 0..d {
                assert_eq!(c.transmit(m, &[0], &[]).layer2, [0, m]);
            }
        }
        let c5 = standard_nonlinear_code(5).unwrap();
        let mut n = 0;
        c5.for_each_outcome(|m, l, r| {
            assert_eq!(c5.transmit(m, l, r).decoded, m);
            n += 1;
        });
        assert_eq!(n, 25);
        assert!(!c5.relay_randomness());
    }

    #[test]
    fn vector_linear_examples() {
        let c = vector_linear_code(3).unwrap();
        let mut n = 0;
        c.for_each_outcome(|m, l, r| {
            assert_eq!(c.transmit(m, l, r).decoded, m);
            n += 1;
        });
        assert_eq!(n, 81);
        assert!((c.rate_bits() - 0.5 * libm::log2(3.0)).abs() < 1e-15);
        assert_eq!(c.shape().layer2_width(), 2);
    }

    #[test]
    fn built_in_codes_are_correct() {
        for d in 2..=7 {
            assert!(scalar_linear_code(d).unwrap().check_correctness());
            assert!(standard_nonlinear_code(d).unwrap().check_correctness());
            assert!(vector_linear_code(d).unwrap().check_correctness());
        }
    }

    #[test]
    fn swapped_decoder_fails() {
        let good = standard_nonlinear_code(3).unwrap();
        let bad = OneHopCode::from_fns(
            good.shape(),
            |m, l, out| out.copy_from_slice(good.encode(m, l)),
            |y, r, out| out.copy_from_slice(good.relay_output(y, r)),
            |z| (z[0] + 3 - z[1]) % 3,
        )
        .unwrap();
        assert!(!bad.check_correctness());
        let (m, _, _) = bad.correctness_counterexample().unwrap();
        assert_eq!(m, 1);
    }

    #[test]
    fn identity_relay_code_is_correct() {
        let c = OneHopCode::from_fns(
            CodeShape::single(2),
            |m, l, out| {
                out[0] = m;
                out[1] = l[0];
            },
            |y, _, out| out.copy_from_slice(y),
            |z| z[0],
        )
        .unwrap();
        assert!(c.check_correctness());
    }

    #[test]
    fn table_validation() {
        let shape = CodeShape::single(2);
        assert!(matches!(
            OneHopCode::from_tables(shape, vec![0; 7], vec![0; 8], vec![0; 4]),
            Err(CodeError::TableLength { table: "encoder", .. })
        ));
        assert_eq!(
            OneHopCode::from_tables(shape, vec![0; 8], vec![2; 8], vec![0; 4]),
            Err(CodeError::SymbolOutOfRange {
                table: "relay",
                value: 2
            })
        );
        assert_eq!(
            OneHopCode::from_tables(CodeShape::single(1), vec![], vec![], vec![]),
            Err(CodeError::InvalidAlphabet(1))
        );
        assert!(matches!(
            enumerate_onehop_codes(3),
            Err(CodeError::UnsupportedAlphabet { d: 3, supported: 2 })
        ));
    }

    #[test]
    fn affine_detection() {
        assert!(scalar_linear_code(3).unwrap().is_affine());
        assert!(vector_linear_code(2).unwrap().is_affine());
        assert!(!standard_nonlinear_code(2).unwrap().is_affine());
        assert!(!standard_nonlinear_code(3).unwrap().is_affine());
    }

    #[test]
    fn enumeration_contains_standard_code() {
        let standard = standard_nonlinear_code(2).unwrap();
        let all: Vec<EnumeratedCode> = enumerate_onehop_codes(2).unwrap().collect();
        assert!(!all.is_empty());
        assert!(all.iter().all(|c| c.code.check_correctness()));
        assert!(all.iter().any(|c| c.code == standard));
    }

    #[test]
    fn equivalence_examples() {
        let standard = standard_nonlinear_code(2).unwrap();
        let eq = standard_equivalence(&standard).unwrap().unwrap();
        assert_eq!(eq.flips, [false; 5]);
        assert_eq!(eq.joint_law, [[1, 1], [1, 1]]);

        // Y3 and Y4 both complemented.
        let flipped = OneHopCode::from_fns(
            CodeShape::single(2),
            |m, l, out| out.copy_from_slice(standard.encode(m, l)),
            |y, r, out| {
                let z = standard.relay_output(y, r);
                out[0] = z[0] ^ 1;
                out[1] = z[1] ^ 1;
            },
            |z| z[0] ^ z[1],
        )
        .unwrap();
        assert!(flipped.check_correctness());
        let eq = standard_equivalence(&flipped).unwrap().unwrap();
        assert_eq!(eq.flips, [false, false, true, true, false]);

        let linear = OneHopCode::from_fns(
            CodeShape::single(2),
            |m, l, out| {
                out[0] = l[0];
                out[1] = (m + l[0]) % 2;
            },
            |y, _, out| {
                out[0] = y[0];
                out[1] = y[1];
            },
            |z| z[0] ^ z[1],
        )
        .unwrap();
        assert!(!is_equivalent_to_standard(&linear).unwrap());
        assert!(matches!(
            standard_equivalence(&standard_nonlinear_code(3).unwrap()),
            Err(CodeError::UnsupportedAlphabet { .. })
        ));
    }

    #[test]
    fn affine_family_sizes() {
        let fam = scalar_linear_family(2, true).unwrap();
        assert_eq!(fam.space(), 4096);
        let codes: Vec<_> = fam.collect();
        assert!(!codes.is_empty());
        assert!(codes.iter().all(|c| c.code.check_correctness() && c.code.is_affine()));
        let linear = scalar_linear_family(2, false).unwrap().count();
        assert!(linear > 0 && linear < codes.len());
    }
}
