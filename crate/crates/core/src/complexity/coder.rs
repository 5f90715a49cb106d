//! Description coders: bit-exact encoders whose output length is the
//! description length of a symbol sequence.
//!
//! Both built-in coders share a header:
//!
//! ```text
//! gamma(N + 1)                     number of symbols
//! gamma(A + 1)                     alphabet size
//! gamma(zigzag(s_k) + 1), k < A    distinct symbols in first-occurrence order
//! ```
//!
//! where `zigzag(s) = 2s` for `s >= 0` and `-2s - 1` otherwise. The header
//! after the symbol count is the dictionary. Body symbols are referred to by their
//! dictionary position, so relabeling symbols through any injective map
//! leaves the body unchanged and only the dictionary differs.
//!
//! `mtf-rle-gamma` body: the sequence of move-to-front ranks (list initialised
//! to dictionary order) is split into maximal runs of equal rank, and each
//! run is written as `gamma(rank + 1) gamma(run_length)`.
//!
//! `fixed-width` body: each dictionary position in `max(1, ceil(log2 A))`
//! bits.

use std::collections::{BTreeMap, HashMap};

use super::bits::{gamma_len, BitReader, BitWriter};
use super::ComplexityError;

/// A finished code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoded {
    pub bytes: Vec<u8>,
    pub bits: u64,
    /// Bits of `gamma(A + 1)` plus the symbol list.
    pub dictionary_bits: u64,
}

pub trait DescriptionCoder: Send + Sync {
    fn name(&self) -> &'static str;

    fn encode(&self, symbols: &[i64]) -> Encoded;

    fn decode(&self, code: &Encoded) -> Result<Vec<i64>, ComplexityError>;
}

pub fn zigzag(s: i64) -> u64 {
    ((s << 1) ^ (s >> 63)) as u64
}

pub fn unzigzag(z: u64) -> i64 {
    ((z >> 1) as i64) ^ -((z & 1) as i64)
}

/// Distinct symbols in first-occurrence order and each symbol's position.
fn dictionary(symbols: &[i64]) -> (Vec<i64>, Vec<usize>) {
    let mut order = Vec::new();
    let mut index = HashMap::new();
    let positions = symbols
        .iter()
        .map(|&s| {
            *index.entry(s).or_insert_with(|| {
                order.push(s);
                order.len() - 1
            })
        })
        .collect();
    (order, positions)
}

fn write_header(w: &mut BitWriter, n: usize, dict: &[i64]) -> u64 {
    w.push_gamma(n as u128 + 1);
    let before = w.len();
    w.push_gamma(dict.len() as u128 + 1);
    for &s in dict {
        w.push_gamma(zigzag(s) as u128 + 1);
    }
    w.len() - before
}

fn read_header(r: &mut BitReader<'_>) -> Result<(usize, Vec<i64>), ComplexityError> {
    let as_usize = |v: u128| usize::try_from(v - 1).map_err(|_| ComplexityError::Corrupt("length overflow".into()));
    let n = as_usize(r.read_gamma()?)?;
    let a = as_usize(r.read_gamma()?)?;
    let mut dict = Vec::with_capacity(a.min(1 << 16));
    for _ in 0..a {
        let z = r.read_gamma()? - 1;
        let z = u64::try_from(z).map_err(|_| ComplexityError::Corrupt("symbol overflow".into()))?;
        dict.push(unzigzag(z));
    }
    Ok((n, dict))
}

/// Bits per symbol of a plain fixed-width code over `alphabet` symbols.
pub fn fixed_width(alphabet: usize) -> u32 {
    if alphabet <= 1 {
        1
    } else {
        usize::BITS - (alphabet - 1).leading_zeros()
    }
}

/// Move-to-front, then run-length, then Elias gamma.
#[derive(Debug, Default, Clone, Copy)]
pub struct MtfRleGamma;

impl MtfRleGamma {
    pub const NAME: &'static str = "mtf-rle-gamma";
}

fn move_to_front(list: &mut Vec<usize>, rank: usize) -> usize {
    let item = list.remove(rank);
    list.insert(0, item);
    item
}

impl DescriptionCoder for MtfRleGamma {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn encode(&self, symbols: &[i64]) -> Encoded {
        let (dict, positions) = dictionary(symbols);
        let mut w = BitWriter::new();
        let dictionary_bits = write_header(&mut w, symbols.len(), &dict);

        let mut list: Vec<usize> = (0..dict.len()).collect();
        let mut run: Option<(usize, u64)> = None;
        for &pos in &positions {
            let rank = list.iter().position(|&p| p == pos).expect("symbol in list");
            move_to_front(&mut list, rank);
            run = match run {
                Some((r, len)) if r == rank => Some((r, len + 1)),
                Some((r, len)) => {
                    w.push_gamma(r as u128 + 1);
                    w.push_gamma(len as u128);
                    Some((rank, 1))
                }
                None => Some((rank, 1)),
            };
        }
        if let Some((r, len)) = run {
            w.push_gamma(r as u128 + 1);
            w.push_gamma(len as u128);
        }
        let (bytes, bits) = w.into_bytes();
        Encoded {
            bytes,
            bits,
            dictionary_bits,
        }
    }

    fn decode(&self, code: &Encoded) -> Result<Vec<i64>, ComplexityError> {
        let mut r = BitReader::new(&code.bytes, code.bits);
        let (n, dict) = read_header(&mut r)?;
        let mut list: Vec<usize> = (0..dict.len()).collect();
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let rank = (r.read_gamma()? - 1) as usize;
            let len = r.read_gamma()? as usize;
            if rank >= list.len() || out.len() + len > n {
                return Err(ComplexityError::Corrupt("run outside sequence".into()));
            }
            for _ in 0..len {
                out.push(dict[move_to_front(&mut list, rank)]);
            }
        }
        Ok(out)
    }
}

/// Dictionary positions at a fixed width; the incompressible baseline.
#[derive(Debug, Default, Clone, Copy)]
pub struct FixedWidth;

impl FixedWidth {
    pub const NAME: &'static str = "fixed-width";
}

impl DescriptionCoder for FixedWidth {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn encode(&self, symbols: &[i64]) -> Encoded {
        let (dict, positions) = dictionary(symbols);
        let mut w = BitWriter::new();
        let dictionary_bits = write_header(&mut w, symbols.len(), &dict);
        let width = fixed_width(dict.len());
        for p in positions {
            w.push_bits(p as u128, width);
        }
        let (bytes, bits) = w.into_bytes();
        Encoded {
            bytes,
            bits,
            dictionary_bits,
        }
    }

    fn decode(&self, code: &Encoded) -> Result<Vec<i64>, ComplexityError> {
        let mut r = BitReader::new(&code.bytes, code.bits);
        let (n, dict) = read_header(&mut r)?;
        let width = fixed_width(dict.len());
        (0..n)
            .map(|_| {
                let p = r.read_bits(width)? as usize;
                dict.get(p)
                    .copied()
                    .ok_or_else(|| ComplexityError::Corrupt("index outside dictionary".into()))
            })
            .collect()
    }
}

/// Header length for `symbols` without encoding the body.
pub fn dictionary_bits(symbols: &[i64]) -> u64 {
    let (dict, _) = dictionary(symbols);
    gamma_len(dict.len() as u128 + 1) + dict.iter().map(|&s| gamma_len(zigzag(s) as u128 + 1)).sum::<u64>()
}

pub struct CoderRegistry {
    entries: BTreeMap<&'static str, Box<dyn DescriptionCoder>>,
}

impl CoderRegistry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(MtfRleGamma));
        r.register(Box::new(FixedWidth));
        r
    }

    pub fn register(&mut self, coder: Box<dyn DescriptionCoder>) {
        self.entries.insert(coder.name(), coder);
    }

    pub fn get(&self, name: &str) -> Result<&dyn DescriptionCoder, ComplexityError> {
        self.entries
            .get(name)
            .map(|c| c.as_ref())
            .ok_or_else(|| ComplexityError::UnknownCoder(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

impl Default for CoderRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}
