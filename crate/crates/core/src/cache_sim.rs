//! Fully associative LRU cache over element-granularity address traces.

use std::fmt::Write as _;
use std::io::BufRead;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CacheError {
    #[error("cache capacity must be at least one block")]
    ZeroCapacity,
    #[error("block size {0} is not a positive power of two")]
    BlockSize(u64),
    #[error("address {address} outside footprint {footprint}")]
    OutOfFootprint { address: u64, footprint: u64 },
    #[error("capacity fraction {0} not in (0, 1]")]
    Fraction(f64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("read failed: {0}")]
    Io(String),
}

pub const DEFAULT_BLOCK_SIZE: u64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CacheConfig {
    capacity_blocks: u64,
    block_size: u64,
}

impl CacheConfig {
    pub fn new(capacity_blocks: u64, block_size: u64) -> Result<Self, CacheError> {
        if capacity_blocks == 0 {
            return Err(CacheError::ZeroCapacity);
        }
        if !block_size.is_power_of_two() {
            return Err(CacheError::BlockSize(block_size));
        }
        Ok(CacheConfig {
            capacity_blocks,
            block_size,
        })
    }

    pub fn capacity_blocks(&self) -> u64 {
        self.capacity_blocks
    }

    pub fn block_size(&self) -> u64 {
        self.block_size
    }

    /// Same block size, capacity `ceil(fraction * footprint / block_size)`,
    /// at least one block.
    pub fn for_fraction(&self, fraction: f64, footprint: u64) -> Result<Self, CacheError> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(CacheError::Fraction(fraction));
        }
        let blocks = (fraction * footprint as f64 / self.block_size as f64).ceil() as u64;
        CacheConfig::new(blocks.max(1), self.block_size)
    }
}

/// Addresses in access order, each below `footprint`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AccessTrace {
    addresses: Vec<u64>,
    footprint: u64,
}

impl AccessTrace {
    pub fn new(addresses: Vec<u64>, footprint: u64) -> Result<Self, CacheError> {
        if let Some(&address) = addresses.iter().find(|&&a| a >= footprint) {
            return Err(CacheError::OutOfFootprint { address, footprint });
        }
        Ok(AccessTrace { addresses, footprint })
    }

    /// Footprint taken as one past the largest address.
    pub fn from_addresses(addresses: Vec<u64>) -> Self {
        let footprint = addresses.iter().max().map_or(0, |&a| a + 1);
        AccessTrace { addresses, footprint }
    }

    pub fn addresses(&self) -> &[u64] {
        &self.addresses
    }

    pub fn footprint(&self) -> u64 {
        self.footprint
    }

    pub fn len(&self) -> usize {
        self.addresses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.addresses.is_empty()
    }

    /// Newline-delimited decimal addresses; blank lines are ignored.
    pub fn read<R: BufRead>(reader: R) -> Result<Self, CacheError> {
        let mut addresses = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| CacheError::Io(e.to_string()))?;
            let text = line.trim();
            if text.is_empty() {
                continue;
            }
            let a = text.parse().map_err(|e: std::num::ParseIntError| CacheError::Parse {
                line: idx + 1,
                msg: e.to_string(),
            })?;
            addresses.push(a);
        }
        Ok(AccessTrace::from_addresses(addresses))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.addresses.len() * 6);
        for a in &self.addresses {
            writeln!(out, "{a}").unwrap();
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MissReport {
    pub accesses: u64,
    pub misses: u64,
}

const NIL: u32 = u32::MAX;

// Recency list threaded through block ids: head is most recent.
struct Lru {
    prev: Vec<u32>,
    next: Vec<u32>,
    resident: Vec<bool>,
    head: u32,
    tail: u32,
    len: u64,
    capacity: u64,
}

impl Lru {
    fn new(blocks: usize, capacity: u64) -> Self {
        Lru {
            prev: vec![NIL; blocks],
            next: vec![NIL; blocks],
            resident: vec![false; blocks],
            head: NIL,
            tail: NIL,
            len: 0,
            capacity,
        }
    }

    fn unlink(&mut self, b: u32) {
        let (p, n) = (self.prev[b as usize], self.next[b as usize]);
        if p == NIL {
            self.head = n
        } else {
            self.next[p as usize] = n
        }
        if n == NIL {
            self.tail = p
        } else {
            self.prev[n as usize] = p
        }
    }

    fn push_front(&mut self, b: u32) {
        self.prev[b as usize] = NIL;
        self.next[b as usize] = self.head;
        if self.head != NIL {
            self.prev[self.head as usize] = b;
        } else {
            self.tail = b;
        }
        self.head = b;
    }

    /// Returns true on a hit.
    fn touch(&mut self, b: u32) -> bool {
        if self.resident[b as usize] {
            if self.head != b {
                self.unlink(b);
                self.push_front(b);
            }
            return true;
        }
        if self.len == self.capacity {
            let victim = self.tail;
            self.unlink(victim);
            self.resident[victim as usize] = false;
        } else {
            self.len += 1;
        }
        self.resident[b as usize] = true;
        self.push_front(b);
        false
    }
}

/// Exact miss count of a fully associative LRU cache.
pub fn simulate(config: CacheConfig, trace: &AccessTrace) -> MissReport {
    let blocks = trace.footprint.div_ceil(config.block_size) as usize;
    let shift = config.block_size.trailing_zeros();
    let mut lru = Lru::new(blocks, config.capacity_blocks);
    let misses = trace
        .addresses
        .iter()
        .filter(|&&a| !lru.touch((a >> shift) as u32))
        .count() as u64;
    MissReport {
        accesses: trace.addresses.len() as u64,
        misses,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub fraction: f64,
    pub capacity_blocks: u64,
    pub misses: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub block_size: u64,
    pub accesses: u64,
    pub points: Vec<SweepPoint>,
}

impl SweepReport {
    /// `fraction,misses,accesses` with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("fraction,misses,accesses\n");
        for p in &self.points {
            writeln!(out, "{},{},{}", p.fraction, p.misses, self.accesses).unwrap();
        }
        out
    }
}

fn sweep_point(template: CacheConfig, trace: &AccessTrace, fraction: f64) -> SweepPoint {
    // Fractions are validated up front.
    let config = template.for_fraction(fraction, trace.footprint).unwrap();
    SweepPoint {
        fraction,
        capacity_blocks: config.capacity_blocks,
        misses: simulate(config, trace).misses,
    }
}

fn check_fractions(fractions: &[f64]) -> Result<(), CacheError> {
    match fractions.iter().find(|&&f| !(f > 0.0 && f <= 1.0)) {
        Some(&f) => Err(CacheError::Fraction(f)),
        None => Ok(()),
    }
}

pub fn sweep_sequential(
    template: CacheConfig,
    trace: &AccessTrace,
    fractions: &[f64],
) -> Result<SweepReport, CacheError> {
    check_fractions(fractions)?;
    Ok(SweepReport {
        block_size: template.block_size,
        accesses: trace.len() as u64,
        points: fractions.iter().map(|&f| sweep_point(template, trace, f)).collect(),
    })
}

/// One simulation per fraction on the rayon pool.
#[cfg(feature = "parallel")]
pub fn sweep_parallel(
    template: CacheConfig,
    trace: &AccessTrace,
    fractions: &[f64],
) -> Result<SweepReport, CacheError> {
    use rayon::prelude::*;

    check_fractions(fractions)?;
    Ok(SweepReport {
        block_size: template.block_size,
        accesses: trace.len() as u64,
        points: fractions.par_iter().map(|&f| sweep_point(template, trace, f)).collect(),
    })
}

/// Miss counts at each capacity fraction of the trace footprint. Runs in
/// parallel when the `parallel` feature is on.
pub fn sweep(template: CacheConfig, trace: &AccessTrace, fractions: &[f64]) -> Result<SweepReport, CacheError> {
    #[cfg(feature = "parallel")]
    return sweep_parallel(template, trace, fractions);
    #[cfg(not(feature = "parallel"))]
    return sweep_sequential(template, trace, fractions);
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Vec-based LRU: most recent at the back.
    fn naive_misses(capacity: usize, block: u64, addrs: &[u64]) -> u64 {
        let mut cache: Vec<u64> = Vec::new();
        let mut misses = 0;
        for a in addrs {
            let b = a / block;
            if let Some(pos) = cache.iter().position(|&x| x == b) {
                cache.remove(pos);
            } else {
                misses += 1;
                if cache.len() == capacity {
                    cache.remove(0);
                }
            }
            cache.push(b);
        }
        misses
    }

    fn trace(addrs: &[u64]) -> AccessTrace {
        AccessTrace::from_addresses(addrs.to_vec())
    }

    #[test]
    fn thrash_and_retain() {
        let t = trace(&[0, 8, 0]);
        assert_eq!(simulate(CacheConfig::new(1, 8).unwrap(), &t).misses, 3);
        assert_eq!(simulate(CacheConfig::new(2, 8).unwrap(), &t).misses, 2);
    }

    #[test]
    fn same_block_hits() {
        let t = trace(&[0, 1, 7, 8, 15]);
        let r = simulate(CacheConfig::new(1, 8).unwrap(), &t);
        assert_eq!(r, MissReport { accesses: 5, misses: 2 });
    }

    #[test]
    fn config_validation() {
        assert_eq!(CacheConfig::new(0, 8), Err(CacheError::ZeroCapacity));
        assert_eq!(CacheConfig::new(4, 6), Err(CacheError::BlockSize(6)));
        assert_eq!(CacheConfig::new(4, 0), Err(CacheError::BlockSize(0)));
        assert!(AccessTrace::new(vec![3, 9], 9).is_err());
    }

    #[test]
    fn fraction_capacity_rounds_up() {
        let c = CacheConfig::new(1, 8).unwrap();
        assert_eq!(c.for_fraction(0.05, 8192).unwrap().capacity_blocks(), 52);
        assert_eq!(c.for_fraction(1e-9, 8).unwrap().capacity_blocks(), 1);
        assert!(c.for_fraction(0.0, 8).is_err());
        assert!(c.for_fraction(1.5, 8).is_err());
    }

    #[test]
    fn empty_trace() {
        let t = AccessTrace::default();
        let r = sweep(CacheConfig::new(1, 8).unwrap(), &t, &[0.5, 1.0]).unwrap();
        assert!(r.points.iter().all(|p| p.misses == 0));
    }

    #[test]
    fn parse_and_print() {
        let t = AccessTrace::read("3\n\n17\n 4 \n".as_bytes()).unwrap();
        assert_eq!(t.addresses(), &[3, 17, 4]);
        assert_eq!(t.footprint(), 18);
        assert_eq!(AccessTrace::read(t.to_text().as_bytes()).unwrap(), t);
        assert!(matches!(
            AccessTrace::read("1\nx\n".as_bytes()),
            Err(CacheError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn csv_report() {
        let t = trace(&[0, 8, 16, 0]);
        let r = sweep_sequential(CacheConfig::new(1, 8).unwrap(), &t, &[1.0]).unwrap();
        assert_eq!(r.to_csv(), "fraction,misses,accesses\n1,3,4\n");
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential() {
        let addrs: Vec<u64> = (0..5000u64).map(|x| (x * 7919) % 1024).collect();
        let t = trace(&addrs);
        let fr = [0.05, 0.1, 0.2, 0.5, 1.0];
        let c = CacheConfig::new(1, 8).unwrap();
        assert_eq!(
            sweep_parallel(c, &t, &fr).unwrap(),
            sweep_sequential(c, &t, &fr).unwrap()
        );
    }

    proptest! {
        #[test]
        fn matches_naive_lru(addrs in prop::collection::vec(0u64..200, 0..300), cap in 1usize..20) {
            let t = trace(&addrs);
            let got = simulate(CacheConfig::new(cap as u64, 4).unwrap(), &t).misses;
            prop_assert_eq!(got, naive_misses(cap, 4, &addrs));
        }

        #[test]
        fn misses_monotone_and_bounded(addrs in prop::collection::vec(0u64..512, 1..400)) {
            let t = trace(&addrs);
            let mut distinct: Vec<u64> = addrs.iter().map(|a| a / 8).collect();
            distinct.sort_unstable();
            distinct.dedup();
            let mut last = u64::MAX;
            for cap in 1..=distinct.len() as u64 + 2 {
                let r = simulate(CacheConfig::new(cap, 8).unwrap(), &t);
                prop_assert!(r.misses <= r.accesses);
                prop_assert!(r.misses <= last);
                last = r.misses;
            }
            prop_assert_eq!(last, distinct.len() as u64);
        }
    }
}
