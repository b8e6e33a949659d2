use super::{CoordPair, OrderValue};

// Spreads the 32 bits of `v` into the even bit positions of a u64.
#[inline]
fn spread(v: u32) -> u64 {
    let mut x = u64::from(v);
    x = (x | (x << 16)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x << 8)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

#[inline]
fn compact(v: u64) -> u32 {
    let mut x = v & 0x5555_5555_5555_5555;
    x = (x | (x >> 1)) & 0x3333_3333_3333_3333;
    x = (x | (x >> 2)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x >> 4)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x >> 8)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x >> 16)) & 0x0000_0000_FFFF_FFFF;
    x as u32
}

/// Morton order value: the bits of `i` and `j` interleaved, `i` taking the
/// higher bit of every pair.
#[inline]
pub fn z_encode(p: CoordPair) -> OrderValue {
    (spread(p.i) << 1) | spread(p.j)
}

#[inline]
pub fn z_decode(h: OrderValue) -> CoordPair {
    CoordPair::new(compact(h >> 1), compact(h))
}

/// Reference Z-order encoder: the one-state Mealy automaton fed one bit pair
/// at a time, most significant first.
pub fn z_encode_automaton(p: CoordPair) -> OrderValue {
    let mut h = 0u64;
    for level in (0..32).rev() {
        let bi = (p.i >> level) & 1;
        let bj = (p.j >> level) & 1;
        // (0,0)->0, (0,1)->1, (1,0)->2, (1,1)->3
        let digit = match (bi, bj) {
            (0, 0) => 0,
            (0, 1) => 1,
            (1, 0) => 2,
            _ => 3,
        };
        h = (h << 2) | digit;
    }
    h
}
