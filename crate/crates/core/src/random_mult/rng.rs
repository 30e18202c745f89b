//! Counter-based sign generator.
//!
//! The signs for prime indices `64*b .. 64*b + 63` of sample stream `s` under
//! seed `k` are the bits of
//!
//! ```text
//! word(k, s, b) = mix(mix(mix(k) ^ s) ^ b)
//! ```
//!
//! where `mix` is the SplitMix64 output function applied to `x + 0x9E3779B97F4A7C15`.
//! Bit `i` set means the prime with index `64*b + i` gets the sign `-1`.
//! No state is carried between draws, so any worker can produce any stream.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn mix(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 64 sign bits for block `block` of stream `stream`.
#[inline]
pub fn sign_word(seed: u64, stream: u64, block: u64) -> u64 {
    mix(mix(mix(seed) ^ stream) ^ block)
}

/// Sign bits for the first `count` prime indices, written into `out`.
pub fn fill_sign_words(seed: u64, stream: u64, count: usize, out: &mut Vec<u64>) {
    out.clear();
    let blocks = count.div_ceil(64);
    out.extend((0..blocks as u64).map(|b| sign_word(seed, stream, b)));
    if !count.is_multiple_of(64) {
        if let Some(last) = out.last_mut() {
            *last &= (1u64 << (count % 64)) - 1;
        }
    }
}
