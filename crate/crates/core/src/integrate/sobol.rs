//! Sobol points with a random digital shift per replicate.
//!
//! Direction numbers are the Joe-Kuo set for the first twelve dimensions.

use std::sync::LazyLock;

pub const MAX_DIMS: usize = 12;
const BITS: usize = 32;

// (degree s, polynomial coefficients a, initial m_1..m_s) for dimensions 2..=12.
const PARAMS: [(usize, u32, &[u32]); MAX_DIMS - 1] = [
    (1, 0, &[1]),
    (2, 1, &[1, 3]),
    (3, 1, &[1, 3, 1]),
    (3, 2, &[1, 1, 1]),
    (4, 1, &[1, 1, 3, 3]),
    (4, 4, &[1, 3, 5, 13]),
    (5, 2, &[1, 1, 5, 5, 17]),
    (5, 4, &[1, 1, 5, 5, 5]),
    (5, 7, &[1, 1, 7, 11, 19]),
    (5, 11, &[1, 1, 5, 1, 1]),
    (5, 13, &[1, 1, 1, 3, 11]),
];

pub struct Directions {
    v: [[u32; BITS]; MAX_DIMS],
}

fn build() -> Directions {
    let mut v = [[0u32; BITS]; MAX_DIMS];
    for (k, slot) in v[0].iter_mut().enumerate() {
        *slot = 1 << (31 - k);
    }
    for (d, &(s, a, m)) in PARAMS.iter().enumerate() {
        let row = &mut v[d + 1];
        for k in 0..s {
            row[k] = m[k] << (31 - k);
        }
        for k in s..BITS {
            let mut x = row[k - s] ^ (row[k - s] >> s);
            for j in 1..s {
                if (a >> (s - 1 - j)) & 1 == 1 {
                    x ^= row[k - j];
                }
            }
            row[k] = x;
        }
    }
    Directions { v }
}

pub static DIRECTIONS: LazyLock<Directions> = LazyLock::new(build);

impl Directions {
    /// Unscrambled 32-bit coordinate `dim` of point `index`.
    #[inline]
    pub fn coordinate(&self, index: u32, dim: usize) -> u32 {
        let row = &self.v[dim];
        let mut x = 0;
        let mut i = index;
        let mut k = 0;
        while i != 0 {
            if i & 1 == 1 {
                x ^= row[k];
            }
            i >>= 1;
            k += 1;
        }
        x
    }
}
