/// Largest tuple size whose pattern set fits a [`PatternMask`] (6! = 720 bits).
pub const MAX_MASK_K: usize = 6;

const WORDS: usize = 12;

/// A set of pattern ranks of `S_k`, `k <= 6`, as a 720-bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PatternMask {
    words: [u64; WORDS],
}

impl PatternMask {
    pub fn new() -> Self {
        PatternMask { words: [0; WORDS] }
    }

    #[inline]
    pub fn insert(&mut self, rank: u32) {
        self.words[(rank >> 6) as usize] |= 1u64 << (rank & 63);
    }

    #[inline]
    pub fn contains(&self, rank: u32) -> bool {
        self.words[(rank >> 6) as usize] & (1u64 << (rank & 63)) != 0
    }

    #[inline]
    pub fn count(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn union(&self, other: &PatternMask) -> PatternMask {
        let mut out = *self;
        for (a, b) in out.words.iter_mut().zip(other.words.iter()) {
            *a |= b;
        }
        out
    }

    /// Ranks in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        (0..(WORDS * 64) as u32).filter(move |&r| self.contains(r))
    }
}
