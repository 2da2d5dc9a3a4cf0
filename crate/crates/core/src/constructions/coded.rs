use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Largest ground set a construction will materialize.
pub const MAX_GROUND: usize = 1 << 24;

/// `[b^L]` identified with digit strings in `[b]^L`:
/// `x - 1 = sum (x_i - 1) b^(L-i)`, most significant digit first.
///
/// A level-`l` block is the set of elements sharing a code prefix of length
/// `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodedGround {
    base: u32,
    length: u32,
    size: usize,
}

impl CodedGround {
    pub fn new(base: u32, length: u32) -> Result<Self> {
        if base < 2 || length < 1 {
            return Err(Error::domain(format!("need base >= 2 and length >= 1, got {base}^{length}")));
        }
        let size = (base as u128)
            .checked_pow(length)
            .filter(|&s| s <= MAX_GROUND as u128)
            .ok_or_else(|| Error::Unsupported(format!("ground {base}^{length} exceeds {MAX_GROUND}")))?;
        Ok(CodedGround {
            base,
            length,
            size: size as usize,
        })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn check(&self, x: u32) -> Result<()> {
        if x == 0 || x as usize > self.size {
            return Err(Error::domain(format!("element {x} outside 1..={}", self.size)));
        }
        Ok(())
    }

    /// The code `(x_1, ..., x_L)` of `x`, digits in `1..=base`.
    pub fn encode(&self, x: u32) -> Result<Vec<u32>> {
        self.check(x)?;
        let mut digits = vec![0u32; self.length as usize];
        self.fill_digits(x, &mut digits);
        Ok(digits)
    }

    #[inline]
    fn fill_digits(&self, x: u32, out: &mut [u32]) {
        let mut rest = x - 1;
        for d in out.iter_mut().rev() {
            *d = rest % self.base + 1;
            rest /= self.base;
        }
    }

    pub fn decode(&self, code: &[u32]) -> Result<u32> {
        if code.len() != self.length as usize {
            return Err(Error::domain(format!("code of length {} for length {}", code.len(), self.length)));
        }
        let mut x = 0u32;
        for &d in code {
            if d == 0 || d > self.base {
                return Err(Error::domain(format!("digit {d} outside 1..={}", self.base)));
            }
            x = x * self.base + (d - 1);
        }
        Ok(x + 1)
    }

    /// First (1-based) level at which the codes of `x` and `y` differ;
    /// `None` when `x == y`.
    pub fn first_diff(&self, x: u32, y: u32) -> Result<Option<usize>> {
        let cx = self.encode(x)?;
        let cy = self.encode(y)?;
        Ok(cx.iter().zip(&cy).position(|(a, b)| a != b).map(|i| i + 1))
    }

    /// The permutation in which `x` precedes `y` iff, at `d = first_diff(x, y)`,
    /// digit `x_d` ranks before `y_d` in the order used at level `d`.
    ///
    /// `level_rank[l][d - 1]` is the 1-based rank of digit `d` at level
    /// `l + 1`. Comparing `x` and `y` at their first differing level is
    /// lexicographic comparison of their rank strings, so the position of `x`
    /// is its rank string read as a base-`b` number.
    pub fn order_by_levels(&self, level_rank: &[Vec<u32>]) -> Result<Permutation> {
        let len = self.length as usize;
        if level_rank.len() != len {
            return Err(Error::domain(format!("{} level orders for {len} levels", level_rank.len())));
        }
        for ranks in level_rank {
            let mut seen = vec![false; self.base as usize + 1];
            for &r in ranks {
                if r == 0 || r > self.base || std::mem::replace(&mut seen[r as usize], true) {
                    return Err(Error::domain(format!("{ranks:?} is not a ranking of 1..={}", self.base)));
                }
            }
            if ranks.len() != self.base as usize {
                return Err(Error::domain(format!("{ranks:?} is not a ranking of 1..={}", self.base)));
            }
        }
        let mut positions = vec![0u32; self.size];
        let mut digits = vec![0u32; len];
        for x in 1..=self.size as u32 {
            self.fill_digits(x, &mut digits);
            let mut key = 0u32;
            for (l, &d) in digits.iter().enumerate() {
                key = key * self.base + (level_rank[l][d as usize - 1] - 1);
            }
            positions[x as usize - 1] = key + 1;
        }
        Permutation::from_positions(&positions)
    }
}

/// Mixed-radix lattice `[a_1] x ... x [a_k]` on `[a_1 ... a_k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    sides: Vec<u32>,
    size: usize,
}

impl Lattice {
    pub fn new(sides: Vec<u32>) -> Result<Self> {
        if sides.is_empty() || sides.contains(&0) {
            return Err(Error::domain(format!("invalid lattice sides {sides:?}")));
        }
        let size = sides
            .iter()
            .try_fold(1u128, |acc, &s| Some(acc * s as u128).filter(|&p| p <= MAX_GROUND as u128))
            .ok_or_else(|| Error::Unsupported(format!("lattice {sides:?} exceeds {MAX_GROUND} points")))?;
        Ok(Lattice {
            sides,
            size: size as usize,
        })
    }

    pub fn sides(&self) -> &[u32] {
        &self.sides
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    /// Number of points of the projection omitting coordinate `j` (0-based).
    pub fn projection_size(&self, j: usize) -> usize {
        self.sides
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, &s)| s as usize)
            .product()
    }

    /// Coordinates `(i_1, ..., i_k)` of `x`, each 1-based.
    pub fn coords(&self, x: u32) -> Vec<u32> {
        let mut out = vec![0u32; self.sides.len()];
        let mut rest = x - 1;
        for (c, &s) in out.iter_mut().zip(&self.sides).rev() {
            *c = rest % s + 1;
            rest /= s;
        }
        out
    }

    /// `x` with coordinate `j` (0-based) omitted, read back as an element of
    /// `[projection_size(j)]`.
    pub fn project(&self, coords: &[u32], j: usize) -> u32 {
        let mut v = 0u32;
        for (i, (&c, &s)) in coords.iter().zip(&self.sides).enumerate() {
            if i != j {
                v = v * s + (c - 1);
            }
        }
        v + 1
    }
}
