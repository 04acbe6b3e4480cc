//! The Klein four-group `F2^2 = {e, a, b, c}` under componentwise addition mod 2.
//!
//! Elements are stored as a two-bit integer `(b1, b0)` so that group addition is
//! a single XOR. The names of the nonzero elements are fixed as `a = 01`,
//! `b = 10`, `c = 11`.

use core::fmt;
use core::ops::{Add, AddAssign};
use core::str::FromStr;

/// An element of the Klein four-group.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[repr(transparent)]
pub struct F22(u8);

impl F22 {
    /// The identity `(0,0)`.
    pub const E: F22 = F22(0);
    pub const A: F22 = F22(1);
    pub const B: F22 = F22(2);
    pub const C: F22 = F22(3);

    /// All four elements in encoding order.
    pub const ALL: [F22; 4] = [F22::E, F22::A, F22::B, F22::C];
    /// The three non-identity elements.
    pub const NONZERO: [F22; 3] = [F22::A, F22::B, F22::C];

    /// Builds an element from its two-bit code; only the low two bits are used.
    #[inline]
    pub const fn from_bits(bits: u8) -> F22 {
        F22(bits & 3)
    }

    #[inline]
    pub const fn bits(self) -> u8 {
        self.0
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub const fn is_identity(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub const fn add(self, other: F22) -> F22 {
        F22(self.0 ^ other.0)
    }

    /// `n * self`: the sum of `n` copies, which only depends on the parity of `n`.
    #[inline]
    pub const fn times(self, n: usize) -> F22 {
        if n % 2 == 0 {
            F22::E
        } else {
            self
        }
    }

    pub const fn symbol(self) -> char {
        match self.0 {
            0 => 'e',
            1 => 'a',
            2 => 'b',
            _ => 'c',
        }
    }
}

// Addition in F_2^2 is bitwise XOR.
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for F22 {
    type Output = F22;
    #[inline]
    fn add(self, rhs: F22) -> F22 {
        F22(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl AddAssign for F22 {
    #[inline]
    fn add_assign(&mut self, rhs: F22) {
        self.0 ^= rhs.0;
    }
}

impl core::iter::Sum for F22 {
    fn sum<I: Iterator<Item = F22>>(iter: I) -> F22 {
        iter.fold(F22::E, |acc, x| acc + x)
    }
}

impl fmt::Display for F22 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use fmt::Write;
        f.write_char(self.symbol())
    }
}

impl fmt::Debug for F22 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Error for malformed group element tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseF22Error;

impl fmt::Display for ParseF22Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected one of e, a, b, c, 00, 01, 10, 11")
    }
}

impl FromStr for F22 {
    type Err = ParseF22Error;

    fn from_str(s: &str) -> Result<F22, ParseF22Error> {
        match s {
            "e" | "00" => Ok(F22::E),
            "a" | "01" => Ok(F22::A),
            "b" | "10" => Ok(F22::B),
            "c" | "11" => Ok(F22::C),
            _ => Err(ParseF22Error),
        }
    }
}

/// Errors raised by the combinatorial identities below when their
/// hypotheses are not met.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupError {
    /// Inputs that must be pairwise distinct are not.
    NotDistinct,
    /// An input that must be a non-identity element is `e`.
    IdentityNotAllowed,
}

impl fmt::Display for GroupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupError::NotDistinct => f.write_str("inputs must be pairwise distinct"),
            GroupError::IdentityNotAllowed => f.write_str("input must be a non-identity element"),
        }
    }
}

impl core::error::Error for GroupError {}

/// The unique element not in `{x, y, z}`; equals `x + y + z`.
pub fn fourth_element(x: F22, y: F22, z: F22) -> Result<F22, GroupError> {
    if x == y || y == z || x == z {
        return Err(GroupError::NotDistinct);
    }
    Ok(x + y + z)
}

/// The four sums `y_i + z_j`, row-major in `(i, j)`.
///
/// Requires `y1 != y2`, both non-identity, and `z1 != z2`.
pub fn pair_sums(y1: F22, y2: F22, z1: F22, z2: F22) -> Result<[F22; 4], GroupError> {
    if y1 == y2 || z1 == z2 {
        return Err(GroupError::NotDistinct);
    }
    if y1.is_identity() || y2.is_identity() {
        return Err(GroupError::IdentityNotAllowed);
    }
    Ok([y1 + z1, y1 + z2, y2 + z1, y2 + z2])
}

/// A multiset of group elements, stored as occurrence counts.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct SignCounts(pub [u64; 4]);

impl SignCounts {
    pub fn new() -> Self {
        SignCounts([0; 4])
    }

    pub fn from_slice(xs: &[F22]) -> Self {
        let mut c = SignCounts::new();
        for &x in xs {
            c.push(x);
        }
        c
    }

    #[inline]
    pub fn push(&mut self, x: F22) {
        self.0[x.index()] += 1;
    }

    #[inline]
    pub fn count(&self, x: F22) -> u64 {
        self.0[x.index()]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn merge(&mut self, other: &SignCounts) {
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            *a += *b;
        }
    }

    /// The underlying set: bit `i` is set when element `i` occurs.
    pub fn support(&self) -> SignSet {
        let mut s = SignSet::EMPTY;
        for x in F22::ALL {
            if self.count(x) > 0 {
                s.insert(x);
            }
        }
        s
    }

    /// Multiplicities sorted in decreasing order, e.g. `[3,1,1,1]` for `{p,q,s,t,t,t}`.
    pub fn shape(&self) -> [u64; 4] {
        let mut s = self.0;
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }
}

impl fmt::Display for SignCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        let mut first = true;
        for x in F22::ALL {
            for _ in 0..self.count(x) {
                if !first {
                    f.write_str(",")?;
                }
                first = false;
                write!(f, "{x}")?;
            }
        }
        f.write_str("}")
    }
}

impl fmt::Debug for SignCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A subset of `F2^2` as a four-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct SignSet(u8);

impl SignSet {
    pub const EMPTY: SignSet = SignSet(0);
    pub const FULL: SignSet = SignSet(0b1111);

    pub fn from_slice(xs: &[F22]) -> Self {
        let mut s = SignSet::EMPTY;
        for &x in xs {
            s.insert(x);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, x: F22) {
        self.0 |= 1 << x.bits();
    }

    #[inline]
    pub fn contains(self, x: F22) -> bool {
        self.0 & (1 << x.bits()) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_full(self) -> bool {
        self.0 == 0b1111
    }

    pub fn is_subset(self, other: SignSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: SignSet) -> SignSet {
        SignSet(self.0 | other.0)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn iter(self) -> impl Iterator<Item = F22> {
        F22::ALL.into_iter().filter(move |&x| self.contains(x))
    }
}

impl fmt::Display for SignSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for SignSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromIterator<F22> for SignSet {
    fn from_iter<I: IntoIterator<Item = F22>>(iter: I) -> Self {
        let mut s = SignSet::EMPTY;
        for x in iter {
            s.insert(x);
        }
        s
    }
}
