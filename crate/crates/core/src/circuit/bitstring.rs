use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Fixed-width classical outcome. Clbit 0 is the least significant bit and
/// is printed rightmost.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    width: usize,
    words: Vec<u64>,
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("invalid bitstring {0:?}: expected only '0' and '1'")]
pub struct ParseBitStringError(pub String);

impl BitString {
    pub fn zeros(width: usize) -> Self {
        BitString {
            width,
            words: vec![0; width.div_ceil(64).max(1)],
        }
    }

    /// Low `width` bits of `value`. Bits above `width` are dropped.
    pub fn from_u64(value: u64, width: usize) -> Self {
        let mut b = BitString::zeros(width);
        for i in 0..width.min(64) {
            if value >> i & 1 == 1 {
                b.set(i, true);
            }
        }
        b
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut b = BitString::zeros(bits.len());
        for (i, &v) in bits.iter().enumerate() {
            b.set(i, v);
        }
        b
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.width, "bit {i} out of range for width {}", self.width);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.width, "bit {i} out of range for width {}", self.width);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    /// Value as an integer when the width fits in 64 bits.
    pub fn as_u64(&self) -> Option<u64> {
        (self.width <= 64).then(|| self.words[0])
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.width
            .cmp(&other.width)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.width)
            .rev()
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = ParseBitStringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let width = s.len();
        let mut b = BitString::zeros(width);
        for (k, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => b.set(width - 1 - k, true),
                _ => return Err(ParseBitStringError(s.to_string())),
            }
        }
        Ok(b)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clbit_zero_is_rightmost() {
        let b = BitString::from_u64(0b110, 4);
        assert_eq!(b.to_string(), "0110");
        assert!(b.get(1) && b.get(2) && !b.get(0));
        assert_eq!("0110".parse::<BitString>().unwrap(), b);
    }

    #[test]
    fn ordering_matches_text() {
        let mut v: Vec<BitString> = ["101", "011", "110", "000"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        v.sort();
        let text: Vec<String> = v.iter().map(|b| b.to_string()).collect();
        assert_eq!(text, ["000", "011", "101", "110"]);
    }

    #[test]
    fn wide_strings() {
        let mut b = BitString::zeros(130);
        b.set(129, true);
        b.set(0, true);
        let s = b.to_string();
        assert_eq!(s.len(), 130);
        assert_eq!(s.parse::<BitString>().unwrap(), b);
        assert_eq!(b.as_u64(), None);
        assert_eq!(b.count_ones(), 2);
    }

    #[test]
    fn rejects_garbage() {
        assert!("01a".parse::<BitString>().is_err());
    }
}
