//! Fixed-width item sets used by the search. Instances handled by the
//! oracle have at most [`Bits::CAPACITY`] items.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub(crate) struct Bits(pub u128);

impl Bits {
    pub const CAPACITY: usize = 128;
    pub const EMPTY: Bits = Bits(0);

    pub fn full(len: usize) -> Bits {
        if len >= Self::CAPACITY {
            Bits(u128::MAX)
        } else {
            Bits((1u128 << len) - 1)
        }
    }

    pub fn single(i: usize) -> Bits {
        Bits(1u128 << i)
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u128 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u128 << i);
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Bits) -> Bits {
        Bits(self.0 | other.0)
    }

    pub fn iter(self) -> BitsIter {
        BitsIter(self.0)
    }
}

pub(crate) struct BitsIter(u128);

impl Iterator for BitsIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}
