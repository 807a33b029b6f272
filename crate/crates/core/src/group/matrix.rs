use std::fmt;

use crate::error::{Error, Result};

/// A 2×2 integer matrix `[[a, b], [c, d]]`, multiplied with overflow checks.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMat2(pub [[i128; 2]; 2]);

impl IntMat2 {
    pub const IDENTITY: IntMat2 = IntMat2([[1, 0], [0, 1]]);

    pub fn det(&self) -> Option<i128> {
        let [[a, b], [c, d]] = self.0;
        a.checked_mul(d)?.checked_sub(b.checked_mul(c)?)
    }

    pub fn checked_mul(&self, other: &IntMat2) -> Result<IntMat2> {
        let over = || Error::Overflow("integer matrix product");
        let (x, y) = (self.0, other.0);
        let mut out = [[0i128; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let p = x[i][0].checked_mul(y[0][j]).ok_or_else(over)?;
                let q = x[i][1].checked_mul(y[1][j]).ok_or_else(over)?;
                out[i][j] = p.checked_add(q).ok_or_else(over)?;
            }
        }
        Ok(IntMat2(out))
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse_sl2(&self) -> IntMat2 {
        let [[a, b], [c, d]] = self.0;
        IntMat2([[d, -b], [-c, a]])
    }

    pub fn reduce(&self, n: u32) -> MatMod2n {
        let m = 1i128 << n;
        let r = |x: i128| x.rem_euclid(m) as u64;
        let [[a, b], [c, d]] = self.0;
        MatMod2n {
            n,
            e: [r(a), r(b), r(c), r(d)],
        }
    }
}

impl fmt::Display for IntMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.0;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

/// A 2×2 matrix over `ℤ/2ⁿ`, `1 ≤ n ≤ 63`, entries row-major.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatMod2n {
    n: u32,
    e: [u64; 4],
}

impl MatMod2n {
    pub fn new(n: u32, entries: [u64; 4]) -> Result<Self> {
        if !(1..=63).contains(&n) {
            return Err(Error::InvalidArgument(format!("modulus exponent {n} outside 1..=63")));
        }
        let mask = (1u64 << n) - 1;
        let m = MatMod2n {
            n,
            e: entries.map(|x| x & mask),
        };
        if m.det() != 1 & mask {
            return Err(Error::InvalidArgument(format!("determinant of {m} is not 1 mod 2^{n}")));
        }
        Ok(m)
    }

    pub fn identity(n: u32) -> Self {
        MatMod2n { n, e: [1, 0, 0, 1] }
    }

    pub fn exponent(&self) -> u32 {
        self.n
    }

    pub fn entries(&self) -> [u64; 4] {
        self.e
    }

    fn mask(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    pub fn det(&self) -> u64 {
        let [a, b, c, d] = self.e;
        a.wrapping_mul(d).wrapping_sub(b.wrapping_mul(c)) & self.mask()
    }

    pub fn mul(&self, other: &MatMod2n) -> MatMod2n {
        debug_assert_eq!(self.n, other.n);
        let [a, b, c, d] = self.e;
        let [p, q, r, s] = other.e;
        let f = |x: u64, y: u64, z: u64, w: u64| {
            x.wrapping_mul(y).wrapping_add(z.wrapping_mul(w)) & self.mask()
        };
        MatMod2n {
            n: self.n,
            e: [f(a, p, b, r), f(a, q, b, s), f(c, p, d, r), f(c, q, d, s)],
        }
    }

    pub fn inverse(&self) -> MatMod2n {
        let [a, b, c, d] = self.e;
        let neg = |x: u64| x.wrapping_neg() & self.mask();
        MatMod2n {
            n: self.n,
            e: [d, neg(b), neg(c), a],
        }
    }

    /// Reduction to a smaller modulus `2^k`.
    pub fn reduce(&self, k: u32) -> MatMod2n {
        assert!(k >= 1 && k <= self.n, "can only reduce to a smaller modulus");
        let mask = (1u64 << k) - 1;
        MatMod2n {
            n: k,
            e: self.e.map(|x| x & mask),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == MatMod2n::identity(self.n)
    }
}

impl fmt::Display for MatMod2n {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.e;
        write!(f, "[[{a},{b}],[{c},{d}]] mod 2^{}", self.n)
    }
}

/// The Sanov generators `[[1,2],[0,1]]` and `[[1,0],[2,1]]`, which generate a
/// free subgroup of rank two in `SL(2,ℤ)`.
pub fn sanov_generators() -> [IntMat2; 2] {
    [IntMat2([[1, 2], [0, 1]]), IntMat2([[1, 0], [2, 1]])]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sanov_products() {
        let [a, b] = sanov_generators();
        assert_eq!(a.checked_mul(&a).unwrap(), IntMat2([[1, 4], [0, 1]]));
        assert_eq!(a.checked_mul(&b).unwrap(), IntMat2([[5, 2], [2, 1]]));
        assert!(a.reduce(1).is_identity() && b.reduce(1).is_identity());
        assert_eq!(a.checked_mul(&a.inverse_sl2()).unwrap(), IntMat2::IDENTITY);
    }

    #[test]
    fn modular_arithmetic() {
        let [a, b] = sanov_generators();
        let (x, y) = (a.reduce(3), b.reduce(3));
        assert_eq!(x.mul(&y), a.checked_mul(&b).unwrap().reduce(3));
        assert!(x.mul(&x.inverse()).is_identity());
        assert_eq!(x.mul(&x).mul(&x).mul(&x), IntMat2([[1, 8], [0, 1]]).reduce(3));
        assert!(x.mul(&x).mul(&x).mul(&x).is_identity());
        assert_eq!(x.det(), 1);
        assert_eq!(x.reduce(2), a.reduce(2));
        let big = IntMat2([[-3, 10], [2, -7]]);
        assert_eq!(big.reduce(4).entries(), [13, 10, 2, 9]);
    }

    #[test]
    fn wide_modulus_wraps_correctly() {
        let m = MatMod2n::new(63, [u64::MAX >> 1, 0, 0, u64::MAX >> 1]).unwrap();
        assert!(m.mul(&m).is_identity());
        assert!(MatMod2n::new(3, [1, 1, 1, 1]).is_err());
        assert!(MatMod2n::new(64, [1, 0, 0, 1]).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let m = IntMat2([[1 << 70, 0], [0, 1]]);
        assert!(m.checked_mul(&m).is_err());
    }
}
