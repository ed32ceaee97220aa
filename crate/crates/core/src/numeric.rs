//! Floating-point building blocks: error-free transformations, a small
//! double-double type used for phase reduction modulo one, compensated
//! accumulators and a fixed-shape pairwise reduction.

use num_complex::Complex64;
use std::f64::consts::TAU;

/// `a + b = s + err` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// `a * b = p + err` exactly (requires a hardware FMA for speed; the
/// result is exact either way).
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Unnormalised double-double value `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

const TWO_POW_32: f64 = 4_294_967_296.0;
const EXACT_INT_LIMIT: u64 = 1 << 53;

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };

    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        Self { hi, lo }
    }

    pub fn from_f64(v: f64) -> Self {
        Self { hi: v, lo: 0.0 }
    }

    /// `num / den` to roughly 106 bits. Both magnitudes must stay below 2^53
    /// so that the remainder computation is exact; returns `None` otherwise.
    pub fn from_ratio(num: i64, den: u64) -> Option<Self> {
        if den == 0 || den >= EXACT_INT_LIMIT || num.unsigned_abs() >= EXACT_INT_LIMIT {
            return None;
        }
        let n = num as f64;
        let d = den as f64;
        let hi = n / d;
        let (p, e) = two_prod(hi, d);
        let rem = (n - p) - e;
        Some(Self::new(hi, rem / d))
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Self { hi, lo }
    }

    /// Representative of `self mod 1` in `[-1/2, 1/2]`.
    pub fn frac_centered(self) -> Self {
        let h = self.hi - self.hi.round();
        let (mut s, e) = two_sum(h, self.lo);
        let r = s.round();
        if r != 0.0 {
            s -= r;
        }
        let (hi, lo) = quick_two_sum(s, e);
        Self { hi, lo }
    }

    /// `n * self mod 1`, centered, for any `n < 2^64`.
    ///
    /// `n` is split into two 32-bit halves so every partial product is formed
    /// exactly and reduced before it is added.
    pub fn mul_u64_mod1(self, n: u64) -> Self {
        let parts = [((n >> 32) as f64) * TWO_POW_32, (n & 0xFFFF_FFFF) as f64];
        let mut acc = Self::ZERO;
        for c in parts {
            if c == 0.0 {
                continue;
            }
            for v in [self.hi, self.lo] {
                let (p, e) = two_prod(c, v);
                for w in [p, e] {
                    let r = w - w.round();
                    acc = acc + Self { hi: r, lo: 0.0 };
                }
            }
        }
        acc.frac_centered()
    }
}

impl std::ops::Add for DoubleDouble {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let (t, f) = two_sum(self.lo, other.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl std::ops::Neg for DoubleDouble {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl std::ops::Sub for DoubleDouble {
    type Output = Self;

    fn sub(self, other: Self) -> Self {
        self + -other
    }
}

/// `e(theta) = exp(2 pi i theta)` after reducing `theta` modulo one.
#[inline]
pub fn unit_phase(theta: f64) -> Complex64 {
    let r = theta - theta.round();
    let (s, c) = (TAU * r).sin_cos();
    Complex64::new(c, s)
}

/// `e(num / den)` with the residue reduced exactly in integer arithmetic.
#[inline]
pub fn unit_phase_ratio(num: u128, den: u128) -> Complex64 {
    let r = num % den;
    let centered = if 2 * r > den {
        -(((den - r) as f64) / den as f64)
    } else {
        r as f64 / den as f64
    };
    let (s, c) = (TAU * centered).sin_cos();
    Complex64::new(c, s)
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated accumulator for complex values.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Pairwise sum with a split point that depends only on the slice length,
/// so the rounding pattern is identical however the values were produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        let mut acc = CompensatedSum::new();
        for &v in values {
            acc.add(v);
        }
        return acc.value();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_is_accurate_beyond_double() {
        let third = DoubleDouble::from_ratio(1, 3).unwrap();
        // 3 * (1/3) reduced mod 1 must vanish to ~1e-32.
        let r = third.mul_u64_mod1(3);
        assert!(r.to_f64().abs() < 1e-30, "{r:?}");
        assert!(DoubleDouble::from_ratio(1, 1 << 53).is_none());
    }

    #[test]
    fn large_multiplier_reduction() {
        // t = 1/7 exactly representable only as a ratio; n^2 t for n = 10^6
        // has an exact fractional part (10^12 mod 7) / 7.
        let t = DoubleDouble::from_ratio(1, 7).unwrap();
        let n2: u64 = 1_000_000_000_000;
        let got = t.mul_u64_mod1(n2).to_f64();
        let rem = (n2 % 7) as f64 / 7.0;
        let want = if rem > 0.5 { rem - 1.0 } else { rem };
        assert!((got - want).abs() < 1e-15, "{got} vs {want}");
    }

    #[test]
    fn f64_input_keeps_every_bit() {
        // x = 0.3 as stored; n * x mod 1 for n = 2^40 computed against an
        // exact integer rendition of the binary value of x.
        let x = 0.3_f64;
        let bits = x.to_bits();
        let mant = (bits & ((1 << 52) - 1)) | (1 << 52);
        let exp = ((bits >> 52) & 0x7ff) as i32 - 1075; // x = mant * 2^exp
        assert!(exp < 0);
        let n: u64 = 1 << 40;
        // n * x = mant * 2^(40 + exp); fractional part = (mant mod 2^-(40+exp)) / 2^-(40+exp)
        let shift = -(40 + exp) as u32;
        let frac = (mant & ((1u64 << shift) - 1)) as f64 / (1u64 << shift) as f64;
        let want = if frac > 0.5 { frac - 1.0 } else { frac };
        let got = DoubleDouble::from_f64(x).mul_u64_mod1(n).to_f64();
        assert!((got - want).abs() < 1e-16);
    }

    #[test]
    fn neumaier_recovers_cancellation() {
        let mut s = CompensatedSum::new();
        for v in [1.0, 1e100, 1.0, -1e100] {
            s.add(v);
        }
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn pairwise_matches_exact_integers() {
        let v: Vec<f64> = (1..=10_000).map(|k| k as f64).collect();
        assert_eq!(pairwise_sum(&v), 50_005_000.0);
    }

    #[test]
    fn phase_ratio_is_centered() {
        let z = unit_phase_ratio(2, 3);
        assert!((z.re + 0.5).abs() < 1e-15 && (z.im + 0.75f64.sqrt()).abs() < 1e-15);
        let w = unit_phase(2.0 / 3.0 + 5.0);
        assert!((w - z).norm() < 1e-12);
    }
}
