//! Minimal double-double arithmetic (Dekker/Knuth error-free transforms).
//!
//! Alternating hypergeometric series such as 2F2(...; -2*lambda) cancel up to
//! e^{2|z|} of their largest term, which exhausts f64 at |z| around 40. The
//! term recurrence and the accumulator both run in ~31 significant digits
//! here, which keeps the summed result accurate to f64 precision.

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, c: f64) -> Dd {
        let (p, e) = two_prod(self.hi, c);
        let e = e + self.lo * c;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div_f64(self, c: f64) -> Dd {
        let q1 = self.hi / c;
        let (p, e) = two_prod(q1, c);
        let r = ((self.hi - p) - e + self.lo) / c;
        let (hi, lo) = quick_two_sum(q1, r);
        Dd { hi, lo }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_tracks_rounding() {
        let a = Dd::from_f64(1.0);
        let tiny = Dd::from_f64(1e-20);
        let s = a.add(tiny);
        assert_eq!(s.hi, 1.0);
        assert_eq!(s.lo, 1e-20);
    }

    #[test]
    fn mul_div_roundtrip() {
        let a = Dd::from_f64(std::f64::consts::PI);
        let b = a.mul_f64(1.0 / 3.0).div_f64(1.0 / 3.0);
        assert!((b.to_f64() - std::f64::consts::PI).abs() < 1e-30);
    }
}
