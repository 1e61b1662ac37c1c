//! Double-double arithmetic (about 106 bits of mantissa).

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DD {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> DD {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    DD { hi: s, lo: err }
}

fn quick_two_sum(a: f64, b: f64) -> DD {
    let s = a + b;
    DD {
        hi: s,
        lo: b - (s - a),
    }
}

fn two_prod(a: f64, b: f64) -> DD {
    let p = a * b;
    DD {
        hi: p,
        lo: a.mul_add(b, -p),
    }
}

impl DD {
    pub fn new(x: f64) -> Self {
        DD { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return DD::new(0.0);
        }
        // one Newton step from the f64 root
        let s = self.hi.sqrt();
        let r = self - two_prod(s, s);
        quick_two_sum(s, r.hi / (2.0 * s))
    }

    pub fn square(self) -> Self {
        self * self
    }
}

impl From<f64> for DD {
    fn from(x: f64) -> Self {
        DD::new(x)
    }
}

impl Add for DD {
    type Output = DD;
    fn add(self, o: DD) -> DD {
        let s = two_sum(self.hi, o.hi);
        let t = two_sum(self.lo, o.lo);
        let v = quick_two_sum(s.hi, s.lo + t.hi);
        quick_two_sum(v.hi, v.lo + t.lo)
    }
}

impl Neg for DD {
    type Output = DD;
    fn neg(self) -> DD {
        DD {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DD {
    type Output = DD;
    fn sub(self, o: DD) -> DD {
        self + (-o)
    }
}

impl Mul for DD {
    type Output = DD;
    fn mul(self, o: DD) -> DD {
        let p = two_prod(self.hi, o.hi);
        let cross = self.hi * o.lo + self.lo * o.hi;
        quick_two_sum(p.hi, p.lo + cross)
    }
}

/// Euclidean distance of two f64 points, evaluated in double-double.
pub fn distance(a: &[f64], b: &[f64]) -> DD {
    a.iter()
        .zip(b)
        .map(|(x, y)| (DD::new(*x) - DD::new(*y)).square())
        .fold(DD::new(0.0), |acc, v| acc + v)
        .sqrt()
}
