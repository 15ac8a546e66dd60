use astro_float::{BigFloat, RoundingMode};
use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub const DEFAULT_EXT_BITS: usize = 256;

const RM: RoundingMode = RoundingMode::ToEven;

/// Binary floating point with a configurable mantissa width.
///
/// Thin value-semantics wrapper so oracle code reads like ordinary
/// arithmetic. Binary operations run at the wider of the two precisions.
#[derive(Debug, Clone)]
pub struct Ext {
    v: BigFloat,
    bits: usize,
}

impl Ext {
    pub fn from_f64(x: f64, bits: usize) -> Self {
        Self {
            v: BigFloat::from_f64(x, bits),
            bits,
        }
    }

    pub fn from_i64(x: i64, bits: usize) -> Self {
        Self {
            v: BigFloat::from_i64(x, bits),
            bits,
        }
    }

    pub fn zero(bits: usize) -> Self {
        Self::from_i64(0, bits)
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn sqrt(&self) -> Self {
        Self {
            v: self.v.sqrt(self.bits, RM),
            bits: self.bits,
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            v: self.v.abs(),
            bits: self.bits,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative() && !self.v.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    /// Nearest `f64` (via the exact decimal expansion).
    pub fn to_f64(&self) -> f64 {
        if self.v.is_zero() {
            return 0.0;
        }
        self.v.to_string().parse().unwrap_or(f64::NAN)
    }
}

impl PartialEq for Ext {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|s| s.cmp(&0))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Ext> for &Ext {
            type Output = Ext;
            fn $m(self, rhs: &Ext) -> Ext {
                let bits = self.bits.max(rhs.bits);
                Ext {
                    v: self.v.$m(&rhs.v, bits, RM),
                    bits,
                }
            }
        }
        impl $tr<Ext> for Ext {
            type Output = Ext;
            fn $m(self, rhs: Ext) -> Ext {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Ext> for Ext {
            type Output = Ext;
            fn $m(self, rhs: &Ext) -> Ext {
                (&self).$m(rhs)
            }
        }
        impl $tr<Ext> for &Ext {
            type Output = Ext;
            fn $m(self, rhs: Ext) -> Ext {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Ext {
    type Output = Ext;
    fn neg(self) -> Ext {
        Ext {
            v: self.v.neg(),
            bits: self.bits,
        }
    }
}

impl Neg for &Ext {
    type Output = Ext;
    fn neg(self) -> Ext {
        Ext {
            v: self.v.clone().neg(),
            bits: self.bits,
        }
    }
}
