//! Arbitrary-precision reals backed by `astro-float`, and the small real-number
//! trait shared with `f64` so formulas are written once.

use std::cell::RefCell;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_rational::BigRational;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_cc<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Binary precision giving `digits` correct decimals plus guard bits.
pub fn bits_for_digits(digits: u32) -> usize {
    ((digits as f64) * std::f64::consts::LOG2_10).ceil() as usize + 64
}

/// The operations formulas in this crate need. Constants are created at the
/// precision of an existing value (`self` acts as a prototype).
pub trait Real:
    Clone
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn int(&self, n: i64) -> Self;
    fn pi(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn acos(&self) -> Self;
    fn atan(&self) -> Self;
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool;
    fn ratio(&self, r: &BigRational) -> Self;

    fn frac(&self, a: i64, b: i64) -> Self {
        self.int(a) / self.int(b)
    }
}

impl Real for f64 {
    fn int(&self, n: i64) -> Self {
        n as f64
    }
    fn pi(&self) -> Self {
        std::f64::consts::PI
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn acos(&self) -> Self {
        f64::acos(*self)
    }
    fn atan(&self) -> Self {
        f64::atan(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn ratio(&self, r: &BigRational) -> Self {
        num_traits::ToPrimitive::to_f64(r).unwrap_or(0.0)
    }
}

/// A binary floating-point number of fixed precision `p` bits.
#[derive(Clone)]
pub struct Hp {
    v: BigFloat,
    p: usize,
}

impl fmt::Debug for Hp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hp({})", self.v)
    }
}

impl Hp {
    pub fn from_i64(n: i64, p: usize) -> Self {
        Hp {
            v: BigFloat::from_i64(n, p),
            p,
        }
    }

    pub fn from_f64(x: f64, p: usize) -> Self {
        Hp {
            v: BigFloat::from_f64(x, p),
            p,
        }
    }

    pub fn with_digits(n: i64, digits: u32) -> Self {
        Self::from_i64(n, bits_for_digits(digits))
    }

    /// Parses a decimal literal such as `"-12.5e3"` exactly to `p` bits.
    pub fn parse(s: &str, p: usize) -> Self {
        let v = with_cc(|cc| BigFloat::parse(s, Radix::Dec, p, RM, cc));
        Hp { v, p }
    }

    pub fn precision_bits(&self) -> usize {
        self.p
    }

    fn wrap(&self, v: BigFloat) -> Self {
        Hp { v, p: self.p }
    }

    fn pm(&self, o: &Self) -> usize {
        self.p.max(o.p)
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative()
    }

    /// Decimal digits (most significant first) and exponent `e` such that the
    /// value is `±0.d1 d2 ... × 10^e`.
    fn decimal_parts(&self) -> (bool, Vec<u8>, i32) {
        let (sign, digits, exp) =
            with_cc(|cc| self.v.convert_to_radix(Radix::Dec, RM, cc)).expect("decimal conversion");
        (sign == Sign::Neg, digits, exp)
    }

    /// Fixed-point string with exactly `decimals` digits after the point,
    /// discarding (not rounding) the remaining digits.
    pub fn truncated(&self, decimals: usize) -> String {
        let (neg, digits, exp) = self.decimal_parts();
        let digit = |i: i64| -> u8 {
            // digit at position i, where position 0 is the first after the point of 0.d1d2..
            if i < 0 || i as usize >= digits.len() {
                0
            } else {
                digits[i as usize]
            }
        };
        let e = exp as i64;
        let mut int_part = String::new();
        if e <= 0 {
            int_part.push('0');
        } else {
            for i in 0..e {
                int_part.push((b'0' + digit(i)) as char);
            }
        }
        let mut frac = String::with_capacity(decimals);
        for j in 0..decimals as i64 {
            frac.push((b'0' + digit(e + j)) as char);
        }
        let all_zero = int_part.bytes().all(|b| b == b'0') && frac.bytes().all(|b| b == b'0');
        let sign = if neg && !all_zero { "-" } else { "" };
        if decimals == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac}")
        }
    }

    /// Fixed-point string with `decimals` digits, rounded half away from zero.
    pub fn to_fixed(&self, decimals: usize) -> String {
        let half = Hp::parse(&format!("5e-{}", decimals + 1), self.p + 16);
        let shifted = if self.is_negative() {
            self.clone() - half
        } else {
            self.clone() + half
        };
        shifted.truncated(decimals)
    }

    /// Number of leading decimal places at which `self` and `other` agree in
    /// the sense `|self - other| < 10^-d · max(1, |self|)`.
    pub fn agreeing_digits(&self, other: &Hp) -> u32 {
        let diff = (self.clone() - other.clone()).abs();
        if diff.is_zero() {
            return u32::MAX;
        }
        let scale = self.abs().to_f64().max(1.0);
        let (_, digits, exp) = diff.decimal_parts();
        if digits.is_empty() {
            return u32::MAX;
        }
        // diff = 0.d1.. × 10^exp, so diff < 10^exp and diff >= 10^(exp-1)
        let d = -(exp as i64) + scale.log10().floor() as i64;
        d.max(0) as u32
    }
}

impl fmt::Display for Hp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.p.saturating_sub(64)) as f64 / std::f64::consts::LOG2_10) as usize;
        f.write_str(&self.truncated(digits.max(1)))
    }
}

impl Add for Hp {
    type Output = Hp;
    fn add(self, o: Hp) -> Hp {
        let p = self.pm(&o);
        Hp {
            v: self.v.add(&o.v, p, RM),
            p,
        }
    }
}

impl Sub for Hp {
    type Output = Hp;
    fn sub(self, o: Hp) -> Hp {
        let p = self.pm(&o);
        Hp {
            v: self.v.sub(&o.v, p, RM),
            p,
        }
    }
}

impl Mul for Hp {
    type Output = Hp;
    fn mul(self, o: Hp) -> Hp {
        let p = self.pm(&o);
        Hp {
            v: self.v.mul(&o.v, p, RM),
            p,
        }
    }
}

impl Div for Hp {
    type Output = Hp;
    fn div(self, o: Hp) -> Hp {
        let p = self.pm(&o);
        Hp {
            v: self.v.div(&o.v, p, RM),
            p,
        }
    }
}

impl PartialEq for Hp {
    fn eq(&self, o: &Hp) -> bool {
        self.v == o.v
    }
}

impl PartialOrd for Hp {
    fn partial_cmp(&self, o: &Hp) -> Option<std::cmp::Ordering> {
        self.v.partial_cmp(&o.v)
    }
}

impl Neg for Hp {
    type Output = Hp;
    fn neg(self) -> Hp {
        Hp {
            v: self.v.neg(),
            p: self.p,
        }
    }
}

impl Real for Hp {
    fn int(&self, n: i64) -> Self {
        Hp::from_i64(n, self.p)
    }
    fn pi(&self) -> Self {
        self.wrap(with_cc(|cc| cc.pi(self.p, RM)))
    }
    fn sqrt(&self) -> Self {
        self.wrap(self.v.sqrt(self.p, RM))
    }
    fn ln(&self) -> Self {
        self.wrap(with_cc(|cc| self.v.ln(self.p, RM, cc)))
    }
    fn sin(&self) -> Self {
        self.wrap(with_cc(|cc| self.v.sin(self.p, RM, cc)))
    }
    fn cos(&self) -> Self {
        self.wrap(with_cc(|cc| self.v.cos(self.p, RM, cc)))
    }
    fn acos(&self) -> Self {
        self.wrap(with_cc(|cc| self.v.acos(self.p, RM, cc)))
    }
    fn atan(&self) -> Self {
        self.wrap(with_cc(|cc| self.v.atan(self.p, RM, cc)))
    }
    fn abs(&self) -> Self {
        self.wrap(self.v.abs())
    }
    fn to_f64(&self) -> f64 {
        let (neg, digits, exp) = self.decimal_parts();
        let mantissa: String = digits.iter().take(20).map(|d| (b'0' + d) as char).collect();
        if mantissa.is_empty() {
            return 0.0;
        }
        let x: f64 = format!("0.{mantissa}e{exp}").parse().unwrap();
        if neg {
            -x
        } else {
            x
        }
    }
    fn is_zero(&self) -> bool {
        self.v.is_zero()
    }
    fn ratio(&self, r: &BigRational) -> Self {
        let num = Hp::parse(&r.numer().to_string(), self.p);
        let den = Hp::parse(&r.denom().to_string(), self.p);
        num / den
    }
}
