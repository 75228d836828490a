use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

/// `gcd` on `i128`, taking the 64-bit path when both values fit.
pub(crate) fn gcd(a: i128, b: i128) -> i128 {
    match (u64::try_from(a.unsigned_abs()), u64::try_from(b.unsigned_abs())) {
        (Ok(x), Ok(y)) => x.gcd(&y) as i128,
        _ => a.gcd(&b),
    }
}

/// An algebraic integer `a + b·ω` in the integral basis `{1, ω}` of `𝒪_K`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element {
    pub a: i128,
    pub b: i128,
}

impl Element {
    pub const ZERO: Element = Element { a: 0, b: 0 };
    pub const ONE: Element = Element { a: 1, b: 0 };
    pub const OMEGA: Element = Element { a: 0, b: 1 };

    pub const fn new(a: i128, b: i128) -> Self {
        Element { a, b }
    }

    pub const fn from_int(a: i128) -> Self {
        Element { a, b: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn scale(&self, k: i128) -> Element {
        if (self.a.unsigned_abs() | self.b.unsigned_abs() | k.unsigned_abs()) < 1 << 60 {
            return Element::new(self.a.wrapping_mul(k), self.b.wrapping_mul(k));
        }
        Element::new(self.a * k, self.b * k)
    }

    /// Largest positive integer dividing both coordinates (0 for the zero element).
    pub fn content(&self) -> i128 {
        gcd(self.a, self.b)
    }

    pub fn is_divisible_by(&self, k: i128) -> bool {
        self.a % k == 0 && self.b % k == 0
    }

    pub fn div_exact(&self, k: i128) -> Element {
        debug_assert!(self.is_divisible_by(k));
        Element::new(self.a / k, self.b / k)
    }
}

impl Add for Element {
    type Output = Element;
    fn add(self, o: Element) -> Element {
        Element::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, o: Element) -> Element {
        Element::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element::new(-self.a, -self.b)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, 1) => write!(f, "w"),
            (0, -1) => write!(f, "-w"),
            (0, b) => write!(f, "{b}*w"),
            (a, 1) => write!(f, "{a}+w"),
            (a, -1) => write!(f, "{a}-w"),
            (a, b) if b < 0 => write!(f, "{a}{b}*w"),
            (a, b) => write!(f, "{a}+{b}*w"),
        }
    }
}

/// An element of `K`, stored as `num / den` with `den > 0` and no common
/// integer factor between `den` and the coordinates of `num`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldElem {
    pub num: Element,
    pub den: i128,
}

impl Default for FieldElem {
    fn default() -> Self {
        FieldElem::ZERO
    }
}

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem { num: Element::ZERO, den: 1 };
    pub const ONE: FieldElem = FieldElem { num: Element::ONE, den: 1 };

    pub fn new(num: Element, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd(num.content(), den);
        if g > 1 {
            FieldElem { num: num.div_exact(g), den: den / g }
        } else {
            FieldElem { num, den }
        }
    }

    pub const fn integral(num: Element) -> Self {
        FieldElem { num, den: 1 }
    }

    pub const fn from_int(a: i128) -> Self {
        FieldElem { num: Element::from_int(a), den: 1 }
    }

    pub fn from_ratio(r: Ratio<i128>) -> Self {
        FieldElem::new(Element::from_int(*r.numer()), *r.denom())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.den == 1
    }

    /// The rational value when `b = 0`.
    pub fn as_rational(&self) -> Option<Ratio<i128>> {
        (self.num.b == 0).then(|| Ratio::new(self.num.a, self.den))
    }

    pub fn scale_int(&self, k: i128) -> FieldElem {
        FieldElem::new(self.num.scale(k), self.den)
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, o: FieldElem) -> FieldElem {
        if self.den == o.den {
            return FieldElem::new(self.num + o.num, self.den);
        }
        let l = self.den.lcm(&o.den);
        FieldElem::new(self.num.scale(l / self.den) + o.num.scale(l / o.den), l)
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, o: FieldElem) -> FieldElem {
        self + (-o)
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { num: -self.num, den: self.den }
    }
}

impl From<Element> for FieldElem {
    fn from(e: Element) -> Self {
        FieldElem::integral(e)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else if self.num.b == 0 {
            write!(f, "{}/{}", self.num.a, self.den)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}
