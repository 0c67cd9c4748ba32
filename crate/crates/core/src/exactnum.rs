//! Exact rationals and base-`p` digit expansions.
//!
//! Every coordinate handled by this crate is a [`PRational`]. Membership in
//! the carpet and the Cantor set is decided from [`DigitExpansion`]s, which
//! store an eventually periodic digit stream as a finite preperiod plus a
//! repeating block.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, parse, Error, Result};

/// An odd integer `p >= 3`, the subdivision base of the carpet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Base(u32);

impl Base {
    pub fn new(p: u32) -> Result<Self> {
        if p < 3 || p % 2 == 0 {
            return Err(domain(format!("base must be an odd integer >= 3, got {p}")));
        }
        Ok(Base(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// The middle digit `(p - 1) / 2`.
    #[inline]
    pub fn middle(self) -> u32 {
        (self.0 - 1) / 2
    }

    /// `p^n` as a machine integer. Panics on overflow, which only happens far
    /// beyond the levels this crate enumerates.
    pub fn pow(self, n: u32) -> u64 {
        (self.0 as u64)
            .checked_pow(n)
            .unwrap_or_else(|| panic!("{}^{} overflows u64", self.0, n))
    }

    pub fn pow_big(self, n: u32) -> BigInt {
        num_traits::pow(BigInt::from(self.0), n as usize)
    }
}

impl TryFrom<u32> for Base {
    type Error = Error;

    fn try_from(p: u32) -> Result<Self> {
        Base::new(p)
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An exact rational number, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PRational(BigRational);

impl PRational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        PRational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(domain("zero denominator"));
        }
        Ok(PRational(BigRational::new(numer, denom)))
    }

    pub fn integer(k: i64) -> Self {
        PRational(BigRational::from_integer(k.into()))
    }

    pub fn from_bigint(k: BigInt) -> Self {
        PRational(BigRational::from_integer(k))
    }

    pub fn zero() -> Self {
        PRational(BigRational::zero())
    }

    pub fn one() -> Self {
        PRational(BigRational::one())
    }

    pub fn half() -> Self {
        PRational::new(1, 2)
    }

    /// `p^n` for a possibly negative exponent.
    pub fn power(p: Base, n: i32) -> Self {
        let v = p.pow_big(n.unsigned_abs());
        if n >= 0 {
            PRational::from_bigint(v)
        } else {
            PRational(BigRational::new(BigInt::one(), v))
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        PRational(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// `self - floor(self)`, in `[0, 1)`.
    pub fn fract(&self) -> Self {
        PRational(&self.0 - self.0.floor())
    }

    /// True iff `0 <= self <= 1`.
    pub fn in_unit_interval(&self) -> bool {
        !self.0.is_negative() && self.0 <= BigRational::one()
    }

    /// Multiply by `p^n`.
    pub fn scale(&self, p: Base, n: u32) -> Self {
        PRational(&self.0 * BigRational::from_integer(p.pow_big(n)))
    }

    /// Divide by `p^n`.
    pub fn shrink(&self, p: Base, n: u32) -> Self {
        PRational(&self.0 / BigRational::from_integer(p.pow_big(n)))
    }

    /// If `self * p^n` is an integer, return it.
    pub fn scaled_integer(&self, p: Base, n: u32) -> Option<BigInt> {
        let s = self.scale(p, n);
        s.is_integer().then(|| s.floor())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for PRational {
    fn from(r: BigRational) -> Self {
        PRational(r)
    }
}

impl From<i64> for PRational {
    fn from(k: i64) -> Self {
        PRational::integer(k)
    }
}

impl fmt::Display for PRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for PRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n
            .parse()
            .map_err(|_| parse(format!("bad numerator in rational {s:?}")))?;
        let d: BigInt = d
            .parse()
            .map_err(|_| parse(format!("bad denominator in rational {s:?}")))?;
        if d.is_zero() {
            return Err(parse(format!("zero denominator in rational {s:?}")));
        }
        Ok(PRational(BigRational::new(n, d)))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<PRational> for PRational {
            type Output = PRational;
            fn $method(self, rhs: PRational) -> PRational {
                PRational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a PRational> for PRational {
            type Output = PRational;
            fn $method(self, rhs: &'a PRational) -> PRational {
                PRational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $tr<PRational> for &'a PRational {
            type Output = PRational;
            fn $method(self, rhs: PRational) -> PRational {
                PRational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b PRational> for &'a PRational {
            type Output = PRational;
            fn $method(self, rhs: &'b PRational) -> PRational {
                PRational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for PRational {
    type Output = PRational;
    fn neg(self) -> PRational {
        PRational(-self.0)
    }
}

impl Neg for &PRational {
    type Output = PRational;
    fn neg(self) -> PRational {
        PRational(-&self.0)
    }
}

/// An eventually periodic base-`p` digit stream `0.d1 d2 d3 ...`.
///
/// Digits beyond the preperiod repeat `period`; an empty period means the
/// stream continues with zeros (a terminating expansion).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitExpansion {
    base: Base,
    preperiod: Vec<u32>,
    period: Vec<u32>,
}

impl DigitExpansion {
    pub fn new(base: Base, preperiod: Vec<u32>, period: Vec<u32>) -> Result<Self> {
        if let Some(d) = preperiod.iter().chain(&period).find(|&&d| d >= base.get()) {
            return Err(domain(format!("digit {d} out of range for base {base}")));
        }
        Ok(DigitExpansion { base, preperiod, period })
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn preperiod(&self) -> &[u32] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u32] {
        &self.period
    }

    pub fn is_terminating(&self) -> bool {
        self.period.is_empty()
    }

    /// Length of the repeating block, counting a terminating stream as
    /// repeating the single digit 0.
    pub fn cycle_len(&self) -> usize {
        self.period.len().max(1)
    }

    /// The `k`-th digit after the radix point, `k >= 1`.
    pub fn digit_at(&self, k: u64) -> u32 {
        assert!(k >= 1, "digits are indexed from 1");
        let k = (k - 1) as usize;
        if k < self.preperiod.len() {
            self.preperiod[k]
        } else if self.period.is_empty() {
            0
        } else {
            self.period[(k - self.preperiod.len()) % self.period.len()]
        }
    }

    /// Evaluate the stream as an exact rational (preperiod plus a geometric
    /// series for the repeating block).
    pub fn value(&self) -> PRational {
        let p = BigInt::from(self.base.get());
        let mut head = BigInt::zero();
        for &d in &self.preperiod {
            head = head * &p + d;
        }
        let head_scale = num_traits::pow(p.clone(), self.preperiod.len());
        let mut v = BigRational::new(head, head_scale.clone());
        if !self.period.is_empty() {
            let mut block = BigInt::zero();
            for &d in &self.period {
                block = block * &p + d;
            }
            let denom = (num_traits::pow(p, self.period.len()) - 1u32) * head_scale;
            v += BigRational::new(block, denom);
        }
        PRational(v)
    }
}

impl fmt::Display for DigitExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ds: &[u32]| ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "0.[{}]", join(&self.preperiod))?;
        if !self.period.is_empty() {
            write!(f, "({})", join(&self.period))?;
        }
        write!(f, "_{}", self.base)
    }
}

/// All base-`p` expansions of `x ∈ [0, 1]`.
///
/// The canonical expansion comes first. For `x = k/p^j` strictly inside
/// `(0, 1)` a second expansion ending in repeated `p - 1` digits follows.
pub fn expand(x: &PRational, base: Base) -> Result<Vec<DigitExpansion>> {
    if !x.in_unit_interval() {
        return Err(domain(format!("{x} is outside [0, 1]")));
    }
    let p = base.get();
    if x.is_one() {
        return Ok(vec![DigitExpansion { base, preperiod: vec![], period: vec![p - 1] }]);
    }
    if x.is_zero() {
        return Ok(vec![DigitExpansion { base, preperiod: vec![], period: vec![] }]);
    }

    let pb = BigInt::from(p);
    let mut reduced = x.denom().clone();
    let mut pre_len = 0usize;
    loop {
        let g = reduced.gcd(&pb);
        if g.is_one() {
            break;
        }
        reduced /= g;
        pre_len += 1;
    }
    let period_len = if reduced.is_one() { 0 } else { multiplicative_order(&pb, &reduced) };

    let digits = long_division(x.numer(), x.denom(), p, pre_len + period_len);
    let (pre, per) = digits.split_at(pre_len);
    let canonical = DigitExpansion { base, preperiod: pre.to_vec(), period: per.to_vec() };

    if period_len > 0 {
        return Ok(vec![canonical]);
    }
    // k/p^j: the last nonzero digit is lowered by one and followed by p-1 forever.
    let mut alt = canonical.preperiod.clone();
    let last = alt.last_mut().expect("nonzero terminating expansion has a digit");
    *last -= 1;
    let alternate = DigitExpansion { base, preperiod: alt, period: vec![p - 1] };
    Ok(vec![canonical, alternate])
}

fn long_division(numer: &BigInt, denom: &BigInt, p: u32, count: usize) -> Vec<u32> {
    let mut r = numer.clone();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        r *= p;
        let (q, rem) = r.div_rem(denom);
        out.push(q.to_u32().expect("digit fits in u32"));
        r = rem;
    }
    out
}

/// Order of `p` in the unit group modulo `m` (requires `gcd(p, m) = 1`, `m > 1`).
pub fn multiplicative_order(p: &BigInt, m: &BigInt) -> usize {
    let base = p.mod_floor(m);
    let mut acc = base.clone();
    let mut k = 1;
    while !acc.is_one() {
        acc = (acc * &base).mod_floor(m);
        k += 1;
    }
    k
}

fn lcm(a: usize, b: usize) -> usize {
    a / a.gcd(&b) * b
}

/// Number of digit positions after which a pair of streams repeats jointly.
pub fn joint_horizon(ex: &DigitExpansion, ey: &DigitExpansion) -> u64 {
    let pre = ex.preperiod.len().max(ey.preperiod.len());
    (pre + lcm(ex.cycle_len(), ey.cycle_len())) as u64
}

/// True iff no position `k >= 1` carries the digit pair `forbidden`.
pub fn eventually_avoids(
    ex: &DigitExpansion,
    ey: &DigitExpansion,
    forbidden: (u32, u32),
) -> Result<bool> {
    if ex.base != ey.base {
        return Err(domain(format!("base mismatch: {} vs {}", ex.base, ey.base)));
    }
    Ok(first_hit(ex, ey, forbidden).is_none())
}

/// First position carrying the forbidden pair, if any.
pub fn first_hit(ex: &DigitExpansion, ey: &DigitExpansion, forbidden: (u32, u32)) -> Option<u64> {
    (1..=joint_horizon(ex, ey)).find(|&k| (ex.digit_at(k), ey.digit_at(k)) == forbidden)
}

/// Compare `sqrt(a)` with `sqrt(b) + sqrt(c)` exactly, for non-negative
/// rationals.
pub fn sqrt_le_sum(a: &PRational, b: &PRational, c: &PRational) -> bool {
    let slack = b + c - a;
    if !slack.is_negative() {
        return true;
    }
    // a > b + c: need (a - b - c)^2 <= 4bc
    let lhs = &slack * &slack;
    let rhs = PRational::integer(4) * b * c;
    lhs.cmp(&rhs) != Ordering::Greater
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> PRational {
        PRational::new(n, d)
    }

    fn b(p: u32) -> Base {
        Base::new(p).unwrap()
    }

    // Independent reconstruction: sum of d_k p^-k over the first `n` digits
    // plus the exact tail, computed as a plain geometric series.
    fn series_value(pre: &[u32], period: &[u32], p: i64) -> PRational {
        let mut v = PRational::zero();
        let mut scale = PRational::one();
        for &d in pre {
            scale = scale / PRational::integer(p);
            v = v + PRational::integer(d as i64) * &scale;
        }
        if period.is_empty() {
            return v;
        }
        let mut block = PRational::zero();
        let mut bscale = scale.clone();
        for &d in period {
            bscale = bscale / PRational::integer(p);
            block = block + PRational::integer(d as i64) * &bscale;
        }
        // block * (1 + q + q^2 + ...) with q = p^-len
        let mut q = PRational::one();
        for _ in period {
            q = q / PRational::integer(p);
        }
        v + block / (PRational::one() - q)
    }

    #[test]
    fn rejects_bad_bases() {
        assert!(Base::new(2).is_err());
        assert!(Base::new(1).is_err());
        assert!(Base::new(4).is_err());
        assert_eq!(Base::new(9).unwrap().middle(), 4);
    }

    #[test]
    fn expand_zero() {
        let e = expand(&PRational::zero(), b(3)).unwrap();
        assert_eq!(e.len(), 1);
        assert!(e[0].preperiod().is_empty() && e[0].period().is_empty());
        assert_eq!(e[0].digit_at(1_000_000), 0);
    }

    #[test]
    fn expand_quarter_base_three() {
        let e = expand(&r(1, 4), b(3)).unwrap();
        assert_eq!(e.len(), 1);
        assert!(e[0].preperiod().is_empty());
        assert_eq!(e[0].period(), &[0, 2]);
        assert_eq!(e[0].digit_at(1), 0);
        assert_eq!(e[0].digit_at(2), 2);
    }

    #[test]
    fn expand_third_has_two_forms() {
        let e = expand(&r(1, 3), b(3)).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!((e[0].preperiod(), e[0].period()), (&[1u32][..], &[][..]));
        assert_eq!((e[1].preperiod(), e[1].period()), (&[0u32][..], &[2u32][..]));
        for ex in &e {
            assert_eq!(series_value(ex.preperiod(), ex.period(), 3), r(1, 3));
            assert_eq!(ex.value(), r(1, 3));
        }
    }

    #[test]
    fn expand_one_is_all_top_digits() {
        let e = expand(&PRational::one(), b(5)).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].period(), &[4]);
        assert_eq!(e[0].value(), PRational::one());
    }

    #[test]
    fn expand_out_of_range() {
        assert!(matches!(expand(&r(3, 2), b(3)), Err(Error::Domain(_))));
        assert!(matches!(expand(&r(-1, 2), b(3)), Err(Error::Domain(_))));
    }

    #[test]
    fn composite_base_preperiod() {
        // 1/27 = 3/81 = 0.03 in base 9
        let e = expand(&r(1, 27), b(9)).unwrap();
        assert_eq!(e[0].preperiod(), &[0, 3]);
        assert!(e[0].is_terminating());
        // 1/6 in base 9: 9/6 = 1.5 -> digit 1, then 0.5 = 0.444...
        let e = expand(&r(1, 6), b(9)).unwrap();
        assert_eq!((e[0].preperiod(), e[0].period()), (&[1u32][..], &[4u32][..]));
    }

    #[test]
    fn eventually_avoids_examples() {
        let q = &expand(&r(1, 4), b(3)).unwrap()[0];
        assert!(eventually_avoids(q, q, (1, 1)).unwrap());
        let h = &expand(&r(1, 2), b(3)).unwrap()[0];
        assert_eq!(h.period(), &[1]);
        assert!(!eventually_avoids(h, h, (1, 1)).unwrap());
        let third = expand(&r(1, 3), b(3)).unwrap();
        assert!(!eventually_avoids(&third[0], &third[0], (1, 1)).unwrap());
        assert!(eventually_avoids(&third[1], &third[1], (1, 1)).unwrap());
    }

    #[test]
    fn eventually_avoids_base_mismatch() {
        let a = &expand(&r(1, 4), b(3)).unwrap()[0];
        let c = &expand(&r(1, 4), b(5)).unwrap()[0];
        assert!(eventually_avoids(a, c, (1, 1)).is_err());
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["1/4", "3", "-2/7", "0"] {
            let v: PRational = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert_eq!("2/4".parse::<PRational>().unwrap().to_string(), "1/2");
        assert!("1/0".parse::<PRational>().is_err());
        assert!("x/2".parse::<PRational>().is_err());
    }

    #[test]
    fn radical_comparison() {
        // sqrt(9) <= sqrt(4) + sqrt(1)
        assert!(sqrt_le_sum(&r(9, 1), &r(4, 1), &r(1, 1)));
        // sqrt(10) > sqrt(4) + sqrt(1)
        assert!(!sqrt_le_sum(&r(10, 1), &r(4, 1), &r(1, 1)));
        // sqrt(2) <= 1 + 1
        assert!(sqrt_le_sum(&r(2, 1), &r(1, 1), &r(1, 1)));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn odd_base() -> impl Strategy<Value = u32> {
            prop::sample::select(vec![3u32, 5, 7, 9, 15])
        }

        proptest! {
            #[test]
            fn round_trip(p in odd_base(), den in 1i64..=1_000, num_seed in 0i64..=1_000) {
                let num = num_seed % (den + 1);
                let x = PRational::new(num, den);
                let p = b(p);
                for e in expand(&x, p).unwrap() {
                    prop_assert_eq!(e.value(), x.clone());
                    prop_assert_eq!(
                        series_value(e.preperiod(), e.period(), p.get() as i64),
                        x.clone()
                    );
                }
            }

            #[test]
            fn double_expansion_law(p in odd_base(), den in 1i64..=5_000, num_seed in 0i64..=5_000) {
                let num = num_seed % (den + 1);
                let x = PRational::new(num, den);
                let p = b(p);
                // k/p^j iff the denominator divides a large power of p
                let big = num_traits::pow(BigInt::from(p.get()), 64);
                let p_power = (&big % x.denom()).is_zero() && !x.denom().is_one();
                let n = expand(&x, p).unwrap().len();
                prop_assert_eq!(n == 2, p_power && !x.is_zero() && !x.is_one());
            }

            #[test]
            fn period_divides_order(p in odd_base(), den in 2i64..=2_000, num_seed in 1i64..=2_000) {
                let num = num_seed % den;
                prop_assume!(num > 0);
                let x = PRational::new(num, den);
                let p = b(p);
                let mut free = x.denom().clone();
                let pb = BigInt::from(p.get());
                loop {
                    let g = free.gcd(&pb);
                    if g.is_one() { break; }
                    free /= g;
                }
                let e = &expand(&x, p).unwrap()[0];
                if free.is_one() {
                    prop_assert!(e.period().is_empty());
                } else {
                    let ord = multiplicative_order(&pb, &free);
                    prop_assert_eq!(ord % e.period().len(), 0);
                }
            }

            #[test]
            fn avoids_is_stable_past_horizon(
                p in odd_base(),
                a in (1i64..=400, 1i64..=400),
                c in (1i64..=400, 1i64..=400),
            ) {
                let p = b(p);
                let x = PRational::new(a.0.min(a.1), a.0.max(a.1));
                let y = PRational::new(c.0.min(c.1), c.0.max(c.1));
                let m = p.middle();
                for ex in expand(&x, p).unwrap() {
                    for ey in expand(&y, p).unwrap() {
                        let bound = joint_horizon(&ex, &ey);
                        let fast = eventually_avoids(&ex, &ey, (m, m)).unwrap();
                        let slow = (1..=2 * bound).all(|k| (ex.digit_at(k), ey.digit_at(k)) != (m, m));
                        prop_assert_eq!(fast, slow);
                    }
                }
            }
        }
    }
}
