//! Exact commutative coefficients.
//!
//! A [`ScalarPoly`] is a polynomial with Gaussian-rational coefficients over a
//! fixed alphabet of sixteen commuting parameter symbols. The symbol `s` stands
//! for `sqrt(2 p0)` and is the only one allowed a negative exponent, so the
//! ring is Laurent in `s` and polynomial in everything else. Values are kept in
//! canonical form (no zero coefficients, rationals reduced), which makes
//! structural equality the same as algebraic equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Number of parameter symbols in the alphabet.
pub const NUM_SYMBOLS: usize = 16;

/// A commuting parameter symbol.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Omega,
    Hbar,
    S,
    A,
    Beta,
    Gamma,
    B,
    X1,
    X2,
    X3,
    Y1,
    Y2,
    Y3,
    Z1,
    Z2,
    Z3,
}

impl Symbol {
    pub const ALL: [Symbol; NUM_SYMBOLS] = [
        Symbol::Omega,
        Symbol::Hbar,
        Symbol::S,
        Symbol::A,
        Symbol::Beta,
        Symbol::Gamma,
        Symbol::B,
        Symbol::X1,
        Symbol::X2,
        Symbol::X3,
        Symbol::Y1,
        Symbol::Y2,
        Symbol::Y3,
        Symbol::Z1,
        Symbol::Z2,
        Symbol::Z3,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Symbol::Omega => "w",
            Symbol::Hbar => "hbar",
            Symbol::S => "s",
            Symbol::A => "a",
            Symbol::Beta => "beta",
            Symbol::Gamma => "gamma",
            Symbol::B => "b",
            Symbol::X1 => "x1",
            Symbol::X2 => "x2",
            Symbol::X3 => "x3",
            Symbol::Y1 => "y1",
            Symbol::Y2 => "y2",
            Symbol::Y3 => "y3",
            Symbol::Z1 => "z1",
            Symbol::Z2 => "z2",
            Symbol::Z3 => "z3",
        }
    }

    pub fn from_name(name: &str) -> Option<Symbol> {
        Symbol::ALL.iter().copied().find(|s| s.name() == name)
    }

    /// Only `s` may carry a negative exponent.
    pub fn is_laurent(self) -> bool {
        self == Symbol::S
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A Gaussian rational `re + im*i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn zero() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        GaussRat::real(BigRational::one())
    }

    pub fn i() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::one())
    }

    pub fn real(re: BigRational) -> Self {
        GaussRat::new(re, BigRational::zero())
    }

    pub fn int(n: i64) -> Self {
        GaussRat::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        GaussRat::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(GaussRat::new(&self.re / &norm, -(&self.im / &norm)))
    }

    /// True when the leading nonzero part is negative: a negative real, or a
    /// negative purely imaginary number. Mixed values are never "negative".
    fn is_negative(&self) -> bool {
        if self.im.is_zero() {
            self.re.is_negative()
        } else if self.re.is_zero() {
            self.im.is_negative()
        } else {
            false
        }
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re, -self.im)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl GaussRat {
    /// Rendering of the absolute value part used after a sign was extracted.
    fn render_magnitude(&self) -> String {
        if self.im.is_zero() {
            fmt_rational(&self.re.abs())
        } else if self.re.is_zero() {
            let m = self.im.abs();
            if m.is_one() {
                "i".to_string()
            } else {
                format!("{}*i", fmt_rational(&m))
            }
        } else {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            let m = self.im.abs();
            let im = if m.is_one() {
                "i".to_string()
            } else {
                format!("{}*i", fmt_rational(&m))
            };
            format!("({}{}{})", fmt_rational(&self.re), sign, im)
        }
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_negative() {
            write!(f, "-{}", self.render_magnitude())
        } else {
            f.write_str(&self.render_magnitude())
        }
    }
}

/// Exponent vector over the symbol alphabet, ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Exponents(pub [i32; NUM_SYMBOLS]);

impl Exponents {
    pub fn one() -> Self {
        Exponents::default()
    }

    pub fn of(sym: Symbol, exp: i32) -> Self {
        let mut e = Exponents::default();
        e.0[sym.index()] = exp;
        e
    }

    pub fn get(&self, sym: Symbol) -> i32 {
        self.0[sym.index()]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Exponents) -> Exponents {
        let mut out = *self;
        for (o, e) in out.0.iter_mut().zip(other.0.iter()) {
            *o += e;
        }
        out
    }

    fn render(&self) -> String {
        Symbol::ALL
            .iter()
            .filter(|s| self.get(**s) != 0)
            .map(|s| match self.get(*s) {
                1 => s.name().to_string(),
                e => format!("{}^{}", s.name(), e),
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("substitution produces a negative power of `{0}`")]
    NegativeExponent(Symbol),
    #[error("binding for `s` is not an invertible monomial but `s` occurs with a negative exponent")]
    NotInvertible,
}

/// Canonical Laurent polynomial in `s`, polynomial in the other symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ScalarPoly {
    terms: BTreeMap<Exponents, GaussRat>,
}

impl ScalarPoly {
    pub fn zero() -> Self {
        ScalarPoly::default()
    }

    pub fn one() -> Self {
        ScalarPoly::constant(GaussRat::one())
    }

    pub fn i() -> Self {
        ScalarPoly::constant(GaussRat::i())
    }

    pub fn int(n: i64) -> Self {
        ScalarPoly::constant(GaussRat::int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        ScalarPoly::constant(GaussRat::ratio(num, den))
    }

    pub fn constant(c: GaussRat) -> Self {
        ScalarPoly::term(c, Exponents::one())
    }

    pub fn symbol(sym: Symbol) -> Self {
        ScalarPoly::pow(sym, 1)
    }

    /// `sym^exp`. Panics on a negative exponent of a non-Laurent symbol.
    pub fn pow(sym: Symbol, exp: i32) -> Self {
        assert!(
            exp >= 0 || sym.is_laurent(),
            "negative power of `{sym}` is outside the coefficient ring"
        );
        ScalarPoly::term(GaussRat::one(), Exponents::of(sym, exp))
    }

    pub fn term(c: GaussRat, exps: Exponents) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        ScalarPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value if this polynomial is a constant.
    pub fn as_constant(&self) -> Option<GaussRat> {
        match self.terms.len() {
            0 => Some(GaussRat::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &GaussRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn contains_symbol(&self, sym: Symbol) -> bool {
        self.terms.keys().any(|e| e.get(sym) != 0)
    }

    pub fn scale(&self, c: &GaussRat) -> ScalarPoly {
        if c.is_zero() {
            return ScalarPoly::zero();
        }
        ScalarPoly {
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    fn add_term(&mut self, exps: Exponents, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Multiplicative inverse of a single-term value whose inverse stays in the
    /// ring (only `s` may end up with a negative exponent).
    pub fn inverse_monomial(&self) -> Option<ScalarPoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        let mut inv = Exponents::one();
        for sym in Symbol::ALL {
            let k = e.get(sym);
            if k > 0 && !sym.is_laurent() {
                return None;
            }
            inv.0[sym.index()] = -k;
        }
        Some(ScalarPoly::term(c.inv()?, inv))
    }

    /// Raise to a nonnegative integer power.
    pub fn powi(&self, n: u32) -> ScalarPoly {
        let mut acc = ScalarPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Simultaneous substitution of symbols by scalar polynomials.
    pub fn subst(&self, bindings: &BTreeMap<Symbol, ScalarPoly>) -> Result<ScalarPoly, SubstError> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        // Powers are cached per (symbol, exponent) since the same few recur.
        let mut cache: BTreeMap<(Symbol, i32), ScalarPoly> = BTreeMap::new();
        let mut out = ScalarPoly::zero();
        for (exps, c) in &self.terms {
            let mut kept = Exponents::one();
            let mut factor = ScalarPoly::one();
            for sym in Symbol::ALL {
                let k = exps.get(sym);
                if k == 0 {
                    continue;
                }
                match bindings.get(&sym) {
                    None => kept.0[sym.index()] = k,
                    Some(val) => {
                        let p = match cache.get(&(sym, k)) {
                            Some(p) => p.clone(),
                            None => {
                                let p = if k >= 0 {
                                    val.powi(k as u32)
                                } else {
                                    invert_binding(val)?.powi((-k) as u32)
                                };
                                cache.insert((sym, k), p.clone());
                                p
                            }
                        };
                        factor = &factor * &p;
                    }
                }
            }
            let term = ScalarPoly::term(c.clone(), kept);
            out = &out + &(&term * &factor);
        }
        Ok(out)
    }

    /// Substitute a single symbol.
    pub fn subst1(&self, sym: Symbol, val: &ScalarPoly) -> Result<ScalarPoly, SubstError> {
        self.subst(&BTreeMap::from([(sym, val.clone())]))
    }

    /// Rendered terms, each with its own sign, in canonical order.
    pub(crate) fn signed_terms(&self) -> Vec<(bool, String)> {
        self.terms.iter().map(|(e, c)| render_term(c, e)).collect()
    }
}

fn invert_binding(val: &ScalarPoly) -> Result<ScalarPoly, SubstError> {
    if val.terms.len() != 1 {
        return Err(SubstError::NotInvertible);
    }
    let (e, _) = val.terms.iter().next().unwrap();
    if let Some(sym) = Symbol::ALL.iter().find(|s| !s.is_laurent() && e.get(**s) > 0) {
        return Err(SubstError::NegativeExponent(*sym));
    }
    val.inverse_monomial().ok_or(SubstError::NotInvertible)
}

/// Render `c * monomial` as (is_negative, magnitude text).
pub(crate) fn render_term(c: &GaussRat, e: &Exponents) -> (bool, String) {
    let neg = c.is_negative();
    let mag = c.render_magnitude();
    let mono = e.render();
    let text = if mono.is_empty() {
        mag
    } else if mag == "1" {
        mono
    } else {
        format!("{mag}*{mono}")
    };
    (neg, text)
}

/// Joins signed term renderings as `t1 + t2 - t3`.
pub(crate) fn join_signed(terms: &[(bool, String)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (neg, text)) in terms.iter().enumerate() {
        match (idx, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(text);
    }
    out
}

impl fmt::Display for ScalarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join_signed(&self.signed_terms()))
    }
}

impl<'a> Add<&'a ScalarPoly> for &'a ScalarPoly {
    type Output = ScalarPoly;
    fn add(self, rhs: &ScalarPoly) -> ScalarPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&ScalarPoly> for ScalarPoly {
    fn add_assign(&mut self, rhs: &ScalarPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl<'a> Sub<&'a ScalarPoly> for &'a ScalarPoly {
    type Output = ScalarPoly;
    fn sub(self, rhs: &ScalarPoly) -> ScalarPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl<'a> Mul<&'a ScalarPoly> for &'a ScalarPoly {
    type Output = ScalarPoly;
    fn mul(self, rhs: &ScalarPoly) -> ScalarPoly {
        let mut out = ScalarPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.mul(e2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &ScalarPoly {
    type Output = ScalarPoly;
    fn neg(self) -> ScalarPoly {
        ScalarPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<ScalarPoly> for ScalarPoly {
            type Output = ScalarPoly;
            fn $m(self, rhs: ScalarPoly) -> ScalarPoly { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a ScalarPoly> for ScalarPoly {
            type Output = ScalarPoly;
            fn $m(self, rhs: &ScalarPoly) -> ScalarPoly { (&self).$m(rhs) }
        }
        impl<'a> $tr<ScalarPoly> for &'a ScalarPoly {
            type Output = ScalarPoly;
            fn $m(self, rhs: ScalarPoly) -> ScalarPoly { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for ScalarPoly {
    type Output = ScalarPoly;
    fn neg(self) -> ScalarPoly {
        -&self
    }
}

/// `p0 = s^2/2`.
pub fn p0() -> ScalarPoly {
    ScalarPoly::term(GaussRat::ratio(1, 2), Exponents::of(Symbol::S, 2))
}

/// `1/(2 p0) = s^-2`.
pub fn inv_2p0() -> ScalarPoly {
    ScalarPoly::pow(Symbol::S, -2)
}

/// `1/sqrt(2 p0) = s^-1`.
pub fn inv_sqrt_2p0() -> ScalarPoly {
    ScalarPoly::pow(Symbol::S, -1)
}

/// `1/sqrt(2 p0^3) = 2 s^-3`.
pub fn inv_sqrt_2p0_cubed() -> ScalarPoly {
    ScalarPoly::term(GaussRat::int(2), Exponents::of(Symbol::S, -3))
}
