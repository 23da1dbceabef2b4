use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::Rational;

/// The affine function `intercept + slope * λ` of the ray parameter.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AffineLine {
    pub intercept: Rational,
    pub slope: Rational,
}

impl AffineLine {
    pub fn new(intercept: Rational, slope: Rational) -> Self {
        AffineLine { intercept, slope }
    }

    pub fn from_ints(intercept: i64, slope: i64) -> Self {
        AffineLine::new(intercept.into(), slope.into())
    }

    pub fn constant(value: Rational) -> Self {
        AffineLine::new(value, Rational::zero())
    }

    /// Line of slope `slope` passing through `(at, value)`.
    pub fn through(at: &Rational, value: &Rational, slope: Rational) -> Self {
        let intercept = value - &(&slope * at);
        AffineLine::new(intercept, slope)
    }

    pub fn eval(&self, lambda: &Rational) -> Rational {
        if self.slope.is_zero() {
            return self.intercept.clone();
        }
        &self.intercept + &(&self.slope * lambda)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        AffineLine::new(&self.intercept * k, &self.slope * k)
    }

    /// Re-expresses the line in the shifted parameter `λ' = λ - by`.
    pub fn shifted(&self, by: &Rational) -> Self {
        AffineLine::new(self.eval(by), self.slope.clone())
    }

    /// `(value, dir * slope)` at `at`: the key ordering values at `at + dir·ε`.
    pub fn lex_at(&self, at: &Rational, dir: Direction) -> Lex {
        let slope = match dir {
            Direction::Right => self.slope.clone(),
            Direction::Left => -&self.slope,
        };
        Lex::new(self.eval(at), slope)
    }
}

impl fmt::Debug for AffineLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}λ", self.intercept, self.slope)
    }
}

impl<'a> Add<&'a AffineLine> for &'a AffineLine {
    type Output = AffineLine;
    fn add(self, rhs: &'a AffineLine) -> AffineLine {
        AffineLine::new(&self.intercept + &rhs.intercept, &self.slope + &rhs.slope)
    }
}

impl Add for AffineLine {
    type Output = AffineLine;
    fn add(self, rhs: AffineLine) -> AffineLine {
        &self + &rhs
    }
}

impl<'a> Sub<&'a AffineLine> for &'a AffineLine {
    type Output = AffineLine;
    fn sub(self, rhs: &'a AffineLine) -> AffineLine {
        AffineLine::new(&self.intercept - &rhs.intercept, &self.slope - &rhs.slope)
    }
}

impl Neg for &AffineLine {
    type Output = AffineLine;
    fn neg(self) -> AffineLine {
        AffineLine::new(-&self.intercept, -&self.slope)
    }
}

impl<'a> AddAssign<&'a AffineLine> for AffineLine {
    fn add_assign(&mut self, rhs: &'a AffineLine) {
        self.intercept += &rhs.intercept;
        self.slope += &rhs.slope;
    }
}

impl Zero for AffineLine {
    fn zero() -> Self {
        AffineLine::default()
    }
    fn is_zero(&self) -> bool {
        self.intercept.is_zero() && self.slope.is_zero()
    }
}

/// λ at which `a` and `b` agree; `None` for parallel (or identical) lines.
pub fn line_intersection(a: &AffineLine, b: &AffineLine) -> Option<Rational> {
    let ds = &a.slope - &b.slope;
    if ds.is_zero() {
        return None;
    }
    Some(&(&b.intercept - &a.intercept) / &ds)
}

/// Side of a point from which a one-sided quantity is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Left,
    Right,
}

impl Direction {
    pub fn sign(self) -> i64 {
        match self {
            Direction::Left => -1,
            Direction::Right => 1,
        }
    }
}

/// A value paired with a first-order infinitesimal term, ordered
/// lexicographically. `Lex::new(v, s)` stands for `v + s·ε` with `ε > 0`
/// infinitesimal.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Lex {
    pub value: Rational,
    pub slope: Rational,
}

impl Lex {
    pub fn new(value: Rational, slope: Rational) -> Self {
        Lex { value, slope }
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative() || (self.value.is_zero() && self.slope.is_negative())
    }
}

impl Ord for Lex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .cmp(&other.value)
            .then_with(|| self.slope.cmp(&other.slope))
    }
}

impl PartialOrd for Lex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> AddAssign<&'a Lex> for Lex {
    fn add_assign(&mut self, rhs: &'a Lex) {
        self.value += &rhs.value;
        self.slope += &rhs.slope;
    }
}

impl Add for Lex {
    type Output = Lex;
    fn add(mut self, rhs: Lex) -> Lex {
        self += &rhs;
        self
    }
}

impl Zero for Lex {
    fn zero() -> Self {
        Lex::default()
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.slope.is_zero()
    }
}

/// Compares `a(λ+ε)` with `b(λ+ε)` given `(value at λ, slope)` pairs.
pub fn lex_compare(a: (&Rational, &Rational), b: (&Rational, &Rational)) -> Ordering {
    a.0.cmp(b.0).then_with(|| a.1.cmp(b.1))
}
