//! Truncated series in `u^{-1}` (and bivariate in `u^{-1}, v^{-1}`) over a
//! coefficient ring that need not be commutative.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, RatFunc, Q};

/// Coefficient ring contract for series. Multiplication order is preserved.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn scaled(&self, k: &Q) -> Self;

    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negate())
    }

    fn from_q(k: &Q) -> Self {
        Self::one().scaled(k)
    }
}

impl Ring for Q {
    fn zero() -> Self {
        <Q as Zero>::zero()
    }
    fn one() -> Self {
        <Q as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn negate(&self) -> Self {
        -self.clone()
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn scaled(&self, k: &Q) -> Self {
        self * k
    }
}

impl Ring for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn scaled(&self, k: &Q) -> Self {
        self.scale(k)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
}

impl Ring for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn scaled(&self, k: &Q) -> Self {
        self.scale(k)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
}

fn binom(n: u64, k: u64) -> BigInt {
    let mut r = BigInt::one();
    for j in 0..k {
        r = r * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    r
}

/// `c_0 + c_1 u^{-1} + ... + c_N u^{-N}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<R> {
    c: Vec<R>,
}

impl<R: Ring> TruncSeries<R> {
    pub fn from_coeffs(c: Vec<R>) -> Self {
        assert!(!c.is_empty(), "series needs at least the constant coefficient");
        TruncSeries { c }
    }

    pub fn zero(n: usize) -> Self {
        TruncSeries { c: vec![R::zero(); n + 1] }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(R::one(), n)
    }

    pub fn constant(x: R, n: usize) -> Self {
        let mut s = Self::zero(n);
        s.c[0] = x;
        s
    }

    /// `x·u^{-k}` truncated at `n`.
    pub fn monomial(k: usize, x: R, n: usize) -> Self {
        let mut s = Self::zero(n);
        if k <= n {
            s.c[k] = x;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeff(&self, s: usize) -> &R {
        assert!(s <= self.order(), "coefficient {} beyond truncation order {}", s, self.order());
        &self.c[s]
    }

    pub fn coeffs(&self) -> &[R] {
        &self.c
    }

    pub fn set_coeff(&mut self, s: usize, x: R) {
        self.c[s] = x;
    }

    pub fn truncate(&self, n: usize) -> Self {
        TruncSeries { c: self.c[..=n.min(self.order())].to_vec() }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        TruncSeries { c: (0..=n).map(|i| self.c[i].plus(&o.c[i])).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        TruncSeries { c: (0..=n).map(|i| self.c[i].minus(&o.c[i])).collect() }
    }

    pub fn neg(&self) -> Self {
        TruncSeries { c: self.c.iter().map(|x| x.negate()).collect() }
    }

    pub fn scale_q(&self, k: &Q) -> Self {
        TruncSeries { c: self.c.iter().map(|x| x.scaled(k)).collect() }
    }

    /// `x · self` (x on the left of each coefficient).
    pub fn left_mul(&self, x: &R) -> Self {
        TruncSeries { c: self.c.iter().map(|y| x.times(y)).collect() }
    }

    /// `self · x`.
    pub fn right_mul(&self, x: &R) -> Self {
        TruncSeries { c: self.c.iter().map(|y| y.times(x)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let mut c = vec![R::zero(); n + 1];
        for i in 0..=n {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                if o.c[j].is_zero() {
                    continue;
                }
                c[i + j] = c[i + j].plus(&self.c[i].times(&o.c[j]));
            }
        }
        TruncSeries { c }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one(self.order());
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Multiply by `u^{-k}`, keeping the order.
    pub fn shift_down(&self, k: usize) -> Self {
        let n = self.order();
        let mut s = Self::zero(n);
        for i in 0..=n {
            if i + k <= n {
                s.c[i + k] = self.c[i].clone();
            }
        }
        s
    }

    /// Two-sided inverse; requires `c_0 = 1`.
    pub fn invert(&self) -> Result<Self> {
        if self.c[0] != R::one() {
            return Err(Error::NonUnitConstant);
        }
        let n = self.order();
        let mut inv: Vec<R> = vec![R::zero(); n + 1];
        inv[0] = R::one();
        for k in 1..=n {
            let mut acc = R::zero();
            for j in 1..=k {
                if self.c[j].is_zero() || inv[k - j].is_zero() {
                    continue;
                }
                acc = acc.plus(&inv[k - j].times(&self.c[j]));
            }
            inv[k] = acc.negate();
        }
        Ok(TruncSeries { c: inv })
    }

    /// `s(u - a)` re-expanded with `(u-a)^{-s} = Σ_k binom(s-1+k, k) a^k u^{-(s+k)}`.
    /// `a` must commute with every coefficient.
    pub fn shift_arg(&self, a: &R) -> Self {
        let n = self.order();
        let mut apow = vec![R::one()];
        for k in 1..=n {
            let next = apow[k - 1].times(a);
            apow.push(next);
        }
        let mut c = vec![R::zero(); n + 1];
        c[0] = self.c[0].clone();
        for s in 1..=n {
            if self.c[s].is_zero() {
                continue;
            }
            for k in 0..=(n - s) {
                let b = Q::from_integer(binom((s - 1 + k) as u64, k as u64));
                let term = self.c[s].times(&apow[k]).scaled(&b);
                c[s + k] = c[s + k].plus(&term);
            }
        }
        TruncSeries { c }
    }

    /// `1/(u - z) = Σ_{s≥1} z^{s-1} u^{-s}` to order `n`.
    pub fn pole_expand(z: &R, n: usize) -> Self {
        let mut s = Self::zero(n);
        let mut p = R::one();
        for k in 1..=n {
            s.c[k] = p.clone();
            p = p.times(z);
        }
        s
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> TruncSeries<S> {
        TruncSeries { c: self.c.iter().map(f).collect() }
    }

    pub fn try_map<S: Ring>(&self, f: impl Fn(&R) -> Result<S>) -> Result<TruncSeries<S>> {
        Ok(TruncSeries { c: self.c.iter().map(f).collect::<Result<Vec<S>>>()? })
    }
}

/// Rectangular table `c_{r,s}` of the coefficient of `u^{-r} v^{-s}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiSeries<R> {
    c: Vec<Vec<R>>,
}

impl<R: Ring> BiSeries<R> {
    pub fn zero(nu: usize, nv: usize) -> Self {
        BiSeries { c: vec![vec![R::zero(); nv + 1]; nu + 1] }
    }

    pub fn from_fn(nu: usize, nv: usize, f: impl Fn(usize, usize) -> R) -> Self {
        BiSeries { c: (0..=nu).map(|r| (0..=nv).map(|s| f(r, s)).collect()).collect() }
    }

    pub fn orders(&self) -> (usize, usize) {
        (self.c.len() - 1, self.c[0].len() - 1)
    }

    pub fn coeff(&self, r: usize, s: usize) -> &R {
        &self.c[r][s]
    }

    pub fn set_coeff(&mut self, r: usize, s: usize, x: R) {
        self.c[r][s] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|row| row.iter().all(|x| x.is_zero()))
    }

    pub fn add(&self, o: &Self) -> Self {
        let (nu, nv) = self.orders();
        let (mu, mv) = o.orders();
        Self::from_fn(nu.min(mu), nv.min(mv), |r, s| self.c[r][s].plus(&o.c[r][s]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        let (nu, nv) = self.orders();
        let (mu, mv) = o.orders();
        Self::from_fn(nu.min(mu), nv.min(mv), |r, s| self.c[r][s].minus(&o.c[r][s]))
    }

    pub fn scale_q(&self, k: &Q) -> Self {
        let (nu, nv) = self.orders();
        Self::from_fn(nu, nv, |r, s| self.c[r][s].scaled(k))
    }

    pub fn left_mul(&self, x: &R) -> Self {
        let (nu, nv) = self.orders();
        Self::from_fn(nu, nv, |r, s| x.times(&self.c[r][s]))
    }

    /// `(f(u) - f(v))/(u - v)`, using
    /// `(u^{-r} - v^{-r})/(u - v) = -Σ_{a+b=r+1, a,b≥1} u^{-a} v^{-b}`.
    pub fn divided_difference(f: &TruncSeries<R>, nu: usize, nv: usize) -> Result<Self> {
        if nu >= 1 && nv >= 1 && f.order() < nu + nv - 1 {
            return Err(Error::Precondition(format!(
                "divided difference to ({}, {}) needs series order {}, have {}",
                nu,
                nv,
                nu + nv - 1,
                f.order()
            )));
        }
        Ok(Self::from_fn(nu, nv, |a, b| {
            if a == 0 || b == 0 {
                R::zero()
            } else {
                f.coeff(a + b - 1).negate()
            }
        }))
    }

    /// `f(u) - f(v)` as a bivariate table.
    pub fn difference(f: &TruncSeries<R>, nu: usize, nv: usize) -> Self {
        Self::from_fn(nu, nv, |r, s| match (r, s) {
            (0, 0) => R::zero(),
            (r, 0) => f.coeff(r).clone(),
            (0, s) => f.coeff(s).negate(),
            _ => R::zero(),
        })
    }

    /// Multiply by `(u - v)`; the result has orders one lower in each variable.
    pub fn times_u_minus_v(&self) -> Self {
        let (nu, nv) = self.orders();
        assert!(nu >= 1 && nv >= 1);
        Self::from_fn(nu - 1, nv - 1, |r, s| self.c[r + 1][s].minus(&self.c[r][s + 1]))
    }
}
