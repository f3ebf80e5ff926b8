//! Sparse multivariate polynomials over ℚ and rational functions whose
//! denominators are products of linear forms `z_a - z_b - q·h`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Render a rational as `num/den` (denominator always present).
pub fn q_string(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Variables, totally ordered: `h` first, then `z` by (node, k), then `c` by
/// (node, r), then auxiliary symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    H,
    Z { node: u16, k: u16 },
    C { node: u16, r: u16 },
    Aux { sym: u16, idx: u16 },
}

impl Var {
    pub fn z(node: usize, k: usize) -> Var {
        Var::Z { node: node as u16, k: k as u16 }
    }
    pub fn c(node: usize, r: usize) -> Var {
        Var::C { node: node as u16, r: r as u16 }
    }
    pub fn aux(sym: usize, idx: usize) -> Var {
        Var::Aux { sym: sym as u16, idx: idx as u16 }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Var::H => write!(f, "h"),
            Var::Z { node, k } => write!(f, "z{}_{}", node + 1, k),
            Var::C { node, r } => write!(f, "c{}_{}", node + 1, r),
            Var::Aux { sym, idx } => {
                if sym < 26 {
                    write!(f, "{}", (b'a' + sym as u8) as char)?;
                } else {
                    write!(f, "x{}_", sym)?;
                }
                if idx > 0 {
                    write!(f, "{}", idx)?;
                }
                Ok(())
            }
        }
    }
}

/// A monomial: sorted list of (variable, positive exponent).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono(Vec<(Var, u32)>);

impl Mono {
    pub fn one() -> Mono {
        Mono(Vec::new())
    }

    pub fn var(v: Var, e: u32) -> Mono {
        if e == 0 {
            Mono::one()
        } else {
            Mono(vec![(v, e)])
        }
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut out = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < o.0.len() {
            let (a, b) = (self.0[i], o.0[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&o.0[j..]);
        Mono(out)
    }

    /// Split off the power of `v`.
    pub fn split(&self, v: Var) -> (u32, Mono) {
        match self.0.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => {
                let mut rest = self.0.clone();
                let (_, e) = rest.remove(i);
                (e, Mono(rest))
            }
            Err(_) => (0, self.clone()),
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, e) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{}", v)?;
            } else {
                write!(f, "{}^{}", v, e)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inhomogeneous;

/// Sparse polynomial: monomial -> nonzero rational coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Mono, Q>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Poly {
        let mut p = Poly::zero();
        p.add_term(Mono::one(), c);
        p
    }

    pub fn int(n: i64) -> Poly {
        Poly::constant(q(n))
    }

    pub fn var(v: Var) -> Poly {
        Poly::monomial(Mono::var(v, 1), Q::one())
    }

    pub fn h() -> Poly {
        Poly::var(Var::H)
    }

    pub fn monomial(m: Mono, c: Q) -> Poly {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// The constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Mono::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let (mut big, small) = if self.len() >= o.len() {
            (self.clone(), o)
        } else {
            (o.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }

    pub fn add_assign(&mut self, o: &Poly) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c.clone());
        }
        r
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &Q) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut r = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn contains(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn derivative(&self, v: Var) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            if e > 0 {
                r.add_term(rest.mul(&Mono::var(v, e - 1)), c * q(e as i64));
            }
        }
        r
    }

    /// Group by powers of `v`: exponent -> coefficient polynomial free of `v`.
    pub fn collect(&self, v: Var) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Replace `v` by the polynomial `t`.
    pub fn substitute(&self, v: Var, t: &Poly) -> Poly {
        if !self.contains(v) {
            return self.clone();
        }
        let parts = self.collect(v);
        let mut r = Poly::zero();
        let mut pw = Poly::one();
        let mut cur = 0;
        for (e, coef) in parts {
            while cur < e {
                pw = pw.mul(t);
                cur += 1;
            }
            r.add_assign(&coef.mul(&pw));
        }
        r
    }

    /// Substitute `v -> v + s·h`.
    pub fn shift(&self, v: Var, s: &Q) -> Poly {
        if s.is_zero() || !self.contains(v) {
            return self.clone();
        }
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            if e == 0 {
                r.add_term(m.clone(), c.clone());
                continue;
            }
            let mut binom = BigInt::one();
            let mut sp = Q::one();
            for j in 0..=e {
                let mono = rest.mul(&Mono::var(v, e - j)).mul(&Mono::var(Var::H, j));
                r.add_term(mono, c * &sp * Q::from_integer(binom.clone()));
                binom = binom * BigInt::from(e - j) / BigInt::from(j + 1);
                sp *= s;
            }
        }
        r
    }

    pub fn set_zero(&self, v: Var) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exp(v) == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Divide by `h`; `None` if some monomial lacks `h`.
    pub fn div_h(&self) -> Option<Poly> {
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(Var::H);
            if e == 0 {
                return None;
            }
            r.terms.insert(rest.mul(&Mono::var(Var::H, e - 1)), c.clone());
        }
        Some(r)
    }

    /// Exact division by `a - t` where `t` does not involve `a`.
    pub fn div_linear(&self, a: Var, t: &Poly) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let parts = self.collect(a);
        let top = *parts.keys().next_back().unwrap();
        if top == 0 {
            return None;
        }
        let mut quot: Vec<Poly> = vec![Poly::zero(); top as usize];
        let mut carry = Poly::zero();
        for k in (1..=top).rev() {
            let pk = parts.get(&k).cloned().unwrap_or_default();
            let qk = pk.add(&t.mul(&carry));
            quot[(k - 1) as usize] = qk.clone();
            carry = qk;
        }
        let p0 = parts.get(&0).cloned().unwrap_or_default();
        if !p0.add(&t.mul(&carry)).is_zero() {
            return None;
        }
        let mut r = Poly::zero();
        for (k, qk) in quot.into_iter().enumerate() {
            r.add_assign(&qk.mul(&Poly::monomial(Mono::var(a, k as u32), Q::one())));
        }
        Some(r)
    }

    /// Weighted degree; `Ok(None)` for the zero polynomial.
    pub fn weighted_degree(&self, w: &dyn Fn(Var) -> i64) -> std::result::Result<Option<i64>, Inhomogeneous> {
        let mut deg = None;
        for m in self.terms.keys() {
            let d: i64 = m.factors().iter().map(|(v, e)| w(*v) * *e as i64).sum();
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return Err(Inhomogeneous),
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Q) -> Q) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            r.add_term(m.clone(), f(c));
        }
        r
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(m, c)| TermJson {
                coeff: q_string(c),
                mono: m.factors().iter().map(|(v, e)| (v.to_string(), *e)).collect(),
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TermJson {
    pub coeff: String,
    pub mono: Vec<(String, u32)>,
}

fn fmt_coeff_term(f: &mut fmt::Formatter<'_>, first: bool, c: &Q, m: &Mono) -> fmt::Result {
    let neg = c.is_negative();
    let a = c.abs();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    if m.is_one() {
        write!(f, "{}", a)
    } else if a.is_one() {
        write!(f, "{}", m)
    } else {
        write!(f, "{}*{}", a, m)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            fmt_coeff_term(f, i == 0, c, m)?;
        }
        Ok(())
    }
}

/// Normalized linear form `a - b - q·h` with `a < b`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinForm {
    pub a: Var,
    pub b: Var,
    pub q: Q,
}

impl LinForm {
    /// Normalize `x - y - s·h`; returns the form and the sign `±1` with
    /// `x - y - s·h = sign · form`.
    pub fn normalize(x: Var, y: Var, s: Q) -> Result<(LinForm, i64)> {
        match x.cmp(&y) {
            std::cmp::Ordering::Less => Ok((LinForm { a: x, b: y, q: s }, 1)),
            std::cmp::Ordering::Greater => Ok((LinForm { a: y, b: x, q: -s }, -1)),
            std::cmp::Ordering::Equal => Err(Error::Invalid(format!(
                "degenerate linear form {} - {}",
                x, y
            ))),
        }
    }

    pub fn to_poly(&self) -> Poly {
        Poly::var(self.a)
            .sub(&Poly::var(self.b))
            .sub(&Poly::h().scale(&self.q))
    }

    fn shift(&self, v: Var, s: &Q) -> LinForm {
        let mut f = self.clone();
        if v == self.a {
            f.q -= s;
        } else if v == self.b {
            f.q += s;
        }
        f
    }
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} - {}", self.a, self.b)?;
        if self.q.is_positive() {
            write!(f, " - {}*h", self.q)?;
        } else if self.q.is_negative() {
            write!(f, " + {}*h", -self.q.clone())?;
        }
        Ok(())
    }
}

/// Rational function `num / ∏ L^e` kept in lowest terms with respect to the
/// stored linear forms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: BTreeMap<LinForm, u32>,
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc { num: p, den: BTreeMap::new() }
    }
}

impl RatFunc {
    pub fn zero() -> RatFunc {
        RatFunc::default()
    }

    pub fn one() -> RatFunc {
        Poly::one().into()
    }

    pub fn constant(c: Q) -> RatFunc {
        Poly::constant(c).into()
    }

    pub fn var(v: Var) -> RatFunc {
        Poly::var(v).into()
    }

    /// `1 / (x - y - s·h)`.
    pub fn inv_linear(x: Var, y: Var, s: Q) -> Result<RatFunc> {
        let (form, sign) = LinForm::normalize(x, y, s)?;
        let mut den = BTreeMap::new();
        den.insert(form, 1);
        Ok(RatFunc { num: Poly::int(sign), den })
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &BTreeMap<LinForm, u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        if self.den.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn den_poly(&self) -> Poly {
        let mut p = Poly::one();
        for (f, e) in &self.den {
            p = p.mul(&f.to_poly().pow(*e));
        }
        p
    }

    fn from_parts(num: Poly, den: BTreeMap<LinForm, u32>) -> RatFunc {
        let mut r = RatFunc { num, den };
        r.cancel();
        r
    }

    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let forms: Vec<LinForm> = self.den.keys().cloned().collect();
        for f in forms {
            let t = Poly::var(f.b).add(&Poly::h().scale(&f.q));
            loop {
                let e = self.den[&f];
                if e == 0 {
                    break;
                }
                match self.num.div_linear(f.a, &t) {
                    Some(qt) => {
                        self.num = qt;
                        if e == 1 {
                            self.den.remove(&f);
                            break;
                        }
                        self.den.insert(f.clone(), e - 1);
                    }
                    None => break,
                }
            }
        }
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if self.den == o.den {
            return RatFunc::from_parts(self.num.add(&o.num), self.den.clone());
        }
        let mut lcm = self.den.clone();
        for (f, e) in &o.den {
            let x = lcm.entry(f.clone()).or_insert(0);
            *x = (*x).max(*e);
        }
        let lift = |r: &RatFunc| -> Poly {
            let mut p = r.num.clone();
            for (f, e) in &lcm {
                let have = r.den.get(f).copied().unwrap_or(0);
                if *e > have {
                    p = p.mul(&f.to_poly().pow(e - have));
                }
            }
            p
        };
        let num = lift(self).add(&lift(o));
        RatFunc::from_parts(num, lcm)
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn scale(&self, k: &Q) -> RatFunc {
        if k.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(k), den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        let mut den = self.den.clone();
        for (f, e) in &o.den {
            *den.entry(f.clone()).or_insert(0) += e;
        }
        let num = self.num.mul(&o.num);
        if self.den.is_empty() || o.den.is_empty() {
            // one side is a polynomial: only its numerator can cancel the other's forms
            let mut r = RatFunc { num, den };
            if !(self.den.is_empty() && o.den.is_empty()) {
                r.cancel();
            }
            return r;
        }
        RatFunc::from_parts(num, den)
    }

    pub fn mul_poly(&self, p: &Poly) -> RatFunc {
        self.mul(&RatFunc::from(p.clone()))
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        let mut r = RatFunc::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Substitute `v -> v + s·h` (numerator and every linear form).
    pub fn shift(&self, v: Var, s: &Q) -> RatFunc {
        if s.is_zero() {
            return self.clone();
        }
        RatFunc {
            num: self.num.shift(v, s),
            den: self.den.iter().map(|(f, e)| (f.shift(v, s), *e)).collect(),
        }
    }

    /// `shiftZ(f, i, k, q)`: substitute `z_{i,k} -> z_{i,k} + q·h`.
    pub fn shift_z(&self, node: usize, k: usize, s: &Q) -> RatFunc {
        self.shift(Var::z(node, k), s)
    }

    pub fn set_h_zero(&self) -> RatFunc {
        let mut den: BTreeMap<LinForm, u32> = BTreeMap::new();
        for (f, e) in &self.den {
            let g = LinForm { a: f.a, b: f.b, q: Q::zero() };
            *den.entry(g).or_insert(0) += e;
        }
        RatFunc::from_parts(self.num.set_zero(Var::H), den)
    }

    pub fn div_exact_h(&self) -> Result<RatFunc> {
        match self.num.div_h() {
            Some(n) => Ok(RatFunc { num: n, den: self.den.clone() }),
            None => Err(Error::NotDivisible(self.to_string())),
        }
    }

    /// Substitute a polynomial for a variable that does not occur in any
    /// denominator form.
    pub fn substitute(&self, v: Var, t: &Poly) -> Result<RatFunc> {
        if self.den.keys().any(|f| f.a == v || f.b == v) {
            return Err(Error::Invalid(format!("cannot substitute denominator variable {}", v)));
        }
        Ok(RatFunc::from_parts(self.num.substitute(v, t), self.den.clone()))
    }

    pub fn weighted_degree(&self, w: &dyn Fn(Var) -> i64) -> std::result::Result<Option<i64>, Inhomogeneous> {
        let Some(nd) = self.num.weighted_degree(w)? else {
            return Ok(None);
        };
        let mut dd = 0i64;
        for (f, e) in &self.den {
            let wa = w(f.a);
            if w(f.b) != wa || (!f.q.is_zero() && w(Var::H) != wa) {
                return Err(Inhomogeneous);
            }
            dd += wa * *e as i64;
        }
        Ok(Some(nd - dd))
    }

    pub fn to_json(&self) -> RatFuncJson {
        RatFuncJson {
            num: self.num.to_json(),
            den: self
                .den
                .iter()
                .map(|(f, e)| DenJson { form: f.to_string(), exp: *e })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DenJson {
    pub form: String,
    pub exp: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct RatFuncJson {
    pub num: Vec<TermJson>,
    pub den: Vec<DenJson>,
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/(", self.num)?;
        for (i, (form, e)) in self.den.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "({})", form)?;
            } else {
                write!(f, "({})^{}", form, e)?;
            }
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(k: usize) -> Var {
        Var::z(0, k)
    }

    #[test]
    fn opposite_forms_cancel() {
        let a = RatFunc::inv_linear(z(1), z(2), Q::zero()).unwrap();
        let b = RatFunc::inv_linear(z(2), z(1), Q::zero()).unwrap();
        assert!(a.add(&b).is_zero());
    }

    #[test]
    fn form_times_inverse_is_one() {
        let f = RatFunc::from(Poly::var(z(1)).sub(&Poly::var(z(2))));
        let g = RatFunc::inv_linear(z(1), z(2), Q::zero()).unwrap();
        assert_eq!(f.mul(&g), RatFunc::one());
    }

    #[test]
    fn h_over_form_times_form_over_h() {
        let h_over = RatFunc::inv_linear(z(1), z(2), q(1)).unwrap().mul_poly(&Poly::h());
        let form = Poly::var(z(1)).sub(&Poly::var(z(2))).sub(&Poly::h());
        // (z1 - z2 - h)/h is not representable; multiply by form then divide by h
        let prod = h_over.mul_poly(&form).div_exact_h().unwrap();
        assert_eq!(prod, RatFunc::one());
    }

    #[test]
    fn shift_examples() {
        let x = RatFunc::var(z(1)).shift_z(0, 1, &q(3));
        assert_eq!(x, RatFunc::from(Poly::var(z(1)).add(&Poly::h().scale(&q(3)))));
        let f = RatFunc::inv_linear(z(1), z(2), Q::zero()).unwrap();
        assert_eq!(f.shift_z(0, 1, &Q::zero()), f);
        assert_eq!(f.shift_z(0, 1, &q(1)), RatFunc::inv_linear(z(1), z(2), q(-1)).unwrap());
    }

    #[test]
    fn div_exact_h_examples() {
        let hz = RatFunc::from(Poly::h().mul(&Poly::var(z(1))));
        assert_eq!(hz.div_exact_h().unwrap(), RatFunc::var(z(1)));
        let num = Poly::h().pow(2).add(&Poly::h().mul(&Poly::var(z(3))));
        let f = RatFunc::inv_linear(z(1), z(2), Q::zero()).unwrap().mul_poly(&num);
        let want = RatFunc::inv_linear(z(1), z(2), Q::zero())
            .unwrap()
            .mul_poly(&Poly::h().add(&Poly::var(z(3))));
        assert_eq!(f.div_exact_h().unwrap(), want);
        assert!(matches!(RatFunc::var(z(1)).div_exact_h(), Err(Error::NotDivisible(_))));
    }

    #[test]
    fn set_h_zero_examples() {
        let zh = Poly::var(z(1)).add(&Poly::h());
        let c1 = Poly::var(Var::c(0, 1));
        let c2 = Poly::var(Var::c(0, 2));
        let p = RatFunc::from(zh.pow(2).add(&c1.mul(&zh)).add(&c2));
        let zz = Poly::var(z(1));
        assert_eq!(p.set_h_zero(), RatFunc::from(zz.pow(2).add(&c1.mul(&zz)).add(&c2)));
        assert!(RatFunc::from(Poly::h()).set_h_zero().is_zero());
        assert_eq!(
            RatFunc::inv_linear(z(1), z(2), q(1)).unwrap().set_h_zero(),
            RatFunc::inv_linear(z(1), z(2), Q::zero()).unwrap()
        );
    }

    #[test]
    fn weighted_degree_examples() {
        let w = |_: Var| 1i64;
        let p = Poly::var(z(1)).pow(2).add(&Poly::h().mul(&Poly::var(z(1))));
        assert_eq!(RatFunc::from(p).weighted_degree(&w), Ok(Some(2)));
        let p = Poly::var(z(1)).add(&Poly::h().pow(2));
        assert_eq!(RatFunc::from(p).weighted_degree(&w), Err(Inhomogeneous));
        let f = RatFunc::inv_linear(z(1), z(2), q(1)).unwrap();
        assert_eq!(f.weighted_degree(&w), Ok(Some(-1)));
    }

    #[test]
    fn set_h_zero_merges_forms() {
        let a = RatFunc::inv_linear(z(1), z(2), q(1)).unwrap();
        let b = RatFunc::inv_linear(z(1), z(2), Q::zero()).unwrap();
        let f = a.sub(&b); // h/((z1-z2-h)(z1-z2))
        assert!(f.set_h_zero().is_zero());
        let g = f.div_exact_h().unwrap().set_h_zero();
        assert_eq!(g, b.mul(&b));
    }
}
