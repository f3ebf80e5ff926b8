//! The h-difference algebra on `z_{i,k}`, `β_{i,k}^{±1}` with
//! `β_{i,k} z_{i,k} = (z_{i,k} + d_i h) β_{i,k}`, in normal form
//! `Σ f(z, h, c) · β^m` (coefficients left, shifts right).

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::cartan::{CartanDatum, ShiftData};
use crate::error::Result;
use crate::poly::{q, Inhomogeneous, RatFunc, RatFuncJson, Var, Q};
use crate::series::Ring;

/// The shift generator `β_{node,k}`; `step` is the symmetrizer `d_node`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BetaVar {
    pub node: u16,
    pub k: u16,
    pub step: i64,
}

impl BetaVar {
    pub fn new(node: usize, k: usize, step: i64) -> BetaVar {
        BetaVar { node: node as u16, k: k as u16, step }
    }

    pub fn z(&self) -> Var {
        Var::Z { node: self.node, k: self.k }
    }
}

impl fmt::Display for BetaVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b{}_{}", self.node + 1, self.k)
    }
}

/// Exponent vector over the β's, finite support, nonzero entries only.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BetaMono(Vec<(BetaVar, i32)>);

impl BetaMono {
    pub fn one() -> BetaMono {
        BetaMono(Vec::new())
    }

    pub fn single(b: BetaVar, e: i32) -> BetaMono {
        if e == 0 {
            BetaMono::one()
        } else {
            BetaMono(vec![(b, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(BetaVar, i32)] {
        &self.0
    }

    pub fn mul(&self, o: &BetaMono) -> BetaMono {
        let mut map: BTreeMap<BetaVar, i32> = self.0.iter().cloned().collect();
        for (b, e) in &o.0 {
            *map.entry(*b).or_insert(0) += e;
        }
        BetaMono(map.into_iter().filter(|(_, e)| *e != 0).collect())
    }

    /// Conjugate a coefficient past this monomial: `β^m f = shift_m(f) β^m`.
    pub fn shift(&self, f: &RatFunc) -> RatFunc {
        let mut g = f.clone();
        for (b, e) in &self.0 {
            g = g.shift(b.z(), &q(*e as i64 * b.step));
        }
        g
    }
}

impl fmt::Display for BetaMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (b, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{}", b)?;
            } else {
                write!(f, "{}^{}", b, e)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffOp {
    terms: BTreeMap<BetaMono, RatFunc>,
}

impl From<RatFunc> for DiffOp {
    fn from(f: RatFunc) -> Self {
        DiffOp::term(BetaMono::one(), f)
    }
}

impl DiffOp {
    pub fn zero() -> DiffOp {
        DiffOp::default()
    }

    pub fn one() -> DiffOp {
        RatFunc::one().into()
    }

    pub fn term(m: BetaMono, f: RatFunc) -> DiffOp {
        let mut d = DiffOp::zero();
        d.add_term(m, f);
        d
    }

    pub fn beta(b: BetaVar, e: i32) -> DiffOp {
        DiffOp::term(BetaMono::single(b, e), RatFunc::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BetaMono, &RatFunc)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of `β^0` if that is the only term (or zero).
    pub fn as_scalar(&self) -> Option<RatFunc> {
        match self.terms.len() {
            0 => Some(RatFunc::zero()),
            1 => self.terms.get(&BetaMono::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: BetaMono, f: RatFunc) {
        if f.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(f);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&f);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &DiffOp) -> DiffOp {
        let mut r = self.clone();
        for (m, f) in &o.terms {
            r.add_term(m.clone(), f.clone());
        }
        r
    }

    pub fn sub(&self, o: &DiffOp) -> DiffOp {
        let mut r = self.clone();
        for (m, f) in &o.terms {
            r.add_term(m.clone(), f.neg());
        }
        r
    }

    pub fn neg(&self) -> DiffOp {
        DiffOp { terms: self.terms.iter().map(|(m, f)| (m.clone(), f.neg())).collect() }
    }

    pub fn scale(&self, k: &Q) -> DiffOp {
        let mut r = DiffOp::zero();
        for (m, f) in &self.terms {
            r.add_term(m.clone(), f.scale(k));
        }
        r
    }

    /// `(f β^m)(g β^n) = f · shift_m(g) · β^{m+n}`.
    pub fn mul(&self, o: &DiffOp) -> DiffOp {
        let mut r = DiffOp::zero();
        for (m1, f1) in &self.terms {
            for (m2, f2) in &o.terms {
                let g = m1.shift(f2);
                r.add_term(m1.mul(m2), f1.mul(&g));
            }
        }
        r
    }

    pub fn commutator(&self, o: &DiffOp) -> DiffOp {
        self.mul(o).sub(&o.mul(self))
    }

    /// `xy + yx`.
    pub fn anticommutator(&self, o: &DiffOp) -> DiffOp {
        self.mul(o).add(&o.mul(self))
    }

    pub fn set_h_zero(&self) -> DiffOp {
        let mut r = DiffOp::zero();
        for (m, f) in &self.terms {
            r.add_term(m.clone(), f.set_h_zero());
        }
        r
    }

    pub fn div_exact_h(&self) -> Result<DiffOp> {
        let mut r = DiffOp::zero();
        for (m, f) in &self.terms {
            r.add_term(m.clone(), f.div_exact_h()?);
        }
        Ok(r)
    }

    pub fn map_coeffs(&self, f: impl Fn(&RatFunc) -> Result<RatFunc>) -> Result<DiffOp> {
        let mut r = DiffOp::zero();
        for (m, c) in &self.terms {
            r.add_term(m.clone(), f(c)?);
        }
        Ok(r)
    }

    pub fn is_h_free(&self) -> bool {
        self.terms.values().all(|f| !f.num().contains(Var::H) && f.den().keys().all(|l| l.q == q(0)))
    }

    /// Classical bracket: lift, commute, divide by `h`, set `h = 0`.
    pub fn poisson_bracket(&self, o: &DiffOp) -> Result<DiffOp> {
        Ok(self.commutator(o).div_exact_h()?.set_h_zero())
    }

    /// Weighted degree from variable weights and β weights; `Ok(None)` for zero.
    pub fn weighted_degree(
        &self,
        wv: &dyn Fn(Var) -> i64,
        wb: &dyn Fn(BetaVar) -> i64,
    ) -> std::result::Result<Option<i64>, Inhomogeneous> {
        let mut deg = None;
        for (m, f) in &self.terms {
            let Some(df) = f.weighted_degree(wv)? else { continue };
            let d = df + m.factors().iter().map(|(b, e)| wb(*b) * *e as i64).sum::<i64>();
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return Err(Inhomogeneous),
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn to_json(&self) -> Vec<DiffOpTermJson> {
        self.terms
            .iter()
            .map(|(m, f)| DiffOpTermJson {
                beta: m.factors().iter().map(|(b, e)| (b.to_string(), *e)).collect(),
                coeff: f.to_json(),
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiffOpTermJson {
    pub beta: Vec<(String, i32)>,
    pub coeff: RatFuncJson,
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "[{}]", c)?;
            } else {
                write!(f, "[{}]*{}", c, m)?;
            }
        }
        Ok(())
    }
}

impl Ring for DiffOp {
    fn zero() -> Self {
        DiffOp::zero()
    }
    fn one() -> Self {
        DiffOp::one()
    }
    fn is_zero(&self) -> bool {
        DiffOp::is_zero(self)
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

/// Which β-weights to use when grading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GradingConvention {
    /// `deg β_{i,k} = m_i + Σ_{i→j} a_ij m_j + λ_i - μ_i`.
    Standard,
    /// `deg β_{i,k} = -(m_i + Σ_{j→i} a_ji m_j)`, the weights for which
    /// every image coefficient of `X^{(r)}` has degree exactly `r`.
    Loop,
}

pub fn beta_weight(cd: &CartanDatum, sd: &ShiftData, conv: GradingConvention, node: usize) -> i64 {
    let i = node;
    let m = |j: usize| sd.m[j] as i64;
    match conv {
        GradingConvention::Standard => {
            let out: i64 = (0..cd.rank).filter(|&j| cd.arrow(i, j)).map(|j| cd.a[i][j] * m(j)).sum();
            m(i) + out + sd.lam[i] as i64 - sd.mu[i] as i64
        }
        GradingConvention::Loop => {
            let inc: i64 = (0..cd.rank).filter(|&j| cd.arrow(j, i)).map(|j| cd.a[j][i] * m(j)).sum();
            -(m(i) + inc)
        }
    }
}

/// Variable weights: `h`, `z` weight 1, `c_i^{(r)}` weight `r`.
pub fn var_weight(v: Var) -> i64 {
    match v {
        Var::H | Var::Z { .. } => 1,
        Var::C { r, .. } => r as i64,
        Var::Aux { .. } => 0,
    }
}

pub fn grading_degree(
    x: &DiffOp,
    cd: &CartanDatum,
    sd: &ShiftData,
    conv: GradingConvention,
) -> std::result::Result<Option<i64>, Inhomogeneous> {
    let wb = |b: BetaVar| beta_weight(cd, sd, conv, b.node as usize);
    x.weighted_degree(&var_weight, &wb)
}
