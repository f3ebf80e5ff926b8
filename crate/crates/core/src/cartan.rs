//! Finite-type Cartan data: matrices, symmetrizers, positive roots, the
//! involution `i -> i*` from `-w_0`, coweights and shift data.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{q, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartanDatum {
    pub kind: char,
    pub rank: usize,
    /// `a[i][j] = <α_i^∨, α_j>`, so that `(α_i, α_j) = d_i a_ij`.
    pub a: Vec<Vec<i64>>,
    pub d: Vec<i64>,
    pub positive_roots: Vec<Vec<i64>>,
    pub dual: Vec<usize>,
    /// Reduced word for `w_0` (0-based nodes), applied left to right.
    pub w0_word: Vec<usize>,
    /// Unordered edges `(i, j)`, `i < j`.
    pub edges: Vec<(usize, usize)>,
    /// Directed edges `(from, to)`; each edge appears once.
    pub orientation: Vec<(usize, usize)>,
}

fn cartan_matrix(kind: char, n: usize) -> Result<Vec<Vec<i64>>> {
    let bad = || Error::UnknownType(kind.to_string(), n);
    let valid = match kind {
        'A' => (1..=8).contains(&n),
        'B' | 'C' => (2..=8).contains(&n),
        'D' => (4..=8).contains(&n),
        'E' => (6..=8).contains(&n),
        'F' => n == 4,
        'G' => n == 2,
        _ => false,
    };
    if !valid {
        return Err(bad());
    }
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match kind {
        'A' | 'B' | 'C' => {
            for i in 0..n - 1 {
                link(i, i + 1);
            }
        }
        'D' => {
            for i in 0..n - 2 {
                link(i, i + 1);
            }
            link(n - 3, n - 1);
        }
        'E' => {
            link(0, 2);
            link(1, 3);
            for i in 2..n - 1 {
                link(i, i + 1);
            }
        }
        'F' => {
            link(0, 1);
            link(1, 2);
            link(2, 3);
        }
        'G' => link(0, 1),
        _ => unreachable!(),
    }
    match kind {
        'B' => a[n - 1][n - 2] = -2,
        'C' => a[n - 2][n - 1] = -2,
        'F' => a[2][1] = -2,
        'G' => a[0][1] = -3,
        _ => {}
    }
    Ok(a)
}

/// Coprime positive integers with `d_i a_ij = d_j a_ji`.
fn symmetrizers(a: &[Vec<i64>]) -> Result<Vec<i64>> {
    let n = a.len();
    let mut d: Vec<Option<Q>> = vec![None; n];
    d[0] = Some(q(1));
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        let di = d[i].clone().unwrap();
        for j in 0..n {
            if i != j && a[i][j] != 0 && d[j].is_none() {
                d[j] = Some(&di * q(a[i][j]) / q(a[j][i]));
                stack.push(j);
            }
        }
    }
    let d: Vec<Q> = d
        .into_iter()
        .map(|x| x.ok_or_else(|| Error::Invalid("disconnected Dynkin diagram".into())))
        .collect::<Result<_>>()?;
    let lcm = d.iter().fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<num_bigint::BigInt> = d.iter().map(|x| (x * Q::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
    Ok(ints.iter().map(|x| (x / &g).to_i64().unwrap()).collect())
}

/// Exact inverse of a rational matrix, `None` if singular.
pub fn inverse_q(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { q(1) } else { q(0) }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, piv);
        let p = aug[col][col].clone();
        for x in aug[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                let pivot_row = aug[col].clone();
                for (x, y) in aug[r].iter_mut().zip(pivot_row.iter()) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

impl CartanDatum {
    pub fn build(kind: char, rank: usize, orientation: Option<Vec<(usize, usize)>>) -> Result<CartanDatum> {
        let kind = kind.to_ascii_uppercase();
        let a = cartan_matrix(kind, rank)?;
        let d = symmetrizers(&a)?;
        let mut edges = Vec::new();
        for i in 0..rank {
            for j in i + 1..rank {
                if a[i][j] != 0 {
                    edges.push((i, j));
                }
            }
        }
        let orientation = match orientation {
            None => edges.clone(),
            Some(o) => {
                let mut seen = BTreeSet::new();
                for &(x, y) in &o {
                    let e = (x.min(y), x.max(y));
                    if x >= rank || y >= rank || !edges.contains(&e) || !seen.insert(e) {
                        return Err(Error::Invalid(format!("bad orientation edge ({}, {})", x + 1, y + 1)));
                    }
                }
                if seen.len() != edges.len() {
                    return Err(Error::Invalid("orientation does not cover every edge".into()));
                }
                o
            }
        };
        let mut cd = CartanDatum {
            kind,
            rank,
            a,
            d,
            positive_roots: Vec::new(),
            dual: Vec::new(),
            w0_word: Vec::new(),
            edges,
            orientation,
        };
        cd.positive_roots = cd.compute_positive_roots();
        cd.w0_word = cd.compute_w0_word();
        cd.dual = (0..rank)
            .map(|i| {
                let mut simple = vec![0i64; rank];
                simple[i] = 1;
                let img = cd.apply_w0_root(&simple);
                img.iter().position(|&c| c == -1).unwrap()
            })
            .collect();
        Ok(cd)
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.kind, self.rank)
    }

    /// Same datum with every arrow reversed.
    pub fn reversed(&self) -> CartanDatum {
        let mut cd = self.clone();
        cd.orientation = self.orientation.iter().map(|&(x, y)| (y, x)).collect();
        cd
    }

    pub fn bilinear(&self, i: usize, j: usize) -> i64 {
        self.d[i] * self.a[i][j]
    }

    /// Whether the arrow `from -> to` is in the orientation.
    pub fn arrow(&self, from: usize, to: usize) -> bool {
        self.orientation.contains(&(from, to))
    }

    pub fn dim_g(&self) -> usize {
        self.rank + 2 * self.positive_roots.len()
    }

    fn pair_coroot(&self, i: usize, beta: &[i64]) -> i64 {
        beta.iter().enumerate().map(|(j, c)| c * self.a[i][j]).sum()
    }

    pub fn reflect_root(&self, i: usize, beta: &[i64]) -> Vec<i64> {
        let k = self.pair_coroot(i, beta);
        let mut r = beta.to_vec();
        r[i] -= k;
        r
    }

    fn compute_positive_roots(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut roots: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        let mut known: BTreeSet<Vec<i64>> = roots.iter().cloned().collect();
        let mut layer = roots.clone();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for beta in &layer {
                for i in 0..n {
                    // p = length of the i-string below beta
                    let mut p = 0;
                    let mut lower = beta.clone();
                    loop {
                        lower[i] -= 1;
                        if known.contains(&lower) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let qlen = p - self.pair_coroot(i, beta);
                    if qlen > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if known.insert(up.clone()) {
                            next.push(up);
                        }
                    }
                }
            }
            next.sort();
            roots.extend(next.iter().cloned());
            layer = next;
        }
        roots
    }

    pub fn is_positive_root(&self, alpha: &[i64]) -> bool {
        self.positive_roots.iter().any(|r| r.as_slice() == alpha)
    }

    fn compute_w0_word(&self) -> Vec<usize> {
        // weight in fundamental-weight coordinates; start at ρ, descend to -ρ
        let n = self.rank;
        let mut lam = vec![1i64; n];
        let mut word = Vec::new();
        while let Some(i) = (0..n).find(|&i| lam[i] > 0) {
            let li = lam[i];
            for (k, x) in lam.iter_mut().enumerate() {
                *x -= li * self.a[k][i];
            }
            word.push(i);
        }
        word
    }

    pub fn apply_w0_root(&self, beta: &[i64]) -> Vec<i64> {
        let mut b = beta.to_vec();
        for &i in &self.w0_word {
            b = self.reflect_root(i, &b);
        }
        b
    }

    /// `w_0` acting on a coweight in fundamental-coweight coordinates.
    pub fn apply_w0_coweight(&self, fund: &[i64]) -> Vec<i64> {
        let mut l = fund.to_vec();
        for &i in &self.w0_word {
            let li = l[i];
            for (k, x) in l.iter_mut().enumerate() {
                *x -= li * self.a[i][k];
            }
        }
        l
    }

    /// `(α̂, index of α̌)` with α̌ the first simple root, in `order`, such that
    /// `α - α̌` is a positive root.
    pub fn root_decompose_with_order(&self, alpha: &[i64], order: &[usize]) -> Result<(Vec<i64>, usize)> {
        if !self.is_positive_root(alpha) {
            return Err(Error::Precondition(format!("{:?} is not a positive root", alpha)));
        }
        if alpha.iter().sum::<i64>() == 1 {
            return Err(Error::Precondition(format!("{:?} is simple", alpha)));
        }
        for &i in order {
            let mut rest = alpha.to_vec();
            rest[i] -= 1;
            if self.is_positive_root(&rest) {
                return Ok((rest, i));
            }
        }
        Err(Error::Precondition(format!("no decomposition for {:?}", alpha)))
    }

    pub fn root_decompose(&self, alpha: &[i64]) -> Result<(Vec<i64>, usize)> {
        let order: Vec<usize> = (0..self.rank).collect();
        self.root_decompose_with_order(alpha, &order)
    }

    pub fn inverse_cartan_transpose(&self) -> Vec<Vec<Q>> {
        let n = self.rank;
        let at: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| q(self.a[j][i])).collect()).collect();
        inverse_q(&at).expect("finite-type Cartan matrices are invertible")
    }

    /// Hilbert series of the slice: coefficients of
    /// `∏_{i≥1} (1-q^i)^{-(dim g - d(i))}`, where `d(i)` counts roots `α`
    /// with `<w_0 μ, α> ≤ -i`.
    pub fn hilbert_count_slice(&self, mu: &Coweight, n: usize) -> Result<Vec<BigUint>> {
        if !mu.is_dominant() {
            return Err(Error::Precondition("μ must be dominant".into()));
        }
        let w0mu = self.apply_w0_coweight(&mu.fund);
        let mut all_roots = self.positive_roots.clone();
        all_roots.extend(self.positive_roots.iter().map(|r| r.iter().map(|c| -c).collect()));
        let pair: Vec<i64> = all_roots
            .iter()
            .map(|r| r.iter().zip(&w0mu).map(|(c, l)| c * l).sum())
            .collect();
        let dim = self.dim_g() as i64;
        let mut coeffs = vec![BigUint::zero(); n + 1];
        coeffs[0] = BigUint::one();
        for i in 1..=n {
            let di = pair.iter().filter(|&&p| p <= -(i as i64)).count() as i64;
            let e = (dim - di) as u64;
            // multiply by (1 - q^i)^{-e} = Σ_k binom(e-1+k, k) q^{ik}
            let mut next = vec![BigUint::zero(); n + 1];
            for (base, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut k = 0usize;
                let mut b = BigUint::one();
                while base + i * k <= n {
                    next[base + i * k] += c * &b;
                    k += 1;
                    if e == 0 {
                        break;
                    }
                    b = b * BigUint::from(e - 1 + k as u64) / BigUint::from(k as u64);
                }
            }
            coeffs = next;
        }
        Ok(coeffs)
    }

    /// Number of PBW monomials of each degree in the generators `E_α^{(s)}`,
    /// `H_i^{(s)}`, `F_α^{(s)}` (`s > <μ*, α>`), enumerated as multisets.
    pub fn count_pbw_monomials(&self, mu: &Coweight, n: usize) -> Result<Vec<BigUint>> {
        if !mu.is_dominant() {
            return Err(Error::Precondition("μ must be dominant".into()));
        }
        let mu_star: Vec<i64> = (0..self.rank).map(|i| mu.fund[self.dual[i]]).collect();
        let mut degrees: Vec<usize> = Vec::new();
        for s in 1..=n {
            for alpha in &self.positive_roots {
                degrees.push(s); // E_α^{(s)}
                let shift: i64 = alpha.iter().zip(&mu_star).map(|(c, m)| c * m).sum();
                if s as i64 > shift {
                    degrees.push(s); // F_α^{(s)}
                }
            }
            for _ in 0..self.rank {
                degrees.push(s); // H_i^{(s)}
            }
        }
        let mut ways = vec![BigUint::zero(); n + 1];
        ways[0] = BigUint::one();
        for g in degrees {
            for t in g..=n {
                let add = ways[t - g].clone();
                ways[t] += add;
            }
        }
        Ok(ways)
    }
}

/// A coweight, stored in both fundamental-coweight and simple-coroot
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coweight {
    pub fund: Vec<i64>,
    #[serde(serialize_with = "ser_q_vec")]
    pub coroot: Vec<Q>,
}

fn ser_q_vec<S: serde::Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&crate::poly::q_string(x))?;
    }
    seq.end()
}

impl Coweight {
    pub fn from_fund(cd: &CartanDatum, fund: Vec<i64>) -> Result<Coweight> {
        if fund.len() != cd.rank {
            return Err(Error::Invalid(format!("expected {} coordinates", cd.rank)));
        }
        let inv = cd.inverse_cartan_transpose();
        let coroot = (0..cd.rank)
            .map(|i| (0..cd.rank).fold(q(0), |acc, j| acc + &inv[i][j] * q(fund[j])))
            .collect();
        Ok(Coweight { fund, coroot })
    }

    pub fn from_coroot(cd: &CartanDatum, coroot: Vec<Q>) -> Result<Coweight> {
        if coroot.len() != cd.rank {
            return Err(Error::Invalid(format!("expected {} coordinates", cd.rank)));
        }
        let mut fund = Vec::with_capacity(cd.rank);
        for i in 0..cd.rank {
            let l = (0..cd.rank).fold(q(0), |acc, j| acc + &coroot[j] * q(cd.a[j][i]));
            if !l.is_integer() {
                return Err(Error::Invalid("coroot coordinates do not give an integral coweight".into()));
            }
            fund.push(l.to_integer().to_i64().unwrap());
        }
        Ok(Coweight { fund, coroot })
    }

    pub fn zero(cd: &CartanDatum) -> Coweight {
        Coweight { fund: vec![0; cd.rank], coroot: vec![q(0); cd.rank] }
    }

    pub fn fundamental(cd: &CartanDatum, i: usize) -> Coweight {
        let mut l = vec![0; cd.rank];
        l[i] = 1;
        Coweight::from_fund(cd, l).unwrap()
    }

    pub fn simple_coroot(cd: &CartanDatum, i: usize) -> Coweight {
        let mut n = vec![q(0); cd.rank];
        n[i] = q(1);
        Coweight::from_coroot(cd, n).unwrap()
    }

    pub fn add(&self, o: &Coweight) -> Coweight {
        Coweight {
            fund: self.fund.iter().zip(&o.fund).map(|(a, b)| a + b).collect(),
            coroot: self.coroot.iter().zip(&o.coroot).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Coweight) -> Coweight {
        Coweight {
            fund: self.fund.iter().zip(&o.fund).map(|(a, b)| a - b).collect(),
            coroot: self.coroot.iter().zip(&o.coroot).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_dominant(&self) -> bool {
        self.fund.iter().all(|&l| l >= 0)
    }
}

/// `m_i = <λ-μ, ω_{i*}>`, `λ_i = <λ, α_{i*}>`, `μ_i = <μ, α_{i*}>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftData {
    pub m: Vec<usize>,
    pub lam: Vec<usize>,
    pub mu: Vec<usize>,
}

impl ShiftData {
    pub fn new(cd: &CartanDatum, lambda: &Coweight, mu: &Coweight) -> Result<ShiftData> {
        if !lambda.is_dominant() || !mu.is_dominant() {
            return Err(Error::Precondition("λ and μ must be dominant".into()));
        }
        let diff = lambda.sub(mu);
        let mut m = Vec::with_capacity(cd.rank);
        for i in 0..cd.rank {
            let n = &diff.coroot[cd.dual[i]];
            if !n.is_integer() || n.is_negative() {
                return Err(Error::Precondition("λ - μ is not in the nonnegative coroot cone".into()));
            }
            m.push(n.to_integer().to_usize().unwrap());
        }
        let lam: Vec<usize> = (0..cd.rank).map(|i| lambda.fund[cd.dual[i]] as usize).collect();
        let mu_v: Vec<usize> = (0..cd.rank).map(|i| mu.fund[cd.dual[i]] as usize).collect();
        let sd = ShiftData { m, lam, mu: mu_v };
        sd.check_invariants(cd, &diff)?;
        Ok(sd)
    }

    fn check_invariants(&self, cd: &CartanDatum, diff: &Coweight) -> Result<()> {
        for i in 0..cd.rank {
            let rhs: i64 = self.mu[i] as i64
                + 2 * self.m[i] as i64
                + (0..cd.rank).filter(|&j| j != i).map(|j| cd.a[j][i] * self.m[j] as i64).sum::<i64>();
            if rhs != self.lam[i] as i64 {
                return Err(Error::Invalid(format!("λ_i identity fails at node {}", i + 1)));
            }
        }
        let total: usize = self.m.iter().sum();
        let rho_pair = diff.coroot.iter().fold(q(0), |acc, x| acc + x);
        if q(total as i64) != rho_pair {
            return Err(Error::Invalid("Σ m_i ≠ <ρ, λ-μ>".into()));
        }
        Ok(())
    }
}
