//! An r-matrix oracle for the SL₂ minor bracket, written directly from
//! `(u - v){g₁(u), g₂(v)} = [C, g₁(u) g₂(v)]` with 4×4 Kronecker products.

use yangian_core::minors::*;
use yangian_core::poly::{q, qf, Poly, Q};

pub type PMat = Vec<Vec<Poly>>;

pub fn kron(a: &PMat, b: &PMat) -> PMat {
    let n = a.len();
    let mut out = vec![vec![Poly::zero(); n * n]; n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    out[i * n + k][j * n + l] = a[i][j].mul(&b[k][l]);
                }
            }
        }
    }
    out
}

fn pmul(a: &PMat, b: &PMat) -> PMat {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Poly::zero(), |acc, k| acc.add(&a[i][k].mul(&b[k][j]))))
                .collect()
        })
        .collect()
}

fn psub(a: &PMat, b: &PMat) -> PMat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.sub(y)).collect()).collect()
}

fn constant(m: [[i64; 2]; 2], k: &Q) -> PMat {
    m.iter().map(|r| r.iter().map(|&x| Poly::constant(q(x) * k)).collect()).collect()
}

/// `C = e⊗f + f⊗e + ½ h⊗h` as a 4×4 matrix.
fn casimir() -> PMat {
    let one = q(1);
    let e = constant([[0, 1], [0, 0]], &one);
    let f = constant([[0, 0], [1, 0]], &one);
    let h = constant([[1, 0], [0, -1]], &one);
    let hh = constant([[1, 0], [0, -1]], &qf(1, 2));
    let a = kron(&e, &f);
    let b = kron(&f, &e);
    let c = kron(&h, &hh);
    a.iter()
        .zip(&b)
        .zip(&c)
        .map(|((x, y), z)| x.iter().zip(y).zip(z).map(|((p, q), r)| p.add(q).add(r)).collect())
        .collect()
}

fn coeff_matrix(g: &LoopMatrix, p: usize) -> PMat {
    (0..2).map(|i| (0..2).map(|j| g.entry(i, j).coeff(p).clone()).collect()).collect()
}

/// `(u - v){g₁(u), g₂(v)} = [C, g₁(u) g₂(v)]` solved coefficientwise:
/// `{g^{(r)} ⊗, g^{(s)}} = Σ_{k<r} [C, g^{(r-k-1)} ⊗ g^{(s+k)}]`.
pub fn oracle(g: &LoopMatrix, r: usize, s: usize) -> PMat {
    let c = casimir();
    let mut total = vec![vec![Poly::zero(); 4]; 4];
    for k in 0..r {
        let t = kron(&coeff_matrix(g, r - k - 1), &coeff_matrix(g, s + k));
        let comm = psub(&pmul(&c, &t), &pmul(&t, &c));
        total = total.iter().zip(&comm).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(y)).collect()).collect();
    }
    total
}

/// Compare `minor_bracket` on SL₂ entries against the oracle for all `r + s ≤ max`.
pub fn compare_with_oracle(max: usize) -> Result<usize, String> {
    let g = build_sl(2, max - 1, &CoordMode::Symbolic).map_err(|e| e.to_string())?;
    let cas = CasimirData::sl(2);
    let mut n = 0;
    for r in 1..max {
        for s in 1..=(max - r) {
            let o = oracle(&g, r, s);
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        for l in 0..2 {
                            let got = minor_bracket(&g, &MinorRef::entry(i, j), r, &MinorRef::entry(k, l), s, &cas)
                                .map_err(|e| e.to_string())?;
                            if got != o[i * 2 + k][j * 2 + l] {
                                return Err(format!("g{}{}({}) vs g{}{}({})", i + 1, j + 1, r, k + 1, l + 1, s));
                            }
                            n += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minor_bracket_matches_r_matrix_oracle() {
        assert_eq!(compare_with_oracle(4), Ok(16 * 6));
    }

    #[test]
    fn bracket_of_constants_vanishes() {
        let g = build_sl(2, 2, &CoordMode::Symbolic).unwrap();
        let cas = CasimirData::sl(2);
        let m = MinorRef::entry(0, 1);
        assert!(minor_bracket(&g, &m, 0, &MinorRef::entry(1, 0), 2, &cas).unwrap().is_zero());
    }

    #[test]
    fn sl3_skew_symmetry() {
        let g = build_sl(3, 2, &CoordMode::Symbolic).unwrap();
        let cas = CasimirData::sl(3);
        let minors = [
            MinorRef::entry(0, 2),
            MinorRef::entry(2, 1),
            MinorRef::generalized(3, 2, &[1], &[]).unwrap(),
            MinorRef::generalized(3, 1, &[], &[0, 1]).unwrap(),
        ];
        for a in &minors {
            for b in &minors {
                let x = minor_bracket(&g, a, 1, b, 2, &cas).unwrap();
                let y = minor_bracket(&g, b, 2, a, 1, &cas).unwrap();
                assert_eq!(x, y.neg());
            }
        }
    }

    #[test]
    fn jacobi_det_ideal_and_phi() {
        let jac = jacobi_suite(60, 3, 11).unwrap();
        assert!(jac.iter().all(|c| c.pass), "{:?}", jac.iter().find(|c| !c.pass));
        assert_eq!(jac.len(), 62);
        assert!(det_ideal_check(3).unwrap().iter().all(|c| c.pass));
        let phi = phi_bracket_check(4).unwrap();
        assert!(phi.iter().all(|c| c.pass), "{:?}", phi);
    }
}
