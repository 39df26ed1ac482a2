use super::{Monomial, MultiPoly};
use crate::error::{Error, Limits, Result};
use crate::gf::PrimeField;

// Tables index points with x1 as the most significant base-q digit.

/// `basis[e][a]` = coefficient of `x^e` in the point indicator `1 - (x - a)^(q-1)`.
fn indicator_basis(f: PrimeField) -> Vec<Vec<u32>> {
    let q = f.q() as usize;
    let mut binom = vec![1u32; q];
    // C(q-1, k) mod q
    for k in 1..q {
        binom[k] = f.mul(binom[k - 1], (q - k) as u32);
        binom[k] = f.mul(binom[k], f.inv(k as u32).expect("k < q"));
    }
    let mut basis = vec![vec![0u32; q]; q];
    for a in 0..q as u32 {
        let neg_a = f.neg(a);
        for (e, row) in basis.iter_mut().enumerate() {
            // (x - a)^(q-1) = Σ_e C(q-1, e) x^e (-a)^(q-1-e)
            let c = f.mul(binom[e], f.pow(neg_a, (q - 1 - e) as u64));
            row[a as usize] = if e == 0 { f.sub(1, c) } else { f.neg(c) };
        }
    }
    basis
}

/// `powers[a][e]` = `a^e` with `0^0 = 1`.
fn power_matrix(f: PrimeField) -> Vec<Vec<u32>> {
    let q = f.q();
    (0..q)
        .map(|a| (0..q).map(|e| f.pow(a, e as u64)).collect())
        .collect()
}

/// Applies `out[i] = Σ_j m[i][j]·in[j]` along every axis of a dense `q^n` tensor.
fn transform_axes(f: PrimeField, n: usize, data: &mut [u32], m: &[Vec<u32>]) {
    let q = f.q() as usize;
    let mut fiber = vec![0u32; q];
    let mut stride = 1;
    for _ in 0..n {
        let block = stride * q;
        for base in (0..data.len()).step_by(block) {
            for off in 0..stride {
                for (j, slot) in fiber.iter_mut().enumerate() {
                    *slot = data[base + off + j * stride];
                }
                for (i, row) in m.iter().enumerate() {
                    let mut acc = 0;
                    for (&c, &v) in row.iter().zip(&fiber) {
                        acc = f.add(acc, f.mul(c, v));
                    }
                    data[base + off + i * stride] = acc;
                }
            }
        }
        stride = block;
    }
}

/// The unique normal-form polynomial agreeing with `table` on all of `F_q^n`.
///
/// This is the pointwise indicator basis `∏_i (1 - (x_i - a_i)^(q-1))`
/// expanded one variable at a time, `O(n·q^(n+1))` work.
pub fn interpolate(field: PrimeField, n_vars: usize, table: &[u32], limits: Limits) -> Result<MultiPoly> {
    let size = limits.check_space(field.q() as u64, n_vars)? as usize;
    if table.len() != size {
        return Err(Error::usage(format!(
            "value table has {} entries, expected {}^{} = {size}",
            table.len(),
            field.q(),
            n_vars
        )));
    }
    if let Some(bad) = table.iter().find(|&&v| v >= field.q()) {
        return Err(Error::usage(format!("table value {bad} is not in F_{}", field.q())));
    }
    let mut coeffs = table.to_vec();
    transform_axes(field, n_vars, &mut coeffs, &indicator_basis(field));
    let q = field.q() as usize;
    let mut out = MultiPoly::zero(field, n_vars);
    for (idx, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mut exps = vec![0u8; n_vars];
        let mut rest = idx;
        for slot in exps.iter_mut().rev() {
            *slot = (rest % q) as u8;
            rest /= q;
        }
        out.terms.insert(Monomial(exps), c);
    }
    Ok(out)
}

/// Values of `p` at every point of `F_q^n`, in table order.
pub fn value_table(p: &MultiPoly, limits: Limits) -> Result<Vec<u32>> {
    let f = p.field();
    let n = p.n_vars();
    let size = limits.check_space(f.q() as u64, n)? as usize;
    let q = f.q() as usize;
    let mut data = vec![0u32; size];
    for (m, c) in p.terms() {
        let idx = m
            .exponents()
            .iter()
            .fold(0usize, |acc, &e| acc * q + e as usize);
        data[idx] = c.value();
    }
    transform_axes(f, n, &mut data, &power_matrix(f));
    Ok(data)
}
