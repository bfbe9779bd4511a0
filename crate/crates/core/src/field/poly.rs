//! Dense polynomials over `F_p`, lowest degree first.

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, a as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i64) as u32
}

pub(super) fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    trim(&mut out);
    out
}

fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out: Vec<u32> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub(super) fn divrem(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let mut b = b.to_vec();
    trim(&mut b);
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = inv_mod_p(*b.last().unwrap(), p);
    let mut q = vec![0u32; r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            let idx = i + shift;
            r[idx] = ((r[idx] as u64 + (p - c) as u64 * bi as u64) % p as u64) as u32;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// Inverse of `a` modulo `m`, or `None` when they are not coprime.
pub(super) fn inverse_mod(a: &[u32], m: &[u32], p: u32) -> Option<Vec<u32>> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    let (mut s0, mut s1) = (Vec::new(), vec![1u32]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = inv_mod_p(r0[0], p);
    let mut out = mul(&s0, &[c], p);
    let (_, red) = divrem(&out, m, p);
    out = red;
    out.resize(m.len() - 1, 0);
    Some(out)
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub(super) fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                cand.push((c % p as u64) as u32);
                c /= p as u64;
            }
            cand.push(1);
            let (_, r) = divrem(m, &cand, p);
            if r.is_empty() {
                return false;
            }
        }
    }
    true
}

pub(super) fn smallest_irreducible(p: u32, f: u32) -> Vec<u32> {
    let count = (p as u64).pow(f);
    for code in 0..count {
        let mut cand = Vec::with_capacity(f as usize + 1);
        let mut c = code;
        for _ in 0..f {
            cand.push((c % p as u64) as u32);
            c /= p as u64;
        }
        cand.push(1);
        if is_irreducible(&cand, p) {
            return cand;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_by_root_evaluation_degree_two() {
        // degree <= 3: irreducible iff no root in F_p
        for p in [2u32, 3, 5] {
            for c0 in 0..p {
                for c1 in 0..p {
                    let m = [c0, c1, 1];
                    let has_root = (0..p).any(|x| (c0 + c1 * x + x * x) % p == 0);
                    assert_eq!(is_irreducible(&m, p), !has_root, "{m:?} over F_{p}");
                }
            }
        }
    }

    #[test]
    fn divrem_reconstructs() {
        let a = [3, 0, 2, 4, 1];
        let b = [1, 2, 3];
        let (q, r) = divrem(&a, &b, 5);
        let mut back = mul(&q, &b, 5);
        back.resize(5, 0);
        for (i, &x) in r.iter().enumerate() {
            back[i] = (back[i] + x) % 5;
        }
        assert_eq!(back, a);
    }
}
