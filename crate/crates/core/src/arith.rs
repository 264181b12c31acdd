//! Checked integer helpers. Every arithmetic step in the crate goes through
//! these so that overflow becomes an [`Error::Overflow`] instead of a wrap.

use crate::error::{Error, Result};

#[inline]
pub(crate) fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("addition"))
}

#[inline]
pub(crate) fn sub(a: i64, b: i64) -> Result<i64> {
    a.checked_sub(b).ok_or(Error::Overflow("subtraction"))
}

#[inline]
pub(crate) fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow("multiplication"))
}

#[inline]
pub(crate) fn neg(a: i64) -> Result<i64> {
    a.checked_neg().ok_or(Error::Overflow("negation"))
}

/// `p*q + r*s`
#[inline]
pub(crate) fn dot2(p: i64, q: i64, r: i64, s: i64) -> Result<i64> {
    add(mul(p, q)?, mul(r, s)?)
}

/// `p*q - r*s`
#[inline]
pub(crate) fn det2(p: i64, q: i64, r: i64, s: i64) -> Result<i64> {
    sub(mul(p, q)?, mul(r, s)?)
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended Euclid on signed inputs: returns `(g, e1, e2)` with
/// `e1*a + e2*b = g >= 0`. Panics never; overflow is reported.
pub(crate) fn ext_gcd(a: i64, b: i64) -> Result<(i64, i64, i64)> {
    let (mut old_r, mut r) = (a as i128, b as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    let cast = |v: i128| i64::try_from(v).map_err(|_| Error::Overflow("extended gcd"));
    Ok((cast(old_r)?, cast(old_s)?, cast(old_t)?))
}

/// Bezout coefficients for a coprime pair `(k, l)`: `e1*k + e2*l = 1`.
///
/// Among all solutions `(e1 + n*l, e2 - n*k)` the one with the smallest
/// `|e1|` is chosen, ties going to `e1 >= 0`. When `l == 0` the first
/// coefficient is forced and `e2 = 0`.
pub(crate) fn bezout_canonical(k: i64, l: i64) -> Result<(i64, i64)> {
    let (g, e1, e2) = ext_gcd(k, l)?;
    if g != 1 {
        return Err(Error::Precondition(format!(
            "bezout_canonical needs a coprime pair, got ({k}, {l})"
        )));
    }
    if l == 0 {
        // k = ±1
        return Ok((k, 0));
    }
    let (e1, e2, k, l) = (e1 as i128, e2 as i128, k as i128, l as i128);
    let al = l.abs();
    // representative of e1 mod |l| in (-|l|/2, |l|/2]
    let mut r = e1.rem_euclid(al);
    if 2 * r > al {
        r -= al;
    }
    let step = (r - e1) / l;
    let new_e1 = r;
    let new_e2 = e2 - step * k;
    let cast = |v: i128| i64::try_from(v).map_err(|_| Error::Overflow("bezout"));
    Ok((cast(new_e1)?, cast(new_e2)?))
}

/// Solve `sum coeffs[i]*z[i] = rhs` over the integers. Returns one solution
/// or `None` if none exists.
pub(crate) fn solve_linear_diophantine(coeffs: &[i64], rhs: i64) -> Result<Option<Vec<i64>>> {
    // Fold the gcd left to right, keeping the coefficients that express it.
    let mut g = 0i64;
    let mut combo: Vec<i64> = vec![0; coeffs.len()];
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let (ng, u, v) = ext_gcd(g, c)?;
        for w in combo.iter_mut().take(i) {
            *w = mul(*w, u)?;
        }
        combo[i] = v;
        g = ng;
    }
    if g == 0 {
        return Ok(if rhs == 0 { Some(vec![0; coeffs.len()]) } else { None });
    }
    if rhs % g != 0 {
        return Ok(None);
    }
    let scale = rhs / g;
    combo
        .into_iter()
        .map(|w| mul(w, scale))
        .collect::<Result<Vec<_>>>()
        .map(Some)
}
