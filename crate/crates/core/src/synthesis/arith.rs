use num_traits::{PrimInt, Signed};

use super::SynthesisError;

/// `s = q * x + y` with `0 <= y < q`, i.e. `x = floor(s / q)`.
pub fn euclid_div<T: PrimInt + Signed>(s: T, q: T) -> Result<(T, T), SynthesisError> {
    if q <= T::zero() {
        return Err(SynthesisError::NonpositiveDivisor);
    }
    let mut x = s / q;
    let mut y = s % q;
    if y < T::zero() {
        y = y + q;
        x = x - T::one();
    }
    Ok((x, y))
}

fn ceil_div(num: u64, den: u64) -> u64 {
    num.div_ceil(den)
}

/// Smallest shift bounds `(A, B)` with `A >= max(n0, q(a+1)/(q-1))` and
/// `B >= q(b+1)/(q-1)`.
///
/// `t` does not enter the bounds; it is accepted so the call mirrors the full
/// parameter list of the recursion.
pub fn shift_bounds(q: u64, _t: u32, a: u64, b: u64, n0: u64) -> Result<(u64, u64), SynthesisError> {
    if q < 2 {
        return Err(SynthesisError::InvalidConfig(format!("base {q} is below 2")));
    }
    let left = n0.max(ceil_div(q * (a + 1), q - 1));
    let right = ceil_div(q * (b + 1), q - 1);
    Ok((left, right))
}
