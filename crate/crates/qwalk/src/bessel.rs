//! Integer-order Bessel functions of the first kind.
//!
//! Computed by Miller's downward recurrence, normalized with the identity
//! J_0 + 2 Σ_{m≥1} J_{2m} = 1. Accurate to better than 1e-13 for the
//! argument range used by the kick operator (|x| ≲ 20).

/// J_0 .. J_{max_order} at argument `x ≥ 0`, as a vector of length
/// `max_order + 1`.
pub fn bessel_j_upto(max_order: usize, x: f64) -> Vec<f64> {
    assert!(x >= 0.0, "bessel_j_upto: negative argument");
    if x == 0.0 {
        let mut out = vec![0.0; max_order + 1];
        out[0] = 1.0;
        return out;
    }
    // Start the downward recurrence well above both the requested order and
    // the argument; 1.5x + 25 keeps the seed region evanescent.
    let start = max_order.max(x.ceil() as usize) + (x * 0.5) as usize + 25;
    let start = if start.is_multiple_of(2) { start } else { start + 1 };
    let mut jp1 = 0.0_f64; // J_{q+1}
    let mut j = 1e-30_f64; // J_q, starting at q = start
    let mut out = vec![0.0; max_order + 1];
    let mut norm = 0.0_f64;
    for q in (0..=start).rev() {
        if q % 2 == 0 {
            norm += if q == 0 { j } else { 2.0 * j };
        }
        if q <= max_order {
            out[q] = j;
        }
        if q > 0 {
            let jm1 = (2.0 * q as f64 / x) * j - jp1;
            jp1 = j;
            j = jm1;
            // Rescale to avoid overflow deep in the evanescent tail.
            if j.abs() > 1e100 {
                let s = 1e-100;
                j *= s;
                jp1 *= s;
                norm *= s;
                for v in &mut out {
                    *v *= s;
                }
            }
        }
    }
    for v in &mut out {
        *v /= norm;
    }
    out
}

/// J_n(x) for any integer order (J_{-n} = (-1)^n J_n) and any real argument
/// (J_n(-x) = (-1)^n J_n(x)).
pub fn bessel_j(order: i64, x: f64) -> f64 {
    let n = order.unsigned_abs() as usize;
    let v = bessel_j_upto(n, x.abs())[n];
    let mut sign = 1.0;
    if order < 0 && n % 2 == 1 {
        sign = -sign;
    }
    if x < 0.0 && n % 2 == 1 {
        sign = -sign;
    }
    sign * v
}
