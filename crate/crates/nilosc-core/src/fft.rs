//! Iterative radix-2 FFT used by the grid sweep in [`crate::oscillation`].
//!
//! Only the positive-sign transform X_k = Σ_n x_n e^{+2πikn/M} is needed
//! (evaluating a Weyl average at all linear coefficients k/M at once).
//! Twiddles are resynchronized from libm sin/cos every 32 butterflies so the
//! recurrence drift stays at a few ulps independent of the transform size.

use num_complex::Complex64;

pub fn next_pow2(n: usize) -> usize {
    n.next_power_of_two()
}

/// In-place transform data[k] = Σ_n data[n]·e^{+2πikn/len}. `len` must be a
/// power of two.
pub fn fft_pos(data: &mut [Complex64]) {
    let n = data.len();
    assert!(n.is_power_of_two(), "fft length must be a power of two");
    if n <= 1 {
        return;
    }

    // bit-reversal permutation
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }

    let mut len = 2usize;
    while len <= n {
        let ang = 2.0 * core::f64::consts::PI / len as f64;
        let wlen = Complex64::new(libm::cos(ang), libm::sin(ang));
        let half = len / 2;
        for start in (0..n).step_by(len) {
            let mut w = Complex64::new(1.0, 0.0);
            for k in 0..half {
                if k % 32 == 0 {
                    let a = ang * k as f64;
                    w = Complex64::new(libm::cos(a), libm::sin(a));
                }
                let u = data[start + k];
                let v = data[start + k + half] * w;
                data[start + k] = u + v;
                data[start + k + half] = u - v;
                w *= wlen;
            }
        }
        len <<= 1;
    }
}
