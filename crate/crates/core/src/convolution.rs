//! Fast subset convolution over nonnegative integers: ranked zeta transform,
//! rank-wise pointwise products, Möbius inversion.

use std::fmt;

/// A function from subsets of an `n`-element ground set to naturals, stored
/// densely: `values[mask]` for every `mask` in `[0, 2^n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFunction {
    ground_size: usize,
    values: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConvolveError {
    GroundSizeMismatch { left: usize, right: usize },
    GroundSizeTooLarge(usize),
    MemoryCap { required: usize, cap: usize },
    Overflow,
}

impl fmt::Display for ConvolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConvolveError::GroundSizeMismatch { left, right } => {
                write!(f, "ground size mismatch: {left} vs {right}")
            }
            ConvolveError::GroundSizeTooLarge(n) => {
                write!(f, "ground size {n} exceeds the supported cap of {MAX_GROUND_SIZE}")
            }
            ConvolveError::MemoryCap { required, cap } => {
                write!(f, "ranked transform needs {required} bytes, cap is {cap}")
            }
            ConvolveError::Overflow => write!(f, "convolution value exceeds u64 range"),
        }
    }
}

impl std::error::Error for ConvolveError {}

/// Practical cap on the ground size.
pub const MAX_GROUND_SIZE: usize = 25;

/// Memory cap for the ranked intermediate tables; construction fails
/// predictably instead of thrashing.
pub const MEMORY_CAP_BYTES: usize = 2 << 30;

impl SetFunction {
    pub fn new(ground_size: usize, values: Vec<u64>) -> Self {
        assert_eq!(
            values.len(),
            1usize << ground_size,
            "values must cover all 2^n subsets"
        );
        SetFunction {
            ground_size,
            values,
        }
    }

    pub fn zero(ground_size: usize) -> Self {
        SetFunction::new(ground_size, vec![0; 1 << ground_size])
    }

    /// Indicator of the empty set: the convolution identity.
    pub fn empty_set_indicator(ground_size: usize) -> Self {
        let mut f = SetFunction::zero(ground_size);
        f.values[0] = 1;
        f
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn get(&self, mask: usize) -> u64 {
        self.values[mask]
    }

    pub fn set(&mut self, mask: usize, value: u64) {
        self.values[mask] = value;
    }
}

/// `(f * g)(S) = sum over T subset of S of f(T) * g(S \ T)`, computed with the
/// ranked transform in `O(2^n n^2)` arithmetic operations.
///
/// Inputs whose worst-case intermediate (`C(2n, n) * max(f) * max(g)`) fits in
/// `u64` run entirely in 64-bit arithmetic; otherwise accumulation widens to
/// 128 bits and outputs that do not fit back into `u64` are an `Overflow`
/// error.
pub fn subset_convolve(f: &SetFunction, g: &SetFunction) -> Result<SetFunction, ConvolveError> {
    check_grounds(f, g)?;
    let n = f.ground_size;
    let slots = (n + 1) << n;
    let required = slots
        .checked_mul(2 * std::mem::size_of::<u64>())
        .ok_or(ConvolveError::GroundSizeTooLarge(n))?;
    if required > MEMORY_CAP_BYTES {
        return Err(ConvolveError::MemoryCap {
            required,
            cap: MEMORY_CAP_BYTES,
        });
    }

    let max_f = f.values.iter().copied().max().unwrap_or(0) as u128;
    let max_g = g.values.iter().copied().max().unwrap_or(0) as u128;
    // Worst-case ranked intermediate is C(2n, n) * max(f) * max(g).
    let bound = central_binomial(n)
        .checked_mul(max_f)
        .and_then(|b| b.checked_mul(max_g))
        .ok_or(ConvolveError::Overflow)?;
    if bound <= u64::MAX as u128 {
        Ok(convolve_u64(f, g))
    } else {
        convolve_u128(f, g)
    }
}

/// Reference implementation by explicit subset enumeration in `O(3^n)`.
pub fn direct_convolve(f: &SetFunction, g: &SetFunction) -> Result<SetFunction, ConvolveError> {
    check_grounds(f, g)?;
    let n = f.ground_size;
    assert!(n <= 16, "direct convolution is limited to n <= 16");
    let full = 1usize << n;
    let mut out = vec![0u64; full];
    for s in 0..full {
        let mut acc: u128 = (f.values[0] as u128) * (g.values[s] as u128);
        // Iterate proper nonempty submasks of s.
        let mut t = s;
        while t > 0 {
            acc += (f.values[t] as u128) * (g.values[s ^ t] as u128);
            t = (t - 1) & s;
        }
        out[s] = u64::try_from(acc).map_err(|_| ConvolveError::Overflow)?;
    }
    Ok(SetFunction::new(n, out))
}

fn check_grounds(f: &SetFunction, g: &SetFunction) -> Result<(), ConvolveError> {
    if f.ground_size != g.ground_size {
        return Err(ConvolveError::GroundSizeMismatch {
            left: f.ground_size,
            right: g.ground_size,
        });
    }
    if f.ground_size > MAX_GROUND_SIZE {
        return Err(ConvolveError::GroundSizeTooLarge(f.ground_size));
    }
    Ok(())
}

fn central_binomial(n: usize) -> u128 {
    let mut c: u128 = 1;
    for i in 0..n {
        // C(2n, n) built incrementally: multiply by (n+1+i), divide by (1+i).
        c = c * (n as u128 + 1 + i as u128) / (1 + i as u128);
    }
    c
}

/// Ranked zeta transform: `out[r * 2^n + s] = sum over T subset of s with
/// |T| = r of v[T]`.
fn ranked_zeta(n: usize, v: &[u64]) -> Vec<u64> {
    let full = 1usize << n;
    let mut table = vec![0u64; (n + 1) * full];
    for (s, &x) in v.iter().enumerate() {
        table[(s.count_ones() as usize) * full + s] = x;
    }
    for slice in table.chunks_exact_mut(full) {
        zeta_in_place(n, slice);
    }
    table
}

fn zeta_in_place(n: usize, v: &mut [u64]) {
    for b in 0..n {
        let bit = 1usize << b;
        for s in 0..v.len() {
            if s & bit != 0 {
                v[s] = v[s].wrapping_add(v[s ^ bit]);
            }
        }
    }
}

fn mobius_in_place(n: usize, v: &mut [u64]) {
    for b in 0..n {
        let bit = 1usize << b;
        for s in 0..v.len() {
            if s & bit != 0 {
                v[s] = v[s].wrapping_sub(v[s ^ bit]);
            }
        }
    }
}

fn convolve_u64(f: &SetFunction, g: &SetFunction) -> SetFunction {
    let n = f.ground_size;
    let full = 1usize << n;
    let fhat = ranked_zeta(n, &f.values);
    let ghat = ranked_zeta(n, &g.values);
    let mut out = vec![0u64; full];
    let mut h = vec![0u64; full];
    for r in 0..=n {
        h.iter_mut().for_each(|x| *x = 0);
        for i in 0..=r {
            let fs = &fhat[i * full..(i + 1) * full];
            let gs = &ghat[(r - i) * full..(r - i + 1) * full];
            for s in 0..full {
                h[s] = h[s].wrapping_add(fs[s].wrapping_mul(gs[s]));
            }
        }
        mobius_in_place(n, &mut h);
        for s in 0..full {
            if s.count_ones() as usize == r {
                out[s] = h[s];
            }
        }
    }
    SetFunction::new(n, out)
}

fn convolve_u128(f: &SetFunction, g: &SetFunction) -> Result<SetFunction, ConvolveError> {
    let n = f.ground_size;
    let full = 1usize << n;
    let widen = |v: &[u64]| -> Vec<u128> {
        let mut table = vec![0u128; (n + 1) * full];
        for (s, &x) in v.iter().enumerate() {
            table[(s.count_ones() as usize) * full + s] = x as u128;
        }
        for slice in table.chunks_exact_mut(full) {
            for b in 0..n {
                let bit = 1usize << b;
                for s in 0..full {
                    if s & bit != 0 {
                        slice[s] += slice[s ^ bit];
                    }
                }
            }
        }
        table
    };
    let fhat = widen(&f.values);
    let ghat = widen(&g.values);
    let mut out = vec![0u64; full];
    let mut h = vec![0u128; full];
    for r in 0..=n {
        h.iter_mut().for_each(|x| *x = 0);
        for i in 0..=r {
            let fs = &fhat[i * full..(i + 1) * full];
            let gs = &ghat[(r - i) * full..(r - i + 1) * full];
            for s in 0..full {
                h[s] += fs[s] * gs[s];
            }
        }
        for b in 0..n {
            let bit = 1usize << b;
            for s in 0..full {
                if s & bit != 0 {
                    h[s] -= h[s ^ bit];
                }
            }
        }
        for s in 0..full {
            if s.count_ones() as usize == r {
                out[s] = u64::try_from(h[s]).map_err(|_| ConvolveError::Overflow)?;
            }
        }
    }
    Ok(SetFunction::new(n, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_set_indicator_is_identity() {
        let g = SetFunction::new(3, (0..8).map(|x| x * 7 + 1).collect());
        let id = SetFunction::empty_set_indicator(3);
        assert_eq!(subset_convolve(&id, &g).unwrap(), g);
        assert_eq!(direct_convolve(&id, &g).unwrap(), g);
    }

    #[test]
    fn worked_two_element_example() {
        let f = SetFunction::new(2, vec![1, 2, 3, 4]);
        let got = subset_convolve(&f, &f).unwrap();
        assert_eq!(got.values(), &[1, 4, 6, 20]);
        assert_eq!(direct_convolve(&f, &f).unwrap().values(), &[1, 4, 6, 20]);
    }

    #[test]
    fn single_element_disjointness() {
        // Both summands need a nonempty part from one factor and the empty
        // set from the other, which is zero here.
        let f = SetFunction::new(1, vec![0, 1]);
        let got = subset_convolve(&f, &f).unwrap();
        assert_eq!(got.values(), &[0, 0]);
    }

    #[test]
    fn empty_ground_set() {
        let f = SetFunction::new(0, vec![5]);
        let g = SetFunction::new(0, vec![7]);
        assert_eq!(direct_convolve(&f, &g).unwrap().values(), &[35]);
        assert_eq!(subset_convolve(&f, &g).unwrap().values(), &[35]);
    }

    #[test]
    fn zero_function_annihilates() {
        let f = SetFunction::zero(4);
        let g = SetFunction::new(4, (0..16).collect());
        assert_eq!(subset_convolve(&f, &g).unwrap(), SetFunction::zero(4));
        assert_eq!(direct_convolve(&f, &g).unwrap(), SetFunction::zero(4));
    }

    #[test]
    fn ground_size_mismatch_is_an_error() {
        let f = SetFunction::zero(2);
        let g = SetFunction::zero(3);
        assert!(matches!(
            subset_convolve(&f, &g),
            Err(ConvolveError::GroundSizeMismatch { left: 2, right: 3 })
        ));
        assert!(matches!(
            direct_convolve(&f, &g),
            Err(ConvolveError::GroundSizeMismatch { .. })
        ));
    }

    #[test]
    fn wide_values_take_the_128_bit_path() {
        // Large enough that ranked intermediates exceed u64 while the final
        // values still fit.
        let v = 600_000_000u64;
        let f = SetFunction::new(4, vec![v; 16]);
        let fast = subset_convolve(&f, &f).unwrap();
        let slow = direct_convolve(&f, &f).unwrap();
        assert_eq!(fast, slow);
        assert_eq!(fast.get(0b1111), 16 * v * v);
    }

    #[test]
    fn output_overflow_is_reported() {
        let f = SetFunction::new(2, vec![u64::MAX, 1, 1, 1]);
        assert_eq!(subset_convolve(&f, &f), Err(ConvolveError::Overflow));
    }
}
