//! Riemann–Roch numerics on del Pezzo surfaces of degree 1, 2, 3.

use super::DescentError;

fn check_ds(d_s: u8) -> Result<(), DescentError> {
    if (1..=3).contains(&d_s) {
        Ok(())
    } else {
        Err(DescentError::UnsupportedDegree(d_s))
    }
}

/// `h^0(S, O_S(l)) = 1 + d_S (l^2 + l) / 2`.
pub fn h0(d_s: u8, l: u64) -> Result<u64, DescentError> {
    check_ds(d_s)?;
    Ok(1 + d_s as u64 * (l * l + l) / 2)
}

/// Genus of a smooth member of `|O_S(l)|`, `1 + d_S l (l - 1) / 2`.
pub fn genus(d_s: u8, l: u64) -> Result<u64, DescentError> {
    check_ds(d_s)?;
    if l == 0 {
        return Err(DescentError::OutOfRange("genus needs l >= 1".into()));
    }
    Ok(1 + d_s as u64 * l * (l - 1) / 2)
}

/// Smallest `m` for which `O_S(m)` is very ample.
pub fn very_ample_from(d_s: u8) -> u64 {
    match d_s {
        3 => 1,
        2 => 2,
        _ => 3,
    }
}

/// Smallest `m` for which `O_S(m)` is generated by its sections.
pub fn globally_generated_from(d_s: u8) -> u64 {
    match d_s {
        1 => 2,
        _ => 1,
    }
}

/// Smallest `l` for which the vector bundle subtraction is available.
pub fn vb_min_l(d_s: u8) -> u64 {
    match d_s {
        3 => 0,
        _ => 1,
    }
}
