//! Unit conversions. Internally all angular frequencies are rad/µs and all
//! times are µs.

use std::f64::consts::TAU;

/// Elementary charge in coulomb (exact SI value).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Planck constant in J·s (exact SI value).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant in J·s.
pub const HBAR: f64 = PLANCK / TAU;

/// `f/(2π) = mhz` in MHz to rad/µs.
pub fn mhz_to_rad_per_us(mhz: f64) -> f64 {
    TAU * mhz
}

/// rad/µs to `f/(2π)` in MHz.
pub fn rad_per_us_to_mhz(w: f64) -> f64 {
    w / TAU
}

/// `E/(2π ħ) = ghz` in GHz to rad/µs.
pub fn ghz_to_rad_per_us(ghz: f64) -> f64 {
    TAU * 1e3 * ghz
}

/// rad/µs to GHz.
pub fn rad_per_us_to_ghz(w: f64) -> f64 {
    w / (TAU * 1e3)
}

/// Converts an inverse capacitance in 1/fF into the charging-energy scale
/// `(2e)^2 / (ħ C)` in rad/µs, the convention of a circuit Hamiltonian
/// written as `q^T C^{-1} q / 2` with `q` counting Cooper pairs.
pub fn inverse_femtofarad_to_rad_per_us(inv_ff: f64) -> f64 {
    let per_farad = inv_ff * 1e15;
    4.0 * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE * per_farad / HBAR * 1e-6
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        assert!((rad_per_us_to_mhz(mhz_to_rad_per_us(10.0)) - 10.0).abs() < 1e-12);
        assert!((rad_per_us_to_ghz(ghz_to_rad_per_us(19.52)) - 19.52).abs() < 1e-12);
    }

    #[test]
    fn charging_energy_of_a_typical_transmon() {
        // e^2/(2hC) for C = 93.7 fF is about 207 MHz.
        let ec = inverse_femtofarad_to_rad_per_us(1.0 / 93.7) / 8.0;
        let ec_mhz = rad_per_us_to_mhz(ec);
        assert!((ec_mhz - 206.7).abs() < 0.5, "{ec_mhz}");
    }
}
