//! Unit conventions.
//!
//! Rates are fractions per year, wealth is in trillions of 2005 USD (historical
//! GDP input in billions), power in terawatts and λ in watts per thousand 2005
//! USD. With those units `a[TW] = λ · C[T$] / 1000`.

use core::f64::consts::PI;

/// Energy/wealth ratio reported for recent decades, W per $1000 (2005 USD).
pub const DEFAULT_LAMBDA: f64 = 7.1;

/// Interface shape coefficient for a system spherical with respect to its reserves.
pub fn spherical_shape_coefficient() -> f64 {
    crate::math::cbrt(48.0 * PI * PI)
}

/// Primary power sustained by `wealth_trillion` at ratio `lambda`.
pub fn power_tw(lambda: f64, wealth_trillion: f64) -> f64 {
    lambda * wealth_trillion * 1e-3
}

/// Wealth (trillion 2005 USD) implied by consumption `power_tw`.
pub fn wealth_trillion(lambda: f64, power_tw: f64) -> f64 {
    power_tw * 1e3 / lambda
}

/// λ in W per $1000 from power in TW and wealth in billions of 2005 USD.
pub fn lambda_w_per_thousand(power_tw: f64, wealth_billion: f64) -> f64 {
    power_tw * 1e6 / wealth_billion
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spherical_k_matches_closed_value() {
        assert!((spherical_shape_coefficient() - 7.795_554).abs() < 1e-5);
    }

    #[test]
    fn power_and_wealth_invert() {
        let c = 2290.0;
        let a = power_tw(7.03, c);
        assert!((wealth_trillion(7.03, a) - c).abs() < 1e-9);
        assert!((lambda_w_per_thousand(16.1, 2_290_000.0) - 7.0306).abs() < 1e-4);
    }
}
