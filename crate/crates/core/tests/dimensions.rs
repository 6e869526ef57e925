//! Unit-tagged arithmetic: these only compile when the dimensions line up.

use std::ops::{Div, Mul};

use thermoecon_core::thermo::{consumption_rate, material_flows};
use thermoecon_core::units::{lambda_w_per_thousand, power_tw, wealth_trillion};
use thermoecon_core::{ModelConstants, PhysicalState};

#[derive(Debug, Clone, Copy)]
struct EnergyPerYear(f64);
#[derive(Debug, Clone, Copy)]
struct Years(f64);
#[derive(Debug, Clone, Copy)]
struct Energy(f64);
#[derive(Debug, Clone, Copy)]
struct EnergyPerMatter(f64);
#[derive(Debug, Clone, Copy)]
struct Matter(f64);
#[derive(Debug, Clone, Copy)]
struct MatterPerYear(f64);

impl Mul<Years> for EnergyPerYear {
    type Output = Energy;
    fn mul(self, t: Years) -> Energy {
        Energy(self.0 * t.0)
    }
}

impl Div<EnergyPerMatter> for Energy {
    type Output = Matter;
    fn div(self, e: EnergyPerMatter) -> Matter {
        Matter(self.0 / e.0)
    }
}

impl Div<EnergyPerMatter> for EnergyPerYear {
    type Output = MatterPerYear;
    fn div(self, e: EnergyPerMatter) -> MatterPerYear {
        MatterPerYear(self.0 / e.0)
    }
}

impl Mul<Years> for MatterPerYear {
    type Output = Matter;
    fn mul(self, t: Years) -> Matter {
        Matter(self.0 * t.0)
    }
}

#[test]
fn consumption_over_specific_enthalpy_is_matter() {
    let state = PhysicalState::new(8.0, 3.0, 2260.0);
    let c = ModelConstants::default();
    let a = EnergyPerYear(consumption_rate(&state, c.alpha, c.k));
    let e = EnergyPerMatter(state.e_s_tot);
    let matter: Matter = a * Years(1.0) / e;
    let flux: MatterPerYear = a / e;
    let flows = material_flows(&state, a.0, 0.0).unwrap();
    assert!((matter.0 - flows.j_a).abs() < 1e-12);
    assert!(((flux * Years(1.0)).0 - matter.0).abs() < 1e-12);
}

#[test]
fn boiling_pot_flux() {
    let state = PhysicalState::new(1.0, 1.0, 2260.0);
    let flows = material_flows(&state, 2260.0, 0.0).unwrap();
    assert_eq!(flows.j_a, 1.0);
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct TeraWatts(f64);
#[derive(Debug, Clone, Copy, PartialEq)]
struct TrillionUsd(f64);
#[derive(Debug, Clone, Copy, PartialEq)]
struct WattsPerThousandUsd(f64);

fn power(l: WattsPerThousandUsd, c: TrillionUsd) -> TeraWatts {
    TeraWatts(power_tw(l.0, c.0))
}

fn wealth(l: WattsPerThousandUsd, a: TeraWatts) -> TrillionUsd {
    TrillionUsd(wealth_trillion(l.0, a.0))
}

#[test]
fn energy_wealth_conversions_invert() {
    let l = WattsPerThousandUsd(7.1);
    let c = TrillionUsd(2290.0);
    let a = power(l, c);
    // 7.1 W per $1000 × 2290e12 $ = 16.259 TW
    assert!((a.0 - 16.259).abs() < 1e-9);
    assert!((wealth(l, a).0 - c.0).abs() < 1e-9);
    let back = lambda_w_per_thousand(a.0, c.0 * 1e3);
    assert!((back - l.0).abs() < 1e-12);
}
