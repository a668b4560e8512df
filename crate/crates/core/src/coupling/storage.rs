//! Rule-based latent (ice) storage per air-conditioned household.
//!
//! Each hour, in order: standby losses through the tank walls, then either
//! freezing with PV surplus or melting to cover the cooling deficit.
//! Households of a cell are aggregated into one tank of
//! `n_households * capacity`; demand and PV scale linearly so this matches a
//! per-household simulation.

use super::CouplingError;
use crate::demand::CopParams;
use crate::numeric::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StorageSpec {
    pub volume_m3: f64,
    pub latent_kj_per_kg: f64,
    pub density_kg_per_m3: f64,
    /// Wall heat-loss coefficient, W/m²/K.
    pub u_value_w_m2k: f64,
    pub area_m2: f64,
    /// Constant tank temperature, kelvin.
    pub t_storage: f64,
    /// Cooling delivered per unit of stored cold.
    pub discharge_cop: f64,
}

impl Default for StorageSpec {
    fn default() -> Self {
        Self {
            volume_m3: 1.0,
            latent_kj_per_kg: 334.0,
            density_kg_per_m3: 1000.0,
            u_value_w_m2k: 0.3,
            area_m2: 6.0,
            t_storage: 273.15,
            discharge_cop: 1.0,
        }
    }
}

impl StorageSpec {
    pub fn validate(&self) -> Result<(), CouplingError> {
        for (name, value) in [
            ("volume_m3", self.volume_m3),
            ("latent_kj_per_kg", self.latent_kj_per_kg),
            ("density_kg_per_m3", self.density_kg_per_m3),
            ("u_value_w_m2k", self.u_value_w_m2k),
            ("area_m2", self.area_m2),
            ("t_storage", self.t_storage),
            ("discharge_cop", self.discharge_cop),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(CouplingError::StorageParam {
                    name,
                    value,
                    rule: "must be positive",
                });
            }
        }
        Ok(())
    }

    /// Latent capacity of one tank, kWh thermal.
    pub fn capacity_kwh_th(&self) -> f64 {
        self.volume_m3 * self.density_kg_per_m3 * self.latent_kj_per_kg / 3600.0
    }

    /// Standby heat gain of one tank with surroundings at `t_ambient`, W.
    pub fn standby_loss_w(&self, t_ambient: f64) -> f64 {
        (self.u_value_w_m2k * self.area_m2 * (t_ambient - self.t_storage)).max(0.0)
    }
}

/// Frozen thermal energy held by a cell's aggregated tanks, kWh thermal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StorageState {
    pub soc_kwh_th: f64,
    pub soc_max_kwh_th: f64,
}

impl StorageState {
    pub fn empty(spec: &StorageSpec, n_households: f64) -> Self {
        Self {
            soc_kwh_th: 0.0,
            soc_max_kwh_th: n_households * spec.capacity_kwh_th(),
        }
    }
}

/// Energy ledger of a storage run, kWh thermal.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StorageLedger {
    pub charged: f64,
    pub discharged: f64,
    pub losses: f64,
    pub final_soc: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StorageOutcome {
    pub storage_fraction: f64,
    /// Cooling electricity served by PV directly or through the tank, kWh.
    pub served_kwh: f64,
    /// Electricity demand left unserved each hour, kWh.
    pub unmet_kwh: Vec<f64>,
    /// State of charge at the end of each hour, kWh thermal.
    pub soc_kwh_th: Vec<f64>,
    pub ledger: StorageLedger,
}

/// COP of freezing the tank.
///
/// Carnot cooling form with the evaporator at `T_storage - dT2` and the
/// condenser at `max(T, T_storage) + dT1`.
pub fn cop_storage_hourly(temperature: &[f64], cop: &CopParams, spec: &StorageSpec) -> Vec<f64> {
    let cold = spec.t_storage - cop.delta_t2;
    temperature
        .iter()
        .map(|&t| {
            let hot = t.max(spec.t_storage) + cop.delta_t1;
            cop.eta_carnot * cold / (hot - cold)
        })
        .collect()
}

/// Dispatch the tanks of `n_households` over the year.
///
/// `demand` and `pv` are hourly electricity in kWh; `cop` converts the
/// building's cooling electricity to heat removed, `cop_storage` converts
/// PV surplus into stored cold. Tank surroundings sit at `t_base`.
#[allow(clippy::too_many_arguments)]
pub fn simulate_storage(
    demand: &[f64],
    pv: &[f64],
    cop: &[f64],
    cop_storage: &[f64],
    spec: &StorageSpec,
    n_households: f64,
    t_base: f64,
) -> Result<StorageOutcome, CouplingError> {
    let n = demand.len();
    for other in [pv.len(), cop.len(), cop_storage.len()] {
        if other != n {
            return Err(CouplingError::LengthMismatch(n, other));
        }
    }
    spec.validate()?;
    if !(n_households >= 0.0) {
        return Err(CouplingError::StorageParam {
            name: "n_households",
            value: n_households,
            rule: "must be non-negative",
        });
    }

    let mut state = StorageState::empty(spec, n_households);
    let loss_per_hour = spec.standby_loss_w(t_base) * n_households * 1e-3;

    let mut charged = CompensatedSum::new();
    let mut discharged = CompensatedSum::new();
    let mut losses = CompensatedSum::new();
    let mut served = CompensatedSum::new();
    let mut total = CompensatedSum::new();
    let mut unmet = Vec::with_capacity(n);
    let mut soc_trace = Vec::with_capacity(n);

    for t in 0..n {
        let loss = loss_per_hour.min(state.soc_kwh_th);
        state.soc_kwh_th -= loss;
        losses.add(loss);

        let (d, p) = (demand[t], pv[t]);
        total.add(d);
        let served_t = if p >= d {
            let charge = ((p - d) * cop_storage[t]).min(state.soc_max_kwh_th - state.soc_kwh_th);
            let charge = charge.max(0.0);
            state.soc_kwh_th += charge;
            charged.add(charge);
            d
        } else {
            let deficit_th = (d - p) * cop[t];
            let drawn = (deficit_th / spec.discharge_cop).min(state.soc_kwh_th);
            state.soc_kwh_th -= drawn;
            discharged.add(drawn);
            let delivered = drawn * spec.discharge_cop;
            p + delivered / cop[t]
        };
        served.add(served_t);
        unmet.push(d - served_t);
        soc_trace.push(state.soc_kwh_th);
    }

    let total = total.value();
    let served = served.value();
    Ok(StorageOutcome {
        storage_fraction: if total == 0.0 { 1.0 } else { served / total },
        served_kwh: served,
        unmet_kwh: unmet,
        soc_kwh_th: soc_trace,
        ledger: StorageLedger {
            charged: charged.value(),
            discharged: discharged.value(),
            losses: losses.value(),
            final_soc: state.soc_kwh_th,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::direct_match;

    fn lossless() -> StorageSpec {
        StorageSpec::default()
    }

    #[test]
    fn default_capacity() {
        let cap = StorageSpec::default().capacity_kwh_th();
        assert!((cap - 92.78).abs() < 0.01, "{cap}");
    }

    #[test]
    fn standby_loss_at_18k() {
        let spec = StorageSpec::default();
        assert_eq!(spec.standby_loss_w(291.15), 0.3 * 6.0 * (291.15 - 273.15));
        assert!((spec.standby_loss_w(291.15) - 32.4).abs() < 1e-9);
        assert_eq!(spec.standby_loss_w(270.0), 0.0);
    }

    #[test]
    fn no_households_equals_direct_match() {
        let d = [1.0, 2.0, 0.5, 3.0];
        let p = [2.0, 0.0, 1.0, 1.0];
        let c = [2.0; 4];
        let out = simulate_storage(&d, &p, &c, &c, &lossless(), 0.0, 291.15).unwrap();
        assert_eq!(out.storage_fraction, direct_match(&d, &p).unwrap());
    }

    #[test]
    fn three_hour_trace() {
        // One household scaled so capacity is 20 kWh_th; surroundings at the
        // tank temperature so there is no standby loss.
        let unit = StorageSpec::default().capacity_kwh_th();
        let d = [0.0, 0.0, 10.0];
        let p = [10.0, 0.0, 0.0];
        let c = [2.0; 3];
        let spec = StorageSpec::default();
        let out = simulate_storage(&d, &p, &c, &c, &spec, 20.0 / unit, spec.t_storage).unwrap();
        assert!((out.soc_kwh_th[0] - 20.0).abs() < 1e-12);
        assert!(out.soc_kwh_th[2].abs() < 1e-12);
        assert!((out.storage_fraction - 1.0).abs() < 1e-12);
        assert_eq!(out.ledger.losses, 0.0);
    }

    #[test]
    fn losses_only_while_charged() {
        let spec = StorageSpec::default();
        let d = [0.0; 5];
        let p = [0.0; 5];
        let c = [2.0; 5];
        let out = simulate_storage(&d, &p, &c, &c, &spec, 3.0, 291.15).unwrap();
        assert_eq!(out.ledger.losses, 0.0);
    }

    #[test]
    fn storage_cop_values() {
        let cop = CopParams::default();
        let spec = StorageSpec::default();
        let c = cop_storage_hourly(&[308.15, 273.15, 200.0], &cop, &spec);
        assert!((c[0] - 0.16 * 268.15 / 45.0).abs() < 1e-12);
        assert!((c[0] - 0.953).abs() < 1e-3);
        assert!((c[1] - 0.16 * 268.15 / 10.0).abs() < 1e-12);
        assert_eq!(c[1], c[2]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let c = [1.0; 2];
        assert!(simulate_storage(&c, &c[..1], &c, &c, &lossless(), 1.0, 291.15).is_err());
        assert!(simulate_storage(&c, &c, &c, &c, &lossless(), -1.0, 291.15).is_err());
        let bad = StorageSpec {
            volume_m3: 0.0,
            ..lossless()
        };
        assert!(simulate_storage(&c, &c, &c, &c, &bad, 1.0, 291.15).is_err());
    }
}
