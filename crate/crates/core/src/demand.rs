//! Residential cooling electricity: annual totals from degree days, income and
//! household counts, and their hourly disaggregation.
//!
//! Annual demand of a population is the product
//! `households * availability * saturation * per-household kWh * efficiency`.
//! Hours receive a share proportional to `CDH(t) / COP(t)`, renormalized so
//! the hourly series sums exactly to the annual figure.
//!
//! Notes on the model:
//!
//! * The hourly COP is the Carnot cooling COP with the evaporator at
//!   `T_base - dT2` and the condenser at `max(T, T_base) + dT1`, scaled by
//!   `eta_carnot`. It stays positive and finite at any temperature.
//! * With the default logistic coefficients, availability reaches 0.90 near
//!   20 885 $ per capita and 0.9999 near 43 000 $.

use thiserror::Error;

use crate::geogrid::{DAYS_PER_YEAR, HOURS_PER_YEAR};
use crate::numeric::{self, CompensatedSum};

#[derive(Debug, Error, PartialEq)]
pub enum DemandError {
    #[error("{series} has {len} values, expected {HOURS_PER_YEAR}")]
    Length { series: &'static str, len: usize },
    #[error("{name} must be non-negative, got {value}")]
    Negative { name: &'static str, value: f64 },
    #[error("household size must be positive, got {0}")]
    HouseholdSize(f64),
    #[error("invalid parameter {name} = {value}: {rule}")]
    Param {
        name: &'static str,
        value: f64,
        rule: &'static str,
    },
    #[error("annual demand {annual_kwh} kWh but no cooling degree hours to place it in")]
    DegenerateClimate { annual_kwh: f64 },
}

/// Fitted constants of the demand model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemandParams {
    /// Base temperature for degree days/hours, kelvin.
    pub t_base: f64,
    pub smax_a: f64,
    /// Per CDD.
    pub smax_b: f64,
    /// Per USD of GDP per capita.
    pub avail_slope: f64,
    pub avail_intercept: f64,
    /// kWh per CDD per ln(USD).
    pub eh_log_coeff: f64,
    /// kWh per CDD.
    pub eh_const: f64,
}

impl Default for DemandParams {
    fn default() -> Self {
        Self {
            t_base: 291.15,
            smax_a: 0.949,
            smax_b: 0.00187,
            avail_slope: 0.304e-3,
            avail_intercept: 4.152,
            eh_log_coeff: 0.865,
            eh_const: 5.825,
        }
    }
}

impl DemandParams {
    pub fn validate(&self) -> Result<(), DemandError> {
        if !(283.15..=298.15).contains(&self.t_base) {
            return Err(DemandError::Param {
                name: "t_base",
                value: self.t_base,
                rule: "must lie in [283.15, 298.15] K",
            });
        }
        for (name, value) in [
            ("smax_a", self.smax_a),
            ("smax_b", self.smax_b),
            ("avail_slope", self.avail_slope),
            ("avail_intercept", self.avail_intercept),
            ("eh_log_coeff", self.eh_log_coeff),
            ("eh_const", self.eh_const),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(DemandError::Param {
                    name,
                    value,
                    rule: "must be positive",
                });
            }
        }
        Ok(())
    }
}

/// Carnot cooling cycle parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CopParams {
    /// Fraction of the Carnot COP achieved, in (0, 1].
    pub eta_carnot: f64,
    /// Condenser approach above ambient, kelvin.
    pub delta_t1: f64,
    /// Evaporator approach below the cold side, kelvin.
    pub delta_t2: f64,
}

impl Default for CopParams {
    fn default() -> Self {
        Self {
            eta_carnot: 0.16,
            delta_t1: 5.0,
            delta_t2: 5.0,
        }
    }
}

impl CopParams {
    pub fn validate(&self) -> Result<(), DemandError> {
        if !(self.eta_carnot > 0.0 && self.eta_carnot <= 1.0) {
            return Err(DemandError::Param {
                name: "eta_carnot",
                value: self.eta_carnot,
                rule: "must lie in (0, 1]",
            });
        }
        for (name, value) in [("delta_t1", self.delta_t1), ("delta_t2", self.delta_t2)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(DemandError::Param {
                    name,
                    value,
                    rule: "must be non-negative",
                });
            }
        }
        if self.delta_t1 + self.delta_t2 <= 0.0 {
            return Err(DemandError::Param {
                name: "delta_t1 + delta_t2",
                value: self.delta_t1 + self.delta_t2,
                rule: "must be positive",
            });
        }
        Ok(())
    }
}

/// Socioeconomic state of a population in one year.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SocioState {
    /// PPP-2005 USD per person.
    pub gdp_per_cap: f64,
    /// Persons per household.
    pub household_size: f64,
    /// Appliance efficiency factor, 1.0 in 2000.
    pub eta_efficiency: f64,
}

/// Annual and hourly cooling electricity of one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct DemandSeries {
    pub annual_kwh: f64,
    pub hourly_kwh: Vec<f64>,
    pub ac_households: f64,
    pub cdd_annual: f64,
    pub cop_hourly: Vec<f64>,
}

impl DemandSeries {
    /// Run the full demand chain for one population and temperature series.
    pub fn compute(
        temperature: &[f64],
        population: f64,
        socio: &SocioState,
        params: &DemandParams,
        cop: &CopParams,
    ) -> Result<Self, DemandError> {
        let cdd = cdd_annual(temperature, params)?;
        let cdh = cdh_hourly(temperature, params)?;
        let cop_series = cop_hourly(temperature, cop, params)?;
        let pop = annual_population_kwh(population, socio, cdd, params)?;
        let hourly = disaggregate_hourly(pop.annual_kwh, &cdh, &cop_series)?;
        Ok(Self {
            annual_kwh: pop.annual_kwh,
            hourly_kwh: hourly,
            ac_households: pop.ac_households,
            cdd_annual: cdd,
            cop_hourly: cop_series,
        })
    }
}

fn check_len(series: &'static str, values: &[f64]) -> Result<(), DemandError> {
    if values.len() == HOURS_PER_YEAR {
        Ok(())
    } else {
        Err(DemandError::Length {
            series,
            len: values.len(),
        })
    }
}

/// Annual cooling degree days (kelvin-days) from daily mean temperatures.
pub fn cdd_annual(temperature: &[f64], params: &DemandParams) -> Result<f64, DemandError> {
    check_len("temperature", temperature)?;
    let mut total = CompensatedSum::new();
    for day in temperature.chunks_exact(24) {
        let mean = numeric::sum(day) / 24.0;
        total.add((mean - params.t_base).max(0.0));
    }
    debug_assert_eq!(temperature.len() / 24, DAYS_PER_YEAR);
    Ok(total.value())
}

/// Hourly cooling degree hours, `max(T - T_base, 0)`.
pub fn cdh_hourly(temperature: &[f64], params: &DemandParams) -> Result<Vec<f64>, DemandError> {
    check_len("temperature", temperature)?;
    Ok(temperature
        .iter()
        .map(|t| (t - params.t_base).max(0.0))
        .collect())
}

/// Share of households that would own air conditioning if they could afford it.
pub fn climate_max_saturation(cdd_annual: f64, params: &DemandParams) -> Result<f64, DemandError> {
    if !(cdd_annual >= 0.0) {
        return Err(DemandError::Negative {
            name: "cdd_annual",
            value: cdd_annual,
        });
    }
    Ok((1.0 - params.smax_a * (-params.smax_b * cdd_annual).exp()).clamp(0.0, 1.0))
}

/// Share of households able to afford air conditioning (logistic in income).
pub fn availability(gdp_per_cap: f64, params: &DemandParams) -> Result<f64, DemandError> {
    if !(gdp_per_cap >= 0.0) {
        return Err(DemandError::Negative {
            name: "gdp_per_cap",
            value: gdp_per_cap,
        });
    }
    Ok(1.0 / (1.0 + (-params.avail_slope * gdp_per_cap + params.avail_intercept).exp()))
}

/// Cooling electricity of one air-conditioned household, kWh/year.
///
/// Incomes below 1 USD are treated as 1 before the logarithm and a negative
/// income bracket clamps to zero.
pub fn household_annual_kwh(cdd_annual: f64, gdp_per_cap: f64, params: &DemandParams) -> f64 {
    let bracket = params.eh_log_coeff * gdp_per_cap.max(1.0).ln() - params.eh_const;
    cdd_annual.max(0.0) * bracket.max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationDemand {
    pub annual_kwh: f64,
    pub ac_households: f64,
}

/// Annual cooling electricity of a population and its count of
/// air-conditioned households.
pub fn annual_population_kwh(
    population: f64,
    socio: &SocioState,
    cdd_annual: f64,
    params: &DemandParams,
) -> Result<PopulationDemand, DemandError> {
    if !(socio.household_size > 0.0) {
        return Err(DemandError::HouseholdSize(socio.household_size));
    }
    if !(population >= 0.0) {
        return Err(DemandError::Negative {
            name: "population",
            value: population,
        });
    }
    let households = population / socio.household_size;
    let owners = households
        * availability(socio.gdp_per_cap, params)?
        * climate_max_saturation(cdd_annual, params)?;
    Ok(PopulationDemand {
        annual_kwh: owners
            * household_annual_kwh(cdd_annual, socio.gdp_per_cap, params)
            * socio.eta_efficiency,
        ac_households: owners,
    })
}

/// Hourly air-conditioner COP.
///
/// `COP = eta * T_c / (T_h - T_c)` with `T_c = T_base - dT2` and
/// `T_h = max(T, T_base) + dT1`; always positive and finite.
pub fn cop_hourly(
    temperature: &[f64],
    cop: &CopParams,
    params: &DemandParams,
) -> Result<Vec<f64>, DemandError> {
    check_len("temperature", temperature)?;
    cop.validate()?;
    Ok(temperature
        .iter()
        .map(|&t| cop_at(t, cop, params))
        .collect())
}

/// COP at one ambient temperature; parameters are assumed valid.
pub fn cop_at(temperature: f64, cop: &CopParams, params: &DemandParams) -> f64 {
    let cold = params.t_base - cop.delta_t2;
    let hot = temperature.max(params.t_base) + cop.delta_t1;
    cop.eta_carnot * cold / (hot - cold)
}

/// Spread `annual_kwh` over the hours in proportion to `CDH(t) / COP(t)`.
pub fn disaggregate_hourly(
    annual_kwh: f64,
    cdh: &[f64],
    cop: &[f64],
) -> Result<Vec<f64>, DemandError> {
    check_len("cdh", cdh)?;
    check_len("cop", cop)?;
    if !(annual_kwh >= 0.0) {
        return Err(DemandError::Negative {
            name: "annual_kwh",
            value: annual_kwh,
        });
    }
    if annual_kwh == 0.0 {
        return Ok(vec![0.0; HOURS_PER_YEAR]);
    }
    let weights: Vec<f64> = cdh.iter().zip(cop).map(|(d, c)| d / c).collect();
    let total = numeric::sum(&weights);
    if !(total > 0.0) {
        return Err(DemandError::DegenerateClimate { annual_kwh });
    }
    Ok(weights.iter().map(|w| annual_kwh * (w / total)).collect())
}
