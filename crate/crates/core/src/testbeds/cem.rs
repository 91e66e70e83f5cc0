use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::TestbedError;
use crate::lp::{LinearProgram, Relation, Sense, Status};

/// Which variables the alternative objectives range over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MgaMode {
    /// Built capacity per zone and technology, plus transmission capacity.
    #[default]
    Capacity,
    /// Total generation per zone and technology over the modeled hours.
    Generation,
}

impl std::str::FromStr for MgaMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "capacity" => Ok(MgaMode::Capacity),
            "generation" => Ok(MgaMode::Generation),
            other => Err(format!(
                "unknown mode `{other}` (expected capacity or generation)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Technology {
    pub name: &'static str,
    /// Currency per MW-year.
    pub fixed_cost: f64,
    /// Currency per MWh.
    pub variable_cost: f64,
    /// tCO2 per MWh.
    pub emissions_rate: f64,
    pub dispatchable: bool,
}

pub const TECHNOLOGIES: [Technology; 4] = [
    Technology {
        name: "gas",
        fixed_cost: 90_000.0,
        variable_cost: 40.0,
        emissions_rate: 0.4,
        dispatchable: true,
    },
    Technology {
        name: "solar",
        fixed_cost: 60_000.0,
        variable_cost: 1.0,
        emissions_rate: 0.0,
        dispatchable: false,
    },
    Technology {
        name: "onshore_wind",
        fixed_cost: 110_000.0,
        variable_cost: 2.0,
        emissions_rate: 0.0,
        dispatchable: false,
    },
    Technology {
        name: "offshore_wind",
        fixed_cost: 200_000.0,
        variable_cost: 3.0,
        emissions_rate: 0.0,
        dispatchable: false,
    },
];

const LINK_COST: f64 = 30_000.0;
const LINK_LOSS: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CemSpec {
    pub zones: usize,
    pub hours: usize,
    pub seed: u64,
    /// Multiplies every demand value; 0 gives an empty system.
    pub demand_scale: f64,
    /// Per-zone, per-technology build limit in MW. Defaults to three times
    /// the system peak demand.
    pub max_build: Option<f64>,
    pub mode: MgaMode,
}

impl Default for CemSpec {
    fn default() -> Self {
        CemSpec {
            zones: 3,
            hours: 72,
            seed: 0,
            demand_scale: 1.0,
            max_build: None,
            mode: MgaMode::Capacity,
        }
    }
}

impl CemSpec {
    pub fn mga_dimension(&self) -> usize {
        match self.mode {
            MgaMode::Capacity => self.zones * TECHNOLOGIES.len() + self.zones.saturating_sub(1),
            MgaMode::Generation => self.zones * TECHNOLOGIES.len(),
        }
    }
}

/// Operating-cost comparison between an MGA solution and least-cost
/// dispatch of the same capacities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub variable_cost_mga: f64,
    pub variable_cost_redispatch: f64,
    pub emissions_mga: f64,
    pub emissions_redispatch: f64,
    /// `100 (mga - redispatch) / redispatch`; `None` when the redispatch
    /// value is zero.
    pub variable_cost_pct_error: Option<f64>,
    pub emissions_pct_error: Option<f64>,
}

/// Multi-zone greenfield capacity expansion with hourly dispatch.
///
/// Zones sit on a line, `0 - 1 - ... - (zones-1)`, one transmission link
/// between neighbours, flows in both directions with a fixed loss. Fixed
/// costs are prorated to the modeled hours.
#[derive(Debug, Clone)]
pub struct CapacityModel {
    spec: CemSpec,
    demand: Vec<Vec<f64>>,
    availability: Vec<Vec<Vec<f64>>>,
    links: Vec<(usize, usize)>,
    max_build: f64,
    lp: LinearProgram<f64>,
}

impl CapacityModel {
    pub fn new(spec: &CemSpec) -> Result<Self, TestbedError> {
        if spec.zones < 2 {
            return Err(TestbedError::BadCem(format!(
                "need at least 2 zones, got {}",
                spec.zones
            )));
        }
        if !(24..=336).contains(&spec.hours) {
            return Err(TestbedError::BadCem(format!(
                "hours must be within 24..=336, got {}",
                spec.hours
            )));
        }
        if !(spec.demand_scale.is_finite() && spec.demand_scale >= 0.0) {
            return Err(TestbedError::BadCem(
                "demand_scale must be finite and >= 0".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let zones = spec.zones;
        let hours = spec.hours;

        let mut demand = Vec::with_capacity(zones);
        for z in 0..zones {
            let base = 1000.0 / (1.0 + 0.6 * z as f64);
            let row: Vec<f64> = (0..hours)
                .map(|t| {
                    let daily = 0.8 + 0.2 * (2.0 * PI * (t as f64 - 8.0) / 24.0).sin();
                    spec.demand_scale * base * daily * rng.random_range(0.95..1.05)
                })
                .collect();
            demand.push(row);
        }

        let mut availability = Vec::with_capacity(zones);
        for z in 0..zones {
            let sunny = rng.random_range(0.8..1.0);
            let windy = rng.random_range(0.8..1.2);
            let phase = rng.random_range(0.0..2.0 * PI);
            let mut per_tech = Vec::with_capacity(TECHNOLOGIES.len());
            for tech in &TECHNOLOGIES {
                let series: Vec<f64> = (0..hours)
                    .map(|t| {
                        let h = (t % 24) as f64;
                        let slow = (2.0 * PI * t as f64 / 72.0 + phase).sin();
                        let v = match tech.name {
                            "solar" => {
                                let sun = (PI * (h - 6.0) / 12.0).sin().max(0.0);
                                sun * sunny * rng.random_range(0.6..1.0)
                            }
                            "onshore_wind" => {
                                windy * (0.35 + 0.25 * slow) + rng.random_range(-0.15..0.15)
                            }
                            "offshore_wind" => {
                                windy * (0.5 + 0.2 * slow) + rng.random_range(-0.1..0.1)
                                    - 0.05 * z as f64
                            }
                            _ => 1.0,
                        };
                        v.clamp(0.0, 1.0)
                    })
                    .collect();
                per_tech.push(series);
            }
            availability.push(per_tech);
        }

        let peak = (0..hours)
            .map(|t| demand.iter().map(|d| d[t]).sum::<f64>())
            .fold(0.0, f64::max);
        let max_build = spec.max_build.unwrap_or(3.0 * peak);
        if !(max_build.is_finite() && max_build >= 0.0) {
            return Err(TestbedError::BadCem(
                "max_build must be finite and >= 0".into(),
            ));
        }
        for t in 0..hours {
            let need: f64 = demand.iter().map(|d| d[t]).sum();
            let supply: f64 = availability
                .iter()
                .map(|a| a.iter().map(|s| s[t] * max_build).sum::<f64>())
                .sum();
            if need > supply * (1.0 - LINK_LOSS) + 1e-9 {
                return Err(TestbedError::DemandExceedsBuildable {
                    hour: t,
                    demand: need,
                    supply,
                });
            }
        }

        let links = (0..zones - 1).map(|z| (z, z + 1)).collect();
        let mut model = CapacityModel {
            spec: spec.clone(),
            demand,
            availability,
            links,
            max_build,
            lp: LinearProgram::new(0, Sense::Minimize),
        };
        model.lp = model.build_lp()?;
        Ok(model)
    }

    pub fn spec(&self) -> &CemSpec {
        &self.spec
    }

    pub fn lp(&self) -> &LinearProgram<f64> {
        &self.lp
    }

    pub fn zones(&self) -> usize {
        self.spec.zones
    }

    pub fn hours(&self) -> usize {
        self.spec.hours
    }

    pub fn links(&self) -> &[(usize, usize)] {
        &self.links
    }

    pub fn demand(&self, zone: usize, hour: usize) -> f64 {
        self.demand[zone][hour]
    }

    pub fn availability(&self, zone: usize, tech: usize, hour: usize) -> f64 {
        self.availability[zone][tech][hour]
    }

    pub fn total_demand(&self) -> f64 {
        self.demand.iter().flatten().sum()
    }

    fn techs(&self) -> usize {
        TECHNOLOGIES.len()
    }

    pub fn cap_index(&self, zone: usize, tech: usize) -> usize {
        zone * self.techs() + tech
    }

    pub fn tcap_index(&self, link: usize) -> usize {
        self.spec.zones * self.techs() + link
    }

    pub fn gen_index(&self, zone: usize, tech: usize, hour: usize) -> usize {
        self.tcap_index(self.links.len()) + (zone * self.techs() + tech) * self.spec.hours + hour
    }

    /// `dir` 0 carries power from the link's first zone to its second.
    pub fn flow_index(&self, link: usize, dir: usize, hour: usize) -> usize {
        self.gen_index(self.spec.zones, 0, 0) + (link * 2 + dir) * self.spec.hours + hour
    }

    pub fn annual_index(&self, zone: usize, tech: usize) -> usize {
        self.flow_index(self.links.len(), 0, 0) + zone * self.techs() + tech
    }

    pub fn num_vars(&self) -> usize {
        self.annual_index(self.spec.zones, 0)
    }

    pub fn var_name(&self, j: usize) -> String {
        let zt = self.spec.zones * self.techs();
        let h = self.spec.hours;
        if j < zt {
            format!(
                "cap_z{}_{}",
                j / self.techs(),
                TECHNOLOGIES[j % self.techs()].name
            )
        } else if j < self.gen_index(0, 0, 0) {
            let (a, b) = self.links[j - zt];
            format!("tcap_z{a}_z{b}")
        } else if j < self.flow_index(0, 0, 0) {
            let k = j - self.gen_index(0, 0, 0);
            let (zt_idx, t) = (k / h, k % h);
            format!(
                "gen_z{}_{}_h{t}",
                zt_idx / self.techs(),
                TECHNOLOGIES[zt_idx % self.techs()].name
            )
        } else if j < self.annual_index(0, 0) {
            let k = j - self.flow_index(0, 0, 0);
            let (ld, t) = (k / h, k % h);
            let (a, b) = self.links[ld / 2];
            let (from, to) = if ld % 2 == 0 { (a, b) } else { (b, a) };
            format!("flow_z{from}_z{to}_h{t}")
        } else {
            let k = j - self.annual_index(0, 0);
            format!(
                "gen_total_z{}_{}",
                k / self.techs(),
                TECHNOLOGIES[k % self.techs()].name
            )
        }
    }

    pub fn select_mga_vars(&self, mode: MgaMode) -> Vec<usize> {
        let zt = self.spec.zones * self.techs();
        match mode {
            MgaMode::Capacity => (0..zt + self.links.len()).collect(),
            MgaMode::Generation => (0..zt).map(|k| self.annual_index(0, 0) + k).collect(),
        }
    }

    fn prorate(&self) -> f64 {
        self.spec.hours as f64 / 8760.0
    }

    fn build_lp(&self) -> Result<LinearProgram<f64>, TestbedError> {
        let (zones, hours, techs) = (self.spec.zones, self.spec.hours, self.techs());
        let n = self.num_vars();
        let mut c = vec![0.0; n];
        for z in 0..zones {
            for (g, tech) in TECHNOLOGIES.iter().enumerate() {
                c[self.cap_index(z, g)] = tech.fixed_cost * self.prorate();
                for t in 0..hours {
                    c[self.gen_index(z, g, t)] = tech.variable_cost;
                }
            }
        }
        for l in 0..self.links.len() {
            c[self.tcap_index(l)] = LINK_COST * self.prorate();
        }
        let mut lp = LinearProgram::new(n, Sense::Minimize).with_objective(c)?;

        self.add_balance_rows(&mut lp)?;
        for z in 0..zones {
            for g in 0..techs {
                for t in 0..hours {
                    lp.add_constraint(
                        vec![
                            (self.cap_index(z, g), -self.availability[z][g][t]),
                            (self.gen_index(z, g, t), 1.0),
                        ],
                        Relation::Le,
                        0.0,
                    )?;
                }
            }
        }
        for l in 0..self.links.len() {
            for dir in 0..2 {
                for t in 0..hours {
                    lp.add_constraint(
                        vec![
                            (self.tcap_index(l), -1.0),
                            (self.flow_index(l, dir, t), 1.0),
                        ],
                        Relation::Le,
                        0.0,
                    )?;
                }
            }
        }
        for z in 0..zones {
            for g in 0..techs {
                let mut row: Vec<(usize, f64)> =
                    (0..hours).map(|t| (self.gen_index(z, g, t), 1.0)).collect();
                row.push((self.annual_index(z, g), -1.0));
                lp.add_constraint(row, Relation::Eq, 0.0)?;
            }
        }
        for z in 0..zones {
            for g in 0..techs {
                lp.set_bounds(self.cap_index(z, g), 0.0, self.max_build)?;
            }
        }
        for l in 0..self.links.len() {
            lp.set_bounds(self.tcap_index(l), 0.0, self.max_build)?;
        }
        Ok(lp)
    }

    /// Supply plus net imports equals demand, per zone and hour.
    fn add_balance_rows(&self, lp: &mut LinearProgram<f64>) -> Result<(), TestbedError> {
        for z in 0..self.spec.zones {
            for t in 0..self.spec.hours {
                let mut row: Vec<(usize, f64)> = (0..self.techs())
                    .map(|g| (self.gen_index(z, g, t), 1.0))
                    .collect();
                for (l, &(a, b)) in self.links.iter().enumerate() {
                    if a == z {
                        row.push((self.flow_index(l, 0, t), -1.0));
                        row.push((self.flow_index(l, 1, t), 1.0 - LINK_LOSS));
                    } else if b == z {
                        row.push((self.flow_index(l, 0, t), 1.0 - LINK_LOSS));
                        row.push((self.flow_index(l, 1, t), -1.0));
                    }
                }
                lp.add_constraint(row, Relation::Eq, self.demand[z][t])?;
            }
        }
        Ok(())
    }

    fn check_len(&self, x: &[f64]) -> Result<(), TestbedError> {
        if x.len() != self.num_vars() {
            return Err(TestbedError::SolutionLength {
                expected: self.num_vars(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Operating cost of the dispatch in `x`.
    pub fn variable_cost(&self, x: &[f64]) -> f64 {
        self.dispatch_sum(x, |t| t.variable_cost)
    }

    pub fn emissions(&self, x: &[f64]) -> f64 {
        self.dispatch_sum(x, |t| t.emissions_rate)
    }

    fn dispatch_sum(&self, x: &[f64], rate: impl Fn(&Technology) -> f64) -> f64 {
        let mut s = 0.0;
        for z in 0..self.spec.zones {
            for (g, tech) in TECHNOLOGIES.iter().enumerate() {
                for t in 0..self.spec.hours {
                    s += rate(tech) * x[self.gen_index(z, g, t)];
                }
            }
        }
        s
    }

    /// Largest violation of any hourly energy balance in `x`.
    pub fn balance_residual(&self, x: &[f64]) -> f64 {
        let rows = self.spec.zones * self.spec.hours;
        self.lp.constraints()[..rows]
            .iter()
            .map(|c| (c.activity(x) - c.rhs).abs())
            .fold(0.0, f64::max)
    }

    /// Keep the capacities of `x`, re-optimize dispatch for operating cost
    /// alone, and compare.
    pub fn redispatch_audit(&self, x: &[f64]) -> Result<AuditRecord, TestbedError> {
        self.check_len(x)?;
        let (zones, hours) = (self.spec.zones, self.spec.hours);
        let mut c = vec![0.0; self.num_vars()];
        for z in 0..zones {
            for (g, tech) in TECHNOLOGIES.iter().enumerate() {
                for t in 0..hours {
                    c[self.gen_index(z, g, t)] = tech.variable_cost;
                }
            }
        }
        let mut ops = LinearProgram::new(self.num_vars(), Sense::Minimize).with_objective(c)?;
        self.add_balance_rows(&mut ops)?;
        // capacity and annual columns do not enter the dispatch problem
        for j in 0..self.gen_index(0, 0, 0) {
            ops.set_bounds(j, 0.0, 0.0)?;
        }
        for j in self.annual_index(0, 0)..self.num_vars() {
            ops.set_bounds(j, 0.0, 0.0)?;
        }
        for z in 0..zones {
            for g in 0..self.techs() {
                let cap = x[self.cap_index(z, g)].max(0.0);
                for t in 0..hours {
                    ops.set_bounds(
                        self.gen_index(z, g, t),
                        0.0,
                        self.availability[z][g][t] * cap,
                    )?;
                }
            }
        }
        for l in 0..self.links.len() {
            let cap = x[self.tcap_index(l)].max(0.0);
            for dir in 0..2 {
                for t in 0..hours {
                    ops.set_bounds(self.flow_index(l, dir, t), 0.0, cap)?;
                }
            }
        }
        let sol = crate::lp::solve(&ops)?;
        match sol.status {
            Status::Optimal => {}
            Status::Infeasible => {
                // rounding in the MGA solution can leave a sliver of unmet
                // demand; widen the capacities by a relative hair and retry
                return self.redispatch_relaxed(x, ops);
            }
            other => return Err(TestbedError::Redispatch(format!("{other:?}"))),
        }
        Ok(self.audit_record(x, &sol.values))
    }

    fn redispatch_relaxed(
        &self,
        x: &[f64],
        mut ops: LinearProgram<f64>,
    ) -> Result<AuditRecord, TestbedError> {
        for j in self.gen_index(0, 0, 0)..self.annual_index(0, 0) {
            let up = ops.upper_bounds()[j];
            ops.set_bounds(j, 0.0, up * (1.0 + 1e-6) + 1e-6)?;
        }
        let sol = crate::lp::solve(&ops)?;
        if sol.status != Status::Optimal {
            return Err(TestbedError::Redispatch(format!(
                "fixed capacities cannot serve demand ({:?})",
                sol.status
            )));
        }
        Ok(self.audit_record(x, &sol.values))
    }

    fn audit_record(&self, x: &[f64], re: &[f64]) -> AuditRecord {
        let pct = |mga: f64, re: f64| {
            if re.abs() <= 1e-9 {
                None
            } else {
                Some(100.0 * (mga - re) / re)
            }
        };
        let (vm, vr) = (self.variable_cost(x), self.variable_cost(re));
        let (em, er) = (self.emissions(x), self.emissions(re));
        AuditRecord {
            variable_cost_mga: vm,
            variable_cost_redispatch: vr,
            emissions_mga: em,
            emissions_redispatch: er,
            variable_cost_pct_error: pct(vm, vr),
            emissions_pct_error: pct(em, er),
        }
    }

    /// `zone,technology,fixed_cost,variable_cost,emissions_rate` rows.
    pub fn tech_metadata_csv(&self) -> String {
        let mut out = String::from("zone,technology,fixed_cost,variable_cost,emissions_rate\n");
        for z in 0..self.spec.zones {
            for tech in &TECHNOLOGIES {
                let _ = writeln!(
                    out,
                    "{z},{},{},{},{}",
                    tech.name, tech.fixed_cost, tech.variable_cost, tech.emissions_rate
                );
            }
        }
        out
    }
}
