//! Runs one configuration point by point.

use std::fs;

use manybody::circuit::{
    parse_circuit, run_circuit, toffoli_circuit, Circuit, Gate, QubitRegister,
};
use manybody::coldatoms::{
    band_parameters, bh_critical_point, bh_energy_per_site, bh_minimize_numeric, helium_minimize,
    mott_lobes, BoseHubbardMF, LatticeParams,
};
use manybody::dmrg::{finite_dmrg, DmrgConfig};
use manybody::eigensolve::{dense_eigh, ground_state_vector, tfim_ground_state, SolverConfig};
use manybody::qmc::{
    default_thermalization, metropolis_run, tfim_qmc_magnetization_with, ChainStats,
    ClassicalLattice2D,
};
use manybody::rng::mix_seed;
use manybody::spin::{dense_tfim, spontaneous_magnetization, StateVector, TfimHamiltonian};
use manybody::Boundary;

use crate::config::*;
use crate::error::CliError;

/// One output value.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Cell {
    /// Floats use the shortest representation that parses back to the same value.
    pub fn render(&self) -> String {
        match self {
            Cell::Float(x) => format!("{x:?}"),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Cell::Float(x) => serde_json::Value::from(*x),
            Cell::Int(i) => serde_json::Value::from(*i),
            Cell::Bool(b) => serde_json::Value::from(*b),
            Cell::Text(s) => serde_json::Value::from(s.as_str()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(i64::from(x))
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

type Row = Vec<(&'static str, Cell)>;

/// Rectangular result with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    /// Columns from the first row, preceded by `lead` when the rows lack it.
    fn from_rows(rows: Vec<(Option<f64>, Row)>, lead: Option<&str>) -> Self {
        let keys: Vec<&str> = rows
            .first()
            .map(|(_, r)| r.iter().map(|(k, _)| *k).collect())
            .unwrap_or_default();
        let lead = lead.filter(|l| !keys.contains(l));
        let mut columns: Vec<String> = lead.into_iter().map(str::to_owned).collect();
        columns.extend(keys.iter().map(|k| (*k).to_owned()));
        let rows = rows
            .into_iter()
            .map(|(value, r)| {
                let mut cells: Vec<Cell> = Vec::with_capacity(columns.len());
                if lead.is_some() {
                    cells.push(Cell::Float(value.expect("swept value")));
                }
                cells.extend(r.into_iter().map(|(_, v)| v));
                cells
            })
            .collect();
        Self { columns, rows }
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[k]).collect())
    }

    /// Floats of column `name`.
    pub fn floats(&self, name: &str) -> Option<Vec<f64>> {
        self.column(name)?
            .into_iter()
            .map(|c| match c {
                Cell::Float(x) => Some(*x),
                Cell::Int(i) => Some(*i as f64),
                _ => None,
            })
            .collect()
    }

    /// RFC-4180 CSV with a header row and LF line endings.
    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))
                .expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| serde_json::Value::Array(r.iter().map(Cell::to_json).collect()))
            .collect();
        serde_json::json!({ "columns": self.columns, "rows": rows })
    }
}

/// Extra inputs not carried by the configuration document.
#[derive(Debug, Clone, Default)]
pub struct RunContext {
    /// Circuit text supplied on the command line.
    pub circuit_text: Option<String>,
}

/// Seed of sweep point `index`.
pub fn point_seed(seed: u64, index: usize) -> u64 {
    seed ^ mix_seed(index as u64)
}

/// Runs every sweep point and returns rows sorted by the swept value.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    seed: u64,
    ctx: &RunContext,
) -> Result<Table, CliError> {
    let Some(sweep) = &cfg.sweep else {
        let rows = run_point(cfg.method, &cfg.params_at(None), seed, ctx)?;
        return Ok(Table::from_rows(
            rows.into_iter().map(|r| (None, r)).collect(),
            None,
        ));
    };
    let mut points: Vec<(f64, Vec<Row>)> = Vec::with_capacity(sweep.values.len());
    for (index, &value) in sweep.values.iter().enumerate() {
        let rows = run_point(
            cfg.method,
            &cfg.params_at(Some(value)),
            point_seed(seed, index),
            ctx,
        )?;
        points.push((value, rows));
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let rows = points
        .into_iter()
        .flat_map(|(value, rows)| rows.into_iter().map(move |r| (Some(value), r)))
        .collect();
    Ok(Table::from_rows(rows, Some(&sweep.parameter)))
}

fn run_point(
    method: Method,
    params: &serde_json::Map<String, serde_json::Value>,
    seed: u64,
    ctx: &RunContext,
) -> Result<Vec<Row>, CliError> {
    match method {
        Method::Ed => run_ed(parse_params(params)?),
        Method::Lanczos => run_lanczos(parse_params(params)?, seed),
        Method::Qmc => run_qmc(parse_params(params)?, seed),
        Method::Dmrg => run_dmrg(parse_params(params)?, seed),
        Method::Circuit => run_circuit_method(parse_params(params)?, ctx),
        Method::Coldatoms => run_coldatoms(parse_params(params)?),
    }
}

fn run_ed(p: EdParams) -> Result<Vec<Row>, CliError> {
    let h = TfimHamiltonian::new(p.n, p.g, p.boundary.into())?;
    let eig = dense_eigh(&dense_tfim(&h)?)?;
    let ground = StateVector::new(p.n, eig.vector(0))?;
    Ok(vec![vec![
        ("g", p.g.into()),
        ("energy", eig.values[0].into()),
        ("gap", (eig.values[1] - eig.values[0]).into()),
        ("magnetization", spontaneous_magnetization(&ground)?.into()),
    ]])
}

fn run_lanczos(p: LanczosParams, seed: u64) -> Result<Vec<Row>, CliError> {
    let h = TfimHamiltonian::new(p.n, p.g, p.boundary.into())?;
    let cfg = SolverConfig::default()
        .with_seed(seed)
        .with_tolerance(p.tolerance)
        .with_max_iterations(p.max_iterations);
    cfg.validate()?;
    let (r, _) = tfim_ground_state(&h, &cfg)?;
    let ground = ground_state_vector(&h, &r)?;
    Ok(vec![vec![
        ("g", p.g.into()),
        ("energy", r.energy.into()),
        ("magnetization", spontaneous_magnetization(&ground)?.into()),
        ("iterations", r.iterations.into()),
        ("residual", r.residual_norm.into()),
    ]])
}

fn stats_row(s: &ChainStats<f64>) -> Row {
    vec![
        ("mean_abs_magnetization", s.mean_abs_magnetization.into()),
        (
            "stderr_abs_magnetization",
            s.stderr.abs_magnetization.into(),
        ),
        ("energy_per_site", s.mean_energy_per_site.into()),
        ("stderr_energy_per_site", s.stderr.energy_per_site.into()),
        ("binder_cumulant", s.binder_cumulant.into()),
        ("acceptance_rate", s.acceptance_rate.into()),
        ("samples", s.samples.into()),
    ]
}

fn run_qmc(p: QmcParams, seed: u64) -> Result<Vec<Row>, CliError> {
    match p {
        QmcParams::Tfim {
            n_x,
            n_y,
            g,
            beta,
            sweeps,
            boundary,
        } => {
            let s = tfim_qmc_magnetization_with(n_x, g, beta, n_y, sweeps, seed, boundary.into())?;
            let mut row: Row = vec![("g", g.into()), ("beta", beta.into())];
            row.extend(stats_row(&s));
            Ok(vec![row])
        }
        QmcParams::Classical {
            n_x,
            n_y,
            beta,
            sweeps,
            thermalization,
        } => {
            let n_y = n_y.unwrap_or(n_x);
            let mut lattice = ClassicalLattice2D::new(n_x, n_y, 1.0, 1.0, Boundary::Periodic)?;
            let therm = thermalization.unwrap_or_else(|| default_thermalization(sweeps));
            let s = metropolis_run(&mut lattice, beta, sweeps, therm, seed)?;
            let mut row: Row = vec![("beta", beta.into())];
            row.extend(stats_row(&s));
            Ok(vec![row])
        }
    }
}

fn run_dmrg(p: DmrgParams, seed: u64) -> Result<Vec<Row>, CliError> {
    let mut cfg = DmrgConfig::new(p.n, p.d_max, p.g);
    cfg.sweep_count = p.sweeps;
    cfg.energy_tolerance = p.energy_tolerance;
    cfg.seed = seed;
    cfg.validate()?;
    let r = finite_dmrg(&cfg)?;
    Ok(vec![vec![
        ("g", p.g.into()),
        ("energy", r.energy.into()),
        ("energy_per_bond", r.energy_per_bond.into()),
        ("max_discarded_weight", r.max_discarded_weight.into()),
        ("entropy_mid", r.entanglement_entropy_mid.into()),
        ("sweeps_run", r.sweep_energies.len().into()),
    ]])
}

fn load_circuit(p: &CircuitParams, ctx: &RunContext) -> Result<Circuit<f64>, CliError> {
    if let Some(text) = &ctx.circuit_text {
        return Ok(parse_circuit(text)?);
    }
    if let Some(path) = &p.circuit_file {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.clone(),
            message: e.to_string(),
        })?;
        return Ok(parse_circuit(&text)?);
    }
    match p.builtin {
        Some(BuiltinCircuit::Bell) => Ok(Circuit::from_gates(2, [Gate::H(0), Gate::Cnot(0, 1)])?),
        Some(BuiltinCircuit::Toffoli) => Ok(toffoli_circuit()),
        None => Err(CliError::config(
            Some("builtin"),
            "give a circuit with --circuit, `circuit_file` or `builtin`",
        )),
    }
}

fn run_circuit_method(p: CircuitParams, ctx: &RunContext) -> Result<Vec<Row>, CliError> {
    let c = load_circuit(&p, ctx)?;
    let reg = match &p.initial {
        Some(label) => {
            if label.len() != c.n_qubits() {
                return Err(CliError::config(
                    Some("initial"),
                    format!(
                        "label has {} qubits, circuit has {}",
                        label.len(),
                        c.n_qubits()
                    ),
                ));
            }
            QubitRegister::from_label(label)?
        }
        None => QubitRegister::new(c.n_qubits())?,
    };
    let out = run_circuit(&reg, &c)?;
    let n = c.n_qubits();
    Ok(out
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(index, a)| {
            let label: String = (0..n)
                .map(|q| if (index >> q) & 1 == 1 { '1' } else { '0' })
                .collect();
            vec![
                ("index", index.into()),
                ("label", label.into()),
                ("probability", a.norm_sqr().into()),
                ("amplitude_re", a.re.into()),
                ("amplitude_im", a.im.into()),
            ]
        })
        .collect())
}

fn run_coldatoms(p: ColdAtomsParams) -> Result<Vec<Row>, CliError> {
    Ok(match p {
        ColdAtomsParams::Helium {} => {
            let (z, e) = helium_minimize::<f64>();
            vec![vec![("z_star", z.into()), ("e_min", e.into())]]
        }
        ColdAtomsParams::BoseHubbard {
            n_star,
            zj_over_u,
            mu_over_u,
        } => {
            let mu = mu_over_u.unwrap_or(f64::from(n_star) - 0.5);
            let m = BoseHubbardMF::new(n_star, zj_over_u, 0.0, mu)?;
            let (best, energy) = bh_minimize_numeric(&m)?;
            let (lower, upper) = mott_lobes(n_star, zj_over_u)?;
            vec![vec![
                ("n_star", n_star.into()),
                ("zj_over_u", zj_over_u.into()),
                ("mu_over_u", mu.into()),
                ("epsilon", best.epsilon.into()),
                ("energy", energy.into()),
                ("mott_energy", bh_energy_per_site(&m)?.into()),
                (
                    "critical_u_over_zj",
                    bh_critical_point::<f64>(n_star)?.into(),
                ),
                ("mu_lower", lower.into()),
                ("mu_upper", upper.into()),
            ]]
        }
        ColdAtomsParams::Lattice {
            v0_over_er,
            recoil_er,
            k_l,
            a_s,
        } => {
            let b = band_parameters(&LatticeParams {
                v0_over_er,
                recoil_er,
                k_l,
                a_s,
            })?;
            vec![vec![
                ("v0_over_er", v0_over_er.into()),
                ("w", b.w.into()),
                ("j_hop", b.j_hop.into()),
                ("a_osc", b.a_osc.into()),
                ("u_onsite", b.u_onsite.into()),
                ("deep_lattice", b.deep_lattice.into()),
            ]]
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_json(text).unwrap()
    }

    #[test]
    fn helium_row() {
        let t = run_experiment(
            &cfg(r#"{"method":"coldatoms","params":{"model":"helium"}}"#),
            0,
            &RunContext::default(),
        )
        .unwrap();
        assert_eq!(
            String::from_utf8(t.to_csv()).unwrap(),
            "z_star,e_min\n1.6875,-2.84765625\n"
        );
    }

    #[test]
    fn sweep_rows_sorted_by_value() {
        let t = run_experiment(
            &cfg(r#"{"method":"ed","params":{"n":4},"sweep":{"parameter":"g","values":[2.0,0.5,1.0]}}"#),
            0,
            &RunContext::default(),
        )
        .unwrap();
        assert_eq!(t.columns[0], "g");
        assert_eq!(t.floats("g").unwrap(), vec![0.5, 1.0, 2.0]);
    }

    #[test]
    fn swept_key_absent_from_output_is_prepended() {
        let t = run_experiment(
            &cfg(r#"{"method":"dmrg","params":{"g":1.0,"d_max":4},"sweep":{"parameter":"n","values":[8,6]}}"#),
            0,
            &RunContext::default(),
        )
        .unwrap();
        assert_eq!(t.columns[0], "n");
        assert_eq!(t.floats("n").unwrap(), vec![6.0, 8.0]);
        assert_eq!(t.rows[0].len(), t.columns.len());
    }

    #[test]
    fn bell_circuit_probabilities() {
        let t = run_experiment(
            &cfg(r#"{"method":"circuit","params":{"builtin":"bell"}}"#),
            0,
            &RunContext::default(),
        )
        .unwrap();
        let p = t.floats("probability").unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[3] - 0.5).abs() < 1e-15);
        assert!(p[1] < 1e-30 && p[2] < 1e-30);
    }

    #[test]
    fn range_errors_name_the_key() {
        let err = run_experiment(
            &cfg(r#"{"method":"lanczos","params":{"n":1,"g":1.0}}"#),
            0,
            &RunContext::default(),
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn point_seeds_differ() {
        assert_ne!(point_seed(7, 0), point_seed(7, 1));
        assert_eq!(point_seed(7, 3), point_seed(7, 3));
    }
}
