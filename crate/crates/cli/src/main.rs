//! Command-line experiments for the checkers walk: evolve a slice, cross-check
//! the independent wave-function routes, and tabulate each asymptotic theorem
//! against the lattice. Output is machine-readable CSV (17 significant digits,
//! so parsing recovers every f64 bit-exactly) or JSON arrays keyed by column.
//!
//! Exit codes: 0 ok, 2 invalid configuration, 3 numeric error,
//! 4 oracle disagreement beyond tolerance (`compare`).

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::process::exit;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use feynman_checkers::asymptotics::{
    airy_approx_a1, chirality_limit, chirality_limit_free, continuum_field, continuum_free,
    ContinuumPoint, Parity,
};
use feynman_checkers::exact::{a1_closed, a1_closed_exact, a2_closed, a2_closed_exact, DiagCoords};
use feynman_checkers::spectral::{amplitude_integral, limit_cdf, limit_cdf_free, min_quad_points};
use feynman_checkers::{GaugeField, LatticeIndex, LatticeParams, WaveSlice};

#[derive(Parser)]
#[command(name = "fcheckers", version, about = "Feynman-checkers lattice experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the walk to time t and print one row per reachable position.
    Evolve(RunConfig),
    /// Cross-check recurrence, closed-form, and Fourier-integral amplitudes.
    Compare(RunConfig),
    /// Scaled probability at fixed t versus its small-step Bessel limit.
    Continuum(RunConfig),
    /// Empirical position CDF at time t versus the large-time limit F(v).
    Distribution(RunConfig),
    /// Chirality-reversal probability over time versus its parity limits.
    Chirality(RunConfig),
    /// Wave-function component a1 versus the uniform Airy approximation.
    Airy(RunConfig),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone)]
enum FieldSpec {
    Trivial,
    Homogeneous,
    Seeded(u64),
}

impl FromStr for FieldSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "trivial" => Ok(FieldSpec::Trivial),
            "homogeneous" => Ok(FieldSpec::Homogeneous),
            other => match other.strip_prefix("seeded:") {
                Some(seed) => seed
                    .parse()
                    .map(FieldSpec::Seeded)
                    .map_err(|e| format!("bad seed in {other:?}: {e}")),
                None => Err(format!(
                    "unknown field {other:?}; use trivial, homogeneous, or seeded:<int>"
                )),
            },
        }
    }
}

impl FieldSpec {
    fn build(&self) -> GaugeField {
        match self {
            FieldSpec::Trivial => GaugeField::trivial(),
            FieldSpec::Homogeneous => GaugeField::homogeneous(),
            FieldSpec::Seeded(seed) => GaugeField::seeded(*seed),
        }
    }

    fn is_homogeneous(&self) -> bool {
        matches!(self, FieldSpec::Homogeneous)
    }
}

#[derive(Args)]
struct RunConfig {
    /// Electron mass m >= 0.
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    /// Lattice step ε > 0.
    #[arg(long, default_value_t = 1.0)]
    step: f64,
    /// Physical time t; t/ε must be a positive integer (continuum snaps t
    /// down to the 4ε-grid instead).
    #[arg(long)]
    t: f64,
    /// Gauge field: trivial | homogeneous | seeded:N.
    #[arg(long, default_value = "homogeneous")]
    field: FieldSpec,
    /// Quadrature nodes for the Fourier-integral route (compare only);
    /// defaults to the resolution bound 4·(t/ε) + 64.
    #[arg(long)]
    quad_points: Option<usize>,
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Oracle-disagreement threshold for compare.
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
}

fn config_error(msg: &str) -> ! {
    eprintln!("error: {msg}");
    exit(2);
}

fn numeric_error(msg: impl std::fmt::Display) -> ! {
    eprintln!("numeric error: {msg}");
    exit(3);
}

impl RunConfig {
    fn params(&self) -> LatticeParams {
        LatticeParams::new(self.mass, self.step)
            .unwrap_or_else(|e| config_error(&e.to_string()))
    }

    /// `t/ε` as an integer time index.
    fn time_index(&self) -> i64 {
        let ratio = self.t / self.step;
        let ti = ratio.round();
        if !ratio.is_finite() || (ratio - ti).abs() > 1e-9 || ti < 1.0 {
            config_error(&format!(
                "t = {} must be a positive integer multiple of the step {}",
                self.t, self.step
            ));
        }
        ti as i64
    }
}

struct Table {
    columns: Vec<(&'static str, Vec<f64>)>,
}

impl Table {
    fn new(names: &[&'static str]) -> Self {
        Table { columns: names.iter().map(|n| (*n, Vec::new())).collect() }
    }

    fn push_row(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.columns.len());
        for (col, v) in self.columns.iter_mut().zip(row) {
            col.1.push(*v);
        }
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<&str> = self.columns.iter().map(|(n, _)| *n).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        let rows = self.columns.first().map_or(0, |(_, v)| v.len());
        for i in 0..rows {
            for (j, (_, values)) in self.columns.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                // 17 significant digits: round-trips every f64 exactly
                let _ = write!(out, "{:.16e}", values[i]);
            }
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> String {
        let mut map = serde_json::Map::new();
        for (name, values) in &self.columns {
            map.insert(name.to_string(), serde_json::json!(values));
        }
        let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(map))
            .expect("serializable");
        s.push('\n');
        s
    }

    fn emit(&self, cfg: &RunConfig) {
        let text = match cfg.format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        };
        match &cfg.out {
            Some(path) => fs::write(path, text)
                .unwrap_or_else(|e| config_error(&format!("cannot write {path:?}: {e}"))),
            None => {
                std::io::stdout().write_all(text.as_bytes()).expect("stdout");
            }
        }
    }
}

fn cmd_evolve(cfg: &RunConfig) {
    let params = cfg.params();
    let ti = cfg.time_index();
    let field = cfg.field.build();
    let slice = WaveSlice::evolve_to(ti, &params, &field);
    let mut table = Table::new(&["x", "a1", "a2", "P"]);
    for (xi, a) in slice.iter_reachable() {
        table.push_row(&[xi as f64 * params.step(), a.a1, a.a2, a.probability()]);
    }
    table.emit(cfg);
}

fn cmd_compare(cfg: &RunConfig) {
    if !cfg.field.is_homogeneous() {
        config_error("compare needs --field homogeneous (closed forms exist only there)");
    }
    let params = cfg.params();
    if params.mass() == 0.0 {
        config_error("compare needs mass > 0 (the integral route requires it)");
    }
    let ti = cfg.time_index();
    let quad = cfg.quad_points.unwrap_or_else(|| min_quad_points(ti));
    if quad < min_quad_points(ti) {
        config_error(&format!(
            "--quad-points {quad} underresolves t/ε = {ti}; need at least {}",
            min_quad_points(ti)
        ));
    }
    let field = cfg.field.build();
    let slice = WaveSlice::evolve_to(ti, &params, &field);
    // closed forms live on the unit lattice; the rescaling identity
    // a(εx, εt, m, ε, u_ε) = a(x, t, mε, 1, u_1) bridges the gap
    let unit_mass = params.mass_step();
    let mut table = Table::new(&[
        "x",
        "a1_recurrence",
        "a2_recurrence",
        "a1_closed",
        "a2_closed",
        "a1_integral",
        "a2_integral",
        "max_abs_diff",
    ]);
    let mut worst = 0.0f64;
    for (xi, rec) in slice.iter_reachable() {
        let d = DiagCoords::from_lattice(xi, ti).expect("reachable");
        let (c1, c2) = if ti <= 48 {
            (a1_closed(d, unit_mass), a2_closed(d, unit_mass))
        } else {
            (a1_closed_exact(d, unit_mass), a2_closed_exact(d, unit_mass))
        };
        let idx = LatticeIndex::new(xi, ti).expect("ti >= 1");
        let fi = amplitude_integral(idx, &params, quad).unwrap_or_else(|e| numeric_error(e));
        let diff = (rec.a1 - c1)
            .abs()
            .max((rec.a2 - c2).abs())
            .max((rec.a1 - fi.a1).abs())
            .max((rec.a2 - fi.a2).abs());
        worst = worst.max(diff);
        table.push_row(&[
            xi as f64 * params.step(),
            rec.a1,
            rec.a2,
            c1,
            c2,
            fi.a1,
            fi.a2,
            diff,
        ]);
    }
    table.emit(cfg);
    if worst > cfg.tolerance {
        eprintln!("oracle disagreement: max |diff| = {worst:e} exceeds tolerance {:e}", cfg.tolerance);
        exit(4);
    }
}

fn cmd_continuum(cfg: &RunConfig) {
    let params = cfg.params();
    if params.mass() == 0.0 {
        config_error("continuum limit needs mass > 0");
    }
    let free = match &cfg.field {
        FieldSpec::Homogeneous => false,
        FieldSpec::Trivial => true,
        FieldSpec::Seeded(_) => {
            config_error("continuum has limits only for homogeneous or trivial fields")
        }
    };
    let field = cfg.field.build();
    // snap t down to the 4ε-grid as in the limit theorem
    let eps = params.step();
    let ti = 4 * ((cfg.t / (4.0 * eps)).floor() as i64);
    if ti < 4 {
        config_error("t too small: need t >= 4ε");
    }
    let slice = WaveSlice::evolve_to(ti, &params, &field);
    let scale = 1.0 / (4.0 * eps * eps);
    let t_snap = ti as f64 * eps;
    let mut table = Table::new(&["x", "lattice_scaled", "bessel_limit"]);
    let mut xi = -ti + 4;
    while xi <= ti - 4 {
        let x = xi as f64 * eps;
        let pt = ContinuumPoint::new(x, t_snap).expect("|x| < t");
        let limit = if free {
            continuum_free(pt, params.mass())
        } else {
            continuum_field(pt, params.mass()).density
        };
        table.push_row(&[x, slice.amplitude_at(xi).probability() * scale, limit]);
        xi += 4;
    }
    table.emit(cfg);
}

fn cmd_distribution(cfg: &RunConfig) {
    let params = cfg.params();
    if params.mass() == 0.0 {
        config_error("the limit distribution needs mass > 0");
    }
    let free = match &cfg.field {
        FieldSpec::Homogeneous => false,
        FieldSpec::Trivial => true,
        FieldSpec::Seeded(_) => {
            config_error("distribution has a limit only for homogeneous or trivial fields")
        }
    };
    let ti = cfg.time_index();
    let slice = WaveSlice::evolve_to(ti, &params, &cfg.field.build());
    let mut table = Table::new(&["v", "empirical_cdf", "limit_cdf"]);
    for k in -100..=100 {
        let v = k as f64 / 100.0;
        let limit = if free {
            limit_cdf_free(v, params.mass(), params.step())
        } else {
            limit_cdf(v, &params)
        };
        table.push_row(&[v, slice.cdf(v), limit]);
    }
    table.emit(cfg);
}

fn cmd_chirality(cfg: &RunConfig) {
    let params = cfg.params();
    let free = match &cfg.field {
        FieldSpec::Homogeneous => false,
        FieldSpec::Trivial => true,
        FieldSpec::Seeded(_) => {
            config_error("chirality has a limit only for homogeneous or trivial fields")
        }
    };
    let ti_max = cfg.time_index();
    let field = cfg.field.build();
    let mut table = Table::new(&["t", "sum_a1_sq", "limit"]);
    let mut slice = WaveSlice::initial(&field);
    loop {
        let ti = slice.ti();
        let limit = if free {
            chirality_limit_free(&params)
        } else {
            chirality_limit(Parity::of(ti), &params)
        };
        table.push_row(&[ti as f64 * params.step(), slice.chirality_reversal(), limit]);
        if ti == ti_max {
            break;
        }
        slice = slice.step(&params, &field);
    }
    table.emit(cfg);
}

fn cmd_airy(cfg: &RunConfig) {
    if !cfg.field.is_homogeneous() {
        config_error("airy needs --field homogeneous");
    }
    let params = cfg.params();
    let me = params.mass_step();
    if !(me > 0.0 && me <= 1.0) {
        config_error("airy needs 0 < mass·step <= 1");
    }
    let ti = cfg.time_index();
    if ti.rem_euclid(4) != 2 {
        config_error(&format!("airy needs t/ε ≡ 2 (mod 4), got {ti}"));
    }
    let slice = WaveSlice::evolve_to(ti, &params, &cfg.field.build());
    let mut table = Table::new(&["x", "a1_lattice", "a1_airy"]);
    let reach = (0.4 * ti as f64) as i64;
    let mut xi = -(reach - reach.rem_euclid(4));
    while xi as f64 <= 0.4 * ti as f64 {
        let idx = LatticeIndex::new(xi, ti).expect("ti >= 1");
        let approx = airy_approx_a1(idx, &params).unwrap_or_else(|e| numeric_error(e));
        table.push_row(&[xi as f64 * params.step(), slice.amplitude_at(xi).a1, approx]);
        xi += 4;
    }
    table.emit(cfg);
}

fn main() {
    let cli = Cli::parse();
    match &cli.command {
        Command::Evolve(cfg) => cmd_evolve(cfg),
        Command::Compare(cfg) => cmd_compare(cfg),
        Command::Continuum(cfg) => cmd_continuum(cfg),
        Command::Distribution(cfg) => cmd_distribution(cfg),
        Command::Chirality(cfg) => cmd_chirality(cfg),
        Command::Airy(cfg) => cmd_airy(cfg),
    }
}
