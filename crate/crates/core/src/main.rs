use std::io::Write;
use std::path::PathBuf;

use bipolar::bipolar::{
    eval_form1, eval_form2, eval_form3, eval_form4, BipolarGeometry, Truncation,
};
use bipolar::charge::DensityModel;
use bipolar::energy::{
    energy_direct, energy_fourier, energy_multipole, EnergyResult, TwoBodySystem,
};
use bipolar::error::{Error, Result};
use bipolar::input::parse_density_spec;
use bipolar::perturb::PerturbSystem;
use bipolar::vec3::Vec3;
use bipolar::verify;
use clap::{Parser, Subcommand, ValueEnum};

/// Bipolar-expansion electrostatics: interaction energies of analytic
/// charge models by mutually checking routes, with built-in
/// verification suites. Units are Gaussian with e = a0 = 1.
#[derive(Parser)]
#[command(name = "bipolar", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format for the emitted table
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the table to a file instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Multiplier applied to emitted value columns (unit conversion)
    #[arg(long, global = true, default_value_t = 1.0)]
    unit_scale: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    All,
    Multipole,
    Fourier,
    Direct,
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    /// hydrogen + proton
    Hp,
    /// hydrogen + hydrogen
    Hh,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    All,
    #[value(name = "1")]
    Form1,
    #[value(name = "2")]
    Form2,
    #[value(name = "3")]
    Form3,
    #[value(name = "4")]
    Form4,
}

#[derive(Subcommand)]
enum Command {
    /// Spherical mean square radii r̄_{lm}^{2n} of a density model
    Msr {
        /// Density spec: inline JSON (starts with '{') or a file path
        #[arg(long)]
        rho: String,
        #[arg(long, default_value_t = 4)]
        lmax: u32,
        #[arg(long, default_value_t = 2)]
        nmax: u32,
    },
    /// Evaluate the bipolar-expansion forms against the direct inverse distance
    Expand {
        #[arg(long, value_enum, default_value_t = FormArg::All)]
        form: FormArg,
        /// Point in distribution 1, comma triple x,y,z
        #[arg(long)]
        b: String,
        /// Point in distribution 2, comma triple x,y,z
        #[arg(long)]
        a: String,
        /// Center separation, comma triple x,y,z
        #[arg(long = "R")]
        separation: String,
        #[arg(long, default_value_t = 6)]
        lmax: u32,
    },
    /// Interaction energy of two density models
    Energy {
        #[arg(long)]
        rho1: String,
        #[arg(long)]
        rho2: String,
        /// Center separation, comma triple x,y,z
        #[arg(long = "R")]
        separation: String,
        #[arg(long, value_enum, default_value_t = MethodArg::All)]
        method: MethodArg,
        /// Multipole truncation (multipole method only)
        #[arg(long, default_value_t = 6)]
        lmax: u32,
    },
    /// Energy along a grid of separations
    Sweep {
        #[arg(long)]
        rho1: String,
        #[arg(long)]
        rho2: String,
        /// Separation direction, comma triple (scaled by each grid value)
        #[arg(long, default_value = "0,0,1")]
        direction: String,
        /// Grid start:stop:count
        #[arg(long = "r-grid")]
        r_grid: String,
        /// Geometric instead of linear grid spacing
        #[arg(long)]
        log: bool,
        #[arg(long, value_enum, default_value_t = MethodArg::All)]
        method: MethodArg,
        #[arg(long, default_value_t = 6)]
        lmax: u32,
    },
    /// First-order perturbation energies: closed form vs numeric inversion
    Perturb {
        #[arg(long, value_enum)]
        system: SystemArg,
        /// Grid of separations start:stop:count
        #[arg(long = "r-grid")]
        r_grid: String,
        #[arg(long)]
        log: bool,
        /// Bohr radius
        #[arg(long, default_value_t = 1.0)]
        a0: f64,
        /// Proton charge
        #[arg(long, default_value_t = 1.0)]
        e: f64,
    },
    /// Run the library property suites; exit 0 iff everything passes
    Verify {
        /// Suite name (specfun, charge, bipolar, energy, perturb) or 'all'
        #[arg(long, default_value = "all")]
        suite: String,
        /// Seed for the randomized geometries
        #[arg(long, default_value_t = 20260810)]
        seed: u64,
    },
}

enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    fn emit(&self, format: Format, mut w: impl Write) -> std::io::Result<()> {
        match format {
            Format::Csv => {
                writeln!(w, "{}", self.columns.join(","))?;
                for row in &self.rows {
                    let fields: Vec<String> = row
                        .iter()
                        .map(|c| match c {
                            Cell::Int(i) => i.to_string(),
                            Cell::Num(v) => format!("{v:.16e}"),
                            Cell::Text(s) => s.clone(),
                        })
                        .collect();
                    writeln!(w, "{}", fields.join(","))?;
                }
            }
            Format::Json => {
                let rows: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut obj = serde_json::Map::new();
                        for (name, cell) in self.columns.iter().zip(row) {
                            let v = match cell {
                                Cell::Int(i) => serde_json::json!(i),
                                Cell::Num(v) => serde_json::json!(v),
                                Cell::Text(s) => serde_json::json!(s),
                            };
                            obj.insert(name.to_string(), v);
                        }
                        serde_json::Value::Object(obj)
                    })
                    .collect();
                let doc = serde_json::json!({ "columns": self.columns, "rows": rows });
                writeln!(w, "{}", serde_json::to_string_pretty(&doc)?)?;
            }
        }
        Ok(())
    }
}

fn parse_vec3(s: &str) -> Result<Vec3> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Input(format!(
            "expected a comma triple x,y,z, got '{s}'"
        )));
    }
    let mut v = [0.0; 3];
    for (i, p) in parts.iter().enumerate() {
        v[i] = p
            .trim()
            .parse::<f64>()
            .map_err(|e| Error::Input(format!("component {} of '{s}': {e}", i + 1)))?;
    }
    Ok(v.into())
}

fn parse_grid(s: &str, log: bool) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Input(format!(
            "expected start:stop:count, got '{s}'"
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|e| Error::Input(format!("grid start '{}': {e}", parts[0])))?;
    let stop: f64 = parts[1]
        .parse()
        .map_err(|e| Error::Input(format!("grid stop '{}': {e}", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|e| Error::Input(format!("grid count '{}': {e}", parts[2])))?;
    if count == 0 {
        return Err(Error::Input("grid count must be at least 1".into()));
    }
    if log && (start <= 0.0 || stop <= 0.0) {
        return Err(Error::Input(
            "geometric grids need positive endpoints".into(),
        ));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let pts = (0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            if log {
                start * (stop / start).powf(t)
            } else {
                start + (stop - start) * t
            }
        })
        .collect();
    Ok(pts)
}

fn load_density(arg: &str) -> Result<DensityModel> {
    if arg.trim_start().starts_with('{') {
        parse_density_spec(arg)
    } else {
        let text = std::fs::read_to_string(arg)
            .map_err(|e| Error::Input(format!("reading density spec '{arg}': {e}")))?;
        parse_density_spec(&text)
    }
}

fn energy_rows(sys: &TwoBodySystem, method: MethodArg, lmax: u32) -> Result<Vec<EnergyResult>> {
    let t = Truncation::new(lmax, 0);
    Ok(match method {
        MethodArg::All => {
            // the multipole series is undefined at zero separation; with
            // `all` the remaining routes still apply there
            let mut rows = Vec::new();
            if !sys.separation.is_zero() {
                rows.push(energy_multipole(sys, t)?);
            }
            rows.push(energy_fourier(sys)?);
            rows.push(energy_direct(sys)?);
            rows
        }
        MethodArg::Multipole => vec![energy_multipole(sys, t)?],
        MethodArg::Fourier => vec![energy_fourier(sys)?],
        MethodArg::Direct => vec![energy_direct(sys)?],
    })
}

fn run(cli: &Cli) -> Result<(Table, i32)> {
    let scale = cli.unit_scale;
    match &cli.command {
        Command::Msr { rho, lmax, nmax } => {
            let model = load_density(rho)?;
            let table_data = model.msr_table(*lmax, *nmax)?;
            let mut table = Table::new(vec!["l", "m", "n", "re", "im"]);
            for n in 0..=*nmax {
                for l in 0..=*lmax {
                    for m in -(l as i32)..=l as i32 {
                        let v = table_data.get(l, m, n);
                        table.rows.push(vec![
                            Cell::Int(l as i64),
                            Cell::Int(m as i64),
                            Cell::Int(n as i64),
                            Cell::Num(v.re * scale),
                            Cell::Num(v.im * scale),
                        ]);
                    }
                }
            }
            Ok((table, 0))
        }
        Command::Expand {
            form,
            b,
            a,
            separation,
            lmax,
        } => {
            let g = BipolarGeometry::new(parse_vec3(b)?, parse_vec3(a)?, parse_vec3(separation)?);
            let t = Truncation::new(*lmax, 0);
            let mut table = Table::new(vec!["form", "value", "nonoverlap"]);
            let overlap_flag = if g.nonoverlap() { 1 } else { 0 };
            let mut push = |label: &str, v: f64| {
                table.rows.push(vec![
                    Cell::Text(label.to_string()),
                    Cell::Num(v * scale),
                    Cell::Int(overlap_flag),
                ]);
            };
            match form {
                FormArg::All => {
                    push("form1", eval_form1(&g, t)?);
                    push("form2", eval_form2(&g, t)?);
                    push("form3", eval_form3(&g, t)?);
                    push("form4", eval_form4(&g, t)?);
                }
                FormArg::Form1 => push("form1", eval_form1(&g, t)?),
                FormArg::Form2 => push("form2", eval_form2(&g, t)?),
                FormArg::Form3 => push("form3", eval_form3(&g, t)?),
                FormArg::Form4 => push("form4", eval_form4(&g, t)?),
            }
            push("direct", g.inverse_distance_direct()?);
            Ok((table, 0))
        }
        Command::Energy {
            rho1,
            rho2,
            separation,
            method,
            lmax,
        } => {
            let sys = TwoBodySystem::new(
                load_density(rho1)?,
                load_density(rho2)?,
                parse_vec3(separation)?,
            );
            let mut table = Table::new(vec!["method", "value", "error_estimate", "lmax"]);
            for r in energy_rows(&sys, *method, *lmax)? {
                table.rows.push(vec![
                    Cell::Text(r.method.as_str().to_string()),
                    Cell::Num(r.value * scale),
                    Cell::Num(r.error_estimate * scale),
                    match r.truncation {
                        Some(t) => Cell::Int(t.l_max as i64),
                        None => Cell::Text(String::new()),
                    },
                ]);
            }
            Ok((table, 0))
        }
        Command::Sweep {
            rho1,
            rho2,
            direction,
            r_grid,
            log,
            method,
            lmax,
        } => {
            let rho1 = load_density(rho1)?;
            let rho2 = load_density(rho2)?;
            let dir = parse_vec3(direction)?
                .unit()
                .ok_or_else(|| Error::Input("sweep direction must be nonzero".into()))?;
            let grid = parse_grid(r_grid, *log)?;
            let mut table = Table::new(vec!["R", "value", "method"]);
            for &r in &grid {
                let sys = TwoBodySystem::new(rho1.clone(), rho2.clone(), dir * r);
                for res in energy_rows(&sys, *method, *lmax)? {
                    table.rows.push(vec![
                        Cell::Num(r),
                        Cell::Num(res.value * scale),
                        Cell::Text(res.method.as_str().to_string()),
                    ]);
                }
            }
            Ok((table, 0))
        }
        Command::Perturb {
            system,
            r_grid,
            log,
            a0,
            e,
        } => {
            let sys = match system {
                SystemArg::Hp => {
                    PerturbSystem::new(bipolar::perturb::PerturbKind::HydrogenProton, *a0, *e)?
                }
                SystemArg::Hh => {
                    PerturbSystem::new(bipolar::perturb::PerturbKind::HydrogenHydrogen, *a0, *e)?
                }
            };
            let grid = parse_grid(r_grid, *log)?;
            let mut table = Table::new(vec!["R", "closed", "numeric", "abs_diff"]);
            for &r in &grid {
                let closed = sys.first_order_closed(r)?;
                let numeric = sys.first_order_numeric(r)?;
                table.rows.push(vec![
                    Cell::Num(r),
                    Cell::Num(closed * scale),
                    Cell::Num(numeric * scale),
                    Cell::Num((closed - numeric).abs() * scale),
                ]);
            }
            Ok((table, 0))
        }
        Command::Verify { suite, seed } => {
            let results = if suite == "all" {
                verify::run_all(*seed)?
            } else {
                verify::run_suite(suite, *seed)?
            };
            let mut table = Table::new(vec!["status", "suite", "check", "detail"]);
            let mut failures = 0usize;
            for r in &results {
                if !r.passed {
                    failures += 1;
                }
                table.rows.push(vec![
                    Cell::Text(if r.passed {
                        "PASS".into()
                    } else {
                        "FAIL".into()
                    }),
                    Cell::Text(r.suite.to_string()),
                    Cell::Text(r.name.clone()),
                    Cell::Text(r.detail.clone()),
                ]);
            }
            table.rows.push(vec![
                Cell::Text(if failures == 0 {
                    "PASS".into()
                } else {
                    "FAIL".into()
                }),
                Cell::Text("summary".into()),
                Cell::Text(format!(
                    "{}/{} checks passed",
                    results.len() - failures,
                    results.len()
                )),
                Cell::Text(String::new()),
            ]);
            Ok((table, if failures == 0 { 0 } else { 1 }))
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((table, code)) => {
            let result = match &cli.out {
                Some(path) => std::fs::File::create(path).and_then(|f| table.emit(cli.format, f)),
                None => table.emit(cli.format, std::io::stdout().lock()),
            };
            if let Err(e) = result {
                eprintln!("error: output: {e}");
                std::process::exit(2);
            }
            std::process::exit(code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
