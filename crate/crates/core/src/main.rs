use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use siegel_theta::cmfield::{belong_criterion, build_context, GaloisActor};
use siegel_theta::exact::{CycloField, Rational};
use siegel_theta::harness::{run_suite, Suite, SuiteConfig};
use siegel_theta::modularity::{check_family, find_witness, ThetaProduct};
use siegel_theta::primgen::{
    combine_norm, combine_trace, is_primitive, zeta25_components, AbelianTower, NormParams,
};
use siegel_theta::symplectic::SiegelPoint;
use siegel_theta::theta::{phi_eval, theta_eval_detailed, Characteristic, EvalSettings};

#[derive(Parser)]
#[command(
    name = "siegel-theta",
    version,
    about = "Theta constants on the Siegel upper half-space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and emit a JSON report.
    Verify {
        /// Suites to run (repeatable); all when omitted.
        #[arg(long = "suite", value_enum)]
        suites: Vec<Suite>,
        /// Odd primes for the CM checks (repeatable).
        #[arg(long = "p")]
        primes: Vec<u64>,
        /// Numeric tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Target error of the theta lattice sums.
        #[arg(long, default_value_t = 1e-12)]
        theta_tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate Theta(u, Z; r, s) or the quotient Phi.
    Theta {
        /// Characteristic, e.g. "[1/3,0;0,2/3]".
        #[arg(long)]
        chi: String,
        /// Rows separated by ';', entries by ',', e.g. "1.2i,0.3;0.3,1.1i".
        /// Defaults to the CM point Z0 of Q(zeta_5).
        #[arg(long)]
        z: Option<String>,
        /// Entries separated by ','; zero when omitted.
        #[arg(long)]
        u: Option<String>,
        /// Evaluate Phi = Theta(0,Z;r,s)/Theta(0,Z;0,0) instead.
        #[arg(long)]
        phi: bool,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Check whether a theta product file is modular for Gamma(N).
    Modularity {
        file: PathBuf,
        /// Also search numerically for a moving generator.
        #[arg(long)]
        witness: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Apply the Artin symbol of (x) to Phi_chi(Z0), x in Z[zeta_5].
    Action {
        /// Coordinates a_0,..,a_4 of x = sum a_k zeta^k.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        p: u64,
        /// Characteristic with denominator dividing p.
        #[arg(long)]
        chi: String,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Run the primitive generator demonstrations.
    Primgen,
}

fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t = text.trim().replace(' ', "");
    t.parse::<Complex64>()
        .map_err(|_| format!("cannot parse complex number {text:?}"))
}

fn parse_z(text: &str) -> Result<SiegelPoint, String> {
    let rows: Vec<Vec<Complex64>> = text
        .split(';')
        .map(|row| row.split(',').map(parse_complex).collect())
        .collect::<Result<_, _>>()?;
    let refs: Vec<&[Complex64]> = rows.iter().map(Vec::as_slice).collect();
    SiegelPoint::from_rows(&refs).map_err(|e| e.to_string())
}

fn parse_coords(text: &str) -> Result<[BigInt; 5], String> {
    let v: Vec<BigInt> = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| format!("bad coordinate {t:?}"))
        })
        .collect::<Result<_, _>>()?;
    let mut out: [BigInt; 5] = Default::default();
    if v.len() > 5 {
        return Err("at most five coordinates".into());
    }
    for (o, x) in out.iter_mut().zip(v) {
        *o = x;
    }
    Ok(out)
}

fn complex_json(v: Complex64) -> serde_json::Value {
    json!([v.re, v.im])
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn print(v: &serde_json::Value) {
    emit(&serde_json::to_string_pretty(v).expect("json"));
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Verify {
            suites,
            primes,
            tol,
            theta_tol,
            seed,
            out,
        } => {
            let defaults = SuiteConfig::default();
            let cfg = SuiteConfig {
                primes: if primes.is_empty() {
                    defaults.primes
                } else {
                    primes
                },
                tol_numeric: tol,
                theta_tol,
                seed,
                suites: if suites.is_empty() {
                    defaults.suites
                } else {
                    suites
                },
            };
            let report = run_suite(&cfg).map_err(err)?;
            for r in &report.records {
                let status = format!("{:?}", r.status).to_uppercase();
                eprintln!("{status:<5} {:<28} {}", r.name, r.detail);
            }
            let text = report.to_json();
            match out {
                Some(path) => std::fs::write(&path, text + "\n")
                    .map_err(|e| format!("{}: {e}", path.display()))?,
                None => emit(&text),
            }
            Ok(ExitCode::from(report.exit_code() as u8))
        }
        Command::Theta {
            chi,
            z,
            u,
            phi,
            tol,
        } => {
            let settings = EvalSettings::with_tol(tol);
            let chi: Characteristic = chi.parse().map_err(err)?;
            let z = match z {
                Some(text) => parse_z(&text)?,
                None => build_context(settings).map_err(err)?.z0().clone(),
            };
            if phi {
                let v = phi_eval(&chi, &z, &settings).map_err(err)?;
                print(&json!({ "chi": chi.to_string(), "phi": complex_json(v) }));
                return Ok(ExitCode::SUCCESS);
            }
            let u: Vec<Complex64> = match u {
                Some(text) => text
                    .split(',')
                    .map(parse_complex)
                    .collect::<Result<_, _>>()?,
                None => vec![Complex64::new(0.0, 0.0); z.g()],
            };
            let t = theta_eval_detailed(&u, &z, &chi, &settings).map_err(err)?;
            print(&json!({
                "chi": chi.to_string(),
                "theta": complex_json(t.value),
                "radius": t.radius,
                "terms": t.terms,
                "tail_bound": t.tail_bound,
            }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Modularity {
            file,
            witness,
            seed,
            tol,
        } => {
            let text =
                std::fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
            let fam = ThetaProduct::parse(&text).map_err(err)?;
            let check = check_family(&fam, fam.den()).map_err(err)?;
            let mut out = json!({
                "level": fam.den().to_string(),
                "modular": check.modular,
                "failures": check.failures,
                "diagnostic": check.diagnostic(),
            });
            if witness {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let z = SiegelPoint::random(&mut rng, fam.g(), 0.8);
                let w =
                    find_witness(&fam, fam.den(), &z, &EvalSettings::with_tol(tol)).map_err(err)?;
                out["witness"] = json!(w);
            }
            print(&out);
            Ok(if check.modular {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Action { x, p, chi, tol } => {
            let settings = EvalSettings::with_tol(tol);
            let coords = parse_coords(&x)?;
            let chi: Characteristic = chi.parse().map_err(err)?;
            let ctx = build_context(settings).map_err(err)?;
            let coeffs: Vec<Rational> = coords
                .iter()
                .map(|c| Rational::from_integer(c.clone()))
                .collect();
            let elem = ctx.field().from_power_coeffs(&coeffs);
            let pb = BigInt::from(p);
            let actor = GaloisActor::new(&ctx, &elem, &pb).map_err(err)?;
            let res = actor.act(&chi).map_err(err)?;
            let before = phi_eval(&chi, ctx.z0(), &settings).map_err(err)?;
            let after = res.multiplier.to_complex()
                * phi_eval(&res.chi_out, ctx.z0(), &settings).map_err(err)?;
            let mut out = json!({
                "x": elem.to_string(),
                "h_mod": actor.h_mod.to_string(),
                "nu": actor.nu.to_string(),
                "multiplier": res.multiplier.to_string(),
                "chi_out": res.chi_out.to_string(),
                "phi": complex_json(before),
                "image": complex_json(after),
            });
            if let Ok(b) = belong_criterion(&ctx, &coords, &pb) {
                out["belong"] = json!(b);
            }
            print(&out);
            Ok(ExitCode::SUCCESS)
        }
        Command::Primgen => {
            print(&primgen_demo()?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn primgen_demo() -> Result<serde_json::Value, String> {
    let f = CycloField::new(8);
    let t = AbelianTower::new(
        8,
        &[1, 3, 5, 7],
        &[1, 7],
        f.zeta_pow(1) + f.zeta_pow(7),
        f.zeta_pow(2),
    )
    .map_err(err)?;
    let e1 = combine_trace(&t, &f.one(), &f.one()).map_err(err)?;
    let p = NormParams {
        a: 3,
        b: 1,
        c: 3,
        d: 1,
        n: 1,
        m: 1,
    };
    let e2 = combine_norm(&t, p).map_err(err)?;
    let (tr, nm) = zeta25_components().map_err(err)?;
    Ok(json!({
        "tower": { "conductor": 8, "x": t.x().to_string(), "y": t.y().to_string(), "ell": t.ell(), "degree": t.degree() },
        "trace_combination": { "value": e1.to_string(), "primitive": is_primitive(&e1, &t) },
        "norm_combination": { "value": e2.to_string(), "primitive": is_primitive(&e2, &t) },
        "zeta25": { "trace": tr.to_string(), "norm_of_3z_plus_1": nm.to_string() },
    }))
}
