//! Command-line front end: emit catalog objects, evaluate maps, run the
//! verification suite, and reconstruct `(λ, t)` from a bidegree-(2,2)
//! curve.

use std::io::Read;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use pardel_core::elliptic::TorsionIndex;
use pardel_core::jsonio::{ObjectJson, PolyJson};
use pardel_core::moduli::{self, ModuliError, ModuliParams, NamedMapTag};
use pardel_core::projective::ProjPoint;
use pardel_core::ratfunc::RatFunc;
use pardel_core::scalar::ExactScalar;
use pardel_core::verify::{self, CheckStatus, Mode, VerifyPlan};

#[derive(Parser)]
#[command(
    name = "pardel",
    about = "Exact geometry of the rank-2 parabolic moduli space over a 2-punctured elliptic curve",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Rational value of lambda, e.g. 2 or -1/3.
    #[arg(long)]
    lambda: Option<String>,
    /// Rational value of t.
    #[arg(long)]
    t: Option<String>,
    /// Optional rational s with s^2 = t(t-1)(t-lambda).
    #[arg(long)]
    s: Option<String>,
    /// Keep lambda and t as formal variables (default when no values given).
    #[arg(long, conflicts_with_all = ["lambda", "t", "s"])]
    symbolic: bool,
}

impl ParamArgs {
    fn to_params(&self) -> Result<ModuliParams> {
        match (&self.lambda, &self.t) {
            (None, None) => Ok(ModuliParams::symbolic()),
            (Some(l), Some(t)) => {
                let lambda: ExactScalar =
                    l.parse().map_err(|e| anyhow!("bad --lambda: {e}"))?;
                let t: ExactScalar = t.parse().map_err(|e| anyhow!("bad --t: {e}"))?;
                let params = match &self.s {
                    None => ModuliParams::rational(lambda, t),
                    Some(s) => {
                        let s: ExactScalar =
                            s.parse().map_err(|e| anyhow!("bad --s: {e}"))?;
                        ModuliParams::rational_with_s(lambda, t, s)
                    }
                };
                params.map_err(|e| anyhow!("invalid parameters: {e}"))
            }
            _ => bail!("numeric runs need both --lambda and --t"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print a catalog object as JSON (or readable text).
    Emit {
        /// One of: gamma, sigma, conic, lines, points, map <name>.
        object: String,
        /// Map name when object = map: tau, sigma0, sigma1, sigma_lambda,
        /// psi_t, phi, twist0, twist1, twist_lambda, twist_inf, swap, phi_w.
        name: Option<String>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = "json")]
        format: String,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Evaluate a named map at a point.
    Eval {
        /// Map name (as for emit).
        name: String,
        /// Point: "b0,b1,b2" for plane maps, "(z0,z1),(w0,w1)" for maps of
        /// the doubled line.
        #[arg(long)]
        point: String,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Run the certificate suite and print the report.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        /// Substring filters selecting checks.
        #[arg(long)]
        only: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Reconstruct (lambda, t) from a bidegree-(2,2) curve file.
    Torelli {
        /// Path to a {"kind": "bicurve", ...} JSON file, or - for stdin.
        input: String,
        #[arg(long, default_value = "json")]
        format: String,
    },
}

fn parse_map_tag(name: &str) -> Result<NamedMapTag> {
    Ok(match name {
        "tau" => NamedMapTag::Tau,
        "sigma0" => NamedMapTag::Sigma0,
        "sigma1" => NamedMapTag::Sigma1,
        "sigma_lambda" | "sigmalambda" => NamedMapTag::SigmaLambda,
        "psi_t" | "psit" => NamedMapTag::PsiT,
        "phi" | "phi_tilde" => NamedMapTag::PhiTilde,
        "phi_w" => NamedMapTag::PhiW,
        "swap" => NamedMapTag::Swap,
        "twist0" => NamedMapTag::Twist(TorsionIndex::Zero),
        "twist1" => NamedMapTag::Twist(TorsionIndex::One),
        "twist_lambda" => NamedMapTag::Twist(TorsionIndex::Lambda),
        "twist_inf" => NamedMapTag::Twist(TorsionIndex::Infinity),
        other => bail!("unknown map name {other:?}"),
    })
}

fn emit_object(
    object: &str,
    name: Option<&str>,
    params: &ModuliParams,
    format: &str,
) -> Result<String> {
    let as_json = |v: &serde_json::Value| serde_json::to_string_pretty(v).unwrap();
    let text = match (object, format) {
        ("gamma", "json") => as_json(&serde_json::to_value(ObjectJson::from_bicurve(
            &moduli::gamma_curve(params),
        ))?),
        ("gamma", "text") => format!("{}", moduli::gamma_curve(params).poly()),
        ("sigma", "json") => as_json(&serde_json::to_value(ObjectJson::from_planecurve(
            &moduli::sigma_cubic(params),
        ))?),
        ("sigma", "text") => format!("{}", moduli::sigma_cubic(params).poly()),
        ("conic", "json") => as_json(&serde_json::to_value(ObjectJson::from_planecurve(
            &moduli::standard_conic(params),
        ))?),
        ("conic", "text") => format!("{}", moduli::standard_conic(params).poly()),
        ("lines", "json") => {
            let lines: Vec<serde_json::Value> = moduli::standard_lines(params)
                .iter()
                .map(|((i, j), l)| {
                    serde_json::json!({
                        "between": [i.label(), j.label()],
                        "curve": ObjectJson::from_planecurve(l),
                    })
                })
                .collect();
            as_json(&serde_json::Value::Array(lines))
        }
        ("lines", "text") => moduli::standard_lines(params)
            .iter()
            .map(|((i, j), l)| format!("Pi_{{{},{}}}: {}", i.label(), j.label(), l.poly()))
            .collect::<Vec<_>>()
            .join("\n"),
        ("points", "json") => {
            let pts: Vec<serde_json::Value> = moduli::special_points(params)
                .iter()
                .map(|(id, p)| {
                    serde_json::json!({
                        "name": format!("D_{}", id.label()),
                        "coords": p
                            .as_polys()
                            .iter()
                            .map(PolyJson::from_poly)
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            as_json(&serde_json::Value::Array(pts))
        }
        ("points", "text") => moduli::special_points(params)
            .iter()
            .map(|(id, p)| {
                let c = p.as_polys();
                format!("D_{} = ({} : {} : {})", id.label(), c[0], c[1], c[2])
            })
            .collect::<Vec<_>>()
            .join("\n"),
        ("map", fmt) => {
            let name = name.context("emit map needs a map name")?;
            let tag = parse_map_tag(name)?;
            match tag {
                NamedMapTag::Tau
                | NamedMapTag::Sigma0
                | NamedMapTag::Sigma1
                | NamedMapTag::SigmaLambda
                | NamedMapTag::PsiT => {
                    let m = moduli::plane_map(params, tag);
                    if fmt == "text" {
                        m.components()
                            .iter()
                            .enumerate()
                            .map(|(i, c)| format!("component {i}: {c}"))
                            .collect::<Vec<_>>()
                            .join("\n")
                    } else {
                        as_json(&serde_json::to_value(ObjectJson::from_map_p2(&m))?)
                    }
                }
                NamedMapTag::PhiTilde => {
                    let m = moduli::phi_tilde(params);
                    if fmt == "text" {
                        format!(
                            "z = ({}) : ({})\nw = ({}) : ({})",
                            m.zpair[0], m.zpair[1], m.wpair[0], m.wpair[1]
                        )
                    } else {
                        as_json(&serde_json::to_value(ObjectJson::from_ruled(&m))?)
                    }
                }
                NamedMapTag::PhiW => {
                    let (f, s) = moduli::fitting::phi_w_working(params);
                    if fmt == "text" {
                        format!("first = {f}\nsecond = {s}")
                    } else {
                        as_json(&serde_json::json!({
                            "kind": "map_cl",
                            "payload": {
                                "first": {
                                    "num": PolyJson::from_poly(f.num()),
                                    "den": PolyJson::from_poly(f.den()),
                                },
                                "second": {
                                    "num": PolyJson::from_poly(s.num()),
                                    "den": PolyJson::from_poly(s.den()),
                                },
                            },
                        }))
                    }
                }
                NamedMapTag::Twist(k) => {
                    let tw = moduli::twist_auto(params, k);
                    as_json(&serde_json::json!({
                        "kind": "pp_auto",
                        "swap": tw.swap,
                        "mz": tw.mz.m.iter().map(PolyJson::from_poly).collect::<Vec<_>>(),
                        "mw": tw.mw.m.iter().map(PolyJson::from_poly).collect::<Vec<_>>(),
                    }))
                }
                NamedMapTag::Swap => {
                    let sw = moduli::swap_auto();
                    as_json(&serde_json::json!({
                        "kind": "pp_auto",
                        "swap": sw.swap,
                        "mz": sw.mz.m.iter().map(PolyJson::from_poly).collect::<Vec<_>>(),
                        "mw": sw.mw.m.iter().map(PolyJson::from_poly).collect::<Vec<_>>(),
                    }))
                }
            }
        }
        (obj, fmt) => bail!("cannot emit object {obj:?} with format {fmt:?}"),
    };
    Ok(text)
}

fn parse_scalar(s: &str) -> Result<ExactScalar> {
    s.trim()
        .parse()
        .map_err(|e| anyhow!("bad rational {s:?}: {e}"))
}

fn parse_triple(s: &str) -> Result<ProjPoint> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        bail!("plane points are b0,b1,b2");
    }
    let coords: Result<Vec<RatFunc>> = parts
        .iter()
        .map(|p| Ok(RatFunc::from_scalar(parse_scalar(p)?)))
        .collect();
    Ok(ProjPoint::new(coords?))
}

fn parse_pair_point(s: &str) -> Result<(ProjPoint, ProjPoint)> {
    // "(a,b),(c,d)"
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let inner: Vec<&str> = cleaned
        .trim_start_matches('(')
        .trim_end_matches(')')
        .split("),(")
        .collect();
    if inner.len() != 2 {
        bail!("pair points are (z0,z1),(w0,w1)");
    }
    let mut pts = Vec::new();
    for part in inner {
        let nums: Vec<&str> = part.split(',').collect();
        if nums.len() != 2 {
            bail!("each factor needs two coordinates");
        }
        pts.push(ProjPoint::p1(
            RatFunc::from_scalar(parse_scalar(nums[0])?),
            RatFunc::from_scalar(parse_scalar(nums[1])?),
        ));
    }
    Ok((pts[0].clone(), pts[1].clone()))
}

fn show_p1(p: &ProjPoint) -> String {
    let c = p.as_polys();
    format!("({} : {})", c[0], c[1])
}

fn cmd_eval(name: &str, point: &str, params: &ModuliParams) -> Result<String> {
    let tag = parse_map_tag(name)?;
    match tag {
        NamedMapTag::Tau
        | NamedMapTag::Sigma0
        | NamedMapTag::Sigma1
        | NamedMapTag::SigmaLambda
        | NamedMapTag::PsiT => {
            let m = moduli::plane_map(params, tag);
            let p = parse_triple(point)?;
            match m.apply(&p) {
                Ok(q) => {
                    let c = q.as_polys();
                    Ok(format!("({} : {} : {})", c[0], c[1], c[2]))
                }
                Err(_) => Ok("undefined (base point)".into()),
            }
        }
        NamedMapTag::PhiTilde => {
            let m = moduli::phi_tilde(params);
            let p = parse_triple(point)?;
            match m.apply(&p) {
                Ok((z, w)) => Ok(format!("z = {}, w = {}", show_p1(&z), show_p1(&w))),
                Err(_) => {
                    // Identify which base point, if any.
                    for (id, d) in moduli::special_points(params) {
                        if d == p {
                            return Ok(format!("undefined (base point D_{})", id.label()));
                        }
                    }
                    Ok("undefined (base point)".into())
                }
            }
        }
        NamedMapTag::Twist(_) | NamedMapTag::Swap => {
            let auto = match tag {
                NamedMapTag::Twist(k) => moduli::twist_auto(params, k),
                _ => moduli::swap_auto(),
            };
            let (z, w) = parse_pair_point(point)?;
            let (zi, wi) = auto.apply(&z, &w);
            Ok(format!("z = {}, w = {}", show_p1(&zi), show_p1(&wi)))
        }
        NamedMapTag::PhiW => bail!("phi_w is a chart map; use emit map phi_w"),
    }
}

fn run() -> Result<u8> {
    let cli = Cli::parse();
    match cli.command {
        Command::Emit {
            object,
            name,
            params,
            format,
            out,
        } => {
            let params = params.to_params()?;
            let text = emit_object(&object, name.as_deref(), &params, &format)?;
            match out {
                Some(path) => std::fs::write(path, text + "\n")?,
                None => println!("{text}"),
            }
            Ok(0)
        }
        Command::Eval {
            name,
            point,
            params,
        } => {
            let params = params.to_params()?;
            println!("{}", cmd_eval(&name, &point, &params)?);
            Ok(0)
        }
        Command::Verify {
            params,
            only,
            seed,
            jobs,
            format,
            out,
        } => {
            let params = params.to_params()?;
            let mode = match params.lambda_scalar() {
                None => Mode::Symbolic,
                Some(l) => Mode::Specialized {
                    lambda: l,
                    t: params.t_scalar().unwrap(),
                },
            };
            let plan = VerifyPlan {
                mode,
                selection: only,
                jobs,
                seed,
            };
            let certs = verify::run_suite(&plan);
            let rendered = if format == "text" {
                verify::render_text(&certs)
            } else {
                serde_json::to_string_pretty(&verify::report(&plan, &certs)).unwrap() + "\n"
            };
            match out {
                Some(path) => std::fs::write(path, &rendered)?,
                None => print!("{rendered}"),
            }
            let failed = certs
                .iter()
                .any(|c| c.status == CheckStatus::Fail);
            Ok(if failed { 2 } else { 0 })
        }
        Command::Torelli { input, format } => {
            let raw = if input == "-" {
                let mut buf = String::new();
                std::io::stdin().read_to_string(&mut buf)?;
                buf
            } else {
                std::fs::read_to_string(&input).with_context(|| format!("reading {input}"))?
            };
            let obj: ObjectJson = serde_json::from_str(&raw)?;
            let curve = obj.to_bicurve().map_err(|e| anyhow!(e))?;
            match moduli::torelli::torelli_reconstruct(&curve) {
                Ok(r) => {
                    if format == "text" {
                        println!("lambda = {}", r.lambda);
                        println!("t = {}", r.t);
                        println!(
                            "candidates: {}",
                            r.candidates
                                .iter()
                                .map(|(l, t)| format!("({l}, {t})"))
                                .collect::<Vec<_>>()
                                .join(", ")
                        );
                    } else {
                        let v = serde_json::json!({
                            "lambda": r.lambda.to_string(),
                            "t": r.t.to_string(),
                            "mz": r.mz.m.iter().map(PolyJson::from_poly).collect::<Vec<_>>(),
                            "mw": r.mw.m.iter().map(PolyJson::from_poly).collect::<Vec<_>>(),
                            "candidates": r.candidates
                                .iter()
                                .map(|(l, t)| vec![l.to_string(), t.to_string()])
                                .collect::<Vec<_>>(),
                        });
                        println!("{}", serde_json::to_string_pretty(&v).unwrap());
                    }
                    Ok(0)
                }
                Err(ModuliError::IrrationalBranch) => {
                    eprintln!("error: {}", ModuliError::IrrationalBranch);
                    Ok(3)
                }
                Err(ModuliError::NotGammaType) | Err(ModuliError::NotBidegree22) => {
                    eprintln!("error: the curve is not equivalent to a standard branch curve");
                    Ok(4)
                }
                Err(e) => Err(anyhow!(e)),
            }
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
