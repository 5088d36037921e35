//! Text specs for Orlicz functions, conditions and symbols, as used on the command line.
//!
//! Orlicz: `power:3`, `exp_x`, `exp_power:2`, `exp_log_power:2`, `loglog`, `logloglog`,
//! `explicit_product`, `critere:8`, `piecewise:@file.csv` (columns `x,psi`).
//! Conditions: `delta2`, `deltasup2:A`, `growth:A`, `deltasup1`, `nabla0`,
//! `slowgrowth:eps`, `theta:A:θ`.
//! Symbols: `identity`, `const:0.5+0.1i`, `lens[:eps]`, `phi-theta:θ[:eps]`,
//! `general:@file.csv` (columns `h,c`), `outer:@file.csv` (one column `a` on a uniform
//! grid, needs a Ψ).

use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::orlicz::{build_critere_orlicz, Condition, Interp, OrliczFunction};
use crate::symbols::{general_symbol, lens_symbol, outer_symbol, phi_theta_symbol, ProfileFunction, Symbol, DEFAULT_K};

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("{what}: cannot read a number from {s:?}")))
}

fn split(spec: &str) -> (String, Vec<&str>) {
    let mut parts = spec.trim().split(':');
    let head = parts.next().unwrap_or("").to_ascii_lowercase().replace(['_', '-'], "");
    (head, parts.collect())
}

fn file_arg<'a>(args: &[&'a str], what: &str) -> Result<&'a str> {
    match args {
        [p] if p.starts_with('@') && p.len() > 1 => Ok(&p[1..]),
        _ => Err(Error::Parse(format!("{what} expects @path"))),
    }
}

fn one_arg(args: &[&str], what: &str) -> Result<f64> {
    match args {
        [v] => parse_f64(v, what),
        _ => Err(Error::Parse(format!("{what} expects exactly one parameter"))),
    }
}

/// Numeric CSV rows, skipping a header line and `#` comments.
pub fn read_rows(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let vals: std::result::Result<Vec<f64>, _> = rec.iter().map(|f| f.parse::<f64>()).collect();
        match vals {
            Ok(v) if !v.is_empty() => rows.push(v),
            Ok(_) => {}
            Err(_) if i == 0 => {}
            Err(_) => return Err(Error::Parse(format!("{}: row {} is not numeric", path.display(), i + 1))),
        }
    }
    Ok(rows)
}

/// Two-column CSV.
pub fn read_pairs(path: &Path) -> Result<Vec<(f64, f64)>> {
    read_rows(path)?
        .into_iter()
        .map(|r| match r.as_slice() {
            [a, b] => Ok((*a, *b)),
            _ => Err(Error::Parse(format!("{}: expected two columns", path.display()))),
        })
        .collect()
}

/// One-column CSV.
pub fn read_column(path: &Path) -> Result<Vec<f64>> {
    read_rows(path)?
        .into_iter()
        .map(|r| match r.as_slice() {
            [a] => Ok(*a),
            _ => Err(Error::Parse(format!("{}: expected one column", path.display()))),
        })
        .collect()
}

pub fn parse_psi(spec: &str) -> Result<OrliczFunction> {
    let (head, args) = split(spec);
    let none = |f: OrliczFunction| {
        if args.is_empty() {
            Ok(f)
        } else {
            Err(Error::Parse(format!("{spec:?} takes no parameters")))
        }
    };
    match head.as_str() {
        "power" => OrliczFunction::power(one_arg(&args, "power")?),
        "expx" => none(OrliczFunction::exp_x()),
        "exppower" => OrliczFunction::exp_power(one_arg(&args, "exp_power")?),
        "explogpower" => OrliczFunction::exp_log_power(one_arg(&args, "exp_log_power")?),
        "loglog" => none(OrliczFunction::loglog()),
        "logloglog" => none(OrliczFunction::logloglog()),
        "explicitproduct" | "explicit" => none(OrliczFunction::explicit_product()),
        "critere" => {
            let n = one_arg(&args, "critere")?;
            if n.fract() != 0.0 || n < 0.0 {
                return Err(Error::Parse(format!("critere needs an integer, got {n}")));
            }
            build_critere_orlicz(n as usize)
        }
        "piecewise" => {
            let pts = read_pairs(Path::new(file_arg(&args, "piecewise")?))?;
            OrliczFunction::piecewise(&pts, Interp::LogLog)
        }
        _ => Err(Error::Parse(format!("unknown Orlicz function {spec:?}"))),
    }
}

pub fn parse_condition(spec: &str) -> Result<Condition> {
    let (head, args) = split(spec);
    let none = |c: Condition| {
        if args.is_empty() {
            Ok(c)
        } else {
            Err(Error::Parse(format!("{spec:?} takes no parameters")))
        }
    };
    match head.as_str() {
        "delta2" => none(Condition::Delta2),
        "deltasup2" => Ok(Condition::DeltaSup2 { a: one_arg(&args, "deltasup2")? }),
        "growth" | "growthsup2" => Ok(Condition::GrowthSup2 { a: one_arg(&args, "growth")? }),
        "deltasup1" => none(Condition::DeltaSup1),
        "nabla0" => none(Condition::Nabla0),
        "slowgrowth" => Ok(Condition::SlowGrowth { eps: one_arg(&args, "slowgrowth")? }),
        "theta" | "thetacondition" => match args.as_slice() {
            [a, t] => Ok(Condition::ThetaCondition { a: parse_f64(a, "theta A")?, theta: parse_f64(t, "theta")? }),
            _ => Err(Error::Parse("theta expects theta:A:θ".into())),
        },
        _ => Err(Error::Parse(format!("unknown condition {spec:?}"))),
    }
}

/// `a`, `bi`, `a+bi`, `a-bi`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t = s.trim().replace(' ', "");
    let bad = || Error::Parse(format!("cannot read a complex number from {s:?}"));
    if let Some(body) = t.strip_suffix('i') {
        let bytes = body.as_bytes();
        let cut = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let (re, im) = match cut {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => "1",
            "-" => "-1",
            v => v,
        };
        let re: f64 = re.parse().map_err(|_| bad())?;
        let im: f64 = im.parse().map_err(|_| bad())?;
        Ok(Complex64::new(re, im))
    } else {
        Ok(Complex64::new(t.parse().map_err(|_| bad())?, 0.0))
    }
}

/// Default lens aperture.
pub const LENS_EPS: f64 = 0.25;

/// Builds a symbol; `psi` is needed only for `outer`.
pub fn parse_symbol(spec: &str, psi: Option<&OrliczFunction>) -> Result<Symbol> {
    let (head, args) = split(spec);
    match head.as_str() {
        "identity" if args.is_empty() => Ok(Symbol::Identity),
        "const" => match args.as_slice() {
            [v] => {
                let c = parse_complex(v)?;
                if !(c.norm() < 1.0) {
                    return Err(Error::Invalid(format!("constant {c} is not in the open disk")));
                }
                Ok(Symbol::Constant(c))
            }
            _ => Err(Error::Parse("const expects one complex number".into())),
        },
        "lens" => match args.as_slice() {
            [] => lens_symbol(LENS_EPS),
            [e] => lens_symbol(parse_f64(e, "lens eps")?),
            _ => Err(Error::Parse("lens takes at most one parameter".into())),
        },
        "phitheta" => match args.as_slice() {
            [t] => phi_theta_symbol(parse_f64(t, "theta")?, None),
            [t, e] => phi_theta_symbol(parse_f64(t, "theta")?, Some(parse_f64(e, "eps")?)),
            _ => Err(Error::Parse("phi-theta expects phi-theta:θ[:eps]".into())),
        },
        "general" => {
            let pts = read_pairs(Path::new(file_arg(&args, "general")?))?;
            let (h, c): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
            general_symbol(ProfileFunction::from_sequences(&h, &c)?, DEFAULT_K)
        }
        "outer" => {
            let a = read_column(Path::new(file_arg(&args, "outer")?))?;
            let psi = psi.ok_or_else(|| Error::Invalid("outer symbols need a Ψ (--psi)".into()))?;
            outer_symbol(&a, psi)
        }
        _ => Err(Error::Parse(format!("unknown symbol {spec:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn orlicz_specs() {
        assert_eq!(parse_psi("power:3").unwrap(), OrliczFunction::power(3.0).unwrap());
        assert_eq!(parse_psi("exp_x").unwrap(), OrliczFunction::exp_x());
        assert_eq!(parse_psi("exp-log-power:2").unwrap(), OrliczFunction::exp_log_power(2.0).unwrap());
        assert_eq!(parse_psi("logloglog").unwrap(), OrliczFunction::logloglog());
        assert_eq!(parse_psi("critere:8").unwrap(), build_critere_orlicz(8).unwrap());
        for bad in ["power", "power:x", "exp_x:2", "critere:2.5", "nope", "piecewise:file.csv"] {
            assert!(parse_psi(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn piecewise_from_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "x,psi\n1,1\n2,8\n4,64\n8,1024").unwrap();
        let spec = format!("piecewise:@{}", f.path().display());
        let psi = parse_psi(&spec).unwrap();
        assert!((psi.eval(4.0).unwrap() - 64.0).abs() < 1e-9);
    }

    #[test]
    fn condition_specs() {
        assert!(matches!(parse_condition("delta2").unwrap(), Condition::Delta2));
        assert!(matches!(parse_condition("deltasup2:2").unwrap(), Condition::DeltaSup2 { a } if a == 2.0));
        assert!(matches!(parse_condition("slow_growth:0.5").unwrap(), Condition::SlowGrowth { eps } if eps == 0.5));
        assert!(matches!(
            parse_condition("theta:2:1").unwrap(),
            Condition::ThetaCondition { a, theta } if a == 2.0 && theta == 1.0
        ));
        assert!(parse_condition("theta:2").is_err());
        assert!(parse_condition("delta3").is_err());
        // labels parse back
        for c in ["delta2", "deltasup2:4", "growth:2", "deltasup1", "nabla0", "slowgrowth:0.5", "theta:2:1"] {
            assert_eq!(parse_condition(c).unwrap().label(), c);
        }
    }

    #[test]
    fn complex_numbers() {
        assert_eq!(parse_complex("0.5+0.1i").unwrap(), Complex64::new(0.5, 0.1));
        assert_eq!(parse_complex("-0.5-0.1i").unwrap(), Complex64::new(-0.5, -0.1));
        assert_eq!(parse_complex("0.25").unwrap(), Complex64::new(0.25, 0.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2e-1i").unwrap(), Complex64::new(1e-3, 0.2));
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn symbol_specs() {
        assert!(matches!(parse_symbol("identity", None).unwrap(), Symbol::Identity));
        assert!(matches!(parse_symbol("const:0.5+0.1i", None).unwrap(), Symbol::Constant(_)));
        assert!(matches!(parse_symbol("lens", None).unwrap(), Symbol::Lens { eps } if eps == LENS_EPS));
        assert!(matches!(parse_symbol("phi-theta:2.0", None).unwrap(), Symbol::PhiTheta { theta, .. } if theta == 2.0));
        assert!(parse_symbol("const:1.5", None).is_err());
        assert!(parse_symbol("phi-theta:2:0.5", None).is_err());
        assert!(parse_symbol("spiral", None).is_err());
    }

    #[test]
    fn file_symbols() {
        let mut g = tempfile::NamedTempFile::new().unwrap();
        writeln!(g, "h,c").unwrap();
        for k in 1..=12 {
            let x = k as f64;
            writeln!(g, "{},{}", 1.0 / x.exp_m1(), x.exp_m1() / (2.0 * x).exp_m1()).unwrap();
        }
        let s = parse_symbol(&format!("general:@{}", g.path().display()), None).unwrap();
        assert!(matches!(s, Symbol::General(_)));

        let mut o = tempfile::NamedTempFile::new().unwrap();
        for j in 0..64 {
            writeln!(o, "{}", 3.0 + (2.0 * std::f64::consts::PI * j as f64 / 64.0).cos()).unwrap();
        }
        let spec = format!("outer:@{}", o.path().display());
        assert!(parse_symbol(&spec, None).is_err());
        let psi = OrliczFunction::power(2.0).unwrap();
        assert!(matches!(parse_symbol(&spec, Some(&psi)).unwrap(), Symbol::Outer(_)));
    }
}
