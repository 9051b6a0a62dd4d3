//! The kernel mini-language: `floor`, `frac:r=0.8`, `smooth:lambda=2`,
//! `linear:r=0.5,s=1`, `v23`, `dirac:r=0.75`, `pow2`, `m:4`, `sqrtfloor`,
//! `pw32`, `coeffs:chi4|alt|dh|unit|tau[,n=H]|file=PATH`.

use std::collections::BTreeMap;
use std::path::Path;

use super::coeffs::{CoeffKernel, TAU_HORIZON};
use super::{Family, ThetaFunction};
use crate::error::{Error, Result};
use crate::scalar::Param;

fn bad(spec: &str, why: &str) -> Error {
    Error::Parse(format!("kernel spec {spec:?}: {why}"))
}

fn key_values<'a>(spec: &str, args: &'a str) -> Result<BTreeMap<&'a str, &'a str>> {
    let mut map = BTreeMap::new();
    for part in args.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| bad(spec, &format!("expected key=value, got {part:?}")))?;
        if map.insert(k.trim(), v.trim()).is_some() {
            return Err(bad(spec, &format!("duplicate key {k:?}")));
        }
    }
    Ok(map)
}

fn take(spec: &str, map: &mut BTreeMap<&str, &str>, key: &str) -> Result<Param> {
    let v = map
        .remove(key)
        .ok_or_else(|| bad(spec, &format!("missing {key}=")))?;
    Param::parse(v)
}

fn finish(spec: &str, map: BTreeMap<&str, &str>) -> Result<()> {
    match map.keys().next() {
        Some(k) => Err(bad(spec, &format!("unknown key {k:?}"))),
        None => Ok(()),
    }
}

/// Parses a kernel spec. Numeric parameters are read as exact rationals.
pub fn parse_theta(spec: &str) -> Result<ThetaFunction> {
    let spec = spec.trim();
    let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
    let no_args = |family: Family| {
        if args.is_empty() {
            ThetaFunction::new(family)
        } else {
            Err(bad(spec, "takes no parameters"))
        }
    };
    match name {
        "floor" => no_args(Family::Floor),
        "sqrtfloor" => no_args(Family::SqrtFloor),
        "pw32" => no_args(Family::Pw32),
        "v23" => no_args(Family::V23),
        "pow2" => no_args(Family::Pow2),
        "frac" | "smooth" | "dirac" | "linear" => {
            let mut map = key_values(spec, args)?;
            let family = match name {
                "frac" => Family::Frac {
                    r: take(spec, &mut map, "r")?,
                },
                "smooth" => Family::Smooth {
                    lambda: take(spec, &mut map, "lambda")?,
                },
                "dirac" => Family::Dirac {
                    r: take(spec, &mut map, "r")?,
                },
                _ => Family::Linear {
                    r: take(spec, &mut map, "r")?,
                    s: take(spec, &mut map, "s")?,
                },
            };
            finish(spec, map)?;
            ThetaFunction::new(family)
        }
        "m" => {
            let m: u64 = args
                .trim()
                .strip_prefix("m=")
                .unwrap_or(args.trim())
                .parse()
                .map_err(|_| bad(spec, "m needs an integer, e.g. m:4"))?;
            ThetaFunction::m(m)
        }
        "coeffs" => {
            let kernel = if let Some(path) = args.strip_prefix("file=") {
                CoeffKernel::from_file(Path::new(path))?
            } else {
                let (source, rest) = args.split_once(',').unwrap_or((args, ""));
                let mut map = key_values(spec, rest)?;
                let kernel = match source {
                    "chi4" => CoeffKernel::chi4(),
                    "alt" => CoeffKernel::alternating(),
                    "dh" => CoeffKernel::dh(),
                    "unit" => CoeffKernel::unit(),
                    "tau" => {
                        let h = match map.remove("n") {
                            Some(v) => v.parse().map_err(|_| bad(spec, "n needs an integer"))?,
                            None => TAU_HORIZON,
                        };
                        CoeffKernel::tau(h)?
                    }
                    _ => return Err(bad(spec, "unknown coefficient source")),
                };
                finish(spec, map)?;
                kernel
            };
            ThetaFunction::coeffs(kernel)
        }
        _ => Err(bad(spec, "unknown family")),
    }
}
