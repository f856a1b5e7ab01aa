//! Parsing of command-line values and JSON input files.

use std::path::Path;

use pseudoprob::entanglement::TwoQubitPureState;
use pseudoprob::operator::{HermitianOperator, MatrixJson};
use pseudoprob::qubit::{coplanar120, orthogonal_triple};
use pseudoprob::states::{density_from_bloch, BlochVector, DensityMatrix, Direction};
use pseudoprob::OrderingRecipe;
use serde::Deserialize;

use crate::CliError;

pub fn parse_floats(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("'{t}' is not a number in '{s}'"))))
        .collect()
}

pub fn parse_vec3(s: &str) -> Result<[f64; 3], CliError> {
    let v = parse_floats(s)?;
    <[f64; 3]>::try_from(v).map_err(|_| CliError::Usage(format!("expected three comma-separated numbers, got '{s}'")))
}

/// `weyl`, `unit:k` or `weights:w1,w2,...`.
pub fn parse_recipe(s: &str) -> Result<OrderingRecipe, CliError> {
    let bad = || CliError::Usage(format!("recipe '{s}' is not weyl, unit:K or weights:W1,W2,..."));
    match s.split_once(':') {
        None if s == "weyl" => Ok(OrderingRecipe::Weyl),
        Some(("unit", k)) => k.trim().parse().map(OrderingRecipe::Unit).map_err(|_| bad()),
        Some(("weights", w)) => Ok(OrderingRecipe::Weights(parse_floats(w)?)),
        _ => Err(bad()),
    }
}

/// Direction tokens: `x`, `y`, `z` (optionally prefixed with `-`), a vector
/// `a,b,c`, or a named preset (`coplanar120`, `orthogonal`).
pub fn parse_dirs(tokens: &[String]) -> Result<Vec<Direction>, CliError> {
    let mut out = Vec::new();
    for t in tokens {
        let t = t.trim();
        let (neg, name) = match t.strip_prefix('-') {
            Some(rest) if !rest.starts_with(|c: char| c.is_ascii_digit() || c == '.') => (true, rest),
            _ => (false, t),
        };
        let d = match name {
            "coplanar120" => {
                out.extend(coplanar120());
                continue;
            }
            "orthogonal" => {
                out.extend(orthogonal_triple());
                continue;
            }
            "x" => Direction::x(),
            "y" => Direction::y(),
            "z" => Direction::z(),
            _ => Direction::new(parse_vec3(t)?)?,
        };
        out.push(if neg { -d } else { d });
    }
    Ok(out)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("malformed JSON in {}: {e}", path.display())))
}

#[derive(Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum StateFile {
    Bloch { bloch: [f64; 3] },
    Rho { rho: MatrixJson },
}

pub fn load_state(path: &Path) -> Result<DensityMatrix, CliError> {
    match read_json::<StateFile>(path)? {
        StateFile::Bloch { bloch } => Ok(density_from_bloch(&BlochVector::new(bloch)?)),
        StateFile::Rho { rho } => Ok(DensityMatrix::new(HermitianOperator::new(rho.to_matrix()?)?)?),
    }
}

#[derive(Deserialize)]
struct DirectionFile {
    m: [f64; 3],
}

/// A JSON array of `{"m":[x,y,z]}` objects.
pub fn load_dirs(path: &Path) -> Result<Vec<Direction>, CliError> {
    let dirs: Vec<DirectionFile> = read_json(path)?;
    Ok(dirs.into_iter().map(|d| Direction::new(d.m)).collect::<pseudoprob::Result<_>>()?)
}

#[derive(Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum PureStateFile {
    Amplitudes { amps_re: [f64; 4], amps_im: Option<[f64; 4]> },
    Schmidt { schmidt_alpha: f64 },
}

pub fn load_pure_state(path: &Path, degrees: bool) -> Result<TwoQubitPureState, CliError> {
    match read_json::<PureStateFile>(path)? {
        PureStateFile::Amplitudes { amps_re, amps_im } => {
            Ok(TwoQubitPureState::from_parts(amps_re, amps_im.unwrap_or([0.0; 4]))?)
        }
        PureStateFile::Schmidt { schmidt_alpha } => Ok(TwoQubitPureState::schmidt(angle(schmidt_alpha, degrees))),
    }
}

pub fn angle(x: f64, degrees: bool) -> f64 {
    if degrees {
        x.to_radians()
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recipes() {
        assert_eq!(parse_recipe("weyl").unwrap(), OrderingRecipe::Weyl);
        assert_eq!(parse_recipe("unit:2").unwrap(), OrderingRecipe::Unit(2));
        assert_eq!(parse_recipe("weights:0.5,0.5").unwrap(), OrderingRecipe::Weights(vec![0.5, 0.5]));
        assert!(parse_recipe("unit:-1").is_err());
        assert!(parse_recipe("lexical").is_err());
    }

    #[test]
    fn direction_tokens() {
        let d = parse_dirs(&["z".into(), "-x".into(), "0,3,4".into(), "-0.5,0,0".into()]).unwrap();
        assert_eq!(d[0], Direction::z());
        assert_eq!(d[1], -Direction::x());
        assert!((d[2].as_array()[1] - 0.6).abs() < 1e-15);
        assert_eq!(d[3], -Direction::x());
        assert_eq!(parse_dirs(&["coplanar120".into()]).unwrap().len(), 3);
        assert!(parse_dirs(&["w".into()]).is_err());
    }
}
