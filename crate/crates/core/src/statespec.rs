//! Short textual state specifications used by the command line.
//!
//! ```text
//! werner:<d>,<alpha>      werner-theta:<d>,<theta>
//! belldiag:<a+>,<a->,<b+>,<b->
//! alphaV:<d>              maxent:<d>
//! maxmixed:<d1>,<d2>,...  swap-input
//! file:<path>
//! ```
//!
//! A `file:` spec holds a header `dims: d1 d2 ...`, optional `labels:` and
//! `parties:` lines, then the matrix as rows of `re im` pairs.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::clodcc::{parse_matrix, swap_input};
use crate::densop::{DensityOperator, Party, Register, SubsystemLayout};
use crate::ensembles::{alpha_v, bell_diagonal, max_entangled, werner, BellDiagParams, WernerParams};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    Werner(WernerParams),
    BellDiag(BellDiagParams),
    AlphaV(usize),
    MaxEntangled(usize),
    MaxMixed(Vec<usize>),
    SwapInput,
    File(PathBuf),
}

fn numbers<T: FromStr>(body: &str, what: &str) -> Result<Vec<T>> {
    body.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{what}: cannot parse `{}`", t.trim())))
        })
        .collect()
}

fn exactly<T: Copy, const N: usize>(v: Vec<T>, what: &str) -> Result<[T; N]> {
    let n = v.len();
    v.try_into()
        .map_err(|_| Error::Parse(format!("{what}: expected {N} values, got {n}")))
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "swap-input" {
            return Ok(StateSpec::SwapInput);
        }
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("state spec `{s}` has no `kind:` prefix")))?;
        match kind {
            "werner" => {
                let d: usize = body
                    .split(',')
                    .next()
                    .and_then(|t| t.trim().parse().ok())
                    .ok_or_else(|| Error::Parse(format!("werner: bad dimension in `{body}`")))?;
                let [_, a] = exactly::<f64, 2>(numbers(body, "werner")?, "werner")?;
                Ok(StateSpec::Werner(WernerParams::new(d, a)?))
            }
            "werner-theta" => {
                let [d, t] = exactly::<f64, 2>(numbers(body, "werner-theta")?, "werner-theta")?;
                Ok(StateSpec::Werner(WernerParams::from_theta(d as usize, t)?))
            }
            "belldiag" => {
                let w: [f64; 4] = exactly(numbers(body, "belldiag")?, "belldiag")?;
                Ok(StateSpec::BellDiag(BellDiagParams::from_slice(&w)?))
            }
            "alphaV" => {
                let [d] = exactly::<usize, 1>(numbers(body, "alphaV")?, "alphaV")?;
                if d < 2 {
                    return Err(Error::InvalidParameter(format!("alphaV needs d >= 2, got {d}")));
                }
                Ok(StateSpec::AlphaV(d))
            }
            "maxent" => {
                let [d] = exactly::<usize, 1>(numbers(body, "maxent")?, "maxent")?;
                Ok(StateSpec::MaxEntangled(d))
            }
            "maxmixed" => {
                let dims: Vec<usize> = numbers(body, "maxmixed")?;
                if dims.is_empty() || dims.contains(&0) {
                    return Err(Error::Parse(format!("maxmixed: bad dimensions `{body}`")));
                }
                Ok(StateSpec::MaxMixed(dims))
            }
            "file" => Ok(StateSpec::File(PathBuf::from(body))),
            other => Err(Error::Parse(format!("unknown state kind `{other}`"))),
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Werner(p) => write!(f, "werner:{},{}", p.d, p.alpha),
            StateSpec::BellDiag(p) => {
                write!(f, "belldiag:{},{},{},{}", p.a_plus, p.a_minus, p.b_plus, p.b_minus)
            }
            StateSpec::AlphaV(d) => write!(f, "alphaV:{d}"),
            StateSpec::MaxEntangled(d) => write!(f, "maxent:{d}"),
            StateSpec::MaxMixed(dims) => {
                let s: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
                write!(f, "maxmixed:{}", s.join(","))
            }
            StateSpec::SwapInput => write!(f, "swap-input"),
            StateSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl StateSpec {
    /// Builds the density operator. `alphaV:d` has dimension `2d²`.
    pub fn build(&self) -> Result<DensityOperator> {
        match self {
            StateSpec::Werner(p) => Ok(werner(*p)),
            StateSpec::BellDiag(p) => Ok(bell_diagonal(*p)),
            StateSpec::AlphaV(d) => alpha_v(*d),
            StateSpec::MaxEntangled(d) => max_entangled(*d),
            StateSpec::MaxMixed(dims) => Ok(DensityOperator::maximally_mixed(default_layout(dims)?)),
            StateSpec::SwapInput => Ok(swap_input()),
            StateSpec::File(p) => read_state_file(p),
        }
    }

    /// The `d` of an `alphaV` spec, without building the state.
    pub fn alpha_v_dim(&self) -> Option<usize> {
        match self {
            StateSpec::AlphaV(d) => Some(*d),
            _ => None,
        }
    }
}

/// `A, B` for two registers; `A, C1, …, Ck, B` with C in the middle
/// otherwise; `A` alone for one.
pub fn default_layout(dims: &[usize]) -> Result<SubsystemLayout> {
    let n = dims.len();
    let regs = dims
        .iter()
        .enumerate()
        .map(|(i, &d)| match (i, n) {
            (0, _) => Register::new("A", d, Party::A),
            (_, 2) => Register::new("B", d, Party::B),
            (i, n) if i == n - 1 => Register::new("B", d, Party::B),
            (i, _) => Register::new(format!("C{i}"), d, Party::C),
        })
        .collect();
    SubsystemLayout::new(regs)
}

pub fn parse_state_text(text: &str) -> Result<DensityOperator> {
    let mut dims: Option<Vec<usize>> = None;
    let mut labels: Option<Vec<String>> = None;
    let mut parties: Option<Vec<Party>> = None;
    let mut body = String::new();
    for line in text.lines() {
        let t = line.trim();
        if let Some(rest) = t.strip_prefix("dims:") {
            dims = Some(
                rest.split_whitespace()
                    .map(|x| x.parse().map_err(|_| Error::Parse(format!("bad dimension `{x}`"))))
                    .collect::<Result<_>>()?,
            );
        } else if let Some(rest) = t.strip_prefix("labels:") {
            labels = Some(rest.split_whitespace().map(String::from).collect());
        } else if let Some(rest) = t.strip_prefix("parties:") {
            parties = Some(
                rest.split_whitespace()
                    .map(|x| x.parse().map_err(|_| Error::Parse(format!("unknown party `{x}`"))))
                    .collect::<Result<_>>()?,
            );
        } else {
            body.push_str(line);
            body.push('\n');
        }
    }
    let dims = dims.ok_or_else(|| Error::Parse("state file lacks a `dims:` header".into()))?;
    let mut layout = default_layout(&dims)?;
    if labels.is_some() || parties.is_some() {
        let n = dims.len();
        let labels = labels.unwrap_or_else(|| layout.labels().into_iter().map(String::from).collect());
        let parties = parties.unwrap_or_else(|| layout.registers().iter().map(|r| r.party).collect());
        if labels.len() != n || parties.len() != n {
            return Err(Error::Parse(format!("`labels:`/`parties:` must list {n} entries")));
        }
        layout = SubsystemLayout::new(
            dims.iter()
                .zip(labels)
                .zip(parties)
                .map(|((&d, l), p)| Register::new(l, d, p))
                .collect(),
        )?;
    }
    let m = parse_matrix(&body)?;
    if m.rows() != layout.total_dim() {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, dims {:?} need {}",
            m.rows(),
            m.cols(),
            dims,
            layout.total_dim()
        )));
    }
    DensityOperator::new(m, layout)
}

pub fn read_state_file(path: &Path) -> Result<DensityOperator> {
    parse_state_text(&crate::error::read_text(path)?)
}

/// Header plus matrix, readable by [`read_state_file`].
pub fn write_state_text(rho: &DensityOperator) -> String {
    let l = rho.layout();
    let dims: Vec<String> = l.dims().iter().map(|d| d.to_string()).collect();
    let parties: Vec<String> = l.registers().iter().map(|r| r.party.to_string()).collect();
    format!(
        "dims: {}\nlabels: {}\nparties: {}\n{}",
        dims.join(" "),
        l.labels().join(" "),
        parties.join(" "),
        crate::clodcc::write_matrix(rho.matrix())
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        for s in ["werner:2,1", "belldiag:0.25,0.25,0.25,0.25", "alphaV:64", "maxent:3", "maxmixed:2,3", "swap-input"] {
            let spec: StateSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert_eq!("alphaV:64".parse::<StateSpec>().unwrap().alpha_v_dim(), Some(64));
        assert!("werner:2".parse::<StateSpec>().is_err());
        assert!("werner:2,1.5".parse::<StateSpec>().is_err());
        assert!("belldiag:0.5,0.5,0.5,0.5".parse::<StateSpec>().is_err());
        assert!("ghz:3".parse::<StateSpec>().is_err());
        let t: StateSpec = "werner-theta:3,0".parse().unwrap();
        assert_eq!(t, StateSpec::Werner(WernerParams::new(3, 1.0).unwrap()));
    }

    #[test]
    fn state_file_round_trip() {
        let rho = alpha_v(2).unwrap();
        let text = write_state_text(&rho);
        let back = parse_state_text(&text).unwrap();
        assert_eq!(back.layout(), rho.layout());
        assert!(back.matrix().max_abs_diff(rho.matrix()) == 0.0);
        let plain = "dims: 2 2\n0.25 0 0 0 0 0 0 0\n0 0 0.25 0 0 0 0 0\n0 0 0 0 0.25 0 0 0\n0 0 0 0 0 0 0.25 0\n";
        let mm = parse_state_text(plain).unwrap();
        assert_eq!(mm.layout().labels(), vec!["A", "B"]);
        assert!(parse_state_text("0.5 0\n").is_err());
        assert!(parse_state_text("dims: 3\n1 0 0 0\n0 0 1 0\n").is_err());
    }

    #[test]
    fn default_layouts() {
        assert_eq!(default_layout(&[2, 2, 2, 2]).unwrap().labels(), vec!["A", "C1", "C2", "B"]);
        assert_eq!(default_layout(&[4]).unwrap().labels(), vec!["A"]);
    }
}
