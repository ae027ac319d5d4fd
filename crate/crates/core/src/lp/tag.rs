use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Symbolic name of an LP column, printed as e.g. `y[2,5]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VarTag {
    /// Anonymous column.
    Var(usize),
    /// `x[s]`: fraction of set `s` reserved.
    Reserve { set: usize },
    /// `y[A,s]`: reserved set `s` exercised in scenario `A`.
    Exercise { scenario: usize, set: usize },
    /// `z[A,s]`: set `s` bought on recourse in scenario `A`.
    Recourse { scenario: usize, set: usize },
    /// `yd[i]`: single-stage facility opening.
    Open { facility: usize },
    /// `xd[i,j]`: single-stage assignment.
    Connect { facility: usize, client: usize },
    /// `y0[i]`: facility reserved.
    FacilityReserve { facility: usize },
    /// `yk[i,k]`: reserved facility exercised in scenario `k`.
    FacilityExercise { facility: usize, scenario: usize },
    /// `zk[i,k]`: facility bought on recourse in scenario `k`.
    FacilityRecourse { facility: usize, scenario: usize },
    /// `xk[i,j,k]`: client `j` assigned to facility `i` in scenario `k`.
    Assign {
        facility: usize,
        client: usize,
        scenario: usize,
    },
}

impl fmt::Display for VarTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VarTag::Var(i) => write!(f, "v[{i}]"),
            VarTag::Reserve { set } => write!(f, "x[{set}]"),
            VarTag::Exercise { scenario, set } => write!(f, "y[{scenario},{set}]"),
            VarTag::Recourse { scenario, set } => write!(f, "z[{scenario},{set}]"),
            VarTag::Open { facility } => write!(f, "yd[{facility}]"),
            VarTag::Connect { facility, client } => write!(f, "xd[{facility},{client}]"),
            VarTag::FacilityReserve { facility } => write!(f, "y0[{facility}]"),
            VarTag::FacilityExercise { facility, scenario } => {
                write!(f, "yk[{facility},{scenario}]")
            }
            VarTag::FacilityRecourse { facility, scenario } => {
                write!(f, "zk[{facility},{scenario}]")
            }
            VarTag::Assign {
                facility,
                client,
                scenario,
            } => write!(f, "xk[{facility},{client},{scenario}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseTagError(pub String);

impl fmt::Display for ParseTagError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse variable tag {:?}", self.0)
    }
}

impl std::error::Error for ParseTagError {}

impl FromStr for VarTag {
    type Err = ParseTagError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseTagError(s.to_string());
        let (head, rest) = s.split_once('[').ok_or_else(err)?;
        let body = rest.strip_suffix(']').ok_or_else(err)?;
        let idx: Vec<usize> = body
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| err())?;
        let tag = match (head, idx.as_slice()) {
            ("v", &[i]) => VarTag::Var(i),
            ("x", &[set]) => VarTag::Reserve { set },
            ("y", &[scenario, set]) => VarTag::Exercise { scenario, set },
            ("z", &[scenario, set]) => VarTag::Recourse { scenario, set },
            ("yd", &[facility]) => VarTag::Open { facility },
            ("xd", &[facility, client]) => VarTag::Connect { facility, client },
            ("y0", &[facility]) => VarTag::FacilityReserve { facility },
            ("yk", &[facility, scenario]) => VarTag::FacilityExercise { facility, scenario },
            ("zk", &[facility, scenario]) => VarTag::FacilityRecourse { facility, scenario },
            ("xk", &[facility, client, scenario]) => VarTag::Assign {
                facility,
                client,
                scenario,
            },
            _ => return Err(err()),
        };
        Ok(tag)
    }
}
