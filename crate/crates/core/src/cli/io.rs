//! Input files: systems, polynomials, delta lists, polytopes and zero sets.

use std::path::Path;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::newton::{newton_polytope, LatticePolytope, PolytopeJson};
use crate::poly::parse::{parse, ModeJson, PolyJson};
use crate::poly::{parse_rational, Mode, MultiPoly, PolySystem};
use crate::zeros::{ZeroSet, ZeroSetJson};

/// A polynomial given either in the text grammar or as term JSON.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum PolySpec {
    Text(String),
    Json(PolyJson),
}

impl PolySpec {
    pub fn to_poly(&self, nvars: usize, mode: Mode) -> Result<MultiPoly> {
        let p = match self {
            PolySpec::Text(t) => parse(t, nvars, mode)?,
            PolySpec::Json(j) => j.to_poly()?,
        };
        if p.nvars() != nvars {
            return Err(Error::NvarsMismatch { left: nvars, right: p.nvars() });
        }
        Ok(if mode == Mode::Laurent { p.to_laurent() } else { p })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SystemFile {
    pub nvars: usize,
    pub mode: ModeJson,
    pub equations: Vec<PolySpec>,
}

impl SystemFile {
    pub fn mode(&self) -> Mode {
        match self.mode {
            ModeJson::Ordinary => Mode::Ordinary,
            ModeJson::Laurent => Mode::Laurent,
        }
    }

    pub fn to_system(&self) -> Result<PolySystem> {
        let mode = self.mode();
        let eqs = self
            .equations
            .iter()
            .map(|e| e.to_poly(self.nvars, mode))
            .collect::<Result<Vec<_>>>()?;
        PolySystem::new(eqs)
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(e.to_string()))
}

fn json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::Input(e.to_string()))
}

pub fn load_system(path: &Path) -> Result<PolySystem> {
    json::<SystemFile>(path)?.to_system()
}

/// A numerator file: a bare JSON string, a term-JSON object, or plain text.
pub fn load_poly(path: &Path, nvars: usize, mode: Mode) -> Result<MultiPoly> {
    let text = read(path)?;
    let spec = match serde_json::from_str::<PolySpec>(&text) {
        Ok(s) => s,
        Err(_) => PolySpec::Text(text.trim().to_string()),
    };
    spec.to_poly(nvars, mode)
}

pub fn load_zeros(path: &Path, sys: &PolySystem) -> Result<ZeroSet> {
    ZeroSet::from_json(&json::<ZeroSetJson>(path)?, sys)
}

pub fn load_polytopes(path: &Path) -> Result<Vec<LatticePolytope>> {
    json::<Vec<PolytopeJson>>(path)?.iter().map(|p| p.to_polytope()).collect()
}

pub fn parse_rationals(text: &str) -> Result<Vec<BigRational>> {
    text.split(',')
        .map(|s| parse_rational(s.trim()).ok_or_else(|| Error::Input(format!("not a rational: '{s}'"))))
        .collect()
}

pub fn parse_naturals(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|_| Error::Input(format!("not a natural number: '{s}'"))))
        .collect()
}

pub fn newton_polytopes(sys: &PolySystem) -> Result<Vec<LatticePolytope>> {
    sys.equations().iter().map(newton_polytope).collect()
}
