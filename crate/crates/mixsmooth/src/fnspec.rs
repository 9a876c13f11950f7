//! Function-spec JSON: explicit coefficient lists or a named lacunary family.
//!
//! ```json
//! { "m": 1, "K": 8, "terms": [ { "n": [3], "re": 0.5, "im": 0.0 } ] }
//! { "m": 1, "K": 12, "family": { "id": "f1", "axis": 0, "delta": 0.8, "alpha": [1.0], "p": 2.0 } }
//! ```
//!
//! Listed terms are completed to a Hermitian tensor: `a_{-n}` becomes the
//! conjugate of `a_n` unless `-n` is listed too, in which case the two must
//! agree.

use std::collections::HashMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use mixsmooth_core::counterexamples::{build, Family, LacunaryFamilySpec};
use mixsmooth_core::{Complex64, GridSpec, SpectralRep};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FnSpecFile {
    pub m: usize,
    #[serde(rename = "K")]
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<Term>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyJson>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub n: Vec<i64>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    pub id: String,
    #[serde(default)]
    pub axis: usize,
    pub delta: f64,
    #[serde(default)]
    pub t: f64,
    pub alpha: Vec<f64>,
    #[serde(default)]
    pub b: Option<Vec<f64>>,
    #[serde(default)]
    pub xi: Option<Vec<f64>>,
    pub p: f64,
    #[serde(default)]
    pub s_max: Option<u32>,
}

/// A loaded function together with the file contents it came from.
#[derive(Debug, Clone)]
pub struct LoadedFn {
    pub file: FnSpecFile,
    pub rep: SpectralRep,
}

pub fn parse_fnspec(text: &str) -> Result<FnSpecFile> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| anyhow!("invalid function spec at `{}`: {}", e.path(), e.inner()))
}

pub fn load_fn(path: &Path) -> Result<LoadedFn> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file = parse_fnspec(&text)?;
    let rep = instantiate(&file)?;
    Ok(LoadedFn { file, rep })
}

pub fn instantiate(file: &FnSpecFile) -> Result<SpectralRep> {
    let grid = GridSpec::new(file.m, file.k).map_err(|e| anyhow!("invalid function spec at `m`/`K`: {e}"))?;
    match (&file.terms, &file.family) {
        (Some(terms), None) => from_terms(grid, terms),
        (None, Some(fam)) => from_family(grid, fam),
        _ => bail!("invalid function spec: exactly one of `terms` and `family` is required"),
    }
}

fn from_terms(grid: GridSpec, terms: &[Term]) -> Result<SpectralRep> {
    let mut rep = SpectralRep::zeros(grid);
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    let band = grid.band();
    for (i, t) in terms.iter().enumerate() {
        let at = |field: &str| format!("invalid function spec at `terms[{i}].{field}`");
        if t.n.len() != grid.dim() {
            bail!("{}: expected {} indices, got {}", at("n"), grid.dim(), t.n.len());
        }
        if let Some(k) = t.n.iter().find(|&&k| k <= -band || k >= band) {
            bail!("{}: frequency {k} is outside the band |n_j| < {band}", at("n"));
        }
        if !t.re.is_finite() || !t.im.is_finite() {
            bail!("{}: coefficient must be finite", at("re"));
        }
        let c = Complex64::new(t.re, t.im);
        let neg: Vec<i64> = t.n.iter().map(|k| -k).collect();
        if seen.contains_key(&t.n) {
            bail!("{}: index {:?} listed twice", at("n"), t.n);
        }
        if neg == t.n && t.im != 0.0 {
            bail!("{}: self-conjugate index {:?} needs a real coefficient", at("im"), t.n);
        }
        if let Some(&j) = seen.get(&neg) {
            let other = rep.coeff(&t.n).map_err(|e| anyhow!("{}: {e}", at("n")))?;
            if (other - c).norm() > 1e-12 * c.norm().max(1.0) {
                bail!("{}: conflicts with the conjugate of terms[{j}]", at("re"));
            }
        }
        rep.set_hermitian(&t.n, c).map_err(|e| anyhow!("{}: {e}", at("n")))?;
        seen.insert(t.n.clone(), i);
    }
    Ok(rep)
}

fn from_family(grid: GridSpec, fam: &FamilyJson) -> Result<SpectralRep> {
    let family: Family = fam.id.parse().map_err(|e| anyhow!("invalid function spec at `family.id`: {e}"))?;
    let m = fam.alpha.len();
    let spec = LacunaryFamilySpec {
        family,
        axis: fam.axis,
        delta: fam.delta,
        t_aux: fam.t,
        alpha: fam.alpha.clone(),
        b: fam.b.clone().unwrap_or_else(|| vec![0.0; m]),
        xi: fam.xi.clone().unwrap_or_else(|| vec![0.0; m]),
        p: fam.p,
        s_max: fam.s_max,
    };
    build(&spec, grid).map_err(|e| anyhow!("invalid function spec at `family`: {e}"))
}
