//! Scenario files: a chart, its connection, perturbations of the Weyl
//! curvature and the observables to test.

use std::path::Path;

use fedosov_core::{gen, parse_poly, CoordPoly, Geometry, Perturbation, Scalar, SymplecticForm, Tensor2, Variance, WeylCurvatureSpec};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::Error;

/// Order used when neither the file nor the command line sets one.
pub const DEFAULT_ORDER: usize = 4;

const DEFAULT_SCENARIO: &str = include_str!("../../../scenarios/flat_r2_k1.toml");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    id: String,
    order: Option<usize>,
    seed: Option<u64>,
    geometry: GeometryConfig,
    #[serde(default)]
    base_perturbation: Vec<PerturbationConfig>,
    #[serde(default)]
    perturbation: Vec<PerturbationConfig>,
    observables: Option<Observables>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometryConfig {
    dim: usize,
    omega: Option<Vec<Vec<String>>>,
    #[serde(default)]
    gamma: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PerturbationConfig {
    k: u32,
    alpha: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Observables {
    f: String,
    g: String,
    h: Option<String>,
}

/// A validated scenario. `base` carries the geometry and base perturbations,
/// `spec` adds the scenario perturbations on top.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub id: String,
    pub order: usize,
    pub base: WeylCurvatureSpec,
    pub spec: WeylCurvatureSpec,
    pub added: Vec<Perturbation>,
    pub f: CoordPoly,
    pub g: CoordPoly,
    pub h: Option<CoordPoly>,
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self, Error> {
        let file: ScenarioFile = toml::from_str(text)?;
        file.validate()
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(path.display().to_string(), e))?;
        Self::from_toml(&text)
    }

    /// Flat plane with `Ω = ω + ħω`.
    pub fn default_scenario() -> Self {
        Self::from_toml(DEFAULT_SCENARIO).expect("bundled scenario is valid")
    }

    pub fn geometry(&self) -> &Geometry {
        self.spec.geometry()
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }
}

impl ScenarioFile {
    fn validate(self) -> Result<Scenario, Error> {
        let dim = self.geometry.dim;
        let sym = match &self.geometry.omega {
            None => SymplecticForm::standard(dim)?,
            Some(rows) => SymplecticForm::new(dim, scalar_matrix(rows, dim, "omega")?)?,
        };
        let entries = self.geometry.gamma.iter().map(|line| parse_gamma(line, dim)).collect::<Result<Vec<_>, _>>()?;
        let geometry = Geometry::from_sparse(sym, &entries)?;
        let base_list = perturbations(&self.base_perturbation, dim)?;
        let added = perturbations(&self.perturbation, dim)?;
        let base = WeylCurvatureSpec::new(geometry.clone(), base_list.clone())?;
        let spec = WeylCurvatureSpec::new(geometry, base_list.into_iter().chain(added.iter().cloned()).collect())?;
        let (f, g, h) = match &self.observables {
            Some(o) => (parse_poly(&o.f, dim)?, parse_poly(&o.g, dim)?, o.h.as_deref().map(|h| parse_poly(h, dim)).transpose()?),
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed.unwrap_or(0));
                let mut quad = || gen::homogeneous_poly(&mut rng, dim, 2, 3);
                (quad(), quad(), Some(quad()))
            }
        };
        let order = self.order.unwrap_or(DEFAULT_ORDER);
        if order == 0 {
            return Err(Error::Invalid("order must be at least 1".into()));
        }
        Ok(Scenario { id: self.id, order, base, spec, added, f, g, h })
    }
}

fn perturbations(list: &[PerturbationConfig], dim: usize) -> Result<Vec<Perturbation>, Error> {
    list.iter()
        .map(|p| {
            let entries = matrix(&p.alpha, dim, "alpha", |s| parse_poly(s, dim).map_err(Error::from))?;
            let alpha = Tensor2::from_entries(dim, Variance::Covariant, entries)?;
            Ok(Perturbation::new(p.k, alpha)?)
        })
        .collect()
}

fn matrix<T>(rows: &[Vec<String>], dim: usize, what: &str, parse: impl Fn(&str) -> Result<T, Error>) -> Result<Vec<T>, Error> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Invalid(format!("{what} must be a {dim}x{dim} matrix")));
    }
    rows.iter().flatten().map(|s| parse(s)).collect()
}

fn scalar_matrix(rows: &[Vec<String>], dim: usize, what: &str) -> Result<Vec<Scalar>, Error> {
    matrix(rows, dim, what, |s| s.parse::<Scalar>().map_err(Error::from))
}

/// `(i,j,k) -> poly` with 1-based indices.
fn parse_gamma(line: &str, dim: usize) -> Result<((usize, usize, usize), CoordPoly), Error> {
    let bad = || Error::Invalid(format!("gamma entry `{line}` is not `(i,j,k) -> polynomial`"));
    let (idx, poly) = line.split_once("->").ok_or_else(bad)?;
    let idx = idx.trim().strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
    let parts: Vec<usize> = idx.split(',').map(|s| s.trim().parse::<usize>()).collect::<Result<_, _>>().map_err(|_| bad())?;
    let [i, j, k] = parts[..] else { return Err(bad()) };
    if [i, j, k].iter().any(|&m| m == 0 || m > dim) {
        return Err(Error::Invalid(format!("gamma index out of range in `{line}`")));
    }
    Ok(((i - 1, j - 1, k - 1), parse_poly(poly, dim)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_lines() {
        let ((i, j, k), p) = parse_gamma(" (1, 2,2) -> 3/2*x1 ", 2).unwrap();
        assert_eq!((i, j, k), (0, 1, 1));
        assert_eq!(p.to_text(), "3/2*x1");
        assert!(parse_gamma("(1,2) -> x1", 2).is_err());
        assert!(parse_gamma("(1,2,3) -> x1", 2).is_err());
        assert!(parse_gamma("1,2,2 -> x1", 2).is_err());
    }

    #[test]
    fn default_is_flat_plane() {
        let s = Scenario::default_scenario();
        assert_eq!(s.dim(), 2);
        assert!(s.geometry().is_flat());
        assert_eq!(s.added.len(), 1);
    }
}
