//! Ion, material and expected-flag registries (TOML, `schema_version = 1`).

use std::collections::BTreeSet;
use std::path::Path;

use serde::Deserialize;

use crate::angular::HalfInt;
use crate::error::{Error, Result};
use crate::material::MaterialConfig;
use crate::shifts::IonSpecies;

pub const SCHEMA_VERSION: u32 = 1;

pub const IONS_TOML: &str = include_str!("../data/ions.toml");
pub const MATERIALS_TOML: &str = include_str!("../data/materials.toml");
pub const EXPECTED_FLAGS_TOML: &str = include_str!("../data/expected_flags.toml");

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IonFile {
    schema_version: u32,
    #[serde(default)]
    ion: Vec<IonRow>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IonRow {
    label: String,
    z: u32,
    i: String,
    mu_over_mun: Option<f64>,
    g_mu: Option<f64>,
    g_n: Option<f64>,
    mass_ratio: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialFile {
    schema_version: u32,
    #[serde(default)]
    medium: Vec<Medium>,
    #[serde(default)]
    config: Vec<ConfigRow>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Medium {
    pub name: String,
    pub eps: f64,
    #[serde(default = "one")]
    pub mu: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigRow {
    name: String,
    eps1: f64,
    #[serde(default = "one")]
    mu1: f64,
    eps2: f64,
    #[serde(default = "one")]
    mu2: f64,
    #[serde(default = "one")]
    theta_over_pi: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FlagFile {
    schema_version: u32,
    ids: Vec<String>,
}

fn one() -> f64 {
    1.0
}

fn check_schema(found: u32, what: &str) -> Result<()> {
    if found != SCHEMA_VERSION {
        return Err(Error::Config(format!(
            "{what}: schema_version {found} is not supported (expected {SCHEMA_VERSION})"
        )));
    }
    Ok(())
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Config(format!("{what}: {e}")))
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, PartialEq)]
pub struct IonRegistry {
    pub ions: Vec<IonSpecies>,
}

impl IonRegistry {
    pub fn parse(text: &str) -> Result<Self> {
        let file: IonFile = parse(text, "ion registry")?;
        check_schema(file.schema_version, "ion registry")?;
        let mut seen = BTreeSet::new();
        let mut ions = Vec::with_capacity(file.ion.len());
        for row in file.ion {
            if !seen.insert(row.label.clone()) {
                return Err(Error::Config(format!("ion registry: duplicate label {}", row.label)));
            }
            let i: HalfInt = row
                .i
                .parse()
                .map_err(|_| Error::Config(format!("ion {}: bad nuclear spin `{}`", row.label, row.i)))?;
            ions.push(IonSpecies::new(
                &row.label,
                row.z,
                i,
                row.mu_over_mun,
                row.g_mu,
                row.g_n,
                row.mass_ratio,
            )?);
        }
        Ok(IonRegistry { ions })
    }

    pub fn builtin() -> Self {
        Self::parse(IONS_TOML).expect("bundled ion registry is valid")
    }

    pub fn labels(&self) -> Vec<&str> {
        self.ions.iter().map(|i| i.label.as_str()).collect()
    }

    pub fn get(&self, label: &str) -> Result<&IonSpecies> {
        self.ions.iter().find(|i| i.label == label).ok_or_else(|| {
            Error::Config(format!(
                "unknown ion `{label}`; available: {}",
                self.labels().join(", ")
            ))
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaterialRegistry {
    pub media: Vec<Medium>,
    pub configs: Vec<(String, MaterialConfig)>,
}

impl MaterialRegistry {
    pub fn parse(text: &str) -> Result<Self> {
        let file: MaterialFile = parse(text, "material registry")?;
        check_schema(file.schema_version, "material registry")?;
        let mut seen = BTreeSet::new();
        for name in file
            .medium
            .iter()
            .map(|m| &m.name)
            .chain(file.config.iter().map(|c| &c.name))
        {
            if name.contains('/') || !seen.insert(name.clone()) {
                return Err(Error::Config(format!(
                    "material registry: bad or duplicate name `{name}`"
                )));
            }
        }
        for m in &file.medium {
            MaterialConfig::new(m.eps, m.mu, m.eps, m.mu, 0.0)
                .map_err(|e| Error::Config(format!("medium {}: {e}", m.name)))?;
        }
        let configs = file
            .config
            .into_iter()
            .map(|r| {
                MaterialConfig::new(r.eps1, r.mu1, r.eps2, r.mu2, r.theta_over_pi)
                    .map(|c| (r.name.clone(), c))
                    .map_err(|e| Error::Config(format!("config {}: {e}", r.name)))
            })
            .collect::<Result<_>>()?;
        Ok(MaterialRegistry {
            media: file.medium,
            configs,
        })
    }

    pub fn builtin() -> Self {
        Self::parse(MATERIALS_TOML).expect("bundled material registry is valid")
    }

    pub fn labels(&self) -> Vec<String> {
        let mut v: Vec<String> = self.configs.iter().map(|(n, _)| n.clone()).collect();
        v.extend(self.media.iter().map(|m| format!("{0}/…, …/{0}", m.name)));
        v
    }

    pub fn medium(&self, name: &str) -> Result<&Medium> {
        self.media
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| self.unknown(name))
    }

    fn unknown(&self, name: &str) -> Error {
        let media: Vec<&str> = self.media.iter().map(|m| m.name.as_str()).collect();
        let configs: Vec<&str> = self.configs.iter().map(|(n, _)| n.as_str()).collect();
        Error::Config(format!(
            "unknown material `{name}`; presets: {}; media for A/B: {}",
            configs.join(", "),
            media.join(", ")
        ))
    }

    /// Resolves a preset name or an "A/B" composition. `theta_over_pi`
    /// overrides the preset default (1 for compositions).
    pub fn resolve(&self, spec: &str, theta_over_pi: Option<f64>) -> Result<MaterialConfig> {
        if let Some((a, b)) = spec.split_once('/') {
            let (m1, m2) = (self.medium(a)?, self.medium(b)?);
            return MaterialConfig::new(m1.eps, m1.mu, m2.eps, m2.mu, theta_over_pi.unwrap_or(1.0));
        }
        let (_, cfg) = self
            .configs
            .iter()
            .find(|(n, _)| n == spec)
            .ok_or_else(|| self.unknown(spec))?;
        Ok(match theta_over_pi {
            Some(t) => cfg.with_theta(t),
            None => *cfg,
        })
    }
}

pub fn parse_expected_flags(text: &str) -> Result<BTreeSet<String>> {
    let file: FlagFile = parse(text, "expected-flag list")?;
    check_schema(file.schema_version, "expected-flag list")?;
    Ok(file.ids.into_iter().collect())
}

pub fn builtin_expected_flags() -> BTreeSet<String> {
    parse_expected_flags(EXPECTED_FLAGS_TOML).expect("bundled expected-flag list is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_parse() {
        let ions = IonRegistry::builtin();
        assert_eq!(ions.get("H").unwrap().g_mu, 5.56);
        assert_eq!(ions.get("In113").unwrap().i, HalfInt::from_twice(9));
        assert!(ions.get("Xx").is_err());
        let mats = MaterialRegistry::builtin();
        let cfg = mats.resolve("vacuum/TlBiSe2", None).unwrap();
        assert_eq!((cfg.eps1, cfg.eps2, cfg.theta_over_pi), (1.0, 4.0, 1.0));
        assert_eq!(mats.resolve("matched", Some(3.0)).unwrap().theta_over_pi, 3.0);
        assert_eq!(builtin_expected_flags().len(), 5);
    }

    #[test]
    fn rejects_schema_and_duplicates() {
        assert!(IonRegistry::parse("schema_version = 2").is_err());
        let dup = "schema_version = 1\n[[ion]]\nlabel='A'\nz=1\ni='1/2'\ng_mu=1.0\n[[ion]]\nlabel='A'\nz=1\ni='1/2'\ng_mu=1.0\n";
        assert!(IonRegistry::parse(dup).is_err());
    }
}
