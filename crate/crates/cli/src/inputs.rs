use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use symq::boolean::HammingSpec;
use symq::qsim::{deutsch_circuit, QueryCircuit};
use symq::types::{all_equal_vs_balanced, collision_function};
use symq::{InputWord, SymmetricFunction, TypeProfile};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{} does not match the expected schema", path.display()))
}

#[derive(Debug, Clone, clap::Args)]
pub struct FuncArgs {
    /// `collision`, `all-equal`, or a function JSON file.
    #[arg(long)]
    pub func: Option<String>,
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// Alphabet size for `collision` (defaults to N).
    #[arg(long = "M")]
    pub m: Option<u32>,
}

impl FuncArgs {
    pub fn load(&self) -> Result<SymmetricFunction> {
        let name = self.func.as_deref().ok_or_else(|| anyhow!("--func is required"))?;
        let need_n = || self.n.ok_or_else(|| anyhow!("--func {name} needs --N"));
        Ok(match name {
            "collision" => {
                let n = need_n()?;
                collision_function(n, self.m.unwrap_or(n as u32))?
            }
            "all-equal" => all_equal_vs_balanced(need_n()?)?,
            path => read_json(Path::new(path))?,
        })
    }
}

/// `"3,2,1"` → the profile (3,2,1).
pub fn parse_profile(s: &str) -> Result<TypeProfile> {
    let parts = parse_list::<usize>(s)?;
    Ok(TypeProfile::new(parts)?)
}

pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<T>().map_err(|e| anyhow!("bad list entry {p:?}: {e}")))
        .collect()
}

/// `"0110"` or `"0,1,1,0"`.
pub fn parse_bits(s: &str) -> Result<Vec<u32>> {
    let bits: Vec<u32> = if s.contains(',') {
        parse_list(s)?
    } else {
        s.chars().map(|c| c.to_digit(10).ok_or_else(|| anyhow!("bad bit {c:?}"))).collect::<Result<_>>()?
    };
    if bits.iter().any(|&b| b > 1) {
        bail!("bits must be 0 or 1, got {s:?}");
    }
    Ok(bits)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BitsFile {
    Bare(Vec<u32>),
    Object { bits: Vec<u32> },
}

pub fn read_bits(path: &Path) -> Result<Vec<u32>> {
    let bits = match read_json::<BitsFile>(path)? {
        BitsFile::Bare(b) | BitsFile::Object { bits: b } => b,
    };
    if bits.iter().any(|&b| b > 1) {
        bail!("{} holds a non-bit entry", path.display());
    }
    Ok(bits)
}

pub fn read_word(path: &Path) -> Result<InputWord> {
    read_json(path)
}

pub fn read_spec(path: &Path) -> Result<HammingSpec> {
    read_json(path)
}

#[derive(Debug, Clone, clap::Args)]
pub struct CircuitArgs {
    /// Circuit JSON file, or `deutsch` for the built-in two-bit circuit.
    #[arg(long)]
    pub circuit: Option<String>,
    /// Haar-random circuit `N,T,W` (needs --seed).
    #[arg(long)]
    pub random: Option<String>,
}

impl CircuitArgs {
    pub fn load(&self, seed: Option<u64>) -> Result<QueryCircuit> {
        match (&self.circuit, &self.random) {
            (Some(_), Some(_)) => bail!("give either --circuit or --random, not both"),
            (Some(c), None) if c == "deutsch" => Ok(deutsch_circuit()),
            (Some(path), None) => read_json(Path::new(path)),
            (None, Some(spec)) => {
                let dims = parse_list::<usize>(spec)?;
                let [n, t, w] = dims[..] else { bail!("--random expects N,T,W, got {spec:?}") };
                if n == 0 || w == 0 {
                    bail!("--random needs N ≥ 1 and W ≥ 1");
                }
                let seed = crate::require_seed(seed)?;
                let mut rng = symq::rng::trial_rng(seed, 0);
                Ok(QueryCircuit::random(n, t, w, &mut rng))
            }
            (None, None) => bail!("--circuit or --random is required"),
        }
    }

    pub fn is_random(&self) -> bool {
        self.random.is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_profiles_and_bits() {
        assert_eq!(parse_profile("3, 2,1").unwrap().parts(), &[3, 2, 1]);
        assert!(parse_profile("1,2").is_err());
        assert_eq!(parse_bits("0110").unwrap(), vec![0, 1, 1, 0]);
        assert_eq!(parse_bits("1,0").unwrap(), vec![1, 0]);
        assert!(parse_bits("012").is_err());
    }

    #[test]
    fn builtin_functions_need_n() {
        let args = FuncArgs { func: Some("collision".into()), n: None, m: None };
        assert!(args.load().is_err());
        let args = FuncArgs { func: Some("all-equal".into()), n: Some(4), m: None };
        assert_eq!(args.load().unwrap().n(), 4);
    }
}
