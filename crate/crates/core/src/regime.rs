//! Death-probability laws.
//!
//! A [`MortalityRegime`] assigns the per-individual death probability used
//! when the population currently holds `k` individuals having started from
//! `n`. The JSON form is a tagged union:
//!
//! ```json
//! {"type":"constant","c":0.3}
//! {"type":"initial_power","a":1.0,"gamma":3.0}
//! {"type":"state_power","a":1.0,"gamma":3.0}
//! {"type":"joint_power","alpha":1.0,"beta":4.0}
//! {"type":"table","values":[{"k":1,"n":1,"c":1.0}]}
//! ```
//!
//! The power families are concrete instantiations of the sequence
//! hypotheses they stand for: `state_power` with `gamma > 2` is one family
//! with `sum k c_k < infinity`, and `initial_power` with `gamma >= 2` keeps
//! `n^2 c_n` bounded. Any other sequence can be supplied through `table`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RegimeRepr", into = "RegimeRepr")]
pub enum MortalityRegime {
    /// `c` for every `(k, n)`; requires `0 < c < 1`.
    Constant { c: f64 },
    /// `c_n = a * n^(-gamma)`, independent of the current state.
    InitialPower { a: f64, gamma: f64 },
    /// `c_k = a * k^(-gamma)`, independent of the initial state.
    StatePower { a: f64, gamma: f64 },
    /// `c_{k,n} = k^alpha / n^beta` with `beta >= alpha`.
    JointPower { alpha: f64, beta: f64 },
    /// Explicit `(k, n) -> c` entries; the only way to get `c = 1` for every `k`.
    Table(MortalityTable),
}

impl MortalityRegime {
    pub fn constant(c: f64) -> Result<Self> {
        let r = MortalityRegime::Constant { c };
        r.validate()?;
        Ok(r)
    }

    pub fn initial_power(a: f64, gamma: f64) -> Result<Self> {
        let r = MortalityRegime::InitialPower { a, gamma };
        r.validate()?;
        Ok(r)
    }

    pub fn state_power(a: f64, gamma: f64) -> Result<Self> {
        let r = MortalityRegime::StatePower { a, gamma };
        r.validate()?;
        Ok(r)
    }

    pub fn joint_power(alpha: f64, beta: f64) -> Result<Self> {
        let r = MortalityRegime::JointPower { alpha, beta };
        r.validate()?;
        Ok(r)
    }

    pub fn table<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((u64, u64), f64)>,
    {
        let entries: Vec<TableEntry> = entries
            .into_iter()
            .map(|((k, n), c)| TableEntry { k, n, c })
            .collect();
        Ok(MortalityRegime::Table(MortalityTable::try_from(entries)?))
    }

    /// Checks the parameter invariants of the variant.
    pub fn validate(&self) -> Result<()> {
        match *self {
            MortalityRegime::Constant { c } => {
                if !(c > 0.0 && c < 1.0) {
                    return Err(Error::Probability {
                        name: "c",
                        value: c,
                        range: "(0, 1)",
                    });
                }
            }
            MortalityRegime::InitialPower { a, gamma } | MortalityRegime::StatePower { a, gamma } => {
                positive("a", a)?;
                positive("gamma", gamma)?;
            }
            MortalityRegime::JointPower { alpha, beta } => {
                positive("alpha", alpha)?;
                positive("beta", beta)?;
                if beta < alpha {
                    return Err(Error::Domain(format!(
                        "joint_power needs beta >= alpha so that c_(k,n) <= 1, got alpha = {alpha}, beta = {beta}"
                    )));
                }
            }
            MortalityRegime::Table(_) => {}
        }
        Ok(())
    }

    /// Death probability applied to each individual at current state `k`
    /// of a process started from `n`.
    pub fn mortality(&self, k: u64, n: u64) -> Result<f64> {
        if k == 0 || k > n {
            return Err(Error::StateRange { k, n });
        }
        let c = match *self {
            MortalityRegime::Constant { c } => c,
            MortalityRegime::InitialPower { a, gamma } => a * (n as f64).powf(-gamma),
            MortalityRegime::StatePower { a, gamma } => a * (k as f64).powf(-gamma),
            MortalityRegime::JointPower { alpha, beta } => {
                if k == n {
                    (n as f64).powf(alpha - beta)
                } else {
                    (k as f64).powf(alpha) / (n as f64).powf(beta)
                }
            }
            MortalityRegime::Table(ref t) => t.get(k, n)?,
        };
        if c > 0.0 && c <= 1.0 {
            Ok(c)
        } else {
            Err(Error::Probability {
                name: "mortality",
                value: c,
                range: "(0, 1]",
            })
        }
    }

    /// True when the death probability never depends on the current state.
    pub fn is_state_free(&self) -> bool {
        matches!(
            self,
            MortalityRegime::Constant { .. } | MortalityRegime::InitialPower { .. }
        )
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

impl fmt::Display for MortalityRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MortalityRegime::Constant { c } => write!(f, "constant:{c}"),
            MortalityRegime::InitialPower { a, gamma } => write!(f, "initial-power:{a}:{gamma}"),
            MortalityRegime::StatePower { a, gamma } => write!(f, "state-power:{a}:{gamma}"),
            MortalityRegime::JointPower { alpha, beta } => write!(f, "joint-power:{alpha}:{beta}"),
            MortalityRegime::Table(t) => write!(f, "table[{} entries]", t.len()),
        }
    }
}

/// Parses either the inline form (`constant:0.3`, `initial-power:A:GAMMA`,
/// `state-power:A:GAMMA`, `joint-power:ALPHA:BETA`) or a JSON object.
impl FromStr for MortalityRegime {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| format!("invalid regime JSON: {e}"));
        }
        let mut parts = s.split(':');
        let kind = parts.next().unwrap_or_default().replace('_', "-");
        let nums: Vec<f64> = parts
            .map(|p| p.parse::<f64>().map_err(|e| format!("bad number {p:?}: {e}")))
            .collect::<std::result::Result<_, _>>()?;
        let arity = |want: usize| {
            if nums.len() == want {
                Ok(())
            } else {
                Err(format!(
                    "regime {kind:?} takes {want} parameter(s), got {}",
                    nums.len()
                ))
            }
        };
        let regime = match kind.as_str() {
            "constant" => {
                arity(1)?;
                MortalityRegime::constant(nums[0])
            }
            "initial-power" => {
                arity(2)?;
                MortalityRegime::initial_power(nums[0], nums[1])
            }
            "state-power" => {
                arity(2)?;
                MortalityRegime::state_power(nums[0], nums[1])
            }
            "joint-power" => {
                arity(2)?;
                MortalityRegime::joint_power(nums[0], nums[1])
            }
            other => return Err(format!("unknown regime kind {other:?}")),
        };
        regime.map_err(|e| e.to_string())
    }
}

/// Explicit `(k, n) -> c` map with every entry in `(0, 1]`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MortalityTable(BTreeMap<(u64, u64), f64>);

impl MortalityTable {
    pub fn get(&self, k: u64, n: u64) -> Result<f64> {
        self.0.get(&(k, n)).copied().ok_or(Error::TableMiss { k, n })
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub k: u64,
    pub n: u64,
    pub c: f64,
}

impl TryFrom<Vec<TableEntry>> for MortalityTable {
    type Error = Error;

    fn try_from(entries: Vec<TableEntry>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for TableEntry { k, n, c } in entries {
            if k == 0 || k > n {
                return Err(Error::StateRange { k, n });
            }
            if !(c > 0.0 && c <= 1.0) {
                return Err(Error::Probability {
                    name: "table entry c",
                    value: c,
                    range: "(0, 1]",
                });
            }
            if map.insert((k, n), c).is_some() {
                return Err(Error::Domain(format!("duplicate table entry k = {k}, n = {n}")));
            }
        }
        Ok(MortalityTable(map))
    }
}

impl From<MortalityTable> for Vec<TableEntry> {
    fn from(t: MortalityTable) -> Self {
        t.0.into_iter()
            .map(|((k, n), c)| TableEntry { k, n, c })
            .collect()
    }
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum RegimeRepr {
    Constant { c: f64 },
    InitialPower { a: f64, gamma: f64 },
    StatePower { a: f64, gamma: f64 },
    JointPower { alpha: f64, beta: f64 },
    Table { values: Vec<TableEntry> },
}

impl TryFrom<RegimeRepr> for MortalityRegime {
    type Error = Error;

    fn try_from(r: RegimeRepr) -> Result<Self> {
        let regime = match r {
            RegimeRepr::Constant { c } => MortalityRegime::Constant { c },
            RegimeRepr::InitialPower { a, gamma } => MortalityRegime::InitialPower { a, gamma },
            RegimeRepr::StatePower { a, gamma } => MortalityRegime::StatePower { a, gamma },
            RegimeRepr::JointPower { alpha, beta } => MortalityRegime::JointPower { alpha, beta },
            RegimeRepr::Table { values } => MortalityRegime::Table(MortalityTable::try_from(values)?),
        };
        regime.validate()?;
        Ok(regime)
    }
}

impl From<MortalityRegime> for RegimeRepr {
    fn from(r: MortalityRegime) -> Self {
        match r {
            MortalityRegime::Constant { c } => RegimeRepr::Constant { c },
            MortalityRegime::InitialPower { a, gamma } => RegimeRepr::InitialPower { a, gamma },
            MortalityRegime::StatePower { a, gamma } => RegimeRepr::StatePower { a, gamma },
            MortalityRegime::JointPower { alpha, beta } => RegimeRepr::JointPower { alpha, beta },
            MortalityRegime::Table(t) => RegimeRepr::Table { values: t.into() },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constant_value() {
        let r = MortalityRegime::constant(0.3).unwrap();
        assert_eq!(r.mortality(5, 10).unwrap(), 0.3);
    }

    #[test]
    fn joint_power_value() {
        let r = MortalityRegime::joint_power(1.0, 4.0).unwrap();
        let c = r.mortality(2, 10).unwrap();
        assert!((c - 2e-4).abs() < 1e-18, "{c}");
    }

    #[test]
    fn initial_power_value() {
        let r = MortalityRegime::initial_power(1.0, 3.0).unwrap();
        let c = r.mortality(7, 10).unwrap();
        assert!((c - 1e-3).abs() < 1e-18, "{c}");
    }

    #[test]
    fn joint_power_diagonal_is_n_to_alpha_minus_beta() {
        let r = MortalityRegime::joint_power(1.5, 4.0).unwrap();
        for n in [1u64, 2, 7, 100] {
            assert_eq!(r.mortality(n, n).unwrap(), (n as f64).powf(-2.5));
        }
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(MortalityRegime::constant(0.0).is_err());
        assert!(MortalityRegime::constant(1.0).is_err());
        assert!(MortalityRegime::constant(f64::NAN).is_err());
        assert!(MortalityRegime::joint_power(2.0, 1.0).is_err());
        assert!(MortalityRegime::initial_power(0.0, 1.0).is_err());
        assert!(MortalityRegime::state_power(1.0, -1.0).is_err());
    }

    #[test]
    fn out_of_range_states_rejected() {
        let r = MortalityRegime::constant(0.5).unwrap();
        assert_eq!(r.mortality(0, 3), Err(Error::StateRange { k: 0, n: 3 }));
        assert_eq!(r.mortality(4, 3), Err(Error::StateRange { k: 4, n: 3 }));
    }

    #[test]
    fn evaluated_value_above_one_rejected() {
        // a / n^gamma = 2 at n = 1.
        let r = MortalityRegime::initial_power(2.0, 1.0).unwrap();
        assert!(r.mortality(1, 1).is_err());
        assert!(r.mortality(1, 4).is_ok());
    }

    #[test]
    fn table_lookup_and_miss() {
        let r = MortalityRegime::table([((1, 1), 1.0), ((1, 2), 0.25)]).unwrap();
        assert_eq!(r.mortality(1, 1).unwrap(), 1.0);
        assert_eq!(r.mortality(2, 2), Err(Error::TableMiss { k: 2, n: 2 }));
        assert!(MortalityRegime::table([((1, 1), 0.0)]).is_err());
        assert!(MortalityRegime::table([((2, 1), 0.5)]).is_err());
    }

    #[test]
    fn json_tagged_union() {
        let r: MortalityRegime = serde_json::from_str(r#"{"type":"constant","c":0.3}"#).unwrap();
        assert_eq!(r, MortalityRegime::Constant { c: 0.3 });
        let r: MortalityRegime =
            serde_json::from_str(r#"{"type":"table","values":[{"k":1,"n":1,"c":1.0}]}"#).unwrap();
        assert_eq!(r.mortality(1, 1).unwrap(), 1.0);
        assert_eq!(
            serde_json::to_string(&MortalityRegime::JointPower {
                alpha: 1.0,
                beta: 4.0
            })
            .unwrap(),
            r#"{"type":"joint_power","alpha":1.0,"beta":4.0}"#
        );
    }

    #[test]
    fn json_rejects_unknown_and_invalid() {
        let unknown = serde_json::from_str::<MortalityRegime>(r#"{"type":"constant","c":0.3,"d":1}"#);
        assert!(unknown.unwrap_err().to_string().contains("unknown field"));
        assert!(serde_json::from_str::<MortalityRegime>(r#"{"type":"constant","c":1.3}"#).is_err());
        assert!(serde_json::from_str::<MortalityRegime>(r#"{"type":"nope"}"#).is_err());
    }

    #[test]
    fn inline_forms() {
        assert_eq!(
            "constant:0.5".parse::<MortalityRegime>().unwrap(),
            MortalityRegime::Constant { c: 0.5 }
        );
        assert_eq!(
            "joint_power:1:4".parse::<MortalityRegime>().unwrap(),
            MortalityRegime::JointPower {
                alpha: 1.0,
                beta: 4.0
            }
        );
        assert!("constant".parse::<MortalityRegime>().is_err());
        assert!("constant:2".parse::<MortalityRegime>().is_err());
        assert!("weird:1".parse::<MortalityRegime>().is_err());
        assert!(r#"{"type":"state_power","a":1,"gamma":3}"#.parse::<MortalityRegime>().is_ok());
    }

    fn regime_strategy() -> impl Strategy<Value = MortalityRegime> {
        let pos = 1e-6f64..50.0;
        prop_oneof![
            (1e-9f64..0.999_999).prop_map(|c| MortalityRegime::Constant { c }),
            (pos.clone(), pos.clone()).prop_map(|(a, gamma)| MortalityRegime::InitialPower { a, gamma }),
            (pos.clone(), pos.clone()).prop_map(|(a, gamma)| MortalityRegime::StatePower { a, gamma }),
            (pos.clone(), pos).prop_map(|(x, y)| MortalityRegime::JointPower {
                alpha: x.min(y),
                beta: x.max(y)
            }),
        ]
    }

    proptest! {
        #[test]
        fn json_round_trip_is_bit_exact(r in regime_strategy()) {
            let text = serde_json::to_string(&r).unwrap();
            let back: MortalityRegime = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(&back, &r);
            prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
        }

        #[test]
        fn argument_independence(c in 1e-6f64..0.999, a in 0.01f64..1.0, gamma in 0.1f64..4.0,
                                 k1 in 1u64..50, k2 in 1u64..50, extra in 0u64..50) {
            let n = k1.max(k2) + extra;
            let constant = MortalityRegime::Constant { c };
            prop_assert_eq!(constant.mortality(k1, n).unwrap(), constant.mortality(k2, n).unwrap());
            prop_assert_eq!(constant.mortality(k1, n).unwrap(), constant.mortality(k1, n + 7).unwrap());
            let initial = MortalityRegime::InitialPower { a, gamma };
            prop_assert_eq!(initial.mortality(k1, n).unwrap(), initial.mortality(k2, n).unwrap());
            let state = MortalityRegime::StatePower { a, gamma };
            prop_assert_eq!(state.mortality(k1, n).unwrap(), state.mortality(k1, n + 11).unwrap());
        }
    }
}
