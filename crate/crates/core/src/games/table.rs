use std::fmt;

use rayon::prelude::*;
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Coalition, MAX_AGENTS};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameKind {
    /// Worth is a stand-alone cost; core constraints are `y(S) <= C(S)`.
    Cost,
    /// Worth is attainable savings; core constraints are `y(S) >= V(S)`.
    Value,
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GameKind::Cost => "cost",
            GameKind::Value => "value",
        })
    }
}

/// Complete characteristic function: one exact worth per non-empty coalition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameTable {
    kind: GameKind,
    n: usize,
    // indexed by coalition bitmask; entry 0 is the empty coalition (worth 0)
    worth: Vec<Scalar>,
}

impl GameTable {
    /// Evaluates `f` on every non-empty coalition (in parallel).
    pub fn build<F>(kind: GameKind, n: usize, f: F) -> Self
    where
        F: Fn(Coalition) -> Scalar + Sync,
    {
        Self::try_build(kind, n, |c| Ok(f(c))).expect("infallible")
    }

    pub fn try_build<F>(kind: GameKind, n: usize, f: F) -> Result<Self>
    where
        F: Fn(Coalition) -> Result<Scalar> + Sync,
    {
        assert!((1..=MAX_AGENTS).contains(&n));
        let size = 1usize << n;
        let worth = (0..size)
            .into_par_iter()
            .map(|bits| if bits == 0 { Ok(Scalar::zero()) } else { f(Coalition::from_bits(bits as u32)) })
            .collect::<Result<Vec<_>>>()?;
        Ok(GameTable { kind, n, worth })
    }

    /// `worth[bits]` for every bitmask; `worth[0]` must be zero.
    pub fn from_vec(kind: GameKind, n: usize, worth: Vec<Scalar>) -> Result<Self> {
        if n == 0 || n > MAX_AGENTS || worth.len() != 1 << n {
            return Err(Error::Dimension { expected: 1 << n.min(MAX_AGENTS), got: worth.len() });
        }
        if !worth[0].is_zero() {
            return Err(Error::InvalidProblem("the empty coalition must have worth 0".into()));
        }
        Ok(GameTable { kind, n, worth })
    }

    pub fn kind(&self) -> GameKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grand(&self) -> Coalition {
        Coalition::grand(self.n)
    }

    pub fn worth(&self, coalition: Coalition) -> &Scalar {
        &self.worth[coalition.bits() as usize]
    }

    pub fn grand_worth(&self) -> &Scalar {
        self.worth(self.grand())
    }

    /// Non-empty coalitions with their worth, in bitmask order.
    pub fn iter(&self) -> impl Iterator<Item = (Coalition, &Scalar)> {
        self.worth.iter().enumerate().skip(1).map(|(bits, w)| (Coalition::from_bits(bits as u32), w))
    }

    /// Same worths, kind flipped and sign negated: a value game as a cost game.
    pub fn negated(&self) -> GameTable {
        GameTable {
            kind: match self.kind {
                GameKind::Cost => GameKind::Value,
                GameKind::Value => GameKind::Cost,
            },
            n: self.n,
            worth: self.worth.iter().map(|w| -w).collect(),
        }
    }

    /// Pairs `(S, T)` of disjoint non-empty coalitions violating subadditivity
    /// `C(S ∪ T) <= C(S) + C(T)` (cost games) or superadditivity (value games).
    pub fn additivity_violation(&self) -> Option<(Coalition, Coalition)> {
        for (s, ws) in self.iter() {
            let rest = s.complement(self.n);
            for t in rest.subsets().filter(|t| !t.is_empty() && s < *t) {
                let joint = self.worth(s.union(t));
                let split = ws + self.worth(t);
                let ok = match self.kind {
                    GameKind::Cost => *joint <= split,
                    GameKind::Value => *joint >= split,
                };
                if !ok {
                    return Some((s, t));
                }
            }
        }
        None
    }
}

impl Serialize for GameTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Worths<'a>(&'a GameTable);
        impl Serialize for Worths<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.worth.len() - 1))?;
                for (c, w) in self.0.iter() {
                    map.serialize_entry(&c.to_string(), w)?;
                }
                map.end()
            }
        }
        let mut s = serializer.serialize_struct("GameTable", 3)?;
        s.serialize_field("kind", &self.kind)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("worth", &Worths(self))?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for GameTable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct Entries(Vec<(Coalition, Scalar)>);
        impl<'de> Deserialize<'de> for Entries {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                struct V;
                impl<'de> Visitor<'de> for V {
                    type Value = Entries;
                    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                        f.write_str("a map from coalitions to worths")
                    }
                    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Entries, A::Error> {
                        let mut out = Vec::new();
                        while let Some((k, v)) = map.next_entry::<String, Scalar>()? {
                            let c: Coalition = k.parse().map_err(de::Error::custom)?;
                            out.push((c, v));
                        }
                        Ok(Entries(out))
                    }
                }
                d.deserialize_map(V)
            }
        }

        #[derive(Deserialize)]
        struct Raw {
            kind: GameKind,
            n: usize,
            worth: Entries,
        }

        let raw = Raw::deserialize(deserializer)?;
        if raw.n == 0 || raw.n > MAX_AGENTS {
            return Err(de::Error::custom(format!("unsupported agent count {}", raw.n)));
        }
        let size = 1usize << raw.n;
        let mut worth: Vec<Option<Scalar>> = vec![None; size];
        worth[0] = Some(Scalar::zero());
        for (c, w) in raw.worth.0 {
            let idx = c.bits() as usize;
            if idx == 0 || idx >= size {
                return Err(de::Error::custom(format!("coalition {{{c}}} outside 1..={}", raw.n)));
            }
            if worth[idx].replace(w).is_some() {
                return Err(de::Error::custom(format!("duplicate coalition {{{c}}}")));
            }
        }
        let worth = worth
            .into_iter()
            .enumerate()
            .map(|(bits, w)| {
                w.ok_or_else(|| {
                    de::Error::custom(format!("missing coalition {{{}}}", Coalition::from_bits(bits as u32)))
                })
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(GameTable { kind: raw.kind, n: raw.n, worth })
    }
}
