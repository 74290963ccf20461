use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Instance {
    Boolean,
    Prob,
    Quantum,
}

impl Instance {
    pub const ALL: [Instance; 3] = [Instance::Boolean, Instance::Prob, Instance::Quantum];

    pub fn name(self) -> &'static str {
        match self {
            Instance::Boolean => "boolean",
            Instance::Prob => "prob",
            Instance::Quantum => "quantum",
        }
    }
}

impl std::fmt::Display for Instance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Instance {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "boolean" => Ok(Instance::Boolean),
            "prob" => Ok(Instance::Prob),
            "quantum" => Ok(Instance::Quantum),
            other => Err(Error::Parse(format!("unknown instance `{other}`"))),
        }
    }
}

/// A registered suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteInfo {
    pub name: &'static str,
    pub anchor: &'static str,
    pub instances: &'static [Instance],
    /// Falsification probes report `inconclusive` when no witness turns up.
    pub probe: bool,
}

const ALL: &[Instance] = &Instance::ALL;

const fn law(name: &'static str, anchor: &'static str) -> SuiteInfo {
    SuiteInfo {
        name,
        anchor,
        instances: ALL,
        probe: false,
    }
}

const fn only(name: &'static str, anchor: &'static str, instances: &'static [Instance]) -> SuiteInfo {
    SuiteInfo {
        name,
        anchor,
        instances,
        probe: false,
    }
}

pub const SUITES: &[SuiteInfo] = &[
    law("pcm-laws", "Def. 4.1, \"abbreviated as PCM\""),
    law("effect-algebra", "Def. 4.4, \"is the unique element with\""),
    law("effect-module", "Def. 4.8, \"with a scalar multiplication\""),
    law("pred-functor", "Thm. 4.11, \"preserves finite coproducts and the\""),
    law("kerbot-reflect", "Lemma 6.6, \"preserves and reflects both\""),
    law("zero-total", "Lemma 3.5, \"be a partial map in an effectus\""),
    law("joint-monic", "Lemma 3.3, \"partial projection maps\""),
    law("pairing", "Lemma 3.4, \"determines a unique total map\""),
    law("homset-order", "Prop. 6.8, \"is thus monotone\""),
    law("image-laws", "Lemma 6.13, \"in an effectus with images\""),
    law("galois", "Thm. 5.4, \"the following Galois correspondence\""),
    law("normalize", "Lemma 6.10, \"non-zero substates can be normalised\""),
    law("bayes", "Example 8.5, \"abstract version of Bayes' rule\""),
    law("total-prob", "Example 8.5, \"the rule of belief propagation\""),
    law("assert-iso", "Def. 8.1, \"write the inverse as\""),
    law("instrument-sef", "Lemma 8.3(6), \"The instrument map\""),
    only(
        "boolean-laws",
        "Lemma 8.4, \"is the meet/conjunction\"; Prop. 8.6, \"all predicates are sharp\"",
        &[Instance::Boolean],
    ),
    law("comprehension", "Example 7.2, \"holds with certainty\""),
    law("quotient", "Example 9.2, \"we take as quotient\"; Lemma 9.3(5)"),
    law("decompose", "Lemma 9.3(8), \"can be decomposed in the subcategory\""),
    law("theta-sharp", "Lemma 12.1, \"then p is sharp\""),
    law("floor-ceil", "Prop. 12.4(1), \"greatest sharp predicate below\""),
    law("sharp-omlattice", "Prop. 12.4(6), \"are orthomodular lattices\""),
    law("telos-postulates", "Postulate 10.2, \"there is an assert map\""),
    law("duality", "Postulate 10.5, \"a state that is also a comprehension map\""),
    SuiteInfo {
        name: "duality-perturbed",
        anchor: "Thm. 10.9, \"for every von Neumann algebra\"",
        instances: &[Instance::Quantum],
        probe: true,
    },
    only("first-iso", "Remark 12.3, \"which is not an isomorphism\"", &[Instance::Prob]),
    only("copier", "Thm. copier, \"with copiers is commutative\"", &[Instance::Prob]),
];

/// Suites by name, rejecting duplicates.
#[derive(Debug, Clone)]
pub struct Registry {
    by_name: BTreeMap<&'static str, SuiteInfo>,
    order: Vec<&'static str>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry {
            by_name: BTreeMap::new(),
            order: Vec::new(),
        }
    }

    pub fn standard() -> Self {
        let mut r = Self::empty();
        for s in SUITES {
            r.register(*s).expect("the standard suites have distinct names");
        }
        r
    }

    pub fn register(&mut self, info: SuiteInfo) -> Result<()> {
        if self.by_name.contains_key(info.name) {
            return Err(Error::DuplicateSuite(info.name.to_string()));
        }
        self.by_name.insert(info.name, info);
        self.order.push(info.name);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&SuiteInfo> {
        self.by_name
            .get(name)
            .ok_or_else(|| Error::UnknownSuite(name.to_string()))
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Suites in registration order.
    pub fn iter(&self) -> impl Iterator<Item = &SuiteInfo> {
        self.order.iter().map(|n| &self.by_name[n])
    }

    pub fn applicable(&self, instance: Instance) -> impl Iterator<Item = &SuiteInfo> {
        self.iter().filter(move |s| s.instances.contains(&instance))
    }
}

impl Default for Registry {
    fn default() -> Self {
        Self::standard()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_registry() {
        let r = Registry::standard();
        assert_eq!(r.len(), 28);
        assert!(r.iter().all(|s| !s.anchor.is_empty()));
        assert_eq!(r.get("galois").unwrap().anchor, "Thm. 5.4, \"the following Galois correspondence\"");
        assert!(matches!(r.get("nosuch"), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn duplicates_rejected() {
        let mut r = Registry::standard();
        let again = *r.get("bayes").unwrap();
        assert_eq!(r.register(again), Err(Error::DuplicateSuite("bayes".into())));
        assert_eq!(r.len(), 28);
    }

    #[test]
    fn applicability() {
        let r = Registry::standard();
        assert_eq!(r.applicable(Instance::Boolean).count(), 25);
        assert_eq!(r.applicable(Instance::Prob).count(), 26);
        assert_eq!(r.applicable(Instance::Quantum).count(), 25);
        assert!(r.get("duality-perturbed").unwrap().probe);
    }
}
