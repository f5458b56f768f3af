//! JSON documents for games, correlations and reconstruction inputs.
//!
//! A game document has fields `players`, `inputs`, `outputs`,
//! `distribution` (rationals `"p/q"` indexed by `x̲`) and `predicate` (0/1
//! indexed by `(a̲, x̲)`, `a̲` fastest). A correlation document has the same
//! alphabet fields plus `densities`, in predicate order; it may also carry
//! the game fields. Readers accept any rational literal (`"2/4"`, `"1"`);
//! writers always emit reduced `"p/q"`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Correlation, Game, JointDistribution, Scenario, SubsetList};
use crate::rational::Rational;
use crate::repair::{LocalMarginal, SnosCertificate};

/// A game and/or correlation on one scenario.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub players: usize,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicate: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub densities: Option<Vec<Rational>>,
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), column: e.column(), message: e.to_string() })
}

fn scenario_of(players: usize, inputs: &[usize], outputs: &[usize]) -> Result<Scenario> {
    if inputs.len() != players || outputs.len() != players {
        return Err(Error::shape(format!(
            "players is {players} but {} input and {} output alphabets are given",
            inputs.len(),
            outputs.len()
        )));
    }
    Scenario::new(inputs.to_vec(), outputs.to_vec())
}

impl Document {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn scenario(&self) -> Result<Scenario> {
        scenario_of(self.players, &self.inputs, &self.outputs)
    }

    fn blank(scenario: &Scenario) -> Self {
        Document {
            players: scenario.players(),
            inputs: scenario.inputs().to_vec(),
            outputs: scenario.outputs().to_vec(),
            distribution: None,
            predicate: None,
            densities: None,
        }
    }

    pub fn from_game(game: &Game) -> Self {
        Document {
            distribution: Some(game.distribution().to_vec()),
            predicate: Some(game.predicate().iter().map(|&w| w as u8).collect()),
            ..Document::blank(game.scenario())
        }
    }

    pub fn from_correlation(strategy: &Correlation) -> Self {
        Document { densities: Some(strategy.densities().to_vec()), ..Document::blank(strategy.scenario()) }
    }

    pub fn is_game(&self) -> bool {
        self.distribution.is_some() && self.predicate.is_some()
    }

    pub fn game(&self) -> Result<Game> {
        let scenario = self.scenario()?;
        let (Some(distribution), Some(predicate)) = (&self.distribution, &self.predicate) else {
            return Err(Error::argument("document needs both distribution and predicate to describe a game"));
        };
        let predicate = predicate
            .iter()
            .enumerate()
            .map(|(i, &v)| match v {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::argument(format!("predicate entry {i} is {other}, expected 0 or 1"))),
            })
            .collect::<Result<_>>()?;
        Game::new(scenario, distribution.clone(), predicate)
    }

    /// Negative densities are kept so membership checks can report them.
    pub fn correlation(&self) -> Result<Correlation> {
        let densities = self.densities.as_ref().ok_or_else(|| Error::argument("document has no densities"))?;
        Correlation::from_signed(self.scenario()?, densities.clone())
    }
}

/// Input to SNOS reconstruction: a joint distribution `P` on `A̲ × X̲`, the
/// target `T` on `X̲`, and optionally a certificate of local conditionals.
/// Without one the tightest certificate is computed.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconstructDocument {
    pub players: usize,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub target: Vec<Rational>,
    pub joint: Vec<Rational>,
    #[serde(default)]
    pub certificate: Option<CertificateDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub input_epsilon: Rational,
    pub marginals: Vec<LocalMarginalDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalMarginalDocument {
    pub subset: SubsetList,
    pub conditional: Vec<Rational>,
    pub epsilon: Rational,
}

/// A checked reconstruction input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconstructInput {
    pub target: Vec<Rational>,
    pub joint: JointDistribution,
    pub certificate: SnosCertificate,
}

impl ReconstructDocument {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text)
    }

    pub fn resolve(&self) -> Result<ReconstructInput> {
        let scenario = scenario_of(self.players, &self.inputs, &self.outputs)?;
        if self.target.len() != scenario.input_count() {
            return Err(Error::shape(format!(
                "target has {} entries, expected {}",
                self.target.len(),
                scenario.input_count()
            )));
        }
        let joint = JointDistribution::new(scenario, self.joint.clone())?;
        let certificate = match &self.certificate {
            None => SnosCertificate::tight(&joint, &self.target)?,
            Some(c) => SnosCertificate {
                input_epsilon: c.input_epsilon.clone(),
                marginals: c
                    .marginals
                    .iter()
                    .map(|m| {
                        Ok(LocalMarginal {
                            subset: m.subset.resolve(self.players)?,
                            conditional: m.conditional.clone(),
                            epsilon: m.epsilon.clone(),
                        })
                    })
                    .collect::<Result<_>>()?,
            },
        };
        Ok(ReconstructInput { target: self.target.clone(), joint, certificate })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{anticorrelation_game, example_snos_strategy};

    #[test]
    fn game_round_trip() {
        let game = anticorrelation_game();
        let doc = Document::from_game(&game);
        let back = Document::parse(&doc.to_json()).unwrap();
        assert_eq!(back.game().unwrap(), game);
        assert!(back.to_json().contains("\"1/3\""));
    }

    #[test]
    fn correlation_round_trip() {
        let p = example_snos_strategy();
        let back = Document::parse(&Document::from_correlation(&p).to_json()).unwrap();
        assert_eq!(back.correlation().unwrap(), p);
        assert!(back.game().is_err());
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = Document::parse("{\n  \"players\": 2,\n  \"inputs\": [2, 2],\n  \"outputs\": [2, x]\n}").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (4, 18)),
            other => panic!("unexpected {other:?}"),
        }
        let err = Document::parse("{\"players\": 1, \"inputs\": [1], \"outputs\": [1], \"distribution\": [\"1/0\"]}");
        assert!(matches!(err, Err(Error::Parse { .. })));
        assert!(matches!(Document::parse("{\"players\": 1, \"extra\": 0}"), Err(Error::Parse { .. })));
    }

    #[test]
    fn semantic_errors() {
        let doc = Document::parse(
            r#"{"players": 1, "inputs": [1], "outputs": [2], "distribution": ["1/1"], "predicate": [1, 2]}"#,
        )
        .unwrap();
        assert!(matches!(doc.game(), Err(Error::Argument(_))));
        let doc = Document::parse(r#"{"players": 2, "inputs": [1], "outputs": [2]}"#).unwrap();
        assert!(matches!(doc.scenario(), Err(Error::Shape(_))));
    }

    #[test]
    fn reconstruct_document_defaults_to_tight_certificate() {
        let text = r#"{"players": 2, "inputs": [1, 1], "outputs": [2, 2],
            "target": ["1"], "joint": ["1/2", "0", "0", "1/2"]}"#;
        let input = ReconstructDocument::parse(text).unwrap().resolve().unwrap();
        assert_eq!(input.certificate.bound(), Rational::zero());
        let text = r#"{"players": 2, "inputs": [1, 1], "outputs": [2, 2],
            "target": ["1"], "joint": ["1/2", "0", "0", "1/2"],
            "certificate": {"input_epsilon": "0", "marginals": [
                {"subset": [0], "conditional": ["1/2", "1/2"], "epsilon": "0"},
                {"subset": [1], "conditional": ["1/2", "1/2"], "epsilon": "0"}]}}"#;
        let input = ReconstructDocument::parse(text).unwrap().resolve().unwrap();
        assert_eq!(input.certificate.marginals.len(), 2);
    }
}
