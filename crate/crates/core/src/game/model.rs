use crate::error::{Error, Result};
use crate::game::{Correlation, Scenario};
use crate::rational::Rational;

/// Round structure of a game built by parallel repetition: every player's
/// alphabet is the `count`-fold product of the `base` alphabet, round 0 most
/// significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rounds {
    pub base: Scenario,
    pub count: usize,
}

/// An `ℓ`-player non-local game: a query distribution `T(x̲)` and a 0/1
/// predicate `V(a̲, x̲)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    scenario: Scenario,
    distribution: Vec<Rational>,
    predicate: Vec<bool>,
    rounds: Option<Rounds>,
}

impl Game {
    /// `distribution` is indexed by `x̲`; `predicate` by `(a̲, x̲)` with `a̲`
    /// fastest. The distribution must be exactly normalized.
    pub fn new(scenario: Scenario, distribution: Vec<Rational>, predicate: Vec<bool>) -> Result<Self> {
        if distribution.len() != scenario.input_count() {
            return Err(Error::shape(format!(
                "distribution has {} entries, expected {}",
                distribution.len(),
                scenario.input_count()
            )));
        }
        if predicate.len() != scenario.table_len() {
            return Err(Error::shape(format!(
                "predicate has {} entries, expected {}",
                predicate.len(),
                scenario.table_len()
            )));
        }
        if let Some(x) = distribution.iter().position(Rational::is_negative) {
            return Err(Error::argument(format!("negative query probability at input {x}")));
        }
        let total: Rational = distribution.iter().sum();
        if !total.is_one() {
            return Err(Error::argument(format!("query distribution sums to {total}, not 1")));
        }
        Ok(Game { scenario, distribution, predicate, rounds: None })
    }

    /// Builds the predicate from a closure over `(a̲, x̲)` digit tuples.
    pub fn from_fn(
        scenario: Scenario,
        distribution: Vec<Rational>,
        mut predicate: impl FnMut(&[usize], &[usize]) -> bool,
    ) -> Result<Self> {
        let (ir, or) = (scenario.input_radix(), scenario.output_radix());
        let mut table = Vec::with_capacity(scenario.table_len());
        for x in 0..scenario.input_count() {
            let xs = ir.decode(x);
            for a in 0..scenario.output_count() {
                table.push(predicate(&or.decode(a), &xs));
            }
        }
        Game::new(scenario, distribution, table)
    }

    pub(crate) fn with_rounds(mut self, rounds: Rounds) -> Self {
        self.rounds = Some(rounds);
        self
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn players(&self) -> usize {
        self.scenario.players()
    }

    pub fn distribution(&self) -> &[Rational] {
        &self.distribution
    }

    pub fn predicate(&self) -> &[bool] {
        &self.predicate
    }

    pub fn query_probability(&self, inputs: usize) -> &Rational {
        &self.distribution[inputs]
    }

    pub fn wins(&self, outputs: usize, inputs: usize) -> bool {
        self.predicate[self.scenario.entry(outputs, inputs)]
    }

    /// Set when the game was produced by [`repeat_game`](crate::game::repeat_game)
    /// or [`threshold_game`](crate::game::threshold_game).
    pub fn rounds(&self) -> Option<&Rounds> {
        self.rounds.as_ref()
    }

    pub fn has_full_support(&self) -> bool {
        self.distribution.iter().all(Rational::is_positive)
    }

    /// Inputs with `T(x̲) > 0`.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.distribution.iter().enumerate().filter(|(_, t)| t.is_positive()).map(|(x, _)| x)
    }

    /// Same alphabets and distribution, new predicate table.
    pub fn with_predicate(&self, predicate: Vec<bool>) -> Result<Game> {
        let mut g = Game::new(self.scenario.clone(), self.distribution.clone(), predicate)?;
        g.rounds = self.rounds.clone();
        Ok(g)
    }

    /// `Σ_{a̲,x̲} T(x̲) V(a̲,x̲) P(a̲|x̲)`.
    pub fn winning_probability(&self, strategy: &Correlation) -> Result<Rational> {
        self.scenario.check_same(strategy.scenario(), "winning probability")?;
        let na = self.scenario.output_count();
        let mut total = Rational::zero();
        for (x, t) in self.distribution.iter().enumerate() {
            if t.is_zero() {
                continue;
            }
            let row = x * na;
            let won: Rational = (row..row + na)
                .filter(|&e| self.predicate[e])
                .map(|e| &strategy.densities()[e])
                .sum();
            total += &won * t;
        }
        Ok(total)
    }
}

/// Free-function form of [`Game::winning_probability`].
pub fn winning_probability(game: &Game, strategy: &Correlation) -> Result<Rational> {
    game.winning_probability(strategy)
}
