//! Games, strategies, and their parallel and threshold compositions.

mod compose;
mod correlation;
mod joint;
mod model;
mod scenario;
mod subset;

pub use compose::{repeat_game, repeat_game_with, round_base, symmetrize, threshold_game, threshold_game_with};
pub(crate) use compose::round_permutation_map;
pub use correlation::{marginal, Correlation, Marginal};
pub use joint::{check_distribution, JointDistribution};
pub use model::{winning_probability, Game, Rounds};
pub use scenario::{Limits, Radix, Scenario};
pub use subset::{SubsetIndex, SubsetList, MAX_PLAYERS};
