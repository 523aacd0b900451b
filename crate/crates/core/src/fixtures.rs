//! Input files shipped with the crate.

/// Typicality ratings of fourteen pet exemplars under three contexts.
pub const PET_RATINGS: &str = include_str!("../fixtures/pet_ratings.tsv");
/// Pet/food scenario at lambda = 0.
pub const PET_FOOD_SCENARIO: &str = include_str!("../fixtures/pet_food.toml");
/// Pet/food compatibility relation.
pub const PET_FOOD_RELATION: &str = include_str!("../fixtures/pet_food_relation.toml");
/// Pet-fish demo: single-concept distributions and their relation.
pub const PET_FISH_PET: &str = include_str!("../fixtures/pet_fish_pet.tsv");
pub const PET_FISH_FISH: &str = include_str!("../fixtures/pet_fish_fish.tsv");
pub const PET_FISH_RELATION: &str = include_str!("../fixtures/pet_fish_relation.toml");
/// Optimal CHSH pattern with all joints at +-1/sqrt(2).
pub const TSIRELSON_SCENARIO: &str = include_str!("../fixtures/tsirelson.toml");
/// Toy corpus including a sentence and its word-order swap.
pub const TOY_CORPUS: &str = include_str!("../fixtures/toy_corpus.txt");
