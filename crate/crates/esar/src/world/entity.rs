//! Victims and clue objects placed in the world.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::geom::Point3;

/// Physical clue categories that can be dropped along a victim's path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClueType {
    Tent,
    Backpack,
    Clothing,
    Campfire,
    Flare,
    Flashlight,
    WaterBottle,
    FoodWrapper,
    Footprints,
    TrekkingPole,
    SleepingBag,
    Rope,
}

impl ClueType {
    pub const ALL: [ClueType; 12] = [
        ClueType::Tent,
        ClueType::Backpack,
        ClueType::Clothing,
        ClueType::Campfire,
        ClueType::Flare,
        ClueType::Flashlight,
        ClueType::WaterBottle,
        ClueType::FoodWrapper,
        ClueType::Footprints,
        ClueType::TrekkingPole,
        ClueType::SleepingBag,
        ClueType::Rope,
    ];

    /// Ground-truth display name used in scoring and judge prompts.
    pub fn canonical_name(&self) -> &'static str {
        match self {
            ClueType::Tent => "Tent",
            ClueType::Backpack => "Backpack",
            ClueType::Clothing => "Clothing",
            ClueType::Campfire => "Campfire",
            ClueType::Flare => "Flare",
            ClueType::Flashlight => "Flashlight",
            ClueType::WaterBottle => "Water Bottle",
            ClueType::FoodWrapper => "Food Wrapper",
            ClueType::Footprints => "Footprints",
            ClueType::TrekkingPole => "Trekking Pole",
            ClueType::SleepingBag => "Sleeping Bag",
            ClueType::Rope => "Rope",
        }
    }

    /// Difficulty credit for a strong survival signal being present; zero for
    /// ordinary clues. Stronger signals earn larger credits.
    pub fn difficulty_credit(&self) -> i32 {
        match self {
            ClueType::Tent => -1,
            ClueType::Campfire => -2,
            ClueType::Flare => -3,
            _ => 0,
        }
    }
}

impl fmt::Display for ClueType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.canonical_name())
    }
}

impl FromStr for ClueType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let wanted: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        ClueType::ALL
            .iter()
            .find(|c| {
                c.canonical_name()
                    .chars()
                    .filter(|ch| ch.is_ascii_alphanumeric())
                    .collect::<String>()
                    .to_ascii_lowercase()
                    == wanted
            })
            .copied()
            .ok_or_else(|| format!("unknown clue type {s:?}"))
    }
}

/// What an entity is. Clue entities always carry their category.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum EntityKind {
    Victim,
    Clue { clue_type: ClueType },
}

/// One object in the world the sensor can detect.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entity {
    pub id: String,
    #[serde(flatten)]
    pub kind: EntityKind,
    pub position: Point3,
}

impl Entity {
    /// Label the sensor attaches to a detection of this entity.
    pub fn label(&self) -> String {
        match self.kind {
            EntityKind::Victim => "victim".to_string(),
            EntityKind::Clue { clue_type } => clue_type.canonical_name().to_string(),
        }
    }

    pub fn is_victim(&self) -> bool {
        matches!(self.kind, EntityKind::Victim)
    }
}
