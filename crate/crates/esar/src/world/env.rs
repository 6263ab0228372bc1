//! Weather and illumination conditions and their effect on sensing.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Weather condition during an episode. Conditions fall into three severity
/// groups that drive both sensing degradation and difficulty scoring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Weather {
    Sunny,
    Cloudy,
    Overcast,
    LightRain,
    HeavyRain,
    Thunderstorm,
    LightSnow,
    HeavySnow,
    Blizzard,
    Fog,
    DenseFog,
    Sandstorm,
    DustHaze,
}

/// Sensing-impact group of a weather condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeatherSeverity {
    /// Clear air: no degradation.
    Clear,
    /// Rain or snow: moderate degradation.
    Precipitation,
    /// Fog, sand, or dust: severe degradation.
    Obscurant,
}

impl Weather {
    pub const ALL: [Weather; 13] = [
        Weather::Sunny,
        Weather::Cloudy,
        Weather::Overcast,
        Weather::LightRain,
        Weather::HeavyRain,
        Weather::Thunderstorm,
        Weather::LightSnow,
        Weather::HeavySnow,
        Weather::Blizzard,
        Weather::Fog,
        Weather::DenseFog,
        Weather::Sandstorm,
        Weather::DustHaze,
    ];

    pub fn severity(&self) -> WeatherSeverity {
        match self {
            Weather::Sunny | Weather::Cloudy | Weather::Overcast => WeatherSeverity::Clear,
            Weather::LightRain
            | Weather::HeavyRain
            | Weather::Thunderstorm
            | Weather::LightSnow
            | Weather::HeavySnow
            | Weather::Blizzard => WeatherSeverity::Precipitation,
            Weather::Fog | Weather::DenseFog | Weather::Sandstorm | Weather::DustHaze => {
                WeatherSeverity::Obscurant
            }
        }
    }

    /// Multiplier applied to the sensor detection radius.
    pub fn sensing_factor(&self) -> f64 {
        match self.severity() {
            WeatherSeverity::Clear => 1.0,
            WeatherSeverity::Precipitation => 0.6,
            WeatherSeverity::Obscurant => 0.3,
        }
    }

    /// Additive difficulty contribution of this condition.
    pub fn difficulty_points(&self) -> i32 {
        match self.severity() {
            WeatherSeverity::Clear => 0,
            WeatherSeverity::Precipitation => 1,
            WeatherSeverity::Obscurant => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Weather::Sunny => "Sunny",
            Weather::Cloudy => "Cloudy",
            Weather::Overcast => "Overcast",
            Weather::LightRain => "LightRain",
            Weather::HeavyRain => "HeavyRain",
            Weather::Thunderstorm => "Thunderstorm",
            Weather::LightSnow => "LightSnow",
            Weather::HeavySnow => "HeavySnow",
            Weather::Blizzard => "Blizzard",
            Weather::Fog => "Fog",
            Weather::DenseFog => "DenseFog",
            Weather::Sandstorm => "Sandstorm",
            Weather::DustHaze => "DustHaze",
        }
    }
}

impl fmt::Display for Weather {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Weather {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let wanted: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        Weather::ALL
            .iter()
            .find(|w| w.name().to_ascii_lowercase() == wanted)
            .copied()
            .ok_or_else(|| format!("unknown weather {s:?}"))
    }
}

/// Illumination band derived from the clock hour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LightBand {
    /// 07:00 (inclusive) to 17:00 (exclusive).
    Daylight,
    /// 06:00-07:00 and 17:00-18:00.
    Twilight,
    /// 18:00 to 06:00.
    Night,
}

impl LightBand {
    /// Band containing `clock` hours; values outside `[0, 24)` wrap.
    pub fn from_clock(clock: f64) -> Self {
        let h = clock.rem_euclid(24.0);
        if (7.0..17.0).contains(&h) {
            LightBand::Daylight
        } else if (6.0..7.0).contains(&h) || (17.0..18.0).contains(&h) {
            LightBand::Twilight
        } else {
            LightBand::Night
        }
    }

    /// Multiplier applied to the sensor detection radius.
    pub fn sensing_factor(&self) -> f64 {
        match self {
            LightBand::Daylight => 1.0,
            LightBand::Twilight => 0.7,
            LightBand::Night => 0.4,
        }
    }

    /// Additive difficulty contribution of this band.
    pub fn difficulty_points(&self) -> i32 {
        match self {
            LightBand::Daylight => 0,
            LightBand::Twilight => 1,
            LightBand::Night => 2,
        }
    }
}

/// Ambient conditions held fixed for the length of an episode.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvConditions {
    pub weather: Weather,
    /// Local clock in hours, `[0, 24)`.
    pub clock: f64,
}

impl EnvConditions {
    pub fn new(weather: Weather, clock: f64) -> Self {
        Self {
            weather,
            clock: clock.rem_euclid(24.0),
        }
    }

    pub fn light_band(&self) -> LightBand {
        LightBand::from_clock(self.clock)
    }

    /// Clock rendered as `HH:MM` for prompts and reports.
    pub fn clock_hhmm(&self) -> String {
        let total_minutes = (self.clock.rem_euclid(24.0) * 60.0).round() as u32 % (24 * 60);
        format!("{:02}:{:02}", total_minutes / 60, total_minutes % 60)
    }
}

/// Detection radius after weather and illumination degradation, meters.
///
/// Both factors multiply the baseline radius; they never enlarge it.
pub fn effective_detection_radius(env: &EnvConditions, base_radius: f64) -> f64 {
    base_radius * env.weather.sensing_factor() * env.light_band().sensing_factor()
}
