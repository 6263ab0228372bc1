//! Procedural archetype terrain from seeded fractal value noise.
//!
//! The noise lattice is hashed directly from `(seed, octave, ix, iy)`, so a
//! given `(archetype, seed, side_length, cell_size)` produces bit-identical
//! elevations on every run and platform. Raw fractal values are min-max
//! normalized before shaping, which makes each archetype's relief target
//! exact.

use crate::seeds::mix64;

use super::{Archetype, Heightmap, TerrainError, MIN_SIDE_LENGTH};

struct NoisePreset {
    octaves: u32,
    base_freq: f64,
    persistence: f64,
}

/// Generates a square heightmap for one of the procedural archetypes.
///
/// Relief shaping per archetype:
/// * `Alpine`: ridged hills, relief `max(200, 0.45 * side)`, datum ~800 m.
/// * `SnowPeak`: fractal blended with a central dome, relief
///   `max(200, 0.9 * side)`, datum ~3600 m.
/// * `Desert`: gentle dunes, relief 40 m, datum ~1050 m.
/// * `Coastal`: sea level cut at the 25th percentile of the noise field, so
///   at least a quarter of all cells sit at exactly zero elevation.
pub fn generate_archetype(
    archetype: Archetype,
    seed: u64,
    side_length: f64,
    cell_size: f64,
) -> Result<Heightmap, TerrainError> {
    if !(side_length.is_finite() && side_length >= MIN_SIDE_LENGTH) {
        return Err(TerrainError::SideLengthRange(side_length));
    }
    if !(cell_size.is_finite() && cell_size > 0.0) {
        return Err(TerrainError::InvalidGrid(format!(
            "cell size must be positive and finite, got {cell_size}"
        )));
    }
    if archetype == Archetype::Imported {
        return Err(TerrainError::InvalidGrid(
            "Imported terrain comes from a grid file, not the generator".into(),
        ));
    }
    let cells = (side_length / cell_size).round() as usize;
    if cells < 2 {
        return Err(TerrainError::Dimension(format!(
            "side {side_length} m at cell size {cell_size} m yields fewer than 2 cells"
        )));
    }

    let preset = match archetype {
        Archetype::Alpine => NoisePreset { octaves: 5, base_freq: 3.0, persistence: 0.5 },
        Archetype::SnowPeak => NoisePreset { octaves: 5, base_freq: 2.2, persistence: 0.55 },
        Archetype::Desert => NoisePreset { octaves: 4, base_freq: 4.0, persistence: 0.45 },
        Archetype::Coastal => NoisePreset { octaves: 5, base_freq: 2.5, persistence: 0.5 },
        Archetype::Imported => unreachable!(),
    };

    let mut raw = Vec::with_capacity(cells * cells);
    for row in 0..cells {
        for col in 0..cells {
            let u = (col as f64 + 0.5) / cells as f64;
            let v = (row as f64 + 0.5) / cells as f64;
            let mut value = fbm(seed, u, v, &preset);
            if archetype == Archetype::SnowPeak {
                // Bias toward a single central massif.
                let du = u - 0.5;
                let dv = v - 0.5;
                let r = (du * du + dv * dv).sqrt() / 0.5_f64.hypot(0.5);
                let dome = (1.0 - r.powf(1.5)).clamp(0.0, 1.0);
                value = 0.55 * value + 0.45 * dome;
            }
            raw.push(value);
        }
    }
    let normalized = normalize(&raw);

    let elevations: Vec<f64> = match archetype {
        Archetype::Alpine => {
            let relief = (0.45 * side_length).max(200.0);
            normalized.iter().map(|n| 800.0 + relief * n).collect()
        }
        Archetype::SnowPeak => {
            let relief = (0.9 * side_length).max(200.0);
            normalized.iter().map(|n| 3600.0 + relief * n).collect()
        }
        Archetype::Desert => normalized.iter().map(|n| 1050.0 + 40.0 * n).collect(),
        Archetype::Coastal => {
            let sea = percentile(&normalized, 0.25);
            let scale = 0.20 * side_length;
            normalized
                .iter()
                .map(|n| (scale * (n - sea)).max(0.0))
                .collect()
        }
        Archetype::Imported => unreachable!(),
    };

    Heightmap::from_elevations(cells, cells, cell_size, (0.0, 0.0), elevations, archetype)
}

fn normalize(raw: &[f64]) -> Vec<f64> {
    let lo = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo <= f64::EPSILON {
        return vec![0.5; raw.len()];
    }
    raw.iter().map(|v| (v - lo) / (hi - lo)).collect()
}

/// Value at the given rank fraction of the sorted slice.
fn percentile(values: &[f64], q: f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let idx = ((sorted.len() - 1) as f64 * q).floor() as usize;
    sorted[idx]
}

fn fbm(seed: u64, u: f64, v: f64, preset: &NoisePreset) -> f64 {
    let mut sum = 0.0;
    let mut amp = 1.0;
    let mut freq = preset.base_freq;
    for octave in 0..preset.octaves {
        sum += amp * value_noise(seed, octave, u * freq, v * freq);
        amp *= preset.persistence;
        freq *= 2.0;
    }
    sum
}

/// Smooth lattice noise in `[0, 1]`, C1-continuous via a quintic fade.
fn value_noise(seed: u64, octave: u32, x: f64, y: f64) -> f64 {
    let ix = x.floor() as i64;
    let iy = y.floor() as i64;
    let fx = x - ix as f64;
    let fy = y - iy as f64;
    let tx = fade(fx);
    let ty = fade(fy);
    let v00 = lattice(seed, octave, ix, iy);
    let v10 = lattice(seed, octave, ix + 1, iy);
    let v01 = lattice(seed, octave, ix, iy + 1);
    let v11 = lattice(seed, octave, ix + 1, iy + 1);
    let a = v00 + (v10 - v00) * tx;
    let b = v01 + (v11 - v01) * tx;
    a + (b - a) * ty
}

fn fade(t: f64) -> f64 {
    t * t * t * (t * (t * 6.0 - 15.0) + 10.0)
}

/// Deterministic hash of one lattice corner into `[0, 1)`.
fn lattice(seed: u64, octave: u32, ix: i64, iy: i64) -> f64 {
    let h = mix64(
        seed.wrapping_add((ix as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
            .wrapping_add((iy as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F))
            .wrapping_add((octave as u64 + 1).wrapping_mul(0x1656_67B1_9E37_79F9)),
    );
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_inputs_give_bit_identical_maps() {
        let a = generate_archetype(Archetype::Alpine, 42, 1000.0, 10.0).unwrap();
        let b = generate_archetype(Archetype::Alpine, 42, 1000.0, 10.0).unwrap();
        assert_eq!(a.elevations(), b.elevations());
    }

    #[test]
    fn different_seeds_differ() {
        let a = generate_archetype(Archetype::Alpine, 1, 500.0, 10.0).unwrap();
        let b = generate_archetype(Archetype::Alpine, 2, 500.0, 10.0).unwrap();
        assert_ne!(a.elevations(), b.elevations());
    }

    #[test]
    fn alpine_and_snowpeak_have_mountain_relief() {
        for arch in [Archetype::Alpine, Archetype::SnowPeak] {
            let m = generate_archetype(arch, 7, 2000.0, 20.0).unwrap();
            assert!(m.relief() >= 200.0, "{arch:?} relief {}", m.relief());
        }
        // Relief targets are exact after normalization.
        let m = generate_archetype(Archetype::Alpine, 3, 2000.0, 20.0).unwrap();
        assert!((m.relief() - 900.0).abs() < 1e-9);
    }

    #[test]
    fn desert_stays_gentle() {
        let m = generate_archetype(Archetype::Desert, 7, 2000.0, 20.0).unwrap();
        assert!(m.relief() <= 50.0, "desert relief {}", m.relief());
    }

    #[test]
    fn coastal_has_sea_touching_land() {
        let m = generate_archetype(Archetype::Coastal, 7, 2000.0, 20.0).unwrap();
        let zeros = m.elevations().iter().filter(|&&e| e == 0.0).count();
        assert!(
            zeros as f64 >= 0.10 * m.elevations().len() as f64,
            "only {zeros} sea cells"
        );
        // Some zero cell borders a positive cell.
        let (w, h) = (m.width(), m.height());
        let mut shoreline = false;
        'outer: for row in 0..h {
            for col in 0..w {
                if m.value_at_cell(col, row) != 0.0 {
                    continue;
                }
                let neighbors = [
                    (col.wrapping_sub(1), row),
                    (col + 1, row),
                    (col, row.wrapping_sub(1)),
                    (col, row + 1),
                ];
                for (c, r) in neighbors {
                    if c < w && r < h && m.value_at_cell(c, r) > 0.0 {
                        shoreline = true;
                        break 'outer;
                    }
                }
            }
        }
        assert!(shoreline, "no shoreline found");
    }

    #[test]
    fn tiny_side_is_rejected() {
        assert!(matches!(
            generate_archetype(Archetype::Alpine, 1, 99.0, 10.0),
            Err(TerrainError::SideLengthRange(_))
        ));
    }

    #[test]
    fn imported_cannot_be_generated() {
        assert!(matches!(
            generate_archetype(Archetype::Imported, 1, 500.0, 10.0),
            Err(TerrainError::InvalidGrid(_))
        ));
    }

    #[test]
    fn surface_is_smooth_at_cell_scale() {
        // Neighboring cells should differ by a small fraction of total relief.
        let m = generate_archetype(Archetype::Alpine, 11, 1000.0, 10.0).unwrap();
        let relief = m.relief();
        let mut max_step = 0.0f64;
        for row in 0..m.height() {
            for col in 1..m.width() {
                max_step = max_step.max(
                    (m.value_at_cell(col, row) - m.value_at_cell(col - 1, row)).abs(),
                );
            }
        }
        assert!(
            max_step < 0.25 * relief,
            "max step {max_step} vs relief {relief}"
        );
    }
}
