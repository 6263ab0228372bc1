//! Generate each terrain archetype, inspect elevation statistics, render a
//! small relief shade, and round-trip a map through the ASCII grid format.
//!
//! Run with: cargo run --example terrain_generation

use esar::terrain::{
    generate_archetype, line_of_sight, load_ascii_grid, write_ascii_grid, Archetype,
};
use esar::Point3;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let side = 400.0;
    let cell = 10.0;
    let seed = 42;

    println!("archetype   cells    relief   elevation range");
    for archetype in Archetype::ALL_GENERATED {
        let map = generate_archetype(archetype, seed, side, cell)?;
        let (lo, hi) = map.min_max_elevation();
        println!(
            "{:<11} {:>2}x{:<4} {:>7.1} m   {:>7.1} .. {:<7.1} m",
            format!("{archetype:?}"),
            map.width(),
            map.height(),
            map.relief(),
            lo,
            hi
        );
    }

    // A coarse shade of the alpine map: darker characters are higher ground.
    let map = generate_archetype(Archetype::Alpine, seed, side, cell)?;
    let (lo, hi) = map.min_max_elevation();
    let shades: &[u8] = b" .:-=+*#%@";
    println!("\nalpine relief ({}x{} cells of {} m):", map.width(), map.height(), cell);
    for row in 0..map.height() {
        let line: String = (0..map.width())
            .map(|col| {
                let t = (map.value_at_cell(col, row) - lo) / (hi - lo).max(1e-9);
                let idx = (t * (shades.len() - 1) as f64).round() as usize;
                shades[idx.min(shades.len() - 1)] as char
            })
            .collect();
        println!("  {line}");
    }

    // Line of sight from a high vantage across the map interior.
    let (ex, ey) = map.extent();
    let from = Point3::new(ex * 0.1, ey * 0.1, map.elevation_at(ex * 0.1, ey * 0.1)? + 60.0);
    let to = Point3::new(ex * 0.9, ey * 0.9, map.elevation_at(ex * 0.9, ey * 0.9)? + 2.0);
    println!(
        "\nline of sight from a 60 m hover to the far corner: {}",
        if line_of_sight(&map, from, to)? { "clear" } else { "blocked by terrain" }
    );

    // The ASCII grid interchange format round-trips exactly.
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("alpine.grid");
    write_ascii_grid(&map, &path)?;
    let restored = load_ascii_grid(&path)?;
    assert_eq!(map.elevations(), restored.elevations());
    println!("ascii grid round trip: {} bytes, identical elevations", path.metadata()?.len());
    Ok(())
}
