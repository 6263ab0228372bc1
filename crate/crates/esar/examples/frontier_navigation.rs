//! The exploration machinery in isolation: a bird's-eye-view occupancy
//! grid, frontier extraction, an obstacle-aware distance field, and goal
//! selection by both baseline rules.
//!
//! Run with: cargo run --example frontier_navigation

use esar::agents::{
    fmm_distance_field, select_goal, BevGrid, CellState, ClueDensityValue, FrontierKind,
    ValueProvider,
};

fn main() {
    // A 200 x 200 m map at 10 m cells. The UAV has explored the southwest
    // quadrant; a wall splits it, and everything else is unknown.
    let mut grid = BevGrid::new((200.0, 200.0), 10.0);
    for j in 0..10 {
        for i in 0..10 {
            grid.set_state(i, j, CellState::Free);
        }
    }
    for j in 2..10 {
        grid.set_state(6, j, CellState::Occupied);
    }

    println!("occupancy ({}x{} cells; # wall, . free, space unknown):", grid.width(), grid.height());
    for j in (0..grid.height()).rev() {
        let line: String = (0..grid.width())
            .map(|i| match grid.state(i, j) {
                CellState::Occupied => '#',
                CellState::Free => '.',
                CellState::Unknown => ' ',
            })
            .collect();
        println!("  |{line}|");
    }

    // Frontiers: free cells touching unknown ground, grouped into segments.
    let frontiers = grid.extract_frontiers();
    println!("\n{} frontier segments:", frontiers.len());
    for (idx, f) in frontiers.iter().enumerate() {
        println!(
            "  [{idx}] {} cells, centroid ({:.0}, {:.0})",
            f.cells.len(),
            f.centroid.0,
            f.centroid.1
        );
    }

    // Travel distance from the UAV's cell, flowing around the wall.
    let source = (1, 1);
    let field = fmm_distance_field(&grid, source).expect("source cell is free");
    let distances: Vec<f64> = frontiers
        .iter()
        .map(|f| {
            let (i, j) = grid.cell_of(f.centroid.0, f.centroid.1).expect("centroid in bounds");
            field.get(i, j)
        })
        .collect();
    for (idx, d) in distances.iter().enumerate() {
        println!("  [{idx}] travel distance {:.0} m", d);
    }

    // Classic frontier exploration walks to the nearest frontier.
    let nearest = select_goal(FrontierKind::Nearest, &frontiers, &distances, None)
        .expect("some frontier is reachable");
    println!("\nnearest rule picks [{nearest}]");

    // The value-ranked variant weighs a clue-density surface against travel
    // cost; a clue reported in the northeast pulls the search there.
    let mut value = ClueDensityValue::new(30.0);
    value.deposit(140.0, 150.0);
    let values: Vec<f64> =
        frontiers.iter().map(|f| value.value_at(f.centroid.0, f.centroid.1)).collect();
    let ranked = select_goal(FrontierKind::ValueRanked, &frontiers, &distances, Some(&values))
        .expect("some frontier is reachable");
    println!("value-ranked rule picks [{ranked}] after a clue report near (140, 150)");
}
