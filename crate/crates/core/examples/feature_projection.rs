//! Builds feature axes from anchor words and rates items along them.

use ctxsim::embedding::EmbeddingSpace;
use ctxsim::projection::{axis_pair_distance, build_axis, project_items, AnchorMode};

fn main() -> ctxsim::Result<()> {
    // Coordinates: (size, speed, noise)
    let space = EmbeddingSpace::from_rows([
        ("mouse", vec![0.1f32, 0.3, 0.2]),
        ("sparrow", vec![0.1, 0.6, 0.5]),
        ("snail", vec![0.0, 0.0, 0.1]),
        ("elephant", vec![1.0, 0.4, 0.8]),
        ("whale", vec![1.0, 0.3, 0.6]),
        ("giraffe", vec![0.9, 0.5, 0.2]),
        ("tortoise", vec![0.3, 0.1, 0.1]),
        ("cheetah", vec![0.5, 1.0, 0.4]),
        ("falcon", vec![0.2, 1.0, 0.5]),
        ("dog", vec![0.4, 0.6, 0.7]),
        ("cat", vec![0.3, 0.6, 0.4]),
        ("horse", vec![0.8, 0.8, 0.6]),
    ]);
    let space = space?;
    let size = build_axis(&space, "size", AnchorMode::Contextual, &["mouse", "sparrow", "snail"], &["elephant", "whale", "giraffe"])?;
    let speed = build_axis(&space, "speed", AnchorMode::Contextual, &["snail", "tortoise", "whale"], &["cheetah", "falcon", "horse"])?;

    let items = ["dog", "cat", "horse"];
    let ratings = project_items(&space, &items, &[size.clone(), speed])?;
    println!("{:>6} {:>7} {:>7}", "", "size", "speed");
    for (item, row) in ratings.items.iter().zip(&ratings.values) {
        println!("{item:>6} {:>7.3} {:>7.3}", row[0], row[1]);
    }
    println!(
        "horse - cat along size: {:.3}",
        axis_pair_distance(&space, "horse", "cat", &size)?
    );
    Ok(())
}
