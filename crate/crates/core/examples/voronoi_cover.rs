//! Farthest-first cover and Voronoi cells of a 2-d point cloud for a few
//! radii.
//!
//!     cargo run --release --example voronoi_cover

use locsvm::data::{generate_synthetic, DataType, SyntheticSpec};
use locsvm::partition::{voronoi_partition, CoverInit};

fn main() -> locsvm::Result<()> {
    let data = generate_synthetic(&SyntheticSpec {
        data_type: DataType::IV,
        n_train: 5000,
        n_test: 0,
        seed: 3,
    })
    .train_dataset();

    for radius in [1.0, 0.5, 0.25, 0.125] {
        let part = voronoi_partition(&data.inputs(), radius, CoverInit::First)?;
        let sizes = part.cell_sizes();
        println!(
            "r = {radius:<5}  cells = {:>3}  smallest = {:>4}  largest = {:>4}",
            part.num_cells(),
            sizes.iter().min().unwrap(),
            sizes.iter().max().unwrap()
        );
    }

    let part = voronoi_partition(&data.inputs(), 0.5, CoverInit::First)?;
    part.cover.write_csv(std::io::stdout().lock())?;
    Ok(())
}
