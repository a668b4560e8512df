//! Regenerate the sample data directory shipped in `data/sample`.
//!
//! ```text
//! cargo run -p coolgrid-core --example make_sample_data -- data/sample
//! ```

use std::path::PathBuf;

use coolgrid::geogrid::{synth_weather, write_cells, write_weather_block, SynthProfile};
use coolgrid::GridCell;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "data/sample".into()),
    );
    std::fs::create_dir_all(dir.join("weather"))?;

    let cells = vec![
        GridCell::new(1, 2.0, 32.5, "UGA", 120_000.0)?,
        GridCell::new(2, 25.0, 55.3, "ARE", 85_000.0)?,
        GridCell::new(3, 45.0, 7.7, "ITA", 60_000.0)?,
        GridCell::new(4, 2.0, -60.7, "BRA", 40_000.0)?,
    ];
    write_cells(&dir.join("cells.csv"), &cells)?;

    // One cell reads a CSV block; the others are generated on load.
    write_weather_block(
        &dir.join("weather/cell_4.csv"),
        &synth_weather(4, SynthProfile::Equatorial),
    )?;
    let manifest = "cell_id,source\n\
                    1,synth:equatorial:1\n\
                    2,synth:subtropical:2\n\
                    3,synth:temperate:3\n\
                    4,cell_4.csv\n";
    std::fs::write(dir.join("weather/manifest.csv"), manifest)?;
    println!("wrote {}", dir.display());
    Ok(())
}
