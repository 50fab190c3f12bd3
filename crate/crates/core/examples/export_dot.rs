//! Writes the 75-vertex cover of the shipped F_25 voltage as Graphviz.

use paley_covers::cover::build_cover;
use paley_covers::dot::{cover_to_dot, DEFAULT_DOT_CAP};
use paley_covers::example25;

fn main() -> paley_covers::Result<()> {
    let cover = build_cover(&example25::alpha(3)?);
    let dot = cover_to_dot(&cover, DEFAULT_DOT_CAP)?;
    let path = std::env::temp_dir().join("cover25.dot");
    std::fs::write(&path, &dot)?;
    println!(
        "{} vertices, {} edges -> {}",
        cover.graph().n(),
        cover.graph().edge_count(),
        path.display()
    );
    Ok(())
}
