//! Loads vectors in the plain-text format (with or without a header line),
//! as shipped by common pretrained releases, and converts them to the binary
//! cache.

use ctxsim::embedding::{load_binary, read_text, save_binary, write_text};
use ctxsim::similarity::predict_cosine;

const VECTORS: &str = "\
4 3
lion 0.9 0.1 0.0
tiger 0.8 0.2 0.1
bus 0.0 0.9 0.4
train 0.1 0.8 0.5
";

fn main() -> ctxsim::Result<()> {
    let space = read_text(VECTORS.as_bytes())?;
    let headerless = read_text(VECTORS.lines().skip(1).collect::<Vec<_>>().join("\n").as_bytes())?;
    assert_eq!(space.matrix(), headerless.matrix());

    let items = ["lion", "tiger", "bus", "train"];
    let scores = predict_cosine(&space, "demo", &items)?;
    for ((a, b), s) in scores.pairs.iter().zip(&scores.scores) {
        println!("{a:>6} {b:<6} {s:.3}");
    }

    let path = std::env::temp_dir().join("ctxsim_load_pretrained.bin");
    save_binary(&space, &path)?;
    let back = load_binary(&path)?;
    assert_eq!(back.matrix(), space.matrix());
    let _ = std::fs::remove_file(&path);

    let mut text = Vec::new();
    write_text(&back, &mut text).expect("in-memory write");
    print!("{}", String::from_utf8_lossy(&text));
    Ok(())
}
