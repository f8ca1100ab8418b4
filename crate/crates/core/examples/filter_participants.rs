//! Reads the sample judgments, drops unreliable raters and reports the
//! reliability ceiling.

use std::fs::File;
use std::path::Path;

use ctxsim::eval::{filter_participants, loo_correlations, read_judgments, reliability_ceiling};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/judgments.csv");
    let file = File::open(&path)?;
    for (context, set) in read_judgments(file, &path.display().to_string())? {
        let filtered = filter_participants(&set, 0.5)?;
        println!("{context}: kept {} of {}", filtered.retained().len(), set.participants().len());
        for r in filtered.removed() {
            println!("  removed {} ({:?}, r = {:?})", r.participant, r.reason, r.loo_r);
        }
        let worst = loo_correlations(&filtered)
            .into_values()
            .flatten()
            .fold(f64::INFINITY, f64::min);
        let rel = reliability_ceiling(&filtered, 0.6)?;
        println!("  min retained r {worst:.3}, ceiling {:.3}; a model at r = 0.6 reaches {:.0}%", rel.ceiling, 100.0 * rel.fraction);
    }
    Ok(())
}
