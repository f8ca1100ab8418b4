//! Mixes two contexts at several ratios and frequency-matches one corpus to
//! another on the test items.

use std::path::Path;

use ctxsim::corpus::{
    build_corpus, collect_context_articles, count_occurrences, frequency_match, ingest_articles, mix_corpora,
    ContextSpec, Corpus,
};

fn context(path: &Path, roots: &[&str]) -> ctxsim::Result<Corpus> {
    let (store, graph) = ingest_articles(&path.join("articles.jsonl"), &path.join("edges.tsv"))?;
    let ids = collect_context_articles(&graph, &store, &ContextSpec::new(roots.iter().copied()))?;
    build_corpus(&store, &ids, None)
}

fn main() -> ctxsim::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let nature = context(&data, &["animal"])?;
    let transport = context(&data, &["transport", "travel"])?;

    for f in [0.2, 0.5, 0.8] {
        let m = mix_corpora(&nature, &transport, f, 7)?;
        println!(
            "fraction {f}: {} tokens = {} nature + {} transport",
            m.corpus.token_count(),
            m.shares[0].tokens,
            m.shares[1].tokens
        );
    }

    let reference = build_corpus_prefix(&nature, 4);
    let targets = ["bear", "duck"];
    match frequency_match(&nature, &reference, &targets, 1) {
        Ok(out) => println!(
            "matched: {:?} in output vs {:?} in reference, {} tokens kept",
            count_occurrences(&out, &targets),
            count_occurrences(&reference, &targets),
            out.token_count()
        ),
        Err(e) => println!("frequency match impossible: {e}"),
    }
    Ok(())
}

fn build_corpus_prefix(c: &Corpus, n: usize) -> Corpus {
    Corpus::from_articles(c.articles()[..n.min(c.articles().len())].to_vec())
}
