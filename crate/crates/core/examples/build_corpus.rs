//! Collects the two sample contexts from the category graph, removes shared
//! articles and prints per-context statistics.

use std::path::Path;

use ctxsim::corpus::{build_corpus, collect_context_articles, count_occurrences, ingest_articles, ContextSpec};
use ctxsim::inventory;

fn main() -> ctxsim::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let (store, graph) = ingest_articles(&data.join("articles.jsonl"), &data.join("edges.tsv"))?;
    println!("{} articles, {} categories", store.len(), graph.category_count());

    let nature = ContextSpec::new(inventory::NATURE_ROOTS).exclude(inventory::NATURE_EXCLUDED_ROOTS);
    let transport = ContextSpec::new(inventory::TRANSPORTATION_ROOTS);
    let raw_n = collect_context_articles(&graph, &store, &nature)?;
    let raw_t = collect_context_articles(&graph, &store, &transport)?;
    let shared: Vec<_> = raw_n.intersection(&raw_t).cloned().collect();
    println!("shared between contexts: {shared:?}");

    let n_ids = collect_context_articles(&graph, &store, &nature.subtract(raw_t.clone()))?;
    let t_ids = collect_context_articles(&graph, &store, &transport.subtract(raw_n))?;
    for (name, ids, items) in [
        ("nature", &n_ids, &inventory::NATURE_ITEMS),
        ("transportation", &t_ids, &inventory::TRANSPORTATION_ITEMS),
    ] {
        let corpus = build_corpus(&store, ids, None)?;
        println!(
            "{name}: {} articles, {} tokens, {} word types",
            corpus.articles().len(),
            corpus.token_count(),
            corpus.word_counts().len()
        );
        for (w, c) in count_occurrences(&corpus, items) {
            print!("{w}={c} ");
        }
        println!();
    }

    let capped = build_corpus(&store, &n_ids, Some(2_000))?;
    println!("nature capped at 2000 tokens: {} tokens", capped.token_count());
    Ok(())
}
