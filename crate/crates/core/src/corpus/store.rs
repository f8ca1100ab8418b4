use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One category-labeled article as found in the JSONL dump.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleRecord {
    pub id: String,
    #[serde(default)]
    pub title: String,
    pub text: String,
    #[serde(default)]
    pub categories: BTreeSet<String>,
}

/// Articles keyed by id. Iteration order is sorted by id.
#[derive(Debug, Clone, Default)]
pub struct ArticleStore {
    articles: BTreeMap<String, ArticleRecord>,
}

impl ArticleStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, record: ArticleRecord) -> Result<()> {
        if self.articles.contains_key(&record.id) {
            return Err(Error::DuplicateId {
                id: record.id,
                line: 0,
            });
        }
        self.articles.insert(record.id.clone(), record);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&ArticleRecord> {
        self.articles.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.articles.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.articles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.articles.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ArticleRecord> {
        self.articles.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.articles.keys().map(String::as_str)
    }
}

/// Category hierarchy plus category → article membership.
///
/// Real category data is not a tree: it contains cycles and shared children,
/// so every traversal carries a visited set.
#[derive(Debug, Clone, Default)]
pub struct CategoryGraph {
    edges: BTreeMap<String, BTreeSet<String>>,
    membership: BTreeMap<String, BTreeSet<String>>,
}

impl CategoryGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_edge(&mut self, parent: &str, child: &str) {
        self.edges
            .entry(parent.to_owned())
            .or_default()
            .insert(child.to_owned());
        self.edges.entry(child.to_owned()).or_default();
    }

    pub fn add_member(&mut self, category: &str, article_id: &str) {
        self.membership
            .entry(category.to_owned())
            .or_default()
            .insert(article_id.to_owned());
        self.edges.entry(category.to_owned()).or_default();
    }

    pub fn contains(&self, category: &str) -> bool {
        self.edges.contains_key(category)
    }

    pub fn children(&self, category: &str) -> impl Iterator<Item = &str> {
        self.edges
            .get(category)
            .into_iter()
            .flat_map(|c| c.iter().map(String::as_str))
    }

    pub fn members(&self, category: &str) -> impl Iterator<Item = &str> {
        self.membership
            .get(category)
            .into_iter()
            .flat_map(|c| c.iter().map(String::as_str))
    }

    pub fn category_count(&self) -> usize {
        self.edges.len()
    }

    /// All categories reachable from `roots`, roots included.
    pub fn reachable(&self, roots: &[String]) -> Result<BTreeSet<String>> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        for r in roots {
            if !self.contains(r) {
                return Err(Error::UnknownCategory(r.clone()));
            }
            if seen.insert(r.clone()) {
                queue.push_back(r.as_str());
            }
        }
        while let Some(cat) = queue.pop_front() {
            for child in self.children(cat) {
                if seen.insert(child.to_owned()) {
                    queue.push_back(child);
                }
            }
        }
        Ok(seen)
    }

    /// Articles attached to any category reachable from `roots`.
    pub fn articles_under(&self, roots: &[String]) -> Result<BTreeSet<String>> {
        let cats = self.reachable(roots)?;
        Ok(cats
            .iter()
            .flat_map(|c| self.members(c).map(str::to_owned))
            .collect())
    }
}

/// Which part of the category graph makes up one semantic context.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ContextSpec {
    pub include_roots: Vec<String>,
    #[serde(default)]
    pub exclude_roots: Vec<String>,
    #[serde(default)]
    pub other_context_ids: Option<BTreeSet<String>>,
    #[serde(default)]
    pub target_tokens: Option<u64>,
}

impl ContextSpec {
    pub fn new<S: Into<String>>(include: impl IntoIterator<Item = S>) -> Self {
        ContextSpec {
            include_roots: include.into_iter().map(Into::into).collect(),
            ..Default::default()
        }
    }

    pub fn exclude<S: Into<String>>(mut self, roots: impl IntoIterator<Item = S>) -> Self {
        self.exclude_roots.extend(roots.into_iter().map(Into::into));
        self
    }

    pub fn subtract(mut self, ids: BTreeSet<String>) -> Self {
        self.other_context_ids
            .get_or_insert_with(BTreeSet::new)
            .extend(ids);
        self
    }
}

/// Articles under `include_roots`, minus those under `exclude_roots`, minus
/// `other_context_ids`. Ids that are not in `store` are dropped.
pub fn collect_context_articles(
    graph: &CategoryGraph,
    store: &ArticleStore,
    spec: &ContextSpec,
) -> Result<BTreeSet<String>> {
    if spec.include_roots.is_empty() {
        return Err(Error::InvalidArgument(
            "context needs at least one include root".into(),
        ));
    }
    let mut ids = graph.articles_under(&spec.include_roots)?;
    if !spec.exclude_roots.is_empty() {
        let excluded = graph.articles_under(&spec.exclude_roots)?;
        ids.retain(|id| !excluded.contains(id));
    }
    if let Some(other) = &spec.other_context_ids {
        ids.retain(|id| !other.contains(id));
    }
    ids.retain(|id| store.contains(id));
    Ok(ids)
}

/// Parses line-delimited article records.
pub fn read_articles<R: BufRead>(reader: R, source_name: &str) -> Result<ArticleStore> {
    let mut store = ArticleStore::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::io(source_name, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: ArticleRecord =
            serde_json::from_str(&line).map_err(|e| Error::Malformed {
                source_name: source_name.to_owned(),
                line: lineno,
                message: e.to_string(),
            })?;
        if store.contains(&record.id) {
            return Err(Error::DuplicateId {
                id: record.id,
                line: lineno,
            });
        }
        store.insert(record)?;
    }
    Ok(store)
}

/// Parses a `parent<TAB>child` edge list into `graph`.
pub fn read_category_edges<R: BufRead>(
    reader: R,
    source_name: &str,
    graph: &mut CategoryGraph,
) -> Result<()> {
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(source_name, e))?;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        match (parts.next(), parts.next(), parts.next()) {
            (Some(p), Some(c), None) if !p.is_empty() && !c.is_empty() => graph.add_edge(p, c),
            _ => {
                return Err(Error::Malformed {
                    source_name: source_name.to_owned(),
                    line: i + 1,
                    message: "expected `parent<TAB>child`".into(),
                })
            }
        }
    }
    Ok(())
}

/// Builds the article store and category graph from in-memory readers.
pub fn ingest<A: BufRead, E: BufRead>(
    articles: A,
    edges: E,
) -> Result<(ArticleStore, CategoryGraph)> {
    let store = read_articles(articles, "articles")?;
    let mut graph = CategoryGraph::new();
    read_category_edges(edges, "edges", &mut graph)?;
    attach_members(&store, &mut graph);
    Ok((store, graph))
}

/// Reads the article JSONL and the edge TSV from disk.
pub fn ingest_articles(
    articles_path: &Path,
    edges_path: &Path,
) -> Result<(ArticleStore, CategoryGraph)> {
    let open = |p: &Path| {
        File::open(p)
            .map(BufReader::new)
            .map_err(|e| Error::io(p, e))
    };
    let store = read_articles(open(articles_path)?, &articles_path.display().to_string())?;
    let mut graph = CategoryGraph::new();
    read_category_edges(
        open(edges_path)?,
        &edges_path.display().to_string(),
        &mut graph,
    )?;
    attach_members(&store, &mut graph);
    Ok((store, graph))
}

fn attach_members(store: &ArticleStore, graph: &mut CategoryGraph) {
    for rec in store.iter() {
        for cat in &rec.categories {
            graph.add_member(cat, &rec.id);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, cats: &[&str]) -> ArticleRecord {
        ArticleRecord {
            id: id.into(),
            title: id.into(),
            text: format!("text of {id}"),
            categories: cats.iter().map(|c| c.to_string()).collect(),
        }
    }

    fn small() -> (ArticleStore, CategoryGraph) {
        let mut store = ArticleStore::new();
        store.insert(rec("a1", &["R"])).unwrap();
        store.insert(rec("a2", &["C"])).unwrap();
        let mut g = CategoryGraph::new();
        g.add_edge("R", "C");
        for r in store.iter() {
            for c in &r.categories {
                g.add_member(c, &r.id);
            }
        }
        (store, g)
    }

    fn ids(v: &[&str]) -> BTreeSet<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_two_records() {
        let data = r#"{"id":"1","title":"Bear","text":"The bear.","categories":["animal"]}
{"id":"2","title":"Car","text":"A car.","categories":[]}
"#;
        let store = read_articles(data.as_bytes(), "t").unwrap();
        assert_eq!(store.len(), 2);
        assert!(store.get("2").unwrap().categories.is_empty());
    }

    #[test]
    fn missing_text_reports_line() {
        let data = "{\"id\":\"1\",\"text\":\"x\"}\n{\"id\":\"2\",\"title\":\"t\"}\n";
        match read_articles(data.as_bytes(), "t") {
            Err(Error::Malformed { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains("text"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_id_rejected() {
        let data = "{\"id\":\"1\",\"text\":\"x\"}\n{\"id\":\"1\",\"text\":\"y\"}\n";
        assert!(matches!(
            read_articles(data.as_bytes(), "t"),
            Err(Error::DuplicateId { line: 2, .. })
        ));
    }

    #[test]
    fn edge_file() {
        let mut g = CategoryGraph::new();
        read_category_edges("animal\tmammals\n".as_bytes(), "e", &mut g).unwrap();
        assert_eq!(g.children("animal").collect::<Vec<_>>(), vec!["mammals"]);
        assert!(g.contains("mammals"));
    }

    #[test]
    fn edge_without_tab_is_malformed() {
        let mut g = CategoryGraph::new();
        let err = read_category_edges("a\tb\nbroken\n".as_bytes(), "e", &mut g).unwrap_err();
        assert!(matches!(err, Error::Malformed { line: 2, .. }));
    }

    #[test]
    fn traversal_includes_descendants() {
        let (store, g) = small();
        let got = collect_context_articles(&g, &store, &ContextSpec::new(["R"])).unwrap();
        assert_eq!(got, ids(&["a1", "a2"]));
    }

    #[test]
    fn traversal_excludes_subtree() {
        let (store, g) = small();
        let spec = ContextSpec::new(["R"]).exclude(["C"]);
        assert_eq!(
            collect_context_articles(&g, &store, &spec).unwrap(),
            ids(&["a1"])
        );
    }

    #[test]
    fn traversal_terminates_on_cycle() {
        let (store, mut g) = small();
        g.add_edge("C", "R");
        let got = collect_context_articles(&g, &store, &ContextSpec::new(["R"])).unwrap();
        assert_eq!(got, ids(&["a1", "a2"]));
    }

    #[test]
    fn subtracts_other_context() {
        let (store, g) = small();
        let spec = ContextSpec::new(["R"]).subtract(ids(&["a2"]));
        assert_eq!(
            collect_context_articles(&g, &store, &spec).unwrap(),
            ids(&["a1"])
        );
    }

    #[test]
    fn unknown_root() {
        let (store, g) = small();
        assert!(matches!(
            collect_context_articles(&g, &store, &ContextSpec::new(["nope"])),
            Err(Error::UnknownCategory(c)) if c == "nope"
        ));
        let spec = ContextSpec::new(["R"]).exclude(["missing"]);
        assert!(collect_context_articles(&g, &store, &spec).is_err());
    }
}
