use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File};
use std::io::{BufWriter, ErrorKind, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{ContextConfig, ExperimentConfig};
use super::guard::OutputGuard;
use super::{
    BuildArgs, Cli, CliError, Command, CorpusCommand, EvalArgs, MatchArgs, MixArgs, ProjectArgs,
    ReportArgs, StatsArgs, TrainArgs, VectorSource,
};
use crate::corpus::{
    build_corpus, collect_context_articles, count_occurrences, frequency_match, ingest_articles,
    mix_corpora, read_corpus, sidecar_path, write_corpus, ContextSpec, CorpusSidecar,
};
use crate::embedding::{load_binary, load_vectors, save_binary, save_vectors, train_sgns, EmbeddingSpace};
use crate::error::Error;
use crate::eval::{
    ensemble_mean, evaluate, filter_participants, mean_feature_ratings, mean_pair_scores, pearson,
    read_feature_ratings, read_judgments, reliability_ceiling, BootstrapOptions, EvalReport,
    Reliability, Removal,
};
use crate::inventory;
use crate::projection::{project_items, AnchorConfig, AnchorMode, RatingsMatrix};
use crate::similarity::{
    loocv_projection_regression, loocv_rawdim_regression, predict_cosine, predict_subspace_cosine,
    write_pair_scores, PairEncoding, PairScores, METHOD_COSINE, METHOD_PROJ_REGRESSION,
    METHOD_RAWDIM_REGRESSION, METHOD_SUBSPACE_COSINE,
};

type CliResult<T> = std::result::Result<T, CliError>;

pub const METHODS: [&str; 4] = [
    METHOD_COSINE,
    METHOD_SUBSPACE_COSINE,
    METHOD_PROJ_REGRESSION,
    METHOD_RAWDIM_REGRESSION,
];

/// One trained space listed in `manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRun {
    pub corpus: String,
    pub window: usize,
    pub dim: usize,
    pub seed: u64,
    pub path: PathBuf,
    pub vocab_size: usize,
    pub corpus_tokens: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainManifest {
    pub runs: Vec<ManifestRun>,
}

/// Everything `eval` writes for one context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalSummary {
    pub context: String,
    pub items: Vec<String>,
    pub vectors: Vec<PathBuf>,
    pub participants: usize,
    pub retained: usize,
    pub removed: Vec<Removal>,
    pub reliability_ceiling: Option<f64>,
    pub reports: Vec<EvalReport>,
}

/// One bar of a similarity-prediction chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotRow {
    pub context: String,
    pub method: String,
    pub r_mean: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub r_full: f64,
    pub ceiling: Option<f64>,
    pub fraction: Option<f64>,
    pub ensemble_size: Option<usize>,
}

impl PlotRow {
    fn of(r: &EvalReport) -> Self {
        PlotRow {
            context: r.context.clone(),
            method: r.method.clone(),
            r_mean: r.r_mean,
            ci_lo: r.ci95[0],
            ci_hi: r.ci95[1],
            r_full: r.r_full,
            ceiling: r.reliability.map(|x| x.ceiling),
            fraction: r.reliability.map(|x| x.fraction),
            ensemble_size: r.ensemble_size,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn require_file(p: &Path) -> CliResult<()> {
    if p.is_file() {
        Ok(())
    } else {
        Err(usage(format!("file not found: {}", p.display())))
    }
}

fn ensure_dir(p: &Path) -> CliResult<()> {
    fs::create_dir_all(p).map_err(|e| CliError::Runtime(Error::io(p, e)))
}

fn stem(p: &Path) -> String {
    p.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".into())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(Error::from)?;
    fs::write(path, text + "\n").map_err(|e| CliError::Runtime(Error::io(path, e)))
}

fn write_csv_rows<T: Serialize>(path: &Path, rows: &[T]) -> CliResult<()> {
    let f = File::create(path).map_err(|e| CliError::Runtime(Error::io(path, e)))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(f));
    for r in rows {
        w.serialize(r).map_err(Error::from)?;
    }
    w.flush().map_err(|e| CliError::Runtime(Error::io(path, e)))
}

struct Ctx {
    cfg: ExperimentConfig,
    seed_flag: Option<u64>,
    out: PathBuf,
}

pub fn dispatch(cli: Cli) -> CliResult<()> {
    let mut cfg = match &cli.config {
        Some(p) => {
            require_file(p)?;
            ExperimentConfig::load(p).map_err(CliError::Usage)?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        cfg.train.threads = t;
    }
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.train.threads)
        .build_global();
    if let Some(o) = cli.out {
        cfg.out = o;
    }
    let ctx = Ctx {
        out: cfg.out.clone(),
        cfg,
        seed_flag: cli.seed,
    };
    match cli.command {
        Command::Corpus(CorpusCommand::Build(a)) => corpus_build(&ctx, a),
        Command::Corpus(CorpusCommand::Mix(a)) => corpus_mix(&ctx, a),
        Command::Corpus(CorpusCommand::Match(a)) => corpus_match(&ctx, a),
        Command::Corpus(CorpusCommand::Stats(a)) => corpus_stats(&ctx, a),
        Command::Train(a) => train(&ctx, a),
        Command::Project(a) => project(&ctx, a),
        Command::Eval(a) => eval(&ctx, a),
        Command::Report(a) => report(&ctx, a),
    }
}

fn corpus_build(ctx: &Ctx, args: BuildArgs) -> CliResult<()> {
    let cfg = &ctx.cfg;
    let articles = args
        .articles
        .or_else(|| cfg.articles.clone())
        .ok_or_else(|| usage("--articles is required"))?;
    let edges = args
        .edges
        .or_else(|| cfg.edges.clone())
        .ok_or_else(|| usage("--edges is required"))?;
    require_file(&articles)?;
    require_file(&edges)?;

    let contexts: Vec<ContextConfig> = if !args.include.is_empty() {
        vec![ContextConfig {
            name: args.name.clone(),
            include: args.include.clone(),
            exclude: args.exclude.clone(),
            target_tokens: args.cap,
            items: None,
        }]
    } else if !cfg.contexts.is_empty() {
        cfg.contexts.clone()
    } else {
        return Err(usage("no --include roots given and no contexts configured"));
    };

    let (store, graph) = ingest_articles(&articles, &edges)?;
    let reached = contexts
        .iter()
        .map(|c| {
            let spec = ContextSpec::new(c.include.clone()).exclude(c.exclude.clone());
            collect_context_articles(&graph, &store, &spec)
        })
        .collect::<crate::Result<Vec<BTreeSet<String>>>>()?;
    let extra = if args.overlap_with.is_empty() {
        BTreeSet::new()
    } else {
        graph.articles_under(&args.overlap_with)?
    };

    ensure_dir(&ctx.out)?;
    let mut guard = OutputGuard::new();
    for (i, c) in contexts.iter().enumerate() {
        let mut others = extra.clone();
        if cfg.remove_overlap {
            for (j, set) in reached.iter().enumerate() {
                if j != i {
                    others.extend(set.iter().cloned());
                }
            }
        }
        let spec = ContextSpec::new(c.include.clone())
            .exclude(c.exclude.clone())
            .subtract(others);
        let ids = collect_context_articles(&graph, &store, &spec)?;
        let corpus = build_corpus(&store, &ids, c.target_tokens.or(args.cap))?;
        let path = guard.track(ctx.out.join(format!("{}.txt", c.name)));
        guard.track(sidecar_path(&path));
        write_corpus(&corpus, &path, &CorpusSidecar::of(&corpus))?;
        println!(
            "{}: {} articles, {} tokens -> {}",
            c.name,
            corpus.articles().len(),
            corpus.token_count(),
            path.display()
        );
    }
    guard.commit();
    Ok(())
}

fn corpus_mix(ctx: &Ctx, args: MixArgs) -> CliResult<()> {
    let mix = ctx.cfg.mix.as_ref();
    let a = args
        .a
        .or_else(|| mix.map(|m| m.a.clone()))
        .ok_or_else(|| usage("--a is required"))?;
    let b = args
        .b
        .or_else(|| mix.map(|m| m.b.clone()))
        .ok_or_else(|| usage("--b is required"))?;
    let fraction = args.fraction.or(mix.map(|m| m.fraction)).unwrap_or(0.5);
    if !(0.0..=1.0).contains(&fraction) {
        return Err(usage(format!("--fraction {fraction} outside [0, 1]")));
    }
    let name = args
        .name
        .or_else(|| mix.map(|m| m.name.clone()))
        .unwrap_or_else(|| "mixed".into());
    require_file(&a)?;
    require_file(&b)?;

    let (ca, _) = read_corpus(&a)?;
    let (cb, _) = read_corpus(&b)?;
    let mixed = mix_corpora(&ca, &cb, fraction, ctx.cfg.seed)?;
    let (mut ka, mut kb) = (stem(&a), stem(&b));
    if ka == kb {
        ka.push_str("_a");
        kb.push_str("_b");
    }
    let mut sidecar = CorpusSidecar::of(&mixed.corpus);
    sidecar.shares = Some(BTreeMap::from([
        (ka.clone(), mixed.shares[0].clone()),
        (kb.clone(), mixed.shares[1].clone()),
    ]));

    ensure_dir(&ctx.out)?;
    let mut guard = OutputGuard::new();
    let path = guard.track(ctx.out.join(format!("{name}.txt")));
    guard.track(sidecar_path(&path));
    write_corpus(&mixed.corpus, &path, &sidecar)?;
    println!(
        "{name}: {} tokens ({ka} {} + {kb} {}) -> {}",
        mixed.corpus.token_count(),
        mixed.shares[0].tokens,
        mixed.shares[1].tokens,
        path.display()
    );
    guard.commit();
    Ok(())
}

fn default_items(cfg: &ExperimentConfig) -> Vec<String> {
    let mut words: BTreeSet<String> = BTreeSet::new();
    for c in [inventory::NATURE, inventory::TRANSPORTATION] {
        words.extend(cfg.items(c).unwrap_or_default());
    }
    for c in &cfg.contexts {
        words.extend(cfg.items(&c.name).unwrap_or_default());
    }
    words.into_iter().collect()
}

fn corpus_match(ctx: &Ctx, args: MatchArgs) -> CliResult<()> {
    let fm = ctx.cfg.frequency_match.as_ref();
    let source = args
        .source
        .or_else(|| fm.map(|m| m.source.clone()))
        .ok_or_else(|| usage("--source is required"))?;
    let reference = args
        .reference
        .or_else(|| fm.map(|m| m.reference.clone()))
        .ok_or_else(|| usage("--reference is required"))?;
    let targets = if !args.targets.is_empty() {
        args.targets
    } else if let Some(m) = fm {
        m.targets.clone()
    } else {
        default_items(&ctx.cfg)
    };
    let name = args
        .name
        .or_else(|| fm.map(|m| m.name.clone()))
        .unwrap_or_else(|| "matched".into());
    require_file(&source)?;
    require_file(&reference)?;

    let (src, _) = read_corpus(&source)?;
    let (rf, _) = read_corpus(&reference)?;
    let matched = frequency_match(&src, &rf, &targets, ctx.cfg.seed)?;

    ensure_dir(&ctx.out)?;
    let mut guard = OutputGuard::new();
    let path = guard.track(ctx.out.join(format!("{name}.txt")));
    guard.track(sidecar_path(&path));
    write_corpus(&matched, &path, &CorpusSidecar::of(&matched))?;
    println!("{name}: {} tokens -> {}", matched.token_count(), path.display());
    for (w, n) in count_occurrences(&matched, &targets) {
        println!("  {w}: {n}");
    }
    guard.commit();
    Ok(())
}

#[derive(Serialize)]
struct CorpusStats {
    path: PathBuf,
    articles: usize,
    token_count: u64,
    vocabulary: usize,
    counts: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    shares: Option<BTreeMap<String, crate::corpus::SourceShare>>,
}

fn corpus_stats(ctx: &Ctx, args: StatsArgs) -> CliResult<()> {
    require_file(&args.corpus)?;
    let (corpus, sidecar) = read_corpus(&args.corpus)?;
    let words = if args.words.is_empty() {
        default_items(&ctx.cfg)
    } else {
        args.words
    };
    let stats = CorpusStats {
        path: args.corpus,
        articles: corpus.articles().len(),
        token_count: corpus.token_count(),
        vocabulary: corpus.word_counts().len(),
        counts: count_occurrences(&corpus, &words),
        shares: sidecar.shares,
    };
    let text = serde_json::to_string_pretty(&stats).map_err(Error::from)?;
    match writeln!(std::io::stdout(), "{text}") {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(Error::io("stdout", e).into()),
        _ => Ok(()),
    }
}

fn manifest_path(out: &Path) -> PathBuf {
    out.join("manifest.json")
}

fn read_manifest(path: &Path) -> CliResult<TrainManifest> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Runtime(Error::io(path, e)))?;
    serde_json::from_str(&text)
        .map_err(|e| usage(format!("invalid manifest {}: {e}", path.display())))
}

fn train(ctx: &Ctx, args: TrainArgs) -> CliResult<()> {
    let cfg = &ctx.cfg;
    require_file(&args.corpus)?;
    let windows = if args.windows.is_empty() {
        cfg.grid.windows.clone()
    } else {
        args.windows
    };
    let dims = if args.dims.is_empty() {
        cfg.grid.dims.clone()
    } else {
        args.dims
    };
    let seeds = if !args.seeds.is_empty() {
        args.seeds
    } else if let Some(s) = ctx.seed_flag {
        vec![s]
    } else {
        cfg.seeds.clone()
    };
    if windows.is_empty() || dims.is_empty() || seeds.is_empty() {
        return Err(usage("training grid and seed list must be non-empty"));
    }
    let mut tc = cfg.train.clone();
    if let Some(v) = args.iterations {
        tc.iterations = v;
    }
    if let Some(v) = args.min_count {
        tc.min_count = v;
    }
    if let Some(v) = args.negatives {
        tc.negatives = v;
    }
    if let Some(v) = args.learning_rate {
        tc.learning_rate = v;
    }
    if let Some(v) = args.subsample {
        tc.subsample_t = v;
    }
    tc.dynamic_window |= args.dynamic_window;
    for &w in &windows {
        for &d in &dims {
            let mut probe = tc.clone();
            probe.window = w;
            probe.dim = d;
            probe.validate().map_err(|e| usage(e.to_string()))?;
        }
    }

    let (corpus, _) = read_corpus(&args.corpus)?;
    let name = stem(&args.corpus);
    ensure_dir(&ctx.out)?;
    let mut guard = OutputGuard::new();
    let mut runs = Vec::new();
    for &w in &windows {
        for &d in &dims {
            for &s in &seeds {
                let mut run_cfg = tc.clone();
                run_cfg.window = w;
                run_cfg.dim = d;
                run_cfg.seed = s;
                let mut space = train_sgns(&corpus, &run_cfg)?;
                space.discard_context();
                let path = guard.track(ctx.out.join(format!("{name}_w{w}_d{d}_s{s}.txt")));
                save_vectors(&space, &path)?;
                if args.binary {
                    let bin = guard.track(path.with_extension("bin"));
                    save_binary(&space, &bin)?;
                }
                println!("{}: {} words", path.display(), space.len());
                runs.push(ManifestRun {
                    corpus: name.clone(),
                    window: w,
                    dim: d,
                    seed: s,
                    path,
                    vocab_size: space.len(),
                    corpus_tokens: corpus.token_count(),
                });
            }
        }
    }

    let mpath = manifest_path(&ctx.out);
    let mut manifest = if mpath.is_file() {
        read_manifest(&mpath)?
    } else {
        TrainManifest::default()
    };
    let fresh: BTreeSet<PathBuf> = runs.iter().map(|r| r.path.clone()).collect();
    manifest.runs.retain(|r| !fresh.contains(&r.path));
    manifest.runs.extend(runs);
    manifest
        .runs
        .sort_by(|a, b| (&a.corpus, a.window, a.dim, a.seed).cmp(&(&b.corpus, b.window, b.dim, b.seed)));
    write_json(&mpath, &manifest)?;
    guard.commit();
    Ok(())
}

fn seed_from_name(p: &Path) -> Option<u64> {
    let s = stem(p);
    let (_, tail) = s.rsplit_once("_s")?;
    tail.parse().ok()
}

/// Vector files and their seeds, from explicit paths or a manifest.
fn resolve_vectors(src: &VectorSource, out: &Path) -> CliResult<Vec<(PathBuf, Option<u64>)>> {
    let found: Vec<(PathBuf, Option<u64>)> = if !src.vectors.is_empty() {
        src.vectors
            .iter()
            .map(|p| (p.clone(), seed_from_name(p)))
            .collect()
    } else {
        let mpath = src.manifest.clone().unwrap_or_else(|| manifest_path(out));
        require_file(&mpath)?;
        let runs: Vec<ManifestRun> = read_manifest(&mpath)?
            .runs
            .into_iter()
            .filter(|r| src.corpus.as_ref().is_none_or(|c| &r.corpus == c))
            .filter(|r| src.window.is_none_or(|w| r.window == w))
            .filter(|r| src.dim.is_none_or(|d| r.dim == d))
            .collect();
        let points: BTreeSet<(&str, usize, usize)> = runs
            .iter()
            .map(|r| (r.corpus.as_str(), r.window, r.dim))
            .collect();
        if points.len() > 1 {
            return Err(usage(format!(
                "manifest {} holds {} corpus/window/dim combinations; select one with --corpus, --window and --dim",
                mpath.display(),
                points.len()
            )));
        }
        runs.into_iter().map(|r| (r.path, Some(r.seed))).collect()
    };
    if found.is_empty() {
        return Err(usage("no vector files selected"));
    }
    for (p, _) in &found {
        require_file(p)?;
    }
    Ok(found)
}

fn load_space(p: &Path) -> crate::Result<EmbeddingSpace> {
    if p.extension().is_some_and(|e| e == "bin") {
        load_binary(p)
    } else {
        load_vectors(p)
    }
}

fn resolve_items(ctx: &Ctx, given: Vec<String>, context: &str) -> CliResult<Vec<String>> {
    if !given.is_empty() {
        return Ok(given);
    }
    ctx.cfg
        .items(context)
        .ok_or_else(|| usage(format!("no items known for context `{context}`; pass --items")))
}

fn resolve_anchors(ctx: &Ctx, given: Option<PathBuf>) -> CliResult<AnchorConfig> {
    match given.or_else(|| ctx.cfg.anchors.clone()) {
        Some(p) => {
            require_file(&p)?;
            AnchorConfig::load(&p).map_err(|e| usage(e.to_string()))
        }
        None => Ok(AnchorConfig::default()),
    }
}

fn ratings_for(
    space: &EmbeddingSpace,
    anchors: &AnchorConfig,
    context: &str,
    mode: AnchorMode,
    items: &[String],
) -> crate::Result<RatingsMatrix> {
    let axes = anchors.axes(space, context, mode)?;
    project_items(space, items, &axes)
}

#[derive(Serialize)]
struct RatingRow<'a> {
    context: &'a str,
    mode: AnchorMode,
    vectors: String,
    seed: Option<u64>,
    item: &'a str,
    feature: &'a str,
    rating: f64,
}

#[derive(Serialize)]
struct FeatureFit {
    feature: String,
    r: Option<f64>,
    participants: usize,
    retained: usize,
}

#[derive(Serialize)]
struct ProjectionSummary {
    context: String,
    mode: AnchorMode,
    vectors: Vec<PathBuf>,
    features: Vec<FeatureFit>,
    mean_r: Option<f64>,
}

fn project(ctx: &Ctx, args: ProjectArgs) -> CliResult<()> {
    let context = args.context.clone();
    let items = resolve_items(ctx, args.items.clone(), &context)?;
    let anchors = resolve_anchors(ctx, args.anchors.clone())?;
    let mode = args.mode.unwrap_or(ctx.cfg.anchor_mode);
    let feature_file = args.feature_ratings.clone().or_else(|| ctx.cfg.feature_ratings.clone());
    if let Some(f) = &feature_file {
        require_file(f)?;
    }
    let vectors = resolve_vectors(&args.source, &ctx.out)?;

    let mut per_run = Vec::new();
    for (p, _) in &vectors {
        let space = load_space(p)?;
        per_run.push(ratings_for(&space, &anchors, &context, mode, &items)?);
    }
    let features = per_run[0].features.clone();
    let n = per_run.len() as f64;
    let mean_values: Vec<Vec<f64>> = (0..items.len())
        .map(|i| {
            (0..features.len())
                .map(|k| per_run.iter().map(|r| r.values[i][k]).sum::<f64>() / n)
                .collect()
        })
        .collect();
    let mean = RatingsMatrix::new(items.clone(), features.clone(), mean_values)?;

    let mut rows = Vec::new();
    let labelled = vectors
        .iter()
        .map(|(p, s)| (p.display().to_string(), *s))
        .zip(&per_run)
        .chain(std::iter::once((("mean".to_string(), None), &mean)));
    for ((label, seed), r) in labelled {
        for (i, item) in items.iter().enumerate() {
            for (k, feature) in features.iter().enumerate() {
                rows.push(RatingRow {
                    context: &context,
                    mode,
                    vectors: label.clone(),
                    seed,
                    item,
                    feature,
                    rating: r.values[i][k],
                });
            }
        }
    }

    ensure_dir(&ctx.out)?;
    let mut guard = OutputGuard::new();
    let csv_path = guard.track(ctx.out.join(format!("ratings_{context}_{mode}.csv")));
    write_csv_rows(&csv_path, &rows)?;
    println!("{}", csv_path.display());

    if let Some(f) = feature_file {
        let threshold = args.threshold.unwrap_or(ctx.cfg.filter_threshold);
        let file = File::open(&f).map_err(|e| CliError::Runtime(Error::io(&f, e)))?;
        let sets = read_feature_ratings(file, &f.display().to_string())?;
        let mut fits = Vec::new();
        for (k, feature) in features.iter().enumerate() {
            let Some(set) = sets.get(&(context.clone(), feature.clone())) else {
                continue;
            };
            let filtered = filter_participants(set, threshold)?;
            let human = mean_feature_ratings(&filtered, feature, &items)?;
            let model: Vec<f64> = (0..items.len()).map(|i| mean.values[i][k]).collect();
            let r = pearson(&model, &human).ok();
            println!("  {feature}: r = {}", r.map_or("undefined".into(), |v| format!("{v:.3}")));
            fits.push(FeatureFit {
                feature: feature.clone(),
                r,
                participants: set.participants().len(),
                retained: filtered.retained().len(),
            });
        }
        let defined: Vec<f64> = fits.iter().filter_map(|f| f.r).collect();
        let summary = ProjectionSummary {
            context: context.clone(),
            mode,
            vectors: vectors.iter().map(|(p, _)| p.clone()).collect(),
            mean_r: (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64),
            features: fits,
        };
        let json_path = guard.track(ctx.out.join(format!("projection_{context}_{mode}.json")));
        write_json(&json_path, &summary)?;
        println!("{}", json_path.display());
    }
    guard.commit();
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn predict_one(
    method: &str,
    space: &EmbeddingSpace,
    context: &str,
    items: &[String],
    truth: &PairScores,
    anchors: &AnchorConfig,
    mode: AnchorMode,
    encoding: PairEncoding,
) -> crate::Result<PairScores> {
    match method {
        METHOD_COSINE => predict_cosine(space, context, items),
        METHOD_SUBSPACE_COSINE => {
            let r = ratings_for(space, anchors, context, mode, items)?;
            predict_subspace_cosine(&r, context, items)
        }
        METHOD_PROJ_REGRESSION => {
            let r = ratings_for(space, anchors, context, mode, items)?;
            loocv_projection_regression(&r, truth, encoding)
        }
        METHOD_RAWDIM_REGRESSION => loocv_rawdim_regression(space, items, truth),
        other => unreachable!("method `{other}` validated earlier"),
    }
}

fn eval(ctx: &Ctx, args: EvalArgs) -> CliResult<()> {
    let cfg = &ctx.cfg;
    let methods = if args.methods.is_empty() {
        cfg.methods.clone()
    } else {
        args.methods.clone()
    };
    for m in &methods {
        if !METHODS.contains(&m.as_str()) {
            return Err(usage(format!(
                "unknown method `{m}`; valid methods: {}",
                METHODS.join(", ")
            )));
        }
    }
    let mut unique = BTreeSet::new();
    if methods.is_empty() || !methods.iter().all(|m| unique.insert(m)) {
        return Err(usage("methods must be a non-empty list without repeats"));
    }
    let context = args.context.clone();
    let items = resolve_items(ctx, args.items.clone(), &context)?;
    let anchors = resolve_anchors(ctx, args.anchors.clone())?;
    let mode = args.mode.unwrap_or(cfg.anchor_mode);
    let encoding = if args.squared {
        PairEncoding::Squared
    } else {
        cfg.encoding
    };
    let judgments = args
        .judgments
        .clone()
        .or_else(|| cfg.judgments.clone())
        .ok_or_else(|| usage("--judgments is required"))?;
    require_file(&judgments)?;
    let vectors = resolve_vectors(&args.source, &ctx.out)?;
    let opts = BootstrapOptions {
        n_boot: args.n_boot.unwrap_or(cfg.n_boot),
        seed: cfg.seed,
        method: args.correlation.unwrap_or(cfg.correlation),
    };
    let threshold = args.threshold.unwrap_or(cfg.filter_threshold);

    let file = File::open(&judgments).map_err(|e| CliError::Runtime(Error::io(&judgments, e)))?;
    let sets = read_judgments(file, &judgments.display().to_string())?;
    let set = sets.get(&context).ok_or_else(|| {
        CliError::Runtime(Error::InvalidArgument(format!(
            "{} has no judgments for context `{context}`",
            judgments.display()
        )))
    })?;
    let filtered = filter_participants(set, threshold)?;
    let truth = mean_pair_scores(&filtered, &items)?;

    let spaces = vectors
        .iter()
        .map(|(p, _)| load_space(p))
        .collect::<crate::Result<Vec<_>>>()?;
    let mut per_seed: Vec<PairScores> = Vec::new();
    let mut ensembles: Vec<PairScores> = Vec::new();
    for m in &methods {
        let runs = spaces
            .iter()
            .zip(&vectors)
            .map(|(space, (_, seed))| {
                predict_one(m, space, &context, &items, &truth, &anchors, mode, encoding)
                    .map(|p| p.with_seed(*seed))
            })
            .collect::<crate::Result<Vec<_>>>()?;
        ensembles.push(ensemble_mean(&runs)?.with_seed(None));
        per_seed.extend(runs);
    }

    let refs: Vec<&PairScores> = ensembles.iter().collect();
    let mut reports = evaluate(&refs, &truth, &opts)?;
    let ceiling = reliability_ceiling(&filtered, 1.0).ok().map(|r| r.ceiling);
    for r in &mut reports {
        r.ensemble_size = Some(vectors.len());
        r.reliability = ceiling.map(|c| Reliability {
            ceiling: c,
            fraction: r.r_mean / c,
        });
    }
    let summary = EvalSummary {
        context: context.clone(),
        items: items.clone(),
        vectors: vectors.iter().map(|(p, _)| p.clone()).collect(),
        participants: set.participants().len(),
        retained: filtered.retained().len(),
        removed: filtered.removed().to_vec(),
        reliability_ceiling: ceiling,
        reports,
    };

    ensure_dir(&ctx.out)?;
    let mut guard = OutputGuard::new();
    let report_path = guard.track(ctx.out.join(format!("eval_{context}.json")));
    write_json(&report_path, &summary)?;
    let pred_path = guard.track(ctx.out.join(format!("pred_{context}.csv")));
    {
        let f = File::create(&pred_path).map_err(|e| CliError::Runtime(Error::io(&pred_path, e)))?;
        let mut all: Vec<&PairScores> = per_seed.iter().collect();
        all.extend(ensembles.iter());
        let human = PairScores::new(&context, "human", truth.pairs.clone(), truth.scores.clone())?;
        all.push(&human);
        write_pair_scores(BufWriter::new(f), &all)?;
    }
    let plot_path = guard.track(ctx.out.join(format!("plot_{context}.csv")));
    let rows: Vec<PlotRow> = summary.reports.iter().map(PlotRow::of).collect();
    write_csv_rows(&plot_path, &rows)?;
    for r in &summary.reports {
        println!(
            "{context} {}: r = {:.3} [{:.3}, {:.3}]",
            r.method, r.r_mean, r.ci95[0], r.ci95[1]
        );
    }
    println!("{}", report_path.display());
    guard.commit();
    Ok(())
}

fn report(ctx: &Ctx, args: ReportArgs) -> CliResult<()> {
    let inputs = if !args.inputs.is_empty() {
        args.inputs
    } else {
        let dir = &ctx.out;
        let entries = fs::read_dir(dir)
            .map_err(|_| usage(format!("output directory not found: {}", dir.display())))?;
        let mut found: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.file_name()
                    .and_then(|n| n.to_str())
                    .is_some_and(|n| n.starts_with("eval_") && n.ends_with(".json"))
            })
            .collect();
        found.sort();
        found
    };
    if inputs.is_empty() {
        return Err(usage("no evaluation reports found"));
    }
    let mut rows = Vec::new();
    for p in &inputs {
        require_file(p)?;
        let text = fs::read_to_string(p).map_err(|e| CliError::Runtime(Error::io(p, e)))?;
        let s: EvalSummary = serde_json::from_str(&text)
            .map_err(|e| usage(format!("{} is not an evaluation report: {e}", p.display())))?;
        rows.extend(s.reports.iter().map(PlotRow::of));
    }
    ensure_dir(&ctx.out)?;
    let mut guard = OutputGuard::new();
    let path = guard.track(ctx.out.join("report.csv"));
    write_csv_rows(&path, &rows)?;
    println!("{:<16} {:<18} {:>7} {:>16} {:>8}", "context", "method", "r", "95% CI", "ceiling");
    for r in &rows {
        println!(
            "{:<16} {:<18} {:>7.3} {:>16} {:>8}",
            r.context,
            r.method,
            r.r_mean,
            format!("[{:.3}, {:.3}]", r.ci_lo, r.ci_hi),
            r.ceiling.map_or("-".into(), |c| format!("{c:.3}"))
        );
    }
    println!("{}", path.display());
    guard.commit();
    Ok(())
}
