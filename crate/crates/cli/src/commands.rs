use std::fs;
use std::io::Write;

use anyhow::anyhow;
use rayon::prelude::*;

use netclass::eval::{
    cluster_category_overlap, cross_validate, DEFAULT_FOLDS, DEFAULT_MERGE_THRESHOLD,
};
use netclass::features::{write_feature_csv, FeatureRow};
use netclass::graph::read_graph_file;
use netclass::ml::{
    fit_standardize, forest_train, kmeans, tsne, Dataset, Forest, ForestParams, KMeansParams,
    TsneParams,
};
use netclass::numfmt::format_real;
use netclass::synth::{
    default_corpus_specs, generate_corpus, parse_generator_specs, write_corpus_manifest,
};
use netclass::{extract_features, FeatureVector};

use crate::config::Config;
use crate::failure::{invalid, CmdResult, Context, Status};
use crate::io::{
    create_dir, csv_bytes, read_features, read_manifest, read_table, write_atomic, Table,
};
use crate::{
    ClusterArgs, EmbedArgs, EvaluateArgs, FeaturesArgs, ForestArgs, GenerateArgs, PredictArgs,
    TrainArgs,
};

fn extract_file(path: &std::path::Path) -> anyhow::Result<FeatureVector> {
    let (graph, _, _) = read_graph_file(path)?;
    Ok(extract_features(&graph)?)
}

/// Reports per-item failures on stderr and picks the exit status.
fn report_failures(failures: &[(String, anyhow::Error)]) -> Status {
    for (what, err) in failures {
        eprintln!("error: {what}: {err:#}");
    }
    if failures.is_empty() {
        Status::Success
    } else {
        eprintln!("{} input(s) skipped", failures.len());
        Status::Partial
    }
}

pub fn features(args: &FeaturesArgs) -> CmdResult {
    let entries = read_manifest(&args.manifest)?;
    let results: Vec<_> = entries.par_iter().map(|e| extract_file(&e.path)).collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (entry, result) in entries.into_iter().zip(results) {
        match result {
            Ok(features) => rows.push(FeatureRow {
                name: entry.name,
                category: entry.category,
                features,
            }),
            Err(e) => failures.push((entry.path.display().to_string(), e)),
        }
    }
    let mut buf = Vec::new();
    write_feature_csv(&rows, &mut buf).internal_ctx("formatting feature csv")?;
    write_atomic(&args.out, &buf)?;
    Ok(report_failures(&failures))
}

pub fn generate(args: &GenerateArgs, config: &Config) -> CmdResult {
    let seed = config.seed(args.seed)?;
    let specs = match &args.spec {
        Some(p) => {
            let text = fs::read_to_string(p).invalid_ctx(format!("reading {}", p.display()))?;
            parse_generator_specs(&text, seed).invalid_ctx(format!("spec {}", p.display()))?
        }
        None => default_corpus_specs(seed),
    };
    for s in &specs {
        s.validate().map_err(invalid)?;
    }
    create_dir(&args.out_dir)?;
    let corpus = generate_corpus(&specs).map_err(invalid)?;
    let files: Vec<String> = corpus.iter().map(|e| format!("{}.edges", e.name)).collect();
    corpus
        .par_iter()
        .zip(&files)
        .try_for_each(|(entry, file)| {
            write_atomic(
                &args.out_dir.join(file),
                entry.graph.to_edge_list_string().as_bytes(),
            )
        })?;
    let mut manifest = Vec::new();
    write_corpus_manifest(&corpus, &files, &mut manifest).internal_ctx("formatting manifest")?;
    write_atomic(&args.out_dir.join("manifest.csv"), &manifest)?;
    println!(
        "generated {} graphs in {}",
        corpus.len(),
        args.out_dir.display()
    );
    Ok(Status::Success)
}

fn forest_params(args: &ForestArgs, config: &Config, n_features: usize) -> CmdResult<ForestParams> {
    let defaults = ForestParams::default();
    let params = ForestParams {
        n_trees: config.resolve(args.trees, "trees", defaults.n_trees)?,
        features_per_split: config.optional(args.features_per_split, "features_per_split")?,
        min_split: config.resolve(args.min_split, "min_split", defaults.min_split)?,
        ..defaults
    };
    params.validate(n_features).map_err(invalid)?;
    Ok(params)
}

fn labeled_dataset(path: &std::path::Path) -> CmdResult<Dataset> {
    let rows = read_features(path)?;
    Dataset::from_feature_rows(&rows).invalid_ctx(format!("feature csv {}", path.display()))
}

pub fn train(args: &TrainArgs, config: &Config) -> CmdResult {
    let seed = config.seed(args.seed)?;
    let d = labeled_dataset(&args.features)?;
    let params = forest_params(&args.forest, config, d.n_features())?;
    let forest = forest_train(&d, &params, seed).internal_ctx("training")?;
    let accuracy = forest.accuracy(&d).internal_ctx("scoring")?;
    let mut json = forest.to_json();
    json.push('\n');
    write_atomic(&args.model, json.as_bytes())?;
    println!(
        "trained {} trees on {} rows, {} classes",
        forest.n_trees(),
        d.len(),
        d.n_classes()
    );
    println!("training accuracy: {}", format_real(accuracy));
    Ok(Status::Success)
}

pub fn predict(args: &PredictArgs) -> CmdResult {
    let file =
        fs::File::open(&args.model).invalid_ctx(format!("opening {}", args.model.display()))?;
    let forest = Forest::load(std::io::BufReader::new(file))
        .invalid_ctx(format!("model {}", args.model.display()))?;
    let results: Vec<_> = args
        .graphs
        .par_iter()
        .map(|p| extract_file(p).and_then(|f| Ok(forest.predict(&f.to_array())?)))
        .collect();
    let labels = forest.label_names();
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    for (path, result) in args.graphs.iter().zip(results) {
        match result {
            Ok(p) => rows.push((path.display().to_string(), p)),
            Err(e) => failures.push((path.display().to_string(), e)),
        }
    }
    let n_trees = forest.n_trees() as f64;
    let bytes = csv_bytes(|w| {
        let mut header: Vec<String> = ["file", "predicted", "vote_share"]
            .map(String::from)
            .to_vec();
        header.extend(labels.iter().map(|l| format!("votes_{l}")));
        w.write_record(&header)?;
        for (file, p) in &rows {
            let mut record = vec![
                file.clone(),
                labels[p.label].clone(),
                format_real(p.votes[p.label] as f64 / n_trees),
            ];
            record.extend(p.votes.iter().map(usize::to_string));
            w.write_record(&record)?;
        }
        Ok(())
    })?;
    match &args.out {
        Some(path) => write_atomic(path, &bytes)?,
        None => std::io::stdout()
            .write_all(&bytes)
            .internal_ctx("writing stdout")?,
    }
    Ok(report_failures(&failures))
}

pub fn evaluate(args: &EvaluateArgs, config: &Config) -> CmdResult {
    let seed = config.seed(args.seed)?;
    let folds = config.resolve(args.folds, "folds", DEFAULT_FOLDS)?;
    let d = labeled_dataset(&args.features)?;
    let params = forest_params(&args.forest, config, d.n_features())?;
    if folds < 2 || folds > d.len() {
        return Err(invalid(anyhow!(
            "fold count {folds} must be between 2 and the {} rows",
            d.len()
        )));
    }
    let r = cross_validate(&d, &params, folds, seed).internal_ctx("cross-validation")?;

    create_dir(&args.out_dir)?;
    let mut confusion = Vec::new();
    r.confusion
        .write_csv(&mut confusion)
        .internal_ctx("formatting confusion matrix")?;
    write_atomic(&args.out_dir.join("confusion.csv"), &confusion)?;
    let table = r.confusion.to_text_table();
    write_atomic(&args.out_dir.join("confusion.txt"), table.as_bytes())?;
    let mut misclass = Vec::new();
    r.misclass
        .write_csv(&mut misclass)
        .internal_ctx("formatting misclassifications")?;
    write_atomic(&args.out_dir.join("misclassified.csv"), &misclass)?;
    let summary = csv_bytes(|w| {
        w.write_record(["rows", "folds", "seed", "correct", "accuracy"])?;
        w.write_record([
            d.len().to_string(),
            folds.to_string(),
            seed.to_string(),
            r.confusion.trace().to_string(),
            format_real(r.accuracy),
        ])
    })?;
    write_atomic(&args.out_dir.join("summary.csv"), &summary)?;

    println!(
        "cross-validated accuracy: {} ({} of {} rows, {folds} folds)",
        format_real(r.accuracy),
        r.confusion.trace(),
        d.len()
    );
    print!("{table}");
    Ok(Status::Success)
}

/// Feature CSVs are log-scaled and z-scored; generic tables are used as is.
fn model_input(table: &Table) -> CmdResult<ndarray::Array2<f64>> {
    if table.is_features {
        let (z, _) = fit_standardize(table.x.view(), &table.log_columns()).map_err(invalid)?;
        Ok(z)
    } else {
        Ok(table.x.clone())
    }
}

pub fn embed(args: &EmbedArgs, config: &Config) -> CmdResult {
    let seed = config.seed(args.seed)?;
    let defaults = TsneParams::default();
    let params = TsneParams {
        perplexity: config.resolve(args.perplexity, "perplexity", defaults.perplexity)?,
        iterations: config.resolve(args.iterations, "iterations", defaults.iterations)?,
        learning_rate: config.resolve(
            args.learning_rate,
            "learning_rate",
            defaults.learning_rate,
        )?,
        exaggeration: config.resolve(args.exaggeration, "exaggeration", defaults.exaggeration)?,
        exaggeration_iters: config.resolve(
            args.exaggeration_iters,
            "exaggeration_iters",
            defaults.exaggeration_iters,
        )?,
        ..defaults
    };
    let table = read_table(&args.input)?;
    params.validate(table.names.len()).map_err(invalid)?;
    let x = model_input(&table)?;
    let embedding = tsne(x.view(), &params, seed).internal_ctx("t-SNE")?;
    let bytes = csv_bytes(|w| {
        w.write_record(["name", "category", "x", "y"])?;
        for (i, name) in table.names.iter().enumerate() {
            w.write_record([
                name.clone(),
                table.categories[i].clone().unwrap_or_default(),
                format_real(embedding.coords[[i, 0]]),
                format_real(embedding.coords[[i, 1]]),
            ])?;
        }
        Ok(())
    })?;
    write_atomic(&args.out, &bytes)?;
    println!(
        "embedded {} rows, KL divergence {}",
        table.names.len(),
        format_real(embedding.kl)
    );
    Ok(Status::Success)
}

pub fn cluster(args: &ClusterArgs, config: &Config) -> CmdResult {
    let seed = config.seed(args.seed)?;
    let k = config.optional(args.k, "k")?.ok_or_else(|| {
        invalid(anyhow!(
            "the cluster count is required (--k or config key k)"
        ))
    })?;
    let defaults = KMeansParams::new(k);
    let params = KMeansParams {
        k,
        restarts: config.resolve(args.restarts, "restarts", defaults.restarts)?,
        max_iter: config.resolve(args.max_iter, "max_iter", defaults.max_iter)?,
    };
    let threshold = config.resolve(
        args.merge_threshold,
        "merge_threshold",
        DEFAULT_MERGE_THRESHOLD,
    )?;
    let table = read_table(&args.input)?;
    let n = table.names.len();
    if k == 0 || k > n {
        return Err(invalid(anyhow!(
            "cluster count {k} must be between 1 and the {n} rows"
        )));
    }
    if params.restarts == 0 {
        return Err(invalid(anyhow!("restarts must be at least 1")));
    }
    let x = model_input(&table)?;
    let result = kmeans(x.view(), &params, seed).internal_ctx("k-means")?;

    // Overlap covers labeled rows only; categories sorted by name.
    let mut categories: Vec<String> = table.categories.iter().flatten().cloned().collect();
    categories.sort();
    categories.dedup();
    let (mut assigned, mut labels) = (Vec::new(), Vec::new());
    for (i, c) in table.categories.iter().enumerate() {
        if let Some(c) = c {
            assigned.push(result.assignments[i]);
            labels.push(categories.binary_search(c).expect("known category"));
        }
    }
    let overlap = cluster_category_overlap(&assigned, &labels, k, &categories, threshold)
        .internal_ctx("overlap")?;

    create_dir(&args.out_dir)?;
    let clusters = csv_bytes(|w| {
        w.write_record(["name", "category", "cluster"])?;
        for (i, name) in table.names.iter().enumerate() {
            w.write_record([
                name.clone(),
                table.categories[i].clone().unwrap_or_default(),
                result.assignments[i].to_string(),
            ])?;
        }
        Ok(())
    })?;
    write_atomic(&args.out_dir.join("clusters.csv"), &clusters)?;
    let sizes = result.cluster_sizes();
    let centroids = csv_bytes(|w| {
        let mut header: Vec<String> = ["cluster", "size"].map(String::from).to_vec();
        header.extend(table.columns.iter().cloned());
        w.write_record(&header)?;
        for (c, row) in result.centroids.rows().into_iter().enumerate() {
            let mut record = vec![c.to_string(), sizes[c].to_string()];
            record.extend(row.iter().map(|&v| format_real(v)));
            w.write_record(&record)?;
        }
        Ok(())
    })?;
    write_atomic(&args.out_dir.join("centroids.csv"), &centroids)?;
    let mut table_csv = Vec::new();
    overlap
        .write_table_csv(&mut table_csv)
        .internal_ctx("formatting overlap")?;
    write_atomic(&args.out_dir.join("overlap.csv"), &table_csv)?;
    let mut suggestions = Vec::new();
    overlap
        .write_suggestions_csv(&mut suggestions)
        .internal_ctx("formatting suggestions")?;
    write_atomic(&args.out_dir.join("merge_suggestions.csv"), &suggestions)?;

    println!("k-means inertia: {}", format_real(result.inertia));
    println!("overall purity: {}", format_real(overlap.overall_purity));
    for s in &overlap.suggestions {
        println!(
            "suggest merging {} and {} (co-clustering mass {})",
            categories[s.a],
            categories[s.b],
            format_real(s.mass)
        );
    }
    Ok(Status::Success)
}
