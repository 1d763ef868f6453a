"""Command-line surface: one Typer command per operation, plus the full `run`."""

from __future__ import annotations

import sys
from collections.abc import Iterable
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import click
import structlog
import typer
from rich.console import Console

from rankfraud import __version__
from rankfraud.config.schema import RankFraudConfig
from rankfraud.core.errors import RankFraudError, ValidationError
from rankfraud.storage.filesystem import FileSystemStorage
from rankfraud.utils.progress import configure_logging, console

app = typer.Typer(
    name="rankfraud",
    help="Search-rank fraud and malware detection for app-market data",
    no_args_is_help=True,
)
err_console = Console(stderr=True)
logger = structlog.get_logger()

APP_TASKS = ("fraud", "malware")
CROSSVAL_TASKS = (*APP_TASKS, "review", "sentiment")
LEARNERS = ("dt", "rf", "mlp")


def _config_option() -> Any:
    return typer.Option(None, "--config", "-c", help="JSON config file")


def _seed_option() -> Any:
    return typer.Option(None, "--seed", help="Master seed (overrides config)")


def _jobs_option() -> Any:
    return typer.Option(None, "--jobs", "-j", min=0, help="Parallel per-app workers; 0 uses every core")


def _out_option() -> Any:
    return typer.Option(None, "--out", "-o", help="Output directory (default: <output_dir>/<command>)")


@dataclass
class _Session:
    config: RankFraudConfig
    storage: FileSystemStorage


def _session(
    command: str,
    params: dict[str, Any],
    *,
    config_path: Path | None,
    seed: int | None,
    jobs: int | None,
    out: Path | None,
    inputs: Iterable[Path] = (),
    overrides: dict[str, Any] | None = None,
) -> _Session:
    """Resolve config, open the output directory and record provenance."""
    from rankfraud.config.loader import load_config
    from rankfraud.storage.schema import provenance_payload

    merged: dict[str, Any] = dict(overrides or {})
    if seed is not None:
        merged["seed"] = seed
    if jobs is not None:
        merged["jobs"] = jobs
    config = load_config(config_path, merged)
    configure_logging(config.log_level)

    protected = [*inputs, *([config_path] if config_path else [])]
    storage = FileSystemStorage(out or Path(config.output_dir) / command, protected=protected)
    storage.create_dir()
    storage.save_json("provenance.json", provenance_payload(command, params, config))
    logger.info("cli.session", command=command, out=str(storage.base_dir), seed=config.seed)
    return _Session(config=config, storage=storage)


def _manifest_inputs(manifest: Path) -> list[Path]:
    from rankfraud.storage.ingest import manifest_inputs

    return manifest_inputs(manifest)


def _check_choice(value: str, choices: tuple[str, ...], flag: str) -> str:
    if value not in choices:
        raise typer.BadParameter(f"choose one of {', '.join(choices)}", param_hint=flag)
    return value


def _banner(title: str) -> None:
    console.print(f"\n[bold blue]rankfraud[/bold blue] v{__version__} · {title}")


@app.command()
def ingest(
    manifest: Path = typer.Argument(..., help="Ingestion manifest (JSON)"),
    config_path: Path | None = _config_option(),
    seed: int | None = _seed_option(),
    jobs: int | None = _jobs_option(),
    out: Path | None = _out_option(),
) -> None:
    """Load and validate a dataset; writes the ingestion report."""
    from rankfraud.core.context import create_run_context
    from rankfraud.core.pipeline import Pipeline
    from rankfraud.stages.ingest.stage import IngestStage

    s = _session("ingest", {"manifest": manifest}, config_path=config_path, seed=seed, jobs=jobs, out=out, inputs=_manifest_inputs(manifest))
    _banner("ingest")
    Pipeline().add_stage(IngestStage(s.storage)).run(create_run_context(s.config, manifest))
    console.print(f"\n[bold green]Report:[/bold green] {s.storage.base_dir / 'ingest_report.json'}")


@app.command()
def generate(
    gen_config: Path | None = typer.Option(None, "--gen-config", help="Generator config (JSON)"),
    fraud_apps: int | None = typer.Option(None, "--fraud-apps", min=0, help="Fraudulent apps to generate"),
    malware_apps: int | None = typer.Option(None, "--malware-apps", min=0, help="Malware apps to generate"),
    benign_apps: int | None = typer.Option(None, "--benign-apps", min=0, help="Benign apps to generate"),
    config_path: Path | None = _config_option(),
    seed: int | None = _seed_option(),
    jobs: int | None = _jobs_option(),
    out: Path | None = _out_option(),
) -> None:
    """Generate a labeled synthetic market with planted fraud campaigns."""
    from pydantic import ValidationError as PydanticValidationError

    from rankfraud.core.errors import ConfigError
    from rankfraud.synth.generator import GenConfig, MarketGenerator, load_gen_config, write_market

    base = load_gen_config(gen_config) if gen_config else GenConfig()
    updates = {"fraud_apps": fraud_apps, "malware_apps": malware_apps, "benign_apps": benign_apps, "seed": seed}
    try:
        gen = GenConfig(**{**base.model_dump(), **{k: v for k, v in updates.items() if v is not None}})
    except PydanticValidationError as exc:
        raise ConfigError(f"Invalid generator config: {exc}") from exc

    s = _session(
        "generate",
        {"gen_config": gen.model_dump(mode="json")},
        config_path=config_path,
        seed=gen.seed,
        jobs=jobs,
        out=out,
        inputs=[gen_config] if gen_config else [],
    )
    _banner("generate")
    market = MarketGenerator(gen).run()
    manifest = write_market(market, s.storage.base_dir)
    summary = market.store.summary()
    console.print(
        f"  [green]Generated[/green] {summary['apps']} apps, {summary['reviews']} reviews, "
        f"{len(market.truth.campaigns)} campaigns (seed {gen.seed})"
    )
    console.print(f"\n[bold green]Manifest:[/bold green] {manifest}")


@app.command()
def graph(
    manifest: Path = typer.Argument(..., help="Ingestion manifest (JSON)"),
    app_id: str = typer.Option(..., "--app", "-a", help="App whose co-review graph to dump"),
    include_self_app: bool | None = typer.Option(
        None, "--include-self-app/--exclude-self-app", help="Count the app itself among common apps"
    ),
    config_path: Path | None = _config_option(),
    seed: int | None = _seed_option(),
    jobs: int | None = _jobs_option(),
    out: Path | None = _out_option(),
) -> None:
    """Dump one app's co-review graph as node and weighted edge lines."""
    from rankfraud.graph.coreview import build_graph
    from rankfraud.storage.ingest import ingest as load_store

    overrides = {"graph": {"include_self_app": include_self_app}} if include_self_app is not None else {}
    s = _session(
        "graph",
        {"manifest": manifest, "app": app_id},
        config_path=config_path,
        seed=seed,
        jobs=jobs,
        out=out,
        inputs=_manifest_inputs(manifest),
        overrides=overrides,
    )
    store = load_store(manifest)
    g = build_graph(store, app_id, include_self_app=s.config.graph.include_self_app)
    path = s.storage.save_lines("graph.txt", "coreview-graph", g.dump_lines())
    console.print(f"  [green]{len(g)}[/green] reviewers, [green]{len(g.edges())}[/green] edges → {path}")


@app.command(name="pcf")
def pcf_command(
    manifest: Path = typer.Argument(..., help="Ingestion manifest (JSON)"),
    app_id: str | None = typer.Option(None, "--app", "-a", help="Only this app (default: every app)"),
    theta: float | None = typer.Option(None, "--theta", help="Density threshold (default 3)"),
    min_size: int | None = typer.Option(None, "--min-size", help="Smallest clique emitted (>= 3)"),
    config_path: Path | None = _config_option(),
    seed: int | None = _seed_option(),
    jobs: int | None = _jobs_option(),
    out: Path | None = _out_option(),
) -> None:
    """Find temporally contiguous pseudo cliques in co-review graphs."""
    from rankfraud.graph.coreview import build_graph
    from rankfraud.graph.pcf import pcf
    from rankfraud.storage.dataset import daily_review_series
    from rankfraud.storage.ingest import ingest as load_store

    pcf_overrides = {k: v for k, v in {"theta": theta, "min_size": min_size}.items() if v is not None}
    s = _session(
        "pcf",
        {"manifest": manifest, "app": app_id, "theta": theta, "min_size": min_size},
        config_path=config_path,
        seed=seed,
        jobs=jobs,
        out=out,
        inputs=_manifest_inputs(manifest),
        overrides={"pcf": pcf_overrides} if pcf_overrides else {},
    )
    store = load_store(manifest)
    app_ids = [store.app(app_id).app_id] if app_id else sorted(store.apps)

    records: list[dict[str, Any]] = []
    for a in app_ids:
        g = build_graph(store, a, include_self_app=s.config.graph.include_self_app)
        records.extend(c.to_record() for c in pcf(g, daily_review_series(store, a), s.config.pcf))
    path = s.storage.save_records("cliques.jsonl", "pseudo-cliques", records)
    apps_with = len({r["app_id"] for r in records})
    console.print(f"  [green]{len(records)}[/green] pseudo cliques in {apps_with} of {len(app_ids)} apps (θ={s.config.pcf.theta}) → {path}")


@app.command()
def features(
    manifest: Path = typer.Argument(..., help="Ingestion manifest (JSON)"),
    review_filter: Path | None = typer.Option(None, "--review-filter", help="Trained review filter (default: train one)"),
    config_path: Path | None = _config_option(),
    seed: int | None = _seed_option(),
    jobs: int | None = _jobs_option(),
    out: Path | None = _out_option(),
) -> None:
    """Assemble the per-app feature matrix."""
    from rankfraud.core.context import create_run_context
    from rankfraud.core.pipeline import Pipeline
    from rankfraud.stages.extraction.stage import ExtractionStage
    from rankfraud.stages.ingest.stage import IngestStage
    from rankfraud.stages.review_filter.stage import ReviewFilterStage

    inputs = _manifest_inputs(manifest) + ([review_filter] if review_filter else [])
    s = _session(
        "features",
        {"manifest": manifest, "review_filter": review_filter},
        config_path=config_path,
        seed=seed,
        jobs=jobs,
        out=out,
        inputs=inputs,
    )
    _banner("features")
    pipeline = Pipeline()
    for stage in (IngestStage(s.storage), ReviewFilterStage(s.storage), ExtractionStage(s.storage)):
        pipeline.add_stage(stage)
    pipeline.run(create_run_context(s.config, manifest, review_filter_path=review_filter))
    console.print(f"\n[bold green]Features:[/bold green] {s.storage.base_dir / 'features.tsv'}")


@app.command(name="train-review-filter")
def train_review_filter(
    manifest: Path = typer.Argument(..., help="Ingestion manifest (JSON)"),
    learner: str | None = typer.Option(None, "--learner", "-l", help="dt, rf or mlp (default mlp)"),
    config_path: Path | None = _config_option(),
    seed: int | None = _seed_option(),
    jobs: int | None = _jobs_option(),
    out: Path | None = _out_option(),
) -> None:
    """Train the fraudulent-review classifier on labeled reviews."""
    from rankfraud.core.context import create_run_context
    from rankfraud.core.pipeline import Pipeline
    from rankfraud.stages.ingest.stage import IngestStage
    from rankfraud.stages.review_filter.stage import ReviewFilterStage

    if learner is not None:
        _check_choice(learner, LEARNERS, "--learner")
    s = _session(
        "train-review-filter",
        {"manifest": manifest, "learner": learner},
        config_path=config_path,
        seed=seed,
        jobs=jobs,
        out=out,
        inputs=_manifest_inputs(manifest),
        overrides={"learn": {"review_learner": learner}} if learner else {},
    )
    _banner("train-review-filter")
    Pipeline().add_stage(IngestStage(s.storage)).add_stage(ReviewFilterStage(s.storage)).run(create_run_context(s.config, manifest))
    console.print(f"\n[bold green]Review filter:[/bold green] {s.storage.base_dir / 'review_filter.json'}")


@app.command(name="train-app")
def train_app(
    manifest: Path = typer.Argument(..., help="Ingestion manifest holding the app labels"),
    features_path: Path = typer.Option(..., "--features", "-f", help="Feature matrix TSV"),
    task: str = typer.Option("fraud", "--task", "-t", help="fraud or malware (positive class vs benign)"),
    learner: str | None = typer.Option(None, "--learner", "-l", help="dt, rf or mlp (default rf)"),
    config_path: Path | None = _config_option(),
    seed: int | None = _seed_option(),
    jobs: int | None = _jobs_option(),
    out: Path | None = _out_option(),
) -> None:
    """Train the app classifier on a feature matrix."""
    import numpy as np

    from rankfraud.learn.experiments import task_rows
    from rankfraud.learn.models import save_model, train
    from rankfraud.stages.extraction.assemble import load_feature_matrix
    from rankfraud.storage.ingest import ingest as load_store
    from rankfraud.types.features import APP_FEATURE_NAMES, APP_SCHEMA

    _check_choice(task, APP_TASKS, "--task")
    if learner is not None:
        _check_choice(learner, LEARNERS, "--learner")
    s = _session(
        "train-app",
        {"manifest": manifest, "features": features_path, "task": task, "learner": learner},
        config_path=config_path,
        seed=seed,
        jobs=jobs,
        out=out,
        inputs=[*_manifest_inputs(manifest), features_path],
        overrides={"learn": {"app_learner": learner}} if learner else {},
    )
    store = load_store(manifest)
    ids, x = load_feature_matrix(features_path)
    _, tx, ty = task_rows(ids, x, store.labels, task)  # type: ignore[arg-type]
    if len(np.unique(ty)) < 2:
        raise ValidationError(f"Task '{task}' needs labeled positive and benign apps; found {len(ty)} labeled row(s)")
    model = train(
        tx,
        ty,
        s.config.learn.app_learner,
        seed=s.config.seed,
        config=s.config.learn,
        feature_names=APP_FEATURE_NAMES,
        schema_version=APP_SCHEMA,
    )
    path = save_model(model, s.storage.path("app_model.json"))
    console.print(f"  [green]Trained[/green] {model.learner} on {len(ty)} apps ({int(ty.sum())} positive) → {path}")


@app.command()
def crossval(
    manifest: Path | None = typer.Argument(None, help="Ingestion manifest (not needed for --task sentiment)"),
    task: str = typer.Option("fraud", "--task", "-t", help="fraud, malware, review or sentiment"),
    learner: str | None = typer.Option(None, "--learner", "-l", help="dt, rf or mlp"),
    k: int | None = typer.Option(None, "--k", "-k", min=2, help="Folds (default 10)"),
    features_path: Path | None = typer.Option(None, "--features", "-f", help="Feature matrix TSV (app tasks)"),
    config_path: Path | None = _config_option(),
    seed: int | None = _seed_option(),
    jobs: int | None = _jobs_option(),
    out: Path | None = _out_option(),
) -> None:
    """Stratified k-fold evaluation: FPR, FNR and accuracy."""
    from rankfraud.learn.experiments import task_rows
    from rankfraud.learn.validation import cross_validate
    from rankfraud.review.filter import review_training_set
    from rankfraud.review.sentiment import evaluate_sentiment, load_sentiment_corpus
    from rankfraud.stages.extraction.assemble import load_feature_matrix
    from rankfraud.stages.review_filter.stage import build_sentiment
    from rankfraud.storage.ingest import ingest as load_store
    from rankfraud.storage.ingest import resolve_asset
    from rankfraud.types.features import APP_FEATURE_NAMES, REVIEW_FEATURE_NAMES
    from rankfraud.utils.progress import format_eval_table, print_eval_table

    _check_choice(task, CROSSVAL_TASKS, "--task")
    if learner is not None:
        _check_choice(learner, LEARNERS, "--learner")
    if task != "sentiment" and manifest is None:
        raise typer.BadParameter(f"a manifest is required for task '{task}'", param_hint="MANIFEST")
    if task in APP_TASKS and features_path is None:
        raise typer.BadParameter(f"--features is required for task '{task}'", param_hint="--features")

    inputs = [*(_manifest_inputs(manifest) if manifest else []), *([features_path] if features_path else [])]
    s = _session(
        "crossval",
        {"manifest": manifest, "task": task, "learner": learner, "k": k, "features": features_path},
        config_path=config_path,
        seed=seed,
        jobs=jobs,
        out=out,
        inputs=inputs,
        overrides={"learn": {"folds": k}} if k else {},
    )
    config = s.config
    folds = config.learn.folds

    if task == "sentiment":
        corpus = load_sentiment_corpus(resolve_asset("sentiment_corpus", config.assets))
        report = evaluate_sentiment(corpus, alpha=config.sentiment.alpha, k=folds, seed=config.seed)
    elif task == "review":
        assert manifest is not None
        store = load_store(manifest)
        x, y, _ = review_training_set(
            store,
            build_sentiment(config, store),
            max_fraud_per_account=config.review.max_fraud_reviews_per_account,
            text_fields=list(config.review.text_fields),
        )
        report = cross_validate(
            x,
            y,
            learner or config.learn.review_learner,
            k=folds,
            seed=config.seed,
            config=config.learn,
            task="review",
            feature_names=REVIEW_FEATURE_NAMES,
        )
    else:
        assert manifest is not None and features_path is not None
        store = load_store(manifest)
        ids, x = load_feature_matrix(features_path)
        _, tx, ty = task_rows(ids, x, store.labels, task)  # type: ignore[arg-type]
        report = cross_validate(
            tx,
            ty,
            learner or config.learn.app_learner,
            k=folds,
            seed=config.seed,
            config=config.learn,
            task=task,
            feature_names=APP_FEATURE_NAMES,
        )

    s.storage.save_json("eval_report.json", report)
    s.storage.save_lines("eval_table.txt", "eval-table", format_eval_table([report]).splitlines())
    print_eval_table([report], title=f"{folds}-fold cross-validation")


@app.command(name="predict")
def predict_command(
    features_path: Path = typer.Option(..., "--features", "-f", help="Feature matrix TSV"),
    model_path: Path = typer.Option(..., "--model", "-m", help="Trained app model (JSON)"),
    config_path: Path | None = _config_option(),
    seed: int | None = _seed_option(),
    jobs: int | None = _jobs_option(),
    out: Path | None = _out_option(),
) -> None:
    """Score apps with a trained app classifier."""
    from rankfraud.learn.models import load_model, predict
    from rankfraud.stages.extraction.assemble import load_feature_matrix
    from rankfraud.stages.reporting.summaries import prediction_frame
    from rankfraud.types.features import APP_SCHEMA

    s = _session(
        "predict",
        {"features": features_path, "model": model_path},
        config_path=config_path,
        seed=seed,
        jobs=jobs,
        out=out,
        inputs=[features_path, model_path],
    )
    model = load_model(model_path)
    ids, x = load_feature_matrix(features_path)
    prediction = predict(model, x, schema_version=APP_SCHEMA, ids=ids)
    path = s.storage.save_frame("predictions.tsv", "predictions", prediction_frame(prediction))
    flagged = sum(prediction.labels)
    share = 100.0 * flagged / len(ids) if ids else 0.0
    console.print(f"  [green]Flagged[/green] {flagged} of {len(ids)} apps ({share:.1f}%) → {path}")


@app.command()
def chisq(
    manifest: Path = typer.Argument(..., help="Ingestion manifest (JSON)"),
    config_path: Path | None = _config_option(),
    seed: int | None = _seed_option(),
    jobs: int | None = _jobs_option(),
    out: Path | None = _out_option(),
) -> None:
    """Pearson chi-square test of install bucket against rating-count bucket."""
    from rankfraud.irr.chisq import chi_square_independence, contingency_from_store
    from rankfraud.storage.ingest import ingest as load_store

    s = _session("chisq", {"manifest": manifest}, config_path=config_path, seed=seed, jobs=jobs, out=out, inputs=_manifest_inputs(manifest))
    store = load_store(manifest)
    result = chi_square_independence(contingency_from_store(store, s.config.bucket_boundaries))
    s.storage.save_json("chisq.json", result)
    s.storage.save_frame("mosaic_cells.tsv", "mosaic-cells", result.cells())
    console.print(f"  χ² = [bold]{result.statistic:.4f}[/bold], dof = {result.dof}, p = {result.p_value:.3g}")


@app.command(name="coercive-scan")
def coercive_scan_command(
    manifest: Path = typer.Argument(..., help="Ingestion manifest (JSON)"),
    keywords_path: Path | None = typer.Option(None, "--keywords", help="Keyword phrase file (default: bundled list)"),
    review_filter: Path | None = typer.Option(None, "--review-filter", help="Trained review filter (default: train one)"),
    min_reviews: int | None = typer.Option(None, "--min-reviews", min=1, help="Matching reviews needed to rank an app (default 2)"),
    config_path: Path | None = _config_option(),
    seed: int | None = _seed_option(),
    jobs: int | None = _jobs_option(),
    out: Path | None = _out_option(),
) -> None:
    """Find apps whose genuine reviews mention coercive review campaigns."""
    import pandas as pd

    from rankfraud.review.coercive import coercive_scan, rank_coercive_apps
    from rankfraud.review.filter import load_review_filter, save_review_filter
    from rankfraud.review.lexicons import load_keywords
    from rankfraud.stages.review_filter.stage import build_review_filter
    from rankfraud.storage.ingest import ingest as load_store
    from rankfraud.storage.ingest import resolve_asset
    from rankfraud.utils.progress import print_frame

    inputs = [*_manifest_inputs(manifest), *(p for p in (keywords_path, review_filter) if p)]
    s = _session(
        "coercive-scan",
        {"manifest": manifest, "keywords": keywords_path, "review_filter": review_filter, "min_reviews": min_reviews},
        config_path=config_path,
        seed=seed,
        jobs=jobs,
        out=out,
        inputs=inputs,
        overrides={"review": {"coercive_min_reviews": min_reviews}} if min_reviews else {},
    )
    config = s.config
    store = load_store(manifest)
    keywords = load_keywords(keywords_path or resolve_asset("coercive_keywords", config.assets, store))
    if review_filter is not None:
        document = load_review_filter(review_filter)
    else:
        document = build_review_filter(store, config)
        save_review_filter(document, s.storage.path("review_filter.json"))
        console.print(f"  [green]Trained[/green] {document.model.learner} review filter")
    rf = document.to_filter()

    hits = coercive_scan(store, keywords, rf, list(config.review.text_fields))
    ranked = rank_coercive_apps(hits, config.review.coercive_min_reviews)
    s.storage.save_records("coercive_hits.jsonl", "coercive-hits", (h.model_dump() for h in hits))
    frame = pd.DataFrame([a.model_dump() for a in ranked], columns=["app_id", "reviews"])
    s.storage.save_frame("coercive_apps.tsv", "coercive-apps", frame)
    console.print(f"  [green]{len(hits)}[/green] matching reviews, [green]{len(ranked)}[/green] apps ranked")
    if len(frame):
        print_frame(frame, "Coercive campaign apps")


@app.command(name="label-gba")
def label_gba(
    manifest: Path = typer.Argument(..., help="Ingestion manifest (JSON)"),
    seed_apps_path: Path | None = typer.Option(None, "--seed-apps", help="File of seed fraud app ids (default: apps labeled fraudulent)"),
    min_seed_apps: int | None = typer.Option(None, "--min-seed-apps", min=1, help="Seed apps an account must have reviewed (default 10)"),
    config_path: Path | None = _config_option(),
    seed: int | None = _seed_option(),
    jobs: int | None = _jobs_option(),
    out: Path | None = _out_option(),
) -> None:
    """Flag accounts by guilt-by-association with seed fraud apps."""
    from rankfraud.review.labeling import guilt_by_association
    from rankfraud.storage.ingest import ingest as load_store

    s = _session(
        "label-gba",
        {"manifest": manifest, "seed_apps": seed_apps_path, "min_seed_apps": min_seed_apps},
        config_path=config_path,
        seed=seed,
        jobs=jobs,
        out=out,
        inputs=[*_manifest_inputs(manifest), *([seed_apps_path] if seed_apps_path else [])],
        overrides={"review": {"gba_min_seed_apps": min_seed_apps}} if min_seed_apps else {},
    )
    store = load_store(manifest)
    if seed_apps_path:
        lines = seed_apps_path.read_text(encoding="utf-8").splitlines()
        seed_apps = [line.strip() for line in lines if line.strip() and not line.startswith("#")]
    else:
        seed_apps = sorted(a for a, label in store.labels.apps.items() if label == "fraudulent")
    result = guilt_by_association(store, seed_apps, min_seed_apps=s.config.review.gba_min_seed_apps)
    s.storage.save_json("gba.json", result)
    console.print(
        f"  [green]{len(result.associated_accounts)}[/green] associated accounts, "
        f"{len(result.fraudulent_review_ids)} reviews labeled fraudulent"
    )


@app.command()
def report(
    manifest: Path = typer.Argument(..., help="Ingestion manifest holding app categories"),
    predictions_path: Path = typer.Option(..., "--predictions", "-p", help="predictions.tsv from a predict run"),
    features_path: Path | None = typer.Option(None, "--features", "-f", help="Feature matrix TSV, for clique statistics"),
    config_path: Path | None = _config_option(),
    seed: int | None = _seed_option(),
    jobs: int | None = _jobs_option(),
    out: Path | None = _out_option(),
) -> None:
    """Per-category fraud density of a predict run, plus clique statistics."""
    import pandas as pd

    from rankfraud.stages.extraction.assemble import load_feature_matrix
    from rankfraud.stages.reporting.summaries import category_fraud_density, clique_summary
    from rankfraud.storage.filesystem import read_frame
    from rankfraud.storage.ingest import ingest as load_store
    from rankfraud.types.features import APP_FEATURE_NAMES
    from rankfraud.utils.progress import print_frame

    inputs = [*_manifest_inputs(manifest), predictions_path, *([features_path] if features_path else [])]
    s = _session(
        "report",
        {"manifest": manifest, "predictions": predictions_path, "features": features_path},
        config_path=config_path,
        seed=seed,
        jobs=jobs,
        out=out,
        inputs=inputs,
    )
    store = load_store(manifest)
    predictions = read_frame(predictions_path)
    if list(predictions.columns) != ["app_id", "label", "score"]:
        raise ValidationError(f"{predictions_path} is not a predictions file (columns: {', '.join(map(str, predictions.columns))})")

    density = category_fraud_density(predictions, store)
    s.storage.save_frame("category_density.tsv", "category-density", density)
    print_frame(density, "Fraud density by category")

    if features_path:
        _, x = load_feature_matrix(features_path)
        summary = clique_summary(pd.DataFrame(x, columns=APP_FEATURE_NAMES))
        s.storage.save_json("clique_summary.json", summary)
        if summary["apps"]:
            console.print(
                f"  Apps with ≥1 clique: {100 * summary['with_clique']:.1f}%, "
                f"≥3 cliques: {100 * summary['with_3_cliques']:.1f}%"
            )


@app.command()
def run(
    manifest: Path = typer.Argument(..., help="Ingestion manifest (JSON)"),
    review_filter: Path | None = typer.Option(None, "--review-filter", help="Reuse a trained review filter"),
    stop_after: str | None = typer.Option(None, "--stop-after", help="Stop after this stage (ingest, review-filter, extraction, training)"),
    config_path: Path | None = _config_option(),
    seed: int | None = _seed_option(),
    jobs: int | None = _jobs_option(),
    out: Path | None = _out_option(),
) -> None:
    """Run the full pipeline: ingest, review filter, features, training, report."""
    from rankfraud.config.loader import load_config
    from rankfraud.core.engine import RankFraudEngine

    overrides = {k: v for k, v in {"seed": seed, "jobs": jobs}.items() if v is not None}
    config = load_config(config_path, overrides)
    configure_logging(config.log_level)

    _banner("run")
    engine = RankFraudEngine(config, manifest, out_dir=out, review_filter_path=review_filter, stop_after=stop_after)
    result = engine.run()

    console.print()
    console.print("[bold green]Run Complete[/bold green]")
    console.print(f"  Run: {result.run_id}")
    console.print(f"  Output: {engine.storage.base_dir}")


@app.command()
def version() -> None:
    """Show version."""
    console.print(f"rankfraud v{__version__}")


def main(argv: list[str] | None = None) -> None:
    """Console entry point: exit 0 on success, 1 on usage or validation errors, 2 on internal errors."""
    configure_logging()
    command = typer.main.get_command(app)
    try:
        result = command.main(args=argv, prog_name="rankfraud", standalone_mode=False)
        code = result if isinstance(result, int) else 0
    except click.ClickException as exc:
        exc.show()
        code = 1
    except click.Abort:
        err_console.print("[red]Aborted.[/red]")
        code = 1
    except RankFraudError as exc:
        err_console.print(f"[red]{exc.code}:[/red] {exc.message}")
        code = 1
    except Exception as exc:
        logger.exception("cli.internal_error", error=str(exc))
        err_console.print(f"[red]Internal error:[/red] {exc}")
        code = 2
    sys.exit(code)


if __name__ == "__main__":
    main()
