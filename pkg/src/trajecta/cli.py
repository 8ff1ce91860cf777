"""Command-line driver for the full pipeline.

Each stage writes file artifacts under the workspace root (cwd or
TRAJECTA_HOME), so stages are independently re-runnable and inspectable.
Exit codes: 0 success, 1 usage error, 2 data/stage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import docgen, embed, index as index_mod, synth, topics, trajops
from .core import PER_USER, PER_USER_PER_DAY, assemble_trajectories, load_dataset
from .dictionaries import defaults as default_dictionaries
from .dictionaries import save as save_dictionaries
from .errors import TrajectaError
from .psr import assign_regions
from .workspace import WorkspaceLayout, load_workspace, resolve_root, run_query, to_canonical_json

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trajecta",
        description="Semantic search over spatially uncertain trajectories",
    )
    parser.add_argument("--root", help="workspace root (default: $TRAJECTA_HOME or cwd)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic dataset into data/")
    p.add_argument("--stations", type=int, default=40)
    p.add_argument("--pois", type=int, default=400)
    p.add_argument("--users", type=int, default=30)
    p.add_argument("--days", type=int, default=3)
    p.add_argument("--start", default="2014-01-10")
    p.add_argument("--seed", type=int, default=7)

    p = sub.add_parser("ingest", help="parse data/, assign regions, build documents")
    p.add_argument("--grouping", choices=[PER_USER, PER_USER_PER_DAY],
                   default=PER_USER_PER_DAY)

    p = sub.add_parser("train-topics", help="train the regional topic model")
    p.add_argument("--topics", type=int, default=6)
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("train-embed", help="train word vectors from trajectory documents")
    p.add_argument("--dim", type=int, default=32)
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("load-embed", help="install a pretrained vector file")
    p.add_argument("file")

    p = sub.add_parser("build-index", help="build the time-partitioned inverted index")
    p.add_argument("--window", type=int, default=600, help="partition size in seconds")

    p = sub.add_parser("query", help="run a natural-language query")
    p.add_argument("sentence")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--topic-weights", help="comma-separated length-T vector")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--max-results", type=int, default=100)
    p.add_argument("--json", action="store_true", dest="as_json")

    p = sub.add_parser("similar", help="semantic distance between two trajectories")
    p.add_argument("id_a")
    p.add_argument("id_b")
    p.add_argument("--w1", type=float, default=1.0)
    p.add_argument("--w2", type=float, default=1.0)
    p.add_argument("--unordered", action="store_true")

    p = sub.add_parser("cluster", help="k-means over home/work semantic features")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("serve", help="start the HTTP API")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    return parser


def _cmd_synth(ws: WorkspaceLayout, args) -> int:
    import datetime as dt

    config = synth.SynthConfig(
        n_stations=args.stations,
        n_pois=args.pois,
        n_users=args.users,
        n_days=args.days,
        start_date=dt.date.fromisoformat(args.start),
        seed=args.seed,
    )
    result = synth.generate(config)
    synth.write_workspace(result, ws.data_dir)
    print(f"wrote {len(result.stations)} stations, {len(result.pois)} pois, "
          f"{len(result.records)} records to {ws.data_dir}")
    return EXIT_OK


def _cmd_ingest(ws: WorkspaceLayout, args) -> int:
    stations_path = ws.require(ws.path("data", "stations.csv"), "stations.csv", "synth")
    pois_path = ws.require(ws.path("data", "pois.csv"), "pois.csv", "synth")
    records_path = ws.require(ws.path("data", "records.csv"), "records.csv", "synth")
    stations, pois, records = load_dataset(stations_path, pois_path, records_path)
    trajectories = assemble_trajectories(records, stations, grouping=args.grouping)
    assignment = assign_regions(stations, pois)
    dicts = default_dictionaries()
    traj_docs, region_docs, poi_docs = docgen.build_documents(
        trajectories, stations, assignment, pois, dicts
    )

    os.makedirs(ws.docs_dir, exist_ok=True)
    os.makedirs(ws.config_dir, exist_ok=True)
    docgen.save_trajectory_documents(traj_docs, ws.path("docs", "trajectory_documents.jsonl"))
    docgen.save_region_documents(region_docs, ws.path("docs", "region_documents.jsonl"))
    docgen.save_poi_documents(poi_docs, ws.path("docs", "poi_documents.jsonl"))
    with open(ws.path("docs", "assignment.json"), "w", encoding="utf-8") as fh:
        json.dump({"poi_to_station": assignment.poi_to_station}, fh,
                  sort_keys=True, separators=(",", ":"))
        fh.write("\n")
    dict_path = ws.path("config", "dictionaries.json")
    if not os.path.exists(dict_path):
        save_dictionaries(dicts, dict_path)
    print(f"ingested {len(trajectories)} trajectories "
          f"({len(records)} records, grouping={args.grouping})")
    return EXIT_OK


def _cmd_train_topics(ws: WorkspaceLayout, args) -> int:
    region_docs = docgen.load_region_documents(
        ws.require(ws.path("docs", "region_documents.jsonl"), "region documents", "ingest")
    )
    model = topics.train_lda(region_docs, args.topics, iters=args.iters, seed=args.seed)
    os.makedirs(ws.models_dir, exist_ok=True)
    topics.save_model(model, ws.path("models", "lda.json"))
    print(f"trained {model.n_topics} topics over {len(region_docs)} regions")
    for t, label in enumerate(model.topic_labels):
        print(f"  topic {t}: {label}")
    return EXIT_OK


def _embedding_corpus(ws: WorkspaceLayout) -> list[list[str]]:
    traj_docs = docgen.load_trajectory_documents(
        ws.require(ws.path("docs", "trajectory_documents.jsonl"), "trajectory documents", "ingest")
    )
    corpus = []
    for doc in traj_docs:
        for entry in doc.entries:
            tokens: list[str] = []
            if entry.time_word:
                tokens.append(entry.time_word)
            for name_tokens in entry.poi_names:
                tokens.extend(name_tokens)
            tokens.extend(entry.poi_categories)
            if tokens:
                corpus.append(tokens)
    return corpus


def _cmd_train_embed(ws: WorkspaceLayout, args) -> int:
    corpus = _embedding_corpus(ws)
    vocab_size = len({w for doc in corpus for w in doc})
    dim = min(args.dim, vocab_size)
    space = embed.train_embeddings(corpus, dim, window=args.window, seed=args.seed)
    os.makedirs(ws.models_dir, exist_ok=True)
    embed.save_embeddings(space, ws.path("models", "vectors.txt"))
    print(f"trained {len(space.vectors)} word vectors (dim={space.dim})")
    return EXIT_OK


def _cmd_load_embed(ws: WorkspaceLayout, args) -> int:
    space = embed.load_embeddings(args.file)
    os.makedirs(ws.models_dir, exist_ok=True)
    embed.save_embeddings(space, ws.path("models", "vectors.txt"))
    print(f"loaded {len(space.vectors)} word vectors (dim={space.dim})")
    return EXIT_OK


def _cmd_build_index(ws: WorkspaceLayout, args) -> int:
    traj_docs = docgen.load_trajectory_documents(
        ws.require(ws.path("docs", "trajectory_documents.jsonl"), "trajectory documents", "ingest")
    )
    ttindex = index_mod.build_index(traj_docs, window_size=args.window)
    index_mod.save_index(ttindex, ws.index_dir)
    print(f"indexed {len(traj_docs)} trajectory documents into "
          f"{ttindex.partition_count} partitions of {args.window}s")
    return EXIT_OK


def _cmd_query(ws: WorkspaceLayout, args) -> int:
    loaded = load_workspace(ws.root)
    request = {
        "sentence": args.sentence,
        "alpha": args.alpha,
        "beta": args.beta,
        "k": args.k,
        "max_results": args.max_results,
    }
    if args.topic_weights:
        request["topic_weights"] = [float(x) for x in args.topic_weights.split(",")]
    response = run_query(loaded, request)
    if args.as_json:
        print(to_canonical_json(response))
        return EXIT_OK
    groups = response["constraints"]["groups"]
    print(f"groups: {[' '.join(g['keywords']) for g in groups]}  "
          f"combinator={response['constraints']['combinator']}")
    print(f"{len(response['trajectories'])} of {response['total_results']} trajectories "
          f"({response['timing_ms']:.1f} ms)")
    for row in response["trajectories"]:
        print(f"  {row['relevance']:.3f}  {row['id']}  points={len(row['points'])}")
    return EXIT_OK


def _cmd_similar(ws: WorkspaceLayout, args) -> int:
    loaded = load_workspace(ws.root)
    for tid in (args.id_a, args.id_b):
        if tid not in loaded.trajectories:
            print(f"unknown trajectory {tid!r}", file=sys.stderr)
            return EXIT_DATA
    sem_a = topics.trajectory_semantics(loaded.model, loaded.trajectories[args.id_a])
    sem_b = topics.trajectory_semantics(loaded.model, loaded.trajectories[args.id_b])
    weights = trajops.MatchWeights(args.w1, args.w2)
    solver = trajops.distance_unordered if args.unordered else trajops.distance_ordered
    result = solver(sem_a, sem_b, weights)
    print(f"cost={result.cost:.6f} matched={len(result.matched)} "
          f"unmatched={len(result.unmatched_a)}+{len(result.unmatched_b)}")
    return EXIT_OK


def _cmd_cluster(ws: WorkspaceLayout, args) -> int:
    loaded = load_workspace(ws.root)
    ids = sorted(loaded.trajectories)
    features = []
    homes = []
    for tid in ids:
        traj = loaded.trajectories[tid]
        sem = topics.trajectory_semantics(loaded.model, traj)
        info = trajops.extract_home_work(traj, sem)
        features.append(info["feature"])
        homes.append((info["home_region"], info["work_region"]))
    k = min(args.k, len(features))
    assignments, _ = trajops.kmeans(features, k, seed=args.seed)
    print(f"clustered {len(ids)} trajectories into {k} groups")
    for tid, cluster, (home, work) in zip(ids, assignments, homes):
        print(f"  {tid}  cluster={cluster}  home={home or '-'}  work={work or '-'}")
    return EXIT_OK


def _cmd_serve(ws: WorkspaceLayout, args) -> int:
    from .service import serve

    loaded = load_workspace(ws.root)
    print(f"serving on http://{args.host}:{args.port}")
    serve(loaded, port=args.port, host=args.host)
    return EXIT_OK


_COMMANDS = {
    "synth": _cmd_synth,
    "ingest": _cmd_ingest,
    "train-topics": _cmd_train_topics,
    "train-embed": _cmd_train_embed,
    "load-embed": _cmd_load_embed,
    "build-index": _cmd_build_index,
    "query": _cmd_query,
    "similar": _cmd_similar,
    "cluster": _cmd_cluster,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    ws = WorkspaceLayout(resolve_root(args.root))
    try:
        return _COMMANDS[args.command](ws, args)
    except TrajectaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
