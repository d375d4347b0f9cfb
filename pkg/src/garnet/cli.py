"""Command-line front end: purify / attack / eval / bench / gen-sbm.

Configuration comes from an optional JSON file plus flag overrides (flags
win). Every command requires an explicit seed; there is no wall-clock
default, so identical configs reproduce identical artifacts.
"""

import argparse
import json
import os
import sys
import time

import numpy as np

from . import _kernels, gcn as gcn_mod, knn as knn_mod
from . import refine as refine_mod, spectral as spectral_mod
from .attack import (
    DICE_GLOBAL,
    RANDOM_FLIP,
    TARGETED_DICE,
    AttackConfig,
    attack,
    gaussian_features,
    generate_sbm,
    random_split,
    write_move_log,
)
from ._rng import substream
from .errors import ConfigError, DenseLimitExceeded, GarnetError
from .graph import (
    LAPLACIAN,
    SparseGraph,
    homophily_score,
    load_edge_list,
    load_labels,
    normalized_operator,
    write_edge_list,
    write_labels,
)

EXACT_MODE_MAX_N = 50_000  # kNN mode "auto" switches to the NSW index above this


def _require_file(path, what):
    if path is None:
        raise ConfigError(f"missing required path: {what}")
    if not os.path.exists(path):
        raise ConfigError(f"{what} file not found: {path}")
    return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        obj = float(obj)
    if isinstance(obj, float) and not np.isfinite(obj):
        return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
    return obj


def _write_json(payload, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _parse_sigma_sq(text):
    if text in (None, "", "inf", "Inf", "INF", "infinity"):
        return np.inf
    return float(text)


def _merge_config(args, defaults, flag_keys):
    """defaults <- config file <- CLI flags."""
    cfg = dict(defaults)
    if getattr(args, "config", None):
        with open(_require_file(args.config, "config"), "r", encoding="utf-8") as fh:
            cfg.update(json.load(fh))
    for attr, key in flag_keys.items():
        val = getattr(args, attr, None)
        if val is not None:
            cfg[key] = val
    if cfg.get("seed") is None:
        raise ConfigError("a seed is required (set --seed or \"seed\" in the config)")
    cfg["seed"] = int(cfg["seed"])
    if "sigma_sq" in cfg and isinstance(cfg["sigma_sq"], str):
        cfg["sigma_sq"] = _parse_sigma_sq(cfg["sigma_sq"])
    return cfg


def _resolve_r(cfg, n, labels_path=None):
    r = cfg.get("r", "auto")
    if r == "auto" or r is None:
        labels = load_labels(_require_file(labels_path or cfg.get("labels"), "labels"), n)
        return spectral_mod.choose_r(int(labels.max()) + 1, n)
    return int(r)


# ---------------------------------------------------------------------------
# purify
# ---------------------------------------------------------------------------

PURIFY_DEFAULTS = {
    "r": "auto",
    "k": 50,
    "knn_mode": "auto",
    "approx_ef": None,
    "mode": refine_mod.SIMPLIFIED,
    "gamma": None,
    "gamma_percentile": None,
    "sigma_sq": np.inf,
    "r_base": None,
    "concat_features": False,
    "feature_scale": 1.0,
    "tol": 1e-8,
    "dense_limit": spectral_mod.DENSE_LIMIT,
    "dump_embedding": False,
    "dump_scores": False,
    "seed": None,
}


def run_purify(cfg, out_dir):
    """Eigensolve -> weighted embedding -> (optional concat) -> kNN base graph
    -> edge scoring -> pruning. Returns (report dict, timings dict)."""
    os.makedirs(out_dir, exist_ok=True)
    timings = {}
    t_start = time.perf_counter()

    t0 = time.perf_counter()
    g = load_edge_list(_require_file(cfg.get("graph"), "graph"))
    timings["load"] = time.perf_counter() - t0

    r = _resolve_r(cfg, g.n)
    t0 = time.perf_counter()
    op = normalized_operator(g, LAPLACIAN)
    pair = spectral_mod.top_r_eigenpairs(op, r, tol=cfg["tol"], seed=cfg["seed"])
    timings["eigsolve"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    v_emb = spectral_mod.weighted_embedding(pair)
    if cfg["concat_features"]:
        feats = gcn_mod.load_features(_require_file(cfg.get("features"), "features"))
        rows = spectral_mod.embedding_with_features(v_emb, feats, cfg["feature_scale"])
        v_emb = spectral_mod.EmbeddingMatrix(data=rows, source=spectral_mod.ADVERSARIAL_V)
    timings["embed"] = time.perf_counter() - t0

    knn_mode = cfg["knn_mode"]
    if knn_mode == "auto":
        knn_mode = knn_mod.EXACT if g.n <= EXACT_MODE_MAX_N else knn_mod.APPROXIMATE
    kcfg = knn_mod.KnnConfig(k=int(cfg["k"]), mode=knn_mode,
                             approx_ef=cfg["approx_ef"], seed=cfg["seed"])
    t0 = time.perf_counter()
    g_base = knn_mod.build_knn_graph(v_emb.data, kcfg)
    timings["knn"] = time.perf_counter() - t0

    # r_base defaults to the spectral rank, not the (possibly concatenated)
    # embedding width
    r_base = cfg["r_base"] if cfg["r_base"] is not None else r
    rcfg = refine_mod.RefineConfig(gamma=None, mode=cfg["mode"], sigma_sq=cfg["sigma_sq"],
                                   r_base=r_base, tol=cfg["tol"], seed=cfg["seed"])
    t0 = time.perf_counter()
    if cfg["mode"] == refine_mod.FULL:
        scores = refine_mod.score_edges_full(g_base, v_emb, rcfg)
    else:
        scores = refine_mod.score_edges_simplified(g_base, v_emb)
    timings["score"] = time.perf_counter() - t0

    if (cfg["gamma"] is None) == (cfg["gamma_percentile"] is None):
        raise ConfigError("set exactly one of gamma / gamma_percentile")
    if cfg["gamma_percentile"] is not None:
        gamma = refine_mod.resolve_gamma_percentile(scores, float(cfg["gamma_percentile"]))
    else:
        gamma = float(cfg["gamma"])
    rcfg.gamma = gamma

    t0 = time.perf_counter()
    g_out = refine_mod.prune_edges(g_base, scores, rcfg)
    timings["prune"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    write_edge_list(g_out, os.path.join(out_dir, "purified.edges"))
    if cfg["dump_embedding"]:
        spectral_mod.dump_embedding_csv(v_emb, os.path.join(out_dir, "embedding.csv"))
    if cfg["dump_scores"]:
        refine_mod.dump_scores_csv(scores, os.path.join(out_dir, "scores.csv"))
    timings["write"] = time.perf_counter() - t0
    timings["total"] = time.perf_counter() - t_start

    resolved = dict(cfg)
    resolved.update({"r": r, "knn_mode": knn_mode, "approx_ef": kcfg.approx_ef,
                     "gamma_resolved": gamma})
    report = {
        "config": resolved,
        "n": g.n,
        "edges_in": g.num_edges,
        "edges_base": g_base.num_edges,
        "edges_out": g_out.num_edges,
        "lambda_head": pair.eigenvalues[: min(10, r)],
        "lambda_r": float(pair.eigenvalues[-1]),
        "lambda_r_gt_one": bool(pair.eigenvalues[-1] > 1.0),
    }
    return report, timings


def cmd_purify(args):
    cfg = _merge_config(args, PURIFY_DEFAULTS, {
        "graph": "graph", "labels": "labels", "features": "features",
        "r": "r", "k": "k", "gamma": "gamma", "gamma_percentile": "gamma_percentile",
        "mode": "mode", "sigma_sq": "sigma_sq", "r_base": "r_base",
        "concat_features": "concat_features", "feature_scale": "feature_scale",
        "knn_mode": "knn_mode", "approx_ef": "approx_ef", "seed": "seed",
        "dump_embedding": "dump_embedding", "dump_scores": "dump_scores",
    })
    out_dir = args.out or cfg.get("out") or "."
    report, timings = run_purify(cfg, out_dir)
    _write_json(report, os.path.join(out_dir, "report.json"))
    # wall times vary run to run, so they live outside the deterministic report
    _write_json(timings, os.path.join(out_dir, "timings.json"))
    print(f"purified: {report['edges_in']} -> {report['edges_base']} (base) "
          f"-> {report['edges_out']} edges; artifacts in {out_dir}")
    return 0


# ---------------------------------------------------------------------------
# attack
# ---------------------------------------------------------------------------

ATTACK_DEFAULTS = {
    "kind": DICE_GLOBAL,
    "ptb_ratio": 0.0,
    "targets": None,
    "perturbations_per_target": 0,
    "seed": None,
}


def cmd_attack(args):
    cfg = _merge_config(args, ATTACK_DEFAULTS, {
        "graph": "graph", "labels": "labels", "kind": "kind",
        "ptb_ratio": "ptb_ratio", "targets": "targets",
        "per_target": "perturbations_per_target", "seed": "seed",
    })
    out_dir = args.out or cfg.get("out") or "."
    os.makedirs(out_dir, exist_ok=True)
    g = load_edge_list(_require_file(cfg.get("graph"), "graph"))
    labels = load_labels(_require_file(cfg.get("labels"), "labels"), g.n)
    targets = cfg.get("targets")
    if isinstance(targets, str):
        targets = [int(t) for t in targets.split(",") if t]
    acfg = AttackConfig(kind=cfg["kind"], ptb_ratio=float(cfg["ptb_ratio"]),
                                   targets=targets,
                                   perturbations_per_target=int(cfg["perturbations_per_target"]),
                                   seed=cfg["seed"])
    g_adv, moves = attack(g, labels, acfg)
    write_edge_list(g_adv, os.path.join(out_dir, "attacked.edges"))
    write_move_log(moves, os.path.join(out_dir, "moves.csv"))
    report = {
        "config": {**cfg, "targets": targets},
        "n": g.n,
        "edges_before": g.num_edges,
        "edges_after": g_adv.num_edges,
        "moves": len(moves),
        "homophily_before": homophily_score(g, labels) if g.num_edges else None,
        "homophily_after": homophily_score(g_adv, labels) if g_adv.num_edges else None,
    }
    _write_json(report, os.path.join(out_dir, "attack_report.json"))
    print(f"attacked: {len(moves)} moves; homophily "
          f"{report['homophily_before']} -> {report['homophily_after']}")
    return 0


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------

EVAL_DEFAULTS = {
    "repeats": 5,
    "baseline": False,
    "r": "auto",
    "hops": 2,
    "probes": None,
    "dense_limit": spectral_mod.DENSE_LIMIT,
    "tol": 1e-8,
    "gcn": {},
    "seed": None,
}


def _tsvd_baseline_propagation(g_attacked, r, tol, seed, dense_limit):
    op = normalized_operator(g_attacked, LAPLACIAN)
    pair = spectral_mod.top_r_eigenpairs(op, r, tol=tol, seed=seed)
    dense = spectral_mod.low_rank_reconstruct(spectral_mod.weighted_embedding(pair),
                                              dense_limit=dense_limit)
    np.fill_diagonal(dense, 0.0)
    return dense


def cmd_eval(args):
    cfg = _merge_config(args, EVAL_DEFAULTS, {
        "graph": "graph", "attacked": "attacked", "purified": "purified",
        "features": "features", "labels": "labels", "splits": "splits",
        "repeats": "repeats", "baseline": "baseline", "r": "r",
        "hops": "hops", "seed": "seed",
    })
    out_dir = args.out or cfg.get("out") or "."
    os.makedirs(out_dir, exist_ok=True)
    t_start = time.perf_counter()

    g_clean = load_edge_list(_require_file(cfg.get("graph"), "graph"))
    g_att = load_edge_list(_require_file(cfg.get("attacked"), "attacked graph"), n_hint=g_clean.n)
    g_pur = load_edge_list(_require_file(cfg.get("purified"), "purified graph"), n_hint=g_clean.n)
    labels = load_labels(_require_file(cfg.get("labels"), "labels"), g_clean.n)
    feats = gcn_mod.load_features(_require_file(cfg.get("features"), "features"))
    train, val, test = gcn_mod.load_split(_require_file(cfg.get("splits"), "splits"), g_clean.n)
    data = gcn_mod.LabeledDataset(features=feats, labels=labels,
                                  train_mask=train, val_mask=val, test_mask=test)

    variants = {"clean": g_clean, "attacked": g_att, "purified": g_pur}
    errors = {}
    if cfg["baseline"]:
        try:
            r = _resolve_r(cfg, g_clean.n)
            variants["tsvd_baseline"] = _tsvd_baseline_propagation(
                g_att, r, cfg["tol"], cfg["seed"], cfg["dense_limit"])
        except DenseLimitExceeded as exc:
            errors["tsvd_baseline"] = str(exc)

    hyper_cfg = dict(cfg.get("gcn") or {})
    repeats = int(cfg["repeats"])
    seeds = [int(substream(cfg["seed"], f"gcn-repeat-{j}").integers(2 ** 31))
             for j in range(repeats)]

    accs = {}
    for name, graph in variants.items():
        per_seed = []
        for s in seeds:
            hyper = gcn_mod.GcnHyper(**{**hyper_cfg, "seed": s})
            params = gcn_mod.train_gcn(graph, data, hyper)
            per_seed.append(gcn_mod.evaluate(params, graph, data, "test"))
        accs[name] = {
            "mean": float(np.mean(per_seed)),
            "std": float(np.std(per_seed)),
            "per_seed": per_seed,
        }

    homophily = {}
    for name, graph in variants.items():
        if isinstance(graph, SparseGraph) and graph.num_edges > 0:
            homophily[name] = homophily_score(graph, labels)

    probes = cfg.get("probes")
    if probes is None:
        test_ids = np.where(test)[0]
        pick = substream(cfg["seed"], "probes")
        probes = test_ids[pick.choice(test_ids.shape[0], min(5, test_ids.shape[0]),
                                      replace=False)].tolist()
    recall_pur, prec_pur = gcn_mod.recovery_metrics(g_clean, g_pur, probes, hops=int(cfg["hops"]))
    recall_att, prec_att = gcn_mod.recovery_metrics(g_clean, g_att, probes, hops=int(cfg["hops"]))

    report = {
        "config": {**cfg, "probes": probes, "gcn": hyper_cfg, "gcn_seeds": seeds},
        "clean_acc": accs["clean"],
        "adv_acc": accs["attacked"],
        "purified_acc": accs["purified"],
        "baseline_acc": accs.get("tsvd_baseline"),
        "errors": errors or None,
        "homophily": homophily,
        "recovery": {
            "purified": {"recall": recall_pur, "precision": prec_pur},
            "attacked": {"recall": recall_att, "precision": prec_att},
        },
        "runtime_sec": time.perf_counter() - t_start,
    }
    _write_json(report, os.path.join(out_dir, "eval_report.json"))
    print(f"eval: clean {accs['clean']['mean']:.3f} | attacked {accs['attacked']['mean']:.3f} "
          f"| purified {accs['purified']['mean']:.3f}")
    return 0


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------

BENCH_DEFAULTS = {
    "sizes": [10_000, 20_000, 40_000],
    "blocks": 2,
    "deg_in": 8.0,
    "deg_out": 2.0,
    "r": 20,
    "k": 20,
    "approx_ef": None,
    "gamma_percentile": 90.0,
    "warmup": True,
    "seed": None,
}

BENCH_COMPUTE_PHASES = ("eigsolve", "embed", "knn", "score", "prune")
BENCH_PHASES = ("load",) + BENCH_COMPUTE_PHASES + ("write",)


def _bench_once(n, cfg, tmp_dir):
    blocks = int(cfg["blocks"])
    m = n // blocks
    p_in = min(1.0, float(cfg["deg_in"]) / max(1, m - 1))
    p_out = min(p_in * 0.999, float(cfg["deg_out"]) / max(1, n - m))
    g, labels = generate_sbm(n, blocks, p_in, p_out, seed=cfg["seed"])
    graph_path = os.path.join(tmp_dir, f"sbm_{n}.edges")
    write_edge_list(g, graph_path)
    pur_cfg = dict(PURIFY_DEFAULTS)
    pur_cfg.update({
        "graph": graph_path, "r": int(cfg["r"]), "k": int(cfg["k"]),
        "knn_mode": knn_mod.APPROXIMATE, "approx_ef": cfg["approx_ef"],
        "gamma_percentile": float(cfg["gamma_percentile"]),
        "seed": cfg["seed"],
    })
    report, timings = run_purify(pur_cfg, tmp_dir)
    return report, timings


def cmd_bench(args):
    cfg = _merge_config(args, BENCH_DEFAULTS, {
        "sizes": "sizes", "r": "r", "k": "k", "approx_ef": "approx_ef",
        "gamma_percentile": "gamma_percentile", "seed": "seed",
        "no_warmup": "no_warmup",
    })
    if cfg.pop("no_warmup", False):
        cfg["warmup"] = False
    sizes = cfg["sizes"]
    if isinstance(sizes, str):
        sizes = [int(s) for s in sizes.split(",") if s]
    sizes = [int(s) for s in sizes]
    if not sizes:
        raise ConfigError("bench needs at least one size")
    out_dir = args.out or cfg.get("out") or "."
    os.makedirs(out_dir, exist_ok=True)
    work = os.path.join(out_dir, "bench_work")
    os.makedirs(work, exist_ok=True)

    if cfg["warmup"]:
        _bench_once(max(64, min(sizes) // 10), cfg, work)  # JIT + cache warm

    rows = []
    for n in sizes:
        report, timings = _bench_once(n, cfg, work)
        row = {"n": n, "edges": report["edges_in"]}
        for phase in BENCH_PHASES:
            row[f"t_{phase}"] = timings[phase]
        row["t_compute"] = sum(timings[p] for p in BENCH_COMPUTE_PHASES)
        row["t_total"] = timings["total"]
        rows.append(row)
        print(f"n={n:>8} edges={row['edges']:>9} compute={row['t_compute']:.3f}s "
              f"total={row['t_total']:.3f}s")

    csv_path = os.path.join(out_dir, "bench.csv")
    cols = ["n", "edges"] + [f"t_{p}" for p in BENCH_PHASES] + ["t_compute", "t_total"]
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(",".join(cols) + "\n")
        for row in rows:
            fh.write(",".join(f"{row[c]:.6f}" if isinstance(row[c], float) else str(row[c])
                              for c in cols) + "\n")
    print(f"wrote {csv_path}")
    return 0


# ---------------------------------------------------------------------------
# gen-sbm
# ---------------------------------------------------------------------------

GEN_SBM_DEFAULTS = {
    "n": 400,
    "blocks": 2,
    "p_in": 0.1,
    "p_out": 0.01,
    "feature_dim": 4,
    "feature_shift": 0.1,
    "train_frac": 0.1,
    "val_frac": 0.1,
    "seed": None,
}


def cmd_gen_sbm(args):
    cfg = _merge_config(args, GEN_SBM_DEFAULTS, {
        "n": "n", "blocks": "blocks", "p_in": "p_in", "p_out": "p_out",
        "feature_dim": "feature_dim", "feature_shift": "feature_shift",
        "train_frac": "train_frac", "val_frac": "val_frac", "seed": "seed",
    })
    out_dir = args.out or cfg.get("out") or "."
    os.makedirs(out_dir, exist_ok=True)
    g, labels = generate_sbm(int(cfg["n"]), int(cfg["blocks"]),
                                        float(cfg["p_in"]), float(cfg["p_out"]),
                                        seed=cfg["seed"])
    feats = gaussian_features(labels, int(cfg["feature_dim"]),
                                         float(cfg["feature_shift"]), seed=cfg["seed"])
    train, val, test = random_split(labels, float(cfg["train_frac"]),
                                               float(cfg["val_frac"]), seed=cfg["seed"])
    write_edge_list(g, os.path.join(out_dir, "graph.edges"))
    write_labels(labels, os.path.join(out_dir, "labels.txt"))
    np.save(os.path.join(out_dir, "features.npy"), feats)
    gcn_mod.save_split(train, val, test, os.path.join(out_dir, "splits.json"))
    _write_json({**cfg, "edges": g.num_edges,
                 "homophily": homophily_score(g, labels) if g.num_edges else None},
                os.path.join(out_dir, "meta.json"))
    print(f"generated SBM n={g.n} edges={g.num_edges} in {out_dir}")
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _add_common(p):
    p.add_argument("--config", help="JSON config file; flags override its keys")
    p.add_argument("--seed", type=int, help="root seed (required here or in the config)")
    p.add_argument("--out", help="output directory")


def build_parser():
    parser = argparse.ArgumentParser(prog="garnet",
                                     description="Spectral graph purification toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("purify", help="purify a (possibly attacked) graph")
    _add_common(p)
    p.add_argument("--graph")
    p.add_argument("--labels")
    p.add_argument("--features")
    p.add_argument("--r", help="embedding rank, or 'auto' for ten per class")
    p.add_argument("--k", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--gamma-percentile", dest="gamma_percentile", type=float)
    p.add_argument("--mode", choices=[refine_mod.FULL, refine_mod.SIMPLIFIED])
    p.add_argument("--sigma-sq", dest="sigma_sq", type=_parse_sigma_sq)
    p.add_argument("--r-base", dest="r_base", type=int)
    p.add_argument("--concat-features", dest="concat_features", action="store_const", const=True)
    p.add_argument("--feature-scale", dest="feature_scale", type=float)
    p.add_argument("--knn-mode", dest="knn_mode", choices=["auto", knn_mod.EXACT, knn_mod.APPROXIMATE])
    p.add_argument("--approx-ef", dest="approx_ef", type=int)
    p.add_argument("--dump-embedding", dest="dump_embedding", action="store_const", const=True)
    p.add_argument("--dump-scores", dest="dump_scores", action="store_const", const=True)
    p.set_defaults(func=cmd_purify)

    p = sub.add_parser("attack", help="perturb a graph with a label-aware random attack")
    _add_common(p)
    p.add_argument("--graph")
    p.add_argument("--labels")
    p.add_argument("--kind", choices=[DICE_GLOBAL, RANDOM_FLIP,
                                      TARGETED_DICE])
    p.add_argument("--ptb-ratio", dest="ptb_ratio", type=float)
    p.add_argument("--targets", help="comma-separated node ids")
    p.add_argument("--per-target", dest="per_target", type=int)
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("eval", help="compare GCN accuracy across graph variants")
    _add_common(p)
    p.add_argument("--graph")
    p.add_argument("--attacked")
    p.add_argument("--purified")
    p.add_argument("--features")
    p.add_argument("--labels")
    p.add_argument("--splits")
    p.add_argument("--repeats", type=int)
    p.add_argument("--baseline", action="store_const", const=True,
                   help="also train on the dense low-rank reconstruction")
    p.add_argument("--r", help="rank for the baseline reconstruction")
    p.add_argument("--hops", type=int)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="phase timings across an SBM size sweep")
    _add_common(p)
    p.add_argument("--sizes", help="comma-separated node counts")
    p.add_argument("--r", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--approx-ef", dest="approx_ef", type=int)
    p.add_argument("--gamma-percentile", dest="gamma_percentile", type=float)
    p.add_argument("--no-warmup", dest="no_warmup", action="store_const", const=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen-sbm", help="generate a synthetic SBM dataset")
    _add_common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--blocks", type=int)
    p.add_argument("--p-in", dest="p_in", type=float)
    p.add_argument("--p-out", dest="p_out", type=float)
    p.add_argument("--feature-dim", dest="feature_dim", type=int)
    p.add_argument("--feature-shift", dest="feature_shift", type=float)
    p.add_argument("--train-frac", dest="train_frac", type=float)
    p.add_argument("--val-frac", dest="val_frac", type=float)
    p.set_defaults(func=cmd_gen_sbm)

    return parser


def main(argv=None) -> int:
    _kernels.configure_threads()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GarnetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 7


if __name__ == "__main__":
    sys.exit(main())
