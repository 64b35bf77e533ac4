"""Experiment harness.

Subcommands: decompose | denoise | classify | bench-synth | grid.
Configuration comes from a flat-key JSON file (--config); command-line
flags override file values.  Every run writes a manifest with the config
hash, toolkit version, and wall-clock per phase.  LOLREC_THREADS caps
sweep parallelism (default 1); CSV rows are ordered by sweep index, not
completion order, so output bytes are reproducible.
"""

import argparse
import concurrent.futures
import hashlib
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .classify import one_hot, predict_labels, train_classifier
from .errors import ToolkitError
from .latlrr import latlrr_solve
from .matrix_io import (image_to_matrix, load_matrix_csv, load_pgm,
                        matrix_to_image, save_matrix_csv, save_pgm, tile_images)
from .solver import SolverConfig, solve
from .synth import (SubspaceSpec, add_gaussian_noise_snr, classification_accuracy,
                    corrupt_random_pixels, invert_pixels, offblock_ratio,
                    reconstruction_accuracy, synth_blobs, synth_subspaces)

CANDIDATE_GRID = [10.0 ** p for p in range(-8, 9, 2)]

_SOLVERS = {
    "aslrc": lambda X, cfg: solve(X, cfg, record_lagrangian=False),
    "latlrr": lambda X, cfg: latlrr_solve(X, cfg.lam, cfg, record_lagrangian=False),
}

DEFAULTS = {
    "alpha": 0.01, "beta": 0.01, "lambda": 0.015,
    "mu0": 1e-6, "eta": 1.12, "mu_max": 1e10, "tol": 1e-6, "max_iter": 300,
    "seed": 0, "method": "aslrc", "methods": None,
    "input": None, "out": "out", "resize": None,
    "protocol": "pixels", "pct_list": [10, 20, 30, 40, 50], "snr_list": [10.0],
    "train_count": 30, "test_count": 30, "splits": 10, "data": "blobs",
    "classes": 3, "dim": 20, "grid_values": None, "pct": 0.0,
    "subspaces": 3, "sub_dim": 3, "ambient": 50, "n_per": 20,
    "noise_sigma": 0.0, "amplitude": 4.0, "blob_sep": 3.0,
}


def _threads():
    try:
        return max(1, int(os.environ.get("LOLREC_THREADS", "1")))
    except ValueError:
        return 1


def _run_indexed(jobs):
    """Run callables, possibly in parallel; results come back in job order."""
    n = _threads()
    if n == 1 or len(jobs) <= 1:
        return [job() for job in jobs]
    with concurrent.futures.ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(lambda j: j(), jobs))


def _solver_config(cfg):
    return SolverConfig(
        alpha=cfg["alpha"], beta=cfg["beta"], lam=cfg["lambda"],
        mu0=cfg["mu0"], eta=cfg["eta"], mu_max=cfg["mu_max"],
        tol=cfg["tol"], max_iter=int(cfg["max_iter"]), seed=int(cfg["seed"]),
    )


def _methods(cfg):
    methods = cfg["methods"] or [cfg["method"]]
    for m in methods:
        if m not in _SOLVERS:
            raise ValueError(f"unknown method {m!r}")
    return methods


def _write_csv(path, header, rows):
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join("%.17g" % v if isinstance(v, float) else str(v) for v in row))
            fh.write("\n")


def _write_trace(path, trace):
    _write_csv(path, ["iteration", "residual", "mu", "lagrangian"],
               [(p.iteration, float(p.residual), float(p.mu), float(p.lagrangian)) for p in trace])


def _subspace_spec(cfg):
    return SubspaceSpec(
        k=int(cfg["subspaces"]), sub_dim=int(cfg["sub_dim"]), d=int(cfg["ambient"]),
        n_per=int(cfg["n_per"]), noise_sigma=cfg["noise_sigma"],
        seed=int(cfg["seed"]), amplitude=cfg["amplitude"],
    )


def cmd_decompose(cfg, out):
    inputs = cfg["input"]
    if inputs is None:
        raise ValueError("decompose needs an input path")
    if isinstance(inputs, str):
        inputs = [inputs]
    is_image = all(str(p).lower().endswith(".pgm") for p in inputs)
    if is_image:
        resize = tuple(cfg["resize"]) if cfg["resize"] else None
        grids = [load_pgm(p, resize=resize) for p in inputs]
        h, w = grids[0].pixels.shape
        X = np.column_stack([image_to_matrix(g).ravel() for g in grids])
    elif len(inputs) == 1:
        X = load_matrix_csv(inputs[0])
    else:
        raise ValueError("multiple inputs must all be PGM images")

    scfg = _solver_config(cfg)
    method = _methods(cfg)[0]
    dec = _SOLVERS[method](X, scfg)

    save_matrix_csv(dec.Z_star, out / "Z.csv")
    save_matrix_csv(dec.L_star, out / "L.csv")
    save_matrix_csv(dec.E_star, out / "E.csv")
    save_matrix_csv(dec.principal, out / "XZ.csv")
    save_matrix_csv(dec.salient, out / "LX.csv")
    _write_trace(out / "trace.csv", dec.trace)

    if is_image:
        panels = []
        for j in range(X.shape[1]):
            for part in (X[:, j], dec.principal[:, j], dec.salient[:, j], dec.E_star[:, j]):
                panels.append(matrix_to_image(part, h, w))
        save_pgm(tile_images(panels, cols=4), out / "panel.pgm")
    return {"converged": dec.converged, "iterations": dec.iterations}


def _corrupt(X, protocol, level, seed):
    if protocol == "pixels":
        return corrupt_random_pixels(X, level, seed=seed)
    if protocol == "invert":
        scaled = invert_pixels(np.clip(X, 0, 1) * 255.0, level, seed=seed)
        return scaled / 255.0
    if protocol == "gaussian":
        return add_gaussian_noise_snr(X, level, seed=seed)
    raise ValueError(f"unknown corruption protocol {protocol!r}")


def cmd_denoise(cfg, out):
    if cfg["input"]:
        X_clean = load_matrix_csv(cfg["input"])
    else:
        X_clean, _ = synth_subspaces(_subspace_spec(cfg))
    scfg = _solver_config(cfg)
    methods = _methods(cfg)
    protocol = cfg["protocol"]
    levels = cfg["snr_list"] if protocol == "gaussian" else cfg["pct_list"]

    def job(idx, level):
        def run():
            X_noisy = _corrupt(X_clean, protocol, level, seed=int(cfg["seed"]) + idx)
            rows = []
            for m in methods:
                dec = _SOLVERS[m](X_noisy, scfg)
                zeta_rec = reconstruction_accuracy(X_clean, X_noisy @ dec.Z_star)
                zeta_emb = reconstruction_accuracy(X_clean, dec.L_star @ X_clean)
                rows.append((idx, float(level), m, float(zeta_rec), float(zeta_emb)))
            return rows
        return run

    results = _run_indexed([job(i, lv) for i, lv in enumerate(levels)])
    rows = [r for batch in results for r in batch]
    _write_csv(out / "denoise.csv",
               ["sweep_index", "level", "method", "zeta_rec", "zeta_emb"], rows)
    return {"points": len(rows)}


def cmd_classify(cfg, out):
    seed = int(cfg["seed"])
    k = int(cfg["classes"])
    per_class = int(cfg["train_count"]) + int(cfg["test_count"])
    scfg = _solver_config(cfg)
    method = _methods(cfg)[0]

    def job(split):
        def run():
            sub = seed + split
            if cfg["data"] == "blobs":
                X, labels = synth_blobs(k=k, d=int(cfg["dim"]), n_per=per_class,
                                        sep=cfg["blob_sep"], seed=sub)
            else:
                spec = _subspace_spec(cfg)
                spec.k, spec.n_per, spec.seed = k, per_class, sub
                X, labels = synth_subspaces(spec)
            rng = np.random.default_rng(sub)
            tr_idx, te_idx = [], []
            for c in range(k):
                idx = rng.permutation(np.flatnonzero(labels == c))
                tr_idx.extend(idx[: int(cfg["train_count"])])
                te_idx.extend(idx[int(cfg["train_count"]): per_class])
            Xtr, ytr = X[:, tr_idx], labels[tr_idx]
            Xte, yte = X[:, te_idx], labels[te_idx]
            dec = _SOLVERS[method](Xtr, scfg)
            model = train_classifier(dec.L_star @ Xtr, one_hot(ytr, k), scfg,
                                     L_star=dec.L_star)
            pred, _ = predict_labels(model, Xte)
            return classification_accuracy(pred, yte)
        return run

    accs = _run_indexed([job(s) for s in range(int(cfg["splits"]))])
    rows = [(s, float(a)) for s, a in enumerate(accs)]
    _write_csv(out / "accuracy.csv", ["split", "accuracy"], rows)
    _write_csv(out / "summary.csv", ["mean_accuracy", "std_accuracy"],
               [(float(np.mean(accs)), float(np.std(accs)))])
    return {"mean_accuracy": float(np.mean(accs))}


def cmd_bench_synth(cfg, out):
    X, labels = synth_subspaces(_subspace_spec(cfg))
    scfg = _solver_config(cfg)
    method = _methods(cfg)[0]
    dec = solve(X, scfg) if method == "aslrc" else latlrr_solve(X, scfg.lam, scfg)
    _write_trace(out / "trace.csv", dec.trace)
    _write_csv(out / "bench.csv",
               ["method", "iterations", "converged", "final_residual", "offblock_ratio"],
               [(method, dec.iterations, int(dec.converged),
                 float(dec.trace[-1].residual), float(offblock_ratio(dec.Z_star, labels)))])
    return {"iterations": dec.iterations, "converged": dec.converged}


def cmd_grid(cfg, out):
    X_clean, labels = synth_subspaces(_subspace_spec(cfg))
    pct = float(cfg["pct"])
    X = corrupt_random_pixels(X_clean, pct, seed=int(cfg["seed"])) if pct > 0 else X_clean
    values = cfg["grid_values"] or CANDIDATE_GRID
    points = [(a, b) for a in values for b in values]

    def job(idx, a, b):
        def run():
            scfg = _solver_config({**cfg, "alpha": a, "beta": b})
            dec = solve(X, scfg, record_lagrangian=False)
            zeta = reconstruction_accuracy(X_clean, X @ dec.Z_star)
            return (idx, float(a), float(b), float(zeta),
                    float(offblock_ratio(dec.Z_star, labels)), dec.iterations)
        return run

    rows = _run_indexed([job(i, a, b) for i, (a, b) in enumerate(points)])
    _write_csv(out / "grid.csv",
               ["sweep_index", "alpha", "beta", "zeta_acc", "offblock_ratio", "iterations"],
               rows)
    return {"points": len(rows)}


_COMMANDS = {
    "decompose": cmd_decompose,
    "denoise": cmd_denoise,
    "classify": cmd_classify,
    "bench-synth": cmd_bench_synth,
    "grid": cmd_grid,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="lolrec",
                                     description="Latent low-rank coding experiment harness")
    parser.add_argument("subcommand", choices=sorted(_COMMANDS))
    parser.add_argument("--config", type=str, help="JSON config file (flat keys)")
    parser.add_argument("--out", type=str)
    parser.add_argument("--input", type=str, action="append")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--method", choices=sorted(_SOLVERS))
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--beta", type=float)
    parser.add_argument("--lambda", dest="lam", type=float)
    parser.add_argument("--tol", type=float)
    parser.add_argument("--max-iter", dest="max_iter", type=int)
    return parser


def load_config(args):
    cfg = dict(DEFAULTS)
    if args.config:
        with open(args.config) as fh:
            file_cfg = json.load(fh)
        unknown = set(file_cfg) - set(DEFAULTS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(file_cfg)
    overrides = {
        "out": args.out, "input": args.input, "seed": args.seed,
        "method": args.method, "alpha": args.alpha, "beta": args.beta,
        "lambda": args.lam, "tol": args.tol, "max_iter": args.max_iter,
    }
    cfg.update({k: v for k, v in overrides.items() if v is not None})
    return cfg


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        out = Path(cfg["out"])
        out.mkdir(parents=True, exist_ok=True)
        phases = {}
        t0 = time.time()
        summary = _COMMANDS[args.subcommand](cfg, out)
        phases[args.subcommand] = time.time() - t0
        manifest = {
            "subcommand": args.subcommand,
            "config": {k: cfg[k] for k in sorted(cfg)},
            "config_hash": hashlib.sha256(
                json.dumps(cfg, sort_keys=True, default=str).encode()).hexdigest(),
            "version": __version__,
            "wall_clock_seconds": phases,
            "summary": summary,
        }
        with open(out / "manifest.json", "w") as fh:
            json.dump(manifest, fh, indent=2, default=str)
    except (ToolkitError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
