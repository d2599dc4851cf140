"""Command-line interface: train, evaluate, oracle, stability, compare, sample.

Every emitted structured file embeds the schema version, the resolved
configuration, the seed, and the build identifier. All emitted files except
the timings sidecar are byte-deterministic for a fixed seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import fields as dataclass_fields
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import ais as ais_mod
from . import compare as compare_mod
from . import controller, diagnostics, exact, sampler, stability, trainer
from .core import (
    MODES,
    RbmParams,
    ThermoState,
    TrainConfig,
    json_line,
    load_checkpoint,
    provenance,
    rng_stream,
    save_checkpoint,
    validate_config,
)
from .data_io import load_mnist, synthetic_bars

DATA_DIR_ENV = "SRTRBM_DATA_DIR"

_INT_KEYS = {"n_hidden", "epochs", "batch_size", "k", "seed", "checkpoint_every"}
_FLOAT_KEYS = {
    "eta",
    "eta_lambda",
    "alpha",
    "kappa",
    "phi",
    "psi_w",
    "psi_b",
    "temperature",
    "init_std",
}
_STR_KEYS = {"mode"}
_CONFIG_KEYS = _INT_KEYS | _FLOAT_KEYS | _STR_KEYS


def parse_config_file(path) -> dict:
    """Flat key = value text; # starts a comment; keys are algorithm names."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError("%s:%d: expected key = value" % (path, lineno))
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise ValueError("%s:%d: unknown config key %r" % (path, lineno, key))
        if key in _INT_KEYS:
            out[key] = int(val)
        elif key in _FLOAT_KEYS:
            out[key] = float(val)
        else:
            out[key] = val
    return out


def build_config(args) -> TrainConfig:
    values = {}
    if args.config:
        values.update(parse_config_file(args.config))
    known = {f.name for f in dataclass_fields(TrainConfig)}
    values = {k: v for k, v in values.items() if k in known}
    if "n_hidden" not in values:
        values["n_hidden"] = 64
    if "epochs" not in values:
        values["epochs"] = 0
    config = TrainConfig(**values)
    if getattr(args, "seed", None) is not None:
        config = replace(config, seed=args.seed)
    if getattr(args, "mode", None) is not None:
        config = replace(config, mode=args.mode)
    if getattr(args, "temperature", None) is not None:
        config = replace(config, temperature=args.temperature)
    if getattr(args, "epochs_override", None) is not None:
        config = replace(config, epochs=args.epochs_override)
    if getattr(args, "checkpoint_every", None) is not None:
        config = replace(config, checkpoint_every=args.checkpoint_every)
    return validate_config(config)


def dataset_dir(args) -> str:
    if getattr(args, "dataset_dir", None):
        return args.dataset_dir
    return os.environ.get(DATA_DIR_ENV, "./data")


def load_split(args, config: TrainConfig, train_split: bool) -> np.ndarray:
    if args.dataset == "bars":
        count = args.bars_count if train_split else args.bars_test_count
        stream = "bars-train" if train_split else "bars-test"
        return synthetic_bars(args.bars_side, count, rng_stream(config.seed, stream))
    images, _ = load_mnist(dataset_dir(args), train=train_split)
    limit = args.train_limit if train_split else args.test_limit
    if limit:
        images = images[:limit]
    return images


def _write_json(path, record: dict) -> None:
    Path(path).write_text(json_line(record) + "\n")


def _metrics_record(epoch: int, m) -> dict:
    return {
        "type": "epoch",
        "epoch": epoch,
        "flip_rate": m.flip_rate,
        "temperature": m.temperature,
        "lam": m.lam,
        "reference": m.reference,
        "gap": m.gap,
        "cesaro_gap": m.cesaro_gap,
        "recon_mse": m.recon_mse,
        "theta_norm": m.theta_norm,
        "beta_norm": m.beta_norm,
        "beta_eff": m.beta_eff,
        "beta_spectral": m.beta_spectral,
        "mean_abs_de": m.mean_abs_de,
    }


def checkpoint_with_meta(path, params, state, config, seed) -> None:
    save_checkpoint(path, params, state)
    meta = provenance(config, seed)
    meta["kind"] = "checkpoint-meta"
    meta["n_v"] = params.n_v
    meta["n_h"] = params.n_h
    _write_json(str(path) + ".meta.json", meta)


def cmd_train(args) -> int:
    config = build_config(args)
    if config.epochs < 0:
        raise ValueError("epochs must be >= 0")
    data = load_split(args, config, train_split=True)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    metrics_path = out / "metrics.ndjson"
    timings_path = out / "timings.ndjson"

    header = provenance(config, config.seed)
    header["type"] = "header"
    header["kind"] = "train-metrics"
    header["dataset"] = args.dataset
    header["n_rows"] = int(data.shape[0])
    header["n_v"] = int(data.shape[1])

    t0 = time.monotonic()
    with open(metrics_path, "w") as mf, open(timings_path, "w") as tf:
        mf.write(json_line(header) + "\n")
        mf.flush()
        tf.write(json_line({"type": "timing-header", "build": header["build"]}) + "\n")

        def on_epoch(epoch, m, params, state):
            mf.write(json_line(_metrics_record(epoch, m)) + "\n")
            mf.flush()
            tf.write(
                json_line(
                    {"type": "timing", "epoch": epoch, "wall_time": time.monotonic() - t0}
                )
                + "\n"
            )
            tf.flush()
            if config.checkpoint_every and epoch % config.checkpoint_every == 0:
                checkpoint_with_meta(
                    out / ("checkpoint_%06d.srt" % epoch), params, state, config, config.seed
                )

        result = trainer.train(data, config, on_epoch=on_epoch)
        summary = {
            "type": "summary",
            "epochs": config.epochs,
            "final_lam": result.state.lam,
            "final_reference": result.state.c,
            "final_cesaro_gap": result.state.delta_f_bar,
            "final_t": result.state.t,
            "final_temperature": controller.temperature(result.state, config),
            "anomalies": result.anomalies,
        }
        mf.write(json_line(summary) + "\n")

    checkpoint_with_meta(out / "checkpoint.srt", result.params, result.state, config, config.seed)
    for a in result.anomalies:
        print("anomaly: %s" % a, file=sys.stderr)
    print("trained %d epochs -> %s" % (config.epochs, out))
    return 0


def _grid_shape(n_v: int) -> list[int]:
    side = int(round(n_v**0.5))
    if side * side == n_v:
        return [side, side]
    return [1, n_v]


def sample_grid(params, state, config, seed, count, steps):
    t_eval = controller.temperature(state, config)
    rng = rng_stream(seed, "sample")
    v = (rng.random((count, params.n_v)) < 0.5).astype(np.float64)
    v, _ = sampler.gibbs_sweep_batch(params, t_eval, v, rng, k=steps)
    rec = provenance(config, seed)
    rec["kind"] = "samples"
    rec["temperature"] = t_eval
    rec["steps"] = steps
    rec["count"] = count
    rec["shape"] = _grid_shape(params.n_v)
    rec["samples"] = v.astype(int).tolist()
    return rec


def cmd_sample(args) -> int:
    config = build_config(args)
    params, state = load_checkpoint(args.checkpoint)
    rec = sample_grid(params, state, config, config.seed, args.count, args.steps)
    _write_json(args.out, rec)
    print("wrote %d samples -> %s" % (args.count, args.out))
    return 0


def cmd_evaluate(args) -> int:
    config = build_config(args)
    params, state = load_checkpoint(args.checkpoint)
    data = load_split(args, config, train_split=False)
    if data.shape[1] != params.n_v:
        raise ValueError("dataset width %d != model n_v %d" % (data.shape[1], params.n_v))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    t_eval = controller.temperature(state, config)
    seed = config.seed

    ais_res = ais_mod.ais_log_z(
        params, t_eval, args.ais_chains, args.ais_temps, rng_stream(seed, "ais")
    )
    ll = ais_mod.test_log_likelihood(params, t_eval, ais_res.log_z, data)
    pl = ais_mod.pseudo_likelihood(params, t_eval, data, rng_stream(seed, "pl"))
    recon = trainer.reconstruct(params, t_eval, data)
    recon_mse = float(((data - recon) ** 2).mean())

    energies = diagnostics.chain_energy_series(
        params, t_eval, args.diag_steps, seed, burn_in=args.diag_steps // 10
    )
    ac = diagnostics.autocorrelation(energies)

    grid = sample_grid(params, state, config, seed, args.sample_count, args.sample_steps)
    samples = np.asarray(grid["samples"], dtype=np.float64)

    report = provenance(config, seed)
    report["kind"] = "evaluation"
    report["mode"] = config.mode
    report["temperature"] = t_eval
    report["checkpoint"] = {
        "n_v": params.n_v,
        "n_h": params.n_h,
        "lam": state.lam,
        "reference": state.c,
        "cesaro_gap": state.delta_f_bar,
        "t": state.t,
    }
    report["ais"] = {
        "log_z": ais_res.log_z,
        "base_log_z": ais_res.base_log_z,
        "ess": ais_res.ess,
        "log_weight_variance": ais_res.log_weight_variance,
        "n_chains": args.ais_chains,
        "n_temps": args.ais_temps,
    }
    report["test_log_likelihood"] = ll
    report["pseudo_likelihood"] = pl
    report["recon_mse"] = recon_mse
    report["mcmc"] = {
        "iat": ac.iat,
        "ess": ac.ess,
        "lag": ac.lag,
        "degenerate": ac.degenerate,
        "series_length": args.diag_steps,
    }
    report["generative"] = {
        "pixel_entropy": diagnostics.pixel_entropy(samples),
        "hamming_diversity": diagnostics.hamming_diversity(samples),
        "mean_pairwise_l2": diagnostics.mean_pairwise_l2(samples),
    }
    report["beta"] = diagnostics.beta_diagnostics(params, t_eval)
    report["theta_norm"] = float(np.linalg.norm(np.concatenate(
        [params.w.ravel(), params.b_v, params.b_h])))

    _write_json(out / "report.json", report)
    _write_json(out / "samples.json", grid)
    print(
        "evaluated at T=%.6g: test LL %.4f, AIS ESS %.2f -> %s"
        % (t_eval, ll, ais_res.ess, out)
    )
    return 0


def cmd_stability(args) -> int:
    config = build_config(args)
    params, state = load_checkpoint(args.checkpoint)
    if config.mode == "adaptive":
        lam_star = state.lam
        macro = state.delta_f_bar
        kappa = config.kappa
    else:
        lam_star = float(np.log(controller.temperature(state, config)))
        macro = 0.0
        kappa = 0.0
    s_hat, se = stability.estimate_flip_sensitivity(
        params,
        lam_star,
        args.delta,
        args.chains,
        args.steps,
        config.seed,
        kappa=kappa,
        delta_f_bar=macro,
        burn_in=args.burn_in,
    )
    j = stability.jacobian(config.phi, config.eta_lambda, config.alpha, s_hat)
    stable, rho = stability.jury_stable(j)
    verdict = stability.classify(j)
    report = provenance(config, config.seed)
    report["kind"] = "stability"
    report["phi"] = config.phi
    report["eta_lambda"] = config.eta_lambda
    report["alpha"] = config.alpha
    report["lam_star"] = lam_star
    report["s_hat"] = s_hat
    report["se"] = se
    report["trace"] = float(j[0, 0] + j[1, 1])
    report["det"] = float(j[0, 0] * j[1, 1] - j[0, 1] * j[1, 0])
    report["rho"] = rho
    report["jury_stable"] = bool(stable)
    report["verdict"] = verdict
    _write_json(args.out, report)
    print("s_hat=%.4f (se %.4f), rho=%.6f, verdict: %s" % (s_hat, se, rho, verdict))
    return 0


def _metric_from_report(report: dict, metric: str) -> float:
    if metric == "log_ais_ess":
        return float(np.log(report["ais"]["ess"]))
    if metric in report:
        return float(report[metric])
    raise KeyError("metric %r not present in report" % metric)


def cmd_compare(args) -> int:
    groups: dict[str, list[float]] = {}
    for path in args.reports:
        report = json.loads(Path(path).read_text())
        groups.setdefault(report["mode"], []).append(
            _metric_from_report(report, args.metric)
        )
    if len(groups) < 2:
        raise ValueError("need reports from at least two modes")
    rows = compare_mod.compare_groups(
        {k: np.asarray(v) for k, v in groups.items()},
        rng_stream(args.seed, "compare"),
        rope=args.rope,
    )
    out = {
        "schema_version": 1,
        "kind": "comparison",
        "metric": args.metric,
        "rope": args.rope,
        "seed": args.seed,
        "groups": {k: sorted(v) for k, v in groups.items()},
        "comparisons": rows,
    }
    from .core import build_id

    out["build"] = build_id()
    _write_json(args.out, out)
    for row in rows:
        print(
            "%s vs %s: delta=%.4f [%.4f, %.4f], P(delta>0)=%.3f, d=%.3f"
            % (
                row["first"],
                row["second"],
                row["delta_mean"],
                row["hdi_low"],
                row["hdi_high"],
                row["p_positive"],
                row["cohens_d"],
            )
        )
    return 0


# ---------------------------------------------------------------------------
# Oracle verification suite


def _oracle_checks(seed: int) -> list[dict]:
    checks = []

    def add(name, ok, value, target, direction):
        checks.append(
            {
                "name": name,
                "pass": bool(ok),
                "value": float(value),
                "target": float(target),
                "direction": direction,
            }
        )

    rng = rng_stream(seed, "oracle")
    p = RbmParams(
        w=rng.normal(0, 1, (3, 2)), b_v=rng.normal(0, 1, 3), b_h=rng.normal(0, 1, 2)
    )
    # Partition function via two independent summation orders.
    lz = exact.enumerate_log_z(p, 1.0)
    v_all = exact.enumerate_states(3)
    fe = sampler.free_energy(p, 1.0, v_all)
    m = (-fe).max()
    lz2 = m + np.log(np.exp(-fe - m).sum())
    add("logz-dual-route", abs(lz - lz2) <= 1e-10, abs(lz - lz2), 1e-10, "<=")

    pi = exact.stationary_distribution(p, 1.0)
    kh = exact.block_gibbs_transition_matrix(p, 1.0, "hidden")
    kv = exact.block_gibbs_transition_matrix(p, 1.0, "visible")
    kf = exact.block_gibbs_transition_matrix(p, 1.0, "full")
    db = max(
        np.abs(pi[:, None] * kh - pi[None, :] * kh.T).max(),
        np.abs(pi[:, None] * kv - pi[None, :] * kv.T).max(),
    )
    add("half-step-detailed-balance", db <= 1e-12, db, 1e-12, "<=")
    st = np.abs(pi @ kf - pi).max()
    add("full-kernel-stationarity", st <= 1e-12, st, 1e-12, "<=")

    hel_pi = exact.helmholtz_functional(pi, p, 1.0)
    add("helmholtz-at-boltzmann", abs(hel_pi + lz) <= 1e-8, abs(hel_pi + lz), 1e-8, "<=")
    mix = 0.9 * pi + 0.1 / pi.size
    add(
        "helmholtz-minimum",
        exact.helmholtz_functional(mix, p, 1.0) >= hel_pi,
        exact.helmholtz_functional(mix, p, 1.0) - hel_pi,
        0.0,
        ">=",
    )

    z = np.linspace(-700, 700, 20001)
    lv = sampler.logistic_variance(z)
    env = np.exp(-np.abs(z))
    add("logistic-envelope-upper", (lv <= env).all(), float((env - lv).min()), 0.0, ">=")
    add("logistic-envelope-lower", (lv >= 0.25 * env).all(), float((lv - 0.25 * env).min()), 0.0, ">=")

    worst = 0.0
    for i in range(20):
        q = RbmParams(
            w=rng.normal(0, 1.5, (2, 2)), b_v=rng.normal(0, 1, 2), b_h=rng.normal(0, 1, 2)
        )
        qpi = exact.stationary_distribution(q, 1.0)
        qk = exact.block_gibbs_transition_matrix(q, 1.0, "full")
        phi = exact.conductance(qk, qpi)
        gap = exact.spectral_gap(qk, qpi)
        worst = max(worst, phi**2 / 2 - gap, gap - 2 * phi)
    add("cheeger-sandwich", worst <= 0.0, worst, 0.0, "<=")

    prev_gap = None
    mono_ok = True
    cut_ok = True
    for beta in (1.0, 2.0, 4.0, 8.0):
        q = exact.pinned_cut_model(beta)
        qpi = exact.stationary_distribution(q, 1.0)
        qk = exact.block_gibbs_transition_matrix(q, 1.0, "full")
        cut = exact.coordinate_cut_conductance(q, 1.0, 0, qk, qpi)
        if cut > 0.25 * np.exp(-beta):
            cut_ok = False
        gap = exact.spectral_gap(qk, qpi)
        if prev_gap is not None and gap >= prev_gap:
            mono_ok = False
        prev_gap = gap
    add("conductance-collapse", cut_ok, float(cut_ok), 1.0, ">=")
    add("gap-monotone-in-pinning", mono_ok, float(mono_ok), 1.0, ">=")

    # Exact moments against a vectorized chain average on a 2+2 model.
    q = RbmParams(w=rng.normal(0, 1, (2, 2)), b_v=rng.normal(0, 0.5, 2), b_h=rng.normal(0, 0.5, 2))
    mom, _, _ = exact.exact_moments(q, 1.0)
    chains = (rng.random((256, 2)) < 0.5).astype(np.float64)
    acc = np.zeros((2, 2))
    h = None
    for step in range(600):
        h = (rng.random((256, 2)) < sampler.conditional_probs(q, 1.0, v=chains)).astype(float)
        chains = (rng.random((256, 2)) < sampler.conditional_probs(q, 1.0, h=h)).astype(float)
        if step >= 100:
            acc += chains.T @ h / 256
    err = np.abs(acc / 500 - mom).max()
    add("moments-vs-chain", err <= 0.05, err, 0.05, "<=")

    res = ais_mod.ais_log_z(p, 1.0, 500, 500, rng_stream(seed, "oracle-ais"))
    add("ais-vs-exact", abs(res.log_z - lz) <= 0.05, abs(res.log_z - lz), 0.05, "<=")

    return checks


def cmd_oracle(args) -> int:
    checks = _oracle_checks(args.seed)
    for c in checks:
        print(
            "%-28s %s  value=%.3e target=%s%.3e"
            % (c["name"], "PASS" if c["pass"] else "FAIL", c["value"], c["direction"], c["target"])
        )
    ok = all(c["pass"] for c in checks)
    if args.out:
        from .core import build_id

        _write_json(
            args.out,
            {
                "schema_version": 1,
                "build": build_id(),
                "kind": "oracle",
                "seed": args.seed,
                "passed": ok,
                "checks": checks,
            },
        )
    print("oracle: %s (%d checks)" % ("PASS" if ok else "FAIL", len(checks)))
    return 0 if ok else 1


# ---------------------------------------------------------------------------


def _add_common(p, with_out_dir=False):
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--seed", type=int, default=None, help="overrides the config seed")
    p.add_argument("--mode", choices=MODES, default=None)
    p.add_argument("--temperature", type=float, default=None, help="fixedT temperature")
    if with_out_dir:
        p.add_argument("--out-dir", required=True)


def _add_dataset(p):
    p.add_argument("--dataset", choices=("mnist", "bars"), default="mnist")
    p.add_argument("--dataset-dir", default=None, help="IDX directory (or $%s)" % DATA_DIR_ENV)
    p.add_argument("--train-limit", type=int, default=0, help="use only the first N rows")
    p.add_argument("--test-limit", type=int, default=0)
    p.add_argument("--bars-side", type=int, default=4)
    p.add_argument("--bars-count", type=int, default=2048)
    p.add_argument("--bars-test-count", type=int, default=512)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="srtrbm", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a model, emitting metrics and checkpoints")
    _add_common(p, with_out_dir=True)
    _add_dataset(p)
    p.add_argument("--epochs-override", type=int, default=None)
    p.add_argument("--checkpoint-every", type=int, default=None)
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("evaluate", help="AIS, likelihoods, and diagnostics for a checkpoint")
    _add_common(p, with_out_dir=True)
    _add_dataset(p)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--ais-chains", type=int, default=1000)
    p.add_argument("--ais-temps", type=int, default=1000)
    p.add_argument("--sample-count", type=int, default=100)
    p.add_argument("--sample-steps", type=int, default=6000)
    p.add_argument("--diag-steps", type=int, default=2000)
    p.set_defaults(fn=cmd_evaluate)

    p = sub.add_parser("oracle", help="run the exact verification suite")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", default=None, help="optional JSON report path")
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("stability", help="linearization report for a checkpoint")
    _add_common(p)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--chains", type=int, default=128)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--burn-in", type=int, default=50)
    p.set_defaults(fn=cmd_stability)

    p = sub.add_parser("compare", help="compare evaluation reports across modes")
    p.add_argument("reports", nargs="+")
    p.add_argument("--metric", default="log_ais_ess")
    p.add_argument("--rope", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("sample", help="draw an ensemble sample grid from a checkpoint")
    _add_common(p)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--steps", type=int, default=6000)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_sample)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
