"""The full command-line pipeline, driven from Python.

train -> evaluate -> stability -> compare, all through the same entry
point the installed `srtrbm` console script uses, on synthetic bars so it
runs anywhere. Files land in ./demo-out.
"""

import json
from pathlib import Path

from srtrbm.cli import main as srtrbm

OUT = Path("demo-out")
CONFIG = """\
n_hidden = 16
epochs = 12
batch_size = 64
k = 1
eta = 0.01
eta_lambda = 0.05
alpha = 0.05
kappa = 0.02
phi = 1.0
psi_w = 0.0001
mode = adaptive
seed = 7
"""


def run(*args):
    print("$ srtrbm " + " ".join(args))
    code = srtrbm(list(args))
    if code != 0:
        raise SystemExit(code)
    print()


def main():
    OUT.mkdir(exist_ok=True)
    cfg = OUT / "bars.cfg"
    cfg.write_text(CONFIG)

    bars = ["--dataset", "bars", "--bars-side", "4", "--bars-count", "1024"]
    reports = []
    for mode, seed in (("adaptive", 7), ("adaptive", 8), ("fixed1", 7), ("fixed1", 8)):
        run_dir = OUT / ("%s-%d" % (mode, seed))
        run(
            "train", "--config", str(cfg), "--mode", mode, "--seed", str(seed),
            "--out-dir", str(run_dir), *bars,
        )
        run(
            "evaluate", "--config", str(cfg), "--mode", mode, "--seed", str(seed),
            "--checkpoint", str(run_dir / "checkpoint.srt"),
            "--out-dir", str(run_dir), "--ais-chains", "200", "--ais-temps", "200",
            "--sample-count", "16", "--sample-steps", "500", "--diag-steps", "500",
            *bars,
        )
        reports.append(str(run_dir / "report.json"))

    run(
        "stability", "--config", str(cfg),
        "--checkpoint", str(OUT / "adaptive-7" / "checkpoint.srt"),
        "--out", str(OUT / "stability.json"),
    )
    run(
        "compare", *reports, "--metric", "log_ais_ess",
        "--out", str(OUT / "comparison.json"),
    )

    report = json.loads((OUT / "adaptive-7" / "report.json").read_text())
    print("adaptive-7 evaluation temperature: %.4f" % report["temperature"])
    print("artifacts under %s/" % OUT)


if __name__ == "__main__":
    main()
