"""Configuration, persistence, and the command-line surface.

Chains persist as CSV (one row per retained draw, 17 significant digits,
lossless for float64); posterior-mean matrices are additionally written as
standalone N x N CSVs for downstream plotting. All writes are atomic
(temp file + rename) so interrupted runs never leave truncated files.
Timestamps live only in the run metadata JSON, keeping every other output
checksum-reproducible for a fixed config and seed.
"""

import argparse
import importlib.resources
import json
import os
import sys
import tempfile
import time
from dataclasses import asdict, dataclass, field

import jsonschema
import numpy as np

from . import __version__, kernels
from .distributions import DATA_STREAM, VARIANT_STREAMS, RngStream
from .errors import FormatError, SchemaError
from .gibbs import ChainConfig, run_chain
from .model import LT_NOWI, SKEW_NORMAL, SKEW_T, VARIANTS, Dataset, PriorConfig
from .simstudy import DESIGNS, make_delta_design, frobenius_loss, run_study, simulate_data

FLOAT_FMT = "%.17g"

FULL_SCALE = {"t": 1500, "n": 15, "reps": 30, "burn_in": 50000, "draws": 100000}


@dataclass
class ChainSettings:
    burn_in: int = 3000
    draws: int = 6000
    thin: int = 1
    store_latent: bool = False

    def to_chain_config(self):
        return ChainConfig(self.burn_in, self.draws, self.thin, self.store_latent)


@dataclass
class PriorSettings:
    a_mu_scale: float = 0.01
    a_delta_scale: float = 0.01
    s_omega_scale: float | None = None
    nu_omega: float | None = None
    a_eta: float = 1.0
    b_eta: float = 0.0
    a_varphi: float = 2.0
    b_varphi: float = 0.1

    def build(self, variant, tail, n):
        return PriorConfig.default(
            variant, tail, n,
            a_mu_scale=self.a_mu_scale,
            a_delta_scale=self.a_delta_scale,
            s_omega_scale=self.s_omega_scale,
            nu_omega=self.nu_omega,
            a_eta=self.a_eta,
            b_eta=self.b_eta,
            a_varphi=self.a_varphi,
            b_varphi=self.b_varphi,
        )


@dataclass
class RunConfig:
    mode: str = "fit"
    data: str | None = None
    out: str | None = None
    variant: str = LT_NOWI
    tail: str = SKEW_NORMAL
    t: int | None = None
    n: int | None = None
    design: str = "diag"
    designs: list = field(default_factory=lambda: list(DESIGNS))
    variants: list = field(default_factory=lambda: list(VARIANTS))
    reps: int = 5
    chain: ChainSettings = field(default_factory=ChainSettings)
    prior: PriorSettings = field(default_factory=PriorSettings)
    seed: int = 0
    workers: int | None = None
    long_run: bool = False

    def to_json(self):
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def _schema():
    ref = importlib.resources.files("skewgibbs").joinpath("config_schema.json")
    return json.loads(ref.read_text())


def parse_config(text):
    """Parse and validate a JSON config, filling defaults.

    Unknown keys are rejected with the offending key in the error path.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise SchemaError("", f"invalid JSON: {err}") from err
    if not isinstance(doc, dict):
        raise SchemaError("", "top-level document must be an object")
    schema = _schema()
    validator = jsonschema.Draft202012Validator(schema)
    for error in sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path)):
        path = list(error.absolute_path)
        if error.validator == "additionalProperties":
            parent = doc
            for p in path:
                parent = parent[p]
            allowed = set(error.schema.get("properties", {}))
            unknown = sorted(set(parent) - allowed)
            path = path + [unknown[0] if unknown else "?"]
        raise SchemaError(".".join(str(p) for p in path), error.message)
    chain = ChainSettings(**doc.get("chain", {}))
    prior = PriorSettings(**doc.get("prior", {}))
    top = {k: v for k, v in doc.items() if k not in ("chain", "prior")}
    return RunConfig(chain=chain, prior=prior, **top)


def _atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_matrix_csv(path, matrix):
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    lines = [",".join(FLOAT_FMT % v for v in row) for row in matrix]
    _atomic_write(path, "\n".join(lines) + "\n")


def read_matrix_csv(path):
    rows = []
    with open(path) as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                values = [float(v) for v in line.split(",")]
            except ValueError as err:
                raise FormatError(str(err), line=lineno) from err
            if rows and len(values) != len(rows[0]):
                raise FormatError("ragged row", line=lineno)
            rows.append(values)
    return np.asarray(rows, dtype=np.float64)


def write_chain(summary, path):
    """Persist retained draws: header row, then one CSV row per draw."""
    cols = summary.columns
    parts = [summary.draws["mu"], summary.draws["delta"], summary.draws["omega"]]
    if "varphi" in summary.draws:
        parts.append(summary.draws["varphi"][:, None])
    flat = np.hstack(parts)
    lines = ["iter," + ",".join(cols)]
    for idx, row in enumerate(flat, start=1):
        lines.append(str(idx) + "," + ",".join(FLOAT_FMT % v for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def read_chain(path):
    """Read a chain CSV back into (columns, values)."""
    with open(path) as handle:
        header = handle.readline().strip()
        if not header.startswith("iter,"):
            raise FormatError("missing 'iter' header column", line=1)
        columns = header.split(",")[1:]
        values = []
        for lineno, line in enumerate(handle, start=2):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if len(fields) != len(columns) + 1:
                raise FormatError(
                    f"expected {len(columns) + 1} fields, found {len(fields)}",
                    line=lineno,
                )
            try:
                values.append([float(v) for v in fields[1:]])
            except ValueError as err:
                raise FormatError(str(err), line=lineno) from err
    return columns, np.asarray(values, dtype=np.float64)


def _matrix_from_columns(columns, means, prefix):
    picks = {}
    for col, value in zip(columns, means):
        if col.startswith(prefix + "["):
            idx = col[len(prefix):].strip("[]").split("][")
            picks[tuple(int(i) - 1 for i in idx)] = value
    if not picks:
        return None
    n_rows = max(i for i, _ in picks) + 1
    n_cols = max(j for _, j in picks) + 1
    mat = np.zeros((n_rows, n_cols))
    for (i, j), value in picks.items():
        mat[i, j] = value
    return mat


def summarize_chains(columns, values):
    """Pooled posterior means/quantiles plus the reassembled mean matrices."""
    mean = values.mean(axis=0)
    q025, q500, q975 = np.quantile(values, [0.025, 0.5, 0.975], axis=0)
    delta = _matrix_from_columns(columns, mean, "delta")
    omega = _matrix_from_columns(columns, mean, "omega")
    mu = np.array([m for c, m in zip(columns, mean) if c.startswith("mu[")])
    return {
        "columns": columns, "mean": mean, "q025": q025, "q500": q500,
        "q975": q975, "mean_delta": delta, "mean_omega": omega, "mean_mu": mu,
    }


def _write_scalar_summary(path, columns, mean, q025, q500, q975):
    lines = ["name,mean,q2.5,q50,q97.5"]
    for i, col in enumerate(columns):
        lines.append(col + "," + ",".join(
            FLOAT_FMT % v for v in (mean[i], q025[i], q500[i], q975[i])
        ))
    _atomic_write(path, "\n".join(lines) + "\n")


def write_fit_outputs(summary, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    write_chain(summary, os.path.join(out_dir, "chain.csv"))
    write_matrix_csv(os.path.join(out_dir, "delta_mean.csv"), summary.mean_delta)
    write_matrix_csv(os.path.join(out_dir, "omega_mean.csv"), summary.mean_omega)
    write_matrix_csv(os.path.join(out_dir, "mu_mean.csv"), summary.mean_mu)
    parts = [summary.draws["mu"].mean(axis=0),
             summary.draws["delta"].mean(axis=0),
             summary.draws["omega"].mean(axis=0)]
    if summary.mean_varphi is not None:
        parts.append(np.array([summary.mean_varphi]))
    _write_scalar_summary(
        os.path.join(out_dir, "summary.csv"), summary.columns,
        np.concatenate(parts), summary.q025, summary.q500, summary.q975,
    )


def _write_metadata(out_dir, extra=None):
    meta = {
        "version": __version__,
        "backend": kernels.active_backend(),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }
    meta.update(extra or {})
    _atomic_write(os.path.join(out_dir, "metadata.json"),
                  json.dumps(meta, indent=2, sort_keys=True) + "\n")


def write_study_outputs(report, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    job_cols = ["design", "variant", "rep", "delta_loss", "omega_loss", "seed",
                "iterations", "seconds", "error"]
    lines = [",".join(job_cols)]
    for row in report.jobs:
        lines.append(",".join(
            FLOAT_FMT % row[c] if isinstance(row[c], float) else str(row[c])
            for c in job_cols
        ))
    _atomic_write(os.path.join(out_dir, "jobs.csv"), "\n".join(lines) + "\n")

    sum_cols = ["design", "variant", "reps", "delta_median", "delta_se",
                "omega_median", "omega_se"]
    lines = [",".join(sum_cols)]
    for row in report.summary:
        lines.append(",".join(
            FLOAT_FMT % row[c] if isinstance(row[c], float) else str(row[c])
            for c in sum_cols
        ))
    _atomic_write(os.path.join(out_dir, "summary.csv"), "\n".join(lines) + "\n")
    _write_metadata(out_dir, {"study": report.metadata})


def _cmd_gen_data(args):
    rng = RngStream(args.seed, DATA_STREAM)
    delta = make_delta_design(args.design, args.n)
    omega = np.eye(args.n)
    mu = np.zeros(args.n)
    data = simulate_data(mu, delta, omega, args.t, rng, tail=args.tail,
                         varphi=args.varphi)
    os.makedirs(args.out, exist_ok=True)
    write_matrix_csv(os.path.join(args.out, "data.csv"), data.r)
    write_matrix_csv(os.path.join(args.out, "delta_true.csv"), delta)
    write_matrix_csv(os.path.join(args.out, "omega_true.csv"), omega)
    write_matrix_csv(os.path.join(args.out, "mu_true.csv"), mu.reshape(1, -1))
    _write_metadata(args.out, {
        "mode": "gen-data", "design": args.design, "t": args.t, "n": args.n,
        "seed": args.seed, "tail": args.tail,
    })
    return 0


def _load_config(path):
    with open(path) as handle:
        return parse_config(handle.read())


def _cmd_fit(args):
    config = _load_config(args.config) if args.config else RunConfig()
    data_path = args.data or config.data
    out_dir = args.out or config.out
    if not data_path or not out_dir:
        raise SchemaError("data/out", "fit needs a data path and an output directory")
    data = Dataset(read_matrix_csv(data_path))
    prior = config.prior.build(config.variant, config.tail, data.n)
    stream = RngStream(config.seed, VARIANT_STREAMS[config.variant])
    summary = run_chain(data, prior, config.chain.to_chain_config(), stream)
    write_fit_outputs(summary, out_dir)
    _write_metadata(out_dir, {
        "mode": "fit", "variant": config.variant, "tail": config.tail,
        "seed": config.seed, "wall_time": summary.wall_time,
        "n_stored": summary.n_stored,
    })
    return 0


def _cmd_study(args):
    config = _load_config(args.config) if args.config else RunConfig()
    out_dir = args.out or config.out
    if not out_dir:
        raise SchemaError("out", "study needs an output directory")
    full = args.full_scale or config.long_run
    t = FULL_SCALE["t"] if full else (config.t or 600)
    n = FULL_SCALE["n"] if full else (config.n or 6)
    reps = FULL_SCALE["reps"] if full else config.reps
    chain = (ChainConfig(FULL_SCALE["burn_in"], FULL_SCALE["draws"],
                         latent_refreshes=2)
             if full else config.chain.to_chain_config())
    report = run_study(config.designs, config.variants, t, n, reps, chain,
                       config.seed, workers=args.workers or config.workers,
                       tail=config.tail)
    write_study_outputs(report, out_dir)
    return 0


def _cmd_summarize(args):
    pooled = None
    columns = None
    for path in args.chains:
        cols, values = read_chain(path)
        if columns is None:
            columns = cols
            pooled = values
        else:
            if cols != columns:
                raise FormatError(f"chain {path} has different columns")
            pooled = np.vstack([pooled, values])
    stats = summarize_chains(columns, pooled)
    os.makedirs(args.out, exist_ok=True)
    _write_scalar_summary(os.path.join(args.out, "summary.csv"), columns,
                          stats["mean"], stats["q025"], stats["q500"],
                          stats["q975"])
    if stats["mean_delta"] is not None:
        write_matrix_csv(os.path.join(args.out, "delta_mean.csv"),
                         stats["mean_delta"])
    if stats["mean_omega"] is not None:
        write_matrix_csv(os.path.join(args.out, "omega_mean.csv"),
                         stats["mean_omega"])
    losses = {}
    if args.truth_delta:
        losses["delta_loss"] = frobenius_loss(stats["mean_delta"],
                                              read_matrix_csv(args.truth_delta))
    if args.truth_omega:
        losses["omega_loss"] = frobenius_loss(stats["mean_omega"],
                                              read_matrix_csv(args.truth_omega))
    if losses:
        lines = [",".join(losses), ",".join(FLOAT_FMT % v for v in losses.values())]
        _atomic_write(os.path.join(args.out, "losses.csv"), "\n".join(lines) + "\n")
    _write_metadata(args.out, {"mode": "summarize", "chains": list(args.chains)})
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise SchemaError("argv", message)


def build_parser():
    parser = _Parser(prog="skewgibbs", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-data", help="simulate a dataset plus truth files")
    gen.add_argument("--design", required=True, choices=list(DESIGNS))
    gen.add_argument("--n", required=True, type=int)
    gen.add_argument("--t", required=True, type=int)
    gen.add_argument("--seed", required=True, type=int)
    gen.add_argument("--out", required=True)
    gen.add_argument("--tail", default=SKEW_NORMAL, choices=[SKEW_NORMAL, SKEW_T])
    gen.add_argument("--varphi", type=float, default=8.0)
    gen.set_defaults(func=_cmd_gen_data)

    fit = sub.add_parser("fit", help="run one chain on a dataset")
    fit.add_argument("--config")
    fit.add_argument("--data")
    fit.add_argument("--out")
    fit.set_defaults(func=_cmd_fit)

    study = sub.add_parser("study", help="replication study with loss tables")
    study.add_argument("--config")
    study.add_argument("--out")
    study.add_argument("--full-scale", action="store_true",
                       help="paper-scale settings (hours of compute)")
    study.add_argument("--workers", type=int)
    study.set_defaults(func=_cmd_study)

    summ = sub.add_parser("summarize", help="pool chains into posterior summaries")
    summ.add_argument("--chains", nargs="+", required=True)
    summ.add_argument("--out", required=True)
    summ.add_argument("--truth-delta")
    summ.add_argument("--truth-omega")
    summ.set_defaults(func=_cmd_summarize)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SchemaError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except (SchemaError, FileNotFoundError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return 1
    except Exception as err:  # noqa: BLE001 - CLI boundary
        print(f"runtime failure: {type(err).__name__}: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
