"""Command-line front end.

Every command prints one JSON report (sorted keys) on stdout.  With
``--out DIR`` the report is also written to ``DIR/<command>.json`` and
wall-clock timings to ``DIR/<command>.timing.json``, so reports stay
byte-identical across runs with the same inputs and seed.

Qubit ``q`` is character ``q`` of a Pauli string and bit ``q`` of every
dense index (little-endian).

Exit codes: 0 success, 2 input error, 3 cap exceeded, 4 decoder failure,
5 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import hamiltonians, oracle
from .betafn import anticomm_graph, beta_cost_estimate
from .errors import CapExceeded, HdqiError, InputError, VerificationError
from .gf2code import build_code, code_report, find_block_partition
from .pauli import PauliHamiltonian, format_hamiltonian, read_hamiltonian
from .poly import DEGREE_CAP, Polynomial, gibbs_polynomial, gibbs_trace_norm_bound, select_gibbs_degree
from .refstate import (
    NEARLY_INDEPENDENT,
    build_reference_state,
    detect_regime,
    mps_to_statevector,
    predicted_bond_dim,
    site_to_register_index,
)
from .simulator import QUBIT_CAP, NoiseModel, run_pipeline

AMPLITUDE_TABLE_CAP = 1 << 16
BOND_FORMULA = {"commuting": "l+1", "nearly-independent": "2^k(l+1)", "noncommuting": "l+1"}


@dataclass(frozen=True)
class RunConfig:
    command: str
    ham: str | None
    poly: tuple[float, ...] | None
    gibbs: bool
    beta: float | None
    delta: float | None
    degree: int | None
    decoder: str
    epsilon: tuple[float, ...]
    trials: int
    seed: int
    noise: str
    out: str | None
    max_qubits: int

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        poly = getattr(args, "poly", None)
        gibbs = bool(getattr(args, "gibbs", False))
        if poly is not None and gibbs:
            raise InputError("give either --poly or --gibbs, not both")
        return cls(
            command=args.command,
            ham=getattr(args, "ham", None),
            poly=Polynomial.parse(poly).coeffs if poly is not None else None,
            gibbs=gibbs,
            beta=getattr(args, "beta", None),
            delta=getattr(args, "delta", None),
            degree=getattr(args, "degree", None),
            decoder=getattr(args, "decoder", "auto"),
            epsilon=tuple(getattr(args, "epsilon", None) or ()),
            trials=getattr(args, "trials", 1),
            seed=getattr(args, "seed", 0),
            noise=getattr(args, "noise", "random"),
            out=getattr(args, "out", None),
            max_qubits=getattr(args, "max_qubits", QUBIT_CAP),
        )


# ------------------------------------------------------------------ helpers


def _hamiltonian(cfg: RunConfig) -> PauliHamiltonian:
    if not cfg.ham:
        raise InputError("--ham FILE is required")
    try:
        return read_hamiltonian(cfg.ham)
    except OSError as exc:
        raise InputError(f"cannot read {cfg.ham}: {exc.strerror}") from None


def _polynomial(cfg: RunConfig, h: PauliHamiltonian) -> tuple[Polynomial, dict]:
    """Explicit coefficients, or a Gibbs fit on ``[-sum|c|, sum|c|]``."""
    if cfg.poly is not None:
        p = Polynomial(cfg.poly)
        if cfg.degree is not None and cfg.degree != p.degree:
            raise InputError(f"--degree {cfg.degree} disagrees with the {p.degree}-degree --poly")
        return p, {"source": "explicit", "degree": p.degree, "coefficients": list(p.coeffs)}
    if not cfg.gibbs:
        raise InputError("a polynomial is required: --poly a0,a1,... or --gibbs --beta B --delta D")
    if cfg.beta is None or cfg.delta is None:
        raise InputError("--gibbs needs --beta and --delta")
    bound = h.one_norm
    choice = select_gibbs_degree(cfg.beta, bound, cfg.delta)
    approx = choice.approximation
    if cfg.degree is not None:
        approx = gibbs_polynomial(cfg.beta, bound, cfg.degree)
    info = {
        "source": "gibbs",
        "beta": cfg.beta,
        "delta": cfg.delta,
        "norm_bound": bound,
        "bound_degree": choice.bound_degree,
        "certified_degree": choice.certified_degree,
        "degree": approx.degree,
        "sup_error": approx.sup_error,
        "trace_norm_certificate": gibbs_trace_norm_bound(cfg.beta, bound, approx.sup_error),
        "coefficients": list(approx.polynomial.coeffs),
    }
    return approx.polynomial, info


def _regime_fields(regime: str, l: int | None, k: int, actual: int | None) -> dict:
    return {
        "paper_regime": regime,
        "bond_dim_formula": BOND_FORMULA[regime],
        "predicted_bond_dim": None if l is None else predicted_bond_dim(regime, l, k),
        "actual_bond_dim": actual,
    }


def _code_k(h: PauliHamiltonian, regime: str) -> int:
    return build_code(h).k if regime == NEARLY_INDEPENDENT else 0


def _dump(array: np.ndarray, path: str) -> None:
    np.ascontiguousarray(array, dtype="<c16").tofile(path)


# ----------------------------------------------------------------- commands


def cmd_analyze(cfg: RunConfig, timings: dict) -> dict:
    h = _hamiltonian(cfg)
    code = build_code(h)
    g = anticomm_graph(h)
    regime = detect_regime(h)
    partition = find_block_partition(h, code) if regime == NEARLY_INDEPENDENT else None
    l = cfg.degree if cfg.degree is not None else (len(cfg.poly) - 1 if cfg.poly else 1)
    actual = None
    if regime != "noncommuting" or g.max_component <= 6:
        try:
            actual = build_reference_state(h, Polynomial((0.0,) * l + (1.0,)), regime).D
        except CapExceeded:
            actual = None
    return {
        "n": h.n,
        "m": h.m,
        "regime": regime,
        "degree": l,
        "code": code_report(code, partition),
        "components": [list(c) for c in g.components],
        "component_edges": [g.edge_count(c) for c in g.components],
        "max_component": g.max_component,
        **_regime_fields(regime, l, code.k if regime == NEARLY_INDEPENDENT else 0, actual),
    }


def cmd_graph(cfg: RunConfig, timings: dict) -> dict:
    h = _hamiltonian(cfg)
    g = anticomm_graph(h)
    l = cfg.degree if cfg.degree is not None else 1
    return {
        "m": g.m,
        "edges": [list(e) for e in g.edges],
        "components": [list(c) for c in g.components],
        "max_component": g.max_component,
        "beta_cost_bound": {
            str(s): beta_cost_estimate(g.max_component, s, s % 2) for s in range(l + 1)
        },
    }


def _term_bitstring(register_terms, m: int, reg_index: int) -> str:
    chars = ["-"] * m
    for r, t in enumerate(register_terms):
        chars[t] = str((reg_index >> r) & 1)
    return "".join(chars)


def cmd_refstate(cfg: RunConfig, timings: dict, dump: str | None = None) -> dict:
    h = _hamiltonian(cfg)
    p, pinfo = _polynomial(cfg, h)
    t0 = time.perf_counter()
    mps = build_reference_state(h, p)
    timings["build"] = time.perf_counter() - t0
    report = {
        "regime": mps.regime,
        "D": mps.D,
        "site_arities": list(mps.site_arities),
        "site_terms": [list(t) for t in mps.site_terms],
        "norm": mps.norm,
        "polynomial": pinfo,
        **_regime_fields(mps.regime, p.degree, mps.k, mps.D),
    }
    total = math.prod(mps.site_arities)
    if total <= AMPLITUDE_TABLE_CAP or dump:
        psi = mps_to_statevector(mps)
        if total <= AMPLITUDE_TABLE_CAP:
            reg = site_to_register_index(mps)
            # bitstrings follow the input term order; '-' marks terms without a control qubit
            report["amplitudes"] = {
                _term_bitstring(mps.register_terms, h.m, int(r)): float(a)
                for r, a in zip(reg, psi)
                if a != 0.0
            }
        if dump:
            _dump(psi, dump)
    return report


def _pipeline_report(h, p, pinfo, result) -> dict:
    return {
        "regime": result.regime,
        "decoder": result.decoder_kind,
        "polynomial": pinfo,
        "register_qubits": result.register_qubits,
        "total_qubits": result.total_qubits,
        "residual_on_A": result.residual,
        "stage_norms": result.stage_norms,
        "metrics": oracle.state_metrics(result.rho, h),
        **_regime_fields(result.regime, p.degree, result.mps.k, result.actual_bond_dim),
    }


def cmd_prepare(cfg: RunConfig, timings: dict, dump: str | None = None) -> dict:
    h = _hamiltonian(cfg)
    p, pinfo = _polynomial(cfg, h)
    result = run_pipeline(h, p, cfg.decoder, max_qubits=cfg.max_qubits)
    timings.update(result.timings)
    if dump:
        _dump(result.rho, dump)
    return _pipeline_report(h, p, pinfo, result)


def cmd_verify(cfg: RunConfig, timings: dict, dump: str | None = None, tol: float = 1e-8) -> dict:
    h = _hamiltonian(cfg)
    p, pinfo = _polynomial(cfg, h)
    result = run_pipeline(h, p, cfg.decoder, max_qubits=cfg.max_qubits)
    timings.update(result.timings)
    if dump:
        _dump(result.rho, dump)
    ref = oracle.rho_poly_oracle(h, p)
    dist = oracle.trace_norm_distance(result.rho, ref)
    report = _pipeline_report(h, p, pinfo, result)
    report.update(
        {
            "trace_norm_distance_to_oracle": dist,
            "trace_distance_to_oracle": dist / 2,
            "fidelity_to_oracle": oracle.fidelity(result.rho, ref),
            "tolerance": tol,
            "passed": dist <= tol,
        }
    )
    if dist > tol:
        raise VerificationError(f"trace-norm distance {dist:.3e} to the oracle exceeds {tol:.1e}", report)
    return report


def _parse_sweep(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise InputError(f"--sweep expects LO:HI, got {text!r}") from None
    if not 0 <= lo <= hi <= DEGREE_CAP:
        raise InputError(f"sweep range must lie within 0..{DEGREE_CAP}")
    return list(range(lo, hi + 1))


def cmd_gibbs(cfg: RunConfig, timings: dict, sweep: str | None = None) -> dict:
    if not cfg.gibbs:
        cfg = RunConfig(**{**asdict(cfg), "gibbs": True, "poly": None})
    h = _hamiltonian(cfg)
    p, pinfo = _polynomial(cfg, h)
    gibbs = oracle.gibbs_oracle(h, cfg.beta)
    result = run_pipeline(h, p, cfg.decoder, max_qubits=cfg.max_qubits)
    timings.update(result.timings)
    dist = oracle.trace_norm_distance(result.rho, gibbs)
    report = _pipeline_report(h, p, pinfo, result)
    report.update(
        {
            "trace_norm_distance_to_gibbs": dist,
            "target": 2 * cfg.delta,
            "oracle_polynomial_distance_to_gibbs": oracle.trace_norm_distance(oracle.rho_poly_oracle(h, p), gibbs),
            "passed": dist <= 2 * cfg.delta,
        }
    )
    rows = []
    for l in _parse_sweep(sweep):
        approx = gibbs_polynomial(cfg.beta, h.one_norm, l)
        try:
            d = oracle.trace_norm_distance(oracle.rho_poly_oracle(h, approx.polynomial), gibbs)
        except HdqiError:
            d = None
        rows.append(
            {
                "degree": l,
                "sup_error": approx.sup_error,
                "trace_norm_certificate": gibbs_trace_norm_bound(cfg.beta, h.one_norm, approx.sup_error),
                "distance": d,
            }
        )
    if rows:
        report["sweep"] = rows
    if dist > 2 * cfg.delta:
        raise VerificationError(f"distance {dist:.3e} to the Gibbs state exceeds {2 * cfg.delta}", report)
    return report


def cmd_robustness(cfg: RunConfig, timings: dict) -> dict:
    if not cfg.epsilon:
        raise InputError("--epsilon is required")
    if cfg.trials < 1:
        raise InputError("--trials must be positive")
    h = _hamiltonian(cfg)
    p, pinfo = _polynomial(cfg, h)
    t0 = time.perf_counter()
    clean = run_pipeline(h, p, cfg.decoder, max_qubits=cfg.max_qubits)
    rows, violations = [], 0
    for eps in cfg.epsilon:
        dists = []
        for trial in range(cfg.trials):
            noise = NoiseModel(eps, cfg.noise, seed=cfg.seed * 1_000_003 + trial)
            noisy = run_pipeline(h, p, cfg.decoder, noise=noise, max_qubits=cfg.max_qubits, mps=clean.mps)
            dists.append(oracle.trace_norm_distance(noisy.rho, clean.rho))
        bound = 2 * math.sqrt(eps)
        bad = sum(d > bound for d in dists)
        violations += bad
        rows.append(
            {
                "epsilon": eps,
                "bound": bound,
                "distances": dists,
                "max_distance": max(dists),
                "max_ratio": max(dists) / bound if bound else None,
                "violations": bad,
            }
        )
    timings["trials"] = time.perf_counter() - t0
    report = {
        "noise": cfg.noise,
        "trials": cfg.trials,
        "polynomial": pinfo,
        "rows": rows,
        "violations": violations,
        **_regime_fields(clean.regime, p.degree, clean.mps.k, clean.actual_bond_dim),
    }
    if violations:
        raise VerificationError(f"{violations} trials exceeded the 2 sqrt(eps) bound", report)
    return report


def cmd_plot(input_path: str, out_dir: str | None) -> dict:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    try:
        data = json.loads(Path(input_path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {input_path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{input_path} is not JSON: {exc}") from None
    out = Path(out_dir or ".")
    out.mkdir(parents=True, exist_ok=True)

    fig, ax = plt.subplots(figsize=(5, 3.5))
    if "rows" in data:
        rows = data["rows"]
        if not rows:
            raise InputError("robustness report has no rows")
        header = ["epsilon", "bound", "max_distance", "max_ratio"]
        table = [[r[c] for c in header] for r in rows]
        eps = [r["epsilon"] for r in rows]
        grid = np.linspace(0, max(eps), 200)
        ax.plot(grid, 2 * np.sqrt(grid), label="2 sqrt(eps)")
        for r in rows:
            ax.scatter([r["epsilon"]] * len(r["distances"]), r["distances"], s=8, color="C1")
        ax.set_xlabel("epsilon")
        ax.set_ylabel("trace-norm distance")
        stem = "robustness"
    elif data.get("sweep"):
        rows = data["sweep"]
        header = ["degree", "sup_error", "trace_norm_certificate", "distance"]
        table = [[r[c] for c in header] for r in rows]
        deg = [r["degree"] for r in rows]
        ax.semilogy(deg, [r["sup_error"] for r in rows], "o-", label="sup error")
        ax.semilogy(deg, [r["distance"] or np.nan for r in rows], "s-", label="distance to Gibbs")
        ax.axhline(data["target"], ls="--", color="k", label="2 delta")
        ax.set_xlabel("degree")
        stem = "gibbs"
    else:
        raise InputError("input is neither a robustness report nor a Gibbs report with a sweep")
    ax.legend()
    fig.tight_layout()
    png, csv_path = out / f"{stem}.png", out / f"{stem}.csv"
    fig.savefig(png, dpi=120)
    plt.close(fig)
    with csv_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(table)
    return {"csv": str(csv_path), "png": str(png), "rows": len(table)}


def cmd_generate(kind: str, n: int, m: int, k: int, g: float, seed: int) -> str:
    rng = np.random.default_rng(seed)
    if kind == "h1":
        h = hamiltonians.h1_hamiltonian(n, g)
        header = f"chain with fields on even sites, n={n}, g={g}"
    elif kind == "commuting":
        h = hamiltonians.random_commuting(n, m, rng, independent=True)
        header = f"random commuting independent, n={n}, m={m}, seed={seed}"
    elif kind == "nearly-independent":
        h = hamiltonians.random_nearly_independent(n, m, k, rng)
        header = f"random nearly independent, n={n}, independent={m}, k={k}, seed={seed}"
    elif kind == "noncommuting":
        h = hamiltonians.random_noncommuting(n, m, rng, independent=True)
        header = f"random noncommuting, n={n}, m={m}, seed={seed}"
    else:
        raise InputError(f"unknown family {kind!r}")
    return format_hamiltonian(h, header)


# ---------------------------------------------------------------- plumbing


def _add_common(sp: argparse.ArgumentParser, poly: bool = True) -> None:
    sp.add_argument("--ham", metavar="FILE", help="Hamiltonian file: '<coefficient> <Pauli string>' per line")
    if poly:
        sp.add_argument("--poly", metavar="a0,a1,...", help="explicit monomial coefficients")
        sp.add_argument("--gibbs", action="store_true", help="fit exp(-beta x / 2) instead of --poly")
        sp.add_argument("--beta", type=float)
        sp.add_argument("--delta", type=float)
    sp.add_argument("--degree", type=int, metavar="L")
    sp.add_argument("--decoder", choices=("auto", "gaussian", "table"), default="auto")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", metavar="DIR")
    sp.add_argument("--max-qubits", type=int, default=QUBIT_CAP)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hdqi", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    _add_common(sub.add_parser("analyze", help="code, regime and anticommutation structure"))
    _add_common(sub.add_parser("graph", help="anticommutation graph"), poly=False)
    sp = sub.add_parser("refstate", help="reference state as an MPS")
    _add_common(sp)
    sp.add_argument("--dump", metavar="FILE", help="statevector as little-endian complex128")
    sp = sub.add_parser("prepare", help="simulate the circuit and report the output state")
    _add_common(sp)
    sp.add_argument("--dump", metavar="FILE", help="density matrix, row-major little-endian complex128")
    sp = sub.add_parser("verify", help="prepare and compare against the dense oracle")
    _add_common(sp)
    sp.add_argument("--dump", metavar="FILE")
    sp.add_argument("--tol", type=float, default=1e-8, help="trace-norm tolerance")
    sp = sub.add_parser("gibbs", help="Gibbs-state approximation against the exact Gibbs state")
    _add_common(sp)
    sp.add_argument("--sweep", metavar="LO:HI", help="also tabulate degrees LO..HI")
    sp = sub.add_parser("robustness", help="noisy-decoder trials against the 2 sqrt(eps) bound")
    _add_common(sp)
    sp.add_argument("--epsilon", type=float, action="append", metavar="E", help="repeatable")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--noise", choices=NoiseModel.KINDS, default="random")
    sp = sub.add_parser("plot", help="CSV and PNG from a robustness or Gibbs report")
    sp.add_argument("--input", required=True, metavar="FILE")
    sp.add_argument("--out", metavar="DIR")
    sp = sub.add_parser("generate", help="write a Hamiltonian file to stdout")
    sp.add_argument("family", choices=("h1", "commuting", "nearly-independent", "noncommuting"))
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--m", type=int, default=3)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--g", type=float, default=1.0)
    sp.add_argument("--seed", type=int, default=0)
    return parser


def _emit(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=True) + "\n"


def _run(args: argparse.Namespace) -> tuple[dict, dict]:
    cfg = RunConfig.from_args(args)
    timings: dict = {}
    cmd = args.command
    if cmd == "analyze":
        report = cmd_analyze(cfg, timings)
    elif cmd == "graph":
        report = cmd_graph(cfg, timings)
    elif cmd == "refstate":
        report = cmd_refstate(cfg, timings, args.dump)
    elif cmd == "prepare":
        report = cmd_prepare(cfg, timings, args.dump)
    elif cmd == "verify":
        report = cmd_verify(cfg, timings, args.dump, args.tol)
    elif cmd == "gibbs":
        report = cmd_gibbs(cfg, timings, args.sweep)
    else:
        report = cmd_robustness(cfg, timings)
    # output location stays out of the report so reruns elsewhere are byte-identical
    config = {k: v for k, v in asdict(cfg).items() if k != "out"}
    report["config"] = {**config, "poly": list(cfg.poly) if cfg.poly else None, "epsilon": list(cfg.epsilon)}
    report["seed"] = cfg.seed
    return report, timings


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out_dir = getattr(args, "out", None)
    try:
        if args.command == "generate":
            sys.stdout.write(cmd_generate(args.family, args.n, args.m, args.k, args.g, args.seed))
            return 0
        if args.command == "plot":
            sys.stdout.write(_emit(cmd_plot(args.input, out_dir)))
            return 0
        report, timings = _run(args)
    except HdqiError as exc:
        detail = exc.args[0] if exc.args else ""
        payload = {"error_kind": exc.kind, "detail": str(detail)}
        if len(exc.args) > 1 and isinstance(exc.args[1], dict):
            payload["report"] = exc.args[1]
        sys.stdout.write(_emit(payload))
        return exc.exit_code
    text = _emit(report)
    sys.stdout.write(text)
    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{args.command}.json").write_text(text, encoding="utf-8")
        (out / f"{args.command}.timing.json").write_text(_emit(timings), encoding="utf-8")
    return 0


if __name__ == "__main__":
    sys.exit(main())
