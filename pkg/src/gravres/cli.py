"""Command-line driver: phases, single-point analysis, relation checks and sweeps.

Configuration is a flat ``key = value`` file (``#`` starts a comment). Every
key can also be given as a flag of the same name (``--pA 0.3``); flags win over
the file, and the file wins over a ``preset``. Numeric values accept ``pi``
and simple arithmetic, e.g. ``dphiRL = 3*pi/4``.
"""

from __future__ import annotations

import argparse
import ast
import contextlib
import csv
import enum
import io
import json
import math
import operator
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import tolerances
from .complementarity import COLUMNS, evaluate, expects_saturation, sweep_initial_coherence, sweep_phases
from .errors import ConfigError, InvalidInputError, NumericalError
from .gravity import PhaseSet, PhysicalConfig, build_unitary, compute_phases, evolve
from .states import PAIR_BASIS, ProductStateParams, build_product_state, pure_to_density


class ExitCode(enum.IntEnum):
    OK = 0
    VERIFICATION_FAILED = 1
    CONFIG_ERROR = 2
    NUMERICAL_FAILURE = 3
    IO_FAILURE = 4


MODES = ("phases", "evolve", "measures", "verify", "sweep-phases", "sweep-initial")
FORMATS = ("csv", "jsonl")

PHYSICAL_KEYS = {"mA": "m_A", "mB": "m_B", "d": "d", "deltaX": "delta_x", "tau": "tau", "G": "G", "h": "h"}
PHASE_KEYS = ("dphiLR", "dphiRL")
GRID_AXES = ("LR", "RL", "PA", "PB")
GRID_DEFAULTS = {
    "LR": (0.0, 2 * math.pi, 101),
    "RL": (0.0, 2 * math.pi, 101),
    "PA": (0.0, 1.0, 51),
    "PB": (0.0, 1.0, 51),
}
KEYS = (
    ("mode", "preset", "output", "format", "seed", "samples", "workers", "pA", "pB")
    + tuple(PHYSICAL_KEYS)
    + PHASE_KEYS
    + tuple(f"grid{part}{axis}" for axis in GRID_AXES for part in ("Start", "Stop", "Count"))
)
TOL_PREFIX = "tol."

_phase_grid = {"gridStartLR": "0", "gridStopLR": "2*pi", "gridStartRL": "0", "gridStopRL": "2*pi"}
PRESETS: dict[str, dict[str, str]] = {
    # local l1 coherence and negativity over the (dphi_LR, dphi_RL) plane
    "fig2": {"mode": "sweep-phases", **_phase_grid, "gridCountLR": "101", "gridCountRL": "101"},
    "fig3": {"mode": "sweep-phases", **_phase_grid, "gridCountLR": "101", "gridCountRL": "101"},
    # one-dimensional in the accumulated phase: dphi_LR pinned at 0
    "fig4": {"mode": "sweep-phases", "gridStartLR": "0", "gridStopLR": "0", "gridCountLR": "1",
             "gridStartRL": "0", "gridStopRL": "2*pi", "gridCountRL": "201"},
    "fig5": {"mode": "sweep-phases", "gridStartLR": "0", "gridStopLR": "0", "gridCountLR": "1",
             "gridStartRL": "0", "gridStopRL": "2*pi", "gridCountRL": "201"},
    # mass A starts incoherent: no entanglement anywhere on the plane
    "fig6": {"mode": "sweep-phases", **_phase_grid, "gridCountLR": "51", "gridCountRL": "51",
             "pA": "0", "pB": "0.5"},
    # accumulated phase pi, initial weights varied
    "fig7": {"mode": "sweep-initial", "dphiLR": "pi/2", "dphiRL": "pi/2",
             "gridStartPA": "0", "gridStopPA": "1", "gridCountPA": "51",
             "gridStartPB": "0", "gridStopPB": "1", "gridCountPB": "51"},
}

PHASES_COLUMNS = ("tau", "phi", "phi_lr", "phi_rl", "dphi_lr", "dphi_rl")
EVOLVE_COLUMNS = ("row", "col", "re", "im")
VERIFY_COLUMNS = ("dphi_lr", "dphi_rl", "p_a", "p_b", "relation", "lhs_value", "bound", "residual",
                  "saturated", "expected_saturated", "passed")


@dataclass(frozen=True)
class GridSpec:
    start: float
    stop: float
    count: int

    def values(self) -> list[float]:
        if self.count == 1:
            return [self.start]
        return [float(x) for x in np.linspace(self.start, self.stop, self.count)]


@dataclass(frozen=True)
class RunConfig:
    mode: str
    physical: PhysicalConfig | None = None
    explicit_phases: PhaseSet | None = None
    params: ProductStateParams = ProductStateParams()
    grids: dict[str, GridSpec] = field(default_factory=lambda: {a: GridSpec(*v) for a, v in GRID_DEFAULTS.items()})
    seed: int = 0
    samples: int = 0
    output: Path | None = None
    format: str = "csv"
    preset: str | None = None
    workers: int = 1
    tolerance_overrides: dict[str, float] = field(default_factory=dict)

    def phases(self) -> PhaseSet:
        if self.explicit_phases is not None:
            return self.explicit_phases
        if self.physical is not None:
            return compute_phases(self.physical)
        raise ConfigError(f"mode {self.mode!r} needs phases", key="dphiLR")

    def output_path(self) -> Path:
        if self.output is not None:
            return self.output
        return Path(f"{self.preset or self.mode}.{self.format}")


# -- value parsing -----------------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNOPS = {ast.UAdd: operator.pos, ast.USub: operator.neg}


def _eval_node(node: ast.AST) -> float:
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
        return _UNOPS[type(node.op)](_eval_node(node.operand))
    raise ValueError("unsupported expression")


def parse_number(text: str, key: str) -> float:
    try:
        value = float(text)
    except ValueError:
        try:
            value = _eval_node(ast.parse(text.strip(), mode="eval"))
        except (SyntaxError, ValueError, ZeroDivisionError, OverflowError, RecursionError):
            raise ConfigError(f"not a number: {text!r}", key=key) from None
    if not math.isfinite(value):
        raise ConfigError(f"value must be finite, got {text!r}", key=key)
    return value


def parse_int(text: str, key: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ConfigError(f"not an integer: {text!r}", key=key) from None


def parse_pairs(text: str) -> dict[str, str]:
    """Split a ``key = value`` document into a dict, checking syntax and key names."""
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
        if not _known_key(key):
            raise ConfigError(f"unknown key {key!r}", line=lineno)
        if key in pairs:
            raise ConfigError(f"duplicate key {key!r}", line=lineno)
        pairs[key] = value
    return pairs


def _known_key(key: str) -> bool:
    if key.startswith(TOL_PREFIX):
        return key[len(TOL_PREFIX):] in {f for f in tolerances.DEFAULT.__dataclass_fields__}
    return key in KEYS


def parse_config(text: str) -> RunConfig:
    return build_config(parse_pairs(text))


def build_config(pairs: dict[str, str]) -> RunConfig:
    """Validate raw key/value strings (preset defaults applied underneath)."""
    for key in pairs:
        if not _known_key(key):
            raise ConfigError(f"unknown key {key!r}", key=key)

    preset = pairs.get("preset")
    merged: dict[str, str] = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r} (choose from {', '.join(PRESETS)})", key="preset")
        merged.update(PRESETS[preset])
        # User-supplied phase sources replace the preset's.
        if any(k in pairs for k in (*PHYSICAL_KEYS, *PHASE_KEYS)):
            for k in PHASE_KEYS:
                merged.pop(k, None)
    merged.update(pairs)

    mode = merged.get("mode")
    if mode is None:
        raise ConfigError("mode is required", key="mode")
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r} (choose from {', '.join(MODES)})", key="mode")

    fmt = merged.get("format", "csv")
    if fmt not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}", key="format")

    physical = _physical(merged)
    explicit = _explicit_phases(merged)
    if physical is not None and explicit is not None:
        raise ConfigError("give either physical parameters or explicit phases, not both", key="dphiLR")
    needs_phases = mode in ("evolve", "measures", "verify", "sweep-initial")
    if mode == "phases" and physical is None:
        raise ConfigError("phases mode needs physical parameters (mA, mB, d, deltaX, tau)", key="tau")
    if mode == "phases" and explicit is not None:
        raise ConfigError("phases mode computes phases; explicit phases are not accepted", key="dphiLR")
    if needs_phases and physical is None and explicit is None:
        raise ConfigError(f"mode {mode!r} needs physical parameters or dphiLR/dphiRL", key="dphiLR")
    if mode == "sweep-phases" and (physical is not None or explicit is not None):
        raise ConfigError("sweep-phases takes its phases from the grid; drop phase inputs", key="dphiLR")

    try:
        params = ProductStateParams(
            parse_number(merged.get("pA", "0.5"), "pA"), parse_number(merged.get("pB", "0.5"), "pB")
        )
    except InvalidInputError as exc:
        raise ConfigError(str(exc), key="pA" if "p_A" in str(exc) else "pB") from None

    grids = {}
    for axis in GRID_AXES:
        d_start, d_stop, d_count = GRID_DEFAULTS[axis]
        ks, ke, kc = f"gridStart{axis}", f"gridStop{axis}", f"gridCount{axis}"
        start = parse_number(merged[ks], ks) if ks in merged else d_start
        stop = parse_number(merged[ke], ke) if ke in merged else d_stop
        count = parse_int(merged[kc], kc) if kc in merged else d_count
        if count < 1:
            raise ConfigError("grid count must be at least 1", key=kc)
        if start > stop:
            raise ConfigError(f"grid start {start!r} exceeds stop {stop!r}", key=ks)
        if axis in ("PA", "PB") and (start < 0.0 or stop > 1.0):
            raise ConfigError("probability grid must lie within [0, 1]", key=ks if start < 0.0 else ke)
        grids[axis] = GridSpec(start, stop, count)

    seed = parse_int(merged.get("seed", "0"), "seed")
    if seed < 0:
        raise ConfigError("seed must be non-negative", key="seed")
    samples = parse_int(merged.get("samples", "0"), "samples")
    if samples < 0:
        raise ConfigError("samples must be non-negative", key="samples")
    workers = parse_int(merged.get("workers", "1"), "workers")
    if workers < 1:
        raise ConfigError("workers must be at least 1", key="workers")

    tol_overrides = {}
    for key, value in merged.items():
        if key.startswith(TOL_PREFIX):
            name = key[len(TOL_PREFIX):]
            v = parse_number(value, key)
            if name == "jacobi_max_sweeps":
                v = int(v)
            if v <= 0:
                raise ConfigError("tolerances must be positive", key=key)
            tol_overrides[name] = v

    output = Path(merged["output"]) if "output" in merged else None
    return RunConfig(
        mode=mode, physical=physical, explicit_phases=explicit, params=params, grids=grids, seed=seed,
        samples=samples, output=output, format=fmt, preset=preset, workers=workers,
        tolerance_overrides=tol_overrides,
    )


def _physical(merged: dict[str, str]) -> PhysicalConfig | None:
    given = [k for k in ("mA", "mB", "d", "deltaX", "tau") if k in merged]
    if not given:
        for k in ("G", "h"):
            if k in merged:
                raise ConfigError("G/h given without the other physical parameters", key=k)
        return None
    for k in ("mA", "mB", "d", "deltaX", "tau"):
        if k not in merged:
            raise ConfigError("missing physical parameter", key=k)
    values = {PHYSICAL_KEYS[k]: parse_number(merged[k], k) for k in PHYSICAL_KEYS if k in merged}
    if values["d"] <= values["delta_x"]:
        raise ConfigError(f"d = {values['d']!r} must exceed deltaX = {values['delta_x']!r}", key="d")
    try:
        return PhysicalConfig(**values)
    except InvalidInputError as exc:
        key = next((k for k, f in PHYSICAL_KEYS.items() if str(exc).startswith(f + " ")), "tau")
        raise ConfigError(str(exc), key=key) from None


def _explicit_phases(merged: dict[str, str]) -> PhaseSet | None:
    present = [k for k in PHASE_KEYS if k in merged]
    if not present:
        return None
    if len(present) != 2:
        missing = next(k for k in PHASE_KEYS if k not in merged)
        raise ConfigError("dphiLR and dphiRL must be given together", key=missing)
    return PhaseSet.from_differences(parse_number(merged["dphiLR"], "dphiLR"), parse_number(merged["dphiRL"], "dphiRL"))


# -- running -----------------------------------------------------------------

def _cell(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, enum.Enum):
        return value.value
    return value


def render(rows: Iterable[dict[str, Any]], columns: Sequence[str], fmt: str) -> str:
    """Serialize rows; floats use the shortest round-trip repr."""
    buf = io.StringIO()
    if fmt == "csv":
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            cells = []
            for c in columns:
                v = _cell(row[c])
                if isinstance(v, bool):
                    cells.append("true" if v else "false")
                elif isinstance(v, float):
                    cells.append(repr(v))
                else:
                    cells.append(str(v))
            writer.writerow(cells)
    else:
        for row in rows:
            buf.write(json.dumps({c: _cell(row[c]) for c in columns}, allow_nan=False))
            buf.write("\n")
    return buf.getvalue()


def write_atomic(path: Path, text: str) -> None:
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


def _verify_rows(config: RunConfig) -> tuple[list[dict[str, Any]], bool]:
    tol = tolerances.get()
    points = [config.phases()]
    if config.samples:
        rng = np.random.default_rng(config.seed)
        draws = rng.uniform(0.0, 2 * math.pi, size=(config.samples, 2))
        points += [PhaseSet.from_differences(float(a), float(b)) for a, b in draws]
    expected = expects_saturation(config.params)
    ok = True
    rows = []
    for phases in points:
        record = evaluate(config.params, phases)
        for rep in record.reports:
            passed = rep.holds() and (not expected or abs(rep.residual) <= tol.arithmetic)
            ok = ok and passed
            rows.append({
                "dphi_lr": record.dphi_LR, "dphi_rl": record.dphi_RL,
                "p_a": record.p_A, "p_b": record.p_B,
                "relation": rep.relation, "lhs_value": rep.lhs_value, "bound": rep.bound,
                "residual": rep.residual, "saturated": rep.saturated,
                "expected_saturated": expected, "passed": passed,
            })
    return rows, ok


def produce(config: RunConfig) -> tuple[list[dict[str, Any]], Sequence[str], bool]:
    """Compute the artifact rows for ``config``; the flag is False on verification failure."""
    mode = config.mode
    if mode == "phases":
        ph = config.phases()
        row = {"tau": config.physical.tau, "phi": ph.phi, "phi_lr": ph.phi_LR, "phi_rl": ph.phi_RL,
               "dphi_lr": ph.dphi_LR, "dphi_rl": ph.dphi_RL}
        return [row], PHASES_COLUMNS, True
    if mode == "evolve":
        rho0 = pure_to_density(build_product_state(config.params))
        rho = evolve(rho0, build_unitary(config.phases().relative())).mat
        rows = [{"row": PAIR_BASIS[i], "col": PAIR_BASIS[j], "re": rho[i, j].real, "im": rho[i, j].imag}
                for i in range(4) for j in range(4)]
        return rows, EVOLVE_COLUMNS, True
    if mode == "measures":
        return [evaluate(config.params, config.phases()).row()], COLUMNS, True
    if mode == "verify":
        rows, ok = _verify_rows(config)
        return rows, VERIFY_COLUMNS, ok
    if mode == "sweep-phases":
        records = sweep_phases(config.grids["LR"].values(), config.grids["RL"].values(), config.params,
                               workers=config.workers)
    else:
        records = sweep_initial_coherence(config.grids["PA"].values(), config.grids["PB"].values(),
                                          config.phases(), workers=config.workers)
    return [r.row() for r in records], COLUMNS, True


def run(config: RunConfig) -> int:
    """Execute ``config`` and write its artifact; returns an ExitCode value."""
    try:
        with tolerances.override(**config.tolerance_overrides):
            rows, columns, ok = produce(config)
    except NumericalError as exc:
        print(f"gravres: numerical failure: {exc}", file=sys.stderr)
        return ExitCode.NUMERICAL_FAILURE
    except (ConfigError, InvalidInputError) as exc:
        print(f"gravres: invalid configuration: {exc}", file=sys.stderr)
        return ExitCode.CONFIG_ERROR
    path = config.output_path()
    try:
        write_atomic(path, render(rows, columns, config.format))
    except OSError as exc:
        print(f"gravres: cannot write {path}: {exc}", file=sys.stderr)
        return ExitCode.IO_FAILURE
    print(f"wrote {len(rows)} rows to {path}", file=sys.stderr)
    if not ok:
        print("gravres: verification failed", file=sys.stderr)
        return ExitCode.VERIFICATION_FAILED
    return ExitCode.OK


def _arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gravres",
        description="Coherence-to-entanglement analysis of two gravitationally interacting masses.",
    )
    parser.add_argument("--config", type=Path, help="flat key = value configuration file")
    parser.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                        help="override a tolerance, e.g. --tol arithmetic=1e-12")
    for key in KEYS:
        parser.add_argument(f"--{key}", dest=key, metavar="VALUE")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _arg_parser().parse_args(argv)
    try:
        pairs: dict[str, str] = {}
        if args.config is not None:
            try:
                text = args.config.read_text(encoding="utf-8")
            except OSError as exc:
                print(f"gravres: cannot read {args.config}: {exc}", file=sys.stderr)
                return ExitCode.IO_FAILURE
            pairs = parse_pairs(text)
        for key in KEYS:
            value = getattr(args, key)
            if value is not None:
                pairs[key] = value
        for item in args.tol:
            name, sep, value = item.partition("=")
            if not sep:
                raise ConfigError(f"expected NAME=VALUE, got {item!r}", key="--tol")
            pairs[TOL_PREFIX + name.strip()] = value.strip()
        config = build_config(pairs)
    except ConfigError as exc:
        print(f"gravres: {exc}", file=sys.stderr)
        return ExitCode.CONFIG_ERROR
    return int(run(config))


if __name__ == "__main__":
    sys.exit(main())
