"""Command-line front end.

Runs are described by a flat ``key = value`` file::

    command = verify
    method = real2
    seed = -1.2,1.1
    seed = -1,0.9
    expected = -1.2,-1,0.5,1.5,2.5

Repeated ``seed`` lines are kept in order.  A seed is ``eps,nu`` with
complex values written as Python literals (``5.4+0.05j``), or
``eigen:n`` for the oscillator eigenstate psi_n.  Exit status is 0 when
all checks pass, 1 on a failed check and 2 on usage or config errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import coherent as cs
from . import repro
from .algebra import LadderSpec, algebra_report
from .errors import HsusyError, ParseError, UnknownCase, ValidationError
from .grid import Grid
from .schrodinger import eigenstate_seed, general_solution
from .susy2_direct import complex_case, confluent_case, real_case
from .susy_chain import build_chain, oscillator_limit_chain
from .verify import spectrum_report

COMMANDS = ("design", "verify", "algebra", "coherent", "repro")
METHODS = ("iterative", "real2", "confluent", "complex2")
LIST_KEYS = ("seed", "z")
KNOWN_KEYS = {"command", "method", "seed", "grid", "verify_grid", "w0", "x0", "mode", "w",
              "k", "z", "n_max", "expected", "levels", "tol", "out", "case"}


@dataclass
class RunConfig:
    command: str
    method: str = "real2"
    seeds: list[tuple[str, str]] = field(default_factory=list)
    grid: tuple[float, float, int] = (-8.0, 8.0, 3201)
    verify_grid: tuple[float, float, int] = (-12.0, 12.0, 4801)
    w0: float = 0.0
    x0: float = 0.0
    mode: str = ""
    w: float = 0.0
    k: int = 1
    zs: list[complex] = field(default_factory=list)
    n_max: int = 8
    expected: list[float] | None = None
    levels: int = 6
    tol: float | None = None
    out: str = "hsusy_out"
    case: str | None = None
    raw: dict[str, list[str]] = field(default_factory=dict)

    def manifest(self) -> str:
        """Every key as written in the config, in sorted order."""
        lines = []
        for key in sorted(self.raw):
            lines += [f"# {key}={v}" for v in self.raw[key]]
        return "\n".join(lines) + "\n"


def _float(text: str, key: str, line: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"{key}: '{text}' is not a number", line) from None


def _complex(text: str, key: str, line: int) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise ParseError(f"{key}: '{text}' is not a number", line) from None


def _grid(text: str, key: str, line: int) -> tuple[float, float, int]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ParseError(f"{key} needs xmin,xmax,n", line)
    lo, hi = _float(parts[0], key, line), _float(parts[1], key, line)
    try:
        n = int(parts[2])
    except ValueError:
        raise ParseError(f"{key}: '{parts[2]}' is not an integer", line) from None
    if not lo < hi or n < 3:
        raise ValidationError(f"{key} needs xmin < xmax and n >= 3", key)
    return lo, hi, n


def _seed(text: str, line: int) -> tuple[str, str]:
    text = text.strip()
    if text.startswith("eigen:"):
        n = text[6:].strip()
        if not n.isdigit():
            raise ParseError(f"seed: '{text}' needs eigen:<n>", line)
        return ("eigen", n)
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ParseError(f"seed: '{text}' needs eps,nu", line)
    for p in parts:
        _complex(p, "seed", line)
    return parts[0], parts[1]


def parse_config(text: str) -> RunConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    raw: dict[str, list[str]] = {}
    where: dict[str, int] = {}
    seeds: list[tuple[str, str]] = []
    zs: list[complex] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ParseError(f"expected key = value, got '{body}'", lineno)
        key, value = (s.strip() for s in body.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ParseError(f"unknown key '{key}'", lineno)
        if key in raw and key not in LIST_KEYS:
            raise ParseError(f"key '{key}' given twice", lineno)
        raw.setdefault(key, []).append(value)
        where.setdefault(key, lineno)
        if key == "seed":
            seeds.append(_seed(value, lineno))
        elif key == "z":
            zs.append(_complex(value, key, lineno))
    if not raw:
        raise ParseError("empty configuration", 1)
    if "command" not in raw:
        raise ValidationError("command is required", "command")

    cfg = RunConfig(command=raw["command"][0], raw=raw)
    if cfg.command not in COMMANDS:
        raise ValidationError(f"command must be one of {COMMANDS}", "command")
    one = {k: v[0] for k, v in raw.items()}
    if "method" in one:
        if one["method"] not in METHODS:
            raise ValidationError(f"method must be one of {METHODS}", "method")
        cfg.method = one["method"]
    cfg.seeds = seeds
    for key in ("grid", "verify_grid"):
        if key in one:
            setattr(cfg, key, _grid(one[key], key, where[key]))
    for key in ("w0", "x0", "w", "tol"):
        if key in one:
            setattr(cfg, key, _float(one[key], key, where[key]))
    for key in ("k", "n_max", "levels"):
        if key in one:
            val = _float(one[key], key, where[key])
            if val != int(val) or val < 0:
                raise ValidationError(f"{key} must be a non-negative integer", key)
            setattr(cfg, key, int(val))
    if "mode" in one:
        cfg.mode = one["mode"]
    if "expected" in one:
        cfg.expected = sorted(_float(p.strip(), "expected", where["expected"])
                              for p in one["expected"].split(","))
    cfg.zs = zs
    cfg.out = one.get("out", cfg.out)
    cfg.case = one.get("case")
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    if cfg.command in ("design", "verify") and not cfg.seeds:
        raise ValidationError("at least one seed is required", "seed")
    if cfg.command in ("design", "verify"):
        need = {"iterative": None, "real2": 2, "confluent": 1, "complex2": 1}[cfg.method]
        if need is not None and len(cfg.seeds) != need:
            raise ValidationError(f"method {cfg.method} takes {need} seed(s)", "seed")
    if cfg.command == "repro" and cfg.case is None:
        raise ValidationError("repro needs case", "case")
    if not cfg.mode:
        cfg.mode = "nonlinear" if cfg.command == "coherent" else "natural"
    if cfg.command == "algebra" and cfg.mode not in ("natural", "linearized"):
        raise ValidationError("algebra mode is natural or linearized", "mode")
    if cfg.command == "coherent" and cfg.mode not in ("nonlinear", "linear"):
        raise ValidationError("coherent mode is nonlinear or linear", "mode")
    if cfg.w < -1.0:
        raise ValidationError("w must be >= -1", "w")
    if cfg.tol is not None and cfg.tol <= 0:
        raise ValidationError("tol must be positive", "tol")


# --------------------------------------------------------------------------
# pipelines


def _make_seed(seed: tuple[str, str], grid: Grid):
    if seed[0] == "eigen":
        return eigenstate_seed(int(seed[1]), grid)
    eps, nu = complex(seed[0]), complex(seed[1])
    eps = eps.real if eps.imag == 0 else eps
    nu = nu.real if nu.imag == 0 else nu
    return general_solution(eps, nu, grid)


def build_design(cfg: RunConfig, grid: Grid):
    seeds = [_make_seed(s, grid) for s in cfg.seeds]
    if cfg.method == "iterative":
        # the chain wants decreasing factorization energies
        return build_chain(sorted(seeds, key=lambda s: -np.real(s.epsilon)))
    if cfg.method == "real2":
        return real_case(seeds[0], seeds[1])
    if cfg.method == "confluent":
        return confluent_case(seeds[0], cfg.w0, cfg.x0)
    return complex_case(seeds[0])


def _design_potential(design) -> np.ndarray:
    return np.asarray(design.potential, dtype=float)


def _expected_levels(cfg: RunConfig, design) -> list[float]:
    if cfg.expected is not None:
        return cfg.expected
    new = []
    if hasattr(design, "normalizable"):
        new = [float(np.real(s.energy)) for s, ok in zip(design.new_states, design.normalizable)
               if ok and np.imag(s.energy) == 0]
    else:
        new = [float(e) for e in design.epsilons]
    osc = [n + 0.5 for n in range(cfg.levels)]
    return sorted(set(osc) | set(new))[: cfg.levels]


def _write(out: Path, name: str, text: str) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text)


def _potential_csv(cfg: RunConfig, grid: Grid, v: np.ndarray) -> str:
    rows = [f"{a!r},{b!r}" for a, b in zip(grid.x.tolist(), v.tolist())]
    return cfg.manifest() + "x,value\n" + "\n".join(rows) + "\n"


def run_design(cfg: RunConfig, out: Path) -> int:
    grid = Grid(*cfg.grid)
    design = build_design(cfg, grid)
    _write(out, "potential.csv", _potential_csv(cfg, grid, _design_potential(design)))
    print(f"wrote {out / 'potential.csv'}")
    return 0


def run_verify(cfg: RunConfig, out: Path) -> int:
    grid = Grid(*cfg.verify_grid)
    design = build_design(cfg, grid)
    expected = _expected_levels(cfg, design)
    tol = cfg.tol or repro.SPECTRUM_TOL
    rep = spectrum_report(_oracle_potential(design), expected, tol)
    _write(out, "potential.csv", _potential_csv(cfg, grid, _design_potential(design)))
    _write(out, "spectrum.csv", cfg.manifest() + rep.to_csv())
    _write(out, "report.txt", rep.table() + "\n")
    print(rep.table())
    return 0 if rep.passed else 1


def _oracle_potential(design):
    return design.v2 if hasattr(design, "v2") else design.vk


def run_algebra(cfg: RunConfig, out: Path) -> int:
    grid = Grid(*cfg.verify_grid)
    if cfg.seeds:
        chain = build_chain([_make_seed(s, grid) for s in cfg.seeds])
    else:
        chain = oscillator_limit_chain(cfg.k, grid)
    spec = LadderSpec(chain, cfg.mode, cfg.w)
    rep = algebra_report(spec, cfg.n_max)
    _write(out, "algebra.csv", cfg.manifest() + rep.to_csv())
    tol = cfg.tol or repro.ALGEBRA_TOL
    worst = max(rep.commutator_residuals)
    ok = worst <= tol
    print(f"{'PASS' if ok else 'FAIL'}  [L, L+] diagonal residual {worst:.3e} (limit {tol:.1e})")
    return 0 if ok else 1


def run_coherent(cfg: RunConfig, out: Path) -> int:
    eps = tuple(float(np.real(complex(s[0]))) for s in cfg.seeds if s[0] != "eigen")
    if not eps:
        eps = repro.OSC_LIMIT.get(cfg.k, tuple(0.5 - i for i in range(1, cfg.k + 1)))
    spec = cs.CoherentStateSpec(len(eps), eps, 0j, cfg.mode, cfg.w)
    zs = cfg.zs or repro.Z_GRID
    tol = cfg.tol or 1e-10
    rows = ["re_z,im_z,terms,norm_error,eigen_residual"]
    worst = 0.0
    for z in zs:
        c = cs.cs_coefficients(spec.at(z))
        ne, er = abs(c.norm2 - 1.0), cs.eigen_residual(c)
        worst = max(worst, ne)
        rows.append(f"{z.real!r},{z.imag!r},{len(c)},{ne!r},{er!r}")
    _write(out, "coherent.csv", cfg.manifest() + "\n".join(rows) + "\n")
    try:
        surf = [(z.real, z.imag, *cs.fock_uncertainty(spec.at(z))) for z in zs]
        _write(out, "uncertainty.csv", cs.surface_csv(surf))
    except HsusyError:
        pass  # no Fock representation outside the oscillator limit
    ok = worst <= tol
    print(f"{'PASS' if ok else 'FAIL'}  |<z|z> - 1| max {worst:.3e} (limit {tol:.1e})")
    return 0 if ok else 1


def run_repro(case: str, out: Path, tol: float | None = None, grid: Grid | None = None) -> int:
    res = repro.run_case(case, out, tol, grid)
    print(res.report(), end="")
    return 0 if res.passed else 1


def _parse_grid_flag(text: str) -> tuple[float, float, int]:
    try:
        return _grid(text, "--grid", 0)
    except HsusyError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="hsusy", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="run configuration file")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--repro", metavar="CASE",
                        help=f"reproduction case: {', '.join(repro.CASES)}")
    parser.add_argument("--tol", type=float, help="override the default tolerance")
    parser.add_argument("--grid", type=_parse_grid_flag, metavar="XMIN,XMAX,N",
                        help="override the grid")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if bool(args.config) == bool(args.repro):
        parser.print_usage(sys.stderr)
        print("hsusy: give exactly one of --config or --repro", file=sys.stderr)
        return 2
    try:
        if args.repro:
            out = Path(args.out or f"hsusy_out/{args.repro}")
            grid = Grid(*args.grid) if args.grid else None
            return run_repro(args.repro, out, args.tol, grid)
        cfg = parse_config(Path(args.config).read_text(encoding="utf-8"))
        if args.tol is not None:
            cfg.tol = args.tol
        if args.grid is not None:
            cfg.grid = cfg.verify_grid = args.grid
        out = Path(args.out or cfg.out)
        if cfg.command == "repro":
            return run_repro(cfg.case, out, cfg.tol)
        runner = {"design": run_design, "verify": run_verify,
                  "algebra": run_algebra, "coherent": run_coherent}[cfg.command]
        return runner(cfg, out)
    except UnknownCase as exc:
        print(f"hsusy: unknown case {exc}; choose from {', '.join(repro.CASES)}",
              file=sys.stderr)
        return 2
    except (ParseError, ValidationError, OSError) as exc:
        print(f"hsusy: {exc}", file=sys.stderr)
        return 2
    except HsusyError as exc:
        print(f"hsusy: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
