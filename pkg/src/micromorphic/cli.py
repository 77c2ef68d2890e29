"""Command-line front end.

Subcommands:

* ``validate <file>``: admissibility verdict plus every characteristic
  quantity of a material file.
* ``dispersion``: omega(k) branch sweep as CSV (one column per branch).
* ``reflect``: reflection/transmission sweep over frequency as CSV.
* ``bandgap``: detected complete band gaps as JSON.

CSV output starts with a single ``#`` header line naming columns and
units.  Sweeps run in parallel across rows (``MICROMORPHIC_WORKERS``
workers, default: all cores); rows are emitted in index order so output
bytes do not depend on the worker count.  Exit codes: 0 success, 1 I/O or
parse error, 2 invalid material, 3 whole-run solver failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import energetics, scattering, spectral
from .materials import (CauchyMaterial, Flavor, MaterialError,
                        MicromorphicMaterial, cauchy_speeds,
                        characteristic_quantities, load_material)
from .numerics import NumericsError
from .scattering import ConnectionType, IncidentWave
from .spectral import (ALL_FAMILIES, COUPLED_FAMILIES, SpectralError,
                       WaveFamily)

EXIT_OK = 0
EXIT_IO = 1
EXIT_INVALID_MATERIAL = 2
EXIT_SOLVER = 3

WORKERS_ENV = "MICROMORPHIC_WORKERS"

_INCIDENT = {"P": (1.0, 0.0, 0.0), "S": (0.0, 1.0, 0.0), "PS": (1.0, 1.0, 1.0)}


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def _load(path: str):
    try:
        return load_material(path)
    except MaterialError as exc:
        raise _CliError(EXIT_INVALID_MATERIAL, f"{path}: {exc}") from exc
    except (OSError, json.JSONDecodeError) as exc:
        raise _CliError(EXIT_IO, f"{path}: {exc}") from exc


def _workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "")
    if raw:
        try:
            n = int(raw)
        except ValueError as exc:
            raise _CliError(EXIT_IO, f"{WORKERS_ENV}={raw!r} is not an "
                            "integer") from exc
        return max(1, n)
    return os.cpu_count() or 1


def _parallel_map(func, items: list):
    """Order-preserving map, parallel across processes when allowed."""
    n = _workers()
    if n <= 1 or len(items) < 4:
        return [func(item) for item in items]
    chunk = max(1, len(items) // (4 * n))
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(func, items, chunksize=chunk))


def _fmt(value: float) -> str:
    return "%.17g" % value


def _emit(lines: list[str], out: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _parse_amplitude(raw: str) -> complex:
    try:
        return complex(raw.replace("i", "j").replace(" ", ""))
    except ValueError as exc:
        raise _CliError(EXIT_IO,
                        f"cannot parse amplitude {raw!r}; use forms like "
                        "'1', '0.5+0.5i'") from exc


# ---------------------------------------------------------------------------
# validate

def cmd_validate(args) -> int:
    material = _load(args.file)
    print(f"{args.file}: valid {type(material).__name__}")
    if isinstance(material, CauchyMaterial):
        c_l, c_t = cauchy_speeds(material)
        print(f"  c_l = {c_l:.6g} m/s")
        print(f"  c_t = {c_t:.6g} m/s")
        return EXIT_OK
    cq = characteristic_quantities(material)
    print(f"  flavor          = {material.flavor.value}")
    print(f"  omega_s         = {cq.omega_s:.6g} rad/s")
    print(f"  omega_r         = {cq.omega_r:.6g} rad/s")
    print(f"  omega_p         = {cq.omega_p:.6g} rad/s")
    print(f"  omega_l         = {cq.omega_l:.6g} rad/s")
    print(f"  omega_t (two closed forms in circulation) = "
          f"{cq.omega_t_sec623:.6g} / {cq.omega_t_eq56:.6g} rad/s")
    print(f"  c_m             = {cq.c_m:.6g} m/s")
    print(f"  c_p             = {cq.c_p:.6g} m/s")
    print(f"  c_s             = {cq.c_s:.6g} m/s")
    if material.flavor is Flavor.RELAXED:
        horiz_t = spectral.asymptotes_numeric(
            material, WaveFamily.TRANSVERSE_Y).horizontals
        omega_t_num = horiz_t[0] if horiz_t else float("nan")
        print(f"  omega_t numeric = {omega_t_num:.6g} rad/s")
        lower = max(cq.omega_l, omega_t_num)
        if lower < cq.omega_s:
            print(f"  predicted complete band gap: "
                  f"[{lower:.6g}, {cq.omega_s:.6g}] rad/s")
        else:
            print("  predicted complete band gap: none")
    elif material.flavor is Flavor.MINDLIN:
        print("  no complete band gap (no horizontal asymptotes)")
    return EXIT_OK


# ---------------------------------------------------------------------------
# dispersion

_DISPERSION_STATE: dict = {}


def _dispersion_row(k: float):
    material = _DISPERSION_STATE["material"]
    families = _DISPERSION_STATE["families"]
    values = [k]
    cache: dict[WaveFamily, list[float]] = {}
    for family in families:
        if family is WaveFamily.TRANSVERSE_Z:
            source = cache.get(WaveFamily.TRANSVERSE_Y)
            if source is None:
                source = spectral.omega_of_k(material, family, k)
        else:
            source = spectral.omega_of_k(material, family, k)
        cache[family] = source
        values.extend(source)
    return tuple(values)


def _with_flavor(material, flavor: Flavor):
    if not isinstance(material, MicromorphicMaterial):
        raise _CliError(EXIT_INVALID_MATERIAL,
                        "dispersion needs a micromorphic material file")
    if material.flavor is flavor:
        return material
    swapped = MicromorphicMaterial(
        rho=material.rho, eta=material.eta, mu_e=material.mu_e,
        lambda_e=material.lambda_e, mu_c=material.mu_c,
        mu_micro=material.mu_micro, lambda_micro=material.lambda_micro,
        char_length=material.char_length, flavor=flavor)
    try:
        from .materials import validate
        validate(swapped)
    except MaterialError as exc:
        raise _CliError(EXIT_INVALID_MATERIAL,
                        f"--model {flavor.value} incompatible with the "
                        f"material file: {exc}") from exc
    return swapped


def cmd_dispersion(args) -> int:
    material = _load(args.material)
    if args.model is not None:
        material = _with_flavor(material, Flavor(args.model))
    elif not isinstance(material, MicromorphicMaterial):
        raise _CliError(EXIT_INVALID_MATERIAL,
                        "dispersion needs a micromorphic material file")

    if args.family == "all":
        families = list(ALL_FAMILIES)
    else:
        families = [WaveFamily(args.family)]
    if args.kmin < 0 or args.kmax <= args.kmin or args.samples < 2:
        raise _CliError(EXIT_IO, "need 0 <= kmin < kmax and samples >= 2")

    headers = ["k [1/m]"]
    for family in families:
        n = 3 if family in COUPLED_FAMILIES else 1
        for i in range(n):
            suffix = f"_{i + 1}" if n > 1 else ""
            headers.append(f"omega_{family.value}{suffix} [rad/s]")

    ks = np.linspace(args.kmin, args.kmax, args.samples)
    _DISPERSION_STATE["material"] = material
    _DISPERSION_STATE["families"] = families
    try:
        rows = _parallel_map(_dispersion_row, [float(k) for k in ks])
    except (SpectralError, NumericsError) as exc:
        raise _CliError(EXIT_SOLVER, f"dispersion sweep failed: {exc}")

    lines = ["# " + ", ".join(headers)]
    lines += [", ".join(_fmt(v) for v in row) for row in rows]
    _emit(lines, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# reflect

_REFLECT_STATE: dict = {}


def _reflect_row(omega: float):
    cauchy = _REFLECT_STATE["cauchy"]
    micro = _REFLECT_STATE["micro"]
    connection = _REFLECT_STATE["connection"]
    alpha = _REFLECT_STATE["alpha"]
    incident = IncidentWave(alpha, omega)
    try:
        solution = scattering.solve_scattering(cauchy, micro, connection,
                                               incident)
        budget = energetics.budget_from_solution(solution, cauchy, micro,
                                                 incident)
        if isinstance(micro, CauchyMaterial):
            n_prop = 3
        else:
            n_prop = sum(1 for b, _ in solution.transmitted
                         if b.propagating)
        return (omega, budget.R, budget.T, budget.J_i, budget.J_r,
                budget.J_t, solution.residual, float(n_prop)), None
    except (scattering.ScatteringError, NumericsError,
            SpectralError) as exc:
        nan = float("nan")
        return (omega, nan, nan, nan, nan, nan, nan, nan), str(exc)


def cmd_reflect(args) -> int:
    cauchy = _load(args.cauchy)
    micro = _load(args.micro)
    if not isinstance(cauchy, CauchyMaterial):
        raise _CliError(EXIT_INVALID_MATERIAL,
                        f"{args.cauchy}: the --cauchy side must be a "
                        "Cauchy material")
    if args.wmin <= 0 or args.wmax <= args.wmin or args.samples < 2:
        raise _CliError(EXIT_IO, "need 0 < wmin < wmax and samples >= 2")

    alpha = [complex(v) for v in _INCIDENT[args.incident]]
    for i, override in enumerate((args.alpha1, args.alpha2, args.alpha3)):
        if override is not None:
            alpha[i] = _parse_amplitude(override)

    if args.spacing == "log":
        omegas = np.geomspace(args.wmin, args.wmax, args.samples)
    else:
        omegas = np.linspace(args.wmin, args.wmax, args.samples)

    _REFLECT_STATE.update(cauchy=cauchy, micro=micro,
                          connection=ConnectionType(args.connection),
                          alpha=tuple(alpha))
    results = _parallel_map(_reflect_row, [float(w) for w in omegas])

    failures = [msg for _, msg in results if msg is not None]
    for (omega, *_), msg in ((r, m) for r, m in results if m is not None):
        print(f"warning: omega={omega:.6g}: {msg}", file=sys.stderr)
    if len(failures) == len(results):
        raise _CliError(EXIT_SOLVER, "every frequency in the sweep failed")

    lines = ["# omega [rad/s], R [-], T [-], J_i [W/m^2], J_r [W/m^2], "
             "J_t [W/m^2], residual [-], n_propagating_transmitted [-]"]
    lines += [", ".join(_fmt(v) for v in row) for row, _ in results]
    _emit(lines, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# bandgap

def cmd_bandgap(args) -> int:
    material = _load(args.material)
    if not isinstance(material, MicromorphicMaterial):
        raise _CliError(EXIT_INVALID_MATERIAL,
                        "bandgap needs a micromorphic material file")
    if args.wmin <= 0 or args.wmax <= args.wmin or args.samples < 2:
        raise _CliError(EXIT_IO, "need 0 < wmin < wmax and samples >= 2")
    grid = np.linspace(args.wmin, args.wmax, args.samples)
    try:
        gaps = spectral.band_gap(material, grid)
    except (SpectralError, NumericsError) as exc:
        raise _CliError(EXIT_SOLVER, f"band-gap scan failed: {exc}")
    payload = [{"lower": gap.lower, "upper": gap.upper} for gap in gaps]
    text = json.dumps(payload, indent=2)
    if args.out is None:
        print(text)
    else:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="micromorphic",
        description="Dispersion, band gaps and interface reflection for "
                    "Cauchy / micromorphic half-spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a material file and "
                       "print its characteristic quantities")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("dispersion", help="omega(k) sweep as CSV")
    p.add_argument("--material", required=True)
    p.add_argument("--model", choices=[f.value for f in Flavor],
                   help="override the file's flavor (the characteristic "
                        "length is reinterpreted accordingly)")
    p.add_argument("--family", default="all",
                   choices=["all"] + [f.value for f in ALL_FAMILIES])
    p.add_argument("--kmin", type=float, default=0.0)
    p.add_argument("--kmax", type=float, default=2000.0)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_dispersion)

    p = sub.add_parser("reflect", help="reflection/transmission sweep "
                       "over frequency as CSV")
    p.add_argument("--cauchy", required=True)
    p.add_argument("--micro", required=True)
    p.add_argument("--connection", required=True,
                   choices=[c.value for c in ConnectionType])
    p.add_argument("--incident", default="PS", choices=["P", "S", "PS"])
    p.add_argument("--alpha1", default=None,
                   help="override incident amplitude 1 ('a+bi')")
    p.add_argument("--alpha2", default=None)
    p.add_argument("--alpha3", default=None)
    p.add_argument("--wmin", type=float, default=1e4)
    p.add_argument("--wmax", type=float, default=1e6)
    p.add_argument("--samples", type=int, default=800)
    p.add_argument("--spacing", default="log", choices=["log", "lin"])
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_reflect)

    p = sub.add_parser("bandgap", help="complete band gaps as JSON")
    p.add_argument("--material", required=True)
    p.add_argument("--wmin", type=float, default=1e4)
    p.add_argument("--wmax", type=float, default=1e6)
    p.add_argument("--samples", type=int, default=400)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bandgap)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except MaterialError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_MATERIAL


if __name__ == "__main__":
    sys.exit(main())
