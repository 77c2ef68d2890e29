"""Material parameter sets for the three continuum models.

Three models are supported:

* classical Cauchy elasticity (``CauchyMaterial``),
* the relaxed micromorphic continuum, whose curvature energy is built on
  Curl P with a characteristic length ``L_c``,
* the standard (Mindlin) micromorphic continuum, built on the full
  gradient of P with a characteristic length ``L_g``,
* the internal-variable model, the degenerate limit of the relaxed model
  with zero characteristic length (no spatial derivatives of P at all).

Units are SI throughout.  The micro-inertia density ``eta`` carries kg/m
(so that ``eta * |P_t|^2`` is an energy density, P being dimensionless).

Material files are JSON objects.  A micromorphic file uses exactly the keys
``{rho, eta, mu_e, lambda_e, mu_c, mu_micro, lambda_micro, char_length,
flavor}``; a Cauchy file uses exactly ``{rho, lambda_macro, mu_macro}``.
Unknown keys are rejected.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Union


class MaterialError(ValueError):
    """Base class for material validation failures."""


class NonPositiveDefinite(MaterialError):
    """An inequality required for positive-definite strain energy fails."""

    def __init__(self, constraint: str, value: float):
        self.constraint = constraint
        self.value = value
        super().__init__(f"constraint violated: {constraint} (got {value!r})")


class DegenerateModel(MaterialError):
    """mu_c = 0 together with char_length = 0.

    In that corner the skew-symmetric part of the micro-distortion obeys
    skew(P)_tt = 0 and cannot be controlled; the model is rejected.
    """


class WrongFlavor(MaterialError):
    """A flavor/char_length combination that contradicts the model."""


class Flavor(str, Enum):
    """Which micromorphic model the parameter set describes."""

    RELAXED = "relaxed"
    MINDLIN = "mindlin"
    INTERNAL_VARIABLE = "internal"


@dataclass(frozen=True)
class CauchyMaterial:
    """Isotropic linear-elastic Cauchy material.

    Attributes:
        rho: mass density [kg/m^3]
        lambda_macro: first Lame parameter [Pa]
        mu_macro: shear modulus [Pa]
    """

    rho: float
    lambda_macro: float
    mu_macro: float


@dataclass(frozen=True)
class MicromorphicMaterial:
    """Parameter bundle for a micromorphic (relaxed/Mindlin/internal) medium.

    Attributes:
        rho: macroscopic mass density [kg/m^3]
        eta: micro-inertia density [kg/m]
        mu_e, lambda_e: elastic (relative-deformation) moduli [Pa]
        mu_c: Cosserat couple modulus [Pa]
        mu_micro, lambda_micro: microstructure moduli [Pa]
        char_length: characteristic length [m]; interpreted as L_c for the
            relaxed flavor and L_g for the Mindlin flavor.  Must be 0 exactly
            for (and only for) the internal-variable flavor.
        flavor: which model the parameters describe.
    """

    rho: float
    eta: float
    mu_e: float
    lambda_e: float
    mu_c: float
    mu_micro: float
    lambda_micro: float
    char_length: float
    flavor: Flavor = Flavor.RELAXED


Material = Union[CauchyMaterial, MicromorphicMaterial]


@dataclass(frozen=True)
class CharacteristicQuantities:
    """Closed-form cut-off frequencies and asymptotic slopes.

    Two inconsistent closed forms for the transverse horizontal asymptote
    circulate (sqrt(mu_micro/eta) and sqrt(2 mu_micro/eta)); both are
    exposed and neither is taken as authoritative.  The unambiguous value
    is the numerically computed asymptote (see spectral.asymptotes_numeric).

    ``c_m`` is the micro-inertia speed sqrt(mu_e * L^2 / eta); for the
    Mindlin flavor the same formula with L_g applies (often written c_g).
    """

    omega_s: float
    omega_r: float
    omega_p: float
    omega_l: float
    omega_t_sec623: float
    omega_t_eq56: float
    c_m: float
    c_p: float
    c_s: float


def _require(condition: bool, constraint: str, value: float) -> None:
    if not condition:
        raise NonPositiveDefinite(constraint, value)


def validate(material: Material) -> Material:
    """Check every admissibility invariant; return the material unchanged.

    Raises:
        NonPositiveDefinite: an inequality fails (the message names it).
        DegenerateModel: mu_c = 0 together with char_length = 0.
        WrongFlavor: flavor and char_length contradict each other.
    """
    if isinstance(material, CauchyMaterial):
        m = material
        _require(math.isfinite(m.rho) and m.rho > 0, "rho > 0", m.rho)
        _require(math.isfinite(m.mu_macro) and m.mu_macro >= 0,
                 "mu_macro >= 0", m.mu_macro)
        _require(math.isfinite(m.lambda_macro)
                 and m.lambda_macro + 2 * m.mu_macro >= 0,
                 "lambda_macro + 2*mu_macro >= 0", m.lambda_macro)
        return material

    if not isinstance(material, MicromorphicMaterial):
        raise TypeError(f"not a material: {material!r}")

    m = material
    for name in ("rho", "eta", "mu_e", "lambda_e", "mu_c", "mu_micro",
                 "lambda_micro", "char_length"):
        if not math.isfinite(getattr(m, name)):
            raise NonPositiveDefinite(f"{name} finite", getattr(m, name))
    _require(m.rho > 0, "rho > 0", m.rho)
    _require(m.eta > 0, "eta > 0", m.eta)
    _require(m.mu_e > 0, "mu_e > 0", m.mu_e)
    _require(m.mu_micro > 0, "mu_micro > 0", m.mu_micro)
    _require(m.mu_c >= 0, "mu_c >= 0", m.mu_c)
    _require(m.lambda_e + 2 * m.mu_e > 0, "lambda_e + 2*mu_e > 0", m.lambda_e)
    _require(m.lambda_micro + 2 * m.mu_micro > 0,
             "lambda_micro + 2*mu_micro > 0", m.lambda_micro)
    _require(m.char_length >= 0, "char_length >= 0", m.char_length)
    if m.mu_c == 0 and m.char_length == 0:
        raise DegenerateModel(
            "mu_c = 0 and char_length = 0: the skew part of the "
            "micro-distortion is uncontrolled; rejected as degenerate")
    if (m.char_length == 0) != (m.flavor is Flavor.INTERNAL_VARIABLE):
        raise WrongFlavor(
            f"flavor {m.flavor.value!r} with char_length {m.char_length!r}: "
            "the internal-variable flavor requires char_length = 0 and "
            "vice versa")
    return material


def characteristic_quantities(
        material: MicromorphicMaterial) -> CharacteristicQuantities:
    """Evaluate every closed-form characteristic frequency and speed."""
    m = validate(material)
    assert isinstance(m, MicromorphicMaterial)
    eta, rho = m.eta, m.rho
    return CharacteristicQuantities(
        omega_s=math.sqrt(2 * (m.mu_e + m.mu_micro) / eta),
        omega_r=math.sqrt(2 * m.mu_c / eta),
        omega_p=math.sqrt(((3 * m.lambda_e + 2 * m.mu_e)
                           + (3 * m.lambda_micro + 2 * m.mu_micro)) / eta),
        omega_l=math.sqrt((m.lambda_micro + 2 * m.mu_micro) / eta),
        omega_t_sec623=math.sqrt(m.mu_micro / eta),
        omega_t_eq56=math.sqrt(2 * m.mu_micro / eta),
        c_m=math.sqrt(m.mu_e * m.char_length**2 / eta),
        c_p=math.sqrt((m.lambda_e + 2 * m.mu_e) / rho),
        c_s=math.sqrt((m.mu_e + m.mu_c) / rho),
    )


def cauchy_speeds(material: CauchyMaterial) -> tuple[float, float]:
    """Longitudinal and transverse bulk speeds (c_l, c_t)."""
    m = validate(material)
    assert isinstance(m, CauchyMaterial)
    c_l = math.sqrt((m.lambda_macro + 2 * m.mu_macro) / m.rho)
    c_t = math.sqrt(m.mu_macro / m.rho)
    return c_l, c_t


def internal_variable_asymptotes(
        material: MicromorphicMaterial) -> tuple[float, float, float, float]:
    """Horizontal asymptotes of the zero-length (internal variable) model.

    Returns (omega_l1, omega_l2, omega_t1, omega_t2), each pair sorted
    descending; all four are real and positive for any admissible material.

    Raises:
        WrongFlavor: the material has a nonzero characteristic length.
    """
    m = validate(material)
    assert isinstance(m, MicromorphicMaterial)
    if m.char_length != 0 or m.flavor is not Flavor.INTERNAL_VARIABLE:
        raise WrongFlavor("asymptotes of the zero-length model requested "
                          f"for flavor {m.flavor.value!r} with "
                          f"char_length {m.char_length!r}")
    le, lm = m.lambda_e, m.lambda_micro
    me, mm, mc = m.mu_e, m.mu_micro, m.mu_c
    eta = m.eta

    a = 6 * lm * me + 4 * me * (me + 2 * mm) + le * (3 * lm + 6 * me + 4 * mm)
    b = 8 * (le + 2 * me) * (
        le * (3 * lm * (me + mm) + 2 * mm * (3 * me + mm))
        + 2 * me * (2 * mm * (me + mm) + lm * (me + 3 * mm)))
    if b < 0:
        # Happens only outside the fully positive-definite energy region
        # (a bulk modulus 3*lambda + 2*mu is negative); one asymptote then
        # sits at a negative omega^2 and the medium is unstable.
        raise NonPositiveDefinite(
            "real asymptotes need a positive-definite energy "
            "(3*lambda + 2*mu > 0 for both scales)", b)
    disc_l = max(a * a - b, 0.0)
    denom_l = 2 * eta * (le + 2 * me)
    big_l = a + math.sqrt(disc_l)
    omega_l1 = math.sqrt(big_l / denom_l)
    # Small root through the root product, immune to cancellation.
    omega_l2 = math.sqrt(b / (denom_l * big_l))

    q = 2 * mc * me + (mc + me) * mm
    prod_t = 4 * mc * me * mm * (mc + me)
    disc_t = max(q * q - prod_t, 0.0)
    denom_t = eta * (mc + me)
    big_t = q + math.sqrt(disc_t)
    omega_t1 = math.sqrt(big_t / denom_t)
    omega_t2 = math.sqrt(prod_t / (denom_t * big_t))

    return omega_l1, omega_l2, omega_t1, omega_t2


_CAUCHY_KEYS = {"rho", "lambda_macro", "mu_macro"}
_MICRO_KEYS = {"rho", "eta", "mu_e", "lambda_e", "mu_c", "mu_micro",
               "lambda_micro", "char_length", "flavor"}


def material_from_dict(data: dict) -> Material:
    """Build and validate a material from a parsed JSON object.

    The key set decides the material type; unknown keys are rejected.
    """
    if not isinstance(data, dict):
        raise MaterialError(f"material file must hold a JSON object, "
                            f"got {type(data).__name__}")
    keys = set(data)
    if keys == _CAUCHY_KEYS:
        mat: Material = CauchyMaterial(
            rho=float(data["rho"]),
            lambda_macro=float(data["lambda_macro"]),
            mu_macro=float(data["mu_macro"]))
    elif keys == _MICRO_KEYS:
        try:
            flavor = Flavor(data["flavor"])
        except ValueError as exc:
            raise MaterialError(
                f"unknown flavor {data['flavor']!r}; expected one of "
                f"{[f.value for f in Flavor]}") from exc
        mat = MicromorphicMaterial(
            rho=float(data["rho"]),
            eta=float(data["eta"]),
            mu_e=float(data["mu_e"]),
            lambda_e=float(data["lambda_e"]),
            mu_c=float(data["mu_c"]),
            mu_micro=float(data["mu_micro"]),
            lambda_micro=float(data["lambda_micro"]),
            char_length=float(data["char_length"]),
            flavor=flavor)
    else:
        missing_c, extra_c = _CAUCHY_KEYS - keys, keys - _CAUCHY_KEYS
        missing_m, extra_m = _MICRO_KEYS - keys, keys - _MICRO_KEYS
        if len(missing_m) + len(extra_m) <= len(missing_c) + len(extra_c):
            detail = f"missing {sorted(missing_m)}, unknown {sorted(extra_m)}"
        else:
            detail = f"missing {sorted(missing_c)}, unknown {sorted(extra_c)}"
        raise MaterialError(f"unrecognized material key set: {detail}")
    return validate(mat)


def load_material(path: str | Path) -> Material:
    """Load and validate a material JSON file."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return material_from_dict(data)
