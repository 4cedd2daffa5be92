"""Built-in example manifolds and the JSON spec-file format.

Complex scalars are serialized as [re, im] pairs; parsing rejects unknown
keys so that typos in hand-written spec files fail loudly.
"""

import json

from .errors import ParseError, UnknownName, ValidationError
from .potential import PotentialSpec, flat_metric, homogeneity_residual

# Fixed semi-simple sample point for the 3-dimensional A3 entry, used by
# reports that need a reproducible published point.
A3_POINT = (0.3 + 0.0j, 0.7 + 0.0j, 1.1 + 0.0j)


def _entry(dim, monomials, exponentials, degrees, shifts, d, d_F, normal_form=True):
    return PotentialSpec(
        dim=dim,
        monomials=tuple((complex(c), tuple(p)) for c, p in monomials),
        exponentials=tuple(
            (complex(c), tuple(p), tuple(complex(x) for x in w))
            for c, p, w in exponentials
        ),
        degrees=tuple(float(x) for x in degrees),
        shifts=tuple(float(x) for x in shifts),
        d=float(d),
        d_F=float(d_F),
        normal_form=normal_form,
    )


_CATALOG = {
    # F = (1/2) t1^2 t2: multiplication is everywhere unipotent (never
    # semi-simple); used for metric normalization and negative controls.
    "trivial2": _entry(2, [(0.5, (2, 1))], [], (1.0, 1.0), (0.0, 0.0), 0.0, 3.0),
    # F = (1/2) t1^2 t2 + t2^3/6: degree-three potential with constant
    # structure tensors; the semi-simple trivial (flat) example.
    "cubic2": _entry(
        2, [(0.5, (2, 1)), (1.0 / 6.0, (0, 3))], [], (1.0, 1.0), (0.0, 0.0), 0.0, 3.0
    ),
    # F = (1/2) t1^2 t2 + t2^4.
    "quartic2": _entry(
        2,
        [(0.5, (2, 1)), (1.0, (0, 4))],
        [],
        (1.0, 2.0 / 3.0),
        (0.0, 0.0),
        1.0 / 3.0,
        8.0 / 3.0,
    ),
    # F = (1/2) t1^2 t2 + exp(t2): quantum cohomology of the projective line.
    "p1": _entry(
        2, [(0.5, (2, 1))], [(1.0, (0, 0), (0.0, 1.0))], (1.0, 0.0), (0.0, 2.0), 1.0, 2.0
    ),
    # F = (1/2) t1^2 t3 + (1/2) t1 t2^2 + (1/4) t2^2 t3^2 + (1/60) t3^5.
    "a3_3d": _entry(
        3,
        [(0.5, (2, 0, 1)), (0.5, (1, 2, 0)), (0.25, (0, 2, 2)), (1.0 / 60.0, (0, 0, 5))],
        [],
        (1.0, 0.75, 0.5),
        (0.0, 0.0, 0.0),
        0.5,
        2.5,
    ),
    # a3_3d with the quintic coefficient perturbed to 1/59: homogeneous but
    # breaks associativity; negative control for the WDVV checks.
    "broken_wdvv": _entry(
        3,
        [(0.5, (2, 0, 1)), (0.5, (1, 2, 0)), (0.25, (0, 2, 2)), (1.0 / 59.0, (0, 0, 5))],
        [],
        (1.0, 0.75, 0.5),
        (0.0, 0.0, 0.0),
        0.5,
        2.5,
    ),
    # F = (1/2) t1^2 t3 + (1/2) t1 t2^2 + t2^4/24: associative but nowhere
    # semi-simple; used only for algebra-level checks.
    "m3_nilpotent": _entry(
        3,
        [(0.5, (2, 0, 1)), (0.5, (1, 2, 0)), (1.0 / 24.0, (0, 4, 0))],
        [],
        (1.0, 0.5, 0.0),
        (0.0, 0.0, 0.0),
        1.0,
        2.0,
    ),
}

CATALOG_NAMES = tuple(sorted(_CATALOG))

# Catalog entries that are semi-simple on an open dense set.
SEMISIMPLE_NAMES = ("cubic2", "quartic2", "p1", "a3_3d")


def catalog(name: str) -> PotentialSpec:
    try:
        return _CATALOG[name]
    except KeyError:
        raise UnknownName(f"no catalog entry {name!r}; known: {', '.join(CATALOG_NAMES)}")


def _c(z):
    return [float(z.real), float(z.imag)]


def spec_to_dict(spec: PotentialSpec) -> dict:
    return {
        "dim": spec.dim,
        "monomials": [
            {"coeff": _c(complex(c)), "powers": list(p)} for c, p in spec.monomials
        ],
        "exponentials": [
            {
                "coeff": _c(complex(c)),
                "powers": list(p),
                "linear_form": [_c(complex(x)) for x in w],
            }
            for c, p, w in spec.exponentials
        ],
        "euler": {
            "degrees": list(spec.degrees),
            "shifts": list(spec.shifts),
            "d": spec.d,
            "d_F": spec.d_F,
        },
        "normal_form": spec.normal_form,
    }


def _require_keys(obj, allowed, where):
    unknown = set(obj) - set(allowed)
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)} in {where}")
    missing = set(allowed) - set(obj)
    if missing:
        raise ParseError(f"missing keys {sorted(missing)} in {where}")


def _parse_c(pair, where):
    if not (isinstance(pair, list) and len(pair) == 2):
        raise ParseError(f"expected [re, im] pair in {where}, got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def spec_from_dict(doc: dict) -> PotentialSpec:
    _require_keys(doc, ("dim", "monomials", "exponentials", "euler", "normal_form"), "spec")
    _require_keys(doc["euler"], ("degrees", "shifts", "d", "d_F"), "euler")
    monomials = []
    for mono in doc["monomials"]:
        _require_keys(mono, ("coeff", "powers"), "monomial")
        monomials.append((_parse_c(mono["coeff"], "monomial"), tuple(int(p) for p in mono["powers"])))
    exponentials = []
    for term in doc["exponentials"]:
        _require_keys(term, ("coeff", "powers", "linear_form"), "exponential")
        exponentials.append(
            (
                _parse_c(term["coeff"], "exponential"),
                tuple(int(p) for p in term["powers"]),
                tuple(_parse_c(x, "linear_form") for x in term["linear_form"]),
            )
        )
    euler = doc["euler"]
    return PotentialSpec(
        dim=int(doc["dim"]),
        monomials=tuple(monomials),
        exponentials=tuple(exponentials),
        degrees=tuple(float(x) for x in euler["degrees"]),
        shifts=tuple(float(x) for x in euler["shifts"]),
        d=float(euler["d"]),
        d_F=float(euler["d_F"]),
        normal_form=bool(doc["normal_form"]),
    )


_HOMOGENEITY_SPOT = 1e-8


def load_spec(path) -> PotentialSpec:
    """Read, parse, and validate a spec file.

    One-time consistency checks run here: the metric C_1ij must be
    constant and nondegenerate, and the declared Euler data must pass a
    homogeneity spot-check at two generic points.
    """
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read spec file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("spec file must contain a JSON object")
    spec = spec_from_dict(doc)
    flat_metric(spec)  # raises on non-constant or degenerate metric
    for t in ((0.31 + 0.12j,) * spec.dim, (-0.27 + 0.41j,) * spec.dim):
        if homogeneity_residual(spec, t) > _HOMOGENEITY_SPOT:
            raise ValidationError("declared Euler data fails the homogeneity spot-check")
    return spec


def write_spec(spec: PotentialSpec, path):
    with open(path, "w") as fh:
        json.dump(spec_to_dict(spec), fh, indent=2, sort_keys=True)
        fh.write("\n")
