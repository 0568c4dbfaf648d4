"""JSON artifact formats.

Everything in the trust path round-trips bit-exactly: rationals as
canonical "a/b+c/d*i" strings, floats as hexadecimal float strings.  No
decimal float formatting appears anywhere.
"""

from __future__ import annotations

import json

from .certify import CertifiedBox, DoubleZeroCertificate
from .exact import GaussianRational, SparsePoly
from .intervals import ComplexBox, ComplexInterval, RealInterval
from .problems import FanoType
from .systems import ChartPoint, FormSystem, SquareSystem, TangentVector

__all__ = [
    "save_json",
    "load_json",
    "fano_type_to_json",
    "fano_type_from_json",
    "form_system_to_json",
    "form_system_from_json",
    "chart_point_to_json",
    "chart_point_from_json",
    "tangent_vector_to_json",
    "tangent_vector_from_json",
    "square_system_to_json",
    "square_system_from_json",
    "points_to_json",
    "points_from_json",
    "double_zero_to_json",
    "double_zero_from_json",
    "certified_box_to_json",
    "certified_box_from_json",
]


def save_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")


def load_json(path):
    with open(path) as fh:
        return json.load(fh)


# -- exact data -------------------------------------------------------


def fano_type_to_json(t: FanoType):
    return {"r": t.r, "n": t.n, "degrees": list(t.degrees)}


def fano_type_from_json(d) -> FanoType:
    return FanoType(d["r"], d["n"], tuple(d["degrees"]))


def form_system_to_json(F: FormSystem):
    return {
        "type": fano_type_to_json(F.fano_type),
        "forms": [f.canonical_str() for f in F.forms],
    }


def form_system_from_json(d) -> FormSystem:
    t = fano_type_from_json(d["type"])
    forms = tuple(SparsePoly.from_string(s, t.n + 1) for s in d["forms"])
    return FormSystem(t, forms)


def _gq_list_to_json(coords):
    return [str(c) for c in coords]


def _gq_list_from_json(items):
    return tuple(GaussianRational.from_string(s) for s in items)


def chart_point_to_json(x: ChartPoint):
    return {"coords": _gq_list_to_json(x.coords)}


def chart_point_from_json(d) -> ChartPoint:
    return ChartPoint(_gq_list_from_json(d["coords"]))


def tangent_vector_to_json(v: TangentVector):
    return {"coords": _gq_list_to_json(v.coords)}


def tangent_vector_from_json(d) -> TangentVector:
    return TangentVector(_gq_list_from_json(d["coords"]))


def square_system_to_json(G: SquareSystem):
    out = {
        "num_vars": G.num_vars,
        "polys": [g.canonical_str() for g in G.polys],
    }
    if G.provenance is not None:
        out["provenance"] = form_system_to_json(G.provenance)
    return out


def square_system_from_json(d) -> SquareSystem:
    prov = None
    if "provenance" in d:
        prov = form_system_from_json(d["provenance"])
    polys = tuple(SparsePoly.from_string(s, d["num_vars"]) for s in d["polys"])
    return SquareSystem(d["num_vars"], polys, prov)


# -- floating data ----------------------------------------------------


def _cplx_to_json(z):
    z = complex(z)
    return [float.hex(z.real), float.hex(z.imag)]


def _cplx_from_json(pair):
    return complex(float.fromhex(pair[0]), float.fromhex(pair[1]))


def points_to_json(points):
    """A list of complex vectors as hex-float pairs."""
    return [[_cplx_to_json(z) for z in p] for p in points]


def points_from_json(items):
    import numpy as np

    return [
        np.array([_cplx_from_json(pair) for pair in p], dtype=complex)
        for p in items
    ]


def double_zero_to_json(dz: DoubleZeroCertificate):
    return {
        "point": _gq_list_to_json(dz.point.coords),
        "kernel_vector": _gq_list_to_json(dz.kernel_vector.coords),
        "zero_value": dz.zero_value,
        "kernel_dimension_one": dz.kernel_dimension_one,
        "hessian_escape": dz.hessian_escape,
    }


def double_zero_from_json(d) -> DoubleZeroCertificate:
    return DoubleZeroCertificate(
        ChartPoint(_gq_list_from_json(d["point"])),
        TangentVector(_gq_list_from_json(d["kernel_vector"])),
        d["zero_value"],
        d["kernel_dimension_one"],
        d["hessian_escape"],
    )


def _interval_to_json(c: ComplexInterval):
    return [
        float.hex(c.re.lo),
        float.hex(c.re.hi),
        float.hex(c.im.lo),
        float.hex(c.im.hi),
    ]


def _interval_from_json(quad):
    return ComplexInterval(
        RealInterval(float.fromhex(quad[0]), float.fromhex(quad[1])),
        RealInterval(float.fromhex(quad[2]), float.fromhex(quad[3])),
    )


def certified_box_to_json(cb: CertifiedBox):
    """Self-contained Krawczyk witness: the box plus the (x, Y) needed to
    re-run the containment check from scratch."""
    return {
        "box": [_interval_to_json(c) for c in cb.box.coords],
        "x": [_cplx_to_json(z) for z in cb.x],
        "Y": [[_cplx_to_json(z) for z in row] for row in cb.Y],
    }


def certified_box_from_json(d) -> CertifiedBox:
    box = ComplexBox([_interval_from_json(q) for q in d["box"]])
    x = tuple(_cplx_from_json(p) for p in d["x"])
    Y = tuple(tuple(_cplx_from_json(p) for p in row) for row in d["Y"])
    return CertifiedBox(box, x, Y)
