"""Structured-text (JSON) round-trip for expressions and scheme specs.

Floats survive exactly: JSON carries the shortest repr that round-trips
binary64, and complex coefficients are stored as [re, im] pairs.
"""
from __future__ import annotations

import json

import numpy as np

from .exprs import FunctionExpr, GaussTerm
from .haar import HaarSpec
from .cocycles import Cocycle2
from .models import PoissonModel

__all__ = [
    "expr_to_dict",
    "expr_from_dict",
    "dump_expr",
    "load_expr",
    "haar_to_dict",
    "haar_from_dict",
    "cocycle_to_dict",
    "cocycle_from_dict",
    "model_to_dict",
    "model_from_dict",
]


def _c(v: complex):
    return [float(np.real(v)), float(np.imag(v))]


def _uc(pair):
    return complex(pair[0], pair[1])


def expr_to_dict(f: FunctionExpr) -> dict:
    if f.kind == "torus-harmonic":
        return {
            "kind": f.kind,
            "coeffs": [[int(m[0]), int(m[1])] + _c(c) for m, c in f.modes],
        }
    terms = []
    for t in f.terms:
        terms.append(
            {
                "coeffs": [[list(k)] + [_c(v)] for k, v in t.poly],
                "centers": list(t.center),
                "widths": None if t.width is None else [list(r) for r in t.width],
                "freqs": None if t.freq is None else list(t.freq),
            }
        )
    return {"kind": f.kind, "dim": f.dim, "terms": terms}


def expr_from_dict(d: dict) -> FunctionExpr:
    kind = d["kind"]
    if kind == "torus-harmonic":
        modes = tuple(((int(row[0]), int(row[1])), complex(row[2], row[3])) for row in d["coeffs"])
        return FunctionExpr(kind, 2, modes=modes)
    terms = []
    for t in d["terms"]:
        poly = {tuple(int(i) for i in k): _uc(v) for k, v in t["coeffs"]}
        terms.append(
            GaussTerm.make(
                poly,
                t["centers"],
                None if t["widths"] is None else t["widths"],
                t["freqs"],
            )
        )
    return FunctionExpr(kind, d["dim"], terms=tuple(terms))


def dump_expr(f: FunctionExpr, path) -> None:
    with open(path, "w") as fh:
        json.dump(expr_to_dict(f), fh, indent=1)
        fh.write("\n")


def load_expr(path) -> FunctionExpr:
    with open(path) as fh:
        return expr_from_dict(json.load(fh))


def haar_to_dict(spec: HaarSpec) -> dict:
    return {
        "kind": "haar",
        "scheme": spec.scheme,
        "counts": list(spec.counts),
        "n_points": spec.n_points,
        "seed": spec.seed,
    }


def haar_from_dict(d: dict) -> HaarSpec:
    return HaarSpec(d["scheme"], tuple(d["counts"]), d["n_points"], d["seed"])


def model_to_dict(model: PoissonModel) -> dict:
    return {
        "kind": "poisson-model",
        "variant": model.variant,
        "dim": model.dim,
        "hbar_convention": model.hbar_convention,
        "commutator_factor": model.commutator_factor,
        "bivector": None if model.bivector is None else [list(r) for r in model.bivector],
    }


def model_from_dict(d: dict) -> PoissonModel:
    return PoissonModel(
        d["variant"],
        d["dim"],
        d["hbar_convention"],
        d["commutator_factor"],
        None if d["bivector"] is None else tuple(map(tuple, d["bivector"])),
    )


def cocycle_to_dict(c: Cocycle2) -> dict:
    if c.form in ("antisymmetrized", "raw"):
        raise ValueError("only catalog cocycle forms serialize")
    return {
        "kind": "cocycle2",
        "form": c.form,
        "params": list(c.params),
        "antisymmetric": c.antisymmetric,
        "model": model_to_dict(c.model),
    }


def cocycle_from_dict(d: dict) -> Cocycle2:
    return Cocycle2(
        model_from_dict(d["model"]),
        d["form"],
        tuple(d["params"]),
        antisymmetric=d["antisymmetric"],
    )
