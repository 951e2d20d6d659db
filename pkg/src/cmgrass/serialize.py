"""JSON round-tripping for every public value type in the toolkit.

Exact scalars keep their rationals as strings ("3/2"); numeric scalars store
floats.  Each composite object carries a "type" tag so :func:`from_json` can
dispatch without outside context.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .cmspace import CMPoint, Quadruple
from .grass import CellPoint, GrPoint, Site
from .loopgroup import GammaJet
from .pdo import MatPDO
from .poly import Poly, RatFun
from .scalar import Scalar, sc

__all__ = ["to_json", "from_json", "dumps", "loads", "save", "load"]


# ---------------------------------------------------------------------------
# scalars and matrices


def _scalar(x) -> dict:
    x = sc(x)
    if x.is_exact:
        return {"mode": "exact", "re": str(x.re), "im": str(x.im)}
    return {"mode": "numeric", "re": x.val.real, "im": x.val.imag}


def _scalar_back(d) -> Scalar:
    if d["mode"] == "exact":
        return Scalar.exact(Fraction(d["re"]), Fraction(d["im"]))
    return Scalar.numeric(complex(d["re"], d["im"]))


def _matrix(m):
    return [[_scalar(e) for e in row] for row in m]


def _matrix_back(m):
    return [[_scalar_back(e) for e in row] for row in m]


def _ratfun(f: RatFun) -> dict:
    return {"num": [_scalar(c) for c in f.num.coeffs],
            "den": [_scalar(c) for c in f.den.coeffs]}


def _ratfun_back(d) -> RatFun:
    return RatFun(Poly([_scalar_back(c) for c in d["num"]]),
                  Poly([_scalar_back(c) for c in d["den"]]))


# ---------------------------------------------------------------------------
# dispatch


def to_json(obj):
    """Encode a toolkit value (or a Scalar) as plain JSON data."""
    if isinstance(obj, Scalar):
        return {"type": "scalar", **_scalar(obj)}
    if isinstance(obj, Quadruple):
        return {"type": "quadruple", "n": obj.n, "r": obj.r,
                "X": _matrix(obj.X), "Y": _matrix(obj.Y),
                "v": _matrix(obj.v), "w": _matrix(obj.w)}
    if isinstance(obj, CMPoint):
        return {"type": "cmpoint", "n": obj.n, "r": obj.r,
                "lambda": [_scalar(x) for x in obj.lam],
                "alpha": [_scalar(x) for x in obj.alpha],
                "vrow": _matrix(obj.vrow), "wcol": _matrix(obj.wcol)}
    if isinstance(obj, GrPoint):
        tag, payload = obj.provenance
        if isinstance(payload, (CMPoint, CellPoint)):
            payload = to_json(payload)
        return {"type": "grpoint", "r": obj.r,
                "sites": [{"lambda": _scalar(s.lam),
                           "pole_order": s.pole_order,
                           "window_top": s.window_top,
                           "conditions": [[_scalar(c) for c in cond]
                                          for cond in s.conditions]}
                          for s in obj.sites],
                "provenance": [tag, payload]}
    if isinstance(obj, CellPoint):
        return {"type": "cellpoint", "A": _matrix(obj.A), "B": _matrix(obj.B)}
    if isinstance(obj, GammaJet):
        return {"type": "gammajet", "r": obj.r,
                "lambdas": [_scalar(x) for x in obj.lams],
                "values": [_matrix(m) for m in obj.values],
                "derivs": [_matrix(m) for m in obj.derivs]}
    if isinstance(obj, MatPDO):
        return {"type": "matpdo", "rows": obj.rows, "cols": obj.cols,
                "var": obj.var, "depth": obj.depth,
                "terms": [{"order": k,
                           "matrix": [[_ratfun(e) for e in row]
                                      for row in obj.terms[k]]}
                          for k in sorted(obj.terms)]}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_json(data):
    """Inverse of :func:`to_json`."""
    t = data.get("type")
    if t == "scalar":
        return _scalar_back(data)
    if t == "quadruple":
        return Quadruple(n=data["n"], r=data["r"],
                         X=_matrix_back(data["X"]), Y=_matrix_back(data["Y"]),
                         v=_matrix_back(data["v"]), w=_matrix_back(data["w"]))
    if t == "cmpoint":
        return CMPoint(n=data["n"], r=data["r"],
                       lam=[_scalar_back(x) for x in data["lambda"]],
                       alpha=[_scalar_back(x) for x in data["alpha"]],
                       vrow=_matrix_back(data["vrow"]),
                       wcol=_matrix_back(data["wcol"]))
    if t == "grpoint":
        tag, payload = data["provenance"]
        if isinstance(payload, dict):
            payload = from_json(payload)
        sites = tuple(Site(lam=_scalar_back(s["lambda"]),
                           pole_order=s["pole_order"],
                           window_top=s["window_top"],
                           conditions=tuple(tuple(_scalar_back(c) for c in cond)
                                            for cond in s["conditions"]))
                      for s in data["sites"])
        return GrPoint(r=data["r"], sites=sites, provenance=(tag, payload))
    if t == "cellpoint":
        return CellPoint(A=_matrix_back(data["A"]), B=_matrix_back(data["B"]))
    if t == "gammajet":
        return GammaJet(r=data["r"],
                        lams=[_scalar_back(x) for x in data["lambdas"]],
                        values=[_matrix_back(m) for m in data["values"]],
                        derivs=[_matrix_back(m) for m in data["derivs"]])
    if t == "matpdo":
        terms = {tm["order"]: [[_ratfun_back(e) for e in row]
                               for row in tm["matrix"]]
                 for tm in data["terms"]}
        return MatPDO(data["rows"], data["cols"], terms,
                      depth=data["depth"], var=data["var"])
    raise ValueError(f"unknown type tag {t!r}")


def dumps(obj, **kw) -> str:
    return json.dumps(to_json(obj), **kw)


def loads(s: str):
    return from_json(json.loads(s))


def save(obj, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_json(obj), fh, indent=2)


def load(path):
    with open(path, encoding="utf-8") as fh:
        return from_json(json.load(fh))
