"""Canonical text, JSON and TeX encodings of elements, with exact round-trips.

Text grammar, one term per summand, factors joined by ``*``::

    -3/2*th1^-1*e{2,3}*h[1,2]^2*z[0,1]

JSON carries the same data with string fractions so nothing is ever floated.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction

from .fields import GF, QQ, PrimeField
from .params import Truncation
from .ring import Element, Monomial, make_monomial


class ParseError(ValueError):
    def __init__(self, message: str, position: int, token: str):
        super().__init__(f"{message} at position {position}: {token!r}")
        self.position = position
        self.token = token


# -- text ----------------------------------------------------------------


def _coeff_str(c) -> str:
    return str(c)


def _mono_factors(mono: Monomial) -> list[str]:
    parts: list[str] = []
    for l, x in mono.theta:
        parts.append(f"th{l}" if x == 1 else f"th{l}^{x}")
    if mono.e is not None:
        parts.append("e{" + ",".join(str(i) for i in mono.e) + "}")
    for (k, l), x in mono.h:
        parts.append(f"h[{k},{l}]" if x == 1 else f"h[{k},{l}]^{x}")
    for k, l in mono.zeta:
        parts.append(f"z[{k},{l}]")
    return parts


def to_text(e: Element) -> str:
    if e.is_zero():
        return "0"
    chunks: list[str] = []
    for mono, coeff in e.sorted_terms():
        c = coeff if isinstance(coeff, Fraction) else Fraction(coeff)
        negative = c < 0
        mag = -c if negative else c
        factors = _mono_factors(mono)
        if not factors:
            body = _coeff_str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_coeff_str(mag)] + factors)
        if not chunks:
            chunks.append(("-" if negative else "") + body)
        else:
            chunks.append(("- " if negative else "+ ") + body)
    return " ".join(chunks)


_ATOM = re.compile(
    r"""(?P<theta>th(?P<tl>\d+)(\^(?P<te>-?\d+))?$)
      | (?P<e>e\{(?P<ei>[\d,]*)\}$)
      | (?P<h>h\[(?P<hk>\d+),(?P<hl>\d+)\](\^(?P<he>\d+))?$)
      | (?P<z>z\[(?P<zk>\d+),(?P<zl>\d+)\]$)
      | (?P<coeff>-?\d+(/\d+)?$)
    """,
    re.VERBOSE,
)


def _parse_term(term: str, offset: int, params: Truncation, field) -> tuple[Monomial, Fraction]:
    coeff = Fraction(1)
    theta: dict[int, int] = {}
    e: tuple[int, ...] | None = None
    h: dict[tuple[int, int], int] = {}
    zeta: list[tuple[int, int]] = []
    seen_coeff = False
    pos = offset
    for atom in term.split("*"):
        atom = atom.strip()
        m = _ATOM.match(atom)
        if m is None:
            raise ParseError("unrecognized factor", pos, atom)
        if m.group("coeff"):
            if seen_coeff:
                raise ParseError("repeated coefficient", pos, atom)
            seen_coeff = True
            coeff *= Fraction(atom)
        elif m.group("theta"):
            l = int(m.group("tl"))
            x = int(m.group("te") or 1)
            theta[l] = theta.get(l, 0) + x
        elif m.group("e"):
            if e is not None:
                raise ParseError("repeated e factor", pos, atom)
            raw = m.group("ei")
            e = tuple(int(t) for t in raw.split(",") if t) if raw else ()
        elif m.group("h"):
            kl = (int(m.group("hk")), int(m.group("hl")))
            h[kl] = h.get(kl, 0) + int(m.group("he") or 1)
        else:
            pair = (int(m.group("zk")), int(m.group("zl")))
            if pair in zeta:
                raise ParseError("repeated zeta pair", pos, atom)
            zeta.append(pair)
        pos += len(atom) + 1
    return make_monomial(theta, e, h, zeta), coeff


def from_text(text: str, params: Truncation, field=QQ) -> Element:
    """Parse the canonical text format back into an Element."""
    text = text.strip()
    if text == "0" or not text:
        return Element.zero(params, field)
    terms: dict[Monomial, Fraction] = {}
    sign = 1
    pos = 0
    for chunk in re.split(r"\s+([+-])\s+", text):
        if chunk == "+":
            sign = 1
            continue
        if chunk == "-":
            sign = -1
            continue
        term_sign = sign
        if chunk.startswith("-"):
            term_sign = -term_sign
            chunk = chunk[1:].lstrip()
        mono, coeff = _parse_term(chunk, pos, params, field)
        coeff *= term_sign
        prev = terms.get(mono, Fraction(0))
        terms[mono] = prev + coeff
        pos += len(chunk)
    return Element(terms, params, field)


# -- JSON ------------------------------------------------------------------


def _term_obj(mono: Monomial, coeff) -> dict:
    return {
        "coeff": str(coeff),
        "theta": {str(l): x for l, x in mono.theta},
        "e": None if mono.e is None else list(mono.e),
        "h": {f"{k},{l}": x for (k, l), x in mono.h},
        "zeta": [[k, l] for k, l in mono.zeta],
    }


def to_json_obj(e: Element) -> dict:
    obj = {
        "params": {"n": e.params.n, "K": e.params.K, "m": e.params.m},
        "field": e.field.name,
        "terms": [_term_obj(mono, coeff) for mono, coeff in e.sorted_terms()],
    }
    if isinstance(e.field, PrimeField):
        obj["p"] = e.field.p
    return obj


def to_json(e: Element) -> str:
    return json.dumps(to_json_obj(e), separators=(",", ":"))


def from_json_obj(obj: dict) -> Element:
    p = obj["params"]
    params = Truncation(p["n"], p["K"], p["m"])
    field = QQ if obj.get("field", "Q") == "Q" else GF(obj["p"])
    terms: dict[Monomial, Fraction] = {}
    for t in obj.get("terms", []):
        theta = {int(l): x for l, x in t.get("theta", {}).items()}
        e_raw = t.get("e", None)
        e = None if e_raw is None else tuple(e_raw)
        h = {tuple(int(v) for v in kl.split(",")): x for kl, x in t.get("h", {}).items()}
        zeta = [tuple(pair) for pair in t.get("zeta", [])]
        mono = make_monomial(theta, e, h, zeta)
        coeff = Fraction(t["coeff"])
        terms[mono] = terms.get(mono, Fraction(0)) + coeff
    return Element(terms, params, field)


def from_json(text: str) -> Element:
    return from_json_obj(json.loads(text))


# -- TeX -------------------------------------------------------------------


def to_tex(e: Element) -> str:
    """One-way TeX-like rendering mirroring the usual symbol names."""
    if e.is_zero():
        return "0"
    chunks: list[str] = []
    for mono, coeff in e.sorted_terms():
        c = coeff if isinstance(coeff, Fraction) else Fraction(coeff)
        negative = c < 0
        mag = -c if negative else c
        factors: list[str] = []
        for l, x in mono.theta:
            factors.append(f"\\theta_{{{l}}}" + (f"^{{{x}}}" if x != 1 else ""))
        if mono.e is not None:
            inner = ",".join(str(i) for i in mono.e)
            factors.append(f"e_{{\\{{{inner}\\}}}}" if inner else "e_{\\emptyset}")
        for (k, l), x in mono.h:
            factors.append(f"h_{{{k},{l}}}" + (f"^{{{x}}}" if x != 1 else ""))
        for k, l in mono.zeta:
            factors.append(f"\\zeta_{{{k},{l}}}")
        if mag == 1 and factors:
            body = " ".join(factors)
        elif mag.denominator == 1:
            body = " ".join([str(mag)] + factors) if factors else str(mag)
        else:
            frac = f"\\tfrac{{{mag.numerator}}}{{{mag.denominator}}}"
            body = " ".join([frac] + factors)
        if not chunks:
            chunks.append(("-" if negative else "") + body)
        else:
            chunks.append(("- " if negative else "+ ") + body)
    return " ".join(chunks)


def serialize(e: Element, fmt: str = "text") -> str:
    if fmt == "text":
        return to_text(e)
    if fmt == "json":
        return to_json(e)
    if fmt == "tex":
        return to_tex(e)
    raise ValueError(f"unknown format {fmt!r}")
