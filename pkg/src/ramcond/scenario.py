"""Scenario files: strict JSON schema, canonicalization and a tiny series grammar.

All rationals travel as strings ("-1/3") so no floats ever enter the exact
pipeline.  Unknown keys are rejected.  The canonical form of a scenario is
what reports echo and what the scenario digest is computed over, so that
re-ingesting an echoed scenario reproduces reports byte for byte.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .conductors import module_from_generators, regular_module, trivial_module
from .errors import InputError
from .groups import make_cyclic, make_from_table, make_product, subgroup
from .ramification import ram_data
from .series import MixedSeries, SeriesRingSpec

__all__ = [
    "Scenario",
    "parse_scenario",
    "load_scenario",
    "scenario_digest",
    "parse_rational",
    "parse_series_expression",
]


def parse_rational(text):
    """Parse an exact rational from its string form."""
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise InputError(f"rationals must be strings, got {text!r}")
    try:
        return Fraction(text.replace("−", "-").strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {text!r}: {exc}") from None


def _require_keys(obj, allowed, required, where):
    if not isinstance(obj, dict):
        raise InputError(f"{where} must be an object")
    unknown = set(obj) - set(allowed)
    if unknown:
        raise InputError(f"{where}: unknown keys {sorted(unknown)}")
    missing = set(required) - set(obj)
    if missing:
        raise InputError(f"{where}: missing keys {sorted(missing)}")


def _parse_group(spec):
    _require_keys(spec, {"cyclic", "product", "table"}, set(), "group")
    if len(spec) != 1:
        raise InputError("group: give exactly one of cyclic | product | table")
    if "cyclic" in spec:
        n = spec["cyclic"]
        if not isinstance(n, int) or n < 1:
            raise InputError("group.cyclic must be a positive integer")
        return make_cyclic(n)
    if "product" in spec:
        factors = spec["product"]
        if not isinstance(factors, list) or len(factors) < 2:
            raise InputError("group.product needs at least two factors")
        grp = _parse_group(factors[0])
        for sub in factors[1:]:
            grp = make_product(grp, _parse_group(sub))
        return grp
    table = spec["table"]
    return make_from_table(table, name="table")


class Scenario:
    """A parsed, validated scenario plus its canonical JSON form."""

    def __init__(self, prime, group, ramdata, modules, weil, series, precision, canonical):
        self.prime = prime
        self.group = group
        self.ramdata = ramdata
        self.modules = modules  # name -> CharModule
        self.weil = weil  # list of (module-on-subgroup, Subgroup, spec-name)
        self.series = series  # list of request dicts
        self.precision = precision
        self.canonical = canonical

    @property
    def degree_cap(self):
        return self.precision.get("degree_cap", 16)

    @property
    def adapt_precision(self):
        return self.precision.get("adapt", 8)


_TOP_KEYS = {"prime", "group", "filtration", "omega", "modules", "weil", "series", "precision"}


def parse_scenario(obj):
    _require_keys(obj, _TOP_KEYS, {"prime", "group", "filtration", "omega"}, "scenario")
    prime = obj["prime"]
    if not isinstance(prime, int):
        raise InputError("prime must be an integer")
    group = _parse_group(obj["group"])

    filtration = obj["filtration"]
    if not isinstance(filtration, list) or not all(
        isinstance(step, list) for step in filtration
    ):
        raise InputError("filtration must be a list of element-id lists")

    omega_spec = obj["omega"]
    omega = None
    if omega_spec is not None:
        _require_keys(omega_spec, {"generator", "exponent", "cosets"}, set(), "omega")
        if "cosets" in omega_spec:
            if set(omega_spec) != {"cosets"}:
                raise InputError("omega: cosets excludes generator/exponent")
            omega = {int(k): int(v) for k, v in omega_spec["cosets"].items()}
        else:
            if set(omega_spec) != {"generator", "exponent"}:
                raise InputError("omega needs both generator and exponent")
            omega = (int(omega_spec["generator"]), int(omega_spec["exponent"]))

    rd = ram_data(group, prime, filtration, omega, name="scenario")

    precision = obj.get("precision", {})
    _require_keys(precision, {"degree_cap", "adapt"}, set(), "precision")
    for key, value in precision.items():
        if not isinstance(value, int) or value < 1:
            raise InputError(f"precision.{key} must be a positive integer")

    modules = {}
    module_specs = obj.get("modules", [])
    if not isinstance(module_specs, list):
        raise InputError("modules must be a list")
    for spec in module_specs:
        name, module = _parse_module(spec, group, prime, "modules[]")
        if name in modules:
            raise InputError(f"duplicate module name {name!r}")
        modules[name] = module

    weil = []
    weil_specs = obj.get("weil", [])
    if not isinstance(weil_specs, list):
        raise InputError("weil must be a list")
    for spec in weil_specs:
        _require_keys(spec, {"module", "subgroup"}, {"module", "subgroup"}, "weil[]")
        sub = subgroup(group, spec["subgroup"])
        hgrp, to_sub, _ = sub.as_group()
        name, module = _parse_module(
            spec["module"], hgrp, prime, "weil[].module", id_map=to_sub
        )
        weil.append((module, sub, name))

    series = obj.get("series", [])
    if not isinstance(series, list):
        raise InputError("series must be a list")
    for req in series:
        _validate_series_request(req)

    canonical = _canonical_form(obj)
    return Scenario(prime, group, rd, modules, weil, series, precision, canonical)


def _parse_module(spec, group, prime, where, id_map=None):
    _require_keys(spec, {"name", "kind", "rank", "matrices"}, {"name", "kind"}, where)
    name = spec["name"]
    kind = spec["kind"]
    if not isinstance(name, str) or not name:
        raise InputError(f"{where}: module name must be a nonempty string")
    if kind == "regular":
        return name, regular_module(group, prime, name=name)
    if kind == "trivial":
        rank = spec.get("rank", 1)
        if not isinstance(rank, int) or rank < 0:
            raise InputError(f"{where}: trivial rank must be a natural number")
        return name, trivial_module(group, prime, rank=rank, name=name)
    if kind == "matrices":
        mats = spec.get("matrices")
        if not isinstance(mats, dict) or not mats:
            raise InputError(f"{where}: matrices must map generator ids to matrices")
        gen_action = {}
        for key, matrix in mats.items():
            gid = int(key)
            if id_map is not None:
                if gid not in id_map:
                    raise InputError(f"{where}: generator {gid} outside the subgroup")
                gid = id_map[gid]
            gen_action[gid] = tuple(
                tuple(parse_rational(x) for x in row) for row in matrix
            )
        module = module_from_generators(name, group, prime, gen_action)
        return name, module
    raise InputError(f"{where}: unknown module kind {kind!r}")


_SERIES_OPS = {"gauss", "wdiv", "endo", "dilate"}


def _validate_series_request(req):
    _require_keys(
        req,
        {"op", "expr", "g", "f", "z", "n", "r", "s", "scalars"},
        {"op"},
        "series[]",
    )
    op = req.get("op")
    if op not in _SERIES_OPS:
        raise InputError(f"series[].op must be one of {sorted(_SERIES_OPS)}")
    if op == "gauss" and "expr" not in req:
        raise InputError("series gauss request needs expr")
    if op == "wdiv" and not {"g", "f"} <= set(req):
        raise InputError("series wdiv request needs g and f")
    if op == "dilate" and not {"expr", "n"} <= set(req):
        raise InputError("series dilate request needs expr and n")
    if op == "endo" and "scalars" not in req:
        raise InputError("series endo request needs scalars")


def _canonical_form(obj):
    """Normalized plain-dict scenario; stable under re-parsing."""
    out = {
        "prime": obj["prime"],
        "group": obj["group"],
        "filtration": [[int(x) for x in step] for step in obj["filtration"]],
        "omega": obj["omega"],
    }
    for key in ("modules", "weil", "series", "precision"):
        if key in obj and obj[key] not in ({}, []):
            out[key] = obj[key]
    return out


def scenario_digest(canonical):
    blob = json.dumps(canonical, sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(blob.encode("utf-8")).hexdigest()


def load_scenario(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read scenario: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"scenario is not valid JSON: {exc}") from None
    return parse_scenario(obj)


# ---------------------------------------------------------------------------
# series expression grammar: integers, p, variables, + - * ^, parentheses


class _Tokens:
    def __init__(self, text):
        self.items = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.items.append(("int", int(text[i:j])))
                i = j
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.items.append(("name", text[i:j]))
                i = j
                continue
            if ch in "+-*^()":
                self.items.append((ch, ch))
                i += 1
                continue
            raise InputError(f"bad character {ch!r} in series expression")
        self.pos = 0

    def peek(self):
        return self.items[self.pos][0] if self.pos < len(self.items) else None

    def next(self):
        item = self.items[self.pos]
        self.pos += 1
        return item


def _collect_names(text):
    names = []
    for kind, value in _Tokens(text).items:
        if kind == "name" and value != "p" and value not in names:
            names.append(value)
    return sorted(names)


def parse_series_expression(text, p, degree_cap=16, ring=None):
    """Evaluate the small series grammar into a MixedSeries.

    Variables whose names start with ``T`` form the power-bounded block;
    everything else is formal.  ``p`` names the base prime inside the
    expression (e.g. ``p^-2*S``).
    """
    if ring is None:
        names = _collect_names(text)
        t_vars = tuple(n for n in names if n.upper().startswith("T"))
        s_vars = tuple(n for n in names if not n.upper().startswith("T"))
        ring = SeriesRingSpec(p, s_vars=s_vars, t_vars=t_vars, degree_cap=degree_cap)
    toks = _Tokens(text)

    def parse_expr():
        node = parse_term()
        while toks.peek() in ("+", "-"):
            op, _ = toks.next()
            rhs = parse_term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def parse_term():
        node = parse_unary()
        while toks.peek() == "*":
            toks.next()
            node = node * parse_unary()
        return node

    def parse_unary():
        if toks.peek() == "-":
            toks.next()
            return -parse_unary()
        return parse_power()

    def parse_power():
        base = parse_atom()
        if toks.peek() != "^":
            return base
        toks.next()
        sign = 1
        if toks.peek() == "-":
            toks.next()
            sign = -1
        kind, value = toks.next()
        if kind != "int":
            raise InputError("exponent must be an integer")
        k = sign * value
        if k >= 0:
            return base**k
        constant = base.constant_term()
        if len(base.coeffs) > (1 if constant else 0):
            raise InputError("negative powers only apply to constants")
        if constant == 0:
            raise InputError("negative power of zero")
        return MixedSeries.const(ring, Fraction(1) / constant) ** (-k)

    def parse_atom():
        kind, value = toks.next()
        if kind == "int":
            return MixedSeries.const(ring, value)
        if kind == "name":
            if value == "p":
                return MixedSeries.const(ring, p)
            return MixedSeries.variable(ring, value)
        if kind == "(":
            node = parse_expr()
            if toks.peek() != ")":
                raise InputError("unbalanced parentheses in series expression")
            toks.next()
            return node
        raise InputError(f"unexpected token {value!r} in series expression")

    try:
        result = parse_expr()
    except IndexError:
        raise InputError("series expression ended unexpectedly") from None
    if toks.peek() is not None:
        raise InputError("trailing input in series expression")
    return result
