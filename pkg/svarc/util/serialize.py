"""
File formats for categories, functors and natural systems, DOT export and
JSON-ready report dictionaries.

category:  {"name", "objects": [...], "morphisms": [{"id", "dom", "cod"}],
            "identities": {object: morphism}, "compose": [[g, f, g o f], ...]}
functor:   {"source": <category file>, "target": <category file>,
            "obj_map": {...}, "mor_map": {...}}   (paths relative to the functor file)
system:    {"groups": {morphism: {"rank": r, "torsion": [d1, ...]}}, "default": {...},
            "push": [{"along": a, "at": l, "matrix": [[...]]}], "pull": [...]}
"""

import json
import os

from ..errors import FormatError, SvarcError
from ..model.abelian import AbGroup, AbHom, parse_group
from ..model.category import subcategory_generated_by, validate_category, validate_functor
from ..model.factorization import constant_system, validate_natural_system


def _load_json(path):
    try:
        with open(path, "r") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise FormatError(f"cannot read {path}: {e}") from e


def category_from_dict(raw):
    try:
        raw = dict(raw)
        raw["identities"] = raw.get("identities") or {x: f"id_{x}" for x in raw["objects"]}
        ids = {m["id"] if isinstance(m, dict) else m[0] for m in raw["morphisms"]}
        # identities may be left out of the morphism list
        extra = [
            {"id": i, "dom": x, "cod": x} for x, i in raw["identities"].items() if i not in ids
        ]
        raw["morphisms"] = extra + list(raw["morphisms"])
        return validate_category(raw)
    except (KeyError, TypeError, AttributeError) as e:
        raise FormatError(f"malformed category data: {e}") from e


def read_category(path):
    return category_from_dict(_load_json(path))


def category_to_dict(c):
    return {
        "name": c.name,
        "objects": [str(x) for x in c.objects],
        "morphisms": [{"id": str(m), "dom": str(c.dom[m]), "cod": str(c.cod[m])} for m in c.morphisms],
        "identities": {str(x): str(c.identity[x]) for x in c.objects},
        "compose": [
            [str(g), str(f), str(c.table[(g, f)])]
            for g, f in c.composable_pairs()
            if not (c.is_identity(g) or c.is_identity(f))
        ],
    }


def read_functor(path):
    raw = _load_json(path)
    base = os.path.dirname(os.path.abspath(path))
    try:
        source = read_category(os.path.join(base, raw["source"]))
        target = read_category(os.path.join(base, raw["target"]))
        return validate_functor(source, target, raw["obj_map"], raw["mor_map"])
    except KeyError as e:
        raise FormatError(f"functor file {path} lacks {e}") from e


def group_from_dict(raw):
    try:
        return AbGroup.of(int(raw.get("rank", 0)), [int(d) for d in raw.get("torsion", [])])
    except (TypeError, ValueError, AttributeError) as e:
        if isinstance(e, SvarcError):
            raise
        raise FormatError(f"malformed group {raw!r}") from e


def group_to_dict(group):
    return {"rank": group.free_rank, "torsion": list(group.torsion)}


def system_from_dict(raw, c):
    default = raw.get("default")
    groups = raw.get("groups", {})
    value = {}
    for m in c.morphisms:
        if m in groups:
            value[m] = group_from_dict(groups[m])
        elif default is not None:
            value[m] = group_from_dict(default)
        else:
            raise FormatError(f"no group for morphism {m!r} and no default")

    def maps(entries, where_key, composite):
        out = {}
        for entry in entries:
            try:
                a, lam = entry[where_key], entry["at"]
                target = value[composite(a, lam)]
                out[(a, lam)] = AbHom(value[lam], target, entry["matrix"])
            except KeyError as e:
                raise FormatError(f"malformed structure map {entry!r}: {e}") from e
        return out

    push = maps(raw.get("push", []), "along", lambda a, lam: c.compose(a, lam))
    pull = maps(raw.get("pull", []), "along", lambda b, lam: c.compose(lam, b))
    return validate_natural_system(c, value, push, pull, raw.get("name", ""))


def parse_group_spec(text):
    """'Z', 'Z/m' or a normal form such as 'Z^2 + Z/2'."""
    try:
        return parse_group(text)
    except ValueError as e:
        raise FormatError(f"unknown coefficient group {text!r}: {e}") from e


def read_system(spec, c):
    """A system file, or 'constant:<group>' such as 'constant:Z/2'."""
    if spec.startswith("constant:"):
        return constant_system(c, parse_group_spec(spec[len("constant:"):]))
    return system_from_dict(_load_json(spec), c)


def parse_subcategory(text, c):
    """Comma separated object and morphism ids; the generated subcategory."""
    names = [t.strip() for t in text.split(",") if t.strip()]
    objects = [n for n in names if n in c.object_index]
    morphisms = [n for n in names if n in c.morphism_index]
    unknown = set(names) - set(objects) - set(morphisms)
    if unknown:
        raise FormatError(f"unknown ids {sorted(unknown)} in subcategory {text!r}")
    return subcategory_generated_by(c, morphisms, objects)


def to_dot(c):
    lines = [f'digraph "{c.name or "C"}" {{']
    for x in c.objects:
        lines.append(f'  "{x}";')
    for m in c.non_identity:
        lines.append(f'  "{c.dom[m]}" -> "{c.cod[m]}" [label="{m}"];')
    lines.append("}")
    return "\n".join(lines)


def _plain(v):
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if hasattr(v, "item"):
        return v.item()
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    return str(v)


def cohomology_report(H):
    return {
        "degree": H.degree,
        "group": str(H.group),
        "invariants": group_to_dict(H.group),
        "generators": [[int(v) for v in g.representative] for g in H.generators],
        "basis": [str(ch) for ch in H.complex.group(H.degree).basis],
    }


def cup_length_report(result):
    return {"cup_length": result.value, "capped": result.capped}


def fibration_report(report):
    return {
        "fibration": report.is_fibration,
        "opfibration": report.is_opfibration,
        "bifibration": report.is_bifibration,
        "covering": report.is_covering,
        "witnesses": {k: _plain([list(w) for w in v]) for k, v in report.witnesses.items()},
    }


def secat_report(result):
    out = {"value": _plain(result.value), "pieces": [], "sections": []}
    if result.certificate is not None:
        cert = result.certificate
        out["kind"] = cert.kind
        out["pieces"] = [u.label() for u in cert.pieces]
        out["sections"] = [
            {str(k): str(v) for k, v in w.section.mor_map.items()} for w in cert.sections
        ]
    return out


def bound_report(report):
    return {
        "cup_length": report.cpl.value,
        "capped": report.cpl.capped,
        "svarc_genus": _plain(report.sg),
        "holds": report.holds,
        "homotopic_genus": _plain(report.sg_homotopic),
        "kernel": {
            str(k): [[int(v) for v in x.representative] for x in gens]
            for k, gens in report.kernel.items()
        },
    }


def dumps(report):
    return json.dumps(report, indent=2, sort_keys=True)


def loads(text):
    return json.loads(text)
