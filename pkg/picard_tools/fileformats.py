"""
Input syntax for the three file kinds.

    # simplicial complex          # binoid                      # monomial ideal
    vertices: 1 2 3 4             generators: x y z             variables: x y z
    facet: 1 2 3                  relation: x + y = 2 z         gen: x^2 y z^3
    facet: 3 4                    relation: x + y + z = inf     gen: x y^2 z^2

Complexes and binoids may also be given as JSON objects mirroring their
to_dict forms. Lines are `keyword: values`; `#` starts a comment.
"""

import json
import re
from pathlib import Path

from picard_tools.binoid import INFINITY, BinoidPresentation, Relation
from picard_tools.errors import InvalidPresentation, ParseError
from picard_tools.simplicial import SimplicialComplex

SIMPLICIAL = "simplicial"
BINOID = "binoid"
MONOMIAL = "monomial"

KEYWORDS = {
    "vertices": SIMPLICIAL,
    "facet": SIMPLICIAL,
    "generators": BINOID,
    "relation": BINOID,
    "variables": MONOMIAL,
    "gen": MONOMIAL,
}

TERM = re.compile(r"^(?:(\d+)\s*\*?\s*)?([A-Za-z_][\w']*)$")
POWER = re.compile(r"^([A-Za-z_][\w']*)(?:\^(\d+))?$")
NAME = re.compile(r"^[A-Za-z_][\w']*$")


def _lines(text: str):
    """Yield (line number, keyword, value) for every non-blank line."""
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, sep, value = line.partition(":")
        if not sep:
            raise ParseError(f"expected 'keyword: values', got {line!r}", number)
        yield number, keyword.strip().lower(), value.strip()


def _label(token: str):
    return int(token) if token.isdigit() else token


def detect_kind(text: str) -> str:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", e.lineno)
        if "facets" in data:
            return SIMPLICIAL
        if "relations" in data or "generators" in data:
            return BINOID
        raise ParseError("JSON input needs 'facets' or 'generators'")

    for number, keyword, _ in _lines(text):
        if keyword not in KEYWORDS:
            raise ParseError(f"unknown keyword {keyword!r}", number)
        return KEYWORDS[keyword]
    raise ParseError("input is empty")


def _expect(keyword: str, number: int, allowed) -> None:
    if keyword not in allowed:
        raise ParseError(f"keyword {keyword!r} does not belong in this file", number)


########## simplicial complexes

def _is_label(value) -> bool:
    # bool is an int subclass and never a vertex label
    return isinstance(value, str) or (isinstance(value, int) and not isinstance(value, bool))


def _labels(values, field: str) -> list:
    if not isinstance(values, list):
        raise ParseError(f"{field!r} must be a list")
    for value in values:
        if not _is_label(value):
            raise ParseError(f"{field!r} entry {value!r} is not an integer or a string")
    return values


def _complex_from_dict(data: dict) -> SimplicialComplex:
    facets = data.get("facets", [])
    if not isinstance(facets, list) or not all(isinstance(f, list) for f in facets):
        raise ParseError("'facets' must be a list of lists")
    for facet in facets:
        _labels(facet, "facets")
    return SimplicialComplex.from_facets(facets, _labels(data.get("vertices", []), "vertices"))


def parse_complex(text: str) -> SimplicialComplex:
    if text.lstrip().startswith("{"):
        try:
            return _complex_from_dict(json.loads(text))
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", e.lineno)
        except (AttributeError, TypeError, ValueError) as e:
            raise ParseError(f"malformed complex: {e}")

    vertices, facets = None, []
    for number, keyword, value in _lines(text):
        _expect(keyword, number, ("vertices", "facet"))
        labels = [_label(token) for token in value.split()]
        if keyword == "vertices":
            if vertices is not None:
                raise ParseError("vertices declared twice", number)
            vertices = labels
            continue
        if vertices is not None:
            unknown = [v for v in labels if v not in vertices]
            if unknown:
                raise ParseError(f"facet uses undeclared vertex {unknown[0]}", number)
        facets.append(labels)

    return SimplicialComplex.from_facets(facets, vertices or [])


########## binoids

def _element(value: str, names: list[str], number: int):
    """Parse `2 x + y` (or `2x`, `2*x`), `0`, or `inf` into an exponent vector."""
    if value.lower() in ("inf", "∞"):
        return INFINITY
    vector = [0] * len(names)
    if value == "0":
        return tuple(vector)
    for term in value.split("+"):
        match = TERM.match(term.strip())
        if match is None:
            raise ParseError(f"cannot read term {term.strip()!r}", number)
        coefficient, name = match.groups()
        if name not in names:
            raise ParseError(f"unknown generator {name!r}", number)
        vector[names.index(name)] += int(coefficient) if coefficient else 1
    return tuple(vector)


def _names(value: str, number: int) -> list[str]:
    names = value.split()
    for name in names:
        if not NAME.match(name):
            raise ParseError(f"{name!r} is not a valid generator name", number)
    if len(set(names)) != len(names):
        raise ParseError("repeated generator name", number)
    return names


def _presentation(names, relations, number: int | None = None) -> BinoidPresentation:
    try:
        return BinoidPresentation(tuple(names), tuple(relations))
    except InvalidPresentation as e:
        raise ParseError(str(e), number)


def _exponents(values) -> tuple[int, ...]:
    if not isinstance(values, list):
        raise ParseError(f"exponents {values!r} must be a list")
    for value in values:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ParseError(f"exponent {value!r} is not an integer")
    return tuple(values)


def _binoid_from_dict(data: dict) -> BinoidPresentation:
    names = [str(g) for g in _labels(data.get("generators", []), "generators")]
    relations = []
    for entry in data.get("relations", []):
        rhs = entry.get("rhs")
        relations.append(Relation(_exponents(entry["lhs"]), None if rhs is None else _exponents(rhs)))
    return _presentation(names, relations)


def parse_binoid(text: str) -> BinoidPresentation:
    if text.lstrip().startswith("{"):
        try:
            return _binoid_from_dict(json.loads(text))
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", e.lineno)
        except (AttributeError, KeyError, TypeError) as e:
            raise ParseError(f"malformed relation: {e}")

    names, relations, last = None, [], None
    for number, keyword, value in _lines(text):
        _expect(keyword, number, ("generators", "relation"))
        last = number
        if keyword == "generators":
            if names is not None:
                raise ParseError("generators declared twice", number)
            names = _names(value, number)
            continue
        if names is None:
            raise ParseError("relation before the generators line", number)
        lhs, sep, rhs = value.partition("=")
        if not sep:
            raise ParseError(f"relation {value!r} has no '='", number)
        left = _element(lhs.strip(), names, number)
        if left is INFINITY:
            raise ParseError("inf may only appear on the right of a relation", number)
        relations.append(Relation(left, _element(rhs.strip(), names, number)))

    return _presentation(names or [], relations, last)


########## monomial ideals

def _monomial(value: str, names: list[str], number: int) -> tuple[int, ...]:
    vector = [0] * len(names)
    for token in value.replace("*", " ").split():
        match = POWER.match(token)
        if match is None:
            raise ParseError(f"cannot read factor {token!r}", number)
        name, exponent = match.groups()
        if name not in names:
            raise ParseError(f"unknown variable {name!r}", number)
        vector[names.index(name)] += int(exponent) if exponent else 1
    if not any(vector):
        raise ParseError("a generator of the ideal must be a nonconstant monomial", number)
    return tuple(vector)


def parse_monomial(text: str) -> BinoidPresentation:
    """The ideal I in K[x] becomes the binoid with one relation m = inf per generator m."""
    names, relations, last = None, [], None
    for number, keyword, value in _lines(text):
        _expect(keyword, number, ("variables", "gen"))
        last = number
        if keyword == "variables":
            if names is not None:
                raise ParseError("variables declared twice", number)
            names = _names(value, number)
            continue
        if names is None:
            raise ParseError("generator before the variables line", number)
        relations.append(Relation(_monomial(value, names, number)))

    return _presentation(names or [], relations, last)


PARSERS = {
    SIMPLICIAL: parse_complex,
    BINOID: parse_binoid,
    MONOMIAL: parse_monomial,
}


def load_input(path: Path) -> tuple[str, SimplicialComplex | BinoidPresentation]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"input is not valid UTF-8 (byte {e.start})")
    except OSError as e:
        raise ParseError(f"cannot read input: {e.strerror}")
    kind = detect_kind(text)
    return kind, PARSERS[kind](text)
