"""
workspace.py - JSON workspace documents
=======================================

A workspace names a ring, a set of monomial ideals and a set of graded
families built from them:

    {
      "schema": "gradmult/1",
      "ring": {"variables": ["x", "y"], "quotient": [[2, 1]]},
      "ideals": {"I": [[2, 0], [0, 3]]},
      "families": {"F": {"kind": "powers", "ideal": "I"}},
      "settings": {"q_max": 12}
    }

Ideal references are names from "ideals" or inline exponent lists. Family
references are names from "families" or inline family objects. Every
validation error is a WorkspaceError carrying the JSON path of the offending
entry.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Set

from .errors import GradmultError, WorkspaceError
from .graded_families import (
    GradedFamily,
    IntegralClosurePowers,
    Powers,
    Restricted,
    Saturation,
    Scaled,
    SymbolicPowers,
    TableFamily,
    Truncated,
    Veronese,
    product_of_families,
)
from .monomial_core import AmbientRing, MonomialIdeal, normalize
from .settings import EngineSettings

logger = logging.getLogger(__name__)

SCHEMA = "gradmult/1"

FAMILY_KINDS = ("powers", "truncated", "saturation", "symbolic", "integral-closure",
                "product", "table", "scaled", "restricted", "veronese")


@dataclass
class WorkspaceDocument:
    """A validated workspace."""

    ring: AmbientRing
    ideals: Dict[str, MonomialIdeal] = field(default_factory=dict)
    families: Dict[str, GradedFamily] = field(default_factory=dict)
    settings: Dict[str, Any] = field(default_factory=dict)

    @property
    def quotient(self) -> Optional[MonomialIdeal]:
        if self.ring.quotient is None:
            return None
        return normalize(self.ring, self.ring.quotient)

    def ideal(self, name: str) -> MonomialIdeal:
        if name not in self.ideals:
            raise WorkspaceError(f"unknown ideal '{name}'", "$.ideals")
        return self.ideals[name]

    def family(self, name: str) -> GradedFamily:
        if name not in self.families:
            raise WorkspaceError(f"unknown family '{name}'", "$.families")
        return self.families[name]

    def engine_settings(self, base: Optional[EngineSettings] = None) -> EngineSettings:
        return (base or EngineSettings()).with_overrides(self.settings)


def _reject_duplicates(pairs: List[Any]) -> Dict[str, Any]:
    result = {}
    for key, value in pairs:
        if key in result:
            raise WorkspaceError(f"duplicate key '{key}'")
        result[key] = value
    return result


def _expect(value: Any, kind: type, path: str, what: str) -> Any:
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise WorkspaceError(f"expected {what}", path)
    return value


def _positive_int(value: Any, path: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise WorkspaceError(f"expected an integer >= 1, got {value!r}", path)
    return value


def parse_exponent(ring: AmbientRing, data: Any, path: str) -> tuple:
    _expect(data, list, path, "an exponent array")
    if len(data) != ring.dimension:
        raise WorkspaceError(f"dimension mismatch: expected {ring.dimension} exponents, got {len(data)}", path)
    for i, v in enumerate(data):
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise WorkspaceError(f"exponents must be non-negative integers, got {v!r}", f"{path}[{i}]")
    return tuple(data)


def parse_ideal(ring: AmbientRing, data: Any, path: str) -> MonomialIdeal:
    """An ideal from a list of exponent arrays (the empty list is the zero ideal)."""
    _expect(data, list, path, "a list of exponent arrays")
    return normalize(ring, [parse_exponent(ring, g, f"{path}[{i}]") for i, g in enumerate(data)])


def _parse_ring(data: Any) -> AmbientRing:
    _expect(data, dict, "$.ring", "an object")
    if "variables" in data:
        names = _expect(data["variables"], list, "$.ring.variables", "a list of variable names")
        for i, name in enumerate(names):
            _expect(name, str, f"$.ring.variables[{i}]", "a variable name")
        if "dimension" in data and data["dimension"] != len(names):
            raise WorkspaceError("dimension does not match the variable list", "$.ring.dimension")
    elif "dimension" in data:
        d = _positive_int(data["dimension"], "$.ring.dimension")
        names = ["x", "y", "z"][:d] if d <= 3 else [f"x{i + 1}" for i in range(d)]
    else:
        raise WorkspaceError("ring needs 'variables' or 'dimension'", "$.ring")
    try:
        ring = AmbientRing(tuple(names))
        if data.get("quotient") is not None:
            quotient = parse_ideal(ring, data["quotient"], "$.ring.quotient")
            ring = AmbientRing(tuple(names), quotient=quotient.generators)
    except WorkspaceError:
        raise
    except GradmultError as e:
        raise WorkspaceError(str(e), "$.ring")
    return ring


class _FamilyBuilder:
    """Resolves family definitions by name, depth first, detecting cycles."""

    def __init__(self, ring: AmbientRing, ideals: Dict[str, MonomialIdeal], definitions: Dict[str, Any]):
        self.ring = ring
        self.ideals = ideals
        self.definitions = definitions
        self.built: Dict[str, GradedFamily] = {}
        self.visiting: List[str] = []

    def named(self, name: str, path: str) -> GradedFamily:
        if name in self.built:
            return self.built[name]
        if name not in self.definitions:
            raise WorkspaceError(f"unknown family reference '{name}'", path)
        if name in self.visiting:
            cycle = " -> ".join(self.visiting[self.visiting.index(name):] + [name])
            raise WorkspaceError(f"cyclic family definition: {cycle}", f"$.families.{name}")
        self.visiting.append(name)
        family = self.build(self.definitions[name], f"$.families.{name}", name)
        self.visiting.pop()
        self.built[name] = family
        return family

    def ref(self, data: Any, path: str) -> GradedFamily:
        if isinstance(data, str):
            return self.named(data, path)
        return self.build(data, path, None)

    def ideal_ref(self, data: Any, path: str) -> MonomialIdeal:
        if isinstance(data, str):
            if data not in self.ideals:
                raise WorkspaceError(f"unknown ideal reference '{data}'", path)
            return self.ideals[data]
        return parse_ideal(self.ring, data, path)

    def build(self, definition: Any, path: str, name: Optional[str]) -> GradedFamily:
        _expect(definition, dict, path, "a family object")
        kind = definition.get("kind")
        if kind not in FAMILY_KINDS:
            raise WorkspaceError(f"unknown family kind {kind!r}; expected one of {list(FAMILY_KINDS)}",
                                 f"{path}.kind")

        def need(key: str) -> Any:
            if key not in definition:
                raise WorkspaceError(f"'{kind}' family needs '{key}'", path)
            return definition[key]

        builders: Dict[str, Callable[[], GradedFamily]] = {
            "powers": lambda: Powers(self.ideal_ref(need("ideal"), f"{path}.ideal"), name),
            "symbolic": lambda: SymbolicPowers(self.ideal_ref(need("ideal"), f"{path}.ideal"), name),
            "integral-closure": lambda: IntegralClosurePowers(self.ideal_ref(need("ideal"), f"{path}.ideal"), name),
            "scaled": lambda: Scaled(self.ideal_ref(need("ideal"), f"{path}.ideal"),
                                     _positive_int(need("alpha"), f"{path}.alpha"), name),
            "truncated": lambda: Truncated(_positive_int(need("a"), f"{path}.a"),
                                           self.ref(need("base"), f"{path}.base"), name),
            "saturation": lambda: Saturation(self.ref(need("base"), f"{path}.base"), name),
            "veronese": lambda: Veronese(self.ref(need("base"), f"{path}.base"),
                                         _positive_int(need("k"), f"{path}.k"), name),
            "product": lambda: self._product(need("factors"), f"{path}.factors", name),
            "table": lambda: TableFamily(
                [self.ideal_ref(t, f"{path}.terms[{i}]")
                 for i, t in enumerate(_expect(need("terms"), list, f"{path}.terms", "a list of ideals"))], name),
            "restricted": lambda: self._restricted(need("base"), need("kill"), path, name),
        }
        try:
            return builders[kind]()
        except WorkspaceError:
            raise
        except GradmultError as e:
            raise WorkspaceError(str(e), path)

    def _product(self, factors: Any, path: str, name: Optional[str]) -> GradedFamily:
        _expect(factors, list, path, "a list of families")
        if not factors:
            raise WorkspaceError("product needs at least one factor", path)
        family = product_of_families([self.ref(f, f"{path}[{i}]") for i, f in enumerate(factors)])
        # a single factor is returned as is and keeps its own name
        if name and len(factors) > 1:
            family.name = name
        return family

    def _restricted(self, base: Any, kill: Any, path: str, name: Optional[str]) -> GradedFamily:
        _expect(kill, list, f"{path}.kill", "a list of variable names")
        try:
            subset = self.ring.subset_from_names(kill)
        except GradmultError as e:
            raise WorkspaceError(str(e), f"{path}.kill")
        return Restricted(self.ref(base, f"{path}.base"), subset, name)


def parse_workspace_data(data: Any) -> WorkspaceDocument:
    """Validate an already-decoded workspace object."""
    _expect(data, dict, "$", "a JSON object")
    schema = data.get("schema")
    if schema is not None and schema != SCHEMA:
        raise WorkspaceError(f"unsupported schema {schema!r}; expected '{SCHEMA}'", "$.schema")
    if "ring" not in data:
        raise WorkspaceError("missing 'ring'", "$")
    ring = _parse_ring(data["ring"])

    raw_ideals = _expect(data.get("ideals", {}), dict, "$.ideals", "an object")
    ideals = {name: parse_ideal(ring, gens, f"$.ideals.{name}") for name, gens in raw_ideals.items()}

    raw_families = _expect(data.get("families", {}), dict, "$.families", "an object")
    clash: Set[str] = set(ideals) & set(raw_families)
    if clash:
        name = sorted(clash)[0]
        raise WorkspaceError(f"name '{name}' is both an ideal and a family", f"$.families.{name}")
    builder = _FamilyBuilder(ring, ideals, raw_families)
    families = {name: builder.named(name, f"$.families.{name}") for name in raw_families}

    settings = _expect(data.get("settings", {}), dict, "$.settings", "an object")
    EngineSettings().with_overrides(settings)

    logger.info(f"workspace: {ring.dimension} variables, {len(ideals)} ideal(s), {len(families)} family(ies)")
    return WorkspaceDocument(ring=ring, ideals=ideals, families=families, settings=dict(settings))


def parse_workspace(path: str) -> WorkspaceDocument:
    """
    Read and validate a workspace file.

    Raises:
        WorkspaceError: unreadable file, invalid JSON, unknown reference,
            dimension mismatch or cyclic family definition
    """
    file = Path(path)
    try:
        text = file.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise WorkspaceError(f"cannot read workspace {path}: {e}")
    try:
        data = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as e:
        raise WorkspaceError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}")
    return parse_workspace_data(data)
