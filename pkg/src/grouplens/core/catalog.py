"""
Group expressions, JSON documents and the built-in catalog.

Expression grammar:

    spec := atom | "product:" spec "," spec
    atom := ("cyclic" | "symmetric" | "dihedral" | "alternating") ":" n

Anything ending in ".json", or naming an existing file, is read as a group
document instead.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Union

from pydantic import ValidationError
from sympy.combinatorics import Permutation as SympyPermutation

from grouplens.core.averaging import TransferSetup, make_transfer_setup
from grouplens.core.functions import (
    GroupFunction,
    Homomorphism,
    as_homomorphism,
    certify,
    hom_from_generator_images,
    identity_map,
    is_homomorphism,
)
from grouplens.core.groups import (
    Group,
    Subgroup,
    derived_subgroup,
    from_cayley_table,
    from_permutations,
    make_alternating,
    make_cyclic,
    make_dihedral,
    make_direct_product,
    make_symmetric,
    subgroup_closure,
    subgroup_from_members,
    whole_group,
)
from grouplens.core.quotients import quotient
from grouplens.core.types import Element
from grouplens.errors import (
    CertificationError,
    GroupValidationError,
    PreconditionError,
    SpecParseError,
)
from grouplens.schemas import (
    CayleyDocument,
    FunctionDocument,
    GroupDocument,
    PermutationDocument,
    SpecDocument,
    group_document_adapter,
)

logger = logging.getLogger(__name__)

_ATOMS: dict[str, Callable[[int], Group]] = {
    "cyclic": make_cyclic,
    "symmetric": make_symmetric,
    "dihedral": make_dihedral,
    "alternating": make_alternating,
}


class _SpecParser:
    """Recursive descent over a group expression, tracking the position."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def parse(self) -> Group:
        group = self._spec()
        if self.pos != len(self.text):
            self._fail("Unexpected trailing input")
        return group

    def _fail(self, message: str):
        raise SpecParseError(message, self.text, self.pos)

    def _word(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        if start == self.pos:
            self._fail("Expected a group kind")
        return self.text[start : self.pos]

    def _number(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self._fail("Expected a positive integer")
        return int(self.text[start : self.pos])

    def _expect(self, char: str) -> None:
        if self.pos >= len(self.text) or self.text[self.pos] != char:
            self._fail(f"Expected {char!r}")
        self.pos += 1

    def _spec(self) -> Group:
        start = self.pos
        kind = self._word()
        self._expect(":")
        if kind == "product":
            left = self._spec()
            self._expect(",")
            right = self._spec()
            return make_direct_product(left, right)
        if kind not in _ATOMS:
            self.pos = start
            self._fail(f"Unknown group kind {kind!r}")
        n_pos = self.pos
        n = self._number()
        if n < 1:
            self.pos = n_pos
            self._fail("Group parameter must be positive")
        return _ATOMS[kind](n)


def parse_group_spec(text: str) -> Group:
    return _SpecParser(text.strip()).parse()


def load_group(document: Union[GroupDocument, dict]) -> Group:
    if isinstance(document, dict):
        try:
            document = group_document_adapter.validate_python(document)
        except ValidationError as exc:
            raise GroupValidationError("Invalid group document", {"errors": exc.errors(include_url=False)}) from exc
    if isinstance(document, CayleyDocument):
        if len(document.table) != document.order:
            raise GroupValidationError(
                "Table size does not match the declared order",
                {"rows": len(document.table), "order": document.order},
            )
        return from_cayley_table(document.table, document.labels, document.name or "cayley")
    if isinstance(document, PermutationDocument):
        group = from_permutations(document.degree, document.generators)
        if document.name:
            group.name = document.name
        return group
    return parse_group_spec(document.expr)


def dump_group(g: Group) -> CayleyDocument:
    return CayleyDocument(order=g.order, table=g.table.tolist(), labels=list(g.labels), name=g.name)


def _read_json(path: Path) -> dict:
    try:
        return json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise PreconditionError(f"Cannot read JSON document {path}", {"path": str(path)}) from exc


def resolve_group_spec(text: str) -> Group:
    """A group expression or the path of a group document."""
    path = Path(text)
    if text.endswith(".json") or path.is_file():
        return load_group(_read_json(path))
    return parse_group_spec(text)


def load_function(document: Union[FunctionDocument, dict]) -> GroupFunction:
    """Build the function, verifying its homomorphism claim if it makes one."""
    if isinstance(document, dict):
        try:
            document = FunctionDocument.model_validate(document)
        except ValidationError as exc:
            raise GroupValidationError("Invalid function document", {"errors": exc.errors(include_url=False)}) from exc
    f = GroupFunction(load_group(document.domain), load_group(document.codomain), document.values)
    if document.homomorphism is True:
        as_homomorphism(f)
    elif document.homomorphism is False and is_homomorphism(f):
        raise CertificationError("Function claimed not to be a homomorphism is one")
    return f


def load_function_file(path: Union[str, Path]) -> GroupFunction:
    return load_function(_read_json(Path(path)))


def dump_function(f: GroupFunction, claim: Optional[bool] = None) -> FunctionDocument:
    return FunctionDocument(
        domain=dump_group(f.domain),
        codomain=dump_group(f.codomain),
        values=list(f.values),
        homomorphism=claim,
    )


def split_top_level(text: str) -> list[str]:
    """Split on commas outside parentheses, so product labels stay whole."""
    parts, depth, current = [], 0, []
    for char in text:
        if char == "," and depth == 0:
            parts.append("".join(current).strip())
            current = []
            continue
        depth += {"(": 1, ")": -1}.get(char, 0)
        current.append(char)
    tail = "".join(current).strip()
    if tail or parts:
        parts.append(tail)
    return [p for p in parts if p]


def parse_elements(g: Group, text: str) -> list[Element]:
    """Comma-separated element indices or labels of g."""
    elements = []
    for token in split_top_level(text):
        element = int(token) if token.lstrip("-").isdigit() else g.element(token)
        g.check(element)
        elements.append(element)
    return elements


# Catalog

CATALOG_SPECS: tuple[str, ...] = tuple(f"cyclic:{n}" for n in range(1, 13)) + (
    "symmetric:3",
    "symmetric:4",
    "alternating:4",
    "dihedral:2",
    "dihedral:4",
    "dihedral:5",
    "dihedral:6",
    "product:cyclic:2,cyclic:2",
    "product:cyclic:2,cyclic:4",
    "product:cyclic:2,cyclic:6",
    "product:cyclic:3,cyclic:3",
    "product:symmetric:3,cyclic:2",
)


def build_catalog() -> dict[str, Group]:
    catalog = {spec: parse_group_spec(spec) for spec in CATALOG_SPECS}
    logger.debug("Built catalog of %d groups", len(catalog))
    return catalog


@dataclass(frozen=True)
class ShippedTransfer:
    name: str
    setup: TransferSetup


@dataclass(frozen=True)
class ShippedExtension:
    """An extension H with normal kernel N and a homomorphism G → H/N to lift."""

    name: str
    extension: Group
    kernel: Subgroup
    hom: Homomorphism


def identity_target(subgroup: Subgroup) -> Homomorphism:
    return certify(identity_map(subgroup.as_group), "Identity target")


def sign_target(subgroup: Subgroup) -> Homomorphism:
    """Parity of the parent's permutations on the subgroup, into Z2."""
    perms = subgroup.parent.permutations
    if perms is None:
        raise PreconditionError("Sign needs a permutation group")
    values = [0 if SympyPermutation(list(perms[x])).is_even else 1 for x in subgroup.members]
    return certify(GroupFunction(subgroup.as_group, make_cyclic(2), values), "Sign")


def shipped_transfers() -> list[ShippedTransfer]:
    s3, s4, a4 = make_symmetric(3), make_symmetric(4), make_alternating(4)
    z6, z12, d4 = make_cyclic(6), make_cyclic(12), make_dihedral(4)

    a3 = subgroup_closure(s3, [s3.element("120")])
    a3_to_z3 = hom_from_generator_images(a3.as_group, [1], make_cyclic(3))
    v4 = derived_subgroup(a4, whole_group(a4))
    v4_onto_z2 = hom_from_generator_images(
        v4.as_group, [1] + [0] * (len(v4.as_group.generators) - 1), make_cyclic(2)
    )
    s3_in_s4 = subgroup_from_members(s4, [x for x, p in enumerate(s4.permutations or ()) if p[3] == 3])

    setups = [
        ("S3>A3", s3, a3, a3_to_z3),
        ("Z6><2>", z6, subgroup_closure(z6, [2]), None),
        ("D4><r>", d4, subgroup_closure(d4, [d4.element("r1")]), None),
        ("A4>V4", a4, v4, v4_onto_z2),
        ("S4>S3", s4, s3_in_s4, sign_target(s3_in_s4)),
        ("Z12><3>", z12, subgroup_closure(z12, [3]), None),
    ]
    return [
        ShippedTransfer(name, make_transfer_setup(g, h, pi if pi is not None else identity_target(h)))
        for name, g, h, pi in setups
    ]


def _quotient_hom(h: Group, kernel: Subgroup, domain: Group, image_in_h: Element) -> Homomorphism:
    """G → H/N sending the generator of cyclic G to the coset of image_in_h."""
    q = quotient(h, kernel)
    return hom_from_generator_images(domain, [q.projection(image_in_h)], q.group)


def shipped_extensions() -> list[ShippedExtension]:
    s3, a4 = make_symmetric(3), make_alternating(4)
    a3 = subgroup_closure(s3, [s3.element("120")])
    v4 = derived_subgroup(a4, whole_group(a4))
    z5 = make_cyclic(5)
    s3z5 = make_direct_product(s3, z5)
    # (x, k) has index x·5 + k
    a3_x_1 = subgroup_closure(s3z5, [s3.element("120") * 5])
    s3_x_1 = subgroup_from_members(s3z5, [x * 5 for x in s3.elements])
    three_cycle = next(x for x in a4.elements if a4.element_order(x) == 3)

    return [
        ShippedExtension("S3/A3", s3, a3, _quotient_hom(s3, a3, make_cyclic(2), s3.element("021"))),
        ShippedExtension("A4/V4", a4, v4, _quotient_hom(a4, v4, make_cyclic(3), three_cycle)),
        ShippedExtension(
            "S3xZ5/A3x1", s3z5, a3_x_1, _quotient_hom(s3z5, a3_x_1, make_cyclic(2), s3.element("021") * 5)
        ),
        ShippedExtension("S3xZ5/S3x1", s3z5, s3_x_1, _quotient_hom(s3z5, s3_x_1, z5, 1)),
    ]
