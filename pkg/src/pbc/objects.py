"""Objects of the circuit language.

An object is a flat word (tuple) of atoms.  An atom is either the Boolean
wire ``B`` or a star atom ``A^*`` holding an inner object.  The empty word
is the tensor unit ``I``.  Words are kept flat at all times: tensoring two
objects is tuple concatenation, and a star over the empty word collapses
to the empty word itself.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "BoolAtom", "Star", "Atom", "Object",
    "BOOL", "B", "UNIT",
    "tensor", "bools", "star", "power",
    "object_normalize", "is_star_free", "width", "obj_to_str",
]


@dataclass(frozen=True, slots=True)
class BoolAtom:
    """The single Boolean wire."""

    def __repr__(self):
        return "BoolAtom()"


@dataclass(frozen=True, slots=True)
class Star:
    """A parametric tuple atom over an inner object."""

    inner: "Object"

    def __repr__(self):
        return f"Star({self.inner!r})"


Atom = BoolAtom | Star
Object = tuple  # tuple[Atom, ...]

BOOL = BoolAtom()
B: Object = (BOOL,)
UNIT: Object = ()


def tensor(*objs: Object) -> Object:
    """Concatenate object words."""
    out: tuple = ()
    for o in objs:
        out = out + tuple(o)
    return out


def bools(n: int) -> Object:
    """The word of n Boolean wires."""
    if n < 0:
        raise ValueError(f"negative wire count: {n}")
    return (BOOL,) * n


def power(obj: Object, n: int) -> Object:
    """n-fold tensor of an object with itself."""
    if n < 0:
        raise ValueError(f"negative power: {n}")
    return tuple(obj) * n


def star(obj: Object) -> Object:
    """Star of an object.  The star of the unit is the unit."""
    obj = object_normalize(obj)
    if obj == UNIT:
        return UNIT
    return (Star(obj),)


def object_normalize(obj: Object) -> Object:
    """Flatten and drop degenerate atoms.

    Star atoms holding the empty word disappear; star atoms are normalized
    recursively.  Words built through the module constructors are already
    in this form, so this mostly matters for hand-assembled tuples.
    """
    out = []
    for atom in obj:
        if isinstance(atom, Star):
            inner = object_normalize(atom.inner)
            if inner != UNIT:
                out.append(Star(inner))
        elif isinstance(atom, BoolAtom):
            out.append(atom)
        else:
            raise TypeError(f"not an atom: {atom!r}")
    return tuple(out)


def is_star_free(obj: Object) -> bool:
    return all(isinstance(a, BoolAtom) for a in obj)


def width(obj: Object) -> int:
    """Number of Boolean wires of a star-free object."""
    for a in obj:
        if not isinstance(a, BoolAtom):
            raise ValueError(
                f"object {obj_to_str(obj)} is parametric; it has no fixed width")
    return len(obj)


def _atom_to_str(atom: Atom) -> str:
    if isinstance(atom, BoolAtom):
        return "B"
    inner = obj_to_str(atom.inner)
    if len(atom.inner) == 1 and isinstance(atom.inner[0], BoolAtom):
        return "B^*"
    return f"({inner})^*"


def obj_to_str(obj: Object) -> str:
    """Render an object in the surface syntax.

    Runs of equal Boolean atoms are grouped into powers, star atoms are
    rendered individually.  The output parses back to the same word.
    """
    if not obj:
        return "I"
    parts = []
    i = 0
    while i < len(obj):
        atom = obj[i]
        if isinstance(atom, BoolAtom):
            j = i
            while j < len(obj) and isinstance(obj[j], BoolAtom):
                j += 1
            run = j - i
            parts.append("B" if run == 1 else f"B^{run}")
            i = j
        else:
            parts.append(_atom_to_str(atom))
            i += 1
    return " x ".join(parts)
