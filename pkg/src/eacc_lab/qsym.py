"""Exact symbolic simulator for the restricted state family the erasure-code
constructions use: tensor products of computational-basis qudit symbols and
displaced maximally entangled pairs.

Every register slot is, at all times, one of
  * ``Classical(x)`` - a definite computational-basis symbol,
  * half of a displaced maximally entangled pair, or
  * ``Erased`` - lost to the channel.

Displacements are generalized Pauli labels ``(x, z)`` attached to pairs; for
dimension ``p^m`` they compose digit-wise modulo p (equivalently, m
independent p-dimensional pairs).  Global phases are discarded throughout -
every measurement offered here is phase-insensitive.  Anything outside this
family raises instead of being silently approximated.

States are single-owner mutable values: methods mutate in place (measurements
are destructive where physics says so) and ``copy`` gives an independent
snapshot.  Distinct states may be used concurrently; one state must not be
shared between tasks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from eacc_lab.gf import digit_ops, prime_power

__all__ = [
    "CHANNEL",
    "ALICE",
    "BOB",
    "Slot",
    "SlotLayout",
    "SymbolicState",
    "register_new",
]

CHANNEL = "channel"
ALICE = "alice"
BOB = "bob"

_OWNERS = (CHANNEL, ALICE, BOB)

# slot content kinds
_CLASSICAL = 0
_BELL = 1
_ERASED = 2


@dataclass(frozen=True)
class Slot:
    """One register slot: a label, a local dimension, and who holds it."""

    label: str
    dim: int
    owner: str

    def __post_init__(self) -> None:
        if self.dim < 2:
            raise ValueError(f"slot {self.label!r}: dimension must be >= 2")
        if self.owner not in _OWNERS:
            raise ValueError(f"slot {self.label!r}: unknown owner {self.owner!r}")


class SlotLayout:
    """An ordered, immutable register layout with unique labels."""

    __slots__ = ("slots", "_index", "_digit_ops")

    def __init__(self, slots: Iterable[Slot]):
        self.slots: tuple[Slot, ...] = tuple(slots)
        index: dict[str, int] = {}
        for i, slot in enumerate(self.slots):
            if slot.label in index:
                raise ValueError(f"duplicate slot label {slot.label!r}")
            index[slot.label] = i
        self._index = index
        self._digit_ops: dict[int, tuple] = {}

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValueError(f"no slot labelled {label!r}") from None

    def __len__(self) -> int:
        return len(self.slots)

    def __iter__(self) -> Iterator[Slot]:
        return iter(self.slots)

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def labels(self) -> tuple[str, ...]:
        return tuple(s.label for s in self.slots)

    def ops_for_dim(self, dim: int):
        """(add, sub) digit-wise displacement composition for this dimension."""
        ops = self._digit_ops.get(dim)
        if ops is None:
            prime_power(dim)  # raises if the dimension is not a prime power
            ops = digit_ops(dim)
            self._digit_ops[dim] = ops
        return ops


class SymbolicState:
    """A register state within the symbolic family (see module docstring)."""

    __slots__ = ("layout", "_kind", "_val", "_pair_slots", "_pair_x", "_pair_z")

    def __init__(self, layout: SlotLayout):
        self.layout = layout
        n = len(layout)
        self._kind = [_CLASSICAL] * n
        self._val = [0] * n
        self._pair_slots: list[tuple[int, int]] = []
        self._pair_x: list[int] = []
        self._pair_z: list[int] = []

    def copy(self) -> "SymbolicState":
        st = SymbolicState.__new__(SymbolicState)
        st.layout = self.layout
        st._kind = self._kind.copy()
        st._val = self._val.copy()
        st._pair_slots = self._pair_slots.copy()
        st._pair_x = self._pair_x.copy()
        st._pair_z = self._pair_z.copy()
        return st

    # -- classical symbols ---------------------------------------------------

    def set_classical(self, label: str, x: int) -> None:
        """Write a definite symbol into a slot that is not entangled or erased."""
        i = self.layout.index(label)
        kind = self._kind[i]
        if kind == _BELL:
            raise ValueError(f"slot {label!r} is half of a live pair")
        if kind == _ERASED:
            raise ValueError(f"slot {label!r} is erased")
        if not 0 <= x < self.layout.slots[i].dim:
            raise ValueError(f"symbol {x} out of range for dimension {self.layout.slots[i].dim}")
        self._val[i] = x

    def computational_measure(self, label: str) -> int:
        """Read a classical slot nondestructively.

        Measuring an entangled or erased slot would be random, which the
        constructions in scope never do; it is treated as a contract violation.
        """
        i = self.layout.index(label)
        kind = self._kind[i]
        if kind == _BELL:
            raise ValueError(f"slot {label!r} is entangled; outcome would be random")
        if kind == _ERASED:
            raise ValueError(f"slot {label!r} is erased")
        return self._val[i]

    # -- entangled pairs -------------------------------------------------------

    def make_bell_pair(self, label_a: str, label_b: str) -> int:
        """Entangle two classical slots of equal prime-power dimension.

        The fresh pair carries displacement (0, 0); ``label_a`` is the pair's
        first half (the side displacements are referred to).  Returns the pair id.
        """
        ia = self.layout.index(label_a)
        ib = self.layout.index(label_b)
        if ia == ib:
            raise ValueError("cannot entangle a slot with itself")
        da = self.layout.slots[ia].dim
        db = self.layout.slots[ib].dim
        if da != db:
            raise ValueError(f"dimension mismatch: {da} vs {db}")
        for i, lab in ((ia, label_a), (ib, label_b)):
            if self._kind[i] == _BELL:
                raise ValueError(f"slot {lab!r} is already half of a pair")
            if self._kind[i] == _ERASED:
                raise ValueError(f"slot {lab!r} is erased")
        self.layout.ops_for_dim(da)
        pid = len(self._pair_slots)
        self._pair_slots.append((ia, ib))
        self._pair_x.append(0)
        self._pair_z.append(0)
        self._kind[ia] = _BELL
        self._kind[ib] = _BELL
        self._val[ia] = pid
        self._val[ib] = pid
        return pid

    def apply_displacement(self, label: str, x: int, z: int) -> None:
        """Compose a generalized-Pauli displacement onto the slot's pair.

        Displacements are stored as if applied to the pair's first half; a
        displacement on the second half is folded in through the transpose
        rule (x negates, z is unchanged), so outcomes stay consistent no
        matter which half was driven.  Global phase is discarded.
        """
        i = self.layout.index(label)
        if self._kind[i] != _BELL:
            raise ValueError(f"slot {label!r} is not half of a pair")
        pid = self._val[i]
        dim = self.layout.slots[i].dim
        if not (0 <= x < dim and 0 <= z < dim):
            raise ValueError(f"displacement ({x}, {z}) out of range for dimension {dim}")
        add, sub = self.layout.ops_for_dim(dim)
        first, _second = self._pair_slots[pid]
        if i == first:
            self._pair_x[pid] = add(self._pair_x[pid], x)
        else:
            self._pair_x[pid] = sub(self._pair_x[pid], x)
        self._pair_z[pid] = add(self._pair_z[pid], z)

    def bell_measure(self, label_1: str, label_2: str) -> tuple[int, int]:
        """Measure the two halves of one live pair in the displaced-pair basis.

        Returns the displacement (x, z) relative to ``label_1`` carrying the
        displacement, and consumes the pair: both slots become Classical(0).
        """
        i1 = self.layout.index(label_1)
        i2 = self.layout.index(label_2)
        if self._kind[i1] == _ERASED or self._kind[i2] == _ERASED:
            raise ValueError("cannot Bell-measure an erased slot")
        if self._kind[i1] != _BELL or self._kind[i2] != _BELL:
            raise ValueError("both slots must be halves of a pair")
        pid = self._val[i1]
        if self._val[i2] != pid:
            raise ValueError(
                f"slots {label_1!r} and {label_2!r} belong to different pairs"
            )
        first, _second = self._pair_slots[pid]
        x, z = self._pair_x[pid], self._pair_z[pid]
        if i1 != first:
            _add, sub = self.layout.ops_for_dim(self.layout.slots[i1].dim)
            x = sub(0, x)
        self._kind[i1] = _CLASSICAL
        self._kind[i2] = _CLASSICAL
        self._val[i1] = 0
        self._val[i2] = 0
        return x, z

    # -- erasure ----------------------------------------------------------------

    def erase(self, labels: Sequence[str] | str) -> None:
        """Mark slots erased.  A pair with one erased half keeps its survivor,
        whose marginal is maximally mixed from then on."""
        if isinstance(labels, str):
            labels = (labels,)
        for label in labels:
            i = self.layout.index(label)
            self._kind[i] = _ERASED

    # -- introspection (used by the density-matrix backend) -----------------------

    def slot_content(self, label: str) -> tuple:
        """Structured view of one slot.

        Returns ``("classical", x)``, ``("erased",)``, or
        ``("bell", pair_id, role, partner_index, partner_alive)`` with role 0
        for the first half and 1 for the second.
        """
        i = self.layout.index(label)
        kind = self._kind[i]
        if kind == _CLASSICAL:
            return ("classical", self._val[i])
        if kind == _ERASED:
            return ("erased",)
        pid = self._val[i]
        first, second = self._pair_slots[pid]
        role = 0 if i == first else 1
        partner = second if role == 0 else first
        return ("bell", pid, role, partner, self._kind[partner] == _BELL)

    def pair_displacement(self, pair_id: int) -> tuple[int, int]:
        return self._pair_x[pair_id], self._pair_z[pair_id]


def register_new(layout: SlotLayout) -> SymbolicState:
    """A fresh register: every slot Classical(0)."""
    return SymbolicState(layout)
