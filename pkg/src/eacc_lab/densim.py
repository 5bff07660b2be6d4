"""Small-scale dense density-matrix backend.

Converts symbolic states to explicit density operators, takes partial traces,
and computes von Neumann entropies and Holevo quantities in an arbitrary
logarithm base.  Everything here is audit-scale by design: total dimension is
capped at 2^12 so a dense Hermitian eigendecomposition stays instant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from eacc_lab.gf import digit_ops, prime_power
from eacc_lab.qsym import SymbolicState

__all__ = [
    "DIM_CAP",
    "EIG_CLAMP",
    "HERM_TOL",
    "DensityMatrix",
    "CqEnsemble",
    "CqQuantities",
    "to_density",
    "partial_trace",
    "vn_entropy",
    "cq_quantities",
    "displaced_pair_vector",
]

#: Largest total dimension the backend will materialize.
DIM_CAP = 1 << 12
#: Eigenvalues below this are treated as exact zeros.
EIG_CLAMP = 1e-12
#: Tolerance for the Hermiticity / trace invariants.
HERM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A density operator with an ordered subsystem structure.

    Hermiticity and unit trace are checked on construction; positivity is
    checked by :meth:`validate` (it costs an eigendecomposition, so it is not
    run on every construction).
    """

    dims: tuple[int, ...]
    data: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        total = 1
        for d in self.dims:
            total *= d
        if self.data.shape != (total, total):
            raise ValueError(
                f"data shape {self.data.shape} inconsistent with dims {self.dims}"
            )
        if np.abs(self.data - self.data.conj().T).max(initial=0.0) > HERM_TOL:
            raise ValueError("matrix is not Hermitian within tolerance")
        if abs(self.data.trace() - 1.0) > HERM_TOL:
            raise ValueError(f"trace {self.data.trace()} != 1 within tolerance")

    @property
    def total_dim(self) -> int:
        return self.data.shape[0]

    def validate(self) -> None:
        """Full invariant check including positive semidefiniteness."""
        w = np.linalg.eigvalsh(self.data)
        if w.min(initial=0.0) < -EIG_CLAMP:
            raise ValueError(f"matrix has negative eigenvalue {w.min()}")


def displaced_pair_vector(dim: int, x: int, z: int, swap: bool = False) -> np.ndarray:
    """State vector of a displaced maximally entangled pair of local dimension dim.

    The displacement acts on the first tensor leg; ``swap=True`` returns the
    same state with the legs exchanged.  For dim = p^m the Pauli action is
    digit-wise base p, matching the simulator's composition rule.
    """
    p, m = prime_power(dim)
    add, _sub = digit_ops(dim)
    omega = 2.0 * math.pi / p
    amp = 1.0 / math.sqrt(dim)
    vec = np.zeros((dim, dim), dtype=complex)
    for j in range(dim):
        # digit-wise inner product <z, j> mod p
        zz, jj, phase = z, j, 0
        for _ in range(m):
            phase += (zz % p) * (jj % p)
            zz //= p
            jj //= p
        a = amp * complex(math.cos(omega * phase), math.sin(omega * phase))
        vec[add(j, x), j] = a
    if swap:
        vec = vec.T
    return vec.reshape(dim * dim)


def to_density(state: SymbolicState, subset: Sequence[str]) -> DensityMatrix:
    """Exact density operator of the given slots, in the given order.

    Classical slots contribute basis projectors; pairs wholly inside the
    subset contribute displaced-pair projectors; a half whose partner is
    outside the subset (or erased) contributes the maximally mixed state.
    Erased slots cannot be included.
    """
    labels = list(subset)
    dims = tuple(state.layout.slots[state.layout.index(lab)].dim for lab in labels)
    total = 1
    for d in dims:
        total *= d
    if total > DIM_CAP:
        raise ValueError(f"total dimension {total} exceeds cap {DIM_CAP}")
    if not labels:
        return DensityMatrix((), np.ones((1, 1), dtype=complex))

    position = {state.layout.index(lab): pos for pos, lab in enumerate(labels)}
    if len(position) != len(labels):
        raise ValueError("subset contains a repeated slot")

    factors: list[tuple[np.ndarray, list[int]]] = []
    handled: set[int] = set()
    for pos, lab in enumerate(labels):
        if pos in handled:
            continue
        content = state.slot_content(lab)
        dim = dims[pos]
        if content[0] == "erased":
            raise ValueError(f"slot {lab!r} is erased; it has no state to report")
        if content[0] == "classical":
            x = content[1]
            mat = np.zeros((dim, dim), dtype=complex)
            mat[x, x] = 1.0
            factors.append((mat, [pos]))
            continue
        _tag, pid, role, partner_idx, partner_alive = content
        partner_pos = position.get(partner_idx)
        if partner_alive and partner_pos is not None:
            dx, dz = state.pair_displacement(pid)
            # order the legs by subset position; displacement rides the first half
            first_pos = pos if role == 0 else partner_pos
            second_pos = partner_pos if role == 0 else pos
            swap = first_pos > second_pos
            vec = displaced_pair_vector(dim, dx, dz, swap=swap)
            proj = np.outer(vec, vec.conj())
            legs = sorted((first_pos, second_pos))
            factors.append((proj, legs))
            handled.add(partner_pos)
        else:
            factors.append((np.eye(dim, dtype=complex) / dim, [pos]))
        handled.add(pos)

    full = factors[0][0]
    leg_order: list[int] = list(factors[0][1])
    for mat, legs in factors[1:]:
        full = np.kron(full, mat)
        leg_order.extend(legs)

    if leg_order != sorted(leg_order):
        # permute subsystems from factor order into subset order
        nsub = len(leg_order)
        factor_dims = [dims[p] for p in leg_order]
        perm = [leg_order.index(p) for p in range(nsub)]
        arr = full.reshape(factor_dims + factor_dims)
        arr = arr.transpose(perm + [p + nsub for p in perm])
        full = arr.reshape(total, total)

    return DensityMatrix(dims, np.ascontiguousarray(full))


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Trace out every subsystem not listed in ``keep`` (strictly increasing)."""
    nsub = len(rho.dims)
    keep = list(keep)
    if any(not 0 <= i < nsub for i in keep):
        raise ValueError(f"keep indices {keep} out of range for {nsub} subsystems")
    if keep != sorted(set(keep)):
        raise ValueError("keep indices must be strictly increasing")
    if len(keep) == nsub:
        return rho
    if not keep:
        return DensityMatrix((), np.array([[rho.data.trace()]], dtype=complex))
    traced = [i for i in range(nsub) if i not in set(keep)]
    order = keep + traced
    arr = rho.data.reshape(list(rho.dims) + list(rho.dims))
    arr = arr.transpose(order + [o + nsub for o in order])
    dk = 1
    for i in keep:
        dk *= rho.dims[i]
    dt = rho.data.shape[0] // dk
    arr = arr.reshape(dk, dt, dk, dt)
    out = np.einsum("aibi->ab", arr)
    return DensityMatrix(tuple(rho.dims[i] for i in keep), np.ascontiguousarray(out))


def vn_entropy(rho: DensityMatrix, base: float) -> float:
    """Von Neumann entropy in the given logarithm base (natural log / ln base)."""
    if base <= 1:
        raise ValueError(f"entropy base must exceed 1, got {base}")
    w = np.linalg.eigvalsh(rho.data)
    w = w[w > EIG_CLAMP]
    if w.size == 0:
        return 0.0
    return float(-(w * np.log(w)).sum() / math.log(base))


@dataclass(frozen=True)
class CqEnsemble:
    """A classical-quantum ensemble: labelled states on a common layout."""

    labels: tuple
    states: tuple[DensityMatrix, ...]
    weights: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.states):
            raise ValueError("labels and states differ in length")
        if not self.states:
            raise ValueError("ensemble must be nonempty")
        if len(self.labels) > DIM_CAP:
            raise ValueError(f"ensemble size {len(self.labels)} exceeds cap {DIM_CAP}")
        dims = self.states[0].dims
        for st in self.states:
            if st.dims != dims:
                raise ValueError("ensemble states live on mismatched layouts")
        if st.total_dim > DIM_CAP:
            raise ValueError("ensemble state dimension exceeds cap")
        if not self.weights:
            w = 1.0 / len(self.states)
            object.__setattr__(self, "weights", (w,) * len(self.states))
        if len(self.weights) != len(self.states):
            raise ValueError("weights and states differ in length")
        if abs(sum(self.weights) - 1.0) > 1e-9:
            raise ValueError("weights must sum to 1")


@dataclass(frozen=True)
class CqQuantities:
    """Entropy of the average state, average conditional entropy, and their gap."""

    h_avg: float
    h_cond: float
    holevo: float


def cq_quantities(ens: CqEnsemble, base: float) -> CqQuantities:
    """Holevo-style quantities of a classical-quantum ensemble.

    ``h_avg`` is the entropy of the weighted average state, ``h_cond`` the
    weighted average of the member entropies, and ``holevo`` their difference
    (the mutual information between the label and the quantum system).
    """
    avg = np.zeros_like(ens.states[0].data)
    h_cond = 0.0
    for w, st in zip(ens.weights, ens.states):
        avg += w * st.data
    for w, st in zip(ens.weights, ens.states):
        h_cond += w * vn_entropy(st, base)
    h_avg = vn_entropy(DensityMatrix(ens.states[0].dims, avg), base)
    return CqQuantities(h_avg=h_avg, h_cond=h_cond, holevo=h_avg - h_cond)
