"""Euclidean Jordan algebra kernel for direct sums of symmetric-cone blocks.

Three primitive block kinds are supported:

* ``orthant``: R^d with the componentwise product; its cone of squares is
  the nonnegative orthant.
* ``soc``: the spin-factor algebra on R^{d+1}, stored as one vector whose
  last entry is the scalar part s and whose first d entries are the vector
  part x; its cone of squares is the second-order cone ||x||_2 <= s.
* ``psd``: real symmetric n x n matrices with the symmetrized product
  (XY + YX)/2; its cone of squares is the PSD cone.

A :class:`ConeStructure` is an ordered direct sum of such blocks, and an
:class:`AlgebraElement` carries one coefficient array per block. Values are
immutable after construction and all operations are pure functions, so
everything here is safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "INTERIOR_RTOL",
    "StructureMismatchError",
    "ConeDomainError",
    "Block",
    "ConeStructure",
    "AlgebraElement",
    "SpectralDecomposition",
    "orthant",
    "soc",
    "psd",
    "direct_sum",
    "element",
    "zero",
    "identity",
    "jordan_product",
    "square",
    "trace",
    "inner",
    "norm",
    "isometric_coordinates",
    "eigenvalues",
    "spectral_decompose",
    "lowner",
    "exp_element",
    "ln_element",
    "min_eigenvalue",
    "max_eigenvalue",
    "in_cone",
    "in_interior",
    "cone_leq",
    "random_bounded_loss",
    "random_bounded_loss_batch",
    "random_trace_one",
    "random_trace_one_batch",
    "batch_row",
    "structure_to_json",
    "structure_from_json",
    "element_to_json",
    "element_from_json",
]

# Relative margin below which an eigenvalue counts as sitting on the cone
# boundary for logarithm-like maps. Kept deliberately small: boundary inputs
# should fail loudly instead of being clamped.
INTERIOR_RTOL = 1e-12

_KINDS = ("orthant", "soc", "psd")


class StructureMismatchError(ValueError):
    """Operands live in different cone structures."""


class ConeDomainError(ValueError):
    """Input lies outside the domain of the requested map."""


# ---------------------------------------------------------------------------
# Structures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    """One primitive summand of a cone structure.

    ``dim`` is the number of orthant coordinates, the vector-part dimension d
    of a second-order cone (ambient dimension d+1), or the matrix size n of a
    PSD block.
    """

    kind: str
    dim: int

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown block kind {self.kind!r}; expected one of {_KINDS}")
        if self.dim < 1:
            raise ValueError(f"block dimension must be positive, got {self.dim}")

    @property
    def rank(self) -> int:
        if self.kind == "orthant":
            return self.dim
        if self.kind == "soc":
            return 2
        return self.dim

    @property
    def ambient_dim(self) -> int:
        if self.kind == "orthant":
            return self.dim
        if self.kind == "soc":
            return self.dim + 1
        return self.dim * (self.dim + 1) // 2

    @property
    def shape(self) -> tuple[int, ...]:
        if self.kind == "psd":
            return (self.dim, self.dim)
        if self.kind == "soc":
            return (self.dim + 1,)
        return (self.dim,)


@dataclass(frozen=True)
class ConeStructure:
    """Ordered direct sum of primitive blocks."""

    blocks: tuple[Block, ...]

    def __post_init__(self) -> None:
        if not self.blocks:
            raise ValueError("a cone structure needs at least one block")

    @property
    def rank(self) -> int:
        return sum(b.rank for b in self.blocks)

    @property
    def ambient_dim(self) -> int:
        return sum(b.ambient_dim for b in self.blocks)

    def __str__(self) -> str:
        return " + ".join(f"{b.kind}({b.dim})" for b in self.blocks)


def orthant(d: int) -> ConeStructure:
    """Structure of a single orthant block on R^d."""
    return ConeStructure((Block("orthant", d),))


def soc(d: int) -> ConeStructure:
    """Structure of a single second-order cone with vector part in R^d."""
    return ConeStructure((Block("soc", d),))


def psd(n: int) -> ConeStructure:
    """Structure of a single real symmetric n x n PSD block."""
    return ConeStructure((Block("psd", n),))


def direct_sum(*parts: ConeStructure) -> ConeStructure:
    """Concatenate structures into one direct sum, preserving block order."""
    blocks: list[Block] = []
    for part in parts:
        blocks.extend(part.blocks)
    return ConeStructure(tuple(blocks))


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """A value of the algebra, stored block-aligned.

    Instances are immutable; the coefficient arrays are locked against
    writes. Use :func:`element` to build one with validation.
    """

    structure: ConeStructure
    blocks: tuple[np.ndarray, ...]

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        _check_same_structure(self, other)
        return _wrap(self.structure, [a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        _check_same_structure(self, other)
        return _wrap(self.structure, [a - b for a, b in zip(self.blocks, other.blocks)])

    def __neg__(self) -> "AlgebraElement":
        return _wrap(self.structure, [-a for a in self.blocks])

    def __mul__(self, c: float) -> "AlgebraElement":
        if not np.isscalar(c):
            return NotImplemented
        return _wrap(self.structure, [float(c) * a for a in self.blocks])

    __rmul__ = __mul__

    def __truediv__(self, c: float) -> "AlgebraElement":
        return self * (1.0 / float(c))


def _wrap(structure: ConeStructure, arrays: Sequence[np.ndarray]) -> AlgebraElement:
    # Internal constructor for freshly allocated arrays of the right shape.
    locked = []
    for a in arrays:
        a = np.asarray(a, dtype=float)
        a.setflags(write=False)
        locked.append(a)
    return AlgebraElement(structure, tuple(locked))


def _check_same_structure(x: AlgebraElement, y: AlgebraElement) -> None:
    if x.structure != y.structure:
        raise StructureMismatchError(
            f"elements live in different structures: {x.structure} vs {y.structure}"
        )


def element(structure: ConeStructure, blocks: Sequence[np.ndarray]) -> AlgebraElement:
    """Build an element from per-block coefficient arrays.

    PSD blocks are symmetrized as (M + M^T)/2 on construction, so stored
    matrices are exactly symmetric. Shapes must match the structure.
    """
    if len(blocks) != len(structure.blocks):
        raise ValueError(
            f"expected {len(structure.blocks)} coefficient blocks, got {len(blocks)}"
        )
    arrays = []
    for blk, raw in zip(structure.blocks, blocks):
        a = np.array(raw, dtype=float)
        if a.shape != blk.shape:
            raise ValueError(f"block {blk} expects shape {blk.shape}, got {a.shape}")
        if blk.kind == "psd":
            a = 0.5 * (a + a.T)
        arrays.append(a)
    return _wrap(structure, arrays)


def zero(structure: ConeStructure) -> AlgebraElement:
    return _wrap(structure, [np.zeros(b.shape) for b in structure.blocks])


def identity(structure: ConeStructure) -> AlgebraElement:
    """Identity element: all-ones vector, (0_d, 1), or the identity matrix per block."""
    arrays = []
    for b in structure.blocks:
        if b.kind == "orthant":
            arrays.append(np.ones(b.dim))
        elif b.kind == "soc":
            e = np.zeros(b.dim + 1)
            e[-1] = 1.0
            arrays.append(e)
        else:
            arrays.append(np.eye(b.dim))
    return _wrap(structure, arrays)


# ---------------------------------------------------------------------------
# Algebra operations
# ---------------------------------------------------------------------------


def jordan_product(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Jordan product, blockwise.

    Orthant blocks multiply componentwise; second-order blocks follow
    (x, s) o (x', s') = (s x' + s' x, x.x' + s s'); PSD blocks use the
    symmetrized matrix product (XY + YX)/2.
    """
    _check_same_structure(x, y)
    out = []
    for blk, a, b in zip(x.structure.blocks, x.blocks, y.blocks):
        if blk.kind == "orthant":
            out.append(a * b)
        elif blk.kind == "soc":
            av, asc = a[:-1], a[-1]
            bv, bsc = b[:-1], b[-1]
            out.append(np.concatenate([asc * bv + bsc * av, [av @ bv + asc * bsc]]))
        else:
            c = a @ b
            out.append(0.5 * (c + c.T))
    return _wrap(x.structure, out)


def square(x: AlgebraElement) -> AlgebraElement:
    return jordan_product(x, x)


def trace(x: AlgebraElement) -> float:
    """Trace, the sum of the eigenvalues: entry sum / 2s / matrix trace per block."""
    total = 0.0
    for blk, a in zip(x.structure.blocks, x.blocks):
        if blk.kind == "orthant":
            total += float(a.sum())
        elif blk.kind == "soc":
            total += 2.0 * float(a[-1])
        else:
            total += float(np.trace(a))
    return total


def inner(x: AlgebraElement, y: AlgebraElement) -> float:
    """Trace inner product tr(x o y).

    On second-order blocks this is twice the Euclidean inner product of the
    ambient vectors; on PSD blocks it is the Frobenius inner product.
    """
    _check_same_structure(x, y)
    total = 0.0
    for blk, a, b in zip(x.structure.blocks, x.blocks, y.blocks):
        if blk.kind == "soc":
            total += 2.0 * float(a @ b)
        else:
            total += float(np.sum(a * b))
    return total


def norm(x: AlgebraElement) -> float:
    return math.sqrt(max(inner(x, x), 0.0))


def isometric_coordinates(x: AlgebraElement) -> np.ndarray:
    """Flat coordinates in which the trace inner product is the plain dot product.

    Orthant entries map through unchanged, second-order vectors are scaled by
    sqrt(2), and PSD blocks contribute their diagonal plus sqrt(2) times the
    strict upper triangle.
    """
    parts = []
    for blk, a in zip(x.structure.blocks, x.blocks):
        if blk.kind == "orthant":
            parts.append(a)
        elif blk.kind == "soc":
            parts.append(math.sqrt(2.0) * a)
        else:
            iu = np.triu_indices(blk.dim, k=1)
            parts.append(np.concatenate([np.diag(a), math.sqrt(2.0) * a[iu]]))
    return np.concatenate(parts)


# ---------------------------------------------------------------------------
# Spectral decomposition and spectral maps
# ---------------------------------------------------------------------------


def _block_eigenvalues(blk: Block, a: np.ndarray) -> np.ndarray:
    # Descending within the block.
    if blk.kind == "orthant":
        return np.sort(a)[::-1]
    if blk.kind == "soc":
        nrm = float(np.linalg.norm(a[:-1]))
        s = float(a[-1])
        return np.array([s + nrm, s - nrm])
    return np.linalg.eigvalsh(a)[::-1]


def eigenvalues(x: AlgebraElement) -> np.ndarray:
    """All eigenvalues, blocks in structure order, descending within each block."""
    return np.concatenate([_block_eigenvalues(b, a) for b, a in zip(x.structure.blocks, x.blocks)])


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues plus a matching Jordan frame for one element.

    ``frame[i]`` is a primitive idempotent supported on a single block, and
    ``sum_i eigenvalues[i] * frame[i]`` reconstructs the element.
    """

    eigenvalues: np.ndarray
    frame: tuple[AlgebraElement, ...]


def spectral_decompose(x: AlgebraElement) -> SpectralDecomposition:
    """Type-II spectral decomposition of ``x``.

    Orthant blocks use the standard basis frame (entries sorted descending),
    second-order blocks the +-direction pair (s +- ||x||, (+-x/||x||, 1)/2),
    and PSD blocks a symmetric eigendecomposition into rank-one projectors.
    At a second-order block with zero vector part the first-coordinate
    direction is used; any frame gives the same spectral maps there.

    Raises ``numpy.linalg.LinAlgError`` if the symmetric eigensolver fails on
    a PSD block.
    """
    structure = x.structure
    lams: list[float] = []
    frame: list[AlgebraElement] = []

    def _zeros() -> list[np.ndarray]:
        return [np.zeros(b.shape) for b in structure.blocks]

    for i, (blk, a) in enumerate(zip(structure.blocks, x.blocks)):
        if blk.kind == "orthant":
            order = np.argsort(-a, kind="stable")
            for j in order:
                arrays = _zeros()
                arrays[i][j] = 1.0
                lams.append(float(a[j]))
                frame.append(_wrap(structure, arrays))
        elif blk.kind == "soc":
            v, s = a[:-1], float(a[-1])
            nrm = float(np.linalg.norm(v))
            if nrm == 0.0:
                u = np.zeros(blk.dim)
                u[0] = 1.0
            else:
                u = v / nrm
            for sign in (+1.0, -1.0):
                arrays = _zeros()
                arrays[i] = 0.5 * np.concatenate([sign * u, [1.0]])
                lams.append(s + sign * nrm)
                frame.append(_wrap(structure, arrays))
        else:
            w, vecs = np.linalg.eigh(a)
            for j in range(blk.dim - 1, -1, -1):
                arrays = _zeros()
                arrays[i] = np.outer(vecs[:, j], vecs[:, j])
                lams.append(float(w[j]))
                frame.append(_wrap(structure, arrays))

    eig = np.array(lams)
    eig.setflags(write=False)
    return SpectralDecomposition(eig, tuple(frame))


def lowner(f: Callable[[np.ndarray], np.ndarray], x: AlgebraElement) -> AlgebraElement:
    """Apply a scalar function to the spectrum while keeping the frame.

    ``f`` must accept numpy arrays (ufuncs such as ``np.exp`` qualify). A
    :class:`ConeDomainError` is raised if ``f`` produces a non-finite value
    on any eigenvalue of ``x``.
    """
    out = []
    with np.errstate(all="ignore"):
        for blk, a in zip(x.structure.blocks, x.blocks):
            if blk.kind == "orthant":
                vals = np.asarray(f(a), dtype=float)
            elif blk.kind == "soc":
                v, s = a[:-1], float(a[-1])
                nrm = float(np.linalg.norm(v))
                fp, fm = (float(t) for t in np.asarray(f(np.array([s + nrm, s - nrm])), dtype=float))
                if nrm == 0.0:
                    vec = np.zeros(blk.dim)
                else:
                    vec = (0.5 * (fp - fm) / nrm) * v
                vals = np.concatenate([vec, [0.5 * (fp + fm)]])
            else:
                w, vecs = np.linalg.eigh(a)
                fw = np.asarray(f(w), dtype=float)
                m = (vecs * fw) @ vecs.T
                vals = 0.5 * (m + m.T)
            if not np.all(np.isfinite(vals)):
                raise ConeDomainError(
                    "scalar function is undefined or overflows on the spectrum"
                )
            out.append(vals)
    return _wrap(x.structure, out)


def exp_element(x: AlgebraElement) -> AlgebraElement:
    """Spectral exponential; maps the whole algebra into the cone interior."""
    return lowner(np.exp, x)


def ln_element(x: AlgebraElement) -> AlgebraElement:
    """Spectral logarithm, defined on the cone interior.

    Eigenvalues at or below ``INTERIOR_RTOL * max(1, ||x||)`` raise
    :class:`ConeDomainError` rather than being clamped.
    """
    lam_min = min_eigenvalue(x)
    if lam_min <= INTERIOR_RTOL * max(1.0, norm(x)):
        raise ConeDomainError(
            f"logarithm requires an interior point; min eigenvalue {lam_min:.3e}"
        )
    return lowner(np.log, x)


def min_eigenvalue(x: AlgebraElement) -> float:
    """Smallest eigenvalue; equals min over trace-one cone points s of <x, s>."""
    vals = []
    for blk, a in zip(x.structure.blocks, x.blocks):
        if blk.kind == "orthant":
            vals.append(float(a.min()))
        elif blk.kind == "soc":
            vals.append(float(a[-1]) - float(np.linalg.norm(a[:-1])))
        else:
            vals.append(float(np.linalg.eigvalsh(a)[0]))
    return min(vals)


def max_eigenvalue(x: AlgebraElement) -> float:
    vals = []
    for blk, a in zip(x.structure.blocks, x.blocks):
        if blk.kind == "orthant":
            vals.append(float(a.max()))
        elif blk.kind == "soc":
            vals.append(float(a[-1]) + float(np.linalg.norm(a[:-1])))
        else:
            vals.append(float(np.linalg.eigvalsh(a)[-1]))
    return max(vals)


def in_cone(x: AlgebraElement, tol: float = 1e-9) -> bool:
    """True iff all eigenvalues are >= -tol."""
    return min_eigenvalue(x) >= -tol


def in_interior(x: AlgebraElement, tol: float = 1e-9) -> bool:
    """True iff all eigenvalues are > tol."""
    return min_eigenvalue(x) > tol


def cone_leq(x: AlgebraElement, y: AlgebraElement, tol: float = 1e-9) -> bool:
    """Cone order: x <= y iff y - x lies in the cone."""
    return in_cone(y - x, tol)


# ---------------------------------------------------------------------------
# Random sampling
#
# All samplers draw from a caller-supplied numpy Generator (PCG64 via
# numpy.random.default_rng in this project); a fixed seed reproduces the
# exact output stream.
# ---------------------------------------------------------------------------


def _sphere(count: int, d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((count, d))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _haar_orthogonal(count: int, n: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((count, n, n))
    q, r = np.linalg.qr(g)
    sign = np.sign(np.einsum("tii->ti", r))
    sign[sign == 0.0] = 1.0
    return q * sign[:, None, :]


def _assemble_from_spectrum(
    structure: ConeStructure, lams: np.ndarray, rng: np.random.Generator
) -> list[np.ndarray]:
    # lams: (count, rank), consumed blockwise; frames are drawn uniformly.
    count = lams.shape[0]
    arrays = []
    pos = 0
    for blk in structure.blocks:
        lam = lams[:, pos : pos + blk.rank]
        pos += blk.rank
        if blk.kind == "orthant":
            arrays.append(np.array(lam))
        elif blk.kind == "soc":
            u = _sphere(count, blk.dim, rng)
            vec = (0.5 * (lam[:, 0] - lam[:, 1]))[:, None] * u
            s = 0.5 * (lam[:, 0] + lam[:, 1])
            arrays.append(np.concatenate([vec, s[:, None]], axis=1))
        else:
            q = _haar_orthogonal(count, blk.dim, rng)
            m = np.einsum("tij,tj,tkj->tik", q, lam, q)
            arrays.append(0.5 * (m + np.swapaxes(m, 1, 2)))
    return arrays


def random_bounded_loss_batch(
    structure: ConeStructure, count: int, rng: np.random.Generator
) -> list[np.ndarray]:
    """Batch of loss elements with eigenvalues uniform in [-1, 1] on random frames.

    Returns one array per block with leading axis ``count``.
    """
    lams = rng.uniform(-1.0, 1.0, size=(count, structure.rank))
    return _assemble_from_spectrum(structure, lams, rng)


def random_bounded_loss(structure: ConeStructure, rng: np.random.Generator) -> AlgebraElement:
    """One loss element with spectrum in [-1, 1]; satisfies -e <= m <= e."""
    return batch_row(structure, random_bounded_loss_batch(structure, 1, rng), 0)


def random_trace_one_batch(
    structure: ConeStructure, count: int, rng: np.random.Generator
) -> list[np.ndarray]:
    """Batch of trace-one cone points with spectrum uniform on the simplex."""
    lams = rng.dirichlet(np.ones(structure.rank), size=count)
    return _assemble_from_spectrum(structure, lams, rng)


def random_trace_one(structure: ConeStructure, rng: np.random.Generator) -> AlgebraElement:
    """One trace-one point of the cone (almost surely interior)."""
    return batch_row(structure, random_trace_one_batch(structure, 1, rng), 0)


def batch_row(
    structure: ConeStructure, arrays: Sequence[np.ndarray], i: int
) -> AlgebraElement:
    """Materialize row ``i`` of a per-block batch as a single element."""
    return element(structure, [a[i] for a in arrays])


# ---------------------------------------------------------------------------
# JSON schema
# ---------------------------------------------------------------------------


def structure_to_json(structure: ConeStructure) -> list[dict]:
    """Structure as a list of {"kind": ..., "dim": ...} records."""
    return [{"kind": b.kind, "dim": b.dim} for b in structure.blocks]


def structure_from_json(data: Sequence[dict]) -> ConeStructure:
    return ConeStructure(tuple(Block(str(d["kind"]), int(d["dim"])) for d in data))


def element_to_json(x: AlgebraElement) -> list[list[float]]:
    """Block-aligned flat arrays; PSD blocks as the row-major upper triangle."""
    out = []
    for blk, a in zip(x.structure.blocks, x.blocks):
        if blk.kind == "psd":
            iu = np.triu_indices(blk.dim)
            out.append([float(v) for v in a[iu]])
        else:
            out.append([float(v) for v in a])
    return out


def element_from_json(structure: ConeStructure, data: Sequence[Sequence[float]]) -> AlgebraElement:
    if len(data) != len(structure.blocks):
        raise ValueError(f"expected {len(structure.blocks)} blocks, got {len(data)}")
    arrays = []
    for blk, flat in zip(structure.blocks, data):
        flat = np.asarray(flat, dtype=float)
        if flat.shape != (blk.ambient_dim,):
            raise ValueError(f"block {blk} expects {blk.ambient_dim} coefficients")
        if blk.kind == "psd":
            m = np.zeros((blk.dim, blk.dim))
            iu = np.triu_indices(blk.dim)
            m[iu] = flat
            m = m + np.triu(m, k=1).T
            arrays.append(m)
        else:
            arrays.append(flat)
    return element(structure, arrays)
