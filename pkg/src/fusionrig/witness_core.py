"""Witness-frame layer: tagged basis labels, raw elements, marked witnesses.

A raw element is a (q+1)-tuple of based complex inner-product spaces, each
component given by an ordered list of structurally distinct basis labels.  A
witness between two raw elements is a (q+1)-tuple of unitary matrices, one per
component, and is *marked*: its identity includes both endpoints, so the same
matrices between different endpoint pairs are different witnesses.

Matrices are kept in scipy CSR form.  Almost every structurally built witness
is a (scaled) permutation, so sparse composition keeps long coherence chains
cheap; dense matrices only enter through randomly drawn unitaries on small
spaces.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .fusion_rules import FusionRules

DEFAULT_TOL = 1e-9


class WitnessError(Exception):
    """Base class for witness-layer errors."""


class EndpointMismatch(WitnessError):
    """Composition attempted between witnesses whose endpoints do not chain."""


class RulesMismatch(WitnessError):
    """Operands are governed by different fusion rules."""


class UnknownLabel(WitnessError):
    """A vector refers to a label outside the stated raw element."""


# ---------------------------------------------------------------------------
# Basis labels
#
# Labels are interned: constructing the same tree twice yields the same object,
# which makes structural equality (and dict lookups during matrix assembly)
# effectively pointer comparisons.


class BasisLabel:
    __slots__ = ("_hash",)

    def __hash__(self):
        return self._hash


class Leaf(BasisLabel):
    """The single specified basis vector of generator ``x_i``."""

    __slots__ = ("i",)
    _cache: dict = {}

    def __new__(cls, i: int):
        obj = cls._cache.get(i)
        if obj is None:
            obj = object.__new__(cls)
            obj.i = i
            obj._hash = hash(("leaf", i))
            cls._cache[i] = obj
        return obj

    def __eq__(self, other):
        return self is other or (type(other) is Leaf and other.i == self.i)

    def __repr__(self):
        return "Leaf(%d)" % self.i


class SumTag(BasisLabel):
    """A basis vector of a direct sum: ``inner`` tagged with ``side`` 0 or 1."""

    __slots__ = ("inner", "side")
    _cache: dict = {}

    def __new__(cls, inner: BasisLabel, side: int):
        key = (inner, side)
        obj = cls._cache.get(key)
        if obj is None:
            obj = object.__new__(cls)
            obj.inner = inner
            obj.side = side
            obj._hash = hash(("sum", inner._hash, side))
            cls._cache[key] = obj
        return obj

    def __eq__(self, other):
        return self is other or (
            type(other) is SumTag and other.side == self.side and other.inner == self.inner
        )

    def __repr__(self):
        return "SumTag(%r, %d)" % (self.inner, self.side)


class ProdTag(BasisLabel):
    """A basis vector ``(a, b, i, j, t)`` of component ``k`` of a product.

    ``a`` comes from component ``i`` of the left factor, ``b`` from component
    ``j`` of the right factor, and ``1 <= t <= N[i][j][k]`` selects the copy.
    """

    __slots__ = ("left", "right", "i", "j", "t", "k")
    _cache: dict = {}

    def __new__(cls, left, right, i, j, t, k):
        key = (left, right, i, j, t, k)
        obj = cls._cache.get(key)
        if obj is None:
            obj = object.__new__(cls)
            obj.left, obj.right = left, right
            obj.i, obj.j, obj.t, obj.k = i, j, t, k
            obj._hash = hash(("prod", left._hash, right._hash, i, j, t, k))
            cls._cache[key] = obj
        return obj

    def __eq__(self, other):
        return self is other or (
            type(other) is ProdTag
            and (other.i, other.j, other.t, other.k) == (self.i, self.j, self.t, self.k)
            and other.left == self.left
            and other.right == self.right
        )

    def __repr__(self):
        return "ProdTag(%r, %r, %d, %d, %d, %d)" % (
            self.left, self.right, self.i, self.j, self.t, self.k,
        )


def label_to_json(label: BasisLabel):
    if isinstance(label, Leaf):
        return {"leaf": label.i}
    if isinstance(label, SumTag):
        return {"sum": [label_to_json(label.inner), label.side]}
    return {
        "prod": [
            label_to_json(label.left), label_to_json(label.right),
            label.i, label.j, label.t, label.k,
        ]
    }


def label_from_json(obj) -> BasisLabel:
    if "leaf" in obj:
        return Leaf(obj["leaf"])
    if "sum" in obj:
        inner, side = obj["sum"]
        return SumTag(label_from_json(inner), side)
    left, right, i, j, t, k = obj["prod"]
    return ProdTag(label_from_json(left), label_from_json(right), i, j, t, k)


# ---------------------------------------------------------------------------
# Raw elements


class RawElement:
    """A (q+1)-tuple of ordered basis-label lists under fixed fusion rules."""

    __slots__ = ("rules", "components", "_hash", "_index_maps")

    def __init__(self, rules: FusionRules, components):
        comps = tuple(tuple(c) for c in components)
        if len(comps) != rules.q + 1:
            raise ValueError("expected %d components, got %d" % (rules.q + 1, len(comps)))
        for k, comp in enumerate(comps):
            if len(set(comp)) != len(comp):
                raise ValueError("duplicate labels in component %d" % k)
        self.rules = rules
        self.components = comps
        self._hash = hash((rules.q, comps))
        self._index_maps = None

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other or (
            isinstance(other, RawElement)
            and other._hash == self._hash
            and other.rules == self.rules
            and other.components == self.components
        )

    @property
    def dims(self) -> tuple:
        return tuple(len(c) for c in self.components)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def index_map(self, k: int) -> dict:
        if self._index_maps is None:
            self._index_maps = tuple(
                {lab: idx for idx, lab in enumerate(comp)} for comp in self.components
            )
        return self._index_maps[k]

    def __repr__(self):
        return "RawElement(dims=%r)" % (self.dims,)


def raw_element_to_json(elem: RawElement) -> dict:
    return {"components": [[label_to_json(l) for l in comp] for comp in elem.components]}


def raw_element_from_json(rules: FusionRules, obj: dict) -> RawElement:
    return RawElement(rules, [[label_from_json(l) for l in comp] for comp in obj["components"]])


def check_same_rules(*elems):
    rules = elems[0].rules
    for e in elems[1:]:
        if e.rules != rules:
            raise RulesMismatch("operands have different fusion rules")
    return rules


# ---------------------------------------------------------------------------
# Witnesses


def _csr(mat) -> sp.csr_matrix:
    m = sp.csr_matrix(mat, dtype=np.complex128)
    return m


def max_abs(mat) -> float:
    """Largest entrywise modulus of a sparse matrix (0 for empty)."""
    m = sp.coo_matrix(mat)
    return float(np.abs(m.data).max()) if m.nnz else 0.0


def _identity_mats(dims):
    return tuple(sp.identity(d, dtype=np.complex128, format="csr") for d in dims)


class Witness:
    """A marked tuple (domain, mats, codomain) of component unitaries.

    ``mats[k]`` has shape ``dim(codomain_k) x dim(domain_k)``; column ``l``
    holds the coordinates of the image of the l-th domain basis label in the
    codomain's specified basis.
    """

    __slots__ = ("domain", "codomain", "mats")

    def __init__(self, domain: RawElement, codomain: RawElement, mats):
        check_same_rules(domain, codomain)
        mats = tuple(_csr(m) for m in mats)
        if len(mats) != domain.rules.q + 1:
            raise ValueError("expected %d matrices" % (domain.rules.q + 1))
        for k, m in enumerate(mats):
            want = (len(codomain.components[k]), len(domain.components[k]))
            if m.shape != want:
                raise ValueError(
                    "component %d matrix has shape %r, expected %r" % (k, m.shape, want)
                )
            if want[0] != want[1]:
                raise ValueError("component %d is not square: %r" % (k, want))
        self.domain = domain
        self.codomain = codomain
        self.mats = mats

    @property
    def rules(self) -> FusionRules:
        return self.domain.rules

    def unitarity_defect(self) -> float:
        """Largest entrywise deviation of conj(M)^T M from the identity."""
        worst = 0.0
        for m in self.mats:
            n = m.shape[1]
            if n == 0:
                continue
            d = m.getH() @ m - sp.identity(n, dtype=np.complex128, format="csr")
            worst = max(worst, max_abs(d))
        return worst

    def is_unitary(self, tol: float = DEFAULT_TOL) -> bool:
        return self.unitarity_defect() <= tol

    def __repr__(self):
        return "Witness(%r -> %r)" % (self.domain.dims, self.codomain.dims)


def witness_from_label_map(domain: RawElement, codomain: RawElement, image) -> Witness:
    """Build a witness from a map sending each domain label to codomain terms.

    ``image(k, label)`` returns either a single codomain label (coefficient 1)
    or an iterable of ``(codomain_label, coefficient)`` pairs.  Everything
    structurally built by tag manipulation goes through here.
    """
    mats = []
    for k in range(domain.rules.q + 1):
        dom = domain.components[k]
        cod_index = codomain.index_map(k)
        rows, cols, data = [], [], []
        for col, lab in enumerate(dom):
            out = image(k, lab)
            if isinstance(out, BasisLabel):
                out = ((out, 1.0),)
            for cod_lab, coeff in out:
                try:
                    rows.append(cod_index[cod_lab])
                except KeyError:
                    raise UnknownLabel(
                        "image label %r not in codomain component %d" % (cod_lab, k)
                    ) from None
                cols.append(col)
                data.append(coeff)
        n = len(dom)
        mats.append(
            sp.coo_matrix(
                (np.asarray(data, dtype=np.complex128), (rows, cols)),
                shape=(len(codomain.components[k]), n),
            ).tocsr()
        )
    return Witness(domain, codomain, mats)


def identity_witness(elem: RawElement) -> Witness:
    return Witness(elem, elem, _identity_mats(elem.dims))


def invert(xi: Witness) -> Witness:
    """Inverse witness: endpoints swapped, matrices conjugate-transposed."""
    return Witness(xi.codomain, xi.domain, tuple(m.getH().tocsr() for m in xi.mats))


def compose(xi: Witness, eta: Witness) -> Witness:
    """Diagrammatic composition: apply ``xi`` first, then ``eta``."""
    if xi.codomain != eta.domain:
        raise EndpointMismatch(
            "codomain %r does not match domain %r" % (xi.codomain, eta.domain)
        )
    mats = tuple((me @ mx).tocsr() for mx, me in zip(xi.mats, eta.mats))
    return Witness(xi.domain, eta.codomain, mats)


def compose_chain(*witnesses: Witness) -> Witness:
    out = witnesses[0]
    for w in witnesses[1:]:
        out = compose(out, w)
    return out


def witness_equal(xi: Witness, eta: Witness, tol: float = DEFAULT_TOL) -> bool:
    """Endpoint-structural equality plus entrywise matrix agreement."""
    if xi.domain != eta.domain or xi.codomain != eta.codomain:
        return False
    return witness_distance(xi, eta) <= tol


def witness_distance(xi: Witness, eta: Witness) -> float:
    """Largest entrywise modulus difference across all components."""
    if xi.domain.dims != eta.domain.dims or xi.codomain.dims != eta.codomain.dims:
        raise EndpointMismatch("witnesses act on different dimensions")
    return max((max_abs(a - b) for a, b in zip(xi.mats, eta.mats)), default=0.0)


def identity_defect(xi: Witness) -> float:
    """Largest entrywise deviation of the matrices from identity matrices."""
    worst = 0.0
    for m in xi.mats:
        n = m.shape[1]
        if n == 0:
            continue
        worst = max(worst, max_abs(m - sp.identity(n, dtype=np.complex128, format="csr")))
    return worst


def is_basic(xi: Witness, tol: float = DEFAULT_TOL) -> bool:
    """True iff every component matrix is a permutation matrix to tolerance."""
    for m in xi.mats:
        n = m.shape[0]
        coo = sp.coo_matrix(m)
        keep = np.abs(coo.data) > tol
        rows, cols, data = coo.row[keep], coo.col[keep], coo.data[keep]
        if len(data) != n:
            return False
        if np.any(np.abs(data - 1.0) > tol):
            return False
        if len(set(rows.tolist())) != n or len(set(cols.tolist())) != n:
            return False
    return True


# ---------------------------------------------------------------------------
# Vectors


class Vector:
    """A finitely supported complex combination of labels in one component."""

    __slots__ = ("k", "amplitudes")

    def __init__(self, k: int, amplitudes: dict):
        self.k = k
        self.amplitudes = dict(amplitudes)

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values())))

    def __repr__(self):
        return "Vector(k=%d, %r)" % (self.k, self.amplitudes)


def apply(xi: Witness, v: Vector) -> Vector:
    """Image of ``v`` under the component-``v.k`` matrix of ``xi``."""
    k = v.k
    index = xi.domain.index_map(k)
    x = np.zeros(len(xi.domain.components[k]), dtype=np.complex128)
    for lab, amp in v.amplitudes.items():
        try:
            x[index[lab]] = amp
        except KeyError:
            raise UnknownLabel("label %r not in domain component %d" % (lab, k)) from None
    y = xi.mats[k] @ x
    cod = xi.codomain.components[k]
    return Vector(k, {cod[i]: y[i] for i in np.nonzero(y)[0]})


def apply_to_label(xi: Witness, k: int, label: BasisLabel) -> Vector:
    return apply(xi, Vector(k, {label: 1.0}))


def image_label(xi: Witness, k: int, label: BasisLabel, tol: float = DEFAULT_TOL):
    """For a basic witness, the unique label that ``label`` maps to."""
    out = apply_to_label(xi, k, label)
    big = [(lab, amp) for lab, amp in out.amplitudes.items() if abs(amp) > tol]
    if len(big) != 1 or abs(big[0][1] - 1.0) > tol:
        raise WitnessError("witness is not basic at %r" % label)
    return big[0][0]


# ---------------------------------------------------------------------------
# Serialization


def matrix_to_json(m) -> list:
    dense = np.asarray(sp.csr_matrix(m).todense())
    return [[[float(z.real), float(z.imag)] for z in row] for row in dense]


def matrix_from_json(rows) -> sp.csr_matrix:
    if len(rows) == 0:
        return _csr(np.zeros((0, 0), dtype=np.complex128))
    arr = np.array(
        [[complex(re, im) for re, im in row] for row in rows], dtype=np.complex128
    )
    if arr.ndim == 1:  # all rows empty
        arr = arr.reshape((len(rows), 0))
    return _csr(arr)


def witness_to_json(xi: Witness) -> dict:
    return {
        "domain": raw_element_to_json(xi.domain),
        "codomain": raw_element_to_json(xi.codomain),
        "mats": [matrix_to_json(m) for m in xi.mats],
    }


def witness_from_json(rules: FusionRules, obj: dict) -> Witness:
    return Witness(
        raw_element_from_json(rules, obj["domain"]),
        raw_element_from_json(rules, obj["codomain"]),
        [matrix_from_json(m) for m in obj["mats"]],
    )


def random_unitary(n: int, rng: np.random.Generator) -> sp.csr_matrix:
    """Haar-ish unitary from QR of a complex Gaussian matrix, phase-fixed."""
    if n == 0:
        return _csr(np.zeros((0, 0)))
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    qmat, r = np.linalg.qr(z)
    d = np.diagonal(r)
    qmat = qmat * (d / np.abs(d))
    return _csr(qmat)


def random_witness(domain: RawElement, codomain: RawElement, rng: np.random.Generator) -> Witness:
    """A uniformly random unitary witness between same-dimension endpoints."""
    if domain.dims != codomain.dims:
        raise EndpointMismatch("random witness needs matching dimensions")
    return Witness(domain, codomain, tuple(random_unitary(d, rng) for d in domain.dims))
