"""The raw algebra: constants, tagged sums and products, canonical form.

Sums tag each basis label with its side; products tag pairs of labels with the
component indices of their factors and a copy index ``t``.  Sums and products
of witnesses leave all tags fixed (Tag Invariance) and act through the operand
witnesses only.

Canonical label orderings (fixed so matrices are deterministic):

* sum component ``k``: all side-0 labels in the left operand's order, then all
  side-1 labels in the right operand's order;
* product component ``k``: lexicographic by ``(i, j, t, position of a in the
  left factor's i-list, position of b in the right factor's j-list)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .fusion_rules import FusionRules
from .witness_core import (
    Leaf,
    ProdTag,
    RawElement,
    SumTag,
    Witness,
    check_same_rules,
    identity_witness,
    witness_from_label_map,
)


def raw_zero(rules: FusionRules) -> RawElement:
    return RawElement(rules, [() for _ in range(rules.q + 1)])


def raw_generator(rules: FusionRules, i: int) -> RawElement:
    if not 0 <= i <= rules.q:
        raise IndexError("generator index %d out of range 0..%d" % (i, rules.q))
    return RawElement(
        rules, [(Leaf(i),) if k == i else () for k in range(rules.q + 1)]
    )


def raw_one(rules: FusionRules) -> RawElement:
    return raw_generator(rules, 0)


@dataclass(frozen=True)
class RawConstants:
    zero: RawElement
    one: RawElement
    rules: FusionRules

    def generator(self, i: int) -> RawElement:
        return raw_generator(self.rules, i)


def raw_constants(rules: FusionRules) -> RawConstants:
    return RawConstants(zero=raw_zero(rules), one=raw_one(rules), rules=rules)


def raw_add(A: RawElement, B: RawElement) -> RawElement:
    rules = check_same_rules(A, B)
    comps = []
    for k in range(rules.q + 1):
        comps.append(
            tuple(SumTag(a, 0) for a in A.components[k])
            + tuple(SumTag(b, 1) for b in B.components[k])
        )
    return RawElement(rules, comps)


def _product_blocks(rules: FusionRules, A: RawElement, B: RawElement, k: int):
    """Ordered (i, j, t) blocks making up component k of A x B."""
    for i in range(rules.q + 1):
        for j in range(rules.q + 1):
            for t in range(1, rules.N[i][j][k] + 1):
                yield i, j, t


def raw_mul(A: RawElement, B: RawElement) -> RawElement:
    rules = check_same_rules(A, B)
    comps = []
    for k in range(rules.q + 1):
        labels = []
        for i, j, t in _product_blocks(rules, A, B, k):
            for a in A.components[i]:
                for b in B.components[j]:
                    labels.append(ProdTag(a, b, i, j, t, k))
        comps.append(tuple(labels))
    return RawElement(rules, comps)


def witness_add(xi: Witness, eta: Witness) -> Witness:
    """Componentwise direct sum; block-diagonal in canonical sum order."""
    check_same_rules(xi.domain, eta.domain)
    domain = raw_add(xi.domain, eta.domain)
    codomain = raw_add(xi.codomain, eta.codomain)
    mats = []
    for mx, me in zip(xi.mats, eta.mats):
        n = mx.shape[0] + me.shape[0]
        if n == 0:
            mats.append(sp.csr_matrix((0, 0), dtype=np.complex128))
        else:
            mats.append(sp.block_diag((mx, me), format="csr", dtype=np.complex128))
    return Witness(domain, codomain, mats)


def witness_mul(xi: Witness, eta: Witness) -> Witness:
    """Tensor on each (i, j, t) block: Kronecker of the factor matrices."""
    check_same_rules(xi.domain, eta.domain)
    rules = xi.rules
    domain = raw_mul(xi.domain, eta.domain)
    codomain = raw_mul(xi.codomain, eta.codomain)
    mats = []
    for k in range(rules.q + 1):
        rows, cols, data = [], [], []
        row_off = col_off = 0
        for i, j, t in _product_blocks(rules, xi.domain, eta.domain, k):
            block = sp.coo_matrix(sp.kron(xi.mats[i], eta.mats[j]))
            rows.append(block.row + row_off)
            cols.append(block.col + col_off)
            data.append(block.data)
            row_off += block.shape[0]
            col_off += block.shape[1]
        shape = (len(codomain.components[k]), len(domain.components[k]))
        if rows:
            mats.append(
                sp.coo_matrix(
                    (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
                    shape=shape,
                ).tocsr()
            )
        else:
            mats.append(sp.csr_matrix(shape, dtype=np.complex128))
    return Witness(domain, codomain, mats)


def normal_form(rules: FusionRules, counts) -> RawElement:
    """Left-nested sum of generators, indices non-decreasing, per ``counts``."""
    gens = [i for i in range(rules.q + 1) for _ in range(counts[i])]
    return normal_form_of_gens(rules, gens)


def normal_form_of_gens(rules: FusionRules, gens) -> RawElement:
    if not gens:
        return raw_zero(rules)
    out = raw_generator(rules, gens[0])
    for i in gens[1:]:
        out = raw_add(out, raw_generator(rules, i))
    return out


def canonical_decomposition(A: RawElement):
    """Counts of generators in A plus the basic witness onto its normal form.

    The witness maps the l-th label of each component to the l-th label of the
    normal form (order-preserving), so its matrices are identities; only the
    marking differs.
    """
    counts = A.dims
    target = normal_form(A.rules, counts)
    chi = Witness(
        A, target, tuple(sp.identity(d, dtype=np.complex128, format="csr") for d in counts)
    )
    return counts, chi


def tag_of_sum_label(label) -> int:
    if not isinstance(label, SumTag):
        raise ValueError("not a sum label: %r" % label)
    return label.side


def prod_tags(label) -> tuple:
    if not isinstance(label, ProdTag):
        raise ValueError("not a product label: %r" % label)
    return (label.i, label.j, label.t, label.k)


__all__ = [
    "raw_zero",
    "raw_one",
    "raw_generator",
    "raw_constants",
    "RawConstants",
    "raw_add",
    "raw_mul",
    "witness_add",
    "witness_mul",
    "normal_form",
    "normal_form_of_gens",
    "canonical_decomposition",
    "tag_of_sum_label",
    "prod_tags",
    "identity_witness",
    "witness_from_label_map",
]
