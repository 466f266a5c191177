"""The ten rig-witness families over a fixed fusion-rules table.

Eight families (additive associativity/unit/commutativity, multiplicative
units, both distributivities, annihilation) only rearrange tags, so they are
constructed directly as basic witnesses.  Multiplicative associativity and
commutativity carry the physical content: a :class:`RigModel` supplies their
values on non-unit generators, and all other instances are derived by

1. transporting each argument to its canonical normal form (a left-nested sum
   of generators) along the basic witness from
   :func:`~fusionrig.rig_construction.canonical_decomposition`, then
2. structural recursion on the normal form: sum slots are split leftmost
   first through the distributivity reductions, unit slots are removed by the
   unit-witness formulas, zero slots give the unique empty witness, and the
   generator-only base case reads the model's tables.

Derived witnesses are memoized per model, keyed by the endpoints.
"""

from __future__ import annotations

import json

import numpy as np
import scipy.sparse as sp

from .fusion_rules import FusionRules, rules_to_json, parse_rules
from .witness_core import (
    Leaf,
    ProdTag,
    RawElement,
    SumTag,
    Witness,
    WitnessError,
    check_same_rules,
    compose,
    compose_chain,
    identity_witness,
    invert,
    matrix_from_json,
    matrix_to_json,
    witness_from_label_map,
)
from .rig_construction import (
    canonical_decomposition,
    normal_form_of_gens,
    raw_add,
    raw_generator,
    raw_mul,
    raw_one,
    raw_zero,
    witness_add,
    witness_mul,
)


class MissingBaseEntry(WitnessError):
    """A generator-level associativity or braiding entry is absent."""


# ---------------------------------------------------------------------------
# Tag-manipulation witnesses


def alpha_plus(A: RawElement, B: RawElement, C: RawElement) -> Witness:
    """(A+B)+C -> A+(B+C), re-nesting the side tags."""
    check_same_rules(A, B, C)
    domain = raw_add(raw_add(A, B), C)
    codomain = raw_add(A, raw_add(B, C))

    def image(k, lab):
        if lab.side == 1:  # (c,1) -> ((c,1),1)
            return SumTag(SumTag(lab.inner, 1), 1)
        inner = lab.inner
        if inner.side == 0:  # ((a,0),0) -> (a,0)
            return SumTag(inner.inner, 0)
        return SumTag(SumTag(inner.inner, 0), 1)  # ((b,1),0) -> ((b,0),1)

    return witness_from_label_map(domain, codomain, image)


def gamma_plus(A: RawElement, B: RawElement) -> Witness:
    """A+B -> B+A, flipping side tags."""
    check_same_rules(A, B)
    domain = raw_add(A, B)
    codomain = raw_add(B, A)
    return witness_from_label_map(
        domain, codomain, lambda k, lab: SumTag(lab.inner, 1 - lab.side)
    )


def unit_plus(A: RawElement):
    """(lambda, rho): 0+A -> A strips the side-1 tag, A+0 -> A the side-0 tag."""
    zero = raw_zero(A.rules)
    lam = witness_from_label_map(raw_add(zero, A), A, lambda k, lab: lab.inner)
    rho = witness_from_label_map(raw_add(A, zero), A, lambda k, lab: lab.inner)
    return lam, rho


def unit_times(rules: FusionRules, A: RawElement):
    """(lambda, rho): 1xA -> A and Ax1 -> A, stripping the product tags."""
    if A.rules != rules:
        raise WitnessError("element not governed by the given rules")
    one = raw_one(rules)
    lam = witness_from_label_map(raw_mul(one, A), A, lambda k, lab: lab.right)
    rho = witness_from_label_map(raw_mul(A, one), A, lambda k, lab: lab.left)
    return lam, rho


def delta(A: RawElement, B: RawElement, C: RawElement) -> Witness:
    """Left distributivity Ax(B+C) -> (AxB)+(AxC)."""
    check_same_rules(A, B, C)
    domain = raw_mul(A, raw_add(B, C))
    codomain = raw_add(raw_mul(A, B), raw_mul(A, C))

    def image(k, lab):
        side = lab.right.side
        return SumTag(ProdTag(lab.left, lab.right.inner, lab.i, lab.j, lab.t, lab.k), side)

    return witness_from_label_map(domain, codomain, image)


def delta_sharp(A: RawElement, B: RawElement, C: RawElement) -> Witness:
    """Right distributivity (B+C)xA -> (BxA)+(CxA).

    Argument order matches :func:`delta`: ``A`` is the undistributed factor,
    ``B`` and ``C`` the summands.
    """
    check_same_rules(A, B, C)
    domain = raw_mul(raw_add(B, C), A)
    codomain = raw_add(raw_mul(B, A), raw_mul(C, A))

    def image(k, lab):
        side = lab.left.side
        return SumTag(ProdTag(lab.left.inner, lab.right, lab.i, lab.j, lab.t, lab.k), side)

    return witness_from_label_map(domain, codomain, image)


def epsilon(A: RawElement) -> Witness:
    """Ax0 -> 0; both sides are the all-empty element, so this is 1_0."""
    domain = raw_mul(A, raw_zero(A.rules))
    return Witness(domain, raw_zero(A.rules), [sp.csr_matrix((0, 0))] * (A.rules.q + 1))


# ---------------------------------------------------------------------------
# The model: generator-level associativity and braiding data


class RigModel:
    """Fusion rules plus base tables for the non-tag-manipulation witnesses.

    ``alpha_base[(i,j,k)]`` is the witness (x_i x_j) x_k -> x_i (x_j x_k) and
    ``gamma_base[(i,j)]`` the witness x_i x_j -> x_j x_i, for indices 1..q.
    """

    def __init__(self, rules: FusionRules, alpha_base: dict, gamma_base: dict):
        self.rules = rules
        self.alpha_base = dict(alpha_base)
        self.gamma_base = dict(gamma_base)
        self._memo: dict = {}
        for (i, j, k), w in self.alpha_base.items():
            gi, gj, gk = (raw_generator(rules, n) for n in (i, j, k))
            if w.domain != raw_mul(raw_mul(gi, gj), gk) or w.codomain != raw_mul(
                gi, raw_mul(gj, gk)
            ):
                raise WitnessError("alpha base entry (%d,%d,%d) has wrong endpoints" % (i, j, k))
        for (i, j), w in self.gamma_base.items():
            gi, gj = raw_generator(rules, i), raw_generator(rules, j)
            if w.domain != raw_mul(gi, gj) or w.codomain != raw_mul(gj, gi):
                raise WitnessError("gamma base entry (%d,%d) has wrong endpoints" % (i, j))

    def base_unitarity_defect(self) -> float:
        ws = list(self.alpha_base.values()) + list(self.gamma_base.values())
        return max((w.unitarity_defect() for w in ws), default=0.0)

    def _memoized(self, key, build):
        try:
            return self._memo[key]
        except KeyError:
            value = build()
            self._memo[key] = value
            return value


def model_to_json(model: RigModel) -> dict:
    return {
        "rules": rules_to_json(model.rules),
        "alpha": {
            "%d,%d,%d" % key: [matrix_to_json(m) for m in w.mats]
            for key, w in sorted(model.alpha_base.items())
        },
        "gamma": {
            "%d,%d" % key: [matrix_to_json(m) for m in w.mats]
            for key, w in sorted(model.gamma_base.items())
        },
    }


def model_from_json(obj: dict) -> RigModel:
    rules = parse_rules(json.dumps(obj["rules"]))
    alpha = {}
    for key, mats in obj.get("alpha", {}).items():
        i, j, k = (int(s) for s in key.split(","))
        gi, gj, gk = (raw_generator(rules, n) for n in (i, j, k))
        alpha[(i, j, k)] = Witness(
            raw_mul(raw_mul(gi, gj), gk),
            raw_mul(gi, raw_mul(gj, gk)),
            [matrix_from_json(m) for m in mats],
        )
    gamma = {}
    for key, mats in obj.get("gamma", {}).items():
        i, j = (int(s) for s in key.split(","))
        gi, gj = raw_generator(rules, i), raw_generator(rules, j)
        gamma[(i, j)] = Witness(
            raw_mul(gi, gj), raw_mul(gj, gi), [matrix_from_json(m) for m in mats]
        )
    return RigModel(rules, alpha, gamma)


def save_model(model: RigModel, path) -> None:
    with open(path, "w") as fh:
        json.dump(model_to_json(model), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_model(path) -> RigModel:
    with open(path) as fh:
        return model_from_json(json.load(fh))


# ---------------------------------------------------------------------------
# Derived multiplicative commutativity and associativity
#
# The recursions work on normal forms represented by their generator lists
# (ascending); NF(gens) below is the left-nested sum built by
# normal_form_of_gens.  Empty witnesses between all-zero-dimensional products
# are handled first, so every reduction step strictly shrinks one slot.


def _empty_witness(domain: RawElement, codomain: RawElement) -> Witness:
    n = domain.rules.q + 1
    return Witness(domain, codomain, [sp.csr_matrix((0, 0))] * n)


def _gamma_nf(model: RigModel, gens_n: tuple, gens_m: tuple) -> Witness:
    key = ("gamma-nf", gens_n, gens_m)

    def build():
        rules = model.rules
        N = normal_form_of_gens(rules, gens_n)
        M = normal_form_of_gens(rules, gens_m)
        if not gens_n or not gens_m:
            return _empty_witness(raw_mul(N, M), raw_mul(M, N))
        if len(gens_n) >= 2:
            # gamma_{P+g, M} = delta#_{M,P,g} * (gamma_{P,M} + gamma_{g,M}) * delta_{M,P,g}^{-1}
            P = normal_form_of_gens(rules, gens_n[:-1])
            g = raw_generator(rules, gens_n[-1])
            inner = witness_add(
                _gamma_nf(model, gens_n[:-1], gens_m),
                _gamma_nf(model, gens_n[-1:], gens_m),
            )
            return compose_chain(delta_sharp(M, P, g), inner, invert(delta(M, P, g)))
        if len(gens_m) >= 2:
            # gamma_{N, P+g} = delta_{N,P,g} * (gamma_{N,P} + gamma_{N,g}) * delta#_{N,P,g}^{-1}
            P = normal_form_of_gens(rules, gens_m[:-1])
            g = raw_generator(rules, gens_m[-1])
            inner = witness_add(
                _gamma_nf(model, gens_n, gens_m[:-1]),
                _gamma_nf(model, gens_n, gens_m[-1:]),
            )
            return compose_chain(delta(N, P, g), inner, invert(delta_sharp(N, P, g)))
        i, j = gens_n[0], gens_m[0]
        if i == 0:
            lam, rho = unit_times(rules, M)
            return compose(lam, invert(rho))  # gamma_{1,M}
        if j == 0:
            lam, rho = unit_times(rules, N)
            return compose(rho, invert(lam))  # gamma_{N,1}
        try:
            return model.gamma_base[(i, j)]
        except KeyError:
            raise MissingBaseEntry("gamma base entry (%d,%d) missing" % (i, j)) from None

    return model._memoized(key, build)


def gamma_times(model: RigModel, A: RawElement, B: RawElement) -> Witness:
    """Braiding AxB -> BxA derived from the model's generator table."""
    check_same_rules(A, B)
    if A.rules != model.rules:
        raise WitnessError("elements not governed by the model's rules")
    key = ("gamma", A, B)

    def build():
        _, chi_a = canonical_decomposition(A)
        _, chi_b = canonical_decomposition(B)
        gens_a = _gens_of_counts(A.dims)
        gens_b = _gens_of_counts(B.dims)
        core = _gamma_nf(model, gens_a, gens_b)
        return compose_chain(
            witness_mul(chi_a, chi_b), core, invert(witness_mul(chi_b, chi_a))
        )

    return model._memoized(key, build)


def _gens_of_counts(counts) -> tuple:
    return tuple(i for i, c in enumerate(counts) for _ in range(c))


def _alpha_nf(model: RigModel, g1: tuple, g2: tuple, g3: tuple) -> Witness:
    key = ("alpha-nf", g1, g2, g3)

    def build():
        rules = model.rules
        A = normal_form_of_gens(rules, g1)
        B = normal_form_of_gens(rules, g2)
        C = normal_form_of_gens(rules, g3)
        if not g1 or not g2 or not g3:
            return _empty_witness(raw_mul(raw_mul(A, B), C), raw_mul(A, raw_mul(B, C)))
        if len(g1) >= 2:
            # (P+g)B)C -> ((PB)+(gB))C -> (PB)C+(gB)C -> P(BC)+g(BC) -> (P+g)(BC)
            P = normal_form_of_gens(rules, g1[:-1])
            g = raw_generator(rules, g1[-1])
            inner = witness_add(
                _alpha_nf(model, g1[:-1], g2, g3), _alpha_nf(model, g1[-1:], g2, g3)
            )
            return compose_chain(
                witness_mul(delta_sharp(B, P, g), identity_witness(C)),
                delta_sharp(C, raw_mul(P, B), raw_mul(g, B)),
                inner,
                invert(delta_sharp(raw_mul(B, C), P, g)),
            )
        if len(g2) >= 2:
            # (A(P+g))C -> ((AP)+(Ag))C -> (AP)C+(Ag)C -> A(PC)+A(gC)
            #           -> A((PC)+(gC)) -> A((P+g)C)
            P = normal_form_of_gens(rules, g2[:-1])
            g = raw_generator(rules, g2[-1])
            inner = witness_add(
                _alpha_nf(model, g1, g2[:-1], g3), _alpha_nf(model, g1, g2[-1:], g3)
            )
            return compose_chain(
                witness_mul(delta(A, P, g), identity_witness(C)),
                delta_sharp(C, raw_mul(A, P), raw_mul(A, g)),
                inner,
                invert(delta(A, raw_mul(P, C), raw_mul(g, C))),
                invert(witness_mul(identity_witness(A), delta_sharp(C, P, g))),
            )
        if len(g3) >= 2:
            # (AB)(P+g) -> (AB)P+(AB)g -> A(BP)+A(Bg) -> A((BP)+(Bg)) -> A(B(P+g))
            P = normal_form_of_gens(rules, g3[:-1])
            g = raw_generator(rules, g3[-1])
            inner = witness_add(
                _alpha_nf(model, g1, g2, g3[:-1]), _alpha_nf(model, g1, g2, g3[-1:])
            )
            return compose_chain(
                delta(raw_mul(A, B), P, g),
                inner,
                invert(delta(A, raw_mul(B, P), raw_mul(B, g))),
                invert(witness_mul(identity_witness(A), delta(B, P, g))),
            )
        i, j, k = g1[0], g2[0], g3[0]
        if i == 0:
            lam_b, _ = unit_times(rules, B)
            lam_bc, _ = unit_times(rules, raw_mul(B, C))
            return compose(witness_mul(lam_b, identity_witness(C)), invert(lam_bc))
        if j == 0:
            _, rho_a = unit_times(rules, A)
            lam_c, _ = unit_times(rules, C)
            return compose(
                witness_mul(rho_a, identity_witness(C)),
                invert(witness_mul(identity_witness(A), lam_c)),
            )
        if k == 0:
            _, rho_ab = unit_times(rules, raw_mul(A, B))
            _, rho_b = unit_times(rules, B)
            return compose(rho_ab, invert(witness_mul(identity_witness(A), rho_b)))
        try:
            return model.alpha_base[(i, j, k)]
        except KeyError:
            raise MissingBaseEntry("alpha base entry (%d,%d,%d) missing" % (i, j, k)) from None

    return model._memoized(key, build)


def alpha_times(model: RigModel, A: RawElement, B: RawElement, C: RawElement) -> Witness:
    """Associativity (AxB)xC -> Ax(BxC) derived from the model's generator table."""
    check_same_rules(A, B, C)
    if A.rules != model.rules:
        raise WitnessError("elements not governed by the model's rules")
    key = ("alpha", A, B, C)

    def build():
        _, chi_a = canonical_decomposition(A)
        _, chi_b = canonical_decomposition(B)
        _, chi_c = canonical_decomposition(C)
        core = _alpha_nf(
            model, _gens_of_counts(A.dims), _gens_of_counts(B.dims), _gens_of_counts(C.dims)
        )
        return compose_chain(
            witness_mul(witness_mul(chi_a, chi_b), chi_c),
            core,
            invert(witness_mul(chi_a, witness_mul(chi_b, chi_c))),
        )

    return model._memoized(key, build)


def beta(model: RigModel, A: RawElement, B: RawElement) -> Witness:
    """Double braiding AxB -> AxB; its distance from identity measures non-symmetry."""
    return compose(gamma_times(model, A, B), gamma_times(model, B, A))
