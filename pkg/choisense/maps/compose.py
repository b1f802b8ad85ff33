"""
choisense.maps.compose
======================

Tensor products of Kraus families, and the sufficient condition under
which the product of two extreme maps stays extreme:

- F is a map on a single M(d) with Hermitian operators and {V_i*V_j}
  independent (extreme in the unital set), and
- G has the pairs (W_i*W_k, W_kW_i*) independent,

then F⊗G has independent pairs as well, with Choi rank |F|·|G|.

Usage
-----
>>> from choisense.catalog.cases import ohno_hermitian, ohno_3x3_rank4
>>> case = compose_extremal(ohno_hermitian(3).family, ohno_3x3_rank4().family)
>>> case.expected.choi_rank
12
"""

from __future__ import annotations

from typing import Optional

from choisense.algebra.linalg import kron
from choisense.catalog.case import CatalogCase, Expected
from choisense.certify.certificate import certify
from choisense.certify.criteria import bilinear_independence, gram_independence, parthasarathy_bound
from choisense.config import DEFAULT_SETTINGS, CertifySettings
from choisense.maps.cpmap import KrausFamily, MarginalPair, marginals

HYPOTHESES = ("square", "hermitian", "gram_independence", "bilinear_independence")


class HypothesisError(ValueError):
    """Raised when a precondition of :func:`compose_extremal` fails; ``hypothesis`` names it."""

    def __init__(self, hypothesis: str, message: str) -> None:
        if hypothesis not in HYPOTHESES:
            raise ValueError(f"unknown hypothesis {hypothesis!r}")
        super().__init__(f"{hypothesis}: {message}")
        self.hypothesis = hypothesis


def tensor_label(left: str, right: str) -> str:
    return f"tensor:{left}×{right}"


def tensor_cpmap(f: KrausFamily, g: KrausFamily) -> KrausFamily:
    """
    Φ⊗Ψ with operators kron(V_i, W_j) in lexicographic (i, j) order.

    :param f: First factor.
    :param g: Second factor.
    :return: Family of size |F|·|G| from M(d1·e1) to M(d2·e2), scale the product of both scales.
    :rtype: KrausFamily
    """
    ops = tuple(kron(v, w) for v in f.ops for w in g.ops)
    return KrausFamily(
        f.d_in * g.d_in,
        f.d_out * g.d_out,
        f.scale * g.scale,
        ops,
        tensor_label(f.label, g.label),
    )


def tensor_marginals(f: KrausFamily, g: KrausFamily) -> MarginalPair:
    """Marginals of F⊗G as Kronecker products of the factor marginals."""
    mf, mg = marginals(f), marginals(g)
    return MarginalPair(kron(mf.left, mg.left), kron(mf.right, mg.right))


def compose_extremal(
    f: KrausFamily,
    g: KrausFamily,
    recertify: bool = True,
    mode: Optional[str] = None,
    settings: CertifySettings = DEFAULT_SETTINGS,
    verbose: bool = False,
) -> CatalogCase:
    """
    Build F⊗G as a catalog case after checking the hypotheses in order.

    The expected verdict is ``extreme-unital-set`` when G itself passes the
    {W_i*W_k} test (both factors are then extreme in their unital sets) and
    ``extreme-doubly-constrained`` otherwise.

    :param f: Square family with Hermitian operators and {V_i*V_j} independent.
    :param g: Family with the pairs (W_i*W_k, W_kW_i*) independent.
    :param recertify: Certify the product before returning it.
    :param mode: Certification mode for the product (None for the size-based default).
    :return: The product as a catalog case with expected choi_rank |F|·|G|.
    :rtype: CatalogCase
    :raises HypothesisError: On the first failed precondition, or when the
        re-certified product is not independent in the pair sense.
    """
    if f.d_in != f.d_out:
        raise HypothesisError("square", f"first factor maps M({f.d_in}) to M({f.d_out})")
    if not f.all_hermitian():
        raise HypothesisError("hermitian", f"{f.label or 'first factor'} has non-Hermitian Kraus operators")
    if not gram_independence(f).independent:
        raise HypothesisError("gram_independence", f"{{V_i*V_j}} is dependent for {f.label or 'first factor'}")
    if not bilinear_independence(g).independent:
        raise HypothesisError(
            "bilinear_independence", f"pairs (W_i*W_k, W_kW_i*) are dependent for {g.label or 'second factor'}"
        )

    product = tensor_cpmap(f, g)
    verdict = "extreme-unital-set" if gram_independence(g).independent else "extreme-doubly-constrained"
    case = CatalogCase(
        id=product.label,
        params={},
        family=product,
        expected=Expected(
            choi_rank=f.size * g.size,
            bound=parthasarathy_bound(product.d_in, product.d_out),
            verdict=verdict,
            marginals=tensor_marginals(f, g),
            bilinear_independent=True,
        ),
    )
    if recertify:
        cert = certify(product, case.expected.marginals, case.id, mode=mode, settings=settings, verbose=verbose)
        if not cert.bilinear_independent:
            raise HypothesisError("bilinear_independence", f"re-certification of {case.id} found a dependence")
    return case


def bound_attainment_check(k: int) -> bool:
    """
    ⌊√((5k)² + (5k)² − 1)⌋ = 7k, i.e. (7k)² ≤ 50k² − 1 < (7k+1)².

    :raises ValueError: If k is outside 3..14.
    """
    if not 3 <= k <= 14:
        raise ValueError(f"bound_attainment_check covers 3 ≤ k ≤ 14, got k={k}")
    return parthasarathy_bound(5 * k, 5 * k) == 7 * k
