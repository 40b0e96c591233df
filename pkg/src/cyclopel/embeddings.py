"""Certified complex embeddings of cyclotomic elements.

sigma_n sends zeta_m to exp(2 pi i n / m).  Enclosures are rectangles with
exact dyadic endpoints computed through mpmath's outward-rounded interval
arithmetic; signs are certified by exact zero tests plus precision doubling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from mpmath import iv

from .cyclotomic import Cyclo, real_embedding_reps
from .errors import NotRealElement, NotUnit, PrecisionExhausted

__all__ = [
    "DEFAULT_PRECISION",
    "PRECISION_CAP",
    "ComplexInterval",
    "SignVector",
    "certified_sign_im",
    "certified_sign_real",
    "embed",
    "is_totally_positive",
    "sign_vector",
]

DEFAULT_PRECISION = 64
PRECISION_CAP = 4096


def _mpf_to_fraction(raw) -> Fraction:
    """Exact value of an mpf endpoint from its (sign, man, exp, bc) tuple."""
    sign, man, exp, _ = raw
    if man == 0 and exp != 0:
        raise ValueError("non-finite interval endpoint")
    v = Fraction(man)
    v = v * Fraction(2) ** exp if exp >= 0 else v / Fraction(2) ** (-exp)
    return -v if sign else v


@dataclass(frozen=True)
class ComplexInterval:
    """Axis-aligned rectangle with exact dyadic rational endpoints."""

    re_lo: Fraction
    re_hi: Fraction
    im_lo: Fraction
    im_hi: Fraction

    def __post_init__(self):
        assert self.re_lo <= self.re_hi and self.im_lo <= self.im_hi

    @property
    def re_width(self) -> Fraction:
        return self.re_hi - self.re_lo

    @property
    def im_width(self) -> Fraction:
        return self.im_hi - self.im_lo

    def contains(self, other: "ComplexInterval") -> bool:
        return (
            self.re_lo <= other.re_lo
            and other.re_hi <= self.re_hi
            and self.im_lo <= other.im_lo
            and other.im_hi <= self.im_hi
        )

    def contains_point(self, re: Fraction, im: Fraction = Fraction(0)) -> bool:
        return self.re_lo <= re <= self.re_hi and self.im_lo <= im <= self.im_hi

    def im_sign(self) -> int | None:
        """Certified sign of the imaginary part, None if undecided."""
        if self.im_hi < 0:
            return -1
        if self.im_lo > 0:
            return 1
        return None

    def re_sign(self) -> int | None:
        if self.re_hi < 0:
            return -1
        if self.re_lo > 0:
            return 1
        return None


SignVector = tuple[int, ...]


def embed(x: Cyclo, n: int, prec: int = DEFAULT_PRECISION) -> ComplexInterval:
    """Enclosure of sigma_n(x) at the given working precision (bits)."""
    if gcd(n, x.m) != 1:
        raise ValueError(f"sigma_{n} is not an embedding of Q(zeta_{x.m})")
    if x.is_rational():
        q = x.as_fraction()
        return ComplexInterval(q, q, Fraction(0), Fraction(0))
    saved = iv.prec
    iv.prec = prec
    try:
        t = (iv.pi * (2 * (n % x.m))) / x.m
        root = iv.mpc(iv.cos(t), iv.sin(t))
        acc = iv.mpc(0)
        for c in reversed(x.num):
            acc = acc * root + c
        acc /= x.den
        re, im = acc.real._mpi_, acc.imag._mpi_
    finally:
        iv.prec = saved
    return ComplexInterval(
        _mpf_to_fraction(re[0]),
        _mpf_to_fraction(re[1]),
        _mpf_to_fraction(im[0]),
        _mpf_to_fraction(im[1]),
    )


@lru_cache(maxsize=65536)
def certified_sign_im(x: Cyclo, n: int, start_prec: int = DEFAULT_PRECISION) -> int:
    """Sign of Im(sigma_n(x)) in {-1, 0, +1}, certified.

    Zero is decided exactly: sigma_n(x) is real iff x equals its own
    conjugate (conjugation commutes with every sigma_n).  Nonzero signs are
    certified by interval refinement.
    """
    if x == x.conj():
        return 0
    prec = max(8, start_prec)
    while prec <= PRECISION_CAP:
        s = embed(x, n, prec).im_sign()
        if s is not None:
            return s
        prec *= 2
    raise PrecisionExhausted(
        f"sign of Im(sigma_{n}) undecided at {PRECISION_CAP} bits; "
        "exact zero test already ruled out zero, so this is a bug"
    )


def certified_sign_real(x: Cyclo, n: int, start_prec: int = DEFAULT_PRECISION) -> int:
    """Sign of the real embedding tau_n of a conjugation-fixed element."""
    if not x.is_real():
        raise NotRealElement("element is not fixed by conjugation")
    if x.is_zero():
        return 0
    prec = max(8, start_prec)
    while prec <= PRECISION_CAP:
        s = embed(x, n, prec).re_sign()
        if s is not None:
            return s
        prec *= 2
    raise PrecisionExhausted(
        f"sign of tau_{n} undecided at {PRECISION_CAP} bits for a provably "
        "nonzero real element, so this is a bug"
    )


@lru_cache(maxsize=65536)
def sign_vector(u: Cyclo, start_prec: int = DEFAULT_PRECISION) -> SignVector:
    """Signs of u at the real embeddings tau_n, one representative n < m/2
    per conjugate pair, ascending n."""
    if u.is_zero():
        raise ZeroDivisionError("sign vector of zero")
    if not u.is_unit():
        raise NotUnit("sign vectors are defined for units of the real subfield")
    return tuple(certified_sign_real(u, n, start_prec) for n in real_embedding_reps(u.m))


def is_totally_positive(u: Cyclo, start_prec: int = DEFAULT_PRECISION) -> bool:
    if u.is_zero():
        return False
    return all(
        certified_sign_real(u, n, start_prec) > 0 for n in real_embedding_reps(u.m)
    )
