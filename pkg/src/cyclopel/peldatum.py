"""Assembly of the integral PEL datum: Hermitian matrix of xi entries,
integral Gram matrix of the trace pairing, signature cross-check, fixture
verification, and the relative pipeline for the m=7 family with a
distinguished point over Q(zeta_21)."""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd
from pathlib import Path
from typing import Optional, Sequence, Union

from .cmfield import CMType, SimplicityReport, cm_type_from_triple, is_simple
from .cyclotomic import (
    Cyclo,
    _relative_conjugator,
    element_str,
    euler_phi,
    parse_element,
    relative_split,
    units_mod,
)
from .embeddings import DEFAULT_PRECISION, certified_sign_im
from .errors import CyclopelError, Indeterminate, NonIntegralForm, UnsupportedModulus
from .monodromy import (
    DegenerationTree,
    MonodromyDatum,
    Signature,
    degenerate,
    genus,
    signature,
    validate,
)
from .polarization import (
    ConditionReport,
    PolarizedCMPoint,
    beta_for_type,
    equivalent_beta,
    reference_different_generator,
    verify_conditions,
)

__all__ = [
    "ASSEMBLE_MODULI",
    "CERTAINTY_SIMPLE",
    "CERTAINTY_FORM_UNIQUENESS",
    "Block",
    "BridgeResult",
    "ComponentResult",
    "FamilyResult",
    "FixtureOutcome",
    "HermitianDatum",
    "RelativePipelineResult",
    "assemble",
    "entry_cm_type",
    "equivalent_datum",
    "form_signature",
    "gram_determinant",
    "gram_matrix",
    "load_corpus",
    "m17_pipeline",
    "twice_prime_bridge",
    "verify_fixture",
]

# Odd primes whose full pipeline (degeneration, CM-types, beta solve) runs
# end to end.
ASSEMBLE_MODULI = frozenset({3, 5, 7, 11, 13, 17, 19})

# For these moduli, uniqueness of the integral Hermitian form is not
# certified by the CM-point argument alone; reports carry the caveat.
_FORM_UNIQUENESS_CAVEAT_MODULI = frozenset({13, 19})

CERTAINTY_SIMPLE = "all-components-simple"
CERTAINTY_FORM_UNIQUENESS = "relies-on-hermitian-form-uniqueness"


@dataclass(frozen=True)
class Block:
    """Entries of the diagonal Hermitian form living over one cyclotomic
    level: xi_j in Q(zeta_modulus), each purely imaginary (xi = -conj xi)."""

    modulus: int
    entries: tuple[Cyclo, ...]

    def __post_init__(self):
        assert self.entries, "empty block"
        for xi in self.entries:
            assert xi.m == self.modulus, "entry lives over the wrong modulus"
            assert not xi.is_zero()
            assert xi == -xi.conj(), "entry is not purely imaginary"


@dataclass(frozen=True)
class HermitianDatum:
    """Block-diagonal Hermitian form over prod Z[zeta_d] for divisors d of
    the ambient modulus m, blocks in ascending modulus order."""

    m: int
    blocks: tuple[Block, ...]

    def __post_init__(self):
        assert self.blocks, "no blocks"
        mods = [b.modulus for b in self.blocks]
        assert mods == sorted(set(mods)), "blocks must have distinct ascending moduli"
        for d in mods:
            assert self.m % d == 0, f"block modulus {d} does not divide {self.m}"

    def dimension(self) -> int:
        """Z-rank of the lattice = 2 * genus."""
        return sum(euler_phi(b.modulus) * len(b.entries) for b in self.blocks)


def entry_cm_type(xi: Cyclo, start_prec: int = DEFAULT_PRECISION) -> CMType:
    """CM-type carried by a diagonal entry: n with Im(sigma_n(1/xi)) < 0,
    equivalently Im(sigma_n(xi)) > 0."""
    members = frozenset(
        n for n in units_mod(xi.m) if certified_sign_im(xi, n, start_prec) == 1
    )
    return CMType(xi.m, members)


# ---------------------------------------------------------------------------
# Gram matrix of the trace pairing


def gram_matrix(h: HermitianDatum) -> tuple[tuple[int, ...], ...]:
    """Gram matrix of E(x, y) = tr(x B conj(y)) on the Z-basis given by
    zeta^a-multiples of the coordinate vectors, in block order: the
    (a, b) entry of the cell for entry xi is tr(xi zeta^(a-b)).  Raises
    NonIntegralForm when any pairing value is not a rational integer."""
    cells: list[list[list[int]]] = []
    for block in h.blocks:
        d = euler_phi(block.modulus)
        zeta = Cyclo.zeta(block.modulus)
        for xi in block.entries:
            # tr(xi * zeta^k) for the k = a - b values actually used
            tr: dict[int, int] = {}
            for k in range(-(d - 1), d):
                val = (xi * zeta**(k % block.modulus)).trace()
                if val.denominator != 1:
                    raise NonIntegralForm(
                        f"tr(xi * zeta^{k}) = {val} is not integral for entry "
                        f"{element_str(xi)} at modulus {block.modulus}"
                    )
                tr[k] = int(val)
            cells.append([[tr[a - b] for b in range(d)] for a in range(d)])

    n = sum(len(c) for c in cells)
    gram = [[0] * n for _ in range(n)]
    offset = 0
    for cell in cells:
        d = len(cell)
        for a in range(d):
            for b in range(d):
                gram[offset + a][offset + b] = cell[a][b]
        offset += d
    for i in range(n):
        for j in range(n):
            assert gram[i][j] == -gram[j][i], "pairing is not skew"
    return tuple(tuple(row) for row in gram)


def gram_determinant(gram: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    n = len(gram)
    if n == 0:
        return 1
    m = [list(row) for row in gram]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if pivot is None:
                return 0
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def form_signature(h: HermitianDatum, start_prec: int = DEFAULT_PRECISION) -> Signature:
    """Signature of the Hermitian datum: the eigenvalue index n (mod m)
    lands in the block whose modulus is the exact order m/gcd(n, m) of
    zeta^n, at local index n mod that modulus; each entry contributes 1
    exactly when its CM-type contains the local index."""
    by_mod = {b.modulus: b for b in h.blocks}
    types: dict[int, list[CMType]] = {
        b.modulus: [entry_cm_type(xi, start_prec) for xi in b.entries] for b in h.blocks
    }
    values = [0] * h.m
    for n in range(1, h.m):
        d = h.m // gcd(n, h.m)
        block = by_mod.get(d)
        if block is None:
            continue
        k = n % d
        values[n] = sum(1 for phi in types[d] if k in phi)
    return Signature(h.m, tuple(values))


# ---------------------------------------------------------------------------
# full assembly for odd prime m


@dataclass(frozen=True)
class ComponentResult:
    """One 3-point component of the degeneration with its CM data."""

    triple: MonodromyDatum
    phi: CMType
    simplicity: SimplicityReport
    point: PolarizedCMPoint


@dataclass(frozen=True)
class FamilyResult:
    datum: MonodromyDatum
    genus: int
    signature: Signature
    tree: DegenerationTree
    components: tuple[ComponentResult, ...]
    hermitian: HermitianDatum
    gram: tuple[tuple[int, ...], ...]
    gram_det: int
    form_sig: Signature
    certainty: str


def assemble(datum: MonodromyDatum, start_prec: int = DEFAULT_PRECISION) -> FamilyResult:
    """Full pipeline: degenerate into 3-point components, solve for each
    component's polarization element, and return the diagonal Hermitian
    datum in degeneration order with its integral Gram matrix."""
    if datum.m not in ASSEMBLE_MODULI:
        raise UnsupportedModulus(
            f"full assembly runs for odd prime m in {sorted(ASSEMBLE_MODULI)}, not m = {datum.m}"
        )
    sig = signature(datum)
    tree = degenerate(datum)
    components = []
    for triple in tree.triples:
        phi = cm_type_from_triple(triple)
        components.append(
            ComponentResult(triple, phi, is_simple(phi), beta_for_type(phi, start_prec))
        )
    entries = tuple(c.point.xi() for c in components)
    hermitian = HermitianDatum(datum.m, (Block(datum.m, entries),))
    gram = gram_matrix(hermitian)
    det = gram_determinant(gram)
    assert abs(det) == 1, f"Gram determinant {det} is not a unit"
    form_sig = form_signature(hermitian, start_prec)
    assert form_sig == sig, "assembled form does not reproduce the signature"
    simple = all(c.simplicity.simple for c in components)
    certainty = (
        CERTAINTY_SIMPLE
        if simple and datum.m not in _FORM_UNIQUENESS_CAVEAT_MODULI
        else CERTAINTY_FORM_UNIQUENESS
    )
    return FamilyResult(
        datum,
        genus(datum),
        sig,
        tree,
        tuple(components),
        hermitian,
        gram,
        det,
        form_sig,
        certainty,
    )


# ---------------------------------------------------------------------------
# equivalence of data


def _match_entries(
    left: Sequence[Cyclo], right: Sequence[Cyclo], start_prec: int
) -> Optional[bool]:
    """Whether some bijection pairs each left entry with an equivalent
    right entry.  Returns None when undecidable (an Indeterminate pair
    blocks every matching)."""
    n = len(left)
    edge: list[list[Optional[bool]]] = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            try:
                edge[i][j] = equivalent_beta(left[i], right[j], start_prec)
            except Indeterminate:
                edge[i][j] = None

    used = [False] * n

    def place(i: int) -> bool:
        if i == n:
            return True
        for j in range(n):
            if not used[j] and edge[i][j]:
                used[j] = True
                if place(i + 1):
                    return True
                used[j] = False
        return False

    if place(0):
        return True
    if any(e is None for row in edge for e in row):
        return None
    return False


def equivalent_datum(
    h1: HermitianDatum,
    h2: HermitianDatum,
    allow_galois: bool = False,
    start_prec: int = DEFAULT_PRECISION,
) -> bool:
    """Whether the two data define the same polarized form: identical
    block structure and a per-block bijection of entries with totally
    positive unit ratios, optionally after one Galois twist applied to
    every entry simultaneously."""
    if h1.m != h2.m:
        raise ValueError("data live over different ambient moduli")
    shape1 = [(b.modulus, len(b.entries)) for b in h1.blocks]
    shape2 = [(b.modulus, len(b.entries)) for b in h2.blocks]
    if shape1 != shape2:
        return False
    twists = sorted(units_mod(h1.m)) if allow_galois else (1,)
    undecided = False
    for i in twists:
        verdicts = []
        for b1, b2 in zip(h1.blocks, h2.blocks):
            twisted = [xi.galois(i % b1.modulus) for xi in b1.entries]
            verdicts.append(_match_entries(twisted, b2.entries, start_prec))
        if all(v is True for v in verdicts):
            return True
        if any(v is None for v in verdicts):
            undecided = True
    if undecided:
        raise Indeterminate(
            "entry comparison is only sufficient at this modulus and failed to decide"
        )
    return False


# ---------------------------------------------------------------------------
# twice an odd prime


@dataclass(frozen=True)
class BridgeResult:
    phi: CMType
    beta: Cyclo
    conditions: ConditionReport


def twice_prime_bridge(
    phi: CMType, beta: Cyclo, start_prec: int = DEFAULT_PRECISION
) -> BridgeResult:
    """Carry a polarized CM-type from Q(zeta_m') to Q(zeta_2m') (same
    field, rewritten): the type lifts to the odd units congruent to a
    member mod m', beta is rewritten verbatim, and the three conditions
    are re-verified on the lifted side."""
    m0 = phi.m
    if m0 % 2 == 0:
        raise ValueError("source modulus must be odd")
    if beta.m != m0:
        raise ValueError("beta and CM-type live over different moduli")
    if not verify_conditions(beta, phi, start_prec).all_pass():
        raise ValueError("input beta fails its own conditions")
    m2 = 2 * m0
    lifted = CMType(m2, frozenset(j for j in units_mod(m2) if j % m0 in phi.members))
    beta2 = beta.to_modulus(m2)
    report = verify_conditions(beta2, lifted, start_prec)
    assert report.all_pass(), "conditions do not survive the rewriting"
    return BridgeResult(lifted, beta2, report)


# ---------------------------------------------------------------------------
# the m = 7 family (2,4,4,4): distinguished point over Q(zeta_21)


@dataclass(frozen=True)
class RelativePipelineResult:
    phi: CMType
    phi_simplicity: SimplicityReport
    beta3: Cyclo
    alpha: Cyclo
    z: Cyclo
    z_conditions: ConditionReport
    a11: Cyclo
    a12: Cyclo
    a21: Cyclo
    base_matrix: tuple[tuple[Cyclo, ...], ...]
    twisted_matrix: tuple[tuple[Cyclo, ...], ...]


def _assert_skew_hermitian(mat: tuple[tuple[Cyclo, ...], ...]) -> None:
    for j, row in enumerate(mat):
        for k, x in enumerate(row):
            assert x.conj() == -mat[k][j], "matrix is not skew-Hermitian"


def m17_pipeline(start_prec: int = DEFAULT_PRECISION) -> RelativePipelineResult:
    """Derive the 2x2 Hermitian matrix over Z[zeta_7] for the family
    (7, 4, (2,4,4,4)) from its distinguished point, the curve y^7 = x^3 - 1
    whose Jacobian has CM by Z[zeta_21].

    Steps: the 3-point cover (21, (7,3,11)) gives the CM-type; z = -beta3 *
    alpha is its polarization element; the lattice Z[zeta_21] over Z[zeta_7]
    in the basis (1, zeta_3) turns the pairing tr(conj(x) z^-1 y), conjugate
    linear in the first argument, into a 2x2 matrix with entries a_ij
    descended through the degree-2 relative extension; the Galois twist
    sigma_4 carries the base family (1,1,1,4) to (2,4,4,4)."""
    z21 = Cyclo.zeta(21)

    triple = validate(21, (7, 3, 11))
    phi = cm_type_from_triple(triple)
    assert phi.sorted_members() == (1, 2, 4, 8, 10, 16)
    simplicity = is_simple(phi)
    assert simplicity.simple

    beta3 = 7 / (z21**6 - z21**15)
    alpha = (z21**7 - z21**14) * (z21**2 - z21**19)
    assert alpha == (z21**9 + z21**12) - (z21**5 + z21**16)
    pol = -(beta3 * alpha)
    assert -pol == 21 * (z21**2 - z21**19) / ((z21**14 - z21**7) * (z21**6 - z21**15))
    conditions = verify_conditions(pol, phi, start_prec)
    assert conditions.all_pass()
    assert pol == -reference_different_generator(21).galois(4)

    # degree-2 relative Galois generator: fixes zeta_7, inverts zeta_3
    tau = _relative_conjugator(21)
    assert tau == 8
    # tr(conj(x) z^-1 y) = tr(x (-z)^-1 conj(y)) since conj(z) = -z, so the
    # entry algebra runs on (-z)^-1 = alpha^-1 beta3^-1
    alpha_inv = alpha.inverse()
    tau_alpha_inv = alpha_inv.galois(tau)
    zeta3 = Cyclo.zeta(21, 7)
    a11_big = alpha_inv + tau_alpha_inv
    a12_big = zeta3**2 * alpha_inv + zeta3 * tau_alpha_inv
    a21_big = zeta3 * alpha_inv + zeta3**2 * tau_alpha_inv
    assert a11_big.is_real()
    assert a12_big.conj() == a21_big
    for x in (a11_big, a12_big, a21_big):
        assert x.galois(tau) == x, "relative entry is not tau-invariant"

    def descend(x: Cyclo) -> Cyclo:
        x1, x2 = relative_split(x)
        assert x2.is_zero()
        return x1

    a11 = descend(a11_big)
    a12 = descend(a12_big)
    a21 = descend(a21_big)

    z7 = Cyclo.zeta(7)
    beta3_small = 7 / (z7**2 - z7**5)
    assert beta3 == beta3_small.to_modulus(21)
    pref = beta3_small.inverse()
    base = (
        (pref * a11, pref * a12),
        (pref * a21, pref * a11),
    )
    _assert_skew_hermitian(base)
    for row in base:
        for x in row:
            assert (7 * x).is_integral, "entry is not integral away from 7"

    twisted = tuple(tuple(x.galois(4) for x in row) for row in base)
    _assert_skew_hermitian(twisted)
    for row in twisted:
        for x in row:
            assert (7 * x).is_integral

    return RelativePipelineResult(
        phi,
        simplicity,
        beta3,
        alpha,
        pol,
        conditions,
        a11,
        a12,
        a21,
        base,
        twisted,
    )


# ---------------------------------------------------------------------------
# fixtures


@dataclass(frozen=True)
class FixtureOutcome:
    name: str
    passed: bool
    failures: tuple[str, ...]


def _fixture_datum(fixture: dict) -> HermitianDatum:
    blocks = tuple(
        Block(int(mod), tuple(parse_element(s, int(mod)) for s in entries))
        for mod, entries in fixture["blocks"]
    )
    return HermitianDatum(int(fixture["m"]), blocks)


def verify_fixture(
    fixture: dict,
    start_prec: int = DEFAULT_PRECISION,
    allow_galois: bool = False,
) -> FixtureOutcome:
    """Check one fixture record: the monodromy datum is valid and has the
    expected signature; every entry's beta = 1/xi generates the different
    (condition 1) and is purely imaginary (condition 2); the certified
    embedding signs reproduce the expected signature (condition 3); the
    Gram matrix is integral and skew; and, when the modulus supports full
    assembly, the assembled datum is equivalent to the fixture's."""
    name = str(fixture.get("name", "?"))
    failures: list[str] = []
    try:
        datum = validate(int(fixture["m"]), fixture["a"])
        if datum.N != int(fixture["N"]):
            failures.append(f"declared N = {fixture['N']} but inertia has {datum.N} points")
        expected = tuple(int(v) for v in fixture["expected_signature"])
        sig = signature(datum)
        if sig.values != expected:
            failures.append(
                f"monodromy signature {sig.values} differs from expected {expected}"
            )
        h = _fixture_datum(fixture)
        for block in h.blocks:
            ref = reference_different_generator(block.modulus)
            for j, xi in enumerate(block.entries):
                beta = xi.inverse()
                ratio = beta / ref
                if not (ratio.is_integral and ratio.is_unit()):
                    failures.append(
                        f"condition (1): entry {j} at modulus {block.modulus} "
                        "does not generate the different"
                    )
                if beta != -beta.conj():
                    failures.append(
                        f"condition (2): entry {j} at modulus {block.modulus} "
                        "is not purely imaginary"
                    )
        fs = form_signature(h, start_prec)
        if fs.values != expected:
            off = [n for n in range(h.m) if fs.values[n] != expected[n]]
            failures.append(
                "condition (3): certified embedding signs give signature "
                f"{fs.values}, disagreeing with the expected one at n = {off}"
            )
        try:
            gram_matrix(h)
        except NonIntegralForm as exc:
            failures.append(f"Gram integrality: {exc}")
        if datum.m in ASSEMBLE_MODULI:
            result = assemble(datum, start_prec)
            if not equivalent_datum(result.hermitian, h, allow_galois, start_prec):
                failures.append("assembled datum is not equivalent to the fixture blocks")
    except CyclopelError as exc:
        failures.append(f"{type(exc).__name__}: {exc}")
    return FixtureOutcome(name, not failures, tuple(failures))


def default_corpus_path() -> Path:
    return Path(__file__).resolve().parent / "data" / "corpus.json"


def load_corpus(path: Union[str, Path]) -> list[dict]:
    """Read a fixture corpus: {"fixtures": [record, ...]} with records as
    in verify_fixture."""
    with open(path, encoding="utf-8") as f:
        doc = json.load(f)
    if not isinstance(doc, dict) or not isinstance(doc.get("fixtures"), list):
        raise ValueError(f"{path}: corpus must be an object with a 'fixtures' list")
    for record in doc["fixtures"]:
        missing = {"name", "m", "N", "a", "blocks", "expected_signature"} - set(record)
        if missing:
            raise ValueError(f"{path}: fixture missing fields {sorted(missing)}")
    return doc["fixtures"]
