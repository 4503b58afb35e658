"""Non-existence certification engines and their replayable certificates.

Two pipelines are implemented. For p = 3 mod 4 the certifier deduces the
additive order N of a distinguished ideal class from a Stickelberger relation
lattice, rewrites all classes as multiples of one generator, and exhaustively
decides whether the multiplier equation sum(e_k * c_k) = 0 mod N admits a
solution with entries e_k in {-l, -l+2, ..., l}. A sequence of the requested
shape can only exist when it does, so an all-NO transcript up to l certifies
non-existence. For p = 5 mod 8 the certifier instead tests membership of q in
a qualifying prime set via root-finding of two class polynomials mod q.

Verdicts are NON_EXISTENT or INCONCLUSIVE(reason), never a silent guess:
every gate that fails downgrades the verdict and is recorded as a step.
Certificates serialize to canonical JSON and replay byte for byte.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from ppscert.certdata import (
    IMAG_QUADRATIC,
    QUARTIC_CM,
    REAL_QUADRATIC,
    AssumptionLedger,
    ClassPolyRecord,
    LedgerEntry,
    LedgerError,
    find_poly,
    load_class_polys,
    load_order_ledger,
)
from ppscert.lattice import HnfBasis, RankDeficientError, hnf, verify_hnf
from ppscert.ntheory import (
    divisors,
    euler_phi,
    is_prime,
    is_self_conjugate,
    legendre_symbol,
    multiplicative_order,
    poly_discriminant,
    poly_has_root_mod,
    prime_power_decomposition,
    relative_class_number_minus,
)
from ppscert.quadforms import class_number
from ppscert.stickelberger import FieldContext, build_relation_matrix, format_matrix, reduce_by_conjugation

__all__ = [
    "PPS",
    "PAPS",
    "STRICT",
    "PAPER_ASSUMPTIONS",
    "NON_EXISTENT",
    "INCONCLUSIVE",
    "R_PARITY",
    "R_NORM",
    "R_ORBIT",
    "R_PAIR",
    "InternalContradiction",
    "SequenceType",
    "ClassRelation",
    "SearchTranscript",
    "CheckStep",
    "Certificate",
    "matrix_digest",
    "solvable",
    "max_unsolvable_l",
    "deduce_class_relation",
    "certify_pps",
    "certify_pps_3mod4",
    "certify_pps_5mod8",
    "certify_paps",
    "qp_test",
    "density_bound",
    "verify_certificate",
]

PPS = "PPS"
PAPS = "PAPS"

STRICT = "STRICT"
PAPER_ASSUMPTIONS = "PAPER_ASSUMPTIONS"

NON_EXISTENT = "NON_EXISTENT"
INCONCLUSIVE = "INCONCLUSIVE"

R_PARITY = "R_PARITY"
R_NORM = "R_NORM"
R_ORBIT = "R_ORBIT"
R_PAIR = "R_PAIR"

BRANCH_3MOD4 = "3mod4"
BRANCH_5MOD8 = "5mod8"
BRANCH_NONE = "unsupported"

CERT_FORMAT = "ppscert.certificate.v1"
DEFAULT_L_MAX = 15
_PLAIN_SEARCH_LIMIT = 4096
_REAL_CLASS_NUMBER_ONE_BOUND = 151  # largest p with a verified trivial maximal-real class group


class InternalContradiction(RuntimeError):
    """Sound elimination rules removed every candidate; data needs review."""


class _Inconclusive(Exception):
    """Internal: abort certification with an INCONCLUSIVE verdict."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


# ---------------------------------------------------------------------------
# input description


@dataclass(frozen=True)
class SequenceType:
    """Shape of the hypothetical sequence: family plus period parameters.

    PPS period is p**a * q**l * nprime; PAPS period is q**l * nprime + 1
    and carries no p power (a must be 0).
    """

    family: str
    p: int
    a: int
    q: int
    l: int
    nprime: int

    def __post_init__(self) -> None:
        if self.family not in (PPS, PAPS):
            raise ValueError(f"unknown family {self.family!r}")
        if self.p < 3:
            raise ValueError("p must be an odd prime")
        if self.q < 2:
            raise ValueError("q must be at least 2")
        if self.l < 1 or self.l % 2 == 0:
            raise ValueError("l must be odd and positive")
        if self.nprime < 1:
            raise ValueError("nprime must be positive")
        if self.family == PPS and self.a < 1:
            raise ValueError("PPS types carry a positive power of p")
        if self.family == PAPS and self.a != 0:
            raise ValueError("PAPS types carry no power of p; use a = 0")

    @property
    def period(self) -> int:
        if self.family == PPS:
            return self.p**self.a * self.q**self.l * self.nprime
        return self.q**self.l * self.nprime + 1

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "p": self.p,
            "a": self.a,
            "q": self.q,
            "l": self.l,
            "nprime": self.nprime,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SequenceType":
        return cls(
            family=str(d["family"]),
            p=int(d["p"]),
            a=int(d["a"]),
            q=int(d["q"]),
            l=int(d["l"]),
            nprime=int(d["nprime"]),
        )


# ---------------------------------------------------------------------------
# class relation deduction


@dataclass(frozen=True)
class ClassRelation:
    """All classes as multiples of x_1: x_k = coeffs[k-1] * x_1 mod modulus.

    Coefficients are centered representatives in (-N/2, N/2]. The rejected
    list records every candidate order eliminated on the way, with the rule
    that removed it.
    """

    ctx: FieldContext
    modulus: int
    coeffs: tuple[int, ...]
    rejected: tuple[tuple[int, str], ...]

    @property
    def extended(self) -> tuple[int, ...]:
        """Coefficients for all g classes, using x_{u+k} = -x_k."""
        return self.coeffs + tuple(-c for c in self.coeffs)


@dataclass(frozen=True)
class SearchTranscript:
    """Per-l solvability lines for one modulus, and the certified prefix l0."""

    modulus: int
    lines: tuple[tuple[int, tuple[int, ...] | None], ...]
    l0: int


def matrix_digest(rows) -> str:
    """Lowercase sha256 hex of the canonical matrix text."""
    return hashlib.sha256(format_matrix(rows).encode("utf-8")).hexdigest()


def _centered(c: int, n: int) -> int:
    c %= n
    return c - n if c > n // 2 else c


def _odd_part(n: int) -> int:
    while n % 2 == 0:
        n //= 2
    return n


def _back_substitute(basis: HnfBasis, n: int, h_minus: int) -> tuple[int, ...]:
    """Coefficients c_k with x_k = c_k * x_1 mod n, assuming x_1 has order n.

    Solving row i for x_i divides by the pivot. Powers of two cancel because
    the ambient class group has odd order (h_minus is odd and the group order
    divides it); any odd pivot part must additionally be coprime to h_minus
    and invertible mod n, otherwise the deduction is refused.
    """
    b = basis.basis
    u = len(b)
    coeffs = [0] * u
    coeffs[0] = 1
    for i in range(1, u):
        pivot = b[i][i]
        odd = _odd_part(pivot)
        if odd != 1 and math.gcd(odd, h_minus) != 1:
            raise _Inconclusive(f"pivot {pivot} shares an odd factor with the class number bound")
        if math.gcd(pivot, n) != 1:
            raise _Inconclusive(f"pivot {pivot} is not invertible mod {n}")
        s = sum(b[i][j] * coeffs[j] for j in range(i)) % n
        coeffs[i] = -s * pow(pivot, -1, n) % n
    return tuple(_centered(c, n) for c in coeffs)


def _orbit_classes(coeffs: tuple[int, ...]) -> list[int]:
    # The primes over q_F form the Galois orbit of Q_1 under the index-2
    # subgroup: the odd-indexed classes x_1, x_3, ..., x_{2u-1}.
    u = len(coeffs)
    out = []
    for t in range(u):
        idx = 2 * t + 1
        out.append(coeffs[idx - 1] if idx <= u else -coeffs[idx - u - 1])
    return out


def deduce_class_relation(
    basis: HnfBasis,
    ctx: FieldContext,
    h_f: int,
    mode: str = STRICT,
    ledger: AssumptionLedger | None = None,
) -> tuple[ClassRelation, ...]:
    """Candidate orders N of x_1 that survive the sound elimination rules.

    Candidates are the divisors of the first pivot d_1. Eliminations, in
    order: R_PARITY drops even divisors (the ambient class number is odd),
    R_NORM drops divisors not divisible by h_f (pushing x_1 down to the
    quadratic subfield shows h_f | N), R_ORBIT drops N whose Galois orbit sum
    vanishes mod N (the orbit product is a nontrivial class), and R_PAIR
    drops N whose orbit contains two opposite classes (their product would
    force a square of a nontrivial class of odd prime order to vanish).

    STRICT mode carries every survivor. PAPER_ASSUMPTIONS mode instead takes
    N from the ledger entry for (p, f) when one exists; the entry must be an
    odd divisor of d_1 and must itself survive the sound rules.
    """
    if mode not in (STRICT, PAPER_ASSUMPTIONS):
        raise ValueError(f"unknown mode {mode!r}")
    if h_f < 3 or not is_prime(h_f):
        raise _Inconclusive(f"subfield class number {h_f} is not an odd prime")
    d1 = basis.diag[0]
    h_minus = relative_class_number_minus(ctx.p)
    if h_minus % 2 == 0:
        raise _Inconclusive("relative class number is even; parity rule unavailable")
    rejected: list[tuple[int, str]] = []
    survivors: list[ClassRelation] = []
    for cand in divisors(d1):
        if cand % 2 == 0:
            rejected.append((cand, R_PARITY))
            continue
        if cand % h_f:
            rejected.append((cand, R_NORM))
            continue
        coeffs = _back_substitute(basis, cand, h_minus)
        orbit = _orbit_classes(coeffs)
        if sum(orbit) % cand == 0:
            rejected.append((cand, R_ORBIT))
            continue
        if any((orbit[i] + orbit[j]) % cand == 0 for i in range(len(orbit)) for j in range(i + 1, len(orbit))):
            rejected.append((cand, R_PAIR))
            continue
        survivors.append(ClassRelation(ctx=ctx, modulus=cand, coeffs=coeffs, rejected=()))
    if not survivors:
        raise InternalContradiction(f"every candidate order for (p,f)=({ctx.p},{ctx.f}) was eliminated")
    rejected_t = tuple(rejected)
    survivors = [ClassRelation(ctx=r.ctx, modulus=r.modulus, coeffs=r.coeffs, rejected=rejected_t) for r in survivors]
    if mode == PAPER_ASSUMPTIONS and ledger is not None:
        entry = ledger.get(ctx.p, ctx.f)
        if entry is not None:
            if _odd_part(d1) % entry.order:
                raise LedgerError(
                    f"ledger order {entry.order} does not divide the odd part of d_1 = {d1}"
                )
            chosen = [r for r in survivors if r.modulus == entry.order]
            if not chosen:
                raise InternalContradiction(
                    f"ledger order {entry.order} was eliminated by a sound rule"
                )
            return tuple(chosen)
    return tuple(survivors)


# ---------------------------------------------------------------------------
# solvability search


def _e_domain(l: int) -> range:
    return range(-l, l + 1, 2)


def solvable(
    coeffs: tuple[int, ...] | list[int],
    modulus: int,
    l: int,
    method: str = "auto",
) -> tuple[int, ...] | None:
    """Least witness e (lexicographic) with sum(e_k * c_k) = 0 mod modulus, or None.

    Entries range over {-l, -l+2, ..., l}. The meet-in-the-middle path and
    the plain enumeration return identical witnesses by construction.
    """
    coeffs = tuple(int(c) for c in coeffs)
    if modulus < 1:
        raise ValueError("modulus must be positive")
    if l < 0:
        raise ValueError("l must be non-negative")
    u = len(coeffs)
    if u == 0:
        raise ValueError("empty coefficient vector")
    if method == "auto":
        method = "plain" if (l + 1) ** u <= _PLAIN_SEARCH_LIMIT else "mitm"
    dom = _e_domain(l)
    if method == "plain":
        for e in itertools.product(dom, repeat=u):
            if sum(ek * ck for ek, ck in zip(e, coeffs)) % modulus == 0:
                return e
        return None
    if method != "mitm":
        raise ValueError(f"unknown method {method!r}")
    left_len = u // 2
    left_c, right_c = coeffs[:left_len], coeffs[left_len:]
    table: dict[int, tuple[int, ...]] = {}
    for e in itertools.product(dom, repeat=u - left_len):
        r = sum(ek * ck for ek, ck in zip(e, right_c)) % modulus
        if r not in table:
            table[r] = e
    for e in itertools.product(dom, repeat=left_len):
        need = -sum(ek * ck for ek, ck in zip(e, left_c)) % modulus
        hit = table.get(need)
        if hit is not None:
            return e + hit
    return None


def max_unsolvable_l(relation: ClassRelation, l_max: int = DEFAULT_L_MAX) -> SearchTranscript:
    """Transcript of solvable() over odd l <= l_max; l0 is the all-NO prefix end."""
    if l_max < 1 or l_max % 2 == 0:
        raise ValueError("l_max must be odd and positive")
    lines = []
    l0 = 0
    prefix = True
    for l in range(1, l_max + 1, 2):
        witness = solvable(relation.coeffs, relation.modulus, l)
        lines.append((l, witness))
        if witness is None and prefix:
            l0 = l
        else:
            prefix = False
    return SearchTranscript(modulus=relation.modulus, lines=tuple(lines), l0=l0)


# ---------------------------------------------------------------------------
# certificates


@dataclass
class CheckStep:
    """One executed check: name, canonical inputs, outcome, evidence."""

    name: str
    inputs: dict
    outcome: str
    evidence: dict = field(default_factory=dict)

    @property
    def inputs_digest(self) -> str:
        canon = json.dumps(self.inputs, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "inputs": self.inputs,
            "inputs_digest": self.inputs_digest,
            "outcome": self.outcome,
            "evidence": self.evidence,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CheckStep":
        step = cls(
            name=str(d["name"]),
            inputs=dict(d["inputs"]),
            outcome=str(d["outcome"]),
            evidence=dict(d["evidence"]),
        )
        if step.inputs_digest != d.get("inputs_digest"):
            raise ValueError(f"step {step.name}: inputs digest mismatch")
        return step


@dataclass
class Certificate:
    """Replayable record of one certification run."""

    input: SequenceType
    mode: str
    params: dict
    steps: list[CheckStep]
    relation: dict | None
    search: list[dict] | None
    verdict: str
    reason: str | None

    def to_dict(self) -> dict:
        return {
            "format": CERT_FORMAT,
            "input": self.input.to_dict(),
            "mode": self.mode,
            "params": self.params,
            "steps": [s.to_dict() for s in self.steps],
            "relation": self.relation,
            "search": self.search,
            "verdict": self.verdict,
            "reason": self.reason,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        if d.get("format") != CERT_FORMAT:
            raise ValueError("unknown certificate format")
        expected = {"format", "input", "mode", "params", "steps", "relation", "search", "verdict", "reason"}
        if set(d) != expected:
            raise ValueError("certificate keys do not match the format")
        return cls(
            input=SequenceType.from_dict(d["input"]),
            mode=str(d["mode"]),
            params=dict(d["params"]),
            steps=[CheckStep.from_dict(s) for s in d["steps"]],
            relation=None if d["relation"] is None else dict(d["relation"]),
            search=None if d["search"] is None else [dict(x) for x in d["search"]],
            verdict=str(d["verdict"]),
            reason=d["reason"] if d["reason"] is None else str(d["reason"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.from_dict(json.loads(text))


class _Run:
    """Step accumulator; a failing gate raises _Inconclusive."""

    def __init__(self) -> None:
        self.steps: list[CheckStep] = []

    def gate(self, name: str, inputs: dict, ok: bool, reason: str, evidence: dict | None = None) -> None:
        self.steps.append(
            CheckStep(name=name, inputs=inputs, outcome="PASS" if ok else "FAIL", evidence=evidence or {})
        )
        if not ok:
            raise _Inconclusive(reason)

    def note(self, name: str, inputs: dict, evidence: dict | None = None) -> None:
        self.steps.append(CheckStep(name=name, inputs=inputs, outcome="PASS", evidence=evidence or {}))


def _nprime_evidence(t: SequenceType) -> tuple[bool, dict]:
    if t.nprime == 1:
        return True, {"factors": []}
    factors = prime_power_decomposition(t.nprime)
    symbols = [[pp.p, legendre_symbol(pp.p, t.p)] for pp in factors]
    ok = all(sym == -1 for _, sym in symbols)
    return ok, {"factors": [[pp.p, pp.e] for pp in factors], "legendre": symbols}


def _search_blocks(relations, l_max: int):
    blocks = []
    l0_all = None
    for rel in relations:
        transcript = max_unsolvable_l(rel, l_max=l_max)
        lines = [
            {"l": l, "solvable": w is not None, "witness": None if w is None else list(w)}
            for l, w in transcript.lines
        ]
        blocks.append({"modulus": rel.modulus, "lines": lines, "l0": transcript.l0})
        l0_all = transcript.l0 if l0_all is None else min(l0_all, transcript.l0)
    return blocks, (l0_all or 0)


def _relation_block(relations, d1: int, h_minus: int, ledger_entry: LedgerEntry | None) -> dict:
    block = {
        "d1": d1,
        "h_minus": h_minus,
        "rejected": [[n, rule] for n, rule in relations[0].rejected],
        "carried": [{"modulus": r.modulus, "coeffs": list(r.coeffs)} for r in relations],
    }
    if ledger_entry is not None:
        block["ledger"] = {
            "order": ledger_entry.order,
            "provenance": ledger_entry.provenance,
        }
    return block


def certify_pps_3mod4(
    t: SequenceType,
    mode: str = STRICT,
    ledger: AssumptionLedger | None = None,
    polys: dict[str, ClassPolyRecord] | None = None,
    l_max: int = DEFAULT_L_MAX,
    w: int | None = None,
) -> Certificate:
    """Certify non-existence for p = 3 mod 4 via the relation-lattice pipeline."""
    if mode not in (STRICT, PAPER_ASSUMPTIONS):
        raise ValueError(f"unknown mode {mode!r}")
    if l_max < 1 or l_max % 2 == 0:
        raise ValueError("l_max must be odd and positive")
    if polys is None:
        polys = load_class_polys()
    if ledger is None and mode == PAPER_ASSUMPTIONS:
        ledger = load_order_ledger()
    run = _Run()
    relation_block = None
    search_blocks = None
    verdict, reason = INCONCLUSIVE, None
    params: dict = {"branch": BRANCH_3MOD4, "l_max": l_max, "hash": "sha256", "w": w}
    try:
        p, q = t.p, t.q
        run.gate(
            "p_prime_3mod4",
            {"p": p},
            is_prime(p) and p % 4 == 3 and p > 3,
            "p is not a prime congruent to 3 mod 4 above 3",
        )
        run.gate(
            "real_subfield_class_number_one",
            {"p": p, "bound": _REAL_CLASS_NUMBER_ONE_BOUND},
            p <= _REAL_CLASS_NUMBER_ONE_BOUND,
            "p exceeds the verified trivial-real-class-group range",
        )
        run.gate("q_prime_distinct", {"q": q, "p": p}, is_prime(q) and q != p, "q must be a prime different from p")
        f = multiplicative_order(q, p)
        run.gate(
            "order_odd",
            {"q": q, "p": p},
            f % 2 == 1 and f > 1,
            "the order of q mod p must be odd and larger than 1",
            {"f": f},
        )
        if t.family == PPS:
            run.gate("power_of_p_present", {"a": t.a}, t.a >= 1, "PPS types need a >= 1")
        else:
            period_ok = (t.q**t.l * t.nprime - 1) % p == 0
            run.gate(
                "period_divisibility",
                {"p": p, "q": q, "l": t.l, "nprime": t.nprime},
                period_ok,
                "p must divide q**l * nprime - 1",
            )
        run.gate("l_odd", {"l": t.l}, t.l % 2 == 1, "l must be odd")
        ok, ev = _nprime_evidence(t)
        run.gate("nprime_admissible", {"nprime": t.nprime, "p": p}, ok, "a prime divisor of nprime is not a non-residue mod p", ev)
        run.note("self_conjugacy_absent", {"q": q, "p": p}, {"self_conjugate": is_self_conjugate(q, p)})
        record = find_poly(polys, p, IMAG_QUADRATIC)
        run.gate(
            "class_poly_available",
            {"p": p, "field_kind": IMAG_QUADRATIC},
            record is not None,
            "no class polynomial is available for this p",
            {} if record is None else {"record": record.to_fields()},
        )
        h_f = class_number(-p)
        run.gate(
            "subfield_class_number_odd_prime",
            {"p": p},
            is_prime(h_f) and h_f % 2 == 1,
            "the quadratic subfield class number is not an odd prime",
            {"h_f": h_f},
        )
        run.gate(
            "class_poly_degree_matches",
            {"label": record.label},
            record.polynomial.degree == h_f,
            "class polynomial degree does not equal the class number",
            {"degree": record.polynomial.degree, "h_f": h_f},
        )
        disc = poly_discriminant(record.polynomial)
        run.gate(
            "q_coprime_to_disc",
            {"q": q, "label": record.label},
            disc % q != 0,
            "q divides the class polynomial discriminant",
            {"disc_mod_q": disc % q},
        )
        run.gate(
            "class_poly_rootless_mod_q",
            {"q": q, "label": record.label},
            not poly_has_root_mod(record.polynomial, q),
            "the class polynomial has a root mod q, so the prime above q is principal",
        )
        ctx = FieldContext(p=p, f=f, w=w)
        params["w"] = ctx.w
        matrix = build_relation_matrix(ctx)
        run.note(
            "relation_matrix",
            {"p": p, "f": f, "w": ctx.w},
            {"rows": len(matrix.rows), "cols": ctx.g, "digest": matrix_digest(matrix.rows)},
        )
        reduced = reduce_by_conjugation(matrix)
        run.note(
            "conjugation_reduction",
            {"p": p, "f": f, "w": ctx.w},
            {"rows": len(reduced), "cols": ctx.u, "digest": matrix_digest(reduced)},
        )
        try:
            basis = hnf(reduced)
        except RankDeficientError as exc:
            run.gate("hnf", {"p": p, "f": f, "w": ctx.w}, False, f"relation lattice is rank deficient: {exc}")
        run.note(
            "hnf",
            {"p": p, "f": f, "w": ctx.w},
            {
                "basis": [list(r) for r in basis.basis],
                "diag": list(basis.diag),
                "digest": matrix_digest(basis.basis),
            },
        )
        ledger_entry = None if ledger is None else ledger.get(p, f)
        relations = deduce_class_relation(basis, ctx, h_f, mode=mode, ledger=ledger)
        h_minus = relative_class_number_minus(p)
        run.note(
            "class_relation",
            {"p": p, "f": f, "mode": mode},
            {
                "d1": basis.diag[0],
                "carried": [r.modulus for r in relations],
                "rejected": [[n, rule] for n, rule in relations[0].rejected],
            },
        )
        relation_block = _relation_block(relations, basis.diag[0], h_minus, ledger_entry if mode == PAPER_ASSUMPTIONS else None)
        if any(r.modulus == 1 for r in relations):
            run.gate("nontrivial_order", {}, False, "a surviving candidate order is 1")
        search_blocks, l0 = _search_blocks(relations, l_max)
        run.note("solvability_search", {"l_max": l_max}, {"l0": l0, "moduli": [b["modulus"] for b in search_blocks]})
        if t.l <= l0:
            verdict = NON_EXISTENT
        else:
            reason = f"l={t.l} exceeds the certified bound l0={l0}"
    except _Inconclusive as stop:
        reason = stop.reason
    return Certificate(
        input=t,
        mode=mode,
        params=params,
        steps=run.steps,
        relation=relation_block,
        search=search_blocks,
        verdict=verdict,
        reason=reason,
    )


def certify_pps_5mod8(
    t: SequenceType,
    fp_poly: ClassPolyRecord | None = None,
    ep_poly: ClassPolyRecord | None = None,
    polys: dict[str, ClassPolyRecord] | None = None,
) -> Certificate:
    """Certify non-existence for p = 5 mod 8 via class polynomial root tests mod q.

    Requires l = 1. The quadratic-subfield polynomial must have a root mod q
    while the quartic one must not; q dividing either discriminant stops the
    test short of a verdict.
    """
    if polys is None:
        polys = load_class_polys()
    if fp_poly is None:
        fp_poly = find_poly(polys, t.p, REAL_QUADRATIC)
    if ep_poly is None:
        ep_poly = find_poly(polys, t.p, QUARTIC_CM)
    run = _Run()
    verdict, reason = INCONCLUSIVE, None
    params: dict = {"branch": BRANCH_5MOD8, "l_max": None, "hash": "sha256", "w": None}
    try:
        p, q = t.p, t.q
        run.gate(
            "p_prime_5mod8",
            {"p": p},
            is_prime(p) and p % 8 == 5 and p > 5,
            "p is not a prime congruent to 5 mod 8 above 5",
        )
        run.gate("q_prime_distinct", {"q": q, "p": p}, is_prime(q) and q != p, "q must be a prime different from p")
        run.gate("l_is_one", {"l": t.l}, t.l == 1, "this branch only certifies l = 1")
        if t.family == PPS:
            run.gate("power_of_p_present", {"a": t.a}, t.a >= 1, "PPS types need a >= 1")
        else:
            period_ok = (t.q * t.nprime - 1) % p == 0
            run.gate(
                "period_divisibility",
                {"p": p, "q": q, "nprime": t.nprime},
                period_ok,
                "p must divide q * nprime - 1",
            )
        f = multiplicative_order(q, p)
        run.gate(
            "order_is_quarter",
            {"q": q, "p": p},
            f == (p - 1) // 4,
            "the order of q mod p must be (p-1)/4",
            {"f": f},
        )
        ok, ev = _nprime_evidence(t)
        run.gate("nprime_admissible", {"nprime": t.nprime, "p": p}, ok, "a prime divisor of nprime is not a non-residue mod p", ev)
        run.gate(
            "quadratic_poly_available",
            {"p": p, "field_kind": REAL_QUADRATIC},
            fp_poly is not None and fp_poly.p == p and fp_poly.field_kind == REAL_QUADRATIC,
            "no quadratic-subfield class polynomial was supplied for this p",
            {} if fp_poly is None else {"record": fp_poly.to_fields()},
        )
        run.gate(
            "quartic_poly_available",
            {"p": p, "field_kind": QUARTIC_CM},
            ep_poly is not None and ep_poly.p == p and ep_poly.field_kind == QUARTIC_CM,
            "no quartic class polynomial is available for this p",
            {} if ep_poly is None else {"record": ep_poly.to_fields()},
        )
        disc_f = poly_discriminant(fp_poly.polynomial)
        disc_e = poly_discriminant(ep_poly.polynomial)
        run.gate(
            "q_coprime_to_discs",
            {"q": q},
            disc_f % q != 0 and disc_e % q != 0,
            "q divides a class polynomial discriminant",
            {"disc_f_mod_q": disc_f % q, "disc_e_mod_q": disc_e % q},
        )
        has_root_f = poly_has_root_mod(fp_poly.polynomial, q)
        has_root_e = poly_has_root_mod(ep_poly.polynomial, q)
        run.note("root_tests", {"q": q}, {"quadratic_has_root": has_root_f, "quartic_has_root": has_root_e})
        if has_root_f and not has_root_e:
            verdict = NON_EXISTENT
        else:
            reason = "q is not in the qualifying prime set for p"
    except _Inconclusive as stop:
        reason = stop.reason
    return Certificate(
        input=t,
        mode=STRICT,
        params=params,
        steps=run.steps,
        relation=None,
        search=None,
        verdict=verdict,
        reason=reason,
    )


def _unsupported_certificate(t: SequenceType) -> Certificate:
    step = CheckStep(
        name="congruence_class_supported",
        inputs={"p": t.p},
        outcome="FAIL",
        evidence={"p_mod_8": t.p % 8},
    )
    return Certificate(
        input=t,
        mode=STRICT,
        params={"branch": BRANCH_NONE, "l_max": None, "hash": "sha256", "w": None},
        steps=[step],
        relation=None,
        search=None,
        verdict=INCONCLUSIVE,
        reason="no pipeline covers this congruence class of p",
    )


def certify_pps(
    t: SequenceType,
    mode: str = STRICT,
    ledger: AssumptionLedger | None = None,
    polys: dict[str, ClassPolyRecord] | None = None,
    fp_poly: ClassPolyRecord | None = None,
    ep_poly: ClassPolyRecord | None = None,
    l_max: int = DEFAULT_L_MAX,
    w: int | None = None,
) -> Certificate:
    """Certify a PPS type, dispatching on the congruence class of p."""
    if t.family != PPS:
        raise ValueError("certify_pps takes PPS types")
    if t.p % 4 == 3:
        return certify_pps_3mod4(t, mode=mode, ledger=ledger, polys=polys, l_max=l_max, w=w)
    if t.p % 8 == 5:
        return certify_pps_5mod8(t, fp_poly=fp_poly, ep_poly=ep_poly, polys=polys)
    return _unsupported_certificate(t)


def certify_paps(
    t: SequenceType,
    mode: str = STRICT,
    ledger: AssumptionLedger | None = None,
    polys: dict[str, ClassPolyRecord] | None = None,
    fp_poly: ClassPolyRecord | None = None,
    ep_poly: ClassPolyRecord | None = None,
    l_max: int = DEFAULT_L_MAX,
    w: int | None = None,
) -> Certificate:
    """Certify a PAPS type, dispatching on the congruence class of p."""
    if t.family != PAPS:
        raise ValueError("certify_paps takes PAPS types")
    if t.p % 4 == 3:
        return certify_pps_3mod4(t, mode=mode, ledger=ledger, polys=polys, l_max=l_max, w=w)
    if t.p % 8 == 5:
        return certify_pps_5mod8(t, fp_poly=fp_poly, ep_poly=ep_poly, polys=polys)
    return _unsupported_certificate(t)


def qp_test(
    p: int,
    q: int,
    fp_poly: ClassPolyRecord | None = None,
    ep_poly: ClassPolyRecord | None = None,
    polys: dict[str, ClassPolyRecord] | None = None,
) -> Certificate:
    """Membership test of q in the qualifying prime set for p = 5 mod 8.

    Runs the 5 mod 8 pipeline on the canonical type [p, p*q]; NON_EXISTENT
    means q is in the set.
    """
    t = SequenceType(family=PPS, p=p, a=1, q=q, l=1, nprime=1)
    return certify_pps_5mod8(t, fp_poly=fp_poly, ep_poly=ep_poly, polys=polys)


def density_bound(p: int, h_f: int, h_e: int) -> Fraction:
    """Exact lower bound for the density of qualifying primes, p = 5 mod 8."""
    if p % 8 != 5 or not is_prime(p):
        raise ValueError("p must be a prime congruent to 5 mod 8")
    if h_f < 1 or h_e < 1:
        raise ValueError("class numbers are positive")
    return Fraction(euler_phi((p - 1) // 4), p - 1) * (Fraction(1, h_f) - Fraction(1, h_e))


# ---------------------------------------------------------------------------
# verification


def _records_from_cert(cert: Certificate, step_name: str) -> ClassPolyRecord | None:
    for step in cert.steps:
        if step.name == step_name and "record" in step.evidence:
            return ClassPolyRecord.from_fields(step.evidence["record"])
    return None


def _step_evidence(cert: Certificate, step_name: str, key: str):
    for step in cert.steps:
        if step.name == step_name and key in step.evidence:
            return step.evidence[key]
    return None


def _recertify(cert: Certificate) -> Certificate:
    """Re-run the pipeline hermetically from data embedded in the certificate."""
    t = cert.input
    branch = cert.params.get("branch")
    if branch == BRANCH_3MOD4:
        record = _records_from_cert(cert, "class_poly_available")
        polys = {} if record is None else {record.label: record}
        ledger = AssumptionLedger.empty()
        if cert.relation and "ledger" in cert.relation:
            f = _step_evidence(cert, "order_odd", "f")
            if f is None:
                raise ValueError("certificate carries a ledger block without an order step")
            ledger = AssumptionLedger(
                entries=(
                    LedgerEntry(
                        p=t.p,
                        f=int(f),
                        order=int(cert.relation["ledger"]["order"]),
                        provenance=str(cert.relation["ledger"]["provenance"]),
                    ),
                )
            )
        return certify_pps_3mod4(
            t,
            mode=cert.mode,
            ledger=ledger,
            polys=polys,
            l_max=int(cert.params["l_max"]),
            w=cert.params.get("w"),
        )
    if branch == BRANCH_5MOD8:
        fp = _records_from_cert(cert, "quadratic_poly_available")
        ep = _records_from_cert(cert, "quartic_poly_available")
        return certify_pps_5mod8(t, fp_poly=fp, ep_poly=ep, polys={})
    if branch == BRANCH_NONE:
        return _unsupported_certificate(t)
    raise ValueError(f"unknown certificate branch {branch!r}")


def _replay_witnesses(cert: Certificate) -> bool:
    if cert.search is None:
        return True
    if cert.relation is None:
        return False
    carried = {entry["modulus"]: tuple(entry["coeffs"]) for entry in cert.relation["carried"]}
    for block in cert.search:
        n = block["modulus"]
        coeffs = carried.get(n)
        if coeffs is None:
            return False
        for line in block["lines"]:
            l, witness = line["l"], line["witness"]
            if line["solvable"]:
                if witness is None or len(witness) != len(coeffs):
                    return False
                if any(abs(e) > l or (e - l) % 2 for e in witness):
                    return False
                if sum(e * c for e, c in zip(witness, coeffs)) % n:
                    return False
            else:
                if witness is not None:
                    return False
                if solvable(coeffs, n, l) is not None:
                    return False
    return True


def _replay_relation(cert: Certificate) -> bool:
    if cert.relation is None:
        return True
    t = cert.input
    w = cert.params.get("w")
    f = None
    for step in cert.steps:
        if step.name == "order_odd":
            f = int(step.evidence["f"])
    if f is None:
        return False
    ctx = FieldContext(p=t.p, f=f, w=w)
    reduced = reduce_by_conjugation(build_relation_matrix(ctx))
    for entry in cert.relation["carried"]:
        n, coeffs = entry["modulus"], entry["coeffs"]
        if len(coeffs) != ctx.u:
            return False
        for row in reduced:
            if sum(r * c for r, c in zip(row, coeffs)) % n:
                return False
    basis_rows = None
    for step in cert.steps:
        if step.name == "hnf" and "basis" in step.evidence:
            basis_rows = tuple(tuple(int(x) for x in r) for r in step.evidence["basis"])
    if basis_rows is None:
        return False
    return verify_hnf(reduced, HnfBasis(basis=basis_rows))


def verify_certificate(cert) -> bool:
    """Full replay: re-run every recorded step and compare byte for byte.

    Also independently re-checks the lattice basis, the relation
    annihilation, every YES witness and every NO line, so any tampered
    field is rejected.
    """
    try:
        if isinstance(cert, str):
            cert = Certificate.from_json(cert)
        elif isinstance(cert, dict):
            cert = Certificate.from_dict(cert)
        if not isinstance(cert, Certificate):
            return False
        recomputed = _recertify(cert)
        if recomputed.to_dict() != cert.to_dict():
            return False
        if not _replay_relation(cert):
            return False
        if not _replay_witnesses(cert):
            return False
        return True
    except Exception:
        return False
