"""Instance-level replay of the stochastic-matrix derivation for a circulant
Hadamard matrix ``H`` of order ``n = 4h^2``.

Every displayed identity is evaluated exactly on concrete circulants:

    acheS      H   = 2h(2h+1) S   - J
    acheStar   H^* = 2h(2h+1) S^* - J
    defH       n I = H H^*
    SJ, SstarJ S J = J,  S^* J = J
    JJ         J^2 = n J
    C1         4h^2 I = 4h^2 (2h+1)^2 S S^* - 2h(2h+1)(S + S^*) J + 4h^2 J
    C2         4h I   = 4h (2h+1)^2 S S^* - 4(2h+1) J + 4h J
    C3         C2 reduced entrywise modulo h, claimed to read 0 = -4J (mod h)
    C4, C5     h | 4, and h = 1

The modular step is split in two verdicts: whether ``4h(2h+1)^2 S S^*`` has
integer entries at all (``C3-integrality``) and, if so, what the reduction
gives (``C3-congruence``).  The auditor records verdicts only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .circulant import Circulant, circ, constant, conj_transpose, format_fraction, mul
from .hadamard import PreconditionError, _order_to_h, build_S, is_hadamard, normalize_sign, sign_vector

__all__ = [
    "STEP_IDS",
    "VERDICTS",
    "AuditStep",
    "AuditReport",
    "AuditError",
    "check_reconstruction",
    "check_sj",
    "check_jj",
    "check_def_h",
    "check_c1",
    "check_c2",
    "check_modular_step",
    "full_audit",
    "audit_what_if",
    "AUDIT_REPORT_SCHEMA",
]

STEP_IDS = (
    "acheS", "acheStar", "defH", "SJ", "SstarJ", "JJ",
    "C1", "C2", "C3-integrality", "C3-congruence", "C4", "C5",
)
VERDICTS = ("holds-exactly", "integrality-satisfied", "integrality-violated", "fails")
MODES = ("strict", "extended")


class AuditError(PreconditionError):
    pass


@dataclass(frozen=True)
class AuditStep:
    step_id: str
    verdict: str
    witness: Optional[dict] = None

    def __post_init__(self):
        if self.step_id not in STEP_IDS:
            raise ValueError(f"unknown step id {self.step_id!r}")
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.verdict in ("fails", "integrality-violated") and self.witness is None:
            raise ValueError(f"verdict {self.verdict!r} needs a witness")

    @property
    def ok(self) -> bool:
        return self.verdict in ("holds-exactly", "integrality-satisfied")

    def as_dict(self) -> dict:
        d = {"step_id": self.step_id, "verdict": self.verdict}
        if self.witness is not None:
            d["witness"] = self.witness
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "AuditStep":
        return cls(d["step_id"], d["verdict"], d.get("witness"))


@dataclass(frozen=True)
class AuditReport:
    input_row: Optional[tuple]
    h: int
    steps: tuple
    conclusion: str
    mode: str = "strict"

    def step(self, step_id: str) -> AuditStep:
        for s in self.steps:
            if s.step_id == step_id:
                return s
        raise KeyError(step_id)

    def as_dict(self) -> dict:
        return {
            "input_row": None if self.input_row is None else list(self.input_row),
            "h": self.h,
            "mode": self.mode,
            "steps": [s.as_dict() for s in self.steps],
            "conclusion": self.conclusion,
        }

    def to_json(self, indent: Optional[int] = None) -> str:
        return json.dumps(self.as_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "AuditReport":
        row = d.get("input_row")
        return cls(
            input_row=None if row is None else tuple(row),
            h=d["h"],
            steps=tuple(AuditStep.from_dict(s) for s in d["steps"]),
            conclusion=d["conclusion"],
            mode=d.get("mode", "strict"),
        )

    @classmethod
    def from_json(cls, text: str) -> "AuditReport":
        return cls.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# setup


@dataclass(frozen=True)
class _Instance:
    """Concrete data the chain is evaluated on.

    ``t`` is the rational parameter with ``n = 4 t^2`` used inside the
    identities; ``modulus`` is the integer the reduction step works with.
    They coincide (``t = h``) except at order 1, where ``t = 1/2`` and the
    reduction degenerates to modulus 1.
    """

    H: Circulant
    S: Circulant
    t: Fraction
    modulus: int
    n: int
    row: Optional[tuple] = None
    normalized: Optional[tuple] = None


def _instance(row: Sequence[int], gate: bool = True, h: Optional[int] = None) -> _Instance:
    row = sign_vector(row)
    n = len(row)
    if gate:
        norm = normalize_sign(row)
        if not is_hadamard(norm):
            raise AuditError(f"row {row} is not a circulant Hadamard row")
        S = build_S(norm)
        if n == 1:
            return _Instance(circ(norm), S, Fraction(1, 2), 1, n, row, norm)
        hh = _order_to_h(n)
        return _Instance(circ(norm), S, Fraction(hh), hh, n, row, norm)
    # ungated: used to push non-Hadamard rows through the chain deliberately
    if h is None:
        h = _order_to_h(n)
        if h is None:
            raise AuditError(f"order {n} is not 4h^2; pass h explicitly")
    t = Fraction(h)
    H = circ(row)
    S = (H + constant("all_ones", n)) / (2 * t * (2 * t + 1))
    return _Instance(H, S, t, int(h), n, row, row)


def _compare(step_id: str, lhs: Circulant, rhs: Circulant) -> AuditStep:
    if lhs == rhs:
        return AuditStep(step_id, "holds-exactly")
    # both sides circulant: the first mismatch in row 0 is the first mismatch overall
    for j, (a, b) in enumerate(zip(lhs.first_row, rhs.first_row)):
        if a != b:
            return AuditStep(
                step_id,
                "fails",
                {"position": [0, j], "lhs": format_fraction(a), "rhs": format_fraction(b)},
            )
    raise AssertionError("unequal circulants with equal first rows")


# ---------------------------------------------------------------------------
# individual steps on an instance


def _reconstruction(inst: _Instance, transposed: bool) -> AuditStep:
    J = constant("all_ones", inst.n)
    c = 2 * inst.t * (2 * inst.t + 1)
    if transposed:
        return _compare("acheStar", conj_transpose(inst.H), c * conj_transpose(inst.S) - J)
    return _compare("acheS", inst.H, c * inst.S - J)


def _def_h(inst: _Instance) -> AuditStep:
    return _compare("defH", inst.n * constant("identity", inst.n), mul(inst.H, conj_transpose(inst.H)))


def _sj(inst: _Instance, starred: bool) -> AuditStep:
    J = constant("all_ones", inst.n)
    S = conj_transpose(inst.S) if starred else inst.S
    return _compare("SstarJ" if starred else "SJ", mul(S, J), J)


def _jj(n: int) -> AuditStep:
    J = constant("all_ones", n)
    return _compare("JJ", mul(J, J), n * J)


def _c1(inst: _Instance) -> AuditStep:
    t, n = inst.t, inst.n
    I, J = constant("identity", n), constant("all_ones", n)
    S, Ss = inst.S, conj_transpose(inst.S)
    rhs = (
        4 * t * t * (2 * t + 1) ** 2 * mul(S, Ss)
        - 2 * t * (2 * t + 1) * mul(S + Ss, J)
        + 4 * t * t * J
    )
    return _compare("C1", 4 * t * t * I, rhs)


def _c2_sides(inst: _Instance):
    t, n = inst.t, inst.n
    I, J = constant("identity", n), constant("all_ones", n)
    M = 4 * t * (2 * t + 1) ** 2 * mul(inst.S, conj_transpose(inst.S))
    lhs = 4 * t * I
    rhs = M - 4 * (2 * t + 1) * J + 4 * t * J
    return lhs, rhs, M


def _c2(inst: _Instance) -> AuditStep:
    lhs, rhs, _ = _c2_sides(inst)
    return _compare("C2", lhs, rhs)


def _residue(x: Fraction, m: int, mode: str) -> Optional[int]:
    """x mod m for integers; in extended mode also p/q with gcd(q, m) = 1."""
    if x.denominator == 1:
        return x.numerator % m
    if mode == "extended":
        try:
            return x.numerator * pow(x.denominator, -1, m) % m
        except ValueError:
            return None
    return None


def _modular(inst: _Instance, mode: str) -> list:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    m = inst.modulus
    lhs, rhs, M = _c2_sides(inst)
    steps = []

    bad = None
    for j, x in enumerate(M.first_row):
        if _residue(x, m, mode) is None:
            bad = {"position": [0, j], "value": format_fraction(x), "modulus": m, "mode": mode}
            break
    if bad is None:
        steps.append(AuditStep("C3-integrality", "integrality-satisfied"))
    else:
        steps.append(AuditStep("C3-integrality", "integrality-violated", bad))

    if bad is not None:
        steps.append(AuditStep(
            "C3-congruence", "integrality-violated",
            dict(bad, reason="reduction modulo h undefined for this entry"),
        ))
    else:
        # the displayed congruence: lhs reduces to 0 and rhs reduces to -4J
        witness = None
        for j in range(inst.n):
            l_res = _residue(lhs.first_row[j], m, mode)
            r_res = _residue(rhs.first_row[j], m, mode)
            target = (-4) % m
            if l_res is None or r_res is None:
                witness = {"position": [0, j], "reason": "side of C2 not reducible modulo h",
                           "lhs": format_fraction(lhs.first_row[j]),
                           "rhs": format_fraction(rhs.first_row[j]), "modulus": m}
                break
            if l_res != 0 or r_res != target:
                witness = {"position": [0, j], "lhs_mod_h": l_res, "rhs_mod_h": r_res,
                           "expected_lhs": 0, "expected_rhs": target, "modulus": m}
                break
        steps.append(AuditStep("C3-congruence", "holds-exactly" if witness is None else "fails", witness))

    if 4 % m == 0:
        steps.append(AuditStep("C4", "holds-exactly"))
    else:
        steps.append(AuditStep("C4", "fails", {"h": m, "4 mod h": 4 % m}))
    if m == 1:
        steps.append(AuditStep("C5", "holds-exactly"))
    else:
        steps.append(AuditStep("C5", "fails", {"h": m}))
    return steps


def _conclusion(steps) -> str:
    tally = {}
    for s in steps:
        tally[s.verdict] = tally.get(s.verdict, 0) + 1
    parts = ", ".join(f"{tally[v]} {v}" for v in VERDICTS if v in tally)
    failed = [s.step_id for s in steps if not s.ok]
    tail = "; no step failed" if not failed else "; not satisfied: " + ", ".join(failed)
    return f"{len(steps)} steps recorded: {parts}{tail}"


def _chain(inst: _Instance, mode: str) -> list:
    return [
        _reconstruction(inst, False),
        _reconstruction(inst, True),
        _def_h(inst),
        _sj(inst, False),
        _sj(inst, True),
        _jj(inst.n),
        _c1(inst),
        _c2(inst),
        *_modular(inst, mode),
    ]


# ---------------------------------------------------------------------------
# public per-step API on rows


def check_reconstruction(row, transposed: bool = False, *, gate: bool = True, h: Optional[int] = None) -> AuditStep:
    """Check ``H = 2h(2h+1) S - J`` (or its transposed form with ``transposed=True``)."""
    return _reconstruction(_instance(row, gate, h), transposed)


def check_def_h(row, *, gate: bool = True, h: Optional[int] = None) -> AuditStep:
    return _def_h(_instance(row, gate, h))


def check_sj(row, starred: bool = False, *, gate: bool = True, h: Optional[int] = None) -> AuditStep:
    return _sj(_instance(row, gate, h), starred)


def check_jj(n: int) -> AuditStep:
    return _jj(n)


def check_c1(row, *, gate: bool = True, h: Optional[int] = None) -> AuditStep:
    return _c1(_instance(row, gate, h))


def check_c2(row, *, gate: bool = True, h: Optional[int] = None) -> AuditStep:
    return _c2(_instance(row, gate, h))


def check_modular_step(row, mode: str = "strict", *, gate: bool = True, h: Optional[int] = None) -> list:
    """Verdicts for C3-integrality, C3-congruence, C4 and C5 (in that order)."""
    return _modular(_instance(row, gate, h), mode)


def full_audit(row, mode: str = "strict") -> AuditReport:
    """Run every step in order on a circulant Hadamard row (sign is normalized first)."""
    inst = _instance(row)
    steps = tuple(_chain(inst, mode))
    return AuditReport(input_row=inst.row, h=inst.modulus, steps=steps, conclusion=_conclusion(steps), mode=mode)


def audit_what_if(S: Circulant, h: int, H: Optional[Circulant] = None, mode: str = "strict") -> AuditReport:
    """Run the chain on a supplied rational circulant ``S`` with a declared ``h``.

    ``H`` defaults to ``2h(2h+1) S - J``.  No precondition is checked; this is
    the hook for exercising the modular step at ``h > 1``.
    """
    if not isinstance(h, int) or h < 1:
        raise ValueError(f"h must be a positive integer, got {h!r}")
    n = S.order
    t = Fraction(h)
    if H is None:
        H = 2 * t * (2 * t + 1) * S - constant("all_ones", n)
    elif H.order != n:
        raise ValueError("H and S must have the same order")
    inst = _Instance(H, S, t, h, n)
    steps = tuple(_chain(inst, mode))
    return AuditReport(input_row=None, h=h, steps=steps, conclusion=_conclusion(steps), mode=mode)


_WITNESS = {"type": "object"}

AUDIT_REPORT_SCHEMA = {
    "type": "object",
    "required": ["input_row", "h", "steps", "conclusion"],
    "properties": {
        "input_row": {"anyOf": [{"type": "null"}, {"type": "array", "items": {"enum": [-1, 1]}, "minItems": 1}]},
        "h": {"type": "integer", "minimum": 1},
        "mode": {"enum": list(MODES)},
        "conclusion": {"type": "string"},
        "steps": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["step_id", "verdict"],
                "properties": {
                    "step_id": {"enum": list(STEP_IDS)},
                    "verdict": {"enum": list(VERDICTS)},
                    "witness": _WITNESS,
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}
