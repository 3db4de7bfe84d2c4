"""The two-way classification: a constraint set is tractable exactly when
every member factors over unaries, binary equality and binary
disequality; otherwise any failing member yields equality gadgets that
certify hardness by reduction from the unbounded-degree problem.

Certificates carry re-checkable evidence only: exact factorizations for
the tractable side; per-step gadget realizations (finite arities 2..5 of
the uniform family) plus sample degree-3 reductions for the hard side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .constraints import Constraint, builtin
from .errors import InputError, PreconditionError
from .evaluators import DEFAULT_CAP, eval_csp_bruteforce, eval_holant_bruteforce
from .frames import ConstraintFrame, FrameAtom, degree2_to_holant, holant_to_degree2
from .gadgets import Derivation, verify_realization
from .membership import FactorList, ed_factorization
from .pipeline import (
    ReductionResult,
    derivation_cache,
    reduce_to_degree3,
    verify_reduction,
)
from .scalars import GaussianRational

__all__ = [
    "Classification",
    "HardnessWitness",
    "ReductionSample",
    "LowDegreeReport",
    "GADGET_ARITIES",
    "classify_set",
    "low_degree_verdict",
    "check_certificate",
    "hardness_sample_frames",
]

GADGET_ARITIES = (2, 3, 4, 5)


@dataclass
class ReductionSample:
    frame: ConstraintFrame
    result: ReductionResult
    original_value: GaussianRational
    reduced_value: GaussianRational


@dataclass
class HardnessWitness:
    name: str
    constraint: Constraint
    derivations: dict[int, Derivation]
    samples: list[ReductionSample] = field(default_factory=list)


@dataclass
class Classification:
    verdict: str  # "tractable" | "hard"
    degree: int
    constraints: list[tuple[str, Constraint]]
    tractable_witnesses: Optional[dict[str, FactorList]] = None
    hardness: Optional[HardnessWitness] = None


@dataclass
class LowDegreeReport:
    degree: int
    verdict: str
    detail: str
    roundtrip_checked: bool = False


def hardness_sample_frames(name: str, f: Constraint) -> list[ConstraintFrame]:
    """Small frames over the hard constraint used as reduction evidence: a
    degree-2 frame always, plus a degree-3 frame when f is binary (so the
    reduced instance stays within brute-force reach)."""
    k = f.arity
    shared = "s"
    frames = []
    vs1 = [shared] + [f"a{i}" for i in range(k - 1)]
    vs2 = [shared] + [f"b{i}" for i in range(k - 1)]
    frames.append(
        ConstraintFrame(
            list(dict.fromkeys(vs1 + vs2)),
            [
                FrameAtom(name, f, tuple(vs1)),
                FrameAtom(name, f, tuple(vs2)),
            ],
        )
    )
    if k == 2:
        frames.append(
            ConstraintFrame(
                ["s", "a0", "b0", "c0"],
                [
                    FrameAtom(name, f, ("s", "a0")),
                    FrameAtom(name, f, ("s", "b0")),
                    FrameAtom(name, f, ("c0", "s")),
                ],
            )
        )
    return frames


def classify_set(
    constraints: Sequence[tuple[str, Constraint]],
    degree_bound: int = 3,
    sample_cap: int = DEFAULT_CAP,
) -> Classification:
    """Tractable iff every member has an exact factorization witness;
    otherwise hard, certified through the first failing member."""
    if degree_bound < 3:
        raise PreconditionError(
            "classification applies to degree >= 3; use low_degree_verdict"
        )
    names = [n for n, _ in constraints]
    if len(set(names)) != len(names):
        raise InputError("duplicate constraint names")
    witnesses: dict[str, FactorList] = {}
    failing: Optional[tuple[str, Constraint]] = None
    for name, f in constraints:
        w = ed_factorization(f)
        if w is None and failing is None:
            failing = (name, f)
        elif w is not None:
            witnesses[name] = w
    if failing is None:
        return Classification(
            "tractable", degree_bound, list(constraints), tractable_witnesses=witnesses
        )
    name, f = failing
    builder = derivation_cache(f)
    derivations = {d: builder(d) for d in GADGET_ARITIES}
    samples = []
    for frame in hardness_sample_frames(name, f):
        result = reduce_to_degree3(frame, f, builder)
        if len(result.frame.variables) <= sample_cap and len(frame.variables) <= sample_cap:
            original = eval_csp_bruteforce(frame, max_vars=sample_cap)
            reduced = eval_csp_bruteforce(result.frame, max_vars=sample_cap)
            samples.append(ReductionSample(frame, result, original, reduced))
    return Classification(
        "hard",
        degree_bound,
        list(constraints),
        hardness=HardnessWitness(name, f, derivations, samples),
    )


def low_degree_verdict(
    constraints: Sequence[tuple[str, Constraint]], degree_bound: int
) -> LowDegreeReport:
    """Degree 1: always polynomial time (full product formula). Degree 2:
    equivalent to the Holant problem over the same set with free unaries;
    the report carries a structural round-trip check of the translation."""
    if degree_bound not in (1, 2):
        raise PreconditionError("low-degree verdicts cover degree 1 and 2 only")
    if degree_bound == 1:
        return LowDegreeReport(
            1,
            "polynomial-time",
            "degree-1 instances factor into independent atoms; see eval_degree1",
        )
    checked = False
    if constraints:
        name, f = constraints[0]
        vs = [f"x{i}" for i in range(f.arity)]
        frame = ConstraintFrame(vs, [FrameAtom(name, f, tuple(vs))])
        grid = degree2_to_holant(frame)
        back = holant_to_degree2(grid)
        v0 = eval_csp_bruteforce(frame)
        v1 = eval_holant_bruteforce(grid)
        v2 = eval_csp_bruteforce(back)
        checked = v0 == v1 == v2
    return LowDegreeReport(
        2,
        "holant-equivalent",
        "degree-2 instances translate value-exactly to and from Holant instances "
        "over the same constraints with free unaries",
        roundtrip_checked=checked,
    )


def check_certificate(
    classification: Classification,
    sample_frames: Optional[Sequence[ConstraintFrame]] = None,
    max_vars: int = DEFAULT_CAP,
) -> bool:
    """Re-verify everything a certificate claims, by enumeration.

    Tractable: every constraint must have a witness that reproduces its
    table. Hard: every derivation step must realize its declared target
    (nonzero scalar, budget respected) using only the hard constraint,
    unaries and earlier step targets; the flattened gadget must realize
    the equality target at budget +1; sample reductions must preserve the
    value with the recorded kappa.
    """
    byname = dict(classification.constraints)
    if classification.verdict == "tractable":
        if classification.tractable_witnesses is None:
            return False
        for name, f in classification.constraints:
            w = classification.tractable_witnesses.get(name)
            if w is None or not w.reproduces(f):
                return False
        return True
    if classification.verdict != "hard" or classification.hardness is None:
        return False
    hw = classification.hardness
    if byname.get(hw.name) != hw.constraint:
        return False
    if ed_factorization(hw.constraint) is not None:
        return False
    for d, der in hw.derivations.items():
        if der.target != builtin("EQ", d):
            return False
        allowed: list[Constraint] = [hw.constraint]
        for step in der.steps:
            for c, _ in step.gadget.atoms:
                if c.arity >= 2 and c != hw.constraint and c not in allowed:
                    return False
            rep = verify_realization(step.gadget, step.target, budget=step.budget)
            if not rep.verdict:
                return False
            allowed.append(step.target)
        for c, _ in der.gadget.atoms:
            if c.arity >= 2 and c != hw.constraint:
                return False
        rep = verify_realization(der.gadget, der.target, budget=1)
        if not rep.verdict or rep.scalar_found != der.scalar:
            return False
    for sample in hw.samples:
        if len(sample.frame.variables) > max_vars:
            continue
        if len(sample.result.frame.variables) > max_vars:
            continue
        original = eval_csp_bruteforce(sample.frame, max_vars=max_vars)
        reduced = eval_csp_bruteforce(sample.result.frame, max_vars=max_vars)
        if original != sample.original_value or reduced != sample.reduced_value:
            return False
        if reduced != sample.result.kappa * original:
            return False
    if sample_frames:
        builder = derivation_cache(hw.constraint)
        for frame in sample_frames:
            result = reduce_to_degree3(frame, hw.constraint, builder)
            if not verify_reduction(result, frame, max_vars=max_vars):
                return False
    return True
