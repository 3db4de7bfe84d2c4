"""JSON file formats. Scalars are strings in the exact text grammar
everywhere; no decimal approximations.

Constraint files name constraints (explicit tables or builtin references);
frame files reference constraints by name and may embed their own
constraint section. Certificates embed full tables so they can be
re-checked without any other input.
"""

from __future__ import annotations

import json
from typing import Mapping, Optional, Sequence

from .classifier import (
    Classification,
    HardnessWitness,
    ReductionSample,
)
from .constraints import Constraint, builtin
from .errors import InputError
from .frames import ConstraintFrame, FrameAtom
from .gadgets import Derivation, Gadget, GadgetStep
from .membership import DistinctiveList, FactorAtom, FactorList
from .pipeline import ReductionResult
from .scalars import format_scalar, parse_scalar

__all__ = [
    "parse_constraint_file",
    "parse_frame_file",
    "constraints_from_json",
    "frame_from_json",
    "constraint_to_json",
    "constraint_from_json",
    "factor_list_to_json",
    "factor_list_from_json",
    "distinctive_list_to_json",
    "gadget_to_json",
    "gadget_from_json",
    "derivation_to_json",
    "derivation_from_json",
    "embedded_frame_to_json",
    "embedded_frame_from_json",
    "reduction_to_json",
    "classification_to_json",
    "classification_from_json",
]

_BUILTINS = {"EQ", "OR", "NAND", "XOR", "Implies", "Delta0", "Delta1"}


def _require(obj: Mapping, key: str, where: str):
    if key not in obj:
        raise InputError(f"{where}: missing field {key!r}")
    return obj[key]


def constraint_to_json(c: Constraint) -> dict:
    return {"arity": c.arity, "table": [format_scalar(v) for v in c.table]}


def constraint_from_json(obj: Mapping, where: str = "constraint") -> Constraint:
    arity = _require(obj, "arity", where)
    table = _require(obj, "table", where)
    if not isinstance(arity, int) or arity < 0:
        raise InputError(f"{where}: arity must be a non-negative integer")
    if not isinstance(table, list) or len(table) != 1 << arity:
        raise InputError(
            f"{where}: table must list exactly 2^{arity} scalars, got {len(table)}"
        )
    return Constraint(arity, [parse_scalar(s) for s in table])


def constraints_from_json(obj: Mapping) -> list[tuple[str, Constraint]]:
    entries = _require(obj, "constraints", "constraint file")
    if not isinstance(entries, list):
        raise InputError("constraint file: 'constraints' must be a list")
    out: list[tuple[str, Constraint]] = []
    seen: set[str] = set()
    for i, entry in enumerate(entries):
        where = f"constraint #{i}"
        name = _require(entry, "name", where)
        if not isinstance(name, str) or not name:
            raise InputError(f"{where}: name must be a non-empty string")
        if name in seen:
            raise InputError(f"{where}: duplicate name {name!r}")
        seen.add(name)
        if "builtin" in entry:
            ref = entry["builtin"]
            if ref not in _BUILTINS:
                raise InputError(f"{where}: unknown builtin {ref!r}")
            arity = _require(entry, "arity", where)
            c = builtin(ref, arity)
        else:
            c = constraint_from_json(entry, where=where)
        out.append((name, c))
    return out


def parse_constraint_file(path: str) -> list[tuple[str, Constraint]]:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON: {e}") from e
    return constraints_from_json(obj)


def frame_from_json(
    obj: Mapping, constraints: Optional[Mapping[str, Constraint]] = None
) -> ConstraintFrame:
    named: dict[str, Constraint] = dict(constraints or {})
    if "constraints" in obj:
        for name, c in constraints_from_json(obj):
            named.setdefault(name, c)
    variables = _require(obj, "variables", "frame")
    atoms_json = _require(obj, "atoms", "frame")
    atoms = []
    for i, entry in enumerate(atoms_json):
        where = f"frame atom #{i}"
        name = _require(entry, "constraint", where)
        if name not in named:
            raise InputError(f"{where}: unknown constraint {name!r}")
        vars_ = _require(entry, "vars", where)
        atoms.append(FrameAtom(name, named[name], tuple(vars_)))
    return ConstraintFrame(variables, atoms)


def parse_frame_file(
    path: str, constraints: Optional[Mapping[str, Constraint]] = None
) -> ConstraintFrame:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON: {e}") from e
    return frame_from_json(obj, constraints)


# -- witnesses -----------------------------------------------------------------


def _factor_atom_to_json(a: FactorAtom) -> dict:
    out: dict = {"kind": a.kind, "vars": list(a.vars)}
    if a.weights is not None:
        out["weights"] = [format_scalar(w) for w in a.weights]
    if a.bit is not None:
        out["bit"] = a.bit
    return out


def _factor_atom_from_json(obj: Mapping) -> FactorAtom:
    weights = None
    if "weights" in obj:
        w = [parse_scalar(s) for s in obj["weights"]]
        weights = (w[0], w[1])
    return FactorAtom(
        _require(obj, "kind", "factor atom"),
        tuple(_require(obj, "vars", "factor atom")),
        weights=weights,
        bit=obj.get("bit"),
    )


def factor_list_to_json(fl: FactorList) -> dict:
    return {
        "scalar": format_scalar(fl.scalar),
        "atoms": [_factor_atom_to_json(a) for a in fl.atoms],
    }


def factor_list_from_json(obj: Mapping) -> FactorList:
    return FactorList(
        parse_scalar(_require(obj, "scalar", "factor list")),
        tuple(_factor_atom_from_json(a) for a in _require(obj, "atoms", "factor list")),
    )


def distinctive_list_to_json(dl: DistinctiveList) -> dict:
    return {
        "kind": dl.kind,
        "pins": [{"bit": b, "var": v} for b, v in sorted(dl.pins)],
        "clauses": [list(c) for c in sorted(dl.clauses)],
    }


# -- gadgets and derivations ---------------------------------------------------


def gadget_to_json(g: Gadget) -> dict:
    return {
        "arity": g.arity,
        "internals": g.internals,
        "scalar": format_scalar(g.scalar),
        "atoms": [
            {"vars": list(vs), **constraint_to_json(c)} for c, vs in g.atoms
        ],
    }


def gadget_from_json(obj: Mapping) -> Gadget:
    atoms = tuple(
        (constraint_from_json(a, where="gadget atom"), tuple(a["vars"]))
        for a in _require(obj, "atoms", "gadget")
    )
    return Gadget(
        _require(obj, "arity", "gadget"),
        _require(obj, "internals", "gadget"),
        atoms,
        parse_scalar(obj.get("scalar", "1")),
    )


def _step_to_json(s: GadgetStep) -> dict:
    return {
        "rule": s.rule,
        "budget": s.budget,
        "params": {k: str(v) for k, v in s.params.items()},
        "target": constraint_to_json(s.target),
        "gadget": gadget_to_json(s.gadget),
    }


def _step_from_json(obj: Mapping) -> GadgetStep:
    return GadgetStep(
        _require(obj, "rule", "step"),
        gadget_from_json(_require(obj, "gadget", "step")),
        constraint_from_json(_require(obj, "target", "step")),
        budget=_require(obj, "budget", "step"),
        params=dict(obj.get("params", {})),
    )


def derivation_to_json(d: Derivation) -> dict:
    return {
        "target": constraint_to_json(d.target),
        "scalar": format_scalar(d.scalar),
        "steps": [_step_to_json(s) for s in d.steps],
        "gadget": gadget_to_json(d.gadget),
    }


def derivation_from_json(obj: Mapping) -> Derivation:
    """Deserialize without re-verifying; certificate checking re-derives
    every report from scratch."""
    target = constraint_from_json(_require(obj, "target", "derivation"))
    gadget = gadget_from_json(_require(obj, "gadget", "derivation"))
    scalar = parse_scalar(_require(obj, "scalar", "derivation"))
    steps = tuple(_step_from_json(s) for s in obj.get("steps", []))
    return Derivation(target, steps, gadget, scalar)


# -- frames with embedded tables (certificates, reduce output) -----------------


def embedded_frame_to_json(frame: ConstraintFrame) -> dict:
    return {
        "variables": list(frame.variables),
        "atoms": [
            {
                "label": a.label,
                "vars": list(a.vars),
                **constraint_to_json(a.constraint),
            }
            for a in frame.atoms
        ],
    }


def embedded_frame_from_json(obj: Mapping) -> ConstraintFrame:
    atoms = [
        FrameAtom(
            a.get("label", f"atom{i}"),
            constraint_from_json(a, where=f"embedded atom #{i}"),
            tuple(a["vars"]),
        )
        for i, a in enumerate(_require(obj, "atoms", "embedded frame"))
    ]
    return ConstraintFrame(_require(obj, "variables", "embedded frame"), atoms)


def reduction_to_json(r: ReductionResult) -> dict:
    return {
        "kappa": format_scalar(r.kappa),
        "frame": embedded_frame_to_json(r.frame),
        "trace": r.trace,
    }


def reduction_from_json(obj: Mapping) -> ReductionResult:
    return ReductionResult(
        embedded_frame_from_json(_require(obj, "frame", "reduction")),
        parse_scalar(_require(obj, "kappa", "reduction")),
        list(obj.get("trace", [])),
    )


# -- certificates --------------------------------------------------------------


def classification_to_json(c: Classification) -> dict:
    out: dict = {
        "verdict": c.verdict,
        "degree": c.degree,
        "constraints": [
            {"name": name, **constraint_to_json(f)} for name, f in c.constraints
        ],
    }
    if c.tractable_witnesses is not None:
        out["tractable_witnesses"] = {
            name: factor_list_to_json(w) for name, w in c.tractable_witnesses.items()
        }
    if c.hardness is not None:
        out["hardness"] = {
            "constraint": c.hardness.name,
            "derivations": {
                str(d): derivation_to_json(der)
                for d, der in sorted(c.hardness.derivations.items())
            },
            "samples": [
                {
                    "frame": embedded_frame_to_json(s.frame),
                    "reduction": reduction_to_json(s.result),
                    "original_value": format_scalar(s.original_value),
                    "reduced_value": format_scalar(s.reduced_value),
                }
                for s in c.hardness.samples
            ],
        }
    return out


def classification_from_json(obj: Mapping) -> Classification:
    constraints = [
        (e["name"], constraint_from_json(e, where=f"certificate constraint {e.get('name')}"))
        for e in _require(obj, "constraints", "certificate")
    ]
    witnesses = None
    if "tractable_witnesses" in obj:
        witnesses = {
            name: factor_list_from_json(w)
            for name, w in obj["tractable_witnesses"].items()
        }
    hardness = None
    if "hardness" in obj:
        h = obj["hardness"]
        name = _require(h, "constraint", "hardness witness")
        byname = dict(constraints)
        if name not in byname:
            raise InputError(f"hardness witness references unknown constraint {name!r}")
        samples = []
        for s in h.get("samples", []):
            samples.append(
                ReductionSample(
                    embedded_frame_from_json(_require(s, "frame", "sample")),
                    reduction_from_json(_require(s, "reduction", "sample")),
                    parse_scalar(_require(s, "original_value", "sample")),
                    parse_scalar(_require(s, "reduced_value", "sample")),
                )
            )
        hardness = HardnessWitness(
            name,
            byname[name],
            {
                int(d): derivation_from_json(der)
                for d, der in _require(h, "derivations", "hardness witness").items()
            },
            samples,
        )
    return Classification(
        _require(obj, "verdict", "certificate"),
        _require(obj, "degree", "certificate"),
        constraints,
        tractable_witnesses=witnesses,
        hardness=hardness,
    )
